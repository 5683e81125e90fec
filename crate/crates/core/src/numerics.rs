//! Working-precision context, theta-product kernels, reproducible generic
//! parameter sampling, and residual measurement.
//!
//! Everything numeric in the crate is funnelled through [`NumericContext`]:
//! it fixes the decimal working precision, the pass tolerance for identity
//! checks, the master seed, and the genericity margin used when drawing
//! random parameter points.  Random streams are split per label (for
//! instance per check id), so concurrent checks are reproducible
//! independently of execution order.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rug::ops::Pow;
use rug::Float;

use crate::error::{Error, Result};
use crate::mp::{bits_for_digits, MpComplex};

/// Run-time numeric configuration.
#[derive(Debug, Clone)]
pub struct NumericContext {
    /// Decimal digits of working precision (≥ 15).
    pub digits: u32,
    /// Pass tolerance for relative residuals (≥ 10^(10 − digits)).
    pub tol: f64,
    /// Master seed; per-use streams are derived from it and a label.
    pub seed: u64,
    /// Minimum log-metric distance from forbidden parameter cosets that a
    /// sampled point must clear (see [`sample_generic`]).
    pub genericity_margin: f64,
}

impl Default for NumericContext {
    fn default() -> Self {
        NumericContext { digits: 60, tol: 1e-30, seed: 0, genericity_margin: 1e-3 }
    }
}

impl NumericContext {
    pub fn new(digits: u32, tol: f64, seed: u64) -> Result<Self> {
        let ctx = NumericContext { digits, tol, seed, ..NumericContext::default() };
        ctx.validate()?;
        Ok(ctx)
    }

    /// Digits with the default tolerance scaling: tol = 10^(−digits/2).
    pub fn with_digits(digits: u32) -> Result<Self> {
        let tol: f64 = format!("1e-{}", digits / 2).parse().unwrap();
        NumericContext::new(digits, tol, 0)
    }

    pub fn validate(&self) -> Result<()> {
        if self.digits < 15 {
            return Err(Error::BadParameter(format!(
                "working precision must be at least 15 digits, got {}",
                self.digits
            )));
        }
        // Below ~10 digits of headroom the residual of a true identity is
        // indistinguishable from rounding noise, so such a tolerance could
        // never be met honestly.
        let floor = 10f64.powi(10 - self.digits.min(300) as i32);
        if !(self.tol >= floor) {
            return Err(Error::BadParameter(format!(
                "tolerance {:.3e} below the honest floor {:.3e} for {} digits",
                self.tol, floor, self.digits
            )));
        }
        if !(self.genericity_margin > 0.0) {
            return Err(Error::BadParameter("genericity margin must be positive".into()));
        }
        Ok(())
    }

    /// Binary precision corresponding to `digits`.
    pub fn prec(&self) -> u32 {
        bits_for_digits(self.digits)
    }

    /// 10^(−digits) at working precision (the relative-residual regulator).
    pub fn eps(&self) -> Float {
        pow10(self.prec(), -(self.digits as i32))
    }

    /// Deterministic per-label random stream.
    ///
    /// The stream depends only on (seed, label), never on how many draws
    /// other labels consumed, so checks can run in any order or in parallel.
    pub fn rng(&self, label: &str) -> ChaCha20Rng {
        let mut state = self.seed ^ fnv1a64(label.as_bytes());
        let mut key = [0u8; 32];
        for chunk in key.chunks_mut(8) {
            chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
        }
        ChaCha20Rng::from_seed(key)
    }
}

/// 10^k at binary precision `prec`.
pub fn pow10(prec: u32, k: i32) -> Float {
    Float::with_val(prec, Float::with_val(prec, 10u32).pow(k))
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

// ---------------------------------------------------------------------------
// Theta kernels
// ---------------------------------------------------------------------------

/// θ(x;p) = ∏_{k≥0} (1 − p^k x)(1 − p^{k+1}/x), truncated so the discarded
/// tail is below 10^(−digits−5) relative.  Requires |p| < 1 and x ≠ 0; at
/// p = 0 the value is exactly 1 − x.
pub fn theta(x: &MpComplex, p: &MpComplex, digits: u32) -> Result<MpComplex> {
    let prec = x.prec().max(p.prec());
    if x.is_zero() || !x.is_finite() {
        return Err(Error::BadParameter("theta argument must be finite and nonzero".into()));
    }
    let pabs = p.abs().to_f64();
    if !(pabs < 1.0) {
        return Err(Error::BadParameter(format!("theta nome must satisfy |p| < 1, got |p| = {pabs}")));
    }
    let one = MpComplex::one(prec);
    if p.is_zero() {
        return Ok(one.sub(x));
    }
    // Truncation index: smallest K with |p|^K · max(|x|, 1/|x|) < 10^(−digits−5);
    // one extra factor is kept beyond it for safety.
    let xabs = x.abs().to_f64();
    let scale = xabs.max(1.0 / xabs).max(1.0);
    let kmin = ((digits as f64 + 5.0 + scale.log10()) / -pabs.log10()).ceil();
    let kmax = if kmin.is_finite() && kmin > 0.0 { kmin as u32 } else { 1 };

    let mut acc = one.clone();
    let mut fwd = x.clone(); // p^k x
    let mut bwd = p.div(x); // p^{k+1} / x
    for _ in 0..=kmax {
        acc = acc.mul(&one.sub(&fwd)).mul(&one.sub(&bwd));
        fwd = fwd.mul(p);
        bwd = bwd.mul(p);
    }
    Ok(acc)
}

/// θ(x;q;p)_m = ∏_{0≤j<m} θ(q^j x; p).
pub fn theta_pochhammer(
    x: &MpComplex,
    q: &MpComplex,
    p: &MpComplex,
    m: u32,
    digits: u32,
) -> Result<MpComplex> {
    let prec = x.prec().max(p.prec()).max(q.prec());
    let mut acc = MpComplex::one(prec);
    let mut arg = x.clone();
    for _ in 0..m {
        acc = acc.mul(&theta(&arg, p, digits)?);
        arg = arg.mul(q);
    }
    Ok(acc)
}

/// ∏_i θ(x_i; p): several arguments before the nome multiply.
pub fn theta_prod(xs: &[MpComplex], p: &MpComplex, digits: u32) -> Result<MpComplex> {
    let prec = xs.iter().map(|x| x.prec()).chain([p.prec()]).max().unwrap();
    let mut acc = MpComplex::one(prec);
    for x in xs {
        acc = acc.mul(&theta(x, p, digits)?);
    }
    Ok(acc)
}

/// Symmetric relative residual |L − R| / (|L| + |R| + 10^(−digits)).
pub fn rel_residual(lhs: &MpComplex, rhs: &MpComplex, digits: u32) -> f64 {
    let prec = lhs.prec().max(rhs.prec());
    let diff = lhs.sub(rhs).abs();
    let scale = Float::with_val(prec, lhs.abs() + rhs.abs()) + pow10(prec, -(digits as i32));
    (diff / scale).to_f64()
}

// ---------------------------------------------------------------------------
// Parameter sets
// ---------------------------------------------------------------------------

/// A concrete parameter point: the nome `p`, the bases `q` and `t`, any
/// named auxiliary parameters, an attached rectangle (m, n), and a fixed
/// principal square root of `q` (so half-integer q-powers are unambiguous).
/// The working precision travels with the point.
#[derive(Debug, Clone)]
pub struct ParameterSet {
    pub digits: u32,
    pub prec: u32,
    pub p: MpComplex,
    pub q: MpComplex,
    pub t: MpComplex,
    named: BTreeMap<String, MpComplex>,
    pub m: u32,
    pub n: usize,
    q_half: MpComplex,
}

impl ParameterSet {
    pub fn from_values(
        digits: u32,
        p: MpComplex,
        q: MpComplex,
        t: MpComplex,
        named: Vec<(String, MpComplex)>,
        m: u32,
        n: usize,
    ) -> Result<Self> {
        if !(p.abs().to_f64() < 1.0) || !p.is_finite() {
            return Err(Error::BadParameter("need |p| < 1".into()));
        }
        for (name, v) in
            [("q", &q), ("t", &t)].into_iter().chain(named.iter().map(|(n, v)| (n.as_str(), v)))
        {
            if v.is_zero() || !v.is_finite() {
                return Err(Error::BadParameter(format!("parameter {name} must be finite and nonzero")));
            }
        }
        let q_half = q.sqrt();
        Ok(ParameterSet {
            digits,
            prec: bits_for_digits(digits),
            p,
            q_half,
            q,
            t,
            named: named.into_iter().collect(),
            m,
            n,
        })
    }

    /// Look up a named parameter; panics on a name the caller never set,
    /// since that is a programming error rather than a data error.
    pub fn get(&self, name: &str) -> &MpComplex {
        match name {
            "p" => &self.p,
            "q" => &self.q,
            "t" => &self.t,
            _ => self
                .named
                .get(name)
                .unwrap_or_else(|| panic!("parameter set has no entry named {name:?}")),
        }
    }

    pub fn has(&self, name: &str) -> bool {
        matches!(name, "p" | "q" | "t") || self.named.contains_key(name)
    }

    /// The fixed principal square root of q chosen at construction.
    pub fn q_half(&self) -> &MpComplex {
        &self.q_half
    }

    /// ∏ name^exp at full precision; names may include "p", "q", "t".
    pub fn monomial(&self, pairs: &[(&str, i64)]) -> MpComplex {
        let mut acc = MpComplex::one(self.prec);
        for &(name, e) in pairs {
            acc = acc.mul(&self.get(name).powi(e));
        }
        acc
    }

    /// Copy with one named parameter added or replaced.
    pub fn with_named(&self, name: &str, value: MpComplex) -> Self {
        let mut out = self.clone();
        out.named.insert(name.to_string(), value);
        out
    }

    /// Copy with a different attached rectangle.
    pub fn with_rectangle(&self, m: u32, n: usize) -> Self {
        let mut out = self.clone();
        out.m = m;
        out.n = n;
        out
    }

    /// Copy with new q and t (the principal square root of q is refreshed).
    pub fn with_bases(&self, q: MpComplex, t: MpComplex) -> Self {
        let mut out = self.clone();
        out.q_half = q.sqrt();
        out.q = q;
        out.t = t;
        out
    }

    /// Copy with q ↦ 1/t and t ↦ 1/q, the base change that accompanies
    /// conjugating the indexing partition.
    pub fn conjugate_bases(&self) -> Self {
        self.with_bases(self.t.recip(), self.q.recip())
    }

    pub fn named_entries(&self) -> impl Iterator<Item = (&str, &MpComplex)> {
        self.named.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Stable 16-hex-digit digest of the full parameter point.
    pub fn digest(&self) -> String {
        let mut payload = String::new();
        for (name, v) in [("p", &self.p), ("q", &self.q), ("t", &self.t)]
            .into_iter()
            .chain(self.named.iter().map(|(k, v)| (k.as_str(), v)))
        {
            let (re, im) = v.to_decimal_strings();
            payload.push_str(&format!("{name}={re},{im};"));
        }
        payload.push_str(&format!("m={};n={}", self.m, self.n));
        format!("{:016x}", fnv1a64(payload.as_bytes()))
    }
}

// ---------------------------------------------------------------------------
// Generic sampling
// ---------------------------------------------------------------------------

/// A multiplicative word in parameter names ("p", "q", "t" allowed).
pub type Monomial = Vec<(&'static str, i64)>;

/// One exact multiplicative relation ∏ name^exp = 1, solved for `solve_for`
/// (whose exponent in `product` must be ±1).
#[derive(Debug, Clone)]
pub struct Constraint {
    pub product: Monomial,
    pub solve_for: &'static str,
}

/// What to draw and what to reject.
///
/// Sampling draws `p`, then `q`, `t` and the listed `names` (in order), then
/// solves each constraint in order at full precision.  A draw is accepted
/// only if every monomial in `avoid` stays at least `genericity_margin` away
/// from the cyclic group ⟨p⟩ in the log metric — i.e. the identity being
/// checked is evaluated away from the parameter loci where its terms
/// degenerate.
#[derive(Debug, Clone, Default)]
pub struct SampleSpec {
    pub names: Vec<&'static str>,
    pub constraints: Vec<Constraint>,
    pub avoid: Vec<Monomial>,
    pub m: u32,
    pub n: usize,
}

impl SampleSpec {
    pub fn new(m: u32, n: usize) -> Self {
        SampleSpec { m, n, ..SampleSpec::default() }
    }

    pub fn names(mut self, ns: &[&'static str]) -> Self {
        self.names.extend_from_slice(ns);
        self
    }

    /// Add the relation ∏ product = 1, to be solved for `solve_for`.
    pub fn constraint(mut self, product: Monomial, solve_for: &'static str) -> Self {
        self.constraints.push(Constraint { product, solve_for });
        self
    }

    pub fn avoid(mut self, m: Monomial) -> Self {
        self.avoid.push(m);
        self
    }

    /// Screen base·q^j·t^i for all j, i in the given inclusive ranges.
    pub fn avoid_sweep(
        mut self,
        base: Monomial,
        q_range: (i64, i64),
        t_range: (i64, i64),
    ) -> Self {
        for j in q_range.0..=q_range.1 {
            for i in t_range.0..=t_range.1 {
                let mut m = base.clone();
                if j != 0 {
                    m.push(("q", j));
                }
                if i != 0 {
                    m.push(("t", i));
                }
                self.avoid.push(m);
            }
        }
        self
    }
}

/// Uniform modulus in [lo, hi], uniform argument, drawn at f64 resolution
/// and promoted — so the draw stream is independent of working precision.
pub fn draw_complex(rng: &mut ChaCha20Rng, prec: u32, lo: f64, hi: f64) -> MpComplex {
    let r = lo + (hi - lo) * rng.gen::<f64>();
    let a = std::f64::consts::TAU * rng.gen::<f64>();
    MpComplex::from_f64(prec, r * a.cos(), r * a.sin())
}

/// Log-metric distance from w to the nearest point of ⟨p⟩ = {p^k : k ∈ ℤ}.
fn coset_distance(w: (f64, f64), p: (f64, f64)) -> f64 {
    let wabs = w.0.hypot(w.1);
    let pabs = p.0.hypot(p.1);
    if !(wabs > 0.0) || !wabs.is_finite() {
        return 0.0;
    }
    let (lw, lp) = (wabs.ln(), pabs.ln());
    let (aw, ap) = (w.1.atan2(w.0), p.1.atan2(p.0));
    let k0 = (lw / lp).round();
    let mut best = f64::INFINITY;
    for dk in [-1.0, 0.0, 1.0] {
        let k = k0 + dk;
        let mut da = aw - k * ap;
        da = da.rem_euclid(std::f64::consts::TAU);
        if da > std::f64::consts::PI {
            da -= std::f64::consts::TAU;
        }
        best = best.min((lw - k * lp).hypot(da));
    }
    best
}

/// Draw a generic parameter point per `spec` (see [`SampleSpec`]).
///
/// Values are drawn at f64 resolution and promoted, so the stream of random
/// draws — hence the accepted point — is independent of working precision;
/// constraint solving then happens at full precision.  |p| is drawn in
/// [0.05, 0.3] and free parameters with modulus in [0.5, 2], both with
/// uniform argument.  Fails after 1000 rejected attempts.
pub fn sample_generic(
    ctx: &NumericContext,
    rng: &mut ChaCha20Rng,
    spec: &SampleSpec,
) -> Result<ParameterSet> {
    let prec = ctx.prec();
    let solved: Vec<&str> = spec.constraints.iter().map(|c| c.solve_for).collect();
    'attempt: for _ in 0..1000 {
        let p = draw_complex(rng, prec, 0.05, 0.3);
        let mut vals: BTreeMap<&str, MpComplex> = BTreeMap::new();
        vals.insert("p", p.clone());
        for name in ["q", "t"].into_iter().chain(spec.names.iter().copied()) {
            if solved.contains(&name) {
                continue;
            }
            vals.insert(name, draw_complex(rng, prec, 0.5, 2.0));
        }
        for c in &spec.constraints {
            let et = c
                .product
                .iter()
                .find(|(n, _)| *n == c.solve_for)
                .map(|&(_, e)| e)
                .expect("constraint product must mention its solve_for name");
            assert!(et == 1 || et == -1, "solve_for exponent must be ±1");
            let mut acc = MpComplex::one(prec);
            for &(name, e) in &c.product {
                if name == c.solve_for {
                    continue;
                }
                let v = vals
                    .get(name)
                    .unwrap_or_else(|| panic!("constraint uses undrawn parameter {name:?}"));
                acc = acc.mul(&v.powi(if et == 1 { -e } else { e }));
            }
            vals.insert(c.solve_for, acc);
        }
        // Genericity screen: q and t are always kept off ⟨p⟩; the caller
        // lists everything else the target identity needs to stay regular.
        let pf = p.to_f64_pair();
        let margin = ctx.genericity_margin;
        let unit_q: Monomial = vec![("q", 1)];
        let unit_t: Monomial = vec![("t", 1)];
        for mono in [&unit_q, &unit_t].into_iter().chain(spec.avoid.iter()) {
            let mut w = MpComplex::one(prec);
            for &(name, e) in mono {
                let v = vals
                    .get(name)
                    .unwrap_or_else(|| panic!("avoid monomial uses undrawn parameter {name:?}"));
                w = w.mul(&v.powi(e));
            }
            if coset_distance(w.to_f64_pair(), pf) < margin {
                continue 'attempt;
            }
        }
        let q = vals.remove("q").unwrap();
        let t = vals.remove("t").unwrap();
        vals.remove("p");
        let named = vals.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
        return ParameterSet::from_values(ctx.digits, p, q, t, named, spec.m, spec.n);
    }
    Err(Error::GenericityFailure(format!(
        "no sample cleared margin {} within 1000 attempts",
        ctx.genericity_margin
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> NumericContext {
        NumericContext::default()
    }

    #[test]
    fn context_validation() {
        assert!(NumericContext::new(60, 1e-30, 0).is_ok());
        assert!(NumericContext::new(14, 1e-2, 0).is_err());
        assert!(NumericContext::new(30, 1e-25, 0).is_err()); // below 10^(10-30)
        assert!(NumericContext::new(30, 1e-15, 0).is_ok());
        assert_eq!(NumericContext::with_digits(60).unwrap().tol, 1e-30);
    }

    #[test]
    fn rng_streams_are_label_split_and_reproducible() {
        let c = ctx();
        let mut a1 = c.rng("alpha");
        let mut a2 = c.rng("alpha");
        let mut b = c.rng("beta");
        let xs1: Vec<u64> = (0..4).map(|_| a1.gen()).collect();
        let xs2: Vec<u64> = (0..4).map(|_| a2.gen()).collect();
        let ys: Vec<u64> = (0..4).map(|_| b.gen()).collect();
        assert_eq!(xs1, xs2);
        assert_ne!(xs1, ys);
        let c2 = NumericContext { seed: 7, ..ctx() };
        let zs: Vec<u64> = {
            let mut r = c2.rng("alpha");
            (0..4).map(|_| r.gen()).collect()
        };
        assert_ne!(xs1, zs);
    }

    #[test]
    fn theta_at_zero_nome_is_linear() {
        let c = ctx();
        let prec = c.prec();
        let x = MpComplex::from_f64(prec, 0.7, -0.4);
        let v = theta(&x, &MpComplex::zero(prec), c.digits).unwrap();
        let want = MpComplex::one(prec).sub(&x);
        assert!(rel_residual(&v, &want, c.digits) == 0.0);
    }

    #[test]
    fn theta_functional_equations_hold() {
        // θ(x;p) = −x·θ(1/x;p) = −x·θ(px;p) across 100 random points.
        let c = ctx();
        let prec = c.prec();
        let mut rng = c.rng("theta-fe-test");
        let mut worst = 0f64;
        for _ in 0..100 {
            let p = draw_complex(&mut rng, prec, 0.05, 0.3);
            let x = draw_complex(&mut rng, prec, 0.5, 2.0);
            let th = theta(&x, &p, c.digits).unwrap();
            let inv = theta(&x.recip(), &p, c.digits).unwrap();
            let shf = theta(&x.mul(&p), &p, c.digits).unwrap();
            let mx = x.neg();
            worst = worst.max(rel_residual(&th, &mx.mul(&inv), c.digits));
            worst = worst.max(rel_residual(&th, &mx.mul(&shf), c.digits));
        }
        assert!(worst <= c.tol, "worst residual {worst:.3e}");
    }

    #[test]
    fn theta_truncation_tracks_requested_digits() {
        // Doubling the precision moves the value by less than 10^(−digits+5),
        // i.e. the truncation really delivers the digits it promises.
        for digits in [30u32, 60] {
            let lo = NumericContext::with_digits(digits).unwrap();
            let hi = NumericContext::with_digits(2 * digits).unwrap();
            let x_lo = MpComplex::from_f64(lo.prec(), 1.9, 0.6);
            let p_lo = MpComplex::from_f64(lo.prec(), -0.28, 0.1);
            let x_hi = MpComplex::from_f64(hi.prec(), 1.9, 0.6);
            let p_hi = MpComplex::from_f64(hi.prec(), -0.28, 0.1);
            let v_lo = theta(&x_lo, &p_lo, lo.digits).unwrap();
            let v_hi = theta(&x_hi, &p_hi, hi.digits).unwrap();
            let r = rel_residual(&v_lo, &v_hi, hi.digits);
            assert!(r < 10f64.powi(5 - digits as i32), "digits={digits}: drift {r:.3e}");
        }
    }

    #[test]
    fn theta_pochhammer_matches_definition() {
        let c = ctx();
        let prec = c.prec();
        let mut rng = c.rng("poch-test");
        let p = draw_complex(&mut rng, prec, 0.05, 0.3);
        let q = draw_complex(&mut rng, prec, 0.5, 2.0);
        let x = draw_complex(&mut rng, prec, 0.5, 2.0);
        let mut want = MpComplex::one(prec);
        for j in 0..4i64 {
            want = want.mul(&theta(&x.mul(&q.powi(j)), &p, c.digits).unwrap());
        }
        let got = theta_pochhammer(&x, &q, &p, 4, c.digits).unwrap();
        assert!(rel_residual(&got, &want, c.digits) <= c.tol);
        let empty = theta_pochhammer(&x, &q, &p, 0, c.digits).unwrap();
        assert!(empty.sub(&MpComplex::one(prec)).is_zero());
    }

    #[test]
    fn sampling_is_reproducible_and_honours_constraints() {
        let c = ctx();
        let spec = SampleSpec::new(2, 2)
            .names(&["a", "b", "c", "d"])
            // q^m t^{n-1} a b c d = p with the rectangle (2,2)
            .constraint(
                vec![("q", 2), ("t", 1), ("a", 1), ("b", 1), ("c", 1), ("d", 1), ("p", -1)],
                "d",
            )
            .avoid(vec![("a", 1), ("b", 1)])
            .avoid_sweep(vec![("a", 1), ("c", -1)], (0, 2), (0, 1));
        let ps1 = sample_generic(&c, &mut c.rng("sample-test"), &spec).unwrap();
        let ps2 = sample_generic(&c, &mut c.rng("sample-test"), &spec).unwrap();
        assert_eq!(ps1.digest(), ps2.digest());
        assert_eq!(ps1.m, 2);
        assert_eq!(ps1.n, 2);
        // the constraint holds to working precision
        let lhs = ps1.monomial(&[("q", 2), ("t", 1), ("a", 1), ("b", 1), ("c", 1), ("d", 1)]);
        assert!(rel_residual(&lhs, &ps1.p, c.digits) <= c.tol);
        // genericity: a·b is off ⟨p⟩ by at least the margin
        let ab = ps1.monomial(&[("a", 1), ("b", 1)]);
        assert!(coset_distance(ab.to_f64_pair(), ps1.p.to_f64_pair()) >= c.genericity_margin);
    }

    #[test]
    fn sampling_rejects_impossible_specs() {
        let c = ctx();
        // q·q^{-1} = 1 sits exactly on ⟨p⟩: no draw can ever clear the margin.
        let spec = SampleSpec::new(1, 1).avoid(vec![("q", 1), ("q", -1)]);
        match sample_generic(&c, &mut c.rng("reject-test"), &spec) {
            Err(Error::GenericityFailure(_)) => {}
            other => panic!("expected genericity failure, got {other:?}"),
        }
    }

    #[test]
    fn coset_distance_basics() {
        let p = (0.2, 0.0);
        assert!(coset_distance((0.2, 0.0), p) < 1e-12); // p itself
        assert!(coset_distance((1.0, 0.0), p) < 1e-12); // p^0
        assert!(coset_distance((25.0, 0.0), p) < 1e-12); // p^{-2}
        assert!(coset_distance((0.5, 0.5), p) > 0.3);
    }

    #[test]
    fn parameter_digest_distinguishes_points() {
        let c = ctx();
        let prec = c.prec();
        let mk = |re: f64| {
            ParameterSet::from_values(
                c.digits,
                MpComplex::from_f64(prec, 0.1, 0.0),
                MpComplex::from_f64(prec, re, 0.3),
                MpComplex::from_f64(prec, 0.8, -0.1),
                vec![("a".into(), MpComplex::from_f64(prec, 1.1, 0.2))],
                1,
                2,
            )
            .unwrap()
        };
        assert_ne!(mk(0.7).digest(), mk(0.71).digest());
        assert_eq!(mk(0.7).digest(), mk(0.7).digest());
    }

    #[test]
    fn parameter_set_rejects_bad_values() {
        let prec = 128;
        let bad_p = ParameterSet::from_values(
            30,
            MpComplex::from_f64(prec, 1.2, 0.0),
            MpComplex::from_f64(prec, 0.5, 0.0),
            MpComplex::from_f64(prec, 0.5, 0.0),
            vec![],
            0,
            1,
        );
        assert!(bad_p.is_err());
        let zero_q = ParameterSet::from_values(
            30,
            MpComplex::from_f64(prec, 0.1, 0.0),
            MpComplex::zero(prec),
            MpComplex::from_f64(prec, 0.5, 0.0),
            vec![],
            0,
            1,
        );
        assert!(zero_q.is_err());
    }
}
