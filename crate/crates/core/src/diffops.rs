//! The difference operators D⁽ⁿ⁾ and D⁺⁽ⁿ⁾ acting on evaluable
//! BC_n-symmetric functions.
//!
//! Operators act lazily: applying one wraps the input callback in a new
//! callback that performs the σ ∈ {±1}ⁿ sum at each requested point.
//! Nothing is expanded to coefficients unless a caller solves for them.

use std::sync::Arc;

use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::mp::MpComplex;
use crate::numerics::{draw_complex, rel_residual, theta, theta_prod, ParameterSet};
use crate::theta_space::SymThetaElement;

/// An n-variable complex function given by an evaluation callback, with a
/// declared (spot-checkable) claim of BC_n symmetry.
#[derive(Clone)]
pub struct Evaluable {
    pub n: usize,
    /// Whether the function claims invariance under permutations and
    /// x_i ↦ 1/x_i.  Operator outputs inherit this from their input.
    pub bc_symmetric: bool,
    f: Arc<dyn Fn(&[MpComplex]) -> Result<MpComplex> + Send + Sync>,
}

impl std::fmt::Debug for Evaluable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Evaluable")
            .field("n", &self.n)
            .field("bc_symmetric", &self.bc_symmetric)
            .finish_non_exhaustive()
    }
}

impl Evaluable {
    pub fn new(
        n: usize,
        bc_symmetric: bool,
        f: impl Fn(&[MpComplex]) -> Result<MpComplex> + Send + Sync + 'static,
    ) -> Self {
        Evaluable { n, bc_symmetric, f: Arc::new(f) }
    }

    pub fn constant(n: usize, value: MpComplex) -> Self {
        Evaluable::new(n, true, move |_| Ok(value.clone()))
    }

    pub fn from_element(elem: SymThetaElement) -> Self {
        let n = elem.basis.n;
        Evaluable::new(n, true, move |xs| elem.evaluate(xs))
    }

    pub fn eval(&self, xs: &[MpComplex]) -> Result<MpComplex> {
        assert_eq!(xs.len(), self.n, "point dimension must match n");
        (self.f)(xs)
    }

    /// Verify the declared symmetry at random points: swaps the first two
    /// variables and inverts the first, returning the worst residual.
    pub fn spot_check_symmetry(
        &self,
        rng: &mut ChaCha20Rng,
        prec: u32,
        digits: u32,
        trials: usize,
    ) -> Result<f64> {
        let mut worst = 0f64;
        for _ in 0..trials {
            let xs: Vec<MpComplex> = (0..self.n).map(|_| draw_complex(rng, prec, 0.5, 2.0)).collect();
            let base = self.eval(&xs)?;
            if self.n >= 1 {
                let mut inv = xs.clone();
                inv[0] = inv[0].recip();
                worst = worst.max(rel_residual(&base, &self.eval(&inv)?, digits));
            }
            if self.n >= 2 {
                let mut swapped = xs.clone();
                swapped.swap(0, 1);
                worst = worst.max(rel_residual(&base, &self.eval(&swapped)?, digits));
            }
        }
        Ok(worst)
    }
}

/// x^σ for σ = ±1.
fn flip(x: &MpComplex, sigma: bool) -> MpComplex {
    if sigma {
        x.recip()
    } else {
        x.clone()
    }
}

/// The operator D⁽ⁿ⁾(a,b,c,d;q,t;p):
///
///   (Df)(x) = Σ_{σ∈{±1}ⁿ} ∏_i θ(a x_i^{σ_i}, b x_i^{σ_i}, c x_i^{σ_i}, d x_i^{σ_i};p)
///                               / θ(x_i^{2σ_i};p)
///             ∏_{i<j} θ(t x_i^{σ_i} x_j^{σ_j};p) / θ(x_i^{σ_i} x_j^{σ_j};p)
///             · f(…q^{σ_i/2} x_i…),
///
/// with q^{1/2} the parameter set's fixed principal branch.  Evaluating at a
/// point where some θ(x_i^{2σ_i};p) or θ(x_i^{σ_i} x_j^{σ_j};p) vanishes is
/// a pole and reports [`Error::Singular`] (callers resample).
pub fn apply_d(
    a: &MpComplex,
    b: &MpComplex,
    c: &MpComplex,
    d: &MpComplex,
    ps: &ParameterSet,
    n: usize,
    f: &Evaluable,
) -> Evaluable {
    assert_eq!(f.n, n, "operand arity must match the operator");
    let (a, b, c, d) = (a.clone(), b.clone(), c.clone(), d.clone());
    let ps = ps.clone();
    let f = f.clone();
    Evaluable::new(n, f.bc_symmetric, move |xs| {
        let prec = ps.prec;
        let mut total = MpComplex::zero(prec);
        for mask in 0u32..(1 << n) {
            let sigma: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
            let mut term = MpComplex::one(prec);
            for i in 0..n {
                let xi = flip(&xs[i], sigma[i]);
                let num = theta_prod(
                    &[a.mul(&xi), b.mul(&xi), c.mul(&xi), d.mul(&xi)],
                    &ps.p,
                    ps.digits,
                )?;
                let den = theta(&xi.mul(&xi), &ps.p, ps.digits)?;
                if den.is_zero() {
                    return Err(Error::Singular("difference operator pole: θ(x_i^{2σ};p) = 0".into()));
                }
                term = term.mul(&num).div(&den);
            }
            for i in 0..n {
                for j in i + 1..n {
                    let prod = flip(&xs[i], sigma[i]).mul(&flip(&xs[j], sigma[j]));
                    let den = theta(&prod, &ps.p, ps.digits)?;
                    if den.is_zero() {
                        return Err(Error::Singular(
                            "difference operator pole: θ(x_i^σ x_j^σ;p) = 0".into(),
                        ));
                    }
                    term = term.mul(&theta(&ps.t.mul(&prod), &ps.p, ps.digits)?).div(&den);
                }
            }
            let shifted: Vec<MpComplex> = (0..n)
                .map(|i| {
                    let half = if sigma[i] { ps.q_half().recip() } else { ps.q_half().clone() };
                    half.mul(&xs[i])
                })
                .collect();
            total = total.add(&term.mul(&f.eval(&shifted)?));
        }
        if !total.is_finite() {
            return Err(Error::Singular("difference operator evaluation is not finite".into()));
        }
        Ok(total)
    })
}

/// The raising operator D⁺⁽ⁿ⁾_q(u₀:u₁:u₂,u₃,u₄;t;p):
///
///   (D⁺f)(z) = ∏_i [ θ(pq t^{n−i} u₁/u₀;p) / ∏_{r=2..5} θ(u_r t^{n−i} u₁;p) ]
///              · Σ_{σ∈{±1}ⁿ} ∏_i ∏_{r=1..5} θ(u_r z_i^{σ_i};p)
///                                 / (θ(pq z_i^{σ_i}/u₀;p) θ(z_i^{2σ_i};p))
///                ∏_{i<j} θ(t z_i^{σ_i} z_j^{σ_j};p) / θ(z_i^{σ_i} z_j^{σ_j};p)
///                · f(…q^{1/2} z_i^{σ_i}…),
///
/// where u₅ = p²q/(t^{n−1} u₀u₁u₂u₃u₄) and the σ-sum is the expansion of
/// the reflection product ∏_i (1 + R_{z_i}).
pub fn apply_dplus(
    u: &[MpComplex; 5],
    ps: &ParameterSet,
    n: usize,
    f: &Evaluable,
) -> Result<Evaluable> {
    assert_eq!(f.n, n, "operand arity must match the operator");
    let prec = ps.prec;
    let pq = ps.p.mul(&ps.q);
    let mut u01234 = MpComplex::one(prec);
    for ur in u {
        u01234 = u01234.mul(ur);
    }
    let u5 = ps.p.powi(2).mul(&ps.q).div(&ps.t.powi(n as i64 - 1).mul(&u01234));
    // r = 1..5 in the bracket, r = 2..5 in the prefactor denominator
    let us: Vec<MpComplex> = u[1..].iter().cloned().chain([u5]).collect();

    let mut prefactor = MpComplex::one(prec);
    for i in 1..=n {
        let tni = ps.t.powi((n - i) as i64);
        let num = theta(&pq.mul(&tni).mul(&u[1]).div(&u[0]), &ps.p, ps.digits)?;
        let mut den = MpComplex::one(prec);
        for ur in &us[1..] {
            den = den.mul(&theta(&ur.mul(&tni).mul(&u[1]), &ps.p, ps.digits)?);
        }
        if den.is_zero() {
            return Err(Error::Singular("raising operator prefactor pole".into()));
        }
        prefactor = prefactor.mul(&num).div(&den);
    }

    let u0 = u[0].clone();
    let ps = ps.clone();
    let f = f.clone();
    Ok(Evaluable::new(n, f.bc_symmetric, move |zs| {
        let prec = ps.prec;
        let pq = ps.p.mul(&ps.q);
        let mut total = MpComplex::zero(prec);
        for mask in 0u32..(1 << n) {
            let sigma: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
            let mut term = MpComplex::one(prec);
            for i in 0..n {
                let zi = flip(&zs[i], sigma[i]);
                for ur in &us {
                    term = term.mul(&theta(&ur.mul(&zi), &ps.p, ps.digits)?);
                }
                let den = theta(&pq.mul(&zi).div(&u0), &ps.p, ps.digits)?
                    .mul(&theta(&zi.mul(&zi), &ps.p, ps.digits)?);
                if den.is_zero() {
                    return Err(Error::Singular("raising operator pole".into()));
                }
                term = term.div(&den);
            }
            for i in 0..n {
                for j in i + 1..n {
                    let prod = flip(&zs[i], sigma[i]).mul(&flip(&zs[j], sigma[j]));
                    let den = theta(&prod, &ps.p, ps.digits)?;
                    if den.is_zero() {
                        return Err(Error::Singular("raising operator cross-term pole".into()));
                    }
                    term = term.mul(&theta(&ps.t.mul(&prod), &ps.p, ps.digits)?).div(&den);
                }
            }
            let shifted: Vec<MpComplex> =
                (0..n).map(|i| ps.q_half().mul(&flip(&zs[i], sigma[i]))).collect();
            total = total.add(&term.mul(&f.eval(&shifted)?));
        }
        let out = prefactor.mul(&total);
        if !out.is_finite() {
            return Err(Error::Singular("raising operator evaluation is not finite".into()));
        }
        Ok(out)
    }))
}
