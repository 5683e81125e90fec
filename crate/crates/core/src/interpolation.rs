//! Interpolation theta functions P*⁽ᵐ'ⁿ⁾_λ and the abelian functions
//! R*⁽ⁿ⁾_λ built from them.
//!
//! P*⁽ᵐ'ⁿ⁾_λ(x₁..x_n; a, b; q, t; p) is the unique BC_n-symmetric theta
//! function of degree m that (1) vanishes at one structured point per
//! partition μ ⊂ m^n with μ ≠ λ (see [`interp_point`]) and (2) takes the
//! value C⁰_λ(t^{n−1}av, a/v)·C⁰_{m^n−λ}(t^{n−1}bv, b/v) at the principal
//! point (v·t^{n−i})_i.  The normalization makes the function independent of
//! the auxiliary point v, which is checked rather than assumed.
//!
//! R*⁽ⁿ⁾_λ(; a, b) = P*⁽ᵐ'ⁿ⁾_λ(; a, q^{−m}b) / P*⁽ᵐ'ⁿ⁾₀(; a, q^{−m}b) for
//! any m ≥ λ₁; we solve at the minimal m = λ₁ and guard the choice with an
//! m-independence test.

use rand_chacha::ChaCha20Rng;
use rug::Float;

use crate::error::{Error, Result};
use crate::mp::MpComplex;
use crate::numerics::{draw_complex, theta_pochhammer, Monomial, ParameterSet, SampleSpec};
use crate::partition::{enumerate_rectangle, Partition};
use crate::symbols::c_zero;
use crate::theta_space::{make_basis, solve_from_conditions, SymThetaElement};

/// Index l for the structured point attached to (λ, μ): with l₀ the largest
/// index (1-based) where μ and λ differ (0 if μ = λ) and l₁ the largest
/// index where μ_l = m (0 if none), take l = l₁ when l₀ = 0 or
/// μ_{l₀} < λ_{l₀}, and l = l₀ otherwise.
pub fn interp_l(lam: &Partition, mu: &Partition, m: u32, n: usize) -> usize {
    let l0 = (1..=n).rev().find(|&l| mu.part(l) != lam.part(l)).unwrap_or(0);
    let l1 = (1..=n).rev().find(|&l| mu.part(l) == m).unwrap_or(0);
    if l0 == 0 || mu.part(l0) < lam.part(l0) {
        l1
    } else {
        l0
    }
}

/// The structured point: coordinates i ≤ l are b-type, b q^{m−μ_i} t^{i−1};
/// coordinates i > l are a-type, a q^{μ_i} t^{n−i}.
pub fn interp_point(
    lam: &Partition,
    mu: &Partition,
    m: u32,
    n: usize,
    a: &MpComplex,
    b: &MpComplex,
    ps: &ParameterSet,
) -> Vec<MpComplex> {
    let l = interp_l(lam, mu, m, n);
    (1..=n)
        .map(|i| {
            if i <= l {
                b.mul(&ps.q.powi((m - mu.part(i)) as i64)).mul(&ps.t.powi(i as i64 - 1))
            } else {
                a.mul(&ps.q.powi(mu.part(i) as i64)).mul(&ps.t.powi((n - i) as i64))
            }
        })
        .collect()
}

/// P*⁽ᵐ'ⁿ⁾₀(x; ·, b) = ∏_i θ(b x_i, b/x_i; q; p)_m (depends only on b).
pub fn p_star_zero(
    m: u32,
    b: &MpComplex,
    xs: &[MpComplex],
    ps: &ParameterSet,
) -> Result<MpComplex> {
    let mut acc = MpComplex::one(ps.prec);
    for x in xs {
        acc = acc.mul(&theta_pochhammer(&b.mul(x), &ps.q, &ps.p, m, ps.digits)?);
        acc = acc.mul(&theta_pochhammer(&b.div(x), &ps.q, &ps.p, m, ps.digits)?);
    }
    Ok(acc)
}

/// A solved interpolation theta function.
#[derive(Debug, Clone)]
pub struct InterpFunction {
    pub lam: Partition,
    pub m: u32,
    pub n: usize,
    pub a: MpComplex,
    pub b: MpComplex,
    pub v: MpComplex,
    pub element: SymThetaElement,
}

impl InterpFunction {
    pub fn eval(&self, xs: &[MpComplex]) -> Result<MpComplex> {
        self.element.evaluate(xs)
    }

    /// Value with the magnitude budget of the defining sum, for relative
    /// vanishing residuals.
    pub fn eval_with_scale(&self, xs: &[MpComplex]) -> Result<(MpComplex, Float)> {
        self.element.evaluate_with_scale(xs)
    }
}

/// Solve for P*⁽ᵐ'ⁿ⁾_λ(; a, b) with auxiliary normalization point v.
///
/// Vanishing rows come from [`interp_point`] over all μ ⊂ m^n, μ ≠ λ; the
/// normalization row fixes the value at (v t^{n−i}).  A conditioning failure
/// triggers a basis resample (the basis is random); persistent failure is
/// reported, signalling non-generic parameters.
pub fn interp_theta(
    lam: &Partition,
    m: u32,
    n: usize,
    a: &MpComplex,
    b: &MpComplex,
    v: &MpComplex,
    ps: &ParameterSet,
    rng: &mut ChaCha20Rng,
) -> Result<InterpFunction> {
    if !lam.fits_in(m, n) {
        return Err(Error::BadParameter(format!(
            "partition {lam:?} does not fit in the {m}^{n} rectangle"
        )));
    }
    let tn1 = ps.t.powi(n as i64 - 1);
    let norm_point: Vec<MpComplex> =
        (1..=n).map(|i| v.mul(&ps.t.powi((n - i) as i64))).collect();
    let norm_value = c_zero(lam, &[tn1.mul(a).mul(v), a.div(v)], ps)?.mul(&c_zero(
        &lam.complement(m, n)?,
        &[tn1.mul(b).mul(v), b.div(v)],
        ps,
    )?);
    let points: Vec<Vec<MpComplex>> = enumerate_rectangle(m, n)
        .iter()
        .filter(|mu| *mu != lam)
        .map(|mu| interp_point(lam, mu, m, n, a, b, ps))
        .collect();

    let mut last_err = None;
    for _ in 0..3 {
        let basis = make_basis(m, n, ps, rng)?;
        match solve_from_conditions(&basis, &points, &norm_point, &norm_value) {
            Ok(element) => {
                return Ok(InterpFunction {
                    lam: lam.clone(),
                    m,
                    n,
                    a: a.clone(),
                    b: b.clone(),
                    v: v.clone(),
                    element,
                })
            }
            Err(e @ (Error::IllConditioned { .. } | Error::DegenerateSystem(_))) => {
                last_err = Some(e);
            }
            Err(e) => return Err(e),
        }
    }
    Err(last_err.unwrap_or_else(|| Error::DegenerateSystem("interpolation solve failed".into())))
}

/// A reusable R*⁽ⁿ⁾_λ(; a, b): the P* solve is done once, evaluations share
/// it.  Uses the minimal rectangle width m = λ₁ unless built through
/// [`rstar_fn_with_m`].
#[derive(Debug, Clone)]
pub struct RStar {
    pub lam: Partition,
    pub n: usize,
    pub a: MpComplex,
    pub b: MpComplex,
    pub interp: InterpFunction,
    ps: ParameterSet,
}

impl RStar {
    pub fn eval(&self, xs: &[MpComplex]) -> Result<MpComplex> {
        let num = self.interp.eval(xs)?;
        let den = p_star_zero(self.interp.m, &self.interp.b, xs, &self.ps)?;
        if den.is_zero() || !den.is_finite() {
            return Err(Error::Singular(
                "normalizing interpolation function vanishes at this point".into(),
            ));
        }
        let out = num.div(&den);
        if !out.is_finite() {
            return Err(Error::Singular("abelian interpolation value is not finite".into()));
        }
        Ok(out)
    }
}

/// Build R*⁽ⁿ⁾_λ(; a, b) with m = λ₁ (minimal solve).  The auxiliary v for
/// the underlying P* is drawn from `rng`.
pub fn rstar_fn(
    lam: &Partition,
    n: usize,
    a: &MpComplex,
    b: &MpComplex,
    ps: &ParameterSet,
    rng: &mut ChaCha20Rng,
) -> Result<RStar> {
    rstar_fn_with_m(lam, lam.part(1), n, a, b, ps, rng)
}

/// R* through an explicit rectangle width m ≥ λ₁ (the value is independent
/// of the choice; the default path uses λ₁).
pub fn rstar_fn_with_m(
    lam: &Partition,
    m: u32,
    n: usize,
    a: &MpComplex,
    b: &MpComplex,
    ps: &ParameterSet,
    rng: &mut ChaCha20Rng,
) -> Result<RStar> {
    if lam.length() > n {
        return Err(Error::BadParameter(format!("{lam:?} has more than {n} rows")));
    }
    if m < lam.part(1) {
        return Err(Error::BadParameter(format!("rectangle width {m} below λ₁ = {}", lam.part(1))));
    }
    let b_shifted = ps.q.powi(-(m as i64)).mul(b);
    let v = draw_complex(rng, ps.prec, 0.5, 2.0);
    let interp = interp_theta(lam, m, n, a, &b_shifted, &v, ps, rng)?;
    Ok(RStar { lam: lam.clone(), n, a: a.clone(), b: b.clone(), interp, ps: ps.clone() })
}

/// One-shot R* evaluation.
pub fn rstar_eval(
    lam: &Partition,
    n: usize,
    a: &MpComplex,
    b: &MpComplex,
    xs: &[MpComplex],
    ps: &ParameterSet,
    rng: &mut ChaCha20Rng,
) -> Result<MpComplex> {
    if lam.is_empty() {
        return Ok(MpComplex::one(ps.prec));
    }
    rstar_fn(lam, n, a, b, ps, rng)?.eval(xs)
}

fn neg_mono(m: &Monomial) -> Monomial {
    m.iter().map(|&(n, e)| (n, -e)).collect()
}

fn cat_mono(a: &Monomial, b: &Monomial) -> Monomial {
    a.iter().chain(b.iter()).cloned().collect()
}

/// Append the six regularity families of the interpolation bigrid for
/// parameters (α, β) given as monomials (so callers can pass shifted
/// parameters like β = q^{−m}b).  A sample clearing these margins keeps the
/// defining node set distinct and the P* solve generically nonsingular:
///
/// 1. q^j t^i        off αβ q^{m−1} t^{n−1} ⟨p⟩,  0 ≤ i < n, 0 ≤ j < m
/// 2. (β/α) q^j t^i  off αβ q^{m−1} t^{n−1} ⟨p⟩,  |i| ≤ n−1, |j| ≤ m−2
/// 3. q^j t^i        off ⟨p⟩,                      0 ≤ i < n, 1 ≤ j < m
/// 4. (β/α) q^j t^i  off ⟨p⟩,                      |i| ≤ n−1, |j| ≤ m−1
/// 5. q^j t^i        off (αβ)^{−1} q^{1−m} t^{1−n} ⟨p⟩, 0 ≤ i < n, 2 ≤ j < m
/// 6. (β/α) q^j t^i  off (αβ)^{−1} q^{1−m} t^{1−n} ⟨p⟩, |i| ≤ n−1, |j| ≤ m−2
pub fn add_interp_regularity(
    mut spec: SampleSpec,
    m: u32,
    n: usize,
    alpha: &Monomial,
    beta: &Monomial,
) -> SampleSpec {
    let m = m as i64;
    let n = n as i64;
    let inv_ab = cat_mono(&neg_mono(alpha), &neg_mono(beta));
    let b_over_a = cat_mono(beta, &neg_mono(alpha));
    let ab = cat_mono(alpha, beta);
    // 1: q^{j−m+1} t^{i−n+1} / (αβ) off ⟨p⟩
    spec = spec.avoid_sweep(inv_ab, (1 - m, 0), (1 - n, 0));
    if m >= 2 {
        // 2: (β/α)/(αβ q^{m−1} t^{n−1}) → α^{−2} q^{j−m+1} t^{i−n+1}
        let a2inv = cat_mono(&neg_mono(alpha), &neg_mono(alpha));
        spec = spec.avoid_sweep(a2inv, (3 - 2 * m, -1), (2 - 2 * n, 0));
        // 3
        spec = spec.avoid_sweep(vec![], (1, m - 1), (0, n - 1));
    }
    // 4
    spec = spec.avoid_sweep(b_over_a, (1 - m, m - 1), (1 - n, n - 1));
    if m >= 3 {
        // 5: q^j t^i · αβ q^{m−1} t^{n−1}
        spec = spec.avoid_sweep(ab, (m + 1, 2 * m - 2), (n - 1, 2 * n - 2));
    }
    if m >= 2 {
        // 6: (β/α) q^j t^i · αβ q^{m−1} t^{n−1} → β² q^{j+m−1} t^{i+n−1}
        let b2 = cat_mono(beta, beta);
        spec = spec.avoid_sweep(b2, (1, 2 * m - 3), (0, 2 * n - 2));
    }
    spec
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{rel_residual, sample_generic, theta, NumericContext};
    use crate::symbols::{c_minus, c_plus, delta, delta0};

    /// Sample (a, b) with the interpolation regularity margins for the given
    /// rectangle, plus any extra names.
    fn setup(
        label: &str,
        m: u32,
        n: usize,
        extra: &[&'static str],
    ) -> (NumericContext, ParameterSet, ChaCha20Rng) {
        let c = NumericContext::default();
        let spec = add_interp_regularity(
            SampleSpec::new(m, n).names(&["a", "b"]).names(extra),
            m,
            n,
            &vec![("a", 1)],
            &vec![("b", 1)],
        );
        let mut rng = c.rng(label);
        let ps = sample_generic(&c, &mut rng, &spec).unwrap();
        (c, ps, rng)
    }

    #[test]
    fn l_rule_and_point_examples() {
        let c = NumericContext::default();
        let mut rng = c.rng("ip-points");
        let ps = sample_generic(&c, &mut rng, &SampleSpec::new(3, 3).names(&["a", "b"])).unwrap();
        let (a, b) = (ps.get("a").clone(), ps.get("b").clone());
        // λ=(2,1), μ=(2) in 3³: indices 2,3 differ, l₀=3? μ₃=0=λ₃ so l₀=2;
        // μ_{l₀}=0 < λ_{l₀}=1 ⇒ l=l₁=0: all a-type coordinates.
        let lam = Partition::of(&[2, 1]);
        let mu = Partition::of(&[2]);
        assert_eq!(interp_l(&lam, &mu, 3, 3), 0);
        let pt = interp_point(&lam, &mu, 3, 3, &a, &b, &ps);
        let want = [
            a.mul(&ps.q.powi(2)).mul(&ps.t.powi(2)),
            a.mul(&ps.t),
            a.clone(),
        ];
        for (g, w) in pt.iter().zip(&want) {
            assert!(rel_residual(g, w, c.digits) <= c.tol);
        }
        // μ = m^n ⇒ l = n: all b-type
        let full = Partition::rectangle(3, 3);
        assert_eq!(interp_l(&lam, &full, 3, 3), 3);
        let pt = interp_point(&lam, &full, 3, 3, &a, &b, &ps);
        for (i, g) in pt.iter().enumerate() {
            let w = b.mul(&ps.t.powi(i as i64));
            assert!(rel_residual(g, &w, c.digits) <= c.tol);
        }
        // μ = ∅ ⇒ l = 0: (a t^{n−1}, a t^{n−2}, …, a)
        assert_eq!(interp_l(&lam, &Partition::empty(), 3, 3), 0);
        // μ = λ (evaluation use): l = largest index with λ_l = m
        assert_eq!(interp_l(&lam, &lam, 2, 3), 1); // λ=(2,1) in 2³: λ₁=2=m
        assert_eq!(interp_l(&lam, &lam, 3, 3), 0);
    }

    #[test]
    fn empty_partition_is_closed_form() {
        let (c, ps, mut rng) = setup("ip-zero", 2, 2, &["v"]);
        let (a, b, v) = (ps.get("a").clone(), ps.get("b").clone(), ps.get("v").clone());
        let f = interp_theta(&Partition::empty(), 2, 2, &a, &b, &v, &ps, &mut rng).unwrap();
        for _ in 0..5 {
            let xs: Vec<MpComplex> =
                (0..2).map(|_| draw_complex(&mut rng, ps.prec, 0.5, 2.0)).collect();
            let got = f.eval(&xs).unwrap();
            let want = p_star_zero(2, &b, &xs, &ps).unwrap();
            assert!(rel_residual(&got, &want, c.digits) <= c.tol);
        }
    }

    #[test]
    fn complementation_swaps_parameters() {
        let (c, ps, mut rng) = setup("ip-comp", 2, 2, &["v"]);
        let (a, b, v) = (ps.get("a").clone(), ps.get("b").clone(), ps.get("v").clone());
        for lam in [Partition::of(&[1]), Partition::of(&[2, 1]), Partition::of(&[2, 2])] {
            let compl = lam.complement(2, 2).unwrap();
            let lhs = interp_theta(&compl, 2, 2, &a, &b, &v, &ps, &mut rng).unwrap();
            let rhs = interp_theta(&lam, 2, 2, &b, &a, &v, &ps, &mut rng).unwrap();
            for _ in 0..3 {
                let xs: Vec<MpComplex> =
                    (0..2).map(|_| draw_complex(&mut rng, ps.prec, 0.5, 2.0)).collect();
                let l = lhs.eval(&xs).unwrap();
                let r = rhs.eval(&xs).unwrap();
                assert!(rel_residual(&l, &r, c.digits) <= c.tol, "λ = {lam:?}");
            }
        }
    }

    #[test]
    fn cauchy_case_closed_form() {
        // q^m tⁿ a b = pq pins b; the solve must reproduce the product formula.
        let c = NumericContext::default();
        let m = 2u32;
        let n = 2usize;
        let spec = add_interp_regularity(
            SampleSpec::new(m, n).names(&["a", "b", "v"]).constraint(
                vec![("q", m as i64), ("t", n as i64), ("a", 1), ("b", 1), ("p", -1), ("q", -1)],
                "b",
            ),
            m,
            n,
            &vec![("a", 1)],
            &vec![("b", 1)],
        );
        let mut rng = c.rng("ip-cauchy");
        let ps = sample_generic(&c, &mut rng, &spec).unwrap();
        let (a, b, v) = (ps.get("a").clone(), ps.get("b").clone(), ps.get("v").clone());
        for lam in [Partition::of(&[1]), Partition::of(&[2, 1])] {
            let f = interp_theta(&lam, m, n, &a, &b, &v, &ps, &mut rng).unwrap();
            let conj = lam.conjugate();
            for _ in 0..3 {
                let xs: Vec<MpComplex> =
                    (0..n).map(|_| draw_complex(&mut rng, ps.prec, 0.5, 2.0)).collect();
                let got = f.eval(&xs).unwrap();
                let mut want = MpComplex::one(ps.prec);
                for x in &xs {
                    for j in 1..=m as i64 {
                        let base = a
                            .mul(&ps.t.powi(n as i64 - conj.part(j as usize) as i64))
                            .mul(&ps.q.powi(j - 1));
                        want = want.mul(&theta(&base.mul(x), &ps.p, ps.digits).unwrap());
                        want = want.mul(&theta(&base.div(x), &ps.p, ps.digits).unwrap());
                    }
                }
                assert!(
                    rel_residual(&got, &want, c.digits) <= c.tol,
                    "λ = {lam:?}"
                );
            }
        }
    }

    #[test]
    fn principal_specialization_closed_form() {
        let (c, ps, mut rng) = setup("ip-principal", 2, 2, &["v"]);
        let (a, b, v) = (ps.get("a").clone(), ps.get("b").clone(), ps.get("v").clone());
        let (m, n) = (2u32, 2usize);
        let pq = ps.p.mul(&ps.q);
        for lam in [Partition::empty(), Partition::of(&[1]), Partition::of(&[2, 1])] {
            let f = interp_theta(&lam, m, n, &a, &b, &v, &ps, &mut rng).unwrap();
            let pt: Vec<MpComplex> = (1..=n)
                .map(|i| a.mul(&ps.q.powi(lam.part(i) as i64)).mul(&ps.t.powi((n - i) as i64)))
                .collect();
            let got = f.eval(&pt).unwrap();
            let compl = lam.complement(m, n).unwrap();
            let want = c_zero(&compl, &[pq.div(&ps.q.powi(m as i64).mul(&a).mul(&b))], &ps)
                .unwrap()
                .mul(
                    &c_plus(
                        &compl,
                        &[ps.t.powi(n as i64 - 1).mul(&b).div(&ps.q.powi(m as i64).mul(&a))],
                        &ps,
                    )
                    .unwrap(),
                )
                .mul(&c_minus(&lam, &[pq.clone(), ps.t.clone()], &ps).unwrap())
                .mul(&c_plus(&lam, &[ps.t.powi(2 * n as i64 - 2).mul(&a).mul(&a)], &ps).unwrap())
                .div(&c_zero(&lam, &[ps.t.powi(n as i64)], &ps).unwrap());
            assert!(rel_residual(&got, &want, c.digits) <= c.tol, "λ = {lam:?}");
        }
    }

    #[test]
    fn delta_case_is_diagonal() {
        // q^m t^{n−1} a b = 1: evaluation at the μ-points is δ_{λμ} times a
        // closed product.
        let c = NumericContext::default();
        let (m, n) = (2u32, 2usize);
        let spec = add_interp_regularity(
            SampleSpec::new(m, n).names(&["a", "b", "v"]).constraint(
                vec![("q", m as i64), ("t", n as i64 - 1), ("a", 1), ("b", 1)],
                "b",
            ),
            m,
            n,
            &vec![("a", 1)],
            &vec![("b", 1)],
        );
        let mut rng = c.rng("ip-delta");
        let ps = sample_generic(&c, &mut rng, &spec).unwrap();
        let (a, b, v) = (ps.get("a").clone(), ps.get("b").clone(), ps.get("v").clone());
        let pq = ps.p.mul(&ps.q);
        let lam = Partition::of(&[2, 1]);
        let f = interp_theta(&lam, m, n, &a, &b, &v, &ps, &mut rng).unwrap();
        for mu in enumerate_rectangle(m, n) {
            let pt: Vec<MpComplex> = (1..=n)
                .map(|i| a.mul(&ps.q.powi(mu.part(i) as i64)).mul(&ps.t.powi((n - i) as i64)))
                .collect();
            let (got, scale) = f.eval_with_scale(&pt).unwrap();
            if mu == lam {
                let compl = lam.complement(m, n).unwrap();
                let want = c_zero(&compl, &[pq.mul(&ps.t.powi(n as i64 - 1))], &ps)
                    .unwrap()
                    .mul(
                        &c_plus(&compl, &[ps.q.powi(-2 * m as i64).mul(&a.mul(&a).recip())], &ps)
                            .unwrap(),
                    )
                    .mul(&c_minus(&lam, &[pq.clone(), ps.t.clone()], &ps).unwrap())
                    .mul(
                        &c_plus(&lam, &[ps.t.powi(2 * n as i64 - 2).mul(&a).mul(&a)], &ps)
                            .unwrap(),
                    )
                    .div(&c_zero(&lam, &[ps.t.powi(n as i64)], &ps).unwrap());
                assert!(rel_residual(&got, &want, c.digits) <= c.tol);
            } else {
                assert!((got.abs() / scale).to_f64() <= c.tol, "μ = {mu:?} should vanish");
            }
        }
    }

    #[test]
    fn rectangle_shift_by_one() {
        // P*^{(m+1,n)}_λ(x; a, b) = ∏_i θ(b x_i, b/x_i; q; p)
        //                           · P*^{(m,n)}_λ(x; a, b q).
        let (c, ps, mut rng) = setup("ip-mshift", 3, 2, &["v"]);
        let (a, b, v) = (ps.get("a").clone(), ps.get("b").clone(), ps.get("v").clone());
        let lam = Partition::of(&[2, 1]);
        let f_big = interp_theta(&lam, 3, 2, &a, &b, &v, &ps, &mut rng).unwrap();
        let f_small = interp_theta(&lam, 2, 2, &a, &b.mul(&ps.q), &v, &ps, &mut rng).unwrap();
        for _ in 0..3 {
            let xs: Vec<MpComplex> =
                (0..2).map(|_| draw_complex(&mut rng, ps.prec, 0.5, 2.0)).collect();
            let lhs = f_big.eval(&xs).unwrap();
            let mut shift = MpComplex::one(ps.prec);
            for x in &xs {
                shift = shift.mul(&theta(&b.mul(x), &ps.p, ps.digits).unwrap());
                shift = shift.mul(&theta(&b.div(x), &ps.p, ps.digits).unwrap());
            }
            let rhs = shift.mul(&f_small.eval(&xs).unwrap());
            assert!(rel_residual(&lhs, &rhs, c.digits) <= c.tol);
        }
    }

    #[test]
    fn independent_of_auxiliary_point() {
        let (c, ps, mut rng) = setup("ip-vfree", 2, 2, &[]);
        let (a, b) = (ps.get("a").clone(), ps.get("b").clone());
        let v1 = draw_complex(&mut rng, ps.prec, 0.5, 2.0);
        let v2 = draw_complex(&mut rng, ps.prec, 0.5, 2.0);
        let lam = Partition::of(&[2, 1]);
        let f1 = interp_theta(&lam, 2, 2, &a, &b, &v1, &ps, &mut rng).unwrap();
        let f2 = interp_theta(&lam, 2, 2, &a, &b, &v2, &ps, &mut rng).unwrap();
        for _ in 0..5 {
            let xs: Vec<MpComplex> =
                (0..2).map(|_| draw_complex(&mut rng, ps.prec, 0.5, 2.0)).collect();
            let l = f1.eval(&xs).unwrap();
            let r = f2.eval(&xs).unwrap();
            assert!(rel_residual(&l, &r, c.digits) <= c.tol);
        }
    }

    #[test]
    fn difference_equation() {
        // D⁽ⁿ⁾(a,b,c,d) P*(; √q a, √q b) = ∏_i θ(ab q^m t^{n−i},
        //   ac q^{λ_i} t^{n−i}, bc q^{m−λ_i} t^{i−1}; p) · P*(; a, b)
        // with q^m t^{n−1} a b c d = p.
        let c = NumericContext::default();
        let (m, n) = (1u32, 2usize);
        let spec = add_interp_regularity(
            SampleSpec::new(m, n).names(&["a", "b", "c", "d", "v"]).constraint(
                vec![
                    ("q", m as i64),
                    ("t", n as i64 - 1),
                    ("a", 1),
                    ("b", 1),
                    ("c", 1),
                    ("d", 1),
                    ("p", -1),
                ],
                "d",
            ),
            m,
            n,
            &vec![("a", 1)],
            &vec![("b", 1)],
        );
        let mut rng = c.rng("ip-diffeq");
        let ps = sample_generic(&c, &mut rng, &spec).unwrap();
        let (a, b, v) = (ps.get("a").clone(), ps.get("b").clone(), ps.get("v").clone());
        let (cc, d) = (ps.get("c").clone(), ps.get("d").clone());
        let qh = ps.q_half().clone();
        let lam = Partition::of(&[1, 1]);
        let shifted =
            interp_theta(&lam, m, n, &qh.mul(&a), &qh.mul(&b), &v, &ps, &mut rng).unwrap();
        let base = interp_theta(&lam, m, n, &a, &b, &v, &ps, &mut rng).unwrap();
        let op = crate::diffops::apply_d(
            &a,
            &b,
            &cc,
            &d,
            &ps,
            n,
            &crate::diffops::Evaluable::new(n, true, move |xs| shifted.eval(xs)),
        );
        let mut eigen = MpComplex::one(ps.prec);
        for i in 1..=n {
            let tni = ps.t.powi((n - i) as i64);
            let ti1 = ps.t.powi(i as i64 - 1);
            eigen = eigen
                .mul(
                    &theta(&a.mul(&b).mul(&ps.q.powi(m as i64)).mul(&tni), &ps.p, ps.digits)
                        .unwrap(),
                )
                .mul(
                    &theta(
                        &a.mul(&cc).mul(&ps.q.powi(lam.part(i) as i64)).mul(&tni),
                        &ps.p,
                        ps.digits,
                    )
                    .unwrap(),
                )
                .mul(
                    &theta(
                        &b.mul(&cc).mul(&ps.q.powi((m - lam.part(i)) as i64)).mul(&ti1),
                        &ps.p,
                        ps.digits,
                    )
                    .unwrap(),
                );
        }
        for _ in 0..3 {
            let xs: Vec<MpComplex> =
                (0..n).map(|_| draw_complex(&mut rng, ps.prec, 0.5, 2.0)).collect();
            let lhs = op.eval(&xs).unwrap();
            let rhs = eigen.mul(&base.eval(&xs).unwrap());
            assert!(rel_residual(&lhs, &rhs, c.digits) <= c.tol);
        }
    }

    #[test]
    fn extra_vanishing_with_free_coordinates() {
        // Beyond the defining nodes: a-type tails with μ_{l+1} < λ_{l+1} and
        // b-type heads with μ_l > λ_l annihilate P* for arbitrary free x's.
        let (c, ps, mut rng) = setup("ip-extra", 2, 2, &["v"]);
        let (a, b, v) = (ps.get("a").clone(), ps.get("b").clone(), ps.get("v").clone());
        let (m, n) = (2u32, 2usize);
        // a-side: λ=(2,1), l=1, μ₂=0 < λ₂=1
        let lam = Partition::of(&[2, 1]);
        let f = interp_theta(&lam, m, n, &a, &b, &v, &ps, &mut rng).unwrap();
        for _ in 0..3 {
            let x1 = draw_complex(&mut rng, ps.prec, 0.5, 2.0);
            let pt = vec![x1, a.clone()]; // a q⁰ t⁰
            let (val, scale) = f.eval_with_scale(&pt).unwrap();
            assert!((val.abs() / scale).to_f64() <= c.tol);
        }
        // b-side: λ=(1,1), l=1, μ₁=2 > λ₁=1
        let lam = Partition::of(&[1, 1]);
        let f = interp_theta(&lam, m, n, &a, &b, &v, &ps, &mut rng).unwrap();
        for _ in 0..3 {
            let x2 = draw_complex(&mut rng, ps.prec, 0.5, 2.0);
            let pt = vec![b.clone(), x2]; // b q^{m−2} t⁰ = b
            let (val, scale) = f.eval_with_scale(&pt).unwrap();
            assert!((val.abs() / scale).to_f64() <= c.tol);
        }
    }

    #[test]
    fn abelian_function_principal_values() {
        let (c, ps, mut rng) = setup("ip-rstar", 3, 2, &["v"]);
        let (a, b) = (ps.get("a").clone(), ps.get("b").clone());
        let n = 2usize;
        let tn1 = ps.t.powi(n as i64 - 1);
        // λ = ∅ is constantly 1
        let xs: Vec<MpComplex> = (0..n).map(|_| draw_complex(&mut rng, ps.prec, 0.5, 2.0)).collect();
        let one = rstar_eval(&Partition::empty(), n, &a, &b, &xs, &ps, &mut rng).unwrap();
        assert!(rel_residual(&one, &MpComplex::one(ps.prec), c.digits) <= c.tol);
        for lam in [Partition::of(&[1]), Partition::of(&[2, 1])] {
            let f = rstar_fn(&lam, n, &a, &b, &ps, &mut rng).unwrap();
            // principal point (v t^{n−i}) ↦ Δ⁰_λ(t^{n−1}a/b | t^{n−1}av, a/v)
            let v = draw_complex(&mut rng, ps.prec, 0.5, 2.0);
            let pt: Vec<MpComplex> =
                (1..=n).map(|i| v.mul(&ps.t.powi((n - i) as i64))).collect();
            let got = f.eval(&pt).unwrap();
            let want = delta0(
                &lam,
                &tn1.mul(&a).div(&b),
                &[tn1.mul(&a).mul(&v), a.div(&v)],
                &ps,
            )
            .unwrap();
            assert!(rel_residual(&got, &want, c.digits) <= c.tol, "λ = {lam:?}");
            // spectral point (a q^{λ_i} t^{n−i}) ↦ closed product
            let pt: Vec<MpComplex> = (1..=n)
                .map(|i| a.mul(&ps.q.powi(lam.part(i) as i64)).mul(&ps.t.powi((n - i) as i64)))
                .collect();
            let got = f.eval(&pt).unwrap();
            let aob = tn1.mul(&a).div(&b);
            let want = c_plus(&lam, &[ps.t.powi(2 * n as i64 - 2).mul(&a).mul(&a)], &ps)
                .unwrap()
                .mul(&c_zero(&lam, &[ps.p.mul(&ps.q).mul(&tn1).mul(&a).div(&b)], &ps).unwrap())
                .div(&c_plus(&lam, &[aob.clone()], &ps).unwrap())
                .div(&c_zero(&lam, &[tn1.mul(&a).mul(&b)], &ps).unwrap())
                .div(&delta(&lam, &aob, &[ps.t.powi(n as i64)], &ps).unwrap());
            assert!(rel_residual(&got, &want, c.digits) <= c.tol, "λ = {lam:?} spectral");
        }
    }

    #[test]
    fn abelian_function_is_m_independent() {
        let (c, ps, mut rng) = setup("ip-mfree", 3, 2, &[]);
        let (a, b) = (ps.get("a").clone(), ps.get("b").clone());
        let lam = Partition::of(&[2, 1]);
        let f_min = rstar_fn_with_m(&lam, 2, 2, &a, &b, &ps, &mut rng).unwrap();
        let f_big = rstar_fn_with_m(&lam, 3, 2, &a, &b, &ps, &mut rng).unwrap();
        for _ in 0..3 {
            let xs: Vec<MpComplex> =
                (0..2).map(|_| draw_complex(&mut rng, ps.prec, 0.5, 2.0)).collect();
            let l = f_min.eval(&xs).unwrap();
            let r = f_big.eval(&xs).unwrap();
            assert!(rel_residual(&l, &r, c.digits) <= c.tol);
        }
    }

    #[test]
    fn abelian_difference_equation() {
        // With t^{n−1} a b c d = p:
        // D(a,b,c,d) R*(; √q a, √q b) = ∏_i θ(ab t^{n−i}, ac q^{λ_i} t^{n−i},
        //   bc q^{−λ_i} t^{i−1}; p) · R*(; a, b).
        let c = NumericContext::default();
        let n = 2usize;
        let spec = add_interp_regularity(
            SampleSpec::new(2, n).names(&["a", "b", "c", "d"]).constraint(
                vec![("t", n as i64 - 1), ("a", 1), ("b", 1), ("c", 1), ("d", 1), ("p", -1)],
                "d",
            ),
            2,
            n,
            &vec![("a", 1)],
            &vec![("b", 1)],
        );
        let mut rng = c.rng("ip-rstar-diffeq");
        let ps = sample_generic(&c, &mut rng, &spec).unwrap();
        let (a, b) = (ps.get("a").clone(), ps.get("b").clone());
        let (cc, d) = (ps.get("c").clone(), ps.get("d").clone());
        let qh = ps.q_half().clone();
        let lam = Partition::of(&[2, 1]);
        let shifted = rstar_fn(&lam, n, &qh.mul(&a), &qh.mul(&b), &ps, &mut rng).unwrap();
        let base = rstar_fn(&lam, n, &a, &b, &ps, &mut rng).unwrap();
        let op = crate::diffops::apply_d(
            &a,
            &b,
            &cc,
            &d,
            &ps,
            n,
            &crate::diffops::Evaluable::new(n, true, move |xs| shifted.eval(xs)),
        );
        let mut eigen = MpComplex::one(ps.prec);
        for i in 1..=n {
            let tni = ps.t.powi((n - i) as i64);
            let ti1 = ps.t.powi(i as i64 - 1);
            eigen = eigen
                .mul(&theta(&a.mul(&b).mul(&tni), &ps.p, ps.digits).unwrap())
                .mul(
                    &theta(
                        &a.mul(&cc).mul(&ps.q.powi(lam.part(i) as i64)).mul(&tni),
                        &ps.p,
                        ps.digits,
                    )
                    .unwrap(),
                )
                .mul(
                    &theta(
                        &b.mul(&cc).mul(&ps.q.powi(-(lam.part(i) as i64))).mul(&ti1),
                        &ps.p,
                        ps.digits,
                    )
                    .unwrap(),
                );
        }
        for _ in 0..3 {
            let xs: Vec<MpComplex> =
                (0..n).map(|_| draw_complex(&mut rng, ps.prec, 0.5, 2.0)).collect();
            let lhs = op.eval(&xs).unwrap();
            let rhs = eigen.mul(&base.eval(&xs).unwrap());
            assert!(rel_residual(&lhs, &rhs, c.digits) <= c.tol);
        }
    }

    #[test]
    fn negation_and_nome_shift_symmetries() {
        let (c, ps, mut rng) = setup("ip-negate", 2, 2, &[]);
        let (a, b) = (ps.get("a").clone(), ps.get("b").clone());
        let n = 2usize;
        let lam = Partition::of(&[2, 1]);
        let stats = lam.stats();
        let f = rstar_fn(&lam, n, &a, &b, &ps, &mut rng).unwrap();
        let f_neg = rstar_fn(&lam, n, &a.neg(), &b.neg(), &ps, &mut rng).unwrap();
        let sp = ps.p.sqrt();
        let f_pp = rstar_fn(&lam, n, &sp.mul(&a), &sp.mul(&b), &ps, &mut rng).unwrap();
        let f_pm = rstar_fn(&lam, n, &sp.mul(&a), &b.div(&sp), &ps, &mut rng).unwrap();
        for _ in 0..3 {
            let xs: Vec<MpComplex> =
                (0..n).map(|_| draw_complex(&mut rng, ps.prec, 0.5, 2.0)).collect();
            let base = f.eval(&xs).unwrap();
            // R*(z; a, b) = R*(−z; −a, −b)
            let neg_xs: Vec<MpComplex> = xs.iter().map(|x| x.neg()).collect();
            let got = f_neg.eval(&neg_xs).unwrap();
            assert!(rel_residual(&got, &base, c.digits) <= c.tol, "negation");
            // R*(√p z; √p a, √p b) = (b t^{1−n}/(aq))^{|λ|} t^{2n(λ)} q^{−2n(λ′)} R*(z; a, b)
            let sp_xs: Vec<MpComplex> = xs.iter().map(|x| sp.mul(x)).collect();
            let got = f_pp.eval(&sp_xs).unwrap();
            let factor = b
                .mul(&ps.t.powi(1 - n as i64))
                .div(&a.mul(&ps.q))
                .powi(stats.size as i64)
                .mul(&ps.t.powi(2 * stats.nstat as i64))
                .mul(&ps.q.powi(-2 * stats.nstat_conj as i64));
            assert!(
                rel_residual(&got, &factor.mul(&base), c.digits) <= c.tol,
                "simultaneous nome shift"
            );
            // R*(√p z; √p a, b/√p) = (pq/(ab))^{|λ|} R*(z; a, b)
            let got = f_pm.eval(&sp_xs).unwrap();
            let factor = ps.p.mul(&ps.q).div(&a.mul(&b)).powi(stats.size as i64);
            assert!(
                rel_residual(&got, &factor.mul(&base), c.digits) <= c.tol,
                "split nome shift"
            );
        }
    }
}
