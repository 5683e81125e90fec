//! Finite-dimensional model of BC_n-symmetric theta functions of degree m,
//! and the linear solver that builds elements from vanishing data.
//!
//! A BC_n-symmetric theta function of degree m is symmetric under variable
//! permutations and under x_i ↦ 1/x_i, and satisfies
//! f(p·x₁, x₂, …) = (1/(p x₁²))^m · f(x₁, x₂, …).  The space of such
//! functions has dimension binom(m+n, n).
//!
//! We span it with randomized products: univariate factors
//!
//!   b_k(x) = ∏_{j=1..m} θ(w_{k,j} x; p) θ(w_{k,j} / x; p),   k = 0..m,
//!
//! each of degree m by construction, and multivariate orbit sums
//!
//!   B_μ(x₁..x_n) = Σ_{distinct arrangements c of (μ₁..μ_n)} ∏_i b_{c_i}(x_i)
//!
//! over partitions μ ⊂ m^n (μ padded with zeros to length n).  Orbit sums —
//! rather than full permutation sums — make the m = 0 basis exactly the
//! constant 1.  The w points are drawn from a seeded stream and certified by
//! a conditioning check on a random evaluation matrix, with resampling on
//! failure; generically the B_μ are independent, so the certificate almost
//! never needs a second attempt.

use std::sync::Arc;

use rand_chacha::ChaCha20Rng;
use rug::Float;

use crate::error::{Error, Result};
use crate::linalg::{abs_dot, solve_with_condition};
use crate::mp::MpComplex;
use crate::numerics::{draw_complex, theta, ParameterSet};
use crate::partition::{enumerate_rectangle, Partition};

/// A certified random product basis for degree-m BC_n-symmetric theta
/// functions at a fixed nome.
#[derive(Debug)]
pub struct ThetaBasis {
    pub m: u32,
    pub n: usize,
    /// w[k][j−1] for k = 0..m, j = 1..m.
    pub w: Vec<Vec<MpComplex>>,
    /// Index partitions μ ⊂ m^n in canonical (lexicographic) order.
    pub mus: Vec<Partition>,
    pub p: MpComplex,
    pub digits: u32,
    pub prec: u32,
}

impl ThetaBasis {
    pub fn dim(&self) -> usize {
        self.mus.len()
    }

    pub fn index_of(&self, mu: &Partition) -> Option<usize> {
        self.mus.iter().position(|x| x == mu)
    }

    /// b_k(x) = ∏_j θ(w_{k,j} x; p) θ(w_{k,j}/x; p).
    pub fn b_univariate(&self, k: usize, x: &MpComplex) -> Result<MpComplex> {
        let mut acc = MpComplex::one(self.prec);
        for wkj in &self.w[k] {
            acc = acc.mul(&theta(&wkj.mul(x), &self.p, self.digits)?);
            acc = acc.mul(&theta(&wkj.div(x), &self.p, self.digits)?);
        }
        Ok(acc)
    }

    /// Table b_k(x_i) for k = 0..m, i = 1..n (one univariate evaluation per
    /// entry; every B_μ at this point is then a sum of product lookups).
    pub fn eval_table(&self, xs: &[MpComplex]) -> Result<Vec<Vec<MpComplex>>> {
        assert_eq!(xs.len(), self.n, "point dimension must match n");
        (0..=self.m as usize)
            .map(|k| xs.iter().map(|x| self.b_univariate(k, x)).collect())
            .collect()
    }

    /// B_μ(x) from a precomputed [`eval_table`].
    pub fn b_mu_from_table(&self, mu: &Partition, table: &[Vec<MpComplex>]) -> MpComplex {
        let mut padded: Vec<usize> = (1..=self.n).map(|i| mu.part(i) as usize).collect();
        padded.sort_unstable_by(|a, b| b.cmp(a));
        let mut acc = MpComplex::zero(self.prec);
        for arrangement in distinct_arrangements(&padded) {
            let mut prod = MpComplex::one(self.prec);
            for (i, &k) in arrangement.iter().enumerate() {
                prod = prod.mul(&table[k][i]);
            }
            acc = acc.add(&prod);
        }
        acc
    }

    pub fn b_mu(&self, mu: &Partition, xs: &[MpComplex]) -> Result<MpComplex> {
        Ok(self.b_mu_from_table(mu, &self.eval_table(xs)?))
    }

    /// Row vector (B_μ(x))_μ in canonical order.
    pub fn row_at(&self, xs: &[MpComplex]) -> Result<Vec<MpComplex>> {
        let table = self.eval_table(xs)?;
        Ok(self.mus.iter().map(|mu| self.b_mu_from_table(mu, &table)).collect())
    }
}

/// All distinct arrangements of a multiset of small integers.
fn distinct_arrangements(sorted_desc: &[usize]) -> Vec<Vec<usize>> {
    if sorted_desc.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    let mut seen = Vec::new();
    for i in 0..sorted_desc.len() {
        let v = sorted_desc[i];
        if seen.contains(&v) {
            continue;
        }
        seen.push(v);
        let mut rest = sorted_desc.to_vec();
        rest.remove(i);
        for mut tail in distinct_arrangements(&rest) {
            let mut head = vec![v];
            head.append(&mut tail);
            out.push(head);
        }
    }
    out
}

/// Draw and certify a basis.  The certificate solves a random square
/// evaluation system under the usual conditioning guard; on failure the w
/// points are redrawn (up to 20 times) before reporting degeneracy.
pub fn make_basis(
    m: u32,
    n: usize,
    ps: &ParameterSet,
    rng: &mut ChaCha20Rng,
) -> Result<Arc<ThetaBasis>> {
    let mus = enumerate_rectangle(m, n);
    let dim = mus.len();
    for _ in 0..20 {
        let w: Vec<Vec<MpComplex>> = (0..=m as usize)
            .map(|_| (0..m as usize).map(|_| draw_complex(rng, ps.prec, 0.5, 2.0)).collect())
            .collect();
        let basis = ThetaBasis {
            m,
            n,
            w,
            mus: mus.clone(),
            p: ps.p.clone(),
            digits: ps.digits,
            prec: ps.prec,
        };
        let nodes: Vec<Vec<MpComplex>> = (0..dim)
            .map(|_| (0..n).map(|_| draw_complex(rng, ps.prec, 0.5, 2.0)).collect())
            .collect();
        let mut matrix = Vec::with_capacity(dim);
        let mut ok = true;
        for node in &nodes {
            match basis.row_at(node) {
                Ok(row) => matrix.push(row),
                Err(_) => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        let rhs = vec![MpComplex::one(ps.prec); dim];
        if solve_with_condition(&matrix, &rhs, ps.digits).is_ok() {
            return Ok(Arc::new(basis));
        }
    }
    Err(Error::DegenerateSystem(format!(
        "no well-conditioned degree-{m} basis in {n} variables after 20 resamples"
    )))
}

/// A BC_n-symmetric theta function of degree m: coefficients over a shared
/// certified basis.  Immutable once built.
#[derive(Debug, Clone)]
pub struct SymThetaElement {
    pub basis: Arc<ThetaBasis>,
    /// One coefficient per μ ⊂ m^n, in the basis' canonical order.
    pub coeffs: Vec<MpComplex>,
    /// Conditioning of the solve that produced this element (1.0 for
    /// elements assembled directly from coefficients).
    pub solve_condition: f64,
}

impl SymThetaElement {
    pub fn from_coeffs(basis: Arc<ThetaBasis>, coeffs: Vec<MpComplex>) -> Self {
        assert_eq!(coeffs.len(), basis.dim(), "one coefficient per basis element");
        SymThetaElement { basis, coeffs, solve_condition: 1.0 }
    }

    pub fn evaluate(&self, xs: &[MpComplex]) -> Result<MpComplex> {
        Ok(self.evaluate_with_scale(xs)?.0)
    }

    /// Value together with the magnitude budget Σ_μ |c_μ|·|B_μ(x)|, which is
    /// the right denominator for judging how relatively small the value is
    /// (e.g. for vanishing-condition residuals).
    pub fn evaluate_with_scale(&self, xs: &[MpComplex]) -> Result<(MpComplex, Float)> {
        let table = self.basis.eval_table(xs)?;
        let row: Vec<MpComplex> =
            self.basis.mus.iter().map(|mu| self.basis.b_mu_from_table(mu, &table)).collect();
        let mut value = MpComplex::zero(self.basis.prec);
        for (c, b) in self.coeffs.iter().zip(&row) {
            value = value.add(&c.mul(b));
        }
        Ok((value, abs_dot(&self.coeffs, &row)))
    }

    /// {m, n, w-array, coefficient array} with full-precision decimal parts.
    pub fn to_json(&self) -> serde_json::Value {
        let pair = |v: &MpComplex| {
            let (re, im) = v.to_decimal_strings();
            serde_json::json!([re, im])
        };
        serde_json::json!({
            "m": self.basis.m,
            "n": self.basis.n,
            "w": self.basis.w.iter().map(|row| row.iter().map(pair).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "coeffs": self.coeffs.iter().map(pair).collect::<Vec<_>>(),
        })
    }
}

/// Build the unique (up to the imposed normalization) element vanishing at
/// the given binom(m+n,n) − 1 points and taking `value` at `norm_point`.
///
/// The square system [B_μ(point)]·c = (0,…,0,value) is solved by pivoted
/// elimination at working precision; ill-conditioning (beyond 10^(digits/2))
/// signals non-generic input and is reported as an error.
pub fn solve_from_conditions(
    basis: &Arc<ThetaBasis>,
    vanishing_points: &[Vec<MpComplex>],
    norm_point: &[MpComplex],
    value: &MpComplex,
) -> Result<SymThetaElement> {
    let dim = basis.dim();
    if vanishing_points.len() != dim - 1 {
        return Err(Error::BadParameter(format!(
            "need exactly {} vanishing points for a degree-{} basis in {} variables, got {}",
            dim - 1,
            basis.m,
            basis.n,
            vanishing_points.len()
        )));
    }
    let mut matrix = Vec::with_capacity(dim);
    let mut rhs = Vec::with_capacity(dim);
    for pt in vanishing_points {
        matrix.push(basis.row_at(pt)?);
        rhs.push(MpComplex::zero(basis.prec));
    }
    matrix.push(basis.row_at(norm_point)?);
    rhs.push(value.clone());
    let (coeffs, cond) = solve_with_condition(&matrix, &rhs, basis.digits)?;
    Ok(SymThetaElement { basis: basis.clone(), coeffs, solve_condition: cond })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{rel_residual, sample_generic, NumericContext, SampleSpec};

    fn setup(label: &str) -> (NumericContext, ParameterSet, ChaCha20Rng) {
        let c = NumericContext::default();
        let mut rng = c.rng(label);
        let ps = sample_generic(&c, &mut rng, &SampleSpec::new(0, 1)).unwrap();
        (c, ps, rng)
    }

    #[test]
    fn degree_zero_basis_is_constant_one() {
        let (c, ps, mut rng) = setup("ts-m0");
        let basis = make_basis(0, 2, &ps, &mut rng).unwrap();
        assert_eq!(basis.dim(), 1);
        let x = vec![draw_complex(&mut rng, ps.prec, 0.5, 2.0), draw_complex(&mut rng, ps.prec, 0.5, 2.0)];
        let v = basis.b_mu(&Partition::empty(), &x).unwrap();
        assert!(rel_residual(&v, &MpComplex::one(ps.prec), c.digits) <= c.tol);
    }

    #[test]
    fn univariate_factors_satisfy_degree_functional_equation() {
        // f(px) = (1/(p x²))^m f(x) for each b_k, here m = 1 and m = 2.
        let (c, ps, mut rng) = setup("ts-funceq");
        for m in [1u32, 2] {
            let basis = make_basis(m, 1, &ps, &mut rng).unwrap();
            let x = draw_complex(&mut rng, ps.prec, 0.5, 2.0);
            let px = ps.p.mul(&x);
            let factor = ps.p.mul(&x).mul(&x).recip().powi(m as i64);
            for k in 0..=m as usize {
                let lhs = basis.b_univariate(k, &px).unwrap();
                let rhs = factor.mul(&basis.b_univariate(k, &x).unwrap());
                assert!(rel_residual(&lhs, &rhs, c.digits) <= c.tol, "m={m}, k={k}");
            }
        }
    }

    #[test]
    fn dimension_and_conditioning_at_2_2() {
        let (_c, ps, mut rng) = setup("ts-22");
        let basis = make_basis(2, 2, &ps, &mut rng).unwrap();
        assert_eq!(basis.dim(), 6); // binom(4,2)
        assert_eq!(basis.w.len(), 3);
        assert!(basis.w.iter().all(|row| row.len() == 2));
    }

    #[test]
    fn element_symmetries_and_functional_equation() {
        let (c, ps, mut rng) = setup("ts-elem");
        let basis = make_basis(2, 2, &ps, &mut rng).unwrap();
        let coeffs: Vec<MpComplex> =
            (0..basis.dim()).map(|_| draw_complex(&mut rng, ps.prec, 0.5, 2.0)).collect();
        let elem = SymThetaElement::from_coeffs(basis, coeffs);
        let x1 = draw_complex(&mut rng, ps.prec, 0.5, 2.0);
        let x2 = draw_complex(&mut rng, ps.prec, 0.5, 2.0);
        let base = elem.evaluate(&[x1.clone(), x2.clone()]).unwrap();
        // permutation
        let perm = elem.evaluate(&[x2.clone(), x1.clone()]).unwrap();
        assert!(rel_residual(&base, &perm, c.digits) <= c.tol);
        // inversion in the first variable
        let inv = elem.evaluate(&[x1.recip(), x2.clone()]).unwrap();
        assert!(rel_residual(&base, &inv, c.digits) <= c.tol);
        // degree-2 functional equation in the first variable
        let shifted = elem.evaluate(&[ps.p.mul(&x1), x2.clone()]).unwrap();
        let factor = ps.p.mul(&x1).mul(&x1).recip().powi(2);
        assert!(rel_residual(&shifted, &factor.mul(&base), c.digits) <= c.tol);
        // zero element evaluates to zero
        let zero = SymThetaElement::from_coeffs(
            elem.basis.clone(),
            vec![MpComplex::zero(ps.prec); elem.basis.dim()],
        );
        assert!(zero.evaluate(&[x1, x2]).unwrap().is_zero());
    }

    #[test]
    fn solver_matches_univariate_closed_form() {
        // Degree 1 in one variable: the element vanishing at z₀ must be
        // proportional to θ(z₀ x; p) θ(z₀ / x; p).
        let (c, ps, mut rng) = setup("ts-solve11");
        let basis = make_basis(1, 1, &ps, &mut rng).unwrap();
        assert_eq!(basis.dim(), 2);
        let z0 = draw_complex(&mut rng, ps.prec, 0.5, 2.0);
        let v = draw_complex(&mut rng, ps.prec, 0.5, 2.0);
        let closed = |x: &MpComplex| {
            theta(&z0.mul(x), &ps.p, ps.digits)
                .unwrap()
                .mul(&theta(&z0.div(x), &ps.p, ps.digits).unwrap())
        };
        let norm_value = closed(&v);
        let elem =
            solve_from_conditions(&basis, &[vec![z0.clone()]], &[v.clone()], &norm_value).unwrap();
        for _ in 0..4 {
            let x = draw_complex(&mut rng, ps.prec, 0.5, 2.0);
            let got = elem.evaluate(&[x.clone()]).unwrap();
            let want = closed(&x);
            assert!(rel_residual(&got, &want, c.digits) <= c.tol);
        }
        // vanishing is relative to the element's own magnitude budget
        let (at_z0, scale) = elem.evaluate_with_scale(&[z0]).unwrap();
        let resid = (at_z0.abs() / scale).to_f64();
        assert!(resid <= c.tol, "vanishing residual {resid:.3e}");
    }

    #[test]
    fn solver_fills_vanishing_conditions_at_2_2() {
        let (c, ps, mut rng) = setup("ts-solve22");
        let basis = make_basis(2, 2, &ps, &mut rng).unwrap();
        let pts: Vec<Vec<MpComplex>> = (0..basis.dim() - 1)
            .map(|_| (0..2).map(|_| draw_complex(&mut rng, ps.prec, 0.5, 2.0)).collect())
            .collect();
        let norm: Vec<MpComplex> =
            (0..2).map(|_| draw_complex(&mut rng, ps.prec, 0.5, 2.0)).collect();
        let one = MpComplex::one(ps.prec);
        let elem = solve_from_conditions(&basis, &pts, &norm, &one).unwrap();
        for pt in &pts {
            let (v, scale) = elem.evaluate_with_scale(pt).unwrap();
            assert!((v.abs() / scale).to_f64() <= c.tol);
        }
        let at_norm = elem.evaluate(&norm).unwrap();
        assert!(rel_residual(&at_norm, &one, c.digits) <= c.tol);
        // wrong number of conditions is rejected
        assert!(solve_from_conditions(&basis, &pts[..2], &norm, &one).is_err());
    }

    #[test]
    fn serialization_shape() {
        let (_c, ps, mut rng) = setup("ts-json");
        let basis = make_basis(1, 2, &ps, &mut rng).unwrap();
        let dim = basis.dim();
        let coeffs: Vec<MpComplex> =
            (0..dim).map(|_| draw_complex(&mut rng, ps.prec, 0.5, 2.0)).collect();
        let elem = SymThetaElement::from_coeffs(basis, coeffs);
        let j = elem.to_json();
        assert_eq!(j["m"], 1);
        assert_eq!(j["n"], 2);
        assert_eq!(j["coeffs"].as_array().unwrap().len(), dim);
        assert_eq!(j["w"].as_array().unwrap().len(), 2);
    }
}
