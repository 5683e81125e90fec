//! Biorthogonal abelian functions R̃⁽ⁿ⁾_λ(; t₀:t₁,t₂,t₃; u₀,u₁; q,t;p).
//!
//! The single constructor is the binomial-formula expansion
//!
//!   R̃⁽ⁿ⁾_λ = Σ_{μ⊂λ} (λ, μ)_{[1/(u₀u₁), 1/(t^{n−1}t₀u₁)]} · R*⁽ⁿ⁾_μ(; t₀, u₀)
//!            / Δ⁰_μ(t^{n−1}t₀/u₀ | t^{n−1}t₀t₁, t^{n−1}t₀t₂, t^{n−1}t₀t₃, t^{n−1}t₀u₁)
//!
//! under the balance condition t^{2n−2} t₀t₁t₂t₃u₀u₁ = pq.  Everything else
//! (difference equation, t₀↔t₁ symmetry, evaluation symmetry, discrete
//! biorthogonality, quasi-branching/Pieri, the Cauchy expansion) is a theorem
//! about this sum and lives in the tests and the check harness.

use rand_chacha::ChaCha20Rng;

use crate::binomial::binom;
use crate::error::{Error, Result};
use crate::interpolation::{rstar_fn, RStar};
use crate::mp::MpComplex;
use crate::numerics::{rel_residual, NumericContext, ParameterSet};
use crate::partition::{enumerate_interval, Partition};
use crate::symbols::delta0;

/// The six-parameter family underlying R̃, with its ambient variable count
/// and base point.  Balance t^{2n−2} t₀t₁t₂t₃ u₀u₁ = pq is enforced at
/// construction.
#[derive(Debug, Clone)]
pub struct BiorthParams {
    pub t0: MpComplex,
    pub t1: MpComplex,
    pub t2: MpComplex,
    pub t3: MpComplex,
    pub u0: MpComplex,
    pub u1: MpComplex,
    pub n: usize,
    pub ps: ParameterSet,
}

impl BiorthParams {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        n: usize,
        t0: MpComplex,
        t1: MpComplex,
        t2: MpComplex,
        t3: MpComplex,
        u0: MpComplex,
        u1: MpComplex,
        ps: &ParameterSet,
        ctx: &NumericContext,
    ) -> Result<Self> {
        let prod = ps
            .t
            .powi(2 * n as i64 - 2)
            .mul(&t0)
            .mul(&t1)
            .mul(&t2)
            .mul(&t3)
            .mul(&u0)
            .mul(&u1);
        let pq = ps.p.mul(&ps.q);
        let res = rel_residual(&prod, &pq, ps.digits);
        if res > ctx.tol {
            return Err(Error::BadParameter(format!(
                "parameters are not balanced: relative defect {res:.3e}"
            )));
        }
        Ok(BiorthParams { t0, t1, t2, t3, u0, u1, n, ps: ps.clone() })
    }

    /// The parameters with t₀ and t₁ exchanged (still balanced).
    pub fn swap01(&self, ctx: &NumericContext) -> Result<Self> {
        BiorthParams::new(
            self.n,
            self.t1.clone(),
            self.t0.clone(),
            self.t2.clone(),
            self.t3.clone(),
            self.u0.clone(),
            self.u1.clone(),
            &self.ps,
            ctx,
        )
    }

    /// The parameters with u₀ and u₁ exchanged (still balanced).
    pub fn swap_u(&self, ctx: &NumericContext) -> Result<Self> {
        BiorthParams::new(
            self.n,
            self.t0.clone(),
            self.t1.clone(),
            self.t2.clone(),
            self.t3.clone(),
            self.u1.clone(),
            self.u0.clone(),
            &self.ps,
            ctx,
        )
    }

    /// The grid point (… t₀ t^{n−i} q^{κ_i} …) indexed by a partition κ.
    pub fn grid_point(&self, kap: &Partition) -> Vec<MpComplex> {
        (1..=self.n)
            .map(|i| {
                self.t0
                    .mul(&self.ps.t.powi((self.n - i) as i64))
                    .mul(&self.ps.q.powi(kap.part(i) as i64))
            })
            .collect()
    }
}

/// Dual parameters for evaluation symmetry: t̂₀ = √(t₀t₁t₂t₃/pq) (principal
/// branch), t̂₀t̂_r = t₀t_r for r = 1,2,3, and û_r/t̂₀ = u_r/t₀.  Applying it
/// twice returns the starting point up to the square-root branch.
pub fn hat_params(bp: &BiorthParams, ctx: &NumericContext) -> Result<BiorthParams> {
    let ps = &bp.ps;
    let pq = ps.p.mul(&ps.q);
    let t0h = bp.t0.mul(&bp.t1).mul(&bp.t2).mul(&bp.t3).div(&pq).sqrt();
    let scale = t0h.div(&bp.t0);
    BiorthParams::new(
        bp.n,
        t0h.clone(),
        bp.t0.mul(&bp.t1).div(&t0h),
        bp.t0.mul(&bp.t2).div(&t0h),
        bp.t0.mul(&bp.t3).div(&t0h),
        bp.u0.mul(&scale),
        bp.u1.mul(&scale),
        ps,
        ctx,
    )
}

/// A solved R̃⁽ⁿ⁾_λ: the binomial-formula coefficients paired with reusable
/// R*_μ evaluators (the μ = ∅ term is the constant 1).
#[derive(Debug)]
pub struct RTilde {
    pub lam: Partition,
    pub bp: BiorthParams,
    terms: Vec<(MpComplex, Option<RStar>)>,
}

impl RTilde {
    pub fn eval(&self, xs: &[MpComplex]) -> Result<MpComplex> {
        let mut acc = MpComplex::zero(self.bp.ps.prec);
        for (coef, rs) in &self.terms {
            let v = match rs {
                Some(f) => f.eval(xs)?,
                None => MpComplex::one(self.bp.ps.prec),
            };
            acc = acc.add(&coef.mul(&v));
        }
        Ok(acc)
    }
}

/// Build R̃⁽ⁿ⁾_λ for the given balanced parameters.
pub fn rtilde_fn(
    lam: &Partition,
    bp: &BiorthParams,
    ctx: &NumericContext,
    rng: &mut ChaCha20Rng,
) -> Result<RTilde> {
    if lam.length() > bp.n {
        return Err(Error::BadParameter(format!(
            "{lam:?} has more rows than the {} variables",
            bp.n
        )));
    }
    let ps = &bp.ps;
    let tn1 = ps.t.powi(bp.n as i64 - 1);
    let a_bin = bp.u0.mul(&bp.u1).recip();
    let b_bin = tn1.mul(&bp.t0).mul(&bp.u1).recip();
    let d_arg = tn1.mul(&bp.t0).div(&bp.u0);
    let d_vs = [
        tn1.mul(&bp.t0).mul(&bp.t1),
        tn1.mul(&bp.t0).mul(&bp.t2),
        tn1.mul(&bp.t0).mul(&bp.t3),
        tn1.mul(&bp.t0).mul(&bp.u1),
    ];
    let mut terms = Vec::new();
    for mu in enumerate_interval(&Partition::empty(), lam) {
        let den = delta0(&mu, &d_arg, &d_vs, ps)?;
        if den.is_zero() {
            return Err(Error::Singular(
                "expansion denominator vanishes at these parameters".into(),
            ));
        }
        let coef = binom(lam, &mu, &a_bin, &b_bin, ps, ctx)?.div(&den);
        let rs = if mu.is_empty() {
            None
        } else {
            Some(rstar_fn(&mu, bp.n, &bp.t0, &bp.u0, ps, rng)?)
        };
        terms.push((coef, rs));
    }
    Ok(RTilde { lam: lam.clone(), bp: bp.clone(), terms })
}

/// One-shot evaluation of R̃⁽ⁿ⁾_λ at a point.
pub fn rtilde_eval(
    lam: &Partition,
    bp: &BiorthParams,
    xs: &[MpComplex],
    ctx: &NumericContext,
    rng: &mut ChaCha20Rng,
) -> Result<MpComplex> {
    rtilde_fn(lam, bp, ctx, rng)?.eval(xs)
}

/// R̃⁽ⁿ⁾_λ evaluated on the parameter grid, at (… t₀ t^{n−i} q^{κ_i} …).
pub fn rtilde_at_partition(
    lam: &Partition,
    kap: &Partition,
    bp: &BiorthParams,
    ctx: &NumericContext,
    rng: &mut ChaCha20Rng,
) -> Result<MpComplex> {
    if kap.length() > bp.n {
        return Err(Error::BadParameter(format!(
            "grid index {kap:?} has more rows than the {} variables",
            bp.n
        )));
    }
    rtilde_eval(lam, bp, &bp.grid_point(kap), ctx, rng)
}
