//! Partition-indexed theta-product symbols.
//!
//! For a partition λ with conjugate λ′, the three C symbols are products of
//! one theta value per cell (i, j) ∈ λ (rows i, columns j, both 1-based):
//!
//! - zero kind:  θ(q^{j−1} t^{1−i} x; p)
//! - minus kind: θ(q^{λ_i−j} t^{λ′_j−i} x; p)
//! - plus kind:  θ(q^{λ_i+j−1} t^{2−λ′_j−i} x; p)
//!
//! Several arguments before the semicolon multiply:
//! C_λ(a, b; q, t; p) = C_λ(a)·C_λ(b).
//!
//! On top of these sit the Δ⁰ and Δ symbols (density building blocks for
//! all the summation identities downstream):
//!
//!   Δ⁰_λ(a | …b_i…) = ∏_i C⁰_λ(b_i) / C⁰_λ(pqa/b_i)
//!   Δ_λ(a | …b_i…)  = Δ⁰_λ(a | …b_i…) ·
//!                     C⁰_{2λ²}(pqa) / (C⁻_λ(pq, t) · C⁺_λ(a, pqa/t))
//!
//! where 2λ² is the partition with (2λ²)_i = 2·λ_{⌈i/2⌉}.  Δ of a full
//! rectangle is also computable by a limit of Δ⁰ alone ([`delta_rect`]),
//! which gives an independent route used by the identity checks.

use crate::error::{Error, Result};
use crate::mp::MpComplex;
use crate::numerics::{pow10, theta, theta_pochhammer, ParameterSet};
use crate::partition::Partition;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CKind {
    Zero,
    Minus,
    Plus,
}

/// C symbol of the given kind; several arguments multiply.
pub fn c_symbol(
    kind: CKind,
    lam: &Partition,
    xs: &[MpComplex],
    ps: &ParameterSet,
) -> Result<MpComplex> {
    let mut acc = MpComplex::one(ps.prec);
    for x in xs {
        acc = acc.mul(&c_symbol_one(kind, lam, x, ps)?);
    }
    Ok(acc)
}

fn c_symbol_one(
    kind: CKind,
    lam: &Partition,
    x: &MpComplex,
    ps: &ParameterSet,
) -> Result<MpComplex> {
    match kind {
        CKind::Zero => {
            // Row i contributes θ(t^{1−i} x; q; p)_{λ_i}.
            let mut acc = MpComplex::one(ps.prec);
            for i in 1..=lam.length() {
                let base = ps.t.powi(1 - i as i64).mul(x);
                acc = acc.mul(&theta_pochhammer(&base, &ps.q, &ps.p, lam.part(i), ps.digits)?);
            }
            Ok(acc)
        }
        CKind::Minus | CKind::Plus => {
            let conj = lam.conjugate();
            let mut acc = MpComplex::one(ps.prec);
            for (i, j) in lam.cells() {
                let (eq, et) = if kind == CKind::Minus {
                    (lam.part(i) as i64 - j as i64, conj.part(j) as i64 - i as i64)
                } else {
                    (lam.part(i) as i64 + j as i64 - 1, 2 - conj.part(j) as i64 - i as i64)
                };
                let arg = ps.q.powi(eq).mul(&ps.t.powi(et)).mul(x);
                acc = acc.mul(&theta(&arg, &ps.p, ps.digits)?);
            }
            Ok(acc)
        }
    }
}

pub fn c_zero(lam: &Partition, xs: &[MpComplex], ps: &ParameterSet) -> Result<MpComplex> {
    c_symbol(CKind::Zero, lam, xs, ps)
}

pub fn c_minus(lam: &Partition, xs: &[MpComplex], ps: &ParameterSet) -> Result<MpComplex> {
    c_symbol(CKind::Minus, lam, xs, ps)
}

pub fn c_plus(lam: &Partition, xs: &[MpComplex], ps: &ParameterSet) -> Result<MpComplex> {
    c_symbol(CKind::Plus, lam, xs, ps)
}

/// C_λ(p·y) of the given kind, rewritten through θ(px;p) = −θ(x;p)/x so the
/// nome never enters a theta argument.  The rewrite is an exact identity for
/// every p, and it is what makes the Δ symbols evaluable at p = 0, where the
/// nome-carrying arguments would otherwise degenerate to θ(0).
///
/// Per cell, θ(c·p·y) = −(c·y)^{−1} θ(c·y) with c the cell's q,t-monomial;
/// collecting the prefactors over all cells gives, with N = |λ|,
/// n = Σ_i (i−1)λ_i and n′ = Σ_i λ_i(λ_i−1)/2:
///
/// - zero kind:  (−1)^N q^(−n′) t^(n)  y^(−N) · C⁰_λ(y)
/// - minus kind: (−1)^N q^(−n′) t^(−n) y^(−N) · C⁻_λ(y)
/// - plus kind:  (−1)^N q^(−3n′−N) t^(3n) y^(−N) · C⁺_λ(y)
pub fn c_shifted(
    kind: CKind,
    lam: &Partition,
    y: &MpComplex,
    ps: &ParameterSet,
) -> Result<MpComplex> {
    let stats = lam.stats();
    let size = stats.size as i64;
    let n = stats.nstat as i64;
    let nc = stats.nstat_conj as i64;
    let (eq, et) = match kind {
        CKind::Zero => (-nc, n),
        CKind::Minus => (-nc, -n),
        CKind::Plus => (-3 * nc - size, 3 * n),
    };
    let sign = MpComplex::from_int(ps.prec, if size % 2 == 0 { 1 } else { -1 });
    let pre = sign.mul(&ps.q.powi(eq)).mul(&ps.t.powi(et)).mul(&y.powi(-size));
    Ok(pre.mul(&c_symbol(kind, lam, std::slice::from_ref(y), ps)?))
}

/// Δ⁰_λ(a | …b_i…) = ∏_i C⁰_λ(b_i) / C⁰_λ(pqa/b_i).
pub fn delta0(
    lam: &Partition,
    a: &MpComplex,
    bs: &[MpComplex],
    ps: &ParameterSet,
) -> Result<MpComplex> {
    let qa = ps.q.mul(a);
    let mut num = MpComplex::one(ps.prec);
    let mut den = MpComplex::one(ps.prec);
    for b in bs {
        if b.is_zero() || !b.is_finite() {
            return Err(Error::BadParameter("Δ⁰ arguments must be finite and nonzero".into()));
        }
        num = num.mul(&c_zero(lam, std::slice::from_ref(b), ps)?);
        // C⁰_λ(pqa/b) through the nome-shift rewrite, so p = 0 stays exact.
        den = den.mul(&c_shifted(CKind::Zero, lam, &qa.div(b), ps)?);
    }
    if den.is_zero() || !den.is_finite() {
        return Err(Error::Singular("Δ⁰ denominator vanished".into()));
    }
    let out = num.div(&den);
    if !out.is_finite() {
        return Err(Error::Singular("Δ⁰ evaluation is not finite".into()));
    }
    Ok(out)
}

/// The argument-independent factor Δ_λ / Δ⁰_λ:
/// C⁰_{2λ²}(pqa) / (C⁻_λ(pq, t) · C⁺_λ(a, pqa/t)).
pub fn delta_core(lam: &Partition, a: &MpComplex, ps: &ParameterSet) -> Result<MpComplex> {
    // Every nome-carrying argument (pqa, pq, pqa/t) goes through the
    // θ(px;p) = −θ(x;p)/x rewrite; see [`c_shifted`].
    let qa = ps.q.mul(a);
    let num = c_shifted(CKind::Zero, &lam.double_square(), &qa, ps)?;
    let den_minus =
        c_shifted(CKind::Minus, lam, &ps.q, ps)?.mul(&c_minus(lam, &[ps.t.clone()], ps)?);
    let den_plus = c_plus(lam, std::slice::from_ref(a), ps)?
        .mul(&c_shifted(CKind::Plus, lam, &qa.div(&ps.t), ps)?);
    let den = den_minus.mul(&den_plus);
    if den.is_zero() || !den.is_finite() {
        return Err(Error::Singular("Δ normalizing denominator vanished".into()));
    }
    let out = num.div(&den);
    if !out.is_finite() {
        return Err(Error::Singular("Δ normalizing factor is not finite".into()));
    }
    Ok(out)
}

/// Δ_λ(a | …b_i…) = Δ⁰_λ(a | …b_i…) · [`delta_core`].
pub fn delta(
    lam: &Partition,
    a: &MpComplex,
    bs: &[MpComplex],
    ps: &ParameterSet,
) -> Result<MpComplex> {
    Ok(delta0(lam, a, bs, ps)?.mul(&delta_core(lam, a, ps)?))
}

/// Δ of a full rectangle m^n through the Δ⁰-only limit
///
///   Δ_{m^n}(a | …b_i…) =
///     lim_{x→1} Δ⁰_{m^n}(a | …b_i…, q^m pqa/x, pqa/(x tⁿ), pqa·x, pq t^{n−1} x/q^m),
///
/// evaluated at x = 1 + h and x = 1 + 100h with h = 10^(−digits/3) and
/// extrapolated linearly ((100·F₁ − F₂)/99 kills the O(h) term).  The two
/// auxiliary arguments produce a simple theta zero against a simple theta
/// pole at x = 1, so the limit target is regular there and the residual
/// error is O(h²) plus a digits-scaled rounding term.  Requires p ≠ 0 (two
/// of the auxiliary arguments carry the nome as a factor).
pub fn delta_rect(
    m: u32,
    n: usize,
    a: &MpComplex,
    bs: &[MpComplex],
    ps: &ParameterSet,
) -> Result<MpComplex> {
    let lam = Partition::rectangle(m, n);
    let prec = ps.prec;
    let pq = ps.p.mul(&ps.q);
    let pqa = pq.mul(a);
    let qm = ps.q.powi(m as i64);
    let tn = ps.t.powi(n as i64);
    let eval = |x: &MpComplex| -> Result<MpComplex> {
        let mut ext = bs.to_vec();
        ext.push(qm.mul(&pqa).div(x));
        ext.push(pqa.div(&x.mul(&tn)));
        ext.push(pqa.mul(x));
        ext.push(pq.mul(&ps.t.powi(n as i64 - 1)).mul(x).div(&qm));
        delta0(&lam, a, &ext, ps)
    };
    let h = pow10(prec, -((ps.digits / 3) as i32));
    let one = MpComplex::one(prec);
    let x1 = one.add(&MpComplex::new(h.clone(), rug::Float::with_val(prec, 0)));
    let h2 = rug::Float::with_val(prec, &h * 100u32);
    let x2 = one.add(&MpComplex::new(h2, rug::Float::with_val(prec, 0)));
    let f1 = eval(&x1)?;
    let f2 = eval(&x2)?;
    let hundred = MpComplex::from_int(prec, 100);
    let ninety_nine = MpComplex::from_int(prec, 99);
    Ok(hundred.mul(&f1).sub(&f2).div(&ninety_nine))
}
