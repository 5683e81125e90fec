//! Dense complex linear solves at working precision.
//!
//! Systems here are small (a few dozen unknowns), so we use partially
//! pivoted Gaussian elimination and, instead of a cheap estimate, compute
//! the explicit inverse to get the ∞-norm condition number exactly.  A solve
//! whose condition number exceeds 10^(digits/2) is rejected: past that point
//! the result would silently carry fewer correct digits than the tolerance
//! assumes.

use rug::Float;

use crate::error::{Error, Result};
use crate::mp::MpComplex;

/// Maximum row sum of entry magnitudes.
fn norm_inf(a: &[Vec<MpComplex>]) -> f64 {
    a.iter()
        .map(|row| row.iter().map(|x| x.abs().to_f64()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Solve A·x = b, returning (x, condition number ‖A‖∞·‖A⁻¹‖∞).
///
/// Errors with [`Error::DegenerateSystem`] on an exactly zero pivot and with
/// [`Error::IllConditioned`] when the condition number exceeds 10^(digits/2).
pub fn solve_with_condition(
    a: &[Vec<MpComplex>],
    b: &[MpComplex],
    digits: u32,
) -> Result<(Vec<MpComplex>, f64)> {
    let n = a.len();
    assert!(n > 0 && a.iter().all(|r| r.len() == n) && b.len() == n, "need square A and matching b");
    let prec = a[0][0].prec().max(b[0].prec());

    // Augment with b and the identity so one elimination yields both the
    // solution and the explicit inverse.
    let mut m: Vec<Vec<MpComplex>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut row: Vec<MpComplex> = a[i].clone();
        row.push(b[i].clone());
        for j in 0..n {
            row.push(if i == j { MpComplex::one(prec) } else { MpComplex::zero(prec) });
        }
        m.push(row);
    }
    let w = 2 * n + 1;

    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&i, &j| {
                m[i][col].abs().partial_cmp(&m[j][col].abs()).expect("non-finite pivot")
            })
            .unwrap();
        if m[pivot_row][col].is_zero() {
            return Err(Error::DegenerateSystem(format!("zero pivot in column {col}")));
        }
        m.swap(col, pivot_row);
        let inv = m[col][col].recip();
        for j in col..w {
            m[col][j] = m[col][j].mul(&inv);
        }
        for i in 0..n {
            if i == col || m[i][col].is_zero() {
                continue;
            }
            let f = m[i][col].clone();
            for j in col..w {
                m[i][j] = m[i][j].sub(&f.mul(&m[col][j]));
            }
        }
    }

    let x: Vec<MpComplex> = (0..n).map(|i| m[i][n].clone()).collect();
    let ainv: Vec<Vec<MpComplex>> = (0..n).map(|i| m[i][n + 1..].to_vec()).collect();
    let cond = norm_inf(a) * norm_inf(&ainv);
    if !cond.is_finite() {
        return Err(Error::DegenerateSystem("non-finite condition number".into()));
    }
    let guard = 10f64.powi((digits / 2) as i32);
    if cond > guard {
        return Err(Error::IllConditioned { cond, guard });
    }
    Ok((x, cond))
}

/// A·x for a (possibly rectangular) dense matrix.
pub fn matvec(a: &[Vec<MpComplex>], x: &[MpComplex]) -> Vec<MpComplex> {
    let prec = x.iter().map(|v| v.prec()).max().unwrap_or(64);
    a.iter()
        .map(|row| {
            let mut acc = MpComplex::zero(prec);
            for (aij, xj) in row.iter().zip(x) {
                acc = acc.add(&aij.mul(xj));
            }
            acc
        })
        .collect()
}

/// Σ |a_i|·|b_i| — the magnitude budget of a dot product, used to turn an
/// absolute evaluation residual into a relative one.
pub fn abs_dot(a: &[MpComplex], b: &[MpComplex]) -> Float {
    let prec = a.iter().chain(b).map(|v| v.prec()).max().unwrap_or(64);
    let mut acc = Float::with_val(prec, 0);
    for (x, y) in a.iter().zip(b) {
        acc += x.abs() * y.abs();
    }
    acc
}
