//! Randomized verification harness: a fixed registry of named residual
//! checks over the library's identities, plus a filtered, optionally
//! parallel suite runner.
//!
//! Every check derives all of its randomness from a ChaCha20 stream keyed
//! by the context seed and a fixed per-check label, so a report is a pure
//! function of `(id, seed, digits, nightly)`: rerunning reproduces every
//! residual bit for bit.  Checks never share mutable state and may run as
//! independent jobs; the suite merges their reports in id order.

use std::sync::Arc;
use std::time::Instant;

use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bigrid::{make_bigrid, perfection_check, BigridKind, PrimeField, DEFAULT_TRIALS};
use crate::binomial::{binom, binom_closed, binom_normalized, ClosedKind};
use crate::biorthogonal::{
    hat_params, rtilde_at_partition, rtilde_eval, rtilde_fn, BiorthParams, RTilde,
};
use crate::diffops::{apply_d, apply_dplus, Evaluable};
use crate::error::{Error, Result};
use crate::interpolation::{
    add_interp_regularity, interp_theta, rstar_fn, InterpFunction, RStar,
};
use crate::linalg::solve_with_condition;
use crate::mp::MpComplex;
use crate::numerics::{
    draw_complex, rel_residual, sample_generic, theta, theta_pochhammer, theta_prod,
    NumericContext, ParameterSet, SampleSpec,
};
use crate::partition::{enumerate_interval, enumerate_rectangle, strip_relation, Partition};
use crate::symbols::{
    c_minus, c_plus, c_symbol, c_zero, delta, delta0, delta_core, delta_rect, CKind,
};
use crate::theta_space::{make_basis, SymThetaElement};

/// Outcome of one identity check at one seed.
#[derive(Debug, Clone, Serialize)]
pub struct ResidualReport {
    pub check_id: String,
    /// Digest (16 hex chars) of the first parameter draw, tying the report
    /// to the exact numbers that were tested.
    pub params_digest: String,
    /// Worst relative residual observed over every comparison the check
    /// makes.  Vanishing comparisons are scaled against the natural term
    /// size before entering this maximum.
    pub max_rel_residual: f64,
    /// Threshold the residual was judged against.
    pub tol: f64,
    pub pass: bool,
    /// Wall-clock milliseconds.  Excluded from serialization: serialized
    /// reports must be byte-identical for identical (id, seed, digits),
    /// and timing is the one field that never is.
    #[serde(skip)]
    pub runtime_ms: u64,
    /// Master seed the parameters were derived from.
    pub seed: u64,
}

/// What a check body sees.
struct CheckEnv<'a> {
    ctx: &'a NumericContext,
    /// Larger shapes and more draws; the default workload keeps every row
    /// comfortably under a minute.
    nightly: bool,
}

/// Raw result of a check body: worst residual plus the parameter digest.
struct Outcome {
    residual: f64,
    digest: String,
}

struct CheckDef {
    id: &'static str,
    /// Pass threshold at the default 60-digit context, chosen per row from
    /// the observed residual floor with two to three decades of headroom.
    /// Callers running at other precisions pass an explicit override.
    tol: f64,
    run: fn(&CheckEnv) -> Result<Outcome>,
}

/// Running maximum of relative residuals.
struct Residual {
    max: f64,
}

impl Residual {
    fn new() -> Self {
        Residual { max: 0.0 }
    }

    fn push(&mut self, lhs: &MpComplex, rhs: &MpComplex, digits: u32) {
        self.push_abs(rel_residual(lhs, rhs, digits));
    }

    /// For comparisons already scaled by hand (vanishing sums, exact engines).
    fn push_abs(&mut self, r: f64) {
        if r > self.max {
            self.max = r;
        }
    }
}

/// FNV-1a of a textual payload, formatted like the parameter-set digests,
/// for checks whose inputs are not a single parameter set.
fn fnv_hex(payload: &str) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for byte in payload.as_bytes() {
        h ^= u64::from(*byte);
        h = h.wrapping_mul(0x100_0000_01b3);
    }
    format!("{h:016x}")
}

fn point(rng: &mut ChaCha20Rng, prec: u32, n: usize) -> Vec<MpComplex> {
    (0..n).map(|_| draw_complex(rng, prec, 0.5, 2.0)).collect()
}

/// Rowwise minimum: the intersection of two diagrams.
fn meet(x: &Partition, y: &Partition) -> Partition {
    let rows = x.length().min(y.length());
    let parts: Vec<u32> = (1..=rows).map(|i| x.part(i).min(y.part(i))).collect();
    Partition::of(&parts)
}

static REGISTRY: &[CheckDef] = &[
    // Direct series evaluations with no cancellation: hold the full context
    // tolerance.
    CheckDef { id: "theta-functional", tol: 1e-30, run: check_theta_functional },
    // Hook-product ratios stack a few dozen theta factors; three digits of
    // headroom over the observed floor.
    CheckDef { id: "delta-transforms", tol: 1e-27, run: check_delta_transforms },
    CheckDef { id: "delta-rect-limit", tol: 1e-27, run: check_delta_rect_limit },
    // Difference operators sum 2^n signed terms: mild cancellation.
    CheckDef { id: "D-degree", tol: 1e-28, run: check_d_degree },
    CheckDef { id: "D-m0", tol: 1e-28, run: check_d_m0 },
    CheckDef { id: "D-quasicommute", tol: 1e-28, run: check_d_quasicommute },
    // Interpolation solves sit behind a conditioning guard; allow the
    // guard's worst-case digit loss.
    CheckDef { id: "interp-diffeq", tol: 1e-27, run: check_interp_diffeq },
    // Scaled vanishing at off-grid specializations loses a couple more
    // digits than value comparisons.
    CheckDef { id: "interp-extra-vanish", tol: 1e-25, run: check_interp_extra_vanish },
    CheckDef { id: "interp-complement", tol: 1e-27, run: check_interp_complement },
    CheckDef { id: "interp-cauchy-case", tol: 1e-27, run: check_interp_cauchy_case },
    CheckDef { id: "interp-principal", tol: 1e-27, run: check_interp_principal },
    CheckDef { id: "interp-delta-case", tol: 1e-27, run: check_interp_delta_case },
    CheckDef { id: "interp-mshift", tol: 1e-27, run: check_interp_mshift },
    CheckDef { id: "rstar-symmetries", tol: 1e-27, run: check_rstar_symmetries },
    // Binomial rows chain two layers of interpolation solves.
    CheckDef { id: "binom-bde", tol: 1e-25, run: check_binom_bde },
    // Off-diagonal entries are scaled against the row's term sizes, so the
    // tighter bound is honest here.
    CheckDef { id: "binom-inversion", tol: 1e-27, run: check_binom_inversion },
    CheckDef { id: "binom-q-product", tol: 1e-25, run: check_binom_q_product },
    CheckDef { id: "binom-t-product", tol: 1e-25, run: check_binom_t_product },
    CheckDef { id: "binom-duality", tol: 1e-25, run: check_binom_duality },
    CheckDef { id: "binom-complementation", tol: 1e-25, run: check_binom_complementation },
    CheckDef { id: "binom-spec-recur", tol: 1e-25, run: check_binom_spec_recur },
    CheckDef { id: "binom-bailey", tol: 1e-25, run: check_binom_bailey },
    CheckDef { id: "binom-d4", tol: 1e-25, run: check_binom_d4 },
    CheckDef { id: "binom-central-d4", tol: 1e-25, run: check_binom_central_d4 },
    // Expansion coefficients recovered through a dense linear solve lose a
    // couple of digits to conditioning on top of the solves themselves.
    CheckDef { id: "interp-connection", tol: 1e-24, run: check_interp_connection },
    CheckDef { id: "interp-6j", tol: 1e-24, run: check_interp_6j },
    CheckDef { id: "interp-branching", tol: 1e-24, run: check_interp_branching },
    CheckDef { id: "interp-pieri", tol: 1e-24, run: check_interp_pieri },
    CheckDef { id: "interp-cauchy-id", tol: 1e-24, run: check_interp_cauchy_id },
    CheckDef { id: "raise-op", tol: 1e-24, run: check_raise_op },
    CheckDef { id: "ft-summation", tol: 1e-27, run: check_ft_summation },
    CheckDef { id: "warnaar-rect", tol: 1e-27, run: check_warnaar_rect },
    CheckDef { id: "biorth-symmetry", tol: 1e-24, run: check_biorth_symmetry },
    CheckDef { id: "biorth-diffeq", tol: 1e-24, run: check_biorth_diffeq },
    CheckDef { id: "biorth-eval-symm", tol: 1e-25, run: check_biorth_eval_symm },
    CheckDef { id: "biorth-inverse-binom", tol: 1e-24, run: check_biorth_inverse_binom },
    CheckDef { id: "biorth-connection", tol: 1e-24, run: check_biorth_connection },
    // Gram matrix: sums of triple products over a full grid — the loosest
    // numeric row in the registry.
    CheckDef { id: "biorth-discrete", tol: 1e-23, run: check_biorth_discrete },
    CheckDef { id: "biorth-quasi-branch", tol: 1e-24, run: check_biorth_quasi_branch },
    CheckDef { id: "biorth-quasi-pieri", tol: 1e-24, run: check_biorth_quasi_pieri },
    CheckDef { id: "biorth-cauchy", tol: 1e-24, run: check_biorth_cauchy },
    // Continuity in the nome at 0 is a first-order statement (perturbation
    // of size ~1e-8 per factor), not a precision statement.
    CheckDef { id: "p0-consistency", tol: 1e-6, run: check_p0_consistency },
    // Exact prime-field engine: residual is exactly 0.0 (pass) or 1.0.
    CheckDef { id: "bigrid-monomial", tol: 0.0, run: check_bigrid_monomial },
    CheckDef { id: "bigrid-schur", tol: 0.0, run: check_bigrid_schur },
    CheckDef { id: "bigrid-cauchy", tol: 0.0, run: check_bigrid_cauchy },
    CheckDef { id: "bigrid-delta", tol: 0.0, run: check_bigrid_delta },
    CheckDef { id: "bigrid-elliptic", tol: 0.0, run: check_bigrid_elliptic },
];

/// All registered check ids, in registry order.
pub fn check_ids() -> Vec<&'static str> {
    REGISTRY.iter().map(|d| d.id).collect()
}

/// Run one named check against the identities it covers and report the
/// worst residual.  `tol_override` replaces the registry threshold for the
/// verdict only; it never changes what is computed.
pub fn run_check(
    check_id: &str,
    ctx: &NumericContext,
    nightly: bool,
    tol_override: Option<f64>,
) -> Result<ResidualReport> {
    let def = REGISTRY
        .iter()
        .find(|d| d.id == check_id)
        .ok_or_else(|| Error::UnknownName(format!("identity check {check_id:?}")))?;
    let start = Instant::now();
    let out = (def.run)(&CheckEnv { ctx, nightly })?;
    let tol = tol_override.unwrap_or(def.tol);
    Ok(ResidualReport {
        check_id: def.id.to_string(),
        params_digest: out.digest,
        max_rel_residual: out.residual,
        tol,
        pass: out.residual <= tol,
        runtime_ms: start.elapsed().as_millis() as u64,
        seed: ctx.seed,
    })
}

/// Run every check whose id matches `filter` (shell-style `*` / `?`; empty
/// means everything), each as an independent job, and merge the reports in
/// id order.  `jobs` caps the worker count; `None` uses the global pool.
/// A filter matching nothing yields an empty report list, which is not an
/// error.
pub fn run_suite(
    filter: &str,
    ctx: &NumericContext,
    nightly: bool,
    jobs: Option<usize>,
) -> Result<Vec<ResidualReport>> {
    let pattern = if filter.is_empty() { "*" } else { filter };
    let ids: Vec<&'static str> = REGISTRY
        .iter()
        .map(|d| d.id)
        .filter(|id| glob_match(pattern, id))
        .collect();
    let run_all = || -> Result<Vec<ResidualReport>> {
        let mut reports = ids
            .par_iter()
            .map(|id| run_check(id, ctx, nightly, None))
            .collect::<Result<Vec<_>>>()?;
        reports.sort_by(|x, y| x.check_id.cmp(&y.check_id));
        Ok(reports)
    };
    match jobs {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build()
            .map_err(|e| Error::BadParameter(format!("worker pool: {e}")))?
            .install(run_all),
        None => run_all(),
    }
}

/// Shell-style glob over `*` (any run, possibly empty) and `?` (any single
/// character), anchored at both ends.  Two-pointer scan with backtracking
/// to the most recent star.
pub fn glob_match(pattern: &str, text: &str) -> bool {
    let p: Vec<char> = pattern.chars().collect();
    let t: Vec<char> = text.chars().collect();
    let (mut pi, mut ti) = (0usize, 0usize);
    let mut star: Option<(usize, usize)> = None;
    while ti < t.len() {
        if pi < p.len() && (p[pi] == '?' || p[pi] == t[ti]) {
            pi += 1;
            ti += 1;
        } else if pi < p.len() && p[pi] == '*' {
            star = Some((pi, ti));
            pi += 1;
        } else if let Some((sp, st)) = star {
            pi = sp + 1;
            ti = st + 1;
            star = Some((sp, st + 1));
        } else {
            return false;
        }
    }
    while pi < p.len() && p[pi] == '*' {
        pi += 1;
    }
    pi == p.len()
}

// ---------------------------------------------------------------------------
// Theta and hook-product symbols
// ---------------------------------------------------------------------------

/// theta(x) = -x * theta(1/x) and theta(p*x) = -theta(x)/x across fresh
/// draws of the argument and the nome.
fn check_theta_functional(env: &CheckEnv) -> Result<Outcome> {
    let digits = env.ctx.digits;
    let prec = env.ctx.prec();
    let mut rng = env.ctx.rng("theta-functional");
    let draws = if env.nightly { 2000 } else { 1000 };
    let mut res = Residual::new();
    let mut digest = String::new();
    for k in 0..draws {
        let x = draw_complex(&mut rng, prec, 0.5, 2.0);
        let p = draw_complex(&mut rng, prec, 0.05, 0.5);
        if k == 0 {
            let (xr, xi) = x.to_decimal_strings();
            let (pr, pj) = p.to_decimal_strings();
            digest = fnv_hex(&format!("theta x={xr},{xi} p={pr},{pj}"));
        }
        let base = theta(&x, &p, digits)?;
        let inverted = theta(&x.recip(), &p, digits)?.mul(&x).neg();
        res.push(&base, &inverted, digits);
        let shifted = theta(&p.mul(&x), &p, digits)?.mul(&x).neg();
        res.push(&base, &shifted, digits);
    }
    Ok(Outcome { residual: res.max, digest })
}

/// Conjugation plus the three rectangle transformations (complement, add,
/// concatenate), each stated as a closed ratio identity.
fn check_delta_transforms(env: &CheckEnv) -> Result<Outcome> {
    let ctx = env.ctx;
    let digits = ctx.digits;
    let draws = if env.nightly { 3 } else { 2 };
    let mut shapes = vec![(1u32, 2usize), (2, 2)];
    let mut conj_lams = vec![
        Partition::of(&[2, 1]),
        Partition::of(&[3, 1, 1]),
        Partition::of(&[2, 2]),
    ];
    let mut rect_lams = vec![
        Partition::of(&[1]),
        Partition::of(&[1, 1]),
        Partition::of(&[2, 1]),
    ];
    if env.nightly {
        shapes.push((3, 3));
        conj_lams.push(Partition::of(&[3, 2, 1]));
        rect_lams.push(Partition::of(&[3, 2, 1]));
    }
    let mut res = Residual::new();
    let mut digest = String::new();
    for draw in 0..draws {
        let mut rng = ctx.rng(&format!("delta-transforms-{draw}"));
        let spec = SampleSpec::new(2, 2).names(&["a", "b"]);
        let ps = sample_generic(ctx, &mut rng, &spec)?;
        if draw == 0 {
            digest = ps.digest();
        }
        let a = ps.get("a").clone();
        let b = ps.get("b").clone();
        let bs = [b.clone()];
        let pq = ps.p.mul(&ps.q);
        let swapped = ps.conjugate_bases();
        for lam in &conj_lams {
            let lhs = delta(&lam.conjugate(), &a, &bs, &swapped)?;
            let rhs = delta(lam, &a.div(&ps.q.mul(&ps.t)), &bs, &ps)?;
            res.push(&lhs, &rhs, digits);
        }
        for &(m, n) in &shapes {
            let rect = Partition::rectangle(m, n);
            let dmn = delta(&rect, &a, &bs, &ps)?;
            let qm = ps.q.powi(m as i64);
            let tn = ps.t.powi(n as i64);
            let tn1 = ps.t.powi(n as i64 - 1);
            for lam in &rect_lams {
                if !lam.fits_in(m, n) {
                    continue;
                }
                let compl = lam.complement(m, n)?;
                let lhs = delta(&compl, &a, &bs, &ps)?.div(&dmn);
                let a2 = tn1.powi(2).div(&qm.powi(2).mul(&a));
                let ext = [
                    tn1.mul(&b).div(&qm.mul(&a)),
                    tn.clone(),
                    qm.recip(),
                    pq.mul(&tn1),
                    pq.div(&qm.mul(&ps.t)),
                ];
                res.push(&lhs, &delta(lam, &a2, &ext, &ps)?, digits);

                let summed = lam.add_rectangle(m, n)?;
                let lhs = delta(&summed, &a, &bs, &ps)?.div(&dmn);
                let a2 = qm.powi(2).mul(&a);
                let ext = [
                    qm.mul(&b),
                    tn.clone(),
                    pq.mul(&tn1),
                    qm.mul(&a).div(&tn1),
                    pq.mul(&qm).mul(&a).div(&tn),
                ];
                res.push(&lhs, &delta(lam, &a2, &ext, &ps)?, digits);

                if lam.part(1) <= m {
                    let cat = lam.concat_rectangle(m, n)?;
                    let lhs = delta(&cat, &a, &bs, &ps)?.div(&dmn);
                    let a2 = a.div(&tn.powi(2));
                    let ext = [
                        b.div(&tn),
                        qm.recip(),
                        pq.div(&qm.mul(&ps.t)),
                        qm.mul(&a).div(&tn1),
                        pq.mul(&qm).mul(&a).div(&tn),
                    ];
                    res.push(&lhs, &delta(lam, &a2, &ext, &ps)?, digits);
                }
            }
        }
    }
    Ok(Outcome { residual: res.max, digest })
}

/// Full-rectangle values against the m*n-fold product limit formula.
fn check_delta_rect_limit(env: &CheckEnv) -> Result<Outcome> {
    let ctx = env.ctx;
    let mut rng = ctx.rng("delta-rect-limit");
    let spec = SampleSpec::new(2, 2).names(&["a", "b"]);
    let ps = sample_generic(ctx, &mut rng, &spec)?;
    let a = ps.get("a").clone();
    let bs = [ps.get("b").clone()];
    let mut shapes = vec![(1u32, 1usize), (1, 2), (2, 2)];
    if env.nightly {
        shapes.push((3, 3));
    }
    let mut res = Residual::new();
    for (m, n) in shapes {
        let direct = delta(&Partition::rectangle(m, n), &a, &bs, &ps)?;
        let limit = delta_rect(m, n, &a, &bs, &ps)?;
        res.push(&direct, &limit, ctx.digits);
    }
    Ok(Outcome { residual: res.max, digest: ps.digest() })
}

// ---------------------------------------------------------------------------
// Difference operators
// ---------------------------------------------------------------------------

/// Applying the operator to a degree-m element yields degree m again (the
/// p-shift in one variable scales by (p x^2)^(-m)) and stays symmetric.
fn check_d_degree(env: &CheckEnv) -> Result<Outcome> {
    let ctx = env.ctx;
    let digits = ctx.digits;
    let mut shapes = vec![(1u32, 1usize), (1, 2)];
    if env.nightly {
        shapes.push((2, 2));
    }
    let mut res = Residual::new();
    let mut digest = String::new();
    for (m, n) in shapes {
        let spec = SampleSpec::new(m, n).names(&["a", "b", "c", "d"]).constraint(
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
        );
        let mut rng = ctx.rng(&format!("D-degree-{m}-{n}"));
        let ps = sample_generic(ctx, &mut rng, &spec)?;
        if digest.is_empty() {
            digest = ps.digest();
        }
        let basis = make_basis(m, n, &ps, &mut rng)?;
        let coeffs: Vec<MpComplex> = (0..basis.dim())
            .map(|_| draw_complex(&mut rng, ps.prec, 0.5, 2.0))
            .collect();
        let elem = SymThetaElement::from_coeffs(basis, coeffs);
        let g = apply_d(
            ps.get("a"),
            ps.get("b"),
            ps.get("c"),
            ps.get("d"),
            &ps,
            n,
            &Evaluable::from_element(elem),
        );
        let xs = point(&mut rng, ps.prec, n);
        let base = g.eval(&xs)?;
        let mut shifted_xs = xs.clone();
        shifted_xs[0] = ps.p.mul(&xs[0]);
        let lhs = g.eval(&shifted_xs)?;
        let factor = ps.p.mul(&xs[0]).mul(&xs[0]).recip().powi(m as i64);
        res.push(&lhs, &factor.mul(&base), digits);
        let worst = g.spot_check_symmetry(&mut rng, ps.prec, ps.digits, 2)?;
        res.push_abs(worst);
    }
    Ok(Outcome { residual: res.max, digest })
}

/// On constants the operator evaluates to the closed triple-theta product.
fn check_d_m0(env: &CheckEnv) -> Result<Outcome> {
    let ctx = env.ctx;
    let digits = ctx.digits;
    let trials = if env.nightly { 4 } else { 2 };
    let mut res = Residual::new();
    let mut digest = String::new();
    for n in [1usize, 2] {
        let spec = SampleSpec::new(0, n)
            .names(&["a", "b", "c", "d"])
            .constraint(
                vec![("t", n as i64 - 1), ("a", 1), ("b", 1), ("c", 1), ("d", 1), ("p", -1)],
                "d",
            )
            .avoid(vec![("a", 1), ("b", 1)])
            .avoid(vec![("a", 1), ("c", 1)])
            .avoid(vec![("a", 1), ("d", 1)]);
        let mut rng = ctx.rng(&format!("D-m0-{n}"));
        for _ in 0..trials {
            let ps = sample_generic(ctx, &mut rng, &spec)?;
            if digest.is_empty() {
                digest = ps.digest();
            }
            let (a, b) = (ps.get("a").clone(), ps.get("b").clone());
            let (cc, d) = (ps.get("c").clone(), ps.get("d").clone());
            let g = apply_d(&a, &b, &cc, &d, &ps, n, &Evaluable::constant(n, MpComplex::one(ps.prec)));
            let mut want = MpComplex::one(ps.prec);
            for i in 1..=n {
                let tni = ps.t.powi((n - i) as i64);
                want = want.mul(&theta_prod(
                    &[a.mul(&b).mul(&tni), a.mul(&cc).mul(&tni), a.mul(&d).mul(&tni)],
                    &ps.p,
                    digits,
                )?);
            }
            let xs = point(&mut rng, ps.prec, n);
            res.push(&g.eval(&xs)?, &want, digits);
        }
    }
    Ok(Outcome { residual: res.max, digest })
}

/// Operators at shifted parameter pairs commute up to swapping which pair
/// carries the shift.
fn check_d_quasicommute(env: &CheckEnv) -> Result<Outcome> {
    let ctx = env.ctx;
    let digits = ctx.digits;
    let ns: &[usize] = if env.nightly { &[1, 2] } else { &[1] };
    let mut res = Residual::new();
    let mut digest = String::new();
    for &n in ns {
        let spec = SampleSpec::new(2, n).names(&["a", "b", "c", "d", "cp", "dp"]).constraint(
            vec![("c", 1), ("d", 1), ("cp", -1), ("dp", -1)],
            "dp",
        );
        let mut rng = ctx.rng(&format!("D-quasicommute-{n}"));
        let ps = sample_generic(ctx, &mut rng, &spec)?;
        if digest.is_empty() {
            digest = ps.digest();
        }
        let (a, b) = (ps.get("a").clone(), ps.get("b").clone());
        let (cc, d) = (ps.get("c").clone(), ps.get("d").clone());
        let (cp, dp) = (ps.get("cp").clone(), ps.get("dp").clone());
        let qh = ps.q_half().clone();
        let up = |v: &MpComplex| v.mul(&qh);
        let down = |v: &MpComplex| v.div(&qh);
        let basis = make_basis(2, n, &ps, &mut rng)?;
        for _ in 0..2 {
            let coeffs: Vec<MpComplex> = (0..basis.dim())
                .map(|_| draw_complex(&mut rng, ps.prec, 0.5, 2.0))
                .collect();
            let elem = SymThetaElement::from_coeffs(Arc::clone(&basis), coeffs);
            let f = Evaluable::from_element(elem);
            let inner_a = apply_d(&up(&a), &up(&b), &down(&cc), &down(&d), &ps, n, &f);
            let lhs = apply_d(&a, &b, &cp, &dp, &ps, n, &inner_a);
            let inner_b = apply_d(&up(&a), &up(&b), &down(&cp), &down(&dp), &ps, n, &f);
            let rhs = apply_d(&a, &b, &cc, &d, &ps, n, &inner_b);
            for _ in 0..2 {
                let xs = point(&mut rng, ps.prec, n);
                res.push(&lhs.eval(&xs)?, &rhs.eval(&xs)?, digits);
            }
        }
    }
    Ok(Outcome { residual: res.max, digest })
}

// ---------------------------------------------------------------------------
// Interpolation functions
// ---------------------------------------------------------------------------

/// The standard regular sampler for interpolation checks: the two defining
/// parameters plus any extras, with the solve-regularity families attached.
fn interp_spec(m: u32, n: usize, extra: &[&'static str]) -> SampleSpec {
    let spec = SampleSpec::new(m, n).names(&["a", "b"]).names(extra);
    add_interp_regularity(spec, m, n, &vec![("a", 1)], &vec![("b", 1)])
}

/// Eigenfunction property: conjugating the interpolation function by the
/// half-shift turns the operator diagonal with an explicit eigenvalue, in
/// both the theta-level and abelian normalizations.
fn check_interp_diffeq(env: &CheckEnv) -> Result<Outcome> {
    let ctx = env.ctx;
    let digits = ctx.digits;
    let mut res = Residual::new();
    let mut digest = String::new();

    let mut shapes = vec![((1u32, 2usize), Partition::of(&[1, 1]))];
    if env.nightly {
        shapes.push(((2, 2), Partition::of(&[2, 1])));
    }
    for ((m, n), lam) in shapes {
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
        let mut rng = ctx.rng(&format!("interp-diffeq-{m}-{n}"));
        let ps = sample_generic(ctx, &mut rng, &spec)?;
        if digest.is_empty() {
            digest = ps.digest();
        }
        let (a, b, v) = (ps.get("a").clone(), ps.get("b").clone(), ps.get("v").clone());
        let (cc, d) = (ps.get("c").clone(), ps.get("d").clone());
        let qh = ps.q_half().clone();
        let shifted = interp_theta(&lam, m, n, &qh.mul(&a), &qh.mul(&b), &v, &ps, &mut rng)?;
        let base = interp_theta(&lam, m, n, &a, &b, &v, &ps, &mut rng)?;
        let op = apply_d(&a, &b, &cc, &d, &ps, n, &Evaluable::new(n, true, move |xs| shifted.eval(xs)));
        let mut eigen = MpComplex::one(ps.prec);
        for i in 1..=n {
            let tni = ps.t.powi((n - i) as i64);
            let ti1 = ps.t.powi(i as i64 - 1);
            eigen = eigen
                .mul(&theta(&a.mul(&b).mul(&ps.q.powi(m as i64)).mul(&tni), &ps.p, digits)?)
                .mul(&theta(
                    &a.mul(&cc).mul(&ps.q.powi(lam.part(i) as i64)).mul(&tni),
                    &ps.p,
                    digits,
                )?)
                .mul(&theta(
                    &b.mul(&cc).mul(&ps.q.powi((m - lam.part(i)) as i64)).mul(&ti1),
                    &ps.p,
                    digits,
                )?);
        }
        for _ in 0..2 {
            let xs = point(&mut rng, ps.prec, n);
            res.push(&op.eval(&xs)?, &eigen.mul(&base.eval(&xs)?), digits);
        }
    }

    {
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
        let mut rng = ctx.rng("interp-diffeq-abelian");
        let ps = sample_generic(ctx, &mut rng, &spec)?;
        let (a, b) = (ps.get("a").clone(), ps.get("b").clone());
        let (cc, d) = (ps.get("c").clone(), ps.get("d").clone());
        let qh = ps.q_half().clone();
        let lam = Partition::of(&[2, 1]);
        let shifted = rstar_fn(&lam, n, &qh.mul(&a), &qh.mul(&b), &ps, &mut rng)?;
        let base = rstar_fn(&lam, n, &a, &b, &ps, &mut rng)?;
        let op = apply_d(&a, &b, &cc, &d, &ps, n, &Evaluable::new(n, true, move |xs| shifted.eval(xs)));
        let mut eigen = MpComplex::one(ps.prec);
        for i in 1..=n {
            let tni = ps.t.powi((n - i) as i64);
            let ti1 = ps.t.powi(i as i64 - 1);
            eigen = eigen
                .mul(&theta(&a.mul(&b).mul(&tni), &ps.p, digits)?)
                .mul(&theta(
                    &a.mul(&cc).mul(&ps.q.powi(lam.part(i) as i64)).mul(&tni),
                    &ps.p,
                    digits,
                )?)
                .mul(&theta(
                    &b.mul(&cc).mul(&ps.q.powi(-(lam.part(i) as i64))).mul(&ti1),
                    &ps.p,
                    digits,
                )?);
        }
        for _ in 0..2 {
            let xs = point(&mut rng, ps.prec, n);
            res.push(&op.eval(&xs)?, &eigen.mul(&base.eval(&xs)?), digits);
        }
    }
    Ok(Outcome { residual: res.max, digest })
}

/// Vanishing beyond the defining grid: specializing one coordinate to the
/// head (b-side) or tail (a-side) of the spectrum kills the function for
/// indices that do not reach it.
fn check_interp_extra_vanish(env: &CheckEnv) -> Result<Outcome> {
    let ctx = env.ctx;
    let trials = if env.nightly { 10 } else { 4 };
    let spec = interp_spec(2, 2, &["v"]);
    let mut rng = ctx.rng("interp-extra-vanish");
    let ps = sample_generic(ctx, &mut rng, &spec)?;
    let (a, b, v) = (ps.get("a").clone(), ps.get("b").clone(), ps.get("v").clone());
    let mut res = Residual::new();

    let f = interp_theta(&Partition::of(&[2, 1]), 2, 2, &a, &b, &v, &ps, &mut rng)?;
    for _ in 0..trials {
        let x1 = draw_complex(&mut rng, ps.prec, 0.5, 2.0);
        let (val, scale) = f.eval_with_scale(&[x1, a.clone()])?;
        res.push_abs((val.abs() / scale).to_f64());
    }

    let f = interp_theta(&Partition::of(&[1, 1]), 2, 2, &a, &b, &v, &ps, &mut rng)?;
    for _ in 0..trials {
        let x2 = draw_complex(&mut rng, ps.prec, 0.5, 2.0);
        let (val, scale) = f.eval_with_scale(&[b.clone(), x2])?;
        res.push_abs((val.abs() / scale).to_f64());
    }
    Ok(Outcome { residual: res.max, digest: ps.digest() })
}

/// Complementing the index swaps the roles of the two parameters.
fn check_interp_complement(env: &CheckEnv) -> Result<Outcome> {
    let ctx = env.ctx;
    let digits = ctx.digits;
    let spec = interp_spec(2, 2, &["v"]);
    let mut rng = ctx.rng("interp-complement");
    let ps = sample_generic(ctx, &mut rng, &spec)?;
    let (a, b, v) = (ps.get("a").clone(), ps.get("b").clone(), ps.get("v").clone());
    let trials = if env.nightly { 3 } else { 2 };
    let mut res = Residual::new();
    for lam in [Partition::of(&[1]), Partition::of(&[2, 1]), Partition::of(&[2, 2])] {
        let compl = lam.complement(2, 2)?;
        let lhs = interp_theta(&compl, 2, 2, &a, &b, &v, &ps, &mut rng)?;
        let rhs = interp_theta(&lam, 2, 2, &b, &a, &v, &ps, &mut rng)?;
        for _ in 0..trials {
            let xs = point(&mut rng, ps.prec, 2);
            res.push(&lhs.eval(&xs)?, &rhs.eval(&xs)?, digits);
        }
    }
    Ok(Outcome { residual: res.max, digest: ps.digest() })
}

/// When the parameters satisfy the kernel balance, the function collapses
/// to an explicit double theta product over the columns.
fn check_interp_cauchy_case(env: &CheckEnv) -> Result<Outcome> {
    let ctx = env.ctx;
    let digits = ctx.digits;
    let (m, n) = (2u32, 2usize);
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
    let mut rng = ctx.rng("interp-cauchy-case");
    let ps = sample_generic(ctx, &mut rng, &spec)?;
    let (a, b, v) = (ps.get("a").clone(), ps.get("b").clone(), ps.get("v").clone());
    let trials = if env.nightly { 3 } else { 2 };
    let mut lams = vec![Partition::of(&[1]), Partition::of(&[2, 1])];
    if env.nightly {
        lams.push(Partition::of(&[2, 2]));
    }
    let mut res = Residual::new();
    for lam in &lams {
        let f = interp_theta(lam, m, n, &a, &b, &v, &ps, &mut rng)?;
        let conj = lam.conjugate();
        for _ in 0..trials {
            let xs = point(&mut rng, ps.prec, n);
            let mut want = MpComplex::one(ps.prec);
            for x in &xs {
                for j in 1..=m as usize {
                    let base = a
                        .mul(&ps.t.powi(n as i64 - conj.part(j) as i64))
                        .mul(&ps.q.powi(j as i64 - 1));
                    want = want
                        .mul(&theta(&base.mul(x), &ps.p, digits)?)
                        .mul(&theta(&base.div(x), &ps.p, digits)?);
                }
            }
            res.push(&f.eval(&xs)?, &want, digits);
        }
    }
    Ok(Outcome { residual: res.max, digest: ps.digest() })
}

/// Principal specialization: the value at the index's own grid point is a
/// closed four-symbol product.
fn check_interp_principal(env: &CheckEnv) -> Result<Outcome> {
    let ctx = env.ctx;
    let digits = ctx.digits;
    let (m, n) = (2u32, 2usize);
    let spec = interp_spec(m, n, &["v"]);
    let mut rng = ctx.rng("interp-principal");
    let ps = sample_generic(ctx, &mut rng, &spec)?;
    let (a, b, v) = (ps.get("a").clone(), ps.get("b").clone(), ps.get("v").clone());
    let pq = ps.p.mul(&ps.q);
    let qm = ps.q.powi(m as i64);
    let tn = ps.t.powi(n as i64);
    let tn1 = ps.t.powi(n as i64 - 1);
    let mut lams = vec![Partition::empty(), Partition::of(&[1]), Partition::of(&[2, 1])];
    if env.nightly {
        lams.push(Partition::of(&[2, 2]));
    }
    let mut res = Residual::new();
    for lam in &lams {
        let f = interp_theta(lam, m, n, &a, &b, &v, &ps, &mut rng)?;
        let pt: Vec<MpComplex> = (1..=n)
            .map(|i| a.mul(&ps.q.powi(lam.part(i) as i64)).mul(&ps.t.powi((n - i) as i64)))
            .collect();
        let compl = lam.complement(m, n)?;
        let want = c_zero(&compl, &[pq.div(&qm.mul(&a).mul(&b))], &ps)?
            .mul(&c_plus(&compl, &[tn1.mul(&b).div(&qm.mul(&a))], &ps)?)
            .mul(&c_minus(lam, &[pq.clone(), ps.t.clone()], &ps)?)
            .mul(&c_plus(lam, &[ps.t.powi(2 * n as i64 - 2).mul(&a).mul(&a)], &ps)?)
            .div(&c_zero(lam, &[tn.clone()], &ps)?);
        res.push(&f.eval(&pt)?, &want, digits);
    }
    Ok(Outcome { residual: res.max, digest: ps.digest() })
}

/// On the full grid the function is diagonal: a closed product on its own
/// point, scaled vanishing on every other grid point of the rectangle.
fn check_interp_delta_case(env: &CheckEnv) -> Result<Outcome> {
    let ctx = env.ctx;
    let digits = ctx.digits;
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
    let mut rng = ctx.rng("interp-delta-case");
    let ps = sample_generic(ctx, &mut rng, &spec)?;
    let (a, b, v) = (ps.get("a").clone(), ps.get("b").clone(), ps.get("v").clone());
    let pq = ps.p.mul(&ps.q);
    let qm = ps.q.powi(m as i64);
    let tn = ps.t.powi(n as i64);
    let tn1 = ps.t.powi(n as i64 - 1);
    let lam = Partition::of(&[2, 1]);
    let f = interp_theta(&lam, m, n, &a, &b, &v, &ps, &mut rng)?;
    let compl = lam.complement(m, n)?;
    let want = c_zero(&compl, &[pq.mul(&tn1)], &ps)?
        .mul(&c_plus(&compl, &[qm.powi(-2).mul(&a.powi(-2))], &ps)?)
        .mul(&c_minus(&lam, &[pq.clone(), ps.t.clone()], &ps)?)
        .mul(&c_plus(&lam, &[ps.t.powi(2 * n as i64 - 2).mul(&a).mul(&a)], &ps)?)
        .div(&c_zero(&lam, &[tn.clone()], &ps)?);
    let mut res = Residual::new();
    for mu in enumerate_rectangle(m, n) {
        let pt: Vec<MpComplex> = (1..=n)
            .map(|i| a.mul(&ps.q.powi(mu.part(i) as i64)).mul(&ps.t.powi((n - i) as i64)))
            .collect();
        let (val, scale) = f.eval_with_scale(&pt)?;
        if mu == lam {
            res.push(&val, &want, digits);
        } else {
            res.push_abs((val.abs() / scale).to_f64());
        }
    }
    Ok(Outcome { residual: res.max, digest: ps.digest() })
}

/// Raising the degree budget multiplies by an explicit theta ladder while
/// shifting the second parameter.
fn check_interp_mshift(env: &CheckEnv) -> Result<Outcome> {
    let ctx = env.ctx;
    let digits = ctx.digits;
    let spec = interp_spec(3, 2, &["v"]);
    let mut rng = ctx.rng("interp-mshift");
    let ps = sample_generic(ctx, &mut rng, &spec)?;
    let (a, b, v) = (ps.get("a").clone(), ps.get("b").clone(), ps.get("v").clone());
    let lam = Partition::of(&[2, 1]);
    let f_big = interp_theta(&lam, 3, 2, &a, &b, &v, &ps, &mut rng)?;
    let f_small = interp_theta(&lam, 2, 2, &a, &b.mul(&ps.q), &v, &ps, &mut rng)?;
    let trials = if env.nightly { 3 } else { 2 };
    let mut res = Residual::new();
    for _ in 0..trials {
        let xs = point(&mut rng, ps.prec, 2);
        let mut ladder = MpComplex::one(ps.prec);
        for x in &xs {
            ladder = ladder
                .mul(&theta(&b.mul(x), &ps.p, digits)?)
                .mul(&theta(&b.div(x), &ps.p, digits)?);
        }
        res.push(&f_big.eval(&xs)?, &ladder.mul(&f_small.eval(&xs)?), digits);
    }
    Ok(Outcome { residual: res.max, digest: ps.digest() })
}

// ---------------------------------------------------------------------------
// Abelian interpolation symmetries
// ---------------------------------------------------------------------------

/// Six closed transformation laws of the abelian interpolation functions:
/// inversion of bases and parameters, negation, the two square-root nome
/// shifts, the degree ladder, and trailing principal coordinates.
fn check_rstar_symmetries(env: &CheckEnv) -> Result<Outcome> {
    let ctx = env.ctx;
    let digits = ctx.digits;
    let mut rng = ctx.rng("rstar-symmetries");
    let mut spec = SampleSpec::new(3, 3).names(&["a", "b"]);
    for fam in [
        vec![("a", 1)],
        vec![("b", 1)],
        vec![("a", 1), ("b", 1)],
        vec![("b", 1), ("a", -1)],
        vec![("a", 2)],
        vec![("b", 2)],
    ] {
        spec = spec.avoid_sweep(fam, (-8, 8), (-8, 8));
    }
    let ps = sample_generic(ctx, &mut rng, &spec)?;
    let digest = ps.digest();
    let (a, b) = (ps.get("a").clone(), ps.get("b").clone());
    let n = 2usize;
    let lam = Partition::of(&[2, 1]);
    let stats = lam.stats();
    let pq = ps.p.mul(&ps.q);
    let tn = ps.t.powi(n as i64);
    let mut res = Residual::new();

    let f = rstar_fn(&lam, n, &a, &b, &ps, &mut rng)?;

    // Bases and parameters to their inverses, with the closed prefactor.
    let swapped = ParameterSet::from_values(
        ps.digits,
        ps.p.clone(),
        ps.q.recip(),
        ps.t.recip(),
        vec![],
        ps.m,
        ps.n,
    )?;
    let f_inv = rstar_fn(&lam, n, &a.recip(), &b.recip(), &swapped, &mut rng)?;
    let factor_inv = ps
        .q
        .powi(2)
        .mul(&ps.t.powi(2 * n as i64 - 2))
        .mul(&a.powi(2))
        .div(&b.powi(2))
        .powi(stats.size as i64)
        .mul(&ps.t.powi(-4 * stats.nstat as i64))
        .mul(&ps.q.powi(4 * stats.nstat_conj as i64));

    // Negation and the two square-root nome shifts.
    let f_neg = rstar_fn(&lam, n, &a.neg(), &b.neg(), &ps, &mut rng)?;
    let sp = ps.p.sqrt();
    let f_pp = rstar_fn(&lam, n, &sp.mul(&a), &sp.mul(&b), &ps, &mut rng)?;
    let f_pm = rstar_fn(&lam, n, &sp.mul(&a), &b.div(&sp), &ps, &mut rng)?;
    let factor_pp = b
        .mul(&ps.t.powi(1 - n as i64))
        .div(&a.mul(&ps.q))
        .powi(stats.size as i64)
        .mul(&ps.t.powi(2 * stats.nstat as i64))
        .mul(&ps.q.powi(-2 * stats.nstat_conj as i64));
    let factor_pm = pq.div(&a.mul(&b)).powi(stats.size as i64);

    // Degree ladder: adding a full column trades for a theta multiplier and
    // a shift of both parameters.
    let small = Partition::of(&[1, 1]);
    let f5_big = rstar_fn(&small.add_rectangle(1, n)?, n, &a, &b, &ps, &mut rng)?;
    let f5_small = rstar_fn(&small, n, &a.mul(&ps.q), &b.div(&ps.q), &ps, &mut rng)?;

    // One trailing principal coordinate trades for a -> t*a.
    let f6_big = rstar_fn(&lam, n + 1, &a, &b, &ps, &mut rng)?;
    let f6_small = rstar_fn(&lam, n, &ps.t.mul(&a), &b, &ps, &mut rng)?;
    let factor6 = c_zero(&lam, &[tn.clone(), pq.mul(&a).div(&b.mul(&ps.t))], &ps)?
        .div(&c_zero(&lam, &[tn.mul(&ps.t), pq.mul(&a).div(&b)], &ps)?);

    let trials = if env.nightly { 4 } else { 2 };
    for _ in 0..trials {
        let xs = point(&mut rng, ps.prec, n);
        let base = f.eval(&xs)?;

        res.push(&base, &factor_inv.mul(&f_inv.eval(&xs)?), digits);

        let neg_xs: Vec<MpComplex> = xs.iter().map(|x| x.neg()).collect();
        res.push(&f_neg.eval(&neg_xs)?, &base, digits);

        let sp_xs: Vec<MpComplex> = xs.iter().map(|x| sp.mul(x)).collect();
        res.push(&f_pp.eval(&sp_xs)?, &factor_pp.mul(&base), digits);
        res.push(&f_pm.eval(&sp_xs)?, &factor_pm.mul(&base), digits);

        let mut ladder = MpComplex::one(ps.prec);
        for x in &xs {
            ladder = ladder
                .mul(&theta(&a.mul(x), &ps.p, digits)?)
                .mul(&theta(&a.div(x), &ps.p, digits)?)
                .div(&theta(&pq.div(&b).mul(x), &ps.p, digits)?)
                .div(&theta(&pq.div(&b).div(x), &ps.p, digits)?);
        }
        res.push(&f5_big.eval(&xs)?, &ladder.mul(&f5_small.eval(&xs)?), digits);

        let mut big_xs = xs.clone();
        big_xs.push(a.clone());
        res.push(&f6_big.eval(&big_xs)?, &factor6.mul(&f6_small.eval(&xs)?), digits);
    }
    Ok(Outcome { residual: res.max, digest })
}

// ---------------------------------------------------------------------------
// Elliptic binomial coefficients
// ---------------------------------------------------------------------------

/// Wide-sweep sampler shared by the binomial identities: every monomial the
/// prefactors and inner solves can form from the two parameters stays away
/// from integer powers of the nome.
fn binom_spec(extra: &[&'static str]) -> SampleSpec {
    let mut spec = SampleSpec::new(0, 0).names(&["a", "b"]).names(extra);
    for fam in [
        vec![("a", 1)],
        vec![("b", 1)],
        vec![("b", 1), ("a", -1)],
        vec![("b", 2)],
        vec![("a", 1), ("b", 1)],
    ] {
        spec = spec.avoid_sweep(fam, (-6, 6), (-6, 6));
    }
    spec
}

/// Balanced sampler for the bulk difference equation: five parameters with
/// b*c*d*e = a*p*q, swept over all ratio families the two binomial layers
/// touch.
fn bde_spec(range: (i64, i64)) -> SampleSpec {
    let mut spec = SampleSpec::new(0, 0)
        .names(&["a", "b", "cc", "d", "e"])
        .constraint(
            vec![("b", 1), ("cc", 1), ("d", 1), ("e", 1), ("a", -1), ("p", -1), ("q", -1)],
            "e",
        );
    for fam in [
        vec![("a", 1)],
        vec![("b", 1)],
        vec![("cc", 1)],
        vec![("b", 1), ("a", -1)],
        vec![("cc", 1), ("a", -1)],
        vec![("cc", 1), ("b", -1)],
        vec![("cc", 1), ("b", -2)],
        vec![("a", 1), ("b", -1)],
        vec![("a", 1), ("b", -2)],
    ] {
        spec = spec.avoid_sweep(fam, range, range);
    }
    spec
}

/// One instance of the bulk difference equation at a (lambda, kappa) pair.
fn bde_push(
    lam: &Partition,
    kap: &Partition,
    ps: &ParameterSet,
    ctx: &NumericContext,
    res: &mut Residual,
) -> Result<()> {
    let (a, b) = (ps.get("a").clone(), ps.get("b").clone());
    let (cv, d, e) = (ps.get("cc").clone(), ps.get("d").clone(), ps.get("e").clone());
    let pq = ps.p.mul(&ps.q);
    let lhs = binom(lam, kap, &a, &cv, ps, ctx)?;
    let args = [cv.clone(), b.mul(&d), b.mul(&e), pq.mul(&a).div(&b)];
    let mut kargs = args.clone();
    kargs[0] = cv.recip();
    let pref = delta0(kap, &a.div(&cv), &kargs, ps)?.div(&delta0(lam, &a, &args, ps)?);
    let mut sum = MpComplex::zero(ps.prec);
    for mu in enumerate_interval(kap, lam) {
        let w = delta0(&mu, &a.div(&b), &[cv.div(&b), pq.mul(&a), d.clone(), e.clone()], ps)?;
        let b1 = binom(lam, &mu, &a, &b, ps, ctx)?;
        let b2 = binom(&mu, kap, &a.div(&b), &cv.div(&b), ps, ctx)?;
        sum = sum.add(&w.mul(&b1).mul(&b2));
    }
    res.push(&lhs, &pref.mul(&sum), ctx.digits);
    Ok(())
}

/// The bulk difference equation: contiguous shift of the second parameter
/// expands one binomial through a balanced two-layer sum.
fn check_binom_bde(env: &CheckEnv) -> Result<Outcome> {
    let ctx = env.ctx;
    let mut rng = ctx.rng("binom-bde");
    let ps = sample_generic(ctx, &mut rng, &bde_spec((-6, 6)))?;
    let mut pairs = vec![
        (Partition::of(&[1]), Partition::empty()),
        (Partition::of(&[2, 1]), Partition::of(&[1])),
        (Partition::of(&[2, 1]), Partition::empty()),
    ];
    if env.nightly {
        pairs.push((Partition::of(&[2, 2]), Partition::of(&[1])));
        pairs.push((Partition::of(&[3, 2, 1]), Partition::of(&[2, 1])));
    }
    let mut res = Residual::new();
    for (lam, kap) in &pairs {
        bde_push(lam, kap, &ps, ctx, &mut res)?;
    }
    Ok(Outcome { residual: res.max, digest: ps.digest() })
}

/// Inverting the parameter pair inverts the binomial matrix: the two-layer
/// sum telescopes to the identity matrix over a full rectangle of indices.
fn check_binom_inversion(env: &CheckEnv) -> Result<Outcome> {
    let ctx = env.ctx;
    let digits = ctx.digits;
    let mut rng = ctx.rng("binom-inversion");
    let ps = sample_generic(ctx, &mut rng, &binom_spec(&[]))?;
    let (a, b) = (ps.get("a").clone(), ps.get("b").clone());
    let one = MpComplex::one(ps.prec);
    let side = if env.nightly { (3u32, 2usize) } else { (2, 2) };
    let indices = enumerate_rectangle(side.0, side.1);
    let mut res = Residual::new();
    for lam in &indices {
        for kap in &indices {
            if !lam.contains(kap) {
                continue;
            }
            let mut sum = MpComplex::zero(ps.prec);
            let mut scale = rug::Float::new(ps.prec);
            for mu in enumerate_interval(kap, lam) {
                let term = binom(lam, &mu, &a, &b, &ps, ctx)?
                    .mul(&binom(&mu, kap, &a.div(&b), &b.recip(), &ps, ctx)?);
                scale += term.abs();
                sum = sum.add(&term);
            }
            if lam == kap {
                res.push(&sum, &one, digits);
            } else {
                res.push_abs((sum.abs() / scale).to_f64());
            }
        }
    }
    Ok(Outcome { residual: res.max, digest: ps.digest() })
}

/// Closed product evaluation at a degenerate second parameter: on-support
/// pairs match the robust path, off-support pairs vanish on both paths.
fn closed_form_outcome(env: &CheckEnv, horizontal: bool) -> Result<Outcome> {
    let ctx = env.ctx;
    let digits = ctx.digits;
    let label = if horizontal { "binom-q-product" } else { "binom-t-product" };
    let mut rng = ctx.rng(label);
    let ps = sample_generic(ctx, &mut rng, &binom_spec(&[]))?;
    let a = ps.get("a").clone();
    let kind = if horizontal { ClosedKind::QInverse } else { ClosedKind::T };
    let b_val = if horizontal { ps.q.recip() } else { ps.t.clone() };
    let mut pairs = vec![
        (Partition::of(&[1]), Partition::empty()),
        (Partition::of(&[2, 1]), Partition::of(&[1, 1])),
        (Partition::of(&[2, 1]), Partition::of(&[2, 1])),
        (Partition::of(&[2, 2]), Partition::of(&[1, 1])),
        (Partition::of(&[2]), Partition::empty()),
        (Partition::of(&[2, 2]), Partition::of(&[1])),
    ];
    if env.nightly {
        pairs.push((Partition::of(&[3, 2, 1]), Partition::of(&[2, 1])));
        pairs.push((Partition::of(&[3, 2, 1]), Partition::of(&[2, 2])));
    }
    let mut res = Residual::new();
    for (lam, mu) in &pairs {
        let closed = binom_closed(lam, mu, &a, kind, &ps)?;
        let robust = binom_normalized(lam, mu, &a, &b_val, &[], &ps, ctx)?;
        if strip_relation(mu, lam, 1, horizontal) {
            res.push(&closed, &robust, digits);
        } else {
            if !closed.is_zero() {
                res.push_abs(1.0);
            }
            res.push_abs(robust.abs().to_f64());
        }
    }
    Ok(Outcome { residual: res.max, digest: ps.digest() })
}

fn check_binom_q_product(env: &CheckEnv) -> Result<Outcome> {
    closed_form_outcome(env, true)
}

fn check_binom_t_product(env: &CheckEnv) -> Result<Outcome> {
    closed_form_outcome(env, false)
}

/// Conjugating both indices swaps the bases and rescales the first
/// parameter.
fn check_binom_duality(env: &CheckEnv) -> Result<Outcome> {
    let ctx = env.ctx;
    let digits = ctx.digits;
    let mut rng = ctx.rng("binom-duality");
    let ps = sample_generic(ctx, &mut rng, &binom_spec(&[]))?;
    let (a, b) = (ps.get("a").clone(), ps.get("b").clone());
    let conj = ps.conjugate_bases();
    let a_dual = a.mul(&ps.q).mul(&ps.t);
    let mut pairs = vec![
        (Partition::of(&[1]), Partition::empty()),
        (Partition::of(&[1]), Partition::of(&[1])),
        (Partition::of(&[2, 1]), Partition::of(&[1])),
        (Partition::of(&[2, 1]), Partition::of(&[1, 1])),
        (Partition::of(&[2, 2]), Partition::of(&[2, 1])),
        (Partition::of(&[2, 1]), Partition::of(&[2, 1])),
    ];
    if env.nightly {
        pairs.push((Partition::of(&[3, 2, 1]), Partition::of(&[2, 1])));
    }
    let mut res = Residual::new();
    for (lam, mu) in &pairs {
        let lhs = binom(lam, mu, &a, &b, &ps, ctx)?;
        let rhs = binom(&lam.conjugate(), &mu.conjugate(), &a_dual, &b, &conj, ctx)?;
        res.push(&lhs, &rhs, digits);
    }
    Ok(Outcome { residual: res.max, digest: ps.digest() })
}

/// Complementing both indices in a rectangle flips the binomial up to an
/// explicit ratio of hook products.
fn check_binom_complementation(env: &CheckEnv) -> Result<Outcome> {
    let ctx = env.ctx;
    let digits = ctx.digits;
    let mut rng = ctx.rng("binom-complementation");
    let ps = sample_generic(ctx, &mut rng, &binom_spec(&[]))?;
    let (a, b) = (ps.get("a").clone(), ps.get("b").clone());
    let (m, n) = (2u32, 2usize);
    let qm = ps.q.powi(m as i64);
    let tn = ps.t.powi(n as i64);
    let t1n = ps.t.powi(1 - n as i64);
    let rect = Partition::rectangle(m, n);
    let dm = delta(
        &rect,
        &a,
        &[tn.clone(), qm.recip(), b.clone(), qm.mul(&t1n).mul(&a).div(&b)],
        &ps,
    )?;
    let flip_a = qm.powi(-2).mul(&ps.t.powi(2 * n as i64 - 2)).mul(&b).div(&a);
    let pairs = [
        (Partition::of(&[2, 1]), Partition::of(&[1])),
        (Partition::of(&[2, 2]), Partition::of(&[1, 1])),
        (Partition::of(&[1, 1]), Partition::of(&[1])),
    ];
    let mut res = Residual::new();
    for (lam, mu) in &pairs {
        let lhs = binom(lam, mu, &a, &b, &ps, ctx)?.div(&dm);
        let ratio = delta(
            mu,
            &a.div(&b),
            &[tn.clone(), qm.recip(), b.recip(), qm.mul(&t1n).mul(&a)],
            &ps,
        )?
        .div(&delta(
            lam,
            &a,
            &[tn.clone(), qm.recip(), b.clone(), qm.mul(&t1n).mul(&a).div(&b)],
            &ps,
        )?);
        let flipped = binom(&mu.complement(m, n)?, &lam.complement(m, n)?, &flip_a, &b, &ps, ctx)?;
        res.push(&lhs, &ratio.mul(&flipped), digits);
    }
    Ok(Outcome { residual: res.max, digest: ps.digest() })
}

/// Adding a full rectangle to the upper index (rows or columns) reflects
/// the binomial with shifted parameters.
fn check_binom_spec_recur(env: &CheckEnv) -> Result<Outcome> {
    let ctx = env.ctx;
    let digits = ctx.digits;
    let mut rng = ctx.rng("binom-spec-recur");
    let ps = sample_generic(ctx, &mut rng, &binom_spec(&[]))?;
    let a = ps.get("a").clone();
    let pq = ps.p.mul(&ps.q);
    let mut res = Residual::new();

    // Rows: upper index gains the rectangle k^n.
    {
        let (k, n) = (1u32, 2usize);
        let qk = ps.q.powi(k as i64);
        let rect = Partition::rectangle(k, n);
        let pref = c_zero(&rect, &[qk.recip()], &ps)?
            .div(&c_zero(&rect, &[pq.mul(&a).mul(&qk)], &ps)?);
        let args = [ps.t.powi(n as i64), ps.t.powi(1 - n as i64).mul(&qk).mul(&a)];
        for (lam, mu) in [
            (Partition::of(&[1]), Partition::of(&[2])),
            (Partition::of(&[1, 1]), Partition::of(&[2, 1])),
            (Partition::of(&[1]), Partition::of(&[1])),
        ] {
            let lhs = binom_normalized(&lam.add_rectangle(k, n)?, &mu, &a, &qk.recip(), &[], &ps, ctx)?;
            let ratio = delta(&mu, &qk.mul(&a), &args, &ps)?
                .div(&delta(&lam, &qk.powi(2).mul(&a), &args, &ps)?);
            let rhs = pref.mul(&ratio).mul(&binom_normalized(&mu, &lam, &qk.mul(&a), &qk.recip(), &[], &ps, ctx)?);
            res.push(&lhs, &rhs, digits);
        }
    }

    // Columns: upper index gains the rectangle m^k by concatenation.
    {
        let (m, k) = (2u32, 1usize);
        let tk = ps.t.powi(k as i64);
        let rect = Partition::rectangle(m, k);
        let pref = c_zero(&rect, &[tk.clone()], &ps)?
            .div(&c_zero(&rect, &[pq.mul(&a).div(&tk)], &ps)?);
        let args = [ps.q.powi(-(m as i64)), ps.q.powi(m as i64).mul(&ps.t.powi(1 - k as i64)).mul(&a)];
        for (lam, mu) in [
            (Partition::of(&[1]), Partition::of(&[1, 1])),
            (Partition::of(&[2, 1]), Partition::of(&[2, 1, 1])),
            (Partition::of(&[1]), Partition::of(&[1])),
        ] {
            let lhs = binom_normalized(&lam.concat_rectangle(m, k)?, &mu, &a, &tk, &[], &ps, ctx)?;
            let ratio = delta(&mu, &a.div(&tk), &args, &ps)?
                .div(&delta(&lam, &a.div(&tk.powi(2)), &args, &ps)?);
            let rhs = pref.mul(&ratio).mul(&binom_normalized(&mu, &lam, &a.div(&tk), &tk, &[], &ps, ctx)?);
            res.push(&lhs, &rhs, digits);
        }
    }
    Ok(Outcome { residual: res.max, digest: ps.digest() })
}

/// The two-layer balanced sum is invariant under trading its inner
/// parameter for a second balanced choice.
fn check_binom_bailey(env: &CheckEnv) -> Result<Outcome> {
    let ctx = env.ctx;
    let digits = ctx.digits;
    let mut spec = SampleSpec::new(0, 0)
        .names(&["a", "b", "b2", "cc", "d", "f", "e", "g"])
        .constraint(
            vec![
                ("b", 1),
                ("b2", 1),
                ("d", 1),
                ("e", 1),
                ("cc", -1),
                ("a", -1),
                ("p", -1),
                ("q", -1),
            ],
            "e",
        )
        .constraint(
            vec![("b", 1), ("b2", 1), ("f", 1), ("g", 1), ("a", -1), ("p", -1), ("q", -1)],
            "g",
        );
    for fam in [
        vec![("a", 1)],
        vec![("b", 1)],
        vec![("b2", 1)],
        vec![("b", 1), ("a", -1)],
        vec![("b2", 1), ("a", -1)],
        vec![("cc", 1), ("b", -1)],
        vec![("cc", 1), ("b2", -1)],
        vec![("a", 1), ("b", -2)],
        vec![("a", 1), ("b2", -2)],
    ] {
        spec = spec.avoid_sweep(fam, (-6, 6), (-6, 6));
    }
    let mut rng = ctx.rng("binom-bailey");
    let ps = sample_generic(ctx, &mut rng, &spec)?;
    let a = ps.get("a").clone();
    let cv = ps.get("cc").clone();
    let (d, e) = (ps.get("d").clone(), ps.get("e").clone());
    let (fv, g) = (ps.get("f").clone(), ps.get("g").clone());
    let pq = ps.p.mul(&ps.q);
    let mut pairs = vec![
        (Partition::of(&[2, 1]), Partition::empty()),
        (Partition::of(&[2, 1]), Partition::of(&[1])),
    ];
    if env.nightly {
        pairs.push((Partition::of(&[2, 2, 1]), Partition::of(&[1, 1])));
    }
    let mut res = Residual::new();
    let sum_at = |bv: &MpComplex, lam: &Partition, kap: &Partition| -> Result<MpComplex> {
        let pref = delta0(lam, &a, &[bv.clone(), a.mul(&pq).div(&bv.mul(&fv))], &ps)?.div(
            &delta0(kap, &a.div(&cv), &[bv.div(&cv), a.mul(&pq).div(&bv.mul(&d))], &ps)?,
        );
        let mut sum = MpComplex::zero(ps.prec);
        for mu in enumerate_interval(kap, lam) {
            let w = delta0(&mu, &a.div(&bv), &[cv.div(&bv), fv.clone(), g.clone()], &ps)?.div(
                &delta0(&mu, &a.div(&bv), &[bv.recip(), d.clone(), e.clone()], &ps)?,
            );
            let b1 = binom(lam, &mu, &a, bv, &ps, ctx)?;
            let b2 = binom(&mu, kap, &a.div(&bv), &cv.div(&bv), &ps, ctx)?;
            sum = sum.add(&w.mul(&b1).mul(&b2));
        }
        Ok(pref.mul(&sum))
    };
    for (lam, kap) in &pairs {
        let lhs = sum_at(ps.get("b"), lam, kap)?;
        let rhs = sum_at(ps.get("b2"), lam, kap)?;
        res.push(&lhs, &rhs, digits);
    }
    Ok(Outcome { residual: res.max, digest: ps.digest() })
}

/// Reflection of the four-parameter kernel sum: inverting two of the slot
/// parameters (and compensating in the midpoint) leaves it invariant.
fn check_binom_d4(env: &CheckEnv) -> Result<Outcome> {
    let ctx = env.ctx;
    let digits = ctx.digits;
    let mut rng = ctx.rng("binom-d4");
    let ps = sample_generic(ctx, &mut rng, &binom_spec(&["v0", "v1", "v2", "v3"]))?;
    let (a, b) = (ps.get("a").clone(), ps.get("b").clone());
    let vs: Vec<MpComplex> = (0..4).map(|r| ps.get(&format!("v{r}")).clone()).collect();
    let pq = ps.p.mul(&ps.q);
    let cval = b
        .mul(&vs[0])
        .mul(&vs[1])
        .mul(&vs[2])
        .mul(&vs[3])
        .div(&a.mul(&pq))
        .sqrt();
    let mut pairs = vec![(Partition::of(&[2, 1]), Partition::of(&[1]))];
    if env.nightly {
        pairs.push((Partition::of(&[2, 1]), Partition::empty()));
    }
    let mut res = Residual::new();
    let omega = |cv: &MpComplex, slots: &[MpComplex], lam: &Partition, kap: &Partition| -> Result<MpComplex> {
        let mut sum = MpComplex::zero(ps.prec);
        for mu in enumerate_interval(kap, lam) {
            let mut w = MpComplex::one(ps.prec);
            for vr in slots {
                w = w
                    .mul(&c_zero(lam, &[pq.mul(&a).div(vr)], &ps)?)
                    .div(&c_zero(&mu, &[pq.mul(&a).div(vr)], &ps)?)
                    .mul(&c_zero(&mu, &[vr.div(cv)], &ps)?)
                    .div(&c_zero(kap, &[vr.div(cv)], &ps)?);
            }
            let b1 = binom_normalized(lam, &mu, &pq.mul(&a).mul(&a), &pq.mul(&a).mul(cv), &[], &ps, ctx)?;
            let b2 = binom_normalized(&mu, kap, &a.div(cv), &b.div(cv), &[], &ps, ctx)?;
            sum = sum.add(&w.mul(&b1).mul(&b2));
        }
        Ok(sum)
    };
    for (lam, kap) in &pairs {
        let lhs = omega(&cval, &vs, lam, kap)?;
        let reflected = [vs[0].clone(), vs[1].clone(), vs[2].recip(), vs[3].recip()];
        let rhs = omega(&cval.div(&vs[2].mul(&vs[3])), &reflected, lam, kap)?;
        res.push(&lhs, &rhs, digits);
    }
    Ok(Outcome { residual: res.max, digest: ps.digest() })
}

/// Central involution: swapping the two balanced parameter triples across
/// the midpoint leaves the two-layer sum invariant.
fn check_binom_central_d4(env: &CheckEnv) -> Result<Outcome> {
    let ctx = env.ctx;
    let digits = ctx.digits;
    let mut spec = SampleSpec::new(0, 0)
        .names(&["a", "b", "cc", "d", "b2", "c2", "d2"])
        .constraint(
            vec![("b", 1), ("cc", 1), ("d", 1), ("b2", -1), ("c2", -1), ("d2", -1)],
            "d2",
        );
    for fam in [
        vec![("a", 1)],
        vec![("b", 1)],
        vec![("b2", 1)],
        vec![("b", 1), ("a", -1)],
        vec![("b2", 1), ("b", -1)],
        vec![("b2", 1), ("a", -1), ("b", 1)],
    ] {
        spec = spec.avoid_sweep(fam, (-6, 6), (-6, 6));
    }
    let mut rng = ctx.rng("binom-central-d4");
    let ps = sample_generic(ctx, &mut rng, &spec)?;
    let a = ps.get("a").clone();
    let pq = ps.p.mul(&ps.q);
    let first = [ps.get("b").clone(), ps.get("cc").clone(), ps.get("d").clone()];
    let second = [ps.get("b2").clone(), ps.get("c2").clone(), ps.get("d2").clone()];
    let mut pairs = vec![(Partition::of(&[2, 1]), Partition::empty())];
    if env.nightly {
        pairs.push((Partition::of(&[2, 1]), Partition::of(&[1])));
    }
    let mut res = Residual::new();
    let central = |half: &[MpComplex], other: &[MpComplex], lam: &Partition, kap: &Partition| -> Result<MpComplex> {
        let (bv, cv, dv) = (half[0].clone(), half[1].clone(), half[2].clone());
        let (bp, cp, dp) = (other[0].clone(), other[1].clone(), other[2].clone());
        let pref = delta0(lam, &a, &[bv.clone(), cv.clone(), dv.clone()], &ps)?.div(&delta0(
            kap,
            &a.div(&bv.mul(&bp)),
            &[
                pq.mul(&a).div(&bp),
                pq.mul(&a).div(&bv.mul(&cv)),
                pq.mul(&a).div(&bv.mul(&dv)),
            ],
            &ps,
        )?);
        let mut sum = MpComplex::zero(ps.prec);
        for mu in enumerate_interval(kap, lam) {
            let b1 = binom(lam, &mu, &a, &bv, &ps, ctx)?;
            let b2 = binom(&mu, kap, &a.div(&bv), &bp, &ps, ctx)?;
            let den = delta0(
                &mu,
                &a.div(&bv),
                &[
                    pq.mul(&a).div(&bv.mul(&bp)),
                    pq.mul(&a).div(&cp),
                    pq.mul(&a).div(&dp),
                    bv.recip(),
                    cv.clone(),
                    dv.clone(),
                ],
                &ps,
            )?;
            sum = sum.add(&b1.mul(&b2).div(&den));
        }
        Ok(pref.mul(&sum))
    };
    for (lam, kap) in &pairs {
        let lhs = central(&first, &second, lam, kap)?;
        let rhs = central(&second, &first, lam, kap)?;
        res.push(&lhs, &rhs, digits);
    }
    Ok(Outcome { residual: res.max, digest: ps.digest() })
}

// ---------------------------------------------------------------------------
// Expansion identities between interpolation families
// ---------------------------------------------------------------------------

/// Solve for the coefficients of `target` in the span of `basis_fns` by
/// evaluating everything on random points; also return the coefficient
/// scale used to normalize vanishing entries.
fn expand_in_basis(
    target: &InterpFunction,
    basis_fns: &[InterpFunction],
    n: usize,
    ps: &ParameterSet,
    rng: &mut ChaCha20Rng,
) -> Result<(Vec<MpComplex>, rug::Float)> {
    let dim = basis_fns.len();
    let mut rows = Vec::with_capacity(dim);
    let mut rhs = Vec::with_capacity(dim);
    for _ in 0..dim {
        let xs = point(rng, ps.prec, n);
        rows.push(basis_fns.iter().map(|f| f.eval(&xs)).collect::<Result<Vec<_>>>()?);
        rhs.push(target.eval(&xs)?);
    }
    let (coeffs, _cond) = solve_with_condition(&rows, &rhs, ps.digits)?;
    let mut scale = rug::Float::new(ps.prec);
    for c in &coeffs {
        scale += c.abs();
    }
    Ok((coeffs, scale))
}

/// Change of the second parameter (closed hook-ratio times one binomial)
/// and of the first parameter (a single normalized binomial), recovered
/// from dense expansions.
fn check_interp_connection(env: &CheckEnv) -> Result<Outcome> {
    let ctx = env.ctx;
    let digits = ctx.digits;
    let (m, n) = (2u32, 2usize);
    let mut spec = SampleSpec::new(m, n).names(&["a", "b", "b2", "a2"]);
    for fam in [
        vec![("a", 1), ("b2", -1)],
        vec![("b", 1), ("b2", -1)],
        vec![("b", 1), ("a", -1)],
        vec![("b", 2), ("b2", -2)],
        vec![("a", 1), ("b", 1), ("b2", -2)],
        vec![("a", 1), ("b", -1)],
        vec![("a", 1), ("a2", -1)],
        vec![("b", 1), ("a2", -1)],
        vec![("a", 2), ("a2", -2)],
        vec![("a", 2), ("b", -1), ("a2", -1)],
        vec![("a", 1), ("a2", 1)],
        vec![("b", 1), ("a2", 1)],
        vec![("b", 1), ("b2", 1)],
        vec![("a", 2), ("b", -2)],
        vec![("a", 2), ("b2", -2)],
    ] {
        spec = spec.avoid_sweep(fam, (-7, 7), (-7, 7));
    }
    spec = add_interp_regularity(spec, m, n, &vec![("a", 1)], &vec![("b", 1)]);
    spec = add_interp_regularity(spec, m, n, &vec![("a", 1)], &vec![("b2", 1)]);
    spec = add_interp_regularity(spec, m, n, &vec![("a2", 1)], &vec![("b", 1)]);
    let mut rng = ctx.rng("interp-connection");
    let ps = sample_generic(ctx, &mut rng, &spec)?;
    let digest = ps.digest();
    let (a, b) = (ps.get("a").clone(), ps.get("b").clone());
    let (a2, b2) = (ps.get("a2").clone(), ps.get("b2").clone());
    let pq = ps.p.mul(&ps.q);
    let qm = ps.q.powi(m as i64);
    let tn = ps.t.powi(n as i64);
    let tn1 = ps.t.powi(n as i64 - 1);
    let rect = Partition::rectangle(m, n);
    let lam = Partition::of(&[2, 1]);
    let mus = enumerate_rectangle(m, n);
    let mut res = Residual::new();

    let v = draw_complex(&mut rng, ps.prec, 0.5, 2.0);
    let w = draw_complex(&mut rng, ps.prec, 0.5, 2.0);
    let target = interp_theta(&lam, m, n, &a, &b, &v, &ps, &mut rng)?;

    // Second parameter b -> b2.
    let basis: Vec<InterpFunction> = mus
        .iter()
        .map(|mu| interp_theta(mu, m, n, &a, &b2, &w, &ps, &mut rng))
        .collect::<Result<_>>()?;
    let (coeffs, scale) = expand_in_basis(&target, &basis, n, &ps, &mut rng)?;
    let cpref = c_zero(&rect, &[tn1.mul(&a).mul(&b), b.div(&a)], &ps)?
        .div(&c_zero(&rect, &[tn1.mul(&a).mul(&b2), b2.div(&a)], &ps)?);
    let den = delta(
        &lam,
        &tn1.mul(&a).div(&qm.mul(&b)),
        &[b2.div(&b), tn.clone(), qm.recip(), pq.div(&qm.mul(&b).mul(&b2))],
        &ps,
    )?;
    for (mu, got) in mus.iter().zip(&coeffs) {
        if mu.contains(&lam) {
            let num = delta(
                mu,
                &tn1.mul(&a).div(&qm.mul(&b2)),
                &[b.div(&b2), tn.clone(), qm.recip(), pq.div(&qm.mul(&b).mul(&b2))],
                &ps,
            )?;
            let bn = binom(mu, &lam, &tn1.mul(&a).div(&qm.mul(&b2)), &b.div(&b2), &ps, ctx)?;
            res.push(got, &cpref.mul(&num).div(&den).mul(&bn), digits);
        } else {
            res.push_abs((got.abs() / scale.clone()).to_f64());
        }
    }

    // First parameter a -> a2: one angle-normalized binomial.
    let basis: Vec<InterpFunction> = mus
        .iter()
        .map(|mu| interp_theta(mu, m, n, &a2, &b, &w, &ps, &mut rng))
        .collect::<Result<_>>()?;
    let (coeffs, scale) = expand_in_basis(&target, &basis, n, &ps, &mut rng)?;
    for (mu, got) in mus.iter().zip(&coeffs) {
        if lam.contains(mu) {
            let want = binom_normalized(
                &lam,
                mu,
                &tn1.mul(&a).div(&qm.mul(&b)),
                &a.div(&a2),
                &[tn1.mul(&a).mul(&a2)],
                &ps,
                ctx,
            )?;
            res.push(got, &want, digits);
        } else {
            res.push_abs((got.abs() / scale.clone()).to_f64());
        }
    }
    Ok(Outcome { residual: res.max, digest })
}

/// Simultaneous change of both parameters: the coefficient is a balanced
/// double sum over the intersection of the two indices.
fn check_interp_6j(env: &CheckEnv) -> Result<Outcome> {
    let ctx = env.ctx;
    let digits = ctx.digits;
    let (m, n) = (2u32, 2usize);
    let mut spec = SampleSpec::new(m, n).names(&["a", "b", "b2", "a2"]);
    for fam in [
        vec![("a", 1), ("a2", -1)],
        vec![("b", 1), ("a2", -1)],
        vec![("a", 2), ("a2", -2)],
        vec![("a", 2), ("b", -1), ("a2", -1)],
        vec![("b", 1), ("b2", -1)],
        vec![("b", 2), ("b2", -2)],
        vec![("a2", 1), ("b", 1), ("b2", -2)],
        vec![("a", 1), ("a2", 1)],
        vec![("b", 1), ("b2", 1)],
        vec![("a2", 1), ("b", 1)],
        vec![("a2", 1), ("b2", -1)],
        vec![("a2", 2), ("b", -2)],
        vec![("a", 2), ("b", -2)],
        vec![("a2", 2), ("b2", -2)],
        vec![("b", 1), ("a", -1)],
        vec![("a", 1), ("b2", -1)],
    ] {
        spec = spec.avoid_sweep(fam, (-7, 7), (-7, 7));
    }
    spec = add_interp_regularity(spec, m, n, &vec![("a", 1)], &vec![("b", 1)]);
    spec = add_interp_regularity(spec, m, n, &vec![("a2", 1)], &vec![("b2", 1)]);
    let mut rng = ctx.rng("interp-6j");
    let ps = sample_generic(ctx, &mut rng, &spec)?;
    let digest = ps.digest();
    let (a, b) = (ps.get("a").clone(), ps.get("b").clone());
    let (a2, b2) = (ps.get("a2").clone(), ps.get("b2").clone());
    let pq = ps.p.mul(&ps.q);
    let qm = ps.q.powi(m as i64);
    let tn = ps.t.powi(n as i64);
    let tn1 = ps.t.powi(n as i64 - 1);
    let rect = Partition::rectangle(m, n);
    let lam = Partition::of(&[2, 1]);
    let kaps = enumerate_rectangle(m, n);
    let mut res = Residual::new();

    let v = draw_complex(&mut rng, ps.prec, 0.5, 2.0);
    let w = draw_complex(&mut rng, ps.prec, 0.5, 2.0);
    let target = interp_theta(&lam, m, n, &a, &b, &v, &ps, &mut rng)?;
    let basis: Vec<InterpFunction> = kaps
        .iter()
        .map(|kap| interp_theta(kap, m, n, &a2, &b2, &w, &ps, &mut rng))
        .collect::<Result<_>>()?;
    let (coeffs, _scale) = expand_in_basis(&target, &basis, n, &ps, &mut rng)?;

    let arg_lb = tn1.mul(&a).div(&qm.mul(&b));
    let arg_kb = tn1.mul(&a2).div(&qm.mul(&b2));
    let arg_mb = tn1.mul(&a2).div(&qm.mul(&b));
    let cpref = c_zero(&rect, &[tn1.mul(&a2).mul(&b), b.div(&a2)], &ps)?
        .div(&c_zero(&rect, &[tn1.mul(&a2).mul(&b2), b2.div(&a2)], &ps)?);
    let den = delta0(&lam, &arg_lb, &[pq.div(&qm.mul(&a2).mul(&b))], &ps)?;
    for (kap, got) in kaps.iter().zip(&coeffs) {
        let dk = delta(kap, &arg_kb, &[tn.clone(), qm.recip(), pq.div(&qm.mul(&b).mul(&b2))], &ps)?;
        let mut sum = MpComplex::zero(ps.prec);
        for mu in enumerate_interval(&Partition::empty(), &meet(&lam, kap)) {
            let b1 = binom_normalized(&lam, &mu, &arg_lb, &a.div(&a2), &[], &ps, ctx)?;
            let b2n = binom_normalized(kap, &mu, &arg_kb, &b.div(&b2), &[], &ps, ctx)?;
            let dmu = delta(
                &mu,
                &arg_mb,
                &[tn.clone(), qm.recip(), tn1.mul(&a).mul(&a2), pq.div(&qm.mul(&b).mul(&b2))],
                &ps,
            )?;
            sum = sum.add(&b1.mul(&b2n).div(&dmu));
        }
        res.push(got, &cpref.mul(&dk).div(&den).mul(&sum), digits);
    }
    Ok(Outcome { residual: res.max, digest })
}

/// Restricting trailing variables to a principal block expands the function
/// in fewer variables with normalized-binomial coefficients.
fn check_interp_branching(env: &CheckEnv) -> Result<Outcome> {
    let ctx = env.ctx;
    let digits = ctx.digits;
    let n = if env.nightly { 2usize } else { 1 };
    let k = 1usize;
    let mut spec = SampleSpec::new(2, n + k).names(&["a", "b", "v"]);
    for fam in [
        vec![("a", 1), ("v", 1)],
        vec![("a", 1), ("v", -1)],
        vec![("b", 1), ("v", 1)],
        vec![("a", 1), ("b", -1)],
    ] {
        spec = spec.avoid_sweep(fam, (-6, 6), (-6, 6));
    }
    spec = add_interp_regularity(spec, 3, n + k, &vec![("a", 1)], &vec![("b", 1)]);
    let mut rng = ctx.rng("interp-branching");
    let ps = sample_generic(ctx, &mut rng, &spec)?;
    let (a, b, v) = (ps.get("a").clone(), ps.get("b").clone(), ps.get("v").clone());
    let pq = ps.p.mul(&ps.q);
    let tk = ps.t.powi(k as i64);
    let tnk1 = ps.t.powi((n + k) as i64 - 1);
    let tns = ps.t.powi(n as i64);
    let slots = [
        tnk1.mul(&a).mul(&v),
        tns.mul(&a).div(&v),
        pq.mul(&a).div(&ps.t.mul(&b)),
    ];
    let mut lams = vec![Partition::of(&[1]), Partition::of(&[1, 1]), Partition::of(&[2, 1])];
    if env.nightly {
        lams.push(Partition::of(&[2, 2, 1]));
    }
    let mut res = Residual::new();
    for lam in &lams {
        let big = rstar_fn(lam, n + k, &a, &b, &ps, &mut rng)?;
        let kaps: Vec<Partition> = enumerate_interval(&Partition::empty(), lam)
            .into_iter()
            .filter(|kap| kap.length() <= n)
            .collect();
        let mut terms: Vec<(MpComplex, Option<RStar>)> = Vec::with_capacity(kaps.len());
        for kap in &kaps {
            let coef =
                binom_normalized(lam, kap, &tnk1.mul(&a).div(&b), &tk, &slots, &ps, ctx)?;
            let f = if kap.is_empty() {
                None
            } else {
                Some(rstar_fn(kap, n, &a, &b, &ps, &mut rng)?)
            };
            terms.push((coef, f));
        }
        for _ in 0..2 {
            let xs = point(&mut rng, ps.prec, n);
            let mut big_xs = xs.clone();
            for j in 0..k {
                big_xs.push(v.mul(&ps.t.powi(j as i64)));
            }
            let lhs = big.eval(&big_xs)?;
            let mut rhs = MpComplex::zero(ps.prec);
            for (coef, f) in &terms {
                let fv = match f {
                    Some(f) => f.eval(&xs)?,
                    None => MpComplex::one(ps.prec),
                };
                rhs = rhs.add(&coef.mul(&fv));
            }
            res.push(&lhs, &rhs, digits);
        }
    }
    Ok(Outcome { residual: res.max, digest: ps.digest() })
}

/// Multiplying by the degree-raising theta ladder expands in indices one
/// horizontal strip up.
fn check_interp_pieri(env: &CheckEnv) -> Result<Outcome> {
    let ctx = env.ctx;
    let digits = ctx.digits;
    let n = 2usize;
    let shift = 1u32;
    let mut spec = SampleSpec::new(2, n).names(&["a", "b", "v"]);
    for fam in [
        vec![("v", 1), ("b", -1)],
        vec![("v", 1), ("a", 1)],
        vec![("v", 1), ("a", -1)],
        vec![("v", 1), ("b", 1)],
        vec![("a", 1), ("b", -1)],
    ] {
        spec = spec.avoid_sweep(fam, (-6, 6), (-6, 6));
    }
    spec = add_interp_regularity(spec, 3, n, &vec![("a", 1)], &vec![("b", 1)]);
    let mut rng = ctx.rng("interp-pieri");
    let ps = sample_generic(ctx, &mut rng, &spec)?;
    let (a, b, v) = (ps.get("a").clone(), ps.get("b").clone(), ps.get("v").clone());
    let pq = ps.p.mul(&ps.q);
    let qs = ps.q.powi(shift as i64);
    let tn = ps.t.powi(n as i64);
    let tn1 = ps.t.powi(n as i64 - 1);
    let mut lams = vec![Partition::of(&[1]), Partition::of(&[1, 1])];
    if env.nightly {
        lams.push(Partition::of(&[2, 1]));
    }
    let mut res = Residual::new();
    for lam in &lams {
        let f_shift = rstar_fn(lam, n, &a, &b.div(&qs), &ps, &mut rng)?;
        let pref = delta0(
            &Partition::rectangle(shift, n),
            &tn1.mul(&v).div(&b),
            &[tn1.mul(&v).mul(&a), v.div(&a)],
            &ps,
        )?;
        let slots = [tn.clone(), pq.div(&v.mul(&b)), qs.mul(&v).div(&b)];
        let den = delta(lam, &qs.mul(&tn1).mul(&a).div(&b), &slots, &ps)?;
        let upper = lam.add_rectangle(shift, n)?;
        let mut terms: Vec<(MpComplex, RStar)> = Vec::new();
        for kap in enumerate_interval(lam, &upper) {
            let dk = delta(&kap, &tn1.mul(&a).div(&b), &slots, &ps)?;
            let bn = binom_normalized(&kap, lam, &tn1.mul(&a).div(&b), &qs.recip(), &[], &ps, ctx)?;
            let coef = pref.mul(&dk).div(&den).mul(&bn);
            terms.push((coef, rstar_fn(&kap, n, &a, &b, &ps, &mut rng)?));
        }
        for _ in 0..2 {
            let xs = point(&mut rng, ps.prec, n);
            let mut multiplier = MpComplex::one(ps.prec);
            for x in &xs {
                multiplier = multiplier
                    .mul(&theta_pochhammer(&v.mul(x), &ps.q, &ps.p, shift, digits)?)
                    .mul(&theta_pochhammer(&v.div(x), &ps.q, &ps.p, shift, digits)?)
                    .div(&theta_pochhammer(&pq.div(&b).mul(x), &ps.q, &ps.p, shift, digits)?)
                    .div(&theta_pochhammer(&pq.div(&b).div(x), &ps.q, &ps.p, shift, digits)?);
            }
            let lhs = multiplier.mul(&f_shift.eval(&xs)?);
            let mut rhs = MpComplex::zero(ps.prec);
            for (coef, f) in &terms {
                rhs = rhs.add(&coef.mul(&f.eval(&xs)?));
            }
            res.push(&lhs, &rhs, digits);
        }
    }
    Ok(Outcome { residual: res.max, digest: ps.digest() })
}

/// The double theta kernel expands as a diagonal sum of interpolation
/// functions in the two variable sets, with complementary-conjugate
/// indices.
fn check_interp_cauchy_id(env: &CheckEnv) -> Result<Outcome> {
    let ctx = env.ctx;
    let digits = ctx.digits;
    let (m, n) = (1u32, 2usize);
    let mut spec = SampleSpec::new(m, n).names(&["a", "b"]);
    for fam in [
        vec![("a", 1), ("b", 1)],
        vec![("b", 1), ("a", -1)],
        vec![("a", 2)],
        vec![("b", 2)],
    ] {
        spec = spec.avoid_sweep(fam, (-8, 8), (-8, 8));
    }
    spec = add_interp_regularity(spec, m, n, &vec![("a", 1)], &vec![("b", 1)]);
    spec = add_interp_regularity(spec, n as u32, m as usize, &vec![("a", 1)], &vec![("b", 1)]);
    let mut rng = ctx.rng("interp-cauchy-id");
    let ps = sample_generic(ctx, &mut rng, &spec)?;
    let (a, b) = (ps.get("a").clone(), ps.get("b").clone());
    let conj = ps.conjugate_bases();
    let sp = ps.p.sqrt();
    let (ay, by) = (sp.div(&a), sp.div(&b));
    let qm = ps.q.powi(m as i64);
    let tn = ps.t.powi(n as i64);
    let tn1 = ps.t.powi(n as i64 - 1);
    let rect = Partition::rectangle(m, n);
    let c0 = c_zero(&rect, &[tn1.mul(&a).mul(&b), b.div(&a)], &ps)?;
    let wx = draw_complex(&mut rng, ps.prec, 0.5, 2.0);
    let wy = draw_complex(&mut rng, ps.prec, 0.5, 2.0);
    let mut terms: Vec<(MpComplex, InterpFunction, InterpFunction)> = Vec::new();
    for mu in enumerate_rectangle(m, n) {
        let weight = delta(&mu, &tn1.mul(&a).div(&qm.mul(&b)), &[tn.clone(), qm.recip()], &ps)?
            .div(&c0);
        let fx = interp_theta(&mu, m, n, &a, &b, &wx, &ps, &mut rng)?;
        let comp = mu.conjugate().complement(n as u32, m as usize)?;
        let fy = interp_theta(&comp, n as u32, m as usize, &ay, &by, &wy, &conj, &mut rng)?;
        terms.push((weight, fx, fy));
    }
    let trials = if env.nightly { 3 } else { 2 };
    let mut res = Residual::new();
    for _ in 0..trials {
        let xs = point(&mut rng, ps.prec, n);
        let ys = point(&mut rng, ps.prec, m as usize);
        let mut lhs = MpComplex::one(ps.prec);
        for x in &xs {
            for y in &ys {
                lhs = lhs
                    .mul(&theta(&y.mul(x), &ps.p, digits)?)
                    .mul(&theta(&y.div(x), &ps.p, digits)?);
            }
        }
        let ys_shift: Vec<MpComplex> = ys.iter().map(|y| sp.div(y)).collect();
        let mut rhs = MpComplex::zero(ps.prec);
        for (wt, fx, fy) in &terms {
            rhs = rhs.add(&wt.mul(&fx.eval(&xs)?).mul(&fy.eval(&ys_shift)?));
        }
        res.push(&lhs, &rhs, digits);
    }
    Ok(Outcome { residual: res.max, digest: ps.digest() })
}

/// The degree-raising integral operator maps an interpolation function at
/// half-shifted parameters to a one-column band of interpolation functions
/// with explicit coefficients.
fn check_raise_op(env: &CheckEnv) -> Result<Outcome> {
    let ctx = env.ctx;
    let digits = ctx.digits;
    let n = if env.nightly { 2usize } else { 1 };
    let lam = if env.nightly { Partition::of(&[1, 1]) } else { Partition::of(&[1]) };
    let mut spec = SampleSpec::new(2, n).names(&["u0", "u1", "u2", "u3", "u4"]);
    for fam in [
        vec![("u0", 1), ("u2", 1)],
        vec![("u0", 1), ("u3", 1)],
        vec![("u0", 1), ("u4", 1)],
        vec![("u1", 1), ("u2", 1)],
        vec![("u1", 1), ("u3", 1)],
        vec![("u1", 1), ("u4", 1)],
        vec![("u1", 1), ("u2", 1), ("u3", 1), ("u4", 1)],
        vec![("u1", 2), ("u0", -2)],
        vec![("u0", 1), ("u1", 1)],
    ] {
        spec = spec.avoid_sweep(fam, (-6, 6), (-6, 6));
    }
    spec = add_interp_regularity(spec, 2, n, &vec![("u1", 1)], &vec![("u0", 1)]);
    let mut rng = ctx.rng("raise-op");
    let ps = sample_generic(ctx, &mut rng, &spec)?;
    let us: [MpComplex; 5] = std::array::from_fn(|r| ps.get(&format!("u{r}")).clone());
    let (u0, u1) = (us[0].clone(), us[1].clone());
    let pq = ps.p.mul(&ps.q);
    let tn1 = ps.t.powi(n as i64 - 1);
    let qh = ps.q_half().clone();
    let u5 = ps
        .p
        .powi(2)
        .mul(&ps.q)
        .div(&tn1.mul(&u0).mul(&u1).mul(&us[2]).mul(&us[3]).mul(&us[4]));
    let slots = [
        ps.t.powi(n as i64),
        pq.div(&u0.mul(&us[2])),
        pq.div(&u0.mul(&us[3])),
        pq.div(&u0.mul(&us[4])),
        pq.div(&u0.mul(&u5)),
    ];
    let arg = tn1.mul(&u1).div(&u0);
    let f = rstar_fn(&lam, n, &qh.mul(&u1), &u0.div(&qh), &ps, &mut rng)?;
    let lifted = apply_dplus(&us, &ps, n, &Evaluable::new(n, true, move |xs| f.eval(xs)))?;
    let den = delta(&lam, &ps.q.mul(&arg), &slots, &ps)?;
    let upper = lam.add_rectangle(1, n)?;
    let mut terms: Vec<(MpComplex, RStar)> = Vec::new();
    for mu in enumerate_interval(&lam, &upper) {
        let dm = delta(&mu, &arg, &slots, &ps)?;
        let bn = binom_normalized(&mu, &lam, &arg, &ps.q.recip(), &[], &ps, ctx)?;
        terms.push((dm.div(&den).mul(&bn), rstar_fn(&mu, n, &u1, &u0, &ps, &mut rng)?));
    }
    let mut res = Residual::new();
    for _ in 0..2 {
        let xs = point(&mut rng, ps.prec, n);
        let lhs = lifted.eval(&xs)?;
        let mut rhs = MpComplex::zero(ps.prec);
        for (coef, g) in &terms {
            rhs = rhs.add(&coef.mul(&g.eval(&xs)?));
        }
        res.push(&lhs, &rhs, digits);
    }
    Ok(Outcome { residual: res.max, digest: ps.digest() })
}

/// The balanced two-layer sum at single-row indices: the classical
/// terminating summation in its ladder form.
fn check_ft_summation(env: &CheckEnv) -> Result<Outcome> {
    let ctx = env.ctx;
    let mut rng = ctx.rng("ft-summation");
    let ps = sample_generic(ctx, &mut rng, &bde_spec((-8, 8)))?;
    let mut pairs = vec![
        (Partition::of(&[4]), Partition::empty()),
        (Partition::of(&[4]), Partition::of(&[1])),
    ];
    if env.nightly {
        pairs.push((Partition::of(&[6]), Partition::of(&[3])));
    }
    let mut res = Residual::new();
    for (lam, kap) in &pairs {
        bde_push(lam, kap, &ps, ctx, &mut res)?;
    }
    Ok(Outcome { residual: res.max, digest: ps.digest() })
}

/// Rectangle summation: the full-grid sum of weights collapses to a closed
/// ratio of hook products under the balancing condition.
fn check_warnaar_rect(env: &CheckEnv) -> Result<Outcome> {
    let ctx = env.ctx;
    let digits = ctx.digits;
    let (m, n) = if env.nightly { (3u32, 3usize) } else { (2, 2) };
    let mut spec = SampleSpec::new(m, n)
        .names(&["a", "b0", "b1", "b2", "b3"])
        .constraint(
            vec![
                ("q", -(m as i64) - 1),
                ("t", n as i64 - 1),
                ("b0", 1),
                ("b1", 1),
                ("b2", 1),
                ("b3", 1),
                ("a", -2),
                ("p", -1),
            ],
            "b3",
        );
    for fam in [
        vec![("a", 1)],
        vec![("a", 2)],
        vec![("b0", 1)],
        vec![("b1", 1)],
        vec![("b2", 1)],
        vec![("b3", 1)],
        vec![("a", 1), ("b0", -1)],
        vec![("a", 1), ("b1", -1)],
        vec![("a", 1), ("b2", -1)],
        vec![("a", 1), ("b3", -1)],
        vec![("a", 1), ("b0", -1), ("b1", -1)],
        vec![("a", 1), ("b0", -1), ("b2", -1)],
        vec![("a", 1), ("b1", -1), ("b2", -1)],
        vec![("a", 1), ("b0", -1), ("b1", -1), ("b2", -1)],
    ] {
        spec = spec.avoid_sweep(fam, (-6, 6), (-6, 6));
    }
    let mut rng = ctx.rng("warnaar-rect");
    let ps = sample_generic(ctx, &mut rng, &spec)?;
    let a = ps.get("a").clone();
    let bs: Vec<MpComplex> = (0..4).map(|r| ps.get(&format!("b{r}")).clone()).collect();
    let pqa = ps.p.mul(&ps.q).mul(&a);
    let slots = [
        ps.t.powi(n as i64),
        ps.q.powi(-(m as i64)),
        bs[0].clone(),
        bs[1].clone(),
        bs[2].clone(),
        bs[3].clone(),
    ];
    let mut lhs = MpComplex::zero(ps.prec);
    for mu in enumerate_rectangle(m, n) {
        lhs = lhs.add(&delta(&mu, &a, &slots, &ps)?);
    }
    let rect = Partition::rectangle(m, n);
    let num = c_zero(
        &rect,
        &[
            pqa.clone(),
            pqa.div(&bs[0].mul(&bs[1])),
            pqa.div(&bs[0].mul(&bs[2])),
            pqa.div(&bs[1].mul(&bs[2])),
        ],
        &ps,
    )?;
    let den = c_zero(
        &rect,
        &[
            pqa.div(&bs[0]),
            pqa.div(&bs[1]),
            pqa.div(&bs[2]),
            pqa.div(&bs[0].mul(&bs[1]).mul(&bs[2])),
        ],
        &ps,
    )?;
    let mut res = Residual::new();
    res.push(&lhs, &num.div(&den), digits);
    Ok(Outcome { residual: res.max, digest: ps.digest() })
}

// ---------------------------------------------------------------------------
// Biorthogonal functions
// ---------------------------------------------------------------------------

/// Balanced parameter draw shared by the biorthogonal checks: six named
/// parameters with the last solved from the balance relation, swept over
/// the ratio families the evaluations touch.
fn biorth_setup(
    ctx: &NumericContext,
    label: &str,
    n: usize,
) -> Result<(BiorthParams, ChaCha20Rng)> {
    let mut spec = SampleSpec::new(2, n)
        .names(&["t0", "t1", "t2", "t3", "u0", "u1"])
        .constraint(
            vec![
                ("t", 2 * n as i64 - 2),
                ("t0", 1),
                ("t1", 1),
                ("t2", 1),
                ("t3", 1),
                ("u0", 1),
                ("u1", 1),
                ("p", -1),
                ("q", -1),
            ],
            "u1",
        );
    for fam in [
        vec![("u0", 1), ("u1", 1)],
        vec![("t0", 1), ("u1", 1)],
        vec![("u0", 1), ("t0", -1)],
        vec![("u0", 1), ("t1", 1)],
        vec![("u0", 1), ("t2", 1)],
        vec![("u0", 1), ("t3", 1)],
        vec![("t0", 1), ("t1", 1)],
    ] {
        spec = spec.avoid_sweep(fam, (-6, 6), (-6, 6));
    }
    spec = add_interp_regularity(spec, 3, n, &vec![("t0", 1)], &vec![("u0", 1)]);
    let mut rng = ctx.rng(label);
    let ps = sample_generic(ctx, &mut rng, &spec)?;
    let bp = BiorthParams::new(
        n,
        ps.get("t0").clone(),
        ps.get("t1").clone(),
        ps.get("t2").clone(),
        ps.get("t3").clone(),
        ps.get("u0").clone(),
        ps.get("u1").clone(),
        &ps,
        ctx,
    )?;
    Ok((bp, rng))
}

/// Expand the lambda-indexed function of `bp_old` in the basis indexed by
/// sub-partitions of lambda for `bp_new`, sampling on the old grid.
fn expand_rtilde(
    lam: &Partition,
    bp_old: &BiorthParams,
    bp_new: &BiorthParams,
    ctx: &NumericContext,
    rng: &mut ChaCha20Rng,
) -> Result<(Vec<Partition>, Vec<MpComplex>)> {
    let mus = enumerate_interval(&Partition::empty(), lam);
    let target = rtilde_fn(lam, bp_old, ctx, rng)?;
    let fns: Vec<RTilde> = mus
        .iter()
        .map(|mu| rtilde_fn(mu, bp_new, ctx, rng))
        .collect::<Result<_>>()?;
    let mut rows = Vec::with_capacity(mus.len());
    let mut rhs = Vec::with_capacity(mus.len());
    for nu in &mus {
        let xs = bp_old.grid_point(nu);
        rows.push(fns.iter().map(|f| f.eval(&xs)).collect::<Result<Vec<_>>>()?);
        rhs.push(target.eval(&xs)?);
    }
    let (coeffs, _cond) = solve_with_condition(&rows, &rhs, bp_old.ps.digits)?;
    Ok((mus, coeffs))
}

/// Normalization (identity at the empty index and on the base grid point),
/// the closed principal value on the second spectrum, and invariance under
/// swapping the first two parameters up to that principal value.
fn check_biorth_symmetry(env: &CheckEnv) -> Result<Outcome> {
    let ctx = env.ctx;
    let digits = ctx.digits;
    let (bp, mut rng) = biorth_setup(ctx, "biorth-symmetry", 2)?;
    let ps = bp.ps.clone();
    let n = bp.n;
    let one = MpComplex::one(ps.prec);
    let tn1 = ps.t.powi(n as i64 - 1);
    let pq = ps.p.mul(&ps.q);
    let mut res = Residual::new();

    let xs = point(&mut rng, ps.prec, n);
    res.push(&rtilde_eval(&Partition::empty(), &bp, &xs, ctx, &mut rng)?, &one, digits);

    let t1p: Vec<MpComplex> = (1..=n)
        .map(|i| bp.t1.mul(&ps.t.powi((n - i) as i64)))
        .collect();
    for lam in [Partition::of(&[1]), Partition::of(&[2, 1])] {
        res.push(&rtilde_at_partition(&lam, &Partition::empty(), &bp, ctx, &mut rng)?, &one, digits);
        let got = rtilde_eval(&lam, &bp, &t1p, ctx, &mut rng)?;
        let want = delta0(
            &lam,
            &bp.u0.mul(&bp.u1).recip(),
            &[
                tn1.mul(&bp.t1).mul(&bp.t2),
                tn1.mul(&bp.t1).mul(&bp.t3),
                tn1.recip().div(&bp.t1.mul(&bp.u1)),
                pq.mul(&tn1).mul(&bp.t0).div(&bp.u0),
            ],
            &ps,
        )?;
        res.push(&got, &want, digits);
    }

    let lam = Partition::of(&[2, 1]);
    let swapped = rtilde_fn(&lam, &bp.swap01(ctx)?, ctx, &mut rng)?;
    let original = rtilde_fn(&lam, &bp, ctx, &mut rng)?;
    let norm = original.eval(&t1p)?;
    let trials = if env.nightly { 5 } else { 3 };
    for _ in 0..trials {
        let xs = point(&mut rng, ps.prec, n);
        res.push(&swapped.eval(&xs)?, &original.eval(&xs)?.div(&norm), digits);
    }
    Ok(Outcome { residual: res.max, digest: ps.digest() })
}

/// Eigenfunction property under the difference operator, with the
/// parameters split into half-shifted pairs and a closed eigenvalue.
fn check_biorth_diffeq(env: &CheckEnv) -> Result<Outcome> {
    let ctx = env.ctx;
    let digits = ctx.digits;
    let (bp, mut rng) = biorth_setup(ctx, "biorth-diffeq", 2)?;
    let ps = bp.ps.clone();
    let n = bp.n;
    let qh = ps.q_half().clone();
    let lam = Partition::of(&[2, 1]);
    let shifted = BiorthParams::new(
        n,
        bp.t0.mul(&qh),
        bp.t1.mul(&qh),
        bp.t2.div(&qh),
        bp.t3.div(&qh),
        bp.u0.mul(&qh),
        bp.u1.div(&qh),
        &ps,
        ctx,
    )?;
    let half = Arc::new(rtilde_fn(&lam, &shifted, ctx, &mut rng)?);
    let g = Evaluable::new(n, true, move |xs| half.eval(xs));
    let d4 = ps.t.powi(1 - n as i64).mul(&ps.p).div(&bp.u0.mul(&bp.t0).mul(&bp.t1));
    let applied = apply_d(&bp.u0, &bp.t0, &bp.t1, &d4, &ps, n, &g);
    let whole = rtilde_fn(&lam, &bp, ctx, &mut rng)?;
    let mut eigen = MpComplex::one(ps.prec);
    for i in 1..=n {
        let tni = ps.t.powi((n - i) as i64);
        for pair in [
            bp.u0.mul(&bp.t0),
            bp.u0.mul(&bp.t1),
            bp.t0.mul(&bp.t1),
        ] {
            eigen = eigen.mul(&theta(&tni.mul(&pair), &ps.p, digits)?);
        }
    }
    let mut res = Residual::new();
    let trials = if env.nightly { 3 } else { 2 };
    for _ in 0..trials {
        let xs = point(&mut rng, ps.prec, n);
        res.push(&applied.eval(&xs)?, &eigen.mul(&whole.eval(&xs)?), digits);
    }
    Ok(Outcome { residual: res.max, digest: ps.digest() })
}

/// Evaluation symmetry: the value of the lambda function on the kappa grid
/// point equals the kappa function of the hatted parameters on the lambda
/// grid point; the hat is an involution on the parameters.
fn check_biorth_eval_symm(env: &CheckEnv) -> Result<Outcome> {
    let ctx = env.ctx;
    let digits = ctx.digits;
    let (bp, mut rng) = biorth_setup(ctx, "biorth-eval-symm", 2)?;
    let hat = hat_params(&bp, ctx)?;
    let hh = hat_params(&hat, ctx)?;
    let mut res = Residual::new();
    res.push(&hh.t0.mul(&hh.t0), &bp.t0.mul(&bp.t0), digits);
    let mut pairs = vec![
        (Partition::of(&[1]), Partition::of(&[1])),
        (Partition::of(&[2]), Partition::of(&[1, 1])),
        (Partition::of(&[2, 1]), Partition::of(&[2])),
        (Partition::of(&[2, 1]), Partition::empty()),
    ];
    if env.nightly {
        pairs.push((Partition::of(&[2, 1]), Partition::of(&[2, 1])));
        pairs.push((Partition::of(&[3]), Partition::of(&[1, 1])));
    }
    for (lam, kap) in &pairs {
        let lhs = rtilde_at_partition(lam, kap, &bp, ctx, &mut rng)?;
        let rhs = rtilde_at_partition(kap, lam, &hat, ctx, &mut rng)?;
        res.push(&lhs, &rhs, digits);
    }
    Ok(Outcome { residual: res.max, digest: bp.ps.digest() })
}

/// The inverse expansion: abelian interpolation functions decompose in the
/// biorthogonal basis with closed binomial coefficients.
fn check_biorth_inverse_binom(env: &CheckEnv) -> Result<Outcome> {
    let ctx = env.ctx;
    let digits = ctx.digits;
    let (bp, mut rng) = biorth_setup(ctx, "biorth-inverse-binom", 2)?;
    let ps = bp.ps.clone();
    let n = bp.n;
    let lam = Partition::of(&[2, 1]);
    let mus = enumerate_interval(&Partition::empty(), &lam);
    let target = rstar_fn(&lam, n, &bp.t0, &bp.u0, &ps, &mut rng)?;
    let fns: Vec<RTilde> = mus
        .iter()
        .map(|mu| rtilde_fn(mu, &bp, ctx, &mut rng))
        .collect::<Result<_>>()?;
    let mut rows = Vec::with_capacity(mus.len());
    let mut rhs = Vec::with_capacity(mus.len());
    for nu in &mus {
        let xs = bp.grid_point(nu);
        rows.push(fns.iter().map(|f| f.eval(&xs)).collect::<Result<Vec<_>>>()?);
        rhs.push(target.eval(&xs)?);
    }
    let (coeffs, _cond) = solve_with_condition(&rows, &rhs, ps.digits)?;
    let tn1 = ps.t.powi(n as i64 - 1);
    let pq = ps.p.mul(&ps.q);
    let arg = tn1.mul(&bp.t0).div(&bp.u0);
    let den = delta0(
        &lam,
        &arg,
        &[
            pq.div(&bp.u0.mul(&bp.t1)),
            pq.div(&bp.u0.mul(&bp.t2)),
            pq.div(&bp.u0.mul(&bp.t3)),
            pq.div(&bp.u0.mul(&bp.u1)),
        ],
        &ps,
    )?;
    let mut res = Residual::new();
    for (mu, got) in mus.iter().zip(&coeffs) {
        let want = binom(&lam, mu, &arg, &tn1.mul(&bp.t0).mul(&bp.u1), &ps, ctx)?.div(&den);
        res.push(got, &want, digits);
    }
    Ok(Outcome { residual: res.max, digest: ps.digest() })
}

/// Connection coefficients between two biorthogonal families: the general
/// double-binomial sum when four parameters move, and the single
/// normalized binomial when one parameter migrates into another.
fn check_biorth_connection(env: &CheckEnv) -> Result<Outcome> {
    let ctx = env.ctx;
    let digits = ctx.digits;
    let n = 2usize;
    let lam = Partition::of(&[2, 1]);
    let mut res = Residual::new();
    let digest;

    {
        let mut spec = SampleSpec::new(2, n)
            .names(&["t0", "t1", "t2", "t3", "u0", "u1", "s1", "s2", "s3", "w1"])
            .constraint(
                vec![
                    ("t", 2 * n as i64 - 2),
                    ("t0", 1),
                    ("t1", 1),
                    ("t2", 1),
                    ("t3", 1),
                    ("u0", 1),
                    ("u1", 1),
                    ("p", -1),
                    ("q", -1),
                ],
                "u1",
            )
            .constraint(
                vec![
                    ("s1", 1),
                    ("s2", 1),
                    ("s3", 1),
                    ("w1", 1),
                    ("t1", -1),
                    ("t2", -1),
                    ("t3", -1),
                    ("u1", -1),
                ],
                "w1",
            );
        for fam in [
            vec![("u0", 1), ("u1", 1)],
            vec![("t0", 1), ("u1", 1)],
            vec![("t0", 1), ("w1", 1)],
            vec![("u0", 1), ("w1", 1)],
            vec![("u0", 1), ("t0", -1)],
        ] {
            spec = spec.avoid_sweep(fam, (-6, 6), (-6, 6));
        }
        spec = add_interp_regularity(spec, 3, n, &vec![("t0", 1)], &vec![("u0", 1)]);
        let mut rng = ctx.rng("biorth-connection");
        let ps = sample_generic(ctx, &mut rng, &spec)?;
        digest = ps.digest();
        let bp = BiorthParams::new(
            n,
            ps.get("t0").clone(),
            ps.get("t1").clone(),
            ps.get("t2").clone(),
            ps.get("t3").clone(),
            ps.get("u0").clone(),
            ps.get("u1").clone(),
            &ps,
            ctx,
        )?;
        let bp2 = BiorthParams::new(
            n,
            ps.get("t0").clone(),
            ps.get("s1").clone(),
            ps.get("s2").clone(),
            ps.get("s3").clone(),
            ps.get("u0").clone(),
            ps.get("w1").clone(),
            &ps,
            ctx,
        )?;
        let (mus, coeffs) = expand_rtilde(&lam, &bp, &bp2, ctx, &mut rng)?;
        let tn1 = ps.t.powi(n as i64 - 1);
        let d_arg = tn1.mul(&bp.t0).div(&bp.u0);
        let uu = bp.u0.mul(&bp.u1);
        let old_vs = [
            tn1.mul(&bp.t0).mul(&bp.t1),
            tn1.mul(&bp.t0).mul(&bp.t2),
            tn1.mul(&bp.t0).mul(&bp.t3),
            tn1.mul(&bp.t0).mul(&bp.u1),
        ];
        let new_vs = [
            tn1.mul(&bp2.t0).mul(&bp2.t1),
            tn1.mul(&bp2.t0).mul(&bp2.t2),
            tn1.mul(&bp2.t0).mul(&bp2.t3),
            tn1.mul(&bp2.t0).mul(&bp2.u1),
        ];
        for (kap, got) in mus.iter().zip(&coeffs) {
            let mut want = MpComplex::zero(ps.prec);
            for mu in enumerate_interval(kap, &lam) {
                let ratio = delta0(&mu, &d_arg, &new_vs, &ps)?
                    .div(&delta0(&mu, &d_arg, &old_vs, &ps)?);
                let b1 = binom(
                    &lam,
                    &mu,
                    &uu.recip(),
                    &tn1.mul(&bp.t0).mul(&bp.u1).recip(),
                    &ps,
                    ctx,
                )?;
                let b2 = binom(&mu, kap, &d_arg, &tn1.mul(&bp.t0).mul(&bp2.u1), &ps, ctx)?;
                want = want.add(&ratio.mul(&b1).mul(&b2));
            }
            res.push(got, &want, digits);
        }
    }

    {
        let (bp, mut rng) = biorth_setup(ctx, "biorth-connection-v", n)?;
        let ps = bp.ps.clone();
        let v = draw_complex(&mut rng, ps.prec, 0.5, 2.0);
        let bp2 = BiorthParams::new(
            n,
            bp.t0.clone(),
            bp.t1.mul(&v),
            bp.t2.clone(),
            bp.t3.clone(),
            bp.u0.clone(),
            bp.u1.div(&v),
            &ps,
            ctx,
        )?;
        let (mus, coeffs) = expand_rtilde(&lam, &bp, &bp2, ctx, &mut rng)?;
        let tn1 = ps.t.powi(n as i64 - 1);
        let pq = ps.p.mul(&ps.q);
        let uu = bp.u0.mul(&bp.u1);
        for (kap, got) in mus.iter().zip(&coeffs) {
            let want = binom_normalized(
                &lam,
                kap,
                &uu.recip(),
                &v.recip(),
                &[
                    tn1.mul(&bp.t2).mul(&bp.t3),
                    pq.mul(&tn1).mul(&bp.t0).div(&bp.u0),
                    bp.t1.mul(&v).div(&bp.u1),
                ],
                &ps,
                ctx,
            )?;
            res.push(got, &want, digits);
        }
    }
    Ok(Outcome { residual: res.max, digest })
}

/// Discrete biorthogonality: the weighted grid sum pairs the family with
/// its u-swapped dual diagonally, with a closed norm.
fn check_biorth_discrete(env: &CheckEnv) -> Result<Outcome> {
    let ctx = env.ctx;
    let digits = ctx.digits;
    let (m, n) = (2u32, 2usize);
    let mut spec = SampleSpec::new(m, n)
        .names(&["t0", "t1", "t2", "t3", "u0", "u1"])
        .constraint(
            vec![("t0", 1), ("t1", 1), ("q", m as i64), ("t", n as i64 - 1)],
            "t1",
        )
        .constraint(
            vec![
                ("t", n as i64 - 1),
                ("t2", 1),
                ("t3", 1),
                ("u0", 1),
                ("u1", 1),
                ("p", -1),
                ("q", -(m as i64) - 1),
            ],
            "u1",
        );
    for fam in [
        vec![("u0", 1), ("u1", 1)],
        vec![("t0", 1), ("u1", 1)],
        vec![("t0", 1), ("u0", 1)],
        vec![("u0", 1), ("t0", -1)],
        vec![("u1", 1), ("t0", -1)],
        vec![("u0", 1), ("t2", 1)],
        vec![("u0", 1), ("t3", 1)],
        vec![("u0", 1), ("u1", -1)],
    ] {
        spec = spec.avoid_sweep(fam, (-8, 8), (-8, 8));
    }
    spec = add_interp_regularity(spec, m + 1, n, &vec![("t0", 1)], &vec![("u0", 1)]);
    spec = add_interp_regularity(spec, m + 1, n, &vec![("t0", 1)], &vec![("u1", 1)]);
    let mut rng = ctx.rng("biorth-discrete");
    let ps = sample_generic(ctx, &mut rng, &spec)?;
    let bp = BiorthParams::new(
        n,
        ps.get("t0").clone(),
        ps.get("t1").clone(),
        ps.get("t2").clone(),
        ps.get("t3").clone(),
        ps.get("u0").clone(),
        ps.get("u1").clone(),
        &ps,
        ctx,
    )?;
    let swapped = bp.swap_u(ctx)?;
    let tn1 = ps.t.powi(n as i64 - 1);
    let tn = ps.t.powi(n as i64);
    let pq = ps.p.mul(&ps.q);
    let rect = Partition::rectangle(m, n);
    let indices = enumerate_rectangle(m, n);
    let slots = [
        tn.clone(),
        tn1.mul(&bp.t0).mul(&bp.t1),
        tn1.mul(&bp.t0).mul(&bp.t2),
        tn1.mul(&bp.t0).mul(&bp.t3),
        tn1.mul(&bp.t0).mul(&bp.u0),
        tn1.mul(&bp.t0).mul(&bp.u1),
    ];
    let mut grid: Vec<(Vec<MpComplex>, MpComplex)> = Vec::new();
    for mu in &indices {
        let w = delta(
            mu,
            &ps.t.powi(2 * n as i64 - 2).mul(&bp.t0).mul(&bp.t0),
            &slots,
            &ps,
        )?;
        grid.push((bp.grid_point(mu), w));
    }
    let lefts: Vec<RTilde> = indices
        .iter()
        .map(|lam| rtilde_fn(lam, &bp, ctx, &mut rng))
        .collect::<Result<_>>()?;
    let rights: Vec<RTilde> = indices
        .iter()
        .map(|kap| rtilde_fn(kap, &swapped, ctx, &mut rng))
        .collect::<Result<_>>()?;
    let norm = delta0(
        &rect,
        &tn1.mul(&bp.t1).div(&bp.u0),
        &[
            bp.t1.div(&bp.t0),
            pq.div(&bp.u0.mul(&bp.t2)),
            pq.div(&bp.u0.mul(&bp.t3)),
            pq.div(&bp.u0.mul(&bp.u1)),
        ],
        &ps,
    )?;
    let mut res = Residual::new();
    for (li, lam) in indices.iter().enumerate() {
        for (ki, kap) in indices.iter().enumerate() {
            let mut sum = MpComplex::zero(ps.prec);
            let mut scale = rug::Float::new(ps.prec);
            for (xs, w) in &grid {
                let term = w.mul(&lefts[li].eval(xs)?).mul(&rights[ki].eval(xs)?);
                scale += term.abs();
                sum = sum.add(&term);
            }
            if lam == kap {
                let want = norm.div(&delta(
                    lam,
                    &bp.u0.mul(&bp.u1).recip(),
                    &[
                        tn.clone(),
                        tn1.mul(&bp.t0).mul(&bp.t1),
                        tn1.mul(&bp.t0).mul(&bp.t2),
                        tn1.mul(&bp.t0).mul(&bp.t3),
                        tn1.mul(&bp.t0).mul(&bp.u0).recip(),
                        tn1.mul(&bp.t0).mul(&bp.u1).recip(),
                    ],
                    &ps,
                )?);
                res.push(&sum, &want, digits);
            } else {
                res.push_abs((sum.abs() / scale).to_f64());
            }
        }
    }
    Ok(Outcome { residual: res.max, digest: ps.digest() })
}

/// Quasi-branching: restricting the last variable to the base parameter
/// expands the function in one fewer variable with normalized binomial
/// coefficients and shifted parameters.
fn check_biorth_quasi_branch(env: &CheckEnv) -> Result<Outcome> {
    let ctx = env.ctx;
    let digits = ctx.digits;
    let (bp_big, mut rng) = biorth_setup(ctx, "biorth-quasi-branch", 3)?;
    let ps = bp_big.ps.clone();
    let n = 2usize;
    let bp_small = BiorthParams::new(
        n,
        bp_big.t0.mul(&ps.t),
        bp_big.t1.clone(),
        bp_big.t2.clone(),
        bp_big.t3.clone(),
        bp_big.u0.clone(),
        bp_big.u1.mul(&ps.t),
        &ps,
        ctx,
    )?;
    let tn = ps.t.powi(n as i64);
    let pq = ps.p.mul(&ps.q);
    let uu = bp_big.u0.mul(&bp_big.u1);
    let slots = [
        pq.div(&ps.t.powi(n as i64 + 1).mul(&uu)),
        bp_big.t0.mul(&bp_big.u1).recip(),
        pq.mul(&tn).mul(&bp_big.t0).div(&bp_big.u0),
    ];
    let mut res = Residual::new();
    for lam in [Partition::of(&[2, 1]), Partition::of(&[1, 1])] {
        let big = rtilde_fn(&lam, &bp_big, ctx, &mut rng)?;
        let kaps: Vec<Partition> = enumerate_interval(&Partition::empty(), &lam)
            .into_iter()
            .filter(|kap| kap.length() <= n)
            .collect();
        let mut terms = Vec::with_capacity(kaps.len());
        for kap in &kaps {
            let coef = binom_normalized(&lam, kap, &uu.recip(), &ps.t, &slots, &ps, ctx)?;
            terms.push((coef, rtilde_fn(kap, &bp_small, ctx, &mut rng)?));
        }
        for _ in 0..2 {
            let xs = point(&mut rng, ps.prec, n);
            let mut big_xs = xs.clone();
            big_xs.push(bp_big.t0.clone());
            let lhs = big.eval(&big_xs)?;
            let mut rhs = MpComplex::zero(ps.prec);
            for (coef, f) in &terms {
                rhs = rhs.add(&coef.mul(&f.eval(&xs)?));
            }
            res.push(&lhs, &rhs, digits);
        }
    }
    Ok(Outcome { residual: res.max, digest: ps.digest() })
}

/// Quasi-Pieri rule: the theta-ladder multiplier relates the family at a
/// shifted parameter pair to a one-strip band of the original family.
fn check_biorth_quasi_pieri(env: &CheckEnv) -> Result<Outcome> {
    let ctx = env.ctx;
    let digits = ctx.digits;
    let (bp, mut rng) = biorth_setup(ctx, "biorth-quasi-pieri", 2)?;
    let ps = bp.ps.clone();
    let n = bp.n;
    let mshift = 1u32;
    let qm = ps.q.powi(mshift as i64);
    let shifted = BiorthParams::new(
        n,
        bp.t0.mul(&qm),
        bp.t1.clone(),
        bp.t2.clone(),
        bp.t3.clone(),
        bp.u0.div(&qm),
        bp.u1.clone(),
        &ps,
        ctx,
    )?;
    let tn1 = ps.t.powi(n as i64 - 1);
    let tn = ps.t.powi(n as i64);
    let pq = ps.p.mul(&ps.q);
    let pref = delta0(
        &Partition::rectangle(mshift, n),
        &tn1.mul(&bp.t0).div(&bp.u0),
        &[
            tn1.mul(&bp.t0).mul(&bp.t1),
            tn1.mul(&bp.t0).mul(&bp.t2),
            tn1.mul(&bp.t0).mul(&bp.t3),
            tn1.mul(&bp.t0).mul(&bp.u1),
        ],
        &ps,
    )?;
    let a_bin = bp.u0.mul(&bp.u1).recip();
    let x_shift = qm.mul(&a_bin);
    let z_slot = tn1.mul(&bp.t0).mul(&bp.u1).recip();
    let w_slot = qm.mul(&bp.t0).div(&bp.u0);
    let mut res = Residual::new();
    for lam in [Partition::of(&[1]), Partition::of(&[1, 1])] {
        let f_shift = rtilde_fn(&lam, &shifted, ctx, &mut rng)?;
        let lower_norm = delta_core(&lam, &x_shift, &ps)?
            .mul(&delta0(&lam, &x_shift, &[z_slot.div(&qm)], &ps)?)
            .div(&delta0(&lam, &x_shift, &[z_slot.clone()], &ps)?);
        let upper = lam.add_rectangle(mshift, n)?;
        let mut terms = Vec::new();
        for kap in enumerate_interval(&lam, &upper) {
            let coef = pref
                .mul(&binom_normalized(
                    &kap,
                    &lam,
                    &a_bin,
                    &qm.recip(),
                    &[tn.clone(), z_slot.clone(), w_slot.clone()],
                    &ps,
                    ctx,
                )?)
                .mul(&delta_core(&kap, &a_bin, &ps)?)
                .div(&lower_norm);
            terms.push((coef, rtilde_fn(&kap, &bp, ctx, &mut rng)?));
        }
        for _ in 0..2 {
            let xs = point(&mut rng, ps.prec, n);
            let mut mult = MpComplex::one(ps.prec);
            for x in &xs {
                mult = mult
                    .mul(&theta_pochhammer(&bp.t0.mul(x), &ps.q, &ps.p, mshift, digits)?)
                    .mul(&theta_pochhammer(&bp.t0.div(x), &ps.q, &ps.p, mshift, digits)?)
                    .div(&theta_pochhammer(&pq.div(&bp.u0).mul(x), &ps.q, &ps.p, mshift, digits)?)
                    .div(&theta_pochhammer(&pq.div(&bp.u0).div(x), &ps.q, &ps.p, mshift, digits)?);
            }
            let lhs = mult.mul(&f_shift.eval(&xs)?);
            let mut rhs = MpComplex::zero(ps.prec);
            for (coef, f) in &terms {
                rhs = rhs.add(&coef.mul(&f.eval(&xs)?));
            }
            res.push(&lhs, &rhs, digits);
        }
    }
    Ok(Outcome { residual: res.max, digest: ps.digest() })
}

/// Cauchy-type kernel identity pairing the family in n variables with the
/// base-swapped family in m variables.
fn check_biorth_cauchy(env: &CheckEnv) -> Result<Outcome> {
    let ctx = env.ctx;
    let digits = ctx.digits;
    let (bp, mut rng) = biorth_setup(ctx, "biorth-cauchy", 2)?;
    let ps = bp.ps.clone();
    let n = bp.n;
    let m = 1u32;
    let qm = ps.q.powi(m as i64);
    let tn = ps.t.powi(n as i64);
    let tn1 = ps.t.powi(n as i64 - 1);
    let pq = ps.p.mul(&ps.q);
    let ps_sw = ParameterSet::from_values(
        ps.digits,
        ps.p.clone(),
        ps.t.clone(),
        ps.q.clone(),
        vec![],
        ps.m,
        ps.n,
    )?;
    let bp_y = BiorthParams::new(
        m as usize,
        bp.t0.clone(),
        bp.t1.clone(),
        bp.t2.clone(),
        bp.t3.clone(),
        tn.mul(&bp.u0).div(&qm),
        tn1.mul(&bp.u1).div(&ps.q.powi(m as i64 - 1)),
        &ps_sw,
        ctx,
    )?;
    let mut terms = Vec::new();
    for mu in enumerate_rectangle(m, n) {
        let cmu = delta(
            &mu,
            &bp.u0.mul(&bp.u1).recip(),
            &[
                tn.clone(),
                qm.recip(),
                tn1.mul(&bp.t0).mul(&bp.u1).recip(),
                qm.mul(&bp.t0).div(&bp.u0),
            ],
            &ps,
        )?;
        let fx = rtilde_fn(&mu, &bp, ctx, &mut rng)?;
        let comp = mu.conjugate().complement(n as u32, m as usize)?;
        let fy = rtilde_fn(&comp, &bp_y, ctx, &mut rng)?;
        terms.push((cmu, fx, fy));
    }
    let pref = c_zero(
        &Partition::rectangle(m, n),
        &[pq.div(&bp.u0.mul(&bp.t0)), qm.mul(&bp.t0).div(&bp.u0)],
        &ps,
    )?
    .div(&delta0(
        &Partition::rectangle(m, n),
        &tn1.mul(&bp.t0).div(&bp.u0),
        &[
            tn1.mul(&bp.t0).mul(&bp.t1),
            tn1.mul(&bp.t0).mul(&bp.t2),
            tn1.mul(&bp.t0).mul(&bp.t3),
            tn1.mul(&bp.t0).mul(&bp.u1),
        ],
        &ps,
    )?);
    let u0q = bp.u0.div(&qm);
    let mut res = Residual::new();
    let trials = if env.nightly { 3 } else { 2 };
    for _ in 0..trials {
        let xs = point(&mut rng, ps.prec, n);
        let ys = point(&mut rng, ps.prec, m as usize);
        let mut kernel = MpComplex::one(ps.prec);
        for x in &xs {
            for y in &ys {
                kernel = kernel
                    .mul(&theta(&y.mul(x), &ps.p, digits)?)
                    .mul(&theta(&y.div(x), &ps.p, digits)?);
            }
        }
        for x in &xs {
            kernel = kernel
                .div(&theta_pochhammer(&u0q.mul(x), &ps.q, &ps.p, m, digits)?)
                .div(&theta_pochhammer(&u0q.div(x), &ps.q, &ps.p, m, digits)?);
        }
        for y in &ys {
            kernel = kernel
                .div(&theta_pochhammer(
                    &ps.p.mul(&qm).div(&bp.u0.mul(y)),
                    &ps.t.recip(),
                    &ps.p,
                    n as u32,
                    digits,
                )?)
                .div(&theta_pochhammer(
                    &qm.mul(y).div(&bp.u0),
                    &ps.t.recip(),
                    &ps.p,
                    n as u32,
                    digits,
                )?);
        }
        let mut lhs = MpComplex::zero(ps.prec);
        for (cmu, fx, fy) in &terms {
            lhs = lhs.add(&cmu.mul(&fx.eval(&xs)?).mul(&fy.eval(&ys)?));
        }
        res.push(&lhs, &pref.mul(&kernel), digits);
    }
    Ok(Outcome { residual: res.max, digest: ps.digest() })
}

// ---------------------------------------------------------------------------
// Degenerations and the exact engine
// ---------------------------------------------------------------------------

/// Continuity at vanishing nome: symbols evaluated at a tiny nome agree
/// with the closed product limit at nome zero to first order.
fn check_p0_consistency(env: &CheckEnv) -> Result<Outcome> {
    let ctx = env.ctx;
    let digits = ctx.digits;
    let prec = ctx.prec();
    let mut rng = ctx.rng("p0-consistency");
    let q = draw_complex(&mut rng, prec, 0.2, 0.6);
    let t = draw_complex(&mut rng, prec, 0.2, 0.6);
    let a = draw_complex(&mut rng, prec, 0.5, 2.0);
    let b = draw_complex(&mut rng, prec, 0.5, 2.0);
    let x = draw_complex(&mut rng, prec, 0.5, 2.0);
    let mk = |p: MpComplex| -> Result<ParameterSet> {
        ParameterSet::from_values(
            digits,
            p,
            q.clone(),
            t.clone(),
            vec![("a".into(), a.clone()), ("b".into(), b.clone()), ("x".into(), x.clone())],
            0,
            1,
        )
    };
    let tiny = mk(MpComplex::from_f64(prec, 1e-8, 0.0))?;
    let zero = mk(MpComplex::zero(prec))?;
    let digest = tiny.digest();
    let xs = [x.clone()];
    let bs = [b.clone()];
    let mut lams = vec![Partition::of(&[1]), Partition::of(&[2, 1]), Partition::of(&[2, 2, 1])];
    if env.nightly {
        lams.push(Partition::of(&[3, 2, 1]));
    }
    let mut res = Residual::new();
    for lam in &lams {
        for kind in [CKind::Zero, CKind::Minus, CKind::Plus] {
            res.push(
                &c_symbol(kind, lam, &xs, &tiny)?,
                &c_symbol(kind, lam, &xs, &zero)?,
                digits,
            );
        }
        res.push(&delta(lam, &a, &bs, &tiny)?, &delta(lam, &a, &bs, &zero)?, digits);
    }
    Ok(Outcome { residual: res.max, digest })
}

/// Run the exact-engine perfection test for one grid family.
fn run_bigrid(env: &CheckEnv, kind: BigridKind) -> Result<Outcome> {
    let (m, n) = if env.nightly { (3u32, 3usize) } else { (2, 2) };
    let field = PrimeField::default_field();
    let mut rng = env.ctx.rng(&format!("bigrid-{}", kind.name()));
    let grid = make_bigrid(field, kind, m, n, &mut rng)?;
    let report = perfection_check(field, &grid, DEFAULT_TRIALS, &mut rng);
    let digest = fnv_hex(&format!(
        "bigrid kind={} m={m} n={n} prime={} trials={DEFAULT_TRIALS}",
        kind.name(),
        field.modulus(),
    ));
    Ok(Outcome { residual: if report.pass { 0.0 } else { 1.0 }, digest })
}

fn check_bigrid_monomial(env: &CheckEnv) -> Result<Outcome> {
    run_bigrid(env, BigridKind::Monomial)
}

fn check_bigrid_schur(env: &CheckEnv) -> Result<Outcome> {
    run_bigrid(env, BigridKind::Schur)
}

fn check_bigrid_cauchy(env: &CheckEnv) -> Result<Outcome> {
    run_bigrid(env, BigridKind::Cauchy)
}

fn check_bigrid_delta(env: &CheckEnv) -> Result<Outcome> {
    run_bigrid(env, BigridKind::Delta)
}

fn check_bigrid_elliptic(env: &CheckEnv) -> Result<Outcome> {
    run_bigrid(env, BigridKind::EllipticI1)
}
