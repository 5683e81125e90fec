//! Command-line surface for the library: JSON-driven evaluation of the
//! special functions, the registered identity-check suite, and exact
//! bigrid certification.
//!
//! Exit codes: 0 = success / all checks passed; 1 = a check or
//! certification failed; 2 = usage, input, or genericity error.
//!
//! `eval` subcommands read a single JSON object from stdin and write a
//! single JSON object to stdout.  Complex numbers are objects
//! `{"re": "...", "im": "..."}` whose components are full-precision decimal
//! strings (plain JSON numbers are also accepted on input); partitions are
//! arrays of weakly decreasing positive integers, e.g. `[2,1]`.

use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};

use bcn_elliptic::bigrid::{
    make_bigrid, perfection_check, BigridKind, PrimeField, DEFAULT_TRIALS,
};
use bcn_elliptic::binomial::{binom, binom_normalized};
use bcn_elliptic::biorthogonal::{rtilde_eval, BiorthParams};
use bcn_elliptic::error::{Error, Result};
use bcn_elliptic::harness::{run_check, run_suite};
use bcn_elliptic::interpolation::{interp_theta, rstar_fn};
use bcn_elliptic::mp::MpComplex;
use bcn_elliptic::numerics::{
    draw_complex, theta, theta_pochhammer, NumericContext, ParameterSet,
};
use bcn_elliptic::partition::Partition;
use bcn_elliptic::symbols::{c_symbol, delta, delta0, CKind};

#[derive(Parser)]
#[command(
    name = "bcne",
    version,
    about = "Elliptic special functions, identity checks, and exact bigrids"
)]
struct Cli {
    /// JSON file presetting context fields; any of
    /// {"digits":, "tol":, "seed":, "genericity_margin":}. Flags override.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate one function from a JSON request on stdin.
    Eval {
        #[command(subcommand)]
        what: EvalCmd,
    },
    /// Run one registered identity check and print its JSON report.
    Check {
        /// Registered check id, e.g. "theta-functional".
        id: String,
        /// Master RNG seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Working precision in decimal digits.
        #[arg(long)]
        digits: Option<u32>,
        /// Override the registered pass tolerance (verdict only).
        #[arg(long)]
        tol: Option<f64>,
        /// Run the larger nightly workload for this check.
        #[arg(long)]
        nightly: bool,
    },
    /// Run every check whose id matches a glob filter.
    Suite {
        /// Glob over check ids ('*' and '?'); empty means everything.
        #[arg(long, default_value = "*")]
        filter: String,
        /// Worker threads (default: one per CPU).
        #[arg(long)]
        jobs: Option<usize>,
        /// Write the JSON report array to this path ('-' for stdout).
        #[arg(long, value_name = "PATH")]
        json: Option<String>,
        /// Master RNG seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Working precision in decimal digits.
        #[arg(long)]
        digits: Option<u32>,
        /// Run the larger nightly workloads.
        #[arg(long)]
        nightly: bool,
    },
    /// Exact prime-field bigrid commands.
    Bigrid {
        #[command(subcommand)]
        cmd: BigridCmd,
    },
}

#[derive(Subcommand)]
enum EvalCmd {
    /// theta(x; p), or the ladder theta(x; q; p)_m when "q" and "m" are given.
    /// Request: {"x": C, "p": C, "q"?: C, "m"?: int, "digits"?: int}.
    Theta,
    /// Elliptic C symbol. Request: {"kind": "zero"|"minus"|"plus",
    /// "lambda": [..], "x": [C..], "p": C, "q": C, "t": C, "digits"?}.
    Csym,
    /// Delta symbol. Request: {"lambda": [..], "a": C, "b": [C..],
    /// "kind"?: "full"|"zero", "p": C, "q": C, "t": C, "digits"?}.
    Delta,
    /// Interpolation theta function at a point. Request: {"lambda": [..],
    /// "m": int, "n": int, "a": C, "b": C, "v"?: C, "x": [C; n],
    /// "p": C, "q": C, "t": C, "digits"?, "seed"?}.
    Interp,
    /// Abelian interpolation function at a point. Request: {"lambda": [..],
    /// "n": int, "a": C, "b": C, "x": [C; n], "p": C, "q": C, "t": C,
    /// "digits"?, "seed"?}.
    Rstar,
    /// Elliptic binomial coefficient. Request: {"lambda": [..], "mu": [..],
    /// "a": C, "b": C, "normalization"?: "round"|"angle", "v"?: [C..],
    /// "p": C, "q": C, "t": C, "digits"?}.
    Binom,
    /// Biorthogonal function at a point. Request: {"lambda": [..], "n": int,
    /// "params": {"p": C, "q": C, "t": C, "t0": C, "t1": C, "t2": C,
    /// "t3": C, "u0": C, "u1": C}, "x": [C; n], "digits"?, "seed"?}.
    Biorth,
}

#[derive(Subcommand)]
enum BigridCmd {
    /// Build a bigrid of the given family and run the perfection check.
    Check {
        /// Shape as M,N (width of each row grid, number of rows).
        #[arg(long, value_name = "M,N")]
        shape: String,
        /// Family: monomial, schur, cauchy, delta, elliptic_i1, random,
        /// conj_shift, or conj_involution.
        #[arg(long)]
        kind: BigridKind,
        /// Field modulus (default: the built-in 61-bit prime).
        #[arg(long)]
        prime: Option<u64>,
        /// Random balanced-extension trials per index.
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
        /// Master RNG seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(serde::Deserialize, Default)]
struct ConfigFile {
    digits: Option<u32>,
    tol: Option<f64>,
    seed: Option<u64>,
    genericity_margin: Option<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let ctx = context_from(&cli.config)?;
    match cli.cmd {
        Cmd::Eval { what } => {
            let req: Value = {
                let mut buf = String::new();
                std::io::stdin().read_to_string(&mut buf)?;
                serde_json::from_str(&buf)?
            };
            let out = eval(&what, &req, &ctx)?;
            println!("{}", serde_json::to_string(&out)?);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Check { id, seed, digits, tol, nightly } => {
            let ctx = override_ctx(ctx, digits, seed);
            let report = run_check(&id, &ctx, nightly, tol)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(if report.pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Cmd::Suite { filter, jobs, json, seed, digits, nightly } => {
            let ctx = override_ctx(ctx, digits, seed);
            let reports = run_suite(&filter, &ctx, nightly, jobs)?;
            for r in &reports {
                println!(
                    "{:<22} {}  residual={:.3e}  tol={:.1e}  ({} ms)",
                    r.check_id,
                    if r.pass { "PASS" } else { "FAIL" },
                    r.max_rel_residual,
                    r.tol,
                    r.runtime_ms,
                );
            }
            let failed = reports.iter().filter(|r| !r.pass).count();
            println!("{} checks: {} passed, {} failed", reports.len(), reports.len() - failed, failed);
            if let Some(path) = json {
                let body = serde_json::to_string_pretty(&reports)? + "\n";
                if path == "-" {
                    print!("{body}");
                } else {
                    fs::write(&path, body)?;
                }
            }
            Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Cmd::Bigrid { cmd: BigridCmd::Check { shape, kind, prime, trials, seed } } => {
            let (m, n) = parse_shape(&shape)?;
            let field = match prime {
                Some(p) => PrimeField::new(p)?,
                None => PrimeField::default_field(),
            };
            let rng_ctx = NumericContext { seed, ..NumericContext::default() };
            let mut rng = rng_ctx.rng(&format!("bigrid-cli-{}", kind.name()));
            let grid = make_bigrid(field, kind, m, n, &mut rng)?;
            let report = perfection_check(field, &grid, trials.max(1), &mut rng);
            let mut out = Map::new();
            out.insert("pass".into(), Value::Bool(report.pass));
            if let Some(lam) = &report.failing_lambda {
                out.insert("failing_lambda".into(), partition_json(lam));
            }
            out.insert("regularity_ok".into(), Value::Bool(report.regularity_ok));
            println!("{}", serde_json::to_string(&Value::Object(out))?);
            Ok(if report.pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn context_from(config: &Option<PathBuf>) -> Result<NumericContext> {
    let mut ctx = NumericContext::default();
    if let Some(path) = config {
        let text = fs::read_to_string(path)?;
        let file: ConfigFile = serde_json::from_str(&text)?;
        if let Some(d) = file.digits {
            ctx.digits = d;
        }
        if let Some(t) = file.tol {
            ctx.tol = t;
        }
        if let Some(s) = file.seed {
            ctx.seed = s;
        }
        if let Some(g) = file.genericity_margin {
            ctx.genericity_margin = g;
        }
    }
    Ok(ctx)
}

fn override_ctx(mut ctx: NumericContext, digits: Option<u32>, seed: Option<u64>) -> NumericContext {
    if let Some(d) = digits {
        ctx.digits = d;
    }
    if let Some(s) = seed {
        ctx.seed = s;
    }
    ctx
}

fn parse_shape(s: &str) -> Result<(u32, usize)> {
    let (m, n) = s
        .split_once(',')
        .ok_or_else(|| Error::BadParameter(format!("shape '{s}' is not of the form M,N")))?;
    let m: u32 = m
        .trim()
        .parse()
        .map_err(|_| Error::BadParameter(format!("bad shape width '{m}'")))?;
    let n: usize = n
        .trim()
        .parse()
        .map_err(|_| Error::BadParameter(format!("bad shape depth '{n}'")))?;
    Ok((m, n))
}

// --- JSON request plumbing -------------------------------------------------

fn usage(msg: impl Into<String>) -> Error {
    Error::BadParameter(msg.into())
}

fn need<'a>(req: &'a Value, key: &str) -> Result<&'a Value> {
    req.get(key).ok_or_else(|| usage(format!("missing request field '{key}'")))
}

fn complex_value(v: &Value, prec: u32, what: &str) -> Result<MpComplex> {
    let comp = |key: &str| -> Result<String> {
        match v.get(key) {
            None => Ok("0".into()),
            Some(Value::String(s)) => Ok(s.clone()),
            Some(Value::Number(x)) => Ok(x.to_string()),
            Some(_) => Err(usage(format!("{what}.{key} must be a string or number"))),
        }
    };
    if !v.is_object() {
        return Err(usage(format!("{what} must be an object {{\"re\":, \"im\":}}")));
    }
    MpComplex::parse(prec, &comp("re")?, &comp("im")?)
        .ok_or_else(|| usage(format!("{what} has an unparseable component")))
}

fn complex_at(req: &Value, key: &str, prec: u32) -> Result<MpComplex> {
    complex_value(need(req, key)?, prec, key)
}

fn complex_list(req: &Value, key: &str, prec: u32) -> Result<Vec<MpComplex>> {
    let arr = need(req, key)?
        .as_array()
        .ok_or_else(|| usage(format!("'{key}' must be an array of complex values")))?;
    arr.iter()
        .enumerate()
        .map(|(i, v)| complex_value(v, prec, &format!("{key}[{i}]")))
        .collect()
}

fn partition_at(req: &Value, key: &str) -> Result<Partition> {
    let arr = need(req, key)?
        .as_array()
        .ok_or_else(|| usage(format!("'{key}' must be an array of integers")))?;
    let mut parts = Vec::with_capacity(arr.len());
    for v in arr {
        let x = v
            .as_u64()
            .ok_or_else(|| usage(format!("'{key}' entries must be non-negative integers")))?;
        parts.push(u32::try_from(x).map_err(|_| usage(format!("'{key}' entry too large")))?);
    }
    Ok(Partition::new(parts).map_err(Error::from)?)
}

fn int_at<T: TryFrom<u64>>(req: &Value, key: &str) -> Result<T> {
    let x = need(req, key)?
        .as_u64()
        .ok_or_else(|| usage(format!("'{key}' must be a non-negative integer")))?;
    T::try_from(x).map_err(|_| usage(format!("'{key}' out of range")))
}

fn str_at<'a>(req: &'a Value, key: &str) -> Result<&'a str> {
    need(req, key)?
        .as_str()
        .ok_or_else(|| usage(format!("'{key}' must be a string")))
}

fn complex_json(z: &MpComplex) -> Value {
    let (re, im) = z.to_decimal_strings();
    json!({ "re": re, "im": im })
}

fn partition_json(lam: &Partition) -> Value {
    Value::from(lam.parts().to_vec())
}

/// Working context for one eval request: honors a per-request "digits"
/// override but otherwise inherits the CLI/config context.
fn request_ctx(req: &Value, ctx: &NumericContext) -> NumericContext {
    let mut out = ctx.clone();
    if let Some(d) = req.get("digits").and_then(Value::as_u64) {
        out.digits = d as u32;
    }
    if let Some(s) = req.get("seed").and_then(Value::as_u64) {
        out.seed = s;
    }
    out
}

/// Builds the base parameter set from request fields p, q, t (looked up in a
/// "params" sub-object when present, else at the top level).
fn params_from(req: &Value, digits: u32, prec: u32, m: u32, n: usize) -> Result<ParameterSet> {
    let src = req.get("params").unwrap_or(req);
    ParameterSet::from_values(
        digits,
        complex_at(src, "p", prec)?,
        complex_at(src, "q", prec)?,
        complex_at(src, "t", prec)?,
        vec![],
        m,
        n,
    )
}

fn eval(what: &EvalCmd, req: &Value, ctx: &NumericContext) -> Result<Value> {
    let ctx = request_ctx(req, ctx);
    let digits = ctx.digits;
    let prec = ctx.prec();
    match what {
        EvalCmd::Theta => {
            let x = complex_at(req, "x", prec)?;
            let p = complex_at(req, "p", prec)?;
            let value = if req.get("q").is_some() || req.get("m").is_some() {
                let q = complex_at(req, "q", prec)?;
                let m: u32 = int_at(req, "m")?;
                theta_pochhammer(&x, &q, &p, m, digits)?
            } else {
                theta(&x, &p, digits)?
            };
            Ok(json!({ "value": complex_json(&value) }))
        }
        EvalCmd::Csym => {
            let kind = match str_at(req, "kind")? {
                "zero" => CKind::Zero,
                "minus" => CKind::Minus,
                "plus" => CKind::Plus,
                other => return Err(usage(format!("unknown C-symbol kind '{other}'"))),
            };
            let lam = partition_at(req, "lambda")?;
            let ps = params_from(req, digits, prec, 0, 1)?;
            let xs = complex_list(req, "x", prec)?;
            let value = c_symbol(kind, &lam, &xs, &ps)?;
            Ok(json!({ "lambda": partition_json(&lam), "value": complex_json(&value) }))
        }
        EvalCmd::Delta => {
            let lam = partition_at(req, "lambda")?;
            let ps = params_from(req, digits, prec, 0, 1)?;
            let a = complex_at(req, "a", prec)?;
            let bs = complex_list(req, "b", prec)?;
            let value = match req.get("kind").and_then(Value::as_str).unwrap_or("full") {
                "full" => delta(&lam, &a, &bs, &ps)?,
                "zero" => delta0(&lam, &a, &bs, &ps)?,
                other => return Err(usage(format!("unknown delta kind '{other}'"))),
            };
            Ok(json!({ "lambda": partition_json(&lam), "value": complex_json(&value) }))
        }
        EvalCmd::Interp => {
            let lam = partition_at(req, "lambda")?;
            let m: u32 = int_at(req, "m")?;
            let n: usize = int_at(req, "n")?;
            let ps = params_from(req, digits, prec, m, n)?;
            let a = complex_at(req, "a", prec)?;
            let b = complex_at(req, "b", prec)?;
            let xs = complex_list(req, "x", prec)?;
            if xs.len() != n {
                return Err(usage(format!("'x' must have exactly n = {n} entries")));
            }
            let mut rng = ctx.rng("cli-interp");
            let v = match req.get("v") {
                Some(v) => complex_value(v, prec, "v")?,
                None => draw_complex(&mut rng, prec, 0.5, 2.0),
            };
            let f = interp_theta(&lam, m, n, &a, &b, &v, &ps, &mut rng)?;
            let value = f.eval(&xs)?;
            Ok(json!({
                "lambda": partition_json(&lam),
                "m": m,
                "n": n,
                "value": complex_json(&value),
            }))
        }
        EvalCmd::Rstar => {
            let lam = partition_at(req, "lambda")?;
            let n: usize = int_at(req, "n")?;
            let ps = params_from(req, digits, prec, lam.part(1), n)?;
            let a = complex_at(req, "a", prec)?;
            let b = complex_at(req, "b", prec)?;
            let xs = complex_list(req, "x", prec)?;
            if xs.len() != n {
                return Err(usage(format!("'x' must have exactly n = {n} entries")));
            }
            let mut rng = ctx.rng("cli-rstar");
            let f = rstar_fn(&lam, n, &a, &b, &ps, &mut rng)?;
            let value = f.eval(&xs)?;
            Ok(json!({
                "lambda": partition_json(&lam),
                "m": lam.part(1),
                "n": n,
                "value": complex_json(&value),
            }))
        }
        EvalCmd::Binom => {
            let lam = partition_at(req, "lambda")?;
            let mu = partition_at(req, "mu")?;
            let ps = params_from(req, digits, prec, 0, 1)?;
            let a = complex_at(req, "a", prec)?;
            let b = complex_at(req, "b", prec)?;
            let norm = req
                .get("normalization")
                .and_then(Value::as_str)
                .unwrap_or("round");
            let value = match norm {
                "round" => binom(&lam, &mu, &a, &b, &ps, &ctx)?,
                "angle" => {
                    let vs = if req.get("v").is_some() {
                        complex_list(req, "v", prec)?
                    } else {
                        vec![]
                    };
                    binom_normalized(&lam, &mu, &a, &b, &vs, &ps, &ctx)?
                }
                other => return Err(usage(format!("unknown normalization '{other}'"))),
            };
            Ok(json!({
                "lambda": partition_json(&lam),
                "mu": partition_json(&mu),
                "value": complex_json(&value),
                "normalization": norm,
            }))
        }
        EvalCmd::Biorth => {
            let lam = partition_at(req, "lambda")?;
            let n: usize = int_at(req, "n")?;
            let src = req.get("params").unwrap_or(req);
            let ps = params_from(req, digits, prec, 2, n)?;
            let t0 = complex_at(src, "t0", prec)?;
            let t1 = complex_at(src, "t1", prec)?;
            let t2 = complex_at(src, "t2", prec)?;
            let t3 = complex_at(src, "t3", prec)?;
            let u0 = complex_at(src, "u0", prec)?;
            let u1 = complex_at(src, "u1", prec)?;
            let bp = BiorthParams::new(n, t0, t1, t2, t3, u0, u1, &ps, &ctx)?;
            let xs = complex_list(req, "x", prec)?;
            if xs.len() != n {
                return Err(usage(format!("'x' must have exactly n = {n} entries")));
            }
            let mut rng = ctx.rng("cli-biorth");
            let value = rtilde_eval(&lam, &bp, &xs, &ctx, &mut rng)?;
            Ok(json!({
                "lambda": partition_json(&lam),
                "params": {
                    "p": complex_json(&ps.p),
                    "q": complex_json(&ps.q),
                    "t": complex_json(&ps.t),
                    "t0": complex_json(&bp.t0),
                    "t1": complex_json(&bp.t1),
                    "t2": complex_json(&bp.t2),
                    "t3": complex_json(&bp.t3),
                    "u0": complex_json(&bp.u0),
                    "u1": complex_json(&bp.u1),
                },
                "x": Value::Array(xs.iter().map(complex_json).collect()),
                "value": complex_json(&value),
            }))
        }
    }
}
