//! `kasep` command-line front end.
//!
//! Every subcommand writes one JSON document (to `--output` or standard output)
//! and a short human summary. Exit status: 0 when every check passed, 1 when a
//! check failed or a computation errored, 2 for bad flags or inputs.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use kasep_core::asep::{check_integrability, check_scattering};
use kasep_core::hecke::HeckeContext;
use kasep_core::koornwinder::verify_e;
use kasep_core::limits::F0Characterization;
use kasep_core::sampling::rng;
use kasep_core::{
    check_e_mu, check_f0_characterization, evaluate_fock, lambda0, nonsymmetric_e, run_all, symmetric_p, Backend,
    BigFloat, Composition, Error, LimitConfig, ParameterPoint, Params, Rational, Report, Verdict, VerifyConfig,
};

pub const PRECISION_ENV: &str = "KASEP_PRECISION";

#[derive(Parser, Debug)]
#[command(name = "kasep", version, about = "Koornwinder polynomials and open-ASEP current statistics")]
pub struct Cli {
    /// Parameter file (`key=value` lines). Defaults to a built-in point.
    #[arg(long, global = true)]
    pub params: Option<PathBuf>,
    /// Working precision in bits for floating-point computations.
    #[arg(long, global = true, env = PRECISION_ENV, default_value_t = 256)]
    pub precision: usize,
    /// Seed for randomised identity checks.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Write the JSON report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Koornwinder polynomials (exact).
    #[command(subcommand)]
    Koorn(Koorn),
    /// Matrix-product states.
    #[command(subcommand)]
    Mpa(Mpa),
    /// Open ASEP generator and its spectrum.
    #[command(subcommand)]
    Asep(Asep),
    /// Scaled limits of symmetric Koornwinder polynomials.
    #[command(subcommand)]
    Limit(Limit),
    /// Acceptance criteria.
    #[command(subcommand)]
    Verify(Verify),
}

#[derive(Args, Debug, Clone)]
pub struct Shape {
    #[arg(long)]
    pub m: usize,
    #[arg(long = "N")]
    pub n: usize,
}

#[derive(Subcommand, Debug)]
pub enum Koorn {
    /// `E_lambda`, by default `lambda = (-m, ..., -m)`.
    Nonsym {
        #[command(flatten)]
        shape: Shape,
        /// Explicit composition, comma separated: a signed permutation of `(m^N)`.
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
    },
    /// `P_(m^N)` and its `D` eigenvalue.
    Sym {
        #[command(flatten)]
        shape: Shape,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Left,
    Right,
}

#[derive(Subcommand, Debug)]
pub enum Mpa {
    /// Evaluate `Psi^(m)` (right) or `Phi^(m)` (left) at one point in the truncated Fock representation.
    Eval {
        #[command(flatten)]
        shape: Shape,
        /// Comma-separated rationals, one per site.
        #[arg(long)]
        x: String,
        #[arg(long = "K", default_value_t = 64)]
        k: usize,
        #[arg(long, value_enum, default_value_t = SideArg::Right)]
        side: SideArg,
    },
}

#[derive(Subcommand, Debug)]
pub enum Asep {
    /// Integrability relations, local generators and scattering matrices (exact).
    Check {
        #[arg(long = "N", default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 5)]
        trials: usize,
    },
    /// Largest eigenvalue of `M(xi)`.
    Lambda0 {
        #[arg(long = "N")]
        n: usize,
        #[arg(long)]
        xi: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Algebraic,
    Fock,
}

#[derive(Args, Debug, Clone)]
pub struct LimitArgs {
    /// Increasing list of `m` values for the extrapolation.
    #[arg(long = "m-list", default_value = "8,16,32,64")]
    pub m_list: String,
    #[arg(long = "K", default_value_t = 64)]
    pub k: usize,
    /// Moment backend; `--K` applies to `fock` only.
    #[arg(long, value_enum, default_value_t = BackendArg::Algebraic)]
    pub backend: BackendArg,
    /// Finite-difference step for x-derivatives.
    #[arg(long, default_value = "1/1024")]
    pub h: String,
}

#[derive(Subcommand, Debug)]
pub enum Limit {
    /// `E(mu)` from the scaled limit against `Lambda_0(e^mu)`.
    EMu {
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
        #[arg(long = "N")]
        n: usize,
        #[command(flatten)]
        limit: LimitArgs,
        /// Report a yellow verdict when the error bar exceeds this fraction of `|Lambda_0|`.
        #[arg(long = "rel-width")]
        rel_width: Option<f64>,
    },
    /// The first-order characterisation of `F_0` at a generic point.
    F0Char {
        #[arg(long = "N")]
        n: usize,
        #[arg(long)]
        xi: String,
        #[arg(long)]
        x: String,
        #[command(flatten)]
        limit: LimitArgs,
    },
}

#[derive(Subcommand, Debug)]
pub enum Verify {
    /// Acceptance criteria 1-9.
    All {
        /// Restrict to these criteria, comma separated.
        #[arg(long)]
        only: Option<String>,
        #[arg(long = "K", default_value_t = 64)]
        k: usize,
    },
}

/// Failure of a subcommand, split by exit status.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Compute(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Argument(_) | Error::Parse(_) | Error::Precondition(_) => Failure::Usage(e.to_string()),
            _ => Failure::Compute(e.to_string()),
        }
    }
}

/// What a subcommand produced: the JSON document, summary lines and whether all checks passed.
struct Outcome {
    json: Value,
    summary: Vec<String>,
    ok: bool,
}

/// Parse `argv` (including the program name), execute, and return the exit status.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    if cli.precision < 64 {
        let _ = writeln!(err, "error: precision must be at least 64 bits");
        return 2;
    }
    let outcome = match execute(&cli) {
        Ok(o) => o,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            return 2;
        }
        Err(Failure::Compute(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            return 1;
        }
    };
    let text = serde_json::to_string_pretty(&outcome.json).expect("reports serialise") + "\n";
    match &cli.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
                return 2;
            }
            for line in &outcome.summary {
                let _ = writeln!(out, "{line}");
            }
        }
        None => {
            let _ = out.write_all(text.as_bytes());
            for line in &outcome.summary {
                let _ = writeln!(err, "{line}");
            }
        }
    }
    if outcome.ok {
        0
    } else {
        1
    }
}

fn execute(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Koorn(k) => koorn(cli, k),
        Command::Mpa(Mpa::Eval { shape, x, k, side }) => mpa_eval(cli, shape, x, *k, *side),
        Command::Asep(Asep::Check { n, trials }) => asep_check(cli, *n, *trials),
        Command::Asep(Asep::Lambda0 { n, xi }) => asep_lambda0(cli, *n, xi),
        Command::Limit(Limit::EMu { mu, n, limit, rel_width }) => limit_e_mu(cli, mu, *n, limit, *rel_width),
        Command::Limit(Limit::F0Char { n, xi, x, limit }) => limit_f0(cli, *n, xi, x, limit),
        Command::Verify(Verify::All { only, k }) => verify_all(cli, only.as_deref(), *k),
    }
}

/// Point from `--params`, or `fallback` when none is given.
fn point(cli: &Cli, fallback: fn() -> ParameterPoint) -> Result<ParameterPoint, Failure> {
    match &cli.params {
        Some(p) => load(p),
        None => Ok(fallback()),
    }
}

fn load(path: &Path) -> Result<ParameterPoint, Failure> {
    ParameterPoint::from_file(path).map_err(|e| Failure::Usage(e.to_string()))
}

fn rational(name: &str, s: &str) -> Result<Rational, Failure> {
    s.parse().map_err(|e: Error| Failure::Usage(format!("--{name}: {e}")))
}

fn rational_list(name: &str, s: &str) -> Result<Vec<Rational>, Failure> {
    s.split(',').map(|v| rational(name, v)).collect()
}

fn usize_list(name: &str, s: &str) -> Result<Vec<usize>, Failure> {
    s.split(',')
        .map(|v| v.trim().parse().map_err(|_| Failure::Usage(format!("--{name}: not a nonnegative integer: {v:?}"))))
        .collect()
}

fn sites(n: usize) -> Result<(), Failure> {
    if n == 0 {
        return Err(Failure::Usage("--N must be at least 1".into()));
    }
    Ok(())
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialise")
}

fn bf(cli: &Cli, r: &Rational) -> BigFloat {
    BigFloat::from_rational(r, cli.precision)
}

fn koorn(cli: &Cli, cmd: &Koorn) -> Result<Outcome, Failure> {
    let pt = point(cli, ParameterPoint::default_point)?;
    match cmd {
        Koorn::Nonsym { shape, lambda } => {
            sites(shape.n)?;
            let lambda = match lambda {
                Some(s) => {
                    let parts: Vec<i32> = s
                        .split(',')
                        .map(|v| v.trim().parse().map_err(|_| Failure::Usage(format!("--lambda: bad entry {v:?}"))))
                        .collect::<Result<_, _>>()?;
                    if parts.len() != shape.n {
                        return Err(Failure::Usage(format!("--lambda has {} entries, expected {}", parts.len(), shape.n)));
                    }
                    Composition::from(parts)
                }
                None => Composition::constant(-(shape.m as i32), shape.n),
            };
            let h = HeckeContext::exact(&pt, shape.n)?;
            let e = nonsymmetric_e(&h, &lambda)?;
            let ok = verify_e(&h, &lambda, &e.poly).is_ok();
            let mut json = e.to_json();
            json["verified"] = json!(ok);
            Ok(Outcome {
                summary: vec![format!("E_{lambda}: {} terms, eigen-equations {}", e.poly.terms().count(), pass(ok))],
                json,
                ok,
            })
        }
        Koorn::Sym { shape } => {
            sites(shape.n)?;
            let p = symmetric_p(&Params::<Rational>::from_point(&pt, &()), shape.n, shape.m)?;
            let ok = p.residual == 0.0;
            Ok(Outcome {
                summary: vec![format!("P_{}: {} terms, D-residual {}", p.lambda, p.poly.terms().count(), p.residual)],
                json: p.to_json(),
                ok,
            })
        }
    }
}

fn mpa_eval(cli: &Cli, shape: &Shape, x: &str, k: usize, side: SideArg) -> Result<Outcome, Failure> {
    sites(shape.n)?;
    let pt = point(cli, ParameterPoint::default_point)?;
    let xs = rational_list("x", x)?;
    if xs.len() != shape.n {
        return Err(Failure::Usage(format!("--x has {} entries, expected {}", xs.len(), shape.n)));
    }
    let xs: Vec<BigFloat> = xs.iter().map(|v| bf(cli, v)).collect();
    let params = Params::<BigFloat>::from_point(&pt, &cli.precision);
    let ev = evaluate_fock(&params, &xs, shape.m, k, side == SideArg::Left)?;
    let json = json!({
        "side": if side == SideArg::Left { "left" } else { "right" },
        "m": shape.m,
        "N": shape.n,
        "K": k,
        "precision": cli.precision,
        "components": ev.components,
        "tail_estimate": ev.tail_estimate,
        "tolerance": ev.tolerance,
        "omega": ev.omega,
    });
    Ok(Outcome { summary: vec![format!("{} components, tail estimate {:.3e}", ev.components.len(), ev.tail_estimate)], json, ok: true })
}

fn report_summary(r: &Report) -> Vec<String> {
    r.entries
        .iter()
        .map(|e| format!("{} {} (residual {:.3e}, {} instances)", pass(e.passed), e.name, e.residual, e.instances))
        .collect()
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn asep_check(cli: &Cli, n: usize, trials: usize) -> Result<Outcome, Failure> {
    sites(n)?;
    let pt = point(cli, ParameterPoint::default_point)?;
    let p = Params::<Rational>::from_point(&pt, &());
    let mut r = rng(cli.seed);
    let mut report = Report::new("asep check");
    report.extend(check_integrability(&p, trials, &mut r)?);
    report.extend(check_scattering(&p, n, trials, &mut r)?);
    let ok = report.all_passed();
    Ok(Outcome { summary: report_summary(&report), json: to_value(&report), ok })
}

fn asep_lambda0(cli: &Cli, n: usize, xi: &str) -> Result<Outcome, Failure> {
    sites(n)?;
    let pt = point(cli, ParameterPoint::physical_point)?;
    let xi = rational("xi", xi)?;
    let params = Params::<BigFloat>::from_point(&pt, &cli.precision);
    let l = lambda0(&params, n, &bf(cli, &xi))?;
    let json = json!({
        "N": n,
        "xi": xi.to_string(),
        "precision": cli.precision,
        "lambda0": l.value.to_decimal_string(40),
        "iterations": l.squarings,
        "residual": l.residual,
    });
    Ok(Outcome { summary: vec![format!("Lambda_0 = {} after {} squarings", l.value.to_decimal_string(20), l.squarings)], json, ok: true })
}

fn limit_config(cli: &Cli, args: &LimitArgs) -> Result<LimitConfig, Failure> {
    Ok(LimitConfig {
        m_list: usize_list("m-list", &args.m_list)?,
        precision: cli.precision,
        h: rational("h", &args.h)?,
        backend: match args.backend {
            BackendArg::Algebraic => Backend::Algebraic,
            BackendArg::Fock => Backend::Fock { k: args.k },
        },
        wide_xi: false,
    })
}

fn limit_e_mu(cli: &Cli, mu: &str, n: usize, args: &LimitArgs, rel_width: Option<f64>) -> Result<Outcome, Failure> {
    sites(n)?;
    let pt = point(cli, ParameterPoint::physical_point)?;
    let cfg = limit_config(cli, args)?;
    let mu = rational("mu", mu)?;
    let params = Params::<BigFloat>::from_point(&pt, &cli.precision);
    let rep = check_e_mu(&params, n, &bf(cli, &mu), &cfg, rel_width)?;
    let summary = vec![format!(
        "{}: E({mu}) = {} +- {}, Lambda_0 = {}",
        rep.verdict.label(),
        rep.extrapolated,
        rep.error,
        rep.lambda0_reference
    )];
    let ok = rep.verdict != Verdict::Fail;
    Ok(Outcome { summary, json: to_value(&rep), ok })
}

fn limit_f0(cli: &Cli, n: usize, xi: &str, x: &str, args: &LimitArgs) -> Result<Outcome, Failure> {
    sites(n)?;
    let pt = point(cli, ParameterPoint::physical_point)?;
    let cfg = limit_config(cli, args)?;
    let xi = bf(cli, &rational("xi", xi)?);
    let xs = rational_list("x", x)?;
    if xs.len() != n {
        return Err(Failure::Usage(format!("--x has {} entries, expected {n}", xs.len())));
    }
    let xs: Vec<BigFloat> = xs.iter().map(|v| bf(cli, v)).collect();
    let params = Params::<BigFloat>::from_point(&pt, &cli.precision);
    let rep: F0Characterization = check_f0_characterization(&params, n, &xi, &xs, &cfg)?;
    let summary = vec![format!(
        "{}: lhs {} against d_0 {} (discrepancy {:.3e}, error bar {:.3e})",
        pass(rep.passed),
        rep.lhs,
        rep.d0,
        rep.discrepancy,
        rep.error_bar
    )];
    Ok(Outcome { ok: rep.passed, summary, json: to_value(&rep) })
}

fn verify_all(cli: &Cli, only: Option<&str>, k: usize) -> Result<Outcome, Failure> {
    let mut cfg = match &cli.params {
        Some(p) => VerifyConfig::with_point(load(p)?),
        None => VerifyConfig::default(),
    };
    cfg.seed = cli.seed;
    cfg.precision = cli.precision;
    cfg.k = k;
    let outcomes = match only {
        None => run_all(&cfg),
        Some(list) => {
            let ids = usize_list("only", list)?;
            if let Some(bad) = ids.iter().find(|&&i| !(1..=9).contains(&i)) {
                return Err(Failure::Usage(format!("--only: no criterion {bad}")));
            }
            ids.into_iter().map(|i| kasep_core::verify::run(i as u8, &cfg)).collect()
        }
    };
    let verdict = outcomes.iter().fold(Verdict::Pass, |v, o| v.and(o.verdict));
    let json = json!({
        "seed": cfg.seed,
        "precision": cfg.precision,
        "K": cfg.k,
        "algebraic_points": cfg.algebraic_points,
        "physical_point": cfg.physical,
        "verdict": verdict,
        "criteria": outcomes,
    });
    let summary = outcomes.iter().map(|o| o.line()).collect();
    Ok(Outcome { json, summary, ok: verdict != Verdict::Fail })
}
