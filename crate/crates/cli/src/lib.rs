//! The `sumprod` command-line tool.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or descriptor
//! error, 3 budget or size-limit error. Errors are printed to stderr as
//! `error[Code]: message`.

pub mod sweep;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::Rng;
use serde_json::{json, Value};
use sumprod_core::fieldset::seeded_rng;
use sumprod_core::inequality::{report_garaev, report_his, report_lemma1, report_lemma_ss, report_main, report_rss};
use sumprod_core::rational::render;
use sumprod_core::setstats::{
    d4_exact, d4_search, dyadic_profile, energy2, energy4, image2, product_set, sumset, D4Strategy,
};
use sumprod_core::verify::{run_all, VerifyOptions};
use sumprod_core::{
    parse_set, vinh_check, DegeneracyVerdict, Error, FamilySpec, Form3Verdict, Holds, Plane, PlaneSet, PointSet3,
    PrimeField, QuadPoly2,
};

use crate::sweep::{run_path, SweepConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    VerificationFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::VerificationFailed(_) => 1,
            CliError::Core(e) if e.is_limit() => 3,
            CliError::Core(_) | CliError::Usage(_) | CliError::Io(_) => 2,
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.code(),
            CliError::Usage(_) => "Usage",
            CliError::Io(_) => "Io",
            CliError::VerificationFailed(_) => "VerificationFailed",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "sumprod", version, about = "Exact sum-product statistics over prime fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Prime modulus.
    #[arg(long)]
    pub p: u64,
    /// Emit JSON instead of text.
    #[arg(long)]
    pub json: bool,
    /// Also write the JSON result to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum D4ModeArg {
    Exact,
    Search,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sumset, product set, image and energy statistics of one set.
    Stats {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        set: String,
        #[arg(long)]
        poly: Option<String>,
        /// Include the inequality reports.
        #[arg(long)]
        reports: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Degeneracy verdict for a two-variable quadratic and its lift.
    Classify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        poly: String,
    },
    /// Runs every invariant suite.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long)]
        json: bool,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Growth statistics over a family at several sizes.
    Sweep {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        family: String,
        /// Comma-separated, strictly increasing.
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<u64>,
        #[arg(long, default_value = "quad2:1,0,0,0,1,0")]
        poly: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// CSV destination; the run object goes to `<stem>.run.json`.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = default_workers())]
        workers: usize,
        /// Add a heuristic lower bound for d₄⁺ to each row.
        #[arg(long)]
        d4: bool,
        /// Reject sizes above sqrt(p).
        #[arg(long)]
        below_sqrt_p: bool,
        /// Fill the elapsed_ms column. Makes the CSV run-dependent.
        #[arg(long)]
        timing: bool,
    },
    /// Normalized fourth energy of a set.
    D4 {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        set: String,
        #[arg(long, value_enum, default_value_t = D4ModeArg::Exact)]
        mode: D4ModeArg,
        /// Universe for exact mode; defaults to the whole field.
        #[arg(long)]
        universe: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Point-plane incidences in F_p³ against Vinh's bound.
    IncidenceCheck {
        #[command(flatten)]
        common: Common,
        /// `full` or `rand:count,seed`.
        #[arg(long, default_value = "full")]
        points: String,
        /// `full` or `rand:count,seed`.
        #[arg(long, default_value = "full")]
        planes: String,
    },
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

/// Parses `args` and runs the command. Returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() { write!(stderr, "{e}") } else { write!(stdout, "{e}") };
            return code;
        }
    };
    match execute(cli.command, stdout, stderr) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error[{}]: {e}", e.code());
            e.exit_code()
        }
    }
}

fn field(p: u64) -> Result<PrimeField, CliError> {
    Ok(PrimeField::new(p)?)
}

fn emit(
    stdout: &mut dyn Write,
    json_mode: bool,
    out: Option<&Path>,
    value: &Value,
    text: &str,
) -> Result<(), CliError> {
    let rendered = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.into()))?;
    if let Some(path) = out {
        std::fs::write(path, format!("{rendered}\n"))?;
    }
    if json_mode {
        writeln!(stdout, "{rendered}")?;
    } else {
        write!(stdout, "{text}")?;
    }
    Ok(())
}

fn execute(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Stats { common, set, poly, reports, seed } => {
            cmd_stats(&common, &set, poly.as_deref(), reports, seed, stdout)
        }
        Command::Classify { common, poly } => cmd_classify(&common, &poly, stdout),
        Command::Verify { seed, trials, json, inject_fault } => {
            cmd_verify(VerifyOptions { seed, trials, inject_fault }, json, stdout, stderr)
        }
        Command::Sweep { p, family, sizes, poly, seed, out, json, workers, d4, below_sqrt_p, timing } => {
            let f = field(p)?;
            let cfg = SweepConfig {
                field: f,
                family: FamilySpec::parse(&family)?,
                sizes,
                poly: QuadPoly2::parse(f, &poly)?,
                seed,
                workers,
                with_d4: d4,
                below_sqrt_p,
                timing,
            };
            cmd_sweep(&cfg, out.as_deref(), json, stdout, stderr)
        }
        Command::D4 { common, set, mode, universe, seed } => {
            cmd_d4(&common, &set, mode, universe.as_deref(), seed, stdout)
        }
        Command::IncidenceCheck { common, points, planes } => cmd_incidence(&common, &points, &planes, stdout),
    }
}

pub fn cmd_stats(
    common: &Common,
    set: &str,
    poly: Option<&str>,
    reports: bool,
    seed: u64,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let f = field(common.p)?;
    let a = parse_set(f, set)?;
    let poly = poly.map(|s| QuadPoly2::parse(f, s)).transpose()?;
    let sum = sumset(&a, &a)?.len();
    let prod = product_set(&a, &a)?.len();
    let image = poly.as_ref().map(|q| image2(q, &a, &a).map(|s| s.len())).transpose()?;
    let e2 = energy2(&a, &a)?;
    let e4 = energy4(&a, &a)?;
    let dyadic = dyadic_profile(&a, &a)?.best();
    let mut value = json!({
        "p": f.p(),
        "set": a.render(),
        "a_size": a.len(),
        "sumset_size": sum,
        "product_size": prod,
        "image_size": image,
        "polynomial": poly.as_ref().map(QuadPoly2::descriptor),
        "e2": e2.to_string(),
        "e4": e4.to_string(),
        "dyadic_argmax": dyadic,
    });
    let mut text = format!(
        "|A| = {}\n|A+A| = {sum}\n|A·A| = {prod}\n{}E2+ = {e2}\nE4+ = {e4}\n{}",
        a.len(),
        image.map(|n| format!("|f(A,A)| = {n}\n")).unwrap_or_default(),
        dyadic
            .map(|r| format!("dyadic argmax: t = {}, |D_t| = {}, |D_t|t^4 = {}\n", r.t, r.size, r.mass))
            .unwrap_or_default(),
    );
    if reports {
        let mut list = vec![report_his(&a)?, report_garaev(&a)?, report_rss(&a)?];
        if !a.is_empty() {
            let d4 = d4_search(&a, &D4Strategy::all(seed))?;
            list.push(report_lemma_ss(&a, &d4)?);
            if let Some(q) = &poly {
                list.push(report_main(&a, q)?);
                match report_lemma1(&a, q, &d4) {
                    Ok(r) => list.push(r),
                    Err(Error::NonDegenerateRequired) => {}
                    Err(e) => return Err(e.into()),
                }
            }
        }
        for r in &list {
            let ratio = r.ratio.map(|x| format!("{x:.6}")).unwrap_or_else(|| "n/a".into());
            text.push_str(&format!("report {}: ratio {ratio} ({:?})\n", r.name, r.holds));
        }
        value["reports"] = json!(list);
    }
    emit(stdout, common.json, common.out.as_deref(), &value, &text)
}

fn degeneracy_text(v: &DegeneracyVerdict) -> String {
    match v {
        DegeneracyVerdict::Degenerate { outer, form } => format!(
            "Degenerate: Q(t) = {}t^2 + {}t + {}, L(x,y) = {}x + {}y",
            outer.q2, outer.q1, outer.q0, form.alpha, form.beta
        ),
        DegeneracyVerdict::NonDegenerate => "NonDegenerate".into(),
    }
}

fn form3_text(v: &Form3Verdict) -> String {
    match v {
        Form3Verdict::OfForm { .. } => "OfForm".into(),
        Form3Verdict::NotOfForm => "NotOfForm".into(),
    }
}

pub fn cmd_classify(common: &Common, poly: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    let f = field(common.p)?;
    let q = QuadPoly2::parse(f, poly)?;
    let verdict = q.classify_degenerate();
    let lifted = q.swap_normalize().lift_to_three();
    let form3 = lifted.classify_form3();
    let value = json!({
        "p": f.p(),
        "polynomial": q.descriptor(),
        "degenerate": verdict.is_degenerate(),
        "verdict": verdict,
        "lift": lifted.coefficients(),
        "lift_of_form": form3.is_of_form(),
        "lift_verdict": form3,
    });
    let text = format!("{}\nlift f(u+v, w): {}\n", degeneracy_text(&verdict), form3_text(&form3));
    emit(stdout, common.json, common.out.as_deref(), &value, &text)
}

pub fn cmd_verify(
    opts: VerifyOptions,
    json_mode: bool,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    let summary = run_all(&opts);
    for w in &summary.warnings {
        writeln!(stderr, "warning: {w}")?;
    }
    if json_mode {
        writeln!(stdout, "{}", serde_json::to_string_pretty(&summary).map_err(|e| CliError::Io(e.into()))?)?;
    } else {
        for s in &summary.suites {
            let tag = if s.passed() { "ok" } else { "FAIL" };
            writeln!(stdout, "{tag:4} {:34} {:>8} cases {:>4} failures", s.name, s.cases, s.failures)?;
            if let Some(detail) = &s.first_failure {
                writeln!(stdout, "     first failure: {detail}")?;
            }
        }
    }
    if summary.passed() {
        Ok(())
    } else {
        let failed: Vec<&str> = summary.suites.iter().filter(|s| !s.passed()).map(|s| s.name).collect();
        Err(CliError::VerificationFailed(format!("failing suites: {}", failed.join(", "))))
    }
}

pub fn cmd_sweep(
    cfg: &SweepConfig,
    out: Option<&Path>,
    json_mode: bool,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    let (run, csv) = sweep::run_sweep(cfg, out)?;
    for w in &run.warnings {
        writeln!(stderr, "warning: {w}")?;
    }
    if json_mode {
        writeln!(stdout, "{}", serde_json::to_string_pretty(&run).map_err(|e| CliError::Io(e.into()))?)?;
    } else {
        if out.is_none() {
            stdout.write_all(&csv)?;
        }
        if let Some(fit) = &run.fit {
            writeln!(
                stdout,
                "fit: slope {:.6}, intercept {:.6}, rss {:.3e}, points {}",
                fit.slope, fit.intercept, fit.rss, fit.points
            )?;
        }
        if let Some(path) = out {
            writeln!(stdout, "wrote {} and {}", path.display(), run_path(path).display())?;
        }
    }
    Ok(())
}

pub fn cmd_d4(
    common: &Common,
    set: &str,
    mode: D4ModeArg,
    universe: Option<&str>,
    seed: u64,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let f = field(common.p)?;
    let a = parse_set(f, set)?;
    let result = match mode {
        D4ModeArg::Exact => {
            let u = match universe {
                Some(spec) => parse_set(f, spec)?,
                None => {
                    if f.p() as usize > sumprod_core::setstats::D4_EXACT_MAX_UNIVERSE {
                        return Err(Error::UniverseTooLarge(f.p() as usize).into());
                    }
                    f.full_set()
                }
            };
            d4_exact(&a, &u)?
        }
        D4ModeArg::Search => d4_search(&a, &D4Strategy::all(seed))?,
    };
    let value = json!(result);
    let text = format!(
        "d4+ = {} (≈ {:.6}, {:?})\nmaximizer: {}\n",
        render(&result.value),
        result.value_approx,
        result.mode,
        result.maximizer.render()
    );
    emit(stdout, common.json, common.out.as_deref(), &value, &text)
}

fn parse_count_seed(spec: &str) -> Result<(u64, u64), CliError> {
    let bad = |reason: &str| CliError::Core(Error::SpecSyntax { input: spec.to_string(), reason: reason.to_string() });
    let body = spec.strip_prefix("rand:").ok_or_else(|| bad("expected `full` or `rand:count,seed`"))?;
    let (n, s) = body.split_once(',').ok_or_else(|| bad("expected `rand:count,seed`"))?;
    let n = n.trim().parse().map_err(|_| bad("count is not an integer"))?;
    let s = s.trim().parse().map_err(|_| bad("seed is not an integer"))?;
    Ok((n, s))
}

/// Largest point or plane set built for `incidence-check`.
const MAX_CONFIGURATION: u64 = 1 << 24;
/// Largest `|P||Π|` checked pairwise.
const INCIDENCE_BUDGET: u128 = 10_000_000_000;

fn configuration_size(f: PrimeField, spec: &str) -> Result<u64, CliError> {
    let n = if spec == "full" { (f.p() as u128).pow(3) } else { parse_count_seed(spec)?.0 as u128 };
    if n > MAX_CONFIGURATION as u128 {
        return Err(Error::BudgetExceeded { needed: n, budget: MAX_CONFIGURATION as u128 }.into());
    }
    Ok(n as u64)
}

fn point_set(f: PrimeField, spec: &str) -> Result<PointSet3, CliError> {
    configuration_size(f, spec)?;
    if spec == "full" {
        return Ok(PointSet3::full(f));
    }
    let (n, seed) = parse_count_seed(spec)?;
    let p = f.p();
    let mut rng = seeded_rng(seed, 0);
    Ok(PointSet3::new(f, (0..n).map(|_| std::array::from_fn(|_| rng.gen_range(0..p))))?)
}

fn plane_set(f: PrimeField, spec: &str) -> Result<PlaneSet, CliError> {
    configuration_size(f, spec)?;
    if spec == "full" {
        return Ok(PlaneSet::full(f));
    }
    let (n, seed) = parse_count_seed(spec)?;
    let p = f.p();
    let mut rng = seeded_rng(seed, 1);
    let mut planes = Vec::new();
    while (planes.len() as u64) < n {
        let normal: [u64; 3] = std::array::from_fn(|_| rng.gen_range(0..p));
        if let Ok(pl) = Plane::new(&f, normal, rng.gen_range(0..p)) {
            planes.push(pl);
        }
    }
    Ok(PlaneSet::new(f, planes))
}

pub fn cmd_incidence(common: &Common, points: &str, planes: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    let f = field(common.p)?;
    let pts = point_set(f, points)?;
    let pls = plane_set(f, planes)?;
    let pairs = pts.len() as u128 * pls.len() as u128;
    if pairs > INCIDENCE_BUDGET {
        return Err(Error::BudgetExceeded { needed: pairs, budget: INCIDENCE_BUDGET }.into());
    }
    let report = vinh_check(&pts, &pls)?;
    let value = json!(report);
    let text = format!(
        "I = {} over {} points and {} planes; bound {:.3}; holds: {:?}\n",
        serde_json::to_string(&report.lhs).unwrap_or_default().trim_matches('"'),
        pts.len(),
        pls.len(),
        report.rhs.to_f64(),
        report.holds
    );
    emit(stdout, common.json, common.out.as_deref(), &value, &text)?;
    if report.holds == Holds::False {
        return Err(CliError::VerificationFailed("incidence bound violated".into()));
    }
    Ok(())
}
