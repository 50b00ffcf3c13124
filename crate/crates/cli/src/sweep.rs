//! Multi-size growth sweeps.

use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};
use sumprod_core::fieldset::GENERATOR_NAME;
use sumprod_core::setstats::{d4_search, image2, product_set, sumset, D4Strategy};
use sumprod_core::{fit_power_law, generate, Error, ExponentFit, FamilySpec, PrimeField, QuadPoly2};

use crate::CliError;

/// Exponent of the growth estimate, `6/5 + 4/305`.
pub const MAIN_EXPONENT: f64 = 74.0 / 61.0;

pub const CSV_HEADER: [&str; 10] = [
    "family_id",
    "p",
    "a_size",
    "sumset_size",
    "product_size",
    "image_size",
    "maxgrow",
    "ratio_main",
    "d4_lower",
    "elapsed_ms",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub family_id: String,
    pub p: u64,
    pub a_size: u64,
    pub sumset_size: u64,
    pub product_size: u64,
    pub image_size: u64,
    pub maxgrow: u64,
    pub ratio_main: f64,
    pub d4_lower: Option<f64>,
    pub elapsed_ms: f64,
}

impl SweepRow {
    fn record(&self, timing: bool) -> [String; 10] {
        [
            self.family_id.clone(),
            self.p.to_string(),
            self.a_size.to_string(),
            self.sumset_size.to_string(),
            self.product_size.to_string(),
            self.image_size.to_string(),
            self.maxgrow.to_string(),
            self.ratio_main.to_string(),
            self.d4_lower.map(|v| v.to_string()).unwrap_or_default(),
            if timing { format!("{:.3}", self.elapsed_ms) } else { String::new() },
        ]
    }
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub field: PrimeField,
    pub family: FamilySpec,
    pub sizes: Vec<u64>,
    pub poly: QuadPoly2,
    pub seed: u64,
    pub workers: usize,
    pub with_d4: bool,
    /// Require every size to satisfy `size² ≤ p`.
    pub below_sqrt_p: bool,
    pub timing: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool_version: &'static str,
    pub field: u64,
    pub family: String,
    pub sizes: Vec<u64>,
    pub polynomial: String,
    pub seed: u64,
    pub d4: bool,
    pub generator: &'static str,
    pub timestamp_unix: u64,
    pub outputs: Vec<OutputDigest>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OutputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRun {
    pub manifest: RunManifest,
    pub fit: Option<ExponentFit>,
    pub rows: Vec<SweepRow>,
    pub warnings: Vec<String>,
}

pub fn validate(cfg: &SweepConfig) -> Result<(), CliError> {
    if cfg.sizes.is_empty() {
        return Err(CliError::Usage("--sizes needs at least one size".into()));
    }
    if cfg.sizes[0] == 0 {
        return Err(CliError::Usage("sizes must be positive".into()));
    }
    if cfg.sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Usage("sizes must be strictly increasing".into()));
    }
    if cfg.below_sqrt_p {
        let p = cfg.field.p();
        if let Some(&size) = cfg.sizes.iter().find(|&&s| (s as u128) * (s as u128) > p as u128) {
            return Err(Error::SizeAboveSqrtP { size, p }.into());
        }
    }
    Ok(())
}

fn compute_row(cfg: &SweepConfig, family: &FamilySpec, index: usize) -> Result<SweepRow, Error> {
    let start = Instant::now();
    let task = family.for_task(index as u64);
    let size = cfg.sizes[index];
    let a = generate(&task, cfg.field, size)?;
    let sumset_size = sumset(&a, &a)?.len() as u64;
    let product_size = product_set(&a, &a)?.len() as u64;
    let image_size = image2(&cfg.poly, &a, &a)?.len() as u64;
    let maxgrow = sumset_size.max(image_size);
    let d4_lower = if cfg.with_d4 {
        let strategies = D4Strategy::all(sumprod_core::fieldset::mix_seed(cfg.seed, index as u64));
        Some(d4_search(&a, &strategies)?.value_approx)
    } else {
        None
    };
    Ok(SweepRow {
        family_id: task.to_string(),
        p: cfg.field.p(),
        a_size: size,
        sumset_size,
        product_size,
        image_size,
        maxgrow,
        ratio_main: maxgrow as f64 / (size as f64).powf(MAIN_EXPONENT),
        d4_lower,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Computes every row; order follows `cfg.sizes` regardless of scheduling.
pub fn compute_rows(cfg: &SweepConfig) -> Result<Vec<SweepRow>, CliError> {
    validate(cfg)?;
    let family = cfg.family.with_default_seed(cfg.seed);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers.max(1))
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    let rows: Result<Vec<SweepRow>, Error> =
        pool.install(|| (0..cfg.sizes.len()).into_par_iter().map(|i| compute_row(cfg, &family, i)).collect());
    Ok(rows?)
}

pub fn render_csv(rows: &[SweepRow], timing: bool) -> Result<Vec<u8>, CliError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for row in rows {
        w.write_record(row.record(timing)).map_err(csv_err)?;
    }
    w.into_inner().map_err(|e| CliError::Io(e.into_error()))
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Io(std::io::Error::other(e))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn fit_rows(rows: &[SweepRow]) -> Option<ExponentFit> {
    let data: Vec<(f64, f64)> = rows.iter().map(|r| (r.a_size as f64, r.maxgrow as f64)).collect();
    fit_power_law(&data).ok()
}

/// Path of the run object written next to the CSV.
pub fn run_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("run.json")
}

/// Runs the sweep and writes `out` (CSV) plus the run object beside it.
pub fn run_sweep(cfg: &SweepConfig, out: Option<&Path>) -> Result<(SweepRun, Vec<u8>), CliError> {
    let rows = compute_rows(cfg)?;
    let csv = render_csv(&rows, cfg.timing)?;
    let mut warnings = Vec::new();
    let fit = fit_rows(&rows);
    if fit.is_none() {
        warnings.push("exponent fit needs at least two distinct sizes".to_string());
    }
    let mut outputs = Vec::new();
    if let Some(path) = out {
        std::fs::write(path, &csv)?;
        outputs.push(OutputDigest { path: path.display().to_string(), sha256: sha256_hex(&csv) });
    }
    let manifest = RunManifest {
        tool_version: env!("CARGO_PKG_VERSION"),
        field: cfg.field.p(),
        family: cfg.family.with_default_seed(cfg.seed).to_string(),
        sizes: cfg.sizes.clone(),
        polynomial: cfg.poly.descriptor(),
        seed: cfg.seed,
        d4: cfg.with_d4,
        generator: GENERATOR_NAME,
        timestamp_unix: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
        outputs,
    };
    let run = SweepRun { manifest, fit, rows, warnings };
    if let Some(path) = out {
        let json = serde_json::to_vec_pretty(&run).map_err(|e| CliError::Io(e.into()))?;
        std::fs::write(run_path(path), json)?;
    }
    Ok((run, csv))
}
