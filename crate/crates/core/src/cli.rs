//! Parameter sweeps and reports behind the `aqrm` binary.
//!
//! Every subcommand has a library counterpart returning plain records
//! ([`spectrum_rows`], [`landscape_rows`], [`juddian_records`],
//! [`berry_report`]); [`run`] only parses flags, dispatches and writes.
//!
//! Data files contain no run metadata, so identical flags give byte-identical
//! output. The invocation and a timestamp go to `<output>.meta.json`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::berry::{self, Band, GaugeFixedStates, LoopTrajectory, Orientation, PairSetup, PhaseMethod};
use crate::constraints;
use crate::error::{Error, Result};
use crate::exactdiag::{self, TruncationConfig};
use crate::gaa::{self, Approximation};
use crate::model::{rescaled_energy, BlockIndex, ModelParams};
use crate::Method;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

pub const SPECTRUM_HEADER: &str = "method,g,epsilon,level_index,energy,energy_rescaled";

/// One swept axis: `steps` evenly spaced values from `min` to `max` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Axis {
    pub fn new(min: f64, max: f64, steps: usize) -> Result<Self> {
        let axis = Axis { min, max, steps };
        axis.validate()?;
        Ok(axis)
    }

    pub fn fixed(value: f64) -> Self {
        Axis { min: value, max: value, steps: 1 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.min.is_finite() && self.max.is_finite()) {
            return Err(Error::InvalidArgument("axis bounds must be finite".into()));
        }
        if self.steps == 1 && self.min == self.max {
            return Ok(());
        }
        if self.steps < 2 {
            return Err(Error::InvalidArgument(format!("axis needs at least 2 steps, got {}", self.steps)));
        }
        if !(self.min < self.max) {
            return Err(Error::InvalidArgument(format!("axis min {} must be below max {}", self.min, self.max)));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.min];
        }
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| if i + 1 == self.steps { self.max } else { self.min + (self.max - self.min) * i as f64 / last })
            .collect()
    }
}

/// Contiguous range of level indices, 0-based and inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelRange {
    pub first: usize,
    pub last: usize,
}

impl LevelRange {
    pub fn count(&self) -> usize {
        self.last - self.first + 1
    }
}

impl Default for LevelRange {
    fn default() -> Self {
        LevelRange { first: 0, last: 13 }
    }
}

impl std::str::FromStr for LevelRange {
    type Err = Error;

    /// `"N"` is the lowest N levels, `"A-B"` the levels A through B.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("invalid level range `{s}`"));
        let range = match s.split_once('-') {
            Some((a, b)) => {
                LevelRange { first: a.trim().parse().map_err(|_| bad())?, last: b.trim().parse().map_err(|_| bad())? }
            }
            None => {
                let n: usize = s.trim().parse().map_err(|_| bad())?;
                if n == 0 {
                    return Err(bad());
                }
                LevelRange { first: 0, last: n - 1 }
            }
        };
        if range.first > range.last {
            return Err(bad());
        }
        Ok(range)
    }
}

/// A parameter sweep over `g` and `ε` at fixed `Δ`, `ω`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub delta: f64,
    pub omega: f64,
    pub g: Axis,
    pub epsilon: Axis,
    pub methods: Vec<Method>,
    pub levels: LevelRange,
    /// Truncation tolerance for the exact method.
    pub tol: f64,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        self.g.validate()?;
        self.epsilon.validate()?;
        if self.methods.is_empty() {
            return Err(Error::InvalidArgument("no method selected".into()));
        }
        for g in [self.g.min, self.g.max] {
            for epsilon in [self.epsilon.min, self.epsilon.max] {
                ModelParams::new(self.delta, self.omega, g, epsilon)?;
            }
        }
        self.truncation().validate()
    }

    fn truncation(&self) -> TruncationConfig {
        TruncationConfig { tol: self.tol, k_levels: self.levels.last + 1, ..TruncationConfig::default() }
    }

    fn points(&self) -> Vec<(f64, f64)> {
        let eps = self.epsilon.values();
        self.g.values().into_iter().flat_map(|g| eps.iter().map(move |&e| (g, e))).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub method: Method,
    pub g: f64,
    pub epsilon: f64,
    pub level_index: usize,
    pub energy: f64,
    pub energy_rescaled: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LandscapeRow {
    pub g: f64,
    pub epsilon: f64,
    pub level_index: usize,
    pub energy_rescaled: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JuddianRecord {
    pub n: usize,
    pub l: usize,
    pub delta: f64,
    pub omega: f64,
    pub g_star: f64,
    pub energy: f64,
    pub rescaled_energy: f64,
    pub certified: bool,
    pub gap: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LoopSpec {
    pub g_min: f64,
    pub g_max: f64,
    pub epsilon_min: f64,
    pub epsilon_max: f64,
    pub steps: usize,
    pub orientation: Orientation,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairSpec {
    pub n: usize,
    pub l: usize,
    pub band: Band,
    pub delta: f64,
    pub omega: f64,
    pub approximation: Approximation,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BerryReport {
    pub winding: i64,
    pub phase_over_pi: f64,
    pub method: PhaseMethod,
    #[serde(rename = "loop")]
    pub loop_spec: LoopSpec,
    pub pair: PairSpec,
}

/// Energies at one point for one method.
fn point_levels(method: Method, params: &ModelParams, spec: &SweepSpec) -> Result<Vec<f64>> {
    let k = spec.levels.last + 1;
    let result = match Approximation::try_from(method) {
        Ok(approx) => gaa::approximate_spectrum(params, k, approx)?,
        Err(_) => exactdiag::converged_spectrum(params, &spec.truncation())?,
    };
    Ok(result.energies[spec.levels.first..k].to_vec())
}

fn sweep<T: Send>(
    points: &[(f64, f64)],
    jobs: Option<usize>,
    f: impl Fn(f64, f64) -> Result<Vec<T>> + Sync,
) -> Result<Vec<T>> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        builder = builder.num_threads(j);
    }
    let pool = builder.build().map_err(|e| Error::InvalidArgument(format!("worker pool: {e}")))?;
    // collect keeps input order regardless of completion order
    let chunks = pool.install(|| points.par_iter().map(|&(g, e)| f(g, e)).collect::<Result<Vec<_>>>())?;
    Ok(chunks.into_iter().flatten().collect())
}

/// Rows sorted by `(method, g, ε, level_index)`.
pub fn spectrum_rows(spec: &SweepSpec, jobs: Option<usize>) -> Result<Vec<SpectrumRow>> {
    spec.validate()?;
    let mut methods = spec.methods.clone();
    methods.sort_by_key(|m| m.as_str());
    methods.dedup();
    let points = spec.points();
    let mut rows = Vec::new();
    for method in methods {
        rows.extend(sweep(&points, jobs, |g, epsilon| {
            let params = ModelParams::new(spec.delta, spec.omega, g, epsilon)?;
            let levels = point_levels(method, &params, spec)?;
            Ok(levels
                .into_iter()
                .enumerate()
                .map(|(i, energy)| SpectrumRow {
                    method,
                    g,
                    epsilon,
                    level_index: spec.levels.first + i,
                    energy,
                    energy_rescaled: rescaled_energy(energy, g, spec.omega),
                })
                .collect())
        })?);
    }
    Ok(rows)
}

/// Grid rows ordered by `g`, then `ε`, then level; uses the first method of `spec`.
pub fn landscape_rows(spec: &SweepSpec, jobs: Option<usize>) -> Result<Vec<LandscapeRow>> {
    spec.validate()?;
    if spec.g.steps < 2 || spec.epsilon.steps < 2 {
        return Err(Error::InvalidArgument("landscape needs both g and epsilon axes".into()));
    }
    let method = spec.methods[0];
    sweep(&spec.points(), jobs, |g, epsilon| {
        let params = ModelParams::new(spec.delta, spec.omega, g, epsilon)?;
        let levels = point_levels(method, &params, spec)?;
        Ok(levels
            .into_iter()
            .enumerate()
            .map(|(i, energy)| LandscapeRow {
                g,
                epsilon,
                level_index: spec.levels.first + i,
                energy_rescaled: rescaled_energy(energy, g, spec.omega),
            })
            .collect())
    })
}

pub fn juddian_records(
    n: usize,
    l: usize,
    delta: f64,
    omega: f64,
    g_max: f64,
    certify: Option<&TruncationConfig>,
) -> Result<Vec<JuddianRecord>> {
    let scan = constraints::juddian_roots(n, l, delta, omega, g_max, certify)?;
    Ok(scan
        .roots
        .into_iter()
        .map(|r| JuddianRecord {
            n,
            l,
            delta,
            omega,
            g_star: r.g_star,
            energy: r.energy,
            rescaled_energy: rescaled_energy(r.energy, r.g_star, omega),
            certified: r.certified,
            gap: r.gap,
        })
        .collect())
}

pub fn berry_report(pair: PairSpec, loop_spec: LoopSpec, method: PhaseMethod) -> Result<BerryReport> {
    let setup = PairSetup::new(BlockIndex::new(pair.n, pair.l), pair.delta, pair.omega, pair.approximation)?;
    let trajectory = LoopTrajectory::rectangle(
        (loop_spec.g_min, loop_spec.g_max),
        (loop_spec.epsilon_min, loop_spec.epsilon_max),
        loop_spec.steps,
        loop_spec.orientation,
    )?;
    let result = match method {
        PhaseMethod::AnalyticWinding => berry::berry_phase(&trajectory, &setup, pair.band)?,
        PhaseMethod::WilsonLoop => {
            berry::check_proximity(&trajectory, &setup)?;
            berry::wilson_loop_phase(&trajectory, &GaugeFixedStates(setup), pair.band)?
        }
    };
    let phase_over_pi = match method {
        // exact integer by construction
        PhaseMethod::AnalyticWinding => result.winding as f64 * if pair.band == Band::Plus { -1.0 } else { 1.0 },
        PhaseMethod::WilsonLoop => result.phase_over_pi(),
    };
    Ok(BerryReport {
        winding: result.winding,
        phase_over_pi,
        method,
        loop_spec: LoopSpec { steps: trajectory.steps, ..loop_spec },
        pair,
    })
}

// ---------------------------------------------------------------- flags

#[derive(Debug, Parser)]
#[command(
    name = "aqrm",
    version,
    about = "Spectra, Juddian points and Berry phases of the asymmetric quantum Rabi model"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Energy levels along a g sweep (optionally also an epsilon sweep).
    Spectrum(SpectrumArgs),
    /// Rescaled energies on a (g, epsilon) grid.
    Landscape(LandscapeArgs),
    /// Exact degeneracy points of one level pair.
    Juddian(JuddianArgs),
    /// Geometric phase of a level pair around a rectangular loop.
    Berry(BerryArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PhaseMethodArg {
    Analytic,
    Wilson,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OrientationArg {
    Ccw,
    Cw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BandArg {
    Plus,
    Minus,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Destination file; standard output when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub delta: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub omega: f64,
    #[arg(long, default_value_t = 0.0)]
    pub g_min: f64,
    #[arg(long)]
    pub g_max: f64,
    #[arg(long)]
    pub g_steps: usize,
    /// `N` for the lowest N levels or `A-B` for an inclusive index range.
    #[arg(long, default_value = "14")]
    pub levels: String,
    /// Relative truncation tolerance of the exact method.
    #[arg(long, default_value_t = 1e-5)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub sweep: SweepArgs,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true, conflicts_with_all = ["epsilon_min", "epsilon_max", "epsilon_steps"])]
    pub epsilon: f64,
    #[arg(long, allow_negative_numbers = true, requires_all = ["epsilon_max", "epsilon_steps"])]
    pub epsilon_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true, requires_all = ["epsilon_min", "epsilon_steps"])]
    pub epsilon_max: Option<f64>,
    #[arg(long, requires_all = ["epsilon_min", "epsilon_max"])]
    pub epsilon_steps: Option<usize>,
    /// Comma-separated subset of exact, aa, gaa, gaa-kbar.
    #[arg(long, value_delimiter = ',', default_value = "exact,aa,gaa")]
    pub method: Vec<String>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct LandscapeArgs {
    #[command(flatten)]
    pub sweep: SweepArgs,
    #[arg(long, allow_negative_numbers = true)]
    pub epsilon_min: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub epsilon_max: f64,
    #[arg(long)]
    pub epsilon_steps: usize,
    #[arg(long, default_value = "exact")]
    pub method: String,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct JuddianArgs {
    #[arg(long)]
    pub pair_n: usize,
    #[arg(long, default_value_t = 0)]
    pub bias_l: usize,
    #[arg(long, allow_negative_numbers = true)]
    pub delta: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub omega: f64,
    #[arg(long, default_value_t = 3.0)]
    pub g_max: f64,
    /// Confirm each root by exact diagonalization.
    #[arg(long)]
    pub certify: bool,
    /// Truncation tolerance used for certification.
    #[arg(long)]
    pub tol: Option<f64>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct BerryArgs {
    #[arg(long)]
    pub pair_n: usize,
    #[arg(long, default_value_t = 0)]
    pub bias_l: usize,
    #[arg(long, allow_negative_numbers = true)]
    pub delta: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub omega: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub g_min: f64,
    #[arg(long)]
    pub g_max: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub epsilon_min: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub epsilon_max: f64,
    #[arg(long, default_value_t = 2000)]
    pub loop_steps: usize,
    #[arg(long, value_enum, default_value = "minus")]
    pub band: BandArg,
    #[arg(long, value_enum, default_value = "ccw")]
    pub orientation: OrientationArg,
    #[arg(long, value_enum, default_value = "analytic")]
    pub phase_method: PhaseMethodArg,
    /// Tunnelling strength used for the block: gaa, gaa-kbar or aa.
    #[arg(long, default_value = "gaa")]
    pub method: String,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

impl SweepArgs {
    fn spec(&self, epsilon: Axis, methods: Vec<Method>) -> Result<SweepSpec> {
        let spec = SweepSpec {
            delta: self.delta,
            omega: self.omega,
            g: Axis::new(self.g_min, self.g_max, self.g_steps)?,
            epsilon,
            methods,
            levels: self.levels.parse()?,
            tol: self.tol,
        };
        spec.validate()?;
        Ok(spec)
    }
}

// ---------------------------------------------------------------- output

fn to_csv<T: Serialize>(rows: &[T], header: Option<&str>) -> Result<Vec<u8>> {
    let mut wtr = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .has_headers(header.is_none())
        .from_writer(Vec::new());
    if let Some(h) = header {
        wtr.write_record(h.split(','))?;
    }
    for row in rows {
        wtr.serialize(row)?;
    }
    wtr.into_inner().map_err(|e| Error::Io(e.into_error()))
}

fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// Writes through a temporary sibling and renames it into place, so a failed
/// run never leaves a partial file at `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().ok_or_else(|| Error::InvalidArgument(format!("bad output path {}", path.display())))?;
    let tmp = dir.join(format!(".{}.{}.partial", name.to_string_lossy(), std::process::id()));
    let result = fs::File::create(&tmp)
        .and_then(|mut f| f.write_all(bytes).and_then(|_| f.sync_all()))
        .and_then(|_| fs::rename(&tmp, path));
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    Ok(result?)
}

fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

fn emit(bytes: Vec<u8>, output: Option<&Path>, argv: &[String]) -> Result<()> {
    match output {
        None => {
            std::io::stdout().write_all(&bytes)?;
            Ok(())
        }
        Some(path) => {
            write_atomic(path, &bytes)?;
            let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
            let meta = serde_json::json!({
                "program": "aqrm",
                "version": env!("CARGO_PKG_VERSION"),
                "args": argv,
                "unix_time": timestamp,
            });
            write_atomic(&sidecar_path(path), &to_json(&meta)?)
        }
    }
}

fn parse_methods(names: &[String]) -> Result<Vec<Method>> {
    names.iter().map(|s| s.trim().parse()).collect()
}

fn execute(cli: Cli, argv: &[String]) -> Result<()> {
    match cli.command {
        Command::Spectrum(a) => {
            let epsilon = match (a.epsilon_min, a.epsilon_max, a.epsilon_steps) {
                (Some(lo), Some(hi), Some(steps)) => Axis::new(lo, hi, steps)?,
                _ => Axis::fixed(a.epsilon),
            };
            let spec = a.sweep.spec(epsilon, parse_methods(&a.method)?)?;
            let rows = spectrum_rows(&spec, a.out.jobs)?;
            let bytes = match a.out.format {
                Format::Csv => to_csv(&rows, None)?,
                Format::Json => to_json(&rows)?,
            };
            emit(bytes, a.out.output.as_deref(), argv)
        }
        Command::Landscape(a) => {
            let epsilon = Axis::new(a.epsilon_min, a.epsilon_max, a.epsilon_steps)?;
            let spec = a.sweep.spec(epsilon, vec![a.method.parse()?])?;
            let rows = landscape_rows(&spec, a.out.jobs)?;
            let bytes = match a.out.format {
                Format::Csv => to_csv(&rows, None)?,
                Format::Json => to_json(&rows)?,
            };
            emit(bytes, a.out.output.as_deref(), argv)
        }
        Command::Juddian(a) => {
            let cfg = TruncationConfig {
                tol: a.tol.unwrap_or(constraints::certification_config().tol),
                ..constraints::certification_config()
            };
            cfg.validate()?;
            let records = juddian_records(a.pair_n, a.bias_l, a.delta, a.omega, a.g_max, a.certify.then_some(&cfg))?;
            let bytes = match a.out.format {
                Format::Csv => to_csv(&records, Some("n,l,delta,omega,g_star,energy,rescaled_energy,certified,gap"))?,
                Format::Json => to_json(&records)?,
            };
            emit(bytes, a.out.output.as_deref(), argv)
        }
        Command::Berry(a) => {
            let pair = PairSpec {
                n: a.pair_n,
                l: a.bias_l,
                band: match a.band {
                    BandArg::Plus => Band::Plus,
                    BandArg::Minus => Band::Minus,
                },
                delta: a.delta,
                omega: a.omega,
                approximation: a.method.parse()?,
            };
            let loop_spec = LoopSpec {
                g_min: a.g_min,
                g_max: a.g_max,
                epsilon_min: a.epsilon_min,
                epsilon_max: a.epsilon_max,
                steps: a.loop_steps,
                orientation: match a.orientation {
                    OrientationArg::Ccw => Orientation::Counterclockwise,
                    OrientationArg::Cw => Orientation::Clockwise,
                },
            };
            let method = match a.phase_method {
                PhaseMethodArg::Analytic => PhaseMethod::AnalyticWinding,
                PhaseMethodArg::Wilson => PhaseMethod::WilsonLoop,
            };
            let report = berry_report(pair, loop_spec, method)?;
            let bytes = match a.format {
                Format::Json => to_json(&report)?,
                Format::Csv => {
                    let flat = (
                        report.pair.n,
                        report.pair.l,
                        a.band == BandArg::Plus,
                        report.winding,
                        report.phase_over_pi,
                        loop_spec.g_min,
                        loop_spec.g_max,
                        loop_spec.epsilon_min,
                        loop_spec.epsilon_max,
                        report.loop_spec.steps,
                    );
                    to_csv(
                        &[flat],
                        Some("n,l,upper_band,winding,phase_over_pi,g_min,g_max,epsilon_min,epsilon_max,steps"),
                    )?
                }
            };
            emit(bytes, a.output.as_deref(), argv)
        }
    }
}

struct StderrLogger;

impl log::Log for StderrLogger {
    fn enabled(&self, metadata: &log::Metadata) -> bool {
        metadata.level() <= log::Level::Warn
    }

    fn log(&self, record: &log::Record) {
        if self.enabled(record.metadata()) {
            eprintln!("aqrm: {}: {}", record.level().as_str().to_lowercase(), record.args());
        }
    }

    fn flush(&self) {}
}

static LOGGER: StderrLogger = StderrLogger;

/// Exit status for an error: 2 for bad input, 3 for numerical failure.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        e if e.is_numerical() => EXIT_NUMERICAL,
        Error::InvalidParams(_) | Error::InvalidArgument(_) | Error::DimensionOverflow { .. } => EXIT_INVALID,
        _ => EXIT_FAILURE,
    }
}

/// Runs the binary with the given arguments (the first is the program name).
pub fn run_with<I: IntoIterator<Item = String>>(args: I) -> i32 {
    let argv: Vec<String> = args.into_iter().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    let _ = log::set_logger(&LOGGER).map(|()| log::set_max_level(log::LevelFilter::Warn));
    match execute(cli, &argv) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("aqrm: {e}");
            exit_code(&e)
        }
    }
}

pub fn run() -> i32 {
    run_with(std::env::args())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flag_definitions_are_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn axis_values() {
        let a = Axis::new(0.0, 1.2, 121).unwrap();
        let v = a.values();
        assert_eq!(v.len(), 121);
        assert_eq!(v[0], 0.0);
        assert_eq!(v[120], 1.2);
        assert!((v[60] - 0.6).abs() < 1e-15);
        assert!(Axis::new(0.0, 1.0, 1).is_err());
        assert!(Axis::new(1.0, 1.0, 5).is_err());
        assert!(Axis::new(1.0, 0.0, 5).is_err());
        assert_eq!(Axis::fixed(0.5).values(), vec![0.5]);
    }

    #[test]
    fn level_ranges() {
        assert_eq!("6".parse::<LevelRange>().unwrap(), LevelRange { first: 0, last: 5 });
        assert_eq!("3-8".parse::<LevelRange>().unwrap().count(), 6);
        for bad in ["0", "5-3", "a", "1-"] {
            assert!(bad.parse::<LevelRange>().is_err(), "{bad}");
        }
    }

    #[test]
    fn spectrum_header_and_order() {
        let spec = SweepSpec {
            delta: 0.5,
            omega: 1.0,
            g: Axis::new(0.0, 0.4, 3).unwrap(),
            epsilon: Axis::fixed(1.0),
            methods: vec![Method::Gaa, Method::Exact, Method::Aa],
            levels: "4".parse().unwrap(),
            tol: 1e-8,
        };
        let rows = spectrum_rows(&spec, Some(2)).unwrap();
        assert_eq!(rows.len(), 3 * 3 * 4);
        let csv = String::from_utf8(to_csv(&rows, None).unwrap()).unwrap();
        assert_eq!(csv.lines().next().unwrap(), SPECTRUM_HEADER);
        assert!(csv.lines().nth(1).unwrap().starts_with("aa,0.0,1.0,0,"));
        let keys: Vec<_> = rows.iter().map(|r| (r.method.as_str(), r.g, r.level_index)).collect();
        let mut sorted = keys.clone();
        sorted.sort_by(|a, b| a.0.cmp(b.0).then(a.1.total_cmp(&b.1)).then(a.2.cmp(&b.2)));
        assert_eq!(keys, sorted);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::InvalidArgument("x".into())), EXIT_INVALID);
        assert_eq!(exit_code(&Error::Degenerate { g: 0.0, epsilon: 0.0 }), EXIT_NUMERICAL);
        assert_eq!(run_with(["aqrm", "spectrum", "--delta", "1"].map(String::from)), EXIT_INVALID);
        assert_eq!(run_with(["aqrm", "bogus"].map(String::from)), EXIT_INVALID);
    }
}
