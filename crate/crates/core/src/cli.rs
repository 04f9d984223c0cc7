//! Command-line front end: figure data, sweeps, critical points, sudden-death
//! onsets and the verification report, as CSV or JSON.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::analysis::{
    self, critical_point, default_swept, esd_onset, param_grid, sweep, CheckResult,
    DiscrepancyReport, Mode, Probe, SweepGrid, SweepRecord, DEFAULT_ROOT_TOL, DEFAULT_STEP,
    DEFAULT_X_VALUES,
};
use crate::channels::{NoiseKind, NoiseScenario, Param};
use crate::closedform::{CollectiveVariant, GLOBAL_LOCAL_PARAM};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INVARIANT: i32 = 2;

pub const SWEEP_HEADER: &str = "scenario,mode,p1,p2,p,x,negativity,min_pt_eigenvalue";
pub const CRITICAL_HEADER: &str = "scenario,mode,swept,xa,xb,critical_point";
pub const ESD_HEADER: &str = "scenario,mode,swept,x,onset,kind";

/// `(p2, x)` pairs plotted against `p1` for figure 4.
pub const FIG4_PAIRS: [(f64, f64); 4] = [(0.32, 0.25), (0.5, 0.25), (0.6538, 0.25), (0.75, 0.25)];

/// Default grid density of the discrepancy report.
pub const DEFAULT_DENSITY: usize = 11;

#[derive(Debug, Parser)]
#[command(name = "esdsim", version, about = "Qubit-qutrit entanglement under depolarizing noise")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Data behind figure 1..6 (closed-form negativity sweeps by default).
    Fig {
        id: u8,
        #[command(flatten)]
        opts: CommonOpts,
        /// Figure 4 (p2:x) pairs, e.g. "0.32:0.25,0.5:0.25".
        #[arg(long, value_delimiter = ',')]
        pairs: Option<Vec<String>>,
    },
    /// Negativity over a parameter grid.
    Sweep(ScenarioOpts),
    /// Parameter values where the negativity is the same for two x values.
    Critical(ScenarioOpts),
    /// First parameter value where the negativity reaches zero, per x.
    Esd(ScenarioOpts),
    /// Hard invariants plus the closed-form discrepancy report.
    Verify {
        #[command(flatten)]
        output: OutputOpts,
        /// Points per axis in the discrepancy grids.
        #[arg(long, default_value_t = DEFAULT_DENSITY)]
        density: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScenarioArg {
    Qubit,
    Qutrit,
    Multilocal,
    Collective,
    Global,
}

impl From<ScenarioArg> for NoiseKind {
    fn from(s: ScenarioArg) -> Self {
        match s {
            ScenarioArg::Qubit => NoiseKind::QubitLocal,
            ScenarioArg::Qutrit => NoiseKind::QutritLocal,
            ScenarioArg::Multilocal => NoiseKind::Multilocal,
            ScenarioArg::Collective => NoiseKind::Collective,
            ScenarioArg::Global => NoiseKind::Global,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Standard,
    Paper,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Standard => Mode::Standard,
            ModeArg::Paper => Mode::Paper,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Printed,
    Reconstructed,
}

impl From<VariantArg> for CollectiveVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Printed => CollectiveVariant::Printed,
            VariantArg::Reconstructed => CollectiveVariant::Reconstructed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ParamArg {
    P1,
    P2,
    P,
}

impl From<ParamArg> for Param {
    fn from(p: ParamArg) -> Self {
        match p {
            ParamArg::P1 => Param::P1,
            ParamArg::P2 => Param::P2,
            ParamArg::P => Param::P,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputOpts {
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct CommonOpts {
    /// Family values, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub x: Option<Vec<f64>>,
    /// Grid step of the swept parameter.
    #[arg(long, default_value_t = DEFAULT_STEP)]
    pub step: f64,
    /// Numeric evolution (standard) or closed forms (paper).
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// Reading of the collective closed form.
    #[arg(long, value_enum, default_value_t = VariantArg::Reconstructed)]
    pub variant: VariantArg,
    #[command(flatten)]
    pub output: OutputOpts,
}

#[derive(Debug, Clone, Args)]
pub struct ScenarioOpts {
    /// Noise model.
    #[arg(long, value_enum)]
    pub scenario: ScenarioArg,
    /// Fixed qubit-local parameter (also the start value if swept).
    #[arg(long, default_value_t = 0.0)]
    pub p1: f64,
    /// Fixed qutrit-local parameter.
    #[arg(long, default_value_t = 0.0)]
    pub p2: f64,
    /// Fixed collective parameter.
    #[arg(long, default_value_t = 0.0)]
    pub p: f64,
    /// Swept parameter; defaults to p1 (qubit, multilocal), p2 (qutrit) or p.
    #[arg(long = "sweep", value_enum)]
    pub swept: Option<ParamArg>,
    /// Root-finder bracketing tolerance.
    #[arg(long, default_value_t = DEFAULT_ROOT_TOL)]
    pub tol: f64,
    #[command(flatten)]
    pub common: CommonOpts,
}

impl ScenarioOpts {
    fn probe(&self, default_mode: Mode) -> Result<Probe> {
        let kind: NoiseKind = self.scenario.into();
        let swept = self.swept.map(Param::from).unwrap_or_else(|| default_swept(kind));
        // Parameters the kind does not use must stay at zero.
        let value = |param: Param, v: f64| if kind.uses(param) { v } else { 0.0 };
        for (param, v) in [(Param::P1, self.p1), (Param::P2, self.p2), (Param::P, self.p)] {
            if !kind.uses(param) && v != 0.0 {
                return Err(Error::Unsupported(format!("{kind} scenario does not use --{param}")));
            }
        }
        let scenario = NoiseScenario::new(
            kind,
            value(Param::P1, self.p1),
            value(Param::P2, self.p2),
            value(Param::P, self.p),
        )?;
        let mode = self.common.mode.map(Mode::from).unwrap_or(default_mode);
        Ok(Probe::new(scenario, swept, mode)?.with_variant(self.common.variant.into()))
    }
}

/// Formats with 12 significant digits in positional notation.
pub fn format_sig12(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let magnitude = v.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).max(0) as usize;
    let s = format!("{v:.decimals$}");
    // Normalise "-0.000" style output.
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        "0".into()
    } else {
        s
    }
}

pub fn records_to_csv(records: &[SweepRecord]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.scenario,
            r.mode,
            format_sig12(r.p1),
            format_sig12(r.p2),
            format_sig12(r.p),
            format_sig12(r.x),
            format_sig12(r.negativity),
            format_sig12(r.min_pt_eigenvalue),
        );
    }
    out
}

fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Sweep records for figure `id`.
pub fn figure_records(
    id: u8,
    x_values: Option<Vec<f64>>,
    step: f64,
    mode: Mode,
    variant: CollectiveVariant,
    fig4_pairs: Option<Vec<(f64, f64)>>,
) -> Result<Vec<SweepRecord>> {
    let xs = x_values.unwrap_or_else(|| DEFAULT_X_VALUES.to_vec());
    let params = param_grid(step)?;
    let run = |scenario: NoiseScenario, swept: Param, xs: Vec<f64>| {
        let mut grid = SweepGrid::new(scenario, swept, mode);
        grid.x_values = xs;
        grid.param_values = params.clone();
        grid.variant = variant;
        sweep(&grid)
    };
    match id {
        1 => run(NoiseScenario::qubit_local(0.0)?, Param::P1, xs),
        2 => run(NoiseScenario::qutrit_local(0.0)?, Param::P2, xs),
        3 => run(NoiseScenario::multilocal(0.0, 0.3)?, Param::P1, xs),
        4 => {
            let pairs = fig4_pairs.unwrap_or_else(|| FIG4_PAIRS.to_vec());
            let mut out = Vec::new();
            for (p2, x) in pairs {
                out.extend(run(NoiseScenario::multilocal(0.0, p2)?, Param::P1, vec![x])?);
            }
            // Stable: pair order is kept within equal x.
            out.sort_by(|a, b| a.x.total_cmp(&b.x));
            Ok(out)
        }
        5 => run(NoiseScenario::collective(0.0)?, Param::P, xs),
        6 => run(
            NoiseScenario::global(GLOBAL_LOCAL_PARAM, GLOBAL_LOCAL_PARAM, 0.0)?,
            Param::P,
            xs,
        ),
        _ => Err(Error::Unsupported(format!("figure id {id} (expected 1..6)"))),
    }
}

fn parse_pairs(raw: &[String]) -> Result<Vec<(f64, f64)>> {
    raw.iter()
        .map(|s| {
            let (a, b) = s
                .split_once(':')
                .ok_or_else(|| Error::Unsupported(format!("pair '{s}' is not p2:x")))?;
            let parse = |t: &str| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Unsupported(format!("bad number '{t}'")))
            };
            Ok((parse(a)?, parse(b)?))
        })
        .collect()
}

#[derive(Debug, Serialize)]
struct CriticalRow {
    scenario: NoiseKind,
    mode: Mode,
    swept: Param,
    xa: f64,
    xb: f64,
    critical_point: f64,
}

#[derive(Debug, Serialize)]
struct EsdRow {
    scenario: NoiseKind,
    mode: Mode,
    swept: Param,
    x: f64,
    onset: Option<f64>,
    kind: &'static str,
}

#[derive(Debug, Serialize)]
pub struct VerifyOutput {
    pub passed: bool,
    pub checks: Vec<CheckResult>,
    pub report: DiscrepancyReport,
}

pub fn critical_rows_csv(probe: &Probe, xa: f64, xb: f64, roots: &[f64]) -> String {
    let mut out = format!("{CRITICAL_HEADER}\n");
    for r in roots {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            probe.scenario.kind(),
            probe.mode,
            probe.swept,
            format_sig12(xa),
            format_sig12(xb),
            format_sig12(*r)
        );
    }
    out
}

fn report_csv(v: &VerifyOutput) -> String {
    let mut out = String::from(
        "formula,scenario,comparison,max_abs_deviation,p1,p2,p,x,zero_noise_deviation,agrees_at_zero_noise,max_abs_deviation_vs_standard\n",
    );
    let opt = |o: Option<f64>| o.map(format_sig12).unwrap_or_default();
    for e in &v.report.entries {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            e.formula,
            e.scenario,
            e.comparison,
            format_sig12(e.max_abs_deviation),
            format_sig12(e.location.p1),
            format_sig12(e.location.p2),
            format_sig12(e.location.p),
            format_sig12(e.location.x),
            opt(e.zero_noise_deviation),
            e.agrees_at_zero_noise,
            opt(e.vs_standard.as_ref().map(|s| s.max_abs_deviation)),
        );
    }
    out
}

/// Writes `contents` to `out` through a temporary file renamed on success, or
/// to standard output when no path is given.
pub fn emit(out: Option<&Path>, contents: &str) -> Result<()> {
    match out {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(contents.as_bytes())?;
            stdout.flush()?;
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
                _ => PathBuf::from("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            tmp.write_all(contents.as_bytes())?;
            tmp.flush()?;
            tmp.persist(path).map_err(|e| Error::Io(e.error))?;
        }
    }
    Ok(())
}

fn render_records(records: &[SweepRecord], format: Format) -> Result<String> {
    match format {
        Format::Csv => Ok(records_to_csv(records)),
        Format::Json => to_json(records),
    }
}

/// Executes a parsed command, returning the exit status.
pub fn execute(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Fig { id, opts, pairs } => {
            let pairs = pairs.as_deref().map(parse_pairs).transpose()?;
            let mode = opts.mode.map(Mode::from).unwrap_or(Mode::Paper);
            let records = figure_records(id, opts.x, opts.step, mode, opts.variant.into(), pairs)?;
            emit(opts.output.out.as_deref(), &render_records(&records, opts.output.format)?)?;
            Ok(EXIT_OK)
        }
        Command::Sweep(opts) => {
            let probe = opts.probe(Mode::Standard)?;
            let mut grid = SweepGrid::new(probe.scenario, probe.swept, probe.mode);
            grid.param_values = param_grid(opts.common.step)?;
            if let Some(xs) = &opts.common.x {
                grid.x_values = xs.clone();
            }
            grid.variant = probe.variant;
            let records = sweep(&grid)?;
            emit(
                opts.common.output.out.as_deref(),
                &render_records(&records, opts.common.output.format)?,
            )?;
            Ok(EXIT_OK)
        }
        Command::Critical(opts) => {
            let probe = opts.probe(Mode::Paper)?;
            let xs = opts.common.x.clone().unwrap_or_else(|| DEFAULT_X_VALUES.to_vec());
            let (xa, xb) = match xs.as_slice() {
                [a, .., b] => (*a, *b),
                _ => {
                    return Err(Error::InvalidGrid(
                        "critical needs at least two x values".into(),
                    ))
                }
            };
            let roots = critical_point(&probe, xa, xb, opts.tol)?;
            let text = match opts.common.output.format {
                Format::Csv => critical_rows_csv(&probe, xa, xb, &roots),
                Format::Json => to_json(
                    &roots
                        .iter()
                        .map(|&r| CriticalRow {
                            scenario: probe.scenario.kind(),
                            mode: probe.mode,
                            swept: probe.swept,
                            xa,
                            xb,
                            critical_point: r,
                        })
                        .collect::<Vec<_>>(),
                )?,
            };
            emit(opts.common.output.out.as_deref(), &text)?;
            Ok(EXIT_OK)
        }
        Command::Esd(opts) => {
            let probe = opts.probe(Mode::Standard)?;
            let xs = opts.common.x.clone().unwrap_or_else(|| DEFAULT_X_VALUES.to_vec());
            let mut rows = Vec::new();
            for x in xs {
                let onset = esd_onset(&probe, x, opts.tol)?;
                rows.push(EsdRow {
                    scenario: probe.scenario.kind(),
                    mode: probe.mode,
                    swept: probe.swept,
                    x,
                    onset: onset.map(|o| o.param),
                    kind: onset.map_or("none", |o| o.kind.name()),
                });
            }
            let text = match opts.common.output.format {
                Format::Csv => {
                    let mut s = format!("{ESD_HEADER}\n");
                    for r in &rows {
                        let _ = writeln!(
                            s,
                            "{},{},{},{},{},{}",
                            r.scenario,
                            r.mode,
                            r.swept,
                            format_sig12(r.x),
                            r.onset.map(format_sig12).unwrap_or_default(),
                            r.kind
                        );
                    }
                    s
                }
                Format::Json => to_json(&rows)?,
            };
            emit(opts.common.output.out.as_deref(), &text)?;
            Ok(EXIT_OK)
        }
        Command::Verify { output, density } => {
            let checks = analysis::verify_invariants()?;
            let report = analysis::discrepancy_report(density)?;
            let passed = checks.iter().all(|c| c.passed) && report.all_agree_at_zero_noise();
            for c in &checks {
                eprintln!("[{}] {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            if !report.all_agree_at_zero_noise() {
                eprintln!("[FAIL] discrepancy-report: zero-noise deviation above tolerance");
            }
            for f in &report.findings {
                eprintln!("[INFO] {}: {}", f.name, f.detail);
            }
            let v = VerifyOutput {
                passed,
                checks,
                report,
            };
            let text = match output.format {
                Format::Csv => report_csv(&v),
                Format::Json => to_json(&v)?,
            };
            emit(output.out.as_deref(), &text)?;
            Ok(if passed { EXIT_OK } else { EXIT_INVARIANT })
        }
    }
}

/// Parses `args` and runs the command. Usage and domain errors exit with 1,
/// failed verification with 2.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(&e, Error::Unsupported(m) if m.contains("global")) {
                eprintln!("try --mode standard, or --p1 0.5 --p2 0.5 for global paper mode");
            }
            EXIT_USAGE
        }
    }
}
