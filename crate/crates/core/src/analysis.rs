//! Parameter sweeps, critical-point and sudden-death finders, and the
//! comparison of the printed closed forms against numerical Kraus evolution.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::{
    self, collective_kraus, evolve, lift_to_composite, qubit_depolarizing_kraus,
    qutrit_depolarizing_kraus, NoiseKind, NoiseScenario, Param, Side,
};
use crate::closedform::{self, CollectiveVariant};
use crate::entanglement::{self, negativity_standard, NegativityResult};
use crate::linalg::{hermitian_spectrum, DEFAULT_TOL};
use crate::states::{self, FamilyParam};
use crate::{Error, Result};

/// Family values used when none are given: both sides of the `x = 1/8` boundary.
pub const DEFAULT_X_VALUES: [f64; 7] = [0.0, 0.05, 0.10, 0.125, 0.15, 0.20, 0.25];

pub const DEFAULT_STEP: f64 = 0.01;

/// Default bracketing tolerance of the root finders.
pub const DEFAULT_ROOT_TOL: f64 = 1e-9;

/// Number of uniform sub-intervals scanned for sign changes before bisection.
const SCAN_INTERVALS: usize = 1000;

/// Offset used to classify a sudden-death onset as an interval or an isolated zero.
const ONSET_PROBE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Numerical Kraus evolution followed by the partial-transpose spectrum.
    Standard,
    /// The printed closed-form negativity.
    Paper,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Standard => "standard",
            Mode::Paper => "paper",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(Mode::Standard),
            "paper" => Ok(Mode::Paper),
            _ => Err(Error::Unsupported(format!("unknown mode '{s}'"))),
        }
    }
}

/// Parameter swept by default for each scenario kind.
pub fn default_swept(kind: NoiseKind) -> Param {
    match kind {
        NoiseKind::QubitLocal | NoiseKind::Multilocal => Param::P1,
        NoiseKind::QutritLocal => Param::P2,
        NoiseKind::Collective | NoiseKind::Global => Param::P,
    }
}

/// `0, step, 2 step, ..., 1` computed as `i / n` so grid points are exact decimals.
pub fn param_grid(step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step <= 1.0) {
        return Err(Error::InvalidGrid(format!("step {step} must lie in (0, 1]")));
    }
    let n = (1.0 / step).round() as usize;
    if ((n as f64) * step - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidGrid(format!("step {step} does not divide [0, 1]")));
    }
    Ok((0..=n).map(|i| i as f64 / n as f64).collect())
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

/// A scenario template with one swept parameter and an evaluation mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Probe {
    pub scenario: NoiseScenario,
    pub swept: Param,
    pub mode: Mode,
    pub variant: CollectiveVariant,
    /// Eigenvalues within this distance of zero count as zero in standard mode.
    pub tol: f64,
}

impl Probe {
    pub fn new(scenario: NoiseScenario, swept: Param, mode: Mode) -> Result<Self> {
        if !scenario.kind().uses(swept) {
            return Err(Error::Unsupported(format!(
                "{} scenario cannot sweep {swept}",
                scenario.kind()
            )));
        }
        Ok(Self {
            scenario,
            swept,
            mode,
            variant: CollectiveVariant::default(),
            tol: DEFAULT_TOL,
        })
    }

    /// Template with the kind's default swept parameter.
    pub fn for_kind(scenario: NoiseScenario, mode: Mode) -> Result<Self> {
        Self::new(scenario, default_swept(scenario.kind()), mode)
    }

    pub fn with_variant(mut self, variant: CollectiveVariant) -> Self {
        self.variant = variant;
        self
    }

    pub fn at(&self, value: f64) -> Result<NoiseScenario> {
        self.scenario.with(self.swept, value)
    }

    /// Negativity and its signed indicator at swept value `value`.
    pub fn evaluate(&self, value: f64, x: f64) -> Result<Evaluation> {
        evaluate(&self.at(value)?, x, self.mode, self.variant, self.tol)
    }
}

/// Result of evaluating one point.
///
/// `indicator` is the minimum partial-transpose eigenvalue in standard mode and
/// the signed expression inside the printed absolute value in paper mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub negativity: f64,
    pub indicator: f64,
}

/// Numerically evolved partial-transpose data for `rho(x)` under `scenario`.
pub fn numeric_negativity(scenario: &NoiseScenario, x: f64, tol: f64) -> Result<NegativityResult> {
    let rho = states::rho_x(x)?;
    negativity_standard(&evolve(scenario, &rho)?, tol)
}

pub fn evaluate(
    scenario: &NoiseScenario,
    x: f64,
    mode: Mode,
    variant: CollectiveVariant,
    tol: f64,
) -> Result<Evaluation> {
    match mode {
        Mode::Standard => {
            let r = numeric_negativity(scenario, x, tol)?;
            Ok(Evaluation {
                negativity: r.negativity,
                indicator: r.min_eigenvalue,
            })
        }
        Mode::Paper => {
            let n = closedform::negativity_paper(scenario, x, variant)?;
            Ok(Evaluation {
                negativity: n.value,
                indicator: n.inner,
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub scenario: NoiseScenario,
    pub swept: Param,
    pub param_values: Vec<f64>,
    pub x_values: Vec<f64>,
    pub mode: Mode,
    pub variant: CollectiveVariant,
    pub tol: f64,
}

impl SweepGrid {
    /// Default axes: 101 parameter points and [`DEFAULT_X_VALUES`].
    pub fn new(scenario: NoiseScenario, swept: Param, mode: Mode) -> Self {
        Self {
            scenario,
            swept,
            param_values: param_grid(DEFAULT_STEP).expect("valid default step"),
            x_values: DEFAULT_X_VALUES.to_vec(),
            mode,
            variant: CollectiveVariant::default(),
            tol: DEFAULT_TOL,
        }
    }

    fn validate(&self) -> Result<Probe> {
        let ascending = |v: &[f64]| v.windows(2).all(|w| w[0] < w[1]);
        if self.param_values.is_empty() || self.x_values.is_empty() {
            return Err(Error::InvalidGrid("empty value list".into()));
        }
        if !ascending(&self.param_values) || !ascending(&self.x_values) {
            return Err(Error::InvalidGrid("values must be strictly ascending".into()));
        }
        for &x in &self.x_values {
            FamilyParam::new(x)?;
        }
        let probe = Probe::new(self.scenario, self.swept, self.mode)?.with_variant(self.variant);
        let probe = Probe { tol: self.tol, ..probe };
        for &v in &self.param_values {
            probe.at(v)?;
        }
        Ok(probe)
    }
}

/// One evaluated grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRecord {
    pub scenario: NoiseKind,
    pub mode: Mode,
    pub p1: f64,
    pub p2: f64,
    pub p: f64,
    pub x: f64,
    pub negativity: f64,
    /// Minimum partial-transpose eigenvalue (standard) or the signed printed
    /// expression (paper).
    pub min_pt_eigenvalue: f64,
}

/// Evaluates every `(x, parameter)` point, ordered by `x` then parameter.
pub fn sweep(grid: &SweepGrid) -> Result<Vec<SweepRecord>> {
    let probe = grid.validate()?;
    let points: Vec<(f64, f64)> = grid
        .x_values
        .iter()
        .flat_map(|&x| grid.param_values.iter().map(move |&v| (x, v)))
        .collect();
    points
        .par_iter()
        .map(|&(x, v)| {
            let scenario = probe.at(v)?;
            let e = evaluate(&scenario, x, probe.mode, probe.variant, probe.tol)?;
            Ok(SweepRecord {
                scenario: scenario.kind(),
                mode: probe.mode,
                p1: scenario.p1(),
                p2: scenario.p2(),
                p: scenario.p(),
                x,
                negativity: e.negativity,
                min_pt_eigenvalue: e.indicator,
            })
        })
        .collect()
}

/// Interval `[lo, hi]` whose endpoint values have opposite signs (or one is zero).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

impl Bracket {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Bisection on a sign-changing bracket until its width is at most `tol`.
pub fn bisect<F>(f: F, lo: f64, hi: f64, tol: f64) -> Result<Bracket>
where
    F: Fn(f64) -> Result<f64>,
{
    let (mut lo, mut hi) = (lo, hi);
    let (mut f_lo, mut f_hi) = (f(lo)?, f(hi)?);
    if f_lo * f_hi > 0.0 {
        return Err(Error::InvalidGrid(format!(
            "no sign change on [{lo}, {hi}]: f = {f_lo:e}, {f_hi:e}"
        )));
    }
    for _ in 0..200 {
        if hi - lo <= tol || f_lo == 0.0 || f_hi == 0.0 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid)?;
        if f_lo * f_mid <= 0.0 {
            hi = mid;
            f_hi = f_mid;
        } else {
            lo = mid;
            f_lo = f_mid;
        }
    }
    if f_lo == 0.0 {
        hi = lo;
        f_hi = f_lo;
    } else if f_hi == 0.0 {
        lo = hi;
        f_lo = f_hi;
    }
    Ok(Bracket { lo, hi, f_lo, f_hi })
}

/// All roots of `f` on `[lo, hi]` found by a uniform sign-change scan and
/// bisection. Grid points where `f` is exactly zero count as roots only when
/// isolated (runs of zeros are skipped).
pub fn scan_roots<F>(f: F, lo: f64, hi: f64, intervals: usize, tol: f64) -> Result<Vec<Bracket>>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let grid = linspace(lo, hi, intervals + 1);
    let values: Vec<f64> = grid.par_iter().map(|&t| f(t)).collect::<Result<_>>()?;
    let mut roots: Vec<Bracket> = Vec::new();
    for i in 0..values.len() {
        let v = values[i];
        if v == 0.0 {
            let left = i.checked_sub(1).map(|j| values[j]);
            let right = values.get(i + 1).copied();
            if left != Some(0.0) && right != Some(0.0) {
                roots.push(Bracket {
                    lo: grid[i],
                    hi: grid[i],
                    f_lo: 0.0,
                    f_hi: 0.0,
                });
            }
            continue;
        }
        if let Some(&next) = values.get(i + 1) {
            if next != 0.0 && v * next < 0.0 {
                roots.push(bisect(&f, grid[i], grid[i + 1], tol)?);
            }
        }
    }
    Ok(roots)
}

/// Swept-parameter values where the negativity is the same for `xa` and `xb`.
///
/// Paper mode compares the signed printed expressions, so coincidences created
/// only by the absolute value (`inner(xa) = -inner(xb)`) are not reported.
/// Standard mode compares the negativities themselves.
pub fn critical_point(probe: &Probe, xa: f64, xb: f64, tol: f64) -> Result<Vec<f64>> {
    FamilyParam::new(xa)?;
    FamilyParam::new(xb)?;
    if xa == xb {
        return Err(Error::InvalidGrid("critical_point needs two distinct x values".into()));
    }
    let diff = |t: f64| -> Result<f64> {
        let a = probe.evaluate(t, xa)?;
        let b = probe.evaluate(t, xb)?;
        Ok(match probe.mode {
            Mode::Paper => a.indicator - b.indicator,
            Mode::Standard => a.negativity - b.negativity,
        })
    };
    Ok(scan_roots(diff, 0.0, 1.0, SCAN_INTERVALS, tol)?
        .into_iter()
        .map(|b| b.midpoint())
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OnsetKind {
    /// Negativity stays at zero past the onset: genuine sudden death.
    Interval,
    /// Negativity touches zero and immediately becomes positive again.
    Isolated,
}

impl OnsetKind {
    pub fn name(self) -> &'static str {
        match self {
            OnsetKind::Interval => "interval",
            OnsetKind::Isolated => "isolated",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EsdOnset {
    pub param: f64,
    pub kind: OnsetKind,
    #[serde(skip)]
    pub bracket: Bracket,
}

/// Smallest swept value at which the negativity of `rho(x)` reaches zero.
///
/// Standard mode locates the first upward crossing of the minimum
/// partial-transpose eigenvalue through zero; paper mode the first root of the
/// printed inner expression. A state that is not entangled at the start of the
/// sweep reports an onset at `0`.
pub fn esd_onset(probe: &Probe, x: f64, tol: f64) -> Result<Option<EsdOnset>> {
    FamilyParam::new(x)?;
    let indicator = |t: f64| probe.evaluate(t, x).map(|e| e.indicator);
    let grid = linspace(0.0, 1.0, SCAN_INTERVALS + 1);
    let values: Vec<f64> = grid.par_iter().map(|&t| indicator(t)).collect::<Result<_>>()?;

    let reached = |v: f64| match probe.mode {
        Mode::Standard => v >= -probe.tol,
        Mode::Paper => v == 0.0,
    };

    let mut bracket = None;
    if reached(values[0]) {
        bracket = Some(Bracket {
            lo: 0.0,
            hi: 0.0,
            f_lo: values[0],
            f_hi: values[0],
        });
    } else {
        for i in 0..SCAN_INTERVALS {
            let (a, b) = (values[i], values[i + 1]);
            if reached(b) || a * b < 0.0 {
                bracket = Some(bisect(indicator, grid[i], grid[i + 1], tol)?);
                break;
            }
        }
    }
    let Some(bracket) = bracket else {
        return Ok(None);
    };

    let param = bracket.midpoint();
    let after = (param + ONSET_PROBE).min(1.0);
    let n_after = probe.evaluate(after, x)?.negativity;
    let kind = if n_after <= probe.tol {
        OnsetKind::Interval
    } else {
        OnsetKind::Isolated
    };
    Ok(Some(EsdOnset {
        param,
        kind,
        bracket,
    }))
}

/// Parameter assignment at which a deviation was observed.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Location {
    pub p1: f64,
    pub p2: f64,
    pub p: f64,
    pub x: f64,
}

/// Deviation of a printed negativity from the numerically evolved one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StandardComparison {
    pub max_abs_deviation: f64,
    pub location: Location,
    pub zero_noise_deviation: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscrepancyEntry {
    pub formula: String,
    pub scenario: NoiseKind,
    /// What the printed expression is measured against.
    pub comparison: String,
    pub max_abs_deviation: f64,
    pub location: Location,
    /// Deviation at `p1 = p2 = p = 0`; `None` when that point is outside the
    /// expression's domain.
    pub zero_noise_deviation: Option<f64>,
    pub agrees_at_zero_noise: bool,
    /// Negativity entries only: deviation from the standard negativity.
    pub vs_standard: Option<StandardComparison>,
}

/// A single reported value that is not a grid maximum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Finding {
    pub name: String,
    pub value: Option<f64>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscrepancyReport {
    pub grid_density: usize,
    pub entries: Vec<DiscrepancyEntry>,
    pub findings: Vec<Finding>,
}

/// Zero-noise agreement threshold.
pub const ZERO_NOISE_TOL: f64 = 1e-12;

impl DiscrepancyReport {
    pub fn entry(&self, formula: &str, comparison_prefix: &str) -> Option<&DiscrepancyEntry> {
        self.entries
            .iter()
            .find(|e| e.formula == formula && e.comparison.starts_with(comparison_prefix))
    }

    pub fn finding(&self, name: &str) -> Option<&Finding> {
        self.findings.iter().find(|f| f.name == name)
    }

    pub fn all_agree_at_zero_noise(&self) -> bool {
        self.entries.iter().all(|e| e.agrees_at_zero_noise)
    }
}

#[derive(Default)]
struct MaxTracker {
    max: f64,
    location: Location,
    zero_noise: Option<f64>,
    seen: bool,
}

impl MaxTracker {
    fn push(&mut self, deviation: f64, location: Location) {
        if !self.seen || deviation > self.max {
            self.seen = true;
            self.max = deviation;
            self.location = location;
        }
        if location.p1 == 0.0 && location.p2 == 0.0 && location.p == 0.0 {
            self.zero_noise = Some(self.zero_noise.map_or(deviation, |z: f64| z.max(deviation)));
        }
    }
}

fn sorted_max_deviation(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    a.iter().zip(&b).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max)
}

fn nearest_distance(values: &[f64], target: f64) -> f64 {
    values
        .iter()
        .map(|v| (v - target).abs())
        .fold(f64::INFINITY, f64::min)
}

/// A grid point: `(closed-form location, numeric scenario)`.
type Point = (Location, NoiseScenario);

fn numeric_points(points: &[Point]) -> Result<Vec<NegativityResult>> {
    points
        .par_iter()
        .map(|(loc, s)| numeric_negativity(s, loc.x, DEFAULT_TOL))
        .collect()
}

fn entry_from(
    formula: &str,
    scenario: NoiseKind,
    comparison: &str,
    tracker: MaxTracker,
    vs_standard: Option<StandardComparison>,
) -> DiscrepancyEntry {
    DiscrepancyEntry {
        formula: formula.into(),
        scenario,
        comparison: comparison.into(),
        max_abs_deviation: tracker.max,
        location: tracker.location,
        zero_noise_deviation: tracker.zero_noise,
        agrees_at_zero_noise: tracker.zero_noise.is_none_or(|z| z <= ZERO_NOISE_TOL),
        vs_standard,
    }
}

/// Compares every printed spectrum and negativity with numerical evolution on a
/// `density`-point grid per axis (`x` spans `[0, 1/4]`, parameters `[0, 1]`).
pub fn discrepancy_report(density: usize) -> Result<DiscrepancyReport> {
    if density < 2 {
        return Err(Error::InvalidGrid(format!("grid density {density} < 2")));
    }
    let ps = linspace(0.0, 1.0, density);
    let xs = linspace(0.0, FamilyParam::MAX, density);
    let loc = |p1: f64, p2: f64, p: f64, x: f64| Location { p1, p2, p, x };

    let mut qubit_pts: Vec<Point> = Vec::new();
    let mut qutrit_pts: Vec<Point> = Vec::new();
    let mut collective_pts: Vec<Point> = Vec::new();
    let mut global_pts: Vec<Point> = Vec::new();
    for &x in &xs {
        for &t in &ps {
            qubit_pts.push((loc(t, 0.0, 0.0, x), NoiseScenario::qubit_local(t)?));
            qutrit_pts.push((loc(0.0, t, 0.0, x), NoiseScenario::qutrit_local(t)?));
            collective_pts.push((loc(0.0, 0.0, t, x), NoiseScenario::collective(t)?));
            global_pts.push((
                loc(closedform::GLOBAL_LOCAL_PARAM, closedform::GLOBAL_LOCAL_PARAM, t, x),
                NoiseScenario::global(closedform::GLOBAL_LOCAL_PARAM, closedform::GLOBAL_LOCAL_PARAM, t)?,
            ));
        }
    }
    let mut multi_pts: Vec<Point> = Vec::new();
    let mut multi_swapped: Vec<Point> = Vec::new();
    for &x in &xs {
        for &p1 in &ps {
            for &p2 in &ps {
                multi_pts.push((loc(p1, p2, 0.0, x), NoiseScenario::multilocal(p1, p2)?));
                multi_swapped.push((loc(p1, p2, 0.0, x), NoiseScenario::multilocal(p2, p1)?));
            }
        }
    }

    let qubit_num = numeric_points(&qubit_pts)?;
    let qutrit_num = numeric_points(&qutrit_pts)?;
    let multi_num = numeric_points(&multi_pts)?;
    let multi_swapped_num = numeric_points(&multi_swapped)?;
    let collective_num = numeric_points(&collective_pts)?;
    let global_num = numeric_points(&global_pts)?;

    let mut entries = Vec::new();

    // Spectra.
    type SpectrumFn = fn(&Location) -> Result<closedform::ScenarioEigenvalues>;
    let qubit: SpectrumFn = |l| closedform::eigenvalues_qubit_only(l.p1, l.x);
    let qubit_swapped: SpectrumFn = |l| closedform::eigenvalues_qubit_only(l.p2, l.x);
    let qutrit: SpectrumFn = |l| closedform::eigenvalues_qutrit_only(0.0, l.p2, l.x);
    let qutrit_swapped: SpectrumFn = |l| closedform::eigenvalues_qutrit_only(0.0, l.p1, l.x);
    let multi: SpectrumFn = |l| closedform::eigenvalues_multilocal(l.p1, l.p2, l.x);
    const SPECTRUM: &str = "sorted spectrum vs numeric PT spectrum";
    const SPECTRUM_SWAPPED: &str =
        "sorted spectrum vs numeric PT spectrum with qubit and qutrit channels exchanged";
    type SpectrumCase<'a> = (&'a str, NoiseKind, &'a str, SpectrumFn, &'a [Point], &'a [NegativityResult]);
    let spectrum_cases: [SpectrumCase; 6] = [
        ("qubit-spectrum", NoiseKind::QubitLocal, SPECTRUM, qubit, &qubit_pts, &qubit_num),
        ("qutrit-spectrum", NoiseKind::QutritLocal, SPECTRUM, qutrit, &qutrit_pts, &qutrit_num),
        ("multilocal-spectrum", NoiseKind::Multilocal, SPECTRUM, multi, &multi_pts, &multi_num),
        // Same closed forms against the other subsystem's channel at the same strength.
        ("qubit-spectrum", NoiseKind::QutritLocal, SPECTRUM_SWAPPED, qubit_swapped, &qutrit_pts, &qutrit_num),
        ("qutrit-spectrum", NoiseKind::QubitLocal, SPECTRUM_SWAPPED, qutrit_swapped, &qubit_pts, &qubit_num),
        ("multilocal-spectrum", NoiseKind::Multilocal, SPECTRUM_SWAPPED, multi, &multi_swapped, &multi_swapped_num),
    ];
    for (label, kind, comparison, f, pts, num) in spectrum_cases {
        let mut t = MaxTracker::default();
        for ((l, _), n) in pts.iter().zip(num) {
            let closed = f(l)?;
            t.push(sorted_max_deviation(&closed.lambda, &n.spectrum.eigenvalues), *l);
        }
        entries.push(entry_from(label, kind, comparison, t, None));
    }

    // Unit-trace defects of the printed spectra.
    {
        let mut cases: Vec<(&str, NoiseKind, MaxTracker)> = Vec::new();
        let mut t5 = MaxTracker::default();
        let mut t6 = MaxTracker::default();
        let mut t7 = MaxTracker::default();
        for &x in &xs {
            for &a in &ps {
                t5.push((closedform::eigenvalues_qubit_only(a, x)?.sum() - 1.0).abs(), loc(a, 0.0, 0.0, x));
                for &b in &ps {
                    // Printed qutrit-only spectrum, including its p1 terms.
                    t6.push(
                        (closedform::eigenvalues_qutrit_only(a, b, x)?.sum() - 1.0).abs(),
                        loc(a, b, 0.0, x),
                    );
                    t7.push(
                        (closedform::eigenvalues_multilocal(a, b, x)?.sum() - 1.0).abs(),
                        loc(a, b, 0.0, x),
                    );
                }
            }
        }
        cases.push(("qubit-spectrum", NoiseKind::QubitLocal, t5));
        cases.push(("qutrit-spectrum", NoiseKind::QutritLocal, t6));
        cases.push(("multilocal-spectrum", NoiseKind::Multilocal, t7));
        for (label, kind, t) in cases {
            entries.push(entry_from(label, kind, "eigenvalue sum vs 1", t, None));
        }
    }

    // Negativities.
    type Neg = fn(&Location) -> Result<closedform::PaperNegativity>;
    let qubit_neg: Neg = |l| closedform::negativity_paper_qubit(l.p1, l.x);
    let qutrit_neg: Neg = |l| closedform::negativity_paper_qutrit(l.p2, l.x);
    let multi_neg: Neg = |l| closedform::negativity_paper_multilocal(l.p1, l.p2, l.x);
    let collective_printed: Neg = |l| closedform::negativity_paper_collective(l.p, l.x, CollectiveVariant::Printed);
    let collective_recon: Neg = |l| closedform::negativity_paper_collective(l.p, l.x, CollectiveVariant::Reconstructed);
    let global_neg: Neg = |l| closedform::negativity_paper_global_half(l.p, l.x);
    type NegativityCase<'a> = (&'a str, NoiseKind, Neg, &'a [Point], &'a [NegativityResult]);
    let negativity_cases: [NegativityCase; 6] = [
        ("qubit-negativity", NoiseKind::QubitLocal, qubit_neg, &qubit_pts, &qubit_num),
        ("qutrit-negativity", NoiseKind::QutritLocal, qutrit_neg, &qutrit_pts, &qutrit_num),
        ("multilocal-negativity", NoiseKind::Multilocal, multi_neg, &multi_pts, &multi_num),
        ("collective-negativity-printed", NoiseKind::Collective, collective_printed, &collective_pts, &collective_num),
        ("collective-negativity-reconstructed", NoiseKind::Collective, collective_recon, &collective_pts, &collective_num),
        ("global-negativity", NoiseKind::Global, global_neg, &global_pts, &global_num),
    ];
    for (label, kind, f, pts, num) in negativity_cases {
        let mut vs_min = MaxTracker::default();
        let mut vs_std = MaxTracker::default();
        for ((l, _), n) in pts.iter().zip(num) {
            let paper = f(l)?.value;
            vs_min.push((paper - n.min_eigenvalue.abs()).abs(), *l);
            vs_std.push((paper - n.negativity).abs(), *l);
        }
        let std = StandardComparison {
            max_abs_deviation: vs_std.max,
            location: vs_std.location,
            zero_noise_deviation: vs_std.zero_noise,
        };
        entries.push(entry_from(
            label,
            kind,
            "printed negativity vs |min numeric PT eigenvalue|",
            vs_min,
            Some(std),
        ));
    }

    // Printed multilocal l6 against the nearest numeric eigenvalue, both orientations.
    for (comparison, pts, num) in [
        ("printed l6 vs nearest numeric PT eigenvalue", &multi_pts, &multi_num),
        (
            "printed l6 vs nearest numeric PT eigenvalue with qubit and qutrit channels exchanged",
            &multi_swapped,
            &multi_swapped_num,
        ),
    ] {
        let mut t = MaxTracker::default();
        for ((l, _), n) in pts.iter().zip(num.iter()) {
            let l6 = closedform::eigenvalues_multilocal(l.p1, l.p2, l.x)?.lambda6();
            t.push(nearest_distance(&n.spectrum.eigenvalues, l6), *l);
        }
        entries.push(entry_from("multilocal-spectrum", NoiseKind::Multilocal, comparison, t, None));
    }

    // Printed global l6 against the nearest numeric eigenvalue.
    {
        let mut t = MaxTracker::default();
        for ((l, _), n) in global_pts.iter().zip(&global_num) {
            let l6 = closedform::lambda6_global_half(l.p, l.x)?;
            t.push(nearest_distance(&n.spectrum.eigenvalues, l6), *l);
        }
        entries.push(entry_from(
            "global-l6",
            NoiseKind::Global,
            "printed l6 vs nearest numeric PT eigenvalue",
            t,
            None,
        ));
    }

    // Internal consistency of the two printed global expressions.
    {
        let mut t = MaxTracker::default();
        for (l, _) in &global_pts {
            let gap = (closedform::negativity_paper_global_half(l.p, l.x)?.value
                - closedform::lambda6_global_half(l.p, l.x)?.abs())
            .abs();
            t.push(gap, *l);
        }
        entries.push(entry_from("global-negativity", NoiseKind::Global, "printed negativity vs |printed l6|", t, None));
    }

    Ok(DiscrepancyReport {
        grid_density: density,
        entries,
        findings: findings()?,
    })
}

fn findings() -> Result<Vec<Finding>> {
    let mut out = Vec::new();

    let g10 = closedform::negativity_paper_global_half(0.0, 0.0)?.value;
    let g9 = closedform::lambda6_global_half(0.0, 0.0)?;
    out.push(Finding {
        name: "global-negativity-vs-l6-at-origin".into(),
        value: Some((g10 - g9.abs()).abs()),
        detail: format!("p = 0, x = 0: printed negativity {g10:.12}, |l6| {:.12}", g9.abs()),
    });

    let printed = closedform::negativity_paper_collective(0.5, 0.125, CollectiveVariant::Printed)?.value;
    let recon = closedform::negativity_paper_collective(0.5, 0.125, CollectiveVariant::Reconstructed)?.value;
    out.push(Finding {
        name: "collective-printed-vs-reconstructed".into(),
        value: Some((printed - recon).abs()),
        detail: format!("p = 1/2, x = 1/8: printed {printed:.12}, reconstructed {recon:.12}"),
    });

    out.push(Finding {
        name: "initial-family-ppt-boundary".into(),
        value: Some(states::PPT_BOUNDARY),
        detail: "at zero noise the minimum PT eigenvalue of rho(x) is 1/8 - x; \
                 rho(x) is PPT (separable) for x <= 1/8 and entangled only for 1/8 < x <= 1/4"
            .into(),
    });

    let roots = closedform::collective_critical_roots();
    out.push(Finding {
        name: "collective-reconstructed-critical-roots".into(),
        value: None,
        detail: format!("{:.6}, {:.6}", roots[0], roots[1]),
    });

    // Window of p2 in which the printed multilocal negativity at x = 1/4 is
    // non-decreasing in p1 over the whole [0, 1] range.
    let p1s = linspace(0.0, 1.0, 1001);
    let increasing: Vec<f64> = linspace(0.0, 1.0, 10001)
        .into_iter()
        .filter(|&p2| {
            let vals: Vec<f64> = p1s
                .iter()
                .map(|&p1| closedform::negativity_paper_multilocal(p1, p2, 0.25).map(|n| n.value).unwrap_or(f64::NAN))
                .collect();
            vals.windows(2).all(|w| w[1] >= w[0] - 1e-15)
        })
        .collect();
    match (increasing.first(), increasing.last()) {
        (Some(lo), Some(hi)) => out.push(Finding {
            name: "multilocal-paper-increasing-window".into(),
            value: None,
            detail: format!(
                "x = 1/4: printed negativity non-decreasing in p1 for p2 in [{lo:.4}, {hi:.4}]"
            ),
        }),
        _ => out.push(Finding {
            name: "multilocal-paper-increasing-window".into(),
            value: None,
            detail: "x = 1/4: no p2 with non-decreasing printed negativity".into(),
        }),
    }

    // Sudden death and regrowth at x = 1/4 in both modes.
    let templates = [
        NoiseScenario::qubit_local(0.0)?,
        NoiseScenario::qutrit_local(0.0)?,
        NoiseScenario::multilocal(0.0, 0.3)?,
        NoiseScenario::collective(0.0)?,
        NoiseScenario::global(closedform::GLOBAL_LOCAL_PARAM, closedform::GLOBAL_LOCAL_PARAM, 0.0)?,
    ];
    for scenario in templates {
        for mode in [Mode::Standard, Mode::Paper] {
            let probe = Probe::for_kind(scenario, mode)?;
            let onset = esd_onset(&probe, 0.25, DEFAULT_ROOT_TOL)?;
            let (value, detail) = match onset {
                None => (None, "no zero of negativity on [0, 1]".to_string()),
                Some(o) => {
                    let regrows = param_grid(DEFAULT_STEP)?
                        .into_iter()
                        .filter(|&t| t > o.param + ONSET_PROBE)
                        .map(|t| probe.evaluate(t, 0.25).map(|e| e.negativity > probe.tol))
                        .collect::<Result<Vec<bool>>>()?
                        .into_iter()
                        .any(|b| b);
                    (
                        Some(o.param),
                        format!(
                            "onset {:.9} ({}), negativity {} after onset",
                            o.param,
                            o.kind.name(),
                            if regrows { "regrows" } else { "stays zero" }
                        ),
                    )
                }
            };
            out.push(Finding {
                name: format!("esd-{}-{}-sweep-{}-x0.25", scenario.kind(), mode, probe.swept),
                value,
                detail,
            });
        }
    }
    Ok(out)
}

/// Outcome of one hard invariant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &str, worst: f64, bound: f64) -> CheckResult {
    CheckResult {
        name: name.into(),
        passed: worst <= bound,
        detail: format!("worst {worst:.3e}, bound {bound:.0e}"),
    }
}

/// Deterministic density matrices used by the invariant checks: the family,
/// its evolved images, and mixtures with product states.
fn probe_states() -> Result<Vec<crate::linalg::Matrix>> {
    use crate::linalg::Matrix;
    use num_complex::Complex64;
    let mut out = Vec::new();
    for &x in &DEFAULT_X_VALUES {
        out.push(states::rho_x(x)?);
    }
    let a = Matrix::new(
        2,
        2,
        vec![
            Complex64::new(0.6, 0.0),
            Complex64::new(0.1, 0.3),
            Complex64::new(0.1, -0.3),
            Complex64::new(0.4, 0.0),
        ],
    )?;
    let b = Matrix::new(
        3,
        3,
        vec![
            Complex64::new(0.5, 0.0),
            Complex64::new(0.1, -0.1),
            Complex64::new(0.0, 0.2),
            Complex64::new(0.1, 0.1),
            Complex64::new(0.3, 0.0),
            Complex64::new(0.05, 0.0),
            Complex64::new(0.0, -0.2),
            Complex64::new(0.05, 0.0),
            Complex64::new(0.2, 0.0),
        ],
    )?;
    let product = a.kron(&b);
    out.push(product.clone());
    out.push(product.scale_real(0.5).add(&states::rho_x(0.25)?.scale_real(0.5))?);
    Ok(out)
}

/// Runs the hard invariants: channel completeness, trace/positivity/Hermiticity
/// of evolved states, channel oracle identities, partial-transpose involution,
/// zero-noise negativity, the closed-form reduction lattice, the global/multilocal
/// consistency and the critical-point roots.
pub fn verify_invariants() -> Result<Vec<CheckResult>> {
    let grid = param_grid(0.1)?;
    let mut out = Vec::new();

    let mut worst: f64 = 0.0;
    for &p in &grid {
        let q = qubit_depolarizing_kraus(p)?;
        let t = qutrit_depolarizing_kraus(p)?;
        for set in [
            lift_to_composite(&q, Side::Qubit)?,
            lift_to_composite(&t, Side::Qutrit)?,
            collective_kraus(p)?,
            q,
            t,
        ] {
            worst = worst.max(set.completeness_defect());
        }
    }
    out.push(check("kraus-completeness", worst, 1e-12));

    let mut trace_dev: f64 = 0.0;
    let mut herm_dev: f64 = 0.0;
    let mut min_eig: f64 = 0.0;
    let xs = [0.0, 0.125, 0.25];
    for &p1 in &grid {
        for &p2 in &grid {
            for &p in &grid {
                let s = NoiseScenario::global(p1, p2, p)?;
                for &x in &xs {
                    let out = evolve(&s, &states::rho_x(x)?)?;
                    trace_dev = trace_dev.max((out.trace()?.re - 1.0).abs());
                    herm_dev = herm_dev.max(out.hermitian_defect());
                    min_eig = min_eig.min(hermitian_spectrum(&out, 1e-12)?.min());
                }
            }
        }
    }
    out.push(check("evolved-trace", trace_dev, 1e-12));
    out.push(check("evolved-hermiticity", herm_dev, 1e-12));
    out.push(check("evolved-positivity", (-min_eig).max(0.0), 1e-10));

    let mut oracle: f64 = 0.0;
    let mut involution: f64 = 0.0;
    for rho in probe_states()? {
        for &p in &grid {
            let q = evolve(&NoiseScenario::qubit_local(p)?, &rho)?;
            oracle = oracle.max(q.max_abs_diff(&channels::qubit_channel_identity(&rho, p))?);
            let t = evolve(&NoiseScenario::qutrit_local(p)?, &rho)?;
            oracle = oracle.max(t.max_abs_diff(&channels::qutrit_channel_identity(&rho, p))?);
        }
        let pt = entanglement::partial_transpose_qubit(&rho)?;
        involution = involution.max(entanglement::partial_transpose_qubit(&pt)?.max_abs_diff(&rho)?);
        involution = involution.max((pt.trace()? - rho.trace()?).norm());
    }
    out.push(check("channel-oracle-identities", oracle, 1e-12));
    out.push(check("partial-transpose-involution", involution, 1e-13));

    let mut zero_noise: f64 = 0.0;
    for x in param_grid(0.01)?.into_iter().filter(|&x| x <= FamilyParam::MAX) {
        let n = negativity_standard(&states::rho_x(x)?, DEFAULT_TOL)?.negativity;
        zero_noise = zero_noise.max((n - (x - 0.125).max(0.0)).abs());
    }
    out.push(check("zero-noise-negativity", zero_noise, 1e-12));

    let mut lattice: f64 = 0.0;
    let mut global: f64 = 0.0;
    let fine = linspace(0.0, 1.0, 20);
    let fine_x = linspace(0.0, FamilyParam::MAX, 20);
    for &t in &fine {
        for &x in &fine_x {
            let m1 = closedform::eigenvalues_multilocal(t, 0.0, x)?;
            let q = closedform::eigenvalues_qubit_only(t, x)?;
            let m2 = closedform::eigenvalues_multilocal(0.0, t, x)?;
            let r = closedform::eigenvalues_qutrit_only(0.0, t, x)?;
            for i in 4..6 {
                lattice = lattice.max((m1.lambda[i] - q.lambda[i]).abs());
                lattice = lattice.max((m2.lambda[i] - r.lambda[i]).abs());
            }
            let c = closedform::negativity_paper_collective(t, x, CollectiveVariant::Reconstructed)?.inner;
            lattice = lattice.max((c - closedform::eigenvalues_multilocal(t, t, x)?.lambda6()).abs());
        }
    }
    for &x in &fine_x {
        let g = closedform::lambda6_global_half(0.0, x)?;
        let m = closedform::eigenvalues_multilocal(0.5, 0.5, x)?.lambda6();
        global = global.max((g - m).abs());
    }
    out.push(check("closed-form-reduction-lattice", lattice, 1e-14));
    out.push(check("global-vs-multilocal-l6", global, 1e-14));

    let roots = closedform::collective_critical_roots();
    let quad = (roots[0] - 0.75).abs().max((roots[1] - 8.0 / 9.0).abs());
    out.push(check("collective-quadratic-roots", quad, 1e-12));

    let expected: [(NoiseScenario, Vec<f64>); 3] = [
        (NoiseScenario::qubit_local(0.0)?, vec![8.0 / 9.0]),
        (NoiseScenario::qutrit_local(0.0)?, vec![0.75]),
        (NoiseScenario::collective(0.0)?, vec![0.75, 8.0 / 9.0]),
    ];
    for (scenario, want) in expected {
        let probe = Probe::for_kind(scenario, Mode::Paper)?;
        let got = critical_point(&probe, 0.0, 0.25, DEFAULT_ROOT_TOL)?;
        let name = format!("critical-point-{}", scenario.kind());
        if got.len() != want.len() {
            out.push(CheckResult {
                name,
                passed: false,
                detail: format!("expected {want:?}, got {got:?}"),
            });
        } else {
            let dev = got.iter().zip(&want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            out.push(check(&name, dev, 1e-9));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_construction() {
        let g = param_grid(0.01).unwrap();
        assert_eq!(g.len(), 101);
        assert_eq!(g[30], 0.3);
        assert_eq!(g[100], 1.0);
        assert!(param_grid(0.0).is_err());
        assert!(param_grid(0.3).is_err());
    }

    #[test]
    fn bisect_brackets_root() {
        let b = bisect(|t| Ok(t * t - 0.5), 0.0, 1.0, 1e-12).unwrap();
        assert!(b.f_lo * b.f_hi <= 0.0);
        assert!((b.midpoint() - 0.5f64.sqrt()).abs() < 1e-12);
        assert!(bisect(|t| Ok(t + 1.0), 0.0, 1.0, 1e-12).is_err());
    }

    #[test]
    fn paper_sweep_qubit_values() {
        let mut grid = SweepGrid::new(NoiseScenario::qubit_local(0.0).unwrap(), Param::P1, Mode::Paper);
        grid.param_values = vec![0.0, 8.0 / 9.0];
        grid.x_values = vec![0.0, 0.25];
        let r = sweep(&grid).unwrap();
        assert_eq!(r.len(), 4);
        assert_eq!(r[0].negativity, 0.125);
        assert!((r[1].negativity - 1.0 / 6.0).abs() < 1e-15);
        assert_eq!(r[2].negativity, 0.125);
        assert!((r[3].negativity - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn standard_sweep_zero_noise() {
        for kind in NoiseKind::ALL {
            let s = NoiseScenario::new(kind, 0.0, 0.0, 0.0).unwrap();
            let mut grid = SweepGrid::new(s, default_swept(kind), Mode::Standard);
            grid.param_values = vec![0.0];
            grid.x_values = vec![0.05, 0.25];
            let r = sweep(&grid).unwrap();
            assert_eq!(r[0].negativity, 0.0);
            assert!((r[1].negativity - 0.125).abs() < 1e-14);
        }
    }

    #[test]
    fn unsupported_paper_global() {
        let grid = SweepGrid::new(NoiseScenario::global(0.1, 0.1, 0.0).unwrap(), Param::P, Mode::Paper);
        assert!(matches!(sweep(&grid), Err(Error::Unsupported(_))));
        assert!(Probe::new(NoiseScenario::qubit_local(0.0).unwrap(), Param::P2, Mode::Paper).is_err());
    }

    #[test]
    fn paper_esd_examples() {
        let qutrit = Probe::for_kind(NoiseScenario::qutrit_local(0.0).unwrap(), Mode::Paper).unwrap();
        let o = esd_onset(&qutrit, 0.25, 1e-12).unwrap().unwrap();
        assert!((o.param - 0.3).abs() < 1e-11);
        assert_eq!(o.kind, OnsetKind::Isolated);

        let qubit = Probe::for_kind(NoiseScenario::qubit_local(0.0).unwrap(), Mode::Paper).unwrap();
        let o = esd_onset(&qubit, 0.25, 1e-12).unwrap().unwrap();
        assert!((o.param - 8.0 / 21.0).abs() < 1e-11);
        assert_eq!(o.kind, OnsetKind::Isolated);
    }

    #[test]
    fn standard_esd_qubit_quarter() {
        let probe = Probe::for_kind(NoiseScenario::qubit_local(0.0).unwrap(), Mode::Standard).unwrap();
        let o = esd_onset(&probe, 0.25, 1e-12).unwrap().unwrap();
        assert!((o.param - 0.3).abs() < 1e-10);
        assert_eq!(o.kind, OnsetKind::Interval);
        assert!(o.bracket.f_lo * o.bracket.f_hi <= 0.0);
    }

    #[test]
    fn separable_start_reports_zero_onset() {
        let probe = Probe::for_kind(NoiseScenario::qubit_local(0.0).unwrap(), Mode::Standard).unwrap();
        let o = esd_onset(&probe, 0.05, 1e-9).unwrap().unwrap();
        assert_eq!(o.param, 0.0);
    }

    #[test]
    fn critical_points_paper_mode() {
        let q = Probe::for_kind(NoiseScenario::qubit_local(0.0).unwrap(), Mode::Paper).unwrap();
        let r = critical_point(&q, 0.0, 0.25, 1e-12).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0] - 8.0 / 9.0).abs() < 1e-11);
        assert!(critical_point(&q, 0.1, 0.1, 1e-9).is_err());
    }
}
