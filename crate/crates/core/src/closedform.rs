//! Published closed-form partial-transpose eigenvalues and negativities for the
//! family `rho(x)`, evaluated literally.
//!
//! Every expression keeps the grouping in which it was printed; none of the
//! algebra is simplified or corrected. The negativities use the printed shape
//! `max{0, |inner|}`, which is only zero at isolated roots of `inner`. The
//! numerically evolved negativity in [`crate::entanglement`] is the reference
//! these values are compared against.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::channels::{NoiseKind, NoiseScenario};
use crate::error::check_range;
use crate::states::FamilyParam;
use crate::{Error, Result};

/// Six eigenvalues in printed order `(l1, l2, l3, l4, l5, l6)`, with `l1 = l2`
/// and `l3 = l4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScenarioEigenvalues {
    pub lambda: [f64; 6],
    pub kind: NoiseKind,
    pub p1: f64,
    pub p2: f64,
    pub p: f64,
    pub x: f64,
}

impl ScenarioEigenvalues {
    fn from_parts(kind: NoiseKind, (p1, p2, p): (f64, f64, f64), x: f64, l12: f64, l34: f64, l5: f64, l6: f64) -> Self {
        Self {
            lambda: [l12, l12, l34, l34, l5, l6],
            kind,
            p1,
            p2,
            p,
            x,
        }
    }

    pub fn sum(&self) -> f64 {
        self.lambda.iter().sum()
    }

    pub fn sorted(&self) -> [f64; 6] {
        let mut s = self.lambda;
        s.sort_by(f64::total_cmp);
        s
    }

    pub fn lambda6(&self) -> f64 {
        self.lambda[5]
    }
}

/// A negativity in the printed `max{0, |inner|}` form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PaperNegativity {
    pub value: f64,
    /// Signed expression inside the absolute value.
    pub inner: f64,
}

impl PaperNegativity {
    pub fn from_inner(inner: f64) -> Self {
        Self {
            value: f64::max(0.0, inner.abs()),
            inner,
        }
    }
}

/// Reading of the collective-noise negativity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CollectiveVariant {
    /// The expression as typeset, with adjacent factors multiplied.
    Printed,
    /// The multilocal `l6` with `p1 = p2 = p` substituted.
    #[default]
    Reconstructed,
}

impl CollectiveVariant {
    pub fn name(self) -> &'static str {
        match self {
            CollectiveVariant::Printed => "printed",
            CollectiveVariant::Reconstructed => "reconstructed",
        }
    }
}

impl fmt::Display for CollectiveVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CollectiveVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "printed" => Ok(CollectiveVariant::Printed),
            "reconstructed" => Ok(CollectiveVariant::Reconstructed),
            _ => Err(Error::Unsupported(format!("unknown variant '{s}'"))),
        }
    }
}

fn param(name: &'static str, v: f64) -> Result<f64> {
    check_range(name, v, 0.0, 1.0)
}

fn family(x: f64) -> Result<f64> {
    FamilyParam::new(x).map(FamilyParam::value)
}

/// Qubit-only coupling.
pub fn eigenvalues_qubit_only(p1: f64, x: f64) -> Result<ScenarioEigenvalues> {
    let (p1, x) = (param("p1", p1)?, family(x)?);
    let l12 = 1.0 / 4.0 - 3.0 / 32.0 * p1;
    let l34 = 1.0 / 8.0 + 3.0 / 64.0 * p1;
    let l5 = 1.0 / 8.0 + 3.0 / 64.0 * (1.0 - 24.0 * x) * p1 + x;
    let l6 = 1.0 / 8.0 + 3.0 / 64.0 * (1.0 + 24.0 * x) * p1 - x;
    Ok(ScenarioEigenvalues::from_parts(
        NoiseKind::QubitLocal,
        (p1, 0.0, 0.0),
        x,
        l12,
        l34,
        l5,
        l6,
    ))
}

pub fn negativity_paper_qubit(p1: f64, x: f64) -> Result<PaperNegativity> {
    let (p1, x) = (param("p1", p1)?, family(x)?);
    Ok(PaperNegativity::from_inner(
        1.0 / 8.0 + 3.0 / 64.0 * (1.0 + 24.0 * x) * p1 - x,
    ))
}

/// Qutrit-only coupling. The printed `l1,2` and `l3,4` still carry `p1` terms;
/// they are kept, so the six values only sum to one when `p1 = 0`.
pub fn eigenvalues_qutrit_only(p1: f64, p2: f64, x: f64) -> Result<ScenarioEigenvalues> {
    let (p1, p2, x) = (param("p1", p1)?, param("p2", p2)?, family(x)?);
    let l12 = 1.0 / 4.0 - 3.0 / 32.0 * p1 - 1.0 / 12.0 * p2 + 3.0 / 32.0 * p1 * p2;
    let l34 = 1.0 / 8.0 + 3.0 / 64.0 * p1;
    let l5 = 1.0 / 8.0 + 1.0 / 12.0 * (1.0 - 16.0 * x) * p2 + x;
    let l6 = 1.0 / 8.0 + 1.0 / 12.0 * (1.0 + 16.0 * x) * p2 - x;
    Ok(ScenarioEigenvalues::from_parts(
        NoiseKind::QutritLocal,
        (p1, p2, 0.0),
        x,
        l12,
        l34,
        l5,
        l6,
    ))
}

pub fn negativity_paper_qutrit(p2: f64, x: f64) -> Result<PaperNegativity> {
    let (p2, x) = (param("p2", p2)?, family(x)?);
    Ok(PaperNegativity::from_inner(
        1.0 / 8.0 + 1.0 / 12.0 * (1.0 + 16.0 * x) * p2 - x,
    ))
}

fn multilocal_l6(p1: f64, p2: f64, x: f64) -> f64 {
    1.0 / 8.0 + 3.0 / 64.0 * p1 + 1.0 / 12.0 * p2 - 3.0 / 32.0 * (1.0 + 16.0 * x) * p1 * p2
        + (9.0 / 8.0 * p1 + 4.0 / 3.0 * p2 - 1.0) * x
}

/// Independent qubit and qutrit couplings.
pub fn eigenvalues_multilocal(p1: f64, p2: f64, x: f64) -> Result<ScenarioEigenvalues> {
    let (p1, p2, x) = (param("p1", p1)?, param("p2", p2)?, family(x)?);
    let l12 = 1.0 / 12.0 * (3.0 - p2);
    let l34 = 1.0 / 8.0;
    let l5 = 1.0 / 8.0 + 3.0 / 64.0 * p1 + 1.0 / 12.0 * p2 - 3.0 / 32.0 * (1.0 - 16.0 * x) * p1 * p2
        - (9.0 / 8.0 * p1 + 4.0 / 3.0 * p2 - 1.0) * x;
    let l6 = multilocal_l6(p1, p2, x);
    Ok(ScenarioEigenvalues::from_parts(
        NoiseKind::Multilocal,
        (p1, p2, 0.0),
        x,
        l12,
        l34,
        l5,
        l6,
    ))
}

pub fn negativity_paper_multilocal(p1: f64, p2: f64, x: f64) -> Result<PaperNegativity> {
    let (p1, p2, x) = (param("p1", p1)?, param("p2", p2)?, family(x)?);
    Ok(PaperNegativity::from_inner(multilocal_l6(p1, p2, x)))
}

pub fn negativity_paper_collective(p: f64, x: f64, variant: CollectiveVariant) -> Result<PaperNegativity> {
    let (p, x) = (param("p", p)?, family(x)?);
    let inner = match variant {
        CollectiveVariant::Printed => {
            1.0 / 8.0 + 1.0 / 32.0 * (25.0 / 6.0 - 3.0 * p) * p * (59.0 / 24.0 - 3.0 / 2.0 * p) * p * x - x
        }
        CollectiveVariant::Reconstructed => {
            1.0 / 8.0 + 1.0 / 32.0 * (25.0 / 6.0 - 3.0 * p) * p + (59.0 / 24.0 - 3.0 / 2.0 * p) * p * x - x
        }
    };
    Ok(PaperNegativity::from_inner(inner))
}

/// Roots of the x-coefficient of the reconstructed collective expression,
/// `36 p^2 - 59 p + 24 = 0`, ascending.
pub fn collective_critical_roots() -> [f64; 2] {
    let (a, b, c) = (36.0f64, -59.0f64, 24.0f64);
    let disc = (b * b - 4.0 * a * c).sqrt();
    // Cancellation-free pair.
    let q = -0.5 * (b - disc);
    let (r1, r2) = (q / a, c / q);
    if r1 < r2 {
        [r1, r2]
    } else {
        [r2, r1]
    }
}

/// Global coupling with the local parameters fixed at `p1 = p2 = 1/2`:
/// the printed `l6` as a function of the collective `p`.
pub fn lambda6_global_half(p: f64, x: f64) -> Result<f64> {
    let (p, x) = (param("p", p)?, family(x)?);
    Ok((96.0 * (8.0 - 7.0 * x) - 63.0 * p * p * (1.0 + 16.0 * x) + 28.0 * p * (2.0 + 59.0 * x)) / 4608.0)
}

/// The printed global negativity at `p1 = p2 = 1/2`.
pub fn negativity_paper_global_half(p: f64, x: f64) -> Result<PaperNegativity> {
    let (p, x) = (param("p", p)?, family(x)?);
    Ok(PaperNegativity::from_inner(
        (2184.0 - 4800.0 * x - 450.0 * p * p * (1.0 + 16.0 * x) + 5.0 * p * (107.0 + 2360.0 * x)) / 13824.0,
    ))
}

/// Local parameter value at which the printed global formulas apply.
pub const GLOBAL_LOCAL_PARAM: f64 = 0.5;

/// Dispatches to the printed negativity matching the scenario.
///
/// Global noise only has a printed formula at `p1 = p2 = 1/2`; any other
/// combination is [`Error::Unsupported`].
pub fn negativity_paper(scenario: &NoiseScenario, x: f64, variant: CollectiveVariant) -> Result<PaperNegativity> {
    match scenario.kind() {
        NoiseKind::QubitLocal => negativity_paper_qubit(scenario.p1(), x),
        NoiseKind::QutritLocal => negativity_paper_qutrit(scenario.p2(), x),
        NoiseKind::Multilocal => negativity_paper_multilocal(scenario.p1(), scenario.p2(), x),
        NoiseKind::Collective => negativity_paper_collective(scenario.p(), x, variant),
        NoiseKind::Global => {
            if scenario.p1() == GLOBAL_LOCAL_PARAM && scenario.p2() == GLOBAL_LOCAL_PARAM {
                negativity_paper_global_half(scenario.p(), x)
            } else {
                Err(Error::Unsupported(format!(
                    "no printed global formula for p1 = {}, p2 = {} (only p1 = p2 = 1/2)",
                    scenario.p1(),
                    scenario.p2()
                )))
            }
        }
    }
}
