//! The one-parameter initial family `rho(x)`, `0 <= x <= 1/4`.

use crate::error::check_range;
use crate::linalg::{hermitian_spectrum, Matrix};
use crate::{Error, Result};

/// At zero noise `rho(x)` has a negative partial-transpose eigenvalue `1/8 - x`
/// only for `x > 1/8`; at or below this value the family is PPT, hence separable.
pub const PPT_BOUNDARY: f64 = 0.125;

/// Coherence amplitude `x` of the family, validated to `[0, 1/4]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct FamilyParam(f64);

impl FamilyParam {
    pub const MAX: f64 = 0.25;

    pub fn new(x: f64) -> Result<Self> {
        check_range("x", x, 0.0, Self::MAX).map(FamilyParam)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn rho(self) -> Matrix {
        let x = self.0;
        let mut m = Matrix::diag_real(&[0.25, 0.125, 0.125, 0.125, 0.125, 0.25]);
        *m.get_mut(0, 5) = x.into();
        *m.get_mut(5, 0) = x.into();
        m
    }
}

/// `diag(1/4, 1/8, 1/8, 1/8, 1/8, 1/4)` plus `x` on `|00><12|` and `|12><00|`.
pub fn rho_x(x: f64) -> Result<Matrix> {
    Ok(FamilyParam::new(x)?.rho())
}

/// True iff `m` is Hermitian, unit trace and positive semidefinite, all within `tol`.
pub fn validate_density(m: &Matrix, tol: f64) -> bool {
    check_density(m, tol).is_ok()
}

pub(crate) fn check_density(m: &Matrix, tol: f64) -> Result<()> {
    if !m.is_square() {
        return Err(Error::NotDensity(format!("not square: {:?}", m.dims())));
    }
    if !m.is_finite() {
        return Err(Error::NotDensity("non-finite entries".into()));
    }
    let defect = m.hermitian_defect();
    if defect > tol {
        return Err(Error::NotDensity(format!("Hermitian defect {defect:e}")));
    }
    let tr = m.trace()?;
    if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
        return Err(Error::NotDensity(format!("trace {tr}")));
    }
    let spectrum = hermitian_spectrum(m, tol)?;
    if spectrum.min() < -tol {
        return Err(Error::NotDensity(format!(
            "negative eigenvalue {:e}",
            spectrum.min()
        )));
    }
    Ok(())
}
