//! Partial transposition and negativity.

use serde::Serialize;

use crate::linalg::{hermitian_spectrum, Matrix, Spectrum};
use crate::{Error, Result};

/// Negativity of a state together with the partial-transpose spectrum it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct NegativityResult {
    pub negativity: f64,
    pub min_eigenvalue: f64,
    pub spectrum: Spectrum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TransposeSide {
    Qubit,
    Qutrit,
}

fn check_composite(rho: &Matrix, op: &'static str) -> Result<()> {
    if rho.dims() != (6, 6) {
        return Err(Error::DimensionMismatch {
            op,
            left: rho.dims(),
            right: (6, 6),
        });
    }
    Ok(())
}

/// Transpose on the qubit index: `[[B00, B01], [B10, B11]] -> [[B00, B10], [B01, B11]]`
/// in terms of the 3x3 blocks.
pub fn partial_transpose_qubit(rho: &Matrix) -> Result<Matrix> {
    check_composite(rho, "partial_transpose_qubit")?;
    Ok(Matrix::from_fn(6, 6, |r, c| {
        let (a, k) = (r / 3, r % 3);
        let (b, l) = (c / 3, c % 3);
        rho[(3 * b + k, 3 * a + l)]
    }))
}

/// Transpose on the qutrit index (each 3x3 block transposed in place).
pub fn partial_transpose_qutrit(rho: &Matrix) -> Result<Matrix> {
    check_composite(rho, "partial_transpose_qutrit")?;
    Ok(Matrix::from_fn(6, 6, |r, c| {
        let (a, k) = (r / 3, r % 3);
        let (b, l) = (c / 3, c % 3);
        rho[(3 * a + l, 3 * b + k)]
    }))
}

fn negativity_from(spectrum: Spectrum, tol: f64) -> NegativityResult {
    let negativity = spectrum
        .eigenvalues
        .iter()
        .filter(|&&l| l < -tol)
        .fold(0.0, |acc, l| acc - l);
    NegativityResult {
        negativity,
        min_eigenvalue: spectrum.min(),
        spectrum,
    }
}

/// Sum of `|lambda|` over the negative eigenvalues of the qubit partial transpose.
/// Eigenvalues within `tol` of zero count as zero.
pub fn negativity_standard(rho: &Matrix, tol: f64) -> Result<NegativityResult> {
    let pt = partial_transpose_qubit(rho)?;
    Ok(negativity_from(hermitian_spectrum(&pt, tol)?, tol))
}

/// Same quantity computed from the qutrit-side partial transpose.
pub fn negativity_on(rho: &Matrix, side: TransposeSide, tol: f64) -> Result<NegativityResult> {
    let pt = match side {
        TransposeSide::Qubit => partial_transpose_qubit(rho)?,
        TransposeSide::Qutrit => partial_transpose_qutrit(rho)?,
    };
    Ok(negativity_from(hermitian_spectrum(&pt, tol)?, tol))
}

/// `(||rho^{T_A}||_1 - tr rho) / 2`; equal to the standard negativity for unit-trace input.
pub fn negativity_trace_norm(rho: &Matrix, tol: f64) -> Result<f64> {
    let pt = partial_transpose_qubit(rho)?;
    let s = hermitian_spectrum(&pt, tol)?;
    let norm: f64 = s.eigenvalues.iter().map(|l| l.abs()).sum();
    Ok(0.5 * (norm - rho.trace()?.re))
}
