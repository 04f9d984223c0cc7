//! Dense complex matrices sized for the 2, 3 and 6 dimensional operators of the
//! qubit-qutrit problem, with a cyclic Jacobi eigensolver for Hermitian input.

use std::fmt;

use num_complex::Complex64;

use crate::{Error, Result};

pub type ComplexScalar = Complex64;

/// Default tolerance for Hermiticity checks and eigensolver convergence.
pub const DEFAULT_TOL: f64 = 1e-12;

const MAX_SWEEPS: usize = 100;

pub const ZERO: ComplexScalar = Complex64::new(0.0, 0.0);
pub const ONE: ComplexScalar = Complex64::new(1.0, 0.0);

/// Primitive cube root of unity `exp(2 pi i / 3)`.
pub fn omega() -> ComplexScalar {
    let angle = 2.0 * std::f64::consts::PI / 3.0;
    Complex64::new(angle.cos(), angle.sin())
}

/// Row-major dense complex matrix. Dimensions are fixed at construction.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<ComplexScalar>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:>9.5}{:+.5}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = ComplexScalar;

    fn index(&self, (i, j): (usize, usize)) -> &ComplexScalar {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.entries[i * self.cols + j]
    }
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<ComplexScalar>) -> Result<Self> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                op: "Matrix::new",
                left: (rows, cols),
                right: (entries.len(), 1),
            });
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    /// Builds a matrix from real row-major entries.
    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        Self::new(
            rows,
            cols,
            entries.iter().map(|&r| Complex64::new(r, 0.0)).collect(),
        )
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> ComplexScalar) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self {
            rows,
            cols,
            entries,
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| ZERO)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn diag(values: &[ComplexScalar]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| if i == j { values[i] } else { ZERO })
    }

    pub fn diag_real(values: &[f64]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(values[i], 0.0)
            } else {
                ZERO
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[ComplexScalar] {
        &self.entries
    }

    /// Kronecker product; entry `(i*b.rows + k, j*b.cols + l)` is `a(i,j) * b(k,l)`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let (br, bc) = other.dims();
        Matrix::from_fn(self.rows * br, self.cols * bc, |r, c| {
            self[(r / br, c / bc)] * other[(r % br, c % bc)]
        })
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                op: "matmul",
                left: self.dims(),
                right: other.dims(),
            });
        }
        let mut out = vec![ZERO; self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.entries[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let row = &other.entries[k * other.cols..(k + 1) * other.cols];
                for (o, b) in out[i * other.cols..(i + 1) * other.cols].iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        Matrix::new(self.rows, other.cols, out)
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, "add", |a, b| a + b)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, "sub", |a, b| a - b)
    }

    fn zip_with(
        &self,
        other: &Matrix,
        op: &'static str,
        f: impl Fn(ComplexScalar, ComplexScalar) -> ComplexScalar,
    ) -> Result<Matrix> {
        if self.dims() != other.dims() {
            return Err(Error::DimensionMismatch {
                op,
                left: self.dims(),
                right: other.dims(),
            });
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Matrix::new(self.rows, self.cols, entries)
    }

    pub fn scale(&self, c: ComplexScalar) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|&z| c * z).collect(),
        }
    }

    pub fn scale_real(&self, c: f64) -> Matrix {
        self.scale(Complex64::new(c, 0.0))
    }

    pub fn trace(&self) -> Result<ComplexScalar> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                op: "trace",
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok((0..self.rows).map(|i| self[(i, i)]).sum())
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Matrix) -> Result<f64> {
        if self.dims() != other.dims() {
            return Err(Error::DimensionMismatch {
                op: "max_abs_diff",
                left: self.dims(),
                right: other.dims(),
            });
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// `max |A - A^H|` over entries; infinite for non-square input.
    pub fn hermitian_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub(crate) fn get_mut(&mut self, i: usize, j: usize) -> &mut ComplexScalar {
        &mut self.entries[i * self.cols + j]
    }
}

/// Ascending real spectrum of a Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    /// `max ||A v - lambda v||` over the eigenpairs found by the solver.
    pub residual: f64,
}

impl Spectrum {
    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues[self.eigenvalues.len() - 1]
    }

    pub fn sum(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }
}

/// Eigenvalues of a Hermitian matrix by cyclic two-sided Jacobi rotations.
///
/// Each rotation first removes the phase of the pivot `a_pq`, then applies the
/// real symmetric Jacobi rotation that annihilates it. Sweeps stop once the
/// off-diagonal Frobenius mass drops to `tol` (scaled by the matrix norm when
/// that norm exceeds one).
pub fn hermitian_spectrum(a: &Matrix, tol: f64) -> Result<Spectrum> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            op: "hermitian_spectrum",
            rows: a.rows,
            cols: a.cols,
        });
    }
    let deviation = a.hermitian_defect();
    // Negated so that NaN is rejected.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(deviation <= tol) {
        return Err(Error::NotHermitian { deviation, tol });
    }

    let n = a.rows;
    // Work on the exactly Hermitian part.
    let mut w = Matrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(a[(i, i)].re, 0.0)
        } else {
            0.5 * (a[(i, j)] + a[(j, i)].conj())
        }
    });
    let mut v = Matrix::identity(n);

    let norm = w.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let threshold = tol * norm.max(1.0);

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_mass(&w);
        if off <= threshold {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, off });
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut w, &mut v, p, q);
            }
        }
        sweeps += 1;
    }

    let mut pairs: Vec<(f64, usize)> = (0..n).map(|i| (w[(i, i)].re, i)).collect();
    // Stable sort keeps discovery order among ties.
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));

    let mut residual = 0.0f64;
    for &(lambda, col) in &pairs {
        let mut worst = 0.0f64;
        for i in 0..n {
            let av: ComplexScalar = (0..n).map(|k| a[(i, k)] * v[(k, col)]).sum();
            worst += (av - lambda * v[(i, col)]).norm_sqr();
        }
        residual = residual.max(worst.sqrt());
    }

    Ok(Spectrum {
        eigenvalues: pairs.into_iter().map(|(l, _)| l).collect(),
        residual,
    })
}

fn off_diagonal_mass(w: &Matrix) -> f64 {
    let n = w.rows;
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += w[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// One Jacobi step on the `(p, q)` pivot: `W <- G^H W G`, `V <- V G` with
/// `G = diag(1, e^{-i phi}) R(theta)` restricted to rows/cols `p, q`.
fn rotate(w: &mut Matrix, v: &mut Matrix, p: usize, q: usize) {
    let h = w[(p, q)];
    let r = h.norm();
    if r == 0.0 {
        return;
    }
    let phase = h / r; // e^{i phi}
    let app = w[(p, p)].re;
    let aqq = w[(q, q)].re;

    let theta = (aqq - app) / (2.0 * r);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // G columns: g_p = (c, -s e^{-i phi}), g_q = (s, c e^{-i phi}) in the (p, q) plane.
    let gpp = Complex64::new(c, 0.0);
    let gqp = -s * phase.conj();
    let gpq = Complex64::new(s, 0.0);
    let gqq = c * phase.conj();

    let n = w.rows;
    // W <- W G
    for i in 0..n {
        let wp = w[(i, p)];
        let wq = w[(i, q)];
        *w.get_mut(i, p) = wp * gpp + wq * gqp;
        *w.get_mut(i, q) = wp * gpq + wq * gqq;
    }
    // W <- G^H W
    for j in 0..n {
        let wp = w[(p, j)];
        let wq = w[(q, j)];
        *w.get_mut(p, j) = gpp.conj() * wp + gqp.conj() * wq;
        *w.get_mut(q, j) = gpq.conj() * wp + gqq.conj() * wq;
    }
    *w.get_mut(p, q) = ZERO;
    *w.get_mut(q, p) = ZERO;
    let dp = w[(p, p)].re;
    let dq = w[(q, q)].re;
    *w.get_mut(p, p) = Complex64::new(dp, 0.0);
    *w.get_mut(q, q) = Complex64::new(dq, 0.0);

    for i in 0..n {
        let vp = v[(i, p)];
        let vq = v[(i, q)];
        *v.get_mut(i, p) = vp * gpp + vq * gqp;
        *v.get_mut(i, q) = vp * gpq + vq * gqq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> ComplexScalar {
        Complex64::new(re, im)
    }

    fn weyl_z() -> Matrix {
        let w = omega();
        Matrix::diag(&[ONE, w, w * w])
    }

    fn weyl_y() -> Matrix {
        Matrix::from_real(3, 3, &[0., 1., 0., 0., 0., 1., 1., 0., 0.]).unwrap()
    }

    #[test]
    fn kron_identity_and_diagonal() {
        let i6 = Matrix::identity(2).kron(&Matrix::identity(3));
        assert_eq!(i6, Matrix::identity(6));

        let w = omega();
        let d = Matrix::diag_real(&[1.0, -1.0]).kron(&weyl_z());
        let expected = Matrix::diag(&[ONE, w, w * w, -ONE, -w, -w * w]);
        assert!(d.max_abs_diff(&expected).unwrap() < 1e-15);
    }

    #[test]
    fn kron_sigma_x_swaps_qubit_blocks() {
        let sx = Matrix::from_real(2, 2, &[0., 1., 1., 0.]).unwrap();
        let k = sx.kron(&Matrix::identity(3));
        for i in 0..6 {
            for j in 0..6 {
                let expected = if j == (i + 3) % 6 { ONE } else { ZERO };
                assert_eq!(k[(i, j)], expected);
            }
        }
    }

    #[test]
    fn adjoint_examples() {
        assert_eq!(Matrix::identity(3).adjoint(), Matrix::identity(3));
        assert_eq!(weyl_y().adjoint(), weyl_y().transpose());
        let w = omega();
        let zd = weyl_z().adjoint();
        let expected = Matrix::diag(&[ONE, w * w, w]);
        assert!(zd.max_abs_diff(&expected).unwrap() < 1e-15);
    }

    #[test]
    fn cyclic_generators_cube_to_identity() {
        let y = weyl_y();
        let y3 = y.matmul(&y.matmul(&y).unwrap()).unwrap();
        assert_eq!(y3, Matrix::identity(3));
        let z = weyl_z();
        let z3 = z.matmul(&z.matmul(&z).unwrap()).unwrap();
        assert!(z3.max_abs_diff(&Matrix::identity(3)).unwrap() < 1e-14);
    }

    #[test]
    fn ring_operation_errors() {
        let a = Matrix::zeros(2, 3);
        let b = Matrix::zeros(2, 3);
        assert!(matches!(a.matmul(&b), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(
            a.add(&Matrix::zeros(3, 2)),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(a.trace(), Err(Error::NotSquare { .. })));
        assert!(Matrix::new(2, 2, vec![ONE; 3]).is_err());
    }

    #[test]
    fn spectrum_of_diagonal() {
        let d = Matrix::diag_real(&[0.25, 0.125, 0.125, 0.125, 0.125, 0.25]);
        let s = hermitian_spectrum(&d, DEFAULT_TOL).unwrap();
        assert_eq!(s.eigenvalues, vec![0.125, 0.125, 0.125, 0.125, 0.25, 0.25]);
    }

    #[test]
    fn spectrum_of_embedded_block() {
        let mut entries = vec![ZERO; 36];
        let set = |e: &mut Vec<ComplexScalar>, i: usize, j: usize, v: f64| e[i * 6 + j] = c(v, 0.0);
        for i in 0..6 {
            set(&mut entries, i, i, 0.2);
        }
        set(&mut entries, 2, 2, 0.125);
        set(&mut entries, 3, 3, 0.125);
        set(&mut entries, 2, 3, 0.25);
        set(&mut entries, 3, 2, 0.25);
        let m = Matrix::new(6, 6, entries).unwrap();
        let s = hermitian_spectrum(&m, DEFAULT_TOL).unwrap();
        assert!((s.min() + 0.125).abs() < 1e-14);
        assert!((s.max() - 0.375).abs() < 1e-14);
        assert!(s.residual < 1e-12);
    }

    #[test]
    fn complex_hermitian_two_by_two() {
        // [[2, 1 - i], [1 + i, 3]]: eigenvalues (5 +- sqrt(9)) / 2 = 1, 4.
        let m = Matrix::new(2, 2, vec![c(2., 0.), c(1., -1.), c(1., 1.), c(3., 0.)]).unwrap();
        let s = hermitian_spectrum(&m, DEFAULT_TOL).unwrap();
        assert!((s.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((s.eigenvalues[1] - 4.0).abs() < 1e-14);
        assert!(s.residual < 1e-13);
    }

    #[test]
    fn non_hermitian_rejected() {
        let m = Matrix::new(2, 2, vec![ONE, ONE, ZERO, ONE]).unwrap();
        assert!(matches!(
            hermitian_spectrum(&m, DEFAULT_TOL),
            Err(Error::NotHermitian { .. })
        ));
        assert!(matches!(
            hermitian_spectrum(&Matrix::zeros(2, 3), DEFAULT_TOL),
            Err(Error::NotSquare { .. })
        ));
    }
}
