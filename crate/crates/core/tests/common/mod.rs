#![allow(dead_code)]

use esdsim::linalg::Matrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `G G† / tr(G G†)` with Gaussian-ish complex entries: full rank, generic.
pub fn random_density(rng: &mut impl Rng, dim: usize) -> Matrix {
    let g = Matrix::from_fn(dim, dim, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    let m = g.matmul(&g.adjoint()).unwrap();
    let tr = m.trace().unwrap().re;
    m.scale_real(1.0 / tr)
}

/// Qutrit marginal, summing over the qubit index by hand.
pub fn marginal_qutrit(rho: &Matrix) -> Matrix {
    Matrix::from_fn(3, 3, |j, k| (0..2).map(|a| rho[(3 * a + j, 3 * a + k)]).sum())
}

/// Qubit marginal.
pub fn marginal_qubit(rho: &Matrix) -> Matrix {
    Matrix::from_fn(2, 2, |a, b| (0..3).map(|j| rho[(3 * a + j, 3 * b + j)]).sum())
}

/// `(1-p) rho + (p/3)(2 I_2 (x) rho_B - rho)`.
pub fn qubit_oracle(rho: &Matrix, p: f64) -> Matrix {
    let rb = marginal_qutrit(rho);
    Matrix::from_fn(6, 6, |r, c| {
        let (a, j) = (r / 3, r % 3);
        let (b, k) = (c / 3, c % 3);
        let lifted = if a == b { rb[(j, k)] * 2.0 } else { Complex64::new(0.0, 0.0) };
        rho[(r, c)] * (1.0 - p) + (lifted - rho[(r, c)]) * (p / 3.0)
    })
}

/// `(1-p) rho + (p/8)(3 rho_A (x) I_3 - rho)`.
pub fn qutrit_oracle(rho: &Matrix, p: f64) -> Matrix {
    let ra = marginal_qubit(rho);
    Matrix::from_fn(6, 6, |r, c| {
        let (a, j) = (r / 3, r % 3);
        let (b, k) = (c / 3, c % 3);
        let lifted = if j == k { ra[(a, b)] * 3.0 } else { Complex64::new(0.0, 0.0) };
        rho[(r, c)] * (1.0 - p) + (lifted - rho[(r, c)]) * (p / 8.0)
    })
}

/// Grid `0, step, ..., 1` built from integers so endpoints are exact.
pub fn grid(n: usize) -> Vec<f64> {
    (0..=n).map(|i| i as f64 / n as f64).collect()
}

/// Negativity of `rho(x)` under qubit-local noise `p`, worked out by hand: the
/// only block that can go negative has eigenvalues `1/8 + p/12 -+ |1 - 4p/3| x`.
pub fn qubit_local_negativity(p: f64, x: f64) -> f64 {
    (-(0.125 + p / 12.0 - (1.0 - 4.0 * p / 3.0).abs() * x)).max(0.0)
}
