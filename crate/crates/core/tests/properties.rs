mod common;

use common::{qubit_local_negativity, qubit_oracle, qutrit_oracle, random_density, rng};
use esdsim::analysis::{critical_point, Mode, Probe, DEFAULT_ROOT_TOL};
use esdsim::channels::{evolve, NoiseKind, NoiseScenario};
use esdsim::closedform::{self, CollectiveVariant};
use esdsim::entanglement::{
    negativity_on, negativity_standard, negativity_trace_norm, partial_transpose_qubit,
    partial_transpose_qutrit, TransposeSide,
};
use esdsim::linalg::{hermitian_spectrum, Matrix, DEFAULT_TOL};
use esdsim::states::rho_x;
use num_complex::Complex64;
use proptest::prelude::*;

fn random_matrix(seed: u64, r: usize, c: usize) -> Matrix {
    use rand::Rng;
    let mut g = rng(seed);
    Matrix::from_fn(r, c, |_, _| Complex64::new(g.gen_range(-1.0..1.0), g.gen_range(-1.0..1.0)))
}

fn unit() -> impl Strategy<Value = f64> {
    0.0..=1.0f64
}

fn family() -> impl Strategy<Value = f64> {
    0.0..=0.25f64
}

fn scenario() -> impl Strategy<Value = NoiseScenario> {
    (0usize..5, unit(), unit(), unit()).prop_map(|(k, a, b, c)| match NoiseKind::ALL[k] {
        NoiseKind::QubitLocal => NoiseScenario::qubit_local(a).unwrap(),
        NoiseKind::QutritLocal => NoiseScenario::qutrit_local(b).unwrap(),
        NoiseKind::Multilocal => NoiseScenario::multilocal(a, b).unwrap(),
        NoiseKind::Collective => NoiseScenario::collective(c).unwrap(),
        NoiseKind::Global => NoiseScenario::global(a, b, c).unwrap(),
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kron_is_associative(s in any::<u64>()) {
        let a = random_matrix(s, 2, 2);
        let b = random_matrix(s ^ 1, 3, 2);
        let c = random_matrix(s ^ 2, 2, 3);
        let left = a.kron(&b).kron(&c);
        let right = a.kron(&b.kron(&c));
        prop_assert!(left.max_abs_diff(&right).unwrap() <= 1e-14);
    }

    #[test]
    fn kron_mixed_product(s in any::<u64>()) {
        let (a, c) = (random_matrix(s, 2, 2), random_matrix(s ^ 3, 2, 2));
        let (b, d) = (random_matrix(s ^ 5, 3, 3), random_matrix(s ^ 7, 3, 3));
        let left = a.kron(&b).matmul(&c.kron(&d)).unwrap();
        let right = a.matmul(&c).unwrap().kron(&b.matmul(&d).unwrap());
        prop_assert!(left.max_abs_diff(&right).unwrap() <= 1e-13);
    }

    #[test]
    fn adjoint_is_involution(s in any::<u64>()) {
        let a = random_matrix(s, 4, 6);
        prop_assert_eq!(a.adjoint().adjoint(), a);
    }

    #[test]
    fn spectrum_sums_to_trace(s in any::<u64>()) {
        let a = random_matrix(s, 6, 6);
        let h = a.add(&a.adjoint()).unwrap();
        let spec = hermitian_spectrum(&h, DEFAULT_TOL).unwrap();
        prop_assert!((spec.sum() - h.trace().unwrap().re).abs() <= 1e-12);
        prop_assert!(spec.residual <= 1e-10);
        prop_assert!(spec.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn partial_transpose_is_involution(s in any::<u64>()) {
        let rho = random_density(&mut rng(s), 6);
        let back = partial_transpose_qubit(&partial_transpose_qubit(&rho).unwrap()).unwrap();
        prop_assert!(back.max_abs_diff(&rho).unwrap() <= 1e-15);
        let back = partial_transpose_qutrit(&partial_transpose_qutrit(&rho).unwrap()).unwrap();
        prop_assert!(back.max_abs_diff(&rho).unwrap() <= 1e-15);
    }

    #[test]
    fn evolution_keeps_a_density(sc in scenario(), s in any::<u64>(), x in family()) {
        for rho in [random_density(&mut rng(s), 6), rho_x(x).unwrap()] {
            let out = evolve(&sc, &rho).unwrap();
            prop_assert!((out.trace().unwrap().re - 1.0).abs() <= 1e-12);
            prop_assert!(out.hermitian_defect() <= 1e-12);
            prop_assert!(hermitian_spectrum(&out, DEFAULT_TOL).unwrap().min() >= -1e-10);
        }
    }

    #[test]
    fn local_channels_match_oracles(p in unit(), s in any::<u64>()) {
        let rho = random_density(&mut rng(s), 6);
        let q = evolve(&NoiseScenario::qubit_local(p).unwrap(), &rho).unwrap();
        prop_assert!(q.max_abs_diff(&qubit_oracle(&rho, p)).unwrap() <= 1e-12);
        let t = evolve(&NoiseScenario::qutrit_local(p).unwrap(), &rho).unwrap();
        prop_assert!(t.max_abs_diff(&qutrit_oracle(&rho, p)).unwrap() <= 1e-12);
    }

    #[test]
    fn local_channels_commute(p1 in unit(), p2 in unit(), s in any::<u64>()) {
        let rho = random_density(&mut rng(s), 6);
        let a = evolve(&NoiseScenario::qutrit_local(p2).unwrap(),
            &evolve(&NoiseScenario::qubit_local(p1).unwrap(), &rho).unwrap()).unwrap();
        let b = evolve(&NoiseScenario::qubit_local(p1).unwrap(),
            &evolve(&NoiseScenario::qutrit_local(p2).unwrap(), &rho).unwrap()).unwrap();
        prop_assert!(a.max_abs_diff(&b).unwrap() <= 1e-13);
    }

    #[test]
    fn negativity_is_side_independent(sc in scenario(), s in any::<u64>()) {
        let rho = evolve(&sc, &random_density(&mut rng(s), 6)).unwrap();
        let a = negativity_on(&rho, TransposeSide::Qubit, DEFAULT_TOL).unwrap().negativity;
        let b = negativity_on(&rho, TransposeSide::Qutrit, DEFAULT_TOL).unwrap().negativity;
        let c = negativity_trace_norm(&rho, DEFAULT_TOL).unwrap();
        prop_assert!((a - b).abs() <= 1e-12);
        prop_assert!((a - c).abs() <= 1e-12);
        prop_assert!(a >= 0.0);
    }

    #[test]
    fn negativity_is_continuous_in_noise(p in 0.0..0.999f64, x in family()) {
        let h = 1e-6;
        let n = |q: f64| negativity_standard(
            &evolve(&NoiseScenario::qubit_local(q).unwrap(), &rho_x(x).unwrap()).unwrap(),
            DEFAULT_TOL,
        ).unwrap().negativity;
        // Negativity is Lipschitz in the channel parameter; 1 is a loose bound.
        prop_assert!((n(p + h) - n(p)).abs() <= h);
    }

    #[test]
    fn qubit_local_negativity_matches_hand_oracle(p in unit(), x in family()) {
        let rho = evolve(&NoiseScenario::qubit_local(p).unwrap(), &rho_x(x).unwrap()).unwrap();
        let n = negativity_standard(&rho, DEFAULT_TOL).unwrap().negativity;
        prop_assert!((n - qubit_local_negativity(p, x)).abs() <= 1e-12);
    }

    #[test]
    fn paper_negativity_is_nonnegative(a in unit(), b in unit(), x in family()) {
        for v in [
            closedform::negativity_paper_qubit(a, x).unwrap(),
            closedform::negativity_paper_qutrit(b, x).unwrap(),
            closedform::negativity_paper_multilocal(a, b, x).unwrap(),
            closedform::negativity_paper_collective(a, x, CollectiveVariant::Printed).unwrap(),
            closedform::negativity_paper_collective(a, x, CollectiveVariant::Reconstructed).unwrap(),
            closedform::negativity_paper_global_half(a, x).unwrap(),
        ] {
            prop_assert!(v.value >= 0.0);
            prop_assert_eq!(v.value, v.inner.abs());
        }
    }

    #[test]
    fn paper_critical_point_ignores_the_x_pair(xa in 0.0..0.12f64, xb in 0.13..=0.25f64) {
        let probe = Probe::for_kind(NoiseScenario::qubit_local(0.0).unwrap(), Mode::Paper).unwrap();
        let roots = critical_point(&probe, xa, xb, DEFAULT_ROOT_TOL).unwrap();
        prop_assert_eq!(roots.len(), 1);
        prop_assert!((roots[0] - 8.0 / 9.0).abs() <= 1e-9);
    }
}

#[test]
fn multilocal_reduces_to_single_channels() {
    for x in [0.0, 0.1, 0.25] {
        for p in [0.0, 0.3, 0.8] {
            let rho = rho_x(x).unwrap();
            let m = evolve(&NoiseScenario::multilocal(p, 0.0).unwrap(), &rho).unwrap();
            let q = evolve(&NoiseScenario::qubit_local(p).unwrap(), &rho).unwrap();
            assert!(m.max_abs_diff(&q).unwrap() <= 1e-15);
            let m = evolve(&NoiseScenario::multilocal(0.0, p).unwrap(), &rho).unwrap();
            let t = evolve(&NoiseScenario::qutrit_local(p).unwrap(), &rho).unwrap();
            assert!(m.max_abs_diff(&t).unwrap() <= 1e-15);
        }
    }
}
