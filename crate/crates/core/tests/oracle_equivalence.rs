use nalgebra::DMatrix;
use proptest::prelude::*;

use rotor_chain::manifold::{build_block_hamiltonian, solve_manifold, BlockLabel};
use rotor_chain::model::ModelParams;
use rotor_chain::oracle::{
    full_hamiltonian, full_thermal_one_vs_rest, full_thermal_weights, projected_manifold_hamiltonian,
    sector_eigensolve, sorted_manifold_weights, total_m,
};
use rotor_chain::thermal::thermal_state_from;
use rotor_chain::entanglement::one_vs_rest_l;

fn params(n: usize, v: f64, e_z: f64) -> ModelParams {
    ModelParams::new(n, v, e_z).unwrap()
}

#[test]
fn thermal_one_vs_rest_matches_full_space() {
    let mut worst: f64 = 0.0;
    for n in 2..=4 {
        for (v, e_z) in [(0.05, 0.0), (0.1, 2.0), (0.3, 7.0)] {
            let p = params(n, v, e_z);
            let spectrum = solve_manifold(&p).unwrap();
            for t in [0.25, 0.7, 1.2] {
                let rho = thermal_state_from(&spectrum, t).unwrap();
                for site in 0..n {
                    let fast = one_vs_rest_l(&rho, site + 1).unwrap();
                    let full = full_thermal_one_vs_rest(&p, t, site).unwrap();
                    worst = worst.max((fast - full).abs());
                }
            }
        }
    }
    assert!(worst <= 1e-10, "largest deviation {worst:e}");
}

#[test]
fn thermal_weights_match_full_space() {
    for n in 2..=4 {
        let p = params(n, 0.1, 3.0);
        for t in [0.2, 0.6, 1.2] {
            let a = sorted_manifold_weights(&p, t).unwrap();
            let b = full_thermal_weights(&p, t).unwrap();
            assert_eq!(a.len(), 3 * n + 1);
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn total_m_commutes_with_full_hamiltonian() {
    for n in 2..=5 {
        let h = full_hamiltonian(&params(n, 0.2, 1.5)).unwrap();
        let m = total_m(n);
        let mut worst: f64 = 0.0;
        for i in 0..h.nrows() {
            for j in 0..h.ncols() {
                worst = worst.max(((m[i] - m[j]) as f64 * h[(i, j)]).abs());
            }
        }
        assert!(worst <= 1e-12, "N={n}: {worst:e}");
    }
}

#[test]
fn plus_and_minus_one_sectors_are_degenerate() {
    for n in 2..=4 {
        let h = full_hamiltonian(&params(n, 0.1, 2.0)).unwrap();
        let up = sector_eigensolve(&h, n, 1).unwrap();
        let down = sector_eigensolve(&h, n, -1).unwrap();
        assert!((&up.eigenvalues - &down.eigenvalues).amax() < 1e-10);
    }
}

#[test]
fn manifold_block_eigenvalues_bound_full_at_small_v() {
    // manifold levels track the full spectrum with an error that scales as v^2
    let dev = |v: f64| -> f64 {
        let p = params(3, v, 1.0);
        let h = full_hamiltonian(&p).unwrap();
        let zero = sector_eigensolve(&h, 3, 0).unwrap();
        let s = solve_manifold(&p).unwrap();
        let plus = &s.subspace(BlockLabel::HPlus).eigenvalues;
        (0..3).map(|k| (plus[k] - zero.eigenvalues[k + 1]).abs()).fold(0.0, f64::max)
    };
    let (a, b) = (dev(0.01), dev(0.02));
    assert!(b / a > 3.5 && b / a < 4.5, "ratio {}", b / a);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn projected_hamiltonian_equals_blocks(n in 2usize..=3, v in 0.01f64..0.5, e_z in 0.0f64..15.0) {
        let p = params(n, v, e_z);
        let projected = projected_manifold_hamiltonian(&p).unwrap();
        let dense: DMatrix<f64> = build_block_hamiltonian(&p).unwrap().dense();
        prop_assert!((projected - dense).amax() < 1e-12);
    }
}
