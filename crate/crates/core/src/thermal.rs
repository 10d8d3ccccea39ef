//! Boltzmann ensembles restricted to the `{ground, one excitation}` manifold.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::entanglement::{jz_variance, one_vs_rest_l, pairwise_l_sum, ManifoldDensity};
use crate::error::{domain, Result};
use crate::manifold::{manifold_dim, manifold_index, solve_manifold, BlockLabel, ManifoldSpectrum};
use crate::model::{dressed_solution, ModelParams};
use crate::scan::ScanResult;

/// Temperature in units of `B / k_B`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalSpec {
    pub t_rescaled: f64,
    pub params: ModelParams,
}

impl ThermalSpec {
    pub fn new(t_rescaled: f64, params: ModelParams) -> Result<Self> {
        if !(t_rescaled.is_finite() && t_rescaled > 0.0) {
            return domain(format!("temperature must be finite and > 0, got {t_rescaled}"));
        }
        params.validate()?;
        Ok(Self { t_rescaled, params })
    }
}

/// Boltzmann weights of the `3N + 1` manifold eigenstates, in the order of
/// [`ManifoldSpectrum::eigenpairs`].
pub fn boltzmann_weights(spectrum: &ManifoldSpectrum, t_rescaled: f64) -> Result<Vec<f64>> {
    if !(t_rescaled.is_finite() && t_rescaled > 0.0) {
        return domain(format!("temperature must be finite and > 0, got {t_rescaled}"));
    }
    let n = spectrum.n_molecules();
    let mut energies = Vec::with_capacity(manifold_dim(n));
    energies.push(spectrum.ground_energy);
    for label in BlockLabel::ALL {
        energies.extend(spectrum.subspace(label).eigenvalues.iter());
    }
    // shift to the lowest level so small temperatures do not underflow
    let floor = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let mut w: Vec<f64> = energies.iter().map(|e| (-(e - floor) / t_rescaled).exp()).collect();
    let z: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= z);
    Ok(w)
}

pub fn thermal_state(spec: &ThermalSpec) -> Result<ManifoldDensity> {
    let spectrum = solve_manifold(&spec.params)?;
    thermal_state_from(&spectrum, spec.t_rescaled)
}

/// `sum_k w_k |k><k|`, assembled block by block as `V diag(w) V^T`.
pub fn thermal_state_from(spectrum: &ManifoldSpectrum, t_rescaled: f64) -> Result<ManifoldDensity> {
    let n = spectrum.n_molecules();
    let w = boltzmann_weights(spectrum, t_rescaled)?;
    let dim = manifold_dim(n);
    let mut m = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    m[(0, 0)] = Complex64::new(w[0], 0.0);
    for label in BlockLabel::ALL {
        let vecs = &spectrum.subspace(label).eigenvectors;
        let offset = 1 + label.flavor() * n;
        for p in 0..n {
            for q in 0..n {
                let x: f64 = (0..n).map(|k| w[offset + k] * vecs[(p, k)] * vecs[(q, k)]).sum();
                m[(manifold_index(p, label), manifold_index(q, label))] = Complex64::new(x, 0.0);
            }
        }
    }
    ManifoldDensity::from_matrix(n, m)
}

/// Rough upper estimate of the population the manifold truncation leaves
/// out: two-excitation configurations at their unperturbed energy lowered by
/// twice the largest dipole bond, relative to a partition function >= 1.
pub fn omitted_weight_estimate(params: &ModelParams, t_rescaled: f64) -> f64 {
    let d = dressed_solution(params);
    let single = (2.0 * d.lambda).min(1.0 + d.lambda);
    let gap = (2.0 * single - 4.0 * params.v_dip).max(0.0);
    let n = params.n_molecules as f64;
    let count = 9.0 * n * (n - 1.0) / 2.0;
    count * (-gap / t_rescaled).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Observable {
    /// `L'_p` at a 1-based site.
    LPrimeAt(usize),
    /// `L_d` at a chain distance.
    LdAt(usize),
    JzVar,
}

impl Observable {
    pub fn name(&self) -> String {
        match self {
            Observable::LPrimeAt(p) => format!("L_prime_{p}"),
            Observable::LdAt(d) => format!("L_d_{d}"),
            Observable::JzVar => "jz_variance".to_string(),
        }
    }

    pub fn evaluate(&self, rho: &ManifoldDensity) -> Result<f64> {
        match *self {
            Observable::LPrimeAt(p) => one_vs_rest_l(rho, p),
            Observable::LdAt(d) => pairwise_l_sum(rho, d),
            Observable::JzVar => Ok(jz_variance(rho)),
        }
    }
}

fn check_positive_grid(name: &str, grid: &[f64], strict: bool) -> Result<()> {
    if grid.is_empty() {
        return domain(format!("{name} grid must not be empty"));
    }
    let bad = |x: f64| !x.is_finite() || x < 0.0 || (strict && x == 0.0);
    if grid.iter().any(|&x| bad(x)) {
        return domain(format!("{name} grid has invalid values"));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return domain(format!("{name} grid must be strictly ascending"));
    }
    Ok(())
}

/// Observables on the thermal state at every `(T, e_z)` point.
/// Columns: `t_rescaled, e_z, observable_name, value`; rows ordered by
/// temperature, then field, then observable.
pub fn thermal_scan(
    params: &ModelParams,
    t_grid: &[f64],
    e_z_grid: &[f64],
    observables: &[Observable],
) -> Result<ScanResult> {
    check_positive_grid("temperature", t_grid, true)?;
    check_positive_grid("field", e_z_grid, false)?;
    let spectra: Vec<ManifoldSpectrum> =
        e_z_grid.par_iter().map(|&e| solve_manifold(&params.with_field(e))).collect::<Result<_>>()?;

    let points: Vec<(usize, usize)> =
        (0..t_grid.len()).flat_map(|i| (0..e_z_grid.len()).map(move |j| (i, j))).collect();
    let values: Vec<Vec<f64>> = points
        .par_iter()
        .map(|&(i, j)| {
            let rho = thermal_state_from(&spectra[j], t_grid[i])?;
            observables.iter().map(|o| o.evaluate(&rho)).collect()
        })
        .collect::<Result<_>>()?;

    let mut out = ScanResult::new(&["t_rescaled", "e_z", "observable_name", "value"]);
    for (&(i, j), vals) in points.iter().zip(&values) {
        for (o, &v) in observables.iter().zip(vals) {
            out.push_row(vec![t_grid[i].into(), e_z_grid[j].into(), o.name().as_str().into(), v.into()]);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: usize, v: f64, e_z: f64) -> ModelParams {
        ModelParams::new(n, v, e_z).unwrap()
    }

    #[test]
    fn two_molecule_partition_function() {
        let v = 0.1;
        let t = 0.5;
        let spec = solve_manifold(&params(2, v, 0.0)).unwrap();
        let w = boltzmann_weights(&spec, t).unwrap();
        // ground 0; HPlus 2 -+ 2v/3; HOne 2 -+ v/3 twice
        let levels = [
            0.0,
            2.0 - 2.0 * v / 3.0,
            2.0 + 2.0 * v / 3.0,
            2.0 - v / 3.0,
            2.0 + v / 3.0,
            2.0 - v / 3.0,
            2.0 + v / 3.0,
        ];
        let z: f64 = levels.iter().map(|e| (-e / t).exp()).sum();
        for (got, e) in w.iter().zip(levels) {
            assert!((got - (-e / t).exp() / z).abs() < 1e-12);
        }
    }

    #[test]
    fn limits() {
        let p = params(5, 0.1, 1.0);
        let cold = thermal_state(&ThermalSpec::new(1e-3, p).unwrap()).unwrap();
        assert!((cold.matrix()[(0, 0)].re - 1.0).abs() < 1e-12);
        for site in 1..=5 {
            assert_eq!(one_vs_rest_l(&cold, site).unwrap(), 0.0);
        }
        let spec = solve_manifold(&p).unwrap();
        let w = boltzmann_weights(&spec, 1e9).unwrap();
        let uniform = 1.0 / w.len() as f64;
        assert!(w.iter().all(|x| (x - uniform).abs() < 1e-6));
    }

    #[test]
    fn weights_normalized_and_degenerate_pairs_equal() {
        let p = params(8, 0.1, 6.0);
        let spec = solve_manifold(&p).unwrap();
        for t in [0.2, 0.7, 1.2] {
            let w = boltzmann_weights(&spec, t).unwrap();
            assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!(w.iter().all(|&x| x > 0.0));
            let (up, down) = (&w[1 + 8..1 + 16], &w[1 + 16..]);
            assert_eq!(up, down);
        }
    }

    #[test]
    fn assembled_state_matches_mixture() {
        let p = params(4, 0.1, 2.0);
        let spec = solve_manifold(&p).unwrap();
        let w = boltzmann_weights(&spec, 0.6).unwrap();
        let terms: Vec<_> = w.iter().copied().zip(spec.eigenpairs().into_iter().map(|(_, s)| s)).collect();
        let direct = ManifoldDensity::mixture(&terms).unwrap();
        let fast = thermal_state_from(&spec, 0.6).unwrap();
        assert!((direct.matrix() - fast.matrix()).norm() < 1e-14);
        fast.validate().unwrap();
    }

    #[test]
    fn rejects_nonpositive_temperature() {
        assert!(ThermalSpec::new(0.0, params(3, 0.1, 0.0)).is_err());
        assert!(ThermalSpec::new(-1.0, params(3, 0.1, 0.0)).is_err());
        let spec = solve_manifold(&params(3, 0.1, 0.0)).unwrap();
        assert!(boltzmann_weights(&spec, 0.0).is_err());
    }

    #[test]
    fn scan_layout() {
        let p = params(4, 0.1, 0.0);
        let one = thermal_scan(&p, &[0.5], &[0.0], &[Observable::JzVar]).unwrap();
        assert_eq!(one.rows.len(), 1);
        let many = thermal_scan(&p, &[0.3, 0.6], &[0.0, 1.0, 2.0], &[Observable::LPrimeAt(2), Observable::LdAt(1)])
            .unwrap();
        assert_eq!(many.rows.len(), 2 * 3 * 2);
        let t = many.column_f64("t_rescaled").unwrap();
        assert!(t.windows(2).all(|w| w[0] <= w[1]));
        many.check().unwrap();
        assert!(thermal_scan(&p, &[], &[0.0], &[Observable::JzVar]).is_err());
        assert!(thermal_scan(&p, &[0.0], &[0.0], &[Observable::JzVar]).is_err());
    }

    #[test]
    fn omitted_weight_is_small_in_default_window() {
        let p = params(10, 0.1, 0.0);
        assert!(omitted_weight_estimate(&p, 0.2) < 1e-4);
        assert!(omitted_weight_estimate(&p, 1.2) > omitted_weight_estimate(&p, 0.6));
    }
}
