//! Named experiments behind the command-line tool.
//!
//! Column layouts:
//!
//! | experiment       | columns |
//! |------------------|---------|
//! | `two-molecule`   | `quantity, value, reference` |
//! | `spectrum`       | `e_z, subspace_label, level_index, energy` |
//! | `pairwise-scan`  | `e_z, level_class, observable, index, value` |
//! | `partition-scan` | `e_z, level_class, observable, index, value` |
//! | `thermal-map`    | `t_rescaled, e_z, observable_name, value` |
//! | `crossing`       | `n_molecules, v_dip, e_z_star, energy` |
//! | `validate`       | `quantity, value` |
//!
//! In the scan tables `observable` is `L_d` (pair sum at distance `index`),
//! `L_d_mean` (the same sum divided by the number of pairs; a convenience
//! column), `L_prime` (site `index` against the rest) or `jz_variance`.

use rayon::prelude::*;

use crate::config::{Experiment, RunConfig};
use crate::entanglement::{jz_variance, one_vs_rest_l, pairwise_l_sum, ManifoldDensity};
use crate::error::{ChainError, Result};
use crate::manifold::{find_crossing, solve_on_grid, spectrum_vs_field, BlockLabel, LevelClass, ManifoldSpectrum};
use crate::model::{two_molecule_reference, ModelParams};
use crate::oracle::{validate_manifold, ValidationTolerances};
use crate::scan::{Cell, ScanResult};
use crate::thermal::{omitted_weight_estimate, thermal_scan, Observable};

/// State of an excited level: the eigenstate itself for `HPlus`, the
/// equal-weight mixture of the `m = +1` and `m = -1` partners for `HOne`.
pub fn level_density(spectrum: &ManifoldSpectrum, class: LevelClass, level: usize) -> Result<ManifoldDensity> {
    match class {
        LevelClass::HPlus => ManifoldDensity::pure(&spectrum.eigenstate(BlockLabel::HPlus, level)),
        LevelClass::HOne => ManifoldDensity::mixture(&[
            (0.5, spectrum.eigenstate(BlockLabel::HOneUp, level)),
            (0.5, spectrum.eigenstate(BlockLabel::HOneDown, level)),
        ]),
    }
}

/// The lowest excited level, re-identified at the spectrum's field.
pub fn lowest_excited_density(spectrum: &ManifoldSpectrum) -> Result<(LevelClass, ManifoldDensity)> {
    let (class, _) = spectrum.lowest_excited();
    Ok((class, level_density(spectrum, class, 0)?))
}

pub fn two_molecule_table(params: &ModelParams) -> Result<ScanResult> {
    let params = params.with_field(0.0);
    let r = two_molecule_reference(&params)?;
    let spectrum = crate::manifold::solve_manifold(&params)?;
    let v = params.v_dip;
    let plus = &spectrum.subspace(BlockLabel::HPlus).eigenvalues;
    let one = &spectrum.subspace(BlockLabel::HOneUp).eigenvalues;
    let lowest_plus = level_density(&spectrum, LevelClass::HPlus, 0)?;
    let lowest_one = level_density(&spectrum, LevelClass::HOne, 0)?;

    let mut out = ScanResult::new(&["quantity", "value", "reference"]);
    let rows: [(&str, f64, f64); 8] = [
        ("E0_minus", plus[0], 2.0 - 2.0 * v / 3.0),
        ("E0_plus", plus[1], 2.0 + 2.0 * v / 3.0),
        ("E1_minus", one[0], 2.0 - v / 3.0),
        ("E1_plus", one[1], 2.0 + v / 3.0),
        ("L_psi0_minus", one_vs_rest_l(&lowest_plus, 1)?, r.log_neg_psi0_minus),
        ("L_psi1_minus_mixture", one_vs_rest_l(&lowest_one, 1)?, r.log_neg_psi1_minus_mixture),
        ("jz_variance_psi0_minus", jz_variance(&lowest_plus), r.jz_var_psi0_minus),
        ("jz_variance_psi1_minus_mixture", jz_variance(&lowest_one), r.jz_var_psi1_minus_mixture),
    ];
    for (name, value, reference) in rows {
        out.push_row(vec![name.into(), value.into(), reference.into()]);
    }
    Ok(out)
}

fn level_rows(
    e_z: f64,
    class: LevelClass,
    rho: &ManifoldDensity,
    d_list: &[usize],
    p_list: &[usize],
) -> Result<Vec<Vec<Cell>>> {
    let n = rho.n_molecules();
    let mut rows = Vec::new();
    let row = |obs: &str, index: usize, value: f64| -> Vec<Cell> {
        vec![e_z.into(), class.name().into(), obs.into(), index.into(), value.into()]
    };
    for &d in d_list {
        let l = pairwise_l_sum(rho, d)?;
        rows.push(row("L_d", d, l));
        rows.push(row("L_d_mean", d, l / (n - d) as f64));
    }
    for &p in p_list {
        rows.push(row("L_prime", p, one_vs_rest_l(rho, p)?));
    }
    rows.push(row("jz_variance", 0, jz_variance(rho)));
    Ok(rows)
}

/// `L_d` and `L'_p` of the lowest excited level at every field.
pub fn pairwise_scan(params: &ModelParams, e_z_grid: &[f64], d_list: &[usize], p_list: &[usize]) -> Result<ScanResult> {
    let spectra = solve_on_grid(params, e_z_grid)?;
    let blocks: Vec<Vec<Vec<Cell>>> = spectra
        .par_iter()
        .zip(e_z_grid.par_iter())
        .map(|(spec, &e_z)| {
            let (class, rho) = lowest_excited_density(spec)?;
            level_rows(e_z, class, &rho, d_list, p_list)
        })
        .collect::<Result<_>>()?;
    let mut out = ScanResult::new(&["e_z", "level_class", "observable", "index", "value"]);
    blocks.into_iter().flatten().for_each(|r| out.push_row(r));
    Ok(out)
}

/// Every pair distance and every single-site cut of the lowest excited level.
pub fn partition_scan(params: &ModelParams, e_z_grid: &[f64]) -> Result<ScanResult> {
    let n = params.n_molecules;
    let d_all: Vec<usize> = (1..n).collect();
    let p_all: Vec<usize> = (1..=n).collect();
    pairwise_scan(params, e_z_grid, &d_all, &p_all)
}

pub fn crossing_table(params: &ModelParams, lo: f64, hi: f64) -> Result<ScanResult> {
    let star = find_crossing(params, lo, hi)?;
    let spectrum = crate::manifold::solve_manifold(&params.with_field(star))?;
    let mut out = ScanResult::new(&["n_molecules", "v_dip", "e_z_star", "energy"]);
    out.push_row(vec![params.n_molecules.into(), params.v_dip.into(), star.into(), spectrum.lowest_excited().1.into()]);
    Ok(out)
}

pub fn validate_table(params: &ModelParams) -> Result<ScanResult> {
    let r = validate_manifold(params, ValidationTolerances::default())?;
    let mut out = ScanResult::new(&["quantity", "value"]);
    let flag = |b: bool| if b { 1.0 } else { 0.0 };
    let rows: [(&str, f64); 11] = [
        ("max_eigenvalue_deviation", r.max_eigenvalue_deviation),
        ("eigenvalue_bound", r.eigenvalue_bound),
        ("full_ground_max_l_prime", r.full_ground_max_l_prime),
        ("ground_l_prime_bound", r.tolerances.ground_l_prime),
        ("max_representation_deviation", r.max_representation_deviation),
        ("representation_bound", r.tolerances.representation),
        ("max_full_eigenstate_l_deviation", r.max_full_eigenstate_l_deviation),
        ("c_v2", r.tolerances.c_v2),
        ("eigenvalues_ok", flag(r.eigenvalues_ok)),
        ("ground_ok", flag(r.ground_ok)),
        ("representation_ok", flag(r.representation_ok)),
    ];
    for (name, value) in rows {
        out.push_row(vec![name.into(), value.into()]);
    }
    Ok(out)
}

/// Runs the configured experiment and returns its table with the resolved
/// configuration attached as metadata.
pub fn run(config: &RunConfig) -> Result<ScanResult> {
    let params = config.params;
    let ez = config.ez_grid.values();
    let mut table = match config.experiment {
        Experiment::TwoMolecule => two_molecule_table(&params)?,
        Experiment::Spectrum => spectrum_vs_field(&params, &ez)?,
        Experiment::PairwiseScan => pairwise_scan(&params, &ez, &config.d_list, &config.p_list)?,
        Experiment::PartitionScan => partition_scan(&params, &ez)?,
        Experiment::ThermalMap => {
            let mut obs: Vec<Observable> = config.p_list.iter().map(|&p| Observable::LPrimeAt(p)).collect();
            obs.push(Observable::JzVar);
            let t = config.t_grid.values();
            let mut table = thermal_scan(&params, &t, &ez, &obs)?;
            let worst = omitted_weight_estimate(&params.with_field(ez[0]), config.t_grid.max);
            table.push_meta("omitted_two_excitation_weight_estimate_at_t_max", format!("{worst:e}"));
            table
        }
        Experiment::Crossing => {
            if config.ez_grid.steps < 2 {
                return Err(ChainError::Config("crossing needs an e_z range (ez_min < ez_max)".into()));
            }
            crossing_table(&params, config.ez_grid.min, config.ez_grid.max)?
        }
        Experiment::Validate => validate_table(&params)?,
    };
    let mut meta = config.metadata();
    meta.append(&mut table.metadata);
    table.metadata = meta;
    table.check()?;
    Ok(table)
}
