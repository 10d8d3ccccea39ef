//! Effective Hamiltonian on the `{ground, one excitation}` manifold.
//!
//! In the dressed site basis the chain ground state is `|- - ... ->`. The
//! first excited manifold holds one molecule in `|+>`, `|1,+1>` or `|1,-1>`
//! and the rest in `|->`. Total `m` conservation splits it into three
//! uncoupled blocks (`HPlus`, `HOneUp`, `HOneDown`), each an `N x N`
//! tridiagonal matrix over the position of the excitation. Coupling between
//! the ground configuration and the excited blocks is second order in the
//! dipole scale and is dropped.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{domain, ChainError, Result};
use crate::model::{dressed_solution, pair_dipole_operator, DressedSolution, ModelParams, SiteBasis, SITE_DIM};
use crate::scan::ScanResult;
use crate::tridiag::{solve_symmetric_tridiagonal, TridiagonalEigen};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BlockLabel {
    HPlus,
    HOneUp,
    HOneDown,
}

impl BlockLabel {
    pub const ALL: [BlockLabel; 3] = [BlockLabel::HPlus, BlockLabel::HOneUp, BlockLabel::HOneDown];

    /// Dressed site index of the excitation this block carries.
    pub fn site_state(self) -> usize {
        self.flavor() + 1
    }

    /// Position within `[+, m=+1, m=-1]`.
    pub fn flavor(self) -> usize {
        match self {
            BlockLabel::HPlus => 0,
            BlockLabel::HOneUp => 1,
            BlockLabel::HOneDown => 2,
        }
    }

    pub fn m(self) -> i32 {
        match self {
            BlockLabel::HPlus => 0,
            BlockLabel::HOneUp => 1,
            BlockLabel::HOneDown => -1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BlockLabel::HPlus => "HPlus",
            BlockLabel::HOneUp => "HOneUp",
            BlockLabel::HOneDown => "HOneDown",
        }
    }
}

/// Index of `(site, flavor)` in the `3N + 1` manifold basis (ground is 0).
pub fn manifold_index(site: usize, label: BlockLabel) -> usize {
    1 + 3 * site + label.flavor()
}

pub fn manifold_dim(n: usize) -> usize {
    3 * n + 1
}

#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockHamiltonian {
    pub params: ModelParams,
    pub dressed: DressedSolution,
    pub ground_energy: f64,
    blocks: [Block; 3],
}

/// Nearest-neighbour matrix elements of the dipole operator between dressed
/// pair configurations that matter inside the manifold.
#[derive(Debug, Clone, Copy)]
struct BondElements {
    ground: f64,
    /// `<g f|V|g f>` and `<f g|V|f g>` per flavor.
    left_excited: [f64; 3],
    right_excited: [f64; 3],
    /// `<f g|V|g f>` per flavor.
    hop: [f64; 3],
}

fn bond_elements(params: &ModelParams) -> BondElements {
    let v = pair_dipole_operator(SiteBasis::dressed(params), params);
    let at = |a: usize, b: usize| -> f64 {
        let z = v[(a, b)];
        debug_assert!(z.im.abs() < 1e-14);
        z.re
    };
    let pair = |l: usize, r: usize| SITE_DIM * l + r;
    let mut e = BondElements { ground: at(0, 0), left_excited: [0.0; 3], right_excited: [0.0; 3], hop: [0.0; 3] };
    for label in BlockLabel::ALL {
        let s = label.site_state();
        let f = label.flavor();
        e.left_excited[f] = at(pair(s, 0), pair(s, 0));
        e.right_excited[f] = at(pair(0, s), pair(0, s));
        e.hop[f] = at(pair(s, 0), pair(0, s));
    }
    e
}

pub fn build_block_hamiltonian(params: &ModelParams) -> Result<BlockHamiltonian> {
    params.validate()?;
    let n = params.n_molecules;
    let dressed = dressed_solution(params);
    let bonds = bond_elements(params);
    let site_energy = [dressed.e_plus, 2.0, 2.0];
    let ground_energy = n as f64 * dressed.e_minus + (n - 1) as f64 * bonds.ground;

    let blocks = BlockLabel::ALL.map(|label| {
        let f = label.flavor();
        let diag = (0..n)
            .map(|p| {
                let mut e = (n - 1) as f64 * dressed.e_minus + site_energy[f];
                let mut untouched = n - 1;
                if p > 0 {
                    e += bonds.right_excited[f];
                    untouched -= 1;
                }
                if p + 1 < n {
                    e += bonds.left_excited[f];
                    untouched -= 1;
                }
                e + untouched as f64 * bonds.ground
            })
            .collect();
        Block { diag, off: vec![bonds.hop[f]; n - 1] }
    });

    Ok(BlockHamiltonian { params: *params, dressed, ground_energy, blocks })
}

impl BlockHamiltonian {
    pub fn block(&self, label: BlockLabel) -> &Block {
        &self.blocks[label.flavor()]
    }

    /// The manifold Hamiltonian as a dense `(3N + 1)`-square matrix.
    pub fn dense(&self) -> DMatrix<f64> {
        let n = self.params.n_molecules;
        let mut h = DMatrix::zeros(manifold_dim(n), manifold_dim(n));
        h[(0, 0)] = self.ground_energy;
        for label in BlockLabel::ALL {
            let b = self.block(label);
            for p in 0..n {
                let i = manifold_index(p, label);
                h[(i, i)] = b.diag[p];
                if p + 1 < n {
                    let j = manifold_index(p + 1, label);
                    h[(i, j)] = b.off[p];
                    h[(j, i)] = b.off[p];
                }
            }
        }
        h
    }

    pub fn solve(&self) -> Result<ManifoldSpectrum> {
        let subspaces = BlockLabel::ALL
            .iter()
            .map(|&label| {
                let b = self.block(label);
                solve_symmetric_tridiagonal(&b.diag, &b.off).map(|eig| SubspaceSpectrum::new(label, eig))
            })
            .collect::<Result<Vec<_>>>()?;
        let subspaces: [SubspaceSpectrum; 3] = subspaces.try_into().expect("three blocks");
        Ok(ManifoldSpectrum { params: self.params, ground_energy: self.ground_energy, subspaces })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceSpectrum {
    pub label: BlockLabel,
    pub eigenvalues: DVector<f64>,
    /// Columns are site-amplitude vectors `c_p`.
    pub eigenvectors: DMatrix<f64>,
}

impl SubspaceSpectrum {
    fn new(label: BlockLabel, eig: TridiagonalEigen) -> Self {
        Self { label, eigenvalues: eig.eigenvalues, eigenvectors: eig.eigenvectors }
    }

    pub fn lowest(&self) -> f64 {
        self.eigenvalues[0]
    }
}

/// Subspace class of an excited level; the two `m = +-1` blocks form one
/// doubly degenerate class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LevelClass {
    HPlus,
    HOne,
}

impl LevelClass {
    pub fn name(self) -> &'static str {
        match self {
            LevelClass::HPlus => "HPlus",
            LevelClass::HOne => "HOne",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ManifoldSpectrum {
    pub params: ModelParams,
    pub ground_energy: f64,
    subspaces: [SubspaceSpectrum; 3],
}

/// One amplitude vector per block over the `N` excitation positions.
#[derive(Debug, Clone, PartialEq)]
pub struct ManifoldState {
    pub n_molecules: usize,
    pub ground_amplitude: Complex64,
    pub excitation_amplitudes: [DVector<Complex64>; 3],
}

impl ManifoldState {
    pub fn ground(n: usize) -> Self {
        let zero = DVector::from_element(n, Complex64::new(0.0, 0.0));
        Self {
            n_molecules: n,
            ground_amplitude: Complex64::new(1.0, 0.0),
            excitation_amplitudes: [zero.clone(), zero.clone(), zero],
        }
    }

    pub fn excitation(n: usize, label: BlockLabel, amplitudes: &[f64]) -> Result<Self> {
        if amplitudes.len() != n {
            return domain(format!("expected {n} amplitudes, got {}", amplitudes.len()));
        }
        let mut s = Self::ground(n);
        s.ground_amplitude = Complex64::new(0.0, 0.0);
        s.excitation_amplitudes[label.flavor()] =
            DVector::from_iterator(n, amplitudes.iter().map(|&x| Complex64::new(x, 0.0)));
        Ok(s)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.ground_amplitude.norm_sqr()
            + self.excitation_amplitudes.iter().map(|c| c.norm_squared()).sum::<f64>()
    }

    /// Components in the `3N + 1` manifold basis.
    pub fn to_vector(&self) -> DVector<Complex64> {
        let n = self.n_molecules;
        let mut v = DVector::from_element(manifold_dim(n), Complex64::new(0.0, 0.0));
        v[0] = self.ground_amplitude;
        for label in BlockLabel::ALL {
            for p in 0..n {
                v[manifold_index(p, label)] = self.excitation_amplitudes[label.flavor()][p];
            }
        }
        v
    }
}

impl ManifoldSpectrum {
    pub fn subspace(&self, label: BlockLabel) -> &SubspaceSpectrum {
        &self.subspaces[label.flavor()]
    }

    pub fn n_molecules(&self) -> usize {
        self.params.n_molecules
    }

    pub fn eigenstate(&self, label: BlockLabel, level: usize) -> ManifoldState {
        let col = self.subspace(label).eigenvectors.column(level);
        ManifoldState::excitation(self.n_molecules(), label, col.as_slice()).expect("column length is N")
    }

    /// Lowest excited level: its class and energy. Ties go to `HPlus`.
    pub fn lowest_excited(&self) -> (LevelClass, f64) {
        let plus = self.subspace(BlockLabel::HPlus).lowest();
        let one = self.subspace(BlockLabel::HOneUp).lowest();
        if plus <= one {
            (LevelClass::HPlus, plus)
        } else {
            (LevelClass::HOne, one)
        }
    }

    /// `min(HPlus) - min(HOne)`; positive once the `m = +-1` band is lowest.
    pub fn lowest_gap(&self) -> f64 {
        self.subspace(BlockLabel::HPlus).lowest() - self.subspace(BlockLabel::HOneUp).lowest()
    }

    /// All `3N + 1` eigenpairs as `(energy, state)`: ground first, then the
    /// blocks in label order, each ascending.
    pub fn eigenpairs(&self) -> Vec<(f64, ManifoldState)> {
        let n = self.n_molecules();
        let mut out = Vec::with_capacity(manifold_dim(n));
        out.push((self.ground_energy, ManifoldState::ground(n)));
        for label in BlockLabel::ALL {
            let sub = self.subspace(label);
            for k in 0..n {
                out.push((sub.eigenvalues[k], self.eigenstate(label, k)));
            }
        }
        out
    }
}

pub fn solve_manifold(params: &ModelParams) -> Result<ManifoldSpectrum> {
    build_block_hamiltonian(params)?.solve()
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return domain("grid must not be empty");
    }
    if grid.iter().any(|x| !x.is_finite() || *x < 0.0) {
        return domain("field grid values must be finite and >= 0");
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return domain("grid must be strictly ascending");
    }
    Ok(())
}

pub fn solve_on_grid(params: &ModelParams, e_z_grid: &[f64]) -> Result<Vec<ManifoldSpectrum>> {
    check_grid(e_z_grid)?;
    e_z_grid.par_iter().map(|&e_z| solve_manifold(&params.with_field(e_z))).collect()
}

/// Ground, `HPlus` and (doubly degenerate) `HOne` levels at every field.
/// Columns: `e_z, subspace_label, level_index, energy`.
pub fn spectrum_vs_field(params: &ModelParams, e_z_grid: &[f64]) -> Result<ScanResult> {
    let spectra = solve_on_grid(params, e_z_grid)?;
    let mut out = ScanResult::new(&["e_z", "subspace_label", "level_index", "energy"]);
    for (&e_z, spec) in e_z_grid.iter().zip(&spectra) {
        out.push_row(vec![e_z.into(), "ground".into(), 0usize.into(), spec.ground_energy.into()]);
        for (class, label) in [(LevelClass::HPlus, BlockLabel::HPlus), (LevelClass::HOne, BlockLabel::HOneUp)] {
            for (k, &e) in spec.subspace(label).eigenvalues.iter().enumerate() {
                out.push_row(vec![e_z.into(), class.name().into(), k.into(), e.into()]);
            }
        }
    }
    Ok(out)
}

const CROSSING_TOL: f64 = 1e-10;

/// Field where the lowest `HPlus` and lowest `HOne` levels exchange order.
pub fn find_crossing(params: &ModelParams, e_z_lo: f64, e_z_hi: f64) -> Result<f64> {
    if !(e_z_lo.is_finite() && e_z_hi.is_finite() && 0.0 <= e_z_lo && e_z_lo < e_z_hi) {
        return domain(format!("invalid crossing bracket [{e_z_lo}, {e_z_hi}]"));
    }
    let gap = |e_z: f64| solve_manifold(&params.with_field(e_z)).map(|s| s.lowest_gap());
    let (mut lo, mut hi) = (e_z_lo, e_z_hi);
    let (mut g_lo, g_hi) = (gap(lo)?, gap(hi)?);
    if g_lo == 0.0 {
        return Ok(lo);
    }
    if g_hi == 0.0 {
        return Ok(hi);
    }
    if g_lo.signum() == g_hi.signum() {
        return Err(ChainError::NoCrossing { lo: e_z_lo, hi: e_z_hi });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let g = gap(mid)?;
        if g.abs() <= CROSSING_TOL || mid <= lo || mid >= hi {
            return Ok(mid);
        }
        if g.signum() == g_lo.signum() {
            lo = mid;
            g_lo = g;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// A sign change of `E(HPlus, k_plus) - E(HOne, k_one)` between adjacent grid
/// points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelCrossing {
    pub e_z_before: f64,
    pub e_z_after: f64,
    pub plus_level: usize,
    pub one_level: usize,
}

/// Every `HPlus`/`HOne` level pair that changes order across the grid.
pub fn crossing_map(params: &ModelParams, e_z_grid: &[f64]) -> Result<Vec<LevelCrossing>> {
    let spectra = solve_on_grid(params, e_z_grid)?;
    let n = params.n_molecules;
    let mut out = Vec::new();
    for (w, fields) in spectra.windows(2).zip(e_z_grid.windows(2)) {
        for kp in 0..n {
            for ko in 0..n {
                let before = w[0].subspace(BlockLabel::HPlus).eigenvalues[kp]
                    - w[0].subspace(BlockLabel::HOneUp).eigenvalues[ko];
                let after = w[1].subspace(BlockLabel::HPlus).eigenvalues[kp]
                    - w[1].subspace(BlockLabel::HOneUp).eigenvalues[ko];
                if before.signum() != after.signum() {
                    out.push(LevelCrossing {
                        e_z_before: fields[0],
                        e_z_after: fields[1],
                        plus_level: kp,
                        one_level: ko,
                    });
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tridiag::solve_uniform_tridiagonal;

    fn params(n: usize, v: f64, e_z: f64) -> ModelParams {
        ModelParams::new(n, v, e_z).unwrap()
    }

    /// Hand-derived dressed elements: with `a = <-|cos|->`, `b = <-|cos|+>`:
    /// HPlus bonds touching the excitation `+2 v a^2`, hop `-2 v b^2`;
    /// HOne bonds touching the excitation `0`, hop `v cos^2(phi) / 3`;
    /// other bonds `-2 v a^2`.
    #[test]
    fn blocks_match_closed_form() {
        for (n, v, e_z) in [(2, 0.1, 0.0), (5, 0.1, 3.0), (7, 0.05, 12.0), (4, 0.3, 0.7)] {
            let p = params(n, v, e_z);
            let h = build_block_hamiltonian(&p).unwrap();
            let d = dressed_solution(&p);
            let (c, s) = (d.cos_phi, d.sin_phi);
            let a = 2.0 * c * s / 3f64.sqrt();
            let b = (c * c - s * s) / 3f64.sqrt();
            let eg = n as f64 * d.e_minus - (n - 1) as f64 * 2.0 * v * a * a;
            assert!((h.ground_energy - eg).abs() < 1e-13);
            for pos in 0..n {
                let touching = (pos > 0) as usize + (pos + 1 < n) as usize;
                let plus = eg + 2.0 * d.lambda + touching as f64 * 4.0 * v * a * a;
                let one = eg + 2.0 - d.e_minus + touching as f64 * 2.0 * v * a * a;
                assert!((h.block(BlockLabel::HPlus).diag[pos] - plus).abs() < 1e-13);
                assert!((h.block(BlockLabel::HOneUp).diag[pos] - one).abs() < 1e-13);
            }
            assert!(h.block(BlockLabel::HPlus).off.iter().all(|&t| (t + 2.0 * v * b * b).abs() < 1e-14));
            assert!(h.block(BlockLabel::HOneUp).off.iter().all(|&t| (t - v * c * c / 3.0).abs() < 1e-14));
            assert_eq!(h.block(BlockLabel::HOneUp), h.block(BlockLabel::HOneDown));
        }
    }

    #[test]
    fn zero_field_hops_and_flat_diagonal() {
        let v = 0.1;
        let h = build_block_hamiltonian(&params(6, v, 0.0)).unwrap();
        assert!(h.ground_energy.abs() < 1e-15);
        for label in BlockLabel::ALL {
            assert!(h.block(label).diag.iter().all(|&x| (x - 2.0).abs() < 1e-15));
        }
        assert!((h.block(BlockLabel::HPlus).off[0] + 2.0 / 3.0 * v).abs() < 1e-15);
        assert!((h.block(BlockLabel::HOneUp).off[0] - v / 3.0).abs() < 1e-15);
    }

    #[test]
    fn two_molecule_energies() {
        let v = 0.1;
        let s = solve_manifold(&params(2, v, 0.0)).unwrap();
        let plus = &s.subspace(BlockLabel::HPlus).eigenvalues;
        let one = &s.subspace(BlockLabel::HOneUp).eigenvalues;
        assert!((plus[0] - (2.0 - 2.0 / 3.0 * v)).abs() < 1e-12);
        assert!((plus[1] - (2.0 + 2.0 / 3.0 * v)).abs() < 1e-12);
        assert!((one[0] - (2.0 - v / 3.0)).abs() < 1e-12);
        assert!((one[1] - (2.0 + v / 3.0)).abs() < 1e-12);
    }

    #[test]
    fn three_molecule_band() {
        let v = 0.1;
        let s = solve_manifold(&params(3, v, 0.0)).unwrap();
        let plus = &s.subspace(BlockLabel::HPlus).eigenvalues;
        let w = 2.0 * (2.0 / 3.0) * v * (std::f64::consts::PI / 4.0).cos();
        assert!((w - 0.9428 * v).abs() < 1e-4 * v);
        for (x, y) in plus.iter().zip([2.0 - w, 2.0, 2.0 + w]) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_field_matches_uniform_solver() {
        let v = 0.1;
        let s = solve_manifold(&params(50, v, 0.0)).unwrap();
        let closed = solve_uniform_tridiagonal(2.0, -2.0 / 3.0 * v, 50);
        assert!((&s.subspace(BlockLabel::HPlus).eigenvalues - &closed.eigenvalues).amax() < 1e-10);
        assert!((&s.subspace(BlockLabel::HPlus).eigenvectors - &closed.eigenvectors).amax() < 1e-10);
    }

    #[test]
    fn dense_matches_blocks() {
        let h = build_block_hamiltonian(&params(4, 0.1, 2.0)).unwrap();
        let s = h.solve().unwrap();
        let dense = h.dense();
        for (e, state) in s.eigenpairs() {
            let x = state.to_vector().map(|z| z.re);
            assert!((&dense * &x - &x * e).norm() < 1e-12);
            assert!((state.norm_sqr() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn band_edges_at_zero_field_and_large_field() {
        let s = solve_manifold(&params(50, 0.1, 0.0)).unwrap();
        assert_eq!(s.lowest_excited().0, LevelClass::HPlus);
        let s = solve_manifold(&params(50, 0.1, 40.0)).unwrap();
        assert_eq!(s.lowest_excited().0, LevelClass::HOne);
        let top_one = s.subspace(BlockLabel::HOneUp).eigenvalues.max();
        assert!(top_one < s.subspace(BlockLabel::HPlus).lowest());
    }

    #[test]
    fn crossing_for_two_molecules_matches_scalar_root() {
        let v = 0.1;
        let p = params(2, v, 0.0);
        // N = 2 lowest levels in closed form from the 2x2 blocks
        let gap = |e_z: f64| {
            let q = p.with_field(e_z);
            let d = dressed_solution(&q);
            let (c, s) = (d.cos_phi, d.sin_phi);
            let a2 = (2.0 * c * s).powi(2) / 3.0;
            let b2 = (c * c - s * s).powi(2) / 3.0;
            let plus = 2.0 * d.lambda + 4.0 * v * a2 - 2.0 * v * b2;
            let one = 2.0 - d.e_minus + 2.0 * v * a2 - v * c * c / 3.0;
            plus - one
        };
        let (mut lo, mut hi) = (0.0, 50.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if gap(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let found = find_crossing(&p, 0.0, 50.0).unwrap();
        assert!((found - lo).abs() < 1e-7, "{found} vs {lo}");
    }

    #[test]
    fn crossing_errors_without_sign_change() {
        let p = params(10, 0.1, 0.0);
        let star = find_crossing(&p, 0.0, 50.0).unwrap();
        assert!(matches!(find_crossing(&p, star + 1.0, star + 10.0), Err(ChainError::NoCrossing { .. })));
        assert!(find_crossing(&p, 3.0, 1.0).is_err());
    }

    #[test]
    fn spectrum_rows() {
        let p = params(50, 0.1, 0.0);
        let scan = spectrum_vs_field(&p, &[0.0]).unwrap();
        assert_eq!(scan.rows.len(), 1 + 2 * 50);
        assert!(spectrum_vs_field(&p, &[]).is_err());
        assert!(spectrum_vs_field(&p, &[1.0, 0.5]).is_err());
    }

    #[test]
    fn crossing_map_contains_lowest_pair() {
        let p = params(6, 0.1, 0.0);
        let grid: Vec<f64> = (0..=100).map(|i| i as f64 * 0.3).collect();
        let map = crossing_map(&p, &grid).unwrap();
        assert!(map.iter().any(|c| c.plus_level == 0 && c.one_level == 0));
    }

    #[test]
    fn rejects_single_molecule() {
        let p = ModelParams { n_molecules: 1, b_rot: 1.0, v_dip: 0.1, e_z: 0.0 };
        assert!(build_block_hamiltonian(&p).is_err());
    }
}
