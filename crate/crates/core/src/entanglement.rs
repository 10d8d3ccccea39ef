//! Entanglement and `J_z` observables for states on the
//! `{ground, one excitation}` manifold.
//!
//! Site positions in this module are 1-based, so `one_vs_rest_l(rho, 1)` is
//! the first molecule of the chain.
//!
//! A manifold state never has more than one excited molecule, so reduced
//! states and partial transposes can be assembled directly from manifold
//! matrix elements without ever forming the `4^N` space.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::density::{log_negativity_from, negativity_of_hermitian, DensityMatrix};
use crate::error::{domain, Result};
use crate::manifold::{manifold_dim, manifold_index, BlockLabel, ManifoldState};
use crate::model::SITE_DIM;

const PROBABILITY_TOL: f64 = 1e-12;

/// Density operator supported on the `3N + 1` manifold basis
/// (ground first, then sites ascending, flavors `+`, `m=+1`, `m=-1`).
#[derive(Debug, Clone, PartialEq)]
pub struct ManifoldDensity {
    n_molecules: usize,
    matrix: DMatrix<Complex64>,
}

impl ManifoldDensity {
    pub fn pure(state: &ManifoldState) -> Result<Self> {
        Self::mixture(&[(1.0, state.clone())])
    }

    pub fn ground(n: usize) -> Self {
        Self::pure(&ManifoldState::ground(n)).expect("ground state is normalized")
    }

    /// Convex combination of normalized manifold states.
    pub fn mixture(terms: &[(f64, ManifoldState)]) -> Result<Self> {
        let Some((_, first)) = terms.first() else {
            return domain("mixture needs at least one state");
        };
        let n = first.n_molecules;
        let dim = manifold_dim(n);
        let mut total = 0.0;
        let mut m = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
        for (p, state) in terms {
            if state.n_molecules != n {
                return domain("all states of a mixture must share N");
            }
            if !(p.is_finite() && *p >= 0.0) {
                return domain(format!("mixture weight {p} is negative or non-finite"));
            }
            if (state.norm_sqr() - 1.0).abs() > PROBABILITY_TOL {
                return domain(format!("manifold state has norm^2 {}", state.norm_sqr()));
            }
            total += p;
            let v = state.to_vector();
            m.gerc(Complex64::new(*p, 0.0), &v, &v, Complex64::new(1.0, 0.0));
        }
        if (total - 1.0).abs() > PROBABILITY_TOL {
            return domain(format!("mixture weights sum to {total}"));
        }
        Ok(Self { n_molecules: n, matrix: m })
    }

    pub fn from_matrix(n: usize, matrix: DMatrix<Complex64>) -> Result<Self> {
        let dim = manifold_dim(n);
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return domain(format!("manifold density for N = {n} must be {dim}x{dim}"));
        }
        Ok(Self { n_molecules: n, matrix })
    }

    pub fn n_molecules(&self) -> usize {
        self.n_molecules
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// Same invariants as a density matrix on the manifold basis.
    pub fn validate(&self) -> Result<()> {
        DensityMatrix::new(&[manifold_dim(self.n_molecules)], self.matrix.clone())?.validate()
    }

    fn check_site(&self, site: usize) -> Result<usize> {
        if site == 0 || site > self.n_molecules {
            return domain(format!("site {site} outside 1..={}", self.n_molecules));
        }
        Ok(site - 1)
    }
}

/// Two-site reduced state on the dressed `4 x 4` pair space
/// (index `4 * s_i + s_j`).
pub fn pair_reduced(rho: &ManifoldDensity, i: usize, j: usize) -> Result<DensityMatrix> {
    let a = rho.check_site(i)?;
    let b = rho.check_site(j)?;
    if a == b {
        return domain("pair sites must differ");
    }
    let (a, b) = (a.min(b), a.max(b));
    let n = rho.n_molecules;

    // manifold index -> pair index, for configurations whose environment is
    // entirely in the local ground state
    let mut local: Vec<(usize, usize)> = vec![(0, 0)];
    for label in BlockLabel::ALL {
        let s = label.site_state();
        local.push((manifold_index(a, label), SITE_DIM * s));
        local.push((manifold_index(b, label), s));
    }
    let mut out = DMatrix::from_element(SITE_DIM * SITE_DIM, SITE_DIM * SITE_DIM, Complex64::new(0.0, 0.0));
    for &(mi, pi) in &local {
        for &(mj, pj) in &local {
            out[(pi, pj)] += rho.matrix[(mi, mj)];
        }
    }
    // excitation elsewhere: both sites in the local ground state
    for q in (0..n).filter(|&q| q != a && q != b) {
        for label in BlockLabel::ALL {
            let k = manifold_index(q, label);
            out[(0, 0)] += rho.matrix[(k, k)];
        }
    }
    DensityMatrix::new(&[SITE_DIM, SITE_DIM], out)
}

pub fn pair_log_negativity(rho: &ManifoldDensity, i: usize, j: usize) -> Result<f64> {
    pair_reduced(rho, i, j)?.log_negativity(&[0], &[1])
}

/// `L_d`: pair logarithmic negativity summed over all pairs at distance `d`.
pub fn pairwise_l_sum(rho: &ManifoldDensity, d: usize) -> Result<f64> {
    Ok(pairwise_l_terms(rho, d)?.iter().sum())
}

/// The individual terms of `L_d`, ordered by the left site.
pub fn pairwise_l_terms(rho: &ManifoldDensity, d: usize) -> Result<Vec<f64>> {
    let n = rho.n_molecules;
    if d == 0 || d >= n {
        return domain(format!("distance {d} outside 1..={}", n - 1));
    }
    (1..=n - d).into_par_iter().map(|i| pair_log_negativity(rho, i, i + d)).collect()
}

/// Index of a rest-of-chain configuration: 0 for all-ground, then sites
/// ascending (skipping `p`), flavors `+`, `m=+1`, `m=-1`.
fn rest_index(q: usize, p: usize, label: BlockLabel) -> usize {
    let q_rest = if q < p { q } else { q - 1 };
    1 + 3 * q_rest + label.flavor()
}

/// The state on the explicit product space `site p (4) x rest (3(N-1) + 1)`.
pub fn one_vs_rest_embedding(rho: &ManifoldDensity, p: usize) -> Result<DensityMatrix> {
    let p0 = rho.check_site(p)?;
    let n = rho.n_molecules;
    let rest = 3 * (n - 1) + 1;
    let mut map = vec![0usize; manifold_dim(n)];
    map[0] = 0;
    for q in 0..n {
        for label in BlockLabel::ALL {
            map[manifold_index(q, label)] = if q == p0 {
                label.site_state() * rest
            } else {
                rest_index(q, p0, label)
            };
        }
    }
    let dim = SITE_DIM * rest;
    let mut out = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    for (i, &ii) in map.iter().enumerate() {
        for (j, &jj) in map.iter().enumerate() {
            out[(ii, jj)] = rho.matrix[(i, j)];
        }
    }
    DensityMatrix::new(&[SITE_DIM, rest], out)
}

/// `L'_p`: logarithmic negativity of molecule `p` against the rest.
///
/// Transposing the single-site factor maps the embedded state onto the
/// manifold indices plus the products `(site excited) x (rest excited)`.
/// Those products couple only to the all-ground configuration, so they
/// collapse onto one extra basis vector whose coupling is the norm of the
/// coherences between `p` and the rest. The result has dimension `3N + 2`.
pub fn one_vs_rest_l(rho: &ManifoldDensity, p: usize) -> Result<f64> {
    Ok(log_negativity_from(one_vs_rest_negativity(rho, p)?))
}

pub fn one_vs_rest_negativity(rho: &ManifoldDensity, p: usize) -> Result<f64> {
    let p0 = rho.check_site(p)?;
    let n = rho.n_molecules;
    let dim = manifold_dim(n);
    let local: Vec<usize> =
        std::iter::once(0).chain(BlockLabel::ALL.iter().map(|&l| manifold_index(p0, l))).collect();
    let is_local = |k: usize| local.contains(&k);

    let mut pt = DMatrix::from_element(dim + 1, dim + 1, Complex64::new(0.0, 0.0));
    let mut coupling = 0.0;
    for i in 0..dim {
        for j in 0..dim {
            let z = rho.matrix[(i, j)];
            match (is_local(i), is_local(j)) {
                (true, true) => pt[(j, i)] = z,
                (false, false) => pt[(i, j)] = z,
                // ground <-> rest coherences survive unchanged
                _ if i == 0 || j == 0 => pt[(i, j)] = z,
                (true, false) => coupling += z.norm_sqr(),
                (false, true) => {}
            }
        }
    }
    let coupling = Complex64::new(coupling.sqrt(), 0.0);
    pt[(0, dim)] = coupling;
    pt[(dim, 0)] = coupling;
    negativity_of_hermitian(pt)
}

/// `m` content of each manifold basis vector.
fn m_values(n: usize) -> DVector<f64> {
    let mut m = DVector::zeros(manifold_dim(n));
    for p in 0..n {
        for label in BlockLabel::ALL {
            m[manifold_index(p, label)] = label.m() as f64;
        }
    }
    m
}

/// `(Delta J_z)^2` of the total angular-momentum projection. `J_z` is
/// diagonal on the manifold basis, so only populations enter.
pub fn jz_variance(rho: &ManifoldDensity) -> f64 {
    let m = m_values(rho.n_molecules);
    let (mut mean, mut second) = (0.0, 0.0);
    for (k, mk) in m.iter().enumerate() {
        let w = rho.matrix[(k, k)].re;
        mean += w * mk;
        second += w * mk * mk;
    }
    second - mean * mean
}
