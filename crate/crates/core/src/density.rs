//! Density matrices on explicit tensor-product spaces, partial transposes and
//! logarithmic negativity.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::tridiag::hermitian_eigenvalues;

/// Eigenvalues of a partial transpose with magnitude below this are noise.
pub const NEGATIVITY_CUTOFF: f64 = 1e-10;

const TRACE_TOL: f64 = 1e-10;
const HERMITIAN_TOL: f64 = 1e-12;
const POSITIVITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    matrix: DMatrix<Complex64>,
}

fn digits(mut index: usize, dims: &[usize], out: &mut [usize]) {
    for k in (0..dims.len()).rev() {
        out[k] = index % dims[k];
        index /= dims[k];
    }
}

fn compose(digits: &[usize], dims: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (&d, &n)| acc * n + d)
}

impl DensityMatrix {
    /// Wraps a matrix without normalizing it; call [`DensityMatrix::validate`]
    /// to check the state invariants.
    pub fn new(dims: &[usize], matrix: DMatrix<Complex64>) -> Result<Self> {
        let total: usize = dims.iter().product();
        if dims.is_empty() || dims.contains(&0) {
            return domain("subsystem dimensions must be non-empty and positive");
        }
        if matrix.nrows() != total || matrix.ncols() != total {
            return domain(format!(
                "matrix is {}x{} but dims {:?} need {total}x{total}",
                matrix.nrows(),
                matrix.ncols(),
                dims
            ));
        }
        Ok(Self { dims: dims.to_vec(), matrix })
    }

    pub fn pure(dims: &[usize], psi: &DVector<Complex64>) -> Result<Self> {
        Self::mixture(dims, &[(1.0, psi.clone())])
    }

    /// `sum_k p_k |psi_k><psi_k|`; probabilities are used as given.
    pub fn mixture(dims: &[usize], terms: &[(f64, DVector<Complex64>)]) -> Result<Self> {
        let total: usize = dims.iter().product();
        let mut m = DMatrix::from_element(total, total, Complex64::new(0.0, 0.0));
        for (p, psi) in terms {
            if psi.len() != total {
                return domain(format!("state has length {} but dims need {total}", psi.len()));
            }
            m.gerc(Complex64::new(*p, 0.0), psi, psi, Complex64::new(1.0, 0.0));
        }
        Self::new(dims, m)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn hermiticity_error(&self) -> f64 {
        let n = self.matrix.nrows();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn eigenvalues(&self) -> Result<DVector<f64>> {
        hermitian_eigenvalues(self.matrix.clone())
    }

    /// Unit trace, Hermitian, positive semidefinite.
    pub fn validate(&self) -> Result<()> {
        let tr = self.trace();
        if (tr - 1.0).abs() > TRACE_TOL {
            return domain(format!("density matrix trace is {tr}"));
        }
        let herm = self.hermiticity_error();
        if herm > HERMITIAN_TOL {
            return domain(format!("density matrix is not Hermitian (deviation {herm:e})"));
        }
        let min = self.eigenvalues()?.min();
        if min < -POSITIVITY_TOL {
            return domain(format!("density matrix has negative eigenvalue {min:e}"));
        }
        Ok(())
    }

    fn check_subsystems(&self, subsystems: &[usize]) -> Result<()> {
        for &s in subsystems {
            if s >= self.dims.len() {
                return domain(format!("subsystem {s} out of range for {} factors", self.dims.len()));
            }
        }
        Ok(())
    }

    /// Transposes the listed tensor factors, leaving the others untouched.
    pub fn partial_transpose(&self, subsystems: &[usize]) -> Result<DMatrix<Complex64>> {
        self.check_subsystems(subsystems)?;
        let n = self.matrix.nrows();
        let k = self.dims.len();
        let mut mask = vec![false; k];
        for &s in subsystems {
            mask[s] = true;
        }
        let mut out = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
        let (mut di, mut dj) = (vec![0; k], vec![0; k]);
        for i in 0..n {
            for j in 0..n {
                let z = self.matrix[(i, j)];
                if z == Complex64::new(0.0, 0.0) {
                    continue;
                }
                digits(i, &self.dims, &mut di);
                digits(j, &self.dims, &mut dj);
                for s in 0..k {
                    if mask[s] {
                        std::mem::swap(&mut di[s], &mut dj[s]);
                    }
                }
                out[(compose(&di, &self.dims), compose(&dj, &self.dims))] = z;
            }
        }
        Ok(out)
    }

    /// Negativity and logarithmic negativity `log2(2 N + 1)` across the cut
    /// `a | b`, which must partition all factors.
    pub fn negativity(&self, a: &[usize], b: &[usize]) -> Result<f64> {
        self.check_subsystems(a)?;
        self.check_subsystems(b)?;
        let mut seen = vec![0u8; self.dims.len()];
        for &s in a.iter().chain(b) {
            seen[s] += 1;
        }
        if seen.iter().any(|&c| c != 1) {
            return domain(format!("bipartition {a:?} | {b:?} must cover every factor exactly once"));
        }
        if a.is_empty() || b.is_empty() {
            return Ok(0.0);
        }
        let pt = self.partial_transpose(b)?;
        negativity_of_hermitian(pt)
    }

    pub fn log_negativity(&self, a: &[usize], b: &[usize]) -> Result<f64> {
        Ok(log_negativity_from(self.negativity(a, b)?))
    }

    /// Reduced state on `keep` (in ascending factor order).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        self.check_subsystems(keep)?;
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let k = self.dims.len();
        let kept_dims: Vec<usize> = keep.iter().map(|&s| self.dims[s]).collect();
        let m: usize = kept_dims.iter().product();
        let n = self.matrix.nrows();
        let mut out = DMatrix::from_element(m, m, Complex64::new(0.0, 0.0));
        let traced: Vec<usize> = (0..k).filter(|s| !keep.contains(s)).collect();
        let (mut di, mut dj) = (vec![0; k], vec![0; k]);
        let (mut ki, mut kj) = (vec![0; keep.len()], vec![0; keep.len()]);
        for i in 0..n {
            digits(i, &self.dims, &mut di);
            for j in 0..n {
                let z = self.matrix[(i, j)];
                if z == Complex64::new(0.0, 0.0) {
                    continue;
                }
                digits(j, &self.dims, &mut dj);
                if traced.iter().any(|&s| di[s] != dj[s]) {
                    continue;
                }
                for (slot, &s) in keep.iter().enumerate() {
                    ki[slot] = di[s];
                    kj[slot] = dj[s];
                }
                out[(compose(&ki, &kept_dims), compose(&kj, &kept_dims))] += z;
            }
        }
        DensityMatrix::new(&kept_dims, out)
    }

    pub fn expectation(&self, op: &DMatrix<Complex64>) -> f64 {
        (&self.matrix * op).trace().re
    }

    pub fn variance(&self, op: &DMatrix<Complex64>) -> f64 {
        let mean = self.expectation(op);
        self.expectation(&(op * op)) - mean * mean
    }
}

/// Sum of magnitudes of eigenvalues below `-NEGATIVITY_CUTOFF`.
pub fn negativity_of_hermitian(m: DMatrix<Complex64>) -> Result<f64> {
    Ok(hermitian_eigenvalues(m)?.iter().filter(|&&x| x < -NEGATIVITY_CUTOFF).map(|x| -x).sum())
}

pub fn log_negativity_from(negativity: f64) -> f64 {
    (2.0 * negativity + 1.0).log2()
}
