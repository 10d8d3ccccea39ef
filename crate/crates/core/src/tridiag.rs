//! Real symmetric tridiagonal eigensolvers (closed form for a uniform chain,
//! implicit QL with Wilkinson shifts otherwise) and dense Hermitian solvers
//! built on them.

use nalgebra::{ComplexField, DMatrix, DVector, SymmetricTridiagonal};

use crate::error::{ChainError, Result};

const MAX_SWEEPS: usize = 64;
const RELATIVE_SWEEPS: usize = 30;

/// Ascending eigenvalues with orthonormal eigenvectors stored as columns.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalEigen {
    pub eigenvalues: DVector<f64>,
    pub eigenvectors: DMatrix<f64>,
}

impl TridiagonalEigen {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    fn sorted(values: Vec<f64>, vectors: DMatrix<f64>) -> Self {
        let n = values.len();
        let mut order: Vec<usize> = (0..n).collect();
        // stable: equal eigenvalues keep solver order
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let eigenvalues = DVector::from_iterator(n, order.iter().map(|&k| values[k]));
        let mut eigenvectors = DMatrix::zeros(n, n);
        for (col, &k) in order.iter().enumerate() {
            eigenvectors.set_column(col, &vectors.column(k));
        }
        let mut out = Self { eigenvalues, eigenvectors };
        out.fix_signs();
        out
    }

    /// Makes the largest-magnitude component of every eigenvector positive
    /// (first one wins on ties), so output is reproducible across solvers.
    pub fn fix_signs(&mut self) {
        for mut col in self.eigenvectors.column_iter_mut() {
            let mut pivot = 0;
            for (i, x) in col.iter().enumerate() {
                if x.abs() > col[pivot].abs() + 1e-9 {
                    pivot = i;
                }
            }
            if col[pivot] < 0.0 {
                col.neg_mut();
            }
        }
    }
}

/// Closed-form spectrum of the `n x n` tridiagonal matrix with constant
/// diagonal `a` and constant off-diagonal `t`:
/// `a + 2 t cos(k pi / (n + 1))`, `sqrt(2 / (n + 1)) sin(p k pi / (n + 1))`.
pub fn solve_uniform_tridiagonal(a: f64, t: f64, n: usize) -> TridiagonalEigen {
    let np1 = (n + 1) as f64;
    let norm = (2.0 / np1).sqrt();
    let values: Vec<f64> = (1..=n)
        .map(|k| a + 2.0 * t * (k as f64 * std::f64::consts::PI / np1).cos())
        .collect();
    let vectors = DMatrix::from_fn(n, n, |p, k| {
        norm * (((p + 1) * (k + 1)) as f64 * std::f64::consts::PI / np1).sin()
    });
    TridiagonalEigen::sorted(values, vectors)
}

/// Full eigendecomposition of the symmetric tridiagonal matrix with diagonal
/// `diag` and off-diagonal `off` (`off[i]` couples `i` and `i + 1`).
pub fn solve_symmetric_tridiagonal(diag: &[f64], off: &[f64]) -> Result<TridiagonalEigen> {
    let n = diag.len();
    if n == 0 {
        return Ok(TridiagonalEigen { eigenvalues: DVector::zeros(0), eigenvectors: DMatrix::zeros(0, 0) });
    }
    if off.len() + 1 != n {
        return Err(ChainError::Domain(format!(
            "off-diagonal has length {} but diagonal has length {n}",
            off.len()
        )));
    }
    if diag.iter().chain(off).any(|x| !x.is_finite()) {
        return Err(ChainError::Domain("tridiagonal entries must be finite".into()));
    }
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(0.0);
    let mut z = DMatrix::identity(n, n);
    implicit_ql(&mut d, &mut e, Some(&mut z))?;
    Ok(TridiagonalEigen::sorted(d, z))
}

/// Ascending eigenvalues of a dense Hermitian matrix (lower triangle is
/// read): Householder reduction to real tridiagonal form, then implicit QL.
pub fn hermitian_eigenvalues<T: ComplexField<RealField = f64>>(m: DMatrix<T>) -> Result<DVector<f64>> {
    let n = square_dim(&m)?;
    if n <= 1 {
        return Ok(DVector::from_iterator(n, m.iter().map(|x| x.clone().real())));
    }
    let (mut d, off) = SymmetricTridiagonal::new(m).unpack_tridiagonal();
    let mut e: Vec<f64> = off.iter().copied().chain(std::iter::once(0.0)).collect();
    implicit_ql(d.as_mut_slice(), &mut e, None)?;
    let mut v: Vec<f64> = d.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    Ok(DVector::from_vec(v))
}

/// Ascending eigenvalues and orthonormal eigenvectors (columns) of a dense
/// Hermitian matrix.
pub fn hermitian_eigen<T: ComplexField<RealField = f64>>(m: DMatrix<T>) -> Result<(DVector<f64>, DMatrix<T>)> {
    let n = square_dim(&m)?;
    if n <= 1 {
        let values = DVector::from_iterator(n, m.iter().map(|x| x.clone().real()));
        return Ok((values, DMatrix::identity(n, n)));
    }
    let (q, diag, off) = SymmetricTridiagonal::new(m).unpack();
    let tri = solve_symmetric_tridiagonal(diag.as_slice(), off.as_slice())?;
    let z = tri.eigenvectors.map(|x| T::from_real(x));
    Ok((tri.eigenvalues, q * z))
}

fn square_dim<T: ComplexField<RealField = f64>>(m: &DMatrix<T>) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(ChainError::Domain(format!("matrix is {}x{}, not square", m.nrows(), m.ncols())));
    }
    if m.iter().any(|x| !x.clone().is_finite()) {
        return Err(ChainError::Domain("matrix entries must be finite".into()));
    }
    Ok(m.nrows())
}

/// Implicit QL iteration; `e[i]` couples rows `i` and `i + 1`, `e[n - 1]` is
/// scratch. Rotations are accumulated into the columns of `z`.
fn implicit_ql(d: &mut [f64], e: &mut [f64], mut z: Option<&mut DMatrix<f64>>) -> Result<()> {
    let n = d.len();
    // relative deflation first; fall back to eps * ||T|| for stubborn
    // clusters of near-zero eigenvalues
    let scale = d.iter().chain(e.iter()).fold(0.0f64, |a, x| a.max(x.abs()));
    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let mut dd = d[m].abs() + d[m + 1].abs();
                if sweeps >= RELATIVE_SWEEPS {
                    dd = dd.max(scale);
                }
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_SWEEPS {
                return Err(ChainError::Domain(format!("QL iteration did not converge for row {l}")));
            }

            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = z.as_deref_mut() {
                    for k in 0..n {
                        let zk = z[(k, i + 1)];
                        z[(k, i + 1)] = s * z[(k, i)] + c * zk;
                        z[(k, i)] = c * z[(k, i)] - s * zk;
                    }
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Dense form, used for residual checks.
pub fn tridiagonal_matrix(diag: &[f64], off: &[f64]) -> DMatrix<f64> {
    let n = diag.len();
    DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            diag[i]
        } else if i + 1 == j {
            off[i]
        } else if j + 1 == i {
            off[j]
        } else {
            0.0
        }
    })
}
