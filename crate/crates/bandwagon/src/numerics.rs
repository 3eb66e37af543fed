//! Small dense-matrix numerics: symmetric eigenvalues and numerical rank.
//!
//! The solver is a cyclic Jacobi rotation scheme, good to about `1e-9`
//! absolute accuracy for symmetric matrices up to a few hundred rows. That is
//! all this crate needs — inputs are appraisal sign patterns scaled by `1/N`
//! and small Gram matrices — and keeping it in-house means eigenvalue checks
//! stay an independent route from the combinatorial balance certificates,
//! with no linear-algebra dependency.

use thiserror::Error;

/// Relative symmetry tolerance accepted on input (entrywise).
const SYMMETRY_TOL: f64 = 1e-12;
/// Convergence target: off-diagonal Frobenius norm below `JACOBI_REL_TOL * ||M||_F`.
const JACOBI_REL_TOL: f64 = 1e-12;
/// Cyclic Jacobi converges quadratically; well under 64 sweeps in practice.
const MAX_SWEEPS: usize = 64;

#[derive(Debug, Error, PartialEq)]
pub enum NumericsError {
    #[error("matrix must be square, got {n_rows}x{n_cols}")]
    NotSquare { n_rows: usize, n_cols: usize },
    #[error("matrix must be symmetric: entries ({i},{j}) and ({j},{i}) differ by {delta:e}")]
    NotSymmetric { i: usize, j: usize, delta: f64 },
    #[error("matrix must have at least one row and one column")]
    Empty,
    #[error(
        "rows must all have the same length: row {row} has {got} entries, expected {expected}"
    )]
    RaggedRows {
        row: usize,
        expected: usize,
        got: usize,
    },
    #[error("eigenvalue iteration did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
}

/// Dense row-major matrix of `f64`. All reductions over entries run in a
/// fixed order so results are bit-reproducible.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    n_rows: usize,
    n_cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        assert!(
            n_rows >= 1 && n_cols >= 1,
            "matrix dimensions must be positive"
        );
        Matrix {
            n_rows,
            n_cols,
            data: vec![0.0; n_rows * n_cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, NumericsError> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(NumericsError::Empty);
        }
        let n_cols = rows[0].len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n_cols {
                return Err(NumericsError::RaggedRows {
                    row: i,
                    expected: n_cols,
                    got: row.len(),
                });
            }
        }
        let data = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Ok(Matrix {
            n_rows: rows.len(),
            n_cols,
            data,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n_cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n_cols + j] = v;
    }

    /// Entrywise scaling; `c = 1/N` turns a sign pattern into its averaging map.
    pub fn scaled(&self, c: f64) -> Self {
        Matrix {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            data: self.data.iter().map(|v| c * v).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        let mut acc = 0.0;
        for v in &self.data {
            acc += v * v;
        }
        acc.sqrt()
    }

    /// Gram matrix over the smaller side: `M Mᵀ` if the matrix is wide,
    /// `Mᵀ M` if it is tall. Symmetric by construction (each pair assigned once).
    fn gram_smaller_side(&self) -> Matrix {
        let transpose_first = self.n_rows > self.n_cols;
        let n = self.n_rows.min(self.n_cols);
        let k_len = self.n_rows.max(self.n_cols);
        let mut g = Matrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let mut acc = 0.0;
                for k in 0..k_len {
                    let (a, b) = if transpose_first {
                        (self.get(k, i), self.get(k, j))
                    } else {
                        (self.get(i, k), self.get(j, k))
                    };
                    acc += a * b;
                }
                g.set(i, j, acc);
                g.set(j, i, acc);
            }
        }
        g
    }
}

/// Eigenvalues of a symmetric matrix, sorted ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
}

impl Spectrum {
    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        *self.eigenvalues.last().expect("spectrum is never empty")
    }

    pub fn spectral_radius(&self) -> f64 {
        self.min().abs().max(self.max().abs())
    }
}

fn off_diagonal_norm(a: &Matrix) -> f64 {
    let n = a.n_rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let v = a.get(i, j);
                acc += v * v;
            }
        }
    }
    acc.sqrt()
}

/// All eigenvalues of a symmetric matrix via cyclic Jacobi rotations.
///
/// The input must be square and symmetric to within `1e-12` entrywise; the
/// upper triangle is taken as authoritative. Iteration stops once the
/// off-diagonal Frobenius norm drops below `1e-12 * ||M||_F`, which gives
/// roughly `1e-9` absolute eigenvalue accuracy for the matrix sizes used
/// here (up to a few hundred rows).
pub fn symmetric_eigenvalues(m: &Matrix) -> Result<Spectrum, NumericsError> {
    if m.n_rows() != m.n_cols() {
        return Err(NumericsError::NotSquare {
            n_rows: m.n_rows(),
            n_cols: m.n_cols(),
        });
    }
    let n = m.n_rows();
    for i in 0..n {
        for j in (i + 1)..n {
            let delta = (m.get(i, j) - m.get(j, i)).abs();
            if delta > SYMMETRY_TOL {
                return Err(NumericsError::NotSymmetric { i, j, delta });
            }
        }
    }

    // Work on an exactly symmetric copy (upper triangle mirrored down).
    let mut a = m.clone();
    for i in 0..n {
        for j in (i + 1)..n {
            a.set(j, i, a.get(i, j));
        }
    }

    let norm = a.frobenius_norm();
    if norm == 0.0 {
        return Ok(Spectrum {
            eigenvalues: vec![0.0; n],
        });
    }
    let target = JACOBI_REL_TOL * norm;

    let mut converged = false;
    for _sweep in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let app = a.get(p, p);
                let aqq = a.get(q, q);
                // tan of the rotation angle; the smaller root keeps |t| <= 1.
                let theta = 0.5 * (aqq - app) / apq;
                let t = if theta.is_finite() {
                    let root = (1.0 + theta * theta).sqrt();
                    if root.is_finite() {
                        if theta >= 0.0 {
                            1.0 / (theta + root)
                        } else {
                            1.0 / (theta - root)
                        }
                    } else {
                        // theta^2 overflowed: the rotation is negligibly small
                        // and zeroing apq perturbs eigenvalues by < 1e-300.
                        0.0
                    }
                } else {
                    0.0
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                a.set(p, p, app - t * apq);
                a.set(q, q, aqq + t * apq);
                a.set(p, q, 0.0);
                a.set(q, p, 0.0);
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, c * akp - s * akq);
                    a.set(p, k, c * akp - s * akq);
                    a.set(k, q, s * akp + c * akq);
                    a.set(q, k, s * akp + c * akq);
                }
            }
        }
    }
    if !converged && off_diagonal_norm(&a) > target {
        return Err(NumericsError::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let mut eigenvalues: Vec<f64> = (0..n).map(|i| a.get(i, i)).collect();
    eigenvalues.sort_by(|x, y| x.total_cmp(y));
    Ok(Spectrum { eigenvalues })
}

/// Number of singular values above `tol`, computed from the eigenvalues of
/// the smaller-side Gram matrix (singular values are their square roots).
///
/// `tol = None` uses `1e-9 * max(n_rows, n_cols) * max|M_ij|`, which is `0`
/// only for the all-zero matrix (whose rank is 0 either way).
pub fn numerical_rank(m: &Matrix, tol: Option<f64>) -> usize {
    let tol = tol.unwrap_or_else(|| 1e-9 * m.n_rows().max(m.n_cols()) as f64 * m.max_abs());
    let gram = m.gram_smaller_side();
    let spectrum = symmetric_eigenvalues(&gram)
        .expect("gram matrix is square and exactly symmetric by construction");
    // Eigenvalues of the Gram matrix carry absolute noise of order
    // eps * lambda_max; below that floor a square root would manufacture
    // singular values of order sqrt(eps) * sigma_max out of rounding error.
    let lambda_max = spectrum.max().max(0.0);
    let floor = gram.n_rows() as f64 * f64::EPSILON * lambda_max;
    spectrum
        .eigenvalues
        .iter()
        .filter(|&&lambda| lambda > floor)
        .map(|&lambda| lambda.sqrt())
        .filter(|&sv| sv > tol)
        .count()
}
