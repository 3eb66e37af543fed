//! Core state types and the one-step update maps.
//!
//! State is a pair `(X, Y)`: `Y` is the `N x m` real opinion matrix (one row
//! per agent, one column per topic) and `X` is the `N x N` appraisal sign
//! matrix with entries in `{-1, 0, 1}`, symmetric with unit diagonal. One
//! step of the dynamics is
//!
//! ```text
//! X(t+1) = sgn( Y(t) Y(t)^T )      entrywise
//! Y(t+1) = (1/N) X(t+1) Y(t)
//! ```
//!
//! Floating-point discipline, so runs are bit-reproducible and fixed points
//! are exact:
//!
//! - inner products for `Y Yᵀ` accumulate left-to-right in `f64`;
//! - the row average in the opinion update uses a streaming (Welford) mean,
//!   `m += (x_k - m)/k`. The streaming mean of identical values is exact,
//!   which makes every balanced state an exact fixed point of the float map,
//!   and it never overshoots the running max by more than one ulp;
//! - `sgn` maps strictly positive to 1, strictly negative to -1 and zero to
//!   0, with `-0.0` treated as `0.0`.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum DynamicsError {
    #[error("opinion matrix must have at least one agent and one topic")]
    EmptyMatrix,
    #[error(
        "rows must all have the same length: row {row} has {got} entries, expected {expected}"
    )]
    RaggedRows {
        row: usize,
        expected: usize,
        got: usize,
    },
    #[error("opinion entry ({row}, {col}) is not finite")]
    NonFiniteEntry { row: usize, col: usize },
    #[error("appraisal entries must be -1, 0 or 1: entry ({row}, {col}) is {value}")]
    InvalidSign { row: usize, col: usize, value: i8 },
    #[error("appraisal matrix must be symmetric: entries ({i}, {j}) and ({j}, {i}) differ")]
    Asymmetric { i: usize, j: usize },
    #[error("appraisal diagonal must be 1: entry ({i}, {i}) is {value}")]
    NonUnitDiagonal { i: usize, value: i8 },
    #[error("agent {row} has an all-zero opinion row; its self-appraisal sign would be 0")]
    ZeroRow { row: usize },
    #[error("agent {row}'s opinion row is so small its self-agreement rounds to 0")]
    RowNormUnderflow { row: usize },
    #[error("agent count mismatch: appraisals cover {appraisal_agents} agents, opinions {opinion_agents}")]
    AgentCountMismatch {
        appraisal_agents: usize,
        opinion_agents: usize,
    },
}

/// Entrywise sign: 1 for strictly positive, -1 for strictly negative, 0
/// otherwise. `-0.0` compares equal to `0.0`, so it maps to 0.
#[inline]
pub fn sgn(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

/// `N x m` real opinion matrix, row-major. Invariants: at least one agent and
/// one topic, every entry finite.
#[derive(Debug, Clone, PartialEq)]
pub struct OpinionMatrix {
    n_agents: usize,
    n_topics: usize,
    data: Vec<f64>,
}

impl OpinionMatrix {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, DynamicsError> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(DynamicsError::EmptyMatrix);
        }
        let n_topics = rows[0].len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n_topics {
                return Err(DynamicsError::RaggedRows {
                    row: i,
                    expected: n_topics,
                    got: row.len(),
                });
            }
        }
        let data: Vec<f64> = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Self::from_flat(rows.len(), n_topics, data)
    }

    pub fn from_flat(
        n_agents: usize,
        n_topics: usize,
        data: Vec<f64>,
    ) -> Result<Self, DynamicsError> {
        if n_agents == 0 || n_topics == 0 {
            return Err(DynamicsError::EmptyMatrix);
        }
        assert_eq!(
            data.len(),
            n_agents * n_topics,
            "flat data length must be N*m"
        );
        for (idx, v) in data.iter().enumerate() {
            if !v.is_finite() {
                return Err(DynamicsError::NonFiniteEntry {
                    row: idx / n_topics,
                    col: idx % n_topics,
                });
            }
        }
        Ok(OpinionMatrix {
            n_agents,
            n_topics,
            data,
        })
    }

    pub fn n_agents(&self) -> usize {
        self.n_agents
    }

    pub fn n_topics(&self) -> usize {
        self.n_topics
    }

    #[inline]
    pub fn get(&self, agent: usize, topic: usize) -> f64 {
        self.data[agent * self.n_topics + topic]
    }

    pub fn row(&self, agent: usize) -> &[f64] {
        &self.data[agent * self.n_topics..(agent + 1) * self.n_topics]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.n_topics)
    }

    /// Largest entry magnitude over the whole matrix.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    /// Largest entry magnitude within one topic column.
    pub fn column_max_abs(&self, topic: usize) -> f64 {
        (0..self.n_agents).fold(0.0, |acc: f64, i| acc.max(self.get(i, topic).abs()))
    }

    /// Entrywise scaling (used for scale-equivariance checks and demos).
    pub fn scaled(&self, c: f64) -> Self {
        OpinionMatrix {
            n_agents: self.n_agents,
            n_topics: self.n_topics,
            data: self.data.iter().map(|v| c * v).collect(),
        }
    }

    pub fn to_matrix(&self) -> crate::numerics::Matrix {
        let mut m = crate::numerics::Matrix::zeros(self.n_agents, self.n_topics);
        for i in 0..self.n_agents {
            for j in 0..self.n_topics {
                m.set(i, j, self.get(i, j));
            }
        }
        m
    }
}

/// `N x N` appraisal sign matrix: entries in `{-1, 0, 1}`, symmetric, unit
/// diagonal. Stored as `i8` so sign comparisons are integer-exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AppraisalMatrix {
    n_agents: usize,
    data: Vec<i8>,
}

impl AppraisalMatrix {
    pub fn from_rows(rows: &[Vec<i8>]) -> Result<Self, DynamicsError> {
        if rows.is_empty() {
            return Err(DynamicsError::EmptyMatrix);
        }
        let n = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(DynamicsError::RaggedRows {
                    row: i,
                    expected: n,
                    got: row.len(),
                });
            }
        }
        let data: Vec<i8> = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Self::from_flat(n, data)
    }

    fn from_flat(n: usize, data: Vec<i8>) -> Result<Self, DynamicsError> {
        for (idx, &v) in data.iter().enumerate() {
            if !(-1..=1).contains(&v) {
                return Err(DynamicsError::InvalidSign {
                    row: idx / n,
                    col: idx % n,
                    value: v,
                });
            }
        }
        for i in 0..n {
            if data[i * n + i] != 1 {
                return Err(DynamicsError::NonUnitDiagonal {
                    i,
                    value: data[i * n + i],
                });
            }
            for j in (i + 1)..n {
                if data[i * n + j] != data[j * n + i] {
                    return Err(DynamicsError::Asymmetric { i, j });
                }
            }
        }
        Ok(AppraisalMatrix { n_agents: n, data })
    }

    /// Construction for values already known to satisfy the invariants
    /// (symmetric assignment, unit diagonal checked by the caller).
    pub(crate) fn from_flat_unchecked(n: usize, data: Vec<i8>) -> Self {
        debug_assert!(Self::from_flat(n, data.clone()).is_ok());
        AppraisalMatrix { n_agents: n, data }
    }

    pub fn n_agents(&self) -> usize {
        self.n_agents
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i8 {
        self.data[i * self.n_agents + j]
    }

    pub fn row(&self, i: usize) -> &[i8] {
        &self.data[i * self.n_agents..(i + 1) * self.n_agents]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[i8]> {
        self.data.chunks_exact(self.n_agents)
    }

    pub fn to_matrix(&self) -> crate::numerics::Matrix {
        let n = self.n_agents;
        let mut m = crate::numerics::Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, f64::from(self.get(i, j)));
            }
        }
        m
    }

    /// The appraisal pattern as an averaging map: `X / N`.
    pub fn scaled_by_count(&self) -> crate::numerics::Matrix {
        self.to_matrix().scaled(1.0 / self.n_agents as f64)
    }
}

/// Which rows/columns of an initial opinion matrix are exactly zero.
/// A zero row makes the self-appraisal sign 0 (the update is undefined);
/// a zero column is a topic nobody cares about — it stays zero forever, so
/// it is reported as a warning-level condition.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub zero_rows: Vec<usize>,
    pub zero_cols: Vec<usize>,
}

impl ValidationReport {
    pub fn is_accepted(&self) -> bool {
        self.zero_rows.is_empty() && self.zero_cols.is_empty()
    }
}

/// Scan an initial opinion matrix for exactly-zero rows and columns.
pub fn validate_initial(y: &OpinionMatrix) -> ValidationReport {
    let zero_rows = (0..y.n_agents())
        .filter(|&i| y.row(i).iter().all(|&v| v == 0.0))
        .collect();
    let zero_cols = (0..y.n_topics())
        .filter(|&j| (0..y.n_agents()).all(|i| y.get(i, j) == 0.0))
        .collect();
    ValidationReport {
        zero_rows,
        zero_cols,
    }
}

/// Raw entrywise sign of `Y Yᵀ` with left-to-right inner products; no
/// unit-diagonal enforcement. Symmetric by construction.
pub(crate) fn sign_gram(y: &OpinionMatrix) -> Vec<i8> {
    let n = y.n_agents();
    let mut out = vec![0i8; n * n];
    for i in 0..n {
        for j in i..n {
            let mut acc = 0.0;
            for k in 0..y.n_topics() {
                acc += y.get(i, k) * y.get(j, k);
            }
            let s = sgn(acc);
            out[i * n + j] = s;
            out[j * n + i] = s;
        }
    }
    out
}

/// Appraisal update `X(t+1) = sgn(Y(t) Y(t)ᵀ)`.
///
/// Fails if any agent's opinion row is all-zero (or so small that its
/// self-agreement underflows), since the diagonal sign would be 0 and the
/// result would leave the space of unit-diagonal sign matrices.
pub fn appraisal_update(y: &OpinionMatrix) -> Result<AppraisalMatrix, DynamicsError> {
    let n = y.n_agents();
    for i in 0..n {
        if y.row(i).iter().all(|&v| v == 0.0) {
            return Err(DynamicsError::ZeroRow { row: i });
        }
    }
    let data = sign_gram(y);
    for i in 0..n {
        if data[i * n + i] != 1 {
            return Err(DynamicsError::RowNormUnderflow { row: i });
        }
    }
    Ok(AppraisalMatrix::from_flat_unchecked(n, data))
}

/// Streaming mean of `signs[k] * y[k][topic]` over all agents `k`, in agent
/// order. This is the shared kernel of the opinion update and of consensus
/// rows, so the two agree bitwise; see the module docs for why a streaming
/// mean rather than sum-then-divide.
pub(crate) fn signed_column_mean(y: &OpinionMatrix, signs: &[i8], topic: usize) -> f64 {
    debug_assert_eq!(signs.len(), y.n_agents());
    let mut mean = 0.0;
    for (k, &sign) in signs.iter().enumerate() {
        let term = f64::from(sign) * y.get(k, topic);
        mean += (term - mean) / (k + 1) as f64;
    }
    mean
}

/// Opinion update `Y(t+1) = (1/N) X Y(t)`: every agent moves to the
/// appraisal-signed average of all opinions, divided by the number of agents
/// `N` (not by the number of nonzero appraisals).
pub fn opinion_update(
    x: &AppraisalMatrix,
    y: &OpinionMatrix,
) -> Result<OpinionMatrix, DynamicsError> {
    if x.n_agents() != y.n_agents() {
        return Err(DynamicsError::AgentCountMismatch {
            appraisal_agents: x.n_agents(),
            opinion_agents: y.n_agents(),
        });
    }
    let (n, m) = (y.n_agents(), y.n_topics());
    let mut data = vec![0.0; n * m];
    for i in 0..n {
        let signs = x.row(i);
        for j in 0..m {
            data[i * m + j] = signed_column_mean(y, signs, j);
        }
    }
    Ok(OpinionMatrix {
        n_agents: n,
        n_topics: m,
        data,
    })
}

/// One synchronous state of the dynamics. `appraisals` is `None` only at
/// `step_index = 0` (the map defines `X` from step 1 on).
#[derive(Debug, Clone, PartialEq)]
pub struct ModelState {
    pub opinions: OpinionMatrix,
    pub appraisals: Option<AppraisalMatrix>,
    pub step_index: usize,
}

impl ModelState {
    pub fn initial(opinions: OpinionMatrix) -> Self {
        ModelState {
            opinions,
            appraisals: None,
            step_index: 0,
        }
    }
}

/// Advance one full step: appraisals from the current opinions, then the
/// appraisal-averaged opinion move.
pub fn step(state: &ModelState) -> Result<ModelState, DynamicsError> {
    let x = appraisal_update(&state.opinions)?;
    let y_next = opinion_update(&x, &state.opinions)?;
    Ok(ModelState {
        opinions: y_next,
        appraisals: Some(x),
        step_index: state.step_index + 1,
    })
}
