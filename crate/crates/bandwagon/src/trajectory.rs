//! Run trajectories to their outcome and probe equilibria.
//!
//! Every trajectory of the update map does exactly one of three things:
//!
//! - the appraisal pattern becomes structurally balanced at some finite step
//!   `t0`, after which `(X, Y)` is an exact fixed point with opinions
//!   `Y = p · a` (faction vector times consensus row);
//! - opinions contract to zero without ever balancing;
//! - neither happens within the step budget.
//!
//! Equilibrium detection is the integer-exact balance test on `X`, not a
//! floating comparison of consecutive `Y`s; the two are equivalent for this
//! map, and the sign test is robust. The Lyapunov function
//! `V(Y) = Σ_j max_i |Y_ij|` (sum of column maxima) is non-increasing along
//! trajectories and strictly decreasing over two steps while the pattern
//! stays unbalanced, which is what drives classification in finite time.

use thiserror::Error;

use crate::dynamics::{
    appraisal_update, opinion_update, sign_gram, signed_column_mean, validate_initial,
    AppraisalMatrix, DynamicsError, OpinionMatrix,
};
use crate::signed::{certify_balance, FactionVector};

#[derive(Debug, Error, PartialEq)]
pub enum TrajectoryError {
    #[error("initial opinions rejected: agents {rows:?} have all-zero rows")]
    InvalidInitial { rows: Vec<usize> },
    #[error("step budget must be at least 1")]
    ZeroBudget,
    #[error("zero tolerance must be strictly positive, got {0}")]
    NonPositiveZeroTol(f64),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

/// A balanced fixed point: `appraisals = p pᵀ` and every opinion row `i`
/// equals `faction[i] * consensus_row` exactly. The consensus row is the
/// faction-signed column mean of the opinions one step before hitting.
#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumPoint {
    pub appraisals: AppraisalMatrix,
    pub opinions: OpinionMatrix,
    pub faction: FactionVector,
    pub consensus_row: Vec<f64>,
}

/// One scalar trace record: step index, Lyapunov value of `Y(t)`, and
/// whether `X(t)` was balanced (`false` at `t = 0`, where `X` is undefined).
#[derive(Debug, Clone, PartialEq)]
pub struct TraceEntry {
    pub step: usize,
    pub lyapunov: f64,
    pub balanced: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OutcomeKind {
    BalancedEquilibrium,
    VanishedToZero,
    BudgetExceeded,
}

impl std::fmt::Display for OutcomeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            OutcomeKind::BalancedEquilibrium => "BalancedEquilibrium",
            OutcomeKind::VanishedToZero => "VanishedToZero",
            OutcomeKind::BudgetExceeded => "BudgetExceeded",
        };
        f.write_str(name)
    }
}

/// Classified end of a trajectory. `final_appraisals` is the last appraisal
/// pattern computed before stopping (`None` only if the run stopped before
/// any appraisal, e.g. opinions already under the zero tolerance at `t = 0`).
#[derive(Debug, Clone, PartialEq)]
pub enum TrajectoryOutcome {
    BalancedEquilibrium {
        hitting_time: usize,
        equilibrium: EquilibriumPoint,
        final_lyapunov: f64,
        trace: Option<Vec<TraceEntry>>,
    },
    VanishedToZero {
        hitting_time: usize,
        final_appraisals: Option<AppraisalMatrix>,
        final_lyapunov: f64,
        trace: Option<Vec<TraceEntry>>,
    },
    BudgetExceeded {
        final_appraisals: Option<AppraisalMatrix>,
        final_lyapunov: f64,
        trace: Option<Vec<TraceEntry>>,
    },
}

impl TrajectoryOutcome {
    pub fn kind(&self) -> OutcomeKind {
        match self {
            TrajectoryOutcome::BalancedEquilibrium { .. } => OutcomeKind::BalancedEquilibrium,
            TrajectoryOutcome::VanishedToZero { .. } => OutcomeKind::VanishedToZero,
            TrajectoryOutcome::BudgetExceeded { .. } => OutcomeKind::BudgetExceeded,
        }
    }

    /// First step at which the outcome condition held (absent for budget runs).
    pub fn hitting_time(&self) -> Option<usize> {
        match self {
            TrajectoryOutcome::BalancedEquilibrium { hitting_time, .. }
            | TrajectoryOutcome::VanishedToZero { hitting_time, .. } => Some(*hitting_time),
            TrajectoryOutcome::BudgetExceeded { .. } => None,
        }
    }

    pub fn final_lyapunov(&self) -> f64 {
        match self {
            TrajectoryOutcome::BalancedEquilibrium { final_lyapunov, .. }
            | TrajectoryOutcome::VanishedToZero { final_lyapunov, .. }
            | TrajectoryOutcome::BudgetExceeded { final_lyapunov, .. } => *final_lyapunov,
        }
    }

    pub fn trace(&self) -> Option<&[TraceEntry]> {
        match self {
            TrajectoryOutcome::BalancedEquilibrium { trace, .. }
            | TrajectoryOutcome::VanishedToZero { trace, .. }
            | TrajectoryOutcome::BudgetExceeded { trace, .. } => trace.as_deref(),
        }
    }

    pub fn equilibrium(&self) -> Option<&EquilibriumPoint> {
        match self {
            TrajectoryOutcome::BalancedEquilibrium { equilibrium, .. } => Some(equilibrium),
            _ => None,
        }
    }

    pub fn final_appraisals(&self) -> Option<&AppraisalMatrix> {
        match self {
            TrajectoryOutcome::BalancedEquilibrium { equilibrium, .. } => {
                Some(&equilibrium.appraisals)
            }
            TrajectoryOutcome::VanishedToZero {
                final_appraisals, ..
            }
            | TrajectoryOutcome::BudgetExceeded {
                final_appraisals, ..
            } => final_appraisals.as_ref(),
        }
    }
}

/// Membership in the set of unit-diagonal symmetric sign patterns that are
/// *not* balanced — the patterns along which opinions keep contracting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StableSetMembership {
    pub in_stable_unbalanced_set: bool,
}

/// `V(Y) = Σ_j max_i |Y_ij|`: sum over topics of the largest opinion
/// magnitude. Columns are summed left to right.
pub fn lyapunov(y: &OpinionMatrix) -> f64 {
    let mut acc = 0.0;
    for j in 0..y.n_topics() {
        acc += y.column_max_abs(j);
    }
    acc
}

/// Is `(X, Y)` a fixed point? True iff `X = sgn(Y Yᵀ)` exactly and
/// `max |Y - (1/N) X Y| <= tol`; `tol = 0` demands the exact float fixed
/// point.
pub fn is_equilibrium(x: &AppraisalMatrix, y: &OpinionMatrix, tol: f64) -> bool {
    assert_eq!(x.n_agents(), y.n_agents(), "agent counts must agree");
    assert!(tol >= 0.0, "tolerance must be nonnegative");
    let n = x.n_agents();
    let gram = sign_gram(y);
    for i in 0..n {
        for j in 0..n {
            if gram[i * n + j] != x.get(i, j) {
                return false;
            }
        }
    }
    let next = opinion_update(x, y).expect("agent counts agree");
    let mut max_diff = 0.0f64;
    for i in 0..n {
        for j in 0..y.n_topics() {
            max_diff = max_diff.max((y.get(i, j) - next.get(i, j)).abs());
        }
    }
    max_diff <= tol
}

/// Run the dynamics from `y0` until one of: the appraisal pattern is
/// balanced (the trajectory is then at an exact fixed point), all opinion
/// magnitudes fall below `zero_tol`, or `budget` steps have been taken.
///
/// `record_trace` keeps the per-step `(t, V(Y(t)), balanced)` sequence on
/// the outcome.
pub fn run_trajectory(
    y0: &OpinionMatrix,
    budget: usize,
    zero_tol: f64,
    record_trace: bool,
) -> Result<TrajectoryOutcome, TrajectoryError> {
    if budget == 0 {
        return Err(TrajectoryError::ZeroBudget);
    }
    if zero_tol <= 0.0 || zero_tol.is_nan() {
        return Err(TrajectoryError::NonPositiveZeroTol(zero_tol));
    }
    let report = validate_initial(y0);
    if !report.zero_rows.is_empty() {
        return Err(TrajectoryError::InvalidInitial {
            rows: report.zero_rows,
        });
    }

    let mut y = y0.clone();
    let mut trace: Option<Vec<TraceEntry>> = record_trace.then(Vec::new);
    if let Some(t) = trace.as_mut() {
        t.push(TraceEntry {
            step: 0,
            lyapunov: lyapunov(&y),
            balanced: false,
        });
    }
    let mut last_x: Option<AppraisalMatrix> = None;

    for t in 0.. {
        if y.max_abs() < zero_tol {
            return Ok(TrajectoryOutcome::VanishedToZero {
                hitting_time: t,
                final_appraisals: last_x,
                final_lyapunov: lyapunov(&y),
                trace,
            });
        }
        if t >= budget {
            return Ok(TrajectoryOutcome::BudgetExceeded {
                final_appraisals: last_x,
                final_lyapunov: lyapunov(&y),
                trace,
            });
        }

        let x = appraisal_update(&y)?;
        let certificate = certify_balance(&x);
        let y_next = opinion_update(&x, &y)?;
        if let Some(tr) = trace.as_mut() {
            tr.push(TraceEntry {
                step: t + 1,
                lyapunov: lyapunov(&y_next),
                balanced: certificate.balanced,
            });
        }

        if let Some(faction) = certificate.faction {
            // Consensus row from the pre-update opinions; the update computes
            // row i as faction[i] * consensus_row with identical arithmetic,
            // so the equilibrium identity is exact, not approximate.
            let consensus_row: Vec<f64> = (0..y.n_topics())
                .map(|j| signed_column_mean(&y, faction.signs(), j))
                .collect();
            if consensus_row.iter().all(|&a| a == 0.0) {
                // Degenerate hit: the signed means cancelled to zero, so the
                // next state is the zero matrix, not a balanced fixed point.
                return Ok(TrajectoryOutcome::VanishedToZero {
                    hitting_time: t + 1,
                    final_appraisals: Some(x),
                    final_lyapunov: 0.0,
                    trace,
                });
            }
            let final_lyapunov = lyapunov(&y_next);
            return Ok(TrajectoryOutcome::BalancedEquilibrium {
                hitting_time: t + 1,
                equilibrium: EquilibriumPoint {
                    appraisals: x,
                    opinions: y_next,
                    faction,
                    consensus_row,
                },
                final_lyapunov,
                trace,
            });
        }

        last_x = Some(x);
        y = y_next;
    }
    unreachable!("loop returns within budget + 1 iterations")
}

/// Smallest period `T >= 1` such that the last `window` snapshots satisfy
/// `Y(t + T) = Y(t)` exactly wherever both lie in the window; `None` if no
/// period fits. Exact equality identifies `-0.0` with `0.0`.
pub fn detect_period(trace: &[OpinionMatrix], window: usize) -> Option<usize> {
    let w = window.min(trace.len());
    if w < 2 {
        return None;
    }
    let tail = &trace[trace.len() - w..];
    (1..w).find(|&period| (0..w - period).all(|i| tail[i + period] == tail[i]))
}

/// Is `x` in the stable-but-unbalanced set (sign patterns along which the
/// opinion contraction keeps going)?
pub fn s_stable_membership(x: &AppraisalMatrix) -> StableSetMembership {
    StableSetMembership {
        in_stable_unbalanced_set: !certify_balance(x).balanced,
    }
}
