//! Discrete-time opinion dynamics with bandwagon appraisals.
//!
//! A group of `N` agents holds real-valued opinions on `m` topics (rows of an
//! `N x m` matrix). At every step each pair of agents re-appraises each other
//! with the *sign* of their opinion agreement, and then every agent moves to
//! the appraisal-weighted average of all opinions:
//!
//! ```text
//! X(t+1) = sgn( Y(t) Y(t)^T )          entrywise sign, values in {-1, 0, 1}
//! Y(t+1) = (1/N) X(t+1) Y(t)           average of appraisal-signed opinions
//! ```
//!
//! Every trajectory of this map does one of three things, and this crate
//! classifies which: the appraisal network reaches a *structurally balanced*
//! sign pattern in finite time and opinions freeze at a two-faction consensus
//! profile, or opinions decay to zero, or the step budget runs out first.
//!
//! # Modules
//!
//! - [`dynamics`] — matrix types and the one-step update maps.
//! - [`signed`] — structural balance certificates, triads, connectivity.
//! - [`numerics`] — dense matrices, cyclic Jacobi eigenvalues, numerical rank.
//! - [`trajectory`] — trajectory runner, outcome classification, Lyapunov
//!   function, equilibrium and periodicity probes.
//! - [`montecarlo`] — seeded Monte Carlo sweeps over (N, m) grids and
//!   Hoeffding trial sizing.
//! - [`io`] — CSV matrix files and CSV/JSON/SVG summary writers.
//! - [`cli`] — argument parsing and dispatch for the `bandwagon` binary.
//!
//! # Examples
//!
//! Each major capability has a runnable example:
//!
//! ```bash
//! cargo run --example single_trajectory   # trace one run to its outcome
//! cargo run --example one_step_consensus  # single-topic instant convergence
//! cargo run --example balance_certificates
//! cargo run --example spectral_checks     # eigenvalues vs. balance
//! cargo run --example monte_carlo_sweep   # (N, m) grid + CSV/SVG outputs
//! cargo run --example dead_topic          # consensus with a vanished column
//! ```
//!
//! # Quick start
//!
//! ```
//! use bandwagon::{OpinionMatrix, run_trajectory, TrajectoryOutcome};
//!
//! let y0 = OpinionMatrix::from_rows(&[vec![0.8, -1.3], vec![0.9, 2.1], vec![-0.4, 0.5]]).unwrap();
//! match run_trajectory(&y0, 10_000, 1e-12, false).unwrap() {
//!     TrajectoryOutcome::BalancedEquilibrium { hitting_time, equilibrium, .. } => {
//!         println!("balanced after {hitting_time} steps; factions {:?}", equilibrium.faction);
//!     }
//!     other => println!("{:?}", other.kind()),
//! }
//! ```

pub mod cli;
pub mod dynamics;
pub mod io;
pub mod montecarlo;
pub mod numerics;
pub mod signed;
pub mod trajectory;

pub use dynamics::{
    appraisal_update, opinion_update, step, validate_initial, AppraisalMatrix, DynamicsError,
    ModelState, OpinionMatrix, ValidationReport,
};
pub use montecarlo::{chernoff_trials, run_sweep, sample_initial, CellSummary, ExperimentConfig};
pub use numerics::{numerical_rank, symmetric_eigenvalues, Matrix, NumericsError, Spectrum};
pub use signed::{
    all_triads_balanced, certify_balance, is_connected, rank_one_sign_check, BalanceCertificate,
    FactionVector, SignedGraphError,
};
pub use trajectory::{
    detect_period, is_equilibrium, lyapunov, run_trajectory, s_stable_membership, EquilibriumPoint,
    OutcomeKind, StableSetMembership, TraceEntry, TrajectoryError, TrajectoryOutcome,
};
