//! Seeded Monte Carlo sweeps over (agent count, topic count) grids.
//!
//! Every trial draws its own RNG stream as a pure function of
//! `(seed, n_agents, n_topics, trial_index)`, so results do not depend on
//! scheduling: trials can run on any number of worker threads and still
//! aggregate to bit-identical summaries, and any single trial can be
//! replayed in isolation.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::dynamics::{validate_initial, OpinionMatrix};
use crate::trajectory::{run_trajectory, OutcomeKind, TrajectoryError};

#[derive(Debug, Error, PartialEq)]
pub enum MonteCarloError {
    #[error("epsilon must lie strictly between 0 and 1, got {0}")]
    EpsilonOutOfRange(f64),
    #[error("delta must lie strictly between 0 and 1, got {0}")]
    DeltaOutOfRange(f64),
    #[error("agent and topic count lists must be non-empty")]
    EmptyGrid,
    #[error("agent counts must be at least 1")]
    ZeroAgents,
    #[error("topic counts must be at least 1")]
    ZeroTopics,
    #[error("trials must be at least 1")]
    ZeroTrials,
    #[error("opinion standard deviation must be strictly positive, got {0}")]
    NonPositiveStd(f64),
    #[error(transparent)]
    Trajectory(#[from] TrajectoryError),
}

/// Smallest trial count `n` such that a sample mean of `n` Bernoulli draws
/// is within `epsilon` of the true probability with confidence `1 - delta`
/// (two-sided Hoeffding bound): `n >= ln(2/delta) / (2 epsilon^2)`.
pub fn chernoff_trials(epsilon: f64, delta: f64) -> Result<u64, MonteCarloError> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(MonteCarloError::EpsilonOutOfRange(epsilon));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(MonteCarloError::DeltaOutOfRange(delta));
    }
    let bound = (2.0 / delta).ln() / (2.0 * epsilon * epsilon);
    Ok((bound.ceil() as u64).max(1))
}

fn splitmix64(state: &mut u64) {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
}

fn splitmix64_scramble(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Independent, reproducible RNG stream for one trial of one grid cell:
/// a pure function of the experiment seed and the cell coordinates. Distinct
/// coordinates give decorrelated streams; evaluation order is irrelevant.
pub fn trial_rng(seed: u64, n_agents: usize, n_topics: usize, trial: usize) -> ChaCha8Rng {
    let mut state = seed;
    for coordinate in [n_agents as u64, n_topics as u64, trial as u64] {
        splitmix64(&mut state);
        state = splitmix64_scramble(state ^ coordinate);
    }
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        splitmix64(&mut state);
        chunk.copy_from_slice(&splitmix64_scramble(state).to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

/// Draw an `n_agents x n_topics` opinion matrix with i.i.d. Gaussian entries
/// of mean 0 and standard deviation `std`. In the measure-zero event that a
/// row or column is exactly zero, the whole matrix is redrawn, so every
/// returned matrix passes initial validation.
pub fn sample_initial(
    n_agents: usize,
    n_topics: usize,
    std: f64,
    rng: &mut impl Rng,
) -> OpinionMatrix {
    assert!(
        n_agents >= 1 && n_topics >= 1,
        "grid cell must be non-degenerate"
    );
    assert!(std > 0.0, "standard deviation must be positive");
    let normal = Normal::new(0.0, std).expect("std checked positive and finite");
    loop {
        let data: Vec<f64> = (0..n_agents * n_topics)
            .map(|_| normal.sample(rng))
            .collect();
        let y =
            OpinionMatrix::from_flat(n_agents, n_topics, data).expect("gaussian draws are finite");
        if validate_initial(&y).is_accepted() {
            return y;
        }
    }
}

/// A full sweep: every `(n_agents, n_topics)` pair gets `trials` independent
/// trajectories from Gaussian initial opinions.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub agent_counts: Vec<usize>,
    pub topic_counts: Vec<usize>,
    pub trials: usize,
    pub opinion_std: f64,
    pub seed: u64,
    pub budget: usize,
    pub zero_tol: f64,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), MonteCarloError> {
        if self.agent_counts.is_empty() || self.topic_counts.is_empty() {
            return Err(MonteCarloError::EmptyGrid);
        }
        if self.agent_counts.contains(&0) {
            return Err(MonteCarloError::ZeroAgents);
        }
        if self.topic_counts.contains(&0) {
            return Err(MonteCarloError::ZeroTopics);
        }
        if self.trials == 0 {
            return Err(MonteCarloError::ZeroTrials);
        }
        if self.opinion_std <= 0.0 || self.opinion_std.is_nan() {
            return Err(MonteCarloError::NonPositiveStd(self.opinion_std));
        }
        if self.budget == 0 {
            return Err(MonteCarloError::Trajectory(TrajectoryError::ZeroBudget));
        }
        if self.zero_tol <= 0.0 || self.zero_tol.is_nan() {
            return Err(MonteCarloError::Trajectory(
                TrajectoryError::NonPositiveZeroTol(self.zero_tol),
            ));
        }
        Ok(())
    }
}

/// Aggregated outcomes of one grid cell. Field names match the CSV schema.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellSummary {
    pub n_agents: usize,
    pub n_topics: usize,
    #[serde(rename = "trials")]
    pub trials_run: usize,
    #[serde(rename = "balanced")]
    pub balanced_count: usize,
    #[serde(rename = "vanished")]
    pub vanished_count: usize,
    #[serde(rename = "budget_exceeded")]
    pub budget_exceeded_count: usize,
    /// Fraction of trials that reached a balanced equilibrium.
    #[serde(rename = "p_hat")]
    pub estimated_probability: f64,
    /// Mean hitting time over balanced trials; `None` when none balanced.
    pub mean_hitting_time: Option<f64>,
}

/// Run the whole grid. Trials are parallelized per cell; the per-trial RNG
/// derivation plus in-order aggregation make the output a pure function of
/// the config, independent of worker-thread count.
pub fn run_sweep(config: &ExperimentConfig) -> Result<Vec<CellSummary>, MonteCarloError> {
    config.validate()?;
    let mut cells = Vec::with_capacity(config.agent_counts.len() * config.topic_counts.len());
    for &n_agents in &config.agent_counts {
        for &n_topics in &config.topic_counts {
            let outcomes: Vec<(OutcomeKind, Option<usize>)> = (0..config.trials)
                .into_par_iter()
                .map(|trial| {
                    let mut rng = trial_rng(config.seed, n_agents, n_topics, trial);
                    let y0 = sample_initial(n_agents, n_topics, config.opinion_std, &mut rng);
                    let outcome = run_trajectory(&y0, config.budget, config.zero_tol, false)?;
                    Ok((outcome.kind(), outcome.hitting_time()))
                })
                .collect::<Result<_, TrajectoryError>>()?;
            cells.push(summarize_cell(n_agents, n_topics, &outcomes));
        }
    }
    Ok(cells)
}

/// Fold per-trial outcomes (in trial order) into a summary. Splitting this
/// out keeps "prefix of trials => prefix of outcomes" checkable in tests.
pub fn summarize_cell(
    n_agents: usize,
    n_topics: usize,
    outcomes: &[(OutcomeKind, Option<usize>)],
) -> CellSummary {
    let mut balanced_count = 0usize;
    let mut vanished_count = 0usize;
    let mut budget_exceeded_count = 0usize;
    let mut hitting_sum = 0u64;
    for (kind, hitting_time) in outcomes {
        match kind {
            OutcomeKind::BalancedEquilibrium => {
                balanced_count += 1;
                hitting_sum += hitting_time.expect("balanced outcomes have hitting times") as u64;
            }
            OutcomeKind::VanishedToZero => vanished_count += 1,
            OutcomeKind::BudgetExceeded => budget_exceeded_count += 1,
        }
    }
    let trials_run = outcomes.len();
    CellSummary {
        n_agents,
        n_topics,
        trials_run,
        balanced_count,
        vanished_count,
        budget_exceeded_count,
        estimated_probability: balanced_count as f64 / trials_run as f64,
        mean_hitting_time: (balanced_count > 0).then(|| hitting_sum as f64 / balanced_count as f64),
    }
}
