//! With a single topic, the first appraisal round splits the agents by the
//! sign of their opinion and the population is already balanced: every
//! trajectory freezes after exactly one step, at the mean opinion magnitude.
//!
//! ```bash
//! cargo run --example one_step_consensus
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use bandwagon::montecarlo::sample_initial;
use bandwagon::{run_trajectory, TrajectoryOutcome};

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for n_agents in [3usize, 9, 20] {
        let y0 = sample_initial(n_agents, 1, 10.0, &mut rng);
        match run_trajectory(&y0, 10, 1e-12, false).unwrap() {
            TrajectoryOutcome::BalancedEquilibrium {
                hitting_time,
                equilibrium,
                ..
            } => {
                let (plus, minus) = equilibrium.faction.partition();
                println!(
                    "N = {n_agents:>2}: balanced at step {hitting_time}, factions {:?} vs {:?}, \
                     shared magnitude {:.4}",
                    plus,
                    minus,
                    equilibrium.consensus_row[0].abs()
                );
            }
            other => println!("N = {n_agents:>2}: unexpected outcome {:?}", other.kind()),
        }
    }
}
