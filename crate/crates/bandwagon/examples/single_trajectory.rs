//! Run one trajectory from a fixed 3-agent, 3-topic start and print the
//! per-step trace: Lyapunov value and whether the appraisal pattern is
//! balanced. This particular start locks onto an unbalanced pattern, so the
//! opinions contract all the way to zero instead of freezing.
//!
//! ```bash
//! cargo run --example single_trajectory
//! ```

use bandwagon::{run_trajectory, OpinionMatrix, TrajectoryOutcome};

fn main() {
    let y0 = OpinionMatrix::from_rows(&[
        vec![1.41, -1.21, 0.49],
        vec![1.42, 0.72, 1.03],
        vec![0.67, 1.63, 0.73],
    ])
    .unwrap();

    let outcome = run_trajectory(&y0, 10_000, 1e-2, true).unwrap();

    if let Some(trace) = outcome.trace() {
        println!("step  lyapunov              balanced");
        for entry in trace {
            println!(
                "{:<5} {:<21} {}",
                entry.step, entry.lyapunov, entry.balanced
            );
        }
    }
    println!();
    match &outcome {
        TrajectoryOutcome::VanishedToZero {
            hitting_time,
            final_appraisals,
            ..
        } => {
            println!("opinions fell below 1e-2 at step {hitting_time}");
            if let Some(x) = final_appraisals {
                println!("final appraisal pattern (unbalanced, hence the decay):");
                for row in x.rows() {
                    println!("  {row:?}");
                }
            }
        }
        other => println!("outcome: {:?}", other.kind()),
    }
}
