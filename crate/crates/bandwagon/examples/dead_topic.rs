//! A topic on which opinions exactly cancel dies in one step: the averaging
//! map sends its column to zero while the other topics still reach a signed
//! consensus. The equilibrium's consensus value for the dead topic is
//! exactly 0, and validation flags the zero column in the frozen state.
//!
//! ```bash
//! cargo run --example dead_topic
//! ```

use bandwagon::{run_trajectory, validate_initial, OpinionMatrix, TrajectoryOutcome};

fn main() {
    let y0 = OpinionMatrix::from_rows(&[vec![1.0, 0.1], vec![2.0, -0.1]]).unwrap();
    println!("initial opinions (second topic: 0.1 vs -0.1, friendly agents):");
    for row in y0.rows() {
        println!("  {row:?}");
    }

    match run_trajectory(&y0, 10, 1e-12, false).unwrap() {
        TrajectoryOutcome::BalancedEquilibrium {
            hitting_time,
            equilibrium,
            ..
        } => {
            println!("balanced at step {hitting_time}");
            println!("equilibrium opinions:");
            for row in equilibrium.opinions.rows() {
                println!("  {row:?}");
            }
            println!("consensus per topic: {:?}", equilibrium.consensus_row);
            println!(
                "second topic cancelled exactly: {}",
                equilibrium.consensus_row[1] == 0.0
            );
            let report = validate_initial(&equilibrium.opinions);
            println!(
                "validation of the frozen state now reports zero columns: {:?}",
                report.zero_cols
            );
        }
        other => println!("unexpected outcome {:?}", other.kind()),
    }
}
