//! Monte Carlo sweep over a small (agents, topics) grid: estimate the
//! probability of reaching a balanced equilibrium and the mean number of
//! steps to get there, then write the summaries as CSV and as an SVG chart.
//!
//! ```bash
//! cargo run --example monte_carlo_sweep
//! ```

use bandwagon::io::{write_outputs, OutputFormat};
use bandwagon::montecarlo::chernoff_trials;
use bandwagon::{run_sweep, ExperimentConfig};

fn main() {
    let trials = 400;
    println!(
        "{trials} trials per cell; for the +/-0.05-at-95% guarantee one would need {} trials",
        chernoff_trials(0.05, 0.05).unwrap()
    );

    let config = ExperimentConfig {
        agent_counts: vec![5, 9, 20],
        topic_counts: (1..=6).collect(),
        trials,
        opinion_std: 10.0,
        seed: 42,
        budget: 10_000,
        zero_tol: 1e-12,
    };
    let cells = run_sweep(&config).unwrap();

    println!(
        "{:>8} {:>7} {:>7} {:>18}",
        "agents", "topics", "p_hat", "mean hitting time"
    );
    for cell in &cells {
        let mean = cell
            .mean_hitting_time
            .map_or_else(|| String::from("-"), |v| format!("{v:.2}"));
        println!(
            "{:>8} {:>7} {:>7.3} {:>18}",
            cell.n_agents, cell.n_topics, cell.estimated_probability, mean
        );
    }

    let dir = std::env::temp_dir();
    let csv = dir.join("bandwagon_sweep.csv");
    let svg = dir.join("bandwagon_sweep.svg");
    write_outputs(&cells, OutputFormat::Csv, &csv).unwrap();
    write_outputs(&cells, OutputFormat::Svg, &svg).unwrap();
    println!("\nwrote {} and {}", csv.display(), svg.display());
}
