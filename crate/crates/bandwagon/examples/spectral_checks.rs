//! Spectra of scaled appraisal patterns `X/N`: a balanced pattern is the
//! rank-one outer product of its faction vector and has top eigenvalue
//! exactly 1 (the averaging map preserves the consensus profile), while every
//! unbalanced pattern has spectral radius below 1 (the map contracts).
//! All eigenvalues stay inside the interval [-(N-2)/N, 1].
//!
//! ```bash
//! cargo run --example spectral_checks
//! ```

use bandwagon::{numerical_rank, rank_one_sign_check, symmetric_eigenvalues, AppraisalMatrix};

fn inspect(name: &str, rows: &[Vec<i8>]) {
    let x = AppraisalMatrix::from_rows(rows).unwrap();
    let n = x.n_agents();
    let spectrum = symmetric_eigenvalues(&x.scaled_by_count()).unwrap();
    let eigenvalues: Vec<String> = spectrum
        .eigenvalues
        .iter()
        .map(|v| format!("{v:.4}"))
        .collect();
    println!("{name} (N = {n}):");
    println!("  eigenvalues of X/N: [{}]", eigenvalues.join(", "));
    println!(
        "  inside [-(N-2)/N, 1] = [{:.4}, 1]: {}",
        -((n as f64 - 2.0) / n as f64),
        spectrum.min() >= -((n as f64 - 2.0) / n as f64) - 1e-9 && spectrum.max() <= 1.0 + 1e-9
    );
    println!("  rank of X: {}", numerical_rank(&x.to_matrix(), None));
    match rank_one_sign_check(&x) {
        Some(p) => println!("  rank-one factorization p p^T with p = {:?}", p.signs()),
        None => println!("  no rank-one sign factorization (spectral radius < 1)"),
    }
}

fn main() {
    inspect(
        "all friendly",
        &[vec![1, 1, 1], vec![1, 1, 1], vec![1, 1, 1]],
    );
    inspect(
        "frustrated triangle",
        &[vec![1, 1, -1], vec![1, 1, 1], vec![-1, 1, 1]],
    );
    inspect(
        "two factions of two",
        &[
            vec![1, -1, 1, -1],
            vec![-1, 1, -1, 1],
            vec![1, -1, 1, -1],
            vec![-1, 1, -1, 1],
        ],
    );
    inspect(
        "ring with one hostile tie",
        &[
            vec![1, 1, 0, 0, -1],
            vec![1, 1, 1, 0, 0],
            vec![0, 1, 1, 1, 0],
            vec![0, 0, 1, 1, 1],
            vec![-1, 0, 0, 1, 1],
        ],
    );
}
