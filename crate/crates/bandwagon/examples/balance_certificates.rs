//! Structural balance in sign patterns: a certificate (the faction vector)
//! when one exists, triad products, and connectivity.
//!
//! ```bash
//! cargo run --example balance_certificates
//! ```

use bandwagon::{all_triads_balanced, certify_balance, is_connected, AppraisalMatrix};

fn describe(name: &str, rows: &[Vec<i8>]) {
    let x = AppraisalMatrix::from_rows(rows).unwrap();
    let certificate = certify_balance(&x);
    print!("{name}: ");
    match certificate.faction {
        Some(faction) => {
            let (plus, minus) = faction.partition();
            println!("balanced, factions {plus:?} vs {minus:?}");
        }
        None => println!("unbalanced"),
    }
    match all_triads_balanced(&x) {
        Ok(verdict) => println!("  every triad has positive sign product: {verdict}"),
        Err(_) => println!("  triad products undefined (some pairs have no appraisal)"),
    }
    println!("  appraisal graph connected: {}", is_connected(&x));
}

fn main() {
    describe(
        "all friendly",
        &[vec![1, 1, 1], vec![1, 1, 1], vec![1, 1, 1]],
    );
    describe(
        "two factions",
        &[
            vec![1, 1, -1, -1],
            vec![1, 1, -1, -1],
            vec![-1, -1, 1, 1],
            vec![-1, -1, 1, 1],
        ],
    );
    describe(
        "frustrated triangle",
        &[vec![1, 1, -1], vec![1, 1, 1], vec![-1, 1, 1]],
    );
    describe(
        "two isolated cliques",
        &[
            vec![1, 1, 0, 0],
            vec![1, 1, 0, 0],
            vec![0, 0, 1, 1],
            vec![0, 0, 1, 1],
        ],
    );
}
