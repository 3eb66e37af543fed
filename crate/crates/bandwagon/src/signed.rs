//! Structural balance of appraisal sign patterns.
//!
//! An appraisal matrix is *structurally balanced* when the agents split into
//! at most two factions with positive appraisals inside a faction and
//! negative appraisals across. For complete sign patterns (no zero entries)
//! this is equivalent to `X = p pᵀ` for a sign vector `p`, to `X` having
//! rank one, and to every triad having positive sign product — equivalences
//! the test suite checks against each other exhaustively for small `N`.

use thiserror::Error;

use crate::dynamics::AppraisalMatrix;

#[derive(Debug, Error, PartialEq)]
pub enum SignedGraphError {
    #[error("faction vector must be non-empty")]
    EmptyFaction,
    #[error("faction entries must be +1 or -1: entry {index} is {value}")]
    InvalidFactionEntry { index: usize, value: i8 },
    #[error("triad test requires a complete sign pattern: entry ({i}, {j}) is 0")]
    ZeroOffDiagonal { i: usize, j: usize },
}

/// Faction assignment `p` with entries in `{-1, +1}`. `p` and `-p` describe
/// the same two-faction split; the canonical representative has `p[0] = +1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactionVector {
    signs: Vec<i8>,
}

impl FactionVector {
    pub fn new(signs: Vec<i8>) -> Result<Self, SignedGraphError> {
        if signs.is_empty() {
            return Err(SignedGraphError::EmptyFaction);
        }
        for (index, &value) in signs.iter().enumerate() {
            if value != 1 && value != -1 {
                return Err(SignedGraphError::InvalidFactionEntry { index, value });
            }
        }
        Ok(FactionVector { signs })
    }

    /// Flip signs if needed so the first entry is +1.
    pub fn canonicalized(mut self) -> Self {
        if self.signs[0] == -1 {
            for s in &mut self.signs {
                *s = -*s;
            }
        }
        self
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    /// The rank-one sign pattern `p pᵀ` (always balanced, unit diagonal).
    pub fn outer(&self) -> AppraisalMatrix {
        let n = self.signs.len();
        let mut data = vec![0i8; n * n];
        for i in 0..n {
            for j in 0..n {
                data[i * n + j] = self.signs[i] * self.signs[j];
            }
        }
        AppraisalMatrix::from_rows(&data.chunks_exact(n).map(<[i8]>::to_vec).collect::<Vec<_>>())
            .expect("sign outer products are symmetric with unit diagonal")
    }

    /// Agent indices of the two factions (second may be empty).
    pub fn partition(&self) -> (Vec<usize>, Vec<usize>) {
        let mut plus = Vec::new();
        let mut minus = Vec::new();
        for (i, &s) in self.signs.iter().enumerate() {
            if s == 1 {
                plus.push(i);
            } else {
                minus.push(i);
            }
        }
        (plus, minus)
    }
}

/// Outcome of a balance check. `faction` is present exactly when `balanced`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalanceCertificate {
    pub balanced: bool,
    pub faction: Option<FactionVector>,
}

/// Decide whether `X = p pᵀ` for some sign vector `p`, in O(N²).
///
/// The candidate `p` is the first row of `X` (whose first entry is the unit
/// diagonal, so the certificate is already canonical); any zero entry or any
/// mismatch `X[i][j] != p[i] p[j]` refutes balance.
pub fn certify_balance(x: &AppraisalMatrix) -> BalanceCertificate {
    let n = x.n_agents();
    let p = x.row(0);
    if p.contains(&0) {
        return BalanceCertificate {
            balanced: false,
            faction: None,
        };
    }
    for i in 0..n {
        for j in 0..n {
            if x.get(i, j) != p[i] * p[j] {
                return BalanceCertificate {
                    balanced: false,
                    faction: None,
                };
            }
        }
    }
    let faction = FactionVector::new(p.to_vec()).expect("entries checked nonzero");
    BalanceCertificate {
        balanced: true,
        faction: Some(faction),
    }
}

/// For complete sign patterns: do all triads `(i, j, k)` have sign product
/// `+1`? Trivially true for `N < 3`. Zero off-diagonal entries are an error
/// (the triad criterion only applies to complete patterns).
pub fn all_triads_balanced(x: &AppraisalMatrix) -> Result<bool, SignedGraphError> {
    let n = x.n_agents();
    for i in 0..n {
        for j in (i + 1)..n {
            if x.get(i, j) == 0 {
                return Err(SignedGraphError::ZeroOffDiagonal { i, j });
            }
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                if x.get(i, j) * x.get(j, k) * x.get(k, i) != 1 {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Is the graph on nonzero off-diagonal appraisals connected? (Sign is
/// irrelevant; a single agent is trivially connected.)
pub fn is_connected(x: &AppraisalMatrix) -> bool {
    let n = x.n_agents();
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(i) = stack.pop() {
        for (j, seen_j) in seen.iter_mut().enumerate() {
            if j != i && !*seen_j && x.get(i, j) != 0 {
                *seen_j = true;
                count += 1;
                stack.push(j);
            }
        }
    }
    count == n
}

/// Sign-structure rank-one test: `Some(p)` iff `M = p pᵀ`. Same decision
/// procedure as [`certify_balance`]; exposed separately so spectral
/// equivalences (top eigenvalue of `M/N` equal to 1) can be cross-checked
/// against an independent route in tests.
pub fn rank_one_sign_check(m: &AppraisalMatrix) -> Option<FactionVector> {
    certify_balance(m).faction
}

#[cfg(test)]
// Index-based loops below mirror the i/j matrix notation on purpose.
#[allow(clippy::needless_range_loop)]
mod tests {
    use super::*;
    use crate::numerics::symmetric_eigenvalues;
    use proptest::prelude::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn am(rows: &[Vec<i8>]) -> AppraisalMatrix {
        AppraisalMatrix::from_rows(rows).unwrap()
    }

    /// Build the complete sign pattern for one choice of upper-triangle signs.
    fn pattern_from_bits(n: usize, bits: u32) -> AppraisalMatrix {
        let mut rows = vec![vec![0i8; n]; n];
        let mut b = 0;
        for i in 0..n {
            rows[i][i] = 1;
            for j in (i + 1)..n {
                let s = if bits >> b & 1 == 1 { 1 } else { -1 };
                rows[i][j] = s;
                rows[j][i] = s;
                b += 1;
            }
        }
        am(&rows)
    }

    #[test]
    fn all_positive_pattern_is_balanced() {
        let x = am(&[vec![1, 1, 1], vec![1, 1, 1], vec![1, 1, 1]]);
        let cert = certify_balance(&x);
        assert!(cert.balanced);
        assert_eq!(cert.faction.unwrap().signs(), &[1, 1, 1]);
    }

    #[test]
    fn mixed_pattern_is_not_balanced() {
        let x = am(&[vec![1, 1, -1], vec![1, 1, 1], vec![-1, 1, 1]]);
        let cert = certify_balance(&x);
        assert!(!cert.balanced);
        assert!(cert.faction.is_none());
        assert_eq!(all_triads_balanced(&x), Ok(false));
        assert!(rank_one_sign_check(&x).is_none());
    }

    #[test]
    fn zero_entries_refute_balance_without_error() {
        let x = am(&[vec![1, 0], vec![0, 1]]);
        assert!(!certify_balance(&x).balanced);
        assert_eq!(
            all_triads_balanced(&x),
            Err(SignedGraphError::ZeroOffDiagonal { i: 0, j: 1 })
        );
    }

    #[test]
    fn outer_product_round_trips_up_to_global_sign() {
        let mut rng = StdRng::seed_from_u64(27);
        for n in 1..=12usize {
            for _ in 0..20 {
                let signs: Vec<i8> = (0..n)
                    .map(|_| if rng.random::<bool>() { 1 } else { -1 })
                    .collect();
                let p = FactionVector::new(signs.clone()).unwrap();
                let cert = certify_balance(&p.outer());
                assert!(cert.balanced, "p p^T must certify balanced (n = {n})");
                let recovered = cert.faction.unwrap();
                assert_eq!(
                    recovered,
                    p.canonicalized(),
                    "recovered faction must match input up to global sign"
                );
            }
        }
    }

    #[test]
    fn triads_trivially_balanced_below_three_agents() {
        assert_eq!(all_triads_balanced(&am(&[vec![1]])), Ok(true));
        assert_eq!(
            all_triads_balanced(&am(&[vec![1, -1], vec![-1, 1]])),
            Ok(true)
        );
    }

    #[test]
    fn connectivity_examples() {
        assert!(is_connected(&am(&[vec![1]])));
        assert!(!is_connected(&am(&[vec![1, 0], vec![0, 1]])));
        assert!(is_connected(&am(&[vec![1, -1], vec![-1, 1]])));
        // Two blocks joined through agent 1 only.
        let x = am(&[vec![1, 1, 0], vec![1, 1, -1], vec![0, -1, 1]]);
        assert!(is_connected(&x));
        // 2 + 1 split.
        let x = am(&[vec![1, 1, 0], vec![1, 1, 0], vec![0, 0, 1]]);
        assert!(!is_connected(&x));
    }

    #[test]
    fn triads_match_certificate_on_complete_patterns() {
        // Exhaustive over all complete sign patterns for N = 4.
        for bits in 0u32..(1 << 6) {
            let x = pattern_from_bits(4, bits);
            let by_triads = all_triads_balanced(&x).unwrap();
            let by_certificate = certify_balance(&x).balanced;
            assert_eq!(
                by_triads, by_certificate,
                "disagreement on pattern {bits:06b}"
            );
        }
    }

    #[test]
    fn eigenvalues_of_averaging_map_stay_in_interval() {
        // Rows of X/N sum to at most 1 with diagonal 1/N, so every
        // eigenvalue lies in [-(N-2)/N, 1].
        let mut rng = StdRng::seed_from_u64(4242);
        for _ in 0..200 {
            let n = rng.random_range(2..9usize);
            let mut rows = vec![vec![0i8; n]; n];
            for i in 0..n {
                rows[i][i] = 1;
                for j in (i + 1)..n {
                    let s = *[-1i8, 0, 1].get(rng.random_range(0..3usize)).unwrap();
                    rows[i][j] = s;
                    rows[j][i] = s;
                }
            }
            let x = am(&rows);
            let spec = symmetric_eigenvalues(&x.scaled_by_count()).unwrap();
            let lo = -((n as f64 - 2.0) / n as f64) - 1e-9;
            assert!(
                spec.min() >= lo && spec.max() <= 1.0 + 1e-9,
                "spectrum [{}, {}] outside [{lo}, 1] for n = {n}",
                spec.min(),
                spec.max()
            );

            if !is_connected(&x) {
                // Disconnected patterns cannot reach the extreme value 1.
                assert!(
                    spec.spectral_radius() <= (n as f64 - 1.0) / n as f64 + 1e-9,
                    "disconnected pattern with spectral radius {}",
                    spec.spectral_radius()
                );
            }
        }
    }

    #[test]
    fn block_diagonal_patterns_have_small_spectral_radius() {
        // Deterministic disconnected cases: two all-positive blocks.
        for (n, k) in [(4usize, 2usize), (5, 2), (6, 3)] {
            let mut rows = vec![vec![0i8; n]; n];
            for i in 0..n {
                for j in 0..n {
                    let same_block = (i < k) == (j < k);
                    rows[i][j] = if same_block { 1 } else { 0 };
                }
            }
            let x = am(&rows);
            assert!(!is_connected(&x));
            let spec = symmetric_eigenvalues(&x.scaled_by_count()).unwrap();
            assert!(spec.spectral_radius() <= (n as f64 - 1.0) / n as f64 + 1e-9);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn flipping_one_pair_breaks_balance(signs in proptest::collection::vec(prop_oneof![Just(1i8), Just(-1i8)], 3..10)) {
            let p = FactionVector::new(signs).unwrap();
            let x = p.outer();
            let n = x.n_agents();
            // Flip one symmetric off-diagonal pair: some triad now multiplies
            // to -1, so the pattern cannot be balanced (needs N >= 3).
            let mut rows: Vec<Vec<i8>> = x.rows().map(<[i8]>::to_vec).collect();
            rows[0][1] = -rows[0][1];
            rows[1][0] = -rows[1][0];
            let flipped = AppraisalMatrix::from_rows(&rows).unwrap();
            prop_assert!(n >= 3);
            prop_assert!(!certify_balance(&flipped).balanced);
            prop_assert_eq!(all_triads_balanced(&flipped), Ok(false));
        }
    }
}
