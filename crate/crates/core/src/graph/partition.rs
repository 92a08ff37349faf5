use super::{all_pairs, pair_count, pair_index, Edge};
use crate::error::{Error, Result};

/// Symmetric assignment of every vertex pair of `1..=n` to a party in
/// `1..=k`. An edge, if present, lives at its pair's party.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartitionFunction {
    n: usize,
    k: usize,
    assign: Vec<usize>,
}

impl PartitionFunction {
    /// `parties[i]` is the party of the `i`-th pair in canonical order.
    pub fn new(n: usize, k: usize, parties: Vec<usize>) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("party count must be at least 1".into()));
        }
        if parties.len() != pair_count(n) {
            let missing = all_pairs(n).nth(parties.len()).unwrap_or(Edge::new(1, 2));
            return Err(Error::MissingPair(missing.u(), missing.v()));
        }
        if let Some(&party) = parties.iter().find(|&&p| p == 0 || p > k) {
            return Err(Error::PartyOutOfRange { party, k });
        }
        Ok(PartitionFunction {
            n,
            k,
            assign: parties,
        })
    }

    /// Every pair assigned to the same party.
    pub fn constant(n: usize, k: usize, party: usize) -> Result<Self> {
        PartitionFunction::new(n, k, vec![party; pair_count(n)])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn party(&self, e: Edge) -> usize {
        self.assign[pair_index(self.n, e)]
    }

    /// Parties in canonical pair order.
    pub fn parties(&self) -> &[usize] {
        &self.assign
    }

    pub fn pairs_of(&self, party: usize) -> impl Iterator<Item = Edge> + '_ {
        all_pairs(self.n)
            .zip(&self.assign)
            .filter(move |(_, &p)| p == party)
            .map(|(e, _)| e)
    }
}

/// True iff no party holds two or more pairs.
pub fn is_good_partition(z: &PartitionFunction) -> bool {
    let mut seen = vec![false; z.k + 1];
    for &p in &z.assign {
        if std::mem::replace(&mut seen[p], true) {
            return false;
        }
    }
    true
}

/// Probability that a uniform partition of a `t`-vertex gadget among `k`
/// parties is good: `∏_{j<m} (k−j)/k` with `m = C(t,2)`.
pub fn exact_good_probability(t: usize, k: usize) -> f64 {
    let m = pair_count(t);
    if m > k {
        return 0.0;
    }
    (0..m).map(|j| (k - j) as f64 / k as f64).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn good_partition_examples() {
        let z = PartitionFunction::new(3, 3, vec![1, 2, 3]).unwrap();
        assert!(is_good_partition(&z));
        let z = PartitionFunction::new(3, 3, vec![1, 1, 2]).unwrap();
        assert!(!is_good_partition(&z));
        for k in 1..5 {
            for p in 1..=k {
                assert!(is_good_partition(&PartitionFunction::new(2, k, vec![p]).unwrap()));
            }
        }
    }

    #[test]
    fn rejects_out_of_range_party() {
        assert_eq!(
            PartitionFunction::new(2, 2, vec![3]),
            Err(Error::PartyOutOfRange { party: 3, k: 2 })
        );
    }

    #[test]
    fn good_probability_examples() {
        assert_eq!(exact_good_probability(2, 1), 1.0);
        assert_eq!(exact_good_probability(2, 7), 1.0);
        let expected = 243.0 * 242.0 * 241.0 / 243f64.powi(3);
        assert!((exact_good_probability(3, 243) - expected).abs() < 1e-15);
        assert!((exact_good_probability(3, 243) - 0.987688).abs() < 1e-6);
        assert!(exact_good_probability(4, 768) >= 0.5);
        assert_eq!(exact_good_probability(4, 5), 0.0);
    }

    #[test]
    fn good_probability_at_three_t_fourth() {
        for t in 1..=6usize {
            assert!(exact_good_probability(t, 3 * t.pow(4)) >= 0.5, "t = {t}");
        }
    }
}
