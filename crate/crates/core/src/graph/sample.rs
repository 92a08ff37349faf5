use super::{all_pairs, pair_count, Graph, PartitionFunction};
use crate::coins::Seed;
use crate::error::{Error, Result};
use rand::Rng;

/// Single gadget: each of the `C(t,2)` pairs present with probability ½,
/// drawn in canonical pair order.
pub fn sample_gadget(t: usize, seed: &Seed) -> Graph {
    let mut rng = seed.rng();
    let edges: Vec<_> = all_pairs(t).filter(|_| rng.gen::<bool>()).collect();
    Graph::from_edges(t, edges).expect("pairs are canonical")
}

/// `n/t` independent gadgets on blocks `{(i−1)t+1, …, it}`.
pub fn sample_multigadget(n: usize, t: usize, seed: &Seed) -> Result<Graph> {
    if t == 0 || !n.is_multiple_of(t) {
        return Err(Error::Indivisible { n, t });
    }
    let mut edges = Vec::new();
    for i in 0..n / t {
        let gadget = sample_gadget(t, &seed.derive(&format!("gadget:{}", i + 1)));
        let offset = i * t;
        edges.extend(gadget.edges().map(|e| (e.u() + offset, e.v() + offset)));
    }
    Graph::new(n, edges)
}

/// Erdős–Rényi `G(n, p)`, pairs drawn in canonical order.
pub fn sample_gnp(n: usize, p: f64, seed: &Seed) -> Graph {
    let mut rng = seed.rng();
    let edges: Vec<_> = all_pairs(n).filter(|_| rng.gen::<f64>() < p).collect();
    Graph::from_edges(n, edges).expect("pairs are canonical")
}

/// Uniform symmetric partition: an independent uniform party per pair.
pub fn sample_partition(n: usize, k: usize, seed: &Seed) -> Result<PartitionFunction> {
    if n == 0 || k == 0 {
        return Err(Error::InvalidParameter(format!(
            "partition needs n >= 1 and k >= 1 (got n = {n}, k = {k})"
        )));
    }
    let mut rng = seed.rng();
    let parties = (0..pair_count(n)).map(|_| rng.gen_range(1..=k)).collect();
    PartitionFunction::new(n, k, parties)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{is_good_partition, exact_good_probability, Edge};

    fn seed(i: u64) -> Seed {
        Seed::new(i, "test")
    }

    #[test]
    fn single_vertex_gadget_is_empty() {
        let g = sample_gadget(1, &seed(3));
        assert_eq!((g.n(), g.edge_count()), (1, 0));
    }

    #[test]
    fn gadget_edge_frequency() {
        let trials = 10_000;
        let hits = (0..trials).filter(|&i| sample_gadget(2, &seed(i)).edge_count() == 1).count();
        let f = hits as f64 / trials as f64;
        assert!((f - 0.5).abs() < 0.02, "frequency {f}");
    }

    #[test]
    fn gadget_uniform_over_labeled_graphs() {
        let trials = 80_000u64;
        let mut counts = [0usize; 8];
        for i in 0..trials {
            counts[sample_gadget(3, &seed(i)).pair_mask() as usize] += 1;
        }
        let expected = trials as f64 / 8.0;
        let chi2: f64 = counts
            .iter()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        // 7 degrees of freedom, 0.999 quantile ≈ 24.3
        assert!(chi2 < 24.3, "chi-square {chi2}");
        for c in counts {
            assert!((c as f64 / trials as f64 - 0.125).abs() < 0.01);
        }
    }

    #[test]
    fn multigadget_structure() {
        for i in 0..200 {
            let g = sample_multigadget(4, 2, &seed(i)).unwrap();
            assert!(!g.has_edge(1, 3));
            assert!(g.edges().all(|e| (e.u() - 1) / 2 == (e.v() - 1) / 2));
        }
        assert_eq!(
            sample_multigadget(4, 3, &seed(0)),
            Err(Error::Indivisible { n: 4, t: 3 })
        );
    }

    #[test]
    fn multigadget_frequencies() {
        let trials = 10_000u64;
        let mut within = 0usize;
        for i in 0..trials {
            let g = sample_multigadget(6, 3, &seed(i)).unwrap();
            assert!(g.edges().all(|e| (e.u() - 1) / 3 == (e.v() - 1) / 3));
            within += g.edge_count();
        }
        let f = within as f64 / (trials as f64 * 6.0);
        assert!((f - 0.5).abs() < 0.02, "frequency {f}");
    }

    #[test]
    fn partition_single_party() {
        let z = sample_partition(2, 1, &seed(9)).unwrap();
        assert_eq!(z.party(Edge::new(1, 2)), 1);
    }

    #[test]
    fn partition_marginals_and_independence() {
        let trials = 90_000u64;
        let mut single = [[0usize; 3]; 3];
        let mut joint = [[0usize; 3]; 3];
        for i in 0..trials {
            let z = sample_partition(3, 3, &seed(i)).unwrap();
            let p = z.parties();
            for (slot, &party) in p.iter().enumerate() {
                single[slot][party - 1] += 1;
            }
            joint[p[0] - 1][p[1] - 1] += 1;
        }
        for row in single {
            for c in row {
                assert!((c as f64 / trials as f64 - 1.0 / 3.0).abs() < 0.01);
            }
        }
        for row in joint {
            for c in row {
                assert!((c as f64 / trials as f64 - 1.0 / 9.0).abs() < 0.01);
            }
        }
    }

    #[test]
    fn partition_uniform_over_five() {
        let trials = 50_000u64;
        let mut counts = [0usize; 5];
        for i in 0..trials {
            counts[sample_partition(2, 5, &seed(i)).unwrap().parties()[0] - 1] += 1;
        }
        for c in counts {
            assert!((c as f64 / trials as f64 - 0.2).abs() < 0.01);
        }
    }

    #[test]
    fn good_partition_monte_carlo_matches_exact() {
        let trials = 20_000u64;
        let (t, k) = (3, 6);
        let good = (0..trials)
            .filter(|&i| is_good_partition(&sample_partition(t, k, &seed(i)).unwrap()))
            .count();
        let p = exact_good_probability(t, k);
        let se = (p * (1.0 - p) / trials as f64).sqrt();
        assert!((good as f64 / trials as f64 - p).abs() < 3.0 * se);
    }

    #[test]
    fn sampling_is_deterministic() {
        assert_eq!(sample_gadget(6, &seed(11)), sample_gadget(6, &seed(11)));
        assert_eq!(
            sample_partition(6, 4, &seed(11)).unwrap(),
            sample_partition(6, 4, &seed(11)).unwrap()
        );
    }
}
