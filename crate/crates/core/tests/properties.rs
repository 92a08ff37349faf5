use std::collections::{BTreeMap, BTreeSet};

use bbsim::blackboard::{replay_turns, DEFAULT_STEP_BUDGET};
use bbsim::graph::{
    all_pairs, brute_force_optimum, sample_gnp, sample_partition, validate_solution, vertex_bits,
};
use bbsim::infocost::{kl_divergence, pinsker_check, tv_distance, FiniteDistribution};
use bbsim::nontriviality::{exists_silent_protocol, exists_silent_protocol_with, SearchOptions};
use bbsim::protocols::{Builtin, RandomOrderGreedyMis};
use bbsim::rulingset::{find_counterexample, refutes, LocalSilentTable};
use bbsim::{Coins, Edge, Graph, ProblemKind, Seed, Solution};
use proptest::prelude::*;

fn instance(n: usize, p: f64, k: usize, seed: u64) -> (Graph, bbsim::PartitionFunction) {
    let g = sample_gnp(n, p, &Seed::new(seed, "graph"));
    let z = sample_partition(n, k, &Seed::new(seed, "partition")).unwrap();
    (g, z)
}

fn is_maximal_matching(g: &Graph, m: &BTreeSet<Edge>) -> bool {
    let mut used = BTreeSet::new();
    m.iter().all(|e| g.contains(*e) && used.insert(e.u()) && used.insert(e.v()))
        && g.edges().all(|e| used.contains(&e.u()) || used.contains(&e.v()))
}

fn distribution(weights: &[f64]) -> FiniteDistribution<usize> {
    let total: f64 = weights.iter().sum();
    let probs: Vec<f64> = weights.iter().map(|w| w / total).collect();
    FiniteDistribution::from_probs(&probs).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sampling_is_deterministic(seed in any::<u64>(), n in 1usize..40, k in 1usize..9, p in 0.0f64..=1.0) {
        prop_assert_eq!(instance(n, p, k, seed), instance(n, p, k, seed));
    }

    #[test]
    fn matching_validation_agrees_with_oracle(seed in any::<u64>(), n in 2usize..9, pick in any::<u64>()) {
        let g = sample_gnp(n, 0.5, &Seed::new(seed, "graph"));
        // a random edge subset, kept whenever its bit in `pick` is set
        let m: BTreeSet<Edge> = g.edges().enumerate().filter(|(i, _)| pick >> (i % 64) & 1 == 1).map(|(_, e)| e).collect();
        let valid = validate_solution(ProblemKind::MaximalMatching, &g, &Solution::EdgeSet(m.clone())).unwrap().is_valid();
        prop_assert_eq!(valid, is_maximal_matching(&g, &m));
    }

    #[test]
    fn cover_and_independence_are_complementary(seed in any::<u64>(), n in 1usize..=10, p in 0.0f64..=1.0) {
        let g = sample_gnp(n, p, &Seed::new(seed, "graph"));
        let tau = brute_force_optimum(ProblemKind::MinVertexCover, &g).unwrap();
        let alpha = brute_force_optimum(ProblemKind::MaximalIndependentSet, &g).unwrap();
        prop_assert_eq!(tau + alpha, n);
    }

    #[test]
    fn protocol_runs_are_sound_and_reproducible(
        seed in any::<u64>(),
        n in 2usize..20,
        k in 1usize..6,
        p in 0.05f64..0.9,
        which in 0usize..3,
    ) {
        let (g, z) = instance(n, p, k, seed);
        let proto: Builtin = Builtin::NAMES[which].parse().unwrap();
        let public = Seed::new(seed, "public");
        let private = Seed::new(seed, "private");
        let rec = proto.run(&g, &z, &public, &private, DEFAULT_STEP_BUDGET).unwrap();
        prop_assert_eq!(&rec, &proto.run(&g, &z, &public, &private, DEFAULT_STEP_BUDGET).unwrap());
        prop_assert!(rec.transcript.total_framed_bits() >= rec.transcript.total_payload_bits());
        prop_assert!(validate_solution(proto.problem(), &g, &rec.combined_output).unwrap().is_valid());
        let sound = match proto {
            Builtin::GreedyMatching => replay_turns(&bbsim::protocols::GreedyMatching, &g, &z, &rec).unwrap(),
            Builtin::RogMis => replay_turns(&RandomOrderGreedyMis, &g, &z, &rec).unwrap(),
            Builtin::PaletteColoring(c) => {
                let pc = bbsim::protocols::palette_coloring_protocol(c).unwrap();
                replay_turns(&pc, &g, &z, &rec).unwrap()
            }
        };
        prop_assert!(sound);
    }

    #[test]
    fn mis_protocol_matches_sequential_greedy(seed in any::<u64>(), n in 1usize..40, k in 1usize..6, p in 0.0f64..=1.0) {
        let (g, z) = instance(n, p, k, seed);
        let public = Seed::new(seed, "public");
        let rec = Builtin::RogMis.run(&g, &z, &public, &Seed::new(seed, "private"), DEFAULT_STEP_BUDGET).unwrap();
        let mut set = BTreeSet::new();
        for v in RandomOrderGreedyMis::permutation(n, &Coins::seeded(&public)) {
            if g.neighbors(v).all(|u| !set.contains(&u)) {
                set.insert(v);
            }
        }
        prop_assert_eq!(rec.combined_output, Solution::VertexSet(set));
    }

    #[test]
    fn greedy_matching_payload_is_bounded(seed in any::<u64>(), n in 2usize..48, k in 1usize..9, p in 0.0f64..=1.0) {
        let (g, z) = instance(n, p, k, seed);
        let rec = Builtin::GreedyMatching
            .run(&g, &z, &Seed::new(seed, "public"), &Seed::new(seed, "private"), DEFAULT_STEP_BUDGET)
            .unwrap();
        prop_assert!(rec.transcript.total_payload_bits() <= n / 2 * 2 * vertex_bits(n));
    }

    #[test]
    fn ruling_set_counterexamples_refute(seed in any::<u64>(), t in 1usize..=4) {
        let tbl = LocalSilentTable::random(t + 2, &Seed::new(seed, "table")).unwrap();
        let g = find_counterexample(&tbl, t).unwrap();
        prop_assert!(refutes(&tbl, &g, t).unwrap());
    }

    #[test]
    fn divergences_behave(p in proptest::collection::vec(0.01f64..1.0, 2..8), q_seed in proptest::collection::vec(0.0f64..1.0, 8)) {
        let pd = distribution(&p);
        let mut q: Vec<f64> = q_seed[..p.len()].to_vec();
        q[0] += 1e-3;
        let qd = distribution(&q);
        let kl = kl_divergence(&pd, &qd);
        prop_assert!(kl >= 0.0);
        prop_assert!(kl_divergence(&pd, &pd).abs() < 1e-12);
        prop_assert!(tv_distance(&pd, &pd).abs() < 1e-12);
        let c = pinsker_check(&pd, &qd);
        prop_assert!(c.holds && c.lhs <= c.rhs + 1e-12);
        if c.lhs > 1e-9 {
            prop_assert!(kl > 0.0);
        }
    }
}

#[test]
fn silent_verdicts_ignore_party_labels() {
    for (p, t) in [(ProblemKind::MaximalMatching, 2), (ProblemKind::MaximalMatching, 3), (ProblemKind::MaximalIndependentSet, 3)] {
        let base = exists_silent_protocol(p, t).unwrap().verdict.exists();
        let pairs: Vec<Edge> = all_pairs(t).collect();
        for shift in 1..pairs.len() {
            let labels: BTreeMap<Edge, usize> = pairs
                .iter()
                .enumerate()
                .map(|(i, &e)| (e, (i + shift) % pairs.len() + 7))
                .collect();
            let opts = SearchOptions {
                pair_party: Some(labels),
                ..SearchOptions::default()
            };
            assert_eq!(exists_silent_protocol_with(p, t, &opts).unwrap().verdict.exists(), base, "{p} t={t}");
        }
    }
}

#[test]
fn mis_residual_writes_grow_subquadratically() {
    let sizes = [64usize, 128, 256];
    let mut points = Vec::new();
    for &n in &sizes {
        let w = 2 * vertex_bits(n);
        let runs = 8;
        let total: usize = (0..runs)
            .map(|s| {
                let (g, z) = instance(n, 0.5, 4, s);
                let rec = Builtin::RogMis
                    .run(&g, &z, &Seed::new(s, "public"), &Seed::new(s, "private"), DEFAULT_STEP_BUDGET)
                    .unwrap();
                rec.transcript.records().iter().filter(|r| r.payload.len() == w).count()
            })
            .sum();
        points.push(((n as f64).ln(), (total as f64 / runs as f64).max(1.0).ln()));
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / points.len() as f64;
    let my = points.iter().map(|p| p.1).sum::<f64>() / points.len() as f64;
    let slope = points.iter().map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / points.iter().map(|(x, _)| (x - mx).powi(2)).sum::<f64>();
    assert!(slope < 1.5, "log-log exponent {slope}");
}
