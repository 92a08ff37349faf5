use std::collections::BTreeSet;

use super::{edge_message, parse_edge};
use crate::blackboard::{BitString, Blackboard, PartyView, Protocol, PublicInfo};
use crate::error::Result;
use crate::graph::{ProblemKind, Solution};

/// Greedy maximal matching: parties write, in id order, every local edge
/// whose endpoints are both still unmatched.
#[derive(Clone, Copy, Debug, Default)]
pub struct GreedyMatching;

pub fn greedy_matching_protocol() -> GreedyMatching {
    GreedyMatching
}

#[derive(Clone, Debug)]
pub struct MatchingState {
    n: usize,
    k: usize,
    matched: Vec<bool>,
}

impl Protocol for GreedyMatching {
    type Shared = MatchingState;

    fn name(&self) -> &str {
        "greedy-matching"
    }

    fn problem(&self) -> ProblemKind {
        ProblemKind::MaximalMatching
    }

    fn init(&self, info: &PublicInfo) -> Result<MatchingState> {
        Ok(MatchingState {
            n: info.n,
            k: info.k,
            matched: vec![false; info.n + 1],
        })
    }

    fn observe(&self, s: &mut MatchingState, _: &PublicInfo, board: &Blackboard) -> Result<()> {
        for r in board.last_turn_records() {
            let e = parse_edge(&r.payload, s.n)?;
            s.matched[e.u()] = true;
            s.matched[e.v()] = true;
        }
        Ok(())
    }

    fn next_writer(&self, s: &MatchingState, board: &Blackboard) -> Option<usize> {
        let t = board.turns_completed();
        (t < s.k).then_some(t + 1)
    }

    fn take_turn(&self, s: &MatchingState, view: &PartyView, _: &Blackboard) -> Result<Vec<BitString>> {
        let mut matched = s.matched.clone();
        let mut out = Vec::new();
        for &e in &view.local_edges {
            if !matched[e.u()] && !matched[e.v()] {
                matched[e.u()] = true;
                matched[e.v()] = true;
                out.push(edge_message(e, s.n));
            }
        }
        Ok(out)
    }

    fn output(&self, s: &MatchingState, view: &PartyView, board: &Blackboard) -> Result<Solution> {
        let mine = board
            .transcript()
            .records()
            .iter()
            .filter(|r| r.party == view.id)
            .map(|r| parse_edge(&r.payload, s.n))
            .collect::<Result<BTreeSet<_>>>()?;
        Ok(Solution::EdgeSet(mine))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blackboard::{replay_turns, run_protocol};
    use crate::coins::Seed;
    use crate::graph::{
        sample_gnp, sample_partition, validate_solution, vertex_bits, Edge, Graph, PartitionFunction,
    };

    fn seeds(i: u64) -> (Seed, Seed) {
        (Seed::new(2 * i, "public"), Seed::new(2 * i + 1, "private"))
    }

    fn run(g: &Graph, z: &PartitionFunction) -> crate::blackboard::RunRecord {
        let (a, b) = seeds(0);
        run_protocol(&GreedyMatching, g, z, &a, &b).unwrap()
    }

    #[test]
    fn single_edge() {
        let g = Graph::new(2, [(1, 2)]).unwrap();
        for k in 1..4 {
            for party in 1..=k {
                let z = PartitionFunction::new(2, k, vec![party]).unwrap();
                let rec = run(&g, &z);
                assert_eq!(rec.combined_output, Solution::EdgeSet([Edge::new(1, 2)].into()));
                assert_eq!(rec.transcript.records().len(), 1);
            }
        }
    }

    #[test]
    fn empty_graph_writes_nothing() {
        let z = PartitionFunction::constant(4, 3, 2).unwrap();
        let rec = run(&Graph::empty(4), &z);
        assert!(rec.combined_output.is_empty());
        assert_eq!(rec.transcript.total_payload_bits(), 0);
        assert_eq!(rec.cost_bits, 0);
    }

    #[test]
    fn triangle_at_one_party() {
        let z = PartitionFunction::constant(3, 2, 1).unwrap();
        let rec = run(&Graph::complete(3), &z);
        assert_eq!(rec.combined_output, Solution::EdgeSet([Edge::new(1, 2)].into()));
    }

    #[test]
    fn perfect_matching_payload() {
        let g = Graph::new(8, [(1, 2), (3, 4), (5, 6), (7, 8)]).unwrap();
        let mut parties = vec![1; crate::graph::pair_count(8)];
        for (i, e) in g.edges().enumerate() {
            parties[crate::graph::pair_index(8, e)] = i + 1;
        }
        let z = PartitionFunction::new(8, 4, parties).unwrap();
        let rec = run(&g, &z);
        assert_eq!(rec.combined_output.len(), 4);
        assert_eq!(rec.transcript.total_payload_bits(), 24);
        assert_eq!(rec.transcript.total_payload_bits(), 4 * 2 * vertex_bits(8));
    }

    #[test]
    fn always_maximal_and_within_budget() {
        for i in 0..200u64 {
            let n = 2 + (i % 15) as usize;
            let k = 1 + (i % 6) as usize;
            let g = sample_gnp(n, [0.1, 0.3, 0.6][i as usize % 3], &Seed::new(i, "g"));
            let z = sample_partition(n, k, &Seed::new(i, "z")).unwrap();
            let (a, b) = seeds(i);
            let rec = run_protocol(&GreedyMatching, &g, &z, &a, &b).unwrap();
            assert!(validate_solution(ProblemKind::MaximalMatching, &g, &rec.combined_output)
                .unwrap()
                .is_valid());
            assert!(rec.transcript.total_payload_bits() <= (n / 2) * 2 * vertex_bits(n));
            assert!(rec.cost_bits >= rec.transcript.total_payload_bits());
            assert_eq!(run_protocol(&GreedyMatching, &g, &z, &a, &b).unwrap(), rec);
            if i % 10 == 0 {
                assert!(replay_turns(&GreedyMatching, &g, &z, &rec).unwrap());
            }
        }
    }
}
