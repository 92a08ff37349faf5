use std::collections::BTreeSet;

use super::{edge_message, parse_edge, parse_vertex, snapped_ceil, vertex_message};
use crate::blackboard::{BitString, Blackboard, PartyView, Protocol, PublicInfo};
use crate::coins::Coins;
use crate::error::{Error, Result};
use crate::graph::{Graph, ProblemKind, Solution};

/// Rank cutoffs of the phased greedy MIS simulation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MisPhasePlan {
    pub n: usize,
    pub thresholds: Vec<usize>,
    pub phase_count: usize,
}

impl MisPhasePlan {
    /// Rank blocks `[k_{i-1}, k_i)` with `k_0 = 0`, then `[k_last, n)`.
    /// Empty blocks are skipped.
    pub fn blocks(&self) -> Vec<(usize, usize)> {
        let mut cuts = vec![0];
        cuts.extend(&self.thresholds);
        cuts.push(self.n);
        cuts.windows(2)
            .filter(|w| w[0] < w[1])
            .map(|w| (w[0], w[1]))
            .collect()
    }
}

pub fn mis_phase_plan(n: usize) -> MisPhasePlan {
    let phase_count = if n >= 4 {
        snapped_ceil((n as f64).log2().log2())
    } else {
        1
    };
    let mut thresholds: Vec<usize> = Vec::new();
    for i in 1..=phase_count {
        let exp = 1.0 - 1.0 / 2f64.powi(i as i32);
        let k = snapped_ceil((n as f64).powf(exp)).clamp(1, n.saturating_sub(1).max(1));
        let k = if n == 1 { 0 } else { k };
        if thresholds.last().is_none_or(|&last| k > last) {
            thresholds.push(k);
        }
    }
    MisPhasePlan {
        n,
        thresholds,
        phase_count,
    }
}

/// Sequential greedy MIS visiting vertices in the order `pi` (`pi[r]` is the
/// vertex of rank `r`).
pub fn sequential_greedy_mis_oracle(g: &Graph, pi: &[usize]) -> Result<BTreeSet<usize>> {
    let n = g.n();
    let mut seen = vec![false; n + 1];
    if pi.len() != n || pi.iter().any(|&v| v == 0 || v > n || std::mem::replace(&mut seen[v], true)) {
        return Err(Error::InvalidParameter("not a permutation of the vertices".into()));
    }
    let mut blocked = vec![false; n + 1];
    let mut out = BTreeSet::new();
    for &v in pi {
        if !blocked[v] {
            out.insert(v);
            for u in g.neighbors(v) {
                blocked[u] = true;
            }
        }
    }
    Ok(out)
}

/// Random-order greedy MIS simulated in `O(log log n)` phases.
///
/// Each phase covers one block of ranks and takes two rounds of `k` turns.
/// In the notice round parties announce block vertices they see adjacent to
/// the current independent set; in the edge round they write local edges
/// between the block vertices nobody announced. Everyone then extends the
/// independent set greedily over that block.
#[derive(Clone, Copy, Debug, Default)]
pub struct RandomOrderGreedyMis;

pub fn random_order_greedy_mis_protocol() -> RandomOrderGreedyMis {
    RandomOrderGreedyMis
}

impl RandomOrderGreedyMis {
    /// The shared order, drawn from the public coins: `pi[r]` has rank `r`.
    pub fn permutation(n: usize, public: &Coins) -> Vec<usize> {
        let mut pi: Vec<usize> = (1..=n).collect();
        public.derive("perm").stream().shuffle(&mut pi);
        pi
    }
}

#[derive(Clone, Debug)]
pub struct MisState {
    n: usize,
    k: usize,
    pi: Vec<usize>,
    rank: Vec<usize>,
    blocks: Vec<(usize, usize)>,
    in_set: Vec<bool>,
    /// Announced as adjacent to the independent set.
    dominated: Vec<bool>,
    /// Edges written in the current block's edge round.
    block_adj: Vec<Vec<usize>>,
}

impl MisState {
    fn round(&self, turns: usize) -> (usize, bool) {
        let per_phase = 2 * self.k;
        (turns / per_phase, turns % per_phase < self.k)
    }

    fn in_block(&self, phase: usize, v: usize) -> bool {
        let (lo, hi) = self.blocks[phase];
        (lo..hi).contains(&self.rank[v])
    }

    fn candidate(&self, phase: usize, v: usize) -> bool {
        self.in_block(phase, v) && !self.dominated[v]
    }

    fn finish_phase(&mut self, phase: usize) {
        let (lo, hi) = self.blocks[phase];
        for r in lo..hi {
            let v = self.pi[r];
            if self.dominated[v] {
                continue;
            }
            if self.block_adj[v].iter().any(|&u| self.in_set[u]) {
                continue;
            }
            self.in_set[v] = true;
        }
        for adj in &mut self.block_adj {
            adj.clear();
        }
    }

    pub fn independent_set(&self) -> BTreeSet<usize> {
        (1..=self.n).filter(|&v| self.in_set[v]).collect()
    }
}

impl Protocol for RandomOrderGreedyMis {
    type Shared = MisState;

    fn name(&self) -> &str {
        "rog-mis"
    }

    fn problem(&self) -> ProblemKind {
        ProblemKind::MaximalIndependentSet
    }

    fn init(&self, info: &PublicInfo) -> Result<MisState> {
        let n = info.n;
        let pi = RandomOrderGreedyMis::permutation(n, &info.coins);
        let mut rank = vec![0; n + 1];
        for (r, &v) in pi.iter().enumerate() {
            rank[v] = r;
        }
        Ok(MisState {
            n,
            k: info.k,
            pi,
            rank,
            blocks: mis_phase_plan(n).blocks(),
            in_set: vec![false; n + 1],
            dominated: vec![false; n + 1],
            block_adj: vec![Vec::new(); n + 1],
        })
    }

    fn observe(&self, s: &mut MisState, _: &PublicInfo, board: &Blackboard) -> Result<()> {
        let done = board.turns_completed();
        let (phase, notice) = s.round(done - 1);
        for r in board.last_turn_records() {
            if notice {
                let v = parse_vertex(&r.payload, s.n)?;
                s.dominated[v] = true;
            } else {
                let e = parse_edge(&r.payload, s.n)?;
                s.block_adj[e.u()].push(e.v());
                s.block_adj[e.v()].push(e.u());
            }
        }
        if done.is_multiple_of(2 * s.k) {
            s.finish_phase(phase);
        }
        Ok(())
    }

    fn next_writer(&self, s: &MisState, board: &Blackboard) -> Option<usize> {
        let t = board.turns_completed();
        (t < s.blocks.len() * 2 * s.k).then_some(t % s.k + 1)
    }

    fn take_turn(&self, s: &MisState, view: &PartyView, board: &Blackboard) -> Result<Vec<BitString>> {
        let (phase, notice) = s.round(board.turns_completed());
        if notice {
            let mut seen = BTreeSet::new();
            for e in &view.local_edges {
                for (a, b) in [(e.u(), e.v()), (e.v(), e.u())] {
                    if s.in_set[b] && s.in_block(phase, a) && !s.dominated[a] {
                        seen.insert((s.rank[a], a));
                    }
                }
            }
            Ok(seen.into_iter().map(|(_, v)| vertex_message(v, s.n)).collect())
        } else {
            Ok(view
                .local_edges
                .iter()
                .filter(|e| s.candidate(phase, e.u()) && s.candidate(phase, e.v()))
                .map(|&e| edge_message(e, s.n))
                .collect())
        }
    }

    fn output(&self, s: &MisState, view: &PartyView, _: &Blackboard) -> Result<Solution> {
        Ok(Solution::VertexSet(if view.id == 1 {
            s.independent_set()
        } else {
            BTreeSet::new()
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blackboard::{replay_turns, run_protocol};
    use crate::coins::Seed;
    use crate::graph::{sample_gnp, sample_partition, validate_solution, PartitionFunction};

    #[test]
    fn plan_examples() {
        let p = mis_phase_plan(256);
        assert_eq!((p.thresholds.clone(), p.phase_count), (vec![16, 64, 128], 3));
        assert_eq!(mis_phase_plan(16).thresholds, vec![4, 8]);
        assert_eq!(mis_phase_plan(16).phase_count, 2);
        let p = mis_phase_plan(2);
        assert_eq!((p.thresholds, p.phase_count), (vec![1], 1));
    }

    #[test]
    fn plan_invariants() {
        for n in 1..2000 {
            let p = mis_phase_plan(n);
            assert!(p.thresholds.windows(2).all(|w| w[0] < w[1]), "n = {n}");
            assert!(p.thresholds.iter().all(|&k| k < n.max(1)), "n = {n}");
            assert!(p.thresholds.len() <= p.phase_count);
            let covered: usize = p.blocks().iter().map(|(a, b)| b - a).sum();
            assert_eq!(covered, n);
        }
    }

    #[test]
    fn oracle_examples() {
        let path3 = Graph::path(3);
        assert_eq!(sequential_greedy_mis_oracle(&path3, &[2, 1, 3]).unwrap(), BTreeSet::from([2]));
        let empty = Graph::empty(5);
        assert_eq!(sequential_greedy_mis_oracle(&empty, &[3, 1, 2, 5, 4]).unwrap().len(), 5);
        let c5 = Graph::cycle(5);
        assert_eq!(sequential_greedy_mis_oracle(&c5, &[1, 2, 3, 4, 5]).unwrap(), BTreeSet::from([1, 3]));
        let p5 = Graph::path(5);
        assert_eq!(sequential_greedy_mis_oracle(&p5, &[1, 2, 3, 4, 5]).unwrap(), BTreeSet::from([1, 3, 5]));
        assert!(sequential_greedy_mis_oracle(&p5, &[1, 1, 3, 4, 5]).is_err());
    }

    #[test]
    fn clique_keeps_first_ranked_vertex() {
        let g = Graph::complete(4);
        for i in 0..20u64 {
            let z = sample_partition(4, 3, &Seed::new(i, "z")).unwrap();
            let public = Seed::new(i, "public");
            let rec = run_protocol(&RandomOrderGreedyMis, &g, &z, &public, &Seed::new(i, "private")).unwrap();
            let pi = RandomOrderGreedyMis::permutation(4, &Coins::seeded(&public));
            assert_eq!(rec.combined_output, Solution::VertexSet([pi[0]].into()));
        }
    }

    #[test]
    fn matches_sequential_oracle() {
        for i in 0..100u64 {
            let n = [16, 32][i as usize % 2];
            let k = 1 + (i % 7) as usize;
            let g = sample_gnp(n, [0.1, 0.3, 0.5][i as usize % 3], &Seed::new(i, "g"));
            let z = sample_partition(n, k, &Seed::new(i, "z")).unwrap();
            let public = Seed::new(2 * i, "public");
            let private = Seed::new(2 * i + 1, "private");
            let rec = run_protocol(&RandomOrderGreedyMis, &g, &z, &public, &private).unwrap();
            let pi = RandomOrderGreedyMis::permutation(n, &Coins::seeded(&public));
            let expected = sequential_greedy_mis_oracle(&g, &pi).unwrap();
            assert_eq!(rec.combined_output, Solution::VertexSet(expected));
            assert!(validate_solution(ProblemKind::MaximalIndependentSet, &g, &rec.combined_output)
                .unwrap()
                .is_valid());
            if i % 25 == 0 {
                assert!(replay_turns(&RandomOrderGreedyMis, &g, &z, &rec).unwrap());
            }
        }
    }

    #[test]
    fn small_graphs() {
        for n in 1..4 {
            let g = Graph::complete(n);
            let z = PartitionFunction::constant(n, 2, 1).unwrap();
            let rec = run_protocol(&RandomOrderGreedyMis, &g, &z, &Seed::new(0, "a"), &Seed::new(1, "b")).unwrap();
            assert_eq!(rec.combined_output.len(), 1);
        }
    }
}
