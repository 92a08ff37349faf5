//! Labeled simple graphs on vertices `1..=n`, edge partitions, input
//! distributions, and solution checking.

mod io;
mod optimum;
mod partition;
mod sample;
mod solution;

pub use io::{parse_graph, parse_partition, write_graph, write_partition};
pub use optimum::brute_force_optimum;
pub use partition::{exact_good_probability, is_good_partition, PartitionFunction};
pub use sample::{sample_gadget, sample_gnp, sample_multigadget, sample_partition};
pub use solution::{validate_solution, ProblemKind, Solution, Verdict};

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Unordered vertex pair stored as `(u, v)` with `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge(usize, usize);

impl Edge {
    pub fn new(a: usize, b: usize) -> Self {
        assert_ne!(a, b, "self-loop");
        if a < b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }

    pub fn u(self) -> usize {
        self.0
    }

    pub fn v(self) -> usize {
        self.1
    }

    pub fn touches(self, x: usize) -> bool {
        self.0 == x || self.1 == x
    }

    pub fn shares_endpoint(self, other: Edge) -> bool {
        self.touches(other.0) || self.touches(other.1)
    }

    pub fn other(self, x: usize) -> usize {
        if self.0 == x {
            self.1
        } else {
            self.0
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}, {}}}", self.0, self.1)
    }
}

impl Serialize for Edge {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.0, self.1].serialize(s)
    }
}

/// Number of unordered pairs on `n` vertices.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// All pairs of `1..=n` in canonical order: (1,2), (1,3), …, (1,n), (2,3), …
pub fn all_pairs(n: usize) -> impl Iterator<Item = Edge> {
    (1..=n).flat_map(move |u| (u + 1..=n).map(move |v| Edge(u, v)))
}

/// Position of `e` in [`all_pairs`] order.
pub fn pair_index(n: usize, e: Edge) -> usize {
    let (u, v) = (e.0 - 1, e.1 - 1);
    u * (2 * n - u - 1) / 2 + (v - u - 1)
}

/// Bits needed to write one vertex id of an `n`-vertex graph.
pub fn vertex_bits(n: usize) -> usize {
    ceil_log2(n)
}

pub fn ceil_log2(x: usize) -> usize {
    if x <= 1 {
        0
    } else {
        (usize::BITS - (x - 1).leading_zeros()) as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<Edge>,
    adj: Vec<BTreeSet<usize>>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            edges: BTreeSet::new(),
            adj: vec![BTreeSet::new(); n + 1],
        }
    }

    /// Builds a graph from `(u, v)` pairs, rejecting loops, duplicates and
    /// out-of-range endpoints.
    pub fn new(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Graph::empty(n);
        for (a, b) in pairs {
            for x in [a, b] {
                if x == 0 || x > n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            let e = Edge::new(a, b);
            if !g.insert(e) {
                return Err(Error::DuplicatePair(e.0, e.1));
            }
        }
        Ok(g)
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        Graph::new(n, edges.into_iter().map(|e| (e.0, e.1)))
    }

    /// Graph whose edge set is the pairs selected by bit `i` of `mask`, in
    /// canonical pair order.
    pub fn from_pair_mask(n: usize, mask: u64) -> Self {
        let mut g = Graph::empty(n);
        for (i, e) in all_pairs(n).enumerate() {
            if mask >> i & 1 == 1 {
                g.insert(e);
            }
        }
        g
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for e in all_pairs(n) {
            g.insert(e);
        }
        g
    }

    pub fn path(n: usize) -> Self {
        Graph::new(n, (1..n).map(|i| (i, i + 1))).expect("path is simple")
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Graph::path(n);
        if n >= 3 {
            g.insert(Edge::new(1, n));
        }
        g
    }

    fn insert(&mut self, e: Edge) -> bool {
        if !self.edges.insert(e) {
            return false;
        }
        self.adj[e.0].insert(e.1);
        self.adj[e.1].insert(e.0);
        true
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a != b && self.edges.contains(&Edge::new(a, b))
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.edges.contains(&e)
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().copied()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        (1..=self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Bitmask of present pairs in canonical order (`n` ≤ 11).
    pub fn pair_mask(&self) -> u64 {
        assert!(pair_count(self.n) <= 64);
        self.edges
            .iter()
            .fold(0, |m, &e| m | 1 << pair_index(self.n, e))
    }

    /// Multi-source BFS distance from `sources` to every vertex
    /// (`None` = unreachable). Index 0 is unused.
    pub fn distances_from(&self, sources: impl IntoIterator<Item = usize>) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n + 1];
        let mut queue = VecDeque::new();
        for s in sources {
            if dist[s].is_none() {
                dist[s] = Some(0);
                queue.push_back(s);
            }
        }
        while let Some(x) = queue.pop_front() {
            let d = dist[x].unwrap() + 1;
            for &y in &self.adj[x] {
                if dist[y].is_none() {
                    dist[y] = Some(d);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// Subgraph on the same vertex set keeping only edges with both
    /// endpoints in `keep`.
    pub fn induced_on(&self, keep: &[bool]) -> Graph {
        let mut g = Graph::empty(self.n);
        for e in self.edges() {
            if keep[e.0] && keep[e.1] {
                g.insert(e);
            }
        }
        g
    }
}
