use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use super::{brute_force_optimum, Edge, Graph};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProblemKind {
    MaximalMatching,
    MaximalIndependentSet,
    MinDominatingSet,
    MinVertexCover,
    DeltaPlusOneColoring,
    /// Independent set with every vertex within distance `t` of it.
    TRulingSet(usize),
}

impl ProblemKind {
    /// The five problems whose non-triviality is checked by search.
    pub const SILENT_CANDIDATES: [ProblemKind; 5] = [
        ProblemKind::MaximalMatching,
        ProblemKind::MaximalIndependentSet,
        ProblemKind::MinDominatingSet,
        ProblemKind::MinVertexCover,
        ProblemKind::DeltaPlusOneColoring,
    ];

    pub fn empty_solution(self) -> Solution {
        match self {
            ProblemKind::MaximalMatching => Solution::EdgeSet(BTreeSet::new()),
            ProblemKind::DeltaPlusOneColoring => Solution::Coloring(BTreeMap::new()),
            _ => Solution::VertexSet(BTreeSet::new()),
        }
    }

    fn accepts(self, s: &Solution) -> bool {
        matches!(
            (self, s),
            (ProblemKind::MaximalMatching, Solution::EdgeSet(_))
                | (ProblemKind::DeltaPlusOneColoring, Solution::Coloring(_))
                | (
                    ProblemKind::MaximalIndependentSet
                        | ProblemKind::MinDominatingSet
                        | ProblemKind::MinVertexCover
                        | ProblemKind::TRulingSet(_),
                    Solution::VertexSet(_)
                )
        )
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProblemKind::MaximalMatching => f.write_str("maximal-matching"),
            ProblemKind::MaximalIndependentSet => f.write_str("maximal-independent-set"),
            ProblemKind::MinDominatingSet => f.write_str("min-dominating-set"),
            ProblemKind::MinVertexCover => f.write_str("min-vertex-cover"),
            ProblemKind::DeltaPlusOneColoring => f.write_str("delta-plus-one-coloring"),
            ProblemKind::TRulingSet(t) => write!(f, "ruling-set-{t}"),
        }
    }
}

impl Serialize for ProblemKind {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for ProblemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let kind = match s {
            "maximal-matching" | "mm" => ProblemKind::MaximalMatching,
            "maximal-independent-set" | "mis" => ProblemKind::MaximalIndependentSet,
            "min-dominating-set" | "dominating-set" | "mds" => ProblemKind::MinDominatingSet,
            "min-vertex-cover" | "vertex-cover" | "mvc" => ProblemKind::MinVertexCover,
            "delta-plus-one-coloring" | "coloring" => ProblemKind::DeltaPlusOneColoring,
            other => {
                let t = other
                    .strip_prefix("ruling-set-")
                    .and_then(|t| t.parse::<usize>().ok())
                    .filter(|&t| t >= 2)
                    .ok_or_else(|| Error::InvalidParameter(format!("unknown problem '{other}'")))?;
                ProblemKind::TRulingSet(t)
            }
        };
        Ok(kind)
    }
}

/// Output of a protocol or of one party.
///
/// In a `Coloring`, color 0 marks a vertex that two fragments colored
/// differently; such a coloring is never valid.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Solution {
    EdgeSet(BTreeSet<Edge>),
    VertexSet(BTreeSet<usize>),
    Coloring(BTreeMap<usize, usize>),
}

impl Solution {
    /// Union of party outputs: set union for edge and vertex sets, merge of
    /// partial maps for colorings (disagreements become color 0).
    pub fn union<'a>(kind: ProblemKind, parts: impl IntoIterator<Item = &'a Solution>) -> Result<Solution> {
        let mut acc = kind.empty_solution();
        for part in parts {
            acc.absorb(part)?;
        }
        Ok(acc)
    }

    pub fn absorb(&mut self, other: &Solution) -> Result<()> {
        match (self, other) {
            (Solution::EdgeSet(a), Solution::EdgeSet(b)) => a.extend(b),
            (Solution::VertexSet(a), Solution::VertexSet(b)) => a.extend(b),
            (Solution::Coloring(a), Solution::Coloring(b)) => {
                for (&v, &c) in b {
                    a.entry(v)
                        .and_modify(|old| {
                            if *old != c {
                                *old = 0;
                            }
                        })
                        .or_insert(c);
                }
            }
            (me, _) => return Err(Error::VariantMismatch(format!("cannot merge into {me:?}"))),
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        match self {
            Solution::EdgeSet(s) => s.len(),
            Solution::VertexSet(s) => s.len(),
            Solution::Coloring(m) => m.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Keeps the part on vertices `offset+1 ..= offset+t`, relabelled to `1..=t`.
    pub fn restrict_to_block(&self, offset: usize, t: usize) -> Solution {
        let inside = |v: usize| v > offset && v <= offset + t;
        match self {
            Solution::EdgeSet(s) => Solution::EdgeSet(
                s.iter()
                    .filter(|e| inside(e.u()) && inside(e.v()))
                    .map(|e| Edge::new(e.u() - offset, e.v() - offset))
                    .collect(),
            ),
            Solution::VertexSet(s) => {
                Solution::VertexSet(s.iter().filter(|&&v| inside(v)).map(|v| v - offset).collect())
            }
            Solution::Coloring(m) => Solution::Coloring(
                m.iter()
                    .filter(|(&v, _)| inside(v))
                    .map(|(&v, &c)| (v - offset, c))
                    .collect(),
            ),
        }
    }
}

impl Serialize for Solution {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Solution::EdgeSet(e) => e.serialize(s),
            Solution::VertexSet(v) => v.serialize(s),
            Solution::Coloring(m) => {
                let pairs: Vec<[usize; 2]> = m.iter().map(|(&v, &c)| [v, c]).collect();
                pairs.serialize(s)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    Invalid(String),
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }
}

macro_rules! reject {
    ($($arg:tt)*) => {
        return Ok(Verdict::Invalid(format!($($arg)*)))
    };
}

/// Checks `s` against the output contract of `p` on `g`.
pub fn validate_solution(p: ProblemKind, g: &Graph, s: &Solution) -> Result<Verdict> {
    if !p.accepts(s) {
        return Err(Error::VariantMismatch(p.to_string()));
    }
    let n = g.n();
    match s {
        Solution::EdgeSet(m) => {
            let mut used = vec![false; n + 1];
            for &e in m {
                if e.v() > n {
                    reject!("edge {e} out of range");
                }
                if !g.contains(e) {
                    reject!("{e} is not an edge of the graph");
                }
                for x in [e.u(), e.v()] {
                    if std::mem::replace(&mut used[x], true) {
                        reject!("vertex {x} matched twice");
                    }
                }
            }
            if let Some(e) = g.edges().find(|e| !used[e.u()] && !used[e.v()]) {
                reject!("edge {e} can be added");
            }
            Ok(Verdict::Valid)
        }
        Solution::VertexSet(set) => {
            if let Some(&v) = set.iter().find(|&&v| v == 0 || v > n) {
                reject!("vertex {v} out of range");
            }
            let independent = || g.edges().find(|e| set.contains(&e.u()) && set.contains(&e.v()));
            match p {
                ProblemKind::MaximalIndependentSet => {
                    if let Some(e) = independent() {
                        reject!("{e} has both endpoints chosen");
                    }
                    if let Some(v) = (1..=n).find(|&v| !set.contains(&v) && !g.neighbors(v).any(|u| set.contains(&u))) {
                        reject!("vertex {v} can be added");
                    }
                }
                ProblemKind::MinDominatingSet => {
                    if let Some(v) = (1..=n).find(|&v| !set.contains(&v) && !g.neighbors(v).any(|u| set.contains(&u))) {
                        reject!("vertex {v} is not dominated");
                    }
                    let gamma = brute_force_optimum(p, g)?;
                    if set.len() != gamma {
                        reject!("size {} but domination number is {gamma}", set.len());
                    }
                }
                ProblemKind::MinVertexCover => {
                    if let Some(e) = g.edges().find(|e| !set.contains(&e.u()) && !set.contains(&e.v())) {
                        reject!("edge {e} is not covered");
                    }
                    let tau = brute_force_optimum(p, g)?;
                    if set.len() != tau {
                        reject!("size {} but vertex cover number is {tau}", set.len());
                    }
                }
                ProblemKind::TRulingSet(t) => {
                    if let Some(e) = independent() {
                        reject!("{e} has both endpoints chosen");
                    }
                    let dist = g.distances_from(set.iter().copied());
                    if let Some(v) = (1..=n).find(|&v| dist[v].is_none_or(|d| d > t)) {
                        match dist[v] {
                            Some(d) => reject!("vertex {v} at distance {d} > {t}"),
                            None => reject!("vertex {v} has no chosen vertex in its component"),
                        }
                    }
                }
                _ => unreachable!("variant checked above"),
            }
            Ok(Verdict::Valid)
        }
        Solution::Coloring(colors) => {
            let palette = g.max_degree() + 1;
            for v in 1..=n {
                match colors.get(&v) {
                    None => reject!("vertex {v} is uncolored"),
                    Some(0) => reject!("vertex {v} colored inconsistently"),
                    Some(&c) if c > palette => reject!("vertex {v} has color {c} > Δ+1 = {palette}"),
                    _ => {}
                }
            }
            if let Some(&v) = colors.keys().find(|&&v| v == 0 || v > n) {
                reject!("vertex {v} out of range");
            }
            if let Some(e) = g.edges().find(|e| colors[&e.u()] == colors[&e.v()]) {
                reject!("{e} is monochromatic");
            }
            Ok(Verdict::Valid)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vs(v: &[usize]) -> Solution {
        Solution::VertexSet(v.iter().copied().collect())
    }

    fn es(e: &[(usize, usize)]) -> Solution {
        Solution::EdgeSet(e.iter().map(|&(a, b)| Edge::new(a, b)).collect())
    }

    fn check(p: ProblemKind, g: &Graph, s: &Solution) -> bool {
        validate_solution(p, g, s).unwrap().is_valid()
    }

    #[test]
    fn matching_examples() {
        let path = Graph::path(3);
        assert!(check(ProblemKind::MaximalMatching, &path, &es(&[(1, 2)])));
        assert!(!check(ProblemKind::MaximalMatching, &path, &es(&[])));
        assert!(!check(ProblemKind::MaximalMatching, &path, &es(&[(1, 2), (2, 3)])));
        assert!(!check(ProblemKind::MaximalMatching, &path, &es(&[(1, 3)])));
    }

    #[test]
    fn mis_examples() {
        let tri = Graph::complete(3);
        assert!(!check(ProblemKind::MaximalIndependentSet, &tri, &vs(&[1, 2])));
        assert!(check(ProblemKind::MaximalIndependentSet, &tri, &vs(&[3])));
        assert!(!check(ProblemKind::MaximalIndependentSet, &tri, &vs(&[])));
    }

    #[test]
    fn coloring_examples() {
        let empty = Graph::empty(4);
        let ones = Solution::Coloring((1..=4).map(|v| (v, 1)).collect());
        assert!(check(ProblemKind::DeltaPlusOneColoring, &empty, &ones));
        let two = Solution::Coloring((1..=4).map(|v| (v, 2)).collect());
        assert!(!check(ProblemKind::DeltaPlusOneColoring, &empty, &two));
        let k2 = Graph::complete(2);
        let bad = Solution::Coloring([(1, 1), (2, 1)].into());
        assert!(!check(ProblemKind::DeltaPlusOneColoring, &k2, &bad));
        let partial = Solution::Coloring([(1, 1)].into());
        assert!(!check(ProblemKind::DeltaPlusOneColoring, &k2, &partial));
        let conflicted = Solution::Coloring([(1, 0), (2, 2)].into());
        assert!(!check(ProblemKind::DeltaPlusOneColoring, &k2, &conflicted));
    }

    #[test]
    fn ruling_set_examples() {
        let p4 = Graph::path(4);
        assert!(!check(ProblemKind::TRulingSet(2), &p4, &vs(&[4])));
        assert!(check(ProblemKind::TRulingSet(3), &p4, &vs(&[4])));
        assert!(check(ProblemKind::TRulingSet(2), &p4, &vs(&[2])));
        assert!(!check(ProblemKind::TRulingSet(2), &p4, &vs(&[2, 3])));
        let two_parts = Graph::new(4, [(1, 2)]).unwrap();
        assert!(!check(ProblemKind::TRulingSet(2), &two_parts, &vs(&[1, 3])));
        assert!(check(ProblemKind::TRulingSet(2), &two_parts, &vs(&[1, 3, 4])));
    }

    #[test]
    fn dominating_and_cover_examples() {
        let star = Graph::new(4, [(1, 2), (1, 3), (1, 4)]).unwrap();
        assert!(check(ProblemKind::MinDominatingSet, &star, &vs(&[1])));
        assert!(!check(ProblemKind::MinDominatingSet, &star, &vs(&[2, 3, 4])));
        assert!(check(ProblemKind::MinVertexCover, &star, &vs(&[1])));
        assert!(!check(ProblemKind::MinVertexCover, &star, &vs(&[2, 3])));
    }

    #[test]
    fn variant_mismatch_is_an_error() {
        let g = Graph::empty(2);
        assert!(matches!(
            validate_solution(ProblemKind::MaximalMatching, &g, &vs(&[1])),
            Err(Error::VariantMismatch(_))
        ));
    }

    #[test]
    fn coloring_union_marks_conflicts() {
        let a = Solution::Coloring([(1, 1), (2, 2)].into());
        let b = Solution::Coloring([(2, 3), (3, 1)].into());
        let u = Solution::union(ProblemKind::DeltaPlusOneColoring, [&a, &b]).unwrap();
        assert_eq!(u, Solution::Coloring([(1, 1), (2, 0), (3, 1)].into()));
    }

    #[test]
    fn problem_names_round_trip() {
        for p in ProblemKind::SILENT_CANDIDATES.into_iter().chain([ProblemKind::TRulingSet(3)]) {
            assert_eq!(p.to_string().parse::<ProblemKind>().unwrap(), p);
        }
        assert!("ruling-set-1".parse::<ProblemKind>().is_err());
    }
}
