use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::{edge_message, parse_edge, snapped_ceil};
use crate::blackboard::{BitString, Blackboard, PartyView, Protocol, PublicInfo};
use crate::coins::Coins;
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, ProblemKind, Solution};

pub(crate) const DEFAULT_COEFFICIENT: f64 = 4.0;

/// Largest conflict graph `list_color_exact` will search.
pub const LIST_COLOR_LIMIT: usize = 512;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PaletteAssignment {
    pub delta_guess: usize,
    pub palette_size: usize,
    /// Colors available to each vertex, a subset of `1..=delta_guess+1`.
    pub palettes: BTreeMap<usize, BTreeSet<usize>>,
}

impl PaletteAssignment {
    /// Draws one palette per vertex of `1..=n` from `coins`.
    pub fn sample(n: usize, delta_guess: usize, palette_size: usize, coins: &Coins) -> Self {
        let colors = delta_guess + 1;
        let size = palette_size.min(colors);
        let mut stream = coins.stream();
        let palettes = (1..=n)
            .map(|v| {
                if size == colors {
                    return (v, (1..=colors).collect());
                }
                let p = stream
                    .sample_distinct(colors as u64, size)
                    .into_iter()
                    .map(|c| c as usize + 1)
                    .collect();
                (v, p)
            })
            .collect();
        PaletteAssignment {
            delta_guess,
            palette_size: size,
            palettes,
        }
    }

    pub fn palette(&self, v: usize) -> &BTreeSet<usize> {
        static EMPTY: BTreeSet<usize> = BTreeSet::new();
        self.palettes.get(&v).unwrap_or(&EMPTY)
    }

    pub fn conflicts(&self, e: Edge) -> bool {
        let (a, b) = (self.palette(e.u()), self.palette(e.v()));
        a.intersection(b).next().is_some()
    }

    fn is_full(&self) -> bool {
        let colors = self.delta_guess + 1;
        self.palettes.values().all(|p| p.len() == colors)
    }
}

/// Exact backtracking search for a proper coloring of `conflict` where every
/// vertex takes a color from its palette.
///
/// Vertices are colored in order of decreasing degree, then increasing id,
/// trying colors in increasing order, so the result is the first such
/// coloring in that order. Vertices without a palette are left out.
pub fn list_color_exact(
    conflict: &Graph,
    palettes: &PaletteAssignment,
) -> Result<Option<BTreeMap<usize, usize>>> {
    let n = conflict.n();
    if n > LIST_COLOR_LIMIT {
        return Err(Error::TooLarge {
            what: "conflict graph vertices",
            value: n,
            limit: LIST_COLOR_LIMIT,
        });
    }
    let mut order: Vec<usize> = (1..=n).filter(|&v| palettes.palettes.contains_key(&v)).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(conflict.degree(v)), v));
    let mut search = Search {
        g: conflict,
        order,
        lists: (0..=n).map(|v| palettes.palette(v).iter().copied().collect()).collect(),
        banned: (0..=n).map(|v| vec![0; palettes.palette(v).len()]).collect(),
        live: (0..=n).map(|v| palettes.palette(v).len()).collect(),
        color: vec![0; n + 1],
        symmetric: palettes.is_full(),
    };
    if search.order.iter().any(|&v| search.live[v] == 0) {
        return Ok(None);
    }
    Ok(search.run(0, 0).then(|| {
        search
            .order
            .iter()
            .map(|&v| (v, search.color[v]))
            .collect()
    }))
}

struct Search<'a> {
    g: &'a Graph,
    order: Vec<usize>,
    lists: Vec<Vec<usize>>,
    /// How many colored neighbors hold each palette entry.
    banned: Vec<Vec<u32>>,
    live: Vec<usize>,
    color: Vec<usize>,
    /// All palettes equal `1..=Δ'+1`, so colors are interchangeable.
    symmetric: bool,
}

impl Search<'_> {
    fn run(&mut self, idx: usize, max_used: usize) -> bool {
        let Some(&v) = self.order.get(idx) else {
            return true;
        };
        for i in 0..self.lists[v].len() {
            if self.banned[v][i] > 0 {
                continue;
            }
            let c = self.lists[v][i];
            if self.symmetric && c > max_used + 1 {
                break;
            }
            self.color[v] = c;
            if self.ban(v, c) && self.run(idx + 1, max_used.max(c)) {
                return true;
            }
            self.unban(v, c);
            self.color[v] = 0;
        }
        false
    }

    /// Removes `c` from uncolored neighbors; false if one runs dry. Always
    /// applies every removal so `unban` can undo it.
    fn ban(&mut self, v: usize, c: usize) -> bool {
        let mut ok = true;
        for u in self.g.neighbors(v) {
            if self.color[u] != 0 {
                continue;
            }
            if let Ok(i) = self.lists[u].binary_search(&c) {
                self.banned[u][i] += 1;
                if self.banned[u][i] == 1 {
                    self.live[u] -= 1;
                    if self.live[u] == 0 && !self.lists[u].is_empty() {
                        ok = false;
                    }
                }
            }
        }
        ok
    }

    fn unban(&mut self, v: usize, c: usize) {
        for u in self.g.neighbors(v) {
            if self.color[u] != 0 {
                continue;
            }
            if let Ok(i) = self.lists[u].binary_search(&c) {
                self.banned[u][i] -= 1;
                if self.banned[u][i] == 0 {
                    self.live[u] += 1;
                }
            }
        }
    }
}

/// Result of one binary-search probe.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeOutcome {
    pub delta_guess: usize,
    pub conflict_edges: usize,
    pub success: bool,
}

/// (Δ+1)-coloring by palette sparsification with a binary search over the
/// unknown maximum degree.
#[derive(Clone, Copy, Debug)]
pub struct PaletteColoring {
    coefficient: f64,
}

pub fn palette_coloring_protocol(coefficient: f64) -> Result<PaletteColoring> {
    if !(coefficient.is_finite() && coefficient > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "palette coefficient must be positive, got {coefficient}"
        )));
    }
    Ok(PaletteColoring { coefficient })
}

impl Default for PaletteColoring {
    fn default() -> Self {
        PaletteColoring {
            coefficient: DEFAULT_COEFFICIENT,
        }
    }
}

impl PaletteColoring {
    pub fn palette_size(&self, n: usize) -> usize {
        snapped_ceil(self.coefficient * ((n + 1) as f64).log2()).max(1)
    }

    fn probe(&self, s: &mut PaletteState, coins: &Coins) {
        if s.lo > s.hi {
            s.current = None;
            return;
        }
        let mid = (s.lo + s.hi + 1) / 2;
        let j = s.probes.len();
        let palettes = PaletteAssignment::sample(
            s.n,
            mid as usize,
            self.palette_size(s.n),
            &coins.derive(&format!("probe:{j}")),
        );
        s.current = Some(palettes);
        s.conflict = Graph::empty(s.n);
        s.conflict_edges.clear();
    }
}

#[derive(Clone, Debug)]
pub struct PaletteState {
    n: usize,
    k: usize,
    lo: i64,
    hi: i64,
    current: Option<PaletteAssignment>,
    conflict: Graph,
    conflict_edges: Vec<Edge>,
    turns_in_probe: usize,
    best: Option<BTreeMap<usize, usize>>,
    probes: Vec<ProbeOutcome>,
}

impl PaletteState {
    pub fn probes(&self) -> &[ProbeOutcome] {
        &self.probes
    }

    pub fn best(&self) -> Option<&BTreeMap<usize, usize>> {
        self.best.as_ref()
    }
}

impl Protocol for PaletteColoring {
    type Shared = PaletteState;

    fn name(&self) -> &str {
        "palette-coloring"
    }

    fn problem(&self) -> ProblemKind {
        ProblemKind::DeltaPlusOneColoring
    }

    fn init(&self, info: &PublicInfo) -> Result<PaletteState> {
        let n = info.n;
        let mut s = PaletteState {
            n,
            k: info.k,
            lo: 0,
            hi: n as i64 - 1,
            current: None,
            conflict: Graph::empty(n),
            conflict_edges: Vec::new(),
            turns_in_probe: 0,
            best: None,
            probes: Vec::new(),
        };
        self.probe(&mut s, &info.coins);
        Ok(s)
    }

    fn observe(&self, s: &mut PaletteState, info: &PublicInfo, board: &Blackboard) -> Result<()> {
        for r in board.last_turn_records() {
            s.conflict_edges.push(parse_edge(&r.payload, s.n)?);
        }
        s.turns_in_probe += 1;
        if s.turns_in_probe < s.k {
            return Ok(());
        }
        s.turns_in_probe = 0;
        let palettes = s.current.take().expect("probe in progress");
        s.conflict = Graph::from_edges(s.n, s.conflict_edges.drain(..))
            .map_err(|e| Error::MalformedTranscript(e.to_string()))?;
        let found = list_color_exact(&s.conflict, &palettes)?;
        let mid = palettes.delta_guess as i64;
        s.probes.push(ProbeOutcome {
            delta_guess: palettes.delta_guess,
            conflict_edges: s.conflict.edge_count(),
            success: found.is_some(),
        });
        match found {
            Some(coloring) => {
                s.best = Some(coloring);
                s.hi = mid - 1;
            }
            None => s.lo = mid + 1,
        }
        self.probe(s, &info.coins);
        Ok(())
    }

    fn next_writer(&self, s: &PaletteState, _: &Blackboard) -> Option<usize> {
        s.current.as_ref().map(|_| s.turns_in_probe + 1)
    }

    fn take_turn(&self, s: &PaletteState, view: &PartyView, _: &Blackboard) -> Result<Vec<BitString>> {
        let palettes = s.current.as_ref().expect("probe in progress");
        Ok(view
            .local_edges
            .iter()
            .filter(|&&e| palettes.conflicts(e))
            .map(|&e| edge_message(e, s.n))
            .collect())
    }

    fn output(&self, s: &PaletteState, view: &PartyView, _: &Blackboard) -> Result<Solution> {
        Ok(Solution::Coloring(match (&s.best, view.id) {
            (Some(c), 1) => c.clone(),
            _ => BTreeMap::new(),
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blackboard::{execute, run_protocol, RunCoins};
    use crate::coins::Seed;
    use crate::graph::{sample_gnp, sample_partition, validate_solution, PartitionFunction};

    fn assignment(delta: usize, lists: &[&[usize]]) -> PaletteAssignment {
        PaletteAssignment {
            delta_guess: delta,
            palette_size: lists[0].len(),
            palettes: lists
                .iter()
                .enumerate()
                .map(|(i, l)| (i + 1, l.iter().copied().collect()))
                .collect(),
        }
    }

    #[test]
    fn list_coloring_examples() {
        let edge = Graph::new(2, [(1, 2)]).unwrap();
        assert_eq!(list_color_exact(&edge, &assignment(1, &[&[1], &[1]])).unwrap(), None);
        assert_eq!(
            list_color_exact(&edge, &assignment(1, &[&[1], &[2]])).unwrap(),
            Some(BTreeMap::from([(1, 1), (2, 2)]))
        );
        let tri = Graph::complete(3);
        assert_eq!(list_color_exact(&tri, &assignment(2, &[&[1, 2], &[1, 2], &[1, 2]])).unwrap(), None);
        let big = Graph::empty(LIST_COLOR_LIMIT + 1);
        assert!(matches!(
            list_color_exact(&big, &assignment(0, &[&[1]])),
            Err(Error::TooLarge { .. })
        ));
    }

    // Plain enumeration of all palette assignments.
    fn brute_force(g: &Graph, pal: &PaletteAssignment) -> bool {
        fn go(g: &Graph, pal: &PaletteAssignment, v: usize, col: &mut Vec<usize>) -> bool {
            if v > g.n() {
                return true;
            }
            for &c in pal.palette(v) {
                if g.neighbors(v).filter(|&u| u < v).all(|u| col[u] != c) {
                    col[v] = c;
                    if go(g, pal, v + 1, col) {
                        return true;
                    }
                }
            }
            false
        }
        go(g, pal, 1, &mut vec![0; g.n() + 1])
    }

    #[test]
    fn list_coloring_agrees_with_enumeration() {
        for i in 0..300u64 {
            let n = 2 + (i % 7) as usize;
            let g = sample_gnp(n, 0.6, &Seed::new(i, "g"));
            let delta = (i % 4) as usize;
            let size = 1 + (i % 3) as usize;
            let pal = PaletteAssignment::sample(n, delta, size, &Coins::seeded(&Seed::new(i, "p")));
            let got = list_color_exact(&g, &pal).unwrap();
            assert_eq!(got.is_some(), brute_force(&g, &pal), "case {i}");
            if let Some(c) = got {
                for e in g.edges() {
                    assert_ne!(c[&e.u()], c[&e.v()]);
                }
                for (v, col) in c {
                    assert!(pal.palette(v).contains(&col));
                }
            }
        }
    }

    #[test]
    fn empty_graph_colors_everything_one() {
        let z = PartitionFunction::constant(4, 2, 1).unwrap();
        let rec = run_protocol(&PaletteColoring::default(), &Graph::empty(4), &z, &Seed::new(0, "a"), &Seed::new(1, "b"))
            .unwrap();
        assert_eq!(rec.combined_output, Solution::Coloring((1..=4).map(|v| (v, 1)).collect()));
    }

    #[test]
    fn clique_gets_proper_coloring() {
        let g = Graph::complete(4);
        let z = sample_partition(4, 3, &Seed::new(3, "z")).unwrap();
        let rec = run_protocol(&PaletteColoring::default(), &g, &z, &Seed::new(0, "a"), &Seed::new(1, "b")).unwrap();
        assert!(validate_solution(ProblemKind::DeltaPlusOneColoring, &g, &rec.combined_output)
            .unwrap()
            .is_valid());
    }

    #[test]
    fn random_graphs_are_colored() {
        for i in 0..20u64 {
            let n = 24;
            let g = sample_gnp(n, 0.5, &Seed::new(i, "g"));
            let z = sample_partition(n, 4, &Seed::new(i, "z")).unwrap();
            let coins = RunCoins::seeded(&Seed::new(2 * i, "public"), &Seed::new(2 * i + 1, "private"));
            let exec = execute(&PaletteColoring::default(), &g, &z, &coins, 1 << 20).unwrap();
            assert!(validate_solution(ProblemKind::DeltaPlusOneColoring, &g, &exec.combined_output)
                .unwrap()
                .is_valid());
        }
    }

    #[test]
    fn rejects_bad_coefficient() {
        assert!(palette_coloring_protocol(0.0).is_err());
        assert!(palette_coloring_protocol(f64::NAN).is_err());
        assert_eq!(PaletteColoring::default().palette_size(255), 32);
    }
}
