//! Exhaustive search for deterministic silent protocols on a single gadget.
//!
//! Under a good partition every pair of the `t`-vertex gadget sits at its own
//! party, so a silent protocol is a table: one fragment per (pair, present?)
//! plus one constant fragment for all parties without a pair.

use std::collections::BTreeMap;

use num_rational::Ratio;
use serde::Serialize;

use crate::blackboard::{BitString, Blackboard, PartyView, Protocol, PublicInfo};
use crate::error::{Error, Result};
use crate::graph::{
    all_pairs, brute_force_optimum, pair_count, Edge, Graph, ProblemKind, Solution,
};

const MAX_T: usize = 5;
const UNCOLORED: u8 = 0;
const CONFLICT: u8 = u8::MAX;

/// A deterministic silent protocol on one gadget.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SilentFragmentTable {
    pub problem: ProblemKind,
    pub t: usize,
    /// Which party holds each pair; injective.
    #[serde(serialize_with = "serialize_pair_map")]
    pub pair_party: BTreeMap<Edge, usize>,
    /// Combined output of the parties holding no pair.
    pub base: Solution,
    /// Output of the holder of `pair` when the edge is absent (`false`) or
    /// present (`true`).
    #[serde(serialize_with = "serialize_frag_map")]
    pub frag: BTreeMap<(Edge, bool), Solution>,
}

fn serialize_pair_map<S: serde::Serializer>(m: &BTreeMap<Edge, usize>, s: S) -> std::result::Result<S::Ok, S::Error> {
    let rows: Vec<(Edge, usize)> = m.iter().map(|(&e, &p)| (e, p)).collect();
    rows.serialize(s)
}

fn serialize_frag_map<S: serde::Serializer>(
    m: &BTreeMap<(Edge, bool), Solution>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Row<'a> {
        pair: Edge,
        present: bool,
        output: &'a Solution,
    }
    let rows: Vec<Row> = m
        .iter()
        .map(|(&(pair, present), output)| Row { pair, present, output })
        .collect();
    rows.serialize(s)
}

impl SilentFragmentTable {
    /// Relabels the pair holders; outputs are unaffected.
    pub fn with_pair_parties(mut self, pair_party: BTreeMap<Edge, usize>) -> Result<Self> {
        check_pair_parties(self.t, &pair_party)?;
        self.pair_party = pair_party;
        Ok(self)
    }
}

/// The union of all party outputs of `tbl` on input `g`.
pub fn evaluate_silent_protocol(tbl: &SilentFragmentTable, g: &Graph) -> Result<Solution> {
    if g.n() != tbl.t {
        return Err(Error::VertexCountMismatch {
            graph: g.n(),
            partition: tbl.t,
        });
    }
    let mut out = Solution::union(tbl.problem, [&tbl.base])?;
    for pair in all_pairs(tbl.t) {
        let frag = tbl
            .frag
            .get(&(pair, g.contains(pair)))
            .ok_or(Error::MissingPair(pair.u(), pair.v()))?;
        out.absorb(frag)?;
    }
    Ok(out)
}

fn check_pair_parties(t: usize, pair_party: &BTreeMap<Edge, usize>) -> Result<()> {
    for pair in all_pairs(t) {
        if !pair_party.contains_key(&pair) {
            return Err(Error::MissingPair(pair.u(), pair.v()));
        }
    }
    let mut parties: Vec<usize> = pair_party.values().copied().collect();
    parties.sort_unstable();
    if parties.windows(2).any(|w| w[0] == w[1]) || parties.first() == Some(&0) {
        return Err(Error::InvalidParameter("pair holders must be distinct parties".into()));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "witness")]
pub enum SilentVerdict {
    Exists(SilentFragmentTable),
    NoneExists,
}

impl SilentVerdict {
    pub fn exists(&self) -> bool {
        matches!(self, SilentVerdict::Exists(_))
    }
}

/// A rejected partial assignment: the values given so far (base first) and
/// the gadget graph they already fail on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    pub assignment: Vec<Solution>,
    pub instance: Vec<Edge>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchResult {
    pub verdict: SilentVerdict,
    pub nodes_explored: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refutation_trace: Option<Vec<TraceEntry>>,
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub prune: bool,
    /// Record up to this many rejections; `None` records nothing.
    pub trace_limit: Option<usize>,
    pub pair_party: Option<BTreeMap<Edge, usize>>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            prune: true,
            trace_limit: None,
            pair_party: None,
        }
    }
}

/// Largest gadget searched for `p`.
pub fn max_gadget_size(p: ProblemKind) -> usize {
    match p {
        ProblemKind::MaximalMatching => 5,
        _ => 4,
    }
}

pub fn exists_silent_protocol(p: ProblemKind, t: usize) -> Result<SearchResult> {
    exists_silent_protocol_with(p, t, &SearchOptions::default())
}

/// Decides whether some silent table solves `p` on every graph on `t`
/// vertices.
///
/// Variables are assigned depth first: the base, every absent-edge fragment,
/// then every present-edge fragment, each over the full output space. After
/// each assignment every instance the variable feeds is checked: fully when
/// all its fragments are known, otherwise against a monotone necessary
/// condition (independence, matching, size bound, proper partial coloring).
/// With `prune` off only complete tables are checked.
pub fn exists_silent_protocol_with(p: ProblemKind, t: usize, opts: &SearchOptions) -> Result<SearchResult> {
    let limit = max_gadget_size(p);
    if t == 0 || t > limit {
        return Err(Error::TooLarge {
            what: "gadget size",
            value: t,
            limit,
        });
    }
    let pair_party = match &opts.pair_party {
        Some(pp) => {
            check_pair_parties(t, pp)?;
            pp.clone()
        }
        None => all_pairs(t).enumerate().map(|(i, e)| (e, i + 1)).collect(),
    };
    let space = Space::new(p, t)?;
    let mut search = Search {
        space: &space,
        prune: opts.prune,
        assign: Vec::with_capacity(space.vars),
        partial: vec![space.empty(); space.instances.len()],
        nodes: 0,
        trace: opts.trace_limit.map(|_| Vec::new()),
        trace_limit: opts.trace_limit.unwrap_or(0),
    };
    let found = search.dfs(0);
    let verdict = if found {
        SilentVerdict::Exists(space.table(&search.assign, pair_party))
    } else {
        SilentVerdict::NoneExists
    };
    Ok(SearchResult {
        verdict,
        nodes_explored: search.nodes,
        refutation_trace: search.trace,
    })
}

/// `2^-(C(t,2)+2)`.
pub fn epsilon_threshold(t: usize) -> Result<Ratio<u64>> {
    let e = pair_count(t) + 2;
    if e >= 64 {
        return Err(Error::TooLarge {
            what: "gadget pairs",
            value: pair_count(t),
            limit: 61,
        });
    }
    Ok(Ratio::new(1, 1u64 << e))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorollaryParameters {
    /// Smallest gadget size with no silent protocol.
    pub t: usize,
    pub k_min: u64,
    #[serde(serialize_with = "serialize_ratio")]
    pub epsilon_max: Ratio<u64>,
}

fn serialize_ratio<S: serde::Serializer>(r: &Ratio<u64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// Finds the least `t` at which `p` has no silent protocol, and derives
/// `k ≥ 3t⁴` and `ε ≤ 1/(12·C(t,2))` from it.
pub fn corollary_parameters(p: ProblemKind) -> Result<CorollaryParameters> {
    if !ProblemKind::SILENT_CANDIDATES.contains(&p) {
        return Err(Error::InvalidParameter(format!("no corollary for {p}")));
    }
    for t in 1..=max_gadget_size(p) {
        if !exists_silent_protocol(p, t)?.verdict.exists() {
            return Ok(CorollaryParameters {
                t,
                k_min: 3 * (t as u64).pow(4),
                epsilon_max: Ratio::new(1, 12 * pair_count(t) as u64),
            });
        }
    }
    Err(Error::InvalidParameter(format!(
        "{p} has silent protocols up to t = {}",
        max_gadget_size(p)
    )))
}

/// Runs a silent table as a protocol on a `t`-vertex gadget: nobody writes,
/// a pair holder outputs the fragment for its bit and everyone else the base.
#[derive(Clone, Debug)]
pub struct SilentTableProtocol {
    pub table: SilentFragmentTable,
}

impl Protocol for SilentTableProtocol {
    type Shared = ();

    fn name(&self) -> &str {
        "silent-table"
    }

    fn problem(&self) -> ProblemKind {
        self.table.problem
    }

    fn knows_partition(&self) -> bool {
        true
    }

    fn init(&self, info: &PublicInfo) -> Result<()> {
        if info.n != self.table.t {
            return Err(Error::VertexCountMismatch {
                graph: info.n,
                partition: self.table.t,
            });
        }
        Ok(())
    }

    fn observe(&self, _: &mut (), _: &PublicInfo, _: &Blackboard) -> Result<()> {
        Ok(())
    }

    fn next_writer(&self, _: &(), _: &Blackboard) -> Option<usize> {
        None
    }

    fn take_turn(&self, _: &(), _: &PartyView, _: &Blackboard) -> Result<Vec<BitString>> {
        Ok(Vec::new())
    }

    fn output(&self, _: &(), view: &PartyView, _: &Blackboard) -> Result<Solution> {
        let held: Vec<Edge> = view.partition()?.pairs_of(view.id).collect();
        if held.is_empty() {
            return Ok(self.table.base.clone());
        }
        let mut out = self.table.problem.empty_solution();
        for pair in held {
            let present = view.local_edges.contains(&pair);
            out.absorb(&self.table.frag[&(pair, present)])?;
        }
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Frag {
    /// Vertex set, or edge set indexed by canonical pair.
    Mask(u32),
    Colors([u8; MAX_T]),
}

struct Instance {
    mask: u32,
    adj: [u32; MAX_T],
    delta: usize,
    optimum: usize,
    /// Index of the last variable feeding this instance.
    last_var: usize,
}

struct Space {
    p: ProblemKind,
    t: usize,
    m: usize,
    vars: usize,
    pairs: Vec<(usize, usize)>,
    instances: Vec<Instance>,
    var_instances: Vec<Vec<usize>>,
    universe: Vec<Frag>,
}

impl Space {
    fn new(p: ProblemKind, t: usize) -> Result<Self> {
        let m = pair_count(t);
        let pairs: Vec<(usize, usize)> = all_pairs(t).map(|e| (e.u() - 1, e.v() - 1)).collect();
        let full = (1u32 << m) - 1;
        let mut masks: Vec<u32> = (0..=full).collect();
        // empty, complete, single edges, then by edge count
        masks.sort_by_key(|&mask| {
            let rank = match mask.count_ones() {
                0 => 0,
                _ if mask == full => 1,
                1 => 2,
                _ => 3,
            };
            (rank, mask.count_ones(), mask)
        });
        let instances = masks
            .into_iter()
            .map(|mask| {
                let g = Graph::from_pair_mask(t, mask as u64);
                let mut adj = [0u32; MAX_T];
                for (i, &(u, v)) in pairs.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        adj[u] |= 1 << v;
                        adj[v] |= 1 << u;
                    }
                }
                let optimum = match p {
                    ProblemKind::MinDominatingSet | ProblemKind::MinVertexCover => brute_force_optimum(p, &g)?,
                    _ => 0,
                };
                let last_var = (0..m)
                    .map(|i| 1 + i + m * (mask >> i & 1) as usize)
                    .max()
                    .unwrap_or(0);
                Ok(Instance {
                    mask,
                    adj,
                    delta: g.max_degree(),
                    optimum,
                    last_var,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let vars = 1 + 2 * m;
        let mut var_instances = vec![Vec::new(); vars];
        for (idx, inst) in instances.iter().enumerate() {
            var_instances[0].push(idx);
            for i in 0..m {
                var_instances[1 + i + m * (inst.mask >> i & 1) as usize].push(idx);
            }
        }
        let universe = match p {
            ProblemKind::MaximalMatching => (0..1u32 << m).map(Frag::Mask).collect(),
            ProblemKind::DeltaPlusOneColoring => {
                let base = t + 1;
                (0..base.pow(t as u32))
                    .map(|mut code| {
                        let mut c = [UNCOLORED; MAX_T];
                        for slot in c.iter_mut().take(t) {
                            *slot = (code % base) as u8;
                            code /= base;
                        }
                        Frag::Colors(c)
                    })
                    .collect()
            }
            _ => (0..1u32 << t).map(Frag::Mask).collect(),
        };
        Ok(Space {
            p,
            t,
            m,
            vars,
            pairs,
            instances,
            var_instances,
            universe,
        })
    }

    fn empty(&self) -> Frag {
        match self.p {
            ProblemKind::DeltaPlusOneColoring => Frag::Colors([UNCOLORED; MAX_T]),
            _ => Frag::Mask(0),
        }
    }

    fn merge(a: Frag, b: Frag) -> Frag {
        match (a, b) {
            (Frag::Mask(x), Frag::Mask(y)) => Frag::Mask(x | y),
            (Frag::Colors(mut x), Frag::Colors(y)) => {
                for (c, d) in x.iter_mut().zip(y) {
                    if d == UNCOLORED {
                        continue;
                    }
                    *c = if *c == UNCOLORED || *c == d { d } else { CONFLICT };
                }
                Frag::Colors(x)
            }
            _ => unreachable!("one space per problem"),
        }
    }

    fn independent(&self, inst: &Instance, s: u32) -> bool {
        (0..self.t).all(|v| s >> v & 1 == 0 || inst.adj[v] & s == 0)
    }

    fn dominated(&self, inst: &Instance, s: u32) -> u32 {
        (0..self.t).fold(s, |acc, v| if inst.adj[v] & s != 0 { acc | 1 << v } else { acc })
    }

    fn all(&self) -> u32 {
        (1 << self.t) - 1
    }

    /// A necessary condition that no later fragment can repair.
    fn partial_ok(&self, inst: &Instance, f: Frag) -> bool {
        match (self.p, f) {
            (ProblemKind::MaximalMatching, Frag::Mask(s)) => s & !inst.mask == 0 && self.matching_vertices(s).is_some(),
            (ProblemKind::MaximalIndependentSet | ProblemKind::TRulingSet(_), Frag::Mask(s)) => self.independent(inst, s),
            (ProblemKind::MinDominatingSet | ProblemKind::MinVertexCover, Frag::Mask(s)) => {
                s.count_ones() as usize <= inst.optimum
            }
            (ProblemKind::DeltaPlusOneColoring, Frag::Colors(c)) => {
                let colors = &c[..self.t];
                colors.iter().all(|&x| x != CONFLICT && (x as usize) <= inst.delta + 1)
                    && self
                        .pairs
                        .iter()
                        .enumerate()
                        .all(|(i, &(u, v))| inst.mask >> i & 1 == 0 || colors[u] == UNCOLORED || colors[u] != colors[v])
            }
            _ => unreachable!("one space per problem"),
        }
    }

    fn full_ok(&self, inst: &Instance, f: Frag) -> bool {
        if !self.partial_ok(inst, f) {
            return false;
        }
        match (self.p, f) {
            (ProblemKind::MaximalMatching, Frag::Mask(s)) => {
                let used = self.matching_vertices(s).unwrap_or(0);
                self.pairs
                    .iter()
                    .enumerate()
                    .all(|(i, &(u, v))| inst.mask >> i & 1 == 0 || used >> u & 1 == 1 || used >> v & 1 == 1)
            }
            (ProblemKind::MaximalIndependentSet, Frag::Mask(s)) => self.dominated(inst, s) == self.all(),
            (ProblemKind::TRulingSet(r), Frag::Mask(s)) => {
                let mut reach = s;
                for _ in 0..r {
                    reach = self.dominated(inst, reach);
                }
                reach == self.all()
            }
            (ProblemKind::MinDominatingSet, Frag::Mask(s)) => {
                self.dominated(inst, s) == self.all() && s.count_ones() as usize == inst.optimum
            }
            (ProblemKind::MinVertexCover, Frag::Mask(s)) => {
                let covered = self
                    .pairs
                    .iter()
                    .enumerate()
                    .all(|(i, &(u, v))| inst.mask >> i & 1 == 0 || s >> u & 1 == 1 || s >> v & 1 == 1);
                covered && s.count_ones() as usize == inst.optimum
            }
            (ProblemKind::DeltaPlusOneColoring, Frag::Colors(c)) => c[..self.t].iter().all(|&x| x != UNCOLORED),
            _ => unreachable!("one space per problem"),
        }
    }

    /// Matched vertices, or `None` if two chosen edges share an endpoint.
    fn matching_vertices(&self, s: u32) -> Option<u32> {
        let mut used = 0u32;
        for (i, &(u, v)) in self.pairs.iter().enumerate() {
            if s >> i & 1 == 1 {
                let both = 1 << u | 1 << v;
                if used & both != 0 {
                    return None;
                }
                used |= both;
            }
        }
        Some(used)
    }

    fn solution(&self, f: Frag) -> Solution {
        match (self.p, f) {
            (ProblemKind::MaximalMatching, Frag::Mask(s)) => Solution::EdgeSet(
                self.pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| s >> i & 1 == 1)
                    .map(|(_, &(u, v))| Edge::new(u + 1, v + 1))
                    .collect(),
            ),
            (_, Frag::Mask(s)) => Solution::VertexSet((0..self.t).filter(|v| s >> v & 1 == 1).map(|v| v + 1).collect()),
            (_, Frag::Colors(c)) => Solution::Coloring(
                c[..self.t]
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x != UNCOLORED)
                    .map(|(v, &x)| (v + 1, if x == CONFLICT { 0 } else { x as usize }))
                    .collect(),
            ),
        }
    }

    fn instance_edges(&self, inst: &Instance) -> Vec<Edge> {
        self.pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| inst.mask >> i & 1 == 1)
            .map(|(_, &(u, v))| Edge::new(u + 1, v + 1))
            .collect()
    }

    fn table(&self, assign: &[Frag], pair_party: BTreeMap<Edge, usize>) -> SilentFragmentTable {
        let mut frag = BTreeMap::new();
        for (i, &(u, v)) in self.pairs.iter().enumerate() {
            let e = Edge::new(u + 1, v + 1);
            frag.insert((e, false), self.solution(assign[1 + i]));
            frag.insert((e, true), self.solution(assign[1 + self.m + i]));
        }
        SilentFragmentTable {
            problem: self.p,
            t: self.t,
            pair_party,
            base: self.solution(assign[0]),
            frag,
        }
    }
}

struct Search<'a> {
    space: &'a Space,
    prune: bool,
    assign: Vec<Frag>,
    /// Union of the assigned fragments feeding each instance.
    partial: Vec<Frag>,
    nodes: u64,
    trace: Option<Vec<TraceEntry>>,
    trace_limit: usize,
}

impl Search<'_> {
    fn dfs(&mut self, var: usize) -> bool {
        let space = self.space;
        if var == space.vars {
            return true;
        }
        let feeds = &space.var_instances[var];
        let mut next = vec![space.empty(); feeds.len()];
        for &value in &space.universe {
            self.nodes += 1;
            let mut failed = None;
            for (slot, &idx) in next.iter_mut().zip(feeds) {
                let inst = &space.instances[idx];
                let merged = Space::merge(self.partial[idx], value);
                *slot = merged;
                let ok = if inst.last_var == var {
                    space.full_ok(inst, merged)
                } else {
                    !self.prune || space.partial_ok(inst, merged)
                };
                if !ok {
                    failed = Some(idx);
                    break;
                }
            }
            if let Some(idx) = failed {
                self.record(value, idx);
                continue;
            }
            let saved: Vec<Frag> = feeds.iter().map(|&idx| self.partial[idx]).collect();
            for (&idx, &merged) in feeds.iter().zip(&next) {
                self.partial[idx] = merged;
            }
            self.assign.push(value);
            if self.dfs(var + 1) {
                return true;
            }
            self.assign.pop();
            for (&idx, &old) in feeds.iter().zip(&saved) {
                self.partial[idx] = old;
            }
        }
        false
    }

    fn record(&mut self, value: Frag, idx: usize) {
        let Some(trace) = self.trace.as_mut() else { return };
        if trace.len() >= self.trace_limit {
            return;
        }
        let space = self.space;
        let assignment = self
            .assign
            .iter()
            .chain(std::iter::once(&value))
            .map(|&f| space.solution(f))
            .collect();
        trace.push(TraceEntry {
            assignment,
            instance: space.instance_edges(&space.instances[idx]),
        });
    }
}
