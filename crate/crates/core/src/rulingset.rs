//! Silent LOCAL algorithms for ruling sets: the domination relation they
//! induce and a constructive proof that none of them is correct.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::Serialize;

use crate::coins::Seed;
use crate::error::{Error, Result};
use crate::graph::{validate_solution, Graph, ProblemKind};

/// Largest player count handled.
pub const MAX_PLAYERS: usize = 8;

/// A silent algorithm on `k` labelled vertices: vertex `v` joins the output
/// iff `select(v, N(v))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalSilentTable {
    k: usize,
    /// `select[v-1][c]`, where `c` packs `N ⊆ [k]∖{v}` into `k−1` bits.
    select: Vec<Vec<bool>>,
}

fn check_players(k: usize) -> Result<()> {
    if k == 0 || k > MAX_PLAYERS {
        return Err(Error::TooLarge {
            what: "players",
            value: k,
            limit: MAX_PLAYERS,
        });
    }
    Ok(())
}

/// Drops bit `v-1` from a neighborhood mask over `[k]`.
fn compress(v: usize, nbhd: u32) -> usize {
    let low = nbhd & ((1 << (v - 1)) - 1);
    let high = nbhd >> v;
    (low | high << (v - 1)) as usize
}

fn expand(v: usize, c: usize) -> u32 {
    let c = c as u32;
    let low = c & ((1 << (v - 1)) - 1);
    let high = c >> (v - 1);
    low | high << v
}

impl LocalSilentTable {
    /// Table with `select(v, N) = f(v, N)`, where `N` is a bitmask over `[k]`
    /// (bit `i−1` for vertex `i`).
    pub fn from_fn(k: usize, mut f: impl FnMut(usize, u32) -> bool) -> Result<Self> {
        check_players(k)?;
        let select = (1..=k)
            .map(|v| (0..1usize << (k - 1)).map(|c| f(v, expand(v, c))).collect())
            .collect();
        Ok(LocalSilentTable { k, select })
    }

    /// Every entry an independent fair coin.
    pub fn random(k: usize, seed: &Seed) -> Result<Self> {
        use rand::Rng;
        let mut rng = seed.rng();
        LocalSilentTable::from_fn(k, |_, _| rng.gen::<bool>())
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn select(&self, v: usize, nbhd: u32) -> bool {
        debug_assert_eq!(nbhd >> (v - 1) & 1, 0, "neighborhood contains its own vertex");
        self.select[v - 1][compress(v, nbhd)]
    }

    /// The vertices that select themselves on `g`.
    pub fn run(&self, g: &Graph) -> Result<BTreeSet<usize>> {
        if g.n() != self.k {
            return Err(Error::VertexCountMismatch {
                graph: g.n(),
                partition: self.k,
            });
        }
        Ok((1..=self.k)
            .filter(|&v| self.select(v, g.neighbors(v).fold(0, |m, u| m | 1 << (u - 1))))
            .collect())
    }

    /// Neighborhoods of `v` containing `q`, in increasing mask order.
    fn neighborhoods_with(&self, v: usize, q: usize) -> impl Iterator<Item = u32> + '_ {
        (0..1usize << (self.k - 1))
            .map(move |c| expand(v, c))
            .filter(move |n| n >> (q - 1) & 1 == 1)
    }
}

/// Table file: `k`, then one line `v mask bit` per vertex and neighborhood.
pub fn write_table(tbl: &LocalSilentTable) -> String {
    let mut out = format!("{}\n", tbl.k);
    for v in 1..=tbl.k {
        for (c, &bit) in tbl.select[v - 1].iter().enumerate() {
            writeln!(out, "{v} {} {}", expand(v, c), u8::from(bit)).expect("writing to a String");
        }
    }
    out
}

pub fn parse_table(text: &str) -> Result<LocalSilentTable> {
    let err = |line: usize, message: String| Error::Parse { line, message };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (line, first) = lines.next().ok_or_else(|| err(1, "missing player count".into()))?;
    let k: usize = first
        .parse()
        .map_err(|_| err(line, format!("bad player count '{first}'")))?;
    check_players(k).map_err(|e| err(line, e.to_string()))?;
    let mut seen: Vec<Vec<Option<bool>>> = vec![vec![None; 1 << (k - 1)]; k];
    for (line, text) in lines {
        let fields: Vec<&str> = text.split_whitespace().collect();
        let [v, mask, bit] = fields[..] else {
            return Err(err(line, format!("expected 'v mask bit', got '{text}'")));
        };
        let v: usize = v.parse().map_err(|_| err(line, format!("bad vertex '{v}'")))?;
        let mask: u32 = mask.parse().map_err(|_| err(line, format!("bad mask '{mask}'")))?;
        let bit = match bit {
            "0" => false,
            "1" => true,
            other => return Err(err(line, format!("bad bit '{other}'"))),
        };
        if v == 0 || v > k {
            return Err(err(line, format!("vertex {v} out of range 1..={k}")));
        }
        if mask >> k != 0 || mask >> (v - 1) & 1 == 1 {
            return Err(err(line, format!("mask {mask} is not a neighborhood of {v}")));
        }
        let slot = &mut seen[v - 1][compress(v, mask)];
        if slot.replace(bit).is_some() {
            return Err(err(line, format!("duplicate entry for vertex {v}, mask {mask}")));
        }
    }
    let last = text.lines().count();
    let select = seen
        .into_iter()
        .enumerate()
        .map(|(i, row)| {
            row.into_iter()
                .enumerate()
                .map(|(c, b)| b.ok_or_else(|| err(last, format!("missing entry for vertex {}, mask {}", i + 1, expand(i + 1, c)))))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LocalSilentTable { k, select })
}

/// `dominates[q][p]` (1-based) holds iff `p <_A q`: `p` never selects itself
/// while adjacent to `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DominationRelation {
    k: usize,
    dominates: Vec<Vec<bool>>,
}

impl DominationRelation {
    /// Relation from its `(p, q)` pairs meaning `p <_A q`.
    pub fn from_pairs(k: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut dominates = vec![vec![false; k + 1]; k + 1];
        for (p, q) in pairs {
            if p == 0 || q == 0 || p > k || q > k || p == q {
                return Err(Error::InvalidParameter(format!("bad pair ({p}, {q})")));
            }
            dominates[q][p] = true;
        }
        Ok(DominationRelation { k, dominates })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `p <_A q`.
    pub fn less(&self, p: usize, q: usize) -> bool {
        self.dominates[q][p]
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (1..=self.k).flat_map(move |p| (1..=self.k).filter(move |&q| self.less(p, q)).map(move |q| (p, q)))
    }
}

pub fn domination_relation(tbl: &LocalSilentTable) -> DominationRelation {
    let k = tbl.k;
    // dominates[q][p]: p never selects itself next to q
    let dominates = (0..=k)
        .map(|q| {
            (0..=k)
                .map(|p| p != q && p * q != 0 && tbl.neighborhoods_with(p, q).all(|n| !tbl.select(p, n)))
                .collect()
        })
        .collect();
    DominationRelation { k, dominates }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum OrderCheck {
    /// Least element first: `order[0] <_A order[1] <_A …`.
    TotalOrder { order: Vec<usize> },
    /// Neither `p <_A q` nor `q <_A p`.
    SemiconnexViolation { p: usize, q: usize },
    /// Both `p <_A q` and `q <_A p`.
    AsymmetryViolation { p: usize, q: usize },
    /// `p <_A q <_A r <_A p`.
    TransitivityViolation { p: usize, q: usize, r: usize },
}

/// Checks that `<_A` is a strict total order. Semiconnexity is checked over
/// all pairs first, then asymmetry, then transitivity, each in lexicographic
/// order.
pub fn check_total_order(rel: &DominationRelation) -> OrderCheck {
    let k = rel.k;
    let pairs = || (1..=k).flat_map(move |p| (p + 1..=k).map(move |q| (p, q)));
    if let Some((p, q)) = pairs().find(|&(p, q)| !rel.less(p, q) && !rel.less(q, p)) {
        return OrderCheck::SemiconnexViolation { p, q };
    }
    if let Some((p, q)) = pairs().find(|&(p, q)| rel.less(p, q) && rel.less(q, p)) {
        return OrderCheck::AsymmetryViolation { p, q };
    }
    for p in 1..=k {
        for q in (1..=k).filter(|&q| rel.less(p, q)) {
            for r in (1..=k).filter(|&r| r != p && rel.less(q, r)) {
                if !rel.less(p, r) {
                    return OrderCheck::TransitivityViolation { p, q, r };
                }
            }
        }
    }
    // a strict total order: rank by how many elements lie above
    let mut order: Vec<usize> = (1..=k).collect();
    order.sort_by_key(|&p| std::cmp::Reverse((1..=k).filter(|&q| rel.less(p, q)).count()));
    OrderCheck::TotalOrder { order }
}

/// A graph on `k = t + 2` vertices on which `tbl` does not output a
/// `t`-ruling set.
pub fn find_counterexample(tbl: &LocalSilentTable, t: usize) -> Result<Graph> {
    if t < 1 || tbl.k != t + 2 {
        return Err(Error::InvalidParameter(format!(
            "need k = t + 2, got k = {} and t = {t}",
            tbl.k
        )));
    }
    let rel = domination_relation(tbl);
    let g = match check_total_order(&rel) {
        OrderCheck::SemiconnexViolation { p, q } => {
            // p selects itself next to q for some N1, and q next to p for some N2
            let n1 = tbl
                .neighborhoods_with(p, q)
                .find(|&n| tbl.select(p, n))
                .expect("p is not dominated by q");
            let n2 = tbl
                .neighborhoods_with(q, p)
                .find(|&n| tbl.select(q, n))
                .expect("q is not dominated by p");
            let mut edges = BTreeSet::new();
            for (v, n) in [(p, n1), (q, n2)] {
                for u in (1..=tbl.k).filter(|&u| n >> (u - 1) & 1 == 1) {
                    edges.insert((v.min(u), v.max(u)));
                }
            }
            Graph::new(tbl.k, edges)?
        }
        OrderCheck::AsymmetryViolation { p, q } => Graph::new(tbl.k, [(p, q)])?,
        OrderCheck::TransitivityViolation { p, q, r } => Graph::new(tbl.k, [(p, q), (q, r), (p, r)])?,
        OrderCheck::TotalOrder { order } => Graph::new(tbl.k, order.windows(2).map(|w| (w[0], w[1])))?,
    };
    Ok(g)
}

/// True iff the table's output on `g` is not a `t`-ruling set.
pub fn refutes(tbl: &LocalSilentTable, g: &Graph, t: usize) -> Result<bool> {
    let out = crate::graph::Solution::VertexSet(tbl.run(g)?);
    Ok(!validate_solution(ProblemKind::TRulingSet(t), g, &out)?.is_valid())
}
