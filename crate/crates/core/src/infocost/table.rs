use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::dist::entropy_of;
use crate::blackboard::{execute, BitString, Protocol, RunCoins, DEFAULT_STEP_BUDGET};
use crate::coins::{enumerate_paths, Coins, DrawKey};
use crate::error::{Error, Result};
use crate::graph::{all_pairs, pair_count, validate_solution, Edge, Graph, PartitionFunction, ProblemKind};

/// Upper bound on rows of an enumerated table.
pub const MAX_ROWS: usize = 1_000_000;

const COIN_TOLERANCE: f64 = 1e-9;

/// A board as `(writer, payloads)` per turn.
pub type BoardTurns = Vec<(usize, Vec<BitString>)>;

/// Input distributions small enough to enumerate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InputDistribution {
    /// Uniform over all graphs on `t` vertices.
    Gadget { t: usize },
    /// `n / t` independent uniform gadgets on consecutive blocks, no edges
    /// between blocks.
    MultiGadget { n: usize, t: usize },
}

impl InputDistribution {
    pub fn n(&self) -> usize {
        match *self {
            InputDistribution::Gadget { t } => t,
            InputDistribution::MultiGadget { n, .. } => n,
        }
    }

    /// Pairs that may carry an edge.
    pub fn free_pairs(&self) -> Result<Vec<Edge>> {
        match *self {
            InputDistribution::Gadget { t } => Ok(all_pairs(t).collect()),
            InputDistribution::MultiGadget { n, t } => {
                if t == 0 || n % t != 0 {
                    return Err(Error::Indivisible { n, t });
                }
                Ok((0..n / t)
                    .flat_map(|b| all_pairs(t).map(move |e| Edge::new(e.u() + b * t, e.v() + b * t)))
                    .collect())
            }
        }
    }

    /// Every input graph with its probability, in mask order.
    pub fn support(&self) -> Result<Vec<(Graph, f64)>> {
        let pairs = self.free_pairs()?;
        if pairs.len() > 20 {
            return Err(Error::TooLarge {
                what: "free pairs of the input distribution",
                value: pairs.len(),
                limit: 20,
            });
        }
        let p = 0.5f64.powi(pairs.len() as i32);
        (0u64..1 << pairs.len())
            .map(|mask| {
                let edges = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e);
                Ok((Graph::from_edges(self.n(), edges)?, p))
            })
            .collect()
    }
}

/// Every partition of the pairs of `[n]` among `k` parties, in
/// lexicographic order of the party vector.
pub fn all_partitions(n: usize, k: usize) -> Result<Vec<PartitionFunction>> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let m = pair_count(n);
    let count = (k as f64).powi(m as i32);
    if count > MAX_ROWS as f64 {
        return Err(Error::TooLarge {
            what: "partition support",
            value: count.min(usize::MAX as f64) as usize,
            limit: MAX_ROWS,
        });
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut digits = vec![1usize; m];
    loop {
        out.push(PartitionFunction::new(n, k, digits.clone())?);
        let Some(i) = digits.iter().rposition(|&d| d < k) else { break };
        digits[i] += 1;
        for d in &mut digits[i + 1..] {
            *d = 1;
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableRow {
    pub input: usize,
    pub partition: usize,
    /// Index into the table's public-coin values.
    pub public: usize,
    /// Index into the table's boards.
    pub board: usize,
    /// Joint probability of input, partition and all coin values.
    pub probability: f64,
    pub framed_bits: usize,
    pub valid: bool,
}

/// A protocol run on every input, every partition and every coin outcome.
#[derive(Clone, Debug)]
pub struct ProtocolTable {
    pub problem: ProblemKind,
    pub distribution: InputDistribution,
    pub k: usize,
    pub inputs: Vec<(Graph, f64)>,
    pub partitions: Vec<PartitionFunction>,
    /// Values of the public draws, sorted by draw key.
    pub publics: Vec<Vec<(DrawKey, usize)>>,
    pub boards: Vec<BoardTurns>,
    pub rows: Vec<TableRow>,
}

fn is_public(label: &str) -> bool {
    label == "public" || label.starts_with("public/")
}

/// Runs `p` under every input of `dist`, every partition among `k` parties
/// and every outcome of its public (`public…`) and private (`private…`)
/// draws.
pub fn enumerate_protocol<P: Protocol + ?Sized>(p: &P, dist: InputDistribution, k: usize) -> Result<ProtocolTable> {
    let inputs = dist.support()?;
    let partitions = all_partitions(dist.n(), k)?;
    let cells = inputs.len() * partitions.len();
    if cells > MAX_ROWS {
        return Err(Error::TooLarge {
            what: "protocol table rows",
            value: cells,
            limit: MAX_ROWS,
        });
    }
    let pz = 1.0 / partitions.len() as f64;
    let mut publics = Vec::new();
    let mut public_ids: HashMap<Vec<(DrawKey, usize)>, usize> = HashMap::new();
    let mut boards = Vec::new();
    let mut board_ids: HashMap<BoardTurns, usize> = HashMap::new();
    let mut rows = Vec::new();
    for (gi, (g, pg)) in inputs.iter().enumerate() {
        for (zi, z) in partitions.iter().enumerate() {
            let budget = MAX_ROWS - rows.len();
            let paths = enumerate_paths(budget, |tape| {
                let coins = RunCoins {
                    public: Coins::on_tape(tape, "public"),
                    private_master: Coins::on_tape(tape, "private"),
                };
                execute(p, g, z, &coins, DEFAULT_STEP_BUDGET)
            })
            .map_err(|e| match e {
                Error::TooLarge { value, .. } => Error::TooLarge {
                    what: "protocol table rows",
                    value: rows.len() + value,
                    limit: MAX_ROWS,
                },
                other => other,
            })?;
            for path in paths {
                let mut r: Vec<(DrawKey, usize)> =
                    path.draws.into_iter().filter(|(key, _)| is_public(&key.0)).collect();
                r.sort();
                let next = publics.len();
                let public = *public_ids.entry(r.clone()).or_insert(next);
                if public == next {
                    publics.push(r);
                }
                let exec = path.value;
                let turns = exec.board.turn_messages();
                let next = boards.len();
                let board = *board_ids.entry(turns.clone()).or_insert(next);
                if board == next {
                    boards.push(turns);
                }
                rows.push(TableRow {
                    input: gi,
                    partition: zi,
                    public,
                    board,
                    probability: pg * pz * path.probability,
                    framed_bits: exec.board.transcript().total_framed_bits(),
                    valid: validate_solution(p.problem(), g, &exec.combined_output)?.is_valid(),
                });
            }
        }
    }
    Ok(ProtocolTable {
        problem: p.problem(),
        distribution: dist,
        k,
        inputs,
        partitions,
        publics,
        boards,
        rows,
    })
}

type Cell = (usize, usize);

/// Marginal weights the information quantities are built from.
pub(crate) struct Marginals {
    /// (z, r) → π → weight
    pub zr: BTreeMap<Cell, BTreeMap<usize, f64>>,
    /// (e, z, r) → π → weight
    pub ezr: BTreeMap<(usize, usize, usize), BTreeMap<usize, f64>>,
}

impl ProtocolTable {
    pub(crate) fn marginals(&self) -> Marginals {
        let mut zr: BTreeMap<Cell, BTreeMap<usize, f64>> = BTreeMap::new();
        let mut ezr: BTreeMap<(usize, usize, usize), BTreeMap<usize, f64>> = BTreeMap::new();
        for row in &self.rows {
            *zr.entry((row.partition, row.public)).or_default().entry(row.board).or_default() += row.probability;
            *ezr.entry((row.input, row.partition, row.public))
                .or_default()
                .entry(row.board)
                .or_default() += row.probability;
        }
        Marginals { zr, ezr }
    }

    /// Fails with `InputDependentPublicCoins` unless `P(r | e, z)` is the
    /// same for every input `e`.
    pub fn check_public_coins(&self) -> Result<()> {
        let mut by_ez: BTreeMap<Cell, BTreeMap<usize, f64>> = BTreeMap::new();
        let mut by_z: BTreeMap<usize, BTreeMap<usize, f64>> = BTreeMap::new();
        for row in &self.rows {
            *by_ez.entry((row.input, row.partition)).or_default().entry(row.public).or_default() += row.probability;
            *by_z.entry(row.partition).or_default().entry(row.public).or_default() += row.probability;
        }
        for ((_, z), rs) in &by_ez {
            let total_ez: f64 = rs.values().sum();
            let of_z = &by_z[z];
            let total_z: f64 = of_z.values().sum();
            for (r, w) in of_z {
                let given_e = rs.get(r).copied().unwrap_or(0.0) / total_ez;
                if (given_e - w / total_z).abs() > COIN_TOLERANCE {
                    return Err(Error::InputDependentPublicCoins);
                }
            }
        }
        Ok(())
    }

    /// `I[E : Π | Z, R]` in bits.
    pub fn information_cost(&self) -> Result<f64> {
        self.check_public_coins()?;
        let m = self.marginals();
        let h = |cells: &BTreeMap<usize, f64>| {
            let w: f64 = cells.values().sum();
            w * entropy_of(cells.values().copied())
        };
        let h_zr = m.zr.values().map(h).fold(0.0, |a, x| a + x);
        let h_ezr = m.ezr.values().map(h).fold(0.0, |a, x| a + x);
        Ok(h_zr - h_ezr)
    }

    /// `E[δ_TV(p(Π | E, Z, R), p(Π | Z, R))]`.
    pub fn expected_tv(&self) -> Result<f64> {
        self.check_public_coins()?;
        let m = self.marginals();
        let mut total = 0.0;
        for (&(_, z, r), given_e) in &m.ezr {
            let w_e: f64 = given_e.values().sum();
            let mix = &m.zr[&(z, r)];
            let w_mix: f64 = mix.values().sum();
            let tv: f64 = mix
                .iter()
                .map(|(b, &w)| (given_e.get(b).copied().unwrap_or(0.0) / w_e - w / w_mix).abs())
                .sum::<f64>()
                / 2.0;
            total += w_e * tv;
        }
        Ok(total)
    }

    /// Probability that the combined output is not a valid solution.
    pub fn error(&self) -> f64 {
        self.rows.iter().filter(|r| !r.valid).fold(0.0, |a, r| a + r.probability)
    }

    /// Largest framed transcript size over rows of positive probability.
    pub fn max_transcript_bits(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| r.probability > 0.0)
            .map(|r| r.framed_bits)
            .max()
            .unwrap_or(0)
    }

    pub fn total_probability(&self) -> f64 {
        self.rows.iter().fold(0.0, |a, r| a + r.probability)
    }
}

/// `I[E : Π | Z, R]` of an enumerated protocol, in bits.
pub fn exact_information_cost(tbl: &ProtocolTable) -> Result<f64> {
    tbl.information_cost()
}

/// Exact failure probability of an enumerated protocol.
pub fn exact_error(tbl: &ProtocolTable) -> f64 {
    tbl.error()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocols::GreedyMatching;

    #[test]
    fn partitions_are_exhaustive() {
        let zs = all_partitions(3, 2).unwrap();
        assert_eq!(zs.len(), 8);
        assert_eq!(zs[0].parties(), &[1, 1, 1]);
        assert_eq!(zs[7].parties(), &[2, 2, 2]);
        assert_eq!(all_partitions(4, 4).unwrap().len(), 4096);
        assert!(all_partitions(6, 4).is_err());
    }

    #[test]
    fn supports() {
        let lambda = InputDistribution::Gadget { t: 3 }.support().unwrap();
        assert_eq!(lambda.len(), 8);
        let mu = InputDistribution::MultiGadget { n: 6, t: 3 }.support().unwrap();
        assert_eq!(mu.len(), 64);
        assert!(mu.iter().all(|(g, _)| g.edges().all(|e| (e.u() - 1) / 3 == (e.v() - 1) / 3)));
        let total: f64 = mu.iter().map(|(_, p)| p).sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!(InputDistribution::MultiGadget { n: 5, t: 2 }.support().is_err());
    }

    #[test]
    fn greedy_matching_reveals_the_edge() {
        for k in 1..=4 {
            let tbl = enumerate_protocol(&GreedyMatching, InputDistribution::Gadget { t: 2 }, k).unwrap();
            assert!((tbl.total_probability() - 1.0).abs() < 1e-12);
            assert!((exact_information_cost(&tbl).unwrap() - 1.0).abs() < 1e-12);
            assert_eq!(exact_error(&tbl), 0.0);
        }
    }

    #[test]
    fn row_guard() {
        assert!(matches!(
            enumerate_protocol(&GreedyMatching, InputDistribution::Gadget { t: 5 }, 4),
            Err(Error::TooLarge { .. })
        ));
    }
}
