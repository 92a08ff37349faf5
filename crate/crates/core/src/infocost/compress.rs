use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use crate::blackboard::{BitString, Blackboard, PartyView, Protocol, PublicInfo};
use crate::coins::{Coins, DrawKey};
use crate::error::{Error, Result};
use crate::graph::{ProblemKind, Solution};

use super::table::{BoardTurns, InputDistribution, ProtocolTable};

struct PublicCell {
    values: Rc<BTreeMap<DrawKey, usize>>,
    weight: f64,
    boards: Vec<(BoardTurns, f64)>,
}

/// A protocol that writes nothing: it samples `Q`'s public coins and then a
/// board from `p(Π | R, Z)`, both from public coins, and has every party
/// produce the output `Q` would on that board.
pub struct SilentCompression<'q, Q: Protocol> {
    q: &'q Q,
    n: usize,
    k: usize,
    partitions: HashMap<Vec<usize>, usize>,
    cells: Vec<Vec<PublicCell>>,
}

/// Builds the silent protocol for `q` from its enumeration over a single
/// gadget.
pub fn compress_to_silent<'q, Q: Protocol>(tbl: &ProtocolTable, q: &'q Q) -> Result<SilentCompression<'q, Q>> {
    if !matches!(tbl.distribution, InputDistribution::Gadget { .. }) {
        return Err(Error::InvalidParameter("compression needs a single-gadget table".into()));
    }
    if tbl.problem != q.problem() {
        return Err(Error::VariantMismatch(format!("table is for {}, protocol for {}", tbl.problem, q.problem())));
    }
    tbl.check_public_coins()?;
    let marginals = tbl.marginals();
    let mut cells: Vec<Vec<PublicCell>> = (0..tbl.partitions.len()).map(|_| Vec::new()).collect();
    for (&(z, r), boards) in &marginals.zr {
        let weight: f64 = boards.values().sum();
        cells[z].push(PublicCell {
            values: Rc::new(tbl.publics[r].iter().cloned().collect()),
            weight,
            boards: boards.iter().map(|(&b, &w)| (tbl.boards[b].clone(), w)).collect(),
        });
    }
    let partitions = tbl
        .partitions
        .iter()
        .enumerate()
        .map(|(i, z)| (z.parties().to_vec(), i))
        .collect();
    Ok(SilentCompression {
        q,
        n: tbl.distribution.n(),
        k: tbl.k,
        partitions,
        cells,
    })
}

pub struct CompressedShared<S> {
    info: PublicInfo,
    board: Blackboard,
    inner: S,
}

impl<Q: Protocol> Protocol for SilentCompression<'_, Q> {
    type Shared = CompressedShared<Q::Shared>;

    fn name(&self) -> &str {
        "silent-compression"
    }

    fn problem(&self) -> ProblemKind {
        self.q.problem()
    }

    fn knows_partition(&self) -> bool {
        true
    }

    fn parties(&self) -> Option<usize> {
        Some(self.k)
    }

    fn init(&self, info: &PublicInfo) -> Result<Self::Shared> {
        let z = info.partition.as_ref().ok_or(Error::PartitionHidden(0))?;
        let &zi = self
            .partitions
            .get(z.parties())
            .filter(|_| z.n() == self.n)
            .ok_or_else(|| Error::InvalidParameter("partition outside the enumerated support".into()))?;
        let cells = &self.cells[zi];
        let weights: Vec<f64> = cells.iter().map(|c| c.weight).collect();
        let cell = &cells[info.coins.derive("even").stream().weighted(&weights)];
        let weights: Vec<f64> = cell.boards.iter().map(|(_, w)| *w).collect();
        let (turns, _) = &cell.boards[info.coins.derive("odd").stream().weighted(&weights)];

        let q_info = PublicInfo {
            n: self.n,
            k: self.k,
            partition: self.q.knows_partition().then(|| Rc::clone(z)),
            coins: Coins::pinned("public", Rc::clone(&cell.values), info.coins.derive("unpinned")),
        };
        let mut inner = self.q.init(&q_info)?;
        let mut board = Blackboard::new(self.k);
        for (party, payloads) in turns {
            board.push_turn(*party, payloads.clone());
            self.q.observe(&mut inner, &q_info, &board)?;
        }
        Ok(CompressedShared {
            info: q_info,
            board,
            inner,
        })
    }

    fn observe(&self, _: &mut Self::Shared, _: &PublicInfo, _: &Blackboard) -> Result<()> {
        Ok(())
    }

    fn next_writer(&self, _: &Self::Shared, _: &Blackboard) -> Option<usize> {
        None
    }

    fn take_turn(&self, _: &Self::Shared, _: &PartyView, _: &Blackboard) -> Result<Vec<BitString>> {
        Ok(vec![])
    }

    fn output(&self, s: &Self::Shared, view: &PartyView, _: &Blackboard) -> Result<Solution> {
        let q_view = PartyView::new(
            view.id,
            self.n,
            self.k,
            view.local_edges.clone(),
            s.info.partition.clone(),
            s.info.coins.clone(),
            view.private.clone(),
        );
        self.q.output(&s.inner, &q_view, &s.board)
    }
}
