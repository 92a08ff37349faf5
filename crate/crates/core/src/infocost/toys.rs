//! Tiny matching protocols with known information cost, used to exercise
//! the enumeration machinery.

use std::collections::BTreeSet;
use std::str::FromStr;

use crate::blackboard::{BitString, Blackboard, PartyView, Protocol, PublicInfo};
use crate::error::{Error, Result};
use crate::graph::{ProblemKind, Solution};

fn edge_set(edges: impl IntoIterator<Item = crate::graph::Edge>) -> Solution {
    Solution::EdgeSet(edges.into_iter().collect())
}

fn in_order(k: usize, board: &Blackboard) -> Option<usize> {
    let t = board.turns_completed();
    (t < k).then_some(t + 1)
}

/// Writes nothing and outputs the empty matching.
#[derive(Clone, Copy, Debug, Default)]
pub struct SilentEmpty;

impl Protocol for SilentEmpty {
    type Shared = ();

    fn name(&self) -> &str {
        "silent-empty"
    }

    fn problem(&self) -> ProblemKind {
        ProblemKind::MaximalMatching
    }

    fn init(&self, _: &PublicInfo) -> Result<()> {
        Ok(())
    }

    fn observe(&self, _: &mut (), _: &PublicInfo, _: &Blackboard) -> Result<()> {
        Ok(())
    }

    fn next_writer(&self, _: &(), _: &Blackboard) -> Option<usize> {
        None
    }

    fn take_turn(&self, _: &(), _: &PartyView, _: &Blackboard) -> Result<Vec<BitString>> {
        Ok(vec![])
    }

    fn output(&self, _: &(), _: &PartyView, _: &Blackboard) -> Result<Solution> {
        Ok(ProblemKind::MaximalMatching.empty_solution())
    }
}

/// Every party writes one bit per pair it holds, saying whether that pair
/// is an edge. Party 1 outputs every pair announced as present.
#[derive(Clone, Copy, Debug, Default)]
pub struct EdgeBit;

impl Protocol for EdgeBit {
    type Shared = usize;

    fn name(&self) -> &str {
        "edge-bit"
    }

    fn problem(&self) -> ProblemKind {
        ProblemKind::MaximalMatching
    }

    fn knows_partition(&self) -> bool {
        true
    }

    fn init(&self, info: &PublicInfo) -> Result<usize> {
        Ok(info.k)
    }

    fn observe(&self, _: &mut usize, _: &PublicInfo, _: &Blackboard) -> Result<()> {
        Ok(())
    }

    fn next_writer(&self, k: &usize, board: &Blackboard) -> Option<usize> {
        in_order(*k, board)
    }

    fn take_turn(&self, _: &usize, view: &PartyView, _: &Blackboard) -> Result<Vec<BitString>> {
        let z = view.partition()?;
        Ok(z.pairs_of(view.id)
            .map(|e| BitString::from_iter([view.local_edges.contains(&e)]))
            .collect())
    }

    fn output(&self, _: &usize, view: &PartyView, board: &Blackboard) -> Result<Solution> {
        if view.id != 1 {
            return Ok(ProblemKind::MaximalMatching.empty_solution());
        }
        let z = view.partition()?;
        let mut present = BTreeSet::new();
        for (i, turn) in board.turns().iter().enumerate() {
            let records = board.turn_records(i);
            for (e, r) in z.pairs_of(turn.party).zip(records) {
                if r.payload.bits().first() == Some(&true) {
                    present.insert(e);
                }
            }
        }
        Ok(edge_set(present))
    }
}

/// Party 1 writes a single 0 bit; each party outputs its own edges.
#[derive(Clone, Copy, Debug, Default)]
pub struct ConstantBit;

impl Protocol for ConstantBit {
    type Shared = ();

    fn name(&self) -> &str {
        "constant-bit"
    }

    fn problem(&self) -> ProblemKind {
        ProblemKind::MaximalMatching
    }

    fn init(&self, _: &PublicInfo) -> Result<()> {
        Ok(())
    }

    fn observe(&self, _: &mut (), _: &PublicInfo, _: &Blackboard) -> Result<()> {
        Ok(())
    }

    fn next_writer(&self, _: &(), board: &Blackboard) -> Option<usize> {
        in_order(1, board)
    }

    fn take_turn(&self, _: &(), _: &PartyView, _: &Blackboard) -> Result<Vec<BitString>> {
        Ok(vec![BitString::from_iter([false])])
    }

    fn output(&self, _: &(), view: &PartyView, _: &Blackboard) -> Result<Solution> {
        Ok(edge_set(view.local_edges.iter().copied()))
    }
}

/// Each party outputs its own edges but drops them with probability ½, and
/// with probability 1/4096 writes one bit saying whether it holds an edge.
#[derive(Clone, Copy, Debug, Default)]
pub struct LeakyMatching;

impl LeakyMatching {
    fn leaks(view: &PartyView) -> bool {
        view.private.derive("leak").stream().weighted(&[1.0, 4095.0]) == 0
    }
}

impl Protocol for LeakyMatching {
    type Shared = usize;

    fn name(&self) -> &str {
        "leaky-matching"
    }

    fn problem(&self) -> ProblemKind {
        ProblemKind::MaximalMatching
    }

    fn init(&self, info: &PublicInfo) -> Result<usize> {
        Ok(info.k)
    }

    fn observe(&self, _: &mut usize, _: &PublicInfo, _: &Blackboard) -> Result<()> {
        Ok(())
    }

    fn next_writer(&self, k: &usize, board: &Blackboard) -> Option<usize> {
        in_order(*k, board)
    }

    fn take_turn(&self, _: &usize, view: &PartyView, _: &Blackboard) -> Result<Vec<BitString>> {
        if !LeakyMatching::leaks(view) {
            return Ok(vec![]);
        }
        Ok(vec![BitString::from_iter([!view.local_edges.is_empty()])])
    }

    fn output(&self, _: &usize, view: &PartyView, _: &Blackboard) -> Result<Solution> {
        if view.private.derive("drop").stream().coin() {
            return Ok(ProblemKind::MaximalMatching.empty_solution());
        }
        Ok(edge_set(view.local_edges.iter().copied()))
    }
}

/// Names accepted by [`ToyProtocol::from_str`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ToyProtocol {
    SilentEmpty,
    EdgeBit,
    ConstantBit,
    LeakyMatching,
}

impl ToyProtocol {
    pub const NAMES: [&'static str; 4] = ["silent-empty", "edge-bit", "constant-bit", "leaky-matching"];
}

impl FromStr for ToyProtocol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "silent-empty" => Ok(ToyProtocol::SilentEmpty),
            "edge-bit" => Ok(ToyProtocol::EdgeBit),
            "constant-bit" => Ok(ToyProtocol::ConstantBit),
            "leaky-matching" => Ok(ToyProtocol::LeakyMatching),
            other => Err(Error::InvalidParameter(format!("unknown toy protocol '{other}'"))),
        }
    }
}
