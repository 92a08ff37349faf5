//! Upper-bound protocols for matching, MIS and (Δ+1)-coloring, with
//! sequential reference oracles.

mod matching;
mod mis;
mod palette;

pub use matching::{greedy_matching_protocol, GreedyMatching};
pub use mis::{
    mis_phase_plan, random_order_greedy_mis_protocol, sequential_greedy_mis_oracle, MisPhasePlan,
    RandomOrderGreedyMis,
};
pub use palette::{
    list_color_exact, palette_coloring_protocol, PaletteAssignment, PaletteColoring, ProbeOutcome,
    LIST_COLOR_LIMIT,
};

use std::str::FromStr;

use crate::blackboard::{run_protocol_with_budget, BitReader, BitString, RunRecord};
use crate::coins::Seed;
use crate::error::{Error, Result};
use crate::graph::{vertex_bits, Edge, Graph, PartitionFunction, ProblemKind};

/// The built-in protocols, selectable by name.
#[derive(Clone, Debug, PartialEq)]
pub enum Builtin {
    GreedyMatching,
    RogMis,
    PaletteColoring(f64),
}

impl Builtin {
    pub const NAMES: [&'static str; 3] = ["greedy-matching", "rog-mis", "palette-coloring"];

    pub fn name(&self) -> &'static str {
        match self {
            Builtin::GreedyMatching => "greedy-matching",
            Builtin::RogMis => "rog-mis",
            Builtin::PaletteColoring(_) => "palette-coloring",
        }
    }

    pub fn problem(&self) -> ProblemKind {
        match self {
            Builtin::GreedyMatching => ProblemKind::MaximalMatching,
            Builtin::RogMis => ProblemKind::MaximalIndependentSet,
            Builtin::PaletteColoring(_) => ProblemKind::DeltaPlusOneColoring,
        }
    }

    pub fn run(
        &self,
        g: &Graph,
        z: &PartitionFunction,
        public: &Seed,
        private_master: &Seed,
        step_budget: u64,
    ) -> Result<RunRecord> {
        match self {
            Builtin::GreedyMatching => run_protocol_with_budget(&GreedyMatching, g, z, public, private_master, step_budget),
            Builtin::RogMis => run_protocol_with_budget(&RandomOrderGreedyMis, g, z, public, private_master, step_budget),
            Builtin::PaletteColoring(c) => {
                let p = palette_coloring_protocol(*c)?;
                run_protocol_with_budget(&p, g, z, public, private_master, step_budget)
            }
        }
    }
}

impl FromStr for Builtin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "greedy-matching" => Ok(Builtin::GreedyMatching),
            "rog-mis" => Ok(Builtin::RogMis),
            "palette-coloring" => Ok(Builtin::PaletteColoring(palette::DEFAULT_COEFFICIENT)),
            other => Err(Error::InvalidParameter(format!(
                "unknown protocol '{other}' (expected one of {})",
                Builtin::NAMES.join(", ")
            ))),
        }
    }
}

pub(crate) fn vertex_message(v: usize, n: usize) -> BitString {
    let mut b = BitString::new();
    b.push_uint(v as u64 - 1, vertex_bits(n));
    b
}

pub(crate) fn edge_message(e: Edge, n: usize) -> BitString {
    let w = vertex_bits(n);
    let mut b = BitString::new();
    b.push_uint(e.u() as u64 - 1, w);
    b.push_uint(e.v() as u64 - 1, w);
    b
}

fn read_vertex(r: &mut BitReader<'_>, n: usize) -> Result<usize> {
    let v = r
        .read_uint(vertex_bits(n))
        .ok_or_else(|| Error::MalformedTranscript("truncated vertex id".into()))? as usize
        + 1;
    if v > n {
        return Err(Error::MalformedTranscript(format!("vertex {v} out of range")));
    }
    Ok(v)
}

pub(crate) fn parse_vertex(b: &BitString, n: usize) -> Result<usize> {
    read_vertex(&mut b.reader(), n)
}

pub(crate) fn parse_edge(b: &BitString, n: usize) -> Result<Edge> {
    let mut r = b.reader();
    let u = read_vertex(&mut r, n)?;
    let v = read_vertex(&mut r, n)?;
    if u == v {
        return Err(Error::MalformedTranscript("edge record is a loop".into()));
    }
    Ok(Edge::new(u, v))
}

/// `⌈x⌉`, except that values within relative `1e-9` of an integer snap to it.
pub(crate) fn snapped_ceil(x: f64) -> usize {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * r.abs().max(1.0) {
        r.max(0.0) as usize
    } else {
        x.ceil().max(0.0) as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_messages_round_trip() {
        for n in 2..20 {
            for e in crate::graph::all_pairs(n) {
                let m = edge_message(e, n);
                assert_eq!(m.len(), 2 * vertex_bits(n));
                assert_eq!(parse_edge(&m, n).unwrap(), e);
            }
        }
    }

    #[test]
    fn names_round_trip() {
        for name in Builtin::NAMES {
            assert_eq!(name.parse::<Builtin>().unwrap().name(), name);
        }
        assert!("bogus".parse::<Builtin>().is_err());
    }
}
