//! Exact information quantities for protocols on tiny inputs: entropy, KL,
//! total variation, information cost by full enumeration, the single-gadget
//! embedding and compression to a silent protocol.

mod compress;
mod dist;
mod embed;
mod table;
pub mod toys;

pub use compress::{compress_to_silent, CompressedShared, SilentCompression};
pub use dist::{entropy, kl_divergence, pinsker_check, tv_distance, FiniteDistribution, PinskerCheck};
pub use embed::{embed_single_gadget, EmbeddedShared, GadgetEmbedding};
pub use table::{
    all_partitions, enumerate_protocol, exact_error, exact_information_cost, BoardTurns, InputDistribution,
    ProtocolTable, TableRow, MAX_ROWS,
};

use serde::Serialize;

use crate::blackboard::Protocol;
use crate::error::{Error, Result};
use crate::protocols::{palette_coloring_protocol, Builtin, GreedyMatching, RandomOrderGreedyMis};
use toys::{ConstantBit, EdgeBit, LeakyMatching, SilentEmpty, ToyProtocol};

/// Absolute slack on probabilities and bit counts in the checks below.
pub const TOLERANCE: f64 = 1e-9;

/// The silent protocol's error next to the quantities that bound it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompressionReport {
    /// Error of the compressed protocol.
    pub epsilon: f64,
    pub icost_bits: f64,
    /// `(2ε/3)⁴`.
    pub threshold: f64,
    pub premise_met: bool,
    pub silent_error: f64,
    pub expected_tv: f64,
    /// `err(S) ≤ err(Q) + 2·E[δ_TV]`.
    pub accounting_holds: bool,
    /// `err(S) ≤ 4ε`, checked only when the premise is met.
    pub error_bound_holds: Option<bool>,
}

/// Compresses the protocol behind `tbl` and measures the result exactly.
pub fn analyze_compression<Q: Protocol>(q: &Q, tbl: &ProtocolTable) -> Result<CompressionReport> {
    let epsilon = tbl.error();
    let icost_bits = tbl.information_cost()?;
    let expected_tv = tbl.expected_tv()?;
    let s = compress_to_silent(tbl, q)?;
    let s_tbl = enumerate_protocol(&s, tbl.distribution, tbl.k)?;
    let silent_error = s_tbl.error();
    let threshold = (2.0 * epsilon / 3.0).powi(4);
    let premise_met = icost_bits <= threshold + TOLERANCE;
    Ok(CompressionReport {
        epsilon,
        icost_bits,
        threshold,
        premise_met,
        silent_error,
        expected_tv,
        accounting_holds: silent_error <= epsilon + 2.0 * expected_tv + TOLERANCE,
        error_bound_holds: premise_met.then_some(silent_error <= 4.0 * epsilon + TOLERANCE),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DirectSumReport {
    pub n: usize,
    /// Information cost of the inner protocol on multi-gadget inputs.
    pub inner_icost_bits: f64,
    pub inner_error: f64,
    /// `(t/n)·ICost_μ(P)`.
    pub scaled_bound: f64,
    pub holds: bool,
    /// The embedded protocol errs no more often than the inner one.
    pub error_holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IcostReport {
    pub protocol: String,
    pub t: usize,
    pub k: usize,
    pub embedded: bool,
    pub icost_bits: f64,
    pub max_transcript_bits: usize,
    pub error: f64,
    pub expected_tv: f64,
    /// `ICost ≤ max transcript bits`.
    pub cost_bound_holds: bool,
    /// `E[δ_TV] ≤ sqrt(ICost)`.
    pub tv_bound_holds: bool,
    pub direct_sum: Option<DirectSumReport>,
    pub compression: CompressionReport,
}

fn summarize<P: Protocol>(name: &str, p: &P, tbl: &ProtocolTable, t: usize, embedded: bool) -> Result<IcostReport> {
    let icost_bits = tbl.information_cost()?;
    let expected_tv = tbl.expected_tv()?;
    let max_transcript_bits = tbl.max_transcript_bits();
    Ok(IcostReport {
        protocol: name.to_string(),
        t,
        k: tbl.k,
        embedded,
        icost_bits,
        max_transcript_bits,
        error: tbl.error(),
        expected_tv,
        cost_bound_holds: icost_bits <= max_transcript_bits as f64 + TOLERANCE,
        tv_bound_holds: expected_tv <= icost_bits.max(0.0).sqrt() + TOLERANCE,
        direct_sum: None,
        compression: analyze_compression(p, tbl)?,
    })
}

fn report_for<P: Protocol + Clone>(name: &str, p: P, t: usize, k: usize, embed_n: Option<usize>) -> Result<IcostReport> {
    let gadget = InputDistribution::Gadget { t };
    let Some(n) = embed_n else {
        let tbl = enumerate_protocol(&p, gadget, k)?;
        return summarize(name, &p, &tbl, t, false);
    };
    let inner = enumerate_protocol(&p, InputDistribution::MultiGadget { n, t }, k)?;
    let q = embed_single_gadget(p, t, n, k)?;
    let tbl = enumerate_protocol(&q, gadget, k)?;
    let mut report = summarize(name, &q, &tbl, t, true)?;
    let inner_icost_bits = inner.information_cost()?;
    let scaled_bound = t as f64 / n as f64 * inner_icost_bits;
    report.direct_sum = Some(DirectSumReport {
        n,
        inner_icost_bits,
        inner_error: inner.error(),
        scaled_bound,
        holds: report.icost_bits <= scaled_bound + TOLERANCE,
        error_holds: report.error <= inner.error() + TOLERANCE,
    });
    Ok(report)
}

/// Every protocol name [`icost_report`] accepts.
pub fn analyzable_protocols() -> Vec<&'static str> {
    Builtin::NAMES.iter().chain(ToyProtocol::NAMES.iter()).copied().collect()
}

/// Exact analysis of a named protocol on single `t`-vertex gadgets with `k`
/// parties, optionally through the embedding into `n`-vertex inputs.
pub fn icost_report(name: &str, t: usize, k: usize, embed_n: Option<usize>) -> Result<IcostReport> {
    if let Ok(toy) = name.parse::<ToyProtocol>() {
        return match toy {
            ToyProtocol::SilentEmpty => report_for(name, SilentEmpty, t, k, embed_n),
            ToyProtocol::EdgeBit => report_for(name, EdgeBit, t, k, embed_n),
            ToyProtocol::ConstantBit => report_for(name, ConstantBit, t, k, embed_n),
            ToyProtocol::LeakyMatching => report_for(name, LeakyMatching, t, k, embed_n),
        };
    }
    match name.parse::<Builtin>() {
        Ok(Builtin::GreedyMatching) => report_for(name, GreedyMatching, t, k, embed_n),
        Ok(Builtin::RogMis) => report_for(name, RandomOrderGreedyMis, t, k, embed_n),
        Ok(Builtin::PaletteColoring(c)) => report_for(name, palette_coloring_protocol(c)?, t, k, embed_n),
        Err(_) => Err(Error::InvalidParameter(format!(
            "unknown protocol '{name}' (expected one of {})",
            analyzable_protocols().join(", ")
        ))),
    }
}
