//! Execution of blackboard protocols with exact bit accounting.

mod bits;
mod runtime;
mod transcript;

pub use bits::{gamma_len, BitReader, BitString};
pub use runtime::{
    assign_edges, execute, replay_turns, run_protocol, run_protocol_with_budget, Execution,
    PartyView, Protocol, PublicInfo, RunCoins, RunRecord, RunSeeds, DEFAULT_STEP_BUDGET,
};
pub use transcript::{transcript_cost, Blackboard, Record, Transcript, Turn};
