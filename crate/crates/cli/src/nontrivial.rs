use std::fs;

use bbsim::nontriviality::{corollary_parameters, exists_silent_protocol_with, CorollaryParameters, SearchOptions, SilentVerdict};
use bbsim::ProblemKind;
use serde::Serialize;

use crate::args::NontrivialArgs;
use crate::error::{CliError, CliResult};
use crate::report::{json_text, Outcome};

#[derive(Serialize)]
struct Report<'a> {
    problem: ProblemKind,
    t: usize,
    #[serde(flatten)]
    verdict: &'a SilentVerdict,
    nodes_explored: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace_entries: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    corollary: Option<CorollaryParameters>,
}

pub fn nontrivial(a: &NontrivialArgs) -> CliResult<Outcome> {
    let problem: ProblemKind = a.problem.parse().map_err(|e: bbsim::Error| CliError::Usage(e.to_string()))?;
    let opts = SearchOptions {
        trace_limit: a.trace.as_ref().map(|_| a.trace_limit),
        ..SearchOptions::default()
    };
    let result = exists_silent_protocol_with(problem, a.t, &opts)?;
    if let (Some(path), Some(trace)) = (&a.trace, &result.refutation_trace) {
        fs::write(path, json_text(trace)?).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
    }
    let corollary = a.corollary.then(|| corollary_parameters(problem)).transpose()?;
    let text = json_text(&Report {
        problem,
        t: a.t,
        verdict: &result.verdict,
        nodes_explored: result.nodes_explored,
        trace_entries: result.refutation_trace.as_ref().map(Vec::len),
        corollary,
    })?;
    Ok(Outcome { text, passed: true })
}
