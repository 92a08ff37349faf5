use std::fs;

use bbsim::rulingset::{check_total_order, domination_relation, find_counterexample, parse_table, refutes, LocalSilentTable, OrderCheck};
use bbsim::{Edge, Seed};
use rayon::prelude::*;
use serde::Serialize;

use crate::args::RulingsetArgs;
use crate::error::{CliError, CliResult};
use crate::report::{csv_text, json_text, Outcome};

#[derive(Serialize)]
struct Report {
    t: usize,
    k: usize,
    order: OrderCheck,
    counterexample: Vec<Edge>,
    selected: Vec<usize>,
    refuted: bool,
}

#[derive(Serialize)]
struct Row {
    trial: usize,
    seed: u64,
    outcome: &'static str,
    edges: usize,
    selected: usize,
    refuted: bool,
}

fn analyze(tbl: &LocalSilentTable, t: usize) -> CliResult<Report> {
    let order = check_total_order(&domination_relation(tbl));
    let g = find_counterexample(tbl, t)?;
    Ok(Report {
        t,
        k: tbl.k(),
        order,
        counterexample: g.edges().collect(),
        selected: tbl.run(&g)?.into_iter().collect(),
        refuted: refutes(tbl, &g, t)?,
    })
}

fn outcome_name(o: &OrderCheck) -> &'static str {
    match o {
        OrderCheck::TotalOrder { .. } => "total_order",
        OrderCheck::SemiconnexViolation { .. } => "semiconnex_violation",
        OrderCheck::AsymmetryViolation { .. } => "asymmetry_violation",
        OrderCheck::TransitivityViolation { .. } => "transitivity_violation",
    }
}

pub fn rulingset(a: &RulingsetArgs) -> CliResult<Outcome> {
    if a.t < 1 {
        return Err(CliError::Usage("--t must be at least 1".into()));
    }
    if let Some(path) = &a.table {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
        let tbl = parse_table(&text).map_err(|source| CliError::Input {
            path: path.clone(),
            source,
        })?;
        let report = analyze(&tbl, a.t)?;
        return Ok(Outcome {
            passed: report.refuted,
            text: json_text(&report)?,
        });
    }
    let count = a.fuzz.unwrap_or(0);
    let seed = a.seed.unwrap_or(0);
    let rows: Vec<Row> = (0..count)
        .into_par_iter()
        .map(|i| {
            let s = seed.wrapping_add(i as u64);
            let tbl = LocalSilentTable::random(a.t + 2, &Seed::new(s, "table"))?;
            let r = analyze(&tbl, a.t)?;
            Ok(Row {
                trial: i,
                seed: s,
                outcome: outcome_name(&r.order),
                edges: r.counterexample.len(),
                selected: r.selected.len(),
                refuted: r.refuted,
            })
        })
        .collect::<CliResult<_>>()?;
    let passed = rows.iter().all(|r| r.refuted);
    Ok(Outcome {
        text: csv_text(rows)?,
        passed,
    })
}
