use std::fs;
use std::path::Path;
use std::time::Instant;

use bbsim::graph::{parse_graph, parse_partition, sample_gnp, sample_multigadget, sample_partition, validate_solution};
use bbsim::protocols::Builtin;
use bbsim::{Graph, PartitionFunction, Seed, Solution};
use rayon::prelude::*;
use serde::Serialize;

use crate::args::{Format, Model, SimulateArgs};
use crate::error::{CliError, CliResult};
use crate::report::{csv_text, json_text, Outcome};

#[derive(Serialize)]
struct RunReport {
    protocol: String,
    n: usize,
    k: usize,
    seed_public: u64,
    seed_private: u64,
    payload_bits: usize,
    framed_bits: usize,
    valid: bool,
    output: Solution,
    wall_ms: u64,
}

#[derive(Serialize)]
struct CsvRow {
    trial: usize,
    protocol: String,
    n: usize,
    k: usize,
    edges: usize,
    seed_public: u64,
    seed_private: u64,
    payload_bits: usize,
    framed_bits: usize,
    valid: bool,
    wall_ms: u64,
}

fn read_input<T>(path: &Path, parse: impl Fn(&str) -> bbsim::Result<T>) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse(&text).map_err(|source| CliError::Input {
        path: path.to_path_buf(),
        source,
    })
}

struct Inputs {
    graph: Option<Graph>,
    partition: Option<PartitionFunction>,
    n: usize,
    k: usize,
}

fn resolve_inputs(a: &SimulateArgs) -> CliResult<Inputs> {
    let graph = a.graph.as_deref().map(|p| read_input(p, parse_graph)).transpose()?;
    let partition = a.partition.as_deref().map(|p| read_input(p, parse_partition)).transpose()?;
    let n = match (&graph, &partition, a.n) {
        (Some(g), _, Some(n)) if g.n() != n => {
            return Err(CliError::Usage(format!("--n {n} disagrees with the graph file ({} vertices)", g.n())))
        }
        (Some(g), _, _) => g.n(),
        (None, Some(z), _) => z.n(),
        (None, None, Some(n)) => n,
        (None, None, None) => return Err(CliError::Usage("--n is required without --graph".into())),
    };
    let k = match (&partition, a.k) {
        (Some(z), Some(k)) if z.k() != k => {
            return Err(CliError::Usage(format!("--k {k} disagrees with the partition file (k = {})", z.k())))
        }
        (Some(z), _) => z.k(),
        (None, Some(k)) => k,
        (None, None) => return Err(CliError::Usage("--k is required without --partition".into())),
    };
    if let Some(z) = &partition {
        if z.n() != n {
            return Err(CliError::Usage(format!("partition is for n = {}, graph has n = {n}", z.n())));
        }
    }
    if n == 0 || k == 0 {
        return Err(CliError::Usage("--n and --k must be positive".into()));
    }
    if a.trials == 0 {
        return Err(CliError::Usage("--trials must be positive".into()));
    }
    if !(0.0..=1.0).contains(&a.p) {
        return Err(CliError::Usage(format!("--p {} is not a probability", a.p)));
    }
    if a.model == Model::Gadgets && a.t.is_none() && graph.is_none() {
        return Err(CliError::Usage("--model gadgets needs --t".into()));
    }
    Ok(Inputs { graph, partition, n, k })
}

fn protocol(a: &SimulateArgs) -> CliResult<Builtin> {
    let p: Builtin = a.protocol.parse().map_err(|e: bbsim::Error| CliError::Usage(e.to_string()))?;
    match (p, a.coefficient) {
        (Builtin::PaletteColoring(_), Some(c)) => {
            bbsim::protocols::palette_coloring_protocol(c).map_err(|e| CliError::Usage(e.to_string()))?;
            Ok(Builtin::PaletteColoring(c))
        }
        (_, Some(_)) => Err(CliError::Usage("--coefficient only applies to palette-coloring".into())),
        (p, None) => Ok(p),
    }
}

struct Trial {
    report: RunReport,
    edges: usize,
}

fn run_trial(a: &SimulateArgs, p: &Builtin, inputs: &Inputs, i: usize, budget: u64) -> CliResult<Trial> {
    let base = a.seed.wrapping_add(2 * i as u64);
    let (seed_public, seed_private) = (base, base.wrapping_add(1));
    let g = match (&inputs.graph, a.model) {
        (Some(g), _) => g.clone(),
        (None, Model::Gnp) => sample_gnp(inputs.n, a.p, &Seed::new(base, "graph")),
        (None, Model::Gadgets) => sample_multigadget(inputs.n, a.t.unwrap_or(1), &Seed::new(base, "graph"))?,
    };
    let z = match &inputs.partition {
        Some(z) => z.clone(),
        None => sample_partition(inputs.n, inputs.k, &Seed::new(base, "partition"))?,
    };
    let start = Instant::now();
    let rec = p.run(
        &g,
        &z,
        &Seed::new(seed_public, "public"),
        &Seed::new(seed_private, "private"),
        budget,
    )?;
    let wall_ms = if a.timing { start.elapsed().as_millis() as u64 } else { 0 };
    let valid = validate_solution(p.problem(), &g, &rec.combined_output)?.is_valid();
    Ok(Trial {
        edges: g.edge_count(),
        report: RunReport {
            protocol: p.name().to_string(),
            n: inputs.n,
            k: inputs.k,
            seed_public,
            seed_private,
            payload_bits: rec.transcript.total_payload_bits(),
            framed_bits: rec.cost_bits,
            valid,
            output: rec.combined_output,
            wall_ms,
        },
    })
}

pub fn simulate(a: &SimulateArgs, budget: u64) -> CliResult<Outcome> {
    let p = protocol(a)?;
    let inputs = resolve_inputs(a)?;
    let trials: Vec<Trial> = (0..a.trials)
        .into_par_iter()
        .map(|i| run_trial(a, &p, &inputs, i, budget))
        .collect::<CliResult<_>>()?;
    let passed = trials.iter().all(|t| t.report.valid);
    let format = a.format.unwrap_or(if a.trials == 1 { Format::Json } else { Format::Csv });
    let text = match format {
        Format::Json if trials.len() == 1 => json_text(&trials[0].report)?,
        Format::Json => json_text(&trials.iter().map(|t| &t.report).collect::<Vec<_>>())?,
        Format::Csv => csv_text(trials.into_iter().enumerate().map(|(i, t)| CsvRow {
            trial: i,
            protocol: t.report.protocol,
            n: t.report.n,
            k: t.report.k,
            edges: t.edges,
            seed_public: t.report.seed_public,
            seed_private: t.report.seed_private,
            payload_bits: t.report.payload_bits,
            framed_bits: t.report.framed_bits,
            valid: t.report.valid,
            wall_ms: t.report.wall_ms,
        }))?,
    };
    Ok(Outcome { text, passed })
}
