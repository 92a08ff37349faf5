use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "bbsim", version, about = "Blackboard-model graph protocol simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run a protocol on seeded random or file-given inputs.
    Simulate(SimulateArgs),
    /// Search for a deterministic silent protocol on t-vertex gadgets.
    Nontrivial(NontrivialArgs),
    /// Refute silent ruling-set algorithms given as selection tables.
    Rulingset(RulingsetArgs),
    /// Exact information cost of a protocol on tiny gadgets.
    Icost(IcostArgs),
    /// Probability that a random partition is good.
    Goodprob(GoodprobArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Model {
    /// G(n, p).
    Gnp,
    /// n/t independent uniform gadgets on consecutive blocks.
    Gadgets,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[arg(long)]
    pub protocol: String,
    /// Vertex count; taken from --graph when given.
    #[arg(long)]
    pub n: Option<usize>,
    /// Party count; taken from --partition when given.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Model::Gnp)]
    pub model: Model,
    /// Edge probability for the G(n, p) model.
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    /// Gadget size for the gadget model.
    #[arg(long)]
    pub t: Option<usize>,
    /// Palette-size coefficient for palette coloring.
    #[arg(long)]
    pub coefficient: Option<f64>,
    #[arg(long)]
    pub graph: Option<PathBuf>,
    #[arg(long)]
    pub partition: Option<PathBuf>,
    /// Report format; JSON for one trial and CSV for batches by default.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Fill in wall-clock milliseconds (reports are then not reproducible).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Args, Debug)]
pub struct NontrivialArgs {
    #[arg(long)]
    pub problem: String,
    #[arg(long)]
    pub t: usize,
    /// Write rejected partial assignments to this file as JSON.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    #[arg(long, default_value_t = 10_000)]
    pub trace_limit: usize,
    /// Also report the smallest gadget size with no silent protocol.
    #[arg(long)]
    pub corollary: bool,
}

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["table", "fuzz"])))]
pub struct RulingsetArgs {
    #[arg(long)]
    pub t: usize,
    #[arg(long)]
    pub table: Option<PathBuf>,
    /// Number of random tables to refute.
    #[arg(long, requires = "seed")]
    pub fuzz: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Args, Debug)]
pub struct IcostArgs {
    #[arg(long)]
    pub protocol: String,
    #[arg(long)]
    pub t: usize,
    #[arg(long)]
    pub k: usize,
    /// Vertex count of the multi-gadget input the protocol runs on.
    #[arg(long, requires = "embed")]
    pub n: Option<usize>,
    /// Analyze the single-gadget embedding of the protocol.
    #[arg(long, requires = "n")]
    pub embed: bool,
}

#[derive(Args, Debug)]
pub struct GoodprobArgs {
    #[arg(long)]
    pub t: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 100_000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}
