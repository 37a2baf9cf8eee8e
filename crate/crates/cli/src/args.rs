use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "entangle", version, about = "Entanglement detection, quantification and LOCC simulation")]
pub struct Cli {
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a named or random state to a state file.
    Gen(GenArgs),
    /// Run separability criteria on a state file.
    Analyze(AnalyzeArgs),
    /// Evaluate entanglement measures on a state file.
    Measure(MeasureArgs),
    /// Bell-inequality tests.
    Bell(BellArgs),
    /// Distillation calculators.
    #[command(subcommand)]
    Distill(DistillCommand),
    /// Exact protocol simulations.
    Sim(SimArgs),
    /// Quantum channel utilities.
    #[command(subcommand)]
    Channel(ChannelCommand),
    /// Run the built-in invariant suite.
    Selftest(SelftestArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RecipeName {
    Bell,
    Maxent,
    Ghz,
    W,
    Werner,
    NoisySinglet,
    Isotropic,
    Smolin,
    Chessboard,
    DurCirac,
    UpbShift,
    Aharonov,
    Avn,
    RandomPure,
    RandomDensity,
    RandomSeparable,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    pub recipe: RecipeName,
    /// Bell index (0 ψ⁻, 1 ϕ⁻, 2 ψ⁺, 3 ϕ⁺).
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    /// Local dimension.
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    /// Number of parties.
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// Mixing parameter for werner and noisy-singlet.
    #[arg(long)]
    pub p: Option<f64>,
    /// Fidelity for isotropic.
    #[arg(long)]
    pub f: Option<f64>,
    /// Parameter for chessboard.
    #[arg(long)]
    pub a: Option<f64>,
    /// GHZ-diagonal weights: λ0+, λ0-, then λ1 .. λ(2^(m-1)-1).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub lambdas: Vec<f64>,
    /// Subsystem dimensions for random recipes.
    #[arg(long, value_delimiter = ',', default_value = "2,2")]
    pub dims: Vec<usize>,
    #[arg(long, default_value_t = 2)]
    pub rank: usize,
    #[arg(long, default_value_t = 4)]
    pub terms: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; stdout when absent.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    /// Comma-separated criteria; all applicable ones when absent.
    #[arg(long, value_delimiter = ',')]
    pub criteria: Vec<String>,
    /// Bipartition such as `0|1,2`; repeatable. All bipartitions when absent.
    #[arg(long = "partition")]
    pub partitions: Vec<String>,
    /// Also write the JSON report here.
    #[arg(long)]
    pub out_json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MeasureArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    #[arg(long, value_delimiter = ',', required = true)]
    pub measures: Vec<String>,
    /// Bipartition; first subsystem against the rest when absent.
    #[arg(long)]
    pub split: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BellTest {
    Chsh,
    Wwzb,
    Avn,
    Toner,
}

#[derive(Debug, Args)]
pub struct BellArgs {
    pub test: BellTest,
    #[arg(long, short)]
    pub input: PathBuf,
    /// Unit vectors `x,y,z` or axis names `x`, `y`, `z`, separated by `;`.
    /// chsh: a1;a2;b1;b2. wwzb: two per qubit. toner: a1;a2;b1;b2;c1;c2.
    #[arg(long, allow_hyphen_values = true)]
    pub settings: Option<String>,
    /// Use the optimal CHSH settings for the state.
    #[arg(long)]
    pub optimal: bool,
}

#[derive(Debug, Subcommand)]
pub enum DistillCommand {
    /// Iterate the two-copy recurrence protocol.
    Recurrence {
        #[arg(long)]
        f0: f64,
        #[arg(long, default_value_t = 0.99)]
        target: f64,
        #[arg(long, default_value_t = 100)]
        max_rounds: usize,
        /// Simulate every round on the full two-copy state.
        #[arg(long)]
        exact: bool,
    },
    /// One-way hashing yield of a Bell-diagonal state.
    Hashing {
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Protocol {
    Teleport,
    Dense,
    Swap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AverageMode {
    Analytic,
    Axial,
    Haar,
}

#[derive(Debug, Args)]
pub struct SimArgs {
    pub protocol: Protocol,
    /// Two-qubit resource for teleportation; the singlet when absent.
    #[arg(long)]
    pub resource: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = AverageMode::Analytic)]
    pub mode: AverageMode,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum ChannelCommand {
    /// Channel state (I ⊗ Λ)(P⁺) of a Kraus channel.
    Choi {
        #[arg(long)]
        kraus: PathBuf,
        /// Write the state here as a state file.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Random trials per check.
    #[arg(long, default_value_t = 500)]
    pub trials: usize,
}
