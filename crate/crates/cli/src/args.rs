//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "geomod",
    version,
    about = "Detect geographically disperse communities in geolocated social networks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a graph from a SNAP edge list and check-in file
    Ingest(IngestArgs),
    /// Draw snowball samples from a graph and write per-sample stats
    Sample(SampleArgs),
    /// Detect communities and write the partition as TSV
    Detect(DetectArgs),
    /// Run the (sample x sigma x method) comparison and write a CSV report
    Sweep(SweepArgs),
    /// Rank communities by quality and export the top ones as GeoJSON
    Rank(RankArgs),
    /// Exhaustive search over all partitions of a tiny graph
    #[command(hide = true)]
    Oracle(OracleArgs),
    /// Generate a synthetic location-based social network in SNAP formats
    #[command(hide = true)]
    Synth(SynthArgs),
}

#[derive(Args, Debug)]
pub struct IngestArgs {
    /// SNAP edge list (two ids per line, `#` comments ignored)
    #[arg(long)]
    pub edges: PathBuf,
    /// SNAP check-in file (user, timestamp, lat, lon, location id)
    #[arg(long)]
    pub checkins: PathBuf,
    /// Output graph JSON
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    /// Graph JSON produced by `ingest`
    #[arg(long)]
    pub graph: PathBuf,
    /// Number of samples to draw (distinct seed nodes)
    #[arg(long, default_value_t = 20)]
    pub count: usize,
    /// Minimum sample size in nodes
    #[arg(long = "min-size", default_value_t = 300)]
    pub min_size: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory (sample_NNN.json plus stats.csv)
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObjectiveArg {
    Ng,
    Distance,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitArg {
    Singleton,
    Warm,
}

#[derive(Args, Debug)]
pub struct DetectArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, value_enum, default_value = "distance")]
    pub objective: ObjectiveArg,
    /// Decay scale in kilometers (distance objective only)
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long, value_enum, default_value = "singleton")]
    pub init: InitArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output partition TSV (`node_id<TAB>community_id`)
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum MethodArg {
    #[value(name = "louvain")]
    Louvain,
    #[value(name = "louvain_d_singleton")]
    LouvainDSingleton,
    #[value(name = "louvain_d_warm")]
    LouvainDWarm,
}

impl MethodArg {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Louvain => "louvain",
            Self::LouvainDSingleton => "louvain_d_singleton",
            Self::LouvainDWarm => "louvain_d_warm",
        }
    }
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Directory of sample graph JSON files
    #[arg(long)]
    pub samples: PathBuf,
    /// Sigma values in kilometers (repeatable or comma-separated)
    #[arg(long = "sigma", required = true, num_args = 1.., value_delimiter = ',')]
    pub sigma: Vec<f64>,
    /// Methods to compare
    #[arg(
        long,
        value_enum,
        num_args = 1..,
        value_delimiter = ',',
        default_values = ["louvain", "louvain_d_singleton", "louvain_d_warm"]
    )]
    pub methods: Vec<MethodArg>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output CSV
    #[arg(long)]
    pub out: PathBuf,
    /// Worker threads for sweep cells (0 = one per core)
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
}

#[derive(Args, Debug)]
pub struct RankArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Partition TSV as written by `detect`
    #[arg(long)]
    pub partition: PathBuf,
    /// Decay scale in kilometers for the quality null model
    #[arg(long)]
    pub sigma: f64,
    #[arg(long = "top-k", default_value_t = 10)]
    pub top_k: usize,
    /// Output GeoJSON FeatureCollection
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, value_enum, default_value = "ng")]
    pub objective: ObjectiveArg,
    #[arg(long)]
    pub sigma: Option<f64>,
}

#[derive(Args, Debug)]
pub struct SynthArgs {
    #[arg(long, default_value_t = 6000)]
    pub nodes: usize,
    #[arg(long, default_value_t = 24)]
    pub cities: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long = "out-edges")]
    pub out_edges: PathBuf,
    #[arg(long = "out-checkins")]
    pub out_checkins: PathBuf,
}
