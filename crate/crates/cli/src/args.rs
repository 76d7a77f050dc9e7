use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use stgl::supra::LaplacianVariant;

pub const OUT_DIR_ENV: &str = "STGL_OUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "stgl", version, about = "Spectral clustering of time-evolving graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a benchmark graph as TEG JSON.
    Generate(GenerateArgs),
    /// Cluster every view jointly with the spatio-temporal Laplacian.
    Cluster(ClusterArgs),
    /// Cluster with the supra-Laplacian over a grid of coupling strengths.
    Baseline(BaselineArgs),
    /// Leading eigenvalues of C and L with their tags.
    Spectrum(SpectrumArgs),
    /// Double-gyre Ulam graph, clustering and boundary analysis.
    Gyre(GyreArgs),
    /// Random-walk escape rates from a vertex set.
    Walk(WalkArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Generator {
    Benchmark1,
    Benchmark2,
    Linegraph,
    Planted,
    Gyre,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PlantedArgs {
    /// Block sizes of the planted partition.
    #[arg(long, value_delimiter = ',', default_values_t = [50usize, 50])]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    pub views: usize,
    #[arg(long, default_value_t = 0.3)]
    pub p_in: f64,
    #[arg(long, default_value_t = 0.02)]
    pub p_out: f64,
    /// Draw each direction independently.
    #[arg(long)]
    pub directed: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GridArgs {
    #[arg(long, default_value_t = 40)]
    pub nx: usize,
    #[arg(long, default_value_t = 20)]
    pub ny: usize,
    #[arg(long, default_value_t = 50)]
    pub particles: usize,
    /// RK4 step size.
    #[arg(long, default_value_t = 0.01)]
    pub step: f64,
    /// Views of the gyre graph.
    #[arg(long = "gyre-views", default_value_t = 10)]
    pub gyre_views: usize,
    #[arg(long, default_value_t = 0.1)]
    pub amplitude: f64,
    #[arg(long, default_value_t = 2.0 * std::f64::consts::PI / 10.0)]
    pub omega: f64,
    #[arg(long, default_value_t = 0.25)]
    pub epsilon: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OutArgs {
    /// Output directory.
    #[arg(long, env = OUT_DIR_ENV, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct GenerateArgs {
    pub name: Generator,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub planted: PlantedArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

/// Exactly one of a TEG file or a generator.
#[derive(Debug, Clone, Args, Serialize)]
#[group(required = true, multiple = false)]
pub struct InputSource {
    /// TEG JSON file.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Generate the input instead of reading it.
    #[arg(long)]
    pub generator: Option<Generator>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct InputArgs {
    #[command(flatten)]
    pub source: InputSource,
    /// Seed for generated input; defaults to --seed.
    #[arg(long)]
    pub data_seed: Option<u64>,
    #[command(flatten)]
    pub planted: PlantedArgs,
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ClusterOpts {
    /// Number of clusters; defaults to the generator's cluster count.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 10)]
    pub restarts: usize,
    /// Temporal-classification threshold.
    #[arg(long, default_value_t = stgl::spectral::DEFAULT_TAU)]
    pub tau: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct ClusterArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub opts: ClusterOpts,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct BaselineArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub opts: ClusterOpts,
    /// Coupling strengths to try.
    #[arg(long, value_delimiter = ',', num_args = 1.., default_values_t = [0.01, 0.1, 0.3, 1.0, 3.0, 10.0])]
    pub a_grid: Vec<f64>,
    #[arg(long, default_value = "normalized", value_parser = parse_variant)]
    pub laplacian_variant: LaplacianVariant,
    /// Keep temporal eigenvectors in the embedding.
    #[arg(long)]
    pub keep_temporal: bool,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Number of leading eigenvalues.
    #[arg(long, default_value_t = 10)]
    pub top: usize,
    /// Report every eigenvalue, negative ones included.
    #[arg(long)]
    pub full_spectrum: bool,
    #[arg(long, default_value_t = stgl::spectral::DEFAULT_TAU)]
    pub tau: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct GyreArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 10)]
    pub restarts: usize,
    #[arg(long, default_value_t = stgl::spectral::DEFAULT_TAU)]
    pub tau: f64,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct WalkArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Vertices the walkers start in; escape is measured from this set.
    #[arg(long, value_delimiter = ',', required = true)]
    pub start_set: Vec<usize>,
    #[arg(long, default_value_t = 1000)]
    pub walkers: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutArgs,
}

fn parse_variant(s: &str) -> Result<LaplacianVariant, String> {
    s.parse().map_err(|e: stgl::Error| e.to_string())
}
