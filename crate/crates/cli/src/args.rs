use clap::{Args, Parser, Subcommand, ValueEnum};

/// Covering moduli, cover constructions, and certified embeddings for
/// finite metric spaces.
#[derive(Parser, Debug)]
#[command(name = "stone", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Validate a metric space input and report diagnostics.
    Validate(InputArgs),
    /// Sample a covering modulus over a grid and emit a CSV curve.
    Delta(DeltaArgs),
    /// Build a cover (or query a parametric one) and verify its bounds.
    Cover(CoverArgs),
    /// Build a scale family, embed the space, and certify distortion.
    Embed(EmbedArgs),
    /// Merge curves and reports into one CSV table.
    Report(ReportArgs),
}

#[derive(Args, Debug)]
pub struct InputArgs {
    /// Path to a space JSON file ("-" for stdin).
    #[arg(long, conflicts_with = "gen")]
    pub input: Option<String>,
    /// Inline generator spec JSON, e.g. '{"kind":"random-integer","n":6,"max":9}'.
    #[arg(long)]
    pub gen: Option<String>,
    /// Seed for generated spaces (decimal unsigned integer).
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
pub enum DeltaKind {
    Coarse,
    Uniform,
}

#[derive(Args, Debug)]
pub struct DeltaArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Which modulus to sample.
    #[arg(long, value_enum)]
    pub kind: DeltaKind,
    /// Comma-separated grid of arguments; defaults to the step-resolving grid.
    #[arg(long)]
    pub grid: Option<String>,
    /// Cross-check against the exhaustive oracle (spaces of up to 4 points).
    #[arg(long)]
    pub oracle: bool,
    /// Output CSV path (stdout when omitted).
    #[arg(long)]
    pub output: Option<String>,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
pub enum CoverKind {
    Clique,
    Greedy,
    LinfGrid,
    C0Grid,
    Tree,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
pub enum QueryKind {
    Membership,
    Locate,
    Multiplicity,
}

#[derive(Args, Debug)]
pub struct CoverArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum)]
    pub kind: CoverKind,
    /// Radius parameter (clique/greedy/c0-grid/tree).
    #[arg(long)]
    pub radius: Option<f64>,
    /// Separation parameter of the greedy cover.
    #[arg(long)]
    pub eps: Option<f64>,
    /// Enumeration order for the greedy cover, comma-separated indices.
    #[arg(long)]
    pub order: Option<String>,
    /// Grid subdivision (linf-grid/c0-grid/tree).
    #[arg(long)]
    pub subdiv: Option<u32>,
    /// Ambient dimension (linf-grid).
    #[arg(long)]
    pub dim: Option<usize>,
    /// Query a parametric cover instead of materializing one.
    #[arg(long, value_enum)]
    pub query: Option<QueryKind>,
    /// Query point JSON: array for linf-grid, {"coord": value} map for c0-grid.
    #[arg(long)]
    pub point: Option<String>,
    /// Query cell JSON: integer array for linf-grid, grid cell for c0-grid.
    #[arg(long)]
    pub cell: Option<String>,
    #[arg(long)]
    pub output: Option<String>,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
pub enum EmbedCoverKind {
    Clique,
    Greedy,
}

#[derive(Args, Debug)]
pub struct EmbedArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Scale ratio (> 1).
    #[arg(long, default_value_t = 1.5)]
    pub t: f64,
    /// Lower-bound shrink fraction in (0, 1).
    #[arg(long, default_value_t = 0.25)]
    pub eps: f64,
    /// Slack above the modulus slope (> 0).
    #[arg(long, default_value_t = 0.25)]
    pub lambda: f64,
    /// Label of the base point (defaults to the first point).
    #[arg(long)]
    pub base_point: Option<String>,
    /// Inclusive scale range "n_min..n_max"; derived when omitted.
    #[arg(long)]
    pub scales: Option<String>,
    /// Per-scale cover construction.
    #[arg(long, value_enum, default_value_t = EmbedCoverKind::Clique)]
    pub cover_kind: EmbedCoverKind,
    /// Assumed modulus slope C (>= 1); raised automatically if measured worse.
    #[arg(long = "big-c", default_value_t = 1.0)]
    pub c: f64,
    /// Assumed modulus offset D (>= 0).
    #[arg(long = "big-d", default_value_t = 0.0)]
    pub d: f64,
    /// Absolute certification tolerance.
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
    #[arg(long)]
    pub output: Option<String>,
}

#[derive(Args, Debug)]
pub struct ReportArgs {
    /// Input files: delta CSV curves and/or JSON reports.
    #[arg(required = true)]
    pub inputs: Vec<String>,
    #[arg(long)]
    pub output: Option<String>,
}
