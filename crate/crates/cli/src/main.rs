//! Command-line front end.
//!
//! Exit codes: 0 success or positive verdict, 1 negative verdict or
//! infeasible, 2 input error, 3 resource cap exceeded.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

#[derive(Debug, Parser)]
#[command(name = "holomorph", version, about = "Discrete holomorphic functions on graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a function file for harmonicity or holomorphy.
    Check(CheckArgs),
    /// Holomorphic extension over a ball of the 3-valent tree.
    ExtendT3(ExtendT3Args),
    /// Holomorphic extension over a ball of the triangle graph.
    ExtendTr3(ExtendTr3Args),
    /// N-holomorphic extension over a ball of the (N+1)-valent tree.
    Nholo(NholoArgs),
    /// Look for a conjugate part of a real harmonic function on a tree.
    Conjugate(ConjugateArgs),
    /// Sample locally injective walks on the hexagonal tiling.
    Walk(WalkArgs),
    /// Render a CSV point cloud or a function file as SVG.
    Render(RenderArgs),
    /// Write one of the built-in example functions as JSON.
    Fixture(FixtureArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Policy {
    Canonical,
    Seeded,
    Exhaustive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Harmonic,
    Holomorphic,
    NHolomorphic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ColorBy {
    Depth,
    Branch,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FixtureName {
    /// Harmonic function on a valency-4 ball with no conjugate part.
    NoConjugate,
    /// Harmonic function with gradient norm 1 at every interior vertex.
    ConstantNorm,
    /// `z^p` on a square patch of the integer lattice.
    ZPower,
}

#[derive(Debug, Args)]
struct Outputs {
    /// Write the JSON result here instead of standard output.
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Plot {
    #[arg(long, default_value_t = 800)]
    width: u32,
    #[arg(long, default_value_t = 800)]
    height: u32,
    #[arg(long, default_value_t = 2.0)]
    point_radius: f64,
    #[arg(long, value_enum, default_value_t = ColorBy::Depth)]
    color_by: ColorBy,
    /// `xmin,ymin,xmax,ymax`; fitted to the data when omitted.
    #[arg(long, value_parser = parse_viewport, allow_hyphen_values = true)]
    viewport: Option<(Complex64, Complex64)>,
}

#[derive(Debug, Args)]
struct CheckArgs {
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = Mode::Holomorphic)]
    mode: Mode,
    /// Order for `n-holomorphic`.
    #[arg(long, default_value_t = 3)]
    order: u32,
    /// Absolute and relative tolerance.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ExtendT3Args {
    #[arg(long, default_value_t = 6)]
    radius: usize,
    #[arg(long, value_enum, default_value_t = Policy::Canonical)]
    policy: Policy,
    #[arg(long)]
    seed: Option<u64>,
    /// Value at the root edge's first end, `re,im`.
    #[arg(long, value_parser = parse_complex, default_value = "0,0", allow_hyphen_values = true)]
    alpha: Complex64,
    /// Value at the root edge's second end, `re,im`.
    #[arg(long, value_parser = parse_complex, default_value = "1,0", allow_hyphen_values = true)]
    beta: Complex64,
    #[command(flatten)]
    out: Outputs,
    #[command(flatten)]
    plot: Plot,
}

#[derive(Debug, Args)]
struct NholoArgs {
    /// N: power sums vanish up to this order.
    #[arg(long, default_value_t = 4)]
    order: u32,
    #[arg(long, default_value_t = 4)]
    radius: usize,
    #[arg(long, value_enum, default_value_t = Policy::Canonical)]
    policy: Policy,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_parser = parse_complex, default_value = "0,0", allow_hyphen_values = true)]
    alpha: Complex64,
    #[arg(long, value_parser = parse_complex, default_value = "1,0", allow_hyphen_values = true)]
    beta: Complex64,
    #[command(flatten)]
    out: Outputs,
    #[command(flatten)]
    plot: Plot,
}

#[derive(Debug, Args)]
struct ExtendTr3Args {
    #[arg(long, default_value_t = 5)]
    radius: usize,
    #[arg(long, value_enum, default_value_t = Policy::Canonical)]
    policy: Policy,
    #[arg(long)]
    seed: Option<u64>,
    /// Number of random extensions pooled into the cloud under `seeded`.
    #[arg(long, default_value_t = 1)]
    samples: usize,
    /// Starting triangle as JSON `{"p": [re, im], "e": [...], "f": [...]}`;
    /// an equilateral triangle on `0, 1` by default.
    #[arg(long)]
    triangle: Option<PathBuf>,
    #[command(flatten)]
    out: Outputs,
    #[command(flatten)]
    plot: Plot,
}

#[derive(Debug, Args)]
struct ConjugateArgs {
    input: PathBuf,
    /// Vertex id to start the sweep from; the tree centre by default.
    #[arg(long)]
    root: Option<String>,
    /// Sample the free directions with this seed instead of the
    /// deterministic completion.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct WalkArgs {
    #[arg(long, default_value_t = 1000)]
    length: usize,
    #[arg(long, default_value_t = 1)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Cell size of the endpoint histogram.
    #[arg(long, default_value_t = 5.0)]
    bin: f64,
    #[command(flatten)]
    out: Outputs,
}

#[derive(Debug, Args)]
struct RenderArgs {
    /// A `re,im,depth` CSV file or a function JSON file.
    input: PathBuf,
    #[arg(long)]
    svg: PathBuf,
    #[command(flatten)]
    plot: Plot,
}

#[derive(Debug, Args)]
struct FixtureArgs {
    #[arg(value_enum)]
    name: FixtureName,
    #[arg(long, default_value_t = 3)]
    radius: usize,
    #[arg(long, default_value_t = 4)]
    valency: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 4)]
    power: u32,
    /// Half side of the lattice patch.
    #[arg(long, default_value_t = 10)]
    half: i32,
    #[arg(long)]
    json: Option<PathBuf>,
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("expected re,im but got {s:?}"));
    }
    let re = parts[0].trim().parse::<f64>().map_err(|e| e.to_string())?;
    let im = parts[1].trim().parse::<f64>().map_err(|e| e.to_string())?;
    Ok(Complex64::new(re, im))
}

fn parse_viewport(s: &str) -> Result<(Complex64, Complex64), String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    if v.len() != 4 {
        return Err(format!("expected xmin,ymin,xmax,ymax but got {s:?}"));
    }
    Ok((Complex64::new(v[0], v[1]), Complex64::new(v[2], v[3])))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
