use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use hopforge::dist::{validate_hopset, validate_shortcut_set, ValidationReport};
use hopforge::harness::experiment::{run_experiment, write_csv, ExperimentConfig};
use hopforge::harness::generators::{generate, Family, FamilyParams};
use hopforge::harness::registry::{build, Algo, BuildParams};
use hopforge::supershortcut::PathScheme;
use hopforge::{DiGraph, Graph, RationalGraph, ShortcutSet, Weight};

#[derive(Parser)]
#[command(name = "hopforge", version, about = "Build and check shortcut sets and exact hopsets")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a graph.
    Gen(GenArgs),
    /// Build a shortcut set or hopset.
    Build(BuildArgs),
    /// Check a shortcut set or hopset against a hopbound.
    Verify(VerifyArgs),
    /// Run a TOML experiment sweep and write CSV.
    Bench(BenchArgs),
}

#[derive(Args)]
struct GenArgs {
    /// path, total_order, grid, layered, random_dag, random_digraph, random_weighted_dag
    kind: String,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0.05)]
    p: f64,
    #[arg(long, default_value_t = 8)]
    width: usize,
    #[arg(long, default_value_t = 10)]
    wmax: u64,
    /// Grid rows (columns are n / rows).
    #[arg(long)]
    rows: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short = 'o', long)]
    output: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Scheme {
    Blocks,
    BinaryLift,
}

#[derive(Args)]
struct BuildArgs {
    /// greedy, greedy-hopset, chain-greedy, setcover, sqrt, folklore, kp
    #[arg(long)]
    algo: String,
    #[arg(long)]
    beta: Option<usize>,
    #[arg(long = "D", visible_alias = "d")]
    d: Option<usize>,
    /// Pair samples for folklore sampling (default n).
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Emit weighted hopset edges (folklore).
    #[arg(long)]
    hopset: bool,
    /// Compare every set-cover update with a fresh computation.
    #[arg(long)]
    oracle_check: bool,
    /// Chain sample constant for kp.
    #[arg(long, default_value_t = 2.0)]
    c1: f64,
    /// Vertex sample constant for kp.
    #[arg(long, default_value_t = 2.0)]
    c2: f64,
    #[arg(long, value_enum, default_value_t = Scheme::Blocks)]
    scheme: Scheme,
    #[arg(short = 'i', long)]
    input: PathBuf,
    #[arg(short = 'o', long)]
    output: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(short = 'i', long)]
    input: PathBuf,
    #[arg(short = 'H', long = "shortcuts")]
    shortcuts: PathBuf,
    #[arg(long)]
    beta: usize,
    /// Also require hopset weights and distances to be exact.
    #[arg(long)]
    hopset: bool,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(short = 'o', long)]
    output: PathBuf,
}

/// A failure caused by the caller: bad flags, unreadable or malformed input.
struct Usage(anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.into())
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// Integer weights when they parse, exact rationals otherwise.
enum Loaded {
    Int(Graph),
    Rational(RationalGraph),
}

fn load_graph(path: &Path) -> Result<Loaded> {
    let text = read(path)?;
    let (loaded, warnings) = match Graph::parse(&text) {
        Ok((g, w)) => (Loaded::Int(g), w),
        Err(int_err) => match RationalGraph::parse(&text) {
            Ok((g, w)) => (Loaded::Rational(g), w),
            Err(_) => return Err(int_err).with_context(|| format!("parsing {}", path.display())),
        },
    };
    for w in warnings {
        eprintln!("warning: {}: {w}", path.display());
    }
    Ok(loaded)
}

fn gen(a: &GenArgs) -> Result<(), Usage> {
    let family: Family = a.kind.parse()?;
    let params = FamilyParams {
        p: a.p,
        width: a.width,
        wmax: a.wmax,
        rows: a.rows,
    };
    let g = generate(family, a.n, &params, a.seed)?;
    write(&a.output, &g.to_text())?;
    eprintln!("{}: n={} m={}", family.id(), g.n(), g.m());
    Ok(())
}

fn build_typed<W: Weight>(g: &DiGraph<W>, a: &BuildArgs) -> Result<(), Usage> {
    let algo: Algo = a.algo.parse()?;
    let params = BuildParams {
        beta: a.beta,
        d: a.d,
        samples: a.samples,
        seed: a.seed,
        hopset: a.hopset,
        oracle_check: a.oracle_check,
        kp_c1: a.c1,
        kp_c2: a.c2,
        scheme: match a.scheme {
            Scheme::Blocks => PathScheme::Blocks,
            Scheme::BinaryLift => PathScheme::BinaryLift,
        },
    };
    let built = build(g, algo, &params)?;
    write(&a.output, &built.shortcuts.to_text())?;
    eprintln!(
        "{algo}: {} edges, param {}, claimed hopbound {}",
        built.shortcuts.len(),
        built.param,
        built.bound
    );
    Ok(())
}

fn build_cmd(a: &BuildArgs) -> Result<(), Usage> {
    match load_graph(&a.input)? {
        Loaded::Int(g) => build_typed(&g, a),
        Loaded::Rational(g) => build_typed(&g, a),
    }
}

fn verify_typed<W: Weight>(g: &DiGraph<W>, a: &VerifyArgs) -> Result<ValidationReport, Usage> {
    let text = read(&a.shortcuts)?;
    let h = ShortcutSet::<W>::parse(&text).with_context(|| format!("parsing {}", a.shortcuts.display()))?;
    if h.n() != g.n() {
        return Err(anyhow::anyhow!("shortcut file has {} vertices, graph has {}", h.n(), g.n()).into());
    }
    Ok(if a.hopset {
        validate_hopset(g, &h, a.beta)
    } else {
        validate_shortcut_set(g, &h, a.beta)
    })
}

fn verify_cmd(a: &VerifyArgs) -> Result<bool, Usage> {
    let rep = match load_graph(&a.input)? {
        Loaded::Int(g) => verify_typed(&g, a)?,
        Loaded::Rational(g) => verify_typed(&g, a)?,
    };
    println!(
        "{} hopbound={} pairs={}",
        if rep.valid { "valid" } else { "invalid" },
        rep.hopbound,
        rep.pairs
    );
    if let Some(f) = &rep.failure {
        println!("failure: {f:?}");
    }
    Ok(rep.valid)
}

fn bench_cmd(a: &BenchArgs) -> Result<(), Usage> {
    let cfg = ExperimentConfig::load(&a.config).with_context(|| format!("loading {}", a.config.display()))?;
    let rows = run_experiment(&cfg);
    let file = fs::File::create(&a.output).with_context(|| format!("writing {}", a.output.display()))?;
    write_csv(&rows, file)?;
    eprintln!("{} rows", rows.len());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.cmd {
        Cmd::Gen(a) => gen(a).map(|_| true),
        Cmd::Build(a) => build_cmd(a).map(|_| true),
        Cmd::Verify(a) => verify_cmd(a),
        Cmd::Bench(a) => bench_cmd(a).map(|_| true),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
