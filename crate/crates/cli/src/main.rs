//! Command-line front end for the estimator library: one-shot estimates on
//! sample files, polynomial coefficient dumps, synthetic data generation, and
//! the Monte-Carlo benchmark harness.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use infomeasures::approx::{remez, ApproxTarget};
use infomeasures::baselines::{
    cae_entropy, dirichlet_bayes_entropy, dirichlet_default_a, dirichlet_plugin_entropy,
    grassberger_entropy, jackknife_entropy, miller_madow_entropy, mle_entropy,
    shrinkage_entropy, SupportHint,
};
use infomeasures::bench::{self, RunOptions};
use infomeasures::composite::{estimate_entropy_rate, estimate_mi, PairHistogram};
use infomeasures::estimators::{
    estimate_entropy, estimate_entropy_with, estimate_falpha_with, estimate_renyi_with,
    EstimatorConfig,
};
use infomeasures::graphical::{
    chow_liu, edge_difference_ratio, mi_from_entropy, wrong_edges_ratio, TreeModel,
};
use infomeasures::synth::{sample_sequence, DiscreteDistribution, SeededRng};
use infomeasures::Histogram;

#[derive(Parser)]
#[command(
    name = "infomeasures",
    version,
    about = "Minimax-rate estimators for entropy and related functionals of discrete data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print best-approximation polynomial coefficients on [0, 1].
    Approx {
        /// Target function to approximate.
        #[arg(long, value_enum)]
        func: ApproxFunc,
        /// Exponent for the x^alpha target.
        #[arg(long)]
        alpha: Option<f64>,
        /// Polynomial degree.
        #[arg(long)]
        degree: usize,
        /// Write the coefficient table to this file instead of stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Estimate Shannon entropy (nats) from a sample file.
    Entropy {
        #[command(flatten)]
        input: InputArgs,
        /// Estimation method.
        #[arg(long, value_enum, default_value_t = Method::Jvhw)]
        method: Method,
        /// Known support size (methods that correct for unseen symbols).
        #[arg(long)]
        support: Option<u64>,
        /// Dirichlet pseudocount (default sqrt(n)/S).
        #[arg(long)]
        a: Option<f64>,
        #[command(flatten)]
        tuning: TuningArgs,
        /// Print routing diagnostics after the estimate.
        #[arg(long)]
        diagnostics: bool,
    },
    /// Estimate the power sum F_alpha = sum p_i^alpha from a sample file.
    Falpha {
        #[command(flatten)]
        input: InputArgs,
        /// Order alpha (positive, not equal to 1).
        #[arg(long)]
        alpha: f64,
        #[command(flatten)]
        tuning: TuningArgs,
        /// Print routing diagnostics after the estimate.
        #[arg(long)]
        diagnostics: bool,
    },
    /// Estimate Renyi entropy of order alpha from a sample file.
    Renyi {
        #[command(flatten)]
        input: InputArgs,
        /// Order alpha (positive, not equal to 1).
        #[arg(long)]
        alpha: f64,
        #[command(flatten)]
        tuning: TuningArgs,
        /// Print routing diagnostics after the estimate.
        #[arg(long)]
        diagnostics: bool,
    },
    /// Estimate mutual information from a file of "x,y" sample pairs.
    Mi {
        /// Input file: one "x,y" pair per line.
        #[arg(long)]
        input: PathBuf,
    },
    /// Estimate the entropy rate of a symbol sequence.
    Rate {
        /// Input file: whitespace-separated symbol tokens, in sequence order.
        #[arg(long)]
        input: PathBuf,
        /// Markov order (context length).
        #[arg(long)]
        depth: usize,
    },
    /// Learn a tree dependence structure from rows of symbols.
    Chowliu {
        /// Input file: one row per line, comma-separated symbols.
        #[arg(long)]
        input: PathBuf,
        /// Entropy estimator behind the pairwise mutual informations.
        #[arg(long, value_enum, default_value_t = PairedEstimator::Jvhw)]
        estimator: PairedEstimator,
        /// Optional true tree ("i,j" edge per line) to score against.
        #[arg(long)]
        truth: Option<PathBuf>,
    },
    /// Generate a synthetic sample file.
    Synth {
        /// Distribution family.
        #[arg(long, value_enum)]
        dist: SynthDist,
        /// Support size.
        #[arg(long)]
        size: usize,
        /// Number of samples.
        #[arg(long)]
        n: u64,
        /// Random seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file: one symbol per line.
        #[arg(long)]
        out: PathBuf,
        /// Zipf exponent.
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        /// Beta shape a.
        #[arg(long, default_value_t = 0.6)]
        a: f64,
        /// Beta shape b.
        #[arg(long, default_value_t = 0.5)]
        b: f64,
    },
    /// Run a benchmark configuration and emit CSV (and optionally a plot).
    Bench {
        /// Configuration file (flat key = value lines).
        #[arg(long)]
        config: PathBuf,
        /// Write CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also render an SVG plot of RMSE curves.
        #[arg(long)]
        plot: Option<PathBuf>,
        /// Skip wall-clock measurement so repeated runs are byte-identical.
        #[arg(long)]
        no_runtime: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ApproxFunc {
    /// x^alpha.
    Xalpha,
    /// -x ln x.
    Xlogx,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Method {
    Jvhw,
    Mle,
    Mm,
    Jk,
    Cae,
    Grassberger,
    Dirichlet,
    Bayes,
    Shrinkage,
}

#[derive(Clone, Copy, ValueEnum)]
enum PairedEstimator {
    Jvhw,
    Mle,
}

#[derive(Clone, Copy, ValueEnum)]
enum SynthDist {
    Uniform,
    Zipf,
    Beta,
}

#[derive(clap::Args)]
struct InputArgs {
    /// Input file: whitespace-separated symbol tokens (or "symbol,count" lines with --histogram).
    #[arg(long)]
    input: PathBuf,
    /// Treat the input as an aggregated histogram instead of raw samples.
    #[arg(long)]
    histogram: bool,
}

#[derive(clap::Args)]
struct TuningArgs {
    /// Threshold constant: the nonsmooth regime covers p below 2·c1·ln(n)/n.
    #[arg(long)]
    c1: Option<f64>,
    /// Degree constant: the approximation degree is ceil(c2·ln n).
    #[arg(long)]
    c2: Option<f64>,
}

impl TuningArgs {
    fn config(&self) -> EstimatorConfig {
        let mut cfg = EstimatorConfig::default();
        if let Some(c1) = self.c1 {
            cfg.c1 = c1;
        }
        if let Some(c2) = self.c2 {
            cfg.c2 = c2;
        }
        cfg
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            // Benchmark configuration problems exit with a distinct status.
            if err.chain().any(|c| {
                matches!(
                    c.downcast_ref::<infomeasures::Error>(),
                    Some(infomeasures::Error::Config { .. })
                )
            }) {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}

fn run() -> Result<()> {
    match Cli::parse().command {
        Command::Approx { func, alpha, degree, csv } => cmd_approx(func, alpha, degree, csv),
        Command::Entropy { input, method, support, a, tuning, diagnostics } => {
            cmd_entropy(&input, method, support, a, &tuning, diagnostics)
        }
        Command::Falpha { input, alpha, tuning, diagnostics } => {
            let h = read_input(&input)?;
            let (value, diag) = estimate_falpha_with(&h, alpha, &tuning.config())?;
            println!("{value}");
            if diagnostics {
                print_diagnostics(&diag);
            }
            Ok(())
        }
        Command::Renyi { input, alpha, tuning, diagnostics } => {
            let h = read_input(&input)?;
            let (value, diag) = estimate_renyi_with(&h, alpha, &tuning.config())?;
            println!("{value}");
            if diagnostics {
                print_diagnostics(&diag);
            }
            Ok(())
        }
        Command::Mi { input } => {
            let pairs = read_pairs(&input)?;
            let ph = PairHistogram::from_samples(&pairs);
            println!("{}", estimate_mi(&ph, estimate_entropy)?);
            Ok(())
        }
        Command::Rate { input, depth } => {
            let seq = read_symbols(&input)?;
            println!("{}", estimate_entropy_rate(&seq, depth, estimate_entropy)?);
            Ok(())
        }
        Command::Chowliu { input, estimator, truth } => cmd_chowliu(&input, estimator, truth),
        Command::Synth { dist, size, n, seed, out, alpha, a, b } => {
            cmd_synth(dist, size, n, seed, &out, alpha, a, b)
        }
        Command::Bench { config, out, plot, no_runtime } => {
            cmd_bench(&config, out, plot, no_runtime)
        }
    }
}

fn cmd_approx(
    func: ApproxFunc,
    alpha: Option<f64>,
    degree: usize,
    csv: Option<PathBuf>,
) -> Result<()> {
    let target = match func {
        ApproxFunc::Xalpha => {
            let a = alpha.context("--func xalpha requires --alpha")?;
            ApproxTarget::PowerAlpha(a)
        }
        ApproxFunc::Xlogx => {
            if alpha.is_some() {
                bail!("--alpha does not apply to --func xlogx");
            }
            ApproxTarget::NegXLogX
        }
    };
    let result = remez(target, degree)?;
    let mut out = String::new();
    for (k, g) in result.coeffs.iter().enumerate() {
        out.push_str(&format!("{k},{g}\n"));
    }
    out.push_str(&format!("# sup_error={}\n", result.sup_error));
    match csv {
        Some(path) => fs::write(&path, out)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{out}"),
    }
    Ok(())
}

fn cmd_entropy(
    input: &InputArgs,
    method: Method,
    support: Option<u64>,
    a: Option<f64>,
    tuning: &TuningArgs,
    diagnostics: bool,
) -> Result<()> {
    let h = read_input(input)?;
    let uses_support = matches!(
        method,
        Method::Mm | Method::Dirichlet | Method::Bayes | Method::Shrinkage
    );
    if support.is_some() && !uses_support {
        bail!("--support does not apply to this method");
    }
    if a.is_some() && !matches!(method, Method::Dirichlet | Method::Bayes) {
        bail!("--a only applies to the dirichlet and bayes methods");
    }
    if (tuning.c1.is_some() || tuning.c2.is_some() || diagnostics) && method != Method::Jvhw {
        bail!("--c1/--c2/--diagnostics only apply to the jvhw method");
    }
    let s = support.unwrap_or(h.distinct() as u64);
    let pseudo = a.unwrap_or_else(|| dirichlet_default_a(h.n(), s.max(1)));
    let value = match method {
        Method::Jvhw => {
            let (value, diag) = estimate_entropy_with(&h, &tuning.config())?;
            println!("{value}");
            if diagnostics {
                print_diagnostics(&diag);
            }
            return Ok(());
        }
        Method::Mle => mle_entropy(&h)?,
        Method::Mm => {
            let hint = support.map_or(SupportHint::Observed, SupportHint::Known);
            miller_madow_entropy(&h, hint)?
        }
        Method::Jk => jackknife_entropy(&h)?,
        Method::Cae => cae_entropy(&h)?,
        Method::Grassberger => grassberger_entropy(&h)?,
        Method::Dirichlet => dirichlet_plugin_entropy(&h, s, pseudo)?,
        Method::Bayes => dirichlet_bayes_entropy(&h, s, pseudo)?,
        Method::Shrinkage => shrinkage_entropy(&h, s)?,
    };
    println!("{value}");
    Ok(())
}

fn cmd_chowliu(input: &Path, estimator: PairedEstimator, truth: Option<PathBuf>) -> Result<()> {
    let rows = read_rows(input)?;
    let tree = match estimator {
        PairedEstimator::Jvhw => chow_liu(&rows, mi_from_entropy(estimate_entropy))?,
        PairedEstimator::Mle => chow_liu(&rows, mi_from_entropy(mle_entropy))?,
    };
    for (i, j) in tree.edges() {
        println!("{i},{j}");
    }
    if let Some(path) = truth {
        let truth_tree = read_tree(&path, tree.d())?;
        println!("# wrong_edges_ratio={}", wrong_edges_ratio(&tree, &truth_tree)?);
        println!(
            "# edge_difference_ratio={}",
            edge_difference_ratio(&tree, &truth_tree)?
        );
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_synth(
    dist: SynthDist,
    size: usize,
    n: u64,
    seed: u64,
    out: &Path,
    alpha: f64,
    a: f64,
    b: f64,
) -> Result<()> {
    let root = SeededRng::new(seed);
    let mut rng = root.stream(0);
    let d = match dist {
        SynthDist::Uniform => DiscreteDistribution::uniform(size)?,
        SynthDist::Zipf => DiscreteDistribution::zipf(size, alpha)?,
        SynthDist::Beta => DiscreteDistribution::beta_random(size, a, b, &mut rng)?,
    };
    let samples = sample_sequence(&d, n, &mut rng);
    let mut text = String::with_capacity(samples.len() * 4);
    for s in samples {
        text.push_str(&s.to_string());
        text.push('\n');
    }
    fs::write(out, text).with_context(|| format!("writing {}", out.display()))?;
    eprintln!(
        "wrote {n} samples over {size} symbols to {} (true entropy {:.6} nats)",
        out.display(),
        d.entropy()
    );
    Ok(())
}

fn cmd_bench(
    config: &Path,
    out: Option<PathBuf>,
    plot: Option<PathBuf>,
    no_runtime: bool,
) -> Result<()> {
    let text = fs::read_to_string(config)
        .with_context(|| format!("reading {}", config.display()))?;
    let spec = bench::parse_config(&text)
        .with_context(|| format!("invalid configuration {}", config.display()))?;
    let rows = bench::run_with(&spec, &RunOptions { measure_runtime: !no_runtime })?;
    let csv = bench::csv_string(&rows);
    match out {
        Some(path) => {
            fs::write(&path, &csv).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{csv}"),
    }
    if let Some(path) = plot {
        fs::write(&path, bench::plot_svg(&rows)?)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn print_diagnostics(diag: &infomeasures::estimators::Diagnostics) {
    println!("# nonsmooth_symbols={}", diag.nonsmooth_symbols);
    println!("# smooth_symbols={}", diag.smooth_symbols);
    println!("# capped_symbols={}", diag.capped_symbols);
    println!("# clamped_power_sum={}", diag.clamped_power_sum);
    println!("# degree={}", diag.degree);
    println!("# delta={}", diag.delta);
}

/// Non-empty, non-comment lines of a text file, with 1-based line numbers.
fn data_lines(path: &Path) -> Result<Vec<(usize, String)>> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim().to_string()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect())
}

/// Interns arbitrary symbol tokens to dense ids in first-appearance order.
/// Numeric and textual tokens are treated alike: every estimate depends only
/// on the induced equality classes, never on the id values.
#[derive(Default)]
struct SymbolTable(HashMap<String, u64>);

impl SymbolTable {
    fn id(&mut self, token: &str) -> u64 {
        let next = self.0.len() as u64;
        *self.0.entry(token.to_string()).or_insert(next)
    }
}

fn read_input(input: &InputArgs) -> Result<Histogram> {
    if input.histogram {
        let mut table = SymbolTable::default();
        let mut entries = Vec::new();
        for (line, text) in data_lines(&input.input)? {
            let (sym, count) = text
                .split_once(',')
                .with_context(|| format!("line {line}: expected 'symbol,count'"))?;
            let count: u64 = count
                .trim()
                .parse()
                .with_context(|| format!("line {line}: invalid count '{count}'"))?;
            entries.push((table.id(sym.trim()), count));
        }
        Ok(Histogram::from_counts(entries)?)
    } else {
        Ok(Histogram::from_samples(&read_symbols(&input.input)?))
    }
}

fn read_symbols(path: &Path) -> Result<Vec<u64>> {
    let mut table = SymbolTable::default();
    Ok(data_lines(path)?
        .iter()
        .flat_map(|(_, text)| text.split_whitespace())
        .map(|token| table.id(token))
        .collect())
}

fn read_pairs(path: &Path) -> Result<Vec<(u64, u64)>> {
    let mut xs = SymbolTable::default();
    let mut ys = SymbolTable::default();
    data_lines(path)?
        .into_iter()
        .map(|(line, text)| {
            let (x, y) = text
                .split_once(',')
                .with_context(|| format!("line {line}: expected 'x,y'"))?;
            Ok((xs.id(x.trim()), ys.id(y.trim())))
        })
        .collect()
}

fn read_rows(path: &Path) -> Result<Vec<Vec<u64>>> {
    let mut table = SymbolTable::default();
    Ok(data_lines(path)?
        .into_iter()
        .map(|(_, text)| text.split(',').map(|t| table.id(t.trim())).collect())
        .collect())
}

fn read_tree(path: &Path, d: usize) -> Result<TreeModel> {
    let mut edges = Vec::new();
    for (line, text) in data_lines(path)? {
        let (i, j) = text
            .split_once(',')
            .with_context(|| format!("line {line}: expected edge 'i,j'"))?;
        let i: usize = i
            .trim()
            .parse()
            .with_context(|| format!("line {line}: invalid variable '{i}'"))?;
        let j: usize = j
            .trim()
            .parse()
            .with_context(|| format!("line {line}: invalid variable '{j}'"))?;
        edges.push((i, j));
    }
    Ok(TreeModel::new(d, edges)?)
}
