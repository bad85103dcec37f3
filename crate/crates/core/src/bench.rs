//! Monte-Carlo benchmark harness: sweeps estimators over grids of
//! (support size, sample size), aggregates error statistics, and renders the
//! results as CSV or an SVG plot.
//!
//! Runs are reproducible bit-for-bit: every trial draws from a dedicated
//! random stream derived from the experiment seed, the grid index, and the
//! trial index, and all estimators within a trial see the same data (paired
//! comparison). Wall-clock measurement can be disabled so that repeated runs
//! of the same configuration produce byte-identical CSV.
//!
//! A configuration file is flat `key = value` text; `#` starts a comment:
//!
//! ```text
//! experiment = entropy
//! dist = zipf
//! zipf_alpha = 1.0
//! S_grid = logspace:100,10000,5
//! n_rule = over_log:5.0
//! estimators = jvhw,mle,mm
//! trials = 20
//! seed = 7
//! ```

use rayon::prelude::*;
use std::fmt::Write as _;
use std::time::Instant;

use crate::baselines::{
    cae_entropy, dirichlet_bayes_entropy, dirichlet_default_a, dirichlet_plugin_entropy,
    grassberger_entropy, jackknife_entropy, miller_madow_entropy, mle_entropy,
    plugin_power_sum, shrinkage_entropy, SupportHint,
};
use crate::composite::{estimate_entropy_rate, estimate_mi, PairHistogram};
use crate::estimators::{estimate_entropy, estimate_falpha};
use crate::graphical::{chow_liu, mi_from_entropy, wrong_edges_ratio};
use crate::synth::{
    additive_markov_sequence, mi_channel_dataset, sample_multinomial, star_tree_dataset,
    DiscreteDistribution, SeededRng,
};
use crate::{Error, Histogram, Result};

/// What a benchmark measures per trial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExperimentKind {
    /// Entropy of i.i.d. samples from a known distribution.
    Entropy,
    /// Power sum `F_α` of i.i.d. samples.
    PowerSum,
    /// Mutual information across a random additive channel.
    MutualInformation,
    /// Entropy rate of an additive-noise Markov chain.
    EntropyRate,
    /// Wrong-edge ratio of the learned tree on star-shaped data.
    ChowLiu,
}

impl ExperimentKind {
    fn token(self) -> &'static str {
        match self {
            Self::Entropy => "entropy",
            Self::PowerSum => "falpha",
            Self::MutualInformation => "mi",
            Self::EntropyRate => "rate",
            Self::ChowLiu => "chowliu",
        }
    }
}

/// Sampling distribution for entropy / power-sum sweeps.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DistKind {
    Uniform,
    /// Zipf with the given exponent.
    Zipf(f64),
    /// Fresh normalized i.i.d. `Beta(a, b)` weights each trial.
    BetaRandom(f64, f64),
}

/// One grid point of the sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridPoint {
    pub s: u64,
    pub n: u64,
}

/// Estimators the harness can run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EstimatorId {
    Jvhw,
    Mle,
    MillerMadow,
    Jackknife,
    Cae,
    Grassberger,
    DirichletPlugin,
    DirichletBayes,
    Shrinkage,
}

impl EstimatorId {
    pub const ALL: [EstimatorId; 9] = [
        Self::Jvhw,
        Self::Mle,
        Self::MillerMadow,
        Self::Jackknife,
        Self::Cae,
        Self::Grassberger,
        Self::DirichletPlugin,
        Self::DirichletBayes,
        Self::Shrinkage,
    ];

    /// Token used in configuration files and CSV output.
    pub fn name(self) -> &'static str {
        match self {
            Self::Jvhw => "jvhw",
            Self::Mle => "mle",
            Self::MillerMadow => "mm",
            Self::Jackknife => "jk",
            Self::Cae => "cae",
            Self::Grassberger => "grassberger",
            Self::DirichletPlugin => "dirichlet",
            Self::DirichletBayes => "bayes",
            Self::Shrinkage => "shrinkage",
        }
    }

    pub fn parse(token: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|e| e.name() == token)
            .ok_or_else(|| {
                Error::InvalidInput(format!(
                    "unknown estimator '{token}' (expected one of jvhw, mle, mm, jk, cae, \
                     grassberger, dirichlet, bayes, shrinkage)"
                ))
            })
    }
}

/// A fully specified benchmark experiment.
#[derive(Clone, Debug)]
pub struct ExperimentSpec {
    /// Label written to the CSV `experiment` column.
    pub name: String,
    pub kind: ExperimentKind,
    pub dist: DistKind,
    /// Functional order for power-sum experiments.
    pub alpha: Option<f64>,
    pub grid: Vec<GridPoint>,
    pub estimators: Vec<EstimatorId>,
    pub trials: u32,
    pub seed: u64,
    /// Markov order for entropy-rate experiments.
    pub depth: usize,
    /// Number of variables for tree-structure experiments.
    pub vars: usize,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.name.is_empty() || self.name.contains(',') || self.name.contains('\n') {
            return Err(Error::InvalidInput(
                "experiment name must be nonempty and free of commas/newlines".into(),
            ));
        }
        if self.grid.is_empty() {
            return Err(Error::InvalidInput("grid is empty".into()));
        }
        for p in &self.grid {
            if p.s < 2 || p.n < 2 {
                return Err(Error::InvalidInput(format!(
                    "grid point (S={}, n={}) needs S ≥ 2 and n ≥ 2",
                    p.s, p.n
                )));
            }
        }
        if self.trials == 0 {
            return Err(Error::InvalidInput("need at least one trial".into()));
        }
        if self.estimators.is_empty() {
            return Err(Error::InvalidInput("no estimators selected".into()));
        }
        for (i, e) in self.estimators.iter().enumerate() {
            if self.estimators[..i].contains(e) {
                return Err(Error::InvalidInput(format!(
                    "estimator '{}' listed twice",
                    e.name()
                )));
            }
        }
        match self.kind {
            ExperimentKind::Entropy => {
                if self.alpha.is_some() {
                    return Err(Error::InvalidInput(
                        "alpha only applies to falpha experiments".into(),
                    ));
                }
            }
            ExperimentKind::PowerSum => {
                let a = self.alpha.ok_or_else(|| {
                    Error::InvalidInput("falpha experiments require alpha".into())
                })?;
                if !a.is_finite() || a <= 0.0 || a == 1.0 {
                    return Err(Error::InvalidInput(format!(
                        "falpha order must be positive, finite and ≠ 1, got {a}"
                    )));
                }
                self.require_paired_estimators()?;
            }
            ExperimentKind::MutualInformation
            | ExperimentKind::EntropyRate
            | ExperimentKind::ChowLiu => {
                if self.alpha.is_some() {
                    return Err(Error::InvalidInput(
                        "alpha only applies to falpha experiments".into(),
                    ));
                }
                self.require_paired_estimators()?;
                if self.kind == ExperimentKind::ChowLiu && self.vars < 3 {
                    return Err(Error::InvalidInput(
                        "tree experiments need at least 3 variables".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Composite experiments only support the bias-corrected estimator and
    /// the plug-in.
    fn require_paired_estimators(&self) -> Result<()> {
        if let Some(bad) = self
            .estimators
            .iter()
            .find(|e| !matches!(e, EstimatorId::Jvhw | EstimatorId::Mle))
        {
            return Err(Error::InvalidInput(format!(
                "estimator '{}' is not available for {} experiments (use jvhw and/or mle)",
                bad.name(),
                self.kind.token()
            )));
        }
        Ok(())
    }
}

/// Run-time switches that do not change the estimates.
#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    /// Record mean wall-clock seconds per estimator call. Disable to make
    /// repeated runs byte-identical (the runtime column is then exactly 0).
    pub measure_runtime: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { measure_runtime: true }
    }
}

/// Aggregated statistics for one (grid point, estimator) cell.
#[derive(Clone, Debug)]
pub struct ResultRow {
    pub experiment: String,
    pub s: u64,
    pub n: u64,
    pub estimator: EstimatorId,
    /// Number of trials that produced an estimate.
    pub trials: u32,
    pub rmse: f64,
    pub bias: f64,
    pub variance: f64,
    /// Mean seconds per estimator call (0 when measurement is off).
    pub runtime_s: f64,
    /// Trials where the estimator returned an error (e.g. zero coverage).
    pub failed_trials: u32,
}

/// Runs the experiment with default options.
pub fn run(spec: &ExperimentSpec) -> Result<Vec<ResultRow>> {
    run_with(spec, &RunOptions::default())
}

/// Runs the experiment; trials execute in parallel, output order is
/// deterministic (grid order, then estimator order).
pub fn run_with(spec: &ExperimentSpec, opts: &RunOptions) -> Result<Vec<ResultRow>> {
    spec.validate()?;
    let root = SeededRng::new(spec.seed);
    let tasks: Vec<(usize, u32)> = (0..spec.grid.len())
        .flat_map(|pi| (0..spec.trials).map(move |t| (pi, t)))
        .collect();
    let mut outcomes = tasks
        .par_iter()
        .map(|&(pi, trial)| run_trial(spec, pi, trial, &root, opts))
        .collect::<Result<Vec<TrialOutcome>>>()?;
    outcomes.sort_by_key(|o| (o.point, o.trial));

    let mut rows = Vec::with_capacity(spec.grid.len() * spec.estimators.len());
    for (pi, point) in spec.grid.iter().enumerate() {
        for (ei, &estimator) in spec.estimators.iter().enumerate() {
            let cell = outcomes.iter().filter(|o| o.point == pi);
            let errors = cell.clone().filter_map(|o| o.results[ei].error);
            let (ok, bias, variance, rmse) = aggregate(errors);
            let runtime_s = if opts.measure_runtime {
                let total: f64 = cell.clone().map(|o| o.results[ei].seconds).sum();
                total / spec.trials as f64
            } else {
                0.0
            };
            rows.push(ResultRow {
                experiment: spec.name.clone(),
                s: point.s,
                n: point.n,
                estimator,
                trials: ok,
                rmse,
                bias,
                variance,
                runtime_s,
                failed_trials: spec.trials - ok,
            });
        }
    }
    Ok(rows)
}

struct EstimateOutcome {
    /// Signed error (estimate − truth), or None when the estimator failed.
    error: Option<f64>,
    seconds: f64,
}

struct TrialOutcome {
    point: usize,
    trial: u32,
    results: Vec<EstimateOutcome>,
}

fn run_trial(
    spec: &ExperimentSpec,
    point_idx: usize,
    trial: u32,
    root: &SeededRng,
    opts: &RunOptions,
) -> Result<TrialOutcome> {
    let point = spec.grid[point_idx];
    // One independent stream per (grid point, trial); all estimators in the
    // trial share the same data.
    let mut rng = root.stream(((point_idx as u64) << 32) | trial as u64);
    let s = point.s;
    let n = point.n;

    let timed = |f: &dyn Fn() -> Result<f64>, truth: f64| -> EstimateOutcome {
        let start = opts.measure_runtime.then(Instant::now);
        let value = f();
        let seconds = start.map_or(0.0, |t| t.elapsed().as_secs_f64());
        EstimateOutcome { error: value.ok().map(|v| v - truth), seconds }
    };

    let results: Vec<EstimateOutcome> = match spec.kind {
        ExperimentKind::Entropy | ExperimentKind::PowerSum => {
            let dist = match spec.dist {
                DistKind::Uniform => DiscreteDistribution::uniform(s as usize)?,
                DistKind::Zipf(a) => DiscreteDistribution::zipf(s as usize, a)?,
                DistKind::BetaRandom(a, b) => {
                    DiscreteDistribution::beta_random(s as usize, a, b, &mut rng)?
                }
            };
            let h = sample_multinomial(&dist, n, &mut rng);
            match spec.kind {
                ExperimentKind::Entropy => {
                    let truth = dist.entropy();
                    spec.estimators
                        .iter()
                        .map(|&id| timed(&|| entropy_estimate(id, &h, s), truth))
                        .collect()
                }
                _ => {
                    let alpha = spec.alpha.expect("validated");
                    let truth = dist.power_sum(alpha)?;
                    spec.estimators
                        .iter()
                        .map(|&id| {
                            timed(
                                &|| match id {
                                    EstimatorId::Jvhw => estimate_falpha(&h, alpha),
                                    _ => plugin_power_sum(&h, alpha),
                                },
                                truth,
                            )
                        })
                        .collect()
                }
            }
        }
        ExperimentKind::MutualInformation => {
            let (pairs, truth) = mi_channel_dataset(s as usize, n as usize, &mut rng)?;
            let ph = PairHistogram::from_samples(&pairs);
            spec.estimators
                .iter()
                .map(|&id| timed(&|| estimate_mi(&ph, paired_entropy(id)), truth))
                .collect()
        }
        ExperimentKind::EntropyRate => {
            let (seq, truth) =
                additive_markov_sequence(s as usize, spec.depth, n as usize, &mut rng)?;
            spec.estimators
                .iter()
                .map(|&id| {
                    timed(&|| estimate_entropy_rate(&seq, spec.depth, paired_entropy(id)), truth)
                })
                .collect()
        }
        ExperimentKind::ChowLiu => {
            let (rows, truth_tree) =
                star_tree_dataset(spec.vars, s as usize, n as usize, &mut rng)?;
            spec.estimators
                .iter()
                .map(|&id| {
                    timed(
                        &|| {
                            let tree = chow_liu(&rows, mi_from_entropy(paired_entropy(id)))?;
                            wrong_edges_ratio(&tree, &truth_tree)
                        },
                        0.0,
                    )
                })
                .collect()
        }
    };
    Ok(TrialOutcome { point: point_idx, trial, results })
}

/// Entropy estimate for a sweep where the true support size is known.
fn entropy_estimate(id: EstimatorId, h: &Histogram, s: u64) -> Result<f64> {
    match id {
        EstimatorId::Jvhw => estimate_entropy(h),
        EstimatorId::Mle => mle_entropy(h),
        EstimatorId::MillerMadow => miller_madow_entropy(h, SupportHint::Known(s)),
        EstimatorId::Jackknife => jackknife_entropy(h),
        EstimatorId::Cae => cae_entropy(h),
        EstimatorId::Grassberger => grassberger_entropy(h),
        EstimatorId::DirichletPlugin => {
            dirichlet_plugin_entropy(h, s, dirichlet_default_a(h.n(), s))
        }
        EstimatorId::DirichletBayes => {
            dirichlet_bayes_entropy(h, s, dirichlet_default_a(h.n(), s))
        }
        EstimatorId::Shrinkage => shrinkage_entropy(h, s),
    }
}

/// Entropy function used inside composite estimates (validated to be one of
/// the two paired estimators).
fn paired_entropy(id: EstimatorId) -> fn(&Histogram) -> Result<f64> {
    match id {
        EstimatorId::Jvhw => estimate_entropy,
        _ => mle_entropy,
    }
}

/// Streaming mean/variance of the signed errors; rmse² = bias² + variance by
/// construction.
fn aggregate(errors: impl Iterator<Item = f64>) -> (u32, f64, f64, f64) {
    let mut count = 0u32;
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for e in errors {
        count += 1;
        let d = e - mean;
        mean += d / count as f64;
        m2 += d * (e - mean);
    }
    if count == 0 {
        return (0, f64::NAN, f64::NAN, f64::NAN);
    }
    let variance = m2 / count as f64;
    (count, mean, variance, (mean * mean + variance).sqrt())
}

/// CSV header used by [`csv_string`].
pub const CSV_HEADER: &str = "experiment,S,n,estimator,trials,rmse,bias,variance,runtime_s";

/// Serializes rows as CSV. All floating-point fields use scientific notation
/// with six fractional digits, so equal runs serialize identically.
pub fn csv_string(rows: &[ResultRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{:.6e},{:.6e},{:.6e},{:.6e}",
            r.experiment,
            r.s,
            r.n,
            r.estimator.name(),
            r.trials,
            r.rmse,
            r.bias,
            r.variance,
            r.runtime_s
        )
        .expect("string formatting cannot fail");
    }
    out
}

// ---------------------------------------------------------------------------
// Configuration parsing
// ---------------------------------------------------------------------------

/// Parses a flat `key = value` configuration (see the module docs for the
/// grammar) into a validated [`ExperimentSpec`].
pub fn parse_config(text: &str) -> Result<ExperimentSpec> {
    let mut kind: Option<(ExperimentKind, usize)> = None;
    let mut name: Option<String> = None;
    let mut dist_token: Option<(String, usize)> = None;
    let mut zipf_alpha: Option<(f64, usize)> = None;
    let mut dist_a: Option<(f64, usize)> = None;
    let mut dist_b: Option<(f64, usize)> = None;
    let mut alpha: Option<f64> = None;
    let mut s_grid: Option<(Vec<u64>, usize)> = None;
    let mut n_rule: Option<(NRule, usize)> = None;
    let mut estimators: Option<Vec<EstimatorId>> = None;
    let mut trials: Option<u32> = None;
    let mut seed: Option<u64> = None;
    let mut depth: Option<usize> = None;
    let mut vars: Option<usize> = None;

    let mut seen: Vec<String> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| Error::Config {
            line,
            message: format!("expected 'key = value', got '{content}'"),
        })?;
        let key = key.trim();
        let value = value.trim();
        if value.is_empty() {
            return Err(Error::Config { line, message: format!("key '{key}' has no value") });
        }
        if seen.iter().any(|k| k == key) {
            return Err(Error::Config { line, message: format!("duplicate key '{key}'") });
        }
        seen.push(key.to_string());
        match key {
            "experiment" => {
                let k = match value {
                    "entropy" => ExperimentKind::Entropy,
                    "falpha" => ExperimentKind::PowerSum,
                    "mi" => ExperimentKind::MutualInformation,
                    "rate" => ExperimentKind::EntropyRate,
                    "chowliu" => ExperimentKind::ChowLiu,
                    other => {
                        return Err(Error::Config {
                            line,
                            message: format!(
                                "unknown experiment '{other}' (expected entropy, falpha, mi, \
                                 rate or chowliu)"
                            ),
                        })
                    }
                };
                kind = Some((k, line));
            }
            "name" => name = Some(value.to_string()),
            "dist" => dist_token = Some((value.to_string(), line)),
            "zipf_alpha" => zipf_alpha = Some((parse_num(value, line)?, line)),
            "dist_a" => dist_a = Some((parse_num(value, line)?, line)),
            "dist_b" => dist_b = Some((parse_num(value, line)?, line)),
            "alpha" => alpha = Some(parse_num(value, line)?),
            "S_grid" => s_grid = Some((parse_s_grid(value, line)?, line)),
            "n_rule" => n_rule = Some((parse_n_rule(value, line)?, line)),
            "estimators" => {
                let parsed: Result<Vec<EstimatorId>> = value
                    .split(',')
                    .map(|t| EstimatorId::parse(t.trim()))
                    .collect();
                estimators = Some(parsed.map_err(|e| Error::Config {
                    line,
                    message: e.to_string(),
                })?);
            }
            "trials" => trials = Some(parse_int(value, line)? as u32),
            "seed" => seed = Some(parse_int(value, line)?),
            "depth" => depth = Some(parse_int(value, line)? as usize),
            "vars" => vars = Some(parse_int(value, line)? as usize),
            other => {
                return Err(Error::Config {
                    line,
                    message: format!("unknown key '{other}'"),
                })
            }
        }
    }

    let (kind, _) = kind.ok_or_else(|| Error::Config {
        line: 0,
        message: "missing required key 'experiment'".into(),
    })?;
    let needs_dist =
        matches!(kind, ExperimentKind::Entropy | ExperimentKind::PowerSum);
    let dist = match (&dist_token, needs_dist) {
        (Some((_, line)), false) => {
            return Err(Error::Config {
                line: *line,
                message: format!(
                    "'dist' does not apply to {} experiments (their distributions are drawn \
                     internally)",
                    kind.token()
                ),
            })
        }
        (tok, true) => {
            let tok_str = tok.as_ref().map_or("uniform", |(t, _)| t.as_str());
            let tok_line = tok.as_ref().map_or(0, |(_, l)| *l);
            match tok_str {
                "uniform" => DistKind::Uniform,
                "zipf" => DistKind::Zipf(zipf_alpha.map_or(1.0, |(v, _)| v)),
                "beta" => DistKind::BetaRandom(
                    dist_a.map_or(0.6, |(v, _)| v),
                    dist_b.map_or(0.5, |(v, _)| v),
                ),
                other => {
                    return Err(Error::Config {
                        line: tok_line,
                        message: format!(
                            "unknown dist '{other}' (expected uniform, zipf or beta)"
                        ),
                    })
                }
            }
        }
        (None, false) => DistKind::Uniform, // placeholder, unused by these kinds
    };
    let is = |t: &Option<(String, usize)>, want: &str| {
        t.as_ref().is_some_and(|(v, _)| v == want)
    };
    if let Some((_, line)) = zipf_alpha {
        if !is(&dist_token, "zipf") {
            return Err(Error::Config {
                line,
                message: "'zipf_alpha' requires dist = zipf".into(),
            });
        }
    }
    if let Some((_, line)) = dist_a.or(dist_b) {
        if !is(&dist_token, "beta") {
            return Err(Error::Config {
                line,
                message: "'dist_a'/'dist_b' require dist = beta".into(),
            });
        }
    }

    let (s_values, s_line) = s_grid.ok_or_else(|| Error::Config {
        line: 0,
        message: "missing required key 'S_grid'".into(),
    })?;
    let (rule, rule_line) = n_rule.ok_or_else(|| Error::Config {
        line: 0,
        message: "missing required key 'n_rule'".into(),
    })?;
    let depth_val = depth.unwrap_or(1);
    let grid = build_grid(&s_values, &rule, depth_val, s_line.max(rule_line))?;

    let spec = ExperimentSpec {
        name: name.unwrap_or_else(|| kind.token().to_string()),
        kind,
        dist,
        alpha,
        grid,
        estimators: estimators.ok_or_else(|| Error::Config {
            line: 0,
            message: "missing required key 'estimators'".into(),
        })?,
        trials: trials.ok_or_else(|| Error::Config {
            line: 0,
            message: "missing required key 'trials'".into(),
        })?,
        seed: seed.unwrap_or(0),
        depth: depth_val,
        vars: vars.unwrap_or(5),
    };
    spec.validate()?;
    Ok(spec)
}

#[derive(Clone, Debug)]
enum NRule {
    Fixed(u64),
    /// `n = ceil(c · S / ln S)`.
    OverLog(f64),
    /// `n = ceil(c · S)`.
    Linear(f64),
    /// `n = ceil(c · S^{depth+1} / ln S^{depth+1})`: scaling for estimates on
    /// tuple alphabets of that order.
    TupleLog(f64),
    /// Explicit list of n values.
    Grid(Vec<u64>),
}

fn parse_num(value: &str, line: usize) -> Result<f64> {
    let v: f64 = value.parse().map_err(|_| Error::Config {
        line,
        message: format!("expected a number, got '{value}'"),
    })?;
    if !v.is_finite() {
        return Err(Error::Config { line, message: format!("number '{value}' is not finite") });
    }
    Ok(v)
}

fn parse_int(value: &str, line: usize) -> Result<u64> {
    value.parse().map_err(|_| Error::Config {
        line,
        message: format!("expected an integer, got '{value}'"),
    })
}

fn parse_int_list(value: &str, line: usize) -> Result<Vec<u64>> {
    value.split(',').map(|t| parse_int(t.trim(), line)).collect()
}

fn parse_s_grid(value: &str, line: usize) -> Result<Vec<u64>> {
    if let Some(rest) = value.strip_prefix("logspace:") {
        let parts: Vec<&str> = rest.split(',').collect();
        if parts.len() != 3 {
            return Err(Error::Config {
                line,
                message: format!("logspace needs 'lo,hi,count', got '{rest}'"),
            });
        }
        let lo = parse_int(parts[0].trim(), line)?;
        let hi = parse_int(parts[1].trim(), line)?;
        let count = parse_int(parts[2].trim(), line)? as usize;
        if lo < 2 || hi < lo || count == 0 {
            return Err(Error::Config {
                line,
                message: format!("invalid logspace range {lo}..{hi} with {count} points"),
            });
        }
        if count == 1 {
            return Ok(vec![lo]);
        }
        let (llo, lhi) = ((lo as f64).ln(), (hi as f64).ln());
        let mut values: Vec<u64> = (0..count)
            .map(|i| {
                let t = i as f64 / (count - 1) as f64;
                (llo + t * (lhi - llo)).exp().round() as u64
            })
            .collect();
        values.dedup();
        Ok(values)
    } else {
        parse_int_list(value, line)
    }
}

fn parse_n_rule(value: &str, line: usize) -> Result<NRule> {
    let (head, rest) = value.split_once(':').ok_or_else(|| Error::Config {
        line,
        message: format!("n_rule needs 'rule:args', got '{value}'"),
    })?;
    match head {
        "fixed" => Ok(NRule::Fixed(parse_int(rest.trim(), line)?)),
        "over_log" => Ok(NRule::OverLog(parse_num(rest.trim(), line)?)),
        "linear" => Ok(NRule::Linear(parse_num(rest.trim(), line)?)),
        "tuple_log" => Ok(NRule::TupleLog(parse_num(rest.trim(), line)?)),
        "grid" => Ok(NRule::Grid(parse_int_list(rest, line)?)),
        other => Err(Error::Config {
            line,
            message: format!(
                "unknown n_rule '{other}' (expected fixed, over_log, linear, tuple_log or grid)"
            ),
        }),
    }
}

fn build_grid(s_values: &[u64], rule: &NRule, depth: usize, line: usize) -> Result<Vec<GridPoint>> {
    if s_values.is_empty() {
        return Err(Error::Config { line, message: "S_grid is empty".into() });
    }
    match rule {
        NRule::Grid(ns) => {
            if s_values.len() == 1 {
                Ok(ns.iter().map(|&n| GridPoint { s: s_values[0], n }).collect())
            } else if ns.len() == s_values.len() {
                Ok(s_values
                    .iter()
                    .zip(ns)
                    .map(|(&s, &n)| GridPoint { s, n })
                    .collect())
            } else {
                Err(Error::Config {
                    line,
                    message: format!(
                        "n_rule grid has {} values but S_grid has {}",
                        ns.len(),
                        s_values.len()
                    ),
                })
            }
        }
        _ => s_values
            .iter()
            .map(|&s| {
                let sf = s as f64;
                let n = match rule {
                    NRule::Fixed(n) => *n as f64,
                    NRule::OverLog(c) => (c * sf / sf.ln()).ceil(),
                    NRule::Linear(c) => (c * sf).ceil(),
                    NRule::TupleLog(c) => {
                        let m = sf.powi(depth as i32 + 1);
                        (c * m / m.ln()).ceil()
                    }
                    NRule::Grid(_) => unreachable!(),
                };
                if !(n >= 2.0 && n < u64::MAX as f64) {
                    return Err(Error::Config {
                        line,
                        message: format!("n rule gives invalid sample size {n} at S = {s}"),
                    });
                }
                Ok(GridPoint { s, n: n as u64 })
            })
            .collect(),
    }
}

// ---------------------------------------------------------------------------
// Plotting
// ---------------------------------------------------------------------------

const PALETTE: [&str; 9] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f",
    "#17becf",
];

/// Renders RMSE curves (one polyline per estimator) as a standalone SVG
/// document. The x axis is the sample size when all rows share one support
/// size, otherwise the support size; it is drawn on a log scale.
pub fn plot_svg(rows: &[ResultRow]) -> Result<String> {
    if rows.is_empty() {
        return Err(Error::InvalidInput("no rows to plot".into()));
    }
    let single_s = rows.iter().all(|r| r.s == rows[0].s);
    let x_of = |r: &ResultRow| if single_s { r.n as f64 } else { r.s as f64 };
    let x_label = if single_s { "n" } else { "S" };

    let mut estimators: Vec<EstimatorId> = Vec::new();
    for r in rows {
        if !estimators.contains(&r.estimator) {
            estimators.push(r.estimator);
        }
    }
    let finite: Vec<&ResultRow> = rows.iter().filter(|r| r.rmse.is_finite()).collect();
    if finite.is_empty() {
        return Err(Error::InvalidInput("all rows have undefined rmse".into()));
    }
    let (mut lx_min, mut lx_max) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut y_max = 0.0f64;
    for r in &finite {
        let lx = x_of(r).log10();
        lx_min = lx_min.min(lx);
        lx_max = lx_max.max(lx);
        y_max = y_max.max(r.rmse);
    }
    if lx_max - lx_min < 1e-12 {
        lx_min -= 0.5;
        lx_max += 0.5;
    }
    y_max = (y_max * 1.05).max(1e-12);

    let (width, height) = (720.0, 480.0);
    let (left, right, top, bottom) = (70.0, 170.0, 40.0, 60.0);
    let (pw, ph) = (width - left - right, height - top - bottom);
    let px = |x: f64| left + (x.log10() - lx_min) / (lx_max - lx_min) * pw;
    let py = |y: f64| top + (1.0 - y / y_max) * ph;

    let mut svg = String::new();
    let _ = write!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\" font-family=\"sans-serif\" font-size=\"12\">\n"
    );
    let _ = write!(svg, "<rect width=\"{width}\" height=\"{height}\" fill=\"white\"/>\n");
    let title = xml_escape(&rows[0].experiment);
    let _ = write!(
        svg,
        "<text x=\"{:.1}\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">{title}</text>\n",
        left + pw / 2.0
    );
    // Axes.
    let _ = write!(
        svg,
        "<line x1=\"{left}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"black\"/>\n",
        top + ph,
        left + pw,
        top + ph
    );
    let _ = write!(
        svg,
        "<line x1=\"{left}\" y1=\"{top}\" x2=\"{left}\" y2=\"{:.1}\" stroke=\"black\"/>\n",
        top + ph
    );
    // X ticks at the distinct data values (subsampled to at most 7).
    let mut xs: Vec<f64> = finite.iter().map(|r| x_of(r)).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let step = xs.len().div_ceil(7).max(1);
    for x in xs.iter().step_by(step) {
        let cx = px(*x);
        let _ = write!(
            svg,
            "<line x1=\"{cx:.1}\" y1=\"{:.1}\" x2=\"{cx:.1}\" y2=\"{:.1}\" stroke=\"black\"/>\n\
             <text x=\"{cx:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{x:.0}</text>\n",
            top + ph,
            top + ph + 5.0,
            top + ph + 20.0
        );
    }
    let _ = write!(
        svg,
        "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{x_label} (log scale)</text>\n",
        left + pw / 2.0,
        height - 15.0
    );
    // Y ticks.
    for i in 0..=4 {
        let y = y_max * i as f64 / 4.0;
        let cy = py(y);
        let _ = write!(
            svg,
            "<line x1=\"{:.1}\" y1=\"{cy:.1}\" x2=\"{left}\" y2=\"{cy:.1}\" stroke=\"black\"/>\n\
             <text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\">{y:.3}</text>\n",
            left - 5.0,
            left - 8.0,
            cy + 4.0
        );
    }
    let _ = write!(
        svg,
        "<text x=\"18\" y=\"{:.1}\" transform=\"rotate(-90 18 {:.1})\" \
         text-anchor=\"middle\">rmse</text>\n",
        top + ph / 2.0,
        top + ph / 2.0
    );
    // One polyline (plus markers) per estimator.
    for (ei, &est) in estimators.iter().enumerate() {
        let color = PALETTE[ei % PALETTE.len()];
        let mut pts: Vec<(f64, f64)> = finite
            .iter()
            .filter(|r| r.estimator == est)
            .map(|r| (x_of(r), r.rmse))
            .collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        if !pts.is_empty() {
            let coords: Vec<String> = pts
                .iter()
                .map(|&(x, y)| format!("{:.1},{:.1}", px(x), py(y)))
                .collect();
            let _ = write!(
                svg,
                "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" \
                 stroke-width=\"1.5\"/>\n",
                coords.join(" ")
            );
            for &(x, y) in &pts {
                let _ = write!(
                    svg,
                    "<circle cx=\"{:.1}\" cy=\"{:.1}\" r=\"2.5\" fill=\"{color}\"/>\n",
                    px(x),
                    py(y)
                );
            }
        }
        // Legend entry.
        let ly = top + 10.0 + 18.0 * ei as f64;
        let _ = write!(
            svg,
            "<line x1=\"{:.1}\" y1=\"{ly:.1}\" x2=\"{:.1}\" y2=\"{ly:.1}\" stroke=\"{color}\" \
             stroke-width=\"2\"/>\n<text x=\"{:.1}\" y=\"{:.1}\">{}</text>\n",
            left + pw + 15.0,
            left + pw + 40.0,
            left + pw + 46.0,
            ly + 4.0,
            est.name()
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
