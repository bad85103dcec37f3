//! Synthetic distributions, samplers, and benchmark datasets with known
//! ground truth.
//!
//! Everything here is driven by explicit seeded generators so that a
//! benchmark run is reproducible bit-for-bit: [`SeededRng`] derives an
//! independent named stream per (seed, stream id) pair, and all sampling
//! routines take the stream by mutable reference.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Distribution, Poisson};

use crate::graphical::TreeModel;
use crate::{Error, Histogram, Result};

/// A probability vector over symbols `0..support`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteDistribution {
    probs: Vec<f64>,
}

impl DiscreteDistribution {
    /// Validates and renormalizes a probability vector: entries must be
    /// finite and nonnegative, and the sum must be within `1e−9` of 1 (it is
    /// then rescaled to sum to exactly 1 in floating point).
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidInput("probability vector is empty".into()));
        }
        if let Some(&bad) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(Error::InvalidInput(format!("invalid probability {bad}")));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidInput(format!(
                "probabilities sum to {sum}, expected 1"
            )));
        }
        Ok(Self { probs: probs.into_iter().map(|p| p / sum).collect() })
    }

    /// Uniform over `s` symbols.
    pub fn uniform(s: usize) -> Result<Self> {
        if s == 0 {
            return Err(Error::InvalidInput("support must be nonempty".into()));
        }
        Ok(Self { probs: vec![1.0 / s as f64; s] })
    }

    /// Zipf law `p_i ∝ (i + 1)^{−alpha}` over ranks `1..=s`. `alpha = 0`
    /// recovers the uniform distribution.
    pub fn zipf(s: usize, alpha: f64) -> Result<Self> {
        if s == 0 {
            return Err(Error::InvalidInput("support must be nonempty".into()));
        }
        if !alpha.is_finite() || alpha < 0.0 {
            return Err(Error::InvalidInput(format!(
                "zipf exponent must be a nonnegative finite number, got {alpha}"
            )));
        }
        let mut probs: Vec<f64> = (1..=s).map(|rank| (rank as f64).powf(-alpha)).collect();
        let z: f64 = probs.iter().sum();
        for p in &mut probs {
            *p /= z;
        }
        Ok(Self { probs })
    }

    /// Random distribution with i.i.d. `Beta(a, b)` entries, normalized.
    pub fn beta_random(s: usize, a: f64, b: f64, rng: &mut impl Rng) -> Result<Self> {
        if s == 0 {
            return Err(Error::InvalidInput("support must be nonempty".into()));
        }
        let beta = Beta::new(a, b).map_err(|e| {
            Error::InvalidInput(format!("invalid beta parameters ({a}, {b}): {e}"))
        })?;
        let mut probs: Vec<f64> = (0..s).map(|_| beta.sample(rng)).collect();
        let z: f64 = probs.iter().sum();
        if z <= 0.0 {
            return Err(Error::InvalidInput("drawn weights sum to zero".into()));
        }
        for p in &mut probs {
            *p /= z;
        }
        Ok(Self { probs })
    }

    /// The probability vector.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Support size (including any zero-probability symbols).
    pub fn support(&self) -> usize {
        self.probs.len()
    }

    /// Exact Shannon entropy `Σ −p ln p` in nats.
    pub fn entropy(&self) -> f64 {
        self.probs
            .iter()
            .filter(|&&p| p > 0.0)
            .map(|&p| -p * p.ln())
            .sum()
    }

    /// Exact power sum `Σ p^alpha` for `alpha > 0`.
    pub fn power_sum(&self, alpha: f64) -> Result<f64> {
        if !alpha.is_finite() || alpha <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "power-sum order must be positive, got {alpha}"
            )));
        }
        Ok(self.probs.iter().map(|&p| p.powf(alpha)).sum())
    }

    /// Cumulative sums for inverse-CDF sampling.
    fn cdf(&self) -> Vec<f64> {
        let mut acc = 0.0;
        self.probs
            .iter()
            .map(|&p| {
                acc += p;
                acc
            })
            .collect()
    }
}

/// Draws one symbol by binary-searching the CDF at a uniform variate.
fn draw(cdf: &[f64], rng: &mut impl Rng) -> u64 {
    let u: f64 = rng.random();
    let idx = cdf.partition_point(|&c| c <= u);
    idx.min(cdf.len() - 1) as u64
}

/// Exact mutual information of a joint probability matrix (rows: x, columns:
/// y), in nats. The matrix must be rectangular, nonnegative, and sum to 1
/// within `1e−9`.
pub fn true_mi(joint: &[Vec<f64>]) -> Result<f64> {
    let rows = joint.len();
    let cols = joint.first().map_or(0, |r| r.len());
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidInput("joint matrix is empty".into()));
    }
    if joint.iter().any(|r| r.len() != cols) {
        return Err(Error::InvalidInput("joint matrix is ragged".into()));
    }
    let mut total = 0.0;
    for row in joint {
        for &p in row {
            if !p.is_finite() || p < 0.0 {
                return Err(Error::InvalidInput(format!("invalid joint probability {p}")));
            }
            total += p;
        }
    }
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidInput(format!(
            "joint probabilities sum to {total}, expected 1"
        )));
    }
    let px: Vec<f64> = joint.iter().map(|r| r.iter().sum()).collect();
    let mut py = vec![0.0; cols];
    for row in joint {
        for (j, &p) in row.iter().enumerate() {
            py[j] += p;
        }
    }
    let mut mi = 0.0;
    for (i, row) in joint.iter().enumerate() {
        for (j, &p) in row.iter().enumerate() {
            if p > 0.0 {
                mi += p * (p / (px[i] * py[j])).ln();
            }
        }
    }
    Ok(mi)
}

/// Root seed from which independent, reproducible random streams are derived
/// by stream id.
#[derive(Clone, Copy, Debug)]
pub struct SeededRng {
    seed: u64,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    /// The generator for a named stream. Streams with different ids are
    /// statistically independent; the same (seed, id) pair always yields the
    /// same draws.
    pub fn stream(&self, id: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(id);
        rng
    }
}

/// `n` i.i.d. draws from the distribution, in draw order.
pub fn sample_sequence(dist: &DiscreteDistribution, n: u64, rng: &mut impl Rng) -> Vec<u64> {
    let cdf = dist.cdf();
    (0..n).map(|_| draw(&cdf, rng)).collect()
}

/// `n` i.i.d. draws from the distribution, tallied into a histogram with
/// symbol ids `0..support`.
pub fn sample_multinomial(
    dist: &DiscreteDistribution,
    n: u64,
    rng: &mut impl Rng,
) -> Histogram {
    let cdf = dist.cdf();
    let mut counts = vec![0u64; dist.support()];
    for _ in 0..n {
        counts[draw(&cdf, rng) as usize] += 1;
    }
    Histogram::from_counts(counts.into_iter().enumerate().map(|(i, c)| (i as u64, c)))
        .expect("counts sum to n")
}

/// Independent `Poisson(n · p_i)` draws per symbol; the total is random with
/// mean `n`. Zero-probability symbols are skipped.
pub fn sample_poissonized(
    dist: &DiscreteDistribution,
    n: u64,
    rng: &mut impl Rng,
) -> Histogram {
    let mut counts: Vec<(u64, u64)> = Vec::new();
    for (i, &p) in dist.probs().iter().enumerate() {
        if p <= 0.0 {
            continue;
        }
        let poisson = Poisson::new(n as f64 * p).expect("positive mean");
        let c = poisson.sample(rng) as u64;
        if c > 0 {
            counts.push((i as u64, c));
        }
    }
    Histogram::from_counts(counts).expect("finite draws")
}

/// I.i.d. rows from a star-shaped tree model: the hub variable 0 has a random
/// `Beta(1/2, 1/2)` marginal over `s` symbols, and each leaf is drawn from a
/// random conditional row given the hub value. Returns the dataset (row-major,
/// `n × d`) and the true structure.
pub fn star_tree_dataset(
    d: usize,
    s: usize,
    n: usize,
    rng: &mut impl Rng,
) -> Result<(Vec<Vec<u64>>, TreeModel)> {
    if d < 2 {
        return Err(Error::InvalidInput("star dataset needs at least 2 variables".into()));
    }
    if s < 2 {
        return Err(Error::InvalidInput("star dataset needs at least 2 symbols".into()));
    }
    if n == 0 {
        return Err(Error::InvalidInput("star dataset needs at least 1 row".into()));
    }
    let hub_cdf = DiscreteDistribution::beta_random(s, 0.5, 0.5, rng)?.cdf();
    // conditionals[k][v] is the CDF of leaf k+1 given hub value v.
    let mut conditionals: Vec<Vec<Vec<f64>>> = Vec::with_capacity(d - 1);
    for _ in 1..d {
        let rows: Result<Vec<Vec<f64>>> = (0..s)
            .map(|_| Ok(DiscreteDistribution::beta_random(s, 0.5, 0.5, rng)?.cdf()))
            .collect();
        conditionals.push(rows?);
    }
    let mut data = Vec::with_capacity(n);
    for _ in 0..n {
        let mut row = Vec::with_capacity(d);
        let hub = draw(&hub_cdf, rng);
        row.push(hub);
        for cond in &conditionals {
            row.push(draw(&cond[hub as usize], rng));
        }
        data.push(row);
    }
    Ok((data, TreeModel::star(d)?))
}

/// A length-`n` trajectory of the additive-noise Markov chain
/// `X_k = (Z_k + X_{k−depth} + … + X_{k−1}) mod s` with i.i.d. innovations
/// `Z_k` from a random `Beta(0.6, 0.5)` distribution (the first `depth`
/// symbols are the raw innovations). Because the innovation enters by a
/// modular shift, the exact entropy rate is the innovation entropy, returned
/// as ground truth.
pub fn additive_markov_sequence(
    s: usize,
    depth: usize,
    n: usize,
    rng: &mut impl Rng,
) -> Result<(Vec<u64>, f64)> {
    if s < 2 {
        return Err(Error::InvalidInput("chain needs at least 2 symbols".into()));
    }
    if n < depth + 2 {
        return Err(Error::InvalidInput(format!(
            "trajectory of length {n} is too short for depth {depth}"
        )));
    }
    let innovations = DiscreteDistribution::beta_random(s, 0.6, 0.5, rng)?;
    let cdf = innovations.cdf();
    let mut seq: Vec<u64> = Vec::with_capacity(n);
    for k in 0..n {
        let z = draw(&cdf, rng);
        let x = if k < depth {
            z
        } else {
            let context: u64 = seq[k - depth..k].iter().sum();
            (z + context) % s as u64
        };
        seq.push(x);
    }
    Ok((seq, innovations.entropy()))
}

/// `n` pairs through the modular additive channel `Y = (X + Z) mod s` with
/// `X` and `Z` drawn from independent random `Beta(0.6, 0.5)` distributions.
/// Returns the samples and the exact `I(X; Y) = H(Y) − H(Z)`.
pub fn mi_channel_dataset(
    s: usize,
    n: usize,
    rng: &mut impl Rng,
) -> Result<(Vec<(u64, u64)>, f64)> {
    if s < 2 {
        return Err(Error::InvalidInput("channel needs at least 2 symbols".into()));
    }
    if n == 0 {
        return Err(Error::InvalidInput("channel dataset needs at least 1 pair".into()));
    }
    let px = DiscreteDistribution::beta_random(s, 0.6, 0.5, rng)?;
    let pz = DiscreteDistribution::beta_random(s, 0.6, 0.5, rng)?;
    // Output law is the circular convolution of the input and noise laws.
    let mut py = vec![0.0; s];
    for (i, &a) in px.probs().iter().enumerate() {
        for (k, &b) in pz.probs().iter().enumerate() {
            py[(i + k) % s] += a * b;
        }
    }
    let truth = DiscreteDistribution::new(py)?.entropy() - pz.entropy();
    let x_cdf = px.cdf();
    let z_cdf = pz.cdf();
    let mut pairs = Vec::with_capacity(n);
    for _ in 0..n {
        let x = draw(&x_cdf, rng);
        let z = draw(&z_cdf, rng);
        pairs.push((x, (x + z) % s as u64));
    }
    Ok((pairs, truth))
}
