//! Two-regime estimators of entropy, power sums, and Rényi entropy.
//!
//! Each observed symbol is routed by its empirical frequency `p̂`:
//!
//! * `p̂ ≤ 2Δ` (**nonsmooth regime**, `Δ = c₁ ln n / n`): the per-symbol
//!   functional is estimated by evaluating the best degree-`K` polynomial
//!   approximation of the target on `[0, 4Δ]` — not at `p̂` directly, but
//!   through falling-factorial products `Π_{r<k}(p̂ − r/n)`, which are unbiased
//!   for `p^k` under Poisson sampling. The value is capped at 1.
//! * `p̂ > 2Δ` (**smooth regime**): a bias-corrected plug-in, ramped in by a
//!   four-times continuously differentiable interpolation window so the
//!   estimate stays smooth across the regime boundary.
//!
//! The degree grows as `K = ⌈c₂ ln n⌉`, which is what buys the `ln n` factor
//! of effective sample size over the plain plug-in.
//!
//! Optional sample splitting (`split = true`) halves the data, classifying
//! each symbol's regime with one half and estimating with the other, exactly
//! as the risk analysis assumes; it is off by default because using the full
//! sample for both roles is empirically better.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::approx::{cached_approx, window_coeffs, ApproxTarget, WindowedCoeffs};
use crate::{Error, Histogram, Result};

/// Floor applied to the power-sum estimate inside the Rényi logarithm.
pub const RENYI_FLOOR: f64 = 1e-12;

/// Tuning constants of the two-regime construction.
///
/// The default `c1 = 0.2` sits at the top of the effective range `[0.05,
/// 0.2]`: the regime boundary `2Δn = 2·c1·ln n` then clears the bulk of the
/// small counts at data-sparse sample sizes. Smaller values route counts of 2
/// and 3 through the plug-in branch, whose relative bias at such counts is
/// large enough to dominate the total error.
#[derive(Clone, Debug)]
pub struct EstimatorConfig {
    /// Regime threshold scale: `Δ = c1 · ln n / n`.
    pub c1: f64,
    /// Approximation degree scale: `K = ⌈c2 · ln n⌉`.
    pub c2: f64,
    /// Split the sample, classifying regimes on one half and estimating on
    /// the other (the analysis model). Off by default.
    pub split: bool,
    /// Keep the constant term of the approximation polynomial. On by default:
    /// dropping it is an analysis convenience, not an empirical win.
    pub keep_constant_term: bool,
    /// Lower bound on the approximation degree.
    pub k_min: usize,
    /// Seed for the deterministic binomial thinning used by split mode.
    pub split_seed: u64,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        EstimatorConfig {
            c1: 0.2,
            c2: 0.7,
            split: false,
            keep_constant_term: true,
            k_min: 1,
            split_seed: 0,
        }
    }
}

impl EstimatorConfig {
    fn validate(&self) -> Result<()> {
        if !self.c1.is_finite() || self.c1 <= 0.0 {
            return Err(Error::InvalidInput(format!("c1 must be positive, got {}", self.c1)));
        }
        if !self.c2.is_finite() || self.c2 <= 0.0 {
            return Err(Error::InvalidInput(format!("c2 must be positive, got {}", self.c2)));
        }
        if self.k_min == 0 {
            return Err(Error::InvalidInput("k_min must be at least 1".into()));
        }
        Ok(())
    }
}

/// The derived regime quantities for a sample of (effective) size `n`.
#[derive(Clone, Copy, Debug)]
pub struct Thresholds {
    /// `Δ = c1 ln n / n`; the regime boundary is `2Δ`.
    pub delta: f64,
    /// Approximation degree `K = max(⌈c2 ln n⌉, k_min)`.
    pub degree: usize,
    /// Interpolation window onset `t = Δ/4`; the window is identically 1 from
    /// `2t` upward.
    pub t: f64,
}

/// Computes thresholds for an effective sample size `n ≥ 2` (non-integer
/// values arise under sample splitting).
pub fn thresholds(n: f64, config: &EstimatorConfig) -> Result<Thresholds> {
    config.validate()?;
    if !n.is_finite() || n < 2.0 {
        return Err(Error::InvalidInput(format!(
            "effective sample size must be at least 2, got {n}"
        )));
    }
    let delta = config.c1 * n.ln() / n;
    let degree = ((config.c2 * n.ln()).ceil() as usize).max(config.k_min);
    Ok(Thresholds { delta, degree, t: delta / 4.0 })
}

/// The smooth-regime interpolation window: 0 on `[0, t]`, 1 on `[2t, ∞)`, and
/// a fixed degree-9 polynomial ramp in between with four continuous
/// derivatives at both ends. `t` must be positive.
pub fn interp_window(x: f64, t: f64) -> f64 {
    debug_assert!(t > 0.0, "window onset must be positive");
    if x <= t {
        0.0
    } else if x >= 2.0 * t {
        1.0
    } else {
        let u = (x - t) / t;
        u.powi(5) * (126.0 + u * (-420.0 + u * (540.0 + u * (-315.0 + u * 70.0))))
    }
}

/// Evaluates the nonsmooth-regime polynomial at an observed count: with
/// `x = count/n`,
/// `g₀·1[keep] + Σ_k coeffs[k−1] · Π_{r=0}^{k−1}(x − r/n)`.
///
/// Each product term is the unbiased estimator of `p^k` under Poisson
/// sampling; the products vanish identically once `k` exceeds the count.
pub fn s_poly_eval(count: u64, n: u64, w: &WindowedCoeffs, keep_constant_term: bool) -> f64 {
    s_poly_eval_f(count as f64, n as f64, w, keep_constant_term)
}

fn s_poly_eval_f(count: f64, n: f64, w: &WindowedCoeffs, keep_constant_term: bool) -> f64 {
    let x = count / n;
    let mut acc = if keep_constant_term { w.constant } else { 0.0 };
    let mut prod = 1.0;
    for (i, &g) in w.coeffs.iter().enumerate() {
        prod *= x - i as f64 / n;
        if prod == 0.0 {
            break;
        }
        acc += g * prod;
    }
    acc
}

/// Per-estimate bookkeeping: regime occupancy and applied safeguards.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Diagnostics {
    /// Symbols handled by the polynomial (nonsmooth) branch.
    pub nonsmooth_symbols: u64,
    /// Symbols handled by the bias-corrected plug-in (smooth) branch.
    pub smooth_symbols: u64,
    /// Nonsmooth symbols whose polynomial value exceeded 1 and was capped.
    pub capped_symbols: u64,
    /// True when the Rényi power sum was clamped to [`RENYI_FLOOR`].
    pub clamped_power_sum: bool,
    /// Approximation degree used.
    pub degree: usize,
    /// Threshold `Δ` used.
    pub delta: f64,
}

/// Two-regime entropy estimate, in nats, with default settings.
pub fn estimate_entropy(h: &Histogram) -> Result<f64> {
    estimate_entropy_with(h, &EstimatorConfig::default()).map(|(v, _)| v)
}

/// [`estimate_entropy`] with diagnostics.
pub fn estimate_entropy_with(
    h: &Histogram,
    config: &EstimatorConfig,
) -> Result<(f64, Diagnostics)> {
    two_regime_sum(h, config, Target::Entropy)
}

/// Two-regime power-sum estimate of `F_α = Σ p_i^α`, for `α > 0`, `α ≠ 1`,
/// with default settings.
pub fn estimate_falpha(h: &Histogram, alpha: f64) -> Result<f64> {
    estimate_falpha_with(h, alpha, &EstimatorConfig::default()).map(|(v, _)| v)
}

/// [`estimate_falpha`] with diagnostics.
pub fn estimate_falpha_with(
    h: &Histogram,
    alpha: f64,
    config: &EstimatorConfig,
) -> Result<(f64, Diagnostics)> {
    validate_order(alpha)?;
    two_regime_sum(h, config, Target::Power(alpha))
}

/// Rényi entropy estimate `ln(max(F̂_α, floor)) / (1 − α)`, for `α > 0`,
/// `α ≠ 1`, with default settings.
pub fn estimate_renyi(h: &Histogram, alpha: f64) -> Result<f64> {
    estimate_renyi_with(h, alpha, &EstimatorConfig::default()).map(|(v, _)| v)
}

/// [`estimate_renyi`] with diagnostics; `clamped_power_sum` records whether
/// the floor was applied.
pub fn estimate_renyi_with(
    h: &Histogram,
    alpha: f64,
    config: &EstimatorConfig,
) -> Result<(f64, Diagnostics)> {
    let (f, mut diag) = estimate_falpha_with(h, alpha, config)?;
    diag.clamped_power_sum = f < RENYI_FLOOR;
    Ok((f.max(RENYI_FLOOR).ln() / (1.0 - alpha), diag))
}

#[derive(Clone, Copy)]
enum Target {
    Entropy,
    Power(f64),
}

impl Target {
    fn approx_target(self) -> ApproxTarget {
        match self {
            Target::Entropy => ApproxTarget::NegXLogX,
            Target::Power(a) => ApproxTarget::PowerAlpha(a),
        }
    }
}

fn validate_order(alpha: f64) -> Result<()> {
    if !alpha.is_finite() || alpha <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "power-sum order must be positive, got {alpha}"
        )));
    }
    if alpha == 1.0 {
        return Err(Error::InvalidInput(
            "power-sum order 1 is the normalization Σp_i = 1; use the entropy estimator instead"
                .into(),
        ));
    }
    Ok(())
}

fn two_regime_sum(
    h: &Histogram,
    config: &EstimatorConfig,
    target: Target,
) -> Result<(f64, Diagnostics)> {
    config.validate()?;
    if h.n() < 2 {
        return Err(Error::InvalidInput(format!(
            "need at least 2 observations, got {}",
            h.n()
        )));
    }

    // (estimation count, classification count) per symbol. Without splitting
    // both are the full count; with splitting each symbol's count is thinned
    // Binomial(count, 1/2), deterministically from the seed and in sorted
    // count order so that the result depends only on the count multiset.
    let (pairs, n_eff): (Vec<(f64, f64)>, f64) = if config.split {
        let mut rng = ChaCha8Rng::seed_from_u64(config.split_seed);
        let pairs = h
            .sorted_counts_desc()
            .into_iter()
            .map(|c| {
                let x = Binomial::new(c, 0.5)
                    .expect("0.5 is a valid binomial probability")
                    .sample(&mut rng);
                (x as f64, (c - x) as f64)
            })
            .collect();
        (pairs, h.n() as f64 / 2.0)
    } else {
        // Sorted order here too: floating-point addition is order-sensitive,
        // and summing in a canonical order makes the estimate bit-for-bit
        // invariant under relabeling.
        (
            h.sorted_counts_desc()
                .into_iter()
                .map(|c| (c as f64, c as f64))
                .collect(),
            h.n() as f64,
        )
    };

    let th = thresholds(n_eff, config)?;
    let at = target.approx_target();
    let approx = cached_approx(at, th.degree)?;
    let w = window_coeffs(&approx, at, th.delta)?;

    let mut diag = Diagnostics {
        degree: th.degree,
        delta: th.delta,
        ..Diagnostics::default()
    };
    let mut sum = 0.0;
    for &(est, cls) in &pairs {
        if cls / n_eff <= 2.0 * th.delta {
            diag.nonsmooth_symbols += 1;
            let raw = s_poly_eval_f(est, n_eff, &w, config.keep_constant_term);
            if raw > 1.0 {
                diag.capped_symbols += 1;
                sum += 1.0;
            } else {
                sum += raw;
            }
        } else {
            diag.smooth_symbols += 1;
            sum += smooth_term(est / n_eff, n_eff, th.t, target);
        }
    }
    Ok((sum, diag))
}

/// Bias-corrected plug-in contribution of one frequent symbol, ramped by the
/// interpolation window. The corrections are the first-order Poisson-model
/// bias terms: `+1/(2n)` for `−x ln x`, `·(1 + α(1−α)/(2nx))` for `x^α`.
fn smooth_term(x: f64, n: f64, t: f64, target: Target) -> f64 {
    if x <= t {
        // Window is identically zero (and the entropy core would need ln 0).
        return 0.0;
    }
    let core = match target {
        Target::Entropy => -x * x.ln() + 1.0 / (2.0 * n),
        Target::Power(a) => (1.0 + a * (1.0 - a) / (2.0 * n * x)) * x.powf(a),
    };
    interp_window(x, t) * core
}
