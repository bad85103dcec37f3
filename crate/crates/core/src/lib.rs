//! Estimation of entropy, power sums, and derived information measures of
//! discrete distributions from finite samples.
//!
//! The centerpiece is a two-regime estimator that is minimax rate-optimal for
//! Shannon entropy `H(P) = Σ −p_i ln p_i` and for power sums
//! `F_α(P) = Σ p_i^α` over large alphabets. Symbols whose empirical frequency
//! falls below a threshold of order `ln n / n` are handled by an unbiased
//! evaluation of the best polynomial approximation of the target functional
//! (computed on demand by a Remez exchange), while frequent symbols use a
//! bias-corrected plug-in. The effect is that `n` samples buy the accuracy a
//! plain plug-in would need `n ln n` samples for.
//!
//! What is provided, by module:
//!
//! | module      | contents                                                       |
//! |-------------|----------------------------------------------------------------|
//! | [`approx`]  | best (minimax) polynomial approximation on [0, 1], coefficient window rescaling, process-wide cache |
//! | [`estimators`] | the two-regime entropy / power-sum / Rényi estimators          |
//! | [`baselines`]  | classical entropy estimators: plug-in, Miller–Madow, jackknife, coverage-adjusted, Grassberger, Dirichlet smoothing, Bayes, shrinkage |
//! | [`composite`]  | mutual information and entropy rate built from any entropy estimator |
//! | [`graphical`]  | pairwise MI matrices, maximum-weight spanning trees, Chow–Liu tree learning |
//! | [`synth`]      | seeded synthetic distributions, samplers, and ground-truth oracles |
//! | [`bench`](mod@bench) | reproducible Monte-Carlo sweeps with CSV and vector-plot output |
//!
//! All entropies are in nats. Estimates depend only on the multiset of
//! observed counts, never on symbol labels.
//!
//! # Example
//!
//! ```
//! use infomeasures::estimators::estimate_entropy;
//! use infomeasures::Histogram;
//!
//! // 1000 fair-coin flips, 503 heads.
//! let h = Histogram::from_counts([(0u64, 503u64), (1, 497)]).unwrap();
//! let est = estimate_entropy(&h).unwrap();
//! assert!((est - (2f64).ln()).abs() < 0.01);
//! ```

pub mod approx;
pub mod baselines;
pub mod bench;
pub mod composite;
mod error;
pub mod estimators;
pub mod graphical;
pub mod synth;

mod histogram;

pub use error::{Error, Result};
pub use histogram::Histogram;
