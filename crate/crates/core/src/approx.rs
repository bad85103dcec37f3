//! Best (minimax) polynomial approximation on `[0, 1]`.
//!
//! [`remez`] computes, for a target function `f` and degree `K`, the unique
//! polynomial `P` of degree at most `K` minimizing `sup_{[0,1]} |f − P|`,
//! together with the attained error and the `K + 2` alternation points at
//! which the residual equioscillates. The iteration works in the Chebyshev
//! basis (affinely mapped to `[0, 1]`) for conditioning and converts to
//! monomial coefficients only on output, because the downstream estimators
//! consume monomial coefficients term by term.
//!
//! [`window_coeffs`] rescales those coefficients from `[0, 1]` to a small
//! interval `[0, 4Δ]`: the nonsmooth-regime estimator approximates the target
//! functional on the interval where undersampled probabilities live, and the
//! rescaling is exactly the substitution `x → x / 4Δ` combined with the
//! target's own scaling law (`x^α` scales by `(4Δ)^α`; `−x ln x` picks up an
//! additional `−x ln 4Δ` term, tracked by the `entropy_shift` flag).
//!
//! [`cached_approx`] memoizes results process-wide, since a Monte-Carlo sweep
//! requests the same `(target, degree)` pair millions of times.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use crate::{Error, Result};

/// Default relative gap between the observed residual maximum and the leveled
/// error at which the exchange is declared converged.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Default iteration budget for the exchange.
pub const DEFAULT_MAX_ITERS: u32 = 100;

/// Largest degree the process-wide cache will compute.
pub const MAX_CACHED_DEGREE: usize = 200;

/// Target function to approximate on `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ApproxTarget {
    /// `x^α` for real `α > 0`.
    PowerAlpha(f64),
    /// `−x ln x`, extended by continuity to `0` at `x = 0`.
    NegXLogX,
}

impl ApproxTarget {
    /// Evaluates the target function.
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            ApproxTarget::PowerAlpha(alpha) => x.powf(alpha),
            ApproxTarget::NegXLogX => {
                if x <= 0.0 {
                    0.0
                } else {
                    -x * x.ln()
                }
            }
        }
    }

    fn validate(&self) -> Result<()> {
        if let ApproxTarget::PowerAlpha(alpha) = *self {
            if !alpha.is_finite() || alpha <= 0.0 {
                return Err(Error::InvalidInput(format!(
                    "power exponent must be finite and positive, got {alpha}"
                )));
            }
        }
        Ok(())
    }
}

/// A certified best approximation of one target at one degree.
#[derive(Clone, Debug)]
pub struct ApproxResult {
    /// Requested degree `K`.
    pub degree: usize,
    /// Monomial coefficients `g_0 .. g_K`; `coeffs[k]` multiplies `x^k`.
    pub coeffs: Vec<f64>,
    /// The same polynomial in the shifted Chebyshev basis: `cheb_coeffs[m]`
    /// multiplies `T_m(2x − 1)`. Prefer [`ApproxResult::eval`] (which uses
    /// this basis) over evaluating `coeffs` directly — monomial coefficients
    /// grow like `(3 + 2√2)^K`, so a monomial Horner pass at large degree
    /// cancels catastrophically while Clenshaw on this basis stays accurate.
    pub cheb_coeffs: Vec<f64>,
    /// Attained sup-norm error `E_K[f]` over `[0, 1]`.
    pub sup_error: f64,
    /// The `K + 2` increasing points in `[0, 1]` where the residual attains
    /// `±sup_error` with alternating sign.
    pub alternation_points: Vec<f64>,
}

impl ApproxResult {
    /// Evaluates the approximating polynomial at `x ∈ [0, 1]`.
    ///
    /// Uses Clenshaw recurrence on the Chebyshev-basis coefficients, which is
    /// numerically stable at every supported degree.
    pub fn eval(&self, x: f64) -> f64 {
        cheb_eval(&self.cheb_coeffs, 2.0 * x - 1.0)
    }
}

/// Coefficients of the degree-`K` approximation rescaled from `[0, 1]` to the
/// estimation interval `[0, 4Δ]`.
#[derive(Clone, Debug)]
pub struct WindowedCoeffs {
    /// Rescaled constant term `g_0` (kept separate so the estimator can choose
    /// whether to include it).
    pub constant: f64,
    /// Rescaled `g_1 .. g_K`; `coeffs[k − 1]` multiplies the degree-`k`
    /// falling-factorial term.
    pub coeffs: Vec<f64>,
    /// The window width `4Δ`.
    pub window: f64,
    /// True when the linear coefficient absorbed the `−ln 4Δ` shift of the
    /// entropy target.
    pub entropy_shift: bool,
}

/// Computes the best degree-`degree` polynomial approximation of `target` on
/// `[0, 1]` with default tolerance and iteration budget.
pub fn remez(target: ApproxTarget, degree: usize) -> Result<ApproxResult> {
    remez_with(target, degree, DEFAULT_TOL, DEFAULT_MAX_ITERS)
}

/// [`remez`] with explicit convergence tolerance and iteration budget.
///
/// Converges when `(max |residual| − leveled error)` falls below
/// `tol · leveled error` plus a degree-dependent rounding floor. On iteration
/// exhaustion returns [`Error::NonConvergence`] carrying the best iterate.
pub fn remez_with(
    target: ApproxTarget,
    degree: usize,
    tol: f64,
    max_iters: u32,
) -> Result<ApproxResult> {
    target.validate()?;
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "tolerance must be finite and positive, got {tol}"
        )));
    }
    if max_iters == 0 {
        return Err(Error::InvalidInput("iteration budget must be positive".into()));
    }

    let k = degree;
    let n_ref = k + 2;
    let pi = std::f64::consts::PI;

    // Initial reference: extrema of the degree-(K+1) Chebyshev polynomial,
    // mapped to [0, 1], in increasing order.
    let mut reference: Vec<f64> = (0..n_ref)
        .map(|j| (1.0 - (j as f64 * pi / (k + 1) as f64).cos()) / 2.0)
        .collect();

    // Scan grid: 16·(K+2) Chebyshev-distributed points. The residual extrema
    // of these targets cluster at the interval ends (quadratically so for
    // x^(1/2)); a uniform grid of the same size would skip right past them.
    let m = 16 * n_ref;
    let grid: Vec<f64> = (0..=m)
        .map(|i| (1.0 - (i as f64 * pi / m as f64).cos()) / 2.0)
        .collect();

    // Rounding floor for the convergence gap: residual evaluations carry
    // cancellation noise of a few ulps of the function scale, amplified by
    // the basis size; below this the gap is indistinguishable from zero.
    let scale = grid.iter().map(|&x| target.eval(x).abs()).fold(0.0, f64::max);
    let noise_floor = (k as f64 + 2.0) * 8.0 * f64::EPSILON * scale.max(1e-300);

    let mut best: Option<(f64, ApproxResult)> = None;
    let mut last_gap = f64::INFINITY;

    for _iter in 0..max_iters {
        let (cheb, leveled) = solve_reference(target, &reference)?;
        let e_abs = leveled.abs();

        let residual = |x: f64| target.eval(x) - cheb_eval(&cheb, 2.0 * x - 1.0);
        let r_grid: Vec<f64> = grid.iter().map(|&x| residual(x)).collect();
        let grid_max = r_grid.iter().fold(0.0f64, |a, &r| a.max(r.abs()));

        // Degenerate target (f is itself a polynomial of degree ≤ K): the
        // residual is roundoff everywhere and sign segmentation is
        // meaningless. Certify immediately.
        if grid_max <= noise_floor {
            return finish(target, k, &cheb, grid_max, reference);
        }

        // Locate all residual extrema: segment the grid by residual sign and
        // refine each segment's peak by golden-section search.
        let mut cands = extrema_candidates(&residual, &grid, &r_grid);
        let cand_max = cands.iter().fold(0.0f64, |a, c| a.max(c.r.abs()));
        let sup = cand_max.max(grid_max);

        let gap = sup - e_abs;
        if gap <= tol * e_abs + noise_floor {
            // Converged: trim the freshly located extrema to K+2 alternating
            // points (they are the certificate) and report the observed sup.
            for &x in &reference {
                cands.push(Cand { x, r: residual(x) });
            }
            let pts = select_alternating(cands, n_ref);
            return finish(target, k, &cheb, sup, pts.into_iter().map(|c| c.x).collect());
        }

        // Multi-point exchange: merge the new extrema with the old reference
        // (whose residuals are ±leveled by construction), coalesce same-sign
        // runs, and keep the K+2 strongest alternating points.
        for &x in &reference {
            cands.push(Cand { x, r: residual(x) });
        }
        let selected = select_alternating(cands, n_ref);
        reference = selected.iter().map(|c| c.x).collect();

        if gap < last_gap {
            last_gap = gap;
            let iterate = finish(target, k, &cheb, sup, reference.clone())?;
            best = Some((gap / e_abs.max(1e-300), iterate));
        }
    }

    let (gap, iterate) = best.expect("at least one iteration ran");
    Err(Error::NonConvergence {
        iterations: max_iters,
        gap,
        best: Box::new(iterate),
    })
}

/// Rescales `[0, 1]` coefficients onto the window `[0, 4·delta]`.
pub fn window_coeffs(
    res: &ApproxResult,
    target: ApproxTarget,
    delta: f64,
) -> Result<WindowedCoeffs> {
    target.validate()?;
    if !delta.is_finite() || delta <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "window parameter delta must be finite and positive, got {delta}"
        )));
    }
    if res.coeffs.len() != res.degree + 1 {
        return Err(Error::InvalidInput(format!(
            "coefficient vector length {} does not match degree {}",
            res.coeffs.len(),
            res.degree
        )));
    }
    let w = 4.0 * delta;
    let (constant, coeffs, entropy_shift) = match target {
        ApproxTarget::PowerAlpha(alpha) => {
            let constant = res.coeffs[0] * w.powf(alpha);
            let coeffs: Vec<f64> = res.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, &g)| g * w.powf(alpha - (i + 1) as f64))
                .collect();
            (constant, coeffs, false)
        }
        ApproxTarget::NegXLogX => {
            let constant = res.coeffs[0] * w;
            let coeffs: Vec<f64> = res.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, &g)| {
                    let kk = i + 1;
                    if kk == 1 {
                        g - w.ln()
                    } else {
                        g * w.powi(1 - kk as i32)
                    }
                })
                .collect();
            (constant, coeffs, true)
        }
    };
    if !constant.is_finite() {
        return Err(Error::CoefficientOverflow { index: 0, stage: "window rescaling" });
    }
    for (i, &c) in coeffs.iter().enumerate() {
        if !c.is_finite() {
            return Err(Error::CoefficientOverflow { index: i + 1, stage: "window rescaling" });
        }
    }
    Ok(WindowedCoeffs { constant, coeffs, window: w, entropy_shift })
}

/// Horner evaluation of monomial coefficients: `coeffs[k]` multiplies `x^k`.
pub fn eval_poly(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// Returns the cached best approximation for `(target, degree)`, computing it
/// on first use. Degrees above [`MAX_CACHED_DEGREE`] are refused. Lookups take
/// a read lock; at most one writer inserts a given entry, and a race computes
/// the same deterministic result, with the first insertion winning.
pub fn cached_approx(target: ApproxTarget, degree: usize) -> Result<Arc<ApproxResult>> {
    target.validate()?;
    if degree > MAX_CACHED_DEGREE {
        return Err(Error::DegreeTooLarge { degree, max: MAX_CACHED_DEGREE });
    }
    static CACHE: OnceLock<RwLock<HashMap<CacheKey, Arc<ApproxResult>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));

    let key = CacheKey::new(target, degree);
    if let Some(hit) = cache.read().expect("approx cache poisoned").get(&key) {
        return Ok(Arc::clone(hit));
    }
    let computed = Arc::new(remez(target, degree)?);
    let mut guard = cache.write().expect("approx cache poisoned");
    let entry = guard.entry(key).or_insert(computed);
    Ok(Arc::clone(entry))
}

/// Cache key: target kind plus the exponent rounded to 1e-9, so that float
/// noise in a repeated α does not fragment the cache.
#[derive(Clone, Copy, Debug, Hash, PartialEq, Eq)]
struct CacheKey {
    kind: u8,
    alpha_nano: i64,
    degree: usize,
}

impl CacheKey {
    fn new(target: ApproxTarget, degree: usize) -> Self {
        match target {
            ApproxTarget::PowerAlpha(a) => CacheKey {
                kind: 0,
                alpha_nano: (a * 1e9).round() as i64,
                degree,
            },
            ApproxTarget::NegXLogX => CacheKey { kind: 1, alpha_nano: 0, degree },
        }
    }
}

/// One located residual extremum.
#[derive(Clone, Copy, Debug)]
struct Cand {
    x: f64,
    r: f64,
}

/// Clenshaw evaluation of a Chebyshev series on `u ∈ [−1, 1]`.
fn cheb_eval(c: &[f64], u: f64) -> f64 {
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for &ck in c.iter().rev() {
        let b0 = 2.0 * u * b1 - b2 + ck;
        b2 = b1;
        b1 = b0;
    }
    // Clenshaw leaves b1 = Σ c_k T_k + u·b2_pre − ...; the standard correction:
    b1 - u * b2
}

/// Solves the leveled-error system on a reference set: find Chebyshev
/// coefficients `c_0..c_K` and `E` with `P(x_j) + (−1)^j E = f(x_j)`.
fn solve_reference(target: ApproxTarget, reference: &[f64]) -> Result<(Vec<f64>, f64)> {
    let n = reference.len(); // K + 2
    let k = n - 2;
    let mut a = vec![vec![0.0f64; n + 1]; n]; // augmented [A | b]
    for (j, &x) in reference.iter().enumerate() {
        let u = 2.0 * x - 1.0;
        // Row: T_0(u), T_1(u), .., T_K(u), (−1)^j | f(x)
        let mut t_prev = 1.0;
        let mut t_cur = u;
        a[j][0] = 1.0;
        if k >= 1 {
            a[j][1] = u;
        }
        for m in 2..=k {
            let t_next = 2.0 * u * t_cur - t_prev;
            a[j][m] = t_next;
            t_prev = t_cur;
            t_cur = t_next;
        }
        a[j][n - 1] = if j % 2 == 0 { 1.0 } else { -1.0 };
        a[j][n] = target.eval(x);
    }
    let sol = solve_dense(&mut a)?;
    let coeffs = sol[..n - 1].to_vec();
    let leveled = sol[n - 1];
    Ok((coeffs, leveled))
}

/// Gaussian elimination with partial pivoting on an augmented matrix.
fn solve_dense(a: &mut [Vec<f64>]) -> Result<Vec<f64>> {
    let n = a.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .expect("nonempty pivot range");
        if a[pivot][col].abs() < 1e-300 {
            return Err(Error::InvalidInput(
                "singular reference system; reference points may have collapsed".into(),
            ));
        }
        a.swap(col, pivot);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            if factor == 0.0 {
                continue;
            }
            for c in col..=n {
                let upper = a[col][c];
                a[row][c] -= factor * upper;
            }
        }
    }
    let mut x = vec![0.0f64; n];
    for row in (0..n).rev() {
        let mut acc = a[row][n];
        for c in row + 1..n {
            acc -= a[row][c] * x[c];
        }
        x[row] = acc / a[row][row];
    }
    Ok(x)
}

/// Splits the grid residual into maximal same-sign runs and refines each
/// run's peak by golden-section search over its bracketing grid interval.
fn extrema_candidates(
    residual: &dyn Fn(f64) -> f64,
    grid: &[f64],
    r_grid: &[f64],
) -> Vec<Cand> {
    let m = grid.len();
    let mut cands = Vec::new();
    let mut i = 0usize;
    while i < m {
        let s = sign_of(r_grid[i]);
        if s == 0 {
            i += 1;
            continue;
        }
        let mut j = i;
        let mut peak = i;
        while j < m && sign_of(r_grid[j]) == s {
            if r_grid[j].abs() > r_grid[peak].abs() {
                peak = j;
            }
            j += 1;
        }
        let lo = grid[peak.saturating_sub(1)];
        let hi = grid[(peak + 1).min(m - 1)];
        let (x, r) = golden_max(residual, lo, hi, s as f64);
        // Keep whichever of (refined, grid peak) is stronger in this sign.
        if s as f64 * r >= s as f64 * r_grid[peak] {
            cands.push(Cand { x, r });
        } else {
            cands.push(Cand { x: grid[peak], r: r_grid[peak] });
        }
        i = j;
    }
    cands
}

fn sign_of(r: f64) -> i8 {
    if r > 0.0 {
        1
    } else if r < 0.0 {
        -1
    } else {
        0
    }
}

/// Golden-section maximization of `sign · residual` on `[a, b]`.
fn golden_max(residual: &dyn Fn(f64) -> f64, a: f64, b: f64, sign: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut lo = a;
    let mut hi = b;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = sign * residual(x1);
    let mut f2 = sign * residual(x2);
    for _ in 0..80 {
        if hi - lo < 4.0 * f64::EPSILON * (1.0 + lo.abs() + hi.abs()) {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = sign * residual(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = sign * residual(x1);
        }
    }
    let x = if f1 >= f2 { x1 } else { x2 };
    (x, residual(x))
}

/// Sorts candidates, collapses same-sign runs to their strongest member, then
/// trims to exactly `want` alternating points, never discarding the global
/// maximum. Interior removals always drop a same-sign pair so the alternation
/// survives.
fn select_alternating(mut cands: Vec<Cand>, want: usize) -> Vec<Cand> {
    cands.sort_by(|a, b| a.x.total_cmp(&b.x));
    // Coalesce: consecutive candidates with the same residual sign are the
    // same oscillation; keep the strongest.
    let mut merged: Vec<Cand> = Vec::with_capacity(cands.len());
    for c in cands {
        match merged.last_mut() {
            Some(last) if sign_of(last.r) == sign_of(c.r) => {
                if c.r.abs() > last.r.abs() {
                    *last = c;
                }
            }
            _ => merged.push(c),
        }
    }
    while merged.len() > want {
        let excess = merged.len() - want;
        let i_min = (0..merged.len())
            .min_by(|&i, &j| merged[i].r.abs().total_cmp(&merged[j].r.abs()))
            .expect("nonempty candidate list");
        if i_min == 0 || i_min == merged.len() - 1 {
            merged.remove(i_min);
        } else if excess >= 2 {
            let weaker = if merged[i_min - 1].r.abs() <= merged[i_min + 1].r.abs() {
                i_min - 1
            } else {
                i_min + 1
            };
            let (first, second) = if weaker < i_min { (weaker, i_min) } else { (i_min, weaker) };
            merged.remove(second);
            merged.remove(first);
        } else {
            // One excess point but the weakest is interior: removing it alone
            // would break alternation, so drop the weaker endpoint instead.
            let last = merged.len() - 1;
            if merged[0].r.abs() <= merged[last].r.abs() {
                merged.remove(0);
            } else {
                merged.remove(last);
            }
        }
    }
    merged
}

/// Converts the internal Chebyshev representation to the output form.
fn finish(
    target: ApproxTarget,
    degree: usize,
    cheb: &[f64],
    sup_error: f64,
    mut alternation_points: Vec<f64>,
) -> Result<ApproxResult> {
    alternation_points.sort_by(f64::total_cmp);
    let coeffs = cheb_to_monomial(cheb)?;
    let _ = target;
    Ok(ApproxResult {
        degree,
        coeffs,
        cheb_coeffs: cheb.to_vec(),
        sup_error,
        alternation_points,
    })
}

/// Expands `Σ c_m T_m(2x − 1)` into monomial coefficients in `x`.
///
/// The expansion coefficients of shifted Chebyshev polynomials grow like
/// `(3 + 2√2)^m`, so this loses relative precision at large degree; the
/// estimators only ever evaluate low-order terms (counts below `2Δn` zero out
/// the rest through the falling factorial), and the working degree is
/// `O(ln n)`.
fn cheb_to_monomial(cheb: &[f64]) -> Result<Vec<f64>> {
    let k = cheb.len() - 1;
    let mut out = vec![0.0f64; k + 1];
    let mut t_prev = vec![0.0f64; k + 1];
    t_prev[0] = 1.0; // T_0(2x−1) = 1
    out[0] += cheb[0];
    if k >= 1 {
        let mut t_cur = vec![0.0f64; k + 1];
        t_cur[0] = -1.0; // T_1(2x−1) = 2x − 1
        t_cur[1] = 2.0;
        out[0] += cheb[1] * t_cur[0];
        out[1] += cheb[1] * t_cur[1];
        for m in 2..=k {
            // T_{m}(2x−1) = (4x − 2)·T_{m−1}(2x−1) − T_{m−2}(2x−1)
            let mut t_next = vec![0.0f64; k + 1];
            for i in 0..m {
                t_next[i + 1] += 4.0 * t_cur[i];
            }
            for i in 0..m {
                t_next[i] -= 2.0 * t_cur[i];
            }
            for i in 0..m.saturating_sub(1) {
                t_next[i] -= t_prev[i];
            }
            for (i, &t) in t_next.iter().enumerate().take(m + 1) {
                out[i] += cheb[m] * t;
            }
            t_prev = t_cur;
            t_cur = t_next;
        }
    }
    for (i, &c) in out.iter().enumerate() {
        if !c.is_finite() {
            return Err(Error::CoefficientOverflow { index: i, stage: "basis conversion" });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const INV_2E: f64 = 0.183_939_720_585_721_16; // 1/(2e)

    fn assert_close(got: f64, want: f64, tol: f64) {
        assert!(
            (got - want).abs() <= tol,
            "got {got}, want {want} (tol {tol})"
        );
    }

    // Degree 1 for x^(1/2): closed form P(x) = x + 1/8, error 1/8, residual
    // alternating at {0, 1/4, 1}.
    #[test]
    fn sqrt_degree_one_closed_form() {
        let r = remez(ApproxTarget::PowerAlpha(0.5), 1).unwrap();
        assert_close(r.sup_error, 0.125, 1e-9);
        assert_close(r.coeffs[0], 0.125, 1e-8);
        assert_close(r.coeffs[1], 1.0, 1e-8);
        assert_eq!(r.alternation_points.len(), 3);
        assert_close(r.alternation_points[0], 0.0, 1e-9);
        assert_close(r.alternation_points[1], 0.25, 1e-5);
        assert_close(r.alternation_points[2], 1.0, 1e-9);
    }

    // Degree 1 for x^2: closed form P(x) = x − 1/8, error 1/8, alternation at
    // {0, 1/2, 1}.
    #[test]
    fn square_degree_one_closed_form() {
        let r = remez(ApproxTarget::PowerAlpha(2.0), 1).unwrap();
        assert_close(r.sup_error, 0.125, 1e-10);
        assert_close(r.coeffs[0], -0.125, 1e-9);
        assert_close(r.coeffs[1], 1.0, 1e-9);
        assert_close(r.alternation_points[1], 0.5, 1e-5);
    }

    // x^2 at degree 2 is exact; the degenerate path must certify ~zero error
    // and return the identity coefficients.
    #[test]
    fn square_degree_two_is_exact() {
        let r = remez(ApproxTarget::PowerAlpha(2.0), 2).unwrap();
        assert!(r.sup_error < 1e-12, "sup_error = {}", r.sup_error);
        assert_close(r.coeffs[0], 0.0, 1e-12);
        assert_close(r.coeffs[1], 0.0, 1e-11);
        assert_close(r.coeffs[2], 1.0, 1e-11);
        assert_eq!(r.alternation_points.len(), 4);
    }

    #[test]
    fn cube_degree_three_is_exact() {
        let r = remez(ApproxTarget::PowerAlpha(3.0), 3).unwrap();
        assert!(r.sup_error < 1e-12);
        assert_close(r.coeffs[3], 1.0, 1e-10);
    }

    // Degree 0: best constant is (max + min)/2.
    #[test]
    fn degree_zero_constants() {
        let r = remez(ApproxTarget::PowerAlpha(0.7), 0).unwrap();
        assert_close(r.sup_error, 0.5, 1e-10);
        assert_close(r.coeffs[0], 0.5, 1e-10);

        let r = remez(ApproxTarget::NegXLogX, 0).unwrap();
        assert_close(r.sup_error, INV_2E, 1e-10);
        assert_close(r.coeffs[0], INV_2E, 1e-10);
    }

    // −x ln x is concave with equal endpoint values, so degree 1 buys nothing
    // over degree 0: P(x) = 1/(2e), error 1/(2e), alternation {0, 1/e, 1}.
    #[test]
    fn negxlogx_degree_one_closed_form() {
        let r = remez(ApproxTarget::NegXLogX, 1).unwrap();
        assert_close(r.sup_error, INV_2E, 1e-10);
        assert_close(r.coeffs[0], INV_2E, 1e-8);
        assert_close(r.coeffs[1], 0.0, 1e-7);
        assert_close(r.alternation_points[1], (-1.0f64).exp(), 1e-5);
    }

    // K·E_K[x^(1/2)] converges to 0.1400854813 with O(1/K²) corrections.
    #[test]
    fn sqrt_error_asymptote_at_degree_ten() {
        let r = remez(ApproxTarget::PowerAlpha(0.5), 10).unwrap();
        let scaled = 10.0 * r.sup_error;
        assert!(
            (scaled / 0.140_085_481_3 - 1.0).abs() < 0.01,
            "10·E_10 = {scaled}"
        );
    }

    // K²·E_K[−x ln x] sits in [0.21, 0.24] for moderate K.
    #[test]
    fn negxlogx_error_asymptote_at_degree_ten() {
        let r = remez(ApproxTarget::NegXLogX, 10).unwrap();
        let scaled = 100.0 * r.sup_error;
        assert!((0.21..=0.24).contains(&scaled), "100·E_10 = {scaled}");
    }

    #[test]
    fn equioscillation_certificate_degree_seven() {
        for target in [ApproxTarget::PowerAlpha(0.5), ApproxTarget::NegXLogX] {
            let r = remez(target, 7).unwrap();
            assert_eq!(r.alternation_points.len(), 9);
            let cheb_free_eval = |x: f64| eval_poly(&r.coeffs, x);
            let res: Vec<f64> = r
                .alternation_points
                .iter()
                .map(|&x| target.eval(x) - cheb_free_eval(x))
                .collect();
            for w in res.windows(2) {
                assert!(w[0] * w[1] < 0.0, "residuals do not alternate: {res:?}");
            }
            for &v in &res {
                assert_close(v.abs(), r.sup_error, 10.0 * DEFAULT_TOL * r.sup_error + 1e-12);
            }
        }
    }

    // At low degree the monomial basis is still well conditioned, so the two
    // evaluation paths must agree; at high degree only the Chebyshev path is
    // trustworthy, so we check it reproduces the target to within sup_error
    // plus a small rounding cushion.
    #[test]
    fn stable_eval_matches_monomial_at_low_degree() {
        let r = remez(ApproxTarget::NegXLogX, 6).unwrap();
        for i in 0..=50 {
            let x = i as f64 / 50.0;
            assert_close(r.eval(x), eval_poly(&r.coeffs, x), 1e-12);
        }
        let r = remez(ApproxTarget::PowerAlpha(0.5), 30).unwrap();
        for i in 0..=200 {
            let x = i as f64 / 200.0;
            let err = (r.eval(x) - x.sqrt()).abs();
            assert!(
                err <= r.sup_error * 1.001 + 1e-13,
                "degree-30 eval off by {err} at x = {x} (sup_error {})",
                r.sup_error
            );
        }
    }

    #[test]
    fn alternation_points_sorted_within_unit_interval() {
        let r = remez(ApproxTarget::PowerAlpha(1.3), 9).unwrap();
        for w in r.alternation_points.windows(2) {
            assert!(w[0] < w[1]);
        }
        assert!(*r.alternation_points.first().unwrap() >= 0.0);
        assert!(*r.alternation_points.last().unwrap() <= 1.0);
    }

    // Monomial coefficients of the best approximation stay below 2^{3K}.
    #[test]
    fn coefficient_growth_bound() {
        for k in [1usize, 5, 10, 20, 30] {
            for target in [ApproxTarget::PowerAlpha(0.5), ApproxTarget::NegXLogX] {
                let r = remez(target, k).unwrap();
                let bound = (2.0f64).powi(3 * k as i32);
                for &g in &r.coeffs {
                    assert!(g.abs() <= bound, "degree {k}: |{g}| > 2^{}", 3 * k);
                }
            }
        }
    }

    #[test]
    fn window_rescaling_entropy_target() {
        // Degree-1 entropy approximation: g0 = 1/(2e), g1 ≈ 0. With
        // delta = 0.01 the window is 0.04: constant scales by the window and
        // the linear term absorbs −ln(window).
        let r = remez(ApproxTarget::NegXLogX, 1).unwrap();
        let w = window_coeffs(&r, ApproxTarget::NegXLogX, 0.01).unwrap();
        assert!(w.entropy_shift);
        assert_close(w.window, 0.04, 1e-15);
        assert_close(w.constant, INV_2E * 0.04, 1e-9);
        assert_close(w.coeffs[0], -(0.04f64).ln(), 1e-7);
    }

    #[test]
    fn window_rescaling_power_target() {
        // Degree-1 sqrt approximation: g0 = 1/8, g1 = 1. Window 0.04:
        // constant → g0·w^0.5 = 0.025, linear → g1·w^(−0.5) = 5.
        let r = remez(ApproxTarget::PowerAlpha(0.5), 1).unwrap();
        let w = window_coeffs(&r, ApproxTarget::PowerAlpha(0.5), 0.01).unwrap();
        assert!(!w.entropy_shift);
        assert_close(w.constant, 0.025, 1e-8);
        assert_close(w.coeffs[0], 5.0, 1e-7);
    }

    #[test]
    fn horner_evaluation() {
        // 2 − 3x + x^3 at x = 2 → 4.
        assert_close(eval_poly(&[2.0, -3.0, 0.0, 1.0], 2.0), 4.0, 1e-15);
        assert_close(eval_poly(&[7.0], 123.0), 7.0, 1e-15);
    }

    #[test]
    fn cache_shares_results_and_caps_degree() {
        let a = cached_approx(ApproxTarget::NegXLogX, 6).unwrap();
        let b = cached_approx(ApproxTarget::NegXLogX, 6).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
        // An α within 1e-9 of a cached one shares its entry.
        let c = cached_approx(ApproxTarget::PowerAlpha(0.5), 4).unwrap();
        let d = cached_approx(ApproxTarget::PowerAlpha(0.5 + 1e-13), 4).unwrap();
        assert!(Arc::ptr_eq(&c, &d));
        match cached_approx(ApproxTarget::NegXLogX, MAX_CACHED_DEGREE + 1) {
            Err(Error::DegreeTooLarge { degree, max }) => {
                assert_eq!(degree, 201);
                assert_eq!(max, 200);
            }
            other => panic!("expected DegreeTooLarge, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_targets() {
        assert!(remez(ApproxTarget::PowerAlpha(0.0), 3).is_err());
        assert!(remez(ApproxTarget::PowerAlpha(-1.0), 3).is_err());
        assert!(remez(ApproxTarget::PowerAlpha(f64::NAN), 3).is_err());
        assert!(remez_with(ApproxTarget::NegXLogX, 3, 0.0, 10).is_err());
        assert!(remez_with(ApproxTarget::NegXLogX, 3, 1e-10, 0).is_err());
    }
}
