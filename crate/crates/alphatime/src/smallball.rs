//! Small-deviation estimation for `sup|X|`, `sup|Z|`, `sup|Z¹|`, and the
//! Laplace-transform regression for the range of the clock.
//!
//! The small-ball limits converge like powers of `1/log u`, so finite-scale
//! tolerances are deliberately loose and the regression designs (which
//! u-decade, which λ-window) are fixed in config defaults. Common random
//! numbers are used across every u-grid: each path's supremum is computed
//! once and compared against all radii, which enforces monotonicity of
//! `p̂(u)` by construction and reduces regression noise.
//!
//! Direct Monte Carlo of `P[R <= ε]` for the clock range is an untargetable
//! rare event at desk scale; the range's small-deviation rate is therefore
//! probed through its Laplace transform `E e^{-λR}`, whose log-asymptote
//! `-A_α λ^{α/(1+α)}` carries the same constant.

use crate::brownian::BrownianOracle;
use crate::iterated::{self, IteratedKind};
use crate::rng::{derive_stream, TAG_CLOCK, TAG_MOTION};
use crate::stable::{self, StableParams};
use crate::stats::{self, SlopeFit};
use crate::{Error, Result};
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

/// Which supremum the estimate concerns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SmallBallTarget {
    /// Plain Brownian motion over `[0, 1]`.
    X,
    /// The two-sided iterated process `Z`.
    Z,
    /// The folded iterated process `Z¹`.
    Z1,
}

impl SmallBallTarget {
    pub fn as_str(&self) -> &'static str {
        match self {
            SmallBallTarget::X => "x",
            SmallBallTarget::Z => "z",
            SmallBallTarget::Z1 => "z1",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SmallBallEstimate {
    pub target: SmallBallTarget,
    pub alpha: f64,
    pub u: f64,
    pub n_paths: usize,
    pub n_steps: usize,
    pub p_hat: f64,
    pub stderr: f64,
}

impl SmallBallEstimate {
    /// Rare-event estimates supported by fewer than 10 hits are flagged.
    pub fn reliable(&self) -> bool {
        self.p_hat * self.n_paths as f64 >= 10.0
    }
}

/// Simulated suprema for one target under common random numbers, plus the
/// clock ranges the proof-style sandwich bounds need.
pub struct SupEnsemble {
    pub target: SmallBallTarget,
    pub alpha: f64,
    pub n_steps: usize,
    /// Refined `sup| . |` per path; exact wherever `<= stop_above`.
    pub sups: Vec<f64>,
    /// `S(T) - I(T)` of the clock per path (empty for target X).
    pub clock_ranges: Vec<f64>,
    pub stop_above: f64,
}

impl SupEnsemble {
    pub fn n_paths(&self) -> usize {
        self.sups.len()
    }

    /// MC frequency of `sup <= u`; requires `u <= stop_above` for exactness.
    pub fn p_hat(&self, u: f64) -> (f64, f64) {
        debug_assert!(u <= self.stop_above);
        let n = self.sups.len() as f64;
        let p = self.sups.iter().filter(|s| **s <= u).count() as f64 / n;
        (p, (p * (1.0 - p) / n).sqrt())
    }

    /// Frequency of `a < sup < b` with its standard error.
    pub fn window_prob(&self, a: f64, b: f64) -> (f64, f64) {
        debug_assert!(b <= self.stop_above);
        let n = self.sups.len() as f64;
        let p = self
            .sups
            .iter()
            .filter(|s| **s > a && **s < b)
            .count() as f64
            / n;
        (p, (p * (1.0 - p) / n).sqrt())
    }

    /// The conditional-Gaussian sandwich around `P[sup|Z| <= u]`:
    /// `(4/π²) E exp(-π²(S-I)/(8u²))  <=  p  <=  (16/π²) E (same)`,
    /// estimated from the jointly simulated clock extremes.
    /// Returns `(lower, upper, stderr of the common expectation scaled to upper)`.
    pub fn laplace_sandwich(&self, u: f64) -> (f64, f64, f64) {
        assert!(!self.clock_ranges.is_empty(), "sandwich needs clock ranges");
        let weights: Vec<f64> = self
            .clock_ranges
            .iter()
            .map(|r| (-PI * PI * r / (8.0 * u * u)).exp())
            .collect();
        let (mean, se) = stats::mean_stderr(&weights);
        (4.0 / (PI * PI) * mean, 16.0 / (PI * PI) * mean, 16.0 / (PI * PI) * se)
    }
}

/// The bound of the sup-window inequality, `(b/a - 1)²`.
pub fn sup_window_bound(a: f64, b: f64) -> f64 {
    (b / a - 1.0).powi(2)
}

/// Simulate a supremum ensemble for the given target.
///
/// `delta` is the bridge-refinement resolution (segment refinement is always
/// on here; it is the small-ball-estimation default). Suprema are computed
/// once per path and truncated above `stop_above`, so any radius up to
/// `stop_above` can be evaluated from the same ensemble.
pub fn simulate_sup_ensemble(
    target: SmallBallTarget,
    alpha: f64,
    n_paths: usize,
    n_steps: usize,
    delta: f64,
    stop_above: f64,
    seed: u64,
) -> Result<SupEnsemble> {
    if !(delta > 0.0) {
        return Err(Error::InvalidParameter("delta must be positive".into()));
    }
    match target {
        SmallBallTarget::X => {
            let sups: Vec<f64> = (0..n_paths as u64)
                .into_par_iter()
                .map(|i| {
                    let mut oracle = BrownianOracle::new(derive_stream(seed, TAG_MOTION, i));
                    oracle.sup_abs_capped(0.0, 1.0, delta, stop_above)
                })
                .collect();
            Ok(SupEnsemble {
                target,
                alpha,
                n_steps: (1.0 / delta).round() as usize,
                sups,
                clock_ranges: Vec::new(),
                stop_above,
            })
        }
        SmallBallTarget::Z | SmallBallTarget::Z1 => {
            let kind = match target {
                SmallBallTarget::Z => IteratedKind::TwoSided,
                _ => IteratedKind::Folded,
            };
            let params = StableParams::new(alpha, 1.0, n_steps)?;
            let rows: Vec<(f64, f64)> = (0..n_paths as u64)
                .into_par_iter()
                .map(|i| {
                    let mut path = iterated::build(kind, &params, seed, i)
                        .expect("params validated above");
                    let sup = path.refined_sup_abs(delta, Some(stop_above));
                    let e = stable::fold_extremes(&path.clock);
                    (sup, e.range)
                })
                .collect();
            let (sups, clock_ranges) = rows.into_iter().unzip();
            Ok(SupEnsemble {
                target,
                alpha,
                n_steps,
                sups,
                clock_ranges,
                stop_above,
            })
        }
    }
}

/// MC estimate of `P[sup <= u]` at a single radius.
pub fn estimate_small_ball(
    target: SmallBallTarget,
    alpha: f64,
    u: f64,
    n_paths: usize,
    n_steps: usize,
    delta: f64,
    seed: u64,
) -> Result<SmallBallEstimate> {
    if !(u > 0.0) {
        return Err(Error::InvalidParameter(format!("radius u must be positive, got {u}")));
    }
    let ens = simulate_sup_ensemble(target, alpha, n_paths, n_steps, delta, u, seed)?;
    let (p_hat, stderr) = ens.p_hat(u);
    Ok(SmallBallEstimate {
        target,
        alpha,
        u,
        n_paths,
        n_steps: ens.n_steps,
        p_hat,
        stderr,
    })
}

/// Chung's series for `P[sup_{[0,1]} |X| <= u]` on standard Brownian motion.
pub fn chung_series(u: f64) -> f64 {
    let mut s = 0.0;
    for k in 1..=200u32 {
        let odd = (2 * k - 1) as f64;
        let term = (-odd * odd * PI * PI / (8.0 * u * u)).exp() / odd;
        let signed = if k % 2 == 1 { term } else { -term };
        s += signed;
        if term < 1e-18 * s.abs() {
            break;
        }
    }
    (4.0 / PI) * s
}

/// Two-sided exponential envelope of the same probability, valid for all
/// `u > 0`: `(2/π) e^{-π²/8u²} <= P <= (4/π) e^{-π²/8u²}`.
pub fn sandwich_bounds(u: f64) -> (f64, f64) {
    let core = (-PI * PI / (8.0 * u * u)).exp();
    (2.0 / PI * core, 4.0 / PI * core)
}

/// Laplace-transform regression for the clock range: slope of
/// `log Ê[e^{-λR}]` on `λ^{α/(1+α)}`, estimating `-A_α`.
///
/// The regression carries a `log λ` nuisance column: the transform has a
/// slowly varying prefactor whose omission would bias the slope by more
/// than the finite-λ tolerance. The reported slope is the coefficient of
/// `λ^{α/(1+α)}` alone.
pub fn tauberian_slope(
    alpha: f64,
    lambdas: &[f64],
    n_paths: usize,
    n_steps: usize,
    seed: u64,
) -> Result<SlopeFit> {
    if lambdas.len() < 4 {
        return Err(Error::InvalidParameter(format!(
            "need >= 4 lambda design points, got {}",
            lambdas.len()
        )));
    }
    if lambdas.iter().any(|l| *l <= 0.0) {
        return Err(Error::InvalidParameter("lambdas must be positive".into()));
    }
    let lo = lambdas.iter().cloned().fold(f64::MAX, f64::min);
    let hi = lambdas.iter().cloned().fold(f64::MIN, f64::max);
    if hi / lo < 10.0 {
        return Err(Error::InvalidParameter(format!(
            "lambda grid must span at least one decade, got {lo}..{hi}"
        )));
    }
    let params = StableParams::new(alpha, 1.0, n_steps)?;
    let ranges: Vec<f64> = (0..n_paths as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = derive_stream(seed, TAG_CLOCK, i);
            stable::fold_extremes(&stable::sample_path(&params, &mut rng)).range
        })
        .collect();
    let gamma = alpha / (1.0 + alpha);
    let mut xs = Vec::with_capacity(lambdas.len());
    let mut zs = Vec::with_capacity(lambdas.len());
    let mut ys = Vec::with_capacity(lambdas.len());
    for &lam in lambdas {
        let mut sum = 0.0;
        let mut sq = 0.0;
        for r in &ranges {
            let w = (-lam * r).exp();
            sum += w;
            sq += w * w;
        }
        let ess = sum * sum / sq;
        if ess < 100.0 {
            return Err(Error::EffectiveSampleCollapse(format!(
                "E[exp(-{lam} R)] is dominated by {ess:.0} effective paths (need >= 100)"
            )));
        }
        let mean = sum / n_paths as f64;
        let log_mean = mean.ln();
        if log_mean >= -2.0 {
            return Err(Error::InvalidParameter(format!(
                "lambda = {lam} too small: log E[e^-lambda R] = {log_mean:.2} >= -2"
            )));
        }
        xs.push(lam.powf(gamma));
        zs.push(lam.ln());
        ys.push(log_mean);
    }
    stats::controlled_fit(
        &xs,
        &zs,
        &ys,
        "lambda^(alpha/(1+alpha)), log-lambda controlled",
    )
}

/// Regression of `log p̂(u)` on the small-ball predictor.
///
/// Target `X` regresses on `u^{-2}` (slope `-π²/8`); the iterated targets
/// regress on `u^{-2α/(1+α)}` (slope `-(π²/8)^γ A` resp. `A¹`).
/// Returns the fit together with the per-radius estimates.
pub fn smallball_slope(
    target: SmallBallTarget,
    alpha: f64,
    u_grid: &[f64],
    n_paths: usize,
    n_steps: usize,
    delta: f64,
    seed: u64,
) -> Result<(SlopeFit, Vec<SmallBallEstimate>)> {
    if u_grid.len() < 2 {
        return Err(Error::InvalidParameter("u grid needs >= 2 radii".into()));
    }
    let lo = u_grid.iter().cloned().fold(f64::MAX, f64::min);
    let hi = u_grid.iter().cloned().fold(f64::MIN, f64::max);
    if !(lo > 0.0) {
        return Err(Error::InvalidParameter("radii must be positive".into()));
    }
    if hi / lo < 2.0 {
        return Err(Error::InvalidParameter(format!(
            "u grid must span a factor >= 2, got {lo}..{hi}"
        )));
    }
    let ens = simulate_sup_ensemble(target, alpha, n_paths, n_steps, delta, hi, seed)?;
    let mut estimates = Vec::with_capacity(u_grid.len());
    let mut xs = Vec::with_capacity(u_grid.len());
    let mut ys = Vec::with_capacity(u_grid.len());
    let exponent = match target {
        SmallBallTarget::X => 2.0,
        _ => 2.0 * alpha / (1.0 + alpha),
    };
    for &u in u_grid {
        let (p_hat, stderr) = ens.p_hat(u);
        let est = SmallBallEstimate {
            target,
            alpha,
            u,
            n_paths,
            n_steps: ens.n_steps,
            p_hat,
            stderr,
        };
        if !est.reliable() {
            return Err(Error::UnreliableEstimate(format!(
                "p_hat({u}) = {p_hat:.2e} rests on fewer than 10 of {n_paths} paths"
            )));
        }
        xs.push(u.powf(-exponent));
        ys.push(p_hat.ln());
        estimates.push(est);
    }
    let fit = stats::linear_fit(&xs, &ys, &format!("u^-{exponent:.4}"))?;
    Ok((fit, estimates))
}
