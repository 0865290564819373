//! Exact sampling of the symmetric α-stable clock `Y`.
//!
//! Increments are generated by the Chambers-Mallows-Stuck transform under
//! the normalization `E exp(iξ Y_t) = exp(-t|ξ|^α)`, so a grid path over
//! `[0, T]` with `n` steps uses i.i.d. standard-stable variates scaled by
//! `(T/n)^{1/α}`. At `alpha = 2` this is Brownian motion with `Var Y_t = 2t`.

use crate::stats::{self, SlopeFit};
use crate::{Error, Result};
use rand::Rng;
use rand_distr::Exp1;
use std::f64::consts::{FRAC_PI_2, PI};

/// Clamp distance from the endpoints of the angular variable; the CMS
/// transform has a removable 0/0 at ±π/2 that f64 cannot take literally.
const THETA_GUARD: f64 = 1e-12;
/// Floor for the exponential variate, preventing overflow in the power.
const W_FLOOR: f64 = 1e-300;

/// Parameters of a grid-sampled stable path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StableParams {
    /// Stability exponent in `(0, 2]`.
    pub alpha: f64,
    /// Time horizon `T > 0`.
    pub horizon: f64,
    /// Number of grid steps (`n >= 1`).
    pub n_steps: usize,
}

impl StableParams {
    pub fn new(alpha: f64, horizon: f64, n_steps: usize) -> Result<Self> {
        let p = Self {
            alpha,
            horizon,
            n_steps,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 2.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha must lie in (0, 2], got {}",
                self.alpha
            )));
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "horizon must be positive and finite, got {}",
                self.horizon
            )));
        }
        if self.n_steps == 0 {
            return Err(Error::InvalidParameter("n_steps must be >= 1".into()));
        }
        Ok(())
    }
}

/// Grid trajectory of the clock with its increments recorded.
#[derive(Debug, Clone)]
pub struct StablePath {
    pub params: StableParams,
    /// Strictly increasing times `t_0 = 0 < ... < t_n = T`.
    pub times: Vec<f64>,
    /// Values `Y(t_i)` with `Y(0) = 0`.
    pub values: Vec<f64>,
    /// `increments[i] = Y(t_{i+1}) - Y(t_i)`, length `n_steps`.
    pub increments: Vec<f64>,
}

impl StablePath {
    /// Uniform grid spacing.
    pub fn dt(&self) -> f64 {
        self.params.horizon / self.params.n_steps as f64
    }
}

/// Running extremes of a path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathExtremes {
    /// `S(T) = sup Y`.
    pub sup: f64,
    /// `I(T) = inf Y`.
    pub inf: f64,
    /// `M(T) = sup |Y| = max(S, -I)`.
    pub abs_sup: f64,
    /// `R = S - I`, the range.
    pub range: f64,
}

/// The Chambers-Mallows-Stuck transform for the symmetric case.
///
/// With `theta ~ Uniform(-π/2, π/2)` and `w ~ Exp(1)` independent, the
/// output has characteristic function `exp(-|ξ|^α)`. `alpha = 1` reduces to
/// `tan θ` (Cauchy) and `alpha = 2` to `2 sin θ √w` (Normal with variance 2).
pub fn sample_standard_stable(alpha: f64, theta: f64, w: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 2.0) {
        return Err(Error::InvalidParameter(format!(
            "alpha must lie in (0, 2], got {alpha}"
        )));
    }
    if !(theta > -FRAC_PI_2 && theta < FRAC_PI_2) {
        return Err(Error::InvalidParameter(format!(
            "theta must lie in (-pi/2, pi/2), got {theta}"
        )));
    }
    if !(w > 0.0) {
        return Err(Error::InvalidParameter(format!("w must be positive, got {w}")));
    }
    Ok(cms_transform(alpha, theta, w))
}

fn cms_transform(alpha: f64, theta: f64, w: f64) -> f64 {
    let theta = theta.clamp(-FRAC_PI_2 + THETA_GUARD, FRAC_PI_2 - THETA_GUARD);
    let w = w.max(W_FLOOR);
    if alpha == 1.0 {
        // Dedicated branch: the generic formula is 0/0 here.
        theta.tan()
    } else {
        let lead = (alpha * theta).sin() / theta.cos().powf(1.0 / alpha);
        let tail = ((1.0 - alpha) * theta).cos() / w;
        lead * tail.powf((1.0 - alpha) / alpha)
    }
}

/// Draw one standard-stable variate from `rng`.
pub fn draw_standard_stable<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    let theta = (rng.random::<f64>() - 0.5) * PI;
    let w: f64 = rng.sample(Exp1);
    cms_transform(alpha, theta, w)
}

/// Sample a grid path of the clock from i.i.d. scaled increments.
pub fn sample_path<R: Rng + ?Sized>(params: &StableParams, rng: &mut R) -> StablePath {
    let n = params.n_steps;
    let dt = params.horizon / n as f64;
    let scale = dt.powf(1.0 / params.alpha);
    let mut times = Vec::with_capacity(n + 1);
    let mut values = Vec::with_capacity(n + 1);
    let mut increments = Vec::with_capacity(n);
    times.push(0.0);
    values.push(0.0);
    let mut y = 0.0;
    for i in 1..=n {
        let inc = scale * draw_standard_stable(params.alpha, rng);
        y += inc;
        increments.push(inc);
        times.push(if i == n { params.horizon } else { i as f64 * dt });
        values.push(y);
    }
    StablePath {
        params: *params,
        times,
        values,
        increments,
    }
}

/// Exact grid extremes of a path.
pub fn fold_extremes(path: &StablePath) -> PathExtremes {
    let mut sup = f64::NEG_INFINITY;
    let mut inf = f64::INFINITY;
    for &v in &path.values {
        sup = sup.max(v);
        inf = inf.min(v);
    }
    PathExtremes {
        sup,
        inf,
        abs_sup: sup.max(-inf),
        range: sup - inf,
    }
}

/// Which tail of the sample a power-law fit targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tail {
    /// `log P[S > x]` against `log x`; slope estimates `-alpha`.
    Upper,
    /// `log P[S < x]` against `log x`; slope estimates `alpha/2`.
    Lower,
}

/// Least-squares tail exponent of supremum samples on a log-log grid.
pub fn tail_exponent(samples: &[f64], x_grid: &[f64], tail: Tail) -> Result<SlopeFit> {
    if samples.len() < 10_000 {
        return Err(Error::InvalidParameter(format!(
            "tail fit needs >= 1e4 samples, got {}",
            samples.len()
        )));
    }
    if x_grid.len() < 2 || x_grid.iter().any(|x| *x <= 0.0) {
        return Err(Error::InvalidParameter(
            "x_grid must hold >= 2 positive points".into(),
        ));
    }
    let n = samples.len() as f64;
    let extreme = match tail {
        Tail::Upper => {
            let xmax = x_grid.iter().cloned().fold(f64::MIN, f64::max);
            samples.iter().filter(|s| **s > xmax).count()
        }
        Tail::Lower => {
            let xmin = x_grid.iter().cloned().fold(f64::MAX, f64::min);
            samples.iter().filter(|s| **s < xmin).count()
        }
    };
    if extreme < 100 {
        return Err(Error::InsufficientTailMass(format!(
            "only {extreme} samples beyond the grid edge (need >= 100)"
        )));
    }
    let mut xs = Vec::with_capacity(x_grid.len());
    let mut ys = Vec::with_capacity(x_grid.len());
    for &x in x_grid {
        let p = match tail {
            Tail::Upper => samples.iter().filter(|s| **s > x).count() as f64 / n,
            Tail::Lower => samples.iter().filter(|s| **s < x).count() as f64 / n,
        };
        if p > 0.0 {
            xs.push(x.ln());
            ys.push(p.ln());
        }
    }
    stats::linear_fit(&xs, &ys, "log x")
}
