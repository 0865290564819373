//! Shared statistical machinery: least-squares fits, two-sample
//! Kolmogorov-Smirnov, and small summary helpers.

use crate::{Error, Result};
use serde::Serialize;

/// Result of a least-squares line fit, optionally with a nuisance regressor.
#[derive(Debug, Clone, Serialize)]
pub struct SlopeFit {
    /// Human-readable description of the predictor the slope refers to.
    pub predictor: String,
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope.
    pub stderr: f64,
    pub r_squared: f64,
}

/// Ordinary least squares of `y` on `x` with intercept.
pub fn linear_fit(x: &[f64], y: &[f64], predictor: &str) -> Result<SlopeFit> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::InvalidParameter(format!(
            "linear fit needs >= 2 paired points, got {}/{}",
            x.len(),
            y.len()
        )));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(u, v)| (u - mx) * (v - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParameter("degenerate design (constant x)".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = x
        .iter()
        .zip(y)
        .map(|(u, v)| (v - intercept - slope * u).powi(2))
        .sum();
    let tss: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    let dof = (x.len() as f64 - 2.0).max(1.0);
    let stderr = (rss / dof / sxx).sqrt();
    let r_squared = if tss > 0.0 { 1.0 - rss / tss } else { 1.0 };
    Ok(SlopeFit {
        predictor: predictor.to_string(),
        slope,
        intercept,
        stderr,
        r_squared,
    })
}

/// Least squares of `y` on `[1, z, x]`, reporting the coefficient of `x`.
///
/// Used where a slowly varying prefactor (absorbed by `z`) would otherwise
/// contaminate the slope of interest.
pub fn controlled_fit(x: &[f64], z: &[f64], y: &[f64], predictor: &str) -> Result<SlopeFit> {
    let n = x.len();
    if n != y.len() || n != z.len() || n < 4 {
        return Err(Error::InvalidParameter(format!(
            "controlled fit needs >= 4 paired points, got {n}"
        )));
    }
    // Normal equations for the 3-column design.
    let mut m = [[0.0f64; 3]; 3];
    let mut b = [0.0f64; 3];
    for i in 0..n {
        let row = [1.0, z[i], x[i]];
        for r in 0..3 {
            for c in 0..3 {
                m[r][c] += row[r] * row[c];
            }
            b[r] += row[r] * y[i];
        }
    }
    let mat = nalgebra::Matrix3::from_fn(|r, c| m[r][c]);
    let rhs = nalgebra::Vector3::new(b[0], b[1], b[2]);
    let inv = mat
        .try_inverse()
        .ok_or_else(|| Error::InvalidParameter("singular design in controlled fit".into()))?;
    let coef = inv * rhs;
    let rss: f64 = (0..n)
        .map(|i| (y[i] - coef[0] - coef[1] * z[i] - coef[2] * x[i]).powi(2))
        .sum();
    let my = y.iter().sum::<f64>() / n as f64;
    let tss: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    let dof = (n as f64 - 3.0).max(1.0);
    let stderr = (rss / dof * inv[(2, 2)]).max(0.0).sqrt();
    Ok(SlopeFit {
        predictor: predictor.to_string(),
        slope: coef[2],
        intercept: coef[0],
        stderr,
        r_squared: if tss > 0.0 { 1.0 - rss / tss } else { 1.0 },
    })
}

/// Two-sample Kolmogorov-Smirnov outcome.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct KsOutcome {
    pub statistic: f64,
    pub p_value: f64,
    pub n: usize,
    pub m: usize,
}

impl KsOutcome {
    pub fn passes_at(&self, significance: f64) -> bool {
        self.p_value > significance
    }
}

/// Two-sample KS statistic and asymptotic p-value (Stephens' effective-n form).
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<KsOutcome> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidParameter("KS test on empty sample".into()));
    }
    let mut xs = a.to_vec();
    let mut ys = b.to_vec();
    xs.sort_unstable_by(|p, q| p.partial_cmp(q).unwrap());
    ys.sort_unstable_by(|p, q| p.partial_cmp(q).unwrap());
    let (n, m) = (xs.len(), ys.len());
    let mut i = 0;
    let mut j = 0;
    let mut d: f64 = 0.0;
    while i < n && j < m {
        if xs[i] < ys[j] {
            i += 1;
        } else if ys[j] < xs[i] {
            j += 1;
        } else {
            // Consume the whole tie group on both sides before comparing.
            let v = xs[i];
            while i < n && xs[i] == v {
                i += 1;
            }
            while j < m && ys[j] == v {
                j += 1;
            }
        }
        let diff = (i as f64 / n as f64 - j as f64 / m as f64).abs();
        if diff > d {
            d = diff;
        }
    }
    let ne = (n as f64 * m as f64) / (n + m) as f64;
    let lambda = (ne.sqrt() + 0.12 + 0.11 / ne.sqrt()) * d;
    let p_value = kolmogorov_sf(lambda);
    Ok(KsOutcome {
        statistic: d,
        p_value,
        n,
        m,
    })
}

/// Survival function of the Kolmogorov distribution, `Q(λ) = 2 Σ (-1)^{k-1} e^{-2k²λ²}`.
pub fn kolmogorov_sf(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    let mut s = 0.0;
    for k in 1..=100 {
        let term = 2.0 * (-2.0 * (k as f64).powi(2) * lambda * lambda).exp();
        s += if k % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    s.clamp(0.0, 1.0)
}

/// Sample mean and standard error of the mean.
pub fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    (mean, (var / n).sqrt())
}

/// Median by sorting a copy.
pub fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_unstable_by(|p, q| p.partial_cmp(q).unwrap());
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}
