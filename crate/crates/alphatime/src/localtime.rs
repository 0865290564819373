//! Occupation-density estimators: local times of `X`, `|Y|`, the composed
//! local time of the folded iterated process, its direct occupation
//! estimator, and the visited-measure ranges.
//!
//! Local time is realized kernel-free as occupation mass per level bin,
//! which conserves total time exactly at grid resolution. The composed
//! estimator discretizes the Stieltjes integral
//! `L*(x,t) = ∫_0^∞ L̄₂(u,t) d_u L₁(x,u)` with left-endpoint evaluation of
//! `L̄₂` on the same u-grid that carries `L₁`'s increments, which makes the
//! constant-`L̄₂` case telescope exactly. The direct estimator histograms
//! the folded path itself; the occupation-time identity says the two agree
//! in the limit, and their finite-grid gap is what the comparison tests
//! measure.

use crate::iterated::{self, IteratedKind, IteratedPath};
use crate::stable::{self, StablePath};
use crate::stats::{self, KsOutcome};
use crate::{Error, Result};
use serde::Serialize;
use std::collections::HashSet;

/// Occupation masses on (level bin) x (time bin) cells, divided by Δx,
/// so each row cumulates to local-time increments along the time axis.
#[derive(Debug, Clone)]
pub struct OccupationField {
    /// Left edge of the lowest level bin.
    pub level_origin: f64,
    pub dx: f64,
    pub n_levels: usize,
    /// Left edge of the first time bin.
    pub s0: f64,
    pub ds: f64,
    pub n_times: usize,
    /// Row-major `[level][time]`.
    mass: Vec<f64>,
}

impl OccupationField {
    pub fn mass_at(&self, level: usize, time: usize) -> f64 {
        self.mass[level * self.n_times + time]
    }

    /// Total occupation mass times Δx, i.e. the elapsed time represented.
    pub fn total_time(&self) -> f64 {
        self.mass.iter().sum::<f64>() * self.dx
    }

    pub fn level_center(&self, level: usize) -> f64 {
        self.level_origin + (level as f64 + 0.5) * self.dx
    }
}

/// Kind of curve a [`LocalTimeCurve`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveTag {
    L1,
    L2,
    L2Bar,
    LstarComposed,
    LstarDirect,
}

/// A local-time section `x -> L̂(x, t)` at fixed `t`, on uniform bins.
#[derive(Debug, Clone)]
pub struct LocalTimeCurve {
    /// Left edge of the first bin.
    pub origin: f64,
    pub width: f64,
    pub values: Vec<f64>,
    pub tag: CurveTag,
}

impl LocalTimeCurve {
    pub fn value_at(&self, x: f64) -> f64 {
        let idx = ((x - self.origin) / self.width).floor();
        if idx < 0.0 || idx >= self.values.len() as f64 {
            0.0
        } else {
            self.values[idx as usize]
        }
    }

    pub fn center(&self, i: usize) -> f64 {
        self.origin + (i as f64 + 0.5) * self.width
    }

    /// `∫ L̂ dx` over the support.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.width
    }

    pub fn sup(&self) -> f64 {
        self.values.iter().cloned().fold(0.0, f64::max)
    }
}

fn level_index(v: f64, dx: f64) -> i64 {
    (v / dx).round() as i64
}

/// Occupation field of uniformly sampled `(time, value)` pairs.
///
/// Each step deposits `δ/Δx` into the cell of its left endpoint. Requires
/// the sampling step `δ <= Δs/10` so time bins are well resolved.
pub fn occupation_field(samples: &[(f64, f64)], dx: f64, ds: f64) -> Result<OccupationField> {
    if samples.len() < 2 {
        return Err(Error::InvalidParameter(
            "occupation field needs at least two samples".into(),
        ));
    }
    if !(dx > 0.0 && ds > 0.0) {
        return Err(Error::InvalidParameter("bin widths must be positive".into()));
    }
    let delta = samples[1].0 - samples[0].0;
    if !(delta > 0.0) {
        return Err(Error::InvalidParameter("sample times must increase".into()));
    }
    let tol = 1e-9 * delta.max(1.0);
    for w in samples.windows(2) {
        if ((w[1].0 - w[0].0) - delta).abs() > tol {
            return Err(Error::InvalidParameter(
                "samples must sit on a uniform time grid".into(),
            ));
        }
    }
    if delta > ds / 10.0 * (1.0 + 1e-9) {
        return Err(Error::InvalidParameter(format!(
            "sampling step {delta} exceeds ds/10 = {}",
            ds / 10.0
        )));
    }
    let s0 = samples[0].0;
    let left = &samples[..samples.len() - 1];
    let mut min_idx = i64::MAX;
    let mut max_idx = i64::MIN;
    for (_, v) in left {
        let i = level_index(*v, dx);
        min_idx = min_idx.min(i);
        max_idx = max_idx.max(i);
    }
    let n_levels = (max_idx - min_idx + 1) as usize;
    let last_left_t = left.last().unwrap().0;
    let n_times = ((last_left_t - s0) / ds).floor() as usize + 1;
    let mut mass = vec![0.0f64; n_levels * n_times];
    let weight = delta / dx;
    for (t, v) in left {
        let li = (level_index(*v, dx) - min_idx) as usize;
        let ti = (((t - s0) / ds).floor() as usize).min(n_times - 1);
        mass[li * n_times + ti] += weight;
    }
    Ok(OccupationField {
        level_origin: min_idx as f64 * dx - dx / 2.0,
        dx,
        n_levels,
        s0,
        ds,
        n_times,
        mass,
    })
}

/// Occupation field of a stable clock path. Local time of the clock exists
/// only for `alpha > 1`, so heavier inputs are rejected.
pub fn clock_occupation_field(path: &StablePath, dx: f64, ds: f64) -> Result<OccupationField> {
    if path.params.alpha <= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "clock local time needs alpha > 1, got {}",
            path.params.alpha
        )));
    }
    let samples: Vec<(f64, f64)> = path
        .times
        .iter()
        .copied()
        .zip(path.values.iter().copied())
        .collect();
    occupation_field(&samples, dx, ds)
}

/// Occupation density of `|Y|` over `[0, t]` on u-bins of width `du`
/// (the curve `u -> L̄₂(u, t)`).
pub fn folded_clock_curve(path: &StablePath, du: f64, t: f64) -> Result<LocalTimeCurve> {
    if path.params.alpha <= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "clock local time needs alpha > 1, got {}",
            path.params.alpha
        )));
    }
    if !(du > 0.0) {
        return Err(Error::InvalidParameter("du must be positive".into()));
    }
    if t > path.params.horizon * (1.0 + 1e-12) {
        return Err(Error::BeyondHorizon {
            t,
            horizon: path.params.horizon,
        });
    }
    let dt = path.dt();
    let mut top = 0usize;
    let mut deposits: Vec<(usize, f64)> = Vec::new();
    for i in 0..path.params.n_steps {
        if path.times[i] >= t {
            break;
        }
        let u = path.values[i].abs();
        let j = (u / du).floor() as usize;
        deposits.push((j, dt / du));
        top = top.max(j);
    }
    let mut values = vec![0.0f64; top + 1];
    for (j, w) in deposits {
        values[j] += w;
    }
    Ok(LocalTimeCurve {
        origin: 0.0,
        width: du,
        values,
        tag: CurveTag::L2Bar,
    })
}

/// Discrete Stieltjes composition of the motion's occupation field with the
/// folded clock curve: `L̂*(x) = Σ_j L̄₂(u_j) [L₁(x, u_{j+1}) - L₁(x, u_j)]`.
///
/// The curve's u-bins must coincide with the field's time bins, and the
/// field must cover the curve's support.
pub fn compose_lstar(l1: &OccupationField, l2bar: &LocalTimeCurve) -> Result<LocalTimeCurve> {
    let tol = 1e-9 * l1.ds;
    if (l2bar.width - l1.ds).abs() > tol || (l2bar.origin - l1.s0).abs() > tol {
        return Err(Error::InvalidParameter(
            "clock curve bins do not match the field's u-grid".into(),
        ));
    }
    let support = l2bar
        .values
        .iter()
        .rposition(|v| *v > 0.0)
        .map(|j| j + 1)
        .unwrap_or(0);
    if support > l1.n_times {
        return Err(Error::GridUnderCoverage(format!(
            "clock curve occupies {support} u-bins but the field holds {}",
            l1.n_times
        )));
    }
    let values: Vec<f64> = (0..l1.n_levels)
        .map(|i| {
            (0..support.min(l1.n_times))
                .map(|j| l2bar.values[j] * l1.mass_at(i, j))
                .sum()
        })
        .collect();
    Ok(LocalTimeCurve {
        origin: l1.level_origin,
        width: l1.dx,
        values,
        tag: CurveTag::LstarComposed,
    })
}

/// Direct occupation estimator of the folded process's local time: the
/// level histogram of the path, weighted by time per step over Δx.
pub fn direct_lstar(z1: &IteratedPath, dx: f64) -> Result<LocalTimeCurve> {
    if z1.kind != IteratedKind::Folded {
        return Err(Error::InvalidParameter(
            "direct occupation estimator requires a folded path".into(),
        ));
    }
    if !(dx > 0.0) {
        return Err(Error::InvalidParameter("dx must be positive".into()));
    }
    let n = z1.clock.params.n_steps;
    let dt = z1.clock.dt();
    let left = &z1.z_values[..n];
    let min_idx = left.iter().map(|v| level_index(*v, dx)).min().unwrap();
    let max_idx = left.iter().map(|v| level_index(*v, dx)).max().unwrap();
    let mut values = vec![0.0f64; (max_idx - min_idx + 1) as usize];
    for v in left {
        values[(level_index(*v, dx) - min_idx) as usize] += dt / dx;
    }
    Ok(LocalTimeCurve {
        origin: min_idx as f64 * dx - dx / 2.0,
        width: dx,
        values,
        tag: CurveTag::LstarDirect,
    })
}

/// Relative L¹ distance between two curves on the same bin layout,
/// normalized by the first curve's integral.
pub fn rel_l1_distance(a: &LocalTimeCurve, b: &LocalTimeCurve) -> Result<f64> {
    let tol = 1e-9 * a.width;
    if (a.width - b.width).abs() > tol {
        return Err(Error::InvalidParameter("curve bin widths differ".into()));
    }
    let shift = (b.origin - a.origin) / a.width;
    let offset = shift.round() as i64;
    if (shift - offset as f64).abs() > 1e-6 {
        return Err(Error::InvalidParameter("curve bins are not aligned".into()));
    }
    let lo = 0.min(offset);
    let hi = (a.values.len() as i64).max(offset + b.values.len() as i64);
    let mut l1 = 0.0;
    for k in lo..hi {
        let va = if k >= 0 && (k as usize) < a.values.len() {
            a.values[k as usize]
        } else {
            0.0
        };
        let jb = k - offset;
        let vb = if jb >= 0 && (jb as usize) < b.values.len() {
            b.values[jb as usize]
        } else {
            0.0
        };
        l1 += (va - vb).abs();
    }
    Ok(l1 * a.width / a.integral())
}

/// Build one folded path and estimate its local time both ways on matched
/// grids. Returns `(direct, composed)`.
///
/// The level-bin width scales with the realized clock amplitude
/// (`base_dx * max(1, sqrt(umax/2.5))`) so that rare wide excursions do not
/// starve the histograms; both estimators share the same bins.
pub fn lstar_pair(
    alpha: f64,
    horizon: f64,
    n_steps: usize,
    n_ubins: usize,
    usub: usize,
    base_dx: f64,
    seed: u64,
    path_index: u64,
) -> Result<(LocalTimeCurve, LocalTimeCurve)> {
    if n_ubins < 2 || usub < 10 {
        return Err(Error::InvalidParameter(
            "need n_ubins >= 2 and usub >= 10".into(),
        ));
    }
    let params = stable::StableParams::new(alpha, horizon, n_steps)?;
    let mut path = iterated::build(IteratedKind::Folded, &params, seed, path_index)?;
    let extremes = stable::fold_extremes(&path.clock);
    let umax = extremes.abs_sup.max(base_dx);
    let dx = base_dx * (umax / 2.5).sqrt().max(1.0);
    // The top clock value must land strictly inside the last u-bin.
    let du = umax * (1.0 + 1e-9) / n_ubins as f64;
    let dq = du / usub as f64;
    let n_q = n_ubins * usub;
    let mut samples = Vec::with_capacity(n_q + 1);
    for k in 0..=n_q {
        let u = k as f64 * dq;
        let x = path.oracle_mut().evaluate(u);
        samples.push((u, x));
    }
    let field = occupation_field(&samples, dx, du)?;
    let l2bar = folded_clock_curve(&path.clock, du, horizon)?;
    let composed = compose_lstar(&field, &l2bar)?;
    let direct = direct_lstar(&path, dx)?;
    Ok((direct, composed))
}

/// Two-sample KS for the local-time scaling law:
/// `L*(x t^{1/2α}, t) / t^{1-1/2α}` against `L*(x, 1)`.
pub fn scaling_check(
    alpha: f64,
    t: f64,
    x: f64,
    n_samples: usize,
    n_steps: usize,
    base_dx: f64,
    seed: u64,
) -> Result<KsOutcome> {
    if !(alpha > 1.0 && alpha <= 2.0) {
        return Err(Error::InvalidParameter(format!(
            "scaling check needs alpha in (1, 2], got {alpha}"
        )));
    }
    if !(t > 0.0) {
        return Err(Error::InvalidParameter("t must be positive".into()));
    }
    let power = t.powf(1.0 / (2.0 * alpha));
    let norm = t.powf(1.0 - 1.0 / (2.0 * alpha));
    let arm = |horizon: f64,
               dx: f64,
               level: f64,
               divisor: f64,
               index_base: u64|
     -> Result<Vec<f64>> {
        let params = stable::StableParams::new(alpha, horizon, n_steps)?;
        (0..n_samples as u64)
            .map(|i| {
                let path = iterated::build(IteratedKind::Folded, &params, seed, index_base + i)?;
                let curve = direct_lstar(&path, dx)?;
                Ok(curve.value_at(level) / divisor)
            })
            .collect()
    };
    let scaled = arm(t, base_dx * power, x * power, norm, 0)?;
    let unit = arm(1.0, base_dx, x, 1.0, n_samples as u64)?;
    stats::ks_two_sample(&scaled, &unit)
}

/// Visited-measure range: the number of distinct level bins crossed by the
/// path's continuous segments, times Δx. A step flagged as a jump marks
/// only its endpoint bins, since interpolating across a jump would invent
/// levels the path never visits.
fn visited_measure(values: &[f64], jump: impl Fn(usize) -> bool, dx: f64) -> f64 {
    let mut seen: HashSet<i64> = HashSet::new();
    seen.insert(level_index(values[0], dx));
    for i in 1..values.len() {
        let a = level_index(values[i - 1], dx);
        let b = level_index(values[i], dx);
        seen.insert(b);
        if !jump(i - 1) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            for k in lo..=hi {
                seen.insert(k);
            }
        }
    }
    seen.len() as f64 * dx
}

/// A clock increment counts as a jump when it exceeds `10 (Δt)^{1/α}`.
fn jump_threshold(alpha: f64, dt: f64) -> f64 {
    10.0 * dt.powf(1.0 / alpha)
}

/// Range of the folded iterated process by visited measure.
pub fn range_z1(z1: &IteratedPath, dx: f64) -> Result<f64> {
    if z1.kind != IteratedKind::Folded {
        return Err(Error::InvalidParameter(
            "range estimator requires a folded path".into(),
        ));
    }
    if !(dx > 0.0) {
        return Err(Error::InvalidParameter("dx must be positive".into()));
    }
    let thresh = jump_threshold(z1.alpha(), z1.clock.dt());
    let inc = &z1.clock.increments;
    Ok(visited_measure(
        &z1.z_values,
        |i| inc[i].abs() > thresh,
        dx,
    ))
}

/// Range of the clock itself by visited measure (needs `alpha > 1`; below
/// that the visited set has zero measure and bins carry no meaning).
pub fn range_y(path: &StablePath, dx: f64) -> Result<f64> {
    if path.params.alpha <= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "clock range needs alpha > 1, got {}",
            path.params.alpha
        )));
    }
    if !(dx > 0.0) {
        return Err(Error::InvalidParameter("dx must be positive".into()));
    }
    let thresh = jump_threshold(path.params.alpha, path.dt());
    let inc = &path.increments;
    Ok(visited_measure(&path.values, |i| inc[i].abs() > thresh, dx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{derive_stream, TAG_CLOCK};
    use crate::stable::StableParams;
    use approx::assert_relative_eq;

    fn constant_samples(value: f64, n: usize, total_t: f64) -> Vec<(f64, f64)> {
        (0..=n)
            .map(|i| (i as f64 * total_t / n as f64, value))
            .collect()
    }

    #[test]
    fn constant_path_occupies_one_cell_and_conserves() {
        let samples = constant_samples(0.0, 1000, 1.0);
        let f = occupation_field(&samples, 0.1, 0.1).unwrap();
        assert_eq!(f.n_levels, 1);
        // Single level bin holds 1/dx = 10, conservation 10 * 0.1 = 1.
        let total: f64 = (0..f.n_times).map(|j| f.mass_at(0, j)).sum();
        assert_relative_eq!(total, 10.0, epsilon = 1e-9);
        assert_relative_eq!(f.total_time(), 1.0, epsilon = 1e-9);
    }

    #[test]
    fn empty_or_coarse_input_is_rejected() {
        assert!(occupation_field(&[], 0.1, 0.1).is_err());
        assert!(occupation_field(&[(0.0, 0.0)], 0.1, 0.1).is_err());
        // Sampling step above ds/10.
        let samples = constant_samples(0.0, 5, 1.0);
        assert!(occupation_field(&samples, 0.1, 0.5).is_err());
    }

    #[test]
    fn clock_field_rejects_heavy_clocks() {
        let params = StableParams::new(0.9, 1.0, 64).unwrap();
        let mut rng = derive_stream(1, TAG_CLOCK, 0);
        let path = stable::sample_path(&params, &mut rng);
        assert!(clock_occupation_field(&path, 0.1, 0.2).is_err());
    }

    #[test]
    fn brownian_local_time_at_zero_has_the_right_mean() {
        // E L(0, 1) = sqrt(2/pi) for standard Brownian motion; the bin
        // estimator carries a small negative O(dx) bias.
        let n_paths = 10_000;
        let n_steps = 2048;
        let dx = 0.05;
        let mut values = Vec::with_capacity(n_paths);
        for i in 0..n_paths {
            let mut rng = derive_stream(2, "bm-local", i as u64);
            let mut acc = 0.0f64;
            let mut y = 0.0f64;
            let dt = 1.0 / n_steps as f64;
            let sd = dt.sqrt();
            for _ in 0..n_steps {
                if (y / dx).round() == 0.0 {
                    acc += dt / dx;
                }
                y += sd * rand::Rng::sample::<f64, _>(&mut rng, rand_distr::StandardNormal);
            }
            values.push(acc);
        }
        let (mean, _) = stats::mean_stderr(&values);
        let target = (2.0 / std::f64::consts::PI).sqrt();
        assert!(
            (mean / target - 1.0).abs() < 0.05,
            "mean {mean} vs {target}"
        );
    }

    #[test]
    fn zero_clock_curve_composes_to_zero() {
        let samples = constant_samples(0.3, 200, 1.0);
        let field = occupation_field(&samples, 0.1, 0.05).unwrap();
        let l2bar = LocalTimeCurve {
            origin: 0.0,
            width: 0.05,
            values: vec![0.0; field.n_times],
            tag: CurveTag::L2Bar,
        };
        let composed = compose_lstar(&field, &l2bar).unwrap();
        assert!(composed.values.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn constant_clock_curve_telescopes() {
        // L2bar = c makes the Stieltjes sum collapse to c * L1(x, u_max).
        let params = StableParams::new(2.0, 1.0, 512).unwrap();
        let mut path =
            iterated::build(IteratedKind::Folded, &params, 3, 0).unwrap();
        let du = 0.02;
        let n_q = 50 * 100;
        let samples: Vec<(f64, f64)> = (0..=n_q)
            .map(|k| {
                let u = k as f64 * (du / 100.0);
                (u, path.oracle_mut().evaluate(u))
            })
            .collect();
        let field = occupation_field(&samples, 0.1, du).unwrap();
        let c = 2.5;
        let l2bar = LocalTimeCurve {
            origin: 0.0,
            width: du,
            values: vec![c; field.n_times],
            tag: CurveTag::L2Bar,
        };
        let composed = compose_lstar(&field, &l2bar).unwrap();
        for i in 0..field.n_levels {
            let l1_total: f64 = (0..field.n_times).map(|j| field.mass_at(i, j)).sum();
            assert_relative_eq!(composed.values[i], c * l1_total, epsilon = 1e-9);
        }
    }

    #[test]
    fn composition_detects_under_coverage() {
        let samples = constant_samples(0.0, 200, 0.5);
        let field = occupation_field(&samples, 0.1, 0.05).unwrap();
        let mut values = vec![0.0; field.n_times + 5];
        *values.last_mut().unwrap() = 1.0;
        let l2bar = LocalTimeCurve {
            origin: 0.0,
            width: 0.05,
            values,
            tag: CurveTag::L2Bar,
        };
        assert!(matches!(
            compose_lstar(&field, &l2bar),
            Err(Error::GridUnderCoverage(_))
        ));
    }

    #[test]
    fn direct_estimator_conserves_time_exactly() {
        let params = StableParams::new(1.5, 1.0, 1024).unwrap();
        let path = iterated::build(IteratedKind::Folded, &params, 4, 0).unwrap();
        let curve = direct_lstar(&path, 0.05).unwrap();
        assert_relative_eq!(curve.integral(), 1.0, epsilon = 1e-9);
        assert!(curve.values.iter().all(|v| *v >= 0.0));
    }

    #[test]
    fn direct_estimator_requires_folded_paths() {
        let params = StableParams::new(1.5, 1.0, 8).unwrap();
        let path = iterated::build(IteratedKind::TwoSided, &params, 5, 0).unwrap();
        assert!(direct_lstar(&path, 0.1).is_err());
    }

    #[test]
    fn compose_and_direct_agree_on_a_fixed_path() {
        let (direct, composed) = lstar_pair(2.0, 1.0, 32_768, 64, 800, 0.25, 6, 0).unwrap();
        let rel = rel_l1_distance(&direct, &composed).unwrap();
        assert!(rel < 0.05, "relative L1 distance {rel}");
    }

    #[test]
    fn scaling_collapses_at_unit_time() {
        let ks = scaling_check(1.5, 1.0, 0.0, 500, 512, 0.05, 7).unwrap();
        assert!(ks.passes_at(0.01), "{ks:?}");
    }

    #[test]
    fn scaling_rejects_heavy_clocks() {
        assert!(scaling_check(1.0, 4.0, 0.0, 10, 16, 0.05, 8).is_err());
    }

    #[test]
    fn visited_measure_degenerate_cases() {
        // Constant path: one bin.
        assert_relative_eq!(
            visited_measure(&[0.0, 0.0, 0.0], |_| false, 0.1),
            0.1,
            epsilon = 1e-12
        );
        // Monotone sweep 0 -> 1 visits the whole interval up to bin slack.
        let vals: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
        let r = visited_measure(&vals, |_| false, 0.1);
        assert!((r - 1.0).abs() <= 0.1 + 1e-12, "r = {r}");
    }

    #[test]
    fn jump_gaps_shrink_the_visited_range() {
        // With jump-gap exclusion, the visited measure of a heavy clock
        // falls strictly below its hull with positive frequency.
        let params = StableParams::new(1.5, 1.0, 2048).unwrap();
        let dx = 0.01;
        let mut gap_seen = 0;
        let n = 50;
        for i in 0..n {
            let mut rng = derive_stream(9, TAG_CLOCK, i);
            let path = stable::sample_path(&params, &mut rng);
            let e = stable::fold_extremes(&path);
            let r = range_y(&path, dx).unwrap();
            assert!(r <= e.range + 2.0 * dx + 1e-12, "r = {r}, hull = {}", e.range);
            if r < e.range - 2.0 * dx {
                gap_seen += 1;
            }
        }
        assert!(gap_seen > 0, "no jump gaps detected in {n} heavy paths");
    }

    #[test]
    fn continuous_clock_fills_its_hull() {
        let params = StableParams::new(2.0, 1.0, 4096).unwrap();
        for i in 0..20 {
            let mut rng = derive_stream(10, TAG_CLOCK, i);
            let path = stable::sample_path(&params, &mut rng);
            let e = stable::fold_extremes(&path);
            let r = range_y(&path, 0.02).unwrap();
            assert!((r - e.range).abs() <= 2.0 * 0.02 + 1e-12);
        }
    }

    #[test]
    fn range_rejects_heavy_clocks() {
        let params = StableParams::new(0.8, 1.0, 64).unwrap();
        let mut rng = derive_stream(11, TAG_CLOCK, 0);
        let path = stable::sample_path(&params, &mut rng);
        assert!(range_y(&path, 0.1).is_err());
    }

    #[test]
    fn folded_range_is_bounded_by_twice_the_sup() {
        let params = StableParams::new(1.5, 1.0, 1024).unwrap();
        let dx = 0.02;
        for i in 0..50 {
            let path = iterated::build(IteratedKind::Folded, &params, 12, i).unwrap();
            let r = range_z1(&path, dx).unwrap();
            let sup = path.sup_abs(1.0).unwrap();
            assert!(r <= 2.0 * sup + 2.0 * dx + 1e-12, "r = {r}, sup = {sup}");
        }
    }
}
