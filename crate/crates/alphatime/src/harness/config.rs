//! Flat key-value run configuration.
//!
//! The file format is one `key = value` pair per line, `#` comments, keys
//! in any order, unknown keys rejected. Floats are printed in shortest
//! round-trip form so a config survives a write/read cycle bit-exactly.

use crate::{Error, Result};
use serde::Serialize;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

/// Time-grid family for iterated-logarithm traces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TGrid {
    /// `T_k = base^k`, `k = 1..=count`.
    Geometric { base: f64, count: usize },
    /// `T_k = exp(k log k)`, `k = 3..3+count` (started where `T > e^e`).
    KLogK { count: usize },
}

impl TGrid {
    pub fn times(&self) -> Vec<f64> {
        match self {
            TGrid::Geometric { base, count } => {
                (1..=*count).map(|k| base.powi(k as i32)).collect()
            }
            TGrid::KLogK { count } => (3..3 + *count)
                .map(|k| ((k as f64) * (k as f64).ln()).exp())
                .collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let times = self.times();
        if times.is_empty() {
            return Err(Error::Config("empty T grid".into()));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config("T grid must be strictly increasing".into()));
        }
        Ok(())
    }
}

impl fmt::Display for TGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TGrid::Geometric { base, count } => write!(f, "geometric:{base}:{count}"),
            TGrid::KLogK { count } => write!(f, "klogk:{count}"),
        }
    }
}

impl FromStr for TGrid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["geometric", base, count] => Ok(TGrid::Geometric {
                base: parse_f64(base, "t_grid base")?,
                count: parse_usize(count, "t_grid count")?,
            }),
            ["klogk", count] => Ok(TGrid::KLogK {
                count: parse_usize(count, "t_grid count")?,
            }),
            _ => Err(Error::Config(format!(
                "t_grid must be geometric:BASE:COUNT or klogk:COUNT, got {s}"
            ))),
        }
    }
}

/// Every knob a run needs; CLI flags override file values field by field.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimConfig {
    pub alpha: f64,
    pub seed: u64,
    pub n_paths: usize,
    pub n_steps: usize,
    pub horizon: f64,
    pub t_grid: TGrid,
    /// Level-bin width scale; estimators use `dx * t^{1/2α}` unless noted.
    pub dx: f64,
    /// Time-bin width for occupation fields.
    pub ds: f64,
    /// Bridge `X` across swept intervals when taking suprema.
    pub segment_refinement: bool,
    /// Bridge resolution for segment refinement.
    pub delta: f64,
    /// Radii for small-ball estimation.
    pub u_grid: Vec<f64>,
    /// Laplace design points for the range regression.
    pub lambda_grid: Vec<f64>,
    pub output_dir: String,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            alpha: 2.0,
            seed: 1,
            n_paths: 10_000,
            n_steps: 1024,
            horizon: 1.0,
            t_grid: TGrid::Geometric {
                base: 100.0,
                count: 4,
            },
            dx: 0.02,
            ds: 0.01,
            segment_refinement: true,
            delta: 2f64.powi(-11),
            u_grid: vec![0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0],
            lambda_grid: vec![1.2, 2.4, 4.8, 9.6, 12.0],
            output_dir: "out".into(),
        }
    }
}

fn parse_f64(s: &str, key: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::Config(format!("{key}: not a real number: {s}")))
}

fn parse_usize(s: &str, key: &str) -> Result<usize> {
    s.trim()
        .parse::<usize>()
        .map_err(|_| Error::Config(format!("{key}: not a count: {s}")))
}

fn parse_list(s: &str, key: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|p| parse_f64(p, key))
        .collect::<Result<Vec<f64>>>()
}

fn render_list(xs: &[f64]) -> String {
    xs.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 2.0) {
            return Err(Error::Config(format!("alpha must lie in (0, 2], got {}", self.alpha)));
        }
        if self.n_paths == 0 || self.n_steps == 0 {
            return Err(Error::Config("n_paths and n_steps must be positive".into()));
        }
        if !(self.horizon > 0.0) {
            return Err(Error::Config("horizon must be positive".into()));
        }
        if !(self.dx > 0.0 && self.ds > 0.0 && self.delta > 0.0) {
            return Err(Error::Config("dx, ds, delta must be positive".into()));
        }
        if self.u_grid.is_empty() || self.u_grid.iter().any(|u| *u <= 0.0) {
            return Err(Error::Config("u_grid must hold positive radii".into()));
        }
        if self.lambda_grid.is_empty() || self.lambda_grid.iter().any(|l| *l <= 0.0) {
            return Err(Error::Config("lambda_grid must hold positive values".into()));
        }
        self.t_grid.validate()
    }

    /// Serialize in fixed key order.
    pub fn to_config_string(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("alpha = {}\n", self.alpha));
        s.push_str(&format!("seed = {}\n", self.seed));
        s.push_str(&format!("n_paths = {}\n", self.n_paths));
        s.push_str(&format!("n_steps = {}\n", self.n_steps));
        s.push_str(&format!("horizon = {}\n", self.horizon));
        s.push_str(&format!("t_grid = {}\n", self.t_grid));
        s.push_str(&format!("dx = {}\n", self.dx));
        s.push_str(&format!("ds = {}\n", self.ds));
        s.push_str(&format!("segment_refinement = {}\n", self.segment_refinement));
        s.push_str(&format!("delta = {}\n", self.delta));
        s.push_str(&format!("u_grid = {}\n", render_list(&self.u_grid)));
        s.push_str(&format!("lambda_grid = {}\n", render_list(&self.lambda_grid)));
        s.push_str(&format!("output_dir = {}\n", self.output_dir));
        s
    }

    pub fn from_config_string(text: &str) -> Result<Self> {
        let mut cfg = SimConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected key = value", lineno + 1))
            })?;
            let key = key.trim();
            let value = value.trim();
            match key {
                "alpha" => cfg.alpha = parse_f64(value, key)?,
                "seed" => {
                    cfg.seed = value
                        .parse::<u64>()
                        .map_err(|_| Error::Config(format!("seed: not a u64: {value}")))?
                }
                "n_paths" => cfg.n_paths = parse_usize(value, key)?,
                "n_steps" => cfg.n_steps = parse_usize(value, key)?,
                "horizon" => cfg.horizon = parse_f64(value, key)?,
                "t_grid" => cfg.t_grid = value.parse()?,
                "dx" => cfg.dx = parse_f64(value, key)?,
                "ds" => cfg.ds = parse_f64(value, key)?,
                "segment_refinement" => {
                    cfg.segment_refinement = match value {
                        "true" => true,
                        "false" => false,
                        _ => {
                            return Err(Error::Config(format!(
                                "segment_refinement: expected true/false, got {value}"
                            )))
                        }
                    }
                }
                "delta" => cfg.delta = parse_f64(value, key)?,
                "u_grid" => cfg.u_grid = parse_list(value, key)?,
                "lambda_grid" => cfg.lambda_grid = parse_list(value, key)?,
                "output_dir" => cfg.output_dir = value.to_string(),
                other => return Err(Error::Config(format!("unknown key: {other}"))),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::from_config_string(&std::fs::read_to_string(path)?)
    }

    pub fn write_file(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_config_string())?;
        Ok(())
    }
}
