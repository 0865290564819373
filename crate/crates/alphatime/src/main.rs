use alphatime::harness::{self, SimConfig, TraceMode};
use alphatime::iterated::IteratedKind;
use alphatime::smallball::{self, SmallBallTarget};
use alphatime::stable::StableParams;
use alphatime::{constants, localtime, spectral, stable};
use alphatime::{Error, Result};
use clap::{Args, Parser, Subcommand};
use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "alphatime",
    version,
    about = "Monte Carlo laboratory for alpha-time Brownian motion"
)]
struct Cli {
    /// Flat key-value config file; flags override file values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Promote estimator-reliability warnings to errors (exit code 3).
    #[arg(long, global = true)]
    strict: bool,

    #[command(subcommand)]
    cmd: Cmd,
}

/// Overrides shared by the simulation-style subcommands.
#[derive(Args, Clone, Default)]
struct Overrides {
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    n_paths: Option<usize>,
    #[arg(long)]
    n_steps: Option<usize>,
    #[arg(long)]
    horizon: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    dx: Option<f64>,
    #[arg(long)]
    out_dir: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sample an ensemble of iterated paths and write per-path summaries.
    Simulate {
        #[command(flatten)]
        overrides: Overrides,
        /// two_sided or folded.
        #[arg(long, default_value = "two_sided")]
        kind: String,
    },
    /// Evaluate the limit-constant table from alpha and lambda.
    Constants {
        #[arg(long)]
        alpha: f64,
        /// Use this eigenvalue instead of solving for it.
        #[arg(long, conflicts_with = "solve")]
        lambda: Option<f64>,
        /// Solve the grid eigenproblem for lambda first.
        #[arg(long)]
        solve: bool,
        #[arg(long)]
        out_dir: Option<String>,
    },
    /// Principal fractional-Laplacian eigenvalue on [-1, 1].
    Eigen {
        #[command(flatten)]
        overrides: Overrides,
        /// grid, exit-mc, or both.
        #[arg(long, default_value = "grid")]
        method: String,
        /// Grid size for the deterministic solve.
        #[arg(long, default_value_t = 256)]
        n: usize,
        /// Exit-MC window as T1,T2 (defaults derived from the grid value).
        #[arg(long)]
        window: Option<String>,
    },
    /// Small-ball estimates over the configured u grid, plus the slope fit.
    Smallball {
        #[command(flatten)]
        overrides: Overrides,
        /// x, z, or z1.
        #[arg(long, default_value = "x")]
        target: String,
    },
    /// Tauberian (Laplace-transform) regression for the clock range.
    Tauberian {
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Local-time curves and the occupation/scaling checks.
    Localtime {
        #[command(flatten)]
        overrides: Overrides,
        /// Scaling-check time scale.
        #[arg(long, default_value_t = 4.0)]
        t_scale: f64,
    },
    /// Iterated-logarithm trace for one law tag.
    LilTrace {
        #[command(flatten)]
        overrides: Overrides,
        /// chung_z, chung_z1, kesten_sup_lstar, range_rstar, levy_uu,
        /// levy_ul, levy_lu, levy_ll.
        #[arg(long, default_value = "chung_z")]
        law: String,
        /// single_path or ensemble.
        #[arg(long, default_value = "single_path")]
        mode: String,
    },
    /// Deterministic reduced-budget pass over every subsystem.
    Selftest {
        /// Master seed (mandatory for reproducibility).
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out_dir: Option<String>,
    },
}

fn load_config(cli_config: &Option<PathBuf>, ov: &Overrides) -> Result<SimConfig> {
    let mut cfg = match cli_config {
        Some(path) => SimConfig::from_file(path)?,
        None => SimConfig::default(),
    };
    if let Some(v) = ov.alpha {
        cfg.alpha = v;
    }
    if let Some(v) = ov.seed {
        cfg.seed = v;
    }
    if let Some(v) = ov.n_paths {
        cfg.n_paths = v;
    }
    if let Some(v) = ov.n_steps {
        cfg.n_steps = v;
    }
    if let Some(v) = ov.horizon {
        cfg.horizon = v;
    }
    if let Some(v) = ov.delta {
        cfg.delta = v;
    }
    if let Some(v) = ov.dx {
        cfg.dx = v;
    }
    if let Some(v) = &ov.out_dir {
        cfg.output_dir = v.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn write_out(cfg: &SimConfig, name: &str, text: &str) -> Result<()> {
    let dir = PathBuf::from(&cfg.output_dir);
    std::fs::create_dir_all(&dir)?;
    std::fs::write(dir.join(name), text)?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let started = Instant::now();
    match cli.cmd {
        Cmd::Simulate { overrides, kind } => {
            let cfg = load_config(&cli.config, &overrides)?;
            let kind = parse_kind(&kind)?;
            let params = StableParams::new(cfg.alpha, cfg.horizon, cfg.n_steps)?;
            let rows = harness::run_indexed(cfg.n_paths, |i| {
                let mut path = alphatime::iterated::build(kind, &params, cfg.seed, i)
                    .expect("validated params");
                let e = stable::fold_extremes(&path.clock);
                let sup = if cfg.segment_refinement {
                    path.refined_sup_abs(cfg.delta, None)
                } else {
                    *path.running_abs_sup.last().unwrap()
                };
                (i, e.sup, e.inf, sup, *path.z_values.last().unwrap())
            });
            let mut csv = String::from("path,clock_sup,clock_inf,sup_abs_z,z_final\n");
            for (i, s, inf, sup, zf) in &rows {
                let _ = writeln!(csv, "{i},{s},{inf},{sup},{zf}");
            }
            write_out(&cfg, "paths.csv", &csv)?;
            harness::write_manifest(
                PathBuf::from(&cfg.output_dir).as_path(),
                "simulate",
                &cfg,
                started.elapsed().as_secs_f64(),
            )?;
            println!("wrote {} path summaries to {}/paths.csv", rows.len(), cfg.output_dir);
        }
        Cmd::Constants {
            alpha,
            lambda,
            solve,
            out_dir,
        } => {
            let lambda = match (lambda, solve) {
                (Some(l), _) => l,
                (None, true) => spectral::lambda_grid(alpha, 256)?.lambda,
                (None, false) => {
                    return Err(Error::InvalidParameter(
                        "constants needs --lambda L or --solve".into(),
                    ))
                }
            };
            let table = constants::build_table(alpha, lambda)?;
            println!("{table}");
            println!("{}", serde_json::to_string_pretty(&table).unwrap());
            if let Some(dir) = out_dir {
                std::fs::create_dir_all(&dir)?;
                std::fs::write(
                    PathBuf::from(&dir).join("constants.json"),
                    serde_json::to_string_pretty(&table).unwrap(),
                )?;
            }
        }
        Cmd::Eigen {
            overrides,
            method,
            n,
            window,
        } => {
            let cfg = load_config(&cli.config, &overrides)?;
            let mut results = Vec::new();
            let grid_needed = method == "grid" || method == "both" || window.is_none();
            let mut grid_lambda = None;
            if grid_needed {
                let r = spectral::lambda_grid(cfg.alpha, n)?;
                grid_lambda = Some(r.lambda);
                if method != "exit-mc" {
                    results.push(r);
                }
            }
            if method == "exit-mc" || method == "both" {
                let (t1, t2) = match &window {
                    Some(w) => {
                        let parts: Vec<&str> = w.split(',').collect();
                        if parts.len() != 2 {
                            return Err(Error::InvalidParameter(
                                "window must be T1,T2".into(),
                            ));
                        }
                        (
                            parts[0].trim().parse::<f64>().map_err(|_| {
                                Error::InvalidParameter("bad window T1".into())
                            })?,
                            parts[1].trim().parse::<f64>().map_err(|_| {
                                Error::InvalidParameter("bad window T2".into())
                            })?,
                        )
                    }
                    None => spectral::suggest_exit_window(grid_lambda.unwrap()),
                };
                results.push(spectral::lambda_exit_mc(
                    cfg.alpha,
                    (t1, t2),
                    cfg.n_paths,
                    cfg.n_steps,
                    cfg.seed,
                )?);
            }
            for r in &results {
                println!("{}", serde_json::to_string_pretty(r).unwrap());
            }
            write_out(
                &cfg,
                "eigen.json",
                &serde_json::to_string_pretty(&results).unwrap(),
            )?;
            harness::write_manifest(
                PathBuf::from(&cfg.output_dir).as_path(),
                "eigen",
                &cfg,
                started.elapsed().as_secs_f64(),
            )?;
        }
        Cmd::Smallball { overrides, target } => {
            let cfg = load_config(&cli.config, &overrides)?;
            let target = parse_target(&target)?;
            let (fit, estimates) = smallball::smallball_slope(
                target,
                cfg.alpha,
                &cfg.u_grid,
                cfg.n_paths,
                cfg.n_steps,
                cfg.delta,
                cfg.seed,
            )?;
            if cli.strict {
                for e in &estimates {
                    if !e.reliable() {
                        return Err(Error::UnreliableEstimate(format!(
                            "p_hat({}) rests on fewer than 10 paths",
                            e.u
                        )));
                    }
                }
            }
            let mut csv = String::from("u,p_hat,stderr\n");
            for e in &estimates {
                let _ = writeln!(csv, "{},{},{}", e.u, e.p_hat, e.stderr);
            }
            write_out(&cfg, "smallball.csv", &csv)?;
            write_out(
                &cfg,
                "smallball_fit.json",
                &serde_json::to_string_pretty(&fit).unwrap(),
            )?;
            harness::write_manifest(
                PathBuf::from(&cfg.output_dir).as_path(),
                "smallball",
                &cfg,
                started.elapsed().as_secs_f64(),
            )?;
            println!("slope {} +/- {} (R^2 {:.4})", fit.slope, fit.stderr, fit.r_squared);
        }
        Cmd::Tauberian { overrides } => {
            let cfg = load_config(&cli.config, &overrides)?;
            let fit = smallball::tauberian_slope(
                cfg.alpha,
                &cfg.lambda_grid,
                cfg.n_paths,
                cfg.n_steps,
                cfg.seed,
            )?;
            write_out(
                &cfg,
                "tauberian_fit.json",
                &serde_json::to_string_pretty(&fit).unwrap(),
            )?;
            harness::write_manifest(
                PathBuf::from(&cfg.output_dir).as_path(),
                "tauberian",
                &cfg,
                started.elapsed().as_secs_f64(),
            )?;
            println!("slope {} +/- {} (R^2 {:.4})", fit.slope, fit.stderr, fit.r_squared);
        }
        Cmd::Localtime { overrides, t_scale } => {
            let cfg = load_config(&cli.config, &overrides)?;
            // Curves from one path pair plus the distributional checks.
            let (direct, composed) =
                localtime::lstar_pair(cfg.alpha, cfg.horizon, cfg.n_steps, 64, 400, 0.25, cfg.seed, 0)?;
            let rel = localtime::rel_l1_distance(&direct, &composed)?;
            let mut csv = String::from("x,direct,composed\n");
            for (i, v) in direct.values.iter().enumerate() {
                let x = direct.center(i);
                let _ = writeln!(csv, "{x},{v},{}", composed.value_at(x));
            }
            write_out(&cfg, "lstar_curves.csv", &csv)?;
            let ks = localtime::scaling_check(
                cfg.alpha,
                t_scale,
                0.0,
                cfg.n_paths.min(5_000),
                cfg.n_steps,
                cfg.dx,
                cfg.seed,
            )?;
            write_out(
                &cfg,
                "localtime_checks.json",
                &serde_json::to_string_pretty(&serde_json::json!({
                    "rel_l1_direct_vs_composed": rel,
                    "scaling_ks": ks,
                }))
                .unwrap(),
            )?;
            harness::write_manifest(
                PathBuf::from(&cfg.output_dir).as_path(),
                "localtime",
                &cfg,
                started.elapsed().as_secs_f64(),
            )?;
            println!("rel L1 {rel:.4}; scaling KS D = {:.4}, p = {:.3}", ks.statistic, ks.p_value);
        }
        Cmd::LilTrace {
            overrides,
            law,
            mode,
        } => {
            let cfg = load_config(&cli.config, &overrides)?;
            let law: harness::LilLaw = law.parse()?;
            let mode = match mode.as_str() {
                "single_path" => TraceMode::SinglePath,
                "ensemble" => TraceMode::Ensemble,
                other => {
                    return Err(Error::InvalidParameter(format!(
                        "mode must be single_path or ensemble, got {other}"
                    )))
                }
            };
            let traces = match law {
                harness::LilLaw::ChungZ => {
                    vec![harness::run_chung_trace(&cfg, IteratedKind::TwoSided, mode)?]
                }
                harness::LilLaw::ChungZ1 => {
                    vec![harness::run_chung_trace(&cfg, IteratedKind::Folded, mode)?]
                }
                _ => {
                    let bundle = harness::run_local_range_traces(&cfg)?;
                    bundle
                        .traces
                        .into_iter()
                        .filter(|t| t.law == law)
                        .collect()
                }
            };
            for trace in &traces {
                write_out(
                    &cfg,
                    &format!("lil_{}.csv", trace.law.as_str()),
                    &trace.to_csv(),
                )?;
                println!(
                    "{}: {} points, running min {:.4}, running max {:.4} (not a verified constant)",
                    trace.law.as_str(),
                    trace.points.len(),
                    trace.running_min.last().unwrap_or(&f64::NAN),
                    trace.running_max.last().unwrap_or(&f64::NAN),
                );
            }
            harness::write_manifest(
                PathBuf::from(&cfg.output_dir).as_path(),
                "lil-trace",
                &cfg,
                started.elapsed().as_secs_f64(),
            )?;
        }
        Cmd::Selftest { seed, out_dir } => {
            let dir = PathBuf::from(out_dir.unwrap_or_else(|| "out/selftest".into()));
            let lines = harness::selftest(seed, &dir)?;
            for l in &lines {
                println!("{l}");
            }
        }
    }
    Ok(())
}

fn parse_kind(s: &str) -> Result<IteratedKind> {
    match s {
        "two_sided" => Ok(IteratedKind::TwoSided),
        "folded" => Ok(IteratedKind::Folded),
        other => Err(Error::InvalidParameter(format!(
            "kind must be two_sided or folded, got {other}"
        ))),
    }
}

fn parse_target(s: &str) -> Result<SmallBallTarget> {
    match s {
        "x" => Ok(SmallBallTarget::X),
        "z" => Ok(SmallBallTarget::Z),
        "z1" => Ok(SmallBallTarget::Z1),
        other => Err(Error::InvalidParameter(format!(
            "target must be x, z or z1, got {other}"
        ))),
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(cli) {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}
