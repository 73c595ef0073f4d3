//! `adnrg`: exact additive-energy counting, compression transforms, ball
//! energies, carries searches, and the inequality verification harness.
//!
//! Exit codes: 0 all checks passed, 1 an inequality violation or engine
//! mismatch was found, 2 usage or configuration error.

use std::path::PathBuf;
use std::time::Instant;

use adnrg::config::{ExperimentConfig, ExperimentId};
use adnrg::report::{render, write_report, ReportFormat};
use adnrg_core::ball::{ball_e3, ball_e4, ball_ek_montecarlo, BallConfig, BallSpec};
use adnrg_core::carries::{
    carry_probability, centered_box_system, exhaustive_search, local_search, LocalSearchConfig,
    Objective, SearchMode, SearchWindow,
};
use adnrg_core::compression::{compress, downset_transform};
use adnrg_core::io as set_io;
use adnrg_core::lattice::negate;
use adnrg_core::{BoxShape, EnergyEngine, LatticeSet};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "adnrg",
    version,
    about = "Additive-energy toolkit: exact lattice energies, compressions, ball energies, carries searches, and a verification harness"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum EngineArg {
    Brute,
    Fast,
    Both,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Quad,
    Mc,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CarriesMode {
    Exhaustive,
    Local,
    Centered,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ObjectiveArg {
    Max,
    Min,
}

#[derive(Subcommand)]
enum Command {
    /// Exact E_k of k lattice sets read from files.
    Energy {
        /// Arity k >= 3.
        #[arg(long)]
        k: usize,
        /// Comma-separated set files; one file is replicated to arity k.
        #[arg(long, value_delimiter = ',', required = true)]
        sets: Vec<PathBuf>,
        /// Negate the last floor(k/2) sets, e.g. (A,A,-A,-A) for k=4.
        #[arg(long)]
        negate_last_half: bool,
        #[arg(long, value_enum, default_value = "fast")]
        engine: EngineArg,
    },
    /// Compress a set along one axis inside a declared box.
    Compress {
        /// Axis index, 1-based.
        #[arg(long)]
        axis: usize,
        /// Box half-widths N1,N2,...
        #[arg(long = "box", value_delimiter = ',', required = true)]
        half_widths: Vec<u32>,
        input: PathBuf,
        output: PathBuf,
    },
    /// Apply the full compression sweep, producing a down-set.
    Downset { input: PathBuf, output: PathBuf },
    /// Run one of the compression checks by its short id.
    CheckLemma {
        /// 4.2 = single-axis monotonicity, 4.3 = down-set transform,
        /// 4.4 = shift stability.
        id: String,
        #[arg(long)]
        trials: Option<u32>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Continuous energy of k balls by quadrature or Monte Carlo.
    Ball {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        k: usize,
        /// Comma-separated volumes v1,...,vk.
        #[arg(long, value_delimiter = ',', required = true)]
        volumes: Vec<f64>,
        #[arg(long, value_enum, default_value = "quad")]
        method: MethodArg,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Carry-density computation and search over representative systems.
    Carries {
        #[arg(long)]
        base: u32,
        #[arg(long, default_value_t = 1)]
        dim: usize,
        #[arg(long, value_enum)]
        mode: CarriesMode,
        #[arg(long, value_enum, default_value = "max")]
        objective: ObjectiveArg,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        restarts: u32,
    },
    /// Run a verification experiment and emit its report.
    Verify {
        #[arg(long, value_enum, ignore_case = true)]
        experiment: ExperimentId,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        trials: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: ReportFormat,
        /// Override the box/universe half-width cap.
        #[arg(long)]
        half_width: Option<u32>,
        /// Override the maximum random set size.
        #[arg(long)]
        max_set_size: Option<u32>,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, allow_negative_numbers = true)]
        tolerance: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        sentinel: Option<f64>,
    },
}

fn main() {
    if let Ok(threads) = std::env::var("ADNRG_THREADS") {
        match threads.parse::<usize>() {
            Ok(n) if n > 0 => {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global()
                    .ok();
            }
            _ => {
                eprintln!("error: ADNRG_THREADS must be a positive integer");
                std::process::exit(2);
            }
        }
    }
    let cli = Cli::parse();
    let code = match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    };
    std::process::exit(code);
}

fn run(command: Command) -> adnrg_core::Result<i32> {
    match command {
        Command::Energy {
            k,
            sets,
            negate_last_half,
            engine,
        } => run_energy(k, &sets, negate_last_half, engine),
        Command::Compress {
            axis,
            half_widths,
            input,
            output,
        } => run_compress(axis, &half_widths, &input, &output),
        Command::Downset { input, output } => {
            let set = set_io::read_set(&input)?;
            set_io::write_set(&output, &downset_transform(&set))?;
            Ok(0)
        }
        Command::CheckLemma { id, trials, seed } => run_check(&id, trials, seed),
        Command::Ball {
            dim,
            k,
            volumes,
            method,
            samples,
            seed,
            tol,
        } => run_ball(dim, k, &volumes, method, samples, seed, tol),
        Command::Carries {
            base,
            dim,
            mode,
            objective,
            seed,
            restarts,
        } => run_carries(base, dim, mode, objective, seed, restarts),
        Command::Verify {
            experiment,
            seed,
            trials,
            out,
            format,
            half_width,
            max_set_size,
            samples,
            tolerance,
            sentinel,
        } => {
            let mut cfg = ExperimentConfig::new(experiment);
            cfg.seed = seed;
            cfg.trials = trials;
            cfg.box_half_width = half_width;
            cfg.max_set_size = max_set_size;
            cfg.mc_samples = samples;
            cfg.tolerance = tolerance;
            cfg.sentinel = sentinel;
            cfg.out = out;
            cfg.format = format;
            run_verify(&cfg)
        }
    }
}

fn run_energy(
    k: usize,
    paths: &[PathBuf],
    negate_last_half: bool,
    engine: EngineArg,
) -> adnrg_core::Result<i32> {
    if k < 3 {
        return Err(adnrg_core::Error::invalid("arity k must be at least 3"));
    }
    let loaded: Vec<LatticeSet> = paths
        .iter()
        .map(set_io::read_set)
        .collect::<adnrg_core::Result<_>>()?;
    let mut sets: Vec<LatticeSet> = match loaded.len() {
        1 => std::iter::repeat_n(loaded[0].clone(), k).collect(),
        n if n == k => loaded,
        n => {
            return Err(adnrg_core::Error::invalid(format!(
                "expected 1 or {k} set files, got {n}"
            )))
        }
    };
    if negate_last_half {
        let start = k - k / 2;
        for s in &mut sets[start..] {
            *s = negate(s);
        }
    }
    let refs: Vec<&LatticeSet> = sets.iter().collect();
    let eng = EnergyEngine::default();
    let start = Instant::now();
    let (result, label, mismatch) = match engine {
        EngineArg::Brute => (eng.bruteforce(&refs)?, "brute", false),
        EngineArg::Fast => (eng.fast(&refs)?, "fast", false),
        EngineArg::Both => {
            let fast = eng.fast(&refs)?;
            let brute = eng.bruteforce(&refs)?;
            let mismatch = fast.value != brute.value;
            (fast, "both", mismatch)
        }
    };
    let elapsed = start.elapsed().as_millis();
    let doc = serde_json::json!({
        "E_k": result.value.to_string(),
        "normalized": result.normalized.to_string(),
        "engine": label,
        "elapsed_ms": elapsed,
    });
    println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
    if mismatch {
        eprintln!("engine mismatch: brute-force and fast engines disagree");
        return Ok(1);
    }
    Ok(0)
}

fn run_compress(
    axis: usize,
    half_widths: &[u32],
    input: &PathBuf,
    output: &PathBuf,
) -> adnrg_core::Result<i32> {
    let set = set_io::read_set(input)?;
    let enclosing = BoxShape::new(half_widths.to_vec())?;
    if enclosing.dim() != set.dim() {
        return Err(adnrg_core::Error::DimensionMismatch {
            expected: set.dim(),
            got: enclosing.dim(),
        });
    }
    if axis == 0 || axis > set.dim() {
        return Err(adnrg_core::Error::AxisOutOfRange {
            axis,
            dim: set.dim(),
        });
    }
    if let Some(p) = enclosing.first_outside(&set) {
        return Err(adnrg_core::Error::PointOutsideBox {
            point: p.coords().to_vec(),
        });
    }
    let compressed = compress(&set, axis - 1)?;
    set_io::write_set(output, &compressed)?;
    Ok(0)
}

fn run_check(id: &str, trials: Option<u32>, seed: u64) -> adnrg_core::Result<i32> {
    let experiment = match id {
        "4.2" => ExperimentId::Compress,
        "4.3" => ExperimentId::Downset,
        "4.4" => ExperimentId::Shift,
        other => {
            return Err(adnrg_core::Error::invalid(format!(
                "unknown check id {other:?}; expected 4.2, 4.3 or 4.4"
            )))
        }
    };
    let mut cfg = ExperimentConfig::new(experiment);
    cfg.seed = seed;
    cfg.trials = trials;
    run_verify(&cfg)
}

#[allow(clippy::too_many_arguments)]
fn run_ball(
    dim: usize,
    k: usize,
    volumes: &[f64],
    method: MethodArg,
    samples: Option<u64>,
    seed: u64,
    tol: Option<f64>,
) -> adnrg_core::Result<i32> {
    if volumes.len() != k {
        return Err(adnrg_core::Error::invalid(format!(
            "expected {k} volumes, got {}",
            volumes.len()
        )));
    }
    let specs: Vec<BallSpec> = volumes
        .iter()
        .map(|&v| BallSpec::new(dim, v))
        .collect::<adnrg_core::Result<_>>()?;
    let cfg = BallConfig {
        abs_tol: tol,
        mc_samples: samples.unwrap_or(10_000_000),
        mc_seed: seed,
        ..BallConfig::default()
    };
    let estimate = match method {
        MethodArg::Quad => match k {
            3 => ball_e3(specs[0], specs[1], specs[2], &cfg)?,
            4 => ball_e4(specs[0], specs[1], specs[2], specs[3], &cfg)?,
            _ => {
                return Err(adnrg_core::Error::invalid(
                    "quadrature covers k = 3 and 4; use --method mc for larger arities",
                ))
            }
        },
        MethodArg::Mc => ball_ek_montecarlo(&specs, cfg.mc_samples, cfg.mc_seed)?,
    };
    let mut doc = serde_json::json!({
        "value": estimate.value,
        "error_bound": estimate.abs_error_bound,
        "method": estimate.method.to_string(),
        "nodes_or_samples": estimate.evaluations,
    });
    if let Some(seed) = estimate.seed {
        doc["seed"] = serde_json::json!(seed);
    }
    println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
    Ok(0)
}

fn run_carries(
    base: u32,
    dim: usize,
    mode: CarriesMode,
    objective: ObjectiveArg,
    seed: u64,
    restarts: u32,
) -> adnrg_core::Result<i32> {
    let engine = EnergyEngine::default();
    let objective = match objective {
        ObjectiveArg::Max => Objective::Max,
        ObjectiveArg::Min => Objective::Min,
    };
    let (c, reps, mode_label, steps) = match mode {
        CarriesMode::Centered => {
            let sys = centered_box_system(base, dim)?;
            let c = carry_probability(&engine, &sys)?;
            (c, sys.reps().to_vec(), "centered", 0u64)
        }
        CarriesMode::Exhaustive => {
            let window = SearchWindow::default_window(base, dim)?;
            let result = exhaustive_search(&window, objective, 1 << 22)?;
            (
                result.best_c,
                result.best_system.reps().to_vec(),
                "exhaustive",
                result.steps,
            )
        }
        CarriesMode::Local => {
            let window = SearchWindow::default_window(base, dim)?;
            let result = local_search(
                &window,
                objective,
                &LocalSearchConfig {
                    seed,
                    restarts,
                    max_steps: 100_000,
                },
            )?;
            let label = match result.mode {
                SearchMode::Local => "local",
                SearchMode::Exhaustive => "exhaustive",
            };
            (
                result.best_c,
                result.best_system.reps().to_vec(),
                label,
                result.steps,
            )
        }
    };
    let doc = serde_json::json!({
        "c": c.to_string(),
        "system": reps.iter().map(|p| p.coords().to_vec()).collect::<Vec<_>>(),
        "mode": mode_label,
        "steps": steps,
    });
    println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
    Ok(0)
}

fn run_verify(cfg: &ExperimentConfig) -> adnrg_core::Result<i32> {
    let report = adnrg::run_experiment(cfg)?;
    for table in &report.tables {
        let status = if table.all_pass() { "PASS" } else { "FAIL" };
        eprintln!("{status} [{}] {}", report.experiment, table.inequality);
    }
    eprintln!(
        "{} [{}] {} violation(s), {} ms",
        if report.pass { "PASS" } else { "FAIL" },
        report.experiment,
        report.violations(),
        report.wall_ms
    );
    match &cfg.out {
        Some(path) => write_report(&report, cfg.format, path)?,
        None => print!("{}", render(&report, cfg.format)),
    }
    Ok(if report.pass { 0 } else { 1 })
}
