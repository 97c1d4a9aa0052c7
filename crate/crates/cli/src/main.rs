use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use thiserror::Error;

use calireg::br_complex::{best_response_complex, refine_to_laguerre};
use calireg::game_model::{builtin, lipschitz_estimate, BUILTIN_NAMES};
use calireg::harness::{
    median_curve, rate_fit, run_replicates, theoretical_bounds, Adversary, BoundInputs,
    HarnessError, RegretCurve, RunConfig,
};
use calireg::{FiniteGame, Mode, StrategyConfig};

/// Flag pairs sampled when estimating the Lipschitz constant of W.
const LIPSCHITZ_PAIRS: usize = 10_000;

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Harness(#[from] HarnessError),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } => 1,
            _ => 2,
        }
    }
}

fn invalid(e: impl ToString) -> CliError {
    CliError::Invalid(e.to_string())
}

#[derive(Parser)]
#[command(
    name = "calireg",
    version,
    about = "Calibration-based regret minimization for repeated finite games"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Monitoring {
    Full,
    Partial,
}

#[derive(Clone, Copy, ValueEnum)]
enum Series {
    InternalFm,
    InternalPm,
    External,
}

#[derive(Subcommand)]
enum Command {
    /// Best-response complex of a game and its Laguerre refinement, as JSON.
    Complex {
        /// Built-in game name or path to a game JSON file.
        game: String,
        /// Defaults to full when flags identify outcomes, partial otherwise.
        #[arg(long, value_enum)]
        monitoring: Option<Monitoring>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Simulate a strategy against an adversary and write trajectories and regret curves.
    Simulate {
        #[arg(long)]
        game: String,
        /// fm, pm-outcome, pm-action or naive.
        #[arg(long)]
        strategy: String,
        /// iid:p, iid:y0,y1,..., seq:<file or list>, or greedy.
        #[arg(long)]
        adversary: String,
        #[arg(long)]
        horizon: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        replicates: u64,
        /// Grid step of the naive strategy.
        #[arg(long)]
        grid_delta: Option<f64>,
        /// Exponent `a` of the exploration rate `n^a` (pm-action).
        #[arg(long, allow_negative_numbers = true)]
        gamma_exponent: Option<f64>,
        /// Output prefix; files are `<prefix>.seed<S>.trajectory.csv` and `<prefix>.seed<S>.curve.csv`.
        #[arg(long)]
        out: String,
    },
    /// Least-squares log-log slope of a regret curve over a window.
    Rates {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
        #[arg(long, value_enum, default_value = "internal-fm")]
        series: Series,
    },
    /// Concentration and regret bound constants for every applicable mode.
    Bounds {
        #[arg(long)]
        game: String,
        /// Confidence parameter in (0, 1).
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        horizon: usize,
        #[arg(long, allow_negative_numbers = true, default_value_t = -1.0 / 3.0)]
        gamma_exponent: f64,
    },
}

fn load_game(spec: &str) -> Result<FiniteGame, CliError> {
    if BUILTIN_NAMES.contains(&spec) {
        return builtin(spec).map_err(invalid);
    }
    let path = Path::new(spec);
    if !path.exists() {
        return Err(invalid(format!(
            "unknown game `{spec}` (built-ins: {})",
            BUILTIN_NAMES.join(", ")
        )));
    }
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.into(),
        source,
    })?;
    FiniteGame::from_json(&text).map_err(invalid)
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|source| CliError::Io {
            path: path.into(),
            source,
        })
}

fn complex(game: &str, monitoring: Option<Monitoring>, out: &Path) -> Result<(), CliError> {
    let g = load_game(game)?;
    let full = match monitoring {
        Some(Monitoring::Full) => true,
        Some(Monitoring::Partial) => false,
        None => g.flags_are_injective(),
    };
    let cx = best_response_complex(&g, full).map_err(invalid)?;
    let refined = refine_to_laguerre(&cx).map_err(invalid)?;
    let doc = json!({
        "monitoring": if full { "full" } else { "partial" },
        "complex": cx,
        "laguerre": refined.document(),
        "parents": refined.parents,
    });
    serde_json::to_writer_pretty(create(out)?, &doc).map_err(invalid)?;
    println!(
        "{} cells, {} laguerre cells -> {}",
        cx.len(),
        refined.len(),
        out.display()
    );
    Ok(())
}

fn adversary(spec: &str, outcomes: usize) -> Result<Adversary, CliError> {
    if let Some(rest) = spec.strip_prefix("seq:") {
        let path = Path::new(rest);
        if path.is_file() {
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.into(),
                source,
            })?;
            return Ok(Adversary::parse(&format!("seq:{}", text.trim()), outcomes)?);
        }
    }
    Ok(Adversary::parse(spec, outcomes)?)
}

#[allow(clippy::too_many_arguments)]
fn simulate(
    game: &str,
    strategy: &str,
    adv: &str,
    horizon: usize,
    seed: u64,
    replicates: u64,
    grid_delta: Option<f64>,
    gamma_exponent: Option<f64>,
    out: &str,
) -> Result<(), CliError> {
    let g = load_game(game)?;
    let mode: Mode = strategy.parse().map_err(invalid)?;
    if horizon == 0 {
        return Err(invalid("horizon must be positive"));
    }
    if replicates == 0 {
        return Err(invalid("replicates must be positive"));
    }
    let mut sc = StrategyConfig::new(mode, seed);
    sc.delta = grid_delta;
    if let Some(a) = gamma_exponent {
        sc.gamma_exponent = a;
    }
    let config = RunConfig {
        strategy: sc,
        adversary: adversary(adv, g.num_outcomes())?,
        horizon,
        seed,
    };
    let seeds: Vec<u64> = (seed..seed + replicates).collect();
    let runs = run_replicates(&g, &config, &seeds)?;
    for (s, (t, c)) in seeds.iter().zip(&runs) {
        let tp = PathBuf::from(format!("{out}.seed{s}.trajectory.csv"));
        let cp = PathBuf::from(format!("{out}.seed{s}.curve.csv"));
        t.write_csv(create(&tp)?)?;
        c.write_csv(create(&cp)?)?;
        println!(
            "seed {s}: internal_fm {:.6} internal_pm {:.6} external {:.6}",
            RegretCurve::last(&c.internal_fm),
            RegretCurve::last(&c.internal_pm),
            RegretCurve::last(&c.external)
        );
    }
    if runs.len() > 1 {
        let curves: Vec<RegretCurve> = runs.into_iter().map(|r| r.1).collect();
        let med = median_curve(&curves)?;
        let mp = PathBuf::from(format!("{out}.median.curve.csv"));
        med.write_csv(create(&mp)?)?;
        println!(
            "median: internal_fm {:.6} internal_pm {:.6} external {:.6}",
            RegretCurve::last(&med.internal_fm),
            RegretCurve::last(&med.internal_pm),
            RegretCurve::last(&med.external)
        );
    }
    Ok(())
}

fn rates(input: &Path, from: usize, to: usize, series: Series) -> Result<(), CliError> {
    let file = File::open(input).map_err(|source| CliError::Io {
        path: input.into(),
        source,
    })?;
    let c = RegretCurve::read_csv(BufReader::new(file))?;
    let values = match series {
        Series::InternalFm => &c.internal_fm,
        Series::InternalPm => &c.internal_pm,
        Series::External => &c.external,
    };
    let pts: Vec<(usize, f64)> = c.n.iter().copied().zip(values.iter().copied()).collect();
    let fit = rate_fit(&pts, from, to)?;
    println!("{}", serde_json::to_string_pretty(&fit).map_err(invalid)?);
    Ok(())
}

fn bounds(game: &str, delta: f64, horizon: usize, gamma_exponent: f64) -> Result<(), CliError> {
    let g = load_game(game)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let m_w = lipschitz_estimate(&g, LIPSCHITZ_PAIRS, &mut rng).map_err(invalid)?;
    let mut report = serde_json::Map::new();
    let mut modes = vec![(Mode::Fm, true), (Mode::PmAction, false)];
    if g.is_outcome_dependent() {
        modes.insert(1, (Mode::PmOutcome, false));
    }
    for (mode, full) in modes {
        let cx = best_response_complex(&g, full).map_err(invalid)?;
        let refined = refine_to_laguerre(&cx).map_err(invalid)?;
        let mut inputs = BoundInputs::from_refined(&g, &refined, m_w)?;
        inputs.gamma_exponent = gamma_exponent;
        let b = theoretical_bounds(&g, &inputs, mode, delta, horizon)?;
        report.insert(mode.to_string(), serde_json::to_value(&b).map_err(invalid)?);
    }
    println!(
        "{}",
        serde_json::to_string_pretty(&report).map_err(invalid)?
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Complex {
            game,
            monitoring,
            out,
        } => complex(&game, monitoring, &out),
        Command::Simulate {
            game,
            strategy,
            adversary,
            horizon,
            seed,
            replicates,
            grid_delta,
            gamma_exponent,
            out,
        } => simulate(
            &game,
            &strategy,
            &adversary,
            horizon,
            seed,
            replicates,
            grid_delta,
            gamma_exponent,
            &out,
        ),
        Command::Rates {
            input,
            from,
            to,
            series,
        } => rates(&input, from, to, series),
        Command::Bounds {
            game,
            delta,
            horizon,
            gamma_exponent,
        } => bounds(&game, delta, horizon, gamma_exponent),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
