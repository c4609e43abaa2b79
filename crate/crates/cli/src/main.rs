use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Parser, ValueEnum};
use lvq_drift_core::output::write_outputs;
use lvq_drift_core::{compare_curves, parse_config, run_scenario, Engine, Scenario};

const PRESETS: [(&str, &str); 4] = [
    ("fig1-left", include_str!("../scenarios/fig1-left.toml")),
    ("fig1-right", include_str!("../scenarios/fig1-right.toml")),
    ("fig2", include_str!("../scenarios/fig2.toml")),
    (
        "stationary-baseline",
        include_str!("../scenarios/stationary-baseline.toml"),
    ),
];

#[derive(Debug, Clone, Copy, ValueEnum)]
enum EngineArg {
    Ode,
    Mc,
    Both,
}

impl From<EngineArg> for Engine {
    fn from(e: EngineArg) -> Self {
        match e {
            EngineArg::Ode => Engine::Ode,
            EngineArg::Mc => Engine::Mc,
            EngineArg::Both => Engine::Both,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "lvq-drift",
    version,
    about = "Simulate LVQ1 learning curves under drifting class priors"
)]
struct Args {
    /// Scenario file (TOML). Without it, built-in defaults apply.
    #[arg(long, value_name = "PATH", conflicts_with = "preset")]
    config: Option<PathBuf>,

    /// Built-in scenario: fig1-left, fig1-right, fig2 or stationary-baseline.
    #[arg(long, value_name = "NAME", value_parser = preset_names())]
    preset: Option<String>,

    /// Output directory; created if missing.
    #[arg(long, value_name = "DIR", default_value = "out")]
    out: PathBuf,

    #[arg(long, value_enum)]
    engine: Option<EngineArg>,

    /// Master seed for the Monte Carlo runs.
    #[arg(long)]
    seed: Option<u64>,

    /// Number of Monte Carlo runs.
    #[arg(long)]
    runs: Option<usize>,

    /// Input dimension N of the Monte Carlo engine.
    #[arg(long)]
    dim: Option<usize>,

    /// Weight-decay rate.
    #[arg(long)]
    gamma: Option<f64>,

    /// Suppress progress and summary output.
    #[arg(long)]
    quiet: bool,
}

fn preset_names() -> clap::builder::PossibleValuesParser {
    clap::builder::PossibleValuesParser::new(PRESETS.map(|(name, _)| name))
}

fn load_scenario(args: &Args) -> Result<Scenario> {
    let mut s = if let Some(path) = &args.config {
        let text = fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        parse_config(&text).with_context(|| format!("invalid config {}", path.display()))?
    } else if let Some(name) = &args.preset {
        let (_, text) = PRESETS
            .iter()
            .find(|(n, _)| n == name)
            .expect("validated by clap");
        parse_config(text).with_context(|| format!("invalid preset {name}"))?
    } else {
        Scenario::default()
    };
    if let Some(e) = args.engine {
        s.engine = e.into();
    }
    if let Some(seed) = args.seed {
        s.seed = seed;
    }
    if let Some(runs) = args.runs {
        s.mc_runs = runs;
    }
    if let Some(dim) = args.dim {
        s.dim = dim;
    }
    if let Some(gamma) = args.gamma {
        s.gamma = gamma;
    }
    s.validate().context("invalid scenario")?;
    Ok(s)
}

fn run(args: &Args) -> Result<()> {
    let scenario = load_scenario(args)?;
    let start = Instant::now();
    if !args.quiet {
        eprintln!(
            "running engine={}: alpha_max={}, dim={}, runs={}, seed={}",
            format!("{:?}", scenario.engine).to_lowercase(),
            scenario.alpha_max,
            scenario.dim,
            scenario.mc_runs,
            scenario.seed
        );
    }
    let out = run_scenario(&scenario)?;
    let files = write_outputs(&args.out, &scenario, &out)
        .with_context(|| format!("cannot write outputs to {}", args.out.display()))?;
    if !args.quiet {
        for path in [&files.ode, &files.mc, &files.compare]
            .into_iter()
            .flatten()
        {
            eprintln!("wrote {}", path.display());
        }
        eprintln!("wrote {}", files.manifest.display());
        if let (Some(ode), Some(mc)) = (&out.ode, &out.mc) {
            let report = compare_curves(ode, mc)?;
            if let Some(c) = report.column("eps_track") {
                eprintln!("max |ode - mc| eps_track: {:.4}", c.max_abs);
            }
        }
        eprintln!("done in {:.1}s", start.elapsed().as_secs_f64());
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
