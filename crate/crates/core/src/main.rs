use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ideal::bench::{run_benchmark, BoundsFile, ExperimentConfig, ExperimentReport, ProblemConfig};
use ideal::data::CsvSchema;
use ideal::engine::Strategy;
use ideal::space::TargetKind;
use ideal::Error;

const EXIT_FAILURE: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_ALL_INIT_FAILED: u8 = 3;
const EXIT_PROTOCOL: u8 = 4;

#[derive(Parser)]
#[command(name = "ideal", version, about = "Active learning by inverse distance weighting")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Benchmark on a built-in synthetic problem.
    Synth {
        #[arg(long, value_enum)]
        problem: Option<SynthProblem>,
        /// Pool size for the synthetic pool.
        #[arg(long)]
        pool_size: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Pool-based benchmark on a labeled CSV file.
    Dataset {
        #[arg(long)]
        csv: Option<PathBuf>,
        /// JSON schema naming target, categorical and ignored columns.
        #[arg(long)]
        schema: Option<PathBuf>,
        #[arg(long, value_enum)]
        task: Option<Task>,
        #[command(flatten)]
        common: Common,
    },
    /// Active learning against a child process answering queries on stdin/stdout.
    External {
        #[arg(long)]
        cmd: Option<String>,
        /// JSON file with `lower` and `upper` arrays.
        #[arg(long)]
        bounds: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "population")]
        mode: Mode,
        #[arg(long)]
        n_targets: Option<usize>,
        #[arg(long, value_enum)]
        task: Option<Task>,
        /// Seconds to wait for each answer.
        #[arg(long)]
        timeout: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Print the median metric table of a finished experiment.
    Report {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Args)]
struct Common {
    /// JSON experiment config; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// One or more strategies, comma separated.
    #[arg(long, value_enum, value_delimiter = ',')]
    strategy: Vec<StrategyArg>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    omega: Option<f64>,
    #[arg(long)]
    n_init: Option<usize>,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long)]
    batch: Option<usize>,
    #[arg(long)]
    runs: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    noise: Option<f64>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum SynthProblem {
    QuarticSine,
    Circle,
    CircleConstrained,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Ideal,
    Greedy,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum Task {
    Regression,
    Classification,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Mode {
    Population,
    Pool,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Ideal => Strategy::Ideal,
            StrategyArg::Greedy => Strategy::Greedy,
            StrategyArg::Random => Strategy::Random,
        }
    }
}

impl From<Task> for TargetKind {
    fn from(t: Task) -> Self {
        match t {
            Task::Regression => TargetKind::Regression,
            Task::Classification => TargetKind::Classification,
        }
    }
}

fn config_error(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

impl Common {
    fn base_config(&self) -> Result<ExperimentConfig, Error> {
        match &self.config {
            Some(p) => ExperimentConfig::from_json_file(p).map_err(|e| match e {
                Error::Io(e) => config_error(format!("cannot read {}: {e}", p.display())),
                e => e,
            }),
            None => Ok(ExperimentConfig::default()),
        }
    }

    fn apply(&self, cfg: &mut ExperimentConfig) {
        if !self.strategy.is_empty() {
            cfg.strategies = self.strategy.iter().map(|&s| s.into()).collect();
        }
        macro_rules! set {
            ($($field:ident),*) => {$(
                if let Some(v) = self.$field {
                    cfg.$field = v;
                }
            )*};
        }
        set!(delta, omega, n_init, n_max, batch, runs, seed, noise);
        if self.workers.is_some() {
            cfg.workers = self.workers;
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| config_error(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| config_error(format!("{}: {e}", path.display())))
}

fn synth_config(problem: Option<SynthProblem>, pool_size: Option<usize>, common: &Common) -> Result<ExperimentConfig, Error> {
    let mut cfg = common.base_config()?;
    let current_size = match &cfg.problem {
        ProblemConfig::QuarticSine { pool_size } | ProblemConfig::Circle { pool_size, .. } => Some(*pool_size),
        _ => None,
    };
    let size = pool_size.or(current_size).unwrap_or(1000);
    cfg.problem = match (problem, &cfg.problem) {
        (Some(SynthProblem::QuarticSine), _) => ProblemConfig::QuarticSine { pool_size: size },
        (Some(SynthProblem::Circle), _) => ProblemConfig::Circle {
            pool_size: size,
            constrained: false,
        },
        (Some(SynthProblem::CircleConstrained), _) => ProblemConfig::Circle {
            pool_size: size,
            constrained: true,
        },
        (None, ProblemConfig::QuarticSine { .. }) => ProblemConfig::QuarticSine { pool_size: size },
        (None, ProblemConfig::Circle { constrained, .. }) => ProblemConfig::Circle {
            pool_size: size,
            constrained: *constrained,
        },
        (None, _) => return Err(config_error("synth needs --problem")),
    };
    common.apply(&mut cfg);
    Ok(cfg)
}

fn dataset_config(
    csv: Option<PathBuf>,
    schema: Option<PathBuf>,
    task: Option<Task>,
    common: &Common,
) -> Result<ExperimentConfig, Error> {
    let mut cfg = common.base_config()?;
    let (mut path, mut sch) = match &cfg.problem {
        ProblemConfig::Dataset { csv, schema } => (Some(csv.clone()), Some(schema.clone())),
        _ => (None, None),
    };
    if let Some(c) = csv {
        path = Some(c);
    }
    if let Some(s) = schema {
        sch = Some(read_json::<CsvSchema>(&s)?);
    }
    let mut sch = sch.ok_or_else(|| config_error("dataset needs --schema"))?;
    if let Some(t) = task {
        sch.task = Some(t.into());
    }
    cfg.problem = ProblemConfig::Dataset {
        csv: path.ok_or_else(|| config_error("dataset needs --csv"))?,
        schema: sch,
    };
    common.apply(&mut cfg);
    Ok(cfg)
}

#[allow(clippy::too_many_arguments)]
fn external_config(
    cmd: Option<String>,
    bounds: Option<PathBuf>,
    mode: Mode,
    n_targets: Option<usize>,
    task: Option<Task>,
    timeout: Option<f64>,
    common: &Common,
) -> Result<ExperimentConfig, Error> {
    if mode == Mode::Pool {
        return Err(config_error("external oracles support population mode only"));
    }
    let mut cfg = common.base_config()?;
    let (mut command, mut b, mut m, mut kind, mut secs) = match &cfg.problem {
        ProblemConfig::External {
            command,
            bounds,
            n_targets,
            task,
            timeout_secs,
        } => (Some(command.clone()), Some(bounds.clone()), *n_targets, *task, *timeout_secs),
        _ => (None, None, 1, TargetKind::Regression, ideal::data::DEFAULT_TIMEOUT.as_secs_f64()),
    };
    if let Some(c) = cmd {
        command = Some(c);
    }
    if let Some(p) = bounds {
        b = Some(read_json::<BoundsFile>(&p)?);
    }
    if let Some(n) = n_targets {
        m = n;
    }
    if let Some(t) = task {
        kind = t.into();
    }
    if let Some(s) = timeout {
        secs = s;
    }
    cfg.problem = ProblemConfig::External {
        command: command.ok_or_else(|| config_error("external needs --cmd"))?,
        bounds: b.ok_or_else(|| config_error("external needs --bounds"))?,
        n_targets: m,
        task: kind,
        timeout_secs: secs,
    };
    common.apply(&mut cfg);
    Ok(cfg)
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::Json(_) | Error::InvalidBounds(_) | Error::Csv { .. } => EXIT_CONFIG,
        Error::Protocol { .. } | Error::Timeout(_) => EXIT_PROTOCOL,
        _ => EXIT_FAILURE,
    }
}

fn execute(cfg: ExperimentConfig, out: &Path) -> Result<u8, Error> {
    let report = run_benchmark(&cfg)?;
    report.write_to(out)?;
    print!("{}", report.summary_table());
    if report.all_runs_failed() {
        eprintln!("initialization failed in every run");
        return Ok(EXIT_ALL_INIT_FAILED);
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Synth {
            problem,
            pool_size,
            common,
        } => synth_config(problem, pool_size, &common).and_then(|cfg| execute(cfg, &common.out)),
        Command::Dataset {
            csv,
            schema,
            task,
            common,
        } => dataset_config(csv, schema, task, &common).and_then(|cfg| execute(cfg, &common.out)),
        Command::External {
            cmd,
            bounds,
            mode,
            n_targets,
            task,
            timeout,
            common,
        } => external_config(cmd, bounds, mode, n_targets, task, timeout, &common)
            .and_then(|cfg| execute(cfg, &common.out)),
        Command::Report { input } => ExperimentReport::read_from(&input).map(|r| {
            print!("{}", r.summary_table());
            0
        }),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
