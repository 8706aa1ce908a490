use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use sc_tdr::activation::{fit_bernstein, eval_bernstein, ActivationSpec, FitMethod};
use sc_tdr::harness::{emit_report, run_experiment, run_metrics_grid, summary_table, ExperimentSpec, Workload};
use sc_tdr::reservoir::EngineKind;
use sc_tdr::{Error, Result};

#[derive(Parser)]
#[command(name = "sc-tdr", version, about = "Stochastic-logic time-delay reservoir experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a spec file.
    Run {
        #[arg(long)]
        spec: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// KQ / GR grid; without a spec, sweeps L with re-seeding on and off.
    Metrics {
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Built-in grid used when no spec is given.
        #[arg(long, value_enum, default_value_t = Grid::Length)]
        grid: Grid,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Write a generated dataset as CSV plus its manifest.
    TaskDump {
        #[arg(long)]
        task: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Output directory; CSV goes to stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Santa Fe series file.
        #[arg(long)]
        data: Option<PathBuf>,
    },
    /// Print Bernstein coefficients approximating sin^2(gamma * s).
    BernsteinFit {
        #[arg(long, default_value_t = 2.0)]
        gamma: f64,
        #[arg(long, default_value_t = 10)]
        order: usize,
        #[arg(long, default_value = "sample")]
        method: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Grid {
    /// L in {16, 100, 1000}, stochastic engine.
    Length,
    /// alpha in 0..=1 by 0.1 and gamma in {0.5, 1, 2, 4, 8}, float engine.
    AlphaGamma,
}

#[derive(Clone, Copy, ValueEnum)]
enum OnOff {
    On,
    Off,
}

#[derive(Args)]
struct Overrides {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comma-separated engine list.
    #[arg(long, value_delimiter = ',')]
    engine: Option<Vec<String>>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, value_enum)]
    reseed: Option<OnOff>,
    #[arg(long)]
    threads: Option<usize>,
}

impl Overrides {
    fn apply(&self, spec: &mut ExperimentSpec) -> Result<()> {
        if let Some(s) = self.seed {
            spec.seed = s;
        }
        if let Some(o) = &self.out {
            spec.out = o.clone();
        }
        if let Some(list) = &self.engine {
            spec.engines = list.iter().map(|e| e.parse()).collect::<Result<Vec<EngineKind>>>()?;
        }
        if let Some(t) = self.trials {
            spec.trials = t;
        }
        if let Some(r) = self.reseed {
            spec.reseed = vec![matches!(r, OnOff::On)];
        }
        if let Some(t) = self.threads {
            spec.threads = t;
        }
        spec.validate()
    }
}

fn report(spec: &ExperimentSpec, records: &[sc_tdr::harness::RunRecord]) -> Result<()> {
    let files = emit_report(records, spec, &spec.out)?;
    print!("{}", summary_table(records));
    for f in files {
        eprintln!("wrote {}", f.display());
    }
    Ok(())
}

fn task_dump(task: &str, seed: u64, out: Option<&Path>, data: Option<PathBuf>) -> Result<()> {
    let workload: Workload = task.parse()?;
    if workload == Workload::Metrics {
        return Err(Error::Config("metrics has no dataset".into()));
    }
    let mut spec = ExperimentSpec::defaults(workload);
    spec.data = data;
    spec.validate()?;
    let ds = spec
        .dataset_with_seed(seed)?
        .ok_or_else(|| Error::Config("metrics has no dataset".into()))?;
    match out {
        None => ds.write_csv(std::io::stdout().lock()),
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| Error::Io { path: dir.into(), source: e })?;
            let csv = dir.join(format!("{}.csv", workload.name()));
            let file = std::fs::File::create(&csv).map_err(|e| Error::Io { path: csv.clone(), source: e })?;
            ds.write_csv(std::io::BufWriter::new(file))?;
            let manifest = dir.join(format!("{}.manifest.txt", workload.name()));
            std::fs::write(&manifest, ds.manifest()).map_err(|e| Error::Io { path: manifest.clone(), source: e })?;
            eprintln!("wrote {} and {}", csv.display(), manifest.display());
            Ok(())
        }
    }
}

fn bernstein(gamma: f64, order: usize, method: &str) -> Result<()> {
    let spec = ActivationSpec::new(gamma)?;
    let method: FitMethod = method.parse()?;
    let coeffs = fit_bernstein(&spec, order, method)?;
    let worst = (0..1000)
        .map(|i| {
            let s = i as f64 / 999.0;
            eval_bernstein(&coeffs, s).map(|b| (b - spec.eval(s)).abs())
        })
        .try_fold(0.0f64, |acc, e| e.map(|e| acc.max(e)))?;
    println!("# gamma={gamma:?} order={order} max_error={worst:.6}");
    print!("{}", coeffs.to_text());
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { spec, overrides } => {
            let mut spec = ExperimentSpec::from_file(&spec)?;
            overrides.apply(&mut spec)?;
            let records = run_experiment(&spec)?;
            report(&spec, &records)
        }
        Command::Metrics { spec, grid, overrides } => {
            let mut spec = match spec {
                Some(path) => ExperimentSpec::from_file(&path)?,
                None => {
                    let mut s = ExperimentSpec::defaults(Workload::Metrics);
                    if let Grid::AlphaGamma = grid {
                        s.engines = vec![EngineKind::Float];
                        s.alpha = (0..=10).map(|i| i as f64 / 10.0).collect();
                        s.gamma = vec![0.5, 1.0, 2.0, 4.0, 8.0];
                        s.reseed = vec![true];
                    }
                    s
                }
            };
            overrides.apply(&mut spec)?;
            let records = run_metrics_grid(&spec)?;
            report(&spec, &records)
        }
        Command::TaskDump { task, seed, out, data } => task_dump(&task, seed, out.as_deref(), data),
        Command::BernsteinFit { gamma, order, method } => bernstein(gamma, order, &method),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
