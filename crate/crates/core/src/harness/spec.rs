//! Flat `key = value` experiment files. Sweepable keys take comma-separated
//! lists; `#` starts a comment.
//!
//! ```text
//! task = narma10
//! engines = float, stochastic, esn
//! nodes = 20, 50
//! stream_len = 16, 128
//! trials = 20
//! seed = 1
//! ```

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::activation::FitMethod;
use crate::error::{Error, Result};
use crate::readout::{MetricsConfig, DEFAULT_RIDGE};
use crate::reservoir::{short_hash, EngineKind, EsnConfig, FloatActivation, TdrConfig};
use crate::tasks::{
    gen_narma10, gen_nce, gen_sine_square, load_santa_fe, Narma10Params, NceParams, SantaFeParams,
    SineSquareParams, TaskDataset, TaskKind,
};

use super::evaluate::ModelConfig;

/// What every trial computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Workload {
    Task(TaskKind),
    /// Kernel quality and generalization rank.
    Metrics,
}

impl Workload {
    pub fn name(self) -> &'static str {
        match self {
            Workload::Task(t) => t.name(),
            Workload::Metrics => "metrics",
        }
    }
}

impl FromStr for Workload {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "metrics" | "kq-gr" => Ok(Workload::Metrics),
            other => other.parse().map(Workload::Task),
        }
    }
}

/// One point of the sweep grid for one engine. Fields an engine ignores are
/// `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub engine: EngineKind,
    pub nodes: usize,
    pub alpha: Option<f64>,
    pub gamma: Option<f64>,
    pub stream_len: Option<usize>,
    pub reseed: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub workload: Workload,
    pub engines: Vec<EngineKind>,
    pub nodes: Vec<usize>,
    pub alpha: Vec<f64>,
    pub gamma: Vec<f64>,
    pub stream_len: Vec<usize>,
    pub reseed: Vec<bool>,
    pub theta: f64,
    pub order: usize,
    pub fit: FitMethod,
    pub copy_delay: usize,
    pub pwl_segments: usize,
    pub float_activation: FloatActivation,
    pub spectral_radius: f64,
    pub input_scaling: f64,
    pub bias_scaling: f64,
    pub washout: usize,
    pub train: usize,
    pub test: usize,
    /// NARMA10 printed-form recurrence.
    pub literal: bool,
    pub signals: usize,
    pub points: usize,
    pub period: usize,
    pub snr_db: Option<f64>,
    /// Santa Fe series file.
    pub data: Option<PathBuf>,
    pub metrics: MetricsConfig,
    pub ridge: f64,
    pub trials: usize,
    pub seed: u64,
    pub out: PathBuf,
    /// Worker threads; 0 picks the machine default.
    pub threads: usize,
}

const KEYS: &[&str] = &[
    "task",
    "engines",
    "nodes",
    "alpha",
    "gamma",
    "stream_len",
    "reseed",
    "theta",
    "order",
    "fit",
    "copy_delay",
    "pwl_segments",
    "float_activation",
    "spectral_radius",
    "input_scaling",
    "bias_scaling",
    "washout",
    "train",
    "test",
    "literal",
    "signals",
    "points",
    "period",
    "snr_db",
    "data",
    "m",
    "runs",
    "noise_amp",
    "rank_tol",
    "ridge",
    "trials",
    "seed",
    "out",
    "threads",
];

fn parse_bool(s: &str) -> Result<bool> {
    match s.trim() {
        "on" | "true" | "yes" | "1" => Ok(true),
        "off" | "false" | "no" | "0" => Ok(false),
        other => Err(Error::Config(format!("expected on/off, got {other:?}"))),
    }
}

fn on_off(b: bool) -> &'static str {
    if b {
        "on"
    } else {
        "off"
    }
}

fn fit_name(f: FitMethod) -> &'static str {
    match f {
        FitMethod::Sample => "sample",
        FitMethod::LeastSquares => "least-squares",
    }
}

fn activation_name(a: FloatActivation) -> &'static str {
    match a {
        FloatActivation::Analytic => "analytic",
        FloatActivation::Bernstein => "bernstein",
    }
}

fn parse_value<T: FromStr>(key: &str, s: &str) -> Result<T>
where
    T::Err: Display,
{
    s.trim()
        .parse()
        .map_err(|e| Error::Config(format!("bad value {s:?} for {key}: {e}")))
}

fn parse_list<T, F>(key: &str, s: &str, parse: F) -> Result<Vec<T>>
where
    F: Fn(&str) -> Result<T>,
{
    let items = s
        .split(',')
        .map(str::trim)
        .filter(|i| !i.is_empty())
        .map(|i| parse(i).map_err(|e| Error::Config(format!("{key}: {e}"))))
        .collect::<Result<Vec<_>>>()?;
    if items.is_empty() {
        return Err(Error::Config(format!("{key} needs at least one value")));
    }
    Ok(items)
}

fn join<T, F: Fn(&T) -> String>(items: &[T], f: F) -> String {
    items.iter().map(f).collect::<Vec<_>>().join(", ")
}

impl ExperimentSpec {
    /// The default matrix for a workload: N in {20, 30, 40, 50},
    /// L in {16, 32, 64, 128}, all four engines, 20 trials. The metrics
    /// workload sweeps L in {16, 100, 1000} with re-seeding on and off.
    pub fn defaults(workload: Workload) -> Self {
        let mut spec = ExperimentSpec {
            workload,
            engines: vec![
                EngineKind::Stochastic,
                EngineKind::Fixed,
                EngineKind::Float,
                EngineKind::Esn,
            ],
            nodes: vec![20, 30, 40, 50],
            alpha: vec![0.6],
            gamma: vec![2.0],
            stream_len: vec![16, 32, 64, 128],
            reseed: vec![true],
            theta: 0.6,
            order: 10,
            fit: FitMethod::Sample,
            copy_delay: TdrConfig::DEFAULT_COPY_DELAY,
            pwl_segments: 16,
            float_activation: FloatActivation::Analytic,
            spectral_radius: 0.9,
            input_scaling: 0.5,
            bias_scaling: 0.0,
            washout: 50,
            train: 1000,
            test: 1000,
            literal: false,
            signals: 20,
            points: 1000,
            period: 12,
            snr_db: None,
            data: None,
            metrics: MetricsConfig::default(),
            ridge: DEFAULT_RIDGE,
            trials: 20,
            seed: 1,
            out: PathBuf::from("results"),
            threads: 0,
        };
        match workload {
            Workload::Task(TaskKind::SantaFe) => {
                spec.train = 9000;
                spec.trials = 1;
            }
            Workload::Metrics => {
                spec.engines = vec![EngineKind::Stochastic];
                spec.nodes = vec![50];
                spec.stream_len = vec![16, 100, 1000];
                spec.reseed = vec![true, false];
                spec.trials = 1;
            }
            Workload::Task(_) => {}
        }
        spec
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", lineno + 1)))?;
            let key = key.trim();
            if !KEYS.contains(&key) {
                return Err(Error::Config(format!("line {}: unknown key {key:?}", lineno + 1)));
            }
            if map.insert(key.to_string(), value.trim().to_string()).is_some() {
                return Err(Error::Config(format!("line {}: duplicate key {key:?}", lineno + 1)));
            }
        }
        let workload: Workload = map
            .get("task")
            .ok_or_else(|| Error::Config("missing key \"task\"".into()))?
            .parse()?;
        let mut spec = Self::defaults(workload);
        for (key, v) in &map {
            let k = key.as_str();
            match k {
                "task" => {}
                "engines" => spec.engines = parse_list(k, v, |s| s.parse())?,
                "nodes" => spec.nodes = parse_list(k, v, |s| parse_value(k, s))?,
                "alpha" => spec.alpha = parse_list(k, v, |s| parse_value(k, s))?,
                "gamma" => spec.gamma = parse_list(k, v, |s| parse_value(k, s))?,
                "stream_len" => spec.stream_len = parse_list(k, v, |s| parse_value(k, s))?,
                "reseed" => spec.reseed = parse_list(k, v, parse_bool)?,
                "theta" => spec.theta = parse_value(k, v)?,
                "order" => spec.order = parse_value(k, v)?,
                "fit" => spec.fit = v.parse()?,
                "copy_delay" => spec.copy_delay = parse_value(k, v)?,
                "pwl_segments" => spec.pwl_segments = parse_value(k, v)?,
                "float_activation" => spec.float_activation = v.parse()?,
                "spectral_radius" => spec.spectral_radius = parse_value(k, v)?,
                "input_scaling" => spec.input_scaling = parse_value(k, v)?,
                "bias_scaling" => spec.bias_scaling = parse_value(k, v)?,
                "washout" => spec.washout = parse_value(k, v)?,
                "train" => spec.train = parse_value(k, v)?,
                "test" => spec.test = parse_value(k, v)?,
                "literal" => spec.literal = parse_bool(v)?,
                "signals" => spec.signals = parse_value(k, v)?,
                "points" => spec.points = parse_value(k, v)?,
                "period" => spec.period = parse_value(k, v)?,
                "snr_db" => {
                    spec.snr_db = match v.as_str() {
                        "none" | "" => None,
                        s => Some(parse_value(k, s)?),
                    }
                }
                "data" => {
                    spec.data = match v.as_str() {
                        "none" | "" => None,
                        s => Some(PathBuf::from(s)),
                    }
                }
                "m" => spec.metrics.m = parse_value(k, v)?,
                "runs" => spec.metrics.runs = parse_value(k, v)?,
                "noise_amp" => spec.metrics.noise_amp = parse_value(k, v)?,
                "rank_tol" => spec.metrics.rank_tol = parse_value(k, v)?,
                "ridge" => spec.ridge = parse_value(k, v)?,
                "trials" => spec.trials = parse_value(k, v)?,
                "seed" => spec.seed = parse_value(k, v)?,
                "out" => spec.out = PathBuf::from(v),
                "threads" => spec.threads = parse_value(k, v)?,
                _ => unreachable!("key list and match disagree on {k}"),
            }
        }
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    /// Fully resolved spec; [`ExperimentSpec::parse`] reads it back unchanged.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut put = |k: &str, v: String| out.push_str(&format!("{k} = {v}\n"));
        put("task", self.workload.name().into());
        put("engines", join(&self.engines, |e| e.name().into()));
        put("nodes", join(&self.nodes, |n| n.to_string()));
        put("alpha", join(&self.alpha, |a| format!("{a:?}")));
        put("gamma", join(&self.gamma, |g| format!("{g:?}")));
        put("stream_len", join(&self.stream_len, |l| l.to_string()));
        put("reseed", join(&self.reseed, |&r| on_off(r).into()));
        put("theta", format!("{:?}", self.theta));
        put("order", self.order.to_string());
        put("fit", fit_name(self.fit).into());
        put("copy_delay", self.copy_delay.to_string());
        put("pwl_segments", self.pwl_segments.to_string());
        put("float_activation", activation_name(self.float_activation).into());
        put("spectral_radius", format!("{:?}", self.spectral_radius));
        put("input_scaling", format!("{:?}", self.input_scaling));
        put("bias_scaling", format!("{:?}", self.bias_scaling));
        put("washout", self.washout.to_string());
        put("train", self.train.to_string());
        put("test", self.test.to_string());
        put("literal", on_off(self.literal).into());
        put("signals", self.signals.to_string());
        put("points", self.points.to_string());
        put("period", self.period.to_string());
        put("snr_db", self.snr_db.map_or("none".into(), |s| format!("{s:?}")));
        put("data", self.data.as_ref().map_or("none".into(), |p| p.display().to_string()));
        put("m", self.metrics.m.to_string());
        put("runs", self.metrics.runs.to_string());
        put("noise_amp", format!("{:?}", self.metrics.noise_amp));
        put("rank_tol", format!("{:?}", self.metrics.rank_tol));
        put("ridge", format!("{:?}", self.ridge));
        put("trials", self.trials.to_string());
        put("seed", self.seed.to_string());
        put("out", self.out.display().to_string());
        put("threads", self.threads.to_string());
        out
    }

    pub fn validate(&self) -> Result<()> {
        if self.engines.is_empty()
            || self.nodes.is_empty()
            || self.alpha.is_empty()
            || self.gamma.is_empty()
            || self.reseed.is_empty()
        {
            return Err(Error::Config("sweep lists must be nonempty".into()));
        }
        if self.engines.contains(&EngineKind::Stochastic) && self.stream_len.is_empty() {
            return Err(Error::Config("stochastic engine needs at least one stream length".into()));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be >= 1".into()));
        }
        if !(self.ridge >= 0.0 && self.ridge.is_finite()) {
            return Err(Error::Config(format!("ridge must be >= 0, got {}", self.ridge)));
        }
        match self.workload {
            Workload::Metrics => {
                if self.engines.contains(&EngineKind::Esn) {
                    return Err(Error::Config("KQ/GR are defined for TDR engines only".into()));
                }
                self.metrics.validate()?;
            }
            Workload::Task(TaskKind::SantaFe) if self.data.is_none() => {
                return Err(Error::Config("santa-fe needs a data file".into()));
            }
            Workload::Task(_) => {}
        }
        let mut seen = Vec::new();
        for e in &self.engines {
            if seen.contains(e) {
                return Err(Error::Config(format!("engine {e} listed twice")));
            }
            seen.push(*e);
        }
        for cell in self.cells() {
            match self.model(&cell, 0) {
                ModelConfig::Tdr(c) => c.validate()?,
                ModelConfig::Esn(c) => c.validate()?,
            }
        }
        Ok(())
    }

    /// Sweep grid in emission order. Engines only vary along the axes they
    /// use: the ESN along N, float and fixed along N, alpha and gamma.
    pub fn cells(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        for &engine in &self.engines {
            for &nodes in &self.nodes {
                if engine == EngineKind::Esn {
                    out.push(Cell {
                        engine,
                        nodes,
                        alpha: None,
                        gamma: None,
                        stream_len: None,
                        reseed: None,
                    });
                    continue;
                }
                for &alpha in &self.alpha {
                    for &gamma in &self.gamma {
                        let base = Cell {
                            engine,
                            nodes,
                            alpha: Some(alpha),
                            gamma: Some(gamma),
                            stream_len: None,
                            reseed: None,
                        };
                        if engine != EngineKind::Stochastic {
                            out.push(base);
                            continue;
                        }
                        for &l in &self.stream_len {
                            for &r in &self.reseed {
                                out.push(Cell {
                                    stream_len: Some(l),
                                    reseed: Some(r),
                                    ..base.clone()
                                });
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// The reservoir of `cell` with mask and generators seeded from `seed`.
    pub fn model(&self, cell: &Cell, seed: u64) -> ModelConfig {
        if cell.engine == EngineKind::Esn {
            return ModelConfig::Esn(EsnConfig {
                nodes: cell.nodes,
                spectral_radius: self.spectral_radius,
                input_scaling: self.input_scaling,
                bias_scaling: self.bias_scaling,
                seed,
                washout: self.washout,
            });
        }
        let mut c = TdrConfig::new(cell.nodes, seed).with_engine(cell.engine);
        c.alpha = cell.alpha.unwrap_or(c.alpha);
        c.gamma = cell.gamma.unwrap_or(c.gamma);
        c.theta = self.theta;
        c.order = self.order;
        c.fit = self.fit;
        c.washout = self.washout;
        c.copy_delay = self.copy_delay;
        c.pwl_segments = self.pwl_segments;
        c.float_activation = self.float_activation;
        c.stream_len = cell.stream_len.unwrap_or(0);
        c.reseed = cell.reseed.unwrap_or(false);
        ModelConfig::Tdr(c)
    }

    /// Workload parameters as `key=value` lines. Together with the master
    /// seed they determine every trial seed.
    pub fn workload_key_values(&self) -> String {
        let mut out = format!("task={}\n", self.workload.name());
        match self.workload {
            Workload::Task(TaskKind::Narma10) => out.push_str(&format!(
                "washout={}\ntrain={}\ntest={}\nliteral={}\n",
                self.washout, self.train, self.test, self.literal
            )),
            Workload::Task(TaskKind::SineSquare) => out.push_str(&format!(
                "washout={}\nsignals={}\npoints={}\nperiod={}\n",
                self.washout, self.signals, self.points, self.period
            )),
            Workload::Task(TaskKind::Nce) => out.push_str(&format!(
                "washout={}\ntrain={}\ntest={}\nsnr_db={:?}\n",
                self.washout, self.train, self.test, self.snr_db
            )),
            Workload::Task(TaskKind::SantaFe) => out.push_str(&format!(
                "washout={}\ntrain={}\ntest={}\ndata={}\n",
                self.washout,
                self.train,
                self.test,
                self.data.as_ref().map_or(String::new(), |p| p.display().to_string())
            )),
            Workload::Metrics => out.push_str(&format!(
                "m={}\nruns={}\nnoise_amp={:?}\nrank_tol={:?}\n",
                self.metrics.m, self.metrics.runs, self.metrics.noise_amp, self.metrics.rank_tol
            )),
        }
        if let Workload::Task(_) = self.workload {
            out.push_str(&format!("ridge={:?}\n", self.ridge));
        }
        out
    }

    /// Hash of everything that defines a cell except the trial seed.
    pub fn cell_hash(&self, cell: &Cell) -> String {
        let model: String = self
            .model(cell, 0)
            .to_key_values()
            .lines()
            .filter(|l| !l.starts_with("seed=") && !l.starts_with("mask="))
            .map(|l| format!("{l}\n"))
            .collect();
        short_hash(&format!("{}{model}", self.workload_key_values()))
    }

    /// Seed of trial `k`. It depends on the master seed and the workload
    /// only, so every engine and sweep point of trial `k` sees the same
    /// dataset, mask and generator seeds.
    pub fn trial_seed(&self, k: usize) -> u64 {
        let key = u64::from_str_radix(&short_hash(&self.workload_key_values()), 16)
            .expect("short hash is 16 hex digits");
        let h = crate::stochastic::splitmix64(self.seed ^ crate::stochastic::splitmix64(key));
        crate::stochastic::splitmix64(h ^ k as u64)
    }

    /// Dataset of trial `k`, or `None` for the metrics workload.
    pub fn dataset(&self, k: usize) -> Result<Option<TaskDataset>> {
        self.dataset_with_seed(crate::stochastic::splitmix64(self.trial_seed(k) ^ 0x6461_7461))
    }

    /// Dataset generated directly from `seed`.
    pub fn dataset_with_seed(&self, seed: u64) -> Result<Option<TaskDataset>> {
        let ds = match self.workload {
            Workload::Metrics => return Ok(None),
            Workload::Task(TaskKind::Narma10) => gen_narma10(
                &Narma10Params {
                    washout: self.washout,
                    train: self.train,
                    test: self.test,
                    literal: self.literal,
                },
                seed,
            )?,
            Workload::Task(TaskKind::SineSquare) => gen_sine_square(
                &SineSquareParams {
                    signals: self.signals,
                    points: self.points,
                    period: self.period,
                    washout: self.washout,
                },
                seed,
            )?,
            Workload::Task(TaskKind::Nce) => gen_nce(
                &NceParams {
                    washout: self.washout,
                    train: self.train,
                    test: self.test,
                    snr_db: self.snr_db,
                },
                seed,
            )?,
            Workload::Task(TaskKind::SantaFe) => {
                let path = self
                    .data
                    .as_ref()
                    .ok_or_else(|| Error::Config("santa-fe needs a data file".into()))?;
                load_santa_fe(
                    path,
                    &SantaFeParams {
                        washout: self.washout,
                        train: self.train,
                        test: self.test,
                    },
                )?
            }
        };
        Ok(Some(ds))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_lists_and_comments() {
        let spec = ExperimentSpec::parse(
            "# sweep\ntask = narma10\nengines = float, stochastic\nnodes = 20,50\n\
             stream_len = 16, 128 # two lengths\nreseed = on, off\ntrials = 3\nseed = 9\n",
        )
        .unwrap();
        assert_eq!(spec.workload, Workload::Task(TaskKind::Narma10));
        assert_eq!(spec.engines, vec![EngineKind::Float, EngineKind::Stochastic]);
        assert_eq!(spec.nodes, vec![20, 50]);
        assert_eq!(spec.stream_len, vec![16, 128]);
        assert_eq!(spec.reseed, vec![true, false]);
        assert_eq!((spec.trials, spec.seed), (3, 9));
        // float: 2 N; stochastic: 2 N x 2 L x 2 reseed
        assert_eq!(spec.cells().len(), 2 + 8);
    }

    #[test]
    fn text_round_trip() {
        for w in ["narma10", "sine-square", "nce", "metrics"] {
            let spec = ExperimentSpec::parse(&format!("task = {w}\nalpha = 0.2, 0.7\nsnr_db = 20\n")).unwrap();
            assert_eq!(ExperimentSpec::parse(&spec.to_text()).unwrap(), spec);
        }
    }

    #[test]
    fn rejects_bad_specs() {
        for text in [
            "engines = float\n",
            "task = narma10\nbogus = 1\n",
            "task = narma10\ntrials = 0\n",
            "task = narma10\nnodes =\n",
            "task = narma10\nseed = 1\nseed = 2\n",
            "task = metrics\nengines = esn\n",
            "task = santa-fe\n",
            "task = narma10\nalpha = 1.5\n",
            "task = narma10\nengines = float, float\n",
            "task = narma10\nreseed = maybe\n",
            "task = narma10\nno equals sign\n",
        ] {
            let err = ExperimentSpec::parse(text).unwrap_err();
            assert_eq!(err.exit_code(), 1, "{text:?}: {err}");
        }
    }

    #[test]
    fn defaults_mirror_the_benchmark_matrix() {
        let spec = ExperimentSpec::defaults(Workload::Task(TaskKind::Narma10));
        assert_eq!(spec.nodes, vec![20, 30, 40, 50]);
        assert_eq!(spec.stream_len, vec![16, 32, 64, 128]);
        assert_eq!(spec.engines.len(), 4);
        assert_eq!(spec.trials, 20);
        // 4 N x (4 L + fixed + float + esn)
        assert_eq!(spec.cells().len(), 28);
        let sf = ExperimentSpec::defaults(Workload::Task(TaskKind::SantaFe));
        assert_eq!((sf.train, sf.test, sf.trials), (9000, 1000, 1));
    }

    #[test]
    fn trial_seeds_ignore_engine_axes() {
        let a = ExperimentSpec::parse("task = narma10\nengines = float\n").unwrap();
        let b = ExperimentSpec::parse("task = narma10\nengines = esn, stochastic\nstream_len = 4\nalpha = 0.1\n")
            .unwrap();
        assert_eq!(a.trial_seed(3), b.trial_seed(3));
        assert_ne!(a.trial_seed(3), a.trial_seed(4));
        let c = ExperimentSpec::parse("task = narma10\nseed = 2\n").unwrap();
        assert_ne!(a.trial_seed(0), c.trial_seed(0));
        let d = ExperimentSpec::parse("task = narma10\ntrain = 500\n").unwrap();
        assert_ne!(a.trial_seed(0), d.trial_seed(0));
    }

    #[test]
    fn cell_hash_separates_cells() {
        let spec = ExperimentSpec::parse("task = narma10\nnodes = 20\n").unwrap();
        let hashes: Vec<String> = spec.cells().iter().map(|c| spec.cell_hash(c)).collect();
        let mut unique = hashes.clone();
        unique.sort();
        unique.dedup();
        assert_eq!(unique.len(), hashes.len());
    }
}
