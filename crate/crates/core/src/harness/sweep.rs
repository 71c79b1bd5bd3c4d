use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::driver::{drive, RunOptions};
use crate::error::{Error, Result};
use crate::harness::config::{
    parse_config, read_config, OptimizerConfig, OptimizerKind, ProblemConfig,
};
use crate::harness::write_file;
use crate::rng::RngStream;
use crate::trajectory::Num;

/// A hyperparameter fixed to one value or drawn from `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamRange {
    Fixed(f64),
    Interval([f64; 2]),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BoolChoice {
    Fixed(bool),
    Choice(Vec<bool>),
}

/// Per-optimizer search section of a sweep file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchSpace {
    pub dt: Option<ParamRange>,
    pub eta: Option<ParamRange>,
    pub nu: Option<ParamRange>,
    pub f0: Option<ParamRange>,
    pub delta_e: Option<ParamRange>,
    pub wd: Option<ParamRange>,
    pub s: Option<u8>,
    pub conserve_energy: Option<BoolChoice>,
    pub alpha: Option<ParamRange>,
    pub beta: Option<ParamRange>,
    pub beta1: Option<ParamRange>,
    pub beta2: Option<ParamRange>,
    pub epsilon: Option<ParamRange>,
    /// Must match the sweep-wide budget when given.
    pub trials: Option<u64>,
    /// Must match the sweep-wide step count when given.
    pub steps: Option<u64>,
}

impl SearchSpace {
    fn merged_over(self, preset: SearchSpace) -> SearchSpace {
        SearchSpace {
            dt: self.dt.or(preset.dt),
            eta: self.eta.or(preset.eta),
            nu: self.nu.or(preset.nu),
            f0: self.f0.or(preset.f0),
            delta_e: self.delta_e.or(preset.delta_e),
            wd: self.wd.or(preset.wd),
            s: self.s.or(preset.s),
            conserve_energy: self.conserve_energy.or(preset.conserve_energy),
            alpha: self.alpha.or(preset.alpha),
            beta: self.beta.or(preset.beta),
            beta1: self.beta1.or(preset.beta1),
            beta2: self.beta2.or(preset.beta2),
            epsilon: self.epsilon.or(preset.epsilon),
            trials: self.trials,
            steps: self.steps,
        }
    }

    /// Draws one configuration. Scale-like parameters (`dt`, `alpha`, `nu`,
    /// `wd`, `epsilon`) with a positive lower bound are sampled
    /// log-uniformly, everything else uniformly.
    pub fn sample(&self, kind: OptimizerKind, rng: &mut RngStream) -> Result<OptimizerConfig> {
        fn draw(name: &str, r: Option<ParamRange>, rng: &mut RngStream) -> Result<Option<f64>> {
            let log_scale = matches!(name, "dt" | "alpha" | "nu" | "wd" | "epsilon");
            Ok(match r {
                None => None,
                Some(ParamRange::Fixed(v)) => Some(v),
                Some(ParamRange::Interval([lo, hi])) => {
                    if !(lo <= hi && lo.is_finite() && hi.is_finite()) {
                        return Err(Error::Config(format!(
                            "bad range for `{name}`: [{lo}, {hi}]"
                        )));
                    }
                    Some(if log_scale && lo > 0.0 {
                        rng.log_uniform(lo, hi)
                    } else {
                        rng.uniform(lo, hi)
                    })
                }
            })
        }
        let mut cfg = OptimizerConfig::new(kind);
        cfg.dt = draw("dt", self.dt, rng)?;
        cfg.eta = draw("eta", self.eta, rng)?;
        cfg.nu = draw("nu", self.nu, rng)?;
        cfg.f0 = draw("f0", self.f0, rng)?;
        cfg.delta_e = draw("delta_e", self.delta_e, rng)?;
        cfg.wd = draw("wd", self.wd, rng)?;
        cfg.s = self.s;
        cfg.conserve_energy = match &self.conserve_energy {
            None => None,
            Some(BoolChoice::Fixed(b)) => Some(*b),
            Some(BoolChoice::Choice(options)) if options.is_empty() => {
                return Err(Error::Config("empty `conserve_energy` choice".into()))
            }
            Some(BoolChoice::Choice(options)) => {
                let pick = (rng.uniform(0.0, options.len() as f64) as usize).min(options.len() - 1);
                Some(options[pick])
            }
        };
        cfg.alpha = draw("alpha", self.alpha, rng)?;
        cfg.beta = draw("beta", self.beta, rng)?;
        cfg.beta1 = draw("beta1", self.beta1, rng)?;
        cfg.beta2 = draw("beta2", self.beta2, rng)?;
        cfg.epsilon = draw("epsilon", self.epsilon, rng)?;
        Ok(cfg)
    }
}

/// Ready-made search spaces for the two synthetic landscapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    Zakharov,
    Ackley,
}

impl Preset {
    pub fn space(self, kind: OptimizerKind) -> SearchSpace {
        use ParamRange::{Fixed, Interval};
        let adam = |alpha: [f64; 2]| SearchSpace {
            alpha: Some(Interval(alpha)),
            beta1: Some(Interval([0.7, 1.0])),
            beta2: Some(Interval([0.7, 1.0])),
            epsilon: Some(Interval([1e-12, 1e-6])),
            ..SearchSpace::default()
        };
        let gdm = SearchSpace {
            alpha: Some(Interval([1e-8, 1e-3])),
            beta: Some(Interval([0.8, 1.0])),
            ..SearchSpace::default()
        };
        match (self, kind) {
            (_, OptimizerKind::Gdm) => gdm,
            (Preset::Zakharov, OptimizerKind::Adam | OptimizerKind::Adamw) => adam([1e-2, 1e4]),
            (Preset::Ackley, OptimizerKind::Adam | OptimizerKind::Adamw) => adam([1e-4, 1.0]),
            (Preset::Zakharov, OptimizerKind::Ecdsep) => SearchSpace {
                dt: Some(Interval([1e-2, 1e4])),
                eta: Some(Interval([1.0, 4.0])),
                nu: Some(Interval([1e-8, 1.0])),
                delta_e: Some(Interval([0.0, 5.0])),
                conserve_energy: Some(BoolChoice::Choice(vec![true, false])),
                ..SearchSpace::default()
            },
            (Preset::Ackley, OptimizerKind::Ecdsep) => SearchSpace {
                dt: Some(Interval([1e-4, 1.0])),
                eta: Some(Interval([1.0, 10.0])),
                nu: Some(Interval([1e-5, 1.0])),
                delta_e: Some(Fixed(0.0)),
                ..SearchSpace::default()
            },
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    /// Objective at the last iterate.
    #[default]
    Final,
    /// Smallest objective seen during the trial.
    Best,
}

/// A sweep file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    #[serde(default)]
    pub seed: u64,
    /// Trial budget, identical for every optimizer.
    pub trials: u64,
    /// Iterations per trial, identical for every optimizer.
    pub steps: u64,
    #[serde(default)]
    pub metric: Metric,
    pub preset: Option<Preset>,
    pub optimizers: Vec<OptimizerKind>,
    /// Run trials on the rayon pool.
    #[serde(default = "default_parallel")]
    pub parallel: bool,
    pub problem: ProblemConfig,
    pub ecdsep: Option<SearchSpace>,
    pub gdm: Option<SearchSpace>,
    pub adam: Option<SearchSpace>,
    pub adamw: Option<SearchSpace>,
}

fn default_parallel() -> bool {
    true
}

impl SweepSpec {
    pub fn from_path(path: &Path) -> Result<Self> {
        let spec: Self = read_config(path)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let spec: Self = parse_config(text)?;
        spec.validate()?;
        Ok(spec)
    }

    fn section(&self, kind: OptimizerKind) -> Option<&SearchSpace> {
        match kind {
            OptimizerKind::Ecdsep => self.ecdsep.as_ref(),
            OptimizerKind::Gdm => self.gdm.as_ref(),
            OptimizerKind::Adam => self.adam.as_ref(),
            OptimizerKind::Adamw => self.adamw.as_ref(),
        }
    }

    /// Search space for `kind`: explicit keys override the preset.
    pub fn space(&self, kind: OptimizerKind) -> SearchSpace {
        let own = self.section(kind).cloned().unwrap_or_default();
        match self.preset {
            Some(p) => own.merged_over(p.space(kind)),
            None => own,
        }
    }

    /// Checks the fixed-budget protocol: same trial count and same iteration
    /// count for every optimizer, no duplicates, nothing unused.
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 || self.steps == 0 {
            return Err(Error::Config(
                "`trials` and `steps` must be at least 1".into(),
            ));
        }
        if self.optimizers.is_empty() {
            return Err(Error::Config("`optimizers` is empty".into()));
        }
        let mut seen = self.optimizers.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != self.optimizers.len() {
            return Err(Error::Config(
                "`optimizers` lists an optimizer twice".into(),
            ));
        }
        for kind in [
            OptimizerKind::Ecdsep,
            OptimizerKind::Gdm,
            OptimizerKind::Adam,
            OptimizerKind::Adamw,
        ] {
            let Some(section) = self.section(kind) else {
                continue;
            };
            if !self.optimizers.contains(&kind) {
                return Err(Error::Config(format!(
                    "section [{}] present but `{}` is not in `optimizers`",
                    kind.name(),
                    kind.name()
                )));
            }
            if section.trials.is_some_and(|t| t != self.trials)
                || section.steps.is_some_and(|s| s != self.steps)
            {
                return Err(Error::Config(format!(
                    "[{}] overrides the trial budget or step count; every optimizer gets {} trials of {} steps",
                    kind.name(),
                    self.trials,
                    self.steps
                )));
            }
        }
        self.problem.build()?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialResult {
    pub optimizer: OptimizerKind,
    pub trial: u64,
    /// 1-based rank within the optimizer's trials.
    pub rank: u64,
    pub params: OptimizerConfig,
    pub final_f: f64,
    pub best_f: f64,
    pub steps: u64,
    pub terminated: bool,
    pub diverged: bool,
    /// Selection metric; `+inf` for diverged trials.
    pub metric: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    /// Grouped by optimizer in the order of the spec, ranked within each group.
    pub trials: Vec<TrialResult>,
    pub steps: u64,
}

pub const SWEEP_CSV_HEADER: &str =
    "optimizer,trial,rank,metric,final_f,best_f,steps,terminated,diverged,params";

impl SweepReport {
    pub fn best(&self, kind: OptimizerKind) -> Option<&TrialResult> {
        self.trials
            .iter()
            .find(|t| t.optimizer == kind && t.rank == 1)
    }

    pub fn for_optimizer(&self, kind: OptimizerKind) -> impl Iterator<Item = &TrialResult> {
        self.trials.iter().filter(move |t| t.optimizer == kind)
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::from(SWEEP_CSV_HEADER);
        out.push('\n');
        for t in &self.trials {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                t.optimizer.name(),
                t.trial,
                t.rank,
                Num(t.metric),
                Num(t.final_f),
                Num(t.best_f),
                t.steps,
                t.terminated,
                t.diverged,
                t.params.describe()
            );
        }
        out
    }

    /// Best trial per optimizer as pretty JSON.
    pub fn summary_json(&self) -> String {
        let best: Vec<serde_json::Value> = self
            .trials
            .iter()
            .filter(|t| t.rank == 1)
            .map(|t| {
                serde_json::json!({
                    "optimizer": t.optimizer.name(),
                    "trial": t.trial,
                    "metric": finite_or_null(t.metric),
                    "final_f": finite_or_null(t.final_f),
                    "params": t.params.describe(),
                })
            })
            .collect();
        serde_json::to_string_pretty(&serde_json::json!({ "steps": self.steps, "best": best }))
            .expect("summary serializes")
            + "\n"
    }

    pub fn write_artifacts(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        write_file(&dir.join("sweep.csv"), self.to_csv_string().as_bytes())?;
        write_file(
            &dir.join("sweep_summary.json"),
            self.summary_json().as_bytes(),
        )
    }
}

fn finite_or_null(v: f64) -> serde_json::Value {
    if v.is_finite() {
        serde_json::json!(v)
    } else {
        serde_json::Value::Null
    }
}

fn run_trial(
    spec: &SweepSpec,
    kind: OptimizerKind,
    space: &SearchSpace,
    trial: u64,
    stream: u64,
) -> Result<TrialResult> {
    let mut rng = RngStream::for_trial(spec.seed, stream);
    let params = space.sample(kind, &mut rng)?;
    let problem = spec.problem.build()?;
    let theta0 = spec.problem.start_point(&problem)?;
    let hp = params.resolve()?;
    let opts = RunOptions::new(spec.steps)
        .without_log()
        .batches(problem.batch_schedule());

    let outcome = hp
        .build(&problem, theta0, rng)
        .and_then(|mut opt| drive(opt.as_mut(), &problem, &opts, |_, _| {}));
    let (final_f, best_f, steps, terminated, failed) = match outcome {
        Ok(o) => (o.final_f, o.best_f, o.steps, o.terminated, o.failed()),
        // a sampled configuration whose initial energy is unusable counts as diverged
        Err(Error::Init(_)) => (f64::NAN, f64::NAN, 0, false, true),
        Err(e) => return Err(e),
    };
    let diverged = failed || !final_f.is_finite();
    let metric = match (diverged, spec.metric) {
        (true, _) => f64::INFINITY,
        (false, Metric::Final) => final_f,
        (false, Metric::Best) => best_f,
    };
    Ok(TrialResult {
        optimizer: kind,
        trial,
        rank: 0,
        params,
        final_f,
        best_f,
        steps,
        terminated,
        diverged,
        metric,
    })
}

/// Random search at a fixed trial budget.
///
/// Trial `t` of the `k`-th listed optimizer draws from the stream
/// `(seed, k * trials + t)`, so results do not depend on thread scheduling.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepReport> {
    spec.validate()?;
    let jobs: Vec<(usize, OptimizerKind, u64)> = spec
        .optimizers
        .iter()
        .enumerate()
        .flat_map(|(k, &kind)| (0..spec.trials).map(move |t| (k, kind, t)))
        .collect();
    let spaces: Vec<SearchSpace> = spec.optimizers.iter().map(|&k| spec.space(k)).collect();
    let job = |&(k, kind, t): &(usize, OptimizerKind, u64)| {
        run_trial(spec, kind, &spaces[k], t, k as u64 * spec.trials + t)
    };
    let results: Vec<TrialResult> = if spec.parallel {
        jobs.par_iter().map(job).collect::<Result<_>>()?
    } else {
        jobs.iter().map(job).collect::<Result<_>>()?
    };

    let mut ranked = Vec::with_capacity(results.len());
    for chunk in results.chunks(spec.trials as usize) {
        let mut group = chunk.to_vec();
        group.sort_by(|a, b| a.metric.total_cmp(&b.metric).then(a.trial.cmp(&b.trial)));
        for (i, t) in group.iter_mut().enumerate() {
            t.rank = i as u64 + 1;
        }
        ranked.extend(group);
    }
    Ok(SweepReport {
        trials: ranked,
        steps: spec.steps,
    })
}
