//! Run and sweep configuration files.
//!
//! Configs are TOML restricted to flat tables: top-level `key = value` pairs
//! plus one section per component (`[problem]`, `[optimizer]`, and the
//! per-optimizer search sections of a sweep).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::baselines::{Adam, AdamHyperParams, Gdm, GdmHyperParams};
use crate::benchmarks::{AckleyRegularized, QuadraticBasin, SyntheticClassification, Zakharov};
use crate::driver::{BatchSchedule, Optimizer};
use crate::ecdsep::{EcdHyperParams, Ecdsep};
use crate::error::{Error, Result};
use crate::objective::{BatchToken, Objective, ObjectiveEvaluation};
use crate::rng::RngStream;
use crate::trajectory::Num;
use crate::vector::ParamVector;

pub(crate) fn read_config<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text)
}

pub(crate) fn parse_config<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProblemKind {
    Quadratic,
    Zakharov,
    Ackley,
    Logistic,
}

/// `[problem]` section. Keys that do not apply to `kind` are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub kind: ProblemKind,
    pub n: Option<usize>,
    pub f2: Option<f64>,
    pub f_min: Option<f64>,
    /// Explicit start point.
    pub start: Option<Vec<f64>>,
    /// Start at `(v, ..., v)`.
    pub start_value: Option<f64>,
    pub n_features: Option<usize>,
    pub n_samples: Option<usize>,
    pub separation: Option<f64>,
    pub batch_size: Option<usize>,
    pub data_seed: Option<u64>,
    /// Cycle through minibatches instead of using the full objective.
    pub minibatch: Option<bool>,
}

impl ProblemConfig {
    pub fn new(kind: ProblemKind) -> Self {
        Self {
            kind,
            n: None,
            f2: None,
            f_min: None,
            start: None,
            start_value: None,
            n_features: None,
            n_samples: None,
            separation: None,
            batch_size: None,
            data_seed: None,
            minibatch: None,
        }
    }

    fn reject_foreign_keys(&self) -> Result<()> {
        let quad = [("f2", self.f2.is_some()), ("f_min", self.f_min.is_some())];
        let logistic = [
            ("n_features", self.n_features.is_some()),
            ("n_samples", self.n_samples.is_some()),
            ("separation", self.separation.is_some()),
            ("batch_size", self.batch_size.is_some()),
            ("data_seed", self.data_seed.is_some()),
            ("minibatch", self.minibatch.is_some()),
        ];
        let n = [("n", self.n.is_some())];
        let foreign: Vec<(&str, bool)> = match self.kind {
            ProblemKind::Quadratic => logistic.to_vec(),
            ProblemKind::Zakharov => [&quad[..], &logistic[..]].concat(),
            ProblemKind::Ackley => [&quad[..], &logistic[..], &n[..]].concat(),
            ProblemKind::Logistic => [&quad[..], &n[..]].concat(),
        };
        match foreign.iter().find(|(_, set)| *set) {
            Some((key, _)) => Err(Error::Config(format!(
                "key `{key}` does not apply to problem `{}`",
                kind_name(self.kind)
            ))),
            None => Ok(()),
        }
    }

    pub fn build(&self) -> Result<Problem> {
        self.reject_foreign_keys()?;
        let problem = match self.kind {
            ProblemKind::Quadratic => Problem::Quadratic(QuadraticBasin::new(
                self.n.unwrap_or(1),
                self.f2.unwrap_or(1.0),
                self.f_min.unwrap_or(0.0),
            )?),
            ProblemKind::Zakharov => {
                let n = self.n.unwrap_or(10);
                if n == 0 {
                    return Err(Error::Config("zakharov needs n >= 1".into()));
                }
                Problem::Zakharov(Zakharov { n })
            }
            ProblemKind::Ackley => Problem::Ackley(AckleyRegularized),
            ProblemKind::Logistic => Problem::Logistic(
                SyntheticClassification::new(
                    self.n_features.unwrap_or(8),
                    self.n_samples
                        .unwrap_or(SyntheticClassification::DEFAULT_SAMPLES),
                    self.separation.unwrap_or(2.0),
                    self.batch_size.unwrap_or(64),
                    self.data_seed.unwrap_or(0),
                )?,
                self.minibatch.unwrap_or(true),
            ),
        };
        Ok(problem)
    }

    /// Start point: explicit `start`, else `start_value` repeated, else the
    /// problem's conventional start.
    pub fn start_point(&self, problem: &Problem) -> Result<ParamVector> {
        let n = problem.dimension();
        let theta = match (&self.start, self.start_value) {
            (Some(_), Some(_)) => {
                return Err(Error::Config(
                    "set at most one of `start` and `start_value`".into(),
                ))
            }
            (Some(v), None) => ParamVector::new(v.clone())?,
            (None, Some(v)) => ParamVector::filled(n, v)?,
            (None, None) => problem.default_start()?,
        };
        if theta.len() != n {
            return Err(Error::Config(format!(
                "start point has {} entries, problem dimension is {n}",
                theta.len()
            )));
        }
        Ok(theta)
    }
}

fn kind_name(kind: ProblemKind) -> &'static str {
    match kind {
        ProblemKind::Quadratic => "quadratic",
        ProblemKind::Zakharov => "zakharov",
        ProblemKind::Ackley => "ackley",
        ProblemKind::Logistic => "logistic",
    }
}

/// A constructed objective.
#[derive(Debug, Clone)]
pub enum Problem {
    Quadratic(QuadraticBasin),
    Zakharov(Zakharov),
    Ackley(AckleyRegularized),
    /// The flag selects minibatch cycling.
    Logistic(SyntheticClassification, bool),
}

impl Problem {
    pub fn default_start(&self) -> Result<ParamVector> {
        match self {
            Problem::Quadratic(b) => ParamVector::filled(b.n, 1.0),
            Problem::Zakharov(z) => ParamVector::filled(z.n, 1.0),
            Problem::Ackley(_) => ParamVector::new(vec![-4.0, 3.0]),
            Problem::Logistic(p, _) => ParamVector::zeros(p.dimension()),
        }
    }

    pub fn batch_schedule(&self) -> BatchSchedule {
        match self {
            Problem::Logistic(_, true) => BatchSchedule::Cycling,
            _ => BatchSchedule::FullBatch,
        }
    }

    pub fn default_record_every(&self) -> u64 {
        match self {
            Problem::Logistic(..) => 10,
            _ => 1,
        }
    }

    fn inner(&self) -> &dyn Objective {
        match self {
            Problem::Quadratic(b) => b,
            Problem::Zakharov(z) => z,
            Problem::Ackley(a) => a,
            Problem::Logistic(p, _) => p,
        }
    }
}

impl Objective for Problem {
    fn dimension(&self) -> usize {
        self.inner().dimension()
    }

    fn evaluate(
        &self,
        theta: &ParamVector,
        batch: Option<BatchToken>,
    ) -> Result<ObjectiveEvaluation> {
        self.inner().evaluate(theta, batch)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OptimizerKind {
    Ecdsep,
    Gdm,
    Adam,
    Adamw,
}

impl OptimizerKind {
    pub fn name(self) -> &'static str {
        match self {
            OptimizerKind::Ecdsep => "ecdsep",
            OptimizerKind::Gdm => "gdm",
            OptimizerKind::Adam => "adam",
            OptimizerKind::Adamw => "adamw",
        }
    }
}

/// `[optimizer]` section: the kind plus any hyperparameter overrides.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizerConfig {
    pub kind: OptimizerKind,
    pub dt: Option<f64>,
    pub eta: Option<f64>,
    pub nu: Option<f64>,
    pub f0: Option<f64>,
    pub delta_e: Option<f64>,
    pub s: Option<u8>,
    pub wd: Option<f64>,
    pub conserve_energy: Option<bool>,
    pub eps1: Option<f64>,
    pub eps2: Option<f64>,
    pub self_tune_f0: Option<bool>,
    pub f0_shift_factor: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub beta1: Option<f64>,
    pub beta2: Option<f64>,
    pub epsilon: Option<f64>,
}

/// Hyperparameters resolved for one optimizer.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum OptimizerSpec {
    Ecdsep(EcdHyperParams),
    Gdm(GdmHyperParams),
    Adam(AdamHyperParams),
}

impl OptimizerConfig {
    pub fn new(kind: OptimizerKind) -> Self {
        Self {
            kind,
            dt: None,
            eta: None,
            nu: None,
            f0: None,
            delta_e: None,
            s: None,
            wd: None,
            conserve_energy: None,
            eps1: None,
            eps2: None,
            self_tune_f0: None,
            f0_shift_factor: None,
            alpha: None,
            beta: None,
            beta1: None,
            beta2: None,
            epsilon: None,
        }
    }

    fn set_keys(&self) -> Vec<&'static str> {
        let keys = [
            ("dt", self.dt.is_some()),
            ("eta", self.eta.is_some()),
            ("nu", self.nu.is_some()),
            ("f0", self.f0.is_some()),
            ("delta_e", self.delta_e.is_some()),
            ("s", self.s.is_some()),
            ("wd", self.wd.is_some()),
            ("conserve_energy", self.conserve_energy.is_some()),
            ("eps1", self.eps1.is_some()),
            ("eps2", self.eps2.is_some()),
            ("self_tune_f0", self.self_tune_f0.is_some()),
            ("f0_shift_factor", self.f0_shift_factor.is_some()),
            ("alpha", self.alpha.is_some()),
            ("beta", self.beta.is_some()),
            ("beta1", self.beta1.is_some()),
            ("beta2", self.beta2.is_some()),
            ("epsilon", self.epsilon.is_some()),
        ];
        keys.iter()
            .filter(|(_, set)| *set)
            .map(|(k, _)| *k)
            .collect()
    }

    fn allowed_keys(kind: OptimizerKind) -> &'static [&'static str] {
        match kind {
            OptimizerKind::Ecdsep => &[
                "dt",
                "eta",
                "nu",
                "f0",
                "delta_e",
                "s",
                "wd",
                "conserve_energy",
                "eps1",
                "eps2",
                "self_tune_f0",
                "f0_shift_factor",
            ],
            OptimizerKind::Gdm => &["alpha", "beta"],
            OptimizerKind::Adam | OptimizerKind::Adamw => {
                &["alpha", "beta1", "beta2", "epsilon", "wd"]
            }
        }
    }

    pub fn resolve(&self) -> Result<OptimizerSpec> {
        let allowed = Self::allowed_keys(self.kind);
        if let Some(key) = self.set_keys().into_iter().find(|k| !allowed.contains(k)) {
            return Err(Error::Config(format!(
                "key `{key}` does not apply to optimizer `{}`",
                self.kind.name()
            )));
        }
        let spec = match self.kind {
            OptimizerKind::Ecdsep => {
                let eta = self.eta.unwrap_or(1.0);
                let s = self.s.unwrap_or(1);
                let base = if s == 0 {
                    EcdHyperParams::unregularized(eta)
                } else {
                    EcdHyperParams {
                        s,
                        ..EcdHyperParams::new(eta)
                    }
                };
                let hp = EcdHyperParams {
                    dt: self.dt.unwrap_or(base.dt),
                    nu: self.nu.unwrap_or(base.nu),
                    f0: self.f0.unwrap_or(base.f0),
                    delta_e: self.delta_e.unwrap_or(base.delta_e),
                    wd: self.wd.unwrap_or(base.wd),
                    conserve_energy: self.conserve_energy.unwrap_or(base.conserve_energy),
                    eps1: self.eps1.unwrap_or(base.eps1),
                    eps2: self.eps2.unwrap_or(base.eps2),
                    self_tune_f0: self.self_tune_f0.unwrap_or(base.self_tune_f0),
                    f0_shift_factor: self.f0_shift_factor.unwrap_or(base.f0_shift_factor),
                    ..base
                };
                hp.validate()?;
                OptimizerSpec::Ecdsep(hp)
            }
            OptimizerKind::Gdm => {
                let hp = GdmHyperParams {
                    alpha: self
                        .alpha
                        .ok_or_else(|| Error::Config("gdm needs `alpha`".into()))?,
                    beta: self.beta.unwrap_or(0.9),
                };
                hp.validate()?;
                OptimizerSpec::Gdm(hp)
            }
            OptimizerKind::Adam | OptimizerKind::Adamw => {
                let defaults = AdamHyperParams::new(self.alpha.unwrap_or(1e-3));
                let hp = AdamHyperParams {
                    beta1: self.beta1.unwrap_or(defaults.beta1),
                    beta2: self.beta2.unwrap_or(defaults.beta2),
                    epsilon: self.epsilon.unwrap_or(defaults.epsilon),
                    wd: self.wd.unwrap_or(0.0),
                    decoupled_wd: self.kind == OptimizerKind::Adamw,
                    ..defaults
                };
                hp.validate()?;
                OptimizerSpec::Adam(hp)
            }
        };
        Ok(spec)
    }

    /// `key=value` pairs separated by `;`, in a fixed key order.
    pub fn describe(&self) -> String {
        let value = serde_json::to_value(self).expect("config serializes");
        let mut out = String::new();
        if let serde_json::Value::Object(map) = value {
            for key in self.set_keys() {
                if !out.is_empty() {
                    out.push(';');
                }
                match map[key].as_f64() {
                    Some(x) if !map[key].is_boolean() => {
                        let _ = write!(out, "{key}={}", Num(x));
                    }
                    _ => {
                        let _ = write!(out, "{key}={}", map[key]);
                    }
                }
            }
        }
        out
    }
}

impl OptimizerSpec {
    /// Builds the optimizer positioned at `theta0`. `rng` is only consumed by
    /// ECDSep.
    pub fn build(
        &self,
        obj: &dyn Objective,
        theta0: ParamVector,
        rng: RngStream,
    ) -> Result<Box<dyn Optimizer>> {
        Ok(match self {
            OptimizerSpec::Ecdsep(hp) => Box::new(Ecdsep::new(obj, theta0, hp.clone(), rng)?),
            OptimizerSpec::Gdm(hp) => Box::new(Gdm::new(theta0, *hp)?),
            OptimizerSpec::Adam(hp) => Box::new(Adam::new(theta0, *hp)?),
        })
    }
}

/// Settings for the `concentrate` subcommand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConcentrationSection {
    pub burn_in: u64,
    pub bins: usize,
}

/// Settings for the `eta-scan` subcommand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EtaScanSection {
    pub etas: Vec<f64>,
    /// Fraction of the run, counted from the end, averaged into the tail mean.
    pub tail_fraction: Option<f64>,
}

/// A single run, plus optional sections read by the analysis subcommands.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub max_steps: u64,
    #[serde(default)]
    pub seed: u64,
    /// Defaults to 10 for the logistic problem and 1 otherwise.
    pub record_every: Option<u64>,
    pub out: Option<PathBuf>,
    pub problem: ProblemConfig,
    pub optimizer: OptimizerConfig,
    pub concentration: Option<ConcentrationSection>,
    pub eta_scan: Option<EtaScanSection>,
}

impl RunConfig {
    pub fn new(problem: ProblemConfig, optimizer: OptimizerConfig, max_steps: u64) -> Self {
        Self {
            max_steps,
            seed: 0,
            record_every: None,
            out: None,
            problem,
            optimizer,
            concentration: None,
            eta_scan: None,
        }
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        read_config(path)
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        parse_config(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_run_config() {
        let cfg = RunConfig::from_toml_str(
            r#"
            max_steps = 100
            seed = 7
            record_every = 10

            [problem]
            kind = "quadratic"
            n = 3
            f_min = 1.0

            [optimizer]
            kind = "ecdsep"
            eta = 2.0
            nu = 0.01
            "#,
        )
        .unwrap();
        assert_eq!(cfg.seed, 7);
        let problem = cfg.problem.build().unwrap();
        assert_eq!(problem.dimension(), 3);
        assert_eq!(
            cfg.problem.start_point(&problem).unwrap().as_slice(),
            &[1.0; 3]
        );
        match cfg.optimizer.resolve().unwrap() {
            OptimizerSpec::Ecdsep(hp) => {
                assert_eq!(hp.eta, 2.0);
                assert_eq!(hp.nu, 0.01);
                assert_eq!(hp.dt, EcdHyperParams::DEFAULT_DT);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_ids_and_keys_are_config_errors() {
        let base = "max_steps = 1\n[optimizer]\nkind = \"ecdsep\"\n";
        let bad_problem = format!("{base}[problem]\nkind = \"rosenbrock\"\n");
        assert!(matches!(
            RunConfig::from_toml_str(&bad_problem),
            Err(Error::Config(_))
        ));
        let bad_key = format!("{base}[problem]\nkind = \"ackley\"\nwidth = 3\n");
        assert!(matches!(
            RunConfig::from_toml_str(&bad_key),
            Err(Error::Config(_))
        ));

        let mut opt = OptimizerConfig::new(OptimizerKind::Ecdsep);
        opt.alpha = Some(0.1);
        assert!(matches!(opt.resolve(), Err(Error::Config(_))));
        let mut problem = ProblemConfig::new(ProblemKind::Ackley);
        problem.n = Some(3);
        assert!(matches!(problem.build(), Err(Error::Config(_))));
    }

    #[test]
    fn start_point_rules() {
        let mut cfg = ProblemConfig::new(ProblemKind::Ackley);
        let problem = cfg.build().unwrap();
        assert_eq!(cfg.start_point(&problem).unwrap().as_slice(), &[-4.0, 3.0]);
        cfg.start = Some(vec![1.0, 2.0, 3.0]);
        assert!(cfg.start_point(&problem).is_err());
        cfg.start_value = Some(0.5);
        assert!(cfg.start_point(&problem).is_err());
    }

    #[test]
    fn describe_lists_set_keys_in_order() {
        let mut opt = OptimizerConfig::new(OptimizerKind::Adam);
        opt.epsilon = Some(1e-9);
        opt.alpha = Some(0.25);
        assert_eq!(opt.describe(), "alpha=0.25;epsilon=1e-9");
    }

    #[test]
    fn adam_variants_resolve() {
        let mut opt = OptimizerConfig::new(OptimizerKind::Adamw);
        opt.wd = Some(0.1);
        match opt.resolve().unwrap() {
            OptimizerSpec::Adam(hp) => assert!(hp.decoupled_wd && hp.wd == 0.1),
            other => panic!("unexpected {other:?}"),
        }
        assert!(OptimizerConfig::new(OptimizerKind::Gdm).resolve().is_err());
    }
}
