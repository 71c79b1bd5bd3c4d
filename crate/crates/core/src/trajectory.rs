//! Per-step trajectory records and their CSV form.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "step,f,energy,pi_norm,theta_norm";

/// One logged step. `energy` is NaN for optimizers without a conserved energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub step: u64,
    pub f: f64,
    pub energy_measured: f64,
    pub pi_norm: f64,
    pub theta_norm: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrajectoryLog {
    records: Vec<TrajectoryRecord>,
}

impl TrajectoryLog {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a record; steps must be strictly increasing.
    pub fn push(&mut self, record: TrajectoryRecord) -> Result<()> {
        if let Some(last) = self.records.last() {
            if record.step <= last.step {
                return Err(Error::Parameter(format!(
                    "trajectory steps must increase: {} after {}",
                    record.step, last.step
                )));
            }
        }
        self.records.push(record);
        Ok(())
    }

    pub fn records(&self) -> &[TrajectoryRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn last(&self) -> Option<&TrajectoryRecord> {
        self.records.last()
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{CSV_HEADER}")?;
        for r in &self.records {
            writeln!(
                out,
                "{},{},{},{},{}",
                r.step,
                Num(r.f),
                Num(r.energy_measured),
                Num(r.pi_norm),
                Num(r.theta_norm)
            )?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("csv output is ascii")
    }

    pub fn read_csv<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parameter("empty trajectory csv".into()))??;
        if header.trim() != CSV_HEADER {
            return Err(Error::Parameter(format!(
                "unexpected csv header `{header}`"
            )));
        }
        let mut log = Self::new();
        for (lineno, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let bad = || Error::Parameter(format!("malformed csv row {}: `{line}`", lineno + 2));
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 5 {
                return Err(bad());
            }
            let float = |s: &str| s.trim().parse::<f64>().map_err(|_| bad());
            log.push(TrajectoryRecord {
                step: fields[0].trim().parse().map_err(|_| bad())?,
                f: float(fields[1])?,
                energy_measured: float(fields[2])?,
                pi_norm: float(fields[3])?,
                theta_norm: float(fields[4])?,
            })?;
        }
        Ok(log)
    }
}

/// Shortest round-trip form of a float, switching to exponent notation for
/// very small or very large magnitudes.
#[derive(Debug, Clone, Copy)]
pub struct Num(pub f64);

impl std::fmt::Display for Num {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let a = self.0.abs();
        if a.is_finite() && a != 0.0 && !(1e-5..1e16).contains(&a) {
            write!(f, "{:e}", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}
