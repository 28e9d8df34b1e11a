//! Request-level helpers shared by the command line and the HTTP service:
//! unit-aware parsing of sweep values and ranges, and crossover searches
//! with sensitivity transforms applied.

use serde::{Deserialize, Serialize};

use crate::analysis::{find_crossover, log_space, scale_compute_power, scale_density, CrossoverResult, SweepVariable};
use crate::config::Scenario;
use crate::error::{Error, Result};
use crate::model::WorkloadSpec;
use crate::units::{Bytes, Seconds, Watts};

impl SweepVariable {
    /// Parses one sweep value in the variable's natural unit: seconds for
    /// `sla`, watts for `power_budget`, bytes for `db_size`. A bare number
    /// is taken in base units.
    pub fn parse_value(self, text: &str) -> Result<f64> {
        let text = text.trim();
        Ok(match self {
            SweepVariable::Sla => text.parse::<Seconds>()?.get(),
            SweepVariable::PowerBudget => text.parse::<Watts>()?.get(),
            SweepVariable::DbSize => text.parse::<Bytes>()?.get(),
            SweepVariable::PercentAccessed | SweepVariable::FractionRead => {
                text.parse::<f64>().map_err(|_| Error::invalid("values", format!("{text:?} is not a number")))?
            }
        })
    }

    /// Comma-separated values, e.g. `10ms,100ms,1s`.
    pub fn parse_list(self, text: &str) -> Result<Vec<f64>> {
        if text.trim().is_empty() {
            return Err(Error::invalid("values", "must not be empty"));
        }
        text.split(',').map(|v| self.parse_value(v)).collect()
    }

    /// `start:stop:points`, log-spaced, e.g. `1e-4:1:50` or `1ms:1s:7`.
    pub fn parse_log_range(self, text: &str) -> Result<Vec<f64>> {
        let parts: Vec<&str> = text.split(':').collect();
        let [start, stop, points] = parts[..] else {
            return Err(Error::invalid("log-range", format!("expected start:stop:points, got {text:?}")));
        };
        let points: usize = points
            .trim()
            .parse()
            .map_err(|_| Error::invalid("log-range", format!("point count {points:?} is not a whole number")))?;
        log_space(self.parse_value(start)?, self.parse_value(stop)?, points)
    }
}

/// Parses an SLA search range such as `1ms:10s`.
pub fn parse_sla_range(text: &str) -> Result<(Seconds, Seconds)> {
    let Some((lo, hi)) = text.split_once(':') else {
        return Err(Error::invalid("range", format!("expected lo:hi, got {text:?}")));
    };
    Ok((lo.trim().parse()?, hi.trim().parse()?))
}

/// A crossover search between two systems of a scenario. Density scales
/// main-memory module capacity on both systems; the core power factor
/// scales the shared per-core power.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossoverQuery {
    pub a: String,
    pub b: String,
    pub accessed_percent: Option<f64>,
    pub density_factor: f64,
    pub core_power_factor: f64,
    pub range: (Seconds, Seconds),
}

impl CrossoverQuery {
    pub fn new(a: impl Into<String>, b: impl Into<String>) -> Self {
        CrossoverQuery {
            a: a.into(),
            b: b.into(),
            accessed_percent: None,
            density_factor: 1.0,
            core_power_factor: 1.0,
            range: crate::analysis::DEFAULT_SLA_RANGE,
        }
    }

    pub fn run(&self, scenario: &Scenario) -> Result<CrossoverResult> {
        let a = scale_density(scenario.system(&self.a)?, self.density_factor)?;
        let b = scale_density(scenario.system(&self.b)?, self.density_factor)?;
        let shared = scale_compute_power(&scenario.shared, self.core_power_factor)?;
        let work = match self.accessed_percent {
            Some(pct) => WorkloadSpec::from_percent(scenario.workload.db_size, pct)?,
            None => scenario.workload,
        };
        find_crossover(&a, &b, &shared, &work, self.range)
    }
}
