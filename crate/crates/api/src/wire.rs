//! Request and response bodies.

use serde::{Deserialize, Serialize};
use serde_json::json;
use stackplan_core::analysis::{SweepMode, SweepRow, SweepVariable};
use stackplan_core::config::{ConfigDocument, SharedOverride, SystemOverride};
use stackplan_core::provision::{CorePolicy, Mode};
use stackplan_core::units::{Seconds, Watts};

use crate::error::ApiError;

/// A physical quantity given either as a unit string (`"10ms"`) or as a
/// number in base units (seconds, watts, bytes).
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Quantity {
    Number(f64),
    Text(String),
}

impl Quantity {
    pub fn seconds(&self) -> Result<Seconds, ApiError> {
        match self {
            Quantity::Number(v) => Ok(Seconds(*v)),
            Quantity::Text(s) => Ok(s.parse::<Seconds>().map_err(stackplan_core::Error::from)?),
        }
    }

    pub fn watts(&self) -> Result<Watts, ApiError> {
        match self {
            Quantity::Number(v) => Ok(Watts(*v)),
            Quantity::Text(s) => Ok(s.parse::<Watts>().map_err(stackplan_core::Error::from)?),
        }
    }

    pub fn value_of(&self, variable: SweepVariable) -> Result<f64, ApiError> {
        match self {
            Quantity::Number(v) => Ok(*v),
            Quantity::Text(s) => Ok(variable.parse_value(s)?),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvaluateRequest {
    pub system: String,
    pub mode: Mode,
    #[serde(default)]
    pub sla: Option<Quantity>,
    #[serde(default)]
    pub budget: Option<Quantity>,
    #[serde(default)]
    pub core_policy: CorePolicy,
    #[serde(default)]
    pub config: Option<ConfigDocument>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LogRange {
    pub start: Quantity,
    pub stop: Quantity,
    pub points: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepRequest {
    pub variable: SweepVariable,
    #[serde(default)]
    pub values: Option<Vec<Quantity>>,
    #[serde(default)]
    pub log_range: Option<LogRange>,
    /// Defaults to every system of the scenario.
    #[serde(default)]
    pub systems: Option<Vec<String>>,
    /// Defaults to the mode the variable implies.
    #[serde(default)]
    pub mode: Option<SweepMode>,
    #[serde(default)]
    pub sla: Option<Quantity>,
    #[serde(default)]
    pub budget: Option<Quantity>,
    #[serde(default)]
    pub core_policy: CorePolicy,
    #[serde(default)]
    pub config: Option<ConfigDocument>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepResponse {
    pub variable: SweepVariable,
    pub mode: SweepMode,
    pub rows: Vec<SweepRow>,
}

/// `"1ms:10s"` or `["1ms", "10s"]`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum RangeSpec {
    Text(String),
    Pair([Quantity; 2]),
}

impl RangeSpec {
    pub fn resolve(&self) -> Result<(Seconds, Seconds), ApiError> {
        match self {
            RangeSpec::Text(s) => Ok(stackplan_core::query::parse_sla_range(s)?),
            RangeSpec::Pair([lo, hi]) => Ok((lo.seconds()?, hi.seconds()?)),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrossoverRequest {
    pub a: String,
    pub b: String,
    #[serde(default)]
    pub accessed_percent: Option<f64>,
    #[serde(default)]
    pub density_factor: Option<f64>,
    #[serde(default)]
    pub core_power_factor: Option<f64>,
    #[serde(default)]
    pub range: Option<RangeSpec>,
    #[serde(default)]
    pub config: Option<ConfigDocument>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PresetEntry {
    pub name: String,
    pub system: SystemOverride,
    pub shared: SharedOverride,
}

#[derive(Debug, Clone, Serialize)]
pub struct Health {
    pub status: &'static str,
    pub name: &'static str,
    pub version: &'static str,
}

pub(crate) fn limit_error(points: usize, limit: usize) -> ApiError {
    ApiError::bad_request(
        format!("sweep has {points} points; the limit is {limit}"),
        json!({"points": points, "limit": limit}),
    )
}
