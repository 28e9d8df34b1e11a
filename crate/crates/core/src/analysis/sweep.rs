use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::find_system;
use crate::error::{Error, Result};
use crate::model::{evaluate, single_socket_design, SharedParams, SystemConfig, WorkloadSpec};
use crate::provision::{
    provision_capacity, provision_performance, provision_power_with_policy, CorePolicy, ProvisioningResult,
};
use crate::units::{Bytes, Seconds, Watts};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    /// Seconds.
    Sla,
    /// Watts.
    #[serde(alias = "budget")]
    PowerBudget,
    /// Bytes. The bytes touched per query stay fixed as the database grows.
    #[serde(alias = "db-size")]
    DbSize,
    /// Percent of the database touched per query.
    #[serde(alias = "accessed")]
    PercentAccessed,
    /// Fraction of one socket's memory read; memory-wall mode only.
    #[serde(alias = "fraction")]
    FractionRead,
}

impl SweepVariable {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepVariable::Sla => "sla",
            SweepVariable::PowerBudget => "power_budget",
            SweepVariable::DbSize => "db_size",
            SweepVariable::PercentAccessed => "percent_accessed",
            SweepVariable::FractionRead => "fraction_read",
        }
    }

    /// The mode a sweep over this variable implies, if only one makes sense.
    pub fn implied_mode(self) -> Option<SweepMode> {
        match self {
            SweepVariable::Sla => Some(SweepMode::Performance),
            SweepVariable::PowerBudget => Some(SweepMode::Power),
            SweepVariable::FractionRead => Some(SweepMode::MemoryWall),
            SweepVariable::DbSize | SweepVariable::PercentAccessed => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepMode {
    Performance,
    Power,
    Capacity,
    /// Per-socket time to read a fraction of installed memory.
    MemoryWall,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub values: Vec<f64>,
    pub systems: Vec<String>,
    pub mode: SweepMode,
    /// Fixed SLA when sweeping something else in performance mode.
    pub sla: Option<Seconds>,
    /// Fixed budget when sweeping something else in power mode.
    pub power_budget: Option<Watts>,
    #[serde(default)]
    pub core_policy: CorePolicy,
}

/// One sweep point. Metric columns are empty when the point is infeasible.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub system: String,
    pub variable: SweepVariable,
    pub value: f64,
    pub response_time_s: Option<f64>,
    pub total_power_w: Option<f64>,
    pub mem_power_w: Option<f64>,
    pub compute_power_w: Option<f64>,
    pub overhead_power_w: Option<f64>,
    pub capacity_bytes: Option<f64>,
    pub overprovision: Option<f64>,
    pub energy_j: Option<f64>,
    pub blades: Option<u64>,
    pub chips: Option<u64>,
    pub modules: Option<u64>,
    pub active_cores: Option<u32>,
    pub feasible: bool,
}

impl SweepRow {
    fn from_result(system: &str, variable: SweepVariable, value: f64, r: &ProvisioningResult) -> Self {
        let m = &r.metrics;
        SweepRow {
            system: system.to_string(),
            variable,
            value,
            response_time_s: Some(m.response_time.get()),
            total_power_w: Some(m.total_power.get()),
            mem_power_w: Some(m.mem_power.get()),
            compute_power_w: Some(m.compute_power.get()),
            overhead_power_w: Some(m.overhead_power.get()),
            capacity_bytes: Some(m.total_capacity.get()),
            overprovision: Some(m.overprovision_factor),
            energy_j: Some(m.energy_per_query),
            blades: Some(r.design.blades),
            chips: Some(r.design.compute_chips),
            modules: Some(r.design.mem_modules),
            active_cores: Some(r.design.active_cores_per_chip),
            feasible: true,
        }
    }

    fn infeasible(system: &str, variable: SweepVariable, value: f64) -> Self {
        SweepRow {
            system: system.to_string(),
            variable,
            value,
            response_time_s: None,
            total_power_w: None,
            mem_power_w: None,
            compute_power_w: None,
            overhead_power_w: None,
            capacity_bytes: None,
            overprovision: None,
            energy_j: None,
            blades: None,
            chips: None,
            modules: None,
            active_cores: None,
            feasible: false,
        }
    }
}

/// `points` log-spaced values from `start` to `stop` inclusive.
pub fn log_space(start: f64, stop: f64, points: usize) -> Result<Vec<f64>> {
    if !(start.is_finite() && stop.is_finite() && start > 0.0 && stop > 0.0) {
        return Err(Error::invalid("log-range", format!("bounds must be positive, got {start}:{stop}")));
    }
    match points {
        0 => Err(Error::invalid("log-range", "needs at least one point")),
        1 => Ok(vec![start]),
        _ if start >= stop => Err(Error::invalid("log-range", format!("start {start} must be below stop {stop}"))),
        _ => {
            let (a, b) = (start.ln(), stop.ln());
            let last = (points - 1) as f64;
            let mut values: Vec<f64> = (0..points).map(|i| (a + (b - a) * i as f64 / last).exp()).collect();
            values[0] = start;
            values[points - 1] = stop;
            Ok(values)
        }
    }
}

impl SweepSpec {
    pub fn points(&self) -> usize {
        self.values.len() * self.systems.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::invalid("values", "must not be empty"));
        }
        if self.systems.is_empty() {
            return Err(Error::invalid("systems", "must not be empty"));
        }
        if let Some(v) = self.values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::invalid("values", format!("must all be positive, got {v}")));
        }
        if self.values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("values", "must be strictly increasing"));
        }
        let upper = match self.variable {
            SweepVariable::PercentAccessed => Some(100.0),
            SweepVariable::FractionRead => Some(1.0),
            _ => None,
        };
        if let (Some(upper), Some(last)) = (upper, self.values.last()) {
            if *last > upper {
                return Err(Error::invalid(
                    "values",
                    format!("{} values must not exceed {upper}, got {last}", self.variable.as_str()),
                ));
            }
        }
        match (self.variable.implied_mode(), self.mode) {
            (Some(implied), mode) if implied != mode => {
                return Err(Error::invalid(
                    "mode",
                    format!("sweeping {} requires mode {implied:?}, got {mode:?}", self.variable.as_str()),
                ))
            }
            (None, SweepMode::MemoryWall) => {
                return Err(Error::invalid("mode", "memory-wall mode only sweeps fraction_read"))
            }
            _ => {}
        }
        if let Some(sla) = self.sla {
            crate::provision::Provisioning::Performance { sla }.validate()?;
        }
        if let Some(budget) = self.power_budget {
            crate::provision::Provisioning::Power { budget, policy: self.core_policy }.validate()?;
        }
        if self.mode == SweepMode::Performance && self.variable != SweepVariable::Sla && self.sla.is_none() {
            return Err(Error::invalid("sla", "required for a performance-mode sweep"));
        }
        if self.mode == SweepMode::Power && self.variable != SweepVariable::PowerBudget && self.power_budget.is_none() {
            return Err(Error::invalid("budget", "required for a power-mode sweep"));
        }
        Ok(())
    }
}

fn run_point(
    spec: &SweepSpec,
    cfg: &SystemConfig,
    shared: &SharedParams,
    work: &WorkloadSpec,
    value: f64,
) -> Result<ProvisioningResult> {
    let work = match spec.variable {
        SweepVariable::DbSize => WorkloadSpec::new(Bytes(value), work.bytes_accessed)?,
        SweepVariable::PercentAccessed => WorkloadSpec::from_percent(work.db_size, value)?,
        _ => *work,
    };
    match spec.mode {
        SweepMode::Performance => {
            let sla = if spec.variable == SweepVariable::Sla { Seconds(value) } else { spec.sla.unwrap() };
            provision_performance(cfg, shared, &work, sla)
        }
        SweepMode::Power => {
            let budget =
                if spec.variable == SweepVariable::PowerBudget { Watts(value) } else { spec.power_budget.unwrap() };
            provision_power_with_policy(cfg, shared, &work, budget, spec.core_policy)
        }
        SweepMode::Capacity => provision_capacity(cfg, shared, &work),
        SweepMode::MemoryWall => {
            let design = single_socket_design(cfg, shared);
            let socket = cfg.socket_capacity();
            let work = WorkloadSpec::new(socket, Bytes(value * socket.get()))?;
            let metrics = evaluate(cfg, shared, &work, &design)?;
            Ok(ProvisioningResult {
                design,
                metrics,
                binding_constraint: crate::provision::BindingConstraint::Capacity,
            })
        }
    }
}

/// One row per (system, value), systems in the given order and values
/// ascending. Points are evaluated in parallel; infeasible points become
/// flagged rows instead of errors.
pub fn run_sweep(
    spec: &SweepSpec,
    cfgs: &[SystemConfig],
    shared: &SharedParams,
    work: &WorkloadSpec,
) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    shared.validate()?;
    work.validate()?;
    let systems = spec
        .systems
        .iter()
        .map(|name| {
            let cfg = find_system(cfgs, name)?;
            cfg.validate()?;
            Ok(cfg)
        })
        .collect::<Result<Vec<_>>>()?;

    let points: Vec<(&SystemConfig, f64)> =
        systems.iter().flat_map(|cfg| spec.values.iter().map(move |v| (*cfg, *v))).collect();
    points
        .par_iter()
        .map(|&(cfg, value)| match run_point(spec, cfg, shared, work, value) {
            Ok(r) => Ok(SweepRow::from_result(&cfg.name, spec.variable, value, &r)),
            Err(Error::Infeasible { .. } | Error::Invalid { .. }) => {
                Ok(SweepRow::infeasible(&cfg.name, spec.variable, value))
            }
            Err(e) => Err(e),
        })
        .collect()
}
