//! Sweeps, crossover search, sensitivity transforms and summary reports
//! built on the provisioning solvers.

mod crossover;
mod reports;
mod sensitivity;
mod sweep;

pub use crossover::{bisect_flip, find_crossover, CrossoverResult, DEFAULT_SLA_RANGE};
pub use reports::{energy_report, power_breakdown, BreakdownRow, EnergyRow};
pub use sensitivity::{scale_compute_power, scale_density};
pub use sweep::{log_space, run_sweep, SweepMode, SweepRow, SweepSpec, SweepVariable};

use crate::error::{Error, Result};
use crate::model::SystemConfig;

pub(crate) fn find_system<'a>(cfgs: &'a [SystemConfig], name: &str) -> Result<&'a SystemConfig> {
    cfgs.iter().find(|c| c.name == name).ok_or_else(|| Error::UnknownSystem {
        name: name.to_string(),
        valid: cfgs.iter().map(|c| c.name.clone()).collect(),
    })
}
