use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{SharedParams, SystemConfig, WorkloadSpec};
use crate::provision::{provision_capacity, provision_power_with_policy, CorePolicy};
use crate::units::Watts;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyRow {
    pub system: String,
    pub energy_j: f64,
    pub response_time_s: f64,
    pub total_power_w: f64,
}

/// Energy per query of each capacity-provisioned cluster.
pub fn energy_report(cfgs: &[SystemConfig], shared: &SharedParams, work: &WorkloadSpec) -> Result<Vec<EnergyRow>> {
    cfgs.iter()
        .map(|cfg| {
            let m = provision_capacity(cfg, shared, work)?.metrics;
            Ok(EnergyRow {
                system: cfg.name.clone(),
                energy_j: m.energy_per_query,
                response_time_s: m.response_time.get(),
                total_power_w: m.total_power.get(),
            })
        })
        .collect()
}

/// Share of each power component, in percent. Empty when the budget cannot
/// power the system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BreakdownRow {
    pub system: String,
    pub feasible: bool,
    pub compute_pct: Option<f64>,
    pub memory_pct: Option<f64>,
    pub overhead_pct: Option<f64>,
    pub total_power_w: Option<f64>,
}

impl BreakdownRow {
    /// Name of the largest component.
    pub fn dominant(&self) -> Option<&'static str> {
        let (c, m, o) = (self.compute_pct?, self.memory_pct?, self.overhead_pct?);
        Some(if c >= m && c >= o {
            "compute"
        } else if m >= o {
            "memory"
        } else {
            "overhead"
        })
    }
}

/// Power composition of each system's power-provisioned cluster.
pub fn power_breakdown(
    cfgs: &[SystemConfig],
    shared: &SharedParams,
    work: &WorkloadSpec,
    budget: Watts,
    policy: CorePolicy,
) -> Result<Vec<BreakdownRow>> {
    cfgs.iter()
        .map(|cfg| match provision_power_with_policy(cfg, shared, work, budget, policy) {
            Ok(r) => {
                let m = r.metrics;
                let total = m.total_power.get();
                Ok(BreakdownRow {
                    system: cfg.name.clone(),
                    feasible: true,
                    compute_pct: Some(100.0 * m.compute_power.get() / total),
                    memory_pct: Some(100.0 * m.mem_power.get() / total),
                    overhead_pct: Some(100.0 * m.overhead_power.get() / total),
                    total_power_w: Some(total),
                })
            }
            Err(Error::Infeasible { .. }) => Ok(BreakdownRow {
                system: cfg.name.clone(),
                feasible: false,
                compute_pct: None,
                memory_pct: None,
                overhead_pct: None,
                total_power_w: None,
            }),
            Err(e) => Err(e),
        })
        .collect()
}
