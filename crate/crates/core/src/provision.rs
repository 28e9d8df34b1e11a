//! Cluster sizing under a response-time SLA, a power budget, or a fixed
//! data capacity.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    bandwidth_matched_cores, ceil_div, ceil_tol, chip_bandwidth, design_for_capacity, evaluate, floor_tol,
    max_chip_perf, ClusterDesign, ClusterMetrics, SharedParams, SystemConfig, WorkloadSpec, FEASIBILITY_TOL,
};
use crate::units::{BytesPerSec, Seconds, Watts};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Performance,
    Power,
    Capacity,
}

/// A provisioning mode together with its constraint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Provisioning {
    Performance { sla: Seconds },
    Power { budget: Watts, policy: CorePolicy },
    Capacity,
}

impl Provisioning {
    pub fn mode(&self) -> Mode {
        match self {
            Provisioning::Performance { .. } => Mode::Performance,
            Provisioning::Power { .. } => Mode::Power,
            Provisioning::Capacity => Mode::Capacity,
        }
    }

    /// Pairs `mode` with its argument. The argument belonging to another
    /// mode is rejected rather than ignored.
    pub fn from_parts(mode: Mode, sla: Option<Seconds>, budget: Option<Watts>, policy: CorePolicy) -> Result<Self> {
        let p = match (mode, sla, budget) {
            (Mode::Performance, Some(sla), None) => Provisioning::Performance { sla },
            (Mode::Power, None, Some(budget)) => Provisioning::Power { budget, policy },
            (Mode::Capacity, None, None) => Provisioning::Capacity,
            (Mode::Performance, None, _) => return Err(Error::invalid("sla", "required in performance mode")),
            (Mode::Power, _, None) => return Err(Error::invalid("budget", "required in power mode")),
            (_, Some(_), _) => return Err(Error::invalid("sla", "only applies in performance mode")),
            (_, _, Some(_)) => return Err(Error::invalid("budget", "only applies in power mode")),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Provisioning::Performance { sla } if !(sla.get().is_finite() && sla.get() > 0.0) => {
                Err(Error::invalid("sla", format!("must be positive, got {}", sla.get())))
            }
            Provisioning::Power { budget, .. } if !(budget.get().is_finite() && budget.get() > 0.0) => {
                Err(Error::invalid("budget", format!("must be positive, got {}", budget.get())))
            }
            _ => Ok(()),
        }
    }
}

/// Requirement that fixed the chip count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BindingConstraint {
    Bandwidth,
    Capacity,
    Power,
}

/// How many cores per chip a power-provisioned blade is charged for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorePolicy {
    /// Every core on every chip.
    #[default]
    Full,
    /// Only the cores needed to saturate chip bandwidth.
    Matched,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProvisioningResult {
    pub design: ClusterDesign,
    pub metrics: ClusterMetrics,
    pub binding_constraint: BindingConstraint,
}

fn check_inputs(cfg: &SystemConfig, shared: &SharedParams, work: &WorkloadSpec) -> Result<()> {
    cfg.validate()?;
    shared.validate()?;
    work.validate()
}

pub fn provision(
    cfg: &SystemConfig,
    shared: &SharedParams,
    work: &WorkloadSpec,
    request: &Provisioning,
) -> Result<ProvisioningResult> {
    request.validate()?;
    match *request {
        Provisioning::Performance { sla } => provision_performance(cfg, shared, work, sla),
        Provisioning::Power { budget, policy } => provision_power_with_policy(cfg, shared, work, budget, policy),
        Provisioning::Capacity => provision_capacity(cfg, shared, work),
    }
}

/// Smallest cluster whose aggregate throughput reads `bytes_accessed`
/// within `sla`.
///
/// Chips beyond what capacity requires are added with every channel
/// populated, which is where over-provisioned memory comes from.
pub fn provision_performance(
    cfg: &SystemConfig,
    shared: &SharedParams,
    work: &WorkloadSpec,
    sla: Seconds,
) -> Result<ProvisioningResult> {
    check_inputs(cfg, shared, work)?;
    Provisioning::Performance { sla }.validate()?;

    let base = design_for_capacity(cfg, shared, work.db_size)?;
    let required = work.bytes_accessed.get() / sla.get();
    let bandwidth_chips = ceil_tol(required / max_chip_perf(cfg, shared).get()).max(1);

    let (mut compute_chips, binding) = if bandwidth_chips > base.compute_chips {
        (bandwidth_chips, BindingConstraint::Bandwidth)
    } else {
        (base.compute_chips, BindingConstraint::Capacity)
    };
    let mut active = bandwidth_matched_cores(cfg, shared, BytesPerSec(required / compute_chips as f64));

    loop {
        let mem_modules = if binding == BindingConstraint::Capacity {
            base.mem_modules
        } else {
            compute_chips * cfg.modules_per_chip()
        };
        let design = ClusterDesign {
            mem_modules,
            compute_chips,
            active_cores_per_chip: active,
            blades: ceil_div(compute_chips, cfg.blade_chips.into()),
        };
        let metrics = evaluate(cfg, shared, work, &design)?;
        if metrics.response_time.get() <= sla.get() * (1.0 + FEASIBILITY_TOL) {
            return Ok(ProvisioningResult { design, metrics, binding_constraint: binding });
        }
        // Only reachable through rounding noise at a ceiling boundary.
        if active < shared.max_chip_cores && shared.core_perf.get() * f64::from(active) < chip_bandwidth(cfg).get() {
            active += 1;
        } else {
            compute_chips += 1;
        }
    }
}

/// Power drawn by one blade with every socket and channel populated and
/// `cores` active on each chip.
pub fn full_blade_power(cfg: &SystemConfig, shared: &SharedParams, cores: u32) -> Watts {
    let chips = f64::from(cfg.blade_chips);
    let mem = chips * cfg.modules_per_chip() as f64 * cfg.module_power.get();
    let compute = chips * f64::from(cores) * shared.core_power.get();
    Watts(mem + compute + shared.blade_overhead_power.get())
}

/// Largest cluster that fits `budget`, charging every core on every chip.
pub fn provision_power(
    cfg: &SystemConfig,
    shared: &SharedParams,
    work: &WorkloadSpec,
    budget: Watts,
) -> Result<ProvisioningResult> {
    provision_power_with_policy(cfg, shared, work, budget, CorePolicy::Full)
}

/// Sizes a cluster to a power budget.
///
/// When the capacity-sized cluster fits with fully populated blades, the
/// budget buys as many such blades as it can (capacity is over-provisioned).
/// Otherwise the capacity-sized cluster is kept and cores per chip are
/// reduced until the cluster fits.
pub fn provision_power_with_policy(
    cfg: &SystemConfig,
    shared: &SharedParams,
    work: &WorkloadSpec,
    budget: Watts,
    policy: CorePolicy,
) -> Result<ProvisioningResult> {
    check_inputs(cfg, shared, work)?;
    Provisioning::Power { budget, policy }.validate()?;

    let core_cap = match policy {
        CorePolicy::Full => shared.max_chip_cores,
        CorePolicy::Matched => bandwidth_matched_cores(cfg, shared, chip_bandwidth(cfg)),
    };
    let base = design_for_capacity(cfg, shared, work.db_size)?;
    let blade_power = full_blade_power(cfg, shared, core_cap).get();
    let budget_w = budget.get();

    if budget_w * (1.0 + FEASIBILITY_TOL) >= base.blades as f64 * blade_power {
        let blades = floor_tol(budget_w / blade_power).max(base.blades);
        let compute_chips = blades * u64::from(cfg.blade_chips);
        let design = ClusterDesign {
            mem_modules: compute_chips * cfg.modules_per_chip(),
            compute_chips,
            active_cores_per_chip: core_cap,
            blades,
        };
        let metrics = evaluate(cfg, shared, work, &design)?;
        return Ok(ProvisioningResult { design, metrics, binding_constraint: BindingConstraint::Power });
    }

    let fixed =
        base.mem_modules as f64 * cfg.module_power.get() + base.blades as f64 * shared.blade_overhead_power.get();
    let per_core = shared.core_power.get() * base.compute_chips as f64;
    let cores = floor_tol((budget_w - fixed) / per_core).min(u64::from(core_cap));
    if cores < 1 {
        return Err(Error::Infeasible { system: cfg.name.clone(), budget_w, min_budget_w: fixed + per_core });
    }
    let design = ClusterDesign { active_cores_per_chip: cores as u32, ..base };
    let metrics = evaluate(cfg, shared, work, &design)?;
    Ok(ProvisioningResult { design, metrics, binding_constraint: BindingConstraint::Capacity })
}

/// The capacity-sized cluster with cores matched to chip bandwidth.
pub fn provision_capacity(
    cfg: &SystemConfig,
    shared: &SharedParams,
    work: &WorkloadSpec,
) -> Result<ProvisioningResult> {
    check_inputs(cfg, shared, work)?;
    let design = design_for_capacity(cfg, shared, work.db_size)?;
    let metrics = evaluate(cfg, shared, work, &design)?;
    Ok(ProvisioningResult { design, metrics, binding_constraint: BindingConstraint::Capacity })
}
