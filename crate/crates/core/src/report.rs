//! The evaluation record shared by the command line and the HTTP service,
//! so both emit the same numbers for the same inputs.

use serde::{Deserialize, Serialize};

use crate::config::Scenario;
use crate::error::Result;
use crate::model::{ClusterDesign, ClusterMetrics};
use crate::provision::{provision, BindingConstraint, Mode, Provisioning};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub system: String,
    pub mode: Mode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sla_s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget_w: Option<f64>,
    pub db_size_bytes: f64,
    pub bytes_accessed: f64,
    pub binding_constraint: BindingConstraint,
    pub design: ClusterDesign,
    pub metrics: ClusterMetrics,
}

/// Provisions `system` from `scenario` under `request`.
pub fn evaluate_request(scenario: &Scenario, system: &str, request: &Provisioning) -> Result<EvaluationReport> {
    let cfg = scenario.system(system)?;
    let result = provision(cfg, &scenario.shared, &scenario.workload, request)?;
    let (sla_s, budget_w) = match *request {
        Provisioning::Performance { sla } => (Some(sla.get()), None),
        Provisioning::Power { budget, .. } => (None, Some(budget.get())),
        Provisioning::Capacity => (None, None),
    };
    Ok(EvaluationReport {
        system: cfg.name.clone(),
        mode: request.mode(),
        sla_s,
        budget_w,
        db_size_bytes: scenario.workload.db_size.get(),
        bytes_accessed: scenario.workload.bytes_accessed.get(),
        binding_constraint: result.binding_constraint,
        design: result.design,
        metrics: result.metrics,
    })
}
