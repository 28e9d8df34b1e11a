//! JSON configuration documents and the scenario they resolve to.
//!
//! A document only carries overrides: anything it leaves out keeps the
//! built-in preset value. Capacities and bandwidths are unit-suffixed
//! strings (`"32GB"`, `"25.6GB"`); powers are plain watts.
//!
//! ```json
//! {"systems": {"traditional": {"module_capacity": "64GB"}},
//!  "shared": {"core_power_w": 0.3},
//!  "workload": {"db_size": "16TB", "percent_accessed": 50}}
//! ```

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{preset_systems, SharedParams, SystemConfig, WorkloadSpec};
use crate::units::{Bytes, BytesPerSec, Watts};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemOverride {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module_capacity: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub channel_bandwidth: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub memory_channels: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub channel_modules: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module_power_w: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blade_chips: Option<u32>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SharedOverride {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub core_perf: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub core_power_w: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_chip_cores: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blade_overhead_w: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkloadOverride {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub db_size: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub percent_accessed: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDocument {
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub systems: BTreeMap<String, SystemOverride>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shared: Option<SharedOverride>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workload: Option<WorkloadOverride>,
}

impl ConfigDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::invalid("config", e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config documents always serialize")
    }
}

/// Fully resolved inputs: every system, the shared parameters, and the workload.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub systems: Vec<SystemConfig>,
    pub shared: SharedParams,
    pub workload: WorkloadSpec,
    /// Kept so that a db-size override leaves the query fraction intact.
    pub percent_accessed: f64,
}

impl Default for Scenario {
    fn default() -> Self {
        Scenario {
            systems: preset_systems(),
            shared: SharedParams::reference(),
            workload: WorkloadSpec::reference(),
            percent_accessed: 20.0,
        }
    }
}

fn parse_field<T: std::str::FromStr<Err = crate::units::UnitError>>(field: &str, text: &str) -> Result<T> {
    text.parse::<T>().map_err(|e| Error::invalid(field, e.to_string()))
}

fn missing(system: &str, field: &str) -> Error {
    Error::invalid(format!("systems.{system}.{field}"), "required for a system that is not a built-in preset")
}

impl SystemOverride {
    fn apply(&self, name: &str, base: Option<&SystemConfig>) -> Result<SystemConfig> {
        let field = |f: &str| format!("systems.{name}.{f}");
        let module_capacity = match (&self.module_capacity, base) {
            (Some(s), _) => parse_field::<Bytes>(&field("module_capacity"), s)?,
            (None, Some(b)) => b.module_capacity,
            (None, None) => return Err(missing(name, "module_capacity")),
        };
        let channel_bandwidth = match (&self.channel_bandwidth, base) {
            (Some(s), _) => parse_field::<BytesPerSec>(&field("channel_bandwidth"), s)?,
            (None, Some(b)) => b.channel_bandwidth,
            (None, None) => return Err(missing(name, "channel_bandwidth")),
        };
        let pick = |v: Option<u32>, b: Option<u32>, f: &str| v.or(b).ok_or_else(|| missing(name, f));
        let cfg = SystemConfig {
            name: name.to_string(),
            module_capacity,
            channel_bandwidth,
            memory_channels: pick(self.memory_channels, base.map(|b| b.memory_channels), "memory_channels")?,
            channel_modules: pick(self.channel_modules, base.map(|b| b.channel_modules), "channel_modules")?,
            module_power: match (self.module_power_w, base) {
                (Some(w), _) => Watts(w),
                (None, Some(b)) => b.module_power,
                (None, None) => return Err(missing(name, "module_power_w")),
            },
            blade_chips: pick(self.blade_chips, base.map(|b| b.blade_chips), "blade_chips")?,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn full(cfg: &SystemConfig) -> Self {
        SystemOverride {
            module_capacity: Some(cfg.module_capacity.to_string()),
            channel_bandwidth: Some(cfg.channel_bandwidth.to_string()),
            memory_channels: Some(cfg.memory_channels),
            channel_modules: Some(cfg.channel_modules),
            module_power_w: Some(cfg.module_power.get()),
            blade_chips: Some(cfg.blade_chips),
        }
    }
}

impl Scenario {
    pub fn presets() -> Self {
        Scenario::default()
    }

    pub fn from_document(doc: &ConfigDocument) -> Result<Self> {
        Scenario::default().apply(doc)
    }

    /// Layers `doc` on top of this scenario. Known systems are patched field
    /// by field; new systems must be complete and are appended in name order.
    pub fn apply(&self, doc: &ConfigDocument) -> Result<Scenario> {
        let mut systems = self.systems.clone();
        for (name, patch) in &doc.systems {
            match systems.iter_mut().find(|c| &c.name == name) {
                Some(existing) => *existing = patch.apply(name, Some(existing))?,
                None => systems.push(patch.apply(name, None)?),
            }
        }

        let mut shared = self.shared;
        if let Some(o) = &doc.shared {
            if let Some(s) = &o.core_perf {
                shared.core_perf = parse_field("shared.core_perf", s)?;
            }
            if let Some(w) = o.core_power_w {
                shared.core_power = Watts(w);
            }
            if let Some(n) = o.max_chip_cores {
                shared.max_chip_cores = n;
            }
            if let Some(w) = o.blade_overhead_w {
                shared.blade_overhead_power = Watts(w);
            }
        }
        shared.validate()?;

        let mut db_size = self.workload.db_size;
        let mut percent = self.percent_accessed;
        if let Some(o) = &doc.workload {
            if let Some(s) = &o.db_size {
                db_size = parse_field("workload.db_size", s)?;
            }
            if let Some(p) = o.percent_accessed {
                percent = p;
            }
        }
        let workload = WorkloadSpec::from_percent(db_size, percent)?;
        Ok(Scenario { systems, shared, workload, percent_accessed: percent })
    }

    /// Replaces the workload, keeping everything else.
    pub fn with_workload(&self, db_size: Bytes, percent: f64) -> Result<Scenario> {
        Ok(Scenario {
            workload: WorkloadSpec::from_percent(db_size, percent)?,
            percent_accessed: percent,
            ..self.clone()
        })
    }

    pub fn system(&self, name: &str) -> Result<&SystemConfig> {
        crate::analysis::find_system(&self.systems, name)
    }

    pub fn system_names(&self) -> Vec<String> {
        self.systems.iter().map(|c| c.name.clone()).collect()
    }

    /// A complete document that resolves back to this scenario.
    pub fn to_document(&self) -> ConfigDocument {
        ConfigDocument {
            systems: self.systems.iter().map(|c| (c.name.clone(), SystemOverride::full(c))).collect(),
            shared: Some(SharedOverride {
                core_perf: Some(self.shared.core_perf.to_string()),
                core_power_w: Some(self.shared.core_power.get()),
                max_chip_cores: Some(self.shared.max_chip_cores),
                blade_overhead_w: Some(self.shared.blade_overhead_power.get()),
            }),
            workload: Some(WorkloadOverride {
                db_size: Some(self.workload.db_size.to_string()),
                percent_accessed: Some(self.percent_accessed),
            }),
        }
    }
}
