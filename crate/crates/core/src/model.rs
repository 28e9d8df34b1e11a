//! Cluster model: memory modules, compute chips, blades, and the response
//! time, power and capacity they imply for a bandwidth-bound scan workload.
//!
//! Every function here is pure. A query reads `bytes_accessed` bytes spread
//! evenly over all compute chips; each chip delivers the lesser of its core
//! throughput and its memory bandwidth.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::{Bytes, BytesPerSec, Seconds, Watts, GB, TB};

/// Relative slack used when rounding a ratio that is an integer up to
/// floating-point noise. Solvers guarantee their constraints to this tolerance.
pub const FEASIBILITY_TOL: f64 = 1e-12;

pub const PRESET_NAMES: [&str; 3] = ["traditional", "big-memory", "die-stacked"];

/// `ceil(x)`, except that values within `FEASIBILITY_TOL` above an integer
/// snap down to it.
pub(crate) fn ceil_tol(x: f64) -> u64 {
    let nearest = x.round();
    if nearest >= 0.0 && (x - nearest).abs() <= FEASIBILITY_TOL * nearest.max(1.0) {
        nearest as u64
    } else {
        x.ceil().max(0.0) as u64
    }
}

/// `floor(x)`, except that values within `FEASIBILITY_TOL` below an integer
/// snap up to it.
pub(crate) fn floor_tol(x: f64) -> u64 {
    let nearest = x.round();
    if nearest >= 0.0 && (x - nearest).abs() <= FEASIBILITY_TOL * nearest.max(1.0) {
        nearest as u64
    } else {
        x.floor().max(0.0) as u64
    }
}

pub(crate) fn ceil_div(n: u64, d: u64) -> u64 {
    n.div_ceil(d)
}

/// Memory-hierarchy parameters of one server architecture.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    pub name: String,
    /// Capacity of the smallest addable unit of memory (DIMM, buffer-on-board, stack).
    pub module_capacity: Bytes,
    /// Peak bandwidth of one memory channel.
    pub channel_bandwidth: BytesPerSec,
    /// Channels per compute chip.
    pub memory_channels: u32,
    /// Modules populated on each channel.
    pub channel_modules: u32,
    /// Power of one fully active module.
    pub module_power: Watts,
    /// Compute chips per blade.
    pub blade_chips: u32,
}

/// Compute and blade constants shared by every architecture.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SharedParams {
    /// Rate at which one core scans data.
    pub core_perf: BytesPerSec,
    /// Power drawn by one active core.
    pub core_power: Watts,
    pub max_chip_cores: u32,
    /// Peripheral power per blade.
    pub blade_overhead_power: Watts,
}

/// Database size and the bytes a single query touches.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WorkloadSpec {
    pub db_size: Bytes,
    pub bytes_accessed: Bytes,
}

/// A concrete deployment of one architecture.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClusterDesign {
    pub mem_modules: u64,
    pub compute_chips: u64,
    pub active_cores_per_chip: u32,
    pub blades: u64,
}

/// Observables derived from a design. Serialized field names carry their unit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClusterMetrics {
    #[serde(rename = "chip_bandwidth_bps")]
    pub chip_bandwidth: BytesPerSec,
    #[serde(rename = "chip_perf_bps")]
    pub chip_perf: BytesPerSec,
    /// Sum of per-chip throughput at the design's active core count.
    #[serde(rename = "aggregate_perf_bps")]
    pub aggregate_perf: BytesPerSec,
    /// Sum of per-chip memory bandwidth, regardless of cores.
    #[serde(rename = "aggregate_bandwidth_bps")]
    pub aggregate_bandwidth: BytesPerSec,
    #[serde(rename = "response_time_s")]
    pub response_time: Seconds,
    #[serde(rename = "mem_power_w")]
    pub mem_power: Watts,
    #[serde(rename = "compute_power_w")]
    pub compute_power: Watts,
    #[serde(rename = "overhead_power_w")]
    pub overhead_power: Watts,
    #[serde(rename = "total_power_w")]
    pub total_power: Watts,
    #[serde(rename = "total_capacity_bytes")]
    pub total_capacity: Bytes,
    #[serde(rename = "overprovision")]
    pub overprovision_factor: f64,
    #[serde(rename = "energy_per_query_j")]
    pub energy_per_query: f64,
}

fn check_positive(field: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(field, format!("must be a positive finite number, got {value}")))
    }
}

fn check_count(field: &str, value: u64) -> Result<()> {
    if value >= 1 {
        Ok(())
    } else {
        Err(Error::invalid(field, "must be at least 1"))
    }
}

impl SystemConfig {
    pub fn validate(&self) -> Result<()> {
        if self.name.trim().is_empty() {
            return Err(Error::invalid("name", "must not be empty"));
        }
        let scoped = |field: &str| format!("systems.{}.{field}", self.name);
        check_positive(&scoped("module_capacity"), self.module_capacity.get())?;
        check_positive(&scoped("channel_bandwidth"), self.channel_bandwidth.get())?;
        check_positive(&scoped("module_power_w"), self.module_power.get())?;
        check_count(&scoped("memory_channels"), self.memory_channels.into())?;
        check_count(&scoped("channel_modules"), self.channel_modules.into())?;
        check_count(&scoped("blade_chips"), self.blade_chips.into())?;
        Ok(())
    }

    /// Modules attached to one fully populated compute chip.
    pub fn modules_per_chip(&self) -> u64 {
        u64::from(self.memory_channels) * u64::from(self.channel_modules)
    }

    pub fn socket_capacity(&self) -> Bytes {
        Bytes(self.modules_per_chip() as f64 * self.module_capacity.get())
    }
}

impl SharedParams {
    pub fn validate(&self) -> Result<()> {
        check_positive("shared.core_perf", self.core_perf.get())?;
        check_positive("shared.core_power_w", self.core_power.get())?;
        check_positive("shared.blade_overhead_w", self.blade_overhead_power.get())?;
        check_count("shared.max_chip_cores", self.max_chip_cores.into())?;
        Ok(())
    }

    /// 6 GB/s and 3 W per core, 32 cores per chip, 100 W of peripherals per blade.
    pub fn reference() -> Self {
        SharedParams {
            core_perf: BytesPerSec(6.0 * GB),
            core_power: Watts(3.0),
            max_chip_cores: 32,
            blade_overhead_power: Watts(100.0),
        }
    }
}

impl WorkloadSpec {
    pub fn new(db_size: Bytes, bytes_accessed: Bytes) -> Result<Self> {
        let spec = WorkloadSpec { db_size, bytes_accessed };
        spec.validate()?;
        Ok(spec)
    }

    /// Workload touching `percent` (0, 100] of the database per query.
    pub fn from_percent(db_size: Bytes, percent: f64) -> Result<Self> {
        if !(percent.is_finite() && percent > 0.0 && percent <= 100.0) {
            return Err(Error::invalid("workload.percent_accessed", format!("must be in (0, 100], got {percent}")));
        }
        check_positive("workload.db_size", db_size.get())?;
        WorkloadSpec::new(db_size, Bytes(db_size.get() * percent / 100.0))
    }

    /// 16 TB database, 20% touched per query.
    pub fn reference() -> Self {
        WorkloadSpec::from_percent(Bytes(16.0 * TB), 20.0).expect("reference workload is valid")
    }

    pub fn validate(&self) -> Result<()> {
        check_positive("workload.db_size", self.db_size.get())?;
        check_positive("workload.bytes_accessed", self.bytes_accessed.get())?;
        if self.bytes_accessed.get() > self.db_size.get() {
            return Err(Error::invalid(
                "workload.bytes_accessed",
                format!("{} exceeds the database size {}", self.bytes_accessed, self.db_size),
            ));
        }
        Ok(())
    }

    pub fn percent_accessed(&self) -> f64 {
        self.bytes_accessed.get() / self.db_size.get() * 100.0
    }
}

fn traditional() -> SystemConfig {
    SystemConfig {
        name: "traditional".into(),
        module_capacity: Bytes(32.0 * GB),
        channel_bandwidth: BytesPerSec(25.6 * GB),
        memory_channels: 4,
        channel_modules: 2,
        module_power: Watts(8.0),
        blade_chips: 4,
    }
}

fn big_memory() -> SystemConfig {
    SystemConfig {
        name: "big-memory".into(),
        module_capacity: Bytes(512.0 * GB),
        channel_bandwidth: BytesPerSec(48.0 * GB),
        memory_channels: 4,
        channel_modules: 1,
        module_power: Watts(100.0),
        blade_chips: 1,
    }
}

fn die_stacked() -> SystemConfig {
    SystemConfig {
        name: "die-stacked".into(),
        module_capacity: Bytes(8.0 * GB),
        channel_bandwidth: BytesPerSec(256.0 * GB),
        memory_channels: 1,
        channel_modules: 1,
        module_power: Watts(10.0),
        blade_chips: 9,
    }
}

/// Built-in architecture by name, paired with the reference shared parameters.
pub fn preset_system(name: &str) -> Result<(SystemConfig, SharedParams)> {
    let cfg = match name {
        "traditional" => traditional(),
        "big-memory" => big_memory(),
        "die-stacked" => die_stacked(),
        _ => {
            return Err(Error::UnknownSystem {
                name: name.to_string(),
                valid: PRESET_NAMES.iter().map(|s| s.to_string()).collect(),
            })
        }
    };
    Ok((cfg, SharedParams::reference()))
}

/// All built-in architectures in canonical order.
pub fn preset_systems() -> Vec<SystemConfig> {
    vec![traditional(), big_memory(), die_stacked()]
}

pub fn chip_bandwidth(cfg: &SystemConfig) -> BytesPerSec {
    BytesPerSec(f64::from(cfg.memory_channels) * cfg.channel_bandwidth.get())
}

/// Per-chip scan rate: the slower of the active cores and the memory channels.
pub fn chip_perf(cfg: &SystemConfig, shared: &SharedParams, active_cores: u32) -> Result<BytesPerSec> {
    if active_cores == 0 || active_cores > shared.max_chip_cores {
        return Err(Error::invalid("active_cores", format!("{active_cores} is outside 1..={}", shared.max_chip_cores)));
    }
    Ok(chip_perf_unchecked(cfg, shared, active_cores))
}

fn chip_perf_unchecked(cfg: &SystemConfig, shared: &SharedParams, active_cores: u32) -> BytesPerSec {
    let compute = shared.core_perf.get() * f64::from(active_cores);
    BytesPerSec(compute.min(chip_bandwidth(cfg).get()))
}

/// Throughput of one chip with every core powered.
pub fn max_chip_perf(cfg: &SystemConfig, shared: &SharedParams) -> BytesPerSec {
    chip_perf_unchecked(cfg, shared, shared.max_chip_cores)
}

/// Fewest cores that sustain `target_per_chip`, capped by what the chip can
/// deliver with all cores active.
pub fn bandwidth_matched_cores(cfg: &SystemConfig, shared: &SharedParams, target_per_chip: BytesPerSec) -> u32 {
    let reachable = target_per_chip.get().min(max_chip_perf(cfg, shared).get());
    let cores = ceil_tol(reachable / shared.core_perf.get());
    cores.clamp(1, u64::from(shared.max_chip_cores)) as u32
}

/// Smallest design that holds `db_size`, with cores matched to full chip bandwidth.
pub fn design_for_capacity(cfg: &SystemConfig, shared: &SharedParams, db_size: Bytes) -> Result<ClusterDesign> {
    check_positive("db_size", db_size.get())?;
    let mem_modules = ceil_tol(db_size.get() / cfg.module_capacity.get()).max(1);
    let compute_chips = ceil_div(mem_modules, cfg.modules_per_chip());
    let blades = ceil_div(compute_chips, cfg.blade_chips.into());
    Ok(ClusterDesign {
        mem_modules,
        compute_chips,
        active_cores_per_chip: bandwidth_matched_cores(cfg, shared, chip_bandwidth(cfg)),
        blades,
    })
}

/// One fully populated socket on its own blade. Used for per-socket views.
pub fn single_socket_design(cfg: &SystemConfig, shared: &SharedParams) -> ClusterDesign {
    ClusterDesign {
        mem_modules: cfg.modules_per_chip(),
        compute_chips: 1,
        active_cores_per_chip: bandwidth_matched_cores(cfg, shared, chip_bandwidth(cfg)),
        blades: 1,
    }
}

impl ClusterDesign {
    /// Checks counts and the ceiling relations against `cfg`.
    pub fn check(&self, cfg: &SystemConfig, shared: &SharedParams) -> Result<()> {
        for (field, value) in
            [("mem_modules", self.mem_modules), ("compute_chips", self.compute_chips), ("blades", self.blades)]
        {
            if value == 0 {
                return Err(Error::DesignMismatch(format!("{field} must be at least 1")));
            }
        }
        if self.active_cores_per_chip == 0 || self.active_cores_per_chip > shared.max_chip_cores {
            return Err(Error::DesignMismatch(format!(
                "active_cores_per_chip {} is outside 1..={}",
                self.active_cores_per_chip, shared.max_chip_cores
            )));
        }
        let min_chips = ceil_div(self.mem_modules, cfg.modules_per_chip());
        if self.compute_chips < min_chips {
            return Err(Error::DesignMismatch(format!(
                "{} modules need at least {min_chips} chips on {}, got {}",
                self.mem_modules, cfg.name, self.compute_chips
            )));
        }
        let min_blades = ceil_div(self.compute_chips, cfg.blade_chips.into());
        if self.blades < min_blades {
            return Err(Error::DesignMismatch(format!(
                "{} chips need at least {min_blades} blades on {}, got {}",
                self.compute_chips, cfg.name, self.blades
            )));
        }
        Ok(())
    }
}

/// Evaluates a design. Throughput and compute power both use the design's
/// active core count, so a power-throttled design runs slower.
pub fn evaluate(
    cfg: &SystemConfig,
    shared: &SharedParams,
    work: &WorkloadSpec,
    design: &ClusterDesign,
) -> Result<ClusterMetrics> {
    design.check(cfg, shared)?;
    let chips = design.compute_chips as f64;
    let chip_bw = chip_bandwidth(cfg);
    let perf = chip_perf_unchecked(cfg, shared, design.active_cores_per_chip);
    let aggregate_perf = perf.get() * chips;
    let response_time = work.bytes_accessed.get() / aggregate_perf;

    let mem_power = design.mem_modules as f64 * cfg.module_power.get();
    let compute_power = f64::from(design.active_cores_per_chip) * shared.core_power.get() * chips;
    let overhead_power = design.blades as f64 * shared.blade_overhead_power.get();
    let total_power = mem_power + compute_power + overhead_power;
    let total_capacity = design.mem_modules as f64 * cfg.module_capacity.get();

    Ok(ClusterMetrics {
        chip_bandwidth: chip_bw,
        chip_perf: perf,
        aggregate_perf: BytesPerSec(aggregate_perf),
        aggregate_bandwidth: BytesPerSec(chip_bw.get() * chips),
        response_time: Seconds(response_time),
        mem_power: Watts(mem_power),
        compute_power: Watts(compute_power),
        overhead_power: Watts(overhead_power),
        total_power: Watts(total_power),
        total_capacity: Bytes(total_capacity),
        overprovision_factor: total_capacity / work.db_size.get(),
        energy_per_query: total_power * response_time,
    })
}

/// Time for one socket to read `fraction` of its own memory.
pub fn memory_wall_time(cfg: &SystemConfig, shared: &SharedParams, fraction: f64) -> Result<Seconds> {
    if !(fraction.is_finite() && fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::invalid("fraction", format!("must be in (0, 1], got {fraction}")));
    }
    Ok(Seconds(fraction * cfg.socket_capacity().get() / max_chip_perf(cfg, shared).get()))
}

/// Memory bandwidth per byte of memory capacity of one socket, in 1/s.
pub fn bandwidth_capacity_ratio(cfg: &SystemConfig) -> f64 {
    chip_bandwidth(cfg).get() / cfg.socket_capacity().get()
}
