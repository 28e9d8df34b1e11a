//! Straight-line reimplementation of the model on plain floats, written
//! without calling into the library, used as a test oracle.

#![allow(dead_code)]

use stackplan_core::model::{SharedParams, SystemConfig};

pub const GB: f64 = 1_073_741_824.0;
pub const TB: f64 = 1_099_511_627_776.0;

#[derive(Debug, Clone, Copy)]
pub struct Sys {
    pub module_bytes: f64,
    pub channel_bps: f64,
    pub channels: f64,
    pub per_channel: f64,
    pub module_w: f64,
    pub blade_chips: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct Shr {
    pub core_bps: f64,
    pub core_w: f64,
    pub max_cores: f64,
    pub blade_w: f64,
}

pub fn traditional() -> Sys {
    Sys {
        module_bytes: 32.0 * GB,
        channel_bps: 25.6 * GB,
        channels: 4.0,
        per_channel: 2.0,
        module_w: 8.0,
        blade_chips: 4.0,
    }
}

pub fn big_memory() -> Sys {
    Sys {
        module_bytes: 512.0 * GB,
        channel_bps: 48.0 * GB,
        channels: 4.0,
        per_channel: 1.0,
        module_w: 100.0,
        blade_chips: 1.0,
    }
}

pub fn die_stacked() -> Sys {
    Sys {
        module_bytes: 8.0 * GB,
        channel_bps: 256.0 * GB,
        channels: 1.0,
        per_channel: 1.0,
        module_w: 10.0,
        blade_chips: 9.0,
    }
}

pub fn reference_shared() -> Shr {
    Shr { core_bps: 6.0 * GB, core_w: 3.0, max_cores: 32.0, blade_w: 100.0 }
}

pub fn from_lib(cfg: &SystemConfig) -> Sys {
    Sys {
        module_bytes: cfg.module_capacity.0,
        channel_bps: cfg.channel_bandwidth.0,
        channels: cfg.memory_channels as f64,
        per_channel: cfg.channel_modules as f64,
        module_w: cfg.module_power.0,
        blade_chips: cfg.blade_chips as f64,
    }
}

pub fn shared_from_lib(s: &SharedParams) -> Shr {
    Shr {
        core_bps: s.core_perf.0,
        core_w: s.core_power.0,
        max_cores: s.max_chip_cores as f64,
        blade_w: s.blade_overhead_power.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Design {
    pub modules: f64,
    pub chips: f64,
    pub cores: f64,
    pub blades: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct Out {
    pub response_s: f64,
    pub mem_w: f64,
    pub compute_w: f64,
    pub overhead_w: f64,
    pub total_w: f64,
    pub capacity: f64,
}

/// Rounds up, treating values within a relative 1e-12 of an integer as that integer.
pub fn up(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= 1e-12 * r.abs().max(1.0) {
        r
    } else {
        x.ceil()
    }
}

pub fn socket_bw(s: &Sys) -> f64 {
    s.channels * s.channel_bps
}

pub fn chip_rate(s: &Sys, h: &Shr, cores: f64) -> f64 {
    (cores * h.core_bps).min(socket_bw(s))
}

pub fn matched(s: &Sys, h: &Shr, target: f64) -> f64 {
    let mut c = 1.0;
    while c < h.max_cores && c * h.core_bps < target.min(socket_bw(s)) * (1.0 - 1e-12) {
        c += 1.0;
    }
    c
}

pub fn capacity_design(s: &Sys, h: &Shr, db: f64) -> Design {
    let modules = up(db / s.module_bytes).max(1.0);
    let chips = (modules / (s.channels * s.per_channel)).ceil();
    Design { modules, chips, cores: matched(s, h, socket_bw(s)), blades: (chips / s.blade_chips).ceil() }
}

pub fn run(s: &Sys, h: &Shr, accessed: f64, d: &Design) -> Out {
    let mem_w = d.modules * s.module_w;
    let compute_w = d.cores * h.core_w * d.chips;
    let overhead_w = d.blades * h.blade_w;
    Out {
        response_s: accessed / (chip_rate(s, h, d.cores) * d.chips),
        mem_w,
        compute_w,
        overhead_w,
        total_w: mem_w + compute_w + overhead_w,
        capacity: d.modules * s.module_bytes,
    }
}

/// Smallest chip count meeting the SLA by linear search upward from the
/// capacity design, then the fewest cores that still meet it.
pub fn performance_design(s: &Sys, h: &Shr, db: f64, accessed: f64, sla: f64) -> Design {
    let base = capacity_design(s, h, db);
    let need = accessed / sla;
    let full = chip_rate(s, h, h.max_cores);
    let mut chips = (need / full).floor().max(base.chips);
    while chips * full < need * (1.0 - 1e-12) {
        chips += 1.0;
    }
    let mut cores = 1.0;
    while cores < h.max_cores && chip_rate(s, h, cores) * chips < need * (1.0 - 1e-12) {
        cores += 1.0;
    }
    let modules = if chips > base.chips { chips * s.channels * s.per_channel } else { base.modules };
    Design { modules, chips, cores, blades: (chips / s.blade_chips).ceil() }
}

pub fn full_blade_w(s: &Sys, h: &Shr, cores: f64) -> f64 {
    s.blade_chips * (s.channels * s.per_channel * s.module_w + cores * h.core_w) + h.blade_w
}

/// Power-budget design by counting: whole blades while they fit, otherwise
/// the capacity design with cores stepped down from `cap`.
pub fn power_design(s: &Sys, h: &Shr, db: f64, budget: f64, cap: f64) -> Option<Design> {
    let base = capacity_design(s, h, db);
    let per_blade = full_blade_w(s, h, cap);
    if base.blades * per_blade <= budget {
        let mut blades = base.blades.max((budget / per_blade).floor() - 2.0);
        while (blades + 1.0) * per_blade <= budget {
            blades += 1.0;
        }
        let chips = blades * s.blade_chips;
        return Some(Design { modules: chips * s.channels * s.per_channel, chips, cores: cap, blades });
    }
    let mut cores = cap;
    while cores >= 1.0 {
        let d = Design { cores, ..base };
        if run(s, h, 0.0, &d).total_w <= budget {
            return Some(d);
        }
        cores -= 1.0;
    }
    None
}

pub fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}
