//! Table, CSV and JSON renderings. Tables round to three significant
//! digits; CSV and JSON carry full precision.

use std::fmt::Write as _;
use std::io::{self, Write};

use stackplan_core::analysis::{BreakdownRow, CrossoverResult, EnergyRow, SweepRow};
use stackplan_core::report::EvaluationReport;
use stackplan_core::units::human;

use crate::args::Format;

pub const SWEEP_HEADER: [&str; 16] = [
    "system",
    "variable",
    "value",
    "response_time_s",
    "total_power_w",
    "mem_power_w",
    "compute_power_w",
    "overhead_power_w",
    "capacity_bytes",
    "overprovision",
    "energy_j",
    "blades",
    "chips",
    "modules",
    "active_cores",
    "feasible",
];

const EVALUATE_HEADER: [&str; 15] = [
    "system",
    "mode",
    "binding_constraint",
    "response_time_s",
    "total_power_w",
    "mem_power_w",
    "compute_power_w",
    "overhead_power_w",
    "capacity_bytes",
    "overprovision",
    "energy_j",
    "blades",
    "chips",
    "modules",
    "active_cores",
];

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

fn opt_human(v: Option<f64>, f: fn(f64) -> String) -> String {
    v.map(f).unwrap_or_else(|| "-".into())
}

fn json_line<T: serde::Serialize>(out: &mut dyn Write, value: &T) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)
}

fn csv_writer(out: &mut dyn Write) -> csv::Writer<&mut dyn Write> {
    csv::WriterBuilder::new().from_writer(out)
}

/// Left-aligned text columns separated by two spaces.
fn table(out: &mut dyn Write, header: &[&str], rows: &[Vec<String>]) -> io::Result<()> {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: &mut dyn Iterator<Item = &str>| {
        let mut s = String::new();
        for (cell, w) in cells.zip(&widths) {
            let _ = write!(s, "{cell:<w$}  ");
        }
        s.trim_end().to_string()
    };
    writeln!(out, "{}", line(&mut header.iter().copied()))?;
    for row in rows {
        writeln!(out, "{}", line(&mut row.iter().map(String::as_str)))?;
    }
    Ok(())
}

pub fn evaluation(out: &mut dyn Write, r: &EvaluationReport, format: Format) -> io::Result<()> {
    let (m, d) = (&r.metrics, &r.design);
    match format {
        Format::Json => json_line(out, r),
        Format::Csv => {
            let mut w = csv_writer(out);
            w.write_record(EVALUATE_HEADER)?;
            w.write_record([
                r.system.clone(),
                serde_json::to_value(r.mode)?.as_str().unwrap_or_default().to_string(),
                serde_json::to_value(r.binding_constraint)?.as_str().unwrap_or_default().to_string(),
                m.response_time.get().to_string(),
                m.total_power.get().to_string(),
                m.mem_power.get().to_string(),
                m.compute_power.get().to_string(),
                m.overhead_power.get().to_string(),
                m.total_capacity.get().to_string(),
                m.overprovision_factor.to_string(),
                m.energy_per_query.to_string(),
                d.blades.to_string(),
                d.compute_chips.to_string(),
                d.mem_modules.to_string(),
                d.active_cores_per_chip.to_string(),
            ])?;
            w.flush()
        }
        Format::Table => {
            let mode = serde_json::to_value(r.mode)?;
            let binding = serde_json::to_value(r.binding_constraint)?;
            let mut lines = vec![("system", r.system.clone()), ("mode", mode.as_str().unwrap_or_default().to_string())];
            if let Some(sla) = r.sla_s {
                lines.push(("sla", human::seconds(sla)));
            }
            if let Some(budget) = r.budget_w {
                lines.push(("budget", human::watts(budget)));
            }
            lines.extend([
                ("binding constraint", binding.as_str().unwrap_or_default().to_string()),
                ("memory modules", d.mem_modules.to_string()),
                ("compute chips", d.compute_chips.to_string()),
                ("active cores/chip", d.active_cores_per_chip.to_string()),
                ("blades", d.blades.to_string()),
                ("response time", human::seconds(m.response_time.get())),
                ("total power", human::watts(m.total_power.get())),
                ("  memory", human::watts(m.mem_power.get())),
                ("  compute", human::watts(m.compute_power.get())),
                ("  blade overhead", human::watts(m.overhead_power.get())),
                ("capacity", human::bytes(m.total_capacity.get())),
                ("overprovisioning", format!("{}x", human::sig3(m.overprovision_factor))),
                ("energy per query", human::joules(m.energy_per_query)),
            ]);
            for (k, v) in lines {
                writeln!(out, "{k:<20}{v}")?;
            }
            Ok(())
        }
    }
}

pub fn sweep(out: &mut dyn Write, rows: &[SweepRow], format: Format) -> io::Result<()> {
    match format {
        Format::Json => json_line(out, &rows),
        Format::Csv => {
            let mut w = csv_writer(out);
            w.write_record(SWEEP_HEADER)?;
            for r in rows {
                w.write_record([
                    r.system.clone(),
                    r.variable.as_str().to_string(),
                    r.value.to_string(),
                    opt(r.response_time_s),
                    opt(r.total_power_w),
                    opt(r.mem_power_w),
                    opt(r.compute_power_w),
                    opt(r.overhead_power_w),
                    opt(r.capacity_bytes),
                    opt(r.overprovision),
                    opt(r.energy_j),
                    opt(r.blades),
                    opt(r.chips),
                    opt(r.modules),
                    opt(r.active_cores),
                    r.feasible.to_string(),
                ])?;
            }
            w.flush()
        }
        Format::Table => {
            let header = ["system", "value", "response", "power", "capacity", "blades", "cores", "feasible"];
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.system.clone(),
                        human::sig3(r.value),
                        opt_human(r.response_time_s, human::seconds),
                        opt_human(r.total_power_w, human::watts),
                        opt_human(r.capacity_bytes, human::bytes),
                        r.blades.map_or("-".into(), |b| b.to_string()),
                        r.active_cores.map_or("-".into(), |c| c.to_string()),
                        r.feasible.to_string(),
                    ]
                })
                .collect();
            table(out, &header, &cells)
        }
    }
}

pub fn crossover(out: &mut dyn Write, x: &CrossoverResult, format: Format) -> io::Result<()> {
    match format {
        Format::Json => json_line(out, x),
        Format::Csv => {
            let mut w = csv_writer(out);
            w.write_record([
                "a",
                "b",
                "variable",
                "crossover_value",
                "bracket_lo",
                "bracket_hi",
                "metric",
                "a_cheaper_below",
            ])?;
            w.write_record([
                x.a.clone(),
                x.b.clone(),
                x.variable.clone(),
                x.crossover_value.to_string(),
                x.bracket[0].to_string(),
                x.bracket[1].to_string(),
                x.metric.clone(),
                x.a_cheaper_below.to_string(),
            ])?;
            w.flush()
        }
        Format::Table => {
            let (cheap_below, cheap_above) = if x.a_cheaper_below { (&x.a, &x.b) } else { (&x.b, &x.a) };
            writeln!(out, "crossover SLA   {}", human::seconds(x.crossover_value))?;
            writeln!(out, "bracket         {:.6} s to {:.6} s", x.bracket[0], x.bracket[1])?;
            writeln!(out, "below           {cheap_below} draws less power")?;
            writeln!(out, "above           {cheap_above} draws less power")
        }
    }
}

pub fn energy(out: &mut dyn Write, rows: &[EnergyRow], format: Format) -> io::Result<()> {
    match format {
        Format::Json => json_line(out, &rows),
        Format::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["system", "energy_j", "response_time_s", "total_power_w"])?;
            for r in rows {
                w.write_record([
                    r.system.clone(),
                    r.energy_j.to_string(),
                    r.response_time_s.to_string(),
                    r.total_power_w.to_string(),
                ])?;
            }
            w.flush()
        }
        Format::Table => {
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.system.clone(),
                        human::joules(r.energy_j),
                        human::seconds(r.response_time_s),
                        human::watts(r.total_power_w),
                    ]
                })
                .collect();
            table(out, &["system", "energy/query", "response", "power"], &cells)
        }
    }
}

pub fn breakdown(out: &mut dyn Write, rows: &[BreakdownRow], format: Format) -> io::Result<()> {
    match format {
        Format::Json => json_line(out, &rows),
        Format::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["system", "feasible", "compute_pct", "memory_pct", "overhead_pct", "total_power_w"])?;
            for r in rows {
                w.write_record([
                    r.system.clone(),
                    r.feasible.to_string(),
                    opt(r.compute_pct),
                    opt(r.memory_pct),
                    opt(r.overhead_pct),
                    opt(r.total_power_w),
                ])?;
            }
            w.flush()
        }
        Format::Table => {
            let pct = |v: Option<f64>| v.map_or("-".into(), |v| format!("{}%", human::sig3(v)));
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.system.clone(),
                        pct(r.compute_pct),
                        pct(r.memory_pct),
                        pct(r.overhead_pct),
                        opt_human(r.total_power_w, human::watts),
                        r.dominant().unwrap_or("infeasible").to_string(),
                    ]
                })
                .collect();
            table(out, &["system", "compute", "memory", "overhead", "total", "largest"], &cells)
        }
    }
}
