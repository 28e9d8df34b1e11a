mod common;

use common::{GB, TB};
use proptest::prelude::*;
use stackplan_core::analysis::{
    find_crossover, power_breakdown, run_sweep, scale_compute_power, scale_density, SweepMode, SweepSpec, SweepVariable,
};
use stackplan_core::model::{
    chip_bandwidth, design_for_capacity, evaluate, preset_system, SharedParams, SystemConfig, WorkloadSpec,
    FEASIBILITY_TOL,
};
use stackplan_core::provision::{
    provision_capacity, provision_performance, provision_power_with_policy, BindingConstraint, CorePolicy,
    ProvisioningResult,
};
use stackplan_core::units::{Bytes, BytesPerSec, Seconds, Watts};
use stackplan_core::Error;

fn arb_system() -> impl Strategy<Value = SystemConfig> {
    (0.25f64..4096.0, 0.5f64..1024.0, 1u32..9, 1u32..5, 0.5f64..200.0, 1u32..17).prop_map(
        |(cap_gb, bw_gb, channels, per_channel, module_w, blade_chips)| SystemConfig {
            name: "random".into(),
            module_capacity: Bytes(cap_gb * GB),
            channel_bandwidth: BytesPerSec(bw_gb * GB),
            memory_channels: channels,
            channel_modules: per_channel,
            module_power: Watts(module_w),
            blade_chips,
        },
    )
}

fn arb_preset() -> impl Strategy<Value = SystemConfig> {
    prop::sample::select(vec!["traditional", "big-memory", "die-stacked"]).prop_map(|n| preset_system(n).unwrap().0)
}

fn arb_any_system() -> impl Strategy<Value = SystemConfig> {
    prop_oneof![arb_preset(), arb_system()]
}

fn arb_shared() -> impl Strategy<Value = SharedParams> {
    prop_oneof![
        Just(SharedParams::reference()),
        (0.25f64..32.0, 0.05f64..20.0, 1u32..129, 0.0f64..500.0).prop_map(|(perf_gb, core_w, cores, blade_w)| {
            SharedParams {
                core_perf: BytesPerSec(perf_gb * GB),
                core_power: Watts(core_w),
                max_chip_cores: cores,
                blade_overhead_power: Watts(blade_w),
            }
        }),
    ]
}

fn log_uniform(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    (0.0f64..=1.0).prop_map(move |t| lo * (hi / lo).powf(t))
}

fn arb_workload() -> impl Strategy<Value = WorkloadSpec> {
    (log_uniform(1.0 * GB, 1024.0 * TB), 0.01f64..=100.0)
        .prop_map(|(db, pct)| WorkloadSpec::from_percent(Bytes(db), pct).unwrap())
}

fn within(value: f64, limit: f64) -> bool {
    value <= limit * (1.0 + FEASIBILITY_TOL)
}

fn check_result(cfg: &SystemConfig, shared: &SharedParams, work: &WorkloadSpec, r: &ProvisioningResult) {
    r.design.check(cfg, shared).unwrap();
    assert_eq!(evaluate(cfg, shared, work, &r.design).unwrap(), r.metrics);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn sla_is_always_met(
        cfg in arb_any_system(),
        shared in arb_shared(),
        work in arb_workload(),
        sla in log_uniform(1e-4, 100.0),
    ) {
        let r = provision_performance(&cfg, &shared, &work, Seconds(sla)).unwrap();
        check_result(&cfg, &shared, &work, &r);
        prop_assert!(within(r.metrics.response_time.get(), sla), "{} > {sla}", r.metrics.response_time.get());
        prop_assert!(r.design.compute_chips >= design_for_capacity(&cfg, &shared, work.db_size).unwrap().compute_chips);
    }

    #[test]
    fn budget_is_met_and_maximal(
        cfg in arb_any_system(),
        shared in arb_shared(),
        work in arb_workload(),
        budget in log_uniform(10.0, 1e8),
        matched in any::<bool>(),
    ) {
        let policy = if matched { CorePolicy::Matched } else { CorePolicy::Full };
        match provision_power_with_policy(&cfg, &shared, &work, Watts(budget), policy) {
            Ok(r) => {
                check_result(&cfg, &shared, &work, &r);
                let total = r.metrics.total_power.get();
                prop_assert!(within(total, budget), "{total} > {budget}");
                let d = r.design;
                if r.binding_constraint == BindingConstraint::Power {
                    let per_blade = total / d.blades as f64;
                    prop_assert!(total + per_blade > budget * (1.0 + FEASIBILITY_TOL));
                } else {
                    let cap = match policy {
                        CorePolicy::Full => shared.max_chip_cores,
                        CorePolicy::Matched => {
                            let bw = chip_bandwidth(&cfg).get();
                            ((bw / shared.core_perf.get()).ceil() as u32).clamp(1, shared.max_chip_cores)
                        }
                    };
                    let more = total + shared.core_power.get() * d.compute_chips as f64;
                    prop_assert!(d.active_cores_per_chip == cap || more > budget * (1.0 + FEASIBILITY_TOL));
                }
            }
            Err(Error::Infeasible { min_budget_w, .. }) => {
                prop_assert!(min_budget_w > budget);
                let r = provision_power_with_policy(&cfg, &shared, &work, Watts(min_budget_w), policy).unwrap();
                prop_assert_eq!(r.design.active_cores_per_chip, 1);
                prop_assert!(within(r.metrics.total_power.get(), min_budget_w));
            }
            Err(e) => prop_assert!(false, "unexpected {e}"),
        }
    }

    #[test]
    fn capacity_floor_holds_in_every_mode(
        cfg in arb_any_system(),
        shared in arb_shared(),
        work in arb_workload(),
        sla in log_uniform(1e-4, 100.0),
        budget in log_uniform(10.0, 1e8),
    ) {
        let db = work.db_size.get();
        let r = provision_capacity(&cfg, &shared, &work).unwrap();
        prop_assert!(r.metrics.total_capacity.get() >= db * (1.0 - FEASIBILITY_TOL));
        prop_assert!(r.metrics.overprovision_factor >= 1.0 - FEASIBILITY_TOL);
        let r = provision_performance(&cfg, &shared, &work, Seconds(sla)).unwrap();
        prop_assert!(r.metrics.total_capacity.get() >= db * (1.0 - FEASIBILITY_TOL));
        if let Ok(r) = provision_power_with_policy(&cfg, &shared, &work, Watts(budget), CorePolicy::Full) {
            prop_assert!(r.metrics.total_capacity.get() >= db * (1.0 - FEASIBILITY_TOL));
        }
    }

    #[test]
    fn total_power_is_the_sum_of_its_parts(
        cfg in arb_any_system(),
        shared in arb_shared(),
        work in arb_workload(),
        sla in log_uniform(1e-4, 100.0),
    ) {
        let r = provision_performance(&cfg, &shared, &work, Seconds(sla)).unwrap();
        let (m, d) = (r.metrics, r.design);
        prop_assert_eq!(m.mem_power.get(), d.mem_modules as f64 * cfg.module_power.get());
        prop_assert_eq!(
            m.compute_power.get(),
            f64::from(d.active_cores_per_chip) * shared.core_power.get() * d.compute_chips as f64
        );
        prop_assert_eq!(m.overhead_power.get(), d.blades as f64 * shared.blade_overhead_power.get());
        let sum = m.mem_power.get() + m.compute_power.get() + m.overhead_power.get();
        prop_assert!((m.total_power.get() - sum).abs() <= 1e-12 * sum);
        prop_assert!((m.energy_per_query - m.total_power.get() * m.response_time.get()).abs() <= 1e-12 * m.energy_per_query);
    }

    #[test]
    fn chip_rate_is_the_slower_of_cores_and_channels(
        cfg in arb_any_system(),
        shared in arb_shared(),
        work in arb_workload(),
        extra in 0u64..1000,
        cores_frac in 0.0f64..=1.0,
    ) {
        let base = design_for_capacity(&cfg, &shared, work.db_size).unwrap();
        let mut d = base;
        d.compute_chips += extra;
        d.blades = d.compute_chips.div_ceil(u64::from(cfg.blade_chips));
        d.active_cores_per_chip = 1 + (f64::from(shared.max_chip_cores - 1) * cores_frac) as u32;
        let m = evaluate(&cfg, &shared, &work, &d).unwrap();
        let compute = f64::from(d.active_cores_per_chip) * shared.core_perf.get();
        let channels = f64::from(cfg.memory_channels) * cfg.channel_bandwidth.get();
        prop_assert_eq!(m.chip_perf.get(), compute.min(channels));
        prop_assert!(m.chip_perf.get() <= m.chip_bandwidth.get());
        prop_assert_eq!(m.aggregate_perf.get(), m.chip_perf.get() * d.compute_chips as f64);
        prop_assert!((m.response_time.get() * m.aggregate_perf.get() - work.bytes_accessed.get()).abs()
            <= 1e-12 * work.bytes_accessed.get());
    }

    #[test]
    fn capacity_designs_grow_with_db_size(
        cfg in arb_any_system(),
        shared in arb_shared(),
        db in log_uniform(1.0 * GB, 1024.0 * TB),
        growth in 1.0f64..100.0,
        accessed_frac in 0.0001f64..=1.0,
    ) {
        let accessed = Bytes(db * accessed_frac);
        let small = WorkloadSpec::new(Bytes(db), accessed).unwrap();
        let large = WorkloadSpec::new(Bytes(db * growth), accessed).unwrap();
        let a = provision_capacity(&cfg, &shared, &small).unwrap();
        let b = provision_capacity(&cfg, &shared, &large).unwrap();
        prop_assert!(a.design.mem_modules <= b.design.mem_modules);
        prop_assert!(a.design.compute_chips <= b.design.compute_chips);
        prop_assert!(a.design.blades <= b.design.blades);
        prop_assert!(a.metrics.total_power.get() <= b.metrics.total_power.get());
        prop_assert!(a.metrics.total_capacity.get() <= b.metrics.total_capacity.get());
        prop_assert!(a.metrics.response_time.get() >= b.metrics.response_time.get());
    }

    #[test]
    fn capacity_mode_is_a_fixed_point_of_performance_mode(
        cfg in arb_any_system(),
        shared in arb_shared(),
        work in arb_workload(),
    ) {
        let cap = provision_capacity(&cfg, &shared, &work).unwrap();
        let perf = provision_performance(&cfg, &shared, &work, cap.metrics.response_time).unwrap();
        prop_assert_eq!(perf.design, cap.design);
        prop_assert_eq!(perf.metrics, cap.metrics);
        prop_assert_eq!(perf.binding_constraint, BindingConstraint::Capacity);
    }

    #[test]
    fn cheaper_cores_never_cost_power_or_speed(
        cfg in arb_any_system(),
        shared in arb_shared(),
        work in arb_workload(),
        factor in 0.001f64..1.0,
        sla in log_uniform(1e-4, 100.0),
    ) {
        let cheap = scale_compute_power(&shared, factor).unwrap();
        let a = provision_capacity(&cfg, &shared, &work).unwrap().metrics;
        let b = provision_capacity(&cfg, &cheap, &work).unwrap().metrics;
        prop_assert!(b.total_power.get() <= a.total_power.get());
        prop_assert_eq!(a.response_time, b.response_time);
        let a = provision_performance(&cfg, &shared, &work, Seconds(sla)).unwrap().metrics;
        let b = provision_performance(&cfg, &cheap, &work, Seconds(sla)).unwrap().metrics;
        prop_assert!(b.total_power.get() <= a.total_power.get());
        prop_assert_eq!(a.response_time, b.response_time);
    }

    #[test]
    fn breakdown_shares_sum_to_one_hundred(
        cfg in arb_any_system(),
        shared in arb_shared(),
        work in arb_workload(),
        budget in log_uniform(10.0, 1e8),
        matched in any::<bool>(),
    ) {
        let policy = if matched { CorePolicy::Matched } else { CorePolicy::Full };
        let rows = power_breakdown(std::slice::from_ref(&cfg), &shared, &work, Watts(budget), policy).unwrap();
        let r = &rows[0];
        if r.feasible {
            let sum = r.compute_pct.unwrap() + r.memory_pct.unwrap() + r.overhead_pct.unwrap();
            prop_assert!((sum - 100.0).abs() <= 0.01);
        } else {
            prop_assert!(r.total_power_w.is_none());
        }
    }

    #[test]
    fn crossover_bracket_ends_disagree(
        a in arb_any_system(),
        b in arb_any_system(),
        shared in arb_shared(),
        work in arb_workload(),
    ) {
        let b = SystemConfig { name: "other".into(), ..b };
        match find_crossover(&a, &b, &shared, &work, (Seconds(1e-3), Seconds(10.0))) {
            Ok(x) => {
                let power = |cfg: &SystemConfig, sla: f64| {
                    provision_performance(cfg, &shared, &work, Seconds(sla)).unwrap().metrics.total_power.get()
                };
                let [lo, hi] = x.bracket;
                prop_assert!(lo < hi && lo <= x.crossover_value && x.crossover_value <= hi);
                prop_assert!((hi - lo) <= 1e-3 * lo * (1.0 + 1e-9));
                prop_assert_eq!(power(&a, lo) < power(&b, lo), x.a_cheaper_below);
                prop_assert_ne!(power(&a, hi) < power(&b, hi), x.a_cheaper_below);
            }
            Err(Error::NoCrossover { .. }) => {}
            Err(e) => prop_assert!(false, "unexpected {e}"),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn sweeps_are_deterministic(
        work in arb_workload(),
        values in prop::collection::btree_set(1u32..10_000, 1..12),
    ) {
        let spec = SweepSpec {
            variable: SweepVariable::Sla,
            values: values.into_iter().map(|ms| f64::from(ms) / 1e3).collect(),
            systems: vec!["die-stacked".into(), "traditional".into(), "big-memory".into()],
            mode: SweepMode::Performance,
            sla: None,
            power_budget: None,
            core_policy: CorePolicy::Full,
        };
        let cfgs = stackplan_core::model::preset_systems();
        let shared = SharedParams::reference();
        let first = serde_json::to_string(&run_sweep(&spec, &cfgs, &shared, &work).unwrap()).unwrap();
        let second = serde_json::to_string(&run_sweep(&spec, &cfgs, &shared, &work).unwrap()).unwrap();
        prop_assert_eq!(first, second);
    }
}

#[test]
fn density_crossover_is_monotone() {
    let (t, shared) = preset_system("traditional").unwrap();
    let (d, _) = preset_system("die-stacked").unwrap();
    for pct in [10.0, 20.0, 50.0] {
        let work = WorkloadSpec::from_percent(Bytes(16.0 * TB), pct).unwrap();
        let mut last = 0.0;
        for f in [1.0, 2.0, 4.0, 8.0] {
            let x = find_crossover(
                &scale_density(&t, f).unwrap(),
                &scale_density(&d, f).unwrap(),
                &shared,
                &work,
                (Seconds(1e-3), Seconds(10.0)),
            )
            .unwrap();
            assert!(x.crossover_value >= last, "{pct}% at {f}x: {} < {last}", x.crossover_value);
            last = x.crossover_value;
        }
    }
}
