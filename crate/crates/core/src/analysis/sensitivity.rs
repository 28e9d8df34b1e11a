use crate::error::{Error, Result};
use crate::model::{SharedParams, SystemConfig};
use crate::units::{Bytes, Watts};

fn check_factor(factor: f64) -> Result<()> {
    if factor.is_finite() && factor > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid("factor", format!("must be positive, got {factor}")))
    }
}

/// Denser memory: each module holds `factor` times the bytes at the same
/// power and bandwidth.
pub fn scale_density(cfg: &SystemConfig, factor: f64) -> Result<SystemConfig> {
    check_factor(factor)?;
    Ok(SystemConfig { module_capacity: Bytes(cfg.module_capacity.get() * factor), ..cfg.clone() })
}

/// Scales per-core power; throughput is untouched.
pub fn scale_compute_power(shared: &SharedParams, factor: f64) -> Result<SharedParams> {
    check_factor(factor)?;
    Ok(SharedParams { core_power: Watts(shared.core_power.get() * factor), ..*shared })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{design_for_capacity, evaluate, preset_system, WorkloadSpec};
    use crate::units::GB;

    #[test]
    fn eightfold_density_shrinks_the_die_stacked_cluster() {
        let (d, s) = preset_system("die-stacked").unwrap();
        let dense = scale_density(&d, 8.0).unwrap();
        assert_eq!(dense.module_capacity.get(), 64.0 * GB);
        assert_eq!(dense.module_power, d.module_power);
        let design = design_for_capacity(&dense, &s, WorkloadSpec::reference().db_size).unwrap();
        assert_eq!(design.mem_modules, 256);
    }

    #[test]
    fn unit_factors_are_identities() {
        let (t, s) = preset_system("traditional").unwrap();
        assert_eq!(scale_density(&t, 1.0).unwrap(), t);
        assert_eq!(scale_compute_power(&s, 1.0).unwrap(), s);
        assert!(scale_density(&t, 0.0).is_err());
        assert!(scale_compute_power(&s, -2.0).is_err());
    }

    #[test]
    fn tenfold_lower_core_power() {
        let (d, s) = preset_system("die-stacked").unwrap();
        let w = WorkloadSpec::reference();
        let design = design_for_capacity(&d, &s, w.db_size).unwrap();
        let before = evaluate(&d, &s, &w, &design).unwrap();
        let after = evaluate(&d, &scale_compute_power(&s, 0.1).unwrap(), &w, &design).unwrap();
        approx::assert_relative_eq!(after.compute_power.get(), before.compute_power.get() / 10.0);
        approx::assert_relative_eq!(
            before.total_power.get() - after.total_power.get(),
            before.compute_power.get() * 0.9
        );
        assert_eq!(after.response_time, before.response_time);
        assert!(after.energy_per_query < before.energy_per_query);
    }
}
