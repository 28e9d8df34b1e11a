use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{SharedParams, SystemConfig, WorkloadSpec};
use crate::provision::provision_performance;
use crate::units::Seconds;

/// 1 ms to 10 s.
pub const DEFAULT_SLA_RANGE: (Seconds, Seconds) = (Seconds(1e-3), Seconds(10.0));

/// Bracket width, relative to its lower end, at which bisection stops.
const RELATIVE_WIDTH: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossoverResult {
    pub a: String,
    pub b: String,
    /// Always `"sla"`: the swept quantity, in seconds.
    pub variable: String,
    /// Midpoint of `bracket`, in seconds.
    pub crossover_value: f64,
    /// Always `"total_power"`.
    pub metric: String,
    /// Final search interval; the cheaper system differs at its two ends.
    pub bracket: [f64; 2],
    /// Whether `a` draws less power than `b` at the low end of the bracket.
    pub a_cheaper_below: bool,
}

/// Bisects `[lo, hi]` in log space until the bracket is narrower than
/// `rel_width * lo`, keeping `pred(lo) != pred(hi)`.
///
/// `pred` is usually a step function; the result brackets one flip, not a
/// smooth root. Callers must ensure the endpoints disagree.
pub fn bisect_flip<F>(mut lo: f64, mut hi: f64, rel_width: f64, pred: F) -> (f64, f64)
where
    F: Fn(f64) -> bool,
{
    let at_lo = pred(lo);
    debug_assert_ne!(at_lo, pred(hi));
    while (hi - lo) > rel_width * lo {
        let mid = (lo * hi).sqrt();
        if mid <= lo || mid >= hi {
            break;
        }
        if pred(mid) == at_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// SLA at which the SLA-provisioned power of `a` and `b` swap order.
pub fn find_crossover(
    a: &SystemConfig,
    b: &SystemConfig,
    shared: &SharedParams,
    work: &WorkloadSpec,
    range: (Seconds, Seconds),
) -> Result<CrossoverResult> {
    let (lo, hi) = (range.0.get(), range.1.get());
    if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && lo < hi) {
        return Err(Error::invalid("range", format!("need 0 < start < stop, got {lo}:{hi}")));
    }

    let power = |cfg: &SystemConfig, sla: f64| {
        provision_performance(cfg, shared, work, Seconds(sla)).map(|r| r.metrics.total_power.get())
    };
    // Surface configuration errors before searching.
    let a_lo = power(a, lo)?;
    let b_lo = power(b, lo)?;
    let a_hi = power(a, hi)?;
    let b_hi = power(b, hi)?;

    let a_cheaper = |sla: f64| match (power(a, sla), power(b, sla)) {
        (Ok(pa), Ok(pb)) => pa < pb,
        _ => false,
    };
    let (below, above) = (a_lo < b_lo, a_hi < b_hi);
    if below == above {
        let order = |pa: f64, pb: f64| {
            if pa < pb {
                format!("{} < {}", a.name, b.name)
            } else if pa > pb {
                format!("{} > {}", a.name, b.name)
            } else {
                format!("{} = {}", a.name, b.name)
            }
        };
        return Err(Error::NoCrossover {
            a: a.name.clone(),
            b: b.name.clone(),
            lo_s: lo,
            hi_s: hi,
            lo_order: format!("{} ({} W vs {} W)", order(a_lo, b_lo), a_lo, b_lo),
            hi_order: format!("{} ({} W vs {} W)", order(a_hi, b_hi), a_hi, b_hi),
        });
    }

    let (lo, hi) = bisect_flip(lo, hi, RELATIVE_WIDTH, a_cheaper);
    Ok(CrossoverResult {
        a: a.name.clone(),
        b: b.name.clone(),
        variable: "sla".into(),
        crossover_value: 0.5 * (lo + hi),
        metric: "total_power".into(),
        bracket: [lo, hi],
        a_cheaper_below: below,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::preset_system;

    #[test]
    fn bisect_finds_a_threshold() {
        let (lo, hi) = bisect_flip(1e-3, 10.0, 1e-6, |x| x < 0.25);
        assert!(lo < 0.25 && hi >= 0.25);
        assert!(hi - lo <= 1e-6 * lo);
    }

    #[test]
    fn identical_systems_have_no_crossover() {
        let (t, s) = preset_system("traditional").unwrap();
        let err = find_crossover(&t, &t, &s, &WorkloadSpec::reference(), DEFAULT_SLA_RANGE).unwrap_err();
        assert!(matches!(err, Error::NoCrossover { .. }), "{err}");
    }

    #[test]
    fn bad_range() {
        let (t, s) = preset_system("traditional").unwrap();
        let (d, _) = preset_system("die-stacked").unwrap();
        let w = WorkloadSpec::reference();
        assert!(find_crossover(&t, &d, &s, &w, (Seconds(1.0), Seconds(0.5))).is_err());
        assert!(find_crossover(&t, &d, &s, &w, (Seconds(0.0), Seconds(0.5))).is_err());
    }

    #[test]
    fn bracket_ends_disagree() {
        let (t, s) = preset_system("traditional").unwrap();
        let (d, _) = preset_system("die-stacked").unwrap();
        let w = WorkloadSpec::reference();
        let r = find_crossover(&t, &d, &s, &w, DEFAULT_SLA_RANGE).unwrap();
        let p = |cfg: &SystemConfig, sla: f64| {
            provision_performance(cfg, &s, &w, Seconds(sla)).unwrap().metrics.total_power.get()
        };
        let [lo, hi] = r.bracket;
        assert_ne!(p(&t, lo) < p(&d, lo), p(&t, hi) < p(&d, hi));
        assert_eq!(r.a_cheaper_below, p(&t, lo) < p(&d, lo));
        assert!(!r.a_cheaper_below);
    }
}
