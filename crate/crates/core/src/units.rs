//! Physical quantities and their unit-suffixed text form.
//!
//! Capacities and bandwidths use binary prefixes throughout (`1GB` is 2^30
//! bytes, `25.6GB/s` is 25.6 * 2^30 bytes per second). Power uses decimal
//! prefixes. Suffixes are matched case-insensitively.
//!
//! Formatting is lossless: `x.to_string().parse()` yields `x` bit-for-bit.
//! Byte quantities are scaled by powers of two only, and power and time are
//! always printed in their base unit.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const KB: f64 = 1024.0;
pub const MB: f64 = KB * 1024.0;
pub const GB: f64 = MB * 1024.0;
pub const TB: f64 = GB * 1024.0;

pub const KW: f64 = 1e3;
pub const MW: f64 = 1e6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse {input:?} as {kind}: {reason}")]
pub struct UnitError {
    pub input: String,
    pub kind: &'static str,
    pub reason: String,
}

impl UnitError {
    fn new(input: &str, kind: &'static str, reason: impl Into<String>) -> Self {
        UnitError { input: input.to_string(), kind, reason: reason.into() }
    }
}

/// Splits `"25.6GB"` into `(25.6, "gb")`.
fn split_number(input: &str, kind: &'static str) -> Result<(f64, String), UnitError> {
    let s = input.trim();
    let end = s
        .char_indices()
        .find(|&(i, c)| {
            !(c.is_ascii_digit()
                || c == '.'
                || c == '+'
                || c == '-'
                // exponent marker, but only when followed by a digit or sign
                || ((c == 'e' || c == 'E')
                    && s[i + 1..].starts_with(|n: char| n.is_ascii_digit() || n == '-' || n == '+')))
        })
        .map(|(i, _)| i)
        .unwrap_or(s.len());
    let (num, suffix) = s.split_at(end);
    if num.is_empty() {
        return Err(UnitError::new(input, kind, "missing number"));
    }
    let value: f64 = num.parse().map_err(|_| UnitError::new(input, kind, format!("bad number {num:?}")))?;
    if !value.is_finite() {
        return Err(UnitError::new(input, kind, "not finite"));
    }
    Ok((value, suffix.trim().to_ascii_lowercase()))
}

fn byte_scale(suffix: &str) -> Option<f64> {
    Some(match suffix {
        "" | "b" => 1.0,
        "kb" => KB,
        "mb" => MB,
        "gb" => GB,
        "tb" => TB,
        _ => return None,
    })
}

/// Picks the largest binary prefix not exceeding `value`. Scaling by a power
/// of two is exact, so the printed mantissa round-trips.
fn format_binary(value: f64, f: &mut fmt::Formatter<'_>, per_second: bool) -> fmt::Result {
    let tail = if per_second { "/s" } else { "" };
    let magnitude = value.abs();
    for (scale, name) in [(TB, "TB"), (GB, "GB"), (MB, "MB"), (KB, "KB")] {
        if magnitude >= scale {
            return write!(f, "{}{name}{tail}", value / scale);
        }
    }
    write!(f, "{value}B{tail}")
}

macro_rules! quantity {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(pub f64);

        impl $name {
            pub const fn new(value: f64) -> Self {
                $name(value)
            }

            pub const fn get(self) -> f64 {
                self.0
            }
        }

        impl From<f64> for $name {
            fn from(value: f64) -> Self {
                $name(value)
            }
        }
    };
}

quantity!(
    /// A number of bytes.
    Bytes
);
quantity!(
    /// A data rate in bytes per second.
    BytesPerSec
);
quantity!(
    /// Electrical power in watts.
    Watts
);
quantity!(
    /// A duration in seconds.
    Seconds
);

impl FromStr for Bytes {
    type Err = UnitError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (value, suffix) = split_number(s, "bytes")?;
        let scale =
            byte_scale(&suffix).ok_or_else(|| UnitError::new(s, "bytes", "expected one of B, KB, MB, GB, TB"))?;
        Ok(Bytes(value * scale))
    }
}

impl fmt::Display for Bytes {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        format_binary(self.0, f, false)
    }
}

impl FromStr for BytesPerSec {
    type Err = UnitError;

    /// Accepts `25.6GB/s` as well as the bare `25.6GB` used in config files.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (value, suffix) = split_number(s, "bandwidth")?;
        let suffix = suffix.strip_suffix("/s").unwrap_or(&suffix);
        let scale = byte_scale(suffix)
            .ok_or_else(|| UnitError::new(s, "bandwidth", "expected one of B, KB, MB, GB, TB (optionally /s)"))?;
        Ok(BytesPerSec(value * scale))
    }
}

impl fmt::Display for BytesPerSec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        format_binary(self.0, f, true)
    }
}

impl FromStr for Watts {
    type Err = UnitError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (value, suffix) = split_number(s, "power")?;
        let watts = match suffix.as_str() {
            "" | "w" => value,
            "kw" => value * KW,
            "mw" => value * MW,
            _ => return Err(UnitError::new(s, "power", "expected one of W, kW, MW")),
        };
        Ok(Watts(watts))
    }
}

impl fmt::Display for Watts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}W", self.0)
    }
}

impl FromStr for Seconds {
    type Err = UnitError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (value, suffix) = split_number(s, "duration")?;
        let secs = match suffix.as_str() {
            "" | "s" => value,
            "ms" => value / 1e3,
            _ => return Err(UnitError::new(s, "duration", "expected one of ms, s")),
        };
        Ok(Seconds(secs))
    }
}

impl fmt::Display for Seconds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}s", self.0)
    }
}

/// Human-readable rendering at three significant digits, with the most
/// natural prefix. Not lossless; use `Display` for machine output.
pub mod human {
    use super::{GB, KB, MB, TB};

    /// `value` rounded to three significant digits.
    fn round3(value: f64) -> f64 {
        if value == 0.0 || !value.is_finite() {
            return value;
        }
        let scale = 10f64.powi(value.abs().log10().floor() as i32 - 2);
        (value / scale).round() * scale
    }

    pub fn sig3(value: f64) -> String {
        let rounded = round3(value);
        if rounded == 0.0 || !rounded.is_finite() {
            return format!("{rounded}");
        }
        let digits = rounded.abs().log10().floor() as i32;
        let decimals = (2 - digits).max(0) as usize;
        format!("{rounded:.decimals$}")
    }

    /// Picks the largest prefix the rounded value reaches, so 999.6 kW
    /// prints as 1.00 MW.
    fn scaled(value: f64, prefixes: &[(f64, &str)], base: &str) -> String {
        let rounded = round3(value);
        for (scale, name) in prefixes {
            if rounded.abs() >= *scale {
                return format!("{} {name}", sig3(value / scale));
            }
        }
        format!("{} {base}", sig3(value))
    }

    pub fn bytes(value: f64) -> String {
        scaled(value, &[(TB, "TB"), (GB, "GB"), (MB, "MB"), (KB, "KB")], "B")
    }

    pub fn bandwidth(value: f64) -> String {
        format!("{}/s", bytes(value))
    }

    pub fn watts(value: f64) -> String {
        scaled(value, &[(1e6, "MW"), (1e3, "kW")], "W")
    }

    pub fn seconds(value: f64) -> String {
        let rounded = round3(value);
        if rounded.abs() >= 1.0 {
            format!("{} s", sig3(value))
        } else if rounded.abs() >= 1e-3 {
            format!("{} ms", sig3(value * 1e3))
        } else {
            format!("{} us", sig3(value * 1e6))
        }
    }

    pub fn joules(value: f64) -> String {
        scaled(value, &[(1e3, "kJ")], "J")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn binary_prefixes() {
        assert_eq!("32GB".parse::<Bytes>().unwrap().get(), 32.0 * 1073741824.0);
        assert_eq!("16TB".parse::<Bytes>().unwrap().get(), 16.0 * 1099511627776.0);
        assert_eq!("2kb".parse::<Bytes>().unwrap().get(), 2048.0);
        assert_eq!("512".parse::<Bytes>().unwrap().get(), 512.0);
        assert_eq!("7 B".parse::<Bytes>().unwrap().get(), 7.0);
    }

    #[test]
    fn bandwidth_accepts_optional_per_second() {
        let a: BytesPerSec = "25.6GB".parse().unwrap();
        let b: BytesPerSec = "25.6gb/s".parse().unwrap();
        assert_eq!(a, b);
        assert_eq!(a.get(), 25.6 * GB);
    }

    #[test]
    fn power_and_time_suffixes() {
        assert_eq!("1MW".parse::<Watts>().unwrap().get(), 1e6);
        assert_eq!("50kW".parse::<Watts>().unwrap().get(), 50e3);
        assert_eq!("100w".parse::<Watts>().unwrap().get(), 100.0);
        assert_eq!("10ms".parse::<Seconds>().unwrap().get(), 0.01);
        assert_eq!("1S".parse::<Seconds>().unwrap().get(), 1.0);
        assert_eq!("1e-3s".parse::<Seconds>().unwrap().get(), 1e-3);
    }

    #[test]
    fn rejects_garbage() {
        assert!("GB".parse::<Bytes>().is_err());
        assert!("12XB".parse::<Bytes>().is_err());
        assert!("10 furlongs".parse::<Seconds>().is_err());
        assert!("1GW".parse::<Watts>().is_err());
        assert!("".parse::<Watts>().is_err());
        assert!("inf".parse::<Watts>().is_err());
    }

    #[test]
    fn display_uses_largest_prefix() {
        assert_eq!(Bytes(32.0 * GB).to_string(), "32GB");
        assert_eq!(Bytes(2.0 * TB).to_string(), "2TB");
        assert_eq!(BytesPerSec(25.6 * GB).to_string(), "25.6GB/s");
        assert_eq!(Watts(8.0).to_string(), "8W");
        assert_eq!(Bytes(100.0).to_string(), "100B");
    }

    #[test]
    fn three_significant_digits() {
        assert_eq!(human::sig3(0.0083333), "0.00833");
        assert_eq!(human::sig3(239888.0), "240000");
        assert_eq!(human::sig3(2.1333), "2.13");
        assert_eq!(human::seconds(0.5), "500 ms");
        assert_eq!(human::watts(239888.0), "240 kW");
        assert_eq!(human::watts(999_600.0), "1.00 MW");
        assert_eq!(human::seconds(0.9996), "1.00 s");
        assert_eq!(human::seconds(0.0009996), "1.00 ms");
        assert_eq!(human::bytes(1023.9 * GB), "1.00 TB");
    }

    proptest! {
        #[test]
        fn bytes_round_trip(v in 1e-3f64..1e18) {
            let b = Bytes(v);
            prop_assert_eq!(b.to_string().parse::<Bytes>().unwrap().get().to_bits(), v.to_bits());
        }

        #[test]
        fn bandwidth_round_trip(v in 1e-3f64..1e18) {
            let b = BytesPerSec(v);
            prop_assert_eq!(b.to_string().parse::<BytesPerSec>().unwrap().get().to_bits(), v.to_bits());
        }

        #[test]
        fn power_and_time_round_trip(w in 1e-6f64..1e12, t in 1e-9f64..1e6) {
            prop_assert_eq!(Watts(w).to_string().parse::<Watts>().unwrap().get().to_bits(), w.to_bits());
            prop_assert_eq!(Seconds(t).to_string().parse::<Seconds>().unwrap().get().to_bits(), t.to_bits());
        }
    }
}
