//! Fixed-width decimal rendering of reals.
//!
//! Every real that leaves the library (JSON, CSV, checkpoints) is written with
//! 17 significant digits, which is enough to round-trip any `f64` exactly and
//! keeps payloads byte-identical across platforms.

use serde::de::Deserializer;
use serde::ser::{Error as _, Serializer};
use serde::Deserialize;
use serde_json::value::RawValue;

/// Significant digits used for every serialized real.
pub const SIGNIFICANT_DIGITS: usize = 17;

/// Formats `v` with 17 significant digits.
///
/// Plain positional notation is used for decimal exponents in `[-5, 17)`,
/// scientific notation otherwise. Non-finite values render as `null` so the
/// output stays valid JSON.
pub fn format_sig17(v: f64) -> String {
    if !v.is_finite() {
        return "null".to_string();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("`e` formatting always has an exponent");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => ("-", rest),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();

    if !(-5..SIGNIFICANT_DIGITS as i32).contains(&exp) {
        return format!("{sign}{}.{}e{exp}", &digits[..1], &digits[1..]);
    }
    if exp >= 0 {
        let split = exp as usize + 1;
        let (int, frac) = digits.split_at(split);
        if frac.is_empty() {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac}")
        }
    } else {
        let zeros = "0".repeat((-exp - 1) as usize);
        format!("{sign}0.{zeros}{digits}")
    }
}

fn raw(v: f64) -> Result<Box<RawValue>, serde_json::Error> {
    RawValue::from_string(format_sig17(v))
}

/// `#[serde(with = "crate::real")]` for `f64` fields.
pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if !v.is_finite() {
        return Err(S::Error::custom(format!("cannot serialize non-finite real {v}")));
    }
    let r = raw(*v).map_err(S::Error::custom)?;
    serde::Serialize::serialize(&r, s)
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    f64::deserialize(d)
}

/// `Option<f64>`, with `None` (and non-finite values) as `null`.
pub mod opt {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(x) if x.is_finite() => super::serialize(x, s),
            _ => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        Option::<f64>::deserialize(d)
    }
}

/// `Vec<f64>`.
pub mod vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &[f64], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            seq.serialize_element(&raw(*x).map_err(S::Error::custom)?)?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        Vec::<f64>::deserialize(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn renders_small_and_large_values() {
        assert_eq!(format_sig17(45.0 / 53.0), "0.84905660377358494");
        assert_eq!(format_sig17(1.0 / 7.0), "0.14285714285714285");
        assert_eq!(format_sig17(560001.0), "560001.00000000000");
        assert_eq!(format_sig17(0.0), "0.0000000000000000");
        assert_eq!(format_sig17(-0.5), "-0.50000000000000000");
        assert_eq!(format_sig17(1.5e-7), "1.4999999999999999e-7");
        assert_eq!(format_sig17(f64::NAN), "null");
    }

    proptest! {
        #[test]
        fn round_trips_through_parse(v in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO) {
            let s = format_sig17(v);
            let back: f64 = s.parse().unwrap();
            prop_assert_eq!(back.to_bits(), v.to_bits());
        }
    }
}
