//! Quantities with units. A bare number is taken in the base unit (seconds
//! or metres); a string carries its own unit, e.g. `"250 ms"` or `"1.5 km"`.

use std::fmt;

use ara_core::Time;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A duration. Serialized as exact microseconds (`"1500 us"`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Seconds(pub Time);

/// A length in metres.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Metres(pub f64);

fn split_unit(s: &str) -> Option<(f64, &str)> {
    let s = s.trim();
    let at = s
        .find(|c: char| c.is_ascii_alphabetic() && c != 'e' && c != 'E')
        .unwrap_or(s.len());
    let (num, unit) = s.split_at(at);
    let value: f64 = num.trim().parse().ok()?;
    Some((value, unit.trim()))
}

pub fn parse_duration(s: &str) -> Result<Time, String> {
    let (v, unit) = split_unit(s).ok_or_else(|| format!("cannot read `{s}` as a duration"))?;
    let scale = match unit {
        "us" | "µs" => 1e-6,
        "ms" => 1e-3,
        "" | "s" => 1.0,
        "min" => 60.0,
        other => return Err(format!("unknown time unit `{other}` (use us, ms, s or min)")),
    };
    to_time(v * scale)
}

fn to_time(secs: f64) -> Result<Time, String> {
    if !secs.is_finite() || secs < 0.0 {
        return Err(format!("duration must be finite and non-negative, got {secs}"));
    }
    Ok(Time::from_secs_f64(secs))
}

pub fn parse_distance(s: &str) -> Result<f64, String> {
    let (v, unit) = split_unit(s).ok_or_else(|| format!("cannot read `{s}` as a distance"))?;
    let scale = match unit {
        "" | "m" => 1.0,
        "km" => 1000.0,
        other => return Err(format!("unknown distance unit `{other}` (use m or km)")),
    };
    Ok(v * scale)
}

impl Serialize for Seconds {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{} us", self.0.as_micros()))
    }
}

impl<'de> Deserialize<'de> for Seconds {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Seconds;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("seconds as a number, or a string such as \"100 ms\"")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Seconds, E> {
                to_time(v as f64).map(Seconds).map_err(E::custom)
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Seconds, E> {
                Ok(Seconds(Time::from_secs(v)))
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Seconds, E> {
                to_time(v).map(Seconds).map_err(E::custom)
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Seconds, E> {
                parse_duration(v).map(Seconds).map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}

impl Serialize for Metres {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(self.0)
    }
}

impl<'de> Deserialize<'de> for Metres {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Metres;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("metres as a number, or a string such as \"1.5 km\"")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Metres, E> {
                Ok(Metres(v as f64))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Metres, E> {
                Ok(Metres(v as f64))
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Metres, E> {
                Ok(Metres(v))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Metres, E> {
                parse_distance(v).map(Metres).map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}
