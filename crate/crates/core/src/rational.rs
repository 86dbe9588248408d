//! Exact rational helpers: parsing, formatting and serde adapters for
//! [`Rational64`](num_rational::Rational64).

use num_integer::Integer;
use num_rational::Rational64;

use crate::error::{Error, Result};

pub type Q = Rational64;

/// Parses `"3"`, `"-7/4"` or a finite decimal such as `"0.125"` / `"-2.5e-3"`.
pub fn parse_q(text: &str) -> Result<Q> {
    let t = text.trim();
    let bad = || Error::Input(format!("not a rational number: {text:?}"));
    if let Some((num, den)) = t.split_once('/') {
        let n: i64 = num.trim().parse().map_err(|_| bad())?;
        let d: i64 = den.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Q::new(n, d));
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(p) => (&t[..p], t[p + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all: String = format!("{int_part}{frac_part}");
    let mut num: i128 = all.trim_start_matches('0').parse().unwrap_or(0);
    if all.trim_start_matches('0').len() > 30 {
        return Err(Error::Overflow("rational parse"));
    }
    let scale = exp - frac_part.len() as i32;
    let mut den: i128 = 1;
    if scale >= 0 {
        for _ in 0..scale {
            num = num.checked_mul(10).ok_or(Error::Overflow("rational parse"))?;
        }
    } else {
        for _ in 0..(-scale) {
            den = den.checked_mul(10).ok_or(Error::Overflow("rational parse"))?;
        }
    }
    let g = num.gcd(&den).max(1);
    let (num, den) = (num / g, den / g);
    let num = i64::try_from(num).map_err(|_| Error::Overflow("rational parse"))?;
    let den = i64::try_from(den).map_err(|_| Error::Overflow("rational parse"))?;
    Ok(Q::new(if neg { -num } else { num }, den))
}

/// `"3"` for integers, `"-7/4"` otherwise.
pub fn format_q(q: &Q) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Best-effort decimal rendering for human tables.
pub fn q_to_f64(q: &Q) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

/// Least common multiple of the denominators, as `i128`.
pub fn common_denominator<'a, I: IntoIterator<Item = &'a Q>>(values: I) -> Result<i128> {
    let mut l: i128 = 1;
    for q in values {
        l = l.lcm(&(*q.denom() as i128));
        if l > (1i128 << 62) {
            return Err(Error::Overflow("common denominator"));
        }
    }
    Ok(l)
}

/// Scales `q` by `scale` (a multiple of its denominator) into an integer.
pub fn scaled(q: &Q, scale: i128) -> i128 {
    *q.numer() as i128 * (scale / *q.denom() as i128)
}

fn q_from_value(v: &serde_json::Value) -> std::result::Result<Q, String> {
    match v {
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Q::from_integer(i))
            } else {
                parse_q(&n.to_string()).map_err(|e| e.to_string())
            }
        }
        serde_json::Value::String(s) => parse_q(s).map_err(|e| e.to_string()),
        other => Err(format!("expected a number or a rational string, found {other}")),
    }
}

fn q_to_value(q: &Q) -> serde_json::Value {
    if q.is_integer() {
        serde_json::Value::from(*q.numer())
    } else {
        serde_json::Value::String(format_q(q))
    }
}

/// Serde adapter: integers as JSON numbers, other rationals as `"p/q"` strings.
pub mod serde_q {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        serde::Serialize::serialize(&q_to_value(q), s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        q_from_value(&v).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Vec<Q>`.
pub mod serde_q_vec {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(qs: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
        let vals: Vec<serde_json::Value> = qs.iter().map(q_to_value).collect();
        serde::Serialize::serialize(&vals, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Q>, D::Error> {
        let vals = Vec::<serde_json::Value>::deserialize(d)?;
        vals.iter()
            .map(|v| q_from_value(v).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Serde adapter for `Vec<Vec<Q>>` (matrices).
pub mod serde_q_mat {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(rows: &[Vec<Q>], s: S) -> std::result::Result<S::Ok, S::Error> {
        let vals: Vec<Vec<serde_json::Value>> = rows.iter().map(|r| r.iter().map(q_to_value).collect()).collect();
        serde::Serialize::serialize(&vals, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Vec<Q>>, D::Error> {
        let rows = Vec::<Vec<serde_json::Value>>::deserialize(d)?;
        rows.iter()
            .map(|r| {
                r.iter()
                    .map(|v| q_from_value(v).map_err(serde::de::Error::custom))
                    .collect()
            })
            .collect()
    }
}

/// Serde adapter for `Option<Q>`.
pub mod serde_q_opt {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Option<Q>, s: S) -> std::result::Result<S::Ok, S::Error> {
        serde::Serialize::serialize(&q.as_ref().map(q_to_value), s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Q>, D::Error> {
        let v = Option::<serde_json::Value>::deserialize(d)?;
        v.map(|v| q_from_value(&v).map_err(serde::de::Error::custom))
            .transpose()
    }
}

/// Serde adapter for `Option<Vec<Q>>`.
pub mod serde_q_vec_opt {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(qs: &Option<Vec<Q>>, s: S) -> std::result::Result<S::Ok, S::Error> {
        let vals: Option<Vec<serde_json::Value>> = qs.as_ref().map(|v| v.iter().map(q_to_value).collect());
        serde::Serialize::serialize(&vals, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Vec<Q>>, D::Error> {
        let vals = Option::<Vec<serde_json::Value>>::deserialize(d)?;
        vals.map(|vs| {
            vs.iter()
                .map(|v| q_from_value(v).map_err(serde::de::Error::custom))
                .collect()
        })
        .transpose()
    }
}
