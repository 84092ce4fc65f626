//! Text and JSON forms: rationals as `"a/b"`, cyclotomic elements as
//! `{"N": int, "c": ["a/b", ...]}`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::de::{self, Deserializer};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use super::Scalar;
use crate::error::{Error, Result};

pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub(crate) fn format_rational_parts(n: &BigInt, d: &BigInt) -> String {
    format_rational(&BigRational::new(n.clone(), d.clone()))
}

/// Accepts `"a/b"` or a bare integer `"a"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("malformed rational {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(n, d))
}

impl Scalar {
    /// JSON value in the scalar file grammar.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("scalar serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Scalar> {
        match v {
            serde_json::Value::String(s) => Ok(Scalar::from_rational(parse_rational(s)?)),
            serde_json::Value::Number(n) => n
                .as_i64()
                .map(Scalar::from_int)
                .ok_or_else(|| Error::Parse(format!("non-integer number {n}"))),
            serde_json::Value::Object(map) => {
                let order = map
                    .get("N")
                    .and_then(|x| x.as_u64())
                    .ok_or_else(|| Error::Parse("cyclotomic scalar needs integer \"N\"".into()))?;
                let order = u32::try_from(order)
                    .map_err(|_| Error::Parse(format!("field order {order} too large")))?;
                let coeffs = map
                    .get("c")
                    .and_then(|x| x.as_array())
                    .ok_or_else(|| Error::Parse("cyclotomic scalar needs array \"c\"".into()))?;
                let coeffs = coeffs
                    .iter()
                    .map(|c| {
                        c.as_str()
                            .ok_or_else(|| Error::Parse("coefficients must be strings".into()))
                            .and_then(parse_rational)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Scalar::from_coeffs(order, &coeffs)
            }
            other => Err(Error::Parse(format!("not a scalar: {other}"))),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let (order, num, den) = self.raw_parts();
        if order == 1 {
            return ser.serialize_str(&format_rational_parts(&num[0], den));
        }
        let coeffs: Vec<String> = num
            .iter()
            .map(|n| format_rational_parts(n, den))
            .collect();
        let mut map = ser.serialize_map(Some(2))?;
        map.serialize_entry("N", &order)?;
        map.serialize_entry("c", &coeffs)?;
        map.end()
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(de)?;
        Scalar::from_json(&v).map_err(de::Error::custom)
    }
}

impl std::str::FromStr for Scalar {
    type Err = Error;
    fn from_str(s: &str) -> Result<Scalar> {
        let t = s.trim();
        if t.starts_with('{') {
            let v: serde_json::Value =
                serde_json::from_str(t).map_err(|e| Error::Parse(e.to_string()))?;
            return Scalar::from_json(&v);
        }
        Ok(Scalar::from_rational(parse_rational(t)?))
    }
}
