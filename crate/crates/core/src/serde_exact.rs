//! Serde adapters that keep exact values authoritative in JSON.
//!
//! A rational becomes `{"exact": "p/q", "decimal": "…"}`; only `exact` is
//! read back. Integers become decimal strings.

use num::bigint::BigInt;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::divisor::DivisorClass;
use crate::rational::{parse_rational, render, to_decimal, Rational};

pub const DECIMAL_DIGITS: usize = 12;

#[derive(Serialize, Deserialize)]
struct Repr {
    exact: String,
    #[serde(default)]
    decimal: String,
}

fn to_repr(q: &Rational) -> Repr {
    Repr {
        exact: render(q),
        decimal: to_decimal(q, DECIMAL_DIGITS),
    }
}

fn from_repr<E: serde::de::Error>(r: Repr) -> Result<Rational, E> {
    parse_rational(&r.exact).map_err(|e| E::custom(e.to_string()))
}

pub mod exact {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        to_repr(q).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        from_repr(Repr::deserialize(d)?)
    }
}

pub mod exact_opt {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        q.as_ref().map(to_repr).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        Option::<Repr>::deserialize(d)?.map(from_repr).transpose()
    }
}

pub mod exact_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(to_repr).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        Vec::<Repr>::deserialize(d)?
            .into_iter()
            .map(from_repr)
            .collect()
    }
}

pub mod integer {
    use super::*;

    pub fn serialize<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        n.to_string().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        String::deserialize(d)?.parse().map_err(D::Error::custom)
    }
}

pub mod integer_opt {
    use super::*;

    pub fn serialize<S: Serializer>(n: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
        n.as_ref().map(ToString::to_string).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigInt>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|t| t.parse().map_err(D::Error::custom))
            .transpose()
    }
}

pub mod integer_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<String>::deserialize(d)?
            .into_iter()
            .map(|t| t.parse().map_err(D::Error::custom))
            .collect()
    }
}

impl Serialize for DivisorClass {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        exact_vec::serialize(self.coords(), s)
    }
}

impl<'de> Deserialize<'de> for DivisorClass {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        exact_vec::deserialize(d).map(DivisorClass::new)
    }
}
