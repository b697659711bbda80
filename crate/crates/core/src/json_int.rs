//! JSON encoding for integers that may exceed 2^53.
//!
//! Values whose magnitude is at most 2^53 are written as plain JSON numbers;
//! anything larger is written as a decimal string. Both forms are accepted
//! on input.

use serde::de::{self, Deserializer, Visitor};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use std::fmt;

const SAFE: u128 = 1 << 53;

fn parse<T: std::str::FromStr>(s: &str) -> Result<T, String> {
    s.trim()
        .parse::<T>()
        .map_err(|_| format!("invalid integer string {s:?}"))
}

/// An `i64` with the big-number JSON convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JsonI64(pub i64);

impl Serialize for JsonI64 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if (self.0.unsigned_abs() as u128) <= SAFE {
            s.serialize_i64(self.0)
        } else {
            s.serialize_str(&self.0.to_string())
        }
    }
}

impl<'de> Deserialize<'de> for JsonI64 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = JsonI64;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a decimal string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<JsonI64, E> {
                Ok(JsonI64(v))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<JsonI64, E> {
                i64::try_from(v).map(JsonI64).map_err(E::custom)
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<JsonI64, E> {
                parse(v).map(JsonI64).map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}

/// A `u128` with the big-number JSON convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JsonU128(pub u128);

impl Serialize for JsonU128 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0 <= SAFE {
            s.serialize_u64(self.0 as u64)
        } else {
            s.serialize_str(&self.0.to_string())
        }
    }
}

impl<'de> Deserialize<'de> for JsonU128 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = JsonU128;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a non-negative integer or a decimal string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<JsonU128, E> {
                u128::try_from(v).map(JsonU128).map_err(E::custom)
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<JsonU128, E> {
                Ok(JsonU128(v as u128))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<JsonU128, E> {
                parse(v).map(JsonU128).map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}

/// `#[serde(with = "json_int::vec_i64")]` for `Vec<i64>` fields.
pub mod vec_i64 {
    use super::JsonI64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[i64], s: S) -> Result<S::Ok, S::Error> {
        let wrapped: Vec<JsonI64> = v.iter().copied().map(JsonI64).collect();
        wrapped.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<i64>, D::Error> {
        let wrapped = Vec::<JsonI64>::deserialize(d)?;
        Ok(wrapped.into_iter().map(|x| x.0).collect())
    }
}

/// `#[serde(with = "json_int::u128")]` for `u128` fields.
pub mod u128 {
    use super::JsonU128;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &u128, s: S) -> Result<S::Ok, S::Error> {
        JsonU128(*v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u128, D::Error> {
        Ok(JsonU128::deserialize(d)?.0)
    }
}

/// `#[serde(with = "json_int::opt_u128")]` for `Option<u128>` fields.
pub mod opt_u128 {
    use super::JsonU128;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<u128>, s: S) -> Result<S::Ok, S::Error> {
        v.map(JsonU128).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<u128>, D::Error> {
        Ok(Option::<JsonU128>::deserialize(d)?.map(|x| x.0))
    }
}

/// `#[serde(with = "json_int::u64")]` for `u64` fields.
pub mod u64 {
    use super::JsonU128;
    use serde::de::Error;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &u64, s: S) -> Result<S::Ok, S::Error> {
        JsonU128(*v as u128).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u64, D::Error> {
        let v = JsonU128::deserialize(d)?.0;
        ::core::primitive::u64::try_from(v).map_err(D::Error::custom)
    }
}

/// `#[serde(with = "json_int::opt_u64")]` for `Option<u64>` fields.
pub mod opt_u64 {
    use super::JsonU128;
    use serde::de::Error;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<u64>, s: S) -> Result<S::Ok, S::Error> {
        v.map(|x| JsonU128(x as u128)).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<u64>, D::Error> {
        match Option::<JsonU128>::deserialize(d)? {
            None => Ok(None),
            Some(v) => ::core::primitive::u64::try_from(v.0)
                .map(Some)
                .map_err(D::Error::custom),
        }
    }
}
