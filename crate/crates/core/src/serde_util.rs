//! JSON encodings for exact numbers. Integers go out as JSON numbers of any
//! size; rationals as strings such as `"3/2"`.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub fn number(x: &BigInt) -> serde_json::Number {
    x.to_string().parse().expect("integer text is a JSON number")
}

/// A [`BigInt`] that (de)serializes as a plain JSON number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JsonInt(pub BigInt);

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        number(&self.0).serialize(s)
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let n = serde_json::Number::deserialize(d)?;
        n.to_string()
            .parse::<BigInt>()
            .map(JsonInt)
            .map_err(|_| serde::de::Error::custom(format!("expected an integer, found {n}")))
    }
}

pub fn bigint_seq<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(number))
}

pub fn rational<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}
