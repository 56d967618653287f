//! Serde helpers: big integers travel as decimal strings so JSON stays
//! exact at any magnitude.  Use with `#[serde(with = "crate::wire::bigint")]`.

pub(crate) mod bigint {
    use num_bigint::BigInt;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};
    use std::str::FromStr;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        BigInt::from_str(&s).map_err(|e| D::Error::custom(format!("bad integer literal: {e}")))
    }
}
