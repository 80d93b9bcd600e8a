//! Rationals serialize as decimal strings "n" or "n/d".

use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

use crate::arith::rat::{parse_rat, to_string_rat, Rat};

pub fn serialize<S: Serializer>(x: &Rat, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&to_string_rat(x))
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
    let s = String::deserialize(d)?;
    parse_rat(&s).map_err(D::Error::custom)
}

pub mod vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(xs: &[Rat], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for x in xs {
            seq.serialize_element(&to_string_rat(x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rat>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter().map(|s| parse_rat(s).map_err(D::Error::custom)).collect()
    }
}

pub mod mat {
    use super::*;
    use serde::Serialize;

    pub fn serialize<S: Serializer>(rows: &[Vec<Rat>], s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(to_string_rat).collect()).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rat>>, D::Error> {
        let v = Vec::<Vec<String>>::deserialize(d)?;
        v.iter()
            .map(|r| r.iter().map(|s| parse_rat(s).map_err(D::Error::custom)).collect())
            .collect()
    }
}
