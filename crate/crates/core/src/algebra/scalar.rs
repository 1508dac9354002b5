use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Flow classes, ordered `O < M < W < P < Inf`.
///
/// Addition is the least upper bound. Multiplication is the least upper bound
/// on nonzero operands, with `O` absorbing everything (`Inf` included).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum MwpScalar {
    #[default]
    O,
    M,
    W,
    P,
    Inf,
}

pub const ALL_SCALARS: [MwpScalar; 5] = [
    MwpScalar::O,
    MwpScalar::M,
    MwpScalar::W,
    MwpScalar::P,
    MwpScalar::Inf,
];

impl MwpScalar {
    pub fn as_str(self) -> &'static str {
        match self {
            MwpScalar::O => "0",
            MwpScalar::M => "m",
            MwpScalar::W => "w",
            MwpScalar::P => "p",
            MwpScalar::Inf => "inf",
        }
    }

    pub fn is_zero(self) -> bool {
        self == MwpScalar::O
    }
}

impl Add for MwpScalar {
    type Output = MwpScalar;

    fn add(self, rhs: MwpScalar) -> MwpScalar {
        self.max(rhs)
    }
}

impl Mul for MwpScalar {
    type Output = MwpScalar;

    fn mul(self, rhs: MwpScalar) -> MwpScalar {
        if self.is_zero() || rhs.is_zero() {
            MwpScalar::O
        } else {
            self.max(rhs)
        }
    }
}

impl fmt::Display for MwpScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MwpScalar {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "0" => MwpScalar::O,
            "m" => MwpScalar::M,
            "w" => MwpScalar::W,
            "p" => MwpScalar::P,
            "inf" => MwpScalar::Inf,
            _ => return Err(format!("unknown flow class `{s}`")),
        })
    }
}

impl Serialize for MwpScalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for MwpScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
