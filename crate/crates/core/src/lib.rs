//! Base-structure enumeration and exact generating functions for linear
//! transport moments of chaotic cavities.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub mod algebra;
pub mod basegen;
pub mod cli;
pub mod contrib;
pub mod diagrams;
pub mod perm;
pub mod rmt_oracle;
pub mod summation;
pub mod trees;
pub mod verify;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantity {
    Transmission,
    Reflection,
}

/// Unitary: broken time-reversal symmetry. Orthogonal: preserved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Symmetry {
    Unitary,
    Orthogonal,
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Quantity::Transmission => "transmission",
            Quantity::Reflection => "reflection",
        })
    }
}

impl fmt::Display for Symmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Symmetry::Unitary => "unitary",
            Symmetry::Orthogonal => "orthogonal",
        })
    }
}

impl FromStr for Quantity {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "transmission" => Ok(Quantity::Transmission),
            "reflection" => Ok(Quantity::Reflection),
            _ => Err(format!("unknown quantity {s:?}")),
        }
    }
}

impl FromStr for Symmetry {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "unitary" => Ok(Symmetry::Unitary),
            "orthogonal" => Ok(Symmetry::Orthogonal),
            _ => Err(format!("unknown symmetry {s:?}")),
        }
    }
}
