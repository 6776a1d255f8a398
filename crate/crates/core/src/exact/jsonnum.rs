//! JSON-friendly integers: values that fit in `i64` are emitted as JSON
//! numbers, anything larger as a decimal string; both forms are accepted
//! when reading.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use std::str::FromStr;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FlexInt {
    Small(i64),
    Big(String),
}

impl From<&BigInt> for FlexInt {
    fn from(x: &BigInt) -> FlexInt {
        match i64::try_from(x.clone()) {
            Ok(v) => FlexInt::Small(v),
            Err(_) => FlexInt::Big(x.to_string()),
        }
    }
}

impl From<&FlexInt> for BigInt {
    fn from(f: &FlexInt) -> BigInt {
        match f {
            FlexInt::Small(v) => BigInt::from(*v),
            FlexInt::Big(s) => BigInt::from_str(s).unwrap_or_else(|_| BigInt::ZERO),
        }
    }
}

impl FlexInt {
    /// Strict parse that reports malformed strings instead of defaulting.
    pub fn parse(&self) -> Result<BigInt, String> {
        match self {
            FlexInt::Small(v) => Ok(BigInt::from(*v)),
            FlexInt::Big(s) => BigInt::from_str(s).map_err(|e| format!("bad integer '{s}': {e}")),
        }
    }
}
