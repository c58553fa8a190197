//! Resource caps shared by the fallible constructors.
//!
//! Every operation that can build something astronomically large takes a
//! [`Caps`] value and refuses politely instead of thrashing. The defaults are
//! sized for desk-scale experiments; the `FFORDER_CAPS` environment variable
//! (handled by the CLI via [`Caps::apply_overrides`]) raises or lowers them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Largest polynomial degree `frobenius_poly` will materialize.
    pub degree: u64,
    /// Largest exponent-vector family that may be listed member by member.
    pub enumeration: u64,
    /// Bit width the multiplicative group order must fit in (at most 128).
    pub order_bits: u32,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { degree: 1 << 20, enumeration: 1_000_000, order_bits: 128 }
    }
}

impl Caps {
    /// Applies comma-separated `key=value` overrides, e.g.
    /// `"degree=2097152,enum=500000,order_bits=96"`. Unknown keys are
    /// rejected so typos do not silently keep a default.
    pub fn apply_overrides(mut self, spec: &str) -> Result<Caps> {
        for part in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::parse("caps override", part))?;
            let value: u64 = value
                .trim()
                .parse()
                .map_err(|_| Error::parse("caps override", part))?;
            match key.trim() {
                "degree" => self.degree = value,
                "enum" | "enumeration" => self.enumeration = value,
                "order_bits" => {
                    if !(1..=128).contains(&value) {
                        return Err(Error::parse("caps override", part));
                    }
                    self.order_bits = value as u32;
                }
                _ => return Err(Error::parse("caps override", part)),
            }
        }
        Ok(self)
    }
}
