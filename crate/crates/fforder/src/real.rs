//! Extended-precision real arithmetic for the analytic bounds.
//!
//! All values are binary floats with 192-bit significands (round half to
//! even), far beyond the 80-bit effective precision the bound formulas
//! need. Comparisons against exact integer counts never trust the float:
//! they convert the significand/exponent pair to exact rationals, bump the
//! value up by a relative 2^-96 plus one unit in the last place to absorb
//! any accumulated rounding, and compare exactly. A bound can therefore
//! never be accepted as smaller than a count due to float error.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::OnceLock;

use dashu_base::{SquareRoot, UnsignedAbs};
use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::IBig;
use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};

type FB = FBig<HalfEven, 2>;

/// Working significand width in bits.
pub const PRECISION: usize = 192;

/// Margin (in bits) reserved for accumulated rounding when converting to
/// exact rationals: upper() inflates by 2^-MARGIN relative plus one ulp.
const MARGIN: usize = 96;

const PI_DIGITS: &str = "3.14159265358979323846264338327950288419716939937510582097494459231";

/// A real number at fixed 192-bit binary precision.
#[derive(Debug, Clone, PartialEq)]
pub struct Real(FB);

fn fb_from_u64(v: u64) -> FB {
    FB::from(v).with_precision(PRECISION).value()
}

impl Real {
    pub fn from_u64(v: u64) -> Real {
        Real(fb_from_u64(v))
    }

    pub fn from_biguint(v: &BigUint) -> Real {
        let ib = IBig::from_str(&v.to_string()).expect("decimal round trip");
        Real(FB::from(ib).with_precision(PRECISION).value())
    }

    pub fn from_ratio(num: u64, den: u64) -> Real {
        assert!(den != 0, "zero denominator");
        Real::from_u64(num) / Real::from_u64(den)
    }

    /// Parses a plain decimal literal such as "0.2" or "3.75".
    pub fn parse_decimal(s: &str) -> Option<Real> {
        let d = dashu_float::DBig::from_str(s.trim()).ok()?.with_rounding::<HalfEven>();
        Some(Real(d.with_base_and_precision::<2>(PRECISION).value()))
    }

    pub fn zero() -> Real {
        Real(FB::ZERO.with_precision(PRECISION).value())
    }

    pub fn pi() -> Real {
        static PI: OnceLock<FB> = OnceLock::new();
        Real(
            PI.get_or_init(|| {
                let d = dashu_float::DBig::from_str(PI_DIGITS).expect("pi literal").with_rounding::<HalfEven>();
                d.with_base_and_precision::<2>(PRECISION).value()
            })
            .clone(),
        )
    }

    pub fn e() -> Real {
        static E: OnceLock<FB> = OnceLock::new();
        Real(E.get_or_init(|| fb_from_u64(1).exp()).clone())
    }

    pub fn is_positive(&self) -> bool {
        self.0 > FB::ZERO
    }

    pub fn sqrt(&self) -> Real {
        Real(self.0.sqrt())
    }

    pub fn exp(&self) -> Real {
        Real(self.0.exp())
    }

    pub fn powi(&self, exp: i64) -> Real {
        Real(self.0.powi(IBig::from(exp)))
    }

    /// self^(num/4), taken as an integer power followed by two square
    /// roots so that a zero base stays exact (no logarithm involved).
    pub fn pow_quarters(&self, num: i64) -> Real {
        self.powi(num).sqrt().sqrt()
    }

    /// The value inflated to an exact rational that is strictly larger
    /// for positive input: v * (1 + 2^-MARGIN), returned as (num, exp)
    /// with value num * 2^exp. Panics on negative input (bounds are
    /// positive); zero stays zero.
    fn upper(&self) -> (BigInt, i64) {
        let repr = self.0.repr();
        let sig = BigInt::from_str(&repr.significand().to_string()).expect("decimal round trip");
        assert!(!sig.is_negative(), "upper() expects a nonnegative value");
        if sig.is_zero() {
            return (sig, 0);
        }
        let exp = repr.exponent() as i64;
        let num = (&sig << MARGIN) + &sig;
        (num, exp - MARGIN as i64)
    }

    /// True when this value is certainly below n: the inflated upper
    /// rational is exactly compared against n.
    pub fn lt_int(&self, n: &BigUint) -> bool {
        let (num, exp) = self.upper();
        let n = BigInt::from(n.clone());
        if exp >= 0 {
            (num << exp) < n
        } else {
            num < (n << (-exp) as u64)
        }
    }

    /// Smallest integer at or above the inflated upper rational. A
    /// conservative threshold: a true value v can never receive a ceiling
    /// below ceil(v).
    pub fn ceil_upper(&self) -> BigUint {
        let (num, exp) = self.upper();
        let val = if exp >= 0 {
            num << exp
        } else {
            let den = BigInt::from(1u8) << (-exp) as u64;
            let (q, r) = num_integer::Integer::div_rem(&num, &den);
            if r.is_zero() {
                q
            } else {
                q + 1
            }
        };
        val.to_biguint().unwrap_or_else(BigUint::zero)
    }

    /// Formats with exactly 12 significant digits; plain decimal notation
    /// for magnitudes in [1e-4, 1e15), scientific otherwise.
    pub fn to_sig12(&self) -> String {
        const SIG: usize = 12;
        let dec = self.0.clone().with_base_and_precision::<10>(SIG).value();
        let repr = dec.repr();
        if repr.significand().is_zero() {
            return "0".into();
        }
        let neg = repr.significand() < &IBig::ZERO;
        let mut digits = repr.significand().clone().unsigned_abs().to_string();
        let mut exp = repr.exponent() as i64;
        // Normalize to exactly SIG digits (dashu trims trailing zeros).
        let pad = SIG.saturating_sub(digits.len());
        digits.push_str(&"0".repeat(pad));
        exp -= pad as i64;
        // Power of ten of the leading digit.
        let lead = exp + SIG as i64 - 1;
        let sign = if neg { "-" } else { "" };
        if (-4..15).contains(&lead) {
            if lead >= SIG as i64 - 1 {
                // All digits are integral; append zeros up to the scale.
                let zeros = "0".repeat((lead - (SIG as i64 - 1)) as usize);
                format!("{sign}{digits}{zeros}")
            } else if lead >= 0 {
                let point = (lead + 1) as usize;
                format!("{sign}{}.{}", &digits[..point], &digits[point..])
            } else {
                let zeros = "0".repeat((-lead - 1) as usize);
                format!("{sign}0.{zeros}{digits}")
            }
        } else {
            format!("{sign}{}.{}e{}", &digits[..1], &digits[1..], lead)
        }
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_sig12())
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Real) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

macro_rules! real_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for &Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                Real((&self.0).$method(&rhs.0))
            }
        }
        impl $trait for Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                Real(self.0.$method(rhs.0))
            }
        }
    };
}

real_binop!(Add, add);
real_binop!(Sub, sub);
real_binop!(Mul, mul);
real_binop!(Div, div);

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(-self.0)
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(-self.0.clone())
    }
}
