//! Extension fields presented as F_q[X]/(h) for an explicit monic
//! irreducible h, and multiplicative-order computation.
//!
//! Unlike [`crate::field::Field`], which always uses the canonical modulus,
//! an [`ExtField`] keeps whatever h it was given: the residue class of X is
//! then a root of h, which is exactly what the order experiments need.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigUint;
use num_traits::One;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldRef};
use crate::integer::{self, IntFactorization};
use crate::poly::DensePoly;

pub type ExtRef = Arc<ExtField>;

pub struct ExtField {
    base: FieldRef,
    h: DensePoly,
    n: usize,
    group_factors: OnceLock<IntFactorization>,
}

impl fmt::Debug for ExtField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExtField({} adjoin root of {})", self.base, self.h)
    }
}

impl ExtField {
    /// Wraps a monic irreducible h (degree >= 1) as the modulus of an
    /// extension of its coefficient field.
    pub fn new(h: &DensePoly) -> Result<ExtRef> {
        let n = h.degree().ok_or(Error::ZeroPolynomial)?;
        if n == 0 || !crate::factor::is_irreducible(h)? {
            return Err(Error::NotIrreducible);
        }
        let (_, h) = h.monic();
        Ok(Arc::new(ExtField {
            base: h.field().clone(),
            n,
            h,
            group_factors: OnceLock::new(),
        }))
    }

    pub fn base(&self) -> &FieldRef {
        &self.base
    }

    pub fn modulus(&self) -> &DensePoly {
        &self.h
    }

    /// Extension degree n over the base field.
    pub fn degree(&self) -> usize {
        self.n
    }

    /// Cardinality q^n as a big integer.
    pub fn cardinality(&self) -> BigUint {
        BigUint::from(self.base.q()).pow(self.n as u32)
    }

    /// The multiplicative group order q^n - 1, provided it fits the cap.
    pub fn group_order(&self, caps: &Caps) -> Result<u128> {
        let order = self.cardinality() - BigUint::one();
        let bits = order.bits() as u32;
        if bits > caps.order_bits || bits > 128 {
            return Err(Error::OrderWidth { q: self.base.q(), n: self.n as u32, bits });
        }
        let digits = order.to_u64_digits();
        let mut v: u128 = 0;
        for &d in digits.iter().rev() {
            v = (v << 64) | d as u128;
        }
        Ok(v)
    }

    /// Factorization of q^n - 1, computed once and cached.
    pub fn group_factors(&self, caps: &Caps) -> Result<&IntFactorization> {
        let order = self.group_order(caps)?;
        Ok(self.group_factors.get_or_init(|| integer::factor_u128(order)))
    }

    fn same(self: &ExtRef, other: &ExtRef) -> bool {
        Arc::ptr_eq(self, other) || (self.base.same(&other.base) && self.h == other.h)
    }

    pub fn zero(self: &ExtRef) -> ExtElement {
        ExtElement { ext: self.clone(), rep: DensePoly::zero(&self.base) }
    }

    pub fn one(self: &ExtRef) -> ExtElement {
        ExtElement { ext: self.clone(), rep: DensePoly::one(&self.base) }
    }

    /// The residue class of X: a root of the modulus.
    pub fn theta(self: &ExtRef) -> ExtElement {
        self.from_poly(DensePoly::x(&self.base))
    }

    /// Reduces an arbitrary representative.
    pub fn from_poly(self: &ExtRef, rep: DensePoly) -> ExtElement {
        assert!(rep.field().same(&self.base), "representative over the wrong base field");
        let rep = if rep.degree().is_some_and(|d| d >= self.n) { rep.rem(&self.h) } else { rep };
        ExtElement { ext: self.clone(), rep }
    }

    /// A base-field constant viewed in the extension.
    pub fn embed(self: &ExtRef, c: &FieldElement) -> ExtElement {
        assert!(c.field().same(&self.base), "constant from the wrong base field");
        ExtElement { ext: self.clone(), rep: DensePoly::constant(c.clone()) }
    }
}

/// An element of an [`ExtField`]: a residue of degree < n.
#[derive(Debug, Clone)]
pub struct ExtElement {
    ext: ExtRef,
    rep: DensePoly,
}

impl ExtElement {
    pub fn ext(&self) -> &ExtRef {
        &self.ext
    }

    /// The canonical representative, degree < n.
    pub fn rep(&self) -> &DensePoly {
        &self.rep
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.rep.is_one()
    }

    /// Coefficient indexes of the representative, zero-padded to length n.
    /// A total, injective key: equal keys mean equal elements.
    pub fn canonical_key(&self) -> Vec<u128> {
        (0..self.ext.n).map(|i| self.rep.coeff(i).index()).collect()
    }

    /// True when the element lies in the base field (degree < 1).
    pub fn in_base_field(&self) -> bool {
        self.rep.degree().is_none_or(|d| d == 0)
    }

    pub fn pow(&self, e: u128) -> ExtElement {
        ExtElement { ext: self.ext.clone(), rep: self.rep.pow_mod(e, &self.ext.h) }
    }

    pub fn pow_big(&self, e: &BigUint) -> ExtElement {
        ExtElement { ext: self.ext.clone(), rep: self.rep.pow_mod_big(e, &self.ext.h) }
    }

    pub fn inverse(&self) -> Result<ExtElement> {
        if self.is_zero() {
            return Err(Error::ZeroElement);
        }
        let (g, u, _) = self.rep.extended_gcd(&self.ext.h);
        debug_assert!(g.is_one(), "modulus is irreducible and rep is nonzero");
        Ok(ExtElement { ext: self.ext.clone(), rep: u.rem(&self.ext.h) })
    }

    /// Exact multiplicative order, using the cached factorization of q^n - 1.
    pub fn order(&self, caps: &Caps) -> Result<u128> {
        if self.is_zero() {
            return Err(Error::ZeroElement);
        }
        let factors = self.ext.group_factors(caps)?;
        Ok(integer::multiplicative_order(factors, |e| self.pow(e).is_one()))
    }
}

impl PartialEq for ExtElement {
    fn eq(&self, other: &Self) -> bool {
        self.ext.same(&other.ext) && self.rep == other.rep
    }
}
impl Eq for ExtElement {}

impl fmt::Display for ExtElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rep.coeff_string())
    }
}

macro_rules! check_same_ext {
    ($a:expr, $b:expr) => {
        assert!($a.ext.same(&$b.ext), "elements of different extension fields");
    };
}

impl std::ops::Add for &ExtElement {
    type Output = ExtElement;
    fn add(self, rhs: &ExtElement) -> ExtElement {
        check_same_ext!(self, rhs);
        ExtElement { ext: self.ext.clone(), rep: &self.rep + &rhs.rep }
    }
}

impl std::ops::Sub for &ExtElement {
    type Output = ExtElement;
    fn sub(self, rhs: &ExtElement) -> ExtElement {
        check_same_ext!(self, rhs);
        ExtElement { ext: self.ext.clone(), rep: &self.rep - &rhs.rep }
    }
}

impl std::ops::Mul for &ExtElement {
    type Output = ExtElement;
    fn mul(self, rhs: &ExtElement) -> ExtElement {
        check_same_ext!(self, rhs);
        ExtElement { ext: self.ext.clone(), rep: (&self.rep * &rhs.rep).rem(&self.ext.h) }
    }
}

impl std::ops::Neg for &ExtElement {
    type Output = ExtElement;
    fn neg(self) -> ExtElement {
        ExtElement { ext: self.ext.clone(), rep: -&self.rep }
    }
}

/// Multiplicative order of a nonzero element of a plain field.
pub fn element_order(x: &FieldElement) -> Result<u128> {
    if x.is_zero() {
        return Err(Error::ZeroElement);
    }
    let factors = integer::factor_u128(x.field().q() - 1);
    Ok(integer::multiplicative_order(&factors, |e| x.pow(e).is_one()))
}
