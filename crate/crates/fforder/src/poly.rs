//! Dense univariate polynomials over a [`Field`].
//!
//! Coefficients are stored low-to-high in one flat `Vec<u64>` with stride k
//! (k words per coefficient), so the multiplication and division inner loops
//! run without per-coefficient allocation. The zero polynomial has an empty
//! coefficient vector; every other polynomial keeps no trailing zero block.
//!
//! The textual format is the comma-separated list of coefficient indexes,
//! low-to-high: `1,0,1` is X^2 + 1 and `0` is the zero polynomial.

use std::fmt;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldRef};

#[derive(Debug, Clone)]
pub struct DensePoly {
    field: FieldRef,
    w: Vec<u64>,
}

impl DensePoly {
    pub fn zero(field: &FieldRef) -> DensePoly {
        DensePoly { field: field.clone(), w: Vec::new() }
    }

    pub fn one(field: &FieldRef) -> DensePoly {
        DensePoly::constant(field.one())
    }

    pub fn x(field: &FieldRef) -> DensePoly {
        let k = field.kw();
        let mut w = vec![0; 2 * k];
        w[k] = 1;
        DensePoly { field: field.clone(), w }
    }

    pub fn constant(c: FieldElement) -> DensePoly {
        let field = c.field().clone();
        if c.is_zero() {
            DensePoly::zero(&field)
        } else {
            DensePoly { field, w: c.words().to_vec() }
        }
    }

    pub fn from_elements(field: &FieldRef, coeffs: &[FieldElement]) -> DensePoly {
        let k = field.kw();
        let mut w = Vec::with_capacity(coeffs.len() * k);
        for c in coeffs {
            assert!(c.field().same(field), "coefficient from a different field");
            w.extend_from_slice(c.words());
        }
        let mut p = DensePoly { field: field.clone(), w };
        p.trim();
        p
    }

    /// Builds from (exponent, coefficient) pairs; later pairs overwrite
    /// earlier ones at the same exponent.
    pub fn from_sparse(field: &FieldRef, terms: &[(usize, FieldElement)]) -> DensePoly {
        let k = field.kw();
        let n = terms.iter().map(|(e, _)| *e).max().map_or(0, |e| e + 1);
        let mut w = vec![0u64; n * k];
        for (e, c) in terms {
            assert!(c.field().same(field), "coefficient from a different field");
            w[e * k..(e + 1) * k].copy_from_slice(c.words());
        }
        let mut p = DensePoly { field: field.clone(), w };
        p.trim();
        p
    }

    /// Coefficients given by their integer encodings, low-to-high.
    pub fn from_index_coeffs(field: &FieldRef, coeffs: &[u128]) -> Result<DensePoly> {
        let elems: Vec<FieldElement> =
            coeffs.iter().map(|&i| field.elem(i)).collect::<Result<_>>()?;
        Ok(DensePoly::from_elements(field, &elems))
    }

    /// Parses the comma-separated coefficient-index format.
    pub fn parse(field: &FieldRef, s: &str) -> Result<DensePoly> {
        let coeffs: Vec<u128> = s
            .split(',')
            .map(|t| t.trim().parse().map_err(|_| Error::parse("polynomial", s)))
            .collect::<Result<_>>()?;
        if coeffs.is_empty() {
            return Err(Error::parse("polynomial", s));
        }
        DensePoly::from_index_coeffs(field, &coeffs)
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.w.is_empty() {
            None
        } else {
            Some(self.w.len() / self.field.kw() - 1)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.w.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.degree() == Some(0) && self.coeff(0).is_one()
    }

    /// Number of stored coefficients (degree + 1, or 0 when zero).
    fn len(&self) -> usize {
        if self.w.is_empty() {
            0
        } else {
            self.w.len() / self.field.kw()
        }
    }

    fn slot(&self, i: usize) -> &[u64] {
        let k = self.field.kw();
        &self.w[i * k..(i + 1) * k]
    }

    /// Coefficient of X^i (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> FieldElement {
        if i < self.len() {
            self.field.from_words(self.slot(i).to_vec())
        } else {
            self.field.zero()
        }
    }

    pub fn leading(&self) -> Option<FieldElement> {
        self.degree().map(|d| self.coeff(d))
    }

    pub fn coeffs(&self) -> Vec<FieldElement> {
        (0..self.len()).map(|i| self.coeff(i)).collect()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    fn trim(&mut self) {
        let k = self.field.kw();
        while !self.w.is_empty() && self.field.w_is_zero(&self.w[self.w.len() - k..]) {
            self.w.truncate(self.w.len() - k);
        }
    }

    pub fn mul_elem(&self, c: &FieldElement) -> DensePoly {
        assert!(c.field().same(&self.field), "scalar from a different field");
        if c.is_zero() || self.is_zero() {
            return DensePoly::zero(&self.field);
        }
        let k = self.field.kw();
        let mut w = vec![0; self.w.len()];
        let mut scratch = vec![0; 2 * k - 1];
        for i in 0..self.len() {
            self.field.w_mul(self.slot(i), c.words(), &mut w[i * k..(i + 1) * k], &mut scratch);
        }
        let mut p = DensePoly { field: self.field.clone(), w };
        p.trim();
        p
    }

    /// Multiplication by X^n.
    pub fn shift(&self, n: usize) -> DensePoly {
        if self.is_zero() {
            return self.clone();
        }
        let k = self.field.kw();
        let mut w = vec![0; n * k];
        w.extend_from_slice(&self.w);
        DensePoly { field: self.field.clone(), w }
    }

    /// (leading coefficient, self / leading).
    pub fn monic(&self) -> (FieldElement, DensePoly) {
        let lead = self.leading().expect("monic of the zero polynomial");
        if lead.is_one() {
            (lead, self.clone())
        } else {
            let inv = lead.inverse().expect("leading coefficient is nonzero");
            (lead, self.mul_elem(&inv))
        }
    }

    pub fn derivative(&self) -> DensePoly {
        let k = self.field.kw();
        if self.len() <= 1 {
            return DensePoly::zero(&self.field);
        }
        let mut w = vec![0; (self.len() - 1) * k];
        let mut scratch = vec![0; 2 * k - 1];
        for i in 1..self.len() {
            let m = self.field.int(i as i64);
            self.field.w_mul(self.slot(i), m.words(), &mut w[(i - 1) * k..i * k], &mut scratch);
        }
        let mut p = DensePoly { field: self.field.clone(), w };
        p.trim();
        p
    }

    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        assert!(x.field().same(&self.field), "point from a different field");
        let mut acc = self.field.zero();
        for i in (0..self.len()).rev() {
            acc = &(&acc * x) + &self.coeff(i);
        }
        acc
    }

    /// Long division: `self = q * divisor + r` with deg r < deg divisor.
    /// Panics on a zero divisor (programming error).
    pub fn divmod(&self, divisor: &DensePoly) -> (DensePoly, DensePoly) {
        assert!(self.field.same(&divisor.field), "polynomials over different fields");
        let dd = divisor.degree().expect("division by the zero polynomial");
        let k = self.field.kw();
        let Some(nd) = self.degree() else {
            return (DensePoly::zero(&self.field), DensePoly::zero(&self.field));
        };
        if nd < dd {
            return (DensePoly::zero(&self.field), self.clone());
        }
        let inv_lead = divisor.leading().unwrap().inverse().expect("nonzero leading");
        let mut rem = self.w.clone();
        let mut quo = vec![0u64; (nd - dd + 1) * k];
        let mut factor = vec![0u64; k];
        let mut scratch = vec![0u64; 2 * k - 1];
        let mut prod = vec![0u64; k];
        for i in (dd..=nd).rev() {
            let top = &rem[i * k..(i + 1) * k];
            if self.field.w_is_zero(top) {
                continue;
            }
            self.field.w_mul(top, inv_lead.words(), &mut factor, &mut scratch);
            quo[(i - dd) * k..(i - dd + 1) * k].copy_from_slice(&factor);
            // rem -= factor * X^(i-dd) * divisor
            for j in 0..=dd {
                if self.field.w_is_zero(divisor.slot(j)) {
                    continue;
                }
                self.field.w_mul(&factor, divisor.slot(j), &mut prod, &mut scratch);
                let at = (i - dd + j) * k;
                self.field.w_sub_assign(&mut rem[at..at + k], &prod);
            }
        }
        let mut q = DensePoly { field: self.field.clone(), w: quo };
        q.trim();
        rem.truncate(dd * k);
        let mut r = DensePoly { field: self.field.clone(), w: rem };
        r.trim();
        (q, r)
    }

    pub fn rem(&self, divisor: &DensePoly) -> DensePoly {
        self.divmod(divisor).1
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, other: &DensePoly) -> DensePoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic().1
        }
    }

    /// Extended gcd: returns (g, u, v) with u*self + v*other = g, g monic.
    pub fn extended_gcd(&self, other: &DensePoly) -> (DensePoly, DensePoly, DensePoly) {
        let field = &self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut u0, mut u1) = (DensePoly::one(field), DensePoly::zero(field));
        let (mut v0, mut v1) = (DensePoly::zero(field), DensePoly::one(field));
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1);
            r0 = r1;
            r1 = r;
            let nu = &u0 - &(&q * &u1);
            u0 = u1;
            u1 = nu;
            let nv = &v0 - &(&q * &v1);
            v0 = v1;
            v1 = nv;
        }
        if r0.is_zero() {
            return (r0, u0, v0);
        }
        let (lead, g) = r0.monic();
        let inv = lead.inverse().expect("nonzero leading");
        (g, u0.mul_elem(&inv), v0.mul_elem(&inv))
    }

    /// self^exp mod modulus, exponent a machine integer.
    pub fn pow_mod(&self, exp: u128, modulus: &DensePoly) -> DensePoly {
        let mut result = DensePoly::one(&self.field);
        if exp == 0 {
            return result.rem(modulus);
        }
        let mut base = self.rem(modulus);
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = (&result * &base).rem(modulus);
            }
            e >>= 1;
            if e > 0 {
                base = (&base * &base).rem(modulus);
            }
        }
        result
    }

    /// self^exp mod modulus for exponents beyond u128 (group orders q^d - 1).
    pub fn pow_mod_big(&self, exp: &BigUint, modulus: &DensePoly) -> DensePoly {
        let bits = exp.bits();
        if bits == 0 {
            return DensePoly::one(&self.field).rem(modulus);
        }
        let mut result = self.rem(modulus);
        // Left-to-right square and multiply.
        for i in (0..bits - 1).rev() {
            result = (&result * &result).rem(modulus);
            if exp.bit(i) {
                result = (&result * self).rem(modulus);
            }
        }
        result
    }

    /// Comparison key for deterministic orderings: degree, then the centered
    /// lifts of the coefficients low-to-high (so X - 1 sorts before X + 1).
    pub(crate) fn sort_key(&self) -> (usize, Vec<i64>) {
        let mut key = Vec::with_capacity(self.len() * self.field.kw());
        for i in 0..self.len() {
            key.extend(self.field.centered_key(self.slot(i)));
        }
        (self.len(), key)
    }

    /// Coefficient-index form, e.g. `1,0,1`; the zero polynomial is `0`.
    pub fn coeff_string(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        (0..self.len())
            .map(|i| self.coeff(i).index().to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl PartialEq for DensePoly {
    fn eq(&self, other: &Self) -> bool {
        self.field.same(&other.field) && self.w == other.w
    }
}
impl Eq for DensePoly {}

impl fmt::Display for DensePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.coeff_string())
    }
}

impl std::ops::Add for &DensePoly {
    type Output = DensePoly;
    fn add(self, rhs: &DensePoly) -> DensePoly {
        assert!(self.field.same(&rhs.field), "polynomials over different fields");
        let k = self.field.kw();
        let n = self.len().max(rhs.len());
        let mut w = vec![0; n * k];
        let zero = vec![0u64; k];
        for i in 0..n {
            let a = if i < self.len() { self.slot(i) } else { &zero };
            let b = if i < rhs.len() { rhs.slot(i) } else { &zero };
            self.field.w_add(a, b, &mut w[i * k..(i + 1) * k]);
        }
        let mut p = DensePoly { field: self.field.clone(), w };
        p.trim();
        p
    }
}

impl std::ops::Sub for &DensePoly {
    type Output = DensePoly;
    fn sub(self, rhs: &DensePoly) -> DensePoly {
        assert!(self.field.same(&rhs.field), "polynomials over different fields");
        let k = self.field.kw();
        let n = self.len().max(rhs.len());
        let mut w = vec![0; n * k];
        let zero = vec![0u64; k];
        for i in 0..n {
            let a = if i < self.len() { self.slot(i) } else { &zero };
            let b = if i < rhs.len() { rhs.slot(i) } else { &zero };
            self.field.w_sub(a, b, &mut w[i * k..(i + 1) * k]);
        }
        let mut p = DensePoly { field: self.field.clone(), w };
        p.trim();
        p
    }
}

impl std::ops::Neg for &DensePoly {
    type Output = DensePoly;
    fn neg(self) -> DensePoly {
        let k = self.field.kw();
        let mut w = vec![0; self.w.len()];
        for i in 0..self.len() {
            self.field.w_neg(self.slot(i), &mut w[i * k..(i + 1) * k]);
        }
        DensePoly { field: self.field.clone(), w }
    }
}

impl std::ops::Mul for &DensePoly {
    type Output = DensePoly;
    fn mul(self, rhs: &DensePoly) -> DensePoly {
        assert!(self.field.same(&rhs.field), "polynomials over different fields");
        if self.is_zero() || rhs.is_zero() {
            return DensePoly::zero(&self.field);
        }
        let field = &self.field;
        let k = field.kw();
        let (na, nb) = (self.len(), rhs.len());
        let mut w = vec![0u64; (na + nb - 1) * k];
        if field.k() == 1 {
            // Accumulate raw products and reduce lazily. Each output slot
            // gains at most one (p-1)^2 product per outer iteration, so a
            // full sweep every budget-1 rows keeps every slot below u64::MAX.
            let p = field.p();
            let sweep_every = (field.acc_budget().saturating_sub(1)).max(1) as usize;
            for (i, &a) in self.w.iter().enumerate() {
                if a != 0 {
                    for (j, &b) in rhs.w.iter().enumerate() {
                        w[i + j] += a * b;
                    }
                }
                if (i + 1) % sweep_every == 0 {
                    for slot in w.iter_mut() {
                        *slot %= p;
                    }
                }
            }
            for slot in w.iter_mut() {
                *slot %= p;
            }
        } else {
            let mut scratch = vec![0u64; 2 * k - 1];
            let mut prod = vec![0u64; k];
            for i in 0..na {
                if field.w_is_zero(self.slot(i)) {
                    continue;
                }
                for j in 0..nb {
                    if field.w_is_zero(rhs.slot(j)) {
                        continue;
                    }
                    field.w_mul(self.slot(i), rhs.slot(j), &mut prod, &mut scratch);
                    let at = (i + j) * k;
                    field.w_add_assign(&mut w[at..at + k], &prod);
                }
            }
        }
        let mut p = DensePoly { field: field.clone(), w };
        p.trim();
        p
    }
}
