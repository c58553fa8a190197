//! Finite fields F_q, q = p^k, with elements stored as coefficient vectors
//! over the prime field.
//!
//! A [`Field`] is shared behind an `Arc` and every element carries its field,
//! so arithmetic can check that both operands live in the same structure
//! (mixing fields is a programming error and panics). For k >= 2 the field is
//! F_p[X]/(modulus) with the canonical modulus found by [`Field::new`]: the
//! monic irreducible polynomial of degree k whose coefficient string
//! `c0,c1,...` is lexicographically smallest.
//!
//! Elements also have a compact integer encoding used by every textual
//! format: index = c0 + c1 p + ... + c_{k-1} p^{k-1}.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::integer;

pub type FieldRef = Arc<Field>;

#[derive(Debug)]
pub struct Field {
    p: u64,
    k: u32,
    q: u128,
    /// Monic modulus over F_p, k+1 words low-to-high; `None` for k = 1.
    modulus: Option<Vec<u64>>,
    /// How many raw products fit in a u64 accumulator before reduction.
    acc_budget: u64,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}
impl Eq for Field {}

impl Field {
    /// The prime field F_p.
    pub fn prime(p: u64) -> Result<FieldRef> {
        Field::build(p, 1, None)
    }

    /// F_{p^k} with the canonical (lexicographically smallest) modulus.
    pub fn new(p: u64, k: u32) -> Result<FieldRef> {
        if k == 0 {
            return Err(Error::PreconditionFailed("extension degree must be positive".into()));
        }
        if k == 1 {
            return Field::prime(p);
        }
        let base = Field::prime(p)?;
        // Scan coefficient tuples (c0, ..., c_{k-1}) in lexicographic order
        // with c0 most significant, matching the textual coefficient format.
        let total = checked_pow(p as u128, k).ok_or(Error::CardinalityOverflow { p, k })?;
        for v in 0..total {
            let mut coeffs = vec![0u64; k as usize + 1];
            let mut rest = v;
            for i in (0..k as usize).rev() {
                // c0 varies slowest: peel digits from the most significant end.
                coeffs[k as usize - 1 - i] = (rest / (p as u128).pow(i as u32)) as u64 % p;
                rest %= (p as u128).pow(i as u32);
            }
            coeffs[k as usize] = 1;
            let candidate = crate::poly::DensePoly::from_index_coeffs(
                &base,
                &coeffs.iter().map(|&c| c as u128).collect::<Vec<_>>(),
            )
            .expect("digits are reduced");
            if crate::factor::is_irreducible(&candidate).expect("nonzero candidate") {
                return Field::build(p, k, Some(coeffs));
            }
        }
        unreachable!("irreducible polynomials of every degree exist over F_p")
    }

    /// Internal constructor; the modulus is trusted to be monic irreducible.
    pub(crate) fn build(p: u64, k: u32, modulus: Option<Vec<u64>>) -> Result<FieldRef> {
        if !integer::is_prime(p as u128) {
            return Err(Error::NonPrime(p as u128));
        }
        if p >= 1 << 31 {
            return Err(Error::PreconditionFailed(format!(
                "prime modulus {p} too wide for the coefficient kernels"
            )));
        }
        let q = checked_pow(p as u128, k).ok_or(Error::CardinalityOverflow { p, k })?;
        debug_assert!(k == 1 || modulus.as_ref().is_some_and(|m| m.len() == k as usize + 1));
        // p >= 2 is guaranteed above, so step >= 1 and the quotient fits.
        let step = (p - 1) as u128 * (p - 1) as u128;
        let acc_budget = (u64::MAX as u128 / step) as u64;
        Ok(Arc::new(Field { p, k, q, modulus, acc_budget }))
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn k(&self) -> u32 {
        self.k
    }
    /// Field cardinality q = p^k.
    pub fn q(&self) -> u128 {
        self.q
    }
    pub(crate) fn kw(&self) -> usize {
        self.k as usize
    }
    pub(crate) fn acc_budget(&self) -> u64 {
        self.acc_budget
    }

    /// The modulus as element coefficients, if this is a proper extension.
    pub fn modulus_coeffs(&self) -> Option<&[u64]> {
        self.modulus.as_deref()
    }

    pub fn same(self: &FieldRef, other: &FieldRef) -> bool {
        Arc::ptr_eq(self, other) || **self == **other
    }

    pub fn zero(self: &FieldRef) -> FieldElement {
        FieldElement { field: self.clone(), w: vec![0; self.kw()] }
    }

    pub fn one(self: &FieldRef) -> FieldElement {
        self.int(1)
    }

    /// The constant n mod p (prime-subfield element).
    pub fn int(self: &FieldRef, n: i64) -> FieldElement {
        let p = self.p as i64;
        let c = n.rem_euclid(p) as u64;
        let mut w = vec![0; self.kw()];
        w[0] = c;
        FieldElement { field: self.clone(), w }
    }

    /// Element with the given integer encoding (base-p digits, c0 least
    /// significant); errors if the index is out of range.
    pub fn elem(self: &FieldRef, index: u128) -> Result<FieldElement> {
        if index >= self.q {
            return Err(Error::parse("field element", index.to_string()));
        }
        let mut w = vec![0u64; self.kw()];
        let mut rest = index;
        for slot in w.iter_mut() {
            *slot = (rest % self.p as u128) as u64;
            rest /= self.p as u128;
        }
        Ok(FieldElement { field: self.clone(), w })
    }

    pub(crate) fn from_words(self: &FieldRef, w: Vec<u64>) -> FieldElement {
        debug_assert_eq!(w.len(), self.kw());
        debug_assert!(w.iter().all(|&c| c < self.p));
        FieldElement { field: self.clone(), w }
    }

    /// All q elements in index order.
    pub fn elements(self: &FieldRef) -> impl Iterator<Item = FieldElement> {
        let f = self.clone();
        (0..self.q).map(move |i| f.elem(i).expect("index in range"))
    }

    pub fn parse_element(self: &FieldRef, s: &str) -> Result<FieldElement> {
        let index: u128 = s
            .trim()
            .parse()
            .map_err(|_| Error::parse("field element", s))?;
        self.elem(index)
    }

    /// Parses "p" or "p^k".
    pub fn parse_spec(spec: &str) -> Result<FieldRef> {
        let spec = spec.trim();
        let (p, k) = match spec.split_once('^') {
            Some((p, k)) => (
                p.trim().parse().map_err(|_| Error::parse("field spec", spec))?,
                k.trim().parse().map_err(|_| Error::parse("field spec", spec))?,
            ),
            None => (spec.parse().map_err(|_| Error::parse("field spec", spec))?, 1),
        };
        Field::new(p, k)
    }

    // ---- word kernels -----------------------------------------------------
    //
    // Elements are fixed-stride slices of k words, each reduced mod p. The
    // polynomial layer runs on these to avoid per-coefficient allocation.

    pub(crate) fn w_is_zero(&self, a: &[u64]) -> bool {
        a.iter().all(|&c| c == 0)
    }

    pub(crate) fn w_add(&self, a: &[u64], b: &[u64], out: &mut [u64]) {
        for i in 0..self.kw() {
            let s = a[i] + b[i];
            out[i] = if s >= self.p { s - self.p } else { s };
        }
    }

    pub(crate) fn w_sub(&self, a: &[u64], b: &[u64], out: &mut [u64]) {
        for i in 0..self.kw() {
            out[i] = if a[i] >= b[i] { a[i] - b[i] } else { a[i] + self.p - b[i] };
        }
    }

    pub(crate) fn w_add_assign(&self, target: &mut [u64], b: &[u64]) {
        for i in 0..self.kw() {
            let s = target[i] + b[i];
            target[i] = if s >= self.p { s - self.p } else { s };
        }
    }

    pub(crate) fn w_sub_assign(&self, target: &mut [u64], b: &[u64]) {
        for i in 0..self.kw() {
            target[i] = if target[i] >= b[i] {
                target[i] - b[i]
            } else {
                target[i] + self.p - b[i]
            };
        }
    }

    pub(crate) fn w_neg(&self, a: &[u64], out: &mut [u64]) {
        for i in 0..self.kw() {
            out[i] = if a[i] == 0 { 0 } else { self.p - a[i] };
        }
    }

    /// out = a * b. `scratch` must hold 2k-1 words.
    pub(crate) fn w_mul(&self, a: &[u64], b: &[u64], out: &mut [u64], scratch: &mut [u64]) {
        if self.k == 1 {
            out[0] = a[0] * b[0] % self.p;
            return;
        }
        let k = self.kw();
        scratch[..2 * k - 1].fill(0);
        for i in 0..k {
            if a[i] == 0 {
                continue;
            }
            for j in 0..k {
                scratch[i + j] = (scratch[i + j] + a[i] * b[j]) % self.p;
            }
        }
        self.w_reduce(scratch, out);
    }

    /// Reduces a 2k-1 word product by the modulus into k words.
    fn w_reduce(&self, scratch: &mut [u64], out: &mut [u64]) {
        let k = self.kw();
        let m = self.modulus.as_ref().expect("k >= 2 has a modulus");
        for i in (k..2 * k - 1).rev() {
            let c = scratch[i];
            if c == 0 {
                continue;
            }
            scratch[i] = 0;
            let shift = i - k;
            for j in 0..k {
                if m[j] == 0 {
                    continue;
                }
                let sub = c * m[j] % self.p;
                let t = scratch[shift + j];
                scratch[shift + j] = if t >= sub { t - sub } else { t + self.p - sub };
            }
        }
        out.copy_from_slice(&scratch[..k]);
    }

    /// Centered lift of each base-p digit, the comparison key for the
    /// documented deterministic orderings (so X - 1 sorts before X + 1).
    pub(crate) fn centered_key(&self, w: &[u64]) -> Vec<i64> {
        w.iter()
            .map(|&c| {
                if c as u128 * 2 > self.p as u128 {
                    c as i64 - self.p as i64
                } else {
                    c as i64
                }
            })
            .collect()
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 1 {
            write!(f, "F_{}", self.p)
        } else {
            write!(f, "F_{}^{}", self.p, self.k)
        }
    }
}

fn checked_pow(base: u128, exp: u32) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

/// An element of a [`Field`]: k coefficients over F_p, always reduced.
#[derive(Debug, Clone)]
pub struct FieldElement {
    field: FieldRef,
    w: Vec<u64>,
}

impl FieldElement {
    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.w
    }

    pub fn is_zero(&self) -> bool {
        self.field.w_is_zero(&self.w)
    }

    pub fn is_one(&self) -> bool {
        self.w[0] == 1 && self.w[1..].iter().all(|&c| c == 0)
    }

    /// True when the element lies in the prime subfield F_p.
    pub fn in_prime_subfield(&self) -> bool {
        self.w[1..].iter().all(|&c| c == 0)
    }

    /// Integer encoding: c0 + c1 p + ... + c_{k-1} p^{k-1}.
    pub fn index(&self) -> u128 {
        let p = self.field.p as u128;
        self.w.iter().rev().fold(0u128, |acc, &c| acc * p + c as u128)
    }

    pub fn pow(&self, mut e: u128) -> FieldElement {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; errors on zero.
    pub fn inverse(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::ZeroElement);
        }
        if self.field.k == 1 {
            let inv = integer::inv_mod(self.w[0] as u128, self.field.p as u128)
                .expect("nonzero element of a prime field");
            return Ok(self.field.from_words(vec![inv as u64]));
        }
        // x^(q-2) = x^-1 for x != 0; q fits in u128 by construction.
        Ok(self.pow(self.field.q - 2))
    }

    /// The p-th root (inverse Frobenius), which always exists and is unique.
    pub fn pth_root(&self) -> FieldElement {
        // x -> x^p is a bijection with inverse x -> x^(p^(k-1)) = x^(q/p).
        self.pow(self.field.q / self.field.p as u128)
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field.same(&other.field) && self.w == other.w
    }
}
impl Eq for FieldElement {}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

macro_rules! check_same_field {
    ($a:expr, $b:expr) => {
        assert!(
            $a.field.same(&$b.field),
            "elements of different fields: {} vs {}",
            $a.field,
            $b.field
        );
    };
}

impl std::ops::Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        check_same_field!(self, rhs);
        let mut w = vec![0; self.field.kw()];
        self.field.w_add(&self.w, &rhs.w, &mut w);
        FieldElement { field: self.field.clone(), w }
    }
}

impl std::ops::Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        check_same_field!(self, rhs);
        let mut w = vec![0; self.field.kw()];
        self.field.w_sub(&self.w, &rhs.w, &mut w);
        FieldElement { field: self.field.clone(), w }
    }
}

impl std::ops::Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        check_same_field!(self, rhs);
        let k = self.field.kw();
        let mut w = vec![0; k];
        let mut scratch = vec![0; 2 * k - 1];
        self.field.w_mul(&self.w, &rhs.w, &mut w, &mut scratch);
        FieldElement { field: self.field.clone(), w }
    }
}

impl std::ops::Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        let mut w = vec![0; self.field.kw()];
        self.field.w_neg(&self.w, &mut w);
        FieldElement { field: self.field.clone(), w }
    }
}

/// A field homomorphism F_{p^k} -> F_{p^m} (k | m), determined by where the
/// canonical generator goes. Built by [`crate::factor::embedding`].
#[derive(Debug, Clone)]
pub struct FieldEmbedding {
    pub(crate) from: FieldRef,
    pub(crate) to: FieldRef,
    /// Image of the class of X (ignored when the source is a prime field).
    pub(crate) gen_image: FieldElement,
}

impl FieldEmbedding {
    pub fn from_field(&self) -> &FieldRef {
        &self.from
    }
    pub fn to_field(&self) -> &FieldRef {
        &self.to
    }

    pub fn apply(&self, x: &FieldElement) -> FieldElement {
        assert!(x.field().same(&self.from), "element not in the embedding source");
        // Evaluate the coefficient vector at the generator image.
        let mut acc = self.to.zero();
        for &c in x.words().iter().rev() {
            acc = &(&acc * &self.gen_image) + &self.to.int(c as i64);
        }
        acc
    }
}
