//! The projective matrix action on polynomials and extension elements, the
//! driving polynomial b X^{q^r+1} - a X^{q^r} + d X - c, and the census of
//! its irreducible factor degrees.

use std::collections::BTreeMap;

use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::extension::ExtElement;
use crate::factor;
use crate::field::FieldElement;
use crate::pgl2::{pgl_order, Mat2};
use crate::poly::DensePoly;

/// The polynomial whose degree-Dr irreducible factors carry the
/// high-order roots: b X^{q^r+1} - a X^{q^r} + d X - c. For r = 0 the two
/// exponent pairs collide and it collapses to b X^2 + (d - a) X - c. The
/// degree is q^r + 1 when b != 0 and q^r otherwise.
pub fn frobenius_poly(a: &Mat2, r: u32, caps: &Caps) -> Result<DensePoly> {
    let field = a.field().clone();
    let q = field.q();
    let qr = q
        .checked_pow(r)
        .filter(|&d| d < caps.degree as u128)
        .ok_or_else(|| Error::DegreeCap {
            degree: q.checked_pow(r).map_or(u128::MAX, |d| d + 1),
            cap: caps.degree,
        })?;
    let qr = qr as usize;
    let mut terms: Vec<(usize, FieldElement)> = vec![
        (0, -&a.c),
        (1, a.d.clone()),
        (qr, -&a.a),
        (qr + 1, a.b.clone()),
    ];
    if r == 0 {
        terms = vec![(0, -&a.c), (1, &a.d - &a.a), (2, a.b.clone())];
    }
    Ok(DensePoly::from_sparse(&field, &terms))
}

/// The action on monic irreducible polynomials of degree n >= 2: the monic
/// normalization of sum_i f_i (aX + c)^i (bX + d)^{n-i}. Degree is
/// preserved; composition satisfies act(A, act(B, f)) = act(A*B, f).
pub fn act_on_poly(a: &Mat2, f: &DensePoly) -> Result<DensePoly> {
    let n = f.degree().ok_or(Error::ZeroPolynomial)?;
    if n < 2 {
        return Err(Error::DegreeTooSmall(n));
    }
    if !f.is_monic() || !factor::is_irreducible(f)? {
        return Err(Error::NotIrreducible);
    }
    let field = f.field().clone();
    assert!(a.field().same(&field), "matrix over a different field");
    let u = DensePoly::from_elements(&field, &[a.c.clone(), a.a.clone()]); // aX + c
    let v = DensePoly::from_elements(&field, &[a.d.clone(), a.b.clone()]); // bX + d
    // Power tables for u^i and v^i, i = 0..=n.
    let mut u_pows = Vec::with_capacity(n + 1);
    let mut v_pows = Vec::with_capacity(n + 1);
    u_pows.push(DensePoly::one(&field));
    v_pows.push(DensePoly::one(&field));
    for i in 1..=n {
        u_pows.push(&u_pows[i - 1] * &u);
        v_pows.push(&v_pows[i - 1] * &v);
    }
    let mut acc = DensePoly::zero(&field);
    for i in 0..=n {
        let fi = f.coeff(i);
        if fi.is_zero() {
            continue;
        }
        acc = &acc + &(&u_pows[i] * &v_pows[n - i]).mul_elem(&fi);
    }
    if acc.degree() != Some(n) {
        // Cannot happen for irreducible inputs of degree >= 2; kept total
        // for safety.
        return Err(Error::StructureViolation {
            degree: acc.degree().unwrap_or(0),
            menu: vec![n],
        });
    }
    Ok(acc.monic().1)
}

/// The action on extension elements: theta -> (d theta - c) / (-b theta + a).
/// The input must lie outside the base field (the denominator can only
/// vanish for base-field values).
pub fn act_on_element(a: &Mat2, theta: &ExtElement) -> Result<ExtElement> {
    if theta.in_base_field() {
        return Err(Error::BaseFieldElement);
    }
    let ext = theta.ext().clone();
    assert!(a.field().same(ext.base()), "matrix over a different base field");
    let num = &(&ext.embed(&a.d) * theta) - &ext.embed(&a.c);
    let den = &ext.embed(&a.a) - &(&ext.embed(&a.b) * theta);
    let den_inv = den
        .inverse()
        .expect("denominator vanishes only at base-field points");
    Ok(&num * &den_inv)
}

/// True when f is fixed by the action of [A].
pub fn is_invariant(a: &Mat2, f: &DensePoly) -> Result<bool> {
    Ok(act_on_poly(a, f)? == *f)
}

/// Factor-degree census of the driving polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeCensus {
    /// Count of distinct monic irreducible factors per degree.
    pub degrees: BTreeMap<usize, u32>,
    /// Sum of multiplicities per degree (repeats occur only at degree 1).
    pub multiplicities: BTreeMap<usize, u32>,
    /// Number of distinct factors of degree D*r.
    pub n_dr: u32,
    pub q: u128,
    pub r: u32,
    pub d: u128,
}

impl Serialize for DegreeCensus {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("DegreeCensus", 5)?;
        s.serialize_field("degrees", &self.degrees)?;
        s.serialize_field("N_Dr", &self.n_dr)?;
        s.serialize_field("q", &self.q)?;
        s.serialize_field("r", &self.r)?;
        s.serialize_field("D", &self.d)?;
        s.end()
    }
}

/// Factors the driving polynomial for (A, r) and checks the degree menu:
/// every factor degree is 1, 2, or D*k with k | r and gcd(r/k, D) = 1, and
/// only linear factors repeat. Splitting within a degree is not needed for
/// the census, so this runs on distinct-degree decomposition alone.
pub fn factor_census(a: &Mat2, r: u32, caps: &Caps) -> Result<DegreeCensus> {
    let d = pgl_order(a)?;
    let f = frobenius_poly(a, r, caps)?;
    let q = a.field().q();
    let degree_list = factor::factor_degrees(&f)?;
    let census = census_from_degrees(&degree_list, d, q, r)?;
    debug_assert_eq!(
        Some(census.multiplicities.iter().map(|(deg, m)| deg * *m as usize).sum()),
        f.degree(),
        "census must cover the whole polynomial"
    );
    Ok(census)
}

/// Builds the census from a per-factor (degree, multiplicity) list,
/// enforcing the structural menu: degrees 1 and 2 plus D*k for the
/// divisors k of r with gcd(r/k, D) = 1, and no repeated factor of
/// degree above one.
pub(crate) fn census_from_degrees(
    degree_list: &[(usize, u32)],
    d: u128,
    q: u128,
    r: u32,
) -> Result<DegreeCensus> {
    let mut menu: Vec<usize> = vec![1, 2];
    if r > 0 {
        for k in 1..=r {
            if r.is_multiple_of(k) && crate::integer::gcd((r / k) as u128, d) == 1 {
                menu.push((d as usize) * (k as usize));
            }
        }
    }
    menu.sort_unstable();
    menu.dedup();

    let mut degrees: BTreeMap<usize, u32> = BTreeMap::new();
    let mut multiplicities: BTreeMap<usize, u32> = BTreeMap::new();
    for &(deg, mult) in degree_list {
        if !menu.contains(&deg) || (deg > 1 && mult > 1) {
            return Err(Error::StructureViolation { degree: deg, menu });
        }
        *degrees.entry(deg).or_insert(0) += 1;
        *multiplicities.entry(deg).or_insert(0) += mult;
    }
    let n_dr = degrees.get(&((d as usize) * (r as usize))).copied().unwrap_or(0);
    Ok(DegreeCensus { degrees, multiplicities, n_dr, q, r, d })
}
