//! Exact counting and enumeration of the exponent-vector families that
//! certify order lower bounds.
//!
//! A family is parametrized by (D, s, t, m): integer vectors u of length D
//! whose first m coordinates vanish, whose positive entries sum to at most
//! s, and whose negative entries sum in absolute value to at most t. The
//! count has the closed form sum_i C(R,i) C(s,i) C(R-i+t,t) with R = D - m,
//! under the convention C(n,k) = 0 for k > n.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::pgl2::{CaseKind, CaseTag};

/// C(n, k) with C(n, k) = 0 whenever k > n.
pub fn binom(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    num_integer::binomial(BigUint::from(n), BigUint::from(k))
}

/// Parameters (D, s, t, m) of an exponent-vector family; m < D.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilyParams {
    pub d: u64,
    pub s: u64,
    pub t: u64,
    pub m: u64,
}

impl FamilyParams {
    pub fn new(d: u64, s: u64, t: u64, m: u64) -> Result<FamilyParams> {
        if d == 0 || m >= d {
            return Err(Error::PreconditionFailed(format!(
                "family parameters need 0 <= m < D, got D={d}, m={m}"
            )));
        }
        Ok(FamilyParams { d, s, t, m })
    }
}

/// Exact cardinality of the family.
pub fn count_vectors(p: &FamilyParams) -> BigUint {
    let r = p.d - p.m;
    let mut total = BigUint::zero();
    for i in 0..=r {
        let term = binom(r, i) * binom(p.s, i) * binom(r - i + p.t, p.t);
        total += term;
    }
    total
}

/// Visits every member in lexicographic order (coordinates compared as
/// integers, first coordinate most significant). Errors before visiting
/// anything if the family is larger than the enumeration cap.
pub fn for_each_vector(
    p: &FamilyParams,
    caps: &Caps,
    mut f: impl FnMut(&[i64]),
) -> Result<()> {
    let count = count_vectors(p);
    if count > BigUint::from(caps.enumeration) {
        return Err(Error::EnumerationCap { count: count.to_string(), cap: caps.enumeration });
    }
    let mut vec: Vec<i64> = Vec::with_capacity(p.d as usize);
    descend(p, &mut vec, p.s as i64, p.t as i64, &mut f);
    Ok(())
}

fn descend(
    p: &FamilyParams,
    vec: &mut Vec<i64>,
    s_rem: i64,
    t_rem: i64,
    f: &mut impl FnMut(&[i64]),
) {
    let j = vec.len() as u64;
    if j == p.d {
        f(vec);
        return;
    }
    if j < p.m {
        vec.push(0);
        descend(p, vec, s_rem, t_rem, f);
        vec.pop();
        return;
    }
    for v in -t_rem..=s_rem {
        vec.push(v);
        let (s_next, t_next) = if v >= 0 { (s_rem - v, t_rem) } else { (s_rem, t_rem + v) };
        descend(p, vec, s_next, t_next, f);
        vec.pop();
    }
}

/// The family as a vector of vectors, lexicographically ordered.
pub fn enumerate_vectors(p: &FamilyParams, caps: &Caps) -> Result<Vec<Vec<i64>>> {
    let mut out = Vec::new();
    for_each_vector(p, caps, |u| out.push(u.to_vec()))?;
    Ok(out)
}

/// Binomial lower bound for the symmetric family (s = t):
/// floor(avg(C(floor(R/2)+t, R), C(ceil(R/2)+t, R)) * C(2R, R)), R = D - m.
/// Requires t >= R/2.
pub fn binom_floor(d: u64, t: u64, m: u64) -> Result<BigUint> {
    if m >= d {
        return Err(Error::PreconditionFailed(format!(
            "family parameters need 0 <= m < D, got D={d}, m={m}"
        )));
    }
    let r = d - m;
    if 2 * t < r {
        return Err(Error::PreconditionFailed(format!(
            "binomial floor requires t >= (D-m)/2, got t={t}, D-m={r}"
        )));
    }
    let lo = binom(r / 2 + t, r);
    let hi = binom(r.div_ceil(2) + t, r);
    Ok((lo + hi) * binom(2 * r, r) / BigUint::from(2u32))
}

/// The case-driven certified parameters, with the boundary decrement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CertifiedParams {
    pub params: FamilyParams,
    /// True when s = t = floor(Dr/den) landed exactly on the strict budget
    /// (s + t < Dr or Dr/2) and t was decremented by one to compensate.
    pub boundary: bool,
}

/// Selects the maximal certified (s, t, m) for a classified matrix:
/// triangular uses s = t = floor(Dr/2) with m = 0 against the budget
/// s + t < Dr; independent and dependent rows use s = t = floor(Dr/4)
/// against s + t < Dr/2, with m = 0 (independent) or m = gcd(g, D)
/// (dependent). When the doubled floor hits the budget exactly, t drops
/// by one and the boundary flag is set.
///
/// Diagonal matrices get the empty family (count 1): the exponent-product
/// map provably collapses for them (see the case docs), so no family-size
/// certificate exists and only the trivial bound is certified.
pub fn certified_params(case: &CaseTag, r: u32) -> CertifiedParams {
    let d = case.d as u64;
    let dr = d * r as u64;
    let (den, m) = match &case.kind {
        CaseKind::Triangular => (2u64, 0u64),
        CaseKind::Diagonal => {
            return CertifiedParams { params: FamilyParams { d, s: 0, t: 0, m: 0 }, boundary: false };
        }
        CaseKind::IndependentRows => (4, 0),
        CaseKind::Dependent { m_choice, .. } => (4, *m_choice as u64),
    };
    let s = dr / den;
    let mut t = s;
    let exact = dr > 0 && dr.is_multiple_of(den) && t > 0;
    if exact {
        t -= 1;
    }
    CertifiedParams {
        params: FamilyParams { d, s, t, m },
        boundary: exact,
    }
}
