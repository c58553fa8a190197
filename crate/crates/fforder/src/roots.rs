//! Generic roots of the driving polynomial and certified order bounds.
//!
//! A generic root is a root θ of the degree-(q^r + 1) driving polynomial
//! whose minimal polynomial over F_q has the full degree D*r. Powers of θ
//! shaped like Λ(u) = ∏ θ^(u_j q^(jr)) are pairwise distinct when the
//! exponent family stays inside the case budget, so the subgroup generated
//! by θ (or any shift θ+α) has at least that many elements — an exact,
//! machine-checkable order bound.

use std::collections::BTreeSet;

use num_bigint::BigUint;

use crate::action::{self, DegreeCensus};
use crate::caps::Caps;
use crate::counting::{certified_params, count_vectors, for_each_vector, CertifiedParams, FamilyParams};
use crate::error::{Error, Result};
use crate::extension::{ExtElement, ExtField, ExtRef};
use crate::factor;
use crate::field::FieldElement;
use crate::pgl2::{classify, CaseTag, Mat2};

/// A generic root θ living in F_q[X]/(f) for a degree-D*r irreducible
/// factor f of the driving polynomial of (A, r).
#[derive(Debug, Clone)]
pub struct GenericRoot {
    pub ext: ExtRef,
    pub theta: ExtElement,
    pub matrix: Mat2,
    pub r: u32,
    pub case: CaseTag,
}

/// Outcome of factoring the driving polynomial: the degree census plus
/// the generic root when a full-degree factor exists.
#[derive(Debug, Clone)]
pub struct RootSearch {
    pub census: DegreeCensus,
    pub root: Option<GenericRoot>,
}

/// Factors the driving polynomial of (A, r) and picks the first
/// degree-D*r irreducible factor in the deterministic factor order; the
/// theorem holds for any generic root, so first-in-order keeps runs
/// reproducible. None when no factor reaches the full degree (possible at
/// small q and r, where the census has no room for one).
pub fn find_generic_root(a: &Mat2, r: u32, caps: &Caps, seed: u64) -> Result<RootSearch> {
    let case = classify(a)?;
    let f = action::frobenius_poly(a, r, caps)?;
    let factors = factor::factor_poly_seeded(&f, seed)?;
    let degree_list: Vec<(usize, u32)> = factors
        .iter()
        .map(|(g, mult)| (g.degree().expect("nonzero factor"), *mult))
        .collect();
    let census = action::census_from_degrees(&degree_list, case.d, a.field().q(), r)?;

    let dr = (case.d as usize) * (r as usize);
    let chosen = if dr == 0 { None } else { factors.into_iter().find(|(g, _)| g.degree() == Some(dr)) };
    let root = match chosen {
        None => None,
        Some((g, _)) => {
            let ext = ExtField::new(&g)?;
            // The group order must be representable before any order work.
            ext.group_order(caps)?;
            let theta = ext.theta();
            Some(GenericRoot { ext, theta, matrix: a.clone(), r, case: case.clone() })
        }
    };
    Ok(RootSearch { census, root })
}

/// Precomputed Frobenius power ladder for one nonzero element x: the
/// entries x^(q^(jr)) for 0 <= j < D and their inverses, so that product
/// evaluations need only small positive powers.
pub struct PowerBasis {
    powers: Vec<ExtElement>,
    inverses: Vec<ExtElement>,
}

impl PowerBasis {
    pub fn new(x: &ExtElement, r: u32, d: usize) -> Result<PowerBasis> {
        if x.is_zero() {
            return Err(Error::ZeroElement);
        }
        let q = x.ext().base().q();
        let step = BigUint::from(q).pow(r);
        let mut powers = Vec::with_capacity(d);
        let mut inverses = Vec::with_capacity(d);
        let mut cur = x.clone();
        for _ in 0..d {
            inverses.push(cur.inverse()?);
            powers.push(cur.clone());
            cur = cur.pow_big(&step);
        }
        Ok(PowerBasis { powers, inverses })
    }

    /// ∏_j (x^(q^(jr)))^(u_j); the empty exponent vector gives 1.
    pub fn eval(&self, u: &[i64]) -> Result<ExtElement> {
        if u.len() != self.powers.len() {
            return Err(Error::LengthMismatch { got: u.len(), expected: self.powers.len() });
        }
        let mut acc = self.powers[0].ext().one();
        for (j, &uj) in u.iter().enumerate() {
            if uj > 0 {
                acc = &acc * &self.powers[j].pow(uj as u128);
            } else if uj < 0 {
                acc = &acc * &self.inverses[j].pow(uj.unsigned_abs() as u128);
            }
        }
        Ok(acc)
    }
}

/// Λ evaluated at one exponent vector for the root itself.
pub fn lambda_eval(root: &GenericRoot, u: &[i64]) -> Result<ExtElement> {
    PowerBasis::new(&root.theta, root.r, root.case.d as usize)?.eval(u)
}

/// Evaluates Λ on every member of the family and reports whether the
/// values are pairwise distinct. Callers may pass parameters outside the
/// case budget on purpose to watch injectivity fail.
pub fn verify_lambda_injective(
    x: &ExtElement,
    r: u32,
    params: &FamilyParams,
    caps: &Caps,
) -> Result<bool> {
    let basis = PowerBasis::new(x, r, params.d as usize)?;
    let mut seen: BTreeSet<Vec<u128>> = BTreeSet::new();
    let mut injective = true;
    for_each_vector(params, caps, |u| {
        if injective {
            let value = basis.eval(u).expect("enumerator emits length-D vectors");
            injective = seen.insert(value.canonical_key());
        }
    })?;
    Ok(injective)
}

/// The exact certified lower bound on ord(θ+α) for the class of A: the
/// size of the maximal admissible exponent family for A's case.
pub fn certified_order_bound(a: &Mat2, r: u32) -> Result<(BigUint, CertifiedParams)> {
    let case = classify(a)?;
    let cert = certified_params(&case, r);
    Ok((count_vectors(&cert.params), cert))
}

/// Exact multiplicative order of θ+α in the root's field.
pub fn order_of_shift(root: &GenericRoot, alpha: &FieldElement, caps: &Caps) -> Result<BigUint> {
    let shifted = &root.theta + &root.ext.embed(alpha);
    Ok(BigUint::from(shifted.order(caps)?))
}
