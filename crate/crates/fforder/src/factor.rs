//! Polynomial factorization over finite fields.
//!
//! The pipeline is classical: squarefree decomposition (with the p-th-root
//! step for derivative-zero parts), distinct-degree splitting by iterated
//! Frobenius, and seeded equal-degree splitting (quadratic-residue test in
//! odd characteristic, trace map in characteristic 2). All randomness comes
//! from a ChaCha stream with a caller-chosen seed, and factors are returned
//! in a documented deterministic order: sorted by degree, then by the
//! centered lifts of their coefficients low-to-high (so X - 1 < X + 1).

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldEmbedding, FieldRef};
use crate::integer;
use crate::poly::DensePoly;

/// Rabin irreducibility test: f is irreducible over F_q of degree n iff
/// X^{q^n} = X mod f and gcd(X^{q^{n/l}} - X, f) = 1 for every prime l | n.
pub fn is_irreducible(f: &DensePoly) -> Result<bool> {
    let n = f.degree().ok_or(Error::ZeroPolynomial)?;
    if n == 0 {
        return Ok(false);
    }
    if n == 1 {
        return Ok(true);
    }
    let (_, f) = f.monic();
    let field = f.field().clone();
    let q = field.q();
    let x = DensePoly::x(&field);
    let checkpoints: Vec<usize> = integer::factor_u128(n as u128)
        .primes()
        .map(|l| n / l as usize)
        .collect();
    let mut h = x.clone();
    for i in 1..=n {
        h = h.pow_mod(q, &f);
        if checkpoints.contains(&i) && !f.gcd(&(&h - &x)).is_one() {
            return Ok(false);
        }
        if i == n {
            return Ok(h == x.rem(&f));
        }
    }
    unreachable!("loop returns at i = n")
}

/// Factors f into monic irreducibles with multiplicities, deterministic
/// (seed 0). A constant polynomial factors into nothing.
pub fn factor_poly(f: &DensePoly) -> Result<Vec<(DensePoly, u32)>> {
    factor_poly_seeded(f, 0)
}

/// As [`factor_poly`] with an explicit seed for the equal-degree splitter.
/// The factor list is the same for every seed; only internal choices differ.
pub fn factor_poly_seeded(f: &DensePoly, seed: u64) -> Result<Vec<(DensePoly, u32)>> {
    f.degree().ok_or(Error::ZeroPolynomial)?;
    let (_, fm) = f.monic();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (part, mult) in squarefree_parts(&fm) {
        for (d, prod) in distinct_degree_parts(&part) {
            for irr in equal_degree_split(&prod, d, &mut rng) {
                out.push((irr, mult));
            }
        }
    }
    out.sort_by_key(|(a, _)| a.sort_key());
    Ok(out)
}

/// Multiset of irreducible-factor degrees with multiplicities, computed by
/// distinct-degree splitting only (equal-degree parts are counted, not
/// split). Much cheaper than a full factorization for census purposes.
pub fn factor_degrees(f: &DensePoly) -> Result<Vec<(usize, u32)>> {
    f.degree().ok_or(Error::ZeroPolynomial)?;
    let (_, fm) = f.monic();
    let mut out: Vec<(usize, u32)> = Vec::new();
    for (part, mult) in squarefree_parts(&fm) {
        for (d, prod) in distinct_degree_parts(&part) {
            let count = prod.degree().unwrap() / d;
            for _ in 0..count {
                out.push((d, mult));
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Squarefree decomposition of a monic f: pairwise-coprime squarefree monic
/// parts with their multiplicities, product of part^mult = f.
fn squarefree_parts(f: &DensePoly) -> Vec<(DensePoly, u32)> {
    if f.degree() == Some(0) {
        return Vec::new();
    }
    let p = f.field().p() as u32;
    let deriv = f.derivative();
    let mut parts = Vec::new();
    if deriv.is_zero() {
        // Every exponent is divisible by p: f = g(X)^p for g with the
        // p-th roots of f's coefficients.
        let g = pth_root_poly(f);
        for (part, m) in squarefree_parts(&g) {
            parts.push((part, m * p));
        }
        return parts;
    }
    let mut c = f.gcd(&deriv);
    let mut w = f.divmod(&c).0;
    let mut i = 1u32;
    while !w.is_one() {
        let y = w.gcd(&c);
        let z = w.divmod(&y).0;
        if z.degree().is_some_and(|d| d > 0) {
            parts.push((z, i));
        }
        i += 1;
        c = c.divmod(&y).0;
        w = y;
    }
    if !c.is_one() {
        let g = pth_root_poly(&c);
        for (part, m) in squarefree_parts(&g) {
            parts.push((part, m * p));
        }
    }
    parts
}

/// For f whose exponents are all multiples of p, the g with g^p = f.
fn pth_root_poly(f: &DensePoly) -> DensePoly {
    let field = f.field();
    let p = field.p() as usize;
    let n = f.degree().expect("nonzero input");
    debug_assert_eq!(n % p, 0);
    let coeffs: Vec<FieldElement> = (0..=n / p).map(|j| f.coeff(p * j).pth_root()).collect();
    DensePoly::from_elements(field, &coeffs)
}

/// Distinct-degree decomposition of a squarefree monic f: pairs (d, product
/// of all irreducible factors of degree d), in increasing d.
fn distinct_degree_parts(f: &DensePoly) -> Vec<(usize, DensePoly)> {
    let field = f.field().clone();
    let q = field.q();
    let x = DensePoly::x(&field);
    let mut rest = f.clone();
    let mut h = x.clone();
    let mut d = 0usize;
    let mut parts = Vec::new();
    while rest.degree().is_some_and(|deg| deg > 0) {
        d += 1;
        let deg = rest.degree().unwrap();
        if 2 * d > deg {
            // Whatever remains is a single irreducible of full degree.
            parts.push((deg, rest));
            break;
        }
        h = h.pow_mod(q, &rest);
        let g = rest.gcd(&(&h - &x));
        if !g.is_one() {
            parts.push((d, g.clone()));
            rest = rest.divmod(&g).0;
            if rest.degree().is_some_and(|deg| deg > 0) {
                h = h.rem(&rest);
            }
        }
    }
    parts
}

/// Splits a monic squarefree product of degree-d irreducibles into its
/// factors (Cantor–Zassenhaus).
fn equal_degree_split(v: &DensePoly, d: usize, rng: &mut ChaCha8Rng) -> Vec<DensePoly> {
    let n = v.degree().expect("nonzero product");
    if n == d {
        return vec![v.clone()];
    }
    let field = v.field().clone();
    let q = field.q();
    let splitter_exp = if field.p() != 2 {
        Some((BigUint::from(q).pow(d as u32) - BigUint::one()) / BigUint::from(2u32))
    } else {
        None
    };
    loop {
        let a = random_poly_below(&field, n, rng);
        if a.is_zero() {
            continue;
        }
        let g = match &splitter_exp {
            Some(e) => {
                // a^((q^d-1)/2) is +-1 on each factor; subtracting 1 kills
                // about half of them.
                let b = &a.pow_mod_big(e, v) - &DensePoly::one(&field);
                v.gcd(&b)
            }
            None => {
                // Characteristic 2: additive trace from F_{q^d} down to F_2.
                let k = field.k() as usize;
                let mut t = a.rem(v);
                let mut cur = t.clone();
                for _ in 1..k * d {
                    cur = (&cur * &cur).rem(v);
                    t = &t + &cur;
                }
                v.gcd(&t)
            }
        };
        if g.is_one() || g.degree() == v.degree() {
            continue;
        }
        let other = v.divmod(&g).0;
        let mut out = equal_degree_split(&g, d, rng);
        out.extend(equal_degree_split(&other, d, rng));
        return out;
    }
}

fn random_poly_below(field: &FieldRef, n: usize, rng: &mut ChaCha8Rng) -> DensePoly {
    let coeffs: Vec<FieldElement> = (0..n)
        .map(|_| field.elem(rng.gen_range(0..field.q())).expect("index in range"))
        .collect();
    DensePoly::from_elements(field, &coeffs)
}

/// The distinct roots of f in its coefficient field, sorted by index.
pub fn roots(f: &DensePoly) -> Result<Vec<FieldElement>> {
    let n = f.degree().ok_or(Error::ZeroPolynomial)?;
    if n == 0 {
        return Ok(Vec::new());
    }
    let field = f.field().clone();
    let (_, fm) = f.monic();
    // gcd(f, X^q - X) is the product of (X - r) over distinct roots r.
    let x = DensePoly::x(&field);
    let xq = x.pow_mod(field.q(), &fm);
    let lin = fm.gcd(&(&xq - &x));
    if lin.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let mut rs: Vec<FieldElement> = factor_poly(&lin)?
        .into_iter()
        .map(|(fac, _)| -&fac.coeff(0))
        .collect();
    rs.sort_by_key(|r| r.index());
    Ok(rs)
}

/// A square root of x, if one exists: the Frobenius preimage in
/// characteristic 2 (always present), otherwise the root of X^2 - x with
/// the smaller index. Deterministic.
pub fn sqrt(x: &FieldElement) -> Option<FieldElement> {
    let field = x.field().clone();
    if x.is_zero() {
        return Some(field.zero());
    }
    if field.p() == 2 {
        // Squaring is a bijection; invert it with x -> x^(q/2).
        return Some(x.pow(field.q() / 2));
    }
    if !x.pow((field.q() - 1) / 2).is_one() {
        return None;
    }
    let f = DensePoly::from_elements(&field, &[-x, field.zero(), field.one()]);
    let rs = roots(&f).expect("nonzero polynomial");
    rs.into_iter().next()
}

/// Embedding of one field into another with the same characteristic and
/// compatible degrees, sending the canonical generator to the root of the
/// source modulus with the smallest index.
pub fn embedding(from: &FieldRef, to: &FieldRef) -> Result<FieldEmbedding> {
    if from.p() != to.p() || !to.k().is_multiple_of(from.k()) {
        return Err(Error::PreconditionFailed(format!(
            "no embedding of F_{}^{} into F_{}^{}",
            from.p(),
            from.k(),
            to.p(),
            to.k()
        )));
    }
    if from.k() == 1 {
        return Ok(FieldEmbedding { from: from.clone(), to: to.clone(), gen_image: to.zero() });
    }
    let coeffs: Vec<FieldElement> = from
        .modulus_coeffs()
        .expect("k >= 2 has a modulus")
        .iter()
        .map(|&c| to.int(c as i64))
        .collect();
    let lifted = DensePoly::from_elements(to, &coeffs);
    let rs = roots(&lifted)?;
    let gen_image = rs.into_iter().next().expect("the modulus splits in any field of compatible degree");
    Ok(FieldEmbedding { from: from.clone(), to: to.clone(), gen_image })
}
