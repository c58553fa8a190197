//! Deterministic integer primality and factorization, sized for group orders
//! up to 128 bits.
//!
//! The factor engine is trial division up to 10^6 followed by Brent's variant
//! of the Pollard rho cycle method with a fixed polynomial-offset schedule, so
//! repeated runs always produce the same work and the same answer.
//!
//! Primality is deterministic: Miller-Rabin with the thirteen smallest prime
//! bases, which is a proven primality test below 3 317 044 064 679 887 385 961 981
//! (about 2^81), combined with a strong Lucas test (Selfridge parameters) for
//! anything larger. No composite passing both tests is known, and every value
//! this crate meets at desk scale sits far below the proven range anyway.

use std::collections::BTreeMap;

/// `a * b mod m` without overflow for any 128-bit modulus.
pub fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    debug_assert!(m > 0);
    let (mut a, mut b) = (a % m, b % m);
    if m <= u64::MAX as u128 {
        return a * b % m;
    }
    // Shift-and-add fallback for wide moduli; desk-scale orders rarely get here.
    let mut acc: u128 = 0;
    while b > 0 {
        if b & 1 == 1 {
            acc = add_mod(acc, a, m);
        }
        a = add_mod(a, a, m);
        b >>= 1;
    }
    acc
}

/// `a + b mod m` for already-reduced operands, immune to u128 overflow.
pub fn add_mod(a: u128, b: u128, m: u128) -> u128 {
    debug_assert!(a < m && b < m);
    let (sum, overflow) = a.overflowing_add(b);
    if overflow || sum >= m {
        // Wrapping subtraction re-adds 2^128, which cancels the lost carry.
        sum.wrapping_sub(m)
    } else {
        sum
    }
}

/// `base ^ exp mod m` by square-and-multiply.
pub fn pow_mod(base: u128, mut exp: u128, m: u128) -> u128 {
    if m == 1 {
        return 0;
    }
    let mut base = base % m;
    let mut acc: u128 = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

pub fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Floor of the square root.
pub fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = 1u128 << (n.ilog2() / 2 + 1);
    loop {
        let y = (x + n / x) / 2;
        if y >= x {
            return x;
        }
        x = y;
    }
}

/// Thirteen-base Miller-Rabin is a proven deterministic test below this bound.
const MR_PROVEN_BOUND: u128 = 3_317_044_064_679_887_385_961_981;
const MR_BASES: [u128; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Deterministic primality for `n < 2^128`.
pub fn is_prime(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u128, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    if !miller_rabin(n) {
        return false;
    }
    n < MR_PROVEN_BOUND || strong_lucas(n)
}

/// Strong-pseudoprime test against the fixed base list; `n` odd, > 41,
/// coprime to every base.
fn miller_rabin(n: u128) -> bool {
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'base: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'base;
            }
        }
        return false;
    }
    true
}

/// Jacobi symbol `(a/n)` for odd `n`; `a` need not be reduced.
fn jacobi(mut a: u128, mut n: u128) -> i32 {
    debug_assert!(n % 2 == 1);
    a %= n;
    let mut t = 1i32;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Strong Lucas probable-prime test with Selfridge's parameter choice:
/// the first D in 5, -7, 9, -11, ... with Jacobi symbol (D/n) = -1,
/// P = 1, Q = (1 - D)/4.
fn strong_lucas(n: u128) -> bool {
    // Find D; a perfect square never yields (D/n) = -1, so detect it instead.
    let mut d_abs: u128 = 5;
    let mut d_neg = false;
    let d_residue = loop {
        let residue = if d_neg { n - d_abs % n } else { d_abs % n };
        match jacobi(residue, n) {
            -1 => break residue,
            0 if !d_abs.is_multiple_of(n) => return false, // shares a proper factor with n
            _ => {}
        }
        if d_abs == 13 {
            let r = isqrt(n);
            if r * r == n {
                return false;
            }
        }
        d_abs += 2;
        d_neg = !d_neg;
    };
    // Q = (1 - D)/4 as a residue mod n; 2 and 4 are units since n is odd.
    let q_residue = {
        let one_minus_d = add_mod(1 % n, n - d_residue, n);
        let inv4 = inv_mod(4, n).expect("odd modulus");
        mul_mod(one_minus_d, inv4, n)
    };
    let inv2 = inv_mod(2, n).expect("odd modulus");

    // n + 1 = odd * 2^s.
    let s = (n + 1).trailing_zeros();
    let odd = (n + 1) >> s;

    // Compute U_odd, V_odd, Q^odd by the binary chain, P = 1.
    let mut u: u128 = 1;
    let mut v: u128 = 1; // V_1 = P
    let mut qk = q_residue; // Q^1
    let bits = 128 - odd.leading_zeros();
    for i in (0..bits - 1).rev() {
        // Double: (U, V, Q^k) -> (U V, V^2 - 2 Q^k, Q^2k).
        u = mul_mod(u, v, n);
        v = sub_mod(mul_mod(v, v, n), add_mod(qk, qk, n), n);
        qk = mul_mod(qk, qk, n);
        if (odd >> i) & 1 == 1 {
            // Increment: U' = (P U + V)/2, V' = (D U + P V)/2.
            let nu = mul_mod(add_mod(u, v, n), inv2, n);
            let nv = mul_mod(add_mod(mul_mod(d_residue, u, n), v, n), inv2, n);
            u = nu;
            v = nv;
            qk = mul_mod(qk, q_residue, n);
        }
    }
    if u == 0 || v == 0 {
        return true;
    }
    for _ in 1..s {
        v = sub_mod(mul_mod(v, v, n), add_mod(qk, qk, n), n);
        qk = mul_mod(qk, qk, n);
        if v == 0 {
            return true;
        }
    }
    false
}

/// Modular inverse by extended Euclid, tracking the Bezout coefficient as a
/// residue so nothing overflows.
pub fn inv_mod(a: u128, m: u128) -> Option<u128> {
    debug_assert!(m > 1);
    let (mut r0, mut r1) = (m, a % m);
    let (mut t0, mut t1) = (0u128, 1 % m);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 % r1);
        let qt = mul_mod(q, t1, m);
        (t0, t1) = (t1, sub_mod(t0, qt, m));
    }
    (r0 == 1).then_some(t0)
}

fn sub_mod(a: u128, b: u128, m: u128) -> u128 {
    debug_assert!(a < m && b < m);
    if a >= b {
        a - b
    } else {
        a + (m - b)
    }
}

/// Brent's cycle variant of Pollard rho; returns a nontrivial factor of an
/// odd composite `n`. The offset schedule c = 1, 2, 3, ... is fixed, so the
/// result is deterministic.
fn rho_brent(n: u128) -> u128 {
    debug_assert!(n > 3 && n % 2 == 1 && !is_prime(n));
    for c in 1u128.. {
        if let Some(d) = rho_brent_once(n, c) {
            return d;
        }
    }
    unreachable!("rho offset schedule exhausted")
}

fn rho_brent_once(n: u128, c: u128) -> Option<u128> {
    let step = |x: u128| add_mod(mul_mod(x, x, n), c % n, n);
    let batch = 128u128;
    let mut y: u128 = 2;
    let mut r: u128 = 1;
    let mut q: u128 = 1;
    let mut g: u128 = 1;
    let mut x = y;
    let mut ys = y;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = step(y);
        }
        let mut k: u128 = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..batch.min(r - k) {
                y = step(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = gcd(q, n);
            k += batch;
        }
        r *= 2;
    }
    if g == n {
        // The batched product collapsed; replay one step at a time.
        loop {
            ys = step(ys);
            g = gcd(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

/// Prime factorization `n = prod p^e` as an ordered map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntFactorization {
    pub n: u128,
    pub factors: BTreeMap<u128, u32>,
}

impl IntFactorization {
    /// Multiplies the factorization back together (used by tests and asserts).
    pub fn recompose(&self) -> u128 {
        self.factors
            .iter()
            .fold(1u128, |acc, (&p, &e)| (0..e).fold(acc, |a, _| a * p))
    }

    pub fn primes(&self) -> impl Iterator<Item = u128> + '_ {
        self.factors.keys().copied()
    }
}

const TRIAL_BOUND: u128 = 1_000_000;

/// Factors any positive `n`; `factor_u128(1)` is the empty product.
pub fn factor_u128(n: u128) -> IntFactorization {
    assert!(n > 0, "factorization of zero is undefined");
    let mut rest = n;
    let mut factors = BTreeMap::new();
    let push = |p: u128, factors: &mut BTreeMap<u128, u32>| {
        *factors.entry(p).or_insert(0) += 1;
    };
    while rest.is_multiple_of(2) {
        push(2, &mut factors);
        rest /= 2;
    }
    let mut d: u128 = 3;
    while d <= TRIAL_BOUND && d * d <= rest {
        while rest.is_multiple_of(d) {
            push(d, &mut factors);
            rest /= d;
        }
        d += 2;
    }
    // Whatever survived trial division is either prime or a product of
    // primes above the trial bound; split it recursively with rho.
    let mut stack = Vec::new();
    if rest > 1 {
        stack.push(rest);
    }
    while let Some(v) = stack.pop() {
        if is_prime(v) {
            push(v, &mut factors);
        } else {
            let d = rho_brent(v);
            stack.push(d);
            stack.push(v / d);
        }
    }
    IntFactorization { n, factors }
}

/// Order of a group element given the group order's factorization:
/// start from the full group order and strip every prime that keeps the
/// power at the identity. `is_one_at(e)` must report whether x^e = 1.
pub fn multiplicative_order(
    factors: &IntFactorization,
    mut is_one_at: impl FnMut(u128) -> bool,
) -> u128 {
    let mut e = factors.n;
    for &p in factors.factors.keys() {
        while e.is_multiple_of(p) && is_one_at(e / p) {
            e /= p;
        }
    }
    e
}
