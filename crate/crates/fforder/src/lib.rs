//! Construction of high-multiplicative-order elements in finite field
//! extensions, with certified lower bounds on their orders.
//!
//! The pipeline: a 2x2 matrix A over F_q and a Frobenius power r determine a
//! polynomial b X^{q^r + 1} - a X^{q^r} + d X - c whose degree-Dr irreducible
//! factors (D the projective order of A) yield roots theta with provably
//! large multiplicative order. The crate builds those roots, computes exact
//! orders at desk scale, evaluates certified combinatorial lower bounds and
//! closed-form estimates, and cross-checks the supporting structure results
//! by brute force on small fields.
//!
//! Layers, bottom up:
//! - [`integer`]: deterministic primality, factoring, multiplicative orders.
//! - [`field`] / [`poly`] / [`factor`]: finite fields F_{p^k}, dense
//!   polynomials over them, and polynomial factorization.
//! - [`extension`]: F_q[X]/(h) for an explicit irreducible h.
//! - [`pgl2`]: projective classification of the driving matrices.
//! - [`action`]: the matrix action on polynomials and field elements.
//! - [`counting`] / [`bounds`]: exponent-vector counts and closed forms.
//! - [`roots`] / [`experiment`]: end-to-end construction and verification.

pub mod action;
pub mod bounds;
pub mod caps;
pub mod counting;
pub mod error;
pub mod experiment;
pub mod extension;
pub mod factor;
pub mod field;
pub mod integer;
pub mod pgl2;
pub mod poly;
pub mod real;
pub mod roots;

pub use caps::Caps;
pub use error::{Error, Result};
