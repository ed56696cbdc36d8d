//! Exact rationals and p-adic valuations.
//!
//! `Rat` is an arbitrary-precision rational, always stored reduced with a
//! positive denominator (the backing type maintains this canonical form on
//! construction, so equal values have equal representations).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rat = num_rational::BigRational;

/// Rational from an integer pair, reducing eagerly.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Rational from an integer.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Exponent of the prime `p` in the nonzero integer `n`.
pub fn vp_int(n: &BigInt, p: &BigInt) -> Result<i64> {
    if n.is_zero() {
        return Err(Error::ZeroValuation);
    }
    debug_assert!(*p >= BigInt::from(2));
    let mut m = n.abs();
    let mut v = 0i64;
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            return Ok(v);
        }
        v += 1;
        m = q;
    }
}

/// Exponent of `p` in the nonzero rational `q`, so that |q|_p = p^(-vp).
pub fn vp(q: &Rat, p: &BigInt) -> Result<i64> {
    if q.is_zero() {
        return Err(Error::ZeroValuation);
    }
    Ok(vp_int(q.numer(), p)? - vp_int(q.denom(), p)?)
}

/// Scale projective coordinates over Q to coprime integers.
///
/// The result spans the same projective point; the gcd of the returned
/// integers is 1 and the sign convention follows the input (no sign
/// normalization beyond the reduction itself).
pub fn coprime_integer_coords(coords: &[Rat]) -> Vec<BigInt> {
    assert!(coords.iter().any(|c| !c.is_zero()), "zero vector has no projective class");
    let mut lcm = BigInt::one();
    for c in coords {
        lcm = lcm.lcm(c.denom());
    }
    let mut ints: Vec<BigInt> = coords
        .iter()
        .map(|c| c.numer() * (&lcm / c.denom()))
        .collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if !g.is_one() && !g.is_zero() {
        for x in &mut ints {
            *x /= &g;
        }
    }
    ints
}

/// Canonical representative of a projective point over Q: coprime integers
/// with the last nonzero coordinate positive. Used as an exact orbit key.
pub fn canonical_proj_key(coords: &[Rat]) -> Vec<BigInt> {
    let mut ints = coprime_integer_coords(coords);
    if let Some(last) = ints.iter().rev().find(|x| !x.is_zero()) {
        if last.is_negative() {
            for x in &mut ints {
                *x = -(x.clone());
            }
        }
    }
    ints
}
