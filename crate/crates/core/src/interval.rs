//! Directed-rounding interval arithmetic on `f64`.
//!
//! Every operation rounds the result outward, so an `Interval` always
//! encloses the exact real value it stands for.  Elementary functions
//! (`ln`, `exp`) are widened by 4 ulps on each side: glibc guarantees
//! faithful rounding (< 1 ulp) for these, so the margin is conservative.
//!
//! Conversions from exact big integers and rationals work at any bit
//! size; they never go through a possibly-overflowing `to_f64` of the
//! raw value.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::exactnum::Rat;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

fn down(x: f64) -> f64 {
    if x.is_nan() {
        f64::NEG_INFINITY
    } else {
        x.next_down()
    }
}

fn up(x: f64) -> f64 {
    if x.is_nan() {
        f64::INFINITY
    } else {
        x.next_up()
    }
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };

    pub fn new(lo: f64, hi: f64) -> Interval {
        debug_assert!(lo <= hi, "inverted interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    /// Exact point interval (no widening: the f64 is taken literally).
    pub fn point(x: f64) -> Interval {
        Interval { lo: x, hi: x }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        if self.lo.is_finite() && self.hi.is_finite() {
            0.5 * (self.lo + self.hi)
        } else if self.lo.is_finite() {
            self.lo
        } else {
            self.hi
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval::new(down(self.lo + o.lo), up(self.hi + o.hi))
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        Interval::new(down(self.lo - o.hi), up(self.hi - o.lo))
    }

    pub fn neg(&self) -> Interval {
        Interval::new(-self.hi, -self.lo)
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        if *self == Interval::ZERO || *o == Interval::ZERO {
            return Interval::ZERO;
        }
        // 0 * inf is treated as 0: an infinite endpoint only arises as a
        // saturated bound, and the zero factor makes the product exact.
        fn p(a: f64, b: f64) -> f64 {
            if a == 0.0 || b == 0.0 {
                0.0
            } else {
                a * b
            }
        }
        let c = [
            p(self.lo, o.lo),
            p(self.lo, o.hi),
            p(self.hi, o.lo),
            p(self.hi, o.hi),
        ];
        let lo = c.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = c.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Interval::new(down(lo), up(hi))
    }

    /// Multiply by a nonnegative exact scalar.
    pub fn scale(&self, s: f64) -> Interval {
        debug_assert!(s >= 0.0);
        if s == 0.0 {
            return Interval::ZERO;
        }
        Interval::new(down(self.lo * s), up(self.hi * s))
    }

    /// Reciprocal; the interval must not contain zero.
    pub fn recip(&self) -> Interval {
        assert!(self.lo > 0.0 || self.hi < 0.0, "recip of interval containing 0");
        Interval::new(down(1.0 / self.hi), up(1.0 / self.lo))
    }

    pub fn div(&self, o: &Interval) -> Interval {
        self.mul(&o.recip())
    }

    pub fn max(&self, o: &Interval) -> Interval {
        Interval::new(self.lo.max(o.lo), self.hi.max(o.hi))
    }

    pub fn min(&self, o: &Interval) -> Interval {
        Interval::new(self.lo.min(o.lo), self.hi.min(o.hi))
    }

    /// max(0, x) pointwise.
    pub fn log_plus_clamp(&self) -> Interval {
        Interval::new(self.lo.max(0.0), self.hi.max(0.0))
    }

    pub fn abs(&self) -> Interval {
        if self.lo >= 0.0 {
            *self
        } else if self.hi <= 0.0 {
            self.neg()
        } else {
            Interval::new(0.0, (-self.lo).max(self.hi))
        }
    }

    /// Intersection; panics if the intervals are disjoint (both must
    /// enclose the same exact value, so disjointness is a logic error).
    pub fn intersect(&self, o: &Interval) -> Interval {
        let lo = self.lo.max(o.lo);
        let hi = self.hi.min(o.hi);
        assert!(lo <= hi, "disjoint intervals [{},{}] and [{},{}]", self.lo, self.hi, o.lo, o.hi);
        Interval::new(lo, hi)
    }

    /// Natural logarithm; requires lo > 0 (use `ln_weak` when the lower
    /// endpoint may touch 0).
    pub fn ln(&self) -> Interval {
        assert!(self.lo > 0.0, "ln of interval with nonpositive lower bound");
        Interval::new(widen_dn(self.lo.ln()), widen_up(self.hi.ln()))
    }

    /// Natural logarithm allowing lo <= 0: the lower bound saturates to -inf.
    pub fn ln_weak(&self) -> Interval {
        let lo = if self.lo <= 0.0 {
            f64::NEG_INFINITY
        } else {
            widen_dn(self.lo.ln())
        };
        let hi = if self.hi <= 0.0 {
            f64::NEG_INFINITY
        } else {
            widen_up(self.hi.ln())
        };
        Interval::new(lo, hi)
    }

    pub fn exp(&self) -> Interval {
        let lo = if self.lo == f64::NEG_INFINITY {
            0.0
        } else {
            widen_dn(self.lo.exp()).max(0.0)
        };
        let hi = if self.hi == f64::INFINITY {
            f64::INFINITY
        } else {
            widen_up(self.hi.exp())
        };
        Interval::new(lo, hi)
    }

    /// ln(2), enclosed.
    pub fn ln2() -> Interval {
        Interval::new(std::f64::consts::LN_2.next_down(), std::f64::consts::LN_2.next_up())
    }
}

fn widen_dn(x: f64) -> f64 {
    let mut y = x;
    for _ in 0..4 {
        y = down(y);
    }
    y
}

fn widen_up(x: f64) -> f64 {
    let mut y = x;
    for _ in 0..4 {
        y = up(y);
    }
    y
}

/// Enclosure of ln|n| for a nonzero big integer of any size.
pub fn ln_bigint_abs(n: &BigInt) -> Interval {
    assert!(!n.is_zero(), "ln of zero");
    let mag = n.magnitude();
    let bits = mag.bits();
    if bits <= 52 {
        let v = mag.to_f64().unwrap();
        return Interval::point(v).ln();
    }
    // n = top * 2^shift + r with 0 <= r < 2^shift and top < 2^53 exactly
    // representable: ln n lies in [ln top, ln(top+1)] + shift * ln 2.
    let shift = bits.saturating_sub(53);
    let top = (mag >> shift).to_f64().unwrap();
    let head = Interval::new(widen_dn(top.ln()), widen_up((top + 1.0).ln()));
    head.add(&Interval::ln2().scale(shift as f64))
}

/// Enclosure of ln|q| for a nonzero rational of any size.
pub fn ln_rat_abs(q: &Rat) -> Interval {
    assert!(!q.is_zero(), "ln of zero");
    ln_bigint_abs(q.numer()).sub(&ln_bigint_abs(q.denom()))
}

/// Enclosure of the value of a rational of any size (signs preserved).
pub fn rat_to_interval(q: &Rat) -> Interval {
    if q.is_zero() {
        return Interval::ZERO;
    }
    let neg = q.is_negative();
    let n = q.numer().magnitude().clone();
    let d = q.denom().magnitude().clone();
    // Scale so the integer quotient carries ~80 significant bits.
    let nb = n.bits() as i64;
    let db = d.bits() as i64;
    let k = (80 - (nb - db)).max(0) as u64;
    let t = (n << k) / d;
    let tf_lo = t.to_f64().unwrap();
    let tf_hi = (t + 1u8).to_f64().unwrap();
    let lo = ldexp_dir(down(tf_lo), -(k as i64), false);
    let hi = ldexp_dir(up(tf_hi), -(k as i64), true);
    let abs = Interval::new(lo, hi);
    if neg {
        abs.neg()
    } else {
        abs
    }
}

/// x * 2^e for nonnegative x with directed rounding; saturates cleanly at
/// the subnormal boundary and at infinity.
fn ldexp_dir(x: f64, mut e: i64, round_up: bool) -> f64 {
    debug_assert!(x >= 0.0);
    let mut y = x;
    while e != 0 && y != 0.0 && y.is_finite() {
        let step = e.clamp(-900, 900);
        y *= f64::from_bits(((step + 1023) as u64) << 52);
        e -= step;
        // power-of-two scaling is exact except at the range boundaries
        if !(1e-290..=1e290).contains(&y) {
            y = if round_up { up(y) } else { down(y).max(0.0) };
        }
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_traits::One;

    #[test]
    fn ln_bigint_small_and_large() {
        let i = ln_bigint_abs(&BigInt::from(3));
        assert!(i.contains(3f64.ln()));
        assert!(i.width() < 1e-12);

        // 2^1000: ln = 1000 ln 2, far outside f64's direct range for the value.
        let big = BigInt::one() << 1000;
        let i = ln_bigint_abs(&big);
        let expect = 1000.0 * std::f64::consts::LN_2;
        assert!(i.contains(expect));
        assert!(i.width() < 1e-9);
    }

    #[test]
    fn rat_interval_encloses() {
        let q = Rat::new(BigInt::from(1), BigInt::from(3));
        let i = rat_to_interval(&q);
        assert!(i.lo <= 1.0 / 3.0 && 1.0 / 3.0 <= i.hi);
        assert!(i.width() < 1e-15);

        let tiny = Rat::new(BigInt::one(), BigInt::one() << 1200);
        let i = rat_to_interval(&tiny);
        assert!(i.lo >= 0.0 && i.hi > 0.0 && i.hi < 1e-300);
    }

    #[test]
    fn arithmetic_encloses() {
        let a = Interval::point(0.1);
        let b = Interval::point(0.2);
        let s = a.add(&b);
        assert!(s.contains(0.1 + 0.2));
        assert!(s.width() < 1e-15);
        let p = a.mul(&b);
        assert!(p.contains(0.1 * 0.2));
        let e = a.exp().ln();
        assert!(e.contains(0.1));
    }

    #[test]
    fn mul_with_saturated_endpoint() {
        let a = Interval::new(0.0, f64::INFINITY);
        let b = Interval::ZERO;
        let p = a.mul(&b);
        assert_eq!(p, Interval::ZERO);
    }
}
