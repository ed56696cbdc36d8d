//! Dyadic interval arithmetic: endpoints m * 2^e with big-integer
//! mantissas rounded outward to a working precision, and exact binary
//! exponents.
//!
//! This backs the archimedean orbit engine: coordinate magnitudes there
//! range over 2^(+-d^n), far beyond f64 exponents, and chaotic bounded
//! orbits need more mantissa bits than f64 carries. Precision is a
//! parameter so a stalled run can restart with more bits.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exactnum::Rat;
use crate::interval::Interval;

/// An exact dyadic rational m * 2^e.
#[derive(Clone, Debug, PartialEq)]
pub struct Dy {
    pub m: BigInt,
    pub e: i64,
}

impl Dy {
    pub fn zero() -> Dy {
        Dy {
            m: BigInt::zero(),
            e: 0,
        }
    }

    pub fn from_bigint(n: &BigInt) -> Dy {
        Dy { m: n.clone(), e: 0 }.normalized()
    }

    fn normalized(mut self) -> Dy {
        if self.m.is_zero() {
            self.e = 0;
            return self;
        }
        let tz = self.m.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.m >>= tz;
            self.e += tz as i64;
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    fn sign(&self) -> i8 {
        if self.m.is_zero() {
            0
        } else if self.m.is_negative() {
            -1
        } else {
            1
        }
    }

    /// Position of the most significant bit: value magnitude lies in
    /// [2^(msb-1), 2^msb). Zero reports i64::MIN.
    fn msb(&self) -> i64 {
        if self.m.is_zero() {
            i64::MIN
        } else {
            self.m.bits() as i64 + self.e
        }
    }

    fn round_dir(&self, prec: u32, up: bool) -> Dy {
        let bits = self.m.bits();
        if bits <= prec as u64 {
            return self.clone().normalized();
        }
        let s = bits - prec as u64;
        let pow = BigInt::one() << s;
        let m = if up {
            self.m.div_ceil(&pow)
        } else {
            self.m.div_floor(&pow)
        };
        Dy {
            m,
            e: self.e + s as i64,
        }
        .normalized()
    }

    /// Exact sum, with far-apart operands absorbed into a one-ulp nudge.
    fn add_dir(&self, other: &Dy, prec: u32, up: bool) -> Dy {
        if self.m.is_zero() {
            return other.round_dir(prec, up);
        }
        if other.m.is_zero() {
            return self.round_dir(prec, up);
        }
        let (big, small) = if self.msb() >= other.msb() {
            (self, other)
        } else {
            (other, self)
        };
        // when the small operand is below the big one's rounding error,
        // absorb it into a directed nudge
        let gap = big.msb() - small.msb();
        if gap > prec as i64 + 8 {
            let r = big.round_dir(prec, up);
            let ulp_e = r.msb() - prec as i64 - 1;
            return if up && small.sign() > 0 {
                Dy {
                    m: &r.m * (BigInt::one() << ((r.e - ulp_e).max(0) as u64)) + 1,
                    e: ulp_e.min(r.e),
                }
                .normalized()
                .round_dir(prec + 2, true)
            } else if !up && small.sign() < 0 {
                Dy {
                    m: &r.m * (BigInt::one() << ((r.e - ulp_e).max(0) as u64)) - 1,
                    e: ulp_e.min(r.e),
                }
                .normalized()
                .round_dir(prec + 2, false)
            } else {
                r
            };
        }
        let e = self.e.min(other.e);
        let m = (&self.m << (self.e - e) as u64) + (&other.m << (other.e - e) as u64);
        Dy { m, e }.round_dir(prec, up)
    }

    fn mul_dir(&self, other: &Dy, prec: u32, up: bool) -> Dy {
        Dy {
            m: &self.m * &other.m,
            e: self.e + other.e,
        }
        .round_dir(prec, up)
    }

    fn neg(&self) -> Dy {
        Dy {
            m: -self.m.clone(),
            e: self.e,
        }
    }

    fn cmp_val(&self, other: &Dy) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        match self.sign().cmp(&other.sign()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        if self.sign() == 0 {
            return Ordering::Equal;
        }
        // same nonzero sign: compare magnitudes by msb first
        let (a, b) = (self.msb(), other.msb());
        if a != b {
            let mag = a.cmp(&b);
            return if self.sign() > 0 { mag } else { mag.reverse() };
        }
        let e = self.e.min(other.e);
        let shift_a = (self.e - e) as u64;
        let shift_b = (other.e - e) as u64;
        (&self.m << shift_a).cmp(&(&other.m << shift_b))
    }

    /// Directed conversion to f64 (used only for ln of mantissas, where
    /// the value has already been brought near 1).
    fn to_f64_dir(&self, up: bool) -> f64 {
        if self.m.is_zero() {
            return 0.0;
        }
        let bits = self.m.bits();
        let (top, e) = if bits <= 53 {
            (self.m.to_f64().unwrap(), self.e)
        } else {
            let s = bits - 53;
            let pow = BigInt::one() << s;
            let t = if up {
                self.m.div_ceil(&pow)
            } else {
                self.m.div_floor(&pow)
            };
            (t.to_f64().unwrap(), self.e + s as i64)
        };
        // |e| stays tiny here by construction
        let scale = 2f64.powi(e as i32);
        let v = top * scale;
        if up {
            v.next_up()
        } else {
            v.next_down()
        }
    }
}

/// Closed interval with dyadic endpoints.
#[derive(Clone, Debug)]
pub struct DyInterval {
    pub lo: Dy,
    pub hi: Dy,
}

impl DyInterval {
    pub fn zero() -> DyInterval {
        DyInterval {
            lo: Dy::zero(),
            hi: Dy::zero(),
        }
    }

    pub fn from_bigint(n: &BigInt) -> DyInterval {
        let d = Dy::from_bigint(n);
        DyInterval { lo: d.clone(), hi: d }
    }

    /// Outward-rounded enclosure of a rational at the given precision;
    /// exact when the value is a dyadic rational that fits.
    pub fn from_rat(q: &Rat, prec: u32) -> DyInterval {
        if q.is_zero() {
            return DyInterval::zero();
        }
        let shift = prec as u64 + (q.denom().bits().max(q.numer().bits()));
        let (scaled, rem) = (q.numer() << shift).div_mod_floor(q.denom());
        let lo = Dy {
            m: scaled.clone(),
            e: -(shift as i64),
        };
        if rem.is_zero() {
            let exact = lo.clone().normalized();
            if exact.m.bits() <= prec as u64 {
                return DyInterval {
                    lo: exact.clone(),
                    hi: exact,
                };
            }
        }
        let hi = Dy {
            m: scaled + 1,
            e: -(shift as i64),
        };
        DyInterval {
            lo: lo.round_dir(prec, false),
            hi: hi.round_dir(prec, true),
        }
    }

    pub fn add(&self, o: &DyInterval, prec: u32) -> DyInterval {
        DyInterval {
            lo: self.lo.add_dir(&o.lo, prec, false),
            hi: self.hi.add_dir(&o.hi, prec, true),
        }
    }

    pub fn mul(&self, o: &DyInterval, prec: u32) -> DyInterval {
        let mut lo: Option<Dy> = None;
        let mut hi: Option<Dy> = None;
        for (a, b) in [
            (&self.lo, &o.lo),
            (&self.lo, &o.hi),
            (&self.hi, &o.lo),
            (&self.hi, &o.hi),
        ] {
            let down = a.mul_dir(b, prec, false);
            let up = a.mul_dir(b, prec, true);
            lo = Some(match lo {
                None => down,
                Some(c) => {
                    if down.cmp_val(&c) == std::cmp::Ordering::Less {
                        down
                    } else {
                        c
                    }
                }
            });
            hi = Some(match hi {
                None => up,
                Some(c) => {
                    if up.cmp_val(&c) == std::cmp::Ordering::Greater {
                        up
                    } else {
                        c
                    }
                }
            });
        }
        DyInterval {
            lo: lo.unwrap(),
            hi: hi.unwrap(),
        }
    }

    pub fn neg(&self) -> DyInterval {
        DyInterval {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
        }
    }

    pub fn abs(&self) -> DyInterval {
        if self.lo.sign() >= 0 {
            self.clone()
        } else if self.hi.sign() <= 0 {
            self.neg()
        } else {
            let mag = if self.lo.neg().cmp_val(&self.hi) == std::cmp::Ordering::Greater {
                self.lo.neg()
            } else {
                self.hi.clone()
            };
            DyInterval {
                lo: Dy::zero(),
                hi: mag,
            }
        }
    }

    pub fn max(&self, o: &DyInterval) -> DyInterval {
        let pick = |a: &Dy, b: &Dy| -> Dy {
            if a.cmp_val(b) == std::cmp::Ordering::Greater {
                a.clone()
            } else {
                b.clone()
            }
        };
        DyInterval {
            lo: pick(&self.lo, &o.lo),
            hi: pick(&self.hi, &o.hi),
        }
    }

    /// Multiply by an exact power of two.
    pub fn scale_exp(&self, k: i64) -> DyInterval {
        let f = |d: &Dy| -> Dy {
            if d.m.is_zero() {
                Dy::zero()
            } else {
                Dy {
                    m: d.m.clone(),
                    e: d.e + k,
                }
            }
        };
        DyInterval {
            lo: f(&self.lo),
            hi: f(&self.hi),
        }
    }

    pub fn pow(&self, n: u32, prec: u32) -> DyInterval {
        let mut acc = DyInterval::from_bigint(&BigInt::one());
        for _ in 0..n {
            acc = acc.mul(self, prec);
        }
        acc
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.sign() <= 0 && self.hi.sign() >= 0
    }

    /// Binary exponent of the upper magnitude bound; i64::MIN for zero.
    pub fn mag_msb(&self) -> i64 {
        self.abs().hi.msb()
    }

    /// Enclosure of ln of a strictly positive dyadic interval, as an f64
    /// interval; the exponent enters exactly through e ln 2.
    pub fn ln(&self) -> Interval {
        assert!(self.lo.sign() > 0, "dyadic ln needs a positive interval");
        let part = |d: &Dy, up: bool| -> f64 {
            // d = m 2^e; bring m into [1, 2) as m' 2^k
            let k = d.m.bits() as i64 - 1;
            let mant = Dy {
                m: d.m.clone(),
                e: -k,
            };
            let mf = mant.to_f64_dir(up);
            let lnm = if up {
                mf.ln().next_up().next_up()
            } else {
                mf.ln().next_down().next_down()
            };
            let e_total = d.e + k;
            let ln2 = if up {
                std::f64::consts::LN_2.next_up()
            } else {
                std::f64::consts::LN_2.next_down()
            };
            // directed product of e_total * ln2
            let prod = e_total as f64 * if (e_total >= 0) == up { ln2 } else {
                if up { std::f64::consts::LN_2.next_down() } else { std::f64::consts::LN_2.next_up() }
            };
            let prod = if up { prod.next_up() } else { prod.next_down() };
            let s = lnm + prod;
            if up {
                s.next_up()
            } else {
                s.next_down()
            }
        };
        Interval::new(part(&self.lo, false), part(&self.hi, true))
    }
}

/// ln of max of absolute values over a coordinate slice; -inf lower bound
/// when every interval touches zero.
pub fn ln_max_abs(coords: &[DyInterval]) -> Interval {
    let mut m = DyInterval::zero();
    for c in coords {
        m = m.max(&c.abs());
    }
    if m.hi.sign() <= 0 {
        return Interval::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    }
    if m.lo.sign() <= 0 {
        let hi = DyInterval {
            lo: m.hi.clone(),
            hi: m.hi.clone(),
        }
        .ln();
        return Interval::new(f64::NEG_INFINITY, hi.hi);
    }
    m.ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    #[test]
    fn round_trip_small_values() {
        let q = rat(1, 3);
        let i = DyInterval::from_rat(&q, 64);
        assert!(i.lo.cmp_val(&i.hi) != std::cmp::Ordering::Greater);
        let l = DyInterval {
            lo: i.lo.clone(),
            hi: i.lo.clone(),
        };
        let _ = l;
        let f_lo = i.lo.to_f64_dir(false);
        let f_hi = i.hi.to_f64_dir(true);
        assert!(f_lo <= 1.0 / 3.0 && 1.0 / 3.0 <= f_hi);
    }

    #[test]
    fn arithmetic_encloses() {
        let a = DyInterval::from_rat(&rat(1, 3), 96);
        let b = DyInterval::from_rat(&rat(-2, 7), 96);
        let s = a.add(&b, 96);
        let expect = 1.0 / 3.0 - 2.0 / 7.0;
        assert!(s.lo.to_f64_dir(false) <= expect && expect <= s.hi.to_f64_dir(true));
        let p = a.mul(&b, 96);
        let expect = (1.0 / 3.0) * (-2.0 / 7.0);
        assert!(p.lo.to_f64_dir(false) <= expect && expect <= p.hi.to_f64_dir(true));
    }

    #[test]
    fn ln_with_extreme_exponent() {
        // 3 * 2^(-10^6): ln = ln 3 - 10^6 ln 2, far outside f64 value range
        let d = DyInterval::from_bigint(&BigInt::from(3)).scale_exp(-1_000_000);
        let l = d.ln();
        let expect = 3f64.ln() - 1_000_000.0 * std::f64::consts::LN_2;
        assert!(l.contains(expect), "{l:?} vs {expect}");
        assert!(l.width() < 1e-6);
    }

    #[test]
    fn far_apart_addition_negative_big() {
        let big = DyInterval::from_bigint(&-(BigInt::from(1) << 200u32));
        let tiny = DyInterval::from_rat(&rat(1, 3), 64).scale_exp(-400);
        let s = big.add(&tiny, 64);
        // sum = big + tiny with 0 < tiny << ulp(big): enclosure must keep
        // lo <= big and push hi above big
        assert!(s.lo.cmp_val(&big.lo) != std::cmp::Ordering::Greater);
        assert!(s.hi.cmp_val(&big.hi) != std::cmp::Ordering::Less);
    }

    #[test]
    fn far_apart_addition_sound() {
        let big = DyInterval::from_bigint(&(BigInt::from(1) << 200u32));
        let tiny = DyInterval::from_rat(&rat(1, 3), 64).scale_exp(-400);
        let s = big.add(&tiny, 64);
        // the sum must still enclose big (+ tiny positive nudge)
        assert!(s.hi.cmp_val(&big.hi) != std::cmp::Ordering::Less);
        assert!(s.lo.cmp_val(&big.lo) != std::cmp::Ordering::Greater);
    }
}
