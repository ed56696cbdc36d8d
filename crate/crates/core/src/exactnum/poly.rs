//! Dense univariate polynomials over Q in the parameter `t`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use num_traits::{One, Signed, Zero};

use super::rat::{rat_int, Rat};

/// Coefficients in ascending degree order; the zero polynomial is the
/// empty vector, otherwise the leading coefficient is nonzero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<Rat>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rat>) -> Poly {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Poly {
        Poly { coeffs: vec![] }
    }

    pub fn one() -> Poly {
        Poly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Poly {
        Poly::new(vec![c])
    }

    /// The monomial t.
    pub fn t() -> Poly {
        Poly::new(vec![Rat::zero(), Rat::one()])
    }

    pub fn from_ints(coeffs: &[i64]) -> Poly {
        Poly::new(coeffs.iter().map(|&c| rat_int(c)).collect())
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree; the zero polynomial reports -1 for convenience in the
    /// order computations at infinity.
    pub fn degree(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn leading(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        let lc = self.leading();
        Poly::new(self.coeffs.iter().map(|c| c / &lc).collect())
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * rat_int(i as i64 + 1))
                .collect(),
        )
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Euclidean division; panics if the divisor is zero.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.degree() < d.degree() {
            return (Poly::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let dlc = d.leading();
        let dd = d.coeffs.len() - 1;
        let qlen = rem.len() - dd;
        let mut q = vec![Rat::zero(); qlen];
        for i in (0..qlen).rev() {
            let c = &rem[i + dd] / &dlc;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                let v = &rem[i + j] - &(dc * &c);
                rem[i + j] = v;
            }
            q[i] = c;
        }
        (Poly::new(q), Poly::new(rem))
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Multiplicity of the (nonconstant) factor `g` in self.
    pub fn multiplicity_of(&self, g: &Poly) -> u32 {
        assert!(!self.is_zero() && g.degree() >= 1);
        let mut m = 0;
        let mut f = self.clone();
        loop {
            let (q, r) = f.div_rem(g);
            if !r.is_zero() {
                return m;
            }
            m += 1;
            f = q;
        }
    }

    /// Largest power of t dividing self (self nonzero).
    pub fn order_at_zero(&self) -> u32 {
        assert!(!self.is_zero());
        self.coeffs.iter().take_while(|c| c.is_zero()).count() as u32
    }

    /// Clear denominators and content: returns (content, primitive integer
    /// polynomial with positive leading coefficient) with
    /// self = content * primitive.
    pub fn content_primitive(&self) -> (Rat, Poly) {
        use num_bigint::BigInt;
        use num_integer::Integer;
        assert!(!self.is_zero());
        let mut lcm = BigInt::one();
        for c in &self.coeffs {
            lcm = lcm.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
        let mut g = BigInt::zero();
        for x in &ints {
            g = g.gcd(x);
        }
        let sign = if ints.last().unwrap().is_negative() { -1 } else { 1 };
        let g = g * BigInt::from(sign);
        let prim = Poly::new(ints.iter().map(|x| Rat::from_integer(x / &g)).collect());
        let content = Rat::new(g, lcm);
        (content, prim)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl fmt::Display for Poly {
    /// Renders as an expression the family-file parser accepts, e.g.
    /// `t^2 - 1/2*t + 3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let unit_coeff = mag.is_one() && i > 0;
            if !unit_coeff {
                write!(f, "{mag}")?;
            }
            if i > 0 {
                if !unit_coeff {
                    write!(f, "*")?;
                }
                write!(f, "t")?;
                if i > 1 {
                    write!(f, "^{i}")?;
                }
            }
        }
        Ok(())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + rhs.coeff(i));
        }
        Poly::new(out)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) - rhs.coeff(i));
        }
        Poly::new(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let v = &out[i + j] + &(a * b);
                out[i + j] = v;
            }
        }
        Poly::new(out)
    }
}

impl Div for &Poly {
    type Output = Poly;
    fn div(self, rhs: &Poly) -> Poly {
        let (q, r) = self.div_rem(rhs);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }
}

impl Rem for &Poly {
    type Output = Poly;
    fn rem(self, rhs: &Poly) -> Poly {
        self.div_rem(rhs).1
    }
}

/// Total order on polynomials by (degree, coefficients from the top);
/// gives closed points a canonical enumeration order.
impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Poly) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Poly {
    fn cmp(&self, other: &Poly) -> std::cmp::Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| {
                for (a, b) in self.coeffs.iter().rev().zip(other.coeffs.iter().rev()) {
                    let c = a.cmp(b);
                    if c != std::cmp::Ordering::Equal {
                        return c;
                    }
                }
                std::cmp::Ordering::Equal
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    #[test]
    fn div_rem_roundtrip() {
        let f = Poly::from_ints(&[1, 0, -3, 0, 1]);
        let g = Poly::from_ints(&[-1, 1]);
        let (q, r) = f.div_rem(&g);
        assert_eq!(&(&q * &g) + &r, f);
    }

    #[test]
    fn gcd_of_common_factor() {
        let a = &Poly::from_ints(&[-1, 1]) * &Poly::from_ints(&[1, 1]);
        let b = &Poly::from_ints(&[-1, 1]) * &Poly::from_ints(&[2, 1]);
        assert_eq!(a.gcd(&b), Poly::from_ints(&[-1, 1]));
    }

    #[test]
    fn display_renders_expression() {
        let p = Poly::new(vec![rat(1, 2), rat_int(-2), rat_int(1)]);
        assert_eq!(p.to_string(), "t^2 - 2*t + 1/2");
        assert_eq!(Poly::zero().to_string(), "0");
        assert_eq!(Poly::t().to_string(), "t");
    }

    #[test]
    fn content_primitive_reconstructs() {
        let p = Poly::new(vec![rat(2, 3), rat(4, 3)]);
        let (c, prim) = p.content_primitive();
        assert_eq!(prim, Poly::from_ints(&[1, 2]));
        let scaled = Poly::new(prim.coeffs().iter().map(|x| x * &c).collect());
        assert_eq!(scaled, p);
    }
}
