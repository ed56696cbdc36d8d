//! Polynomial arithmetic over F_p (p an odd word-size prime), used by the
//! factorization routine: distinct-degree and Cantor-Zassenhaus splitting.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

#[derive(Clone, PartialEq, Debug)]
pub struct ModPoly {
    pub p: u64,
    /// ascending degree, leading coefficient nonzero (empty = zero)
    pub coeffs: Vec<u64>,
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    acc
}

fn invmod(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

impl ModPoly {
    pub fn new(p: u64, mut coeffs: Vec<u64>) -> ModPoly {
        for c in &mut coeffs {
            *c %= p;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        ModPoly { p, coeffs }
    }

    pub fn zero(p: u64) -> ModPoly {
        ModPoly { p, coeffs: vec![] }
    }

    pub fn one(p: u64) -> ModPoly {
        ModPoly { p, coeffs: vec![1] }
    }

    pub fn x(p: u64) -> ModPoly {
        ModPoly { p, coeffs: vec![0, 1] }
    }

    pub fn from_bigints(p: u64, coeffs: &[BigInt]) -> ModPoly {
        let pb = BigInt::from(p);
        ModPoly::new(
            p,
            coeffs
                .iter()
                .map(|c| {
                    let r = ((c % &pb) + &pb) % &pb;
                    r.to_u64().unwrap()
                })
                .collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn leading(&self) -> u64 {
        *self.coeffs.last().unwrap_or(&0)
    }

    pub fn monic(&self) -> ModPoly {
        if self.is_zero() || self.leading() == 1 {
            return self.clone();
        }
        let inv = invmod(self.leading(), self.p);
        ModPoly::new(self.p, self.coeffs.iter().map(|&c| mulmod(c, inv, self.p)).collect())
    }

    #[allow(clippy::needless_range_loop)]
    pub fn sub(&self, o: &ModPoly) -> ModPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut out = vec![0u64; n];
        for i in 0..n {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = o.coeffs.get(i).copied().unwrap_or(0);
            out[i] = (a + self.p - b) % self.p;
        }
        ModPoly::new(self.p, out)
    }

    pub fn mul(&self, o: &ModPoly) -> ModPoly {
        if self.is_zero() || o.is_zero() {
            return ModPoly::zero(self.p);
        }
        let mut out = vec![0u64; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + mulmod(a, b, self.p)) % self.p;
            }
        }
        ModPoly::new(self.p, out)
    }

    pub fn div_rem(&self, d: &ModPoly) -> (ModPoly, ModPoly) {
        assert!(!d.is_zero());
        if self.degree() < d.degree() {
            return (ModPoly::zero(self.p), self.clone());
        }
        let p = self.p;
        let inv_lc = invmod(d.leading(), p);
        let mut rem = self.coeffs.clone();
        let dd = d.coeffs.len() - 1;
        let qlen = rem.len() - dd;
        let mut q = vec![0u64; qlen];
        for i in (0..qlen).rev() {
            let c = mulmod(rem[i + dd], inv_lc, p);
            if c == 0 {
                continue;
            }
            q[i] = c;
            for (j, &dc) in d.coeffs.iter().enumerate() {
                rem[i + j] = (rem[i + j] + p - mulmod(dc, c, p)) % p;
            }
        }
        (ModPoly::new(p, q), ModPoly::new(p, rem))
    }

    pub fn rem(&self, d: &ModPoly) -> ModPoly {
        self.div_rem(d).1
    }

    pub fn gcd(&self, o: &ModPoly) -> ModPoly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> ModPoly {
        if self.coeffs.len() <= 1 {
            return ModPoly::zero(self.p);
        }
        ModPoly::new(
            self.p,
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, &c)| mulmod(c, (i as u64 + 1) % self.p, self.p))
                .collect(),
        )
    }

    /// self^e mod m.
    pub fn powmod(&self, mut e: u64, m: &ModPoly) -> ModPoly {
        let mut base = self.rem(m);
        let mut acc = ModPoly::one(self.p);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    pub fn is_squarefree(&self) -> bool {
        let d = self.derivative();
        if d.is_zero() {
            return self.degree() == 0;
        }
        self.gcd(&d).degree() == 0
    }
}

/// All monic irreducible factors of a squarefree monic polynomial over F_p,
/// via distinct-degree then Cantor-Zassenhaus equal-degree splitting.
pub fn factor_squarefree_modp(f: &ModPoly, rng_state: &mut u64) -> Vec<ModPoly> {
    let p = f.p;
    let mut out = Vec::new();
    let mut rest = f.monic();
    let mut h = ModPoly::x(p);
    let mut degree = 1i64;
    while rest.degree() >= 2 * degree {
        h = h.powmod(p, &rest);
        let g = rest.gcd(&h.sub(&ModPoly::x(p)));
        if g.degree() > 0 {
            equal_degree_split(&g, degree as usize, rng_state, &mut out);
            rest = rest.div_rem(&g).0;
            h = h.rem(&rest);
        }
        degree += 1;
    }
    if rest.degree() > 0 {
        out.push(rest.monic());
    }
    out
}

fn next_u64(state: &mut u64) -> u64 {
    // xorshift64*, deterministic across runs
    let mut x = *state;
    x ^= x >> 12;
    x ^= x << 25;
    x ^= x >> 27;
    *state = x;
    x.wrapping_mul(0x2545F4914F6CDD1D)
}

fn equal_degree_split(f: &ModPoly, d: usize, rng_state: &mut u64, out: &mut Vec<ModPoly>) {
    let p = f.p;
    if f.degree() as usize == d {
        out.push(f.monic());
        return;
    }
    // p is odd here (factorization picks p >= 3), so (p^d - 1) / 2 works.
    let e = (pow_u128(p, d as u32) - 1) / 2;
    loop {
        let deg = f.degree() as usize;
        let mut coeffs = vec![0u64; deg];
        for c in &mut coeffs {
            *c = next_u64(rng_state) % p;
        }
        let a = ModPoly::new(p, coeffs);
        if a.degree() < 1 {
            continue;
        }
        let b = powmod_u128(&a, e, f).sub(&ModPoly::one(p));
        let g = f.gcd(&b);
        if g.degree() > 0 && g.degree() < f.degree() {
            let q = f.div_rem(&g).0;
            equal_degree_split(&g, d, rng_state, out);
            equal_degree_split(&q, d, rng_state, out);
            return;
        }
    }
}

fn pow_u128(p: u64, e: u32) -> u128 {
    let mut acc = 1u128;
    for _ in 0..e {
        acc *= p as u128;
    }
    acc
}

fn powmod_u128(a: &ModPoly, mut e: u128, m: &ModPoly) -> ModPoly {
    let mut base = a.rem(m);
    let mut acc = ModPoly::one(a.p);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&base).rem(m);
        }
        base = base.mul(&base).rem(m);
        e >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_modp_splits() {
        // (t^2 + 1)(t + 2) over F_7: t^2 + 1 = (t-?) splits mod 7? 7 = 3 mod 4 so irreducible? No:
        // squares mod 7: 1,4,2. -1 = 6 not a square, so t^2+1 is irreducible mod 7.
        let p = 7;
        let f = ModPoly::new(p, vec![1, 0, 1]).mul(&ModPoly::new(p, vec![2, 1]));
        let mut rng = 42;
        let mut fs = factor_squarefree_modp(&f, &mut rng);
        fs.sort_by_key(|g| g.degree());
        assert_eq!(fs.len(), 2);
        assert_eq!(fs[0].degree(), 1);
        assert_eq!(fs[1].degree(), 2);
        let prod = fs[0].mul(&fs[1]);
        assert_eq!(prod, f.monic());
    }
}
