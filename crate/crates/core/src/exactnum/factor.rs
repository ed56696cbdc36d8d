//! Factorization of univariate polynomials over Q: Yun squarefree
//! decomposition, then Zassenhaus (factor mod p, Hensel lift, subset
//! recombination) on each squarefree part.
//!
//! Degrees here are desk-scale (<= 16 or so), so the exponential
//! recombination step is never a concern.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::modp::{factor_squarefree_modp, ModPoly};
use super::poly::Poly;
use super::rat::Rat;
use crate::error::{Error, Result};

/// f = content * prod factor^multiplicity, factors monic irreducible over Q,
/// pairwise distinct, sorted canonically.
pub fn factor(f: &Poly) -> Result<(Rat, Vec<(Poly, u32)>)> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let content = f.leading();
    let monic = f.monic();
    let mut out: Vec<(Poly, u32)> = Vec::new();
    for (part, mult) in squarefree_decomposition(&monic) {
        for irr in factor_squarefree(&part) {
            out.push((irr, mult));
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok((content, out))
}

/// Yun's algorithm: monic input, returns (squarefree part, multiplicity)
/// with nonconstant parts only.
fn squarefree_decomposition(f: &Poly) -> Vec<(Poly, u32)> {
    let mut out = Vec::new();
    if f.is_constant() {
        return out;
    }
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f / &a0;
    let mut c = &df / &a0;
    let mut d = &c - &b.derivative();
    let mut i = 1u32;
    while !b.is_constant() {
        let a = b.gcd(&d);
        if !a.is_constant() {
            out.push((a.monic(), i));
        }
        b = &b / &a;
        c = &d / &a;
        d = &c - &b.derivative();
        i += 1;
    }
    out
}

/// Irreducible monic rational factors of a monic squarefree polynomial.
fn factor_squarefree(f: &Poly) -> Vec<Poly> {
    debug_assert!(f.is_monic() && f.degree() >= 1);
    if f.degree() == 1 {
        return vec![f.clone()];
    }
    let (_, prim) = f.content_primitive();
    factor_squarefree_primitive(&prim)
        .into_iter()
        .map(|g| g.monic())
        .collect()
}

/// Zassenhaus on a primitive squarefree integer polynomial; returns
/// irreducible factors over Q up to scaling.
fn factor_squarefree_primitive(f: &Poly) -> Vec<Poly> {
    let n = f.degree() as usize;
    if n == 1 {
        return vec![f.clone()];
    }
    let lc: BigInt = f.leading().to_integer();

    // Monicize: ft(x) = lc^(n-1) f(x/lc) is monic with integer coefficients.
    let ft = monicize(f, &lc);

    // Pick an odd prime keeping ft squarefree.
    let p = choose_prime(&ft);
    let fp = ModPoly::from_bigints(p, &int_coeffs(&ft));
    let mut rng = 0x9E3779B97F4A7C15u64;
    let mut modular = factor_squarefree_modp(&fp, &mut rng);
    modular.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.coeffs.cmp(&b.coeffs)));
    if modular.len() == 1 {
        return vec![f.clone()];
    }

    // Lift to p^K with p^K > 2 * Mignotte bound for monic factors of ft.
    let bound = mignotte_bound(&ft);
    let mut modulus = BigInt::from(p);
    let mut k = 1u32;
    while modulus <= &bound * 2 {
        modulus = &modulus * &modulus;
        k *= 2;
    }
    let lifted = hensel_tree_lift(&int_coeffs(&ft), &modular, p, k);

    // Subset recombination against ft.
    let mut remaining: Vec<Vec<BigInt>> = lifted;
    let mut ft_rest = int_coeffs(&ft);
    let mut found_monic: Vec<Vec<BigInt>> = Vec::new();
    let mut s = 1usize;
    while 2 * s <= remaining.len() {
        let mut advanced = false;
        let combos = combinations(remaining.len(), s);
        for combo in combos {
            let mut prod = vec![BigInt::one()];
            for &i in &combo {
                prod = zp_mul(&prod, &remaining[i], &modulus);
            }
            let cand = balanced(&prod, &modulus);
            if let Some(q) = exact_int_div(&ft_rest, &cand) {
                ft_rest = q;
                found_monic.push(cand);
                let mut keep = Vec::new();
                for (i, g) in remaining.drain(..).enumerate() {
                    if !combo.contains(&i) {
                        keep.push(g);
                    }
                }
                remaining = keep;
                advanced = true;
                break;
            }
        }
        if !advanced {
            s += 1;
        }
    }
    if ft_rest.len() > 1 {
        found_monic.push(ft_rest);
    }

    // Undo the monicization: h(x) monic factor of ft corresponds to the
    // monic rational factor h(lc x) / lc^(deg h).
    found_monic
        .into_iter()
        .map(|h| descale(&h, &lc))
        .collect()
}

fn int_coeffs(f: &Poly) -> Vec<BigInt> {
    f.coeffs().iter().map(|c| c.to_integer()).collect()
}

fn monicize(f: &Poly, lc: &BigInt) -> Poly {
    let n = f.degree() as usize;
    let mut coeffs = Vec::with_capacity(n + 1);
    for (i, c) in f.coeffs().iter().enumerate() {
        // lc^(n-1) * a_i / lc^i, integral for i <= n
        let e = (n as i64 - 1 - i as i64).max(0) as u32;
        let v = if i == n {
            Rat::one()
        } else {
            Rat::from_integer(c.to_integer() * lc.pow(e))
        };
        coeffs.push(v);
    }
    Poly::new(coeffs)
}

fn descale(h: &[BigInt], lc: &BigInt) -> Poly {
    let d = h.len() - 1;
    let mut coeffs = Vec::with_capacity(h.len());
    for (i, c) in h.iter().enumerate() {
        // coefficient of x^i in h(lc x) / lc^d = c * lc^i / lc^d
        coeffs.push(Rat::new(c * lc.pow(i as u32), lc.pow(d as u32)));
    }
    Poly::new(coeffs)
}

fn choose_prime(ft: &Poly) -> u64 {
    let ints = int_coeffs(ft);
    let mut p = 3u64;
    loop {
        let fp = ModPoly::from_bigints(p, &ints);
        if fp.degree() == ft.degree() && fp.is_squarefree() {
            return p;
        }
        p = next_prime(p);
    }
}

fn next_prime(mut p: u64) -> u64 {
    loop {
        p += 2;
        if crate::exactnum::intfactor::is_prime(&BigInt::from(p)) {
            return p;
        }
    }
}

/// 2-norm based Mignotte bound on coefficients of monic factors.
fn mignotte_bound(ft: &Poly) -> BigInt {
    let n = ft.degree() as u32;
    let mut sq = BigInt::zero();
    for c in ft.coeffs() {
        let v = c.to_integer();
        sq += &v * &v;
    }
    let norm2 = sq.sqrt() + 1;
    norm2 << n
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(idx.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

// ---- arithmetic on integer polynomials mod m (ascending coefficients) ----

fn zp_norm(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let mut v: Vec<BigInt> = a.iter().map(|c| ((c % m) + m) % m).collect();
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
    v
}

fn zp_mul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    zp_norm(&out, m)
}

fn zp_add(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let mut out = vec![BigInt::zero(); n];
    for i in 0..n {
        let mut v = BigInt::zero();
        if i < a.len() {
            v += &a[i];
        }
        if i < b.len() {
            v += &b[i];
        }
        out[i] = v;
    }
    zp_norm(&out, m)
}

fn zp_sub(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let mut out = vec![BigInt::zero(); n];
    for i in 0..n {
        let mut v = BigInt::zero();
        if i < a.len() {
            v += &a[i];
        }
        if i < b.len() {
            v -= &b[i];
        }
        out[i] = v;
    }
    zp_norm(&out, m)
}

/// Division with remainder by a monic divisor, all mod m.
fn zp_divrem_monic(a: &[BigInt], d: &[BigInt], m: &BigInt) -> (Vec<BigInt>, Vec<BigInt>) {
    assert!(!d.is_empty() && d.last().unwrap().is_one(), "divisor must be monic");
    let mut rem: Vec<BigInt> = a.to_vec();
    if rem.len() < d.len() {
        return (vec![], zp_norm(&rem, m));
    }
    let dd = d.len() - 1;
    let qlen = rem.len() - dd;
    let mut q = vec![BigInt::zero(); qlen];
    for i in (0..qlen).rev() {
        let c = ((&rem[i + dd] % m) + m) % m;
        if c.is_zero() {
            continue;
        }
        for (j, dc) in d.iter().enumerate() {
            let v = &rem[i + j] - &c * dc;
            rem[i + j] = v;
        }
        q[i] = c;
    }
    (zp_norm(&q, m), zp_norm(&rem, m))
}

fn balanced(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let half = m / 2;
    a.iter()
        .map(|c| {
            let r = ((c % m) + m) % m;
            if r > half {
                r - m
            } else {
                r
            }
        })
        .collect()
}

/// Exact division of integer polynomials; None if not divisible.
fn exact_int_div(a: &[BigInt], d: &[BigInt]) -> Option<Vec<BigInt>> {
    if d.is_empty() || !d.last().unwrap().is_one() {
        return None;
    }
    if a.len() < d.len() {
        return None;
    }
    let mut rem = a.to_vec();
    let dd = d.len() - 1;
    let qlen = rem.len() - dd;
    let mut q = vec![BigInt::zero(); qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dd].clone();
        if !c.is_zero() {
            for (j, dc) in d.iter().enumerate() {
                let v = &rem[i + j] - &c * dc;
                rem[i + j] = v;
            }
        }
        q[i] = c;
    }
    if rem.iter().all(|c| c.is_zero()) {
        Some(q)
    } else {
        None
    }
}

// ---- Hensel lifting ----

/// Extended Euclid over F_p lifted to integer vectors: s*g + t*h = 1 mod p.
fn bezout_modp(g: &ModPoly, h: &ModPoly) -> (Vec<BigInt>, Vec<BigInt>) {
    let p = g.p;
    let mut r0 = g.clone();
    let mut r1 = h.clone();
    let mut s0 = ModPoly::one(p);
    let mut s1 = ModPoly::zero(p);
    let mut t0 = ModPoly::zero(p);
    let mut t1 = ModPoly::one(p);
    while !r1.is_zero() {
        let (q, r) = r0.div_rem(&r1);
        let s = s0.sub(&q.mul(&s1));
        let t = t0.sub(&q.mul(&t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
        t0 = t1;
        t1 = t;
    }
    // r0 is a nonzero constant; normalize to 1.
    assert_eq!(r0.degree(), 0, "factors not coprime mod p");
    let inv = ModPoly::new(p, vec![mod_inv_u64(r0.leading(), p)]);
    let s = inv.mul(&s0);
    let t = inv.mul(&t0);
    let to_big = |m: &ModPoly| m.coeffs.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>();
    (to_big(&s), to_big(&t))
}

fn mod_inv_u64(a: u64, p: u64) -> u64 {
    // p prime
    let mut acc = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * base as u128) % p as u128) as u64;
        }
        base = ((base as u128 * base as u128) % p as u128) as u64;
        e >>= 1;
    }
    acc
}

/// Quadratic two-factor Hensel step: from f = g h (mod m) with
/// s g + t h = 1 (mod m), produce the same data mod m^2.
#[allow(clippy::type_complexity)]
fn hensel_step(
    f: &[BigInt],
    g: &[BigInt],
    h: &[BigInt],
    s: &[BigInt],
    t: &[BigInt],
    m: &BigInt,
) -> (Vec<BigInt>, Vec<BigInt>, Vec<BigInt>, Vec<BigInt>) {
    let m2 = m * m;
    let e = zp_sub(f, &zp_mul(g, h, &m2), &m2);
    let (q, r) = zp_divrem_monic(&zp_mul(s, &e, &m2), h, &m2);
    let gstar = zp_add(&zp_add(g, &zp_mul(t, &e, &m2), &m2), &zp_mul(&q, g, &m2), &m2);
    let hstar = zp_add(h, &r, &m2);
    // lift the Bezout pair
    let b = zp_sub(&zp_add(&zp_mul(s, &gstar, &m2), &zp_mul(t, &hstar, &m2), &m2), &[BigInt::one()], &m2);
    let (c, d) = zp_divrem_monic(&zp_mul(s, &b, &m2), &hstar, &m2);
    let sstar = zp_sub(s, &d, &m2);
    let tstar = zp_sub(&zp_sub(t, &zp_mul(t, &b, &m2), &m2), &zp_mul(&c, &gstar, &m2), &m2);
    (gstar, hstar, sstar, tstar)
}

/// Lift the modular factor list of the monic integer polynomial `f`
/// (coefficients ascending) from mod p to mod p^(2^k2), splitting the list
/// in halves and lifting pairs quadratically.
fn hensel_tree_lift(f: &[BigInt], factors: &[ModPoly], p: u64, k2: u32) -> Vec<Vec<BigInt>> {
    if factors.len() == 1 {
        // f arrives already reduced to the target modulus by the caller
        return vec![f.to_vec()];
    }
    let mid = factors.len() / 2;
    let (left, right) = factors.split_at(mid);
    let mut gp = ModPoly::one(p);
    for x in left {
        gp = gp.mul(x);
    }
    let mut hp = ModPoly::one(p);
    for x in right {
        hp = hp.mul(x);
    }
    let (mut s, mut t) = bezout_modp(&gp, &hp);
    let mut g: Vec<BigInt> = gp.coeffs.iter().map(|&c| BigInt::from(c)).collect();
    let mut h: Vec<BigInt> = hp.coeffs.iter().map(|&c| BigInt::from(c)).collect();
    let mut m = BigInt::from(p);
    let mut steps = k2;
    while steps > 1 {
        let (g2, h2, s2, t2) = hensel_step(f, &g, &h, &s, &t, &m);
        g = g2;
        h = h2;
        s = s2;
        t = t2;
        m = &m * &m;
        steps /= 2;
    }
    let mut out = hensel_tree_lift(&g, left, p, k2);
    out.extend(hensel_tree_lift(&h, right, p, k2));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, rat_int};

    fn reconstruct(content: &Rat, factors: &[(Poly, u32)]) -> Poly {
        let mut acc = Poly::constant(content.clone());
        for (g, m) in factors {
            acc = &acc * &g.pow(*m);
        }
        acc
    }

    #[test]
    fn factor_difference_of_squares() {
        // 2t^2 - 2 = 2 (t-1)(t+1)
        let f = Poly::from_ints(&[-2, 0, 2]);
        let (c, fs) = factor(&f).unwrap();
        assert_eq!(c, rat_int(2));
        assert_eq!(
            fs,
            vec![(Poly::from_ints(&[-1, 1]), 1), (Poly::from_ints(&[1, 1]), 1)]
        );
    }

    #[test]
    fn factor_irreducible_quadratic() {
        let f = Poly::from_ints(&[1, 0, 1]);
        let (c, fs) = factor(&f).unwrap();
        assert_eq!(c, rat_int(1));
        assert_eq!(fs, vec![(Poly::from_ints(&[1, 0, 1]), 1)]);
    }

    #[test]
    fn factor_with_multiplicity() {
        // t^3 - t^2 = t^2 (t - 1); verify by expansion
        let f = Poly::from_ints(&[0, 0, -1, 1]);
        let (c, fs) = factor(&f).unwrap();
        assert_eq!(reconstruct(&c, &fs), f);
        assert_eq!(
            fs,
            vec![(Poly::from_ints(&[-1, 1]), 1), (Poly::from_ints(&[0, 1]), 2)]
        );
    }

    #[test]
    fn factor_zero_rejected() {
        assert_eq!(factor(&Poly::zero()), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn factor_nonmonic_rational() {
        // (2t + 1)(3t - 1) = 6t^2 + t - 1, content 6, monic roots -1/2, 1/3
        let f = Poly::from_ints(&[-1, 1, 6]);
        let (c, fs) = factor(&f).unwrap();
        assert_eq!(c, rat_int(6));
        assert_eq!(reconstruct(&c, &fs), f);
        assert_eq!(
            fs,
            vec![
                (Poly::new(vec![rat(-1, 3), rat_int(1)]), 1),
                (Poly::new(vec![rat(1, 2), rat_int(1)]), 1)
            ]
        );
    }

    #[test]
    fn factor_roundtrip_random() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(99);
        for _ in 0..40 {
            let deg = rng.gen_range(1..=8);
            let mut coeffs: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-9..=9)).collect();
            if coeffs[deg] == 0 {
                coeffs[deg] = 1;
            }
            let f = Poly::from_ints(&coeffs);
            let (c, fs) = factor(&f).unwrap();
            assert_eq!(reconstruct(&c, &fs), f, "roundtrip failed for {f}");
            for (g, _) in &fs {
                assert!(g.is_monic());
            }
        }
    }

    #[test]
    fn factor_degree_twelve_cyclotomic_like() {
        // (t^4 + t^3 + t^2 + t + 1)(t^2 + 1)(t - 2)^2 * 3
        let a = Poly::from_ints(&[1, 1, 1, 1, 1]);
        let b = Poly::from_ints(&[1, 0, 1]);
        let c = Poly::from_ints(&[-2, 1]);
        let f = &(&(&a * &b) * &(&c * &c)) * &Poly::constant(rat_int(3));
        let (cont, fs) = factor(&f).unwrap();
        assert_eq!(cont, rat_int(3));
        assert_eq!(reconstruct(&cont, &fs), f);
        assert_eq!(fs.len(), 3);
        assert!(fs.contains(&(c, 2)));
    }
}
