//! Places of Q and of Q(t), normalized log absolute values, and the
//! projective norm used by the Green's functions.
//!
//! Conventions:
//! * at a finite place p of Q, values are exact exponents in units of
//!   log p: `log|q|_p = -vp(q) * log p`;
//! * at a place beta of Q(t), values are exact vanishing orders:
//!   `log|phi|_beta = -ord_beta(phi)` (a pole makes the value positive);
//! * archimedean quantities are certified intervals in natural log.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{factor, rat_int, vp, Poly, Rat, RatFunc};
use crate::interval::{ln_bigint_abs, ln_rat_abs, Interval};

/// A place of Q.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum NumPlace {
    Arch,
    Finite(BigInt),
}

impl NumPlace {
    pub fn finite(p: u64) -> NumPlace {
        NumPlace::Finite(BigInt::from(p))
    }
}

impl fmt::Display for NumPlace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NumPlace::Arch => write!(f, "arch"),
            NumPlace::Finite(p) => write!(f, "{p}"),
        }
    }
}

/// A place of Q(t): a closed point of P^1 over Q, either a monic
/// irreducible polynomial or the point at infinity.
///
/// A finite place of residue degree e stands for e conjugate geometric
/// points; all orders here are per geometric point, and degree weighting
/// enters only in global sums.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum FunPlace {
    Finite(Poly),
    Infinity,
}

impl FunPlace {
    pub fn finite(g: Poly) -> FunPlace {
        debug_assert!(g.is_monic() && g.degree() >= 1);
        FunPlace::Finite(g)
    }

    /// Residue degree of the closed point.
    pub fn degree(&self) -> i64 {
        match self {
            FunPlace::Finite(g) => g.degree(),
            FunPlace::Infinity => 1,
        }
    }

    /// The place t = t0 for a rational parameter value.
    pub fn at_rational(t0: &Rat) -> FunPlace {
        FunPlace::Finite(Poly::new(vec![-t0.clone(), rat_int(1)]))
    }
}

impl fmt::Display for FunPlace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunPlace::Finite(g) => write!(f, "{g}"),
            FunPlace::Infinity => write!(f, "inf"),
        }
    }
}

/// A logarithmic absolute value: exact exponent at non-archimedean places
/// (units depend on the place, see module docs), certified natural-log
/// interval at archimedean ones.
#[derive(Clone, Debug, PartialEq)]
pub enum LogVal {
    Exact(Rat),
    Arch(Interval),
}

impl LogVal {
    pub fn zero_exact() -> LogVal {
        LogVal::Exact(Rat::zero())
    }

    /// Exact value, panicking on the interval kind.
    pub fn expect_exact(&self) -> &Rat {
        match self {
            LogVal::Exact(q) => q,
            LogVal::Arch(_) => panic!("expected exact log value"),
        }
    }

    /// Natural-log enclosure of the value; an exact exponent is converted
    /// through an enclosure of log p (the caller supplies ln of the base).
    pub fn to_natural(&self, ln_base: &Interval) -> Interval {
        match self {
            LogVal::Exact(q) => crate::interval::rat_to_interval(q).mul(ln_base),
            LogVal::Arch(i) => *i,
        }
    }
}

/// Vanishing order of a nonzero rational function at a place of Q(t).
pub fn ord_at(phi: &RatFunc, beta: &FunPlace) -> Result<i64> {
    if phi.is_zero() {
        return Err(Error::ZeroFunction);
    }
    Ok(match beta {
        FunPlace::Infinity => phi.den().degree() - phi.num().degree(),
        FunPlace::Finite(g) => {
            if g.degree() == 1 && g.coeff(0).is_zero() {
                // at t = 0 read the order off the trailing coefficients
                phi.num().order_at_zero() as i64 - phi.den().order_at_zero() as i64
            } else {
                phi.num().multiplicity_of(g) as i64 - phi.den().multiplicity_of(g) as i64
            }
        }
    })
}

/// log|q|_v of a nonzero rational: exact exponent of log p at finite
/// places, interval at the archimedean place.
pub fn log_abs(q: &Rat, v: &NumPlace) -> Result<LogVal> {
    if q.is_zero() {
        return Err(Error::ZeroValue);
    }
    Ok(match v {
        NumPlace::Arch => LogVal::Arch(ln_rat_abs(q)),
        NumPlace::Finite(p) => LogVal::Exact(rat_int(-vp(q, p)?)),
    })
}

/// log of the projective norm `|P|_v = max(|P_0|,...,|P_{N-1}|) / |P_N|`
/// of a point over Q. `None` encodes norm zero (all leading coordinates
/// vanish), i.e. log-norm minus infinity.
pub fn proj_norm_num(coords: &[Rat], v: &NumPlace) -> Result<Option<LogVal>> {
    let n = coords.len() - 1;
    if coords[n].is_zero() {
        return Err(Error::OnHyperplane);
    }
    let leading: Vec<&Rat> = coords[..n].iter().filter(|c| !c.is_zero()).collect();
    if leading.is_empty() {
        return Ok(None);
    }
    Ok(Some(match v {
        NumPlace::Arch => {
            let mut best = ln_rat_abs(leading[0]);
            for c in &leading[1..] {
                best = best.max(&ln_rat_abs(c));
            }
            LogVal::Arch(best.sub(&ln_rat_abs(&coords[n])))
        }
        NumPlace::Finite(p) => {
            let vmin = leading.iter().map(|c| vp(c, p).unwrap()).min().unwrap();
            LogVal::Exact(rat_int(vp(&coords[n], p)? - vmin))
        }
    }))
}

/// Same norm for a point over Q(t) at a place of Q(t); exact order
/// arithmetic. `None` again encodes norm zero.
pub fn proj_norm_fun(coords: &[RatFunc], beta: &FunPlace) -> Result<Option<Rat>> {
    let n = coords.len() - 1;
    if coords[n].is_zero() {
        return Err(Error::OnHyperplane);
    }
    let mut best: Option<i64> = None;
    for c in &coords[..n] {
        if c.is_zero() {
            continue;
        }
        let val = -ord_at(c, beta)?;
        best = Some(best.map_or(val, |b: i64| b.max(val)));
    }
    match best {
        None => Ok(None),
        Some(b) => Ok(Some(rat_int(b + ord_at(&coords[n], beta)?))),
    }
}

/// Weil height of a rational number: ln max(|a|, b) for t = a/b in lowest
/// terms.
pub fn weil_height_rat(t: &Rat) -> Interval {
    let a = t.numer().abs();
    let b = t.denom().clone();
    let m = a.max(b);
    if m <= BigInt::from(1) {
        return Interval::ZERO;
    }
    ln_bigint_abs(&m)
}

/// All places of Q(t) where the given nonzero rational function has a zero
/// or a pole, paired with the order there. Infinity included when the
/// order there is nonzero. (Support of the principal divisor.)
pub fn principal_divisor(phi: &RatFunc) -> Result<Vec<(FunPlace, i64)>> {
    if phi.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let mut out = Vec::new();
    let (_, nf) = factor(phi.num())
        .unwrap_or((Rat::zero(), vec![]));
    for (g, m) in nf {
        out.push((FunPlace::finite(g), m as i64));
    }
    if !phi.den().is_constant() {
        let (_, df) = factor(phi.den())?;
        for (g, m) in df {
            let place = FunPlace::finite(g);
            match out.iter_mut().find(|(p, _)| *p == place) {
                Some(e) => e.1 -= m as i64,
                None => out.push((place, -(m as i64))),
            }
        }
    }
    let at_inf = ord_at(phi, &FunPlace::Infinity)?;
    if at_inf != 0 {
        out.push((FunPlace::Infinity, at_inf));
    }
    out.retain(|(_, m)| *m != 0);
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

/// ln p as an interval, for converting exact finite-place exponents.
pub fn ln_prime(p: &BigInt) -> Interval {
    ln_bigint_abs(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn tfrac(n: &[i64], d: &[i64]) -> RatFunc {
        RatFunc::new(Poly::from_ints(n), Poly::from_ints(d))
    }

    #[test]
    fn ord_at_examples() {
        // (t^2 - 1) / t
        let phi = tfrac(&[-1, 0, 1], &[0, 1]);
        let at_one = FunPlace::finite(Poly::from_ints(&[-1, 1]));
        let at_zero = FunPlace::finite(Poly::from_ints(&[0, 1]));
        assert_eq!(ord_at(&phi, &at_one).unwrap(), 1);
        assert_eq!(ord_at(&phi, &at_zero).unwrap(), -1);
        assert_eq!(ord_at(&phi, &FunPlace::Infinity).unwrap(), -1);
        assert_eq!(ord_at(&RatFunc::zero(), &FunPlace::Infinity), Err(Error::ZeroFunction));
    }

    #[test]
    fn log_abs_examples() {
        assert_eq!(
            log_abs(&rat_int(8), &NumPlace::finite(2)).unwrap(),
            LogVal::Exact(rat_int(-3))
        );
        match log_abs(&rat_int(1), &NumPlace::Arch).unwrap() {
            LogVal::Arch(i) => {
                assert!(i.contains(0.0));
                assert!(i.width() <= 2f64.powi(-40));
            }
            _ => panic!(),
        }
        assert_eq!(
            log_abs(&rat(1, 9), &NumPlace::finite(3)).unwrap(),
            LogVal::Exact(rat_int(2))
        );
    }

    #[test]
    fn proj_norm_examples() {
        let p = [rat_int(3), rat_int(1)];
        match proj_norm_num(&p, &NumPlace::Arch).unwrap().unwrap() {
            LogVal::Arch(i) => assert!(i.contains(3f64.ln())),
            _ => panic!(),
        }
        let p = [RatFunc::t(), RatFunc::one()];
        assert_eq!(
            proj_norm_fun(&p, &FunPlace::Infinity).unwrap(),
            Some(rat_int(1))
        );
        let p = [rat_int(6), rat_int(2)];
        assert_eq!(
            proj_norm_num(&p, &NumPlace::finite(2)).unwrap().unwrap(),
            LogVal::Exact(rat_int(0))
        );
        // scaling invariance: [6,2] = 2*[3,1]
        let q = [rat_int(3), rat_int(1)];
        assert_eq!(
            proj_norm_num(&q, &NumPlace::finite(2)).unwrap(),
            proj_norm_num(&p, &NumPlace::finite(2)).unwrap()
        );
        assert_eq!(
            proj_norm_num(&[rat_int(1), rat_int(0)], &NumPlace::Arch),
            Err(Error::OnHyperplane)
        );
        assert_eq!(proj_norm_num(&[rat_int(0), rat_int(5)], &NumPlace::Arch).unwrap(), None);
    }

    #[test]
    fn scaling_invariance_random() {
        use num_traits::One;
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for _ in 0..100 {
            let coords = [
                rat(rng.gen_range(-20..=20), rng.gen_range(1..=9)),
                rat(rng.gen_range(-20..=20), rng.gen_range(1..=9)),
                rat(rng.gen_range(1..=20), rng.gen_range(1..=9)),
            ];
            let c = rat(rng.gen_range(1..=30), rng.gen_range(1..=30));
            if c.is_zero() || c.is_one() {
                continue;
            }
            let scaled: Vec<Rat> = coords.iter().map(|x| x * &c).collect();
            for v in [NumPlace::finite(2), NumPlace::finite(3), NumPlace::finite(7)] {
                assert_eq!(
                    proj_norm_num(&coords, &v).unwrap(),
                    proj_norm_num(&scaled, &v).unwrap()
                );
            }
            // archimedean: identical enclosures up to widening
            let a = proj_norm_num(&coords, &NumPlace::Arch).unwrap();
            let b = proj_norm_num(&scaled, &NumPlace::Arch).unwrap();
            match (a, b) {
                (None, None) => {}
                (Some(LogVal::Arch(x)), Some(LogVal::Arch(y))) => {
                    assert!((x.mid() - y.mid()).abs() < 1e-11, "{x:?} vs {y:?}");
                }
                _ => panic!("kind mismatch"),
            }
        }
    }

    #[test]
    fn product_formula_funfield() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(23);
        for _ in 0..40 {
            let deg_n = rng.gen_range(0..=4);
            let deg_d = rng.gen_range(0..=4);
            let num = Poly::new((0..=deg_n).map(|_| rat_int(rng.gen_range(-5..=5))).collect());
            let den = Poly::new((0..=deg_d).map(|_| rat_int(rng.gen_range(-5..=5))).collect());
            if num.is_zero() || den.is_zero() {
                continue;
            }
            let phi = RatFunc::new(num, den);
            if phi.is_zero() {
                continue;
            }
            let total: i64 = principal_divisor(&phi)
                .unwrap()
                .iter()
                .map(|(place, m)| m * place.degree())
                .sum();
            assert_eq!(total, 0, "product formula failed for {phi}");
        }
    }

    #[test]
    fn product_formula_rationals() {
        use crate::exactnum::intfactor::factor_int;
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(31);
        for _ in 0..60 {
            let q = rat(rng.gen_range(-300..300), rng.gen_range(1..300));
            if q.is_zero() {
                continue;
            }
            let mut sum = ln_rat_abs(&q);
            let mut primes = factor_int(q.numer());
            for (p, _) in factor_int(q.denom()) {
                primes.entry(p).or_insert(0);
            }
            for (p, _) in primes {
                let v = vp(&q, &p).unwrap();
                sum = sum.add(&ln_bigint_abs(&p).mul(&Interval::point(-(v as f64))));
            }
            assert!(sum.contains(0.0), "product formula interval {sum:?} for {q}");
        }
    }
}
