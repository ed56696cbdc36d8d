//! Weil heights, local heights of divisors, canonical heights over Q as
//! sums of local Green's functions, preperiodicity certification, and the
//! constant-family closed form.

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::divisor::QDivisor;
use crate::endo::{Endo, Restriction};
use crate::error::{Error, Result};
use crate::exactnum::{
    canonical_proj_key, coprime_integer_coords, intfactor, rat_int, vp, Rat, RatFunc,
};
use crate::greens::{self, green_num, nullstellensatz_const};
use crate::interval::{ln_bigint_abs, rat_to_interval, Interval};
use crate::places::{ln_prime, FunPlace, LogVal, NumPlace};

/// Weil height of a point of P^N(Q): clear denominators to coprime
/// integers and take ln of the largest coordinate magnitude.
pub fn weil_height(point: &[Rat]) -> Interval {
    let ints = coprime_integer_coords(point);
    let m = ints.iter().map(|c| c.abs()).max().unwrap();
    if m.is_one() {
        Interval::ZERO
    } else {
        ln_bigint_abs(&m)
    }
}

/// The parameter argument of the divisor heights: a rational number or
/// the point at infinity of the base P^1.
#[derive(Clone, Debug, PartialEq)]
pub enum ParamValue {
    Rational(Rat),
    Infinity,
}

impl ParamValue {
    /// Coprime integer pair [a : b] (b = 0 encodes infinity).
    fn pair(&self) -> (BigInt, BigInt) {
        match self {
            ParamValue::Infinity => (BigInt::one(), BigInt::zero()),
            ParamValue::Rational(t) => (t.numer().clone(), t.denom().clone()),
        }
    }
}

/// Homogenized value G_beta(a, b) of the closed point's defining form.
fn point_form_value(place: &FunPlace, a: &BigInt, b: &BigInt) -> Rat {
    match place {
        FunPlace::Infinity => Rat::from_integer(b.clone()),
        FunPlace::Finite(g) => {
            let e = g.degree() as usize;
            let mut acc = Rat::zero();
            for (i, c) in g.coeffs().iter().enumerate() {
                let term = c * Rat::from_integer(a.pow(i as u32) * b.pow((e - i) as u32));
                acc += term;
            }
            acc
        }
    }
}

/// The canonical local height of `t0` relative to the divisor `d` at the
/// place `v`: for each closed point with homogenized form G of degree e,
/// `lambda = e log max(|a|_v, |b|_v) - log|G(a, b)|_v` on the coprime
/// integer pair (a, b), summed with the divisor's coefficients.
pub fn local_lambda(d: &QDivisor, v: &NumPlace, t0: &ParamValue) -> Result<LogVal> {
    let (a, b) = t0.pair();
    match v {
        NumPlace::Finite(p) => {
            let mut acc = Rat::zero();
            for (place, coeff) in d.entries() {
                let g_val = point_form_value(place, &a, &b);
                if g_val.is_zero() {
                    return Err(Error::PointInSupport);
                }
                // max(|a|_p, |b|_p) = 1 for a coprime pair, so only the
                // form value contributes
                let term = rat_int(vp(&g_val, p)?);
                acc += coeff * term;
            }
            Ok(LogVal::Exact(acc))
        }
        NumPlace::Arch => {
            let max_ab = a.abs().max(b.abs());
            let log_max = if max_ab.is_one() {
                Interval::ZERO
            } else {
                ln_bigint_abs(&max_ab)
            };
            let mut acc = Interval::ZERO;
            for (place, coeff) in d.entries() {
                let g_val = point_form_value(place, &a, &b);
                if g_val.is_zero() {
                    return Err(Error::PointInSupport);
                }
                let e = place.degree() as f64;
                let lam = log_max
                    .mul(&Interval::point(e))
                    .sub(&crate::interval::ln_rat_abs(&g_val));
                acc = acc.add(&lam.mul(&rat_to_interval(coeff)));
            }
            Ok(LogVal::Arch(acc))
        }
    }
}

/// h_{X,D}(t0): the sum of the local heights over the archimedean place
/// and the finitely many finite places with nonzero contribution (primes
/// dividing a form value).
pub fn h_x_d(d: &QDivisor, t0: &ParamValue) -> Result<Interval> {
    let (a, b) = t0.pair();
    let mut primes: BTreeSet<BigInt> = BTreeSet::new();
    for (place, _) in d.entries() {
        let g_val = point_form_value(place, &a, &b);
        if g_val.is_zero() {
            return Err(Error::PointInSupport);
        }
        primes.extend(intfactor::factor_int(g_val.numer()).into_keys());
        primes.extend(intfactor::factor_int(g_val.denom()).into_keys());
    }
    let mut acc = match local_lambda(d, &NumPlace::Arch, t0)? {
        LogVal::Arch(i) => i,
        _ => unreachable!(),
    };
    for p in primes {
        match local_lambda(d, &NumPlace::Finite(p.clone()), t0)? {
            LogVal::Exact(q) => {
                acc = acc.add(&rat_to_interval(&q).mul(&ln_prime(&p)));
            }
            _ => unreachable!(),
        }
    }
    Ok(acc)
}

/// The primes at which anything about (e, P) could be non-generic:
/// coefficient numerators and denominators, the restriction resultant,
/// and the coprime-integer coordinates of P. Over-approximation is safe;
/// every prime outside gets the exact good-reduction closed form.
pub fn bad_primes(e: &Endo<Rat>, point: &[Rat]) -> Result<BTreeSet<BigInt>> {
    let mut set = BTreeSet::new();
    for a in e.coeffs().values() {
        if a.is_zero() {
            continue;
        }
        set.extend(intfactor::factor_int(a.numer()).into_keys());
        set.extend(intfactor::factor_int(a.denom()).into_keys());
    }
    let r = restriction_resultant(e)?;
    set.extend(intfactor::factor_int(r.numer()).into_keys());
    set.extend(intfactor::factor_int(r.denom()).into_keys());
    let ints = coprime_integer_coords(point);
    if let Some(last) = ints.last() {
        set.extend(intfactor::factor_int(last).into_keys());
    }
    Ok(set)
}

fn restriction_resultant(e: &Endo<Rat>) -> Result<Rat> {
    e.restriction_to_h().resultant()
}

/// A certified canonical height value.
#[derive(Clone, Debug)]
pub struct HeightValue {
    pub enclosure: Interval,
}

impl HeightValue {
    pub fn mid(&self) -> f64 {
        self.enclosure.mid()
    }
}

/// Canonical height over Q as a finite sum of Green's functions: the
/// archimedean place, the over-approximated bad primes, and (through the
/// good-reduction closed form inside `green_num`) the primes dividing the
/// last coordinate. Points inside the invariant hyperplane go through
/// the restriction.
pub fn canonical_height(e: &Endo<Rat>, point: &[Rat], eps: f64) -> Result<HeightValue> {
    assert!(eps > 0.0);
    if point.last().unwrap().is_zero() {
        return hyperplane_height(e, point, eps);
    }
    let places = bad_primes(e, point)?;
    let eps_each = eps / (places.len() as f64 + 2.0);
    let mut acc = match green_num(e, point, &NumPlace::Arch, eps_each)?.value {
        LogVal::Arch(i) => i,
        _ => unreachable!(),
    };
    for p in places {
        let g = green_num(e, point, &NumPlace::Finite(p.clone()), eps_each)?;
        acc = match g.value {
            LogVal::Exact(q) => acc.add(&rat_to_interval(&q).mul(&ln_prime(&p))),
            LogVal::Arch(i) => acc.add(&i),
        };
    }
    // the height is nonnegative; trim interval dust below zero
    if acc.lo < 0.0 && acc.hi >= 0.0 {
        acc = Interval::new(0.0, acc.hi);
    }
    Ok(HeightValue { enclosure: acc })
}

/// Canonical height of a point inside the invariant hyperplane, computed
/// through the restriction: exact 0 for N = 1 (the point [1:0] is fixed),
/// the escape rate of the restriction pair for N = 2.
fn hyperplane_height(e: &Endo<Rat>, point: &[Rat], eps: f64) -> Result<HeightValue> {
    match e.restriction_to_h() {
        Restriction::Scalar(_) => Ok(HeightValue {
            enclosure: Interval::ZERO,
        }),
        Restriction::Pair { d, g0, g1 } => {
            let coords = coprime_integer_coords(&point[..2]);
            let mut places: BTreeSet<BigInt> = BTreeSet::new();
            for c in g0.iter().chain(g1.iter()) {
                if c.is_zero() {
                    continue;
                }
                places.extend(intfactor::factor_int(c.numer()).into_keys());
                places.extend(intfactor::factor_int(c.denom()).into_keys());
            }
            let r = crate::exactnum::resultant_binary_forms(&g0, &g1)?;
            places.extend(intfactor::factor_int(r.numer()).into_keys());
            places.extend(intfactor::factor_int(r.denom()).into_keys());
            places.extend(
                coords
                    .iter()
                    .flat_map(|c| intfactor::factor_int(c).into_keys()),
            );
            let eps_each = eps / (places.len() as f64 + 2.0);
            let rest = Restriction::Pair {
                d,
                g0: g0.clone(),
                g1: g1.clone(),
            };
            let c2_arch = match nullstellensatz_const(&rest, &NumPlace::Arch)? {
                LogVal::Arch(i) => i.hi,
                _ => unreachable!(),
            };
            let mut acc =
                greens::proj_escape_rate_arch(d, &g0, &g1, &coords, c2_arch, eps_each)?;
            for p in places {
                let c2_p = match nullstellensatz_const(&rest, &NumPlace::Finite(p.clone()))? {
                    LogVal::Exact(q) => q,
                    _ => unreachable!(),
                };
                let v = greens::proj_escape_rate_finite(d, &g0, &g1, &coords, &p, &c2_p, eps_each)?;
                acc = match v {
                    LogVal::Exact(q) => acc.add(&rat_to_interval(&q).mul(&ln_prime(&p))),
                    LogVal::Arch(i) => acc.add(&i),
                };
            }
            if acc.lo < 0.0 && acc.hi >= 0.0 {
                acc = Interval::new(0.0, acc.hi);
            }
            Ok(HeightValue { enclosure: acc })
        }
    }
}

/// Outcome of the exact preperiodicity decision.
#[derive(Clone, Debug)]
pub enum Preperiodicity {
    /// Revisited a point: tail then cycle, as canonical projective keys.
    Preperiodic {
        tail: Vec<Vec<BigInt>>,
        cycle: Vec<Vec<BigInt>>,
    },
    /// The orbit height passed the escape bound: canonical height is
    /// positive, certified by the recorded bound.
    Escapes {
        iterations: u32,
        height: f64,
        escape_bound: f64,
    },
}

impl Preperiodicity {
    pub fn is_preperiodic(&self) -> bool {
        matches!(self, Preperiodicity::Preperiodic { .. })
    }
}

/// `|hhat - h| <= bound` over all points: assembled from the per-place
/// comparison constants at the archimedean place and the bad primes
/// (everything vanishes elsewhere).
pub fn height_comparison_bound(e: &Endo<Rat>) -> Result<f64> {
    let dm1 = (e.degree() - 1) as f64;
    let mut total = Interval::ZERO;
    // archimedean
    let c = greens::constants(e, &NumPlace::Arch)?;
    let unpack = |l: &LogVal| match l {
        LogVal::Arch(i) => *i,
        LogVal::Exact(q) => rat_to_interval(q),
    };
    let b = unpack(&e.b_const_num(&NumPlace::Arch));
    let ccoef = unpack(&e.coeff_bound_num(&NumPlace::Arch));
    let e_arch = b
        .add(&unpack(&c.gamma))
        .log_plus_clamp()
        .max(&unpack(&c.c1).add(&ccoef).log_plus_clamp().scale(1.0 / dm1))
        .max(&unpack(&c.c4).scale(1.0 / dm1));
    total = total.add(&e_arch);
    // finite places: only the bad primes contribute
    let mut coeff_primes: BTreeSet<BigInt> = BTreeSet::new();
    for a in e.coeffs().values() {
        if a.is_zero() {
            continue;
        }
        coeff_primes.extend(intfactor::factor_int(a.numer()).into_keys());
        coeff_primes.extend(intfactor::factor_int(a.denom()).into_keys());
    }
    let r = restriction_resultant(e)?;
    coeff_primes.extend(intfactor::factor_int(r.numer()).into_keys());
    coeff_primes.extend(intfactor::factor_int(r.denom()).into_keys());
    for p in coeff_primes {
        let v = NumPlace::Finite(p.clone());
        let c = greens::constants(e, &v)?;
        let gamma = c.gamma.expect_exact().clone();
        let c4 = c.c4.expect_exact().clone();
        let b = match e.b_const_num(&v) {
            LogVal::Exact(q) => q,
            _ => unreachable!(),
        };
        let ccoef = match e.coeff_bound_num(&v) {
            LogVal::Exact(q) => q,
            _ => unreachable!(),
        };
        let dm1_rat = rat_int(e.degree() as i64 - 1);
        let mut worst = b + gamma;
        if worst.is_negative() {
            worst = Rat::zero();
        }
        let cand2 = if ccoef.is_positive() {
            ccoef / &dm1_rat
        } else {
            Rat::zero()
        };
        let cand3 = c4 / &dm1_rat;
        if cand2 > worst {
            worst = cand2;
        }
        if cand3 > worst {
            worst = cand3;
        }
        total = total.add(&rat_to_interval(&worst).mul(&ln_prime(&p)));
    }
    Ok(total.hi)
}

/// Exact preperiodicity decision by orbit enumeration with a seen set,
/// stopping as soon as the Weil height passes the escape bound (then the
/// canonical height is strictly positive). Always terminates: over Q a
/// non-preperiodic point has positive canonical height, so orbit heights
/// grow geometrically past any bound.
pub fn is_preperiodic(e: &Endo<Rat>, point: &[Rat]) -> Result<Preperiodicity> {
    // points inside the hyperplane: N = 1 means the fixed point [1:0]
    if point.last().unwrap().is_zero() && e.dim() == 1 {
        let key = canonical_proj_key(point);
        return Ok(Preperiodicity::Preperiodic {
            tail: vec![],
            cycle: vec![key],
        });
    }
    let escape_bound = if point.last().unwrap().is_zero() {
        // restriction escape bound: |hhat_g - h| <= sum_v C2_v/(d-1)
        hyperplane_escape_bound(e)?
    } else {
        height_comparison_bound(e)?
    };
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    let mut orbit: Vec<Vec<BigInt>> = Vec::new();
    let mut current: Vec<Rat> = point.to_vec();
    for n in 0..10_000u32 {
        let key = canonical_proj_key(&current);
        let key_bytes = encode_key(&key);
        if seen.contains(&key_bytes) {
            let pos = orbit.iter().position(|k| *k == key).unwrap();
            return Ok(Preperiodicity::Preperiodic {
                tail: orbit[..pos].to_vec(),
                cycle: orbit[pos..].to_vec(),
            });
        }
        let h = weil_height(&current);
        if h.lo > escape_bound {
            return Ok(Preperiodicity::Escapes {
                iterations: n,
                height: h.lo,
                escape_bound,
            });
        }
        seen.insert(key_bytes);
        orbit.push(key);
        current = e.apply(&current);
    }
    Err(Error::PrecisionFailure(
        "orbit neither repeated nor escaped within 10000 steps".into(),
    ))
}

fn hyperplane_escape_bound(e: &Endo<Rat>) -> Result<f64> {
    let rest = e.restriction_to_h();
    let dm1 = (e.degree() - 1) as f64;
    let mut total = match nullstellensatz_const(&rest, &NumPlace::Arch)? {
        LogVal::Arch(i) => i.scale(1.0 / dm1),
        _ => unreachable!(),
    };
    // the archimedean triangle-inequality constant also enters the upper
    // direction of the escape comparison
    let c1 = Interval::point((e.degree() as f64) + 1.0).ln();
    total = total.add(&c1.scale(1.0 / dm1));
    let mut primes: BTreeSet<BigInt> = BTreeSet::new();
    for c in rest.coefficients() {
        if c.is_zero() {
            continue;
        }
        primes.extend(intfactor::factor_int(c.numer()).into_keys());
        primes.extend(intfactor::factor_int(c.denom()).into_keys());
    }
    let r = rest.resultant()?;
    primes.extend(intfactor::factor_int(r.numer()).into_keys());
    primes.extend(intfactor::factor_int(r.denom()).into_keys());
    for p in primes {
        match nullstellensatz_const(&rest, &NumPlace::Finite(p.clone()))? {
            LogVal::Exact(q) => {
                let term = q / rat_int(e.degree() as i64 - 1);
                total = total.add(&rat_to_interval(&term).mul(&ln_prime(&p)));
            }
            _ => unreachable!(),
        }
    }
    Ok(total.hi)
}

fn encode_key(key: &[BigInt]) -> Vec<u8> {
    let mut out = Vec::new();
    for k in key {
        let bytes = k.to_signed_bytes_le();
        out.extend((bytes.len() as u32).to_le_bytes());
        out.extend(bytes);
    }
    out
}

/// Constant-family closed form: specializing a constant map just
/// evaluates the point, and the generic height is the degree of the
/// point map (max coordinate degree after clearing denominators).
pub struct IsotrivialValue {
    pub height: HeightValue,
    pub generic_degree: Rat,
}

pub fn isotrivial_height(
    e: &Endo<Rat>,
    point: &[RatFunc],
    t0: &Rat,
    eps: f64,
) -> Result<IsotrivialValue> {
    let normalized = greens::normalize_fun_coords(point);
    let generic_degree = rat_int(
        normalized
            .iter()
            .map(|c| c.num().degree())
            .max()
            .unwrap(),
    );
    let specialized: Result<Vec<Rat>> = normalized.iter().map(|c| c.eval(t0)).collect();
    let height = canonical_height(e, &specialized?, eps)?;
    Ok(IsotrivialValue {
        height,
        generic_degree,
    })
}

/// Degree of the point map P : P^1 -> P^N (generic Weil height of P_eta).
pub fn generic_point_degree(point: &[RatFunc]) -> Rat {
    let normalized = greens::normalize_fun_coords(point);
    rat_int(
        normalized
            .iter()
            .map(|c| c.num().degree())
            .max()
            .unwrap(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::endo::build;
    use crate::exactnum::{rat, Poly};
    use crate::places::weil_height_rat;

    #[test]
    fn weil_height_examples() {
        let h = weil_height(&[rat(3, 2), rat_int(1)]);
        assert!(h.contains(3f64.ln()));
        assert_eq!(weil_height(&[rat_int(0), rat_int(1)]), Interval::ZERO);
        let h = weil_height(&[rat_int(5), rat_int(10), rat_int(1)]);
        assert!(h.contains(10f64.ln()));
    }

    #[test]
    fn local_lambda_examples() {
        let mut d = QDivisor::new();
        d.insert(FunPlace::Infinity, rat_int(1));
        // arch at t0 = 5: ln 5
        match local_lambda(&d, &NumPlace::Arch, &ParamValue::Rational(rat_int(5))).unwrap() {
            LogVal::Arch(i) => assert!(i.contains(5f64.ln())),
            _ => panic!(),
        }
        // finite 5 at t0 = 5: [5:1] has coprime pair, form value 1
        assert_eq!(
            local_lambda(&d, &NumPlace::finite(5), &ParamValue::Rational(rat_int(5))).unwrap(),
            LogVal::Exact(Rat::zero())
        );
        // divisor [t] at p = 2, t0 = 1/4: form value a = 1, no contribution
        let mut dt = QDivisor::new();
        dt.insert(FunPlace::finite(Poly::t()), rat_int(1));
        assert_eq!(
            local_lambda(&dt, &NumPlace::finite(2), &ParamValue::Rational(rat(1, 4))).unwrap(),
            LogVal::Exact(Rat::zero())
        );
        // and the same divisor at t0 = 4/1, p = 2: G(4, 1) = 4, lambda = 2
        assert_eq!(
            local_lambda(&dt, &NumPlace::finite(2), &ParamValue::Rational(rat_int(4))).unwrap(),
            LogVal::Exact(rat_int(2))
        );
        // support detection
        assert_eq!(
            local_lambda(&dt, &NumPlace::Arch, &ParamValue::Rational(Rat::zero())).err(),
            Some(Error::PointInSupport)
        );
    }

    #[test]
    fn h_x_d_examples() {
        let mut d = QDivisor::new();
        d.insert(FunPlace::Infinity, rat(1, 2));
        // (1/2)[inf] at t0 = 7: (1/2) ln 7
        let h = h_x_d(&d, &ParamValue::Rational(rat_int(7))).unwrap();
        assert!(h.contains(0.5 * 7f64.ln()), "{h:?}");
        // t0 = 3/2: local terms are arch ln(3/2), at 2 ln 2, at 3 zero;
        // total (1/2) ln 3
        let h = h_x_d(&d, &ParamValue::Rational(rat(3, 2))).unwrap();
        assert!(h.contains(0.5 * 3f64.ln()), "{h:?}");
        // [inf] at t0 = 0: zero
        let mut d1 = QDivisor::new();
        d1.insert(FunPlace::Infinity, rat_int(1));
        let h = h_x_d(&d1, &ParamValue::Rational(Rat::zero())).unwrap();
        assert!(h.contains(0.0) && h.width() < 1e-12);
    }

    #[test]
    fn h_x_d_equals_degree_times_height() {
        // with the canonical local heights the sum telescopes to
        // deg(D) h(t) exactly; check on a mixed divisor
        let mut d = QDivisor::new();
        d.insert(FunPlace::Infinity, rat(1, 2));
        d.insert(FunPlace::finite(Poly::from_ints(&[1, 0, 1])), rat(1, 3));
        let deg = d.degree();
        for t in [rat_int(7), rat(3, 2), rat(-22, 7), rat(1, 30)] {
            let h = h_x_d(&d, &ParamValue::Rational(t.clone())).unwrap();
            let expect = rat_to_interval(&deg).mul(&weil_height_rat(&t));
            assert!(
                h.lo <= expect.hi && expect.lo <= h.hi,
                "mismatch at t = {t}: {h:?} vs {expect:?}"
            );
        }
    }

    #[test]
    fn canonical_height_monomial_is_weil() {
        let e = build::monomial(1, 2);
        let h = canonical_height(&e, &[rat_int(2), rat_int(1)], 1e-9).unwrap();
        assert!(h.enclosure.contains(2f64.ln()));
        assert!(h.enclosure.width() <= 1e-9);
    }

    #[test]
    fn canonical_height_preperiodic_is_zero() {
        let e = build::unicritical(2, rat_int(-1));
        let h = canonical_height(&e, &[rat_int(0), rat_int(1)], 1e-8).unwrap();
        assert!(h.enclosure.lo >= 0.0 && h.enclosure.hi <= 1e-8, "{:?}", h.enclosure);
    }

    #[test]
    fn canonical_height_positive_case_two_tolerances() {
        let e = build::unicritical(2, rat_int(1));
        let h1 = canonical_height(&e, &[rat_int(0), rat_int(1)], 1e-6).unwrap();
        let h2 = canonical_height(&e, &[rat_int(0), rat_int(1)], 1e-9).unwrap();
        assert!(h1.enclosure.width() <= 1e-6);
        assert!(h2.enclosure.width() <= 1e-9);
        // same value: the finer enclosure sits inside a slightly padded
        // coarse one (independent places are re-summed, so exact nesting
        // is not guaranteed, overlap is)
        assert!(h1.enclosure.lo <= h2.enclosure.hi && h2.enclosure.lo <= h1.enclosure.hi);
    }

    #[test]
    fn preperiodic_examples() {
        let e = build::unicritical(2, rat_int(-1));
        match is_preperiodic(&e, &[rat_int(0), rat_int(1)]).unwrap() {
            Preperiodicity::Preperiodic { cycle, tail } => {
                assert!(tail.is_empty());
                assert_eq!(cycle.len(), 2); // {0, -1}
            }
            _ => panic!("0 is periodic under x^2 - 1"),
        }
        let e = build::unicritical(2, rat_int(1));
        match is_preperiodic(&e, &[rat_int(0), rat_int(1)]).unwrap() {
            Preperiodicity::Escapes { height, escape_bound, .. } => {
                assert!(height > escape_bound);
            }
            _ => panic!("0 escapes under x^2 + 1"),
        }
        let e = build::unicritical(2, rat_int(-2));
        match is_preperiodic(&e, &[rat_int(0), rat_int(1)]).unwrap() {
            Preperiodicity::Preperiodic { tail, cycle } => {
                assert_eq!(tail.len(), 2); // 0 -> -2, then 2 fixed
                assert_eq!(cycle.len(), 1);
            }
            _ => panic!("0 is preperiodic under x^2 - 2"),
        }
    }

    #[test]
    fn preperiodic_iff_height_zero() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        for _ in 0..25 {
            let c = rat(rng.gen_range(-6..=6), rng.gen_range(1..=3));
            let x = rat(rng.gen_range(-6..=6), rng.gen_range(1..=3));
            let e = build::unicritical(2, c.clone());
            let p = [x.clone(), rat_int(1)];
            let pre = is_preperiodic(&e, &p).unwrap().is_preperiodic();
            let h = canonical_height(&e, &p, 1e-8).unwrap();
            if pre {
                assert!(h.enclosure.contains(0.0) || h.enclosure.hi <= 1e-8,
                    "preperiodic but hhat = {:?} (c = {c}, x = {x})", h.enclosure);
            } else {
                assert!(h.enclosure.hi > 0.0,
                    "escaping but hhat = {:?} (c = {c}, x = {x})", h.enclosure);
            }
        }
    }

    #[test]
    fn isotrivial_examples() {
        let e = build::monomial(1, 2);
        let p = vec![RatFunc::t(), RatFunc::one()];
        let v = isotrivial_height(&e, &p, &rat_int(7), 1e-9).unwrap();
        assert!(v.height.enclosure.contains(7f64.ln()));
        assert_eq!(v.generic_degree, rat_int(1));

        let p2 = vec![&RatFunc::t() * &RatFunc::t(), RatFunc::one()];
        let v = isotrivial_height(&e, &p2, &rat_int(3), 1e-9).unwrap();
        assert!(v.height.enclosure.contains(2.0 * 3f64.ln()));
        assert_eq!(v.generic_degree, rat_int(2));

        let e = build::unicritical(2, rat_int(-1));
        let p = vec![RatFunc::t(), RatFunc::one()];
        let v = isotrivial_height(&e, &p, &Rat::zero(), 1e-8).unwrap();
        assert!(v.height.enclosure.hi <= 1e-8);
        assert_eq!(v.generic_degree, rat_int(1));
    }

    #[test]
    fn hyperplane_point_heights() {
        // N = 1: the point [1:0] is fixed, height 0
        let e = build::unicritical(2, rat_int(3));
        let h = canonical_height(&e, &[rat_int(1), rat_int(0)], 1e-9).unwrap();
        assert_eq!(h.enclosure, Interval::ZERO);
        // N = 2 monomial: point [2:1:0] restricts to [2:1] under (x^2, y^2),
        // escape rate ln 2
        let e = build::monomial(2, 2);
        let h = canonical_height(&e, &[rat_int(2), rat_int(1), rat_int(0)], 1e-8).unwrap();
        assert!(h.enclosure.contains(2f64.ln()), "{:?}", h.enclosure);
    }

    #[test]
    fn hyperplane_point_with_bad_restriction_prime() {
        // restriction (x^2 - y^2, x^2 + y^2) has resultant 4, so p = 2 is
        // a bad prime for the escape rate; verify against the direct
        // limit: |hhat - d^{-n} h(g^n Q)| <= d^{-n} sum_v C2_v/(d-1)
        use crate::endo::MultiIndex;
        use std::collections::BTreeMap;
        let mut coeffs = BTreeMap::new();
        coeffs.insert((0, MultiIndex(vec![2, 0, 0])), rat_int(1));
        coeffs.insert((0, MultiIndex(vec![0, 2, 0])), rat_int(-1));
        coeffs.insert((1, MultiIndex(vec![2, 0, 0])), rat_int(1));
        coeffs.insert((1, MultiIndex(vec![0, 2, 0])), rat_int(1));
        let e = Endo::new(2, 2, coeffs).unwrap();
        let p = [rat_int(1), rat_int(2), rat_int(0)];
        let h = canonical_height(&e, &p, 1e-8).unwrap();
        assert!(h.enclosure.width() <= 1e-8);

        // independent oracle: iterate the pair exactly and compare
        let g = |q: &[Rat; 2]| -> [Rat; 2] {
            let x2 = &q[0] * &q[0];
            let y2 = &q[1] * &q[1];
            [&x2 - &y2, &x2 + &y2]
        };
        let mut q = [rat_int(1), rat_int(2)];
        for _ in 0..6 {
            q = g(&q);
        }
        let hn = weil_height(&q).mid() / 64.0;
        // sum of C2 bounds over arch and the only bad prime 2
        let rest = e.restriction_to_h();
        let c2_arch = match nullstellensatz_const(&rest, &NumPlace::Arch).unwrap() {
            LogVal::Arch(i) => i.hi,
            _ => panic!(),
        };
        let c2_two = match nullstellensatz_const(&rest, &NumPlace::finite(2)).unwrap() {
            LogVal::Exact(v) => rat_to_interval(&v).mul(&ln_prime(&BigInt::from(2))).hi,
            _ => panic!(),
        };
        let tolerance = (c2_arch + c2_two) / 64.0;
        assert!(
            (h.mid() - hn).abs() <= tolerance + 1e-7,
            "hhat {} vs direct limit {hn} (tolerance {tolerance})",
            h.mid()
        );
    }

    #[test]
    fn functoriality_hhat_of_f_p() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(21);
        for _ in 0..10 {
            let c = rat_int(rng.gen_range(-5..=5));
            let e = build::unicritical(2, c);
            let p = [rat_int(rng.gen_range(-5..=5)), rat_int(1)];
            let fp = e.apply(&p);
            let eps = 1e-8;
            let h1 = canonical_height(&e, &p, eps).unwrap();
            let h2 = canonical_height(&e, &fp, eps).unwrap();
            let diff = (h2.mid() - 2.0 * h1.mid()).abs();
            assert!(diff <= 3.0 * eps, "functoriality violated: {diff}");
        }
    }
}
