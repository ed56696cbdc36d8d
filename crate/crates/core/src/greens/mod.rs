//! Certified dynamical Green's functions.
//!
//! Three computation paths:
//! * [`green_num`] at the archimedean place — interval-certified
//!   renormalized orbit iteration on dyadic intervals;
//! * [`green_num`] at a finite place — exact order arithmetic, switching
//!   to fixed-precision p-adic coordinates when orbit integers grow;
//! * [`green_fun`] at places of Q(t) for fibral families — exact rational
//!   values, since every comparison constant vanishes there.
//!
//! The constants C1..C4 and the threshold gamma come from explicit
//! triangle-inequality and Nullstellensatz certificates; see
//! [`nullstellensatz_const`].

mod arch;
pub mod dyadic;
mod nonarch;

use num_traits::{One, Signed, Zero};

use crate::endo::{Endo, FamilyInstance, Restriction};
use crate::error::{Error, Result};
use crate::exactnum::{rat_int, solve_linear, vp, Poly, Rat, RatFunc};
use crate::interval::{ln_rat_abs, rat_to_interval, Interval};
use crate::places::{proj_norm_fun, FunPlace, LogVal, NumPlace};

pub use arch::proj_escape_rate_arch;
pub use nonarch::proj_escape_rate_finite;

/// Per-place comparison constants for one endomorphism.
///
/// Invariants: `gamma >= max(c1 + c2 + c3, c4 / (d-1))` and `gamma >= 0`;
/// at non-archimedean places `c1 = c3 = 0`; and
/// `c4 = max(c3 + max(c1 - gamma, c2), c2 + c3)`, which the construction
/// below collapses to `c4 = c2 + c3` since `gamma >= c1`.
#[derive(Clone, Debug)]
pub struct GreenConstants {
    pub c1: LogVal,
    pub c2: LogVal,
    pub c3: LogVal,
    pub c4: LogVal,
    pub gamma: LogVal,
}

/// One post-threshold enclosure of a Green's value, natural-log units.
#[derive(Clone, Copy, Debug)]
pub struct TraceStep {
    /// absolute iteration count at which the enclosure was formed
    pub n: u32,
    pub lo: f64,
    pub hi: f64,
}

/// A certified Green's function value.
///
/// `value` is exact (`LogVal::Exact`) only on the function-field path and
/// on finite-place paths where every comparison constant vanishes; units
/// then follow the place (vanishing order, or exponent of log p).
#[derive(Clone, Debug)]
pub struct GreenResult {
    pub value: LogVal,
    pub iterations_used: u32,
    pub crossed_threshold: bool,
    /// post-threshold enclosures, recorded for convergence audits
    pub trace: Vec<TraceStep>,
}

impl GreenResult {
    fn exact(q: Rat, n: u32, crossed: bool) -> GreenResult {
        GreenResult {
            value: LogVal::Exact(q),
            iterations_used: n,
            crossed_threshold: crossed,
            trace: Vec::new(),
        }
    }
}

/// The Nullstellensatz comparison constant C2 for the hyperplane
/// restriction `g`: a certified bound with
/// `|d log max|P_i| - log max|g_i(P)|| <= C2` for all points P of
/// P^{N-1}.
///
/// For a pair of binary forms the lower direction is witnessed by forms
/// u_i, w_i of degree d-1 with u_i g0 + w_i g1 = R x_i^{2d-1} (R the
/// resultant), solved exactly; the returned constant is the maximum of
/// the two one-sided bounds so the inequality holds by construction.
pub fn nullstellensatz_const(g: &Restriction<Rat>, v: &NumPlace) -> Result<LogVal> {
    match g {
        Restriction::Scalar(a) => {
            if a.is_zero() {
                return Err(Error::SingularRestriction);
            }
            Ok(match v {
                NumPlace::Finite(p) => LogVal::Exact(rat_int(vp(a, p)?.abs())),
                NumPlace::Arch => LogVal::Arch(ln_rat_abs(a).abs()),
            })
        }
        Restriction::Pair { d, g0, g1 } => {
            let cert = certificate(*d, g0, g1)?;
            Ok(match v {
                NumPlace::Finite(p) => {
                    // log-p units; log|x|_p = -vp(x)
                    let log_abs_max = |xs: &[&Rat]| -> Rat {
                        xs.iter()
                            .filter(|x| !x.is_zero())
                            .map(|x| rat_int(-vp(x, p).unwrap()))
                            .max()
                            .unwrap_or_else(Rat::zero)
                    };
                    let a_g = log_abs_max(&g0.iter().chain(g1.iter()).collect::<Vec<_>>());
                    let lower = cert
                        .pairs
                        .iter()
                        .map(|(u, w)| log_abs_max(&u.iter().chain(w.iter()).collect::<Vec<_>>()))
                        .max()
                        .unwrap()
                        + rat_int(vp(&cert.resultant, p)?);
                    let mut c2 = Rat::zero();
                    if a_g > c2 {
                        c2 = a_g;
                    }
                    if lower > c2 {
                        c2 = lower;
                    }
                    LogVal::Exact(c2)
                }
                NumPlace::Arch => {
                    let sum_abs = |xs: &[Rat]| -> Interval {
                        let mut acc = Interval::ZERO;
                        for x in xs {
                            acc = acc.add(&rat_to_interval(&x.abs()));
                        }
                        acc
                    };
                    let upper = sum_abs(g0).max(&sum_abs(g1)).ln_weak();
                    let mut lower = Interval::point(f64::NEG_INFINITY);
                    for (u, w) in &cert.pairs {
                        let t = sum_abs(u).add(&sum_abs(w)).ln_weak();
                        lower = lower.max(&t);
                    }
                    lower = lower.sub(&ln_rat_abs(&cert.resultant));
                    LogVal::Arch(upper.max(&lower).log_plus_clamp())
                }
            })
        }
    }
}

/// Nullstellensatz certificate data for a pair of binary forms.
pub struct NullstellensatzCert {
    pub resultant: Rat,
    /// (u_i, w_i) with u_i g0 + w_i g1 = resultant * x_i^(2d-1), i = 0, 1;
    /// coefficient index is the power of x_0.
    pub pairs: Vec<(Vec<Rat>, Vec<Rat>)>,
}

/// Solve for the certificate forms by exact linear algebra.
pub fn certificate(d: u32, g0: &[Rat], g1: &[Rat]) -> Result<NullstellensatzCert> {
    let d = d as usize;
    assert_eq!(g0.len(), d + 1);
    assert_eq!(g1.len(), d + 1);
    let n = 2 * d;
    // (u, w) |-> u g0 + w g1 on coefficient vectors; row m is the
    // coefficient of x0^m x1^(2d-1-m).
    let mut m = vec![vec![Rat::zero(); n]; n];
    for (row, mrow) in m.iter_mut().enumerate() {
        for j in 0..d {
            if row >= j && row - j <= d {
                mrow[j] = g0[row - j].clone();
            }
            if row >= j && row - j <= d {
                mrow[d + j] = g1[row - j].clone();
            }
        }
    }
    let r = crate::exactnum::resultant_binary_forms(g0, g1)?;
    if r.is_zero() {
        return Err(Error::SingularRestriction);
    }
    let mut pairs = Vec::new();
    for target in [n - 1, 0] {
        let mut rhs = vec![Rat::zero(); n];
        rhs[target] = r.clone();
        let sol = solve_linear(m.clone(), rhs).ok_or(Error::SingularRestriction)?;
        let u = sol[..d].to_vec();
        let w = sol[d..].to_vec();
        debug_assert!(verify_certificate(d, g0, g1, &u, &w, &r, target));
        pairs.push((u, w));
    }
    Ok(NullstellensatzCert { resultant: r, pairs })
}

fn verify_certificate(
    d: usize,
    g0: &[Rat],
    g1: &[Rat],
    u: &[Rat],
    w: &[Rat],
    r: &Rat,
    target: usize,
) -> bool {
    let n = 2 * d;
    let mut acc = vec![Rat::zero(); n];
    for (j, uj) in u.iter().enumerate() {
        for (i, gi) in g0.iter().enumerate() {
            acc[i + j] += uj * gi;
        }
    }
    for (j, wj) in w.iter().enumerate() {
        for (i, gi) in g1.iter().enumerate() {
            acc[i + j] += wj * gi;
        }
    }
    acc.iter()
        .enumerate()
        .all(|(i, c)| if i == target { c == r } else { c.is_zero() })
}

/// Number of degree-d monomials in n_vars variables: binom(n_vars-1+d, d).
fn monomial_count(n_vars: usize, d: u32) -> u64 {
    let mut num = 1u64;
    let mut den = 1u64;
    for k in 1..=(n_vars as u64 - 1) {
        num *= d as u64 + k;
        den *= k;
    }
    num / den
}

/// Assemble the comparison constants of an endomorphism at a place of Q.
///
/// gamma is the minimal value meeting the two proof constraints
/// gamma >= c1 + c2 + c3 and gamma >= c4 / (d - 1); with gamma >= c1 the
/// constant c4 collapses to c2 + c3.
pub fn constants(e: &Endo<Rat>, v: &NumPlace) -> Result<GreenConstants> {
    let c2 = nullstellensatz_const(&e.restriction_to_h(), v)?;
    let dm1 = (e.degree() - 1) as f64;
    Ok(match v {
        NumPlace::Finite(_) => {
            let c2q = c2.expect_exact().clone();
            let c4 = c2q.clone();
            let gamma_a = c2q.clone();
            let gamma_b = c4.clone() / rat_int(e.degree() as i64 - 1);
            let gamma = if gamma_a >= gamma_b { gamma_a } else { gamma_b };
            GreenConstants {
                c1: LogVal::zero_exact(),
                c2: LogVal::Exact(c2q),
                c3: LogVal::zero_exact(),
                c4: LogVal::Exact(c4),
                gamma: LogVal::Exact(gamma),
            }
        }
        NumPlace::Arch => {
            let c1 = Interval::point(monomial_count(e.dim() + 1, e.degree()) as f64).ln();
            let c3 = Interval::ln2();
            let c2i = match &c2 {
                LogVal::Arch(i) => *i,
                LogVal::Exact(_) => unreachable!(),
            };
            let c4 = c2i.add(&c3);
            let gamma = c1.add(&c2i).add(&c3).max(&c4.scale(1.0 / dm1));
            GreenConstants {
                c1: LogVal::Arch(c1),
                c2,
                c3: LogVal::Arch(c3),
                c4: LogVal::Arch(c4),
                gamma: LogVal::Arch(gamma),
            }
        }
    })
}

/// Certified Green's function value G_{f,v}(P) for an endomorphism over Q
/// at a place of Q, enclosure width at most `eps` (natural log).
pub fn green_num(e: &Endo<Rat>, point: &[Rat], v: &NumPlace, eps: f64) -> Result<GreenResult> {
    assert!(eps > 0.0, "eps must be positive");
    if point.last().unwrap().is_zero() {
        return Err(Error::OnHyperplane);
    }
    match v {
        NumPlace::Arch => arch::green_arch(e, point, eps),
        NumPlace::Finite(p) => nonarch::green_finite(e, point, p, eps, false),
    }
}

/// Like [`green_num`] at a finite place but with the good-reduction fast
/// path disabled, so the orbit actually iterates. Cross-validation hook
/// for the closed form; not part of the normal API surface.
#[doc(hidden)]
pub fn green_num_force_iteration(
    e: &Endo<Rat>,
    point: &[Rat],
    p: &num_bigint::BigInt,
    eps: f64,
) -> Result<GreenResult> {
    if point.last().unwrap().is_zero() {
        return Err(Error::OnHyperplane);
    }
    nonarch::green_finite(e, point, p, eps, true)
}

/// Exact Green's function value of a fibral family at a place of Q(t).
///
/// Fibrality makes every comparison constant vanish at every place
/// (the restriction has constant coefficients, so its resultant and
/// certificate entries are units), hence a threshold crossing yields the
/// value exactly; `Inconclusive` is surfaced when no crossing occurs
/// within `n_max` steps.
pub fn green_fun(fam: &FamilyInstance, beta: &FunPlace, n_max: u32) -> Result<GreenResult> {
    if !fam.endo.is_fibral() {
        return Err(Error::NotFibral);
    }
    if fam.point.last().unwrap().is_zero() {
        return Err(Error::PointInHyperplane);
    }
    let d = fam.endo.degree();
    let b = fam.endo.b_const_fun(beta);

    if b.is_zero() {
        // Good reduction at beta: no coefficient pole, constants vanish,
        // so G = log+ |P|_beta with no iteration.
        let x = proj_norm_fun(&fam.point, beta)?;
        let val = match x {
            Some(q) if q.is_positive() => q,
            _ => Rat::zero(),
        };
        let crossed = !val.is_zero();
        return Ok(GreenResult::exact(val, 0, crossed));
    }

    let mut coords = normalize_fun_coords(&fam.point);
    let mut scale = Rat::one();
    let d_rat = rat_int(d as i64);
    for n in 0..=n_max {
        let x = proj_norm_fun(&coords, beta)?;
        if let Some(q) = x {
            if q > b {
                let value = q / scale.clone();
                // values lie in Z[1/d^n] with n the iteration count
                debug_assert!((value.clone() * scale).is_integer());
                return Ok(GreenResult::exact(value, n, true));
            }
        }
        if n == n_max {
            break;
        }
        coords = normalize_fun_coords(&fam.endo.apply(&coords));
        let max_deg = coords
            .iter()
            .map(|c| c.num().degree().max(c.den().degree()))
            .max()
            .unwrap();
        if max_deg > 20_000 {
            return Err(Error::PrecisionFailure(format!(
                "orbit degree {max_deg} exceeds the iteration budget at {beta}"
            )));
        }
        scale *= d_rat.clone();
    }
    Err(Error::Inconclusive {
        place: beta.to_string(),
        n_max,
    })
}

/// Clear denominators and content: a polynomial representative with
/// coprime coordinates, same projective point.
pub fn normalize_fun_coords(coords: &[RatFunc]) -> Vec<RatFunc> {
    let mut den_lcm = Poly::one();
    for c in coords {
        if c.is_zero() {
            continue;
        }
        let g = den_lcm.gcd(c.den());
        den_lcm = &(&den_lcm * c.den()) / &g;
    }
    let polys: Vec<Poly> = coords
        .iter()
        .map(|c| {
            if c.is_zero() {
                Poly::zero()
            } else {
                c.num() * &(&den_lcm / c.den())
            }
        })
        .collect();
    let mut g = Poly::zero();
    for p in &polys {
        if p.is_zero() {
            continue;
        }
        g = if g.is_zero() { p.clone() } else { g.gcd(p) };
    }
    polys
        .into_iter()
        .map(|p| {
            if p.is_zero() {
                RatFunc::zero()
            } else {
                RatFunc::from_poly(&p / &g)
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::endo::build;
    use crate::exactnum::rat;

    #[test]
    fn nullstellensatz_scalar_cases() {
        // monomial restriction: unit certificate
        let g = Restriction::Scalar(rat_int(1));
        assert_eq!(
            nullstellensatz_const(&g, &NumPlace::finite(7)).unwrap(),
            LogVal::Exact(Rat::zero())
        );
        let g = Restriction::Scalar(rat_int(3));
        match nullstellensatz_const(&g, &NumPlace::Arch).unwrap() {
            LogVal::Arch(i) => assert!(i.contains(3f64.ln())),
            _ => panic!(),
        }
    }

    #[test]
    fn nullstellensatz_pair_unit_case() {
        // (x^2, y^2): resultant 1, integral unit certificate, C2 = 0 at
        // every finite place
        let g0 = vec![rat_int(0), rat_int(0), rat_int(1)];
        let g1 = vec![rat_int(1), rat_int(0), rat_int(0)];
        let g = Restriction::Pair { d: 2, g0, g1 };
        for p in [2u64, 3, 5, 101] {
            assert_eq!(
                nullstellensatz_const(&g, &NumPlace::finite(p)).unwrap(),
                LogVal::Exact(Rat::zero())
            );
        }
    }

    /// Brute-force oracle for the defining inequality of C2 at a finite
    /// place: |d log max|P| - log max|g(P)||_p <= C2 (log-p units).
    fn check_c2_inequality_finite(d: u32, g0: &[Rat], g1: &[Rat], p: u64, c2: &Rat) {
        use rand::{Rng, SeedableRng};
        let pb = num_bigint::BigInt::from(p);
        let mut rng = rand::rngs::StdRng::seed_from_u64(1234);
        let eval = |form: &[Rat], a: &Rat, b: &Rat| -> Rat {
            let mut acc = Rat::zero();
            for (i, c) in form.iter().enumerate() {
                acc += c * a.pow(i as i32) * b.pow((d as usize - i) as i32);
            }
            acc
        };
        for _ in 0..100 {
            let a = rat(rng.gen_range(-40..=40), rng.gen_range(1..=12));
            let b = rat(rng.gen_range(-40..=40), rng.gen_range(1..=12));
            if a.is_zero() && b.is_zero() {
                continue;
            }
            let va = if a.is_zero() { i64::MAX } else { vp(&a, &pb).unwrap() };
            let vb = if b.is_zero() { i64::MAX } else { vp(&b, &pb).unwrap() };
            let logmax_p = rat_int(-va.min(vb));
            let ga = eval(g0, &a, &b);
            let gb = eval(g1, &a, &b);
            if ga.is_zero() && gb.is_zero() {
                continue;
            }
            let vga = if ga.is_zero() { i64::MAX } else { vp(&ga, &pb).unwrap() };
            let vgb = if gb.is_zero() { i64::MAX } else { vp(&gb, &pb).unwrap() };
            let logmax_g = rat_int(-vga.min(vgb));
            let diff = logmax_p * rat_int(d as i64) - logmax_g;
            assert!(
                diff.abs() <= *c2,
                "inequality violated at ({a},{b}): |{diff}| > {c2}"
            );
        }
    }

    #[test]
    fn nullstellensatz_pair_derived_case() {
        // (x^2 - y^2, x^2 + y^2): resultant 4; the certificate forms are
        // (2x, 2x) and (-2y, 2y), so the constructed constant at p = 2 is
        // max(0, A_g, A_cert + v2(R)) = max(0, 0, -1 + 2) = 1, and the
        // defining inequality holds (tight at P = (1,1)).
        let g0 = vec![rat_int(-1), rat_int(0), rat_int(1)];
        let g1 = vec![rat_int(1), rat_int(0), rat_int(1)];
        let cert = certificate(2, &g0, &g1).unwrap();
        assert_eq!(cert.resultant, rat_int(4));
        let g = Restriction::Pair { d: 2, g0: g0.clone(), g1: g1.clone() };
        let c2 = match nullstellensatz_const(&g, &NumPlace::finite(2)).unwrap() {
            LogVal::Exact(q) => q,
            _ => panic!(),
        };
        assert_eq!(c2, rat_int(1));
        check_c2_inequality_finite(2, &g0, &g1, 2, &c2);
        // odd places: unit data, constant 0
        for p in [3u64, 5, 7] {
            let c = match nullstellensatz_const(&g, &NumPlace::finite(p)).unwrap() {
                LogVal::Exact(q) => q,
                _ => panic!(),
            };
            check_c2_inequality_finite(2, &g0, &g1, p, &c);
        }
    }

    #[test]
    fn nullstellensatz_random_inequality() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(77);
        let mut tested = 0;
        while tested < 10 {
            let d = 2;
            let mk = |rng: &mut rand::rngs::StdRng| -> Vec<Rat> {
                (0..=d).map(|_| rat_int(rng.gen_range(-5..=5))).collect()
            };
            let g0 = mk(&mut rng);
            let g1 = mk(&mut rng);
            let g = Restriction::Pair { d: d as u32, g0: g0.clone(), g1: g1.clone() };
            if g.validate().is_err() {
                continue;
            }
            tested += 1;
            for p in [2u64, 3, 5] {
                let c2 = match nullstellensatz_const(&g, &NumPlace::finite(p)).unwrap() {
                    LogVal::Exact(q) => q,
                    _ => panic!(),
                };
                check_c2_inequality_finite(d as u32, &g0, &g1, p, &c2);
            }
        }
    }

    #[test]
    fn constants_examples() {
        // x^2 at a finite place: everything vanishes
        let e = build::monomial(1, 2);
        let c = constants(&e, &NumPlace::finite(5)).unwrap();
        assert_eq!(c.c2, LogVal::zero_exact());
        assert_eq!(c.c4, LogVal::zero_exact());
        assert_eq!(c.gamma, LogVal::zero_exact());

        // x^2 + c, integer c: restriction is x0^2 regardless of c
        let e = build::unicritical(2, rat_int(17));
        let c = constants(&e, &NumPlace::finite(3)).unwrap();
        assert_eq!(c.gamma, LogVal::zero_exact());

        // x^2 at the archimedean place: C1 = ln 3, C3 = ln 2, C2 = 0,
        // C4 = ln 2, gamma = ln 6 (hand evaluation of the constraints)
        let e = build::monomial(1, 2);
        let c = constants(&e, &NumPlace::Arch).unwrap();
        let unpack = |l: &LogVal| match l {
            LogVal::Arch(i) => *i,
            _ => panic!(),
        };
        assert!(unpack(&c.c1).contains(3f64.ln()));
        assert!(unpack(&c.c3).contains(2f64.ln()));
        assert!(unpack(&c.c2).contains(0.0) && unpack(&c.c2).width() < 1e-12);
        assert!(unpack(&c.c4).contains(2f64.ln()));
        assert!(unpack(&c.gamma).contains(6f64.ln()));
    }

    #[test]
    fn green_fun_x2_plus_t() {
        let fam = FamilyInstance::new(
            build::unicritical_family(2, RatFunc::t()),
            vec![RatFunc::t(), RatFunc::one()],
        )
        .unwrap();
        // log|P|_inf = 1 > B_inf = 1/2: crossing at n = 0, value exactly 1
        let g = green_fun(&fam, &FunPlace::Infinity, 8).unwrap();
        assert_eq!(g.value, LogVal::Exact(rat_int(1)));
        assert_eq!(g.iterations_used, 0);
        assert!(g.crossed_threshold);

        // P = [0:1]: one application moves it to [t:1], so G = 1/2
        let fam0 = FamilyInstance::new(
            build::unicritical_family(2, RatFunc::t()),
            vec![RatFunc::zero(), RatFunc::one()],
        )
        .unwrap();
        let g = green_fun(&fam0, &FunPlace::Infinity, 8).unwrap();
        assert_eq!(g.value, LogVal::Exact(rat(1, 2)));
        assert_eq!(g.iterations_used, 1);

        // at t = 3 nothing has a pole: good reduction, G = 0
        let fam1 = FamilyInstance::new(
            build::unicritical_family(2, RatFunc::t()),
            vec![RatFunc::one(), RatFunc::one()],
        )
        .unwrap();
        let beta = FunPlace::finite(Poly::from_ints(&[-3, 1]));
        let g = green_fun(&fam1, &beta, 8).unwrap();
        assert_eq!(g.value, LogVal::Exact(Rat::zero()));
    }

    #[test]
    fn green_fun_inconclusive_surfaced() {
        // family with coefficient pole at t = 0 but a point whose orbit
        // stays small there: x^2 + 1/t at P = [1 : 1] has B_0 = 1/2 and
        // log|P|_0 = 0; after one step the orbit acquires a pole, so the
        // crossing does occur. Use instead the fixed point [1:0]-free case:
        // P = [0 : 1] maps to [1/t : 1] which crosses. A genuinely
        // inconclusive case needs cancellation; use n_max = 0 to force the
        // error path instead.
        let c = RatFunc::new(Poly::one(), Poly::t());
        let fam = FamilyInstance::new(
            build::unicritical_family(2, c),
            vec![RatFunc::one(), RatFunc::one()],
        )
        .unwrap();
        let beta = FunPlace::finite(Poly::t());
        match green_fun(&fam, &beta, 0) {
            Err(Error::Inconclusive { .. }) => {}
            other => panic!("expected Inconclusive, got {other:?}"),
        }
        // with room to iterate it crosses
        let g = green_fun(&fam, &beta, 8).unwrap();
        assert_eq!(g.value, LogVal::Exact(rat(1, 2)));
    }

    #[test]
    fn green_fun_values_lie_in_z_inv_d() {
        // every value is a rational with denominator dividing d^iterations
        let fam = FamilyInstance::new(
            build::baker_demarco_family(2),
            vec![RatFunc::one(), RatFunc::from_int(2), RatFunc::one()],
        )
        .unwrap();
        let g = green_fun(&fam, &FunPlace::Infinity, 16).unwrap();
        let val = g.value.expect_exact().clone();
        let dpow = rat_int(2).pow(g.iterations_used as i32);
        assert!((val * dpow).is_integer());
    }

    #[test]
    fn green_fun_homogeneity() {
        // G(f(P)) = d G(P), exactly
        let f = build::unicritical_family(2, RatFunc::t());
        let p = vec![RatFunc::zero(), RatFunc::one()];
        let fp = f.apply(&p);
        let fam_p = FamilyInstance::new(f.clone(), p).unwrap();
        let fam_fp = FamilyInstance::new(f, fp).unwrap();
        let gp = green_fun(&fam_p, &FunPlace::Infinity, 8).unwrap();
        let gfp = green_fun(&fam_fp, &FunPlace::Infinity, 8).unwrap();
        assert_eq!(
            gfp.value.expect_exact().clone(),
            gp.value.expect_exact().clone() * rat_int(2)
        );
    }
}
