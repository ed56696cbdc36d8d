//! Archimedean Green's function engine.
//!
//! Orbit coordinates grow doubly exponentially, so the iteration runs on
//! renormalized dyadic intervals: big-integer mantissas rounded outward
//! at a working precision, exact binary exponents. A run that cannot
//! certify (chaotic bounded orbits wash out mantissa bits) restarts with
//! more precision. Every reported value is a certified enclosure.

use num_bigint::BigInt;
use num_traits::Signed;

use super::dyadic::{ln_max_abs, DyInterval};
use super::{GreenConstants, GreenResult, TraceStep};
use crate::endo::Endo;
use crate::error::{Error, Result};
use crate::exactnum::{coprime_integer_coords, Rat};
use crate::interval::{rat_to_interval, Interval};
use crate::places::{LogVal, NumPlace};

const MAX_ITER: u32 = 400;
const START_PREC: u32 = 128;
const MAX_PREC: u32 = 8_192;

/// Sum of |a_{i,I}| over stored coefficients with I_N = d - 1 (the linear
/// pull toward the superattracting point) and with I_N <= d - 2.
fn attraction_sums(e: &Endo<Rat>) -> (f64, f64) {
    let d = e.degree();
    let mut a1 = Interval::ZERO;
    let mut a2 = Interval::ZERO;
    for ((_, idx), a) in e.coeffs() {
        let last = idx.last();
        let term = rat_to_interval(&a.abs());
        if last == d - 1 {
            a1 = a1.add(&term);
        } else if last <= d.saturating_sub(2) {
            a2 = a2.add(&term);
        }
    }
    (a1.hi, a2.hi)
}

struct ArchParams {
    threshold_hi: f64,
    tail_hi: f64,
    cprime_hi: f64,
    no_pure: bool,
    a1_hi: f64,
    a2_hi: f64,
}

pub(super) fn green_arch(e: &Endo<Rat>, point: &[Rat], eps: f64) -> Result<GreenResult> {
    let consts = super::constants(e, &NumPlace::Arch)?;
    let dm1 = (e.degree() - 1) as f64;
    let unpack = |l: &LogVal| match l {
        LogVal::Arch(i) => *i,
        LogVal::Exact(_) => unreachable!("archimedean constants are intervals"),
    };
    let GreenConstants { c1, c4, gamma, .. } = &consts;
    let b = unpack(&e.b_const_num(&NumPlace::Arch));
    let ccoef = unpack(&e.coeff_bound_num(&NumPlace::Arch));
    let (a1_hi, a2_hi) = attraction_sums(e);
    let params = ArchParams {
        threshold_hi: b.add(&unpack(gamma)).hi,
        tail_hi: unpack(c4).hi / dm1,
        cprime_hi: (unpack(c1).add(&ccoef).hi / dm1).max(0.0),
        no_pure: e.pure_last_terms_vanish(),
        a1_hi,
        a2_hi,
    };
    let start = coprime_integer_coords(point);
    let mut prec = START_PREC;
    loop {
        match run_arch(e, &start, eps, prec, &params)? {
            Some(res) => return Ok(res),
            None => {
                prec *= 4;
                if prec > MAX_PREC {
                    return Err(Error::PrecisionFailure(format!(
                        "archimedean Green iteration stalled below eps = {eps}"
                    )));
                }
            }
        }
    }
}

/// One attempt at fixed dyadic precision; Ok(None) requests a restart.
fn run_arch(
    e: &Endo<Rat>,
    start: &[BigInt],
    eps: f64,
    prec: u32,
    params: &ArchParams,
) -> Result<Option<GreenResult>> {
    let n_coords = e.dim();
    let d = e.degree();
    let coeff_dy: Vec<(usize, Vec<u32>, DyInterval)> = e
        .coeffs()
        .iter()
        .map(|((i, idx), a)| (*i, idx.0.clone(), DyInterval::from_rat(a, prec)))
        .collect();

    let mut coords: Vec<DyInterval> = start.iter().map(DyInterval::from_bigint).collect();
    let mut scale = Interval::point(1.0);
    let d_iv = Interval::point(d as f64);
    let mut crossed = false;
    let mut enclosure: Option<Interval> = None;
    let mut trace = Vec::new();

    for n in 0..MAX_ITER {
        let lead = &coords[..n_coords];
        let x: Option<Interval> = if lead.iter().all(|c| c.hi.is_zero() && c.lo.is_zero()) {
            None
        } else {
            let last_ln = coords[n_coords].abs().ln();
            Some(ln_max_abs(lead).sub(&last_ln))
        };

        match x {
            None => {
                // exactly the point [0 : ... : 0 : 1]
                if params.no_pure {
                    // fixed and superattracting: G = 0 exactly
                    return Ok(Some(GreenResult {
                        value: LogVal::Arch(Interval::ZERO),
                        iterations_used: n,
                        crossed_threshold: false,
                        trace,
                    }));
                }
            }
            Some(x) => {
                if x.lo.is_finite() && x.width() > 60.0 {
                    return Ok(None); // mantissa bits exhausted, restart wider
                }
                if !crossed && x.lo > params.threshold_hi {
                    crossed = true;
                }
                if crossed {
                    let enc = x
                        .add(&Interval::new(-params.tail_hi, params.tail_hi))
                        .mul(&scale);
                    let enc = match enclosure {
                        Some(prev) => prev.intersect(&enc),
                        None => enc,
                    };
                    trace.push(TraceStep {
                        n,
                        lo: enc.lo,
                        hi: enc.hi,
                    });
                    enclosure = Some(enc);
                    if enc.width() <= eps {
                        return Ok(Some(GreenResult {
                            value: LogVal::Arch(enc),
                            iterations_used: n,
                            crossed_threshold: true,
                            trace,
                        }));
                    }
                } else if x.hi.is_finite() {
                    // unconditional upper bound on the remaining limit
                    let bound = (x.hi.max(0.0) + params.cprime_hi) * scale.hi;
                    if bound <= eps {
                        return Ok(Some(GreenResult {
                            value: LogVal::Arch(Interval::new(0.0, bound.max(0.0))),
                            iterations_used: n,
                            crossed_threshold: false,
                            trace,
                        }));
                    }
                    // certified contraction into the superattracting point
                    if params.no_pure {
                        let sigma = params.a1_hi + params.a2_hi * x.hi.exp();
                        if sigma < 1.0 && x.hi < 0.0 {
                            return Ok(Some(GreenResult {
                                value: LogVal::Arch(Interval::ZERO),
                                iterations_used: n,
                                crossed_threshold: false,
                                trace,
                            }));
                        }
                    }
                }
            }
        }

        // advance: w_i = f_i(coords), w_N = last^d, then renormalize by an
        // exact power of two
        let mut w = vec![DyInterval::zero(); n_coords + 1];
        for (i, exps, a) in &coeff_dy {
            let mut term = a.clone();
            for (k, &ek) in exps.iter().enumerate() {
                if ek > 0 {
                    term = term.mul(&coords[k].pow(ek, prec), prec);
                }
            }
            w[*i] = w[*i].add(&term, prec);
        }
        w[n_coords] = coords[n_coords].pow(d, prec);
        let k = w.iter().map(|c| c.mag_msb()).max().unwrap();
        if k == i64::MIN {
            return Err(Error::PrecisionFailure(
                "orbit collapsed to the zero vector".into(),
            ));
        }
        if k.unsigned_abs() > 1 << 55 {
            return Err(Error::PrecisionFailure(
                "binary exponent overflow in archimedean orbit".into(),
            ));
        }
        coords = w.iter().map(|c| c.scale_exp(-k)).collect();
        scale = scale.div(&d_iv);
    }
    Ok(None)
}

/// Escape rate of a pair of binary forms acting on P^1 under the max
/// norm: certified enclosure of lim d^{-n} log || g^n(Q) ||_max for the
/// exact integer lift `q`. Unconditional convergence with tail constant
/// `c2_hi / (d-1)`; used for points inside the invariant hyperplane.
pub fn proj_escape_rate_arch(
    d: u32,
    g0: &[Rat],
    g1: &[Rat],
    q: &[BigInt],
    c2_hi: f64,
    eps: f64,
) -> Result<Interval> {
    assert_eq!(q.len(), 2);
    let dm1 = (d - 1) as f64;
    let tail = c2_hi / dm1;
    let mut prec = START_PREC;
    loop {
        match run_escape_arch(d, g0, g1, q, tail, eps, prec)? {
            Some(enc) => return Ok(enc),
            None => {
                prec *= 4;
                if prec > MAX_PREC {
                    return Err(Error::PrecisionFailure(
                        "escape-rate iteration stalled".into(),
                    ));
                }
            }
        }
    }
}

fn run_escape_arch(
    d: u32,
    g0: &[Rat],
    g1: &[Rat],
    q: &[BigInt],
    tail: f64,
    eps: f64,
    prec: u32,
) -> Result<Option<Interval>> {
    let g0_dy: Vec<DyInterval> = g0.iter().map(|c| DyInterval::from_rat(c, prec)).collect();
    let g1_dy: Vec<DyInterval> = g1.iter().map(|c| DyInterval::from_rat(c, prec)).collect();
    let mut u = [DyInterval::from_bigint(&q[0]), DyInterval::from_bigint(&q[1])];
    // t_acc encloses d^{-n} log lambda_n for the exact renormalizers
    let mut t_acc = Interval::ZERO;
    let mut scale = Interval::point(1.0);
    let d_iv = Interval::point(d as f64);
    let ln2 = Interval::ln2();
    let mut enclosure: Option<Interval> = None;
    for _ in 0..MAX_ITER {
        let sup_ln = ln_max_abs(&u);
        if sup_ln.lo.is_finite() && sup_ln.width() > 60.0 {
            return Ok(None);
        }
        let est = t_acc.add(&sup_ln.mul(&scale));
        let enc = est.add(&Interval::new(-tail, tail).mul(&scale));
        let enc = match enclosure {
            Some(prev) => prev.intersect(&enc),
            None => enc,
        };
        enclosure = Some(enc);
        if enc.width() <= eps {
            return Ok(Some(enc));
        }
        let eval = |form: &[DyInterval]| -> DyInterval {
            let mut acc = DyInterval::zero();
            for (i, c) in form.iter().enumerate() {
                let term = c
                    .mul(&u[0].pow(i as u32, prec), prec)
                    .mul(&u[1].pow(d - i as u32, prec), prec);
                acc = acc.add(&term, prec);
            }
            acc
        };
        let w = [eval(&g0_dy), eval(&g1_dy)];
        let k = w[0].mag_msb().max(w[1].mag_msb());
        if k == i64::MIN {
            return Err(Error::PrecisionFailure(
                "escape orbit collapsed to zero".into(),
            ));
        }
        u = [w[0].scale_exp(-k), w[1].scale_exp(-k)];
        scale = scale.div(&d_iv);
        // lambda_{n+1} = lambda_n^d 2^k
        t_acc = t_acc.add(&ln2.mul(&Interval::point(k as f64)).mul(&scale));
    }
    Ok(None)
}
