//! Desk-scale verification harness: specialization scans comparing fiber
//! canonical heights against the divisor height, per-place comparisons,
//! and preperiodic parameter searches.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::divisor::{build_divisor, QDivisor};
use crate::endo::FamilyInstance;
use crate::error::{Error, Result};
use crate::exactnum::{rat_int, Rat};
use crate::greens::green_num;
use crate::heights::{canonical_height, is_preperiodic, local_lambda, ParamValue, Preperiodicity};
use crate::interval::{rat_to_interval, Interval};
use crate::places::{ln_prime, weil_height_rat, LogVal, NumPlace};

/// Options shared by the scan entry points.
#[derive(Clone, Debug)]
pub struct ScanOptions {
    pub eps: f64,
    pub n_max: u32,
    pub threads: usize,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            eps: 1e-8,
            n_max: 64,
            threads: 1,
        }
    }
}

/// Why a parameter value was skipped rather than computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SkipReason {
    PoleOfData,
    DegenerateFiber,
    InSupport,
    PointInHyperplane,
}

impl SkipReason {
    pub fn flag(&self) -> &'static str {
        match self {
            SkipReason::PoleOfData => "skip:pole",
            SkipReason::DegenerateFiber => "skip:degenerate",
            SkipReason::InSupport => "skip:support",
            SkipReason::PointInHyperplane => "skip:hyperplane",
        }
    }
}

/// One computed fiber of the scan.
#[derive(Clone, Debug)]
pub struct ScanRow {
    pub t: Rat,
    pub hhat: Interval,
    pub h_weil: Interval,
    /// hhat - deg(D) h(t), certified
    pub delta: Interval,
}

/// A row of the full scan output: either computed or skipped.
#[derive(Clone, Debug)]
pub enum ScanEntry {
    Row(ScanRow),
    Skipped(Rat, SkipReason),
}

/// A verified preperiodic parameter.
#[derive(Clone, Debug)]
pub struct PreperiodicHit {
    pub t: Rat,
    pub tail: Vec<String>,
    pub cycle: Vec<String>,
}

/// Scan summary: rows in enumeration order, extremes of delta midpoints,
/// and the preperiodic parameters encountered.
#[derive(Debug)]
pub struct ScanReport {
    pub divisor: QDivisor,
    pub degree: Rat,
    pub entries: Vec<ScanEntry>,
    pub sup_delta: f64,
    pub inf_delta: f64,
    pub max_delta_width: f64,
    pub preperiodic_hits: Vec<PreperiodicHit>,
}

impl ScanReport {
    pub fn rows(&self) -> impl Iterator<Item = &ScanRow> {
        self.entries.iter().filter_map(|e| match e {
            ScanEntry::Row(r) => Some(r),
            ScanEntry::Skipped(..) => None,
        })
    }
}

/// All rational t with ln max(|num|, den) <= bound, ordered by
/// max(|num|, den), then numerator, then denominator.
pub fn enumerate_rationals(h_bound: f64) -> Vec<Rat> {
    // largest m with ln m <= bound; exp can round to either side of an
    // integer, so settle the boundary explicitly
    let mut m = h_bound.exp().round().max(0.0) as i64;
    while m > 0 && (m as f64).ln() > h_bound + 1e-12 {
        m -= 1;
    }
    while ((m + 1) as f64).ln() <= h_bound + 1e-12 {
        m += 1;
    }
    let mut out = Vec::new();
    for height in 1..=m {
        let mut level: Vec<(i64, i64)> = Vec::new();
        // denominator = height: |num| < height (coprime)
        for num in -height..=height {
            if num.abs() == height {
                continue;
            }
            if num.gcd(&height) == 1 {
                level.push((num, height));
            }
        }
        // |numerator| = height: den < height, plus den = 1
        for den in 1..=height {
            if den == height && height != 1 {
                continue;
            }
            if height.gcd(&den) == 1 {
                level.push((height, den));
                level.push((-height, den));
            }
        }
        level.sort_by_key(|&(n, d)| (n, d));
        level.dedup();
        for (n, d) in level {
            out.push(rat_int(n) / rat_int(d));
        }
    }
    out
}

/// Bad fibers, data poles, and divisor support for a family; parameters
/// in this set are skipped by the scans.
fn skip_reason(fam: &FamilyInstance, d: &QDivisor, t: &Rat) -> Option<SkipReason> {
    if d.supports_rational(t) {
        return Some(SkipReason::InSupport);
    }
    match fam.specialize(t) {
        Err(Error::PoleAtParameter) => return Some(SkipReason::PoleOfData),
        Err(Error::DegenerateFiber) => return Some(SkipReason::DegenerateFiber),
        Err(_) | Ok(_) => {}
    }
    None
}

fn compute_row(
    fam: &FamilyInstance,
    d: &QDivisor,
    degree: &Rat,
    t: &Rat,
    eps: f64,
) -> Result<ScanEntry> {
    if let Some(reason) = skip_reason(fam, d, t) {
        return Ok(ScanEntry::Skipped(t.clone(), reason));
    }
    let (endo, point) = fam.specialize(t)?;
    if point.last().unwrap().is_zero() {
        return Ok(ScanEntry::Skipped(t.clone(), SkipReason::PointInHyperplane));
    }
    let hhat = canonical_height(&endo, &point, eps)?;
    let h_weil = weil_height_rat(t);
    let delta = hhat
        .enclosure
        .sub(&rat_to_interval(degree).mul(&h_weil));
    Ok(ScanEntry::Row(ScanRow {
        t: t.clone(),
        hhat: hhat.enclosure,
        h_weil,
        delta,
    }))
}

/// Scan all rational parameters of height up to `h_bound`: canonical
/// height of the fiber versus deg(D) times the parameter height.
pub fn scan_specializations(
    fam: &FamilyInstance,
    h_bound: f64,
    opts: &ScanOptions,
) -> Result<ScanReport> {
    let divisor = build_divisor(fam, opts.n_max).map_err(|e| match e {
        Error::Inconclusive { place, n_max } => {
            Error::DegenerateFamily(format!("inconclusive Green value at {place} (n_max = {n_max})"))
        }
        other => other,
    })?;
    let degree = divisor.degree();
    let ts = enumerate_rationals(h_bound);

    let entries: Vec<ScanEntry> = if opts.threads > 1 {
        parallel_rows(fam, &divisor, &degree, &ts, opts)
    } else {
        ts.iter()
            .map(|t| compute_row(fam, &divisor, &degree, t, opts.eps))
            .collect::<Result<Vec<_>>>()?
    };

    let mut sup = f64::NEG_INFINITY;
    let mut inf = f64::INFINITY;
    let mut max_width: f64 = 0.0;
    let mut hits = Vec::new();
    for entry in &entries {
        if let ScanEntry::Row(r) = entry {
            sup = sup.max(r.delta.mid());
            inf = inf.min(r.delta.mid());
            max_width = max_width.max(r.delta.width());
        }
    }
    // preperiodic parameters among the computed rows
    for entry in &entries {
        if let ScanEntry::Row(r) = entry {
            let (endo, point) = fam.specialize(&r.t)?;
            if let Preperiodicity::Preperiodic { tail, cycle } = is_preperiodic(&endo, &point)? {
                hits.push(PreperiodicHit {
                    t: r.t.clone(),
                    tail: tail.iter().map(|k| format_key(k)).collect(),
                    cycle: cycle.iter().map(|k| format_key(k)).collect(),
                });
            }
        }
    }
    Ok(ScanReport {
        divisor,
        degree,
        entries,
        sup_delta: sup,
        inf_delta: inf,
        max_delta_width: max_width,
        preperiodic_hits: hits,
    })
}

fn parallel_rows(
    fam: &FamilyInstance,
    divisor: &QDivisor,
    degree: &Rat,
    ts: &[Rat],
    opts: &ScanOptions,
) -> Vec<ScanEntry> {
    let threads = opts.threads.min(ts.len().max(1));
    let mut slots: Vec<Option<ScanEntry>> = vec![None; ts.len()];
    std::thread::scope(|scope| {
        let chunks: Vec<_> = slots.chunks_mut(ts.len().div_ceil(threads)).collect();
        let mut offset = 0;
        for chunk in chunks {
            let start = offset;
            offset += chunk.len();
            let ts = &ts[start..start + chunk.len()];
            scope.spawn(move || {
                for (slot, t) in chunk.iter_mut().zip(ts) {
                    *slot = Some(
                        compute_row(fam, divisor, degree, t, opts.eps)
                            .unwrap_or(ScanEntry::Skipped(t.clone(), SkipReason::DegenerateFiber)),
                    );
                }
            });
        }
    });
    slots.into_iter().map(|s| s.unwrap()).collect()
}

fn format_key(key: &[BigInt]) -> String {
    let parts: Vec<String> = key.iter().map(|k| k.to_string()).collect();
    format!("[{}]", parts.join(":"))
}

/// Result of a per-place comparison of the fiber Green's function against
/// the divisor's local height.
#[derive(Clone, Debug)]
pub struct PerPlaceReport {
    pub p: BigInt,
    pub samples_used: usize,
    pub max_abs_delta: f64,
    /// true when every sampled difference was exactly zero (exact kinds
    /// on both sides)
    pub exactly_zero: bool,
}

/// Compare G_{f_t, p}(P_t) with lambda_{D, p}(t) over the samples;
/// outside the family's bad primes both sides agree exactly.
pub fn per_place_test(
    fam: &FamilyInstance,
    p: &BigInt,
    t_samples: &[Rat],
    opts: &ScanOptions,
) -> Result<PerPlaceReport> {
    let divisor = build_divisor(fam, opts.n_max)?;
    let place = NumPlace::Finite(p.clone());
    let mut max_abs: f64 = 0.0;
    let mut exactly_zero = true;
    let mut used = 0;
    for t in t_samples {
        if skip_reason(fam, &divisor, t).is_some() {
            continue;
        }
        let (endo, point) = fam.specialize(t)?;
        if point.last().unwrap().is_zero() {
            continue;
        }
        used += 1;
        let g = green_num(&endo, &point, &place, opts.eps)?;
        let lam = local_lambda(&divisor, &place, &ParamValue::Rational(t.clone()))?;
        match (&g.value, &lam) {
            (LogVal::Exact(a), LogVal::Exact(b)) => {
                if a != b {
                    exactly_zero = false;
                    let diff = rat_to_interval(&(a - b)).mul(&ln_prime(p));
                    max_abs = max_abs.max(diff.abs().hi);
                }
            }
            _ => {
                exactly_zero = false;
                let gi = g.value.to_natural(&ln_prime(p));
                let li = lam.to_natural(&ln_prime(p));
                max_abs = max_abs.max(gi.sub(&li).abs().hi);
            }
        }
    }
    Ok(PerPlaceReport {
        p: p.clone(),
        samples_used: used,
        max_abs_delta: max_abs,
        exactly_zero,
    })
}

/// The primes at which the family's data is non-generic: primes dividing
/// any rational coefficient of the family's coefficient functions or
/// point coordinates, the restriction resultant, or a divisor form value.
pub fn family_bad_primes(fam: &FamilyInstance) -> Result<BTreeSet<BigInt>> {
    use crate::exactnum::intfactor::factor_int;
    let mut set = BTreeSet::new();
    let mut rationals: Vec<Rat> = Vec::new();
    for c in fam.endo.coeffs().values() {
        rationals.extend(c.num().coeffs().iter().cloned());
        rationals.extend(c.den().coeffs().iter().cloned());
    }
    for c in &fam.point {
        rationals.extend(c.num().coeffs().iter().cloned());
        rationals.extend(c.den().coeffs().iter().cloned());
    }
    let r = fam.endo.restriction_to_h().resultant()?;
    if let Some(c) = r.as_constant() {
        rationals.push(c);
    } else {
        rationals.extend(r.num().coeffs().iter().cloned());
        rationals.extend(r.den().coeffs().iter().cloned());
    }
    for q in rationals {
        if q.is_zero() {
            continue;
        }
        set.extend(factor_int(q.numer()).into_keys());
        set.extend(factor_int(q.denom()).into_keys());
    }
    Ok(set)
}

/// Exact preperiodicity scan over all rational parameters of bounded
/// height.
pub fn preperiodic_scan(
    fam: &FamilyInstance,
    h_bound: f64,
) -> Result<(Vec<PreperiodicHit>, usize)> {
    let mut hits = Vec::new();
    let mut tested = 0;
    for t in enumerate_rationals(h_bound) {
        // only data poles and degenerate fibers block specialization
        let (endo, point) = match fam.specialize(&t) {
            Ok(v) => v,
            Err(Error::PoleAtParameter) | Err(Error::DegenerateFiber) => continue,
            Err(e) => return Err(e),
        };
        tested += 1;
        if let Preperiodicity::Preperiodic { tail, cycle } = is_preperiodic(&endo, &point)? {
            hits.push(PreperiodicHit {
                t,
                tail: tail.iter().map(|k| format_key(k)).collect(),
                cycle: cycle.iter().map(|k| format_key(k)).collect(),
            });
        }
    }
    Ok((hits, tested))
}

/// CSV serialization of a scan report; byte-deterministic for fixed
/// inputs.
pub fn scan_to_csv(report: &ScanReport) -> String {
    let mut out = String::from("t_num,t_den,hhat_lo,hhat_hi,h_weil,delta_mid,delta_width,flags\n");
    for entry in &report.entries {
        match entry {
            ScanEntry::Row(r) => {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},ok\n",
                    r.t.numer(),
                    r.t.denom(),
                    r.hhat.lo,
                    r.hhat.hi,
                    r.h_weil.mid(),
                    r.delta.mid(),
                    r.delta.width(),
                ));
            }
            ScanEntry::Skipped(t, reason) => {
                out.push_str(&format!(
                    "{},{},,,,,,{}\n",
                    t.numer(),
                    t.denom(),
                    reason.flag()
                ));
            }
        }
    }
    out
}

/// JSON report of a scan; metadata records the options for
/// reproducibility.
pub fn scan_to_json(report: &ScanReport, h_bound: f64, opts: &ScanOptions) -> serde_json::Value {
    let skipped: Vec<serde_json::Value> = report
        .entries
        .iter()
        .filter_map(|e| match e {
            ScanEntry::Skipped(t, reason) => Some(serde_json::json!({
                "t": t.to_string(),
                "reason": reason.flag(),
            })),
            _ => None,
        })
        .collect();
    serde_json::json!({
        "options": {
            "eps": opts.eps,
            "nmax": opts.n_max,
            "hbound": h_bound,
            "threads": opts.threads,
        },
        "divisor": report.divisor.to_json(),
        "degree": report.degree.to_string(),
        "generic_height": report.degree.to_string(),
        "rows_computed": report.rows().count(),
        "skipped": skipped,
        "sup_delta": report.sup_delta,
        "inf_delta": report.inf_delta,
        "max_delta_width": report.max_delta_width,
        "preperiodic_hits": report.preperiodic_hits.iter().map(|h| serde_json::json!({
            "t": h.t.to_string(),
            "tail": h.tail,
            "cycle": h.cycle,
        })).collect::<Vec<_>>(),
    })
}

/// Sample parameters for per-place testing: the first `count` enumerated
/// rationals that are neither poles nor support points.
pub fn sample_parameters(fam: &FamilyInstance, count: usize, opts: &ScanOptions) -> Result<Vec<Rat>> {
    let divisor = build_divisor(fam, opts.n_max)?;
    let mut out = Vec::new();
    for t in enumerate_rationals(6.0) {
        if out.len() >= count {
            break;
        }
        if skip_reason(fam, &divisor, &t).is_none() {
            let (_, point) = fam.specialize(&t)?;
            if !point.last().unwrap().is_zero() {
                out.push(t);
            }
        }
    }
    Ok(out)
}

/// First `count` primes not in the family's bad set.
pub fn good_primes(fam: &FamilyInstance, count: usize) -> Result<Vec<BigInt>> {
    let bad = family_bad_primes(fam)?;
    let mut out = Vec::new();
    let mut p = BigInt::from(2);
    while out.len() < count {
        if crate::exactnum::intfactor::is_prime(&p) && !bad.contains(&p) {
            out.push(p.clone());
        }
        p += 1;
    }
    Ok(out)
}
