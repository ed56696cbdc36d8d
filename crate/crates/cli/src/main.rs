//! Command-line surface: parse family files, dispatch computations, emit
//! CSV and JSON reports.
//!
//! Exit codes: 0 success, 2 inconclusive or degenerate data, 1 error.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand};

use fibral::divisor::{build_divisor, QDivisor};
use fibral::error::Error;
use fibral::exactnum::Rat;
use fibral::family::{parse_family, FamilySpec};
use fibral::greens::{green_fun, green_num, GreenResult};
use fibral::harness::{
    per_place_test, preperiodic_scan, sample_parameters, scan_specializations, scan_to_csv,
    scan_to_json, ScanOptions,
};
use fibral::heights::canonical_height;
use fibral::places::{FunPlace, LogVal, NumPlace};

#[derive(Parser)]
#[command(
    name = "fibral",
    about = "Certified Green's functions, canonical heights, and specialization divisors for fibral families"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Green's function value: of the family at a place of Q(t), or of a
    /// specialized fiber at a place of Q (with --t)
    Green {
        family: PathBuf,
        /// place: "inf" or a polynomial in t (family), "arch" or a prime
        /// (fiber, needs --t)
        #[arg(long, default_value = "inf")]
        place: String,
        /// specialize at t and compute at a place of Q
        #[arg(long)]
        t: Option<String>,
        #[arg(long, default_value_t = 1e-8)]
        eps: f64,
        #[arg(long, default_value_t = 64)]
        nmax: u32,
    },
    /// Canonical height of the fiber at t
    Hhat {
        family: PathBuf,
        #[arg(long)]
        t: String,
        #[arg(long, default_value_t = 1e-8)]
        eps: f64,
    },
    /// Specialization divisor and its degree
    Divisor {
        family: PathBuf,
        #[arg(long, default_value_t = 64)]
        nmax: u32,
    },
    /// Scan rational parameters: canonical height against the divisor height
    Scan {
        family: PathBuf,
        #[arg(long)]
        hbound: Option<f64>,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        nmax: Option<u32>,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        /// CSV output path (JSON report goes to stdout)
        #[arg(long, default_value = "scan.csv")]
        csv: PathBuf,
    },
    /// Per-place comparison of fiber Green values against the divisor's
    /// local heights
    PerPlace {
        family: PathBuf,
        #[arg(long)]
        place: u64,
        /// explicit samples "1,2,3/2"; default samples low-height rationals
        #[arg(long)]
        samples: Option<String>,
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[arg(long, default_value_t = 1e-9)]
        eps: f64,
    },
    /// Scan for preperiodic specializations with exact certificates
    Preper {
        family: PathBuf,
        #[arg(long)]
        hbound: Option<f64>,
    },
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn load(path: &PathBuf) -> anyhow::Result<FamilySpec> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    parse_family(&text).map_err(|e| anyhow!("{e}"))
}

fn parse_rat(s: &str) -> anyhow::Result<Rat> {
    s.parse().map_err(|_| anyhow!("bad rational '{s}'"))
}

fn green_json(g: &GreenResult, place: &str, meta: serde_json::Value) -> serde_json::Value {
    let (lo, hi, exact) = match &g.value {
        LogVal::Exact(q) => (None, None, Some(q.to_string())),
        LogVal::Arch(i) => (Some(i.lo), Some(i.hi), None),
    };
    serde_json::json!({
        "place": place,
        "exact": exact,
        "lo": lo,
        "hi": hi,
        "iterations": g.iterations_used,
        "crossed_threshold": g.crossed_threshold,
        "options": meta,
    })
}

fn inconclusive(e: &Error) -> bool {
    matches!(
        e,
        Error::Inconclusive { .. } | Error::DegenerateFiber | Error::DegenerateFamily(_)
    )
}

fn run() -> anyhow::Result<ExitCode> {
    let cli = Cli::parse();
    match cli.command {
        Command::Green {
            family,
            place,
            t,
            eps,
            nmax,
        } => {
            let spec = load(&family)?;
            let fam = &spec.family;
            match t {
                None => {
                    let beta = parse_fun_place(&place)?;
                    let n_max = spec.n_max.unwrap_or(nmax);
                    match green_fun(fam, &beta, n_max) {
                        Ok(g) => {
                            println!("{}", green_json(&g, &place, serde_json::json!({"nmax": n_max})));
                            Ok(ExitCode::SUCCESS)
                        }
                        Err(e) if inconclusive(&e) => {
                            println!("{}", serde_json::json!({"place": place, "inconclusive": e.to_string()}));
                            Ok(ExitCode::from(2))
                        }
                        Err(e) => Err(anyhow!("{e}")),
                    }
                }
                Some(tstr) => {
                    let t0 = parse_rat(&tstr)?;
                    let v = parse_num_place(&place)?;
                    let (endo, point) = fam.specialize(&t0).map_err(|e| anyhow!("{e}"))?;
                    let eps = spec.eps.unwrap_or(eps);
                    let g = green_num(&endo, &point, &v, eps).map_err(|e| anyhow!("{e}"))?;
                    println!("{}", green_json(&g, &place, serde_json::json!({"eps": eps, "t": t0.to_string()})));
                    Ok(ExitCode::SUCCESS)
                }
            }
        }
        Command::Hhat { family, t, eps } => {
            let spec = load(&family)?;
            let t0 = parse_rat(&t)?;
            match spec.family.specialize(&t0) {
                Ok((endo, point)) => {
                    let eps = spec.eps.unwrap_or(eps);
                    let h = canonical_height(&endo, &point, eps).map_err(|e| anyhow!("{e}"))?;
                    println!(
                        "{}",
                        serde_json::json!({
                            "t": t0.to_string(),
                            "eps": eps,
                            "lo": h.enclosure.lo,
                            "hi": h.enclosure.hi,
                            "width": h.enclosure.width(),
                        })
                    );
                    Ok(ExitCode::SUCCESS)
                }
                Err(e) if inconclusive(&e) => {
                    println!("{}", serde_json::json!({"t": t0.to_string(), "degenerate": e.to_string()}));
                    Ok(ExitCode::from(2))
                }
                Err(e) => Err(anyhow!("{e}")),
            }
        }
        Command::Divisor { family, nmax } => {
            let spec = load(&family)?;
            let n_max = spec.n_max.unwrap_or(nmax);
            match build_divisor(&spec.family, n_max) {
                Ok(d) => {
                    println!("{}", divisor_json(&d, n_max));
                    Ok(ExitCode::SUCCESS)
                }
                Err(e) if inconclusive(&e) => {
                    println!("{}", serde_json::json!({"inconclusive": e.to_string()}));
                    Ok(ExitCode::from(2))
                }
                Err(e) => Err(anyhow!("{e}")),
            }
        }
        Command::Scan {
            family,
            hbound,
            eps,
            nmax,
            threads,
            csv,
        } => {
            let spec = load(&family)?;
            let opts = ScanOptions {
                eps: eps.or(spec.eps).unwrap_or(1e-8),
                n_max: nmax.or(spec.n_max).unwrap_or(64),
                threads,
            };
            let bound = hbound
                .or(spec.h_bound)
                .ok_or_else(|| anyhow!("--hbound required (or hbound= in the family file)"))?;
            match scan_specializations(&spec.family, bound, &opts) {
                Ok(report) => {
                    std::fs::write(&csv, scan_to_csv(&report))
                        .with_context(|| format!("writing {}", csv.display()))?;
                    println!("{}", scan_to_json(&report, bound, &opts));
                    Ok(ExitCode::SUCCESS)
                }
                Err(e) if inconclusive(&e) => {
                    println!("{}", serde_json::json!({"degenerate": e.to_string()}));
                    Ok(ExitCode::from(2))
                }
                Err(e) => Err(anyhow!("{e}")),
            }
        }
        Command::PerPlace {
            family,
            place,
            samples,
            count,
            eps,
        } => {
            let spec = load(&family)?;
            let opts = ScanOptions {
                eps,
                ..Default::default()
            };
            let ts: Vec<Rat> = match samples {
                Some(s) => s
                    .split(',')
                    .map(|x| parse_rat(x.trim()))
                    .collect::<anyhow::Result<_>>()?,
                None => sample_parameters(&spec.family, count, &opts).map_err(|e| anyhow!("{e}"))?,
            };
            let p = num_place_prime(place)?;
            match per_place_test(&spec.family, &p, &ts, &opts) {
                Ok(rep) => {
                    println!(
                        "{}",
                        serde_json::json!({
                            "p": rep.p.to_string(),
                            "samples": rep.samples_used,
                            "max_abs_delta": rep.max_abs_delta,
                            "exactly_zero": rep.exactly_zero,
                            "options": {"eps": eps},
                        })
                    );
                    Ok(ExitCode::SUCCESS)
                }
                Err(e) if inconclusive(&e) => {
                    println!("{}", serde_json::json!({"inconclusive": e.to_string()}));
                    Ok(ExitCode::from(2))
                }
                Err(e) => Err(anyhow!("{e}")),
            }
        }
        Command::Preper { family, hbound } => {
            let spec = load(&family)?;
            let bound = hbound
                .or(spec.h_bound)
                .ok_or_else(|| anyhow!("--hbound required (or hbound= in the family file)"))?;
            let (hits, tested) =
                preperiodic_scan(&spec.family, bound).map_err(|e| anyhow!("{e}"))?;
            println!(
                "{}",
                serde_json::json!({
                    "hbound": bound,
                    "tested": tested,
                    "hits": hits.iter().map(|h| serde_json::json!({
                        "t": h.t.to_string(),
                        "tail": h.tail,
                        "cycle": h.cycle,
                    })).collect::<Vec<_>>(),
                })
            );
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn divisor_json(d: &QDivisor, n_max: u32) -> serde_json::Value {
    serde_json::json!({
        "divisor": d.to_json(),
        "degree": d.degree().to_string(),
        "options": {"nmax": n_max},
    })
}

fn parse_fun_place(s: &str) -> anyhow::Result<FunPlace> {
    if s == "inf" {
        return Ok(FunPlace::Infinity);
    }
    let f = fibral::expr::parse_expr(s).map_err(|e| anyhow!("{e}"))?;
    if !f.den().is_one() {
        return Err(anyhow!("place '{s}' is not a polynomial"));
    }
    let poly = f.num().monic();
    Ok(FunPlace::Finite(poly))
}

fn parse_num_place(s: &str) -> anyhow::Result<NumPlace> {
    if s == "arch" || s == "inf" {
        return Ok(NumPlace::Arch);
    }
    Ok(NumPlace::Finite(num_place_prime(
        s.parse().map_err(|_| anyhow!("bad prime '{s}'"))?,
    )?))
}

fn num_place_prime(p: u64) -> anyhow::Result<num_bigint::BigInt> {
    let pb = num_bigint::BigInt::from(p);
    if !fibral::exactnum::intfactor::is_prime(&pb) {
        return Err(anyhow!("{p} is not prime"));
    }
    Ok(pb)
}
