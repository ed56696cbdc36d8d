//! Certified dynamical Green's functions, canonical heights, and
//! specialization divisors for fibral families of regular polynomial
//! endomorphisms of projective space over Q and Q(t).
//!
//! The library is organized in layers:
//!
//! * [`exactnum`] — big rationals, polynomials over Q, rational functions,
//!   factorization, resultants, p-adic valuations;
//! * [`places`] — places of Q and Q(t) with normalized log absolute values
//!   and the projective norm;
//! * [`endo`] — regular polynomial endomorphisms in coordinate normal form,
//!   their validation, hyperplane restriction, fibrality and specialization;
//! * [`greens`] — certified Green's function values: interval enclosures at
//!   archimedean places, exact rationals at non-archimedean and
//!   function-field places;
//! * [`divisor`] — the specialization divisor on P^1 and its degree;
//! * [`heights`] — Weil and canonical heights, local heights for divisors,
//!   preperiodicity certification;
//! * [`harness`] — specialization scans comparing canonical heights of
//!   fibers against the divisor height, per-place checks, preperiodic
//!   parameter searches;
//! * [`family`] / [`expr`] — the text format for family specifications.

pub mod divisor;
pub mod endo;
pub mod error;
pub mod exactnum;
pub mod expr;
pub mod family;
pub mod greens;
pub mod harness;
pub mod heights;
pub mod interval;
pub mod places;

pub use error::{Error, Result};
