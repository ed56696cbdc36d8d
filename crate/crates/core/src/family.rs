//! Family specification text format.
//!
//! ```text
//! # comment
//! N=1
//! d=2
//! 0; 2,0; 1
//! 0; 0,2; t
//! P; 0, 1
//! eps=1e-8        # optional option lines
//! nmax=64
//! hbound=3.9
//! ```
//!
//! Coefficient lines are `i; j_0,...,j_N; <expression>` with the
//! multi-index summing to d; the point line lists N+1 coordinate
//! expressions.

use std::collections::BTreeMap;

use crate::endo::{Endo, FamilyInstance, MultiIndex};
use crate::error::{Error, Result};
use crate::expr::parse_expr_at;
use crate::exactnum::RatFunc;

/// A parsed family file: the validated family plus any option overrides
/// carried by the file.
#[derive(Clone, Debug)]
pub struct FamilySpec {
    pub family: FamilyInstance,
    pub fibral: bool,
    pub eps: Option<f64>,
    pub n_max: Option<u32>,
    pub h_bound: Option<f64>,
}

fn perr(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::ParseError {
        line,
        col,
        msg: msg.into(),
    }
}

pub fn parse_family(text: &str) -> Result<FamilySpec> {
    let mut n: Option<usize> = None;
    let mut d: Option<u32> = None;
    let mut eps = None;
    let mut n_max = None;
    let mut h_bound = None;
    let mut coeffs: BTreeMap<(usize, MultiIndex), RatFunc> = BTreeMap::new();
    let mut point: Option<Vec<RatFunc>> = None;

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some((key, value)) = trimmed.split_once('=') {
            let key = key.trim();
            let value = value.trim();
            match key {
                "N" => {
                    n = Some(value.parse().map_err(|_| perr(lineno, 1, "bad N"))?);
                }
                "d" => {
                    d = Some(value.parse().map_err(|_| perr(lineno, 1, "bad d"))?);
                }
                "eps" => {
                    eps = Some(value.parse().map_err(|_| perr(lineno, 1, "bad eps"))?);
                }
                "nmax" => {
                    n_max = Some(value.parse().map_err(|_| perr(lineno, 1, "bad nmax"))?);
                }
                "hbound" => {
                    h_bound = Some(value.parse().map_err(|_| perr(lineno, 1, "bad hbound"))?);
                }
                _ => return Err(perr(lineno, 1, format!("unknown option '{key}'"))),
            }
            continue;
        }

        let n_val = n.ok_or_else(|| perr(lineno, 1, "N=... must come first"))?;
        let d_val = d.ok_or_else(|| perr(lineno, 1, "d=... must come before entries"))?;
        let parts: Vec<&str> = trimmed.split(';').collect();
        if parts.len() != 3 && !(parts.len() == 2 && parts[0].trim() == "P") {
            return Err(perr(lineno, 1, "expected 'i; j_0,...,j_N; expr' or 'P; exprs'"));
        }
        if parts[0].trim() == "P" {
            let exprs = parts.last().unwrap();
            let col0 = raw.len() - exprs.len() + 1;
            let coords: Result<Vec<RatFunc>> = exprs
                .split(',')
                .map(|e| parse_expr_at(e, lineno, col0))
                .collect();
            let coords = coords?;
            if coords.len() != n_val + 1 {
                return Err(perr(
                    lineno,
                    1,
                    format!("point needs {} coordinates, found {}", n_val + 1, coords.len()),
                ));
            }
            if point.replace(coords).is_some() {
                return Err(perr(lineno, 1, "duplicate point line"));
            }
            continue;
        }

        let i: usize = parts[0]
            .trim()
            .parse()
            .map_err(|_| perr(lineno, 1, "bad coordinate index"))?;
        if i >= n_val {
            return Err(perr(lineno, 1, format!("coordinate index {i} out of range (N = {n_val})")));
        }
        let idx: Result<Vec<u32>> = parts[1]
            .split(',')
            .map(|x| {
                x.trim()
                    .parse::<u32>()
                    .map_err(|_| perr(lineno, 1, "bad multi-index entry"))
            })
            .collect();
        let idx = MultiIndex(idx?);
        if idx.0.len() != n_val + 1 {
            return Err(perr(
                lineno,
                1,
                format!("multi-index needs {} entries, found {}", n_val + 1, idx.0.len()),
            ));
        }
        if idx.total() != d_val {
            return Err(perr(
                lineno,
                1,
                format!("multi-index {idx} sums to {}, expected d = {d_val}", idx.total()),
            ));
        }
        let col0 = raw.len() - parts[2].len() + 1;
        let value = parse_expr_at(parts[2], lineno, col0)?;
        if coeffs.insert((i, idx.clone()), value).is_some() {
            return Err(perr(lineno, 1, format!("duplicate coefficient for ({i}, {idx})")));
        }
    }

    let n = n.ok_or_else(|| perr(0, 0, "missing N=..."))?;
    let d = d.ok_or_else(|| perr(0, 0, "missing d=..."))?;
    let point = point.ok_or_else(|| perr(0, 0, "missing P; ... line"))?;
    let endo = Endo::new(n, d, coeffs)?;
    let fibral = endo.is_fibral();
    let family = FamilyInstance::new(endo, point)?;
    Ok(FamilySpec {
        family,
        fibral,
        eps,
        n_max,
        h_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::endo::build;

    const X2T: &str = "\
# the family x^2 + t with the critical point
N=1
d=2
0; 2,0; 1
0; 0,2; t
P; 0, 1
";

    #[test]
    fn parses_x2_plus_t() {
        let spec = parse_family(X2T).unwrap();
        assert!(spec.fibral);
        assert_eq!(spec.family.endo, build::unicritical_family(2, RatFunc::t()));
        assert_eq!(spec.family.point, vec![RatFunc::zero(), RatFunc::one()]);
    }

    #[test]
    fn rejects_bad_dimension() {
        let text = "N=3\nd=2\n0; 2,0,0,0; 1\nP; 0,0,0,1\n";
        assert!(matches!(
            parse_family(text),
            Err(Error::UnsupportedDimension(3))
        ));
    }

    #[test]
    fn rejects_index_sum_mismatch() {
        let text = "N=1\nd=2\n0; 1,0; 1\nP; 0,1\n";
        match parse_family(text) {
            Err(Error::ParseError { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected ParseError, got {other:?}"),
        }
    }

    #[test]
    fn options_are_picked_up() {
        let text = format!("{X2T}eps=1e-6\nnmax=32\nhbound=2.5\n");
        let spec = parse_family(&text).unwrap();
        assert_eq!(spec.eps, Some(1e-6));
        assert_eq!(spec.n_max, Some(32));
        assert_eq!(spec.h_bound, Some(2.5));
    }
}
