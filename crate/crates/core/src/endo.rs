//! Regular polynomial endomorphisms of P^N in coordinate normal form.
//!
//! An `Endo` stores the coefficients of f_0, ..., f_{N-1}; the last
//! coordinate is structurally f_N = x_N^d and never stored. Dimension is
//! capped at N <= 2: the Nullstellensatz certificates downstream are built
//! from binary-form resultants.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{rat_int, resultant_binary_forms, vp, FieldElem, Rat, RatFunc};
use crate::interval::{ln_rat_abs, rat_to_interval, Interval};
use crate::places::{ord_at, FunPlace, LogVal, NumPlace};

/// Exponent tuple (i_0, ..., i_N) with |I| = d.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// The exponent of x_N.
    pub fn last(&self) -> u32 {
        *self.0.last().unwrap()
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|e| e.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Coefficient field of an endomorphism: Q or Q(t).
pub trait Coeff: FieldElem + Ord + fmt::Display {}
impl Coeff for Rat {}
impl Coeff for RatFunc {}

/// A regular polynomial endomorphism of P^N (N = 1 or 2) of degree d >= 2:
/// f_i = sum over |I| = d of a_{i,I} x^I for i < N, and f_N = x_N^d.
///
/// Constructed through [`Endo::new`], which validates the morphism
/// condition; immutable afterwards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Endo<C: Coeff> {
    dim: usize,
    degree: u32,
    coeffs: BTreeMap<(usize, MultiIndex), C>,
}

/// The restriction of an endomorphism to the invariant hyperplane: an
/// endomorphism of P^{N-1} with no normal-form constraint.
#[derive(Clone, Debug, PartialEq)]
pub enum Restriction<C: Coeff> {
    /// N = 1: the map of P^0 given by g_0 = a x_0^d.
    Scalar(C),
    /// N = 2: the pair of binary degree-d forms (g_0, g_1); coefficient
    /// index is the power of x_0.
    Pair { d: u32, g0: Vec<C>, g1: Vec<C> },
}

impl<C: Coeff> Restriction<C> {
    pub fn dim(&self) -> usize {
        match self {
            Restriction::Scalar(_) => 0,
            Restriction::Pair { .. } => 1,
        }
    }

    /// Morphism check at the restricted dimension: nonzero scalar for
    /// P^0, nonvanishing resultant for P^1.
    pub fn validate(&self) -> Result<()> {
        match self {
            Restriction::Scalar(a) => {
                if a.is_zero() {
                    Err(Error::NotAMorphism)
                } else {
                    Ok(())
                }
            }
            Restriction::Pair { g0, g1, .. } => {
                let r = resultant_binary_forms(g0, g1)?;
                if r.is_zero() {
                    Err(Error::NotAMorphism)
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Resultant witnessing the morphism property (the scalar itself for
    /// P^0).
    pub fn resultant(&self) -> Result<C> {
        match self {
            Restriction::Scalar(a) => Ok(a.clone()),
            Restriction::Pair { g0, g1, .. } => resultant_binary_forms(g0, g1),
        }
    }

    /// All coefficients, flattened.
    pub fn coefficients(&self) -> Vec<&C> {
        match self {
            Restriction::Scalar(a) => vec![a],
            Restriction::Pair { g0, g1, .. } => g0.iter().chain(g1.iter()).collect(),
        }
    }
}

impl<C: Coeff> Endo<C> {
    /// Build and validate. Accepts iff d >= 2, N in {1, 2}, every index
    /// sums to d, and the restriction to the invariant hyperplane is a
    /// morphism of P^{N-1} (any common zero of f_0, ..., f_{N-1}, x_N^d
    /// has x_N = 0 and is then a common zero of the restriction).
    pub fn new(
        dim: usize,
        degree: u32,
        coeffs: BTreeMap<(usize, MultiIndex), C>,
    ) -> Result<Endo<C>> {
        if dim == 0 || dim > 2 {
            return Err(Error::UnsupportedDimension(dim));
        }
        if degree < 2 {
            return Err(Error::BadDegree(degree));
        }
        let mut clean = BTreeMap::new();
        for ((i, idx), c) in coeffs {
            if i >= dim {
                return Err(Error::ParseError {
                    line: 0,
                    col: 0,
                    msg: format!("coordinate index {i} out of range for N = {dim}"),
                });
            }
            if idx.0.len() != dim + 1 || idx.total() != degree {
                return Err(Error::ParseError {
                    line: 0,
                    col: 0,
                    msg: format!("multi-index {idx} does not sum to d = {degree}"),
                });
            }
            if !c.is_zero() {
                clean.insert((i, idx), c);
            }
        }
        let e = Endo {
            dim,
            degree,
            coeffs: clean,
        };
        e.restriction_to_h().validate()?;
        Ok(e)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coeffs(&self) -> &BTreeMap<(usize, MultiIndex), C> {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize, idx: &MultiIndex) -> C {
        self.coeffs
            .get(&(i, idx.clone()))
            .cloned()
            .unwrap_or_else(C::zero)
    }

    /// Restriction to the invariant hyperplane x_N = 0: the coefficients
    /// with I_N = 0, reindexed on N variables.
    pub fn restriction_to_h(&self) -> Restriction<C> {
        let d = self.degree;
        match self.dim {
            1 => {
                let idx = MultiIndex(vec![d, 0]);
                Restriction::Scalar(self.coeff(0, &idx))
            }
            2 => {
                let form = |i: usize| -> Vec<C> {
                    (0..=d)
                        .map(|j| self.coeff(i, &MultiIndex(vec![j, d - j, 0])))
                        .collect()
                };
                Restriction::Pair {
                    d,
                    g0: form(0),
                    g1: form(1),
                }
            }
            _ => unreachable!(),
        }
    }

    /// Apply to a point: (f_0(P), ..., f_{N-1}(P), P_N^d), exact.
    pub fn apply(&self, point: &[C]) -> Vec<C> {
        assert_eq!(point.len(), self.dim + 1);
        let mut out = vec![C::zero(); self.dim + 1];
        for ((i, idx), a) in &self.coeffs {
            let mut term = a.clone();
            for (k, &e) in idx.0.iter().enumerate() {
                for _ in 0..e {
                    term = term * point[k].clone();
                }
            }
            out[*i] = out[*i].clone() + term;
        }
        let mut last = C::one();
        for _ in 0..self.degree {
            last = last * point[self.dim].clone();
        }
        out[self.dim] = last;
        out
    }
}

impl Endo<RatFunc> {
    /// Sufficient coordinate criterion for fibrality: every hyperplane
    /// coefficient (I_N = 0) is a constant function of the parameter.
    pub fn is_fibral(&self) -> bool {
        self.coeffs
            .iter()
            .filter(|((_, idx), _)| idx.last() == 0)
            .all(|(_, c)| c.is_constant())
    }

    /// Coefficient-wise evaluation at t = t0; the specialized map must
    /// itself be a morphism.
    pub fn specialize(&self, t0: &Rat) -> Result<Endo<Rat>> {
        let mut out = BTreeMap::new();
        for ((i, idx), c) in &self.coeffs {
            out.insert((*i, idx.clone()), c.eval(t0)?);
        }
        match Endo::new(self.dim, self.degree, out) {
            Ok(e) => Ok(e),
            Err(Error::NotAMorphism) => Err(Error::DegenerateFiber),
            Err(e) => Err(e),
        }
    }

    /// B_beta(f) = log+ max |a_{i,I}|^(1/I_N) over I_N != 0, as an exact
    /// order (log|a|_beta = -ord_beta(a)).
    pub fn b_const_fun(&self, beta: &FunPlace) -> Rat {
        let mut best = Rat::zero();
        for ((_, idx), a) in &self.coeffs {
            let k = idx.last();
            if k == 0 || a.is_zero() {
                continue;
            }
            let v = rat_int(-ord_at(a, beta).unwrap()) / rat_int(k as i64);
            if v > best {
                best = v;
            }
        }
        best
    }

    /// log+ max |a_{i,I}|_beta over all coefficients (the coefficient-size
    /// constant of the unconditional growth bound).
    pub fn coeff_bound_fun(&self, beta: &FunPlace) -> Rat {
        let mut best = Rat::zero();
        for a in self.coeffs.values() {
            if a.is_zero() {
                continue;
            }
            let v = rat_int(-ord_at(a, beta).unwrap());
            if v > best {
                best = v;
            }
        }
        best
    }
}

impl Endo<Rat> {
    /// B_v(f) = log+ max |a_{i,I}|_v^(1/I_N) over I_N != 0.
    pub fn b_const_num(&self, v: &NumPlace) -> LogVal {
        match v {
            NumPlace::Finite(p) => {
                let mut best = Rat::zero();
                for ((_, idx), a) in &self.coeffs {
                    let k = idx.last();
                    if k == 0 || a.is_zero() {
                        continue;
                    }
                    let val = rat_int(-vp(a, p).unwrap()) / rat_int(k as i64);
                    if val > best {
                        best = val;
                    }
                }
                LogVal::Exact(best)
            }
            NumPlace::Arch => {
                let mut best = Interval::ZERO;
                for ((_, idx), a) in &self.coeffs {
                    let k = idx.last();
                    if k == 0 || a.is_zero() {
                        continue;
                    }
                    let v = ln_rat_abs(a).scale(1.0 / k as f64);
                    best = best.max(&v);
                }
                LogVal::Arch(best)
            }
        }
    }

    /// log+ max |a_{i,I}|_v over all coefficients.
    pub fn coeff_bound_num(&self, v: &NumPlace) -> LogVal {
        match v {
            NumPlace::Finite(p) => {
                let mut best = Rat::zero();
                for a in self.coeffs.values() {
                    if a.is_zero() {
                        continue;
                    }
                    let val = rat_int(-vp(a, p).unwrap());
                    if val > best {
                        best = val;
                    }
                }
                LogVal::Exact(best)
            }
            NumPlace::Arch => {
                let mut best = Interval::ZERO;
                for a in self.coeffs.values() {
                    if a.is_zero() {
                        continue;
                    }
                    best = best.max(&ln_rat_abs(a));
                }
                LogVal::Arch(best)
            }
        }
    }

    /// Sum of |a_{i,I}| over all stored coefficients, as an interval
    /// (triangle-inequality constant at the archimedean place).
    pub fn abs_coeff_sum(&self) -> Interval {
        let mut acc = Interval::ZERO;
        for a in self.coeffs.values() {
            acc = acc.add(&rat_to_interval(&a.abs()));
        }
        acc
    }

    /// True when every coefficient of f_0..f_{N-1} with I = (0,...,0,d)
    /// vanishes, i.e. the point [0 : ... : 0 : 1] is superattracting into
    /// itself with no constant term pulling away from it.
    pub fn pure_last_terms_vanish(&self) -> bool {
        let d = self.degree;
        (0..self.dim).all(|i| {
            let mut idx = vec![0u32; self.dim + 1];
            idx[self.dim] = d;
            self.coeff(i, &MultiIndex(idx)).is_zero()
        })
    }
}

/// A family over the base P^1: an endomorphism over Q(t) plus a moving
/// point, sharing the same base curve.
#[derive(Clone, Debug)]
pub struct FamilyInstance {
    pub endo: Endo<RatFunc>,
    pub point: Vec<RatFunc>,
}

impl FamilyInstance {
    pub fn new(endo: Endo<RatFunc>, point: Vec<RatFunc>) -> Result<FamilyInstance> {
        if point.len() != endo.dim() + 1 {
            return Err(Error::ParseError {
                line: 0,
                col: 0,
                msg: format!(
                    "point has {} coordinates, expected {}",
                    point.len(),
                    endo.dim() + 1
                ),
            });
        }
        if point.iter().all(|c| c.is_zero()) {
            return Err(Error::ParseError {
                line: 0,
                col: 0,
                msg: "point coordinates are identically zero".into(),
            });
        }
        Ok(FamilyInstance { endo, point })
    }

    /// Representative with last coordinate 1 (requires P_N != 0 as a
    /// function); the form the pole-support computation works with.
    pub fn normalized_point(&self) -> Result<Vec<RatFunc>> {
        let last = self.point.last().unwrap();
        if last.is_zero() {
            return Err(Error::PointInHyperplane);
        }
        Ok(self.point.iter().map(|c| c / last).collect())
    }

    /// Specialize both the map and the point at t = t0.
    pub fn specialize(&self, t0: &Rat) -> Result<(Endo<Rat>, Vec<Rat>)> {
        let endo = self.endo.specialize(t0)?;
        let point: Result<Vec<Rat>> = self.point.iter().map(|c| c.eval(t0)).collect();
        Ok((endo, point?))
    }
}

/// Convenience builders for well-known shapes.
pub mod build {
    use super::*;

    /// The one-variable family x^d + c(t) as an endomorphism of P^1:
    /// [x0^d + c x1^d : x1^d].
    pub fn unicritical_family(d: u32, c: RatFunc) -> Endo<RatFunc> {
        let mut coeffs = BTreeMap::new();
        coeffs.insert((0, MultiIndex(vec![d, 0])), RatFunc::one());
        coeffs.insert((0, MultiIndex(vec![0, d])), c);
        Endo::new(1, d, coeffs).expect("unicritical family is always a morphism")
    }

    /// The same shape over Q.
    pub fn unicritical(d: u32, c: Rat) -> Endo<Rat> {
        let mut coeffs = BTreeMap::new();
        coeffs.insert((0, MultiIndex(vec![d, 0])), Rat::one());
        coeffs.insert((0, MultiIndex(vec![0, d])), c);
        Endo::new(1, d, coeffs).expect("unicritical map is always a morphism")
    }

    /// The two-variable family [x^d + t z^d : y^d + t z^d : z^d].
    pub fn baker_demarco_family(d: u32) -> Endo<RatFunc> {
        let mut coeffs = BTreeMap::new();
        coeffs.insert((0, MultiIndex(vec![d, 0, 0])), RatFunc::one());
        coeffs.insert((0, MultiIndex(vec![0, 0, d])), RatFunc::t());
        coeffs.insert((1, MultiIndex(vec![0, d, 0])), RatFunc::one());
        coeffs.insert((1, MultiIndex(vec![0, 0, d])), RatFunc::t());
        Endo::new(2, d, coeffs).expect("coordinate powers restrict to a morphism")
    }

    /// The monomial map [x0^d : ... : xN^d] over Q.
    pub fn monomial(dim: usize, d: u32) -> Endo<Rat> {
        let mut coeffs = BTreeMap::new();
        for i in 0..dim {
            let mut idx = vec![0u32; dim + 1];
            idx[i] = d;
            coeffs.insert((i, MultiIndex(idx)), Rat::one());
        }
        Endo::new(dim, d, coeffs).expect("monomial map is a morphism")
    }
}
