//! The specialization divisor D(f, P) on the base P^1 and its degree.
//!
//! The coefficient of D at a closed point beta is the Green's function of
//! the generic fiber at the place beta; the support is contained in the
//! set of points where a coefficient of f or a coordinate of P has a
//! pole, so only those places are ever iterated.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{Signed, Zero};

use crate::endo::FamilyInstance;
use crate::error::{Error, Result};
use crate::exactnum::{factor, rat_int, Rat};
use crate::greens::green_fun;
use crate::places::FunPlace;

/// A Q-coefficient divisor on P^1/Q supported on closed points.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct QDivisor {
    entries: BTreeMap<FunPlace, Rat>,
}

impl QDivisor {
    pub fn new() -> QDivisor {
        QDivisor::default()
    }

    pub fn insert(&mut self, place: FunPlace, coeff: Rat) {
        if coeff.is_zero() {
            self.entries.remove(&place);
        } else {
            self.entries.insert(place, coeff);
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (&FunPlace, &Rat)> {
        self.entries.iter()
    }

    pub fn coeff(&self, place: &FunPlace) -> Rat {
        self.entries.get(place).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = &FunPlace> {
        self.entries.keys()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_effective(&self) -> bool {
        self.entries.values().all(|c| c.is_positive())
    }

    /// deg D = sum of coefficients weighted by residue degrees; for the
    /// specialization divisor this is the canonical height of the generic
    /// fiber point.
    pub fn degree(&self) -> Rat {
        let mut acc = Rat::zero();
        for (place, coeff) in &self.entries {
            acc += coeff * rat_int(place.degree());
        }
        acc
    }

    pub fn scale(&self, c: &Rat) -> QDivisor {
        let mut out = QDivisor::new();
        for (place, coeff) in &self.entries {
            out.insert(place.clone(), coeff * c);
        }
        out
    }

    /// Whether the rational parameter t0 is one of the supporting closed
    /// points (the support is a set of conjugacy classes; a rational t0
    /// can only hit degree-one points).
    pub fn supports_rational(&self, t0: &Rat) -> bool {
        self.entries.keys().any(|place| match place {
            FunPlace::Infinity => false,
            FunPlace::Finite(g) => g.degree() == 1 && g.eval(t0).is_zero(),
        })
    }

    /// JSON value in the wire format
    /// `[{"point": "inf" | <polynomial>, "coeff": "p/q"}, ...]`.
    pub fn to_json(&self) -> serde_json::Value {
        let items: Vec<serde_json::Value> = self
            .entries
            .iter()
            .map(|(place, coeff)| {
                serde_json::json!({
                    "point": place.to_string(),
                    "coeff": coeff.to_string(),
                })
            })
            .collect();
        serde_json::Value::Array(items)
    }

    /// Parse the wire format back; inverse of [`QDivisor::to_json`].
    pub fn from_json(v: &serde_json::Value) -> Result<QDivisor> {
        let arr = v.as_array().ok_or_else(|| Error::ParseError {
            line: 0,
            col: 0,
            msg: "divisor JSON must be an array".into(),
        })?;
        let mut out = QDivisor::new();
        for item in arr {
            let point = item["point"].as_str().ok_or_else(|| Error::ParseError {
                line: 0,
                col: 0,
                msg: "divisor entry missing point".into(),
            })?;
            let coeff = item["coeff"].as_str().ok_or_else(|| Error::ParseError {
                line: 0,
                col: 0,
                msg: "divisor entry missing coeff".into(),
            })?;
            let place = if point == "inf" {
                FunPlace::Infinity
            } else {
                let f = crate::expr::parse_expr(point)?;
                if !f.den().is_one() {
                    return Err(Error::ParseError {
                        line: 0,
                        col: 0,
                        msg: format!("divisor point {point} is not a polynomial"),
                    });
                }
                FunPlace::Finite(f.num().clone())
            };
            let c: Rat = coeff.parse().map_err(|_| Error::ParseError {
                line: 0,
                col: 0,
                msg: format!("bad rational {coeff}"),
            })?;
            out.insert(place, c);
        }
        Ok(out)
    }
}

impl fmt::Display for QDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (place, coeff) in &self.entries {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({coeff})[{place}]")?;
        }
        Ok(())
    }
}

/// The closed points at which any coefficient of f or any coordinate of
/// the (last-coordinate-normalized) point has a pole, plus infinity when
/// any of them has negative order there.
pub fn pole_support(fam: &FamilyInstance) -> Result<BTreeSet<FunPlace>> {
    let mut out = BTreeSet::new();
    let mut functions: Vec<crate::exactnum::RatFunc> =
        fam.endo.coeffs().values().cloned().collect();
    functions.extend(fam.normalized_point()?);
    for phi in &functions {
        if phi.is_zero() {
            continue;
        }
        if !phi.den().is_constant() {
            let (_, factors) = factor(phi.den())?;
            for (g, _) in factors {
                out.insert(FunPlace::finite(g));
            }
        }
        if phi.num().degree() > phi.den().degree() {
            out.insert(FunPlace::Infinity);
        }
    }
    Ok(out)
}

/// Build the specialization divisor by evaluating the generic-fiber
/// Green's function at every candidate pole; entries with value zero are
/// omitted. An inconclusive Green iteration aborts the construction (a
/// silently invented zero would corrupt the divisor).
pub fn build_divisor(fam: &FamilyInstance, n_max: u32) -> Result<QDivisor> {
    if !fam.endo.is_fibral() {
        return Err(Error::NotFibral);
    }
    if fam.point.last().unwrap().is_zero() {
        return Err(Error::PointInHyperplane);
    }
    let mut out = QDivisor::new();
    for beta in pole_support(fam)? {
        let g = green_fun(fam, &beta, n_max)?;
        let val = g.value.expect_exact().clone();
        debug_assert!(!val.is_negative(), "Green values are nonnegative");
        out.insert(beta, val);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::endo::{build, FamilyInstance};
    use crate::exactnum::{rat, Poly, RatFunc};

    fn x2t_family(point: Vec<RatFunc>) -> FamilyInstance {
        FamilyInstance::new(build::unicritical_family(2, RatFunc::t()), point).unwrap()
    }

    #[test]
    fn pole_support_examples() {
        // x^2 + t with P = [0:1]: only t has a pole, at infinity
        let fam = x2t_family(vec![RatFunc::zero(), RatFunc::one()]);
        let s = pole_support(&fam).unwrap();
        assert_eq!(s.len(), 1);
        assert!(s.contains(&FunPlace::Infinity));

        // coefficient 1/(t^2+1) and point [t:1]
        let c = RatFunc::new(Poly::one(), Poly::from_ints(&[1, 0, 1]));
        let fam = FamilyInstance::new(
            build::unicritical_family(2, c),
            vec![RatFunc::t(), RatFunc::one()],
        )
        .unwrap();
        let s = pole_support(&fam).unwrap();
        assert!(s.contains(&FunPlace::Infinity));
        assert!(s.contains(&FunPlace::finite(Poly::from_ints(&[1, 0, 1]))));
        assert_eq!(s.len(), 2);

        // constant map and constant point: nothing has poles
        let fam = FamilyInstance::new(
            build::unicritical_family(2, RatFunc::zero()),
            vec![RatFunc::one(), RatFunc::one()],
        )
        .unwrap();
        assert!(pole_support(&fam).unwrap().is_empty());
    }

    #[test]
    fn divisor_of_x2_plus_t_critical_orbit() {
        // D = (1/2)[inf]: f(P) = [t:1] crosses at infinity with value 1
        let fam = x2t_family(vec![RatFunc::zero(), RatFunc::one()]);
        let d = build_divisor(&fam, 16).unwrap();
        assert_eq!(d.coeff(&FunPlace::Infinity), rat(1, 2));
        assert_eq!(d.entries().count(), 1);
        assert_eq!(d.degree(), rat(1, 2));
        assert!(d.is_effective());
    }

    #[test]
    fn divisor_of_baker_demarco() {
        // d = 2, P = (1, 2): D = (1/2)[inf]
        let fam = FamilyInstance::new(
            build::baker_demarco_family(2),
            vec![RatFunc::one(), RatFunc::from_int(2), RatFunc::one()],
        )
        .unwrap();
        let d = build_divisor(&fam, 16).unwrap();
        assert_eq!(d.coeff(&FunPlace::Infinity), rat(1, 2));
        assert_eq!(d.entries().count(), 1);
        assert_eq!(d.degree(), rat(1, 2));
    }

    #[test]
    fn divisor_of_constant_map_moving_point() {
        // constant x^2 with P = [t:1]: G_inf = 1, D = [inf], degree 1
        let fam = FamilyInstance::new(
            build::unicritical_family(2, RatFunc::zero()),
            vec![RatFunc::t(), RatFunc::one()],
        )
        .unwrap();
        let d = build_divisor(&fam, 16).unwrap();
        assert_eq!(d.coeff(&FunPlace::Infinity), rat_int(1));
        assert_eq!(d.degree(), rat_int(1));
    }

    #[test]
    fn degree_weights_by_residue_degree() {
        let mut d = QDivisor::new();
        d.insert(FunPlace::finite(Poly::from_ints(&[1, 0, 1])), rat(1, 2));
        assert_eq!(d.degree(), rat_int(1));
        assert_eq!(QDivisor::new().degree(), Rat::zero());
    }

    #[test]
    fn functoriality_d_of_f_p() {
        // D(f, f(P)) = d * D(f, P), entrywise
        let f = build::unicritical_family(2, RatFunc::t());
        let p = vec![RatFunc::zero(), RatFunc::one()];
        let fp = f.apply(&p);
        let d1 = build_divisor(&FamilyInstance::new(f.clone(), p).unwrap(), 16).unwrap();
        let d2 = build_divisor(&FamilyInstance::new(f, fp).unwrap(), 16).unwrap();
        assert_eq!(d2, d1.scale(&rat_int(2)));
    }

    #[test]
    fn support_contained_in_pole_support() {
        let fam = FamilyInstance::new(
            build::baker_demarco_family(3),
            vec![RatFunc::from_int(2), RatFunc::from_int(5), RatFunc::one()],
        )
        .unwrap();
        let s = pole_support(&fam).unwrap();
        let d = build_divisor(&fam, 16).unwrap();
        for place in d.support() {
            assert!(s.contains(place));
        }
    }

    #[test]
    fn json_round_trip() {
        let mut d = QDivisor::new();
        d.insert(FunPlace::Infinity, rat(1, 2));
        d.insert(FunPlace::finite(Poly::from_ints(&[1, 0, 1])), rat(3, 4));
        d.insert(FunPlace::finite(Poly::new(vec![rat(-1, 2), rat_int(1)])), rat_int(2));
        let j = d.to_json();
        let back = QDivisor::from_json(&j).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn inhomogeneous_point_in_hyperplane_rejected() {
        let fam = FamilyInstance::new(
            build::unicritical_family(2, RatFunc::t()),
            vec![RatFunc::one(), RatFunc::zero()],
        )
        .unwrap();
        assert_eq!(build_divisor(&fam, 16).err(), Some(Error::PointInHyperplane));
    }
}
