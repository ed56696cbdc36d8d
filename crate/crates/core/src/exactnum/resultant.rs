//! Resultants of binary forms via the Sylvester determinant, exact over any
//! field of coefficients (Q or Q(t)), plus the linear solves used to build
//! Nullstellensatz certificates.

use num_traits::{One, Zero};
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Field bound shared by all generic exact linear algebra here.
pub trait FieldElem:
    Clone
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
}

impl<T> FieldElem for T where
    T: Clone
        + PartialEq
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
        + Div<Output = T>
{
}

/// Resultant of two binary forms of the same declared degree d, given as
/// coefficient lists of length d+1 where index i holds the coefficient of
/// x0^i x1^(d-i). Vanishing leading coefficients (zeros at infinity) are
/// handled by the declared degree.
pub fn resultant_binary_forms<T: FieldElem>(g0: &[T], g1: &[T]) -> Result<T> {
    if g0.len() != g1.len() || g0.is_empty() {
        return Err(Error::DegreeMismatch {
            expected: g0.len().max(1) - 1,
            got: g1.len().max(1) - 1,
        });
    }
    let d = g0.len() - 1;
    if d == 0 {
        // Resultant of two "degree 0 forms" is conventionally 1 (empty matrix).
        return Ok(T::one());
    }
    let m = sylvester_matrix(g0, g1);
    Ok(determinant(m))
}

/// Sylvester matrix of two binary degree-d forms (2d x 2d), rows holding
/// shifted coefficient lists in descending powers of x0.
pub fn sylvester_matrix<T: FieldElem>(g0: &[T], g1: &[T]) -> Vec<Vec<T>> {
    let d = g0.len() - 1;
    let n = 2 * d;
    let mut m = vec![vec![T::zero(); n]; n];
    // descending coefficients: coefficient of x0^(d-j) at column offset j
    for row in 0..d {
        for j in 0..=d {
            m[row][row + j] = g0[d - j].clone();
        }
    }
    for row in 0..d {
        for j in 0..=d {
            m[d + row][row + j] = g1[d - j].clone();
        }
    }
    m
}

/// Exact determinant by fraction-producing Gaussian elimination.
#[allow(clippy::needless_range_loop)] // rows are indexed in pairs
pub fn determinant<T: FieldElem>(mut m: Vec<Vec<T>>) -> T {
    let n = m.len();
    let mut det = T::one();
    for col in 0..n {
        let pivot_row = match (col..n).find(|&r| !m[r][col].is_zero()) {
            Some(r) => r,
            None => return T::zero(),
        };
        if pivot_row != col {
            m.swap(pivot_row, col);
            det = -det;
        }
        let pivot = m[col][col].clone();
        det = det * pivot.clone();
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone() / pivot.clone();
            for c in col..n {
                let v = m[r][c].clone() - factor.clone() * m[col][c].clone();
                m[r][c] = v;
            }
        }
    }
    det
}

/// Solve the square system M x = b by Gaussian elimination; None if singular.
#[allow(clippy::needless_range_loop)] // rows are indexed in pairs
pub fn solve_linear<T: FieldElem>(mut m: Vec<Vec<T>>, mut b: Vec<T>) -> Option<Vec<T>> {
    let n = m.len();
    for col in 0..n {
        let pivot_row = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(pivot_row, col);
        b.swap(pivot_row, col);
        let pivot = m[col][col].clone();
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone() / pivot.clone();
            for c in col..n {
                let v = m[r][c].clone() - factor.clone() * m[col][c].clone();
                m[r][c] = v;
            }
            let v = b[r].clone() - factor * b[col].clone();
            b[r] = v;
        }
    }
    Some(
        (0..n)
            .map(|i| b[i].clone() / m[i][i].clone())
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat_int, Rat};

    /// Independent oracle: determinant by Laplace cofactor expansion.
    fn det_laplace(m: &[Vec<Rat>]) -> Rat {
        let n = m.len();
        if n == 1 {
            return m[0][0].clone();
        }
        let mut acc = Rat::zero();
        for j in 0..n {
            if m[0][j].is_zero() {
                continue;
            }
            let minor: Vec<Vec<Rat>> = (1..n)
                .map(|r| {
                    (0..n)
                        .filter(|&c| c != j)
                        .map(|c| m[r][c].clone())
                        .collect()
                })
                .collect();
            let term = &m[0][j] * det_laplace(&minor);
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    #[test]
    fn coordinate_forms() {
        // x0^2 = [0,0,1], x1^2 = [1,0,0]
        let g0 = [rat_int(0), rat_int(0), rat_int(1)];
        let g1 = [rat_int(1), rat_int(0), rat_int(0)];
        assert_eq!(resultant_binary_forms(&g0, &g1).unwrap(), rat_int(1));
    }

    #[test]
    fn common_zero_vanishes() {
        let g0 = [rat_int(0), rat_int(0), rat_int(1)];
        assert_eq!(resultant_binary_forms(&g0, &g0).unwrap(), rat_int(0));
    }

    #[test]
    fn hand_oracle_matches() {
        // x0^2 - x1^2 = [-1, 0, 1], x0^2 + x1^2 = [1, 0, 1]: resultant 4,
        // frozen from the Laplace-expansion oracle below.
        let g0 = [rat_int(-1), rat_int(0), rat_int(1)];
        let g1 = [rat_int(1), rat_int(0), rat_int(1)];
        let m = sylvester_matrix(&g0, &g1);
        assert_eq!(det_laplace(&m), rat_int(4));
        assert_eq!(resultant_binary_forms(&g0, &g1).unwrap(), rat_int(4));
    }

    #[test]
    fn degree_mismatch_rejected() {
        let g0 = [rat_int(1), rat_int(0)];
        let g1 = [rat_int(1), rat_int(0), rat_int(1)];
        assert!(matches!(
            resultant_binary_forms(&g0, &g1),
            Err(Error::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn resultant_zero_iff_common_factor() {
        use rand::{Rng, SeedableRng};
        use crate::exactnum::Poly;
        let mut rng = rand::rngs::StdRng::seed_from_u64(5);
        for _ in 0..60 {
            let d = rng.gen_range(1..=3);
            let mk = |rng: &mut rand::rngs::StdRng| -> Vec<Rat> {
                (0..=d).map(|_| rat_int(rng.gen_range(-4..=4))).collect()
            };
            let a = mk(&mut rng);
            let b = mk(&mut rng);
            if a.iter().all(|c| c.is_zero()) || b.iter().all(|c| c.is_zero()) {
                continue;
            }
            let res = resultant_binary_forms(&a, &b).unwrap();
            // compare against gcd of the dehomogenized polynomials plus the
            // shared zero at infinity (both leading coefficients vanishing)
            let pa = Poly::new(a.clone());
            let pb = Poly::new(b.clone());
            let nonconstant_gcd = if pa.is_zero() || pb.is_zero() {
                true
            } else {
                !pa.gcd(&pb).is_constant()
            };
            let shared_infinity = a[d].is_zero() && b[d].is_zero();
            assert_eq!(
                res.is_zero(),
                nonconstant_gcd || shared_infinity,
                "forms {a:?} {b:?}"
            );
        }
    }
}
