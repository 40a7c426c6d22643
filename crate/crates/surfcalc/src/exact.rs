//! Exact rational arithmetic and the little linear algebra the engine needs:
//! solving square systems and Sylvester's negative-definiteness test.
//!
//! Coefficients blow up quickly under Gaussian elimination, so everything is
//! backed by arbitrary-precision integers.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::error::{EngineError, Result};

/// An exact rational number, always stored reduced with a positive
/// denominator. The only scalar type in the engine.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// `num/den`. Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_bigints(num: BigInt, den: BigInt) -> Self {
        Rational(BigRational::new(num, den))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn recip(&self) -> Self {
        Rational(self.0.recip())
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // BigRational renders `p/q`, or just `p` when the denominator is 1.
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_int(n)
    }
}

macro_rules! rational_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((self.0).$method(rhs.0))
            }
        }
        impl $trait for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

rational_binop!(Add, add);
rational_binop!(Sub, sub);
rational_binop!(Mul, mul);
rational_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

/// A dense matrix of rationals.
#[derive(Clone, PartialEq, Debug)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl QMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        for r in &rows {
            if r.len() != ncols {
                return Err(EngineError::Dimension {
                    expected: ncols,
                    got: r.len(),
                });
            }
        }
        Ok(QMatrix {
            rows: nrows,
            cols: ncols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Convenience constructor from integer literals.
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        QMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&n| Rational::from_int(n)).collect())
                .collect(),
        )
        .expect("ragged integer matrix")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if self.get(i, j) != self.get(j, i) {
                    return false;
                }
            }
        }
        true
    }

    /// The leading principal `k x k` submatrix.
    pub fn leading(&self, k: usize) -> QMatrix {
        let mut m = QMatrix::zero(k, k);
        for i in 0..k {
            for j in 0..k {
                m.set(i, j, self.get(i, j).clone());
            }
        }
        m
    }

    /// The principal submatrix on the given (strictly increasing) index set.
    pub fn principal(&self, idx: &[usize]) -> QMatrix {
        let k = idx.len();
        let mut m = QMatrix::zero(k, k);
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                m.set(a, b, self.get(i, j).clone());
            }
        }
        m
    }

    /// Determinant by fraction elimination with exact pivoting.
    pub fn determinant(&self) -> Result<Rational> {
        if !self.is_square() {
            return Err(EngineError::NotSquare);
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Rational::one();
        for col in 0..n {
            let pivot_row = match (col..n).find(|&r| !m.get(r, col).is_zero()) {
                Some(r) => r,
                None => return Ok(Rational::zero()),
            };
            if pivot_row != col {
                for c in 0..n {
                    let a = m.get(col, c).clone();
                    let b = m.get(pivot_row, c).clone();
                    m.set(col, c, b);
                    m.set(pivot_row, c, a);
                }
                det = -det;
            }
            let pivot = m.get(col, col).clone();
            det = det * &pivot;
            for r in (col + 1)..n {
                let factor = m.get(r, col) / &pivot;
                if factor.is_zero() {
                    continue;
                }
                for c in col..n {
                    let v = m.get(r, c) - &(&factor * m.get(col, c));
                    m.set(r, c, v);
                }
            }
        }
        Ok(det)
    }
}

/// Result of solving a square linear system.
#[derive(Clone, PartialEq, Debug)]
pub enum LinearSolution {
    Unique(Vec<Rational>),
    Singular,
}

/// Solves `A x = b` exactly by Gauss-Jordan elimination. The pivot is the
/// first nonzero entry in the column; no magnitude heuristics are needed
/// since the arithmetic is exact.
pub fn solve_linear(a: &QMatrix, b: &[Rational]) -> Result<LinearSolution> {
    if !a.is_square() {
        return Err(EngineError::NotSquare);
    }
    let n = a.rows();
    if b.len() != n {
        return Err(EngineError::Dimension {
            expected: n,
            got: b.len(),
        });
    }
    // Augmented matrix [A | b].
    let mut m = QMatrix::zero(n, n + 1);
    for (i, rhs) in b.iter().enumerate() {
        for j in 0..n {
            m.set(i, j, a.get(i, j).clone());
        }
        m.set(i, n, rhs.clone());
    }
    for col in 0..n {
        let pivot_row = match (col..n).find(|&r| !m.get(r, col).is_zero()) {
            Some(r) => r,
            None => return Ok(LinearSolution::Singular),
        };
        if pivot_row != col {
            for c in 0..=n {
                let x = m.get(col, c).clone();
                let y = m.get(pivot_row, c).clone();
                m.set(col, c, y);
                m.set(pivot_row, c, x);
            }
        }
        let pivot = m.get(col, col).clone();
        for c in col..=n {
            let v = m.get(col, c) / &pivot;
            m.set(col, c, v);
        }
        for r in 0..n {
            if r == col || m.get(r, col).is_zero() {
                continue;
            }
            let factor = m.get(r, col).clone();
            for c in col..=n {
                let v = m.get(r, c) - &(&factor * m.get(col, c));
                m.set(r, c, v);
            }
        }
    }
    Ok(LinearSolution::Unique(
        (0..n).map(|i| m.get(i, n).clone()).collect(),
    ))
}

/// Sylvester's criterion: `A` (symmetric) is negative definite iff the k-th
/// leading principal minor has sign `(-1)^k` for every k.
pub fn is_negative_definite(a: &QMatrix) -> Result<bool> {
    if !a.is_square() {
        return Err(EngineError::NotSquare);
    }
    if !a.is_symmetric() {
        return Err(EngineError::NotSymmetric);
    }
    for k in 1..=a.rows() {
        let minor = a.leading(k).determinant()?;
        let signed = if k % 2 == 1 { -minor } else { minor };
        if !signed.is_positive() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn rational_display_is_reduced() {
        assert_eq!(q(2, 4).to_string(), "1/2");
        assert_eq!(q(-6, 5).to_string(), "-6/5");
        assert_eq!(q(3, -2).to_string(), "-3/2");
        assert_eq!(q(8, 2).to_string(), "4");
        assert_eq!(Rational::zero().to_string(), "0");
    }

    #[test]
    fn solve_discrepancy_style_system() {
        // The 2x2 system behind the first contraction's canonical pullback.
        let a = QMatrix::from_ints(&[&[-1, 1], &[1, -2]]);
        let b = vec![Rational::from_int(-1), Rational::zero()];
        let got = solve_linear(&a, &b).unwrap();
        assert_eq!(
            got,
            LinearSolution::Unique(vec![Rational::from_int(2), Rational::from_int(1)])
        );
    }

    #[test]
    fn solve_identity() {
        let a = QMatrix::identity(2);
        let b = vec![Rational::from_int(3), q(1, 2)];
        assert_eq!(
            solve_linear(&a, &b).unwrap(),
            LinearSolution::Unique(b.clone())
        );
    }

    #[test]
    fn solve_singular() {
        let a = QMatrix::from_ints(&[&[1, 1], &[2, 2]]);
        let b = vec![Rational::one(), Rational::one()];
        assert_eq!(solve_linear(&a, &b).unwrap(), LinearSolution::Singular);
    }

    #[test]
    fn solve_dimension_mismatch() {
        let a = QMatrix::identity(2);
        let b = vec![Rational::one()];
        assert!(matches!(
            solve_linear(&a, &b),
            Err(EngineError::Dimension { .. })
        ));
    }

    #[test]
    fn negative_definite_small_grams() {
        // Gram of the two curves contracted on the first model.
        let g2 = QMatrix::from_ints(&[&[-1, 1], &[1, -2]]);
        assert!(is_negative_definite(&g2).unwrap());

        // Gram of the four curves contracted on the five-blow-up model;
        // leading minors are -2, 3, -4, 5.
        let g4 = QMatrix::from_ints(&[
            &[-2, 1, 1, 0],
            &[1, -2, 0, 0],
            &[1, 0, -2, 1],
            &[0, 0, 1, -2],
        ]);
        let minors: Vec<Rational> = (1..=4)
            .map(|k| g4.leading(k).determinant().unwrap())
            .collect();
        assert_eq!(
            minors,
            vec![
                Rational::from_int(-2),
                Rational::from_int(3),
                Rational::from_int(-4),
                Rational::from_int(5)
            ]
        );
        assert!(is_negative_definite(&g4).unwrap());

        assert!(!is_negative_definite(&QMatrix::from_ints(&[&[0]])).unwrap());
    }

    #[test]
    fn negative_definite_requires_symmetry() {
        let m = QMatrix::from_ints(&[&[-1, 2], &[0, -1]]);
        assert_eq!(is_negative_definite(&m), Err(EngineError::NotSymmetric));
    }

    #[test]
    fn solution_substitutes_back_exactly() {
        let a = QMatrix::from_rows(vec![
            vec![q(1, 3), q(-2, 7), q(5, 1)],
            vec![q(0, 1), q(4, 9), q(-1, 2)],
            vec![q(7, 5), q(1, 1), q(1, 6)],
        ])
        .unwrap();
        let b = vec![q(1, 2), q(-3, 4), q(2, 9)];
        if let LinearSolution::Unique(x) = solve_linear(&a, &b).unwrap() {
            for (i, want) in b.iter().enumerate() {
                let mut acc = Rational::zero();
                for (j, xj) in x.iter().enumerate() {
                    acc += &(a.get(i, j) * xj);
                }
                assert_eq!(&acc, want);
            }
        } else {
            panic!("system should be regular");
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn rational() -> impl Strategy<Value = Rational> {
            (-50i64..=50, 1i64..=20).prop_map(|(n, d)| Rational::new(n, d))
        }

        proptest! {
            #[test]
            fn field_axioms(a in rational(), b in rational(), c in rational()) {
                prop_assert_eq!((&a + &b) + &c, &a + &(&b + &c));
                prop_assert_eq!((&a * &b) * &c, &a * &(&b * &c));
                prop_assert_eq!(&a + &b, &b + &a);
                prop_assert_eq!(&a * &b, &b * &a);
                prop_assert_eq!(&a * &(&b + &c), &a * &b + &a * &c);
            }

            #[test]
            fn stored_form_is_reduced(a in rational()) {
                use num::Integer;
                prop_assert!(a.denom() > &num::BigInt::from(0));
                let g = a.numer().gcd(a.denom());
                prop_assert!(g == num::BigInt::from(1) || a.numer() == &num::BigInt::from(0));
                // Normalization is idempotent: rebuilding from the stored
                // parts changes nothing.
                let rebuilt = Rational::from_bigints(a.numer().clone(), a.denom().clone());
                prop_assert_eq!(rebuilt, a);
            }

            #[test]
            fn solver_solutions_substitute_back(
                entries in proptest::collection::vec(rational(), 9),
                rhs in proptest::collection::vec(rational(), 3),
            ) {
                let a = QMatrix::from_rows(entries.chunks(3).map(<[Rational]>::to_vec).collect())
                    .unwrap();
                if let LinearSolution::Unique(x) = solve_linear(&a, &rhs).unwrap() {
                    for (i, want) in rhs.iter().enumerate() {
                        let mut acc = Rational::zero();
                        for (j, xj) in x.iter().enumerate() {
                            acc += &(a.get(i, j) * xj);
                        }
                        prop_assert_eq!(&acc, want);
                    }
                }
            }
        }
    }
}
