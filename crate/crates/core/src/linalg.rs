//! Dense square matrices over arbitrary-precision integers.
//!
//! Everything here is exact. Indices are zero-based throughout.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::IntPoly;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    dim: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(dim: usize) -> Self {
        IntMatrix {
            dim,
            entries: vec![BigInt::zero(); dim * dim],
        }
    }

    pub fn from_fn<T: Into<BigInt>>(dim: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j).into());
            }
        }
        IntMatrix { dim, entries }
    }

    /// Builds from rows; every row must have as many entries as there are rows.
    pub fn from_rows<T: Clone + Into<BigInt>>(rows: &[Vec<T>]) -> Result<Self> {
        let dim = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch(dim, bad.len()));
        }
        Ok(Self::from_fn(dim, |i, j| rows[i][j].clone()))
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| i64::from(i == j))
    }

    /// The all-ones matrix `J`.
    pub fn ones(dim: usize) -> Self {
        Self::from_fn(dim, |_, _| 1)
    }

    /// `E_{s,t}`: zero except for a 1 at `(s mod d, t mod d)`.
    pub fn unit(dim: usize, s: i64, t: i64) -> Self {
        let (s, t) = (
            s.rem_euclid(dim as i64) as usize,
            t.rem_euclid(dim as i64) as usize,
        );
        Self::from_fn(dim, |i, j| i64::from(i == s && j == t))
    }

    /// `P_v`: entry `(i, j)` is 1 iff `i - j = v (mod d)`.
    pub fn perm(dim: usize, v: i64) -> Self {
        let v = v.rem_euclid(dim as i64) as usize;
        Self::from_fn(dim, |i, j| i64::from((i + dim - j) % dim == v))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: impl Into<BigInt>) {
        self.entries[i * self.dim + j] = value.into();
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[BigInt]> {
        self.entries.chunks(self.dim.max(1)).take(self.dim)
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim == other.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(self.dim, other.dim))
        }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * d + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(IntMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(IntMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn scale(&self, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        IntMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|a| a * &c).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).clone())
    }

    pub fn trace(&self) -> BigInt {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::identity(self.dim), |acc, _| &acc * self)
    }

    /// The matrix with row `r` and column `c` deleted.
    pub fn minor(&self, r: usize, c: usize) -> Self {
        let keep = |skip: usize| (0..self.dim).filter(move |&x| x != skip);
        let rows: Vec<usize> = keep(r).collect();
        let cols: Vec<usize> = keep(c).collect();
        Self::from_fn(self.dim.saturating_sub(1), |i, j| {
            self.get(rows[i], cols[j]).clone()
        })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.dim).map(|i| self.get(i, i).clone()).collect()
    }

    /// Fraction-free (Bareiss) determinant with row pivoting.
    pub fn determinant(&self) -> BigInt {
        let d = self.dim;
        if d == 0 {
            return BigInt::one();
        }
        let mut m: Vec<Vec<BigInt>> = self.rows().map(<[BigInt]>::to_vec).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..d - 1 {
            if m[k][k].is_zero() {
                match (k + 1..d).find(|&i| !m[i][k].is_zero()) {
                    Some(i) => {
                        m.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..d {
                for j in k + 1..d {
                    let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = num.div_floor(&prev);
                }
            }
            prev = m[k][k].clone();
        }
        sign * &m[d - 1][d - 1]
    }

    /// Rank by fraction-free elimination.
    pub fn rank(&self) -> usize {
        let d = self.dim;
        let mut m: Vec<Vec<BigInt>> = self.rows().map(<[BigInt]>::to_vec).collect();
        let mut rank = 0;
        for col in 0..d {
            let Some(piv) = (rank..d).find(|&i| !m[i][col].is_zero()) else {
                continue;
            };
            m.swap(piv, rank);
            for i in rank + 1..d {
                if m[i][col].is_zero() {
                    continue;
                }
                let (a, b) = (m[rank][col].clone(), m[i][col].clone());
                #[allow(clippy::needless_range_loop)]
                for j in col..d {
                    m[i][j] = &m[i][j] * &a - &m[rank][j] * &b;
                }
                let g = m[i].iter().fold(BigInt::zero(), |g, x| g.gcd(x));
                if !g.is_zero() && !g.is_one() {
                    m[i].iter_mut().for_each(|x| *x /= &g);
                }
            }
            rank += 1;
        }
        rank
    }

    /// `det(xI - self)` by Faddeev-LeVerrier; every division is exact.
    pub fn char_poly(&self) -> IntPoly {
        let d = self.dim;
        let mut coeffs = vec![BigInt::zero(); d + 1];
        coeffs[d] = BigInt::one();
        let mut aux = Self::zeros(d);
        for k in 1..=d {
            let mut next = self * &aux;
            let c = coeffs[d + 1 - k].clone();
            for i in 0..d {
                next.entries[i * d + i] += &c;
            }
            let t = (self * &next).trace();
            let (quot, rem) = t.div_rem(&BigInt::from(k));
            debug_assert!(rem.is_zero());
            coeffs[d - k] = -quot;
            aux = next;
        }
        IntPoly::new(coeffs)
    }

    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        self.rows()
            .map(|r| r.iter().map(ToString::to_string).collect())
            .collect()
    }

    /// Largest entry width in decimal, for aligned output.
    pub fn max_width(&self) -> usize {
        self.entries
            .iter()
            .map(|x| x.to_string().len())
            .max()
            .unwrap_or(1)
    }

    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        use num_traits::ToPrimitive;
        self.rows()
            .map(|r| r.iter().map(ToPrimitive::to_i64).collect())
            .collect()
    }

    pub fn abs_max(&self) -> BigInt {
        self.entries
            .iter()
            .map(Signed::abs)
            .max()
            .unwrap_or_default()
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Bracketed rows with right-aligned columns.
impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = self.max_width();
        for (i, row) in self.rows().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "[")?;
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{:>w$}", x.to_string())?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

// Operator forms panic on dimension mismatch; the `try_*` methods report it.

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        self.try_mul(rhs).expect("matrix dimensions must agree")
    }
}

impl Add for &IntMatrix {
    type Output = IntMatrix;
    fn add(self, rhs: &IntMatrix) -> IntMatrix {
        self.try_add(rhs).expect("matrix dimensions must agree")
    }
}

impl Sub for &IntMatrix {
    type Output = IntMatrix;
    fn sub(self, rhs: &IntMatrix) -> IntMatrix {
        self.try_sub(rhs).expect("matrix dimensions must agree")
    }
}

impl Neg for &IntMatrix {
    type Output = IntMatrix;
    fn neg(self) -> IntMatrix {
        self.scale(-1)
    }
}

/// JSON form: array of rows of decimal strings.
impl Serialize for IntMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_string_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let rows: Vec<Vec<String>> = Vec::deserialize(d)?;
        let parsed: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| r.iter().map(|s| s.parse::<BigInt>()).collect())
            .collect::<std::result::Result<_, _>>()
            .map_err(D::Error::custom)?;
        IntMatrix::from_rows(&parsed).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    /// Cofactor expansion along the first row; the reference for Bareiss.
    fn cofactor_det(a: &IntMatrix) -> BigInt {
        if a.dim() == 0 {
            return BigInt::one();
        }
        (0..a.dim())
            .map(|j| {
                let term = a.get(0, j) * cofactor_det(&a.minor(0, j));
                if j % 2 == 0 {
                    term
                } else {
                    -term
                }
            })
            .sum()
    }

    #[test]
    fn basic_products() {
        let j2 = IntMatrix::ones(2);
        assert_eq!(&j2 * &j2, j2.scale(2));
        assert_eq!(
            &IntMatrix::unit(3, 0, 1) * &IntMatrix::unit(3, 1, 0),
            IntMatrix::unit(3, 0, 0)
        );
        assert_eq!(IntMatrix::identity(5).trace(), BigInt::from(5));
        assert_eq!(
            IntMatrix::ones(2).try_mul(&IntMatrix::ones(3)).unwrap_err(),
            Error::DimensionMismatch(2, 3)
        );
        assert!(matches!(
            IntMatrix::from_rows(&[vec![1, 2], vec![3]]),
            Err(Error::DimensionMismatch(2, 1))
        ));
    }

    #[test]
    fn permutation_matrices() {
        assert_eq!(IntMatrix::perm(3, 0), IntMatrix::identity(3));
        let p = IntMatrix::perm(4, 2);
        assert_eq!(&p * &p, IntMatrix::identity(4));
        for d in 1..8 {
            for v in -3..10 {
                let p = IntMatrix::perm(d, v);
                assert_eq!(&p * &p.transpose(), IntMatrix::identity(d));
                assert_eq!(p.transpose(), IntMatrix::perm(d, -v));
                assert!(p.determinant().abs().is_one());
            }
        }
        // (P_v A)[i] = A[i - v]
        let a = IntMatrix::from_fn(5, |i, j| (10 * i + j) as i64);
        let pa = &IntMatrix::perm(5, 2) * &a;
        for i in 0..5 {
            assert_eq!(pa.row(i), a.row((i + 3) % 5));
        }
    }

    #[test]
    fn determinants() {
        assert_eq!(IntMatrix::identity(7).determinant(), BigInt::one());
        assert_eq!(m(&[&[1, 2], &[1, 1]]).determinant(), BigInt::from(-1));
        assert_eq!(m(&[&[0, 1], &[1, 0]]).determinant(), BigInt::from(-1));
        assert_eq!(IntMatrix::ones(3).determinant(), BigInt::zero());
        assert_eq!(IntMatrix::zeros(0).determinant(), BigInt::one());
    }

    #[test]
    fn char_poly_small() {
        let p = IntMatrix::identity(2).char_poly();
        assert_eq!(p, IntPoly::from_i64(&[1, -2, 1]));
        assert_eq!(IntMatrix::zeros(0).char_poly(), IntPoly::from_i64(&[1]));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(IntMatrix::ones(4).rank(), 1);
        assert_eq!(IntMatrix::identity(4).rank(), 4);
        assert_eq!(IntMatrix::zeros(3).rank(), 0);
        assert_eq!(m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]).rank(), 2);
    }

    #[test]
    fn display_is_bracketed() {
        assert_eq!(
            m(&[&[1, -10], &[100, 0]]).to_string(),
            "[  1 -10]\n[100   0]"
        );
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn matrix(max_dim: usize) -> impl Strategy<Value = IntMatrix> {
            (0..=max_dim).prop_flat_map(|d| {
                proptest::collection::vec(-9i64..=9, d * d)
                    .prop_map(move |v| IntMatrix::from_fn(d, |i, j| v[i * d + j]))
            })
        }

        proptest! {
            #[test]
            fn bareiss_matches_cofactor(a in matrix(5)) {
                prop_assert_eq!(a.determinant(), cofactor_det(&a));
            }

            #[test]
            fn cayley_hamilton(a in matrix(6)) {
                prop_assert!(a.char_poly().eval_at_matrix(&a).is_zero());
            }

            #[test]
            fn char_poly_constant_term(a in matrix(6)) {
                let c0 = a.char_poly().coeff(0);
                let sign = if a.dim() % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                prop_assert_eq!(a.determinant(), sign * c0);
            }

            #[test]
            fn determinant_is_multiplicative(a in matrix(4), seed in any::<u64>()) {
                let d = a.dim();
                let b = IntMatrix::from_fn(d, |i, j| ((seed >> ((i * 4 + j) % 60)) & 7) as i64 - 3);
                prop_assert_eq!((&a * &b).determinant(), a.determinant() * b.determinant());
            }

            #[test]
            fn json_round_trip(a in matrix(5)) {
                let s = serde_json::to_string(&a).unwrap();
                let back: IntMatrix = serde_json::from_str(&s).unwrap();
                prop_assert_eq!(back, a);
            }
        }
    }
}
