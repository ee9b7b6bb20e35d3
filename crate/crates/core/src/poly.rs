//! Integer polynomials, their evaluation at matrices, and real-root
//! isolation (square-free decomposition plus Sturm sequences over Q).

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::linalg::IntMatrix;

/// Coefficients low-to-high; trailing zeros are trimmed.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "Vec<String>", try_from = "Vec<String>")]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn x() -> Self {
        Self::from_i64(&[0, 1])
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::new(vec![c.into()])
    }

    /// `x^2 + b x + c`
    pub fn quadratic(b: impl Into<BigInt>, c: impl Into<BigInt>) -> Self {
        Self::new(vec![c.into(), b.into(), BigInt::one()])
    }

    /// `x - r`
    pub fn linear_root(r: impl Into<BigInt>) -> Self {
        Self::new(vec![-r.into(), BigInt::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::new(Vec::new());
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::constant(1), |acc, _| acc.mul(self))
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Horner evaluation with the identity standing in for `x^0`.
    pub fn eval_at_matrix(&self, m: &IntMatrix) -> IntMatrix {
        let d = m.dim();
        let mut acc = IntMatrix::zeros(d);
        for c in self.coeffs.iter().rev() {
            acc = &acc * m;
            for i in 0..d {
                let v = acc.get(i, i) + c;
                acc.set(i, i, v);
            }
        }
        acc
    }

    /// Real roots with multiplicity, each accurate to well below 1e-12
    /// relative to the root bound. Roots are sorted ascending.
    pub fn real_roots(&self) -> Vec<(f64, usize)> {
        let f = QPoly::from_int(self);
        if f.degree() < 1 {
            return Vec::new();
        }
        let mut out = Vec::new();
        for (factor, mult) in f.squarefree_decomposition() {
            for r in factor.isolate_real_roots() {
                out.push((r, mult));
            }
        }
        out.sort_by(|a, b| a.0.total_cmp(&b.0));
        out
    }

    /// Real roots listed with repetition.
    pub fn real_roots_flat(&self) -> Vec<f64> {
        self.real_roots()
            .into_iter()
            .flat_map(|(r, m)| std::iter::repeat_n(r, m))
            .collect()
    }
}

impl From<IntPoly> for Vec<String> {
    fn from(p: IntPoly) -> Self {
        p.coeffs.iter().map(ToString::to_string).collect()
    }
}

impl TryFrom<Vec<String>> for IntPoly {
    type Error = num_bigint::ParseBigIntError;
    fn try_from(v: Vec<String>) -> Result<Self, Self::Error> {
        Ok(IntPoly::new(
            v.iter().map(|s| s.parse()).collect::<Result<_, _>>()?,
        ))
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = !mag.is_one() || i == 0;
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

// ---------------------------------------------------------------------------
// Rational polynomials, used only for root isolation.

#[derive(Clone, Debug, PartialEq)]
struct QPoly(Vec<BigRational>);

impl QPoly {
    fn new(mut c: Vec<BigRational>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        QPoly(c)
    }

    fn from_int(p: &IntPoly) -> Self {
        Self::new(
            p.coeffs
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }

    fn degree(&self) -> isize {
        self.0.len() as isize - 1
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn lead(&self) -> &BigRational {
        self.0.last().expect("nonzero polynomial")
    }

    fn monic(&self) -> Self {
        let l = self.lead().clone();
        Self::new(self.0.iter().map(|c| c / &l).collect())
    }

    fn derivative(&self) -> Self {
        Self::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    fn sub(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        let zero = BigRational::zero();
        Self::new(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&zero) - other.0.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    fn div_rem(&self, d: &Self) -> (Self, Self) {
        let mut r = self.0.clone();
        let dd = d.0.len() - 1;
        if r.len() <= dd {
            return (QPoly(Vec::new()), self.clone());
        }
        let mut q = vec![BigRational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] / d.lead();
            for (i, di) in d.0.iter().enumerate() {
                r[k + i] -= &c * di;
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    fn eval(&self, x: &BigRational) -> BigRational {
        self.0
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    /// Yun's algorithm: `f = prod a_i^i` with each `a_i` square-free.
    fn squarefree_decomposition(&self) -> Vec<(QPoly, usize)> {
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.div_rem(&a0).0;
        let c = df.div_rem(&a0).0;
        let mut d = c.sub(&b.derivative());
        let mut out = Vec::new();
        let mut i = 1;
        while b.degree() > 0 {
            let a = b.gcd(&d);
            let b_next = b.div_rem(&a).0;
            let c_next = d.div_rem(&a).0;
            d = c_next.sub(&b_next.derivative());
            if a.degree() > 0 {
                out.push((a, i));
            }
            b = b_next;
            i += 1;
        }
        out
    }

    fn sturm_sequence(&self) -> Vec<QPoly> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(QPoly(r.0.into_iter().map(|c| -c).collect()));
        }
        seq
    }

    /// Real roots of a square-free polynomial.
    fn isolate_real_roots(&self) -> Vec<f64> {
        let seq = self.sturm_sequence();
        let changes = |x: &BigRational| -> usize {
            let signs: Vec<i8> = seq
                .iter()
                .map(|p| {
                    let v = p.eval(x);
                    if v.is_positive() {
                        1
                    } else if v.is_negative() {
                        -1
                    } else {
                        0
                    }
                })
                .filter(|&s| s != 0)
                .collect();
            signs.windows(2).filter(|w| w[0] != w[1]).count()
        };
        // Cauchy bound: every root lies strictly inside (-bound, bound).
        let lead = self.lead().abs();
        let bound = BigRational::one()
            + self
                .0
                .iter()
                .map(|c| c.abs() / &lead)
                .fold(BigRational::zero(), |m, c| if c > m { c } else { m });
        let mut roots = Vec::new();
        // Intervals are half-open (lo, hi] and carry their root count.
        let lo = -bound.clone();
        let hi = bound;
        let total = changes(&lo) - changes(&hi);
        let mut stack = vec![(lo, hi, total)];
        let tol = BigRational::new(BigInt::one(), BigInt::one() << 60u32);
        while let Some((lo, hi, count)) = stack.pop() {
            if count == 0 {
                continue;
            }
            if count == 1 && &hi - &lo < tol {
                let mid: BigRational = (&lo + &hi) / BigRational::from_integer(BigInt::from(2));
                roots.push(mid.to_f64().unwrap_or(f64::NAN));
                continue;
            }
            let mid: BigRational = (&lo + &hi) / BigRational::from_integer(BigInt::from(2));
            let vm = changes(&mid);
            let left = changes(&lo) - vm;
            stack.push((mid.clone(), hi, count - left));
            stack.push((lo, mid, left));
        }
        roots
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display() {
        let p = IntPoly::from_i64(&[-14, -20, -4, -8, 1]);
        assert_eq!(p.to_string(), "x^4 - 8x^3 - 4x^2 - 20x - 14");
        assert_eq!(IntPoly::from_i64(&[0, -1]).to_string(), "-x");
        assert_eq!(IntPoly::from_i64(&[]).to_string(), "0");
        assert_eq!(IntPoly::from_i64(&[1, 0, 0]).degree(), Some(0));
    }

    #[test]
    fn eval_x_at_matrix_is_matrix() {
        let m = IntMatrix::from_fn(3, |i, j| (i * 3 + j) as i64 - 4);
        assert_eq!(IntPoly::x().eval_at_matrix(&m), m);
        assert_eq!(
            IntPoly::constant(1).eval_at_matrix(&m),
            IntMatrix::identity(3)
        );
    }

    #[test]
    fn roots_with_multiplicity() {
        // (x - 8)(x^2 - 8)^3
        let p = IntPoly::linear_root(8).mul(&IntPoly::quadratic(0, -8).pow(3));
        let roots = p.real_roots();
        let s = 8f64.sqrt();
        assert_eq!(roots.len(), 3);
        assert!((roots[0].0 + s).abs() < 1e-12 && roots[0].1 == 3);
        assert!((roots[1].0 - s).abs() < 1e-12 && roots[1].1 == 3);
        assert!((roots[2].0 - 8.0).abs() < 1e-12 && roots[2].1 == 1);
    }

    #[test]
    fn roots_exact_rationals_and_none() {
        let p = IntPoly::from_i64(&[0, 0, 1]).mul(&IntPoly::linear_root(-3));
        let r = p.real_roots_flat();
        assert_eq!(r.len(), 3);
        assert!((r[0] + 3.0).abs() < 1e-12 && r[1].abs() < 1e-12 && r[2].abs() < 1e-12);
        assert!(IntPoly::quadratic(0, 1).real_roots().is_empty());
    }

    #[test]
    fn serde_strings() {
        let p = IntPoly::from_i64(&[-14, -20, -4, -8, 1]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"["-14","-20","-4","-8","1"]"#);
        assert_eq!(serde_json::from_str::<IntPoly>(&s).unwrap(), p);
    }
}
