//! Cyclotomic numbers `(i, j) = |(1 + g^i K) ∩ g^j K|` of order `ell` and
//! the matrices assembled from them.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::arith::modulo;
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem};
use crate::ledger::{CaseCheck, Check, VerifySuiteResult};
use crate::linalg::IntMatrix;

/// A field together with an index `ell` dividing `q - 1` and the full
/// `ell x ell` table of cyclotomic numbers.
#[derive(Debug, Clone)]
pub struct CycloCtx {
    field: Arc<FieldCtx>,
    ell: u64,
    k: u64,
    qprime: u64,
    table: Vec<u64>,
}

/// `A`, the row-shifted symmetric `M = P_{q'} A`, and the minors
/// `B` (row `q'`, column 0 of `A` removed) and `S` (row 0, column 0 of `M`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivedMatrices {
    pub a: IntMatrix,
    pub m: IntMatrix,
    pub b: IntMatrix,
    pub s: IntMatrix,
}

impl CycloCtx {
    pub fn new(field: Arc<FieldCtx>, ell: u64) -> Result<Self> {
        let q_minus_1 = field.q() - 1;
        if ell == 0 || !q_minus_1.is_multiple_of(ell) {
            return Err(Error::InvalidEll { ell, q_minus_1 });
        }
        let k = q_minus_1 / ell;
        let qprime = (q_minus_1 / 2) % ell;

        // One pass over F_q^*: x = g^e lies in class e mod ell, and 1 + x
        // lands in class dlog(1 + x) mod ell.
        let l = ell as usize;
        let mut table = vec![0u64; l * l];
        for e in 0..q_minus_1 {
            let x = field.exp(e);
            let y = field.add_one(x);
            if y.is_zero() {
                continue;
            }
            let i = (e % ell) as usize;
            let j = (field.dlog_raw(y.0) % ell) as usize;
            table[i * l + j] += 1;
        }

        let ctx = CycloCtx {
            field,
            ell,
            k,
            qprime,
            table,
        };
        let lemma = ctx.verify_shifted_matrices();
        assert!(
            lemma.passed(),
            "cyclotomic table violates its basic laws: {:?}",
            lemma.failures().next()
        );
        Ok(ctx)
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn field_arc(&self) -> &Arc<FieldCtx> {
        &self.field
    }

    pub fn q(&self) -> u64 {
        self.field.q()
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn qprime(&self) -> u64 {
        self.qprime
    }

    /// `(i, j)` for arbitrary integers, reduced mod `ell`.
    pub fn cyclotomic_number(&self, i: i64, j: i64) -> u64 {
        let l = self.ell;
        self.table[(modulo(i, l) * l + modulo(j, l)) as usize]
    }

    /// Signed shorthand for arithmetic-heavy identity code.
    #[inline]
    pub fn cn(&self, i: i64, j: i64) -> i64 {
        self.cyclotomic_number(i, j) as i64
    }

    /// Row-major table copy.
    pub fn table(&self) -> Vec<Vec<u64>> {
        self.table
            .chunks(self.ell as usize)
            .map(<[u64]>::to_vec)
            .collect()
    }

    /// Class index `dlog(x) mod ell` of a nonzero element.
    pub fn class_of(&self, x: FieldElem) -> Result<u64> {
        Ok(self.field.dlog(x)? % self.ell)
    }

    /// The coset `g^i K`, as `g^(i + ell t)` for `t = 0..k`.
    pub fn coset(&self, i: i64) -> impl Iterator<Item = FieldElem> + '_ {
        let i = modulo(i, self.ell);
        (0..self.k).map(move |t| self.field.exp(i + self.ell * t))
    }

    pub fn l(&self) -> i64 {
        self.ell as i64
    }

    pub fn qp(&self) -> i64 {
        self.qprime as i64
    }

    /// `A = A_0`.
    pub fn matrix(&self) -> IntMatrix {
        self.shifted_matrix(0)
    }

    /// `A_v = [(i - v, j - v)]`.
    pub fn shifted_matrix(&self, v: i64) -> IntMatrix {
        IntMatrix::from_fn(self.ell as usize, |i, j| {
            self.cyclotomic_number(i as i64 - v, j as i64 - v)
        })
    }

    /// `M = [(i + q', j)]`.
    pub fn m_matrix(&self) -> IntMatrix {
        let qp = self.qp();
        IntMatrix::from_fn(self.ell as usize, |i, j| {
            self.cyclotomic_number(i as i64 + qp, j as i64)
        })
    }

    pub fn build_matrices(&self) -> Result<DerivedMatrices> {
        if self.ell < 2 {
            return Err(Error::EllTooSmall);
        }
        let a = self.matrix();
        let m = self.m_matrix();
        let b = a.minor(self.qprime as usize, 0);
        let s = m.minor(0, 0);
        Ok(DerivedMatrices { a, m, b, s })
    }

    /// The elementary laws of cyclotomic numbers, checked over the whole table.
    pub fn verify_shifted_matrices(&self) -> VerifySuiteResult {
        let (l, qp, k) = (self.l(), self.qp(), self.k as i64);
        let mut suite = VerifySuiteResult::new();

        suite.push(
            Check::new("qprime_classification")
                .param("k", self.k)
                .param("qprime", self.qprime)
                .expect(
                    self.qprime
                        == if self.k.is_multiple_of(2) {
                            0
                        } else {
                            self.ell / 2
                        },
                    || json!({"k": self.k, "qprime": self.qprime}),
                ),
        );

        let mut sym = CaseCheck::new("swap_law");
        let mut neg = CaseCheck::new("negation_law");
        let mut chain = CaseCheck::new("equality_chain");
        let mut even = CaseCheck::new("even_k_symmetry");
        for i in 0..l {
            for j in 0..l {
                let v = self.cn(i, j);
                let w = self.cn(j + qp, i + qp);
                sym.record(v == w, || json!({"i": i, "j": j, "lhs": v, "rhs": w}));
                let w = self.cn(-i, j - i);
                neg.record(v == w, || json!({"i": i, "j": j, "lhs": v, "rhs": w}));
                let links = [
                    self.cn(j + qp, i + qp),
                    self.cn(-j + qp, i - j),
                    self.cn(i - j + qp, -j),
                    self.cn(j - i + qp, -i + qp),
                    self.cn(-i, j - i),
                ];
                chain.record(
                    links.iter().all(|&x| x == v),
                    || json!({"i": i, "j": j, "value": v, "chain": links}),
                );
                if k % 2 == 0 {
                    let w = self.cn(j, i);
                    even.record(v == w, || json!({"i": i, "j": j, "lhs": v, "rhs": w}));
                }
            }
        }
        suite.push(sym.finish());
        suite.push(neg.finish());
        suite.push(chain.finish());
        let even = even.finish();
        suite.push(if k % 2 == 0 {
            even
        } else {
            even.vacuous("k odd")
        });

        let mut rows = CaseCheck::new("row_sums");
        let mut cols = CaseCheck::new("column_sums");
        for i in 0..l {
            let row: i64 = (0..l).map(|t| self.cn(i, t)).sum();
            let want = if i == qp { k - 1 } else { k };
            rows.record(
                row == want,
                || json!({"i": i, "sum": row, "expected": want}),
            );
            let col: i64 = (0..l).map(|t| self.cn(t, i)).sum();
            let want = if i == 0 { k - 1 } else { k };
            cols.record(
                col == want,
                || json!({"j": i, "sum": col, "expected": want}),
            );
        }
        suite.push(rows.finish());
        suite.push(cols.finish());

        let total: u64 = self.table.iter().sum();
        suite.push(
            Check::new("total_sum")
                .param("expected", self.q() - 2)
                .expect(total == self.q() - 2, || json!({"sum": total})),
        );
        suite
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::build_field;

    fn ctx(p: u64, n: u32, ell: u64) -> CycloCtx {
        CycloCtx::new(Arc::new(build_field(p, n, None).unwrap()), ell).unwrap()
    }

    #[test]
    fn printed_entries() {
        let c =
            CycloCtx::new(Arc::new(build_field(7, 3, Some(&[4, 0, 6, 1])).unwrap()), 6).unwrap();
        assert_eq!(c.cyclotomic_number(0, 3), 14);
        assert_eq!(c.qprime(), 3);
        let c = ctx(131, 1, 10);
        assert_eq!(c.cyclotomic_number(0, 8), 4);
        assert_eq!(c.cyclotomic_number(10, -2), 4);
    }

    #[test]
    fn ell_one_is_degenerate() {
        for p in [3u64, 5, 7, 11] {
            let c = ctx(p, 1, 1);
            assert_eq!(c.cyclotomic_number(0, 0), p - 2);
            assert!(c.verify_shifted_matrices().passed());
            assert_eq!(c.build_matrices().unwrap_err(), Error::EllTooSmall);
        }
    }

    #[test]
    fn rejects_non_divisor() {
        let f = Arc::new(build_field(13, 1, None).unwrap());
        assert_eq!(
            CycloCtx::new(f.clone(), 5).unwrap_err(),
            Error::InvalidEll {
                ell: 5,
                q_minus_1: 12
            }
        );
        assert!(CycloCtx::new(f, 0).is_err());
    }

    #[test]
    fn derived_matrix_relations() {
        for (p, n, ell) in [
            (131u64, 1u32, 10u64),
            (7, 3, 6),
            (13, 1, 4),
            (7, 1, 2),
            (73, 1, 8),
        ] {
            let c = ctx(p, n, ell);
            let d = c.build_matrices().unwrap();
            let qp = c.qprime() as i64;
            assert_eq!(&IntMatrix::perm(ell as usize, qp) * &d.a, d.m);
            assert!(d.m.is_symmetric());
            assert!(d.s.is_symmetric());
            assert_eq!(c.shifted_matrix(0), d.a);
            assert_eq!(c.shifted_matrix(qp), d.a.transpose());
            for v in 0..ell as i64 {
                let p = IntMatrix::perm(ell as usize, v);
                assert_eq!(c.shifted_matrix(v), &(&p * &d.a) * &p.transpose());
                assert_eq!(c.shifted_matrix(v + qp), c.shifted_matrix(v).transpose());
            }
        }
    }

    #[test]
    fn cosets_partition_the_group() {
        let c = ctx(37, 1, 4);
        let mut seen = std::collections::BTreeSet::new();
        for i in 0..4 {
            for x in c.coset(i) {
                assert_eq!(c.class_of(x).unwrap(), i as u64);
                assert!(seen.insert(x));
            }
        }
        assert_eq!(seen.len(), 36);
    }
}
