//! The Schur ring spanned by `1` and the class sums `α_i` of the cosets
//! `g^i K` inside `Z[(F_q, +)]`, its regular representation, and the matrix
//! and inner-product identities that follow from it.
//!
//! Convention for the indicator: `Δ(s, t)` is 1 when `s ≡ t (mod ell)` and 0
//! otherwise. The identity coefficient of `α_i α_v` is `k·Δ(i, v + q')`, and
//! every matrix law is written with `k·(Δ·I - E)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::cyclotomy::CycloCtx;
use crate::error::{Error, Result};
use crate::field::FieldElem;
use crate::ledger::{CaseCheck, Check, VerifySuiteResult};
use crate::linalg::IntMatrix;

/// Largest field for which class sums are multiplied by explicit convolution.
pub const MAX_CONVOLUTION_Q: u64 = 100_000;

/// Largest `ell` for which Theorem-4.1-style quadruples are enumerated exhaustively.
pub const MAX_EXHAUSTIVE_ELL: u64 = 12;

pub const DEFAULT_SAMPLES: usize = 10_000;

#[inline]
fn delta(ctx: &CycloCtx, s: i64, t: i64) -> i64 {
    i64::from((s - t).rem_euclid(ctx.l()) == 0)
}

/// Element of `Z[F_q]` stored densely by canonical index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupRingElem {
    coeffs: Vec<i64>,
}

impl GroupRingElem {
    pub fn zero(q: u64) -> Self {
        GroupRingElem {
            coeffs: vec![0; q as usize],
        }
    }

    pub fn coeff(&self, x: FieldElem) -> i64 {
        self.coeffs[x.0 as usize]
    }

    pub fn support(&self) -> impl Iterator<Item = (FieldElem, i64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(x, &c)| (FieldElem(x as u64), c))
    }

    pub fn support_size(&self) -> usize {
        self.coeffs.iter().filter(|&&c| c != 0).count()
    }

    /// Sum of coefficients (the augmentation map).
    pub fn augmentation(&self) -> i64 {
        self.coeffs.iter().sum()
    }

    /// Product in the group ring of the additive group.
    pub fn convolve(&self, other: &Self, ctx: &CycloCtx) -> Self {
        let field = ctx.field();
        let mut out = Self::zero(field.q());
        let rhs: Vec<(FieldElem, i64)> = other.support().collect();
        for (x, a) in self.support() {
            for &(y, b) in &rhs {
                out.coeffs[field.add(x, y).0 as usize] += a * b;
            }
        }
        out
    }
}

/// `α_i`, the indicator sum of the coset `g^i K`.
pub fn class_sum(ctx: &CycloCtx, i: i64) -> GroupRingElem {
    let mut out = GroupRingElem::zero(ctx.q());
    for x in ctx.coset(i) {
        out.coeffs[x.0 as usize] = 1;
    }
    out
}

/// Checks `α_i α_v = k·Δ(i, v + q')·1 + Σ_j (i - v, j - v) α_j` for every
/// pair by explicit convolution in `Z[F_q]`.
pub fn verify_structure_constants(ctx: &CycloCtx) -> Result<VerifySuiteResult> {
    if ctx.q() > MAX_CONVOLUTION_Q {
        return Err(Error::ContextTooLarge {
            what: "group-ring convolution",
            q: ctx.q(),
            max: MAX_CONVOLUTION_Q,
        });
    }
    let (l, qp, k) = (ctx.l(), ctx.qp(), ctx.k() as i64);
    let sums: Vec<GroupRingElem> = (0..l).map(|i| class_sum(ctx, i)).collect();
    let classes: Vec<i64> = (0..ctx.q())
        .map(|z| match z {
            0 => -1,
            _ => ctx.class_of(FieldElem(z)).expect("nonzero") as i64,
        })
        .collect();

    let pairs: Vec<(i64, i64)> = (0..l).flat_map(|i| (0..l).map(move |v| (i, v))).collect();
    let failures: Vec<Option<serde_json::Value>> = pairs
        .par_iter()
        .map(|&(i, v)| {
            let prod = sums[i as usize].convolve(&sums[v as usize], ctx);
            let want0 = k * delta(ctx, i, v + qp);
            if prod.coeffs[0] != want0 {
                return Some(json!({"i": i, "v": v, "element": 0,
                    "coefficient": prod.coeffs[0], "expected": want0}));
            }
            for (z, &c) in prod.coeffs.iter().enumerate().skip(1) {
                let j = classes[z];
                let want = ctx.cn(i - v, j - v);
                if c != want {
                    return Some(json!({"i": i, "v": v, "element": z,
                        "coefficient": c, "expected": want}));
                }
            }
            None
        })
        .collect();

    let mut check = CaseCheck::new("structure_constants").param("q", ctx.q());
    for f in failures {
        check.record(f.is_none(), || f.clone().unwrap_or_default());
    }
    Ok(std::iter::once(check.finish()).collect())
}

/// Matrix of right multiplication by `α_v` on `{1, α_0, ..., α_{ell-1}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularRep {
    pub v: u64,
    pub matrix: IntMatrix,
}

pub fn regular_rep(ctx: &CycloCtx, v: i64) -> RegularRep {
    let (l, qp) = (ctx.l(), ctx.qp());
    let v = v.rem_euclid(l);
    let av = ctx.shifted_matrix(v);
    let target = 1 + (v + qp).rem_euclid(l) as usize;
    let matrix = IntMatrix::from_fn(l as usize + 1, |r, c| match (r, c) {
        (0, 0) => 0.into(),
        (0, c) => num_bigint::BigInt::from(i64::from(c == 1 + v as usize)),
        (r, 0) => num_bigint::BigInt::from(if r == target { ctx.k() as i64 } else { 0 }),
        (r, c) => av.get(r - 1, c - 1).clone(),
    });
    RegularRep {
        v: v as u64,
        matrix,
    }
}

/// All shifted matrices `A_0, ..., A_{ell-1}` for repeated use.
struct Family {
    shifted: Vec<IntMatrix>,
}

impl Family {
    fn new(ctx: &CycloCtx) -> Self {
        Family {
            shifted: (0..ctx.l()).map(|v| ctx.shifted_matrix(v)).collect(),
        }
    }

    fn get(&self, v: i64) -> &IntMatrix {
        &self.shifted[v.rem_euclid(self.shifted.len() as i64) as usize]
    }

    /// `Σ_w coeff(w) A_w`.
    fn combination(&self, mut coeff: impl FnMut(i64) -> i64) -> IntMatrix {
        let d = self.shifted.len();
        let mut acc = IntMatrix::zeros(d);
        for (w, a) in self.shifted.iter().enumerate() {
            let c = coeff(w as i64);
            if c != 0 {
                acc = &acc + &a.scale(c);
            }
        }
        acc
    }
}

fn residual(lhs: &IntMatrix, rhs: &IntMatrix) -> serde_json::Value {
    json!({"residual": lhs - rhs})
}

/// `[α_u][α_v] = k Δ(u, v+q') I + Σ_w (u-v, w-v) [α_w]`, plus the block
/// relation between `[α_u][α_v]` and `A_u A_v`.
pub fn verify_regular_representation(ctx: &CycloCtx) -> VerifySuiteResult {
    let (l, qp, k) = (ctx.l(), ctx.qp(), ctx.k() as i64);
    let reps: Vec<IntMatrix> = (0..l).map(|v| regular_rep(ctx, v).matrix).collect();
    let fam = Family::new(ctx);
    let d = l as usize + 1;
    let mut hom = CaseCheck::new("regular_rep_homomorphism");
    let mut block = CaseCheck::new("regular_rep_block");
    for u in 0..l {
        for v in 0..l {
            let lhs = &reps[u as usize] * &reps[v as usize];
            let mut rhs = IntMatrix::identity(d).scale(k * delta(ctx, u, v + qp));
            for w in 0..l {
                let c = ctx.cn(u - v, w - v);
                if c != 0 {
                    rhs = &rhs + &reps[w as usize].scale(c);
                }
            }
            hom.record(
                lhs == rhs,
                || json!({"u": u, "v": v, "residual": &lhs - &rhs}),
            );
            // Lower-right block is A_u A_v + k E_{u+q', v}.
            let lower = IntMatrix::from_fn(l as usize, |i, j| lhs.get(i + 1, j + 1).clone());
            let expect =
                &(fam.get(u) * fam.get(v)) + &IntMatrix::unit(l as usize, u + qp, v).scale(k);
            block.record(
                lower == expect,
                || json!({"u": u, "v": v, "residual": &lower - &expect}),
            );
        }
    }
    [hom.finish(), block.finish()].into_iter().collect()
}

/// `A_u A_v = k (Δ(u, v+q') I - E_{u+q', v}) + Σ_w (u-v, w-v) A_w`.
pub fn verify_matrix_product_law(ctx: &CycloCtx) -> VerifySuiteResult {
    let (l, qp, k) = (ctx.l(), ctx.qp(), ctx.k() as i64);
    let d = l as usize;
    let fam = Family::new(ctx);
    let mut check = CaseCheck::new("matrix_product_law");
    for u in 0..l {
        for v in 0..l {
            let lhs = fam.get(u) * fam.get(v);
            let correction = &IntMatrix::identity(d).scale(delta(ctx, u, v + qp))
                - &IntMatrix::unit(d, u + qp, v);
            let rhs = &correction.scale(k) + &fam.combination(|w| ctx.cn(u - v, w - v));
            check.record(lhs == rhs, || {
                let mut r = residual(&lhs, &rhs);
                r["u"] = u.into();
                r["v"] = v.into();
                r
            });
        }
    }
    std::iter::once(check.finish()).collect()
}

/// `A_u^T A_v = k (Δ(u, v) I - E_{u, v}) + Σ_w (u-v+q', w-v) A_w`.
pub fn verify_transposed_product_law(ctx: &CycloCtx) -> VerifySuiteResult {
    let (l, qp, k) = (ctx.l(), ctx.qp(), ctx.k() as i64);
    let d = l as usize;
    let fam = Family::new(ctx);
    let mut check = CaseCheck::new("transposed_product_law");
    for u in 0..l {
        let ut = fam.get(u).transpose();
        for v in 0..l {
            let lhs = &ut * fam.get(v);
            let correction =
                &IntMatrix::identity(d).scale(delta(ctx, u, v)) - &IntMatrix::unit(d, u, v);
            let rhs = &correction.scale(k) + &fam.combination(|w| ctx.cn(u - v + qp, w - v));
            check.record(lhs == rhs, || {
                let mut r = residual(&lhs, &rhs);
                r["u"] = u.into();
                r["v"] = v.into();
                r
            });
        }
    }
    // The u = v = 0 specialization written out on its own.
    let a = fam.get(0);
    let lhs = &a.transpose() * a;
    let rhs = &(&IntMatrix::identity(d) - &IntMatrix::unit(d, 0, 0)).scale(k)
        + &fam.combination(|w| ctx.cn(qp, w));
    let gram = Check::new("gram_expansion").expect(lhs == rhs, || residual(&lhs, &rhs));
    [check.finish(), gram].into_iter().collect()
}

/// `A_u A_v - A_v A_u = k (E_{v+q', u} - E_{u+q', v})` and
/// `A_v^T A_v - A_v A_v^T = k (E_{v+q', v+q'} - E_{v, v})`.
pub fn verify_commutator(ctx: &CycloCtx) -> VerifySuiteResult {
    let (l, qp, k) = (ctx.l(), ctx.qp(), ctx.k() as i64);
    let d = l as usize;
    let fam = Family::new(ctx);
    let mut comm = CaseCheck::new("commutator");
    let mut normal = CaseCheck::new("near_normality");
    for u in 0..l {
        for v in 0..l {
            let lhs = &(fam.get(u) * fam.get(v)) - &(fam.get(v) * fam.get(u));
            let rhs = (&IntMatrix::unit(d, v + qp, u) - &IntMatrix::unit(d, u + qp, v)).scale(k);
            comm.record(
                lhs == rhs,
                || json!({"u": u, "v": v, "residual": &lhs - &rhs}),
            );
        }
        let a = fam.get(u);
        let lhs = &(&a.transpose() * a) - &(a * &a.transpose());
        let rhs = (&IntMatrix::unit(d, u + qp, u + qp) - &IntMatrix::unit(d, u, u)).scale(k);
        normal.record(lhs == rhs, || json!({"v": u, "residual": &lhs - &rhs}));
    }
    [comm.finish(), normal.finish()].into_iter().collect()
}

/// Trace identities: `tr A_w`, `tr(A_u A_v)`, `tr(A^2)` and `tr(A^3)`.
pub fn verify_traces(ctx: &CycloCtx) -> VerifySuiteResult {
    let (l, qp, k, q) = (ctx.l(), ctx.qp(), ctx.k() as i64, ctx.q() as i64);
    let fam = Family::new(ctx);
    let mut suite = VerifySuiteResult::new();

    let mut single = CaseCheck::new("trace_shifted");
    for w in 0..l {
        let t = fam.get(w).trace();
        single.record(
            t == (k - 1).into(),
            || json!({"w": w, "trace": t.to_string()}),
        );
    }
    suite.push(single.finish());

    let mut pair = CaseCheck::new("trace_product");
    for u in 0..l {
        for v in 0..l {
            let t = (fam.get(u) * fam.get(v)).trace();
            let want = (q - 2 * k) * delta(ctx, u - v, qp) + k * (k - 1);
            pair.record(
                t == want.into(),
                || json!({"u": u, "v": v, "trace": t.to_string(), "expected": want}),
            );
        }
    }
    suite.push(pair.finish());

    let a = fam.get(0);
    let a2 = a * a;
    let t2 = a2.trace();
    let want2 = if k % 2 == 0 {
        k * (k - 1) + q - 2 * k
    } else {
        k * (k - 1)
    };
    suite.push(
        Check::new("trace_square")
            .param("expected", want2)
            .expect(t2 == want2.into(), || json!({"trace": t2.to_string()})),
    );
    let t3 = (&a2 * a).trace();
    let want3 = ctx.cn(0, qp) * (q - 3 * k) + k * k * (k - 1);
    suite.push(
        Check::new("trace_cube")
            .param("expected", want3)
            .expect(t3 == want3.into(), || json!({"trace": t3.to_string()})),
    );
    suite
}

/// `Σ_{i,j} (i, j)^2 = q + k(k - 3)`, both as a table sum and as `tr(A^T A)`.
pub fn verify_sum_of_squares(ctx: &CycloCtx) -> VerifySuiteResult {
    let (l, k, q) = (ctx.l(), ctx.k() as i64, ctx.q() as i64);
    let want = q + k * (k - 3);
    let sum: i64 = (0..l)
        .flat_map(|i| (0..l).map(move |j| (i, j)))
        .map(|(i, j)| ctx.cn(i, j).pow(2))
        .sum();
    let a = ctx.matrix();
    let gram_trace = (&a.transpose() * &a).trace();
    std::iter::once(Check::new("sum_of_squares").param("expected", want).expect(
        sum == want && gram_trace == want.into(),
        || json!({"sum": sum, "gram_trace": gram_trace.to_string()}),
    ))
    .collect()
}

/// How quadruples `(i, j, u, v)` are chosen for the column inner-product identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadrupleMode {
    Exhaustive,
    Sampled {
        count: usize,
        seed: u64,
    },
    /// Exhaustive up to `MAX_EXHAUSTIVE_ELL`, sampled beyond.
    Auto {
        seed: u64,
    },
}

fn quadruples(ell: i64, mode: QuadrupleMode) -> (Vec<[i64; 4]>, &'static str) {
    let exhaustive = || {
        let mut out = Vec::with_capacity((ell as usize).pow(4));
        for i in 0..ell {
            for j in 0..ell {
                for u in 0..ell {
                    for v in 0..ell {
                        out.push([i, j, u, v]);
                    }
                }
            }
        }
        out
    };
    let sampled = |count: usize, seed: u64| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| std::array::from_fn(|_| rng.gen_range(0..ell)))
            .collect()
    };
    match mode {
        QuadrupleMode::Exhaustive => (exhaustive(), "exhaustive"),
        QuadrupleMode::Sampled { count, seed } => (sampled(count, seed), "sampled"),
        QuadrupleMode::Auto { seed } if ell as u64 > MAX_EXHAUSTIVE_ELL => {
            (sampled(DEFAULT_SAMPLES, seed), "sampled")
        }
        QuadrupleMode::Auto { .. } => (exhaustive(), "exhaustive"),
    }
}

/// `Σ_w (w-u, i-u)(w-v, j-v) = k(Δ(i,j)Δ(u,v) - Δ(i,u)Δ(j,v)) + Σ_w (w-v, u-v)(w-j, i-j)`
/// and its reduction `Σ_w (w, a)(w+m, b) = Σ_w (w, a')(w+m, b')` whenever
/// `u ≢ v` and `(i, j) ≢ (u, v)`.
pub fn verify_column_inner_products(ctx: &CycloCtx, mode: QuadrupleMode) -> VerifySuiteResult {
    let (l, qp, k) = (ctx.l(), ctx.qp(), ctx.k() as i64);
    let (quads, how) = quadruples(l, mode);
    let mut main = CaseCheck::new("column_inner_product_identity").param("mode", how);
    let mut reduced = CaseCheck::new("snapper_reduction").param("mode", how);
    for [i, j, u, v] in quads {
        let lhs: i64 = (0..l)
            .map(|w| ctx.cn(w - u, i - u) * ctx.cn(w - v, j - v))
            .sum();
        let tail: i64 = (0..l)
            .map(|w| ctx.cn(w - v, u - v) * ctx.cn(w - j, i - j))
            .sum();
        let rhs =
            k * (delta(ctx, i, j) * delta(ctx, u, v) - delta(ctx, i, u) * delta(ctx, j, v)) + tail;
        main.record(
            lhs == rhs,
            || json!({"i": i, "j": j, "u": u, "v": v, "lhs": lhs, "rhs": rhs}),
        );
        let distinct_pair = delta(ctx, i, u) * delta(ctx, j, v) == 0;
        if delta(ctx, u, v) == 0 && distinct_pair {
            let (a, b, m) = (i - u, v - j, u - j + qp);
            let (a2, b2) = (v - u, i - j);
            let left = shifted_column_product(ctx, a, b, m);
            let right = shifted_column_product(ctx, a2, b2, m);
            reduced.record(left == right, || {
                json!({"a": a, "b": b, "a_prime": a2, "b_prime": b2, "m": m,
                    "lhs": left, "rhs": right})
            });
        }
    }
    [main.finish(), reduced.finish()].into_iter().collect()
}

/// `Σ_w (w, a)(w + m, b)`.
pub fn shifted_column_product(ctx: &CycloCtx, a: i64, b: i64, m: i64) -> i64 {
    (0..ctx.l()).map(|w| ctx.cn(w, a) * ctx.cn(w + m, b)).sum()
}

/// Inner products between columns of `A`, all expressed through column 0.
pub fn verify_column_products(ctx: &CycloCtx) -> VerifySuiteResult {
    let (l, qp, k) = (ctx.l(), ctx.qp(), ctx.k() as i64);
    let col = |i: i64, j: i64| -> i64 { (0..l).map(|w| ctx.cn(w, i) * ctx.cn(w, j)).sum() };
    let mut suite = VerifySuiteResult::new();

    let mut sq = CaseCheck::new("column_square");
    for i in 1..l {
        let lhs = col(i, i);
        let rhs = k + (0..l).map(|w| ctx.cn(w, 0) * ctx.cn(w - i, 0)).sum::<i64>();
        sq.record(lhs == rhs, || json!({"i": i, "lhs": lhs, "rhs": rhs}));
    }
    suite.push(sq.finish());

    let mut cross = CaseCheck::new("column_cross");
    for i in 0..l {
        for j in 0..l {
            if i == j {
                continue;
            }
            let lhs = col(i, j);
            let rhs: i64 = (0..l).map(|w| ctx.cn(w, 0) * ctx.cn(w - j, i - j)).sum();
            cross.record(
                lhs == rhs,
                || json!({"i": i, "j": j, "lhs": lhs, "rhs": rhs}),
            );
        }
    }
    suite.push(cross.finish());

    let odd = k % 2 == 1;
    let mut half = Check::new("column_qprime_square");
    if odd {
        let lhs = col(qp, qp);
        let rhs = k + col(0, 0);
        half = half.expect(lhs == rhs, || json!({"lhs": lhs, "rhs": rhs}));
    } else {
        half = half.vacuous("k even");
    }
    suite.push(half);

    let mut shift = CaseCheck::new("column_half_shift");
    if odd {
        for i in 0..l {
            for j in 0..l {
                if (i, j) == (0, 0) || (i, j) == (qp, qp) {
                    continue;
                }
                let lhs = col(i, j);
                let rhs = col(i + qp, j + qp);
                shift.record(
                    lhs == rhs,
                    || json!({"i": i, "j": j, "lhs": lhs, "rhs": rhs}),
                );
            }
        }
        suite.push(shift.finish());
    } else {
        suite.push(shift.finish().vacuous("k even"));
    }
    suite
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnPermutation {
    pub j: u64,
    pub permutation: bool,
}

/// Whether column `j` of `A` is a rearrangement of column `j + q'`,
/// for `1 <= j < q'`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyReport {
    pub q: u64,
    pub ell: u64,
    pub k: u64,
    pub qprime: u64,
    pub columns: Vec<ColumnPermutation>,
    pub all_permutations: bool,
}

pub fn column_permutation_survey(ctx: &CycloCtx) -> Result<SurveyReport> {
    if ctx.k().is_multiple_of(2) {
        return Err(Error::KEven(ctx.k()));
    }
    let (l, qp) = (ctx.l(), ctx.qp());
    let column = |j: i64| {
        let mut c: Vec<u64> = (0..l).map(|w| ctx.cyclotomic_number(w, j)).collect();
        c.sort_unstable();
        c
    };
    let columns: Vec<ColumnPermutation> = (1..qp)
        .map(|j| ColumnPermutation {
            j: j as u64,
            permutation: column(j) == column(j + qp),
        })
        .collect();
    Ok(SurveyReport {
        q: ctx.q(),
        ell: ctx.ell(),
        k: ctx.k(),
        qprime: ctx.qprime(),
        all_permutations: columns.iter().all(|c| c.permutation),
        columns,
    })
}

/// Named groups of checks selectable from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    /// Structure constants by convolution and the regular representation.
    Schur,
    /// Table laws, matrix product laws, traces and column inner products.
    Identities,
    All,
}

pub fn verify_suite(
    ctx: &CycloCtx,
    suite: Suite,
    mode: QuadrupleMode,
) -> Result<VerifySuiteResult> {
    let mut out = VerifySuiteResult::new();
    if matches!(suite, Suite::Schur | Suite::All) {
        out.extend(verify_structure_constants(ctx)?);
        out.extend(verify_regular_representation(ctx));
    }
    if matches!(suite, Suite::Identities | Suite::All) {
        out.extend(ctx.verify_shifted_matrices());
        out.extend(verify_matrix_product_law(ctx));
        out.extend(verify_transposed_product_law(ctx));
        out.extend(verify_commutator(ctx));
        out.extend(verify_traces(ctx));
        out.extend(verify_sum_of_squares(ctx));
        out.extend(verify_column_inner_products(ctx, mode));
        out.extend(verify_column_products(ctx));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::build_field;
    use std::sync::Arc;

    fn ctx(p: u64, n: u32, ell: u64) -> CycloCtx {
        CycloCtx::new(Arc::new(build_field(p, n, None).unwrap()), ell).unwrap()
    }

    #[test]
    fn class_sums() {
        let c = ctx(7, 1, 2);
        let squares: Vec<u64> = (1..7u64)
            .filter(|x| (1..7u64).any(|y| y * y % 7 == *x))
            .collect();
        let a0 = class_sum(&c, 0);
        let support: Vec<u64> = a0.support().map(|(x, _)| x.0).collect();
        assert_eq!(support, squares);
        assert_eq!(squares, vec![1, 2, 4]);
        for i in 0..2 {
            assert_eq!(class_sum(&c, i).support_size(), 3);
        }
        let whole = class_sum(&ctx(11, 1, 1), 0);
        assert_eq!(whole.support_size(), 10);
        assert_eq!(whole.coeff(FieldElem(0)), 0);
    }

    #[test]
    fn ell_one_square_at_q5() {
        // K = F_5^*, k = 4 even, q' = 0: α_0² = 4·1 + 3·α_0.
        let c = ctx(5, 1, 1);
        let a = class_sum(&c, 0);
        let sq = a.convolve(&a, &c);
        assert_eq!(sq.coeff(FieldElem(0)), 4);
        for z in 1..5 {
            assert_eq!(sq.coeff(FieldElem(z)), 3);
        }
        assert!(verify_structure_constants(&c).unwrap().passed());
    }

    #[test]
    fn structure_constants_guard() {
        let big = ctx(100_003, 1, 2);
        assert!(matches!(
            verify_structure_constants(&big),
            Err(Error::ContextTooLarge { .. })
        ));
    }

    #[test]
    fn regular_rep_shape() {
        let c = ctx(131, 1, 10);
        let r = regular_rep(&c, 3);
        assert_eq!(r.matrix.get(0, 0), &0.into());
        assert_eq!(r.matrix.get(0, 4), &1.into());
        assert_eq!(r.matrix.get(1 + 8, 0), &13.into());
        assert_eq!(
            IntMatrix::from_fn(10, |i, j| r.matrix.get(i + 1, j + 1).clone()),
            c.shifted_matrix(3)
        );
    }

    #[test]
    fn identities_on_small_fields() {
        for (p, n, ell) in [
            (7u64, 1u32, 2u64),
            (7, 1, 3),
            (13, 1, 4),
            (3, 2, 4),
            (5, 2, 6),
            (7, 3, 6),
        ] {
            let c = ctx(p, n, ell);
            let suite = verify_suite(&c, Suite::All, QuadrupleMode::Auto { seed: 1 }).unwrap();
            assert!(
                suite.passed(),
                "({p},{n},{ell}): {:?}",
                suite.failures().next()
            );
        }
    }

    #[test]
    fn commutator_f131() {
        let c = ctx(131, 1, 10);
        let a = c.matrix();
        let d = &(&a.transpose() * &a) - &(&a * &a.transpose());
        for i in 0..10 {
            for j in 0..10 {
                let want = match (i, j) {
                    (0, 0) => -13,
                    (5, 5) => 13,
                    _ => 0,
                };
                assert_eq!(d.get(i, j), &want.into());
            }
        }
    }

    #[test]
    fn survey_requires_odd_k() {
        assert_eq!(
            column_permutation_survey(&ctx(13, 1, 3)).unwrap_err(),
            Error::KEven(4)
        );
        let r = column_permutation_survey(&ctx(37, 1, 4)).unwrap();
        assert!(r.all_permutations);
        assert_eq!(r.columns.len(), 1);
    }

    #[test]
    fn sampled_mode_is_reproducible() {
        let (a, how) = quadruples(14, QuadrupleMode::Auto { seed: 9 });
        let (b, _) = quadruples(14, QuadrupleMode::Auto { seed: 9 });
        assert_eq!(how, "sampled");
        assert_eq!(a.len(), DEFAULT_SAMPLES);
        assert_eq!(a, b);
        assert_eq!(quadruples(3, QuadrupleMode::Auto { seed: 9 }).0.len(), 81);
    }
}
