//! Power difference sets: four detectors for whether `K` is a difference set
//! of `(F_q, +)`, the exact certificates that must hold when it is, the
//! modified set `K_0 = K ∪ {0}`, and range searches.

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::arith::{is_prime, perfect_square_root, prime_power, two_odd_squares};
use crate::cyclotomy::CycloCtx;
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem, FieldSpec};
use crate::ledger::{CaseCheck, Check, VerifySuiteResult};
use crate::linalg::IntMatrix;
use crate::poly::IntPoly;

/// Largest field handled by the class-representative brute force.
pub const MAX_BRUTEFORCE_Q: u64 = 1_000_000;

/// Largest field handled by literal pair enumeration.
pub const MAX_LITERAL_Q: u64 = 2_000;

/// Upper bound accepted by [`search`].
pub const MAX_SEARCH_Q: u64 = 200_000;

/// Tolerance for comparing numeric eigenvalues with their closed forms.
pub const SPECTRAL_TOLERANCE: f64 = 1e-9;

fn require_ell(ctx: &CycloCtx) -> Result<()> {
    match ctx.ell() {
        1 => Err(Error::EllOne),
        _ => Ok(()),
    }
}

fn not_a_diffset(ctx: &CycloCtx) -> Error {
    Error::NotADifferenceSet {
        q: ctx.q(),
        ell: ctx.ell(),
    }
}

/// `λ` when column 0 of `A` is constant, otherwise `NotADifferenceSet`.
fn confirmed_lambda(ctx: &CycloCtx) -> Result<i64> {
    if is_diffset_lehmer(ctx)? {
        Ok(ctx.cn(0, 0))
    } else {
        Err(not_a_diffset(ctx))
    }
}

/// `Σ_i (i, j)^2`, the `j`-th diagonal entry of `A^T A`.
pub fn column_square_sum(ctx: &CycloCtx, j: i64) -> i64 {
    (0..ctx.l()).map(|i| ctx.cn(i, j).pow(2)).sum()
}

fn membership(ctx: &CycloCtx, include_zero: bool) -> Vec<bool> {
    let mut member = vec![false; ctx.q() as usize];
    for x in ctx.coset(0) {
        member[x.0 as usize] = true;
    }
    member[0] = include_zero;
    member
}

/// For each class `i`, the number of pairs `(x, y)` in `K × K` (or
/// `K_0 × K_0`) with `x - y = g^i`. Every `z` in `g^i K` has the same count,
/// so one representative per class suffices.
pub fn representation_counts(ctx: &CycloCtx, include_zero: bool) -> Result<Vec<u64>> {
    require_ell(ctx)?;
    if ctx.q() > MAX_BRUTEFORCE_Q {
        return Err(Error::ContextTooLarge {
            what: "difference representation count",
            q: ctx.q(),
            max: MAX_BRUTEFORCE_Q,
        });
    }
    let field = ctx.field();
    let member = membership(ctx, include_zero);
    let members: Vec<FieldElem> = (0..ctx.q())
        .filter(|&x| member[x as usize])
        .map(FieldElem)
        .collect();
    Ok((0..ctx.ell())
        .map(|i| {
            let z = field.exp(i);
            members
                .iter()
                .filter(|&&y| member[field.add(y, z).0 as usize])
                .count() as u64
        })
        .collect())
}

/// Count of `x - y = z` over all pairs, indexed by `z`; entry 0 is left at 0.
pub fn representation_counts_literal(ctx: &CycloCtx, include_zero: bool) -> Result<Vec<u64>> {
    require_ell(ctx)?;
    if ctx.q() > MAX_LITERAL_Q {
        return Err(Error::ContextTooLarge {
            what: "literal pair enumeration",
            q: ctx.q(),
            max: MAX_LITERAL_Q,
        });
    }
    let field = ctx.field();
    let member = membership(ctx, include_zero);
    let members: Vec<FieldElem> = (0..ctx.q())
        .filter(|&x| member[x as usize])
        .map(FieldElem)
        .collect();
    let mut counts = vec![0u64; ctx.q() as usize];
    for &x in &members {
        for &y in &members {
            let z = field.sub(x, y);
            if !z.is_zero() {
                counts[z.0 as usize] += 1;
            }
        }
    }
    Ok(counts)
}

fn common_value(counts: &[u64]) -> Option<u64> {
    let first = *counts.first()?;
    counts.iter().all(|&c| c == first).then_some(first)
}

/// Direct count of difference representations. Returns the common `λ` on success.
pub fn is_diffset_bruteforce(ctx: &CycloCtx) -> Result<(bool, Option<u64>)> {
    let lambda = common_value(&representation_counts(ctx, false)?);
    Ok((lambda.is_some(), lambda))
}

/// Column 0 of `A` is constant.
pub fn is_diffset_lehmer(ctx: &CycloCtx) -> Result<bool> {
    require_ell(ctx)?;
    let c0 = ctx.cn(0, 0);
    let constant = (1..ctx.l()).all(|i| ctx.cn(i, 0) == c0);
    if constant {
        assert!(
            ctx.k() % 2 == 1 && ctx.ell().is_multiple_of(2) && c0 * ctx.l() == ctx.k() as i64 - 1,
            "constant first column without k odd, ell even, (0,0) = (k-1)/ell at q={}",
            ctx.q()
        );
    }
    Ok(constant)
}

/// `k` odd and some column `j` coprime to `ell` has the same square sum as column `q'`.
pub fn is_diffset_sumsq(ctx: &CycloCtx) -> Result<bool> {
    require_ell(ctx)?;
    if ctx.k().is_multiple_of(2) {
        return Ok(false);
    }
    let top = column_square_sum(ctx, ctx.qp());
    Ok((1..ctx.l()).any(|j| j.gcd(&ctx.l()) == 1 && column_square_sum(ctx, j) == top))
}

/// `k` odd and `diag(A^T A)` has the form `(a, b, ..., b)`.
pub fn is_diffset_gram(ctx: &CycloCtx) -> Result<bool> {
    require_ell(ctx)?;
    if ctx.k().is_multiple_of(2) {
        return Ok(false);
    }
    let b = column_square_sum(ctx, 1);
    Ok((2..ctx.l()).all(|j| column_square_sum(ctx, j) == b))
}

/// Inequalities behind the square-sum detectors, valid for every context.
pub fn verify_square_sum_bounds(ctx: &CycloCtx) -> Result<VerifySuiteResult> {
    let (bruteforce, _) = is_diffset_bruteforce(ctx)?;
    let (l, k) = (ctx.l(), ctx.k() as i64);
    let mut suite = VerifySuiteResult::new();

    let s0 = (0..l).map(|i| ctx.cn(i, 0).pow(2)).sum::<i64>();
    let bound = (k - 1).pow(2);
    suite.push(
        Check::new("column_zero_bound")
            .param("ell_times_sum", l * s0)
            .param("bound", bound)
            .expect(
                l * s0 >= bound && ((l * s0 == bound) == bruteforce),
                || json!({"ell_times_sum": l * s0, "bound": bound, "bruteforce": bruteforce}),
            ),
    );

    let mut cols = CaseCheck::new("column_square_bound");
    if k % 2 == 1 {
        let top = column_square_sum(ctx, ctx.qp());
        for j in 1..l {
            let s = column_square_sum(ctx, j);
            cols.record(s <= top, || json!({"j": j, "sum": s, "qprime_sum": top}));
        }
        suite.push(cols.finish());
    } else {
        suite.push(cols.finish().vacuous("k even"));
    }

    let counts = representation_counts(ctx, false)?;
    let mut classes = CaseCheck::new("class_count_is_first_column");
    for (i, &c) in counts.iter().enumerate() {
        let want = ctx.cyclotomic_number(i as i64, 0);
        classes.record(c == want, || json!({"i": i, "count": c, "expected": want}));
    }
    suite.push(classes.finish());
    Ok(suite)
}

/// `(0, j)` is odd exactly for the class `j` containing 2.
pub fn verify_class_of_two(ctx: &CycloCtx) -> Check {
    let two = ctx.field().from_int(2);
    let j2 = ctx
        .class_of(two)
        .expect("2 is nonzero in odd characteristic") as i64;
    let mut check = CaseCheck::new("class_of_two").param("class_of_two", j2);
    for j in 0..ctx.l() {
        let odd = ctx.cn(0, j) % 2 == 1;
        check.record(odd == (j == j2), || json!({"j": j, "value": ctx.cn(0, j)}));
    }
    check.finish()
}

/// `A^T A`, `B^T B`, `M^2`, `S^2` closed forms and `Σ_{j≥1} ((0,j) - λ)^2 = k - 2λ`.
pub fn verify_gram_identities(ctx: &CycloCtx) -> Result<VerifySuiteResult> {
    let lambda = confirmed_lambda(ctx)?;
    let k = ctx.k() as i64;
    let d = ctx.build_matrices()?;
    let l = ctx.ell() as usize;
    let mut suite = VerifySuiteResult::new();

    let ata = &d.a.transpose() * &d.a;
    let want = &(&IntMatrix::ones(l).scale(lambda * k) + &IntMatrix::identity(l).scale(k - lambda))
        - &IntMatrix::unit(l, 0, 0).scale(k);
    suite.push(
        Check::new("gram_identity").expect(ata == want, || json!({"residual": &ata - &want})),
    );

    let btb = &d.b.transpose() * &d.b;
    let want_b =
        (&IntMatrix::ones(l - 1).scale(lambda) + &IntMatrix::identity(l - 1)).scale(k - lambda);
    suite.push(
        Check::new("b_gram_identity").expect(btb == want_b, || json!({"residual": &btb - &want_b})),
    );

    let m2 = &d.m * &d.m;
    suite
        .push(Check::new("m_square_is_gram").expect(m2 == ata, || json!({"residual": &m2 - &ata})));
    let s2 = &d.s * &d.s;
    suite.push(
        Check::new("s_square_is_b_gram").expect(s2 == btb, || json!({"residual": &s2 - &btb})),
    );

    let dev: i64 = (1..ctx.l()).map(|j| (ctx.cn(0, j) - lambda).pow(2)).sum();
    suite.push(
        Check::new("zero_row_deviation")
            .param("expected", k - 2 * lambda)
            .expect(dev == k - 2 * lambda, || json!({"sum": dev})),
    );
    Ok(suite)
}

/// Numeric eigenvalues compared against their closed forms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub computed: Vec<f64>,
    pub expected: Vec<f64>,
    pub max_deviation: f64,
}

impl Spectrum {
    fn compare(poly: &IntPoly, mut expected: Vec<f64>) -> Self {
        let computed = poly.real_roots_flat();
        expected.sort_by(f64::total_cmp);
        let max_deviation = if computed.len() == expected.len() {
            computed
                .iter()
                .zip(&expected)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        } else {
            f64::INFINITY
        };
        Spectrum {
            computed,
            expected,
            max_deviation,
        }
    }

    pub fn matches(&self) -> bool {
        self.max_deviation <= SPECTRAL_TOLERANCE
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralData {
    pub m_char_poly: IntPoly,
    pub s_char_poly: IntPoly,
    pub m: Spectrum,
    pub s: Spectrum,
    pub tolerance: f64,
}

/// Annihilating polynomials of `M` and `S`, their traces, the exact form of
/// `S^2 - (k-λ) I`, and numeric spectra from the exact characteristic polynomials.
pub fn verify_spectral(ctx: &CycloCtx) -> Result<(VerifySuiteResult, SpectralData)> {
    let lambda = confirmed_lambda(ctx)?;
    let k = ctx.k() as i64;
    let n = k - lambda;
    let d = ctx.build_matrices()?;
    let l = ctx.ell() as usize;
    let mut suite = VerifySuiteResult::new();

    let m_annihilator = IntPoly::quadratic(-k, lambda).mul(&IntPoly::quadratic(0, -n));
    let res = m_annihilator.eval_at_matrix(&d.m);
    suite.push(
        Check::new("m_annihilator")
            .param("polynomial", m_annihilator.to_string())
            .expect(res.is_zero(), || json!({"residual": res})),
    );
    let s_annihilator = IntPoly::linear_root(n).mul(&IntPoly::quadratic(0, -n));
    let res = s_annihilator.eval_at_matrix(&d.s);
    suite.push(
        Check::new("s_annihilator")
            .param("polynomial", s_annihilator.to_string())
            .expect(res.is_zero(), || json!({"residual": res})),
    );

    let ts = d.s.trace();
    suite.push(
        Check::new("trace_s")
            .param("expected", n)
            .expect(ts == n.into(), || json!({"trace": ts.to_string()})),
    );
    let tm = d.m.trace();
    suite.push(
        Check::new("trace_m")
            .param("expected", k)
            .expect(tm == k.into(), || json!({"trace": tm.to_string()})),
    );

    let shifted = &(&d.s * &d.s) - &IntMatrix::identity(l - 1).scale(n);
    let want = IntMatrix::ones(l - 1).scale(lambda * n);
    suite.push(
        Check::new("s_square_shift")
            .expect(shifted == want, || json!({"residual": &shifted - &want})),
    );
    let rank = shifted.rank();
    let rank_check = Check::new("s_square_shift_rank").param("rank", rank);
    suite.push(if lambda == 0 {
        rank_check.vacuous("lambda = 0")
    } else {
        rank_check.expect(rank == 1, || json!({"rank": rank}))
    });

    let half = l / 2 - 1;
    let root = (n as f64).sqrt();
    let paired = || std::iter::repeat_n(root, half).chain(std::iter::repeat_n(-root, half));
    let disc = ((k * k - 4 * lambda) as f64).sqrt();
    let m_poly = d.m.char_poly();
    let s_poly = d.s.char_poly();
    let m = Spectrum::compare(
        &m_poly,
        [(k as f64 + disc) / 2.0, (k as f64 - disc) / 2.0]
            .into_iter()
            .chain(paired())
            .collect(),
    );
    let s = Spectrum::compare(&s_poly, std::iter::once(n as f64).chain(paired()).collect());
    suite.push(
        Check::new("m_spectrum_numeric")
            .param("tolerance", SPECTRAL_TOLERANCE)
            .expect(
                m.matches(),
                || json!({"computed": m.computed, "expected": m.expected}),
            ),
    );
    suite.push(
        Check::new("s_spectrum_numeric")
            .param("tolerance", SPECTRAL_TOLERANCE)
            .expect(
                s.matches(),
                || json!({"computed": s.computed, "expected": s.expected}),
            ),
    );
    Ok((
        suite,
        SpectralData {
            m_char_poly: m_poly,
            s_char_poly: s_poly,
            m,
            s,
            tolerance: SPECTRAL_TOLERANCE,
        },
    ))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeterminantPair {
    pub predicted: String,
    pub computed: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Determinants {
    pub a: DeterminantPair,
    pub b: DeterminantPair,
}

/// `det A = -λ (k-λ)^(ell/2 - 1)` and `det B = (-1)^(ell/2 - 1) (k-λ)^(ell/2)`.
pub fn verify_determinants(ctx: &CycloCtx) -> Result<(VerifySuiteResult, Determinants)> {
    let lambda = confirmed_lambda(ctx)?;
    let n = BigInt::from(ctx.k() as i64 - lambda);
    let half = (ctx.ell() / 2) as u32;
    let d = ctx.build_matrices()?;

    let predicted_a = -BigInt::from(lambda) * n.pow(half - 1);
    let sign = if (half - 1).is_multiple_of(2) { 1 } else { -1 };
    let predicted_b = BigInt::from(sign) * n.pow(half);
    let (det_a, det_b) = (d.a.determinant(), d.b.determinant());
    let pair = |p: &BigInt, c: &BigInt| DeterminantPair {
        predicted: p.to_string(),
        computed: c.to_string(),
    };
    let suite = [
        Check::new("det_a").expect(det_a == predicted_a, || json!(pair(&predicted_a, &det_a))),
        Check::new("det_b").expect(det_b == predicted_b, || json!(pair(&predicted_b, &det_b))),
    ]
    .into_iter()
    .collect();
    Ok((
        suite,
        Determinants {
            a: pair(&predicted_a, &det_a),
            b: pair(&predicted_b, &det_b),
        },
    ))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceFlags {
    pub q_mod_8: u64,
    pub k_mod_8: u64,
    pub ell_mod_8: u64,
    pub lambda_mod_4: u64,
    pub lambda_odd: bool,
    pub two_is_square: bool,
}

/// Parity and mod-8 constraints on `q`, `k`, `ell`, `λ` for a difference set.
pub fn verify_congruences(ctx: &CycloCtx) -> Result<(VerifySuiteResult, CongruenceFlags)> {
    let lambda = confirmed_lambda(ctx)? as u64;
    let (q, k, ell) = (ctx.q(), ctx.k(), ctx.ell());
    let two_class = ctx.field().dlog(ctx.field().from_int(2))?;
    let flags = CongruenceFlags {
        q_mod_8: q % 8,
        k_mod_8: k % 8,
        ell_mod_8: ell % 8,
        lambda_mod_4: lambda % 4,
        lambda_odd: lambda % 2 == 1,
        two_is_square: two_class % 2 == 0,
    };
    let snapshot = || json!(flags);
    let mut suite = VerifySuiteResult::new();

    let c = Check::new("odd_lambda_classification");
    suite.push(if flags.lambda_odd {
        let case_i = ell % 8 == 0 && q % 8 == 1 && k % 8 == 1;
        let case_ii = ell % 8 == 2 && q % 8 == 7 && k % 8 == (2 * lambda + 1) % 8;
        c.expect(case_i || case_ii, snapshot)
    } else {
        c.vacuous("lambda even")
    });

    let c = Check::new("lambda_parity");
    suite.push(if ell % 4 == 2 {
        c.expect(lambda % 2 == ((k - 1) / 2) % 2, snapshot)
    } else {
        c.vacuous("ell not 2 mod 4")
    });

    let c = Check::new("lambda_parity_ell_2_mod_8");
    suite.push(if ell % 8 == 2 {
        let by_q = flags.lambda_odd == (q % 8 == 7) && !flags.lambda_odd == (q % 8 == 3);
        c.expect(by_q && flags.lambda_odd == flags.two_is_square, snapshot)
    } else {
        c.vacuous("ell not 2 mod 8")
    });

    let c = Check::new("lambda_parity_ell_6_mod_8");
    suite.push(if ell % 8 == 6 {
        let odd_even_entry = (1..ctx.l()).any(|j| j % 2 == 0 && ctx.cn(0, j) % 2 == 1);
        let ok =
            !flags.lambda_odd && k % 4 == 1 && q % 8 == 7 && flags.two_is_square && odd_even_entry;
        c.expect(ok, snapshot)
    } else {
        c.vacuous("ell not 6 mod 8")
    });

    let c = Check::new("odd_lambda_mod_4");
    suite.push(if flags.lambda_odd && ell % 8 == 0 {
        c.expect(lambda % 4 == 1, snapshot)
    } else {
        c.vacuous("needs lambda odd and 8 | ell")
    });

    let c = Check::new("unit_lambda_row");
    suite.push(if lambda == 1 {
        let row: Vec<i64> = (1..ctx.l()).map(|j| ctx.cn(0, j)).collect();
        c.expect(
            row.iter().all(|&v| v == 0 || v == 2),
            || json!({"row": row}),
        )
    } else {
        c.vacuous("lambda != 1")
    });

    suite.push(verify_class_of_two(ctx));
    Ok((suite, flags))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchoenbergData {
    pub q_minus_k: u64,
    pub square_root: Option<u64>,
    pub ell_mod_4: u64,
    pub two_odd_squares: Option<(u64, u64)>,
    /// `e` with `λ = 1 + ell + ... + ell^e`, if any.
    pub geometric_exponent: Option<u32>,
    pub holds: bool,
}

fn geometric_exponent(lambda: u64, ell: u64) -> Option<u32> {
    if lambda == 0 || ell < 2 {
        return None;
    }
    let (mut sum, mut term, mut e) = (1u64, 1u64, 0u32);
    while sum < lambda {
        term = term.checked_mul(ell)?;
        sum = sum.checked_add(term)?;
        e += 1;
    }
    (sum == lambda).then_some(e)
}

/// When `q - k = ell (k - λ)` is a perfect square, `ell ≡ 0 (mod 4)` or `ell`
/// is a sum of two odd squares; the geometric-`λ` and `λ = 1` specializations.
pub fn check_schoenberg_condition(ctx: &CycloCtx) -> Result<(VerifySuiteResult, SchoenbergData)> {
    let lambda = confirmed_lambda(ctx)? as u64;
    let (q, k, ell) = (ctx.q(), ctx.k(), ctx.ell());
    let q_minus_k = q - k;
    let square_root = perfect_square_root(q_minus_k);
    let odd_squares = two_odd_squares(ell);
    let geometric = geometric_exponent(lambda, ell);
    let simplex = ell % 4 == 0 || odd_squares.is_some();
    let plane = ell % 8 == 0 || odd_squares.is_some();
    let data = SchoenbergData {
        q_minus_k,
        square_root,
        ell_mod_4: ell % 4,
        two_odd_squares: odd_squares,
        geometric_exponent: geometric,
        holds: square_root.is_none() || simplex,
    };
    let snapshot = || json!(data);
    let mut suite = VerifySuiteResult::new();
    suite.push(Check::new("schoenberg_identity").expect(q_minus_k == ell * (k - lambda), snapshot));
    let c = Check::new("schoenberg_condition");
    suite.push(match square_root {
        Some(_) => c.expect(simplex, snapshot),
        None => c.vacuous("q - k not a square"),
    });
    let c = Check::new("geometric_lambda");
    suite.push(match geometric {
        Some(e) if e % 2 == 0 => c.param("exponent", e).expect(plane, snapshot),
        _ => c.vacuous("lambda not an even-length geometric sum"),
    });
    let c = Check::new("projective_plane");
    suite.push(if lambda == 1 {
        c.expect(plane, snapshot)
    } else {
        c.vacuous("lambda != 1")
    });
    Ok((suite, data))
}

/// Outcome of checking a printed `(q, k, λ)` triple against `k = (q-1)/ell`
/// and `λ = (k-1)/ell`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleCheck {
    pub q: u64,
    pub k: u64,
    pub lambda: u64,
    pub ell: Option<u64>,
    pub expected_lambda: Option<u64>,
    pub consistent: bool,
}

pub fn reconcile_triple(q: u64, k: u64, lambda: u64) -> TripleCheck {
    let ell = (k > 0 && (q - 1).is_multiple_of(k)).then(|| (q - 1) / k);
    let expected_lambda = ell
        .filter(|&l| (k - 1).is_multiple_of(l))
        .map(|l| (k - 1) / l);
    TripleCheck {
        q,
        k,
        lambda,
        ell,
        expected_lambda,
        consistent: expected_lambda == Some(lambda),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdicts {
    pub bruteforce: bool,
    pub lehmer: bool,
    pub sumsq: bool,
    pub gram: bool,
}

impl Verdicts {
    pub fn agree(&self) -> bool {
        let v = self.bruteforce;
        self.lehmer == v && self.sumsq == v && self.gram == v
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiffSetReport {
    pub q: u64,
    pub ell: u64,
    pub k: u64,
    pub qprime: u64,
    pub generator: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<u64>,
    pub verdicts: Verdicts,
    /// `k = 1`: `K = {1}` with `λ = 0`.
    pub trivial: bool,
    pub q_is_prime: bool,
    pub k_is_square: bool,
    pub certificates: Vec<Check>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub congruences: Option<CongruenceFlags>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schoenberg: Option<SchoenbergData>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub determinants: Option<Determinants>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectra: Option<SpectralData>,
}

impl DiffSetReport {
    pub fn is_difference_set(&self) -> bool {
        self.verdicts.bruteforce
    }

    pub fn passed(&self) -> bool {
        self.verdicts.agree() && self.certificates.iter().all(|c| c.pass)
    }
}

/// All four detectors, and on a hit the full certificate battery.
pub fn analyze(ctx: &CycloCtx) -> Result<DiffSetReport> {
    let (bruteforce, _) = is_diffset_bruteforce(ctx)?;
    let verdicts = Verdicts {
        bruteforce,
        lehmer: is_diffset_lehmer(ctx)?,
        sumsq: is_diffset_sumsq(ctx)?,
        gram: is_diffset_gram(ctx)?,
    };
    let (q, ell, k) = (ctx.q(), ctx.ell(), ctx.k());
    let mut certificates = VerifySuiteResult::new();
    certificates
        .push(Check::new("detector_agreement").expect(verdicts.agree(), || json!(verdicts)));
    certificates.extend(verify_square_sum_bounds(ctx)?);

    let mut report = DiffSetReport {
        q,
        ell,
        k,
        qprime: ctx.qprime(),
        generator: ctx.field().generator().0,
        lambda: ((k - 1) % ell == 0).then(|| (k - 1) / ell),
        verdicts,
        trivial: k == 1,
        q_is_prime: is_prime(q),
        k_is_square: perfect_square_root(k).is_some(),
        certificates: Vec::new(),
        congruences: None,
        schoenberg: None,
        determinants: None,
        spectra: None,
    };

    if verdicts.lehmer {
        let lambda = ctx.cn(0, 0);
        let qp = ctx.qp();
        let row_constant = (0..ctx.l()).all(|j| ctx.cn(qp, j) == lambda);
        certificates.push(Check::new("hit_structure").param("lambda", lambda).expect(
            ell % 2 == 0
                && k % 2 == 1
                && lambda * ell as i64 == k as i64 - 1
                && ctx.qprime() == ell / 2
                && row_constant,
            || json!({"ell": ell, "k": k, "qprime": ctx.qprime(), "row_constant": row_constant}),
        ));
        certificates.extend(verify_gram_identities(ctx)?);
        let (s, spectra) = verify_spectral(ctx)?;
        certificates.extend(s);
        let (s, dets) = verify_determinants(ctx)?;
        certificates.extend(s);
        let (s, flags) = verify_congruences(ctx)?;
        certificates.extend(s);
        let (s, sch) = check_schoenberg_condition(ctx)?;
        certificates.extend(s);
        report.spectra = Some(spectra);
        report.determinants = Some(dets);
        report.congruences = Some(flags);
        report.schoenberg = Some(sch);
    }
    report.certificates = certificates.checks;
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModifiedVerdicts {
    pub bruteforce: bool,
    pub lehmer_modified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModifiedDiffSetReport {
    pub q: u64,
    pub ell: u64,
    pub k0: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda0: Option<u64>,
    pub verdicts: ModifiedVerdicts,
    pub certificates: Vec<Check>,
}

impl ModifiedDiffSetReport {
    pub fn is_difference_set(&self) -> bool {
        self.verdicts.bruteforce
    }

    pub fn passed(&self) -> bool {
        self.verdicts.bruteforce == self.verdicts.lehmer_modified
            && self.certificates.iter().all(|c| c.pass)
    }
}

/// `k` odd, `ell` even, and `(0,0) + 1 = (ell/2, 0) + 1 = (i, 0)` for all other `i`.
pub fn is_modified_diffset_lehmer(ctx: &CycloCtx) -> Result<bool> {
    require_ell(ctx)?;
    if ctx.k().is_multiple_of(2) || ctx.ell() % 2 == 1 {
        return Ok(false);
    }
    let (h, c0) = (ctx.l() / 2, ctx.cn(0, 0));
    Ok(ctx.cn(h, 0) == c0
        && (1..ctx.l())
            .filter(|&i| i != h)
            .all(|i| ctx.cn(i, 0) == c0 + 1))
}

/// Detectors and Gram certificates for `K_0 = K ∪ {0}`.
pub fn modified_diffset(ctx: &CycloCtx) -> Result<ModifiedDiffSetReport> {
    let counts = representation_counts(ctx, true)?;
    let brute = common_value(&counts);
    let verdicts = ModifiedVerdicts {
        bruteforce: brute.is_some(),
        lehmer_modified: is_modified_diffset_lehmer(ctx)?,
    };
    let (q, ell, k) = (ctx.q(), ctx.ell(), ctx.k());
    let k0 = k + 1;
    let (l, qp) = (ctx.l(), ctx.qp());
    let mut certificates = VerifySuiteResult::new();
    certificates.push(
        Check::new("modified_detector_agreement")
            .expect(verdicts.bruteforce == verdicts.lehmer_modified, || {
                json!(verdicts)
            }),
    );

    let mut formula = CaseCheck::new("modified_count_formula");
    for i in 0..l {
        let want = ctx.cn(i, 0) + i64::from(i == 0) + i64::from(i == qp);
        let got = counts[i as usize] as i64;
        formula.record(
            got == want,
            || json!({"i": i, "count": got, "expected": want}),
        );
    }
    certificates.push(formula.finish());

    if let Some(lambda0) = brute.filter(|_| verdicts.lehmer_modified) {
        let (l0, k0i) = (lambda0 as i64, k0 as i64);
        certificates.push(
            Check::new("modified_lambda")
                .param("lambda0", lambda0)
                .expect(
                    lambda0 * ell == k0,
                    || json!({"lambda0": lambda0, "k0": k0}),
                ),
        );
        let d = ctx.build_matrices()?;
        let n = ell as usize;
        let id = IntMatrix::identity(n);
        let a1 = &d.a + &id;
        let lhs = &a1.transpose() * &a1;
        let rhs = &(&IntMatrix::ones(n).scale(l0 * (k0i - 1)) + &id.scale(k0i - l0))
            - &IntMatrix::unit(n, 0, 0).scale(k0i - 1);
        certificates.push(
            Check::new("modified_gram_compact")
                .expect(lhs == rhs, || json!({"residual": &lhs - &rhs})),
        );
        let ata = &d.a.transpose() * &d.a;
        let rhs = &(&(&(&IntMatrix::ones(n).scale(l0 * (k0i - 1)) + &id.scale(k0i - l0 - 1))
            - &IntMatrix::unit(n, 0, 0).scale(k0i - 1))
            - &d.a)
            - &d.a.transpose();
        certificates.push(
            Check::new("modified_gram_expanded")
                .expect(ata == rhs, || json!({"residual": &ata - &rhs})),
        );
        let b0 = a1.minor(ctx.qprime() as usize, 0);
        let lhs = &b0.transpose() * &b0;
        let rhs = &IntMatrix::ones(n - 1).scale(l0 * (k0i - l0 - 1))
            + &IntMatrix::identity(n - 1).scale(k0i - l0);
        certificates.push(
            Check::new("modified_b_gram").expect(lhs == rhs, || json!({"residual": &lhs - &rhs})),
        );
    }

    Ok(ModifiedDiffSetReport {
        q,
        ell,
        k0,
        lambda0: (k0 % ell == 0).then(|| k0 / ell),
        verdicts,
        certificates: certificates.checks,
    })
}

/// Odd prime powers `q ≡ 1 (mod ell)` with `3 <= q <= max_q`.
pub fn candidate_orders(ell: u64, max_q: u64, prime_only: bool) -> Vec<(u64, u64, u32)> {
    (1..)
        .map(|t| 1 + t * ell)
        .take_while(|&q| q <= max_q)
        .filter_map(|q| prime_power(q).map(|(p, n)| (q, p, n)))
        .filter(|&(_, p, n)| p % 2 == 1 && (n == 1 || !prime_only))
        .collect()
}

fn search_one(p: u64, n: u32, ell: u64) -> Result<Option<DiffSetReport>> {
    let field = FieldCtx::build(&FieldSpec::new(p, n))?;
    let ctx = CycloCtx::new(field.into(), ell)?;
    if is_diffset_lehmer(&ctx)? {
        analyze(&ctx).map(Some)
    } else {
        Ok(None)
    }
}

/// Every odd prime power `q ≡ 1 (mod ell)` up to `max_q` for which `K` is a
/// difference set, with full reports, sorted by `q`. The trivial hit
/// `q = ell + 1` is dropped unless `include_trivial` is set.
pub fn search(
    ell: u64,
    max_q: u64,
    prime_only: bool,
    include_trivial: bool,
    jobs: Option<usize>,
) -> Result<Vec<DiffSetReport>> {
    match ell {
        0 => return Err(Error::EllTooSmall),
        1 => return Err(Error::EllOne),
        _ => {}
    }
    if max_q > MAX_SEARCH_Q {
        return Err(Error::RangeTooLarge {
            max_q,
            limit: MAX_SEARCH_Q,
        });
    }
    let candidates = candidate_orders(ell, max_q, prime_only);
    let run = || -> Result<Vec<DiffSetReport>> {
        let found: Vec<Option<DiffSetReport>> = candidates
            .par_iter()
            .map(|&(_, p, n)| search_one(p, n, ell))
            .collect::<Result<_>>()?;
        let mut hits: Vec<DiffSetReport> = found
            .into_iter()
            .flatten()
            .filter(|r| include_trivial || !r.trivial)
            .collect();
        hits.sort_by_key(|r| r.q);
        Ok(hits)
    };
    match jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build()
            .map_err(|e| Error::Io(e.to_string()))?
            .install(run),
        None => run(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::build_field;
    use std::sync::Arc;

    fn ctx(p: u64, ell: u64) -> CycloCtx {
        CycloCtx::new(Arc::new(build_field(p, 1, None).unwrap()), ell).unwrap()
    }

    #[test]
    fn paley_examples() {
        assert_eq!(is_diffset_bruteforce(&ctx(7, 2)).unwrap(), (true, Some(1)));
        assert_eq!(is_diffset_bruteforce(&ctx(13, 2)).unwrap(), (false, None));
        assert_eq!(is_diffset_bruteforce(&ctx(31, 2)).unwrap(), (true, Some(7)));
        assert_eq!(is_diffset_bruteforce(&ctx(3, 2)).unwrap(), (true, Some(0)));
    }

    #[test]
    fn ell_one_rejected() {
        let c = ctx(7, 1);
        assert_eq!(is_diffset_bruteforce(&c).unwrap_err(), Error::EllOne);
        assert_eq!(is_diffset_lehmer(&c).unwrap_err(), Error::EllOne);
        assert_eq!(is_diffset_sumsq(&c).unwrap_err(), Error::EllOne);
        assert_eq!(is_diffset_gram(&c).unwrap_err(), Error::EllOne);
        assert_eq!(modified_diffset(&c).unwrap_err(), Error::EllOne);
    }

    #[test]
    fn certificates_require_a_hit() {
        let c = ctx(131, 10);
        let err = Error::NotADifferenceSet { q: 131, ell: 10 };
        assert_eq!(verify_gram_identities(&c).unwrap_err(), err);
        assert_eq!(verify_spectral(&c).unwrap_err(), err);
        assert_eq!(verify_determinants(&c).unwrap_err(), err);
        assert_eq!(verify_congruences(&c).unwrap_err(), err);
        assert_eq!(check_schoenberg_condition(&c).unwrap_err(), err);
    }

    #[test]
    fn geometric_sums() {
        assert_eq!(geometric_exponent(1, 8), Some(0));
        assert_eq!(geometric_exponent(7, 2), Some(2));
        assert_eq!(geometric_exponent(31, 2), Some(4));
        assert_eq!(geometric_exponent(3, 2), Some(1));
        assert_eq!(geometric_exponent(2, 4), None);
        assert_eq!(geometric_exponent(0, 4), None);
    }

    #[test]
    fn printed_triples() {
        assert!(!reconcile_triple(31, 15, 2).consistent);
        assert_eq!(reconcile_triple(31, 15, 2).expected_lambda, Some(7));
        for (q, k, l) in [(31, 15, 7), (127, 63, 31), (8191, 4095, 2047), (73, 9, 1)] {
            assert!(reconcile_triple(q, k, l).consistent, "{q}");
        }
    }

    #[test]
    fn search_guards() {
        assert_eq!(
            search(4, MAX_SEARCH_Q + 1, true, false, None).unwrap_err(),
            Error::RangeTooLarge {
                max_q: MAX_SEARCH_Q + 1,
                limit: MAX_SEARCH_Q
            }
        );
        assert_eq!(
            search(1, 100, true, false, None).unwrap_err(),
            Error::EllOne
        );
    }

    #[test]
    fn candidates_include_prime_powers() {
        let c: Vec<u64> = candidate_orders(4, 50, false).iter().map(|c| c.0).collect();
        assert_eq!(c, vec![5, 9, 13, 17, 25, 29, 37, 41, 49]);
        let c: Vec<u64> = candidate_orders(4, 50, true).iter().map(|c| c.0).collect();
        assert_eq!(c, vec![5, 13, 17, 29, 37, 41]);
    }
}
