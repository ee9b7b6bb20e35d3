#![allow(dead_code)]

use std::sync::Arc;

use cyclo_core::cyclotomy::CycloCtx;
use cyclo_core::field::{FieldCtx, FieldElem, FieldSpec};
use cyclo_core::linalg::IntMatrix;

/// `(p, n, ell)`: prime and prime-power q <= 5000, even and odd k, ell <= 12.
pub const FIXTURES: &[(u64, u32, u64)] = &[
    (7, 1, 2),
    (7, 1, 3),
    (13, 1, 3),
    (13, 1, 4),
    (13, 1, 6),
    (31, 1, 6),
    (31, 1, 10),
    (37, 1, 4),
    (41, 1, 8),
    (73, 1, 8),
    (101, 1, 10),
    (131, 1, 10),
    (2017, 1, 12),
    (3, 2, 2),
    (3, 2, 4),
    (5, 2, 6),
    (3, 3, 2),
    (7, 2, 8),
    (5, 3, 4),
    (3, 4, 10),
    (11, 2, 12),
    (7, 3, 6),
    (13, 2, 12),
    (5, 4, 12),
    (3, 6, 8),
    (13, 3, 12),
    (5, 5, 4),
];

pub fn field(p: u64, n: u32) -> Arc<FieldCtx> {
    Arc::new(FieldCtx::build(&FieldSpec::new(p, n)).unwrap())
}

pub fn ctx(p: u64, n: u32, ell: u64) -> CycloCtx {
    CycloCtx::new(field(p, n), ell).unwrap()
}

pub fn ctx_with_generator(p: u64, n: u32, ell: u64, g: u64) -> CycloCtx {
    let f = FieldCtx::build(&FieldSpec::new(p, n).with_generator(g)).unwrap();
    CycloCtx::new(Arc::new(f), ell).unwrap()
}

/// Class `e mod ell` of `g^e`, found by repeated polynomial multiplication.
pub fn oracle_classes(field: &FieldCtx, ell: u64) -> Vec<Option<u64>> {
    let mut class = vec![None; field.q() as usize];
    let g = field.generator();
    let mut x = FieldElem(1);
    for e in 0..field.q() - 1 {
        assert!(class[x.0 as usize].is_none(), "generator has short order");
        class[x.0 as usize] = Some(e % ell);
        x = field.mul_direct(x, g);
    }
    class
}

/// `(i, j)` by counting pairs `(a, b)` with `1 + a = b`, `a ∈ g^i K`, `b ∈ g^j K`.
pub fn oracle_table(field: &FieldCtx, ell: u64) -> Vec<Vec<u64>> {
    let class = oracle_classes(field, ell);
    let one = FieldElem(1);
    let mut t = vec![vec![0u64; ell as usize]; ell as usize];
    for a in 1..field.q() {
        let ca = class[a as usize].unwrap() as usize;
        let s = field.add(one, FieldElem(a));
        for b in 1..field.q() {
            if s.0 == b {
                t[ca][class[b as usize].unwrap() as usize] += 1;
            }
        }
    }
    t
}

/// Difference counts over `K × K` (or `K_0 × K_0`) for every nonzero `z`.
pub fn oracle_difference_counts(field: &FieldCtx, ell: u64, include_zero: bool) -> Vec<u64> {
    let class = oracle_classes(field, ell);
    let members: Vec<FieldElem> = (0..field.q())
        .filter(|&x| class[x as usize] == Some(0) || (include_zero && x == 0))
        .map(FieldElem)
        .collect();
    let mut counts = vec![0u64; field.q() as usize];
    for &x in &members {
        for &y in &members {
            let z = field.add(x, field.neg(y));
            counts[z.0 as usize] += 1;
        }
    }
    counts[0] = 0;
    counts
}

pub fn mat(rows: &[&[i64]]) -> IntMatrix {
    IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
}

pub const F343_A: &[&[i64]] = &[
    &[7, 12, 12, 14, 6, 6],
    &[12, 9, 9, 6, 12, 9],
    &[9, 9, 12, 6, 9, 12],
    &[7, 12, 9, 7, 12, 9],
    &[12, 6, 9, 12, 9, 9],
    &[9, 9, 6, 12, 9, 12],
];

pub const F131_A: &[&[i64]] = &[
    &[2, 1, 0, 0, 2, 0, 2, 0, 4, 2],
    &[1, 0, 2, 0, 2, 2, 2, 2, 1, 1],
    &[1, 1, 2, 3, 1, 0, 2, 0, 0, 3],
    &[2, 1, 1, 1, 1, 4, 1, 0, 0, 2],
    &[0, 1, 1, 1, 1, 2, 1, 3, 2, 1],
    &[2, 1, 1, 2, 0, 2, 1, 1, 2, 0],
    &[1, 2, 1, 3, 2, 1, 0, 1, 1, 1],
    &[1, 1, 4, 1, 0, 0, 2, 2, 1, 1],
    &[2, 3, 1, 0, 2, 0, 0, 3, 1, 1],
    &[0, 2, 0, 2, 2, 2, 2, 1, 1, 1],
];

pub const F131_GRAM: &[&[i64]] = &[
    &[20, 16, 15, 13, 15, 15, 14, 13, 17, 16],
    &[16, 23, 14, 18, 19, 14, 13, 19, 16, 16],
    &[15, 14, 29, 17, 12, 13, 19, 20, 12, 17],
    &[13, 18, 17, 29, 15, 17, 16, 12, 12, 18],
    &[15, 19, 12, 15, 23, 16, 16, 17, 18, 18],
    &[15, 14, 13, 17, 16, 33, 16, 15, 13, 15],
    &[14, 13, 19, 16, 16, 16, 23, 14, 18, 19],
    &[13, 19, 20, 12, 17, 15, 14, 29, 17, 12],
    &[17, 16, 12, 12, 18, 13, 18, 17, 29, 15],
    &[16, 16, 17, 18, 18, 15, 19, 12, 15, 23],
];

pub const F37_A: &[&[i64]] = &[&[2, 1, 2, 4], &[2, 2, 4, 1], &[2, 2, 2, 2], &[2, 4, 1, 2]];
pub const F101_A: &[&[i64]] = &[&[6, 9, 6, 4], &[6, 6, 4, 9], &[6, 6, 6, 6], &[6, 4, 9, 6]];
pub const F197_A: &[&[i64]] = &[
    &[12, 9, 12, 16],
    &[12, 12, 16, 9],
    &[12, 12, 12, 12],
    &[12, 16, 9, 12],
];
pub const F37_B: &[&[i64]] = &[&[1, 2, 4], &[2, 4, 1], &[4, 1, 2]];
pub const F101_B: &[&[i64]] = &[&[9, 6, 4], &[6, 4, 9], &[4, 9, 6]];
pub const F197_B: &[&[i64]] = &[&[9, 12, 16], &[12, 16, 9], &[16, 9, 12]];

pub const F73_A: &[&[i64]] = &[
    &[1, 2, 0, 0, 2, 2, 2, 0],
    &[1, 1, 0, 1, 2, 0, 1, 3],
    &[1, 1, 1, 3, 2, 1, 0, 0],
    &[1, 1, 1, 1, 0, 3, 0, 2],
    &[1, 1, 1, 1, 1, 1, 1, 1],
    &[1, 0, 3, 0, 2, 1, 1, 1],
    &[1, 3, 2, 1, 0, 0, 1, 1],
    &[1, 0, 1, 2, 0, 1, 3, 1],
];

pub const F73_B: &[&[i64]] = &[
    &[2, 0, 0, 2, 2, 2, 0],
    &[1, 0, 1, 2, 0, 1, 3],
    &[1, 1, 3, 2, 1, 0, 0],
    &[1, 1, 1, 0, 3, 0, 2],
    &[0, 3, 0, 2, 1, 1, 1],
    &[3, 2, 1, 0, 0, 1, 1],
    &[0, 1, 2, 0, 1, 3, 1],
];

pub const F73_M: &[&[i64]] = &[
    &[1, 1, 1, 1, 1, 1, 1, 1],
    &[1, 0, 3, 0, 2, 1, 1, 1],
    &[1, 3, 2, 1, 0, 0, 1, 1],
    &[1, 0, 1, 2, 0, 1, 3, 1],
    &[1, 2, 0, 0, 2, 2, 2, 0],
    &[1, 1, 0, 1, 2, 0, 1, 3],
    &[1, 1, 1, 3, 2, 1, 0, 0],
    &[1, 1, 1, 1, 0, 3, 0, 2],
];

pub const F73_S: &[&[i64]] = &[
    &[0, 3, 0, 2, 1, 1, 1],
    &[3, 2, 1, 0, 0, 1, 1],
    &[0, 1, 2, 0, 1, 3, 1],
    &[2, 0, 0, 2, 2, 2, 0],
    &[1, 0, 1, 2, 0, 1, 3],
    &[1, 1, 3, 2, 1, 0, 0],
    &[1, 1, 1, 0, 3, 0, 2],
];
