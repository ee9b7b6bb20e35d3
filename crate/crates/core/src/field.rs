//! Finite fields F_{p^n} of odd characteristic in the polynomial basis.
//!
//! Elements are addressed by their canonical index, the base-p evaluation of
//! the coefficient vector `(c_0, ..., c_{n-1})`, so index 0 is zero, index 1
//! is one, and for `n > 1` index `p` is the class of `x`. After construction
//! the context owns a full discrete-logarithm table and its inverse, which
//! makes coset classification of any nonzero element O(1).

use serde::{Deserialize, Serialize};

use crate::arith::{factorize, is_prime};
use crate::error::{Error, Result};

/// Largest field order for which a context (with its O(q) tables) is built.
pub const MAX_FIELD_ORDER: u64 = 20_000_000;

const NO_LOG: u32 = u32::MAX;

/// Conway polynomials for small `(p, n)`, coefficients low-to-high including
/// the leading 1.
const CONWAY: &[(u64, u32, &[u64])] = &[
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (3, 4, &[2, 0, 0, 2, 1]),
    (3, 5, &[1, 2, 0, 0, 0, 1]),
    (3, 6, &[2, 2, 1, 0, 2, 0, 1]),
    (5, 2, &[2, 4, 1]),
    (5, 3, &[3, 3, 0, 1]),
    (5, 4, &[2, 4, 4, 0, 1]),
    (7, 2, &[3, 6, 1]),
    (7, 3, &[4, 0, 6, 1]),
    (7, 4, &[3, 4, 5, 0, 1]),
    (11, 2, &[2, 7, 1]),
    (11, 3, &[9, 2, 0, 1]),
    (13, 2, &[2, 12, 1]),
    (13, 3, &[11, 2, 0, 1]),
    (17, 2, &[3, 16, 1]),
    (19, 2, &[2, 18, 1]),
    (23, 2, &[5, 21, 1]),
];

/// Conway polynomial from the built-in table, if present.
pub fn conway_polynomial(p: u64, n: u32) -> Option<&'static [u64]> {
    CONWAY
        .iter()
        .find(|(pp, nn, _)| *pp == p && *nn == n)
        .map(|(_, _, c)| *c)
}

/// A field element, identified by its canonical index in `[0, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FieldElem(pub u64);

impl FieldElem {
    pub fn index(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModulusSource {
    /// Prime field; the modulus is the formal `x`.
    Prime,
    Supplied,
    Conway,
    /// Lexicographically least monic irreducible found by exhaustive search.
    Search,
}

/// Everything needed to build a [`FieldCtx`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    pub p: u64,
    pub n: u32,
    /// Monic degree-n modulus, low-to-high (`n + 1` coefficients).
    pub modulus: Option<Vec<u64>>,
    /// Canonical index of a user-chosen generator; order-verified.
    pub generator: Option<u64>,
    /// Allow exhaustive search for a modulus when the table has no entry.
    pub search_modulus: bool,
}

impl FieldSpec {
    pub fn prime(p: u64) -> Self {
        Self::new(p, 1)
    }

    pub fn new(p: u64, n: u32) -> Self {
        FieldSpec {
            p,
            n,
            modulus: None,
            generator: None,
            search_modulus: true,
        }
    }

    pub fn with_modulus(mut self, modulus: Vec<u64>) -> Self {
        self.modulus = Some(modulus);
        self
    }

    pub fn with_generator(mut self, g: u64) -> Self {
        self.generator = Some(g);
        self
    }
}

/// A concrete finite field with generator and discrete-log tables.
#[derive(Debug, Clone)]
pub struct FieldCtx {
    p: u64,
    n: u32,
    q: u64,
    modulus: Vec<u64>,
    modulus_source: ModulusSource,
    generator: FieldElem,
    /// `dlog[x]` is the exponent of element index `x`; `NO_LOG` at zero.
    dlog: Vec<u32>,
    /// `exp[e]` is the index of `g^e`, for `0 <= e < q - 1`.
    exp: Vec<u32>,
}

/// Builds a field from `(p, n, modulus)` with the default generator.
pub fn build_field(p: u64, n: u32, modulus: Option<&[u64]>) -> Result<FieldCtx> {
    let mut spec = FieldSpec::new(p, n);
    spec.modulus = modulus.map(<[u64]>::to_vec);
    FieldCtx::build(&spec)
}

impl FieldCtx {
    pub fn build(spec: &FieldSpec) -> Result<Self> {
        let FieldSpec { p, n, .. } = *spec;
        if p % 2 == 0 {
            return Err(Error::EvenP(p));
        }
        if !is_prime(p) {
            return Err(Error::CompositeP(p));
        }
        if n == 0 {
            return Err(Error::ZeroDegree);
        }
        let q = p
            .checked_pow(n)
            .filter(|&q| q <= MAX_FIELD_ORDER)
            .ok_or(Error::FieldTooLarge {
                p,
                n,
                max: MAX_FIELD_ORDER,
            })?;

        let (modulus, modulus_source) = if n == 1 {
            (vec![0, 1], ModulusSource::Prime)
        } else if let Some(m) = &spec.modulus {
            validate_modulus(p, n, m)?;
            if !is_irreducible(m, p) {
                return Err(Error::ReducibleModulus(p));
            }
            (m.clone(), ModulusSource::Supplied)
        } else if let Some(m) = conway_polynomial(p, n) {
            (m.to_vec(), ModulusSource::Conway)
        } else if spec.search_modulus {
            (least_irreducible(p, n), ModulusSource::Search)
        } else {
            return Err(Error::NoModulusAvailable { p, n });
        };

        let mut ctx = FieldCtx {
            p,
            n,
            q,
            modulus,
            modulus_source,
            generator: FieldElem(1),
            dlog: Vec::new(),
            exp: Vec::new(),
        };
        let generator = match spec.generator {
            Some(g) => {
                let g = ctx.elem(g)?;
                if !ctx.has_full_order(g) {
                    return Err(Error::NotAGenerator(g.0));
                }
                g
            }
            None => ctx.find_generator(),
        };
        ctx.generator = generator;
        ctx.build_tables();
        Ok(ctx)
    }

    /// Smallest canonical index of full multiplicative order.
    pub fn find_generator(&self) -> FieldElem {
        (1..self.q)
            .map(FieldElem)
            .find(|&x| self.has_full_order(x))
            .expect("the multiplicative group of a finite field is cyclic")
    }

    /// Order test against the prime factorization of `q - 1`, using direct
    /// polynomial arithmetic (no tables).
    pub fn has_full_order(&self, x: FieldElem) -> bool {
        if x.is_zero() {
            return false;
        }
        let order = self.q - 1;
        if self.pow_direct(x, order) != self.one() {
            return false;
        }
        factorize(order)
            .iter()
            .all(|&(r, _)| self.pow_direct(x, order / r) != self.one())
    }

    fn build_tables(&mut self) {
        let q = self.q as usize;
        let mut dlog = vec![NO_LOG; q];
        let mut exp = vec![0u32; q - 1];
        let mut x = self.one();
        for (e, slot) in exp.iter_mut().enumerate() {
            *slot = x.0 as u32;
            debug_assert_eq!(dlog[x.0 as usize], NO_LOG);
            dlog[x.0 as usize] = e as u32;
            x = self.mul_direct(x, self.generator);
        }
        debug_assert_eq!(x, self.one());
        self.dlog = dlog;
        self.exp = exp;
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn modulus_source(&self) -> ModulusSource {
        self.modulus_source
    }

    pub fn generator(&self) -> FieldElem {
        self.generator
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem(0)
    }

    pub fn one(&self) -> FieldElem {
        FieldElem(1)
    }

    pub fn elem(&self, index: u64) -> Result<FieldElem> {
        if index < self.q {
            Ok(FieldElem(index))
        } else {
            Err(Error::ElementOutOfRange(index))
        }
    }

    /// Element with the given polynomial-basis coefficients (reduced mod p).
    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FieldElem> {
        if coeffs.len() > self.n as usize {
            return Err(Error::ElementOutOfRange(coeffs.len() as u64));
        }
        Ok(FieldElem(
            coeffs
                .iter()
                .rev()
                .fold(0, |acc, &c| acc * self.p + c % self.p),
        ))
    }

    pub fn coeffs(&self, x: FieldElem) -> Vec<u64> {
        let mut v = x.0;
        (0..self.n)
            .map(|_| {
                let c = v % self.p;
                v /= self.p;
                c
            })
            .collect()
    }

    /// The image of an integer in the prime subfield.
    pub fn from_int(&self, m: i64) -> FieldElem {
        FieldElem(m.rem_euclid(self.p as i64) as u64)
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if self.n == 1 {
            let s = a.0 + b.0;
            return FieldElem(if s >= self.p { s - self.p } else { s });
        }
        let (mut a, mut b) = (a.0, b.0);
        let (mut out, mut place) = (0u64, 1u64);
        for _ in 0..self.n {
            let d = (a % self.p + b % self.p) % self.p;
            out += d * place;
            place *= self.p;
            a /= self.p;
            b /= self.p;
        }
        FieldElem(out)
    }

    pub fn neg(&self, a: FieldElem) -> FieldElem {
        if self.n == 1 {
            return FieldElem(if a.0 == 0 { 0 } else { self.p - a.0 });
        }
        let mut v = a.0;
        let (mut out, mut place) = (0u64, 1u64);
        for _ in 0..self.n {
            let d = v % self.p;
            out += ((self.p - d) % self.p) * place;
            place *= self.p;
            v /= self.p;
        }
        FieldElem(out)
    }

    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    /// `1 + x`; only the constant coefficient moves.
    pub fn add_one(&self, x: FieldElem) -> FieldElem {
        let c0 = x.0 % self.p;
        if c0 + 1 == self.p {
            FieldElem(x.0 - c0)
        } else {
            FieldElem(x.0 + 1)
        }
    }

    /// Table multiplication.
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        let e = (self.dlog[a.0 as usize] as u64 + self.dlog[b.0 as usize] as u64) % (self.q - 1);
        FieldElem(self.exp[e as usize] as u64)
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        let e = self.dlog(a)?;
        Ok(self.exp((self.q - 1 - e) % (self.q - 1)))
    }

    /// `g^e` for any `e` (reduced mod `q - 1`).
    pub fn exp(&self, e: u64) -> FieldElem {
        FieldElem(self.exp[(e % (self.q - 1)) as usize] as u64)
    }

    /// `g^e` for a signed exponent.
    pub fn exp_signed(&self, e: i64) -> FieldElem {
        self.exp(e.rem_euclid((self.q - 1) as i64) as u64)
    }

    /// Discrete logarithm base the generator, in `[0, q - 1)`.
    pub fn dlog(&self, x: FieldElem) -> Result<u64> {
        match self.dlog.get(x.0 as usize) {
            None => Err(Error::ElementOutOfRange(x.0)),
            Some(&NO_LOG) => Err(Error::ZeroElement),
            Some(&e) => Ok(e as u64),
        }
    }

    /// Unchecked table lookup for hot loops; `x` must be nonzero and in range.
    #[inline]
    pub(crate) fn dlog_raw(&self, x: u64) -> u64 {
        debug_assert!(x != 0);
        self.dlog[x as usize] as u64
    }

    /// Multiplication by polynomial arithmetic modulo the modulus.
    pub fn mul_direct(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if self.n == 1 {
            return FieldElem(a.0 * b.0 % self.p);
        }
        let (a, b) = (self.coeffs(a), self.coeffs(b));
        let prod = poly_mulmod(&a, &b, &self.modulus, self.p);
        self.from_coeffs(&prod)
            .expect("reduced product has degree < n")
    }

    pub fn pow_direct(&self, mut base: FieldElem, mut e: u64) -> FieldElem {
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_direct(acc, base);
            }
            base = self.mul_direct(base, base);
            e >>= 1;
        }
        acc
    }

    /// All elements as indices `1..q`.
    pub fn nonzero(&self) -> impl Iterator<Item = FieldElem> {
        (1..self.q).map(FieldElem)
    }
}

fn validate_modulus(p: u64, n: u32, m: &[u64]) -> Result<()> {
    if m.len() != n as usize + 1 {
        return Err(Error::InvalidModulus(format!(
            "expected {} coefficients for degree {n}, got {}",
            n + 1,
            m.len()
        )));
    }
    if let Some(c) = m.iter().find(|&&c| c >= p) {
        return Err(Error::InvalidModulus(format!(
            "coefficient {c} is not in [0, {p})"
        )));
    }
    if m[n as usize] != 1 {
        return Err(Error::InvalidModulus("not monic".into()));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Polynomials over F_p, low-to-high coefficient vectors.

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod_p(a: u64, p: u64) -> u64 {
    crate::arith::pow_mod(a, p - 2, p)
}

/// Remainder of `a` by `f` (f nonzero).
fn poly_rem(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let f = trim(f.to_vec());
    let mut r = trim(a.to_vec());
    let df = f.len() - 1;
    let lead_inv = inv_mod_p(f[df], p);
    while r.len() > df {
        let dr = r.len() - 1;
        let c = r[dr] * lead_inv % p;
        for (i, &fi) in f.iter().enumerate() {
            let idx = dr - df + i;
            r[idx] = (r[idx] + p - c * fi % p) % p;
        }
        r = trim(r);
    }
    r
}

fn poly_mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai * bj) % p;
        }
    }
    poly_rem(&prod, f, p)
}

fn poly_powmod(base: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = poly_rem(base, f, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &b, f, p);
        }
        b = poly_mulmod(&b, &b, f, p);
        e >>= 1;
    }
    acc
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// `x^(p^j) mod f` by repeated p-th powers.
fn frobenius_power(f: &[u64], p: u64, j: u32) -> Vec<u64> {
    let mut h = vec![0, 1];
    for _ in 0..j {
        h = poly_powmod(&h, p, f, p);
    }
    poly_rem(&h, f, p)
}

/// Rabin's test: `f` (monic, degree n) is irreducible over F_p iff
/// `x^(p^n) = x mod f` and `gcd(x^(p^(n/r)) - x, f) = 1` for each prime `r | n`.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let f = trim(f.to_vec());
    if f.len() < 2 {
        return false;
    }
    let n = (f.len() - 1) as u32;
    if n == 1 {
        return true;
    }
    let x = poly_rem(&[0, 1], &f, p);
    if frobenius_power(&f, p, n) != x {
        return false;
    }
    factorize(n as u64).iter().all(|&(r, _)| {
        let mut h = frobenius_power(&f, p, n / r as u32);
        h.resize(h.len().max(2), 0);
        h[1] = (h[1] + p - 1) % p;
        poly_gcd(&h, &f, p).len() == 1
    })
}

/// Least monic irreducible of degree n, ordering the lower coefficients
/// `(c_0, ..., c_{n-1})` by their base-p value.
pub fn least_irreducible(p: u64, n: u32) -> Vec<u64> {
    let count = p.pow(n);
    (0..count)
        .map(|idx| {
            let mut v = idx;
            let mut f: Vec<u64> = (0..n)
                .map(|_| {
                    let c = v % p;
                    v /= p;
                    c
                })
                .collect();
            f.push(1);
            f
        })
        .find(|f| is_irreducible(f, p))
        .expect("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_fields_build() {
        let f343 = build_field(7, 3, Some(&[4, 0, 6, 1])).unwrap();
        assert_eq!(f343.q(), 343);
        // x itself is primitive for a Conway polynomial.
        assert_eq!(f343.generator(), FieldElem(7));
        let f131 = build_field(131, 1, None).unwrap();
        assert_eq!(f131.generator(), FieldElem(2));
        assert_eq!(build_field(3, 1, None).unwrap().generator(), FieldElem(2));
    }

    #[test]
    fn rejects_bad_characteristic() {
        assert_eq!(build_field(4, 1, None).unwrap_err(), Error::EvenP(4));
        assert_eq!(build_field(2, 3, None).unwrap_err(), Error::EvenP(2));
        assert_eq!(build_field(9, 1, None).unwrap_err(), Error::CompositeP(9));
        assert_eq!(build_field(1, 1, None).unwrap_err(), Error::CompositeP(1));
    }

    #[test]
    fn rejects_bad_modulus() {
        // x^3 + 1 = (x + 1)(x^2 - x + 1)
        assert_eq!(
            build_field(7, 3, Some(&[1, 0, 0, 1])).unwrap_err(),
            Error::ReducibleModulus(7)
        );
        assert!(matches!(
            build_field(7, 3, Some(&[4, 0, 6, 2])),
            Err(Error::InvalidModulus(_))
        ));
        assert!(matches!(
            build_field(7, 3, Some(&[4, 6, 1])),
            Err(Error::InvalidModulus(_))
        ));
        let mut spec = FieldSpec::new(29, 2);
        spec.search_modulus = false;
        assert_eq!(
            FieldCtx::build(&spec).unwrap_err(),
            Error::NoModulusAvailable { p: 29, n: 2 }
        );
        spec.search_modulus = true;
        let f = FieldCtx::build(&spec).unwrap();
        assert_eq!(f.modulus_source(), ModulusSource::Search);
        assert!(is_irreducible(f.modulus(), 29));
    }

    #[test]
    fn generator_override() {
        let f = FieldCtx::build(&FieldSpec::prime(73).with_generator(5)).unwrap();
        assert_eq!(f.generator(), FieldElem(5));
        assert_eq!(
            FieldCtx::build(&FieldSpec::prime(73).with_generator(2)).unwrap_err(),
            Error::NotAGenerator(2)
        );
        assert_eq!(
            FieldCtx::build(&FieldSpec::prime(73).with_generator(0)).unwrap_err(),
            Error::NotAGenerator(0)
        );
    }

    #[test]
    fn dlog_examples() {
        let f = build_field(131, 1, None).unwrap();
        assert_eq!(f.dlog(FieldElem(2)).unwrap(), 1);
        assert_eq!(f.dlog(FieldElem(1)).unwrap(), 0);
        assert_eq!(f.dlog(FieldElem(4)).unwrap(), 2);
        assert_eq!(f.dlog(FieldElem(0)).unwrap_err(), Error::ZeroElement);
    }

    #[test]
    fn conway_table_entries_are_primitive() {
        for &(p, n, c) in CONWAY {
            assert!(is_irreducible(c, p), "({p},{n}) reducible");
            let f = build_field(p, n, Some(c)).unwrap();
            assert!(
                f.has_full_order(FieldElem(p)),
                "x not primitive for ({p},{n})"
            );
            assert_eq!(f.generator(), FieldElem(p));
        }
    }

    #[test]
    fn irreducibility_against_root_search() {
        // For degree 2 and 3 irreducible <=> no root in F_p.
        for p in [3u64, 5, 7] {
            for n in [2u32, 3] {
                for idx in 0..p.pow(n) {
                    let mut v = idx;
                    let mut f: Vec<u64> = (0..n)
                        .map(|_| {
                            let c = v % p;
                            v /= p;
                            c
                        })
                        .collect();
                    f.push(1);
                    let has_root =
                        (0..p).any(|x| f.iter().rev().fold(0, |acc, &c| (acc * x + c) % p) == 0);
                    assert_eq!(is_irreducible(&f, p), !has_root, "{f:?} mod {p}");
                }
            }
        }
    }

    #[test]
    fn tables_are_consistent() {
        for (p, n) in [(3u64, 4u32), (5, 3), (7, 2), (11, 1), (13, 2)] {
            let f = build_field(p, n, None).unwrap();
            let mut seen = vec![false; (f.q() - 1) as usize];
            for x in f.nonzero() {
                let e = f.dlog(x).unwrap();
                assert!(!seen[e as usize]);
                seen[e as usize] = true;
                assert_eq!(f.pow_direct(f.generator(), e), x);
                assert_eq!(f.mul(x, f.inv(x).unwrap()), f.one());
                assert_eq!(f.add(x, f.neg(x)), f.zero());
                assert_eq!(f.add_one(x), f.add(x, f.one()));
            }
        }
    }

    #[test]
    fn coefficient_round_trip() {
        let f = build_field(7, 3, None).unwrap();
        for x in 0..f.q() {
            let e = FieldElem(x);
            assert_eq!(f.from_coeffs(&f.coeffs(e)).unwrap(), e);
        }
    }
}
