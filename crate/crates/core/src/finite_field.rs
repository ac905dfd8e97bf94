//! Finite fields `F_q`, `q = p^e`, backed by dense lookup tables.
//!
//! Elements are stored as an index `Σ c_i p^i` over the polynomial basis
//! `1, x, …, x^{e−1}` modulo a fixed monic irreducible. The modulus is the
//! least monic irreducible of degree `e` under that same index order, so the
//! coefficient tuples printed for a given `(p, e)` never change between runs.
//!
//! Hot loops (oracles, isotropy tests) work on raw `u16` indices through the
//! `*_raw` methods; [`FieldElement`] is the checked public handle.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exact_arith::{factorize, is_prime};
use crate::limits::{Limits, HARD_FIELD_CAP};

/// Raw element index inside a [`FieldSpec`].
pub type Elem = u16;

struct Tables {
    p: u32,
    e: u32,
    q: u32,
    /// Low coefficients `c_0..c_{e−1}` of the monic modulus.
    modulus: Vec<u32>,
    add: Vec<Elem>,
    mul: Vec<Elem>,
    neg: Vec<Elem>,
    inv: Vec<Elem>,
    frob: Vec<Elem>,
    /// `x ↦ x^{p^{e/2}}`; empty when `e` is odd.
    conj: Vec<Elem>,
}

/// A concrete finite field. Cheap to clone; all clones share one table set.
#[derive(Clone)]
pub struct FieldSpec {
    t: Arc<Tables>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.t, &other.t)
            || (self.t.p == other.t.p && self.t.e == other.t.e && self.t.modulus == other.t.modulus)
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}[{}]", self.t.q, self.modulus_string())
    }
}

/// Builds `F_{p^e}` under the environment-derived [`Limits`].
pub fn make_field(p: u64, e: u32) -> Result<FieldSpec> {
    make_field_with(p, e, &Limits::from_env())
}

pub fn make_field_with(p: u64, e: u32, limits: &Limits) -> Result<FieldSpec> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if e == 0 {
        return Err(Error::bad("field degree must be >= 1"));
    }
    let cap = limits.max_field_order.min(HARD_FIELD_CAP);
    let q = p.checked_pow(e).filter(|&q| q <= cap);
    let Some(q) = q else {
        let size = num_traits::pow(num_bigint::BigInt::from(p), e as usize);
        return Err(Error::too_large(format!("F_{p}^{e}"), size, cap));
    };
    FieldSpec::build(p as u32, e, q as u32)
}

impl FieldSpec {
    fn build(p: u32, e: u32, q: u32) -> Result<Self> {
        let modulus = least_irreducible(p, e);
        let qs = q as usize;
        let decode = |i: usize| digits(i as u32, p, e);
        let encode = |c: &[u32]| encode(c, p);

        let mut add = vec![0; qs * qs];
        let mut mul = vec![0; qs * qs];
        for a in 0..qs {
            let ca = decode(a);
            for b in a..qs {
                let cb = decode(b);
                let s: Vec<u32> = ca.iter().zip(&cb).map(|(x, y)| (x + y) % p).collect();
                let m = poly_mulmod(&ca, &cb, &modulus, p);
                let (s, m) = (encode(&s), encode(&m));
                add[a * qs + b] = s;
                add[b * qs + a] = s;
                mul[a * qs + b] = m;
                mul[b * qs + a] = m;
            }
        }
        let mut neg = vec![0; qs];
        let mut inv = vec![0; qs];
        for a in 0..qs {
            for b in 0..qs {
                if add[a * qs + b] == 0 {
                    neg[a] = b as Elem;
                }
                if a != 0 && mul[a * qs + b] == 1 {
                    inv[a] = b as Elem;
                }
            }
        }
        let pow = |x: Elem, k: u32| {
            let mut acc: Elem = 1;
            for _ in 0..k {
                acc = mul[acc as usize * qs + x as usize];
            }
            acc
        };
        let frob: Vec<Elem> = (0..qs).map(|x| pow(x as Elem, p)).collect();
        let conj = if e % 2 == 0 {
            (0..qs)
                .map(|x| {
                    let mut y = x as Elem;
                    for _ in 0..e / 2 {
                        y = frob[y as usize];
                    }
                    y
                })
                .collect()
        } else {
            Vec::new()
        };
        Ok(FieldSpec {
            t: Arc::new(Tables {
                p,
                e,
                q,
                modulus,
                add,
                mul,
                neg,
                inv,
                frob,
                conj,
            }),
        })
    }

    pub fn characteristic(&self) -> u32 {
        self.t.p
    }

    pub fn degree(&self) -> u32 {
        self.t.e
    }

    pub fn order(&self) -> u32 {
        self.t.q
    }

    /// Full modulus coefficients `c_0, …, c_{e−1}, 1`.
    pub fn modulus(&self) -> Vec<u32> {
        let mut m = self.t.modulus.clone();
        m.push(1);
        m
    }

    fn modulus_string(&self) -> String {
        let m = self.modulus();
        let mut terms = Vec::new();
        for (k, &c) in m.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let coeff = if c == 1 && k > 0 { String::new() } else { c.to_string() };
            terms.push(match k {
                0 => c.to_string(),
                1 => format!("{coeff}x"),
                _ => format!("{coeff}x^{k}"),
            });
        }
        if self.t.modulus.iter().all(|&c| c == 0) && self.t.e == 1 {
            return "x+0".into();
        }
        terms.join("+")
    }

    /// Order of the subfield fixed by [`FieldSpec::conj_raw`], i.e. `p^{e/2}`.
    pub fn conj_base_order(&self) -> Option<u32> {
        (self.t.e % 2 == 0).then(|| self.t.p.pow(self.t.e / 2))
    }

    pub fn zero(&self) -> FieldElement {
        self.wrap(0)
    }

    pub fn one(&self) -> FieldElement {
        self.wrap(1)
    }

    /// Element with polynomial coefficients `c_0, …, c_{e−1}`.
    pub fn element(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() != self.t.e as usize {
            return Err(Error::DimensionMismatch {
                expected: self.t.e as usize,
                found: coeffs.len(),
            });
        }
        if let Some(&c) = coeffs.iter().find(|&&c| c >= self.t.p) {
            return Err(Error::bad(format!(
                "coefficient {c} is not a residue mod {}",
                self.t.p
            )));
        }
        Ok(self.wrap(encode(coeffs, self.t.p)))
    }

    /// Element from an integer residue in the prime subfield.
    pub fn from_int(&self, v: i64) -> FieldElement {
        self.wrap(v.rem_euclid(self.t.p as i64) as Elem)
    }

    /// Element with the given raw index; panics when out of range.
    pub fn from_raw(&self, idx: Elem) -> FieldElement {
        assert!((idx as u32) < self.t.q, "index {idx} outside F_{}", self.t.q);
        self.wrap(idx)
    }

    fn wrap(&self, index: Elem) -> FieldElement {
        FieldElement {
            field: self.clone(),
            index,
        }
    }

    /// The generator `x` of the polynomial basis (equal to 0 when `e = 1`
    /// under the `x + 0` modulus).
    pub fn generator(&self) -> FieldElement {
        if self.t.e == 1 {
            self.wrap(0)
        } else {
            self.wrap(self.t.p as Elem)
        }
    }

    /// All `q` elements in coefficient-lexicographic (index) order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.t.q).map(move |i| self.wrap(i as Elem))
    }

    pub fn coeffs_of(&self, idx: Elem) -> Vec<u32> {
        digits(idx as u32, self.t.p, self.t.e)
    }

    #[inline]
    pub fn add_raw(&self, a: Elem, b: Elem) -> Elem {
        self.t.add[a as usize * self.t.q as usize + b as usize]
    }

    #[inline]
    pub fn sub_raw(&self, a: Elem, b: Elem) -> Elem {
        self.add_raw(a, self.t.neg[b as usize])
    }

    #[inline]
    pub fn neg_raw(&self, a: Elem) -> Elem {
        self.t.neg[a as usize]
    }

    #[inline]
    pub fn mul_raw(&self, a: Elem, b: Elem) -> Elem {
        self.t.mul[a as usize * self.t.q as usize + b as usize]
    }

    #[inline]
    pub fn inv_raw(&self, a: Elem) -> Option<Elem> {
        (a != 0).then(|| self.t.inv[a as usize])
    }

    #[inline]
    pub fn frob_raw(&self, a: Elem) -> Elem {
        self.t.frob[a as usize]
    }

    /// `a^{p^{e/2}}`. Panics on odd-degree fields; callers validate first.
    #[inline]
    pub fn conj_raw(&self, a: Elem) -> Elem {
        self.t.conj[a as usize]
    }

    pub fn pow_raw(&self, a: Elem, mut k: u64) -> Elem {
        let mut base = a;
        let mut acc: Elem = 1;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.mul_raw(base, base);
            k >>= 1;
        }
        acc
    }

    /// `Σ a_i b_i` over raw indices.
    #[inline]
    pub fn dot_raw(&self, a: &[Elem], b: &[Elem]) -> Elem {
        a.iter()
            .zip(b)
            .fold(0, |acc, (&x, &y)| self.add_raw(acc, self.mul_raw(x, y)))
    }

    /// The involution `x ↦ x^q` of `F_{q²}` over `F_q`, `q = p^{e/2}`.
    pub fn conj(&self, x: &FieldElement) -> Result<FieldElement> {
        self.check_same(x)?;
        if self.t.e % 2 != 0 {
            return Err(Error::NotQuadraticExtension {
                order: self.t.q as u64,
                degree: self.t.e,
            });
        }
        Ok(self.wrap(self.conj_raw(x.index)))
    }

    fn check_same(&self, x: &FieldElement) -> Result<()> {
        if *self == x.field {
            Ok(())
        } else {
            Err(Error::MixedFields {
                left: format!("{self:?}"),
                right: format!("{:?}", x.field),
            })
        }
    }
}

/// Every element of `field`, refusing fields beyond `limits.max_field_order`.
pub fn enumerate_elements<'a>(
    field: &'a FieldSpec,
    limits: &Limits,
) -> Result<impl Iterator<Item = FieldElement> + 'a> {
    if field.order() as u64 > limits.max_field_order {
        return Err(Error::too_large(
            format!("F_{}", field.order()),
            field.order(),
            limits.max_field_order,
        ));
    }
    Ok(field.elements())
}

/// `x^q` for `x ∈ F_{q²}`; see [`FieldSpec::conj`].
pub fn conj(x: &FieldElement) -> Result<FieldElement> {
    x.field.conj(x)
}

/// An element of a [`FieldSpec`]. Operations between elements of different
/// fields fail with [`Error::MixedFields`].
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: FieldSpec,
    index: Elem,
}

impl FieldElement {
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn index(&self) -> Elem {
        self.index
    }

    pub fn coeffs(&self) -> Vec<u32> {
        self.field.coeffs_of(self.index)
    }

    pub fn is_zero(&self) -> bool {
        self.index == 0
    }

    fn binary(&self, rhs: &Self, op: impl Fn(&FieldSpec, Elem, Elem) -> Elem) -> Result<Self> {
        self.field.check_same(rhs)?;
        Ok(self.field.wrap(op(&self.field, self.index, rhs.index)))
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.binary(rhs, FieldSpec::add_raw)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.binary(rhs, FieldSpec::sub_raw)
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.binary(rhs, FieldSpec::mul_raw)
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        self.mul(&rhs.inv()?)
    }

    pub fn neg(&self) -> Self {
        self.field.wrap(self.field.neg_raw(self.index))
    }

    pub fn inv(&self) -> Result<Self> {
        self.field
            .inv_raw(self.index)
            .map(|i| self.field.wrap(i))
            .ok_or(Error::DivisionByZero)
    }

    pub fn pow(&self, k: u64) -> Self {
        self.field.wrap(self.field.pow_raw(self.index, k))
    }

    /// `x ↦ x^p`.
    pub fn frobenius(&self) -> Self {
        self.field.wrap(self.field.frob_raw(self.index))
    }

    pub fn conj(&self) -> Result<Self> {
        self.field.conj(self)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs().iter().map(u32::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl serde::Serialize for FieldElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

fn digits(mut i: u32, p: u32, e: u32) -> Vec<u32> {
    (0..e)
        .map(|_| {
            let d = i % p;
            i /= p;
            d
        })
        .collect()
}

fn encode(c: &[u32], p: u32) -> Elem {
    c.iter().rev().fold(0u32, |acc, &d| acc * p + d) as Elem
}

// Polynomials over F_p as coefficient vectors, lowest degree first.

fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let (mut b, mut k) = (a as u64, p as u64 - 2);
    while k > 0 {
        if k & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        k >>= 1;
    }
    r as u32
}

/// `a mod m` for monic or non-monic nonzero `m`.
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let m = trim(m.to_vec());
    let mut r = trim(a.to_vec());
    let lead_inv = inv_mod(*m.last().expect("nonzero modulus"), p);
    while r.len() >= m.len() {
        let shift = r.len() - m.len();
        let c = (*r.last().unwrap() as u64 * lead_inv as u64 % p as u64) as u32;
        for (k, &mk) in m.iter().enumerate() {
            let v = &mut r[shift + k];
            *v = ((*v as u64 + (p - c) as u64 * mk as u64) % p as u64) as u32;
        }
        r = trim(r);
    }
    r
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    trim(out.into_iter().map(|v| v as u32).collect())
}

/// `a·b` reduced modulo the monic polynomial with low coefficients `low`,
/// padded to length `e`.
fn poly_mulmod(a: &[u32], b: &[u32], low: &[u32], p: u32) -> Vec<u32> {
    let mut m = low.to_vec();
    m.push(1);
    let mut r = poly_rem(&poly_mul(&trim(a.to_vec()), &trim(b.to_vec()), p), &m, p);
    r.resize(low.len(), 0);
    r
}

fn poly_gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// `x^{p^k} mod m`.
fn x_pow_p_pow(k: u32, m: &[u32], p: u32) -> Vec<u32> {
    let mut r = poly_rem(&[0, 1], m, p);
    for _ in 0..k {
        let mut acc = vec![1];
        let mut base = r.clone();
        let mut exp = p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = poly_rem(&poly_mul(&acc, &base, p), m, p);
            }
            base = poly_rem(&poly_mul(&base, &base, p), m, p);
            exp >>= 1;
        }
        r = acc;
    }
    r
}

fn sub_x(a: &[u32], p: u32) -> Vec<u32> {
    let mut a = a.to_vec();
    if a.len() < 2 {
        a.resize(2, 0);
    }
    a[1] = (a[1] + p - 1) % p;
    trim(a)
}

/// Rabin's test for a monic polynomial `m` of degree `e` over `F_p`.
pub(crate) fn is_irreducible(m: &[u32], p: u32) -> bool {
    let m = trim(m.to_vec());
    let e = (m.len() - 1) as u32;
    if e == 0 {
        return false;
    }
    if e == 1 {
        return true;
    }
    if !sub_x(&x_pow_p_pow(e, &m, p), p).is_empty() {
        return false;
    }
    factorize(e as u64).iter().all(|&(d, _)| {
        let h = sub_x(&x_pow_p_pow(e / d as u32, &m, p), p);
        poly_gcd(&h, &m, p).len() == 1
    })
}

fn least_irreducible(p: u32, e: u32) -> Vec<u32> {
    let count = p.pow(e);
    (0..count)
        .map(|i| digits(i, p, e))
        .find(|low| {
            let mut m = low.clone();
            m.push(1);
            is_irreducible(&m, p)
        })
        .expect("an irreducible polynomial of every degree exists")
}
