//! Brute-force counters over finite fields.
//!
//! None of these call into `closed_forms`; they only share field arithmetic,
//! row reduction and subspace enumeration. Each one sizes its search space up
//! front and refuses with [`Error::FieldTooLarge`] when it exceeds
//! [`Limits::max_search`]. Work is split across rayon threads (by pivot pattern,
//! first coordinate or first column) and merged by summation, so results do not
//! depend on scheduling.

use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::closed_forms::CountQuery;
use crate::error::{Error, Result};
use crate::exact_arith::{pow_u, prime_power, Integer};
use crate::finite_field::{make_field_with, Elem, FieldSpec};
use crate::formspaces::{
    pivot_patterns, subspace_count_by_patterns, subspaces_with_pivots, Matrix, Pairing,
};
use crate::limits::Limits;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub query: String,
    pub count: Integer,
    pub search_space: Integer,
    pub elapsed: Duration,
}

impl fmt::Display for OracleResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} = {} (searched {} in {:.3}s)",
            self.query,
            self.count,
            self.search_space,
            self.elapsed.as_secs_f64()
        )
    }
}

/// Matrix groups the group-order oracle can count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupKind {
    /// Invertible `n × n` matrices over `F_q`.
    Gl,
    /// `2n × 2n` matrices over `F_q` with `MᵀJM = J`, `J = [[0, I], [−I, 0]]`.
    Sp,
    /// `2n × 2n` matrices over `F_{q²}` with `conj(M)ᵀJM = J`, `J = [[0, I], [I, 0]]`.
    U,
}

#[derive(Debug, Clone)]
pub struct Oracles {
    limits: Limits,
}

impl Default for Oracles {
    fn default() -> Self {
        Oracles::new(Limits::from_env())
    }
}

fn timed(query: String, search_space: Integer, run: impl FnOnce() -> u64) -> OracleResult {
    let start = Instant::now();
    let count = run();
    OracleResult {
        query,
        count: BigInt::from(count),
        search_space,
        elapsed: start.elapsed(),
    }
}

impl Oracles {
    pub fn new(limits: Limits) -> Self {
        Oracles { limits }
    }

    pub fn limits(&self) -> &Limits {
        &self.limits
    }

    fn field(&self, p: u64, e: u32) -> Result<FieldSpec> {
        make_field_with(p, e, &self.limits)
    }

    /// `F_q` for a prime power `q`.
    fn field_of_order(&self, q: u64) -> Result<FieldSpec> {
        let (p, e) = prime_power(q).ok_or_else(|| Error::bad(format!("q = {q} is not a prime power")))?;
        self.field(p, e)
    }

    /// `F_{q²}` for a prime power `q`.
    fn quadratic_over(&self, q: u64) -> Result<FieldSpec> {
        let (p, e) = prime_power(q).ok_or_else(|| Error::bad(format!("q = {q} is not a prime power")))?;
        self.field(p, 2 * e)
    }

    /// The brute-force counterpart of a closed-form query.
    pub fn run(&self, query: &CountQuery) -> Result<OracleResult> {
        let mut r = match *query {
            CountQuery::Gl { n, q } => self.count_group(GroupKind::Gl, n, q),
            CountQuery::Sp { n, q } => self.count_group(GroupKind::Sp, n, q),
            CountQuery::U { n, q } => self.count_group(GroupKind::U, n, q),
            CountQuery::Lagrangian { n, q } => {
                check_n(n)?;
                let f = self.field_of_order(q)?;
                self.count_isotropic_subspaces(&Pairing::symplectic_standard(&f, n as usize), n as usize)
            }
            CountQuery::Lu { n, q } => {
                check_n(n)?;
                let f = self.quadratic_over(q)?;
                self.count_isotropic_subspaces(&Pairing::hermitian_standard(&f, n as usize)?, n as usize)
            }
            CountQuery::Im { m, q } => self.count_im(m, q),
            CountQuery::Grassmannian { n, r, q } => self.count_subspaces(n as usize, r as usize, q),
            CountQuery::SpModN { g, modulus } => self.count_sp_modn(g, modulus),
            CountQuery::ProjLine { q } => self.count_subspaces(2, 1, q),
        }?;
        r.query = query.describe();
        Ok(r)
    }

    /// Number of `r`-dimensional subspaces `S` with `pairing.is_isotropic(S)`.
    pub fn count_isotropic_subspaces(&self, pairing: &Pairing, r: usize) -> Result<OracleResult> {
        let f = pairing.field();
        let n = pairing.dim();
        if r > n {
            return Err(Error::bad(format!("dimension {r} exceeds ambient {n}")));
        }
        let space = subspace_count_by_patterns(f.order() as u64, n, r);
        self.limits.check_search("isotropic subspace search", &space)?;
        let query = format!("#{{{r}-dim isotropic in F_{}^{n}, {:?}}}", f.order(), pairing.kind());
        Ok(timed(query, space, || {
            pivot_patterns(n, r)
                .par_iter()
                .map(|pat| {
                    subspaces_with_pivots(f, n, pat)
                        .filter(|s| pairing.is_isotropic(s).expect("shape checked"))
                        .count() as u64
                })
                .sum()
        }))
    }

    /// All `r`-dimensional subspaces of `F_q^n`, counted by enumeration.
    pub fn count_subspaces(&self, n: usize, r: usize, q: u64) -> Result<OracleResult> {
        if r > n {
            return Err(Error::bad(format!("dimension {r} exceeds ambient {n}")));
        }
        let f = self.field_of_order(q)?;
        let space = subspace_count_by_patterns(q, n, r);
        self.limits.check_search("subspace enumeration", &space)?;
        let query = format!("#Gr({r},{n})(F_{q})");
        Ok(timed(query, space, || {
            pivot_patterns(n, r)
                .par_iter()
                .map(|pat| subspaces_with_pivots(&f, n, pat).count() as u64)
                .sum()
        }))
    }

    /// `n`-dimensional subspaces of `F_{p²}^{2n}` on which `Σ a_i b_i^p` vanishes,
    /// tested on every pair of vectors rather than basis pairs.
    pub fn count_twisted_isotropic(&self, n: u32, p: u64) -> Result<OracleResult> {
        if n == 0 {
            return Err(Error::bad("n must be >= 1"));
        }
        if !crate::exact_arith::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let f = self.field(p, 2)?;
        let pairing = Pairing::twisted(&f, n as usize)?;
        let (dim, r) = (2 * n as usize, n as usize);
        let space = subspace_count_by_patterns(f.order() as u64, dim, r) * pow_u(p, 4 * n);
        self.limits.check_search("twisted isotropic search", &space)?;
        let query = format!("#X({n},{dim})(F_{})", f.order());
        Ok(timed(query, space, || {
            pivot_patterns(dim, r)
                .par_iter()
                .map(|pat| {
                    subspaces_with_pivots(&f, dim, pat)
                        .filter(|s| pairing.is_isotropic_exhaustive(s).expect("shape checked"))
                        .count() as u64
                })
                .sum()
        }))
    }

    /// Points `[a:b] ∈ P^1(F_{p²})` with `a^{p+1} + b^{p+1} = 0`.
    pub fn count_fermat_projective(&self, p: u64) -> Result<OracleResult> {
        if !crate::exact_arith::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let f = self.field(p, 2)?;
        let q = f.order() as Elem;
        let space = BigInt::from(q as u64 + 1);
        self.limits.check_search("P^1 search", &space)?;
        let query = format!("#{{[a:b] in P^1(F_{}) : a^{} + b^{} = 0}}", q, p + 1, p + 1);
        Ok(timed(query, space, || {
            let vanishes = |a: Elem, b: Elem| f.add_raw(f.pow_raw(a, p + 1), f.pow_raw(b, p + 1)) == 0;
            // representatives [0:1] and [1:b]
            vanishes(0, 1) as u64 + (0..q).filter(|&b| vanishes(1, b)).count() as u64
        }))
    }

    /// Zeros of `a_1^{q+1} + … + a_m^{q+1}` in `F_{q²}^m`.
    pub fn count_im(&self, m: u32, q: u64) -> Result<OracleResult> {
        if m == 0 {
            return Err(Error::bad("m must be >= 1"));
        }
        let f = self.quadratic_over(q)?;
        let size = f.order() as u64;
        let space = pow_u(size, m);
        self.limits.check_search("I_m search", &space)?;
        let norm: Vec<Elem> = (0..size as Elem).map(|a| f.pow_raw(a, q + 1)).collect();
        let query = format!("#I_{m}(q={q})");
        let rest = size.pow(m - 1);
        Ok(timed(query, space, || {
            (0..size)
                .into_par_iter()
                .map(|first| {
                    let mut count = 0u64;
                    for code in 0..rest {
                        let mut c = code;
                        let mut acc = norm[first as usize];
                        for _ in 1..m {
                            acc = f.add_raw(acc, norm[(c % size) as usize]);
                            c /= size;
                        }
                        count += (acc == 0) as u64;
                    }
                    count
                })
                .sum()
        }))
    }

    /// Order of `GL_n(F_q)`, `Sp_{2n}(F_q)` or `U(n,n)(F_q)` by exhaustion.
    pub fn count_group(&self, kind: GroupKind, n: u32, q: u64) -> Result<OracleResult> {
        if n == 0 {
            return Err(Error::bad("n must be >= 1"));
        }
        match kind {
            GroupKind::Gl => self.count_gl(n as usize, q),
            GroupKind::Sp => {
                let f = self.field_of_order(q)?;
                let dim = 2 * n as usize;
                let space = pow_u(q, (dim * dim) as u32);
                self.limits.check_search("Sp matrix search", &space)?;
                let j = Matrix::symplectic_j(&f, n as usize);
                let form = |x: &[Elem], y: &[Elem]| bilinear(&f, &j, x, y, |v| v);
                let vectors = all_vectors(f.order() as u64, dim);
                Ok(timed(format!("#Sp_{dim}(F_{q})"), space, || {
                    count_gram_preserving(&vectors, &form, |i, k| j.raw_at(i, k))
                }))
            }
            GroupKind::U => {
                let f = self.quadratic_over(q)?;
                let dim = 2 * n as usize;
                let space = pow_u(f.order() as u64, (dim * dim) as u32);
                self.limits.check_search("U matrix search", &space)?;
                let j = Matrix::antidiagonal_j(&f, n as usize);
                let form = |x: &[Elem], y: &[Elem]| bilinear(&f, &j, x, y, |v| f.conj_raw(v));
                let vectors = all_vectors(f.order() as u64, dim);
                Ok(timed(format!("#U({n},{n})(F_{q})"), space, || {
                    count_gram_preserving(&vectors, &form, |i, k| j.raw_at(i, k))
                }))
            }
        }
    }

    fn count_gl(&self, n: usize, q: u64) -> Result<OracleResult> {
        let f = self.field_of_order(q)?;
        let space = pow_u(q, (n * n) as u32);
        self.limits.check_search("GL matrix search", &space)?;
        let total = q.pow((n * n) as u32);
        Ok(timed(format!("#GL_{n}(F_{q})"), space, || {
            (0..total)
                .into_par_iter()
                .filter(|&code| {
                    let mut c = code;
                    let mut data: Vec<Elem> = (0..n * n)
                        .map(|_| {
                            let d = c % q;
                            c /= q;
                            d as Elem
                        })
                        .collect();
                    crate::formspaces::rank_raw(&f, &mut data, n, n) == n
                })
                .count() as u64
        }))
    }

    /// Order of `Sp_{2g}(Z/NZ)`: `2g × 2g` integer matrices mod `N` with `MᵀJM = J`.
    pub fn count_sp_modn(&self, g: u32, modulus: u64) -> Result<OracleResult> {
        if g == 0 || modulus == 0 {
            return Err(Error::bad("g and N must be >= 1"));
        }
        if modulus > u16::MAX as u64 {
            return Err(Error::too_large("Z/NZ", modulus, u16::MAX as u64));
        }
        let dim = 2 * g as usize;
        let space = pow_u(modulus, (dim * dim) as u32);
        self.limits.check_search("Sp mod N matrix search", &space)?;
        let n = g as usize;
        let target = |i: usize, k: usize| -> Elem {
            if k == i + n {
                1 % modulus as Elem
            } else if i == k + n {
                ((modulus - 1) % modulus) as Elem
            } else {
                0
            }
        };
        let form = |x: &[Elem], y: &[Elem]| -> Elem {
            let mut acc = 0u64;
            for i in 0..n {
                acc += x[i] as u64 * y[n + i] as u64;
                acc += (modulus - x[n + i] as u64 % modulus) * y[i] as u64;
            }
            (acc % modulus) as Elem
        };
        let vectors = all_vectors(modulus, dim);
        Ok(timed(format!("#Sp_{dim}(Z/{modulus}Z)"), space, || {
            count_gram_preserving(&vectors, &form, target)
        }))
    }
}

fn check_n(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::bad("n must be >= 1"));
    }
    Ok(())
}

/// `xᵀ G tw(y)`.
fn bilinear(f: &FieldSpec, g: &Matrix, x: &[Elem], y: &[Elem], tw: impl Fn(Elem) -> Elem) -> Elem {
    let n = g.rows();
    let mut acc = 0;
    for i in 0..n {
        if x[i] == 0 {
            continue;
        }
        for k in 0..n {
            let gik = g.raw_at(i, k);
            if gik != 0 {
                acc = f.add_raw(acc, f.mul_raw(x[i], f.mul_raw(gik, tw(y[k]))));
            }
        }
    }
    acc
}

/// Every vector of `R^dim` for a ring with `size` elements, coordinate 0 varying fastest.
fn all_vectors(size: u64, dim: usize) -> Vec<Vec<Elem>> {
    let total = size.pow(dim as u32);
    (0..total)
        .map(|code| {
            let mut c = code;
            (0..dim)
                .map(|_| {
                    let d = c % size;
                    c /= size;
                    d as Elem
                })
                .collect()
        })
        .collect()
}

/// Number of ordered column tuples `(c_0, …, c_{d−1})` with
/// `form(c_i, c_k) = target(i, k)` for all `i, k`: the matrices whose Gram matrix
/// under `form` equals `target`. Columns are chosen left to right and a prefix
/// is abandoned as soon as one of its entries disagrees.
fn count_gram_preserving<F, T>(vectors: &[Vec<Elem>], form: &F, target: T) -> u64
where
    F: Fn(&[Elem], &[Elem]) -> Elem + Sync,
    T: Fn(usize, usize) -> Elem + Sync,
{
    let dim = vectors.first().map_or(0, Vec::len);
    fn extend<F, T>(vectors: &[Vec<Elem>], form: &F, target: &T, chosen: &mut Vec<usize>, dim: usize) -> u64
    where
        F: Fn(&[Elem], &[Elem]) -> Elem,
        T: Fn(usize, usize) -> Elem,
    {
        let k = chosen.len();
        if k == dim {
            return 1;
        }
        let mut total = 0;
        for (idx, v) in vectors.iter().enumerate() {
            if form(v, v) != target(k, k) {
                continue;
            }
            let ok = chosen.iter().enumerate().all(|(i, &c)| {
                let w = &vectors[c];
                form(w, v) == target(i, k) && form(v, w) == target(k, i)
            });
            if ok {
                chosen.push(idx);
                total += extend(vectors, form, target, chosen, dim);
                chosen.pop();
            }
        }
        total
    }
    if dim == 0 {
        return 1;
    }
    (0..vectors.len())
        .into_par_iter()
        .filter(|&first| form(&vectors[first], &vectors[first]) == target(0, 0))
        .map(|first| {
            let mut chosen = vec![first];
            extend(vectors, form, &target, &mut chosen, dim)
        })
        .sum()
}
