//! Closed-form counts over finite fields: orders of `GL_n`, `Sp_{2n}`, `U(n,n)`,
//! the numbers of Lagrangian and hermitian-Lagrangian subspaces, zeros of the
//! Fermat form `a_1^{q+1}+…+a_m^{q+1}`, Gaussian binomials, and
//! `|Sp_{2g}(Z/NZ)|`.
//!
//! Each group order also has a `*_by_recursion` twin built from the orbit–stabilizer
//! step used to derive it, so the two routes can be compared exactly.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exact_arith::{factorize, pow_u, prime_power, rational_to_integer, Integer, Rational};

fn check_q(q: u64) -> Result<()> {
    if prime_power(q).is_none() {
        return Err(Error::bad(format!("q = {q} must be a prime power")));
    }
    Ok(())
}

fn check_pos(name: &str, v: u32) -> Result<()> {
    if v == 0 {
        return Err(Error::bad(format!("{name} must be >= 1")));
    }
    Ok(())
}

fn product(range: impl Iterator<Item = u32>, mut f: impl FnMut(u32) -> Integer) -> Integer {
    range.fold(BigInt::one(), |acc, i| acc * f(i))
}

/// `|GL_n(F_q)| = q^{(n²−n)/2} ∏_{i=1}^n (q^i − 1)`.
pub fn gl_order(n: u32, q: u64) -> Result<Integer> {
    check_pos("n", n)?;
    check_q(q)?;
    Ok(pow_u(q, (n * n - n) / 2) * product(1..=n, |i| pow_u(q, i) - 1))
}

/// `|Sp_{2n}(F_q)| = q^{n²} ∏_{i=1}^n (q^{2i} − 1)`.
pub fn sp_order(n: u32, q: u64) -> Result<Integer> {
    check_pos("n", n)?;
    check_q(q)?;
    Ok(pow_u(q, n * n) * product(1..=n, |i| pow_u(q, 2 * i) - 1))
}

/// `|Sp_{2n}| = (q^{2n} − 1) q^{2n−1} |Sp_{2n−2}|` with `|Sp_0| = 1`.
pub fn sp_order_by_recursion(n: u32, q: u64) -> Result<Integer> {
    check_q(q)?;
    Ok(product(1..=n, |k| (pow_u(q, 2 * k) - 1) * pow_u(q, 2 * k - 1)))
}

/// `|U(n,n)(F_q)| = q^{2n²−n} ∏_{i=1}^n (q^{2i} − 1)(q^{2i−1} + 1)`.
pub fn u_order(n: u32, q: u64) -> Result<Integer> {
    check_pos("n", n)?;
    check_q(q)?;
    Ok(pow_u(q, 2 * n * n - n)
        * product(1..=n, |i| (pow_u(q, 2 * i) - 1) * (pow_u(q, 2 * i - 1) + 1)))
}

/// `|U(n,n)| = (q^{2n} − 1)(q^{2n−1} + 1) q^{4n−3} |U(n−1,n−1)|` with `|U(0,0)| = 1`.
pub fn u_order_by_recursion(n: u32, q: u64) -> Result<Integer> {
    check_q(q)?;
    Ok(product(1..=n, |k| {
        (pow_u(q, 2 * k) - 1) * (pow_u(q, 2 * k - 1) + 1) * pow_u(q, 4 * k - 3)
    }))
}

/// `|L(n,2n)(F_q)| = ∏_{i=1}^n (q^i + 1)`.
pub fn lagrangian_count(n: u32, q: u64) -> Result<Integer> {
    check_pos("n", n)?;
    check_q(q)?;
    Ok(product(1..=n, |i| pow_u(q, i) + 1))
}

/// Order of the stabilizer of a Lagrangian in `Sp_{2n}(F_q)`: `q^{n²} ∏ (q^i − 1)`.
pub fn lagrangian_stabilizer_order(n: u32, q: u64) -> Result<Integer> {
    check_pos("n", n)?;
    check_q(q)?;
    Ok(pow_u(q, n * n) * product(1..=n, |i| pow_u(q, i) - 1))
}

/// `|LU(n,2n)(F_q)| = ∏_{i=1}^n (q^{2i−1} + 1)`.
pub fn lu_count(n: u32, q: u64) -> Result<Integer> {
    check_pos("n", n)?;
    check_q(q)?;
    Ok(product(1..=n, |i| pow_u(q, 2 * i - 1) + 1))
}

/// Order of the stabilizer of a maximal isotropic subspace in `U(n,n)(F_q)`:
/// `q^{2n²−n} ∏ (q^{2i} − 1)`.
pub fn lu_stabilizer_order(n: u32, q: u64) -> Result<Integer> {
    check_pos("n", n)?;
    check_q(q)?;
    Ok(pow_u(q, 2 * n * n - n) * product(1..=n, |i| pow_u(q, 2 * i) - 1))
}

/// `|I_m| = q^{2m−1} + (−1)^m q^m + (−1)^{m−1} q^{m−1}`, the zeros of
/// `a_1^{q+1} + … + a_m^{q+1}` in `F_{q²}^m`.
pub fn i_m_count(m: u32, q: u64) -> Result<Integer> {
    check_pos("m", m)?;
    check_q(q)?;
    let sign = |k: u32| if k % 2 == 0 { BigInt::one() } else { -BigInt::one() };
    Ok(pow_u(q, 2 * m - 1) + sign(m) * pow_u(q, m) + sign(m - 1) * pow_u(q, m - 1))
}

/// `|I_m| = (q + 1) q^{2(m−1)} − q |I_{m−1}|` with `|I_1| = 1`.
pub fn i_m_count_by_recursion(m: u32, q: u64) -> Result<Integer> {
    check_pos("m", m)?;
    check_q(q)?;
    let qi = BigInt::from(q);
    Ok((2..=m).fold(BigInt::one(), |prev, k| {
        (&qi + 1u32) * pow_u(q, 2 * (k - 1)) - &qi * prev
    }))
}

/// `[n choose r]_q = ∏_{i=0}^{r−1} (q^{n−i} − 1)/(q^{r−i} − 1)`.
pub fn gaussian_binomial(n: u32, r: u32, q: u64) -> Result<Integer> {
    if r > n {
        return Err(Error::bad(format!("r = {r} must not exceed n = {n}")));
    }
    check_q(q)?;
    let value = (0..r).fold(Rational::one(), |acc, i| {
        acc * Rational::new(pow_u(q, n - i) - 1, pow_u(q, r - i) - 1)
    });
    rational_to_integer(&value)
}

/// `|Sp_{2g}(Z/NZ)|`, multiplicative over `N = ∏ p^e` with
/// `|Sp_{2g}(Z/p^eZ)| = p^{(e−1)·g(2g+1)} |Sp_{2g}(F_p)|`.
pub fn sp_modn_order(g: u32, modulus: u64) -> Result<Integer> {
    check_pos("g", g)?;
    if modulus == 0 {
        return Err(Error::bad("N must be >= 1"));
    }
    let dim = g * (2 * g + 1);
    factorize(modulus)
        .into_iter()
        .try_fold(BigInt::one(), |acc, (p, e)| {
            Ok(acc * pow_u(p, (e - 1) * dim) * sp_order(g, p)?)
        })
}

/// `|P^1(F_q)| = q + 1`.
pub fn proj_line_count(q: u64) -> Result<Integer> {
    check_q(q)?;
    Ok(BigInt::from(q) + 1)
}

/// Family tag of a [`CountQuery`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Gl,
    Sp,
    U,
    Lagrangian,
    Lu,
    Im,
    Grassmannian,
    SpModN,
    ProjLine,
}

impl Family {
    pub const ALL: [Family; 9] = [
        Family::Gl,
        Family::Sp,
        Family::U,
        Family::Lagrangian,
        Family::Lu,
        Family::Im,
        Family::Grassmannian,
        Family::SpModN,
        Family::ProjLine,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Gl => "gl",
            Family::Sp => "sp",
            Family::U => "u",
            Family::Lagrangian => "lagrangian",
            Family::Lu => "lu",
            Family::Im => "im",
            Family::Grassmannian => "grassmannian",
            Family::SpModN => "spmodn",
            Family::ProjLine => "projline",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase().replace(['-', '_'], "");
        Family::ALL
            .into_iter()
            .find(|f| f.name() == lower)
            .ok_or_else(|| {
                let names: Vec<_> = Family::ALL.iter().map(|f| f.name()).collect();
                Error::bad(format!("unknown family {s:?}; expected one of {}", names.join(", ")))
            })
    }
}

/// One closed-form count, tagged by family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CountQuery {
    Gl { n: u32, q: u64 },
    Sp { n: u32, q: u64 },
    U { n: u32, q: u64 },
    Lagrangian { n: u32, q: u64 },
    Lu { n: u32, q: u64 },
    Im { m: u32, q: u64 },
    Grassmannian { n: u32, r: u32, q: u64 },
    SpModN { g: u32, modulus: u64 },
    ProjLine { q: u64 },
}

impl CountQuery {
    pub fn family(&self) -> Family {
        match self {
            CountQuery::Gl { .. } => Family::Gl,
            CountQuery::Sp { .. } => Family::Sp,
            CountQuery::U { .. } => Family::U,
            CountQuery::Lagrangian { .. } => Family::Lagrangian,
            CountQuery::Lu { .. } => Family::Lu,
            CountQuery::Im { .. } => Family::Im,
            CountQuery::Grassmannian { .. } => Family::Grassmannian,
            CountQuery::SpModN { .. } => Family::SpModN,
            CountQuery::ProjLine { .. } => Family::ProjLine,
        }
    }

    pub fn evaluate(&self) -> Result<Integer> {
        match *self {
            CountQuery::Gl { n, q } => gl_order(n, q),
            CountQuery::Sp { n, q } => sp_order(n, q),
            CountQuery::U { n, q } => u_order(n, q),
            CountQuery::Lagrangian { n, q } => lagrangian_count(n, q),
            CountQuery::Lu { n, q } => lu_count(n, q),
            CountQuery::Im { m, q } => i_m_count(m, q),
            CountQuery::Grassmannian { n, r, q } => gaussian_binomial(n, r, q),
            CountQuery::SpModN { g, modulus } => sp_modn_order(g, modulus),
            CountQuery::ProjLine { q } => proj_line_count(q),
        }
    }

    /// Human-readable name of the counted set, e.g. `|Sp_4(F_3)|`.
    pub fn describe(&self) -> String {
        match *self {
            CountQuery::Gl { n, q } => format!("|GL_{n}(F_{q})|"),
            CountQuery::Sp { n, q } => format!("|Sp_{}(F_{q})|", 2 * n),
            CountQuery::U { n, q } => format!("|U({n},{n})(F_{q})|"),
            CountQuery::Lagrangian { n, q } => format!("|L({n},{})(F_{q})|", 2 * n),
            CountQuery::Lu { n, q } => format!("|LU({n},{})(F_{q})|", 2 * n),
            CountQuery::Im { m, q } => format!("|I_{m}| (q={q})"),
            CountQuery::Grassmannian { n, r, q } => format!("|Gr({r},{n})(F_{q})|"),
            CountQuery::SpModN { g, modulus } => format!("|Sp_{}(Z/{modulus}Z)|", 2 * g),
            CountQuery::ProjLine { q } => format!("|P^1(F_{q})|"),
        }
    }
}

impl fmt::Display for CountQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}
