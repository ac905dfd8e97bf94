//! Masses, superspecial counts and component counts of supersingular loci,
//! the Siegel 3-fold report, and the identities tying them together.
//!
//! Every constant is built from `ζ(1−2k)`; the familiar `1/5760` only shows up
//! as the right-hand side of one identity check.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closed_forms::{lagrangian_count, lu_count, sp_modn_order};
use crate::error::{Error, Result};
use crate::exact_arith::{
    format_rational, is_prime, parse_rational, pow_u, rational_to_integer, sign_pow, zeta_neg_odd,
    Integer, Rational,
};

/// Genus, characteristic and level. `N ≥ 3` prime to `p` keeps the moduli problem rigid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModuliParams {
    pub g: u32,
    pub p: u64,
    #[serde(rename = "N")]
    pub level: u64,
}

impl ModuliParams {
    pub fn new(g: u32, p: u64, level: u64) -> Result<Self> {
        if g == 0 {
            return Err(Error::bad("g must be >= 1"));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        check_level(p, level)?;
        Ok(ModuliParams { g, p, level })
    }

    /// `D = g/2`, for even `g`.
    pub fn half_genus(&self) -> Option<u32> {
        (self.g % 2 == 0).then_some(self.g / 2)
    }
}

fn check_level(p: u64, level: u64) -> Result<()> {
    if level < 3 {
        return Err(Error::bad(format!("N = {level} must be >= 3")));
    }
    if level.gcd(&p) != 1 {
        return Err(Error::bad(format!("N = {level} must be prime to p = {p}")));
    }
    Ok(())
}

impl fmt::Display for ModuliParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g={}, p={}, N={}", self.g, self.p, self.level)
    }
}

/// `((−1)^{g(g+1)/2} / 2^g) · ∏_{k=1}^g ζ(1−2k)`.
pub fn mass_prefactor(g: u32) -> Result<Rational> {
    let mut acc = sign_pow(g as u64 * (g as u64 + 1) / 2) / BigInt::from(2u32).pow(g);
    for k in 1..=g {
        acc *= zeta_neg_odd(k)?;
    }
    Ok(acc)
}

/// `M_g = prefactor(g) · ∏_{k=1}^g (p^k + (−1)^k)`.
pub fn mass_superspecial(g: u32, p: u64) -> Result<Rational> {
    if g == 0 {
        return Err(Error::bad("g must be >= 1"));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let factor: Integer = (1..=g)
        .map(|k| pow_u(p, k) + if k % 2 == 0 { 1 } else { -1 })
        .product();
    Ok(mass_prefactor(g)? * Rational::from_integer(factor))
}

/// `|Λ_{g,1,N}| = |Sp_{2g}(Z/NZ)| · M_g`.
pub fn superspecial_count(params: &ModuliParams) -> Result<Integer> {
    let m = mass_superspecial(params.g, params.p)?;
    rational_to_integer(&(m * Rational::from_integer(sp_modn_order(params.g, params.level)?)))
}

/// `|Λ*_{g,p^D,N}| = |Sp_{2g}(Z/NZ)| · prefactor(g) · ∏_{i=1}^D (p^{4i−2} − 1)`, even `g` only.
pub fn lambda_star_count(params: &ModuliParams) -> Result<Integer> {
    let d = params.half_genus().ok_or(Error::OddGenus(params.g))?;
    let factor: Integer = (1..=d).map(|i| pow_u(params.p, 4 * i - 2) - 1).product();
    let sp = sp_modn_order(params.g, params.level)?;
    rational_to_integer(&(mass_prefactor(params.g)? * Rational::from_integer(sp * factor)))
}

/// `∏_{i=1}^g (p^i + (−1)^i)` for odd `g`, `∏_{i=1}^D (p^{4i−2} − 1)` for `g = 2D`.
pub fn l_p(g: u32, p: u64) -> Integer {
    if g % 2 == 1 {
        (1..=g)
            .map(|i| pow_u(p, i) + if i % 2 == 0 { 1 } else { -1 })
            .product()
    } else {
        (1..=g / 2).map(|i| pow_u(p, 4 * i - 2) - 1).product()
    }
}

/// Number of irreducible components `C = |Sp_{2g}(Z/NZ)| · prefactor(g) · L_p`.
pub fn component_count(params: &ModuliParams) -> Result<Integer> {
    let sp = sp_modn_order(params.g, params.level)?;
    let c = mass_prefactor(params.g)? * Rational::from_integer(sp * l_p(params.g, params.p));
    rational_to_integer(&c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ValueKind {
    Int,
    Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantValue {
    pub name: String,
    pub theorem: String,
    pub value: String,
    pub kind: ValueKind,
}

impl InvariantValue {
    fn int(name: &str, theorem: &str, v: &Integer) -> Self {
        InvariantValue {
            name: name.into(),
            theorem: theorem.into(),
            value: v.to_string(),
            kind: ValueKind::Int,
        }
    }

    fn rational(name: &str, theorem: &str, v: &Rational) -> Self {
        InvariantValue {
            name: name.into(),
            theorem: theorem.into(),
            value: format_rational(v),
            kind: ValueKind::Rational,
        }
    }

    pub fn as_rational(&self) -> Result<Rational> {
        parse_rational(&self.value)
    }

    pub fn as_integer(&self) -> Result<Integer> {
        rational_to_integer(&self.as_rational()?)
    }
}

/// Named exact values with their provenance, as emitted by the CLI.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub params: BTreeMap<String, u64>,
    pub values: Vec<InvariantValue>,
}

impl InvariantReport {
    fn new(params: &[(&str, u64)]) -> Self {
        InvariantReport {
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            values: Vec::new(),
        }
    }

    fn for_params(params: &ModuliParams) -> Self {
        Self::new(&[("g", params.g as u64), ("p", params.p), ("N", params.level)])
    }

    pub fn get(&self, name: &str) -> Option<&InvariantValue> {
        self.values.iter().find(|v| v.name == name)
    }

    pub fn integer(&self, name: &str) -> Option<Integer> {
        self.get(name).and_then(|v| v.as_integer().ok())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let report: Self =
            serde_json::from_str(s).map_err(|e| Error::bad(format!("invalid report JSON: {e}")))?;
        for v in &report.values {
            let x = v.as_rational()?;
            if v.kind == ValueKind::Int {
                rational_to_integer(&x)?;
            }
        }
        Ok(report)
    }

    /// One `name = value` line per entry, provenance aligned in a trailing column.
    pub fn to_table(&self) -> String {
        let lefts: Vec<String> = self.values.iter().map(|v| format!("{} = {}", v.name, v.value)).collect();
        let width = lefts.iter().map(String::len).max().unwrap_or(0);
        let mut out = String::new();
        for (left, v) in lefts.iter().zip(&self.values) {
            out.push_str(&format!("{left:<width$}  [{}]\n", v.theorem));
        }
        out
    }
}

const TAG_MASS: &str = "mass of principally polarized superspecial classes";
const TAG_SSP: &str = "superspecial points with level N: |Sp_2g(Z/N)| * M_g";
const TAG_STAR: &str = "superspecial points with polarization kernel A[F]";
const TAG_LP: &str = "local factor of the component count";
const TAG_C: &str = "irreducible components of the supersingular locus";

pub fn mass_report(g: u32, p: u64) -> Result<InvariantReport> {
    let mut r = InvariantReport::new(&[("g", g as u64), ("p", p)]);
    r.values.push(InvariantValue::rational("M_g", TAG_MASS, &mass_superspecial(g, p)?));
    Ok(r)
}

/// `M_g`, `|Λ_{g,1,N}|`, `|Λ*|` (even `g`), `L_p` and `C`.
pub fn components_report(params: &ModuliParams) -> Result<InvariantReport> {
    let mut r = InvariantReport::for_params(params);
    r.values.push(InvariantValue::rational("M_g", TAG_MASS, &mass_superspecial(params.g, params.p)?));
    r.values.push(InvariantValue::int("superspecial_count", TAG_SSP, &superspecial_count(params)?));
    if params.half_genus().is_some() {
        r.values.push(InvariantValue::int("lambda_star_count", TAG_STAR, &lambda_star_count(params)?));
    }
    r.values.push(InvariantValue::int("L_p", TAG_LP, &l_p(params.g, params.p)));
    r.values.push(InvariantValue::int("C", TAG_C, &component_count(params)?));
    Ok(r)
}

/// The five counts for the Siegel 3-fold (`g = 2`) and its Iwahori-type cover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Siegel3 {
    pub p: u64,
    pub level: u64,
    pub sp4_order: Integer,
    pub prefactor: Rational,
    /// Components of `S_{2,1,N}`.
    pub eq1_1: Integer,
    /// Singular (= superspecial) points of `S_{2,1,N}`.
    pub eq1_2: Integer,
    /// Components of `S_{2,1,N,(p)}`.
    pub eq1_3: Integer,
    /// Ordinary double points of `S_{2,1,N,(p)}`.
    pub eq1_4: Integer,
    /// Projective lines contracted onto superspecial points.
    pub eq1_5: Integer,
    /// `|Λ|`, components of the non-principal stratum.
    pub lambda: Integer,
    /// Components through each superspecial point.
    pub components_per_point: Integer,
    /// Superspecial points on each component.
    pub points_per_component: Integer,
}

pub fn siegel3(p: u64, level: u64) -> Result<Siegel3> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    check_level(p, level)?;
    let sp4 = sp_modn_order(2, level)?;
    let pre = mass_prefactor(2)?;
    let count = |factor: Integer| rational_to_integer(&(pre.clone() * Rational::from_integer(&sp4 * factor)));
    let pi = BigInt::from(p);
    let a: Integer = &pi * &pi - 1; // p² − 1
    let b: Integer = (&pi - 1) * (&pi * &pi + 1); // (p − 1)(p² + 1)
    Ok(Siegel3 {
        p,
        level,
        eq1_1: count(a.clone())?,
        eq1_2: count(b.clone())?,
        eq1_3: count(&a + &b)?,
        eq1_4: count(&b * (&pi + 1))?,
        eq1_5: count(b)?,
        lambda: count(a)?,
        components_per_point: &pi + 1,
        points_per_component: &pi * &pi + 1,
        sp4_order: sp4,
        prefactor: pre,
    })
}

pub fn siegel3_report(p: u64, level: u64) -> Result<InvariantReport> {
    let s = siegel3(p, level)?;
    let mut r = InvariantReport::new(&[("g", 2), ("p", p), ("N", level)]);
    let rows: [(&str, &str, &Integer); 9] = [
        ("eq1.1", "irreducible components of S_{2,1,N}", &s.eq1_1),
        ("eq1.2", "singular points of S_{2,1,N} (superspecial)", &s.eq1_2),
        ("eq1.3", "irreducible components of S_{2,1,N,(p)}", &s.eq1_3),
        ("eq1.4", "ordinary double points of S_{2,1,N,(p)}", &s.eq1_4),
        ("eq1.5", "lines contracted onto superspecial points", &s.eq1_5),
        ("lambda", "|Lambda|, non-principal superspecial points", &s.lambda),
        ("components_per_superspecial_point", "components through each superspecial point", &s.components_per_point),
        ("superspecial_points_per_component", "superspecial points on each component", &s.points_per_component),
        ("sp4_order", "|Sp_4(Z/N)|", &s.sp4_order),
    ];
    for (name, tag, v) in rows {
        r.values.push(InvariantValue::int(name, tag, v));
    }
    r.values.push(InvariantValue::rational("prefactor", "(-1) zeta(-1) zeta(-3) / 4", &s.prefactor));
    Ok(r)
}

/// Class-number reading of the superspecial counts; nothing quaternionic is computed.
pub fn class_number_view(params: &ModuliParams) -> Result<InvariantReport> {
    let mut r = InvariantReport::for_params(params);
    r.values.push(InvariantValue::int(
        "H-principal-genus-with-level",
        "principal genus class number with level N = |Lambda_{g,1,N}|",
        &superspecial_count(params)?,
    ));
    if params.half_genus().is_some() {
        r.values.push(InvariantValue::int(
            "H-non-principal-genus-with-level",
            "non-principal genus class number with level N = |Lambda*_{g,p^D,N}|",
            &lambda_star_count(params)?,
        ));
    }
    Ok(r)
}

/// One exact identity and both of its sides.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
}

impl IdentityCheck {
    fn new(name: &str, lhs: impl fmt::Display, rhs: impl fmt::Display) -> Self {
        let (lhs, rhs) = (lhs.to_string(), rhs.to_string());
        IdentityCheck {
            name: name.into(),
            holds: lhs == rhs,
            lhs,
            rhs,
        }
    }
}

/// Every identity that applies to `params`, whether or not it holds.
pub fn identity_ledger(params: &ModuliParams) -> Result<Vec<IdentityCheck>> {
    let mut out = Vec::new();
    let ssp = superspecial_count(params)?;
    let c = component_count(params)?;
    if let Some(d) = params.half_genus() {
        let star = lambda_star_count(params)?;
        out.push(IdentityCheck::new(
            "double count: |L(D,2D)(F_p^2)| * |Lambda*| = |LU(D,2D)(F_p)| * |Lambda_{g,1,N}|",
            lagrangian_count(d, params.p * params.p)? * &star,
            lu_count(d, params.p)? * &ssp,
        ));
        out.push(IdentityCheck::new("components (even g) = |Lambda*|", &c, &star));
    } else {
        out.push(IdentityCheck::new("components (odd g) = |Lambda_{g,1,N}|", &c, &ssp));
    }

    let s = siegel3(params.p, params.level)?;
    out.push(IdentityCheck::new("eq1.3 = eq1.1 + eq1.2", &s.eq1_3, &s.eq1_1 + &s.eq1_2));
    out.push(IdentityCheck::new("eq1.5 = eq1.2", &s.eq1_5, &s.eq1_2));
    out.push(IdentityCheck::new(
        "eq1.2 * (p+1) = eq1.1 * (p^2+1)",
        &s.eq1_2 * &s.components_per_point,
        &s.eq1_1 * &s.points_per_component,
    ));
    out.push(IdentityCheck::new("eq1.4 = eq1.2 * (p+1)", &s.eq1_4, &s.eq1_2 * &s.components_per_point));
    out.push(IdentityCheck::new(
        "(-1) zeta(-1) zeta(-3) / 4 = 1/5760",
        format_rational(&s.prefactor),
        format_rational(&Rational::new(BigInt::one(), BigInt::from(5760))),
    ));

    if params.g == 2 {
        let p = BigInt::from(params.p);
        let classical = Rational::new(sp_modn_order(2, params.level)? * (&p * &p - 1), BigInt::from(5760));
        out.push(IdentityCheck::new(
            "components (g=2) = |Sp_4(Z/N)| (p^2-1) / 5760",
            format_rational(&Rational::from_integer(c.clone())),
            format_rational(&classical),
        ));
        out.push(IdentityCheck::new("|Lambda*| (g=2) = |Lambda|", lambda_star_count(params)?, &s.lambda));
    }
    Ok(out)
}

/// Like [`identity_ledger`] but fails with the first violated identity.
pub fn check_identities(params: &ModuliParams) -> Result<Vec<IdentityCheck>> {
    let ledger = identity_ledger(params)?;
    if let Some(bad) = ledger.iter().find(|c| !c.holds) {
        return Err(Error::IdentityViolation {
            name: bad.name.clone(),
            lhs: bad.lhs.clone(),
            rhs: bad.rhs.clone(),
        });
    }
    Ok(ledger)
}

/// One row of a parameter sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRow {
    pub params: ModuliParams,
    pub superspecial_count: String,
    pub lambda_star_count: Option<String>,
    pub l_p: String,
    pub component_count: String,
}

/// Component counts over every valid `(g, p, N)` in the product of the ranges,
/// sorted by parameters. Tuples with `N` not prime to `p` are skipped.
pub fn sweep(gs: &[u32], ps: &[u64], levels: &[u64]) -> Result<Vec<SweepRow>> {
    let mut tuples = Vec::new();
    for &g in gs {
        for &p in ps {
            for &n in levels {
                if n.gcd(&p) == 1 {
                    tuples.push(ModuliParams::new(g, p, n)?);
                }
            }
        }
    }
    tuples.sort();
    tuples.dedup();
    tuples
        .par_iter()
        .map(|params| {
            Ok(SweepRow {
                params: *params,
                superspecial_count: superspecial_count(params)?.to_string(),
                lambda_star_count: match params.half_genus() {
                    Some(_) => Some(lambda_star_count(params)?.to_string()),
                    None => None,
                },
                l_p: l_p(params.g, params.p).to_string(),
                component_count: component_count(params)?.to_string(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::{int, ratio};
    use num_traits::{Signed, Zero};

    fn mp(g: u32, p: u64, n: u64) -> ModuliParams {
        ModuliParams::new(g, p, n).unwrap()
    }

    /// Bypasses validation: `N = p = 3` is not a valid level, but the formulas still evaluate.
    fn raw(g: u32, p: u64, level: u64) -> ModuliParams {
        ModuliParams { g, p, level }
    }

    #[test]
    fn mass_examples() {
        assert_eq!(mass_superspecial(1, 2).unwrap(), ratio(1, 24));
        assert_eq!(mass_superspecial(2, 2).unwrap(), ratio(1, 1152));
        assert_eq!(mass_superspecial(2, 3).unwrap(), ratio(1, 288));
        // Eichler: (p − 1)/24
        for p in [3u64, 5, 7, 11, 13] {
            assert_eq!(mass_superspecial(1, p).unwrap(), ratio(p - 1, 24));
        }
        assert_eq!(mass_prefactor(2).unwrap(), ratio(1, 5760));
        assert!(mass_superspecial(0, 2).is_err());
        assert_eq!(mass_superspecial(2, 4).unwrap_err(), Error::NotPrime(4));
    }

    #[test]
    fn mass_is_positive() {
        for g in 1..=10 {
            for p in [2u64, 3, 5, 7, 11, 13] {
                assert!(mass_superspecial(g, p).unwrap().is_positive(), "g={g} p={p}");
            }
        }
    }

    #[test]
    fn params_validation() {
        assert!(ModuliParams::new(2, 2, 2).is_err());
        assert!(ModuliParams::new(2, 3, 6).is_err());
        assert!(ModuliParams::new(2, 2, 4).is_err());
        assert_eq!(ModuliParams::new(2, 9, 4).unwrap_err(), Error::NotPrime(9));
        assert!(ModuliParams::new(0, 2, 3).is_err());
        assert_eq!(mp(4, 2, 3).half_genus(), Some(2));
        assert_eq!(mp(3, 2, 3).half_genus(), None);
    }

    #[test]
    fn count_examples() {
        assert_eq!(superspecial_count(&mp(1, 2, 3)).unwrap(), int(1));
        assert_eq!(superspecial_count(&mp(2, 2, 3)).unwrap(), int(45));
        // |Sp_4(Z/4)| = 2^10 · 720
        assert_eq!(superspecial_count(&mp(2, 3, 4)).unwrap(), int(737280 / 288));
        assert_eq!(lambda_star_count(&mp(2, 2, 3)).unwrap(), int(27));
        assert_eq!(lambda_star_count(&raw(2, 3, 3)).unwrap(), int(72));
        assert_eq!(lambda_star_count(&mp(3, 2, 3)).unwrap_err(), Error::OddGenus(3));
        assert_eq!(component_count(&mp(2, 2, 3)).unwrap(), int(27));
        assert_eq!(component_count(&mp(1, 2, 3)).unwrap(), int(1));
        assert_eq!(l_p(4, 2), int(189));
        assert_eq!(l_p(3, 2), int(1 * 5 * 7));
        assert!(component_count(&mp(4, 2, 3)).unwrap() > Integer::zero());
    }

    #[test]
    fn siegel3_examples() {
        let s = siegel3(2, 3).unwrap();
        assert_eq!(
            [&s.eq1_1, &s.eq1_2, &s.eq1_3, &s.eq1_4, &s.eq1_5],
            [&int(27), &int(45), &int(72), &int(135), &int(45)]
        );
        assert_eq!(s.sp4_order, int(51840));
        assert_eq!(s.lambda, int(27));
        assert_eq!(&s.eq1_2 * &s.components_per_point, int(135));
        let s = siegel3(3, 4).unwrap();
        assert_eq!(s.eq1_3, &s.eq1_1 + &s.eq1_2);
        assert!(siegel3(2, 4).is_err());
        assert!(siegel3(2, 2).is_err());
    }

    #[test]
    fn identity_examples() {
        for params in [mp(2, 2, 3), mp(2, 3, 4), mp(4, 2, 3), mp(1, 2, 3), mp(3, 5, 7)] {
            let ledger = check_identities(&params).unwrap();
            assert!(ledger.iter().all(|c| c.holds));
        }
        let ledger = check_identities(&mp(2, 2, 3)).unwrap();
        assert_eq!(ledger[0].lhs, "135");
        // the double count itself does not need a valid level
        let star = lambda_star_count(&raw(2, 3, 3)).unwrap();
        let ssp = superspecial_count(&raw(2, 3, 3)).unwrap();
        assert_eq!((&star, &ssp), (&int(72), &int(180)));
        assert_eq!(lagrangian_count(1, 9).unwrap() * star, int(720));
        assert_eq!(lu_count(1, 3).unwrap() * ssp, int(720));
        assert!(ModuliParams::new(2, 3, 3).is_err());
    }

    #[test]
    fn reports() {
        let r = mass_report(2, 2).unwrap();
        assert!(r.to_table().starts_with("M_g = 1/1152"));
        let r = siegel3_report(2, 3).unwrap();
        assert_eq!(r.integer("eq1.4"), Some(int(135)));
        let back = InvariantReport::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.to_table(), r.to_table());

        let v = class_number_view(&mp(2, 2, 3)).unwrap();
        assert_eq!(v.integer("H-principal-genus-with-level"), Some(int(45)));
        assert_eq!(v.integer("H-non-principal-genus-with-level"), Some(int(27)));
        let v = class_number_view(&mp(3, 2, 3)).unwrap();
        assert_eq!(v.values.len(), 1);

        let c = components_report(&mp(4, 2, 3)).unwrap();
        assert_eq!(c.integer("L_p"), Some(int(189)));
        assert_eq!(c.integer("C"), c.integer("lambda_star_count"));
    }

    #[test]
    fn rejects_non_integral_json() {
        let mut r = siegel3_report(2, 3).unwrap();
        r.values[0].value = "1/2".into();
        assert!(InvariantReport::from_json(&r.to_json()).is_err());
    }

    #[test]
    fn sweep_is_sorted_and_skips_non_coprime() {
        let rows = sweep(&[2, 1], &[3, 2], &[4, 3]).unwrap();
        let keys: Vec<_> = rows.iter().map(|r| r.params).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert!(rows.iter().all(|r| r.params.level % 2 == 1 || r.params.p != 2));
        assert_eq!(rows.len(), 4);
    }
}
