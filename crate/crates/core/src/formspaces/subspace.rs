use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_traits::Zero;

use super::matrix::{rref_in_place, Matrix};
use crate::error::{Error, Result};
use crate::exact_arith::Integer;
use crate::finite_field::{Elem, FieldElement, FieldSpec};
use crate::limits::Limits;

/// A subspace of `F_q^n`, held as the unique RREF basis with nonzero rows.
/// Two values are equal iff they are the same subspace.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Hash for Subspace {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.basis.cols().hash(state);
        self.basis.raw().hash(state);
    }
}

impl std::fmt::Debug for Subspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subspace{:?}", self.to_rows())
    }
}

impl Subspace {
    /// Span of the given rows (raw element indices) in `F_q^n`.
    pub fn span_raw(field: &FieldSpec, n: usize, rows: &[Vec<Elem>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        let matrix = Matrix::from_raw(field, rows.len(), n, data)?;
        Ok(Self::from_matrix(&matrix))
    }

    pub fn span(field: &FieldSpec, rows: &[Vec<FieldElement>]) -> Result<Self> {
        Ok(Self::from_matrix(&Matrix::from_rows(field, rows)?))
    }

    /// Row space of `m`.
    pub fn from_matrix(m: &Matrix) -> Self {
        let mut data = m.raw().to_vec();
        let pivots = rref_in_place(m.field(), &mut data, m.rows(), m.cols());
        data.truncate(pivots.len() * m.cols());
        let basis = Matrix::from_raw(m.field(), pivots.len(), m.cols(), data)
            .expect("truncated RREF keeps its shape");
        Subspace { basis, pivots }
    }

    pub fn field(&self) -> &FieldSpec {
        self.basis.field()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_rows(&self) -> impl Iterator<Item = &[Elem]> {
        (0..self.dim()).map(move |i| self.basis.row_raw(i))
    }

    /// Every vector of the subspace (`q^dim` of them), as raw index vectors.
    pub fn vectors(&self) -> Vec<Vec<Elem>> {
        let f = self.field();
        let n = self.ambient_dim();
        let mut out = vec![vec![0; n]];
        for row in self.basis_rows() {
            let mut next = Vec::with_capacity(out.len() * f.order() as usize);
            for v in &out {
                for c in 0..f.order() as Elem {
                    next.push(
                        v.iter()
                            .zip(row)
                            .map(|(&a, &b)| f.add_raw(a, f.mul_raw(c, b)))
                            .collect(),
                    );
                }
            }
            out = next;
        }
        out
    }

    /// Basis rows as lists of coefficient tuples `"c0,c1,…"`.
    pub fn to_rows(&self) -> Vec<Vec<String>> {
        let f = self.field();
        self.basis_rows()
            .map(|row| row.iter().map(|&x| f.from_raw(x).to_string()).collect())
            .collect()
    }
}

impl serde::Serialize for Subspace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

/// All `r`-element subsets of `0..n`, increasing, in lexicographic order.
pub fn pivot_patterns(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for c in start..n {
            if n - c < r - cur.len() {
                break;
            }
            cur.push(c);
            go(c + 1, n, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if r <= n {
        go(0, n, r, &mut Vec::new(), &mut out);
    }
    out
}

/// Positions `(row, col)` of the free entries of an RREF matrix with these pivots.
fn free_positions(n: usize, pivots: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, &c) in pivots.iter().enumerate() {
        for j in c + 1..n {
            if !pivots.contains(&j) {
                out.push((i, j));
            }
        }
    }
    out
}

/// `Σ_patterns q^{#free entries}`, the number of subspaces the enumeration visits.
pub fn subspace_count_by_patterns(q: u64, n: usize, r: usize) -> Integer {
    pivot_patterns(n, r)
        .iter()
        .map(|p| num_traits::pow(BigInt::from(q), free_positions(n, p).len()))
        .fold(BigInt::zero(), |a, b| a + b)
}

/// Every subspace whose RREF has exactly these pivot columns, free entries
/// filled in index order (last free entry varying fastest).
pub fn subspaces_with_pivots(
    field: &FieldSpec,
    n: usize,
    pivots: &[usize],
) -> impl Iterator<Item = Subspace> {
    let field = field.clone();
    let pivots = pivots.to_vec();
    let free = free_positions(n, &pivots);
    let q = field.order() as Elem;
    let r = pivots.len();
    let mut template = vec![0 as Elem; r * n];
    for (i, &c) in pivots.iter().enumerate() {
        template[i * n + c] = 1;
    }
    let mut counter = vec![0 as Elem; free.len()];
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let mut data = template.clone();
        for (&(i, j), &v) in free.iter().zip(&counter) {
            data[i * n + j] = v;
        }
        // odometer step
        done = true;
        for k in (0..counter.len()).rev() {
            counter[k] += 1;
            if counter[k] < q {
                done = false;
                break;
            }
            counter[k] = 0;
        }
        let basis = Matrix::from_raw(&field, r, n, data).expect("shape fixed");
        Some(Subspace {
            basis,
            pivots: pivots.clone(),
        })
    })
}

/// Every `r`-dimensional subspace of `F_q^n`, each exactly once.
pub fn enumerate_subspaces(
    field: &FieldSpec,
    n: usize,
    r: usize,
    limits: &Limits,
) -> Result<impl Iterator<Item = Subspace>> {
    if r > n {
        return Err(Error::bad(format!("subspace dimension {r} exceeds ambient {n}")));
    }
    let total = subspace_count_by_patterns(field.order() as u64, n, r);
    limits.check_search(&format!("Gr({r},{n})(F_{})", field.order()), &total)?;
    let field = field.clone();
    Ok(pivot_patterns(n, r)
        .into_iter()
        .flat_map(move |p| subspaces_with_pivots(&field, n, &p)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_field::make_field;
    use std::collections::HashSet;

    /// Distinct row spaces of rank `r` among all `r × n` matrices.
    fn count_by_all_matrices(f: &FieldSpec, n: usize, r: usize) -> usize {
        let q = f.order() as usize;
        let cells = r * n;
        let mut seen = HashSet::new();
        for code in 0..q.pow(cells as u32) {
            let mut c = code;
            let data: Vec<Elem> = (0..cells)
                .map(|_| {
                    let d = c % q;
                    c /= q;
                    d as Elem
                })
                .collect();
            let s = Subspace::from_matrix(&Matrix::from_raw(f, r, n, data).unwrap());
            if s.dim() == r {
                seen.insert(s);
            }
        }
        seen.len()
    }

    #[test]
    fn counts_small_grassmannians() {
        let lim = Limits::default();
        let f2 = make_field(2, 1).unwrap();
        assert_eq!(enumerate_subspaces(&f2, 2, 1, &lim).unwrap().count(), 3);
        assert_eq!(enumerate_subspaces(&f2, 4, 2, &lim).unwrap().count(), 35);
        assert_eq!(count_by_all_matrices(&f2, 4, 2), 35);
        let f3 = make_field(3, 1).unwrap();
        assert_eq!(enumerate_subspaces(&f3, 2, 1, &lim).unwrap().count(), 4);
        assert_eq!(enumerate_subspaces(&f3, 3, 0, &lim).unwrap().count(), 1);
        assert!(enumerate_subspaces(&f3, 2, 3, &lim).is_err());
    }

    #[test]
    fn enumeration_is_canonical_and_complete() {
        let lim = Limits::default();
        for (p, e) in [(2u64, 1u32), (3, 1), (2, 2), (5, 1)] {
            let f = make_field(p, e).unwrap();
            for n in 0..=4usize {
                for r in 0..=n {
                    if (f.order() as usize).pow((r * n) as u32) > 400_000 {
                        continue;
                    }
                    let all: Vec<Subspace> = enumerate_subspaces(&f, n, r, &lim).unwrap().collect();
                    let distinct: HashSet<_> = all.iter().cloned().collect();
                    assert_eq!(distinct.len(), all.len(), "duplicate in Gr({r},{n})(F_{})", f.order());
                    assert_eq!(all.len(), count_by_all_matrices(&f, n, r));
                    // every yielded basis is already in RREF
                    for s in &all {
                        assert_eq!(&Subspace::from_matrix(s.basis()), s);
                    }
                }
            }
        }
    }

    #[test]
    fn search_limit_refuses() {
        let f = make_field(5, 1).unwrap();
        let tiny = Limits::default().with_max_search(100);
        assert!(matches!(
            enumerate_subspaces(&f, 4, 2, &tiny),
            Err(Error::FieldTooLarge { .. })
        ));
    }

    #[test]
    fn vectors_and_serialization() {
        let f4 = make_field(2, 2).unwrap();
        let w = f4.generator();
        let s = Subspace::span(&f4, &[vec![f4.one(), w.clone()]]).unwrap();
        assert_eq!(s.vectors().len(), 4);
        assert_eq!(s.to_rows(), vec![vec!["1,0".to_string(), "0,1".to_string()]]);
        assert_eq!(serde_json::to_string(&s).unwrap(), r#"[["1,0","0,1"]]"#);
        // scaling the spanning vector gives the same subspace
        let t = Subspace::span(&f4, &[vec![w.clone(), w.mul(&w).unwrap()]]).unwrap();
        assert_eq!(s, t);
    }
}
