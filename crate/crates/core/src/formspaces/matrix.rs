use std::fmt;

use crate::error::{Error, Result};
use crate::finite_field::{Elem, FieldElement, FieldSpec};

/// Dense row-major matrix over a [`FieldSpec`].
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Matrix {
    pub fn zeros(field: &FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: &FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// `[[0, I_n], [I_n, 0]]`.
    pub fn antidiagonal_j(field: &FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, 2 * n, 2 * n);
        for i in 0..n {
            m.data[i * 2 * n + n + i] = 1;
            m.data[(n + i) * 2 * n + i] = 1;
        }
        m
    }

    /// `[[0, I_n], [−I_n, 0]]`, the Gram matrix of the standard symplectic form.
    pub fn symplectic_j(field: &FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, 2 * n, 2 * n);
        let minus_one = field.neg_raw(1);
        for i in 0..n {
            m.data[i * 2 * n + n + i] = 1;
            m.data[(n + i) * 2 * n + i] = minus_one;
        }
        m
    }

    pub fn from_raw(field: &FieldSpec, rows: usize, cols: usize, data: Vec<Elem>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        if let Some(&x) = data.iter().find(|&&x| x as u32 >= field.order()) {
            return Err(Error::bad(format!("{x} is not an element index of F_{}", field.order())));
        }
        Ok(Matrix {
            field: field.clone(),
            rows,
            cols,
            data,
        })
    }

    pub fn from_rows(field: &FieldSpec, rows: &[Vec<FieldElement>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            for x in row {
                if x.field() != field {
                    return Err(Error::MixedFields {
                        left: format!("{field:?}"),
                        right: format!("{:?}", x.field()),
                    });
                }
                data.push(x.index());
            }
        }
        Ok(Matrix {
            field: field.clone(),
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn raw(&self) -> &[Elem] {
        &self.data
    }

    pub fn row_raw(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn raw_at(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }

    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.field.from_raw(self.raw_at(i, j))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.raw_at(i, j);
            }
        }
        t
    }

    /// Entrywise `x ↦ x^{p^{e/2}}`.
    pub fn conj(&self) -> Result<Self> {
        if self.field.conj_base_order().is_none() {
            return Err(Error::NotQuadraticExtension {
                order: self.field.order() as u64,
                degree: self.field.degree(),
            });
        }
        let data = self.data.iter().map(|&x| self.field.conj_raw(x)).collect();
        Ok(Matrix { data, ..self.clone() })
    }

    pub fn mul(&self, rhs: &Matrix) -> Result<Self> {
        if self.field != rhs.field {
            return Err(Error::MixedFields {
                left: format!("{:?}", self.field),
                right: format!("{:?}", rhs.field),
            });
        }
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: rhs.rows,
            });
        }
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = 0;
                for k in 0..self.cols {
                    acc = f.add_raw(acc, f.mul_raw(self.raw_at(i, k), rhs.raw_at(k, j)));
                }
                out.data[i * rhs.cols + j] = acc;
            }
        }
        Ok(out)
    }

    pub fn rank(&self) -> usize {
        rref(self).1
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// Square with `Mᵀ = −M` and zero diagonal.
    pub fn is_alternating(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                self.raw_at(i, i) == 0
                    && (0..self.cols)
                        .all(|j| self.raw_at(i, j) == self.field.neg_raw(self.raw_at(j, i)))
            })
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}x{} over {:?}", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(" | "))?;
        }
        Ok(())
    }
}

/// Row-reduces `data` (row-major, `rows × cols`) in place and returns the pivot columns.
pub(crate) fn rref_in_place(f: &FieldSpec, data: &mut [Elem], rows: usize, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| data[i * cols + c] != 0) else {
            continue;
        };
        if pr != r {
            for j in 0..cols {
                data.swap(pr * cols + j, r * cols + j);
            }
        }
        let inv = f.inv_raw(data[r * cols + c]).expect("pivot is nonzero");
        for j in 0..cols {
            data[r * cols + j] = f.mul_raw(data[r * cols + j], inv);
        }
        for i in 0..rows {
            let factor = data[i * cols + c];
            if i == r || factor == 0 {
                continue;
            }
            for j in 0..cols {
                let sub = f.mul_raw(factor, data[r * cols + j]);
                data[i * cols + j] = f.sub_raw(data[i * cols + j], sub);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// The reduced row-echelon form of `m` and its rank.
pub fn rref(m: &Matrix) -> (Matrix, usize) {
    let mut out = m.clone();
    let pivots = rref_in_place(&m.field, &mut out.data, m.rows, m.cols);
    (out, pivots.len())
}
