use super::matrix::Matrix;
use super::subspace::Subspace;
use crate::error::{Error, Result};
use crate::finite_field::{Elem, FieldElement, FieldSpec};

/// Which form a [`Pairing`] evaluates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PairingKind {
    /// `Σ_{i≤n} x_i y_{n+i} − x_{n+i} y_i`.
    SymplecticStandard,
    /// `xᵀ G y` for an invertible alternating `G`.
    SymplecticGram(Matrix),
    /// `Σ x_i ȳ_i` over `F_{q²}`, `ȳ = y^q`.
    HermitianStandard,
    /// `xᵀ G ȳ` for an invertible `G` with `conj(Gᵀ) = G`.
    HermitianGram(Matrix),
    /// `Σ x_i y_i^p` over `F_{p²}`: linear in `x`, `p`-semilinear in `y`.
    TwistedSemilinear,
}

/// A bi-additive form on `F^{2n}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pairing {
    field: FieldSpec,
    dim: usize,
    kind: PairingKind,
}

impl Pairing {
    pub fn symplectic_standard(field: &FieldSpec, n: usize) -> Self {
        Pairing {
            field: field.clone(),
            dim: 2 * n,
            kind: PairingKind::SymplecticStandard,
        }
    }

    pub fn symplectic_gram(gram: Matrix) -> Result<Self> {
        if gram.rows() % 2 != 0 || !gram.is_alternating() || !gram.is_invertible() {
            return Err(Error::bad(
                "symplectic Gram matrix must be even-sized, alternating and invertible",
            ));
        }
        Ok(Pairing {
            field: gram.field().clone(),
            dim: gram.rows(),
            kind: PairingKind::SymplecticGram(gram),
        })
    }

    pub fn hermitian_standard(field: &FieldSpec, n: usize) -> Result<Self> {
        require_quadratic(field)?;
        Ok(Pairing {
            field: field.clone(),
            dim: 2 * n,
            kind: PairingKind::HermitianStandard,
        })
    }

    pub fn hermitian_gram(gram: Matrix) -> Result<Self> {
        require_quadratic(gram.field())?;
        if gram.rows() % 2 != 0 || gram.conj()?.transpose() != gram || !gram.is_invertible() {
            return Err(Error::bad(
                "hermitian Gram matrix must be even-sized, invertible and satisfy conj(G^T) = G",
            ));
        }
        Ok(Pairing {
            field: gram.field().clone(),
            dim: gram.rows(),
            kind: PairingKind::HermitianGram(gram),
        })
    }

    /// The hermitian form with Gram matrix `[[0, I], [I, 0]]`.
    pub fn hermitian_j(field: &FieldSpec, n: usize) -> Result<Self> {
        Self::hermitian_gram(Matrix::antidiagonal_j(field, n))
    }

    /// `Σ a_i b_i^p` on `F_{p²}^{2n}`; `field` must have degree 2.
    pub fn twisted(field: &FieldSpec, n: usize) -> Result<Self> {
        if field.degree() != 2 {
            return Err(Error::NotQuadraticExtension {
                order: field.order() as u64,
                degree: field.degree(),
            });
        }
        Ok(Pairing {
            field: field.clone(),
            dim: 2 * n,
            kind: PairingKind::TwistedSemilinear,
        })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    /// Ambient dimension `2n`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &PairingKind {
        &self.kind
    }

    /// Form value on raw vectors of length [`Pairing::dim`].
    pub fn eval_raw(&self, x: &[Elem], y: &[Elem]) -> Elem {
        let f = &self.field;
        match &self.kind {
            PairingKind::SymplecticStandard => {
                let n = self.dim / 2;
                (0..n).fold(0, |acc, i| {
                    let t = f.sub_raw(f.mul_raw(x[i], y[n + i]), f.mul_raw(x[n + i], y[i]));
                    f.add_raw(acc, t)
                })
            }
            PairingKind::SymplecticGram(g) => gram_eval(f, g, x, y, |v| v),
            PairingKind::HermitianStandard => x
                .iter()
                .zip(y)
                .fold(0, |acc, (&a, &b)| f.add_raw(acc, f.mul_raw(a, f.conj_raw(b)))),
            PairingKind::HermitianGram(g) => gram_eval(f, g, x, y, |v| f.conj_raw(v)),
            PairingKind::TwistedSemilinear => x
                .iter()
                .zip(y)
                .fold(0, |acc, (&a, &b)| f.add_raw(acc, f.mul_raw(a, f.frob_raw(b)))),
        }
    }

    pub fn eval(&self, x: &[FieldElement], y: &[FieldElement]) -> Result<FieldElement> {
        let xr = self.lower(x)?;
        let yr = self.lower(y)?;
        Ok(self.field.from_raw(self.eval_raw(&xr, &yr)))
    }

    fn lower(&self, v: &[FieldElement]) -> Result<Vec<Elem>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: v.len(),
            });
        }
        v.iter()
            .map(|x| {
                if x.field() == &self.field {
                    Ok(x.index())
                } else {
                    Err(Error::MixedFields {
                        left: format!("{:?}", self.field),
                        right: format!("{:?}", x.field()),
                    })
                }
            })
            .collect()
    }

    fn check_subspace(&self, s: &Subspace) -> Result<()> {
        if s.ambient_dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: s.ambient_dim(),
            });
        }
        if s.field() != &self.field {
            return Err(Error::MixedFields {
                left: format!("{:?}", self.field),
                right: format!("{:?}", s.field()),
            });
        }
        Ok(())
    }

    /// Vanishing on all ordered pairs of basis rows.
    ///
    /// For bilinear and sesquilinear kinds this is the usual criterion. For the
    /// twisted kind, `⟨Σλ_i v_i, Σμ_j v_j⟩′ = Σ λ_i μ_j^p ⟨v_i, v_j⟩′`, so basis
    /// pairs also suffice; [`Pairing::is_isotropic_exhaustive`] cross-checks this.
    pub fn is_isotropic(&self, s: &Subspace) -> Result<bool> {
        self.check_subspace(s)?;
        Ok(self.basis_pairs_vanish(s))
    }

    pub(crate) fn basis_pairs_vanish(&self, s: &Subspace) -> bool {
        let rows: Vec<&[Elem]> = s.basis_rows().collect();
        rows.iter()
            .all(|a| rows.iter().all(|b| self.eval_raw(a, b) == 0))
    }

    /// Vanishing on every ordered pair of vectors of `s` (`q^{2·dim}` evaluations).
    pub fn is_isotropic_exhaustive(&self, s: &Subspace) -> Result<bool> {
        self.check_subspace(s)?;
        Ok(self.all_pairs_vanish(s))
    }

    pub(crate) fn all_pairs_vanish(&self, s: &Subspace) -> bool {
        let vs = s.vectors();
        vs.iter().all(|a| vs.iter().all(|b| self.eval_raw(a, b) == 0))
    }
}

fn gram_eval(f: &FieldSpec, g: &Matrix, x: &[Elem], y: &[Elem], tw: impl Fn(Elem) -> Elem) -> Elem {
    let n = g.rows();
    let mut acc = 0;
    for i in 0..n {
        if x[i] == 0 {
            continue;
        }
        let mut row = 0;
        for j in 0..n {
            row = f.add_raw(row, f.mul_raw(g.raw_at(i, j), tw(y[j])));
        }
        acc = f.add_raw(acc, f.mul_raw(x[i], row));
    }
    acc
}

fn require_quadratic(field: &FieldSpec) -> Result<()> {
    if field.conj_base_order().is_none() {
        Err(Error::NotQuadraticExtension {
            order: field.order() as u64,
            degree: field.degree(),
        })
    } else {
        Ok(())
    }
}

pub fn pairing_eval(p: &Pairing, x: &[FieldElement], y: &[FieldElement]) -> Result<FieldElement> {
    p.eval(x, y)
}

pub fn is_isotropic(p: &Pairing, s: &Subspace) -> Result<bool> {
    p.is_isotropic(s)
}
