//! Linear algebra over finite fields: matrices in reduced row-echelon form,
//! canonical subspaces and their enumeration, and the bi-additive pairings
//! (symplectic, hermitian and the `p`-semilinear twisted form) with isotropy
//! tests.

mod matrix;
mod pairing;
mod subspace;

pub use matrix::{rref, Matrix};
pub use pairing::{is_isotropic, pairing_eval, Pairing, PairingKind};
pub use subspace::{
    enumerate_subspaces, pivot_patterns, subspace_count_by_patterns, subspaces_with_pivots,
    Subspace,
};

use crate::finite_field::{Elem, FieldSpec};

/// Rank of a row-major `rows × cols` buffer, which is reduced in place.
pub(crate) fn rank_raw(f: &FieldSpec, data: &mut [Elem], rows: usize, cols: usize) -> usize {
    matrix::rref_in_place(f, data, rows, cols).len()
}
