//! Compact matrix Lie algebras su(n), so(n), sp(n) with a fixed biinvariant
//! inner product `Q(X, Y) = -1/2 Re tr(XY)` in the defining representation.
//!
//! Elements are carried as real coefficient vectors over a Q-orthonormal
//! basis. Matrices only appear when building the basis, conjugating by a
//! group element, or exponentiating.

mod algebra;
mod group;
mod subalgebra;

pub use algebra::{q_form, CMatrix, Coeffs, Factor, Family, LieAlgebraBasis};
pub(crate) use group::random_group_element_in_stream;
pub use group::{adjoint, matrix_exp, random_group_element, GroupElement};
pub use subalgebra::{named_subalgebra, Subalgebra, SubalgebraName};

/// Modified Gram-Schmidt with a second re-orthogonalization pass.
///
/// Vectors whose residual norm falls below `tol` are dropped, so the output
/// is an orthonormal basis of the span.
pub fn orthonormalize(vectors: &[Coeffs], tol: f64) -> Vec<Coeffs> {
    let mut out: Vec<Coeffs> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let mut w = v.clone();
        for _pass in 0..2 {
            for u in &out {
                let c = u.dot(&w);
                w.axpy(-c, u, 1.0);
            }
        }
        let n = w.norm();
        if n > tol {
            out.push(w / n);
        }
    }
    out
}
