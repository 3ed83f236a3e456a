use nalgebra::Complex;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::rng::{stream_rng, streams};

use super::algebra::{CMatrix, Coeffs, Family, LieAlgebraBasis};

const GROUP_TOL: f64 = 1e-10;

/// Number of exponential factors composed by [`random_group_element`].
pub const RANDOM_FACTORS: usize = 4;
/// Standard deviation of the algebra coefficients fed to each factor.
pub const RANDOM_SCALE: f64 = 2.0;

/// An element of the compact group in its defining representation.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    matrix: CMatrix,
}

impl GroupElement {
    /// Wrap `matrix` after checking the group condition of `alg`'s group.
    pub fn new(alg: &LieAlgebraBasis, matrix: CMatrix) -> Result<Self> {
        let defect = group_defect(alg, &matrix);
        if defect > GROUP_TOL {
            return Err(Error::NotInGroup { defect });
        }
        Ok(GroupElement { matrix })
    }

    pub fn identity(alg: &LieAlgebraBasis) -> Self {
        let n = alg.matrix_size();
        GroupElement {
            matrix: CMatrix::identity(n, n),
        }
    }

    /// `exp(X)` for an algebra element.
    pub fn exp(alg: &LieAlgebraBasis, x: &Coeffs) -> Self {
        GroupElement {
            matrix: matrix_exp(&alg.to_matrix(x)),
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn inverse(&self) -> Self {
        GroupElement {
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn mul(&self, other: &GroupElement) -> Self {
        GroupElement {
            matrix: &self.matrix * &other.matrix,
        }
    }

    /// Distance from the group condition; see [`GroupElement::new`].
    pub fn defect(&self, alg: &LieAlgebraBasis) -> f64 {
        group_defect(alg, &self.matrix)
    }
}

/// Matrix exponential by scaling and squaring with a Padé approximant.
pub fn matrix_exp(m: &CMatrix) -> CMatrix {
    m.clone().exp()
}

fn group_defect(alg: &LieAlgebraBasis, g: &CMatrix) -> f64 {
    let n = alg.matrix_size();
    if g.nrows() != n || g.ncols() != n {
        return f64::INFINITY;
    }
    let one = Complex::new(1.0, 0.0);
    let mut defect = (g.adjoint() * g - CMatrix::identity(n, n)).norm();
    for (f, (mo, _)) in alg.factors().iter().zip(alg.factor_offsets()) {
        let s = f.rep_size();
        // off-block entries must vanish
        for i in mo..mo + s {
            for j in 0..n {
                if j < mo || j >= mo + s {
                    defect = defect.max(g[(i, j)].norm());
                }
            }
        }
        let block = g.view((mo, mo), (s, s)).into_owned();
        match f.family {
            Family::Su => defect = defect.max((block.determinant() - one).norm()),
            Family::So => {
                defect = defect.max((block.determinant() - one).norm());
                let imag = block.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
                defect = defect.max(imag);
            }
            Family::Sp => {
                let j = LieAlgebraBasis::symplectic_form(f.n);
                defect = defect.max((block.transpose() * &j * &block - j).norm());
            }
        }
    }
    defect
}

/// Coefficients of `g X g^{-1}`.
pub fn adjoint(alg: &LieAlgebraBasis, g: &GroupElement, x: &Coeffs) -> Result<Coeffs> {
    let defect = g.defect(alg);
    if defect > GROUP_TOL {
        return Err(Error::NotInGroup { defect });
    }
    if x.len() != alg.dim() {
        return Err(Error::DimensionMismatch {
            expected: alg.dim(),
            got: x.len(),
        });
    }
    let m = g.matrix() * alg.to_matrix(x) * g.matrix().adjoint();
    alg.from_matrix(&m)
}

/// Deterministic pseudo-random group element: a product of
/// [`RANDOM_FACTORS`] exponentials of Gaussian algebra vectors.
///
/// The Gaussian is Ad-invariant, so the expected value of every factor is a
/// multiple of the identity that shrinks quickly with the scale; the product
/// spreads over the group well enough for the flat-plane sampler.
pub fn random_group_element(alg: &LieAlgebraBasis, seed: u64) -> GroupElement {
    random_group_element_in_stream(alg, seed, streams::GROUP, 0)
}

pub(crate) fn random_group_element_in_stream(
    alg: &LieAlgebraBasis,
    seed: u64,
    stream: u64,
    index: u64,
) -> GroupElement {
    let mut rng = stream_rng(seed, stream, index);
    let d = alg.dim();
    let mut g = GroupElement::identity(alg);
    for _ in 0..RANDOM_FACTORS {
        let x = Coeffs::from_fn(d, |_, _| {
            let z: f64 = StandardNormal.sample(&mut rng);
            RANDOM_SCALE * z
        });
        g = g.mul(&GroupElement::exp(alg, &x));
    }
    g
}
