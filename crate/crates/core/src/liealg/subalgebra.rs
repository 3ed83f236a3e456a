use std::fmt;
use std::sync::Arc;

use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};

use super::algebra::{CMatrix, Coeffs, Family, LieAlgebraBasis};
use super::orthonormalize;

const CLOSURE_TOL: f64 = 1e-10;

/// A Lie subalgebra, stored as a Q-orthonormal frame in parent coordinates.
#[derive(Clone)]
pub struct Subalgebra {
    parent: Arc<LieAlgebraBasis>,
    frame: DMatrix<f64>,
    name: Option<String>,
}

impl fmt::Debug for Subalgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Subalgebra({} in {}, dim {})",
            self.name.as_deref().unwrap_or("unnamed"),
            self.parent.name(),
            self.dim()
        )
    }
}

impl Subalgebra {
    /// Span of `vectors`, which must close under the bracket.
    pub fn new(parent: Arc<LieAlgebraBasis>, vectors: &[Coeffs], name: Option<&str>) -> Result<Self> {
        for v in vectors {
            if v.len() != parent.dim() {
                return Err(Error::DimensionMismatch {
                    expected: parent.dim(),
                    got: v.len(),
                });
            }
        }
        let ortho = orthonormalize(vectors, 1e-12);
        let frame = frame_from(parent.dim(), &ortho);
        let sub = Subalgebra {
            parent,
            frame,
            name: name.map(str::to_owned),
        };
        let residual = sub.closure_residual();
        if residual > CLOSURE_TOL {
            return Err(Error::NotClosed { residual });
        }
        Ok(sub)
    }

    /// The zero subalgebra.
    pub fn zero(parent: Arc<LieAlgebraBasis>) -> Self {
        let d = parent.dim();
        Subalgebra {
            parent,
            frame: DMatrix::zeros(d, 0),
            name: Some("0".into()),
        }
    }

    /// The whole algebra.
    pub fn whole(parent: Arc<LieAlgebraBasis>) -> Self {
        let d = parent.dim();
        Subalgebra {
            parent,
            frame: DMatrix::identity(d, d),
            name: Some("g".into()),
        }
    }

    pub fn parent(&self) -> &Arc<LieAlgebraBasis> {
        &self.parent
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.frame.ncols()
    }

    /// Orthonormal frame, one column per basis vector.
    pub fn frame(&self) -> &DMatrix<f64> {
        &self.frame
    }

    pub fn vectors(&self) -> Vec<Coeffs> {
        self.frame.column_iter().map(|c| c.into_owned()).collect()
    }

    /// Split `x` into its component in the span and the Q-orthogonal rest.
    pub fn project(&self, x: &Coeffs) -> (Coeffs, Coeffs) {
        let coords = self.frame.tr_mul(x);
        let tangential = &self.frame * coords;
        let normal = x - &tangential;
        (tangential, normal)
    }

    /// Q-orthogonal projector onto the span as a `dim x dim` matrix.
    pub fn projector(&self) -> DMatrix<f64> {
        &self.frame * self.frame.transpose()
    }

    /// Largest normal component of a bracket of frame vectors.
    pub fn closure_residual(&self) -> f64 {
        let vs = self.vectors();
        let mut worst: f64 = 0.0;
        for (i, u) in vs.iter().enumerate() {
            for v in &vs[i + 1..] {
                let (_, n) = self.project(&self.parent.br(u, v));
                worst = worst.max(n.norm());
            }
        }
        worst
    }

    pub fn is_abelian(&self, tol: f64) -> bool {
        let vs = self.vectors();
        vs.iter()
            .enumerate()
            .all(|(i, u)| vs[i + 1..].iter().all(|v| self.parent.br(u, v).norm() < tol))
    }

    /// Whether every frame vector of `self` lies in `other`.
    pub fn is_contained_in(&self, other: &Subalgebra, tol: f64) -> bool {
        self.vectors().iter().all(|v| other.project(v).1.norm() < tol)
    }

    /// Orthonormal frame of the Q-orthogonal complement.
    pub fn complement_frame(&self) -> DMatrix<f64> {
        let d = self.parent.dim();
        let mut cands = Vec::with_capacity(d);
        for i in 0..d {
            let e = Coeffs::from_fn(d, |r, _| if r == i { 1.0 } else { 0.0 });
            cands.push(self.project(&e).1);
        }
        let ortho = orthonormalize(&cands, 1e-9);
        frame_from(d, &ortho)
    }

    /// Orthonormal frame of the complement of `inner` inside `self`.
    pub fn relative_complement_frame(&self, inner: &Subalgebra) -> DMatrix<f64> {
        let cands: Vec<Coeffs> = self.vectors().iter().map(|v| inner.project(v).1).collect();
        frame_from(self.parent.dim(), &orthonormalize(&cands, 1e-9))
    }
}

pub(crate) fn frame_from(dim: usize, vectors: &[Coeffs]) -> DMatrix<f64> {
    let mut frame = DMatrix::zeros(dim, vectors.len());
    for (j, v) in vectors.iter().enumerate() {
        frame.set_column(j, v);
    }
    frame
}

/// Subalgebras with a fixed construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubalgebraName {
    /// Diagonal maximal torus of su(n); the standard torus of so(n).
    Torus,
    /// u(2) inside su(3) acting on the two indices other than `slot`,
    /// together with the center `i diag(..)` carrying `-2` at `slot`.
    U2Block { slot: usize },
    /// su(2) on the upper-left 2x2 block of su(3).
    Su2Block,
    /// so(3) acting by conjugation on symmetric traceless 3x3 matrices,
    /// as a subalgebra of so(5).
    So3Irreducible,
    /// The circle `i diag(v)` in su(n); `v` must sum to zero.
    DiagCircle(Vec<i64>),
    /// The diagonal copy of a factor in a sum of two equal factors.
    Diagonal,
}

impl fmt::Display for SubalgebraName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubalgebraName::Torus => f.write_str("torus"),
            SubalgebraName::U2Block { slot } => write!(f, "u2_block_{slot}"),
            SubalgebraName::Su2Block => f.write_str("su2_block"),
            SubalgebraName::So3Irreducible => f.write_str("so3_irreducible"),
            SubalgebraName::DiagCircle(v) => {
                let parts: Vec<String> = v.iter().map(i64::to_string).collect();
                write!(f, "diag_circle({})", parts.join(","))
            }
            SubalgebraName::Diagonal => f.write_str("diagonal"),
        }
    }
}

fn simple(alg: &LieAlgebraBasis) -> Option<(Family, usize)> {
    Some((alg.family()?, alg.n()?))
}

fn diag_matrix(values: &[f64]) -> CMatrix {
    let n = values.len();
    let mut m = CMatrix::zeros(n, n);
    for (i, v) in values.iter().enumerate() {
        m[(i, i)] = Complex::new(0.0, *v);
    }
    m
}

fn su2_on(n: usize, a: usize, b: usize) -> Vec<CMatrix> {
    let i = Complex::new(0.0, 1.0);
    let one = Complex::new(1.0, 0.0);
    let mut h = CMatrix::zeros(n, n);
    h[(a, a)] = i;
    h[(b, b)] = -i;
    let mut re = CMatrix::zeros(n, n);
    re[(a, b)] = one;
    re[(b, a)] = -one;
    let mut im = CMatrix::zeros(n, n);
    im[(a, b)] = i;
    im[(b, a)] = i;
    vec![h, re, im]
}

/// Orthonormal basis of symmetric traceless 3x3 matrices under
/// `<S, T> = tr(ST)`: two diagonal, then (12), (13), (23).
pub fn symmetric_traceless_basis() -> [DMatrix<f64>; 5] {
    let s2 = 2f64.sqrt();
    let s6 = 6f64.sqrt();
    let sym = |a: usize, b: usize| {
        let mut m = DMatrix::zeros(3, 3);
        m[(a, b)] = 1.0 / s2;
        m[(b, a)] = 1.0 / s2;
        m
    };
    [
        DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0 / s2, -1.0 / s2, 0.0])),
        DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0 / s6, 1.0 / s6, -2.0 / s6])),
        sym(0, 1),
        sym(0, 2),
        sym(1, 2),
    ]
}

/// Build a named subalgebra of `alg`.
pub fn named_subalgebra(alg: &Arc<LieAlgebraBasis>, name: &SubalgebraName) -> Result<Subalgebra> {
    let unknown = || Error::UnknownSubalgebra(format!("{name} in {}", alg.name()));
    let label = name.to_string();
    let mats: Vec<CMatrix> = match name {
        SubalgebraName::Torus => match simple(alg).ok_or_else(unknown)? {
            (Family::Su, n) => (0..n - 1)
                .map(|j| {
                    let mut v = vec![0.0; n];
                    v[j] = 1.0;
                    v[j + 1] = -1.0;
                    diag_matrix(&v)
                })
                .collect(),
            (Family::So, n) => (0..n / 2)
                .map(|j| {
                    let mut m = CMatrix::zeros(n, n);
                    m[(2 * j, 2 * j + 1)] = Complex::new(1.0, 0.0);
                    m[(2 * j + 1, 2 * j)] = Complex::new(-1.0, 0.0);
                    m
                })
                .collect(),
            _ => return Err(unknown()),
        },
        SubalgebraName::U2Block { slot } => {
            if simple(alg) != Some((Family::Su, 3)) || *slot > 2 {
                return Err(unknown());
            }
            let others: Vec<usize> = (0..3).filter(|i| i != slot).collect();
            let mut center = vec![1.0; 3];
            center[*slot] = -2.0;
            let mut out = su2_on(3, others[0], others[1]);
            out.push(diag_matrix(&center));
            out
        }
        SubalgebraName::Su2Block => {
            if simple(alg) != Some((Family::Su, 3)) {
                return Err(unknown());
            }
            su2_on(3, 0, 1)
        }
        SubalgebraName::So3Irreducible => {
            if simple(alg) != Some((Family::So, 5)) {
                return Err(unknown());
            }
            let sym = symmetric_traceless_basis();
            let so3 = [(0usize, 1usize), (0, 2), (1, 2)];
            so3.iter()
                .map(|&(a, b)| {
                    let mut gen = DMatrix::<f64>::zeros(3, 3);
                    gen[(a, b)] = 1.0;
                    gen[(b, a)] = -1.0;
                    // matrix of S -> [A, S] on the orthonormal basis
                    let mut rho = CMatrix::zeros(5, 5);
                    for (c, sc) in sym.iter().enumerate() {
                        let image = &gen * sc - sc * &gen;
                        for (r, sr) in sym.iter().enumerate() {
                            rho[(r, c)] = Complex::new((sr * &image).trace(), 0.0);
                        }
                    }
                    rho
                })
                .collect()
        }
        SubalgebraName::DiagCircle(v) => {
            let (fam, n) = simple(alg).ok_or_else(unknown)?;
            if fam != Family::Su || v.len() != n {
                return Err(unknown());
            }
            if v.iter().sum::<i64>() != 0 || v.iter().all(|x| *x == 0) {
                return Err(Error::InvalidParameter(format!(
                    "diag_circle weights {v:?} must be nonzero and sum to zero"
                )));
            }
            let vals: Vec<f64> = v.iter().map(|x| *x as f64).collect();
            vec![diag_matrix(&vals)]
        }
        SubalgebraName::Diagonal => {
            let fs = alg.factors();
            if fs.len() != 2 || fs[0] != fs[1] {
                return Err(unknown());
            }
            let half = fs[0].dim();
            let s = std::f64::consts::FRAC_1_SQRT_2;
            let vecs: Vec<Coeffs> = (0..half)
                .map(|i| Coeffs::from_fn(alg.dim(), |r, _| if r == i || r == i + half { s } else { 0.0 }))
                .collect();
            return Subalgebra::new(alg.clone(), &vecs, Some(&label));
        }
    };
    let vecs = mats.iter().map(|m| alg.from_matrix(m)).collect::<Result<Vec<_>>>()?;
    Subalgebra::new(alg.clone(), &vecs, Some(&label))
}
