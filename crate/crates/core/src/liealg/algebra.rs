use std::fmt;

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{Error, Result};

use super::orthonormalize;

/// Complex square matrix in the defining representation.
pub type CMatrix = DMatrix<Complex<f64>>;
/// Real coefficients over a Q-orthonormal basis.
pub type Coeffs = DVector<f64>;

const ORTHO_TOL: f64 = 1e-12;
const EXPANSION_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Su,
    So,
    Sp,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Su => "su",
            Family::So => "so",
            Family::Sp => "sp",
        })
    }
}

/// One simple summand `family(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Factor {
    pub family: Family,
    pub n: usize,
}

impl Factor {
    /// Size of the defining representation.
    pub fn rep_size(&self) -> usize {
        match self.family {
            Family::Sp => 2 * self.n,
            _ => self.n,
        }
    }

    pub fn dim(&self) -> usize {
        let n = self.n;
        match self.family {
            Family::Su => n * n - 1,
            Family::So => n * (n - 1) / 2,
            Family::Sp => n * (2 * n + 1),
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match self.family {
            Family::Su | Family::So => self.n >= 2,
            Family::Sp => self.n >= 1,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::UnsupportedAlgebra {
                family: self.family.to_string(),
                n: self.n,
            })
        }
    }
}

/// `Q(A, B) = -1/2 Re tr(AB)`.
pub fn q_form(a: &CMatrix, b: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            acc += (a[(i, j)] * b[(j, i)]).re;
        }
    }
    -0.5 * acc
}

/// A compact matrix Lie algebra with a Q-orthonormal basis and its
/// structure constants `[e_i, e_j] = sum_k c[i][j][k] e_k`.
///
/// Direct sums are realized block-diagonally.
#[derive(Clone)]
pub struct LieAlgebraBasis {
    factors: Vec<Factor>,
    size: usize,
    basis: Vec<CMatrix>,
    structure: Vec<f64>,
    // (i, j, k, c) with i < j and c != 0
    terms: Vec<(usize, usize, usize, f64)>,
}

impl fmt::Debug for LieAlgebraBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LieAlgebraBasis({}, dim {})", self.name(), self.dim())
    }
}

impl LieAlgebraBasis {
    /// Build `family(n)`.
    pub fn build(family: Family, n: usize) -> Result<Self> {
        Self::direct_sum(&[Factor { family, n }])
    }

    /// Block-diagonal direct sum of simple factors.
    pub fn direct_sum(factors: &[Factor]) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::UnsupportedAlgebra {
                family: "empty".into(),
                n: 0,
            });
        }
        for f in factors {
            f.validate()?;
        }
        let size: usize = factors.iter().map(Factor::rep_size).sum();
        let mut basis = Vec::new();
        let mut offset = 0;
        for f in factors {
            for block in factor_basis(f) {
                let mut m = CMatrix::zeros(size, size);
                m.view_mut((offset, offset), (block.nrows(), block.ncols()))
                    .copy_from(&block);
                basis.push(m);
            }
            offset += f.rep_size();
        }
        let mut alg = LieAlgebraBasis {
            factors: factors.to_vec(),
            size,
            basis,
            structure: Vec::new(),
            terms: Vec::new(),
        };
        alg.compute_structure()?;
        Ok(alg)
    }

    fn compute_structure(&mut self) -> Result<()> {
        let d = self.basis.len();
        let mut c = vec![0.0; d * d * d];
        let mut terms = Vec::new();
        for i in 0..d {
            for j in (i + 1)..d {
                let comm = commutator(&self.basis[i], &self.basis[j]);
                let mut recon = CMatrix::zeros(self.size, self.size);
                for k in 0..d {
                    let v = q_form(&comm, &self.basis[k]);
                    let v = if v.abs() < 1e-14 { 0.0 } else { v };
                    c[(i * d + j) * d + k] = v;
                    c[(j * d + i) * d + k] = -v;
                    if v != 0.0 {
                        terms.push((i, j, k, v));
                        recon += &self.basis[k] * Complex::new(v, 0.0);
                    }
                }
                let residual = (comm - recon).norm();
                if residual > EXPANSION_TOL {
                    return Err(Error::NotClosed { residual });
                }
            }
        }
        self.structure = c;
        self.terms = terms;
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    /// The family when the algebra is simple.
    pub fn family(&self) -> Option<Family> {
        match self.factors.as_slice() {
            [f] => Some(f.family),
            _ => None,
        }
    }

    /// Defining-rep size `n` for a simple algebra.
    pub fn n(&self) -> Option<usize> {
        match self.factors.as_slice() {
            [f] => Some(f.n),
            _ => None,
        }
    }

    pub fn name(&self) -> String {
        self.factors
            .iter()
            .map(|f| format!("{}({})", f.family, f.n))
            .collect::<Vec<_>>()
            .join("+")
    }

    /// Size of the (block-diagonal) matrix representation.
    pub fn matrix_size(&self) -> usize {
        self.size
    }

    pub fn basis(&self) -> &[CMatrix] {
        &self.basis
    }

    /// `c[i][j][k]`.
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> f64 {
        let d = self.dim();
        self.structure[(i * d + j) * d + k]
    }

    fn check_len(&self, v: &Coeffs) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: v.len(),
            });
        }
        Ok(())
    }

    /// Bracket of coefficient vectors.
    pub fn bracket(&self, x: &Coeffs, y: &Coeffs) -> Result<Coeffs> {
        self.check_len(x)?;
        self.check_len(y)?;
        Ok(self.br(x, y))
    }

    /// Unchecked bracket for inner loops.
    pub fn br(&self, x: &Coeffs, y: &Coeffs) -> Coeffs {
        let mut out = Coeffs::zeros(self.dim());
        for &(i, j, k, c) in &self.terms {
            out[k] += c * (x[i] * y[j] - x[j] * y[i]);
        }
        out
    }

    /// Matrix of `ad_x` in the coefficient basis.
    pub fn ad_matrix(&self, x: &Coeffs) -> DMatrix<f64> {
        let d = self.dim();
        let mut m = DMatrix::zeros(d, d);
        for &(i, j, k, c) in &self.terms {
            // [x, e_j] picks x_i c_ijk, [x, e_i] picks -x_j c_ijk
            m[(k, j)] += c * x[i];
            m[(k, i)] -= c * x[j];
        }
        m
    }

    /// The matrix `sum_i x_i e_i`.
    pub fn to_matrix(&self, x: &Coeffs) -> CMatrix {
        let mut m = CMatrix::zeros(self.size, self.size);
        for (xi, e) in x.iter().zip(&self.basis) {
            if *xi != 0.0 {
                m += e * Complex::new(*xi, 0.0);
            }
        }
        m
    }

    /// Expand a matrix in the basis; returns coefficients and the Frobenius
    /// residual of the expansion.
    pub fn expand(&self, m: &CMatrix) -> (Coeffs, f64) {
        let x = Coeffs::from_iterator(self.dim(), self.basis.iter().map(|e| q_form(m, e)));
        let residual = (m - self.to_matrix(&x)).norm();
        (x, residual)
    }

    /// Expand a matrix that must lie in the algebra.
    pub fn from_matrix(&self, m: &CMatrix) -> Result<Coeffs> {
        if m.nrows() != self.size || m.ncols() != self.size {
            return Err(Error::DimensionMismatch {
                expected: self.size,
                got: m.nrows(),
            });
        }
        let (x, residual) = self.expand(m);
        if residual > EXPANSION_TOL * (1.0 + m.norm()) {
            return Err(Error::NotClosed { residual });
        }
        Ok(x)
    }

    /// Offsets of each factor's block in the matrix representation and in
    /// the coefficient basis: `(matrix_offset, coeff_offset)`.
    pub fn factor_offsets(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.factors.len());
        let (mut mo, mut co) = (0, 0);
        for f in &self.factors {
            out.push((mo, co));
            mo += f.rep_size();
            co += f.dim();
        }
        out
    }

    /// Standard symplectic form `[[0, I], [-I, 0]]` of size `2n`.
    pub fn symplectic_form(n: usize) -> CMatrix {
        let mut j = CMatrix::zeros(2 * n, 2 * n);
        for a in 0..n {
            j[(a, n + a)] = Complex::new(1.0, 0.0);
            j[(n + a, a)] = Complex::new(-1.0, 0.0);
        }
        j
    }
}

pub(crate) fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

fn unit(n: usize, a: usize, b: usize, v: Complex<f64>) -> CMatrix {
    let mut m = CMatrix::zeros(n, n);
    m[(a, b)] = v;
    m
}

/// Orthonormal basis of su(n): Cartan part first, then for each `a < b` the
/// real and imaginary off-diagonal generators.
fn su_basis(n: usize) -> Vec<CMatrix> {
    let i = Complex::new(0.0, 1.0);
    let one = Complex::new(1.0, 0.0);
    let mut out = Vec::new();
    for j in 1..n {
        // i diag(1, ..., 1, -j, 0, ...) normalized
        let mut m = CMatrix::zeros(n, n);
        for a in 0..j {
            m[(a, a)] = i;
        }
        m[(j, j)] = i * (-(j as f64));
        let q = q_form(&m, &m);
        out.push(m / Complex::new(q.sqrt(), 0.0));
    }
    for a in 0..n {
        for b in (a + 1)..n {
            out.push(unit(n, a, b, one) - unit(n, b, a, one));
            out.push(unit(n, a, b, i) + unit(n, b, a, i));
        }
    }
    out
}

fn so_basis(n: usize) -> Vec<CMatrix> {
    let one = Complex::new(1.0, 0.0);
    let mut out = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            out.push(unit(n, a, b, one) - unit(n, b, a, one));
        }
    }
    out
}

/// sp(n) inside su(2n) as the fixed set of `X -> J conj(X) J^{-1}`.
fn sp_basis(n: usize) -> Vec<CMatrix> {
    let size = 2 * n;
    let j = LieAlgebraBasis::symplectic_form(n);
    let j_inv = -&j;
    let su = su_basis(size);
    let projected: Vec<CMatrix> = su
        .iter()
        .map(|x| (x + &j * x.map(|z| z.conj()) * &j_inv) * Complex::new(0.5, 0.0))
        .collect();
    orthonormalize_matrices(&projected, &su)
}

/// Gram-Schmidt on matrices through their coordinates in a Q-orthonormal
/// reference basis.
fn orthonormalize_matrices(ms: &[CMatrix], reference: &[CMatrix]) -> Vec<CMatrix> {
    let d = reference.len();
    let coords: Vec<Coeffs> = ms
        .iter()
        .map(|m| Coeffs::from_iterator(d, reference.iter().map(|e| q_form(m, e))))
        .collect();
    orthonormalize(&coords, ORTHO_TOL)
        .into_iter()
        .map(|c| {
            let mut m = CMatrix::zeros(reference[0].nrows(), reference[0].ncols());
            for (ci, e) in c.iter().zip(reference) {
                m += e * Complex::new(*ci, 0.0);
            }
            m
        })
        .collect()
}

fn factor_basis(f: &Factor) -> Vec<CMatrix> {
    match f.family {
        Family::Su => su_basis(f.n),
        Family::So => so_basis(f.n),
        Family::Sp => sp_basis(f.n),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gram_defect(alg: &LieAlgebraBasis) -> f64 {
        let mut worst: f64 = 0.0;
        for (a, ea) in alg.basis().iter().enumerate() {
            for (b, eb) in alg.basis().iter().enumerate() {
                let expect = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((q_form(ea, eb) - expect).abs());
            }
        }
        worst
    }

    #[test]
    fn dimensions() {
        assert_eq!(LieAlgebraBasis::build(Family::Su, 2).unwrap().dim(), 3);
        assert_eq!(LieAlgebraBasis::build(Family::Su, 3).unwrap().dim(), 8);
        assert_eq!(LieAlgebraBasis::build(Family::So, 5).unwrap().dim(), 10);
        assert_eq!(LieAlgebraBasis::build(Family::Sp, 1).unwrap().dim(), 3);
        assert_eq!(LieAlgebraBasis::build(Family::Sp, 2).unwrap().dim(), 10);
    }

    #[test]
    fn unsupported_sizes() {
        assert!(LieAlgebraBasis::build(Family::Su, 1).is_err());
        assert!(LieAlgebraBasis::build(Family::So, 1).is_err());
        assert!(LieAlgebraBasis::build(Family::Sp, 0).is_err());
    }

    #[test]
    fn su3_gram_is_identity() {
        let alg = LieAlgebraBasis::build(Family::Su, 3).unwrap();
        assert!(gram_defect(&alg) < 1e-12);
    }

    #[test]
    fn defining_relations_hold() {
        for (fam, n) in [(Family::Su, 3), (Family::So, 4), (Family::Sp, 2)] {
            let alg = LieAlgebraBasis::build(fam, n).unwrap();
            assert!(gram_defect(&alg) < 1e-12, "{fam}({n})");
            for e in alg.basis() {
                // skew-Hermitian
                assert!((e + e.adjoint()).norm() < 1e-12);
                let tr: Complex<f64> = e.trace();
                assert!(tr.norm() < 1e-12);
                match fam {
                    Family::So => assert!(e.iter().all(|z| z.im == 0.0)),
                    Family::Sp => {
                        let j = LieAlgebraBasis::symplectic_form(n);
                        let lhs = e * &j;
                        let rhs = &j * e.map(|z| z.conj());
                        assert!((lhs - rhs).norm() < 1e-12);
                    }
                    Family::Su => {}
                }
            }
        }
    }

    #[test]
    fn su2_brackets_match_hand_computation() {
        // E1 = diag(i,-i), E2 = [[0,1],[-1,0]], E3 = [[0,i],[i,0]] are already
        // Q-orthonormal and are the basis in this order.
        let alg = LieAlgebraBasis::build(Family::Su, 2).unwrap();
        let e = |k: usize| Coeffs::from_fn(3, |i, _| if i == k { 1.0 } else { 0.0 });
        let close = |a: Coeffs, b: Coeffs| (a - b).norm() < 1e-12;
        assert!(close(alg.bracket(&e(0), &e(1)).unwrap(), e(2) * 2.0));
        assert!(close(alg.bracket(&e(1), &e(2)).unwrap(), e(0) * 2.0));
        assert!(close(alg.bracket(&e(2), &e(0)).unwrap(), e(1) * 2.0));
        let i = Complex::new(0.0, 1.0);
        assert!((alg.basis()[0][(0, 0)] - i).norm() < 1e-15);
        assert!((alg.basis()[1][(0, 1)] - Complex::new(1.0, 0.0)).norm() < 1e-15);
        assert!((alg.basis()[2][(1, 0)] - i).norm() < 1e-15);
    }

    #[test]
    fn self_bracket_and_torus_vanish() {
        let alg = LieAlgebraBasis::build(Family::Su, 3).unwrap();
        let x = Coeffs::from_fn(8, |i, _| (i as f64 + 1.0).sin());
        assert!(alg.bracket(&x, &x).unwrap().norm() < 1e-14);
        let h1 = Coeffs::from_fn(8, |i, _| if i == 0 { 1.0 } else { 0.0 });
        let h2 = Coeffs::from_fn(8, |i, _| if i == 1 { 1.0 } else { 0.0 });
        assert!(alg.bracket(&h1, &h2).unwrap().norm() < 1e-14);
    }

    #[test]
    fn bracket_matches_matrix_commutator() {
        let alg = LieAlgebraBasis::build(Family::Sp, 2).unwrap();
        let x = Coeffs::from_fn(10, |i, _| (0.3 * i as f64).cos());
        let y = Coeffs::from_fn(10, |i, _| (1.7 * i as f64 + 0.2).sin());
        let via_c = alg.br(&x, &y);
        let comm = commutator(&alg.to_matrix(&x), &alg.to_matrix(&y));
        let via_m = alg.from_matrix(&comm).unwrap();
        assert!((via_c - via_m).norm() < 1e-12);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let alg = LieAlgebraBasis::build(Family::Su, 2).unwrap();
        let err = alg.bracket(&Coeffs::zeros(3), &Coeffs::zeros(4)).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { expected: 3, got: 4 }));
    }

    #[test]
    fn ad_matrix_agrees_with_bracket() {
        let alg = LieAlgebraBasis::build(Family::So, 5).unwrap();
        let x = Coeffs::from_fn(10, |i, _| (i as f64).sqrt() - 1.0);
        let y = Coeffs::from_fn(10, |i, _| (2.0 * i as f64).sin());
        assert!((alg.ad_matrix(&x) * &y - alg.br(&x, &y)).norm() < 1e-13);
    }

    #[test]
    fn direct_sum_blocks() {
        let f = Factor {
            family: Family::Su,
            n: 2,
        };
        let alg = LieAlgebraBasis::direct_sum(&[f, f]).unwrap();
        assert_eq!(alg.dim(), 6);
        assert_eq!(alg.matrix_size(), 4);
        // factors commute
        for i in 0..3 {
            for j in 3..6 {
                for k in 0..6 {
                    assert_eq!(alg.structure_constant(i, j, k), 0.0);
                }
            }
        }
    }
}
