//! Search for horizontal flat planes on Eschenburg spaces.
//!
//! For the metric `Q_t = t Q|u(2) + Q|m` with `u(2)` the block fixing slot
//! `j`, every flat plane at the identity contains either the central element
//! `D_j = i diag(..)` with `-2` at slot `j`, or a `U(2)`-conjugate of a
//! diagonal element with `-2` inside the block. A flat plane is horizontal
//! at `g` exactly when one of these candidates is `Q_t`-orthogonal to the
//! vertical vector there, so the sampler records the smallest such inner
//! product over random `g`.
//!
//! The vertical vector is taken in the right-translated form
//! `X_1 - Ad(g) X_2`, for which the obstruction intervals are the
//! `l`-interval against the `k` entries.

use nalgebra::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::liealg::{adjoint, q_form, CMatrix, Coeffs, Family, GroupElement, LieAlgebraBasis};
use crate::par::{self, Exec};
use crate::rng::streams;

use super::eschenburg::{esch_is_positive, EschenburgParams};

fn idiag(v: [f64; 3]) -> CMatrix {
    let mut m = CMatrix::zeros(3, 3);
    for (i, x) in v.iter().enumerate() {
        m[(i, i)] = Complex::new(0.0, *x);
    }
    m
}

fn to_f(v: [i64; 3]) -> [f64; 3] {
    v.map(|x| x as f64)
}

/// `Ad(g^{-1}) X_1 - X_2` with `X_1 = i diag(k)`, `X_2 = i diag(l)`.
pub fn esch_vertical_vector(alg: &LieAlgebraBasis, p: &EschenburgParams, g: &GroupElement) -> Result<Coeffs> {
    if alg.family() != Some(Family::Su) || alg.n() != Some(3) {
        return Err(Error::UnsupportedAlgebra {
            family: alg.name(),
            n: alg.dim(),
        });
    }
    // the common trace cancels in the difference; drop it so both lie in su(3)
    let mean = p.k.iter().sum::<i64>() as f64 / 3.0;
    let x1 = alg.from_matrix(&idiag(to_f(p.k).map(|v| v - mean)))?;
    let x2 = alg.from_matrix(&idiag(to_f(p.l).map(|v| v - mean)))?;
    Ok(adjoint(alg, &g.inverse(), &x1)? - x2)
}

/// Exact integer form of the obstruction: the central candidate of block `j`
/// pairs with `X_1` to `S - 3 k_j` and with the orbit of `X_2` over the
/// values `S - 3 l_i`.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct IntegerCheck {
    pub k_values: [i64; 3],
    pub l_values: [i64; 3],
    pub blocks: [bool; 3],
    pub positive: bool,
}

pub fn esch_integer_check(p: &EschenburgParams) -> IntegerCheck {
    let s: i64 = p.k.iter().sum();
    let k_values = p.k.map(|k| s - 3 * k);
    let l_values = p.l.map(|l| s - 3 * l);
    let (lo, hi) = (*l_values.iter().min().unwrap(), *l_values.iter().max().unwrap());
    let miss = |v: i64| v < lo || v > hi;
    let blocks = std::array::from_fn(|j| {
        let others: Vec<i64> = (0..3).filter(|&i| i != j).map(|i| k_values[i]).collect();
        let (a, b) = (others[0].min(others[1]), others[0].max(others[1]));
        miss(k_values[j]) && (b < lo || a > hi)
    });
    IntegerCheck {
        k_values,
        l_values,
        blocks,
        positive: blocks.iter().any(|b| *b),
    }
}

/// Outcome of [`esch_horizontal_flat_sampler`].
#[derive(Debug, Clone, Serialize)]
pub struct SamplerReport {
    pub params: EschenburgParams,
    pub t: f64,
    pub samples: usize,
    pub seed: u64,
    /// Smallest obstruction per block (slot fixed by the `U(2)`).
    pub block_margins: [f64; 3],
    /// Largest block margin; positive means no horizontal flat plane found.
    pub margin: f64,
    /// Block attaining `margin`.
    pub block: usize,
    pub integer_check: IntegerCheck,
    pub criterion_positive: bool,
}

/// Per-block obstruction for one vertical vector `w` (as a matrix).
fn block_obstruction(w: &CMatrix, j: usize, t: f64) -> f64 {
    let others: Vec<usize> = (0..3).filter(|&i| i != j).collect();
    let (a, b) = (others[0], others[1]);
    let mut d = [1.0; 3];
    d[j] = -2.0;
    let f1 = t * q_form(w, &idiag(d));

    // Ad(k) E with E = -2 at a, 1 at b and j: the central part stays put,
    // the su(2) part sweeps a sphere of Q-radius 3/2.
    let mut center = [1.0; 3];
    center[a] = -0.5;
    center[b] = -0.5;
    let c0 = q_form(w, &idiag(center));
    let mut h = CMatrix::zeros(3, 3);
    h[(a, a)] = Complex::new(0.0, 1.0);
    h[(b, b)] = Complex::new(0.0, -1.0);
    let mut r = CMatrix::zeros(3, 3);
    r[(a, b)] = Complex::new(1.0, 0.0);
    r[(b, a)] = Complex::new(-1.0, 0.0);
    let mut im = CMatrix::zeros(3, 3);
    im[(a, b)] = Complex::new(0.0, 1.0);
    im[(b, a)] = Complex::new(0.0, 1.0);
    let c = 1.5 * (q_form(w, &h).powi(2) + q_form(w, &r).powi(2) + q_form(w, &im).powi(2)).sqrt();
    let f2 = t * (c0.abs() - c).max(0.0);
    f1.abs().min(f2)
}

/// Sample `g` and record the smallest obstruction to a horizontal flat plane
/// for each of the three `U(2)` blocks.
pub fn esch_horizontal_flat_sampler(
    p: &EschenburgParams,
    t: f64,
    samples: usize,
    seed: u64,
    exec: Exec,
) -> Result<SamplerReport> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::InvalidParameter(format!("t = {t} must lie in (0, 1)")));
    }
    if samples == 0 {
        return Err(Error::EmptyBudget);
    }
    let alg = LieAlgebraBasis::build(Family::Su, 3)?;
    let x1 = idiag(to_f(p.k));
    let x2 = idiag(to_f(p.l));
    let per_sample: Vec<[f64; 3]> = par::map_indices(exec, samples, |i| {
        let g = crate::liealg::random_group_element_in_stream(&alg, seed, streams::SAMPLER, i as u64);
        let gm = g.matrix();
        let w = &x1 - gm * &x2 * gm.adjoint();
        std::array::from_fn(|j| block_obstruction(&w, j, t))
    });
    let mut block_margins = [f64::INFINITY; 3];
    for s in &per_sample {
        for j in 0..3 {
            block_margins[j] = block_margins[j].min(s[j]);
        }
    }
    let mut block = 0;
    for j in 1..3 {
        if block_margins[j] > block_margins[block] {
            block = j;
        }
    }
    Ok(SamplerReport {
        params: *p,
        t,
        samples,
        seed,
        block_margins,
        margin: block_margins[block],
        block,
        integer_check: esch_integer_check(p),
        criterion_positive: esch_is_positive(p),
    })
}
