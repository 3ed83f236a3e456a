use serde::Serialize;

use crate::error::{Error, Result};
use crate::spaces::gcd;

/// `diag(z^{q_1}, ..., z^{q_5}) \ SU(5) / diag(z^q, A)^{-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BazaikinParams {
    pub q: [i64; 5],
}

/// Pairs of disjoint index pairs `({a,b}, {c,d})` of `0..5`.
fn disjoint_pairs() -> impl Iterator<Item = ((usize, usize), (usize, usize))> {
    let pairs: Vec<(usize, usize)> = (0..5).flat_map(|a| (a + 1..5).map(move |b| (a, b))).collect();
    let mut out = Vec::new();
    for (i, &(a, b)) in pairs.iter().enumerate() {
        for &(c, d) in &pairs[i + 1..] {
            if a != c && a != d && b != c && b != d {
                out.push(((a, b), (c, d)));
            }
        }
    }
    out.into_iter()
}

/// All `q_i` odd and `gcd(q_a + q_b, q_c + q_d) = 2` for disjoint pairs.
pub fn baz_is_free(p: &BazaikinParams) -> bool {
    let q = &p.q;
    q.iter().all(|x| x.rem_euclid(2) == 1)
        && disjoint_pairs().all(|((a, b), (c, d))| gcd(q[a] + q[b], q[c] + q[d]) == 2)
}

/// All pair sums `q_i + q_j` share a strict sign.
pub fn baz_is_positive(p: &BazaikinParams) -> bool {
    let sums: Vec<i64> = (0..5).flat_map(|i| (i + 1..5).map(move |j| p.q[i] + p.q[j])).collect();
    sums.iter().all(|s| *s > 0) || sums.iter().all(|s| *s < 0)
}

/// `r = (sigma_3 - sigma_1 sigma_2) / 8`, the signed order of `H^6`.
pub fn baz_order_h6(p: &BazaikinParams) -> Result<i64> {
    let q = &p.q;
    let s1: i64 = q.iter().sum();
    let mut s2 = 0;
    let mut s3 = 0;
    for i in 0..5 {
        for j in i + 1..5 {
            s2 += q[i] * q[j];
            for k in j + 1..5 {
                s3 += q[i] * q[j] * q[k];
            }
        }
    }
    let raw = s3 - s1 * s2;
    if raw % 8 != 0 {
        return Err(Error::Divisibility { raw });
    }
    Ok(raw / 8)
}

/// `|r^2 - s^2| / 8` for `r = s = 1 mod 4`.
pub fn ps_bundle_order(r: i64, s: i64) -> Result<u64> {
    if r.rem_euclid(4) != 1 || s.rem_euclid(4) != 1 {
        return Err(Error::Congruence { r, s });
    }
    Ok((r * r - s * s).unsigned_abs() / 8)
}
