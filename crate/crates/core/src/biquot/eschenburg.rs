use serde::Serialize;

use crate::error::{Error, Result};
use crate::spaces::gcd;

/// `diag(z^k) \ SU(3) / diag(z^l)^{-1}` with `sum k = sum l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct EschenburgParams {
    pub k: [i64; 3],
    pub l: [i64; 3],
}

impl EschenburgParams {
    pub fn new(k: [i64; 3], l: [i64; 3]) -> Result<Self> {
        let (ks, ls) = (k.iter().sum::<i64>(), l.iter().sum::<i64>());
        if ks != ls {
            return Err(Error::SumMismatch { k_sum: ks, l_sum: ls });
        }
        Ok(EschenburgParams { k, l })
    }

    /// Aloff-Wallach space `W_{p,q}`: `k = (p, q, -p-q)`, `l = 0`.
    pub fn aloff_wallach(p: i64, q: i64) -> Self {
        EschenburgParams {
            k: [p, q, -p - q],
            l: [0, 0, 0],
        }
    }

    pub fn l_range(&self) -> (i64, i64) {
        (*self.l.iter().min().unwrap(), *self.l.iter().max().unwrap())
    }
}

/// `gcd(k1 - l_i, k2 - l_j) = 1` for all `i != j`, with `gcd(0, 0) = 0`.
pub fn esch_is_free(p: &EschenburgParams) -> bool {
    (0..3).all(|i| {
        (0..3)
            .filter(|&j| j != i)
            .all(|j| gcd(p.k[0] - p.l[i], p.k[1] - p.l[j]) == 1)
    })
}

/// Every `k_i` lies outside `[min l, max l]`.
pub fn esch_is_positive(p: &EschenburgParams) -> bool {
    let (lo, hi) = p.l_range();
    p.k.iter().all(|k| *k < lo || *k > hi)
}

/// Per `U(2)` block (indexed by the fixed slot `j`): `k_j` lies outside the
/// l-interval and the interval spanned by the other two `k`s misses it.
/// The disjunction over blocks equals [`esch_is_positive`].
pub fn esch_block_conditions(p: &EschenburgParams) -> [bool; 3] {
    let (lo, hi) = p.l_range();
    let outside = |k: i64| k < lo || k > hi;
    std::array::from_fn(|j| {
        let others: Vec<i64> = (0..3).filter(|&i| i != j).map(|i| p.k[i]).collect();
        let (a, b) = (others[0].min(others[1]), others[0].max(others[1]));
        outside(p.k[j]) && (b < lo || a > hi)
    })
}

fn sigma2(v: &[i64; 3]) -> i64 {
    v[0] * v[1] + v[0] * v[2] + v[1] * v[2]
}

/// `r = sigma_2(k) - sigma_2(l)`, the signed order of `H^4`.
pub fn esch_order_h4(p: &EschenburgParams) -> i64 {
    sigma2(&p.k) - sigma2(&p.l)
}

/// `W_{p,q}` is positively curved iff `pq(p+q) != 0`.
pub fn aloff_wallach_positive(p: i64, q: i64) -> Result<bool> {
    if gcd(p, q) != 1 {
        return Err(Error::NotCoprime { p, q });
    }
    Ok(p * q * (p + q) != 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(k: [i64; 3], l: [i64; 3]) -> EschenburgParams {
        EschenburgParams::new(k, l).unwrap()
    }

    #[test]
    fn freeness_examples() {
        assert!(esch_is_free(&e([1, 1, -2], [0, 0, 0])));
        assert!(!esch_is_free(&e([2, 2, -4], [0, 0, 0])));
        assert!(esch_is_free(&e([79, 49, -50], [0, 46, 32])));
        assert!(esch_is_free(&e([75, 54, -51], [0, 46, 32])));
    }

    #[test]
    fn sum_mismatch() {
        assert!(matches!(
            EschenburgParams::new([1, 0, 0], [0, 0, 0]),
            Err(Error::SumMismatch { k_sum: 1, l_sum: 0 })
        ));
    }

    #[test]
    fn positivity_examples() {
        assert!(esch_is_positive(&e([1, 1, -2], [0, 0, 0])));
        assert!(!esch_is_positive(&e([1, 0, -1], [0, 0, 0])));
        // the cohomogeneity-one family: free, positive only with k and l exchanged
        for p in 1..6 {
            let ep = e([1, 1, p], [0, 0, p + 2]);
            assert!(esch_is_free(&ep));
            assert!(!esch_is_positive(&ep));
            assert!(esch_is_positive(&e(ep.l, ep.k)));
        }
        assert!(EschenburgParams::new([1, 1, 3], [1, 1, 5]).is_err());
    }

    #[test]
    fn blocks_disjunction_matches_criterion() {
        for a in -4..=4 {
            for b in -4..=4 {
                for c in -4..=4 {
                    for l1 in -2..=2 {
                        let l = [l1, 0, a + b + c - l1];
                        let p = e([a, b, c], l);
                        assert_eq!(
                            esch_block_conditions(&p).iter().any(|x| *x),
                            esch_is_positive(&p),
                            "{p:?}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn order_examples() {
        assert_eq!(esch_order_h4(&e([1, 1, -2], [0, 0, 0])), -3);
        let a = esch_order_h4(&e([79, 49, -50], [0, 46, 32]));
        let b = esch_order_h4(&e([75, 54, -51], [0, 46, 32]));
        assert_eq!(a, b);
        // Aloff-Wallach: r = -(p^2 + pq + q^2)
        for (p, q) in [(1, 1), (2, 3), (-5, 7)] {
            assert_eq!(
                esch_order_h4(&EschenburgParams::aloff_wallach(p, q)),
                -(p * p + p * q + q * q)
            );
        }
    }

    #[test]
    fn aloff_wallach_examples() {
        assert!(aloff_wallach_positive(1, 1).unwrap());
        assert!(!aloff_wallach_positive(1, 0).unwrap());
        assert!(!aloff_wallach_positive(1, -1).unwrap());
        assert!(aloff_wallach_positive(2, 4).is_err());
        for p in -6..=6i64 {
            for q in -6..=6i64 {
                if gcd(p, q) == 1 {
                    assert_eq!(
                        aloff_wallach_positive(p, q).unwrap(),
                        esch_is_positive(&EschenburgParams::aloff_wallach(p, q))
                    );
                }
            }
        }
    }
}
