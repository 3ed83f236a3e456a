use crate::error::{Error, Result};
use crate::spaces::gcd;

const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// Largest order a fixing `z` can need: the gcd of `k - l∘σ` over all `σ`,
/// with 2 standing in when `k` is a rearrangement of `l`.
pub fn required_order_bound(k: [i64; 3], l: [i64; 3]) -> u64 {
    PERMS
        .iter()
        .map(|s| {
            let g = gcd(gcd(k[0] - l[s[0]], k[1] - l[s[1]]), k[2] - l[s[2]]);
            if g == 0 {
                2
            } else {
                g.unsigned_abs()
            }
        })
        .max()
        .unwrap_or(2)
}

/// Freeness by direct search: the circle acts freely unless some `z != 1`
/// makes `(z^{k_i})` a rearrangement of `(z^{l_i})`. Roots of unity of
/// order `n` are compared through the exponents modulo `n`; `z` of infinite
/// order requires `k` to be a rearrangement of `l`.
pub fn brute_force_free_oracle(k: [i64; 3], l: [i64; 3], order_bound: u64) -> Result<bool> {
    let required = required_order_bound(k, l);
    if order_bound < required {
        return Err(Error::OrderBoundTooSmall {
            given: order_bound,
            required,
        });
    }
    let sorted = |v: [i64; 3]| {
        let mut v = v;
        v.sort_unstable();
        v
    };
    if sorted(k) == sorted(l) {
        return Ok(false);
    }
    for n in 2..=order_bound as i64 {
        if sorted(k.map(|x| x.rem_euclid(n))) == sorted(l.map(|x| x.rem_euclid(n))) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::biquot::{esch_is_free, EschenburgParams};

    #[test]
    fn examples() {
        assert!(brute_force_free_oracle([1, 1, -2], [0, 0, 0], 10).unwrap());
        assert!(!brute_force_free_oracle([2, 2, -4], [0, 0, 0], 10).unwrap());
        assert!(matches!(
            brute_force_free_oracle([2, 2, -4], [0, 0, 0], 1),
            Err(Error::OrderBoundTooSmall { required: 2, .. })
        ));
        assert!(matches!(
            brute_force_free_oracle([6, 6, -12], [0, 0, 0], 3),
            Err(Error::OrderBoundTooSmall { required: 6, .. })
        ));
    }

    #[test]
    fn agrees_on_small_box() {
        let r = -3..=3i64;
        for k1 in r.clone() {
            for k2 in r.clone() {
                for k3 in r.clone() {
                    for l1 in r.clone() {
                        for l2 in r.clone() {
                            let l3 = k1 + k2 + k3 - l1 - l2;
                            let p = EschenburgParams::new([k1, k2, k3], [l1, l2, l3]).unwrap();
                            let bound = required_order_bound(p.k, p.l);
                            assert_eq!(
                                brute_force_free_oracle(p.k, p.l, bound).unwrap(),
                                esch_is_free(&p),
                                "{p:?}"
                            );
                        }
                    }
                }
            }
        }
    }
}
