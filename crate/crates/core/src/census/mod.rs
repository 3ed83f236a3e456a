//! Enumeration of Eschenburg and Bazaikin parameters with their invariants,
//! coincidence grouping by `|r|`, and CSV/JSONL persistence.

mod coincide;
mod io;
mod oracle;

use serde::{Deserialize, Serialize};

use crate::biquot::{
    baz_is_free, baz_is_positive, baz_order_h6, esch_is_free, esch_is_positive, esch_order_h4, BazaikinParams,
    EschenburgParams,
};
use crate::par::{self, Exec};

pub use coincide::{find_coincidences, find_coincidences_external, CoincidenceGroup};
pub use io::{read_census, read_census_from, write_census, write_census_to, CensusFormat, CSV_HEADER};
pub use oracle::{brute_force_free_oracle, required_order_bound};

/// Warning attached when positivity holds only for the exchanged pair `(l, k)`.
pub const EXCHANGED_WARNING: &str = "positive via exchanged orientation";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Eschenburg,
    Bazaikin,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Eschenburg => "eschenburg",
            Kind::Bazaikin => "bazaikin",
        }
    }
}

/// One census line. `r` is present only for free parameters, and
/// `positive` implies `free`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CensusRecord {
    pub kind: Kind,
    pub k: Option<[i64; 3]>,
    pub l: Option<[i64; 3]>,
    pub q: Option<[i64; 5]>,
    pub free: bool,
    pub positive: bool,
    pub r: Option<i64>,
    pub warnings: Vec<String>,
}

impl CensusRecord {
    pub fn eschenburg(p: &EschenburgParams, warnings: Vec<String>) -> Self {
        let free = esch_is_free(p);
        CensusRecord {
            kind: Kind::Eschenburg,
            k: Some(p.k),
            l: Some(p.l),
            q: None,
            free,
            positive: free && esch_is_positive(p),
            r: free.then(|| esch_order_h4(p)),
            warnings,
        }
    }

    pub fn bazaikin(p: &BazaikinParams) -> Self {
        let free = baz_is_free(p);
        let mut warnings = Vec::new();
        let r = if free {
            match baz_order_h6(p) {
                Ok(r) => Some(r),
                Err(e) => {
                    warnings.push(e.to_string());
                    None
                }
            }
        } else {
            None
        };
        CensusRecord {
            kind: Kind::Bazaikin,
            k: None,
            l: None,
            q: Some(p.q),
            free,
            positive: free && baz_is_positive(p),
            r,
            warnings,
        }
    }

    pub fn abs_r(&self) -> Option<u64> {
        self.r.map(i64::unsigned_abs)
    }

    /// Ordering key: kind, then parameters.
    pub fn sort_key(&self) -> SortKey {
        (self.kind, self.k, self.l, self.q)
    }
}

/// Kind, then `k`, `l`, `q`.
pub type SortKey = (Kind, Option<[i64; 3]>, Option<[i64; 3]>, Option<[i64; 5]>);

type Worker = Box<dyn Fn(i64) -> Vec<CensusRecord> + Send + Sync>;

/// Which records to keep.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CensusFilter {
    pub free_only: bool,
    pub positive_only: bool,
}

impl CensusFilter {
    pub fn accepts(&self, r: &CensusRecord) -> bool {
        (!self.free_only || r.free) && (!self.positive_only || r.positive)
    }
}

fn sort_desc(mut v: [i64; 3]) -> [i64; 3] {
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

/// Sort both triples descending and translate so that `min(l) = 0`.
fn oriented(k: [i64; 3], l: [i64; 3]) -> EschenburgParams {
    let (k, l) = (sort_desc(k), sort_desc(l));
    let c = l[2];
    EschenburgParams {
        k: k.map(|x| x - c),
        l: l.map(|x| x - c),
    }
}

/// Canonical representative of the orbit of `(k, l)` under permutations,
/// translation and exchange, and whether positivity forced the exchange.
///
/// The exchanged orientation is used when it alone satisfies the positivity
/// criterion; otherwise the lexicographically smaller orientation wins.
pub fn canonical_eschenburg(p: &EschenburgParams) -> (EschenburgParams, bool) {
    let a = oriented(p.k, p.l);
    let b = oriented(p.l, p.k);
    let (pa, pb) = (esch_is_positive(&a), esch_is_positive(&b));
    let lex = if (b.k, b.l) < (a.k, a.l) { b } else { a };
    let chosen = match (pa, pb) {
        (true, false) => a,
        (false, true) => b,
        _ => lex,
    };
    (chosen, chosen != lex)
}

fn esch_record(p: &EschenburgParams, forced: bool) -> CensusRecord {
    let warnings = if forced && esch_is_positive(p) {
        vec![EXCHANGED_WARNING.to_string()]
    } else {
        Vec::new()
    };
    CensusRecord::eschenburg(p, warnings)
}

/// Canonical representatives whose orbit meets the box `[-bound, bound]^6`,
/// for one value of the leading `l` entry.
fn esch_partition(bound: i64, l1: i64) -> Vec<CensusRecord> {
    let span = 2 * bound;
    let mut out = Vec::new();
    for l2 in 0..=l1 {
        let l = [l1, l2, 0];
        let s = l1 + l2;
        for k1 in -span..=span {
            for k2 in -span..=k1 {
                let k3 = s - k1 - k2;
                if k3 > k2 || k3 < -span {
                    continue;
                }
                let lo = k3.min(0);
                let hi = k1.max(l1);
                if hi - lo > span {
                    continue;
                }
                let p = EschenburgParams { k: [k1, k2, k3], l };
                let (c, forced) = canonical_eschenburg(&p);
                if c == p {
                    out.push(esch_record(&p, forced));
                }
            }
        }
    }
    out
}

/// All `(k, l)` in the box with equal sums, for one value of `k1`.
fn esch_raw_partition(bound: i64, k1: i64) -> Vec<CensusRecord> {
    let mut out = Vec::new();
    let r = -bound..=bound;
    for k2 in r.clone() {
        for k3 in r.clone() {
            let s = k1 + k2 + k3;
            for l1 in r.clone() {
                for l2 in r.clone() {
                    let l3 = s - l1 - l2;
                    if l3.abs() > bound {
                        continue;
                    }
                    let p = EschenburgParams {
                        k: [k1, k2, k3],
                        l: [l1, l2, l3],
                    };
                    out.push(CensusRecord::eschenburg(&p, Vec::new()));
                }
            }
        }
    }
    out
}

/// Stream of records, produced partition by partition with each batch of
/// partitions evaluated in parallel.
pub struct CensusStream {
    partitions: Vec<i64>,
    next: usize,
    batch: std::vec::IntoIter<CensusRecord>,
    worker: Worker,
    filter: CensusFilter,
    exec: Exec,
}

impl Iterator for CensusStream {
    type Item = CensusRecord;

    fn next(&mut self) -> Option<CensusRecord> {
        loop {
            for r in self.batch.by_ref() {
                if self.filter.accepts(&r) {
                    return Some(r);
                }
            }
            if self.next >= self.partitions.len() {
                return None;
            }
            let width = par::worker_count().max(1) * 2;
            let end = (self.next + width).min(self.partitions.len());
            let parts = &self.partitions[self.next..end];
            let worker = &self.worker;
            let chunks = par::map_slice(self.exec, parts, |p| worker(*p));
            self.next = end;
            self.batch = chunks.into_iter().flatten().collect::<Vec<_>>().into_iter();
        }
    }
}

/// Eschenburg parameters with entries in `[-bound, bound]`.
///
/// With `normalize`, one canonical record per symmetry orbit meeting the box
/// (its entries may leave the box after translation); otherwise every tuple
/// in the box.
pub fn esch_census(bound: i64, normalize: bool, filter: CensusFilter, exec: Exec) -> CensusStream {
    let bound = bound.max(0);
    let (partitions, worker): (Vec<i64>, Worker) = if normalize {
        ((0..=2 * bound).collect(), Box::new(move |l1| esch_partition(bound, l1)))
    } else {
        (
            (-bound..=bound).collect(),
            Box::new(move |k1| esch_raw_partition(bound, k1)),
        )
    };
    CensusStream {
        partitions,
        next: 0,
        batch: Vec::new().into_iter(),
        worker,
        filter,
        exec,
    }
}

/// Canonical Bazaikin form: entries sorted descending, global sign chosen to
/// make the tuple lexicographically larger.
pub fn canonical_bazaikin(p: &BazaikinParams) -> BazaikinParams {
    let mut a = p.q;
    a.sort_unstable_by(|x, y| y.cmp(x));
    let mut b = p.q.map(|x| -x);
    b.sort_unstable_by(|x, y| y.cmp(x));
    BazaikinParams { q: a.max(b) }
}

/// Bazaikin parameters with odd entries in `[-bound, bound]`, one per class
/// under permutation and global sign.
pub fn baz_census(bound: i64, filter: CensusFilter, exec: Exec) -> CensusStream {
    let bound = bound.max(1);
    let top = if bound % 2 == 0 { bound - 1 } else { bound };
    let odds: Vec<i64> = (-top..=top).step_by(2).collect();
    let odds_w = odds.clone();
    let worker = move |q1: i64| {
        let mut out = Vec::new();
        let below: Vec<i64> = odds_w.iter().copied().filter(|x| *x <= q1).collect();
        for (i2, &q2) in below.iter().enumerate().rev() {
            for (i3, &q3) in below[..=i2].iter().enumerate().rev() {
                for (i4, &q4) in below[..=i3].iter().enumerate().rev() {
                    for &q5 in below[..=i4].iter().rev() {
                        let p = BazaikinParams {
                            q: [q1, q2, q3, q4, q5],
                        };
                        if canonical_bazaikin(&p) == p {
                            out.push(CensusRecord::bazaikin(&p));
                        }
                    }
                }
            }
        }
        out
    };
    CensusStream {
        partitions: odds.into_iter().rev().collect(),
        next: 0,
        batch: Vec::new().into_iter(),
        worker: Box::new(worker),
        filter,
        exec,
    }
}
