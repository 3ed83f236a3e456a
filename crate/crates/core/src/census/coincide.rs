use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::io::{BufRead, BufReader, BufWriter, Seek, SeekFrom, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{CensusRecord, Kind};

/// Free records of one kind sharing `|r|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoincidenceGroup {
    pub kind: Kind,
    pub abs_r: u64,
    pub members: Vec<CensusRecord>,
}

type Key = (u64, Kind, Option<[i64; 3]>, Option<[i64; 3]>, Option<[i64; 5]>);

fn key(r: &CensusRecord) -> Option<Key> {
    let a = r.abs_r()?;
    if !r.free {
        return None;
    }
    Some((a, r.kind, r.k, r.l, r.q))
}

/// Fold a key-sorted stream into groups of at least two distinct members.
fn group_sorted<I, F>(sorted: I, mut sink: F) -> Result<()>
where
    I: Iterator<Item = Result<(Key, CensusRecord)>>,
    F: FnMut(CoincidenceGroup) -> Result<()>,
{
    let mut current: Option<CoincidenceGroup> = None;
    let mut last: Option<Key> = None;
    for item in sorted {
        let (k, rec) = item?;
        if last.as_ref() == Some(&k) {
            continue;
        }
        last = Some(k);
        match current.as_mut() {
            Some(g) if g.abs_r == k.0 && g.kind == k.1 => g.members.push(rec),
            _ => {
                if let Some(g) = current.take() {
                    if g.members.len() >= 2 {
                        sink(g)?;
                    }
                }
                current = Some(CoincidenceGroup {
                    kind: k.1,
                    abs_r: k.0,
                    members: vec![rec],
                });
            }
        }
    }
    if let Some(g) = current {
        if g.members.len() >= 2 {
            sink(g)?;
        }
    }
    Ok(())
}

/// Group free records by `(kind, |r|)`, sorted by `|r|`; members are sorted
/// and deduplicated, so the output does not depend on input order.
pub fn find_coincidences(records: &[CensusRecord]) -> Vec<CoincidenceGroup> {
    let mut keyed: Vec<(Key, CensusRecord)> = records.iter().filter_map(|r| Some((key(r)?, r.clone()))).collect();
    keyed.sort_by_key(|a| a.0);
    let mut out = Vec::new();
    group_sorted(keyed.into_iter().map(Ok), |g| {
        out.push(g);
        Ok(())
    })
    .expect("in-memory grouping cannot fail");
    out
}

/// As [`find_coincidences`], holding at most `chunk` records in memory at a
/// time: sorted runs are spilled to temporary files and merged.
pub fn find_coincidences_external<I, F>(records: I, chunk: usize, sink: F) -> Result<()>
where
    I: IntoIterator<Item = CensusRecord>,
    F: FnMut(CoincidenceGroup) -> Result<()>,
{
    let chunk = chunk.max(1);
    let mut runs = Vec::new();
    let mut buf: Vec<(Key, CensusRecord)> = Vec::with_capacity(chunk);
    let spill = |buf: &mut Vec<(Key, CensusRecord)>, runs: &mut Vec<std::fs::File>| -> Result<()> {
        buf.sort_by_key(|a| a.0);
        let mut f = tempfile::tempfile()?;
        {
            let mut w = BufWriter::new(&mut f);
            for (_, r) in buf.drain(..) {
                serde_json::to_writer(&mut w, &r).map_err(std::io::Error::from)?;
                w.write_all(b"\n")?;
            }
            w.flush()?;
        }
        f.seek(SeekFrom::Start(0))?;
        runs.push(f);
        Ok(())
    };
    for r in records {
        if let Some(k) = key(&r) {
            buf.push((k, r));
            if buf.len() >= chunk {
                spill(&mut buf, &mut runs)?;
            }
        }
    }
    if !buf.is_empty() {
        spill(&mut buf, &mut runs)?;
    }

    let mut readers: Vec<_> = runs.into_iter().map(|f| BufReader::new(f).lines()).collect();
    let read_next = |i: usize,
                     readers: &mut Vec<std::io::Lines<BufReader<std::fs::File>>>|
     -> Result<Option<(Key, CensusRecord)>> {
        match readers[i].next() {
            None => Ok(None),
            Some(line) => {
                let line = line?;
                let rec: CensusRecord = serde_json::from_str(&line).map_err(|e| Error::Parse {
                    line: 0,
                    msg: format!("spill file: {e}"),
                })?;
                let k = key(&rec).expect("spilled records are keyed");
                Ok(Some((k, rec)))
            }
        }
    };
    let mut heap = BinaryHeap::new();
    let mut pending: Vec<Option<CensusRecord>> = Vec::with_capacity(readers.len());
    for i in 0..readers.len() {
        match read_next(i, &mut readers)? {
            Some((k, r)) => {
                heap.push(Reverse((k, i)));
                pending.push(Some(r));
            }
            None => pending.push(None),
        }
    }
    let merged = std::iter::from_fn(|| {
        let Reverse((k, i)) = heap.pop()?;
        let rec = pending[i].take().expect("heap entry has a pending record");
        match read_next(i, &mut readers) {
            Ok(Some((nk, nr))) => {
                heap.push(Reverse((nk, i)));
                pending[i] = Some(nr);
            }
            Ok(None) => {}
            Err(e) => return Some(Err(e)),
        }
        Some(Ok((k, rec)))
    });
    group_sorted(merged, sink)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::biquot::EschenburgParams;

    fn rec(k: [i64; 3], l: [i64; 3]) -> CensusRecord {
        CensusRecord::eschenburg(&EschenburgParams::new(k, l).unwrap(), Vec::new())
    }

    fn aw(p: i64, q: i64) -> CensusRecord {
        CensusRecord::eschenburg(&EschenburgParams::aloff_wallach(p, q), Vec::new())
    }

    fn sample() -> Vec<CensusRecord> {
        vec![
            rec([79, 49, -50], [0, 46, 32]),
            rec([1, 1, -2], [0, 0, 0]),
            rec([75, 54, -51], [0, 46, 32]),
            // W_{k,l} labelled so that |H^4| = k^2 - kl + l^2
            aw(56788, -51561),
            aw(61213, -18561),
            rec([2, 2, -4], [0, 0, 0]),
        ]
    }

    #[test]
    fn aloff_wallach_labelling_matters() {
        assert_eq!(aw(56788, -51561).abs_r(), Some(2_955_367_597));
        assert_eq!(aw(61213, -18561).abs_r(), Some(2_955_367_597));
        assert_eq!(aw(56788, 51561).abs_r(), Some(8_811_459_733));
        assert_eq!(aw(61213, 18561).abs_r(), Some(5_227_716_583));
    }

    #[test]
    fn known_pairs_grouped() {
        let groups = find_coincidences(&sample());
        assert_eq!(groups.len(), 2);
        assert!(groups.iter().all(|g| g.members.len() == 2));
        assert!(groups[0].abs_r < groups[1].abs_r);
        assert!(groups[0].members.contains(&sample()[0]) && groups[0].members.contains(&sample()[2]));
        assert!(groups[1].members.contains(&sample()[3]) && groups[1].members.contains(&sample()[4]));
    }

    #[test]
    fn order_independent_and_deduplicated() {
        let mut s = sample();
        let a = find_coincidences(&s);
        s.reverse();
        s.push(s[0].clone());
        assert_eq!(find_coincidences(&s), a);
        assert!(find_coincidences(&[]).is_empty());
        assert!(find_coincidences(&sample()[1..2]).is_empty());
    }

    #[test]
    fn external_matches_memory() {
        let recs: Vec<_> =
            super::super::esch_census(3, true, Default::default(), crate::par::Exec::Sequential).collect();
        let want = find_coincidences(&recs);
        assert!(!want.is_empty());
        for chunk in [1, 7, 100, 100_000] {
            let mut got = Vec::new();
            find_coincidences_external(recs.iter().cloned().rev(), chunk, |g| {
                got.push(g);
                Ok(())
            })
            .unwrap();
            assert_eq!(got, want, "chunk {chunk}");
        }
    }
}
