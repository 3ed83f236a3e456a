use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

use super::{CensusRecord, Kind};

pub const CSV_HEADER: [&str; 16] = [
    "kind", "k1", "k2", "k3", "l1", "l2", "l3", "q1", "q2", "q3", "q4", "q5", "free", "positive", "r", "warnings",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CensusFormat {
    Csv,
    Jsonl,
}

impl CensusFormat {
    /// `.jsonl`/`.json` select JSONL, anything else CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("jsonl") | Some("json") => CensusFormat::Jsonl,
            _ => CensusFormat::Csv,
        }
    }
}

impl std::str::FromStr for CensusFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(CensusFormat::Csv),
            "jsonl" => Ok(CensusFormat::Jsonl),
            other => Err(Error::InvalidParameter(format!("unknown census format `{other}`"))),
        }
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn csv_row(r: &CensusRecord) -> Vec<String> {
    let mut row = vec![r.kind.as_str().to_string()];
    for i in 0..3 {
        row.push(opt(r.k.map(|k| k[i])));
    }
    for i in 0..3 {
        row.push(opt(r.l.map(|l| l[i])));
    }
    for i in 0..5 {
        row.push(opt(r.q.map(|q| q[i])));
    }
    row.push(r.free.to_string());
    row.push(r.positive.to_string());
    row.push(opt(r.r));
    row.push(r.warnings.join(";"));
    row
}

/// Write records; returns the number written.
pub fn write_census_to<W, I>(records: I, out: W, format: CensusFormat) -> Result<usize>
where
    W: Write,
    I: IntoIterator<Item = CensusRecord>,
{
    let mut n = 0;
    match format {
        CensusFormat::Csv => {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(out);
            w.write_record(CSV_HEADER).map_err(csv_io)?;
            for r in records {
                w.write_record(csv_row(&r)).map_err(csv_io)?;
                n += 1;
            }
            w.flush()?;
        }
        CensusFormat::Jsonl => {
            let mut w = BufWriter::new(out);
            for r in records {
                serde_json::to_writer(&mut w, &r).map_err(std::io::Error::from)?;
                w.write_all(b"\n")?;
                n += 1;
            }
            w.flush()?;
        }
    }
    Ok(n)
}

pub fn write_census<I>(records: I, path: &Path, format: CensusFormat) -> Result<usize>
where
    I: IntoIterator<Item = CensusRecord>,
{
    write_census_to(records, File::create(path)?, format)
}

fn csv_io(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

fn parse_field<T: std::str::FromStr>(s: &str, name: &str, line: usize) -> Result<Option<T>> {
    if s.is_empty() {
        return Ok(None);
    }
    s.parse().map(Some).map_err(|_| Error::Parse {
        line,
        msg: format!("bad value `{s}` for {name}"),
    })
}

fn parse_bool(s: &str, name: &str, line: usize) -> Result<bool> {
    match s {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(Error::Parse {
            line,
            msg: format!("bad boolean `{s}` for {name}"),
        }),
    }
}

fn parse_tuple<const N: usize>(fields: &[&str], names: &[&str], line: usize) -> Result<Option<[i64; N]>> {
    let vals: Vec<Option<i64>> = fields
        .iter()
        .zip(names)
        .map(|(f, n)| parse_field(f, n, line))
        .collect::<Result<_>>()?;
    if vals.iter().all(Option::is_none) {
        return Ok(None);
    }
    if vals.iter().any(Option::is_none) {
        return Err(Error::Parse {
            line,
            msg: format!("partially filled tuple {}", names.join(",")),
        });
    }
    Ok(Some(std::array::from_fn(|i| vals[i].expect("checked"))))
}

fn from_csv(input: impl Read) -> Result<Vec<CensusRecord>> {
    let mut rd = csv::ReaderBuilder::new().has_headers(false).from_reader(input);
    let mut out = Vec::new();
    let mut header_seen = false;
    for rec in rd.records() {
        let rec = rec.map_err(|e| Error::Parse {
            line: e.position().map(|p| p.line() as usize).unwrap_or(0),
            msg: e.to_string(),
        })?;
        let line = rec.position().map(|p| p.line() as usize).unwrap_or(0);
        let f: Vec<&str> = rec.iter().collect();
        if !header_seen {
            if f != CSV_HEADER {
                return Err(Error::Parse {
                    line,
                    msg: format!("expected header {}", CSV_HEADER.join(",")),
                });
            }
            header_seen = true;
            continue;
        }
        if f.len() != CSV_HEADER.len() {
            return Err(Error::Parse {
                line,
                msg: format!("expected {} fields, found {}", CSV_HEADER.len(), f.len()),
            });
        }
        let kind = match f[0] {
            "eschenburg" => Kind::Eschenburg,
            "bazaikin" => Kind::Bazaikin,
            other => {
                return Err(Error::Parse {
                    line,
                    msg: format!("unknown kind `{other}`"),
                })
            }
        };
        out.push(CensusRecord {
            kind,
            k: parse_tuple(&f[1..4], &CSV_HEADER[1..4], line)?,
            l: parse_tuple(&f[4..7], &CSV_HEADER[4..7], line)?,
            q: parse_tuple(&f[7..12], &CSV_HEADER[7..12], line)?,
            free: parse_bool(f[12], "free", line)?,
            positive: parse_bool(f[13], "positive", line)?,
            r: parse_field(f[14], "r", line)?,
            warnings: if f[15].is_empty() {
                Vec::new()
            } else {
                f[15].split(';').map(str::to_string).collect()
            },
        });
    }
    Ok(out)
}

fn from_jsonl(input: impl BufRead) -> Result<Vec<CensusRecord>> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: i + 1,
            msg: e.to_string(),
        })?);
    }
    Ok(out)
}

pub fn read_census_from(input: impl Read, format: CensusFormat) -> Result<Vec<CensusRecord>> {
    match format {
        CensusFormat::Csv => from_csv(input),
        CensusFormat::Jsonl => from_jsonl(BufReader::new(input)),
    }
}

/// Read a census file; the format follows the extension.
pub fn read_census(path: &Path) -> Result<Vec<CensusRecord>> {
    read_census_from(File::open(path)?, CensusFormat::from_path(path))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::biquot::{BazaikinParams, EschenburgParams};

    fn records() -> Vec<CensusRecord> {
        vec![
            CensusRecord::eschenburg(&EschenburgParams::new([1, 1, -2], [0, 0, 0]).unwrap(), Vec::new()),
            CensusRecord::eschenburg(
                &EschenburgParams::new([2, 2, -4], [0, 0, 0]).unwrap(),
                vec!["a, b".into(), "c".into()],
            ),
            CensusRecord::bazaikin(&BazaikinParams { q: [1, 1, 1, 1, 3] }),
        ]
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        write_census_to(records(), &mut buf, CensusFormat::Csv).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "kind,k1,k2,k3,l1,l2,l3,q1,q2,q3,q4,q5,free,positive,r,warnings"
        );
        assert_eq!(lines.next().unwrap(), "eschenburg,1,1,-2,0,0,0,,,,,,true,true,-3,");
        assert!(text.ends_with('\n'));
    }

    #[test]
    fn jsonl_layout() {
        let mut buf = Vec::new();
        write_census_to(records(), &mut buf, CensusFormat::Jsonl).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let first = text.lines().next().unwrap();
        assert_eq!(
            first,
            r#"{"kind":"eschenburg","k":[1,1,-2],"l":[0,0,0],"q":null,"free":true,"positive":true,"r":-3,"warnings":[]}"#
        );
    }

    #[test]
    fn round_trip_both_formats() {
        for fmt in [CensusFormat::Csv, CensusFormat::Jsonl] {
            let mut buf = Vec::new();
            write_census_to(records(), &mut buf, fmt).unwrap();
            assert_eq!(read_census_from(&buf[..], fmt).unwrap(), records());
        }
    }

    #[test]
    fn parse_errors_carry_line() {
        let bad = "kind,k1,k2,k3,l1,l2,l3,q1,q2,q3,q4,q5,free,positive,r,warnings\n\
                   eschenburg,1,1,-2,0,0,0,,,,,,true,true,-3,\n\
                   eschenburg,1,x,-2,0,0,0,,,,,,true,true,-3,\n";
        match read_census_from(bad.as_bytes(), CensusFormat::Csv) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        let bad = "{\"kind\":\"eschenburg\"}\n";
        assert!(matches!(
            read_census_from(bad.as_bytes(), CensusFormat::Jsonl),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            read_census_from("a,b\n".as_bytes(), CensusFormat::Csv),
            Err(Error::Parse { line: 1, .. })
        ));
    }
}
