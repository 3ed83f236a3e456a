//! Report envelopes and text rendering.

use std::path::Path;

use clap::ValueEnum;
use curvlab::biquot::{
    baz_is_free, baz_is_positive, baz_order_h6, esch_block_conditions, esch_is_free, esch_is_positive, esch_order_h4,
    BazaikinParams, EschenburgParams, SamplerReport,
};
use curvlab::census::{canonical_eschenburg, CoincidenceGroup, EXCHANGED_WARNING};
use curvlab::metric::{FLAT_EPS, GRAM_TOL};
use curvlab::optimize::{Budget, CurvatureExtrema, FamilyOptimum, FD_STEP};
use serde::Serialize;

use crate::CliResult;

pub const SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Tolerance {
    pub gram: f64,
    pub flat: f64,
    pub fd_step: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            gram: GRAM_TOL,
            flat: FLAT_EPS,
            fd_step: FD_STEP,
        }
    }
}

/// One JSON object per invocation.
#[derive(Serialize)]
pub struct Envelope<'a, R: Serialize> {
    pub schema: u32,
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub space: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<Budget>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<Tolerance>,
    pub result: &'a R,
}

impl<'a, R: Serialize> Envelope<'a, R> {
    pub fn numeric(
        command: &'static str,
        space: &'a str,
        seed: u64,
        budget: Budget,
        tol: Tolerance,
        result: &'a R,
    ) -> Self {
        Envelope {
            schema: SCHEMA,
            command,
            space: Some(space),
            seed: Some(seed),
            budget: Some(budget),
            tolerance: Some(tol),
            result,
        }
    }

    pub fn plain(command: &'static str, result: &'a R) -> Self {
        Envelope {
            schema: SCHEMA,
            command,
            space: None,
            seed: None,
            budget: None,
            tolerance: None,
            result,
        }
    }
}

pub fn emit<R: Serialize>(fmt: OutputFormat, env: &Envelope<'_, R>, text: impl FnOnce() -> String) -> CliResult<()> {
    match fmt {
        OutputFormat::Json => {
            let s = serde_json::to_string_pretty(env).expect("reports serialize");
            println!("{s}");
        }
        OutputFormat::Text => print!("{}", text()),
    }
    Ok(())
}

fn plane(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.6}")).collect();
    format!("[{}]", parts.join(", "))
}

pub fn extrema_text(space: &str, e: &CurvatureExtrema) -> String {
    let mut s = format!("space: {space}\n");
    s += &format!("min: {:.12}\n", e.min_value);
    s += &format!("max: {:.12}\n", e.max_value);
    match e.pinching {
        Some(p) => s += &format!("pinching: {p:.12}\n"),
        None => s += "pinching: undefined\n",
    }
    s += &format!("argmin: x={} y={}\n", plane(&e.argmin.x), plane(&e.argmin.y));
    s += &format!("argmax: x={} y={}\n", plane(&e.argmax.x), plane(&e.argmax.y));
    s += &format!(
        "seed: {} samples: {} restarts: {} evaluations: {}\n",
        e.seed, e.samples, e.restarts, e.evaluations
    );
    s
}

#[derive(Serialize)]
pub struct PinchResult<'a> {
    pub pinching: f64,
    pub extrema: &'a CurvatureExtrema,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<&'a FamilyOptimum>,
}

pub fn pinch_text(space: &str, r: &PinchResult<'_>) -> String {
    let mut s = format!("pinching: {:.12}\n", r.pinching);
    if let Some(f) = r.family {
        s += &format!(
            "family: {} best: {} (search value {:.6}, {} grid points, {} refinement evaluations)\n",
            f.family,
            plane(&f.best_params),
            f.value,
            f.grid_points,
            f.refinement_evaluations
        );
    }
    s + &extrema_text(space, r.extrema)
}

#[derive(Serialize)]
pub struct EschCheck {
    pub k: [i64; 3],
    pub l: [i64; 3],
    pub free: bool,
    pub positive: bool,
    pub blocks: [bool; 3],
    pub r: i64,
    pub abs_r: u64,
    pub canonical_k: [i64; 3],
    pub canonical_l: [i64; 3],
    pub warnings: Vec<String>,
}

impl EschCheck {
    pub fn new(p: &EschenburgParams) -> Self {
        let free = esch_is_free(p);
        let positive = esch_is_positive(p);
        let r = esch_order_h4(p);
        let (c, forced) = canonical_eschenburg(p);
        let mut warnings = Vec::new();
        if !free {
            warnings.push("action not free: r is not a cohomology order".to_string());
        }
        if forced {
            warnings.push(EXCHANGED_WARNING.to_string());
        }
        EschCheck {
            k: p.k,
            l: p.l,
            free,
            positive,
            blocks: esch_block_conditions(p),
            r,
            abs_r: r.unsigned_abs(),
            canonical_k: c.k,
            canonical_l: c.l,
            warnings,
        }
    }

    pub fn text(&self) -> String {
        let mut s = format!("k={:?} l={:?}\n", self.k, self.l);
        s += &format!(
            "free={} positive={} r={} |r|={}\n",
            self.free, self.positive, self.r, self.abs_r
        );
        s += &format!("blocks={:?}\n", self.blocks);
        s += &format!("canonical k={:?} l={:?}\n", self.canonical_k, self.canonical_l);
        for w in &self.warnings {
            s += &format!("warning: {w}\n");
        }
        s
    }
}

#[derive(Serialize)]
pub struct BazCheck {
    pub q: [i64; 5],
    pub free: bool,
    pub positive: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub abs_r: Option<u64>,
    pub warnings: Vec<String>,
}

impl BazCheck {
    pub fn new(p: &BazaikinParams) -> Self {
        let free = baz_is_free(p);
        let mut warnings = Vec::new();
        let r = match baz_order_h6(p) {
            Ok(r) => Some(r),
            Err(e) => {
                warnings.push(e.to_string());
                None
            }
        };
        if !free {
            warnings.push("action not free".to_string());
        }
        BazCheck {
            q: p.q,
            free,
            positive: baz_is_positive(p),
            r,
            abs_r: r.map(i64::unsigned_abs),
            warnings,
        }
    }

    pub fn text(&self) -> String {
        let mut s = format!("q={:?}\n", self.q);
        s += &format!("free={} positive={}", self.free, self.positive);
        if let (Some(r), Some(a)) = (self.r, self.abs_r) {
            s += &format!(" r={r} |r|={a}");
        }
        s += "\n";
        for w in &self.warnings {
            s += &format!("warning: {w}\n");
        }
        s
    }
}

pub fn sample_text(r: &SamplerReport) -> String {
    format!(
        "k={:?} l={:?} t={} samples={} seed={}\nblock_margins={:?}\nmargin={:.9} block={}\ncriterion_positive={} integer_blocks={:?}\n",
        r.params.k,
        r.params.l,
        r.t,
        r.samples,
        r.seed,
        r.block_margins,
        r.margin,
        r.block,
        r.criterion_positive,
        r.integer_check.blocks
    )
}

#[derive(Serialize)]
pub struct CensusSummary {
    pub kind: &'static str,
    pub bound: i64,
    pub records: usize,
    pub out: String,
}

impl CensusSummary {
    pub fn new(kind: &'static str, bound: i64, records: usize, out: &Path) -> Self {
        CensusSummary {
            kind,
            bound,
            records,
            out: out.display().to_string(),
        }
    }

    pub fn text(&self) -> String {
        format!(
            "{} census bound={}: wrote {} records to {}\n",
            self.kind, self.bound, self.records, self.out
        )
    }
}

#[derive(Serialize)]
pub struct Coincidences {
    pub groups: Vec<CoincidenceGroup>,
}

impl Coincidences {
    pub fn text(&self) -> String {
        let mut s = String::new();
        for g in &self.groups {
            let members: Vec<String> = g
                .members
                .iter()
                .map(|m| match (m.k, m.l, m.q) {
                    (Some(k), Some(l), _) => format!("k={k:?} l={l:?}"),
                    (_, _, Some(q)) => format!("q={q:?}"),
                    _ => "?".to_string(),
                })
                .collect();
            s += &format!("{} |r|={}: {}\n", g.kind.as_str(), g.abs_r, members.join("; "));
        }
        s
    }
}
