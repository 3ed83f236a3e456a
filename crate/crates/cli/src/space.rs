//! Space specifications: `<family>[:<metric>][?key=val&...]`.

use std::collections::BTreeMap;
use std::sync::Arc;

use curvlab::homspace::{g_t_metric, HomogeneousSpec, QuotientCurvature};
use curvlab::liealg::{named_subalgebra, Coeffs, Family, LieAlgebraBasis, Subalgebra, SubalgebraName};
use curvlab::metric::{cheeger_deform, subalgebra_scaled, LeftInvariantMetric};
use curvlab::spaces::{algebra, aloff_wallach, berger_b7, flag_w6, w6_diagonal_metric, GroupCurvature};

use crate::CliError;

pub const GRAMMAR: &str = "\
SPACE SPECIFICATIONS
  <family>[:<metric>][?key=val&key=val...]

  family         metrics                keys
  su2|su3|so5    biinvariant (default)  cheeger=s  (Cheeger deformation, s >= 0)
                 qt                     k=<sub>, t>0, cheeger=s
  berger7        normal (default)       -
  flag:su3/t2    normal (default)       t=<t> (g_t), or x1,x2,x3 (root-space scales)
  aw:p,q         normal (default)       t=<t> (g_t)

  <sub> for qt:  e1 (first basis vector), torus, u2 (su3), su2 (su3 block),
                 so3irr (so5)

  examples: su3:biinvariant   su2:qt?k=e1&t=1.5   flag:su3/t2?t=0.5
            flag:su3/t2?x1=0.5&x2=1&x3=1   aw:1,1?t=0.5   berger7";

/// Parsed specification.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceSpec {
    pub family: SpaceFamily,
    pub metric: String,
    pub params: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpaceFamily {
    Group(Family, usize),
    Berger7,
    Flag,
    AloffWallach(i64, i64),
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

impl std::str::FromStr for SpaceSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let (base, query) = match s.split_once('?') {
            Some((b, q)) => (b, Some(q)),
            None => (s, None),
        };
        let mut params = BTreeMap::new();
        if let Some(q) = query {
            for kv in q.split('&').filter(|p| !p.is_empty()) {
                let (k, v) = kv
                    .split_once('=')
                    .ok_or_else(|| usage(format!("expected key=val, found `{kv}`")))?;
                if params.insert(k.to_string(), v.to_string()).is_some() {
                    return Err(usage(format!("duplicate key `{k}`")));
                }
            }
        }
        let (family, metric) = if let Some(rest) = base.strip_prefix("flag:su3/t2") {
            (SpaceFamily::Flag, rest)
        } else if let Some(rest) = base.strip_prefix("aw:") {
            let (pq, m) = match rest.split_once(':') {
                Some((a, b)) => (a, b),
                None => (rest, ""),
            };
            let (p, q) = pq
                .split_once(',')
                .ok_or_else(|| usage(format!("expected aw:p,q, found `{base}`")))?;
            let p = p.trim().parse().map_err(|_| usage(format!("bad integer `{p}`")))?;
            let q = q.trim().parse().map_err(|_| usage(format!("bad integer `{q}`")))?;
            let m = if m.is_empty() { String::new() } else { format!(":{m}") };
            return finish(SpaceFamily::AloffWallach(p, q), &m, params);
        } else if let Some(rest) = base.strip_prefix("berger7") {
            (SpaceFamily::Berger7, rest)
        } else {
            let (name, rest) = match base.find(':') {
                Some(i) => (&base[..i], &base[i..]),
                None => (base, ""),
            };
            let fam = match name {
                "su2" => SpaceFamily::Group(Family::Su, 2),
                "su3" => SpaceFamily::Group(Family::Su, 3),
                "so5" => SpaceFamily::Group(Family::So, 5),
                other => return Err(usage(format!("unknown space family `{other}`"))),
            };
            (fam, rest)
        };
        finish(family, metric, params)
    }
}

fn finish(family: SpaceFamily, metric: &str, params: BTreeMap<String, String>) -> Result<SpaceSpec, CliError> {
    let metric = match metric.strip_prefix(':') {
        Some(m) => m.to_string(),
        None if metric.is_empty() => String::new(),
        None => return Err(usage(format!("unexpected `{metric}` after family"))),
    };
    let default = match family {
        SpaceFamily::Group(..) => "biinvariant",
        _ => "normal",
    };
    let metric = if metric.is_empty() { default.to_string() } else { metric };
    let allowed: &[&str] = match (&family, metric.as_str()) {
        (SpaceFamily::Group(..), "biinvariant") => &["cheeger"],
        (SpaceFamily::Group(..), "qt") => &["k", "t", "cheeger"],
        (SpaceFamily::Berger7, "normal") => &[],
        (SpaceFamily::Flag, "normal") => &["t", "x1", "x2", "x3"],
        (SpaceFamily::AloffWallach(..), "normal") => &["t"],
        (_, m) => return Err(usage(format!("metric `{m}` not available for this family"))),
    };
    for k in params.keys() {
        if !allowed.contains(&k.as_str()) {
            return Err(usage(format!("unknown key `{k}` for metric `{metric}`")));
        }
    }
    Ok(SpaceSpec { family, metric, params })
}

impl SpaceSpec {
    fn num(&self, key: &str) -> Result<Option<f64>, CliError> {
        match self.params.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .map(Some)
                .ok_or_else(|| usage(format!("bad number `{v}` for `{key}`"))),
        }
    }

    /// Homogeneous data for quotient families.
    pub fn homogeneous(&self) -> Result<Option<HomogeneousSpec>, CliError> {
        Ok(match self.family {
            SpaceFamily::Group(..) => None,
            SpaceFamily::Berger7 => Some(berger_b7()?),
            SpaceFamily::Flag => Some(flag_w6()?),
            SpaceFamily::AloffWallach(p, q) => Some(aloff_wallach(p, q)?),
        })
    }

    fn group_metric(&self, alg: Arc<LieAlgebraBasis>) -> Result<LeftInvariantMetric, CliError> {
        let mut m = match self.metric.as_str() {
            "qt" => {
                let name = self.params.get("k").ok_or_else(|| usage("qt needs k=<sub>"))?;
                let t = self.num("t")?.ok_or_else(|| usage("qt needs t=<t>"))?;
                let sub = named_sub(&alg, name)?;
                subalgebra_scaled(&sub, t)?
            }
            _ => LeftInvariantMetric::biinvariant(alg),
        };
        if let Some(s) = self.num("cheeger")? {
            m = cheeger_deform(&m, s)?;
        }
        Ok(m)
    }

    /// Plane evaluator and its coordinate dimension.
    pub fn resolve(&self) -> Result<Evaluator, CliError> {
        if let SpaceFamily::Group(f, n) = self.family {
            let alg = algebra(f, n)?;
            return Ok(Evaluator::Group(GroupCurvature::new(self.group_metric(alg)?)));
        }
        let spec = self.homogeneous()?.expect("quotient family");
        let t = self.num("t")?;
        let xs = [self.num("x1")?, self.num("x2")?, self.num("x3")?];
        if t.is_some() && xs.iter().any(Option::is_some) {
            return Err(usage("t and x1/x2/x3 are exclusive"));
        }
        let metric = if let Some(t) = t {
            g_t_metric(&spec, t)?
        } else if xs.iter().any(Option::is_some) {
            w6_diagonal_metric(spec.g(), xs.map(|x| x.unwrap_or(1.0)))?
        } else {
            LeftInvariantMetric::biinvariant(spec.g().clone())
        };
        Ok(Evaluator::Quotient(QuotientCurvature::new(metric, spec.h())?))
    }
}

fn named_sub(alg: &Arc<LieAlgebraBasis>, name: &str) -> Result<Subalgebra, CliError> {
    let n = match name {
        "e1" => {
            let e = Coeffs::from_fn(alg.dim(), |i, _| if i == 0 { 1.0 } else { 0.0 });
            return Ok(Subalgebra::new(alg.clone(), &[e], Some("e1"))?);
        }
        "torus" => SubalgebraName::Torus,
        "u2" => SubalgebraName::U2Block { slot: 2 },
        "su2" => SubalgebraName::Su2Block,
        "so3irr" => SubalgebraName::So3Irreducible,
        other => return Err(usage(format!("unknown subalgebra `{other}`"))),
    };
    Ok(named_subalgebra(alg, &n)?)
}

pub enum Evaluator {
    Group(GroupCurvature),
    Quotient(QuotientCurvature),
}

impl Evaluator {
    pub fn dim(&self) -> usize {
        match self {
            Evaluator::Group(g) => g.dim(),
            Evaluator::Quotient(q) => q.horizontal_dim(),
        }
    }

    pub fn eval(&self, a: &Coeffs, b: &Coeffs) -> f64 {
        match self {
            Evaluator::Group(g) => g.eval_coords(a, b),
            Evaluator::Quotient(q) => q.eval_coords(a, b),
        }
    }
}
