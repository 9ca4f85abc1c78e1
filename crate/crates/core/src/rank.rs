//! Root systems of metric graphs and the exact local-rank functional.

use std::collections::{BTreeMap, HashMap};

use num_rational::Ratio;
use serde::Serialize;

use crate::complex::ShapeComplex;
use crate::error::RankError;
use crate::mgraph::{self, MetricGraph, SubdivisionOrigin, FULL_TURN};

pub type Rational = Ratio<i64>;

/// Length of a root: half a turn.
pub const ROOT_LEN: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Root {
    /// Vertices of the unit subdivision; `path[0]` is an original vertex.
    pub path: Vec<usize>,
    /// Original vertex at the start.
    pub start: usize,
    /// Subdivision vertex at the far end.
    pub end: usize,
    pub q: u32,
    /// Other roots with the same start and end.
    pub n: u32,
}

impl Root {
    pub fn rank(&self) -> Rational {
        Rational::from_integer(1) + Rational::new(self.n as i64, self.q as i64)
    }
}

#[derive(Debug, Clone)]
pub struct RootSystem {
    pub subdivision: mgraph::Subdivision,
    pub roots: Vec<Root>,
}

impl RootSystem {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn census(&self) -> BTreeMap<Rational, usize> {
        let mut c = BTreeMap::new();
        for r in &self.roots {
            *c.entry(r.rank()).or_insert(0) += 1;
        }
        c
    }

    /// Name of the far endpoint, e.g. `p3` or `p3l5.1` for an edge-interior point.
    pub fn end_name(&self, r: &Root) -> &str {
        self.subdivision.graph.vertex_id(r.end)
    }
}

pub fn roots(g: &MetricGraph) -> Result<RootSystem, RankError> {
    if let Some(girth) = mgraph::girth(g) {
        if girth < FULL_TURN {
            return Err(RankError::GirthTooSmall { girth });
        }
    }
    let sub = mgraph::subdivide_to_unit(g);
    let nb = sub.graph.neighbours();
    let val = g.valencies();
    let mut roots = Vec::new();
    for (s, &deg) in val.iter().enumerate() {
        if deg < 3 {
            continue;
        }
        let q = (deg - 1) as u32;
        let mut found: Vec<Vec<usize>> = Vec::new();
        let mut path = vec![s];
        simple_paths(&nb, &mut path, ROOT_LEN, &mut found);
        let mut ends: HashMap<usize, u32> = HashMap::new();
        for p in &found {
            *ends.entry(*p.last().unwrap()).or_insert(0) += 1;
        }
        for p in found {
            let end = *p.last().unwrap();
            debug_assert!(end != s, "girth of at least 12 rules out closed roots");
            roots.push(Root {
                start: s,
                end,
                q,
                n: ends[&end] - 1,
                path: p,
            });
        }
    }
    debug_assert!(sub.vertex_origin[..g.vertex_count()]
        .iter()
        .enumerate()
        .all(|(i, o)| *o == SubdivisionOrigin::Vertex(i)));
    Ok(RootSystem {
        subdivision: sub,
        roots,
    })
}

fn simple_paths(nb: &[Vec<usize>], path: &mut Vec<usize>, len: usize, out: &mut Vec<Vec<usize>>) {
    if path.len() == len + 1 {
        out.push(path.clone());
        return;
    }
    let last = *path.last().unwrap();
    for &y in &nb[last] {
        if !path.contains(&y) {
            path.push(y);
            simple_paths(nb, path, len, out);
            path.pop();
        }
    }
}

pub fn root_rank(alpha: &Root) -> Rational {
    alpha.rank()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Norm {
    Mean,
    Max,
    Power(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RankValue {
    Exact(Rational),
    Approx(f64),
}

impl RankValue {
    pub fn exact(self) -> Option<Rational> {
        match self {
            RankValue::Exact(r) => Some(r),
            RankValue::Approx(_) => None,
        }
    }

    pub fn to_f64(self) -> f64 {
        match self {
            RankValue::Exact(r) => *r.numer() as f64 / *r.denom() as f64,
            RankValue::Approx(x) => x,
        }
    }
}

pub fn rank_of_system(rs: &RootSystem, norm: Norm) -> Result<RankValue, RankError> {
    if rs.is_empty() {
        return Err(RankError::NoRoots);
    }
    Ok(match norm {
        Norm::Mean => {
            let sum: Rational = rs.roots.iter().map(Root::rank).sum();
            RankValue::Exact(sum / Rational::from_integer(rs.len() as i64))
        }
        Norm::Max => RankValue::Exact(rs.roots.iter().map(Root::rank).max().unwrap()),
        Norm::Power(p) => {
            let m = rs
                .roots
                .iter()
                .map(|r| RankValue::Exact(r.rank()).to_f64().powf(p))
                .sum::<f64>()
                / rs.len() as f64;
            RankValue::Approx(m.powf(1.0 / p))
        }
    })
}

pub fn graph_rank(g: &MetricGraph, norm: Norm) -> Result<RankValue, RankError> {
    rank_of_system(&roots(g)?, norm)
}

pub fn root_census(g: &MetricGraph) -> Result<BTreeMap<Rational, usize>, RankError> {
    Ok(roots(g)?.census())
}

/// Every root has at most one companion with the same endpoints.
pub fn is_rank_one_plus(g: &MetricGraph) -> Result<bool, RankError> {
    Ok(roots(g)?.roots.iter().all(|r| r.n <= 1))
}

pub fn one_missing_rank(q: u64) -> Result<Rational, RankError> {
    match q {
        0 | 1 => Err(RankError::OrderTooSmall(q)),
        2 => Ok(Rational::new(15, 8)),
        _ => {
            let q = q as i64;
            Ok(Rational::from_integer(2) - Rational::new(2, q * q * q + 2 * q * q + 2 * q - 2))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocalRank {
    /// Average of the vertex ranks over vertices with roots; `None` when thin.
    pub value: Option<(i64, i64)>,
    pub thick: bool,
    pub per_vertex: Vec<(String, Option<(i64, i64)>)>,
}

impl LocalRank {
    pub fn rational(&self) -> Option<Rational> {
        self.value.map(|(n, d)| Rational::new(n, d))
    }
}

pub fn local_rank_complex(c: &ShapeComplex) -> Result<LocalRank, RankError> {
    let mut sum = Rational::from_integer(0);
    let mut count = 0i64;
    let mut per_vertex = Vec::new();
    for v in 0..c.vertex_count() {
        let l = c.link(v);
        let girth = mgraph::girth(&l);
        if girth.is_some_and(|x| x < FULL_TURN) {
            return Err(RankError::NotNpc {
                vertex: c.vertex_id(v).to_string(),
                girth,
            });
        }
        let rs = roots(&l)?;
        if rs.is_empty() {
            per_vertex.push((c.vertex_id(v).to_string(), None));
            continue;
        }
        let r = rank_of_system(&rs, Norm::Mean)?.exact().unwrap();
        per_vertex.push((c.vertex_id(v).to_string(), Some((*r.numer(), *r.denom()))));
        sum += r;
        count += 1;
    }
    let value = (count > 0).then(|| {
        let r = sum / Rational::from_integer(count);
        (*r.numer(), *r.denom())
    });
    Ok(LocalRank {
        value,
        thick: count > 0,
        per_vertex,
    })
}
