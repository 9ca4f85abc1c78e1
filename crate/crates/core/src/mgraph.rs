//! Metric multigraphs with integer edge lengths measured in units of π/6.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{GraphError, ParseError};
use crate::iso;

/// A full turn, in length units.
pub const FULL_TURN: u64 = 12;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub id: String,
    pub u: usize,
    pub v: usize,
    pub len: u32,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }

    pub fn other(&self, x: usize) -> usize {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

/// Finite multigraph; loops and parallel edges allowed. Vertices and edges keep
/// insertion order, which is what every deterministic tie-break refers to.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MetricGraph {
    pub name: String,
    vertices: Vec<String>,
    edges: Vec<Edge>,
    index: HashMap<String, usize>,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    name: String,
    vertices: Vec<String>,
    edges: Vec<EdgeJson>,
}

#[derive(Serialize, Deserialize)]
struct EdgeJson {
    id: String,
    u: String,
    v: String,
    len: u32,
}

impl MetricGraph {
    pub fn new(name: impl Into<String>) -> Self {
        MetricGraph {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn add_vertex(&mut self, id: impl Into<String>) -> Result<usize, GraphError> {
        let id = id.into();
        if self.index.contains_key(&id) {
            return Err(GraphError::DuplicateVertex(id));
        }
        let k = self.vertices.len();
        self.index.insert(id.clone(), k);
        self.vertices.push(id);
        Ok(k)
    }

    /// Returns the index of `id`, creating the vertex if needed.
    pub fn ensure_vertex(&mut self, id: &str) -> usize {
        match self.index.get(id) {
            Some(&k) => k,
            None => self.add_vertex(id).expect("fresh id"),
        }
    }

    pub fn add_edge(&mut self, u: usize, v: usize, len: u32) -> Result<usize, GraphError> {
        let id = format!("e{}", self.edges.len());
        self.add_named_edge(id, u, v, len)
    }

    pub fn add_named_edge(
        &mut self,
        id: impl Into<String>,
        u: usize,
        v: usize,
        len: u32,
    ) -> Result<usize, GraphError> {
        let n = self.vertices.len();
        if u >= n {
            return Err(GraphError::VertexOutOfRange(u));
        }
        if v >= n {
            return Err(GraphError::VertexOutOfRange(v));
        }
        if len == 0 {
            return Err(GraphError::ZeroLength);
        }
        self.edges.push(Edge {
            id: id.into(),
            u,
            v,
            len,
        });
        Ok(self.edges.len() - 1)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_id(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    /// Valency with loops counted twice.
    pub fn valency(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|e| (e.u == v) as usize + (e.v == v) as usize)
            .sum()
    }

    pub fn valencies(&self) -> Vec<usize> {
        let mut d = vec![0; self.vertices.len()];
        for e in &self.edges {
            d[e.u] += 1;
            d[e.v] += 1;
        }
        d
    }

    /// Incidences per vertex as (edge index, far endpoint); a loop shows up twice.
    pub fn incidence(&self) -> Vec<Vec<(usize, usize)>> {
        let mut inc = vec![Vec::new(); self.vertices.len()];
        for (k, e) in self.edges.iter().enumerate() {
            inc[e.u].push((k, e.v));
            inc[e.v].push((k, e.u));
        }
        inc
    }

    /// Simple-graph neighbour lists (no repetition, loops dropped).
    pub fn neighbours(&self) -> Vec<Vec<usize>> {
        let mut nb = vec![Vec::new(); self.vertices.len()];
        for e in &self.edges {
            if e.u != e.v {
                nb[e.u].push(e.v);
                nb[e.v].push(e.u);
            }
        }
        for l in &mut nb {
            l.sort_unstable();
            l.dedup();
        }
        nb
    }

    /// Copy of the graph without the listed edges; vertices are kept.
    pub fn without_edges(&self, removed: &[usize]) -> MetricGraph {
        let mut g = MetricGraph::new(self.name.clone());
        for v in &self.vertices {
            g.add_vertex(v.clone()).expect("ids are unique");
        }
        for (k, e) in self.edges.iter().enumerate() {
            if !removed.contains(&k) {
                g.edges.push(e.clone());
            }
        }
        g
    }

    /// Graph with vertices renamed through `perm` (old index -> new index).
    pub fn relabeled(&self, perm: &[usize]) -> MetricGraph {
        let n = self.vertices.len();
        let mut names = vec![String::new(); n];
        for (old, &new) in perm.iter().enumerate() {
            names[new] = self.vertices[old].clone();
        }
        let mut g = MetricGraph::new(self.name.clone());
        for s in names {
            g.add_vertex(s).expect("permutation keeps ids unique");
        }
        for e in &self.edges {
            g.edges.push(Edge {
                id: e.id.clone(),
                u: perm[e.u],
                v: perm[e.v],
                len: e.len,
            });
        }
        g
    }

    pub fn all_lengths_equal(&self, len: u32) -> bool {
        self.edges.iter().all(|e| e.len == len)
    }

    /// Hop distances from `s` in the underlying simple graph.
    pub fn hop_distances(&self, s: usize) -> Vec<Option<usize>> {
        bfs(&self.neighbours(), s)
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return true;
        }
        self.hop_distances(0).iter().all(|d| d.is_some())
    }

    pub fn parse(text: &str) -> Result<MetricGraph, ParseError> {
        let mut g: Option<MetricGraph> = None;
        let mut edge_ids = std::collections::HashSet::new();
        for (ln, raw) in text.lines().enumerate() {
            let line = ln + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let toks: Vec<&str> = body.split_whitespace().collect();
            match (toks[0], g.as_mut()) {
                ("graph", None) => {
                    let name = toks.get(1).copied().unwrap_or("");
                    g = Some(MetricGraph::new(name));
                }
                ("graph", Some(_)) => {
                    return Err(ParseError::Syntax {
                        line,
                        msg: "second header".into(),
                    })
                }
                (_, None) => return Err(ParseError::MissingHeader { expected: "graph" }),
                ("vertex", Some(g)) => {
                    if toks.len() != 2 {
                        return Err(ParseError::Syntax {
                            line,
                            msg: "expected `vertex <id>`".into(),
                        });
                    }
                    g.add_vertex(toks[1]).map_err(|_| ParseError::Duplicate {
                        line,
                        id: toks[1].into(),
                    })?;
                }
                ("edge", Some(g)) => {
                    if toks.len() != 5 {
                        return Err(ParseError::Syntax {
                            line,
                            msg: "expected `edge <id> <u> <v> <len>`".into(),
                        });
                    }
                    let look = |id: &str| {
                        g.vertex_index(id).ok_or_else(|| ParseError::UnknownVertex {
                            line,
                            id: id.into(),
                        })
                    };
                    let u = look(toks[2])?;
                    let v = look(toks[3])?;
                    let len: u32 = toks[4].parse().map_err(|_| ParseError::Syntax {
                        line,
                        msg: format!("bad length `{}`", toks[4]),
                    })?;
                    if !edge_ids.insert(toks[1].to_string()) {
                        return Err(ParseError::Duplicate {
                            line,
                            id: toks[1].into(),
                        });
                    }
                    g.add_named_edge(toks[1], u, v, len)
                        .map_err(|e| ParseError::Syntax {
                            line,
                            msg: e.to_string(),
                        })?;
                }
                (other, Some(_)) => {
                    return Err(ParseError::Syntax {
                        line,
                        msg: format!("unknown keyword `{other}`"),
                    })
                }
            }
        }
        g.ok_or(ParseError::MissingHeader { expected: "graph" })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let j = GraphJson {
            name: self.name.clone(),
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeJson {
                    id: e.id.clone(),
                    u: self.vertices[e.u].clone(),
                    v: self.vertices[e.v].clone(),
                    len: e.len,
                })
                .collect(),
        };
        serde_json::to_value(j).expect("plain data serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<MetricGraph, ParseError> {
        let j: GraphJson =
            serde_json::from_value(value.clone()).map_err(|e| ParseError::Json(e.to_string()))?;
        let mut g = MetricGraph::new(j.name);
        for v in j.vertices {
            g.add_vertex(v.clone())
                .map_err(|_| ParseError::Json(format!("duplicate vertex {v}")))?;
        }
        for e in j.edges {
            let u = g
                .vertex_index(&e.u)
                .ok_or_else(|| ParseError::Json(format!("unknown vertex {}", e.u)))?;
            let v = g
                .vertex_index(&e.v)
                .ok_or_else(|| ParseError::Json(format!("unknown vertex {}", e.v)))?;
            g.add_named_edge(e.id, u, v, e.len)
                .map_err(|e| ParseError::Json(e.to_string()))?;
        }
        Ok(g)
    }
}

impl fmt::Display for MetricGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "graph {}", self.name)?;
        for v in &self.vertices {
            writeln!(f, "vertex {v}")?;
        }
        for e in &self.edges {
            writeln!(
                f,
                "edge {} {} {} {}",
                e.id, self.vertices[e.u], self.vertices[e.v], e.len
            )?;
        }
        Ok(())
    }
}

pub(crate) fn bfs(nb: &[Vec<usize>], s: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; nb.len()];
    let mut queue = std::collections::VecDeque::new();
    dist[s] = Some(0);
    queue.push_back(s);
    while let Some(x) = queue.pop_front() {
        let d = dist[x].unwrap();
        for &y in &nb[x] {
            if dist[y].is_none() {
                dist[y] = Some(d + 1);
                queue.push_back(y);
            }
        }
    }
    dist
}

/// Metric girth in length units; `None` for a forest.
///
/// A shortest cycle through edge `e = uv` has length `len(e) + d(u, v)` where the
/// distance is taken in the graph with `e` deleted.
pub fn girth(g: &MetricGraph) -> Option<u64> {
    let inc = g.incidence();
    let mut best: Option<u64> = None;
    for (k, e) in g.edges().iter().enumerate() {
        let len = e.len as u64;
        if best.is_some_and(|b| len >= b) {
            continue;
        }
        let candidate = if e.is_loop() {
            Some(len)
        } else {
            let bound = best.map(|b| b - len);
            dijkstra_avoiding(&inc, g.edges(), e.u, e.v, k, bound).map(|d| d + len)
        };
        if let Some(c) = candidate {
            best = Some(best.map_or(c, |b| b.min(c)));
        }
    }
    best
}

fn dijkstra_avoiding(
    inc: &[Vec<(usize, usize)>],
    edges: &[Edge],
    s: usize,
    t: usize,
    skip: usize,
    bound: Option<u64>,
) -> Option<u64> {
    let mut dist = vec![u64::MAX; inc.len()];
    let mut heap = BinaryHeap::new();
    dist[s] = 0;
    heap.push(Reverse((0u64, s)));
    while let Some(Reverse((d, x))) = heap.pop() {
        if d > dist[x] {
            continue;
        }
        if bound.is_some_and(|b| d >= b) {
            return None;
        }
        if x == t {
            return Some(d);
        }
        for &(k, y) in &inc[x] {
            if k == skip {
                continue;
            }
            let nd = d + edges[k].len as u64;
            if nd < dist[y] {
                dist[y] = nd;
                heap.push(Reverse((nd, y)));
            }
        }
    }
    None
}

/// Combinatorial girth: number of edges on a shortest cycle.
pub fn hop_girth(g: &MetricGraph) -> Option<u64> {
    let mut unit = g.clone();
    for e in &mut unit.edges {
        e.len = 1;
    }
    girth(&unit)
}

/// Lengths of maximal non-branching paths, with multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct LengthSpectrum {
    pub entries: BTreeMap<u64, usize>,
    /// Set when some component is a bare cycle, which contributes its total length once.
    pub has_cycle_component: bool,
}

impl LengthSpectrum {
    pub fn from_pairs(pairs: &[(u64, usize)]) -> Self {
        LengthSpectrum {
            entries: pairs.iter().copied().collect(),
            has_cycle_component: false,
        }
    }

    pub fn pairs(&self) -> Vec<(u64, usize)> {
        self.entries.iter().map(|(&l, &m)| (l, m)).collect()
    }
}

impl fmt::Display for LengthSpectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|(l, m)| format!("({l},{m})"))
            .collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

pub fn length_spectrum(g: &MetricGraph) -> LengthSpectrum {
    let inc = g.incidence();
    let val = g.valencies();
    let mut used = vec![false; g.edge_count()];
    let mut spectrum = LengthSpectrum::default();

    // Walk out of every branching (or terminal) vertex through valency-2 vertices.
    for s in 0..g.vertex_count() {
        if val[s] == 2 {
            continue;
        }
        for &(k0, _) in &inc[s] {
            if used[k0] {
                continue;
            }
            let mut total = 0u64;
            let mut k = k0;
            let mut at = s;
            loop {
                used[k] = true;
                total += g.edges[k].len as u64;
                let next = g.edges[k].other(at);
                if val[next] != 2 {
                    break;
                }
                let step = inc[next].iter().find(|&&(k2, _)| !used[k2]);
                match step {
                    Some(&(k2, _)) => {
                        k = k2;
                        at = next;
                    }
                    None => break,
                }
            }
            *spectrum.entries.entry(total).or_insert(0) += 1;
        }
    }

    // Whatever is left lies on components made only of valency-2 vertices.
    for k0 in 0..g.edge_count() {
        if used[k0] {
            continue;
        }
        spectrum.has_cycle_component = true;
        let mut total = 0u64;
        let mut k = k0;
        let mut at = g.edges[k0].u;
        loop {
            used[k] = true;
            total += g.edges[k].len as u64;
            let next = g.edges[k].other(at);
            match inc[next].iter().find(|&&(k2, _)| !used[k2]) {
                Some(&(k2, _)) => {
                    k = k2;
                    at = next;
                }
                None => break,
            }
        }
        *spectrum.entries.entry(total).or_insert(0) += 1;
    }
    spectrum
}

/// Where a vertex of a unit subdivision came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubdivisionOrigin {
    Vertex(usize),
    /// Interior point of an edge, at `step` units from the edge's `u` end.
    EdgePoint {
        edge: usize,
        step: u32,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subdivision {
    pub graph: MetricGraph,
    pub vertex_origin: Vec<SubdivisionOrigin>,
    /// Original edge carried by each unit edge.
    pub edge_origin: Vec<usize>,
}

/// Replaces every edge of length k by a path of k unit edges. Original vertices
/// keep their indices; new points are named `<edge>.<step>`.
pub fn subdivide_to_unit(g: &MetricGraph) -> Subdivision {
    let mut s = MetricGraph::new(g.name.clone());
    let mut vertex_origin = Vec::new();
    let mut edge_origin = Vec::new();
    for (i, v) in g.vertices().iter().enumerate() {
        s.add_vertex(v.clone()).expect("ids are unique");
        vertex_origin.push(SubdivisionOrigin::Vertex(i));
    }
    for (k, e) in g.edges().iter().enumerate() {
        if e.len == 1 {
            s.add_named_edge(e.id.clone(), e.u, e.v, 1)
                .expect("valid edge");
            edge_origin.push(k);
            continue;
        }
        let mut prev = e.u;
        for step in 1..=e.len {
            let next = if step == e.len {
                e.v
            } else {
                let mut name = format!("{}.{}", e.id, step);
                while s.vertex_index(&name).is_some() {
                    name.push('\'');
                }
                vertex_origin.push(SubdivisionOrigin::EdgePoint { edge: k, step });
                s.add_vertex(name).expect("fresh name")
            };
            s.add_named_edge(format!("{}.{}", e.id, step), prev, next, 1)
                .expect("valid edge");
            edge_origin.push(k);
            prev = next;
        }
    }
    Subdivision {
        graph: s,
        vertex_origin,
        edge_origin,
    }
}

/// Length-preserving isomorphism as a vertex map `g -> h`, if one exists.
pub fn is_isomorphic(g: &MetricGraph, h: &MetricGraph) -> Option<Vec<usize>> {
    iso::isomorphism(g, h)
}

/// Isometry of the metric realizations: isomorphism of the unit subdivisions.
pub fn is_isometric(g: &MetricGraph, h: &MetricGraph) -> bool {
    let a = subdivide_to_unit(g);
    let b = subdivide_to_unit(h);
    iso::isomorphism(&a.graph, &b.graph).is_some()
}

pub fn canonical_form(g: &MetricGraph) -> Vec<u8> {
    iso::canonical_form(g)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutomorphismGroup {
    pub generators: Vec<Vec<usize>>,
    pub order: u128,
}

pub fn automorphism_group(g: &MetricGraph) -> AutomorphismGroup {
    iso::automorphism_group(g)
}
