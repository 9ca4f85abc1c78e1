//! Polygonal complexes given by gluing diagrams: faces are cyclic words of
//! oriented edges, each side followed by the interior angle at its head.

mod catalog;
mod homology;
mod iso;
mod triangulate;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{ComplexError, ParseError};
use crate::mgraph::{self, MetricGraph, FULL_TURN};

pub use catalog::{catalog_complex, catalog_complexes, catalog_source, CATALOG_NAMES};
pub use homology::{homology_h1, presentation, smith_invariants, H1Result, Presentation};
pub use iso::{complex_isomorphic, ComplexIso, IsoMode};
pub use triangulate::{triangulate, CellOrigin, Triangulation};

/// Unit steps of the triangular lattice in the basis (1,0), (1/2, √3/2).
pub const LATTICE_DIRS: [(i64, i64); 6] = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum End {
    Src,
    Dst,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CEdge {
    pub id: String,
    pub src: usize,
    pub dst: usize,
}

impl CEdge {
    pub fn at(&self, end: End) -> usize {
        match end {
            End::Src => self.src,
            End::Dst => self.dst,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Side {
    pub edge: usize,
    pub forward: bool,
    /// Interior angle at the head of this side, in units of π/6.
    pub angle: u32,
}

impl Side {
    pub fn tail_end(&self) -> End {
        if self.forward {
            End::Src
        } else {
            End::Dst
        }
    }

    pub fn head_end(&self) -> End {
        if self.forward {
            End::Dst
        } else {
            End::Src
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Face {
    pub id: String,
    pub sides: Vec<Side>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ShapeComplex {
    pub name: String,
    vertices: Vec<String>,
    edges: Vec<CEdge>,
    faces: Vec<Face>,
    vindex: HashMap<String, usize>,
    eindex: HashMap<String, usize>,
}

/// A link vertex: one end of an edge at the vertex.
pub type EdgeEnd = (usize, End);

/// Link of a vertex with the cell data behind each link vertex and link edge.
#[derive(Debug, Clone)]
pub struct Link {
    pub graph: MetricGraph,
    pub ends: Vec<EdgeEnd>,
    /// (face, corner) behind each link edge; corner i sits at the head of side i.
    pub corners: Vec<(usize, usize)>,
}

impl ShapeComplex {
    pub fn new(name: impl Into<String>) -> Self {
        ShapeComplex {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn add_vertex(&mut self, id: impl Into<String>) -> Result<usize, ComplexError> {
        let id = id.into();
        if self.vindex.contains_key(&id) {
            return Err(ComplexError::Invalid(format!("duplicate vertex `{id}`")));
        }
        self.vindex.insert(id.clone(), self.vertices.len());
        self.vertices.push(id);
        Ok(self.vertices.len() - 1)
    }

    pub fn add_edge(
        &mut self,
        id: impl Into<String>,
        src: usize,
        dst: usize,
    ) -> Result<usize, ComplexError> {
        let id = id.into();
        if self.eindex.contains_key(&id) {
            return Err(ComplexError::Invalid(format!("duplicate edge `{id}`")));
        }
        if src >= self.vertices.len() || dst >= self.vertices.len() {
            return Err(ComplexError::Invalid(format!(
                "edge `{id}` uses an unknown vertex"
            )));
        }
        self.eindex.insert(id.clone(), self.edges.len());
        self.edges.push(CEdge { id, src, dst });
        Ok(self.edges.len() - 1)
    }

    pub fn add_face(
        &mut self,
        id: impl Into<String>,
        sides: Vec<Side>,
    ) -> Result<usize, ComplexError> {
        let id = id.into();
        if sides.iter().any(|s| s.edge >= self.edges.len()) {
            return Err(ComplexError::Invalid(format!(
                "face `{id}` uses an unknown edge"
            )));
        }
        self.faces.push(Face { id, sides });
        Ok(self.faces.len() - 1)
    }

    pub fn remove_faces(&self, drop: &[usize]) -> ShapeComplex {
        let mut c = self.clone();
        c.faces = self
            .faces
            .iter()
            .enumerate()
            .filter(|(k, _)| !drop.contains(k))
            .map(|(_, f)| f.clone())
            .collect();
        c
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[CEdge] {
        &self.edges
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn vertex_id(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vindex.get(id).copied()
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.eindex.get(id).copied()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    pub fn side_tail(&self, s: &Side) -> usize {
        self.edges[s.edge].at(s.tail_end())
    }

    pub fn side_head(&self, s: &Side) -> usize {
        self.edges[s.edge].at(s.head_end())
    }

    /// Number of face sides running along each edge.
    pub fn face_valencies(&self) -> Vec<usize> {
        let mut val = vec![0; self.edges.len()];
        for f in &self.faces {
            for s in &f.sides {
                val[s.edge] += 1;
            }
        }
        val
    }

    pub fn is_triangulated(&self) -> bool {
        self.faces
            .iter()
            .all(|f| f.sides.len() == 3 && f.sides.iter().all(|s| s.angle == 2))
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return false;
        }
        let mut nb = vec![Vec::new(); self.vertices.len()];
        for e in &self.edges {
            nb[e.src].push(e.dst);
            nb[e.dst].push(e.src);
        }
        mgraph::bfs(&nb, 0).iter().all(|d| d.is_some())
    }

    pub fn validate(&self) -> Result<(), ComplexError> {
        for f in &self.faces {
            let n = f.sides.len();
            if n < 3 {
                return Err(ComplexError::TooFewSides { face: f.id.clone() });
            }
            for (i, s) in f.sides.iter().enumerate() {
                let next = &f.sides[(i + 1) % n];
                let head = self.side_head(s);
                let tail = self.side_tail(next);
                if head != tail {
                    return Err(ComplexError::OpenBoundary {
                        face: f.id.clone(),
                        side: i,
                        head: self.vertices[head].clone(),
                        tail: self.vertices[tail].clone(),
                    });
                }
                if s.angle == 0 || s.angle % 2 != 0 || s.angle as u64 >= FULL_TURN {
                    return Err(ComplexError::BadAngle {
                        face: f.id.clone(),
                        side: i,
                        angle: s.angle,
                    });
                }
            }
            let sum: u32 = f.sides.iter().map(|s| s.angle).sum();
            let expected = 6 * (n as u32 - 2);
            if sum != expected {
                return Err(ComplexError::AngleSum {
                    face: f.id.clone(),
                    sum,
                    expected,
                });
            }
            if develop_boundary(f).is_none() {
                return Err(ComplexError::NotSimple { face: f.id.clone() });
            }
        }
        Ok(())
    }

    /// Edge-ends at `v`, in edge order with the source end first.
    pub fn ends_at(&self, v: usize) -> Vec<EdgeEnd> {
        let mut out = Vec::new();
        for (k, e) in self.edges.iter().enumerate() {
            if e.src == v {
                out.push((k, End::Src));
            }
            if e.dst == v {
                out.push((k, End::Dst));
            }
        }
        out
    }

    pub fn end_name(&self, (e, end): EdgeEnd) -> String {
        let tag = match end {
            End::Src => "s",
            End::Dst => "t",
        };
        format!("{}.{}", self.edges[e].id, tag)
    }

    pub fn link_data(&self, v: usize) -> Link {
        let ends = self.ends_at(v);
        let mut g = MetricGraph::new(format!("link({})", self.vertices[v]));
        let mut pos = HashMap::new();
        for (i, &end) in ends.iter().enumerate() {
            g.add_vertex(self.end_name(end))
                .expect("edge-end names are unique");
            pos.insert(end, i);
        }
        let mut corners = Vec::new();
        for (fi, f) in self.faces.iter().enumerate() {
            let n = f.sides.len();
            for (i, s) in f.sides.iter().enumerate() {
                if self.side_head(s) != v {
                    continue;
                }
                let next = &f.sides[(i + 1) % n];
                let a = pos[&(s.edge, s.head_end())];
                let b = pos[&(next.edge, next.tail_end())];
                g.add_named_edge(format!("{}.{}", f.id, i), a, b, s.angle)
                    .expect("valid");
                corners.push((fi, i));
            }
        }
        Link {
            graph: g,
            ends,
            corners,
        }
    }

    pub fn link(&self, v: usize) -> MetricGraph {
        self.link_data(v).graph
    }

    pub fn link_by_id(&self, id: &str) -> Result<MetricGraph, ComplexError> {
        let v = self
            .vertex_index(id)
            .ok_or_else(|| ComplexError::UnknownVertex(id.into()))?;
        Ok(self.link(v))
    }

    pub fn parse(text: &str) -> Result<ShapeComplex, ParseError> {
        let mut c: Option<ShapeComplex> = None;
        for (ln, raw) in text.lines().enumerate() {
            let line = ln + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let toks: Vec<&str> = body.split_whitespace().collect();
            let syntax = |msg: &str| ParseError::Syntax {
                line,
                msg: msg.to_string(),
            };
            match (toks[0], c.as_mut()) {
                ("complex", None) => {
                    c = Some(ShapeComplex::new(toks.get(1).copied().unwrap_or("")))
                }
                ("complex", Some(_)) => return Err(syntax("second header")),
                (_, None) => {
                    return Err(ParseError::MissingHeader {
                        expected: "complex",
                    })
                }
                ("vertex", Some(c)) => {
                    if toks.len() != 2 {
                        return Err(syntax("expected `vertex <id>`"));
                    }
                    c.add_vertex(toks[1]).map_err(|_| ParseError::Duplicate {
                        line,
                        id: toks[1].into(),
                    })?;
                }
                ("edge", Some(c)) => {
                    if toks.len() != 4 {
                        return Err(syntax("expected `edge <id> <src> <dst>`"));
                    }
                    let look = |id: &str| {
                        c.vertex_index(id).ok_or_else(|| ParseError::UnknownVertex {
                            line,
                            id: id.into(),
                        })
                    };
                    let (s, d) = (look(toks[2])?, look(toks[3])?);
                    c.add_edge(toks[1], s, d)
                        .map_err(|_| ParseError::Duplicate {
                            line,
                            id: toks[1].into(),
                        })?;
                }
                ("face", Some(c)) => {
                    if toks.len() < 2 || !toks.len().is_multiple_of(2) {
                        return Err(syntax("expected `face <id> <edge>:<+|-> <angle> ...`"));
                    }
                    let mut sides = Vec::new();
                    for pair in toks[2..].chunks(2) {
                        let (name, sign) = pair[0]
                            .rsplit_once(':')
                            .ok_or_else(|| syntax(&format!("bad side `{}`", pair[0])))?;
                        let forward = match sign {
                            "+" => true,
                            "-" => false,
                            _ => return Err(syntax(&format!("bad orientation `{sign}`"))),
                        };
                        let edge = c.edge_index(name).ok_or_else(|| ParseError::UnknownEdge {
                            line,
                            id: name.into(),
                        })?;
                        let angle: u32 = pair[1]
                            .parse()
                            .map_err(|_| syntax(&format!("bad angle `{}`", pair[1])))?;
                        sides.push(Side {
                            edge,
                            forward,
                            angle,
                        });
                    }
                    c.add_face(toks[1], sides)
                        .map_err(|e| syntax(&e.to_string()))?;
                }
                (other, Some(_)) => return Err(syntax(&format!("unknown keyword `{other}`"))),
            }
        }
        c.ok_or(ParseError::MissingHeader {
            expected: "complex",
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let j = ComplexJson {
            name: self.name.clone(),
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeJson {
                    id: e.id.clone(),
                    src: self.vertices[e.src].clone(),
                    dst: self.vertices[e.dst].clone(),
                })
                .collect(),
            faces: self
                .faces
                .iter()
                .map(|f| FaceJson {
                    id: f.id.clone(),
                    sides: f
                        .sides
                        .iter()
                        .map(|s| SideJson {
                            edge: self.edges[s.edge].id.clone(),
                            forward: s.forward,
                            angle: s.angle,
                        })
                        .collect(),
                })
                .collect(),
        };
        serde_json::to_value(j).expect("plain data serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<ShapeComplex, ParseError> {
        let j: ComplexJson =
            serde_json::from_value(value.clone()).map_err(|e| ParseError::Json(e.to_string()))?;
        let bad = |e: ComplexError| ParseError::Json(e.to_string());
        let mut c = ShapeComplex::new(j.name);
        for v in j.vertices {
            c.add_vertex(v).map_err(bad)?;
        }
        for e in j.edges {
            let s = c
                .vertex_index(&e.src)
                .ok_or_else(|| ParseError::Json(format!("unknown vertex {}", e.src)))?;
            let d = c
                .vertex_index(&e.dst)
                .ok_or_else(|| ParseError::Json(format!("unknown vertex {}", e.dst)))?;
            c.add_edge(e.id, s, d).map_err(bad)?;
        }
        for f in j.faces {
            let mut sides = Vec::new();
            for s in f.sides {
                let edge = c
                    .edge_index(&s.edge)
                    .ok_or_else(|| ParseError::Json(format!("unknown edge {}", s.edge)))?;
                sides.push(Side {
                    edge,
                    forward: s.forward,
                    angle: s.angle,
                });
            }
            c.add_face(f.id, sides).map_err(bad)?;
        }
        Ok(c)
    }
}

#[derive(Serialize, Deserialize)]
struct ComplexJson {
    name: String,
    vertices: Vec<String>,
    edges: Vec<EdgeJson>,
    faces: Vec<FaceJson>,
}

#[derive(Serialize, Deserialize)]
struct EdgeJson {
    id: String,
    src: String,
    dst: String,
}

#[derive(Serialize, Deserialize)]
struct FaceJson {
    id: String,
    sides: Vec<SideJson>,
}

#[derive(Serialize, Deserialize)]
struct SideJson {
    edge: String,
    forward: bool,
    angle: u32,
}

impl fmt::Display for ShapeComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "complex {}", self.name)?;
        for v in &self.vertices {
            writeln!(f, "vertex {v}")?;
        }
        for e in &self.edges {
            writeln!(
                f,
                "edge {} {} {}",
                e.id, self.vertices[e.src], self.vertices[e.dst]
            )?;
        }
        for face in &self.faces {
            write!(f, "face {}", face.id)?;
            for s in &face.sides {
                let sign = if s.forward { '+' } else { '-' };
                write!(f, " {}:{} {}", self.edges[s.edge].id, sign, s.angle)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Lattice points at the tails of the sides when the boundary is traced
/// counterclockwise with unit steps; `None` unless it closes up simply.
pub fn develop_boundary(face: &Face) -> Option<Vec<(i64, i64)>> {
    let mut pos = (0i64, 0i64);
    let mut dir = 0usize;
    let mut pts = Vec::with_capacity(face.sides.len());
    for s in &face.sides {
        if s.angle % 2 != 0 || s.angle == 0 || s.angle >= 12 {
            return None;
        }
        pts.push(pos);
        let (dx, dy) = LATTICE_DIRS[dir];
        pos = (pos.0 + dx, pos.1 + dy);
        let turn = 3 - (s.angle as i64) / 2;
        dir = (dir as i64 + turn).rem_euclid(6) as usize;
    }
    if pos != (0, 0) || dir != 0 {
        return None;
    }
    let mut sorted = pts.clone();
    sorted.sort_unstable();
    sorted.dedup();
    (sorted.len() == pts.len()).then_some(pts)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NpcReport {
    pub npc: bool,
    pub girths: Vec<(String, Option<u64>)>,
    /// Vertices whose link has a vertex of valency at most 1.
    pub boundary: Vec<String>,
}

pub fn is_npc(c: &ShapeComplex) -> NpcReport {
    let mut girths = Vec::new();
    let mut boundary = Vec::new();
    let mut npc = true;
    for v in 0..c.vertex_count() {
        let l = c.link(v);
        let g = mgraph::girth(&l);
        if g.is_some_and(|x| x < FULL_TURN) {
            npc = false;
        }
        if l.vertex_count() == 0 || l.valencies().iter().any(|&d| d <= 1) {
            boundary.push(c.vertex_id(v).to_string());
        }
        girths.push((c.vertex_id(v).to_string(), g));
    }
    NpcReport {
        npc,
        girths,
        boundary,
    }
}
