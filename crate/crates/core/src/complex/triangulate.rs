use std::collections::HashMap;

use crate::error::ComplexError;

use super::{develop_boundary, ShapeComplex, Side};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellOrigin {
    Vertex(usize),
    Edge(usize),
    /// Created inside this face of the original complex.
    Face(usize),
}

#[derive(Debug, Clone)]
pub struct Triangulation {
    pub complex: ShapeComplex,
    pub vertex_origin: Vec<CellOrigin>,
    pub edge_origin: Vec<CellOrigin>,
    pub face_origin: Vec<usize>,
}

type Pt = (i64, i64);

/// Even-odd test for a point strictly inside the polygon (never on its boundary).
fn inside(p: Pt, poly: &[Pt]) -> bool {
    let mut crossings = 0;
    for i in 0..poly.len() {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        if (a.1 > p.1) == (b.1 > p.1) {
            continue;
        }
        // x-coordinate of the crossing compared with p.0, without division
        let lhs = (p.0 - a.0) * (b.1 - a.1);
        let rhs = (p.1 - a.1) * (b.0 - a.0);
        let right_of_p = if b.1 > a.1 { lhs < rhs } else { lhs > rhs };
        if right_of_p {
            crossings += 1;
        }
    }
    crossings % 2 == 1
}

/// Subdivides every face into unit lattice triangles. Original vertices and
/// edges keep their indices; new cells are named after the face they came from.
pub fn triangulate(c: &ShapeComplex) -> Result<Triangulation, ComplexError> {
    c.validate()?;
    let mut out = ShapeComplex::new(c.name.clone());
    for v in c.vertices() {
        out.add_vertex(v.clone())?;
    }
    for e in c.edges() {
        out.add_edge(e.id.clone(), e.src, e.dst)?;
    }
    let mut vertex_origin: Vec<CellOrigin> =
        (0..c.vertex_count()).map(CellOrigin::Vertex).collect();
    let mut edge_origin: Vec<CellOrigin> = (0..c.edge_count()).map(CellOrigin::Edge).collect();
    let mut face_origin = Vec::new();

    for (fi, f) in c.faces().iter().enumerate() {
        let pts =
            develop_boundary(f).ok_or_else(|| ComplexError::NotSimple { face: f.id.clone() })?;
        if f.sides.len() == 3 && f.sides.iter().all(|s| s.angle == 2) {
            out.add_face(f.id.clone(), f.sides.clone())?;
            face_origin.push(fi);
            continue;
        }
        let n = pts.len();
        let mut vertex_at: HashMap<Pt, usize> = HashMap::new();
        let mut side_at: HashMap<(Pt, Pt), &Side> = HashMap::new();
        for (i, s) in f.sides.iter().enumerate() {
            vertex_at.insert(pts[i], c.side_tail(s));
            side_at.insert((pts[i], pts[(i + 1) % n]), s);
        }
        let scaled: Vec<Pt> = pts.iter().map(|&(x, y)| (3 * x, 3 * y)).collect();
        let (x0, x1) = (
            pts.iter().map(|p| p.0).min().unwrap(),
            pts.iter().map(|p| p.0).max().unwrap(),
        );
        let (y0, y1) = (
            pts.iter().map(|p| p.1).min().unwrap(),
            pts.iter().map(|p| p.1).max().unwrap(),
        );

        let mut triangles: Vec<[Pt; 3]> = Vec::new();
        for x in x0..x1 {
            for y in y0..y1 {
                if inside((3 * x + 1, 3 * y + 1), &scaled) {
                    triangles.push([(x, y), (x + 1, y), (x, y + 1)]);
                }
                if inside((3 * x + 2, 3 * y + 2), &scaled) {
                    triangles.push([(x + 1, y), (x + 1, y + 1), (x, y + 1)]);
                }
            }
        }
        let doubled_area: i64 = (0..n)
            .map(|i| {
                let (a, b) = (pts[i], pts[(i + 1) % n]);
                a.0 * b.1 - a.1 * b.0
            })
            .sum();
        assert_eq!(
            doubled_area,
            triangles.len() as i64,
            "unit triangles tile the face"
        );

        let mut new_vertices = 0;
        let mut new_edges: HashMap<(Pt, Pt), usize> = HashMap::new();
        for (k, tri) in triangles.iter().enumerate() {
            for &p in tri {
                if let std::collections::hash_map::Entry::Vacant(e) = vertex_at.entry(p) {
                    let id = out.add_vertex(format!("{}.v{}", f.id, new_vertices))?;
                    new_vertices += 1;
                    vertex_origin.push(CellOrigin::Face(fi));
                    e.insert(id);
                }
            }
            let mut sides = Vec::with_capacity(3);
            for i in 0..3 {
                let (p, q) = (tri[i], tri[(i + 1) % 3]);
                let side = if let Some(s) = side_at.get(&(p, q)) {
                    Side {
                        edge: s.edge,
                        forward: s.forward,
                        angle: 2,
                    }
                } else if let Some(&e) = new_edges.get(&(p, q)) {
                    Side {
                        edge: e,
                        forward: true,
                        angle: 2,
                    }
                } else if let Some(&e) = new_edges.get(&(q, p)) {
                    Side {
                        edge: e,
                        forward: false,
                        angle: 2,
                    }
                } else {
                    let name = format!("{}.e{}", f.id, new_edges.len());
                    let e = out.add_edge(name, vertex_at[&p], vertex_at[&q])?;
                    edge_origin.push(CellOrigin::Face(fi));
                    new_edges.insert((p, q), e);
                    Side {
                        edge: e,
                        forward: true,
                        angle: 2,
                    }
                };
                sides.push(side);
            }
            out.add_face(format!("{}.t{}", f.id, k), sides)?;
            face_origin.push(fi);
        }
    }
    Ok(Triangulation {
        complex: out,
        vertex_origin,
        edge_origin,
        face_origin,
    })
}
