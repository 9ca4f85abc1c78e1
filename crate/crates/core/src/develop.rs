//! Finite pieces of universal covers: balls developed around a base vertex,
//! a check that they cover the quotient locally, and flat disks inside them.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use crate::complex::{self, EdgeEnd, End, Link, ShapeComplex, Side, LATTICE_DIRS};
use crate::error::{ComplexError, DevelopError};

#[derive(Debug, Clone)]
pub struct DevelopedBall {
    pub complex: ShapeComplex,
    pub quotient: ShapeComplex,
    pub base: usize,
    pub radius: usize,
    /// Edge distance from the base.
    pub dist: Vec<usize>,
    pub vertex_proj: Vec<usize>,
    /// Lifted edges keep the direction of the edge they cover.
    pub edge_proj: Vec<usize>,
    pub face_proj: Vec<usize>,
}

impl DevelopedBall {
    pub fn is_interior(&self, v: usize) -> bool {
        self.dist[v] < self.radius
    }

    pub fn interior(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.dist.len()).filter(|&v| self.is_interior(v))
    }

    /// Same ball with some faces removed, projections kept aligned.
    pub fn without_faces(&self, drop: &[usize]) -> DevelopedBall {
        let mut b = self.clone();
        b.complex = self.complex.remove_faces(drop);
        b.face_proj = (0..self.face_proj.len())
            .filter(|f| !drop.contains(f))
            .map(|f| self.face_proj[f])
            .collect();
        b
    }

    /// Complex text followed by a comment block listing each cell's image.
    pub fn to_text(&self) -> String {
        let mut out = self.complex.to_string();
        out.push_str("# projection\n");
        for (v, &p) in self.vertex_proj.iter().enumerate() {
            let _ = writeln!(
                out,
                "# vertex {} -> {} dist={}",
                self.complex.vertex_id(v),
                self.quotient.vertex_id(p),
                self.dist[v]
            );
        }
        for (e, &p) in self.edge_proj.iter().enumerate() {
            let _ = writeln!(
                out,
                "# edge {} -> {}",
                self.complex.edges()[e].id,
                self.quotient.edges()[p].id
            );
        }
        for (f, &p) in self.face_proj.iter().enumerate() {
            let _ = writeln!(
                out,
                "# face {} -> {}",
                self.complex.faces()[f].id,
                self.quotient.faces()[p].id
            );
        }
        out
    }
}

fn flip(end: End) -> End {
    match end {
        End::Src => End::Dst,
        End::Dst => End::Src,
    }
}

struct Builder<'a> {
    q: &'a ShapeComplex,
    links: Vec<Link>,
    ball: ShapeComplex,
    dist: Vec<usize>,
    vproj: Vec<usize>,
    eproj: Vec<usize>,
    fproj: Vec<usize>,
    at: Vec<HashMap<EdgeEnd, usize>>,
    corners: Vec<HashSet<(usize, usize)>>,
    complete: Vec<bool>,
}

impl Builder<'_> {
    fn new_vertex(&mut self, proj: usize, dist: usize) -> usize {
        let v = self
            .ball
            .add_vertex(format!("u{}", self.dist.len()))
            .expect("fresh name");
        self.dist.push(dist);
        self.vproj.push(proj);
        self.at.push(HashMap::new());
        self.corners.push(HashSet::new());
        self.complete.push(false);
        v
    }

    /// Lifts quotient edge `e` with its `end_at_x` end at `x` and the other at `y`.
    fn new_edge(&mut self, e: usize, x: usize, end_at_x: End, y: usize) -> usize {
        let (src, dst) = if end_at_x == End::Src { (x, y) } else { (y, x) };
        let k = self
            .ball
            .add_edge(format!("d{}", self.eproj.len()), src, dst)
            .expect("fresh name");
        self.eproj.push(e);
        self.at[x].insert((e, end_at_x), k);
        self.at[y].insert((e, flip(end_at_x)), k);
        k
    }

    fn far_end(&self, k: usize, from: usize) -> usize {
        let e = &self.ball.edges()[k];
        if e.src == from {
            e.dst
        } else {
            e.src
        }
    }

    fn complete(&mut self, w: usize) -> Result<(), DevelopError> {
        let qv = self.vproj[w];
        let ends = self.links[qv].ends.clone();
        for (e, end) in ends {
            if !self.at[w].contains_key(&(e, end)) {
                let x = self.new_vertex(self.q.edges()[e].at(flip(end)), self.dist[w] + 1);
                self.new_edge(e, w, end, x);
            }
        }
        let corners = self.links[qv].corners.clone();
        for (f, i) in corners {
            if self.corners[w].contains(&(f, i)) {
                continue;
            }
            let sides = self.q.faces()[f].sides.clone();
            if sides.len() != 3 {
                return Err(ComplexError::NotTriangulated(self.q.faces()[f].id.clone()).into());
            }
            let (s0, s1, s2) = (sides[i], sides[(i + 1) % 3], sides[(i + 2) % 3]);
            let in_edge = self.at[w][&(s0.edge, s0.head_end())];
            let out_edge = self.at[w][&(s1.edge, s1.tail_end())];
            let x = self.far_end(in_edge, w);
            let y = self.far_end(out_edge, w);
            let name = self.ball.vertex_id(w).to_string();
            let inconsistent = || DevelopError::Inconsistent(name.clone());
            if x == y || x == w || y == w {
                return Err(inconsistent());
            }
            let third = match (
                self.at[y].get(&(s2.edge, s2.tail_end())),
                self.at[x].get(&(s2.edge, s2.head_end())),
            ) {
                (Some(&a), Some(&b)) if a == b => a,
                (None, None) if !self.complete[x] && !self.complete[y] => {
                    self.new_edge(s2.edge, y, s2.tail_end(), x)
                }
                _ => return Err(inconsistent()),
            };
            let mut lifted = [Side {
                edge: 0,
                forward: true,
                angle: 2,
            }; 3];
            lifted[i] = Side {
                edge: in_edge,
                forward: s0.forward,
                angle: 2,
            };
            lifted[(i + 1) % 3] = Side {
                edge: out_edge,
                forward: s1.forward,
                angle: 2,
            };
            lifted[(i + 2) % 3] = Side {
                edge: third,
                forward: s2.forward,
                angle: 2,
            };
            self.ball
                .add_face(format!("t{}", self.fproj.len()), lifted.to_vec())?;
            self.fproj.push(f);
            for (v, c) in [(w, i), (x, (i + 2) % 3), (y, (i + 1) % 3)] {
                if !self.corners[v].insert((f, c)) {
                    return Err(inconsistent());
                }
            }
        }
        self.complete[w] = true;
        Ok(())
    }
}

/// Lifts the ball of edge radius `radius` around `base` in the universal cover
/// of a triangulated nonpositively curved complex without boundary.
pub fn develop_ball(
    c: &ShapeComplex,
    base: usize,
    radius: usize,
) -> Result<DevelopedBall, DevelopError> {
    if base >= c.vertex_count() {
        return Err(ComplexError::UnknownVertex(format!("#{base}")).into());
    }
    if let Some(f) = c
        .faces()
        .iter()
        .find(|f| f.sides.len() != 3 || f.sides.iter().any(|s| s.angle != 2))
    {
        return Err(ComplexError::NotTriangulated(f.id.clone()).into());
    }
    let report = complex::is_npc(c);
    if !report.npc {
        let (vertex, girth) = report
            .girths
            .iter()
            .find(|(_, g)| g.is_some_and(|x| x < 12))
            .cloned()
            .unwrap();
        return Err(ComplexError::NotNpc { vertex, girth }.into());
    }
    if let Some(v) = report.boundary.first() {
        return Err(ComplexError::HasBoundary(v.clone()).into());
    }
    let mut b = Builder {
        q: c,
        links: (0..c.vertex_count()).map(|v| c.link_data(v)).collect(),
        ball: ShapeComplex::new(format!("ball({},{},{})", c.name, c.vertex_id(base), radius)),
        dist: Vec::new(),
        vproj: Vec::new(),
        eproj: Vec::new(),
        fproj: Vec::new(),
        at: Vec::new(),
        corners: Vec::new(),
        complete: Vec::new(),
    };
    b.new_vertex(base, 0);
    // vertices are created in order of distance, so this is breadth-first
    let mut w = 0;
    while w < b.dist.len() && b.dist[w] < radius {
        b.complete(w)?;
        w += 1;
    }
    Ok(DevelopedBall {
        complex: b.ball,
        quotient: c.clone(),
        base: 0,
        radius,
        dist: b.dist,
        vertex_proj: b.vproj,
        edge_proj: b.eproj,
        face_proj: b.fproj,
    })
}

/// True iff the projection maps the link of every interior vertex bijectively
/// onto the link of its image, corner for corner.
pub fn verify_cover(b: &DevelopedBall) -> bool {
    let q = &b.quotient;
    let qlinks: Vec<Link> = (0..q.vertex_count()).map(|v| q.link_data(v)).collect();
    b.interior().all(|v| {
        let up = b.complex.link_data(v);
        let down = &qlinks[b.vertex_proj[v]];
        let mut ends: Vec<EdgeEnd> = up
            .ends
            .iter()
            .map(|&(e, end)| (b.edge_proj[e], end))
            .collect();
        let mut corners: Vec<(usize, usize)> = up
            .corners
            .iter()
            .map(|&(f, i)| (b.face_proj[f], i))
            .collect();
        ends.sort_unstable();
        corners.sort_unstable();
        let mut want_ends = down.ends.clone();
        let mut want_corners = down.corners.clone();
        want_ends.sort_unstable();
        want_corners.sort_unstable();
        ends == want_ends && corners == want_corners
    })
}

/// Hexagonal lattice points of the disk of radius `r`, ring by ring.
fn disk_points(r: usize) -> Vec<(i64, i64)> {
    let mut out = vec![(0, 0)];
    for k in 1..=r as i64 {
        for j in 0..6 {
            let (cx, cy) = LATTICE_DIRS[j];
            let (sx, sy) = LATTICE_DIRS[(j + 2) % 6];
            for s in 0..k {
                out.push((k * cx + s * sx, k * cy + s * sy));
            }
        }
    }
    out
}

struct FlatSearch<'a> {
    nb: &'a [Vec<usize>],
    edges: &'a HashSet<(usize, usize)>,
    triangles: &'a HashSet<[usize; 3]>,
    points: Vec<(i64, i64)>,
    index: BTreeMap<(i64, i64), usize>,
    image: Vec<usize>,
    used: HashSet<usize>,
}

impl FlatSearch<'_> {
    fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    fn has_triangle(&self, a: usize, b: usize, c: usize) -> bool {
        let mut t = [a, b, c];
        t.sort_unstable();
        self.triangles.contains(&t)
    }

    fn placed(&self, p: (i64, i64)) -> Option<usize> {
        self.index
            .get(&p)
            .filter(|&&i| i < self.image.len())
            .map(|&i| self.image[i])
    }

    fn fits(&self, p: (i64, i64), cand: usize) -> bool {
        for (k, &(dx, dy)) in LATTICE_DIRS.iter().enumerate() {
            let Some(a) = self.placed((p.0 + dx, p.1 + dy)) else {
                continue;
            };
            if !self.has_edge(cand, a) {
                return false;
            }
            let (ex, ey) = LATTICE_DIRS[(k + 1) % 6];
            if let Some(b) = self.placed((p.0 + ex, p.1 + ey)) {
                if !self.has_triangle(cand, a, b) {
                    return false;
                }
            }
        }
        true
    }

    fn run(&mut self) -> bool {
        let n = self.image.len();
        if n == self.points.len() {
            return true;
        }
        let p = self.points[n];
        let anchor = LATTICE_DIRS
            .iter()
            .find_map(|&(dx, dy)| self.placed((p.0 + dx, p.1 + dy)));
        let candidates: Vec<usize> = match anchor {
            Some(a) => self.nb[a].clone(),
            None => (0..self.nb.len()).collect(),
        };
        for cand in candidates {
            if self.used.contains(&cand) || !self.fits(p, cand) {
                continue;
            }
            self.image.push(cand);
            self.used.insert(cand);
            if self.run() {
                return true;
            }
            self.used.remove(&cand);
            self.image.pop();
        }
        false
    }
}

/// Whether a flat hexagonal disk of radius `r` centred at `v` embeds in the ball.
pub fn has_flat_disk(b: &DevelopedBall, v: usize, r: usize) -> bool {
    let c = &b.complex;
    let mut nb = vec![Vec::new(); c.vertex_count()];
    let mut edges = HashSet::new();
    for e in c.edges() {
        nb[e.src].push(e.dst);
        nb[e.dst].push(e.src);
        edges.insert((e.src.min(e.dst), e.src.max(e.dst)));
    }
    let triangles = c
        .faces()
        .iter()
        .map(|f| {
            let mut t = [0; 3];
            for (k, s) in f.sides.iter().enumerate() {
                t[k] = c.side_tail(s);
            }
            t.sort_unstable();
            t
        })
        .collect();
    let points = disk_points(r);
    let index = points.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut s = FlatSearch {
        nb: &nb,
        edges: &edges,
        triangles: &triangles,
        points,
        index,
        image: vec![v],
        used: HashSet::from([v]),
    };
    s.run()
}

/// Edge distance from `v` to the nearest frontier vertex of the ball.
pub fn frontier_distance(b: &DevelopedBall, v: usize) -> usize {
    let c = &b.complex;
    let mut nb = vec![Vec::new(); c.vertex_count()];
    for e in c.edges() {
        nb[e.src].push(e.dst);
        nb[e.dst].push(e.src);
    }
    let mut dist = vec![usize::MAX; c.vertex_count()];
    dist[v] = 0;
    let mut queue = VecDeque::from([v]);
    while let Some(x) = queue.pop_front() {
        if !b.is_interior(x) {
            return dist[x];
        }
        for &y in &nb[x] {
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    b.radius.saturating_sub(b.dist[v])
}

/// Largest radius of a flat disk centred at `v`, capped by the distance to the frontier.
pub fn flat_disk_radius(b: &DevelopedBall, v: usize) -> Result<usize, DevelopError> {
    if !b.is_interior(v) {
        return Err(DevelopError::NotInterior(v));
    }
    let cap = frontier_distance(b, v);
    let mut r = 0;
    while r < cap && has_flat_disk(b, v, r + 1) {
        r += 1;
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::catalog_complex;

    fn v6_0() -> ShapeComplex {
        complex::triangulate(&catalog_complex("V6_0").unwrap())
            .unwrap()
            .complex
    }

    #[test]
    fn disk_sizes() {
        for r in 0..4 {
            assert_eq!(disk_points(r).len(), 1 + 3 * r * (r + 1));
        }
    }

    #[test]
    fn radius_zero_is_a_point() {
        let b = develop_ball(&v6_0(), 0, 0).unwrap();
        assert_eq!(
            (
                b.complex.vertex_count(),
                b.complex.edge_count(),
                b.complex.face_count()
            ),
            (1, 0, 0)
        );
        assert!(verify_cover(&b));
    }

    #[test]
    fn star_is_a_cone_over_the_link() {
        let c = v6_0();
        let b = develop_ball(&c, 0, 1).unwrap();
        let link = c.link(0);
        assert_eq!(b.complex.vertex_count(), 1 + link.vertex_count());
        assert_eq!(b.complex.face_count(), link.edge_count());
        assert!(verify_cover(&b));
        assert!(!verify_cover(&b.without_faces(&[0])));
    }

    #[test]
    fn polygons_are_rejected() {
        let c = catalog_complex("V6_0").unwrap();
        assert!(matches!(
            develop_ball(&c, 0, 1),
            Err(DevelopError::Complex(ComplexError::NotTriangulated(_)))
        ));
    }

    #[test]
    fn frontier_vertices_are_not_centres() {
        let b = develop_ball(&v6_0(), 0, 1).unwrap();
        assert_eq!(flat_disk_radius(&b, 1), Err(DevelopError::NotInterior(1)));
    }
}
