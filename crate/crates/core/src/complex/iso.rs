use std::collections::VecDeque;

use super::{ShapeComplex, Side};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IsoMode {
    /// Edges may be flipped and faces read backwards (mirror images match).
    #[default]
    Default,
    /// Edge directions and face orientations must be preserved.
    Strict,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexIso {
    pub vertex_map: Vec<usize>,
    /// Image edge and whether its direction is reversed.
    pub edge_map: Vec<(usize, bool)>,
    /// Image face, rotation, and whether it is read backwards.
    pub face_map: Vec<(usize, usize, bool)>,
}

#[derive(Clone)]
struct State {
    vmap: Vec<Option<usize>>,
    vinv: Vec<Option<usize>>,
    emap: Vec<Option<(usize, bool)>>,
    einv: Vec<Option<usize>>,
    fmap: Vec<Option<(usize, usize, bool)>>,
    finv: Vec<bool>,
}

impl State {
    fn map_vertex(&mut self, a: usize, b: usize) -> bool {
        match (self.vmap[a], self.vinv[b]) {
            (Some(x), _) => x == b,
            (None, Some(_)) => false,
            (None, None) => {
                self.vmap[a] = Some(b);
                self.vinv[b] = Some(a);
                true
            }
        }
    }

    fn map_edge(
        &mut self,
        c1: &ShapeComplex,
        c2: &ShapeComplex,
        e: usize,
        img: usize,
        flip: bool,
    ) -> bool {
        match (self.emap[e], self.einv[img]) {
            (Some(x), _) => return x == (img, flip),
            (None, Some(_)) => return false,
            (None, None) => {}
        }
        self.emap[e] = Some((img, flip));
        self.einv[img] = Some(e);
        let (a, b) = (&c1.edges()[e], &c2.edges()[img]);
        let (s2, d2) = if flip { (b.dst, b.src) } else { (b.src, b.dst) };
        self.map_vertex(a.src, s2) && self.map_vertex(a.dst, d2)
    }
}

/// Face read from position `rot`, optionally backwards.
fn variant(sides: &[Side], rot: usize, rev: bool) -> Vec<Side> {
    let n = sides.len();
    let base: Vec<Side> = if rev {
        (0..n)
            .map(|k| {
                let s = sides[n - 1 - k];
                let angle = sides[(2 * n - 2 - k) % n].angle;
                Side {
                    edge: s.edge,
                    forward: !s.forward,
                    angle,
                }
            })
            .collect()
    } else {
        sides.to_vec()
    };
    (0..n).map(|k| base[(k + rot) % n]).collect()
}

struct Ctx<'a> {
    c1: &'a ShapeComplex,
    c2: &'a ShapeComplex,
    mode: IsoMode,
    order: Vec<usize>,
    faces_of_edge2: Vec<Vec<usize>>,
    loose_edges: Vec<usize>,
}

impl Ctx<'_> {
    fn try_face(&self, st: &mut State, f: usize, g: usize, rot: usize, rev: bool) -> bool {
        let fs = &self.c1.faces()[f].sides;
        let gs = variant(&self.c2.faces()[g].sides, rot, rev);
        for (a, b) in fs.iter().zip(&gs) {
            if a.angle != b.angle {
                return false;
            }
            let flip = a.forward != b.forward;
            if flip && self.mode == IsoMode::Strict {
                return false;
            }
            if !st.map_edge(self.c1, self.c2, a.edge, b.edge, flip) {
                return false;
            }
        }
        st.fmap[f] = Some((g, rot, rev));
        st.finv[g] = true;
        true
    }

    fn faces(&self, st: State, depth: usize) -> Option<State> {
        if depth == self.order.len() {
            return self.edges(st, 0);
        }
        let f = self.order[depth];
        let fs = &self.c1.faces()[f].sides;
        let n = fs.len();
        let anchored = fs.iter().find_map(|s| st.emap[s.edge].map(|(img, _)| img));
        let candidates: Vec<usize> = match anchored {
            Some(img) => self.faces_of_edge2[img].clone(),
            None => (0..self.c2.face_count()).collect(),
        };
        let revs: &[bool] = if self.mode == IsoMode::Strict {
            &[false]
        } else {
            &[false, true]
        };
        for g in candidates {
            if st.finv[g] || self.c2.faces()[g].sides.len() != n {
                continue;
            }
            for &rev in revs {
                for rot in 0..n {
                    let mut next = st.clone();
                    if self.try_face(&mut next, f, g, rot, rev) {
                        if let Some(done) = self.faces(next, depth + 1) {
                            return Some(done);
                        }
                    }
                }
            }
        }
        None
    }

    fn edges(&self, st: State, k: usize) -> Option<State> {
        if k == self.loose_edges.len() {
            return self.vertices(st);
        }
        let e = self.loose_edges[k];
        for img in 0..self.c2.edge_count() {
            if st.einv[img].is_some() {
                continue;
            }
            let flips: &[bool] = if self.mode == IsoMode::Strict {
                &[false]
            } else {
                &[false, true]
            };
            for &flip in flips {
                let mut next = st.clone();
                if next.map_edge(self.c1, self.c2, e, img, flip) {
                    if let Some(done) = self.edges(next, k + 1) {
                        return Some(done);
                    }
                }
            }
        }
        None
    }

    fn vertices(&self, mut st: State) -> Option<State> {
        let free: Vec<usize> = (0..self.c2.vertex_count())
            .filter(|&b| st.vinv[b].is_none())
            .collect();
        let mut it = free.into_iter();
        for a in 0..self.c1.vertex_count() {
            if st.vmap[a].is_none() {
                let b = it.next()?;
                st.map_vertex(a, b);
            }
        }
        Some(st)
    }
}

/// Cellular isomorphism `c1 -> c2` respecting angles and orientations
/// (up to mirror images in the default mode).
pub fn complex_isomorphic(
    c1: &ShapeComplex,
    c2: &ShapeComplex,
    mode: IsoMode,
) -> Option<ComplexIso> {
    if c1.vertex_count() != c2.vertex_count()
        || c1.edge_count() != c2.edge_count()
        || c1.face_count() != c2.face_count()
    {
        return None;
    }
    let profile = |c: &ShapeComplex| {
        let mut p: Vec<Vec<u32>> = c
            .faces()
            .iter()
            .map(|f| {
                let mut a: Vec<u32> = f.sides.iter().map(|s| s.angle).collect();
                a.sort_unstable();
                a
            })
            .collect();
        p.sort();
        let mut v = c.face_valencies();
        v.sort_unstable();
        (p, v)
    };
    if profile(c1) != profile(c2) {
        return None;
    }

    let mut faces_of_edge1 = vec![Vec::new(); c1.edge_count()];
    for (fi, f) in c1.faces().iter().enumerate() {
        for s in &f.sides {
            faces_of_edge1[s.edge].push(fi);
        }
    }
    let mut faces_of_edge2 = vec![Vec::new(); c2.edge_count()];
    for (fi, f) in c2.faces().iter().enumerate() {
        for s in &f.sides {
            if faces_of_edge2[s.edge].last() != Some(&fi) {
                faces_of_edge2[s.edge].push(fi);
            }
        }
    }
    // breadth-first over face adjacency, so that later faces are anchored
    let mut order = Vec::new();
    let mut placed = vec![false; c1.face_count()];
    for start in 0..c1.face_count() {
        if placed[start] {
            continue;
        }
        placed[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(f) = queue.pop_front() {
            order.push(f);
            for s in &c1.faces()[f].sides {
                for &g in &faces_of_edge1[s.edge] {
                    if !placed[g] {
                        placed[g] = true;
                        queue.push_back(g);
                    }
                }
            }
        }
    }
    let loose_edges = (0..c1.edge_count())
        .filter(|&e| faces_of_edge1[e].is_empty())
        .collect();
    let ctx = Ctx {
        c1,
        c2,
        mode,
        order,
        faces_of_edge2,
        loose_edges,
    };
    let st = State {
        vmap: vec![None; c1.vertex_count()],
        vinv: vec![None; c2.vertex_count()],
        emap: vec![None; c1.edge_count()],
        einv: vec![None; c2.edge_count()],
        fmap: vec![None; c1.face_count()],
        finv: vec![false; c2.face_count()],
    };
    let done = ctx.faces(st, 0)?;
    Some(ComplexIso {
        vertex_map: done.vmap.into_iter().map(Option::unwrap).collect(),
        edge_map: done.emap.into_iter().map(Option::unwrap).collect(),
        face_map: done.fmap.into_iter().map(Option::unwrap).collect(),
    })
}
