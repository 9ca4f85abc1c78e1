//! Searching for simplicial balls whose vertex links are all a given graph.
//!
//! Stars are completed one vertex at a time in order of distance from the
//! centre. A vertex at distance i only receives new neighbours at distance
//! i + 1, and two of its neighbours that are already adjacent always span a
//! triangle with it. These are the growth rules of balls in systolic complexes,
//! which covers the universal cover of any complex with such links.

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use crate::complex::{ShapeComplex, Side};
use crate::error::DevelopError;
use crate::iso;
use crate::mgraph::{self, MetricGraph, FULL_TURN};

#[derive(Debug, Clone)]
pub struct PrescribedBall {
    pub complex: ShapeComplex,
    pub base: usize,
    pub radius: usize,
    pub dist: Vec<usize>,
}

#[derive(Debug, Clone)]
pub enum Prescription {
    Sat(Box<PrescribedBall>),
    /// No ball of radius `depth` exists, while every smaller radius is reachable.
    Unsat {
        depth: usize,
    },
}

impl Prescription {
    pub fn is_sat(&self) -> bool {
        matches!(self, Prescription::Sat(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub best_radius: usize,
}

#[derive(Clone)]
struct Ball {
    dist: Vec<usize>,
    adj: Vec<BTreeSet<usize>>,
    tris: BTreeSet<[usize; 3]>,
    complete: Vec<bool>,
}

fn tri(a: usize, b: usize, c: usize) -> [usize; 3] {
    let mut t = [a, b, c];
    t.sort_unstable();
    t
}

impl Ball {
    fn add_vertex(&mut self, dist: usize) -> usize {
        self.dist.push(dist);
        self.adj.push(BTreeSet::new());
        self.complete.push(false);
        self.dist.len() - 1
    }

    fn connect(&mut self, a: usize, b: usize) {
        self.adj[a].insert(b);
        self.adj[b].insert(a);
    }

    fn has_tri(&self, a: usize, b: usize, c: usize) -> bool {
        self.tris.contains(&tri(a, b, c))
    }

    /// Neighbours of `w` and the pairs of them spanning a triangle with `w`.
    fn partial_link(&self, w: usize) -> (Vec<usize>, Vec<Vec<usize>>) {
        let ys: Vec<usize> = self.adj[w].iter().copied().collect();
        let mut nb = vec![Vec::new(); ys.len()];
        for i in 0..ys.len() {
            for j in i + 1..ys.len() {
                if self.has_tri(w, ys[i], ys[j]) {
                    nb[i].push(j);
                    nb[j].push(i);
                }
            }
        }
        (ys, nb)
    }

    fn to_complex(&self, name: &str) -> ShapeComplex {
        let mut c = ShapeComplex::new(name);
        for v in 0..self.dist.len() {
            c.add_vertex(format!("p{v}")).expect("fresh");
        }
        let mut edge_id = std::collections::HashMap::new();
        for a in 0..self.adj.len() {
            for &b in self.adj[a].range(a + 1..) {
                let k = c.add_edge(format!("p{a}p{b}"), a, b).expect("fresh");
                edge_id.insert((a, b), k);
            }
        }
        for (k, &[a, b, d]) in self.tris.iter().enumerate() {
            let sides = vec![
                Side {
                    edge: edge_id[&(a, b)],
                    forward: true,
                    angle: 2,
                },
                Side {
                    edge: edge_id[&(b, d)],
                    forward: true,
                    angle: 2,
                },
                Side {
                    edge: edge_id[&(a, d)],
                    forward: false,
                    angle: 2,
                },
            ];
            c.add_face(format!("t{k}"), sides).expect("closed triangle");
        }
        c
    }
}

struct Target {
    n: usize,
    adj: Vec<Vec<bool>>,
    nb: Vec<Vec<usize>>,
    max_degree: usize,
    group: Vec<Vec<usize>>,
}

struct Search<'a> {
    target: &'a Target,
    radius: usize,
    stats: SearchStats,
}

/// Assignment of the partial link at one vertex into the target.
struct Embedding<'a> {
    ball: &'a Ball,
    target: &'a Target,
    w: usize,
    ys: Vec<usize>,
    link_nb: Vec<Vec<usize>>,
    order: Vec<usize>,
    psi: Vec<Option<usize>>,
    used: Vec<bool>,
    found: Vec<Vec<usize>>,
}

impl Embedding<'_> {
    fn allowed(&self, i: usize, a: usize) -> bool {
        let t = self.target;
        let y = self.ys[i];
        if self.ball.complete[y] && t.nb[a].len() != self.link_nb[i].len() {
            return false;
        }
        if self.link_nb[i].len() > t.nb[a].len() {
            return false;
        }
        let level = self.ball.dist[self.w];
        for (j, &z) in self.ys.iter().enumerate() {
            let Some(b) = self.psi[j] else { continue };
            let linked = self.link_nb[i].contains(&j);
            let adjacent = self.ball.adj[y].contains(&z);
            if linked || adjacent {
                if !t.adj[a][b] {
                    return false;
                }
            } else if t.adj[a][b] {
                // a new edge yz is only possible one level further out
                let fresh = self.ball.complete[y] || self.ball.complete[z];
                if fresh || (self.ball.dist[y] <= level && self.ball.dist[z] <= level) {
                    return false;
                }
            }
        }
        true
    }

    fn run(&mut self, k: usize) {
        if k == self.order.len() {
            let psi: Vec<usize> = self.psi.iter().map(|p| p.unwrap()).collect();
            let smaller = self
                .target
                .group
                .iter()
                .any(|g| psi.iter().map(|&a| g[a]).lt(psi.iter().copied()));
            if !smaller {
                self.found.push(psi);
            }
            return;
        }
        let i = self.order[k];
        let anchor = self.link_nb[i].iter().find_map(|&j| self.psi[j]);
        let candidates: Vec<usize> = match anchor {
            Some(b) => self.target.nb[b].clone(),
            None => (0..self.target.n).collect(),
        };
        for a in candidates {
            if self.used[a] || !self.allowed(i, a) {
                continue;
            }
            self.psi[i] = Some(a);
            self.used[a] = true;
            self.run(k + 1);
            self.used[a] = false;
            self.psi[i] = None;
        }
    }
}

impl Search<'_> {
    fn embeddings(&self, ball: &Ball, w: usize) -> (Vec<usize>, Vec<Vec<usize>>) {
        let (ys, link_nb) = ball.partial_link(w);
        // most constrained first: follow link edges outward from the busiest vertex
        let mut order = Vec::new();
        let mut placed = vec![false; ys.len()];
        while order.len() < ys.len() {
            let next = (0..ys.len())
                .filter(|&i| !placed[i])
                .max_by_key(|&i| {
                    let attached = link_nb[i].iter().filter(|&&j| placed[j]).count();
                    (attached, link_nb[i].len(), std::cmp::Reverse(i))
                })
                .unwrap();
            placed[next] = true;
            order.push(next);
        }
        let mut e = Embedding {
            ball,
            target: self.target,
            w,
            ys,
            link_nb,
            order,
            psi: vec![None; ball.adj[w].len()],
            used: vec![false; self.target.n],
            found: Vec::new(),
        };
        e.run(0);
        (e.ys, e.found)
    }

    /// Completes the star of `w` along `psi`; `None` when a touched link can no
    /// longer fit inside the target.
    fn apply(&self, ball: &Ball, w: usize, ys: &[usize], psi: &[usize]) -> Option<Ball> {
        let t = self.target;
        let mut b = ball.clone();
        let mut at = vec![usize::MAX; t.n];
        for (&y, &a) in ys.iter().zip(psi) {
            at[a] = y;
        }
        for slot in at.iter_mut() {
            if *slot == usize::MAX {
                let x = b.add_vertex(ball.dist[w] + 1);
                b.connect(w, x);
                *slot = x;
            }
        }
        let mut touched = HashSet::new();
        for a in 0..t.n {
            for &c in &t.nb[a] {
                if c < a {
                    continue;
                }
                let (y, z) = (at[a], at[c]);
                if b.has_tri(w, y, z) {
                    continue;
                }
                b.connect(y, z);
                b.tris.insert(tri(w, y, z));
                touched.insert(y);
                touched.insert(z);
            }
        }
        b.complete[w] = true;
        for &y in &touched {
            if b.adj[y].len() > t.n || !self.fits_roughly(&b, y) {
                return None;
            }
        }
        Some(b)
    }

    /// Partial link of `y` has small enough degrees and no cycle shorter than six.
    fn fits_roughly(&self, b: &Ball, y: usize) -> bool {
        let (_, nb) = b.partial_link(y);
        if nb.iter().any(|n| n.len() > self.target.max_degree) {
            return false;
        }
        let mut g = MetricGraph::new("partial");
        for i in 0..nb.len() {
            g.add_vertex(i.to_string()).expect("fresh");
        }
        for (i, n) in nb.iter().enumerate() {
            for &j in n.iter().filter(|&&j| j > i) {
                g.add_edge(i, j, 2).expect("valid");
            }
        }
        mgraph::girth(&g).is_none_or(|x| x >= FULL_TURN)
    }

    fn reached(&self, b: &Ball) -> usize {
        (0..b.dist.len())
            .filter(|&v| !b.complete[v])
            .map(|v| b.dist[v])
            .min()
            .unwrap_or(self.radius)
            .min(self.radius)
    }

    fn run(&mut self, ball: Ball) -> Option<Ball> {
        self.stats.nodes += 1;
        let reached = self.reached(&ball);
        self.stats.best_radius = self.stats.best_radius.max(reached);
        if reached >= self.radius {
            return Some(ball);
        }
        let level = reached;
        let open: Vec<usize> = (0..ball.dist.len())
            .filter(|&v| !ball.complete[v] && ball.dist[v] == level)
            .collect();
        // branch on the vertex with the fewest completions
        let mut best: Option<(usize, Vec<usize>, Vec<Vec<usize>>)> = None;
        for &w in &open {
            let (ys, found) = self.embeddings(&ball, w);
            if best.as_ref().is_none_or(|(_, _, f)| found.len() < f.len()) {
                let done = found.is_empty();
                best = Some((w, ys, found));
                if done {
                    break;
                }
            }
        }
        let (w, ys, found) = best.expect("some vertex is open");
        for psi in found {
            if let Some(next) = self.apply(&ball, w, &ys, &psi) {
                if let Some(done) = self.run(next) {
                    return Some(done);
                }
            }
        }
        None
    }
}

/// Looks for a ball of edge radius `radius` in a simplicial complex all of
/// whose vertices within distance `radius - 1` of the centre have link `link`.
pub fn prescribe_link(
    link: &MetricGraph,
    radius: usize,
) -> Result<(Prescription, SearchStats), DevelopError> {
    if !link.all_lengths_equal(2)
        || mgraph::girth(link).is_some_and(|g| g < FULL_TURN)
        || link.edges().iter().any(|e| e.is_loop())
        || link.vertex_count() == 0
    {
        return Err(DevelopError::BadLink);
    }
    let n = link.vertex_count();
    let mut adj = vec![vec![false; n]; n];
    for e in link.edges() {
        adj[e.u][e.v] = true;
        adj[e.v][e.u] = true;
    }
    let nb: Vec<Vec<usize>> = (0..n)
        .map(|a| (0..n).filter(|&b| adj[a][b]).collect())
        .collect();
    let max_degree = nb.iter().map(Vec::len).max().unwrap_or(0);
    let aut = iso::automorphism_group(link);
    let group = iso::enumerate_group(&aut.generators, n);
    let target = Target {
        n,
        adj,
        nb,
        max_degree,
        group,
    };
    let mut s = Search {
        target: &target,
        radius,
        stats: SearchStats {
            nodes: 0,
            best_radius: 0,
        },
    };
    let mut start = Ball {
        dist: Vec::new(),
        adj: Vec::new(),
        tris: BTreeSet::new(),
        complete: Vec::new(),
    };
    start.add_vertex(0);
    let result = match s.run(start) {
        Some(b) => Prescription::Sat(Box::new(PrescribedBall {
            complex: b.to_complex(&format!("prescribed({},{radius})", link.name)),
            base: 0,
            radius,
            dist: b.dist,
        })),
        None => Prescription::Unsat {
            depth: s.stats.best_radius + 1,
        },
    };
    Ok((result, s.stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane;

    fn hexagon() -> MetricGraph {
        let mut g = MetricGraph::new("hex");
        for i in 0..6 {
            g.add_vertex(i.to_string()).unwrap();
        }
        for i in 0..6 {
            g.add_edge(i, (i + 1) % 6, 2).unwrap();
        }
        g
    }

    #[test]
    fn hexagon_links_give_the_flat_plane() {
        let (p, _) = prescribe_link(&hexagon(), 3).unwrap();
        let Prescription::Sat(b) = p else {
            panic!("the flat plane exists")
        };
        // disk of radius 3 plus the outer ring: 1 + 6 + 12 + 18 vertices
        assert_eq!(b.complex.vertex_count(), 37);
        assert_eq!(b.complex.face_count(), 54);
    }

    #[test]
    fn stars_always_exist() {
        let h = plane::incidence_graph(2).unwrap();
        let (p, _) = prescribe_link(&h, 1).unwrap();
        assert!(p.is_sat());
    }

    #[test]
    fn short_cycles_are_refused() {
        let mut g = MetricGraph::new("square");
        for i in 0..4 {
            g.add_vertex(i.to_string()).unwrap();
        }
        for i in 0..4 {
            g.add_edge(i, (i + 1) % 4, 2).unwrap();
        }
        assert!(matches!(prescribe_link(&g, 1), Err(DevelopError::BadLink)));
    }

    #[test]
    fn witnesses_have_the_prescribed_links() {
        let g6 = crate::surgery::catalog_graph("G6").unwrap();
        let (p, _) = prescribe_link(&g6, 2).unwrap();
        let Prescription::Sat(b) = p else {
            panic!("G6 balls exist")
        };
        b.complex.validate().unwrap();
        for v in (0..b.dist.len()).filter(|&v| b.dist[v] < 2) {
            assert!(mgraph::is_isomorphic(&b.complex.link(v), &g6).is_some());
        }
    }
}
