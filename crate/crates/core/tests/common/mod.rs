//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use chambers_core::develop::DevelopedBall;
use chambers_core::MetricGraph;

/// Shortest cycle length by enumerating every simple cycle (small graphs only).
pub fn brute_girth(g: &MetricGraph) -> Option<u64> {
    let mut best: Option<u64> = None;
    for e in g.edges() {
        if e.is_loop() {
            best = Some(best.map_or(e.len as u64, |b| b.min(e.len as u64)));
        }
    }
    for (i, a) in g.edges().iter().enumerate() {
        for b in &g.edges()[i + 1..] {
            let same = (a.u == b.u && a.v == b.v) || (a.u == b.v && a.v == b.u);
            if same && !a.is_loop() {
                let l = (a.len + b.len) as u64;
                best = Some(best.map_or(l, |x| x.min(l)));
            }
        }
    }
    // cycles through at least three distinct vertices, rooted at their smallest vertex
    let inc = g.incidence();
    for s in 0..g.vertex_count() {
        let mut on_path = vec![false; g.vertex_count()];
        on_path[s] = true;
        extend_paths(g, &inc, s, s, 0, 1, 0, &mut on_path, &mut best);
    }
    best
}

#[allow(clippy::too_many_arguments)]
fn extend_paths(
    g: &MetricGraph,
    inc: &[Vec<(usize, usize)>],
    s: usize,
    at: usize,
    len: u64,
    depth: usize,
    last_edge: usize,
    on_path: &mut Vec<bool>,
    best: &mut Option<u64>,
) {
    for &(e, y) in &inc[at] {
        let edge = &g.edges()[e];
        if edge.is_loop() || (depth > 1 && e == last_edge) {
            continue;
        }
        let l = len + edge.len as u64;
        if y == s && depth >= 3 {
            *best = Some(best.map_or(l, |b| b.min(l)));
        } else if y > s && !on_path[y] {
            on_path[y] = true;
            extend_paths(g, inc, s, y, l, depth + 1, e, on_path, best);
            on_path[y] = false;
        }
    }
}

/// Number of k-sets of pairwise vertex-disjoint edges, by plain combinations.
pub fn brute_matchings(g: &MetricGraph, k: usize) -> usize {
    fn go(g: &MetricGraph, k: usize, from: usize, used: &mut BTreeSet<usize>) -> usize {
        if k == 0 {
            return 1;
        }
        let mut n = 0;
        for i in from..g.edge_count() {
            let e = &g.edges()[i];
            if used.contains(&e.u) || used.contains(&e.v) {
                continue;
            }
            used.insert(e.u);
            used.insert(e.v);
            n += go(g, k - 1, i + 1, used);
            used.remove(&e.u);
            used.remove(&e.v);
        }
        n
    }
    go(g, k, 0, &mut BTreeSet::new())
}

/// Flat disk search that unfolds lattice triangles across shared edges,
/// rather than placing lattice vertices one at a time.
pub struct FaceUnfolder {
    third: BTreeMap<(usize, usize), Vec<usize>>,
    stars: Vec<Vec<(usize, usize)>>,
}

fn key(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

fn hex_norm((x, y): (i64, i64)) -> i64 {
    x.abs().max(y.abs()).max((x + y).abs())
}

impl FaceUnfolder {
    pub fn new(b: &DevelopedBall) -> FaceUnfolder {
        let c = &b.complex;
        let mut third: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        let mut stars = vec![Vec::new(); c.vertex_count()];
        for f in c.faces() {
            let t: Vec<usize> = f.sides.iter().map(|s| c.side_tail(s)).collect();
            for i in 0..3 {
                let (a, b2, o) = (t[i], t[(i + 1) % 3], t[(i + 2) % 3]);
                third.entry(key(a, b2)).or_default().push(o);
            }
            for i in 0..3 {
                stars[t[i]].push((t[(i + 1) % 3], t[(i + 2) % 3]));
            }
        }
        FaceUnfolder { third, stars }
    }

    fn lattice(r: i64) -> Vec<[(i64, i64); 3]> {
        let mut tris = Vec::new();
        for x in -r..=r {
            for y in -r..=r {
                let up = [(x, y), (x + 1, y), (x, y + 1)];
                let down = [(x + 1, y), (x + 1, y + 1), (x, y + 1)];
                for t in [up, down] {
                    if t.iter().all(|&p| hex_norm(p) <= r) {
                        tris.push(t);
                    }
                }
            }
        }
        // breadth-first over edge adjacency from the triangle at the origin
        let start = tris
            .iter()
            .position(|t| *t == [(0, 0), (1, 0), (0, 1)])
            .unwrap();
        let mut order = vec![tris[start]];
        let mut seen = vec![false; tris.len()];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            for (j, t) in tris.iter().enumerate() {
                let shared = t.iter().filter(|p| tris[i].contains(p)).count();
                if !seen[j] && shared == 2 {
                    seen[j] = true;
                    order.push(*t);
                    queue.push_back(j);
                }
            }
        }
        order
    }

    pub fn has_disk(&self, v: usize, r: usize) -> bool {
        if r == 0 {
            return true;
        }
        let order = Self::lattice(r as i64);
        for &(a, b) in &self.stars[v] {
            let mut map = BTreeMap::from([((0, 0), v), ((1, 0), a), ((0, 1), b)]);
            let mut used = BTreeSet::from([v, a, b]);
            if self.unfold(&order, 1, &mut map, &mut used) {
                return true;
            }
        }
        false
    }

    fn unfold(
        &self,
        order: &[[(i64, i64); 3]],
        k: usize,
        map: &mut BTreeMap<(i64, i64), usize>,
        used: &mut BTreeSet<usize>,
    ) -> bool {
        if k == order.len() {
            return true;
        }
        let t = order[k];
        let missing: Vec<(i64, i64)> = t.iter().copied().filter(|p| !map.contains_key(p)).collect();
        match missing.as_slice() {
            [] => {
                let (a, b, c) = (map[&t[0]], map[&t[1]], map[&t[2]]);
                let ok = self.third.get(&key(a, b)).is_some_and(|o| o.contains(&c));
                ok && self.unfold(order, k + 1, map, used)
            }
            [p] => {
                let known: Vec<usize> = t.iter().filter(|q| *q != p).map(|q| map[q]).collect();
                let options = self
                    .third
                    .get(&key(known[0], known[1]))
                    .cloned()
                    .unwrap_or_default();
                for o in options {
                    if used.contains(&o) {
                        continue;
                    }
                    map.insert(*p, o);
                    used.insert(o);
                    if self.unfold(order, k + 1, map, used) {
                        return true;
                    }
                    used.remove(&o);
                    map.remove(p);
                }
                false
            }
            _ => unreachable!("every triangle after the first shares an edge with an earlier one"),
        }
    }

    /// Largest flat radius at `v`, bounded by its distance to the ball frontier.
    pub fn flat_radius(&self, b: &DevelopedBall, v: usize) -> usize {
        let c = &b.complex;
        let mut nb = vec![Vec::new(); c.vertex_count()];
        for e in c.edges() {
            nb[e.src].push(e.dst);
            nb[e.dst].push(e.src);
        }
        let mut dist = vec![usize::MAX; nb.len()];
        dist[v] = 0;
        let mut queue = VecDeque::from([v]);
        let mut cap = usize::MAX;
        while let Some(x) = queue.pop_front() {
            if b.dist[x] >= b.radius {
                cap = dist[x];
                break;
            }
            for &y in &nb[x] {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        let mut r = 0;
        while r < cap && self.has_disk(v, r + 1) {
            r += 1;
        }
        r
    }
}

/// The two-row picture of the extension invariant of the two-vertex example:
/// top row at one vertex class, bottom row at the other. Deficient edges have
/// length 2 (label 1), corner edges length 1.
pub fn two_row_invariant() -> (MetricGraph, Vec<u32>) {
    let mut g = MetricGraph::new("two rows");
    for row in ["t", "b"] {
        for i in 0..6 {
            g.add_vertex(format!("{row}{i}")).unwrap();
        }
    }
    let (t, b) = (|i: usize| i, |i: usize| 6 + i);
    for i in 0..4 {
        g.add_edge(t(i), b(i), 2).unwrap();
    }
    g.add_edge(t(4), t(5), 2).unwrap();
    g.add_edge(b(4), b(5), 2).unwrap();
    for (x, y) in [(0, 1), (3, 4), (2, 5)] {
        g.add_edge(t(x), t(y), 1).unwrap();
        g.add_edge(b(x), b(y), 1).unwrap();
    }
    let colours = (0..12).map(|i| (i / 6) as u32).collect();
    (g, colours)
}

/// Three disjoint two-vertex pieces, each with one deficient and one corner edge.
pub fn three_pairs_invariant() -> MetricGraph {
    let mut g = MetricGraph::new("three pairs");
    for i in 0..6 {
        g.add_vertex(format!("x{i}")).unwrap();
    }
    for k in 0..3 {
        g.add_edge(2 * k, 2 * k + 1, 2).unwrap();
        g.add_edge(2 * k, 2 * k + 1, 1).unwrap();
    }
    g
}
