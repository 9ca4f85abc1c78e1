//! Canonical labelling by colour refinement and individualization, with
//! automorphism pruning, plus a stabilizer-chain automorphism group.

use std::collections::{BTreeMap, HashSet, VecDeque};

use crate::mgraph::{AutomorphismGroup, MetricGraph};

/// Own colour, own loop label, sorted (neighbour colour, edge label) pairs.
type Signature = (u32, u32, Vec<(u32, u32)>);

/// Pair-labelled dense view: `label[i*n+j]` indexes the sorted table of edge
/// length multisets between i and j (0 = no edge).
struct Dense {
    n: usize,
    label: Vec<u32>,
    adj: Vec<Vec<(usize, u32)>>,
    table: Vec<Vec<u32>>,
}

impl Dense {
    fn new(g: &MetricGraph) -> Dense {
        let n = g.vertex_count();
        let mut pairs: BTreeMap<(usize, usize), Vec<u32>> = BTreeMap::new();
        for e in g.edges() {
            let key = (e.u.min(e.v), e.u.max(e.v));
            pairs.entry(key).or_default().push(e.len);
        }
        for v in pairs.values_mut() {
            v.sort_unstable();
        }
        let mut table: Vec<Vec<u32>> = pairs.values().cloned().collect();
        table.sort();
        table.dedup();
        let mut label = vec![0u32; n * n];
        let mut adj = vec![Vec::new(); n];
        for (&(a, b), ms) in &pairs {
            let id = table.binary_search(ms).unwrap() as u32 + 1;
            label[a * n + b] = id;
            label[b * n + a] = id;
            if a != b {
                adj[a].push((b, id));
                adj[b].push((a, id));
            }
        }
        Dense {
            n,
            label,
            adj,
            table,
        }
    }

    fn refine(&self, colours: &[u32]) -> Vec<u32> {
        let n = self.n;
        let mut col: Vec<u32> = colours.to_vec();
        let mut cells = usize::MAX;
        loop {
            let sigs: Vec<Signature> = (0..n)
                .map(|v| {
                    let mut nb: Vec<(u32, u32)> =
                        self.adj[v].iter().map(|&(u, l)| (col[u], l)).collect();
                    nb.sort_unstable();
                    (col[v], self.label[v * n + v], nb)
                })
                .collect();
            let mut sorted: Vec<&Signature> = sigs.iter().collect();
            sorted.sort();
            sorted.dedup();
            let next: Vec<u32> = sigs
                .iter()
                .map(|s| sorted.binary_search(&s).unwrap() as u32)
                .collect();
            let count = sorted.len();
            col = next;
            if count == cells {
                return col;
            }
            cells = count;
        }
    }

    fn encode(&self, perm: &[usize], init: &[u32]) -> Vec<u32> {
        let n = self.n;
        let mut inv = vec![0usize; n];
        for (v, &p) in perm.iter().enumerate() {
            inv[p] = v;
        }
        let mut out = Vec::with_capacity(n * n + n);
        for i in 0..n {
            out.push(init[inv[i]]);
        }
        for i in 0..n {
            for j in i..n {
                out.push(self.label[inv[i] * n + inv[j]]);
            }
        }
        out
    }
}

fn individualize(col: &[u32], w: usize) -> Vec<u32> {
    col.iter()
        .enumerate()
        .map(|(x, &c)| if x == w { 2 * c } else { 2 * c + 1 })
        .collect()
}

fn is_discrete(col: &[u32]) -> bool {
    let mut seen = vec![false; col.len()];
    for &c in col {
        if seen[c as usize] {
            return false;
        }
        seen[c as usize] = true;
    }
    true
}

/// First non-singleton cell (smallest colour), members in index order.
fn target_cell(col: &[u32]) -> Vec<usize> {
    let mut count = vec![0usize; col.len()];
    for &c in col {
        count[c as usize] += 1;
    }
    let c = (0..col.len())
        .find(|&c| count[c] > 1)
        .expect("not discrete") as u32;
    (0..col.len()).filter(|&v| col[v] == c).collect()
}

struct Leaf {
    code: Vec<u32>,
    perm: Vec<usize>,
}

struct Search<'a> {
    d: &'a Dense,
    init: &'a [u32],
    best: Option<Leaf>,
    autos: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn node(&mut self, col: Vec<u32>, fixed: &mut Vec<usize>) {
        if is_discrete(&col) {
            self.leaf(col.iter().map(|&c| c as usize).collect());
            return;
        }
        let cell = target_cell(&col);
        let mut tried: Vec<usize> = Vec::new();
        for &w in &cell {
            if !tried.is_empty() && self.in_orbit_of(&tried, w, fixed) {
                continue;
            }
            tried.push(w);
            let child = self.d.refine(&individualize(&col, w));
            fixed.push(w);
            self.node(child, fixed);
            fixed.pop();
        }
    }

    fn in_orbit_of(&self, tried: &[usize], w: usize, fixed: &[usize]) -> bool {
        let gens: Vec<&Vec<usize>> = self
            .autos
            .iter()
            .filter(|a| fixed.iter().all(|&f| a[f] == f))
            .collect();
        if gens.is_empty() {
            return false;
        }
        let mut seen = HashSet::new();
        let mut queue: VecDeque<usize> = tried.iter().copied().collect();
        seen.extend(tried.iter().copied());
        while let Some(x) = queue.pop_front() {
            if x == w {
                return true;
            }
            for a in &gens {
                if seen.insert(a[x]) {
                    queue.push_back(a[x]);
                }
            }
        }
        false
    }

    fn leaf(&mut self, perm: Vec<usize>) {
        let code = self.d.encode(&perm, self.init);
        match &self.best {
            None => self.best = Some(Leaf { code, perm }),
            Some(b) => match code.cmp(&b.code) {
                std::cmp::Ordering::Less => self.best = Some(Leaf { code, perm }),
                std::cmp::Ordering::Equal => {
                    let mut inv = vec![0usize; perm.len()];
                    for (v, &p) in b.perm.iter().enumerate() {
                        inv[p] = v;
                    }
                    let auto: Vec<usize> = perm.iter().map(|&p| inv[p]).collect();
                    if auto.iter().enumerate().any(|(i, &j)| i != j) {
                        self.autos.push(auto);
                    }
                }
                std::cmp::Ordering::Greater => {}
            },
        }
    }
}

fn canon(d: &Dense, init: &[u32]) -> Leaf {
    let mut s = Search {
        d,
        init,
        best: None,
        autos: Vec::new(),
    };
    let start = d.refine(init);
    s.node(start, &mut Vec::new());
    s.best.expect("at least one leaf")
}

fn serialize(d: &Dense, code: &[u32]) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(&(d.n as u32).to_le_bytes());
    out.extend_from_slice(&(d.table.len() as u32).to_le_bytes());
    for ms in &d.table {
        out.extend_from_slice(&(ms.len() as u32).to_le_bytes());
        for &l in ms {
            out.extend_from_slice(&l.to_le_bytes());
        }
    }
    for &c in code {
        out.extend_from_slice(&c.to_le_bytes());
    }
    out
}

pub const EMPTY_FORM: &[u8] = b"empty-graph";

pub fn canonical_form(g: &MetricGraph) -> Vec<u8> {
    if g.vertex_count() == 0 {
        return EMPTY_FORM.to_vec();
    }
    let d = Dense::new(g);
    let leaf = canon(&d, &vec![0; d.n]);
    serialize(&d, &leaf.code)
}

/// Canonical form of a vertex-coloured graph; colours are compared by value.
pub fn canonical_form_coloured(g: &MetricGraph, colours: &[u32]) -> Vec<u8> {
    if g.vertex_count() == 0 {
        return EMPTY_FORM.to_vec();
    }
    let d = Dense::new(g);
    let leaf = canon(&d, colours);
    serialize(&d, &leaf.code)
}

pub fn isomorphism(g: &MetricGraph, h: &MetricGraph) -> Option<Vec<usize>> {
    let zeros_g = vec![0; g.vertex_count()];
    let zeros_h = vec![0; h.vertex_count()];
    coloured_isomorphism(g, &zeros_g, h, &zeros_h)
}

/// Isomorphism `g -> h` carrying colour `cg[v]` to `ch[image]`.
pub fn coloured_isomorphism(
    g: &MetricGraph,
    cg: &[u32],
    h: &MetricGraph,
    ch: &[u32],
) -> Option<Vec<usize>> {
    if g.vertex_count() != h.vertex_count() || g.edge_count() != h.edge_count() {
        return None;
    }
    if g.vertex_count() == 0 {
        return Some(Vec::new());
    }
    let dg = Dense::new(g);
    let dh = Dense::new(h);
    if dg.table != dh.table {
        return None;
    }
    let lg = canon(&dg, cg);
    let lh = canon(&dh, ch);
    if lg.code != lh.code {
        return None;
    }
    let mut inv_h = vec![0usize; dh.n];
    for (v, &p) in lh.perm.iter().enumerate() {
        inv_h[p] = v;
    }
    Some(lg.perm.iter().map(|&p| inv_h[p]).collect())
}

/// Checks that `perm` preserves every pair's multiset of edge lengths.
pub fn is_automorphism(g: &MetricGraph, perm: &[usize]) -> bool {
    let n = g.vertex_count();
    if perm.len() != n {
        return false;
    }
    let mut hit = vec![false; n];
    for &p in perm {
        if p >= n || hit[p] {
            return false;
        }
        hit[p] = true;
    }
    let d = Dense::new(g);
    (0..n).all(|i| (0..n).all(|j| d.label[i * n + j] == d.label[perm[i] * n + perm[j]]))
}

pub fn automorphism_group(g: &MetricGraph) -> AutomorphismGroup {
    let n = g.vertex_count();
    if n == 0 {
        return AutomorphismGroup {
            generators: Vec::new(),
            order: 1,
        };
    }
    let d = Dense::new(g);
    let mut colours = vec![0u32; n];
    let mut generators: Vec<Vec<usize>> = Vec::new();
    let mut order: u128 = 1;
    loop {
        let col = d.refine(&colours);
        if is_discrete(&col) {
            break;
        }
        let cell = target_cell(&col);
        let b = cell[0];
        let base_leaf = canon(&d, &individualize(&col, b));
        let mut level: Vec<Vec<usize>> = Vec::new();
        let mut orbit = orbit_of(b, &level);
        for &w in &cell[1..] {
            if orbit.contains(&w) {
                continue;
            }
            let leaf = canon(&d, &individualize(&col, w));
            if leaf.code == base_leaf.code {
                let mut inv = vec![0usize; n];
                for (v, &p) in leaf.perm.iter().enumerate() {
                    inv[p] = v;
                }
                level.push(base_leaf.perm.iter().map(|&p| inv[p]).collect());
                orbit = orbit_of(b, &level);
            }
        }
        order *= orbit.len() as u128;
        generators.extend(level);
        colours = individualize(&col, b);
    }
    AutomorphismGroup { generators, order }
}

fn orbit_of(x: usize, gens: &[Vec<usize>]) -> HashSet<usize> {
    let mut seen = HashSet::from([x]);
    let mut queue = VecDeque::from([x]);
    while let Some(y) = queue.pop_front() {
        for g in gens {
            if seen.insert(g[y]) {
                queue.push_back(g[y]);
            }
        }
    }
    seen
}

/// All elements of the permutation group generated by `gens` on `n` points.
/// Intended for small groups only.
pub fn enumerate_group(gens: &[Vec<usize>], n: usize) -> Vec<Vec<usize>> {
    let id: Vec<usize> = (0..n).collect();
    let mut seen: HashSet<Vec<usize>> = HashSet::from([id.clone()]);
    let mut out = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let q: Vec<usize> = p.iter().map(|&x| g[x]).collect();
            if seen.insert(q.clone()) {
                out.push(q.clone());
                queue.push_back(q);
            }
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> MetricGraph {
        let mut g = MetricGraph::new("C");
        for i in 0..n {
            g.add_vertex(format!("{i}")).unwrap();
        }
        for i in 0..n {
            g.add_edge(i, (i + 1) % n, 1).unwrap();
        }
        g
    }

    fn star(leaves: usize) -> MetricGraph {
        let mut g = MetricGraph::new("S");
        g.add_vertex("c").unwrap();
        for i in 0..leaves {
            let v = g.add_vertex(format!("l{i}")).unwrap();
            g.add_edge(0, v, 2).unwrap();
        }
        g
    }

    #[test]
    fn cycle_group_is_dihedral() {
        for n in 3..9 {
            let a = automorphism_group(&cycle(n));
            assert_eq!(a.order, 2 * n as u128);
            assert_eq!(enumerate_group(&a.generators, n).len(), 2 * n);
        }
    }

    #[test]
    fn star_group_is_symmetric() {
        let a = automorphism_group(&star(6));
        assert_eq!(a.order, 720);
        assert!(a.generators.iter().all(|p| is_automorphism(&star(6), p)));
    }

    #[test]
    fn lengths_break_symmetry() {
        let mut g = cycle(4);
        let mut h = MetricGraph::new("C'");
        for v in g.vertices() {
            h.add_vertex(v.clone()).unwrap();
        }
        for (k, e) in g.edges().iter().enumerate() {
            h.add_edge(e.u, e.v, if k == 0 { 2 } else { 1 }).unwrap();
        }
        assert!(isomorphism(&g, &h).is_none());
        assert_eq!(automorphism_group(&h).order, 2);
        g.name = "other".into();
        assert_eq!(canonical_form(&g), canonical_form(&cycle(4)));
    }

    #[test]
    fn parallel_edges_count() {
        let mut g = MetricGraph::new("p");
        g.add_vertex("a").unwrap();
        g.add_vertex("b").unwrap();
        g.add_edge(0, 1, 2).unwrap();
        g.add_edge(0, 1, 2).unwrap();
        let mut h = g.clone();
        h.add_edge(0, 1, 2).unwrap();
        assert!(isomorphism(&g, &h).is_none());
        assert_eq!(automorphism_group(&g).order, 2);
    }

    #[test]
    fn isomorphism_maps_edges_to_edges() {
        let g = cycle(7);
        let perm = [3, 5, 0, 6, 1, 2, 4];
        let h = g.relabeled(&perm);
        let map = isomorphism(&g, &h).unwrap();
        for e in g.edges() {
            let (a, b) = (map[e.u], map[e.v]);
            assert!(h
                .edges()
                .iter()
                .any(|f| (f.u == a && f.v == b) || (f.u == b && f.v == a)));
        }
    }

    #[test]
    fn empty_graph_sentinel() {
        assert_eq!(canonical_form(&MetricGraph::new("x")), EMPTY_FORM.to_vec());
    }
}
