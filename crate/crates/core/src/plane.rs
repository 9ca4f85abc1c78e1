//! Point/line incidence graphs of PG(2, q) over prime fields, recognition of
//! spherical buildings of type A₂, and completion of deficient graphs.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::PlaneError;
use crate::iso;
use crate::mgraph::{self, MetricGraph};

/// Every edge of a simplicial A₂ link has length π/3.
pub const CHAMBER_LEN: u32 = 2;

pub fn is_prime(q: u64) -> bool {
    q >= 2
        && (2..)
            .take_while(|d| d * d <= q)
            .all(|d| !q.is_multiple_of(d))
}

/// Normalized representatives of the projective points of F_q³.
fn projective_points(q: u64) -> Vec<[u64; 3]> {
    let mut pts = Vec::new();
    for a in 0..q {
        for b in 0..q {
            pts.push([1, a, b]);
        }
    }
    for b in 0..q {
        pts.push([0, 1, b]);
    }
    pts.push([0, 0, 1]);
    pts
}

pub fn incidence_graph(q: u64) -> Result<MetricGraph, PlaneError> {
    if !is_prime(q) {
        return Err(PlaneError::NotPrime(q));
    }
    let pts = projective_points(q);
    let mut g = MetricGraph::new(format!("PG2_{q}"));
    for i in 0..pts.len() {
        g.add_vertex(format!("p{i}")).expect("fresh");
    }
    for i in 0..pts.len() {
        g.add_vertex(format!("l{i}")).expect("fresh");
    }
    let m = pts.len();
    for (i, p) in pts.iter().enumerate() {
        for (j, l) in pts.iter().enumerate() {
            if (p[0] * l[0] + p[1] * l[1] + p[2] * l[2]) % q == 0 {
                g.add_named_edge(format!("p{i}l{j}"), i, m + j, CHAMBER_LEN)
                    .expect("valid");
            }
        }
    }
    Ok(g)
}

/// The q with 2(q²+q+1) = n, when it exists.
pub fn projective_order(n_vertices: u64) -> Option<u64> {
    (0u64..)
        .map(|q| (q, 2 * (q * q + q + 1)))
        .take_while(|&(_, m)| m <= n_vertices)
        .find(|&(_, m)| m == n_vertices)
        .map(|(q, _)| q)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BuildingCertificate {
    pub order: u64,
    pub parts: (Vec<String>, Vec<String>),
    pub regular: bool,
    pub girth_ok: bool,
    pub count_ok: bool,
    pub bipartite: bool,
    /// Order 1: an apartment rather than a thick building.
    pub thin: bool,
}

pub fn is_building_a2(g: &MetricGraph) -> Option<BuildingCertificate> {
    if !g.all_lengths_equal(CHAMBER_LEN) || g.vertex_count() == 0 {
        return None;
    }
    let q = projective_order(g.vertex_count() as u64)?;
    if q == 0 {
        return None;
    }
    let val = g.valencies();
    let regular = val.iter().all(|&d| d as u64 == q + 1);
    let girth_ok = mgraph::hop_girth(g).is_some_and(|h| h >= 6);
    let parts = bipartition(g)?;
    if !(regular && girth_ok) {
        return None;
    }
    let names = |s: &[usize]| s.iter().map(|&v| g.vertex_id(v).to_string()).collect();
    Some(BuildingCertificate {
        order: q,
        parts: (names(&parts.0), names(&parts.1)),
        regular,
        girth_ok,
        count_ok: true,
        bipartite: true,
        thin: q == 1,
    })
}

fn bipartition(g: &MetricGraph) -> Option<(Vec<usize>, Vec<usize>)> {
    let nb = g.neighbours();
    let mut side = vec![None; g.vertex_count()];
    for s in 0..g.vertex_count() {
        if side[s].is_some() {
            continue;
        }
        side[s] = Some(false);
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            let sx = side[x].unwrap();
            for &y in &nb[x] {
                match side[y] {
                    None => {
                        side[y] = Some(!sx);
                        stack.push(y);
                    }
                    Some(sy) if sy == sx => return None,
                    _ => {}
                }
            }
        }
    }
    if g.edges().iter().any(|e| e.is_loop()) {
        return None;
    }
    let a = (0..g.vertex_count())
        .filter(|&v| side[v] == Some(false))
        .collect();
    let b = (0..g.vertex_count())
        .filter(|&v| side[v] == Some(true))
        .collect();
    Some((a, b))
}

/// Edge sets (as vertex pairs, smaller index first) that complete `g` into a building.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Completions {
    pub order: u64,
    pub raw: Vec<Vec<(usize, usize)>>,
    /// One representative per orbit of `Aut(g)` on added edge sets.
    pub up_to_aut: Vec<Vec<(usize, usize)>>,
    /// One representative per isomorphism class of the completed graph with
    /// its added edges marked; this is the count up to the target's automorphisms.
    pub up_to_target: Vec<Vec<(usize, usize)>>,
}

pub fn complete_into_building(g: &MetricGraph) -> Completions {
    let empty = |order| Completions {
        order,
        raw: vec![],
        up_to_aut: vec![],
        up_to_target: vec![],
    };
    let Some(q) = projective_order(g.vertex_count() as u64) else {
        return empty(0);
    };
    if q == 0 || !g.all_lengths_equal(CHAMBER_LEN) {
        return empty(q);
    }
    let n = g.vertex_count();
    let mut adj = vec![BTreeSet::new(); n];
    for e in g.edges() {
        adj[e.u].insert(e.v);
        adj[e.v].insert(e.u);
    }
    let mut raw = Vec::new();
    let mut added = Vec::new();
    complete_rec(&mut adj, q as usize + 1, &mut added, &mut raw);
    raw.retain(|extra| {
        let mut h = g.clone();
        for &(a, b) in extra {
            h.add_edge(a, b, CHAMBER_LEN).expect("valid");
        }
        is_building_a2(&h).is_some()
    });
    raw.sort();

    let aut = iso::automorphism_group(g);
    let elements = iso::enumerate_group(&aut.generators, n);
    let mut seen = BTreeSet::new();
    let mut up_to_aut = Vec::new();
    for extra in &raw {
        let key = elements
            .iter()
            .map(|p| {
                let mut img: Vec<(usize, usize)> = extra
                    .iter()
                    .map(|&(a, b)| (p[a].min(p[b]), p[a].max(p[b])))
                    .collect();
                img.sort();
                img
            })
            .min()
            .expect("group is non-empty");
        if seen.insert(key) {
            up_to_aut.push(extra.clone());
        }
    }

    // The marked completion: old edges keep length 2, added ones get length 1
    // so that isomorphisms must respect the split.
    let mut forms = BTreeSet::new();
    let mut up_to_target = Vec::new();
    for extra in &raw {
        let mut h = g.clone();
        for &(a, b) in extra {
            h.add_edge(a, b, 1).expect("valid");
        }
        if forms.insert(iso::canonical_form(&h)) {
            up_to_target.push(extra.clone());
        }
    }
    Completions {
        order: q,
        raw,
        up_to_aut,
        up_to_target,
    }
}

fn hop_distance_at_most(adj: &[BTreeSet<usize>], s: usize, t: usize, limit: usize) -> bool {
    let mut frontier = vec![s];
    let mut seen = vec![false; adj.len()];
    seen[s] = true;
    for _ in 0..limit {
        let mut next = Vec::new();
        for x in frontier {
            for &y in &adj[x] {
                if y == t {
                    return true;
                }
                if !seen[y] {
                    seen[y] = true;
                    next.push(y);
                }
            }
        }
        frontier = next;
    }
    false
}

fn complete_rec(
    adj: &mut Vec<BTreeSet<usize>>,
    valency: usize,
    added: &mut Vec<(usize, usize)>,
    out: &mut Vec<Vec<(usize, usize)>>,
) {
    let Some(u) = (0..adj.len()).find(|&v| adj[v].len() < valency) else {
        let mut sol = added.clone();
        sol.sort();
        out.push(sol);
        return;
    };
    // partners of the same vertex are added in increasing order
    let floor = match added.last() {
        Some(&(a, b)) if a == u || b == u => a.max(b) + 1,
        _ => 0,
    };
    for v in floor.max(u + 1)..adj.len() {
        if adj[v].len() >= valency || hop_distance_at_most(adj, u, v, 4) {
            continue;
        }
        adj[u].insert(v);
        adj[v].insert(u);
        added.push((u, v));
        complete_rec(adj, valency, added, out);
        added.pop();
        adj[u].remove(&v);
        adj[v].remove(&u);
    }
}
