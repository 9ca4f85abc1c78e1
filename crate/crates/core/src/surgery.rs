//! Removing equivariant chambers (edges) from spherical buildings.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_rational::Ratio;

use crate::error::PlaneError;
use crate::iso;
use crate::mgraph::{self, LengthSpectrum, MetricGraph};
use crate::plane;
use crate::rank;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RemovalClass {
    /// Smallest edge set of the orbit, as edge indices of the building.
    pub edges: Vec<usize>,
    pub orbit_size: usize,
    pub graph: MetricGraph,
    pub profile: Vec<usize>,
    pub name: Option<String>,
}

#[derive(Debug, Clone)]
pub struct Classification {
    pub classes: Vec<RemovalClass>,
    /// Number of classes of resulting graphs up to isomorphism.
    pub graph_classes: usize,
}

/// All k-sets of pairwise vertex-disjoint edges, as increasing index lists.
pub fn disjoint_edge_sets(g: &MetricGraph, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    let mut used = vec![false; g.vertex_count()];
    matchings(g, k, 0, &mut chosen, &mut used, &mut out);
    out
}

fn matchings(
    g: &MetricGraph,
    k: usize,
    from: usize,
    chosen: &mut Vec<usize>,
    used: &mut Vec<bool>,
    out: &mut Vec<Vec<usize>>,
) {
    if chosen.len() == k {
        out.push(chosen.clone());
        return;
    }
    for i in from..g.edge_count() {
        let e = &g.edges()[i];
        if used[e.u] || used[e.v] {
            continue;
        }
        used[e.u] = true;
        used[e.v] = true;
        chosen.push(i);
        matchings(g, k, i + 1, chosen, used, out);
        chosen.pop();
        used[e.u] = false;
        used[e.v] = false;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SurgeryError {
    #[error("edges {0} and {1} share a vertex")]
    NotDisjoint(usize, usize),
    #[error(transparent)]
    Plane(#[from] PlaneError),
}

/// Pairwise edge distances (fewest edges on a path joining them), sorted.
pub fn distance_profile(g: &MetricGraph, edges: &[usize]) -> Result<Vec<usize>, SurgeryError> {
    let dist: Vec<Vec<Option<usize>>> = (0..g.vertex_count()).map(|v| g.hop_distances(v)).collect();
    let mut out = Vec::new();
    for (i, &a) in edges.iter().enumerate() {
        for &b in &edges[i + 1..] {
            let (ea, eb) = (&g.edges()[a], &g.edges()[b]);
            let ends_a = [ea.u, ea.v];
            let ends_b = [eb.u, eb.v];
            if ends_a.iter().any(|x| ends_b.contains(x)) {
                return Err(SurgeryError::NotDisjoint(a, b));
            }
            let d = ends_a
                .iter()
                .flat_map(|&x| ends_b.iter().map(move |&y| (x, y)))
                .filter_map(|(x, y)| dist[x][y])
                .min()
                .unwrap_or(usize::MAX);
            out.push(d);
        }
    }
    out.sort_unstable();
    Ok(out)
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Orbits of k-matchings of the order-q building under its automorphism group.
pub fn classify_removals(q: u64, k: usize) -> Result<Classification, SurgeryError> {
    let h = plane::incidence_graph(q)?;
    Ok(classify_in(&h, k))
}

pub fn classify_in(h: &MetricGraph, k: usize) -> Classification {
    let sets = disjoint_edge_sets(h, k);
    let index: HashMap<Vec<usize>, usize> = sets
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, s)| (s, i))
        .collect();
    let mut edge_of: HashMap<(usize, usize), usize> = HashMap::new();
    for (i, e) in h.edges().iter().enumerate() {
        edge_of.insert((e.u.min(e.v), e.u.max(e.v)), i);
    }
    let aut = iso::automorphism_group(h);
    let mut uf = UnionFind((0..sets.len()).collect());
    for (i, s) in sets.iter().enumerate() {
        for p in &aut.generators {
            let mut img: Vec<usize> = s
                .iter()
                .map(|&e| {
                    let (a, b) = (p[h.edges()[e].u], p[h.edges()[e].v]);
                    edge_of[&(a.min(b), a.max(b))]
                })
                .collect();
            img.sort_unstable();
            uf.union(i, index[&img]);
        }
    }
    let mut orbits: BTreeMap<usize, usize> = BTreeMap::new();
    for i in 0..sets.len() {
        *orbits.entry(uf.find(i)).or_insert(0) += 1;
    }
    let mut forms = BTreeSet::new();
    let classes: Vec<RemovalClass> = orbits
        .into_iter()
        .map(|(root, size)| {
            let edges = sets[root].clone();
            let graph = h.without_edges(&edges);
            forms.insert(iso::canonical_form(&graph));
            let profile = distance_profile(h, &edges).expect("matchings are disjoint");
            RemovalClass {
                edges,
                orbit_size: size,
                graph,
                profile,
                name: None,
            }
        })
        .collect();
    Classification {
        classes,
        graph_classes: forms.len(),
    }
}

fn rank_one_roots(g: &MetricGraph) -> usize {
    rank::root_census(g)
        .map(|c| c.get(&Ratio::from_integer(1)).copied().unwrap_or(0))
        .unwrap_or(0)
}

/// Catalog name of a three-chamber removal from the Heawood graph, decided by
/// distance profile, then length spectrum, then rank-one roots.
pub fn catalog_name(profile: &[usize], g: &MetricGraph) -> Option<&'static str> {
    let spectrum = mgraph::length_spectrum(g);
    match profile {
        [1, 1, 1] => Some("G1"),
        [1, 2, 2] => Some("G4"),
        [1, 1, 2] => {
            if spectrum == LengthSpectrum::from_pairs(&[(2, 8), (4, 2), (6, 2)]) {
                Some("G2")
            } else if spectrum == LengthSpectrum::from_pairs(&[(2, 8), (4, 3), (8, 1)]) {
                Some("G3")
            } else {
                None
            }
        }
        [2, 2, 2] => Some(if rank_one_roots(g) == 0 { "G5" } else { "G6" }),
        _ => None,
    }
}

pub const CATALOG_GRAPH_NAMES: [&str; 6] = ["G1", "G2", "G3", "G4", "G5", "G6"];

/// The six buildings of order 2 with three chambers missing, named and sorted.
pub fn catalog() -> BTreeMap<String, RemovalClass> {
    let h = plane::incidence_graph(2).expect("2 is prime");
    let mut out = BTreeMap::new();
    for mut class in classify_in(&h, 3).classes {
        let name = catalog_name(&class.profile, &class.graph).expect("every class is named");
        class.name = Some(name.to_string());
        class.graph.name = name.to_string();
        let previous = out.insert(name.to_string(), class);
        assert!(previous.is_none(), "names are distinct");
    }
    out
}

pub fn catalog_graph(name: &str) -> Option<MetricGraph> {
    catalog().remove(name).map(|c| c.graph)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matchings_of_small_graphs() {
        let h = plane::incidence_graph(2).unwrap();
        assert_eq!(disjoint_edge_sets(&h, 1).len(), 21);
        let mut hex = MetricGraph::new("hex");
        for i in 0..6 {
            hex.add_vertex(format!("{i}")).unwrap();
        }
        for i in 0..6 {
            hex.add_edge(i, (i + 1) % 6, 2).unwrap();
        }
        assert_eq!(disjoint_edge_sets(&hex, 3).len(), 2);
    }

    #[test]
    fn orbit_sizes_add_up() {
        let h = plane::incidence_graph(2).unwrap();
        for k in 1..=3 {
            let c = classify_in(&h, k);
            let total: usize = c.classes.iter().map(|r| r.orbit_size).sum();
            assert_eq!(total, disjoint_edge_sets(&h, k).len());
        }
    }

    #[test]
    fn overlapping_edges_are_rejected() {
        let h = plane::incidence_graph(2).unwrap();
        let nb = h.incidence();
        let (a, b) = (nb[0][0].0, nb[0][1].0);
        assert!(matches!(
            distance_profile(&h, &[a, b]),
            Err(SurgeryError::NotDisjoint(..))
        ));
    }
}
