//! Deciding whether a quotient complex extends to an Ã₂ building by gluing
//! triangles, via its extension invariant and alternating 6-walks.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::Serialize;

use crate::complex::{self, complex_isomorphic, EdgeEnd, End, IsoMode, ShapeComplex, Side};
use crate::error::{ComplexError, ExtendError};
use crate::mgraph::{self, MetricGraph, FULL_TURN};
use crate::plane::{self, BuildingCertificate};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct InvVertex {
    pub qvertex: usize,
    pub end: EdgeEnd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum InvEdgeKind {
    /// A deficient edge of the complex, missing `label` faces.
    Deficient { edge: usize, label: u32 },
    /// An admissible new corner between two ends at the same vertex.
    Corner,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct InvEdge {
    pub a: usize,
    pub b: usize,
    pub kind: InvEdgeKind,
}

impl InvEdge {
    pub fn is_deficient(&self) -> bool {
        matches!(self.kind, InvEdgeKind::Deficient { .. })
    }

    pub fn other(&self, x: usize) -> usize {
        if self.a == x {
            self.b
        } else {
            self.a
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtensionInvariant {
    pub q_star: u64,
    pub vertices: Vec<InvVertex>,
    pub edges: Vec<InvEdge>,
    /// Vertices skipped because their link has no projective order.
    pub skipped: Vec<String>,
}

impl ExtensionInvariant {
    pub fn type0(&self) -> impl Iterator<Item = (usize, &InvEdge)> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.is_deficient())
    }

    pub fn type1(&self) -> impl Iterator<Item = (usize, &InvEdge)> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| !e.is_deficient())
    }

    pub fn label(&self, k: usize) -> u32 {
        match self.edges[k].kind {
            InvEdgeKind::Deficient { label, .. } => label,
            InvEdgeKind::Corner => 0,
        }
    }

    /// Graph view: corner edges get length 1, deficient edges length 1 + label.
    pub fn to_graph(&self, c: &ShapeComplex) -> MetricGraph {
        let mut g = MetricGraph::new(format!("invariant({})", c.name));
        for v in &self.vertices {
            g.add_vertex(format!("{}:{}", c.vertex_id(v.qvertex), c.end_name(v.end)))
                .expect("unique");
        }
        for (k, e) in self.edges.iter().enumerate() {
            match e.kind {
                InvEdgeKind::Deficient { edge, label } => {
                    g.add_named_edge(format!("t0.{}", c.edges()[edge].id), e.a, e.b, 1 + label)
                }
                InvEdgeKind::Corner => g.add_named_edge(format!("t1.{k}"), e.a, e.b, 1),
            }
            .expect("valid");
        }
        g
    }

    /// Graph text with a `type=` / `label=` comment on every edge.
    pub fn to_text(&self, c: &ShapeComplex) -> String {
        let g = self.to_graph(c);
        let mut out = format!("graph {}\n", g.name);
        for v in g.vertices() {
            let _ = writeln!(out, "vertex {v}");
        }
        for (e, inv) in g.edges().iter().zip(&self.edges) {
            let tag = match inv.kind {
                InvEdgeKind::Deficient { label, .. } => format!("type=0 label={label}"),
                InvEdgeKind::Corner => "type=1".to_string(),
            };
            let _ = writeln!(
                out,
                "edge {} {} {} {} # {tag}",
                e.id,
                g.vertex_id(e.u),
                g.vertex_id(e.v),
                e.len
            );
        }
        out
    }
}

/// Link at `v` as a simple adjacency structure, with the position of each edge-end.
struct HopLink {
    nb: Vec<Vec<usize>>,
    pos: BTreeMap<EdgeEnd, usize>,
}

impl HopLink {
    fn new(c: &ShapeComplex, v: usize) -> HopLink {
        let link = c.link_data(v);
        let pos = link.ends.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let mut nb = vec![Vec::new(); link.graph.vertex_count()];
        for e in link.graph.edges() {
            nb[e.u].push(e.v);
            nb[e.v].push(e.u);
        }
        HopLink { nb, pos }
    }

    fn within(&self, extra: &[Vec<usize>], s: usize, t: usize, limit: usize) -> bool {
        if s == t {
            return true;
        }
        let mut seen = vec![false; self.nb.len()];
        seen[s] = true;
        let mut frontier = vec![s];
        for _ in 0..limit {
            let mut next = Vec::new();
            for x in frontier {
                for &y in self.nb[x].iter().chain(&extra[x]) {
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
}

fn require_triangulated(c: &ShapeComplex) -> Result<(), ExtendError> {
    if let Some(f) = c
        .faces()
        .iter()
        .find(|f| f.sides.len() != 3 || f.sides.iter().any(|s| s.angle != 2))
    {
        return Err(ComplexError::NotTriangulated(f.id.clone()).into());
    }
    for v in 0..c.vertex_count() {
        let g = mgraph::girth(&c.link(v));
        if g.is_some_and(|x| x < FULL_TURN) {
            return Err(ComplexError::NotNpc {
                vertex: c.vertex_id(v).to_string(),
                girth: g,
            }
            .into());
        }
    }
    Ok(())
}

pub fn extension_invariant(c: &ShapeComplex) -> Result<ExtensionInvariant, ExtendError> {
    require_triangulated(c)?;
    let orders: Vec<Option<u64>> = (0..c.vertex_count())
        .map(|v| plane::projective_order(c.ends_at(v).len() as u64))
        .collect();
    let q_star = orders
        .iter()
        .flatten()
        .copied()
        .max()
        .ok_or(ExtendError::NoProjectiveOrder)?;
    let valency = c.face_valencies();
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    let mut at_vertex: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (k, e) in c.edges().iter().enumerate() {
        let v = valency[k] as u64;
        if v > q_star {
            continue;
        }
        let a = vertices.len();
        vertices.push(InvVertex {
            qvertex: e.src,
            end: (k, End::Src),
        });
        vertices.push(InvVertex {
            qvertex: e.dst,
            end: (k, End::Dst),
        });
        at_vertex.entry(e.src).or_default().push(a);
        at_vertex.entry(e.dst).or_default().push(a + 1);
        let label = (q_star - v + 1) as u32;
        edges.push(InvEdge {
            a,
            b: a + 1,
            kind: InvEdgeKind::Deficient { edge: k, label },
        });
    }
    let mut skipped = Vec::new();
    for (v, order) in orders.iter().enumerate() {
        if order.is_none() {
            if at_vertex.contains_key(&v) {
                return Err(ExtendError::UndefinedOrderAt(c.vertex_id(v).to_string()));
            }
            skipped.push(c.vertex_id(v).to_string());
        }
    }
    for (&x, members) in &at_vertex {
        let link = HopLink::new(c, x);
        let none = vec![Vec::new(); link.nb.len()];
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i + 1..] {
                let (la, lb) = (link.pos[&vertices[a].end], link.pos[&vertices[b].end]);
                if !link.within(&none, la, lb, 4) {
                    edges.push(InvEdge {
                        a,
                        b,
                        kind: InvEdgeKind::Corner,
                    });
                }
            }
        }
    }
    Ok(ExtensionInvariant {
        q_star,
        vertices,
        edges,
        skipped,
    })
}

/// Closed alternating walk of six edges, starting with a deficient edge.
/// Step i leaves `from[i]` along `edges[i]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SixWalk {
    pub steps: Vec<(usize, usize)>,
}

impl SixWalk {
    fn canonical(steps: &[(usize, usize)]) -> SixWalk {
        let mut forms = Vec::new();
        let n = steps.len();
        let verts: Vec<usize> = steps.iter().map(|&(_, v)| v).collect();
        let es: Vec<usize> = steps.iter().map(|&(e, _)| e).collect();
        for r in (0..n).step_by(2) {
            forms.push(
                (0..n)
                    .map(|k| (es[(r + k) % n], verts[(r + k) % n]))
                    .collect::<Vec<_>>(),
            );
        }
        // backwards: vertex sequence v1, v0, v5, ..., edges e0, e5, e4, ...
        let back_v: Vec<usize> = (0..n).map(|k| verts[(n + 1 - k) % n]).collect();
        let back_e: Vec<usize> = (0..n).map(|k| es[(n - k) % n]).collect();
        for r in (0..n).step_by(2) {
            forms.push(
                (0..n)
                    .map(|k| (back_e[(r + k) % n], back_v[(r + k) % n]))
                    .collect(),
            );
        }
        SixWalk {
            steps: forms.into_iter().min().unwrap(),
        }
    }

    pub fn deficient_steps(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.steps.iter().step_by(2).copied()
    }

    pub fn corner_steps(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.steps.iter().skip(1).step_by(2).copied()
    }

    pub fn is_injective(&self) -> bool {
        let set: BTreeSet<usize> = self.steps.iter().map(|s| s.0).collect();
        set.len() == self.steps.len()
    }
}

pub fn alternating_six_cycles(inv: &ExtensionInvariant) -> Vec<SixWalk> {
    let mut incident = vec![Vec::new(); inv.vertices.len()];
    for (k, e) in inv.edges.iter().enumerate() {
        incident[e.a].push(k);
        if e.b != e.a {
            incident[e.b].push(k);
        }
    }
    let mut found = BTreeSet::new();
    for (k, e) in inv.type0() {
        for start in [e.a, e.b] {
            let mut steps = vec![(k, start)];
            walk(
                inv,
                &incident,
                &mut steps,
                e.other(start),
                start,
                &mut found,
            );
        }
    }
    found.into_iter().collect()
}

fn walk(
    inv: &ExtensionInvariant,
    incident: &[Vec<usize>],
    steps: &mut Vec<(usize, usize)>,
    at: usize,
    start: usize,
    found: &mut BTreeSet<SixWalk>,
) {
    if steps.len() == 6 {
        if at == start {
            found.insert(SixWalk::canonical(steps));
        }
        return;
    }
    let want_deficient = steps.len().is_multiple_of(2);
    for &k in &incident[at] {
        if inv.edges[k].is_deficient() != want_deficient {
            continue;
        }
        steps.push((k, at));
        walk(inv, incident, steps, inv.edges[k].other(at), start, found);
        steps.pop();
    }
}

/// A multiset of walks, given as sorted indices into the walk list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleFamily {
    pub walks: Vec<usize>,
    /// Traversals of each deficient invariant edge, keyed by invariant edge index.
    pub traversals: BTreeMap<usize, u32>,
}

struct FamilySearch<'a> {
    inv: &'a ExtensionInvariant,
    walks: &'a [SixWalk],
    by_column: BTreeMap<usize, Vec<usize>>,
    columns: Vec<usize>,
    links: BTreeMap<usize, HopLink>,
    extra: BTreeMap<usize, Vec<Vec<usize>>>,
    budget: BTreeMap<usize, u32>,
    chosen: Vec<usize>,
    out: Vec<Vec<usize>>,
}

impl FamilySearch<'_> {
    fn uses(&self, w: usize) -> BTreeMap<usize, u32> {
        let mut m = BTreeMap::new();
        for (e, _) in self.walks[w].deficient_steps() {
            *m.entry(e).or_insert(0) += 1;
        }
        m
    }

    /// Adds the corners of walk `w`, unless one of them closes a short cycle.
    fn add_corners(&mut self, w: usize) -> Option<Vec<(usize, usize, usize)>> {
        let mut added = Vec::new();
        for (k, _) in self.walks[w].corner_steps() {
            let e = self.inv.edges[k];
            let x = self.inv.vertices[e.a].qvertex;
            let link = &self.links[&x];
            let (a, b) = (
                link.pos[&self.inv.vertices[e.a].end],
                link.pos[&self.inv.vertices[e.b].end],
            );
            let extra = self.extra.get_mut(&x).unwrap();
            if link.within(extra, a, b, 4) {
                self.remove_corners(&added);
                return None;
            }
            extra[a].push(b);
            extra[b].push(a);
            added.push((x, a, b));
        }
        Some(added)
    }

    fn remove_corners(&mut self, added: &[(usize, usize, usize)]) {
        for &(x, a, b) in added.iter().rev() {
            let extra = self.extra.get_mut(&x).unwrap();
            extra[a].pop();
            extra[b].pop();
        }
    }

    fn run(&mut self, last: Option<(usize, usize)>) {
        let Some(&col) = self.columns.iter().find(|c| self.budget[c] > 0) else {
            self.out.push(self.chosen.clone());
            return;
        };
        let floor = match last {
            Some((c, w)) if c == col => w,
            _ => 0,
        };
        let candidates = self.by_column.get(&col).cloned().unwrap_or_default();
        for w in candidates.into_iter().filter(|&w| w >= floor) {
            let uses = self.uses(w);
            if uses.iter().any(|(e, n)| self.budget[e] < *n) {
                continue;
            }
            let Some(added) = self.add_corners(w) else {
                continue;
            };
            for (e, n) in &uses {
                *self.budget.get_mut(e).unwrap() -= n;
            }
            self.chosen.push(w);
            self.run(Some((col, w)));
            self.chosen.pop();
            for (e, n) in &uses {
                *self.budget.get_mut(e).unwrap() += n;
            }
            self.remove_corners(&added);
        }
    }
}

/// All saturated ample families of a triangulated complex, with the invariant
/// and walk list they refer to.
pub struct FamilyReport {
    pub invariant: ExtensionInvariant,
    pub walks: Vec<SixWalk>,
    pub families: Vec<CycleFamily>,
}

pub fn families_of(c: &ShapeComplex) -> Result<FamilyReport, ExtendError> {
    let inv = extension_invariant(c)?;
    let walks = alternating_six_cycles(&inv);
    let families = search_families(c, &inv, &walks, None);
    Ok(FamilyReport {
        invariant: inv,
        walks,
        families,
    })
}

/// Exhaustive search; `column_order` permutes which deficient edge is covered first.
pub fn search_families(
    c: &ShapeComplex,
    inv: &ExtensionInvariant,
    walks: &[SixWalk],
    column_order: Option<&[usize]>,
) -> Vec<CycleFamily> {
    let mut by_column: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (w, walk) in walks.iter().enumerate() {
        let cols: BTreeSet<usize> = walk.deficient_steps().map(|(e, _)| e).collect();
        for e in cols {
            by_column.entry(e).or_default().push(w);
        }
    }
    let columns: Vec<usize> = match column_order {
        Some(o) => o.to_vec(),
        None => inv.type0().map(|(k, _)| k).collect(),
    };
    let budget = inv.type0().map(|(k, _)| (k, inv.label(k))).collect();
    let mut links = BTreeMap::new();
    let mut extra = BTreeMap::new();
    for v in &inv.vertices {
        links
            .entry(v.qvertex)
            .or_insert_with(|| HopLink::new(c, v.qvertex));
    }
    for (&x, l) in &links {
        extra.insert(x, vec![Vec::new(); l.nb.len()]);
    }
    let mut s = FamilySearch {
        inv,
        walks,
        by_column,
        columns,
        links,
        extra,
        budget,
        chosen: Vec::new(),
        out: Vec::new(),
    };
    s.run(None);
    let mut families: Vec<CycleFamily> = s
        .out
        .into_iter()
        .map(|mut ws| {
            ws.sort_unstable();
            let mut traversals = BTreeMap::new();
            for &w in &ws {
                for (e, _) in walks[w].deficient_steps() {
                    *traversals.entry(e).or_insert(0) += 1;
                }
            }
            CycleFamily {
                walks: ws,
                traversals,
            }
        })
        .collect();
    families.sort_by(|a, b| a.walks.cmp(&b.walks));
    families.dedup();
    families
}

/// Every family search result, on a complex that is triangulated first when needed.
pub fn saturated_ample_families(c: &ShapeComplex) -> Result<FamilyReport, ExtendError> {
    families_of(&triangulated(c)?)
}

pub fn triangulated(c: &ShapeComplex) -> Result<ShapeComplex, ExtendError> {
    if c.is_triangulated() {
        Ok(c.clone())
    } else {
        Ok(complex::triangulate(c)?.complex)
    }
}

/// Glues one triangle per walk; the new faces are appended after the old ones.
pub fn build_extension(
    c: &ShapeComplex,
    inv: &ExtensionInvariant,
    walks: &[SixWalk],
    family: &CycleFamily,
) -> Result<ShapeComplex, ExtendError> {
    let mut out = c.clone();
    for (n, &w) in family.walks.iter().enumerate() {
        let mut sides = Vec::new();
        for (k, from) in walks
            .get(w)
            .ok_or_else(|| ExtendError::BadFamily(format!("no walk {w}")))?
            .deficient_steps()
        {
            let InvEdgeKind::Deficient { edge, .. } = inv.edges[k].kind else {
                return Err(ExtendError::BadFamily(
                    "corner edge in a side position".into(),
                ));
            };
            let forward = inv.vertices[from].end.1 == End::Src;
            sides.push(Side {
                edge,
                forward,
                angle: 2,
            });
        }
        let mut id = format!("x{n}");
        while out.faces().iter().any(|f| f.id == id) {
            id.push('\'');
        }
        out.add_face(id, sides)?;
    }
    out.validate()?;
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct ExtensionCount {
    pub count: usize,
    pub representatives: Vec<ShapeComplex>,
    pub families: usize,
    pub q_star: u64,
    /// Fewest triangles added over all extensions.
    pub missing_chambers: Option<usize>,
}

pub fn count_extensions(c: &ShapeComplex) -> Result<ExtensionCount, ExtendError> {
    let t = triangulated(c)?;
    let report = families_of(&t)?;
    let mut reps: Vec<ShapeComplex> = Vec::new();
    let mut missing: Option<usize> = None;
    for f in &report.families {
        let x = build_extension(&t, &report.invariant, &report.walks, f)?;
        missing = Some(missing.map_or(f.walks.len(), |m| m.min(f.walks.len())));
        if !reps
            .iter()
            .any(|r| complex_isomorphic(r, &x, IsoMode::Default).is_some())
        {
            reps.push(x);
        }
    }
    Ok(ExtensionCount {
        count: reps.len(),
        representatives: reps,
        families: report.families.len(),
        q_star: report.invariant.q_star,
        missing_chambers: missing,
    })
}

#[derive(Debug, Clone)]
pub struct BuildingWitness {
    pub extended: ShapeComplex,
    pub certificates: Vec<(String, Option<BuildingCertificate>)>,
}

pub fn link_certificates(c: &ShapeComplex) -> Vec<(String, Option<BuildingCertificate>)> {
    (0..c.vertex_count())
        .map(|v| {
            (
                c.vertex_id(v).to_string(),
                plane::is_building_a2(&c.link(v)),
            )
        })
        .collect()
}

pub fn is_building_with_chambers_missing(
    c: &ShapeComplex,
) -> Result<Option<BuildingWitness>, ExtendError> {
    let count = count_extensions(c)?;
    Ok(count
        .representatives
        .into_iter()
        .next()
        .map(|x| BuildingWitness {
            certificates: link_certificates(&x),
            extended: x,
        }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lone_triangle() -> ShapeComplex {
        let mut c = ShapeComplex::new("tri");
        for v in ["a", "b", "c"] {
            c.add_vertex(v).unwrap();
        }
        c.add_edge("x", 0, 1).unwrap();
        c.add_edge("y", 1, 2).unwrap();
        c.add_edge("z", 2, 0).unwrap();
        c.add_face(
            "t",
            (0..3)
                .map(|i| Side {
                    edge: i,
                    forward: true,
                    angle: 2,
                })
                .collect(),
        )
        .unwrap();
        c
    }

    #[test]
    fn needs_a_projective_order() {
        // every link has two vertices, and 2(q²+q+1) = 2 gives q = 0
        let inv = extension_invariant(&lone_triangle()).unwrap();
        assert_eq!(inv.q_star, 0);
        assert!(inv.edges.is_empty());
        assert!(alternating_six_cycles(&inv).is_empty());
    }

    #[test]
    fn rejects_polygons() {
        let c = complex::catalog_complex("V6_0").unwrap();
        assert!(matches!(
            extension_invariant(&c),
            Err(ExtendError::Complex(ComplexError::NotTriangulated(_)))
        ));
    }

    fn inv_of(name: &str) -> (ShapeComplex, ExtensionInvariant) {
        let t = triangulated(&complex::catalog_complex(name).unwrap()).unwrap();
        let inv = extension_invariant(&t).unwrap();
        (t, inv)
    }

    #[test]
    fn lozenge_diagonals_are_deficient() {
        let (t, inv) = inv_of("V6_0");
        assert_eq!(inv.q_star, 2);
        assert_eq!(inv.vertices.len(), 6);
        let valency = t.face_valencies();
        for (_, e) in inv.type0() {
            let InvEdgeKind::Deficient { edge, label } = e.kind else {
                unreachable!()
            };
            assert_eq!((valency[edge], label), (2, 1));
            assert_eq!(t.edges()[edge].src, t.edges()[edge].dst);
        }
        assert_eq!(inv.type0().count(), 3);
    }

    #[test]
    fn corners_never_join_an_end_to_itself() {
        for name in complex::CATALOG_NAMES {
            let (_, inv) = inv_of(name);
            for (_, e) in inv.type1() {
                assert_ne!(e.a, e.b);
                assert_eq!(inv.vertices[e.a].qvertex, inv.vertices[e.b].qvertex);
            }
        }
    }

    #[test]
    fn walks_are_listed_once() {
        let (_, inv) = inv_of("V6_3_sec6");
        let walks = alternating_six_cycles(&inv);
        assert_eq!(walks.len(), 3);
        for w in &walks {
            // each walk goes back and forth along one component
            assert!(!w.is_injective());
            let used: BTreeSet<usize> = w.deficient_steps().map(|s| s.0).collect();
            assert_eq!(used.len(), 1);
            assert_eq!(SixWalk::canonical(&w.steps), *w);
        }
    }

    #[test]
    fn extension_closes_every_deficient_edge() {
        let (t, inv) = inv_of("V6_1");
        let walks = alternating_six_cycles(&inv);
        let families = search_families(&t, &inv, &walks, None);
        assert_eq!(families.len(), 1);
        let x = build_extension(&t, &inv, &walks, &families[0]).unwrap();
        assert!(x.face_valencies().iter().all(|&v| v == 3));
        assert_eq!(x.euler_characteristic(), t.euler_characteristic() + 1);
        let added: Vec<usize> = (t.face_count()..x.face_count()).collect();
        assert!(complex_isomorphic(&x.remove_faces(&added), &t, IsoMode::Strict).is_some());
    }
}
