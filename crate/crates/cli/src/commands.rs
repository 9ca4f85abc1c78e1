use std::collections::BTreeMap;
use std::fmt::Write as _;

use chambers_core::complex::{self, ShapeComplex};
use chambers_core::develop::{self, DevelopedBall};
use chambers_core::extend;
use chambers_core::mgraph::{self, MetricGraph};
use chambers_core::prescribe::{self, Prescription};
use chambers_core::rank::{self, Norm, RankValue};
use chambers_core::{plane, surgery};
use num_rational::Ratio;
use serde_json::{json, Value};

use crate::input::{self, Object};
use crate::{CliError, Command, DevelopArgs, ExtendArgs, Output, PNorm};

fn rat(r: Ratio<i64>) -> Value {
    json!({ "num": r.numer(), "den": r.denom() })
}

fn rank_json(v: RankValue) -> Value {
    match v {
        RankValue::Exact(r) => rat(r),
        RankValue::Approx(x) => json!(x),
    }
}

fn rank_text(v: RankValue) -> String {
    match v {
        RankValue::Exact(r) => r.to_string(),
        RankValue::Approx(x) => format!("{x:.6}"),
    }
}

fn census_json(c: &BTreeMap<Ratio<i64>, usize>) -> Value {
    Value::Array(
        c.iter()
            .map(|(r, n)| json!({ "rank": rat(*r), "count": n }))
            .collect(),
    )
}

fn census_text(c: &BTreeMap<Ratio<i64>, usize>) -> String {
    let parts: Vec<String> = c.iter().map(|(r, n)| format!("{r}: {n}")).collect();
    format!("{{{}}}", parts.join(", "))
}

fn spectrum_json(s: &mgraph::LengthSpectrum) -> Value {
    Value::Array(s.pairs().iter().map(|(l, m)| json!([l, m])).collect())
}

/// Name of the built-in graph isometric to `g`, if any.
fn known_graph(g: &MetricGraph) -> Option<String> {
    let h = plane::incidence_graph(2).expect("2 is prime");
    if mgraph::is_isometric(g, &h) {
        return Some("H".into());
    }
    surgery::CATALOG_GRAPH_NAMES
        .iter()
        .find(|n| mgraph::is_isometric(g, &surgery::catalog_graph(n).expect("catalog name")))
        .map(|n| n.to_string())
}

fn norm_of(p: PNorm) -> Norm {
    match p {
        PNorm::One => Norm::Mean,
        PNorm::Inf => Norm::Max,
    }
}

pub fn dispatch(cmd: &Command) -> Result<Output, CliError> {
    match cmd {
        Command::Catalog { name } => catalog(name.as_deref()),
        Command::Classify { q, k } => classify(*q, *k),
        Command::Spectrum { input } => spectrum(input),
        Command::Rank { input, p } => rank_cmd(input, *p),
        Command::Link { input, vertex } => link(input, vertex.as_deref()),
        Command::Npc { input } => npc(input),
        Command::H1 {
            input,
            presentation,
        } => h1(input, *presentation),
        Command::Invariant { input } => invariant(input),
        Command::Extend(args) => extend_cmd(args),
        Command::Develop(args) => develop_cmd(args),
        Command::Prescribe { input, radius } => prescribe_cmd(input, *radius),
        Command::Complete { input } => complete(input),
    }
}

fn catalog(name: Option<&str>) -> Result<Output, CliError> {
    if let Some(name) = name {
        let loaded = input::load(&format!("catalog:{name}"))?;
        let (kind, text) = match &loaded.object {
            Object::Graph(g) => ("graph", g.to_string()),
            Object::Complex(c) => (
                "complex",
                complex::catalog_source(name).map_or_else(|| c.to_string(), str::to_string),
            ),
        };
        let result = json!({ "name": name, "kind": kind, "text": text });
        return Ok(Output {
            text,
            result,
            inputs: vec![loaded.digest_json()],
        });
    }
    let mut text = String::from("graphs (order-2 building with three chambers removed):\n");
    let mut graphs = Vec::new();
    for (name, class) in surgery::catalog() {
        let spectrum = mgraph::length_spectrum(&class.graph);
        let _ = writeln!(
            text,
            "  {name}  orbit {:>3}  profile {:?}  spectrum {spectrum}",
            class.orbit_size, class.profile
        );
        graphs.push(json!({
            "name": name,
            "orbit_size": class.orbit_size,
            "profile": class.profile,
            "spectrum": spectrum_json(&spectrum),
        }));
    }
    text.push_str("  H   the order-2 building itself\ncomplexes:\n");
    let mut complexes = Vec::new();
    for c in complex::catalog_complexes() {
        let counts = (c.vertex_count(), c.edge_count(), c.face_count());
        let _ = writeln!(
            text,
            "  {:<10} V={} E={} F={}",
            c.name, counts.0, counts.1, counts.2
        );
        complexes.push(
            json!({ "name": c.name, "vertices": counts.0, "edges": counts.1, "faces": counts.2 }),
        );
    }
    Ok(Output {
        text,
        result: json!({ "graphs": graphs, "complexes": complexes }),
        inputs: vec![],
    })
}

fn classify(q: u64, k: usize) -> Result<Output, CliError> {
    let h = plane::incidence_graph(q).map_err(CliError::domain)?;
    let c = surgery::classify_in(&h, k);
    let mut text = format!(
        "{} classes of {k} disjoint chambers in the order-{q} building\n",
        c.classes.len()
    );
    let mut rows = Vec::new();
    for (i, class) in c.classes.iter().enumerate() {
        let spectrum = mgraph::length_spectrum(&class.graph);
        let name = if q == 2 && k == 3 {
            surgery::catalog_name(&class.profile, &class.graph)
        } else {
            None
        };
        let rank = rank::graph_rank(&class.graph, Norm::Mean).ok();
        let aut = mgraph::automorphism_group(&class.graph).order;
        let edges: Vec<&str> = class
            .edges
            .iter()
            .map(|&e| h.edges()[e].id.as_str())
            .collect();
        let _ = writeln!(
            text,
            "{:>2} {:<3} orbit {:>4}  profile {:?}  |Aut| {:>3}  rank {:<7} spectrum {spectrum}  edges {}",
            i + 1,
            name.unwrap_or("-"),
            class.orbit_size,
            class.profile,
            aut,
            rank.map_or("-".into(), rank_text),
            edges.join(",")
        );
        rows.push(json!({
            "name": name,
            "orbit_size": class.orbit_size,
            "profile": class.profile,
            "aut_order": aut as u64,
            "rank": rank.map(rank_json),
            "spectrum": spectrum_json(&spectrum),
            "edges": edges,
        }));
    }
    let _ = writeln!(text, "{} graphs up to isomorphism", c.graph_classes);
    Ok(Output {
        text,
        result: json!({ "q": q, "k": k, "classes": rows, "graph_classes": c.graph_classes }),
        inputs: vec![],
    })
}

fn spectrum(source: &str) -> Result<Output, CliError> {
    let (g, loaded) = input::load_graph(source)?;
    let s = mgraph::length_spectrum(&g);
    let girth = mgraph::girth(&g);
    let text = format!(
        "spectrum {s}\ngirth {}\n",
        girth.map_or("none".into(), |x| x.to_string())
    );
    let result = json!({ "spectrum": spectrum_json(&s), "girth": girth, "has_cycle_component": s.has_cycle_component });
    Ok(Output {
        text,
        result,
        inputs: vec![loaded.digest_json()],
    })
}

fn rank_cmd(source: &str, p: PNorm) -> Result<Output, CliError> {
    let loaded = input::load(source)?;
    let norm = norm_of(p);
    let (text, result) = match &loaded.object {
        Object::Graph(g) => {
            let value = rank::graph_rank(g, norm).map_err(CliError::domain)?;
            let census = rank::root_census(g).map_err(CliError::domain)?;
            let roots: usize = census.values().sum();
            let aut = mgraph::automorphism_group(g).order;
            let plus = rank::is_rank_one_plus(g).map_err(CliError::domain)?;
            let text = format!(
                "rank {}\nroots {roots}\ncensus {}\n|Aut| {aut}\nrank 1+ {plus}\n",
                rank_text(value),
                census_text(&census)
            );
            let result = json!({
                "kind": "graph",
                "rank": rank_json(value),
                "roots": roots,
                "census": census_json(&census),
                "aut_order": aut as u64,
                "rank_one_plus": plus,
            });
            (text, result)
        }
        Object::Complex(c) => {
            let local = rank::local_rank_complex(c).map_err(CliError::domain)?;
            let mut text = format!(
                "local rank {}\n",
                local
                    .rational()
                    .map_or("none (no roots)".into(), |r| r.to_string())
            );
            let mut per_vertex = Vec::new();
            for v in 0..c.vertex_count() {
                let value = rank::graph_rank(&c.link(v), norm).ok();
                let _ = writeln!(
                    text,
                    "  {}: {}",
                    c.vertex_id(v),
                    value.map_or("-".into(), rank_text)
                );
                per_vertex.push(json!({ "vertex": c.vertex_id(v), "rank": value.map(rank_json) }));
            }
            let result = json!({
                "kind": "complex",
                "local_rank": local.rational().map(rat),
                "thick": local.thick,
                "per_vertex": per_vertex,
            });
            (text, result)
        }
    };
    Ok(Output {
        text,
        result,
        inputs: vec![loaded.digest_json()],
    })
}

fn link(source: &str, vertex: Option<&str>) -> Result<Output, CliError> {
    let (c, loaded) = input::load_complex(source)?;
    let targets: Vec<usize> = match vertex {
        Some(id) => vec![c
            .vertex_index(id)
            .ok_or_else(|| CliError::Usage(format!("no vertex `{id}`")))?],
        None => (0..c.vertex_count()).collect(),
    };
    let mut text = String::new();
    let mut links = Vec::new();
    for v in targets {
        let l = c.link(v);
        let known = known_graph(&l);
        let girth = mgraph::girth(&l);
        let _ = writeln!(
            text,
            "# vertex {}: girth {}, isometric to {}",
            c.vertex_id(v),
            girth.map_or("none".into(), |x| x.to_string()),
            known.as_deref().unwrap_or("no built-in graph")
        );
        text.push_str(&l.to_string());
        links.push(json!({ "vertex": c.vertex_id(v), "girth": girth, "known_as": known, "graph": l.to_json() }));
    }
    Ok(Output {
        text,
        result: json!({ "links": links }),
        inputs: vec![loaded.digest_json()],
    })
}

fn npc(source: &str) -> Result<Output, CliError> {
    let (c, loaded) = input::load_complex(source)?;
    c.validate().map_err(CliError::domain)?;
    let r = complex::is_npc(&c);
    let mut text = format!(
        "npc {}\nboundary {}\n",
        r.npc,
        if r.boundary.is_empty() {
            "none".into()
        } else {
            r.boundary.join(" ")
        }
    );
    for (v, g) in &r.girths {
        let _ = writeln!(
            text,
            "  {v}: girth {}",
            g.map_or("none".into(), |x| x.to_string())
        );
    }
    let girths: Vec<Value> = r
        .girths
        .iter()
        .map(|(v, g)| json!({ "vertex": v, "girth": g }))
        .collect();
    let result = json!({ "npc": r.npc, "boundary": r.boundary, "girths": girths });
    Ok(Output {
        text,
        result,
        inputs: vec![loaded.digest_json()],
    })
}

fn h1(source: &str, with_presentation: bool) -> Result<Output, CliError> {
    let (c, loaded) = input::load_complex(source)?;
    let h = complex::homology_h1(&c).map_err(CliError::domain)?;
    let mut text = format!("{h}\n");
    let mut result =
        json!({ "free_rank": h.free_rank, "torsion": h.torsion, "text": h.to_string() });
    if with_presentation {
        let p = complex::presentation(&c).map_err(CliError::domain)?;
        let _ = writeln!(text, "{p}");
        result["presentation"] = json!(p.to_string());
    }
    Ok(Output {
        text,
        result,
        inputs: vec![loaded.digest_json()],
    })
}

fn invariant_parts(
    c: &ShapeComplex,
) -> Result<(ShapeComplex, extend::ExtensionInvariant), CliError> {
    let t = extend::triangulated(c).map_err(CliError::domain)?;
    let inv = extend::extension_invariant(&t).map_err(CliError::domain)?;
    Ok((t, inv))
}

fn invariant_json(t: &ShapeComplex, inv: &extend::ExtensionInvariant) -> Value {
    let g = inv.to_graph(t);
    let edges: Vec<Value> = inv
        .edges
        .iter()
        .map(|e| {
            let (kind, label) = match e.kind {
                extend::InvEdgeKind::Deficient { label, .. } => (0, Some(label)),
                extend::InvEdgeKind::Corner => (1, None),
            };
            json!({ "a": g.vertex_id(e.a), "b": g.vertex_id(e.b), "type": kind, "label": label })
        })
        .collect();
    json!({ "q_star": inv.q_star, "vertices": g.vertices(), "edges": edges, "skipped": inv.skipped })
}

fn invariant(source: &str) -> Result<Output, CliError> {
    let (c, loaded) = input::load_complex(source)?;
    let (t, inv) = invariant_parts(&c)?;
    let walks = extend::alternating_six_cycles(&inv);
    let mut text = format!(
        "# q* = {}, {} alternating 6-walks\n",
        inv.q_star,
        walks.len()
    );
    text.push_str(&inv.to_text(&t));
    let mut result = invariant_json(&t, &inv);
    result["walks"] = json!(walks.len());
    Ok(Output {
        text,
        result,
        inputs: vec![loaded.digest_json()],
    })
}

fn extend_cmd(args: &ExtendArgs) -> Result<Output, CliError> {
    let (c, loaded) = input::load_complex(&args.input)?;
    let (t, inv) = invariant_parts(&c)?;
    let report = extend::families_of(&t).map_err(CliError::domain)?;
    let count = extend::count_extensions(&c).map_err(CliError::domain)?;
    let mut text = String::new();
    let mut result = json!({
        "q_star": count.q_star,
        "families": count.families,
        "extensions": count.count,
        "missing_chambers": count.missing_chambers,
    });
    if args.invariant {
        text.push_str(&inv.to_text(&t));
        result["invariant"] = invariant_json(&t, &inv);
    }
    if args.list_families {
        let g = inv.to_graph(&t);
        let mut listed = Vec::new();
        for (i, f) in report.families.iter().enumerate() {
            let walks: Vec<Vec<String>> = f
                .walks
                .iter()
                .map(|&w| {
                    report.walks[w]
                        .steps
                        .iter()
                        .map(|&(_, v)| g.vertex_id(v).to_string())
                        .collect()
                })
                .collect();
            let _ = writeln!(text, "family {}:", i + 1);
            for w in &walks {
                let _ = writeln!(text, "  {}", w.join(" "));
            }
            listed.push(json!(walks));
        }
        result["family_walks"] = json!(listed);
    }
    let mut certificates = Vec::new();
    for x in &count.representatives {
        let certs = extend::link_certificates(x);
        let all = certs.iter().all(|(_, c)| c.is_some());
        certificates.push(json!({ "all_links_buildings": all }));
    }
    result["representatives"] = json!(certificates);
    if let Some(dir) = &args.emit {
        std::fs::create_dir_all(dir)
            .map_err(|e| CliError::Usage(format!("cannot create `{}`: {e}", dir.display())))?;
        let mut written = Vec::new();
        for (i, x) in count.representatives.iter().enumerate() {
            let path = dir.join(format!("{}_ext{}.cx", c.name, i + 1));
            std::fs::write(&path, x.to_string())
                .map_err(|e| CliError::Usage(format!("cannot write: {e}")))?;
            written.push(path.display().to_string());
        }
        result["emitted"] = json!(written);
    }
    let _ = writeln!(text, "extensions {}", count.count);
    if !args.count {
        let _ = writeln!(text, "families {}", count.families);
        let _ = writeln!(
            text,
            "missing chambers {}",
            count.missing_chambers.map_or("-".into(), |m| m.to_string())
        );
    }
    Ok(Output {
        text,
        result,
        inputs: vec![loaded.digest_json()],
    })
}

fn flat_census(b: &DevelopedBall) -> Result<BTreeMap<usize, usize>, CliError> {
    let mut census = BTreeMap::new();
    for v in b.interior() {
        *census
            .entry(develop::flat_disk_radius(b, v).map_err(CliError::domain)?)
            .or_insert(0) += 1;
    }
    Ok(census)
}

fn develop_cmd(args: &DevelopArgs) -> Result<Output, CliError> {
    let (c, loaded) = input::load_complex(&args.input)?;
    let t = extend::triangulated(&c).map_err(CliError::domain)?;
    let base = match &args.base {
        Some(id) => t
            .vertex_index(id)
            .ok_or_else(|| CliError::Usage(format!("no vertex `{id}`")))?,
        None => 0,
    };
    let b = develop::develop_ball(&t, base, args.radius).map_err(CliError::domain)?;
    let cover = develop::verify_cover(&b);
    let counts = (
        b.complex.vertex_count(),
        b.complex.edge_count(),
        b.complex.face_count(),
    );
    let mut text = format!(
        "ball of radius {} around {}: V={} E={} F={}\ncover verified {cover}\n",
        args.radius,
        t.vertex_id(base),
        counts.0,
        counts.1,
        counts.2
    );
    let mut result = json!({
        "radius": args.radius,
        "base": t.vertex_id(base),
        "vertices": counts.0,
        "edges": counts.1,
        "faces": counts.2,
        "cover_verified": cover,
    });
    let mut inputs = vec![loaded.digest_json()];
    if args.flat_census && args.radius > 0 {
        let centre = develop::flat_disk_radius(&b, b.base).map_err(CliError::domain)?;
        let census = flat_census(&b)?;
        let _ = writeln!(text, "flat disk radius at base {centre}");
        let _ = writeln!(text, "flat disk census {census:?}");
        result["flat_radius_base"] = json!(centre);
        result["flat_census"] = json!(census
            .iter()
            .map(|(r, n)| json!([r, n]))
            .collect::<Vec<_>>());
    }
    if let Some(gspec) = &args.prescribe {
        let (g, gl) = input::load_graph(gspec)?;
        let (p, _) = prescribe::prescribe_link(&g, args.radius).map_err(CliError::domain)?;
        let (line, value) = prescription_summary(&p);
        let _ = writeln!(text, "prescribe {line}");
        result["prescribe"] = value;
        inputs.push(gl.digest_json());
    }
    if let Some(path) = &args.emit {
        std::fs::write(path, b.to_text())
            .map_err(|e| CliError::Usage(format!("cannot write: {e}")))?;
        result["emitted"] = json!(path.display().to_string());
    }
    Ok(Output {
        text,
        result,
        inputs,
    })
}

fn prescription_summary(p: &Prescription) -> (String, Value) {
    match p {
        Prescription::Sat(b) => (
            format!(
                "SAT (witness with {} vertices, {} triangles)",
                b.complex.vertex_count(),
                b.complex.face_count()
            ),
            json!({ "sat": true, "vertices": b.complex.vertex_count(), "faces": b.complex.face_count() }),
        ),
        Prescription::Unsat { depth } => (
            format!("UNSAT at radius {depth}"),
            json!({ "sat": false, "depth": depth }),
        ),
    }
}

fn prescribe_cmd(source: &str, radius: usize) -> Result<Output, CliError> {
    let (g, loaded) = input::load_graph(source)?;
    let (p, stats) = prescribe::prescribe_link(&g, radius).map_err(CliError::domain)?;
    let (line, mut value) = prescription_summary(&p);
    value["nodes"] = json!(stats.nodes);
    value["radius"] = json!(radius);
    Ok(Output {
        text: format!("{line}\n"),
        result: value,
        inputs: vec![loaded.digest_json()],
    })
}

fn complete(source: &str) -> Result<Output, CliError> {
    let (g, loaded) = input::load_graph(source)?;
    let c = plane::complete_into_building(&g);
    let name_pairs = |set: &Vec<(usize, usize)>| -> Vec<[String; 2]> {
        set.iter()
            .map(|&(a, b)| [g.vertex_id(a).to_string(), g.vertex_id(b).to_string()])
            .collect()
    };
    let mut text = format!(
        "order {}\ncompletions {}\nup to Aut(graph) {}\nup to Aut(building) {}\n",
        c.order,
        c.raw.len(),
        c.up_to_aut.len(),
        c.up_to_target.len()
    );
    for (i, set) in c.up_to_aut.iter().enumerate() {
        let pairs: Vec<String> = name_pairs(set)
            .iter()
            .map(|[a, b]| format!("{a}-{b}"))
            .collect();
        let _ = writeln!(text, "  class {}: {}", i + 1, pairs.join(" "));
    }
    let result = json!({
        "order": c.order,
        "completions": c.raw.len(),
        "up_to_aut": c.up_to_aut.iter().map(name_pairs).collect::<Vec<_>>(),
        "up_to_target": c.up_to_target.len(),
    });
    Ok(Output {
        text,
        result,
        inputs: vec![loaded.digest_json()],
    })
}
