use std::path::Path;

use chambers_core::complex::{self, ShapeComplex};
use chambers_core::{plane, surgery, MetricGraph};
use sha2::{Digest, Sha256};

use crate::CliError;

pub enum Object {
    Graph(MetricGraph),
    Complex(ShapeComplex),
}

pub struct Loaded {
    pub object: Object,
    pub source: String,
    pub sha256: String,
}

impl Loaded {
    pub fn digest_json(&self) -> serde_json::Value {
        serde_json::json!({ "source": self.source, "sha256": self.sha256 })
    }
}

fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn catalog(name: &str) -> Result<(Object, String), CliError> {
    if name == "H" || name == "Heawood" {
        let mut g = plane::incidence_graph(2).expect("2 is prime");
        g.name = "H".into();
        let text = g.to_string();
        return Ok((Object::Graph(g), text));
    }
    if let Some(g) = surgery::catalog_graph(name) {
        let text = g.to_string();
        return Ok((Object::Graph(g), text));
    }
    if let (Some(c), Some(text)) = (
        complex::catalog_complex(name),
        complex::catalog_source(name),
    ) {
        return Ok((Object::Complex(c), text.to_string()));
    }
    Err(CliError::Usage(format!("no catalog entry named `{name}`")))
}

fn first_keyword(text: &str) -> Option<&str> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .and_then(|l| l.split_whitespace().next())
}

pub fn parse_bytes(bytes: &[u8], json_hint: bool) -> Result<Object, CliError> {
    let text = std::str::from_utf8(bytes)
        .map_err(|e| CliError::Domain(format!("input is not UTF-8: {e}")))?;
    if json_hint || text.trim_start().starts_with('{') {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| CliError::Domain(e.to_string()))?;
        return if value.get("faces").is_some() {
            Ok(Object::Complex(
                ShapeComplex::from_json(&value).map_err(CliError::domain)?,
            ))
        } else {
            Ok(Object::Graph(
                MetricGraph::from_json(&value).map_err(CliError::domain)?,
            ))
        };
    }
    match first_keyword(text) {
        Some("graph") => Ok(Object::Graph(
            MetricGraph::parse(text).map_err(CliError::domain)?,
        )),
        Some("complex") => Ok(Object::Complex(
            ShapeComplex::parse(text).map_err(CliError::domain)?,
        )),
        _ => Err(CliError::Usage(
            "unknown file format: expected a `graph` or `complex` header".into(),
        )),
    }
}

pub fn load(source: &str) -> Result<Loaded, CliError> {
    if let Some(name) = source.strip_prefix("catalog:") {
        let (object, text) = catalog(name)?;
        return Ok(Loaded {
            object,
            source: source.to_string(),
            sha256: digest(text.as_bytes()),
        });
    }
    let path = Path::new(source);
    let bytes =
        std::fs::read(path).map_err(|e| CliError::Usage(format!("cannot read `{source}`: {e}")))?;
    let json_hint = path.extension().is_some_and(|e| e == "json");
    let object = parse_bytes(&bytes, json_hint)?;
    Ok(Loaded {
        object,
        source: source.to_string(),
        sha256: digest(&bytes),
    })
}

pub fn load_graph(source: &str) -> Result<(MetricGraph, Loaded), CliError> {
    let loaded = load(source)?;
    match &loaded.object {
        Object::Graph(g) => Ok((g.clone(), loaded)),
        Object::Complex(_) => Err(CliError::Usage(format!(
            "`{source}` is a complex; a graph is expected"
        ))),
    }
}

pub fn load_complex(source: &str) -> Result<(ShapeComplex, Loaded), CliError> {
    let loaded = load(source)?;
    match &loaded.object {
        Object::Complex(c) => Ok((c.clone(), loaded)),
        Object::Graph(_) => Err(CliError::Usage(format!(
            "`{source}` is a graph; a complex is expected"
        ))),
    }
}
