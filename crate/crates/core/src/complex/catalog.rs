use super::ShapeComplex;

const SOURCES: &[(&str, &str)] = &[
    ("V6_0", include_str!("../../catalog/V6_0.cx")),
    ("V6_1", include_str!("../../catalog/V6_1.cx")),
    ("V6_3_sec4", include_str!("../../catalog/V6_3_sec4.cx")),
    ("V6_3_sec6", include_str!("../../catalog/V6_3_sec6.cx")),
    ("V1", include_str!("../../catalog/V1.cx")),
    ("V2", include_str!("../../catalog/V2.cx")),
    ("V3", include_str!("../../catalog/V3.cx")),
    ("V4", include_str!("../../catalog/V4.cx")),
    ("V_fig4", include_str!("../../catalog/V_fig4.cx")),
    ("V_fig5", include_str!("../../catalog/V_fig5.cx")),
    ("V_groupG", include_str!("../../catalog/V_groupG.cx")),
];

pub const CATALOG_NAMES: [&str; 11] = [
    "V6_0",
    "V6_1",
    "V6_3_sec4",
    "V6_3_sec6",
    "V1",
    "V2",
    "V3",
    "V4",
    "V_fig4",
    "V_fig5",
    "V_groupG",
];

/// The built-in complexes, in a fixed order.
pub fn catalog_complexes() -> Vec<ShapeComplex> {
    SOURCES
        .iter()
        .map(|(_, src)| ShapeComplex::parse(src).expect("catalog files parse"))
        .collect()
}

pub fn catalog_complex(name: &str) -> Option<ShapeComplex> {
    SOURCES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, src)| ShapeComplex::parse(src).expect("catalog files parse"))
}

/// Raw text of a catalog entry, as shipped.
pub fn catalog_source(name: &str) -> Option<&'static str> {
    SOURCES.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}
