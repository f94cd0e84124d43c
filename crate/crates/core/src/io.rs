//! Graph document format, instance bundles, and DOT export.
//!
//! The text format is line-oriented:
//!
//! ```text
//! terminal-graph v1
//! terminals t1 t2
//! vertex t1 0/1 0/1
//! vertex t2 1/1 0/1
//! edge t1 t2 7/4
//! ```
//!
//! Weights and coordinates are exact fractions and always carry an explicit
//! denominator. Serialization is deterministic: vertices sorted by label,
//! edges sorted by endpoint labels then weight. An instance bundle is a
//! directory with fixed member names (`dual.graph`, `primal.graph`, `meta`);
//! loading regenerates the instance from the metadata parameters and demands
//! byte equality with the stored files.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::dblexp::{generate_dblexp, DblExpInstance};
use crate::error::{GraphError, Result};
use crate::geom::Point;
use crate::graph::TerminalGraph;
use crate::plane::PlaneGraph;
use crate::planar::{generate_planar_dual, important_cycle, PlanarInstance, Signature};
use crate::weight::Weight;

const FORMAT_HEADER: &str = "terminal-graph v1";

/// Parsed or to-be-serialized graph document. Vertices are kept sorted by
/// label; edges sorted by (endpoint labels, weight).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphDocument {
    pub terminals: Vec<String>,
    pub vertices: Vec<(String, Option<Point>)>,
    pub edges: Vec<(String, String, Weight)>,
}

fn rational_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn parse_rational(token: &str, line: usize) -> Result<BigRational> {
    let w = Weight::from_str(token).map_err(|e| GraphError::Parse {
        line,
        message: format!("bad fraction '{token}': {e}"),
    })?;
    Ok(w.as_rational().clone())
}

/// Document for a terminal graph, with optional per-label coordinates.
/// Also returns the serialized edge order as a list of original edge ids.
pub fn document_from_graph(
    g: &TerminalGraph,
    coords: Option<&BTreeMap<String, Point>>,
) -> (GraphDocument, Vec<usize>) {
    let mut vertices: Vec<(String, Option<Point>)> = g
        .labels()
        .iter()
        .map(|l| (l.clone(), coords.and_then(|c| c.get(l).cloned())))
        .collect();
    vertices.sort_by(|a, b| a.0.cmp(&b.0));

    let mut order: Vec<usize> = (0..g.edge_count()).collect();
    let key = |eid: usize| {
        let e = g.edge(eid);
        let (a, b) = if g.label(e.u) <= g.label(e.v) {
            (g.label(e.u), g.label(e.v))
        } else {
            (g.label(e.v), g.label(e.u))
        };
        (a.to_string(), b.to_string(), e.weight.clone())
    };
    order.sort_by(|&x, &y| key(x).cmp(&key(y)));
    let edges = order
        .iter()
        .map(|&eid| {
            let (a, b, w) = key(eid);
            (a, b, w)
        })
        .collect();
    let doc = GraphDocument {
        terminals: g.terminal_labels().iter().map(|s| s.to_string()).collect(),
        vertices,
        edges,
    };
    (doc, order)
}

/// Document for a plane graph (no terminals; coordinates from the drawing).
/// Bend points of polyline edges are drawing artifacts and are not stored.
pub fn document_from_plane(p: &PlaneGraph) -> (GraphDocument, Vec<usize>) {
    let mut vertices: Vec<(String, Option<Point>)> = p
        .vertices()
        .iter()
        .map(|v| (v.label.clone(), Some(v.position.clone())))
        .collect();
    vertices.sort_by(|a, b| a.0.cmp(&b.0));

    let mut order: Vec<usize> = (0..p.edge_count()).collect();
    let key = |eid: usize| {
        let e = p.edge(eid);
        let (lu, lv) = (&p.vertex(e.u).label, &p.vertex(e.v).label);
        let (a, b) = if lu <= lv { (lu, lv) } else { (lv, lu) };
        (a.clone(), b.clone(), e.weight.clone())
    };
    order.sort_by(|&x, &y| key(x).cmp(&key(y)));
    let edges = order
        .iter()
        .map(|&eid| {
            let (a, b, w) = key(eid);
            (a, b, w)
        })
        .collect();
    (GraphDocument { terminals: Vec::new(), vertices, edges }, order)
}

pub fn serialize_document(doc: &GraphDocument) -> String {
    let mut out = String::new();
    out.push_str(FORMAT_HEADER);
    out.push('\n');
    if !doc.terminals.is_empty() {
        out.push_str("terminals ");
        out.push_str(&doc.terminals.join(" "));
        out.push('\n');
    }
    for (label, coord) in &doc.vertices {
        match coord {
            Some(p) => out.push_str(&format!(
                "vertex {label} {} {}\n",
                rational_string(&p.x),
                rational_string(&p.y)
            )),
            None => out.push_str(&format!("vertex {label}\n")),
        }
    }
    for (u, v, w) in &doc.edges {
        out.push_str(&format!("edge {u} {v} {w}\n"));
    }
    out
}

pub fn parse_document(text: &str) -> Result<GraphDocument> {
    let mut lines = text.lines().enumerate();
    let header = loop {
        match lines.next() {
            Some((_, l)) if l.trim().is_empty() || l.trim_start().starts_with('#') => continue,
            Some((n, l)) => break (n + 1, l.trim()),
            None => {
                return Err(GraphError::Parse { line: 1, message: "empty document".into() })
            }
        }
    };
    if header.1 != FORMAT_HEADER {
        return Err(GraphError::Parse {
            line: header.0,
            message: format!("expected header '{FORMAT_HEADER}', got '{}'", header.1),
        });
    }
    let mut terminals = Vec::new();
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    for (idx, raw) in lines {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        match tokens[0] {
            "terminals" => {
                if !terminals.is_empty() {
                    return Err(GraphError::Parse {
                        line,
                        message: "duplicate terminals line".into(),
                    });
                }
                if tokens.len() < 3 {
                    return Err(GraphError::Parse {
                        line,
                        message: "need at least 2 terminals".into(),
                    });
                }
                terminals = tokens[1..].iter().map(|s| s.to_string()).collect();
            }
            "vertex" => match tokens.len() {
                2 => vertices.push((tokens[1].to_string(), None)),
                4 => {
                    let x = parse_rational(tokens[2], line)?;
                    let y = parse_rational(tokens[3], line)?;
                    vertices.push((tokens[1].to_string(), Some(Point::new(x, y))));
                }
                _ => {
                    return Err(GraphError::Parse {
                        line,
                        message: "vertex takes a label and optionally two coordinates".into(),
                    })
                }
            },
            "edge" => {
                if tokens.len() != 4 {
                    return Err(GraphError::Parse {
                        line,
                        message: "edge takes two labels and a weight".into(),
                    });
                }
                let w = Weight::from_str(tokens[3]).map_err(|e| GraphError::Parse {
                    line,
                    message: format!("bad weight '{}': {e}", tokens[3]),
                })?;
                edges.push((tokens[1].to_string(), tokens[2].to_string(), w));
            }
            other => {
                return Err(GraphError::Parse {
                    line,
                    message: format!("unknown record '{other}'"),
                })
            }
        }
    }
    Ok(GraphDocument { terminals, vertices, edges })
}

/// Materialize a terminal graph from a document. Every terminal and edge
/// endpoint must name a declared vertex.
pub fn graph_from_document(doc: &GraphDocument) -> Result<TerminalGraph> {
    let mut g = TerminalGraph::new();
    for (label, _) in &doc.vertices {
        g.add_vertex(label.clone())?;
    }
    for (u, v, w) in &doc.edges {
        let ui = g
            .vertex_by_label(u)
            .ok_or_else(|| GraphError::VertexNotFound(u.clone()))?;
        let vi = g
            .vertex_by_label(v)
            .ok_or_else(|| GraphError::VertexNotFound(v.clone()))?;
        g.add_edge(ui, vi, w.clone())?;
    }
    let mut terminals = Vec::new();
    for t in &doc.terminals {
        terminals.push(
            g.vertex_by_label(t)
                .ok_or_else(|| GraphError::VertexNotFound(format!("terminal {t}")))?,
        );
    }
    g.set_terminals(terminals)?;
    Ok(g)
}

pub fn parse_graph(text: &str) -> Result<TerminalGraph> {
    graph_from_document(&parse_document(text)?)
}

pub fn serialize_graph(g: &TerminalGraph) -> String {
    serialize_document(&document_from_graph(g, None).0)
}

/// Coordinates of a document, keyed by label.
pub fn document_coordinates(doc: &GraphDocument) -> BTreeMap<String, Point> {
    doc.vertices
        .iter()
        .filter_map(|(l, c)| c.clone().map(|p| (l.clone(), p)))
        .collect()
}

// ----- instance bundles -----

pub const BUNDLE_DUAL: &str = "dual.graph";
pub const BUNDLE_PRIMAL: &str = "primal.graph";
pub const BUNDLE_META: &str = "meta";

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(tag = "kind")]
pub enum BundleMeta {
    #[serde(rename = "planar")]
    Planar {
        k: usize,
        sheared: bool,
        weight_c: String,
        /// c_1 .. c_{k-2}
        weight_table: Vec<String>,
        /// per layer: edge indices into the serialized dual.graph edge list
        layers: Vec<Vec<usize>>,
        fan_edges: Vec<usize>,
        edge_e: usize,
        /// signature bit string -> dual.graph edge indices of the cycle
        signature_cycles: BTreeMap<String, Vec<usize>>,
        /// primal.graph edge index of each dual.graph edge
        dual_to_primal: Vec<usize>,
    },
    #[serde(rename = "dblexp")]
    DblExp {
        r: u64,
        ell: usize,
        alpha: String,
        u_subsets: Vec<Vec<usize>>,
        w_subsets: Vec<Vec<usize>>,
    },
}

fn inverse_order(order: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; order.len()];
    for (new, &old) in order.iter().enumerate() {
        inv[old] = new;
    }
    inv
}

/// Face-centroid coordinates for the primal vertices, keyed by label.
fn primal_coordinates(inst: &PlanarInstance) -> BTreeMap<String, Point> {
    let mut coords = BTreeMap::new();
    for fid in 0..inst.dual.face_count() {
        let vertex = inst.face_vertex[fid];
        coords.insert(
            inst.primal.label(vertex).to_string(),
            inst.dual.face_centroid(fid),
        );
    }
    coords
}

fn planar_bundle_parts(inst: &PlanarInstance) -> Result<(String, String, BundleMeta)> {
    let (dual_doc, dual_order) = document_from_plane(&inst.dual);
    let dual_inv = inverse_order(&dual_order);
    let coords = primal_coordinates(inst);
    let (primal_doc, primal_order) = document_from_graph(&inst.primal, Some(&coords));
    let primal_inv = inverse_order(&primal_order);

    let remap = |ids: &[usize]| ids.iter().map(|&e| dual_inv[e]).collect::<Vec<_>>();
    let mut signature_cycles = BTreeMap::new();
    for rank in 0..1u64 << (inst.k - 2) {
        let s = Signature::from_rank(rank, inst.k - 2);
        let cycle = important_cycle(inst, &s)?;
        signature_cycles.insert(s.as_bitstring(), remap(&cycle));
    }
    // dual edge i and primal edge i coincide in memory
    let dual_to_primal = dual_order.iter().map(|&old| primal_inv[old]).collect();
    let meta = BundleMeta::Planar {
        k: inst.k,
        sheared: inst.sheared,
        weight_c: inst.weights.big_c.to_string(),
        weight_table: inst.weights.all_c().iter().map(|c| c.to_string()).collect(),
        layers: inst.layers.iter().map(|l| remap(l)).collect(),
        fan_edges: remap(&inst.fan_edges),
        edge_e: dual_inv[inst.edge_e],
        signature_cycles,
        dual_to_primal,
    };
    Ok((serialize_document(&dual_doc), serialize_document(&primal_doc), meta))
}

pub fn save_planar_bundle(inst: &PlanarInstance, dir: &Path) -> Result<()> {
    let (dual_text, primal_text, meta) = planar_bundle_parts(inst)?;
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join(BUNDLE_DUAL), dual_text)?;
    std::fs::write(dir.join(BUNDLE_PRIMAL), primal_text)?;
    std::fs::write(dir.join(BUNDLE_META), serde_json::to_string_pretty(&meta)?)?;
    Ok(())
}

fn dblexp_bundle_parts(inst: &DblExpInstance) -> (String, BundleMeta) {
    let (doc, _) = document_from_graph(&inst.graph, None);
    let meta = BundleMeta::DblExp {
        r: inst.r as u64,
        ell: inst.ell,
        alpha: inst.alpha.to_string(),
        u_subsets: inst.u_subsets.clone(),
        w_subsets: inst.w_subsets.clone(),
    };
    (serialize_document(&doc), meta)
}

pub fn save_dblexp_bundle(inst: &DblExpInstance, dir: &Path) -> Result<()> {
    let (text, meta) = dblexp_bundle_parts(inst);
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join(BUNDLE_PRIMAL), text)?;
    std::fs::write(dir.join(BUNDLE_META), serde_json::to_string_pretty(&meta)?)?;
    Ok(())
}

pub enum LoadedInstance {
    Planar(PlanarInstance),
    DblExp(DblExpInstance),
}

/// Load a bundle by regenerating the instance from the metadata parameters
/// and checking that every stored member matches the regeneration exactly.
pub fn load_bundle(dir: &Path) -> Result<LoadedInstance> {
    let meta_text = std::fs::read_to_string(dir.join(BUNDLE_META))
        .map_err(|e| GraphError::Bundle(format!("cannot read {}/meta: {e}", dir.display())))?;
    let meta: BundleMeta = serde_json::from_str(&meta_text)?;
    match &meta {
        BundleMeta::Planar { k, .. } => {
            let inst = generate_planar_dual(*k)?;
            let (dual_text, primal_text, fresh_meta) = planar_bundle_parts(&inst)?;
            check_member(dir, BUNDLE_DUAL, &dual_text)?;
            check_member(dir, BUNDLE_PRIMAL, &primal_text)?;
            if fresh_meta != meta {
                return Err(GraphError::Bundle(
                    "stored metadata does not match the regenerated instance".into(),
                ));
            }
            Ok(LoadedInstance::Planar(inst))
        }
        BundleMeta::DblExp { r, alpha, .. } => {
            let alpha = Weight::from_str(alpha).map_err(|e| {
                GraphError::Bundle(format!("bad alpha in metadata: {e}"))
            })?;
            let inst = generate_dblexp(*r, Some(alpha), u64::MAX)?;
            let (text, fresh_meta) = dblexp_bundle_parts(&inst);
            check_member(dir, BUNDLE_PRIMAL, &text)?;
            if fresh_meta != meta {
                return Err(GraphError::Bundle(
                    "stored metadata does not match the regenerated instance".into(),
                ));
            }
            Ok(LoadedInstance::DblExp(inst))
        }
    }
}

fn check_member(dir: &Path, name: &str, expected: &str) -> Result<()> {
    let stored = std::fs::read_to_string(dir.join(name))
        .map_err(|e| GraphError::Bundle(format!("cannot read {}/{name}: {e}", dir.display())))?;
    if stored != expected {
        return Err(GraphError::Bundle(format!(
            "{name} does not match the instance regenerated from the metadata"
        )));
    }
    Ok(())
}

// ----- DOT export -----

#[derive(Clone, Debug, Default)]
pub struct DotOptions {
    /// Pin node positions when coordinates are available.
    pub coordinates: BTreeMap<String, Point>,
    /// Emphasize edges of exactly this weight.
    pub emphasize_weight: Option<Weight>,
    /// rank=same groups, by label.
    pub ranks: Vec<Vec<String>>,
}

fn approx(r: &BigRational) -> f64 {
    // display only; all computation stays exact
    let digits = 12u32;
    let scale = BigInt::from(10u64.pow(digits));
    let scaled = (r * BigRational::from_integer(scale)).round();
    let s: f64 = scaled.numer().to_string().parse().unwrap_or(0.0);
    s / 10f64.powi(digits as i32)
}

pub fn export_dot(g: &TerminalGraph, options: &DotOptions) -> String {
    let mut out = String::from("graph {\n  node [shape=circle];\n");
    for group in &options.ranks {
        out.push_str("  { rank=same;");
        for label in group {
            out.push_str(&format!(" \"{label}\";"));
        }
        out.push_str(" }\n");
    }
    let mut labels: Vec<&String> = g.labels().iter().collect();
    labels.sort();
    for label in labels {
        let v = g.vertex_by_label(label).expect("own label");
        let mut attrs = Vec::new();
        if g.is_terminal(v) {
            attrs.push("shape=doublecircle".to_string());
        }
        if let Some(p) = options.coordinates.get(label) {
            attrs.push(format!("pos=\"{},{}!\"", approx(&p.x), approx(&p.y)));
        }
        if attrs.is_empty() {
            out.push_str(&format!("  \"{label}\";\n"));
        } else {
            out.push_str(&format!("  \"{label}\" [{}];\n", attrs.join(", ")));
        }
    }
    let (doc, _) = document_from_graph(g, None);
    for (u, v, w) in &doc.edges {
        let mut attrs = vec![format!("label=\"{w}\"")];
        if options.emphasize_weight.as_ref() == Some(w) {
            attrs.push("penwidth=2".to_string());
            attrs.push("style=bold".to_string());
        }
        out.push_str(&format!("  \"{u}\" -- \"{v}\" [{}];\n", attrs.join(", ")));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::cut_profile;

    #[test]
    fn round_trip_single_edge() {
        let text = "terminal-graph v1\nterminals t1 t2\nvertex t1\nvertex t2\nedge t1 t2 7/4\n";
        let g = parse_graph(text).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.edges()[0].weight, Weight::ratio(7, 4));
        assert_eq!(serialize_graph(&g), text);
    }

    #[test]
    fn weight_strings_are_strict() {
        assert!(parse_graph(
            "terminal-graph v1\nterminals a b\nvertex a\nvertex b\nedge a b 3\n"
        )
        .is_err());
        assert!(parse_graph(
            "terminal-graph v1\nterminals a b\nvertex a\nvertex b\nedge a b 1/0\n"
        )
        .is_err());
        assert!(parse_graph(
            "terminal-graph v1\nterminals a b\nvertex a\nvertex b\nedge a b 0/1\n"
        )
        .is_ok());
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse_graph("terminal-graph v1\nterminals a b\nbogus\n").unwrap_err();
        match err {
            GraphError::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other}"),
        }
    }

    #[test]
    fn planar_primal_round_trips_with_same_profile() {
        let inst = generate_planar_dual(3).unwrap();
        let text = serialize_graph(&inst.primal);
        let reparsed = parse_graph(&text).unwrap();
        let p1 = cut_profile(&inst.primal).unwrap();
        let p2 = cut_profile(&reparsed).unwrap();
        assert_eq!(
            p1.values().into_iter().cloned().collect::<Vec<_>>(),
            p2.values().into_iter().cloned().collect::<Vec<_>>()
        );
    }

    #[test]
    fn planar_bundle_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let inst = generate_planar_dual(4).unwrap();
        save_planar_bundle(&inst, dir.path()).unwrap();
        match load_bundle(dir.path()).unwrap() {
            LoadedInstance::Planar(loaded) => assert_eq!(loaded.k, 4),
            LoadedInstance::DblExp(_) => panic!("wrong kind"),
        }
        // tampering with a member is detected
        let path = dir.path().join(BUNDLE_PRIMAL);
        let mut text = std::fs::read_to_string(&path).unwrap();
        text.push_str("# extra\n");
        std::fs::write(&path, text).unwrap();
        assert!(matches!(load_bundle(dir.path()), Err(GraphError::Bundle(_))));
    }

    #[test]
    fn dot_export_k3_dual_positions() {
        let inst = generate_planar_dual(3).unwrap();
        let (doc, _) = document_from_plane(&inst.dual);
        let g = graph_from_document(&GraphDocument {
            terminals: vec!["v".into(), "w".into()],
            ..doc.clone()
        })
        .unwrap();
        let dot = export_dot(
            &g,
            &DotOptions { coordinates: document_coordinates(&doc), ..Default::default() },
        );
        assert_eq!(dot.matches("pos=").count(), 4);
        assert!(dot.contains("\"v\""));
    }
}
