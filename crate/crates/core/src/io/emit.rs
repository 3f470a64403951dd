//! DOT and JSON renderings of resolution graphs. Both follow the canonical
//! vertex order, so equal graphs give byte-identical output.

use std::collections::HashMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{run_checks, GraphChecks};
use crate::resolution::{ComponentTag, ResolutionGraph, Vertex, View};

fn ordered(g: &ResolutionGraph) -> ResolutionGraph {
    g.clone().canonicalized()
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

pub fn emit_dot(g: &ResolutionGraph) -> String {
    let g = ordered(g);
    let mut out = String::new();
    writeln!(out, "graph resolution {{").unwrap();
    writeln!(out, "  node [shape=circle];").unwrap();
    for v in g.vertices() {
        let e2 = v
            .self_intersection
            .map_or_else(|| "unset".to_string(), |e| e.to_string());
        let shape = if v.link { ", shape=doublecircle" } else { "" };
        writeln!(
            out,
            "  {} [label=\"m={}, E²={}\"{shape}];",
            quote(&v.tag.to_string()),
            v.multiplicity,
            e2
        )
        .unwrap();
    }
    for &(a, b) in g.edges() {
        writeln!(
            out,
            "  {} -- {};",
            quote(&g.vertices()[a].tag.to_string()),
            quote(&g.vertices()[b].tag.to_string())
        )
        .unwrap();
    }
    writeln!(out, "}}").unwrap();
    out
}

#[derive(Serialize)]
struct DocumentOut<'a> {
    vertices: &'a [Vertex],
    edges: Vec<[&'a ComponentTag; 2]>,
    view: View,
    checks: GraphChecks,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DocumentIn {
    vertices: Vec<Vertex>,
    edges: Vec<[ComponentTag; 2]>,
    #[serde(default)]
    view: View,
    /// Recomputed on load; accepted so emitted documents parse back.
    #[serde(default)]
    #[allow(dead_code)]
    checks: Option<serde_json::Value>,
}

/// Pretty JSON: `{vertices, edges, view, checks}`.
pub fn emit_json(g: &ResolutionGraph) -> String {
    let g = ordered(g);
    let doc = DocumentOut {
        vertices: g.vertices(),
        edges: g
            .edges()
            .iter()
            .map(|&(a, b)| [&g.vertices()[a].tag, &g.vertices()[b].tag])
            .collect(),
        view: g.view(),
        checks: run_checks(&g),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("graph documents serialize");
    text.push('\n');
    text
}

/// Reads a document produced by [`emit_json`] (or written by hand in the same
/// schema). The `checks` member is ignored.
pub fn parse_graph_json(text: &str) -> Result<ResolutionGraph> {
    let doc: DocumentIn = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let index: HashMap<&ComponentTag, usize> = doc
        .vertices
        .iter()
        .enumerate()
        .map(|(i, v)| (&v.tag, i))
        .collect();
    let mut edges = Vec::with_capacity(doc.edges.len());
    let mut unknown = Vec::new();
    for [a, b] in &doc.edges {
        match (index.get(a), index.get(b)) {
            (Some(&x), Some(&y)) => edges.push((x, y)),
            _ => unknown.push(format!("edge {a} - {b} names an unknown vertex")),
        }
    }
    if !unknown.is_empty() {
        return Err(Error::Validation(unknown));
    }
    ResolutionGraph::from_parts(doc.vertices, edges, doc.view)
}
