//! Dual graphs of minimal regular resolutions of normal models of the
//! projective line, and the `(r, s)`-graphs of weak wild singularities.
//!
//! Every component is named by a [`ComponentTag`]. The horizontal chain
//! `TildeV0 - W(0,·) - V1 - W(1,·) - ... - Vn` runs through shortest N-paths
//! between consecutive slopes; each `Vi` carries a vertical chain `ViLambda(i,·)`
//! climbing to the next point of `(1/N(i-1))Z` above `λi`. Self-intersections
//! come from the fiber relation `m·E² + Σ neighbour multiplicities = 0`.

mod build;
mod canonical;
mod rsgraph;

pub use build::{
    crossing_singular, minimal_resolution, resolve_center, resolve_crossing, singular_at_center,
    singular_at_infinity, ww_resolution_graph,
};
pub use canonical::{canonical_form, canonical_order, is_isomorphic, CanonicalForm};
pub use rsgraph::rs_graph;

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numeric::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ComponentTag {
    /// The truncation `[v0, ..., vi(gi)=λi]`.
    V(usize),
    /// `[v0, v1(x)=⌊λ1⌋]`.
    TildeV0,
    /// A component on the vertical chain above `Vi`.
    ViLambda(usize, Rational),
    /// A component on the horizontal chain between `Vi` and `V(i+1)`.
    WiLambda(usize, Rational),
}

impl fmt::Display for ComponentTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lam = |q: &Rational| q.to_string().replace('/', ":");
        match self {
            ComponentTag::V(i) => write!(f, "v/{i}"),
            ComponentTag::TildeV0 => write!(f, "vtilde0"),
            ComponentTag::ViLambda(i, q) => write!(f, "vl/{i}/{}", lam(q)),
            ComponentTag::WiLambda(i, q) => write!(f, "w/{i}/{}", lam(q)),
        }
    }
}

impl FromStr for ComponentTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |message: String| Error::Parse {
            line: 1,
            column: 1,
            message,
        };
        let index = |part: &str| {
            part.parse::<usize>()
                .map_err(|_| bad(format!("bad component index {part:?} in tag {s:?}")))
        };
        let lambda = |part: &str| {
            part.replace(':', "/")
                .parse::<Rational>()
                .map_err(|_| bad(format!("bad slope {part:?} in tag {s:?}")))
        };
        let parts: Vec<&str> = s.split('/').collect();
        match parts.as_slice() {
            ["vtilde0"] => Ok(ComponentTag::TildeV0),
            ["v", i] => Ok(ComponentTag::V(index(i)?)),
            ["vl", i, q] => Ok(ComponentTag::ViLambda(index(i)?, lambda(q)?)),
            ["w", i, q] => Ok(ComponentTag::WiLambda(index(i)?, lambda(q)?)),
            _ => Err(bad(format!("unrecognized component tag {s:?}"))),
        }
    }
}

impl Serialize for ComponentTag {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ComponentTag {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn is_zero(n: &u64) -> bool {
    *n == 0
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Vertex {
    pub tag: ComponentTag,
    pub lambda: Rational,
    pub multiplicity: u64,
    /// Unset only for an isolated component with nothing to balance against.
    pub self_intersection: Option<i64>,
    pub link: bool,
    /// Summed multiplicity of neighbours removed by a view projection.
    #[serde(default, skip_serializing_if = "is_zero")]
    pub boundary: u64,
    /// Set on `TildeV0` when it is the Gauss valuation itself.
    #[serde(default, skip_serializing_if = "is_false")]
    pub gauss: bool,
}

/// Which part of the fiber a graph describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum View {
    /// Every component of the resolved special fiber.
    #[default]
    Full,
    /// The singularity at infinity together with its link.
    Extended,
    /// The singularity at infinity alone.
    Exceptional,
}

impl fmt::Display for View {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            View::Full => "full",
            View::Extended => "extended",
            View::Exceptional => "exceptional",
        })
    }
}

impl FromStr for View {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(View::Full),
            "extended" => Ok(View::Extended),
            "exceptional" => Ok(View::Exceptional),
            other => Err(Error::domain(format!(
                "unknown view {other:?}; expected full, extended or exceptional"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolutionGraph {
    vertices: Vec<Vertex>,
    edges: Vec<(usize, usize)>,
    view: View,
}

impl ResolutionGraph {
    /// Checks tag uniqueness and edge sanity; keeps the given order.
    pub fn from_parts(
        vertices: Vec<Vertex>,
        edges: Vec<(usize, usize)>,
        view: View,
    ) -> Result<Self> {
        let mut problems = Vec::new();
        let mut tags = HashSet::new();
        for v in &vertices {
            if !tags.insert(&v.tag) {
                problems.push(format!("duplicate tag {}", v.tag));
            }
            if v.multiplicity == 0 {
                problems.push(format!("vertex {} has multiplicity 0", v.tag));
            }
        }
        let mut seen = HashSet::new();
        for &(a, b) in &edges {
            if a >= vertices.len() || b >= vertices.len() {
                problems.push(format!("edge ({a}, {b}) out of range"));
            } else if a == b {
                problems.push(format!("self-loop at {}", vertices[a].tag));
            } else if !seen.insert((a.min(b), a.max(b))) {
                problems.push(format!(
                    "repeated edge {} - {}",
                    vertices[a].tag, vertices[b].tag
                ));
            }
        }
        if !problems.is_empty() {
            return Err(Error::Validation(problems));
        }
        Ok(ResolutionGraph {
            vertices,
            edges,
            view,
        })
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn view(&self) -> View {
        self.view
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn index_of(&self, tag: &ComponentTag) -> Option<usize> {
        self.vertices.iter().position(|v| &v.tag == tag)
    }

    pub fn vertex(&self, tag: &ComponentTag) -> Option<&Vertex> {
        self.index_of(tag).map(|i| &self.vertices[i])
    }

    /// Adjacency lists in edge order.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    pub fn link(&self) -> Option<usize> {
        self.vertices.iter().position(|v| v.link)
    }

    /// Vertices of valency at least 3.
    pub fn nodes(&self) -> Vec<usize> {
        self.adjacency()
            .iter()
            .enumerate()
            .filter(|(_, n)| n.len() >= 3)
            .map(|(i, _)| i)
            .collect()
    }

    /// Sets every self-intersection from the fiber relation. Isolated
    /// vertices with zero boundary are left unset.
    pub(crate) fn close_fiber(&mut self) -> Result<()> {
        let adj = self.adjacency();
        for (i, neighbours) in adj.iter().enumerate() {
            let total: u128 = neighbours
                .iter()
                .map(|&j| self.vertices[j].multiplicity as u128)
                .sum::<u128>()
                + self.vertices[i].boundary as u128;
            let v = &mut self.vertices[i];
            if total == 0 {
                v.self_intersection = None;
                continue;
            }
            let m = v.multiplicity as u128;
            if !total.is_multiple_of(m) {
                return Err(Error::invariant(format!(
                    "neighbour multiplicities {total} of {} not divisible by {m}",
                    v.tag
                )));
            }
            let value = i64::try_from(total / m)
                .map_err(|_| Error::domain(format!("self-intersection of {} overflows", v.tag)))?;
            v.self_intersection = Some(-value);
        }
        Ok(())
    }

    /// Keeps the vertices passing `keep`; each survivor's boundary absorbs the
    /// multiplicities of removed neighbours.
    fn restrict(&self, keep: impl Fn(usize, &Vertex) -> bool, view: View) -> ResolutionGraph {
        let kept: Vec<bool> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| keep(i, v))
            .collect();
        let mut vertices = self.vertices.clone();
        for &(a, b) in &self.edges {
            match (kept[a], kept[b]) {
                (true, false) => vertices[a].boundary += self.vertices[b].multiplicity,
                (false, true) => vertices[b].boundary += self.vertices[a].multiplicity,
                _ => {}
            }
        }
        let mut renumber = HashMap::new();
        let mut out = Vec::new();
        for (i, v) in vertices.into_iter().enumerate() {
            if kept[i] {
                renumber.insert(i, out.len());
                out.push(v);
            }
        }
        let edges = self
            .edges
            .iter()
            .filter_map(|(a, b)| Some((*renumber.get(a)?, *renumber.get(b)?)))
            .collect();
        ResolutionGraph {
            vertices: out,
            edges,
            view,
        }
        .canonicalized()
    }

    /// Projects a full graph onto a smaller view.
    ///
    /// `Extended` drops the vertical chain over the link (the singularity at
    /// the center); `Exceptional` also drops the link itself, unless nothing
    /// else is left.
    pub fn project(&self, view: View) -> Result<ResolutionGraph> {
        if view == self.view {
            return Ok(self.clone());
        }
        let link_level = self.link().and_then(|i| match self.vertices[i].tag {
            ComponentTag::V(n) => Some(n),
            _ => None,
        });
        let center_chain = |v: &Vertex| matches!((&v.tag, link_level), (ComponentTag::ViLambda(i, _), Some(n)) if *i == n);
        match (self.view, view) {
            (View::Full, View::Extended) => Ok(self.restrict(|_, v| !center_chain(v), view)),
            (View::Full | View::Extended, View::Exceptional) => {
                let exceptional = self
                    .vertices
                    .iter()
                    .filter(|v| !v.link && !center_chain(v))
                    .count();
                if exceptional == 0 {
                    Ok(self.restrict(|_, v| !center_chain(v), view))
                } else {
                    Ok(self.restrict(|_, v| !v.link && !center_chain(v), view))
                }
            }
            (from, to) => Err(Error::domain(format!(
                "cannot project a {from} graph onto the {to} view"
            ))),
        }
    }

    /// Reorders vertices and edges into canonical order.
    pub fn canonicalized(self) -> ResolutionGraph {
        let order = canonical_order(&self);
        let mut position = vec![0; order.len()];
        for (pos, &i) in order.iter().enumerate() {
            position[i] = pos;
        }
        let vertices = order.iter().map(|&i| self.vertices[i].clone()).collect();
        let mut edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|&(a, b)| {
                let (a, b) = (position[a], position[b]);
                (a.min(b), a.max(b))
            })
            .collect();
        edges.sort_unstable();
        ResolutionGraph {
            vertices,
            edges,
            view: self.view,
        }
    }
}
