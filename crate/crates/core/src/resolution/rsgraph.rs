//! The `(r, s)`-graph, built straight from two continued fractions without
//! going through the general resolution.
//!
//! With `r/p = [a0, ..., ak]` (convergents `bi/ci`) and `p/r = [ã0, ..., ãl]`
//! (convergents `b̃i/c̃i`) the graph is: the link (multiplicity `p`), a chain
//! of `s·p` vertices of multiplicity `p` and self-intersection `-2` ending in
//! the node, an upper arm with multiplicities `c(k-1), ..., c0` and
//! self-intersections `-ak, ..., -a1`, and a lower arm with multiplicities
//! `b̃(l-1), ..., b̃0, 1` and self-intersections `-ãl, ..., -ã0`.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::{ComponentTag, ResolutionGraph, Vertex, View};
use crate::classification::make_rs_shape;
use crate::contfrac::ncf_expand;
use crate::error::{Error, Result};
use crate::numeric::Rational;

fn small(n: &BigInt, what: &str) -> Result<i64> {
    n.to_i64()
        .ok_or_else(|| Error::domain(format!("{what} {n} exceeds 64 bits")))
}

fn vertex(
    tag: ComponentTag,
    lambda: Rational,
    multiplicity: u64,
    self_intersection: i64,
) -> Vertex {
    Vertex {
        tag,
        lambda,
        multiplicity,
        self_intersection: Some(self_intersection),
        link: false,
        boundary: 0,
        gauss: false,
    }
}

pub fn rs_graph(p: u64, r: u64, s: u64) -> Result<ResolutionGraph> {
    make_rs_shape(p, r, s)?;
    let chain_len = s
        .checked_mul(p)
        .ok_or_else(|| Error::domain("s·p exceeds 64 bits"))?;
    let slope = Rational::reduce(r, p)?;
    let upper = ncf_expand(&slope);
    let lower = ncf_expand(&slope.recip()?);

    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    let mut chain = |vertices: &mut Vec<Vertex>, v: Vertex| {
        let id = vertices.len();
        if id > 0 {
            edges.push((id - 1, id));
        }
        vertices.push(v);
        id
    };

    // link, then the left chain down to the node
    let mut link = vertex(
        ComponentTag::V(2),
        Rational::from_integer(BigInt::from(r) + s),
        p,
        -1,
    );
    link.link = true;
    chain(&mut vertices, link);
    for j in (1..chain_len).rev() {
        let lam = Rational::from_integer(BigInt::from(r)) + Rational::reduce(j, p)?;
        chain(
            &mut vertices,
            vertex(ComponentTag::WiLambda(1, lam.clone()), lam, p, -2),
        );
    }
    let node = chain(
        &mut vertices,
        vertex(ComponentTag::V(1), slope.clone(), p, -2),
    );

    // upper arm: vertex with multiplicity c_i carries -a_(i+1)
    let k = upper.len() - 1;
    let mut prev = node;
    for i in (0..k).rev() {
        let conv = &upper.convergents[i];
        let m = small(conv.denom(), "multiplicity")? as u64;
        let e = -small(&upper.quotients[i + 1], "partial quotient")?;
        let id = vertices.len();
        vertices.push(vertex(
            ComponentTag::ViLambda(1, conv.clone()),
            conv.clone(),
            m,
            e,
        ));
        edges.push((prev, id));
        prev = id;
    }

    // lower arm: multiplicity b̃_i carries -ã_(i+1); the last vertex is TildeV0
    let l = lower.len() - 1;
    let mut prev = node;
    for i in (0..l).rev() {
        let conv = &lower.convergents[i];
        let m = small(conv.numer(), "multiplicity")? as u64;
        let e = -small(&lower.quotients[i + 1], "partial quotient")?;
        let lam = conv.recip()?;
        let id = vertices.len();
        vertices.push(vertex(ComponentTag::WiLambda(0, lam.clone()), lam, m, e));
        edges.push((prev, id));
        prev = id;
    }
    let e = -small(&lower.quotients[0], "partial quotient")?;
    let mut tilde = vertex(ComponentTag::TildeV0, Rational::zero(), 1, e);
    tilde.gauss = true;
    let id = vertices.len();
    vertices.push(tilde);
    edges.push((prev, id));

    Ok(ResolutionGraph::from_parts(vertices, edges, View::Extended)?.canonicalized())
}
