//! Intersection matrices and structural checks on resolution graphs.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::resolution::{ComponentTag, ResolutionGraph};

/// Which vertices enter the intersection matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixView {
    /// Everything except the link.
    Exceptional,
    /// Every vertex of the graph.
    Full,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionMatrix {
    pub basis: Vec<ComponentTag>,
    pub entries: Vec<Vec<i64>>,
}

impl IntersectionMatrix {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| self.entries[i][j] == self.entries[j][i]))
    }
}

impl fmt::Display for IntersectionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(|x| format!("{x:>3}")).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Diagonal: self-intersections. Off-diagonal: 1 on edges, else 0.
pub fn intersection_matrix(g: &ResolutionGraph, view: MatrixView) -> Result<IntersectionMatrix> {
    let keep: Vec<usize> = (0..g.len())
        .filter(|&i| view == MatrixView::Full || !g.vertices()[i].link)
        .collect();
    let mut position = vec![None; g.len()];
    for (pos, &i) in keep.iter().enumerate() {
        position[i] = Some(pos);
    }
    let mut entries = vec![vec![0i64; keep.len()]; keep.len()];
    for (pos, &i) in keep.iter().enumerate() {
        let v = &g.vertices()[i];
        entries[pos][pos] = v
            .self_intersection
            .ok_or_else(|| Error::domain(format!("vertex {} has no self-intersection", v.tag)))?;
    }
    for &(a, b) in g.edges() {
        if let (Some(x), Some(y)) = (position[a], position[b]) {
            entries[x][y] = 1;
            entries[y][x] = 1;
        }
    }
    Ok(IntersectionMatrix {
        basis: keep.iter().map(|&i| g.vertices()[i].tag.clone()).collect(),
        entries,
    })
}

/// Leading principal minors by fraction-free (Bareiss) elimination.
///
/// Runs in checked `i128` first and repeats in `BigInt` only on overflow;
/// both paths compute the same exact values.
pub fn leading_minors(m: &IntersectionMatrix) -> Vec<BigInt> {
    match leading_minors_small(m) {
        Some(minors) => minors.into_iter().map(BigInt::from).collect(),
        None => leading_minors_big(m),
    }
}

/// `None` on overflow or on a zero pivot.
#[allow(clippy::needless_range_loop)]
fn leading_minors_small(m: &IntersectionMatrix) -> Option<Vec<i128>> {
    let n = m.dim();
    let mut a: Vec<Vec<i128>> = m
        .entries
        .iter()
        .map(|row| row.iter().map(|&x| x as i128).collect())
        .collect();
    let mut minors = Vec::with_capacity(n);
    let mut prev: i128 = 1;
    for k in 0..n {
        let pivot = a[k][k];
        if pivot == 0 {
            return None;
        }
        minors.push(pivot);
        for i in (k + 1)..n {
            let aik = a[i][k];
            for j in (k + 1)..n {
                let lhs = a[i][j].checked_mul(pivot)?;
                let rhs = aik.checked_mul(a[k][j])?;
                // Bareiss quotients are exact
                a[i][j] = lhs.checked_sub(rhs)? / prev;
            }
        }
        prev = pivot;
    }
    Some(minors)
}

fn leading_minors_big(m: &IntersectionMatrix) -> Vec<BigInt> {
    let n = m.dim();
    let mut a: Vec<Vec<BigInt>> = m
        .entries
        .iter()
        .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut minors = Vec::with_capacity(n);
    let mut prev = BigInt::from(1);
    for k in 0..n {
        // without pivoting, a[k][k] is the (k+1)-th leading minor
        minors.push(a[k][k].clone());
        if a[k][k].is_zero() {
            // every later minor needs this pivot; finish by direct expansion
            for j in (k + 1)..n {
                minors.push(determinant(&m.entries, j + 1));
            }
            break;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    minors
}

/// Determinant of the leading `size × size` block, Bareiss with row pivoting.
fn determinant(entries: &[Vec<i64>], size: usize) -> BigInt {
    let mut a: Vec<Vec<BigInt>> = entries[..size]
        .iter()
        .map(|row| row[..size].iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut sign = 1;
    let mut prev = BigInt::from(1);
    for k in 0..size {
        let Some(pivot) = (k..size).find(|&i| !a[i][k].is_zero()) else {
            return BigInt::zero();
        };
        if pivot != k {
            a.swap(pivot, k);
            sign = -sign;
        }
        for i in (k + 1)..size {
            for j in (k + 1)..size {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    if size == 0 {
        return BigInt::from(1);
    }
    a[size - 1][size - 1].clone() * sign
}

/// `(-1)^k · minor_k > 0` for every `k`. The empty matrix qualifies.
pub fn is_negative_definite(m: &IntersectionMatrix) -> bool {
    m.is_symmetric()
        && leading_minors(m).iter().enumerate().all(|(k, minor)| {
            if k % 2 == 0 {
                minor.is_negative()
            } else {
                minor.is_positive()
            }
        })
}

/// Connected with `|E| = |V| - 1`. The empty graph is not a tree.
pub fn is_tree(g: &ResolutionGraph) -> bool {
    let n = g.len();
    if n == 0 || g.edges().len() != n - 1 {
        return false;
    }
    let adj = g.adjacency();
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    count == n
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberReport {
    pub holds: bool,
    pub failing: Vec<ComponentTag>,
    pub warnings: Vec<String>,
}

/// `m·E² + Σ neighbour multiplicities + boundary = 0` at every vertex.
/// An isolated vertex without a self-intersection passes with a warning.
pub fn fiber_relation_check(g: &ResolutionGraph) -> FiberReport {
    let adj = g.adjacency();
    let mut failing = Vec::new();
    let mut warnings = Vec::new();
    for (i, v) in g.vertices().iter().enumerate() {
        let around: i128 = adj[i]
            .iter()
            .map(|&j| g.vertices()[j].multiplicity as i128)
            .sum::<i128>()
            + v.boundary as i128;
        match v.self_intersection {
            Some(e) => {
                if v.multiplicity as i128 * e as i128 + around != 0 {
                    failing.push(v.tag.clone());
                }
            }
            None if around == 0 => warnings.push(format!(
                "{} is an isolated component without self-intersection; relation holds vacuously",
                v.tag
            )),
            None => failing.push(v.tag.clone()),
        }
    }
    FiberReport {
        holds: failing.is_empty(),
        failing,
        warnings,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GraphChecks {
    pub tree: bool,
    pub negative_definite: bool,
    pub fiber_relation: bool,
}

/// The three standard checks; definiteness is taken on the exceptional part.
pub fn run_checks(g: &ResolutionGraph) -> GraphChecks {
    GraphChecks {
        tree: is_tree(g),
        negative_definite: intersection_matrix(g, MatrixView::Exceptional)
            .map(|m| is_negative_definite(&m))
            .unwrap_or(false),
        fiber_relation: fiber_relation_check(g).holds,
    }
}
