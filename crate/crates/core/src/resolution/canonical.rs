//! Canonical forms of labelled trees.
//!
//! A tree rooted at its link (or, without a link, at whichever vertex gives
//! the least form) is encoded bottom-up with children sorted by their own
//! forms. Two trees are isomorphic as labelled trees exactly when their forms
//! are equal. Tags never enter a form; they only break ties when ordering
//! vertices for output.

use super::ResolutionGraph;
use crate::graph::is_tree;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    pub multiplicity: u64,
    pub self_intersection: Option<i64>,
    pub link: bool,
    pub boundary: u64,
    pub children: Vec<CanonicalForm>,
}

/// Form of the subtree at `root` below `parent`, plus the sorted child order
/// of every visited vertex.
fn rooted(
    g: &ResolutionGraph,
    adj: &[Vec<usize>],
    root: usize,
    parent: Option<usize>,
    visited: &mut [bool],
    child_order: &mut [Vec<usize>],
) -> CanonicalForm {
    visited[root] = true;
    let mut children: Vec<(CanonicalForm, String, usize)> = Vec::new();
    for &c in &adj[root] {
        if Some(c) == parent || visited[c] {
            continue;
        }
        let form = rooted(g, adj, c, Some(root), visited, child_order);
        children.push((form, g.vertices[c].tag.to_string(), c));
    }
    children.sort();
    child_order[root] = children.iter().map(|(_, _, c)| *c).collect();
    let v = &g.vertices[root];
    CanonicalForm {
        multiplicity: v.multiplicity,
        self_intersection: v.self_intersection,
        link: v.link,
        boundary: v.boundary,
        children: children.into_iter().map(|(f, _, _)| f).collect(),
    }
}

/// The one or two centers of a tree component, found by peeling leaves.
/// `None` if the component has a cycle.
fn tree_centers(adj: &[Vec<usize>], component: &[usize]) -> Option<Vec<usize>> {
    let mut degree: Vec<usize> = vec![0; adj.len()];
    let mut edge_ends = 0;
    for &v in component {
        degree[v] = adj[v].len();
        edge_ends += adj[v].len();
    }
    if edge_ends != 2 * (component.len() - 1) {
        return None;
    }
    let mut layer: Vec<usize> = component
        .iter()
        .copied()
        .filter(|&v| degree[v] <= 1)
        .collect();
    let mut remaining = component.len();
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &leaf in &layer {
            for &w in &adj[leaf] {
                degree[w] -= 1;
                if degree[w] == 1 {
                    next.push(w);
                }
            }
        }
        layer = next;
    }
    layer.sort_unstable();
    Some(layer)
}

/// Root choice: the link if there is one, else the tree center with the
/// least rooted form (ties by tag). Centers are preserved by isomorphisms,
/// so this keeps the form canonical. Components with a cycle try every
/// vertex.
fn choose_root(g: &ResolutionGraph, adj: &[Vec<usize>], component: &[usize]) -> usize {
    if let Some(&link) = component.iter().find(|&&i| g.vertices[i].link) {
        return link;
    }
    let candidates = tree_centers(adj, component).unwrap_or_else(|| component.to_vec());
    candidates
        .iter()
        .map(|&r| {
            let mut visited = vec![false; g.len()];
            let mut order = vec![Vec::new(); g.len()];
            let form = rooted(g, adj, r, None, &mut visited, &mut order);
            (form, g.vertices[r].tag.to_string(), r)
        })
        .min()
        .map(|(_, _, r)| r)
        .expect("candidates are nonempty")
}

/// `None` unless the graph is a tree.
pub fn canonical_form(g: &ResolutionGraph) -> Option<CanonicalForm> {
    if !is_tree(g) {
        return None;
    }
    let adj = g.adjacency();
    let all: Vec<usize> = (0..g.len()).collect();
    let root = choose_root(g, &adj, &all);
    let mut visited = vec![false; g.len()];
    let mut order = vec![Vec::new(); g.len()];
    Some(rooted(g, &adj, root, None, &mut visited, &mut order))
}

/// Isomorphism of labelled trees (multiplicity, self-intersection, link
/// flag, boundary). Non-trees are never isomorphic to anything.
pub fn is_isomorphic(a: &ResolutionGraph, b: &ResolutionGraph) -> bool {
    match (canonical_form(a), canonical_form(b)) {
        (Some(fa), Some(fb)) => fa == fb,
        _ => false,
    }
}

/// Depth-first preorder following the canonical child order. Works on any
/// graph: each connected component is rooted in turn, and edges closing a
/// cycle are simply not followed.
pub fn canonical_order(g: &ResolutionGraph) -> Vec<usize> {
    let adj = g.adjacency();
    let mut visited = vec![false; g.len()];
    let mut child_order = vec![Vec::new(); g.len()];
    let mut out = Vec::with_capacity(g.len());
    let mut roots = Vec::new();
    loop {
        let remaining: Vec<usize> = (0..g.len()).filter(|&i| !visited[i]).collect();
        if remaining.is_empty() {
            break;
        }
        let component = component_of(&adj, remaining[0], &visited);
        let root = choose_root(g, &adj, &component);
        rooted(g, &adj, root, None, &mut visited, &mut child_order);
        roots.push(root);
    }
    // components in order of their root forms; the link's component first
    roots.sort_by_key(|&r| {
        let mut seen = vec![false; g.len()];
        let mut order = vec![Vec::new(); g.len()];
        (
            !g.vertices[r].link,
            rooted(g, &adj, r, None, &mut seen, &mut order),
            g.vertices[r].tag.to_string(),
        )
    });
    for root in roots {
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            out.push(v);
            stack.extend(child_order[v].iter().rev());
        }
    }
    out
}

fn component_of(adj: &[Vec<usize>], start: usize, visited: &[bool]) -> Vec<usize> {
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![start];
    seen[start] = true;
    let mut out = Vec::new();
    while let Some(v) = stack.pop() {
        out.push(v);
        for &w in &adj[v] {
            if !seen[w] && !visited[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    out.sort_unstable();
    out
}
