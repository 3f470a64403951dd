use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use super::{ComponentTag, ResolutionGraph, Vertex, View};
use crate::error::{Error, Result};
use crate::maclane::ValuationShape;
use crate::npath::{level_multiplicity, shortest_npath, unit_step};
use crate::numeric::{lcm, Rational};

/// Singular exactly when `λn ∉ (1/N(n-1))Z`.
pub fn singular_at_center(shape: &ValuationShape) -> bool {
    let n = shape.n();
    !shape.lambda(n).in_lattice(shape.level(n - 1))
}

/// Regular only for the smooth model `n = 1`, `λ1 ∈ Z`.
pub fn singular_at_infinity(shape: &ValuationShape) -> bool {
    !(shape.n() == 1 && shape.lambda(1).is_integer())
}

/// Whether two adjacent components `λ < λ'` at level `N` meet in a singular
/// point. A gap below the unit step cannot occur between components of a
/// normal model and is rejected.
pub fn crossing_singular(n: &BigInt, lam: &Rational, lam_prime: &Rational) -> Result<bool> {
    if lam_prime <= lam {
        return Err(Error::domain(format!(
            "crossing needs lam < lam', got {lam} and {lam_prime}"
        )));
    }
    let gap = lam_prime - lam;
    let step = unit_step(n, lam_prime, lam);
    match gap.cmp(&step) {
        std::cmp::Ordering::Greater => Ok(true),
        std::cmp::Ordering::Equal => Ok(false),
        std::cmp::Ordering::Less => Err(Error::domain(format!(
            "impossible adjacent components {lam} and {lam_prime}: gap {gap} is below the {n}-step {step}"
        ))),
    }
}

/// The shortest `N`-path from `λ'` down to `λ`; its interior is the chain of
/// exceptional components resolving the crossing.
pub fn resolve_crossing(n: &BigInt, lam: &Rational, lam_prime: &Rational) -> Result<Vec<Rational>> {
    if !crossing_singular(n, lam, lam_prime)? {
        return Err(Error::domain(format!(
            "the crossing of {lam} and {lam_prime} at level {n} is regular"
        )));
    }
    Ok(shortest_npath(n, lam_prime, lam)?.entries)
}

/// Least element of `(1/N)Z` strictly above `λ`.
fn next_lattice_point(lambda: &Rational, n: &BigInt) -> Rational {
    let k = lambda.mul_int(n).floor() + BigInt::one();
    Rational::reduce(k, n.clone()).expect("levels are positive")
}

/// The shortest `N(n-1)`-path from `αn` down to `λn`.
pub fn resolve_center(shape: &ValuationShape) -> Result<Vec<Rational>> {
    if !singular_at_center(shape) {
        return Err(Error::domain(format!("the center of {shape} is regular")));
    }
    let n = shape.n();
    vertical_chain(shape, n)
}

fn vertical_chain(shape: &ValuationShape, i: usize) -> Result<Vec<Rational>> {
    let level = shape.level(i - 1);
    let alpha = next_lattice_point(shape.lambda(i), level);
    Ok(shortest_npath(level, &alpha, shape.lambda(i))?.entries)
}

struct Builder {
    vertices: Vec<Vertex>,
    edges: Vec<(usize, usize)>,
    index: HashMap<ComponentTag, usize>,
}

impl Builder {
    fn new() -> Self {
        Builder {
            vertices: Vec::new(),
            edges: Vec::new(),
            index: HashMap::new(),
        }
    }

    fn add(&mut self, tag: ComponentTag, lambda: Rational, multiplicity: &BigInt) -> Result<usize> {
        if self.index.contains_key(&tag) {
            return Err(Error::invariant(format!("component {tag} emitted twice")));
        }
        let multiplicity = multiplicity
            .to_u64()
            .ok_or_else(|| Error::domain(format!("multiplicity {multiplicity} exceeds 64 bits")))?;
        let id = self.vertices.len();
        self.index.insert(tag.clone(), id);
        self.vertices.push(Vertex {
            tag,
            lambda,
            multiplicity,
            self_intersection: None,
            link: false,
            boundary: 0,
            gauss: false,
        });
        Ok(id)
    }

    fn connect(&mut self, a: usize, b: usize) {
        self.edges.push((a, b));
    }

    fn finish(self, view: View) -> Result<ResolutionGraph> {
        let mut g = ResolutionGraph::from_parts(self.vertices, self.edges, view)?;
        g.close_fiber()?;
        Ok(g.canonicalized())
    }
}

/// Dual graph of the minimal regular resolution of the model given by the
/// shape, with `Vn` marked as the link.
pub fn minimal_resolution(shape: &ValuationShape) -> Result<ResolutionGraph> {
    let n = shape.n();
    let mut b = Builder::new();

    if !singular_at_infinity(shape) {
        let v = b.add(ComponentTag::V(1), shape.lambda(1).clone(), &BigInt::one())?;
        b.vertices[v].link = true;
        return b.finish(View::Full);
    }

    let lambda_0 = Rational::from_integer(shape.lambda(1).floor());
    let tilde = b.add(ComponentTag::TildeV0, lambda_0.clone(), &BigInt::one())?;
    let first = shape.lambda(1);
    b.vertices[tilde].gauss = first.is_positive() && *first < 1;

    let mut main = Vec::with_capacity(n);
    for i in 1..=n {
        let id = b.add(ComponentTag::V(i), shape.lambda(i).clone(), shape.level(i))?;
        main.push(id);
    }
    b.vertices[main[n - 1]].link = true;

    // horizontal chains: from λ(i+1) down to (N_i/N_(i-1))·λ_i
    for i in 0..n {
        let level = shape.level(i);
        let (lower_id, lower) = if i == 0 {
            (tilde, lambda_0.clone())
        } else {
            let ratio = level / shape.level(i - 1);
            (main[i - 1], shape.lambda(i).mul_int(&ratio))
        };
        let upper = shape.lambda(i + 1);
        let path = shortest_npath(level, upper, &lower)?;
        let mut prev = lower_id;
        for lam in path.interior().iter().rev() {
            let m = level_multiplicity(level, lam);
            let id = b.add(ComponentTag::WiLambda(i, lam.clone()), lam.clone(), &m)?;
            b.connect(prev, id);
            prev = id;
        }
        b.connect(prev, main[i]);
    }

    // vertical chains: αi down to λi, the endpoint being Vi itself
    for i in 1..=n {
        if i == n && !singular_at_center(shape) {
            continue;
        }
        let entries = vertical_chain(shape, i)?;
        let level = shape.level(i - 1);
        let mut prev = main[i - 1];
        for lam in entries[..entries.len() - 1].iter().rev() {
            let m = lcm(level, lam.denom());
            let id = b.add(ComponentTag::ViLambda(i, lam.clone()), lam.clone(), &m)?;
            b.connect(prev, id);
            prev = id;
        }
    }

    b.finish(View::Full)
}

/// Smallest prime factor of `n > 1`.
fn least_prime_factor(n: &BigInt) -> BigInt {
    let mut d = BigInt::from(2);
    while &d * &d <= *n {
        if n.is_multiple_of(&d) {
            return d;
        }
        d += 1;
    }
    n.clone()
}

/// The extended graph of the singularity at infinity for a weak wild shape:
/// no center chain, `Vn` as the link.
pub fn ww_resolution_graph(shape: &ValuationShape) -> Result<ResolutionGraph> {
    let n = shape.n();
    let mut problems = Vec::new();
    if !shape.lambda(n).is_integer() {
        problems.push(format!("last slope {} is not integral", shape.lambda(n)));
    }
    let total = shape.multiplicity();
    if !total.is_one() {
        let p = least_prime_factor(total);
        let mut rest = total.clone();
        while rest.is_multiple_of(&p) {
            rest /= &p;
        }
        if !rest.is_one() {
            problems.push(format!(
                "slope denominators of {shape} are not powers of a single prime"
            ));
        }
    }
    if !problems.is_empty() {
        return Err(Error::Domain(problems.join("; ")));
    }
    minimal_resolution(shape)?.project(View::Extended)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::q;

    fn shape(v: &[&str]) -> ValuationShape {
        ValuationShape::new(v.iter().map(|s| q(s)).collect()).unwrap()
    }

    fn qs(v: &[&str]) -> Vec<Rational> {
        v.iter().map(|s| q(s)).collect()
    }

    fn int(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn center_examples() {
        assert!(!singular_at_center(&shape(&["1/2", "3"])));
        assert!(singular_at_center(&shape(&["1/2", "7/4"])));
        assert!(!singular_at_center(&shape(&["2"])));
    }

    #[test]
    fn infinity_examples() {
        assert!(!singular_at_infinity(&shape(&["2"])));
        assert!(singular_at_infinity(&shape(&["1/2"])));
        assert!(singular_at_infinity(&shape(&["1/2", "3"])));
    }

    #[test]
    fn crossing_examples() {
        assert!(!crossing_singular(&int(1), &q("3/2"), &q("2")).unwrap());
        assert!(crossing_singular(&int(1), &q("1/2"), &q("2")).unwrap());
        assert!(!crossing_singular(&int(2), &q("1"), &q("3/2")).unwrap());
        assert!(crossing_singular(&int(1), &q("2"), &q("1")).is_err());
    }

    #[test]
    fn crossing_resolution_examples() {
        assert_eq!(
            resolve_crossing(&int(2), &q("1"), &q("3")).unwrap(),
            qs(&["3", "5/2", "2", "3/2", "1"])
        );
        assert!(resolve_crossing(&int(1), &q("0"), &q("1/2")).is_err());
        assert_eq!(
            resolve_crossing(&int(3), &q("2/5"), &q("26/9")).unwrap(),
            qs(&[
                "26/9", "17/6", "8/3", "7/3", "2", "5/3", "4/3", "1", "2/3", "1/2", "4/9", "5/12",
                "2/5"
            ])
        );
    }

    #[test]
    fn center_resolution_examples() {
        assert_eq!(
            resolve_center(&shape(&["1/2", "7/4"])).unwrap(),
            qs(&["2", "7/4"])
        );
        assert_eq!(
            resolve_center(&shape(&["1/3"])).unwrap(),
            qs(&["1", "1/2", "1/3"])
        );
        assert_eq!(
            resolve_center(&shape(&["2/5"])).unwrap(),
            qs(&["1", "1/2", "2/5"])
        );
        assert!(resolve_center(&shape(&["1/2", "3"])).is_err());
    }

    fn summary(g: &ResolutionGraph) -> Vec<(String, u64, Option<i64>, bool)> {
        g.vertices()
            .iter()
            .map(|v| {
                (
                    v.tag.to_string(),
                    v.multiplicity,
                    v.self_intersection,
                    v.link,
                )
            })
            .collect()
    }

    fn edge_set(g: &ResolutionGraph) -> Vec<(String, String)> {
        let mut out: Vec<_> = g
            .edges()
            .iter()
            .map(|&(a, b)| {
                let (a, b) = (
                    g.vertices()[a].tag.to_string(),
                    g.vertices()[b].tag.to_string(),
                );
                (a.clone().min(b.clone()), a.max(b))
            })
            .collect();
        out.sort();
        out
    }

    fn pairs(v: &[(&str, &str)]) -> Vec<(String, String)> {
        let mut out: Vec<_> = v
            .iter()
            .map(|(a, b)| {
                let (a, b) = (a.to_string(), b.to_string());
                (a.clone().min(b.clone()), a.max(b))
            })
            .collect();
        out.sort();
        out
    }

    #[test]
    fn worked_example_graph() {
        let g = minimal_resolution(&shape(&["1/2", "3"])).unwrap();
        let mut got = summary(&g);
        got.sort();
        let mut want = vec![
            ("vtilde0".to_string(), 1, Some(-2), false),
            ("v/1".to_string(), 2, Some(-2), false),
            ("vl/1/1".to_string(), 1, Some(-2), false),
            ("w/1/3:2".to_string(), 2, Some(-2), false),
            ("w/1/2".to_string(), 2, Some(-2), false),
            ("w/1/5:2".to_string(), 2, Some(-2), false),
            ("v/2".to_string(), 2, Some(-1), true),
        ];
        want.sort();
        assert_eq!(got, want);
        assert_eq!(
            edge_set(&g),
            pairs(&[
                ("vtilde0", "v/1"),
                ("vl/1/1", "v/1"),
                ("v/1", "w/1/3:2"),
                ("w/1/3:2", "w/1/2"),
                ("w/1/2", "w/1/5:2"),
                ("w/1/5:2", "v/2"),
            ])
        );
        assert!(g.vertex(&ComponentTag::TildeV0).unwrap().gauss);
        // the link comes first in canonical order
        assert!(g.vertices()[0].link);
    }

    #[test]
    fn smooth_model() {
        let g = minimal_resolution(&shape(&["2"])).unwrap();
        assert_eq!(g.len(), 1);
        assert!(g.edges().is_empty());
        assert_eq!(g.vertices()[0].self_intersection, None);
        let ex = g.project(View::Exceptional).unwrap();
        assert_eq!(ex.len(), 1);
        assert!(ex.vertices()[0].link);
    }

    #[test]
    fn single_slope() {
        let g = minimal_resolution(&shape(&["1/2"])).unwrap();
        assert_eq!(
            edge_set(&g),
            pairs(&[("vtilde0", "v/1"), ("v/1", "vl/1/1")])
        );
        let v1 = g.vertex(&ComponentTag::V(1)).unwrap();
        assert_eq!((v1.multiplicity, v1.self_intersection), (2, Some(-1)));
        for tag in [ComponentTag::TildeV0, ComponentTag::ViLambda(1, q("1"))] {
            let v = g.vertex(&tag).unwrap();
            assert_eq!((v.multiplicity, v.self_intersection), (1, Some(-2)));
        }
        let ext = g.project(View::Extended).unwrap();
        assert_eq!(ext.len(), 2);
        assert_eq!(ext.vertex(&ComponentTag::V(1)).unwrap().boundary, 1);
    }

    #[test]
    fn singular_center_chain() {
        let g = minimal_resolution(&shape(&["1/2", "7/4"])).unwrap();
        let top = g.vertex(&ComponentTag::ViLambda(2, q("2"))).unwrap();
        assert_eq!((top.multiplicity, top.self_intersection), (2, Some(-2)));
        let link = g.vertex(&ComponentTag::V(2)).unwrap();
        assert_eq!(link.multiplicity, 4);
        assert!(g.vertex(&ComponentTag::WiLambda(1, q("3/2"))).is_some());
        let ext = g.project(View::Extended).unwrap();
        assert!(ext.vertex(&ComponentTag::ViLambda(2, q("2"))).is_none());
        assert_eq!(ext.vertex(&ComponentTag::V(2)).unwrap().boundary, 2);
        let ex = ext.project(View::Exceptional).unwrap();
        assert!(ex.link().is_none());
        assert!(ex.project(View::Full).is_err());
    }

    #[test]
    fn ww_examples() {
        let g = ww_resolution_graph(&shape(&["1/2", "3"])).unwrap();
        assert_eq!(g.len(), 7);
        assert_eq!(g.view(), View::Extended);

        let d4 = ww_resolution_graph(&shape(&["1/2", "2"])).unwrap();
        assert_eq!(d4.len(), 5);
        let nodes = d4.nodes();
        assert_eq!(nodes.len(), 1);
        assert_eq!(d4.vertices()[nodes[0]].tag, ComponentTag::V(1));

        let g = ww_resolution_graph(&shape(&["2/5", "3"])).unwrap();
        let adj = g.adjacency();
        let node = g.nodes()[0];
        let mut mults: Vec<u64> = adj[node]
            .iter()
            .map(|&j| g.vertices()[j].multiplicity)
            .collect();
        mults.sort();
        assert_eq!(mults, vec![2, 3, 5]);

        assert!(ww_resolution_graph(&shape(&["1/2", "7/4"])).is_err());
        assert!(ww_resolution_graph(&shape(&["1/6", "5"])).is_err());
    }
}
