//! Inductive valuations `[v0, v1(g1)=λ1, ..., vn(gn)=λn]` on Q[x] over the
//! p-adic Gauss valuation.
//!
//! `v0` is the Gauss valuation (minimum of the p-adic valuations of the
//! coefficients). Each augmentation `v_j(g_j) = λ_j` evaluates `f` by
//! expanding it in powers of `g_j` and taking `min_i v_{j-1}(a_i) + i·λ_j`.
//!
//! Only two families of key polynomials are certified: monic linear keys on
//! top of `v0`, and degree-`p^e` keys on top of `[v0, v1(x)=r/p^e]` whose
//! constant term has valuation `r`. Anything else is accepted but the
//! resulting valuation is flagged as unverified.

mod poly;

pub use poly::Polynomial;

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numeric::{lcm, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Characteristic {
    Zero,
    P,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BaseField {
    p: u64,
    characteristic: Characteristic,
    absolute_ramification: Option<u64>,
}

impl BaseField {
    pub fn new(
        p: u64,
        characteristic: Characteristic,
        absolute_ramification: Option<u64>,
    ) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::domain(format!("p = {p} is not prime")));
        }
        match (characteristic, absolute_ramification) {
            (_, Some(0)) => Err(Error::domain("e_K must be positive")),
            (Characteristic::P, Some(_)) => Err(Error::domain(
                "e_K is only meaningful in characteristic zero",
            )),
            _ => Ok(BaseField {
                p,
                characteristic,
                absolute_ramification,
            }),
        }
    }

    /// Characteristic zero, no ramification data.
    pub fn mixed(p: u64) -> Result<Self> {
        BaseField::new(p, Characteristic::Zero, None)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn characteristic(&self) -> Characteristic {
        self.characteristic
    }

    pub fn absolute_ramification(&self) -> Option<u64> {
        self.absolute_ramification
    }

    /// p-adic valuation of a rational; `Infinity` at zero.
    pub fn valuation(&self, q: &Rational) -> Value {
        if q.is_zero() {
            return Value::Infinity;
        }
        let p = BigInt::from(self.p);
        let v = padic_order(q.numer(), &p) - padic_order(q.denom(), &p);
        Value::Finite(Rational::from(v))
    }

    pub fn is_integral(&self, q: &Rational) -> bool {
        let p = BigInt::from(self.p);
        padic_order(q.denom(), &p) == 0
    }
}

/// Largest `k` with `p^k | n`, for nonzero `n`.
pub fn padic_order(n: &BigInt, p: &BigInt) -> i64 {
    debug_assert!(!n.is_zero());
    let mut k = 0;
    let mut rest = n.clone();
    loop {
        let (quot, rem) = rest.div_rem(p);
        if !rem.is_zero() {
            return k;
        }
        rest = quot;
        k += 1;
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin, exact on all of `u64`.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A valuation value: a rational, or `+∞` for the zero polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Finite(Rational),
    Infinity,
}

impl Value {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Value::Finite(q) => Some(q),
            Value::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Value::Infinity)
    }
}

impl Add<&Rational> for Value {
    type Output = Value;
    fn add(self, rhs: &Rational) -> Value {
        match self {
            Value::Finite(q) => Value::Finite(q + rhs),
            Value::Infinity => Value::Infinity,
        }
    }
}

impl Add for Value {
    type Output = Value;
    fn add(self, rhs: Value) -> Value {
        match (self, rhs) {
            (Value::Finite(a), Value::Finite(b)) => Value::Finite(a + b),
            _ => Value::Infinity,
        }
    }
}

impl PartialEq<Rational> for Value {
    fn eq(&self, other: &Rational) -> bool {
        self.finite() == Some(other)
    }
}

impl PartialOrd<Rational> for Value {
    fn partial_cmp(&self, other: &Rational) -> Option<Ordering> {
        Some(match self {
            Value::Finite(q) => q.cmp(other),
            Value::Infinity => Ordering::Greater,
        })
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Finite(q) => write!(f, "{q}"),
            Value::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Base-φ digits `[a0, a1, ...]` with `f = Σ a_i φ^i` and `deg a_i < deg φ`.
/// The zero polynomial has no digits.
pub fn phi_expansion(f: &Polynomial, phi: &Polynomial) -> Result<Vec<Polynomial>> {
    if !phi.is_monic() || phi.degree() == Some(0) {
        return Err(Error::domain(format!(
            "expansion base {phi} must be monic of positive degree"
        )));
    }
    let mut digits = Vec::new();
    let mut rest = f.clone();
    while !rest.is_zero() {
        let (quot, rem) = rest.div_rem_monic(phi)?;
        digits.push(rem);
        rest = quot;
    }
    Ok(digits)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Step {
    pub key: Polynomial,
    pub lambda: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MacLaneValuation {
    base: BaseField,
    steps: Vec<Step>,
    certified: bool,
}

impl MacLaneValuation {
    /// The Gauss valuation `v0`.
    pub fn gauss(base: BaseField) -> Self {
        MacLaneValuation {
            base,
            steps: Vec::new(),
            certified: true,
        }
    }

    /// Builds `[v0, v1(key1)=λ1, ...]` one augmentation at a time.
    pub fn new(
        base: BaseField,
        steps: impl IntoIterator<Item = (Polynomial, Rational)>,
    ) -> Result<Self> {
        steps
            .into_iter()
            .try_fold(MacLaneValuation::gauss(base), |v, (key, lambda)| {
                v.augment(key, lambda)
            })
    }

    pub fn base(&self) -> &BaseField {
        &self.base
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// Number of augmentations.
    pub fn depth(&self) -> usize {
        self.steps.len()
    }

    /// False when some key lies outside the certified families.
    pub fn is_certified(&self) -> bool {
        self.certified
    }

    /// The valuation through step `j` only.
    pub fn truncate(&self, j: usize) -> MacLaneValuation {
        let steps = self.steps[..j.min(self.steps.len())].to_vec();
        let mut v = MacLaneValuation {
            base: self.base.clone(),
            steps: Vec::new(),
            certified: true,
        };
        for step in steps {
            v.certified &= is_simple_key(&v, &step.key);
            v.steps.push(step);
        }
        v
    }

    /// The augmentation `[self, v'(key) = lambda]`, with every violated
    /// condition reported.
    pub fn augment(&self, key: Polynomial, lambda: Rational) -> Result<MacLaneValuation> {
        let index = self.steps.len() + 1;
        let mut problems = Vec::new();
        let degree = key.degree().unwrap_or(0);
        if !key.is_monic() || degree == 0 {
            problems.push(format!(
                "key g_{index} = {key} must be monic of positive degree"
            ));
        }
        if let Some(c) = key.coeffs().iter().find(|c| !self.base.is_integral(c)) {
            problems.push(format!(
                "key g_{index} = {key} has coefficient {c} that is not {}-integral",
                self.base.p
            ));
        }
        match self.steps.last() {
            None => {
                if degree != 1 {
                    problems.push(format!("key g_1 = {key} must be linear"));
                }
                if lambda.is_negative() {
                    problems.push(format!("lambda_1 = {lambda} must be nonnegative"));
                }
            }
            Some(prev) => {
                let prev_degree = prev.key.degree().unwrap_or(0);
                if degree <= prev_degree {
                    problems.push(format!(
                        "key degrees must increase: deg g_{index} = {degree} <= {prev_degree}"
                    ));
                }
            }
        }
        if !problems.is_empty() {
            return Err(Error::Validation(problems));
        }
        if index >= 2 {
            let current = self.evaluate(&key);
            if !(Value::Finite(lambda.clone()) > current) {
                return Err(Error::Validation(vec![format!(
                    "lambda_{index} = {lambda} must exceed v_{}(g_{index}) = {current}",
                    index - 1
                )]));
            }
        }

        let certified = self.certified && is_simple_key(self, &key);
        let mut steps = self.steps.clone();
        steps.push(Step { key, lambda });
        let next = MacLaneValuation {
            base: self.base.clone(),
            steps,
            certified,
        };
        let last = next.steps.last().expect("just pushed");
        if next.evaluate(&last.key) != last.lambda {
            return Err(Error::invariant(format!(
                "augmented valuation does not take the value {} on its key",
                last.lambda
            )));
        }
        Ok(next)
    }

    pub fn evaluate(&self, f: &Polynomial) -> Value {
        self.evaluate_through(self.steps.len(), f)
    }

    /// `v_j(f)`: the valuation truncated after `j` augmentations.
    pub fn evaluate_through(&self, j: usize, f: &Polynomial) -> Value {
        if f.is_zero() {
            return Value::Infinity;
        }
        if j == 0 {
            return f
                .coeffs()
                .iter()
                .map(|c| self.base.valuation(c))
                .min()
                .unwrap_or(Value::Infinity);
        }
        let step = &self.steps[j - 1];
        let digits = phi_expansion(f, &step.key).expect("keys are monic of positive degree");
        digits
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(i, a)| {
                let weight = step.lambda.mul_int(&BigInt::from(i));
                self.evaluate_through(j - 1, a) + &weight
            })
            .min()
            .unwrap_or(Value::Infinity)
    }
}

/// Renders in the parser's grammar: `[v0, v1(x)=1/2, v2(x^2+2)=3]`.
impl fmt::Display for MacLaneValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[v0")?;
        for (i, step) in self.steps.iter().enumerate() {
            write!(f, ", v{}({})={}", i + 1, step.key, step.lambda)?;
        }
        write!(f, "]")
    }
}

/// Recognizes the two certified key families; false means "not certified",
/// never "not a key".
pub fn is_simple_key(v: &MacLaneValuation, phi: &Polynomial) -> bool {
    if !phi.is_monic() || !phi.coeffs().iter().all(|c| v.base.is_integral(c)) {
        return false;
    }
    match v.steps() {
        [] => phi.degree() == Some(1),
        [first] => {
            if first.key != Polynomial::x() {
                return false;
            }
            let lambda = &first.lambda;
            let p = BigInt::from(v.base.p);
            let den = lambda.denom();
            let Some(e) = pure_power(den, &p) else {
                return false;
            };
            let r = lambda.numer();
            if e == 0 || !r.is_positive() || r >= den || !r.gcd(&p).is_one() {
                return false;
            }
            let Some(degree) = phi.degree() else {
                return false;
            };
            if BigInt::from(degree) != *den {
                return false;
            }
            let r = Rational::from_integer(r.clone());
            v.base.valuation(&phi.coeff(0)) == r && v.evaluate(phi) == r
        }
        _ => false,
    }
}

/// `Some(e)` when `n = p^e`.
fn pure_power(n: &BigInt, p: &BigInt) -> Option<u32> {
    let mut e = 0;
    let mut rest = n.clone();
    while !rest.is_one() {
        let (quot, rem) = rest.div_rem(p);
        if !rem.is_zero() {
            return None;
        }
        rest = quot;
        e += 1;
    }
    Some(e)
}

/// The slopes `(λ1, ..., λn)` of an inductive valuation together with the
/// running denominators `N_i = lcm(d_1, ..., d_i)`, `N_0 = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ValuationShape {
    lambdas: Vec<Rational>,
    levels: Vec<BigInt>,
}

impl ValuationShape {
    /// Checks the shape conditions, reporting each failure by name.
    pub fn new(lambdas: Vec<Rational>) -> Result<Self> {
        if lambdas.is_empty() {
            return Err(Error::Validation(vec![
                "a shape needs at least one slope".to_string()
            ]));
        }
        let mut levels = vec![BigInt::one()];
        for lambda in &lambdas {
            let next = lcm(levels.last().expect("nonempty"), lambda.denom());
            levels.push(next);
        }
        let n = lambdas.len();
        let mut problems = Vec::new();
        if lambdas[0].is_negative() {
            problems.push(format!(
                "nonnegativity: lambda_1 = {} must be >= 0",
                lambdas[0]
            ));
        }
        for i in 1..n {
            // 1-based index i, slope lambdas[i - 1]
            let lambda = &lambdas[i - 1];
            if lambda.in_lattice(&levels[i - 1]) {
                problems.push(format!(
                    "lattice: lambda_{i} = {lambda} lies in (1/{})Z but is not the last slope",
                    levels[i - 1]
                ));
            }
        }
        for i in 2..=n {
            let ratio = Rational::reduce(levels[i - 1].clone(), levels[i - 2].clone())?;
            let floor = &ratio * &lambdas[i - 2];
            if lambdas[i - 1] <= floor {
                problems.push(format!(
                    "monotonicity: lambda_{i} = {} must exceed (N_{}/N_{})*lambda_{} = {floor}",
                    lambdas[i - 1],
                    i - 1,
                    i - 2,
                    i - 1
                ));
            }
        }
        if !problems.is_empty() {
            return Err(Error::Validation(problems));
        }
        Ok(ValuationShape { lambdas, levels })
    }

    /// Number of slopes `n`.
    pub fn n(&self) -> usize {
        self.lambdas.len()
    }

    pub fn lambdas(&self) -> &[Rational] {
        &self.lambdas
    }

    /// `λ_i`, 1-based.
    pub fn lambda(&self, i: usize) -> &Rational {
        &self.lambdas[i - 1]
    }

    /// `d_i`, 1-based.
    pub fn denominator(&self, i: usize) -> &BigInt {
        self.lambdas[i - 1].denom()
    }

    /// `N_i` for `0 <= i <= n`.
    pub fn level(&self, i: usize) -> &BigInt {
        &self.levels[i]
    }

    /// `(N_1, ..., N_n)`.
    pub fn levels(&self) -> &[BigInt] {
        &self.levels[1..]
    }

    pub fn multiplicity(&self) -> &BigInt {
        self.levels.last().expect("levels start with N_0")
    }
}

/// Renders as the shorthand grammar form `[1/2, 3]`.
impl fmt::Display for ValuationShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, lambda) in self.lambdas.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{lambda}")?;
        }
        write!(f, "]")
    }
}

/// `lcm(d_1, ..., d_n)`.
pub fn multiplicity(shape: &ValuationShape) -> BigInt {
    shape.multiplicity().clone()
}

pub fn shape_of(v: &MacLaneValuation) -> Result<ValuationShape> {
    ValuationShape::new(v.steps.iter().map(|s| s.lambda.clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::q;

    fn two() -> BaseField {
        BaseField::mixed(2).unwrap()
    }

    fn poly(c: &[i64]) -> Polynomial {
        Polynomial::from_ints(c)
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn example_valuation() -> MacLaneValuation {
        MacLaneValuation::new(
            two(),
            [(poly(&[0, 1]), q("1/2")), (poly(&[2, 0, 1]), q("3"))],
        )
        .unwrap()
    }

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..40).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(3_215_031_751));
        assert!(is_prime(18_446_744_073_709_551_557));
    }

    #[test]
    fn expansion_examples() {
        let x2p2 = poly(&[2, 0, 1]);
        assert_eq!(
            phi_expansion(&x2p2, &Polynomial::x()).unwrap(),
            vec![poly(&[2]), Polynomial::zero(), poly(&[1])]
        );
        assert_eq!(
            phi_expansion(&x2p2, &x2p2).unwrap(),
            vec![Polynomial::zero(), poly(&[1])]
        );
        assert_eq!(
            phi_expansion(&poly(&[1, 1, 0, 1]), &poly(&[1, 0, 1])).unwrap(),
            vec![poly(&[1]), Polynomial::x()]
        );
        assert!(matches!(
            phi_expansion(&x2p2, &poly(&[1, 2])),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn evaluation_examples() {
        let gauss = MacLaneValuation::gauss(two());
        assert_eq!(gauss.evaluate(&poly(&[1, 6, 4])), q("0"));
        let v1 = MacLaneValuation::new(two(), [(Polynomial::x(), q("1/2"))]).unwrap();
        assert_eq!(v1.evaluate(&poly(&[2, 0, 1])), q("1"));
        assert_eq!(example_valuation().evaluate(&poly(&[2, 0, 1])), q("3"));
        assert_eq!(
            example_valuation().evaluate(&Polynomial::zero()),
            Value::Infinity
        );
    }

    #[test]
    fn multiplicity_examples() {
        let shape = |v: &[&str]| ValuationShape::new(v.iter().map(|s| q(s)).collect()).unwrap();
        assert_eq!(multiplicity(&shape(&["1/2", "3"])), BigInt::from(2));
        assert_eq!(multiplicity(&shape(&["3"])), BigInt::from(1));
        assert_eq!(multiplicity(&shape(&["1/2", "7/4", "5"])), BigInt::from(4));
    }

    #[test]
    fn simple_key_examples() {
        let gauss = MacLaneValuation::gauss(two());
        assert!(is_simple_key(&gauss, &poly(&[-6, 1])));
        let v1 = MacLaneValuation::new(two(), [(Polynomial::x(), q("1/2"))]).unwrap();
        assert!(is_simple_key(&v1, &poly(&[2, 0, 1])));
        assert!(!is_simple_key(&v1, &poly(&[4, 0, 1])));
        assert!(example_valuation().is_certified());
    }

    #[test]
    fn shape_examples() {
        let s = shape_of(&example_valuation()).unwrap();
        assert_eq!(s.lambdas(), &[q("1/2"), q("3")]);
        assert_eq!(s.levels(), ints(&[2, 2]).as_slice());

        let v = MacLaneValuation::new(two(), [(Polynomial::x(), q("2"))]).unwrap();
        let s = shape_of(&v).unwrap();
        assert_eq!(s.lambdas(), &[q("2")]);
        assert_eq!(s.levels(), ints(&[1]).as_slice());

        let v = MacLaneValuation::new(
            two(),
            [(Polynomial::x(), q("1/2")), (poly(&[2, 0, 1]), q("7/4"))],
        )
        .unwrap();
        let s = shape_of(&v).unwrap();
        assert_eq!(s.levels(), ints(&[2, 4]).as_slice());
        assert_eq!(s.to_string(), "[1/2, 7/4]");
    }

    #[test]
    fn shape_diagnostics_name_the_condition() {
        let err = ValuationShape::new(vec![q("1"), q("3")]).unwrap_err();
        assert!(err.to_string().contains("lattice"), "{err}");
        let err = ValuationShape::new(vec![q("1/2"), q("1")]).unwrap_err();
        assert!(err.to_string().contains("monotonicity"), "{err}");
        let err = ValuationShape::new(vec![q("-1"), q("3")]).unwrap_err();
        let Error::Validation(list) = err else {
            panic!("expected a validation error")
        };
        assert_eq!(list.len(), 2);
    }

    #[test]
    fn augmentation_rules() {
        let gauss = MacLaneValuation::gauss(two());
        assert!(gauss.augment(poly(&[2, 0, 1]), q("1")).is_err());
        assert!(gauss.augment(poly(&[0, 2]), q("1")).is_err());
        assert!(gauss
            .augment(Polynomial::new(vec![q("1/2"), q("1")]), q("1"))
            .is_err());
        let v1 = gauss.augment(Polynomial::x(), q("1/2")).unwrap();
        // v1(x^2+2) = 1, so λ2 = 1 is not a proper augmentation
        assert!(v1.augment(poly(&[2, 0, 1]), q("1")).is_err());
        assert!(v1.augment(Polynomial::x(), q("3")).is_err());
        // v1(x^2+x+2) = 1/2, not the constant-term valuation 1
        let odd = v1.augment(poly(&[2, 1, 1]), q("5")).unwrap();
        assert!(!odd.is_certified());
        let uncertified = v1.augment(poly(&[2, 0, 0, 1]), q("5/2")).unwrap();
        assert!(!uncertified.is_certified());
        assert_eq!(
            example_valuation().to_string(),
            "[v0, v1(x)=1/2, v2(x^2+2)=3]"
        );
    }

    #[test]
    fn base_field_rules() {
        assert!(BaseField::mixed(4).is_err());
        assert!(BaseField::new(3, Characteristic::P, Some(1)).is_err());
        assert!(BaseField::new(3, Characteristic::Zero, Some(0)).is_err());
        assert_eq!(two().valuation(&q("12/5")), Value::Finite(q("2")));
        assert_eq!(two().valuation(&q("3/8")), Value::Finite(q("-3")));
    }
}
