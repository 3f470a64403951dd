//! Validators tying valuation shapes to weak wild quotient singularities.
//!
//! A shape `(λ1, ..., λn)` is of weak wild form for the prime `p` when
//! `λi = ci / p^ei` with pure p-power denominators, `0 < e1 < ... < e(n-1)`,
//! `c1, ..., c(n-1)` prime to `p`, `c1 < p^e1`, and `λn` integral. With
//! `r = c1·p^(e - e1)` and ramification jump `s` the last numerator obeys
//! `cn >= r + s`, with equality exactly when `n = 2`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::maclane::{is_prime, padic_order, Characteristic, ValuationShape};
use crate::numeric::Rational;

/// Violation names, stable for scripting.
pub mod violation {
    pub const NOT_P_POWER: &str = "denominator not a p-power";
    pub const TOO_FEW_SLOPES: &str = "at least two slopes required";
    pub const NUMERATOR_COPRIME: &str = "numerator not coprime to p";
    pub const LEADING_NUMERATOR: &str = "leading numerator not below p^e1";
    pub const EXPONENTS: &str = "exponents not strictly increasing from 1";
    pub const LAST_INTEGRAL: &str = "last slope not integral";
    pub const JUMP: &str = "jump condition";
    pub const R_RANGE: &str = "r out of range";
    pub const S_RANGE: &str = "s out of range";
    pub const P_DIVIDES_S: &str = "p divides s";
    pub const S_ABOVE_BOUND: &str = "s above ramification bound";
    pub const P_NOT_PRIME: &str = "p not prime";
}

/// Reported alongside every successful classification: the irreducibility of
/// the last key and the generation of the field extension are outside what
/// this library decides.
pub const UNCHECKED_CONDITION: &str =
    "irreducibility of the last key and generation of L/K: not machine-checked";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WWParams {
    pub p: u64,
    /// The group is `(Z/p)^e`.
    pub e: u32,
    pub n: usize,
    #[serde(serialize_with = "serialize_bigints")]
    pub c: Vec<BigInt>,
    /// `e1 < ... < e(n-1)`; the last slope has exponent 0.
    pub eexp: Vec<u32>,
    #[serde(serialize_with = "serialize_bigint")]
    pub r: BigInt,
    #[serde(serialize_with = "serialize_opt_bigint")]
    pub s: Option<BigInt>,
    pub unchecked: &'static str,
}

fn serialize_bigint<S: serde::Serializer>(
    v: &BigInt,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    serializer.collect_str(v)
}

fn serialize_bigints<S: serde::Serializer>(
    v: &[BigInt],
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    serializer.collect_seq(v.iter().map(|x| x.to_string()))
}

fn serialize_opt_bigint<S: serde::Serializer>(
    v: &Option<BigInt>,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => serializer.collect_str(x),
        None => serializer.serialize_none(),
    }
}

fn named(name: &str, detail: impl std::fmt::Display) -> String {
    format!("{name}: {detail}")
}

/// Decomposes the shape for the prime `p` and reports every failed
/// condition. A supplied `s` is checked against the jump condition; for
/// `n = 2` a missing `s` is derived as `cn - r`.
pub fn classify_ww(shape: &ValuationShape, p: u64, s: Option<&BigInt>) -> Result<WWParams> {
    if !is_prime(p) {
        return Err(Error::Validation(vec![named(
            violation::P_NOT_PRIME,
            format!("p = {p}"),
        )]));
    }
    let prime = BigInt::from(p);
    let n = shape.n();
    let mut problems = Vec::new();
    let mut exps = Vec::with_capacity(n);
    for (i, lambda) in shape.lambdas().iter().enumerate() {
        let den = lambda.denom();
        let e = padic_order(den, &prime);
        if !prime.clone().pow(e as u32).eq(den) {
            problems.push(named(
                violation::NOT_P_POWER,
                format!("lambda_{} = {lambda}", i + 1),
            ));
        }
        exps.push(e as u32);
    }
    if n < 2 {
        problems.push(named(violation::TOO_FEW_SLOPES, format!("n = {n}")));
    }
    let c: Vec<BigInt> = shape.lambdas().iter().map(|l| l.numer().clone()).collect();
    let last = shape.lambda(n);
    if !last.is_integer() {
        problems.push(named(
            violation::LAST_INTEGRAL,
            format!("lambda_{n} = {last}"),
        ));
    }
    if n >= 2 {
        let inner = &exps[..n - 1];
        if inner[0] == 0 || inner.windows(2).any(|w| w[0] >= w[1]) {
            let list: Vec<String> = inner.iter().map(u32::to_string).collect();
            problems.push(named(
                violation::EXPONENTS,
                format!("({})", list.join(", ")),
            ));
        }
        for (i, ci) in c[..n - 1].iter().enumerate() {
            if !ci.gcd(&prime).is_one() {
                problems.push(named(
                    violation::NUMERATOR_COPRIME,
                    format!("c_{} = {ci}", i + 1),
                ));
            }
        }
        let bound = prime.clone().pow(exps[0]);
        if !(c[0].is_positive() && c[0] < bound) {
            problems.push(named(
                violation::LEADING_NUMERATOR,
                format!("c_1 = {} against p^e1 = {bound}", c[0]),
            ));
        }
    }
    if !problems.is_empty() {
        return Err(Error::Validation(problems));
    }

    let e = exps[n - 2];
    let r = &c[0] * prime.clone().pow(e - exps[0]);
    let c_n = &c[n - 1];
    let s = match s {
        Some(s) => {
            let bound = &r + s;
            let equal = *c_n == bound;
            if !s.is_positive() {
                problems.push(named(violation::S_RANGE, format!("s = {s}")));
            } else if *c_n < bound || equal != (n == 2) {
                let relation = if n == 2 { "=" } else { ">" };
                problems.push(named(
                    violation::JUMP,
                    format!("c_n = {c_n} must be {relation} r + s = {bound}"),
                ));
            }
            Some(s.clone())
        }
        None if n == 2 => {
            let derived = c_n - &r;
            if !derived.is_positive() {
                problems.push(named(
                    violation::JUMP,
                    format!("c_n = {c_n} must exceed r = {r}"),
                ));
            }
            Some(derived)
        }
        None => None,
    };
    if !problems.is_empty() {
        return Err(Error::Validation(problems));
    }
    Ok(WWParams {
        p,
        e,
        n,
        c,
        eexp: exps[..n - 1].to_vec(),
        r,
        s,
        unchecked: UNCHECKED_CONDITION,
    })
}

/// `(r/p, r + s)`.
pub fn make_rs_shape(p: u64, r: u64, s: u64) -> Result<ValuationShape> {
    let mut problems = Vec::new();
    if !is_prime(p) {
        problems.push(named(violation::P_NOT_PRIME, format!("p = {p}")));
    }
    if r == 0 || r >= p {
        problems.push(named(
            violation::R_RANGE,
            format!("need 0 < r < p, got r = {r}"),
        ));
    }
    if s == 0 {
        problems.push(named(violation::S_RANGE, "need s > 0"));
    }
    if !problems.is_empty() {
        return Err(Error::Domain(problems.join("; ")));
    }
    ValuationShape::new(vec![
        Rational::reduce(r, p)?,
        Rational::from_integer(BigInt::from(r) + s),
    ])
}

/// Existence constraints for a type `(r, s)` singularity.
pub fn validate_rs(
    p: u64,
    r: u64,
    s: u64,
    characteristic: Characteristic,
    e_k: Option<u64>,
) -> Result<()> {
    let mut problems = Vec::new();
    if !is_prime(p) {
        problems.push(named(violation::P_NOT_PRIME, format!("p = {p}")));
    }
    if r == 0 || r >= p {
        problems.push(named(
            violation::R_RANGE,
            format!("need 0 < r < p, got r = {r}"),
        ));
    }
    if s == 0 {
        problems.push(named(violation::S_RANGE, "need s > 0"));
    }
    match (characteristic, e_k) {
        (Characteristic::P, _) => {
            if s > 0 && s.is_multiple_of(p) {
                problems.push(named(violation::P_DIVIDES_S, format!("p = {p}, s = {s}")));
            }
        }
        (Characteristic::Zero, Some(e_k)) if p > 1 => {
            // s <= p·e_K/(p-1)
            let lhs = BigInt::from(s) * (p - 1);
            let rhs = BigInt::from(p) * e_k;
            if lhs > rhs {
                let bound = Rational::reduce(rhs, p - 1)?;
                problems.push(named(
                    violation::S_ABOVE_BOUND,
                    format!("s = {s} > p*e_K/(p-1) = {bound}"),
                ));
            }
        }
        _ => {}
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(Error::Validation(problems))
    }
}

/// `t` with `t·r ≡ 1 (mod p)`, `0 < t < p`.
pub fn inverse_mod(r: u64, p: u64) -> Option<u64> {
    let g = BigInt::from(r).extended_gcd(&BigInt::from(p));
    if !g.gcd.is_one() {
        return None;
    }
    let t = g.x.mod_floor(&BigInt::from(p));
    if t.is_zero() {
        return None;
    }
    u64::try_from(t).ok()
}
