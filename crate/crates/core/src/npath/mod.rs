//! N-paths: strictly decreasing sequences of non-negative rationals
//! `b0/c0 > b1/c1 > ...` (lowest terms) whose consecutive differences are
//! exactly `N / (lcm(N, c_i) · lcm(N, c_{i+1}))`.
//!
//! A shortest N-path admits no proper endpoint-preserving subsequence that is
//! itself an N-path. Between any `a > a' >= 0` there is exactly one, and it is
//! what every resolution chain in [`crate::resolution`] runs through.

mod oracle;

pub use oracle::brute_force_shortest_npath;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::contfrac::ncf_expand;
use crate::error::{Error, Result};
use crate::numeric::{lcm, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NPath {
    #[serde(serialize_with = "serialize_modulus")]
    pub modulus: BigInt,
    pub entries: Vec<Rational>,
}

fn serialize_modulus<S: serde::Serializer>(
    n: &BigInt,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    serializer.collect_str(n)
}

impl NPath {
    pub fn first(&self) -> &Rational {
        &self.entries[0]
    }

    pub fn last(&self) -> &Rational {
        self.entries.last().expect("paths are never empty")
    }

    /// A single-entry path, produced when both endpoints coincide.
    pub fn is_trivial(&self) -> bool {
        self.entries.len() == 1
    }

    /// Everything except the two endpoints.
    pub fn interior(&self) -> &[Rational] {
        match self.entries.len() {
            0..=2 => &[],
            n => &self.entries[1..n - 1],
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// `lcm(N, den(q))`: the multiplicity attached to `q` at level `N`.
pub fn level_multiplicity(n: &BigInt, q: &Rational) -> BigInt {
    lcm(n, q.denom())
}

/// The exact step `N / (lcm(N, c) · lcm(N, c'))` between two entries.
pub fn unit_step(n: &BigInt, upper: &Rational, lower: &Rational) -> Rational {
    let den = level_multiplicity(n, upper) * level_multiplicity(n, lower);
    Rational::reduce(n.clone(), den).expect("multiplicities are positive")
}

/// True iff `upper - lower` equals the step for level `N`.
pub fn step_holds(n: &BigInt, upper: &Rational, lower: &Rational) -> bool {
    upper - lower == unit_step(n, upper, lower)
}

fn check_modulus(n: &BigInt) -> Result<()> {
    if n.is_positive() {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "N must be a positive integer, got {n}"
        )))
    }
}

fn check_sequence(seq: &[Rational]) -> Result<()> {
    let mut problems = Vec::new();
    if seq.is_empty() {
        problems.push("sequence is empty".to_string());
    }
    if let Some(neg) = seq.iter().find(|q| q.is_negative()) {
        problems.push(format!("entry {neg} is negative"));
    }
    if let Some(w) = seq.windows(2).find(|w| w[0] <= w[1]) {
        problems.push(format!(
            "sequence not strictly decreasing at {} , {}",
            w[0], w[1]
        ));
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(Error::Validation(problems))
    }
}

/// Whether every adjacent pair satisfies the step law.
pub fn is_npath(n: &BigInt, seq: &[Rational]) -> Result<bool> {
    check_modulus(n)?;
    check_sequence(seq)?;
    Ok(seq.windows(2).all(|w| step_holds(n, &w[0], &w[1])))
}

/// Whether `seq` is an N-path from which no interior entry can be dropped.
///
/// Only single-entry removals are tried. The test suite cross-checks this
/// against exhaustive subsequence enumeration.
pub fn is_shortest_npath(n: &BigInt, seq: &[Rational]) -> Result<bool> {
    if !is_npath(n, seq)? {
        return Ok(false);
    }
    Ok(seq.windows(3).all(|w| !step_holds(n, &w[0], &w[2])))
}

/// The unique shortest N-path from `a` down to `a_prime`.
///
/// Works at level 1 on `N·a`, `N·a'` and divides back by `N` at the end.
pub fn shortest_npath(n: &BigInt, a: &Rational, a_prime: &Rational) -> Result<NPath> {
    check_modulus(n)?;
    if a_prime.is_negative() {
        return Err(Error::domain(format!(
            "lower endpoint {a_prime} is negative"
        )));
    }
    if a < a_prime {
        return Err(Error::domain(format!(
            "upper endpoint {a} is below lower endpoint {a_prime}"
        )));
    }
    if a == a_prime {
        return Ok(NPath {
            modulus: n.clone(),
            entries: vec![a.clone()],
        });
    }
    let scaled = shortest_unit_path(&a.mul_int(n), &a_prime.mul_int(n));
    let entries = scaled
        .iter()
        .map(|q| q.div_int(n))
        .collect::<Result<Vec<_>>>()?;
    Ok(NPath {
        modulus: n.clone(),
        entries,
    })
}

/// Shortest 1-path for `a > a' >= 0`.
fn shortest_unit_path(a: &Rational, a_prime: &Rational) -> Vec<Rational> {
    let floor_a = a.floor();
    let ceil_lower = a_prime.ceil();
    if floor_a >= ceil_lower {
        return concatenate_through_integers(a, a_prime, &floor_a, &ceil_lower);
    }

    // No integer in [a', a]: shift into (0, 1), invert-reverse, recurse.
    // The denominators of the inverted endpoints are the old numerators,
    // which are strictly smaller, so this terminates.
    let shift = Rational::from_integer(floor_a);
    let top = a - &shift;
    let bottom = a_prime - &shift;
    let inverted = shortest_unit_path(
        &bottom.recip().expect("bottom is positive"),
        &top.recip().expect("top is positive"),
    );
    inverted
        .iter()
        .rev()
        .map(|q| q.recip().expect("entries are positive") + &shift)
        .collect()
}

/// Path P from `a` down to `⌊a⌋`, unit steps Q down to `⌈a'⌉`, then the
/// convergents of `a'` (path R) from `⌈a'⌉` down to `a'`.
fn concatenate_through_integers(
    a: &Rational,
    a_prime: &Rational,
    floor_a: &BigInt,
    ceil_lower: &BigInt,
) -> Vec<Rational> {
    let mut out = Vec::new();

    if !a.is_integer() {
        // fractional part f in (0, 1): the path from f to 0 is the reversed
        // reciprocals of the convergents of 1/f, followed by 0
        let shift = Rational::from_integer(floor_a.clone());
        let frac = a - &shift;
        let cf = ncf_expand(&frac.recip().expect("fractional part is positive"));
        out.extend(
            cf.convergents
                .iter()
                .rev()
                .map(|c| c.recip().expect("convergents of a value > 1 are positive") + &shift),
        );
    }

    let mut k = floor_a.clone();
    while &k >= ceil_lower {
        out.push(Rational::from_integer(k.clone()));
        k -= 1;
    }

    if !a_prime.is_integer() {
        // convergents start at ⌈a'⌉, already pushed
        let cf = ncf_expand(a_prime);
        out.extend(cf.convergents.into_iter().skip(1));
    }
    out
}

/// Reciprocals in reverse order; maps the shortest 1-path from `a` to `a'`
/// onto the shortest 1-path from `1/a'` to `1/a`.
pub fn invert_reverse(path: &NPath) -> Result<NPath> {
    if !path.modulus.is_one() {
        return Err(Error::domain("invert-reverse applies to 1-paths only"));
    }
    let entries = path
        .entries
        .iter()
        .rev()
        .map(|q| {
            if q.is_positive() {
                q.recip()
            } else {
                Err(Error::domain(format!("cannot invert entry {q}")))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(NPath {
        modulus: BigInt::one(),
        entries,
    })
}

/// Divides every entry of a 1-path by `N`, giving an N-path.
pub fn rescale_path(path: &NPath, n: &BigInt) -> Result<NPath> {
    check_modulus(n)?;
    if !path.modulus.is_one() {
        return Err(Error::domain("rescaling starts from a 1-path"));
    }
    let entries = path
        .entries
        .iter()
        .map(|q| q.div_int(n))
        .collect::<Result<Vec<_>>>()?;
    Ok(NPath {
        modulus: n.clone(),
        entries,
    })
}

impl NPath {
    /// Wraps a sequence after checking that it is an N-path.
    pub fn new(n: BigInt, entries: Vec<Rational>) -> Result<Self> {
        if !is_npath(&n, &entries)? {
            return Err(Error::Validation(vec![format!(
                "sequence violates the {n}-path step law"
            )]));
        }
        Ok(NPath {
            modulus: n,
            entries,
        })
    }

    /// True when the path ends at zero.
    pub fn ends_at_zero(&self) -> bool {
        self.last().is_zero()
    }
}
