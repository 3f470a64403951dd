//! Exhaustive search for shortest N-paths, used to cross-check the
//! continued-fraction construction.
//!
//! The search runs over the finite graph of all rationals in `[a', a]` whose
//! reduced denominator is at most a caller-supplied bound, with an edge
//! `u -> w` whenever `u > w` and the step law holds. A minimum-edge path in
//! this graph can never contain a removable entry (removing one would give a
//! shorter path in the same graph), so whatever the search returns satisfies
//! the definition directly. Arithmetic is plain `i128` on purpose: nothing
//! here shares code with the construction in the parent module.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::NPath;
use crate::error::{Error, Result};
use crate::numeric::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Frac {
    num: i128,
    den: i128,
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn lcm(a: i128, b: i128) -> i128 {
    a / gcd(a, b) * b
}

impl Frac {
    fn new(num: i128, den: i128) -> Frac {
        let g = gcd(num, den).max(1);
        Frac {
            num: num / g,
            den: den / g,
        }
    }

    fn cmp_value(&self, other: &Frac) -> std::cmp::Ordering {
        (self.num * other.den).cmp(&(other.num * self.den))
    }
}

fn to_frac(q: &Rational) -> Result<Frac> {
    match (q.numer().to_i128(), q.denom().to_i128()) {
        (Some(num), Some(den)) if num.abs() < (1 << 40) && den < (1 << 40) => Ok(Frac { num, den }),
        _ => Err(Error::domain(format!(
            "{q} is too large for the search oracle"
        ))),
    }
}

#[derive(Clone, Copy)]
struct Visit {
    dist: usize,
    parent: Option<Frac>,
    /// Number of minimum-length routes, saturating at 2.
    routes: u8,
}

/// The shortest N-path from `a` to `a_prime` by breadth-first search over all
/// rationals with denominator at most `den_bound`.
///
/// Fails with [`Error::BoundExhausted`] when no path exists inside the bound,
/// and with [`Error::Invariant`] if two distinct minimum paths turn up.
pub fn brute_force_shortest_npath(
    n: &BigInt,
    a: &Rational,
    a_prime: &Rational,
    den_bound: u64,
) -> Result<NPath> {
    let modulus = n
        .to_i128()
        .filter(|&m| m > 0 && m < (1 << 20))
        .ok_or_else(|| Error::domain(format!("N = {n} outside the oracle's range")))?;
    if a_prime.is_negative() || a <= a_prime {
        return Err(Error::domain(format!(
            "need a > a' >= 0, got a = {a}, a' = {a_prime}"
        )));
    }
    if den_bound == 0 || den_bound > 1 << 16 {
        return Err(Error::domain(format!(
            "denominator bound {den_bound} out of range"
        )));
    }
    let bound = den_bound as i128;
    let start = to_frac(a)?;
    let goal = to_frac(a_prime)?;
    if start.den > bound || goal.den > bound {
        return Err(Error::BoundExhausted { bound: den_bound });
    }

    // The step depends on the lower entry only through lcm(N, den), so one
    // candidate per distinct lcm value covers every admissible denominator.
    let mut levels: Vec<i128> = (1..=bound).map(|d| lcm(modulus, d)).collect();
    levels.sort_unstable();
    levels.dedup();

    let mut seen: HashMap<Frac, Visit> = HashMap::new();
    seen.insert(
        start,
        Visit {
            dist: 0,
            parent: None,
            routes: 1,
        },
    );
    let mut queue = VecDeque::from([start]);
    let mut goal_dist = None;

    while let Some(u) = queue.pop_front() {
        let here = seen[&u];
        if goal_dist.is_some_and(|d| here.dist >= d) {
            break;
        }
        let upper_level = lcm(modulus, u.den);
        for &level in &levels {
            // w = u - N / (lcm(N, den u) · level)
            let step_den = upper_level * level;
            let w = Frac::new(u.num * step_den - modulus * u.den, u.den * step_den);
            if w.cmp_value(&goal) == std::cmp::Ordering::Less
                || w.den > bound
                || lcm(modulus, w.den) != level
            {
                continue;
            }
            match seen.get_mut(&w) {
                Some(visit) if visit.dist == here.dist + 1 => {
                    visit.routes = visit.routes.saturating_add(here.routes).min(2);
                }
                Some(_) => {}
                None => {
                    seen.insert(
                        w,
                        Visit {
                            dist: here.dist + 1,
                            parent: Some(u),
                            routes: here.routes,
                        },
                    );
                    if w == goal {
                        goal_dist = Some(here.dist + 1);
                    } else {
                        queue.push_back(w);
                    }
                }
            }
        }
    }

    let Some(found) = seen.get(&goal).copied() else {
        return Err(Error::BoundExhausted { bound: den_bound });
    };
    if found.routes > 1 {
        return Err(Error::invariant(format!(
            "two distinct minimum {n}-paths from {a} to {a_prime}"
        )));
    }

    let mut entries = Vec::with_capacity(found.dist + 1);
    let mut cursor = Some(goal);
    while let Some(f) = cursor {
        entries.push(Rational::reduce(f.num, f.den)?);
        cursor = seen[&f].parent;
    }
    entries.reverse();
    Ok(NPath {
        modulus: n.clone(),
        entries,
    })
}
