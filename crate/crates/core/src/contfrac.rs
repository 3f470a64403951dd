//! Negative (minus-sign) continued fractions
//! `y = a0 - 1/(a1 - 1/(... - 1/ak))` with `ai >= 2` for `i >= 1`.
//!
//! Convergents come from the three-term recurrences
//! `b(i+2) = a(i+2) b(i+1) - b(i)`, `c(i+2) = a(i+2) c(i+1) - c(i)`
//! seeded by `b0 = a0, c0 = 1, b1 = a0 a1 - 1, c1 = a1`. Adjacent convergents
//! satisfy `b(i) c(i+1) - b(i+1) c(i) = 1`, which makes every `b(i)/c(i)`
//! automatically reduced and the sequence strictly decreasing.

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NegContFrac {
    pub target: Rational,
    #[serde(serialize_with = "serialize_ints")]
    pub quotients: Vec<BigInt>,
    pub convergents: Vec<Rational>,
}

fn serialize_ints<S: serde::Serializer>(
    values: &[BigInt],
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = serializer.serialize_seq(Some(values.len()))?;
    for v in values {
        // Plain JSON numbers while they fit, decimal strings beyond that.
        match i64::try_from(v) {
            Ok(small) => seq.serialize_element(&small)?,
            Err(_) => seq.serialize_element(&v.to_string())?,
        }
    }
    seq.end()
}

impl NegContFrac {
    /// Numerators `b_i` of the convergents.
    pub fn numerators(&self) -> impl Iterator<Item = &BigInt> {
        self.convergents.iter().map(Rational::numer)
    }

    /// Denominators `c_i` of the convergents.
    pub fn denominators(&self) -> impl Iterator<Item = &BigInt> {
        self.convergents.iter().map(Rational::denom)
    }

    /// Index of the last quotient.
    pub fn len(&self) -> usize {
        self.quotients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quotients.is_empty()
    }
}

/// Expands any rational: `a0 = ⌈y⌉`, then recurse on `1/(a0 - y)` while the
/// remainder is not an integer.
pub fn ncf_expand(y: &Rational) -> NegContFrac {
    let mut quotients = Vec::new();
    let mut rest = y.clone();
    loop {
        let a = rest.ceil();
        let gap = Rational::from_integer(a.clone()) - &rest;
        quotients.push(a);
        if gap.is_zero() {
            break;
        }
        // 0 < gap < 1, so the next quotient is at least 2
        rest = gap.recip().expect("gap is nonzero");
    }
    let convergents = convergents(&quotients).expect("expansion quotients are valid");
    NegContFrac {
        target: y.clone(),
        quotients,
        convergents,
    }
}

/// Convergents `b_i/c_i` of `[a0, ..., ak]`.
pub fn convergents(quotients: &[BigInt]) -> Result<Vec<Rational>> {
    convergent_pairs(quotients)?
        .into_iter()
        .map(|(b, c)| Rational::from_coprime(b, c))
        .collect()
}

/// Unreduced recurrence output `(b_i, c_i)`.
pub fn convergent_pairs(quotients: &[BigInt]) -> Result<Vec<(BigInt, BigInt)>> {
    let Some(first) = quotients.first() else {
        return Err(Error::domain(
            "continued fraction needs at least one quotient",
        ));
    };
    let two = BigInt::from(2);
    if let Some((i, bad)) = quotients
        .iter()
        .enumerate()
        .skip(1)
        .find(|(_, a)| **a < two)
    {
        return Err(Error::Validation(vec![format!(
            "partial quotient a_{i} = {bad} must be at least 2"
        )]));
    }

    let mut pairs = Vec::with_capacity(quotients.len());
    // (b_{-1}, c_{-1}) = (1, 0) makes the recurrence uniform from i = 0
    let (mut b_prev, mut c_prev) = (BigInt::one(), BigInt::from(0));
    let (mut b, mut c) = (first.clone(), BigInt::one());
    pairs.push((b.clone(), c.clone()));
    for a in &quotients[1..] {
        let b_next = a * &b - &b_prev;
        let c_next = a * &c - &c_prev;
        b_prev = std::mem::replace(&mut b, b_next);
        c_prev = std::mem::replace(&mut c, c_next);
        pairs.push((b.clone(), c.clone()));
    }
    Ok(pairs)
}

/// Rebuilds `a0 - 1/(a1 - ... - 1/ak)` by folding from the right.
pub fn evaluate_quotients(quotients: &[BigInt]) -> Result<Rational> {
    let mut iter = quotients.iter().rev();
    let last = iter
        .next()
        .ok_or_else(|| Error::domain("continued fraction needs at least one quotient"))?;
    let mut acc = Rational::from_integer(last.clone());
    for a in iter {
        acc = Rational::from_integer(a.clone()) - acc.recip()?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::q;
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn expansion_examples() {
        assert_eq!(ncf_expand(&q("26/9")).quotients, ints(&[3, 9]));
        assert_eq!(ncf_expand(&q("5")).quotients, ints(&[5]));
        assert_eq!(ncf_expand(&q("2/5")).quotients, ints(&[1, 2, 3]));
        // reconstruction by hand: 3 - 1/9 = 26/9, 1 - 1/(2 - 1/3) = 2/5
        assert_eq!(evaluate_quotients(&ints(&[3, 9])).unwrap(), q("26/9"));
        assert_eq!(evaluate_quotients(&ints(&[1, 2, 3])).unwrap(), q("2/5"));
    }

    #[test]
    fn expansion_of_nonpositive_inputs() {
        let zero = ncf_expand(&q("0"));
        assert_eq!(zero.quotients, ints(&[0]));
        let neg = ncf_expand(&q("-7/3"));
        assert_eq!(neg.quotients[0], BigInt::from(-2));
        assert_eq!(evaluate_quotients(&neg.quotients).unwrap(), q("-7/3"));
    }

    #[test]
    fn convergent_examples() {
        assert_eq!(
            convergents(&ints(&[3, 9])).unwrap(),
            vec![q("3"), q("26/9")]
        );
        assert_eq!(
            convergents(&ints(&[2, 2, 3])).unwrap(),
            vec![q("2"), q("3/2"), q("7/5")]
        );
        assert_eq!(convergents(&ints(&[-4])).unwrap(), vec![q("-4")]);
    }

    #[test]
    fn convergents_reject_small_quotients() {
        assert!(matches!(
            convergents(&ints(&[3, 1])),
            Err(Error::Validation(_))
        ));
        assert!(convergents(&[]).is_err());
    }

    #[test]
    fn json_shape() {
        let json = serde_json::to_string(&ncf_expand(&q("26/9"))).unwrap();
        assert_eq!(
            json,
            r#"{"target":"26/9","quotients":[3,9],"convergents":["3","26/9"]}"#
        );
    }

    fn positive_frac() -> impl Strategy<Value = Rational> {
        (1i64..=1_000_000, 1i64..=1_000_000).prop_map(|(n, d)| Rational::reduce(n, d).unwrap())
    }

    fn small_frac() -> impl Strategy<Value = Rational> {
        (1i64..=3_000, 1i64..=3_000).prop_map(|(n, d)| Rational::reduce(n, d).unwrap())
    }

    proptest! {
        #[test]
        fn determinant_identity(y in positive_frac()) {
            let cf = ncf_expand(&y);
            for w in cf.convergents.windows(2) {
                let det = w[0].numer() * w[1].denom() - w[1].numer() * w[0].denom();
                prop_assert_eq!(det, BigInt::one());
                prop_assert!(w[0] > w[1]);
            }
        }

        #[test]
        fn round_trip(y in positive_frac()) {
            let cf = ncf_expand(&y);
            prop_assert_eq!(cf.convergents.last().unwrap(), &y);
            prop_assert_eq!(evaluate_quotients(&cf.quotients).unwrap(), y);
        }

        #[test]
        fn denominators_increase(y in positive_frac()) {
            let cf = ncf_expand(&y);
            let dens: Vec<_> = cf.denominators().cloned().collect();
            prop_assert!(dens.windows(2).all(|w| w[0] < w[1]));
        }

        #[test]
        fn non_adjacent_gap(y in small_frac()) {
            let cf = ncf_expand(&y);
            let c = &cf.convergents;
            for i in 0..c.len() {
                for j in (i + 2)..c.len() {
                    let gap = &c[i] - &c[j];
                    let bound = Rational::reduce(1, c[i].denom() * c[j].denom()).unwrap();
                    prop_assert!(gap > bound);
                }
            }
        }
    }
}
