//! Shannon-style fairness: entropy of the exceed-count distribution, in the
//! base given by the lcm of its denominators.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::{exceed_counts, SlfQuery};
use crate::chain::StrengthMatrix;
use crate::error::Result;
use crate::graph::ArgumentId;
use crate::scalar::{Rational, Scalar};

/// `S(x) / ΣS` per topic, or `None` when no topic ever reaches the threshold.
pub fn distribution_from_counts(
    counts: &BTreeMap<ArgumentId, u64>,
) -> Option<BTreeMap<ArgumentId, Rational>> {
    let total: u64 = counts.values().sum();
    if total == 0 {
        return None;
    }
    Some(
        counts
            .iter()
            .map(|(x, &s)| (x.clone(), Rational::new(BigInt::from(s), BigInt::from(total))))
            .collect(),
    )
}

pub fn exceed_distribution<S: Scalar>(
    matrix: &StrengthMatrix<S>,
    query: &SlfQuery<S>,
) -> Result<Option<BTreeMap<ArgumentId, Rational>>> {
    Ok(distribution_from_counts(&exceed_counts(matrix, query)?))
}

/// Least common multiple of the lowest-terms denominators.
pub fn shannon_base(distribution: &BTreeMap<ArgumentId, Rational>) -> u64 {
    distribution
        .values()
        .fold(BigInt::one(), |acc, p| acc.lcm(p.denom()))
        .to_u64()
        .expect("denominators divide the total exceed count")
}

/// Score of a defined distribution.
///
/// With base 1 the logarithm is undefined. A single topic holding every
/// exceedance is treated as perfectly fair (1); with several topics, base 1
/// means one topic holds everything while the rest hold nothing, and the
/// entropy sum is 0 in any base, so the score is 0.
pub fn shannon_score(distribution: &BTreeMap<ArgumentId, Rational>) -> f64 {
    let base = shannon_base(distribution);
    if base == 1 {
        return if distribution.len() == 1 { 1.0 } else { 0.0 };
    }
    let ln_base = (base as f64).ln();
    // Summing in sorted order makes the result depend only on the multiset.
    let mut probabilities: Vec<&Rational> = distribution.values().filter(|p| !p.is_zero()).collect();
    probabilities.sort();
    -probabilities
        .into_iter()
        .map(|p| {
            let p = Scalar::to_f64(p);
            p * p.ln() / ln_base
        })
        .sum::<f64>()
}

/// 1 when no topic ever reaches the threshold, otherwise [`shannon_score`].
pub fn shannon_fairness<S: Scalar>(matrix: &StrengthMatrix<S>, query: &SlfQuery<S>) -> Result<f64> {
    Ok(exceed_distribution(matrix, query)?.map_or(1.0, |d| shannon_score(&d)))
}
