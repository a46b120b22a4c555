//! Safety, liveness and fairness of topic arguments along a chain.
//!
//! Every check reads a [`StrengthMatrix`] and an [`SlfQuery`]. Threshold
//! comparisons are exact: a strength equal to the threshold counts as
//! reaching it.

mod gini;
mod report;
mod shannon;

use std::collections::BTreeMap;

pub use gini::{
    fairness_line, gap_area, gini_fairness, gini_score, gini_unnormalized, lorenz_points,
    safety_curve, CurvePoint, FairnessLine, SafetyCurve,
};
pub use report::{fairness_report, FairnessReport};
pub use shannon::{
    distribution_from_counts, exceed_distribution, shannon_base, shannon_fairness,
    shannon_score,
};

use crate::chain::{StrengthMatrix, TopicSet};
use crate::error::{Error, Result};
use crate::graph::ArgumentId;
use crate::scalar::Scalar;

/// Topic set plus threshold of justification.
#[derive(Debug, Clone, PartialEq)]
pub struct SlfQuery<S> {
    topics: TopicSet,
    threshold: S,
}

impl<S: Scalar> SlfQuery<S> {
    pub fn new(topics: TopicSet, threshold: S) -> Result<Self> {
        if !threshold.in_unit_interval() {
            return Err(Error::StrengthOutOfRange {
                what: "threshold".into(),
                value: threshold.to_string(),
            });
        }
        Ok(Self { topics, threshold })
    }

    pub fn topics(&self) -> &TopicSet {
        &self.topics
    }

    pub fn threshold(&self) -> &S {
        &self.threshold
    }

    /// Same threshold, single topic.
    pub fn singleton(&self, x: &ArgumentId) -> Self {
        Self {
            topics: TopicSet::new([x.clone()]).expect("one topic"),
            threshold: self.threshold.clone(),
        }
    }
}

type Trajectories<'m, S> = Vec<(&'m ArgumentId, Vec<&'m S>)>;

/// Per-topic strength sequences; fails on the first topic missing from a row.
fn trajectories<'m, S: Scalar>(
    matrix: &'m StrengthMatrix<S>,
    topics: &'m TopicSet,
) -> Result<Trajectories<'m, S>> {
    topics.iter().map(|x| Ok((x, matrix.trajectory(x.as_str())?))).collect()
}

fn reaches<S: Scalar>(value: &S, threshold: &S) -> bool {
    value >= threshold
}

/// Every topic reaches the threshold at every step.
pub fn is_strongly_safe<S: Scalar>(matrix: &StrengthMatrix<S>, query: &SlfQuery<S>) -> Result<bool> {
    Ok(trajectories(matrix, &query.topics)?
        .iter()
        .all(|(_, seq)| seq.iter().all(|v| reaches(*v, &query.threshold))))
}

/// Every topic reaches the threshold at the last step.
pub fn is_weakly_safe<S: Scalar>(matrix: &StrengthMatrix<S>, query: &SlfQuery<S>) -> Result<bool> {
    Ok(trajectories(matrix, &query.topics)?
        .iter()
        .all(|(_, seq)| reaches(*seq.last().expect("non-empty"), &query.threshold)))
}

fn crossings<S: Scalar>(seq: &[&S], threshold: &S) -> usize {
    seq.windows(2)
        .filter(|w| reaches(w[0], threshold) != reaches(w[1], threshold))
        .count()
}

/// Number of switches between "below the threshold" (strictly) and "at or
/// above it" along the chain.
pub fn fluctuation_count<S: Scalar>(
    matrix: &StrengthMatrix<S>,
    x: &str,
    threshold: &S,
) -> Result<usize> {
    Ok(crossings(&matrix.trajectory(x)?, threshold))
}

/// Fluctuation count of every topic.
pub fn fluctuation_counts<S: Scalar>(
    matrix: &StrengthMatrix<S>,
    query: &SlfQuery<S>,
) -> Result<BTreeMap<ArgumentId, usize>> {
    Ok(trajectories(matrix, &query.topics)?
        .into_iter()
        .map(|(x, seq)| (x.clone(), crossings(&seq, &query.threshold)))
        .collect())
}

/// Every topic fluctuates at least once.
pub fn is_live<S: Scalar>(matrix: &StrengthMatrix<S>, query: &SlfQuery<S>) -> Result<bool> {
    Ok(fluctuation_counts(matrix, query)?.values().all(|&k| k >= 1))
}

fn any_singleton<S: Scalar>(
    matrix: &StrengthMatrix<S>,
    query: &SlfQuery<S>,
    check: fn(&StrengthMatrix<S>, &SlfQuery<S>) -> Result<bool>,
) -> Result<bool> {
    for x in query.topics.iter() {
        if check(matrix, &query.singleton(x))? {
            return Ok(true);
        }
    }
    Ok(false)
}

fn implication<S: Scalar>(
    matrix: &StrengthMatrix<S>,
    query: &SlfQuery<S>,
    premise: fn(&StrengthMatrix<S>, &SlfQuery<S>) -> Result<bool>,
    conclusion: fn(&StrengthMatrix<S>, &SlfQuery<S>) -> Result<bool>,
) -> Result<bool> {
    // Validate every topic up front so vacuous cases still report bad topics.
    trajectories(matrix, &query.topics)?;
    Ok(!any_singleton(matrix, query, premise)? || conclusion(matrix, query)?)
}

/// Some strongly safe topic implies the whole set is strongly safe.
pub fn is_ideally_fair<S: Scalar>(matrix: &StrengthMatrix<S>, query: &SlfQuery<S>) -> Result<bool> {
    implication(matrix, query, is_strongly_safe, is_strongly_safe)
}

/// Some weakly safe topic implies the whole set is weakly safe.
pub fn is_lively_fair<S: Scalar>(matrix: &StrengthMatrix<S>, query: &SlfQuery<S>) -> Result<bool> {
    implication(matrix, query, is_weakly_safe, is_weakly_safe)
}

/// Some strongly safe topic implies the whole set is weakly safe.
pub fn is_cautiously_fair<S: Scalar>(
    matrix: &StrengthMatrix<S>,
    query: &SlfQuery<S>,
) -> Result<bool> {
    implication(matrix, query, is_strongly_safe, is_weakly_safe)
}

/// True if some single topic is strongly safe on its own.
pub fn has_strongly_safe_topic<S: Scalar>(
    matrix: &StrengthMatrix<S>,
    query: &SlfQuery<S>,
) -> Result<bool> {
    trajectories(matrix, &query.topics)?;
    any_singleton(matrix, query, is_strongly_safe)
}

/// Number of steps at which `x` reaches the threshold.
pub fn exceed_count<S: Scalar>(matrix: &StrengthMatrix<S>, x: &str, threshold: &S) -> Result<u64> {
    Ok(matrix.trajectory(x)?.into_iter().filter(|v| reaches(*v, threshold)).count() as u64)
}

pub fn exceed_counts<S: Scalar>(
    matrix: &StrengthMatrix<S>,
    query: &SlfQuery<S>,
) -> Result<BTreeMap<ArgumentId, u64>> {
    Ok(trajectories(matrix, &query.topics)?
        .into_iter()
        .map(|(x, seq)| {
            (x.clone(), seq.into_iter().filter(|v| reaches(*v, &query.threshold)).count() as u64)
        })
        .collect())
}
