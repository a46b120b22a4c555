//! Gini-style fairness: area between the fairness line and the safety
//! (Lorenz) curve of per-topic exceed counts.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::{exceed_counts, SlfQuery};
use crate::chain::StrengthMatrix;
use crate::error::Result;
use crate::graph::ArgumentId;
use crate::scalar::{Rational, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CurvePoint {
    pub x: u64,
    pub y: u64,
}

/// Topics sorted by ascending exceed count (ties by id) and the cumulative
/// breakpoints `(0, 0), (1, c1), …, (|T|, ΣS)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SafetyCurve {
    pub ordering: Vec<(ArgumentId, u64)>,
    pub points: Vec<CurvePoint>,
}

impl SafetyCurve {
    pub fn counts(&self) -> Vec<u64> {
        self.ordering.iter().map(|(_, s)| *s).collect()
    }
}

/// Straight line from the origin to `end`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FairnessLine {
    pub slope: Rational,
    pub end: CurvePoint,
}

impl FairnessLine {
    pub fn start(&self) -> CurvePoint {
        CurvePoint { x: 0, y: 0 }
    }

    pub fn value_at(&self, x: &Rational) -> Rational {
        &self.slope * x
    }
}

fn int(v: u64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Cumulative breakpoints of `counts` taken in the given order.
pub fn lorenz_points(counts: &[u64]) -> Vec<CurvePoint> {
    let mut total = 0;
    std::iter::once(CurvePoint { x: 0, y: 0 })
        .chain(counts.iter().enumerate().map(|(i, s)| {
            total += s;
            CurvePoint { x: i as u64 + 1, y: total }
        }))
        .collect()
}

pub fn safety_curve<S: Scalar>(matrix: &StrengthMatrix<S>, query: &SlfQuery<S>) -> Result<SafetyCurve> {
    let mut ordering: Vec<(ArgumentId, u64)> = exceed_counts(matrix, query)?.into_iter().collect();
    // The map is already id-ordered, so a stable sort keeps ties lexicographic.
    ordering.sort_by_key(|(_, s)| *s);
    let counts: Vec<u64> = ordering.iter().map(|(_, s)| *s).collect();
    Ok(SafetyCurve { points: lorenz_points(&counts), ordering })
}

fn line_for(counts: &[u64]) -> FairnessLine {
    let n = counts.len() as u64;
    let total: u64 = counts.iter().sum();
    FairnessLine {
        slope: if n == 0 { Rational::zero() } else { int(total) / int(n) },
        end: CurvePoint { x: n, y: total },
    }
}

pub fn fairness_line<S: Scalar>(matrix: &StrengthMatrix<S>, query: &SlfQuery<S>) -> Result<FairnessLine> {
    let counts: Vec<u64> = exceed_counts(matrix, query)?.into_values().collect();
    Ok(line_for(&counts))
}

/// Exact area between the fairness line and the safety curve of `counts`
/// over `[0, |T|]`. Order of `counts` does not matter.
///
/// Both curves are linear on every unit interval, so each piece integrates
/// in closed form. A piece whose gap changes sign is split at the crossing.
pub fn gap_area(counts: &[u64]) -> Rational {
    let mut sorted = counts.to_vec();
    sorted.sort_unstable();
    let line = line_for(&sorted);
    let gaps: Vec<Rational> = lorenz_points(&sorted)
        .iter()
        .map(|p| line.value_at(&int(p.x)) - int(p.y))
        .collect();
    let two = int(2);
    gaps.windows(2)
        .map(|w| {
            let (d0, d1) = (&w[0], &w[1]);
            if (d0.is_negative() && d1.is_positive()) || (d0.is_positive() && d1.is_negative()) {
                // Two triangles meeting at the root: (d0² + d1²) / (2(|d0| + |d1|)).
                (d0 * d0 + d1 * d1) / (&two * (d0.abs() + d1.abs()))
            } else {
                (d0.abs() + d1.abs()) / &two
            }
        })
        .fold(Rational::zero(), |acc, piece| acc + piece)
}

pub fn gini_unnormalized<S: Scalar>(matrix: &StrengthMatrix<S>, query: &SlfQuery<S>) -> Result<Rational> {
    let counts: Vec<u64> = exceed_counts(matrix, query)?.into_values().collect();
    Ok(gap_area(&counts))
}

/// Sigmoid normalisation `2 / (1 + e^(−area)) − 1`. Zero exactly when the
/// area is zero.
pub fn gini_score(area: &Rational) -> f64 {
    if area.is_zero() {
        return 0.0;
    }
    let a = Scalar::to_f64(area);
    // Same value as 2/(1+e^-a) - 1, without cancellation for small areas.
    -(-a).exp_m1() / (1.0 + (-a).exp())
}

pub fn gini_fairness<S: Scalar>(matrix: &StrengthMatrix<S>, query: &SlfQuery<S>) -> Result<f64> {
    Ok(gini_score(&gini_unnormalized(matrix, query)?))
}
