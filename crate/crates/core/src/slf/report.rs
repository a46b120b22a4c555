use std::collections::BTreeMap;

use serde::{Serialize, Serializer};

use super::gini::{gap_area, gini_score, CurvePoint};
use super::shannon::{distribution_from_counts, shannon_base, shannon_score};
use super::{exceed_counts, safety_curve, SlfQuery};
use crate::chain::StrengthMatrix;
use crate::error::Result;
use crate::graph::ArgumentId;
use crate::scalar::{Rational, Scalar};

/// Everything behind the gradual fairness scores of one query.
///
/// Serializes with a fixed key order; rationals are written as `"n/d"`
/// strings (integers without the denominator).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FairnessReport {
    pub exceed_counts: BTreeMap<ArgumentId, u64>,
    pub ordering: Vec<ArgumentId>,
    pub curve_points: Vec<CurvePoint>,
    #[serde(serialize_with = "rational_text")]
    pub line_slope: Rational,
    #[serde(serialize_with = "rational_text")]
    pub gini_area: Rational,
    pub gini_score: f64,
    #[serde(serialize_with = "distribution_text")]
    pub p: Option<BTreeMap<ArgumentId, Rational>>,
    pub base_b: Option<u64>,
    pub shannon_score: f64,
}

impl FairnessReport {
    /// Fairness-line height at each integer breakpoint.
    pub fn line_values(&self) -> Vec<Rational> {
        self.curve_points
            .iter()
            .map(|p| &self.line_slope * Rational::from_integer(p.x.into()))
            .collect()
    }
}

impl Serialize for ArgumentId {
    fn serialize<Z: Serializer>(&self, serializer: Z) -> Result<Z::Ok, Z::Error> {
        serializer.serialize_str(self.as_str())
    }
}

fn rational_text<Z: Serializer>(value: &Rational, serializer: Z) -> Result<Z::Ok, Z::Error> {
    serializer.collect_str(value)
}

fn distribution_text<Z: Serializer>(
    value: &Option<BTreeMap<ArgumentId, Rational>>,
    serializer: Z,
) -> Result<Z::Ok, Z::Error> {
    match value {
        None => serializer.serialize_none(),
        Some(map) => serializer.collect_map(map.iter().map(|(k, v)| (k.as_str(), v.to_string()))),
    }
}

pub fn fairness_report<S: Scalar>(
    matrix: &StrengthMatrix<S>,
    query: &SlfQuery<S>,
) -> Result<FairnessReport> {
    let exceed_counts = exceed_counts(matrix, query)?;
    let curve = safety_curve(matrix, query)?;
    let counts = curve.counts();
    let total: u64 = counts.iter().sum();
    let gini_area = gap_area(&counts);
    let p = distribution_from_counts(&exceed_counts);
    Ok(FairnessReport {
        ordering: curve.ordering.iter().map(|(x, _)| x.clone()).collect(),
        curve_points: curve.points,
        line_slope: Rational::new(total.into(), (counts.len() as u64).into()),
        gini_score: gini_score(&gini_area),
        gini_area,
        base_b: p.as_ref().map(shannon_base),
        shannon_score: p.as_ref().map_or(1.0, shannon_score),
        p,
        exceed_counts,
    })
}

#[cfg(test)]
mod tests {
    use super::super::tests::{query, running_matrix};
    use super::*;

    #[test]
    fn running_example_report() {
        let r = fairness_report(&running_matrix(), &query("a,b,c", "0.2")).unwrap();
        assert_eq!(r.exceed_counts.values().copied().collect::<Vec<_>>(), vec![2, 2, 3]);
        assert_eq!(r.curve_points.last(), Some(&CurvePoint { x: 3, y: 7 }));
        assert_eq!(r.line_slope, Rational::new(7.into(), 3.into()));
        assert_eq!(r.gini_area, Rational::from_integer(1.into()));
        assert_eq!(r.base_b, Some(7));
        assert!((r.gini_score - 0.46212).abs() < 1e-5);
        assert!((r.shannon_score - 0.55449).abs() < 1e-5);
        assert_eq!(r.line_values()[1], Rational::new(7.into(), 3.into()));

        let json = serde_json::to_string(&r).unwrap();
        assert!(json.starts_with(r#"{"exceed_counts":{"a":2,"b":2,"c":3},"ordering":["a","b","c"]"#));
        assert!(json.contains(r#""line_slope":"7/3","gini_area":"1""#));
        assert!(json.contains(r#""p":{"a":"2/7","b":"2/7","c":"3/7"},"base_b":7"#));
    }

    #[test]
    fn undefined_distribution_report() {
        let r = fairness_report(&running_matrix(), &query("a,b", "0.99")).unwrap();
        assert_eq!(r.p, None);
        assert_eq!(r.base_b, None);
        assert_eq!(r.shannon_score, 1.0);
        assert_eq!(r.gini_score, 0.0);
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains(r#""p":null,"base_b":null"#));
    }
}
