//! Modular gradual semantics and the DFQuAD instance.
//!
//! A modular semantics computes each final strength in two steps. First it
//! aggregates the final strengths of the argument's attackers and
//! supporters. Then an influence function combines that aggregate with the
//! argument's initial strength. Over an acyclic QBAG one pass in
//! topological order suffices.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{ArgumentId, Qbag};
use crate::scalar::Scalar;

pub trait ModularSemantics<S: Scalar> {
    fn name(&self) -> &'static str;

    /// Combines neighbour strengths. Slices are ordered by ascending
    /// neighbour id.
    fn aggregate(&self, attackers: &[S], supporters: &[S]) -> S;

    /// New strength from the initial strength and the aggregate. Must stay
    /// in [0, 1].
    fn influence(&self, base: &S, aggregate: &S) -> S;
}

/// DFQuAD aggregation: `∏(1 − a) − ∏(1 − s)` over attacker and supporter
/// strengths. Positive values mean net support.
pub fn dfquad_aggregation<S: Scalar>(attackers: &[S], supporters: &[S]) -> S {
    let complement_product =
        |values: &[S]| values.iter().fold(S::one(), |acc, v| acc * (S::one() - v.clone()));
    complement_product(attackers) - complement_product(supporters)
}

/// DFQuAD influence: pull `base` towards 0 by the negative part of the
/// aggregate and towards 1 by its positive part.
pub fn dfquad_influence<S: Scalar>(base: &S, aggregate: &S) -> S {
    let zero = S::zero;
    let weaken = S::max_of(zero(), -aggregate.clone());
    let strengthen = S::max_of(zero(), aggregate.clone());
    let value =
        base.clone() - base.clone() * weaken + (S::one() - base.clone()) * strengthen;
    // Exact backends never hit the clamp; floats can overshoot by an ulp.
    S::min_of(S::max_of(value, zero()), S::one())
}

/// Semantics selectable by name. Only DFQuAD ships.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Semantics {
    #[default]
    Dfquad,
}

impl Semantics {
    pub const NAMES: &'static [&'static str] = &["dfquad"];
}

impl<S: Scalar> ModularSemantics<S> for Semantics {
    fn name(&self) -> &'static str {
        match self {
            Semantics::Dfquad => "dfquad",
        }
    }

    fn aggregate(&self, attackers: &[S], supporters: &[S]) -> S {
        match self {
            Semantics::Dfquad => dfquad_aggregation(attackers, supporters),
        }
    }

    fn influence(&self, base: &S, aggregate: &S) -> S {
        match self {
            Semantics::Dfquad => dfquad_influence(base, aggregate),
        }
    }
}

impl FromStr for Semantics {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dfquad" => Ok(Semantics::Dfquad),
            other => Err(Error::UnknownSemantics(other.to_owned())),
        }
    }
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(ModularSemantics::<f64>::name(self))
    }
}

/// Final strength of every argument of one QBAG.
#[derive(Debug, Clone, PartialEq)]
pub struct StrengthAssignment<S> {
    values: BTreeMap<ArgumentId, S>,
}

impl<S: Scalar> StrengthAssignment<S> {
    pub fn get(&self, id: &str) -> Option<&S> {
        self.values.get(id)
    }

    pub fn contains(&self, id: &str) -> bool {
        self.values.contains_key(id)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Entries in ascending id order.
    pub fn iter(&self) -> impl Iterator<Item = (&ArgumentId, &S)> + '_ {
        self.values.iter()
    }

    pub fn as_map(&self) -> &BTreeMap<ArgumentId, S> {
        &self.values
    }
}

impl<S> FromIterator<(ArgumentId, S)> for StrengthAssignment<S> {
    fn from_iter<I: IntoIterator<Item = (ArgumentId, S)>>(iter: I) -> Self {
        Self { values: iter.into_iter().collect() }
    }
}

/// Final strengths of an acyclic QBAG. Cyclic inputs are rejected with
/// [`Error::CyclicGraph`]; no fixpoint iteration is attempted.
pub fn evaluate<S: Scalar, M: ModularSemantics<S> + ?Sized>(
    graph: &Qbag<S>,
    semantics: &M,
) -> Result<StrengthAssignment<S>> {
    let order = graph.topological_order()?;

    let mut attackers: BTreeMap<&ArgumentId, Vec<&ArgumentId>> = BTreeMap::new();
    let mut supporters: BTreeMap<&ArgumentId, Vec<&ArgumentId>> = BTreeMap::new();
    // BTreeSet iteration keeps each neighbour list in ascending id order.
    for edge in graph.attacks() {
        attackers.entry(&edge.target).or_default().push(&edge.source);
    }
    for edge in graph.supports() {
        supporters.entry(&edge.target).or_default().push(&edge.source);
    }

    let mut final_strengths: BTreeMap<ArgumentId, S> = BTreeMap::new();
    for id in order {
        let base = graph.initial_strength(id.as_str()).expect("ordered argument");
        let lookup = |ids: Option<&Vec<&ArgumentId>>| -> Vec<S> {
            ids.map(|ids| ids.iter().map(|n| final_strengths[*n].clone()).collect())
                .unwrap_or_default()
        };
        let att = lookup(attackers.get(&id));
        let supp = lookup(supporters.get(&id));
        let value = if att.is_empty() && supp.is_empty() {
            base.clone()
        } else {
            semantics.influence(base, &semantics.aggregate(&att, &supp))
        };
        final_strengths.insert(id, value);
    }
    Ok(StrengthAssignment { values: final_strengths })
}
