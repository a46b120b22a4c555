//! Chains of QBAGs and their evaluation.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{ArgumentId, Qbag};
use crate::scalar::Scalar;
use crate::semantics::{evaluate, ModularSemantics, StrengthAssignment};

/// Non-empty ordered sequence of QBAGs. Steps are arbitrary updates;
/// expansion chains are a classified special case.
#[derive(Debug, Clone, PartialEq)]
pub struct Chain<S> {
    steps: Vec<Qbag<S>>,
}

impl<S: Scalar> Chain<S> {
    pub fn new(steps: Vec<Qbag<S>>) -> Result<Self> {
        if steps.is_empty() {
            return Err(Error::EmptyChain);
        }
        Ok(Self { steps })
    }

    pub fn steps(&self) -> &[Qbag<S>] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn first(&self) -> &Qbag<S> {
        &self.steps[0]
    }

    pub fn last(&self) -> &Qbag<S> {
        self.steps.last().expect("non-empty chain")
    }

    fn adjacent(&self) -> impl Iterator<Item = (&Qbag<S>, &Qbag<S>)> + '_ {
        self.steps.windows(2).map(|w| (&w[0], &w[1]))
    }

    /// Each step is a strict sub-QBAG of its successor. Length-1 chains
    /// qualify vacuously.
    pub fn is_expansion_chain(&self) -> bool {
        self.adjacent().all(|(prev, next)| prev.is_strict_sub_qbag_of(next))
    }

    /// Expansion chain where every new relation pair has at least one newly
    /// added endpoint.
    pub fn is_normal_expansion_chain(&self) -> bool {
        self.is_expansion_chain()
            && self.adjacent().all(|(prev, next)| {
                next.attacks()
                    .difference(prev.attacks())
                    .chain(next.supports().difference(prev.supports()))
                    .filter(|e| !prev.attacks().contains(e) && !prev.supports().contains(e))
                    .all(|e| {
                        !prev.contains(e.source.as_str()) || !prev.contains(e.target.as_str())
                    })
            })
    }

    /// Expansion chain where no newly added argument reaches an old one in
    /// the successor graph.
    pub fn is_weak_expansion_chain(&self) -> bool {
        self.is_expansion_chain()
            && self.adjacent().all(|(prev, next)| {
                let added: Vec<&ArgumentId> =
                    next.arguments().filter(|id| !prev.contains(id.as_str())).collect();
                next.reachable_from(added).iter().all(|id| !prev.contains(id.as_str()))
            })
    }

    /// Arguments present in every step.
    pub fn common_arguments(&self) -> BTreeSet<ArgumentId> {
        let mut common = self.steps[0].argument_set();
        for step in &self.steps[1..] {
            common.retain(|id| step.contains(id.as_str()));
        }
        common
    }

    /// One evaluated row per step. A cyclic step fails with its 1-based
    /// position.
    pub fn evaluate<M: ModularSemantics<S> + ?Sized>(
        &self,
        semantics: &M,
    ) -> Result<StrengthMatrix<S>> {
        let rows = self
            .steps
            .iter()
            .enumerate()
            .map(|(i, step)| {
                evaluate(step, semantics).map_err(|err| match err {
                    Error::CyclicGraph => Error::CyclicStep { step: i + 1 },
                    other => other,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(StrengthMatrix { rows })
    }

    pub fn map_strengths<T: Scalar>(&self, mut convert: impl FnMut(&S) -> T) -> Chain<T> {
        Chain { steps: self.steps.iter().map(|g| g.map_strengths(&mut convert)).collect() }
    }
}

/// Copies of `graph` whose step `i` sets the initial strength of `x` to
/// `values[i]`.
pub fn sweep_chain<S: Scalar>(graph: &Qbag<S>, x: &str, values: &[S]) -> Result<Chain<S>> {
    if !graph.contains(x) {
        return Err(Error::UnknownArgument(ArgumentId::new(x)?));
    }
    let steps = values
        .iter()
        .map(|v| graph.with_initial_strength(x, v.clone()))
        .collect::<Result<Vec<_>>>()?;
    Chain::new(steps)
}

/// `steps` equally spaced values from `from` to `to`, both endpoints
/// included. A single step yields `[from]`.
pub fn linspace<S: Scalar>(from: &S, to: &S, steps: usize) -> Vec<S> {
    match steps {
        0 => Vec::new(),
        1 => vec![from.clone()],
        n => {
            let last = S::from_usize(n - 1).expect("step count fits the scalar");
            (0..n)
                .map(|i| {
                    if i == n - 1 {
                        return to.clone();
                    }
                    let i = S::from_usize(i).expect("step index fits the scalar");
                    from.clone() + (to.clone() - from.clone()) * i / last.clone()
                })
                .collect()
        }
    }
}

/// Final strengths per chain step; row `i` covers exactly the arguments of
/// step `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct StrengthMatrix<S> {
    rows: Vec<StrengthAssignment<S>>,
}

impl<S: Scalar> StrengthMatrix<S> {
    pub fn from_rows(rows: Vec<StrengthAssignment<S>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyChain);
        }
        Ok(Self { rows })
    }

    pub fn rows(&self) -> &[StrengthAssignment<S>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn last_row(&self) -> &StrengthAssignment<S> {
        self.rows.last().expect("non-empty matrix")
    }

    /// Union of all row domains.
    pub fn universe(&self) -> BTreeSet<ArgumentId> {
        self.rows.iter().flat_map(|r| r.iter().map(|(id, _)| id.clone())).collect()
    }

    /// Strength of `x` at every step, or `TopicNotInChain` if some step lacks it.
    pub fn trajectory(&self, x: &str) -> Result<Vec<&S>> {
        self.rows
            .iter()
            .map(|row| row.get(x).ok_or_else(|| Error::TopicNotInChain(x.to_owned())))
            .collect()
    }
}

/// Non-empty set of topic arguments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopicSet {
    topics: BTreeSet<ArgumentId>,
}

impl TopicSet {
    pub fn new(topics: impl IntoIterator<Item = ArgumentId>) -> Result<Self> {
        let topics: BTreeSet<_> = topics.into_iter().collect();
        if topics.is_empty() {
            return Err(Error::EmptyTopics);
        }
        Ok(Self { topics })
    }

    /// Parses a comma-separated list such as `a,b,c`.
    pub fn parse(list: &str) -> Result<Self> {
        let ids = list
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(ArgumentId::new)
            .collect::<Result<Vec<_>>>()?;
        Self::new(ids)
    }

    pub fn iter(&self) -> impl Iterator<Item = &ArgumentId> + '_ {
        self.topics.iter()
    }

    pub fn len(&self) -> usize {
        self.topics.len()
    }

    pub fn is_empty(&self) -> bool {
        self.topics.is_empty()
    }

    pub fn contains(&self, id: &str) -> bool {
        self.topics.contains(id)
    }

    pub fn as_set(&self) -> &BTreeSet<ArgumentId> {
        &self.topics
    }
}
