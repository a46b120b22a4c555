//! QBAG data model: arguments with initial strengths, plus disjoint attack
//! and support relations.

use std::borrow::Borrow;
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Argument name. Non-empty, no whitespace, no commas.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArgumentId(String);

impl ArgumentId {
    pub fn new(id: impl Into<String>) -> Result<Self> {
        let id = id.into();
        if id.is_empty() || id.chars().any(|c| c.is_whitespace() || c == ',') {
            return Err(Error::InvalidArgumentId(id));
        }
        Ok(Self(id))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ArgumentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for ArgumentId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::new(s)
    }
}

impl TryFrom<&str> for ArgumentId {
    type Error = Error;

    fn try_from(s: &str) -> Result<Self> {
        Self::new(s)
    }
}

impl Borrow<str> for ArgumentId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

/// Directed relation pair, `source` acting on `target`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub source: ArgumentId,
    pub target: ArgumentId,
}

impl Edge {
    pub fn new(source: ArgumentId, target: ArgumentId) -> Self {
        Self { source, target }
    }
}

/// Quantitative bipolar argumentation graph.
///
/// Immutable once built. Equality is structural over all four components.
#[derive(Debug, Clone, PartialEq)]
pub struct Qbag<S> {
    initial: BTreeMap<ArgumentId, S>,
    attacks: BTreeSet<Edge>,
    supports: BTreeSet<Edge>,
}

impl<S: Scalar> Default for Qbag<S> {
    fn default() -> Self {
        Self { initial: BTreeMap::new(), attacks: BTreeSet::new(), supports: BTreeSet::new() }
    }
}

impl<S: Scalar> Qbag<S> {
    /// Validates and assembles a QBAG.
    ///
    /// Checks run in a fixed order: duplicate ids, strength range, dangling
    /// endpoints, then attack/support overlap. Repeated pairs within one
    /// relation collapse. Cycles (including self-loops) are allowed here and
    /// rejected by evaluation.
    pub fn build(
        arguments: impl IntoIterator<Item = (ArgumentId, S)>,
        attacks: impl IntoIterator<Item = (ArgumentId, ArgumentId)>,
        supports: impl IntoIterator<Item = (ArgumentId, ArgumentId)>,
    ) -> Result<Self> {
        let mut initial = BTreeMap::new();
        for (id, strength) in arguments {
            if !strength.in_unit_interval() {
                return Err(Error::StrengthOutOfRange {
                    what: format!("argument {id}"),
                    value: strength.to_string(),
                });
            }
            if initial.insert(id.clone(), strength).is_some() {
                return Err(Error::DuplicateArgument(id));
            }
        }
        let collect = |pairs: Vec<(ArgumentId, ArgumentId)>| -> Result<BTreeSet<Edge>> {
            pairs
                .into_iter()
                .map(|(source, target)| {
                    if initial.contains_key(&source) && initial.contains_key(&target) {
                        Ok(Edge::new(source, target))
                    } else {
                        Err(Error::DanglingEndpoint { from: source, to: target })
                    }
                })
                .collect()
        };
        let attacks = collect(attacks.into_iter().collect())?;
        let supports = collect(supports.into_iter().collect())?;
        if let Some(edge) = attacks.intersection(&supports).next() {
            return Err(Error::RelationOverlap {
                from: edge.source.clone(),
                to: edge.target.clone(),
            });
        }
        Ok(Self { initial, attacks, supports })
    }

    pub fn builder() -> QbagBuilder<S> {
        QbagBuilder::default()
    }

    pub fn len(&self) -> usize {
        self.initial.len()
    }

    pub fn is_empty(&self) -> bool {
        self.initial.is_empty()
    }

    /// Arguments in ascending id order.
    pub fn arguments(&self) -> impl Iterator<Item = &ArgumentId> + '_ {
        self.initial.keys()
    }

    pub fn argument_set(&self) -> BTreeSet<ArgumentId> {
        self.initial.keys().cloned().collect()
    }

    pub fn contains(&self, id: &str) -> bool {
        self.initial.contains_key(id)
    }

    pub fn initial_strength(&self, id: &str) -> Option<&S> {
        self.initial.get(id)
    }

    pub fn initial_strengths(&self) -> &BTreeMap<ArgumentId, S> {
        &self.initial
    }

    pub fn attacks(&self) -> &BTreeSet<Edge> {
        &self.attacks
    }

    pub fn supports(&self) -> &BTreeSet<Edge> {
        &self.supports
    }

    /// All relation pairs, attacks first.
    pub fn edges(&self) -> impl Iterator<Item = &Edge> + '_ {
        self.attacks.iter().chain(self.supports.iter())
    }

    fn check_known(&self, id: &str) -> Result<()> {
        if self.contains(id) {
            Ok(())
        } else {
            Err(Error::UnknownArgument(ArgumentId(id.to_owned())))
        }
    }

    pub fn attackers(&self, x: &str) -> Result<BTreeSet<ArgumentId>> {
        self.check_known(x)?;
        Ok(incoming(&self.attacks, x))
    }

    pub fn supporters(&self, x: &str) -> Result<BTreeSet<ArgumentId>> {
        self.check_known(x)?;
        Ok(incoming(&self.supports, x))
    }

    fn successor_map(&self) -> BTreeMap<&ArgumentId, Vec<&ArgumentId>> {
        let mut out: BTreeMap<&ArgumentId, Vec<&ArgumentId>> =
            self.initial.keys().map(|id| (id, Vec::new())).collect();
        for edge in self.edges() {
            out.entry(&edge.source).or_default().push(&edge.target);
        }
        out
    }

    /// True iff a path of length at least one leads from `x` to `y` through
    /// attacks and supports.
    pub fn reaches(&self, x: &str, y: &str) -> Result<bool> {
        self.check_known(x)?;
        self.check_known(y)?;
        let successors = self.successor_map();
        let mut seen = BTreeSet::new();
        let mut queue: VecDeque<&ArgumentId> = successors[&ArgumentId(x.to_owned())].iter().copied().collect();
        while let Some(node) = queue.pop_front() {
            if node.as_str() == y {
                return Ok(true);
            }
            if seen.insert(node) {
                queue.extend(successors[node].iter().copied());
            }
        }
        Ok(false)
    }

    /// Every argument reachable from some member of `from` (paths of length ≥ 1).
    pub fn reachable_from<'a>(
        &'a self,
        from: impl IntoIterator<Item = &'a ArgumentId>,
    ) -> BTreeSet<&'a ArgumentId> {
        let successors = self.successor_map();
        let mut seen = BTreeSet::new();
        let mut stack: Vec<&ArgumentId> = from
            .into_iter()
            .filter_map(|id| successors.get(id))
            .flatten()
            .copied()
            .collect();
        while let Some(node) = stack.pop() {
            if seen.insert(node) {
                stack.extend(successors[node].iter().copied());
            }
        }
        seen
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_ok()
    }

    /// Kahn's algorithm; among ready arguments the smallest id goes first.
    pub fn topological_order(&self) -> Result<Vec<ArgumentId>> {
        let successors = self.successor_map();
        let mut indegree: BTreeMap<&ArgumentId, usize> =
            self.initial.keys().map(|id| (id, 0)).collect();
        for edge in self.edges() {
            *indegree.get_mut(&edge.target).expect("validated endpoint") += 1;
        }
        let mut ready: BTreeSet<&ArgumentId> =
            indegree.iter().filter(|(_, d)| **d == 0).map(|(id, _)| *id).collect();
        let mut order = Vec::with_capacity(self.len());
        while let Some(next) = ready.pop_first() {
            order.push(next.clone());
            for target in &successors[next] {
                let d = indegree.get_mut(target).expect("validated endpoint");
                *d -= 1;
                if *d == 0 {
                    ready.insert(target);
                }
            }
        }
        if order.len() == self.len() {
            Ok(order)
        } else {
            Err(Error::CyclicGraph)
        }
    }

    /// Restriction to `keep`: those arguments, their strengths, and the
    /// relation pairs with both ends inside `keep`.
    pub fn restrict<'a>(&self, keep: impl IntoIterator<Item = &'a ArgumentId>) -> Result<Self> {
        let keep: BTreeSet<&ArgumentId> = keep.into_iter().collect();
        if let Some(missing) = keep.iter().find(|id| !self.contains(id.as_str())) {
            return Err(Error::UnknownArgument((*missing).clone()));
        }
        let inside = |e: &&Edge| keep.contains(&e.source) && keep.contains(&e.target);
        Ok(Self {
            initial: self
                .initial
                .iter()
                .filter(|(id, _)| keep.contains(id))
                .map(|(id, s)| (id.clone(), s.clone()))
                .collect(),
            attacks: self.attacks.iter().filter(inside).cloned().collect(),
            supports: self.supports.iter().filter(inside).cloned().collect(),
        })
    }

    /// Containment: every argument, attack and support of `self` is in
    /// `larger`, with the same initial strengths.
    pub fn is_sub_qbag_of(&self, larger: &Self) -> bool {
        self.initial.iter().all(|(id, s)| larger.initial.get(id) == Some(s))
            && self.attacks.is_subset(&larger.attacks)
            && self.supports.is_subset(&larger.supports)
    }

    /// Containment that is not equality.
    pub fn is_strict_sub_qbag_of(&self, larger: &Self) -> bool {
        self.is_sub_qbag_of(larger) && self != larger
    }

    /// Copy with one initial strength replaced.
    pub fn with_initial_strength(&self, id: &str, strength: S) -> Result<Self> {
        self.check_known(id)?;
        if !strength.in_unit_interval() {
            return Err(Error::StrengthOutOfRange {
                what: format!("argument {id}"),
                value: strength.to_string(),
            });
        }
        let mut out = self.clone();
        *out.initial.get_mut(id).expect("checked") = strength;
        Ok(out)
    }

    /// Converts strengths to another backend. `convert` must map [0, 1] into
    /// [0, 1].
    pub fn map_strengths<T: Scalar>(&self, mut convert: impl FnMut(&S) -> T) -> Qbag<T> {
        Qbag {
            initial: self.initial.iter().map(|(id, s)| (id.clone(), convert(s))).collect(),
            attacks: self.attacks.clone(),
            supports: self.supports.clone(),
        }
    }
}

fn incoming(relation: &BTreeSet<Edge>, x: &str) -> BTreeSet<ArgumentId> {
    relation.iter().filter(|e| e.target.as_str() == x).map(|e| e.source.clone()).collect()
}

/// Collects string ids and pairs; every check happens in [`QbagBuilder::build`].
#[derive(Debug, Clone)]
pub struct QbagBuilder<S> {
    arguments: Vec<(String, S)>,
    attacks: Vec<(String, String)>,
    supports: Vec<(String, String)>,
}

impl<S> Default for QbagBuilder<S> {
    fn default() -> Self {
        Self { arguments: Vec::new(), attacks: Vec::new(), supports: Vec::new() }
    }
}

impl<S: Scalar> QbagBuilder<S> {
    pub fn argument(mut self, id: impl Into<String>, initial: S) -> Self {
        self.arguments.push((id.into(), initial));
        self
    }

    pub fn attack(mut self, source: impl Into<String>, target: impl Into<String>) -> Self {
        self.attacks.push((source.into(), target.into()));
        self
    }

    pub fn support(mut self, source: impl Into<String>, target: impl Into<String>) -> Self {
        self.supports.push((source.into(), target.into()));
        self
    }

    pub fn build(self) -> Result<Qbag<S>> {
        let pairs = |v: Vec<(String, String)>| -> Result<Vec<(ArgumentId, ArgumentId)>> {
            v.into_iter().map(|(s, t)| Ok((ArgumentId::new(s)?, ArgumentId::new(t)?))).collect()
        };
        let arguments = self
            .arguments
            .into_iter()
            .map(|(id, s)| Ok((ArgumentId::new(id)?, s)))
            .collect::<Result<Vec<_>>>()?;
        Qbag::build(arguments, pairs(self.attacks)?, pairs(self.supports)?)
    }
}
