//! Random instance generators and brute-force oracles shared by the test
//! suites. Nothing here calls into the code paths it is used to check:
//! the oracles re-derive their answers from the raw QBAG data.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::{One, Zero};
use qbag_core::{ArgumentId, Chain, Qbag, Rational, Scalar, TopicSet};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn id(name: &str) -> ArgumentId {
    ArgumentId::new(name).expect("valid test id")
}

pub fn ratio(num: i64, den: i64) -> Rational {
    BigRational::new(num.into(), den.into())
}

pub fn exact(text: &str) -> Rational {
    Rational::from_decimal_str(text).expect("decimal literal")
}

/// Multiple of 1/20 in [0, 1].
pub fn random_strength(rng: &mut TestRng) -> Rational {
    ratio(rng.gen_range(0..=20), 20)
}

pub fn random_threshold(rng: &mut TestRng) -> Rational {
    random_strength(rng)
}

fn names(count: usize) -> Vec<ArgumentId> {
    (0..count).map(|i| id(&format!("x{i}"))).collect()
}

/// Random acyclic QBAG over `args`. Edges follow a random permutation so
/// the graph is acyclic; each forward pair is an attack, a support or
/// absent.
pub fn random_acyclic_over(rng: &mut TestRng, args: &[ArgumentId], density: f64) -> Qbag<Rational> {
    let mut order = args.to_vec();
    order.shuffle(rng);
    let mut attacks = Vec::new();
    let mut supports = Vec::new();
    for i in 0..order.len() {
        for j in i + 1..order.len() {
            if rng.gen_bool(density) {
                let pair = (order[i].clone(), order[j].clone());
                if rng.gen_bool(0.5) {
                    attacks.push(pair);
                } else {
                    supports.push(pair);
                }
            }
        }
    }
    let strengths = args.iter().map(|a| (a.clone(), random_strength(rng))).collect::<Vec<_>>();
    Qbag::build(strengths, attacks, supports).expect("generated QBAG is valid")
}

pub fn random_acyclic(rng: &mut TestRng, max_args: usize) -> Qbag<Rational> {
    let n = rng.gen_range(1..=max_args);
    let density = rng.gen_range(0.1..0.7);
    random_acyclic_over(rng, &names(n), density)
}

/// Steps share a random core of arguments; each step is an independent
/// random acyclic QBAG over the core plus optional extras.
pub fn random_general_chain(rng: &mut TestRng, max_args: usize, max_steps: usize) -> Chain<Rational> {
    let pool = names(max_args);
    let core = rng.gen_range(1..=max_args);
    let steps = rng.gen_range(1..=max_steps);
    let density = rng.gen_range(0.1..0.7);
    let graphs = (0..steps)
        .map(|_| {
            let mut args: Vec<ArgumentId> = pool[..core].to_vec();
            args.extend(pool[core..].iter().filter(|_| rng.gen_bool(0.5)).cloned());
            random_acyclic_over(rng, &args, density)
        })
        .collect();
    Chain::new(graphs).expect("non-empty")
}

/// Expansion chain whose additions never reach earlier arguments: new
/// arguments only receive edges from old ones or send edges to newer ones.
pub fn random_weak_expansion_chain(
    rng: &mut TestRng,
    max_args: usize,
    max_steps: usize,
) -> Chain<Rational> {
    let pool = names(max_args);
    let start = rng.gen_range(1..=max_args);
    let density = rng.gen_range(0.1..0.7);
    let mut current = random_acyclic_over(rng, &pool[..start], density);
    let mut steps = vec![current.clone()];
    let mut next_new = start;
    for _ in 1..rng.gen_range(1..=max_steps) {
        if next_new >= pool.len() {
            break;
        }
        let added = rng.gen_range(1..=(pool.len() - next_new).min(2));
        let new_ids = &pool[next_new..next_new + added];
        next_new += added;

        let mut strengths: Vec<(ArgumentId, Rational)> =
            current.initial_strengths().iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        let mut attacks: Vec<(ArgumentId, ArgumentId)> =
            current.attacks().iter().map(|e| (e.source.clone(), e.target.clone())).collect();
        let mut supports: Vec<(ArgumentId, ArgumentId)> =
            current.supports().iter().map(|e| (e.source.clone(), e.target.clone())).collect();
        let old: Vec<ArgumentId> = current.arguments().cloned().collect();
        for (k, new) in new_ids.iter().enumerate() {
            strengths.push((new.clone(), random_strength(rng)));
            let sources = old.iter().chain(new_ids[..k].iter());
            for source in sources {
                if rng.gen_bool(0.4) {
                    let pair = (source.clone(), new.clone());
                    if rng.gen_bool(0.5) {
                        attacks.push(pair);
                    } else {
                        supports.push(pair);
                    }
                }
            }
        }
        current = Qbag::build(strengths, attacks, supports).expect("valid expansion");
        steps.push(current.clone());
    }
    Chain::new(steps).expect("non-empty")
}

/// Random non-empty subset of the chain's common arguments, if any exist.
pub fn random_topics(rng: &mut TestRng, chain: &Chain<Rational>) -> Option<TopicSet> {
    let common: Vec<ArgumentId> = chain.common_arguments().into_iter().collect();
    if common.is_empty() {
        return None;
    }
    let mut picked: Vec<ArgumentId> = common.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
    if picked.is_empty() {
        picked.push(common.choose(rng).expect("non-empty").clone());
    }
    Some(TopicSet::new(picked).expect("non-empty"))
}

/// DFQuAD by memoised recursion over attackers and supporters, written from
/// the defining formulas without reusing library evaluation code.
pub fn dfquad_oracle<S: Scalar>(graph: &Qbag<S>) -> BTreeMap<ArgumentId, S> {
    fn strength<S: Scalar>(
        graph: &Qbag<S>,
        x: &ArgumentId,
        memo: &mut BTreeMap<ArgumentId, S>,
    ) -> S {
        if let Some(v) = memo.get(x) {
            return v.clone();
        }
        let mut attack_product = S::one();
        let mut support_product = S::one();
        for edge in graph.attacks().iter().filter(|e| &e.target == x) {
            attack_product = attack_product * (S::one() - strength(graph, &edge.source, memo));
        }
        for edge in graph.supports().iter().filter(|e| &e.target == x) {
            support_product = support_product * (S::one() - strength(graph, &edge.source, memo));
        }
        let tau = graph.initial_strength(x.as_str()).expect("member").clone();
        let aggregate = attack_product - support_product;
        let value = if aggregate < S::zero() {
            tau.clone() + tau * aggregate
        } else {
            tau.clone() + (S::one() - tau) * aggregate
        };
        memo.insert(x.clone(), value.clone());
        value
    }
    let mut memo = BTreeMap::new();
    for x in graph.arguments() {
        strength(graph, x, &mut memo);
    }
    memo
}

/// All pairs `(x, y)` joined by a path of length ≥ 1 (Warshall).
pub fn transitive_closure<S: Scalar>(graph: &Qbag<S>) -> BTreeSet<(ArgumentId, ArgumentId)> {
    let ids: Vec<ArgumentId> = graph.arguments().cloned().collect();
    let n = ids.len();
    let index: BTreeMap<&ArgumentId, usize> = ids.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let mut reach = vec![vec![false; n]; n];
    for e in graph.attacks().iter().chain(graph.supports()) {
        reach[index[&e.source]][index[&e.target]] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if reach[i][k] && reach[k][j] {
                    reach[i][j] = true;
                }
            }
        }
    }
    let mut out = BTreeSet::new();
    for i in 0..n {
        for j in 0..n {
            if reach[i][j] {
                out.insert((ids[i].clone(), ids[j].clone()));
            }
        }
    }
    out
}

/// Largest k such that some subsequence of `values` of length k + 1
/// alternates between "< t" and "≥ t". Exhaustive over all subsequences.
pub fn alternating_subsequence_oracle<S: Scalar>(values: &[S], threshold: &S) -> usize {
    let n = values.len();
    assert!(n <= 20, "exhaustive oracle");
    let mut best = 0;
    for mask in 1u32..(1 << n) {
        let picked: Vec<bool> =
            (0..n).filter(|i| mask & (1 << i) != 0).map(|i| values[i] >= *threshold).collect();
        if picked.windows(2).all(|w| w[0] != w[1]) {
            best = best.max(picked.len() - 1);
        }
    }
    best
}

/// Area between the fairness line and the ascending cumulative curve of
/// `counts`, by the composite trapezoid rule on `samples` intervals.
pub fn trapezoid_gap_area(counts: &[u64], samples: usize) -> f64 {
    let mut sorted = counts.to_vec();
    sorted.sort_unstable();
    let n = sorted.len() as f64;
    let total: f64 = sorted.iter().sum::<u64>() as f64;
    let mut cumulative = vec![0.0];
    for s in &sorted {
        cumulative.push(cumulative.last().unwrap() + *s as f64);
    }
    let curve = |x: f64| {
        let k = (x.floor() as usize).min(sorted.len().saturating_sub(1));
        cumulative[k] + (x - k as f64) * sorted.get(k).copied().unwrap_or(0) as f64
    };
    let gap = |x: f64| (total / n * x - curve(x)).abs();
    let h = n / samples as f64;
    let mut sum = 0.5 * (gap(0.0) + gap(n));
    for i in 1..samples {
        sum += gap(i as f64 * h);
    }
    sum * h
}

pub fn is_zero(r: &Rational) -> bool {
    r.is_zero()
}

pub fn is_one(r: &Rational) -> bool {
    r.is_one()
}
