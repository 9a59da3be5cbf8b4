//! Builds domain objects from a resolved scenario.

use std::collections::{BTreeMap, BTreeSet};

use super::ast::{MapDecl, Scenario, Target};
use crate::context::{ConstraintPresheaf, MeaningSet};
use crate::order::Poset;
use crate::Result;

/// Meanings in declaration order.
pub fn universe(s: &Scenario) -> Vec<String> {
    s.universe.iter().map(|m| m.node.clone()).collect()
}

pub fn sentences(s: &Scenario) -> Vec<String> {
    s.sentences.iter().map(|m| m.node.clone()).collect()
}

/// The context order, or `None` when the scenario declares no contexts.
pub fn context_poset(s: &Scenario) -> Option<Result<Poset>> {
    if s.contexts.is_empty() {
        return None;
    }
    let mut elements: Vec<String> = Vec::new();
    let mut pairs = Vec::new();
    for chain in &s.contexts {
        for c in chain {
            if !elements.contains(&c.node) {
                elements.push(c.node.clone());
            }
        }
        for w in chain.windows(2) {
            pairs.push((w[0].node.clone(), w[1].node.clone()));
        }
    }
    Some(Poset::new(elements, pairs))
}

/// Whether the declared contexts form a single chain, listed bottom to top.
pub fn context_chain(poset: &Poset) -> Option<Vec<String>> {
    let mut chain: Vec<String> = poset.elements().to_vec();
    chain.sort_by_key(|x| poset.elements().iter().filter(|y| poset.leq(y, x)).count());
    chain.windows(2).all(|w| poset.leq(&w[0], &w[1])).then_some(chain)
}

/// Contexts without an `admissible` line admit the whole universe.
pub fn presheaf(s: &Scenario) -> Option<Result<ConstraintPresheaf>> {
    let poset = match context_poset(s)? {
        Ok(p) => p,
        Err(e) => return Some(Err(e)),
    };
    let declared: BTreeMap<&str, MeaningSet> = s
        .admissible
        .iter()
        .map(|a| (a.context.as_str(), a.meanings.iter().map(|m| m.node.clone()).collect()))
        .collect();
    let all: MeaningSet = universe(s).into_iter().collect();
    let admissible: Vec<(String, MeaningSet)> = poset
        .elements()
        .iter()
        .map(|c| (c.clone(), declared.get(c.as_str()).cloned().unwrap_or_else(|| all.clone())))
        .collect();
    Some(ConstraintPresheaf::new(poset, all.clone(), admissible))
}

fn decl<'a>(decls: &'a [MapDecl], name: &str) -> Option<&'a MapDecl> {
    decls.iter().find(|d| d.name.node == name)
}

/// A filter as a partial map; `None` values are drops.
pub fn filter(s: &Scenario, name: &str) -> Option<BTreeMap<String, Option<String>>> {
    decl(&s.filters, name).map(|d| {
        d.entries
            .iter()
            .map(|e| {
                let to = match &e.to {
                    Target::To(t) => Some(t.node.clone()),
                    Target::Drop(_) => None,
                };
                (e.from.node.clone(), to)
            })
            .collect()
    })
}

fn total(d: &MapDecl) -> BTreeMap<String, String> {
    d.entries
        .iter()
        .filter_map(|e| match &e.to {
            Target::To(t) => Some((e.from.node.clone(), t.node.clone())),
            Target::Drop(_) => None,
        })
        .collect()
}

/// A `map` block; meanings it omits are fixed.
pub fn map(s: &Scenario, name: &str) -> Option<BTreeMap<String, String>> {
    decl(&s.maps, name).map(|d| {
        let mut m = total(d);
        for u in universe(s) {
            m.entry(u.clone()).or_insert(u);
        }
        m
    })
}

pub fn interpretation(s: &Scenario, name: &str) -> Option<BTreeMap<String, String>> {
    decl(&s.interpretations, name).map(total)
}

/// Equivalence pairs between meanings.
pub fn meaning_pairs(s: &Scenario) -> Vec<(String, String)> {
    let u: BTreeSet<&str> = s.universe.iter().map(|m| m.as_str()).collect();
    s.equivs
        .iter()
        .filter(|p| u.contains(p.left.as_str()))
        .map(|p| (p.left.node.clone(), p.right.node.clone()))
        .collect()
}

/// Equivalence pairs between sentences.
pub fn sentence_pairs(s: &Scenario) -> Vec<(String, String)> {
    let u: BTreeSet<&str> = s.sentences.iter().map(|m| m.as_str()).collect();
    s.equivs
        .iter()
        .filter(|p| u.contains(p.left.as_str()))
        .map(|p| (p.left.node.clone(), p.right.node.clone()))
        .collect()
}

pub fn proposition(s: &Scenario, name: &str) -> Option<MeaningSet> {
    s.props.iter().find(|p| p.name.node == name).map(|p| p.meanings.iter().map(|m| m.node.clone()).collect())
}
