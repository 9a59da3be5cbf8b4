//! Seeded generators and brute-force oracles shared by the test suites.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use semiostat::context::{ConstraintPresheaf, MeaningSet};
use semiostat::equiv::{make_partition, Partition, QuotientSystem};
use semiostat::order::Poset;
use semiostat::temporal::{Level, LevelMap, TreeEndomorphism, TreeObject};

/// SplitMix64.
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform in `0..n`.
    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }

    /// Uniform in `lo..=hi`.
    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        lo + self.below(hi - lo + 1)
    }

    pub fn chance(&mut self, p: f64) -> bool {
        ((self.next_u64() >> 11) as f64 / (1u64 << 53) as f64) < p
    }

    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.below(items.len())]
    }
}

pub fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// A random order on `n` elements: each pair `i < j` is related with
/// probability `p`, then closed transitively by the constructor.
pub fn random_poset(rng: &mut Rng, n: usize, p: f64) -> Poset {
    let elements = names("c", n);
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.chance(p) {
                pairs.push((elements[i].clone(), elements[j].clone()));
            }
        }
    }
    Poset::new(elements, pairs).expect("acyclic by construction")
}

/// Admissible sets shrinking along the order: each context keeps a random
/// subset of what every context below it admits.
pub fn antitone_presheaf(rng: &mut Rng, poset: &Poset, universe: &[String]) -> ConstraintPresheaf {
    let mut sets: BTreeMap<String, MeaningSet> = BTreeMap::new();
    // Element names are generated in a linear extension of the order.
    for c in poset.elements() {
        let mut allowed: MeaningSet = universe.iter().cloned().collect();
        for b in poset.elements() {
            if b != c && poset.leq(b, c) {
                allowed = allowed.intersection(&sets[b]).cloned().collect();
            }
        }
        let kept = allowed.into_iter().filter(|_| rng.chance(0.75)).collect();
        sets.insert(c.clone(), kept);
    }
    ConstraintPresheaf::new(poset.clone(), universe.to_vec(), sets).expect("valid presheaf")
}

/// Independent antitonicity oracle over all comparable pairs.
pub fn antitone_oracle(poset: &Poset, sets: &BTreeMap<String, MeaningSet>) -> bool {
    poset.elements().iter().all(|c| poset.elements().iter().all(|d| !poset.leq(c, d) || sets[d].is_subset(&sets[c])))
}

pub fn presheaf_sets(p: &ConstraintPresheaf) -> BTreeMap<String, MeaningSet> {
    p.poset.elements().iter().map(|c| (c.clone(), p.admissible(c).unwrap().clone())).collect()
}

/// A tree with non-degenerate restrictions: each is surjective, so every
/// state has a successor, and none is constant, since every level has at
/// least two states.
pub fn random_tree(rng: &mut Rng, depth: usize, max_width: usize) -> TreeObject {
    let mut widths = vec![rng.range(2, max_width.min(3))];
    for _ in 0..depth {
        let prev = *widths.last().unwrap();
        widths.push(rng.range(prev, max_width));
    }
    let levels: Vec<Level> =
        widths.iter().enumerate().map(|(n, w)| names(&format!("l{n}_"), *w).into_iter().collect()).collect();
    let mut restrictions = Vec::new();
    for n in 1..=depth {
        let lower: Vec<String> = levels[n - 1].iter().cloned().collect();
        let upper: Vec<String> = levels[n].iter().cloned().collect();
        let mut r = LevelMap::new();
        // Cover every lower state first, then assign the rest freely.
        let mut order: Vec<usize> = (0..upper.len()).collect();
        for i in (1..order.len()).rev() {
            order.swap(i, rng.below(i + 1));
        }
        for (k, &i) in order.iter().enumerate() {
            let target = if k < lower.len() { lower[k].clone() } else { rng.pick(&lower).clone() };
            r.insert(upper[i].clone(), target);
        }
        restrictions.push(r);
    }
    TreeObject::new(levels, restrictions).expect("total restrictions")
}

/// An endomorphism commuting with every restriction, chosen level by level.
pub fn coherent_endomorphism(rng: &mut Rng, tree: &TreeObject) -> TreeEndomorphism {
    let mut components: Vec<LevelMap> = Vec::new();
    for (n, level) in tree.levels.iter().enumerate() {
        let states: Vec<String> = level.iter().cloned().collect();
        let mut l = LevelMap::new();
        for x in &states {
            let y = if n == 0 {
                rng.pick(&states).clone()
            } else {
                let want = &components[n - 1][&tree.restrictions[n - 1][x]];
                let fibre: Vec<String> =
                    states.iter().filter(|z| &tree.restrictions[n - 1][*z] == want).cloned().collect();
                rng.pick(&fibre).clone()
            };
            l.insert(x.clone(), y);
        }
        components.push(l);
    }
    TreeEndomorphism::new(tree.clone(), components).expect("total components")
}

/// Independent naturality oracle: every restriction square commutes.
pub fn square_oracle(tree: &TreeObject, components: &[LevelMap]) -> bool {
    (1..tree.levels.len()).all(|n| {
        tree.levels[n].iter().all(|x| {
            let r = &tree.restrictions[n - 1];
            r[&components[n][x]] == components[n - 1][&r[x]]
        })
    })
}

pub struct RandomQuotient {
    pub states: Vec<String>,
    pub transform: BTreeMap<String, String>,
    pub interpret: BTreeMap<String, String>,
    pub pairs: Vec<(String, String)>,
}

impl RandomQuotient {
    pub fn partition(&self) -> Partition {
        make_partition(self.states.clone(), self.pairs.clone()).unwrap()
    }

    pub fn system(&self) -> QuotientSystem {
        QuotientSystem::new(self.transform.clone(), self.interpret.clone(), self.partition(), None).unwrap()
    }
}

/// Random maps and a random equivalence on up to `max_states` states. With
/// probability one half the maps are made to respect the classes, so both
/// verdicts occur often.
pub fn random_quotient(rng: &mut Rng, max_states: usize) -> RandomQuotient {
    let n = rng.range(1, max_states);
    let states = names("s", n);
    let pairs: Vec<(String, String)> =
        (0..rng.below(n + 1)).map(|_| (rng.pick(&states).clone(), rng.pick(&states).clone())).collect();
    let mut transform: BTreeMap<String, String> =
        states.iter().map(|s| (s.clone(), rng.pick(&states).clone())).collect();
    let interpret: BTreeMap<String, String> = states.iter().map(|s| (s.clone(), rng.pick(&states).clone())).collect();
    if rng.chance(0.5) {
        let partition = make_partition(states.clone(), pairs.clone()).unwrap();
        for s in &states {
            let rep = partition.class_of(s).unwrap().to_string();
            let v = transform[&rep].clone();
            transform.insert(s.clone(), v);
        }
        // Occasionally break one member so near-misses are exercised.
        if rng.chance(0.3) {
            let s = rng.pick(&states).clone();
            transform.insert(s, rng.pick(&states).clone());
        }
    }
    RandomQuotient { states, transform, interpret, pairs }
}

/// Brute-force compatibility: every related pair, not just pairs with a
/// representative, is mapped into one class by `F ∘ f`.
pub fn compatibility_oracle(q: &RandomQuotient) -> bool {
    // Equivalence closure by repeated relaxation, independent of union-find.
    let n = q.states.len();
    let idx: BTreeMap<&str, usize> = q.states.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let mut rel = vec![vec![false; n]; n];
    for (i, row) in rel.iter_mut().enumerate() {
        row[i] = true;
    }
    for (a, b) in &q.pairs {
        rel[idx[a.as_str()]][idx[b.as_str()]] = true;
        rel[idx[b.as_str()]][idx[a.as_str()]] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if rel[i][k] && rel[k][j] {
                    rel[i][j] = true;
                }
            }
        }
    }
    let update = |s: &str| idx[q.interpret[&q.transform[s]].as_str()];
    q.states
        .iter()
        .all(|x| q.states.iter().all(|y| !rel[idx[x.as_str()]][idx[y.as_str()]] || rel[update(x)][update(y)]))
}

pub fn set(items: &[&str]) -> BTreeSet<String> {
    items.iter().map(|s| s.to_string()).collect()
}
