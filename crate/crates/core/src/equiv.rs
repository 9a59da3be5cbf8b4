//! Equivalence relations, the quotient projection π and the symbolic update
//! `[x] ↦ [F(f(x))]` on a finite state set.
//!
//! Classes are named by their least member in lexicographic order. Nothing
//! observable depends on that choice once a system is certified compatible.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use crate::{Error, Result};

/// Disjoint classes covering a finite universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    class_of: BTreeMap<String, String>,
}

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(len: usize) -> Self {
        DisjointSets { parent: (0..len).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    // The smaller index becomes the root, so roots are least members.
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

impl Partition {
    /// The finest partition of `universe` in which every pair is related.
    pub fn new<U, P, A, B>(universe: U, pairs: P) -> Result<Self>
    where
        U: IntoIterator,
        U::Item: Into<String>,
        P: IntoIterator<Item = (A, B)>,
        A: AsRef<str>,
        B: AsRef<str>,
    {
        let mut sorted = BTreeSet::new();
        for x in universe {
            let x = x.into();
            if !sorted.insert(x.clone()) {
                return Err(Error::Duplicate { kind: "state", id: x });
            }
        }
        let elems: Vec<String> = sorted.into_iter().collect();
        let index: BTreeMap<&str, usize> = elems.iter().enumerate().map(|(i, e)| (e.as_str(), i)).collect();
        let mut sets = DisjointSets::new(elems.len());
        for (a, b) in pairs {
            let i = *index.get(a.as_ref()).ok_or_else(|| Error::unknown("state", a.as_ref()))?;
            let j = *index.get(b.as_ref()).ok_or_else(|| Error::unknown("state", b.as_ref()))?;
            sets.union(i, j);
        }
        let class_of = (0..elems.len()).map(|i| (elems[i].clone(), elems[sets.find(i)].clone())).collect();
        Ok(Partition { class_of })
    }

    /// Every state in its own class.
    pub fn discrete<U>(universe: U) -> Result<Self>
    where
        U: IntoIterator,
        U::Item: Into<String>,
    {
        Partition::new(universe, Vec::<(String, String)>::new())
    }

    pub fn universe(&self) -> impl Iterator<Item = &str> {
        self.class_of.keys().map(String::as_str)
    }

    pub fn contains(&self, x: &str) -> bool {
        self.class_of.contains_key(x)
    }

    /// The canonical representative of `x`'s class (π(x)).
    pub fn class_of(&self, x: &str) -> Option<&str> {
        self.class_of.get(x).map(String::as_str)
    }

    pub fn same_class(&self, x: &str, y: &str) -> bool {
        matches!((self.class_of(x), self.class_of(y)), (Some(a), Some(b)) if a == b)
    }

    pub fn is_representative(&self, x: &str) -> bool {
        self.class_of(x) == Some(x)
    }

    /// Representative ↦ sorted members.
    pub fn classes(&self) -> BTreeMap<&str, Vec<&str>> {
        let mut out: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for (x, rep) in &self.class_of {
            out.entry(rep.as_str()).or_default().push(x.as_str());
        }
        out
    }

    pub fn representatives(&self) -> Vec<&str> {
        self.classes().into_keys().collect()
    }

    pub fn members(&self, rep: &str) -> Vec<&str> {
        self.class_of.iter().filter(|(_, r)| r.as_str() == rep).map(|(x, _)| x.as_str()).collect()
    }

    /// `(x, π(x))` for every non-representative `x`; re-ingesting these pairs
    /// reproduces the partition.
    pub fn generating_pairs(&self) -> Vec<(String, String)> {
        self.class_of.iter().filter(|(x, r)| x != r).map(|(x, r)| (x.clone(), r.clone())).collect()
    }
}

/// Convenience alias for [`Partition::new`].
pub fn make_partition<U, P, A, B>(universe: U, pairs: P) -> Result<Partition>
where
    U: IntoIterator,
    U::Item: Into<String>,
    P: IntoIterator<Item = (A, B)>,
    A: AsRef<str>,
    B: AsRef<str>,
{
    Partition::new(universe, pairs)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    Compatible,
    /// `x ~ y` but `F(f(x))` and `F(f(y))` lie in different classes.
    Counterexample {
        x: String,
        y: String,
    },
}

impl Certificate {
    pub fn is_compatible(&self) -> bool {
        matches!(self, Certificate::Compatible)
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certificate::Compatible => write!(f, "compatible"),
            Certificate::Counterexample { x, y } => write!(f, "counterexample ({x}, {y})"),
        }
    }
}

/// A finite state set with internal map `f`, interpretation `F` and a
/// partition, optionally with an absorbing sink state that stands for "no
/// interpretation" and is left out of reported results.
#[derive(Debug)]
pub struct QuotientSystem {
    transform: BTreeMap<String, String>,
    interpret: BTreeMap<String, String>,
    partition: Partition,
    sink: Option<String>,
    certificate: OnceLock<Certificate>,
}

impl Clone for QuotientSystem {
    fn clone(&self) -> Self {
        QuotientSystem {
            transform: self.transform.clone(),
            interpret: self.interpret.clone(),
            partition: self.partition.clone(),
            sink: self.sink.clone(),
            certificate: OnceLock::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Basin {
    Fixed(String),
    /// Reaches the cycle with this index in [`ClassDynamics::cycles`].
    Cycle(usize),
    /// Falls into the sink.
    Absorbed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassDynamics {
    /// Fixed classes, sink excluded.
    pub fixed: Vec<String>,
    /// Cycles of period ≥ 2, each rotated to start at its least class.
    pub cycles: Vec<Vec<String>>,
    /// Eventual behaviour of every non-sink class.
    pub basin: BTreeMap<String, Basin>,
}

impl QuotientSystem {
    pub fn new(
        transform: BTreeMap<String, String>,
        interpret: BTreeMap<String, String>,
        partition: Partition,
        sink: Option<String>,
    ) -> Result<Self> {
        for (name, map) in [("f", &transform), ("F", &interpret)] {
            for x in partition.universe() {
                let y = map.get(x).ok_or_else(|| Error::not_total(name, x))?;
                if !partition.contains(y) {
                    return Err(Error::unknown("state", y));
                }
            }
            if let Some(extra) = map.keys().find(|k| !partition.contains(k)) {
                return Err(Error::unknown("state", extra));
            }
        }
        if let Some(s) = &sink {
            if !partition.contains(s) {
                return Err(Error::unknown("state", s));
            }
            if transform[s] != *s || interpret[s] != *s {
                return Err(Error::InvalidParam { name: "sink", reason: format!("`{s}` is not absorbing") });
            }
            if partition.members(partition.class_of(s).expect("contained")).len() != 1 {
                return Err(Error::InvalidParam {
                    name: "sink",
                    reason: format!("`{s}` shares a class with other states"),
                });
            }
        }
        Ok(QuotientSystem { transform, interpret, partition, sink, certificate: OnceLock::new() })
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn sink(&self) -> Option<&str> {
        self.sink.as_deref()
    }

    /// `F(f(x))`.
    pub fn update(&self, x: &str) -> Option<&str> {
        let y = self.transform.get(x)?;
        self.interpret.get(y).map(String::as_str)
    }

    /// Checks `x ~ y ⇒ F(f(x)) ~ F(f(y))` by comparing every class member
    /// against the class representative.
    pub fn certify_compatibility(&self) -> Certificate {
        self.certificate
            .get_or_init(|| {
                for (rep, members) in self.partition.classes() {
                    let target = self.image_class(rep);
                    for m in members {
                        if self.image_class(m) != target {
                            return Certificate::Counterexample { x: rep.to_string(), y: m.to_string() };
                        }
                    }
                }
                Certificate::Compatible
            })
            .clone()
    }

    fn image_class(&self, x: &str) -> &str {
        let y = self.update(x).expect("total by construction");
        self.partition.class_of(y).expect("closed by construction")
    }

    fn require_certified(&self) -> Result<()> {
        match self.certify_compatibility() {
            Certificate::Compatible => Ok(()),
            Certificate::Counterexample { x, y } => Err(Error::Uncertified { x, y }),
        }
    }

    /// `Φ([x]) = [F(f(x))]` for the class named by `class`.
    pub fn quotient_step(&self, class: &str) -> Result<String> {
        self.require_certified()?;
        if !self.partition.is_representative(class) {
            return Err(Error::NotRepresentative { id: class.to_string() });
        }
        Ok(self.image_class(class).to_string())
    }

    /// The induced map on classes.
    pub fn class_map(&self) -> Result<BTreeMap<String, String>> {
        self.require_certified()?;
        Ok(self
            .partition
            .representatives()
            .into_iter()
            .map(|r| (r.to_string(), self.image_class(r).to_string()))
            .collect())
    }

    /// Exhaustive fixed classes, cycles and basins of the class map.
    pub fn find_class_fixed_points(&self) -> Result<ClassDynamics> {
        let map = self.class_map()?;
        let sink_class = self.sink.as_deref().and_then(|s| self.partition.class_of(s));
        let mut cycles: Vec<Vec<String>> = Vec::new();
        let mut fixed = Vec::new();
        let mut basin = BTreeMap::new();
        for (start, next) in &map {
            if next == start && Some(start.as_str()) != sink_class {
                fixed.push(start.clone());
            }
        }
        for start in map.keys() {
            if Some(start.as_str()) == sink_class {
                continue;
            }
            let mut seen: Vec<&str> = Vec::new();
            let mut cur = start.as_str();
            // A finite map revisits some class within |classes| steps.
            while !seen.contains(&cur) {
                seen.push(cur);
                cur = map[cur].as_str();
            }
            let entry = seen.iter().position(|&c| c == cur).expect("revisited");
            let mut cycle: Vec<String> = seen[entry..].iter().map(|s| s.to_string()).collect();
            let b = if cycle.len() == 1 {
                if Some(cycle[0].as_str()) == sink_class {
                    Basin::Absorbed
                } else {
                    Basin::Fixed(cycle.remove(0))
                }
            } else {
                let least = (0..cycle.len()).min_by_key(|&i| &cycle[i]).expect("non-empty");
                cycle.rotate_left(least);
                let idx = match cycles.iter().position(|c| *c == cycle) {
                    Some(i) => i,
                    None => {
                        cycles.push(cycle);
                        cycles.len() - 1
                    }
                };
                Basin::Cycle(idx)
            };
            basin.insert(start.clone(), b);
        }
        Ok(ClassDynamics { fixed, cycles, basin })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
        pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
    }

    fn identity(states: &[&str]) -> BTreeMap<String, String> {
        states.iter().map(|s| (s.to_string(), s.to_string())).collect()
    }

    fn bank() -> QuotientSystem {
        let states = ["financial", "river", "none"];
        QuotientSystem::new(
            map(&[("financial", "financial"), ("river", "none"), ("none", "none")]),
            identity(&states),
            Partition::discrete(states).unwrap(),
            Some("none".into()),
        )
        .unwrap()
    }

    #[test]
    fn partition_closure() {
        let p = Partition::new(["a", "b", "c"], Vec::<(&str, &str)>::new()).unwrap();
        assert_eq!(p.classes().len(), 3);
        let p = Partition::new(["S1", "S2"], [("S1", "S2")]).unwrap();
        assert_eq!(p.representatives(), vec!["S1"]);
        assert_eq!(p.class_of("S2"), Some("S1"));
        let p = Partition::new(["a", "b", "c"], [("a", "b"), ("b", "c")]).unwrap();
        assert_eq!(p.classes().len(), 1);
        assert!(p.same_class("a", "c"));
    }

    #[test]
    fn partition_rejects_unknown() {
        assert!(matches!(Partition::new(["a"], [("a", "q")]), Err(Error::Unknown { .. })));
    }

    #[test]
    fn representative_is_least_member() {
        let p = Partition::new(["zeta", "alpha", "mid"], [("zeta", "mid"), ("mid", "alpha")]).unwrap();
        for x in ["zeta", "alpha", "mid"] {
            assert_eq!(p.class_of(x), Some("alpha"));
        }
    }

    #[test]
    fn identity_system_is_compatible_and_static() {
        let states = ["a", "b", "c"];
        let p = Partition::new(states, [("a", "b")]).unwrap();
        let sys = QuotientSystem::new(identity(&states), identity(&states), p, None).unwrap();
        assert!(sys.certify_compatibility().is_compatible());
        assert_eq!(sys.quotient_step("a").unwrap(), "a");
        assert_eq!(sys.quotient_step("c").unwrap(), "c");
        let dyns = sys.find_class_fixed_points().unwrap();
        assert_eq!(dyns.fixed, vec!["a", "c"]);
        assert!(dyns.cycles.is_empty());
    }

    #[test]
    fn bank_filter_stabilizes_on_financial() {
        let sys = bank();
        assert_eq!(sys.certify_compatibility(), Certificate::Compatible);
        assert_eq!(sys.quotient_step("financial").unwrap(), "financial");
        let dyns = sys.find_class_fixed_points().unwrap();
        assert_eq!(dyns.fixed, vec!["financial"]);
        assert_eq!(dyns.basin["financial"], Basin::Fixed("financial".into()));
        assert_eq!(dyns.basin["river"], Basin::Absorbed);
        assert!(!dyns.basin.contains_key("none"));
    }

    #[test]
    fn incompatible_interpretation_yields_counterexample() {
        let states = ["a", "b", "c"];
        let p = Partition::new(states, [("a", "b")]).unwrap();
        let sys = QuotientSystem::new(identity(&states), map(&[("a", "a"), ("b", "c"), ("c", "c")]), p, None).unwrap();
        assert_eq!(sys.certify_compatibility(), Certificate::Counterexample { x: "a".into(), y: "b".into() });
        assert!(matches!(sys.quotient_step("a"), Err(Error::Uncertified { .. })));
        assert!(matches!(sys.find_class_fixed_points(), Err(Error::Uncertified { .. })));
    }

    #[test]
    fn four_cycle_on_parity_classes() {
        let states = ["s0", "s1", "s2", "s3"];
        let p = Partition::new(states, [("s0", "s2"), ("s1", "s3")]).unwrap();
        let f = map(&[("s0", "s1"), ("s1", "s2"), ("s2", "s3"), ("s3", "s0")]);
        let sys = QuotientSystem::new(f, identity(&states), p, None).unwrap();
        assert_eq!(sys.quotient_step("s0").unwrap(), "s1");
        assert_eq!(sys.quotient_step("s1").unwrap(), "s0");
        let dyns = sys.find_class_fixed_points().unwrap();
        assert!(dyns.fixed.is_empty());
        assert_eq!(dyns.cycles, vec![vec!["s0".to_string(), "s1".to_string()]]);
        assert_eq!(dyns.basin["s0"], Basin::Cycle(0));
        assert_eq!(dyns.basin["s1"], Basin::Cycle(0));
    }

    #[test]
    fn non_representative_is_rejected() {
        let states = ["a", "b"];
        let p = Partition::new(states, [("a", "b")]).unwrap();
        let sys = QuotientSystem::new(identity(&states), identity(&states), p, None).unwrap();
        assert!(matches!(sys.quotient_step("b"), Err(Error::NotRepresentative { .. })));
    }

    #[test]
    fn structural_errors() {
        let states = ["a", "b"];
        let p = Partition::discrete(states).unwrap();
        assert!(matches!(
            QuotientSystem::new(map(&[("a", "a")]), identity(&states), p.clone(), None),
            Err(Error::NotTotal { .. })
        ));
        assert!(matches!(
            QuotientSystem::new(map(&[("a", "z"), ("b", "b")]), identity(&states), p.clone(), None),
            Err(Error::Unknown { .. })
        ));
        assert!(matches!(
            QuotientSystem::new(map(&[("a", "b"), ("b", "a")]), identity(&states), p, Some("a".into())),
            Err(Error::InvalidParam { name: "sink", .. })
        ));
    }
}
