//! Finite truncations `X(0) ← X(1) ← … ← X(N)` of presheaves on `ℕ^op`.
//!
//! Only the single-step restrictions `r_{n,n−1}` are stored; composite
//! restrictions are derived from them, so the composition laws hold by
//! construction and [`check_tree`] mostly checks totality. The substantive
//! check is [`check_endomorphism`]: an update `L` must commute with
//! restriction at every level.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::{Error, LawReport, Result};

pub type Level = BTreeSet<String>;
pub type LevelMap = BTreeMap<String, String>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeObject {
    /// `levels[n] = X(n)`.
    pub levels: Vec<Level>,
    /// `restrictions[n − 1] = r_{n,n−1}: X(n) → X(n−1)` for `n = 1..=N`.
    pub restrictions: Vec<LevelMap>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathViolation {
    pub from: usize,
    pub via: usize,
    pub to: usize,
    pub element: String,
}

impl fmt::Display for PathViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "r_{{{},{}}} ∘ r_{{{},{}}} ≠ r_{{{},{}}} at `{}`",
            self.via, self.to, self.from, self.via, self.from, self.to, self.element
        )
    }
}

impl TreeObject {
    pub fn new(levels: Vec<Level>, restrictions: Vec<LevelMap>) -> Result<Self> {
        let t = TreeObject { levels, restrictions };
        t.validate()?;
        Ok(t)
    }

    /// Depth `N`, so that there are `N + 1` levels.
    pub fn depth(&self) -> usize {
        self.levels.len().saturating_sub(1)
    }

    /// `N + 1` copies of `level` with identity restrictions.
    pub fn constant(level: Level, depth: usize) -> Self {
        let id: LevelMap = level.iter().map(|x| (x.clone(), x.clone())).collect();
        TreeObject { levels: vec![level; depth + 1], restrictions: vec![id; depth] }
    }

    pub fn validate(&self) -> Result<()> {
        if self.levels.is_empty() {
            return Err(Error::Empty { kind: "level" });
        }
        if self.restrictions.len() != self.depth() {
            return Err(Error::InvalidParam {
                name: "restrictions",
                reason: format!("{} maps for depth {}", self.restrictions.len(), self.depth()),
            });
        }
        for (k, r) in self.restrictions.iter().enumerate() {
            let n = k + 1;
            check_level_map(&format!("r_{{{n},{k}}}"), r, &self.levels[n], &self.levels[k])?;
        }
        Ok(())
    }

    /// `r_{n,k}(x)` for `n ≥ k`, composed from single steps.
    pub fn restrict(&self, n: usize, k: usize, x: &str) -> Option<&str> {
        if k > n || n > self.depth() || !self.levels[n].contains(x) {
            return None;
        }
        let mut cur = self.levels[n].get(x)?.as_str();
        for m in ((k + 1)..=n).rev() {
            cur = self.restrictions[m - 1].get(cur)?.as_str();
        }
        Some(cur)
    }

    /// The thread `(x, r(x), r(r(x)), …)` from level `n` down to level 0.
    pub fn thread(&self, n: usize, x: &str) -> Option<Vec<String>> {
        (0..=n).rev().map(|k| self.restrict(n, k, x).map(str::to_string)).collect()
    }
}

fn check_level_map(name: &str, map: &LevelMap, domain: &Level, codomain: &Level) -> Result<()> {
    for x in domain {
        let y = map.get(x).ok_or_else(|| Error::not_total(name, x))?;
        if !codomain.contains(y) {
            return Err(Error::unknown("level element", y));
        }
    }
    if let Some(extra) = map.keys().find(|k| !domain.contains(*k)) {
        return Err(Error::unknown("level element", extra));
    }
    Ok(())
}

/// Totality of every restriction, then `r_{n,n} = id` and
/// `r_{m,k} ∘ r_{n,m} = r_{n,k}` for every `n ≥ m ≥ k` and every element.
pub fn check_tree(t: &TreeObject) -> Result<LawReport<PathViolation>> {
    t.validate()?;
    let mut report = LawReport::new();
    for n in 0..=t.depth() {
        for x in &t.levels[n] {
            if t.restrict(n, n, x) != Some(x.as_str()) {
                report.push(PathViolation { from: n, via: n, to: n, element: x.clone() });
            }
            for m in 0..=n {
                for k in 0..=m {
                    let two_step = t.restrict(n, m, x).and_then(|y| t.restrict(m, k, y));
                    if two_step != t.restrict(n, k, x) {
                        report.push(PathViolation { from: n, via: m, to: k, element: x.clone() });
                    }
                }
            }
        }
    }
    report.note("composite restrictions are derived from single steps; composition laws hold by construction");
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeEndomorphism {
    pub base: TreeObject,
    /// `components[n] = L_n: X(n) → X(n)`.
    pub components: Vec<LevelMap>,
}

/// `r(L_{n+1}(x)) ≠ L_n(r(x))` for `x ∈ X(n+1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareViolation {
    pub level: usize,
    pub element: String,
    pub update_then_restrict: String,
    pub restrict_then_update: String,
}

impl fmt::Display for SquareViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "square {}→{} at `{}`: r∘L = `{}` but L∘r = `{}`",
            self.level + 1,
            self.level,
            self.element,
            self.update_then_restrict,
            self.restrict_then_update
        )
    }
}

impl TreeEndomorphism {
    pub fn new(base: TreeObject, components: Vec<LevelMap>) -> Result<Self> {
        let l = TreeEndomorphism { base, components };
        l.validate()?;
        Ok(l)
    }

    pub fn identity(base: &TreeObject) -> Self {
        let components = base.levels.iter().map(|l| l.iter().map(|x| (x.clone(), x.clone())).collect()).collect();
        TreeEndomorphism { base: base.clone(), components }
    }

    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        if self.components.len() != self.base.levels.len() {
            return Err(Error::InvalidParam {
                name: "components",
                reason: format!("{} components for {} levels", self.components.len(), self.base.levels.len()),
            });
        }
        for (n, l) in self.components.iter().enumerate() {
            check_level_map(&format!("L_{n}"), l, &self.base.levels[n], &self.base.levels[n])?;
        }
        Ok(())
    }

    pub fn apply(&self, n: usize, x: &str) -> Option<&str> {
        self.components.get(n)?.get(x).map(String::as_str)
    }
}

/// Every non-commuting square, over all levels and all elements.
pub fn check_endomorphism(l: &TreeEndomorphism) -> Result<LawReport<SquareViolation>> {
    l.validate()?;
    let t = &l.base;
    let mut report = LawReport::new();
    for n in 0..t.depth() {
        let r = &t.restrictions[n];
        for x in &t.levels[n + 1] {
            let upper = &r[&l.components[n + 1][x]];
            let lower = &l.components[n][&r[x]];
            if upper != lower {
                report.push(SquareViolation {
                    level: n,
                    element: x.clone(),
                    update_then_restrict: upper.clone(),
                    restrict_then_update: lower.clone(),
                });
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedElements {
    /// `per_level[n] = {x ∈ X(n) : L_n(x) = x}`.
    pub per_level: Vec<Level>,
    /// Threads `(x_N, …, x_0)` fixed at every level.
    pub chains: Vec<Vec<String>>,
}

pub fn fixed_elements(l: &TreeEndomorphism) -> Result<FixedElements> {
    l.validate()?;
    let t = &l.base;
    let per_level: Vec<Level> = t
        .levels
        .iter()
        .enumerate()
        .map(|(n, level)| level.iter().filter(|x| l.components[n][*x] == **x).cloned().collect())
        .collect();
    let top = t.depth();
    let chains = t.levels[top]
        .iter()
        .filter_map(|x| t.thread(top, x))
        .filter(|chain| chain.iter().enumerate().all(|(i, x)| per_level[top - i].contains(x)))
        .collect();
    Ok(FixedElements { per_level, chains })
}

/// Builds a depth-`depth` tree by stepping a set of seeds forward.
///
/// `X(0)` is the seed set and `X(n) = { step(n, x) : x ∈ X(n−1) }`, with
/// `None` results dropped. Each stage-`n` state restricts to its least
/// stage-`(n−1)` predecessor.
pub fn unfold<I, F>(seeds: I, depth: usize, mut step: F) -> Result<TreeObject>
where
    I: IntoIterator,
    I::Item: Into<String>,
    F: FnMut(usize, &str) -> Option<String>,
{
    let mut levels: Vec<Level> = vec![seeds.into_iter().map(Into::into).collect()];
    let mut restrictions = Vec::with_capacity(depth);
    for n in 1..=depth {
        let mut level = Level::new();
        let mut r = LevelMap::new();
        for x in &levels[n - 1] {
            if let Some(y) = step(n, x) {
                // `levels` iterate in order, so the first predecessor is the least.
                r.entry(y.clone()).or_insert_with(|| x.clone());
                level.insert(y);
            }
        }
        levels.push(level);
        restrictions.push(r);
    }
    TreeObject::new(levels, restrictions)
}

/// Like [`unfold`] with an explicit restriction `restrict(n, y) ∈ X(n−1)`.
pub fn unfold_with<I, F, R>(seeds: I, depth: usize, mut step: F, mut restrict: R) -> Result<TreeObject>
where
    I: IntoIterator,
    I::Item: Into<String>,
    F: FnMut(usize, &str) -> Option<String>,
    R: FnMut(usize, &str) -> String,
{
    let mut t = unfold(seeds, depth, &mut step)?;
    for n in 1..=depth {
        t.restrictions[n - 1] = t.levels[n].iter().map(|y| (y.clone(), restrict(n, y))).collect();
    }
    t.validate()?;
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn level(items: &[&str]) -> Level {
        items.iter().map(|s| s.to_string()).collect()
    }

    fn map(pairs: &[(&str, &str)]) -> LevelMap {
        pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
    }

    fn depth2() -> TreeObject {
        TreeObject::new(
            vec![level(&["coarse"]), level(&["a", "b"]), level(&["a1", "a2", "b1"])],
            vec![map(&[("a", "coarse"), ("b", "coarse")]), map(&[("a1", "a"), ("a2", "a"), ("b1", "b")])],
        )
        .unwrap()
    }

    fn swap_tree() -> TreeObject {
        TreeObject::new(vec![level(&["u", "v"]), level(&["u'", "v'"])], vec![map(&[("u'", "u"), ("v'", "v")])]).unwrap()
    }

    #[test]
    fn trees_pass_their_laws() {
        let c = TreeObject::constant(level(&["s"]), 3);
        assert!(check_tree(&c).unwrap().is_pass());
        let t = depth2();
        assert!(check_tree(&t).unwrap().is_pass());
        assert_eq!(t.restrict(2, 0, "b1"), Some("coarse"));
        assert_eq!(t.thread(2, "a2").unwrap(), vec!["a2", "a", "coarse"]);
    }

    #[test]
    fn partial_restriction_is_structural_error() {
        let mut t = depth2();
        t.restrictions[1].remove("a2");
        assert!(matches!(check_tree(&t), Err(Error::NotTotal { .. })));
        let mut t = depth2();
        t.restrictions[1].insert("b1".into(), "zz".into());
        assert!(matches!(check_tree(&t), Err(Error::Unknown { .. })));
    }

    #[test]
    fn swap_squares() {
        let t = swap_tree();
        assert!(check_endomorphism(&TreeEndomorphism::identity(&t)).unwrap().is_pass());
        let swap0 = map(&[("u", "v"), ("v", "u")]);
        let swap1 = map(&[("u'", "v'"), ("v'", "u'")]);
        let l = TreeEndomorphism::new(t.clone(), vec![swap0, swap1.clone()]).unwrap();
        assert!(check_endomorphism(&l).unwrap().is_pass());
        let fixed = fixed_elements(&l).unwrap();
        assert!(fixed.per_level.iter().all(Level::is_empty));
        assert!(fixed.chains.is_empty());

        let broken = TreeEndomorphism::new(t, vec![map(&[("u", "u"), ("v", "v")]), swap1]).unwrap();
        let v = check_endomorphism(&broken).unwrap().violations;
        let at: Vec<(usize, &str)> = v.iter().map(|s| (s.level, s.element.as_str())).collect();
        assert_eq!(at, vec![(0, "u'"), (0, "v'")]);
    }

    #[test]
    fn mixed_fixed_chains() {
        let t = TreeObject::new(
            vec![level(&["a", "b"]), level(&["a1", "b1", "b2"])],
            vec![map(&[("a1", "a"), ("b1", "b"), ("b2", "b")])],
        )
        .unwrap();
        let l = TreeEndomorphism::new(
            t,
            vec![map(&[("a", "a"), ("b", "b")]), map(&[("a1", "a1"), ("b1", "b2"), ("b2", "b1")])],
        )
        .unwrap();
        assert!(check_endomorphism(&l).unwrap().is_pass());
        let fixed = fixed_elements(&l).unwrap();
        assert_eq!(fixed.per_level, vec![level(&["a", "b"]), level(&["a1"])]);
        assert_eq!(fixed.chains, vec![vec!["a1".to_string(), "a".to_string()]]);
    }

    #[test]
    fn identity_fixes_every_chain() {
        let t = depth2();
        let fixed = fixed_elements(&TreeEndomorphism::identity(&t)).unwrap();
        assert_eq!(fixed.chains.len(), 3);
    }

    #[test]
    fn unfold_identity_is_constant() {
        let t = unfold(["s"], 4, |_, x| Some(x.to_string())).unwrap();
        assert_eq!(t, TreeObject::constant(level(&["s"]), 4));
    }

    #[test]
    fn unfold_bank_stages() {
        let t = unfold(["financial", "river"], 2, |_, x| (x != "river").then(|| x.to_string())).unwrap();
        assert_eq!(t.levels, vec![level(&["financial", "river"]), level(&["financial"]), level(&["financial"])]);
        assert_eq!(t.restrictions, vec![map(&[("financial", "financial")]), map(&[("financial", "financial")])]);
        assert!(check_tree(&t).unwrap().is_pass());
    }

    #[test]
    fn unfold_with_bad_restriction_fails() {
        let r = unfold_with(["a"], 1, |_, _| Some("b".into()), |_, _| "nowhere".into());
        assert!(matches!(r, Err(Error::Unknown { .. })));
    }
}
