//! Context posets, constraint presheaves of admissible meanings and the
//! Heyting algebra of downsets.
//!
//! `c <= c'` means `c'` refines `c`. A constraint presheaf assigns each
//! context the set of meanings still admissible there; refinement may only
//! remove meanings, so restriction maps are the forced inclusions and the
//! presheaf is a subpresheaf of the constant presheaf on the universe.

use std::collections::BTreeSet;
use std::fmt;

use crate::order::Poset;
use crate::{Error, LawReport, Result};

pub type ContextPoset = Poset;

pub type MeaningSet = BTreeSet<String>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintPresheaf {
    pub poset: ContextPoset,
    pub universe: MeaningSet,
    /// Indexed like `poset.elements()`.
    admissible: Vec<MeaningSet>,
}

/// `coarser <= finer` yet `finer` admits `extra`, which `coarser` does not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AntitoneViolation {
    pub coarser: String,
    pub finer: String,
    pub extra: MeaningSet,
}

impl fmt::Display for AntitoneViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <= {} but {} admits {}", self.coarser, self.finer, self.finer, set_str(&self.extra))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Refinement {
    Survives,
    /// Excluded first at `context`; `chain` is the maximal chain walked,
    /// from a minimal context up to the queried one.
    PrunedAt {
        context: String,
        chain: Vec<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StageTruth {
    Validated,
    Undetermined,
    Refuted,
}

impl fmt::Display for StageTruth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StageTruth::Validated => "validated",
            StageTruth::Undetermined => "undetermined",
            StageTruth::Refuted => "refuted",
        })
    }
}

pub(crate) fn set_str<'a>(s: impl IntoIterator<Item = &'a String>) -> String {
    let items: Vec<&str> = s.into_iter().map(String::as_str).collect();
    format!("{{{}}}", items.join(", "))
}

impl ConstraintPresheaf {
    /// `admissible` pairs each context with its admissible meanings. Every
    /// context needs an entry and every meaning must be in `universe`.
    pub fn new<U, A, S>(poset: ContextPoset, universe: U, admissible: A) -> Result<Self>
    where
        U: IntoIterator,
        U::Item: Into<String>,
        A: IntoIterator<Item = (S, MeaningSet)>,
        S: AsRef<str>,
    {
        let universe: MeaningSet = universe.into_iter().map(Into::into).collect();
        let mut table: Vec<Option<MeaningSet>> = vec![None; poset.len()];
        for (c, set) in admissible {
            let i = poset.index_of(c.as_ref()).ok_or_else(|| Error::unknown("context", c.as_ref()))?;
            if let Some(m) = set.iter().find(|m| !universe.contains(*m)) {
                return Err(Error::unknown("meaning", m));
            }
            if table[i].replace(set).is_some() {
                return Err(Error::Duplicate { kind: "admissible entry", id: c.as_ref().to_string() });
            }
        }
        let admissible = table
            .into_iter()
            .enumerate()
            .map(|(i, s)| s.ok_or_else(|| Error::not_total("admissible", &poset.elements()[i])))
            .collect::<Result<Vec<_>>>()?;
        Ok(ConstraintPresheaf { poset, universe, admissible })
    }

    /// The universe at every context.
    pub fn constant(poset: ContextPoset, universe: MeaningSet) -> Self {
        let admissible = vec![universe.clone(); poset.len()];
        ConstraintPresheaf { poset, universe, admissible }
    }

    pub fn admissible(&self, context: &str) -> Option<&MeaningSet> {
        self.poset.index_of(context).map(|i| &self.admissible[i])
    }

    fn at(&self, i: usize) -> &MeaningSet {
        &self.admissible[i]
    }
}

/// Reports every pair `c <= c'` whose admissible sets are not nested
/// (`S(c') ⊆ S(c)` is required).
pub fn check_presheaf(p: &ConstraintPresheaf) -> LawReport<AntitoneViolation> {
    let mut report = LawReport::new();
    let n = p.poset.len();
    for i in 0..n {
        for j in 0..n {
            if i != j && p.poset.leq_idx(i, j) {
                let extra: MeaningSet = p.at(j).difference(p.at(i)).cloned().collect();
                if !extra.is_empty() {
                    report.push(AntitoneViolation {
                        coarser: p.poset.elements()[i].clone(),
                        finer: p.poset.elements()[j].clone(),
                        extra,
                    });
                }
            }
        }
    }
    report.note("restrictions are inclusions: identity and composition laws hold by construction");
    report
}

/// Whether `meaning` is still admissible at `context`, and if not, the
/// coarsest context at which it was excluded.
pub fn refine(p: &ConstraintPresheaf, context: &str, meaning: &str) -> Result<Refinement> {
    let target = p.poset.index_of(context).ok_or_else(|| Error::unknown("context", context))?;
    if !p.universe.contains(meaning) {
        return Err(Error::unknown("meaning", meaning));
    }
    if p.at(target).contains(meaning) {
        return Ok(Refinement::Survives);
    }
    let elems = p.poset.elements();
    let excluded: Vec<usize> =
        (0..p.poset.len()).filter(|&i| p.poset.leq_idx(i, target) && !p.at(i).contains(meaning)).collect();
    // Minimal excluded context below the query, first in declaration order.
    let first = *excluded
        .iter()
        .find(|&&i| !excluded.iter().any(|&k| k != i && p.poset.leq_idx(k, i)))
        .expect("target itself is excluded");
    let name = elems[first].clone();

    let mut below = vec![name.clone()];
    let mut cur = name.clone();
    while let Some(&lower) = p.poset.lower_covers(&cur).first() {
        below.push(lower.to_string());
        cur = lower.to_string();
    }
    below.reverse();
    let mut cur = name.clone();
    while cur != context {
        let next = p
            .poset
            .upper_covers(&cur)
            .into_iter()
            .find(|u| p.poset.leq(u, context))
            .expect("cur < context, so some cover lies below it");
        below.push(next.to_string());
        cur = next.to_string();
    }
    Ok(Refinement::PrunedAt { context: name, chain: below })
}

/// Meanings admissible at every context.
pub fn global_sections(p: &ConstraintPresheaf) -> MeaningSet {
    let mut iter = p.admissible.iter();
    let first = iter.next().cloned().unwrap_or_default();
    iter.fold(first, |acc, s| acc.intersection(s).cloned().collect())
}

/// Validated if every admissible meaning is in `proposition` (and there is
/// at least one), refuted if none is, undetermined otherwise.
pub fn stage_truth(p: &ConstraintPresheaf, proposition: &MeaningSet, context: &str) -> Result<StageTruth> {
    let s = p.admissible(context).ok_or_else(|| Error::unknown("context", context))?;
    Ok(if s.is_empty() {
        StageTruth::Undetermined
    } else if s.is_subset(proposition) {
        StageTruth::Validated
    } else if s.is_disjoint(proposition) {
        StageTruth::Refuted
    } else {
        StageTruth::Undetermined
    })
}

/// The contexts where `proposition` is validated, as a downset of the
/// opposite (coarsening) order. Fails if validation is not preserved by
/// refinement, which can only happen for non-antitone presheaves or empty
/// stages.
pub fn truth_downset(p: &ConstraintPresheaf, proposition: &MeaningSet) -> Result<Downset> {
    let mut members = BTreeSet::new();
    for c in p.poset.elements() {
        if stage_truth(p, proposition, c)? == StageTruth::Validated {
            members.insert(c.clone());
        }
    }
    DownsetLattice::new(p.poset.opposite()).downset(members)
}

/// A downward-closed set of a poset.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Downset {
    members: BTreeSet<String>,
}

impl Downset {
    pub fn members(&self) -> &BTreeSet<String> {
        &self.members
    }

    pub fn contains(&self, x: &str) -> bool {
        self.members.contains(x)
    }
}

impl fmt::Display for Downset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&set_str(&self.members))
    }
}

/// Downsets of a finite poset under union, intersection and relative
/// pseudo-complement.
#[derive(Debug, Clone)]
pub struct DownsetLattice {
    poset: Poset,
}

impl DownsetLattice {
    pub fn new(poset: Poset) -> Self {
        DownsetLattice { poset }
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn downset<I>(&self, members: I) -> Result<Downset>
    where
        I: IntoIterator,
        I::Item: Into<String>,
    {
        let members: BTreeSet<String> = members.into_iter().map(Into::into).collect();
        for m in &members {
            if !self.poset.contains(m) {
                return Err(Error::unknown("poset element", m));
            }
            for b in self.poset.elements() {
                if self.poset.leq(b, m) && !members.contains(b) {
                    return Err(Error::NotDownset { member: m.clone(), below: b.clone() });
                }
            }
        }
        Ok(Downset { members })
    }

    /// The downset generated by `x`.
    pub fn principal(&self, x: &str) -> Result<Downset> {
        if !self.poset.contains(x) {
            return Err(Error::unknown("poset element", x));
        }
        let members = self.poset.elements().iter().filter(|b| self.poset.leq(b, x)).cloned().collect();
        Ok(Downset { members })
    }

    pub fn top(&self) -> Downset {
        Downset { members: self.poset.elements().iter().cloned().collect() }
    }

    pub fn bottom(&self) -> Downset {
        Downset { members: BTreeSet::new() }
    }

    pub fn meet(&self, a: &Downset, b: &Downset) -> Downset {
        Downset { members: a.members.intersection(&b.members).cloned().collect() }
    }

    pub fn join(&self, a: &Downset, b: &Downset) -> Downset {
        Downset { members: a.members.union(&b.members).cloned().collect() }
    }

    /// `a → b`: all `c` such that every `c' <= c` in `a` is also in `b`.
    pub fn implies(&self, a: &Downset, b: &Downset) -> Downset {
        let members = self
            .poset
            .elements()
            .iter()
            .filter(|c| {
                self.poset.elements().iter().filter(|d| self.poset.leq(d, c)).all(|d| !a.contains(d) || b.contains(d))
            })
            .cloned()
            .collect();
        Downset { members }
    }

    pub fn leq(&self, a: &Downset, b: &Downset) -> bool {
        a.members.is_subset(&b.members)
    }

    /// Every downset, by brute force over antichains of the element set.
    /// Exponential; meant for posets of at most a dozen elements.
    pub fn all_downsets(&self) -> Vec<Downset> {
        let elems = self.poset.elements();
        let n = elems.len();
        assert!(n <= 20, "all_downsets on {n} elements");
        let mut out = Vec::new();
        for mask in 0u32..(1 << n) {
            let closed = (0..n)
                .all(|i| mask & (1 << i) == 0 || (0..n).all(|j| !self.poset.leq_idx(j, i) || mask & (1 << j) != 0));
            if closed {
                let members = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| elems[i].clone()).collect();
                out.push(Downset { members });
            }
        }
        out
    }
}
