//! Finite adjunctions: Galois connections between posets, and the unique
//! factorization of an equivalence-respecting map through the quotient.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::equiv::Partition;
use crate::order::Poset;
use crate::{Error, LawReport, Result};

/// Monotone maps `lower: S → M` and `upper: M → S`, candidates for
/// `lower ⊣ upper`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaloisConnection {
    pub source: Poset,
    pub target: Poset,
    pub lower: BTreeMap<String, String>,
    pub upper: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Lower,
    Upper,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotoneViolation {
    pub map: Side,
    pub a: String,
    pub b: String,
}

impl fmt::Display for MonotoneViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = if self.map == Side::Lower { "F" } else { "G" };
        write!(f, "{name} not monotone: {} <= {} but {name}({}) !<= {name}({})", self.a, self.b, self.a, self.b)
    }
}

/// `F(x) <= y` and `x <= G(y)` disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjunctionViolation {
    pub x: String,
    pub y: String,
    pub lower_holds: bool,
}

impl fmt::Display for AdjunctionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (l, u) = if self.lower_holds { ("<=", "!<=") } else { ("!<=", "<=") };
        write!(f, "x={}, y={}: F(x) {l} y but x {u} G(y)", self.x, self.y)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GaloisReport {
    pub adjunction: LawReport<AdjunctionViolation>,
    pub monotonicity: LawReport<MonotoneViolation>,
}

impl GaloisReport {
    pub fn is_pass(&self) -> bool {
        self.adjunction.is_pass() && self.monotonicity.is_pass()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TriangleViolation {
    /// `x !<= G(F(x))`.
    Unit { x: String, round_trip: String },
    /// `F(G(y)) !<= y`.
    Counit { y: String, round_trip: String },
}

impl fmt::Display for TriangleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TriangleViolation::Unit { x, round_trip } => write!(f, "unit: {x} !<= G(F({x})) = {round_trip}"),
            TriangleViolation::Counit { y, round_trip } => write!(f, "counit: F(G({y})) = {round_trip} !<= {y}"),
        }
    }
}

impl GaloisConnection {
    pub fn validate(&self) -> Result<()> {
        check_map("F", &self.lower, &self.source, &self.target)?;
        check_map("G", &self.upper, &self.target, &self.source)
    }

    pub fn identity(poset: &Poset) -> Self {
        let id: BTreeMap<String, String> = poset.elements().iter().map(|x| (x.clone(), x.clone())).collect();
        GaloisConnection { source: poset.clone(), target: poset.clone(), lower: id.clone(), upper: id }
    }
}

fn check_map(name: &str, map: &BTreeMap<String, String>, from: &Poset, to: &Poset) -> Result<()> {
    for x in from.elements() {
        let y = map.get(x).ok_or_else(|| Error::not_total(name, x))?;
        if !to.contains(y) {
            return Err(Error::unknown("poset element", y));
        }
    }
    if let Some(extra) = map.keys().find(|k| !from.contains(k)) {
        return Err(Error::unknown("poset element", extra));
    }
    Ok(())
}

fn monotone(
    report: &mut LawReport<MonotoneViolation>,
    side: Side,
    map: &BTreeMap<String, String>,
    from: &Poset,
    to: &Poset,
) {
    for (a, b) in from.pairs() {
        if !to.leq(&map[&a], &map[&b]) {
            report.push(MonotoneViolation { map: side, a, b });
        }
    }
}

/// Exhaustive over `S × M`: `F(x) <= y ⟺ x <= G(y)`, plus monotonicity of
/// both maps reported separately.
pub fn check_galois(gc: &GaloisConnection) -> Result<GaloisReport> {
    gc.validate()?;
    let mut report = GaloisReport::default();
    monotone(&mut report.monotonicity, Side::Lower, &gc.lower, &gc.source, &gc.target);
    monotone(&mut report.monotonicity, Side::Upper, &gc.upper, &gc.target, &gc.source);
    for x in gc.source.elements() {
        for y in gc.target.elements() {
            let lower_holds = gc.target.leq(&gc.lower[x], y);
            let upper_holds = gc.source.leq(x, &gc.upper[y]);
            if lower_holds != upper_holds {
                report.adjunction.push(AdjunctionViolation { x: x.clone(), y: y.clone(), lower_holds });
            }
        }
    }
    Ok(report)
}

/// Unit `x <= G(F(x))` and counit `F(G(y)) <= y`.
pub fn check_triangles(gc: &GaloisConnection) -> Result<LawReport<TriangleViolation>> {
    gc.validate()?;
    let mut report = LawReport::new();
    for x in gc.source.elements() {
        let gfx = &gc.upper[&gc.lower[x]];
        if !gc.source.leq(x, gfx) {
            report.push(TriangleViolation::Unit { x: x.clone(), round_trip: gfx.clone() });
        }
    }
    for y in gc.target.elements() {
        let fgy = &gc.lower[&gc.upper[y]];
        if !gc.target.leq(fgy, y) {
            report.push(TriangleViolation::Counit { y: y.clone(), round_trip: fgy.clone() });
        }
    }
    Ok(report)
}

/// The only possible right adjoint of `lower`: `G(y) = max{x : F(x) <= y}`.
/// `None` if `lower` is not monotone or some such set has no greatest
/// element.
pub fn right_adjoint_of(
    source: &Poset,
    target: &Poset,
    lower: &BTreeMap<String, String>,
) -> Option<BTreeMap<String, String>> {
    if source.pairs().iter().any(|(a, b)| !target.leq(&lower[a], &lower[b])) {
        return None;
    }
    let mut upper = BTreeMap::new();
    for y in target.elements() {
        let below: Vec<&String> = source.elements().iter().filter(|x| target.leq(&lower[*x], y)).collect();
        let greatest = below.iter().find(|g| below.iter().all(|x| source.leq(x, g)))?;
        upper.insert(y.clone(), (*greatest).clone());
    }
    Some(upper)
}

/// A map `H` out of a partitioned set, expected to be constant on classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientFactorization {
    pub partition: Partition,
    pub meaning: BTreeMap<String, String>,
    pub codomain: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniquenessCertificate {
    /// Per class, how many codomain values satisfy `H̃'([x]) = H(x)` for
    /// every member; uniqueness means all counts are 1.
    pub candidates: BTreeMap<String, usize>,
    /// `|codomain| × |classes|` assignments examined.
    pub examined: usize,
}

impl UniquenessCertificate {
    pub fn is_unique(&self) -> bool {
        self.candidates.values().all(|&c| c == 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    /// `H̃`: class representative ↦ value.
    pub mediator: BTreeMap<String, String>,
    pub certificate: UniquenessCertificate,
}

impl Factorization {
    /// `H̃(π(x))`.
    pub fn apply(&self, partition: &Partition, x: &str) -> Option<&str> {
        self.mediator.get(partition.class_of(x)?).map(String::as_str)
    }
}

/// Builds `H̃` with `H = H̃ ∘ π` and certifies it is the only one.
///
/// Candidate mediators are enumerated class by class: a mediator satisfies
/// the equation iff it does so on every class independently.
pub fn factor_through_meaning(q: &QuotientFactorization) -> Result<Factorization> {
    for x in q.partition.universe() {
        let hx = q.meaning.get(x).ok_or_else(|| Error::not_total("H", x))?;
        if !q.codomain.contains(hx) {
            return Err(Error::unknown("codomain value", hx));
        }
    }
    if let Some(extra) = q.meaning.keys().find(|k| !q.partition.contains(k)) {
        return Err(Error::unknown("state", extra));
    }
    let mut mediator = BTreeMap::new();
    let mut candidates = BTreeMap::new();
    let mut examined = 0;
    for (rep, members) in q.partition.classes() {
        let h_rep = &q.meaning[rep];
        if let Some(y) = members.iter().find(|m| q.meaning[**m] != *h_rep) {
            return Err(Error::NotClassConstant {
                x: rep.to_string(),
                y: y.to_string(),
                hx: h_rep.clone(),
                hy: q.meaning[*y].clone(),
            });
        }
        let count = q.codomain.iter().filter(|d| members.iter().all(|m| q.meaning[*m] == **d)).count();
        examined += q.codomain.len();
        candidates.insert(rep.to_string(), count);
        mediator.insert(rep.to_string(), h_rep.clone());
    }
    Ok(Factorization { mediator, certificate: UniquenessCertificate { candidates, examined } })
}
