//! Finite categories, functors and exhaustive law checking.
//!
//! Objects and morphisms are opaque string identifiers. Composition is a
//! finite table keyed by `(g, f)` meaning `g ∘ f`. Checks enumerate every
//! instance of every law and report all violations; sizes are assumed small
//! enough for that (on the order of 10^4 composable pairs).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::order::Poset;
use crate::{Error, LawReport, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    pub id: String,
    pub source: String,
    pub target: String,
}

impl Morphism {
    pub fn new(id: impl Into<String>, source: impl Into<String>, target: impl Into<String>) -> Self {
        Morphism { id: id.into(), source: source.into(), target: target.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteCategory {
    pub objects: Vec<String>,
    pub morphisms: Vec<Morphism>,
    /// `(g, f) ↦ g ∘ f`.
    pub composition: BTreeMap<(String, String), String>,
    pub identities: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CategoryViolation {
    IdentityNotEndo { object: String, identity: String },
    MissingComposite { g: String, f: String },
    SpuriousComposite { g: String, f: String },
    CompositeTyping { g: String, f: String, composite: String },
    LeftIdentity { f: String },
    RightIdentity { f: String },
    Associativity { h: String, g: String, f: String },
}

impl fmt::Display for CategoryViolation {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        use CategoryViolation::*;
        match self {
            IdentityNotEndo { object, identity } => {
                write!(out, "identity `{identity}` of `{object}` is not an endomorphism of it")
            }
            MissingComposite { g, f } => write!(out, "composite `{g}` ∘ `{f}` is undefined"),
            SpuriousComposite { g, f } => {
                write!(out, "composite `{g}` ∘ `{f}` is defined on a non-composable pair")
            }
            CompositeTyping { g, f, composite } => {
                write!(out, "`{g}` ∘ `{f}` = `{composite}` has the wrong source or target")
            }
            LeftIdentity { f } => write!(out, "id ∘ `{f}` ≠ `{f}`"),
            RightIdentity { f } => write!(out, "`{f}` ∘ id ≠ `{f}`"),
            Associativity { h, g, f } => {
                write!(out, "`{h}` ∘ (`{g}` ∘ `{f}`) ≠ (`{h}` ∘ `{g}`) ∘ `{f}`")
            }
        }
    }
}

impl FiniteCategory {
    /// Builds a category and checks it for dangling identifiers. Law
    /// violations are left to [`check_category`].
    pub fn new(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        composition: BTreeMap<(String, String), String>,
        identities: BTreeMap<String, String>,
    ) -> Result<Self> {
        let c = FiniteCategory { objects, morphisms, composition, identities };
        c.validate()?;
        Ok(c)
    }

    /// The category with one object `object` and only its identity `id`.
    pub fn terminal(object: &str, id: &str) -> Self {
        let mut composition = BTreeMap::new();
        composition.insert((id.to_string(), id.to_string()), id.to_string());
        FiniteCategory {
            objects: vec![object.to_string()],
            morphisms: vec![Morphism::new(id, object, object)],
            composition,
            identities: BTreeMap::from([(object.to_string(), id.to_string())]),
        }
    }

    /// Structural well-formedness: non-empty, duplicate-free, and every
    /// identifier referenced by a morphism, identity or composite resolves.
    pub fn validate(&self) -> Result<()> {
        if self.objects.is_empty() {
            return Err(Error::Empty { kind: "object" });
        }
        if self.morphisms.is_empty() {
            return Err(Error::Empty { kind: "morphism" });
        }
        let mut objects = BTreeSet::new();
        for o in &self.objects {
            if !objects.insert(o.as_str()) {
                return Err(Error::Duplicate { kind: "object", id: o.clone() });
            }
        }
        let mut ids = BTreeSet::new();
        for m in &self.morphisms {
            if !ids.insert(m.id.as_str()) {
                return Err(Error::Duplicate { kind: "morphism", id: m.id.clone() });
            }
            for end in [&m.source, &m.target] {
                if !objects.contains(end.as_str()) {
                    return Err(Error::unknown("object", end));
                }
            }
        }
        for (o, id) in &self.identities {
            if !objects.contains(o.as_str()) {
                return Err(Error::unknown("object", o));
            }
            if !ids.contains(id.as_str()) {
                return Err(Error::unknown("morphism", id));
            }
        }
        for o in &self.objects {
            if !self.identities.contains_key(o) {
                return Err(Error::not_total("identity map", o));
            }
        }
        for ((g, f), gf) in &self.composition {
            for m in [g, f, gf] {
                if !ids.contains(m.as_str()) {
                    return Err(Error::unknown("morphism", m));
                }
            }
        }
        Ok(())
    }

    pub fn morphism(&self, id: &str) -> Option<&Morphism> {
        self.morphisms.iter().find(|m| m.id == id)
    }

    pub fn identity(&self, object: &str) -> Option<&str> {
        self.identities.get(object).map(String::as_str)
    }

    pub fn compose(&self, g: &str, f: &str) -> Option<&str> {
        self.composition.get(&(g.to_string(), f.to_string())).map(String::as_str)
    }

    /// All pairs `(g, f)` with `target(f) = source(g)`.
    pub fn composable_pairs(&self) -> Vec<(&Morphism, &Morphism)> {
        let mut out = Vec::new();
        for f in &self.morphisms {
            for g in &self.morphisms {
                if f.target == g.source {
                    out.push((g, f));
                }
            }
        }
        out
    }
}

/// Checks identity, composition-domain and associativity laws exhaustively.
pub fn check_category(c: &FiniteCategory) -> Result<LawReport<CategoryViolation>> {
    c.validate()?;
    let mut report = LawReport::new();
    let by_id: BTreeMap<&str, &Morphism> = c.morphisms.iter().map(|m| (m.id.as_str(), m)).collect();

    for (object, id) in &c.identities {
        let m = by_id[id.as_str()];
        if m.source != *object || m.target != *object {
            report.push(CategoryViolation::IdentityNotEndo { object: object.clone(), identity: id.clone() });
        }
    }

    let mut composable = BTreeSet::new();
    for (g, f) in c.composable_pairs() {
        composable.insert((g.id.as_str(), f.id.as_str()));
        match c.compose(&g.id, &f.id) {
            None => report.push(CategoryViolation::MissingComposite { g: g.id.clone(), f: f.id.clone() }),
            Some(gf) => {
                let m = by_id[gf];
                if m.source != f.source || m.target != g.target {
                    report.push(CategoryViolation::CompositeTyping {
                        g: g.id.clone(),
                        f: f.id.clone(),
                        composite: gf.to_string(),
                    });
                }
            }
        }
    }
    for (g, f) in c.composition.keys() {
        if !composable.contains(&(g.as_str(), f.as_str())) {
            report.push(CategoryViolation::SpuriousComposite { g: g.clone(), f: f.clone() });
        }
    }

    for f in &c.morphisms {
        let id_t = &c.identities[&f.target];
        if c.compose(id_t, &f.id) != Some(f.id.as_str()) {
            report.push(CategoryViolation::LeftIdentity { f: f.id.clone() });
        }
        let id_s = &c.identities[&f.source];
        if c.compose(&f.id, id_s) != Some(f.id.as_str()) {
            report.push(CategoryViolation::RightIdentity { f: f.id.clone() });
        }
    }

    // Triples whose inner composites are undefined were already reported above.
    for f in &c.morphisms {
        for g in c.morphisms.iter().filter(|g| g.source == f.target) {
            for h in c.morphisms.iter().filter(|h| h.source == g.target) {
                let left = c.compose(&g.id, &f.id).and_then(|gf| c.compose(&h.id, gf));
                let right = c.compose(&h.id, &g.id).and_then(|hg| c.compose(hg, &f.id));
                if let (Some(l), Some(r)) = (left, right) {
                    if l != r {
                        report.push(CategoryViolation::Associativity {
                            h: h.id.clone(),
                            g: g.id.clone(),
                            f: f.id.clone(),
                        });
                    }
                }
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variance {
    Covariant,
    Contravariant,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctorData {
    pub source: FiniteCategory,
    pub target: FiniteCategory,
    pub object_map: BTreeMap<String, String>,
    pub morphism_map: BTreeMap<String, String>,
    pub variance: Variance,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FunctorViolation {
    /// `F(f)` does not run between the images of `f`'s endpoints.
    MorphismTyping {
        f: String,
        image: String,
    },
    Identity {
        object: String,
    },
    Composition {
        g: String,
        f: String,
    },
}

impl fmt::Display for FunctorViolation {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctorViolation::MorphismTyping { f, image } => {
                write!(out, "F(`{f}`) = `{image}` does not connect the images of its endpoints")
            }
            FunctorViolation::Identity { object } => write!(out, "F(id_`{object}`) ≠ id_F(`{object}`)"),
            FunctorViolation::Composition { g, f } => {
                write!(out, "F(`{g}` ∘ `{f}`) does not match the composite of the images")
            }
        }
    }
}

impl FunctorData {
    pub fn identity(c: &FiniteCategory) -> Self {
        FunctorData {
            source: c.clone(),
            target: c.clone(),
            object_map: c.objects.iter().map(|o| (o.clone(), o.clone())).collect(),
            morphism_map: c.morphisms.iter().map(|m| (m.id.clone(), m.id.clone())).collect(),
            variance: Variance::Covariant,
        }
    }

    /// Sends everything in `c` to the single object of `target` and its identity.
    pub fn constant(c: &FiniteCategory, target: &FiniteCategory) -> Result<Self> {
        let object = target.objects.first().ok_or(Error::Empty { kind: "object" })?;
        let id = target.identity(object).ok_or_else(|| Error::not_total("identity map", object))?;
        Ok(FunctorData {
            source: c.clone(),
            target: target.clone(),
            object_map: c.objects.iter().map(|o| (o.clone(), object.clone())).collect(),
            morphism_map: c.morphisms.iter().map(|m| (m.id.clone(), id.to_string())).collect(),
            variance: Variance::Covariant,
        })
    }
}

/// Checks functoriality: typing of morphism images, identity preservation
/// and composition preservation (order reversed for contravariant functors).
pub fn check_functor(functor: &FunctorData) -> Result<LawReport<FunctorViolation>> {
    if !check_category(&functor.source)?.is_pass() {
        return Err(Error::LawPrecondition("source category"));
    }
    if !check_category(&functor.target)?.is_pass() {
        return Err(Error::LawPrecondition("target category"));
    }
    let (src, tgt) = (&functor.source, &functor.target);
    for o in &src.objects {
        let image = functor.object_map.get(o).ok_or_else(|| Error::not_total("object map", o))?;
        if !tgt.objects.contains(image) {
            return Err(Error::unknown("object", image));
        }
    }
    for m in &src.morphisms {
        let image = functor.morphism_map.get(&m.id).ok_or_else(|| Error::not_total("morphism map", &m.id))?;
        if tgt.morphism(image).is_none() {
            return Err(Error::unknown("morphism", image));
        }
    }

    let contra = functor.variance == Variance::Contravariant;
    let mut report = LawReport::new();
    for m in &src.morphisms {
        let image = tgt.morphism(&functor.morphism_map[&m.id]).expect("checked above");
        let (s, t) = (&functor.object_map[&m.source], &functor.object_map[&m.target]);
        let ok =
            if contra { image.source == *t && image.target == *s } else { image.source == *s && image.target == *t };
        if !ok {
            report.push(FunctorViolation::MorphismTyping { f: m.id.clone(), image: image.id.clone() });
        }
    }
    for o in &src.objects {
        let fid = &functor.morphism_map[&src.identities[o]];
        if tgt.identity(&functor.object_map[o]) != Some(fid.as_str()) {
            report.push(FunctorViolation::Identity { object: o.clone() });
        }
    }
    for (g, f) in src.composable_pairs() {
        let gf = src.compose(&g.id, &f.id).expect("source passed its law check");
        let lhs = &functor.morphism_map[gf];
        let (fg_img, ff_img) = (&functor.morphism_map[&g.id], &functor.morphism_map[&f.id]);
        let rhs = if contra { tgt.compose(ff_img, fg_img) } else { tgt.compose(fg_img, ff_img) };
        if rhs != Some(lhs.as_str()) {
            report.push(FunctorViolation::Composition { g: g.id.clone(), f: f.id.clone() });
        }
    }
    Ok(report)
}

/// Identifier of the unique morphism `a → b` in a poset-category.
pub fn poset_morphism_id(a: &str, b: &str) -> String {
    if a == b {
        format!("id_{a}")
    } else {
        format!("{a}->{b}")
    }
}

/// The category with one morphism `a → b` for every `a <= b` in the closure
/// of `pairs`.
pub fn poset_as_category<E, P, A, B>(elements: E, pairs: P) -> Result<FiniteCategory>
where
    E: IntoIterator,
    E::Item: Into<String>,
    P: IntoIterator<Item = (A, B)>,
    A: AsRef<str>,
    B: AsRef<str>,
{
    Ok(category_of(&Poset::new(elements, pairs)?))
}

pub fn category_of(poset: &Poset) -> FiniteCategory {
    let pairs = poset.pairs();
    let morphisms = pairs.iter().map(|(a, b)| Morphism::new(poset_morphism_id(a, b), a, b)).collect();
    let identities = poset.elements().iter().map(|a| (a.clone(), poset_morphism_id(a, a))).collect();
    let mut composition = BTreeMap::new();
    for (a, b) in &pairs {
        for (b2, c) in &pairs {
            if b == b2 {
                composition.insert((poset_morphism_id(b, c), poset_morphism_id(a, b)), poset_morphism_id(a, c));
            }
        }
    }
    FiniteCategory { objects: poset.elements().to_vec(), morphisms, composition, identities }
}
