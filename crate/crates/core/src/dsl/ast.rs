use std::fmt;

/// 1-based source position.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// A node with its source position. Equality ignores the position, so two
/// scenarios compare equal when they have the same structure.
#[derive(Debug, Clone)]
pub struct Spanned<T> {
    pub node: T,
    pub span: Span,
}

impl<T> Spanned<T> {
    pub fn new(node: T, span: Span) -> Self {
        Spanned { node, span }
    }
}

impl<T: PartialEq> PartialEq for Spanned<T> {
    fn eq(&self, other: &Self) -> bool {
        self.node == other.node
    }
}

pub type Ident = Spanned<String>;

impl Ident {
    pub fn as_str(&self) -> &str {
        &self.node
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibleDecl {
    pub context: Ident,
    pub meanings: Vec<Ident>,
}

#[derive(Debug, Clone)]
pub enum Target {
    To(Ident),
    Drop(Span),
}

impl PartialEq for Target {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Target::To(a), Target::To(b)) => a == b,
            (Target::Drop(_), Target::Drop(_)) => true,
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub from: Ident,
    pub to: Target,
}

/// `filter`, `map` and `interpret` blocks. Only filters may use `drop`.
#[derive(Debug, Clone, PartialEq)]
pub struct MapDecl {
    pub name: Ident,
    pub entries: Vec<Entry>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropDecl {
    pub name: Ident,
    pub meanings: Vec<Ident>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivPair {
    pub left: Ident,
    pub right: Ident,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Directive {
    /// `disambiguate FILTER [via MAP] [from {…}] [steps N]`
    Disambiguate { filter: Ident, via: Option<Ident>, from: Option<Vec<Ident>>, steps: Option<Spanned<u64>> },
    /// `iterate-scalar alpha A beta B [x0 X] [eps E] [plot]`
    IterateScalar {
        alpha: Spanned<f64>,
        beta: Spanned<f64>,
        x0: Option<Spanned<f64>>,
        eps: Option<Spanned<f64>>,
        plot: bool,
    },
    /// `fixed-points alpha A beta B range LO, HI [plot]`
    FixedPoints { alpha: Spanned<f64>, beta: Spanned<f64>, range: (Spanned<f64>, Spanned<f64>), plot: bool },
    /// `truth-query PROP`
    TruthQuery { prop: Ident },
    /// `check-laws`
    CheckLaws,
}

impl Directive {
    pub fn keyword(&self) -> &'static str {
        match self {
            Directive::Disambiguate { .. } => "disambiguate",
            Directive::IterateScalar { .. } => "iterate-scalar",
            Directive::FixedPoints { .. } => "fixed-points",
            Directive::TruthQuery { .. } => "truth-query",
            Directive::CheckLaws => "check-laws",
        }
    }
}

/// A parsed and resolved scenario file.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: Ident,
    pub universe: Vec<Ident>,
    pub sentences: Vec<Ident>,
    /// Each chain `a <= b <= c`; a single element declares an isolated context.
    pub contexts: Vec<Vec<Ident>>,
    pub admissible: Vec<AdmissibleDecl>,
    pub filters: Vec<MapDecl>,
    pub maps: Vec<MapDecl>,
    pub interpretations: Vec<MapDecl>,
    pub equivs: Vec<EquivPair>,
    pub props: Vec<PropDecl>,
    pub runs: Vec<Spanned<Directive>>,
}
