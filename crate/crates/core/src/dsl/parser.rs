//! Recursive-descent parser and name resolution for scenario files.
//!
//! ```text
//! file      := "scenario" IDENT block*
//! block     := "universe" set | "sentences" set
//!            | "contexts" "{" chain ("," chain)* "}"
//!            | "admissible" IDENT "=" set
//!            | ("filter" | "map" | "interpret") IDENT "{" (IDENT "->" (IDENT | "drop") ","?)* "}"
//!            | "equiv" "{" (IDENT "~" IDENT ","?)* "}"
//!            | "prop" IDENT "=" set
//!            | "run" directive
//! set       := "{" [IDENT ("," IDENT)*] "}"
//! chain     := IDENT ("<=" IDENT)*
//! directive := "disambiguate" IDENT ["via" IDENT] ["from" set] ["steps" INT]
//!            | "truth-query" IDENT | "check-laws"
//!            | "iterate-scalar" "alpha" NUM "beta" NUM ["x0" NUM] ["eps" NUM] ["plot"]
//!            | "fixed-points" "alpha" NUM "beta" NUM "range" NUM "," NUM ["plot"]
//! ```

use std::collections::BTreeSet;

use super::ast::*;
use super::lexer::{lex, Tok, Token};
use super::{ParseError, ParseErrorKind};
use crate::scalar::ScalarParams;

const BLOCKS: [&str; 10] =
    ["universe", "sentences", "contexts", "admissible", "filter", "map", "interpret", "equiv", "prop", "run"];
const DIRECTIVES: [&str; 5] = ["disambiguate", "iterate-scalar", "fixed-points", "truth-query", "check-laws"];

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == kw)
    }

    fn expected(&self, expected: &[&str]) -> ParseError {
        let t = self.peek();
        let quoted: Vec<String> = expected.iter().map(|e| format!("'{e}'")).collect();
        let msg = match quoted.as_slice() {
            [one] => format!("expected {one}, found {}", t.tok),
            many => format!("expected one of {}, found {}", many.join(", "), t.tok),
        };
        ParseError::new(ParseErrorKind::Syntax, t.span, msg, expected.iter().map(|s| s.to_string()).collect())
    }

    fn keyword(&mut self, kw: &str) -> PResult<Span> {
        if self.at_keyword(kw) {
            Ok(self.bump().span)
        } else {
            Err(self.expected(&[kw]))
        }
    }

    fn punct(&mut self, tok: Tok, name: &str) -> PResult<Span> {
        if self.peek().tok == tok {
            Ok(self.bump().span)
        } else {
            Err(self.expected(&[name]))
        }
    }

    fn ident(&mut self) -> PResult<Ident> {
        match &self.peek().tok {
            Tok::Ident(_) => {
                let t = self.bump();
                let Tok::Ident(s) = t.tok else { unreachable!() };
                Ok(Spanned::new(s, t.span))
            }
            _ => Err(self.expected(&["identifier"])),
        }
    }

    fn number(&mut self) -> PResult<Spanned<f64>> {
        match self.peek().tok {
            Tok::Number(v) if !v.is_finite() => Err(ParseError::new(
                ParseErrorKind::Lexical,
                self.peek().span,
                "number out of range".into(),
                Vec::new(),
            )),
            Tok::Number(v) => Ok(Spanned::new(v, self.bump().span)),
            _ => Err(self.expected(&["number"])),
        }
    }

    fn set(&mut self) -> PResult<Vec<Ident>> {
        self.punct(Tok::LBrace, "{")?;
        let mut items = Vec::new();
        if self.peek().tok != Tok::RBrace {
            loop {
                items.push(self.ident()?);
                if self.peek().tok == Tok::Comma {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        self.punct(Tok::RBrace, "}")?;
        Ok(items)
    }

    fn entries(&mut self, allow_drop: bool) -> PResult<Vec<Entry>> {
        self.punct(Tok::LBrace, "{")?;
        let mut entries = Vec::new();
        while self.peek().tok != Tok::RBrace {
            if !matches!(self.peek().tok, Tok::Ident(_)) {
                return Err(self.expected(&["identifier", "}"]));
            }
            let from = self.ident()?;
            self.punct(Tok::Arrow, "->")?;
            let to = if allow_drop && self.at_keyword("drop") {
                Target::Drop(self.bump().span)
            } else {
                Target::To(self.ident()?)
            };
            entries.push(Entry { from, to });
            if self.peek().tok == Tok::Comma {
                self.bump();
            }
        }
        self.bump();
        Ok(entries)
    }

    fn equiv_pairs(&mut self) -> PResult<Vec<EquivPair>> {
        self.punct(Tok::LBrace, "{")?;
        let mut pairs = Vec::new();
        while self.peek().tok != Tok::RBrace {
            if !matches!(self.peek().tok, Tok::Ident(_)) {
                return Err(self.expected(&["identifier", "}"]));
            }
            let left = self.ident()?;
            self.punct(Tok::Tilde, "~")?;
            let right = self.ident()?;
            pairs.push(EquivPair { left, right });
            if self.peek().tok == Tok::Comma {
                self.bump();
            }
        }
        self.bump();
        Ok(pairs)
    }

    fn chains(&mut self) -> PResult<Vec<Vec<Ident>>> {
        self.punct(Tok::LBrace, "{")?;
        let mut chains = Vec::new();
        loop {
            let mut chain = vec![self.ident()?];
            while self.peek().tok == Tok::Le {
                self.bump();
                chain.push(self.ident()?);
            }
            chains.push(chain);
            match self.peek().tok {
                Tok::Comma => {
                    self.bump();
                }
                Tok::RBrace => {
                    self.bump();
                    return Ok(chains);
                }
                _ => return Err(self.expected(&["<=", ",", "}"])),
            }
        }
    }

    fn directive(&mut self) -> PResult<Spanned<Directive>> {
        let span = self.peek().span;
        let kw = match &self.peek().tok {
            Tok::Ident(s) if DIRECTIVES.contains(&s.as_str()) => s.clone(),
            _ => return Err(self.expected(&DIRECTIVES)),
        };
        self.bump();
        let d = match kw.as_str() {
            "disambiguate" => {
                let filter = self.ident()?;
                let (mut via, mut from, mut steps) = (None, None, None);
                loop {
                    if self.at_keyword("via") && via.is_none() {
                        self.bump();
                        via = Some(self.ident()?);
                    } else if self.at_keyword("from") && from.is_none() {
                        self.bump();
                        from = Some(self.set()?);
                    } else if self.at_keyword("steps") && steps.is_none() {
                        self.bump();
                        let n = self.number()?;
                        if n.node < 1.0 || n.node.fract() != 0.0 || n.node > 1e9 {
                            return Err(ParseError::new(
                                ParseErrorKind::Syntax,
                                n.span,
                                format!("step bound must be a positive integer, found {}", n.node),
                                vec!["integer".into()],
                            ));
                        }
                        steps = Some(Spanned::new(n.node as u64, n.span));
                    } else {
                        break;
                    }
                }
                Directive::Disambiguate { filter, via, from, steps }
            }
            "iterate-scalar" => {
                self.keyword("alpha")?;
                let alpha = self.number()?;
                self.keyword("beta")?;
                let beta = self.number()?;
                let (mut x0, mut eps, mut plot) = (None, None, false);
                loop {
                    if self.at_keyword("x0") && x0.is_none() {
                        self.bump();
                        x0 = Some(self.number()?);
                    } else if self.at_keyword("eps") && eps.is_none() {
                        self.bump();
                        eps = Some(self.number()?);
                    } else if self.at_keyword("plot") && !plot {
                        self.bump();
                        plot = true;
                    } else {
                        break;
                    }
                }
                Directive::IterateScalar { alpha, beta, x0, eps, plot }
            }
            "fixed-points" => {
                self.keyword("alpha")?;
                let alpha = self.number()?;
                self.keyword("beta")?;
                let beta = self.number()?;
                self.keyword("range")?;
                let lo = self.number()?;
                self.punct(Tok::Comma, ",")?;
                let hi = self.number()?;
                let plot = self.at_keyword("plot");
                if plot {
                    self.bump();
                }
                Directive::FixedPoints { alpha, beta, range: (lo, hi), plot }
            }
            "truth-query" => Directive::TruthQuery { prop: self.ident()? },
            _ => Directive::CheckLaws,
        };
        Ok(Spanned::new(d, span))
    }

    fn file(&mut self) -> PResult<Scenario> {
        self.keyword("scenario")?;
        let name = self.ident()?;
        let mut s = Scenario {
            name,
            universe: Vec::new(),
            sentences: Vec::new(),
            contexts: Vec::new(),
            admissible: Vec::new(),
            filters: Vec::new(),
            maps: Vec::new(),
            interpretations: Vec::new(),
            equivs: Vec::new(),
            props: Vec::new(),
            runs: Vec::new(),
        };
        loop {
            let kw = match &self.peek().tok {
                Tok::Eof => return Ok(s),
                Tok::Ident(k) if BLOCKS.contains(&k.as_str()) => k.clone(),
                _ => return Err(self.expected(&BLOCKS)),
            };
            self.bump();
            match kw.as_str() {
                "universe" => s.universe.extend(self.set()?),
                "sentences" => s.sentences.extend(self.set()?),
                "contexts" => s.contexts.extend(self.chains()?),
                "admissible" => {
                    let context = self.ident()?;
                    self.punct(Tok::Eq, "=")?;
                    s.admissible.push(AdmissibleDecl { context, meanings: self.set()? });
                }
                "filter" => {
                    let name = self.ident()?;
                    s.filters.push(MapDecl { name, entries: self.entries(true)? });
                }
                "map" => {
                    let name = self.ident()?;
                    s.maps.push(MapDecl { name, entries: self.entries(false)? });
                }
                "interpret" => {
                    let name = self.ident()?;
                    s.interpretations.push(MapDecl { name, entries: self.entries(false)? });
                }
                "equiv" => s.equivs.extend(self.equiv_pairs()?),
                "prop" => {
                    let name = self.ident()?;
                    self.punct(Tok::Eq, "=")?;
                    s.props.push(PropDecl { name, meanings: self.set()? });
                }
                _ => s.runs.push(self.directive()?),
            }
        }
    }
}

/// Syntax only; names are not resolved.
pub fn parse_syntax(text: &str) -> Result<Scenario, ParseError> {
    let toks = lex(text)?;
    Parser { toks, pos: 0 }.file()
}

fn unresolved(what: &str, id: &Ident) -> ParseError {
    ParseError::new(ParseErrorKind::Resolution, id.span, format!("undefined {what} `{}`", id.node), Vec::new())
}

fn resolution(span: Span, message: String) -> ParseError {
    ParseError::new(ParseErrorKind::Resolution, span, message, Vec::new())
}

fn declare<'a>(seen: &mut BTreeSet<&'a str>, id: &'a Ident, what: &str) -> Result<(), ParseError> {
    if !seen.insert(id.as_str()) {
        return Err(resolution(id.span, format!("duplicate {what} `{}`", id.node)));
    }
    Ok(())
}

fn map_names<'a>(decls: &'a [MapDecl], what: &str) -> Result<BTreeSet<&'a str>, ParseError> {
    let mut names = BTreeSet::new();
    for d in decls {
        declare(&mut names, &d.name, what)?;
    }
    Ok(names)
}

fn check_entries(
    decl: &MapDecl,
    what: &str,
    domain: &BTreeSet<&str>,
    domain_what: &str,
    codomain: &BTreeSet<&str>,
) -> Result<(), ParseError> {
    let mut seen = BTreeSet::new();
    for e in &decl.entries {
        if !domain.contains(e.from.as_str()) {
            return Err(unresolved(domain_what, &e.from));
        }
        if !seen.insert(e.from.as_str()) {
            return Err(resolution(
                e.from.span,
                format!("{what} `{}` maps `{}` more than once", decl.name.node, e.from.node),
            ));
        }
        if let Target::To(to) = &e.to {
            if !codomain.contains(to.as_str()) {
                return Err(unresolved("meaning", to));
            }
        }
    }
    Ok(())
}

fn scalar_params(alpha: &Spanned<f64>, beta: &Spanned<f64>, eps: Option<&Spanned<f64>>) -> Result<(), ParseError> {
    let p = ScalarParams::new(alpha.node, beta.node).map_err(|e| {
        let span = if alpha.node < 0.0 { alpha.span } else { beta.span };
        resolution(span, e.to_string())
    })?;
    if let Some(eps) = eps {
        p.with_epsilon(eps.node).map_err(|e| resolution(eps.span, e.to_string()))?;
    }
    Ok(())
}

/// Checks that every referenced name is declared and every declaration is
/// well formed.
pub fn resolve(s: &Scenario) -> Result<(), ParseError> {
    let mut universe = BTreeSet::new();
    for m in &s.universe {
        declare(&mut universe, m, "meaning")?;
    }
    let mut sentences = BTreeSet::new();
    for m in &s.sentences {
        if universe.contains(m.as_str()) {
            return Err(resolution(m.span, format!("`{}` is declared both as meaning and as sentence", m.node)));
        }
        declare(&mut sentences, m, "sentence")?;
    }
    for id in s.universe.iter().chain(&s.sentences) {
        if id.node == "drop" {
            return Err(resolution(id.span, "`drop` is reserved".into()));
        }
    }

    let mut contexts: Vec<&Ident> = Vec::new();
    for chain in &s.contexts {
        for c in chain {
            if !contexts.iter().any(|d| d.node == c.node) {
                contexts.push(c);
            }
        }
    }
    if let Some(Err(e)) = super::model::context_poset(s) {
        let span = match &e {
            crate::Error::Antisymmetry { a, .. } => contexts.iter().find(|c| &c.node == a).map(|c| c.span),
            _ => None,
        };
        return Err(resolution(span.unwrap_or(s.contexts[0][0].span), format!("invalid context order: {e}")));
    }
    let context_names: BTreeSet<&str> = contexts.iter().map(|c| c.as_str()).collect();
    let mut with_admissible = BTreeSet::new();
    for a in &s.admissible {
        if !context_names.contains(a.context.as_str()) {
            return Err(unresolved("context", &a.context));
        }
        if !with_admissible.insert(a.context.as_str()) {
            return Err(resolution(a.context.span, format!("duplicate admissible set for `{}`", a.context.node)));
        }
        for m in &a.meanings {
            if !universe.contains(m.as_str()) {
                return Err(unresolved("meaning", m));
            }
        }
    }

    let filters = map_names(&s.filters, "filter")?;
    for f in &s.filters {
        check_entries(f, "filter", &universe, "meaning", &universe)?;
    }
    let maps = map_names(&s.maps, "map")?;
    for m in &s.maps {
        check_entries(m, "map", &universe, "meaning", &universe)?;
    }
    map_names(&s.interpretations, "interpretation")?;
    for i in &s.interpretations {
        check_entries(i, "interpretation", &sentences, "sentence", &universe)?;
        if let Some(missing) = s.sentences.iter().find(|x| !i.entries.iter().any(|e| e.from.node == x.node)) {
            return Err(resolution(
                i.name.span,
                format!("interpretation `{}` has no value for sentence `{}`", i.name.node, missing.node),
            ));
        }
    }

    for p in &s.equivs {
        let known = |id: &Ident| universe.contains(id.as_str()) || sentences.contains(id.as_str());
        for id in [&p.left, &p.right] {
            if !known(id) {
                return Err(unresolved("meaning or sentence", id));
            }
        }
        if universe.contains(p.left.as_str()) != universe.contains(p.right.as_str()) {
            return Err(resolution(
                p.left.span,
                format!(
                    "cannot relate `{}` and `{}`: one is a meaning, the other a sentence",
                    p.left.node, p.right.node
                ),
            ));
        }
    }

    let props = map_names(
        &s.props.iter().map(|p| MapDecl { name: p.name.clone(), entries: Vec::new() }).collect::<Vec<_>>(),
        "proposition",
    )?
    .into_iter()
    .map(str::to_string)
    .collect::<BTreeSet<String>>();
    for p in &s.props {
        for m in &p.meanings {
            if !universe.contains(m.as_str()) {
                return Err(unresolved("meaning", m));
            }
        }
    }

    for r in &s.runs {
        match &r.node {
            Directive::Disambiguate { filter, via, from, .. } => {
                if !filters.contains(filter.as_str()) {
                    return Err(unresolved("filter", filter));
                }
                if let Some(v) = via {
                    if !maps.contains(v.as_str()) {
                        return Err(unresolved("map", v));
                    }
                }
                for m in from.iter().flatten() {
                    if !universe.contains(m.as_str()) {
                        return Err(unresolved("meaning", m));
                    }
                }
            }
            Directive::TruthQuery { prop } => {
                if !props.contains(prop.as_str()) {
                    return Err(unresolved("proposition", prop));
                }
                if s.contexts.is_empty() {
                    return Err(resolution(r.span, "truth-query needs a contexts block".into()));
                }
            }
            Directive::IterateScalar { alpha, beta, eps, .. } => scalar_params(alpha, beta, eps.as_ref())?,
            Directive::FixedPoints { alpha, beta, range, .. } => {
                scalar_params(alpha, beta, None)?;
                if range.0.node >= range.1.node {
                    return Err(resolution(range.0.span, format!("empty range [{}, {}]", range.0.node, range.1.node)));
                }
            }
            Directive::CheckLaws => {}
        }
    }
    if s.universe.is_empty() && s.runs.iter().any(|r| matches!(r.node, Directive::Disambiguate { .. })) {
        return Err(resolution(s.name.span, "disambiguate needs a non-empty universe".into()));
    }
    Ok(())
}
