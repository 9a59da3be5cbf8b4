//! Canonical text form of a scenario. `parse_syntax(&pretty(s))` yields `s`.

use std::fmt::Write;

use super::ast::*;
use crate::scalar::fmt_short;

fn set(items: &[Ident]) -> String {
    let names: Vec<&str> = items.iter().map(|i| i.as_str()).collect();
    format!("{{{}}}", names.join(", "))
}

fn entries(out: &mut String, keyword: &str, d: &MapDecl) {
    let _ = writeln!(out, "{keyword} {} {{", d.name.node);
    for e in &d.entries {
        let to = match &e.to {
            Target::To(t) => t.as_str(),
            Target::Drop(_) => "drop",
        };
        let _ = writeln!(out, "  {} -> {to}", e.from.node);
    }
    out.push_str("}\n");
}

fn directive(d: &Directive) -> String {
    let mut s = d.keyword().to_string();
    match d {
        Directive::Disambiguate { filter, via, from, steps } => {
            let _ = write!(s, " {}", filter.node);
            if let Some(v) = via {
                let _ = write!(s, " via {}", v.node);
            }
            if let Some(f) = from {
                let _ = write!(s, " from {}", set(f));
            }
            if let Some(n) = steps {
                let _ = write!(s, " steps {}", n.node);
            }
        }
        Directive::IterateScalar { alpha, beta, x0, eps, plot } => {
            let _ = write!(s, " alpha {} beta {}", fmt_short(alpha.node), fmt_short(beta.node));
            if let Some(x) = x0 {
                let _ = write!(s, " x0 {}", fmt_short(x.node));
            }
            if let Some(e) = eps {
                let _ = write!(s, " eps {}", fmt_short(e.node));
            }
            if *plot {
                s.push_str(" plot");
            }
        }
        Directive::FixedPoints { alpha, beta, range, plot } => {
            let _ = write!(
                s,
                " alpha {} beta {} range {}, {}",
                fmt_short(alpha.node),
                fmt_short(beta.node),
                fmt_short(range.0.node),
                fmt_short(range.1.node)
            );
            if *plot {
                s.push_str(" plot");
            }
        }
        Directive::TruthQuery { prop } => {
            let _ = write!(s, " {}", prop.node);
        }
        Directive::CheckLaws => {}
    }
    s
}

pub fn pretty(s: &Scenario) -> String {
    let mut out = format!("scenario {}\n", s.name.node);
    let section = |out: &mut String| out.push('\n');
    if !s.universe.is_empty() || !s.sentences.is_empty() {
        section(&mut out);
        if !s.universe.is_empty() {
            let _ = writeln!(out, "universe {}", set(&s.universe));
        }
        if !s.sentences.is_empty() {
            let _ = writeln!(out, "sentences {}", set(&s.sentences));
        }
    }
    if !s.contexts.is_empty() {
        section(&mut out);
        let chains: Vec<String> =
            s.contexts.iter().map(|c| c.iter().map(|i| i.as_str()).collect::<Vec<_>>().join(" <= ")).collect();
        let _ = writeln!(out, "contexts {{{}}}", chains.join(", "));
        for a in &s.admissible {
            let _ = writeln!(out, "admissible {} = {}", a.context.node, set(&a.meanings));
        }
    } else {
        for a in &s.admissible {
            let _ = writeln!(out, "admissible {} = {}", a.context.node, set(&a.meanings));
        }
    }
    for (keyword, decls) in [("filter", &s.filters), ("map", &s.maps), ("interpret", &s.interpretations)] {
        for d in decls {
            section(&mut out);
            entries(&mut out, keyword, d);
        }
    }
    if !s.equivs.is_empty() {
        section(&mut out);
        out.push_str("equiv {\n");
        for p in &s.equivs {
            let _ = writeln!(out, "  {} ~ {}", p.left.node, p.right.node);
        }
        out.push_str("}\n");
    }
    if !s.props.is_empty() {
        section(&mut out);
        for p in &s.props {
            let _ = writeln!(out, "prop {} = {}", p.name.node, set(&p.meanings));
        }
    }
    if !s.runs.is_empty() {
        section(&mut out);
        for r in &s.runs {
            let _ = writeln!(out, "run {}", directive(&r.node));
        }
    }
    out
}
