//! Line-based text formats for models, systems and posets.
//!
//! Blank lines and `#` comments are ignored everywhere.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::completion::FinitePoset;
use crate::kripke::{KripkeModel, StateSet, MAX_STATES};
use crate::syntax::{parse_term_with_vars, print_term};
use crate::systems::System;
use crate::term::Name;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {msg}")]
pub struct FormatError {
    pub line: usize,
    pub msg: String,
}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError {
        line,
        msg: msg.into(),
    })
}

/// Non-empty lines with comments stripped, numbered from 1.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

/// Splits `head rest: body` into (`head rest`, `body`).
fn directive(line: usize, l: &str) -> Result<(&str, &str), FormatError> {
    match l.split_once(':') {
        Some((h, b)) => Ok((h.trim(), b.trim())),
        None => err(line, format!("expected `directive: ...`, found `{l}`")),
    }
}

fn is_ident(s: &str) -> bool {
    let mut cs = s.chars();
    cs.next().is_some_and(|c| c.is_ascii_lowercase())
        && cs.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

/// Parses `states:` / `rel a:` / `val p:` lines, in that order. With an
/// alphabet, relations on other actions are rejected; every alphabet action
/// is declared (possibly empty).
pub fn parse_model(
    text: &str,
    alphabet: Option<&BTreeSet<Name>>,
) -> Result<KripkeModel, FormatError> {
    let mut model: Option<KripkeModel> = None;
    let mut stage = 0;
    for (no, l) in lines(text) {
        let (head, body) = directive(no, l)?;
        let mut words = head.split_whitespace();
        let kind = words.next().unwrap_or("");
        let arg = words.next();
        if words.next().is_some() {
            return err(no, format!("malformed directive `{head}`"));
        }
        match (kind, arg) {
            ("states", None) => {
                if stage != 0 {
                    return err(no, "`states:` must come first and only once");
                }
                stage = 1;
                let names: Vec<Name> = body.split_whitespace().map(str::to_string).collect();
                if names.len() > MAX_STATES {
                    return err(
                        no,
                        format!("{} states exceed the limit of {MAX_STATES}", names.len()),
                    );
                }
                let distinct: BTreeSet<&Name> = names.iter().collect();
                if distinct.len() != names.len() {
                    return err(no, "duplicate state name");
                }
                if let Some(bad) = names.iter().find(|n| !is_ident(n)) {
                    return err(no, format!("invalid state name `{bad}`"));
                }
                let mut m = KripkeModel::new(names).expect("bounded");
                for a in alphabet.into_iter().flatten() {
                    m.declare_action(a);
                }
                model = Some(m);
            }
            ("rel", Some(action)) => {
                if stage == 0 || stage > 2 {
                    return err(
                        no,
                        "`rel` lines must follow `states:` and precede `val` lines",
                    );
                }
                stage = 2;
                if !is_ident(action) {
                    return err(no, format!("invalid action name `{action}`"));
                }
                if alphabet.is_some_and(|a| !a.contains(action)) {
                    return err(no, format!("unknown action `{action}`"));
                }
                let m = model.as_mut().expect("states seen");
                m.declare_action(action);
                for edge in body.split_whitespace() {
                    let Some((s, t)) = edge.split_once("->") else {
                        return err(no, format!("expected `s->t`, found `{edge}`"));
                    };
                    let (Some(s), Some(t)) = (m.state_index(s), m.state_index(t)) else {
                        return err(no, format!("unknown state in `{edge}`"));
                    };
                    m.add_edge(action, s, t);
                }
            }
            ("val", Some(gen)) => {
                if stage == 0 {
                    return err(no, "`val` lines must follow `states:`");
                }
                stage = 3;
                if !is_ident(gen) {
                    return err(no, format!("invalid generator name `{gen}`"));
                }
                let m = model.as_mut().expect("states seen");
                let mut set = StateSet::EMPTY;
                for s in body.split_whitespace() {
                    let Some(i) = m.state_index(s) else {
                        return err(no, format!("unknown state `{s}`"));
                    };
                    set = set.union(StateSet::singleton(i));
                }
                m.set_val(gen, set);
            }
            _ => return err(no, format!("unknown directive `{head}`")),
        }
    }
    model.ok_or(FormatError {
        line: 0,
        msg: "missing `states:` line".into(),
    })
}

pub fn print_model(m: &KripkeModel) -> String {
    let mut out = format!("states: {}\n", m.states.join(" "));
    for (a, succ) in &m.relations {
        let edges: Vec<String> = succ
            .iter()
            .enumerate()
            .flat_map(|(s, next)| next.iter().map(move |t| (s, t)))
            .map(|(s, t)| format!("{}->{}", m.states[s], m.states[t]))
            .collect();
        out.push_str(&format!("rel {a}: {}\n", edges.join(" ")).replace(": \n", ":\n"));
    }
    for (p, set) in &m.valuation {
        let names: Vec<&str> = set
            .iter()
            .filter(|i| *i < m.len())
            .map(|i| m.states[i].as_str())
            .collect();
        out.push_str(&format!("val {p}: {}\n", names.join(" ")).replace(": \n", ":\n"));
    }
    out
}

/// Parses `bound: x y` / `free: z` headers followed by `x := term` lines.
/// Without a `bound:` header the bound variables are the left-hand sides
/// in order of appearance.
pub fn parse_system(text: &str) -> Result<System, FormatError> {
    let mut bound: Option<Vec<Name>> = None;
    let mut free: Vec<Name> = Vec::new();
    let mut lhs: Vec<Name> = Vec::new();
    let mut raw: Vec<(usize, Name, &str)> = Vec::new();
    for (no, l) in lines(text) {
        if let Some((x, rhs)) = l.split_once(":=") {
            let x = x.trim();
            if !is_ident(x) {
                return err(no, format!("invalid variable `{x}`"));
            }
            if lhs.iter().any(|y| y == x) {
                return err(no, format!("second equation for `{x}`"));
            }
            lhs.push(x.to_string());
            raw.push((no, x.to_string(), rhs.trim()));
            continue;
        }
        let (head, body) = directive(no, l)?;
        if !raw.is_empty() {
            return err(no, "headers must precede equations");
        }
        let names: Vec<Name> = body.split_whitespace().map(str::to_string).collect();
        if let Some(bad) = names.iter().find(|n| !is_ident(n)) {
            return err(no, format!("invalid variable `{bad}`"));
        }
        match head {
            "bound" if bound.is_none() => bound = Some(names),
            "free" => free.extend(names),
            _ => return err(no, format!("unknown directive `{head}`")),
        }
    }
    let bound = bound.unwrap_or_else(|| lhs.clone());
    let vars: BTreeSet<Name> = bound.iter().chain(&free).cloned().collect();
    let mut equations = BTreeMap::new();
    for (no, x, rhs) in raw {
        if !bound.contains(&x) {
            return err(no, format!("`{x}` is not a bound variable"));
        }
        let t = parse_term_with_vars(rhs, &vars).map_err(|e| FormatError {
            line: no,
            msg: e.to_string(),
        })?;
        equations.insert(x, t);
    }
    System::new(bound, free, equations).map_err(|e| FormatError {
        line: 0,
        msg: e.to_string(),
    })
}

pub fn print_system(s: &System) -> String {
    let mut out = format!("bound: {}\n", s.bound.join(" "));
    if !s.free.is_empty() {
        out.push_str(&format!("free: {}\n", s.free.join(" ")));
    }
    for x in &s.bound {
        out.push_str(&format!("{x} := {}\n", print_term(&s.equations[x])));
    }
    out
}

/// Parses `elem: a b c`, then `leq: a<b b<c` (any number of lines, closed
/// reflexively and transitively), then optional `op f: a->b ...` maps.
/// Unlisted points of an operation map to themselves.
pub fn parse_poset(text: &str) -> Result<FinitePoset, FormatError> {
    let mut elems: Option<Vec<Name>> = None;
    let mut pairs = Vec::new();
    let mut ops: BTreeMap<Name, (usize, Vec<(usize, usize)>)> = BTreeMap::new();
    let mut seen_op = false;
    for (no, l) in lines(text) {
        let (head, body) = directive(no, l)?;
        let mut words = head.split_whitespace();
        let kind = words.next().unwrap_or("");
        let arg = words.next();
        let lookup = |e: &Vec<Name>, x: &str| -> Result<usize, FormatError> {
            e.iter()
                .position(|y| y == x)
                .map_or_else(|| err(no, format!("unknown element `{x}`")), Ok)
        };
        match (kind, arg, &elems) {
            ("elem", None, None) => {
                let names: Vec<Name> = body.split_whitespace().map(str::to_string).collect();
                let set: BTreeSet<&Name> = names.iter().collect();
                if set.len() != names.len() {
                    return err(no, "duplicate element");
                }
                elems = Some(names);
            }
            ("leq", None, Some(e)) if !seen_op => {
                for w in body.split_whitespace() {
                    let Some((a, b)) = w.split_once('<') else {
                        return err(no, format!("expected `a<b`, found `{w}`"));
                    };
                    pairs.push((no, lookup(e, a)?, lookup(e, b)?));
                }
            }
            ("op", Some(f), Some(e)) if is_ident(f) => {
                seen_op = true;
                let entry = ops.entry(f.to_string()).or_insert((no, Vec::new()));
                for w in body.split_whitespace() {
                    let Some((a, b)) = w.split_once("->") else {
                        return err(no, format!("expected `a->b`, found `{w}`"));
                    };
                    entry.1.push((lookup(e, a)?, lookup(e, b)?));
                }
            }
            _ => return err(no, format!("unexpected directive `{head}`")),
        }
    }
    let Some(elems) = elems else {
        return err(0, "missing `elem:` line");
    };
    let strict: Vec<(usize, usize)> = pairs.iter().map(|&(_, a, b)| (a, b)).collect();
    let last = pairs.last().map_or(0, |p| p.0);
    let mut p = FinitePoset::from_pairs(elems, &strict).map_err(|e| FormatError {
        line: last,
        msg: e.to_string(),
    })?;
    for (f, (no, maps)) in ops {
        let mut table: Vec<usize> = (0..p.len()).collect();
        let mut set = vec![false; p.len()];
        for (a, b) in maps {
            if set[a] && table[a] != b {
                return err(no, format!("`{f}` maps `{}` twice", p.elements[a]));
            }
            set[a] = true;
            table[a] = b;
        }
        p.ops.insert(f, table);
    }
    Ok(p)
}

/// Prints the covering pairs of the order and every operation.
pub fn print_poset(p: &FinitePoset) -> String {
    let n = p.len();
    let mut out = format!("elem: {}\n", p.elements.join(" "));
    let covers: Vec<String> = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .filter(|&(a, b)| {
            a != b && p.leq(a, b) && !(0..n).any(|c| c != a && c != b && p.leq(a, c) && p.leq(c, b))
        })
        .map(|(a, b)| format!("{}<{}", p.elements[a], p.elements[b]))
        .collect();
    if !covers.is_empty() {
        out.push_str(&format!("leq: {}\n", covers.join(" ")));
    }
    for (f, table) in &p.ops {
        let maps: Vec<String> = table
            .iter()
            .enumerate()
            .map(|(a, &b)| format!("{}->{}", p.elements[a], p.elements[b]))
            .collect();
        out.push_str(&format!("op {f}: {}\n", maps.join(" ")).replace(": \n", ":\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::example_m1;
    use crate::term::Term;

    #[test]
    fn system_document() {
        let s =
            parse_system("# chain\nbound: x z\nfree: y\nx := p | <a>z\nz := y & [a]x\n").unwrap();
        assert_eq!(s.bound, vec!["x", "z"]);
        assert_eq!(
            s.equations["z"],
            Term::and(Term::var("y"), Term::nec("a", Term::var("x")))
        );
        assert_eq!(
            s.equations["x"],
            Term::or(Term::gen("p"), Term::dia("a", Term::var("z")))
        );
        assert_eq!(parse_system(&print_system(&s)).unwrap(), s);
    }

    #[test]
    fn system_errors_carry_lines() {
        assert_eq!(parse_system("x := p\nx := q\n").unwrap_err().line, 2);
        assert_eq!(parse_system("bound: x\nx := (p\n").unwrap_err().line, 2);
        assert_eq!(parse_system("x := p\nbound: x\n").unwrap_err().line, 2);
        assert!(parse_system("bound: x z\nx := p\n").is_err());
        assert!(parse_system("x := ~x\n").is_err());
    }

    const M1: &str = "# running example\nstates: s0 s1\nrel a: s0->s1 s1->s1\n\nval p: s1\n";

    #[test]
    fn m1_document() {
        assert_eq!(parse_model(M1, None).unwrap(), example_m1());
        assert_eq!(
            parse_model(&print_model(&example_m1()), None).unwrap(),
            example_m1()
        );
    }

    #[test]
    fn undeclared_action_rejected() {
        let alphabet = BTreeSet::from(["a".to_string()]);
        let e = parse_model("states: s0\nrel b: s0->s0\n", Some(&alphabet)).unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.msg.contains("unknown action"));
    }

    #[test]
    fn empty_state_list() {
        let m = parse_model("states:\n", None).unwrap();
        assert_eq!(m.len(), 0);
    }

    #[test]
    fn order_and_directives_enforced() {
        assert!(parse_model("val p: s0\nstates: s0\n", None).is_err());
        assert!(parse_model("states: s0\nval p: s0\nrel a: s0->s0\n", None).is_err());
        assert!(parse_model("states: s0\nfoo: s0\n", None).is_err());
        assert!(parse_model("states: s0\nrel a: s0->s9\n", None).is_err());
    }

    #[test]
    fn poset_document() {
        let p =
            parse_poset("elem: z a b t\nleq: z<a z<b\nleq: a<t b<t\nop f: a->b b->a\n").unwrap();
        assert!(p.leq(0, 3));
        assert!(!p.leq(1, 2));
        assert_eq!(p.ops["f"], vec![0, 2, 1, 3]);
        assert_eq!(parse_poset(&print_poset(&p)).unwrap(), p);
        assert_eq!(parse_poset("elem: a b\nleq: a<c\n").unwrap_err().line, 2);
        assert!(parse_poset("elem: a b\nleq: a<b b<a\n").is_err());
        assert!(parse_poset("leq: a<b\n").is_err());
    }
}
