//! Concrete syntax for terms.
//!
//! ```text
//! t ::= ident | T | F | ~t | t & t | t | t | <a> t | [a] t
//!     | mu x . t | nu x . t | arrow a { t, ... } | ( t )
//! ```
//! `~` and the modal prefixes bind tightest, then `&`, then `|`; binders
//! extend as far right as possible. Identifiers bound by an enclosing binder
//! (or declared as variables by the caller) become variables, all others
//! generators.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::term::{Name, Term};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("at offset {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Top,
    Bot,
    Not,
    And,
    Or,
    Lt,
    Gt,
    LBrack,
    RBrack,
    LParen,
    RParen,
    Dot,
    LBrace,
    RBrace,
    Comma,
    Mu,
    Nu,
    Arrow,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '~' => Some(Tok::Not),
            '&' => Some(Tok::And),
            '|' => Some(Tok::Or),
            '<' => Some(Tok::Lt),
            '>' => Some(Tok::Gt),
            '[' => Some(Tok::LBrack),
            ']' => Some(Tok::RBrack),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '.' => Some(Tok::Dot),
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            ',' => Some(Tok::Comma),
            'T' => Some(Tok::Top),
            'F' => Some(Tok::Bot),
            _ => None,
        };
        if let Some(t) = single {
            if matches!(t, Tok::Top | Tok::Bot)
                && bytes
                    .get(i + 1)
                    .is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_')
            {
                return Err(ParseError {
                    pos: i,
                    msg: "identifiers must start with a lowercase letter".into(),
                });
            }
            out.push((i, t));
            i += 1;
            continue;
        }
        if c.is_ascii_lowercase() {
            let start = i;
            while i < bytes.len()
                && (bytes[i].is_ascii_lowercase() || bytes[i].is_ascii_digit() || bytes[i] == b'_')
            {
                i += 1;
            }
            let word = &text[start..i];
            let tok = match word {
                "mu" => Tok::Mu,
                "nu" => Tok::Nu,
                "arrow" => Tok::Arrow,
                _ => Tok::Ident(word.to_string()),
            };
            out.push((start, tok));
            continue;
        }
        return Err(ParseError {
            pos: i,
            msg: format!("unexpected character `{c}`"),
        });
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    declared: &'a BTreeSet<Name>,
    /// Enclosing binders with the negation depth at which they were opened.
    binders: Vec<(Name, usize)>,
    negations: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.at += 1;
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.at += 1;
                Ok(s)
            }
            _ => self.err(format!("expected {what}")),
        }
    }

    fn or(&mut self) -> Result<Term, ParseError> {
        let mut t = self.and()?;
        while self.peek() == Some(&Tok::Or) {
            self.at += 1;
            t = Term::or(t, self.and()?);
        }
        Ok(t)
    }

    fn and(&mut self) -> Result<Term, ParseError> {
        let mut t = self.unary()?;
        while self.peek() == Some(&Tok::And) {
            self.at += 1;
            t = Term::and(t, self.unary()?);
        }
        Ok(t)
    }

    fn unary(&mut self) -> Result<Term, ParseError> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Not) => {
                self.at += 1;
                self.negations += 1;
                let b = self.unary();
                self.negations -= 1;
                Ok(Term::not(b?))
            }
            Some(Tok::Lt) => {
                self.at += 1;
                let a = self.ident("action name")?;
                self.expect(Tok::Gt, "`>`")?;
                Ok(Term::dia(a, self.unary()?))
            }
            Some(Tok::LBrack) => {
                self.at += 1;
                let a = self.ident("action name")?;
                self.expect(Tok::RBrack, "`]`")?;
                Ok(Term::nec(a, self.unary()?))
            }
            Some(Tok::Mu) | Some(Tok::Nu) => {
                let least = self.peek() == Some(&Tok::Mu);
                self.at += 1;
                let x = self.ident("bound variable")?;
                self.expect(Tok::Dot, "`.`")?;
                self.binders.push((x.clone(), self.negations));
                let b = self.or();
                self.binders.pop();
                let b = b?;
                Ok(if least {
                    Term::mu(x, b)
                } else {
                    Term::nu(x, b)
                })
            }
            Some(Tok::Arrow) => {
                self.at += 1;
                let a = self.ident("action name")?;
                self.expect(Tok::LBrace, "`{`")?;
                let mut items = Vec::new();
                if self.peek() != Some(&Tok::RBrace) {
                    items.push(self.or()?);
                    while self.peek() == Some(&Tok::Comma) {
                        self.at += 1;
                        items.push(self.or()?);
                    }
                }
                self.expect(Tok::RBrace, "`}` or `,`")?;
                Ok(Term::Arrow(a, items))
            }
            Some(Tok::LParen) => {
                self.at += 1;
                let t = self.or()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            Some(Tok::Top) => {
                self.at += 1;
                Ok(Term::Top)
            }
            Some(Tok::Bot) => {
                self.at += 1;
                Ok(Term::Bot)
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                if let Some((_, depth)) = self.binders.iter().rev().find(|(x, _)| *x == name) {
                    if (self.negations - depth) % 2 == 1 {
                        return Err(ParseError {
                            pos,
                            msg: format!("variable `{name}` under odd negations"),
                        });
                    }
                    Ok(Term::Var(name))
                } else if self.declared.contains(&name) {
                    Ok(Term::Var(name))
                } else {
                    Ok(Term::Gen(name))
                }
            }
            _ => self.err("expected a term"),
        }
    }
}

pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    parse_term_with_vars(text, &BTreeSet::new())
}

/// Parses with the given free identifiers read as variables.
pub fn parse_term_with_vars(text: &str, vars: &BTreeSet<Name>) -> Result<Term, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        at: 0,
        end: text.len(),
        declared: vars,
        binders: Vec::new(),
        negations: 0,
    };
    let t = p.or()?;
    if p.at != p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(t)
}

/// Prints with minimal parentheses; `parse_term(print_term(t))` rebuilds `t`.
pub fn print_term(t: &Term) -> String {
    let mut s = String::new();
    write(t, 0, true, &mut s);
    s
}

/// `prec`: binding strength required by the context (1 `|`, 2 `&`, 3 prefix).
/// `open`: nothing follows this subterm inside the enclosing group, so a
/// binder may extend to the right without parentheses.
fn write(t: &Term, prec: u8, open: bool, out: &mut String) {
    match t {
        Term::Gen(n) | Term::Var(n) => out.push_str(n),
        Term::Top => out.push('T'),
        Term::Bot => out.push('F'),
        Term::Or(l, r) => group(prec > 1, open, out, |open, out| {
            write(l, 1, false, out);
            out.push_str(" | ");
            write(r, 2, open, out);
        }),
        Term::And(l, r) => group(prec > 2, open, out, |open, out| {
            write(l, 2, false, out);
            out.push_str(" & ");
            write(r, 3, open, out);
        }),
        Term::Not(b) => {
            out.push('~');
            write(b, 3, open, out);
        }
        Term::Dia(a, b) => {
            out.push_str(&format!("<{a}>"));
            write(b, 3, open, out);
        }
        Term::Nec(a, b) => {
            out.push_str(&format!("[{a}]"));
            write(b, 3, open, out);
        }
        Term::Mu(x, b) | Term::Nu(x, b) => group(!open, open, out, |_, out| {
            out.push_str(if matches!(t, Term::Mu(..)) {
                "mu "
            } else {
                "nu "
            });
            out.push_str(x);
            out.push_str(" . ");
            write(b, 0, true, out);
        }),
        Term::Arrow(a, items) => {
            out.push_str(&format!("arrow {a} {{"));
            for (i, it) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write(it, 0, true, out);
            }
            out.push('}');
        }
    }
}

fn group(paren: bool, open: bool, out: &mut String, body: impl FnOnce(bool, &mut String)) {
    if paren {
        out.push('(');
        body(true, out);
        out.push(')');
    } else {
        body(open, out);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_fixpoint() {
        let t = parse_term("mu x . p | <a> x").unwrap();
        assert_eq!(
            t,
            Term::mu(
                "x",
                Term::or(Term::gen("p"), Term::dia("a", Term::var("x")))
            )
        );
    }

    #[test]
    fn positivity_rejected() {
        let e = parse_term("mu x . ~x").unwrap_err();
        assert!(e.msg.contains("odd negations"), "{e}");
        assert!(parse_term("mu x . ~~x").is_ok());
        assert!(parse_term("mu x . ~(p & ~x)").is_ok());
    }

    #[test]
    fn precedence() {
        assert_eq!(
            parse_term("p | q & r").unwrap(),
            parse_term("p | (q & r)").unwrap()
        );
        assert_eq!(
            parse_term("~p & q").unwrap(),
            Term::and(Term::not(Term::gen("p")), Term::gen("q"))
        );
        assert_eq!(
            parse_term("p & mu x . q | x").unwrap(),
            Term::and(
                Term::gen("p"),
                Term::mu("x", Term::or(Term::gen("q"), Term::var("x")))
            )
        );
    }

    #[test]
    fn errors_carry_offsets() {
        let e = parse_term("p & & q").unwrap_err();
        assert_eq!(e.pos, 4);
        assert!(parse_term("p q").is_err());
        assert!(parse_term("Pq").is_err());
        assert!(parse_term("<a p").is_err());
    }

    #[test]
    fn arrows_and_constants() {
        let t = parse_term("arrow a {x, T} | arrow b {}").unwrap();
        assert_eq!(print_term(&t), "arrow a {x, T} | arrow b {}");
    }

    #[test]
    fn canonical_text_round_trips() {
        for s in [
            "mu x . p | <a>x",
            "(mu x . <a>x) & q",
            "~(nu x . [a]x) | p",
            "p & (q | r)",
            "p | q | r",
            "p | (q | r)",
            "<a>(mu y . y | p) & q",
            "<a>mu y . y | p",
        ] {
            assert_eq!(print_term(&parse_term(s).unwrap()), s);
        }
    }

    proptest! {
        #[test]
        fn parse_print_identity(seed in 0u64..1_000_000) {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let shape = crate::gen::TermShape { negation: true, ..Default::default() };
            let t = crate::gen::random_term(&mut rng, &shape);
            let text = print_term(&t);
            prop_assert_eq!(parse_term(&text).unwrap(), t);
        }
    }
}
