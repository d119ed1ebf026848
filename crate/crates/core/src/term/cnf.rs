use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{guard, is_guarded, nnf, Name, Term, TermError};

/// A clause literal: `⊤`, an atom (generator or free variable) or its negation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Literal {
    Top,
    Pos(Term),
    Neg(Term),
}

impl Literal {
    pub fn from_term(t: &Term) -> Result<Literal, TermError> {
        match t {
            Term::Top => Ok(Literal::Top),
            Term::Gen(_) | Term::Var(_) => Ok(Literal::Pos(t.clone())),
            Term::Not(b) if matches!(**b, Term::Gen(_) | Term::Var(_)) => {
                Ok(Literal::Neg((**b).clone()))
            }
            _ => Err(TermError::NotALiteral(t.to_string())),
        }
    }

    pub fn to_term(&self) -> Term {
        match self {
            Literal::Top => Term::Top,
            Literal::Pos(a) => a.clone(),
            Literal::Neg(a) => Term::not(a.clone()),
        }
    }

    pub fn complement(&self) -> Option<Literal> {
        match self {
            Literal::Top => None,
            Literal::Pos(a) => Some(Literal::Neg(a.clone())),
            Literal::Neg(a) => Some(Literal::Pos(a.clone())),
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_term())
    }
}

/// `⋁Γ ∨ ⋁τ (◊τ dτ ∨ ⋁_{e∈Eτ} □τ e)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Clause {
    pub literals: BTreeSet<Literal>,
    pub diamonds: BTreeMap<Name, Term>,
    /// Box bodies per action, deduplicated modulo alpha and sorted by canonical form.
    pub boxes: BTreeMap<Name, Vec<Term>>,
}

impl Clause {
    /// The empty clause, denoting `⊥`.
    pub fn bottom() -> Clause {
        Clause::default()
    }

    pub fn top() -> Clause {
        Clause {
            literals: BTreeSet::from([Literal::Top]),
            ..Clause::default()
        }
    }

    pub fn literal(l: Literal) -> Clause {
        Clause {
            literals: BTreeSet::from([l]),
            ..Clause::default()
        }
    }

    pub fn diamond(action: &str, body: Term) -> Clause {
        Clause {
            diamonds: BTreeMap::from([(action.to_string(), body)]),
            ..Clause::default()
        }
    }

    pub fn boxed(action: &str, body: Term) -> Clause {
        Clause {
            boxes: BTreeMap::from([(action.to_string(), vec![body])]),
            ..Clause::default()
        }
    }

    /// Diamond body for `action`, `⊥` when absent.
    pub fn dia_body(&self, action: &str) -> Term {
        self.diamonds.get(action).cloned().unwrap_or(Term::Bot)
    }

    pub fn box_bodies(&self, action: &str) -> &[Term] {
        self.boxes.get(action).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Syntactic `⊤` test: `⊤ ∈ Γ`, a complementary pair in `Γ`, or a box
    /// whose body simplifies to `⊤`.
    pub fn is_top(&self) -> bool {
        self.literals.contains(&Literal::Top)
            || self
                .boxes
                .values()
                .flatten()
                .any(|e| e.simplify() == Term::Top)
            || self
                .literals
                .iter()
                .any(|l| l.complement().is_some_and(|c| self.literals.contains(&c)))
    }

    pub fn join(&self, other: &Clause) -> Clause {
        let mut out = self.clone();
        out.literals.extend(other.literals.iter().cloned());
        for (a, d) in &other.diamonds {
            let merged = match out.diamonds.remove(a) {
                Some(mine) if mine.alpha_eq(d) => mine,
                Some(mine) => Term::or(mine, d.clone()),
                None => d.clone(),
            };
            out.diamonds.insert(a.clone(), merged);
        }
        for (a, es) in &other.boxes {
            let entry = out.boxes.entry(a.clone()).or_default();
            entry.extend(es.iter().cloned());
            dedup_alpha(entry);
        }
        out
    }

    pub fn to_term(&self) -> Term {
        let mut parts: Vec<Term> = self.literals.iter().map(Literal::to_term).collect();
        let actions: BTreeSet<&Name> = self.diamonds.keys().chain(self.boxes.keys()).collect();
        for a in actions {
            if let Some(d) = self.diamonds.get(a) {
                parts.push(Term::dia(a.clone(), d.clone()));
            }
            for e in self.box_bodies(a) {
                parts.push(Term::nec(a.clone(), e.clone()));
            }
        }
        Term::big_or(parts)
    }

    /// Identity modulo bound-variable renaming.
    pub fn key(&self) -> Term {
        self.to_term().canonical()
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_term())
    }
}

fn dedup_alpha(v: &mut Vec<Term>) {
    let mut seen = BTreeMap::new();
    for t in v.drain(..) {
        seen.entry(t.canonical()).or_insert(t);
    }
    v.extend(seen.into_values());
}

fn dedup_clauses(cs: Vec<Clause>) -> Vec<Clause> {
    let mut seen = BTreeMap::new();
    for c in cs {
        seen.entry(c.key()).or_insert(c);
    }
    let all: Vec<Clause> = seen.into_values().collect();
    let non_top: Vec<Clause> = all.iter().filter(|c| !c.is_top()).cloned().collect();
    if non_top.is_empty() {
        vec![Clause::top()]
    } else {
        non_top
    }
}

/// Clauses whose meet equals `t`: the term is guarded, each top-level fixed
/// point is unfolded to expose the first modal level, then `∨` is
/// distributed over `∧`.
pub fn modal_cnf(t: &Term) -> Result<Vec<Clause>, TermError> {
    let g = guard(&nnf(t));
    if !is_guarded(&g) {
        return Err(TermError::GuardingFailed(g.to_string()));
    }
    Ok(cnf(&g))
}

fn cnf(t: &Term) -> Vec<Clause> {
    match t {
        Term::Top => vec![Clause::top()],
        Term::Bot => vec![Clause::bottom()],
        Term::Gen(_) | Term::Var(_) | Term::Not(_) => {
            vec![Clause::literal(Literal::from_term(t).expect("nnf literal"))]
        }
        Term::Dia(a, b) => vec![Clause::diamond(a, (**b).clone())],
        Term::Nec(a, b) => vec![Clause::boxed(a, (**b).clone())],
        Term::Arrow(a, items) => cnf(&super::arrow(a, items)),
        Term::And(l, r) => {
            let mut v = cnf(l);
            v.extend(cnf(r));
            dedup_clauses(v)
        }
        Term::Or(l, r) => {
            let (ls, rs) = (cnf(l), cnf(r));
            let v = ls
                .iter()
                .flat_map(|a| rs.iter().map(move |b| a.join(b)))
                .collect();
            dedup_clauses(v)
        }
        Term::Mu(..) | Term::Nu(..) => cnf(&t.unfold().expect("fixpoint")),
    }
}

/// Meet of a clause list as a term.
pub fn clauses_to_term(cs: &[Clause]) -> Term {
    Term::big_and(cs.iter().map(Clause::to_term))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_term;

    fn p(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    #[test]
    fn single_clause() {
        let cs = modal_cnf(&p("~p | <a>q")).unwrap();
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].literals, BTreeSet::from([Literal::Neg(p("p"))]));
        assert_eq!(cs[0].dia_body("a"), p("q"));
    }

    #[test]
    fn meet_distributes() {
        let cs = modal_cnf(&p("p & [a]q")).unwrap();
        assert_eq!(cs.len(), 2);
        assert!(cs.contains(&Clause::literal(Literal::Pos(p("p")))));
        assert!(cs.contains(&Clause::boxed("a", p("q"))));
    }

    #[test]
    fn star_unfolds_once() {
        let star = p("mu y . p | <a>y");
        let cs = modal_cnf(&star).unwrap();
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].literals, BTreeSet::from([Literal::Pos(p("p"))]));
        assert!(cs[0].dia_body("a").alpha_eq(&star));
    }

    #[test]
    fn top_detection() {
        assert_eq!(modal_cnf(&p("p | ~p")).unwrap(), vec![Clause::top()]);
        assert_eq!(modal_cnf(&Term::Top).unwrap(), vec![Clause::top()]);
        assert_eq!(modal_cnf(&Term::Bot).unwrap(), vec![Clause::bottom()]);
        assert_eq!(
            modal_cnf(&p("p & T")).unwrap(),
            vec![Clause::literal(Literal::Pos(p("p")))]
        );
    }

    #[test]
    fn diamonds_merge_under_join() {
        let cs = modal_cnf(&p("<a>p | <a>q | [a]r")).unwrap();
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].dia_body("a"), p("p | q"));
        assert_eq!(cs[0].box_bodies("a"), &[p("r")]);
    }
}
