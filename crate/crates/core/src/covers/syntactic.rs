//! Cover rules specific to terms of the free algebra.

use crate::term::{
    fl_closure, modal_cnf, nnf, Clause, Literal, SpconSpec, Term, TermError, TermSet,
};

/// Structural approximation of the free-algebra order: `true` implies
/// `a ≤ b`, `false` means "not established".
pub fn syntactic_leq(a: &Term, b: &Term) -> bool {
    if a == b || matches!(a, Term::Bot) || matches!(b, Term::Top) || a.alpha_eq(b) {
        return true;
    }
    match (a, b) {
        (Term::Or(l, r), _) => syntactic_leq(l, b) && syntactic_leq(r, b),
        (_, Term::And(l, r)) => syntactic_leq(a, l) && syntactic_leq(a, r),
        (Term::Dia(s, x), Term::Dia(t, y)) | (Term::Nec(s, x), Term::Nec(t, y)) if s == t => {
            syntactic_leq(x, y)
        }
        _ => {
            let left = matches!(a, Term::And(l, r) if syntactic_leq(l, b) || syntactic_leq(r, b));
            left || matches!(b, Term::Or(l, r) if syntactic_leq(a, l) || syntactic_leq(a, r))
        }
    }
}

/// Right adjoint of `◊σ` at the meet of `clauses`: per clause `⊤` if the
/// clause is syntactically `⊤`, else its `σ`-diamond body (`⊥` if none).
pub fn dia_right_adjoint(action: &str, clauses: &[Clause]) -> Term {
    Term::big_and(clauses.iter().map(|c| {
        if c.is_top() {
            Term::Top
        } else {
            c.dia_body(action)
        }
    }))
    .simplify()
}

/// Covers of a special conjunction below one clause, one vector per
/// coordinate of `spec`.
pub fn spcon_cover(spec: &SpconSpec, clause: &Clause) -> Vec<Vec<Term>> {
    let coords = spec.coordinates();
    let top = vec![Term::Top; coords.len()];
    let inconsistent = spec
        .literals
        .iter()
        .any(|l| l.complement().is_some_and(|c| spec.literals.contains(&c)));
    let entailed = spec
        .literals
        .iter()
        .any(|l| *l != Literal::Top && clause.literals.contains(l));
    if clause.is_top() || inconsistent || entailed {
        return vec![top];
    }
    let mut out = Vec::new();
    for (action, block) in &spec.blocks {
        let d = clause.dia_body(action);
        for y in block {
            let mut c = top.clone();
            c[coords.iter().position(|v| v == y).expect("coordinate")] = d.clone();
            out.push(c);
        }
        for e in clause.box_bodies(action) {
            let de = Term::or(d.clone(), e.clone()).simplify();
            let mut c = top.clone();
            for y in block {
                c[coords.iter().position(|v| v == y).expect("coordinate")] = de.clone();
            }
            out.push(c);
        }
    }
    out
}

/// Iterates of `b ↦ ◊σ⁻¹(b)` up to the first repetition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InverseIteration {
    pub iterates: Vec<Term>,
    /// The first iterate that repeated an earlier one (modulo normal form) was found.
    pub stabilized: bool,
    pub fl_size: usize,
    /// `⋀ₙ ◊σ⁻¹ⁿ(b)`: the greatest `p` with `◊σ* p ≤ b`.
    pub meet: Term,
}

impl InverseIteration {
    /// Applications of `◊σ⁻¹` needed to reach every distinct iterate.
    pub fn steps(&self) -> usize {
        self.iterates.len().saturating_sub(1)
    }
}

/// Runs the `◊σ⁻¹` iteration from `b`, giving up after `limit` iterates.
pub fn kleene_inverse_iteration(
    action: &str,
    b: &Term,
    limit: usize,
) -> Result<InverseIteration, TermError> {
    let fl_size = fl_closure(&nnf(b)).len();
    let mut seen = TermSet::new();
    let mut iterates = Vec::new();
    let mut cur = b.simplify().normalize();
    let mut stabilized = false;
    while iterates.len() < limit {
        if !seen.insert(cur.clone()) {
            stabilized = true;
            break;
        }
        iterates.push(cur.clone());
        cur = dia_right_adjoint(action, &modal_cnf(&cur)?).normalize();
    }
    let meet = Term::big_and(iterates.iter().cloned()).normalize();
    Ok(InverseIteration {
        iterates,
        stabilized,
        fl_size,
        meet,
    })
}

/// Whether `t` is a meet of joins of members of `FL(b)` (or `⊤`, `⊥`), the
/// distributive lattice the reachable covers of `b` live in.
pub fn in_fl_lattice(t: &Term, b: &Term) -> bool {
    let mut fl = fl_closure(b);
    for u in fl_closure(&nnf(b)).iter() {
        fl.insert(u.clone());
    }
    fn leaves<'a>(t: &'a Term, out: &mut Vec<&'a Term>) {
        match t {
            Term::And(l, r) | Term::Or(l, r) => {
                leaves(l, out);
                leaves(r, out);
            }
            _ => out.push(t),
        }
    }
    let mut ls = Vec::new();
    leaves(t, &mut ls);
    ls.into_iter()
        .all(|u| matches!(u, Term::Top | Term::Bot) || fl.contains(u) || fl.contains(&nnf(u)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::{check_leq, SamplerConfig};
    use crate::syntax::parse_term;

    fn p(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    fn adj(b: &str) -> Term {
        dia_right_adjoint("a", &modal_cnf(&p(b)).unwrap())
    }

    #[test]
    fn right_adjoint_examples() {
        assert_eq!(adj("~p | <a>q | [a]r"), p("q"));
        assert_eq!(adj("T"), Term::Top);
        assert_eq!(adj("~p"), Term::Bot);
    }

    #[test]
    fn right_adjoint_counit() {
        let cfg = SamplerConfig {
            random_models: 60,
            ..Default::default()
        };
        for b in [
            "~p | <a>q | [a]r",
            "(<a>p | q) & (<a>(p & q) | [a]q)",
            "<a>mu x . p | <a>x",
            "[a]p",
        ] {
            let r = adj(b);
            assert!(
                !check_leq(&Term::dia("a", r), &p(b), &cfg).is_refuted(),
                "{b}"
            );
        }
    }

    #[test]
    fn spcon_cover_examples() {
        let spec = SpconSpec::new(
            [Literal::Pos(p("p"))],
            [("a".to_string(), vec!["x1".to_string(), "x2".to_string()])],
        )
        .unwrap();
        let clause = modal_cnf(&p("~q | <a>d | [a]e")).unwrap().remove(0);
        let got = spcon_cover(&spec, &clause);
        let (d, e) = (p("d"), p("e"));
        let de = Term::or(d.clone(), e.clone());
        assert_eq!(
            got,
            vec![
                vec![d.clone(), Term::Top],
                vec![Term::Top, d],
                vec![de.clone(), de]
            ]
        );

        let entailed = modal_cnf(&p("p | <a>d")).unwrap().remove(0);
        assert_eq!(
            spcon_cover(&spec, &entailed),
            vec![vec![Term::Top, Term::Top]]
        );
    }

    #[test]
    fn spcon_covers_are_sound() {
        let spec = SpconSpec::new(
            [Literal::Pos(p("p"))],
            [("a".to_string(), vec!["x1".to_string(), "x2".to_string()])],
        )
        .unwrap();
        let b = p("~q | <a>d | [a]e");
        let clause = modal_cnf(&b).unwrap().remove(0);
        let cfg = SamplerConfig::default();
        for c in spcon_cover(&spec, &clause) {
            assert!(!check_leq(&spec.apply(&c), &b, &cfg).is_refuted(), "{c:?}");
        }
    }

    #[test]
    fn inverse_iteration_stabilizes() {
        let it = kleene_inverse_iteration("a", &p("~p | <a>q"), 64).unwrap();
        assert!(it.stabilized);
        assert!(it.steps() <= it.fl_size);
        assert_eq!(it.iterates, vec![p("~p | <a>q"), p("q"), Term::Bot]);
        assert_eq!(it.meet, Term::Bot);
    }

    #[test]
    fn structural_order() {
        assert!(syntactic_leq(&p("p & q"), &p("p | r")));
        assert!(syntactic_leq(&p("<a>(p & q)"), &p("<a>p")));
        assert!(!syntactic_leq(&p("p"), &p("q")));
        assert!(in_fl_lattice(&p("(q | T) & p"), &p("p & <a>q")));
        assert!(!in_fl_lattice(&p("r"), &p("p & <a>q")));
    }
}
