use std::collections::BTreeSet;

use super::{Name, Term};

/// Free variables with an occurrence outside every modal operator.
pub fn unguarded_vars(t: &Term) -> BTreeSet<Name> {
    match t {
        Term::Var(x) => BTreeSet::from([x.clone()]),
        Term::Dia(..) | Term::Nec(..) | Term::Arrow(..) => BTreeSet::new(),
        Term::Mu(x, b) | Term::Nu(x, b) => {
            let mut s = unguarded_vars(b);
            s.remove(x);
            s
        }
        _ => t.children().into_iter().flat_map(unguarded_vars).collect(),
    }
}

/// Every bound occurrence lies under a modal operator inside its binder.
pub fn is_guarded(t: &Term) -> bool {
    match t {
        Term::Mu(x, b) | Term::Nu(x, b) => !unguarded_vars(b).contains(x) && is_guarded(b),
        _ => t.children().into_iter().all(is_guarded),
    }
}

/// Equivalent guarded term. Works bottom-up: inner binders are guarded
/// first, then for `μx.s` every binder of `s` hiding an unguarded `x` is
/// unfolded, and the exposed unguarded occurrences are replaced by `⊥`
/// (`⊤` for `ν`). Guarded input is returned unchanged.
pub fn guard(t: &Term) -> Term {
    match t {
        Term::Mu(x, b) | Term::Nu(x, b) => {
            let least = matches!(t, Term::Mu(..));
            let body = guard(b);
            if !unguarded_vars(&body).contains(x) {
                return rebuild(least, x, body);
            }
            let unit = if least { Term::Bot } else { Term::Top };
            let body = replace_unguarded(&expose(&body, x), x, &unit).simplify();
            if body.occurs_free(x) {
                rebuild(least, x, body)
            } else {
                body
            }
        }
        _ => t.map_children(guard),
    }
}

fn rebuild(least: bool, x: &str, body: Term) -> Term {
    if least {
        Term::mu(x, body)
    } else {
        Term::nu(x, body)
    }
}

/// Unfolds binders (outside modal operators) whose body has `x` unguarded.
pub(crate) fn expose(s: &Term, x: &str) -> Term {
    match s {
        Term::Dia(..) | Term::Nec(..) | Term::Arrow(..) => s.clone(),
        Term::Mu(y, b) | Term::Nu(y, b) => {
            if y != x && unguarded_vars(b).contains(x) {
                expose(&s.unfold().expect("fixpoint"), x)
            } else {
                s.clone()
            }
        }
        _ => s.map_children(|c| expose(c, x)),
    }
}

pub(crate) fn replace_unguarded(s: &Term, x: &str, unit: &Term) -> Term {
    match s {
        Term::Var(y) if y == x => unit.clone(),
        Term::Dia(..) | Term::Nec(..) | Term::Arrow(..) | Term::Mu(..) | Term::Nu(..) => s.clone(),
        _ => s.map_children(|c| replace_unguarded(c, x, unit)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_term;

    fn p(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    #[test]
    fn guardedness() {
        assert!(is_guarded(&p("mu x . <a>x")));
        assert!(!is_guarded(&p("mu x . x | <a>x")));
        assert!(!is_guarded(&p("mu x . mu y . x | <a>y")));
        assert!(is_guarded(&p("p | q")));
    }

    #[test]
    fn loop_elimination() {
        assert_eq!(guard(&p("mu x . x | p")), p("p"));
        assert_eq!(guard(&p("nu x . x & p")), p("p"));
        assert_eq!(guard(&p("mu x . (x & q) | <a>x")), p("mu x . <a>x"));
    }

    #[test]
    fn guarded_input_unchanged() {
        for s in [
            "mu x . <a>x",
            "mu x . p | <a>x",
            "nu y . [a]y & mu x . <a>y | <b>x",
        ] {
            let t = p(s);
            assert_eq!(guard(&t), t);
        }
    }

    #[test]
    fn inner_binder_unfolded() {
        let g = guard(&p("mu x . mu y . x | <a>y"));
        assert!(is_guarded(&g), "{g}");
    }
}
