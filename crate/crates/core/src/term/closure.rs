use super::{Term, TermSet};

/// Fischer-Ladner closure: the least set containing `t`, closed under
/// immediate subterms and one-step unfolding of fixed points.
pub fn fl_closure(t: &Term) -> TermSet {
    let mut set = TermSet::new();
    let mut work = vec![t.clone()];
    while let Some(u) = work.pop() {
        if !set.insert(u.clone()) {
            continue;
        }
        match &u {
            Term::Mu(..) | Term::Nu(..) => work.push(u.unfold().expect("fixpoint")),
            _ => work.extend(u.children().into_iter().cloned()),
        }
    }
    set
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_term;
    use proptest::prelude::*;

    fn p(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    /// Textbook recursive definition, computed by naive saturation.
    fn oracle(t: &Term) -> Vec<Term> {
        let mut members: Vec<Term> = vec![t.canonical()];
        loop {
            let mut next = members.clone();
            for m in &members {
                let succ: Vec<Term> = match m {
                    Term::Mu(..) | Term::Nu(..) => vec![m.unfold().unwrap()],
                    _ => m.children().into_iter().cloned().collect(),
                };
                for s in succ {
                    let s = s.canonical();
                    if !next.contains(&s) {
                        next.push(s);
                    }
                }
            }
            if next.len() == members.len() {
                members.sort();
                return members;
            }
            members = next;
        }
    }

    #[test]
    fn small_cases() {
        assert_eq!(fl_closure(&p("p")).len(), 1);
        let c = fl_closure(&p("<a>p"));
        assert_eq!(c.len(), 2);
        assert!(c.contains(&p("p")));
        let star = p("mu x . p | <a>x");
        let c = fl_closure(&star);
        let expected = [
            star.clone(),
            p("p | <a>(mu x . p | <a>x)"),
            p("p"),
            p("<a>(mu x . p | <a>x)"),
        ];
        assert_eq!(c.len(), 4);
        for e in &expected {
            assert!(c.contains(e), "{e}");
        }
    }

    #[test]
    fn matches_saturation_oracle() {
        for s in [
            "mu x . p | <a>x",
            "nu x . mu y . [a]x & (p | <b>y)",
            "~p & [a]q | arrow a {p, q}",
        ] {
            let t = p(s);
            let mut got: Vec<Term> = fl_closure(&t).iter().map(Term::canonical).collect();
            got.sort();
            assert_eq!(got, oracle(&t), "{s}");
        }
    }

    proptest! {
        #[test]
        fn closed_and_linear(seed in 0u64..10_000) {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let t = crate::gen::random_term(&mut rng, &crate::gen::TermShape::default());
            let c = fl_closure(&t);
            prop_assert!(c.contains(&t));
            prop_assert!(c.len() <= t.size());
            for m in c.iter() {
                let succ: Vec<Term> = match m {
                    Term::Mu(..) | Term::Nu(..) => vec![m.unfold().unwrap()],
                    _ => m.children().into_iter().cloned().collect(),
                };
                for s in succ {
                    prop_assert!(c.contains(&s));
                }
            }
        }
    }
}
