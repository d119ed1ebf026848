use super::{Name, Term};

/// Negation normal form: negations pushed down to generators (and free
/// variables), using De Morgan, `¬◊ = □¬` and `¬μx.s = νx.¬s[¬x/x]`.
pub fn nnf(t: &Term) -> Term {
    go(t, false, &mut Vec::new())
}

/// `flipped` records, per enclosing binder, whether it was crossed under an
/// odd number of negations (so its occurrences carry an implicit `¬`).
fn go(t: &Term, neg: bool, flipped: &mut Vec<(Name, bool)>) -> Term {
    match t {
        Term::Gen(_) => {
            if neg {
                Term::not(t.clone())
            } else {
                t.clone()
            }
        }
        Term::Var(x) => {
            let flip = flipped
                .iter()
                .rev()
                .find(|(y, _)| y == x)
                .map(|(_, f)| *f)
                .unwrap_or(false);
            if neg != flip {
                Term::not(t.clone())
            } else {
                t.clone()
            }
        }
        Term::Top => {
            if neg {
                Term::Bot
            } else {
                Term::Top
            }
        }
        Term::Bot => {
            if neg {
                Term::Top
            } else {
                Term::Bot
            }
        }
        Term::And(l, r) => {
            let (l, r) = (go(l, neg, flipped), go(r, neg, flipped));
            if neg {
                Term::or(l, r)
            } else {
                Term::and(l, r)
            }
        }
        Term::Or(l, r) => {
            let (l, r) = (go(l, neg, flipped), go(r, neg, flipped));
            if neg {
                Term::and(l, r)
            } else {
                Term::or(l, r)
            }
        }
        Term::Not(b) => go(b, !neg, flipped),
        Term::Dia(a, b) => {
            let b = go(b, neg, flipped);
            if neg {
                Term::nec(a.clone(), b)
            } else {
                Term::dia(a.clone(), b)
            }
        }
        Term::Nec(a, b) => {
            let b = go(b, neg, flipped);
            if neg {
                Term::dia(a.clone(), b)
            } else {
                Term::nec(a.clone(), b)
            }
        }
        Term::Mu(x, b) | Term::Nu(x, b) => {
            flipped.push((x.clone(), neg));
            let body = go(b, neg, flipped);
            flipped.pop();
            let least = matches!(t, Term::Mu(..)) != neg;
            if least {
                Term::mu(x.clone(), body)
            } else {
                Term::nu(x.clone(), body)
            }
        }
        Term::Arrow(a, items) => {
            if neg {
                go(&super::arrow(a, items), true, flipped)
            } else {
                Term::Arrow(
                    a.clone(),
                    items.iter().map(|i| go(i, false, flipped)).collect(),
                )
            }
        }
    }
}
