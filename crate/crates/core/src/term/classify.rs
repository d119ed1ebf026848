use std::fmt;

use super::Term;

/// Fixed-point alternation class of a term in negation normal form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Fragment {
    Sigma1,
    Pi1,
    CompSigma1Pi1,
    General,
}

impl fmt::Display for Fragment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Fragment::Sigma1 => "sigma1",
            Fragment::Pi1 => "pi1",
            Fragment::CompSigma1Pi1 => "comp_sigma1_pi1",
            Fragment::General => "general",
        })
    }
}

/// Smallest class containing `t`. Fixed-point-free terms are `Sigma1`.
pub fn classify(t: &Term) -> Fragment {
    if in_grammar(t, Some(true)) {
        Fragment::Sigma1
    } else if in_grammar(t, Some(false)) {
        Fragment::Pi1
    } else if in_grammar(t, None) && !alternates(t) {
        Fragment::CompSigma1Pi1
    } else {
        Fragment::General
    }
}

/// Membership in the positive grammar with literals on generators only.
/// `least`: `Some(true)` allows only `μ`, `Some(false)` only `ν`, `None` both.
pub(crate) fn in_grammar(t: &Term, least: Option<bool>) -> bool {
    match t {
        Term::Gen(_) | Term::Var(_) | Term::Top | Term::Bot => true,
        Term::Not(b) => matches!(**b, Term::Gen(_)),
        Term::Mu(_, b) => least != Some(false) && in_grammar(b, least),
        Term::Nu(_, b) => least != Some(true) && in_grammar(b, least),
        _ => t.children().into_iter().all(|c| in_grammar(c, least)),
    }
}

/// True when some fixed point of one kind contains, free, a variable bound
/// by an enclosing fixed point of the other kind.
fn alternates(t: &Term) -> bool {
    fn go(t: &Term, scope: &mut Vec<(String, bool)>) -> bool {
        match t {
            Term::Mu(x, b) | Term::Nu(x, b) => {
                let least = matches!(t, Term::Mu(..));
                let clash = t.free_vars().iter().any(|v| {
                    scope
                        .iter()
                        .rev()
                        .find(|(y, _)| y == v)
                        .is_some_and(|(_, k)| *k != least)
                });
                if clash {
                    return true;
                }
                scope.push((x.clone(), least));
                let r = go(b, scope);
                scope.pop();
                r
            }
            _ => t.children().into_iter().any(|c| go(c, scope)),
        }
    }
    go(t, &mut Vec::new())
}
