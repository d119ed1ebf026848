//! Monotone maps written as terms over declared variables, translated into
//! descriptors.

use super::{CoverError, Descriptor};
use crate::term::{Name, SpconSpec, Term};

/// Translates `t`, read as a map of `vars` (in order), into a descriptor.
/// Closed subterms become constants through `constant`. Meets need one
/// closed side; arrow terms become special conjunctions of their items.
pub fn descriptor_of_term<E: Clone>(
    t: &Term,
    vars: &[Name],
    constant: &mut dyn FnMut(&Term) -> Result<E, CoverError>,
) -> Result<Descriptor<E>, CoverError> {
    let n = vars.len();
    if !t.free_vars().iter().any(|x| vars.contains(x)) {
        return Ok(Descriptor::Constant {
            arity: n,
            value: constant(t)?,
        });
    }
    let pair = |l: Descriptor<E>, r: Descriptor<E>| Descriptor::Pair(vec![l, r]);
    Ok(match t {
        Term::Var(x) => {
            let index = vars
                .iter()
                .rposition(|v| v == x)
                .expect("free variable is declared");
            Descriptor::proj(n, index)
        }
        Term::Or(l, r) => {
            let (l, r) = (
                descriptor_of_term(l, vars, constant)?,
                descriptor_of_term(r, vars, constant)?,
            );
            Descriptor::compose(Descriptor::Join(2), pair(l, r))
        }
        Term::And(l, r) => {
            let (k, open) = match (
                l.free_vars().iter().any(|x| vars.contains(x)),
                r.free_vars().iter().any(|x| vars.contains(x)),
            ) {
                (false, _) => (l, r),
                (_, false) => (r, l),
                _ => {
                    return Err(CoverError::NoCoverRule(
                        "meet of two variable-dependent terms",
                    ))
                }
            };
            Descriptor::compose(
                Descriptor::ConstMeet(constant(k)?),
                descriptor_of_term(open, vars, constant)?,
            )
        }
        Term::Dia(a, body) => Descriptor::compose(
            Descriptor::Diamond(a.clone()),
            descriptor_of_term(body, vars, constant)?,
        ),
        Term::Mu(x, body) => {
            let mut inner_vars = vars.to_vec();
            inner_vars.push(x.clone());
            Descriptor::mu(descriptor_of_term(body, &inner_vars, constant)?, n)
        }
        Term::Arrow(a, items) => {
            let coords: Vec<Name> = (0..items.len()).map(|i| format!("c{i}")).collect();
            let spec = SpconSpec::new([], [(a.clone(), coords)]).map_err(CoverError::Term)?;
            let args = items
                .iter()
                .map(|i| descriptor_of_term(i, vars, constant))
                .collect::<Result<Vec<_>, _>>()?;
            Descriptor::compose(Descriptor::Spcon(spec), Descriptor::Pair(args))
        }
        _ => return Err(CoverError::NoCoverRule("this connective over a variable")),
    })
}
