use super::{syntactic, Backend, CoverError, StepFn};
use crate::lattice::FinLattice;
use crate::syntax::print_term;
use crate::term::{fresh_name, modal_cnf, nnf, SpconSpec, Term};

/// A finite lattice with named unary operators: exact order.
#[derive(Clone, Debug)]
pub struct FinBackend {
    pub lattice: FinLattice,
}

impl FinBackend {
    pub fn new(lattice: FinLattice) -> FinBackend {
        FinBackend { lattice }
    }

    fn op(&self, action: &str) -> Result<&[usize], CoverError> {
        self.lattice
            .ops
            .get(action)
            .map(Vec::as_slice)
            .ok_or_else(|| CoverError::UnknownAction(action.into()))
    }

    /// Maximal elements of `{x | f(x) ≤ m}`; one element when `f` has an upper adjoint.
    fn preimage_max(&self, f: impl Fn(usize) -> usize, m: usize) -> Vec<usize> {
        let l = &self.lattice;
        if let Some(g) = l.upper_adjoint_of(&f, m) {
            return vec![g];
        }
        let below: Vec<usize> = (0..l.len()).filter(|&x| l.leq(f(x), m)).collect();
        l.maximal(&below)
    }
}

impl Backend for FinBackend {
    type Elem = usize;

    fn exact(&self) -> bool {
        true
    }

    fn top(&self) -> usize {
        self.lattice.top
    }

    fn bot(&self) -> usize {
        self.lattice.bot
    }

    fn leq(&self, a: &usize, b: &usize) -> bool {
        self.lattice.leq(*a, *b)
    }

    fn meet(&self, a: &usize, b: &usize) -> usize {
        self.lattice.meet(*a, *b)
    }

    fn join(&self, a: &usize, b: &usize) -> usize {
        self.lattice.join(*a, *b)
    }

    fn dia(&self, action: &str, a: &usize) -> Result<usize, CoverError> {
        Ok(self.op(action)?[*a])
    }

    fn dia_cover(&self, action: &str, m: &usize) -> Result<Vec<usize>, CoverError> {
        let table = self.op(action)?;
        Ok(self.preimage_max(|x| table[x], *m))
    }

    fn const_meet_cover(&self, k: &usize, m: &usize) -> Result<Vec<usize>, CoverError> {
        Ok(self.preimage_max(|x| self.lattice.meet(*k, x), *m))
    }

    fn spcon(&self, _: &SpconSpec, _: &[usize]) -> Result<usize, CoverError> {
        Err(CoverError::NoCoverRule("special conjunction"))
    }

    fn spcon_cover(&self, _: &SpconSpec, _: &usize) -> Result<Vec<Vec<usize>>, CoverError> {
        Err(CoverError::NoCoverRule("special conjunction"))
    }

    fn lfp(&self, f: &mut StepFn<usize>) -> Result<usize, CoverError> {
        let mut x = self.lattice.bot;
        loop {
            let y = f(&x)?;
            if y == x {
                return Ok(x);
            }
            x = y;
        }
    }

    fn show(&self, a: &usize) -> String {
        self.lattice.labels[*a].clone()
    }
}

/// Terms of the free algebra. The order is the structural approximation
/// [`syntactic::syntactic_leq`], so `leq` may answer false on true
/// inequalities; covers are sound but pruning is partial.
#[derive(Clone, Copy, Debug, Default)]
pub struct SyntacticBackend;

impl Backend for SyntacticBackend {
    type Elem = Term;

    fn exact(&self) -> bool {
        false
    }

    fn top(&self) -> Term {
        Term::Top
    }

    fn bot(&self) -> Term {
        Term::Bot
    }

    fn leq(&self, a: &Term, b: &Term) -> bool {
        syntactic::syntactic_leq(a, b)
    }

    fn meet(&self, a: &Term, b: &Term) -> Term {
        self.canon(&Term::and(a.clone(), b.clone()))
    }

    fn join(&self, a: &Term, b: &Term) -> Term {
        self.canon(&Term::or(a.clone(), b.clone()))
    }

    fn dia(&self, action: &str, a: &Term) -> Result<Term, CoverError> {
        Ok(Term::dia(action, a.clone()))
    }

    fn dia_cover(&self, action: &str, m: &Term) -> Result<Vec<Term>, CoverError> {
        Ok(vec![self.canon(&syntactic::dia_right_adjoint(
            action,
            &modal_cnf(m)?,
        ))])
    }

    fn const_meet_cover(&self, k: &Term, m: &Term) -> Result<Vec<Term>, CoverError> {
        Ok(vec![
            self.canon(&nnf(&Term::or(Term::not(k.clone()), m.clone())))
        ])
    }

    fn spcon(&self, spec: &SpconSpec, args: &[Term]) -> Result<Term, CoverError> {
        Ok(spec.apply(args))
    }

    fn spcon_cover(&self, spec: &SpconSpec, m: &Term) -> Result<Vec<Vec<Term>>, CoverError> {
        let width = spec.coordinates().len();
        let mut acc = vec![vec![Term::Top; width]];
        for clause in modal_cnf(m)? {
            let part = syntactic::spcon_cover(spec, &clause);
            let mut next = Vec::new();
            for x in &acc {
                for y in &part {
                    next.push(x.iter().zip(y).map(|(p, q)| self.meet(p, q)).collect());
                }
            }
            acc = super::prune(self, next);
        }
        Ok(acc)
    }

    fn lfp(&self, f: &mut StepFn<Term>) -> Result<Term, CoverError> {
        let probe = f(&Term::Bot)?;
        let v = fresh_name("z", &probe.names());
        let body = f(&Term::var(v.clone()))?;
        Ok(if body.occurs_free(&v) {
            Term::mu(v, body)
        } else {
            body
        })
    }

    fn canon(&self, a: &Term) -> Term {
        a.simplify().normalize()
    }

    fn show(&self, a: &Term) -> String {
        print_term(a)
    }
}
