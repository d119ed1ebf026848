//! Suites on algebraic constructions: the product with `2`, the regular
//! harness, the reduced-power counterexample and cut completions.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{Check, Tally};
use crate::completion::{
    complete_modal_structure, dm_completion, extend_left_adjoint, lattice_eval, posets_up_to_iso,
    preservation_check, random_poset, CompletionError, CutLattice, FinitePoset,
    PreservationVerdict,
};
use crate::counterexample::{wrongconf_verify, OrdElem, QuotSeq};
use crate::gen::{random_term, TermShape};
use crate::kripke::{
    eval, product_with_two, random_model, whitman_check, Env, KripkeModel, ModelBounds, StateSet,
    WhitmanReport,
};
use crate::lattice::FinLattice;
use crate::syntax::parse_term;
use crate::systems::regular_harness;
use crate::term::{classify, Fragment, Literal, Term};

fn model(rng: &mut ChaCha8Rng, max_states: usize) -> KripkeModel {
    random_model(
        rng.gen(),
        &ModelBounds {
            max_states,
            ..Default::default()
        },
    )
}

fn nonempty_subset(rng: &mut ChaCha8Rng, m: &KripkeModel) -> StateSet {
    StateSet::singleton(rng.gen_range(0..m.len())).union(StateSet(rng.gen::<u64>()).inter(m.full()))
}

pub(super) fn whitman(rng: &mut ChaCha8Rng, _: u64, budget: Option<usize>) -> Vec<Check> {
    let n = budget.unwrap_or(1000);
    let mut axioms = Tally::new("diamond of the product preserves finite joins");
    let mut projection = Tally::new("first projection is a morphism");
    let mut certificate = Tally::new("consistent antecedents are certified non-bottom");
    let shape = TermShape {
        depth: 4,
        negation: true,
        ..Default::default()
    };
    for i in 0..n {
        let m = model(rng, 4);
        let ys = BTreeMap::from([(
            "a".to_string(),
            (0..rng.gen_range(0..3))
                .map(|_| nonempty_subset(rng, &m))
                .collect(),
        )]);
        let mut alg = product_with_two(&m, &ys).expect("nonempty characters");
        for g in ["p", "q"] {
            alg.bits.insert(g.into(), rng.gen());
        }
        if i % 5 == 0 {
            let carrier = alg.carrier();
            let dia = |x| alg.dia("a", x).expect("declared");
            let mut ok = dia((StateSet::EMPTY, false)) == (StateSet::EMPTY, false);
            for &x in &carrier {
                for &y in &carrier {
                    let (jx, jy) = (dia(x), dia(y));
                    ok &= dia((x.0.union(y.0), x.1 || y.1)) == (jx.0.union(jy.0), jx.1 || jy.1);
                }
            }
            axioms.record(ok, || crate::formats::print_model(&m));
        }
        let t = random_term(rng, &shape);
        let r = match (alg.eval(&t, &BTreeMap::new()), eval(&m, &t, &Env::new())) {
            (Ok(a), Ok(b)) => Ok(a.0 == b),
            (Err(e), _) | (_, Err(e)) => Err(e),
        };
        projection.result(r, || t.to_string());

        let lambda: Vec<Literal> = ["p", "q"]
            .iter()
            .filter_map(|g| match rng.gen_range(0..3) {
                0 => Some(Literal::Pos(Term::gen(*g))),
                1 => Some(Literal::Neg(Term::gen(*g))),
                _ => None,
            })
            .collect();
        let ys: BTreeMap<String, Vec<Term>> = BTreeMap::from([(
            "a".to_string(),
            (0..rng.gen_range(1..3))
                .map(|_| random_term(rng, &shape))
                .collect(),
        )]);
        let r = whitman_check(&lambda, &ys, None, &m).map(|rep| match rep {
            WhitmanReport::BottomWitness { .. } => true,
            rep => rep.certified(),
        });
        certificate.result(r, || format!("{lambda:?} {ys:?}"));
    }
    vec![
        axioms.finish("products"),
        projection.finish("terms"),
        certificate.finish("antecedents"),
    ]
}

pub(super) fn harness(rng: &mut ChaCha8Rng, _: u64, budget: Option<usize>) -> Vec<Check> {
    let mut tally = Tally::new("word approximants stay below the joint limit");
    let shape = TermShape {
        depth: 3,
        negation: true,
        negate_subterms: false,
        nu: false,
        free: vec!["x".into(), "y".into()],
        ..Default::default()
    };
    for _ in 0..budget.unwrap_or(100) {
        let f = random_term(rng, &shape);
        let g = random_term(rng, &shape);
        let m = model(rng, 4);
        let r = regular_harness(&f, &g, &m, &Env::new(), 10, None).map(|(_, v)| v.all());
        tally.result(r, || format!("f = {f}, g = {g}"));
    }
    vec![tally.finish("pairs")]
}

pub(super) fn counterexample(_: &mut ChaCha8Rng, _: u64, budget: Option<usize>) -> Vec<Check> {
    let n_max = budget.unwrap_or(100) as u64;
    let candidates = vec![
        QuotSeq::constant(OrdElem::BOT),
        QuotSeq::constant(OrdElem::Nat(1)),
        QuotSeq::constant(OrdElem::Nat(7)),
        QuotSeq::constant(OrdElem::Omega),
        QuotSeq::phi(0),
        QuotSeq::phi(3),
        QuotSeq::mu(),
        QuotSeq::constant(OrdElem::Nat(2)).with_override(0, OrdElem::Omega),
    ];
    let report = wrongconf_verify(n_max, &candidates);
    let no_bound = report
        .cases
        .iter()
        .all(|c| c.fails_at.is_some() || !c.mu_below);
    vec![
        Check::new(
            "the descending sequence is certified",
            report.certified(),
            format!("n <= {n_max}"),
        ),
        Check::new(
            "no candidate is a lower bound above the least fixed point",
            no_bound,
            format!("{} candidates", report.cases.len()),
        ),
    ]
}

/// All unary maps on `0..n` (for `n ≤ 4`) or a random sample.
fn maps(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<usize>> {
    if n <= 4 {
        (0..n.pow(n as u32))
            .map(|code| (0..n).map(|i| code / n.pow(i as u32) % n).collect())
            .collect()
    } else {
        let mut out: Vec<Vec<usize>> = vec![(0..n).collect()];
        out.extend((0..60).map(|_| (0..n).map(|_| rng.gen_range(0..n)).collect()));
        out
    }
}

fn adjoint_laws(c: &CutLattice, f: &[usize]) -> Result<Option<bool>, CompletionError> {
    match extend_left_adjoint(c, f) {
        Ok(e) => Ok(Some(
            e.extends(c, f)
                && e.adjunction(c)
                && e.preserves_joins(c)
                && e.right_preserves_meets(c),
        )),
        Err(CompletionError::NotJoinPreserving(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

const BODIES: [&str; 6] = ["x", "p", "p | <a>x", "p & x", "<a>(x | p)", "p | <a><a>x"];

pub(super) fn completion(rng: &mut ChaCha8Rng, _: u64, budget: Option<usize>) -> Vec<Check> {
    let mut posets: Vec<FinitePoset> = (1..=5).flat_map(posets_up_to_iso).collect();
    for _ in 0..budget.unwrap_or(200) {
        let n = rng.gen_range(1..=8);
        posets.push(random_poset(rng.gen(), n, rng.gen_range(0.1..0.7)));
    }
    let mut cuts = Tally::new("embedding, density and closure of the cuts");
    let mut adjoints = Tally::new("extended maps are adjoint and extend the original");
    let mut preserved = Tally::new("least fixed points are never contradicted by the completion");
    let bodies: Vec<Term> = BODIES
        .iter()
        .map(|b| parse_term(b).expect("fixed body"))
        .collect();
    for p in &posets {
        let c = match dm_completion(p) {
            Ok(c) => c,
            Err(e) => {
                cuts.record(false, || format!("{}: {e}", crate::formats::print_poset(p)));
                continue;
            }
        };
        let closed = c
            .cuts
            .iter()
            .all(|&a| p.lower_bounds(p.upper_bounds(a)) == a);
        cuts.record(c.embedding_ok() && c.dense() && closed, || {
            crate::formats::print_poset(p)
        });
        let mut accepted = Vec::new();
        for f in maps(rng, p.len()) {
            match adjoint_laws(&c, &f) {
                Ok(Some(ok)) => {
                    adjoints.record(ok, || {
                        format!("{f:?} on {}", crate::formats::print_poset(p))
                    });
                    accepted.push(f);
                }
                Ok(None) => {}
                Err(e) => adjoints.record(false, || format!("{f:?}: {e}")),
            }
        }
        if let Some(f) = accepted.last() {
            let mut q = p.clone();
            q.ops.insert("a".into(), f.clone());
            let c = dm_completion(&q).expect("same carrier");
            let env = BTreeMap::from([("p".to_string(), rng.gen_range(0..q.len()))]);
            for body in &bodies {
                let r = preservation_check(&c, body, "x", &env)
                    .map(|r| !matches!(r.verdict, PreservationVerdict::Violated { .. }));
                preserved.result(r, || {
                    format!("{body} on {}", crate::formats::print_poset(&q))
                });
            }
        }
    }
    let mut desk = Tally::new("embedding commutes with sigma1 and pi1 terms on powersets");
    let shape = TermShape {
        depth: 3,
        negation: true,
        ..Default::default()
    };
    let mut sampled = 0;
    while sampled < budget.unwrap_or(200) {
        let t = random_term(rng, &shape);
        if !matches!(classify(&t), Fragment::Sigma1 | Fragment::Pi1) {
            continue;
        }
        sampled += 1;
        let m = model(rng, 3);
        let l = FinLattice::powerset(&m).expect("small");
        let c = dm_completion(&FinitePoset::from_lattice(&l)).expect("small");
        let r = complete_modal_structure(&c)
            .map_err(|e| e.to_string())
            .and_then(|cl| {
                let env: BTreeMap<String, usize> = ["p", "q"]
                    .iter()
                    .map(|g| (g.to_string(), c.iota[m.val(g).0 as usize]))
                    .collect();
                let got = lattice_eval(&cl, &t, &env).map_err(|e| e.to_string())?;
                let want = eval(&m, &t, &Env::new()).map_err(|e| e.to_string())?;
                Ok(got == c.iota[want.0 as usize])
            });
        desk.result(r, || t.to_string());
    }
    vec![
        cuts.finish("posets"),
        adjoints.finish("join-preserving maps"),
        preserved.finish("bodies"),
        desk.finish("terms"),
    ]
}
