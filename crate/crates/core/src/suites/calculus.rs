//! Suites for the cover calculus: finite backends against the enumeration
//! oracle, and the syntactic backend against sampled models.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{Check, Tally};
use crate::covers::{
    apply, constructive_sup, cover, same_lower_set, semantic_cover_oracle, spcon_cover, Backend,
    CoverError, Descriptor, FinBackend, SyntacticBackend,
};
use crate::gen::{random_term, TermShape};
use crate::kripke::{
    check_leq_on, random_model, sample_models, KripkeModel, ModelBounds, SamplerConfig,
};
use crate::lattice::FinLattice;
use crate::term::{modal_cnf, nnf, Literal, SpconSpec, Term};

fn small_model(rng: &mut ChaCha8Rng, max_states: usize, actions: &[&str]) -> KripkeModel {
    let bounds = ModelBounds {
        max_states,
        actions: actions.iter().map(|a| a.to_string()).collect(),
        ..Default::default()
    };
    random_model(rng.gen(), &bounds)
}

fn with_op(mut l: FinLattice, table: Vec<usize>) -> FinBackend {
    l.ops.insert("a".into(), table);
    FinBackend::new(l)
}

/// Small non-powerset lattices, each with a join-preserving operation `a`.
fn fixed_backends() -> Vec<(&'static str, FinBackend)> {
    let order = |n: usize, pairs: &[(usize, usize)]| {
        let leq = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| i == j || i == 0 || j == n - 1 || pairs.contains(&(i, j)))
                    .collect()
            })
            .collect();
        FinLattice::from_order(leq).expect("lattice")
    };
    vec![
        (
            "chain(5), a = shift down",
            with_op(FinLattice::chain(5), vec![0, 0, 1, 2, 3]),
        ),
        (
            "M3, a = rotate atoms",
            with_op(order(5, &[]), vec![0, 2, 3, 1, 4]),
        ),
        (
            "N5, a = collapse to top",
            with_op(order(5, &[(1, 2)]), vec![0, 4, 4, 4, 4]),
        ),
    ]
}

fn finite_descriptors(b: &FinBackend) -> Vec<Descriptor<usize>> {
    let n = b.lattice.len();
    let dia = Descriptor::Diamond("a".into());
    let join_dia = Descriptor::compose(
        Descriptor::Join(2),
        Descriptor::Pair(vec![
            Descriptor::proj(2, 1),
            Descriptor::compose(dia.clone(), Descriptor::proj(2, 0)),
        ]),
    );
    vec![
        Descriptor::Identity(2),
        Descriptor::Join(2),
        Descriptor::Join(3),
        Descriptor::proj(3, 2),
        Descriptor::Constant {
            arity: 1,
            value: n / 2,
        },
        Descriptor::compose(Descriptor::ConstMeet(1 % n), Descriptor::Join(2)),
        Descriptor::Pair(vec![Descriptor::proj(2, 0), Descriptor::Join(2)]),
        dia.clone(),
        Descriptor::compose(dia.clone(), dia.clone()),
        Descriptor::compose(dia.clone(), Descriptor::Join(2)),
        join_dia.clone(),
        Descriptor::compose(
            dia.clone(),
            Descriptor::compose(Descriptor::ConstMeet((n - 1) / 2), dia),
        ),
        Descriptor::mu(join_dia, 0),
    ]
}

/// `cover(d, m)` and the oracle generate the same lower set, for every `m`.
fn agrees_with_oracle(b: &FinBackend, d: &Descriptor<usize>) -> Result<bool, CoverError> {
    let n = b.lattice.len();
    let k = d.shape()?.1;
    for code in 0..n.pow(k as u32) {
        let target: Vec<usize> = (0..k).map(|i| code / n.pow(i as u32) % n).collect();
        let got = cover(b, d, &target)?;
        if !same_lower_set(b, &got.vectors, &semantic_cover_oracle(b, d, &target)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn syntactic_descriptors(rng: &mut ChaCha8Rng) -> Vec<Descriptor<Term>> {
    let k = random_term(
        rng,
        &TermShape {
            depth: 1,
            mu: false,
            nu: false,
            ..Default::default()
        },
    );
    let dia = Descriptor::Diamond("a".into());
    vec![
        Descriptor::Join(2),
        dia.clone(),
        Descriptor::compose(dia.clone(), Descriptor::Join(2)),
        Descriptor::compose(Descriptor::ConstMeet(k.clone()), dia.clone()),
        Descriptor::compose(
            dia.clone(),
            Descriptor::compose(Descriptor::ConstMeet(k), dia),
        ),
    ]
}

pub(super) fn covers(rng: &mut ChaCha8Rng, _: u64, budget: Option<usize>) -> Vec<Check> {
    let mut powersets = Tally::new("powerset backends agree with the oracle");
    for _ in 0..budget.unwrap_or(24) {
        let m = small_model(rng, 3, &["a"]);
        let b = FinBackend::new(FinLattice::powerset(&m).expect("small"));
        for d in finite_descriptors(&b) {
            powersets.result(agrees_with_oracle(&b, &d), || {
                format!("{d:?} on {}", crate::formats::print_model(&m))
            });
        }
    }
    let mut fixed = Tally::new("chain, M3 and N5 agree with the oracle");
    for (name, b) in fixed_backends() {
        for d in finite_descriptors(&b) {
            fixed.result(agrees_with_oracle(&b, &d), || format!("{d:?} on {name}"));
        }
    }
    let models = sample_models(
        &SamplerConfig {
            random_models: 100,
            ..Default::default()
        },
        &["p".into(), "q".into()],
        &["a".into()],
    );
    let mut sound = Tally::new("syntactic covers are sound on sampled models");
    let shape = TermShape {
        depth: 3,
        negation: true,
        mu: false,
        nu: false,
        ..Default::default()
    };
    let sb = SyntacticBackend;
    for _ in 0..budget.unwrap_or(40) {
        let ds = syntactic_descriptors(rng);
        let d = ds.choose(rng).expect("nonempty").clone();
        let k = d.shape().expect("well formed").1;
        let target: Vec<Term> = (0..k).map(|_| nnf(&random_term(rng, &shape))).collect();
        let r = cover(&sb, &d, &target).and_then(|cs| {
            for c in &cs.vectors {
                for (lhs, rhs) in apply(&sb, &d, c)?.iter().zip(&target) {
                    if check_leq_on(&models, lhs, rhs).is_refuted() {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        });
        sound.result(r, || format!("{d:?} at {target:?}"));
    }
    vec![
        powersets.finish("descriptor/lattice pairs"),
        fixed.finish("descriptor/lattice pairs"),
        sound.finish("targets"),
    ]
}

/// Mu descriptors over `(x, y)` binding `x`.
fn mu_family() -> Vec<(&'static str, Descriptor<usize>)> {
    let (a, b) = (
        Descriptor::Diamond("a".into()),
        Descriptor::Diamond("b".into()),
    );
    let x = Descriptor::proj(2, 0);
    let y = Descriptor::proj(2, 1);
    let join = |l, r| Descriptor::compose(Descriptor::Join(2), Descriptor::Pair(vec![l, r]));
    let after = |d: &Descriptor<usize>, e| Descriptor::compose(d.clone(), e);
    vec![
        (
            "mu x. y | <a>x",
            Descriptor::mu(join(y.clone(), after(&a, x.clone())), 0),
        ),
        (
            "mu x. <b>y | <a>x",
            Descriptor::mu(join(after(&b, y.clone()), after(&a, x.clone())), 0),
        ),
        (
            "mu x. y | <a><b>x",
            Descriptor::mu(join(y.clone(), after(&a, after(&b, x.clone()))), 0),
        ),
        (
            "mu x. y | <a>x | <b>x",
            Descriptor::mu(
                join(join(y.clone(), after(&a, x.clone())), after(&b, x.clone())),
                0,
            ),
        ),
        (
            "mu x. <a>(x | y)",
            Descriptor::mu(after(&a, Descriptor::Join(2)), 0),
        ),
        ("mu x. x", Descriptor::mu(x, 0)),
    ]
}

pub(super) fn mucovers(rng: &mut ChaCha8Rng, _: u64, budget: Option<usize>) -> Vec<Check> {
    let mut oracle = Tally::new("pan covers agree with the oracle");
    let mut antichain = Tally::new("pan covers form an antichain");
    let mut pigeonhole = Tally::new("N = |graph| approximants decide every upper bound");
    for _ in 0..budget.unwrap_or(16) {
        let m = small_model(rng, 4, &["a", "b"]);
        let b = FinBackend::new(FinLattice::powerset(&m).expect("small"));
        for (name, d) in mu_family() {
            let what = || format!("{name} on {}", crate::formats::print_model(&m));
            oracle.result(agrees_with_oracle(&b, &d), what);
            for l in 0..b.lattice.len() {
                if let Ok(cs) = cover(&b, &d, &[l]) {
                    let ok = cs.vectors.iter().enumerate().all(|(i, u)| {
                        cs.vectors
                            .iter()
                            .enumerate()
                            .all(|(j, v)| i == j || !u.iter().zip(v).all(|(p, q)| b.leq(p, q)))
                    });
                    antichain.record(ok, || format!("{name} at {l}"));
                }
            }
            let param = rng.gen_range(0..b.lattice.len());
            pigeonhole.result(
                constructive_sup(&b, &d, &[param], 1 << 12).map(|r| r.bound_holds),
                what,
            );
        }
    }
    vec![
        oracle.finish("descriptor/model pairs"),
        antichain.finish("cover sets"),
        pigeonhole.finish("descriptor/model pairs"),
    ]
}

fn random_spec(rng: &mut ChaCha8Rng) -> SpconSpec {
    let mut literals = Vec::new();
    for g in ["p", "q"] {
        match rng.gen_range(0..4) {
            0 => literals.push(Literal::Pos(Term::gen(g))),
            1 => literals.push(Literal::Neg(Term::gen(g))),
            _ => {}
        }
    }
    let mut next = 0;
    let mut blocks = Vec::new();
    for a in ["a", "b"] {
        if blocks.is_empty() || rng.gen_bool(0.4) {
            let k = rng.gen_range(1..=2);
            blocks.push((
                a.to_string(),
                (next..next + k).map(|i| format!("x{i}")).collect(),
            ));
            next += k;
        }
    }
    SpconSpec::new(literals, blocks).expect("disjoint blocks")
}

pub(super) fn spcon(rng: &mut ChaCha8Rng, seed: u64, budget: Option<usize>) -> Vec<Check> {
    let cfg = SamplerConfig {
        exhaustive_max_states: 2,
        random_models: 150,
        random_max_states: 5,
        seed,
        ..Default::default()
    };
    let models = sample_models(
        &cfg,
        &["p".into(), "q".into(), "r".into()],
        &["a".into(), "b".into()],
    );
    let shape = TermShape {
        depth: 2,
        generators: 3,
        actions: 2,
        negation: true,
        mu: false,
        nu: false,
        ..Default::default()
    };
    let mut sound = Tally::new("every cover vector lies below the clause");
    let mut complete = Tally::new("probe vectors below the clause lie below some cover");
    let mut nonempty = Tally::new("every clause has a cover");
    let mut formulas = Tally::new("covers are the per-coordinate and per-box vectors");
    for _ in 0..budget.unwrap_or(100) {
        let spec = spcon_spec_and_clause(rng, &shape);
        let (spec, clause) = match spec {
            Some(p) => p,
            None => continue,
        };
        let rhs = clause.to_term();
        let covers = spcon_cover(&spec, &clause);
        let mut got = covers.clone();
        let mut want = expected_vectors(&spec, &clause);
        got.sort();
        want.sort();
        formulas.record(got == want, || format!("{rhs}: {got:?} vs {want:?}"));
        nonempty.record(
            !covers.is_empty() || spec.literals.is_empty() && spec.blocks.is_empty(),
            || format!("{rhs}"),
        );
        for c in &covers {
            sound.record(
                !check_leq_on(&models, &spec.apply(c), &rhs).is_refuted(),
                || format!("{} vs {rhs}", spec.apply(c)),
            );
        }
        let arity = spec.coordinates().len();
        let mut pool: Vec<Term> = vec![Term::Top, Term::Bot];
        pool.extend(clause.diamonds.values().cloned());
        pool.extend(clause.boxes.values().flatten().cloned());
        pool.push(random_term(rng, &shape));
        for _ in 0..6 {
            let probe: Vec<Term> = (0..arity)
                .map(|_| pool.choose(rng).expect("nonempty").clone())
                .collect();
            if check_leq_on(&models, &spec.apply(&probe), &rhs).is_refuted() {
                continue;
            }
            let below = covers.iter().any(|c| {
                probe
                    .iter()
                    .zip(c)
                    .all(|(x, y)| !check_leq_on(&models, x, y).is_refuted())
            });
            complete.record(below, || format!("{probe:?} under {rhs}"));
        }
    }
    vec![
        formulas.finish("clauses"),
        sound.finish("cover vectors"),
        complete.finish("probes"),
        nonempty.finish("clauses"),
    ]
}

fn spcon_spec_and_clause(
    rng: &mut ChaCha8Rng,
    shape: &TermShape,
) -> Option<(SpconSpec, crate::term::Clause)> {
    let spec = random_spec(rng);
    let t = nnf(&random_term(rng, shape));
    let clauses = modal_cnf(&t).ok()?;
    let clause = clauses.choose(rng)?.clone();
    Some((spec, clause))
}

/// The cover vectors read off the clause: with `d` the diamond body for
/// action `a`, one vector puts `d` at a single coordinate of block `a`,
/// and one per box body `e` puts `d | e` on the whole block.
fn expected_vectors(spec: &SpconSpec, clause: &crate::term::Clause) -> Vec<Vec<Term>> {
    let coords = spec.coordinates();
    let top = vec![Term::Top; coords.len()];
    let clash = spec.literals.iter().any(|l| match l {
        Literal::Pos(t) => spec.literals.contains(&Literal::Neg(t.clone())),
        _ => false,
    });
    let shared = spec
        .literals
        .iter()
        .any(|l| !matches!(l, Literal::Top) && clause.literals.contains(l));
    if clause.is_top() || clash || shared {
        return vec![top];
    }
    let mut out = Vec::new();
    for (action, block) in &spec.blocks {
        let d = clause.diamonds.get(action).cloned().unwrap_or(Term::Bot);
        let at = |v: &String| coords.iter().position(|c| c == v).expect("coordinate");
        for y in block {
            let mut c = top.clone();
            c[at(y)] = d.clone();
            out.push(c);
        }
        for e in clause.boxes.get(action).into_iter().flatten() {
            let mut c = top.clone();
            for y in block {
                c[at(y)] = Term::or(d.clone(), e.clone()).simplify();
            }
            out.push(c);
        }
    }
    out
}
