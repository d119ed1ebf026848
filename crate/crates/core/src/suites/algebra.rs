//! Suites over terms and equation systems evaluated in Kripke models.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{Check, Tally};
use crate::covers::kleene_inverse_iteration;
use crate::gen::{random_simple_system, random_system, random_term, TermShape};
use crate::kripke::{
    check_leq_on, eval, lfp_iterate, random_model, sample_models, Env, KripkeModel, ModelBounds,
    SamplerConfig, StateSet,
};
use crate::lattice::FinLattice;
use crate::systems::{
    bekic_solve, compile_sigma1, generator_env, guard_system, lattice_bekic, lattice_simultaneous,
    powerset_translate, sandwich_check, simultaneous_solve, Assignment,
};
use crate::term::{self, nnf, Term};

fn model(rng: &mut ChaCha8Rng, max_states: usize, actions: &[&str]) -> KripkeModel {
    let bounds = ModelBounds {
        max_states,
        actions: actions.iter().map(|a| a.to_string()).collect(),
        ..Default::default()
    };
    random_model(rng.gen(), &bounds)
}

fn sigma1_shape(depth: usize) -> TermShape {
    TermShape {
        depth,
        nu: false,
        negation: true,
        negate_subterms: false,
        ..Default::default()
    }
}

/// All monotone maps `L × L → L` on a chain, as tables indexed `x·n + y`.
fn monotone_maps(n: usize) -> Vec<Vec<usize>> {
    let cells = n * n;
    let mut out = Vec::new();
    let mut table = vec![0; cells];
    loop {
        let monotone = (0..cells).all(|c| {
            let (x, y) = (c / n, c % n);
            (x + 1 >= n || table[c] <= table[c + n]) && (y + 1 >= n || table[c] <= table[c + 1])
        });
        if monotone {
            out.push(table.clone());
        }
        let mut i = 0;
        while i < cells && table[i] == n - 1 {
            table[i] = 0;
            i += 1;
        }
        if i == cells {
            return out;
        }
        table[i] += 1;
    }
}

pub(super) fn bekic(rng: &mut ChaCha8Rng, _: u64, budget: Option<usize>) -> Vec<Check> {
    let mut random = Tally::new("random systems, elimination = joint iteration");
    for _ in 0..budget.unwrap_or(1000) {
        let k = rng.gen_range(1..=3);
        let shape = TermShape {
            depth: rng.gen_range(1..=4),
            negation: true,
            negate_subterms: false,
            ..Default::default()
        };
        let s = random_system(rng, k, &shape);
        let m = model(rng, 6, &["a"]);
        let env = Env::new();
        let r = match (bekic_solve(&s, &m, &env), simultaneous_solve(&s, &m, &env)) {
            (Ok(a), Ok((b, _))) => Ok(a == b),
            (Err(e), _) | (_, Err(e)) => Err(e),
        };
        random.result(r, || s.to_string().replace('\n', "; "));
    }
    let mut chains = Tally::new("all monotone pairs on the 2- and 3-chain");
    for n in [2, 3] {
        let l = FinLattice::chain(n);
        let maps = monotone_maps(n);
        for f in &maps {
            for g in &maps {
                let fx = |x: usize, y: usize| f[x * n + y];
                let gx = |x: usize, y: usize| g[x * n + y];
                chains.record(
                    lattice_simultaneous(&l, fx, gx) == lattice_bekic(&l, fx, gx),
                    || format!("{f:?} {g:?}"),
                );
            }
        }
    }
    vec![
        random.finish("system/model pairs"),
        chains.finish("map pairs"),
    ]
}

pub(super) fn sigma1(rng: &mut ChaCha8Rng, _: u64, budget: Option<usize>) -> Vec<Check> {
    let mut park = Tally::new("least prefixed point = limit of approximants");
    let mut steps = Tally::new("stabilisation within |states| + 1 steps");
    let shape = TermShape {
        free: vec!["x".into()],
        ..sigma1_shape(4)
    };
    for _ in 0..budget.unwrap_or(500) {
        let body = random_term(rng, &shape);
        let m = model(rng, 6, &["a"]);
        let mut env = Env::new();
        let mut least = m.full();
        let mut all = Vec::new();
        let mut failed = None;
        for mask in 0..1u64 << m.len() {
            env.insert("x".into(), StateSet(mask));
            match eval(&m, &body, &env) {
                Ok(v) if v.is_subset(StateSet(mask)) => {
                    least = least.inter(StateSet(mask));
                    all.push(StateSet(mask));
                }
                Ok(_) => {}
                Err(e) => failed = Some(e),
            }
        }
        let t = Term::mu("x", body.clone());
        let trace = lfp_iterate(&m, &body, "x", &Env::new());
        let r = match (failed, trace) {
            (None, Ok(tr)) => {
                let minimum = all.contains(&least);
                steps.record(tr.stabilized_at() <= m.len() + 1, || {
                    format!("{t}: {} steps", tr.stabilized_at())
                });
                Ok(minimum && *tr.limit() == least)
            }
            (Some(e), _) | (_, Err(e)) => Err(e),
        };
        park.result(r, || t.to_string());
    }
    vec![park.finish("term/model pairs"), steps.finish("traces")]
}

pub(super) fn guard(rng: &mut ChaCha8Rng, _: u64, budget: Option<usize>) -> Vec<Check> {
    let n = budget.unwrap_or(500);
    let mut terms = Tally::new("eval(t) = eval(guard(t))");
    let shape = TermShape {
        negation: true,
        ..Default::default()
    };
    for _ in 0..n {
        let t = random_term(rng, &shape);
        let g = term::guard(&nnf(&t));
        let m = model(rng, 6, &["a"]);
        let r = match (eval(&m, &t, &Env::new()), eval(&m, &g, &Env::new())) {
            (Ok(a), Ok(b)) => Ok(a == b),
            (Err(e), _) | (_, Err(e)) => Err(e),
        };
        terms.result(r, || format!("{t} vs {g}"));
    }
    let mut same = Tally::new("guarded system has the same solution");
    let mut sandwich = Tally::new("each rewrite step: F^k <= G^k <= F^2k for k <= 20");
    let shape = TermShape {
        depth: 3,
        negation: true,
        negate_subterms: false,
        ..Default::default()
    };
    let mut tries = 0;
    while tries < n.div_ceil(5) || sandwich.cases() == 0 && tries < 200 {
        tries += 1;
        let k = rng.gen_range(1..=3);
        let s = random_system(rng, k, &shape);
        let m = model(rng, 5, &["a"]);
        let env = Env::new();
        let Ok((g, log)) = guard_system(&s) else {
            same.record(false, || format!("guarding failed on {s}"));
            continue;
        };
        let r = match (
            simultaneous_solve(&s, &m, &env),
            simultaneous_solve(&g, &m, &env),
        ) {
            (Ok(a), Ok(b)) => Ok(a.0 == b.0),
            (Err(e), _) | (_, Err(e)) => Err(e),
        };
        same.result(r, || s.to_string().replace('\n', "; "));
        for step in &log {
            sandwich.result(
                sandwich_check(&step.before, &step.after, &m, &env, 20),
                || format!("{:?} on {}", step.kind, step.variable),
            );
        }
    }
    vec![
        terms.finish("term/model pairs"),
        same.finish("systems"),
        sandwich.finish("steps"),
    ]
}

fn random_assignment(rng: &mut ChaCha8Rng, vars: &[String], m: &KripkeModel) -> Assignment {
    vars.iter()
        .map(|x| (x.clone(), StateSet(rng.gen::<u64>()).inter(m.full())))
        .collect()
}

pub(super) fn powerset(rng: &mut ChaCha8Rng, _: u64, budget: Option<usize>) -> Vec<Check> {
    let mut comm = Tally::new("conjunctions of equations commute with the translation");
    let mut transfer = Tally::new("approximants correspond stage by stage");
    let mut retract = Tally::new("projection after embedding is the identity");
    for _ in 0..budget.unwrap_or(200) {
        let k = rng.gen_range(1..=3);
        let s = random_simple_system(rng, k, 2);
        let m = model(rng, 5, &["a", "b"]);
        let env = Env::new();
        let t = match powerset_translate(&s) {
            Ok(t) => t,
            Err(e) => {
                comm.record(false, || format!("{s}: {e}"));
                continue;
            }
        };
        let mut points: Vec<Assignment> = (0..4)
            .map(|_| random_assignment(rng, &s.bound, &m))
            .collect();
        if let Ok(fs) = s.approximants(&m, &env, 6) {
            points.extend(fs);
        }
        for x in &points {
            comm.result(t.commutes_at(&m, &env, x), || {
                s.to_string().replace('\n', "; ")
            });
            retract.record(t.project(&t.embed(x)) == *x, || {
                s.to_string().replace('\n', "; ")
            });
        }
        transfer.result(t.transfer_holds(&m, &env, 8), || {
            s.to_string().replace('\n', "; ")
        });
    }
    vec![
        comm.finish("points"),
        transfer.finish("systems"),
        retract.finish("points"),
    ]
}

pub(super) fn arrow(rng: &mut ChaCha8Rng, seed: u64, budget: Option<usize>) -> Vec<Check> {
    let cfg = SamplerConfig {
        exhaustive_max_states: 3,
        exhaustive_cap: 1 << 16,
        random_models: 200,
        random_max_states: 8,
        seed,
    };
    let models = sample_models(&cfg, &["p".into(), "q".into()], &["a".into()]);
    let shape = TermShape {
        depth: 2,
        mu: false,
        nu: false,
        negation: true,
        ..Default::default()
    };
    let items = |rng: &mut ChaCha8Rng, k: usize| -> Vec<Term> {
        (0..k).map(|_| random_term(rng, &shape)).collect()
    };
    let mut out = Vec::new();
    for case in 0..3 {
        let name = [
            "both empty: the empty arrow",
            "one empty: bottom",
            "both nonempty: crossed meets",
        ][case];
        let mut tally = Tally::new(name);
        for _ in 0..budget.unwrap_or(8) {
            let (k1, k2) = match case {
                0 => (0, 0),
                1 if rng.gen_bool(0.5) => (0, rng.gen_range(1..=2)),
                1 => (rng.gen_range(1..=2), 0),
                _ => (rng.gen_range(1..=2), rng.gen_range(1..=2)),
            };
            let (d1, d2) = (items(rng, k1), items(rng, k2));
            let lhs = Term::and(term::arrow("a", &d1), term::arrow("a", &d2));
            let rhs = match case {
                0 => term::arrow("a", &[]),
                1 => Term::Bot,
                _ => {
                    let (j1, j2) = (Term::big_or(d1.clone()), Term::big_or(d2.clone()));
                    let mut crossed: Vec<Term> = d1
                        .iter()
                        .map(|d| Term::and(d.clone(), j2.clone()))
                        .collect();
                    crossed.extend(d2.iter().map(|d| Term::and(j1.clone(), d.clone())));
                    term::arrow("a", &crossed)
                }
            };
            let ok = !check_leq_on(&models, &lhs, &rhs).is_refuted()
                && !check_leq_on(&models, &rhs, &lhs).is_refuted();
            tally.record(ok, || format!("{lhs} = {rhs}"));
        }
        out.push(tally.finish(&format!("identities over {} models", models.len())));
    }
    out
}

pub(super) fn star(rng: &mut ChaCha8Rng, seed: u64, budget: Option<usize>) -> Vec<Check> {
    let n = budget.unwrap_or(100);
    let cfg = SamplerConfig {
        exhaustive_max_states: 2,
        random_models: 2 * n,
        random_max_states: 8,
        seed,
        ..Default::default()
    };
    let models = sample_models(&cfg, &["p".into(), "q".into()], &["a".into()]);
    let star = Term::mu(
        "y",
        Term::or(Term::gen("p"), Term::dia("a", Term::var("y"))),
    );
    let mut semantic = Tally::new("star = union of iterated diamonds");
    for m in &models {
        let mut layer = m.val("p");
        let mut union = layer;
        for _ in 0..=m.len() {
            layer = m.dia("a", layer).unwrap_or(StateSet::EMPTY);
            union = union.union(layer);
        }
        semantic.result(eval(m, &star, &Env::new()).map(|v| v == union), || {
            crate::formats::print_model(m)
        });
    }
    let mut syntactic = Tally::new("inverse-diamond iteration stabilises within |FL|");
    let mut sound = Tally::new("star of the stabilised meet stays below the clause");
    let check_models = &models[..models.len().min(60)];
    let shape = TermShape {
        depth: 3,
        negation: true,
        ..Default::default()
    };
    for _ in 0..n {
        let b = nnf(&random_term(rng, &shape));
        match kleene_inverse_iteration("a", &b, 64) {
            Ok(it) => {
                syntactic.record(it.stabilized && it.steps() <= it.fl_size, || {
                    format!("{b}: {} steps, |FL| = {}", it.steps(), it.fl_size)
                });
                let lhs = Term::mu(
                    "y",
                    Term::or(it.meet.clone(), Term::dia("a", Term::var("y"))),
                );
                sound.record(!check_leq_on(check_models, &lhs, &b).is_refuted(), || {
                    format!("{b}: meet {}", it.meet)
                });
            }
            Err(e) => syntactic.record(false, || format!("{b}: {e}")),
        }
    }
    vec![
        semantic.finish("models"),
        syntactic.finish("clauses"),
        sound.finish("clauses"),
    ]
}

pub(super) fn compile(rng: &mut ChaCha8Rng, _: u64, budget: Option<usize>) -> Vec<Check> {
    let mut tally = Tally::new("designated coordinate of the compiled system = eval");
    for _ in 0..budget.unwrap_or(300) {
        let t = nnf(&random_term(rng, &sigma1_shape(4)));
        let m = model(rng, 6, &["a"]);
        let r = compile_sigma1(&t).and_then(|(s, x)| {
            let env = generator_env(&m, &s);
            Ok(bekic_solve(&s, &m, &env)?[&x] == eval(&m, &t, &Env::new())?)
        });
        tally.result(r, || t.to_string());
    }
    vec![tally.finish("term/model pairs")]
}
