use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{eval, Env, KripkeModel, StateSet};
use crate::term::{Name, Term};

/// How models are drawn for bounded refutation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SamplerConfig {
    /// Every model up to this many states is enumerated...
    pub exhaustive_max_states: usize,
    /// ...unless the model space at that size exceeds this many models, in
    /// which case that many are drawn at random instead.
    pub exhaustive_cap: usize,
    pub random_models: usize,
    pub random_max_states: usize,
    pub seed: u64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            exhaustive_max_states: 3,
            exhaustive_cap: 4096,
            random_models: 200,
            random_max_states: 8,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModelBounds {
    pub min_states: usize,
    pub max_states: usize,
    pub actions: Vec<Name>,
    pub generators: Vec<Name>,
    /// Probability of each potential edge.
    pub edge_density: f64,
}

impl Default for ModelBounds {
    fn default() -> Self {
        ModelBounds {
            min_states: 1,
            max_states: 6,
            actions: vec!["a".into()],
            generators: vec!["p".into(), "q".into()],
            edge_density: 0.35,
        }
    }
}

/// Deterministic random model.
pub fn random_model(seed: u64, bounds: &ModelBounds) -> KripkeModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_model_with(&mut rng, bounds)
}

pub(crate) fn random_model_with(rng: &mut impl Rng, bounds: &ModelBounds) -> KripkeModel {
    let n = rng.gen_range(bounds.min_states..=bounds.max_states.max(bounds.min_states));
    let mut m = KripkeModel::with_states(n);
    for a in &bounds.actions {
        m.declare_action(a);
        for s in 0..n {
            for t in 0..n {
                if rng.gen_bool(bounds.edge_density) {
                    m.add_edge(a, s, t);
                }
            }
        }
    }
    for p in &bounds.generators {
        let bits: u64 = rng.gen();
        m.set_val(p, StateSet(bits).inter(m.full()));
    }
    m
}

/// Decodes a model of `n` states from the bits of `code`: relations first
/// (action-major, row-major), then valuations.
fn decode(n: usize, code: u64, gens: &[Name], actions: &[Name]) -> KripkeModel {
    let mut m = KripkeModel::with_states(n);
    let mut bit = 0;
    for a in actions {
        m.declare_action(a);
        for s in 0..n {
            for t in 0..n {
                if code >> bit & 1 == 1 {
                    m.add_edge(a, s, t);
                }
                bit += 1;
            }
        }
    }
    for p in gens {
        m.set_val(p, StateSet(code >> bit & StateSet::full(n).0));
        bit += n;
    }
    m
}

/// Models for bounded refutation: all small models (subject to the cap),
/// then seeded random ones.
pub fn sample_models(cfg: &SamplerConfig, gens: &[Name], actions: &[Name]) -> Vec<KripkeModel> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Vec::new();
    for n in 0..=cfg.exhaustive_max_states {
        let bits = n * n * actions.len() + n * gens.len();
        if bits < 63 && (1u64 << bits) <= cfg.exhaustive_cap as u64 {
            for code in 0..(1u64 << bits) {
                out.push(decode(n, code, gens, actions));
            }
        } else {
            for _ in 0..cfg.exhaustive_cap {
                let code = if bits >= 64 {
                    rng.gen()
                } else {
                    rng.gen_range(0..(1u64 << bits))
                };
                out.push(decode(n, code, gens, actions));
            }
        }
    }
    let bounds = ModelBounds {
        min_states: 1,
        max_states: cfg.random_max_states.max(1),
        actions: actions.to_vec(),
        generators: gens.to_vec(),
        edge_density: 0.3,
    };
    for _ in 0..cfg.random_models {
        out.push(random_model_with(&mut rng, &bounds));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LeqVerdict {
    /// `lhs` holds and `rhs` fails at `state`.
    Refuted { model: KripkeModel, state: usize },
    /// No counterexample among this many models; not a proof.
    Unrefuted { samples: usize },
}

impl LeqVerdict {
    pub fn is_refuted(&self) -> bool {
        matches!(self, LeqVerdict::Refuted { .. })
    }
}

fn signature(terms: &[&Term]) -> (Vec<Name>, Vec<Name>) {
    let mut gens = BTreeSet::new();
    let mut acts = BTreeSet::new();
    for t in terms {
        gens.extend(t.generators());
        gens.extend(t.free_vars());
        acts.extend(t.actions());
    }
    (gens.into_iter().collect(), acts.into_iter().collect())
}

/// Bounded refutation of `lhs ≤ rhs`. Free variables are treated like
/// generators.
pub fn check_leq(lhs: &Term, rhs: &Term, cfg: &SamplerConfig) -> LeqVerdict {
    let (gens, acts) = signature(&[lhs, rhs]);
    let models = sample_models(cfg, &gens, &acts);
    check_leq_on(&models, lhs, rhs)
}

/// Bounded refutation over a given model list.
pub fn check_leq_on(models: &[KripkeModel], lhs: &Term, rhs: &Term) -> LeqVerdict {
    let vars: Vec<Name> = lhs.free_vars().union(&rhs.free_vars()).cloned().collect();
    for m in models {
        let env: Env = vars.iter().map(|v| (v.clone(), m.val(v))).collect();
        let (Ok(l), Ok(r)) = (eval(m, lhs, &env), eval(m, rhs, &env)) else {
            continue;
        };
        if let Some(state) = l.minus(r).first() {
            return LeqVerdict::Refuted {
                model: m.clone(),
                state,
            };
        }
    }
    LeqVerdict::Unrefuted {
        samples: models.len(),
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
    fn refuter_examples() {
        let cfg = SamplerConfig::default();
        assert!(!check_leq(&p("p & ~p"), &Term::Bot, &cfg).is_refuted());
        match check_leq(&Term::Top, &p("p"), &cfg) {
            LeqVerdict::Refuted { model, state } => {
                assert_eq!(model.len(), 1);
                assert!(!model.val("p").contains(state));
            }
            v => panic!("{v:?}"),
        }
        let exhaustive = SamplerConfig {
            exhaustive_cap: 1 << 20,
            random_models: 0,
            ..cfg
        };
        assert!(!check_leq(&p("<a>(p | q)"), &p("<a>p | <a>q"), &exhaustive).is_refuted());
        assert!(check_leq(&p("[a](p | q)"), &p("[a]p | [a]q"), &exhaustive).is_refuted());
    }

    #[test]
    fn exhaustive_enumeration_counts() {
        let cfg = SamplerConfig {
            exhaustive_max_states: 2,
            exhaustive_cap: 1 << 20,
            random_models: 0,
            ..Default::default()
        };
        let ms = sample_models(&cfg, &["p".into()], &["a".into()]);
        // n=0: 1, n=1: 2^(1+1), n=2: 2^(4+2)
        assert_eq!(ms.len(), 1 + 4 + 64);
        let distinct: BTreeSet<String> = ms.iter().map(|m| m.to_string()).collect();
        assert_eq!(distinct.len(), ms.len());
    }

    #[test]
    fn random_models_are_reproducible() {
        let b = ModelBounds::default();
        for seed in [1, 2, 3] {
            assert_eq!(random_model(seed, &b), random_model(seed, &b));
            let m = random_model(seed, &b);
            assert!(m.len() >= b.min_states && m.len() <= b.max_states);
        }
        assert_ne!(random_model(1, &b), random_model(2, &b));
    }
}
