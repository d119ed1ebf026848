use std::collections::{BTreeMap, BTreeSet};

use super::{Assignment, System, SystemError};
use crate::kripke::{eval, Env, KripkeError, KripkeModel, StateSet};
use crate::term::{Name, Term};

fn below(a: &Assignment, b: &Assignment, proj: &BTreeMap<Name, Name>) -> bool {
    proj.iter().all(|(x, y)| a[x].is_subset(b[y]))
}

fn above(a: &Assignment, b: &Assignment, proj: &BTreeMap<Name, Name>) -> bool {
    proj.iter().all(|(x, y)| b[y].is_subset(a[x]))
}

/// The approximant chains of `f` and `g` are cofinal in each other up to
/// depth `n`: every `Fᵏ(⊥)` (`k ≤ n`) is below some `Gᵏ'(⊥)` with
/// `k' ≤ 2n`, and conversely. `projection` maps variables of `f` to those
/// of `g` (identity when absent).
pub fn cofinal_check(
    f: &System,
    g: &System,
    m: &KripkeModel,
    env: &Env,
    n: usize,
    projection: Option<&BTreeMap<Name, Name>>,
) -> Result<bool, SystemError> {
    let identity: BTreeMap<Name, Name> = f.bound.iter().map(|x| (x.clone(), x.clone())).collect();
    let proj = projection.unwrap_or(&identity);
    let fs = f.approximants(m, env, 2 * n)?;
    let gs = g.approximants(m, env, 2 * n)?;
    let forth = fs[..=n]
        .iter()
        .all(|a| gs.iter().any(|b| below(a, b, proj)));
    let back = gs[..=n]
        .iter()
        .all(|b| fs.iter().any(|a| above(a, b, proj)));
    Ok(forth && back)
}

/// `Fᵏ(⊥) ≤ Gᵏ(⊥) ≤ F²ᵏ(⊥)` for every `k ≤ n`, on the variables of `f`.
pub fn sandwich_check(
    f: &System,
    g: &System,
    m: &KripkeModel,
    env: &Env,
    n: usize,
) -> Result<bool, SystemError> {
    let proj: BTreeMap<Name, Name> = f.bound.iter().map(|x| (x.clone(), x.clone())).collect();
    let fs = f.approximants(m, env, 2 * n)?;
    let gs = g.approximants(m, env, n)?;
    Ok((0..=n).all(|k| below(&fs[k], &gs[k], &proj) && above(&fs[2 * k], &gs[k], &proj)))
}

type Pair = (StateSet, StateSet);

/// Sequences computed by [`regular_harness`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularHarnessTrace {
    /// Joint approximants `(fₙ, gₙ)`.
    pub joint: Vec<Pair>,
    /// `hₙ₊₁ = f(hₙ, iₙ₊₁)`, `iₙ₊₁ = μy.g(hₙ, y)`.
    pub direct: Vec<Pair>,
    /// Distinct values of `(ℓ_w, m_w)` over words `w` of each length.
    pub levels: Vec<BTreeSet<Pair>>,
    pub width: usize,
    /// Limit of the joint approximants.
    pub limit: Pair,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HarnessVerdicts {
    pub monotone: bool,
    /// `(fₙ, gₙ) ≤ (hₙ, iₙ)`.
    pub joint_below_direct: bool,
    /// `hₙ = ⋁ ℓ_w` and `iₙ = ⋁ m_w` over words of length `n`.
    pub direct_is_word_join: bool,
    /// Every `(ℓ_w, m_w)` lies below the joint limit.
    pub words_below_limit: bool,
}

impl HarnessVerdicts {
    pub fn all(&self) -> bool {
        self.monotone
            && self.joint_below_direct
            && self.direct_is_word_join
            && self.words_below_limit
    }
}

/// Runs the two-variable Bekič comparison for `f, g` over the variables
/// `x`, `y`. Word letters `k ≤ width` pick the stage `g_ℓᵏ(⊥)` of the inner
/// iteration; the default width is the number of states, which is enough
/// for every inner iteration to stabilise.
pub fn regular_harness(
    f: &Term,
    g: &Term,
    m: &KripkeModel,
    env: &Env,
    depth: usize,
    width: Option<usize>,
) -> Result<(RegularHarnessTrace, HarnessVerdicts), KripkeError> {
    let width = width.unwrap_or(m.len());
    let ev = |t: &Term, x: StateSet, y: StateSet| {
        let mut local = env.clone();
        local.insert("x".into(), x);
        local.insert("y".into(), y);
        eval(m, t, &local)
    };
    let bot = StateSet::EMPTY;
    let inner_stage = |l: StateSet, k: usize| -> Result<StateSet, KripkeError> {
        let mut y = bot;
        for _ in 0..k {
            y = ev(g, l, y)?;
        }
        Ok(y)
    };
    let inner_lfp = |l: StateSet| -> Result<StateSet, KripkeError> {
        let mut y = bot;
        loop {
            let n = ev(g, l, y)?;
            if n == y {
                return Ok(y);
            }
            y = n;
        }
    };

    let mut joint = vec![(bot, bot)];
    let mut direct = vec![(bot, bot)];
    let mut levels = vec![BTreeSet::from([(bot, bot)])];
    for _ in 0..depth {
        let (fx, gy) = *joint.last().expect("nonempty");
        joint.push((ev(f, fx, gy)?, ev(g, fx, gy)?));
        let (h, _) = *direct.last().expect("nonempty");
        let i = inner_lfp(h)?;
        direct.push((ev(f, h, i)?, i));
        let mut next = BTreeSet::new();
        for &(l, _) in levels.last().expect("nonempty") {
            for k in 0..=width {
                let y = inner_stage(l, k)?;
                next.insert((ev(f, l, y)?, y));
            }
        }
        levels.push(next);
    }
    let mut limit = (bot, bot);
    loop {
        let next = (ev(f, limit.0, limit.1)?, ev(g, limit.0, limit.1)?);
        if next == limit {
            break;
        }
        limit = next;
    }

    let leq = |a: Pair, b: Pair| a.0.is_subset(b.0) && a.1.is_subset(b.1);
    let increasing = |v: &[Pair]| v.windows(2).all(|w| leq(w[0], w[1]));
    let verdicts = HarnessVerdicts {
        monotone: increasing(&joint) && increasing(&direct),
        joint_below_direct: joint.iter().zip(&direct).all(|(a, b)| leq(*a, *b)),
        direct_is_word_join: direct.iter().zip(&levels).all(|(d, level)| {
            let j = level
                .iter()
                .fold((bot, bot), |acc, p| (acc.0.union(p.0), acc.1.union(p.1)));
            j == *d
        }),
        words_below_limit: levels.iter().flatten().all(|p| leq(*p, limit)),
    };
    Ok((
        RegularHarnessTrace {
            joint,
            direct,
            levels,
            width,
            limit,
        },
        verdicts,
    ))
}

#[cfg(test)]
mod tests {
    use super::super::tests::sys;
    use super::*;
    use crate::kripke::{example_m1, sample_models, SamplerConfig};
    use crate::syntax::parse_term_with_vars;

    fn xy(s: &str) -> Term {
        parse_term_with_vars(s, &BTreeSet::from(["x".to_string(), "y".to_string()])).unwrap()
    }

    #[test]
    fn identical_systems_are_cofinal() {
        let s = sys(&[("x", "p | <a>x")], &[]);
        assert!(cofinal_check(&s, &s, &example_m1(), &Env::new(), 5, None).unwrap());
    }

    #[test]
    fn bottom_and_top_are_not() {
        let f = sys(&[("x", "F")], &[]);
        let g = sys(&[("x", "T")], &[]);
        assert!(!cofinal_check(&f, &g, &example_m1(), &Env::new(), 1, None).unwrap());
    }

    #[test]
    fn trivial_projections_stay_bottom() {
        let (tr, v) =
            regular_harness(&xy("x"), &xy("y"), &example_m1(), &Env::new(), 5, None).unwrap();
        assert!(v.all());
        assert!(tr
            .joint
            .iter()
            .chain(&tr.direct)
            .all(|p| *p == (StateSet::EMPTY, StateSet::EMPTY)));
        assert_eq!(
            tr.levels[0],
            BTreeSet::from([(StateSet::EMPTY, StateSet::EMPTY)])
        );
    }

    #[test]
    fn crossed_diamonds() {
        let (f, g) = (xy("p | <a>y"), xy("q | <a>x"));
        let cfg = SamplerConfig {
            random_models: 30,
            ..Default::default()
        };
        for m in sample_models(&cfg, &["p".into(), "q".into()], &["a".into()]) {
            let (_, v) = regular_harness(&f, &g, &m, &Env::new(), 10, None).unwrap();
            assert!(v.all(), "{v:?}\n{m}");
        }
    }
}
