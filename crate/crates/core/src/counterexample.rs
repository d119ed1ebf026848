//! The reduced power `(ω+1)^ω/∼` of the chain `ω+1` with successor `f`,
//! where the approximants of `μx.f` never stabilize. Elements are
//! represented by an eventually regular tail plus finitely many overrides.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// A point of `ω+1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrdElem {
    Nat(u64),
    Omega,
}

impl OrdElem {
    pub const BOT: OrdElem = OrdElem::Nat(0);

    pub fn succ(self) -> OrdElem {
        match self {
            OrdElem::Nat(k) => OrdElem::Nat(k + 1),
            OrdElem::Omega => OrdElem::Omega,
        }
    }

    pub fn leq(self, other: OrdElem) -> bool {
        self <= other
    }
}

impl PartialOrd for OrdElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrdElem {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (OrdElem::Nat(a), OrdElem::Nat(b)) => a.cmp(b),
            (OrdElem::Nat(_), OrdElem::Omega) => Ordering::Less,
            (OrdElem::Omega, OrdElem::Nat(_)) => Ordering::Greater,
            (OrdElem::Omega, OrdElem::Omega) => Ordering::Equal,
        }
    }
}

impl fmt::Display for OrdElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrdElem::Nat(k) => write!(f, "{k}"),
            OrdElem::Omega => write!(f, "ω"),
        }
    }
}

/// Eventual shape of a sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Tail {
    Const(OrdElem),
    /// `i ↦ f^{max(i-n, 0)}(⊥)`; `Shifted(n)` for `n ≥ 0` is `φₙ`.
    Shifted(i64),
}

impl Tail {
    pub fn at(self, i: u64) -> OrdElem {
        match self {
            Tail::Const(a) => a,
            Tail::Shifted(n) => OrdElem::Nat((i as i64 - n).max(0) as u64),
        }
    }

    /// Order of the quotient, which only sees tails.
    pub fn leq(self, other: Tail) -> bool {
        match (self, other) {
            (Tail::Const(a), Tail::Const(b)) => a <= b,
            (Tail::Const(a), Tail::Shifted(_)) => a != OrdElem::Omega,
            (Tail::Shifted(_), Tail::Const(b)) => b == OrdElem::Omega,
            (Tail::Shifted(n), Tail::Shifted(m)) => m <= n,
        }
    }

    /// An index from which both tails follow their closed form and any
    /// pointwise comparison between them is settled.
    fn settle(self, other: Tail) -> u64 {
        let part = |t: Tail| match t {
            Tail::Const(OrdElem::Nat(k)) => k as i64,
            Tail::Const(OrdElem::Omega) => 0,
            Tail::Shifted(n) => n.max(0),
        };
        (part(self) + part(other) + 1) as u64
    }
}

/// A sequence in `(ω+1)^ω`: the tail with finitely many coordinates
/// overridden. Canonical when no override agrees with the tail.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuotSeq {
    pub tail: Tail,
    pub overrides: BTreeMap<u64, OrdElem>,
}

impl QuotSeq {
    pub fn constant(a: OrdElem) -> QuotSeq {
        QuotSeq {
            tail: Tail::Const(a),
            overrides: BTreeMap::new(),
        }
    }

    /// `φₙ = (⊥, …, ⊥, ⊥, f(⊥), f²(⊥), …)` with `n` leading extra `⊥`.
    pub fn phi(n: i64) -> QuotSeq {
        QuotSeq {
            tail: Tail::Shifted(n),
            overrides: BTreeMap::new(),
        }
    }

    /// The class of the constant sequence `μx.f = ω`.
    pub fn mu() -> QuotSeq {
        QuotSeq::constant(OrdElem::Omega)
    }

    pub fn with_override(mut self, i: u64, a: OrdElem) -> QuotSeq {
        self.overrides.insert(i, a);
        self.canonical()
    }

    pub fn at(&self, i: u64) -> OrdElem {
        self.overrides
            .get(&i)
            .copied()
            .unwrap_or_else(|| self.tail.at(i))
    }

    pub fn canonical(mut self) -> QuotSeq {
        let tail = self.tail;
        self.overrides.retain(|&i, a| tail.at(i) != *a);
        self
    }

    fn prefix_len(&self) -> u64 {
        self.overrides.keys().next_back().map_or(0, |k| k + 1)
    }

    /// Pointwise combination; `tail` must agree with `op` on the tails from
    /// their settling index on.
    fn combine(
        &self,
        other: &QuotSeq,
        tail: Tail,
        op: impl Fn(OrdElem, OrdElem) -> OrdElem,
    ) -> QuotSeq {
        let k = self
            .prefix_len()
            .max(other.prefix_len())
            .max(self.tail.settle(other.tail))
            .max(tail.settle(tail));
        let overrides = (0..k).map(|i| (i, op(self.at(i), other.at(i)))).collect();
        QuotSeq { tail, overrides }.canonical()
    }

    pub fn meet(&self, other: &QuotSeq) -> QuotSeq {
        let tail = match (self.tail, other.tail) {
            (Tail::Const(a), Tail::Const(b)) => Tail::Const(a.min(b)),
            (Tail::Shifted(n), Tail::Shifted(m)) => Tail::Shifted(n.max(m)),
            (Tail::Const(OrdElem::Omega), s) | (s, Tail::Const(OrdElem::Omega)) => s,
            (Tail::Const(a), _) | (_, Tail::Const(a)) => Tail::Const(a),
        };
        self.combine(other, tail, OrdElem::min)
    }

    pub fn join(&self, other: &QuotSeq) -> QuotSeq {
        let tail = match (self.tail, other.tail) {
            (Tail::Const(a), Tail::Const(b)) => Tail::Const(a.max(b)),
            (Tail::Shifted(n), Tail::Shifted(m)) => Tail::Shifted(n.min(m)),
            (Tail::Const(OrdElem::Omega), _) | (_, Tail::Const(OrdElem::Omega)) => {
                Tail::Const(OrdElem::Omega)
            }
            (Tail::Shifted(n), _) | (_, Tail::Shifted(n)) => Tail::Shifted(n),
        };
        self.combine(other, tail, OrdElem::max)
    }

    /// First index from which `self ≤ other` holds pointwise, if any.
    pub fn leq_from(&self, other: &QuotSeq) -> Option<u64> {
        if !self.tail.leq(other.tail) {
            return None;
        }
        let k = self
            .prefix_len()
            .max(other.prefix_len())
            .max(self.tail.settle(other.tail));
        Some(
            (0..k)
                .rev()
                .find(|&i| !self.at(i).leq(other.at(i)))
                .map_or(0, |i| i + 1),
        )
    }
}

impl fmt::Display for QuotSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.tail {
            Tail::Const(a) => write!(f, "const({a})")?,
            Tail::Shifted(n) => write!(f, "phi({n})")?,
        }
        for (i, a) in &self.overrides {
            write!(f, "[{i}:={a}]")?;
        }
        Ok(())
    }
}

/// Pointwise successor, renormalized.
pub fn quot_apply_f(s: &QuotSeq) -> QuotSeq {
    let tail = match s.tail {
        Tail::Const(a) => Tail::Const(a.succ()),
        Tail::Shifted(n) => Tail::Shifted(n - 1),
    };
    let k = s.prefix_len().max(s.tail.settle(tail));
    let overrides = (0..k).map(|i| (i, s.at(i).succ())).collect();
    QuotSeq { tail, overrides }.canonical()
}

/// `s₁ ≤ s₂` in the quotient: pointwise at all but finitely many coordinates.
pub fn quot_leq(s1: &QuotSeq, s2: &QuotSeq) -> bool {
    s1.tail.leq(s2.tail)
}

/// `s₁ ∼ s₂`: equal at all but finitely many coordinates.
pub fn quot_equiv(s1: &QuotSeq, s2: &QuotSeq) -> bool {
    s1.tail == s2.tail
}

/// What the derivation says about one candidate lower bound `ℓ` of all `φ̄ₙ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerBoundCase {
    pub candidate: QuotSeq,
    /// Smallest `n` with `ℓ ≰ φ̄ₙ`, or `None` if `ℓ` is below every `φ̄ₙ`.
    pub fails_at: Option<i64>,
    pub f_image: QuotSeq,
    /// `f(ℓ)` is again a lower bound of every `φ̄ₙ`.
    pub f_closed: bool,
    pub mu_below: bool,
    /// `μ̄ ≤ ℓ` holds, so `ℓ ≤ φ̄₀` would give the excluded `μ̄ ≤ φ̄₀`.
    pub contradiction: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WrongconfReport {
    pub n_max: u64,
    pub f_shifts_down: bool,
    pub decreasing: bool,
    pub mu_not_below_phi0: bool,
    pub chain_strict: bool,
    pub cases: Vec<LowerBoundCase>,
    pub lines: Vec<String>,
}

impl WrongconfReport {
    pub fn certified(&self) -> bool {
        self.f_shifts_down
            && self.decreasing
            && self.mu_not_below_phi0
            && self.chain_strict
            && self
                .cases
                .iter()
                .all(|c| c.fails_at.is_none() || c.contradiction || !c.mu_below)
    }

    pub fn render(&self) -> String {
        self.lines.join("\n") + "\n"
    }
}

/// Smallest `n ≥ 0` with `ℓ ≰ φ̄ₙ`: decided on tails, since `φ̄ₙ` descends
/// to its constant-free limit.
fn first_failure(l: &QuotSeq) -> Option<i64> {
    match l.tail {
        Tail::Const(OrdElem::Nat(_)) => None,
        Tail::Const(OrdElem::Omega) => Some(0),
        Tail::Shifted(m) => Some(m.max(-1) + 1),
    }
}

/// Certifies the configuration `f(φ̄ₙ) ≤ φ̄ₙ₋₁`, `φ̄ₙ₊₁ ≤ φ̄ₙ`, `μ̄ ≰ φ̄₀`
/// for `n ≤ n_max`, and replays the argument on each supplied candidate.
pub fn wrongconf_verify(n_max: u64, candidates: &[QuotSeq]) -> WrongconfReport {
    let mut lines = Vec::new();
    let mut f_shifts_down = true;
    let mut decreasing = true;
    for n in 1..=n_max as i64 {
        let img = quot_apply_f(&QuotSeq::phi(n));
        let prev = QuotSeq::phi(n - 1);
        let ok = quot_equiv(&img, &prev) && quot_leq(&img, &prev);
        f_shifts_down &= ok;
        if n <= 3 || n == n_max as i64 {
            let from = img
                .leq_from(&prev)
                .map_or("never".into(), |k| k.to_string());
            lines.push(format!(
                "f(phi{n}) ~ phi{}: {} (f(phi{n}) = {img}; equal on i >= {from}, where both are i-{}+1)",
                n - 1,
                verdict(ok),
                n
            ));
        }
    }
    lines.push(format!(
        "f(phi_n) ~ phi_(n-1) for 1 <= n <= {n_max}: {}",
        verdict(f_shifts_down)
    ));
    for n in 0..=n_max as i64 {
        let ok = quot_leq(&QuotSeq::phi(n + 1), &QuotSeq::phi(n))
            && QuotSeq::phi(n + 1).leq_from(&QuotSeq::phi(n)) == Some(0);
        decreasing &= ok;
    }
    lines.push(format!(
        "phi_(n+1) <= phi_n at every coordinate (i-n-1 <= i-n) for n <= {n_max}: {}",
        verdict(decreasing)
    ));
    let mu_not_below_phi0 = !quot_leq(&QuotSeq::mu(), &QuotSeq::phi(0));
    lines.push(format!(
        "mu not below phi0 (coordinate i: omega > {{i}}): {}",
        verdict(mu_not_below_phi0)
    ));
    let chain_strict = (0..=n_max).all(|k| {
        OrdElem::Nat(k) < OrdElem::Nat(k).succ() && OrdElem::Nat(k).succ() != OrdElem::Omega
    });
    lines.push(format!(
        "approximants f^k(bot) strictly increase below omega for k <= {n_max}: {}",
        verdict(chain_strict)
    ));

    let mut cases = Vec::new();
    for l in candidates {
        let fails_at = first_failure(l);
        let f_image = quot_apply_f(l);
        let f_closed = first_failure(&f_image).is_none();
        let mu_below = quot_leq(&QuotSeq::mu(), l);
        let contradiction = mu_below;
        let mut line = format!("candidate {l}: ");
        match fails_at {
            None => line.push_str("lower bound of every phi_n"),
            Some(n) => line.push_str(&format!("not below phi{n}")),
        }
        if fails_at.is_none() {
            line.push_str(&format!(
                "; f maps it to {f_image}, {} lower bound",
                if f_closed { "again a" } else { "no longer a" }
            ));
        }
        if contradiction {
            line.push_str(
                "; mu <= candidate, so candidate <= phi0 would give mu <= phi0: contradiction",
            );
        } else {
            line.push_str("; mu not below it, no contradiction");
        }
        lines.push(line);
        cases.push(LowerBoundCase {
            candidate: l.clone(),
            fails_at,
            f_image,
            f_closed,
            mu_below,
            contradiction,
        });
    }
    WrongconfReport {
        n_max,
        f_shifts_down,
        decreasing,
        mu_not_below_phi0,
        chain_strict,
        cases,
        lines,
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "certified"
    } else {
        "FAILED"
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn successor_examples() {
        assert_eq!(quot_apply_f(&QuotSeq::mu()), QuotSeq::mu());
        for n in 1..10 {
            assert!(quot_equiv(
                &quot_apply_f(&QuotSeq::phi(n)),
                &QuotSeq::phi(n - 1)
            ));
        }
        let f0 = quot_apply_f(&QuotSeq::phi(0));
        assert_eq!(f0, QuotSeq::phi(-1));
        for i in 0..50 {
            assert_eq!(f0.at(i), OrdElem::Nat(i + 1));
        }
        assert!(quot_leq(&QuotSeq::phi(0), &f0) && !quot_equiv(&QuotSeq::phi(0), &f0));
    }

    #[test]
    fn successor_is_exact_pointwise() {
        let s = QuotSeq::phi(4)
            .with_override(1, OrdElem::Omega)
            .with_override(9, OrdElem::Nat(2));
        let fs = quot_apply_f(&s);
        for i in 0..40 {
            assert_eq!(fs.at(i), s.at(i).succ(), "coordinate {i}");
        }
    }

    #[test]
    fn order_examples() {
        assert!(quot_leq(&QuotSeq::phi(2), &QuotSeq::phi(1)));
        assert!(!quot_leq(&QuotSeq::mu(), &QuotSeq::phi(0)));
        for t in [
            QuotSeq::phi(0),
            QuotSeq::phi(7),
            QuotSeq::mu(),
            QuotSeq::constant(OrdElem::Nat(3)),
        ] {
            assert!(quot_leq(&QuotSeq::constant(OrdElem::BOT), &t));
        }
    }

    #[test]
    fn configuration_certified() {
        let r = wrongconf_verify(100, &[QuotSeq::constant(OrdElem::BOT), QuotSeq::mu()]);
        assert!(r.certified());
        let bot = &r.cases[0];
        assert_eq!(bot.fails_at, None);
        assert_eq!(bot.f_image, QuotSeq::constant(OrdElem::Nat(1)));
        assert!(bot.f_closed && !bot.contradiction);
        let mu = &r.cases[1];
        assert_eq!(mu.fails_at, Some(0));
        assert!(mu.contradiction);
    }

    fn seq() -> impl Strategy<Value = QuotSeq> {
        let elem = prop_oneof![(0u64..6).prop_map(OrdElem::Nat), Just(OrdElem::Omega)];
        let tail = prop_oneof![
            elem.clone().prop_map(Tail::Const),
            (-2i64..6).prop_map(Tail::Shifted)
        ];
        (tail, prop::collection::btree_map(0u64..8, elem, 0..3))
            .prop_map(|(tail, overrides)| QuotSeq { tail, overrides }.canonical())
    }

    proptest! {
        #[test]
        fn operations_are_pointwise(a in seq(), b in seq()) {
            let (m, j) = (a.meet(&b), a.join(&b));
            for i in 0..30 {
                prop_assert_eq!(m.at(i), a.at(i).min(b.at(i)));
                prop_assert_eq!(j.at(i), a.at(i).max(b.at(i)));
            }
            prop_assert_eq!(quot_leq(&a, &b), quot_equiv(&a.meet(&b), &a));
            if let Some(k) = a.leq_from(&b) {
                for i in k..k + 30 {
                    prop_assert!(a.at(i) <= b.at(i));
                }
            }
        }

        #[test]
        fn equivalence_is_a_congruence(a in seq(), b in seq(), i in 0u64..10, x in 0u64..4) {
            let a2 = a.clone().with_override(i, OrdElem::Nat(x));
            prop_assert!(quot_equiv(&quot_apply_f(&a), &quot_apply_f(&a2)));
            prop_assert!(quot_equiv(&a.meet(&b), &a2.meet(&b)));
            prop_assert!(quot_equiv(&a.join(&b), &a2.join(&b)));
        }
    }
}
