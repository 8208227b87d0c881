//! Restricted adversaries and exhaustive enumeration of their actions.
//!
//! Actions are *effective*: every listed assignment replaces a transmitted
//! symbol with a different one, so the no-op is the unique action that leaves
//! a transmission unchanged. Enumeration order is deterministic: edge subsets
//! by size then lexicographically, rounds outer to inner, edges by id, and
//! replacement symbols ascending.

use std::fmt;

use itertools::Itertools;

use crate::error::{invalid, Error, Result};
use crate::netmodel::{EdgeId, Network};
use crate::word::{Alphabet, Symbol};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    OneShot,
    /// The same edges are attacked in every round.
    Static,
    /// A fresh edge set may be chosen in every round.
    Adaptive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChangeSemantics {
    /// An attacked edge carries a different symbol in every round.
    MustChange,
    /// An attacked edge may also carry the transmitted symbol.
    MayChange,
}

impl Regime {
    pub fn default_change(self) -> ChangeSemantics {
        match self {
            Regime::Static => ChangeSemantics::MustChange,
            Regime::OneShot | Regime::Adaptive => ChangeSemantics::MayChange,
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::OneShot => "one_shot",
            Regime::Static => "static",
            Regime::Adaptive => "adaptive",
        })
    }
}

impl fmt::Display for ChangeSemantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChangeSemantics::MustChange => "must",
            ChangeSemantics::MayChange => "may",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AdversaryModel {
    edges: Vec<EdgeId>,
    budget: usize,
    regime: Regime,
    change: ChangeSemantics,
}

/// Per-round replacement assignments, each round sorted by edge id.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AdversaryAction {
    pub rounds: Vec<Vec<(EdgeId, Symbol)>>,
}

impl AdversaryAction {
    pub fn noop(shots: usize) -> Self {
        Self {
            rounds: vec![Vec::new(); shots],
        }
    }

    pub fn is_noop(&self) -> bool {
        self.rounds.iter().all(Vec::is_empty)
    }

    pub fn touched_edges(&self) -> Vec<EdgeId> {
        self.rounds
            .iter()
            .flatten()
            .map(|&(e, _)| e)
            .sorted_unstable()
            .dedup()
            .collect()
    }
}

impl AdversaryModel {
    /// `change = None` picks the regime's default semantics.
    pub fn new(
        edges: impl IntoIterator<Item = EdgeId>,
        budget: usize,
        regime: Regime,
        change: Option<ChangeSemantics>,
    ) -> Result<Self> {
        let edges: Vec<EdgeId> = edges.into_iter().sorted_unstable().dedup().collect();
        if budget > edges.len() {
            return Err(invalid(format!(
                "budget {budget} exceeds the {} restricted edges",
                edges.len()
            )));
        }
        Ok(Self {
            edges,
            budget,
            regime,
            change: change.unwrap_or_else(|| regime.default_change()),
        })
    }

    /// An adversary that never acts.
    pub fn none() -> Self {
        Self {
            edges: Vec::new(),
            budget: 0,
            regime: Regime::OneShot,
            change: ChangeSemantics::MayChange,
        }
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn change(&self) -> ChangeSemantics {
        self.change
    }

    pub fn with_change(mut self, change: ChangeSemantics) -> Self {
        self.change = change;
        self
    }

    pub fn with_regime(mut self, regime: Regime) -> Self {
        self.regime = regime;
        self
    }

    pub fn with_budget(self, budget: usize) -> Result<Self> {
        Self::new(self.edges, budget, self.regime, Some(self.change))
    }

    /// Checks that every restricted edge exists in `n`.
    pub fn validate_for(&self, n: &Network) -> Result<()> {
        match self.edges.iter().find(|&&e| e >= n.edges().len()) {
            Some(e) => Err(invalid(format!("adversary edge {e} does not exist"))),
            None => Ok(()),
        }
    }

    /// Same adversary restricted to the restricted edges kept by `keep`. The
    /// budget is clipped to the number of edges left.
    pub fn restricted(&self, keep: impl Fn(EdgeId) -> bool) -> Self {
        let edges: Vec<_> = self.edges.iter().copied().filter(|&e| keep(e)).collect();
        Self {
            budget: self.budget.min(edges.len()),
            edges,
            ..*self
        }
    }

    fn subsets(&self) -> impl Iterator<Item = Vec<EdgeId>> + '_ {
        (0..=self.budget).flat_map(move |k| self.edges.iter().copied().combinations(k))
    }

    /// Every admissible effective action over `shots` rounds, exactly once.
    ///
    /// `transmitted[r][e]` is the symbol edge `e` would carry in round `r`
    /// without interference; only restricted edges are read.
    pub fn enumerate_actions<'a>(
        &'a self,
        alphabet: Alphabet,
        shots: usize,
        transmitted: &'a [Vec<Symbol>],
    ) -> Box<dyn Iterator<Item = AdversaryAction> + 'a> {
        debug_assert!(transmitted.len() >= shots);
        let others = move |r: usize, e: EdgeId| -> Vec<Symbol> {
            let sent = transmitted[r][e];
            alphabet.symbols().filter(|&s| s != sent).collect()
        };
        match self.regime {
            Regime::OneShot | Regime::Adaptive => {
                let per_round: Vec<Vec<Vec<(EdgeId, Symbol)>>> = (0..shots)
                    .map(|r| {
                        self.subsets()
                            .flat_map(|subset| {
                                if subset.is_empty() {
                                    return vec![Vec::new()];
                                }
                                subset
                                    .iter()
                                    .map(|&e| others(r, e).into_iter().map(move |s| (e, s)))
                                    .multi_cartesian_product()
                                    .collect()
                            })
                            .collect()
                    })
                    .collect();
                Box::new(
                    per_round
                        .into_iter()
                        .multi_cartesian_product()
                        .map(|rounds| AdversaryAction { rounds }),
                )
            }
            Regime::Static => {
                let must = self.change == ChangeSemantics::MustChange;
                Box::new(self.subsets().flat_map(move |subset| {
                    if subset.is_empty() {
                        return vec![AdversaryAction::noop(shots)];
                    }
                    let slots: Vec<(usize, EdgeId)> = (0..shots)
                        .cartesian_product(subset.iter().copied())
                        .collect();
                    let choices = slots.iter().map(|&(r, e)| {
                        let mut opts: Vec<Option<Symbol>> =
                            others(r, e).into_iter().map(Some).collect();
                        if !must {
                            opts.insert(0, None);
                        }
                        opts
                    });
                    choices
                        .multi_cartesian_product()
                        .filter(|picked| {
                            // Under may-change every chosen edge must be hit at
                            // least once, otherwise the action duplicates one
                            // on a smaller subset.
                            must || subset.iter().all(|&e| {
                                slots
                                    .iter()
                                    .zip(picked)
                                    .any(|(&(_, se), p)| se == e && p.is_some())
                            })
                        })
                        .map(|picked| {
                            let mut rounds = vec![Vec::new(); shots];
                            for (&(r, e), p) in slots.iter().zip(picked) {
                                if let Some(s) = p {
                                    rounds[r].push((e, s));
                                }
                            }
                            AdversaryAction { rounds }
                        })
                        .collect()
                }))
            }
        }
    }

    /// Admissibility of `action` for this model against `transmitted`.
    pub fn is_admissible(&self, action: &AdversaryAction, transmitted: &[Vec<Symbol>]) -> bool {
        let per_round_ok = action.rounds.iter().enumerate().all(|(r, round)| {
            round.len() <= self.budget
                && round.windows(2).all(|w| w[0].0 < w[1].0)
                && round
                    .iter()
                    .all(|&(e, s)| self.edges.contains(&e) && transmitted[r][e] != s)
        });
        if !per_round_ok {
            return false;
        }
        match self.regime {
            Regime::OneShot | Regime::Adaptive => true,
            Regime::Static => {
                let touched = action.touched_edges();
                if touched.len() > self.budget {
                    return false;
                }
                self.change == ChangeSemantics::MayChange
                    || action
                        .rounds
                        .iter()
                        .all(|round| round.len() == touched.len())
            }
        }
    }

    /// Transmitted symbols with the assigned edges overwritten, per round.
    pub fn apply_action(
        &self,
        action: &AdversaryAction,
        transmitted: &[Vec<Symbol>],
    ) -> Result<Vec<Vec<Symbol>>> {
        if action.rounds.len() > transmitted.len() {
            return Err(Error::Shape(format!(
                "action spans {} rounds but only {} were transmitted",
                action.rounds.len(),
                transmitted.len()
            )));
        }
        let mut out = transmitted.to_vec();
        for (r, round) in action.rounds.iter().enumerate() {
            for &(e, s) in round {
                if !self.edges.contains(&e) {
                    return Err(Error::EdgeNotRestricted(e));
                }
                let slot = out[r]
                    .get_mut(e)
                    .ok_or_else(|| invalid(format!("edge {e} has no transmitted symbol")))?;
                *slot = s;
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond(regime: Regime, change: ChangeSemantics) -> AdversaryModel {
        AdversaryModel::new([0, 1, 2], 1, regime, Some(change)).unwrap()
    }

    fn tx(shots: usize, sym: Symbol) -> Vec<Vec<Symbol>> {
        vec![vec![sym; 5]; shots]
    }

    fn count(m: &AdversaryModel, q: usize, shots: usize) -> usize {
        let t = tx(shots, 1);
        m.enumerate_actions(Alphabet::new(q).unwrap(), shots, &t)
            .count()
    }

    #[test]
    fn diamond_counts() {
        use ChangeSemantics::*;
        assert_eq!(count(&diamond(Regime::OneShot, MayChange), 3, 1), 7);
        assert_eq!(count(&diamond(Regime::Static, MustChange), 3, 2), 13);
        assert_eq!(count(&diamond(Regime::Adaptive, MayChange), 3, 2), 49);
        assert_eq!(count(&diamond(Regime::Static, MayChange), 3, 2), 25);
    }

    #[test]
    fn zero_budget_is_noop_only() {
        for regime in [Regime::OneShot, Regime::Static, Regime::Adaptive] {
            let m = AdversaryModel::new([0, 1, 2], 0, regime, None).unwrap();
            let t = tx(2, 0);
            let all: Vec<_> = m
                .enumerate_actions(Alphabet::new(3).unwrap(), 2, &t)
                .collect();
            assert_eq!(all, vec![AdversaryAction::noop(2)]);
        }
    }

    #[test]
    fn first_action_is_noop_and_order_is_deterministic() {
        let m = diamond(Regime::Static, ChangeSemantics::MustChange);
        let t = tx(2, 1);
        let a: Vec<_> = m
            .enumerate_actions(Alphabet::new(3).unwrap(), 2, &t)
            .collect();
        let b: Vec<_> = m
            .enumerate_actions(Alphabet::new(3).unwrap(), 2, &t)
            .collect();
        assert_eq!(a, b);
        assert!(a[0].is_noop());
        assert_eq!(a[1].rounds, vec![vec![(0, 0)], vec![(0, 0)]]);
        assert_eq!(a[2].rounds, vec![vec![(0, 0)], vec![(0, 2)]]);
    }

    #[test]
    fn budget_cannot_exceed_edges() {
        assert!(AdversaryModel::new([0], 2, Regime::OneShot, None).is_err());
    }

    #[test]
    fn apply_examples() {
        let m = diamond(Regime::OneShot, ChangeSemantics::MayChange);
        let t = vec![vec![1, 1, 1, 1, 1]];
        assert_eq!(m.apply_action(&AdversaryAction::noop(1), &t).unwrap(), t);
        let a = AdversaryAction {
            rounds: vec![vec![(0, 0)]],
        };
        assert_eq!(m.apply_action(&a, &t).unwrap(), vec![vec![0, 1, 1, 1, 1]]);
        let bad = AdversaryAction {
            rounds: vec![vec![(4, 0)]],
        };
        assert_eq!(m.apply_action(&bad, &t), Err(Error::EdgeNotRestricted(4)));
    }

    #[test]
    fn static_must_changes_every_round() {
        let m = diamond(Regime::Static, ChangeSemantics::MustChange);
        let t = vec![vec![0, 1, 2, 0, 0], vec![2, 2, 0, 0, 0]];
        let q = Alphabet::new(3).unwrap();
        for a in m.enumerate_actions(q, 2, &t) {
            assert!(m.is_admissible(&a, &t));
            if a.touched_edges() == vec![1] {
                let out = m.apply_action(&a, &t).unwrap();
                assert_ne!(out[0][1], t[0][1]);
                assert_ne!(out[1][1], t[1][1]);
            }
        }
    }

    #[test]
    fn defaults_follow_regime() {
        assert_eq!(
            AdversaryModel::new([0], 1, Regime::Static, None)
                .unwrap()
                .change(),
            ChangeSemantics::MustChange
        );
        assert_eq!(
            AdversaryModel::new([0], 1, Regime::Adaptive, None)
                .unwrap()
                .change(),
            ChangeSemantics::MayChange
        );
    }
}
