//! Forward simulation of a network under every admissible adversary action.
//!
//! Words are laid out round-major: an input word is the from-set symbols of
//! round 0 (in edge-id order), then round 1, and so on; outputs likewise.

use crate::adversary::{AdversaryModel, Regime};
use crate::error::{invalid, shape, Error, Result};
use crate::netmodel::{precedes, EdgeId, Network, VertexId};
use crate::schemes::NetworkCode;
use crate::word::{Alphabet, Symbol, Word, WordSet};

const UNSET: Symbol = Symbol::MAX;

/// `Ω[N, A, F, U → U′]` over `shots` rounds.
#[derive(Debug, Clone)]
pub struct TransferQuery {
    network: Network,
    alphabet: Alphabet,
    code: NetworkCode,
    adversary: AdversaryModel,
    shots: usize,
    from: Vec<EdgeId>,
    targets: Vec<Vec<EdgeId>>,
    // derived
    topo: Vec<VertexId>,
    active: AdversaryModel,
    attacks_from_only: bool,
}

impl TransferQuery {
    /// Query from `out(S)` to `in(T)` for every terminal `T`.
    pub fn new(
        network: Network,
        alphabet: Alphabet,
        code: NetworkCode,
        adversary: AdversaryModel,
        shots: usize,
    ) -> Result<Self> {
        let from = network.out_edges(network.source()).to_vec();
        let targets = network
            .terminals()
            .iter()
            .map(|&t| network.in_edges(t).to_vec())
            .collect();
        let mut q = Self {
            network,
            alphabet,
            code,
            adversary,
            shots,
            from,
            targets,
            topo: Vec::new(),
            active: AdversaryModel::none(),
            attacks_from_only: true,
        };
        q.prepare()?;
        Ok(q)
    }

    pub fn with_from(mut self, mut edges: Vec<EdgeId>) -> Result<Self> {
        edges.sort_unstable();
        edges.dedup();
        self.from = edges;
        self.prepare()?;
        Ok(self)
    }

    /// Replaces the per-terminal targets with a single edge set.
    pub fn with_to(mut self, mut edges: Vec<EdgeId>) -> Result<Self> {
        edges.sort_unstable();
        edges.dedup();
        self.targets = vec![edges];
        self.prepare()?;
        Ok(self)
    }

    pub fn with_code(mut self, code: NetworkCode) -> Result<Self> {
        self.code = code;
        self.prepare()?;
        Ok(self)
    }

    pub fn with_adversary(mut self, adversary: AdversaryModel) -> Result<Self> {
        self.adversary = adversary;
        self.prepare()?;
        Ok(self)
    }

    fn prepare(&mut self) -> Result<()> {
        let n = &self.network;
        if self.shots < 1 {
            return Err(invalid("shots must be at least 1"));
        }
        if self.adversary.regime() == Regime::OneShot && self.shots != 1 {
            return Err(invalid("the one-shot regime requires shots = 1"));
        }
        self.code.validate_for(n, self.alphabet, self.shots)?;
        self.adversary.validate_for(n)?;
        for to in &self.targets {
            if !precedes(n, &self.from, to)? {
                return Err(Error::NotPreceding {
                    from: self.from.clone(),
                    to: to.clone(),
                });
            }
        }
        let order = crate::netmodel::edge_order(n)?;
        let mut topo: Vec<VertexId> = Vec::with_capacity(n.vertices().len());
        topo.push(n.source());
        for e in order {
            let h = n.edge(e).head;
            if !topo.contains(&h) {
                topo.push(h);
            }
        }
        for v in 0..n.vertices().len() {
            if !topo.contains(&v) {
                topo.push(v);
            }
        }
        self.topo = topo;

        let determined = self.determined_edges();
        let active = self.adversary.restricted(|e| determined[e]);
        let downstream: Vec<EdgeId> = active
            .edges()
            .iter()
            .copied()
            .filter(|e| !self.from.contains(e))
            .collect();
        for &f in &downstream {
            if let Some(&e) = active
                .edges()
                .iter()
                .find(|&&e| e != f && n.edge_precedes(e, f))
            {
                return Err(invalid(format!(
                    "adversary edge {f} lies downstream of adversary edge {e}; \
                     restricted edges outside the from-set must not depend on each other"
                )));
            }
        }
        self.attacks_from_only = downstream.is_empty();
        self.active = active;
        Ok(())
    }

    fn determined_edges(&self) -> Vec<bool> {
        let n = &self.network;
        let mut det = vec![false; n.edges().len()];
        for &e in &self.from {
            det[e] = true;
        }
        for &v in &self.topo {
            if v == n.source() {
                continue;
            }
            let all_in = n.in_edges(v).iter().all(|&e| det[e]);
            if all_in {
                for &e in n.out_edges(v) {
                    det[e] = true;
                }
            }
        }
        det
    }

    pub fn network(&self) -> &Network {
        &self.network
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn code(&self) -> &NetworkCode {
        &self.code
    }

    pub fn adversary(&self) -> &AdversaryModel {
        &self.adversary
    }

    pub fn shots(&self) -> usize {
        self.shots
    }

    pub fn from_edges(&self) -> &[EdgeId] {
        &self.from
    }

    pub fn targets(&self) -> &[Vec<EdgeId>] {
        &self.targets
    }

    /// Length of an input word: `shots · |U|`.
    pub fn input_len(&self) -> usize {
        self.shots * self.from.len()
    }

    /// All candidate input words, in lexicographic order.
    pub fn all_inputs(&self) -> impl Iterator<Item = Word> {
        self.alphabet.words(self.input_len())
    }

    fn check_input(&self, x: &Word) -> Result<()> {
        if x.len() != self.input_len() {
            return Err(shape(format!(
                "input word has length {}, expected {} ({} rounds × {} edges)",
                x.len(),
                self.input_len(),
                self.shots,
                self.from.len()
            )));
        }
        if !self.alphabet.contains(x) {
            return Err(invalid(format!("{x} uses symbols outside the alphabet")));
        }
        Ok(())
    }

    /// Edge values for one round. `overrides[e] != UNSET` replaces edge `e`.
    fn simulate_round(
        &self,
        code: &NetworkCode,
        round: usize,
        input: &[Symbol],
        overrides: &[Symbol],
        values: &mut [Symbol],
    ) {
        let n = &self.network;
        values.fill(UNSET);
        let round_code = code.round(round);
        let mut scratch: Vec<Symbol> = Vec::new();
        for &v in &self.topo {
            let outs = n.out_edges(v);
            if outs.is_empty() {
                continue;
            }
            let mut computed: Option<&[Symbol]> = None;
            if v != n.source() && outs.iter().any(|e| !self.from.contains(e)) {
                scratch.clear();
                scratch.extend(n.in_edges(v).iter().map(|&e| values[e]));
                if !scratch.contains(&UNSET) {
                    if let Some(f) = round_code.get(v) {
                        computed = Some(f.eval(&scratch));
                    }
                }
            }
            for (k, &e) in outs.iter().enumerate() {
                let base = match self.from.binary_search(&e) {
                    Ok(pos) => input[pos],
                    Err(_) => computed.map_or(UNSET, |c| c[k]),
                };
                values[e] = if overrides[e] != UNSET && base != UNSET {
                    overrides[e]
                } else {
                    base
                };
            }
        }
    }

    fn rounds_of<'a>(&self, x: &'a Word) -> impl Iterator<Item = &'a [Symbol]> {
        x.symbols().chunks(self.from.len())
    }

    /// Clean (attack-free) edge values per round.
    fn clean_values(&self, code: &NetworkCode, x: &Word) -> Vec<Vec<Symbol>> {
        let m = self.network.edges().len();
        let none = vec![UNSET; m];
        self.rounds_of(x)
            .enumerate()
            .map(|(r, input)| {
                let mut vals = vec![UNSET; m];
                self.simulate_round(code, r, input, &none, &mut vals);
                vals
            })
            .collect()
    }

    /// Output sets for every target, under the query's own network code.
    pub fn transfer_sets(&self, x: &Word) -> Result<Vec<WordSet>> {
        self.check_input(x)?;
        Ok(self.transfer_sets_with(&self.code, x))
    }

    /// Output set for the first target.
    pub fn transfer_set(&self, x: &Word) -> Result<WordSet> {
        Ok(self.transfer_sets(x)?.swap_remove(0))
    }

    pub(crate) fn transfer_sets_with(&self, code: &NetworkCode, x: &Word) -> Vec<WordSet> {
        if self.attacks_from_only {
            let attacked = self.attacked_inputs(x);
            return self.outputs_of_inputs(code, &attacked);
        }
        let m = self.network.edges().len();
        let clean = self.clean_values(code, x);
        let mut outs: Vec<Vec<Word>> = vec![Vec::new(); self.targets.len()];
        let mut overrides = vec![UNSET; m];
        let mut vals = vec![UNSET; m];
        let inputs: Vec<&[Symbol]> = self.rounds_of(x).collect();
        for action in self
            .active
            .enumerate_actions(self.alphabet, self.shots, &clean)
        {
            let mut words: Vec<Vec<Symbol>> = vec![Vec::new(); self.targets.len()];
            for (r, input) in inputs.iter().enumerate() {
                overrides.fill(UNSET);
                for &(e, s) in &action.rounds[r] {
                    overrides[e] = s;
                }
                self.simulate_round(code, r, input, &overrides, &mut vals);
                for (t, target) in self.targets.iter().enumerate() {
                    words[t].extend(target.iter().map(|&e| vals[e]));
                }
            }
            for (t, w) in words.into_iter().enumerate() {
                outs[t].push(Word::new(w));
            }
        }
        outs.into_iter().map(WordSet::from_unsorted).collect()
    }

    /// True when every adversary edge that matters is in the from-set, so
    /// the attack acts on the input word before any vertex function.
    pub fn attacks_input_only(&self) -> bool {
        self.attacks_from_only
    }

    /// Distinct post-attack input words reachable from `x`. Only meaningful
    /// when [`attacks_input_only`](Self::attacks_input_only) holds.
    pub fn attacked_inputs(&self, x: &Word) -> Vec<Word> {
        let width = self.from.len();
        let m = self.network.edges().len();
        let transmitted: Vec<Vec<Symbol>> = self
            .rounds_of(x)
            .map(|input| {
                let mut row = vec![UNSET; m];
                for (k, &e) in self.from.iter().enumerate() {
                    row[e] = input[k];
                }
                row
            })
            .collect();
        let mut out: Vec<Word> = self
            .active
            .enumerate_actions(self.alphabet, self.shots, &transmitted)
            .map(|action| {
                let mut y = x.symbols().to_vec();
                for (r, round) in action.rounds.iter().enumerate() {
                    for &(e, s) in round {
                        let pos = self.from.binary_search(&e).expect("from-set edge");
                        y[r * width + pos] = s;
                    }
                }
                Word::new(y)
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Attack-free outputs of each input word, per target.
    pub(crate) fn outputs_of_inputs(&self, code: &NetworkCode, inputs: &[Word]) -> Vec<WordSet> {
        let m = self.network.edges().len();
        let none = vec![UNSET; m];
        let mut vals = vec![UNSET; m];
        let mut outs: Vec<Vec<Word>> = vec![Vec::with_capacity(inputs.len()); self.targets.len()];
        for y in inputs {
            let mut words: Vec<Vec<Symbol>> = vec![Vec::new(); self.targets.len()];
            for (r, input) in self.rounds_of(y).enumerate() {
                self.simulate_round(code, r, input, &none, &mut vals);
                for (t, target) in self.targets.iter().enumerate() {
                    words[t].extend(target.iter().map(|&e| vals[e]));
                }
            }
            for (t, w) in words.into_iter().enumerate() {
                outs[t].push(Word::new(w));
            }
        }
        outs.into_iter().map(WordSet::from_unsorted).collect()
    }

    /// The attack-free map `x ↦ (values on the first target)`.
    pub fn clean_output(&self, x: &Word) -> Result<Word> {
        self.check_input(x)?;
        Ok(
            self.outputs_of_inputs(&self.code, std::slice::from_ref(x))[0]
                .iter()
                .next()
                .cloned()
                .expect("one input gives one output"),
        )
    }
}

/// Outcome of an unambiguity check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Unambiguity {
    Unambiguous,
    Ambiguous {
        first: Word,
        second: Word,
        output: Word,
        /// Index into [`TransferQuery::targets`].
        target: usize,
    },
}

impl Unambiguity {
    pub fn is_unambiguous(&self) -> bool {
        matches!(self, Unambiguity::Unambiguous)
    }
}

/// Pairwise disjointness of output sets at every target. On failure the
/// first colliding pair in code order is returned with its smallest common
/// output.
pub fn is_unambiguous(code: &crate::schemes::OuterCode, q: &TransferQuery) -> Result<Unambiguity> {
    let sets: Vec<Vec<WordSet>> = code
        .codewords()
        .iter()
        .map(|c| q.transfer_sets(c))
        .collect::<Result<_>>()?;
    let words = code.codewords();
    for i in 0..words.len() {
        for j in i + 1..words.len() {
            for (t, (a, b)) in sets[i].iter().zip(&sets[j]).enumerate() {
                if let Some(common) = a.first_common(b) {
                    return Ok(Unambiguity::Ambiguous {
                        first: words[i].clone(),
                        second: words[j].clone(),
                        output: common.clone(),
                        target: t,
                    });
                }
            }
        }
    }
    Ok(Unambiguity::Unambiguous)
}
