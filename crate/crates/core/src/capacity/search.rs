//! Confusability graphs, exact maximum unambiguous codes and scheme sweeps.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use super::mis::max_independent_set;
use super::transfer::{is_unambiguous, TransferQuery, Unambiguity};
use crate::adversary::AdversaryModel;
use crate::error::{invalid, Error, Result};
use crate::netmodel::Network;
use crate::schemes::{NetworkCode, OuterCode, RoundCode, VertexFunction};
use crate::word::{Alphabet, Word, WordSet};

/// Largest candidate set a confusability graph is built for.
pub const MAX_CANDIDATES: usize = 1 << 16;
/// Largest number of scheme tables a sweep enumerates.
pub const MAX_SCHEMES: u64 = 1 << 20;

/// Graph on candidate codewords; an edge joins two words whose output sets
/// meet at some target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusabilityGraph {
    vertices: Vec<Word>,
    adjacency: Vec<Vec<usize>>,
}

impl ConfusabilityGraph {
    /// `sets[i][t]` is the output set of candidate `i` at target `t`;
    /// `vertices` may be left empty when only the structure is needed.
    pub fn from_output_sets(vertices: Vec<Word>, sets: &[Vec<WordSet>]) -> Self {
        let n = sets.len();
        let targets = sets.first().map_or(0, Vec::len);
        let mut pairs: Vec<(u32, u32)> = Vec::new();
        for t in 0..targets {
            let mut index: HashMap<&Word, Vec<u32>> = HashMap::new();
            for (i, s) in sets.iter().enumerate() {
                for w in &s[t] {
                    index.entry(w).or_default().push(i as u32);
                }
            }
            for bucket in index.values() {
                for (k, &a) in bucket.iter().enumerate() {
                    for &b in &bucket[k + 1..] {
                        pairs.push((a, b));
                    }
                }
            }
        }
        pairs.sort_unstable();
        pairs.dedup();
        let mut adjacency = vec![Vec::new(); n];
        for (a, b) in pairs {
            adjacency[a as usize].push(b as usize);
            adjacency[b as usize].push(a as usize);
        }
        for l in &mut adjacency {
            l.sort_unstable();
        }
        Self {
            vertices,
            adjacency,
        }
    }

    pub fn vertices(&self) -> &[Word] {
        &self.vertices
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.adjacency
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search(&b).is_ok()
    }

    /// Exact independence number (no deadline).
    pub fn independence_number(&self) -> Result<usize> {
        Ok(max_independent_set(&self.adjacency, None, 0)?.set.len())
    }
}

fn canonical_candidates(mut candidates: Vec<Word>) -> Result<Vec<Word>> {
    if candidates.is_empty() {
        return Err(invalid("candidate set is empty"));
    }
    if candidates.len() > MAX_CANDIDATES {
        return Err(Error::TooLarge(format!(
            "{} candidates exceed the limit of {MAX_CANDIDATES}",
            candidates.len()
        )));
    }
    candidates.sort_unstable();
    candidates.dedup();
    Ok(candidates)
}

pub fn build_confusability(candidates: Vec<Word>, q: &TransferQuery) -> Result<ConfusabilityGraph> {
    let candidates = canonical_candidates(candidates)?;
    let sets: Vec<Vec<WordSet>> = candidates
        .par_iter()
        .map(|c| q.transfer_sets(c))
        .collect::<Result<_>>()?;
    Ok(ConfusabilityGraph::from_output_sets(candidates, &sets))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchBudget {
    pub timeout: Option<Duration>,
    /// Branching-order shuffle; 0 keeps the canonical order.
    pub seed: u64,
}

impl SearchBudget {
    pub fn unlimited() -> Self {
        Self::default()
    }

    pub fn deadline(&self) -> Option<Instant> {
        self.timeout.map(|t| Instant::now() + t)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub size: usize,
    pub code: OuterCode,
    /// False when the deadline expired; `size` is then a lower bound.
    pub exact: bool,
}

/// Largest unambiguous code among `candidates`. The returned code is
/// re-verified with [`is_unambiguous`].
pub fn max_unambiguous(
    q: &TransferQuery,
    candidates: Vec<Word>,
    budget: SearchBudget,
) -> Result<SearchOutcome> {
    let deadline = budget.deadline();
    let graph = build_confusability(candidates, q)?;
    let mis = max_independent_set(graph.adjacency(), deadline, budget.seed)?;
    let code = OuterCode::new(mis.set.iter().map(|&i| graph.vertices()[i].clone()))?;
    if let Unambiguity::Ambiguous {
        first,
        second,
        output,
        ..
    } = is_unambiguous(&code, q)?
    {
        return Err(Error::Ambiguous {
            first,
            second,
            output,
        });
    }
    Ok(SearchOutcome {
        size: code.len(),
        code,
        exact: mis.exact,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepOutcome {
    pub best_size: usize,
    /// Index of the first scheme (in enumeration order) achieving the best size.
    pub scheme_index: u64,
    pub scheme: RoundCode,
    pub schemes_checked: u64,
    pub exact: bool,
}

fn scheme_from_index(
    n: &Network,
    alphabet: Alphabet,
    mut index: u64,
    radices: &[u64],
) -> RoundCode {
    RoundCode::new(n.intermediates().zip(radices).map(|(v, &radix)| {
        let digit = index % radix;
        index /= radix;
        VertexFunction::from_index(v, n.indegree(v), n.outdegree(v), alphabet, digit)
    }))
}

/// Enumerates every network code (the same tables each round) and returns a
/// scheme with the largest unambiguous code. Stops at the first scheme
/// reaching `target` when one is given.
pub fn sweep_schemes(
    n: &Network,
    alphabet: Alphabet,
    adversary: &AdversaryModel,
    shots: usize,
    candidates: Option<Vec<Word>>,
    target: Option<usize>,
    budget: SearchBudget,
) -> Result<SweepOutcome> {
    let mut radices = Vec::new();
    let mut total: u64 = 1;
    for v in n.intermediates() {
        let count = VertexFunction::table_count(n.indegree(v), n.outdegree(v), alphabet)
            .filter(|&c| c <= MAX_SCHEMES)
            .ok_or_else(|| too_many_schemes(n))?;
        total = total
            .checked_mul(count)
            .filter(|&t| t <= MAX_SCHEMES)
            .ok_or_else(|| too_many_schemes(n))?;
        radices.push(count);
    }

    let base_code = NetworkCode::uniform(scheme_from_index(n, alphabet, 0, &radices), shots);
    let q = TransferQuery::new(n.clone(), alphabet, base_code, adversary.clone(), shots)?;
    let candidates = canonical_candidates(candidates.unwrap_or_else(|| q.all_inputs().collect()))?;
    let deadline = budget.deadline();

    // Attacks act on the source word before any vertex function, so the
    // attacked inputs can be shared across schemes.
    let attacked: Option<Vec<Vec<Word>>> = q.attacks_input_only().then(|| {
        candidates
            .par_iter()
            .map(|c| q.attacked_inputs(c))
            .collect()
    });

    let evaluate = |index: u64| -> Result<(usize, bool)> {
        if deadline.is_some_and(|d| Instant::now() >= d) {
            return Ok((0, false));
        }
        let code = NetworkCode::uniform(scheme_from_index(n, alphabet, index, &radices), shots);
        let sets: Vec<Vec<WordSet>> = match &attacked {
            Some(att) => att.iter().map(|a| q.outputs_of_inputs(&code, a)).collect(),
            None => candidates
                .iter()
                .map(|c| q.transfer_sets_with(&code, c))
                .collect(),
        };
        let graph = ConfusabilityGraph::from_output_sets(Vec::new(), &sets);
        let mis = max_independent_set(graph.adjacency(), deadline, budget.seed)?;
        Ok((mis.set.len(), mis.exact))
    };

    if let Some(target) = target {
        let hit = (0..total)
            .into_par_iter()
            .map(|i| evaluate(i).map(|r| (i, r)))
            .find_first(|r| matches!(r, Ok((_, (size, _)))  if *size >= target) || r.is_err());
        if let Some(hit) = hit {
            let (index, (size, exact)) = hit?;
            return finish(n, alphabet, &radices, index, size, index + 1, exact);
        }
    }

    let results: Vec<(usize, bool)> = (0..total)
        .into_par_iter()
        .map(evaluate)
        .collect::<Result<_>>()?;
    let exact = results.iter().all(|&(_, e)| e);
    let (index, &(size, _)) = results
        .iter()
        .enumerate()
        .max_by(|(i, a), (j, b)| a.0.cmp(&b.0).then(j.cmp(i)))
        .expect("at least one scheme");
    finish(n, alphabet, &radices, index as u64, size, total, exact)
}

fn finish(
    n: &Network,
    alphabet: Alphabet,
    radices: &[u64],
    index: u64,
    size: usize,
    checked: u64,
    exact: bool,
) -> Result<SweepOutcome> {
    Ok(SweepOutcome {
        best_size: size,
        scheme_index: index,
        scheme: scheme_from_index(n, alphabet, index, radices),
        schemes_checked: checked,
        exact,
    })
}

fn too_many_schemes(n: &Network) -> Error {
    Error::TooLarge(format!(
        "exhaustive scheme sweep on {} exceeds {MAX_SCHEMES} tables; use a fixed scheme",
        n.name()
    ))
}
