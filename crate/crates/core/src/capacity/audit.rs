//! Checks of the structural lemmas behind the multishot Diamond converse,
//! and channel-level pigeonhole and superadditivity checks.

use std::collections::BTreeSet;

use super::mis::max_independent_set;
use super::transfer::{is_unambiguous, TransferQuery, Unambiguity};
use crate::chanalg::{hamming_ball_channel, power, ChannelMap, MAX_TABULATED};
use crate::error::{invalid, Error, Result};
use crate::schemes::OuterCode;
use crate::word::{blockwise_separated, Alphabet, Word};

const V1: usize = 1;
const E5: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaAudit {
    /// Distinct first-lane projections (should equal the code size).
    pub lane_one_images: usize,
    pub lane_one_injective: bool,
    pub v1_injective: bool,
    /// Codewords whose `{e5}` output is a single word.
    pub singleton_e5_outputs: usize,
    pub singleton_bound: bool,
    /// `|C|² + |C| − 1` against `q^{2i}`.
    pub inequality_lhs: u128,
    pub inequality_rhs: u128,
    pub inequality: bool,
}

impl LemmaAudit {
    pub fn all_pass(&self) -> bool {
        self.lane_one_injective && self.v1_injective && self.singleton_bound && self.inequality
    }
}

/// Audits an unambiguous Diamond code. Refused when the code is ambiguous,
/// since the lemmas assume unambiguity.
pub fn audit_lemmas(code: &OuterCode, q: &TransferQuery) -> Result<LemmaAudit> {
    let n = q.network();
    if n.two_level_shape() != Some((vec![1, 2], vec![1, 1])) {
        return Err(invalid(format!(
            "lemma audits need the Diamond topology, got {}",
            n.name()
        )));
    }
    if q.from_edges() != [0, 1, 2] {
        return Err(invalid("lemma audits need the query to start at out(S)"));
    }
    if let Unambiguity::Ambiguous { first, second, .. } = is_unambiguous(code, q)? {
        return Err(Error::AuditRefused(first, second));
    }
    let shots = q.shots();
    let qs = q.alphabet().size() as u128;

    let lanes: Vec<Word> = code
        .codewords()
        .iter()
        .map(|c| c.projection(1, 3))
        .collect::<Result<_>>()?;
    let lane_one_images = lanes.iter().collect::<BTreeSet<_>>().len();

    let v1_images: BTreeSet<Word> = lanes
        .iter()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .map(|a| {
            Word::new(
                a.symbols()
                    .iter()
                    .enumerate()
                    .map(|(r, &s)| {
                        let f = q.code().round(r).get(V1).expect("V1 has a function");
                        f.eval(&[s])[0]
                    })
                    .collect(),
            )
        })
        .collect();

    let to_e5 = q.clone().with_to(vec![E5])?;
    let mut singleton_e5_outputs = 0;
    for c in code.codewords() {
        if to_e5.transfer_set(c)?.len() == 1 {
            singleton_e5_outputs += 1;
        }
    }

    let size = code.len() as u128;
    let lhs = size * size + size - 1;
    let rhs = qs.pow(2 * shots as u32);
    Ok(LemmaAudit {
        lane_one_images,
        lane_one_injective: lane_one_images == code.len(),
        v1_injective: v1_images.len() == lane_one_images,
        singleton_e5_outputs,
        singleton_bound: singleton_e5_outputs <= 1,
        inequality_lhs: lhs,
        inequality_rhs: rhs,
        inequality: lhs <= rhs,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PigeonholeVariant {
    Diamond,
    Mirrored,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PigeonholeOutcome {
    /// Largest code for `H^i` found by exhaustive search.
    pub max_size: usize,
    /// The size shown not to exist.
    pub excluded: usize,
    pub confirmed: bool,
}

/// Exhaustively confirms that `H^i` admits no unambiguous code of size
/// `(q − 1)^i + 1` on ★-free Diamond inputs (width 3), or `q^i + 1` on
/// Mirrored inputs (width 4). Two words are compatible iff some block is
/// at Hamming distance ≥ 3.
pub fn pigeonhole_check(
    alphabet: Alphabet,
    shots: usize,
    variant: PigeonholeVariant,
) -> Result<PigeonholeOutcome> {
    if shots < 1 {
        return Err(invalid("shots must be at least 1"));
    }
    let q = alphabet.size();
    let (width, symbols, excluded): (usize, Vec<u8>, usize) = match variant {
        PigeonholeVariant::Diamond => (
            3,
            alphabet.non_star().collect(),
            (q - 1).pow(shots as u32) + 1,
        ),
        PigeonholeVariant::Mirrored => (4, alphabet.symbols().collect(), q.pow(shots as u32) + 1),
    };
    let len = width * shots;
    if q.checked_pow(len as u32).is_none_or(|c| c > MAX_TABULATED) {
        return Err(Error::TooLarge(format!("{q}^{len} candidate words")));
    }
    let k = symbols.len();
    let words: Vec<Word> = (0..k.pow(len as u32))
        .map(|r| {
            Word::new(
                Word::from_rank(r, k, len)
                    .symbols()
                    .iter()
                    .map(|&d| symbols[d as usize])
                    .collect(),
            )
        })
        .collect();
    let adj = conflict_graph(&words, |x, y| !blockwise_separated(x, y, width, 3));
    let max_size = max_independent_set(&adj, None, 0)?.set.len();
    Ok(PigeonholeOutcome {
        max_size,
        excluded,
        confirmed: max_size < excluded,
    })
}

fn conflict_graph(words: &[Word], conflict: impl Fn(&Word, &Word) -> bool) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); words.len()];
    for i in 0..words.len() {
        for j in i + 1..words.len() {
            if conflict(&words[i], &words[j]) {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
    }
    adj
}

/// Largest code for a channel over its whole input space, with a witness.
pub fn max_code_for_channel(c: &ChannelMap) -> Result<(usize, Vec<Word>)> {
    let table = c.tabulate()?;
    let words: Vec<Word> = c.alphabet().words(c.input_len()).collect();
    let adj = conflict_graph(&words, |x, y| {
        table[x.rank(c.alphabet().size())].intersects(&table[y.rank(c.alphabet().size())])
    });
    let set = max_independent_set(&adj, None, 0)?.set;
    Ok((
        set.len(),
        set.into_iter().map(|i| words[i].clone()).collect(),
    ))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperadditivityOutcome {
    pub single: usize,
    pub power: usize,
    pub holds: bool,
}

/// Confirms `size(c^i) ≥ size(c)^i`, i.e. `C₁(c^i) ≥ i · C₁(c)`.
pub fn superadditivity_check(c: &ChannelMap, i: usize) -> Result<SuperadditivityOutcome> {
    let (single, _) = max_code_for_channel(c)?;
    let (pow, _) = if i == 1 {
        (single, Vec::new())
    } else {
        max_code_for_channel(&power(c, i)?)?
    };
    let needed = (single as u128)
        .checked_pow(i as u32)
        .ok_or_else(|| Error::TooLarge("size(c)^i overflows".into()))?;
    Ok(SuperadditivityOutcome {
        single,
        power: pow,
        holds: pow as u128 >= needed,
    })
}

/// `H_𝒟` (width 3) or `H_𝒮` (width 4): one substitution error per use.
pub fn adversarial_channel(alphabet: Alphabet, variant: PigeonholeVariant) -> Result<ChannelMap> {
    let width = match variant {
        PigeonholeVariant::Diamond => 3,
        PigeonholeVariant::Mirrored => 4,
    };
    hamming_ball_channel(alphabet, width, 1)
}
