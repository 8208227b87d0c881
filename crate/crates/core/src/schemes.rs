//! Network codes as explicit lookup tables, and the outer-code constructions.

use std::collections::BTreeMap;

use crate::error::{invalid, shape, Error, Result};
use crate::netmodel::{Network, VertexId};
use crate::word::{rank_of, Alphabet, Symbol, Word, WordSet};

/// `F_V : A^{deg⁺(V)} → A^{deg⁻(V)}` as a total table indexed by input rank.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexFunction {
    vertex: VertexId,
    in_arity: usize,
    out_arity: usize,
    q: usize,
    table: Vec<Symbol>,
}

impl VertexFunction {
    pub fn from_fn<F>(
        vertex: VertexId,
        in_arity: usize,
        out_arity: usize,
        alphabet: Alphabet,
        f: F,
    ) -> Self
    where
        F: Fn(&[Symbol]) -> Vec<Symbol>,
    {
        let q = alphabet.size();
        let rows = q.pow(in_arity as u32);
        let mut table = Vec::with_capacity(rows * out_arity);
        for r in 0..rows {
            let input = Word::from_rank(r, q, in_arity);
            let out = f(input.symbols());
            assert_eq!(out.len(), out_arity, "vertex rule returned the wrong arity");
            table.extend(out);
        }
        Self {
            vertex,
            in_arity,
            out_arity,
            q,
            table,
        }
    }

    /// Builds a function from explicit rows, one per input tuple in rank order.
    pub fn from_rows(
        vertex: VertexId,
        in_arity: usize,
        out_arity: usize,
        alphabet: Alphabet,
        rows: &[Vec<Symbol>],
    ) -> Result<Self> {
        let q = alphabet.size();
        let expected = q
            .checked_pow(in_arity as u32)
            .ok_or_else(|| Error::TooLarge("vertex table".into()))?;
        if rows.len() != expected {
            return Err(shape(format!(
                "vertex {vertex} needs {expected} table rows, got {}",
                rows.len()
            )));
        }
        let mut table = Vec::with_capacity(expected * out_arity);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != out_arity {
                return Err(shape(format!(
                    "vertex {vertex} row {i} has {} symbols, expected {out_arity}",
                    row.len()
                )));
            }
            if let Some(&s) = row.iter().find(|&&s| s as usize >= q) {
                return Err(invalid(format!("vertex {vertex} row {i} uses symbol {s}")));
            }
            table.extend_from_slice(row);
        }
        Ok(Self {
            vertex,
            in_arity,
            out_arity,
            q,
            table,
        })
    }

    /// The `index`-th table in the enumeration of all `q^(q^in · out)` tables.
    pub fn from_index(
        vertex: VertexId,
        in_arity: usize,
        out_arity: usize,
        alphabet: Alphabet,
        mut index: u64,
    ) -> Self {
        let q = alphabet.size();
        let len = q.pow(in_arity as u32) * out_arity;
        let mut table = vec![0; len];
        for slot in table.iter_mut() {
            *slot = (index % q as u64) as Symbol;
            index /= q as u64;
        }
        Self {
            vertex,
            in_arity,
            out_arity,
            q,
            table,
        }
    }

    /// Number of distinct tables of this shape, if it fits in a `u64`.
    pub fn table_count(in_arity: usize, out_arity: usize, alphabet: Alphabet) -> Option<u64> {
        let q = alphabet.size() as u64;
        let cells = (alphabet.size() as u64).checked_pow(in_arity as u32)? * out_arity as u64;
        q.checked_pow(u32::try_from(cells).ok()?)
    }

    pub fn vertex(&self) -> VertexId {
        self.vertex
    }

    pub fn in_arity(&self) -> usize {
        self.in_arity
    }

    pub fn out_arity(&self) -> usize {
        self.out_arity
    }

    /// Number of rows, `q^{in_arity}`.
    pub fn domain_size(&self) -> usize {
        self.table.len() / self.out_arity.max(1)
    }

    pub fn eval(&self, input: &[Symbol]) -> &[Symbol] {
        let r = rank_of(input, self.q);
        &self.table[r * self.out_arity..(r + 1) * self.out_arity]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Symbol]> {
        self.table.chunks(self.out_arity.max(1))
    }
}

/// One round's network code: a function for every intermediate vertex.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct RoundCode {
    functions: BTreeMap<VertexId, VertexFunction>,
}

impl RoundCode {
    pub fn new(functions: impl IntoIterator<Item = VertexFunction>) -> Self {
        Self {
            functions: functions.into_iter().map(|f| (f.vertex, f)).collect(),
        }
    }

    pub fn get(&self, v: VertexId) -> Option<&VertexFunction> {
        self.functions.get(&v)
    }

    pub fn functions(&self) -> impl Iterator<Item = &VertexFunction> {
        self.functions.values()
    }

    /// Arity and totality check against the network.
    pub fn validate_for(&self, n: &Network, alphabet: Alphabet) -> Result<()> {
        for v in n.intermediates() {
            let f = self
                .functions
                .get(&v)
                .ok_or_else(|| invalid(format!("no function for intermediate vertex {v}")))?;
            if f.in_arity != n.indegree(v) || f.out_arity != n.outdegree(v) {
                return Err(shape(format!(
                    "vertex {v} function is {}→{}, network needs {}→{}",
                    f.in_arity,
                    f.out_arity,
                    n.indegree(v),
                    n.outdegree(v)
                )));
            }
            if f.q != alphabet.size()
                || f.table.len() != alphabet.size().pow(f.in_arity as u32) * f.out_arity
            {
                return Err(shape(format!(
                    "vertex {v} table is not total over the alphabet"
                )));
            }
        }
        if let Some(extra) = self
            .functions
            .keys()
            .find(|&&v| v >= n.vertices().len() || !n.intermediates().any(|i| i == v))
        {
            return Err(invalid(format!(
                "vertex {extra} is not an intermediate vertex"
            )));
        }
        Ok(())
    }
}

/// Per-round network codes for a multishot run.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NetworkCode {
    rounds: Vec<RoundCode>,
}

impl NetworkCode {
    /// The same round code in each of `shots` rounds.
    pub fn uniform(round: RoundCode, shots: usize) -> Self {
        Self {
            rounds: vec![round; shots],
        }
    }

    pub fn per_round(rounds: Vec<RoundCode>) -> Self {
        Self { rounds }
    }

    pub fn rounds(&self) -> &[RoundCode] {
        &self.rounds
    }

    pub fn round(&self, r: usize) -> &RoundCode {
        &self.rounds[r]
    }

    pub fn shots(&self) -> usize {
        self.rounds.len()
    }

    pub fn validate_for(&self, n: &Network, alphabet: Alphabet, shots: usize) -> Result<()> {
        if self.rounds.len() != shots {
            return Err(shape(format!(
                "network code has {} rounds, scenario needs {shots}",
                self.rounds.len()
            )));
        }
        self.rounds
            .iter()
            .try_for_each(|r| r.validate_for(n, alphabet))
    }
}

/// Match-else-star on the Diamond: `F_{V1}` forwards, `F_{V2}(a, b) = a` if
/// `a = b` and `★` otherwise.
pub fn scheme_diamond_star(alphabet: Alphabet) -> RoundCode {
    let star = alphabet.star();
    RoundCode::new([
        VertexFunction::from_fn(1, 1, 1, alphabet, |x| vec![x[0]]),
        VertexFunction::from_fn(2, 2, 1, alphabet, move |x| {
            vec![if x[0] == x[1] { x[0] } else { star }]
        }),
    ])
}

/// Strict majority of the inputs (or `★` when there is none), copied to
/// every outgoing edge of every intermediate vertex.
pub fn scheme_compare_flag(alphabet: Alphabet, n: &Network) -> RoundCode {
    let star = alphabet.star();
    RoundCode::new(n.intermediates().map(|v| {
        let out = n.outdegree(v);
        VertexFunction::from_fn(v, n.indegree(v), out, alphabet, move |x| {
            vec![strict_majority(x).unwrap_or(star); out]
        })
    }))
}

/// Forwards inputs unchanged (`deg⁺ = deg⁻`) or broadcasts a single input.
pub fn scheme_identity(alphabet: Alphabet, n: &Network) -> Result<RoundCode> {
    let mut fs = Vec::new();
    for v in n.intermediates() {
        let (i, o) = (n.indegree(v), n.outdegree(v));
        let f = if i == o {
            VertexFunction::from_fn(v, i, o, alphabet, |x| x.to_vec())
        } else if i == 1 {
            VertexFunction::from_fn(v, 1, o, alphabet, move |x| vec![x[0]; o])
        } else {
            return Err(invalid(format!(
                "vertex {v} has {i} inputs and {o} outputs; identity forwarding is undefined"
            )));
        };
        fs.push(f);
    }
    Ok(RoundCode::new(fs))
}

fn strict_majority(x: &[Symbol]) -> Option<Symbol> {
    let mut counts: BTreeMap<Symbol, usize> = BTreeMap::new();
    for &s in x {
        *counts.entry(s).or_default() += 1;
    }
    counts
        .into_iter()
        .find(|&(_, c)| 2 * c > x.len())
        .map(|(s, _)| s)
}

/// A non-empty set of distinct equal-length source words, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OuterCode {
    codewords: Vec<Word>,
}

impl OuterCode {
    pub fn new(words: impl IntoIterator<Item = Word>) -> Result<Self> {
        let mut codewords: Vec<Word> = words.into_iter().collect();
        if codewords.is_empty() {
            return Err(invalid("an outer code needs at least one codeword"));
        }
        let len = codewords[0].len();
        if codewords.iter().any(|w| w.len() != len) {
            return Err(shape("codewords have different lengths"));
        }
        codewords.sort();
        if let Some(w) = codewords.windows(2).find(|w| w[0] == w[1]) {
            return Err(invalid(format!("duplicate codeword {}", w[0])));
        }
        Ok(Self { codewords })
    }

    pub fn codewords(&self) -> &[Word] {
        &self.codewords
    }

    pub fn len(&self) -> usize {
        self.codewords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codewords.is_empty()
    }

    pub fn word_len(&self) -> usize {
        self.codewords[0].len()
    }
}

/// `{(a | a | a) : a ∈ A^shots, a ≠ (★, .., ★)}`, laid out round-major on
/// `(e1, e2, e3)`.
pub fn code_diamond_multishot(alphabet: Alphabet, shots: usize) -> Result<OuterCode> {
    if shots < 1 {
        return Err(invalid("shots must be at least 1"));
    }
    let all_star = Word::new(vec![alphabet.star(); shots]);
    OuterCode::new(
        alphabet
            .words(shots)
            .filter(|a| *a != all_star)
            .map(|a| Word::new(a.symbols().iter().flat_map(|&s| [s, s, s]).collect())),
    )
}

/// Each round the source repeats one symbol on all of its out-edges; the
/// symbol ranges over `A` or, with `restrict_star`, over `A \ {★}`.
pub fn code_repetition(
    alphabet: Alphabet,
    n: &Network,
    shots: usize,
    restrict_star: bool,
) -> Result<OuterCode> {
    if shots < 1 {
        return Err(invalid("shots must be at least 1"));
    }
    let width = n.outdegree(n.source());
    let symbols: Vec<Symbol> = if restrict_star {
        alphabet.non_star().collect()
    } else {
        alphabet.symbols().collect()
    };
    let k = symbols.len();
    let total = k.pow(shots as u32);
    OuterCode::new((0..total).map(|r| {
        let digits = Word::from_rank(r, k, shots);
        Word::new(
            digits
                .symbols()
                .iter()
                .flat_map(|&d| std::iter::repeat_n(symbols[d as usize], width))
                .collect(),
        )
    }))
}

/// Inverse lookup from terminal output to codeword. `outputs[i]` is the
/// output set of `code.codewords()[i]`.
pub fn decode_table(code: &OuterCode, outputs: &[WordSet]) -> Result<BTreeMap<Word, Word>> {
    if outputs.len() != code.len() {
        return Err(shape("one output set per codeword is required"));
    }
    let mut table: BTreeMap<Word, Word> = BTreeMap::new();
    for (cw, set) in code.codewords().iter().zip(outputs) {
        for out in set {
            if let Some(prev) = table.insert(out.clone(), cw.clone()) {
                return Err(Error::Ambiguous {
                    first: prev,
                    second: cw.clone(),
                    output: out.clone(),
                });
            }
        }
    }
    Ok(table)
}
