//! The Singleton cut-set bound and capacity arithmetic.

use std::fmt;

use num_traits::Float;

use crate::error::{invalid, Result};
use crate::netmodel::{enumerate_min_cuts, EdgeCut, EdgeId, Network, VertexId};
use crate::word::Alphabet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TerminalBound {
    pub terminal: VertexId,
    pub value: usize,
    /// A minimal cut attaining `value` (first in cut order).
    pub cut: EdgeCut,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutSetBound {
    pub per_terminal: Vec<TerminalBound>,
    pub value: usize,
}

fn objective(cut: &[EdgeId], restricted: &[EdgeId], t: usize) -> usize {
    let inside = cut.iter().filter(|e| restricted.contains(e)).count();
    (cut.len() - inside) + inside.saturating_sub(2 * t)
}

/// `min over cuts E′ of |E′ \ U| + max(0, |E′ ∩ U| − 2t)`, per terminal and
/// overall. The objective is monotone in `E′`, so minimal cuts suffice.
pub fn singleton_cut_set_bound(
    n: &Network,
    restricted: &[EdgeId],
    t: usize,
) -> Result<CutSetBound> {
    if let Some(&e) = restricted.iter().find(|&&e| e >= n.edges().len()) {
        return Err(invalid(format!("edge {e} does not exist")));
    }
    let mut per_terminal = Vec::new();
    for &terminal in n.terminals() {
        let cuts = enumerate_min_cuts(n, terminal)?;
        let best = cuts
            .into_iter()
            .map(|c| (objective(&c.edges, restricted, t), c))
            .min_by(|a, b| a.0.cmp(&b.0))
            .ok_or_else(|| invalid(format!("terminal {terminal} is unreachable")))?;
        per_terminal.push(TerminalBound {
            terminal,
            value: best.0,
            cut: best.1,
        });
    }
    let value = per_terminal.iter().map(|b| b.value).min().unwrap_or(0);
    Ok(CutSetBound {
        per_terminal,
        value,
    })
}

/// `log_q(size) / shots`. Code sizes stay exact integers; the real value is
/// derived on demand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Capacity {
    pub size: usize,
    pub q: usize,
    pub shots: usize,
}

impl Capacity {
    pub fn new(size: usize, alphabet: Alphabet, shots: usize) -> Result<Self> {
        if size == 0 || shots == 0 {
            return Err(invalid("capacity needs size ≥ 1 and shots ≥ 1"));
        }
        Ok(Self {
            size,
            q: alphabet.size(),
            shots,
        })
    }

    pub fn value<F: Float>(&self) -> F {
        let cast = |v: usize| F::from(v).expect("representable");
        cast(self.size).log(cast(self.q)) / cast(self.shots)
    }
}

impl fmt::Display for Capacity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.6}", self.value::<f64>())
    }
}

pub fn capacity_value(size: usize, alphabet: Alphabet, shots: usize) -> Result<f64> {
    Ok(Capacity::new(size, alphabet, shots)?.value())
}
