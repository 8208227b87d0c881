//! Transfer sets, unambiguity, exact code search, bounds and audits.

mod audit;
mod bounds;
pub mod mis;
mod search;
mod transfer;

use std::fmt;
use std::time::Duration;

pub use audit::{
    adversarial_channel, audit_lemmas, max_code_for_channel, pigeonhole_check,
    superadditivity_check, LemmaAudit, PigeonholeOutcome, PigeonholeVariant,
    SuperadditivityOutcome,
};
pub use bounds::{capacity_value, singleton_cut_set_bound, Capacity, CutSetBound, TerminalBound};
pub use search::{
    build_confusability, max_unambiguous, sweep_schemes, ConfusabilityGraph, SearchBudget,
    SearchOutcome, SweepOutcome, MAX_CANDIDATES, MAX_SCHEMES,
};
pub use transfer::{is_unambiguous, TransferQuery, Unambiguity};

/// How a code size was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Constructed,
    FixedScheme,
    ExhaustiveScheme,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Constructed => "constructed",
            Mode::FixedScheme => "fixed-scheme search",
            Mode::ExhaustiveScheme => "exhaustive-scheme search",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CapacityReport {
    pub network: String,
    pub budget: usize,
    pub regime: crate::adversary::Regime,
    pub change: crate::adversary::ChangeSemantics,
    pub shots: usize,
    pub size: usize,
    pub capacity: Capacity,
    pub bound: Option<usize>,
    pub mode: Mode,
    /// False when a search timed out and `size` is only a lower bound.
    pub exact: bool,
    pub wall: Duration,
}
