//! Adversarial network coding: networks, set-valued channels, adversary
//! models, network codes, and exact verification of one-shot and multishot
//! capacities on small instances.

pub mod adversary;
pub mod capacity;
pub mod chanalg;
mod error;
pub mod netmodel;
pub mod schemes;
pub mod word;

pub use error::{Error, Result};
pub use word::{Alphabet, Symbol, Word, WordSet};
