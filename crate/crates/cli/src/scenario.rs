//! Scenario files: strict JSON descriptions of one experiment.

use std::path::Path;

use advnet::adversary::{AdversaryModel, ChangeSemantics, Regime};
use advnet::netmodel::{
    build_diamond, build_family_c, build_family_d, build_mirrored_diamond, build_single_edge,
    build_two_level, validate_network, Network,
};
use advnet::schemes::{
    code_diamond_multishot, code_repetition, scheme_compare_flag, scheme_diamond_star,
    scheme_identity, NetworkCode, OuterCode, RoundCode, VertexFunction,
};
use advnet::{Alphabet, Word};
use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};

pub const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub version: u32,
    pub id: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub claim: String,
    pub command: Command,
    pub network: NetworkSpec,
    pub alphabet: AlphabetSpec,
    pub adversary: AdversarySpec,
    #[serde(default = "one")]
    pub shots: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scheme: Option<SchemeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub code: Option<CodeSpec>,
    #[serde(default, skip_serializing_if = "Options::is_default")]
    pub options: Options,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<Expected>,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Bound,
    Verify,
    Search,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Bound => "bound",
            Command::Verify => "verify",
            Command::Search => "search",
        }
    }
}

/// A builtin name (`diamond`, `mirrored`, `single_edge`, `family_c(t)`,
/// `family_d(t)`, `two_level([..],[..])`) or an explicit edge list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NetworkSpec {
    Builtin(String),
    Explicit(ExplicitNetwork),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitNetwork {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
    #[serde(default)]
    pub source: usize,
    pub terminals: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlphabetSpec {
    pub q: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub star: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegimeSpec {
    OneShot,
    Static,
    Adaptive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChangeSpec {
    Must,
    May,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdversarySpec {
    /// Restricted edges, as 0-based canonical edge ids.
    pub edges: Vec<usize>,
    pub t: usize,
    pub regime: RegimeSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub change: Option<ChangeSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum SchemeSpec {
    /// `diamond_star`, `compare_flag` or `identity`.
    Named(String),
    Tables {
        tables: Vec<TableSpec>,
    },
    PerRound {
        rounds: Vec<SchemeSpec>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableSpec {
    pub vertex: usize,
    /// One output row per input tuple, inputs in lexicographic order.
    pub rows: Vec<Vec<u8>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum CodeSpec {
    /// Only `"search"`.
    Keyword(String),
    Builtin {
        builtin: String,
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        restrict_star: bool,
    },
    Words {
        words: Vec<Vec<u8>>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Candidates {
    #[default]
    All,
    Repetition,
    NonStar,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timeout_secs: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    #[serde(default, skip_serializing_if = "is_default")]
    pub candidates: Candidates,
    /// Search over every scheme instead of the fixed one.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub sweep: bool,
    #[serde(default, skip_serializing_if = "is_default")]
    pub seed: u64,
}

fn is_default<T: Default + PartialEq>(v: &T) -> bool {
    *v == T::default()
}

impl Options {
    fn is_default(&self) -> bool {
        is_default(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Unambiguous,
    Ambiguous,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    PaperClaim,
    DerivedOracle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub capacity: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outcome: Option<Outcome>,
    pub source: Source,
}

/// 1-based line of the first occurrence of `"key"` in `text`, if any.
fn line_of(text: &str, key: &str) -> Option<usize> {
    let needle = format!("\"{key}\"");
    text.lines()
        .position(|l| l.contains(&needle))
        .map(|i| i + 1)
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self> {
        // serde_json errors already carry "at line L column C".
        let s: Scenario = serde_json::from_str(text)?;
        if let Err(e) = s.resolve() {
            let line = e
                .downcast_ref::<FieldError>()
                .and_then(|f| line_of(text, f.field))
                .map(|l| format!("line {l}: "))
                .unwrap_or_default();
            bail!("{line}{e:#}");
        }
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in {}", path.display()))
    }

    /// Canonical serialization used for hashing and round-trips.
    pub fn to_canonical_json(&self) -> String {
        serde_json::to_string(self).expect("scenario serializes")
    }

    pub fn resolve(&self) -> Result<Resolved> {
        if self.version != VERSION {
            return Err(field(
                "version",
                anyhow!("unsupported version {}", self.version),
            ));
        }
        if self.shots < 1 {
            return Err(field("shots", anyhow!("shots must be at least 1")));
        }
        let network = self.network.build().map_err(|e| field("network", e))?;
        let alphabet = match self.alphabet.star {
            Some(star) => Alphabet::with_star(self.alphabet.q, star),
            None => Alphabet::new(self.alphabet.q),
        }
        .map_err(|e| field("alphabet", e.into()))?;
        let adversary = self
            .adversary
            .build(&network)
            .map_err(|e| field("adversary", e))?;
        if adversary.regime() == Regime::OneShot && self.shots != 1 {
            return Err(field(
                "shots",
                anyhow!("the one_shot regime needs shots = 1"),
            ));
        }
        let scheme = match &self.scheme {
            Some(s) => Some(
                s.build(&network, alphabet, self.shots)
                    .map_err(|e| field("scheme", e))?,
            ),
            None => None,
        };
        let code = match &self.code {
            Some(c) => c
                .build(&network, alphabet, self.shots)
                .map_err(|e| field("code", e))?,
            None => None,
        };
        match self.command {
            Command::Verify if code.is_none() => {
                return Err(field(
                    "code",
                    anyhow!("verify needs an explicit or builtin code"),
                ))
            }
            Command::Verify if scheme.is_none() => {
                return Err(field("scheme", anyhow!("verify needs a scheme")))
            }
            Command::Search if scheme.is_none() && !self.options.sweep => {
                return Err(field(
                    "scheme",
                    anyhow!("search needs a scheme unless options.sweep is set"),
                ))
            }
            _ => {}
        }
        if let Some(t) = self.options.timeout_secs {
            if !(t.is_finite() && t > 0.0) {
                return Err(field("timeout_secs", anyhow!("timeout must be positive")));
            }
        }
        if self.options.workers == Some(0) {
            return Err(field("workers", anyhow!("workers must be at least 1")));
        }
        Ok(Resolved {
            network,
            alphabet,
            adversary,
            scheme,
            code,
        })
    }
}

/// Everything a command needs, built and validated.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub network: Network,
    pub alphabet: Alphabet,
    pub adversary: AdversaryModel,
    pub scheme: Option<NetworkCode>,
    pub code: Option<OuterCode>,
}

#[derive(Debug)]
struct FieldError {
    field: &'static str,
    source: anyhow::Error,
}

impl std::fmt::Display for FieldError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {:#}", self.field, self.source)
    }
}

impl std::error::Error for FieldError {}

fn field(field: &'static str, source: anyhow::Error) -> anyhow::Error {
    FieldError { field, source }.into()
}

fn parse_usize_list(s: &str) -> Result<Vec<usize>> {
    let inner = s
        .trim()
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| anyhow!("expected a bracketed list, got {s:?}"))?;
    inner
        .split(',')
        .map(|v| v.trim().parse::<usize>().map_err(|e| anyhow!("{v:?}: {e}")))
        .collect()
}

impl NetworkSpec {
    pub fn build(&self) -> Result<Network> {
        let n = match self {
            NetworkSpec::Builtin(name) => {
                let name = name.trim();
                let (head, arg) = match name.split_once('(') {
                    Some((h, rest)) => (
                        h.trim(),
                        Some(
                            rest.strip_suffix(')')
                                .ok_or_else(|| anyhow!("unclosed '(' in {name:?}"))?,
                        ),
                    ),
                    None => (name, None),
                };
                match (head, arg) {
                    ("diamond", None) => build_diamond(),
                    ("mirrored", None) => build_mirrored_diamond(),
                    ("single_edge", None) => build_single_edge(),
                    ("family_c", Some(t)) => build_family_c(t.trim().parse()?)?,
                    ("family_d", Some(t)) => build_family_d(t.trim().parse()?)?,
                    ("two_level", Some(args)) => {
                        let split = args
                            .find("],")
                            .ok_or_else(|| anyhow!("two_level expects two lists"))?;
                        let x = parse_usize_list(&args[..=split])?;
                        let y = parse_usize_list(&args[split + 2..])?;
                        build_two_level(&x, &y)?
                    }
                    _ => bail!("unknown network {name:?}"),
                }
            }
            NetworkSpec::Explicit(e) => Network::from_edges(
                e.name.clone().unwrap_or_else(|| "explicit".into()),
                e.vertices,
                &e.edges,
                e.source,
                &e.terminals,
            )?,
        };
        let violations = validate_network(&n);
        if !violations.is_empty() {
            let list: Vec<String> = violations.iter().map(ToString::to_string).collect();
            bail!("{}", list.join("; "));
        }
        Ok(n)
    }
}

impl AdversarySpec {
    pub fn build(&self, n: &Network) -> Result<AdversaryModel> {
        let regime = match self.regime {
            RegimeSpec::OneShot => Regime::OneShot,
            RegimeSpec::Static => Regime::Static,
            RegimeSpec::Adaptive => Regime::Adaptive,
        };
        let change = self.change.map(|c| match c {
            ChangeSpec::Must => ChangeSemantics::MustChange,
            ChangeSpec::May => ChangeSemantics::MayChange,
        });
        let m = AdversaryModel::new(self.edges.iter().copied(), self.t, regime, change)?;
        m.validate_for(n)?;
        Ok(m)
    }
}

impl SchemeSpec {
    fn round(&self, n: &Network, a: Alphabet) -> Result<RoundCode> {
        Ok(match self {
            SchemeSpec::Named(name) => match name.as_str() {
                "diamond_star" => {
                    if n.two_level_shape() != Some((vec![1, 2], vec![1, 1])) {
                        bail!("diamond_star needs the diamond topology");
                    }
                    scheme_diamond_star(a)
                }
                "compare_flag" => scheme_compare_flag(a, n),
                "identity" => scheme_identity(a, n)?,
                other => bail!("unknown scheme {other:?}"),
            },
            SchemeSpec::Tables { tables } => RoundCode::new(
                tables
                    .iter()
                    .map(|t| {
                        if t.vertex >= n.vertices().len() {
                            bail!("vertex {} does not exist", t.vertex);
                        }
                        Ok(VertexFunction::from_rows(
                            t.vertex,
                            n.indegree(t.vertex),
                            n.outdegree(t.vertex),
                            a,
                            &t.rows,
                        )?)
                    })
                    .collect::<Result<Vec<_>>>()?,
            ),
            SchemeSpec::PerRound { .. } => bail!("per-round schemes cannot nest"),
        })
    }

    pub fn build(&self, n: &Network, a: Alphabet, shots: usize) -> Result<NetworkCode> {
        let code = match self {
            SchemeSpec::PerRound { rounds } => {
                if rounds.len() != shots {
                    bail!("{} round schemes given for {shots} shots", rounds.len());
                }
                NetworkCode::per_round(
                    rounds
                        .iter()
                        .map(|r| r.round(n, a))
                        .collect::<Result<_>>()?,
                )
            }
            other => NetworkCode::uniform(other.round(n, a)?, shots),
        };
        code.validate_for(n, a, shots)?;
        Ok(code)
    }
}

impl CodeSpec {
    pub fn is_search(&self) -> bool {
        matches!(self, CodeSpec::Keyword(k) if k == "search")
    }

    /// `None` for `"search"`.
    pub fn build(&self, n: &Network, a: Alphabet, shots: usize) -> Result<Option<OuterCode>> {
        let width = n.outdegree(n.source());
        let code = match self {
            CodeSpec::Keyword(k) if k == "search" => return Ok(None),
            CodeSpec::Keyword(k) => bail!("unknown code keyword {k:?}"),
            CodeSpec::Builtin {
                builtin,
                restrict_star,
            } => match builtin.as_str() {
                "diamond_multishot" => {
                    if width != 3 {
                        bail!("diamond_multishot needs three source edges");
                    }
                    code_diamond_multishot(a, shots)?
                }
                "repetition" => code_repetition(a, n, shots, *restrict_star)?,
                other => bail!("unknown code {other:?}"),
            },
            CodeSpec::Words { words } => {
                let len = shots * width;
                for w in words {
                    if w.len() != len {
                        bail!("codeword {w:?} has length {}, expected {len}", w.len());
                    }
                    if let Some(&s) = w.iter().find(|&&s| s as usize >= a.size()) {
                        bail!("codeword {w:?} uses symbol {s} outside the alphabet");
                    }
                }
                OuterCode::new(words.iter().map(|w| Word::new(w.clone())))?
            }
        };
        Ok(Some(code))
    }
}
