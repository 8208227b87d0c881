//! Executes scenarios against the core library.

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use advnet::capacity::{
    audit_lemmas, is_unambiguous, max_unambiguous, singleton_cut_set_bound, sweep_schemes,
    Capacity, LemmaAudit, Mode, SearchBudget, TransferQuery, Unambiguity,
};
use advnet::schemes::{code_repetition, NetworkCode, OuterCode};
use advnet::Word;
use anyhow::{anyhow, Context, Result};

use crate::cache::Cache;
use crate::report::{ReportRow, Status, CAPACITY_TOLERANCE};
use crate::scenario::{Candidates, Command, Expected, Outcome, Resolved, Scenario};

/// Command-line overrides of scenario options.
#[derive(Debug, Clone, Default)]
pub struct RunConfig {
    pub timeout: Option<Duration>,
    pub workers: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq)]
struct Values {
    outcome: Option<Outcome>,
    size: Option<usize>,
    capacity: Option<f64>,
    bound: Option<usize>,
}

impl Values {
    fn render(&self) -> String {
        let mut parts = Vec::new();
        if let Some(o) = self.outcome {
            parts.push(match o {
                Outcome::Unambiguous => "unambiguous".to_string(),
                Outcome::Ambiguous => "ambiguous".to_string(),
            });
        }
        if let Some(s) = self.size {
            parts.push(format!("size={s}"));
        }
        if let Some(c) = self.capacity {
            parts.push(format!("capacity={c:.6}"));
        }
        if let Some(b) = self.bound {
            parts.push(format!("bound={b}"));
        }
        parts.join(" ")
    }

    fn from_expected(e: &Expected) -> Self {
        Self {
            outcome: e.outcome,
            size: e.size,
            capacity: e.capacity,
            bound: e.bound,
        }
    }

    /// Every expected field is present and equal (capacity within tolerance).
    fn satisfies(&self, expected: &Values) -> bool {
        fn eq<T: PartialEq>(got: Option<T>, want: Option<T>) -> bool {
            want.is_none() || got == want
        }
        eq(self.outcome, expected.outcome)
            && eq(self.size, expected.size)
            && eq(self.bound, expected.bound)
            && match (self.capacity, expected.capacity) {
                (_, None) => true,
                (Some(got), Some(want)) => (got - want).abs() <= CAPACITY_TOLERANCE,
                (None, Some(_)) => false,
            }
    }
}

struct Computed {
    values: Values,
    mode: String,
    exact: bool,
    /// A failed sanity check (lemma audit) forces a mismatch.
    failed_check: bool,
    detail: String,
}

/// Runs `command` on `scenario`, inside a dedicated thread pool when a worker
/// count is configured.
pub fn run_scenario(scenario: &Scenario, command: Command, cfg: &RunConfig) -> Result<ReportRow> {
    let workers = cfg.workers.or(scenario.options.workers);
    match workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()?
            .install(|| execute(scenario, command, cfg)),
        None => execute(scenario, command, cfg),
    }
}

fn execute(scenario: &Scenario, command: Command, cfg: &RunConfig) -> Result<ReportRow> {
    let resolved = scenario.resolve()?;
    let start = Instant::now();
    let computed = match command {
        Command::Bound => bound(&resolved)?,
        Command::Verify => verify(scenario, &resolved)?,
        Command::Search => search(scenario, &resolved, cfg)?,
    };
    let wall_ms = start.elapsed().as_millis() as u64;

    let expected = scenario.expected.as_ref().map(Values::from_expected);
    let status = if computed.failed_check {
        Status::Mismatch
    } else if !computed.exact {
        Status::LowerBoundOnly
    } else {
        match &expected {
            None => Status::Exploratory,
            Some(e) if computed.values.satisfies(e) => Status::Match,
            Some(_) => Status::Mismatch,
        }
    };
    Ok(ReportRow {
        scenario_id: scenario.id.clone(),
        claim: scenario.claim.clone(),
        computed: computed.values.render(),
        expected: expected.map(|e| e.render()).unwrap_or_default(),
        status,
        mode: computed.mode,
        wall_ms,
        detail: computed.detail,
    })
}

fn bound(r: &Resolved) -> Result<Computed> {
    let b = singleton_cut_set_bound(&r.network, r.adversary.edges(), r.adversary.budget())?;
    let detail = b
        .per_terminal
        .iter()
        .map(|t| {
            format!(
                "terminal {}: {} via cut {:?}",
                t.terminal, t.value, t.cut.edges
            )
        })
        .collect::<Vec<_>>()
        .join("; ");
    Ok(Computed {
        values: Values {
            bound: Some(b.value),
            ..Values::default()
        },
        mode: "cut-set bound".into(),
        exact: true,
        failed_check: false,
        detail,
    })
}

fn query(s: &Scenario, r: &Resolved, scheme: NetworkCode) -> Result<TransferQuery> {
    Ok(TransferQuery::new(
        r.network.clone(),
        r.alphabet,
        scheme,
        r.adversary.clone(),
        s.shots,
    )?)
}

fn is_diamond(r: &Resolved) -> bool {
    r.network.two_level_shape() == Some((vec![1, 2], vec![1, 1]))
}

fn describe_audit(a: &LemmaAudit) -> String {
    let mark = |ok: bool| if ok { "pass" } else { "FAIL" };
    format!(
        "audit: L-A {} ({} lane-one images), L-B {}, L-C {} ({} singleton outputs), INEQ {} ({} <= {})",
        mark(a.lane_one_injective),
        a.lane_one_images,
        mark(a.v1_injective),
        mark(a.singleton_bound),
        a.singleton_e5_outputs,
        mark(a.inequality),
        a.inequality_lhs,
        a.inequality_rhs
    )
}

/// Audits unambiguous Diamond codes; returns (detail, failed).
fn audit(r: &Resolved, code: &OuterCode, q: &TransferQuery) -> Result<(String, bool)> {
    if !is_diamond(r) {
        return Ok((String::new(), false));
    }
    let a = audit_lemmas(code, q)?;
    Ok((describe_audit(&a), !a.all_pass()))
}

fn capacity(r: &Resolved, size: usize, shots: usize) -> Result<f64> {
    Ok(Capacity::new(size, r.alphabet, shots)?.value())
}

fn verify(s: &Scenario, r: &Resolved) -> Result<Computed> {
    let code = r.code.as_ref().context("verify needs a code")?;
    let q = query(s, r, r.scheme.clone().context("verify needs a scheme")?)?;
    match is_unambiguous(code, &q)? {
        Unambiguity::Unambiguous => {
            let (detail, failed) = audit(r, code, &q)?;
            Ok(Computed {
                values: Values {
                    outcome: Some(Outcome::Unambiguous),
                    size: Some(code.len()),
                    capacity: Some(capacity(r, code.len(), s.shots)?),
                    bound: None,
                },
                mode: Mode::Constructed.to_string(),
                exact: true,
                failed_check: failed,
                detail,
            })
        }
        Unambiguity::Ambiguous {
            first,
            second,
            output,
            target,
        } => Ok(Computed {
            values: Values {
                outcome: Some(Outcome::Ambiguous),
                ..Values::default()
            },
            mode: Mode::Constructed.to_string(),
            exact: true,
            failed_check: false,
            detail: format!(
                "witness: codewords {first} and {second} both reach {output} at terminal {}",
                r.network.terminals()[target]
            ),
        }),
    }
}

fn candidates(s: &Scenario, r: &Resolved, q: &TransferQuery) -> Result<Vec<Word>> {
    Ok(match s.options.candidates {
        Candidates::All => q.all_inputs().collect(),
        Candidates::NonStar => {
            let star = r.alphabet.star();
            q.all_inputs()
                .filter(|w| !w.symbols().contains(&star))
                .collect()
        }
        Candidates::Repetition => code_repetition(r.alphabet, &r.network, s.shots, false)?
            .codewords()
            .to_vec(),
    })
}

fn search(s: &Scenario, r: &Resolved, cfg: &RunConfig) -> Result<Computed> {
    let budget = SearchBudget {
        timeout: cfg
            .timeout
            .or(s.options.timeout_secs.map(Duration::from_secs_f64)),
        seed: cfg.seed.unwrap_or(s.options.seed),
    };
    if s.options.sweep {
        // Any scheme works for building the candidate list.
        let scheme = match &r.scheme {
            Some(sc) => sc.clone(),
            None => NetworkCode::uniform(
                advnet::schemes::RoundCode::new(r.network.intermediates().map(|v| {
                    advnet::schemes::VertexFunction::from_index(
                        v,
                        r.network.indegree(v),
                        r.network.outdegree(v),
                        r.alphabet,
                        0,
                    )
                })),
                s.shots,
            ),
        };
        let cands = candidates(s, r, &query(s, r, scheme)?)?;
        let out = sweep_schemes(
            &r.network,
            r.alphabet,
            &r.adversary,
            s.shots,
            Some(cands),
            None,
            budget,
        )?;
        return Ok(Computed {
            values: Values {
                size: Some(out.best_size),
                capacity: Some(capacity(r, out.best_size, s.shots)?),
                ..Values::default()
            },
            mode: Mode::ExhaustiveScheme.to_string(),
            exact: out.exact,
            failed_check: false,
            detail: format!(
                "{} schemes checked; first optimal scheme index {}",
                out.schemes_checked, out.scheme_index
            ),
        });
    }

    let q = query(s, r, r.scheme.clone().context("search needs a scheme")?)?;
    let cands = candidates(s, r, &q)?;
    let out = max_unambiguous(&q, cands, budget)?;
    let (audit_detail, failed) = audit(r, &out.code, &q)?;
    let words: Vec<String> = out
        .code
        .codewords()
        .iter()
        .map(ToString::to_string)
        .collect();
    let mut detail = format!("code: {}", words.join(" "));
    if !audit_detail.is_empty() {
        detail = format!("{detail}; {audit_detail}");
    }
    Ok(Computed {
        values: Values {
            size: Some(out.size),
            capacity: Some(capacity(r, out.size, s.shots)?),
            ..Values::default()
        },
        mode: Mode::FixedScheme.to_string(),
        exact: out.exact,
        failed_check: failed,
        detail,
    })
}

/// Expands directories to their `*.json` files, sorted; files pass through.
pub fn collect_paths(inputs: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for p in inputs {
        if p.is_dir() {
            let mut files: Vec<PathBuf> = std::fs::read_dir(p)
                .with_context(|| format!("listing {}", p.display()))?
                .map(|e| e.map(|e| e.path()))
                .collect::<std::io::Result<_>>()?;
            files.retain(|f| f.extension().is_some_and(|x| x == "json"));
            files.sort();
            out.extend(files);
        } else if p.exists() {
            out.push(p.clone());
        } else {
            return Err(anyhow!("{} does not exist", p.display()));
        }
    }
    Ok(out)
}

fn file_id(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

/// Runs one scenario file with its own command, consulting the cache.
/// Failures become mismatch rows.
pub fn run_file(
    path: &Path,
    command: Option<Command>,
    cfg: &RunConfig,
    cache: Option<&mut Cache>,
) -> ReportRow {
    let scenario = match Scenario::load(path) {
        Ok(s) => s,
        Err(e) => return ReportRow::error(file_id(path), "", &e),
    };
    let command = command.unwrap_or(scenario.command);
    if let Some(row) = cache.as_ref().and_then(|c| c.get(&scenario, command)) {
        return row.clone();
    }
    let row = run_scenario(&scenario, command, cfg)
        .unwrap_or_else(|e| ReportRow::error(scenario.id.clone(), scenario.claim.clone(), &e));
    if let Some(c) = cache {
        c.insert(&scenario, command, &row);
    }
    row
}

/// Runs every scenario under `inputs` (files or directories).
pub fn run_report(
    inputs: &[PathBuf],
    cfg: &RunConfig,
    mut cache: Option<&mut Cache>,
) -> Result<Vec<ReportRow>> {
    let paths = collect_paths(inputs)?;
    Ok(paths
        .iter()
        .map(|p| run_file(p, None, cfg, cache.as_deref_mut()))
        .collect())
}
