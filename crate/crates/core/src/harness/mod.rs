//! Seeded, reproducible property suites.
//!
//! Every case derives its own seed from the suite seed and the case index,
//! so cases run in parallel and a failure can be replayed from the numbers
//! in its report.

mod kernel;
mod semantic;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use indexmap::IndexMap;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::env::Environment;
use crate::error::Result;
use crate::formula::Formula;

pub use kernel::suite_kernel_laws;
pub use semantic::{
    equality_axiom_witness, reproduce_counterexample, suite_demorgan, suite_elementary_equivalence,
    suite_range, suite_restriction, suite_transfer, CounterexampleValues,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub cases: usize,
    pub dim_min: usize,
    pub dim_max: usize,
    /// Rank cap for generated quantum sets.
    pub rank: usize,
    pub branch: usize,
    /// Rank cap for hereditarily finite sets in the `eqv` suite.
    pub hf_rank: usize,
    /// Also evaluate the transfer corpus under the contrapositive and
    /// relevance conditionals (reported, never failed).
    pub conditionals: bool,
}

impl SuiteConfig {
    pub fn new(seed: u64, cases: usize) -> Self {
        SuiteConfig {
            seed,
            cases,
            dim_min: 2,
            dim_max: 4,
            rank: 2,
            branch: 3,
            hf_rank: 3,
            conditionals: false,
        }
    }

    pub fn dims(mut self, min: usize, max: usize) -> Self {
        self.dim_min = min;
        self.dim_max = max;
        self
    }

    pub fn rank(mut self, rank: usize) -> Self {
        self.rank = rank;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Demorgan,
    Restriction,
    Transfer,
    Eqv,
    Kernel,
    Range,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Demorgan,
        Suite::Restriction,
        Suite::Transfer,
        Suite::Eqv,
        Suite::Kernel,
        Suite::Range,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Demorgan => "demorgan",
            Suite::Restriction => "restriction",
            Suite::Transfer => "transfer",
            Suite::Eqv => "eqv",
            Suite::Kernel => "kernel",
            Suite::Range => "range",
        }
    }

    pub fn default_cases(self) -> usize {
        match self {
            Suite::Kernel => 500,
            Suite::Demorgan | Suite::Eqv => 200,
            Suite::Restriction | Suite::Transfer | Suite::Range => 100,
        }
    }

    pub fn run(self, cfg: &SuiteConfig) -> SuiteReport {
        match self {
            Suite::Demorgan => suite_demorgan(cfg),
            Suite::Restriction => suite_restriction(cfg),
            Suite::Transfer => suite_transfer(cfg),
            Suite::Eqv => suite_elementary_equivalence(cfg),
            Suite::Kernel => suite_kernel_laws(cfg),
            Suite::Range => suite_range(cfg),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

/// SplitMix64 of the suite seed and case index.
pub fn case_seed(seed: u64, case: usize) -> u64 {
    let mut z = seed ^ (case as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub case: usize,
    pub case_seed: u64,
    pub check: String,
    pub formula: Option<String>,
    pub expected: String,
    pub actual: String,
    /// Universe file (JSON) of the failing case.
    pub universe: Option<String>,
}

impl Failure {
    fn to_json(&self) -> Value {
        json!({
            "case": self.case,
            "case_seed": self.case_seed,
            "check": self.check,
            "formula": self.formula,
            "expected": self.expected,
            "actual": self.actual,
            "universe": self.universe.as_ref().and_then(|u| serde_json::from_str::<Value>(u).ok()),
        })
    }
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub cases: usize,
    pub failures: Vec<Failure>,
    /// Suite-specific tallies (checks run, discrepancies seen, ...).
    pub counters: IndexMap<String, u64>,
    pub elapsed: Duration,
    pub replay: String,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn counter(&self, name: &str) -> u64 {
        self.counters.get(name).copied().unwrap_or(0)
    }

    pub fn summary(&self) -> Value {
        json!({
            "suite": self.suite,
            "seed": self.seed,
            "cases": self.cases,
            "failures": self.failures.len(),
            "passed": self.passed(),
            "elapsed_ms": self.elapsed.as_millis() as u64,
            "counters": self.counters,
            "replay": self.replay,
            "failure_details": self.failures.iter().map(Failure::to_json).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "suite {}: {} (seed {}, {} cases, {} failures, {:.2} s)",
            self.suite,
            if self.passed() { "PASS" } else { "FAIL" },
            self.seed,
            self.cases,
            self.failures.len(),
            self.elapsed.as_secs_f64()
        )?;
        for (k, v) in &self.counters {
            writeln!(f, "  {k}: {v}")?;
        }
        writeln!(f, "  replay: {}", self.replay)?;
        for (i, x) in self.failures.iter().enumerate().take(20) {
            writeln!(
                f,
                "failure {} (case {}, case seed {}): {}",
                i + 1,
                x.case,
                x.case_seed,
                x.check
            )?;
            if let Some(formula) = &x.formula {
                writeln!(f, "  formula:  {formula}")?;
            }
            writeln!(f, "  expected: {}", x.expected)?;
            writeln!(f, "  actual:   {}", x.actual)?;
            if let Some(u) = &x.universe {
                writeln!(f, "  universe: {u}")?;
            }
        }
        if self.failures.len() > 20 {
            writeln!(f, "... {} more failures", self.failures.len() - 20)?;
        }
        Ok(())
    }
}

/// What one case reports back to the runner.
#[derive(Default)]
pub(crate) struct Case {
    index: usize,
    seed: u64,
    failures: Vec<Failure>,
    counters: IndexMap<String, u64>,
    universe: Option<String>,
}

impl Case {
    fn new(index: usize, seed: u64) -> Self {
        Case {
            index,
            seed,
            ..Case::default()
        }
    }

    /// Universe dump attached to every later failure of this case.
    pub(crate) fn set_universe(&mut self, env: &Environment) {
        self.universe = serde_json::to_string(&env.to_file()).ok();
    }

    pub(crate) fn count(&mut self, name: &str, by: u64) {
        *self.counters.entry(name.to_string()).or_insert(0) += by;
    }

    pub(crate) fn fail(
        &mut self,
        check: &str,
        formula: Option<&Formula>,
        expected: impl fmt::Display,
        actual: impl fmt::Display,
    ) {
        self.failures.push(Failure {
            case: self.index,
            case_seed: self.seed,
            check: check.to_string(),
            formula: formula.map(|f| f.to_string()),
            expected: expected.to_string(),
            actual: actual.to_string(),
            universe: self.universe.clone(),
        });
    }

    /// Counts the check and records a failure if `expected != actual`.
    pub(crate) fn expect_eq<T: PartialEq + fmt::Display>(
        &mut self,
        check: &str,
        formula: Option<&Formula>,
        expected: &T,
        actual: &T,
    ) {
        self.count("checks", 1);
        if expected != actual {
            self.fail(check, formula, expected, actual);
        }
    }

    pub(crate) fn expect(&mut self, check: &str, formula: Option<&Formula>, ok: bool, what: &str) {
        self.count("checks", 1);
        if !ok {
            self.fail(check, formula, what, "violated");
        }
    }
}

pub(crate) fn replay_command(suite: &str, cfg: &SuiteConfig) -> String {
    let mut s = format!(
        "qsets check {suite} --seed {} --cases {} --dim {}-{} --rank {}",
        cfg.seed, cfg.cases, cfg.dim_min, cfg.dim_max, cfg.rank
    );
    if cfg.conditionals {
        s.push_str(" --conditionals");
    }
    s
}

/// Runs `body` on every case in parallel and aggregates in case order.
pub(crate) fn run_suite<F>(
    suite: &str,
    cfg: &SuiteConfig,
    prelude: Option<Case>,
    body: F,
) -> SuiteReport
where
    F: Fn(&mut Case) -> Result<()> + Sync,
{
    let start = Instant::now();
    let mut cases: Vec<Case> = (0..cfg.cases)
        .into_par_iter()
        .map(|i| {
            let mut case = Case::new(i, case_seed(cfg.seed, i));
            if let Err(e) = body(&mut case) {
                case.fail("error", None, "evaluation without error", e);
            }
            case
        })
        .collect();
    if let Some(p) = prelude {
        cases.insert(0, p);
    }
    let mut failures = Vec::new();
    let mut counters = IndexMap::new();
    for c in cases {
        failures.extend(c.failures);
        for (k, v) in c.counters {
            *counters.entry(k).or_insert(0) += v;
        }
    }
    SuiteReport {
        suite: suite.to_string(),
        seed: cfg.seed,
        cases: cfg.cases,
        failures,
        counters,
        elapsed: start.elapsed(),
        replay: replay_command(suite, cfg),
    }
}
