//! Executable postulates: non-interference, cumulativity, the maximal
//! consistent subset characterizations, and bounded checks of the
//! structural properties (pre-relevance, primeness, contraposition,
//! pointedness, Cut). Random drivers live in [`random`].

mod bounded;
mod checks;
mod generator;
mod mcs;
pub mod random;

pub use bounded::{
    check_closure_probe, check_contraposition, check_cut, check_pointed, check_pre_relevance,
    check_prime, reduction_oracle, universe, Bounds,
};
pub use checks::{
    check_crash_resistance, check_crash_resistance_on, check_cumulativity,
    check_extensional_cumulativity, check_grd_eq_mcs, check_grounded_items, check_mcs_preferred,
    check_mcs_stable, check_non_interference, check_stb_eq_prf_con, consequences,
    minimize_premises,
};
pub use generator::{default_seed, KbGenerator, DEFAULT_SEED};
pub use mcs::{mcs, MCS_CAP};

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// A violating instance, rendered as text so it can be replayed by hand.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub setting: String,
    pub premise_sets: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub formula: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub semantics: Option<String>,
    pub expected: String,
    pub actual: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub property: String,
    pub verdict: Verdict,
    pub trials: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Search bounds in force; a pass is "no counterexample within these".
    pub bounds: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl PropertyReport {
    pub fn new(property: &str) -> PropertyReport {
        PropertyReport {
            property: property.to_string(),
            verdict: Verdict::Pass,
            trials: 0,
            counterexample: None,
            seed: None,
            bounds: BTreeMap::new(),
            note: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn fail(mut self, cx: Counterexample) -> PropertyReport {
        self.verdict = Verdict::Fail;
        self.counterexample = Some(cx);
        self
    }

    pub fn inconclusive(mut self, note: impl Into<String>) -> PropertyReport {
        self.verdict = Verdict::Inconclusive;
        self.note = Some(note.into());
        self
    }

    pub fn bound(mut self, key: &str, value: impl ToString) -> PropertyReport {
        self.bounds.insert(key.to_string(), value.to_string());
        self
    }

    /// Folds the report of one more trial into an aggregate: the first
    /// failure wins, and inconclusive trials count but do not fail.
    pub fn absorb(&mut self, trial: PropertyReport) {
        self.trials += trial.trials.max(1);
        match (self.verdict, trial.verdict) {
            (Verdict::Fail, _) => {}
            (_, Verdict::Fail) => {
                self.verdict = Verdict::Fail;
                self.counterexample = trial.counterexample;
            }
            _ => {}
        }
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} ({} trials",
            self.property,
            self.verdict.name(),
            self.trials
        )?;
        if let Some(seed) = self.seed {
            write!(f, ", seed {seed}")?;
        }
        write!(f, ")")?;
        for (k, v) in &self.bounds {
            write!(f, "\n  bound {k} = {v}")?;
        }
        if let Some(note) = &self.note {
            write!(f, "\n  note: {note}")?;
        }
        if let Some(cx) = &self.counterexample {
            write!(f, "\n  setting: {}", cx.setting)?;
            for (i, s) in cx.premise_sets.iter().enumerate() {
                write!(f, "\n  premises[{i}]: {{{}}}", s.join(", "))?;
            }
            if let Some(phi) = &cx.formula {
                write!(f, "\n  formula: {phi}")?;
            }
            if let Some(sem) = &cx.semantics {
                write!(f, "\n  semantics: {sem}")?;
            }
            write!(f, "\n  expected: {}\n  actual: {}", cx.expected, cx.actual)?;
        }
        Ok(())
    }
}
