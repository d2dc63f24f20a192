//! Contrariness functions and attack-point functions.

use std::collections::{BTreeMap, BTreeSet};

use crate::classical::Classical;
use crate::error::{Error, Result};
use crate::formula::Formula;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ContrarinessSpec {
    /// `‾φ = {¬φ}`.
    Neg,
    /// `‾¬ψ = {ψ}`, otherwise `‾φ = {¬φ}`.
    NegCanonical,
    /// `‾δ = {γ | γ ⊢ ¬δ}`.
    EntailNeg,
    /// `‾δ = {γ | γ ≡ ¬δ}`.
    EquivNeg,
    /// Finite, user-supplied contraries; absent formulas have none.
    ExplicitMap(BTreeMap<Formula, BTreeSet<Formula>>),
    /// Union of two contrariness functions.
    Union(Box<ContrarinessSpec>, Box<ContrarinessSpec>),
}

impl ContrarinessSpec {
    /// True when membership needs an entailment check rather than a lookup.
    pub fn is_semantic(&self) -> bool {
        match self {
            ContrarinessSpec::EntailNeg | ContrarinessSpec::EquivNeg => true,
            ContrarinessSpec::Union(a, b) => a.is_semantic() || b.is_semantic(),
            _ => false,
        }
    }

    /// `candidate ∈ ‾of`. Semantic kinds consult `cl`; they reject formulas
    /// outside the classical fragment.
    pub fn is_contrary(&self, candidate: &Formula, of: &Formula, cl: &Classical) -> Result<bool> {
        match self {
            ContrarinessSpec::Neg => Ok(matches!(candidate, Formula::Not(x) if **x == *of)),
            ContrarinessSpec::NegCanonical => Ok(match of {
                Formula::Not(x) => **x == *candidate,
                _ => matches!(candidate, Formula::Not(x) if **x == *of),
            }),
            ContrarinessSpec::EntailNeg | ContrarinessSpec::EquivNeg => {
                if !candidate.is_classical() || !of.is_classical() {
                    return Err(Error::Config(format!(
                        "entailment-based contrariness needs classical formulas, got {candidate} against {of}"
                    )));
                }
                let neg = of.negated();
                let forward = cl.entails([candidate], &neg)?;
                if matches!(self, ContrarinessSpec::EntailNeg) || !forward {
                    return Ok(forward);
                }
                cl.entails([&neg], candidate)
            }
            ContrarinessSpec::ExplicitMap(m) => {
                Ok(m.get(of).is_some_and(|s| s.contains(candidate)))
            }
            ContrarinessSpec::Union(a, b) => {
                Ok(a.is_contrary(candidate, of, cl)? || b.is_contrary(candidate, of, cl)?)
            }
        }
    }

    /// Canonical representatives of `‾φ`. Exact for the syntactic kinds; for
    /// the entailment kinds every member is classically at least as strong as
    /// `¬φ`, so `¬φ` represents them for cores closed under classical
    /// consequence.
    pub fn canonical(&self, of: &Formula) -> Vec<Formula> {
        match self {
            ContrarinessSpec::Neg | ContrarinessSpec::EntailNeg | ContrarinessSpec::EquivNeg => {
                vec![of.negated()]
            }
            ContrarinessSpec::NegCanonical => match of {
                Formula::Not(x) => vec![(**x).clone()],
                _ => vec![of.negated()],
            },
            ContrarinessSpec::ExplicitMap(m) => m
                .get(of)
                .map(|s| s.iter().cloned().collect())
                .unwrap_or_default(),
            ContrarinessSpec::Union(a, b) => {
                let mut set: BTreeSet<Formula> = a.canonical(of).into_iter().collect();
                set.extend(b.canonical(of));
                set.into_iter().collect()
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AttackPointSpec {
    Id,
    ConjClosure,
}

impl AttackPointSpec {
    /// `^Δ`; the points of the empty support are empty.
    pub fn points(&self, support: &BTreeSet<Formula>) -> BTreeSet<Formula> {
        match self {
            AttackPointSpec::Id => support.clone(),
            AttackPointSpec::ConjClosure => {
                conj_closure(support).into_iter().map(|(f, _)| f).collect()
            }
        }
    }
}

/// Every `⋀Δ'` for `∅ ≠ Δ' ⊆ Δ`, paired with the conjuncts it was built from.
pub fn conj_closure(support: &BTreeSet<Formula>) -> Vec<(Formula, Vec<Formula>)> {
    let items: Vec<&Formula> = support.iter().collect();
    let n = items.len();
    let mut out = Vec::with_capacity((1usize << n).saturating_sub(1));
    for mask in 1usize..(1usize << n) {
        let part: Vec<Formula> = (0..n)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| items[i].clone())
            .collect();
        let c = Formula::conj(&part).expect("nonempty");
        out.push((c, part));
    }
    out
}

pub fn attack_points(support: &BTreeSet<Formula>, spec: AttackPointSpec) -> BTreeSet<Formula> {
    spec.points(support)
}

/// The named attack forms of logic-based argumentation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AttackRule {
    DiCoDef,
    Def,
    DiDef,
    DiUcut,
    Ucut,
    Native,
}

impl AttackRule {
    /// The `(‾·, ^·)` pair of a named rule; `None` for `Native`.
    pub fn expand(self) -> Option<(ContrarinessSpec, AttackPointSpec)> {
        use AttackPointSpec::*;
        use ContrarinessSpec::*;
        Some(match self {
            AttackRule::DiCoDef => (Neg, Id),
            AttackRule::Def => (Neg, ConjClosure),
            AttackRule::DiDef => (EntailNeg, Id),
            AttackRule::DiUcut => (EquivNeg, Id),
            AttackRule::Ucut => (EquivNeg, ConjClosure),
            AttackRule::Native => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            AttackRule::DiCoDef => "dicodef",
            AttackRule::Def => "def",
            AttackRule::DiDef => "didef",
            AttackRule::DiUcut => "diucut",
            AttackRule::Ucut => "ucut",
            AttackRule::Native => "native",
        }
    }

    pub fn parse(s: &str) -> Option<AttackRule> {
        Some(match s {
            "dicodef" => AttackRule::DiCoDef,
            "def" => AttackRule::Def,
            "didef" => AttackRule::DiDef,
            "diucut" => AttackRule::DiUcut,
            "ucut" => AttackRule::Ucut,
            "native" => AttackRule::Native,
            _ => return None,
        })
    }
}
