//! Deducibility relations: classical cores, rule-based cores, and the
//! wrappers that restrict a relation by a condition on supports.
//!
//! Axioms added by [`DeducibilityCore::extend_with_axiom`] always live on the
//! innermost core. Classical-family cores read them one step at a time:
//! `Γ ⊢^{+A} ψ` iff `Γ ∪ A' ⊢ ψ` for some `A' ⊆ A`. Rule cores treat them as
//! premise-free strict rules, which gives the genuine closure.

pub mod aba;
pub mod aspic;

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use crate::classical::Classical;
use crate::contrariness::{AttackPointSpec, ContrarinessSpec};
use crate::error::{Error, Result};
use crate::formula::Formula;

pub use aba::{AbaDerivation, AbaRules};
pub use aspic::{AspicArgument, AspicMode, AspicRules, Step, Tree};

#[derive(Clone, Debug)]
pub enum CoreKind {
    Cl,
    ClTop,
    McsCap,
    McsCup,
    Aba(Arc<AbaRules>),
    Aspic(Arc<AspicRules>),
    /// `⊢con`: supports must be consistent with respect to the contrariness.
    Consistent(Box<DeducibilityCore>, ContrarinessSpec),
    /// `⊢_*`: supports must be classically satisfiable.
    ClConsistent(Box<DeducibilityCore>),
    /// `⊢^∅`: no attack point of the support has an unconditional contrary.
    NoEmptyAttackers(Box<DeducibilityCore>, ContrarinessSpec, AttackPointSpec),
}

type Memo = Arc<Mutex<HashMap<BTreeSet<Formula>, bool>>>;

#[derive(Clone, Debug)]
pub struct DeducibilityCore {
    pub kind: CoreKind,
    pub axioms: BTreeSet<Formula>,
    cl: Arc<Classical>,
    memo: Memo,
}

/// Candidate arguments produced by a core, plus whether a bounded search was
/// cut short.
#[derive(Clone, Debug, Default)]
pub struct Derived {
    pub pairs: Vec<(BTreeSet<Formula>, Formula)>,
    pub incomplete: bool,
}

fn subsets<T: Clone>(items: &[T]) -> impl Iterator<Item = Vec<T>> + '_ {
    (0u64..(1u64 << items.len())).map(move |mask| {
        (0..items.len())
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| items[i].clone())
            .collect()
    })
}

impl DeducibilityCore {
    pub fn new(kind: CoreKind) -> DeducibilityCore {
        let cl = match &kind {
            CoreKind::Consistent(b, _)
            | CoreKind::ClConsistent(b)
            | CoreKind::NoEmptyAttackers(b, _, _) => b.cl.clone(),
            _ => Arc::new(Classical::new()),
        };
        DeducibilityCore {
            kind,
            axioms: BTreeSet::new(),
            cl,
            memo: Memo::default(),
        }
    }

    pub fn cl() -> DeducibilityCore {
        Self::new(CoreKind::Cl)
    }

    pub fn cl_top() -> DeducibilityCore {
        Self::new(CoreKind::ClTop)
    }

    pub fn mcs_cap() -> DeducibilityCore {
        Self::new(CoreKind::McsCap)
    }

    pub fn mcs_cup() -> DeducibilityCore {
        Self::new(CoreKind::McsCup)
    }

    pub fn aba(rules: AbaRules) -> DeducibilityCore {
        Self::new(CoreKind::Aba(Arc::new(rules)))
    }

    pub fn aspic(rules: AspicRules) -> DeducibilityCore {
        Self::new(CoreKind::Aspic(Arc::new(rules)))
    }

    pub fn classical(&self) -> &Arc<Classical> {
        &self.cl
    }

    /// The core with all wrappers peeled off.
    pub fn innermost(&self) -> &DeducibilityCore {
        match &self.kind {
            CoreKind::Consistent(b, _)
            | CoreKind::ClConsistent(b)
            | CoreKind::NoEmptyAttackers(b, _, _) => b.innermost(),
            _ => self,
        }
    }

    /// True when the innermost core is classical consequence or one of its
    /// restrictions, so conclusions range over the whole language.
    pub fn is_cl_family(&self) -> bool {
        matches!(
            self.innermost().kind,
            CoreKind::Cl | CoreKind::ClTop | CoreKind::McsCap | CoreKind::McsCup
        )
    }

    pub fn aba_rules(&self) -> Option<&Arc<AbaRules>> {
        match &self.innermost().kind {
            CoreKind::Aba(r) => Some(r),
            _ => None,
        }
    }

    pub fn aspic_rules(&self) -> Option<&Arc<AspicRules>> {
        match &self.innermost().kind {
            CoreKind::Aspic(r) => Some(r),
            _ => None,
        }
    }

    /// The axioms in force, wherever they are stored.
    pub fn all_axioms(&self) -> &BTreeSet<Formula> {
        &self.innermost().axioms
    }

    pub fn name(&self) -> String {
        match &self.kind {
            CoreKind::Cl => "cl".into(),
            CoreKind::ClTop => "cl-top".into(),
            CoreKind::McsCap => "mcs-cap".into(),
            CoreKind::McsCup => "mcs-cup".into(),
            CoreKind::Aba(r) => if r.tracked {
                "aba-dagger"
            } else {
                "aba-ddagger"
            }
            .into(),
            CoreKind::Aspic(r) => match r.mode {
                AspicMode::Dagger => "aspic-dagger".into(),
                AspicMode::Ddagger => "aspic-ddagger".into(),
            },
            CoreKind::Consistent(b, _) => format!("con({})", b.name()),
            CoreKind::ClConsistent(b) => format!("cl-consistent({})", b.name()),
            CoreKind::NoEmptyAttackers(b, _, _) => format!("empty-attackers({})", b.name()),
        }
    }

    /// `⊢^{+φ}`. Idempotent for a repeated `φ`.
    pub fn extend_with_axiom(&self, phi: &Formula) -> DeducibilityCore {
        let kind = match &self.kind {
            CoreKind::Consistent(b, c) => {
                CoreKind::Consistent(Box::new(b.extend_with_axiom(phi)), c.clone())
            }
            CoreKind::ClConsistent(b) => CoreKind::ClConsistent(Box::new(b.extend_with_axiom(phi))),
            CoreKind::NoEmptyAttackers(b, c, p) => {
                CoreKind::NoEmptyAttackers(Box::new(b.extend_with_axiom(phi)), c.clone(), *p)
            }
            other => {
                let mut axioms = self.axioms.clone();
                axioms.insert(phi.clone());
                return DeducibilityCore {
                    kind: other.clone(),
                    axioms,
                    cl: self.cl.clone(),
                    memo: Memo::default(),
                };
            }
        };
        DeducibilityCore {
            kind,
            axioms: BTreeSet::new(),
            cl: self.cl.clone(),
            memo: Memo::default(),
        }
    }

    pub fn restrict_consistent(&self, contrariness: ContrarinessSpec) -> DeducibilityCore {
        Self::new(CoreKind::Consistent(Box::new(self.clone()), contrariness))
    }

    pub fn restrict_cl_consistent(&self) -> DeducibilityCore {
        Self::new(CoreKind::ClConsistent(Box::new(self.clone())))
    }

    pub fn restrict_empty_attackers(
        &self,
        contrariness: ContrarinessSpec,
        points: AttackPointSpec,
    ) -> DeducibilityCore {
        Self::new(CoreKind::NoEmptyAttackers(
            Box::new(self.clone()),
            contrariness,
            points,
        ))
    }

    /// `Γ ⊢ φ`.
    pub fn holds(&self, support: &BTreeSet<Formula>, goal: &Formula) -> Result<bool> {
        match &self.kind {
            CoreKind::Cl => self.cl.entails(support.iter().chain(&self.axioms), goal),
            CoreKind::ClTop | CoreKind::McsCap | CoreKind::McsCup => {
                let axioms: Vec<Formula> = self.axioms.iter().cloned().collect();
                for extra in subsets(&axioms) {
                    let mut all: BTreeSet<Formula> = support.clone();
                    all.extend(extra);
                    if self.base_holds(&all, goal)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            CoreKind::Aba(r) => Ok(r.holds(support, goal, &self.axioms)),
            CoreKind::Aspic(r) => r.holds(support, goal, &self.axioms, &self.cl),
            CoreKind::Consistent(b, _)
            | CoreKind::ClConsistent(b)
            | CoreKind::NoEmptyAttackers(b, _, _) => {
                Ok(b.holds(support, goal)? && self.accepts(support)?)
            }
        }
    }

    fn base_holds(&self, support: &BTreeSet<Formula>, goal: &Formula) -> Result<bool> {
        match &self.kind {
            CoreKind::ClTop => Ok(self.cl.satisfiable(support)? && self.cl.entails(support, goal)?),
            CoreKind::McsCap | CoreKind::McsCup => {
                let items: Vec<Formula> = support.iter().cloned().collect();
                let masks = self.cl.maximal_consistent(&items)?;
                let mut verdicts = masks.iter().map(|&m| {
                    let part = (0..items.len())
                        .filter(|i| m & (1 << i) != 0)
                        .map(|i| &items[i]);
                    self.cl.entails(part, goal)
                });
                if matches!(self.kind, CoreKind::McsCap) {
                    verdicts.try_fold(true, |acc, v| Ok(acc && v?))
                } else {
                    verdicts.try_fold(false, |acc, v| Ok(acc || v?))
                }
            }
            _ => self.holds(support, goal),
        }
    }

    /// The support-level condition a wrapper imposes; true for plain cores.
    pub fn accepts(&self, support: &BTreeSet<Formula>) -> Result<bool> {
        let inner = match &self.kind {
            CoreKind::Consistent(b, _)
            | CoreKind::ClConsistent(b)
            | CoreKind::NoEmptyAttackers(b, _, _) => b,
            _ => return Ok(true),
        };
        if let Some(&v) = self
            .memo
            .lock()
            .unwrap_or_else(|e| e.into_inner())
            .get(support)
        {
            return Ok(v);
        }
        let v = match &self.kind {
            CoreKind::Consistent(b, c) => {
                // Θ' ⊊ Γ are covered by the one-smaller subsets.
                let mut ok = true;
                for x in support {
                    let mut rest = support.clone();
                    rest.remove(x);
                    if !self.accepts(&rest)? {
                        ok = false;
                        break;
                    }
                    if c.canonical(x)
                        .iter()
                        .try_fold(false, |acc, k| Ok::<_, Error>(acc || b.holds(&rest, k)?))?
                    {
                        ok = false;
                        break;
                    }
                }
                ok && inner.accepts(support)?
            }
            CoreKind::ClConsistent(_) => self.cl.satisfiable(support)? && inner.accepts(support)?,
            CoreKind::NoEmptyAttackers(b, c, p) => {
                let empty = BTreeSet::new();
                let mut ok = true;
                'outer: for point in p.points(support) {
                    for k in c.canonical(&point) {
                        if b.holds(&empty, &k)? {
                            ok = false;
                            break 'outer;
                        }
                    }
                }
                ok && inner.accepts(support)?
            }
            _ => unreachable!(),
        };
        self.memo
            .lock()
            .unwrap_or_else(|e| e.into_inner())
            .insert(support.clone(), v);
        Ok(v)
    }

    /// AF-consistency: no `Θ' ⊆ Γ` and `γ' ∈ Θ'` with `Θ' ∖ {γ'}`
    /// deriving a contrary of `γ'`. Decided with canonical contraries.
    pub fn is_consistent(
        &self,
        support: &BTreeSet<Formula>,
        contrariness: &ContrarinessSpec,
    ) -> Result<bool> {
        self.restrict_consistent(contrariness.clone())
            .accepts(support)
    }

    /// A witness derivation for an ABA core.
    pub fn aba_derives(
        &self,
        assumptions: &BTreeSet<Formula>,
        goal: &Formula,
    ) -> Result<Option<AbaDerivation>> {
        let inner = self.innermost();
        match &inner.kind {
            CoreKind::Aba(r) => Ok(r.derives(assumptions, goal, &inner.axioms)),
            _ => Err(Error::Config(format!("{} is not an ABA core", self.name()))),
        }
    }

    /// Deduction trees for `goal` with their supports, for an ASPIC core.
    pub fn aspic_deduce(&self, goal: &Formula) -> Result<(Vec<AspicArgument>, bool)> {
        let inner = self.innermost();
        match &inner.kind {
            CoreKind::Aspic(r) => r.derivations(goal, &inner.axioms, &inner.cl),
            _ => Err(Error::Config(format!(
                "{} is not an ASPIC core",
                self.name()
            ))),
        }
    }

    /// Finite conclusion set of a support for rule-based cores.
    pub fn conclusions(&self, support: &BTreeSet<Formula>) -> Option<BTreeSet<Formula>> {
        let inner = self.innermost();
        match &inner.kind {
            CoreKind::Aba(r) => r.conclusions(support, &inner.axioms),
            _ => None,
        }
    }

    /// Every `(Γ, γ)` with `Γ ⊆ premises`, `γ ∈ goals` and `Γ ⊢ γ`.
    pub fn derive_all(
        &self,
        premises: &BTreeSet<Formula>,
        goals: &BTreeSet<Formula>,
    ) -> Result<Derived> {
        let mut out = Derived::default();
        match &self.kind {
            CoreKind::Aba(r) => {
                let items: Vec<Formula> = premises.iter().cloned().collect();
                for sub in subsets(&items) {
                    let support: BTreeSet<Formula> = sub.into_iter().collect();
                    if let Some(known) = r.conclusions(&support, &self.axioms) {
                        for g in goals.iter().filter(|g| known.contains(*g)) {
                            out.pairs.push((support.clone(), g.clone()));
                        }
                    }
                }
            }
            CoreKind::Aspic(_) => {
                for g in goals {
                    let (args, incomplete) = self.aspic_deduce(g)?;
                    out.incomplete |= incomplete;
                    for a in args {
                        if a.support.is_subset(premises) {
                            out.pairs.push((a.support, g.clone()));
                        }
                    }
                }
            }
            CoreKind::Consistent(b, _)
            | CoreKind::ClConsistent(b)
            | CoreKind::NoEmptyAttackers(b, _, _) => {
                let inner = b.derive_all(premises, goals)?;
                out.incomplete = inner.incomplete;
                for (s, g) in inner.pairs {
                    if self.accepts(&s)? {
                        out.pairs.push((s, g));
                    }
                }
            }
            _ => {
                let items: Vec<Formula> = premises.iter().cloned().collect();
                for sub in subsets(&items) {
                    let support: BTreeSet<Formula> = sub.into_iter().collect();
                    for g in goals {
                        if self.holds(&support, g)? {
                            out.pairs.push((support.clone(), g.clone()));
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Rule;

    fn a(n: &str) -> Formula {
        Formula::atom(n)
    }

    fn set(fs: &[Formula]) -> BTreeSet<Formula> {
        fs.iter().cloned().collect()
    }

    #[test]
    fn classical_examples() {
        let cl = DeducibilityCore::cl();
        assert!(cl
            .holds(&set(&[a("p"), Formula::implies(a("p"), a("q"))]), &a("q"))
            .unwrap());
        let top = DeducibilityCore::cl_top();
        let contra = Formula::and(a("p"), a("p").negated());
        assert!(!top
            .holds(&set(std::slice::from_ref(&contra)), &a("q"))
            .unwrap());
        assert!(cl.holds(&set(&[contra]), &a("q")).unwrap());
    }

    #[test]
    fn mcs_cores() {
        let s = set(&[a("p"), a("p").negated(), a("q")]);
        let cap = DeducibilityCore::mcs_cap();
        assert!(cap.holds(&s, &a("q")).unwrap());
        assert!(!cap.holds(&s, &a("p")).unwrap());
        let cup = DeducibilityCore::mcs_cup();
        assert!(cup.holds(&s, &a("p")).unwrap());
        assert!(!cup
            .holds(&s, &Formula::and(a("p"), a("p").negated()))
            .unwrap());
    }

    #[test]
    fn axioms_one_step() {
        let cl = DeducibilityCore::cl().extend_with_axiom(&a("p"));
        assert!(cl.holds(&BTreeSet::new(), &a("p")).unwrap());
        let star = DeducibilityCore::cl()
            .restrict_cl_consistent()
            .extend_with_axiom(&a("p"));
        assert!(star
            .holds(&set(&[a("q")]), &Formula::and(a("p"), a("q")))
            .unwrap());
        let again = cl.extend_with_axiom(&a("p"));
        assert_eq!(again.axioms, cl.axioms);
        // CL-top keeps an axiom out when it would make the support inconsistent.
        let top = DeducibilityCore::cl_top().extend_with_axiom(&a("p").negated());
        assert!(top.holds(&set(&[a("p")]), &a("p")).unwrap());
        assert!(!top
            .holds(&set(&[a("p")]), &Formula::and(a("p"), a("p").negated()))
            .unwrap());
    }

    #[test]
    fn aba_axiom_rule() {
        let rules = AbaRules::new(vec![Rule::strict("r1", vec![a("a")], a("p"))], false);
        let core = DeducibilityCore::aba(rules).extend_with_axiom(&a("q"));
        let d = core
            .aba_derives(&BTreeSet::new(), &a("q"))
            .unwrap()
            .unwrap();
        assert_eq!(d.rules.len(), 1);
        assert!(DeducibilityCore::cl()
            .aba_derives(&BTreeSet::new(), &a("q"))
            .is_err());
    }

    #[test]
    fn empty_attacker_restriction() {
        let cl = DeducibilityCore::cl();
        let def = cl.restrict_empty_attackers(ContrarinessSpec::Neg, AttackPointSpec::ConjClosure);
        let s = set(&[a("p"), a("p").negated()]);
        assert!(!def.holds(&s, &a("p")).unwrap());
        let id = cl.restrict_empty_attackers(ContrarinessSpec::Neg, AttackPointSpec::Id);
        assert!(id.holds(&set(&[a("p")]), &a("p")).unwrap());
        assert!(def.holds(&BTreeSet::new(), &Formula::Top).unwrap());
    }

    #[test]
    fn consistency_restriction() {
        let con = DeducibilityCore::cl().restrict_consistent(ContrarinessSpec::Neg);
        let bad = set(&[a("p"), a("p").negated()]);
        assert!(!con.holds(&bad, &a("p")).unwrap());
        assert!(con
            .holds(&set(&[a("p"), a("q")]), &Formula::and(a("p"), a("q")))
            .unwrap());
        let mt = set(&[Formula::implies(a("p"), a("q")), a("p"), a("q").negated()]);
        assert!(!con.accepts(&mt).unwrap());
        assert!(con.accepts(&BTreeSet::new()).unwrap());
    }

    #[test]
    fn derive_all_over_subsets() {
        let cl = DeducibilityCore::cl();
        let d = cl
            .derive_all(
                &set(&[a("p"), a("q")]),
                &set(&[Formula::and(a("p"), a("q"))]),
            )
            .unwrap();
        assert_eq!(d.pairs.len(), 1);
        assert_eq!(d.pairs[0].0.len(), 2);
    }
}
