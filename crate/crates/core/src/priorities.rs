//! Prioritized argumentation: values on formulas and rules, liftings to
//! argument values, and π-defeat.
//!
//! Values are natural numbers and a higher value is weaker. An attacker
//! π-defeats a target at a point when it is at least as strong as the point,
//! i.e. its value is `≤` the point's value. `invert` flips the order.

use std::collections::{BTreeMap, BTreeSet};

use crate::arguments::{build_arguments, Argument, AttackGraph, Setting};
use crate::contrariness::{conj_closure, AttackPointSpec};
use crate::deduction::{Step, Tree};
use crate::error::{Error, Result};
use crate::formula::{Formula, Rule};
use crate::semantics::{extensions, Backend, Entailment, Semantics};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PriorityAssignment {
    pub pi: BTreeMap<Formula, u32>,
    pub rule_pi: BTreeMap<String, u32>,
    /// Value of every formula and rule not listed.
    pub default: Option<u32>,
    pub invert: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lifting {
    ConclusionValue,
    MinSupport,
    MaxSupport,
    WeakestLinkAspic,
    MaxAba,
}

impl Lifting {
    pub fn parse(s: &str) -> Option<Lifting> {
        Some(match s {
            "conclusion" => Lifting::ConclusionValue,
            "min" => Lifting::MinSupport,
            "max" => Lifting::MaxSupport,
            "weakest-link" => Lifting::WeakestLinkAspic,
            "max-aba" => Lifting::MaxAba,
            _ => return None,
        })
    }
}

/// Which formula the reverse clause of r-defeat puts at stake.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ReverseReading {
    /// The target set derives a contrary of a member of the attacking set.
    #[default]
    TargetDerives,
    /// The attacking set derives a contrary of a member of the target set.
    Literal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PriorityOptions {
    pub lifting: Lifting,
    /// Adds `⊕(Γ')` attack points for ABA r-defeat.
    pub reverse: bool,
}

impl PriorityOptions {
    pub fn new(lifting: Lifting) -> PriorityOptions {
        PriorityOptions {
            lifting,
            reverse: false,
        }
    }
}

impl PriorityAssignment {
    pub fn constant(v: u32) -> PriorityAssignment {
        PriorityAssignment {
            default: Some(v),
            ..Default::default()
        }
    }

    pub fn le(&self, a: u32, b: u32) -> bool {
        if self.invert {
            a >= b
        } else {
            a <= b
        }
    }

    pub fn lt(&self, a: u32, b: u32) -> bool {
        self.le(a, b) && a != b
    }

    /// The strongest of `values`; 0 when empty.
    pub fn least(&self, values: impl IntoIterator<Item = u32>) -> u32 {
        values
            .into_iter()
            .reduce(|a, b| if self.le(a, b) { a } else { b })
            .unwrap_or(0)
    }

    /// The weakest of `values`; 0 when empty.
    pub fn greatest(&self, values: impl IntoIterator<Item = u32>) -> u32 {
        values
            .into_iter()
            .reduce(|a, b| if self.le(a, b) { b } else { a })
            .unwrap_or(0)
    }

    pub fn formula_value(&self, f: &Formula) -> Result<u32> {
        self.pi
            .get(f)
            .copied()
            .or(self.default)
            .ok_or_else(|| Error::MissingValue(f.to_string()))
    }

    pub fn rule_value(&self, r: &Rule) -> Result<u32> {
        self.rule_pi
            .get(&*r.id)
            .copied()
            .or(r.value)
            .or(self.default)
            .ok_or_else(|| Error::MissingValue(format!("rule {}", r.id)))
    }

    /// Value of a premise `→ ψ`; unvalued premises count as strongest.
    fn fact_value(&self, f: &Formula) -> u32 {
        self.pi.get(f).copied().or(self.default).unwrap_or(0)
    }

    /// Value of a premise-language element as an attack point.
    pub fn point_value(&self, setting: &Setting, f: &Formula) -> Result<u32> {
        if let Some(rules) = setting.core.aspic_rules() {
            return match f {
                Formula::RuleName(_) => Ok(u32::MAX),
                Formula::RuleLit(r) if r.body.is_empty() && r.id.starts_with("_p") => {
                    Ok(self.fact_value(&r.head))
                }
                Formula::RuleLit(_) => Ok(u32::MAX),
                _ => {
                    let values: Vec<u32> = rules
                        .defeasible
                        .iter()
                        .filter(|r| r.head == *f)
                        .map(|r| self.rule_value(r))
                        .collect::<Result<_>>()?;
                    if values.is_empty() {
                        self.formula_value(f)
                    } else {
                        Ok(self.least(values))
                    }
                }
            };
        }
        match f {
            Formula::RuleName(_) | Formula::RuleLit(_) => Ok(u32::MAX),
            Formula::OPlus(items) => {
                let vs: Vec<u32> = items
                    .iter()
                    .map(|x| self.formula_value(x))
                    .collect::<Result<_>>()?;
                Ok(self.greatest(vs))
            }
            other => self.formula_value(other),
        }
    }

    /// The value of an argument under a lifting.
    pub fn argument_value(&self, setting: &Setting, lifting: Lifting, a: &Argument) -> Result<u32> {
        match lifting {
            Lifting::ConclusionValue => self.formula_value(&a.conclusion),
            Lifting::MinSupport => {
                let vs: Vec<u32> = a
                    .support
                    .iter()
                    .map(|f| self.point_value(setting, f))
                    .collect::<Result<_>>()?;
                Ok(self.least(vs))
            }
            Lifting::MaxSupport | Lifting::MaxAba => {
                let vs: Vec<u32> = a
                    .support
                    .iter()
                    .map(|f| self.point_value(setting, f))
                    .collect::<Result<_>>()?;
                Ok(self.greatest(vs))
            }
            Lifting::WeakestLinkAspic => {
                let mut vs = Vec::new();
                for f in &a.support {
                    if let Formula::RuleLit(r) = f {
                        if r.is_defeasible() {
                            vs.push(self.rule_value(r)?);
                        } else if r.body.is_empty() && r.id.starts_with("_p") {
                            vs.push(self.fact_value(&r.head));
                        }
                    }
                }
                Ok(self.greatest(vs))
            }
        }
    }

    /// Weakest-link value of a deduction tree.
    pub fn weakest_link_value(&self, tree: &Tree, facts: &[Formula]) -> Result<u32> {
        let mut vs = Vec::new();
        for c in &tree.children {
            vs.push(self.weakest_link_value(c, facts)?);
        }
        match &tree.step {
            Step::Rule(r) if r.is_defeasible() => vs.push(self.rule_value(r)?),
            Step::Premise(j) => vs.push(self.fact_value(&facts[*j])),
            _ => {}
        }
        Ok(self.greatest(vs))
    }
}

/// `candidate ∈ ‾of` for labeled formulas: the bases are contrary and the
/// candidate is at least as strong.
pub fn labeled_contrary(
    setting: &Setting,
    pi: &PriorityAssignment,
    candidate: &Formula,
    of: &Formula,
) -> Result<bool> {
    let (Some(v1), Some(v2)) = (candidate.label(), of.label()) else {
        return Err(Error::Precondition(
            "labeled contrariness needs labeled formulas".into(),
        ));
    };
    Ok(setting.is_contrary(candidate.base(), of.base())? && pi.le(v1, v2))
}

/// A point of a support with its value; `strict` points need a strictly
/// stronger attacker.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Point {
    pub formula: Formula,
    pub value: u32,
    pub strict: bool,
}

fn subsets_of(s: &BTreeSet<Formula>) -> Vec<BTreeSet<Formula>> {
    let items: Vec<&Formula> = s.iter().collect();
    (1u64..(1u64 << items.len()))
        .map(|m| {
            (0..items.len())
                .filter(|i| m & (1 << i) != 0)
                .map(|i| items[i].clone())
                .collect()
        })
        .collect()
}

pub fn points(
    setting: &Setting,
    pi: &PriorityAssignment,
    support: &BTreeSet<Formula>,
    reverse: bool,
) -> Result<Vec<Point>> {
    let mut out = Vec::new();
    match setting.attack_points {
        AttackPointSpec::Id => {
            for f in support {
                out.push(Point {
                    formula: f.clone(),
                    value: pi.point_value(setting, f)?,
                    strict: false,
                });
            }
        }
        AttackPointSpec::ConjClosure => {
            for (c, parts) in conj_closure(support) {
                let vs: Vec<u32> = parts
                    .iter()
                    .map(|p| pi.point_value(setting, p))
                    .collect::<Result<_>>()?;
                out.push(Point {
                    formula: c,
                    value: pi.least(vs),
                    strict: false,
                });
            }
        }
    }
    if reverse {
        for sub in subsets_of(support) {
            let vs: Vec<u32> = sub
                .iter()
                .map(|f| pi.formula_value(f))
                .collect::<Result<_>>()?;
            out.push(Point {
                formula: Formula::oplus(sub).expect("nonempty"),
                value: pi.greatest(vs),
                strict: true,
            });
        }
    }
    Ok(out)
}

/// `candidate ∈ ‾⊕(Δ)`: `Δ` derives a contrary of `candidate`.
fn oplus_contrary(setting: &Setting, candidate: &Formula, items: &[Formula]) -> Result<bool> {
    let delta: BTreeSet<Formula> = items.iter().cloned().collect();
    for k in setting.contrariness.canonical(candidate) {
        if derives_from(setting, &delta, &k)? {
            return Ok(true);
        }
    }
    Ok(false)
}

fn derives_from(setting: &Setting, delta: &BTreeSet<Formula>, goal: &Formula) -> Result<bool> {
    if setting.core.aba_rules().is_some() {
        return Ok(setting.core.aba_derives(delta, goal)?.is_some());
    }
    setting.core.holds(delta, goal)
}

/// `a` π-defeats `b`: some point of `Supp(b)` has `Conc(a)` among its
/// contraries and `a` is at least as strong as the point.
pub fn pi_defeats(
    setting: &Setting,
    pi: &PriorityAssignment,
    opts: PriorityOptions,
    a: &Argument,
    b: &Argument,
) -> Result<bool> {
    let va = match a.value {
        Some(v) => v,
        None => pi.argument_value(setting, opts.lifting, a)?,
    };
    let pts = points(setting, pi, &b.support, opts.reverse)?;
    defeats_at(setting, pi, va, &a.conclusion, &pts)
}

fn defeats_at(
    setting: &Setting,
    pi: &PriorityAssignment,
    value: u32,
    conclusion: &Formula,
    pts: &[Point],
) -> Result<bool> {
    for p in pts {
        let strong = if p.strict {
            pi.lt(value, p.value)
        } else {
            pi.le(value, p.value)
        };
        if !strong {
            continue;
        }
        let hit = match &p.formula {
            Formula::OPlus(items) if p.strict => oplus_contrary(setting, conclusion, items)?,
            f => setting.is_contrary(conclusion, f)?,
        };
        if hit {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Arguments with values and the π-defeat relation among them.
pub fn build_prioritized_graph(
    setting: &Setting,
    premises: &BTreeSet<Formula>,
    queries: &BTreeSet<Formula>,
    pi: &PriorityAssignment,
    opts: PriorityOptions,
) -> Result<AttackGraph> {
    let (mut arguments, incomplete) = build_arguments(setting, premises, queries)?;
    for a in arguments.iter_mut() {
        a.value = Some(pi.argument_value(setting, opts.lifting, a)?);
    }
    let mut edges = Vec::new();
    for b in &arguments {
        let pts = points(setting, pi, &b.support, opts.reverse)?;
        for a in &arguments {
            if defeats_at(setting, pi, a.value.expect("assigned"), &a.conclusion, &pts)? {
                edges.push((a.id, b.id));
            }
        }
    }
    edges.sort();
    Ok(AttackGraph {
        arguments,
        edges,
        queries: queries.clone(),
        incomplete,
    })
}

/// `⊨_sem`, or `⊨_sem^{≤v}` with `at_most = Some(v)`.
#[allow(clippy::too_many_arguments)]
pub fn prioritized_entails(
    setting: &Setting,
    premises: &BTreeSet<Formula>,
    pi: &PriorityAssignment,
    opts: PriorityOptions,
    phi: &Formula,
    sem: Semantics,
    at_most: Option<u32>,
) -> Result<Entailment> {
    let queries: BTreeSet<Formula> = [phi.clone()].into_iter().collect();
    let graph = build_prioritized_graph(setting, premises, &queries, pi, opts)?;
    entails_with_bound(&graph, pi, phi, sem, at_most)
}

pub fn entails_with_bound(
    graph: &AttackGraph,
    pi: &PriorityAssignment,
    phi: &Formula,
    sem: Semantics,
    at_most: Option<u32>,
) -> Result<Entailment> {
    let exts = extensions(&graph.relation(), sem, Backend::Auto)?;
    let witnesses: Vec<Option<usize>> = exts
        .iter()
        .map(|e| {
            e.members.iter().copied().find(|&i| {
                let a = &graph.arguments[i];
                a.conclusion == *phi && at_most.is_none_or(|v| pi.le(a.value.unwrap_or(0), v))
            })
        })
        .collect();
    Ok(Entailment {
        holds: witnesses.iter().all(Option::is_some),
        vacuous: exts.is_empty(),
        witnesses,
    })
}

fn aba_contrary_derived(
    setting: &Setting,
    from: &BTreeSet<Formula>,
    target: &Formula,
) -> Result<bool> {
    for k in setting.contrariness.canonical(target) {
        if setting.core.aba_derives(from, &k)?.is_some() {
            return Ok(true);
        }
    }
    Ok(false)
}

fn all_subsets(s: &BTreeSet<Formula>) -> Vec<BTreeSet<Formula>> {
    let mut out = vec![BTreeSet::new()];
    out.extend(subsets_of(s));
    out
}

fn max_value(pi: &PriorityAssignment, s: &BTreeSet<Formula>) -> Result<u32> {
    let vs: Vec<u32> = s
        .iter()
        .map(|f| pi.formula_value(f))
        .collect::<Result<_>>()?;
    Ok(pi.greatest(vs))
}

/// `Δ` d-defeats `Γ`: some `Δ'' ⊆ Δ` derives a contrary of some `δ ∈ Γ` with
/// `max_π(Δ'') ≤ π(δ)`.
pub fn aba_d_defeat(
    setting: &Setting,
    pi: &PriorityAssignment,
    delta: &BTreeSet<Formula>,
    gamma: &BTreeSet<Formula>,
) -> Result<bool> {
    for d in gamma {
        let vd = pi.formula_value(d)?;
        for sub in all_subsets(delta) {
            if pi.le(max_value(pi, &sub)?, vd) && aba_contrary_derived(setting, &sub, d)? {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// `Δ` r-defeats `Γ`: d-defeat, or the reverse clause under `reading`.
pub fn aba_r_defeat(
    setting: &Setting,
    pi: &PriorityAssignment,
    delta: &BTreeSet<Formula>,
    gamma: &BTreeSet<Formula>,
    reading: ReverseReading,
) -> Result<bool> {
    if aba_d_defeat(setting, pi, delta, gamma)? {
        return Ok(true);
    }
    let (members, sources) = match reading {
        ReverseReading::TargetDerives => (delta, gamma),
        ReverseReading::Literal => (gamma, delta),
    };
    for m in members {
        let vm = pi.formula_value(m)?;
        for sub in all_subsets(sources) {
            if pi.lt(vm, max_value(pi, &sub)?) && aba_contrary_derived(setting, &sub, m)? {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contrariness::{AttackRule, ContrarinessSpec};
    use crate::deduction::{AbaRules, AspicMode, AspicRules, DeducibilityCore};

    fn a(n: &str) -> Formula {
        Formula::atom(n)
    }

    fn set(fs: &[Formula]) -> BTreeSet<Formula> {
        fs.iter().cloned().collect()
    }

    fn dicodef() -> Setting {
        Setting::named(DeducibilityCore::cl(), AttackRule::DiCoDef).unwrap()
    }

    #[test]
    fn labeled_contrariness() {
        let s = dicodef();
        let pi = PriorityAssignment::default();
        let np = |v| Formula::labeled(a("p").negated(), v);
        let p2 = Formula::labeled(a("p"), 2);
        assert!(labeled_contrary(&s, &pi, &np(1), &p2).unwrap());
        assert!(!labeled_contrary(&s, &pi, &np(3), &p2).unwrap());
        assert!(labeled_contrary(&s, &pi, &np(2), &p2).unwrap());
    }

    fn arg(support: &[Formula], conclusion: Formula, value: u32) -> Argument {
        Argument {
            id: 0,
            support: set(support),
            conclusion,
            value: Some(value),
        }
    }

    #[test]
    fn defeat_respects_values() {
        let s = dicodef();
        let mut pi = PriorityAssignment::default();
        pi.pi.insert(a("p"), 2);
        let opts = PriorityOptions::new(Lifting::ConclusionValue);
        let target = arg(&[a("p")], a("p"), 2);
        assert!(pi_defeats(&s, &pi, opts, &arg(&[], a("p").negated(), 1), &target).unwrap());
        assert!(!pi_defeats(&s, &pi, opts, &arg(&[], a("p").negated(), 3), &target).unwrap());
    }

    #[test]
    fn missing_value_is_reported() {
        let s = dicodef();
        let pi = PriorityAssignment::default();
        let opts = PriorityOptions::new(Lifting::MinSupport);
        let target = arg(&[a("p")], a("p"), 0);
        let err = pi_defeats(&s, &pi, opts, &arg(&[], a("p").negated(), 1), &target);
        assert!(matches!(err, Err(Error::MissingValue(_))));
    }

    fn aba_setting(rules: Vec<Rule>, contraries: &[(Formula, Formula)]) -> Setting {
        let mut m = BTreeMap::new();
        for (x, c) in contraries {
            m.entry(x.clone())
                .or_insert_with(BTreeSet::new)
                .insert(c.clone());
        }
        let core = DeducibilityCore::aba(AbaRules::new(rules, false));
        Setting::native(core, ContrarinessSpec::ExplicitMap(m), AttackPointSpec::Id)
    }

    #[test]
    fn aba_d_defeat_by_max_value() {
        let s = aba_setting(
            vec![Rule::strict("r", vec![a("a")], a("c"))],
            &[(a("b"), a("c"))],
        );
        let mut pi = PriorityAssignment::default();
        pi.pi.insert(a("a"), 1);
        pi.pi.insert(a("b"), 2);
        assert!(aba_d_defeat(&s, &pi, &set(&[a("a")]), &set(&[a("b")])).unwrap());
        pi.pi.insert(a("a"), 3);
        assert!(!aba_d_defeat(&s, &pi, &set(&[a("a")]), &set(&[a("b")])).unwrap());
        let none = aba_setting(Vec::new(), &[(a("b"), a("c"))]);
        assert!(!aba_r_defeat(
            &none,
            &pi,
            &set(&[a("a")]),
            &set(&[a("b")]),
            ReverseReading::TargetDerives
        )
        .unwrap());
    }

    #[test]
    fn reverse_readings_agree_and_diverge() {
        let s = aba_setting(
            vec![Rule::strict("r", vec![a("b")], a("c"))],
            &[(a("a"), a("c"))],
        );
        let mut pi = PriorityAssignment::default();
        pi.pi.insert(a("a"), 1);
        pi.pi.insert(a("b"), 2);
        let ab = set(&[a("a"), a("b")]);
        for reading in [ReverseReading::TargetDerives, ReverseReading::Literal] {
            assert!(aba_r_defeat(&s, &pi, &ab, &ab, reading).unwrap());
        }
        let (d, g) = (set(&[a("a")]), set(&[a("b")]));
        assert!(aba_r_defeat(&s, &pi, &d, &g, ReverseReading::TargetDerives).unwrap());
        assert!(!aba_r_defeat(&s, &pi, &d, &g, ReverseReading::Literal).unwrap());
    }

    #[test]
    fn weakest_link_recursion() {
        let n0 = Rule::defeasible("n0", vec![], a("p"), Some(2));
        let n1 = Rule::defeasible("n1", vec![a("p")], a("q"), Some(1));
        let rules = AspicRules::new(Vec::new(), vec![n0, n1], Vec::new(), AspicMode::Dagger);
        let core = DeducibilityCore::aspic(rules);
        let pi = PriorityAssignment::default();
        let (args, _) = core.aspic_deduce(&a("p")).unwrap();
        assert_eq!(pi.weakest_link_value(&args[0].tree, &[]).unwrap(), 2);
        let (args, _) = core.aspic_deduce(&a("q")).unwrap();
        assert_eq!(pi.weakest_link_value(&args[0].tree, &[]).unwrap(), 2);
    }

    #[test]
    fn weakest_link_over_strict_tree_and_premises() {
        let s = Rule::strict("s", vec![a("p"), a("q")], a("r"));
        let rules = AspicRules::new(vec![s], Vec::new(), vec![a("p"), a("q")], AspicMode::Dagger);
        let core = DeducibilityCore::aspic(rules);
        let mut pi = PriorityAssignment::default();
        pi.pi.insert(a("p"), 3);
        let (args, _) = core.aspic_deduce(&a("r")).unwrap();
        // max(π(p) = 3, π(q) unassigned = 0)
        assert_eq!(
            pi.weakest_link_value(&args[0].tree, &[a("p"), a("q")])
                .unwrap(),
            3
        );
        let bare = AspicRules::new(
            vec![Rule::strict("s", vec![a("p"), a("q")], a("r"))],
            Vec::new(),
            Vec::new(),
            AspicMode::Dagger,
        );
        let axioms = DeducibilityCore::aspic(bare)
            .extend_with_axiom(&a("p"))
            .extend_with_axiom(&a("q"));
        let (args, _) = axioms.aspic_deduce(&a("r")).unwrap();
        assert_eq!(pi.weakest_link_value(&args[0].tree, &[]).unwrap(), 0);
    }

    #[test]
    fn constant_priorities_degenerate() {
        let s = Setting::named(DeducibilityCore::cl_top(), AttackRule::DiDef).unwrap();
        let prem = set(&[a("p"), a("p").negated(), a("q")]);
        let queries = set(&[a("q")]);
        let plain = crate::arguments::build_graph(&s, &prem, &queries).unwrap();
        let pi = PriorityAssignment::constant(3);
        for lifting in [
            Lifting::ConclusionValue,
            Lifting::MinSupport,
            Lifting::MaxSupport,
        ] {
            let g =
                build_prioritized_graph(&s, &prem, &queries, &pi, PriorityOptions::new(lifting))
                    .unwrap();
            assert_eq!(g.edges, plain.edges);
        }
    }

    #[test]
    fn lower_valued_premise_wins() {
        let s = Setting::named(DeducibilityCore::cl_top(), AttackRule::DiCoDef).unwrap();
        let mut pi = PriorityAssignment::default();
        pi.pi.insert(a("p"), 1);
        pi.pi.insert(a("p").negated(), 2);
        let prem = set(&[a("p"), a("p").negated()]);
        let opts = PriorityOptions::new(Lifting::MinSupport);
        let e = prioritized_entails(&s, &prem, &pi, opts, &a("p"), Semantics::Grd, None).unwrap();
        assert!(e.holds);
        let e = prioritized_entails(
            &s,
            &prem,
            &pi,
            opts,
            &a("p").negated(),
            Semantics::Grd,
            None,
        )
        .unwrap();
        assert!(!e.holds);
        let bounded =
            prioritized_entails(&s, &prem, &pi, opts, &a("p"), Semantics::Grd, Some(0)).unwrap();
        assert!(!bounded.holds);
    }
}
