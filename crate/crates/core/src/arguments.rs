//! Settings, argument generation and attack graphs.
//!
//! Classical cores have infinitely many conclusions. Only the conclusions
//! that can attack are generated: the canonical contraries `¬φ` of attack
//! points of the premises, together with the queried formulas. An attacker
//! `(Γ, γ)` with `γ ⊢ ¬δ` is matched by `(Γ, ¬δ)` whenever the core is
//! closed under classical consequence.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

use crate::contrariness::{AttackPointSpec, AttackRule, ContrarinessSpec};
use crate::deduction::DeducibilityCore;
use crate::error::{Error, Result};
use crate::formula::Formula;

pub const PREMISE_CAP: usize = 10;

#[derive(Clone, Debug)]
pub struct Setting {
    pub core: DeducibilityCore,
    pub contrariness: ContrarinessSpec,
    pub attack_points: AttackPointSpec,
    pub attack_rule: AttackRule,
}

impl Setting {
    /// A setting with explicitly chosen contrariness and attack points.
    pub fn native(
        core: DeducibilityCore,
        contrariness: ContrarinessSpec,
        attack_points: AttackPointSpec,
    ) -> Setting {
        Setting {
            core,
            contrariness,
            attack_points,
            attack_rule: AttackRule::Native,
        }
    }

    /// A setting from a named attack form. Named forms are defined over
    /// classical-family cores only.
    pub fn named(core: DeducibilityCore, rule: AttackRule) -> Result<Setting> {
        let Some((contrariness, attack_points)) = rule.expand() else {
            return Err(Error::Config(
                "the native attack form needs explicit contrariness".into(),
            ));
        };
        if !core.is_cl_family() {
            return Err(Error::Config(format!(
                "attack form {} needs a classical core, got {}",
                rule.name(),
                core.name()
            )));
        }
        Ok(Setting {
            core,
            contrariness,
            attack_points,
            attack_rule: rule,
        })
    }

    pub fn with_core(&self, core: DeducibilityCore) -> Setting {
        Setting {
            core,
            ..self.clone()
        }
    }

    pub fn extend_with_axiom(&self, phi: &Formula) -> Setting {
        self.with_core(self.core.extend_with_axiom(phi))
    }

    /// The `⊢con` variant of this setting.
    pub fn consistent(&self) -> Setting {
        self.with_core(self.core.restrict_consistent(self.contrariness.clone()))
    }

    pub fn is_contrary(&self, candidate: &Formula, of: &Formula) -> Result<bool> {
        self.contrariness
            .is_contrary(candidate, of, self.core.classical())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Argument {
    pub id: usize,
    #[serde(serialize_with = "ser_support")]
    pub support: BTreeSet<Formula>,
    #[serde(serialize_with = "ser_formula")]
    pub conclusion: Formula,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<u32>,
}

fn ser_support<S: serde::Serializer>(
    s: &BTreeSet<Formula>,
    ser: S,
) -> std::result::Result<S::Ok, S::Error> {
    ser.collect_seq(render_support(s))
}

fn ser_formula<S: serde::Serializer>(f: &Formula, ser: S) -> std::result::Result<S::Ok, S::Error> {
    ser.collect_str(f)
}

/// Support elements rendered and sorted as text.
pub fn render_support(s: &BTreeSet<Formula>) -> Vec<String> {
    let mut v: Vec<String> = s.iter().map(|f| f.to_string()).collect();
    v.sort();
    v
}

impl Argument {
    pub fn key(&self) -> (BTreeSet<Formula>, Formula) {
        (self.support.clone(), self.conclusion.clone())
    }
}

impl fmt::Display for Argument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{{{}}} ⊢ {}",
            render_support(&self.support).join(", "),
            self.conclusion
        )?;
        if let Some(v) = self.value {
            write!(f, " @ {v}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct AttackGraph {
    pub arguments: Vec<Argument>,
    /// Sorted `(attacker, target)` pairs.
    pub edges: Vec<(usize, usize)>,
    pub queries: BTreeSet<Formula>,
    /// Set when a bounded derivation search was cut short.
    pub incomplete: bool,
}

impl AttackGraph {
    pub fn len(&self) -> usize {
        self.arguments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arguments.is_empty()
    }

    pub fn relation(&self) -> crate::semantics::AttackRelation {
        crate::semantics::AttackRelation::new(self.arguments.len(), &self.edges)
    }

    pub fn find(&self, support: &BTreeSet<Formula>, conclusion: &Formula) -> Option<usize> {
        self.arguments
            .iter()
            .position(|a| a.support == *support && a.conclusion == *conclusion)
    }

    pub fn attacks(&self, a: usize, b: usize) -> bool {
        self.edges.binary_search(&(a, b)).is_ok()
    }
}

/// Conclusions worth generating for the given premises.
pub fn relevant_conclusions(
    setting: &Setting,
    premises: &BTreeSet<Formula>,
    queries: &BTreeSet<Formula>,
) -> Result<BTreeSet<Formula>> {
    let mut out = queries.clone();
    let core = &setting.core;
    if core.is_cl_family() {
        // Points of any subset are among the points of the whole set.
        for point in setting.attack_points.points(premises) {
            out.extend(setting.contrariness.canonical(&point));
        }
    } else if let Some(rules) = core.aba_rules() {
        let mut leaves: BTreeSet<Formula> = premises.clone();
        leaves.extend(core.all_axioms().iter().cloned());
        let (closure, _) = crate::deduction::aba::closure(&leaves, &rules.rules);
        out.extend(closure);
    } else if let Some(rules) = core.aspic_rules() {
        out.extend(rules.conclusion_pool(core.all_axioms()));
        for point in setting.attack_points.points(premises) {
            out.extend(setting.contrariness.canonical(&point));
        }
    }
    Ok(out)
}

pub fn build_arguments(
    setting: &Setting,
    premises: &BTreeSet<Formula>,
    queries: &BTreeSet<Formula>,
) -> Result<(Vec<Argument>, bool)> {
    if setting.core.aspic_rules().is_none() && premises.len() > PREMISE_CAP {
        return Err(Error::PremiseCap {
            count: premises.len(),
            limit: PREMISE_CAP,
        });
    }
    let goals = relevant_conclusions(setting, premises, queries)?;
    let derived = setting.core.derive_all(premises, &goals)?;
    let pairs: BTreeSet<(BTreeSet<Formula>, Formula)> = derived.pairs.into_iter().collect();
    let mut keyed: Vec<((Vec<String>, String), (BTreeSet<Formula>, Formula))> = pairs
        .into_iter()
        .map(|(s, c)| ((render_support(&s), c.to_string()), (s, c)))
        .collect();
    keyed.sort();
    let args = keyed
        .into_iter()
        .enumerate()
        .map(|(id, (_, (support, conclusion)))| Argument {
            id,
            support,
            conclusion,
            value: None,
        })
        .collect();
    Ok((args, derived.incomplete))
}

/// Attack edges among `arguments`: `a` attacks `b` when `Conc(a)` is a
/// contrary of some attack point of `Supp(b)`.
pub fn attack_edges(setting: &Setting, arguments: &[Argument]) -> Result<Vec<(usize, usize)>> {
    let mut conclusions: Vec<&Formula> = arguments.iter().map(|a| &a.conclusion).collect();
    conclusions.sort();
    conclusions.dedup();
    let mut cache: HashMap<Formula, Vec<usize>> = HashMap::new();
    let mut edges = Vec::new();
    for b in arguments {
        let mut attackers: BTreeSet<usize> = BTreeSet::new();
        for point in setting.attack_points.points(&b.support) {
            if !cache.contains_key(&point) {
                let mut hit = Vec::new();
                for (k, c) in conclusions.iter().enumerate() {
                    if setting.is_contrary(c, &point)? {
                        hit.push(k);
                    }
                }
                cache.insert(point.clone(), hit);
            }
            attackers.extend(cache[&point].iter().copied());
        }
        for a in arguments {
            let k = conclusions.binary_search(&&a.conclusion).expect("present");
            if attackers.contains(&k) {
                edges.push((a.id, b.id));
            }
        }
    }
    edges.sort();
    Ok(edges)
}

pub fn build_graph(
    setting: &Setting,
    premises: &BTreeSet<Formula>,
    queries: &BTreeSet<Formula>,
) -> Result<AttackGraph> {
    let (arguments, incomplete) = build_arguments(setting, premises, queries)?;
    let edges = attack_edges(setting, &arguments)?;
    Ok(AttackGraph {
        arguments,
        edges,
        queries: queries.clone(),
        incomplete,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deduction::{AspicMode, AspicRules};
    use crate::formula::Rule;

    fn a(n: &str) -> Formula {
        Formula::atom(n)
    }

    fn set(fs: &[Formula]) -> BTreeSet<Formula> {
        fs.iter().cloned().collect()
    }

    #[test]
    fn relevant_conclusions_for_classical_cores() {
        let id = Setting::named(DeducibilityCore::cl(), AttackRule::DiCoDef).unwrap();
        let got = relevant_conclusions(&id, &set(&[a("p"), a("q")]), &set(&[a("r")])).unwrap();
        assert_eq!(got, set(&[a("p").negated(), a("q").negated(), a("r")]));
        let def = Setting::named(DeducibilityCore::cl(), AttackRule::Def).unwrap();
        let got = relevant_conclusions(&def, &set(&[a("p"), a("q")]), &BTreeSet::new()).unwrap();
        let pq = Formula::and(a("p"), a("q"));
        assert_eq!(
            got,
            set(&[a("p").negated(), a("q").negated(), pq.negated()])
        );
    }

    #[test]
    fn named_forms_need_classical_cores() {
        let aba = DeducibilityCore::aba(crate::deduction::AbaRules::new(Vec::new(), true));
        assert!(matches!(
            Setting::named(aba, AttackRule::Def),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn classical_arguments_against_brute_force() {
        let s = Setting::named(DeducibilityCore::cl(), AttackRule::DiCoDef).unwrap();
        let (args, _) = build_arguments(&s, &set(&[a("p")]), &BTreeSet::new()).unwrap();
        // ¬p is the only relevant conclusion and {p} does not entail it.
        assert!(args.is_empty());
        let top = Setting::named(DeducibilityCore::cl_top(), AttackRule::DiCoDef).unwrap();
        let (args, _) =
            build_arguments(&top, &set(&[a("p"), a("p").negated()]), &set(&[a("p")])).unwrap();
        let keys: BTreeSet<(BTreeSet<Formula>, Formula)> = args.iter().map(Argument::key).collect();
        let want: BTreeSet<(BTreeSet<Formula>, Formula)> = [
            (set(&[a("p")]), a("p")),
            (set(&[a("p").negated()]), a("p").negated()),
            // canonical attacker of the point ¬p
            (set(&[a("p")]), a("p").negated().negated()),
        ]
        .into_iter()
        .collect();
        assert_eq!(keys, want);
    }

    #[test]
    fn tautology_from_empty_support() {
        let s = Setting::named(DeducibilityCore::cl(), AttackRule::DiCoDef).unwrap();
        let (args, _) = build_arguments(&s, &BTreeSet::new(), &set(&[Formula::Top])).unwrap();
        assert_eq!(args.len(), 1);
        assert!(args[0].support.is_empty());
    }

    #[test]
    fn direct_rebuttal_edge() {
        let s = Setting::named(DeducibilityCore::cl(), AttackRule::DiCoDef).unwrap();
        let np = a("p").negated();
        let g = build_graph(&s, &set(&[a("p"), np.clone()]), &set(&[a("p")])).unwrap();
        let att = g.find(&set(std::slice::from_ref(&np)), &np).unwrap();
        let tgt = g.find(&set(&[a("p")]), &a("p")).unwrap();
        assert!(g.attacks(att, tgt));
        for (_, t) in &g.edges {
            assert!(!g.arguments[*t].support.is_empty());
        }
    }

    #[test]
    fn makinson_graph_edges() {
        let n0 = Rule::defeasible("n0", vec![Formula::Top], a("p"), None);
        let n1 = Rule::defeasible(
            "n1",
            vec![Formula::or(a("p"), a("q"))],
            a("p").negated(),
            None,
        );
        let rules = AspicRules::new(Vec::new(), vec![n0, n1], Vec::new(), AspicMode::Ddagger);
        let premises = rules.premise_set();
        let core = DeducibilityCore::aspic(rules);
        let s = Setting::native(core, ContrarinessSpec::NegCanonical, AttackPointSpec::Id);
        let pq = Formula::or(a("p"), a("q"));
        let g = build_graph(&s, &premises, &set(&[a("p"), pq.clone()])).unwrap();
        let a0 = g
            .arguments
            .iter()
            .find(|x| x.conclusion == a("p") && x.support.len() == 3)
            .unwrap();
        let aa = g
            .arguments
            .iter()
            .find(|x| x.conclusion == pq && x.support == a0.support)
            .unwrap();
        let b = g
            .arguments
            .iter()
            .find(|x| x.conclusion == a("p").negated() && x.support.len() == 6)
            .unwrap();
        assert!(g.attacks(b.id, a0.id));
        assert!(g.attacks(b.id, aa.id));
        assert!(g.attacks(b.id, b.id));
        assert!(g.attacks(a0.id, b.id));
    }

    #[test]
    fn build_is_deterministic() {
        let s = Setting::named(DeducibilityCore::cl(), AttackRule::Def).unwrap();
        let prem = set(&[a("p"), a("q"), a("p").negated()]);
        let g1 = build_graph(&s, &prem, &set(&[a("q")])).unwrap();
        let g2 = build_graph(&s, &prem, &set(&[a("q")])).unwrap();
        assert_eq!(g1.arguments, g2.arguments);
        assert_eq!(g1.edges, g2.edges);
    }
}
