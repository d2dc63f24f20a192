//! Validation of a parsed document and construction of its setting.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::arguments::{build_graph, AttackGraph, Setting};
use crate::contrariness::{AttackPointSpec, AttackRule, ContrarinessSpec};
use crate::deduction::{AbaRules, AspicMode, AspicRules, DeducibilityCore};
use crate::error::{Error, Result};
use crate::formula::{atoms_of, Formula, Rule};
use crate::priorities::{
    build_prioritized_graph, entails_with_bound, Lifting, PriorityAssignment, PriorityOptions,
};
use crate::semantics::{entails_on_graph, Entailment, Semantics};

use super::{parse_kb, KnowledgeBaseDoc, Pos};

/// A validated knowledge base: one setting and its premise set.
#[derive(Clone, Debug)]
pub struct KnowledgeBase {
    pub setting: Setting,
    pub premises: BTreeSet<Formula>,
    pub priorities: Option<(PriorityAssignment, PriorityOptions)>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum CoreName {
    Cl,
    ClTop,
    ClCon,
    McsCap,
    McsCup,
    Aba,
    Aspic,
}

fn invalid(pos: Pos, message: impl Into<String>) -> Error {
    Error::Validation {
        line: pos.line,
        column: pos.column,
        message: message.into(),
    }
}

fn walk(f: &Formula, atoms: &mut Vec<String>, names: &mut Vec<String>) {
    match f {
        Formula::Top | Formula::Bottom => {}
        Formula::Atom(a) => atoms.push(a.to_string()),
        Formula::RuleName(id) => names.push(id.to_string()),
        Formula::Not(a) | Formula::Labeled(a, _) => walk(a, atoms, names),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            walk(a, atoms, names);
            walk(b, atoms, names);
        }
        Formula::RuleLit(r) => {
            for x in r.body.iter().chain([&r.head]) {
                walk(x, atoms, names);
            }
        }
        Formula::OPlus(items) => {
            for x in items.iter() {
                walk(x, atoms, names);
            }
        }
    }
}

struct Options {
    map: HashMap<String, (String, Pos)>,
}

impl Options {
    fn new(doc: &KnowledgeBaseDoc) -> Result<Options> {
        const KEYS: [&str; 10] = [
            "core", "attack", "mode", "lifting", "restrict", "depth", "arity", "defeat", "default",
            "order",
        ];
        let mut map = HashMap::new();
        for e in doc.setting.iter().flatten() {
            if !KEYS.contains(&e.key.as_str()) {
                return Err(invalid(e.pos, format!("unknown setting key `{}`", e.key)));
            }
            if map
                .insert(e.key.clone(), (e.value.clone(), e.pos))
                .is_some()
            {
                return Err(invalid(e.pos, format!("setting `{}` given twice", e.key)));
            }
        }
        Ok(Options { map })
    }

    fn get(&self, key: &str) -> Option<(&str, Pos)> {
        self.map.get(key).map(|(v, p)| (v.as_str(), *p))
    }

    fn pick<T>(&self, key: &str, default: T, parse: impl Fn(&str) -> Option<T>) -> Result<T> {
        match self.get(key) {
            None => Ok(default),
            Some((v, pos)) => {
                parse(v).ok_or_else(|| invalid(pos, format!("bad value `{v}` for `{key}`")))
            }
        }
    }
}

/// Parses and validates a document in one step.
pub fn load(text: &str) -> Result<KnowledgeBase> {
    compile(&parse_kb(text)?)
}

pub fn compile(doc: &KnowledgeBaseDoc) -> Result<KnowledgeBase> {
    let opts = Options::new(doc)?;
    let mut warnings = Vec::new();

    let core_name = opts.pick("core", CoreName::Cl, |v| {
        Some(match v {
            "cl" => CoreName::Cl,
            "cl-top" => CoreName::ClTop,
            "cl-con" => CoreName::ClCon,
            "mcs-cap" => CoreName::McsCap,
            "mcs-cup" => CoreName::McsCup,
            "aba" => CoreName::Aba,
            "aspic" => CoreName::Aspic,
            _ => return None,
        })
    })?;
    let rule_based = matches!(core_name, CoreName::Aba | CoreName::Aspic);
    let attack = opts.pick(
        "attack",
        if rule_based {
            AttackRule::Native
        } else {
            AttackRule::DiDef
        },
        AttackRule::parse,
    )?;
    if rule_based && attack != AttackRule::Native {
        let (_, pos) = opts.get("attack").expect("non-default value was given");
        return Err(invalid(
            pos,
            "named attack forms need a classical core; use attack=native",
        ));
    }
    let mode = opts.pick("mode", AspicMode::Dagger, |v| match v {
        "dagger" => Some(AspicMode::Dagger),
        "ddagger" => Some(AspicMode::Ddagger),
        _ => None,
    })?;
    let lifting = opts.pick("lifting", None, |v| match v {
        "none" => Some(None),
        other => Lifting::parse(other).map(Some),
    })?;
    let nat = |v: &str| v.parse::<usize>().ok();

    // Declarations.
    let declared: BTreeSet<&str> = doc.atoms.iter().map(|(a, _)| a.as_str()).collect();
    let mut rule_ids: BTreeSet<String> = BTreeSet::new();
    for d in doc.strict.iter().chain(&doc.defeasible) {
        if !rule_ids.insert(d.rule.id.to_string()) {
            return Err(invalid(d.pos, format!("duplicate rule id `{}`", d.rule.id)));
        }
    }
    let defeasible_ids: BTreeSet<&str> = doc.defeasible.iter().map(|d| &*d.rule.id).collect();
    let check = |f: &Formula, pos: Pos| -> Result<()> {
        let (mut atoms, mut names) = (Vec::new(), Vec::new());
        walk(f, &mut atoms, &mut names);
        if let Some(a) = atoms.iter().find(|a| !declared.contains(a.as_str())) {
            return Err(invalid(pos, format!("undeclared atom `{a}`")));
        }
        if let Some(n) = names.iter().find(|n| !defeasible_ids.contains(n.as_str())) {
            return Err(invalid(pos, format!("`n({n})` names no defeasible rule")));
        }
        Ok(())
    };
    for p in doc.premises.iter().chain(&doc.assumptions) {
        check(&p.formula, p.pos)?;
    }
    for c in &doc.contraries {
        check(&c.of, c.pos)?;
        check(&c.contrary, c.pos)?;
    }
    for d in doc.strict.iter().chain(&doc.defeasible) {
        for f in d.rule.body.iter().chain([&d.rule.head]) {
            check(f, d.pos)?;
        }
    }

    // Which declarations each core accepts.
    let assumptions: BTreeSet<Formula> =
        doc.assumptions.iter().map(|a| a.formula.clone()).collect();
    if core_name != CoreName::Aba {
        if let Some(a) = doc.assumptions.first() {
            return Err(invalid(a.pos, "assumptions need core=aba"));
        }
    } else if let Some(p) = doc.premises.first() {
        return Err(invalid(p.pos, "core=aba takes assumptions, not premises"));
    }
    if core_name != CoreName::Aspic {
        if let Some(d) = doc.defeasible.first() {
            return Err(invalid(d.pos, "defeasible rules need core=aspic"));
        }
    }
    if !rule_based {
        if let Some(d) = doc.strict.first() {
            return Err(invalid(d.pos, "strict rules need core=aba or core=aspic"));
        }
        if attack != AttackRule::Native {
            if let Some(c) = doc.contraries.first() {
                return Err(invalid(c.pos, "contrary declarations need attack=native"));
            }
        }
    }
    if core_name == CoreName::Aba {
        for d in &doc.strict {
            if assumptions.contains(&d.rule.head) {
                return Err(invalid(
                    d.pos,
                    format!("rule head `{}` is an assumption", d.rule.head),
                ));
            }
        }
        for c in &doc.contraries {
            if !assumptions.contains(&c.of) {
                return Err(invalid(c.pos, format!("`{}` is not an assumption", c.of)));
            }
        }
    }

    let mut explicit: BTreeMap<Formula, BTreeSet<Formula>> = BTreeMap::new();
    for c in &doc.contraries {
        explicit
            .entry(c.of.clone())
            .or_default()
            .insert(c.contrary.clone());
    }
    let with_explicit = |base: ContrarinessSpec| {
        if explicit.is_empty() {
            base
        } else {
            ContrarinessSpec::Union(
                Box::new(base),
                Box::new(ContrarinessSpec::ExplicitMap(explicit.clone())),
            )
        }
    };

    let strict: Vec<Rule> = doc.strict.iter().map(|d| d.rule.clone()).collect();
    let (core, contrariness, points, premises) = match core_name {
        CoreName::Aba => {
            let rules = AbaRules::new(strict.clone(), mode == AspicMode::Dagger);
            let mut premises = assumptions.clone();
            if rules.tracked {
                premises.extend(strict.iter().map(|r| r.clone().literal()));
            }
            let c = ContrarinessSpec::ExplicitMap(explicit.clone());
            (
                DeducibilityCore::aba(rules),
                c,
                AttackPointSpec::Id,
                premises,
            )
        }
        CoreName::Aspic => {
            let facts: Vec<Formula> = doc.premises.iter().map(|p| p.formula.clone()).collect();
            let defeasible: Vec<Rule> = doc.defeasible.iter().map(|d| d.rule.clone()).collect();
            let mut rules = AspicRules::new(strict, defeasible, facts, mode);
            let arity = opts.pick("arity", rules.max_arity, nat)?;
            let depth = opts.pick("depth", rules.depth, nat)?;
            rules = rules.with_limits(arity, depth);
            let premises = rules.premise_set();
            let c = with_explicit(ContrarinessSpec::NegCanonical);
            (
                DeducibilityCore::aspic(rules),
                c,
                AttackPointSpec::Id,
                premises,
            )
        }
        cl => {
            let core = match cl {
                CoreName::ClTop => DeducibilityCore::cl_top(),
                CoreName::McsCap => DeducibilityCore::mcs_cap(),
                CoreName::McsCup => DeducibilityCore::mcs_cup(),
                _ => DeducibilityCore::cl(),
            };
            let premises = doc.premises.iter().map(|p| p.formula.clone()).collect();
            let (c, p) = attack
                .expand()
                .unwrap_or_else(|| (with_explicit(ContrarinessSpec::Neg), AttackPointSpec::Id));
            (core, c, p, premises)
        }
    };
    for key in ["arity", "depth"] {
        if let (Some((_, pos)), false) = (opts.get(key), core_name == CoreName::Aspic) {
            return Err(invalid(pos, format!("`{key}` applies to core=aspic only")));
        }
    }

    let mut setting = if attack == AttackRule::Native {
        Setting::native(core, contrariness, points)
    } else {
        Setting::named(core, attack)?
    };
    if core_name == CoreName::ClCon {
        setting = setting.consistent();
    }
    match opts.get("restrict") {
        None | Some(("none", _)) => {}
        Some(("cl-consistent", _)) => {
            setting = setting.with_core(setting.core.restrict_cl_consistent());
        }
        Some(("af-consistent", _)) => setting = setting.consistent(),
        Some(("empty-attackers", _)) => {
            let core = setting
                .core
                .restrict_empty_attackers(setting.contrariness.clone(), setting.attack_points);
            setting = setting.with_core(core);
        }
        Some((v, pos)) => return Err(invalid(pos, format!("bad value `{v}` for `restrict`"))),
    }

    // Priorities.
    let mut pi = PriorityAssignment::default();
    for a in doc.premises.iter().chain(&doc.assumptions) {
        if let Some(v) = a.value {
            pi.pi.insert(a.formula.clone(), v);
        }
    }
    for d in &doc.defeasible {
        if let Some(v) = d.rule.value {
            pi.rule_pi.insert(d.rule.id.to_string(), v);
        }
    }
    pi.default = opts.pick("default", None, |v| v.parse().ok().map(Some))?;
    pi.invert = opts.pick("order", false, |v| match v {
        "weaker-higher" => Some(false),
        "stronger-higher" => Some(true),
        _ => None,
    })?;
    let reverse = opts.pick("defeat", false, |v| match v {
        "d" => Some(false),
        "r" => Some(true),
        _ => None,
    })?;
    let has_values = !pi.pi.is_empty() || !pi.rule_pi.is_empty();
    let priorities = match lifting {
        Some(lifting) => Some((pi, PriorityOptions { lifting, reverse })),
        None => {
            if has_values {
                warnings.push("priority annotations are ignored under lifting=none".to_string());
            }
            None
        }
    };

    Ok(KnowledgeBase {
        setting,
        premises,
        priorities,
        warnings,
    })
}

impl KnowledgeBase {
    /// The same knowledge base under `⊢^{+φ}`.
    pub fn with_axiom(&self, phi: &Formula) -> KnowledgeBase {
        KnowledgeBase {
            setting: self.setting.extend_with_axiom(phi),
            ..self.clone()
        }
    }

    /// Default queries: literals over the declared-or-used atoms, the
    /// classical premises, and the classical bodies and heads of rule
    /// premises.
    pub fn query_pool(&self) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        for a in atoms_of(&self.premises) {
            // Synthetic rule-name atoms are not queried.
            if a.contains('(') {
                continue;
            }
            out.insert(Formula::atom(&a));
            out.insert(Formula::not(Formula::atom(&a)));
        }
        for p in &self.premises {
            match p {
                Formula::RuleLit(r) => out.extend(
                    r.body
                        .iter()
                        .chain([&r.head])
                        .filter(|f| f.is_classical())
                        .cloned(),
                ),
                f if f.is_classical() => {
                    out.insert(f.clone());
                }
                _ => {}
            }
        }
        out.remove(&Formula::Top);
        out
    }

    /// The attack graph (π-defeat graph when a lifting is configured).
    pub fn graph(&self, queries: &BTreeSet<Formula>) -> Result<AttackGraph> {
        match &self.priorities {
            Some((pi, opts)) => {
                build_prioritized_graph(&self.setting, &self.premises, queries, pi, *opts)
            }
            None => build_graph(&self.setting, &self.premises, queries),
        }
    }

    pub fn entails(
        &self,
        phi: &Formula,
        sem: Semantics,
        at_most: Option<u32>,
    ) -> Result<Entailment> {
        let queries: BTreeSet<Formula> = [phi.clone()].into_iter().collect();
        let graph = self.graph(&queries)?;
        match (&self.priorities, at_most) {
            (Some((pi, _)), bound) => entails_with_bound(&graph, pi, phi, sem, bound),
            (None, None) => entails_on_graph(&graph, phi, sem),
            (None, Some(_)) => Err(Error::Config("--at-most needs a lifting".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kb::parse_formula;

    const MAKINSON: &str = "atoms p q\n\
        defeasible n0: top => p\n\
        defeasible n1: p | q => ~p\n\
        setting core=aspic mode=ddagger attack=native\n";

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn makinson_has_two_defeasible_rules() {
        let doc = parse_kb(MAKINSON).unwrap();
        assert_eq!(doc.defeasible.len(), 2);
        let kb = compile(&doc).unwrap();
        assert_eq!(kb.setting.core.name(), "aspic-ddagger");
        assert!(kb.warnings.is_empty());
    }

    #[test]
    fn makinson_preferred_answers() {
        let kb = load(MAKINSON).unwrap();
        assert!(kb.entails(&f("p"), Semantics::Prf, None).unwrap().holds);
        assert!(kb.entails(&f("p | q"), Semantics::Prf, None).unwrap().holds);
        let kb2 = kb.with_axiom(&f("p | q"));
        assert!(!kb2.entails(&f("p"), Semantics::Prf, None).unwrap().holds);
    }

    #[test]
    fn empty_kb_is_valid() {
        let kb = load("").unwrap();
        assert!(kb.premises.is_empty());
        assert_eq!(kb.setting.attack_rule, AttackRule::DiDef);
        assert!(kb.graph(&BTreeSet::new()).unwrap().is_empty());
    }

    fn validation_at(text: &str) -> (usize, usize) {
        match load(text).unwrap_err() {
            Error::Validation { line, column, .. } => (line, column),
            other => panic!("expected a validation error, got {other:?}"),
        }
    }

    #[test]
    fn validation_errors() {
        assert_eq!(validation_at("atoms p\npremise p & r"), (2, 9));
        assert_eq!(
            validation_at("atoms p\nstrict r1: -> p\nstrict r1: p -> p\nsetting core=aba"),
            (3, 8)
        );
        assert_eq!(
            validation_at("atoms a p\nassumption a\nstrict r: p -> a\nsetting core=aba"),
            (3, 8)
        );
        assert_eq!(validation_at("atoms p\ndefeasible d: => p"), (2, 12));
        assert_eq!(
            validation_at("atoms p\nsetting core=aspic attack=def"),
            (2, 20)
        );
        assert_eq!(
            validation_at("atoms p\npremise n(d)\nsetting core=aspic"),
            (2, 9)
        );
        assert_eq!(validation_at("setting core=nope"), (1, 9));
        assert_eq!(validation_at("setting core=cl\nsetting core=aba"), (2, 9));
    }

    #[test]
    fn priorities_without_lifting_warn() {
        let kb = load("atoms p\npremise p [2]").unwrap();
        assert!(kb.priorities.is_none());
        assert_eq!(kb.warnings.len(), 1);
        let kb = load("atoms p\npremise p [2]\nsetting lifting=min").unwrap();
        let (pi, opts) = kb.priorities.unwrap();
        assert_eq!(pi.pi[&f("p")], 2);
        assert_eq!(opts.lifting, Lifting::MinSupport);
    }

    #[test]
    fn aba_premises_follow_the_mode() {
        let text = "atoms a b p\nassumption a\nassumption b\ncontrary a = p\nstrict r: b -> p\nsetting core=aba";
        let tracked = load(text).unwrap();
        assert_eq!(tracked.premises.len(), 3);
        let flat = load(&format!("{text} mode=ddagger")).unwrap();
        assert_eq!(flat.premises.len(), 2);
        let graph = flat.graph(&BTreeSet::new()).unwrap();
        let attacker = graph
            .find(&[f("b")].into_iter().collect(), &f("p"))
            .unwrap();
        let target = graph
            .find(&[f("a")].into_iter().collect(), &f("a"))
            .unwrap();
        assert!(graph.attacks(attacker, target));
    }

    #[test]
    fn consistent_cores() {
        let kb =
            load("atoms p\npremise p\npremise ~p\nsetting core=cl-con attack=dicodef").unwrap();
        assert_eq!(kb.setting.core.name(), "con(cl)");
        let kb = load("atoms p\nsetting core=cl-top restrict=empty-attackers").unwrap();
        assert_eq!(kb.setting.core.name(), "empty-attackers(cl-top)");
    }
}
