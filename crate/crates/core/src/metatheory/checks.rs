//! Instance-level checks of the postulates and the mcs characterizations.

use std::collections::BTreeSet;

use crate::arguments::{build_graph, render_support, AttackGraph, Setting};
use crate::error::{Error, Result};
use crate::formula::{atoms_of, disjoint, Formula};
use crate::semantics::{extensions, Backend, Semantics};

use super::generator::KbGenerator;
use super::mcs::mcs;
use super::{Counterexample, PropertyReport};

type Key = (BTreeSet<Formula>, Formula);

pub(super) fn describe(setting: &Setting) -> String {
    format!(
        "core={} attack={}",
        setting.core.name(),
        setting.attack_rule.name()
    )
}

fn render(s: &BTreeSet<Formula>) -> Vec<String> {
    render_support(s)
}

fn render_key(k: &Key) -> String {
    format!("({{{}}}, {})", render(&k.0).join(", "), k.1)
}

fn render_family(f: &BTreeSet<BTreeSet<Key>>) -> String {
    let parts: Vec<String> = f
        .iter()
        .map(|e| {
            format!(
                "[{}]",
                e.iter().map(render_key).collect::<Vec<_>>().join(", ")
            )
        })
        .collect();
    format!("{{{}}}", parts.join(", "))
}

fn families(graph: &AttackGraph, sem: Semantics) -> Result<Vec<BTreeSet<usize>>> {
    Ok(extensions(&graph.relation(), sem, Backend::Auto)?
        .into_iter()
        .map(|e| e.members)
        .collect())
}

fn keyed(graph: &AttackGraph, ids: &BTreeSet<usize>) -> BTreeSet<Key> {
    ids.iter().map(|&i| graph.arguments[i].key()).collect()
}

/// The queries skeptically entailed on an already built graph.
fn entailed_on(
    graph: &AttackGraph,
    queries: &BTreeSet<Formula>,
    sem: Semantics,
) -> Result<BTreeSet<Formula>> {
    let exts = families(graph, sem)?;
    Ok(queries
        .iter()
        .filter(|q| {
            exts.iter()
                .all(|e| e.iter().any(|&i| graph.arguments[i].conclusion == **q))
        })
        .cloned()
        .collect())
}

/// The members of `queries` with `premises ⊨_sem φ`.
pub fn consequences(
    setting: &Setting,
    premises: &BTreeSet<Formula>,
    queries: &BTreeSet<Formula>,
    sem: Semantics,
) -> Result<BTreeSet<Formula>> {
    let graph = build_graph(setting, premises, queries)?;
    entailed_on(&graph, queries, sem)
}

/// Greedily drops premises while `still_fails` keeps holding.
pub fn minimize_premises(
    premises: &BTreeSet<Formula>,
    mut still_fails: impl FnMut(&BTreeSet<Formula>) -> Result<bool>,
) -> Result<BTreeSet<Formula>> {
    let mut current = premises.clone();
    loop {
        let mut shrunk = false;
        for p in current.clone() {
            let mut smaller = current.clone();
            smaller.remove(&p);
            if still_fails(&smaller)? {
                current = smaller;
                shrunk = true;
                break;
            }
        }
        if !shrunk {
            return Ok(current);
        }
    }
}

/// `S₁ ⊨ φ iff S₁ ∪ S₂ ⊨ φ` for every query, where `S₂` shares no atoms
/// with `S₁` or the queries.
pub fn check_non_interference(
    setting: &Setting,
    s1: &BTreeSet<Formula>,
    s2: &BTreeSet<Formula>,
    sems: &[Semantics],
    queries: &BTreeSet<Formula>,
) -> Result<PropertyReport> {
    if !disjoint(s1.iter().chain(queries), s2) {
        return Err(Error::Precondition(
            "the added premises share atoms with the base premises or the queries".into(),
        ));
    }
    let union: BTreeSet<Formula> = s1.union(s2).cloned().collect();
    let report = PropertyReport::new("non-interference").bound("queries", queries.len());
    let small = build_graph(setting, s1, queries)?;
    let big = build_graph(setting, &union, queries)?;
    for &sem in sems {
        let before = entailed_on(&small, queries, sem)?;
        let after = entailed_on(&big, queries, sem)?;
        if let Some(q) = queries
            .iter()
            .find(|q| before.contains(*q) != after.contains(*q))
        {
            let mut r = report;
            r.trials = 1;
            return Ok(r.fail(Counterexample {
                setting: describe(setting),
                premise_sets: vec![render(s1), render(s2)],
                formula: Some(q.to_string()),
                semantics: Some(sem.name().into()),
                expected: format!("entailed: {}", before.contains(q)),
                actual: format!("entailed after the addition: {}", after.contains(q)),
            }));
        }
    }
    let mut r = report;
    r.trials = 1;
    Ok(r)
}

/// Looks for a disjoint addition that changes the consequences of
/// `candidate`. Finding one shows the candidate is not contaminating; the
/// property quantifies over all additions, so exhausting the trials only
/// gives an inconclusive verdict.
pub fn check_crash_resistance(
    setting: &Setting,
    candidate: &BTreeSet<Formula>,
    fresh_atoms: &[String],
    sem: Semantics,
    trials: usize,
    gen: &mut KbGenerator,
) -> Result<PropertyReport> {
    check_crash_resistance_on(setting, candidate, fresh_atoms, None, sem, trials, gen)
}

/// As [`check_crash_resistance`], comparing only the formulas in `watched`
/// when given. The default pool is every literal over the candidate's and
/// the fresh atoms plus the addition itself.
pub fn check_crash_resistance_on(
    setting: &Setting,
    candidate: &BTreeSet<Formula>,
    fresh_atoms: &[String],
    watched: Option<&BTreeSet<Formula>>,
    sem: Semantics,
    trials: usize,
    gen: &mut KbGenerator,
) -> Result<PropertyReport> {
    let used = atoms_of(candidate);
    if fresh_atoms.is_empty() || fresh_atoms.iter().any(|a| used.contains(a)) {
        return Err(Error::Precondition(
            "fresh atoms must be non-empty and unused by the candidate".into(),
        ));
    }
    let mut report = PropertyReport::new("crash-resistance").bound("trials", trials);
    report.seed = Some(gen.seed);
    for t in 0..trials {
        let addition = gen.premise_set_over(fresh_atoms, 1..=2);
        let queries = match watched {
            Some(w) => w.clone(),
            None => {
                let mut queries: BTreeSet<Formula> = BTreeSet::new();
                for a in fresh_atoms.iter().chain(used.iter()) {
                    queries.insert(Formula::atom(a));
                    queries.insert(Formula::not(Formula::atom(a)));
                }
                queries.extend(addition.iter().cloned());
                queries
            }
        };
        let union: BTreeSet<Formula> = candidate.union(&addition).cloned().collect();
        let before = consequences(setting, candidate, &queries, sem)?;
        let after = consequences(setting, &union, &queries, sem)?;
        report.trials = t + 1;
        if let Some(q) = queries
            .iter()
            .find(|q| before.contains(*q) != after.contains(*q))
        {
            report.note = Some(format!(
                "candidate {{{}}} is not contaminating: adding {{{}}} changes the status of {q}",
                render(candidate).join(", "),
                render(&addition).join(", ")
            ));
            return Ok(report);
        }
    }
    Ok(report.inconclusive(
        "no disjoint addition changed the consequences; the candidate may be contaminating",
    ))
}

/// `S ⊨^{+φ} ψ iff S ⊨ ψ` for each `ψ`, given `S ⊨ φ`.
pub fn check_cumulativity(
    setting: &Setting,
    premises: &BTreeSet<Formula>,
    phi: &Formula,
    psis: &BTreeSet<Formula>,
    sem: Semantics,
) -> Result<PropertyReport> {
    let mut report = PropertyReport::new("cumulativity");
    report.trials = 1;
    let mut queries = psis.clone();
    queries.insert(phi.clone());
    let before = consequences(setting, premises, &queries, sem)?;
    if !before.contains(phi) {
        return Ok(report.inconclusive(format!("{phi} is not entailed")));
    }
    let after = consequences(&setting.extend_with_axiom(phi), premises, &queries, sem)?;
    if let Some(q) = psis
        .iter()
        .find(|q| before.contains(*q) != after.contains(*q))
    {
        return Ok(report.fail(Counterexample {
            setting: describe(setting),
            premise_sets: vec![render(premises)],
            formula: Some(format!("{q} with axiom {phi}")),
            semantics: Some(sem.name().into()),
            expected: format!("entailed: {}", before.contains(q)),
            actual: format!("entailed under the axiom: {}", after.contains(q)),
        }));
    }
    Ok(report)
}

/// `Sem(AF(S)) = {E ∩ Arg(S) | E ∈ Sem(AF^{+φ}(S))}`, arguments matched by
/// support and conclusion.
pub fn check_extensional_cumulativity(
    setting: &Setting,
    premises: &BTreeSet<Formula>,
    phi: &Formula,
    queries: &BTreeSet<Formula>,
    sem: Semantics,
) -> Result<PropertyReport> {
    let mut report = PropertyReport::new("ext-cumulativity");
    report.trials = 1;
    let mut queries = queries.clone();
    queries.insert(phi.clone());
    let base = build_graph(setting, premises, &queries)?;
    if !entailed_on(&base, &queries, sem)?.contains(phi) {
        return Ok(report.inconclusive(format!("{phi} is not entailed")));
    }
    let plus = build_graph(&setting.extend_with_axiom(phi), premises, &queries)?;
    let base_keys: BTreeSet<Key> = base.arguments.iter().map(|a| a.key()).collect();
    let want: BTreeSet<BTreeSet<Key>> = families(&base, sem)?
        .iter()
        .map(|e| keyed(&base, e))
        .collect();
    let got: BTreeSet<BTreeSet<Key>> = families(&plus, sem)?
        .iter()
        .map(|e| keyed(&plus, e).intersection(&base_keys).cloned().collect())
        .collect();
    if want != got {
        return Ok(report.fail(Counterexample {
            setting: describe(setting),
            premise_sets: vec![render(premises)],
            formula: Some(phi.to_string()),
            semantics: Some(sem.name().into()),
            expected: render_family(&want),
            actual: render_family(&got),
        }));
    }
    Ok(report)
}

/// The four grounded claims for `S ⊨_Grd φ`: a grounded argument for `φ`
/// exists, grounded grows under `+φ`, shrinks back on restriction, and new
/// grounded arguments `(Γ, γ)` have `(Γ ∪ Φ, γ)` grounded before.
pub fn check_grounded_items(
    setting: &Setting,
    premises: &BTreeSet<Formula>,
    phi: &Formula,
    queries: &BTreeSet<Formula>,
) -> Result<PropertyReport> {
    let mut report = PropertyReport::new("grounded-items");
    report.trials = 1;
    let mut queries = queries.clone();
    queries.insert(phi.clone());
    let base = build_graph(setting, premises, &queries)?;
    let plus = build_graph(&setting.extend_with_axiom(phi), premises, &queries)?;
    let grd = keyed(&base, &families(&base, Semantics::Grd)?[0]);
    let grd_plus = keyed(&plus, &families(&plus, Semantics::Grd)?[0]);
    let base_keys: BTreeSet<Key> = base.arguments.iter().map(|a| a.key()).collect();
    let fail = |expected: String, actual: String| Counterexample {
        setting: describe(setting),
        premise_sets: vec![render(premises)],
        formula: Some(phi.to_string()),
        semantics: Some("grd".into()),
        expected,
        actual,
    };
    let Some(witness) = grd.iter().find(|(_, c)| c == phi).map(|(s, _)| s.clone()) else {
        return Ok(report.inconclusive(format!("{phi} is not entailed")));
    };
    if let Some(k) = grd.iter().find(|k| !grd_plus.contains(*k)) {
        return Ok(report.fail(fail(
            "Grd(AF(S)) ⊆ Grd(AF+φ(S))".into(),
            format!("{} is grounded only without the axiom", render_key(k)),
        )));
    }
    let restricted: BTreeSet<Key> = grd_plus.intersection(&base_keys).cloned().collect();
    if restricted != grd {
        return Ok(report.fail(fail(
            "Grd(AF+φ(S)) ∩ Arg(S) = Grd(AF(S))".into(),
            format!(
                "differ in {}",
                restricted
                    .symmetric_difference(&grd)
                    .map(render_key)
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
        )));
    }
    for (support, conclusion) in grd_plus.difference(&base_keys) {
        let widened: BTreeSet<Formula> = support.union(&witness).cloned().collect();
        let k = (widened, conclusion.clone());
        if !grd.contains(&k) {
            return Ok(report.fail(fail(
                format!("{} grounded", render_key(&k)),
                format!(
                    "new grounded {} has no grounded widening by {{{}}}",
                    render_key(&(support.clone(), conclusion.clone())),
                    render(&witness).join(", ")
                ),
            )));
        }
    }
    Ok(report)
}

fn con_graph(setting: &Setting, premises: &BTreeSet<Formula>) -> Result<(Setting, AttackGraph)> {
    let con = setting.consistent();
    // Premise queries give every consistent premise an argument of its own.
    let graph = build_graph(&con, premises, premises)?;
    Ok((con, graph))
}

/// `Stb(AF_con(S)) = Prf(AF_con(S))`.
pub fn check_stb_eq_prf_con(
    setting: &Setting,
    premises: &BTreeSet<Formula>,
) -> Result<PropertyReport> {
    let mut report = PropertyReport::new("stb-eq-prf");
    report.trials = 1;
    let (con, graph) = con_graph(setting, premises)?;
    let stb: BTreeSet<BTreeSet<Key>> = families(&graph, Semantics::Stb)?
        .iter()
        .map(|e| keyed(&graph, e))
        .collect();
    let prf: BTreeSet<BTreeSet<Key>> = families(&graph, Semantics::Prf)?
        .iter()
        .map(|e| keyed(&graph, e))
        .collect();
    if stb != prf {
        return Ok(report.fail(Counterexample {
            setting: describe(&con),
            premise_sets: vec![render(premises)],
            formula: None,
            semantics: Some("stb/prf".into()),
            expected: render_family(&prf),
            actual: render_family(&stb),
        }));
    }
    Ok(report)
}

fn generated_within(graph: &AttackGraph, theta: &BTreeSet<Formula>) -> BTreeSet<usize> {
    graph
        .arguments
        .iter()
        .filter(|a| a.support.is_subset(theta))
        .map(|a| a.id)
        .collect()
}

/// `Grd(AF_con(S)) = Arg(⋂ MCS(AF(S)))`.
pub fn check_grd_eq_mcs(setting: &Setting, premises: &BTreeSet<Formula>) -> Result<PropertyReport> {
    let mut report = PropertyReport::new("grd-eq-mcs");
    report.trials = 1;
    let (con, graph) = con_graph(setting, premises)?;
    let sets = mcs(setting, premises)?;
    let mut meet = sets[0].clone();
    for s in &sets[1..] {
        meet = meet.intersection(s).cloned().collect();
    }
    let grd = families(&graph, Semantics::Grd)?.remove(0);
    let want = generated_within(&graph, &meet);
    if grd != want {
        return Ok(report.fail(Counterexample {
            setting: describe(&con),
            premise_sets: vec![render(premises), render(&meet)],
            formula: None,
            semantics: Some("grd".into()),
            expected: format!(
                "{:?}",
                keyed(&graph, &want)
                    .iter()
                    .map(render_key)
                    .collect::<Vec<_>>()
            ),
            actual: format!(
                "{:?}",
                keyed(&graph, &grd)
                    .iter()
                    .map(render_key)
                    .collect::<Vec<_>>()
            ),
        }));
    }
    Ok(report)
}

/// For each `Θ ∈ MCS`, the arguments supported within `Θ` form a stable
/// extension of `AF_con(S)`.
pub fn check_mcs_stable(setting: &Setting, premises: &BTreeSet<Formula>) -> Result<PropertyReport> {
    let mut report = PropertyReport::new("mcs-stable");
    report.trials = 1;
    let (con, graph) = con_graph(setting, premises)?;
    let rel = graph.relation();
    for theta in mcs(setting, premises)? {
        let e = generated_within(&graph, &theta);
        if !crate::semantics::stable(&rel, &e) {
            return Ok(report.fail(Counterexample {
                setting: describe(&con),
                premise_sets: vec![render(premises), render(&theta)],
                formula: None,
                semantics: Some("stb".into()),
                expected: "Arg(Θ) stable".into(),
                actual: "not stable".into(),
            }));
        }
    }
    Ok(report)
}

/// For each preferred extension of `AF_con(S)`, the union of its supports
/// is a maximal consistent subset.
pub fn check_mcs_preferred(
    setting: &Setting,
    premises: &BTreeSet<Formula>,
) -> Result<PropertyReport> {
    let mut report = PropertyReport::new("mcs-preferred");
    report.trials = 1;
    let (con, graph) = con_graph(setting, premises)?;
    let sets: BTreeSet<BTreeSet<Formula>> = mcs(setting, premises)?.into_iter().collect();
    for e in families(&graph, Semantics::Prf)? {
        let union: BTreeSet<Formula> = e
            .iter()
            .flat_map(|&i| graph.arguments[i].support.iter().cloned())
            .collect();
        if !sets.contains(&union) {
            return Ok(report.fail(Counterexample {
                setting: describe(&con),
                premise_sets: vec![render(premises), render(&union)],
                formula: None,
                semantics: Some("prf".into()),
                expected: format!(
                    "one of {}",
                    sets.iter()
                        .map(|s| format!("{{{}}}", render(s).join(", ")))
                        .collect::<Vec<_>>()
                        .join(" ")
                ),
                actual: format!("{{{}}}", render(&union).join(", ")),
            }));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contrariness::{AttackPointSpec, AttackRule, ContrarinessSpec};
    use crate::deduction::DeducibilityCore;
    use crate::kb::{load, parse_formula};
    use crate::metatheory::Verdict;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn set(xs: &[&str]) -> BTreeSet<Formula> {
        xs.iter().map(|s| f(s)).collect()
    }

    fn neg_id() -> Setting {
        Setting::native(
            DeducibilityCore::cl(),
            ContrarinessSpec::Neg,
            AttackPointSpec::Id,
        )
    }

    #[test]
    fn non_interference_examples() {
        let top = Setting::named(DeducibilityCore::cl_top(), AttackRule::DiDef).unwrap();
        let sems = [Semantics::Grd, Semantics::Prf];
        let r = check_non_interference(&top, &set(&["p"]), &set(&["q & ~q"]), &sems, &set(&["p"]))
            .unwrap();
        assert!(r.passed());
        let r = check_non_interference(&top, &set(&["p"]), &BTreeSet::new(), &sems, &set(&["p"]))
            .unwrap();
        assert!(r.passed());
        // Two jointly inconsistent premises interfere under plain CL.
        let didef = Setting::named(DeducibilityCore::cl(), AttackRule::DiDef).unwrap();
        let r = check_non_interference(
            &didef,
            &set(&["p"]),
            &set(&["q", "~q"]),
            &sems,
            &set(&["p"]),
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert!(
            check_non_interference(&top, &set(&["p"]), &set(&["p"]), &sems, &set(&["p"])).is_err()
        );
    }

    #[test]
    fn makinson_cumulativity_fails() {
        let kb = load(
            "atoms p q\ndefeasible n0: top => p\ndefeasible n1: p | q => ~p\nsetting core=aspic mode=ddagger",
        )
        .unwrap();
        let r = check_cumulativity(
            &kb.setting,
            &kb.premises,
            &f("p | q"),
            &set(&["p"]),
            Semantics::Prf,
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        let r = check_cumulativity(
            &kb.setting,
            &kb.premises,
            &f("q"),
            &set(&["p"]),
            Semantics::Prf,
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn axiom_already_a_premise() {
        let s = Setting::named(DeducibilityCore::cl(), AttackRule::DiCoDef).unwrap();
        let r = check_extensional_cumulativity(
            &s,
            &set(&["p", "q"]),
            &f("p"),
            &set(&["q"]),
            Semantics::Prf,
        )
        .unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn mcs_characterizations_on_small_cases() {
        for s in [set(&["p", "~p", "q"]), set(&["p", "q"]), set(&["p", "~p"])] {
            assert!(check_stb_eq_prf_con(&neg_id(), &s).unwrap().passed());
            assert!(check_grd_eq_mcs(&neg_id(), &s).unwrap().passed());
            assert!(check_mcs_stable(&neg_id(), &s).unwrap().passed());
            assert!(check_mcs_preferred(&neg_id(), &s).unwrap().passed());
        }
    }

    #[test]
    fn grounded_of_contradiction_is_support_free() {
        let (_, graph) = con_graph(&neg_id(), &set(&["p", "~p"])).unwrap();
        let grd = families(&graph, Semantics::Grd).unwrap().remove(0);
        assert!(grd.iter().all(|&i| graph.arguments[i].support.is_empty()));
    }

    #[test]
    fn minimization_is_greedy() {
        let s = set(&["p", "q", "r"]);
        let m = minimize_premises(&s, |x| Ok(x.contains(&f("q")))).unwrap();
        assert_eq!(m, set(&["q"]));
    }

    #[test]
    fn crash_probe_refutes_empty_candidate() {
        let top = Setting::named(DeducibilityCore::cl_top(), AttackRule::DiDef).unwrap();
        let mut g = KbGenerator::new(5);
        let fresh = vec!["q".to_string()];
        let r = check_crash_resistance(&top, &BTreeSet::new(), &fresh, Semantics::Grd, 10, &mut g)
            .unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn crash_probe_on_a_contradiction() {
        let fresh = vec!["q".to_string(), "r".to_string()];
        let top = Setting::named(DeducibilityCore::cl_top(), AttackRule::DiDef).unwrap();
        let r = check_crash_resistance(
            &top,
            &set(&["p", "~p"]),
            &fresh,
            Semantics::Grd,
            20,
            &mut KbGenerator::new(9),
        )
        .unwrap();
        assert!(r.passed(), "{r}");
        assert!(r.note.unwrap().contains("not contaminating"));
        // Under CL/Def the tautology ¬(p ∧ ¬p) defeats everything built on
        // both premises, so the addition's own formulas become entailed.
        let def = Setting::named(DeducibilityCore::cl(), AttackRule::Def).unwrap();
        let c = set(&["p", "~p"]);
        let r = check_crash_resistance(
            &def,
            &c,
            &fresh,
            Semantics::Grd,
            20,
            &mut KbGenerator::new(9),
        )
        .unwrap();
        assert!(r.passed() && r.note.is_some(), "{r}");
        // Negations of fresh atoms the additions never mention stay out.
        let negated = set(&["~s", "~t"]);
        let r = check_crash_resistance_on(
            &def,
            &c,
            &fresh,
            Some(&negated),
            Semantics::Grd,
            20,
            &mut KbGenerator::new(9),
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive, "{r}");
        assert_eq!(r.trials, 20);
    }
}
