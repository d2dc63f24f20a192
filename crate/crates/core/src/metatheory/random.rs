//! Random-instance drivers. Trial `i` of a run with seed `s` draws from a
//! generator seeded with `s + i`, so any single trial replays on its own and
//! reports merge in trial order.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::arguments::Setting;
use crate::contrariness::{AttackPointSpec, AttackRule, ContrarinessSpec};
use crate::deduction::{AbaRules, AspicMode, DeducibilityCore};
use crate::error::{Error, Result};
use crate::formula::{atoms_of, Formula, Rule};
use crate::kb::KnowledgeBase;
use crate::semantics::Semantics;

use super::checks::{consequences, minimize_premises};
use super::{
    check_closure_probe, check_contraposition, check_crash_resistance, check_cumulativity,
    check_cut, check_extensional_cumulativity, check_grd_eq_mcs, check_grounded_items,
    check_mcs_preferred, check_mcs_stable, check_non_interference, check_pointed,
    check_pre_relevance, check_prime, check_stb_eq_prf_con, Bounds, KbGenerator, PropertyReport,
    Verdict,
};

/// Property names accepted by [`run_random`] and [`run_on_kb`].
pub const PROPERTIES: &[&str] = &[
    "non-interference",
    "cumulativity",
    "ext-cumulativity",
    "stb-eq-prf",
    "grd-eq-mcs",
    "pre-relevance",
    "prime",
    "pointed",
    "cut",
    "contraposition",
    "crash-resistance",
    "closure-probe",
    "mcs-stable",
    "mcs-preferred",
];

const GRD_PRF: [Semantics; 2] = [Semantics::Grd, Semantics::Prf];

fn trial_gen(seed: u64, i: usize) -> KbGenerator {
    KbGenerator::new(seed.wrapping_add(i as u64))
}

fn unknown(property: &str) -> Error {
    Error::Config(format!(
        "unknown property `{property}`; expected one of {}",
        PROPERTIES.join(", ")
    ))
}

fn lit_queries<'a>(atoms: impl IntoIterator<Item = &'a String>) -> BTreeSet<Formula> {
    let mut out = BTreeSet::new();
    for a in atoms {
        // Synthetic rule-name atoms are not queried.
        if a.contains('(') {
            continue;
        }
        out.insert(Formula::atom(a));
        out.insert(Formula::not(Formula::atom(a)));
    }
    out
}

/// Runs `trial` for each trial seed and folds the results. The first
/// failure is kept; its trial seed goes in the note.
fn drive(
    property: &str,
    seed: u64,
    trials: usize,
    mut trial: impl FnMut(&mut KbGenerator) -> Result<PropertyReport>,
) -> Result<PropertyReport> {
    let mut report = PropertyReport::new(property).bound("trials", trials);
    report.seed = Some(seed);
    let mut inconclusive = 0;
    for i in 0..trials {
        let mut gen = trial_gen(seed, i);
        let r = trial(&mut gen)?;
        if r.verdict == Verdict::Inconclusive {
            inconclusive += 1;
        }
        let failed_now = r.verdict == Verdict::Fail && report.verdict != Verdict::Fail;
        report.absorb(r);
        if failed_now {
            report.note = Some(format!("trial {i} (seed {}) fails", gen.seed));
        }
    }
    if report.verdict == Verdict::Pass && trials > 0 && inconclusive == trials {
        report = report.inconclusive("no trial met the property's precondition");
    } else if inconclusive > 0 && report.note.is_none() {
        report.note = Some(format!(
            "{inconclusive} of {trials} trials did not meet the precondition"
        ));
    }
    Ok(report)
}

/// Settings covered by the random non-interference driver.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NiFamily {
    ClTopDiDef,
    McsCapDiDef,
    TrackedAba,
    /// Control groups: plain CL with a named attack form.
    Cl(AttackRule),
}

impl NiFamily {
    pub fn name(self) -> String {
        match self {
            NiFamily::ClTopDiDef => "cl-top/didef".into(),
            NiFamily::McsCapDiDef => "mcs-cap/didef".into(),
            NiFamily::TrackedAba => "aba-tracked".into(),
            NiFamily::Cl(rule) => format!("cl/{}", rule.name()),
        }
    }
}

/// Two disjoint pools of at most four atoms each.
fn split_pools(gen: &mut KbGenerator) -> (Vec<String>, Vec<String>) {
    let mut pool: Vec<String> = ["p", "q", "r", "s", "t", "u", "v", "w"]
        .map(String::from)
        .to_vec();
    pool.shuffle(gen.rng());
    let k1 = gen.rng().gen_range(1..=4);
    let k2 = gen.rng().gen_range(1..=4);
    let right = pool[k1..k1 + k2].to_vec();
    pool.truncate(k1);
    (pool, right)
}

fn prefixed(rules: Vec<Rule>, prefix: &str) -> Vec<Rule> {
    rules
        .into_iter()
        .map(|r| Rule::strict(&format!("{prefix}{}", r.id), r.body, r.head))
        .collect()
}

/// One non-interference instance: a setting, disjoint `S₁`, `S₂`, and the
/// literal queries over the atoms of `S₁`.
pub fn non_interference_instance(
    family: NiFamily,
    gen: &mut KbGenerator,
) -> Result<(
    Setting,
    BTreeSet<Formula>,
    BTreeSet<Formula>,
    BTreeSet<Formula>,
)> {
    let (left, right) = split_pools(gen);
    if family == NiFamily::TrackedAba {
        // Rule literals are premises too; keep the union under the premise cap.
        gen.rules = 1..=3;
        let (r1, a1, c1) = gen.aba(&left);
        let (r2, a2, c2) = gen.aba(&right);
        let (r1, r2) = (prefixed(r1, "l"), prefixed(r2, "r"));
        let mut s1 = a1;
        s1.extend(r1.iter().map(|r| r.clone().literal()));
        let mut s2 = a2;
        s2.extend(r2.iter().map(|r| r.clone().literal()));
        let mut contraries: BTreeMap<Formula, BTreeSet<Formula>> = c1;
        contraries.extend(c2);
        let rules = AbaRules::new(r1.into_iter().chain(r2).collect(), true);
        let setting = Setting::native(
            DeducibilityCore::aba(rules),
            ContrarinessSpec::ExplicitMap(contraries),
            AttackPointSpec::Id,
        );
        return Ok((setting, s1, s2, lit_queries(&left)));
    }
    // Plain CL explodes on inconsistent unions; smaller sets keep the control
    // groups cheap.
    let size = if matches!(family, NiFamily::Cl(_)) {
        1..=2
    } else {
        1..=3
    };
    let s1 = gen.premise_set_over(&left, size.clone());
    let s2 = gen.premise_set_over(&right, size);
    let setting = match family {
        NiFamily::ClTopDiDef => Setting::named(DeducibilityCore::cl_top(), AttackRule::DiDef)?,
        NiFamily::McsCapDiDef => Setting::named(DeducibilityCore::mcs_cap(), AttackRule::DiDef)?,
        NiFamily::Cl(rule) => Setting::named(DeducibilityCore::cl(), rule)?,
        NiFamily::TrackedAba => unreachable!(),
    };
    let queries = lit_queries(&atoms_of(&s1));
    Ok((setting, s1, s2, queries))
}

fn ni_trial(family: NiFamily, gen: &mut KbGenerator) -> Result<PropertyReport> {
    let (setting, s1, s2, queries) = non_interference_instance(family, gen)?;
    let report = check_non_interference(&setting, &s1, &s2, &GRD_PRF, &queries)?;
    if report.verdict != Verdict::Fail {
        return Ok(report);
    }
    // Shrink the added set while the violation persists.
    let small = minimize_premises(&s2, |s| {
        Ok(check_non_interference(&setting, &s1, s, &GRD_PRF, &queries)?.verdict == Verdict::Fail)
    })?;
    check_non_interference(&setting, &s1, &small, &GRD_PRF, &queries)
}

/// Non-interference over `trials` instances of `family`.
pub fn non_interference(family: NiFamily, seed: u64, trials: usize) -> Result<PropertyReport> {
    let mut r = drive("non-interference", seed, trials, |g| ni_trial(family, g))?;
    r = r.bound("setting", family.name());
    Ok(r)
}

/// Pointed settings used by the cumulativity drivers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointedFamily {
    TrackedAba,
    AspicDagger,
}

impl PointedFamily {
    pub fn name(self) -> &'static str {
        match self {
            PointedFamily::TrackedAba => "aba-tracked",
            PointedFamily::AspicDagger => "aspic-dagger",
        }
    }
}

/// A pointed instance with a grounded-entailed `φ`, or `None` when no
/// query is grounded-entailed.
pub fn pointed_instance(
    family: PointedFamily,
    gen: &mut KbGenerator,
) -> Result<Option<(Setting, BTreeSet<Formula>, Formula, BTreeSet<Formula>)>> {
    let atoms: Vec<String> = ["a", "b", "c", "d"].map(String::from).to_vec();
    let (setting, premises) = match family {
        PointedFamily::TrackedAba => {
            let (rules, assumptions, contraries) = gen.aba(&atoms);
            let mut premises = assumptions;
            premises.extend(rules.iter().map(|r| r.clone().literal()));
            let core = DeducibilityCore::aba(AbaRules::new(rules, true));
            (
                Setting::native(
                    core,
                    ContrarinessSpec::ExplicitMap(contraries),
                    AttackPointSpec::Id,
                ),
                premises,
            )
        }
        PointedFamily::AspicDagger => {
            let rules = gen.aspic(&atoms, AspicMode::Dagger);
            let premises = rules.premise_set();
            (
                Setting::native(
                    DeducibilityCore::aspic(rules),
                    ContrarinessSpec::NegCanonical,
                    AttackPointSpec::Id,
                ),
                premises,
            )
        }
    };
    let queries = lit_queries(&atoms);
    let entailed: Vec<Formula> = consequences(&setting, &premises, &queries, Semantics::Grd)?
        .into_iter()
        .collect();
    let Some(phi) = entailed.choose(gen.rng()).cloned() else {
        return Ok(None);
    };
    Ok(Some((setting, premises, phi, queries)))
}

/// The grounded claims plus consequence-level and extensional cumulativity
/// for grounded semantics, on one pointed instance.
pub fn pointed_trial(family: PointedFamily, gen: &mut KbGenerator) -> Result<Vec<PropertyReport>> {
    let Some((setting, premises, phi, queries)) = pointed_instance(family, gen)? else {
        return Ok(Vec::new());
    };
    let psis: BTreeSet<Formula> = queries.iter().filter(|q| **q != phi).cloned().collect();
    Ok(vec![
        check_grounded_items(&setting, &premises, &phi, &queries)?,
        check_cumulativity(&setting, &premises, &phi, &psis, Semantics::Grd)?,
        check_extensional_cumulativity(&setting, &premises, &phi, &queries, Semantics::Grd)?,
    ])
}

fn pick_pointed(gen: &mut KbGenerator) -> PointedFamily {
    if gen.rng().gen_bool(0.5) {
        PointedFamily::TrackedAba
    } else {
        PointedFamily::AspicDagger
    }
}

fn pointed_property(
    property: &str,
    index: usize,
    seed: u64,
    trials: usize,
) -> Result<PropertyReport> {
    drive(property, seed, trials, |g| {
        let family = pick_pointed(g);
        let reports = pointed_trial(family, g)?;
        Ok(match reports.into_iter().nth(index) {
            Some(r) => r,
            None => PropertyReport::new(property).inconclusive("no grounded-entailed query"),
        })
    })
}

/// CL/Neg/Id over at most six premises of depth at most two on five atoms.
pub fn mcs_instance(gen: &mut KbGenerator) -> (Setting, BTreeSet<Formula>) {
    let premises = gen.premise_set_over(&gen.atoms.clone(), 1..=6);
    let setting = Setting::native(
        DeducibilityCore::cl(),
        ContrarinessSpec::Neg,
        AttackPointSpec::Id,
    );
    (setting, premises)
}

fn mcs_property(
    property: &str,
    seed: u64,
    trials: usize,
    check: fn(&Setting, &BTreeSet<Formula>) -> Result<PropertyReport>,
) -> Result<PropertyReport> {
    drive(property, seed, trials, |g| {
        let (setting, premises) = mcs_instance(g);
        check(&setting, &premises)
    })
}

fn structural(property: &str, setting: &Setting, bounds: &Bounds) -> Result<PropertyReport> {
    match property {
        "pre-relevance" => check_pre_relevance(&setting.core, bounds),
        "prime" => check_prime(setting, bounds),
        "pointed" => check_pointed(setting.attack_points, bounds),
        "cut" => check_cut(&setting.core, bounds),
        "contraposition" => check_contraposition(&setting.core, &setting.contrariness, bounds),
        "closure-probe" => check_closure_probe(&setting.core, bounds),
        other => Err(unknown(other)),
    }
}

/// Runs `property` on generated instances. Structural properties are
/// exhaustive within bounds on the pre-relevant CLTop/DiDef setting; the
/// seed only picks the atom split.
pub fn run_random(property: &str, seed: u64, trials: usize) -> Result<PropertyReport> {
    match property {
        "non-interference" => drive(property, seed, trials, |g| {
            let family = *[
                NiFamily::ClTopDiDef,
                NiFamily::McsCapDiDef,
                NiFamily::TrackedAba,
            ]
            .choose(g.rng())
            .expect("families");
            ni_trial(family, g)
        }),
        "grounded-items" => pointed_property(property, 0, seed, trials),
        "cumulativity" => pointed_property(property, 1, seed, trials),
        "ext-cumulativity" => pointed_property(property, 2, seed, trials),
        "stb-eq-prf" => mcs_property(property, seed, trials, check_stb_eq_prf_con),
        "grd-eq-mcs" => mcs_property(property, seed, trials, check_grd_eq_mcs),
        "mcs-stable" => mcs_property(property, seed, trials, check_mcs_stable),
        "mcs-preferred" => mcs_property(property, seed, trials, check_mcs_preferred),
        "crash-resistance" => {
            let mut gen = KbGenerator::new(seed);
            let setting = Setting::named(DeducibilityCore::cl_top(), AttackRule::DiDef)?;
            let candidate = gen.premise_set_over(&["p".to_string(), "q".to_string()], 1..=3);
            check_crash_resistance(
                &setting,
                &candidate,
                &["r".to_string(), "s".to_string()],
                Semantics::Grd,
                trials,
                &mut gen,
            )
        }
        "pre-relevance" | "prime" | "pointed" | "cut" | "contraposition" | "closure-probe" => {
            let mut gen = KbGenerator::new(seed);
            let mut pool: Vec<String> = ["p", "q", "r"].map(String::from).to_vec();
            pool.shuffle(gen.rng());
            let bounds = Bounds {
                left: pool[..2].to_vec(),
                right: pool[2..].to_vec(),
                ..Bounds::default()
            };
            let setting = Setting::named(DeducibilityCore::cl_top(), AttackRule::DiDef)?;
            let mut r = structural(property, &setting, &bounds)?;
            r.seed = Some(seed);
            Ok(r)
        }
        other => Err(unknown(other)),
    }
}

/// Runs `property` against a loaded knowledge base. Random additions (for
/// non-interference and crash resistance) use fresh atoms `x1`, `x2`, ...
pub fn run_on_kb(
    kb: &KnowledgeBase,
    property: &str,
    seed: u64,
    trials: usize,
) -> Result<PropertyReport> {
    let setting = &kb.setting;
    let premises = &kb.premises;
    let used = atoms_of(premises);
    let fresh: Vec<String> = (1..)
        .map(|i| format!("x{i}"))
        .filter(|a| !used.contains(a))
        .take(2)
        .collect();
    let queries = kb.query_pool();
    match property {
        "non-interference" => drive(property, seed, trials, |g| {
            let s2 = g.premise_set_over(&fresh, 1..=2);
            check_non_interference(setting, premises, &s2, &GRD_PRF, &queries)
        }),
        "crash-resistance" => {
            let mut gen = KbGenerator::new(seed);
            check_crash_resistance(setting, premises, &fresh, Semantics::Grd, trials, &mut gen)
        }
        "cumulativity" | "ext-cumulativity" | "grounded-items" => {
            let mut report = PropertyReport::new(property).bound("queries", queries.len());
            report.seed = Some(seed);
            let mut any = false;
            for sem in GRD_PRF {
                if property == "grounded-items" && sem != Semantics::Grd {
                    continue;
                }
                for phi in consequences(setting, premises, &queries, sem)? {
                    any = true;
                    let psis: BTreeSet<Formula> =
                        queries.iter().filter(|q| **q != phi).cloned().collect();
                    let r = match property {
                        "cumulativity" => check_cumulativity(setting, premises, &phi, &psis, sem)?,
                        "ext-cumulativity" => {
                            check_extensional_cumulativity(setting, premises, &phi, &queries, sem)?
                        }
                        _ => check_grounded_items(setting, premises, &phi, &queries)?,
                    };
                    report.absorb(r);
                }
            }
            if !any {
                return Ok(report.inconclusive("no query is entailed"));
            }
            Ok(report)
        }
        "stb-eq-prf" => check_stb_eq_prf_con(setting, premises),
        "grd-eq-mcs" => check_grd_eq_mcs(setting, premises),
        "mcs-stable" => check_mcs_stable(setting, premises),
        "mcs-preferred" => check_mcs_preferred(setting, premises),
        "pre-relevance" | "prime" | "pointed" | "cut" | "contraposition" | "closure-probe" => {
            let mut atoms: Vec<String> =
                used.iter().filter(|a| !a.contains('(')).cloned().collect();
            atoms.truncate(3);
            let bounds = if atoms.len() >= 2 {
                let right = atoms.split_off(atoms.len() / 2 + atoms.len() % 2);
                Bounds {
                    left: atoms,
                    right,
                    ..Bounds::default()
                }
            } else {
                Bounds::default()
            };
            structural(property, setting, &bounds)
        }
        other => Err(unknown(other)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kb::load;

    #[test]
    fn trials_replay_from_their_seed() {
        let a = non_interference(NiFamily::ClTopDiDef, 11, 5).unwrap();
        let b = non_interference(NiFamily::ClTopDiDef, 11, 5).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn instances_are_disjoint() {
        for family in [
            NiFamily::ClTopDiDef,
            NiFamily::McsCapDiDef,
            NiFamily::TrackedAba,
        ] {
            for i in 0..20 {
                let (_, s1, s2, q) =
                    non_interference_instance(family, &mut trial_gen(3, i)).unwrap();
                assert!(crate::formula::disjoint(s1.iter().chain(&q), &s2));
            }
        }
    }

    #[test]
    fn pre_relevant_settings_pass_a_short_run() {
        for family in [
            NiFamily::ClTopDiDef,
            NiFamily::McsCapDiDef,
            NiFamily::TrackedAba,
        ] {
            let r = non_interference(family, 5, 10).unwrap();
            assert!(r.passed(), "{}: {r}", family.name());
        }
    }

    #[test]
    fn unknown_property_is_a_config_error() {
        assert!(matches!(run_random("nope", 1, 1), Err(Error::Config(_))));
    }

    #[test]
    fn makinson_kb_fails_cumulativity_for_preferred() {
        let kb = load(
            "atoms p q\ndefeasible n0: top => p\ndefeasible n1: p|q => ~p\nsetting core=aspic mode=ddagger attack=native",
        )
        .unwrap();
        let r = run_on_kb(&kb, "cumulativity", 1, 1).unwrap();
        assert_eq!(r.verdict, Verdict::Fail, "{r}");
    }

    #[test]
    fn structural_on_a_kb_uses_its_setting() {
        let kb = load("atoms p q\npremise p\npremise q\nsetting core=cl attack=def").unwrap();
        let r = run_on_kb(&kb, "pointed", 0, 1).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
    }
}
