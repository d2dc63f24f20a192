use std::collections::BTreeSet;

use proptest::prelude::*;

use argonaut::arguments::{Argument, Setting};
use argonaut::contrariness::{AttackPointSpec, AttackRule, ContrarinessSpec};
use argonaut::deduction::DeducibilityCore;
use argonaut::formula::disjoint;
use argonaut::kb::parse_formula;
use argonaut::metatheory::mcs;
use argonaut::metatheory::random::{non_interference, NiFamily};
use argonaut::priorities::{Lifting, PriorityAssignment};
use argonaut::semantics::{complete, extensions, grounded, AttackRelation, Backend, Semantics};
use argonaut::Formula;

fn formula(atoms: &'static [&'static str], depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        6 => proptest::sample::select(atoms).prop_map(Formula::atom),
        1 => Just(Formula::Top),
        1 => Just(Formula::Bottom),
    ];
    leaf.prop_recursive(depth, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::implies(a, b)),
        ]
    })
}

fn relation(max: usize) -> impl Strategy<Value = AttackRelation> {
    (0..=max).prop_flat_map(|n| {
        let edge = (0..n.max(1), 0..n.max(1));
        proptest::collection::vec(edge, 0..=n * 2).prop_map(move |edges| {
            let edges: Vec<(usize, usize)> = if n == 0 { Vec::new() } else { edges };
            AttackRelation::new(n, &edges)
        })
    })
}

fn members(rel: &AttackRelation, sem: Semantics, backend: Backend) -> Vec<BTreeSet<usize>> {
    extensions(rel, sem, backend)
        .unwrap()
        .into_iter()
        .map(|e| e.members)
        .collect()
}

fn neg_id() -> Setting {
    Setting::native(
        DeducibilityCore::cl(),
        ContrarinessSpec::Neg,
        AttackPointSpec::Id,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn render_then_parse_is_identity(f in formula(&["p", "q", "r"], 4), label in proptest::option::of(0u32..5)) {
        let f = match label {
            Some(v) => Formula::labeled(f, v),
            None => f,
        };
        let text = f.to_string();
        let back = parse_formula(&text).unwrap();
        prop_assert_eq!(&back, &f);
        prop_assert_eq!(back.to_string(), text);
    }

    #[test]
    fn backends_agree(rel in relation(10)) {
        for sem in [Semantics::Cmp, Semantics::Prf, Semantics::Stb] {
            prop_assert_eq!(members(&rel, sem, Backend::Enumerate), members(&rel, sem, Backend::Labelling));
        }
    }

    #[test]
    fn grounded_is_the_least_complete_extension(rel in relation(10)) {
        let g = grounded(&rel).members;
        prop_assert!(complete(&rel, &g));
        let cmp = members(&rel, Semantics::Cmp, Backend::Enumerate);
        prop_assert!(cmp.iter().all(|c| g.is_subset(c)));
        // Skeptical complete membership coincides with grounded membership.
        let common = cmp.iter().skip(1).fold(cmp[0].clone(), |acc, c| acc.intersection(c).copied().collect());
        prop_assert_eq!(common, g);
    }

    #[test]
    fn stable_extensions_are_preferred(rel in relation(10)) {
        let prf = members(&rel, Semantics::Prf, Backend::Auto);
        for s in members(&rel, Semantics::Stb, Backend::Auto) {
            prop_assert!(prf.contains(&s));
        }
    }

    #[test]
    fn conjunctive_points_count(n in 0usize..6) {
        let atoms = ["a", "b", "c", "d", "e", "f"];
        let support: BTreeSet<Formula> = atoms[..n].iter().map(|a| Formula::atom(a)).collect();
        prop_assert_eq!(AttackPointSpec::ConjClosure.points(&support).len(), (1usize << n) - 1);
        prop_assert_eq!(AttackPointSpec::Id.points(&support).len(), n);
    }

    #[test]
    fn disjointness_is_symmetric(
        a in proptest::collection::vec(formula(&["p", "q", "r", "s"], 2), 0..4),
        b in proptest::collection::vec(formula(&["p", "q", "r", "s"], 2), 0..4),
    ) {
        prop_assert_eq!(disjoint(&a, &b), disjoint(&b, &a));
    }

    #[test]
    fn mcs_members_are_maximal_and_consistent(
        premises in proptest::collection::btree_set(formula(&["p", "q", "r"], 2), 0..6),
    ) {
        let setting = neg_id();
        let found = mcs(&setting, &premises).unwrap();
        let con = setting.core.restrict_consistent(setting.contrariness.clone());
        for (i, m) in found.iter().enumerate() {
            prop_assert!(m.is_subset(&premises));
            prop_assert!(con.accepts(m).unwrap());
            for (j, other) in found.iter().enumerate() {
                prop_assert!(i == j || !m.is_subset(other));
            }
        }
        // Every consistent subset extends to a member.
        let items: Vec<&Formula> = premises.iter().collect();
        for mask in 0u32..(1 << items.len()) {
            let sub: BTreeSet<Formula> =
                (0..items.len()).filter(|i| mask & (1 << i) != 0).map(|i| items[i].clone()).collect();
            if con.accepts(&sub).unwrap() {
                prop_assert!(found.iter().any(|m| sub.is_subset(m)));
            }
        }
    }

    #[test]
    fn support_liftings_are_monotonic(
        values in proptest::collection::vec(1u32..5, 1..6),
        split in 0usize..6,
    ) {
        let setting = neg_id();
        let atoms = ["a", "b", "c", "d", "e", "f"];
        let mut pi = PriorityAssignment::default();
        let all: BTreeSet<Formula> = values.iter().enumerate().map(|(i, v)| {
            let f = Formula::atom(atoms[i]);
            pi.pi.insert(f.clone(), *v);
            f
        }).collect();
        let part: BTreeSet<Formula> = all.iter().take(split.min(all.len()).max(1)).cloned().collect();
        let arg = |support: &BTreeSet<Formula>| Argument {
            id: 0,
            support: support.clone(),
            conclusion: Formula::Top,
            value: None,
        };
        let v = |l: Lifting, s: &BTreeSet<Formula>| pi.argument_value(&setting, l, &arg(s)).unwrap();
        // Larger supports are never stronger under max, never weaker under min.
        prop_assert!(pi.le(v(Lifting::MaxSupport, &part), v(Lifting::MaxSupport, &all)));
        prop_assert!(pi.le(v(Lifting::MinSupport, &all), v(Lifting::MinSupport, &part)));
    }

    #[test]
    fn reports_replay_from_their_seed(seed in any::<u64>()) {
        let a = non_interference(NiFamily::Cl(AttackRule::DiDef), seed, 3).unwrap();
        let b = non_interference(NiFamily::Cl(AttackRule::DiDef), seed, 3).unwrap();
        prop_assert_eq!(a, b);
    }
}
