//! Maximal AF-consistent subsets of a premise set.

use std::collections::BTreeSet;

use crate::arguments::Setting;
use crate::error::{Error, Result};
use crate::formula::Formula;

pub const MCS_CAP: usize = 12;

/// All ⊆-maximal AF-consistent subsets of `premises`, in a fixed order.
/// Consistency is closed under subsets, so the search walks subsets from
/// the largest down and keeps those not inside an earlier find.
pub fn mcs(setting: &Setting, premises: &BTreeSet<Formula>) -> Result<Vec<BTreeSet<Formula>>> {
    let n = premises.len();
    if n > MCS_CAP {
        return Err(Error::PremiseCap {
            count: n,
            limit: MCS_CAP,
        });
    }
    let items: Vec<&Formula> = premises.iter().collect();
    let con = setting
        .core
        .restrict_consistent(setting.contrariness.clone());
    let mut masks: Vec<u32> = (0..1u32 << n).collect();
    masks.sort_by_key(|m| (std::cmp::Reverse(m.count_ones()), *m));
    let mut found: Vec<u32> = Vec::new();
    for m in masks {
        if found.iter().any(|f| m & !f == 0) {
            continue;
        }
        let set: BTreeSet<Formula> = (0..n)
            .filter(|i| m & (1 << i) != 0)
            .map(|i| items[i].clone())
            .collect();
        if con.accepts(&set)? {
            found.push(m);
        }
    }
    let mut out: Vec<BTreeSet<Formula>> = found
        .into_iter()
        .map(|m| {
            (0..n)
                .filter(|i| m & (1 << i) != 0)
                .map(|i| items[i].clone())
                .collect()
        })
        .collect();
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contrariness::{AttackPointSpec, ContrarinessSpec};
    use crate::deduction::DeducibilityCore;

    fn a(n: &str) -> Formula {
        Formula::atom(n)
    }

    fn neg_setting() -> Setting {
        Setting::native(
            DeducibilityCore::cl(),
            ContrarinessSpec::Neg,
            AttackPointSpec::Id,
        )
    }

    fn set(fs: &[Formula]) -> BTreeSet<Formula> {
        fs.iter().cloned().collect()
    }

    #[test]
    fn contradictory_pair() {
        let s = set(&[a("p"), a("p").negated(), a("q")]);
        let got = mcs(&neg_setting(), &s).unwrap();
        // Oracle: every subset, consistent iff it does not hold both p and ¬p.
        let items: Vec<Formula> = s.iter().cloned().collect();
        let mut want = Vec::new();
        for m in 0u32..8 {
            let sub: BTreeSet<Formula> = (0..3)
                .filter(|i| m & (1 << i) != 0)
                .map(|i| items[i].clone())
                .collect();
            let ok = !(sub.contains(&a("p")) && sub.contains(&a("p").negated()));
            let maximal = (0..3).all(|i| {
                m & (1 << i) != 0 || {
                    let mut sup = sub.clone();
                    sup.insert(items[i].clone());
                    sup.contains(&a("p")) && sup.contains(&a("p").negated())
                }
            });
            if ok && maximal {
                want.push(sub);
            }
        }
        want.sort();
        assert_eq!(got, want);
        assert_eq!(
            got,
            vec![set(&[a("p"), a("q")]), set(&[a("p").negated(), a("q")])]
        );
    }

    #[test]
    fn consistent_and_empty() {
        let s = set(&[a("p"), a("q")]);
        assert_eq!(mcs(&neg_setting(), &s).unwrap(), vec![s]);
        assert_eq!(
            mcs(&neg_setting(), &BTreeSet::new()).unwrap(),
            vec![BTreeSet::new()]
        );
    }

    #[test]
    fn self_contradiction_is_dropped() {
        let bad = Formula::and(a("p"), a("p").negated());
        let s = set(&[bad, a("q")]);
        assert_eq!(mcs(&neg_setting(), &s).unwrap(), vec![set(&[a("q")])]);
    }
}
