//! Forward chaining over ABA rules.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::formula::{Formula, Rule};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbaRules {
    pub rules: Vec<Arc<Rule>>,
    /// Tracked (dagger) mode: rules are premise-language elements and a
    /// support names exactly the rules its derivation uses.
    pub tracked: bool,
}

/// A witness derivation: the rules it applies (in firing order) and the
/// leaves it starts from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbaDerivation {
    pub rules: Vec<Arc<Rule>>,
    pub assumptions: BTreeSet<Formula>,
}

#[derive(Clone, Copy)]
enum Just {
    Leaf,
    Rule(usize),
}

/// Closure of `leaves` under `rules`; a `top` body element is always
/// satisfied. Returns the closure and, per rule, whether it fired.
pub(crate) fn closure(
    leaves: &BTreeSet<Formula>,
    rules: &[Arc<Rule>],
) -> (BTreeSet<Formula>, Vec<bool>) {
    let (known, fired) = chain(leaves, rules);
    (known.into_keys().collect(), fired)
}

fn chain(leaves: &BTreeSet<Formula>, rules: &[Arc<Rule>]) -> (HashMap<Formula, Just>, Vec<bool>) {
    let mut known: HashMap<Formula, Just> =
        leaves.iter().map(|f| (f.clone(), Just::Leaf)).collect();
    let mut fired = vec![false; rules.len()];
    loop {
        let mut changed = false;
        for (i, r) in rules.iter().enumerate() {
            if fired[i] || !r.premises().all(|b| known.contains_key(b)) {
                continue;
            }
            fired[i] = true;
            changed = true;
            known.entry(r.head.clone()).or_insert(Just::Rule(i));
        }
        if !changed {
            return (known, fired);
        }
    }
}

impl AbaRules {
    pub fn new(rules: Vec<Rule>, tracked: bool) -> AbaRules {
        AbaRules {
            rules: rules.into_iter().map(Arc::new).collect(),
            tracked,
        }
    }

    fn axiom_rules(axioms: &BTreeSet<Formula>) -> Vec<Arc<Rule>> {
        axioms
            .iter()
            .map(|f| Arc::new(Rule::strict(&format!("+{f}"), Vec::new(), f.clone())))
            .collect()
    }

    /// Decides `Γ ⊢ φ`. In tracked mode the rule literals of `Γ` are the
    /// rules available and each of them has to take part in the derivation;
    /// the remaining elements are the leaves. Axioms act as premise-free
    /// rules that never appear in supports.
    pub fn holds(
        &self,
        support: &BTreeSet<Formula>,
        goal: &Formula,
        axioms: &BTreeSet<Formula>,
    ) -> bool {
        self.conclusions(support, axioms)
            .is_some_and(|known| known.contains(goal))
    }

    /// Splits a support into leaves and rule literals.
    pub(crate) fn split(&self, support: &BTreeSet<Formula>) -> (BTreeSet<Formula>, Vec<Arc<Rule>>) {
        let mut leaves = BTreeSet::new();
        let mut rules = Vec::new();
        for f in support {
            match f {
                Formula::RuleLit(r) if self.tracked => rules.push(r.clone()),
                other => {
                    leaves.insert(other.clone());
                }
            }
        }
        (leaves, rules)
    }

    /// All conclusions of a support, or `None` when (in tracked mode) some
    /// listed rule cannot fire.
    pub(crate) fn conclusions(
        &self,
        support: &BTreeSet<Formula>,
        axioms: &BTreeSet<Formula>,
    ) -> Option<BTreeSet<Formula>> {
        let (mut leaves, used) = self.split(support);
        leaves.extend(axioms.iter().cloned());
        let rules = if self.tracked {
            used
        } else {
            self.rules.clone()
        };
        let (known, fired) = closure(&leaves, &rules);
        if self.tracked && !fired.iter().all(|f| *f) {
            return None;
        }
        Some(known)
    }

    /// A witness derivation of `goal` from `assumptions` with every rule of
    /// the framework available, plus the axiom rules `→ φ`.
    pub fn derives(
        &self,
        assumptions: &BTreeSet<Formula>,
        goal: &Formula,
        axioms: &BTreeSet<Formula>,
    ) -> Option<AbaDerivation> {
        let mut rules = self.rules.clone();
        rules.extend(Self::axiom_rules(axioms));
        let (known, _) = chain(assumptions, &rules);
        known.get(goal)?;
        let mut used_rules = BTreeSet::new();
        let mut used_leaves = BTreeSet::new();
        let mut stack = vec![goal.clone()];
        let mut seen = BTreeSet::new();
        while let Some(f) = stack.pop() {
            if !seen.insert(f.clone()) {
                continue;
            }
            match known[&f] {
                Just::Leaf => {
                    used_leaves.insert(f);
                }
                Just::Rule(i) => {
                    used_rules.insert(i);
                    stack.extend(rules[i].premises().cloned());
                }
            }
        }
        Some(AbaDerivation {
            rules: used_rules.into_iter().map(|i| rules[i].clone()).collect(),
            assumptions: used_leaves,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(n: &str) -> Formula {
        Formula::atom(n)
    }

    fn set(fs: &[Formula]) -> BTreeSet<Formula> {
        fs.iter().cloned().collect()
    }

    fn sample(tracked: bool) -> AbaRules {
        AbaRules::new(
            vec![
                Rule::strict("r1", vec![a("a")], a("p")),
                Rule::strict("r2", vec![a("p"), a("b")], a("q")),
            ],
            tracked,
        )
    }

    #[test]
    fn chaining_uses_both_rules() {
        let fw = sample(false);
        let d = fw
            .derives(&set(&[a("a"), a("b")]), &a("q"), &BTreeSet::new())
            .unwrap();
        let ids: Vec<&str> = d.rules.iter().map(|r| &*r.id).collect();
        assert_eq!(ids, vec!["r1", "r2"]);
        assert_eq!(d.assumptions, set(&[a("a"), a("b")]));
        assert!(fw
            .derives(&set(&[a("a")]), &a("q"), &BTreeSet::new())
            .is_none());
    }

    #[test]
    fn axiom_acts_as_rule() {
        let fw = sample(false);
        let d = fw
            .derives(&BTreeSet::new(), &a("q"), &set(&[a("q")]))
            .unwrap();
        assert_eq!(d.rules.len(), 1);
        assert!(d.rules[0].body.is_empty());
        assert_eq!(d.rules[0].head, a("q"));
    }

    #[test]
    fn tracked_supports_name_exactly_their_rules() {
        let fw = sample(true);
        let r1 = fw.rules[0].as_ref().clone().literal();
        let r2 = fw.rules[1].as_ref().clone().literal();
        let none = BTreeSet::new();
        assert!(fw.holds(&set(&[a("a"), r1.clone()]), &a("p"), &none));
        assert!(!fw.holds(&set(&[a("a")]), &a("p"), &none));
        // r2 cannot fire without b, so the support is not a derivation.
        assert!(!fw.holds(&set(&[a("a"), r1.clone(), r2.clone()]), &a("p"), &none));
        assert!(fw.holds(&set(&[a("a"), a("b"), r1, r2]), &a("q"), &none));
    }
}
