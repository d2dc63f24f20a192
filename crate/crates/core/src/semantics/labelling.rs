//! Scaling backend: complete labellings by propagation and branching.
//!
//! The label of an argument in a complete labelling is a function of the
//! labels of its attackers, so arguments with the same attacker set always
//! share a label. The search runs on the quotient graph of those classes.

use std::collections::{BTreeSet, HashMap};

use super::AttackRelation;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Label {
    In,
    Out,
    Undec,
    Free,
}

struct Quotient {
    members: Vec<Vec<usize>>,
    attackers: Vec<Vec<usize>>,
}

fn quotient(rel: &AttackRelation) -> Quotient {
    let mut by_attackers: HashMap<&[usize], usize> = HashMap::new();
    let mut class_of = vec![0; rel.n];
    let mut members: Vec<Vec<usize>> = Vec::new();
    for a in 0..rel.n {
        let next = members.len();
        let c = *by_attackers.entry(&rel.attackers[a]).or_insert(next);
        if c == next {
            members.push(Vec::new());
        }
        members[c].push(a);
        class_of[a] = c;
    }
    let attackers = members
        .iter()
        .map(|m| {
            let set: BTreeSet<usize> = rel.attackers[m[0]].iter().map(|&b| class_of[b]).collect();
            set.into_iter().collect()
        })
        .collect();
    Quotient { members, attackers }
}

/// Applies forced labels until nothing changes; false on a contradiction.
fn propagate(attackers: &[Vec<usize>], lab: &mut [Label]) -> bool {
    loop {
        let mut changed = false;
        for a in 0..lab.len() {
            let (mut any_in, mut any_free, mut any_undec) = (false, false, false);
            for &b in &attackers[a] {
                match lab[b] {
                    Label::In => any_in = true,
                    Label::Free => any_free = true,
                    Label::Undec => any_undec = true,
                    Label::Out => {}
                }
            }
            let forced = if any_in {
                Some(Label::Out)
            } else if any_free {
                None
            } else if any_undec {
                Some(Label::Undec)
            } else {
                Some(Label::In)
            };
            match (lab[a], forced) {
                (Label::Free, Some(l)) => {
                    lab[a] = l;
                    changed = true;
                }
                (Label::Free, None) => {}
                (current, Some(l)) if current != l => return false,
                (Label::In, None) if any_undec => return false,
                _ => {}
            }
        }
        if !changed {
            return true;
        }
    }
}

fn search(attackers: &[Vec<usize>], mut lab: Vec<Label>, out: &mut Vec<Vec<Label>>) {
    if !propagate(attackers, &mut lab) {
        return;
    }
    match lab.iter().position(|l| *l == Label::Free) {
        None => out.push(lab),
        Some(i) => {
            for l in [Label::In, Label::Out, Label::Undec] {
                let mut next = lab.clone();
                next[i] = l;
                search(attackers, next, out);
            }
        }
    }
}

pub(super) fn complete_sets(rel: &AttackRelation) -> Vec<BTreeSet<usize>> {
    let q = quotient(rel);
    let mut found = Vec::new();
    search(&q.attackers, vec![Label::Free; q.members.len()], &mut found);
    found
        .into_iter()
        .map(|lab| {
            lab.iter()
                .enumerate()
                .filter(|(_, l)| **l == Label::In)
                .flat_map(|(c, _)| q.members[c].iter().copied())
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quotient_merges_equal_attacker_sets() {
        let rel = AttackRelation::new(4, &[(0, 1), (0, 2), (3, 3)]);
        let q = quotient(&rel);
        assert_eq!(q.members, vec![vec![0], vec![1, 2], vec![3]]);
        assert_eq!(q.attackers, vec![vec![], vec![0], vec![2]]);
    }

    #[test]
    fn self_attacker_is_undecided() {
        let rel = AttackRelation::new(2, &[(0, 0), (0, 1)]);
        let sets = complete_sets(&rel);
        assert_eq!(sets, vec![BTreeSet::new()]);
    }
}
