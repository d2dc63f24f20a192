//! Reference backend: every subset, as a bitmask.

use std::collections::BTreeSet;

use super::AttackRelation;

pub const ENUMERATION_CAP: usize = 24;

struct Masks {
    attackers: Vec<u32>,
    targets: Vec<u32>,
    all: u32,
}

impl Masks {
    fn new(rel: &AttackRelation) -> Masks {
        assert!(rel.n <= ENUMERATION_CAP);
        let to_mask = |v: &Vec<usize>| v.iter().fold(0u32, |m, &i| m | (1 << i));
        Masks {
            attackers: rel.attackers.iter().map(to_mask).collect(),
            targets: rel.targets.iter().map(to_mask).collect(),
            all: (1u32 << rel.n) - 1,
        }
    }

    fn attacked_by(&self, set: u32) -> u32 {
        let mut out = 0;
        let mut rest = set;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            out |= self.targets[i];
            rest &= rest - 1;
        }
        out
    }

    fn conflict_free(&self, set: u32) -> bool {
        self.attacked_by(set) & set == 0
    }

    fn defended(&self, set: u32) -> u32 {
        let hit = self.attacked_by(set);
        (0..self.attackers.len())
            .filter(|&a| self.attackers[a] & !hit == 0)
            .fold(0, |m, a| m | (1 << a))
    }
}

fn to_set(mask: u32) -> BTreeSet<usize> {
    (0..32).filter(|i| mask & (1 << i) != 0).collect()
}

fn collect(rel: &AttackRelation, keep: impl Fn(&Masks, u32) -> bool) -> Vec<BTreeSet<usize>> {
    let m = Masks::new(rel);
    (0..=m.all)
        .filter(|&s| m.conflict_free(s) && keep(&m, s))
        .map(to_set)
        .collect()
}

pub(super) fn complete_sets(rel: &AttackRelation) -> Vec<BTreeSet<usize>> {
    collect(rel, |m, s| m.defended(s) == s)
}

pub(super) fn admissible_sets(rel: &AttackRelation) -> Vec<BTreeSet<usize>> {
    collect(rel, |m, s| m.defended(s) & s == s)
}

pub(super) fn stable_sets(rel: &AttackRelation) -> Vec<BTreeSet<usize>> {
    collect(rel, |m, s| m.attacked_by(s) | s == m.all)
}
