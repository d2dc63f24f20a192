//! Seeded random knowledge bases.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::RangeInclusive;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::deduction::{AbaRules, AspicMode, AspicRules};
use crate::formula::{Formula, Rule};
use crate::priorities::PriorityAssignment;

pub const DEFAULT_SEED: u64 = 0x5eed_a4c5;

/// `ARGONAUT_SEED` when set and numeric, otherwise [`DEFAULT_SEED`].
pub fn default_seed() -> u64 {
    std::env::var("ARGONAUT_SEED")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

#[derive(Clone, Debug)]
pub struct KbGenerator {
    pub atoms: Vec<String>,
    pub premises: RangeInclusive<usize>,
    pub depth: usize,
    pub rules: RangeInclusive<usize>,
    pub values: RangeInclusive<u32>,
    pub seed: u64,
    rng: ChaCha8Rng,
}

impl KbGenerator {
    pub fn new(seed: u64) -> KbGenerator {
        KbGenerator {
            atoms: ["p", "q", "r", "s", "t"].map(String::from).to_vec(),
            premises: 1..=6,
            depth: 2,
            rules: 1..=5,
            values: 1..=3,
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn with_atoms(mut self, atoms: &[&str]) -> KbGenerator {
        self.atoms = atoms.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn with_premises(mut self, premises: RangeInclusive<usize>) -> KbGenerator {
        self.premises = premises;
        self
    }

    pub fn with_depth(mut self, depth: usize) -> KbGenerator {
        self.depth = depth;
        self
    }

    pub fn with_rules(mut self, rules: RangeInclusive<usize>) -> KbGenerator {
        self.rules = rules;
        self
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn atom_from(&mut self, atoms: &[String]) -> Formula {
        Formula::atom(atoms.choose(&mut self.rng).expect("non-empty atom pool"))
    }

    fn literal(&mut self, atoms: &[String]) -> Formula {
        let a = self.atom_from(atoms);
        if self.rng.gen_bool(0.3) {
            Formula::not(a)
        } else {
            a
        }
    }

    /// A formula of depth at most `depth`, weighted toward literals and
    /// binary connectives.
    pub fn formula_over(&mut self, atoms: &[String], depth: usize) -> Formula {
        if depth == 0 {
            return self.atom_from(atoms);
        }
        let roll: f64 = self.rng.gen();
        if roll < 0.45 {
            return self.literal(atoms);
        }
        if roll < 0.55 {
            return Formula::not(self.formula_over(atoms, depth - 1));
        }
        let a = self.formula_over(atoms, depth - 1);
        let b = self.formula_over(atoms, depth - 1);
        match self.rng.gen_range(0..3) {
            0 => Formula::and(a, b),
            1 => Formula::or(a, b),
            _ => Formula::implies(a, b),
        }
    }

    pub fn formula(&mut self) -> Formula {
        let atoms = self.atoms.clone();
        self.formula_over(&atoms, self.depth)
    }

    pub fn premise_set_over(
        &mut self,
        atoms: &[String],
        count: RangeInclusive<usize>,
    ) -> BTreeSet<Formula> {
        let n = self.rng.gen_range(count);
        let mut out = BTreeSet::new();
        // Duplicates shrink the set; a few retries keep sizes close to `n`.
        for _ in 0..n * 3 {
            if out.len() == n {
                break;
            }
            out.insert(self.formula_over(atoms, self.depth));
        }
        out
    }

    pub fn premise_set(&mut self) -> BTreeSet<Formula> {
        let atoms = self.atoms.clone();
        let range = self.premises.clone();
        self.premise_set_over(&atoms, range)
    }

    /// Splits the atom pool in two non-empty halves.
    pub fn atom_split(&mut self) -> (Vec<String>, Vec<String>) {
        let mut atoms = self.atoms.clone();
        atoms.shuffle(&mut self.rng);
        let k = self.rng.gen_range(1..atoms.len());
        let right = atoms.split_off(k);
        (atoms, right)
    }

    /// A flat ABA framework over `atoms`: assumptions, a contrary for each,
    /// and rules whose heads are never assumptions.
    pub fn aba(
        &mut self,
        atoms: &[String],
    ) -> (
        Vec<Rule>,
        BTreeSet<Formula>,
        BTreeMap<Formula, BTreeSet<Formula>>,
    ) {
        let mut pool: Vec<String> = atoms.to_vec();
        pool.shuffle(&mut self.rng);
        let k = (pool.len() / 2).max(1);
        let assumptions: Vec<String> = pool[..k].to_vec();
        let others: Vec<String> = if pool.len() > k {
            pool[k..].to_vec()
        } else {
            Vec::new()
        };
        let mut contraries = BTreeMap::new();
        for a in &assumptions {
            let target = if others.is_empty() || self.rng.gen_bool(0.2) {
                Formula::not(Formula::atom(a))
            } else {
                self.atom_from(&others)
            };
            contraries.insert(
                Formula::atom(a),
                [target].into_iter().collect::<BTreeSet<_>>(),
            );
        }
        let mut heads: Vec<Formula> = others.iter().map(|s| Formula::atom(s)).collect();
        heads.extend(assumptions.iter().map(|a| Formula::not(Formula::atom(a))));
        let n = self.rng.gen_range(self.rules.clone());
        let mut rules = Vec::new();
        let body_pool: Vec<Formula> = pool.iter().map(|s| Formula::atom(s)).collect();
        for i in 0..n {
            let head = heads.choose(&mut self.rng).expect("heads").clone();
            let len = self.rng.gen_range(0..=2);
            let mut body: Vec<Formula> = Vec::new();
            for _ in 0..len {
                let b = body_pool.choose(&mut self.rng).expect("atoms").clone();
                if b != head && !body.contains(&b) {
                    body.push(b);
                }
            }
            rules.push(Rule::strict(&format!("r{i}"), body, head));
        }
        let assumptions = assumptions.iter().map(|s| Formula::atom(s)).collect();
        (rules, assumptions, contraries)
    }

    /// Defeasible and strict rules over literals of `atoms`, plus facts.
    pub fn aspic(&mut self, atoms: &[String], mode: AspicMode) -> AspicRules {
        let n = self.rng.gen_range(self.rules.clone());
        let mut defeasible = Vec::new();
        let mut strict = Vec::new();
        for i in 0..n {
            let head = self.literal(atoms);
            let len = self.rng.gen_range(0..=2);
            let mut body: Vec<Formula> = (0..len)
                .map(|_| self.literal(atoms))
                .filter(|b| *b != head)
                .collect();
            body.dedup();
            if body.is_empty() {
                body.push(Formula::Top);
            }
            if self.rng.gen_bool(0.75) {
                let value = Some(self.rng.gen_range(self.values.clone()));
                defeasible.push(Rule::defeasible(&format!("d{i}"), body, head, value));
            } else {
                body.retain(|b| *b != Formula::Top);
                strict.push(Rule::strict(&format!("s{i}"), body, head));
            }
        }
        let facts: Vec<Formula> = (0..self.rng.gen_range(0..=2))
            .map(|_| self.literal(atoms))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        AspicRules::new(strict, defeasible, facts, mode)
    }

    /// Random values for `formulas`.
    pub fn priorities(&mut self, formulas: &BTreeSet<Formula>) -> PriorityAssignment {
        let mut pi = PriorityAssignment::default();
        for f in formulas {
            pi.pi
                .insert(f.clone(), self.rng.gen_range(self.values.clone()));
        }
        pi
    }

    /// A random attack relation on `n` nodes.
    pub fn graph(&mut self, n: usize, density: f64) -> Vec<(usize, usize)> {
        let mut edges = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if self.rng.gen_bool(density) {
                    edges.push((a, b));
                }
            }
        }
        edges
    }

    pub fn aba_rules(
        &mut self,
        atoms: &[String],
        tracked: bool,
    ) -> (
        AbaRules,
        BTreeSet<Formula>,
        BTreeMap<Formula, BTreeSet<Formula>>,
    ) {
        let (rules, assumptions, contraries) = self.aba(atoms);
        (AbaRules::new(rules, tracked), assumptions, contraries)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_output() {
        let mut a = KbGenerator::new(7);
        let mut b = KbGenerator::new(7);
        for _ in 0..20 {
            assert_eq!(a.premise_set(), b.premise_set());
        }
        assert_eq!(a.graph(6, 0.3), b.graph(6, 0.3));
    }

    #[test]
    fn depth_cap_respected() {
        let mut g = KbGenerator::new(1).with_depth(2);
        for _ in 0..200 {
            assert!(g.formula().depth() <= 2);
        }
    }

    #[test]
    fn aba_is_flat() {
        let mut g = KbGenerator::new(3);
        let atoms: Vec<String> = ["a", "b", "c", "d"].map(String::from).to_vec();
        for _ in 0..50 {
            let (rules, assumptions, contraries) = g.aba(&atoms);
            assert!(rules.iter().all(|r| !assumptions.contains(&r.head)));
            assert_eq!(contraries.len(), assumptions.len());
        }
    }
}
