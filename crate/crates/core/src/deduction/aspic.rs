//! Deduction trees for ASPIC-style rule systems.
//!
//! Trees are built bottom-up in rounds, round `k` producing every tree of
//! height at most `k`. A tree is summarized by the defeasible rules, tracked
//! strict rules and premises it uses; the support of an argument is a
//! function of that summary, so trees with equal summaries collapse.
//!
//! Intermediate nodes range over a finite pool: rule heads and bodies,
//! premises and axioms. In ddagger mode strict steps come from classical
//! logic: a step from at most `max_arity` pool formulas to `ψ` is admitted
//! when they classically entail `ψ`, and a tautology is a zero-child step.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use crate::classical::Classical;
use crate::error::Result;
use crate::formula::{Formula, Rule};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AspicMode {
    /// Domain strict rules, tracked in supports.
    Dagger,
    /// Strict rules generated by classical logic, untracked.
    Ddagger,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Premise(usize),
    Axiom,
    Rule(Arc<Rule>),
    Classical,
}

/// One deduction tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tree {
    pub conclusion: Formula,
    pub step: Step,
    pub children: Vec<Arc<Tree>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Summary {
    defeasible: BTreeSet<usize>,
    strict: BTreeSet<usize>,
    facts: BTreeSet<usize>,
}

impl Summary {
    fn merge(&mut self, other: &Summary) {
        self.defeasible.extend(other.defeasible.iter().copied());
        self.strict.extend(other.strict.iter().copied());
        self.facts.extend(other.facts.iter().copied());
    }
}

type Found = BTreeMap<Summary, Arc<Tree>>;

const COMBINATION_LIMIT: usize = 50_000;

struct Derivations {
    pool: Vec<Formula>,
    index: HashMap<Formula, usize>,
    found: Vec<Found>,
    incomplete: bool,
}

/// A derivation with its support and one witness tree.
#[derive(Clone, Debug)]
pub struct AspicArgument {
    pub support: BTreeSet<Formula>,
    pub tree: Arc<Tree>,
}

#[derive(Debug)]
pub struct AspicRules {
    pub strict: Vec<Arc<Rule>>,
    pub defeasible: Vec<Arc<Rule>>,
    pub facts: Vec<Formula>,
    pub mode: AspicMode,
    pub max_arity: usize,
    pub depth: usize,
    cache: Mutex<HashMap<Vec<Formula>, Arc<Derivations>>>,
}

impl PartialEq for AspicRules {
    fn eq(&self, other: &Self) -> bool {
        self.strict == other.strict
            && self.defeasible == other.defeasible
            && self.facts == other.facts
            && self.mode == other.mode
            && self.max_arity == other.max_arity
            && self.depth == other.depth
    }
}

impl std::fmt::Debug for Derivations {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Derivations({} pool formulas)", self.pool.len())
    }
}

impl AspicRules {
    pub fn new(
        strict: Vec<Rule>,
        defeasible: Vec<Rule>,
        facts: Vec<Formula>,
        mode: AspicMode,
    ) -> AspicRules {
        let depth = defeasible.len() + strict.len() + 3;
        AspicRules {
            strict: strict.into_iter().map(Arc::new).collect(),
            defeasible: defeasible.into_iter().map(Arc::new).collect(),
            facts,
            mode,
            max_arity: 2,
            depth,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn with_limits(mut self, max_arity: usize, depth: usize) -> AspicRules {
        self.max_arity = max_arity;
        self.depth = depth;
        self
    }

    /// The premise-language element `→ ψ` standing for the `i`-th premise.
    pub fn fact_literal(&self, i: usize) -> Formula {
        Rule::strict(&format!("_p{i}"), Vec::new(), self.facts[i].clone()).literal()
    }

    /// The premise set `S` of the representation: each defeasible rule, its
    /// name and its head, each premise as `→ ψ`, and in dagger mode each
    /// strict rule.
    pub fn premise_set(&self) -> BTreeSet<Formula> {
        let mut s = BTreeSet::new();
        for r in &self.defeasible {
            s.insert(Formula::RuleLit(r.clone()));
            s.insert(Formula::RuleName(r.id.clone()));
            s.insert(r.head.clone());
        }
        for i in 0..self.facts.len() {
            s.insert(self.fact_literal(i));
        }
        if self.mode == AspicMode::Dagger {
            for r in &self.strict {
                s.insert(Formula::RuleLit(r.clone()));
            }
        }
        s
    }

    fn rules(&self) -> impl Iterator<Item = (bool, usize, &Arc<Rule>)> {
        self.defeasible
            .iter()
            .enumerate()
            .map(|(i, r)| (true, i, r))
            .chain(self.strict.iter().enumerate().map(|(i, r)| (false, i, r)))
    }

    fn pool(&self, axioms: &BTreeSet<Formula>) -> Vec<Formula> {
        let mut pool = BTreeSet::new();
        for (_, _, r) in self.rules() {
            pool.insert(r.head.clone());
            pool.extend(r.premises().cloned());
        }
        pool.extend(self.facts.iter().cloned());
        pool.extend(axioms.iter().cloned());
        pool.into_iter().collect()
    }

    fn support_of(&self, s: &Summary) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        for &i in &s.defeasible {
            let r = &self.defeasible[i];
            out.insert(Formula::RuleLit(r.clone()));
            out.insert(Formula::RuleName(r.id.clone()));
            out.insert(r.head.clone());
        }
        for &i in &s.strict {
            out.insert(Formula::RuleLit(self.strict[i].clone()));
        }
        for &j in &s.facts {
            out.insert(self.fact_literal(j));
        }
        out
    }

    fn base(&self, axioms: &BTreeSet<Formula>, cl: &Classical) -> Result<Arc<Derivations>> {
        let key: Vec<Formula> = axioms.iter().cloned().collect();
        if let Some(d) = self
            .cache
            .lock()
            .unwrap_or_else(|e| e.into_inner())
            .get(&key)
        {
            return Ok(d.clone());
        }
        let d = Arc::new(self.compute(axioms, cl)?);
        self.cache
            .lock()
            .unwrap_or_else(|e| e.into_inner())
            .insert(key, d.clone());
        Ok(d)
    }

    fn classical_steps(
        &self,
        target: &Formula,
        pool: &[Formula],
        cl: &Classical,
    ) -> Result<Vec<Vec<usize>>> {
        let mut out = Vec::new();
        if self.mode != AspicMode::Ddagger {
            return Ok(out);
        }
        let candidates: Vec<usize> = (0..pool.len()).filter(|&i| pool[i] != *target).collect();
        let mut tuple = Vec::new();
        self.tuples(&candidates, 0, &mut tuple, &mut |t| {
            let fs = t.iter().map(|&i| &pool[i]);
            if cl.entails(fs, target)? {
                out.push(t.to_vec());
            }
            Ok(())
        })?;
        Ok(out)
    }

    fn tuples(
        &self,
        candidates: &[usize],
        from: usize,
        tuple: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]) -> Result<()>,
    ) -> Result<()> {
        if !tuple.is_empty() {
            visit(tuple)?;
        }
        if tuple.len() == self.max_arity {
            return Ok(());
        }
        for k in from..candidates.len() {
            tuple.push(candidates[k]);
            self.tuples(candidates, k + 1, tuple, visit)?;
            tuple.pop();
        }
        Ok(())
    }

    fn compute(&self, axioms: &BTreeSet<Formula>, cl: &Classical) -> Result<Derivations> {
        let pool = self.pool(axioms);
        let index: HashMap<Formula, usize> = pool
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, f)| (f, i))
            .collect();
        let mut steps = Vec::with_capacity(pool.len());
        let mut tautology = Vec::with_capacity(pool.len());
        for f in &pool {
            steps.push(self.classical_steps(f, &pool, cl)?);
            tautology.push(self.mode == AspicMode::Ddagger && cl.tautology(f)?);
        }
        let mut found: Vec<Found> = vec![Found::new(); pool.len()];
        let mut incomplete = false;
        for round in 0..=self.depth {
            let mut next = found.clone();
            let mut changed = false;
            for t in 0..pool.len() {
                let mut fresh = Vec::new();
                incomplete |= self.step_candidates(
                    &pool[t],
                    &index,
                    &found,
                    axioms,
                    tautology[t],
                    &steps[t],
                    &mut fresh,
                );
                for (s, tree) in fresh {
                    if let std::collections::btree_map::Entry::Vacant(e) = next[t].entry(s) {
                        e.insert(tree);
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
            if round == self.depth {
                incomplete = true;
                break;
            }
            found = next;
        }
        Ok(Derivations {
            pool,
            index,
            found,
            incomplete,
        })
    }

    /// Trees for `target` whose subtrees come from `found`. Returns true when
    /// the combination limit cut the enumeration short.
    #[allow(clippy::too_many_arguments)]
    fn step_candidates(
        &self,
        target: &Formula,
        index: &HashMap<Formula, usize>,
        found: &[Found],
        axioms: &BTreeSet<Formula>,
        tautology: bool,
        steps: &[Vec<usize>],
        out: &mut Vec<(Summary, Arc<Tree>)>,
    ) -> bool {
        let leaf = |step: Step, summary: Summary| {
            (
                summary,
                Arc::new(Tree {
                    conclusion: target.clone(),
                    step,
                    children: Vec::new(),
                }),
            )
        };
        for (j, f) in self.facts.iter().enumerate() {
            if f == target {
                let mut s = Summary::default();
                s.facts.insert(j);
                out.push(leaf(Step::Premise(j), s));
            }
        }
        if axioms.contains(target) {
            out.push(leaf(Step::Axiom, Summary::default()));
        }
        if tautology {
            out.push(leaf(Step::Classical, Summary::default()));
        }
        let mut truncated = false;
        for (defeasible, i, r) in self.rules() {
            if r.head != *target {
                continue;
            }
            let children: Option<Vec<usize>> =
                r.premises().map(|b| index.get(b).copied()).collect();
            let Some(children) = children else { continue };
            let mut own = Summary::default();
            if defeasible {
                own.defeasible.insert(i);
            } else if self.mode == AspicMode::Dagger {
                own.strict.insert(i);
            }
            truncated |= combine(&children, found, &own, target, Step::Rule(r.clone()), out);
        }
        for tuple in steps {
            truncated |= combine(
                tuple,
                found,
                &Summary::default(),
                target,
                Step::Classical,
                out,
            );
        }
        truncated
    }

    /// Every derivation of `goal` from the premises and `axioms`, one per
    /// support, plus whether the search was cut short.
    pub fn derivations(
        &self,
        goal: &Formula,
        axioms: &BTreeSet<Formula>,
        cl: &Classical,
    ) -> Result<(Vec<AspicArgument>, bool)> {
        let base = self.base(axioms, cl)?;
        let mut incomplete = base.incomplete;
        let found: Vec<(Summary, Arc<Tree>)> = match base.index.get(goal) {
            Some(&i) => base.found[i]
                .iter()
                .map(|(s, t)| (s.clone(), t.clone()))
                .collect(),
            None => {
                let steps = self.classical_steps(goal, &base.pool, cl)?;
                let taut = self.mode == AspicMode::Ddagger && cl.tautology(goal)?;
                let mut fresh = Vec::new();
                incomplete |= self.step_candidates(
                    goal,
                    &base.index,
                    &base.found,
                    axioms,
                    taut,
                    &steps,
                    &mut fresh,
                );
                let mut dedup = Found::new();
                for (s, t) in fresh {
                    dedup.entry(s).or_insert(t);
                }
                dedup.into_iter().collect()
            }
        };
        let mut by_support: BTreeMap<BTreeSet<Formula>, Arc<Tree>> = BTreeMap::new();
        for (s, t) in found {
            by_support.entry(self.support_of(&s)).or_insert(t);
        }
        let args = by_support
            .into_iter()
            .map(|(support, tree)| AspicArgument { support, tree })
            .collect();
        Ok((args, incomplete))
    }

    pub fn holds(
        &self,
        support: &BTreeSet<Formula>,
        goal: &Formula,
        axioms: &BTreeSet<Formula>,
        cl: &Classical,
    ) -> Result<bool> {
        let (args, _) = self.derivations(goal, axioms, cl)?;
        Ok(args.iter().any(|a| a.support == *support))
    }

    /// Formulas that can be concluded at all: the pool.
    pub fn conclusion_pool(&self, axioms: &BTreeSet<Formula>) -> BTreeSet<Formula> {
        self.pool(axioms).into_iter().collect()
    }
}

fn combine(
    children: &[usize],
    found: &[Found],
    own: &Summary,
    target: &Formula,
    step: Step,
    out: &mut Vec<(Summary, Arc<Tree>)>,
) -> bool {
    if children.iter().any(|&c| found[c].is_empty()) {
        return false;
    }
    let lists: Vec<Vec<(&Summary, &Arc<Tree>)>> = children
        .iter()
        .map(|&c| found[c].iter().collect())
        .collect();
    let mut count = 0usize;
    let mut idx = vec![0usize; lists.len()];
    loop {
        if count >= COMBINATION_LIMIT {
            return true;
        }
        let mut s = own.clone();
        let mut kids = Vec::with_capacity(lists.len());
        for (k, l) in lists.iter().enumerate() {
            let (cs, ct) = l[idx[k]];
            s.merge(cs);
            kids.push(ct.clone());
        }
        out.push((
            s,
            Arc::new(Tree {
                conclusion: target.clone(),
                step: step.clone(),
                children: kids,
            }),
        ));
        count += 1;
        let mut k = 0;
        loop {
            if k == lists.len() {
                return false;
            }
            idx[k] += 1;
            if idx[k] < lists[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(n: &str) -> Formula {
        Formula::atom(n)
    }

    fn makinson() -> AspicRules {
        let n0 = Rule::defeasible("n0", vec![Formula::Top], a("p"), None);
        let n1 = Rule::defeasible(
            "n1",
            vec![Formula::or(a("p"), a("q"))],
            a("p").negated(),
            None,
        );
        AspicRules::new(Vec::new(), vec![n0, n1], Vec::new(), AspicMode::Ddagger)
    }

    fn sa(fw: &AspicRules) -> BTreeSet<Formula> {
        let r = &fw.defeasible[0];
        [
            Formula::RuleLit(r.clone()),
            Formula::rule_name("n0"),
            a("p"),
        ]
        .into_iter()
        .collect()
    }

    #[test]
    fn single_default_gives_its_own_support() {
        let fw = makinson();
        let cl = Classical::new();
        let (args, incomplete) = fw.derivations(&a("p"), &BTreeSet::new(), &cl).unwrap();
        assert!(!incomplete);
        assert!(args.iter().any(|x| x.support == sa(&fw)));
    }

    #[test]
    fn classical_steps_add_nothing_to_supports() {
        let fw = makinson();
        let cl = Classical::new();
        let pq = Formula::or(a("p"), a("q"));
        assert!(fw.holds(&sa(&fw), &pq, &BTreeSet::new(), &cl).unwrap());
    }

    #[test]
    fn axiom_is_a_free_leaf() {
        let fw = makinson();
        let cl = Classical::new();
        let pq = Formula::or(a("p"), a("q"));
        let axioms: BTreeSet<Formula> = [pq].into_iter().collect();
        let r = &fw.defeasible[1];
        let sc: BTreeSet<Formula> = [
            Formula::RuleLit(r.clone()),
            Formula::rule_name("n1"),
            a("p").negated(),
        ]
        .into_iter()
        .collect();
        assert!(fw.holds(&sc, &a("p").negated(), &axioms, &cl).unwrap());
        assert!(!fw
            .holds(&sc, &a("p").negated(), &BTreeSet::new(), &cl)
            .unwrap());
    }

    #[test]
    fn no_rules_no_arguments() {
        let fw = AspicRules::new(Vec::new(), Vec::new(), Vec::new(), AspicMode::Dagger);
        let cl = Classical::new();
        let (args, _) = fw.derivations(&a("p"), &BTreeSet::new(), &cl).unwrap();
        assert!(args.is_empty());
    }

    #[test]
    fn dagger_mode_tracks_strict_rules() {
        let s = Rule::strict("s1", vec![a("p")], a("q"));
        let d = Rule::defeasible("d1", vec![], a("p"), None);
        let fw = AspicRules::new(vec![s], vec![d], Vec::new(), AspicMode::Dagger);
        let cl = Classical::new();
        let (args, _) = fw.derivations(&a("q"), &BTreeSet::new(), &cl).unwrap();
        assert_eq!(args.len(), 1);
        assert!(args[0]
            .support
            .contains(&Formula::RuleLit(fw.strict[0].clone())));
        assert_eq!(args[0].support.len(), 4);
    }

    #[test]
    fn premises_are_tracked_as_rule_elements() {
        let d = Rule::defeasible("d1", vec![a("p")], a("q"), None);
        let fw = AspicRules::new(Vec::new(), vec![d], vec![a("p")], AspicMode::Dagger);
        let cl = Classical::new();
        let (args, _) = fw.derivations(&a("q"), &BTreeSet::new(), &cl).unwrap();
        assert_eq!(args.len(), 1);
        assert!(args[0].support.contains(&fw.fact_literal(0)));
    }
}
