//! Dung semantics over finite attack relations and skeptical consequence.

mod enumerate;
mod labelling;

use std::collections::BTreeSet;

use serde::Serialize;

use crate::arguments::{build_graph, AttackGraph, Setting};
use crate::error::{Error, Result};
use crate::formula::Formula;

pub use enumerate::ENUMERATION_CAP;

/// Node counts up to this use the enumeration backend under `Backend::Auto`.
pub const AUTO_THRESHOLD: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AttackRelation {
    pub n: usize,
    /// `attackers[b]`: the sorted attackers of `b`.
    pub attackers: Vec<Vec<usize>>,
    /// `targets[a]`: the sorted targets of `a`.
    pub targets: Vec<Vec<usize>>,
}

impl AttackRelation {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> AttackRelation {
        let mut attackers = vec![Vec::new(); n];
        let mut targets = vec![Vec::new(); n];
        for &(a, b) in edges {
            attackers[b].push(a);
            targets[a].push(b);
        }
        for v in attackers.iter_mut().chain(targets.iter_mut()) {
            v.sort_unstable();
            v.dedup();
        }
        AttackRelation {
            n,
            attackers,
            targets,
        }
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (a, ts) in self.targets.iter().enumerate() {
            out.extend(ts.iter().map(|&b| (a, b)));
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Semantics {
    Adm,
    Cmp,
    Grd,
    Prf,
    Stb,
}

impl Semantics {
    pub fn name(self) -> &'static str {
        match self {
            Semantics::Adm => "adm",
            Semantics::Cmp => "cmp",
            Semantics::Grd => "grd",
            Semantics::Prf => "prf",
            Semantics::Stb => "stb",
        }
    }

    pub fn parse(s: &str) -> Option<Semantics> {
        Some(match s {
            "adm" => Semantics::Adm,
            "cmp" => Semantics::Cmp,
            "grd" => Semantics::Grd,
            "prf" => Semantics::Prf,
            "stb" => Semantics::Stb,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Extension {
    pub members: BTreeSet<usize>,
    pub semantics: Semantics,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    Enumerate,
    Labelling,
    Auto,
}

pub fn conflict_free(rel: &AttackRelation, ids: &BTreeSet<usize>) -> bool {
    ids.iter()
        .all(|&b| rel.attackers[b].iter().all(|a| !ids.contains(a)))
}

pub fn defends(rel: &AttackRelation, ids: &BTreeSet<usize>, a: usize) -> bool {
    rel.attackers[a]
        .iter()
        .all(|&b| rel.attackers[b].iter().any(|c| ids.contains(c)))
}

/// All arguments defended by `ids`.
pub fn defended_closure(rel: &AttackRelation, ids: &BTreeSet<usize>) -> BTreeSet<usize> {
    (0..rel.n).filter(|&a| defends(rel, ids, a)).collect()
}

pub fn admissible(rel: &AttackRelation, ids: &BTreeSet<usize>) -> bool {
    conflict_free(rel, ids) && ids.iter().all(|&a| defends(rel, ids, a))
}

pub fn complete(rel: &AttackRelation, ids: &BTreeSet<usize>) -> bool {
    conflict_free(rel, ids) && defended_closure(rel, ids) == *ids
}

pub fn stable(rel: &AttackRelation, ids: &BTreeSet<usize>) -> bool {
    conflict_free(rel, ids)
        && (0..rel.n)
            .filter(|a| !ids.contains(a))
            .all(|a| rel.attackers[a].iter().any(|b| ids.contains(b)))
}

/// Least fixpoint of the defense function.
pub fn grounded(rel: &AttackRelation) -> Extension {
    let mut current = BTreeSet::new();
    loop {
        let next = defended_closure(rel, &current);
        if next == current {
            return Extension {
                members: current,
                semantics: Semantics::Grd,
            };
        }
        current = next;
    }
}

fn pick(rel: &AttackRelation, backend: Backend) -> Result<Backend> {
    match backend {
        Backend::Auto if rel.n <= AUTO_THRESHOLD => Ok(Backend::Enumerate),
        Backend::Auto => Ok(Backend::Labelling),
        Backend::Enumerate if rel.n > ENUMERATION_CAP => Err(Error::NodeCap {
            count: rel.n,
            limit: ENUMERATION_CAP,
        }),
        b => Ok(b),
    }
}

fn tagged(sets: Vec<BTreeSet<usize>>, semantics: Semantics) -> Vec<Extension> {
    let mut out: Vec<Extension> = sets
        .into_iter()
        .map(|members| Extension { members, semantics })
        .collect();
    out.sort();
    out.dedup();
    out
}

fn maximal(sets: &[BTreeSet<usize>]) -> Vec<BTreeSet<usize>> {
    sets.iter()
        .filter(|s| !sets.iter().any(|t| t.len() > s.len() && s.is_subset(t)))
        .cloned()
        .collect()
}

pub fn complete_all(rel: &AttackRelation, backend: Backend) -> Result<Vec<Extension>> {
    let sets = match pick(rel, backend)? {
        Backend::Labelling => labelling::complete_sets(rel),
        _ => enumerate::complete_sets(rel),
    };
    Ok(tagged(sets, Semantics::Cmp))
}

pub fn admissible_all(rel: &AttackRelation) -> Result<Vec<Extension>> {
    if rel.n > ENUMERATION_CAP {
        return Err(Error::NodeCap {
            count: rel.n,
            limit: ENUMERATION_CAP,
        });
    }
    Ok(tagged(enumerate::admissible_sets(rel), Semantics::Adm))
}

pub fn preferred_all(rel: &AttackRelation, backend: Backend) -> Result<Vec<Extension>> {
    let cmp: Vec<BTreeSet<usize>> = complete_all(rel, backend)?
        .into_iter()
        .map(|e| e.members)
        .collect();
    Ok(tagged(maximal(&cmp), Semantics::Prf))
}

pub fn stable_all(rel: &AttackRelation, backend: Backend) -> Result<Vec<Extension>> {
    let sets = match pick(rel, backend)? {
        Backend::Labelling => labelling::complete_sets(rel)
            .into_iter()
            .filter(|s| stable(rel, s))
            .collect(),
        _ => enumerate::stable_sets(rel),
    };
    Ok(tagged(sets, Semantics::Stb))
}

pub fn extensions(
    rel: &AttackRelation,
    sem: Semantics,
    backend: Backend,
) -> Result<Vec<Extension>> {
    match sem {
        Semantics::Adm => admissible_all(rel),
        Semantics::Cmp => complete_all(rel, backend),
        Semantics::Grd => Ok(vec![grounded(rel)]),
        Semantics::Prf => preferred_all(rel, backend),
        Semantics::Stb => stable_all(rel, backend),
    }
}

/// Outcome of a skeptical query.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Entailment {
    pub holds: bool,
    /// True when the extension family is empty and `holds` is vacuous.
    pub vacuous: bool,
    /// Per extension, some member concluding the query.
    pub witnesses: Vec<Option<usize>>,
}

/// `S ⊨_Sem φ` on a built graph: every extension has a member concluding `φ`.
pub fn entails_on_graph(graph: &AttackGraph, phi: &Formula, sem: Semantics) -> Result<Entailment> {
    let rel = graph.relation();
    let answer = |sem| -> Result<Entailment> {
        let exts = extensions(&rel, sem, Backend::Auto)?;
        let witnesses: Vec<Option<usize>> = exts
            .iter()
            .map(|e| {
                e.members
                    .iter()
                    .copied()
                    .find(|&i| graph.arguments[i].conclusion == *phi)
            })
            .collect();
        Ok(Entailment {
            holds: witnesses.iter().all(Option::is_some),
            vacuous: exts.is_empty(),
            witnesses,
        })
    };
    let out = answer(sem)?;
    if sem == Semantics::Cmp {
        let grd = answer(Semantics::Grd)?;
        if grd.holds != out.holds {
            return Err(Error::Invariant(format!(
                "complete and grounded consequence disagree on {phi}"
            )));
        }
    }
    Ok(out)
}

pub fn skeptical_entails(
    setting: &Setting,
    premises: &BTreeSet<Formula>,
    phi: &Formula,
    sem: Semantics,
) -> Result<Entailment> {
    let queries: BTreeSet<Formula> = [phi.clone()].into_iter().collect();
    let graph = build_graph(setting, premises, &queries)?;
    entails_on_graph(&graph, phi, sem)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(n: usize, edges: &[(usize, usize)]) -> AttackRelation {
        AttackRelation::new(n, edges)
    }

    fn ids(v: &[usize]) -> BTreeSet<usize> {
        v.iter().copied().collect()
    }

    fn family(exts: Vec<Extension>) -> Vec<Vec<usize>> {
        exts.into_iter()
            .map(|e| e.members.into_iter().collect())
            .collect()
    }

    #[test]
    fn conflict_freeness() {
        assert!(conflict_free(&rel(2, &[]), &ids(&[0, 1])));
        assert!(!conflict_free(&rel(2, &[(0, 1)]), &ids(&[0, 1])));
        assert!(!conflict_free(&rel(1, &[(0, 0)]), &ids(&[0])));
    }

    #[test]
    fn defense() {
        assert!(defends(&rel(1, &[]), &ids(&[]), 0));
        // c=2 -> b=1 -> a=0
        let chain = rel(3, &[(2, 1), (1, 0)]);
        assert!(defends(&chain, &ids(&[2]), 0));
        assert!(!defends(&rel(2, &[(1, 0)]), &ids(&[]), 0));
    }

    #[test]
    fn grounded_examples() {
        assert_eq!(grounded(&rel(3, &[])).members, ids(&[0, 1, 2]));
        assert!(grounded(&rel(2, &[(0, 1), (1, 0)])).members.is_empty());
        assert_eq!(grounded(&rel(3, &[(2, 1), (1, 0)])).members, ids(&[0, 2]));
    }

    #[test]
    fn defended_closure_examples() {
        assert_eq!(defended_closure(&rel(2, &[]), &ids(&[])), ids(&[0, 1]));
        assert_eq!(defended_closure(&rel(2, &[(1, 0)]), &ids(&[])), ids(&[1]));
        let chain = rel(3, &[(2, 1), (1, 0)]);
        assert_eq!(defended_closure(&chain, &ids(&[2])), ids(&[0, 2]));
    }

    #[test]
    fn two_cycle_families() {
        let r = rel(2, &[(0, 1), (1, 0)]);
        for b in [Backend::Enumerate, Backend::Labelling] {
            assert_eq!(
                family(complete_all(&r, b).unwrap()),
                vec![vec![], vec![0], vec![1]]
            );
            assert_eq!(
                family(preferred_all(&r, b).unwrap()),
                vec![vec![0], vec![1]]
            );
            assert_eq!(family(stable_all(&r, b).unwrap()), vec![vec![0], vec![1]]);
        }
    }

    #[test]
    fn edgeless_single_extension() {
        let r = rel(3, &[]);
        for sem in [
            Semantics::Cmp,
            Semantics::Grd,
            Semantics::Prf,
            Semantics::Stb,
        ] {
            assert_eq!(
                family(extensions(&r, sem, Backend::Auto).unwrap()),
                vec![vec![0, 1, 2]]
            );
        }
    }

    #[test]
    fn odd_cycle_has_no_stable_extension() {
        let r = rel(3, &[(0, 1), (1, 2), (2, 0)]);
        assert!(stable_all(&r, Backend::Enumerate).unwrap().is_empty());
        assert!(stable_all(&r, Backend::Labelling).unwrap().is_empty());
        assert_eq!(
            family(preferred_all(&r, Backend::Auto).unwrap()),
            vec![Vec::<usize>::new()]
        );
    }

    #[test]
    fn enumeration_cap() {
        let r = rel(ENUMERATION_CAP + 1, &[]);
        assert!(matches!(
            complete_all(&r, Backend::Enumerate),
            Err(Error::NodeCap { .. })
        ));
        assert_eq!(complete_all(&r, Backend::Auto).unwrap().len(), 1);
    }
}
