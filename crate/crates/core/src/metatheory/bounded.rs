//! Exhaustive checks over bounded formula universes, and the brute-force
//! oracle for the canonical-attacker reduction.
//!
//! For classical-family cores a set derives some contrary of `φ` exactly
//! when it derives the canonical contrary, since those cores are closed
//! under classical consequence of the conclusion. The existential sides of
//! the definitions below therefore only look at canonical contraries.

use std::collections::{BTreeSet, HashMap};

use crate::arguments::{build_graph, Setting};
use crate::contrariness::{AttackPointSpec, ContrarinessSpec};
use crate::deduction::{CoreKind, DeducibilityCore};
use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::semantics::{extensions, AttackRelation, Backend, Semantics};

use super::{Counterexample, PropertyReport};

/// Search bounds: formula depth, the largest premise set tried, and the
/// atoms on each side of a split.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub depth: usize,
    pub set_size: usize,
    pub left: Vec<String>,
    pub right: Vec<String>,
}

impl Default for Bounds {
    fn default() -> Bounds {
        Bounds {
            depth: 1,
            set_size: 1,
            left: vec!["p".into(), "q".into()],
            right: vec!["r".into()],
        }
    }
}

impl Bounds {
    fn stamp(&self, report: PropertyReport) -> PropertyReport {
        report
            .bound("depth", self.depth)
            .bound("set-size", self.set_size)
            .bound("left-atoms", self.left.join(" "))
            .bound("right-atoms", self.right.join(" "))
    }

    fn all_atoms(&self) -> Vec<String> {
        self.left.iter().chain(&self.right).cloned().collect()
    }
}

/// Truth table over at most 6 atoms, as a bit per row.
type Table = u64;

struct Tabled {
    formula: Formula,
    table: Table,
    depth: usize,
}

fn tabled_universe(atoms: &[String], depth: usize) -> (Vec<Tabled>, Table) {
    assert!(atoms.len() <= 6, "tabled universes support at most 6 atoms");
    let rows = 1usize << atoms.len();
    let full: Table = if rows == 64 {
        u64::MAX
    } else {
        (1u64 << rows) - 1
    };
    let mut all: Vec<Tabled> = Vec::new();
    for (i, a) in atoms.iter().enumerate() {
        let table = (0..rows)
            .filter(|r| r & (1 << i) != 0)
            .fold(0, |t, r| t | (1u64 << r));
        all.push(Tabled {
            formula: Formula::atom(a),
            table,
            depth: 0,
        });
    }
    all.push(Tabled {
        formula: Formula::Top,
        table: full,
        depth: 0,
    });
    all.push(Tabled {
        formula: Formula::Bottom,
        table: 0,
        depth: 0,
    });
    for d in 1..=depth {
        let prev = all.len();
        let mut next = Vec::new();
        for x in all.iter().filter(|x| x.depth == d - 1) {
            next.push(Tabled {
                formula: Formula::not(x.formula.clone()),
                table: !x.table & full,
                depth: d,
            });
        }
        for x in &all[..prev] {
            for y in &all[..prev] {
                if x.depth != d - 1 && y.depth != d - 1 {
                    continue;
                }
                let (a, b) = (x.formula.clone(), y.formula.clone());
                next.push(Tabled {
                    formula: Formula::and(a.clone(), b.clone()),
                    table: x.table & y.table,
                    depth: d,
                });
                next.push(Tabled {
                    formula: Formula::or(a.clone(), b.clone()),
                    table: x.table | y.table,
                    depth: d,
                });
                next.push(Tabled {
                    formula: Formula::implies(a, b),
                    table: (!x.table | y.table) & full,
                    depth: d,
                });
            }
        }
        all.extend(next);
    }
    (all, full)
}

/// Every formula of depth at most `depth` over `atoms`, `top` and `bot`.
pub fn universe(atoms: &[String], depth: usize) -> Vec<Formula> {
    tabled_universe(atoms, depth)
        .0
        .into_iter()
        .map(|t| t.formula)
        .collect()
}

/// Subsets of `items` with at most `k` elements, smallest first.
fn small_subsets<T: Clone + Ord>(items: &[T], k: usize) -> Vec<BTreeSet<T>> {
    let mut out: Vec<BTreeSet<T>> = vec![BTreeSet::new()];
    let mut frontier = out.clone();
    for _ in 0..k {
        let mut next = Vec::new();
        for s in &frontier {
            let start = s
                .iter()
                .next_back()
                .map_or(0, |last| items.partition_point(|x| x <= last));
            for x in &items[start..] {
                let mut t = s.clone();
                t.insert(x.clone());
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn sorted(mut v: Vec<Formula>) -> Vec<Formula> {
    v.sort();
    v.dedup();
    v
}

fn render(s: &BTreeSet<Formula>) -> String {
    format!(
        "{{{}}}",
        s.iter()
            .map(|f| f.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    )
}

fn need_cl(core: &DeducibilityCore, what: &str) -> Result<()> {
    if core.is_cl_family() {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "{what} is checked for classical-family cores, got {}",
            core.name()
        )))
    }
}

/// Pre-relevance of `⊢`: whenever `S₁ ∪ S₂ ⊢ φ` with `S₁ ∪ {φ}` and `S₂`
/// over disjoint atoms, some `S₁' ⊆ S₁` derives `φ`.
pub fn check_pre_relevance(core: &DeducibilityCore, bounds: &Bounds) -> Result<PropertyReport> {
    need_cl(core, "pre-relevance")?;
    let report = bounds.stamp(PropertyReport::new("pre-relevance"));
    let u1 = sorted(universe(&bounds.left, bounds.depth));
    let u2 = sorted(universe(&bounds.right, bounds.depth));
    let s1s = small_subsets(&u1, bounds.set_size);
    let s2s = small_subsets(&u2, bounds.set_size);
    let mut trials = 0;
    for s1 in &s1s {
        let subs = small_subsets(&s1.iter().cloned().collect::<Vec<_>>(), s1.len());
        for phi in &u1 {
            let mut local: Option<bool> = None;
            for s2 in &s2s {
                trials += 1;
                let union: BTreeSet<Formula> = s1.union(s2).cloned().collect();
                if !core.holds(&union, phi)? {
                    continue;
                }
                let found = match local {
                    Some(v) => v,
                    None => {
                        let mut v = false;
                        for s in &subs {
                            if core.holds(s, phi)? {
                                v = true;
                                break;
                            }
                        }
                        local = Some(v);
                        v
                    }
                };
                if !found {
                    let mut r = report;
                    r.trials = trials;
                    return Ok(r.fail(Counterexample {
                        setting: format!("core={}", core.name()),
                        premise_sets: vec![
                            s1.iter().map(|f| f.to_string()).collect(),
                            s2.iter().map(|f| f.to_string()).collect(),
                        ],
                        formula: Some(phi.to_string()),
                        semantics: None,
                        expected: format!("some subset of {} derives {phi}", render(s1)),
                        actual: format!("only {} derives it", render(&union)),
                    }));
                }
            }
        }
    }
    let mut r = report;
    r.trials = trials;
    Ok(r)
}

/// Primeness: a contrary of a point of `T₁ ∪ T₂` derived from `S₁ ∪ S₂`
/// factors through one side of the atom split.
pub fn check_prime(setting: &Setting, bounds: &Bounds) -> Result<PropertyReport> {
    need_cl(&setting.core, "primeness")?;
    let report = bounds.stamp(PropertyReport::new("prime"));
    let u1 = sorted(universe(&bounds.left, bounds.depth));
    let u2 = sorted(universe(&bounds.right, bounds.depth));
    let sets1 = small_subsets(&u1, bounds.set_size);
    let sets2 = small_subsets(&u2, bounds.set_size);
    let core = &setting.core;
    let c = &setting.contrariness;
    let mut memo: HashMap<(BTreeSet<Formula>, Formula), bool> = HashMap::new();
    let mut holds = |s: &BTreeSet<Formula>, g: &Formula| -> Result<bool> {
        if let Some(&v) = memo.get(&(s.clone(), g.clone())) {
            return Ok(v);
        }
        let v = core.holds(s, g)?;
        memo.insert((s.clone(), g.clone()), v);
        Ok(v)
    };
    // side[i][(S, T)]: some S' ⊆ S derives a contrary of a point of T.
    let mut side = |sets: &Vec<BTreeSet<Formula>>| -> Result<Vec<Vec<bool>>> {
        let mut table = vec![vec![false; sets.len()]; sets.len()];
        for (si, s) in sets.iter().enumerate() {
            let subs = small_subsets(&s.iter().cloned().collect::<Vec<_>>(), s.len());
            for (ti, t) in sets.iter().enumerate() {
                'found: for point in setting.attack_points.points(t) {
                    for k in c.canonical(&point) {
                        for sub in &subs {
                            if holds(sub, &k)? {
                                table[si][ti] = true;
                                break 'found;
                            }
                        }
                    }
                }
            }
        }
        Ok(table)
    };
    let side1 = side(&sets1)?;
    let side2 = side(&sets2)?;
    let mut trials = 0;
    for (i1, s1) in sets1.iter().enumerate() {
        for (i2, s2) in sets2.iter().enumerate() {
            let union: BTreeSet<Formula> = s1.union(s2).cloned().collect();
            for (j1, t1) in sets1.iter().enumerate() {
                for (j2, t2) in sets2.iter().enumerate() {
                    trials += 1;
                    if side1[i1][j1] || side2[i2][j2] {
                        continue;
                    }
                    let targets: BTreeSet<Formula> = t1.union(t2).cloned().collect();
                    for point in setting.attack_points.points(&targets) {
                        for k in c.canonical(&point) {
                            if holds(&union, &k)? {
                                let mut r = report;
                                r.trials = trials;
                                return Ok(r.fail(Counterexample {
                                    setting: super::checks::describe(setting),
                                    premise_sets: [s1, s2, t1, t2]
                                        .iter()
                                        .map(|s| s.iter().map(|f| f.to_string()).collect())
                                        .collect(),
                                    formula: Some(k.to_string()),
                                    semantics: None,
                                    expected:
                                        "a one-sided derivation of a contrary of a one-sided point"
                                            .into(),
                                    actual: format!(
                                        "only S₁ ∪ S₂ derives {k}, a contrary of {point}"
                                    ),
                                }));
                            }
                        }
                    }
                }
            }
        }
    }
    let mut r = report;
    r.trials = trials;
    Ok(r)
}

/// Contraposition: `Θ ⊢ γ'` with `γ' ∈ ‾γ` gives, for each `σ ∈ Θ`, a
/// contrary of `σ` from `(Θ ∪ {γ}) ∖ {σ}`.
pub fn check_contraposition(
    core: &DeducibilityCore,
    contrariness: &ContrarinessSpec,
    bounds: &Bounds,
) -> Result<PropertyReport> {
    need_cl(core, "contraposition")?;
    let report = bounds.stamp(PropertyReport::new("contraposition"));
    let u = sorted(universe(&bounds.all_atoms(), bounds.depth));
    let mut trials = 0;
    for theta in small_subsets(&u, bounds.set_size.max(1) + 1) {
        for gamma in &u {
            trials += 1;
            let mut derives = false;
            for k in contrariness.canonical(gamma) {
                if core.holds(&theta, &k)? {
                    derives = true;
                    break;
                }
            }
            if !derives {
                continue;
            }
            for sigma in &theta {
                let mut rotated = theta.clone();
                rotated.insert(gamma.clone());
                rotated.remove(sigma);
                let mut ok = false;
                for k in contrariness.canonical(sigma) {
                    if core.holds(&rotated, &k)? {
                        ok = true;
                        break;
                    }
                }
                if !ok {
                    let mut r = report;
                    r.trials = trials;
                    return Ok(r.fail(Counterexample {
                        setting: format!("core={}", core.name()),
                        premise_sets: vec![theta.iter().map(|f| f.to_string()).collect()],
                        formula: Some(format!("γ = {gamma}, σ = {sigma}")),
                        semantics: None,
                        expected: format!("{} derives a contrary of {sigma}", render(&rotated)),
                        actual: "no contrary derived".into(),
                    }));
                }
            }
        }
    }
    let mut r = report;
    r.trials = trials;
    Ok(r)
}

/// `^(Γ ∪ Δ) = ^Γ ∪ ^Δ`.
pub fn check_pointed(points: AttackPointSpec, bounds: &Bounds) -> Result<PropertyReport> {
    let report = bounds.stamp(PropertyReport::new("pointed"));
    let u = sorted(universe(&bounds.all_atoms(), bounds.depth));
    let mut sets = small_subsets(&u, bounds.set_size);
    // Atom-only sets first, for the smallest readable witness.
    sets.sort_by_key(|s| s.iter().filter(|f| !matches!(f, Formula::Atom(_))).count());
    let mut trials = 0;
    for g in &sets {
        for d in &sets {
            trials += 1;
            let union: BTreeSet<Formula> = g.union(d).cloned().collect();
            let whole = points.points(&union);
            let parts: BTreeSet<Formula> =
                points.points(g).union(&points.points(d)).cloned().collect();
            if whole != parts {
                let mut r = report;
                r.trials = trials;
                let missing: Vec<String> =
                    whole.difference(&parts).map(|f| f.to_string()).collect();
                return Ok(r.fail(Counterexample {
                    setting: format!("points={points:?}"),
                    premise_sets: vec![
                        g.iter().map(|f| f.to_string()).collect(),
                        d.iter().map(|f| f.to_string()).collect(),
                    ],
                    formula: None,
                    semantics: None,
                    expected: "^(Γ ∪ Δ) = ^Γ ∪ ^Δ".into(),
                    actual: format!("^(Γ ∪ Δ) also has {}", missing.join(", ")),
                }));
            }
        }
    }
    let mut r = report;
    r.trials = trials;
    Ok(r)
}

/// Cut with respect to `⊢^{+φ}`: `Γ ⊢ φ` and `Δ ⊢^{+φ} γ` give `Γ ∪ Δ ⊢ γ`.
pub fn check_cut(core: &DeducibilityCore, bounds: &Bounds) -> Result<PropertyReport> {
    need_cl(core, "Cut")?;
    let report = bounds.stamp(PropertyReport::new("cut"));
    let u = sorted(universe(&bounds.all_atoms(), bounds.depth));
    let sets = small_subsets(&u, bounds.set_size);
    let mut trials = 0;
    for phi in &u {
        let plus = core.extend_with_axiom(phi);
        let gammas: Vec<&BTreeSet<Formula>> = {
            let mut v = Vec::new();
            for g in &sets {
                if core.holds(g, phi)? {
                    v.push(g);
                }
            }
            v
        };
        if gammas.is_empty() {
            continue;
        }
        for delta in &sets {
            for goal in &u {
                if !plus.holds(delta, goal)? {
                    continue;
                }
                for g in &gammas {
                    trials += 1;
                    let union: BTreeSet<Formula> = g.union(delta).cloned().collect();
                    if !core.holds(&union, goal)? {
                        let mut r = report;
                        r.trials = trials;
                        return Ok(r.fail(Counterexample {
                            setting: format!("core={}", core.name()),
                            premise_sets: vec![
                                g.iter().map(|f| f.to_string()).collect(),
                                delta.iter().map(|f| f.to_string()).collect(),
                            ],
                            formula: Some(format!("φ = {phi}, γ = {goal}")),
                            semantics: None,
                            expected: format!("{} derives {goal}", render(&union)),
                            actual: "not derived".into(),
                        }));
                    }
                }
            }
        }
    }
    let mut r = report;
    r.trials = trials;
    Ok(r)
}

/// Compares the one-step reading of `⊢^{+φ}` with one extra round of
/// chaining through an intermediate conclusion. A fail means the one-step
/// reading is not closed within the bounds.
pub fn check_closure_probe(core: &DeducibilityCore, bounds: &Bounds) -> Result<PropertyReport> {
    need_cl(core, "the closure probe")?;
    let report = bounds.stamp(PropertyReport::new("closure-probe"));
    let u = sorted(universe(&bounds.all_atoms(), bounds.depth));
    let sets = small_subsets(&u, bounds.set_size);
    let mut trials = 0;
    for phi in &u {
        let plus = core.extend_with_axiom(phi);
        let mut memo: HashMap<(BTreeSet<Formula>, Formula), bool> = HashMap::new();
        let mut h = |s: &BTreeSet<Formula>, g: &Formula| -> Result<bool> {
            if let Some(&v) = memo.get(&(s.clone(), g.clone())) {
                return Ok(v);
            }
            let v = plus.holds(s, g)?;
            memo.insert((s.clone(), g.clone()), v);
            Ok(v)
        };
        for gamma in &sets {
            let splits = small_subsets(&gamma.iter().cloned().collect::<Vec<_>>(), gamma.len());
            for psi in &u {
                trials += 1;
                if h(gamma, psi)? {
                    continue;
                }
                for g1 in &splits {
                    for chi in &u {
                        if !h(g1, chi)? {
                            continue;
                        }
                        // Γ₂ ranges over the sets with Γ₁ ∪ Γ₂ = Γ; the
                        // complement is the smallest.
                        let mut g2: BTreeSet<Formula> = gamma.difference(g1).cloned().collect();
                        g2.insert(chi.clone());
                        if h(&g2, psi)? {
                            let mut r = report;
                            r.trials = trials;
                            return Ok(r.fail(Counterexample {
                                setting: format!("core={}", core.name()),
                                premise_sets: vec![gamma.iter().map(|f| f.to_string()).collect()],
                                formula: Some(format!("φ = {phi}, ψ = {psi}, via {chi}")),
                                semantics: None,
                                expected: format!("one-step {} ⊢+φ {psi}", render(gamma)),
                                actual: "derivable only by chaining".into(),
                            }));
                        }
                    }
                }
            }
        }
    }
    let mut r = report;
    r.trials = trials;
    Ok(r)
}

// ---------------------------------------------------------------------------
// Canonical-attacker reduction oracle.

#[derive(Clone, Copy)]
enum OracleCore {
    Cl,
    ClTop,
    McsCap,
    McsCup,
}

fn eval(f: &Formula, index: &HashMap<String, usize>, full: Table) -> Result<Table> {
    Ok(match f {
        Formula::Top => full,
        Formula::Bottom => 0,
        Formula::Atom(a) => {
            let i = index[&**a];
            (0..full.count_ones() as usize)
                .filter(|r| r & (1 << i) != 0)
                .fold(0, |t, r| t | (1u64 << r))
                & full
        }
        Formula::Not(a) => !eval(a, index, full)? & full,
        Formula::And(a, b) => eval(a, index, full)? & eval(b, index, full)?,
        Formula::Or(a, b) => eval(a, index, full)? | eval(b, index, full)?,
        Formula::Implies(a, b) => (!eval(a, index, full)? | eval(b, index, full)?) & full,
        other => {
            return Err(Error::Config(format!(
                "the oracle handles classical formulas only, got {other}"
            )))
        }
    })
}

/// Classical consequence of the conjunction `table` under an oracle core,
/// with the premises' tables given for the maximal-consistent-subset cores.
fn oracle_holds(core: OracleCore, parts: &[Table], full: Table, goal: Table) -> bool {
    let conj = parts.iter().fold(full, |t, p| t & p);
    match core {
        OracleCore::Cl => conj & !goal == 0,
        OracleCore::ClTop => conj != 0 && conj & !goal == 0,
        OracleCore::McsCap | OracleCore::McsCup => {
            let n = parts.len();
            let sat = |m: usize| {
                (0..n)
                    .filter(|i| m & (1 << i) != 0)
                    .fold(full, |t, i| t & parts[i])
                    != 0
            };
            let maximal: Vec<usize> = (0..1usize << n)
                .filter(|&m| sat(m) && (0..n).all(|i| m & (1 << i) != 0 || !sat(m | (1 << i))))
                .collect();
            let entails = |m: usize| {
                let t = (0..n)
                    .filter(|i| m & (1 << i) != 0)
                    .fold(full, |t, i| t & parts[i]);
                t & !goal == 0
            };
            if matches!(core, OracleCore::McsCap) {
                maximal.iter().all(|&m| entails(m))
            } else {
                maximal.iter().any(|&m| entails(m))
            }
        }
    }
}

/// Skeptical entailment of `query` for each of `sems`, computed twice: on
/// the engine's reduced graph, and on the graph of all arguments whose
/// conclusion lies in the depth-`depth` universe over the premise atoms
/// (plus the canonical attackers and the query). Arguments with the same
/// support, the same attack profile and the same query status are merged,
/// which preserves complete extensions up to the merge. Returns
/// `(engine, oracle)` per semantics.
pub fn reduction_oracle(
    setting: &Setting,
    premises: &BTreeSet<Formula>,
    query: &Formula,
    sems: &[Semantics],
    depth: usize,
) -> Result<Vec<(bool, bool)>> {
    let core = match (&setting.core.kind, setting.core.axioms.is_empty()) {
        (CoreKind::Cl, true) => OracleCore::Cl,
        (CoreKind::ClTop, true) => OracleCore::ClTop,
        (CoreKind::McsCap, true) => OracleCore::McsCap,
        (CoreKind::McsCup, true) => OracleCore::McsCup,
        _ => {
            return Err(Error::Config(
                "the reduction oracle covers unwrapped classical cores".into(),
            ))
        }
    };
    let mut atoms: BTreeSet<String> = query.atoms();
    for p in premises {
        atoms.extend(p.atoms());
    }
    let atoms: Vec<String> = atoms.into_iter().collect();
    if atoms.len() > 5 || premises.len() > 6 {
        return Err(Error::Precondition(
            "the oracle takes at most 5 atoms and 6 premises".into(),
        ));
    }
    let index: HashMap<String, usize> = atoms
        .iter()
        .enumerate()
        .map(|(i, a)| (a.clone(), i))
        .collect();
    let (tabled, full) = tabled_universe(&atoms, depth);

    let items: Vec<Formula> = premises.iter().cloned().collect();
    let n = items.len();
    let tables: Vec<Table> = items
        .iter()
        .map(|f| eval(f, &index, full))
        .collect::<Result<_>>()?;
    let supports: Vec<BTreeSet<Formula>> = (0..1usize << n)
        .map(|m| {
            (0..n)
                .filter(|i| m & (1 << i) != 0)
                .map(|i| items[i].clone())
                .collect()
        })
        .collect();
    let point_sets: Vec<BTreeSet<Formula>> = supports
        .iter()
        .map(|s| setting.attack_points.points(s))
        .collect();
    let points: Vec<Formula> = point_sets
        .iter()
        .flatten()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if points.len() > 64 {
        return Err(Error::Precondition(
            "too many attack points for the oracle".into(),
        ));
    }
    let point_tables: Vec<Table> = points
        .iter()
        .map(|f| eval(f, &index, full))
        .collect::<Result<_>>()?;
    let point_mask = |s: &BTreeSet<Formula>| -> u64 {
        points
            .iter()
            .enumerate()
            .filter(|(_, p)| s.contains(*p))
            .fold(0, |m, (i, _)| m | (1u64 << i))
    };
    let support_points: Vec<u64> = point_sets.iter().map(point_mask).collect();

    let mut candidates: Vec<(Formula, Table)> =
        tabled.into_iter().map(|t| (t.formula, t.table)).collect();
    for p in &points {
        for k in setting.contrariness.canonical(p) {
            let t = eval(&k, &index, full)?;
            candidates.push((k, t));
        }
    }
    candidates.push((query.clone(), eval(query, &index, full)?));

    let syntactic: HashMap<&Formula, u64> = {
        let mut m: HashMap<&Formula, u64> = HashMap::new();
        // Contraries of each point, for the syntactic kinds.
        let mut owned: Vec<(Formula, usize)> = Vec::new();
        for (i, p) in points.iter().enumerate() {
            match &setting.contrariness {
                ContrarinessSpec::Neg => owned.push((Formula::not(p.clone()), i)),
                ContrarinessSpec::NegCanonical => match p {
                    Formula::Not(inner) => owned.push(((**inner).clone(), i)),
                    _ => owned.push((Formula::not(p.clone()), i)),
                },
                _ => {}
            }
        }
        for (f, i) in &owned {
            if let Some((c, _)) = candidates.iter().find(|(c, _)| c == f) {
                *m.entry(c).or_insert(0) |= 1u64 << i;
            }
        }
        m
    };
    let profile = |f: &Formula, t: Table| -> Result<u64> {
        Ok(match &setting.contrariness {
            ContrarinessSpec::Neg | ContrarinessSpec::NegCanonical => {
                syntactic.get(f).copied().unwrap_or(0)
            }
            ContrarinessSpec::EntailNeg => point_tables
                .iter()
                .enumerate()
                .filter(|(_, pt)| t & **pt == 0)
                .fold(0, |m, (i, _)| m | (1u64 << i)),
            ContrarinessSpec::EquivNeg => point_tables
                .iter()
                .enumerate()
                .filter(|(_, pt)| t == !**pt & full)
                .fold(0, |m, (i, _)| m | (1u64 << i)),
            _ => {
                return Err(Error::Config(
                    "the oracle covers the negation-based contrariness kinds".into(),
                ))
            }
        })
    };
    let profiled: Vec<(Table, u64, bool)> = candidates
        .iter()
        .map(|(f, t)| Ok((*t, profile(f, *t)?, f == query)))
        .collect::<Result<_>>()?;

    // Nodes: (support index, attack profile, concludes the query).
    let mut nodes: BTreeSet<(usize, u64, bool)> = BTreeSet::new();
    for (si, _) in supports.iter().enumerate() {
        let parts: Vec<Table> = (0..n)
            .filter(|i| si & (1 << i) != 0)
            .map(|i| tables[i])
            .collect();
        let mut seen: HashMap<Table, bool> = HashMap::new();
        for &(t, prof, is_query) in &profiled {
            if prof == 0 && !is_query {
                continue;
            }
            let derivable = *seen
                .entry(t)
                .or_insert_with(|| oracle_holds(core, &parts, full, t));
            if derivable {
                nodes.insert((si, prof, is_query));
            }
        }
    }
    let nodes: Vec<(usize, u64, bool)> = nodes.into_iter().collect();
    let mut edges = Vec::new();
    for (a, &(_, prof, _)) in nodes.iter().enumerate() {
        for (b, &(sb, _, _)) in nodes.iter().enumerate() {
            if prof & support_points[sb] != 0 {
                edges.push((a, b));
            }
        }
    }
    let oracle_rel = AttackRelation::new(nodes.len(), &edges);

    let queries: BTreeSet<Formula> = [query.clone()].into_iter().collect();
    let graph = build_graph(setting, premises, &queries)?;
    let rel = graph.relation();
    let mut out = Vec::new();
    for &sem in sems {
        let engine = extensions(&rel, sem, Backend::Auto)?.iter().all(|e| {
            e.members
                .iter()
                .any(|&i| graph.arguments[i].conclusion == *query)
        });
        let oracle = extensions(&oracle_rel, sem, Backend::Labelling)?
            .iter()
            .all(|e| e.members.iter().any(|&i| nodes[i].2));
        out.push((engine, oracle));
    }
    Ok(out)
}
