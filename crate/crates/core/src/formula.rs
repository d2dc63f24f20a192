//! Formulas of the object language, rules, and syntactic relevance helpers.
//!
//! Formulas are immutable trees with shared subterms. Equality and ordering
//! are structural; `OPlus` argument lists are sorted and deduplicated on
//! construction so that structural equality is canonical.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleKind {
    Strict,
    Defeasible,
}

/// A strict (`->`) or defeasible (`=>`) rule. Defeasible rules may carry a
/// priority value.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rule {
    pub id: Arc<str>,
    pub kind: RuleKind,
    pub body: Vec<Formula>,
    pub head: Formula,
    pub value: Option<u32>,
}

impl Rule {
    pub fn strict(id: &str, body: Vec<Formula>, head: Formula) -> Rule {
        Rule {
            id: id.into(),
            kind: RuleKind::Strict,
            body,
            head,
            value: None,
        }
    }

    pub fn defeasible(id: &str, body: Vec<Formula>, head: Formula, value: Option<u32>) -> Rule {
        Rule {
            id: id.into(),
            kind: RuleKind::Defeasible,
            body,
            head,
            value,
        }
    }

    pub fn is_defeasible(&self) -> bool {
        self.kind == RuleKind::Defeasible
    }

    /// Body formulas that actually need a derivation; `top` is satisfied by
    /// the empty child.
    pub fn premises(&self) -> impl Iterator<Item = &Formula> {
        self.body.iter().filter(|f| !matches!(f, Formula::Top))
    }

    pub fn synthetic_atom(&self) -> String {
        rule_atom(&self.id)
    }

    pub fn literal(self) -> Formula {
        Formula::RuleLit(Arc::new(self))
    }
}

fn rule_atom(id: &str) -> String {
    format!("n({id})")
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Top,
    Bottom,
    Atom(Arc<str>),
    Not(Arc<Formula>),
    And(Arc<Formula>, Arc<Formula>),
    Or(Arc<Formula>, Arc<Formula>),
    Implies(Arc<Formula>, Arc<Formula>),
    /// The name `n(R)` of a defeasible rule.
    RuleName(Arc<str>),
    /// A rule used as a premise-language element.
    RuleLit(Arc<Rule>),
    /// `⊕(Δ)`, nonempty, sorted, deduplicated.
    OPlus(Arc<[Formula]>),
    /// A value-labelled formula; the base is never itself labelled.
    Labeled(Arc<Formula>, u32),
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(name.into())
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Arc::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Arc::new(a), Arc::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Arc::new(a), Arc::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Arc::new(a), Arc::new(b))
    }

    pub fn rule_name(id: &str) -> Formula {
        Formula::RuleName(id.into())
    }

    /// Returns `None` for an empty argument list.
    pub fn oplus<I: IntoIterator<Item = Formula>>(items: I) -> Option<Formula> {
        let set: BTreeSet<Formula> = items.into_iter().collect();
        if set.is_empty() {
            return None;
        }
        Some(Formula::OPlus(set.into_iter().collect::<Vec<_>>().into()))
    }

    /// Labels `f` with `value`, replacing any label already present.
    pub fn labeled(f: Formula, value: u32) -> Formula {
        match f {
            Formula::Labeled(base, _) => Formula::Labeled(base, value),
            other => Formula::Labeled(Arc::new(other), value),
        }
    }

    /// The formula without its label.
    pub fn base(&self) -> &Formula {
        match self {
            Formula::Labeled(b, _) => b,
            other => other,
        }
    }

    pub fn label(&self) -> Option<u32> {
        match self {
            Formula::Labeled(_, v) => Some(*v),
            _ => None,
        }
    }

    /// Left-nested conjunction of the given formulas in canonical order; the
    /// conjunction of a singleton is its element. `None` when empty.
    pub fn conj<'a, I: IntoIterator<Item = &'a Formula>>(items: I) -> Option<Formula> {
        let set: BTreeSet<&Formula> = items.into_iter().collect();
        let mut it = set.into_iter();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, f| Formula::and(acc, f.clone())))
    }

    pub fn negated(&self) -> Formula {
        Formula::not(self.clone())
    }

    /// True for formulas in the classical fragment (no rules, ⊕ or labels).
    pub fn is_classical(&self) -> bool {
        match self {
            Formula::Top | Formula::Bottom | Formula::Atom(_) => true,
            Formula::Not(a) => a.is_classical(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.is_classical() && b.is_classical()
            }
            _ => false,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Not(a) => 1 + a.depth(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                1 + a.depth().max(b.depth())
            }
            Formula::Labeled(b, _) => b.depth(),
            Formula::OPlus(items) => 1 + items.iter().map(Formula::depth).max().unwrap_or(0),
            _ => 0,
        }
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Top | Formula::Bottom => {}
            Formula::Atom(a) => {
                out.insert(a.to_string());
            }
            Formula::Not(a) => a.collect_atoms(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
            Formula::RuleName(id) => {
                out.insert(rule_atom(id));
            }
            Formula::RuleLit(r) => {
                out.insert(r.synthetic_atom());
                for f in r.body.iter().chain(std::iter::once(&r.head)) {
                    f.collect_atoms(out);
                }
            }
            Formula::OPlus(items) => items.iter().for_each(|f| f.collect_atoms(out)),
            Formula::Labeled(b, _) => b.collect_atoms(out),
        }
    }
}

pub fn atoms_of<'a, I: IntoIterator<Item = &'a Formula>>(fs: I) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for f in fs {
        f.collect_atoms(&mut out);
    }
    out
}

/// `S₁ | S₂`: the two sets share no atoms.
pub fn disjoint<'a, I, J>(s1: I, s2: J) -> bool
where
    I: IntoIterator<Item = &'a Formula>,
    J: IntoIterator<Item = &'a Formula>,
{
    let a = atoms_of(s1);
    atoms_of(s2).is_disjoint(&a)
}

// Binding strength used by the renderer and mirrored by the parser.
const PREC_LABEL: u8 = 0;
const PREC_IMPLIES: u8 = 1;
const PREC_OR: u8 = 2;
const PREC_AND: u8 = 3;
const PREC_NOT: u8 = 4;
const PREC_ATOMIC: u8 = 5;

impl Formula {
    fn precedence(&self) -> u8 {
        match self {
            Formula::Labeled(..) => PREC_LABEL,
            Formula::Implies(..) => PREC_IMPLIES,
            Formula::Or(..) => PREC_OR,
            Formula::And(..) => PREC_AND,
            Formula::Not(..) => PREC_NOT,
            _ => PREC_ATOMIC,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            write!(f, "(")?;
            self.fmt_at(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Formula::Top => write!(f, "top"),
            Formula::Bottom => write!(f, "bot"),
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Not(a) => {
                write!(f, "~")?;
                a.fmt_at(f, PREC_NOT)
            }
            Formula::And(a, b) => {
                a.fmt_at(f, PREC_AND)?;
                write!(f, " & ")?;
                b.fmt_at(f, PREC_AND + 1)
            }
            Formula::Or(a, b) => {
                a.fmt_at(f, PREC_OR)?;
                write!(f, " | ")?;
                b.fmt_at(f, PREC_OR + 1)
            }
            Formula::Implies(a, b) => {
                a.fmt_at(f, PREC_IMPLIES + 1)?;
                write!(f, " -> ")?;
                b.fmt_at(f, PREC_IMPLIES)
            }
            Formula::RuleName(id) => write!(f, "n({id})"),
            Formula::RuleLit(r) => write!(f, "{r}"),
            Formula::OPlus(items) => {
                write!(f, "(+")?;
                for it in items.iter() {
                    write!(f, " ")?;
                    it.fmt_at(f, PREC_ATOMIC)?;
                }
                write!(f, ")")
            }
            Formula::Labeled(b, v) => {
                b.fmt_at(f, PREC_IMPLIES)?;
                write!(f, " @ {v}")
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}:", self.id)?;
        for (i, b) in self.body.iter().enumerate() {
            write!(f, "{}{b}", if i == 0 { " " } else { ", " })?;
        }
        let arrow = match self.kind {
            RuleKind::Strict => "->",
            RuleKind::Defeasible => "=>",
        };
        write!(f, " {arrow} {}]", self.head)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::atom("p")
    }
    fn q() -> Formula {
        Formula::atom("q")
    }

    #[test]
    fn atoms_walk_syntax() {
        let f = Formula::and(p(), Formula::not(q()));
        let want: BTreeSet<String> = ["p", "q"].iter().map(|s| s.to_string()).collect();
        assert_eq!(f.atoms(), want);
        assert!(Formula::Top.atoms().is_empty());
        assert_eq!(Formula::labeled(p(), 3).atoms(), p().atoms());
    }

    #[test]
    fn rule_literals_carry_a_synthetic_atom() {
        let r = Rule::defeasible("n0", vec![Formula::Top], p(), None).literal();
        let atoms = r.atoms();
        assert!(atoms.contains("p"));
        assert!(atoms.contains("n(n0)"));
        assert_eq!(Formula::rule_name("n0").atoms().len(), 1);
    }

    #[test]
    fn disjointness() {
        assert!(disjoint(&[p()], &[q()]));
        let r = Formula::atom("r");
        assert!(!disjoint(
            &[Formula::and(p(), q())],
            &[Formula::implies(q(), r)]
        ));
        assert!(disjoint(&[], &[p()]));
    }

    #[test]
    fn oplus_is_sorted_and_deduplicated() {
        let a = Formula::oplus([q(), p(), q()]).unwrap();
        let b = Formula::oplus([p(), q()]).unwrap();
        assert_eq!(a, b);
        assert!(Formula::oplus(Vec::new()).is_none());
        assert_eq!(a.to_string(), "(+ p q)");
    }

    #[test]
    fn labels_never_nest() {
        let l = Formula::labeled(Formula::labeled(p(), 1), 2);
        assert_eq!(l, Formula::Labeled(Arc::new(p()), 2));
        assert_eq!(l.to_string(), "p @ 2");
    }

    #[test]
    fn rendering_uses_minimal_parentheses() {
        let f = Formula::implies(Formula::or(p(), q()), Formula::not(Formula::and(p(), q())));
        assert_eq!(f.to_string(), "p | q -> ~(p & q)");
        let g = Formula::implies(Formula::implies(p(), q()), p());
        assert_eq!(g.to_string(), "(p -> q) -> p");
        let h = Formula::and(p(), Formula::and(q(), p()));
        assert_eq!(h.to_string(), "p & (q & p)");
        let r = Rule::defeasible("n1", vec![Formula::or(p(), q())], Formula::not(p()), None);
        assert_eq!(r.to_string(), "[n1: p | q => ~p]");
    }

    #[test]
    fn conjunction_is_canonical() {
        let c = Formula::conj(&[q(), p()]).unwrap();
        assert_eq!(c, Formula::and(p(), q()));
        assert_eq!(Formula::conj(&[p()]).unwrap(), p());
    }
}
