//! Classical propositional logic by exhaustive valuation.
//!
//! Every formula is compiled to a truth table over the atoms seen so far by
//! this engine. Rule names, rule literals and ⊕-terms are opaque
//! propositional variables. Tables are kept with at least six variables so
//! that the smallest table is one machine word; a table built before new
//! atoms were interned is widened by repetition when combined.

use std::collections::HashMap;
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::formula::Formula;

pub const ATOM_CAP: usize = 16;
const MIN_VARS: usize = 6;

#[derive(Clone, Debug)]
struct Table {
    vars: usize,
    words: Vec<u64>,
}

impl Table {
    fn words_for(vars: usize) -> usize {
        1 << (vars - MIN_VARS)
    }

    fn constant(vars: usize, value: bool) -> Table {
        let w = if value { u64::MAX } else { 0 };
        Table {
            vars,
            words: vec![w; Self::words_for(vars)],
        }
    }

    fn variable(vars: usize, index: usize) -> Table {
        const LOW: [u64; 6] = [
            0xAAAA_AAAA_AAAA_AAAA,
            0xCCCC_CCCC_CCCC_CCCC,
            0xF0F0_F0F0_F0F0_F0F0,
            0xFF00_FF00_FF00_FF00,
            0xFFFF_0000_FFFF_0000,
            0xFFFF_FFFF_0000_0000,
        ];
        let n = Self::words_for(vars);
        let words = (0..n)
            .map(|w| {
                if index < MIN_VARS {
                    LOW[index]
                } else if (w >> (index - MIN_VARS)) & 1 == 1 {
                    u64::MAX
                } else {
                    0
                }
            })
            .collect();
        Table { vars, words }
    }

    fn widened(&self, vars: usize) -> Table {
        if vars == self.vars {
            return self.clone();
        }
        let n = Self::words_for(vars);
        let words = (0..n).map(|i| self.words[i % self.words.len()]).collect();
        Table { vars, words }
    }

    fn word(&self, i: usize) -> u64 {
        self.words[i % self.words.len()]
    }
}

#[derive(Default)]
struct State {
    atoms: HashMap<Formula, usize>,
    tables: HashMap<Formula, Table>,
}

impl State {
    fn vars(&self) -> usize {
        self.atoms.len().max(MIN_VARS)
    }

    fn intern(&mut self, leaf: &Formula) -> Result<usize> {
        if let Some(&i) = self.atoms.get(leaf) {
            return Ok(i);
        }
        let i = self.atoms.len();
        if i >= ATOM_CAP {
            return Err(Error::AtomCap {
                count: i + 1,
                limit: ATOM_CAP,
            });
        }
        self.atoms.insert(leaf.clone(), i);
        Ok(i)
    }

    fn table(&mut self, f: &Formula) -> Result<Table> {
        if let Some(t) = self.tables.get(f) {
            return Ok(t.clone());
        }
        let t = match f {
            Formula::Top => Table::constant(MIN_VARS, true),
            Formula::Bottom => Table::constant(MIN_VARS, false),
            Formula::Labeled(b, _) => self.table(b)?,
            Formula::Not(a) => {
                let mut t = self.table(a)?;
                t.words.iter_mut().for_each(|w| *w = !*w);
                t
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                let ta = self.table(a)?;
                let tb = self.table(b)?;
                let vars = ta.vars.max(tb.vars);
                let (ta, tb) = (ta.widened(vars), tb.widened(vars));
                let words = ta
                    .words
                    .iter()
                    .zip(&tb.words)
                    .map(|(x, y)| match f {
                        Formula::And(..) => x & y,
                        Formula::Or(..) => x | y,
                        _ => !x | y,
                    })
                    .collect();
                Table { vars, words }
            }
            leaf => {
                let i = self.intern(leaf)?;
                Table::variable(self.vars(), i)
            }
        };
        self.tables.insert(f.clone(), t.clone());
        Ok(t)
    }

    /// Truth table of the conjunction of `fs`, together with `extra` negated
    /// when given.
    fn conjunction<'a>(
        &mut self,
        fs: impl IntoIterator<Item = &'a Formula>,
        negated: Option<&Formula>,
    ) -> Result<Table> {
        let mut parts = Vec::new();
        for f in fs {
            parts.push(self.table(f)?);
        }
        let neg = negated.map(|g| self.table(g)).transpose()?;
        let vars = parts
            .iter()
            .chain(neg.iter())
            .map(|t| t.vars)
            .max()
            .unwrap_or(MIN_VARS);
        let mut acc = Table::constant(vars, true);
        for t in &parts {
            for (i, w) in acc.words.iter_mut().enumerate() {
                *w &= t.word(i);
            }
        }
        if let Some(t) = &neg {
            for (i, w) in acc.words.iter_mut().enumerate() {
                *w &= !t.word(i);
            }
        }
        Ok(acc)
    }
}

/// A truth-table decision procedure with a private formula cache. The cache
/// only memoizes; results never depend on call order.
#[derive(Default)]
pub struct Classical {
    state: Mutex<State>,
}

impl Classical {
    pub fn new() -> Classical {
        Classical::default()
    }

    fn with<R>(&self, f: impl FnOnce(&mut State) -> R) -> R {
        let mut guard = self.state.lock().unwrap_or_else(|e| e.into_inner());
        f(&mut guard)
    }

    /// `Γ ⊢_CL φ`.
    pub fn entails<'a>(
        &self,
        premises: impl IntoIterator<Item = &'a Formula>,
        conclusion: &Formula,
    ) -> Result<bool> {
        self.with(|s| {
            let t = s.conjunction(premises, Some(conclusion))?;
            Ok(t.words.iter().all(|w| *w == 0))
        })
    }

    pub fn satisfiable<'a>(&self, fs: impl IntoIterator<Item = &'a Formula>) -> Result<bool> {
        self.with(|s| {
            let t = s.conjunction(fs, None)?;
            Ok(t.words.iter().any(|w| *w != 0))
        })
    }

    pub fn tautology(&self, f: &Formula) -> Result<bool> {
        self.entails(std::iter::empty(), f)
    }

    pub fn equivalent(&self, a: &Formula, b: &Formula) -> Result<bool> {
        Ok(self.entails([a], b)? && self.entails([b], a)?)
    }

    /// Indices (as bitmasks over `fs`) of the maximal satisfiable subsets.
    pub fn maximal_consistent(&self, fs: &[Formula]) -> Result<Vec<u32>> {
        if fs.len() > 20 {
            return Err(Error::PremiseCap {
                count: fs.len(),
                limit: 20,
            });
        }
        let n = fs.len();
        let sat = self.with(|s| -> Result<Vec<bool>> {
            let tables = fs.iter().map(|f| s.table(f)).collect::<Result<Vec<_>>>()?;
            let vars = tables.iter().map(|t| t.vars).max().unwrap_or(MIN_VARS);
            let mut acc: Vec<Vec<u64>> = Vec::with_capacity(1 << n);
            acc.push(vec![u64::MAX; Table::words_for(vars)]);
            let mut sat = vec![true];
            for mask in 1usize..(1 << n) {
                let low = mask.trailing_zeros() as usize;
                let prev = &acc[mask & (mask - 1)];
                let words: Vec<u64> = prev
                    .iter()
                    .enumerate()
                    .map(|(i, w)| w & tables[low].word(i))
                    .collect();
                sat.push(words.iter().any(|w| *w != 0));
                acc.push(words);
            }
            Ok(sat)
        })?;
        let mut out = Vec::new();
        for mask in 0..(1u32 << n) {
            if !sat[mask as usize] {
                continue;
            }
            let maximal = (0..n).all(|i| mask & (1 << i) != 0 || !sat[(mask | (1 << i)) as usize]);
            if maximal {
                out.push(mask);
            }
        }
        Ok(out)
    }
}

impl std::fmt::Debug for Classical {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("Classical")
    }
}
