//! Abstraction of arithmetic sentences to modal formulas.
//!
//! `Pr_T(⌜ψ⌝)` becomes `□ skeleton(ψ)`; boolean structure is kept; every
//! other atomic or quantified subsentence becomes a propositional atom.
//! Atoms are named `a0, a1, ...` in order of first encounter and are shared
//! across all calls on the same [`Skeleton`], so equal subsentences of
//! different inputs map to the same atom.

use super::eval::{eval_sentence, TruthValue};
use super::{Formula, FormulaKind};
use crate::modal::ModalFormula;
use std::collections::HashMap;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SkeletonOptions {
    /// Replace closed subsentences that the standard-model evaluator decides
    /// (no provability/membership atoms, bounded quantifiers only) by `T`/`F`.
    pub decide_closed: bool,
}

#[derive(Debug, Default)]
pub struct Skeleton {
    options: SkeletonOptions,
    atoms: Vec<(String, Formula)>,
    by_formula: HashMap<Formula, usize>,
    memo: HashMap<Formula, ModalFormula>,
}

impl Skeleton {
    pub fn new(options: SkeletonOptions) -> Self {
        Skeleton {
            options,
            ..Default::default()
        }
    }

    /// The atom table: name and the subsentence it stands for.
    pub fn atoms(&self) -> &[(String, Formula)] {
        &self.atoms
    }

    /// The subsentence abstracted by a given atom name.
    pub fn atom_meaning(&self, name: &str) -> Option<&Formula> {
        self.atoms.iter().find(|(n, _)| n == name).map(|(_, f)| f)
    }

    fn atom(&mut self, f: &Formula) -> ModalFormula {
        if self.options.decide_closed && f.is_sentence() {
            match eval_sentence(f) {
                Ok(TruthValue::True) => return ModalFormula::top(),
                Ok(TruthValue::False) => return ModalFormula::bot(),
                Err(_) => {}
            }
        }
        let k = match self.by_formula.get(f) {
            Some(&k) => k,
            None => {
                let k = self.atoms.len();
                self.atoms.push((format!("a{k}"), f.clone()));
                self.by_formula.insert(f.clone(), k);
                k
            }
        };
        ModalFormula::atom(&self.atoms[k].0)
    }

    pub fn map(&mut self, f: &Formula) -> ModalFormula {
        if let Some(m) = self.memo.get(f) {
            return m.clone();
        }
        use FormulaKind::*;
        let m = match f.kind() {
            Top => ModalFormula::top(),
            Bot => ModalFormula::bot(),
            Not(a) => ModalFormula::not(self.map(a)),
            And(a, b) => {
                let a = self.map(a);
                ModalFormula::and(a, self.map(b))
            }
            Or(a, b) => {
                let a = self.map(a);
                ModalFormula::or(a, self.map(b))
            }
            Imp(a, b) => {
                let a = self.map(a);
                ModalFormula::imp(a, self.map(b))
            }
            Provable(tpl, args) if args.is_empty() => ModalFormula::boxed(self.map(tpl)),
            _ => self.atom(f),
        };
        self.memo.insert(f.clone(), m.clone());
        m
    }
}

/// Skeleton of a single sentence in a fresh context.
pub fn skeleton(f: &Formula) -> ModalFormula {
    Skeleton::default().map(f)
}
