//! Propositional satisfiability for box-free formulas.

use crate::modal::{ModalFormula, ModalKind};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SatResult {
    /// A model, given as the set of atoms assigned true.
    Satisfiable(BTreeSet<String>),
    Unsatisfiable,
}

impl SatResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SatResult::Satisfiable(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SatError {
    #[error("formula contains a box; abstract boxes first")]
    ContainsBox,
}

/// Replaces every outermost `□A` by a fresh atom named after it, so that
/// equal boxed subformulas become the same atom.
pub fn abstract_boxes(f: &ModalFormula) -> ModalFormula {
    fn go(f: &ModalFormula, memo: &mut HashMap<u64, ModalFormula>) -> ModalFormula {
        if let Some(r) = memo.get(&f.id()) {
            return r.clone();
        }
        use ModalKind::*;
        let r = match f.kind() {
            Atom(_) | Top | Bot => f.clone(),
            Box(_) => ModalFormula::atom(&format!("[{f}]")),
            Not(a) => ModalFormula::not(go(a, memo)),
            And(a, b) => ModalFormula::and(go(a, memo), go(b, memo)),
            Or(a, b) => ModalFormula::or(go(a, memo), go(b, memo)),
            Imp(a, b) => ModalFormula::imp(go(a, memo), go(b, memo)),
        };
        memo.insert(f.id(), r.clone());
        r
    }
    go(f, &mut HashMap::new())
}

/// Signed-formula tableau with an explicit partial assignment.
fn branch(
    mut pending: Vec<(ModalFormula, bool)>,
    mut assign: BTreeMap<String, bool>,
) -> Option<BTreeMap<String, bool>> {
    while let Some((f, sign)) = pending.pop() {
        use ModalKind::*;
        match (f.kind(), sign) {
            (Atom(a), s) => match assign.get(&**a) {
                Some(&v) if v != s => return None,
                Some(_) => {}
                None => {
                    assign.insert(a.to_string(), s);
                }
            },
            (Top, false) | (Bot, true) => return None,
            (Top, true) | (Bot, false) => {}
            (Not(a), s) => pending.push((a.clone(), !s)),
            (And(a, b), true) => {
                pending.push((b.clone(), true));
                pending.push((a.clone(), true));
            }
            (Or(a, b), false) => {
                pending.push((b.clone(), false));
                pending.push((a.clone(), false));
            }
            (Imp(a, b), false) => {
                pending.push((b.clone(), false));
                pending.push((a.clone(), true));
            }
            (And(a, b), false) | (Or(a, b), true) | (Imp(a, b), true) => {
                let (left, right) = match (f.kind(), sign) {
                    (And(..), _) => ((a.clone(), false), (b.clone(), false)),
                    (Or(..), _) => ((a.clone(), true), (b.clone(), true)),
                    _ => ((a.clone(), false), (b.clone(), true)),
                };
                let mut first = pending.clone();
                first.push(left);
                if let Some(m) = branch(first, assign.clone()) {
                    return Some(m);
                }
                pending.push(right);
            }
            (Box(_), _) => unreachable!("checked box-free"),
        }
    }
    Some(assign)
}

/// Satisfiability of a box-free formula, with a witnessing assignment.
pub fn sat_check(f: &ModalFormula) -> Result<SatResult, SatError> {
    if !f.is_box_free() {
        return Err(SatError::ContainsBox);
    }
    Ok(match branch(vec![(f.clone(), true)], BTreeMap::new()) {
        Some(m) => {
            SatResult::Satisfiable(m.into_iter().filter(|(_, v)| *v).map(|(k, _)| k).collect())
        }
        None => SatResult::Unsatisfiable,
    })
}

fn eval(f: &ModalFormula, truth: &BTreeSet<String>) -> bool {
    use ModalKind::*;
    match f.kind() {
        Atom(a) => truth.contains(&**a),
        Top => true,
        Bot => false,
        Not(a) => !eval(a, truth),
        And(a, b) => eval(a, truth) && eval(b, truth),
        Or(a, b) => eval(a, truth) || eval(b, truth),
        Imp(a, b) => !eval(a, truth) || eval(b, truth),
        Box(_) => unreachable!("checked box-free"),
    }
}

/// Exhaustive truth-table satisfiability; exponential, for cross-checks.
pub fn truth_table_sat(f: &ModalFormula) -> Result<bool, SatError> {
    if !f.is_box_free() {
        return Err(SatError::ContainsBox);
    }
    let atoms: Vec<String> = f.atoms().into_iter().map(|a| a.to_string()).collect();
    assert!(atoms.len() < 24, "truth table too large");
    Ok((0u32..1 << atoms.len()).any(|mask| {
        let truth = atoms
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, a)| a.clone())
            .collect();
        eval(f, &truth)
    }))
}

/// Whether an assignment satisfies a box-free formula.
pub fn satisfies(f: &ModalFormula, truth: &BTreeSet<String>) -> bool {
    eval(f, truth)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modal::parse_modal;

    fn sat(s: &str) -> bool {
        sat_check(&parse_modal(s).unwrap()).unwrap().is_sat()
    }

    #[test]
    fn basic_cases() {
        assert!(!sat("a & ~a"));
        assert!(!sat("(a & b) & (a & ~b)"));
        assert!(sat("a | ~a"));
        assert!(sat("(a -> b) & a"));
    }

    #[test]
    fn models_satisfy() {
        let f = parse_modal("(a | b) & (~a | c) & ~c").unwrap();
        match sat_check(&f).unwrap() {
            SatResult::Satisfiable(m) => assert!(satisfies(&f, &m)),
            SatResult::Unsatisfiable => panic!("satisfiable"),
        }
    }

    #[test]
    fn boxes_must_be_abstracted() {
        let f = parse_modal("box a & ~box a").unwrap();
        assert_eq!(sat_check(&f), Err(SatError::ContainsBox));
        assert!(!sat_check(&abstract_boxes(&f)).unwrap().is_sat());
    }
}
