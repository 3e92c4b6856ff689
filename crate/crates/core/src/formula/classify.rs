//! Arithmetical hierarchy classification.

use super::{Formula, FormulaKind};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Sigma,
    Pi,
    Delta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ComplexityClass {
    pub level: u32,
    pub side: Side,
}

impl ComplexityClass {
    pub const DELTA0: ComplexityClass = ComplexityClass {
        level: 0,
        side: Side::Delta,
    };

    pub fn sigma(level: u32) -> Self {
        ComplexityClass {
            level,
            side: Side::Sigma,
        }
    }

    pub fn pi(level: u32) -> Self {
        ComplexityClass {
            level,
            side: Side::Pi,
        }
    }
}

impl fmt::Display for ComplexityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.side {
            Side::Sigma => "Sigma",
            Side::Pi => "Pi",
            Side::Delta => "Delta",
        };
        write!(f, "{s}_{}", self.level)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("formula has free variables {0:?}")]
    FreeVariables(Vec<u32>),
    #[error("formula has unfilled template holes")]
    Holes,
}

/// Least `n` with the formula in Σn, resp. Πn. Bounded quantifiers do not
/// raise the level; provability and membership atoms are Σ1.
#[derive(Clone, Copy)]
struct Levels {
    sigma: u32,
    pi: u32,
}

// Conservative: a body with any loose index counts as using the binder.
fn uses_index0(f: &Formula) -> bool {
    f.info().loose > 0
}

fn levels(f: &Formula, memo: &mut HashMap<u64, Levels>) -> Levels {
    if let Some(l) = memo.get(&f.id()) {
        return *l;
    }
    use FormulaKind::*;
    let l = match f.kind() {
        Top | Bot | Eq(..) | Le(..) | Decidable(..) | Hole(_) => Levels { sigma: 0, pi: 0 },
        Provable(..) | Member(..) => Levels { sigma: 1, pi: 2 },
        Not(a) => {
            let a = levels(a, memo);
            Levels {
                sigma: a.pi,
                pi: a.sigma,
            }
        }
        And(a, b) | Or(a, b) => {
            let (a, b) = (levels(a, memo), levels(b, memo));
            Levels {
                sigma: a.sigma.max(b.sigma),
                pi: a.pi.max(b.pi),
            }
        }
        Imp(a, b) => {
            let (a, b) = (levels(a, memo), levels(b, memo));
            Levels {
                sigma: a.pi.max(b.sigma),
                pi: a.sigma.max(b.pi),
            }
        }
        Forall(a) => {
            let a_l = levels(a, memo);
            if !uses_index0(a) {
                a_l
            } else {
                let pi = a_l.pi.max(1);
                Levels { sigma: pi + 1, pi }
            }
        }
        Exists(a) => {
            let a_l = levels(a, memo);
            if !uses_index0(a) {
                a_l
            } else {
                let sigma = a_l.sigma.max(1);
                Levels {
                    sigma,
                    pi: sigma + 1,
                }
            }
        }
        BoundedForall(_, a) | BoundedExists(_, a) => levels(a, memo),
    };
    memo.insert(f.id(), l);
    l
}

/// Classifies a sentence in the bounded-quantifier-aware Σ/Π hierarchy.
pub fn classify(f: &Formula) -> Result<ComplexityClass, ClassifyError> {
    if !f.info().free.is_empty() {
        return Err(ClassifyError::FreeVariables(f.info().free.to_vec()));
    }
    if f.info().holes > 0 {
        return Err(ClassifyError::Holes);
    }
    let l = levels(f, &mut HashMap::new());
    Ok(match l.sigma.cmp(&l.pi) {
        _ if l.sigma == 0 || l.pi == 0 => ComplexityClass::DELTA0,
        std::cmp::Ordering::Less => ComplexityClass::sigma(l.sigma),
        std::cmp::Ordering::Greater => ComplexityClass::pi(l.pi),
        std::cmp::Ordering::Equal => ComplexityClass {
            level: l.sigma,
            side: Side::Delta,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    #[test]
    fn consistency_is_pi1() {
        let f = parse("(not (pr (not (= (z) (z)))))").unwrap();
        assert_eq!(classify(&f).unwrap(), ComplexityClass::pi(1));
    }

    #[test]
    fn closed_equation_is_delta0() {
        assert_eq!(
            classify(&parse("(= (z) (z))").unwrap()).unwrap(),
            ComplexityClass::DELTA0
        );
    }

    #[test]
    fn provability_is_sigma1() {
        assert_eq!(
            classify(&parse("(pr (bot))").unwrap()).unwrap(),
            ComplexityClass::sigma(1)
        );
    }

    #[test]
    fn leading_universal_keeps_pi_level() {
        let f = parse("(forall x (not (pr (not (hole 0)) x)))").unwrap();
        assert_eq!(classify(&f).unwrap(), ComplexityClass::pi(1));
        let g = parse("(forall y (forall x (not (pr (not (hole 0)) (+ x y)))))").unwrap();
        assert_eq!(classify(&g).unwrap(), ComplexityClass::pi(1));
        let vacuous = parse("(forall y (pr (bot)))").unwrap();
        assert_eq!(classify(&vacuous).unwrap(), ComplexityClass::sigma(1));
    }

    #[test]
    fn bounded_quantifiers_do_not_count() {
        let f = parse("(ball x (num 9) (le x (num 9)))").unwrap();
        assert_eq!(classify(&f).unwrap(), ComplexityClass::DELTA0);
        let g = parse("(forall y (exists x (le y x)))").unwrap();
        assert_eq!(classify(&g).unwrap(), ComplexityClass::pi(2));
    }

    #[test]
    fn open_formulas_are_rejected() {
        assert!(classify(&parse("(= (v 0) (z))").unwrap()).is_err());
    }
}
