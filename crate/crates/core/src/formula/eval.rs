//! Standard-model evaluation of closed terms and decidable sentences.

use super::godel::{godel_decode, godel_encode};
use super::subst::substitute;
use super::{Formula, FormulaKind, Term, TermKind, MAX_EXP2_BITS};
use crate::ordinals::evaluate_atom;
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use thiserror::Error;

/// Largest bound for which a bounded quantifier is evaluated by enumeration.
pub const MAX_BOUNDED_RANGE: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("not decidable at desk scale: {0}")]
    Undecidable(String),
    #[error("value too large: {0}")]
    Overflow(String),
    #[error("free variable (v {0})")]
    FreeVariable(u32),
    #[error("sub applied to a non-code: {0}")]
    NotACode(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TruthValue {
    True,
    False,
}

impl From<bool> for TruthValue {
    fn from(b: bool) -> Self {
        if b {
            TruthValue::True
        } else {
            TruthValue::False
        }
    }
}

fn term_value(t: &Term, env: &[BigUint]) -> Result<BigUint, EvalError> {
    Ok(match t.kind() {
        TermKind::Num(n) => n.clone(),
        TermKind::Free(i) => return Err(EvalError::FreeVariable(*i)),
        TermKind::Bound(i) => env[env.len() - 1 - *i as usize].clone(),
        TermKind::Succ(a) => term_value(a, env)? + 1u32,
        TermKind::Plus(a, b) => term_value(a, env)? + term_value(b, env)?,
        TermKind::Times(a, b) => term_value(a, env)? * term_value(b, env)?,
        TermKind::Exp2(a) => {
            let k = term_value(a, env)?;
            match k.to_u64() {
                Some(k) if k < MAX_EXP2_BITS => BigUint::one() << k,
                _ => return Err(EvalError::Overflow(format!("2^{k}"))),
            }
        }
        TermKind::Sub(code, var, value) => {
            let code = term_value(code, env)?;
            let value = term_value(value, env)?;
            let f = godel_decode(&code).map_err(|e| EvalError::NotACode(e.to_string()))?;
            godel_encode(&substitute(&f, *var, &Term::num(value)))
        }
    })
}

/// Value of a closed term in the standard model.
pub fn eval_term(t: &Term) -> Result<BigUint, EvalError> {
    if t.info().loose > 0 {
        return Err(EvalError::Undecidable("loose bound variable".into()));
    }
    if let Some(&v) = t.info().free.first() {
        return Err(EvalError::FreeVariable(v));
    }
    term_value(t, &[])
}

fn holds(f: &Formula, env: &mut Vec<BigUint>) -> Result<bool, EvalError> {
    use FormulaKind::*;
    Ok(match f.kind() {
        Top => true,
        Bot => false,
        Eq(a, b) => term_value(a, env)? == term_value(b, env)?,
        Le(a, b) => term_value(a, env)? <= term_value(b, env)?,
        Decidable(atom, ts) => {
            let args = ts
                .iter()
                .map(|t| term_value(t, env))
                .collect::<Result<Vec<_>, _>>()?;
            evaluate_atom(*atom, &args)
        }
        Provable(..) => return Err(EvalError::Undecidable("provability atom".into())),
        Member(name, _) => return Err(EvalError::Undecidable(format!("membership atom `{name}`"))),
        Hole(_) => return Err(EvalError::Undecidable("template hole".into())),
        Not(a) => !holds(a, env)?,
        And(a, b) => holds(a, env)? && holds(b, env)?,
        Or(a, b) => holds(a, env)? || holds(b, env)?,
        Imp(a, b) => !holds(a, env)? || holds(b, env)?,
        Forall(_) | Exists(_) => return Err(EvalError::Undecidable("unbounded quantifier".into())),
        BoundedForall(t, body) | BoundedExists(t, body) => {
            let bound = term_value(t, env)?;
            let bound = bound
                .to_u64()
                .filter(|b| *b < MAX_BOUNDED_RANGE)
                .ok_or_else(|| EvalError::Overflow(format!("quantifier bound {bound}")))?;
            let universal = matches!(f.kind(), BoundedForall(..));
            let mut result = universal;
            for x in 0..=bound {
                env.push(BigUint::from(x));
                let h = holds(body, env);
                env.pop();
                if h? != universal {
                    result = !universal;
                    break;
                }
            }
            result
        }
    })
}

/// Truth of a decidable sentence: no provability or membership atoms and
/// only bounded quantifiers.
pub fn eval_sentence(f: &Formula) -> Result<TruthValue, EvalError> {
    if let Some(&v) = f.info().free.first() {
        return Err(EvalError::FreeVariable(v));
    }
    holds(f, &mut Vec::new()).map(TruthValue::from)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse, parse_term};

    #[test]
    fn arithmetic() {
        let t = parse_term("(+ (* (num 3) (num 4)) (e2 (num 5)))").unwrap();
        assert_eq!(eval_term(&t).unwrap(), BigUint::from(44u32));
    }

    #[test]
    fn sentences() {
        assert_eq!(
            eval_sentence(&parse("(= (z) (z))").unwrap()),
            Ok(TruthValue::True)
        );
        assert_eq!(
            eval_sentence(&parse("(= (z) (s (z)))").unwrap()),
            Ok(TruthValue::False)
        );
        let bounded = parse("(ball x (num 10) (le x (num 10)))").unwrap();
        assert_eq!(eval_sentence(&bounded), Ok(TruthValue::True));
        let witness = parse("(bex x (num 10) (= (* x x) (num 49)))").unwrap();
        assert_eq!(eval_sentence(&witness), Ok(TruthValue::True));
    }

    #[test]
    fn undecidable_parts_are_reported() {
        assert!(matches!(
            eval_sentence(&parse("(pr (top))").unwrap()),
            Err(EvalError::Undecidable(_))
        ));
        assert!(matches!(
            eval_sentence(&parse("(forall x (= x x))").unwrap()),
            Err(EvalError::Undecidable(_))
        ));
    }

    #[test]
    fn sub_evaluates_through_codes() {
        let open = parse("(= (v 0) (v 0))").unwrap();
        let code = godel_encode(&open);
        let t = Term::sub(Term::num(code), 0, Term::num(7u32));
        let expected = godel_encode(&parse("(= (num 7) (num 7))").unwrap());
        assert_eq!(eval_term(&t).unwrap(), expected);
    }
}
