//! The diagonal (fixed point) construction, as a checkable computation.
//!
//! For a template `A` with self variable `x = (v h)`:
//!
//! ```text
//! D := A[x := sub(x, h, x)]      d := ⌜D⌝      δ := D[x := d]
//! ```
//!
//! so `δ = A[x := sub(d, h, d)]`, and the term `sub(d, h, d)` evaluates to
//! `⌜δ⌝`. A certificate records each step; replaying it recomputes `D`,
//! `d` and `δ`, evaluates the substitution term and checks that `δ` with
//! that term replaced by its value prints byte-for-byte like
//! `A[x := ⌜δ⌝]`. Other free variables of `A` are parameters and survive
//! into `δ`.

use crate::formula::{
    eval_term, godel_encode, instantiate, print, replace_term, substitute, Formula, Term,
};
use num_bigint::BigUint;
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagonalError {
    #[error("self variable (v {0}) does not occur free in the template")]
    HoleAbsent(u32),
    #[error("parameter (v {0}) does not occur free in the template")]
    ParamAbsent(u32),
    #[error("template has unexpected free variables {0:?}")]
    UnexpectedFree(Vec<u32>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("step `{0}` does not reproduce the recorded value")]
    Mismatch(&'static str),
    #[error("evaluating the diagonal term failed: {0}")]
    Eval(String),
}

/// One step of the construction, as exported in JSON traces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "op", rename_all = "kebab-case")]
pub enum TraceStep {
    Substitute {
        var: u32,
        term: String,
        result_sha256: String,
    },
    Encode {
        bits: u64,
        code_sha256: String,
    },
    Numeral {
        var: u32,
        result_sha256: String,
    },
    Evaluate {
        term_sha256: String,
        value_sha256: String,
    },
}

#[derive(Debug, Clone)]
pub struct FixedPointCertificate {
    pub template: Formula,
    pub hole: u32,
    pub params: Vec<u32>,
    /// `D`, the template with the self variable diagonalized.
    pub core: Formula,
    pub core_code: BigUint,
    /// `sub(d, h, d)`, the term in `result` that evaluates to `⌜result⌝`.
    pub self_term: Term,
    pub result: Formula,
    pub trace: Vec<TraceStep>,
}

fn digest(s: &str) -> String {
    hex::encode(Sha256::digest(s.as_bytes()))
}

fn check_vars(template: &Formula, hole: u32, params: &[u32]) -> Result<(), DiagonalError> {
    let free = template.free_vars();
    if free.binary_search(&hole).is_err() {
        return Err(DiagonalError::HoleAbsent(hole));
    }
    if let Some(&p) = params.iter().find(|p| free.binary_search(p).is_err()) {
        return Err(DiagonalError::ParamAbsent(p));
    }
    let extra: Vec<u32> = free
        .iter()
        .copied()
        .filter(|v| *v != hole && !params.contains(v))
        .collect();
    if !extra.is_empty() {
        return Err(DiagonalError::UnexpectedFree(extra));
    }
    Ok(())
}

fn build(template: &Formula, hole: u32, params: &[u32]) -> FixedPointCertificate {
    let x = Term::free(hole);
    let diag_term = Term::sub(x.clone(), hole, x);
    let core = substitute(template, hole, &diag_term);
    let core_code = godel_encode(&core);
    let d = Term::num(core_code.clone());
    let self_term = Term::sub(d.clone(), hole, d.clone());
    let result = substitute(&core, hole, &d);
    let trace = vec![
        TraceStep::Substitute {
            var: hole,
            term: crate::formula::print_term(&diag_term),
            result_sha256: digest(&print(&core)),
        },
        TraceStep::Encode {
            bits: core_code.bits(),
            code_sha256: digest(&core_code.to_string()),
        },
        TraceStep::Numeral {
            var: hole,
            result_sha256: digest(&print(&result)),
        },
    ];
    FixedPointCertificate {
        template: template.clone(),
        hole,
        params: params.to_vec(),
        core,
        core_code,
        self_term,
        result,
        trace,
    }
}

/// Fixed point of a template whose only free variable is `(v hole)`.
pub fn fixed_point(template: &Formula, hole: u32) -> Result<FixedPointCertificate, DiagonalError> {
    check_vars(template, hole, &[])?;
    Ok(build(template, hole, &[]))
}

/// Fixed point with parameters: `result` keeps the parameter variables
/// free, and the certificate identity holds for every closing instance.
pub fn fixed_point_2var(
    template: &Formula,
    hole: u32,
    params: &[u32],
) -> Result<FixedPointCertificate, DiagonalError> {
    check_vars(template, hole, params)?;
    Ok(build(template, hole, params))
}

/// Outcome of a successful replay.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Replay {
    pub bytes: usize,
    pub sha256: String,
    pub steps: Vec<TraceStep>,
}

impl FixedPointCertificate {
    /// Replays the construction at the given parameter values (numerals for
    /// every parameter; empty for a one-variable fixed point).
    pub fn replay(&self, values: &[(u32, BigUint)]) -> Result<Replay, ReplayError> {
        let fresh = build(&self.template, self.hole, &self.params);
        if fresh.core != self.core {
            return Err(ReplayError::Mismatch("substitute"));
        }
        if fresh.core_code != self.core_code || godel_encode(&self.core) != self.core_code {
            return Err(ReplayError::Mismatch("encode"));
        }
        if fresh.result != self.result
            || substitute(&self.template, self.hole, &self.self_term) != self.result
        {
            return Err(ReplayError::Mismatch("numeral"));
        }
        let value = eval_term(&self.self_term).map_err(|e| ReplayError::Eval(e.to_string()))?;
        if value != godel_encode(&self.result) {
            return Err(ReplayError::Mismatch("evaluate"));
        }
        let c = Term::num(value.clone());
        let lhs = print(&instantiate(
            &substitute(&self.template, self.hole, &c),
            values,
        ));
        let rhs = print(&instantiate(
            &replace_term(&self.result, &self.self_term, &c),
            values,
        ));
        if lhs != rhs {
            return Err(ReplayError::Mismatch("identity"));
        }
        let mut steps = self.trace.clone();
        steps.push(TraceStep::Evaluate {
            term_sha256: digest(&crate::formula::print_term(&self.self_term)),
            value_sha256: digest(&value.to_string()),
        });
        Ok(Replay {
            bytes: lhs.len(),
            sha256: digest(&lhs),
            steps,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    #[test]
    fn godel_sentence() {
        // ¬Pr(x): the sentence coded by x is not provable
        let tpl = parse("(not (pr (hole 0) (v 0)))").unwrap();
        let cert = fixed_point(&tpl, 0).unwrap();
        assert!(cert.result.is_sentence());
        cert.replay(&[]).unwrap();
    }

    #[test]
    fn trivial_equation() {
        let cert = fixed_point(&parse("(= (v 0) (v 0))").unwrap(), 0).unwrap();
        let r = cert.replay(&[]).unwrap();
        let code = godel_encode(&cert.result);
        assert_eq!(r.sha256, digest(&format!("(= (num {code}) (num {code}))")));
    }

    #[test]
    fn variable_errors() {
        let tpl = parse("(= (v 1) (v 1))").unwrap();
        assert_eq!(
            fixed_point(&tpl, 0).unwrap_err(),
            DiagonalError::HoleAbsent(0)
        );
        let tpl = parse("(= (v 0) (v 1))").unwrap();
        assert_eq!(
            fixed_point(&tpl, 0).unwrap_err(),
            DiagonalError::UnexpectedFree(vec![1])
        );
        assert_eq!(
            fixed_point_2var(&tpl, 0, &[2]).unwrap_err(),
            DiagonalError::ParamAbsent(2)
        );
    }

    #[test]
    fn tampering_is_detected() {
        let mut cert = fixed_point(&parse("(le (v 0) (num 7))").unwrap(), 0).unwrap();
        cert.result = parse("(le (num 1) (num 7))").unwrap();
        assert!(cert.replay(&[]).is_err());
    }
}
