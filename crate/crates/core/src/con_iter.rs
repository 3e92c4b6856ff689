//! Iterated consistency `Con^α(φ)`.
//!
//! `Con⋆(a, p)` is the fixed point of
//!
//! ```text
//! ∀b ((ord-d b ∧ ord-lt b a) → ¬Pr(¬(H0 ∧ H1); p, sub(sub(x, 1, b), 2, p)))
//! ```
//!
//! with self variable `x = (v 0)`, ordinal code `a = (v 1)` and sentence
//! code `p = (v 2)`: the provability atom reads "φ ∧ Con⋆(β, φ) is
//! refutable", so `Con⋆(α, φ) ↔ ∀β≺α Con(φ ∧ Con⋆(β, φ))`. `con_iter`
//! instantiates `a` and `p` with numerals; for finite α, `unfold_finite`
//! writes out the same recursion explicitly.

use crate::diagonal::{fixed_point_2var, FixedPointCertificate};
use crate::formula::{
    eval_term, fill_holes, godel_decode, godel_encode, instantiate, open_binder, skeleton,
    substitute, DecidableAtom, Formula, FormulaKind, Skeleton, Term,
};
use crate::gl::{entailment, gl_prove};
use crate::modal::ModalFormula;
use crate::ordinals::OrdNotation;
use crate::verdict::{Verdict, Witness};
use num_bigint::BigUint;
use std::collections::BTreeMap;
use std::sync::OnceLock;
use thiserror::Error;

pub const SELF_VAR: u32 = 0;
pub const ALPHA_VAR: u32 = 1;
pub const PHI_VAR: u32 = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConIterError {
    #[error("base formula is not a sentence")]
    NotASentence,
    #[error("ordinal {0} is not finite")]
    NotFinite(String),
    #[error("cannot unfold: {0}")]
    Unfold(String),
}

/// The open template `A(x, a, p)`.
pub fn con_star_template() -> Formula {
    let b = Term::bound(0);
    let guard = Formula::and(
        Formula::decidable(DecidableAtom::OrdWellFormed, vec![b.clone()]),
        Formula::decidable(
            DecidableAtom::OrdLess,
            vec![b.clone(), Term::free(ALPHA_VAR)],
        ),
    );
    let inner = Term::sub(
        Term::sub(Term::free(SELF_VAR), ALPHA_VAR, b),
        PHI_VAR,
        Term::free(PHI_VAR),
    );
    let tpl = Formula::not(Formula::and(Formula::hole(0), Formula::hole(1)));
    let body = Formula::imp(
        guard,
        Formula::not(Formula::provable(tpl, vec![Term::free(PHI_VAR), inner])),
    );
    Formula::forall(body)
}

/// Certificate of the two-parameter fixed point `Con⋆(a, p)`; built once.
pub fn con_star() -> &'static FixedPointCertificate {
    static C: OnceLock<FixedPointCertificate> = OnceLock::new();
    C.get_or_init(|| {
        fixed_point_2var(&con_star_template(), SELF_VAR, &[ALPHA_VAR, PHI_VAR])
            .expect("template mentions all variables")
    })
}

#[derive(Debug, Clone)]
pub struct ConIterSentence {
    pub alpha: OrdNotation,
    pub base: Formula,
    /// `Con⋆` instantiated at the codes of `alpha` and `base`.
    pub rendered: Formula,
    /// `Some(n)` when `alpha = n` is finite and the recursion can be unfolded.
    pub unfold_depth: Option<u64>,
}

pub fn con_iter(alpha: &OrdNotation, phi: &Formula) -> Result<ConIterSentence, ConIterError> {
    if !phi.is_sentence() {
        return Err(ConIterError::NotASentence);
    }
    let rendered = instantiate(
        &con_star().result,
        &[(ALPHA_VAR, alpha.code()), (PHI_VAR, godel_encode(phi))],
    );
    Ok(ConIterSentence {
        alpha: alpha.clone(),
        base: phi.clone(),
        rendered,
        unfold_depth: alpha.as_finite(),
    })
}

/// `Con⋆(α, θ)` with the sentence position filled by an arbitrary term
/// (e.g. a bound variable ranging over codes).
pub fn con_star_at(alpha: &OrdNotation, phi_code: &Term) -> Formula {
    let partially = instantiate(&con_star().result, &[(ALPHA_VAR, alpha.code())]);
    substitute(&partially, PHI_VAR, phi_code)
}

/// `⋀_{k<n} Con(φ ∧ unfold(k, φ))`; `unfold(0, φ) = ⊤`. Shares `unfold(n-1)`
/// as the left conjunct of `unfold(n)`, so the node count is linear in `n`.
pub fn unfold_finite(alpha: &OrdNotation, phi: &Formula) -> Result<Formula, ConIterError> {
    let n = alpha
        .as_finite()
        .ok_or_else(|| ConIterError::NotFinite(alpha.to_string()))?;
    Ok(unfold_n(n, phi))
}

pub fn unfold_n(n: u64, phi: &Formula) -> Formula {
    let mut conjuncts = Vec::new();
    let mut current = Formula::top();
    for _ in 0..n {
        conjuncts.push(Formula::con(Formula::and(phi.clone(), current.clone())));
        current = Formula::and_all(conjuncts.iter().cloned());
    }
    current
}

/// One step of the fixed-point recursion: the body of `Con⋆(α, φ)` at `β`,
/// with the guard checked and the provability arguments evaluated and
/// decoded, giving `Con(φ ∧ Con⋆(β, φ))` as a sentence.
pub fn unfold_once(s: &ConIterSentence, beta: &OrdNotation) -> Result<Formula, ConIterError> {
    let FormulaKind::Forall(body) = s.rendered.kind() else {
        return Err(ConIterError::Unfold("not a universal sentence".into()));
    };
    let inst = open_binder(body, &Term::num(beta.code()));
    let FormulaKind::Imp(guard, conclusion) = inst.kind() else {
        return Err(ConIterError::Unfold("unexpected body shape".into()));
    };
    match crate::formula::eval_sentence(guard) {
        Ok(crate::formula::TruthValue::True) => {}
        Ok(_) => {
            return Err(ConIterError::Unfold(format!(
                "{beta} is not below {}",
                s.alpha
            )))
        }
        Err(e) => return Err(ConIterError::Unfold(e.to_string())),
    }
    let FormulaKind::Not(pr) = conclusion.kind() else {
        return Err(ConIterError::Unfold("unexpected conclusion shape".into()));
    };
    Ok(Formula::not(resolve_provable(pr)?))
}

/// Evaluates the arguments of a provability atom, decodes them and fills
/// the template, producing the equivalent zero-hole atom.
pub fn resolve_provable(f: &Formula) -> Result<Formula, ConIterError> {
    let FormulaKind::Provable(tpl, args) = f.kind() else {
        return Err(ConIterError::Unfold("not a provability atom".into()));
    };
    let fills = args
        .iter()
        .map(|t| {
            let code = eval_term(t).map_err(|e| ConIterError::Unfold(e.to_string()))?;
            godel_decode(&code).map_err(|e| ConIterError::Unfold(e.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Formula::pr(fill_holes(tpl, &fills)))
}

/// `□(p→q) → (conⁿ(p) → conⁿ(q))` and its boxed form, as modal formulas
/// over the skeleton atoms of two independent base sentences.
pub fn monotonicity_goals(n: u64) -> (ModalFormula, ModalFormula) {
    let (phi, psi) = monotone_bases();
    let mut sk = Skeleton::default();
    let p = sk.map(&phi);
    let q = sk.map(&psi);
    let cp = sk.map(&unfold_n(n, &phi));
    let cq = sk.map(&unfold_n(n, &psi));
    let premise = ModalFormula::boxed(ModalFormula::imp(p, q));
    let inner = ModalFormula::imp(cp, cq);
    (
        ModalFormula::imp(premise.clone(), inner.clone()),
        ModalFormula::imp(premise, ModalFormula::boxed(inner)),
    )
}

fn monotone_bases() -> (Formula, Formula) {
    // two logically unrelated quantified sentences; their skeletons are atoms
    let phi = Formula::forall(Formula::le(Term::zero(), Term::bound(0)));
    let psi = Formula::exists(Formula::eq(Term::bound(0), Term::bound(0)));
    (phi, psi)
}

/// Finite instance of monotonicity: `GL ⊢ □(p→q) → (conⁿ(p) → conⁿ(q))`.
pub fn check_monotone_finite(n: u64) -> Verdict {
    gl_prove(&monotonicity_goals(n).0).with_scope(format!(
        "finite instance n = {n} at GL skeleton level; transfinite α not covered"
    ))
}

/// Provable form: `GL ⊢ □(p→q) → □(conⁿ(p) → conⁿ(q))`.
pub fn check_monotone_finite_boxed(n: u64) -> Verdict {
    gl_prove(&monotonicity_goals(n).1).with_scope(format!(
        "finite instance n = {n} (boxed form) at GL skeleton level"
    ))
}

/// `Con⁰(φ) ↔ ⊤` syntactically and `GL ⊢ con¹(a) ↔ ¬□¬a`.
pub fn check_base_cases(phi: &Formula) -> Verdict {
    let mut parts = BTreeMap::new();
    let zero = unfold_n(0, phi) == Formula::top();
    parts.insert(
        "unfold(0) is the empty conjunction".to_string(),
        if zero {
            Verdict::established(
                Witness::Note {
                    text: "syntactically T".into(),
                },
                "syntactic",
            )
        } else {
            Verdict::refuted(
                Witness::Note {
                    text: "not T".into(),
                },
                "syntactic",
            )
        },
    );
    let mut sk = Skeleton::default();
    let a = sk.map(phi);
    let one = sk.map(&unfold_n(1, phi));
    parts.insert(
        "con1 <-> dia a".to_string(),
        gl_prove(&ModalFormula::iff(one, ModalFormula::dia(a))),
    );
    Verdict::all(parts, "base cases of the iteration")
}

/// `GL ⊢ conⁿ⁺¹(a) → conⁿ(a)`: iterates weaken downward.
pub fn check_downward(n: u64, phi: &Formula) -> Verdict {
    let mut sk = Skeleton::default();
    let hi = sk.map(&unfold_n(n + 1, phi));
    let lo = sk.map(&unfold_n(n, phi));
    gl_prove(&entailment(&[hi], &lo))
}

/// Skeleton of `conⁿ(φ)` in a fresh context (for display).
pub fn con_skeleton(n: u64, phi: &Formula) -> ModalFormula {
    skeleton(&unfold_n(n, phi))
}

/// Code of `Con⋆(α, φ)` as computed inside the object language.
pub fn con_star_code(alpha: &OrdNotation, phi: &Formula) -> Result<BigUint, ConIterError> {
    let t = Term::sub(
        Term::sub(
            con_star().self_term.clone(),
            ALPHA_VAR,
            Term::num(alpha.code()),
        ),
        PHI_VAR,
        Term::num(godel_encode(phi)),
    );
    eval_term(&t).map_err(|e| ConIterError::Unfold(e.to_string()))
}
