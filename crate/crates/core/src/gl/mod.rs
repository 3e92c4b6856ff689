//! Decision procedure for the provability logic GL.
//!
//! `gl_prove` answers with a checked derivation or a model-checked finite
//! countermodel; exhausting the sequent budget yields an undecided verdict,
//! never a guess. The budget defaults to [`DEFAULT_BUDGET`] distinct sequents
//! and can be overridden with the `CONLAB_GL_BUDGET` environment variable.

mod kripke;
mod sat;
mod semantic;
mod tableau;

pub use kripke::{strict_orders, KripkeModel};
pub use sat::{abstract_boxes, sat_check, satisfies, truth_table_sat, SatError, SatResult};
pub use semantic::{brute_force_countermodel, semantic_valid};
pub use tableau::{LocalTable, ProofNode, Rule, Sequent, Side};

use crate::modal::ModalFormula;
use crate::verdict::{Verdict, Witness};
use serde::{Deserialize, Serialize};
use std::sync::Arc;
use tableau::SearchOutcome;

pub const DEFAULT_BUDGET: usize = 2_000_000;
pub const BUDGET_ENV: &str = "CONLAB_GL_BUDGET";

/// Inputs with more distinct subformulas than this are searched on a
/// dedicated thread with a large stack.
const INLINE_LIMIT: usize = 256;
const SEARCH_STACK: usize = 512 << 20;

pub fn budget_from_env() -> usize {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

/// A closed derivation of `⇒ f`.
#[derive(Debug, Clone)]
pub struct GlProof {
    pub table: Arc<LocalTable>,
    pub root: Arc<ProofNode>,
}

impl GlProof {
    /// Re-checks every rule application against a table rebuilt from `f`.
    pub fn check(&self, f: &ModalFormula) -> bool {
        let t = LocalTable::new(f);
        t.formulas == self.table.formulas && tableau::check_proof(&t, &self.root)
    }

    pub fn summary(&self, checked: bool) -> GlProofSummary {
        let (nodes, depth) = tableau::proof_stats(&self.root);
        GlProofSummary {
            nodes,
            depth,
            checked,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlProofSummary {
    pub nodes: usize,
    pub depth: usize,
    pub checked: bool,
}

#[derive(Debug, Clone)]
pub enum GlOutcome {
    Proved(GlProof),
    Refuted(KripkeModel),
    Undecided { explored: usize },
}

impl GlOutcome {
    pub fn is_proved(&self) -> bool {
        matches!(self, GlOutcome::Proved(_))
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, GlOutcome::Refuted(_))
    }
}

fn decide_inline(f: &ModalFormula, budget: usize) -> GlOutcome {
    let t = Arc::new(LocalTable::new(f));
    match tableau::search(&t, budget) {
        Ok((SearchOutcome::Proved(root), _)) => GlOutcome::Proved(GlProof { table: t, root }),
        Ok((SearchOutcome::Refuted(cm), _)) => GlOutcome::Refuted(tableau::to_kripke(&t, &cm)),
        Err((_, explored)) => GlOutcome::Undecided { explored },
    }
}

/// Decides `⊢GL f` within `budget` explored sequents.
pub fn gl_decide(f: &ModalFormula, budget: usize) -> GlOutcome {
    if f.subformulas().len() <= INLINE_LIMIT {
        return decide_inline(f, budget);
    }
    std::thread::scope(|s| {
        std::thread::Builder::new()
            .name("gl-search".into())
            .stack_size(SEARCH_STACK)
            .spawn_scoped(s, || decide_inline(f, budget))
            .expect("spawn search thread")
            .join()
            .expect("search thread panicked")
    })
}

const SKELETON_SCOPE: &str = "GL, skeleton level";

/// Verdict for `⊢GL f`, with the witness re-checked before it is reported.
pub fn gl_prove_with_budget(f: &ModalFormula, budget: usize) -> Verdict {
    match gl_decide(f, budget) {
        GlOutcome::Proved(p) => {
            if p.check(f) {
                Verdict::established(Witness::GlProof(p.summary(true)), SKELETON_SCOPE)
            } else {
                Verdict::undecided("internal error: derivation failed re-check")
            }
        }
        GlOutcome::Refuted(m) => {
            if m.refutes(f) {
                Verdict::refuted(Witness::Countermodel(m), SKELETON_SCOPE)
            } else {
                Verdict::undecided("internal error: countermodel failed model check")
            }
        }
        GlOutcome::Undecided { explored } => Verdict::undecided(format!(
            "GL search budget exhausted after {explored} sequents (set {BUDGET_ENV} to raise)"
        )),
    }
}

pub fn gl_prove(f: &ModalFormula) -> Verdict {
    gl_prove_with_budget(f, budget_from_env())
}

/// `premises ⊢GL goal`, i.e. `⊢GL ⋀premises → goal`.
pub fn gl_entails(premises: &[ModalFormula], goal: &ModalFormula) -> Verdict {
    gl_prove(&entailment(premises, goal))
}

pub fn entailment(premises: &[ModalFormula], goal: &ModalFormula) -> ModalFormula {
    if premises.is_empty() {
        return goal.clone();
    }
    ModalFormula::imp(
        ModalFormula::and_all(premises.iter().cloned()),
        goal.clone(),
    )
}

/// Löb's rule as a checkable conditional: if `□f → f` is provable then so
/// is `f`. Established when the conditional holds (including vacuously),
/// refuted when `□f → f` is provable but `f` is not.
pub fn lob_rule_check(f: &ModalFormula) -> Verdict {
    let premise = gl_prove(&ModalFormula::imp(
        ModalFormula::boxed(f.clone()),
        f.clone(),
    ));
    if premise.is_undecided() {
        return premise;
    }
    let conclusion = gl_prove(f);
    if conclusion.is_undecided() {
        return conclusion;
    }
    let holds = !premise.is_established() || conclusion.is_established();
    let parts = [
        ("box f -> f".to_string(), premise),
        ("f".to_string(), conclusion),
    ]
    .into_iter()
    .collect();
    let scope = "Löb rule instance, GL skeleton level";
    if holds {
        Verdict::established(Witness::Nested { parts }, scope)
    } else {
        Verdict::refuted(Witness::Nested { parts }, scope)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modal::parse_modal;

    fn prove(s: &str) -> Verdict {
        gl_prove(&parse_modal(s).unwrap())
    }

    #[test]
    fn lob_axiom_is_provable() {
        assert!(prove("box(box p -> p) -> box p").is_established());
    }

    #[test]
    fn second_incompleteness_skeleton() {
        let v = prove("~box F");
        let m = v.countermodel().expect("countermodel");
        assert_eq!(m.worlds, 1);
        assert!(m.refutes(&parse_modal("~box F").unwrap()));
    }

    #[test]
    fn consistency_is_monotone() {
        assert!(prove("box(p -> q) -> (~box~p -> ~box~q)").is_established());
    }

    #[test]
    fn reflection_and_t_axiom_fail() {
        assert!(prove("box p -> p").is_refuted());
        assert!(prove("box p -> box box p").is_established());
    }

    #[test]
    fn entailment_examples() {
        let p = |s: &str| parse_modal(s).unwrap();
        assert!(gl_entails(&[p("box ~p")], &p("box(p -> q)")).is_established());
        assert!(gl_entails(&[], &p("T")).is_established());
        assert!(gl_entails(&[p("a"), p("box a")], &p("~box~a")).is_refuted());
    }

    #[test]
    fn lob_rule_examples() {
        assert!(lob_rule_check(&parse_modal("T").unwrap()).is_established());
        assert!(lob_rule_check(&parse_modal("box F -> F").unwrap()).is_established());
    }

    #[test]
    fn tiny_budget_is_undecided() {
        let f = parse_modal("box(box p -> p) -> box p").unwrap();
        assert!(gl_prove_with_budget(&f, 1).is_undecided());
    }

    #[test]
    fn proofs_are_rechecked() {
        let f = parse_modal("box(p & q) -> box p & box q").unwrap();
        match gl_decide(&f, DEFAULT_BUDGET) {
            GlOutcome::Proved(p) => {
                assert!(p.check(&f));
                assert!(!p.check(&parse_modal("box(p & q) -> box q & box p").unwrap()));
            }
            other => panic!("expected a proof, got {other:?}"),
        }
    }
}
