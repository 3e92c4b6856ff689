//! The operators `g`, `g₀` and `g₀*`, their finite truncations, and the
//! GL harnesses for the two directions of the main equivalences.
//!
//! `g(φ) := ∀θ ((θ ∈ 𝔄_α ∧ Pr(φ → θ)) → Con^α(θ))`. The unbounded
//! quantifier is only ever checked through truncations: one conjunct per
//! sentence numerated within the run's budget, with `Σ₁`-completeness
//! premises (a true membership atom together with its box) injected where
//! a proof step uses them. Every verdict states this scope.

use crate::aset::{
    membership_atom, membership_of, refutable_member, run_enumeration, AsetConfig, AsetError,
    AsetRun, Enumeration, MemberAnswer, MembershipOracle,
};
use crate::con_iter::{con_iter, con_star_at, unfold_n};
use crate::formula::{Formula, Skeleton, SkeletonOptions, Term};
use crate::gl::{abstract_boxes, gl_entails, gl_prove, sat_check, SatResult};
use crate::modal::ModalFormula;
use crate::ordinals::OrdNotation;
use crate::verdict::Verdict;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GError {
    #[error("input is not a sentence")]
    NotASentence,
    #[error(transparent)]
    Aset(#[from] AsetError),
    #[error("sentence is not numerated within budget {0}")]
    NotInRun(u32),
    #[error("truncation budget {asked} exceeds the run budget {run}")]
    BudgetBeyondRun { asked: u32, run: u32 },
    #[error("oracle required: consistency of the input is unknown")]
    OracleRequired,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GKind {
    /// `g`: tree `𝔄_α`, conjuncts conclude `Con^α(θ)`.
    G,
    /// `g₀`: tree `𝔄₀`, conjuncts conclude `Con(θ)`.
    G0,
}

#[derive(Debug, Clone)]
pub struct GOperator {
    pub kind: GKind,
    pub alpha: OrdNotation,
    pub run: AsetRun,
}

impl GOperator {
    /// Builds the run behind the operator. Finite ordinals use unfolded
    /// consistency conjuncts so that skeletons expose their modal structure.
    pub fn new(alpha: OrdNotation, enumeration: Enumeration, budget: u32) -> Result<Self, GError> {
        let mut config = AsetConfig::new(alpha.clone(), enumeration, budget);
        if alpha.as_finite().is_some() {
            config = config.unfolded();
        }
        Ok(GOperator {
            kind: GKind::G,
            alpha,
            run: run_enumeration(&config)?,
        })
    }

    pub fn g0(enumeration: Enumeration, budget: u32) -> Result<Self, GError> {
        let mut op = GOperator::new(OrdNotation::zero(), enumeration, budget)?;
        op.kind = GKind::G0;
        Ok(op)
    }

    /// The exponent of the consistency statement in each conjunct.
    pub fn con_exponent(&self) -> OrdNotation {
        match self.kind {
            GKind::G => self.alpha.clone(),
            GKind::G0 => OrdNotation::finite(1),
        }
    }

    /// `Con^e(θ)` for a concrete sentence: unfolded when `e` is finite.
    pub fn con_of(&self, theta: &Formula) -> Formula {
        let e = self.con_exponent();
        match e.as_finite() {
            Some(n) => unfold_n(n, theta),
            None => con_iter(&e, theta).expect("closed").rendered,
        }
    }

    /// The full operator as a single `Π₁` sentence.
    pub fn apply(&self, phi: &Formula) -> Result<Formula, GError> {
        if !phi.is_sentence() {
            return Err(GError::NotASentence);
        }
        let theta = Term::bound(0);
        let member = membership_atom(&self.alpha, theta.clone());
        let implies = Formula::provable(
            Formula::imp(phi.clone(), Formula::hole(0)),
            vec![theta.clone()],
        );
        let conclusion = match self.kind {
            GKind::G => con_star_at(&self.alpha, &theta),
            GKind::G0 => Formula::not(Formula::provable(
                Formula::not(Formula::hole(0)),
                vec![theta],
            )),
        };
        Ok(Formula::forall(Formula::imp(
            Formula::and(member, implies),
            conclusion,
        )))
    }

    /// `(θ ∈ 𝔄 ∧ Pr(φ → θ)) → Con^e(θ)` for one numerated `θ`.
    pub fn conjunct(&self, phi: &Formula, theta: &Formula) -> Formula {
        Formula::imp(
            Formula::and(
                membership_of(&self.alpha, theta),
                Formula::pr(Formula::imp(phi.clone(), theta.clone())),
            ),
            self.con_of(theta),
        )
    }

    /// Conjunction over every `θ` numerated through stage `budget`.
    pub fn truncate(&self, phi: &Formula, budget: u32) -> Result<Formula, GError> {
        if !phi.is_sentence() {
            return Err(GError::NotASentence);
        }
        if budget > self.run.budget {
            return Err(GError::BudgetBeyondRun {
                asked: budget,
                run: self.run.budget,
            });
        }
        Ok(Formula::and_all(
            self.run
                .nodes
                .iter()
                .filter(|n| n.stage <= budget)
                .map(|n| self.conjunct(phi, &n.numerated)),
        ))
    }

    fn node_of(&self, theta: &Formula) -> Result<usize, GError> {
        match MembershipOracle::from_run(self.run.clone()).evaluate(theta) {
            MemberAnswer::Member { node, .. } => Ok(node),
            MemberAnswer::NotWithinBudget => Err(GError::NotInRun(self.run.budget)),
        }
    }

    /// The membership atom of a numerated sentence and its box — the
    /// `Σ₁`-completeness premises for a true membership claim.
    fn membership_premises(&self, sk: &mut Skeleton, theta: &Formula) -> [ModalFormula; 2] {
        let m = sk.map(&membership_of(&self.alpha, theta));
        [m.clone(), ModalFormula::boxed(m)]
    }

    fn truncation_scope(&self) -> String {
        format!(
            "GL skeleton level; ∀θ∈𝔄 truncated to the {} sentences numerated within budget {}, \
             Σ₁-completeness premises injected",
            self.run.len(),
            self.run.budget
        )
    }
}

fn finite_or_undecided(op: &GOperator) -> Result<u64, Verdict> {
    op.con_exponent().as_finite().ok_or_else(|| {
        Verdict::undecided(format!(
            "α = {} is not finite; the iterate cannot be unfolded",
            op.alpha
        ))
    })
}

/// Both directions for a numerated `θ`:
/// (a) `trunc(θ), m_θ, □m_θ ⊢ Con^α(θ)` and (b) `Con^α(θ) ⊢ trunc(θ)`.
pub fn verify_thm41_dir1(op: &GOperator, theta: &Formula) -> Result<Verdict, GError> {
    op.node_of(theta)?;
    if let Err(v) = finite_or_undecided(op) {
        return Ok(v);
    }
    let mut sk = Skeleton::default();
    let trunc = sk.map(&op.truncate(theta, op.run.budget)?);
    let con = sk.map(&op.con_of(theta));
    let [m, bm] = op.membership_premises(&mut sk, theta);
    let mut parts = BTreeMap::new();
    parts.insert(
        "a: g(theta) -> con(theta)".to_string(),
        gl_entails(&[trunc.clone(), m, bm], &con),
    );
    parts.insert(
        "b: con(theta) -> g(theta)".to_string(),
        gl_entails(&[con], &trunc),
    );
    Ok(Verdict::all(parts, op.truncation_scope()))
}

/// Forward direction for `φ := ψ ∧ Con^α(ψ)` with `ψ` numerated:
/// `φ ∧ Con(φ) ⊢ trunc(φ)`, with the claim's content injected as premises
/// (ancestors-or-self of `ψ` are provably implied; cross-branch sentences
/// are refuted together with `φ`). Descendants need no premise: they carry
/// `Con(φ)` as a conjunct, and GL derives the rest.
pub fn verify_thm41_dir2(op: &GOperator, psi: &Formula) -> Result<Verdict, GError> {
    let id = op.node_of(psi)?;
    if let Err(v) = finite_or_undecided(op) {
        return Ok(v);
    }
    let phi = Formula::and(psi.clone(), op.con_of(psi));
    let mut sk = Skeleton::default();
    let s_phi = sk.map(&phi);
    let s_psi = sk.map(psi);
    let mut premises = vec![s_phi.clone(), ModalFormula::dia(s_phi.clone())];
    let ancestors = op.run.ancestors(id);
    let mut cross_refuted = 0;
    for node in &op.run.nodes {
        let s_theta = sk.map(&node.numerated);
        if node.id == id || ancestors.contains(&node.id) {
            premises.push(ModalFormula::boxed(ModalFormula::imp(
                s_phi.clone(),
                s_theta,
            )));
        } else if !op.run.is_descendant(node.id, id) {
            let joint = ModalFormula::and(s_psi.clone(), s_theta.clone());
            let unsat = matches!(
                sat_check(&abstract_boxes(&joint)).expect("abstracted"),
                SatResult::Unsatisfiable
            );
            if !unsat {
                return Ok(Verdict::undecided(format!(
                    "cross-branch node {} is not propositionally refuted with ψ",
                    node.id
                )));
            }
            cross_refuted += 1;
            premises.push(ModalFormula::boxed(ModalFormula::not(ModalFormula::and(
                s_phi.clone(),
                s_theta,
            ))));
        }
    }
    let trunc = sk.map(&op.truncate(&phi, op.run.budget)?);
    let v = gl_entails(&premises, &trunc);
    Ok(v.with_scope(format!(
        "{}; {} ancestor-or-self and {} cross-branch premises",
        op.truncation_scope(),
        ancestors.len() + 1,
        cross_refuted
    )))
}

/// The converse: `¬Con(φ) ⊢ ¬trunc(φ)` using a refutable member `θ⊥` of
/// the run, its membership premises and `□¬θ⊥`.
pub fn verify_thm41_converse(op: &GOperator, phi: &Formula) -> Result<Verdict, GError> {
    if !phi.is_sentence() {
        return Err(GError::NotASentence);
    }
    if let Err(v) = finite_or_undecided(op) {
        return Ok(v);
    }
    let Some(witness) = refutable_member(&op.run) else {
        return Ok(Verdict::undecided(
            "no refutable sentence in the enumeration prefix",
        ));
    };
    let mut sk = Skeleton::default();
    let s_phi = sk.map(phi);
    let s_bot = sk.map(&witness.numerated);
    let [m, bm] = op.membership_premises(&mut sk, &witness.numerated);
    let premises = [
        ModalFormula::boxed(ModalFormula::not(s_phi)),
        m,
        bm,
        ModalFormula::boxed(ModalFormula::not(s_bot)),
    ];
    let trunc = sk.map(&op.truncate(phi, op.run.budget)?);
    Ok(
        gl_entails(&premises, &ModalFormula::not(trunc)).with_scope(format!(
            "{}; witness node {} at stage {}",
            op.truncation_scope(),
            witness.id,
            witness.stage
        )),
    )
}

/// A sentence with no internal structure visible to the skeleton: its
/// skeleton is a single atom, standing for an arbitrary `φ`.
pub fn generic_sentence() -> Formula {
    Formula::forall(Formula::exists(Formula::le(Term::bound(1), Term::bound(0))))
}

/// `Con(p) ↔ g₀(p)` at truncation level for a generic `p`.
pub fn verify_prop51(op: &GOperator) -> Result<Verdict, GError> {
    let p = generic_sentence();
    let mut sk = Skeleton::default();
    let s_p = sk.map(&p);
    let trunc = sk.map(&op.truncate(&p, op.run.budget)?);
    let mut parts = BTreeMap::new();
    parts.insert(
        "left-to-right".to_string(),
        gl_entails(&[ModalFormula::dia(s_p.clone())], &trunc),
    );
    match refutable_member(&op.run) {
        None => {
            parts.insert(
                "right-to-left".to_string(),
                Verdict::undecided("no refutable sentence in the enumeration prefix"),
            );
        }
        Some(w) => {
            let s_bot = sk.map(&w.numerated);
            let [m, bm] = op.membership_premises(&mut sk, &w.numerated);
            let not_con = ModalFormula::boxed(ModalFormula::not(s_p.clone()));
            parts.insert(
                "right-to-left: witness implied and refuted".to_string(),
                gl_entails(
                    std::slice::from_ref(&not_con),
                    &ModalFormula::and(
                        ModalFormula::boxed(ModalFormula::imp(s_p, s_bot.clone())),
                        ModalFormula::boxed(ModalFormula::not(s_bot.clone())),
                    ),
                ),
            );
            parts.insert(
                "right-to-left".to_string(),
                gl_entails(
                    &[
                        not_con,
                        m,
                        bm,
                        ModalFormula::boxed(ModalFormula::not(s_bot)),
                    ],
                    &ModalFormula::not(trunc),
                ),
            );
        }
    }
    Ok(Verdict::all(parts, op.truncation_scope()))
}

/// The same right-to-left argument for `g` at α = 1 from `¬Con²(p)` alone:
/// with `p` consistent, no numerated consequence of `p` is refuted, so the
/// premises do not force `¬g(p)`. Expected to be refuted.
pub fn verify_prop51_alpha1_analogue(op: &GOperator) -> Result<Verdict, GError> {
    let p = generic_sentence();
    let mut sk = Skeleton::default();
    let not_con2 = ModalFormula::not(sk.map(&unfold_n(2, &p)));
    let trunc = sk.map(&op.truncate(&p, op.run.budget)?);
    let mut premises = vec![not_con2];
    if let Some(w) = refutable_member(&op.run) {
        let s_bot = sk.map(&w.numerated);
        premises.extend(op.membership_premises(&mut sk, &w.numerated));
        premises.push(ModalFormula::boxed(ModalFormula::not(s_bot)));
    }
    Ok(
        gl_entails(&premises, &ModalFormula::not(trunc)).with_scope(format!(
            "{}; premise ¬Con²(p) in place of ¬Con(p)",
            op.truncation_scope()
        )),
    )
}

/// `□(φ → ψ) → (trunc(φ) → trunc(ψ))`.
pub fn check_monotone(op: &GOperator, phi: &Formula, psi: &Formula) -> Result<Verdict, GError> {
    let mut sk = Skeleton::default();
    let s_phi = sk.map(phi);
    let s_psi = sk.map(psi);
    let a = sk.map(&op.truncate(phi, op.run.budget)?);
    let b = sk.map(&op.truncate(psi, op.run.budget)?);
    let goal = ModalFormula::imp(
        ModalFormula::boxed(ModalFormula::imp(s_phi, s_psi)),
        ModalFormula::imp(a, b),
    );
    Ok(gl_prove(&goal).with_scope(op.truncation_scope()))
}

/// Truncations weaken as the budget grows: `trunc_{n+1}(φ) ⊢ trunc_n(φ)`.
pub fn check_truncations_weaken(op: &GOperator, phi: &Formula) -> Result<Verdict, GError> {
    let mut parts = BTreeMap::new();
    let mut sk = Skeleton::default();
    for n in 0..op.run.budget {
        let hi = sk.map(&op.truncate(phi, n + 1)?);
        let lo = sk.map(&op.truncate(phi, n)?);
        parts.insert(format!("budget {}", n + 1), gl_entails(&[hi], &lo));
    }
    Ok(Verdict::all(parts, op.truncation_scope()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Consistency {
    Consistent,
    Inconsistent,
    Unknown,
}

/// Source of consistency facts for `g₀*`; answers are fixed per instance.
pub trait ConsistencyOracle {
    fn consistency(&self, phi: &Formula) -> Consistency;
}

/// Refutable skeleton (closed atoms decided) ⇒ inconsistent; otherwise
/// unknown.
#[derive(Debug, Clone, Copy, Default)]
pub struct SkeletonOracle;

impl ConsistencyOracle for SkeletonOracle {
    fn consistency(&self, phi: &Formula) -> Consistency {
        let s = Skeleton::new(SkeletonOptions {
            decide_closed: true,
        })
        .map(phi);
        match sat_check(&abstract_boxes(&s)).expect("abstracted") {
            SatResult::Unsatisfiable => Consistency::Inconsistent,
            SatResult::Satisfiable(_) => Consistency::Unknown,
        }
    }
}

/// Explicit answers, falling back to [`SkeletonOracle`].
#[derive(Debug, Clone, Default)]
pub struct TableOracle {
    pub answers: BTreeMap<String, Consistency>,
}

impl TableOracle {
    pub fn with(mut self, phi: &Formula, c: Consistency) -> Self {
        self.answers.insert(crate::formula::print(phi), c);
        self
    }
}

impl ConsistencyOracle for TableOracle {
    fn consistency(&self, phi: &Formula) -> Consistency {
        self.answers
            .get(&crate::formula::print(phi))
            .copied()
            .unwrap_or_else(|| SkeletonOracle.consistency(phi))
    }
}

/// `g₀*(φ)`: `⊥` for inconsistent `φ`, otherwise the conjunction of
/// `Con(ζ)` over numerated `ζ` whose skeleton `φ`'s skeleton entails.
pub fn apply_g0_star(
    op: &GOperator,
    phi: &Formula,
    oracle: &dyn ConsistencyOracle,
) -> Result<Formula, GError> {
    if !phi.is_sentence() {
        return Err(GError::NotASentence);
    }
    match oracle.consistency(phi) {
        Consistency::Inconsistent => Ok(Formula::bot()),
        Consistency::Unknown => Err(GError::OracleRequired),
        Consistency::Consistent => {
            let mut sk = Skeleton::default();
            let s_phi = sk.map(phi);
            let entailed: Vec<Formula> = op
                .run
                .nodes
                .iter()
                .filter(|n| {
                    let s = sk.map(&n.numerated);
                    let counter = ModalFormula::and(s_phi.clone(), ModalFormula::not(s));
                    matches!(
                        sat_check(&abstract_boxes(&counter)).expect("abstracted"),
                        SatResult::Unsatisfiable
                    )
                })
                .map(|n| Formula::con(n.numerated.clone()))
                .collect();
            Ok(Formula::and_all(entailed))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{classify, parse, ComplexityClass};

    fn op(alpha: &str, budget: u32) -> GOperator {
        GOperator::new(alpha.parse().unwrap(), Enumeration::Decidable, budget).unwrap()
    }

    #[test]
    fn apply_is_pi1() {
        let phi = parse("(= (z) (z))").unwrap();
        for a in ["1", "2", "w"] {
            let g = op(a, 0);
            assert_eq!(
                classify(&g.apply(&phi).unwrap()).unwrap(),
                ComplexityClass::pi(1)
            );
            assert_eq!(g.apply(&phi).unwrap(), g.apply(&phi).unwrap());
        }
        let g0 = GOperator::g0(Enumeration::Decidable, 0).unwrap();
        assert_eq!(
            classify(&g0.apply(&phi).unwrap()).unwrap(),
            ComplexityClass::pi(1)
        );
    }

    #[test]
    fn truncation_sizes() {
        let g = op("1", 3);
        let phi = Formula::top();
        let count = |f: &Formula| {
            use crate::formula::FormulaKind::{And, Imp};
            let mut n = 1;
            let mut cur = f.clone();
            while let And(a, b) = cur.kind() {
                assert!(matches!(b.kind(), Imp(..)));
                n += 1;
                cur = a.clone();
            }
            n
        };
        assert_eq!(count(&g.truncate(&phi, 0).unwrap()), 1);
        assert_eq!(count(&g.truncate(&phi, 3).unwrap()), 15);
        assert!(g.truncate(&phi, 4).is_err());
    }

    #[test]
    fn dir1_small() {
        let g = op("1", 1);
        assert!(verify_thm41_dir1(&g, &Formula::top())
            .unwrap()
            .is_established());
    }

    #[test]
    fn not_numerated_is_error() {
        let g = op("1", 1);
        assert_eq!(
            verify_thm41_dir2(&g, &Formula::bot()).unwrap_err(),
            GError::NotInRun(1)
        );
    }

    #[test]
    fn g0_star_contract() {
        let g0 = GOperator::g0(Enumeration::Decidable, 1).unwrap();
        assert_eq!(
            apply_g0_star(&g0, &Formula::bot(), &SkeletonOracle).unwrap(),
            Formula::bot()
        );
        let p = generic_sentence();
        assert_eq!(
            apply_g0_star(&g0, &p, &SkeletonOracle).unwrap_err(),
            GError::OracleRequired
        );
        let oracle = TableOracle::default().with(&Formula::top(), Consistency::Consistent);
        let out = apply_g0_star(&g0, &Formula::top(), &oracle).unwrap();
        assert_eq!(out, Formula::con(Formula::top()));
    }
}
