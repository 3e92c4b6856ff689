//! The staged sentence tree `𝔄_α`.
//!
//! Stage 0 numerates `⊤` and activates `⊤ ∧ C(⊤)`; stage `n+1` replaces each
//! active `ψ` by the numerated children `ψ ∧ φₙ` and `ψ ∧ ¬φₙ`, activating
//! `θ ∧ C(θ)` for each. Here `C(θ)` is `Con^{α+1}(θ)`, either as the
//! rendered fixed-point sentence or, for finite α, as the explicit unfolding
//! (the form the GL harnesses reason about). A numerated child is literally
//! its parent's *active* sentence conjoined with `±φₙ`, so it carries the
//! parent's `C` conjunct.

use crate::con_iter::{con_iter, unfold_n};
use crate::formula::{
    eval_sentence, godel_decode, godel_encode, parse, print, Formula, FormulaKind, Skeleton,
    SkeletonOptions, Term, TruthValue,
};
use crate::gl::{abstract_boxes, sat_check, SatResult};
use crate::modal::ModalFormula;
use crate::ordinals::OrdNotation;
use crate::verdict::{Verdict, Witness};
use num_bigint::BigUint;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::collections::{BTreeMap, HashMap};
use thiserror::Error;

/// Stages beyond this would need more than a million nodes.
pub const MAX_BUDGET: u32 = 20;
/// Largest tree size (numerals in binary) of a single numerated sentence in
/// rendered mode; each stage roughly doubles it.
pub const MAX_SENTENCE_SIZE: u64 = 1 << 26;
/// Enumerator name used in membership atoms.
pub const ENUMERATOR: &str = "aset";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AsetError {
    #[error("budget {0} exceeds the supported maximum {MAX_BUDGET}")]
    BudgetTooLarge(u32),
    #[error("stage {stage}: sentence size {size} exceeds the limit {MAX_SENTENCE_SIZE}")]
    SentenceTooLarge { stage: u32, size: u64 },
    #[error("unfolded mode needs a finite ordinal, got {0}")]
    NotFinite(String),
    #[error("enumeration entry {index} is not a sentence")]
    NotASentence { index: usize },
    #[error("enumeration repeats a sentence at index {index}")]
    Repeated { index: usize },
    #[error("sentence φ{index} is not decidable by evaluation")]
    Undecidable { index: usize },
}

/// Deterministic stream of sentences `φ₀, φ₁, …`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Enumeration {
    /// Closed decodable codes in increasing order: `⊤, ⊥, ¬⊤, ¬⊥, …`.
    Godel,
    /// `φ₂ₖ := k = k` and `φ₂ₖ₊₁ := k = k+1`; every entry is decidable.
    Decidable,
    /// A fixed prefix, continued by another enumeration with the prefix
    /// entries skipped.
    Curated {
        prefix: Vec<Formula>,
        then: Box<Enumeration>,
    },
}

impl Enumeration {
    pub fn curated(prefix: Vec<Formula>) -> Self {
        Enumeration::Curated {
            prefix,
            then: Box::new(Enumeration::Godel),
        }
    }

    /// Reads one S-expression per line (blank lines and `;` comments are
    /// skipped) and continues with Gödel order.
    pub fn from_sexp_lines(text: &str) -> Result<Self, crate::formula::ParseError> {
        let prefix = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with(';'))
            .map(parse)
            .collect::<Result<_, _>>()?;
        Ok(Enumeration::curated(prefix))
    }

    pub fn name(&self) -> String {
        match self {
            Enumeration::Godel => "godel".into(),
            Enumeration::Decidable => "decidable".into(),
            Enumeration::Curated { prefix, then } => {
                format!("curated[{}]+{}", prefix.len(), then.name())
            }
        }
    }

    /// The first `n` sentences.
    pub fn prefix(&self, n: usize) -> Result<Vec<Formula>, AsetError> {
        match self {
            Enumeration::Godel => Ok(godel_order(n, &[])),
            Enumeration::Decidable => Ok((0..n).map(decidable_entry).collect()),
            Enumeration::Curated { prefix, then } => {
                for (i, f) in prefix.iter().enumerate() {
                    if !f.is_sentence() {
                        return Err(AsetError::NotASentence { index: i });
                    }
                    if prefix[..i].contains(f) {
                        return Err(AsetError::Repeated { index: i });
                    }
                }
                let mut out: Vec<Formula> = prefix.iter().take(n).cloned().collect();
                if out.len() < n {
                    let rest = n - out.len();
                    let tail = match then.as_ref() {
                        Enumeration::Godel => godel_order(rest, prefix),
                        other => {
                            // skip prefix entries; a bounded look-ahead suffices
                            let more = other.prefix(rest + prefix.len())?;
                            more.into_iter()
                                .filter(|f| !prefix.contains(f))
                                .take(rest)
                                .collect()
                        }
                    };
                    out.extend(tail);
                }
                Ok(out)
            }
        }
    }
}

fn decidable_entry(i: usize) -> Formula {
    let k = Term::num(BigUint::from(i / 2));
    if i.is_multiple_of(2) {
        Formula::eq(k.clone(), k)
    } else {
        Formula::eq(k.clone(), Term::succ(k))
    }
}

fn godel_order(n: usize, skip: &[Formula]) -> Vec<Formula> {
    let mut out = Vec::with_capacity(n);
    let mut code = BigUint::from(1u32);
    while out.len() < n {
        if let Ok(f) = godel_decode(&code) {
            if f.is_sentence() && f.info().holes == 0 && !skip.contains(&f) {
                out.push(f);
            }
        }
        code += 1u32;
    }
    out
}

/// How the `Con^{α+1}` conjunct of active sentences is written.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConForm {
    /// The diagonal sentence `Con⋆(α+1, θ)`; any ordinal.
    Rendered,
    /// `unfold(α+1, θ)`; finite α only.
    Unfolded,
}

#[derive(Debug, Clone)]
pub struct AsetConfig {
    pub alpha: OrdNotation,
    pub enumeration: Enumeration,
    pub budget: u32,
    pub con_form: ConForm,
}

impl AsetConfig {
    pub fn new(alpha: OrdNotation, enumeration: Enumeration, budget: u32) -> Self {
        AsetConfig {
            alpha,
            enumeration,
            budget,
            con_form: ConForm::Rendered,
        }
    }

    pub fn unfolded(mut self) -> Self {
        self.con_form = ConForm::Unfolded;
        self
    }
}

#[derive(Debug, Clone)]
pub struct AsetNode {
    pub id: usize,
    pub stage: u32,
    pub parent: Option<usize>,
    /// `Some(true)` for `ψ ∧ φₙ`, `Some(false)` for `ψ ∧ ¬φₙ`.
    pub polarity: Option<bool>,
    pub numerated: Formula,
    /// The `Con^{α+1}` conjunct added on activation.
    pub con: Formula,
    pub active: Formula,
    /// `[positive, negative]` once the node's stage has been expanded.
    pub children: Option<[usize; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AsetEvent {
    pub stage: u32,
    pub node_id: usize,
    pub parent_id: Option<usize>,
    pub polarity: Option<String>,
    pub formula_ref: String,
}

#[derive(Debug, Clone)]
pub struct AsetRun {
    pub alpha: OrdNotation,
    pub budget: u32,
    pub con_form: ConForm,
    pub enumeration: Vec<Formula>,
    pub nodes: Vec<AsetNode>,
    pub events: Vec<AsetEvent>,
    index: HashMap<Formula, usize>,
}

fn formula_ref(f: &Formula) -> String {
    hex::encode(Sha256::digest(print(f).as_bytes()))
}

fn con_conjunct(config: &AsetConfig, theta: &Formula) -> Result<Formula, AsetError> {
    let next = crate::ordinals::successor(&config.alpha);
    match config.con_form {
        ConForm::Rendered => Ok(con_iter(&next, theta)
            .expect("numerated sentences are closed")
            .rendered),
        ConForm::Unfolded => {
            let n = next
                .as_finite()
                .ok_or_else(|| AsetError::NotFinite(config.alpha.to_string()))?;
            Ok(unfold_n(n, theta))
        }
    }
}

/// Runs stages `0..=budget`.
pub fn run_enumeration(config: &AsetConfig) -> Result<AsetRun, AsetError> {
    if config.budget > MAX_BUDGET {
        return Err(AsetError::BudgetTooLarge(config.budget));
    }
    if config.con_form == ConForm::Unfolded && config.alpha.as_finite().is_none() {
        return Err(AsetError::NotFinite(config.alpha.to_string()));
    }
    let enumeration = config.enumeration.prefix(config.budget as usize)?;
    let mut run = AsetRun {
        alpha: config.alpha.clone(),
        budget: config.budget,
        con_form: config.con_form,
        enumeration,
        nodes: Vec::new(),
        events: Vec::new(),
        index: HashMap::new(),
    };
    run.push(config, 0, None, None, Formula::top())?;
    let mut frontier = vec![0usize];
    for stage in 1..=config.budget {
        let phi = run.enumeration[stage as usize - 1].clone();
        let mut next = Vec::with_capacity(frontier.len() * 2);
        for &p in &frontier {
            let psi = run.nodes[p].active.clone();
            let pos = run.push(
                config,
                stage,
                Some(p),
                Some(true),
                Formula::and(psi.clone(), phi.clone()),
            )?;
            let neg = run.push(
                config,
                stage,
                Some(p),
                Some(false),
                Formula::and(psi, Formula::not(phi.clone())),
            )?;
            run.nodes[p].children = Some([pos, neg]);
            next.extend([pos, neg]);
        }
        frontier = next;
    }
    Ok(run)
}

impl AsetRun {
    fn push(
        &mut self,
        config: &AsetConfig,
        stage: u32,
        parent: Option<usize>,
        polarity: Option<bool>,
        numerated: Formula,
    ) -> Result<usize, AsetError> {
        if config.con_form == ConForm::Rendered && numerated.info().size > MAX_SENTENCE_SIZE {
            return Err(AsetError::SentenceTooLarge {
                stage,
                size: numerated.info().size,
            });
        }
        let con = con_conjunct(config, &numerated)?;
        let active = Formula::and(numerated.clone(), con.clone());
        let id = self.nodes.len();
        self.events.push(AsetEvent {
            stage,
            node_id: id,
            parent_id: parent,
            polarity: polarity.map(|p| if p { "+" } else { "-" }.to_string()),
            formula_ref: formula_ref(&numerated),
        });
        self.index.insert(numerated.clone(), id);
        self.nodes.push(AsetNode {
            id,
            stage,
            parent,
            polarity,
            numerated,
            con,
            active,
            children: None,
        });
        Ok(id)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> &AsetNode {
        &self.nodes[0]
    }

    pub fn node(&self, id: usize) -> &AsetNode {
        &self.nodes[id]
    }

    /// Node numerating exactly this sentence, if any.
    pub fn find(&self, theta: &Formula) -> Option<&AsetNode> {
        self.index.get(theta).map(|&i| &self.nodes[i])
    }

    pub fn at_stage(&self, stage: u32) -> impl Iterator<Item = &AsetNode> {
        self.nodes.iter().filter(move |n| n.stage == stage)
    }

    /// Numerated through `stage`, inclusive.
    pub fn cumulative(&self, stage: u32) -> usize {
        self.nodes.iter().filter(|n| n.stage <= stage).count()
    }

    /// Sentences active after `stage` has run: exactly the ones it numerated.
    pub fn active_after(&self, stage: u32) -> Vec<&AsetNode> {
        self.at_stage(stage).collect()
    }

    /// Ancestors of `id`, nearest first, excluding `id`.
    pub fn ancestors(&self, id: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut cur = self.nodes[id].parent;
        while let Some(p) = cur {
            out.push(p);
            cur = self.nodes[p].parent;
        }
        out
    }

    /// Strict descendant order: `a` lies strictly below `b`.
    pub fn is_descendant(&self, a: usize, b: usize) -> bool {
        self.ancestors(a).contains(&b)
    }

    pub fn same_branch(&self, a: usize, b: usize) -> bool {
        a == b || self.is_descendant(a, b) || self.is_descendant(b, a)
    }

    /// JSON event log; identical configurations give identical bytes.
    pub fn event_log_json(&self) -> String {
        serde_json::to_string_pretty(&self.events).expect("events serialize")
    }

    /// Canonical S-expressions of numerated sentences keyed by node id.
    pub fn formulas(&self) -> BTreeMap<usize, String> {
        self.nodes
            .iter()
            .map(|n| (n.id, print(&n.numerated)))
            .collect()
    }

    /// Skeletons of all numerated sentences in one shared context, so that
    /// a split sentence `φₙ` is the same atom on both sides.
    pub fn skeletons(&self, options: SkeletonOptions) -> (Skeleton, Vec<ModalFormula>) {
        let mut sk = Skeleton::new(options);
        let out = self.nodes.iter().map(|n| sk.map(&n.numerated)).collect();
        (sk, out)
    }
}

fn sat(f: &ModalFormula) -> bool {
    matches!(
        sat_check(&abstract_boxes(f)).expect("boxes abstracted"),
        SatResult::Satisfiable(_)
    )
}

fn checks(passed: usize, total: usize, scope: &str) -> Verdict {
    let w = Witness::Checks { passed, total };
    if passed == total {
        Verdict::established(w, scope)
    } else {
        Verdict::refuted(w, scope)
    }
}

/// Stage counts and tree shape.
pub fn check_counts(run: &AsetRun) -> Verdict {
    let mut passed = 0;
    let mut total = 0;
    let mut check = |ok: bool| {
        total += 1;
        passed += ok as usize;
    };
    check(
        run.root().numerated == Formula::top()
            && run.root().stage == 0
            && run.root().parent.is_none(),
    );
    for stage in 0..=run.budget {
        check(run.cumulative(stage) == (1usize << (stage + 1)) - 1);
        check(run.active_after(stage).len() == 1usize << stage);
    }
    for n in &run.nodes {
        match n.parent {
            Some(p) => check(
                run.nodes[p].stage + 1 == n.stage
                    && run.nodes[p].children.is_some_and(|c| c.contains(&n.id)),
            ),
            None => check(n.id == 0),
        }
        check(n.children.is_some() == (n.stage < run.budget));
        if let Some([a, b]) = n.children {
            check(run.nodes[a].polarity == Some(true) && run.nodes[b].polarity == Some(false));
        }
    }
    checks(
        passed,
        total,
        "counts and binary-tree shape of the finite run",
    )
}

/// Every child's skeleton propositionally entails its parent's.
pub fn check_descendant_implication(run: &AsetRun) -> Verdict {
    let (_, s) = run.skeletons(SkeletonOptions::default());
    let edges: Vec<(usize, usize)> = run
        .nodes
        .iter()
        .filter_map(|n| n.parent.map(|p| (n.id, p)))
        .collect();
    let passed = edges
        .iter()
        .filter(|&&(c, p)| {
            !sat(&ModalFormula::and(
                s[c].clone(),
                ModalFormula::not(s[p].clone()),
            ))
        })
        .count();
    checks(
        passed,
        edges.len(),
        "propositional, skeleton level, all tree edges",
    )
}

/// Pairs not on a common branch have jointly unsatisfiable skeletons.
pub fn check_branch_inconsistency(run: &AsetRun) -> Verdict {
    let (_, s) = run.skeletons(SkeletonOptions::default());
    let mut passed = 0;
    let mut total = 0;
    for a in 0..run.len() {
        for b in a + 1..run.len() {
            if !run.same_branch(a, b) {
                total += 1;
                passed += !sat(&ModalFormula::and(s[a].clone(), s[b].clone())) as usize;
            }
        }
    }
    checks(
        passed,
        total,
        "propositional, skeleton level, all cross-branch pairs",
    )
}

/// Pairs on a common branch have jointly satisfiable skeletons (the
/// inconsistency check has no false positives). Meaningful for
/// enumerations without propositionally refutable entries.
pub fn check_same_branch_sat(run: &AsetRun) -> Verdict {
    let (_, s) = run.skeletons(SkeletonOptions::default());
    let mut passed = 0;
    let mut total = 0;
    for a in 0..run.len() {
        for b in a..run.len() {
            if run.same_branch(a, b) {
                total += 1;
                passed += sat(&ModalFormula::and(s[a].clone(), s[b].clone())) as usize;
            }
        }
    }
    checks(
        passed,
        total,
        "propositional, skeleton level, all same-branch pairs",
    )
}

/// The first enumerated sentence (index `n < budget`) whose skeleton is
/// refutable, deciding closed arithmetic atoms.
pub fn first_refutable_index(run: &AsetRun) -> Option<usize> {
    let mut sk = Skeleton::new(SkeletonOptions {
        decide_closed: true,
    });
    run.enumeration.iter().position(|f| !sat(&sk.map(f)))
}

/// A numerated sentence with a refutable skeleton exists at stage `n+1`,
/// where `φₙ` is the first refutable entry of the enumeration prefix.
pub fn check_refutable_member(run: &AsetRun) -> Verdict {
    let Some(n) = first_refutable_index(run) else {
        return Verdict::undecided(format!(
            "no refutable sentence among the first {} enumerated",
            run.enumeration.len()
        ));
    };
    let (_, s) = run.skeletons(SkeletonOptions {
        decide_closed: true,
    });
    let stage = n as u32 + 1;
    let witness = run
        .nodes
        .iter()
        .find(|node| node.stage == stage && node.polarity == Some(true) && !sat(&s[node.id]));
    let scope =
        format!("propositional with closed atoms decided; enumeration index {n}, stage {stage}");
    match witness {
        Some(node) => Verdict::established(
            Witness::Note {
                text: format!("node {} at stage {} is refutable", node.id, node.stage),
            },
            scope,
        ),
        None => Verdict::refuted(
            Witness::Note {
                text: "refutable member not found where expected".into(),
            },
            scope,
        ),
    }
}

/// A refutable numerated sentence (stage `n+1`, positive child of the
/// leftmost node) for use as the `θ⊥` witness.
pub fn refutable_member(run: &AsetRun) -> Option<&AsetNode> {
    let n = first_refutable_index(run)?;
    let (_, s) = run.skeletons(SkeletonOptions {
        decide_closed: true,
    });
    run.nodes
        .iter()
        .find(|node| node.stage == n as u32 + 1 && !sat(&s[node.id]))
}

/// The branch chosen by the truth values of `φ₀, …, φ_{budget-1}`: node ids
/// from the root down, one per stage.
pub fn true_path(run: &AsetRun) -> Result<Vec<usize>, AsetError> {
    let mut path = vec![0];
    let mut cur = 0;
    for (i, phi) in run.enumeration.iter().enumerate() {
        let truth = match eval_sentence(phi) {
            Ok(TruthValue::True) => true,
            Ok(TruthValue::False) => false,
            Err(_) => return Err(AsetError::Undecidable { index: i }),
        };
        let [pos, neg] = run.nodes[cur].children.expect("expanded below budget");
        cur = if truth { pos } else { neg };
        path.push(cur);
    }
    Ok(path)
}

/// `θ ∈ 𝔄_α` as a Σ₁ atom over the code of `θ`.
pub fn membership_atom(alpha: &OrdNotation, theta: Term) -> Formula {
    Formula::member(ENUMERATOR, vec![Term::num(alpha.code()), theta])
}

/// Membership atom for a concrete sentence.
pub fn membership_of(alpha: &OrdNotation, theta: &Formula) -> Formula {
    membership_atom(alpha, Term::num(godel_encode(theta)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "answer", rename_all = "kebab-case")]
pub enum MemberAnswer {
    Member {
        stage: u32,
        node: usize,
    },
    /// Not numerated by the budget; never a definitive "no".
    NotWithinBudget,
}

/// Bounded evaluator for membership atoms: runs the enumeration itself and
/// answers from the numerated sentences.
#[derive(Debug, Clone)]
pub struct MembershipOracle {
    pub run: AsetRun,
}

impl MembershipOracle {
    pub fn new(config: &AsetConfig) -> Result<Self, AsetError> {
        Ok(MembershipOracle {
            run: run_enumeration(config)?,
        })
    }

    pub fn from_run(run: AsetRun) -> Self {
        MembershipOracle { run }
    }

    pub fn evaluate(&self, theta: &Formula) -> MemberAnswer {
        match self.run.find(theta) {
            Some(n) => MemberAnswer::Member {
                stage: n.stage,
                node: n.id,
            },
            None => MemberAnswer::NotWithinBudget,
        }
    }

    /// Evaluates a closed atom `(mem aset (num a) (num c))`; `None` when the
    /// atom is not about this run's ordinal or its arguments are not closed.
    pub fn evaluate_atom(&self, atom: &Formula) -> Option<MemberAnswer> {
        let FormulaKind::Member(name, args) = atom.kind() else {
            return None;
        };
        if &**name != ENUMERATOR || args.len() != 2 {
            return None;
        }
        let a = crate::formula::eval_term(&args[0]).ok()?;
        if a != self.run.alpha.code() {
            return None;
        }
        let code = crate::formula::eval_term(&args[1]).ok()?;
        match godel_decode(&code) {
            Ok(theta) => Some(self.evaluate(&theta)),
            Err(_) => Some(MemberAnswer::NotWithinBudget),
        }
    }
}

/// Membership atoms are Σ₁ and the evaluator reproduces the event log:
/// every logged sentence is a member at its logged stage.
pub fn check_membership_consistency(run: &AsetRun) -> Verdict {
    let oracle = MembershipOracle::from_run(run.clone());
    let mut passed = 0;
    let mut total = 0;
    for (node, ev) in run.nodes.iter().zip(&run.events) {
        total += 2;
        let atom = membership_of(&run.alpha, &node.numerated);
        passed += (crate::formula::classify(&atom) == Ok(crate::formula::ComplexityClass::sigma(1)))
            as usize;
        let ok = oracle.evaluate_atom(&atom)
            == Some(MemberAnswer::Member {
                stage: ev.stage,
                node: ev.node_id,
            })
            && ev.formula_ref == formula_ref(&node.numerated);
        passed += ok as usize;
    }
    checks(
        passed,
        total,
        "Σ₁ classification and evaluator agreement with the run log",
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(alpha: &str, e: Enumeration, budget: u32) -> AsetConfig {
        AsetConfig::new(alpha.parse().unwrap(), e, budget)
    }

    #[test]
    fn godel_order_starts_with_constants() {
        let p = Enumeration::Godel.prefix(4).unwrap();
        assert_eq!(p[0], Formula::top());
        assert_eq!(p[1], Formula::bot());
        assert_eq!(p[2], Formula::not(Formula::top()));
        assert_eq!(p[3], Formula::not(Formula::bot()));
    }

    #[test]
    fn curated_prefix_skips_duplicates() {
        let e = Enumeration::curated(vec![Formula::bot()]);
        let p = e.prefix(3).unwrap();
        assert_eq!(
            p,
            vec![Formula::bot(), Formula::top(), Formula::not(Formula::top())]
        );
        let bad = Enumeration::curated(vec![Formula::bot(), Formula::bot()]);
        assert_eq!(bad.prefix(1).unwrap_err(), AsetError::Repeated { index: 1 });
    }

    #[test]
    fn budget_zero_numerates_top() {
        let run = run_enumeration(&cfg("1", Enumeration::Godel, 0)).unwrap();
        assert_eq!(run.len(), 1);
        assert_eq!(run.root().numerated, Formula::top());
    }

    #[test]
    fn budget_three_counts() {
        let run = run_enumeration(&cfg("1", Enumeration::Decidable, 3)).unwrap();
        assert_eq!(run.len(), 15);
        assert_eq!(run.active_after(3).len(), 8);
        assert!(check_counts(&run).is_established());
        assert!(check_descendant_implication(&run).is_established());
    }

    #[test]
    fn unfolded_mode_needs_finite_alpha() {
        let c = cfg("w", Enumeration::Godel, 1).unfolded();
        assert!(matches!(run_enumeration(&c), Err(AsetError::NotFinite(_))));
        assert!(run_enumeration(&cfg("w", Enumeration::Godel, 1)).is_ok());
    }

    #[test]
    fn membership_answers() {
        let run = run_enumeration(&cfg("0", Enumeration::Decidable, 1)).unwrap();
        let oracle = MembershipOracle::from_run(run.clone());
        assert_eq!(
            oracle.evaluate(&Formula::top()),
            MemberAnswer::Member { stage: 0, node: 0 }
        );
        let child = &run.node(1).numerated;
        assert_eq!(
            oracle.evaluate(child),
            MemberAnswer::Member { stage: 1, node: 1 }
        );
        let shallow = MembershipOracle::new(&cfg("0", Enumeration::Decidable, 0)).unwrap();
        assert_eq!(shallow.evaluate(child), MemberAnswer::NotWithinBudget);
        assert!(check_membership_consistency(&run).is_established());
    }

    #[test]
    fn true_path_follows_truth() {
        let run = run_enumeration(&cfg("0", Enumeration::Decidable, 2)).unwrap();
        let path = true_path(&run).unwrap();
        assert_eq!(path.len(), 3);
        assert_eq!(run.node(path[1]).polarity, Some(true));
        assert_eq!(run.node(path[2]).polarity, Some(false));
        let open = Enumeration::curated(vec![parse("(forall x (le (z) x))").unwrap()]);
        let run = run_enumeration(&cfg("0", open, 1)).unwrap();
        assert_eq!(
            true_path(&run).unwrap_err(),
            AsetError::Undecidable { index: 0 }
        );
    }

    #[test]
    fn refutable_member_found() {
        let run =
            run_enumeration(&cfg("0", Enumeration::curated(vec![Formula::bot()]), 1)).unwrap();
        assert!(check_refutable_member(&run).is_established());
        let run = run_enumeration(&cfg("0", Enumeration::Decidable, 1)).unwrap();
        assert!(check_refutable_member(&run).is_undecided());
    }
}
