//! Three-valued verification outcomes with auditable witnesses.

use crate::gl::{GlProofSummary, KripkeModel};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    GlProof(GlProofSummary),
    Countermodel(KripkeModel),
    /// A satisfying assignment of a propositional formula (atoms set true).
    SatModel {
        true_atoms: Vec<String>,
    },
    /// A propositional formula shown unsatisfiable by exhaustive search.
    Unsat,
    /// Aggregate of individually witnessed checks.
    Checks {
        passed: usize,
        total: usize,
    },
    Note {
        text: String,
    },
    Nested {
        parts: BTreeMap<String, Verdict>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Verdict {
    Established { witness: Witness, scope: String },
    Refuted { witness: Witness, scope: String },
    UndecidedAtBudget { note: String },
}

impl Verdict {
    pub fn established(witness: Witness, scope: impl Into<String>) -> Self {
        Verdict::Established {
            witness,
            scope: scope.into(),
        }
    }

    pub fn refuted(witness: Witness, scope: impl Into<String>) -> Self {
        Verdict::Refuted {
            witness,
            scope: scope.into(),
        }
    }

    pub fn undecided(note: impl Into<String>) -> Self {
        Verdict::UndecidedAtBudget { note: note.into() }
    }

    pub fn is_established(&self) -> bool {
        matches!(self, Verdict::Established { .. })
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted { .. })
    }

    pub fn is_undecided(&self) -> bool {
        matches!(self, Verdict::UndecidedAtBudget { .. })
    }

    pub fn status(&self) -> &'static str {
        match self {
            Verdict::Established { .. } => "established",
            Verdict::Refuted { .. } => "refuted",
            Verdict::UndecidedAtBudget { .. } => "undecided-at-budget",
        }
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Established { witness, .. } | Verdict::Refuted { witness, .. } => {
                Some(witness)
            }
            Verdict::UndecidedAtBudget { .. } => None,
        }
    }

    pub fn countermodel(&self) -> Option<&KripkeModel> {
        match self.witness() {
            Some(Witness::Countermodel(m)) => Some(m),
            _ => None,
        }
    }

    /// Replaces the scope note, keeping status and witness.
    pub fn with_scope(self, s: impl Into<String>) -> Self {
        match self {
            Verdict::Established { witness, .. } => Verdict::established(witness, s),
            Verdict::Refuted { witness, .. } => Verdict::refuted(witness, s),
            u => u,
        }
    }

    /// Conjunction of named sub-verdicts: established iff all are, refuted if
    /// any is refuted, otherwise undecided.
    pub fn all(parts: BTreeMap<String, Verdict>, scope: impl Into<String>) -> Self {
        let scope = scope.into();
        if let Some((name, v)) = parts.iter().find(|(_, v)| v.is_refuted()) {
            let scope = format!("{scope}; refuted at `{name}`: {}", v.scope_or_note());
            return Verdict::refuted(Witness::Nested { parts }, scope);
        }
        if let Some((name, v)) = parts.iter().find(|(_, v)| v.is_undecided()) {
            return Verdict::undecided(format!("{scope}; `{name}`: {}", v.scope_or_note()));
        }
        Verdict::established(Witness::Nested { parts }, scope)
    }

    pub fn scope_or_note(&self) -> &str {
        match self {
            Verdict::Established { scope, .. } | Verdict::Refuted { scope, .. } => scope,
            Verdict::UndecidedAtBudget { note } => note,
        }
    }
}
