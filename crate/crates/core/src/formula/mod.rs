//! First-order arithmetic over the signature {0, S, +, ·, 2^x, =, ≤}, with
//! designated provability, decidable and membership atoms.
//!
//! Terms and formulas are hash-consed: two structurally equal values are the
//! same allocation, so `==` is a pointer comparison. Bound variables are de
//! Bruijn indices, which makes alpha-equivalent formulas identical. Free
//! variables are numbered `(v i)`.

mod classify;
mod eval;
mod godel;
mod sexp;
mod skeleton;
mod subst;

pub use classify::{classify, ComplexityClass, Side};
pub use eval::{eval_sentence, eval_term, EvalError, TruthValue};
pub use godel::{godel_decode, godel_encode, DecodeError};
pub use sexp::{parse, parse_term, print, print_term, ParseError};
pub use skeleton::{skeleton, Skeleton, SkeletonOptions};
pub use subst::{
    fill_holes, instantiate, open_binder, replace_term, shift_term, substitute, substitute_all,
};

use crate::intern::{node_identity, Node, Table};
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use std::fmt;
use std::sync::{Arc, OnceLock};

/// Largest exponent for which `2^k` is materialized as a numeral value.
pub const MAX_EXP2_BITS: u64 = 1 << 24;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum TermKind {
    /// Canonical numeral. Its structural reading is the binary expansion
    /// `2^k1 + (2^k2 + ... )`, with `S0` for the unit bit and `0` for zero.
    Num(BigUint),
    Free(u32),
    Bound(u32),
    Succ(Term),
    Plus(Term, Term),
    Times(Term, Term),
    Exp2(Term),
    /// `sub(c, i, t)`: the code of the formula coded by `c` with free
    /// variable `i` replaced by the numeral of `t`.
    Sub(Term, u32, Term),
}

#[derive(Debug, Clone)]
pub struct TermInfo {
    /// One more than the largest loose de Bruijn index, 0 if none.
    pub loose: u32,
    pub free: Arc<[u32]>,
    /// Node count of the fully expanded term (numerals in binary expansion).
    pub size: u64,
}

#[derive(Clone)]
pub struct Term(Arc<Node<TermKind, TermInfo>>);
node_identity!(Term);

fn term_table() -> &'static Table<TermKind, TermInfo> {
    static T: OnceLock<Table<TermKind, TermInfo>> = OnceLock::new();
    T.get_or_init(Table::new)
}

fn merge_free(a: &[u32], b: &[u32]) -> Arc<[u32]> {
    let mut v: Vec<u32> = a.iter().chain(b).copied().collect();
    v.sort_unstable();
    v.dedup();
    v.into()
}

/// Expanded size of the canonical binary-expansion term for `n`.
fn numeral_size(n: &BigUint) -> u64 {
    if n.is_zero() {
        return 1;
    }
    let mut size = 0u64;
    let mut terms = 0u64;
    for k in 0..n.bits() {
        if n.bit(k) {
            terms += 1;
            size += if k == 0 {
                2
            } else {
                1 + numeral_size(&BigUint::from(k))
            };
        }
    }
    size + terms - 1
}

impl Term {
    fn mk(kind: TermKind) -> Term {
        Term(term_table().intern(kind, |k| {
            match k {
                TermKind::Num(n) => TermInfo {
                    loose: 0,
                    free: Arc::from([]),
                    size: numeral_size(n),
                },
                TermKind::Free(i) => TermInfo {
                    loose: 0,
                    free: Arc::from([*i]),
                    size: 1,
                },
                TermKind::Bound(i) => TermInfo {
                    loose: i + 1,
                    free: Arc::from([]),
                    size: 1,
                },
                TermKind::Succ(t) | TermKind::Exp2(t) => TermInfo {
                    loose: t.info().loose,
                    free: t.info().free.clone(),
                    size: t.info().size.saturating_add(1),
                },
                TermKind::Plus(a, b) | TermKind::Times(a, b) | TermKind::Sub(a, _, b) => TermInfo {
                    loose: a.info().loose.max(b.info().loose),
                    free: merge_free(&a.info().free, &b.info().free),
                    size: a
                        .info()
                        .size
                        .saturating_add(b.info().size)
                        .saturating_add(1),
                },
            }
        }))
    }

    pub fn kind(&self) -> &TermKind {
        &self.0.kind
    }

    pub fn info(&self) -> &TermInfo {
        &self.0.info
    }

    pub fn id(&self) -> u64 {
        self.0.id
    }

    pub fn zero() -> Term {
        Term::num(BigUint::zero())
    }

    pub fn num(n: impl Into<BigUint>) -> Term {
        Term::mk(TermKind::Num(n.into()))
    }

    pub fn free(i: u32) -> Term {
        Term::mk(TermKind::Free(i))
    }

    pub fn bound(i: u32) -> Term {
        Term::mk(TermKind::Bound(i))
    }

    pub fn succ(t: Term) -> Term {
        if let Some(n) = t.as_num() {
            if n.is_zero() {
                return Term::num(1u32);
            }
        }
        Term::mk(TermKind::Succ(t))
    }

    pub fn plus(a: Term, b: Term) -> Term {
        // 2^k + m with 0 < m < 2^k, k >= 1, is the canonical expansion of 2^k + m.
        if let (Some(x), Some(m)) = (a.as_num(), b.as_num()) {
            if x.count_ones() == 1 && x.bits() >= 2 && !m.is_zero() && m < x {
                return Term::num(x + m);
            }
        }
        Term::mk(TermKind::Plus(a, b))
    }

    pub fn times(a: Term, b: Term) -> Term {
        Term::mk(TermKind::Times(a, b))
    }

    pub fn exp2(t: Term) -> Term {
        if let Some(k) = t.as_num() {
            if let Some(k) = k.to_u64() {
                if (1..MAX_EXP2_BITS).contains(&k) {
                    return Term::num(BigUint::one() << k);
                }
            }
        }
        Term::mk(TermKind::Exp2(t))
    }

    pub fn sub(code: Term, var: u32, value: Term) -> Term {
        Term::mk(TermKind::Sub(code, var, value))
    }

    pub fn as_num(&self) -> Option<&BigUint> {
        match self.kind() {
            TermKind::Num(n) => Some(n),
            _ => None,
        }
    }

    pub fn is_closed(&self) -> bool {
        self.info().loose == 0 && self.info().free.is_empty()
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", print_term(self))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", print_term(self))
    }
}

/// Decidable (elementary) relations available as atoms.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum DecidableAtom {
    /// `ord-d`: the argument codes a canonical ordinal notation.
    OrdWellFormed,
    /// `ord-lt`: both arguments code canonical notations and the first is below the second.
    OrdLess,
}

impl DecidableAtom {
    pub const ALL: [DecidableAtom; 2] = [DecidableAtom::OrdWellFormed, DecidableAtom::OrdLess];

    pub fn name(self) -> &'static str {
        match self {
            DecidableAtom::OrdWellFormed => "ord-d",
            DecidableAtom::OrdLess => "ord-lt",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            DecidableAtom::OrdWellFormed => 1,
            DecidableAtom::OrdLess => 2,
        }
    }

    pub fn from_name(name: &str) -> Option<DecidableAtom> {
        Self::ALL.into_iter().find(|a| a.name() == name)
    }

    pub fn index(self) -> u32 {
        self as u32
    }

    pub fn from_index(i: u32) -> Option<DecidableAtom> {
        Self::ALL.get(i as usize).copied()
    }
}

/// Enumerator identifiers accepted in membership atoms.
pub const KNOWN_ENUMERATORS: &[&str] = &["aset"];

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum FormulaKind {
    Eq(Term, Term),
    Le(Term, Term),
    Decidable(DecidableAtom, Vec<Term>),
    /// `Pr_T` applied to a quoted template whose holes are filled with the
    /// sentences coded by the argument terms.
    Provable(Formula, Vec<Term>),
    Member(Arc<str>, Vec<Term>),
    /// Inside a provability template: the sentence coded by argument `i`.
    Hole(u32),
    Top,
    Bot,
    Not(Formula),
    And(Formula, Formula),
    Or(Formula, Formula),
    Imp(Formula, Formula),
    Forall(Formula),
    Exists(Formula),
    /// `∀x ≤ t. body`; `t` is outside the binder's scope.
    BoundedForall(Term, Formula),
    BoundedExists(Term, Formula),
}

#[derive(Debug, Clone)]
pub struct FormulaInfo {
    pub loose: u32,
    pub free: Arc<[u32]>,
    /// One more than the largest hole index, 0 if none.
    pub holes: u32,
    /// Tree size with numerals counted in binary expansion.
    pub size: u64,
}

#[derive(Clone)]
pub struct Formula(Arc<Node<FormulaKind, FormulaInfo>>);
node_identity!(Formula);

fn formula_table() -> &'static Table<FormulaKind, FormulaInfo> {
    static T: OnceLock<Table<FormulaKind, FormulaInfo>> = OnceLock::new();
    T.get_or_init(Table::new)
}

fn terms_info(ts: &[Term]) -> (u32, Arc<[u32]>, u64) {
    let mut loose = 0;
    let mut free: Arc<[u32]> = Arc::from([]);
    let mut size = 1u64;
    for t in ts {
        loose = loose.max(t.info().loose);
        free = merge_free(&free, &t.info().free);
        size = size.saturating_add(t.info().size);
    }
    (loose, free, size)
}

fn compute_info(k: &FormulaKind) -> FormulaInfo {
    use FormulaKind::*;
    let leaf = |holes| FormulaInfo {
        loose: 0,
        free: Arc::from([]),
        holes,
        size: 1,
    };
    match k {
        Top | Bot => leaf(0),
        Hole(i) => leaf(i + 1),
        Eq(a, b) | Le(a, b) => {
            let (loose, free, size) = terms_info(&[a.clone(), b.clone()]);
            FormulaInfo {
                loose,
                free,
                holes: 0,
                size,
            }
        }
        Decidable(_, ts) | Member(_, ts) => {
            let (loose, free, size) = terms_info(ts);
            FormulaInfo {
                loose,
                free,
                holes: 0,
                size,
            }
        }
        Provable(tpl, ts) => {
            let (loose, free, size) = terms_info(ts);
            FormulaInfo {
                loose,
                free,
                holes: 0,
                size: size.saturating_add(tpl.info().size),
            }
        }
        Not(f) => FormulaInfo {
            size: f.info().size.saturating_add(1),
            ..f.info().clone()
        },
        And(a, b) | Or(a, b) | Imp(a, b) => FormulaInfo {
            loose: a.info().loose.max(b.info().loose),
            free: merge_free(&a.info().free, &b.info().free),
            holes: a.info().holes.max(b.info().holes),
            size: a
                .info()
                .size
                .saturating_add(b.info().size)
                .saturating_add(1),
        },
        Forall(f) | Exists(f) => FormulaInfo {
            loose: f.info().loose.saturating_sub(1),
            free: f.info().free.clone(),
            holes: f.info().holes,
            size: f.info().size.saturating_add(1),
        },
        BoundedForall(t, f) | BoundedExists(t, f) => FormulaInfo {
            loose: t.info().loose.max(f.info().loose.saturating_sub(1)),
            free: merge_free(&t.info().free, &f.info().free),
            holes: f.info().holes,
            size: f
                .info()
                .size
                .saturating_add(t.info().size)
                .saturating_add(1),
        },
    }
}

impl Formula {
    pub fn mk(kind: FormulaKind) -> Formula {
        Formula(formula_table().intern(kind, compute_info))
    }

    pub fn kind(&self) -> &FormulaKind {
        &self.0.kind
    }

    pub fn info(&self) -> &FormulaInfo {
        &self.0.info
    }

    /// Process-unique node identifier. Not stable across processes.
    pub fn id(&self) -> u64 {
        self.0.id
    }

    pub fn top() -> Formula {
        Formula::mk(FormulaKind::Top)
    }

    pub fn bot() -> Formula {
        Formula::mk(FormulaKind::Bot)
    }

    pub fn eq(a: Term, b: Term) -> Formula {
        Formula::mk(FormulaKind::Eq(a, b))
    }

    pub fn le(a: Term, b: Term) -> Formula {
        Formula::mk(FormulaKind::Le(a, b))
    }

    pub fn decidable(atom: DecidableAtom, args: Vec<Term>) -> Formula {
        assert_eq!(args.len(), atom.arity(), "arity of {}", atom.name());
        Formula::mk(FormulaKind::Decidable(atom, args))
    }

    /// `Pr_T(template[holes := args])`. The template must be closed.
    pub fn provable(template: Formula, args: Vec<Term>) -> Formula {
        assert!(
            template.info().loose == 0 && template.info().free.is_empty(),
            "provability templates are quoted and must be closed"
        );
        assert!(
            template.info().holes as usize <= args.len(),
            "template has more holes than arguments"
        );
        Formula::mk(FormulaKind::Provable(template, args))
    }

    /// `Pr_T(⌜ψ⌝)` for a sentence `ψ`.
    pub fn pr(psi: Formula) -> Formula {
        Formula::provable(psi, Vec::new())
    }

    /// `Con_T(ψ) := ¬Pr_T(⌜¬ψ⌝)`.
    pub fn con(psi: Formula) -> Formula {
        Formula::not(Formula::pr(Formula::not(psi)))
    }

    pub fn member(name: &str, args: Vec<Term>) -> Formula {
        Formula::mk(FormulaKind::Member(Arc::from(name), args))
    }

    pub fn hole(i: u32) -> Formula {
        Formula::mk(FormulaKind::Hole(i))
    }

    pub fn not(f: Formula) -> Formula {
        Formula::mk(FormulaKind::Not(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::mk(FormulaKind::And(a, b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::mk(FormulaKind::Or(a, b))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::mk(FormulaKind::Imp(a, b))
    }

    /// Left-nested conjunction; the empty conjunction is `⊤`.
    pub fn and_all(items: impl IntoIterator<Item = Formula>) -> Formula {
        items
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or_else(Formula::top)
    }

    /// Binds de Bruijn index 0 of `body`.
    pub fn forall(body: Formula) -> Formula {
        Formula::mk(FormulaKind::Forall(body))
    }

    pub fn exists(body: Formula) -> Formula {
        Formula::mk(FormulaKind::Exists(body))
    }

    pub fn bounded_forall(bound: Term, body: Formula) -> Formula {
        Formula::mk(FormulaKind::BoundedForall(bound, body))
    }

    pub fn bounded_exists(bound: Term, body: Formula) -> Formula {
        Formula::mk(FormulaKind::BoundedExists(bound, body))
    }

    pub fn is_sentence(&self) -> bool {
        let i = self.info();
        i.loose == 0 && i.free.is_empty() && i.holes == 0
    }

    pub fn free_vars(&self) -> &[u32] {
        &self.info().free
    }

    /// Number of distinct nodes (formula and term) reachable from `self`.
    pub fn dag_size(&self) -> usize {
        distinct_nodes(std::slice::from_ref(self))
    }
}

/// Number of distinct formula and term nodes reachable from any root.
pub fn distinct_nodes(roots: &[Formula]) -> usize {
    let mut seen_f = std::collections::HashSet::new();
    let mut seen_t = std::collections::HashSet::new();
    let mut stack = roots.to_vec();
    fn visit_term(t: &Term, seen: &mut std::collections::HashSet<u64>) {
        if !seen.insert(t.id()) {
            return;
        }
        match t.kind() {
            TermKind::Succ(a) | TermKind::Exp2(a) => visit_term(a, seen),
            TermKind::Plus(a, b) | TermKind::Times(a, b) | TermKind::Sub(a, _, b) => {
                visit_term(a, seen);
                visit_term(b, seen);
            }
            _ => {}
        }
    }
    while let Some(f) = stack.pop() {
        if !seen_f.insert(f.id()) {
            continue;
        }
        use FormulaKind::*;
        match f.kind() {
            Eq(a, b) | Le(a, b) => {
                visit_term(a, &mut seen_t);
                visit_term(b, &mut seen_t);
            }
            Decidable(_, ts) | Member(_, ts) => ts.iter().for_each(|t| visit_term(t, &mut seen_t)),
            Provable(tpl, ts) => {
                ts.iter().for_each(|t| visit_term(t, &mut seen_t));
                stack.push(tpl.clone());
            }
            Hole(_) | Top | Bot => {}
            Not(a) | Forall(a) | Exists(a) => stack.push(a.clone()),
            And(a, b) | Or(a, b) | Imp(a, b) => {
                stack.push(a.clone());
                stack.push(b.clone());
            }
            BoundedForall(t, a) | BoundedExists(t, a) => {
                visit_term(t, &mut seen_t);
                stack.push(a.clone());
            }
        }
    }
    seen_f.len() + seen_t.len()
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", print(self))
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", print(self))
    }
}

/// Number of entries in the global term and formula tables.
pub fn interned_counts() -> (usize, usize) {
    (term_table().len(), formula_table().len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_numerals_collapse() {
        // 5 = 2^2 + 2^0 = (+ (e2 (num 2)) (s z))
        let explicit = Term::plus(Term::exp2(Term::num(2u32)), Term::succ(Term::zero()));
        assert_eq!(explicit, Term::num(5u32));
        // 2^0 is written S0, not e2(0)
        assert_ne!(Term::exp2(Term::zero()), Term::num(1u32));
        // non-canonical sums stay as they are
        assert_ne!(
            Term::plus(Term::num(1u32), Term::num(1u32)),
            Term::num(2u32)
        );
    }

    #[test]
    fn numeral_size_is_logarithmic() {
        let big = Term::num(BigUint::one() << 4000u32);
        assert!(big.info().size < 128, "{}", big.info().size);
        let dense = Term::num((BigUint::one() << 1000u32) - 1u32);
        assert!(dense.info().size < 1000 * 100, "{}", dense.info().size);
    }

    #[test]
    fn hash_consing_shares_nodes() {
        let a = Formula::and(Formula::top(), Formula::eq(Term::zero(), Term::zero()));
        let b = Formula::and(Formula::top(), Formula::eq(Term::zero(), Term::zero()));
        assert!(Arc::ptr_eq(&a.0, &b.0));
    }

    #[test]
    fn and_all_of_nothing_is_top() {
        assert_eq!(Formula::and_all(Vec::new()), Formula::top());
    }
}
