//! Backward proof search in a cut-free sequent calculus for GL.
//!
//! Sequents are pairs of sets of subformulas of the input, indexed locally
//! (children before parents, first-visit order) so that search order and
//! witnesses do not depend on global interning order. Propositional rules are
//! the invertible G3 rules with the principal formula removed; the only modal
//! rule is
//!
//! ```text
//!   □Γ, Γ, □A ⇒ A
//!  ---------------- (GLR)
//!   Σ, □Γ ⇒ □A, Δ
//! ```
//!
//! which strictly grows the boxed antecedent, so search terminates. Every
//! proof node records the sub-sequent it actually proves; when a premise
//! proof does not use the formulas its rule introduced, it proves the
//! conclusion on its own and the remaining premises are skipped.

use super::kripke::KripkeModel;
use crate::modal::{ModalFormula, ModalKind};
use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum LKind {
    Atom(u32),
    Top,
    Bot,
    Not(u32),
    And(u32, u32),
    Or(u32, u32),
    Imp(u32, u32),
    Box(u32),
}

/// Local index of the subformulas of one input formula.
#[derive(Debug, Clone)]
pub struct LocalTable {
    pub(crate) kinds: Vec<LKind>,
    pub(crate) atoms: Vec<String>,
    pub(crate) formulas: Vec<ModalFormula>,
    root: u32,
}

impl LocalTable {
    pub fn new(f: &ModalFormula) -> Self {
        let subs = f.subformulas();
        let index: HashMap<u64, u32> = subs
            .iter()
            .enumerate()
            .map(|(i, g)| (g.id(), i as u32))
            .collect();
        let mut atoms: Vec<String> = Vec::new();
        let kinds = subs
            .iter()
            .map(|g| match g.kind() {
                ModalKind::Atom(a) => {
                    let i = atoms.iter().position(|x| **x == **a).unwrap_or_else(|| {
                        atoms.push(a.to_string());
                        atoms.len() - 1
                    });
                    LKind::Atom(i as u32)
                }
                ModalKind::Top => LKind::Top,
                ModalKind::Bot => LKind::Bot,
                ModalKind::Not(a) => LKind::Not(index[&a.id()]),
                ModalKind::Box(a) => LKind::Box(index[&a.id()]),
                ModalKind::And(a, b) => LKind::And(index[&a.id()], index[&b.id()]),
                ModalKind::Or(a, b) => LKind::Or(index[&a.id()], index[&b.id()]),
                ModalKind::Imp(a, b) => LKind::Imp(index[&a.id()], index[&b.id()]),
            })
            .collect();
        LocalTable {
            kinds,
            atoms,
            root: (subs.len() - 1) as u32,
            formulas: subs,
        }
    }

    pub fn len(&self) -> usize {
        self.kinds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kinds.is_empty()
    }
}

/// A sequent `left ⇒ right`; both sides sorted and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Sequent {
    pub left: Vec<u32>,
    pub right: Vec<u32>,
}

fn insert(v: &mut Vec<u32>, x: u32) {
    if let Err(i) = v.binary_search(&x) {
        v.insert(i, x);
    }
}

fn remove(v: &mut Vec<u32>, x: u32) {
    if let Ok(i) = v.binary_search(&x) {
        v.remove(i);
    }
}

fn contains(v: &[u32], x: u32) -> bool {
    v.binary_search(&x).is_ok()
}

fn subset(a: &[u32], b: &[u32]) -> bool {
    a.iter().all(|x| contains(b, *x))
}

impl Sequent {
    fn subset_of(&self, other: &Sequent) -> bool {
        subset(&self.left, &other.left) && subset(&self.right, &other.right)
    }

    fn with(&self, l: &[u32], r: &[u32], drop_l: Option<u32>, drop_r: Option<u32>) -> Sequent {
        let mut s = self.clone();
        if let Some(x) = drop_l {
            remove(&mut s.left, x);
        }
        if let Some(x) = drop_r {
            remove(&mut s.right, x);
        }
        l.iter().for_each(|x| insert(&mut s.left, *x));
        r.iter().for_each(|x| insert(&mut s.right, *x));
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    /// `⊥` on the left, `⊤` on the right, or a formula on both sides.
    Axiom,
    /// Propositional rule with the given principal formula.
    Prop(Side, u32),
    /// The GL modal rule with principal `□A` on the right.
    Glr(u32),
}

/// A node of a closed derivation. `sequent` is the sub-sequent actually
/// derived; a premise slot may hold any proof of a sub-sequent of the
/// expected premise (implicit weakening).
#[derive(Debug)]
pub struct ProofNode {
    pub sequent: Sequent,
    pub rule: Rule,
    pub premises: Vec<Arc<ProofNode>>,
}

/// Node of a tree-shaped countermodel: atoms true at the world and its
/// immediate subtrees (accessibility is the transitive closure).
#[derive(Debug)]
pub struct CmNode {
    pub true_atoms: Vec<u32>,
    pub children: Vec<Arc<CmNode>>,
}

#[derive(Debug, Clone)]
enum Res {
    Proved(Arc<ProofNode>),
    Refuted(Arc<CmNode>),
}

#[derive(Debug)]
pub(crate) struct BudgetExceeded;

/// Components introduced by a propositional rule: `(left, right)` per premise.
fn premises_of(kind: LKind, side: Side) -> Option<Vec<(Vec<u32>, Vec<u32>)>> {
    use LKind::*;
    Some(match (kind, side) {
        (Not(a), Side::Left) => vec![(vec![], vec![a])],
        (Not(a), Side::Right) => vec![(vec![a], vec![])],
        (And(a, b), Side::Left) => vec![(vec![a, b], vec![])],
        (And(a, b), Side::Right) => vec![(vec![], vec![a]), (vec![], vec![b])],
        (Or(a, b), Side::Left) => vec![(vec![a], vec![]), (vec![b], vec![])],
        (Or(a, b), Side::Right) => vec![(vec![], vec![a, b])],
        (Imp(a, b), Side::Left) => vec![(vec![], vec![a]), (vec![b], vec![])],
        (Imp(a, b), Side::Right) => vec![(vec![a], vec![b])],
        _ => return None,
    })
}

fn axiom(t: &LocalTable, s: &Sequent) -> Option<Sequent> {
    if let Some(&b) = s.left.iter().find(|&&x| t.kinds[x as usize] == LKind::Bot) {
        return Some(Sequent {
            left: vec![b],
            right: vec![],
        });
    }
    if let Some(&c) = s.right.iter().find(|&&x| t.kinds[x as usize] == LKind::Top) {
        return Some(Sequent {
            left: vec![],
            right: vec![c],
        });
    }
    s.left
        .iter()
        .find(|x| contains(&s.right, **x))
        .map(|&x| Sequent {
            left: vec![x],
            right: vec![x],
        })
}

fn is_alpha(kind: LKind, side: Side) -> bool {
    matches!(
        (kind, side),
        (LKind::Not(_), _)
            | (LKind::And(..), Side::Left)
            | (LKind::Or(..), Side::Right)
            | (LKind::Imp(..), Side::Right)
    )
}

fn choose_principal(t: &LocalTable, s: &Sequent) -> Option<(Side, u32)> {
    let sides = || {
        s.left
            .iter()
            .map(|&x| (Side::Left, x))
            .chain(s.right.iter().map(|&x| (Side::Right, x)))
    };
    let decomposable = |(side, x): &(Side, u32)| premises_of(t.kinds[*x as usize], *side).is_some();
    sides()
        .filter(decomposable)
        .find(|(side, x)| is_alpha(t.kinds[*x as usize], *side))
        .or_else(|| sides().find(decomposable))
}

pub(crate) struct Search<'a> {
    t: &'a LocalTable,
    memo: HashMap<Sequent, Res>,
    budget: usize,
}

impl<'a> Search<'a> {
    pub(crate) fn new(t: &'a LocalTable, budget: usize) -> Self {
        Search {
            t,
            memo: HashMap::new(),
            budget,
        }
    }

    pub(crate) fn explored(&self) -> usize {
        self.memo.len()
    }

    fn run(&mut self, s: Sequent) -> Result<Res, BudgetExceeded> {
        if let Some(r) = self.memo.get(&s) {
            return Ok(r.clone());
        }
        if self.memo.len() >= self.budget {
            return Err(BudgetExceeded);
        }
        let r = self.expand(&s)?;
        self.memo.insert(s, r.clone());
        Ok(r)
    }

    fn expand(&mut self, s: &Sequent) -> Result<Res, BudgetExceeded> {
        let t = self.t;
        if let Some(ax) = axiom(t, s) {
            return Ok(Res::Proved(Arc::new(ProofNode {
                sequent: ax,
                rule: Rule::Axiom,
                premises: vec![],
            })));
        }
        if let Some((side, p)) = choose_principal(t, s) {
            return self.propositional(s, side, p);
        }
        self.modal(s)
    }

    fn propositional(&mut self, s: &Sequent, side: Side, p: u32) -> Result<Res, BudgetExceeded> {
        let comps = premises_of(self.t.kinds[p as usize], side).expect("decomposable");
        let (dl, dr) = match side {
            Side::Left => (Some(p), None),
            Side::Right => (None, Some(p)),
        };
        let mut proofs = Vec::new();
        for (l, r) in &comps {
            let premise = s.with(l, r, dl, dr);
            match self.run(premise)? {
                Res::Refuted(cm) => return Ok(Res::Refuted(cm)),
                Res::Proved(pf) => {
                    if pf.sequent.subset_of(s) {
                        // the introduced formulas were not needed
                        return Ok(Res::Proved(pf));
                    }
                    proofs.push((pf, l, r));
                }
            }
        }
        let mut used = Sequent::default();
        match side {
            Side::Left => insert(&mut used.left, p),
            Side::Right => insert(&mut used.right, p),
        }
        for (pf, l, r) in &proofs {
            for &x in &pf.sequent.left {
                if !l.contains(&x) || contains(&s.left, x) {
                    insert(&mut used.left, x);
                }
            }
            for &x in &pf.sequent.right {
                if !r.contains(&x) || contains(&s.right, x) {
                    insert(&mut used.right, x);
                }
            }
        }
        Ok(Res::Proved(Arc::new(ProofNode {
            sequent: used,
            rule: Rule::Prop(side, p),
            premises: proofs.into_iter().map(|(pf, _, _)| pf).collect(),
        })))
    }

    fn modal(&mut self, s: &Sequent) -> Result<Res, BudgetExceeded> {
        let t = self.t;
        let boxed_left: Vec<(u32, u32)> = s
            .left
            .iter()
            .filter_map(|&x| match t.kinds[x as usize] {
                LKind::Box(b) => Some((x, b)),
                _ => None,
            })
            .collect();
        let mut children = Vec::new();
        for &x in &s.right {
            let LKind::Box(a) = t.kinds[x as usize] else {
                continue;
            };
            let premise = glr_premise(&boxed_left, x, a);
            match self.run(premise)? {
                Res::Proved(pf) => {
                    let mut used = Sequent {
                        left: vec![],
                        right: vec![x],
                    };
                    for &(bx, b) in &boxed_left {
                        if contains(&pf.sequent.left, b) || contains(&pf.sequent.left, bx) {
                            insert(&mut used.left, bx);
                        }
                    }
                    return Ok(Res::Proved(Arc::new(ProofNode {
                        sequent: used,
                        rule: Rule::Glr(x),
                        premises: vec![pf],
                    })));
                }
                Res::Refuted(cm) => children.push(cm),
            }
        }
        let true_atoms = s
            .left
            .iter()
            .filter_map(|&x| match t.kinds[x as usize] {
                LKind::Atom(a) => Some(a),
                _ => None,
            })
            .collect();
        Ok(Res::Refuted(Arc::new(CmNode {
            true_atoms,
            children,
        })))
    }
}

fn glr_premise(boxed_left: &[(u32, u32)], bx: u32, a: u32) -> Sequent {
    let mut left = Vec::new();
    for &(x, b) in boxed_left {
        insert(&mut left, x);
        insert(&mut left, b);
    }
    insert(&mut left, bx);
    Sequent {
        left,
        right: vec![a],
    }
}

/// Outcome of search on `∅ ⇒ f`.
pub(crate) enum SearchOutcome {
    Proved(Arc<ProofNode>),
    Refuted(Arc<CmNode>),
}

pub(crate) fn search(
    t: &LocalTable,
    budget: usize,
) -> Result<(SearchOutcome, usize), (BudgetExceeded, usize)> {
    let mut s = Search::new(t, budget);
    let goal = Sequent {
        left: vec![],
        right: vec![t.root],
    };
    match s.run(goal) {
        Ok(Res::Proved(p)) => Ok((SearchOutcome::Proved(p), s.explored())),
        Ok(Res::Refuted(c)) => Ok((SearchOutcome::Refuted(c), s.explored())),
        Err(e) => Err((e, s.explored())),
    }
}

/// Independent checker for derivations produced by [`search`].
pub(crate) fn check_proof(t: &LocalTable, root: &Arc<ProofNode>) -> bool {
    let goal = Sequent {
        left: vec![],
        right: vec![t.root],
    };
    let mut ok: HashMap<*const ProofNode, bool> = HashMap::new();
    root.sequent.subset_of(&goal) && check_node(t, root, &mut ok)
}

fn check_node(
    t: &LocalTable,
    n: &Arc<ProofNode>,
    ok: &mut HashMap<*const ProofNode, bool>,
) -> bool {
    let key = Arc::as_ptr(n);
    if let Some(&v) = ok.get(&key) {
        return v;
    }
    let s = &n.sequent;
    let in_range = s
        .left
        .iter()
        .chain(&s.right)
        .all(|&x| (x as usize) < t.len());
    let v = in_range
        && match n.rule {
            Rule::Axiom => n.premises.is_empty() && axiom(t, s).is_some(),
            Rule::Prop(side, p) => {
                let on_side = match side {
                    Side::Left => contains(&s.left, p),
                    Side::Right => contains(&s.right, p),
                };
                let (dl, dr) = match side {
                    Side::Left => (Some(p), None),
                    Side::Right => (None, Some(p)),
                };
                match premises_of(t.kinds[p as usize], side) {
                    Some(comps) if on_side && comps.len() == n.premises.len() => {
                        comps.iter().zip(&n.premises).all(|((l, r), pf)| {
                            pf.sequent.subset_of(&s.with(l, r, dl, dr)) && check_node(t, pf, ok)
                        })
                    }
                    _ => false,
                }
            }
            Rule::Glr(x) => match (t.kinds[x as usize], n.premises.as_slice()) {
                (LKind::Box(a), [pf]) if contains(&s.right, x) => {
                    let boxed_left: Vec<(u32, u32)> = s
                        .left
                        .iter()
                        .filter_map(|&y| match t.kinds[y as usize] {
                            LKind::Box(b) => Some((y, b)),
                            _ => None,
                        })
                        .collect();
                    pf.sequent.subset_of(&glr_premise(&boxed_left, x, a)) && check_node(t, pf, ok)
                }
                _ => false,
            },
        };
    ok.insert(key, v);
    v
}

pub(crate) fn proof_stats(root: &Arc<ProofNode>) -> (usize, usize) {
    let mut depth_memo: HashMap<*const ProofNode, usize> = HashMap::new();
    fn go(n: &Arc<ProofNode>, memo: &mut HashMap<*const ProofNode, usize>) -> usize {
        if let Some(&d) = memo.get(&Arc::as_ptr(n)) {
            return d;
        }
        let d = 1 + n.premises.iter().map(|p| go(p, memo)).max().unwrap_or(0);
        memo.insert(Arc::as_ptr(n), d);
        d
    }
    let depth = go(root, &mut depth_memo);
    (depth_memo.len(), depth)
}

/// Flattens a countermodel tree into a transitive irreflexive model.
pub(crate) fn to_kripke(t: &LocalTable, root: &Arc<CmNode>) -> KripkeModel {
    let mut ids: HashMap<*const CmNode, usize> = HashMap::new();
    let mut order: Vec<Arc<CmNode>> = Vec::new();
    let mut stack = vec![root.clone()];
    while let Some(n) = stack.pop() {
        if ids.contains_key(&Arc::as_ptr(&n)) {
            continue;
        }
        ids.insert(Arc::as_ptr(&n), order.len());
        order.push(n.clone());
        for c in n.children.iter().rev() {
            stack.push(c.clone());
        }
    }
    let mut below: Vec<Option<BTreeSet<usize>>> = vec![None; order.len()];
    fn reach(
        i: usize,
        order: &[Arc<CmNode>],
        ids: &HashMap<*const CmNode, usize>,
        below: &mut Vec<Option<BTreeSet<usize>>>,
    ) -> BTreeSet<usize> {
        if let Some(b) = &below[i] {
            return b.clone();
        }
        let mut set = BTreeSet::new();
        for c in &order[i].children {
            let j = ids[&Arc::as_ptr(c)];
            set.insert(j);
            set.extend(reach(j, order, ids, below));
        }
        below[i] = Some(set.clone());
        set
    }
    let mut edges = Vec::new();
    for i in 0..order.len() {
        for j in reach(i, &order, &ids, &mut below) {
            edges.push((i, j));
        }
    }
    edges.sort_unstable();
    let valuation = order
        .iter()
        .map(|n| {
            n.true_atoms
                .iter()
                .map(|&a| t.atoms[a as usize].clone())
                .collect()
        })
        .collect();
    KripkeModel {
        worlds: order.len(),
        edges,
        valuation,
        root: 0,
    }
}
