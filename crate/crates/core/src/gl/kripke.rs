//! Finite Kripke models for GL: transitive, irreflexive frames.

use crate::modal::{ModalFormula, ModalKind};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KripkeModel {
    pub worlds: usize,
    /// Accessibility as `(from, to)` pairs, sorted.
    pub edges: Vec<(usize, usize)>,
    /// Atoms true at each world.
    pub valuation: Vec<BTreeSet<String>>,
    /// The world at which the formula is falsified, when used as a countermodel.
    pub root: usize,
}

impl KripkeModel {
    pub fn successors(&self, w: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter(move |e| e.0 == w).map(|e| e.1)
    }

    /// Whether the accessibility relation is a GL frame.
    pub fn is_gl_frame(&self) -> bool {
        let rel: BTreeSet<(usize, usize)> = self.edges.iter().copied().collect();
        let in_range = rel.iter().all(|&(a, b)| a < self.worlds && b < self.worlds);
        let irreflexive = rel.iter().all(|&(a, b)| a != b);
        let transitive = rel.iter().all(|&(a, b)| {
            rel.range((b, 0)..(b + 1, 0))
                .all(|&(_, c)| rel.contains(&(a, c)))
        });
        in_range && irreflexive && transitive && self.valuation.len() == self.worlds
    }

    /// Truth of `f` at world `w`.
    pub fn holds(&self, f: &ModalFormula, w: usize) -> bool {
        let succ: Vec<Vec<usize>> = (0..self.worlds)
            .map(|v| self.successors(v).collect())
            .collect();
        let mut memo = HashMap::new();
        self.eval(f, w, &succ, &mut memo)
    }

    fn eval(
        &self,
        f: &ModalFormula,
        w: usize,
        succ: &[Vec<usize>],
        memo: &mut HashMap<(u64, usize), bool>,
    ) -> bool {
        if let Some(&v) = memo.get(&(f.id(), w)) {
            return v;
        }
        let v = match f.kind() {
            ModalKind::Atom(a) => self.valuation[w].contains(&**a),
            ModalKind::Top => true,
            ModalKind::Bot => false,
            ModalKind::Not(a) => !self.eval(a, w, succ, memo),
            ModalKind::And(a, b) => self.eval(a, w, succ, memo) && self.eval(b, w, succ, memo),
            ModalKind::Or(a, b) => self.eval(a, w, succ, memo) || self.eval(b, w, succ, memo),
            ModalKind::Imp(a, b) => !self.eval(a, w, succ, memo) || self.eval(b, w, succ, memo),
            ModalKind::Box(a) => succ[w].iter().all(|&v| self.eval(a, v, succ, memo)),
        };
        memo.insert((f.id(), w), v);
        v
    }

    /// A countermodel is valid when it is a GL frame and falsifies `f` at its root.
    pub fn refutes(&self, f: &ModalFormula) -> bool {
        self.is_gl_frame() && self.root < self.worlds && !self.holds(f, self.root)
    }
}

/// All strict partial orders (transitive irreflexive relations) on `n`
/// labelled points, as edge lists.
pub fn strict_orders(n: usize) -> Vec<Vec<(usize, usize)>> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << pairs.len()) {
        let rel: BTreeSet<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, p)| *p)
            .collect();
        let ok = rel.iter().all(|&(a, b)| {
            !rel.contains(&(b, a))
                && rel
                    .iter()
                    .filter(|e| e.0 == b)
                    .all(|&(_, c)| rel.contains(&(a, c)))
        });
        if ok {
            out.push(rel.into_iter().collect());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modal::parse_modal;

    #[test]
    fn counts_strict_orders() {
        // labelled posets on 1, 2, 3 points
        assert_eq!(strict_orders(1).len(), 1);
        assert_eq!(strict_orders(2).len(), 3);
        assert_eq!(strict_orders(3).len(), 19);
    }

    #[test]
    fn one_world_refutes_consistency() {
        let m = KripkeModel {
            worlds: 1,
            edges: vec![],
            valuation: vec![BTreeSet::new()],
            root: 0,
        };
        assert!(m.refutes(&parse_modal("~box F").unwrap()));
        assert!(!m.refutes(&parse_modal("box F").unwrap()));
    }

    #[test]
    fn rejects_reflexive_frames() {
        let m = KripkeModel {
            worlds: 1,
            edges: vec![(0, 0)],
            valuation: vec![BTreeSet::new()],
            root: 0,
        };
        assert!(!m.is_gl_frame());
    }
}
