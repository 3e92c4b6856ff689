//! Semantic decision of GL validity, independent of the sequent prover.
//!
//! A *type* is the set of subformulas true at a world. In a finite
//! transitive irreflexive model, `□A` holds at `w` iff every successor `v`
//! has `A` and `□A`; any finite set of realizable types can sit below a new
//! root. So the realizable box-patterns are exactly the intersections of
//! the successor patterns, and iterating this closure from the leaves
//! enumerates every type realized in any finite GL model.

use super::kripke::{strict_orders, KripkeModel};
use crate::modal::{ModalFormula, ModalKind};
use std::collections::{BTreeSet, HashMap};

/// Validity of `f` over all finite transitive irreflexive models.
/// Supports up to 64 distinct subformulas and 16 atoms.
pub fn semantic_valid(f: &ModalFormula) -> bool {
    let subs = f.subformulas();
    assert!(
        subs.len() <= 64,
        "too many subformulas for type enumeration"
    );
    let index: HashMap<u64, usize> = subs.iter().enumerate().map(|(i, g)| (g.id(), i)).collect();
    let atoms: Vec<usize> = (0..subs.len())
        .filter(|&i| matches!(subs[i].kind(), ModalKind::Atom(_)))
        .collect();
    let boxes: Vec<(usize, usize)> = (0..subs.len())
        .filter_map(|i| match subs[i].kind() {
            ModalKind::Box(a) => Some((i, index[&a.id()])),
            _ => None,
        })
        .collect();
    assert!(atoms.len() <= 16, "too many atoms");
    let all_boxes: u64 = if boxes.len() == 64 {
        !0
    } else {
        (1u64 << boxes.len()) - 1
    };

    let type_of = |val: u32, box_mask: u64| -> u64 {
        let mut t = 0u64;
        let bit = |t: u64, i: usize| t >> i & 1 == 1;
        for (i, g) in subs.iter().enumerate() {
            let v = match g.kind() {
                ModalKind::Atom(_) => {
                    let k = atoms.iter().position(|&a| a == i).expect("atom");
                    val >> k & 1 == 1
                }
                ModalKind::Top => true,
                ModalKind::Bot => false,
                ModalKind::Not(a) => !bit(t, index[&a.id()]),
                ModalKind::And(a, b) => bit(t, index[&a.id()]) && bit(t, index[&b.id()]),
                ModalKind::Or(a, b) => bit(t, index[&a.id()]) || bit(t, index[&b.id()]),
                ModalKind::Imp(a, b) => !bit(t, index[&a.id()]) || bit(t, index[&b.id()]),
                ModalKind::Box(_) => {
                    let k = boxes.iter().position(|&(b, _)| b == i).expect("box");
                    box_mask >> k & 1 == 1
                }
            };
            if v {
                t |= 1 << i;
            }
        }
        t
    };
    let pattern = |t: u64| -> u64 {
        boxes
            .iter()
            .enumerate()
            .filter(|(_, &(b, a))| t >> b & 1 == 1 && t >> a & 1 == 1)
            .fold(0, |m, (k, _)| m | 1 << k)
    };

    let mut types: BTreeSet<u64> = BTreeSet::new();
    loop {
        let mut masks: BTreeSet<u64> = types.iter().map(|&t| pattern(t)).collect();
        // close under intersection
        loop {
            let current: Vec<u64> = masks.iter().copied().collect();
            let before = masks.len();
            for (i, &a) in current.iter().enumerate() {
                for &b in &current[i + 1..] {
                    masks.insert(a & b);
                }
            }
            if masks.len() == before {
                break;
            }
        }
        masks.insert(all_boxes);
        let next: BTreeSet<u64> = (0u32..1 << atoms.len())
            .flat_map(|val| masks.iter().map(move |&m| (val, m)))
            .map(|(val, m)| type_of(val, m))
            .collect();
        if next == types {
            break;
        }
        types = next;
    }
    let root = subs.len() - 1;
    types.iter().all(|t| t >> root & 1 == 1)
}

/// Searches all models with at most `max_worlds` worlds (every strict
/// partial order, every valuation, every root) for one falsifying `f`.
pub fn brute_force_countermodel(f: &ModalFormula, max_worlds: usize) -> Option<KripkeModel> {
    let atoms: Vec<String> = f.atoms().into_iter().map(|a| a.to_string()).collect();
    for n in 1..=max_worlds {
        let bits = n * atoms.len();
        assert!(bits < 30, "valuation space too large");
        for edges in strict_orders(n) {
            for val in 0u32..1 << bits {
                let valuation = (0..n)
                    .map(|w| {
                        atoms
                            .iter()
                            .enumerate()
                            .filter(|(k, _)| val >> (w * atoms.len() + k) & 1 == 1)
                            .map(|(_, a)| a.clone())
                            .collect()
                    })
                    .collect();
                let mut m = KripkeModel {
                    worlds: n,
                    edges: edges.clone(),
                    valuation,
                    root: 0,
                };
                if let Some(w) = (0..n).find(|&w| !m.holds(f, w)) {
                    m.root = w;
                    return Some(m);
                }
            }
        }
    }
    None
}
