//! Formula generators for sampled and exhaustive checks.

use crate::formula::{DecidableAtom, Formula, Term};
use crate::modal::{ModalFormula, ModalKind};
use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const ATOM_NAMES: [&str; 6] = ["p", "q", "r", "s", "t", "u"];

/// Every modal formula of tree size `1..=max_size` over the constants and
/// the first `atoms` atoms, grouped by size. Formulas that differ only by
/// renaming atoms are generated once: atoms first occur in the order
/// `p, q, r, …` (validity is invariant under renaming).
pub fn all_modal_formulas(max_size: usize, atoms: usize) -> Vec<Vec<ModalFormula>> {
    assert!(atoms <= ATOM_NAMES.len());
    let mut by_size: Vec<Vec<ModalFormula>> = vec![Vec::new(); max_size + 1];
    if max_size == 0 {
        return by_size;
    }
    by_size[1].push(ModalFormula::top());
    by_size[1].push(ModalFormula::bot());
    by_size[1].extend(ATOM_NAMES[..atoms].iter().map(|a| ModalFormula::atom(a)));
    for n in 2..=max_size {
        let mut out = Vec::new();
        for a in &by_size[n - 1] {
            out.push(ModalFormula::not(a.clone()));
            out.push(ModalFormula::boxed(a.clone()));
        }
        for left in 1..n - 1 {
            let right = n - 1 - left;
            for a in &by_size[left] {
                for b in &by_size[right] {
                    out.push(ModalFormula::and(a.clone(), b.clone()));
                    out.push(ModalFormula::or(a.clone(), b.clone()));
                    out.push(ModalFormula::imp(a.clone(), b.clone()));
                }
            }
        }
        by_size[n] = out;
    }
    for level in by_size.iter_mut() {
        level.retain(canonical_atom_order);
    }
    by_size
}

fn canonical_atom_order(f: &ModalFormula) -> bool {
    fn walk(f: &ModalFormula, seen: &mut Vec<String>) -> bool {
        match f.kind() {
            ModalKind::Atom(a) => {
                if seen.iter().any(|s| **s == **a) {
                    return true;
                }
                let ok = ATOM_NAMES.get(seen.len()).is_some_and(|n| *n == &**a);
                seen.push(a.to_string());
                ok
            }
            ModalKind::Top | ModalKind::Bot => true,
            ModalKind::Not(a) | ModalKind::Box(a) => walk(a, seen),
            ModalKind::And(a, b) | ModalKind::Or(a, b) | ModalKind::Imp(a, b) => {
                walk(a, seen) && walk(b, seen)
            }
        }
    }
    walk(f, &mut Vec::new())
}

/// A random modal formula of roughly `size` connectives over `atoms` atoms.
pub fn random_modal<R: Rng + ?Sized>(rng: &mut R, size: usize, atoms: usize) -> ModalFormula {
    if size == 0 {
        return match rng.gen_range(0..atoms + 2) {
            0 => ModalFormula::top(),
            1 => ModalFormula::bot(),
            k => ModalFormula::atom(ATOM_NAMES[k - 2]),
        };
    }
    match rng.gen_range(0..5) {
        0 => ModalFormula::not(random_modal(rng, size - 1, atoms)),
        1 => ModalFormula::boxed(random_modal(rng, size - 1, atoms)),
        op => {
            let left = rng.gen_range(0..size);
            let a = random_modal(rng, left, atoms);
            let b = random_modal(rng, size - 1 - left, atoms);
            match op {
                2 => ModalFormula::and(a, b),
                3 => ModalFormula::or(a, b),
                _ => ModalFormula::imp(a, b),
            }
        }
    }
}

fn random_closed_term<R: Rng + ?Sized>(rng: &mut R, depth: u32, bound: u32) -> Term {
    if depth == 0 {
        if bound > 0 && rng.gen_bool(0.5) {
            return Term::bound(rng.gen_range(0..bound));
        }
        return Term::num(BigUint::from(rng.gen_range(0u32..6)));
    }
    match rng.gen_range(0..4) {
        0 => Term::succ(random_closed_term(rng, depth - 1, bound)),
        1 => Term::plus(
            random_closed_term(rng, depth - 1, bound),
            random_closed_term(rng, depth - 1, bound),
        ),
        2 => Term::times(
            random_closed_term(rng, depth - 1, bound),
            random_closed_term(rng, depth - 1, bound),
        ),
        _ => random_closed_term(rng, 0, bound),
    }
}

/// A random arithmetic formula with at most `bound` enclosing binders in
/// scope; a sentence when called with `bound = 0`.
fn random_formula<R: Rng + ?Sized>(rng: &mut R, size: u32, bound: u32) -> Formula {
    if size == 0 {
        let a = random_closed_term(rng, 1, bound);
        let b = random_closed_term(rng, 1, bound);
        return match rng.gen_range(0..4) {
            0 => Formula::eq(a, b),
            1 => Formula::le(a, b),
            2 => Formula::pr(random_formula(rng, 0, 0)),
            _ => Formula::decidable(DecidableAtom::OrdWellFormed, vec![a]),
        };
    }
    match rng.gen_range(0..7) {
        0 => Formula::not(random_formula(rng, size - 1, bound)),
        1 => Formula::and(
            random_formula(rng, size / 2, bound),
            random_formula(rng, size - 1 - size / 2, bound),
        ),
        2 => Formula::or(
            random_formula(rng, size / 2, bound),
            random_formula(rng, size - 1 - size / 2, bound),
        ),
        3 => Formula::imp(
            random_formula(rng, size / 2, bound),
            random_formula(rng, size - 1 - size / 2, bound),
        ),
        4 => Formula::forall(random_formula(rng, size - 1, bound + 1)),
        5 => Formula::exists(random_formula(rng, size - 1, bound + 1)),
        _ => Formula::bounded_forall(
            random_closed_term(rng, 0, bound),
            random_formula(rng, size - 1, bound + 1),
        ),
    }
}

/// A random arithmetic sentence.
pub fn random_sentence<R: Rng + ?Sized>(rng: &mut R, size: u32) -> Formula {
    random_formula(rng, size, 0)
}

/// A random diagonalization template: a formula whose only free variable
/// is `(v 0)`, occurring at least once (in an equation, an order atom or a
/// provability argument).
pub fn random_template<R: Rng + ?Sized>(rng: &mut R, size: u32) -> Formula {
    let x = Term::free(0);
    let uses_x = match rng.gen_range(0..3) {
        0 => Formula::eq(x, random_closed_term(rng, 1, 0)),
        1 => Formula::le(random_closed_term(rng, 1, 0), x),
        _ => Formula::not(Formula::provable(Formula::hole(0), vec![x])),
    };
    let rest = random_sentence(rng, size);
    let mut parts = [uses_x, rest];
    parts.shuffle(rng);
    let [a, b] = parts;
    match rng.gen_range(0..3) {
        0 => Formula::and(a, b),
        1 => Formula::or(a, b),
        _ => Formula::imp(a, b),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_counts() {
        let f = all_modal_formulas(3, 1);
        // size 1: T F p; size 2: 2 * 3; size 3: 2 * 6 + 3 * 9
        assert_eq!(f[1].len(), 3);
        assert_eq!(f[2].len(), 6);
        assert_eq!(f[3].len(), 12 + 27);
    }

    #[test]
    fn atoms_appear_in_canonical_order() {
        let f = all_modal_formulas(3, 2);
        assert!(f[3].iter().all(|g| g.to_string() != "q & p"));
        assert!(f[3].iter().any(|g| g.to_string() == "p & q"));
        assert!(f[1].iter().all(|g| g.to_string() != "q"));
    }

    #[test]
    fn random_generation_is_seeded() {
        let a = random_modal(&mut rng(7), 10, 3);
        let b = random_modal(&mut rng(7), 10, 3);
        assert_eq!(a, b);
        let s = random_sentence(&mut rng(3), 6);
        assert!(s.is_sentence());
        let t = random_template(&mut rng(3), 4);
        assert_eq!(t.free_vars(), &[0]);
    }
}
