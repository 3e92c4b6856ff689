//! Capture-avoiding substitution of free variables.
//!
//! Binders are nameless, so capture cannot happen; a replacement term is
//! shifted by the number of binders it is pushed under. Provability
//! templates are quoted and closed, so substitution never enters them.

use super::{Formula, FormulaKind, Term, TermKind};
use num_bigint::BigUint;
use std::collections::HashMap;

/// Adds `by` to every de Bruijn index of `t` that is at least `cutoff`.
pub fn shift_term(t: &Term, by: u32, cutoff: u32) -> Term {
    if by == 0 || t.info().loose <= cutoff {
        return t.clone();
    }
    match t.kind() {
        TermKind::Bound(i) if *i >= cutoff => Term::bound(i + by),
        TermKind::Num(_) | TermKind::Free(_) | TermKind::Bound(_) => t.clone(),
        TermKind::Succ(a) => Term::succ(shift_term(a, by, cutoff)),
        TermKind::Exp2(a) => Term::exp2(shift_term(a, by, cutoff)),
        TermKind::Plus(a, b) => Term::plus(shift_term(a, by, cutoff), shift_term(b, by, cutoff)),
        TermKind::Times(a, b) => Term::times(shift_term(a, by, cutoff), shift_term(b, by, cutoff)),
        TermKind::Sub(a, v, b) => {
            Term::sub(shift_term(a, by, cutoff), *v, shift_term(b, by, cutoff))
        }
    }
}

struct Substitution<'a> {
    map: &'a [(u32, Term)],
    cache: HashMap<(u64, u32), Formula>,
}

impl Substitution<'_> {
    fn touches(&self, free: &[u32]) -> bool {
        self.map.iter().any(|(v, _)| free.binary_search(v).is_ok())
    }

    fn term(&self, t: &Term, depth: u32) -> Term {
        if !self.touches(&t.info().free) {
            return t.clone();
        }
        match t.kind() {
            TermKind::Free(v) => {
                let replacement = &self.map.iter().find(|(w, _)| w == v).expect("touched").1;
                shift_term(replacement, depth, 0)
            }
            TermKind::Num(_) | TermKind::Bound(_) => t.clone(),
            TermKind::Succ(a) => Term::succ(self.term(a, depth)),
            TermKind::Exp2(a) => Term::exp2(self.term(a, depth)),
            TermKind::Plus(a, b) => Term::plus(self.term(a, depth), self.term(b, depth)),
            TermKind::Times(a, b) => Term::times(self.term(a, depth), self.term(b, depth)),
            TermKind::Sub(a, v, b) => Term::sub(self.term(a, depth), *v, self.term(b, depth)),
        }
    }

    fn terms(&self, ts: &[Term], depth: u32) -> Vec<Term> {
        ts.iter().map(|t| self.term(t, depth)).collect()
    }

    fn formula(&mut self, f: &Formula, depth: u32) -> Formula {
        if !self.touches(&f.info().free) {
            return f.clone();
        }
        if let Some(done) = self.cache.get(&(f.id(), depth)) {
            return done.clone();
        }
        use FormulaKind::*;
        let out = match f.kind() {
            Eq(a, b) => Formula::eq(self.term(a, depth), self.term(b, depth)),
            Le(a, b) => Formula::le(self.term(a, depth), self.term(b, depth)),
            Decidable(atom, ts) => Formula::decidable(*atom, self.terms(ts, depth)),
            Provable(tpl, ts) => Formula::provable(tpl.clone(), self.terms(ts, depth)),
            Member(name, ts) => Formula::mk(Member(name.clone(), self.terms(ts, depth))),
            Hole(_) | Top | Bot => f.clone(),
            Not(a) => Formula::not(self.formula(a, depth)),
            And(a, b) => Formula::and(self.formula(a, depth), self.formula(b, depth)),
            Or(a, b) => Formula::or(self.formula(a, depth), self.formula(b, depth)),
            Imp(a, b) => Formula::imp(self.formula(a, depth), self.formula(b, depth)),
            Forall(a) => Formula::forall(self.formula(a, depth + 1)),
            Exists(a) => Formula::exists(self.formula(a, depth + 1)),
            BoundedForall(t, a) => {
                Formula::bounded_forall(self.term(t, depth), self.formula(a, depth + 1))
            }
            BoundedExists(t, a) => {
                Formula::bounded_exists(self.term(t, depth), self.formula(a, depth + 1))
            }
        };
        self.cache.insert((f.id(), depth), out.clone());
        out
    }
}

/// Replaces free variable `var` by `t`. Identity when `var` does not occur.
pub fn substitute(f: &Formula, var: u32, t: &Term) -> Formula {
    substitute_all(f, &[(var, t.clone())])
}

/// Simultaneous substitution of several free variables.
pub fn substitute_all(f: &Formula, map: &[(u32, Term)]) -> Formula {
    Substitution {
        map,
        cache: HashMap::new(),
    }
    .formula(f, 0)
}

/// Closes the listed free variables with numerals.
pub fn instantiate(f: &Formula, values: &[(u32, BigUint)]) -> Formula {
    let map: Vec<(u32, Term)> = values
        .iter()
        .map(|(v, n)| (*v, Term::num(n.clone())))
        .collect();
    substitute_all(f, &map)
}

fn replace_in_term(t: &Term, from: &Term, to: &Term) -> Term {
    if t == from {
        return to.clone();
    }
    match t.kind() {
        TermKind::Num(_) | TermKind::Free(_) | TermKind::Bound(_) => t.clone(),
        TermKind::Succ(a) => Term::succ(replace_in_term(a, from, to)),
        TermKind::Exp2(a) => Term::exp2(replace_in_term(a, from, to)),
        TermKind::Plus(a, b) => {
            Term::plus(replace_in_term(a, from, to), replace_in_term(b, from, to))
        }
        TermKind::Times(a, b) => {
            Term::times(replace_in_term(a, from, to), replace_in_term(b, from, to))
        }
        TermKind::Sub(a, v, b) => Term::sub(
            replace_in_term(a, from, to),
            *v,
            replace_in_term(b, from, to),
        ),
    }
}

/// Replaces every occurrence of the closed term `from` by the closed term `to`
/// outside provability templates.
pub fn replace_term(f: &Formula, from: &Term, to: &Term) -> Formula {
    let rt =
        |ts: &[Term]| -> Vec<Term> { ts.iter().map(|t| replace_in_term(t, from, to)).collect() };
    use FormulaKind::*;
    match f.kind() {
        Eq(a, b) => Formula::eq(replace_in_term(a, from, to), replace_in_term(b, from, to)),
        Le(a, b) => Formula::le(replace_in_term(a, from, to), replace_in_term(b, from, to)),
        Decidable(atom, ts) => Formula::decidable(*atom, rt(ts)),
        Provable(tpl, ts) => Formula::provable(tpl.clone(), rt(ts)),
        Member(name, ts) => Formula::mk(Member(name.clone(), rt(ts))),
        Hole(_) | Top | Bot => f.clone(),
        Not(a) => Formula::not(replace_term(a, from, to)),
        And(a, b) => Formula::and(replace_term(a, from, to), replace_term(b, from, to)),
        Or(a, b) => Formula::or(replace_term(a, from, to), replace_term(b, from, to)),
        Imp(a, b) => Formula::imp(replace_term(a, from, to), replace_term(b, from, to)),
        Forall(a) => Formula::forall(replace_term(a, from, to)),
        Exists(a) => Formula::exists(replace_term(a, from, to)),
        BoundedForall(t, a) => {
            Formula::bounded_forall(replace_in_term(t, from, to), replace_term(a, from, to))
        }
        BoundedExists(t, a) => {
            Formula::bounded_exists(replace_in_term(t, from, to), replace_term(a, from, to))
        }
    }
}

fn open_term(t: &Term, depth: u32, value: &Term) -> Term {
    if t.info().loose <= depth {
        return t.clone();
    }
    match t.kind() {
        TermKind::Bound(i) if *i == depth => shift_term(value, depth, 0),
        TermKind::Bound(i) => Term::bound(i - 1),
        TermKind::Num(_) | TermKind::Free(_) => t.clone(),
        TermKind::Succ(a) => Term::succ(open_term(a, depth, value)),
        TermKind::Exp2(a) => Term::exp2(open_term(a, depth, value)),
        TermKind::Plus(a, b) => Term::plus(open_term(a, depth, value), open_term(b, depth, value)),
        TermKind::Times(a, b) => {
            Term::times(open_term(a, depth, value), open_term(b, depth, value))
        }
        TermKind::Sub(a, v, b) => {
            Term::sub(open_term(a, depth, value), *v, open_term(b, depth, value))
        }
    }
}

fn open_at(f: &Formula, depth: u32, value: &Term) -> Formula {
    if f.info().loose <= depth {
        return f.clone();
    }
    let ts = |ts: &[Term]| -> Vec<Term> { ts.iter().map(|t| open_term(t, depth, value)).collect() };
    use FormulaKind::*;
    match f.kind() {
        Eq(a, b) => Formula::eq(open_term(a, depth, value), open_term(b, depth, value)),
        Le(a, b) => Formula::le(open_term(a, depth, value), open_term(b, depth, value)),
        Decidable(atom, args) => Formula::decidable(*atom, ts(args)),
        Provable(tpl, args) => Formula::provable(tpl.clone(), ts(args)),
        Member(name, args) => Formula::mk(Member(name.clone(), ts(args))),
        Hole(_) | Top | Bot => f.clone(),
        Not(a) => Formula::not(open_at(a, depth, value)),
        And(a, b) => Formula::and(open_at(a, depth, value), open_at(b, depth, value)),
        Or(a, b) => Formula::or(open_at(a, depth, value), open_at(b, depth, value)),
        Imp(a, b) => Formula::imp(open_at(a, depth, value), open_at(b, depth, value)),
        Forall(a) => Formula::forall(open_at(a, depth + 1, value)),
        Exists(a) => Formula::exists(open_at(a, depth + 1, value)),
        BoundedForall(t, a) => {
            Formula::bounded_forall(open_term(t, depth, value), open_at(a, depth + 1, value))
        }
        BoundedExists(t, a) => {
            Formula::bounded_exists(open_term(t, depth, value), open_at(a, depth + 1, value))
        }
    }
}

/// Instantiates the variable bound by a quantifier: `body` is the binder's
/// body and every occurrence of its de Bruijn index 0 becomes `value`.
pub fn open_binder(body: &Formula, value: &Term) -> Formula {
    open_at(body, 0, value)
}

/// Fills the holes of a provability template with sentences. Nested
/// templates keep their own holes.
pub fn fill_holes(tpl: &Formula, fills: &[Formula]) -> Formula {
    if tpl.info().holes == 0 {
        return tpl.clone();
    }
    use FormulaKind::*;
    match tpl.kind() {
        Hole(i) => fills[*i as usize].clone(),
        Not(a) => Formula::not(fill_holes(a, fills)),
        And(a, b) => Formula::and(fill_holes(a, fills), fill_holes(b, fills)),
        Or(a, b) => Formula::or(fill_holes(a, fills), fill_holes(b, fills)),
        Imp(a, b) => Formula::imp(fill_holes(a, fills), fill_holes(b, fills)),
        Forall(a) => Formula::forall(fill_holes(a, fills)),
        Exists(a) => Formula::exists(fill_holes(a, fills)),
        BoundedForall(t, a) => Formula::bounded_forall(t.clone(), fill_holes(a, fills)),
        BoundedExists(t, a) => Formula::bounded_exists(t.clone(), fill_holes(a, fills)),
        _ => tpl.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    #[test]
    fn substitute_closed_instance() {
        let f = parse("(= (v 0) (v 0))").unwrap();
        assert_eq!(
            substitute(&f, 0, &Term::zero()),
            parse("(= (z) (z))").unwrap()
        );
    }

    #[test]
    fn opening_a_binder() {
        let f = parse("(forall x (forall y (le y x)))").unwrap();
        let FormulaKind::Forall(body) = f.kind() else {
            unreachable!()
        };
        assert_eq!(
            open_binder(body, &Term::num(3u32)),
            parse("(forall y (le y (num 3)))").unwrap()
        );
    }

    #[test]
    fn substitute_under_binder() {
        let f = parse("(forall x (= x (v 1)))").unwrap();
        let one = Term::succ(Term::zero());
        assert_eq!(
            substitute(&f, 1, &one),
            parse("(forall x (= x (s (z))))").unwrap()
        );
    }

    #[test]
    fn substitute_absent_variable_is_identity() {
        let f = parse("(forall x (le x (v 3)))").unwrap();
        assert_eq!(substitute(&f, 7, &Term::zero()), f);
    }

    #[test]
    fn bound_replacement_is_shifted() {
        // ∀y (v0 = y) with v0 := outer bound index 0 becomes ∀y (outer = y)
        let f = parse("(forall y (= (v 0) y))").unwrap();
        let g = Formula::forall(substitute(&f, 0, &Term::bound(0)));
        assert_eq!(g, parse("(forall x (forall y (= x y)))").unwrap());
    }
}
