//! Cantor normal form notations for ordinals below ε₀.
//!
//! A notation is a list of `(exponent, coefficient)` pairs with strictly
//! descending exponents and positive coefficients; the empty list is 0.
//! Notations are coded as naturals by
//! `code(0) = 0`, `code((e, c) :: rest) = 1 + ⟨⟨code e, c - 1⟩, code rest⟩`
//! with Cantor pairing. Every natural decodes to some list; the
//! well-formedness atom `ord-d` accepts exactly the codes of canonical lists.

use crate::formula::{DecidableAtom, Formula, Term};
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct OrdNotation {
    terms: Vec<(OrdNotation, u64)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrdClass {
    Zero,
    Successor(OrdNotation),
    Limit,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrdError {
    #[error("bad ordinal syntax at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("not in Cantor normal form: {0}")]
    NotCanonical(String),
}

impl OrdNotation {
    pub fn zero() -> Self {
        OrdNotation::default()
    }

    pub fn finite(n: u64) -> Self {
        if n == 0 {
            Self::zero()
        } else {
            OrdNotation {
                terms: vec![(Self::zero(), n)],
            }
        }
    }

    pub fn omega() -> Self {
        Self::omega_pow(Self::finite(1))
    }

    pub fn omega_pow(e: OrdNotation) -> Self {
        OrdNotation {
            terms: vec![(e, 1)],
        }
    }

    /// Builds a notation from CNF terms, checking canonicity.
    pub fn from_terms(terms: Vec<(OrdNotation, u64)>) -> Result<Self, OrdError> {
        let o = OrdNotation { terms };
        if o.is_canonical() {
            Ok(o)
        } else {
            Err(OrdError::NotCanonical(format!("{o}")))
        }
    }

    pub fn terms(&self) -> &[(OrdNotation, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_canonical(&self) -> bool {
        self.terms.iter().all(|(e, c)| *c >= 1 && e.is_canonical())
            && self
                .terms
                .windows(2)
                .all(|w| compare(&w[0].0, &w[1].0) == Ordering::Greater)
    }

    /// `Some(n)` when the notation denotes a natural number.
    pub fn as_finite(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(e, c)] if e.is_zero() => Some(*c),
            _ => None,
        }
    }

    pub fn code(&self) -> BigUint {
        encode_terms(&self.terms)
    }

    /// Decodes a code, failing if it is not the code of a canonical notation.
    pub fn from_code(n: &BigUint) -> Option<OrdNotation> {
        let o = decode_raw(n)?;
        o.is_canonical().then_some(o)
    }
}

/// Lexicographic comparison of CNF term lists.
pub fn compare(a: &OrdNotation, b: &OrdNotation) -> Ordering {
    for ((ea, ca), (eb, cb)) in a.terms.iter().zip(&b.terms) {
        match compare(ea, eb).then(ca.cmp(cb)) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    a.terms.len().cmp(&b.terms.len())
}

impl PartialOrd for OrdNotation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrdNotation {
    fn cmp(&self, other: &Self) -> Ordering {
        compare(self, other)
    }
}

pub fn classify_ord(a: &OrdNotation) -> OrdClass {
    match a.terms.last() {
        None => OrdClass::Zero,
        Some((e, c)) if e.is_zero() => {
            let mut pred = a.clone();
            if *c == 1 {
                pred.terms.pop();
            } else {
                pred.terms.last_mut().expect("nonempty").1 -= 1;
            }
            OrdClass::Successor(pred)
        }
        Some(_) => OrdClass::Limit,
    }
}

pub fn successor(a: &OrdNotation) -> OrdNotation {
    let mut s = a.clone();
    match s.terms.last_mut() {
        Some((e, c)) if e.is_zero() => *c += 1,
        _ => s.terms.push((OrdNotation::zero(), 1)),
    }
    s
}

const DEFAULT_LIMIT_SAMPLE: usize = 16;

fn add_candidates(a: &OrdNotation, out: &mut Vec<OrdNotation>, depth: u32) {
    // every proper initial segment of the CNF, extended by one smaller term
    for i in 0..a.terms.len() {
        let prefix = &a.terms[..i];
        let (e, c) = &a.terms[i];
        let mut base = prefix.to_vec();
        if *c > 1 {
            base.push((e.clone(), c - 1));
        }
        out.push(OrdNotation {
            terms: base.clone(),
        });
        for k in 1..=3u64 {
            let mut t = base.clone();
            t.push((OrdNotation::zero(), k));
            if let Ok(o) = OrdNotation::from_terms(t) {
                out.push(o);
            }
        }
        if depth > 0 && !e.is_zero() {
            let mut lower = Vec::new();
            predecessors_into(e, &mut lower, depth - 1);
            for f in lower {
                for k in [1u64, 2] {
                    let mut t = base.clone();
                    t.push((f.clone(), k));
                    if let Ok(o) = OrdNotation::from_terms(t) {
                        out.push(o);
                    }
                }
            }
        }
    }
}

fn predecessors_into(a: &OrdNotation, out: &mut Vec<OrdNotation>, depth: u32) {
    if let Some(n) = a.as_finite() {
        out.extend((0..n.min(4)).map(OrdNotation::finite));
        return;
    }
    out.extend((0..4).map(OrdNotation::finite));
    add_candidates(a, out, depth);
}

/// Notations below `a`. For finite `a = n` this is `0, …, n−1` (cut at
/// `bound` if given). For infinite `a` it is a deterministic, ascending
/// sample of at most `bound` (default 16) notations drawn from the CNF
/// structure of `a`.
pub fn predecessors_below(a: &OrdNotation, bound: Option<usize>) -> Vec<OrdNotation> {
    if let Some(n) = a.as_finite() {
        let n = bound.map_or(n, |b| n.min(b as u64));
        return (0..n).map(OrdNotation::finite).collect();
    }
    let bound = bound.unwrap_or(DEFAULT_LIMIT_SAMPLE);
    let mut cands = Vec::new();
    predecessors_into(a, &mut cands, 2);
    cands.retain(|b| compare(b, a) == Ordering::Less);
    cands.sort();
    cands.dedup();
    if cands.len() <= bound {
        return cands;
    }
    if bound == 0 {
        return Vec::new();
    }
    // evenly spaced, always keeping the largest
    let n = cands.len();
    (0..bound)
        .map(|i| cands[(i * (n - 1)) / (bound - 1).max(1)].clone())
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Vec::new(), |mut acc, o| {
            if acc.last() != Some(&o) {
                acc.push(o);
            }
            acc
        })
}

fn pair(x: &BigUint, y: &BigUint) -> BigUint {
    let s = x + y;
    (&s * (&s + 1u32)) / 2u32 + y
}

fn unpair(z: &BigUint) -> (BigUint, BigUint) {
    let w = ((z * 8u32 + 1u32).sqrt() - 1u32) / 2u32;
    let t = (&w * (&w + 1u32)) / 2u32;
    let y = z - t;
    let x = w - &y;
    (x, y)
}

fn encode_terms(terms: &[(OrdNotation, u64)]) -> BigUint {
    terms.iter().rev().fold(BigUint::zero(), |rest, (e, c)| {
        BigUint::one() + pair(&pair(&e.code(), &BigUint::from(c - 1)), &rest)
    })
}

/// Decodes any natural into a (possibly non-canonical) term list; `None`
/// when a coefficient does not fit in 64 bits.
fn decode_raw(n: &BigUint) -> Option<OrdNotation> {
    let mut terms = Vec::new();
    let mut rest = n.clone();
    while !rest.is_zero() {
        let (head, tail) = unpair(&(rest - 1u32));
        let (e, c) = unpair(&head);
        let c = c.to_u64()?.checked_add(1)?;
        terms.push((decode_raw(&e)?, c));
        rest = tail;
    }
    Some(OrdNotation { terms })
}

/// Standard-model truth of the ordinal atoms on natural-number arguments.
pub fn evaluate_atom(atom: DecidableAtom, args: &[BigUint]) -> bool {
    match atom {
        DecidableAtom::OrdWellFormed => OrdNotation::from_code(&args[0]).is_some(),
        DecidableAtom::OrdLess => {
            match (
                OrdNotation::from_code(&args[0]),
                OrdNotation::from_code(&args[1]),
            ) {
                (Some(a), Some(b)) => compare(&a, &b) == Ordering::Less,
                _ => false,
            }
        }
    }
}

/// Builders for the ordinal atoms `ord-d` (D) and `ord-lt` (≺).
#[derive(Debug, Clone, Copy, Default)]
pub struct OrdAtoms;

impl OrdAtoms {
    pub fn well_formed(&self, t: Term) -> Formula {
        Formula::decidable(DecidableAtom::OrdWellFormed, vec![t])
    }

    pub fn less(&self, a: Term, b: Term) -> Formula {
        Formula::decidable(DecidableAtom::OrdLess, vec![a, b])
    }

    pub fn numeral(&self, a: &OrdNotation) -> Term {
        Term::num(a.code())
    }
}

pub fn as_decidable_atoms() -> OrdAtoms {
    OrdAtoms
}

impl fmt::Display for OrdNotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            if e.is_zero() {
                write!(f, "{c}")?;
                continue;
            }
            write!(f, "w")?;
            if e.as_finite() != Some(1) {
                let inner = e.to_string();
                if inner.contains(['+', '*']) {
                    write!(f, "^({inner})")?;
                } else {
                    write!(f, "^{inner}")?;
                }
            }
            if *c > 1 {
                write!(f, "*{c}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for OrdNotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

struct OrdParser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl OrdParser<'_> {
    fn err<T>(&self, msg: &str) -> Result<T, OrdError> {
        Err(OrdError::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn number(&mut self) -> Result<u64, OrdError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a number");
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .expect("ascii")
            .parse()
            .or_else(|_| self.err("number out of range"))
    }

    fn sum(&mut self) -> Result<OrdNotation, OrdError> {
        let mut terms = vec![self.term()?];
        while self.peek() == Some(b'+') {
            self.pos += 1;
            terms.push(self.term()?);
        }
        let terms: Vec<_> = terms.into_iter().filter(|(_, c)| *c > 0).collect();
        OrdNotation::from_terms(terms)
    }

    fn term(&mut self) -> Result<(OrdNotation, u64), OrdError> {
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            return Ok((OrdNotation::zero(), self.number()?));
        }
        let e = self.power()?;
        let mut c = 1;
        if self.peek() == Some(b'*') {
            self.pos += 1;
            c = self.number()?;
        }
        Ok((e, c))
    }

    /// Parses `w` or `w^x` and returns the exponent.
    fn power(&mut self) -> Result<OrdNotation, OrdError> {
        if self.peek() != Some(b'w') {
            return self.err("expected `w` or a number");
        }
        self.pos += 1;
        if self.peek() != Some(b'^') {
            return Ok(OrdNotation::finite(1));
        }
        self.pos += 1;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.sum()?;
                if self.peek() != Some(b')') {
                    return self.err("expected `)`");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => Ok(OrdNotation::finite(self.number()?)),
            _ => Ok(OrdNotation::omega_pow(self.power()?)),
        }
    }
}

impl FromStr for OrdNotation {
    type Err = OrdError;

    /// Accepts `0`, `5`, `w`, `w*3`, `w^w*2+w*3+5`, `w^(w+1)`; the input
    /// must already be in Cantor normal form.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut p = OrdParser {
            s: cleaned.as_bytes(),
            pos: 0,
        };
        let o = p.sum()?;
        if p.pos != p.s.len() {
            return p.err("trailing input");
        }
        Ok(o)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> OrdNotation {
        s.parse().unwrap()
    }

    #[test]
    fn basic_comparisons() {
        assert_eq!(compare(&o("0"), &o("1")), Ordering::Less);
        assert_eq!(compare(&o("w*2+3"), &o("w*3")), Ordering::Less);
        assert_eq!(compare(&o("w^w"), &o("w^5*100")), Ordering::Greater);
    }

    #[test]
    fn classification() {
        assert_eq!(classify_ord(&o("0")), OrdClass::Zero);
        assert_eq!(classify_ord(&o("w")), OrdClass::Limit);
        assert_eq!(classify_ord(&o("w+5")), OrdClass::Successor(o("w+4")));
        assert_eq!(classify_ord(&o("w*2+1")), OrdClass::Successor(o("w*2")));
    }

    #[test]
    fn successors() {
        assert_eq!(successor(&o("0")), o("1"));
        assert_eq!(successor(&o("w")), o("w+1"));
    }

    #[test]
    fn finite_predecessors() {
        assert_eq!(
            predecessors_below(&o("3"), None),
            vec![o("0"), o("1"), o("2")]
        );
        assert!(predecessors_below(&o("0"), None).is_empty());
        let below = predecessors_below(&o("w^w*2+w"), Some(10));
        assert!(below.len() <= 10 && !below.is_empty());
        assert!(below.iter().all(|b| b < &o("w^w*2+w")));
    }

    #[test]
    fn syntax_round_trip() {
        for s in ["0", "1", "w", "w^w*2+w*3+5", "w^(w+1)", "w^w^w", "w^2*7+1"] {
            assert_eq!(o(s).to_string(), s);
        }
        assert!("1+w".parse::<OrdNotation>().is_err());
        assert!("w+w".parse::<OrdNotation>().is_err());
        assert!("w^".parse::<OrdNotation>().is_err());
    }

    #[test]
    fn codes() {
        assert_eq!(o("0").code(), BigUint::zero());
        assert_eq!(o("1").code(), BigUint::one());
        for s in ["5", "w", "w^w*2+w*3+5"] {
            assert_eq!(OrdNotation::from_code(&o(s).code()), Some(o(s)));
        }
    }

    #[test]
    fn ordinal_atoms() {
        let args = [o("0").code(), o("1").code()];
        assert!(evaluate_atom(DecidableAtom::OrdLess, &args));
        // 1 + w written as an unsorted list
        let unsorted = encode_terms(&[(o("0"), 1), (o("1"), 1)]);
        assert!(!evaluate_atom(DecidableAtom::OrdWellFormed, &[unsorted]));
        assert!(evaluate_atom(
            DecidableAtom::OrdWellFormed,
            &[o("w+1").code()]
        ));
    }
}
