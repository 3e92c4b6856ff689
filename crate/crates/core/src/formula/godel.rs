//! Gödel numbering.
//!
//! A formula is written in prefix (Polish) notation over a 63-letter
//! alphabet: structural tokens `1..=31` and digit tokens `32..=63` (a digit
//! token carries five bits). Naturals inside the string (numerals, variable
//! indices, hole indices, atom identifiers) are base-32 digit runs closed by
//! an `END` token. The code is the token string read as a base-64 numeral.
//! No token is zero, so distinct strings get distinct codes, and code order
//! is shortlex order on token strings.
//!
//! A canonical numeral costs six bits per five bits of value, so the code of
//! a formula has bit length linear in its size.

use super::{DecidableAtom, Formula, FormulaKind, Term, TermKind, KNOWN_ENUMERATORS};
use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

const TOP: u8 = 1;
const BOT: u8 = 2;
const NOT: u8 = 3;
const AND: u8 = 4;
const OR: u8 = 5;
const IMP: u8 = 6;
const ALL: u8 = 7;
const EX: u8 = 8;
const BALL: u8 = 9;
const BEX: u8 = 10;
const EQ: u8 = 11;
const LE: u8 = 12;
const DATOM: u8 = 13;
const PR: u8 = 14;
const MEM: u8 = 15;
const HOLE: u8 = 16;
const T_NUM: u8 = 20;
const T_FREE: u8 = 21;
const T_BOUND: u8 = 22;
const T_S: u8 = 23;
const T_PLUS: u8 = 24;
const T_TIMES: u8 = 25;
const T_E2: u8 = 26;
const T_SUB: u8 = 27;
const END: u8 = 31;
const DIGIT0: u8 = 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecodeError {
    #[error("not a formula code: {0}")]
    NotAFormula(String),
}

fn bad<T>(msg: impl Into<String>) -> Result<T, DecodeError> {
    Err(DecodeError::NotAFormula(msg.into()))
}

fn push_nat(out: &mut Vec<u8>, n: &BigUint) {
    if !n.is_zero() {
        out.extend(n.to_radix_be(32).into_iter().map(|d| d + DIGIT0));
    }
    out.push(END);
}

fn push_small(out: &mut Vec<u8>, n: u64) {
    push_nat(out, &BigUint::from(n));
}

fn push_term(out: &mut Vec<u8>, t: &Term) {
    match t.kind() {
        TermKind::Num(n) => {
            out.push(T_NUM);
            push_nat(out, n);
        }
        TermKind::Free(i) => {
            out.push(T_FREE);
            push_small(out, *i as u64);
        }
        TermKind::Bound(i) => {
            out.push(T_BOUND);
            push_small(out, *i as u64);
        }
        TermKind::Succ(a) => {
            out.push(T_S);
            push_term(out, a);
        }
        TermKind::Exp2(a) => {
            out.push(T_E2);
            push_term(out, a);
        }
        TermKind::Plus(a, b) | TermKind::Times(a, b) => {
            out.push(if matches!(t.kind(), TermKind::Plus(..)) {
                T_PLUS
            } else {
                T_TIMES
            });
            push_term(out, a);
            push_term(out, b);
        }
        TermKind::Sub(a, v, b) => {
            out.push(T_SUB);
            push_term(out, a);
            push_small(out, *v as u64);
            push_term(out, b);
        }
    }
}

fn name_code(name: &str) -> BigUint {
    let mut bytes = vec![1u8];
    bytes.extend_from_slice(name.as_bytes());
    BigUint::from_bytes_be(&bytes)
}

fn push_formula(out: &mut Vec<u8>, f: &Formula) {
    use FormulaKind::*;
    match f.kind() {
        Top => out.push(TOP),
        Bot => out.push(BOT),
        Hole(i) => {
            out.push(HOLE);
            push_small(out, *i as u64);
        }
        Not(a) => {
            out.push(NOT);
            push_formula(out, a);
        }
        And(a, b) | Or(a, b) | Imp(a, b) => {
            out.push(match f.kind() {
                And(..) => AND,
                Or(..) => OR,
                _ => IMP,
            });
            push_formula(out, a);
            push_formula(out, b);
        }
        Forall(a) | Exists(a) => {
            out.push(if matches!(f.kind(), Forall(_)) {
                ALL
            } else {
                EX
            });
            push_formula(out, a);
        }
        BoundedForall(t, a) | BoundedExists(t, a) => {
            out.push(if matches!(f.kind(), BoundedForall(..)) {
                BALL
            } else {
                BEX
            });
            push_term(out, t);
            push_formula(out, a);
        }
        Eq(a, b) | Le(a, b) => {
            out.push(if matches!(f.kind(), Eq(..)) { EQ } else { LE });
            push_term(out, a);
            push_term(out, b);
        }
        Decidable(atom, ts) => {
            out.push(DATOM);
            push_small(out, atom.index() as u64);
            ts.iter().for_each(|t| push_term(out, t));
        }
        Provable(tpl, ts) => {
            out.push(PR);
            push_formula(out, tpl);
            push_small(out, ts.len() as u64);
            ts.iter().for_each(|t| push_term(out, t));
        }
        Member(name, ts) => {
            out.push(MEM);
            push_nat(out, &name_code(name));
            push_small(out, ts.len() as u64);
            ts.iter().for_each(|t| push_term(out, t));
        }
    }
}

/// The token string of a formula (digits `1..=63`).
pub fn tokens(f: &Formula) -> Vec<u8> {
    let mut out = Vec::new();
    push_formula(&mut out, f);
    out
}

/// Gödel number of `f`. Injective; inverted by [`godel_decode`].
pub fn godel_encode(f: &Formula) -> BigUint {
    BigUint::from_radix_be(&tokens(f), 64).expect("tokens are base-64 digits")
}

struct Decoder<'a> {
    toks: &'a [u8],
    pos: usize,
}

impl Decoder<'_> {
    fn next(&mut self) -> Result<u8, DecodeError> {
        let t = *self
            .toks
            .get(self.pos)
            .ok_or(DecodeError::NotAFormula("truncated".into()))?;
        self.pos += 1;
        Ok(t)
    }

    fn nat(&mut self) -> Result<BigUint, DecodeError> {
        let start = self.pos;
        loop {
            let t = self.next()?;
            if t == END {
                break;
            }
            if t < DIGIT0 {
                return bad("expected a digit");
            }
        }
        let digits: Vec<u8> = self.toks[start..self.pos - 1]
            .iter()
            .map(|d| d - DIGIT0)
            .collect();
        if digits.first() == Some(&0) {
            return bad("leading zero digit");
        }
        if digits.is_empty() {
            return Ok(BigUint::zero());
        }
        Ok(BigUint::from_radix_be(&digits, 32).expect("digits below 32"))
    }

    fn small(&mut self) -> Result<u32, DecodeError> {
        self.nat()?
            .to_u32()
            .ok_or(DecodeError::NotAFormula("index out of range".into()))
    }

    fn term(&mut self, depth: u32) -> Result<Term, DecodeError> {
        let tag = self.next()?;
        let t = match tag {
            T_NUM => return Ok(Term::num(self.nat()?)),
            T_FREE => return Ok(Term::free(self.small()?)),
            T_BOUND => {
                let i = self.small()?;
                if i >= depth {
                    return bad("loose bound variable");
                }
                return Ok(Term::bound(i));
            }
            T_S => Term::succ(self.term(depth)?),
            T_E2 => Term::exp2(self.term(depth)?),
            T_PLUS => {
                let a = self.term(depth)?;
                Term::plus(a, self.term(depth)?)
            }
            T_TIMES => {
                let a = self.term(depth)?;
                Term::times(a, self.term(depth)?)
            }
            T_SUB => {
                let a = self.term(depth)?;
                let v = self.small()?;
                Term::sub(a, v, self.term(depth)?)
            }
            _ => return bad(format!("unexpected token {tag} in term")),
        };
        // a structural spelling of a canonical numeral has its own code
        if t.as_num().is_some() {
            return bad("non-canonical numeral spelling");
        }
        Ok(t)
    }

    fn terms(&mut self, n: usize, depth: u32) -> Result<Vec<Term>, DecodeError> {
        (0..n).map(|_| self.term(depth)).collect()
    }

    fn formula(&mut self, depth: u32) -> Result<Formula, DecodeError> {
        let tag = self.next()?;
        Ok(match tag {
            TOP => Formula::top(),
            BOT => Formula::bot(),
            HOLE => Formula::hole(self.small()?),
            NOT => Formula::not(self.formula(depth)?),
            AND | OR | IMP => {
                let a = self.formula(depth)?;
                let b = self.formula(depth)?;
                match tag {
                    AND => Formula::and(a, b),
                    OR => Formula::or(a, b),
                    _ => Formula::imp(a, b),
                }
            }
            ALL => Formula::forall(self.formula(depth + 1)?),
            EX => Formula::exists(self.formula(depth + 1)?),
            BALL | BEX => {
                let t = self.term(depth)?;
                let body = self.formula(depth + 1)?;
                if tag == BALL {
                    Formula::bounded_forall(t, body)
                } else {
                    Formula::bounded_exists(t, body)
                }
            }
            EQ | LE => {
                let a = self.term(depth)?;
                let b = self.term(depth)?;
                if tag == EQ {
                    Formula::eq(a, b)
                } else {
                    Formula::le(a, b)
                }
            }
            DATOM => {
                let atom = DecidableAtom::from_index(self.small()?)
                    .ok_or(DecodeError::NotAFormula("unknown decidable atom".into()))?;
                Formula::decidable(atom, self.terms(atom.arity(), depth)?)
            }
            PR => {
                let tpl = self.formula(0)?;
                if !tpl.info().free.is_empty() {
                    return bad("provability template with free variables");
                }
                let k = self.small()? as usize;
                if (tpl.info().holes as usize) > k {
                    return bad("template has more holes than arguments");
                }
                Formula::provable(tpl, self.terms(k, depth)?)
            }
            MEM => {
                let bytes = self.nat()?.to_bytes_be();
                let name = match bytes.split_first() {
                    Some((1, rest)) => std::str::from_utf8(rest)
                        .map_err(|_| DecodeError::NotAFormula("bad enumerator name".into()))?
                        .to_string(),
                    _ => return bad("bad enumerator name"),
                };
                if !KNOWN_ENUMERATORS.contains(&name.as_str()) {
                    return bad("unknown enumerator");
                }
                let k = self.small()? as usize;
                Formula::member(&name, self.terms(k, depth)?)
            }
            _ => return bad(format!("unexpected token {tag} in formula")),
        })
    }
}

/// Decodes a Gödel number produced by [`godel_encode`].
pub fn godel_decode(n: &BigUint) -> Result<Formula, DecodeError> {
    if n.is_zero() {
        return bad("zero");
    }
    let toks = n.to_radix_be(64);
    if toks.contains(&0) {
        return bad("zero token");
    }
    let mut d = Decoder {
        toks: &toks,
        pos: 0,
    };
    let f = d.formula(0)?;
    if d.pos != toks.len() {
        return bad("trailing tokens");
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    #[test]
    fn top_round_trips() {
        assert_eq!(
            godel_decode(&godel_encode(&Formula::top())).unwrap(),
            Formula::top()
        );
        assert_eq!(godel_encode(&Formula::top()), BigUint::from(1u32));
    }

    #[test]
    fn distinct_atomic_sentences_get_distinct_codes() {
        let phi = parse("(= (z) (z))").unwrap();
        let psi = parse("(= (z) (s (z)))").unwrap();
        assert_ne!(godel_encode(&phi), godel_encode(&psi));
    }

    #[test]
    fn non_codes_are_rejected() {
        assert!(godel_decode(&BigUint::zero()).is_err());
        // "and top" is truncated
        assert!(godel_decode(&BigUint::from(4u32 * 64 + 1)).is_err());
        // a zero token inside the string
        assert!(godel_decode(&BigUint::from(64u32)).is_err());
        // "top top" has trailing tokens
        assert!(godel_decode(&BigUint::from(65u32)).is_err());
    }

    #[test]
    fn structural_numeral_spelling_is_not_a_code() {
        // T_S T_NUM END spells S0, whose canonical form is (num 1)
        let toks = [EQ, T_S, T_NUM, END, T_NUM, END];
        let n = BigUint::from_radix_be(&toks, 64).unwrap();
        assert!(godel_decode(&n).is_err());
    }

    #[test]
    fn numeral_codes_are_linear_in_value_bits() {
        let big = BigUint::from(3u32).pow(5000);
        let f = crate::formula::Formula::eq(Term::num(big.clone()), Term::zero());
        let bits = godel_encode(&f).bits();
        assert!(bits < big.bits() * 6 / 5 + 64, "{bits} vs {}", big.bits());
    }
}
