//! Canonical S-expression syntax.
//!
//! ```text
//! formula := (top) | (bot) | (= t t) | (le t t) | (datom NAME t...)
//!          | (pr FORMULA t...) | (mem NAME t...) | (hole i)
//!          | (not f) | (and f f) | (or f f) | (imp f f)
//!          | (forall x f) | (exists x f) | (ball x t f) | (bex x t f)
//! term    := (z) | (v i) | x | (s t) | (+ t t) | (* t t) | (e2 t) | (num n) | (sub t i t)
//! ```
//!
//! A bare symbol refers to the innermost enclosing binder of that name. The
//! template of `pr` is quoted: it is parsed in an empty scope and may only
//! use `(hole i)`. Printing is canonical: binders are named `x0, x1, ...` by
//! depth, numerals print as `(num n)`, single spaces, no trailing space.

use super::{DecidableAtom, Formula, FormulaKind, Term, TermKind, KNOWN_ENUMERATORS};
use num_bigint::BigUint;
use std::fmt::Write;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown atom identifier `{name}` at byte {pos}")]
    UnknownAtom { pos: usize, name: String },
}

fn syntax<T>(pos: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError::Syntax {
        pos,
        msg: msg.into(),
    })
}

#[derive(Debug)]
enum Sexp<'a> {
    Atom(usize, &'a str),
    List(usize, Vec<Sexp<'a>>),
}

impl Sexp<'_> {
    fn pos(&self) -> usize {
        match self {
            Sexp::Atom(p, _) | Sexp::List(p, _) => *p,
        }
    }
}

fn read(text: &str) -> Result<Sexp<'_>, ParseError> {
    let bytes = text.as_bytes();
    let mut stack: Vec<(usize, Vec<Sexp>)> = Vec::new();
    let mut done: Option<Sexp> = None;
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if done.is_some() {
            return syntax(i, "trailing input after expression");
        }
        match c {
            b'(' => {
                stack.push((i, Vec::new()));
                i += 1;
            }
            b')' => {
                let Some((start, items)) = stack.pop() else {
                    return syntax(i, "unbalanced `)`");
                };
                let node = Sexp::List(start, items);
                match stack.last_mut() {
                    Some((_, parent)) => parent.push(node),
                    None => done = Some(node),
                }
                i += 1;
            }
            _ => {
                let start = i;
                while i < bytes.len()
                    && !bytes[i].is_ascii_whitespace()
                    && bytes[i] != b'('
                    && bytes[i] != b')'
                {
                    i += 1;
                }
                let node = Sexp::Atom(start, &text[start..i]);
                match stack.last_mut() {
                    Some((_, parent)) => parent.push(node),
                    None => done = Some(node),
                }
            }
        }
    }
    if let Some((start, _)) = stack.last() {
        return syntax(*start, "unclosed `(`");
    }
    done.ok_or(ParseError::Syntax {
        pos: text.len(),
        msg: "empty input".into(),
    })
}

struct Reader {
    scope: Vec<String>,
}

fn head<'a>(items: &[Sexp<'a>], pos: usize) -> Result<&'a str, ParseError> {
    match items.first() {
        Some(Sexp::Atom(_, tag)) => Ok(tag),
        Some(other) => syntax(other.pos(), "expected a tag"),
        None => syntax(pos, "empty list"),
    }
}

fn arity(items: &[Sexp], n: usize, pos: usize, tag: &str) -> Result<(), ParseError> {
    if items.len() != n + 1 {
        return syntax(
            pos,
            format!("`{tag}` takes {n} argument(s), got {}", items.len() - 1),
        );
    }
    Ok(())
}

fn natural<N: std::str::FromStr>(s: &Sexp) -> Result<N, ParseError> {
    match s {
        Sexp::Atom(p, a) if a.bytes().all(|b| b.is_ascii_digit()) => {
            a.parse().or_else(|_| syntax(*p, "number out of range"))
        }
        other => syntax(other.pos(), "expected a natural number"),
    }
}

fn symbol<'a>(s: &Sexp<'a>) -> Result<&'a str, ParseError> {
    match s {
        Sexp::Atom(p, a) => {
            if a.bytes().next().is_some_and(|b| b.is_ascii_digit()) {
                syntax(*p, "expected a symbol")
            } else {
                Ok(a)
            }
        }
        Sexp::List(p, _) => syntax(*p, "expected a symbol"),
    }
}

impl Reader {
    fn term(&mut self, s: &Sexp) -> Result<Term, ParseError> {
        match s {
            Sexp::Atom(p, name) => match self.scope.iter().rev().position(|b| b == name) {
                Some(idx) => Ok(Term::bound(idx as u32)),
                None => syntax(*p, format!("unbound variable `{name}`")),
            },
            Sexp::List(p, items) => {
                let tag = head(items, *p)?;
                match tag {
                    "z" => {
                        arity(items, 0, *p, tag)?;
                        Ok(Term::zero())
                    }
                    "v" => {
                        arity(items, 1, *p, tag)?;
                        Ok(Term::free(natural(&items[1])?))
                    }
                    "num" => {
                        arity(items, 1, *p, tag)?;
                        match &items[1] {
                            Sexp::Atom(q, a) => a
                                .parse::<BigUint>()
                                .map(Term::num)
                                .or_else(|_| syntax(*q, "expected a natural number")),
                            other => syntax(other.pos(), "expected a natural number"),
                        }
                    }
                    "s" => {
                        arity(items, 1, *p, tag)?;
                        Ok(Term::succ(self.term(&items[1])?))
                    }
                    "e2" => {
                        arity(items, 1, *p, tag)?;
                        Ok(Term::exp2(self.term(&items[1])?))
                    }
                    "+" => {
                        arity(items, 2, *p, tag)?;
                        Ok(Term::plus(self.term(&items[1])?, self.term(&items[2])?))
                    }
                    "*" => {
                        arity(items, 2, *p, tag)?;
                        Ok(Term::times(self.term(&items[1])?, self.term(&items[2])?))
                    }
                    "sub" => {
                        arity(items, 3, *p, tag)?;
                        let code = self.term(&items[1])?;
                        let var = natural(&items[2])?;
                        Ok(Term::sub(code, var, self.term(&items[3])?))
                    }
                    _ => syntax(*p, format!("unknown term tag `{tag}`")),
                }
            }
        }
    }

    fn terms(&mut self, items: &[Sexp]) -> Result<Vec<Term>, ParseError> {
        items.iter().map(|s| self.term(s)).collect()
    }

    fn binder(
        &mut self,
        items: &[Sexp],
        p: usize,
        tag: &str,
        bounded: bool,
    ) -> Result<Formula, ParseError> {
        arity(items, if bounded { 3 } else { 2 }, p, tag)?;
        let name = symbol(&items[1])?.to_string();
        let bound = if bounded {
            Some(self.term(&items[2])?)
        } else {
            None
        };
        self.scope.push(name);
        let body = self.formula(items.last().expect("arity checked"));
        self.scope.pop();
        let body = body?;
        Ok(match (tag, bound) {
            ("forall", None) => Formula::forall(body),
            ("exists", None) => Formula::exists(body),
            ("ball", Some(t)) => Formula::bounded_forall(t, body),
            (_, Some(t)) => Formula::bounded_exists(t, body),
            _ => unreachable!(),
        })
    }

    fn formula(&mut self, s: &Sexp) -> Result<Formula, ParseError> {
        let Sexp::List(p, items) = s else {
            return syntax(s.pos(), "expected a formula");
        };
        let p = *p;
        let tag = head(items, p)?;
        match tag {
            "top" => arity(items, 0, p, tag).map(|_| Formula::top()),
            "bot" => arity(items, 0, p, tag).map(|_| Formula::bot()),
            "=" | "le" => {
                arity(items, 2, p, tag)?;
                let (a, b) = (self.term(&items[1])?, self.term(&items[2])?);
                Ok(if tag == "=" {
                    Formula::eq(a, b)
                } else {
                    Formula::le(a, b)
                })
            }
            "datom" => {
                if items.len() < 2 {
                    return syntax(p, "`datom` needs a name");
                }
                let name = symbol(&items[1])?;
                let atom = DecidableAtom::from_name(name).ok_or(ParseError::UnknownAtom {
                    pos: items[1].pos(),
                    name: name.to_string(),
                })?;
                let args = self.terms(&items[2..])?;
                if args.len() != atom.arity() {
                    return syntax(p, format!("`{name}` takes {} argument(s)", atom.arity()));
                }
                Ok(Formula::decidable(atom, args))
            }
            "mem" => {
                if items.len() < 2 {
                    return syntax(p, "`mem` needs a name");
                }
                let name = symbol(&items[1])?;
                if !KNOWN_ENUMERATORS.contains(&name) {
                    return Err(ParseError::UnknownAtom {
                        pos: items[1].pos(),
                        name: name.to_string(),
                    });
                }
                let args = self.terms(&items[2..])?;
                Ok(Formula::member(name, args))
            }
            "pr" => {
                if items.len() < 2 {
                    return syntax(p, "`pr` needs a template");
                }
                let mut quoted = Reader { scope: Vec::new() };
                let template = quoted.formula(&items[1])?;
                let args = self.terms(&items[2..])?;
                if template.info().holes as usize > args.len() {
                    return syntax(p, "template has more holes than arguments");
                }
                Ok(Formula::provable(template, args))
            }
            "hole" => {
                arity(items, 1, p, tag)?;
                Ok(Formula::hole(natural(&items[1])?))
            }
            "not" => {
                arity(items, 1, p, tag)?;
                Ok(Formula::not(self.formula(&items[1])?))
            }
            "and" | "or" | "imp" => {
                arity(items, 2, p, tag)?;
                let (a, b) = (self.formula(&items[1])?, self.formula(&items[2])?);
                Ok(match tag {
                    "and" => Formula::and(a, b),
                    "or" => Formula::or(a, b),
                    _ => Formula::imp(a, b),
                })
            }
            "forall" | "exists" => self.binder(items, p, tag, false),
            "ball" | "bex" => self.binder(items, p, tag, true),
            _ => syntax(p, format!("unknown formula tag `{tag}`")),
        }
    }
}

/// Parses a formula in canonical S-expression syntax.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let sexp = read(text)?;
    Reader { scope: Vec::new() }.formula(&sexp)
}

pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let sexp = read(text)?;
    Reader { scope: Vec::new() }.term(&sexp)
}

fn write_term(out: &mut String, t: &Term, depth: u32) {
    match t.kind() {
        TermKind::Num(n) if n.bits() == 0 => out.push_str("(z)"),
        TermKind::Num(n) => {
            let _ = write!(out, "(num {n})");
        }
        TermKind::Free(i) => {
            let _ = write!(out, "(v {i})");
        }
        TermKind::Bound(i) => match depth.checked_sub(i + 1) {
            Some(level) => {
                let _ = write!(out, "x{level}");
            }
            // loose index in an open fragment
            None => {
                let _ = write!(out, "^{i}");
            }
        },
        TermKind::Succ(a) => wrap(out, "s", |o| write_term(o, a, depth)),
        TermKind::Exp2(a) => wrap(out, "e2", |o| write_term(o, a, depth)),
        TermKind::Plus(a, b) => wrap(out, "+", |o| {
            write_term(o, a, depth);
            o.push(' ');
            write_term(o, b, depth);
        }),
        TermKind::Times(a, b) => wrap(out, "*", |o| {
            write_term(o, a, depth);
            o.push(' ');
            write_term(o, b, depth);
        }),
        TermKind::Sub(a, v, b) => wrap(out, "sub", |o| {
            write_term(o, a, depth);
            let _ = write!(o, " {v} ");
            write_term(o, b, depth);
        }),
    }
}

fn wrap(out: &mut String, tag: &str, body: impl FnOnce(&mut String)) {
    out.push('(');
    out.push_str(tag);
    out.push(' ');
    body(out);
    out.push(')');
}

fn write_terms(out: &mut String, ts: &[Term], depth: u32) {
    for t in ts {
        out.push(' ');
        write_term(out, t, depth);
    }
}

fn write_formula(out: &mut String, f: &Formula, depth: u32) {
    use FormulaKind::*;
    match f.kind() {
        Top => out.push_str("(top)"),
        Bot => out.push_str("(bot)"),
        Hole(i) => {
            let _ = write!(out, "(hole {i})");
        }
        Eq(a, b) | Le(a, b) => {
            out.push_str(if matches!(f.kind(), Eq(..)) {
                "(= "
            } else {
                "(le "
            });
            write_term(out, a, depth);
            out.push(' ');
            write_term(out, b, depth);
            out.push(')');
        }
        Decidable(atom, ts) => {
            out.push_str("(datom ");
            out.push_str(atom.name());
            write_terms(out, ts, depth);
            out.push(')');
        }
        Member(name, ts) => {
            out.push_str("(mem ");
            out.push_str(name);
            write_terms(out, ts, depth);
            out.push(')');
        }
        Provable(tpl, ts) => {
            out.push_str("(pr ");
            write_formula(out, tpl, 0);
            write_terms(out, ts, depth);
            out.push(')');
        }
        Not(a) => wrap(out, "not", |o| write_formula(o, a, depth)),
        And(a, b) | Or(a, b) | Imp(a, b) => {
            let tag = match f.kind() {
                And(..) => "and",
                Or(..) => "or",
                _ => "imp",
            };
            wrap(out, tag, |o| {
                write_formula(o, a, depth);
                o.push(' ');
                write_formula(o, b, depth);
            })
        }
        Forall(a) | Exists(a) => {
            let tag = if matches!(f.kind(), Forall(_)) {
                "forall"
            } else {
                "exists"
            };
            wrap(out, tag, |o| {
                let _ = write!(o, "x{depth} ");
                write_formula(o, a, depth + 1);
            })
        }
        BoundedForall(t, a) | BoundedExists(t, a) => {
            let tag = if matches!(f.kind(), BoundedForall(..)) {
                "ball"
            } else {
                "bex"
            };
            wrap(out, tag, |o| {
                let _ = write!(o, "x{depth} ");
                write_term(o, t, depth);
                o.push(' ');
                write_formula(o, a, depth + 1);
            })
        }
    }
}

/// Canonical printing; `parse(&print(f)) == f` for every formula without
/// loose bound indices.
pub fn print(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(&mut out, f, 0);
    out
}

pub fn print_term(t: &Term) -> String {
    let mut out = String::new();
    write_term(&mut out, t, 0);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_universal_sentence() {
        let f = parse("(forall x (= x x))").unwrap();
        assert_eq!(
            f,
            Formula::forall(Formula::eq(Term::bound(0), Term::bound(0)))
        );
        assert_eq!(print(&f), "(forall x0 (= x0 x0))");
    }

    #[test]
    fn reads_consistency_abbreviation() {
        let f = parse("(not (pr (bot)))").unwrap();
        assert_eq!(f, Formula::not(Formula::pr(Formula::bot())));
    }

    #[test]
    fn alpha_equivalent_inputs_share_a_node() {
        let a = parse("(exists y (forall z (le y z)))").unwrap();
        let b = parse("(exists q (forall r (le q r)))").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn shadowing_resolves_to_innermost_binder() {
        let f = parse("(forall x (forall x (= x (z))))").unwrap();
        assert_eq!(print(&f), "(forall x0 (forall x1 (= x1 (z))))");
    }

    #[test]
    fn numerals_print_compactly() {
        let f = parse("(= (+ (e2 (e2 (s (z)))) (s (z))) (num 5))").unwrap();
        assert_eq!(print(&f), "(= (num 5) (num 5))");
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(
            parse("(and (top) (frob))"),
            Err(ParseError::Syntax {
                pos: 11,
                msg: "unknown formula tag `frob`".into()
            })
        );
        assert!(matches!(
            parse("(datom nope (z))"),
            Err(ParseError::UnknownAtom { pos: 7, .. })
        ));
        assert!(matches!(
            parse("(= x (z))"),
            Err(ParseError::Syntax { pos: 3, .. })
        ));
        assert!(matches!(
            parse("(top"),
            Err(ParseError::Syntax { pos: 0, .. })
        ));
        assert!(matches!(
            parse("(top) (bot)"),
            Err(ParseError::Syntax { .. })
        ));
    }

    #[test]
    fn quoted_templates_cannot_see_outer_binders() {
        assert!(parse("(forall x (pr (= x x)))").is_err());
        assert!(parse("(forall x (pr (not (hole 0)) x))").is_ok());
    }

    #[test]
    fn printing_is_single_spaced() {
        let f = parse("  (imp   (top)\n (ball y (v 2) (le y (v 2))))  ").unwrap();
        assert_eq!(print(&f), "(imp (top) (ball x0 (v 2) (le x0 (v 2))))");
    }
}
