//! Propositional modal formulas with a single box, hash-consed.
//!
//! Text syntax (loosest binding first): `->` (right associative), `|`, `&`,
//! then the prefix operators `~` and `box`. Atoms are identifiers; `T` and
//! `F` (or `top` / `bot`) are the constants. `dia A` abbreviates `~box~A`.

use crate::intern::{node_identity, Node, Table};
use std::collections::BTreeSet;
use std::fmt;
use std::sync::{Arc, OnceLock};
use thiserror::Error;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum ModalKind {
    Atom(Arc<str>),
    Top,
    Bot,
    Not(ModalFormula),
    And(ModalFormula, ModalFormula),
    Or(ModalFormula, ModalFormula),
    Imp(ModalFormula, ModalFormula),
    Box(ModalFormula),
}

#[derive(Debug, Clone)]
pub struct ModalInfo {
    pub size: u64,
    pub has_box: bool,
}

#[derive(Clone)]
pub struct ModalFormula(Arc<Node<ModalKind, ModalInfo>>);
node_identity!(ModalFormula);

fn table() -> &'static Table<ModalKind, ModalInfo> {
    static T: OnceLock<Table<ModalKind, ModalInfo>> = OnceLock::new();
    T.get_or_init(Table::new)
}

impl ModalFormula {
    fn mk(kind: ModalKind) -> Self {
        ModalFormula(table().intern(kind, |k| {
            use ModalKind::*;
            match k {
                Atom(_) | Top | Bot => ModalInfo {
                    size: 1,
                    has_box: false,
                },
                Not(a) => ModalInfo {
                    size: a.info().size + 1,
                    has_box: a.info().has_box,
                },
                Box(a) => ModalInfo {
                    size: a.info().size + 1,
                    has_box: true,
                },
                And(a, b) | Or(a, b) | Imp(a, b) => ModalInfo {
                    size: a.info().size.saturating_add(b.info().size) + 1,
                    has_box: a.info().has_box || b.info().has_box,
                },
            }
        }))
    }

    pub fn kind(&self) -> &ModalKind {
        &self.0.kind
    }

    pub fn info(&self) -> &ModalInfo {
        &self.0.info
    }

    pub fn id(&self) -> u64 {
        self.0.id
    }

    pub fn atom(name: &str) -> Self {
        Self::mk(ModalKind::Atom(Arc::from(name)))
    }

    pub fn top() -> Self {
        Self::mk(ModalKind::Top)
    }

    pub fn bot() -> Self {
        Self::mk(ModalKind::Bot)
    }

    pub fn not(a: Self) -> Self {
        Self::mk(ModalKind::Not(a))
    }

    pub fn and(a: Self, b: Self) -> Self {
        Self::mk(ModalKind::And(a, b))
    }

    pub fn or(a: Self, b: Self) -> Self {
        Self::mk(ModalKind::Or(a, b))
    }

    pub fn imp(a: Self, b: Self) -> Self {
        Self::mk(ModalKind::Imp(a, b))
    }

    pub fn boxed(a: Self) -> Self {
        Self::mk(ModalKind::Box(a))
    }

    /// `◇A = ¬□¬A`, the skeleton of `Con_T`.
    pub fn dia(a: Self) -> Self {
        Self::not(Self::boxed(Self::not(a)))
    }

    pub fn iff(a: Self, b: Self) -> Self {
        Self::and(Self::imp(a.clone(), b.clone()), Self::imp(b, a))
    }

    /// Left-nested conjunction; empty gives `T`.
    pub fn and_all(items: impl IntoIterator<Item = Self>) -> Self {
        items
            .into_iter()
            .reduce(Self::and)
            .unwrap_or_else(Self::top)
    }

    pub fn is_box_free(&self) -> bool {
        !self.info().has_box
    }

    /// Distinct subformulas, children before parents, in first-visit order.
    pub fn subformulas(&self) -> Vec<ModalFormula> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        fn go(
            f: &ModalFormula,
            seen: &mut std::collections::HashSet<u64>,
            out: &mut Vec<ModalFormula>,
        ) {
            if !seen.insert(f.id()) {
                return;
            }
            match f.kind() {
                ModalKind::Not(a) | ModalKind::Box(a) => go(a, seen, out),
                ModalKind::And(a, b) | ModalKind::Or(a, b) | ModalKind::Imp(a, b) => {
                    go(a, seen, out);
                    go(b, seen, out);
                }
                _ => {}
            }
            out.push(f.clone());
        }
        go(self, &mut seen, &mut out);
        out
    }

    pub fn atoms(&self) -> BTreeSet<Arc<str>> {
        self.subformulas()
            .into_iter()
            .filter_map(|f| match f.kind() {
                ModalKind::Atom(a) => Some(a.clone()),
                _ => None,
            })
            .collect()
    }

    /// Replaces atoms by formulas (uniform substitution).
    pub fn substitute(&self, map: &dyn Fn(&str) -> Option<ModalFormula>) -> ModalFormula {
        let mut memo = std::collections::HashMap::new();
        fn go(
            f: &ModalFormula,
            map: &dyn Fn(&str) -> Option<ModalFormula>,
            memo: &mut std::collections::HashMap<u64, ModalFormula>,
        ) -> ModalFormula {
            if let Some(r) = memo.get(&f.id()) {
                return r.clone();
            }
            use ModalKind::*;
            let r = match f.kind() {
                Atom(a) => map(a).unwrap_or_else(|| f.clone()),
                Top | Bot => f.clone(),
                Not(a) => ModalFormula::not(go(a, map, memo)),
                Box(a) => ModalFormula::boxed(go(a, map, memo)),
                And(a, b) => ModalFormula::and(go(a, map, memo), go(b, map, memo)),
                Or(a, b) => ModalFormula::or(go(a, map, memo), go(b, map, memo)),
                Imp(a, b) => ModalFormula::imp(go(a, map, memo), go(b, map, memo)),
            };
            memo.insert(f.id(), r.clone());
            r
        }
        go(self, map, &mut memo)
    }
}

fn prec(f: &ModalFormula) -> u8 {
    match f.kind() {
        ModalKind::Imp(..) => 1,
        ModalKind::Or(..) => 2,
        ModalKind::And(..) => 3,
        _ => 4,
    }
}

fn write_modal(out: &mut String, f: &ModalFormula, min: u8) {
    let p = prec(f);
    if p < min {
        out.push('(');
    }
    match f.kind() {
        ModalKind::Atom(a) => out.push_str(a),
        ModalKind::Top => out.push('T'),
        ModalKind::Bot => out.push('F'),
        ModalKind::Not(a) => {
            out.push('~');
            write_modal(out, a, 4);
        }
        ModalKind::Box(a) => {
            out.push_str("box ");
            write_modal(out, a, 4);
        }
        ModalKind::And(a, b) => {
            write_modal(out, a, 3);
            out.push_str(" & ");
            write_modal(out, b, 4);
        }
        ModalKind::Or(a, b) => {
            write_modal(out, a, 2);
            out.push_str(" | ");
            write_modal(out, b, 3);
        }
        ModalKind::Imp(a, b) => {
            write_modal(out, a, 2);
            out.push_str(" -> ");
            write_modal(out, b, 1);
        }
    }
    if p < min {
        out.push(')');
    }
}

impl fmt::Display for ModalFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_modal(&mut s, self, 0);
        f.write_str(&s)
    }
}

impl fmt::Debug for ModalFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("modal syntax error at byte {pos}: {msg}")]
pub struct ModalParseError {
    pub pos: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Not,
    And,
    Or,
    Imp,
    Iff,
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>, ModalParseError> {
    let b = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        let start = i;
        let tok = match c {
            c if c.is_ascii_whitespace() => {
                i += 1;
                continue;
            }
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'~' | b'!' => Tok::Not,
            b'&' => Tok::And,
            b'|' => Tok::Or,
            b'-' if b.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Imp
            }
            b'<' if s[i..].starts_with("<->") => {
                i += 2;
                Tok::Iff
            }
            c if c.is_ascii_alphanumeric() || c == b'_' => {
                while i + 1 < b.len() && (b[i + 1].is_ascii_alphanumeric() || b[i + 1] == b'_') {
                    i += 1;
                }
                Tok::Ident(s[start..=i].to_string())
            }
            _ => {
                return Err(ModalParseError {
                    pos: i,
                    msg: format!("unexpected character `{}`", c as char),
                })
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn err<T>(&self, msg: &str) -> Result<T, ModalParseError> {
        Err(ModalParseError {
            pos: self.toks.get(self.pos).map_or(self.end, |(p, _)| *p),
            msg: msg.into(),
        })
    }

    fn iff(&mut self) -> Result<ModalFormula, ModalParseError> {
        let a = self.imp()?;
        if self.peek() == Some(&Tok::Iff) {
            self.pos += 1;
            let b = self.iff()?;
            return Ok(ModalFormula::iff(a, b));
        }
        Ok(a)
    }

    fn imp(&mut self) -> Result<ModalFormula, ModalParseError> {
        let a = self.or()?;
        if self.peek() == Some(&Tok::Imp) {
            self.pos += 1;
            let b = self.imp()?;
            return Ok(ModalFormula::imp(a, b));
        }
        Ok(a)
    }

    fn or(&mut self) -> Result<ModalFormula, ModalParseError> {
        let mut a = self.and()?;
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            a = ModalFormula::or(a, self.and()?);
        }
        Ok(a)
    }

    fn and(&mut self) -> Result<ModalFormula, ModalParseError> {
        let mut a = self.unary()?;
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            a = ModalFormula::and(a, self.unary()?);
        }
        Ok(a)
    }

    fn unary(&mut self) -> Result<ModalFormula, ModalParseError> {
        match self.peek().cloned() {
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(ModalFormula::not(self.unary()?))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let a = self.iff()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected `)`");
                }
                self.pos += 1;
                Ok(a)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Ok(match name.as_str() {
                    "box" => ModalFormula::boxed(self.unary()?),
                    "dia" => ModalFormula::dia(self.unary()?),
                    "not" => ModalFormula::not(self.unary()?),
                    "T" | "top" => ModalFormula::top(),
                    "F" | "bot" => ModalFormula::bot(),
                    _ => ModalFormula::atom(&name),
                })
            }
            _ => self.err("expected a formula"),
        }
    }
}

/// Parses the infix modal syntax, e.g. `box(box p -> p) -> box p`.
pub fn parse_modal(s: &str) -> Result<ModalFormula, ModalParseError> {
    let mut p = Parser {
        toks: lex(s)?,
        pos: 0,
        end: s.len(),
    };
    let f = p.iff()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_lob_axiom() {
        let f = parse_modal("box(box p -> p) -> box p").unwrap();
        let p = ModalFormula::atom("p");
        let expected = ModalFormula::imp(
            ModalFormula::boxed(ModalFormula::imp(ModalFormula::boxed(p.clone()), p.clone())),
            ModalFormula::boxed(p),
        );
        assert_eq!(f, expected);
        assert_eq!(f.to_string(), "box (box p -> p) -> box p");
    }

    #[test]
    fn printing_round_trips() {
        for s in [
            "~box F",
            "a & b | c -> d",
            "(a -> b) -> c",
            "a -> b -> c",
            "~(a & ~b)",
            "box ~box ~(p & q)",
        ] {
            let f = parse_modal(s).unwrap();
            assert_eq!(parse_modal(&f.to_string()).unwrap(), f, "{s}");
        }
    }

    #[test]
    fn subformulas_are_children_first() {
        let f = parse_modal("box p & p").unwrap();
        let subs = f.subformulas();
        assert_eq!(subs.len(), 3);
        assert_eq!(subs.last(), Some(&f));
    }

    #[test]
    fn reports_positions() {
        assert_eq!(parse_modal("p & ").unwrap_err().pos, 4);
        assert_eq!(parse_modal("p $ q").unwrap_err().pos, 2);
    }
}
