//! Text syntax for group expressions and their elements.
//!
//! Groups: `1`, `C(n)`, `D(g,…)`, `W(g,n)`, `U(m,k)` or `U(m,k,q)`.
//! Elements are parsed against their parent group: `1` for the trivial
//! group, decimal residues, `(a,b,…)` tuples, `(b0,…,b_{n-1};c)` wreath
//! elements, and polynomial literals such as `1+e1+2*e1*e2`.

use super::{GroupExpr, PElement};
use crate::error::{Error, Result};
use crate::magnus::poly::{PolyRing, TruncatedPoly};

pub(crate) fn format_group(g: &GroupExpr) -> String {
    match g {
        GroupExpr::Trivial => "1".into(),
        GroupExpr::Cyclic(n) => format!("C({n})"),
        GroupExpr::Direct(parts) => {
            let inner: Vec<String> = parts.iter().map(format_group).collect();
            format!("D({})", inner.join(","))
        }
        GroupExpr::Wreath(base, top) => format!("W({},{top})", format_group(base)),
        GroupExpr::Units(ring) => ring.to_string(),
    }
}

pub(crate) fn format_element(a: &PElement) -> String {
    let mut out = String::new();
    write_element(a, &mut out);
    out
}

fn write_element(a: &PElement, out: &mut String) {
    match a {
        PElement::Unit => out.push('1'),
        PElement::Residue(r) => out.push_str(&r.to_string()),
        PElement::Tuple(xs) => {
            out.push('(');
            for (i, x) in xs.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_element(x, out);
            }
            out.push(')');
        }
        PElement::Wreath(xs, c) => {
            out.push('(');
            for (i, x) in xs.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_element(x, out);
            }
            out.push(';');
            out.push_str(&c.to_string());
            out.push(')');
        }
        PElement::Poly(f) => out.push_str(&f.to_string()),
    }
}

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(s: &'a str) -> Self {
        Cursor { s: s.as_bytes(), pos: 0 }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse { line: 0, msg: format!("{} at column {}", msg.into(), self.pos + 1) }
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected '{}'", c as char)))
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<u64> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii digits");
        // reject leading zeros so that printing round-trips
        if text.len() > 1 && text.starts_with('0') {
            return Err(self.err("leading zero in number"));
        }
        text.parse().map_err(|_| self.err("number out of range"))
    }

    fn done(&self) -> Result<()> {
        if self.pos == self.s.len() {
            Ok(())
        } else {
            Err(self.err("trailing input"))
        }
    }
}

/// Parses a group expression and checks it is a `p`-group.
pub fn parse_group(text: &str, p: u32) -> Result<GroupExpr> {
    let mut c = Cursor::new(text.trim());
    let g = group(&mut c, p)?;
    c.done()?;
    g.validate(p)?;
    Ok(g)
}

fn group(c: &mut Cursor, p: u32) -> Result<GroupExpr> {
    match c.peek() {
        Some(b'1') => {
            c.pos += 1;
            Ok(GroupExpr::Trivial)
        }
        Some(b'C') => {
            c.pos += 1;
            c.expect(b'(')?;
            let n = c.number()?;
            c.expect(b')')?;
            Ok(GroupExpr::Cyclic(n))
        }
        Some(b'D') => {
            c.pos += 1;
            c.expect(b'(')?;
            let mut parts = Vec::new();
            if !c.eat(b')') {
                loop {
                    parts.push(group(c, p)?);
                    if c.eat(b')') {
                        break;
                    }
                    c.expect(b',')?;
                }
            }
            Ok(GroupExpr::Direct(parts))
        }
        Some(b'W') => {
            c.pos += 1;
            c.expect(b'(')?;
            let base = group(c, p)?;
            c.expect(b',')?;
            let top = c.number()?;
            c.expect(b')')?;
            if top == 0 || top > 1 << 20 {
                return Err(c.err("wreath top order out of range"));
            }
            Ok(GroupExpr::Wreath(Box::new(base), top))
        }
        Some(b'U') => {
            c.pos += 1;
            c.expect(b'(')?;
            let m = c.number()?;
            c.expect(b',')?;
            let k = c.number()?;
            let q = if c.eat(b',') { Some(c.number()?) } else { None };
            c.expect(b')')?;
            let small = |v: u64| u32::try_from(v).map_err(|_| c.err("parameter out of range"));
            let ring = PolyRing::new(p, small(m)?, small(k)?, q.map(small).transpose()?)?;
            Ok(GroupExpr::Units(ring))
        }
        _ => Err(c.err("expected a group expression")),
    }
}

/// Parses an element literal of `group`.
pub fn parse_element(group: &GroupExpr, text: &str) -> Result<PElement> {
    let mut c = Cursor::new(text.trim());
    let a = element(&mut c, group)?;
    c.done()?;
    group.check(&a)?;
    Ok(a)
}

fn element(c: &mut Cursor, g: &GroupExpr) -> Result<PElement> {
    match g {
        GroupExpr::Trivial => {
            c.expect(b'1')?;
            Ok(PElement::Unit)
        }
        GroupExpr::Cyclic(_) => Ok(PElement::Residue(c.number()?)),
        GroupExpr::Direct(parts) => {
            c.expect(b'(')?;
            let mut xs = Vec::with_capacity(parts.len());
            for (i, part) in parts.iter().enumerate() {
                if i > 0 {
                    c.expect(b',')?;
                }
                xs.push(element(c, part)?);
            }
            c.expect(b')')?;
            Ok(PElement::Tuple(xs))
        }
        GroupExpr::Wreath(base, top) => {
            c.expect(b'(')?;
            let mut xs = Vec::with_capacity(*top as usize);
            for i in 0..*top {
                if i > 0 {
                    c.expect(b',')?;
                }
                xs.push(element(c, base)?);
            }
            c.expect(b';')?;
            let t = c.number()?;
            c.expect(b')')?;
            Ok(PElement::Wreath(xs, t))
        }
        GroupExpr::Units(ring) => {
            let start = c.pos;
            while !matches!(c.peek(), None | Some(b',') | Some(b';') | Some(b')')) {
                c.pos += 1;
            }
            let text = std::str::from_utf8(&c.s[start..c.pos]).map_err(|_| c.err("invalid utf-8"))?;
            Ok(PElement::Poly(TruncatedPoly::parse(*ring, text)?))
        }
    }
}
