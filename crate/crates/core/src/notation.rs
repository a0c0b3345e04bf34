//! Parenthesized text notation, e.g. `(1)+(2+7)+(3+6)+(4+5)`.
//!
//! Grammar: `partition := clause ('+' clause)*`,
//! `clause := '(' int ('+' int)* ')'`, whitespace allowed between tokens.
//! [`render`] emits canonical order with no whitespace.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::partition::{canonicalize, GoodPartition, Part};
use crate::Error;

pub fn render(p: &GoodPartition) -> String {
    render_parts(p.parts())
}

pub fn render_parts(parts: &[Part]) -> String {
    let mut s = String::new();
    for (i, part) in parts.iter().enumerate() {
        if i > 0 {
            s.push('+');
        }
        s.push('(');
        for (j, x) in part.elements().iter().enumerate() {
            if j > 0 {
                s.push('+');
            }
            let _ = write!(s, "{x}");
        }
        s.push(')');
    }
    s
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8, what: &'static str) -> Result<(), Error> {
        match self.peek() {
            Some(b) if b == c => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(Error::Syntax { offset: self.pos, expected: what }),
        }
    }

    fn int(&mut self) -> Result<u64, Error> {
        self.skip_ws();
        let start = self.pos;
        let mut v: u64 = 0;
        while let Some(&b) = self.bytes.get(self.pos) {
            if !b.is_ascii_digit() {
                break;
            }
            v = v
                .checked_mul(10)
                .and_then(|v| v.checked_add((b - b'0') as u64))
                .ok_or(Error::Syntax { offset: start, expected: "integer that fits in 64 bits" })?;
            self.pos += 1;
        }
        if self.pos == start {
            return Err(Error::Syntax { offset: start, expected: "integer" });
        }
        Ok(v)
    }
}

/// Parses the notation into raw parts without validating them.
pub fn parse_parts(text: &str) -> Result<Vec<Part>, Error> {
    let mut c = Cursor { bytes: text.as_bytes(), pos: 0 };
    let mut parts = Vec::new();
    loop {
        c.expect(b'(', "'('")?;
        let mut elems = alloc::vec![c.int()?];
        loop {
            match c.peek() {
                Some(b'+') => {
                    c.pos += 1;
                    elems.push(c.int()?);
                }
                Some(b')') => {
                    c.pos += 1;
                    break;
                }
                _ => return Err(Error::Syntax { offset: c.pos, expected: "'+' or ')'" }),
            }
        }
        parts.push(Part::new(elems));
        match c.peek() {
            None => break,
            Some(b'+') => c.pos += 1,
            _ => return Err(Error::Syntax { offset: c.pos, expected: "'+' or end of input" }),
        }
    }
    Ok(parts)
}

/// Parses, validates against `(n, m)` and canonicalizes.
pub fn parse(text: &str, n: u64, m: u64) -> Result<GoodPartition, Error> {
    canonicalize(n, m, parse_parts(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::Violation;

    #[test]
    fn renders_canonical() {
        let p = parse("(4+5)+(3+6)+(2+7)+(1)", 7, 3).unwrap();
        assert_eq!(render(&p), "(1)+(2+7)+(3+6)+(4+5)");
        let p = parse(" ( 2 + 1 ) ", 2, 3).unwrap();
        assert_eq!(render(&p), "(1+2)");
    }

    #[test]
    fn syntax_errors_report_offset() {
        assert_eq!(parse("(1+2", 2, 3), Err(Error::Syntax { offset: 4, expected: "'+' or ')'" }));
        assert!(matches!(parse("", 2, 3), Err(Error::Syntax { offset: 0, .. })));
        assert!(matches!(parse("(1+2)(3)", 3, 3), Err(Error::Syntax { offset: 5, .. })));
        assert!(matches!(parse("(1+)", 1, 3), Err(Error::Syntax { offset: 3, .. })));
        assert!(matches!(parse("(99999999999999999999)", 1, 3), Err(Error::Syntax { offset: 1, .. })));
    }

    #[test]
    fn parse_then_validate() {
        match parse("(1+2)+(3+5)+(4)", 5, 3) {
            Err(Error::Invalid(v)) => {
                assert!(v.contains(&Violation::SumNotPower { part: 1, sum: 8 }));
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
