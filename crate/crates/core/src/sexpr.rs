//! Text format for trees.
//!
//! ```text
//! tree  ::= "." | "(" color " " tree " " key " " tree ")"
//! color ::= "R" | "B"
//! key   ::= ["-"] digit+
//! ```
//!
//! Exactly one space separates fields; nothing else is accepted.

use std::fmt::{self, Display, Write};

use crate::error::{Error, Result};
use crate::tree::{Color, RedBlackTree};

/// Nesting limit. A valid tree of 2^64 keys is at most 129 levels deep.
pub const MAX_DEPTH: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// Reject anything that is not a valid red-black tree.
    #[default]
    Checked,
    /// Accept any syntactically correct tree. For building invalid inputs.
    Unchecked,
}

pub fn to_sexpr<K: Display>(t: &RedBlackTree<K>) -> String {
    let mut out = String::with_capacity(t.size() as usize * 8 + 1);
    write_tree(t, &mut out).expect("writing to a String cannot fail");
    out
}

pub fn write_tree<K: Display, W: Write>(t: &RedBlackTree<K>, out: &mut W) -> fmt::Result {
    match t.node() {
        None => out.write_char('.'),
        Some(n) => {
            write!(out, "({} ", n.color())?;
            write_tree(n.left(), out)?;
            write!(out, " {} ", n.key())?;
            write_tree(n.right(), out)?;
            out.write_char(')')
        }
    }
}

pub fn parse(text: &str) -> Result<RedBlackTree<i64>> {
    parse_with(text, Mode::Checked)
}

pub fn parse_with(text: &str, mode: Mode) -> Result<RedBlackTree<i64>> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let tree = p.tree(0)?;
    if p.pos != p.src.len() {
        return Err(p.error("trailing input after tree"));
    }
    if mode == Mode::Checked {
        tree.validate()?;
    }
    Ok(tree)
}

struct Parser<'s> {
    src: &'s [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Parse {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, byte: u8) -> Result<()> {
        if self.peek() == Some(byte) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", byte as char)))
        }
    }

    fn tree(&mut self, depth: usize) -> Result<RedBlackTree<i64>> {
        if depth > MAX_DEPTH {
            return Err(self.error("tree nested too deeply"));
        }
        match self.peek() {
            Some(b'.') => {
                self.pos += 1;
                Ok(RedBlackTree::leaf())
            }
            Some(b'(') => {
                self.pos += 1;
                let color = match self.peek() {
                    Some(b'R') => Color::Red,
                    Some(b'B') => Color::Black,
                    _ => return Err(self.error("expected color 'R' or 'B'")),
                };
                self.pos += 1;
                self.expect(b' ')?;
                let left = self.tree(depth + 1)?;
                self.expect(b' ')?;
                let key = self.key()?;
                self.expect(b' ')?;
                let right = self.tree(depth + 1)?;
                self.expect(b')')?;
                Ok(RedBlackTree::assemble_unchecked(color, left, key, right))
            }
            _ => Err(self.error("expected '.' or '('")),
        }
    }

    fn key(&mut self) -> Result<i64> {
        let start = self.pos;
        if self.peek() == Some(b'-') {
            self.pos += 1;
        }
        let digits = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if self.pos == digits {
            return Err(self.error("expected digit"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ASCII digits");
        text.parse().map_err(|_| Error::Parse {
            offset: start,
            message: "key out of 64-bit range".into(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Invariant;

    #[test]
    fn leaf_and_small_trees() {
        assert_eq!(to_sexpr(&parse(".").unwrap()), ".");
        let t = parse("(B . 5 (R . 7 .))").unwrap();
        assert_eq!(t.in_order(), vec![5, 7]);
        assert_eq!(t.black_height(), 1);
        assert_eq!(to_sexpr(&t), "(B . 5 (R . 7 .))");
        let t = parse("(R . -12 .)").unwrap();
        assert_eq!(t.in_order(), vec![-12]);
    }

    #[test]
    fn rejects_malformed_text() {
        for bad in [
            "",
            " .",
            ". ",
            "(B .  5 .)",
            "(X . 5 .)",
            "(B . 5 .",
            "(B . - .)",
            "(B . 5 .))",
            "(B . 99999999999999999999 .)",
            "(b . 5 .)",
            "(B . +5 .)",
        ] {
            assert!(matches!(parse(bad), Err(Error::Parse { .. })), "{bad:?}");
        }
    }

    #[test]
    fn checked_mode_validates() {
        let err = parse("(R (R . 1 .) 2 .)").unwrap_err();
        assert!(matches!(
            err,
            Error::InvariantViolation {
                invariant: Invariant::RedRed,
                ..
            }
        ));
        let err = parse("(B . 1 (B . 2 .))").unwrap_err();
        assert!(matches!(
            err,
            Error::InvariantViolation {
                invariant: Invariant::BlackHeight,
                ..
            }
        ));
        let t = parse_with("(R (R . 1 .) 2 .)", Mode::Unchecked).unwrap();
        assert!(t.validate().is_err());
    }

    #[test]
    fn depth_limit() {
        let mut s = String::new();
        for _ in 0..300 {
            s.push_str("(B ");
        }
        s.push('.');
        for _ in 0..300 {
            s.push_str(" 0 .)");
        }
        assert!(matches!(
            parse_with(&s, Mode::Unchecked),
            Err(Error::Parse { .. })
        ));
    }
}
