//! Parser for the splice-expression language:
//!
//! ```text
//! expr := NAME
//!       | splice(expr@COMP, expr@COMP)
//!       | cable(expr@COMP, INT, INT, INT)
//!       | connsum(expr@COMP, expr@COMP)
//!       | satellite(expr, expr@COMP)
//! ```
//!
//! `NAME` is a catalog entry, including `torus(p,q,d)`.

use crate::link::Catalog;

use super::expr::SpliceExpr;
use super::SpliceError;

/// Parses `text`, resolving names against `catalog` and checking that every
/// referenced component exists in the result of its subexpression.
pub fn parse_expr(text: &str, catalog: &Catalog) -> Result<SpliceExpr, SpliceError> {
    let mut p = Parser {
        text,
        pos: 0,
        catalog,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < text.len() {
        return Err(p.syntax("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
    catalog: &'a Catalog,
}

impl<'a> Parser<'a> {
    fn syntax(&self, message: &str) -> SpliceError {
        let message = if self.pos >= self.text.len() {
            "unexpected end of input".to_string()
        } else {
            message.to_string()
        };
        SpliceError::Syntax {
            offset: self.pos,
            message,
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn expect(&mut self, want: char) -> Result<(), SpliceError> {
        self.skip_ws();
        if self.peek() == Some(want) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.syntax(&format!("expected '{want}'")))
        }
    }

    fn at(&mut self, want: char) -> bool {
        self.skip_ws();
        self.peek() == Some(want)
    }

    fn ident(&mut self) -> Result<(usize, &'a str), SpliceError> {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '_' {
                self.pos += 1;
            } else {
                break;
            }
        }
        if self.pos == start {
            return Err(self.syntax("expected a name"));
        }
        Ok((start, &self.text[start..self.pos]))
    }

    fn int(&mut self) -> Result<i64, SpliceError> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.peek(), Some('-') | Some('+')) {
            self.pos += 1;
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.text[start..self.pos].parse().map_err(|_| {
            self.pos = start;
            self.syntax("expected an integer")
        })
    }

    /// `expr@COMP`, with the component checked against the subexpression.
    fn anchored(&mut self) -> Result<(SpliceExpr, String), SpliceError> {
        let e = self.expr()?;
        self.expect('@')?;
        let (offset, comp) = self.ident()?;
        if !e.labels().iter().any(|c| c == comp) {
            return Err(SpliceError::UnknownComponentAt {
                offset,
                link: e.to_string(),
                label: comp.to_string(),
            });
        }
        Ok((e, comp.to_string()))
    }

    fn expr(&mut self) -> Result<SpliceExpr, SpliceError> {
        let (start, name) = self.ident()?;
        let is_call = self.at('(');
        match (name, is_call) {
            ("splice", true) | ("connsum", true) => {
                self.expect('(')?;
                let (left, lc) = self.anchored()?;
                self.expect(',')?;
                let (right, rc) = self.anchored()?;
                self.expect(')')?;
                Ok(if name == "splice" {
                    SpliceExpr::splice(left, &lc, right, &rc)
                } else {
                    SpliceExpr::conn_sum(left, &lc, right, &rc)
                })
            }
            ("cable", true) => {
                self.expect('(')?;
                let (base, comp) = self.anchored()?;
                let mut nums = [0i64; 3];
                for n in &mut nums {
                    self.expect(',')?;
                    *n = self.int()?;
                }
                self.expect(')')?;
                Ok(SpliceExpr::cable(base, &comp, nums[0], nums[1], nums[2]))
            }
            ("satellite", true) => {
                self.expect('(')?;
                let companion = self.expr()?;
                self.expect(',')?;
                let (pattern, m) = self.anchored()?;
                self.expect(')')?;
                Ok(SpliceExpr::satellite(companion, pattern, &m))
            }
            ("torus", true) => {
                self.expect('(')?;
                let p = self.int()?;
                self.expect(',')?;
                let q = self.int()?;
                self.expect(',')?;
                let d = self.int()?;
                self.expect(')')?;
                let key = format!("torus({p},{q},{d})");
                Ok(SpliceExpr::Leaf(self.catalog.resolve(&key)?))
            }
            (_, true) => Err(SpliceError::UnknownName {
                offset: start,
                name: name.to_string(),
            }),
            (_, false) => match self.catalog.get(name) {
                Some(spec) => Ok(SpliceExpr::Leaf(spec)),
                None => Err(SpliceError::UnknownName {
                    offset: start,
                    name: name.to_string(),
                }),
            },
        }
    }
}
