//! Recursive-descent parser for rational expressions in the `t` variables.
//!
//! ```text
//! rational := expr ('/' expr)?
//! expr     := ('+'|'-')? term (('+'|'-') term)*
//! term     := factor ('*' factor)*
//! factor   := atom ('^' int)?
//! atom     := int | var | '(' expr ')'
//! var      := 't' '_' ident | 't'
//! ```
//!
//! A leading sign is accepted so that every rendered value parses back.

use num_bigint::BigInt;

use super::monomial::Monomial;
use super::ratfn::RatFn;
use super::SymError;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Var(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    End,
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    tok: Tok,
    tok_pos: usize,
}

fn syntax(offset: usize, message: impl Into<String>) -> SymError {
    SymError::Syntax {
        offset,
        message: message.into(),
    }
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Self, SymError> {
        let mut p = Parser {
            src,
            pos: 0,
            tok: Tok::End,
            tok_pos: 0,
        };
        p.advance()?;
        Ok(p)
    }

    fn advance(&mut self) -> Result<(), SymError> {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        self.tok_pos = self.pos;
        if self.pos >= bytes.len() {
            self.tok = Tok::End;
            return Ok(());
        }
        let c = bytes[self.pos];
        let single = match c {
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'^' => Some(Tok::Caret),
            b'/' => Some(Tok::Slash),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = single {
            self.pos += 1;
            self.tok = t;
            return Ok(());
        }
        if c.is_ascii_digit() {
            let start = self.pos;
            while self.pos < bytes.len() && bytes[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            self.tok = Tok::Int(self.src[start..self.pos].parse().expect("digits"));
            return self.check_separated();
        }
        if c == b't' {
            let start = self.pos;
            self.pos += 1;
            if self.pos < bytes.len() && bytes[self.pos] == b'_' {
                self.pos += 1;
                let id_start = self.pos;
                while self.pos < bytes.len()
                    && (bytes[self.pos].is_ascii_alphanumeric() || bytes[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                if self.pos == id_start {
                    return Err(syntax(self.pos, "expected identifier after 't_'"));
                }
            }
            self.tok = Tok::Var(self.src[start..self.pos].to_string());
            return self.check_separated();
        }
        Err(syntax(
            self.pos,
            format!("unexpected character {:?}", c as char),
        ))
    }

    /// Rejects juxtaposed identifiers such as `t2` or `3t`.
    fn check_separated(&self) -> Result<(), SymError> {
        match self.src.as_bytes().get(self.pos) {
            Some(b) if b.is_ascii_alphanumeric() || *b == b'_' => {
                Err(syntax(self.pos, "unexpected character after token"))
            }
            _ => Ok(()),
        }
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), SymError> {
        if self.tok == want {
            self.advance()
        } else {
            Err(syntax(self.tok_pos, format!("expected {what}")))
        }
    }

    fn rational(&mut self) -> Result<RatFn, SymError> {
        let num = self.expr()?;
        if self.tok == Tok::Slash {
            let at = self.tok_pos;
            self.advance()?;
            let den = self.expr()?;
            if den.is_zero() {
                return Err(SymError::ZeroDenominator { offset: at });
            }
            return Ok(&num / &den);
        }
        Ok(num)
    }

    fn expr(&mut self) -> Result<RatFn, SymError> {
        let mut negate = false;
        match self.tok {
            Tok::Minus => {
                negate = true;
                self.advance()?;
            }
            Tok::Plus => self.advance()?,
            _ => {}
        }
        let first = self.term()?;
        let mut acc = if negate { -first } else { first };
        loop {
            match self.tok {
                Tok::Plus => {
                    self.advance()?;
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.advance()?;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RatFn, SymError> {
        let mut acc = self.factor()?;
        while self.tok == Tok::Star {
            self.advance()?;
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<RatFn, SymError> {
        let base = self.atom()?;
        if self.tok != Tok::Caret {
            return Ok(base);
        }
        self.advance()?;
        let neg = if self.tok == Tok::Minus {
            self.advance()?;
            true
        } else {
            false
        };
        let at = self.tok_pos;
        let Tok::Int(n) = &self.tok else {
            return Err(syntax(at, "expected integer exponent"));
        };
        let mut k: i64 = n
            .try_into()
            .map_err(|_| syntax(at, "exponent out of range"))?;
        if neg {
            k = -k;
        }
        self.advance()?;
        base.pow(k)
            .map_err(|_| SymError::ZeroDenominator { offset: at })
    }

    fn atom(&mut self) -> Result<RatFn, SymError> {
        match self.tok.clone() {
            Tok::Int(n) => {
                self.advance()?;
                Ok(RatFn::constant(n))
            }
            Tok::Var(v) => {
                self.advance()?;
                Ok(RatFn::monomial(&Monomial::var(&v)))
            }
            Tok::LParen => {
                self.advance()?;
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Tok::End => Err(syntax(self.tok_pos, "unexpected end of input")),
            _ => Err(syntax(self.tok_pos, "expected integer, variable or '('")),
        }
    }
}

/// Parses a rational expression into canonical form.
pub fn parse_ratfn(text: &str) -> Result<RatFn, SymError> {
    let mut p = Parser::new(text)?;
    let value = p.rational()?;
    if p.tok != Tok::End {
        return Err(syntax(p.tok_pos, "unexpected trailing input"));
    }
    Ok(value)
}
