//! Recursive-descent parser for the expression grammar:
//!
//! ```text
//! expr   := ['-'] term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := NUMBER | 't' | '(' expr ')' | factor '^' NUMBER | FUNC '(' expr ')'
//! FUNC   := exp | ln | sin | cos | tanh | llog | sigm
//! ```
//!
//! `ln` and `^` demand a positivity-certified argument, checked syntactically
//! at parse time.

use super::{Expr, Func, SoExpression};
use crate::error::{Error, Result};

pub fn parse_expr(text: &str) -> Result<SoExpression> {
    let mut p = Parser {
        bytes: text.as_bytes(),
        pos: 0,
    };
    p.skip_ws();
    let root = p.expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(SoExpression::new(root, text.to_string()))
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Syntax {
            offset: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Expr> {
        self.skip_ws();
        let mut node = if self.peek() == Some(b'-') {
            self.pos += 1;
            Expr::Neg(Box::new(self.term()?))
        } else {
            self.term()?
        };
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    node = Expr::Add(Box::new(node), Box::new(self.term()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    node = Expr::Sub(Box::new(node), Box::new(self.term()?));
                }
                _ => return Ok(node),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut node = self.factor()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    node = Expr::Mul(Box::new(node), Box::new(self.factor()?));
                }
                Some(b'/') => {
                    self.pos += 1;
                    node = Expr::Div(Box::new(node), Box::new(self.factor()?));
                }
                _ => return Ok(node),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        self.skip_ws();
        let mut node = match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(b')')?;
                inner
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number_node()?,
            Some(c) if c.is_ascii_alphabetic() => self.ident_node()?,
            _ => return Err(self.err("expected number, 't', '(' or function")),
        };
        loop {
            self.skip_ws();
            if self.peek() == Some(b'^') {
                self.pos += 1;
                self.skip_ws();
                let q = self.number_literal()?;
                if !is_positive(&node) {
                    return Err(Error::Domain(
                        "power base is not a positivity-certified subexpression".into(),
                    ));
                }
                node = Expr::Pow(Box::new(node), q);
            } else {
                return Ok(node);
            }
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn number_literal(&mut self) -> Result<f64> {
        self.skip_ws();
        let neg = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() || c == b'.' || c == b'e' || c == b'E' {
                self.pos += 1;
            } else if (c == b'+' || c == b'-')
                && self.pos > start
                && matches!(self.bytes[self.pos - 1], b'e' | b'E')
            {
                self.pos += 1;
            } else {
                break;
            }
        }
        if self.pos == start {
            return Err(self.err("expected number"));
        }
        let s = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        let v: f64 = s
            .parse()
            .map_err(|_| Error::Syntax {
                offset: start,
                msg: format!("invalid number literal '{s}'"),
            })?;
        Ok(if neg { -v } else { v })
    }

    fn number_node(&mut self) -> Result<Expr> {
        Ok(Expr::Num(self.number_literal()?))
    }

    fn ident_node(&mut self) -> Result<Expr> {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == b'_' {
                self.pos += 1;
            } else {
                break;
            }
        }
        let name = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        if name == "t" {
            return Ok(Expr::Var);
        }
        let f = match name {
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tanh" => Func::Tanh,
            "llog" => Func::Llog,
            "sigm" => Func::Sigm,
            _ => {
                return Err(Error::Syntax {
                    offset: start,
                    msg: format!("unknown identifier '{name}'"),
                })
            }
        };
        self.expect(b'(')?;
        let arg = self.expr()?;
        self.expect(b')')?;
        if matches!(f, Func::Ln | Func::Llog) && !is_positive(&arg) {
            return Err(Error::Domain(format!(
                "argument of {name} is not a positivity-certified subexpression"
            )));
        }
        Ok(Expr::Call(f, Box::new(arg)))
    }
}

/// Syntactic positivity certificate. Conservative: only shapes that are
/// positive for every t > 0 are accepted.
fn is_positive(e: &Expr) -> bool {
    match e {
        Expr::Num(v) => *v > 0.0,
        Expr::Var => true,
        Expr::Neg(_) => false,
        Expr::Add(u, v) => is_positive(u) && is_positive(v),
        Expr::Sub(_, _) => false,
        Expr::Mul(u, v) | Expr::Div(u, v) => is_positive(u) && is_positive(v),
        Expr::Pow(u, _) => is_positive(u),
        Expr::Call(Func::Exp, _) | Expr::Call(Func::Sigm, _) => true,
        Expr::Call(_, _) => false,
    }
}
