//! Recursive descent over the tokens of one line.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('-' | '+') unary | power
//! power  := atom ('^' NUMBER)?
//! atom   := NUMBER | 'p' | 't' | 'l' | 'i' | '(' expr ')'
//! ```

use contraction_core::GaussRational;

use super::ast::{BinOp, Expr, ExprKind, Pos, Symbol};
use super::lexer::Tok;
use super::Diagnostic;

pub struct Parser<'a> {
    toks: &'a [(Tok, Pos)],
    at: usize,
    /// Position just past the last token, for "unexpected end" errors.
    end: Pos,
}

impl<'a> Parser<'a> {
    pub fn new(toks: &'a [(Tok, Pos)], end: Pos) -> Self {
        Parser { toks, at: 0, end }
    }

    fn peek(&self) -> Option<&'a Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> Pos {
        self.toks.get(self.at).map_or(self.end, |(_, p)| *p)
    }

    fn bump(&mut self) -> Option<(&'a Tok, Pos)> {
        let out = self.toks.get(self.at).map(|(t, p)| (t, *p));
        self.at += 1;
        out
    }

    fn unexpected(&self, wanted: &str) -> Diagnostic {
        let found = self.peek().map_or("end of line".to_string(), Tok::describe);
        Diagnostic::syntax(self.pos(), format!("expected {wanted}, found {found}"))
    }

    pub fn expect(&mut self, tok: &Tok, wanted: &str) -> Result<Pos, Diagnostic> {
        if self.peek() == Some(tok) {
            Ok(self.bump().unwrap().1)
        } else {
            Err(self.unexpected(wanted))
        }
    }

    pub fn expect_ident(&mut self, wanted: &str) -> Result<(&'a str, Pos), Diagnostic> {
        match self.peek() {
            Some(Tok::Ident(name)) => {
                let pos = self.bump().unwrap().1;
                Ok((name, pos))
            }
            _ => Err(self.unexpected(wanted)),
        }
    }

    pub fn expect_end(&self) -> Result<(), Diagnostic> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.unexpected("an operator or end of line")),
        }
    }

    pub fn expr(&mut self) -> Result<Expr, Diagnostic> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Plus) => BinOp::Add,
                Some(Tok::Minus) => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expr, Diagnostic> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Star) => BinOp::Mul,
                Some(Tok::Slash) => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = binary(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<Expr, Diagnostic> {
        match self.peek() {
            Some(Tok::Minus) => {
                let pos = self.bump().unwrap().1;
                let inner = self.unary()?;
                Ok(Expr {
                    kind: ExprKind::Neg(Box::new(inner)),
                    pos,
                })
            }
            Some(Tok::Plus) => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr, Diagnostic> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.bump();
        match self.bump() {
            Some((Tok::Num(digits), pos)) => {
                let exp: u32 = digits
                    .parse()
                    .ok()
                    .filter(|&e| e <= 64)
                    .ok_or_else(|| Diagnostic::syntax(pos, format!("exponent `{digits}` is larger than 64")))?;
                let pos = base.pos;
                Ok(Expr {
                    kind: ExprKind::Pow(Box::new(base), exp),
                    pos,
                })
            }
            _ => {
                self.at -= 1;
                Err(self.unexpected("a natural-number exponent"))
            }
        }
    }

    fn atom(&mut self) -> Result<Expr, Diagnostic> {
        let pos = self.pos();
        match self.peek() {
            Some(Tok::Num(digits)) => {
                self.bump();
                let value: GaussRational = digits
                    .parse()
                    .map_err(|_| Diagnostic::syntax(pos, format!("bad number `{digits}`")))?;
                Ok(Expr {
                    kind: ExprKind::Num(value),
                    pos,
                })
            }
            Some(Tok::Ident(name)) => {
                let sym = Symbol::from_name(name).ok_or_else(|| {
                    Diagnostic::syntax(pos, format!("unknown symbol `{name}`; expected p, t, l or i"))
                })?;
                self.bump();
                Ok(Expr {
                    kind: ExprKind::Sym(sym),
                    pos,
                })
            }
            Some(Tok::LParen) => {
                self.bump();
                let mut inner = self.expr()?;
                self.expect(&Tok::RParen, "`)`")?;
                inner.pos = pos;
                Ok(inner)
            }
            _ => Err(self.unexpected("a number, a symbol or `(`")),
        }
    }
}

fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
    let pos = lhs.pos;
    Expr {
        kind: ExprKind::Bin(op, Box::new(lhs), Box::new(rhs)),
        pos,
    }
}

/// Parses a whole line as one expression.
pub fn parse_expr(text: &str) -> Result<Expr, Diagnostic> {
    let toks = super::lexer::lex_line(text, 1, 1)?;
    let end = Pos {
        line: 1,
        column: text.chars().count() + 1,
    };
    let mut parser = Parser::new(&toks, end);
    let expr = parser.expr()?;
    parser.expect_end()?;
    Ok(expr)
}
