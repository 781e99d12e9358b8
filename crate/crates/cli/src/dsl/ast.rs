use std::fmt;

use contraction_core::GaussRational;

/// 1-based line and column (in characters) of a token.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Symbol {
    P,
    T,
    L,
    I,
}

impl Symbol {
    pub fn from_name(name: &str) -> Option<Symbol> {
        Some(match name {
            "p" => Symbol::P,
            "t" => Symbol::T,
            "l" => Symbol::L,
            "i" => Symbol::I,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Symbol::P => "p",
            Symbol::T => "t",
            Symbol::L => "l",
            Symbol::I => "i",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
        }
    }

    fn text(self) -> &'static str {
        match self {
            BinOp::Add => " + ",
            BinOp::Sub => " - ",
            BinOp::Mul => "*",
            BinOp::Div => "/",
        }
    }
}

#[derive(Clone, Debug)]
pub enum ExprKind {
    /// A natural-number literal.
    Num(GaussRational),
    Sym(Symbol),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

/// An expression node with the position of its first token. Equality
/// ignores positions, so a pretty-printed and re-parsed tree compares equal
/// to the original.
#[derive(Clone, Debug)]
pub struct Expr {
    pub kind: ExprKind,
    pub pos: Pos,
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        match (&self.kind, &other.kind) {
            (ExprKind::Num(a), ExprKind::Num(b)) => a == b,
            (ExprKind::Sym(a), ExprKind::Sym(b)) => a == b,
            (ExprKind::Neg(a), ExprKind::Neg(b)) => a == b,
            (ExprKind::Bin(o1, a1, b1), ExprKind::Bin(o2, a2, b2)) => o1 == o2 && a1 == a2 && b1 == b2,
            (ExprKind::Pow(a, m), ExprKind::Pow(b, n)) => m == n && a == b,
            _ => false,
        }
    }
}

impl Eq for Expr {}

impl Expr {
    fn precedence(&self) -> u8 {
        match &self.kind {
            ExprKind::Bin(op, ..) => op.precedence(),
            ExprKind::Neg(_) => 3,
            ExprKind::Pow(..) => 4,
            ExprKind::Num(_) | ExprKind::Sym(_) => 5,
        }
    }

    /// Whether `p` occurs anywhere in the expression.
    pub fn mentions(&self, sym: Symbol) -> bool {
        match &self.kind {
            ExprKind::Num(_) => false,
            ExprKind::Sym(s) => *s == sym,
            ExprKind::Neg(e) | ExprKind::Pow(e, _) => e.mentions(sym),
            ExprKind::Bin(_, a, b) => a.mentions(sym) || b.mentions(sym),
        }
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, e: &Expr, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

/// Canonical text with the fewest parentheses that preserve the tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ExprKind::Num(n) => write!(f, "{n}"),
            ExprKind::Sym(s) => f.write_str(s.name()),
            ExprKind::Neg(e) => {
                f.write_str("-")?;
                write_operand(f, e, e.precedence() < 4)
            }
            ExprKind::Bin(op, a, b) => {
                let prec = op.precedence();
                write_operand(f, a, a.precedence() < prec)?;
                f.write_str(op.text())?;
                write_operand(f, b, b.precedence() <= prec)
            }
            ExprKind::Pow(base, exp) => {
                write_operand(f, base, base.precedence() < 5)?;
                write!(f, "^{exp}")
            }
        }
    }
}
