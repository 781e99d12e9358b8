//! Evaluation of DSL expressions, either symbolically as a polynomial in `p`
//! or at a fixed index.

use contraction_core::{GaussRational, Scalar};
use num_traits::{One, Zero};

use super::ast::{BinOp, Expr, ExprKind, Pos, Symbol};
use super::Diagnostic;

/// Values bound to the free symbols other than `p`.
#[derive(Clone, Debug, Default)]
pub struct Env {
    pub l: Option<GaussRational>,
}

impl Env {
    fn symbol(&self, sym: Symbol, pos: Pos) -> Result<Scalar, Diagnostic> {
        Ok(match sym {
            Symbol::T => Scalar::t(),
            Symbol::I => Scalar::constant(GaussRational::i()),
            Symbol::L => Scalar::constant(self.l.clone().ok_or_else(|| {
                Diagnostic::semantic(pos, "symbol `l` is used but the header has no `l=` value")
            })?),
            Symbol::P => unreachable!("p is handled by the caller"),
        })
    }
}

/// Why an expression is not a polynomial in `p`.
#[derive(Debug)]
pub enum PolyFailure {
    /// Division by an expression that depends on `p`, at this position.
    DividesByP(Pos),
    Error(Diagnostic),
}

impl From<Diagnostic> for PolyFailure {
    fn from(d: Diagnostic) -> Self {
        PolyFailure::Error(d)
    }
}

type Poly = Vec<Scalar>;

fn trim(mut v: Poly) -> Poly {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

fn add(a: &Poly, b: &Poly) -> Poly {
    let n = a.len().max(b.len());
    let zero = Scalar::zero();
    trim((0..n)
        .map(|j| a.get(j).unwrap_or(&zero) + b.get(j).unwrap_or(&zero))
        .collect())
}

fn scale(a: &Poly, c: &Scalar) -> Poly {
    trim(a.iter().map(|x| x * c).collect())
}

fn mul(a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Scalar::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    trim(out)
}

/// The expression as coefficients of `1, p, p², …` (lowest first).
pub fn as_polynomial(expr: &Expr, env: &Env) -> Result<Vec<Scalar>, PolyFailure> {
    Ok(match &expr.kind {
        ExprKind::Num(n) => trim(vec![Scalar::constant(n.clone())]),
        ExprKind::Sym(Symbol::P) => vec![Scalar::zero(), Scalar::one()],
        ExprKind::Sym(s) => trim(vec![env.symbol(*s, expr.pos)?]),
        ExprKind::Neg(e) => scale(&as_polynomial(e, env)?, &Scalar::from_int(-1)),
        ExprKind::Pow(e, n) => {
            let base = as_polynomial(e, env)?;
            (0..*n).fold(vec![Scalar::one()], |acc, _| mul(&acc, &base))
        }
        ExprKind::Bin(op, a, b) => {
            if *op == BinOp::Div && b.mentions(Symbol::P) {
                return Err(PolyFailure::DividesByP(b.pos));
            }
            let x = as_polynomial(a, env)?;
            let y = as_polynomial(b, env)?;
            match op {
                BinOp::Add => add(&x, &y),
                BinOp::Sub => add(&x, &scale(&y, &Scalar::from_int(-1))),
                BinOp::Mul => mul(&x, &y),
                BinOp::Div => {
                    let d = y.first().cloned().unwrap_or_default();
                    let inv = d
                        .inv()
                        .ok_or_else(|| Diagnostic::semantic(b.pos, format!("division by `{b}`, which is zero")))?;
                    scale(&x, &inv)
                }
            }
        }
    })
}

/// The expression at index `p`; a divisor vanishing there is an error.
pub fn at_index(expr: &Expr, env: &Env, p: i64) -> Result<Scalar, Diagnostic> {
    Ok(match &expr.kind {
        ExprKind::Num(n) => Scalar::constant(n.clone()),
        ExprKind::Sym(Symbol::P) => Scalar::from_int(p),
        ExprKind::Sym(s) => env.symbol(*s, expr.pos)?,
        ExprKind::Neg(e) => -&at_index(e, env, p)?,
        ExprKind::Pow(e, n) => at_index(e, env, p)?.pow(*n),
        ExprKind::Bin(op, a, b) => {
            let x = at_index(a, env, p)?;
            let y = at_index(b, env, p)?;
            match op {
                BinOp::Add => &x + &y,
                BinOp::Sub => &x - &y,
                BinOp::Mul => &x * &y,
                BinOp::Div => x.checked_div(&y).ok_or_else(|| {
                    Diagnostic::semantic(b.pos, format!("divisor `{b}` vanishes at p={p}"))
                })?,
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::super::parser::parse_expr;
    use super::*;

    #[test]
    fn polynomial_form() {
        let env = Env {
            l: Some(GaussRational::from_int(3)),
        };
        let e = parse_expr("(1/2 - p)*t - l/2").unwrap();
        let c = as_polynomial(&e, &env).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c[1], -&Scalar::t());
        assert_eq!(at_index(&e, &env, 4).unwrap(), c[0].clone() + &c[1] * &Scalar::from_int(4));
        assert!(matches!(
            as_polynomial(&parse_expr("1/p").unwrap(), &env),
            Err(PolyFailure::DividesByP(_))
        ));
        assert!(at_index(&parse_expr("1/(p - 2)").unwrap(), &env, 2).is_err());
        assert!(as_polynomial(&parse_expr("l").unwrap(), &Env::default()).is_err());
    }
}
