//! Module-definition documents.
//!
//! A document is a header line followed, for custom families only, by one
//! coefficient line per generator:
//!
//! ```text
//! # comments run to the end of the line
//! family custom range=-10..10 k=0 l=2*i
//! E(p) = (1/2 - p)*t - l/2
//! F(p) = (p + 1/2)*t - l/2
//! H(p) = -2*p
//! ```
//!
//! Built-in headers name a family and its parameters, e.g.
//! `family principal l=3 k=0` or `family discrete n=2 sign=-`.
//!
//! In a custom document the `H` line fixes the orientation: if the weight
//! drops by 2 from `p` to `p+1` then `F` raises the index, if it grows by 2
//! then `E` does.

mod ast;
mod eval;
mod lexer;
mod parser;

use std::collections::BTreeMap;
use std::fmt;

use contraction_core::ladder::{CoeffRule, Orientation, PPoly};
use contraction_core::{FamilySpec, GaussRational, Generator, IndexSet, LadderFamily, Sign};
use num_traits::Zero;

pub use ast::{BinOp, Expr, ExprKind, Pos, Symbol};
pub use eval::{at_index, Env};
pub use parser::parse_expr;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiagnosticKind {
    Syntax,
    Semantic,
}

impl fmt::Display for DiagnosticKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DiagnosticKind::Syntax => "syntax",
            DiagnosticKind::Semantic => "semantic",
        })
    }
}

/// A parse or load error with its source position.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {kind} error: {message}")]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl Diagnostic {
    pub fn syntax(pos: Pos, message: impl Into<String>) -> Self {
        Diagnostic {
            kind: DiagnosticKind::Syntax,
            line: pos.line,
            column: pos.column,
            message: message.into(),
        }
    }

    pub fn semantic(pos: Pos, message: impl Into<String>) -> Self {
        Diagnostic {
            kind: DiagnosticKind::Semantic,
            line: pos.line,
            column: pos.column,
            message: message.into(),
        }
    }
}

/// Header of a custom document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CustomHeader {
    pub range: IndexSet,
    pub k: u8,
    pub l: Option<GaussRational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Header {
    Builtin(FamilySpec),
    Custom(CustomHeader),
}

/// One `X(p) = expr` line. Equality ignores the position.
#[derive(Clone, Debug)]
pub struct CoeffLine {
    pub generator: Generator,
    pub expr: Expr,
    pub pos: Pos,
}

impl PartialEq for CoeffLine {
    fn eq(&self, other: &Self) -> bool {
        self.generator == other.generator && self.expr == other.expr
    }
}

impl Eq for CoeffLine {}

/// A parsed and checked document together with the family it defines.
#[derive(Clone, Debug)]
pub struct ModuleDoc {
    pub header: Header,
    /// Coefficient lines in `E`, `F`, `H` order; empty for built-ins.
    pub lines: Vec<CoeffLine>,
    family: LadderFamily,
}

impl PartialEq for ModuleDoc {
    fn eq(&self, other: &Self) -> bool {
        self.header == other.header && self.lines == other.lines
    }
}

impl ModuleDoc {
    pub fn family(&self) -> &LadderFamily {
        &self.family
    }

    pub fn spec(&self) -> Option<&FamilySpec> {
        match &self.header {
            Header::Builtin(spec) => Some(spec),
            Header::Custom(_) => None,
        }
    }
}

/// Canonical text: no comments, one space around `=`, lines in `E`, `F`, `H`
/// order. Parsing this text gives back an equal document.
impl fmt::Display for ModuleDoc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.header {
            Header::Builtin(spec) => writeln!(f, "family {spec}")?,
            Header::Custom(h) => {
                write!(f, "family custom range={} k={}", h.range, h.k)?;
                if let Some(l) = &h.l {
                    write!(f, " l={l}")?;
                }
                writeln!(f)?;
            }
        }
        for line in &self.lines {
            writeln!(f, "{}(p) = {}", line.generator, line.expr)?;
        }
        Ok(())
    }
}

/// Parses and checks a document.
pub fn parse_module_doc(text: &str) -> Result<ModuleDoc, Diagnostic> {
    let mut header: Option<(Header, Pos)> = None;
    let mut lines: Vec<CoeffLine> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        match &header {
            None => header = Some(parse_header(content, line_no)?),
            Some(_) => lines.push(parse_coeff_line(content, line_no)?),
        }
    }
    let Some((header, header_pos)) = header else {
        return Err(Diagnostic::syntax(Pos { line: 1, column: 1 }, "empty document: expected a `family` header"));
    };
    match header {
        Header::Builtin(spec) => {
            if let Some(line) = lines.first() {
                return Err(Diagnostic::semantic(
                    line.pos,
                    format!("coefficient lines are only allowed in custom documents, not for `{}`", spec.kind()),
                ));
            }
            let family = spec
                .build()
                .map_err(|e| Diagnostic::semantic(header_pos, e.to_string()))?;
            Ok(ModuleDoc {
                header: Header::Builtin(spec),
                lines,
                family,
            })
        }
        Header::Custom(custom) => {
            let end = Pos {
                line: text.lines().count().max(1),
                column: 1,
            };
            let lines = order_lines(lines, end)?;
            let family = build_custom(&custom, &lines, header_pos)?;
            Ok(ModuleDoc {
                header: Header::Custom(custom),
                lines,
                family,
            })
        }
    }
}

/// Parses a header without the `family` keyword, e.g. `principal l=3 k=0`.
pub fn parse_spec(text: &str) -> Result<FamilySpec, Diagnostic> {
    match parse_header(&format!("family {text}"), 1) {
        Ok((Header::Builtin(spec), _)) => Ok(spec),
        Ok((Header::Custom(_), pos)) => Err(Diagnostic::semantic(pos, "a custom family needs a full document")),
        Err(mut d) => {
            d.column = d.column.saturating_sub("family ".len()).max(1);
            Err(d)
        }
    }
}

/// Whitespace-separated words with their 1-based columns.
fn words(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (col, (byte, ch)) in text.char_indices().enumerate() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some((col, byte)),
            (true, Some((c, b))) => {
                out.push((c + 1, &text[b..byte]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some((c, b)) = start {
        out.push((c + 1, &text[b..]));
    }
    out
}

struct Params<'a> {
    line: usize,
    values: BTreeMap<&'a str, (usize, &'a str)>,
    end: usize,
}

impl<'a> Params<'a> {
    fn pos(&self, column: usize) -> Pos {
        Pos {
            line: self.line,
            column,
        }
    }

    fn take<T>(&mut self, key: &str, parse: impl Fn(&str) -> Option<T>, what: &str) -> Result<T, Diagnostic> {
        let (col, raw) = self
            .values
            .remove(key)
            .ok_or_else(|| Diagnostic::syntax(self.pos(self.end), format!("missing `{key}=` ({what})")))?;
        parse(raw).ok_or_else(|| {
            Diagnostic::syntax(self.pos(col + key.len() + 1), format!("invalid value `{raw}` for `{key}`: expected {what}"))
        })
    }

    fn take_opt<T>(&mut self, key: &str, parse: impl Fn(&str) -> Option<T>, what: &str) -> Result<Option<T>, Diagnostic> {
        if self.values.contains_key(key) {
            self.take(key, parse, what).map(Some)
        } else {
            Ok(None)
        }
    }

    fn finish(self, kind: &str) -> Result<(), Diagnostic> {
        match self.values.iter().min_by_key(|(_, (col, _))| *col) {
            Some((key, (col, _))) => Err(Diagnostic::syntax(
                self.pos(*col),
                format!("unknown key `{key}` for family `{kind}`"),
            )),
            None => Ok(()),
        }
    }
}

fn parse_gauss(s: &str) -> Option<GaussRational> {
    s.parse().ok()
}

fn parse_k(s: &str) -> Option<u8> {
    match s {
        "0" => Some(0),
        "1" => Some(1),
        _ => None,
    }
}

fn parse_range(s: &str) -> Option<IndexSet> {
    if s == "all" {
        return Some(IndexSet::All);
    }
    let (lo, hi) = s.split_once("..")?;
    let bound = |b: &str| -> Option<Option<i64>> {
        if b.is_empty() {
            Some(None)
        } else {
            b.parse().ok().map(Some)
        }
    };
    Some(match (bound(lo)?, bound(hi)?) {
        (None, None) => IndexSet::All,
        (Some(lo), None) => IndexSet::AtLeast(lo),
        (None, Some(hi)) => IndexSet::AtMost(hi),
        (Some(lo), Some(hi)) => IndexSet::interval(lo, hi).ok()?,
    })
}

fn parse_header(text: &str, line: usize) -> Result<(Header, Pos), Diagnostic> {
    let ws = words(text);
    let pos = |column| Pos { line, column };
    let (kw_col, kw) = ws[0];
    if kw != "family" {
        return Err(Diagnostic::syntax(pos(kw_col), format!("expected `family`, found `{kw}`")));
    }
    let end = text.chars().count() + 1;
    let Some(&(kind_col, kind)) = ws.get(1) else {
        return Err(Diagnostic::syntax(pos(end), "expected a family kind after `family`"));
    };
    let mut values = BTreeMap::new();
    for &(col, word) in &ws[2..] {
        let Some((key, value)) = word.split_once('=') else {
            return Err(Diagnostic::syntax(pos(col), format!("expected `key=value`, found `{word}`")));
        };
        if key.is_empty() || value.is_empty() {
            return Err(Diagnostic::syntax(pos(col), format!("expected `key=value`, found `{word}`")));
        }
        if values.insert(key, (col, value)).is_some() {
            return Err(Diagnostic::syntax(pos(col), format!("duplicate key `{key}`")));
        }
    }
    let mut params = Params { line, values, end };
    const L: &str = "a Gaussian rational such as 3, -5/2 or 1+2*i";
    const K: &str = "0 or 1";
    const NAT: &str = "a natural number";
    let header = match kind {
        "principal" => Header::Builtin(FamilySpec::Principal {
            l: params.take("l", parse_gauss, L)?,
            k: params.take("k", parse_k, K)?,
        }),
        "minimal_ktype" => Header::Builtin(FamilySpec::MinimalKtype {
            l: params.take("l", parse_gauss, L)?,
            k: params.take("k", parse_k, K)?,
        }),
        "discrete" => Header::Builtin(FamilySpec::Discrete {
            n: params.take("n", |s| s.parse().ok(), NAT)?,
            sign: params.take("sign", |s| Sign::parse(s).ok(), "+ or -")?,
        }),
        "rees_lambda0" => Header::Builtin(FamilySpec::ReesLambda0 {
            k: params.take("k", parse_k, K)?,
        }),
        "finite_dim" => Header::Builtin(FamilySpec::FiniteDim {
            dim: params.take("dim", |s| s.parse().ok(), NAT)?,
            k: params.take("k", parse_k, K)?,
        }),
        "custom" => Header::Custom(CustomHeader {
            range: params.take("range", parse_range, "all, lo.., ..hi or lo..hi with lo <= hi")?,
            k: params.take("k", parse_k, K)?,
            l: params.take_opt("l", parse_gauss, L)?,
        }),
        other => {
            return Err(Diagnostic::syntax(
                pos(kind_col),
                format!(
                    "unknown family kind `{other}`; expected principal, discrete, rees_lambda0, minimal_ktype, finite_dim or custom"
                ),
            ))
        }
    };
    params.finish(kind)?;
    Ok((header, pos(kw_col)))
}

fn parse_coeff_line(text: &str, line: usize) -> Result<CoeffLine, Diagnostic> {
    let toks = lexer::lex_line(text, line, 1)?;
    let end = Pos {
        line,
        column: text.chars().count() + 1,
    };
    let mut p = parser::Parser::new(&toks, end);
    let (name, pos) = p.expect_ident("`E`, `F` or `H`")?;
    let generator = match name {
        "E" => Generator::E,
        "F" => Generator::F,
        "H" => Generator::H,
        other => {
            return Err(Diagnostic::syntax(pos, format!("expected `E`, `F` or `H`, found `{other}`")));
        }
    };
    p.expect(&lexer::Tok::LParen, "`(`")?;
    let (var, var_pos) = p.expect_ident("`p`")?;
    if var != "p" {
        return Err(Diagnostic::syntax(var_pos, format!("the index variable must be `p`, found `{var}`")));
    }
    p.expect(&lexer::Tok::RParen, "`)`")?;
    p.expect(&lexer::Tok::Eq, "`=`")?;
    let expr = p.expr()?;
    p.expect_end()?;
    Ok(CoeffLine { generator, expr, pos })
}

/// Exactly one line per generator, returned in `E`, `F`, `H` order.
fn order_lines(lines: Vec<CoeffLine>, end: Pos) -> Result<Vec<CoeffLine>, Diagnostic> {
    let mut slots: [Option<CoeffLine>; 3] = [None, None, None];
    for line in lines {
        let slot = &mut slots[generator_slot(line.generator)];
        if let Some(first) = slot {
            return Err(Diagnostic::semantic(
                line.pos,
                format!("duplicate {}(p) line; first defined at {}", line.generator, first.pos),
            ));
        }
        *slot = Some(line);
    }
    let mut out = Vec::new();
    for (slot, name) in slots.into_iter().zip(["E", "F", "H"]) {
        out.push(slot.ok_or_else(|| Diagnostic::semantic(end, format!("missing {name}(p) line")))?);
    }
    Ok(out)
}

fn generator_slot(g: Generator) -> usize {
    match g {
        Generator::E => 0,
        Generator::F => 1,
        Generator::H => 2,
    }
}

/// The coefficient rule of one line: a polynomial in `p` when possible,
/// otherwise a table over a bounded range.
fn coefficient_rule(line: &CoeffLine, range: IndexSet, env: &Env) -> Result<CoeffRule, Diagnostic> {
    match eval::as_polynomial(&line.expr, env) {
        Ok(coeffs) => Ok(CoeffRule::Poly(PPoly::new(coeffs))),
        Err(eval::PolyFailure::Error(d)) => Err(d),
        Err(eval::PolyFailure::DividesByP(pos)) => {
            let IndexSet::Interval(lo, hi) = range else {
                return Err(Diagnostic::semantic(
                    pos,
                    format!("division by an expression in p needs a bounded range, not `{range}`"),
                ));
            };
            let mut table = BTreeMap::new();
            for p in lo..=hi {
                let v = eval::at_index(&line.expr, env, p)?;
                if !v.is_zero() {
                    table.insert(p, v);
                }
            }
            Ok(CoeffRule::Table(table))
        }
    }
}

fn build_custom(h: &CustomHeader, lines: &[CoeffLine], header_pos: Pos) -> Result<LadderFamily, Diagnostic> {
    let env = Env { l: h.l.clone() };
    let [e_line, f_line, h_line] = lines else {
        unreachable!("order_lines returns three lines")
    };
    let weight = match eval::as_polynomial(&h_line.expr, &env) {
        Ok(c) => c,
        Err(eval::PolyFailure::Error(d)) => return Err(d),
        Err(eval::PolyFailure::DividesByP(pos)) => {
            return Err(Diagnostic::semantic(pos, "H(p) must be a polynomial in p"));
        }
    };
    if !weight.iter().all(|c| c.is_constant()) {
        return Err(Diagnostic::semantic(h_line.expr.pos, "H(p) must not depend on t"));
    }
    let slope = match weight.as_slice() {
        [_, slope] => slope.as_constant(),
        _ => None,
    };
    let orientation = slope.as_ref().and_then(Orientation::from_weight_step).ok_or_else(|| {
        Diagnostic::semantic(
            h_line.expr.pos,
            format!("H(p) = {} must change by +2 or -2 per step in p", h_line.expr),
        )
    })?;
    let e = coefficient_rule(e_line, h.range, &env)?;
    let f = coefficient_rule(f_line, h.range, &env)?;
    let ((raise, raise_line), (lower, lower_line)) = match orientation {
        Orientation::FRaises => ((f, f_line), (e, e_line)),
        Orientation::ERaises => ((e, e_line), (f, f_line)),
    };
    if let Some(hi) = h.range.upper_bound() {
        if !raise.eval(hi).is_zero() {
            return Err(Diagnostic::semantic(
                raise_line.expr.pos,
                format!("{}(p) must vanish at the top of the range p={hi}", raise_line.generator),
            ));
        }
    }
    if let Some(lo) = h.range.lower_bound() {
        if !lower.eval(lo).is_zero() {
            return Err(Diagnostic::semantic(
                lower_line.expr.pos,
                format!("{}(p) must vanish at the bottom of the range p={lo}", lower_line.generator),
            ));
        }
    }
    LadderFamily::new(
        "custom",
        h.range,
        h.k,
        orientation,
        raise,
        lower,
        CoeffRule::Poly(PPoly::new(weight)),
    )
    .map_err(|err| Diagnostic::semantic(header_pos, err.to_string()))
}
