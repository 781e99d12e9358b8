//! Weight-ladder module families.
//!
//! A [`LadderFamily`] has one basis vector `e_p` per index `p` of an
//! [`IndexSet`]. `H` acts diagonally by `weight(p)`. One of `E`, `F` steps the
//! index up with coefficient `raise(p)` and the other steps it down with
//! coefficient `lower(p)`; which one is which is the family's
//! [`Orientation`], fixed by the sign of the weight step. Coefficients are
//! [`Scalar`]s, i.e. rational functions of the contraction parameter `t`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{GaussRational, Scalar};

/// Inclusive range of indices used to enumerate checks. `lo > hi` is empty.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Window {
    #[serde(serialize_with = "crate::text::display")]
    pub lo: i64,
    #[serde(serialize_with = "crate::text::display")]
    pub hi: i64,
}

impl Window {
    pub fn new(lo: i64, hi: i64) -> Self {
        Window { lo, hi }
    }

    /// `[-radius, radius]`.
    pub fn radius(radius: i64) -> Self {
        Window::new(-radius, radius)
    }

    pub fn empty() -> Self {
        Window::new(0, -1)
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn contains(&self, p: i64) -> bool {
        self.lo <= p && p <= self.hi
    }

    pub fn len(&self) -> usize {
        if self.is_empty() {
            0
        } else {
            (self.hi - self.lo + 1) as usize
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }

    /// Grows the window by `margin` on both sides.
    pub fn widen(&self, margin: i64) -> Self {
        Window::new(self.lo - margin, self.hi + margin)
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IndexKind {
    AllIntegers,
    HalfLineUp,
    HalfLineDown,
    FiniteInterval,
}

impl IndexKind {
    pub fn is_bounded(self) -> bool {
        self != IndexKind::AllIntegers
    }
}

/// The set of indices carrying a basis vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IndexSet {
    All,
    /// `p >= bound`
    AtLeast(i64),
    /// `p <= bound`
    AtMost(i64),
    /// `lo <= p <= hi`
    Interval(i64, i64),
}

impl IndexSet {
    pub fn interval(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::domain(format!("empty interval [{lo}, {hi}]")));
        }
        Ok(IndexSet::Interval(lo, hi))
    }

    pub fn kind(&self) -> IndexKind {
        match self {
            IndexSet::All => IndexKind::AllIntegers,
            IndexSet::AtLeast(_) => IndexKind::HalfLineUp,
            IndexSet::AtMost(_) => IndexKind::HalfLineDown,
            IndexSet::Interval(..) => IndexKind::FiniteInterval,
        }
    }

    pub fn contains(&self, p: i64) -> bool {
        match *self {
            IndexSet::All => true,
            IndexSet::AtLeast(b) => p >= b,
            IndexSet::AtMost(b) => p <= b,
            IndexSet::Interval(lo, hi) => lo <= p && p <= hi,
        }
    }

    pub fn lower_bound(&self) -> Option<i64> {
        match *self {
            IndexSet::AtLeast(b) | IndexSet::Interval(b, _) => Some(b),
            _ => None,
        }
    }

    pub fn upper_bound(&self) -> Option<i64> {
        match *self {
            IndexSet::AtMost(b) | IndexSet::Interval(_, b) => Some(b),
            _ => None,
        }
    }

    pub fn contains_window(&self, w: &Window) -> bool {
        w.is_empty() || (self.contains(w.lo) && self.contains(w.hi))
    }

    pub fn is_subset_of(&self, other: &IndexSet) -> bool {
        let lo_ok = match (self.lower_bound(), other.lower_bound()) {
            (_, None) => true,
            (Some(a), Some(b)) => a >= b,
            (None, Some(_)) => false,
        };
        let hi_ok = match (self.upper_bound(), other.upper_bound()) {
            (_, None) => true,
            (Some(a), Some(b)) => a <= b,
            (None, Some(_)) => false,
        };
        lo_ok && hi_ok
    }

    /// A window of `radius` rungs: `[-r, r]` on the full line, `[b, b + r]` on
    /// an upward half-line, `[b - r, b]` downward, clipped for intervals.
    pub fn window(&self, radius: i64) -> Window {
        match *self {
            IndexSet::All => Window::radius(radius),
            IndexSet::AtLeast(b) => Window::new(b, b + radius),
            IndexSet::AtMost(b) => Window::new(b - radius, b),
            IndexSet::Interval(lo, hi) => Window::new(lo.max(-radius), hi.min(radius)),
        }
    }

    /// Intersection with a window.
    pub fn clip(&self, w: &Window) -> Window {
        let lo = self.lower_bound().map_or(w.lo, |b| b.max(w.lo));
        let hi = self.upper_bound().map_or(w.hi, |b| b.min(w.hi));
        Window::new(lo, hi)
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexSet::All => f.write_str("all"),
            IndexSet::AtLeast(b) => write!(f, "{b}.."),
            IndexSet::AtMost(b) => write!(f, "..{b}"),
            IndexSet::Interval(lo, hi) => write!(f, "{lo}..{hi}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Generator {
    E,
    F,
    H,
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Which generator steps the index up.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// `F` raises the index; weights step by `-2`.
    FRaises,
    /// `E` raises the index; weights step by `+2`.
    ERaises,
}

impl Orientation {
    pub fn weight_step(self) -> i64 {
        match self {
            Orientation::FRaises => -2,
            Orientation::ERaises => 2,
        }
    }

    pub fn from_weight_step(step: &GaussRational) -> Option<Self> {
        match step.to_i64() {
            Some(-2) => Some(Orientation::FRaises),
            Some(2) => Some(Orientation::ERaises),
            _ => None,
        }
    }

    fn up(self) -> Generator {
        match self {
            Orientation::FRaises => Generator::F,
            Orientation::ERaises => Generator::E,
        }
    }
}

/// `Σ c_j p^j` with [`Scalar`] coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct PPoly(Vec<Scalar>);

impl PPoly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        PPoly(coeffs)
    }

    pub fn constant(c: Scalar) -> Self {
        PPoly::new(vec![c])
    }

    /// `constant + slope·p`.
    pub fn affine(constant: Scalar, slope: Scalar) -> Self {
        PPoly::new(vec![constant, slope])
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.0
    }

    pub fn eval(&self, p: i64) -> Scalar {
        let x = Scalar::from_int(p);
        self.0
            .iter()
            .rev()
            .fold(Scalar::zero(), |acc, c| &(&acc * &x) + c)
    }

    pub fn is_t_free(&self) -> bool {
        self.0.iter().all(Scalar::is_constant)
    }

    fn specialize(&self, at: &GaussRational) -> std::result::Result<PPoly, ()> {
        let coeffs = self
            .0
            .iter()
            .map(|c| c.specialize(at).map_err(|_| ()))
            .collect::<std::result::Result<Vec<_>, ()>>()?;
        Ok(PPoly::new(coeffs))
    }
}

fn needs_parens(s: &str) -> bool {
    s.contains(' ') || s.starts_with('(')
}

impl fmt::Display for PPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| {
                let text = c.to_string();
                let power = match j {
                    0 => return text,
                    1 => "p".to_string(),
                    _ => format!("p^{j}"),
                };
                if c.is_one() {
                    power
                } else if needs_parens(&text) {
                    format!("({text})*{power}")
                } else {
                    format!("{text}*{power}")
                }
            })
            .collect();
        if terms.is_empty() {
            return f.write_str("0");
        }
        for (n, term) in terms.iter().enumerate() {
            if n == 0 {
                f.write_str(term)?;
            } else if let Some(rest) = term.strip_prefix('-') {
                write!(f, " - {rest}")?;
            } else {
                write!(f, " + {term}")?;
            }
        }
        Ok(())
    }
}

/// How a coefficient is computed from the index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoeffRule {
    /// One polynomial in `p` for every index.
    Poly(PPoly),
    /// The first piece whose set contains `p`; zero if none does.
    Piecewise(Vec<(IndexSet, PPoly)>),
    /// Explicit finite table; zero outside it.
    Table(BTreeMap<i64, Scalar>),
}

impl CoeffRule {
    pub fn constant(c: Scalar) -> Self {
        CoeffRule::Poly(PPoly::constant(c))
    }

    pub fn affine(constant: Scalar, slope: Scalar) -> Self {
        CoeffRule::Poly(PPoly::affine(constant, slope))
    }

    pub fn eval(&self, p: i64) -> Scalar {
        match self {
            CoeffRule::Poly(poly) => poly.eval(p),
            CoeffRule::Piecewise(pieces) => pieces
                .iter()
                .find(|(set, _)| set.contains(p))
                .map_or_else(Scalar::zero, |(_, poly)| poly.eval(p)),
            CoeffRule::Table(table) => table.get(&p).cloned().unwrap_or_default(),
        }
    }

    pub fn is_t_free(&self) -> bool {
        match self {
            CoeffRule::Poly(poly) => poly.is_t_free(),
            CoeffRule::Piecewise(pieces) => pieces.iter().all(|(_, poly)| poly.is_t_free()),
            CoeffRule::Table(table) => table.values().all(Scalar::is_constant),
        }
    }

    fn specialize(&self, rule: &str, at: &GaussRational) -> Result<CoeffRule> {
        let pole = |index| Error::SpecializationPole {
            rule: rule.to_string(),
            index,
            at: Box::new(at.clone()),
        };
        Ok(match self {
            CoeffRule::Poly(poly) => CoeffRule::Poly(poly.specialize(at).map_err(|_| pole(None))?),
            CoeffRule::Piecewise(pieces) => CoeffRule::Piecewise(
                pieces
                    .iter()
                    .map(|(set, poly)| {
                        poly.specialize(at)
                            .map(|sp| (*set, sp))
                            .map_err(|_| pole(set.lower_bound().or(set.upper_bound())))
                    })
                    .collect::<Result<_>>()?,
            ),
            CoeffRule::Table(table) => CoeffRule::Table(
                table
                    .iter()
                    .map(|(&p, c)| c.specialize(at).map(|v| (p, v)).map_err(|_| pole(Some(p))))
                    .collect::<Result<_>>()?,
            ),
        })
    }
}

impl fmt::Display for CoeffRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffRule::Poly(poly) => write!(f, "{poly}"),
            CoeffRule::Piecewise(pieces) => {
                let parts: Vec<String> = pieces
                    .iter()
                    .map(|(set, poly)| format!("{poly} on {set}"))
                    .collect();
                f.write_str(&parts.join("; "))
            }
            CoeffRule::Table(table) => {
                let parts: Vec<String> = table.iter().map(|(p, c)| format!("{p}: {c}")).collect();
                write!(f, "{{{}}}", parts.join(", "))
            }
        }
    }
}

/// A finite combination `Σ c_p e_p`; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ModuleElement {
    terms: BTreeMap<i64, Scalar>,
}

impl ModuleElement {
    pub fn zero() -> Self {
        ModuleElement::default()
    }

    pub fn basis(p: i64) -> Self {
        ModuleElement::term(p, Scalar::one())
    }

    pub fn term(p: i64, c: Scalar) -> Self {
        let mut e = ModuleElement::zero();
        e.add_term(p, c);
        e
    }

    pub fn add_term(&mut self, p: i64, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&p) {
            Some(old) => &old + &c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(p, sum);
        }
    }

    pub fn coefficient(&self, p: i64) -> Scalar {
        self.terms.get(&p).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Scalar)> {
        self.terms.iter().map(|(&p, c)| (p, c))
    }

    pub fn indices(&self) -> impl Iterator<Item = i64> + '_ {
        self.terms.keys().copied()
    }

    pub fn scale(&self, c: &Scalar) -> ModuleElement {
        let mut out = ModuleElement::zero();
        for (p, v) in self.terms() {
            out.add_term(p, v * c);
        }
        out
    }

    pub fn add(&self, other: &ModuleElement) -> ModuleElement {
        let mut out = self.clone();
        for (p, v) in other.terms() {
            out.add_term(p, v.clone());
        }
        out
    }

    pub fn sub(&self, other: &ModuleElement) -> ModuleElement {
        let mut out = self.clone();
        for (p, v) in other.terms() {
            out.add_term(p, -v);
        }
        out
    }
}

impl FromIterator<(i64, Scalar)> for ModuleElement {
    fn from_iter<I: IntoIterator<Item = (i64, Scalar)>>(iter: I) -> Self {
        let mut out = ModuleElement::zero();
        for (p, c) in iter {
            out.add_term(p, c);
        }
        out
    }
}

/// A `(g_t, K)`-module family presented as a weight ladder.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LadderFamily {
    label: String,
    indices: IndexSet,
    k: u8,
    orientation: Orientation,
    raise: CoeffRule,
    lower: CoeffRule,
    weight: CoeffRule,
}

impl LadderFamily {
    /// Checks that `weight` does not depend on `t`, that `k` is a parity bit
    /// and that no action leaves a bounded index set.
    ///
    /// The weight step is not enforced here; see [`weight_step_violations`].
    pub fn new(
        label: impl Into<String>,
        indices: IndexSet,
        k: u8,
        orientation: Orientation,
        raise: CoeffRule,
        lower: CoeffRule,
        weight: CoeffRule,
    ) -> Result<Self> {
        if k > 1 {
            return Err(Error::domain(format!("k must be 0 or 1, got {k}")));
        }
        if !weight.is_t_free() {
            return Err(Error::domain("the H weight rule must not depend on t"));
        }
        let fam = LadderFamily {
            label: label.into(),
            indices,
            k,
            orientation,
            raise,
            lower,
            weight,
        };
        if let Some(hi) = indices.upper_bound() {
            if !fam.raise(hi).is_zero() {
                return Err(Error::domain(format!(
                    "raise({hi}) = {} leaves the index set {indices}",
                    fam.raise(hi)
                )));
            }
        }
        if let Some(lo) = indices.lower_bound() {
            if !fam.lower(lo).is_zero() {
                return Err(Error::domain(format!(
                    "lower({lo}) = {} leaves the index set {indices}",
                    fam.lower(lo)
                )));
            }
        }
        Ok(fam)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn indices(&self) -> IndexSet {
        self.indices
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn raise_rule(&self) -> &CoeffRule {
        &self.raise
    }

    pub fn lower_rule(&self) -> &CoeffRule {
        &self.lower
    }

    pub fn weight_rule(&self) -> &CoeffRule {
        &self.weight
    }

    /// Coefficient of `e_{p+1}` in the raising generator applied to `e_p`.
    pub fn raise(&self, p: i64) -> Scalar {
        self.raise.eval(p)
    }

    /// Coefficient of `e_{p-1}` in the lowering generator applied to `e_p`.
    pub fn lower(&self, p: i64) -> Scalar {
        self.lower.eval(p)
    }

    /// Eigenvalue of `H` on `e_p`.
    pub fn weight(&self, p: i64) -> GaussRational {
        self.weight
            .eval(p)
            .as_constant()
            .expect("weight rule is t-free by construction")
    }

    /// Coefficient and target index of `E` or `F` applied to `e_p`.
    pub fn step(&self, gen: Generator, p: i64) -> Option<(i64, Scalar)> {
        match gen {
            Generator::H => None,
            g if g == self.orientation.up() => Some((p + 1, self.raise(p))),
            _ => Some((p - 1, self.lower(p))),
        }
    }

    /// Whether every coefficient rule is constant in `t`.
    pub fn is_t_free(&self) -> bool {
        self.raise.is_t_free() && self.lower.is_t_free()
    }

    /// Substitutes `t = at` in every coefficient.
    pub fn specialize(&self, at: &GaussRational) -> Result<LadderFamily> {
        Ok(LadderFamily {
            label: format!("{} at t={at}", self.label),
            indices: self.indices,
            k: self.k,
            orientation: self.orientation,
            raise: self.raise.specialize("raise", at)?,
            lower: self.lower.specialize("lower", at)?,
            weight: self.weight.clone(),
        })
    }

    /// The same rules on a smaller index set; the actions must not leave it.
    pub fn restrict(&self, indices: IndexSet) -> Result<LadderFamily> {
        if !indices.is_subset_of(&self.indices) {
            return Err(Error::domain(format!(
                "{indices} is not contained in {}",
                self.indices
            )));
        }
        LadderFamily::new(
            format!("{} on {indices}", self.label),
            indices,
            self.k,
            self.orientation,
            self.raise.clone(),
            self.lower.clone(),
            self.weight.clone(),
        )
    }

    /// Replaces one coefficient rule. Used for mutation tests and custom
    /// experiments; the boundary checks of [`LadderFamily::new`] still apply.
    pub fn with_rules(&self, raise: CoeffRule, lower: CoeffRule) -> Result<LadderFamily> {
        LadderFamily::new(
            self.label.clone(),
            self.indices,
            self.k,
            self.orientation,
            raise,
            lower,
            self.weight.clone(),
        )
    }

    pub fn describe(&self) -> FamilyDescription {
        FamilyDescription {
            label: self.label.clone(),
            index_kind: self.indices.kind(),
            index_set: self.indices.to_string(),
            k: self.k,
            orientation: self.orientation,
            raise: self.raise.to_string(),
            lower: self.lower.to_string(),
            weight: self.weight.to_string(),
        }
    }
}

/// Serializable summary of a family's coefficient rules.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyDescription {
    pub label: String,
    pub index_kind: IndexKind,
    pub index_set: String,
    #[serde(serialize_with = "crate::text::display")]
    pub k: u8,
    pub orientation: Orientation,
    pub raise: String,
    pub lower: String,
    pub weight: String,
}

/// Applies a generator to an element by linear extension of the rules.
pub fn apply(fam: &LadderFamily, gen: Generator, elt: &ModuleElement) -> Result<ModuleElement> {
    let mut out = ModuleElement::zero();
    for (p, c) in elt.terms() {
        if !fam.indices.contains(p) {
            return Err(Error::domain(format!(
                "index {p} is outside {} of `{}`",
                fam.indices, fam.label
            )));
        }
        match fam.step(gen, p) {
            None => {
                let w = Scalar::constant(fam.weight(p));
                out.add_term(p, c * &w);
            }
            Some((target, coeff)) => {
                if coeff.is_zero() {
                    continue;
                }
                if !fam.indices.contains(target) {
                    return Err(Error::Inconsistent(format!(
                        "{gen} maps e_{p} outside {} with coefficient {coeff}",
                        fam.indices
                    )));
                }
                out.add_term(target, c * &coeff);
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Relation {
    /// `[H,E] - 2E`
    HE,
    /// `[H,F] + 2F`
    HF,
    /// `[E,F] - t²H`
    EF,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::HE => "[H,E]-2E",
            Relation::HF => "[H,F]+2F",
            Relation::EF => "[E,F]-t^2H",
        })
    }
}

/// A nonzero residual: `relation` applied to `e_index` has coefficient
/// `residual` on `e_target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketDefect {
    pub relation: Relation,
    pub index: i64,
    pub target: i64,
    pub residual: Scalar,
}

fn check_window(fam: &LadderFamily, window: &Window) -> Result<()> {
    if fam.indices.contains_window(window) {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "window {window} exceeds the index set {} of `{}`",
            fam.indices, fam.label
        )))
    }
}

fn commutator(fam: &LadderFamily, x: Generator, y: Generator, v: &ModuleElement) -> Result<ModuleElement> {
    let xy = apply(fam, x, &apply(fam, y, v)?)?;
    let yx = apply(fam, y, &apply(fam, x, v)?)?;
    Ok(xy.sub(&yx))
}

/// Residuals of `[H,E] = 2E`, `[H,F] = -2F` and `[E,F] = t²H` on every basis
/// vector of the window. Empty means the relations hold exactly.
pub fn bracket_defect(fam: &LadderFamily, window: &Window) -> Result<Vec<BracketDefect>> {
    check_window(fam, window)?;
    let t2 = Scalar::t().pow(2);
    let two = Scalar::from_int(2);
    let mut out = Vec::new();
    for p in window.iter() {
        let v = ModuleElement::basis(p);
        let e = apply(fam, Generator::E, &v)?;
        let f = apply(fam, Generator::F, &v)?;
        let h = apply(fam, Generator::H, &v)?;
        let residuals = [
            (Relation::HE, commutator(fam, Generator::H, Generator::E, &v)?.sub(&e.scale(&two))),
            (Relation::HF, commutator(fam, Generator::H, Generator::F, &v)?.add(&f.scale(&two))),
            (Relation::EF, commutator(fam, Generator::E, Generator::F, &v)?.sub(&h.scale(&t2))),
        ];
        for (relation, r) in residuals {
            out.extend(r.terms().map(|(target, c)| BracketDefect {
                relation,
                index: p,
                target,
                residual: c.clone(),
            }));
        }
    }
    Ok(out)
}

/// The Casimir eigenvalue `(l² - t²)/4` of the contraction family with
/// spectral parameter `l`.
pub fn casimir_eigenvalue(l: &GaussRational) -> Scalar {
    let l2 = Scalar::constant(l * l);
    &(&l2 - &Scalar::t().pow(2)) * &Scalar::ratio(1, 4)
}

/// Residual of `(t²/4)H² + ½(EF + FE) - (l² - t²)/4` on each basis vector.
pub fn casimir_defect(
    fam: &LadderFamily,
    l: &GaussRational,
    window: &Window,
) -> Result<Vec<(i64, Scalar)>> {
    casimir_defect_with(fam, &casimir_eigenvalue(l), window)
}

/// As [`casimir_defect`] with an arbitrary expected eigenvalue.
pub fn casimir_defect_with(
    fam: &LadderFamily,
    eigenvalue: &Scalar,
    window: &Window,
) -> Result<Vec<(i64, Scalar)>> {
    check_window(fam, window)?;
    let quarter_t2 = &Scalar::t().pow(2) * &Scalar::ratio(1, 4);
    let half = Scalar::ratio(1, 2);
    let mut out = Vec::new();
    for p in window.iter() {
        let v = ModuleElement::basis(p);
        let hh = apply(fam, Generator::H, &apply(fam, Generator::H, &v)?)?;
        let ef = apply(fam, Generator::E, &apply(fam, Generator::F, &v)?)?;
        let fe = apply(fam, Generator::F, &apply(fam, Generator::E, &v)?)?;
        let residual = hh
            .scale(&quarter_t2)
            .add(&ef.add(&fe).scale(&half))
            .sub(&v.scale(eigenvalue));
        out.extend(residual.terms().map(|(q, c)| {
            debug_assert_eq!(q, p, "Casimir operator is diagonal on a ladder");
            (p, c.clone())
        }));
    }
    Ok(out)
}

/// Indices `p` in the window where `weight(p+1) - weight(p)` differs from the
/// step the orientation requires.
pub fn weight_step_violations(fam: &LadderFamily, window: &Window) -> Vec<i64> {
    let step = GaussRational::from_int(fam.orientation.weight_step());
    let w = fam.indices.clip(window);
    w.iter()
        .filter(|&p| w.contains(p + 1))
        .filter(|&p| &fam.weight(p + 1) - &fam.weight(p) != step)
        .collect()
}

/// Closure of `seeds` under the moves `p → p+1` where `raise(p) ≠ 0` and
/// `p → p-1` where `lower(p) ≠ 0`, inside the window.
///
/// Intended for a family specialized at a numeric `t`; on a symbolic family
/// a coefficient counts as nonzero when it is not the zero function.
pub fn generated_submodule(
    fam: &LadderFamily,
    seeds: &BTreeSet<i64>,
    window: &Window,
) -> BTreeSet<i64> {
    let region = fam.indices.clip(window);
    let mut seen: BTreeSet<i64> = seeds.iter().copied().filter(|&p| region.contains(p)).collect();
    let mut queue: VecDeque<i64> = seen.iter().copied().collect();
    while let Some(p) = queue.pop_front() {
        let moves = [
            (p + 1, fam.raise(p)),
            (p - 1, fam.lower(p)),
        ];
        for (q, c) in moves {
            if region.contains(q) && !c.is_zero() && seen.insert(q) {
                queue.push_back(q);
            }
        }
    }
    seen
}

/// Index of rung `j` counted outward from the boundary of a bounded ladder.
fn rung(indices: &IndexSet, j: i64) -> Option<i64> {
    match *indices {
        IndexSet::AtLeast(b) => Some(b + j),
        IndexSet::AtMost(b) => Some(b - j),
        IndexSet::Interval(lo, hi) => (lo + j <= hi).then_some(lo + j),
        IndexSet::All => None,
    }
}

/// `raise(q)·lower(q+1)`: the product of the two coefficients linking
/// `e_q` and `e_{q+1}`. Any diagonal rescaling of the basis preserves it.
pub fn link_product(fam: &LadderFamily, q: i64) -> Scalar {
    &fam.raise(q) * &fam.lower(q + 1)
}

/// Isomorphism up to diagonal rescaling of the basis: weights and link
/// products agree rung by rung.
///
/// For bounded ladders the window counts rungs outward from the boundary
/// (`0` is the boundary vector), so an upward and a downward half-line can be
/// compared. Two full-line ladders are compared index by index. Mixing a
/// full line with a bounded ladder is a domain error.
pub fn ladder_isomorphic(a: &LadderFamily, b: &LadderFamily, window: &Window) -> Result<bool> {
    match (a.indices.kind().is_bounded(), b.indices.kind().is_bounded()) {
        (false, false) => {
            for p in window.iter() {
                if a.weight(p) != b.weight(p) || link_product(a, p) != link_product(b, p) {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        (true, true) => {
            if window.lo < 0 {
                return Err(Error::domain(format!(
                    "rung window {window} must start at or after the boundary rung 0"
                )));
            }
            for j in window.iter() {
                let (ra, rb) = (rung(&a.indices, j), rung(&b.indices, j));
                let (pa, pb) = match (ra, rb) {
                    (None, None) => continue,
                    (Some(pa), Some(pb)) => (pa, pb),
                    _ => return Ok(false),
                };
                if a.weight(pa) != b.weight(pb) {
                    return Ok(false);
                }
                match (rung(&a.indices, j + 1), rung(&b.indices, j + 1)) {
                    (Some(na), Some(nb)) => {
                        if link_product(a, pa.min(na)) != link_product(b, pb.min(nb)) {
                            return Ok(false);
                        }
                    }
                    (None, None) => {}
                    _ => return Ok(false),
                }
            }
            Ok(true)
        }
        _ => Err(Error::domain(format!(
            "cannot compare index sets {} and {}",
            a.indices, b.indices
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant_family(raise: i64, lower: i64, weight: i64) -> LadderFamily {
        LadderFamily::new(
            "constant",
            IndexSet::All,
            0,
            Orientation::FRaises,
            CoeffRule::constant(Scalar::from_int(raise)),
            CoeffRule::constant(Scalar::from_int(lower)),
            CoeffRule::constant(Scalar::from_int(weight)),
        )
        .unwrap()
    }

    #[test]
    fn broken_family_has_bracket_defects_everywhere() {
        let fam = constant_family(1, 1, 0);
        let defects = bracket_defect(&fam, &Window::radius(3)).unwrap();
        for p in -3..=3 {
            let he: Vec<_> = defects
                .iter()
                .filter(|d| d.index == p && d.relation == Relation::HE)
                .collect();
            assert_eq!(he.len(), 1);
            assert_eq!(he[0].residual, Scalar::from_int(-2));
        }
        assert!(defects.iter().all(|d| d.relation != Relation::EF));
    }

    #[test]
    fn bounded_family_rejects_escaping_action() {
        let err = LadderFamily::new(
            "bad",
            IndexSet::AtLeast(0),
            0,
            Orientation::FRaises,
            CoeffRule::constant(Scalar::one()),
            CoeffRule::constant(Scalar::one()),
            CoeffRule::affine(Scalar::zero(), Scalar::from_int(-2)),
        );
        assert!(matches!(err, Err(Error::Domain(_))));
    }

    #[test]
    fn apply_outside_index_set_is_domain_error() {
        let fam = constant_family(1, 1, 0).restrict(IndexSet::All).unwrap();
        let half = LadderFamily::new(
            "half",
            IndexSet::AtLeast(0),
            0,
            Orientation::FRaises,
            CoeffRule::constant(Scalar::one()),
            CoeffRule::affine(Scalar::zero(), Scalar::one()),
            CoeffRule::affine(Scalar::zero(), Scalar::from_int(-2)),
        )
        .unwrap();
        assert!(apply(&fam, Generator::E, &ModuleElement::basis(-100)).is_ok());
        assert!(matches!(
            apply(&half, Generator::E, &ModuleElement::basis(-1)),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            bracket_defect(&half, &Window::new(-1, 3)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn generated_submodule_basics() {
        let fam = constant_family(1, 0, 0);
        let seeds: BTreeSet<i64> = [0].into();
        let reach = generated_submodule(&fam, &seeds, &Window::radius(3));
        assert_eq!(reach, (0..=3).collect());
        assert!(generated_submodule(&fam, &BTreeSet::new(), &Window::radius(3)).is_empty());
    }

    #[test]
    fn ppoly_display() {
        let rule = PPoly::affine(
            &Scalar::t() * &Scalar::ratio(1, 2) - Scalar::ratio(3, 2),
            Scalar::t(),
        );
        assert_eq!(rule.to_string(), "t*p + 1/2*t - 3/2");
        let neg = PPoly::affine(Scalar::zero(), Scalar::from_int(-2));
        assert_eq!(neg.to_string(), "-2*p");
        assert_eq!(PPoly::default().to_string(), "0");
    }

    #[test]
    fn window_helpers() {
        assert_eq!(IndexSet::AtLeast(0).window(40), Window::new(0, 40));
        assert_eq!(IndexSet::AtMost(-1).window(5), Window::new(-6, -1));
        assert_eq!(IndexSet::Interval(-2, 9).window(5), Window::new(-2, 5));
        assert!(Window::empty().is_empty());
        assert_eq!(Window::radius(2).len(), 5);
    }
}
