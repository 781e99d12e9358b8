//! Normalized intertwining operators `e_p ↦ α_p e_p` from the `-l` to the
//! `l` principal family.
//!
//! `α_p` is stored in closed product form, already a rational function of
//! `t` (the spectral parameter enters as `l/t`, cleared of denominators):
//!
//! * `p > 0`: `∏_{j=1}^{p} (t(2j+k-1) - l) / (t(2j+k-1) + l)`
//! * `p < 0`: `∏_{j=1}^{|p|} (t(2j-k-1) - l) / (t(2j-k-1) + l)`

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{GaussRational, Scalar, TPoly};
use crate::families::principal_family_unchecked;
use crate::ladder::{Generator, ModuleElement, Window};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaSequence {
    l: GaussRational,
    k: u8,
    window: Window,
    values: BTreeMap<i64, Scalar>,
}

/// `t·c ± l` as a polynomial in `t`.
fn linear(c: i64, l: &GaussRational) -> TPoly {
    TPoly::from_coeffs(vec![l.clone(), GaussRational::from_int(c)])
}

/// The ratio `α_p / α_{p-1}`.
pub fn alpha_ratio(l: &GaussRational, k: u8, p: i64) -> Result<Scalar> {
    let c = 2 * p + i64::from(k) - 1;
    Scalar::normalize(linear(c, &-l), linear(c, l))
}

/// Closed products for every index of the window, each side built by
/// extending the previous product by one factor.
fn alpha_closed(l: &GaussRational, k: u8, window: &Window) -> Result<BTreeMap<i64, Scalar>> {
    if l.is_zero() {
        return Ok(window.iter().map(|p| (p, Scalar::one())).collect());
    }
    let k = i64::from(k);
    let mut out = BTreeMap::new();
    for (sign, last) in [(1i64, window.hi.max(0)), (-1, -window.lo.min(0))] {
        let mut num = TPoly::one();
        let mut den = TPoly::one();
        for j in 0..=last {
            if j > 0 {
                let c = if sign > 0 { 2 * j + k - 1 } else { 2 * j - k - 1 };
                num = &num * &linear(c, &-l);
                den = &den * &linear(c, l);
            }
            let p = sign * j;
            if window.contains(p) && !out.contains_key(&p) {
                out.insert(p, Scalar::normalize(num.clone(), den.clone())?);
            }
        }
    }
    Ok(out)
}

impl AlphaSequence {
    /// `α_p` for every `p` in the window. At `l = 0` every `α_p` is 1.
    pub fn new(l: &GaussRational, k: u8, window: &Window) -> Result<Self> {
        if k > 1 {
            return Err(Error::domain(format!("k must be 0 or 1, got {k}")));
        }
        let values = alpha_closed(l, k, window)?;
        Ok(AlphaSequence {
            l: l.clone(),
            k,
            window: *window,
            values,
        })
    }

    pub fn l(&self) -> &GaussRational {
        &self.l
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn get(&self, p: i64) -> Result<&Scalar> {
        self.values
            .get(&p)
            .ok_or_else(|| Error::domain(format!("index {p} outside the alpha window {}", self.window)))
    }

    pub fn values(&self) -> impl Iterator<Item = (i64, &Scalar)> {
        self.values.iter().map(|(&p, a)| (p, a))
    }

    /// Overrides one value. Used to build deliberately broken sequences.
    pub fn with_value(mut self, p: i64, value: Scalar) -> Result<Self> {
        self.get(p)?;
        self.values.insert(p, value);
        Ok(self)
    }

    /// `α_p` at `t = at`.
    pub fn at(&self, p: i64, at: &GaussRational) -> Result<GaussRational> {
        self.get(p)?.eval_at(at)
    }

    /// Adjacent pairs in the window where `α_p ≠ ratio(p)·α_{p-1}`, plus
    /// index 0 if `α_0 ≠ 1`.
    pub fn recursion_violations(&self) -> Result<Vec<i64>> {
        let mut out = Vec::new();
        if self.values.get(&0).is_some_and(|a| !a.is_one()) {
            out.push(0);
        }
        for p in self.window.iter().skip(1) {
            let want = if self.l.is_zero() {
                self.values[&(p - 1)].clone()
            } else {
                &alpha_ratio(&self.l, self.k, p)? * &self.values[&(p - 1)]
            };
            if self.values[&p] != want {
                out.push(p);
            }
        }
        Ok(out)
    }
}

/// `e_p ↦ α_p e_p`, extended linearly.
pub fn apply_intertwiner(seq: &AlphaSequence, elt: &ModuleElement) -> Result<ModuleElement> {
    let mut out = ModuleElement::zero();
    for (p, c) in elt.terms() {
        out.add_term(p, c * seq.get(p)?);
    }
    Ok(out)
}

/// A nonzero residual of the intertwining relation for `gen` on `e_index`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivarianceDefect {
    pub generator: Generator,
    #[serde(serialize_with = "crate::text::display")]
    pub index: i64,
    pub residual: Scalar,
}

/// Residuals of `α_{p-1} a^{(-l)}_p - α_p a^{(l)}_p` (for `E`) and
/// `α_{p+1} b^{(-l)}_p - α_p b^{(l)}_p` (for `F`), where `a`, `b` are the
/// lowering and raising coefficients of the principal families `±l`.
pub fn equivariance_defect(l: &GaussRational, k: u8, window: &Window) -> Result<Vec<EquivarianceDefect>> {
    let seq = AlphaSequence::new(l, k, &window.widen(1))?;
    equivariance_defect_of(&seq, window)
}

/// As [`equivariance_defect`] for a given sequence, which must cover the
/// window with one index of margin.
pub fn equivariance_defect_of(seq: &AlphaSequence, window: &Window) -> Result<Vec<EquivarianceDefect>> {
    let target = principal_family_unchecked(seq.l(), seq.k())?;
    let source = principal_family_unchecked(&-seq.l(), seq.k())?;
    let mut out = Vec::new();
    for p in window.iter() {
        let a_p = seq.get(p)?;
        let e = &(seq.get(p - 1)? * &source.lower(p)) - &(a_p * &target.lower(p));
        let f = &(seq.get(p + 1)? * &source.raise(p)) - &(a_p * &target.raise(p));
        for (generator, residual) in [(Generator::E, e), (Generator::F, f)] {
            if !residual.is_zero() {
                out.push(EquivarianceDefect {
                    generator,
                    index: p,
                    residual,
                });
            }
        }
    }
    Ok(out)
}

/// Residuals of `α_p(l) α_p(-l) - 1`, symbolically in `t`.
pub fn composition_defect(l: &GaussRational, k: u8, window: &Window) -> Result<Vec<(i64, Scalar)>> {
    let plus = AlphaSequence::new(l, k, window)?;
    let minus = AlphaSequence::new(&-l, k, window)?;
    let one = Scalar::one();
    Ok(window
        .iter()
        .filter_map(|p| {
            let r = &(&plus.values[&p] * &minus.values[&p]) - &one;
            (!r.is_zero()).then_some((p, r))
        })
        .collect())
}

/// Value of one `α_p` at a point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum PointValue {
    Zero,
    Pole,
    Value(GaussRational),
}

impl PointValue {
    fn of(s: &Scalar, at: &GaussRational) -> PointValue {
        match s.eval_at(at) {
            Err(_) => PointValue::Pole,
            Ok(v) if v.is_zero() => PointValue::Zero,
            Ok(v) => PointValue::Value(v),
        }
    }
}

/// The composition at one index and a fixed `t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompositionPoint {
    #[serde(serialize_with = "crate::text::display")]
    pub index: i64,
    pub plus: PointValue,
    pub minus: PointValue,
    /// `α_p(l) α_p(-l) - 1` where it is defined. When one factor vanishes the
    /// composite kills `e_p` and the residual is `-1`; it is `None` when a
    /// pole is not cancelled by a zero.
    pub residual: Option<GaussRational>,
    pub singular: bool,
}

/// The composition identity evaluated at `t = at`, reporting the zero/pole
/// pattern where `α_p(±l)` degenerates.
pub fn composition_defect_at(
    l: &GaussRational,
    k: u8,
    window: &Window,
    at: &GaussRational,
) -> Result<Vec<CompositionPoint>> {
    let plus = AlphaSequence::new(l, k, window)?;
    let minus = AlphaSequence::new(&-l, k, window)?;
    let one = GaussRational::one();
    Ok(window
        .iter()
        .map(|p| {
            let a = PointValue::of(&plus.values[&p], at);
            let b = PointValue::of(&minus.values[&p], at);
            let residual = match (&a, &b) {
                (PointValue::Value(x), PointValue::Value(y)) => Some(&(x * y) - &one),
                (PointValue::Zero, _) | (_, PointValue::Zero) => Some(-one.clone()),
                _ => None,
            };
            let singular = !matches!((&a, &b), (PointValue::Value(_), PointValue::Value(_)));
            CompositionPoint {
                index: p,
                plus: a,
                minus: b,
                residual,
                singular,
            }
        })
        .collect())
}

/// `lim_{t→0} α_p` for each index, checked against `α⁰_p = -α⁰_{p-1}`.
///
/// Each factor tends to `-l/l = -1`, so the limits exist for every `l ≠ 0`;
/// at `l = 0` the operator is the identity.
pub fn alpha_limits(l: &GaussRational, k: u8, window: &Window) -> Result<BTreeMap<i64, GaussRational>> {
    let seq = AlphaSequence::new(l, k, window)?;
    let limits: BTreeMap<i64, GaussRational> = seq
        .values()
        .map(|(p, a)| a.limit_at_zero().map(|v| (p, v)))
        .collect::<Result<_>>()?;
    if !l.is_zero() {
        for (p, v) in &limits {
            if let Some(prev) = limits.get(&(p - 1)) {
                if *v != -prev {
                    return Err(Error::Inconsistent(format!(
                        "limit recursion fails at p={p}: {v} vs {prev}"
                    )));
                }
            }
        }
    }
    Ok(limits)
}

/// Indices where `α_p(l)` is nonzero at `t = 1`, for a positive integer `l`
/// with `l + k` odd. The result is the finite-dimensional image.
pub fn finite_rank_image(l: i64, k: u8, window: &Window) -> Result<BTreeSet<i64>> {
    if l < 1 {
        return Err(Error::domain(format!("finite rank needs a positive integer l, got {l}")));
    }
    if (l + i64::from(k)) % 2 == 0 {
        return Err(Error::domain(format!(
            "l + k = {} is even: the intertwiner has no zero and is not of finite rank",
            l + i64::from(k)
        )));
    }
    let seq = AlphaSequence::new(&GaussRational::from_int(l), k, window)?;
    let one = GaussRational::one();
    let mut out = BTreeSet::new();
    for (p, a) in seq.values() {
        if !a.eval_at(&one)?.is_zero() {
            out.insert(p);
        }
    }
    Ok(out)
}
