//! The `t = 0` endpoint: motion-group modules, their support in `s*`, the
//! fiber at the origin, Mackey data and the bijection table.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{GaussRational, Scalar};
use crate::families::{
    classify_specialization, discrete_family, rees_lambda0_family, FamilySpec, Parity, Sign,
    SpecializationKind,
};
use crate::ladder::{
    apply, ladder_isomorphic, Generator, IndexSet, LadderFamily, ModuleElement, Window,
};

/// Specialization at `t = 0`.
pub fn contract(fam: &LadderFamily) -> Result<LadderFamily> {
    let at0 = fam.specialize(&GaussRational::zero()).map_err(|e| match e {
        Error::SpecializationPole { .. } => Error::PoleAtZero,
        other => other,
    })?;
    Ok(at0.with_label(format!("{} at t=0", fam.label())))
}

/// Support of a `t = 0` module in `s*`, described by its defining equation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SupportDescriptor {
    /// `E = F = 0`
    Origin,
    /// `F = 0`
    EAxis,
    /// `E = 0`
    FAxis,
    /// `EF = 0`
    AxisUnion,
    /// `EF = c`, `c ≠ 0`
    Conic { c: GaussRational },
}

/// The closed K-orbits in `s*`: the origin and the conics `EF = c`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClosedOrbit {
    Origin,
    Conic { c: GaussRational },
}

impl SupportDescriptor {
    pub fn contains_origin(&self) -> bool {
        !matches!(self, SupportDescriptor::Conic { .. })
    }

    /// The unique minimal closed K-orbit in the support.
    pub fn min_closed_orbit(&self) -> ClosedOrbit {
        match self {
            SupportDescriptor::Conic { c } => ClosedOrbit::Conic { c: c.clone() },
            _ => ClosedOrbit::Origin,
        }
    }

    pub fn equation(&self) -> String {
        match self {
            SupportDescriptor::Origin => "E=0, F=0".into(),
            SupportDescriptor::EAxis => "F=0".into(),
            SupportDescriptor::FAxis => "E=0".into(),
            SupportDescriptor::AxisUnion => "EF=0".into(),
            SupportDescriptor::Conic { c } => format!("EF={c}"),
        }
    }
}

impl fmt::Display for SupportDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SupportDescriptor::Origin => f.write_str("origin"),
            SupportDescriptor::EAxis => f.write_str("E_axis"),
            SupportDescriptor::FAxis => f.write_str("F_axis"),
            SupportDescriptor::AxisUnion => f.write_str("axis_union"),
            SupportDescriptor::Conic { c } => write!(f, "conic(c={c})"),
        }
    }
}

/// K-weights of the irreducible quotient.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum QuotientWeights {
    /// A finite set of weights, ascending.
    Finite {
        #[serde(serialize_with = "crate::text::display_seq")]
        weights: Vec<i64>,
    },
    /// Every integer weight of the given parity.
    AllOfParity { parity: Parity },
}

impl fmt::Display for QuotientWeights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuotientWeights::Finite { weights } => {
                let parts: Vec<String> = weights.iter().map(i64::to_string).collect();
                write!(f, "{{{}}}", parts.join(", "))
            }
            QuotientWeights::AllOfParity { parity } => write!(f, "all {parity} weights"),
        }
    }
}

/// A representation of the motion group: a closed orbit with a character of
/// its stabilizer, recorded as support plus the K-weights of the quotient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MackeyDatum {
    pub support: SupportDescriptor,
    pub min_closed_orbit: ClosedOrbit,
    pub quotient: QuotientWeights,
    pub parity: Parity,
    pub label: String,
    /// Index set of the summand the datum was computed on.
    #[serde(serialize_with = "crate::text::display")]
    pub indices: IndexSet,
}

impl MackeyDatum {
    /// The parts that identify the datum, without the bookkeeping fields.
    pub fn key(&self) -> (String, QuotientWeights) {
        (self.support.to_string(), self.quotient.clone())
    }
}

fn require_constant(fam: &LadderFamily) -> Result<()> {
    if fam.is_t_free() {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "`{}` still depends on t; contract it first",
            fam.label()
        )))
    }
}

fn coefficient_on(fam: &LadderFamily, x: Generator, y: Generator, p: i64) -> Result<Scalar> {
    let v = apply(fam, x, &apply(fam, y, &ModuleElement::basis(p))?)?;
    Ok(v.coefficient(p))
}

/// Candidate-then-verify classification of the support on a window.
pub fn support(contracted: &LadderFamily, window: &Window) -> Result<SupportDescriptor> {
    require_constant(contracted)?;
    let region = contracted.indices().clip(window);
    let step_zero = |g: Generator| {
        region
            .iter()
            .all(|p| contracted.step(g, p).is_none_or(|(_, c)| c.is_zero()))
    };
    let (e_zero, f_zero) = (step_zero(Generator::E), step_zero(Generator::F));
    if region.is_empty() || (e_zero && f_zero) {
        return Ok(SupportDescriptor::Origin);
    }
    if f_zero {
        return Ok(SupportDescriptor::EAxis);
    }
    if e_zero {
        return Ok(SupportDescriptor::FAxis);
    }
    let c = coefficient_on(contracted, Generator::E, Generator::F, region.lo)?;
    for p in region.iter() {
        for (x, y) in [(Generator::E, Generator::F), (Generator::F, Generator::E)] {
            let got = coefficient_on(contracted, x, y, p)?;
            if got != c {
                return Err(Error::UnclassifiedSupport(format!(
                    "`{}`: {x}{y} acts on e_{p} by {got}, but by {c} on e_{}",
                    contracted.label(),
                    region.lo
                )));
            }
        }
    }
    let c = c.as_constant().expect("family is t-free");
    Ok(if c.is_zero() {
        SupportDescriptor::AxisUnion
    } else {
        SupportDescriptor::Conic { c }
    })
}

fn quotient_label(q: &QuotientWeights, supp: &SupportDescriptor, parity: Parity) -> String {
    match q {
        QuotientWeights::Finite { weights } => weights
            .iter()
            .map(|w| format!("C_{w}"))
            .collect::<Vec<_>>()
            .join(" + "),
        QuotientWeights::AllOfParity { .. } => format!("{supp} with {parity} K-types"),
    }
}

/// The fiber at the origin, `M / (E·M + F·M)`, or the module itself when the
/// support is a conic.
pub fn irreducible_quotient(
    contracted: &LadderFamily,
    supp: &SupportDescriptor,
    window: &Window,
) -> Result<MackeyDatum> {
    require_constant(contracted)?;
    let parity = Parity::from_k(contracted.k());
    let indices = contracted.indices();
    let quotient = if let SupportDescriptor::Conic { .. } = supp {
        QuotientWeights::AllOfParity { parity }
    } else {
        let region = indices.clip(window);
        let hit = |p: i64| {
            (indices.contains(p - 1) && !contracted.raise(p - 1).is_zero())
                || (indices.contains(p + 1) && !contracted.lower(p + 1).is_zero())
        };
        let mut weights = Vec::new();
        for p in region.iter().filter(|&p| !hit(p)) {
            let w = contracted.weight(p);
            weights.push(w.to_i64().ok_or_else(|| {
                Error::Inconsistent(format!("non-integral K-weight {w} at index {p}"))
            })?);
        }
        if weights.is_empty() {
            return Err(Error::Inconsistent(format!(
                "`{}` has zero fiber at the origin on {window}",
                contracted.label()
            )));
        }
        weights.sort_unstable();
        QuotientWeights::Finite { weights }
    };
    Ok(MackeyDatum {
        label: quotient_label(&quotient, supp, parity),
        support: supp.clone(),
        min_closed_orbit: supp.min_closed_orbit(),
        quotient,
        parity,
        indices,
    })
}

/// Splits the ladder wherever both coefficients linking `p` and `p+1` are
/// zero. Breaks are searched inside the window only; each piece extends to
/// the family's own bounds on the open sides.
pub fn split_summands(fam: &LadderFamily, window: &Window) -> Result<Vec<IndexSet>> {
    let indices = fam.indices();
    let region = indices.clip(window);
    let breaks: Vec<i64> = region
        .iter()
        .filter(|&p| region.contains(p + 1))
        .filter(|&p| fam.raise(p).is_zero() && fam.lower(p + 1).is_zero())
        .collect();
    let piece = |lo: Option<i64>, hi: Option<i64>| match (lo, hi) {
        (None, None) => Ok(IndexSet::All),
        (Some(lo), None) => Ok(IndexSet::AtLeast(lo)),
        (None, Some(hi)) => Ok(IndexSet::AtMost(hi)),
        (Some(lo), Some(hi)) => IndexSet::interval(lo, hi),
    };
    let mut out = Vec::with_capacity(breaks.len() + 1);
    let mut start = indices.lower_bound();
    for b in breaks {
        out.push(piece(start, Some(b))?);
        start = Some(b + 1);
    }
    out.push(piece(start, indices.upper_bound())?);
    Ok(out)
}

/// One Mackey datum per direct summand of a contracted module.
pub fn mackey_data(contracted: &LadderFamily, window: &Window) -> Result<Vec<MackeyDatum>> {
    let pieces = split_summands(contracted, window)?;
    if pieces.len() == 1 {
        let supp = support(contracted, window)?;
        return Ok(vec![irreducible_quotient(contracted, &supp, window)?]);
    }
    pieces
        .into_iter()
        .map(|set| {
            let part = contracted.restrict(set)?;
            let supp = support(&part, window)?;
            irreducible_quotient(&part, &supp, window)
        })
        .collect()
}

/// Outcome of comparing the two halves of a split ladder with `D+_0`, `D-_0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SchmidOutcome {
    #[serde(serialize_with = "crate::text::display_seq")]
    pub summands: Vec<IndexSet>,
    pub lower_half_matches_plus: bool,
    pub upper_half_matches_minus: bool,
    pub holds: bool,
}

/// Splits `fam` symbolically in `t` and compares its halves, rung by rung
/// over `rungs`, with the limits of discrete series.
pub fn schmid_check_with(fam: &LadderFamily, rungs: &Window) -> Result<SchmidOutcome> {
    let span = Window::radius(rungs.hi.max(0) + 1);
    let summands = split_summands(fam, &span)?;
    let (plus, minus) = match summands.as_slice() {
        [lo @ IndexSet::AtMost(_), hi @ IndexSet::AtLeast(_)] => {
            let lower = fam.restrict(*lo)?;
            let upper = fam.restrict(*hi)?;
            (
                ladder_isomorphic(&lower, &discrete_family(0, Sign::Plus), rungs)?,
                ladder_isomorphic(&upper, &discrete_family(0, Sign::Minus), rungs)?,
            )
        }
        _ => (false, false),
    };
    Ok(SchmidOutcome {
        summands,
        lower_half_matches_plus: plus,
        upper_half_matches_minus: minus,
        holds: plus && minus,
    })
}

/// The odd `l = 0` Rees family is the direct sum of the two limits of
/// discrete series for every `t`.
pub fn schmid_check() -> Result<bool> {
    let rees = rees_lambda0_family(1)?;
    Ok(schmid_check_with(&rees, &Window::new(0, 40))?.holds)
}

/// `l` up to sign: positive imaginary part, or positive real part when real.
pub fn canonical_l(l: &GaussRational) -> GaussRational {
    let flip = if l.im().is_zero() {
        l.re().is_negative()
    } else {
        l.im().is_negative()
    };
    if flip {
        -l
    } else {
        l.clone()
    }
}

/// `P(l,k)` at `t = 1` is reducible exactly when `l` is an integer with
/// `l + k` odd.
pub fn principal_is_reducible(l: &GaussRational, k: u8) -> bool {
    l.to_i64().is_some_and(|n| (n + i64::from(k)).rem_euclid(2) == 1)
}

/// The `t = 1` representation named by a spec, and whether it is irreducible.
pub fn group_label(spec: &FamilySpec) -> Result<(String, bool)> {
    // P(l,k) and P(-l,k) are isomorphic only when irreducible.
    let principal = |l: &GaussRational, k: u8| {
        let irreducible = !principal_is_reducible(l, k);
        let shown = if irreducible { canonical_l(l) } else { l.clone() };
        (format!("P(l={shown},k={k})"), irreducible)
    };
    Ok(match spec {
        FamilySpec::Discrete { n, sign } => (format!("D{sign}_{n}"), true),
        FamilySpec::ReesLambda0 { k: 0 } => ("P(l=0,k=0)".into(), true),
        FamilySpec::ReesLambda0 { .. } => ("D+_0 + D-_0".into(), false),
        FamilySpec::Principal { l, k } => principal(l, *k),
        FamilySpec::FiniteDim { dim, .. } => (format!("F_{}", dim - 1), true),
        FamilySpec::MinimalKtype { l, k } => {
            match classify_specialization(l, *k, &GaussRational::from_int(1))? {
                SpecializationKind::FiniteDimensional { dim } => (format!("F_{}", dim - 1), true),
                SpecializationKind::FullPrincipalSeries => principal(l, *k),
            }
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BijectionRow {
    pub spec: FamilySpec,
    pub group_label: String,
    pub irreducible: bool,
    pub family: String,
    pub data: Vec<MackeyDatum>,
}

/// Two irreducible `t = 1` labels that share a Mackey datum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Collision {
    pub first: String,
    pub second: String,
    pub datum: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BijectionTable {
    pub rows: Vec<BijectionRow>,
    pub collisions: Vec<Collision>,
    pub injective: bool,
}

/// Window used to compute supports and fibers for table rows.
pub const TABLE_WINDOW: i64 = 20;

pub fn bijection_row(spec: &FamilySpec) -> Result<BijectionRow> {
    let fam = spec.build()?;
    let contracted = contract(&fam)?;
    let (group_label, irreducible) = group_label(spec)?;
    Ok(BijectionRow {
        spec: spec.clone(),
        group_label,
        irreducible,
        family: fam.label().to_string(),
        data: mackey_data(&contracted, &fam.indices().window(TABLE_WINDOW))?,
    })
}

/// Checks that no two distinct irreducible labels share a datum.
pub fn collisions(rows: &[BijectionRow]) -> Vec<Collision> {
    let mut seen: BTreeMap<Vec<(String, QuotientWeights)>, &str> = BTreeMap::new();
    let mut out = Vec::new();
    for row in rows.iter().filter(|r| r.irreducible) {
        let key: Vec<_> = row.data.iter().map(MackeyDatum::key).collect();
        match seen.get(&key) {
            Some(first) if *first != row.group_label => out.push(Collision {
                first: first.to_string(),
                second: row.group_label.clone(),
                datum: row.data.iter().map(|d| d.label.clone()).collect::<Vec<_>>().join(" + "),
            }),
            Some(_) => {}
            None => {
                seen.insert(key, &row.group_label);
            }
        }
    }
    out
}

pub fn bijection_table(specs: &[FamilySpec]) -> Result<BijectionTable> {
    let rows = specs.iter().map(bijection_row).collect::<Result<Vec<_>>>()?;
    let collisions = collisions(&rows);
    Ok(BijectionTable {
        injective: collisions.is_empty(),
        rows,
        collisions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::principal_family;
    use crate::ladder::{CoeffRule, PPoly};

    #[test]
    fn contract_principal_gives_constants() {
        let c = contract(&principal_family(&GaussRational::from_int(3), 0).unwrap()).unwrap();
        assert_eq!(c.raise(7), Scalar::ratio(-3, 2));
        assert_eq!(
            support(&c, &Window::radius(10)).unwrap(),
            SupportDescriptor::Conic { c: GaussRational::ratio(9, 4) }
        );
    }

    #[test]
    fn uncontracted_family_is_rejected() {
        let fam = principal_family(&GaussRational::from_int(3), 0).unwrap();
        assert!(matches!(support(&fam, &Window::radius(3)), Err(Error::Domain(_))));
    }

    #[test]
    fn unclassified_support() {
        let base = contract(&principal_family(&GaussRational::from_int(3), 0).unwrap()).unwrap();
        let odd = base
            .with_rules(
                CoeffRule::Poly(PPoly::affine(Scalar::from_int(1), Scalar::from_int(1))),
                base.lower_rule().clone(),
            )
            .unwrap();
        assert!(matches!(
            support(&odd, &Window::radius(3)),
            Err(Error::UnclassifiedSupport(_))
        ));
    }

    #[test]
    fn split_rees_odd() {
        let rees = rees_lambda0_family(1).unwrap();
        let pieces = split_summands(&rees, &Window::radius(5)).unwrap();
        assert_eq!(pieces, vec![IndexSet::AtMost(-1), IndexSet::AtLeast(0)]);
        let rees0 = rees_lambda0_family(0).unwrap();
        assert_eq!(split_summands(&rees0, &Window::radius(5)).unwrap(), vec![IndexSet::All]);
    }

    #[test]
    fn canonical_l_and_reducibility() {
        let i2 = GaussRational::complex((0, 1), (-2, 1));
        assert_eq!(canonical_l(&i2), -i2);
        assert_eq!(canonical_l(&GaussRational::from_int(-3)), GaussRational::from_int(3));
        assert!(principal_is_reducible(&GaussRational::from_int(3), 0));
        assert!(principal_is_reducible(&GaussRational::from_int(-2), 1));
        assert!(!principal_is_reducible(&GaussRational::from_int(2), 0));
        assert!(!principal_is_reducible(&GaussRational::ratio(5, 2), 1));
    }
}
