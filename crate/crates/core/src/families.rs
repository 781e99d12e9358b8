//! Constructors for the concrete contraction families and their
//! specializations at a fixed value of `t`.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{GaussRational, Scalar};
use crate::ladder::{
    CoeffRule, IndexSet, LadderFamily, Orientation, PPoly, Window,
};

/// Parity of the K-type shift `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_k(k: u8) -> Self {
        if k.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn k(self) -> u8 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// Holomorphic (`+`) or antiholomorphic (`-`) discrete family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn parse(s: &str) -> Result<Sign> {
        match s {
            "+" | "plus" | "holomorphic" => Ok(Sign::Plus),
            "-" | "minus" | "antiholomorphic" => Ok(Sign::Minus),
            _ => Err(Error::Parse(format!("unknown sign {s:?}, expected + or -"))),
        }
    }

    pub fn signum(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// A named family with its parameters.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilySpec {
    Principal { l: GaussRational, #[serde(serialize_with = "crate::text::display")] k: u8 },
    Discrete { #[serde(serialize_with = "crate::text::display")] n: u32, sign: Sign },
    ReesLambda0 { #[serde(serialize_with = "crate::text::display")] k: u8 },
    MinimalKtype { l: GaussRational, #[serde(serialize_with = "crate::text::display")] k: u8 },
    /// The finite-dimensional module of dimension `dim`, realized through the
    /// minimal-K-type family with `l = dim`.
    FiniteDim { #[serde(serialize_with = "crate::text::display")] dim: u32, #[serde(serialize_with = "crate::text::display")] k: u8 },
}

impl FamilySpec {
    pub fn kind(&self) -> &'static str {
        match self {
            FamilySpec::Principal { .. } => "principal",
            FamilySpec::Discrete { .. } => "discrete",
            FamilySpec::ReesLambda0 { .. } => "rees_lambda0",
            FamilySpec::MinimalKtype { .. } => "minimal_ktype",
            FamilySpec::FiniteDim { .. } => "finite_dim",
        }
    }

    pub fn build(&self) -> Result<LadderFamily> {
        match self {
            FamilySpec::Principal { l, k } => principal_family(l, *k),
            FamilySpec::Discrete { n, sign } => Ok(discrete_family(*n, *sign)),
            FamilySpec::ReesLambda0 { k } => rees_lambda0_family(*k),
            FamilySpec::MinimalKtype { l, k } => minimal_ktype_family(l, *k).map(|(f, _)| f),
            FamilySpec::FiniteDim { dim, k } => {
                check_finite_parity(*dim, *k)?;
                let l = GaussRational::from_int(i64::from(*dim));
                Ok(principal_family(&l, *k)?.with_label(format!("finite_dim(dim={dim}, k={k})")))
            }
        }
    }

    /// Indices spanning the minimal K-types.
    pub fn seeds(&self) -> BTreeSet<i64> {
        match self {
            FamilySpec::Discrete { .. } => [0].into(),
            FamilySpec::Principal { k, .. }
            | FamilySpec::ReesLambda0 { k }
            | FamilySpec::MinimalKtype { k, .. }
            | FamilySpec::FiniteDim { k, .. } => minimal_ktype_seeds(*k),
        }
    }

    /// The Casimir eigenvalue of the family as a function of `t`.
    pub fn casimir_eigenvalue(&self) -> Scalar {
        match self {
            FamilySpec::Principal { l, .. } | FamilySpec::MinimalKtype { l, .. } => {
                crate::ladder::casimir_eigenvalue(l)
            }
            FamilySpec::ReesLambda0 { .. } => crate::ladder::casimir_eigenvalue(&GaussRational::zero()),
            FamilySpec::FiniteDim { dim, .. } => {
                crate::ladder::casimir_eigenvalue(&GaussRational::from_int(i64::from(*dim)))
            }
            FamilySpec::Discrete { n, .. } => {
                let n = i64::from(*n);
                &Scalar::t().pow(2) * &Scalar::ratio(n * n - 1, 4)
            }
        }
    }
}

/// Same syntax as a module-document header, without the `family` keyword.
impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Principal { l, k } => write!(f, "principal l={l} k={k}"),
            FamilySpec::Discrete { n, sign } => write!(f, "discrete n={n} sign={sign}"),
            FamilySpec::ReesLambda0 { k } => write!(f, "rees_lambda0 k={k}"),
            FamilySpec::MinimalKtype { l, k } => write!(f, "minimal_ktype l={l} k={k}"),
            FamilySpec::FiniteDim { dim, k } => write!(f, "finite_dim dim={dim} k={k}"),
        }
    }
}

fn check_k(k: u8) -> Result<()> {
    if k > 1 {
        return Err(Error::domain(format!("k must be 0 or 1, got {k}")));
    }
    Ok(())
}

fn check_finite_parity(dim: u32, k: u8) -> Result<()> {
    check_k(k)?;
    if dim == 0 || (dim + u32::from(k)).is_multiple_of(2) {
        return Err(Error::domain(format!(
            "no finite-dimensional module of dimension {dim} with k={k}: need dim >= 1 and dim + k odd"
        )));
    }
    Ok(())
}

fn half_t(num: i64) -> Scalar {
    &Scalar::t() * &Scalar::ratio(num, 2)
}

/// Principal-series family; also accepts `l = 0`, which the public
/// constructor rejects.
pub(crate) fn principal_family_unchecked(l: &GaussRational, k: u8) -> Result<LadderFamily> {
    check_k(k)?;
    let kk = i64::from(k);
    let half_l = Scalar::constant(l * &GaussRational::ratio(1, 2));
    let t = Scalar::t();
    let raise = CoeffRule::affine(&half_t(kk + 1) - &half_l, t.clone());
    let lower = CoeffRule::affine(&half_t(1 - kk) - &half_l, -&t);
    let weight = CoeffRule::affine(Scalar::from_int(-kk), Scalar::from_int(-2));
    LadderFamily::new(
        format!("principal(l={l}, k={k})"),
        IndexSet::All,
        k,
        Orientation::FRaises,
        raise,
        lower,
        weight,
    )
}

/// Principal series with spectral parameter `l ≠ 0` and parity `k`, on the
/// basis `e_p = z^{p+k/2}`:
///
/// `raise(p) = t(p + (k+1)/2) - l/2`, `lower(p) = t(1/2 - p - k/2) - l/2`,
/// `weight(p) = -2p - k`.
pub fn principal_family(l: &GaussRational, k: u8) -> Result<LadderFamily> {
    if l.is_zero() {
        return Err(Error::domain(
            "principal family needs l != 0; use the rees_lambda0 family for l = 0",
        ));
    }
    principal_family_unchecked(l, k)
}

/// Discrete family of lowest K-type `±(n+1)` on `m ≥ 0`, basis `v_m = E^m δ`
/// (holomorphic) or `F^m δ` (antiholomorphic). The stepping generator has
/// coefficient 1 and the other `-t² m (n + m)`.
pub fn discrete_family(n: u32, sign: Sign) -> LadderFamily {
    let n64 = i64::from(n);
    let t2 = Scalar::t().pow(2);
    let lower = CoeffRule::Poly(PPoly::new(vec![
        Scalar::zero(),
        &t2 * &Scalar::from_int(-n64),
        -&t2,
    ]));
    let s = sign.signum();
    let orientation = match sign {
        Sign::Plus => Orientation::ERaises,
        Sign::Minus => Orientation::FRaises,
    };
    LadderFamily::new(
        format!("discrete(n={n}, {sign})"),
        IndexSet::AtLeast(0),
        0,
        orientation,
        CoeffRule::constant(Scalar::one()),
        lower,
        CoeffRule::affine(Scalar::from_int(s * (n64 + 1)), Scalar::from_int(2 * s)),
    )
    .expect("discrete family is well formed")
}

/// The Rees family of the `l = 0` principal series in the basis
/// `w_p = t^{d(p)} e_p`, with `d(p) = |p|` for `k = 0` and
/// `d(p) = max(p, -p-1)` for `k = 1`.
pub fn rees_lambda0_family(k: u8) -> Result<LadderFamily> {
    check_k(k)?;
    let c = Scalar::from_int;
    let t2 = Scalar::t().pow(2);
    let (raise, lower) = if k == 0 {
        let half = Scalar::ratio(1, 2);
        (
            vec![
                (IndexSet::AtLeast(0), PPoly::affine(half.clone(), c(1))),
                (IndexSet::AtMost(-1), PPoly::affine(&half * &t2, t2.clone())),
            ],
            vec![
                (IndexSet::AtMost(0), PPoly::affine(half.clone(), c(-1))),
                (IndexSet::AtLeast(1), PPoly::affine(&half * &t2, -&t2)),
            ],
        )
    } else {
        (
            vec![
                (IndexSet::AtLeast(0), PPoly::affine(c(1), c(1))),
                (IndexSet::AtMost(-1), PPoly::affine(t2.clone(), t2.clone())),
            ],
            vec![
                (IndexSet::AtMost(-1), PPoly::affine(c(0), c(-1))),
                (IndexSet::AtLeast(0), PPoly::affine(c(0), -&t2)),
            ],
        )
    };
    LadderFamily::new(
        format!("rees_lambda0(k={k})"),
        IndexSet::All,
        k,
        Orientation::FRaises,
        CoeffRule::Piecewise(raise),
        CoeffRule::Piecewise(lower),
        CoeffRule::affine(c(-i64::from(k)), c(-2)),
    )
}

/// Indices of the minimal K-types: `z^0` for `k = 0`, `z^{±1/2}` for `k = 1`.
pub fn minimal_ktype_seeds(k: u8) -> BTreeSet<i64> {
    if k == 0 {
        [0].into()
    } else {
        [-1, 0].into()
    }
}

/// The principal rules together with the minimal-K-type seeds that generate
/// the deformation family.
pub fn minimal_ktype_family(l: &GaussRational, k: u8) -> Result<(LadderFamily, BTreeSet<i64>)> {
    let fam = principal_family(l, k)?.with_label(format!("minimal_ktype(l={l}, k={k})"));
    Ok((fam, minimal_ktype_seeds(k)))
}

/// Substitutes `t = at` in every coefficient rule.
pub fn specialize(fam: &LadderFamily, at: &GaussRational) -> Result<LadderFamily> {
    fam.specialize(at)
}

/// What the minimal K-types generate after specializing at `t = τ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpecializationKind {
    FiniteDimensional { #[serde(serialize_with = "crate::text::display")] dim: u64 },
    FullPrincipalSeries,
}

/// The finite branch occurs exactly when `d = l/τ` is a positive integer
/// with `d + k` odd.
pub fn classify_specialization(l: &GaussRational, k: u8, tau: &GaussRational) -> Result<SpecializationKind> {
    check_k(k)?;
    let d = l
        .checked_div(tau)
        .ok_or_else(|| Error::domain("specialization point t = 0 has no l/t"))?;
    if d.is_positive_integer() {
        let d = d.re().to_integer();
        if (d.clone() + u32::from(k)).is_odd() {
            let dim = u64::try_from(d).map_err(|_| Error::domain("dimension too large"))?;
            return Ok(SpecializationKind::FiniteDimensional { dim });
        }
    }
    Ok(SpecializationKind::FullPrincipalSeries)
}

/// Index range of the finite-dimensional module of dimension `dim`:
/// `[(1 - k - dim)/2, (dim - k - 1)/2]`.
pub fn finite_window(dim: u64, k: u8) -> Window {
    let d = dim as i64;
    let k = i64::from(k);
    Window::new((1 - k - d) / 2, (d - k - 1) / 2)
}

/// The finite-dimensional module of dimension `dim` at `t = 1`, as the
/// principal rules restricted to their reachable interval.
pub fn finite_dim_module(dim: u32, k: u8) -> Result<LadderFamily> {
    check_finite_parity(dim, k)?;
    let w = finite_window(u64::from(dim), k);
    let fam = principal_family(&GaussRational::from_int(i64::from(dim)), k)?
        .specialize(&GaussRational::one())?;
    Ok(fam
        .restrict(IndexSet::interval(w.lo, w.hi)?)?
        .with_label(format!("finite_dim(dim={dim}, k={k})")))
}

/// A raise or lower coefficient that vanishes at a rational `t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RationalZero {
    pub rule: &'static str,
    #[serde(serialize_with = "crate::text::display")]
    pub index: i64,
    pub at: GaussRational,
}

/// Rational values of `t` at which some raise/lower coefficient in the
/// window vanishes.
pub fn rational_coefficient_zeros(fam: &LadderFamily, window: &Window) -> Vec<RationalZero> {
    let region = fam.indices().clip(window);
    let mut out = Vec::new();
    for p in region.iter() {
        for (rule, c) in [("raise", fam.raise(p)), ("lower", fam.lower(p))] {
            if c.is_zero() {
                continue;
            }
            out.extend(c.numerator().rational_roots().into_iter().map(|r| RationalZero {
                rule,
                index: p,
                at: GaussRational::from(r),
            }));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ladder::{apply, Generator, ModuleElement};

    fn g(n: i64) -> GaussRational {
        GaussRational::from_int(n)
    }

    #[test]
    fn principal_coefficients() {
        let fam = principal_family(&g(3), 0).unwrap();
        assert_eq!(fam.raise(0), &half_t(1) - &Scalar::ratio(3, 2));
        let at1 = fam.specialize(&g(1)).unwrap();
        assert_eq!(at1.raise(0), Scalar::from_int(-1));
        assert_eq!(at1.lower(0), Scalar::from_int(-1));
        let at0 = fam.specialize(&g(0)).unwrap();
        for p in -5..=5 {
            assert_eq!(at0.lower(p), Scalar::ratio(-3, 2));
            assert_eq!(at0.raise(p), Scalar::ratio(-3, 2));
        }
        assert!(fam.weight(0).is_zero());
        assert!(matches!(principal_family(&g(0), 0), Err(Error::Domain(_))));
    }

    #[test]
    fn discrete_actions() {
        let d0 = discrete_family(0, Sign::Plus);
        let v0 = ModuleElement::basis(0);
        assert_eq!(apply(&d0, Generator::H, &v0).unwrap(), v0);
        assert!(apply(&d0, Generator::F, &v0).unwrap().is_zero());
        let d1 = discrete_family(1, Sign::Plus);
        let fv1 = apply(&d1, Generator::F, &ModuleElement::basis(1)).unwrap();
        assert_eq!(fv1, ModuleElement::term(0, &Scalar::t().pow(2) * &Scalar::from_int(-2)));
    }

    #[test]
    fn rees_coefficients_at_zero() {
        let r0 = rees_lambda0_family(0).unwrap().specialize(&g(0)).unwrap();
        assert_eq!(r0.raise(0), Scalar::ratio(1, 2));
        assert!(r0.lower(1).is_zero());
        for p in -6..0 {
            assert!(r0.raise(p).is_zero());
        }
        let r1 = rees_lambda0_family(1).unwrap();
        assert!(r1.raise(-1).is_zero());
        assert!(r1.lower(0).is_zero());
    }

    #[test]
    fn specialization_classes() {
        use SpecializationKind::*;
        let c = |l: i64, k, t: i64| classify_specialization(&g(l), k, &g(t)).unwrap();
        assert_eq!(c(2, 1, 1), FiniteDimensional { dim: 2 });
        assert_eq!(c(3, 0, 1), FiniteDimensional { dim: 3 });
        assert_eq!(c(2, 1, 2), FullPrincipalSeries);
        assert_eq!(c(2, 0, 2), FiniteDimensional { dim: 1 });
        assert_eq!(c(-3, 0, 1), FullPrincipalSeries);
        assert_eq!(finite_window(3, 0), Window::new(-1, 1));
        assert_eq!(finite_window(2, 1), Window::new(-1, 0));
        assert!(classify_specialization(&g(1), 0, &g(0)).is_err());
    }

    #[test]
    fn finite_dim_module_is_closed() {
        let m = finite_dim_module(4, 1).unwrap();
        assert_eq!(m.indices(), IndexSet::Interval(-2, 1));
        assert!(finite_dim_module(4, 0).is_err());
    }

    #[test]
    fn spec_text() {
        let s = FamilySpec::Discrete { n: 2, sign: Sign::Minus };
        assert_eq!(s.to_string(), "discrete n=2 sign=-");
        let p = FamilySpec::Principal { l: GaussRational::complex((0, 1), (2, 1)), k: 1 };
        assert_eq!(p.to_string(), "principal l=2*i k=1");
    }
}
