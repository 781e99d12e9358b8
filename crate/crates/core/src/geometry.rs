//! K-orbits on the flag variety `P¹` and the orbit map into `s*`.
//!
//! `K = {diag(a, a⁻¹)}` acts on `P¹` by `z ↦ a² z` with `z = z0/z1`, so the
//! orbits are `{0}`, `{∞}` and the open orbit `C*`.

use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::GaussRational;

/// A point `[z0 : z1]` of `P¹`, stored as its canonical representative:
/// `z1 = 1` when `z1 ≠ 0`, otherwise `[1 : 0]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FlagPoint {
    z0: GaussRational,
    z1: GaussRational,
}

impl FlagPoint {
    pub fn new(z0: GaussRational, z1: GaussRational) -> Result<Self> {
        if z1.is_zero() {
            if z0.is_zero() {
                return Err(Error::domain("[0 : 0] is not a point of P^1"));
            }
            return Ok(FlagPoint::infinity());
        }
        Ok(FlagPoint {
            z0: &z0 / &z1,
            z1: GaussRational::one(),
        })
    }

    /// The affine point `[z : 1]`.
    pub fn affine(z: GaussRational) -> Self {
        FlagPoint {
            z0: z,
            z1: GaussRational::one(),
        }
    }

    pub fn zero() -> Self {
        FlagPoint::affine(GaussRational::zero())
    }

    pub fn infinity() -> Self {
        FlagPoint {
            z0: GaussRational::one(),
            z1: GaussRational::zero(),
        }
    }

    pub fn coords(&self) -> (&GaussRational, &GaussRational) {
        (&self.z0, &self.z1)
    }

    /// The affine coordinate `z0/z1`, `None` at infinity.
    pub fn z(&self) -> Option<&GaussRational> {
        (!self.z1.is_zero()).then_some(&self.z0)
    }

    /// Action of `diag(a, a⁻¹)`.
    pub fn k_act(&self, a: &GaussRational) -> Result<FlagPoint> {
        if a.is_zero() {
            return Err(Error::domain("diag(a, 1/a) needs a != 0"));
        }
        Ok(match self.z() {
            Some(z) => FlagPoint::affine(&(a * a) * z),
            None => FlagPoint::infinity(),
        })
    }
}

impl fmt::Display for FlagPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} : {}]", self.z0, self.z1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KOrbit {
    ZeroOrbit,
    InfinityOrbit,
    OpenOrbit,
}

/// Stabilizer in `K` of a point of the orbit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stabilizer {
    FullK,
    PlusMinusOne,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct OrbitInfo {
    pub orbit: KOrbit,
    pub stabilizer: Stabilizer,
    pub closed: bool,
}

pub fn k_orbit_of(pt: &FlagPoint) -> OrbitInfo {
    let closed = |orbit| OrbitInfo {
        orbit,
        stabilizer: Stabilizer::FullK,
        closed: true,
    };
    match pt.z() {
        None => closed(KOrbit::InfinityOrbit),
        Some(z) if z.is_zero() => closed(KOrbit::ZeroOrbit),
        Some(_) => OrbitInfo {
            orbit: KOrbit::OpenOrbit,
            stabilizer: Stabilizer::PlusMinusOne,
            closed: false,
        },
    }
}

/// A point of `s*` in the coordinates given by `E` and `F`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SStarPoint {
    pub e: GaussRational,
    pub f: GaussRational,
}

impl SStarPoint {
    pub fn new(e: GaussRational, f: GaussRational) -> Self {
        SStarPoint { e, f }
    }

    pub fn origin() -> Self {
        SStarPoint::new(GaussRational::zero(), GaussRational::zero())
    }

    /// Value of the invariant `EF`.
    pub fn ef(&self) -> GaussRational {
        &self.e * &self.f
    }

    pub fn on_conic(&self, c: &GaussRational) -> bool {
        self.ef() == *c
    }
}

impl fmt::Display for SStarPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(E={}, F={})", self.e, self.f)
    }
}

/// `Φ_l(z) = (-l/(2z), -lz/2)`, an isomorphism of the open orbit onto the
/// conic `EF = l²/4`.
pub fn phi_map(l: &GaussRational, z: &GaussRational) -> Result<SStarPoint> {
    if l.is_zero() {
        return Err(Error::domain("phi_map needs l != 0"));
    }
    if z.is_zero() {
        return Err(Error::domain("phi_map is defined on the open orbit, z != 0"));
    }
    let half = GaussRational::ratio(1, 2);
    let e = -(&(l * &half) / z);
    let f = -(&(l * z) * &half);
    Ok(SStarPoint::new(e, f))
}

/// `(E, F) ↦ (-E, -F)`.
pub fn lambda_involution(pt: &SStarPoint) -> SStarPoint {
    SStarPoint::new(-&pt.e, -&pt.f)
}
