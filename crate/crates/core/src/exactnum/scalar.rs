use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{GaussRational, TPoly};
use crate::error::{Error, Result};

/// A rational function `num(t) / den(t)` in reduced form.
///
/// Invariants: `den` is monic and nonzero, `gcd(num, den) = 1`, and a zero
/// numerator forces `den = 1`. The representation is therefore unique and
/// derived equality decides equality of rational functions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    num: TPoly,
    den: TPoly,
}

impl Scalar {
    /// Reduces `num / den` to canonical form.
    pub fn normalize(num: TPoly, den: TPoly) -> Result<Scalar> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Scalar::zero());
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g), den.exact_div(&g))
        };
        Ok(Scalar::from_coprime(num, den))
    }

    /// Builds from a coprime pair, only fixing the leading coefficient.
    fn from_coprime(num: TPoly, den: TPoly) -> Scalar {
        let lc = den.leading().expect("nonzero denominator").clone();
        if lc.is_one() {
            Scalar { num, den }
        } else {
            let inv = lc.inv().unwrap();
            Scalar {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn from_poly(num: TPoly) -> Scalar {
        Scalar {
            num,
            den: TPoly::one(),
        }
    }

    pub fn constant(c: GaussRational) -> Scalar {
        Scalar::from_poly(TPoly::constant(c))
    }

    pub fn from_int(n: i64) -> Scalar {
        Scalar::constant(GaussRational::from_int(n))
    }

    pub fn ratio(num: i64, den: i64) -> Scalar {
        Scalar::constant(GaussRational::ratio(num, den))
    }

    /// The contraction parameter `t` itself.
    pub fn t() -> Scalar {
        Scalar::from_poly(TPoly::t())
    }

    pub fn numerator(&self) -> &TPoly {
        &self.num
    }

    pub fn denominator(&self) -> &TPoly {
        &self.den
    }

    /// The value when this is a constant function of `t`.
    pub fn as_constant(&self) -> Option<GaussRational> {
        (self.num.is_constant() && self.den.is_constant()).then(|| self.num.constant_term())
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.num.is_zero() {
            return None;
        }
        Some(Scalar::from_coprime(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Option<Scalar> {
        rhs.inv().map(|r| self * &r)
    }

    pub fn pow(&self, exp: u32) -> Scalar {
        let mut acc = Scalar::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Value at `t = at`.
    pub fn eval_at(&self, at: &GaussRational) -> Result<GaussRational> {
        let d = self.den.eval(at);
        if d.is_zero() {
            return Err(Error::Pole { at: Box::new(at.clone()) });
        }
        Ok(&self.num.eval(at) / &d)
    }

    /// The `t → 0` limit. Since the form is reduced, a vanishing denominator
    /// at zero means a genuine pole and the limit is not finite.
    pub fn limit_at_zero(&self) -> Result<GaussRational> {
        let d = self.den.constant_term();
        if d.is_zero() {
            return Err(Error::PoleAtZero);
        }
        Ok(&self.num.constant_term() / &d)
    }

    /// Substitutes `t ↦ at` and re-embeds the value as a constant.
    pub fn specialize(&self, at: &GaussRational) -> Result<Scalar> {
        self.eval_at(at).map(Scalar::constant)
    }
}

impl From<GaussRational> for Scalar {
    fn from(c: GaussRational) -> Self {
        Scalar::constant(c)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar::from_poly(TPoly::zero())
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::from_poly(TPoly::one())
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return Scalar::from_poly(&self.num + &rhs.num);
        }
        // Henrici: only the shared part of the denominators can cancel.
        let g = self.den.gcd(&rhs.den);
        if g.is_one() {
            let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
            if num.is_zero() {
                return Scalar::zero();
            }
            return Scalar::from_coprime(num, &self.den * &rhs.den);
        }
        let b = self.den.exact_div(&g);
        let d = rhs.den.exact_div(&g);
        let num = &(&self.num * &d) + &(&rhs.num * &b);
        if num.is_zero() {
            return Scalar::zero();
        }
        let g2 = num.gcd(&g);
        let (num, den) = if g2.is_one() {
            (num, &(&b * &d) * &g)
        } else {
            (num.exact_div(&g2), &(&b * &d) * &g.exact_div(&g2))
        };
        Scalar::from_coprime(num, den)
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.is_zero() || rhs.is_zero() {
            return Scalar::zero();
        }
        // Cross-cancel so the product of reduced fractions stays reduced.
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let cancel = |p: &TPoly, g: &TPoly| if g.is_one() { p.clone() } else { p.exact_div(g) };
        let num = &cancel(&self.num, &g1) * &cancel(&rhs.num, &g2);
        let den = &cancel(&self.den, &g2) * &cancel(&rhs.den, &g1);
        Scalar::from_coprime(num, den)
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    /// Panics when `rhs` is zero; see [`Scalar::checked_div`].
    fn div(self, rhs: &Scalar) -> Scalar {
        self.checked_div(rhs).expect("division of a Scalar by zero")
    }
}

macro_rules! forward_owned {
    ($($trait:ident $method:ident),*) => {$(
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl<'a> $trait<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul, Div div);

/// `num` alone when the denominator is 1, otherwise `(num)/(den)`.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Serialized as its canonical text form.
impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
