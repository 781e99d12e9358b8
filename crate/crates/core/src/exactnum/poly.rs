use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::GaussRational;

/// Dense univariate polynomial in `t` with Gaussian-rational coefficients,
/// stored lowest degree first. Trailing zeros are always trimmed, so the
/// zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct TPoly {
    coeffs: Vec<GaussRational>,
}

impl TPoly {
    pub fn from_coeffs(mut coeffs: Vec<GaussRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        TPoly { coeffs }
    }

    pub fn constant(c: GaussRational) -> Self {
        TPoly::from_coeffs(vec![c])
    }

    /// The monomial `t`.
    pub fn t() -> Self {
        TPoly::from_coeffs(vec![GaussRational::zero(), GaussRational::one()])
    }

    pub fn monomial(c: GaussRational, degree: usize) -> Self {
        let mut coeffs = vec![GaussRational::zero(); degree];
        coeffs.push(c);
        TPoly::from_coeffs(coeffs)
    }

    pub fn coeffs(&self) -> &[GaussRational] {
        &self.coeffs
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&GaussRational> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn constant_term(&self) -> GaussRational {
        self.coeffs.first().cloned().unwrap_or_else(GaussRational::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn scale(&self, c: &GaussRational) -> Self {
        if c.is_zero() {
            return TPoly::zero();
        }
        TPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Divides through by the leading coefficient. The zero polynomial is
    /// returned unchanged.
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(lc) if !lc.is_one() => self.scale(&lc.inv().expect("trimmed leading coefficient")),
            _ => self.clone(),
        }
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &GaussRational) -> GaussRational {
        let mut acc = GaussRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// Euclidean division over the coefficient field. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &TPoly) -> (TPoly, TPoly) {
        let d_deg = divisor.degree().expect("polynomial division by zero");
        let Some(mut r_deg) = self.degree() else {
            return (TPoly::zero(), TPoly::zero());
        };
        if r_deg < d_deg {
            return (TPoly::zero(), self.clone());
        }
        let lc_inv = divisor.leading().unwrap().inv().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![GaussRational::zero(); r_deg - d_deg + 1];
        loop {
            let factor = &rem[r_deg] * &lc_inv;
            let shift = r_deg - d_deg;
            if !factor.is_zero() {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    let sub = &factor * dc;
                    rem[shift + j] -= &sub;
                }
                quot[shift] = factor;
            }
            if r_deg == d_deg {
                break;
            }
            r_deg -= 1;
        }
        rem.truncate(d_deg);
        (TPoly::from_coeffs(quot), TPoly::from_coeffs(rem))
    }

    /// Exact quotient; callers guarantee divisibility.
    pub fn exact_div(&self, divisor: &TPoly) -> TPoly {
        let (q, r) = self.div_rem(divisor);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic gcd. `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &TPoly) -> TPoly {
        if self.degree().unwrap_or(0) > 0
            && other.degree().unwrap_or(0) > 0
            && super::modp::certainly_coprime(&self.coeffs, &other.coeffs)
        {
            return TPoly::one();
        }
        let mut a = self.monic();
        let mut b = other.monic();
        while !b.is_zero() {
            if b.degree() == Some(0) {
                return TPoly::one();
            }
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a
    }

    /// Real rational numbers `r` with `self(r) = 0`, sorted and deduplicated.
    ///
    /// A real root must annihilate both the real-part and imaginary-part
    /// polynomials, so the search runs on their gcd over Q with the rational
    /// root theorem. The zero polynomial has no well-defined root set and
    /// returns an empty list.
    pub fn rational_roots(&self) -> Vec<BigRational> {
        if self.is_zero() {
            return Vec::new();
        }
        let re = QPoly::from_coeffs(self.coeffs.iter().map(|c| c.re().clone()).collect());
        let im = QPoly::from_coeffs(self.coeffs.iter().map(|c| c.im().clone()).collect());
        let common = re.gcd(&im);
        common.rational_roots()
    }
}

impl Zero for TPoly {
    fn zero() -> Self {
        TPoly { coeffs: Vec::new() }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for TPoly {
    fn one() -> Self {
        TPoly::constant(GaussRational::one())
    }
}

impl<'a> Add<&'a TPoly> for &'a TPoly {
    type Output = TPoly;
    fn add(self, rhs: &TPoly) -> TPoly {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (c, s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c += s;
        }
        TPoly::from_coeffs(coeffs)
    }
}

impl<'a> Sub<&'a TPoly> for &'a TPoly {
    type Output = TPoly;
    fn sub(self, rhs: &TPoly) -> TPoly {
        self + &(-rhs)
    }
}

impl Neg for &TPoly {
    type Output = TPoly;
    fn neg(self) -> TPoly {
        TPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl<'a> Mul<&'a TPoly> for &'a TPoly {
    type Output = TPoly;
    fn mul(self, rhs: &TPoly) -> TPoly {
        if self.is_zero() || rhs.is_zero() {
            return TPoly::zero();
        }
        // Multiply over Z[i] with a common denominator so each output
        // coefficient is reduced once instead of once per partial product.
        let (a, da) = integral(&self.coeffs);
        let (b, db) = integral(&rhs.coeffs);
        let mut re = vec![BigInt::zero(); a.len() + b.len() - 1];
        let mut im = re.clone();
        for (i, (ar, ai)) in a.iter().enumerate() {
            if ar.is_zero() && ai.is_zero() {
                continue;
            }
            for (j, (br, bi)) in b.iter().enumerate() {
                re[i + j] += ar * br - ai * bi;
                im[i + j] += ar * bi + ai * br;
            }
        }
        let den = da * db;
        TPoly::from_coeffs(
            re.into_iter()
                .zip(im)
                .map(|(r, i)| {
                    GaussRational::new(BigRational::new(r, den.clone()), BigRational::new(i, den.clone()))
                })
                .collect(),
        )
    }
}

/// Coefficients as Gaussian integers over one common denominator.
fn integral(coeffs: &[GaussRational]) -> (Vec<(BigInt, BigInt)>, BigInt) {
    let den = coeffs.iter().fold(BigInt::one(), |acc, c| {
        acc.lcm(c.re().denom()).lcm(c.im().denom())
    });
    let lift = |r: &BigRational| r.numer() * (&den / r.denom());
    let out = coeffs.iter().map(|c| (lift(c.re()), lift(c.im()))).collect();
    (out, den)
}

macro_rules! forward_owned {
    ($($trait:ident $method:ident),*) => {$(
        impl $trait<TPoly> for TPoly {
            type Output = TPoly;
            fn $method(self, rhs: TPoly) -> TPoly {
                (&self).$method(&rhs)
            }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for TPoly {
    type Output = TPoly;
    fn neg(self) -> TPoly {
        -&self
    }
}

fn write_coefficient(f: &mut fmt::Formatter<'_>, c: &GaussRational) -> fmt::Result {
    if !c.re().is_zero() && !c.im().is_zero() {
        write!(f, "({c})")
    } else {
        write!(f, "{c}")
    }
}

/// Renders highest degree first, e.g. `1/2*t - 3/2` or `(1+2*i)*t^2 + 1`.
impl fmt::Display for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        if self.coeffs.len() == 1 {
            return write!(f, "{}", self.coeffs[0]);
        }
        let mut first = true;
        for (deg, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let complex = !c.re().is_zero() && !c.im().is_zero();
            let negative = !complex && (c.re().is_negative() || c.im().is_negative());
            let magnitude = if negative { -c } else { c.clone() };
            if first {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            first = false;
            if deg == 0 {
                write_coefficient(f, &magnitude)?;
                continue;
            }
            if !magnitude.is_one() {
                write_coefficient(f, &magnitude)?;
                f.write_str("*")?;
            }
            if deg == 1 {
                f.write_str("t")?;
            } else {
                write!(f, "t^{deg}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Rational-coefficient helper used only for root finding.
struct QPoly(Vec<BigRational>);

impl QPoly {
    fn from_coeffs(mut c: Vec<BigRational>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        QPoly(c)
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn rem(&self, d: &QPoly) -> QPoly {
        let mut r = self.0.clone();
        let dl = d.0.len();
        let lc = d.0.last().unwrap().clone();
        while r.len() >= dl {
            let factor = r.last().unwrap() / &lc;
            let shift = r.len() - dl;
            for (j, dc) in d.0.iter().enumerate() {
                r[shift + j] -= &factor * dc;
            }
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        QPoly(r)
    }

    fn gcd(&self, other: &QPoly) -> QPoly {
        if self.is_zero() {
            return QPoly(other.0.clone());
        }
        let mut a = QPoly(self.0.clone());
        let mut b = QPoly(other.0.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a
    }

    fn eval(&self, x: &BigRational) -> BigRational {
        self.0
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    fn rational_roots(&self) -> Vec<BigRational> {
        if self.0.len() <= 1 {
            return Vec::new();
        }
        // Strip the root at zero, then clear denominators.
        let mut roots = Vec::new();
        let mut coeffs: &[BigRational] = &self.0;
        if coeffs[0].is_zero() {
            roots.push(BigRational::zero());
            let nz = coeffs.iter().position(|c| !c.is_zero()).unwrap();
            coeffs = &coeffs[nz..];
        }
        if coeffs.len() > 1 {
            let lcm = coeffs
                .iter()
                .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
            let ints: Vec<BigInt> = coeffs
                .iter()
                .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
                .collect();
            let poly = QPoly(coeffs.to_vec());
            let p_divs = divisors(&ints[0].abs());
            let q_divs = divisors(&ints.last().unwrap().abs());
            for p in &p_divs {
                for q in &q_divs {
                    for sign in [1, -1] {
                        let cand = BigRational::new(p * sign, q.clone());
                        if poly.eval(&cand).is_zero() {
                            roots.push(cand);
                        }
                    }
                }
            }
        }
        roots.sort();
        roots.dedup();
        roots
    }
}

/// Positive divisors by trial division. Coefficients in this engine are
/// small; anything beyond `u64` is not searched.
fn divisors(n: &BigInt) -> Vec<BigInt> {
    let Some(n) = n.to_u64() else {
        return vec![BigInt::one()];
    };
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d != n / d {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    out
}
