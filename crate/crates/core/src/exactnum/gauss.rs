use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// A Gaussian rational `re + im·i` with arbitrary-precision rational parts.
///
/// Both parts are kept in lowest terms with a positive denominator (this is
/// what `BigRational` maintains), so derived equality and hashing are exact.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussRational {
    re: BigRational,
    im: BigRational,
}

impl GaussRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRational { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        GaussRational::new(BigRational::from_integer(n.into()), BigRational::zero())
    }

    /// `num / den` as a real Gaussian rational. Panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        GaussRational::new(
            BigRational::new(num.into(), den.into()),
            BigRational::zero(),
        )
    }

    /// `(re_num/re_den) + (im_num/im_den)·i`.
    pub fn complex(re: (i64, i64), im: (i64, i64)) -> Self {
        GaussRational::new(
            BigRational::new(re.0.into(), re.1.into()),
            BigRational::new(im.0.into(), im.1.into()),
        )
    }

    pub fn i() -> Self {
        GaussRational::new(BigRational::zero(), BigRational::one())
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// The value as a machine integer, when it is a real integer that fits.
    pub fn to_i64(&self) -> Option<i64> {
        if !self.is_real() || !self.re.is_integer() {
            return None;
        }
        i64::try_from(self.re.to_integer()).ok()
    }

    /// True for a real positive integer.
    pub fn is_positive_integer(&self) -> bool {
        self.is_real() && self.re.is_integer() && self.re.is_positive()
    }

    pub fn conj(&self) -> Self {
        GaussRational::new(self.re.clone(), -self.im.clone())
    }

    /// `|z|²`, always a nonnegative rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(GaussRational::new(&self.re / &n, -(&self.im / &n)))
    }

    pub fn checked_div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| self * &r)
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = GaussRational::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }
}

impl From<i64> for GaussRational {
    fn from(n: i64) -> Self {
        GaussRational::from_int(n)
    }
}

impl From<BigRational> for GaussRational {
    fn from(r: BigRational) -> Self {
        GaussRational::new(r, BigRational::zero())
    }
}

impl Zero for GaussRational {
    fn zero() -> Self {
        GaussRational::new(BigRational::zero(), BigRational::zero())
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussRational {
    fn one() -> Self {
        GaussRational::new(BigRational::one(), BigRational::zero())
    }
}

impl Neg for GaussRational {
    type Output = GaussRational;
    fn neg(self) -> Self {
        GaussRational::new(-self.re, -self.im)
    }
}

impl Neg for &GaussRational {
    type Output = GaussRational;
    fn neg(self) -> GaussRational {
        GaussRational::new(-self.re.clone(), -self.im.clone())
    }
}

impl<'a> Add<&'a GaussRational> for &'a GaussRational {
    type Output = GaussRational;
    fn add(self, rhs: &GaussRational) -> GaussRational {
        GaussRational::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl<'a> Sub<&'a GaussRational> for &'a GaussRational {
    type Output = GaussRational;
    fn sub(self, rhs: &GaussRational) -> GaussRational {
        GaussRational::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl<'a> Mul<&'a GaussRational> for &'a GaussRational {
    type Output = GaussRational;
    fn mul(self, rhs: &GaussRational) -> GaussRational {
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussRational::new(&self.re * &rhs.re, BigRational::zero());
        }
        GaussRational::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl<'a> Div<&'a GaussRational> for &'a GaussRational {
    type Output = GaussRational;
    /// Panics on division by zero; use [`GaussRational::checked_div`] otherwise.
    fn div(self, rhs: &GaussRational) -> GaussRational {
        self.checked_div(rhs)
            .expect("division of a Gaussian rational by zero")
    }
}

macro_rules! forward_owned_binop {
    ($($trait:ident $method:ident),*) => {$(
        impl $trait<GaussRational> for GaussRational {
            type Output = GaussRational;
            fn $method(self, rhs: GaussRational) -> GaussRational {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a GaussRational> for GaussRational {
            type Output = GaussRational;
            fn $method(self, rhs: &GaussRational) -> GaussRational {
                (&self).$method(rhs)
            }
        }
        impl<'a> $trait<GaussRational> for &'a GaussRational {
            type Output = GaussRational;
            fn $method(self, rhs: GaussRational) -> GaussRational {
                self.$method(&rhs)
            }
        }
    )*};
}

forward_owned_binop!(Add add, Sub sub, Mul mul, Div div);

impl AddAssign<&GaussRational> for GaussRational {
    fn add_assign(&mut self, rhs: &GaussRational) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&GaussRational> for GaussRational {
    fn sub_assign(&mut self, rhs: &GaussRational) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&GaussRational> for GaussRational {
    fn mul_assign(&mut self, rhs: &GaussRational) {
        *self = &*self * rhs;
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, r: &BigRational) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

fn write_imaginary(f: &mut fmt::Formatter<'_>, im: &BigRational) -> fmt::Result {
    if im.is_one() {
        f.write_str("i")
    } else if (-im).is_one() {
        f.write_str("-i")
    } else {
        write_rational(f, im)?;
        f.write_str("*i")
    }
}

/// Canonical text form: `a/b`, `c/d*i`, or `a/b+c/d*i` (integers drop the
/// `/1`, a unit imaginary part is just `i`). `FromStr` reads this form back
/// exactly.
impl fmt::Display for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write_rational(f, &self.re),
            (true, false) => write_imaginary(f, &self.im),
            (false, false) => {
                write_rational(f, &self.re)?;
                if !self.im.is_negative() {
                    f.write_str("+")?;
                }
                write_imaginary(f, &self.im)
            }
        }
    }
}

impl fmt::Debug for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}

/// Parses the canonical form plus the lenient spellings `2i`, `i`, `-i`,
/// `1/2+3/4i`.
impl FromStr for GaussRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::Parse(format!("not a Gaussian rational: {s:?}"));
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(bad());
        }
        // Split into signed terms at every +/- that is not the leading sign.
        let mut terms = Vec::new();
        let mut start = 0;
        for (pos, ch) in s.char_indices() {
            if pos > start && (ch == '+' || ch == '-') {
                terms.push(&s[start..pos]);
                start = pos;
            }
        }
        terms.push(&s[start..]);
        if terms.len() > 2 {
            return Err(bad());
        }
        let mut value = GaussRational::zero();
        let mut seen_re = false;
        let mut seen_im = false;
        for term in terms {
            let (negative, body) = match term.as_bytes()[0] {
                b'-' => (true, &term[1..]),
                b'+' => (false, &term[1..]),
                _ => (false, term),
            };
            let mut part = if let Some(coef) = body.strip_suffix('i') {
                if seen_im {
                    return Err(bad());
                }
                seen_im = true;
                let coef = coef.strip_suffix('*').unwrap_or(coef);
                let c = if coef.is_empty() {
                    BigRational::one()
                } else {
                    parse_rational(coef).ok_or_else(bad)?
                };
                GaussRational::new(BigRational::zero(), c)
            } else {
                if seen_re {
                    return Err(bad());
                }
                seen_re = true;
                GaussRational::from(parse_rational(body).ok_or_else(bad)?)
            };
            if negative {
                part = -part;
            }
            value += &part;
        }
        Ok(value)
    }
}

/// Serialized as its canonical text form.
impl serde::Serialize for GaussRational {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_forms() {
        assert_eq!(GaussRational::ratio(-3, 2).to_string(), "-3/2");
        assert_eq!(GaussRational::from_int(4).to_string(), "4");
        assert_eq!(GaussRational::complex((0, 1), (2, 1)).to_string(), "2*i");
        assert_eq!(
            GaussRational::complex((-3, 5), (-4, 5)).to_string(),
            "-3/5-4/5*i"
        );
        assert_eq!(GaussRational::complex((1, 2), (3, 4)).to_string(), "1/2+3/4*i");
    }

    #[test]
    fn parse_lenient_and_canonical() {
        let cases = [
            ("2i", GaussRational::complex((0, 1), (2, 1))),
            ("i", GaussRational::i()),
            ("-i", -GaussRational::i()),
            ("1+i", GaussRational::complex((1, 1), (1, 1))),
            ("-3/5-4/5*i", GaussRational::complex((-3, 5), (-4, 5))),
            ("5/2", GaussRational::ratio(5, 2)),
            ("3/2i", GaussRational::complex((0, 1), (3, 2))),
            ("1*i", GaussRational::i()),
            ("2-1*i", GaussRational::complex((2, 1), (-1, 1))),
        ];
        for (text, want) in cases {
            assert_eq!(text.parse::<GaussRational>().unwrap(), want, "{text}");
        }
        assert!("".parse::<GaussRational>().is_err());
        assert!("1/0".parse::<GaussRational>().is_err());
        assert!("1+2+3".parse::<GaussRational>().is_err());
        assert!("x".parse::<GaussRational>().is_err());
    }

    #[test]
    fn i_squared_is_minus_one() {
        let i = GaussRational::i();
        assert_eq!(&i * &i, GaussRational::from_int(-1));
    }

    #[test]
    fn inverse_of_zero_is_none() {
        assert!(GaussRational::zero().inv().is_none());
        let z = GaussRational::complex((1, 1), (2, 1));
        assert_eq!(&z * &z.inv().unwrap(), GaussRational::one());
    }
}
