//! Coprimality certificate by reduction modulo a prime of `Z[i]`.
//!
//! With `p ≡ 1 (mod 4)` and `s² ≡ -1 (mod p)`, the map `a + bi ↦ a + bs`
//! reduces `Z[i]`, localized at the prime `(p, i - s)`, onto `F_p`. A monic
//! common factor of two polynomials whose coefficients are integral there and
//! whose leading coefficients are units stays a common factor of positive
//! degree after reduction. So a constant gcd over `F_p` proves the
//! polynomials coprime over `Q(i)`. Any other outcome is inconclusive.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::GaussRational;

const P: u64 = 4_611_686_018_427_387_817;
const SQRT_MINUS_ONE: u64 = 4_490_822_397_581_186_023;

fn mul(a: u64, b: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(P)) as u64
}

fn add(a: u64, b: u64) -> u64 {
    ((u128::from(a) + u128::from(b)) % u128::from(P)) as u64
}

fn sub(a: u64, b: u64) -> u64 {
    add(a, P - b)
}

fn pow(mut base: u64, mut exp: u64) -> u64 {
    let mut acc = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul(acc, base);
        }
        base = mul(base, base);
        exp >>= 1;
    }
    acc
}

fn inv(a: u64) -> u64 {
    pow(a, P - 2)
}

fn reduce_int(n: &BigInt) -> u64 {
    n.mod_floor(&BigInt::from(P)).to_u64().expect("residue fits in u64")
}

fn reduce_rational(r: &BigRational) -> Option<u64> {
    let den = reduce_int(r.denom());
    (den != 0).then(|| mul(reduce_int(r.numer()), inv(den)))
}

fn reduce(c: &GaussRational) -> Option<u64> {
    let re = reduce_rational(c.re())?;
    let im = reduce_rational(c.im())?;
    Some(add(re, mul(im, SQRT_MINUS_ONE)))
}

/// Reduction of a nonzero polynomial; `None` if some coefficient is not
/// integral at the prime or the leading coefficient vanishes.
fn reduce_poly(coeffs: &[GaussRational]) -> Option<Vec<u64>> {
    let out: Vec<u64> = coeffs.iter().map(reduce).collect::<Option<_>>()?;
    (*out.last()? != 0).then_some(out)
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// `a mod b` over `F_p`; `b` is trimmed and nonzero.
fn rem(mut a: Vec<u64>, b: &[u64]) -> Vec<u64> {
    let lc_inv = inv(*b.last().unwrap());
    while a.len() >= b.len() {
        let factor = mul(*a.last().unwrap(), lc_inv);
        let shift = a.len() - b.len();
        for (j, &bc) in b.iter().enumerate() {
            a[shift + j] = sub(a[shift + j], mul(factor, bc));
        }
        a.pop();
        trim(&mut a);
    }
    a
}

/// True only when the two polynomials are certainly coprime.
pub(super) fn certainly_coprime(a: &[GaussRational], b: &[GaussRational]) -> bool {
    let (Some(mut x), Some(mut y)) = (reduce_poly(a), reduce_poly(b)) else {
        return false;
    };
    while !y.is_empty() {
        if y.len() == 1 {
            return true;
        }
        let r = rem(x, &y);
        x = y;
        y = r;
    }
    x.len() == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(re: i64, im: i64) -> GaussRational {
        GaussRational::complex((re, 1), (im, 1))
    }

    #[test]
    fn constants_and_roots() {
        assert_eq!(mul(SQRT_MINUS_ONE, SQRT_MINUS_ONE), P - 1);
        // (t - i) and (t + i) are coprime; (t - i) and (t - i)(t + 2) are not.
        assert!(certainly_coprime(&[g(0, -1), g(1, 0)], &[g(0, 1), g(1, 0)]));
        let prod = [g(0, -2), g(2, -1), g(1, 0)];
        assert!(!certainly_coprime(&[g(0, -1), g(1, 0)], &prod));
        assert!(!certainly_coprime(&[g(1, 0)], &[]));
    }
}
