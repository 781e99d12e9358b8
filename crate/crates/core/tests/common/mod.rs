#![allow(dead_code)]

use contraction_core::{GaussRational, Scalar, TPoly};

pub fn g(n: i64) -> GaussRational {
    GaussRational::from_int(n)
}

pub fn q(num: i64, den: i64) -> GaussRational {
    GaussRational::ratio(num, den)
}

pub fn gr(text: &str) -> GaussRational {
    text.parse().unwrap()
}

/// `a + b·t` as a Scalar.
pub fn lin(a: GaussRational, b: GaussRational) -> Scalar {
    Scalar::from_poly(TPoly::from_coeffs(vec![a, b]))
}

/// The principal-series grid of the acceptance suite.
pub fn principal_grid() -> Vec<GaussRational> {
    ["3", "-3", "2i", "1+i", "5/2"].iter().map(|s| gr(s)).collect()
}

pub fn imaginary_grid() -> Vec<GaussRational> {
    ["i", "2i", "3/2i", "-5/3i", "1+i", "-2+1/2i"]
        .iter()
        .map(|s| gr(s))
        .collect()
}

/// Coefficient of `z^{s-1}` in `E_t z^s` and of `z^{s+1}` in `F_t z^s`, read
/// off the differential operators
/// `E_t = t(-∂ + 1/(2z)) - l/(2z)`, `F_t = t(z²∂ + z/2) - (l/2) z`
/// using `∂ z^s = s z^{s-1}`. `s = p + k/2`.
pub fn operator_oracle(l: &GaussRational, p: i64, k: u8) -> (Scalar, Scalar) {
    let s = &g(p) + &q(i64::from(k), 2);
    let half = q(1, 2);
    let minus_half_l = -(l * &half);
    // E: t·(-s) + t·(1/2) - l/2
    let e = lin(minus_half_l.clone(), &half - &s);
    // F: t·s + t·(1/2) - l/2
    let f = lin(minus_half_l, &s + &half);
    (e, f)
}
