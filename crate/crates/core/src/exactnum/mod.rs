//! Exact arithmetic: Gaussian rationals, polynomials in the contraction
//! parameter `t` over them, and reduced rational functions in `t`.
//!
//! Every identity the engine checks is an exact rational identity, so there
//! is no floating point and no tolerance anywhere in this module.

mod gauss;
mod modp;
mod poly;
mod scalar;

pub use gauss::GaussRational;
pub use poly::TPoly;
pub use scalar::Scalar;

#[cfg(test)]
mod props {
    use super::*;
    use num_traits::{One, Zero};
    use proptest::prelude::*;

    fn gauss() -> impl Strategy<Value = GaussRational> {
        (-6i64..=6, 1i64..=4, -6i64..=6, 1i64..=4)
            .prop_map(|(a, b, c, d)| GaussRational::complex((a, b), (c, d)))
    }

    fn tpoly() -> impl Strategy<Value = TPoly> {
        prop::collection::vec(gauss(), 0..4).prop_map(TPoly::from_coeffs)
    }

    fn nonzero_tpoly() -> impl Strategy<Value = TPoly> {
        tpoly().prop_filter("nonzero", |p| !p.is_zero())
    }

    fn scalar() -> impl Strategy<Value = Scalar> {
        (tpoly(), nonzero_tpoly()).prop_map(|(n, d)| Scalar::normalize(n, d).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn gauss_field_laws(a in gauss(), b in gauss(), c in gauss()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
            if !a.is_zero() {
                prop_assert!((&a * &a.inv().unwrap()).is_one());
            }
        }

        #[test]
        fn canonical_form_ignores_common_factor(
            a in tpoly(), b in nonzero_tpoly(), c in nonzero_tpoly()
        ) {
            let direct = Scalar::normalize(a.clone(), b.clone()).unwrap();
            let scaled = Scalar::normalize(&a * &c, &b * &c).unwrap();
            prop_assert_eq!(direct, scaled);
        }

        #[test]
        fn scalar_field_laws(x in scalar(), y in scalar(), z in scalar()) {
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
            prop_assert_eq!(&(&x + &y) * &z, &(&x * &z) + &(&y * &z));
            if !x.is_zero() {
                prop_assert!((&x * &x.inv().unwrap()).is_one());
            }
        }

        #[test]
        fn results_stay_reduced(x in scalar(), y in scalar()) {
            for s in [&x + &y, &x * &y, &x - &y] {
                prop_assert!(s.denominator().is_monic());
                prop_assert!(s.numerator().gcd(s.denominator()).is_one()
                    || s.numerator().is_zero());
            }
        }

        #[test]
        fn eval_commutes_with_arithmetic(x in scalar(), y in scalar(), tau in gauss()) {
            if let (Ok(xv), Ok(yv)) = (x.eval_at(&tau), y.eval_at(&tau)) {
                prop_assert_eq!((&x + &y).eval_at(&tau).unwrap(), &xv + &yv);
                prop_assert_eq!((&x * &y).eval_at(&tau).unwrap(), &xv * &yv);
            }
        }

        #[test]
        fn gauss_text_round_trip(a in gauss()) {
            prop_assert_eq!(a.to_string().parse::<GaussRational>().unwrap(), a);
        }
    }
}
