mod common;

use std::collections::BTreeSet;

use common::*;
use contraction_core::families::{minimal_ktype_family, specialize};
use contraction_core::intertwine::{
    alpha_limits, apply_intertwiner, composition_defect, composition_defect_at,
    equivariance_defect, equivariance_defect_of, finite_rank_image, AlphaSequence, PointValue,
};
use contraction_core::ladder::generated_submodule;
use contraction_core::{Error, GaussRational, ModuleElement, Scalar, Window};
use num_traits::{One, Zero};

/// `α_p(l/τ)` by walking the t = 1 recursion
/// `α_p = (2p+k-L-1)/(2p+k+L-1) · α_{p-1}` with `L = l/τ`, upward for
/// `p > 0` and downward for `p < 0`. `None` on a zero denominator.
fn recursion_oracle(l: &GaussRational, k: u8, p: i64, tau: &GaussRational) -> Option<GaussRational> {
    let big_l = l / tau;
    let k = i64::from(k);
    let ratio = |p: i64| {
        let num = &g(2 * p + k - 1) - &big_l;
        let den = &g(2 * p + k - 1) + &big_l;
        (num, den)
    };
    let mut a = GaussRational::one();
    if p > 0 {
        for j in 1..=p {
            let (num, den) = ratio(j);
            a = (&a * &num).checked_div(&den)?;
        }
    } else {
        // α_{j-1} = α_j · den(j)/num(j)
        for j in (p + 1..=0).rev() {
            let (num, den) = ratio(j);
            a = (&a * &den).checked_div(&num)?;
        }
    }
    Some(a)
}

#[test]
fn closed_products_match_the_recursion() {
    let taus = [g(1), q(1, 2), g(3), gr("1+i")];
    for l in imaginary_grid().into_iter().chain([g(3), q(5, 2)]) {
        for k in 0..=1 {
            let seq = AlphaSequence::new(&l, k, &Window::radius(12)).unwrap();
            assert!(seq.recursion_violations().unwrap().is_empty());
            for tau in &taus {
                for p in -12..=12 {
                    match recursion_oracle(&l, k, p, tau) {
                        Some(want) => {
                            if let Ok(got) = seq.at(p, tau) {
                                assert_eq!(got, want, "l={l} k={k} p={p} t={tau}");
                            }
                        }
                        None => assert!(seq.at(p, tau).is_err() || seq.at(p, tau).unwrap().is_zero()),
                    }
                }
            }
        }
    }
}

#[test]
fn seam_at_zero_and_minus_one() {
    for l in imaginary_grid() {
        for k in 0..=1 {
            let seq = AlphaSequence::new(&l, k, &Window::new(-2, 1)).unwrap();
            let c = i64::from(k) - 1;
            let ratio = Scalar::normalize(
                contraction_core::TPoly::from_coeffs(vec![-&l, g(c)]),
                contraction_core::TPoly::from_coeffs(vec![l.clone(), g(c)]),
            )
            .unwrap();
            assert_eq!(seq.get(0).unwrap(), &(&ratio * seq.get(-1).unwrap()));
        }
    }
}

#[test]
fn documented_alpha_values() {
    let seq = AlphaSequence::new(&g(3), 0, &Window::radius(3)).unwrap();
    assert_eq!(seq.at(1, &g(1)).unwrap(), q(-1, 2));
    assert!(seq.at(2, &g(1)).unwrap().is_zero());
    let seq = AlphaSequence::new(&gr("2i"), 0, &Window::radius(3)).unwrap();
    let a1 = seq.at(1, &g(1)).unwrap();
    assert_eq!(a1, gr("-3/5-4/5i"));
    assert!(a1.norm_sqr() == num_rational::BigRational::one());
    for l in imaginary_grid() {
        for k in 0..=1 {
            assert!(AlphaSequence::new(&l, k, &Window::radius(0)).unwrap().get(0).unwrap().is_one());
        }
    }
}

#[test]
fn intertwiner_application() {
    let seq = AlphaSequence::new(&g(3), 0, &Window::radius(3)).unwrap();
    let one = GaussRational::one();
    let image = apply_intertwiner(&seq, &ModuleElement::basis(2)).unwrap();
    assert!(specialize_element(&image, &one).is_zero());
    assert_eq!(apply_intertwiner(&seq, &ModuleElement::basis(0)).unwrap(), ModuleElement::basis(0));
    let seq = AlphaSequence::new(&gr("2i"), 0, &Window::radius(3)).unwrap();
    let image = apply_intertwiner(&seq, &ModuleElement::basis(1)).unwrap();
    assert_eq!(image.coefficient(1).eval_at(&one).unwrap(), gr("-3/5-4/5i"));
    assert!(matches!(
        apply_intertwiner(&seq, &ModuleElement::basis(9)),
        Err(Error::Domain(_))
    ));
}

fn specialize_element(e: &ModuleElement, at: &GaussRational) -> ModuleElement {
    e.terms().map(|(p, c)| (p, c.specialize(at).unwrap())).collect()
}

#[test]
fn equivariance_holds_symbolically() {
    let w = Window::radius(25);
    for l in imaginary_grid().into_iter().chain([q(5, 2), q(-7, 3)]) {
        for k in 0..=1 {
            let d = equivariance_defect(&l, k, &w).unwrap();
            assert!(d.is_empty(), "l={l} k={k}: {d:?}");
        }
    }
    assert!(equivariance_defect(&g(3), 1, &Window::radius(10)).unwrap().is_empty());
    assert!(equivariance_defect(&g(0), 0, &Window::radius(5)).unwrap().is_empty());
}

#[test]
fn perturbed_alpha_breaks_equivariance() {
    let l = gr("2i");
    let seq = AlphaSequence::new(&l, 0, &Window::radius(6))
        .unwrap()
        .with_value(1, Scalar::from_int(7))
        .unwrap();
    let d = equivariance_defect_of(&seq, &Window::radius(5)).unwrap();
    assert!(!d.is_empty());
    assert!(d.iter().all(|x| (0..=2).contains(&x.index)));
    assert_eq!(seq.recursion_violations().unwrap(), vec![1, 2]);
}

#[test]
fn composition_is_identity() {
    for l in imaginary_grid().into_iter().chain([g(3), q(5, 2)]) {
        for k in 0..=1 {
            assert!(composition_defect(&l, k, &Window::radius(25)).unwrap().is_empty());
        }
    }
    let pts = composition_defect_at(&g(3), 0, &Window::radius(3), &g(1)).unwrap();
    let p2 = pts.iter().find(|x| x.index == 2).unwrap();
    assert_eq!(p2.plus, PointValue::Zero);
    assert_eq!(p2.minus, PointValue::Pole);
    assert_eq!(p2.residual, Some(g(-1)));
    let p0 = pts.iter().find(|x| x.index == 0).unwrap();
    assert_eq!(p0.residual, Some(GaussRational::zero()));
    let pts = composition_defect_at(&gr("2i"), 1, &Window::radius(10), &g(1)).unwrap();
    assert!(pts.iter().all(|x| !x.singular && x.residual == Some(GaussRational::zero())));
}

#[test]
fn limits_alternate_in_sign() {
    let w = Window::radius(25);
    for l in imaginary_grid().into_iter().chain([g(3), q(5, 2)]) {
        for k in 0..=1 {
            let lim = alpha_limits(&l, k, &w).unwrap();
            for p in -25..=25i64 {
                let want = if p.rem_euclid(2) == 0 { g(1) } else { g(-1) };
                assert_eq!(lim[&p], want, "l={l} k={k} p={p}");
            }
        }
    }
    let lim = alpha_limits(&g(0), 1, &w).unwrap();
    assert!(lim.values().all(|v| v.is_one()));
}

#[test]
fn finite_rank_images_match_the_finite_modules() {
    assert_eq!(finite_rank_image(3, 0, &Window::radius(10)).unwrap(), [-1, 0, 1].into());
    assert_eq!(finite_rank_image(1, 0, &Window::radius(10)).unwrap(), [0].into());
    assert_eq!(finite_rank_image(2, 1, &Window::radius(10)).unwrap().len(), 2);
    assert!(matches!(finite_rank_image(2, 0, &Window::radius(10)), Err(Error::Domain(_))));
    let w = Window::radius(25);
    for l in 1..=8i64 {
        let k = if l % 2 == 1 { 0 } else { 1 };
        let image = finite_rank_image(l, k, &w).unwrap();
        assert_eq!(image.len() as i64, l);
        let (fam, seeds) = minimal_ktype_family(&g(l), k).unwrap();
        let at1 = specialize(&fam, &g(1)).unwrap();
        assert_eq!(generated_submodule(&at1, &seeds, &w), image);
        let weights: BTreeSet<i64> = image.iter().map(|p| -2 * p - i64::from(k)).collect();
        assert_eq!(weights, (0..l).map(|j| 1 - l + 2 * j).collect());
    }
}
