mod common;

use common::*;
use contraction_core::contraction::{
    bijection_row, bijection_table, collisions, contract, irreducible_quotient, mackey_data,
    schmid_check, schmid_check_with, support, ClosedOrbit, QuotientWeights, SupportDescriptor,
};
use contraction_core::families::{discrete_family, principal_family, rees_lambda0_family, specialize};
use contraction_core::ladder::{CoeffRule, PPoly};
use contraction_core::{FamilySpec, IndexSet, Parity, Scalar, Sign, Window};
use num_traits::Zero;

fn finite(weights: &[i64]) -> QuotientWeights {
    QuotientWeights::Finite { weights: weights.to_vec() }
}

#[test]
fn principal_support_is_the_conic() {
    for l in principal_grid().into_iter().chain(imaginary_grid()) {
        for k in 0..=1 {
            let c0 = contract(&principal_family(&l, k).unwrap()).unwrap();
            let w = Window::radius(40);
            let supp = support(&c0, &w).unwrap();
            let c = &(&l * &l) * &q(1, 4);
            assert_eq!(supp, SupportDescriptor::Conic { c: c.clone() });
            assert_eq!(supp.min_closed_orbit(), ClosedOrbit::Conic { c });
            // E₀ and F₀ are bijective on the conic: no coefficient vanishes.
            assert!(w.iter().all(|p| !c0.raise(p).is_zero() && !c0.lower(p).is_zero()));
            let datum = irreducible_quotient(&c0, &supp, &w).unwrap();
            assert_eq!(datum.quotient, QuotientWeights::AllOfParity { parity: Parity::from_k(k) });
        }
    }
}

#[test]
fn discrete_support_and_minimal_k_type() {
    for n in 0..=4u32 {
        for sign in [Sign::Plus, Sign::Minus] {
            let c0 = contract(&discrete_family(n, sign)).unwrap();
            let w = Window::new(0, 40);
            let supp = support(&c0, &w).unwrap();
            let want = match sign {
                Sign::Plus => SupportDescriptor::EAxis,
                Sign::Minus => SupportDescriptor::FAxis,
            };
            assert_eq!(supp, want);
            assert_eq!(supp.min_closed_orbit(), ClosedOrbit::Origin);
            let datum = irreducible_quotient(&c0, &supp, &w).unwrap();
            let weight = sign.signum() * (i64::from(n) + 1);
            assert_eq!(datum.quotient, finite(&[weight]));
            assert_eq!(datum.label, format!("C_{weight}"));
        }
    }
}

#[test]
fn rees_even_is_axis_union_with_trivial_fiber() {
    let c0 = contract(&rees_lambda0_family(0).unwrap()).unwrap();
    let w = Window::radius(40);
    assert_eq!(support(&c0, &w).unwrap(), SupportDescriptor::AxisUnion);
    let data = mackey_data(&c0, &w).unwrap();
    assert_eq!(data.len(), 1);
    assert_eq!(data[0].quotient, finite(&[0]));
    assert_eq!(data[0].label, "C_0");
}

#[test]
fn rees_odd_gives_two_schmid_summands() {
    let c0 = contract(&rees_lambda0_family(1).unwrap()).unwrap();
    let w = Window::radius(40);
    assert_eq!(support(&c0, &w).unwrap(), SupportDescriptor::AxisUnion);
    let data = mackey_data(&c0, &w).unwrap();
    let got: Vec<_> = data.iter().map(|d| (d.support.clone(), d.quotient.clone(), d.indices)).collect();
    assert_eq!(
        got,
        vec![
            (SupportDescriptor::EAxis, finite(&[1]), IndexSet::AtMost(-1)),
            (SupportDescriptor::FAxis, finite(&[-1]), IndexSet::AtLeast(0)),
        ]
    );
}

#[test]
fn contraction_is_specialization_at_zero() {
    for l in principal_grid() {
        let fam = principal_family(&l, 1).unwrap();
        let a = contract(&fam).unwrap();
        let b = specialize(&fam, &g(0)).unwrap();
        assert_eq!(a.raise_rule(), b.raise_rule());
        assert_eq!(a.lower_rule(), b.lower_rule());
    }
}

#[test]
fn schmid_identity() {
    assert!(schmid_check().unwrap());
    let rees = rees_lambda0_family(1).unwrap();
    assert!(schmid_check_with(&rees, &Window::new(0, 10)).unwrap().holds);

    // Perturb the lower coefficient on the negative half: products change.
    let perturbed = rees
        .with_rules(
            rees.raise_rule().clone(),
            CoeffRule::Piecewise(vec![
                (IndexSet::AtMost(-1), PPoly::affine(Scalar::zero(), Scalar::from_int(-2))),
                (IndexSet::AtLeast(0), PPoly::affine(Scalar::zero(), -&Scalar::t().pow(2))),
            ]),
        )
        .unwrap();
    let out = schmid_check_with(&perturbed, &Window::new(0, 10)).unwrap();
    assert!(!out.holds);
    assert!(!out.lower_half_matches_plus);
    assert!(out.upper_half_matches_minus);

    // The even family does not split at all.
    assert!(!schmid_check_with(&rees_lambda0_family(0).unwrap(), &Window::new(0, 10)).unwrap().holds);
}

#[test]
fn bijection_rows() {
    let row = bijection_row(&FamilySpec::Discrete { n: 2, sign: Sign::Plus }).unwrap();
    assert_eq!(row.group_label, "D+_2");
    assert_eq!(row.data[0].label, "C_3");
    let row = bijection_row(&FamilySpec::ReesLambda0 { k: 0 }).unwrap();
    assert_eq!(row.group_label, "P(l=0,k=0)");
    assert_eq!(row.data[0].label, "C_0");
    let row = bijection_row(&FamilySpec::Principal { l: gr("2i"), k: 0 }).unwrap();
    assert_eq!(row.group_label, "P(l=2*i,k=0)");
    assert_eq!(row.data[0].support, SupportDescriptor::Conic { c: g(-1) });
    assert_eq!(row.data[0].parity, Parity::Even);
    let row = bijection_row(&FamilySpec::Principal { l: gr("-2i"), k: 0 }).unwrap();
    assert_eq!(row.group_label, "P(l=2*i,k=0)");
    let row = bijection_row(&FamilySpec::ReesLambda0 { k: 1 }).unwrap();
    assert!(!row.irreducible);
    assert_eq!(row.data.len(), 2);
    let row = bijection_row(&FamilySpec::MinimalKtype { l: g(3), k: 0 }).unwrap();
    assert_eq!(row.group_label, "F_2");
    let row = bijection_row(&FamilySpec::Principal { l: g(-3), k: 0 }).unwrap();
    assert!(!row.irreducible);
    assert_eq!(row.group_label, "P(l=-3,k=0)");
}

#[test]
fn bijection_is_injective_on_a_tempered_sample() {
    let mut specs = Vec::new();
    for n in 0..=3 {
        for sign in [Sign::Plus, Sign::Minus] {
            specs.push(FamilySpec::Discrete { n, sign });
        }
    }
    specs.push(FamilySpec::ReesLambda0 { k: 0 });
    specs.push(FamilySpec::ReesLambda0 { k: 1 });
    for l in imaginary_grid() {
        for k in 0..=1 {
            specs.push(FamilySpec::Principal { l: l.clone(), k });
            specs.push(FamilySpec::Principal { l: -&l, k });
        }
    }
    let table = bijection_table(&specs).unwrap();
    assert!(table.injective, "{:?}", table.collisions);

    // A duplicated datum under a different label is reported.
    let mut rows = table.rows.clone();
    let mut fake = rows[0].clone();
    fake.group_label = "impostor".into();
    rows.push(fake);
    assert_eq!(collisions(&rows).len(), 1);
}
