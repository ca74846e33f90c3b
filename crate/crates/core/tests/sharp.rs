mod common;

use common::{matches_oracle, oracle_sharp};
use deltapi::formal_group::WeierstrassCurve;
use deltapi::jet::Monomial;
use deltapi::qexp::{curve_coefficients, NewformData};
use deltapi::sharp::{assemble_sharp, integrality_exponent, nonzero_check, SharpSpec};
use deltapi::{PadicCtx, PadicNum, PhiPoly};
use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

fn eleven_a1(nmax: usize) -> NewformData {
    NewformData::from_curve(&WeierstrassCurve::curve_11a1(), 11, 5, nmax).unwrap()
}

#[test]
fn hecke_preset_matches_the_rational_oracle() {
    let ctx = PadicCtx::zp(5, 6).unwrap();
    let nf = eleven_a1(50);
    let a = curve_coefficients(&WeierstrassCurve::curve_11a1(), 50).unwrap();
    let spec = SharpSpec::single(nf, PhiPoly::from_ints(&ctx, &[5, -1, 1]), 2).unwrap();
    let out = assemble_sharp(&spec, 50, 2, &ctx).unwrap();
    let oracle = oracle_sharp(&a, &[5, -1, 1], 50);
    assert!(matches_oracle(&out.series, &oracle, &ctx));
    // the oracle itself: every coefficient lies in 5 Z_(5)
    let five = BigInt::from(5);
    assert!(oracle
        .values()
        .all(|c| (c.numer() % &five).is_zero() && !(c.denom() % &five).is_zero()));
}

#[test]
fn hecke_preset_is_integral_after_division_by_five() {
    let ctx = PadicCtx::zp(5, 6).unwrap();
    let spec = SharpSpec::single(eleven_a1(50), PhiPoly::from_ints(&ctx, &[5, -1, 1]), 2).unwrap();
    let out = assemble_sharp(&spec, 50, 2, &ctx).unwrap();
    assert_eq!(out.meta.nu, 0);
    assert_eq!(out.meta.min_valuation, Some(1));
    let divided = out.series.mul_pi_pow(-1);
    assert_eq!(integrality_exponent(&divided), 0);
    assert!(divided.min_precision().unwrap() >= 4);
    assert!(nonzero_check(&divided).unwrap());
    assert_eq!(divided.order(), 2);
    assert!(divided
        .terms()
        .all(|(m, _)| m.order() <= 2 && m.delta_degree() <= 2));
    // the normalised preset gives the same series
    let normalized = PhiPoly::hecke_normalized(&ctx, &PadicNum::one(&ctx));
    let spec_n = SharpSpec::single(eleven_a1(50), normalized, 2).unwrap();
    let out_n = assemble_sharp(&spec_n, 50, 2, &ctx).unwrap();
    assert!(out_n.series.agrees(&divided).unwrap());
}

#[test]
fn conjugate_lists_are_summed_in_order() {
    let ctx = PadicCtx::zp(5, 6).unwrap();
    let mut nf = eleven_a1(20);
    nf.conjugates = vec![nf.an.clone()];
    let p = PhiPoly::from_ints(&ctx, &[0, 1]);
    let both = SharpSpec::new(nf.clone(), vec![p.clone(), p.clone()], None, 1).unwrap();
    let one = SharpSpec::new(nf, vec![p.clone(), PhiPoly::zero()], None, 1).unwrap();
    let s2 = assemble_sharp(&both, 20, 2, &ctx).unwrap().series;
    let s1 = assemble_sharp(&one, 20, 2, &ctx).unwrap().series;
    assert!(s2.agrees(&s1.add(&s1).unwrap()).unwrap());
}

fn small_poly() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-6i64..6, 0..=3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(30))]

    #[test]
    fn assembly_is_additive_in_the_polynomial(p1 in small_poly(), p2 in small_poly()) {
        let ctx = PadicCtx::zp(5, 6).unwrap();
        let nf = eleven_a1(20);
        let run = |c: &[i64]| {
            let spec = SharpSpec::single(nf.clone(), PhiPoly::from_ints(&ctx, c), 2).unwrap();
            assemble_sharp(&spec, 20, 2, &ctx).unwrap().series
        };
        let len = p1.len().max(p2.len());
        let sum: Vec<i64> = (0..len)
            .map(|i| p1.get(i).copied().unwrap_or(0) + p2.get(i).copied().unwrap_or(0))
            .collect();
        prop_assert!(run(&sum).agrees(&run(&p1).add(&run(&p2)).unwrap()).unwrap());
    }

    #[test]
    fn assembly_has_the_displayed_shape(poly in small_poly()) {
        let ctx = PadicCtx::zp(5, 6).unwrap();
        let a = curve_coefficients(&WeierstrassCurve::curve_11a1(), 25).unwrap();
        let spec = SharpSpec::single(eleven_a1(25), PhiPoly::from_ints(&ctx, &poly), 2).unwrap();
        let out = assemble_sharp(&spec, 25, 2, &ctx).unwrap();
        prop_assert!(out.series.terms().all(|(m, _)| m.order() <= 2));
        prop_assert!(matches_oracle(&out.series, &oracle_sharp(&a, &poly, 25), &ctx));
    }
}

#[test]
fn f_inverse_is_nonzero() {
    let ctx = PadicCtx::zp(5, 6).unwrap();
    let spec = SharpSpec::single(eleven_a1(10), PhiPoly::one(&ctx), 1).unwrap();
    let out = assemble_sharp(&spec, 10, 2, &ctx).unwrap();
    assert!(nonzero_check(&out.series).unwrap());
    assert_eq!(
        out.series.coeff(&Monomial::q_pow(1)).unwrap(),
        &PadicNum::one(&ctx)
    );
}
