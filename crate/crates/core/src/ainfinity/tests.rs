use super::samples::{point_algebra, toy_dga};
use super::*;
use crate::novikov::{rat, Exponent, NovikovSeries, Scalar};

fn t3() -> Exponent {
    Exponent::int(3)
}

fn ex(n: i64, d: i64) -> Exponent {
    Exponent::new(n, d).unwrap()
}

#[test]
fn toy_dga_is_a_unital_ainfinity_algebra() {
    let a = toy_dga(t3());
    assert!(a.check_ainfinity(4).unwrap().is_empty());
    assert!(a.check_unit().unwrap().is_empty());
}

#[test]
fn non_square_zero_differential_is_reported() {
    let basis = GradedBasis::new(&[("p", 0), ("q", 1), ("r", 2)], None).unwrap();
    let d = vec![(0, vec![(1, rat(1, 1))]), (1, vec![(2, rat(1, 1))])];
    let a = AInfinityAlgebra::from_dga(basis, &d, &[], t3(), 1).unwrap();
    let v = a.check_ainfinity(2).unwrap();
    assert_eq!(
        v,
        vec![Violation {
            arity: 1,
            energy: Exponent::ZERO,
            inputs: vec![0]
        }]
    );
    assert_eq!(v[0].describe(a.basis()), "arity 1 at E=0 on (p)");
}

#[test]
fn stray_unit_entry_is_reported() {
    let mut a = toy_dga(t3());
    a.add_term(&["e", "x", "x"], ex(1, 2), rat(1, 1), "s").unwrap();
    let v = a.check_unit().unwrap();
    assert_eq!(
        v,
        vec![Violation {
            arity: 3,
            energy: ex(1, 2),
            inputs: vec![0, 3, 3]
        }]
    );
}

#[test]
fn parity_is_enforced() {
    let mut a = toy_dga(t3());
    let err = a.add_term(&["x", "x"], Exponent::ZERO, rat(1, 1), "s").unwrap_err();
    assert!(matches!(err, crate::Error::Invariant(_)));
}

#[test]
fn deform_by_zero_and_classical_mc() {
    let a = toy_dga(t3());
    assert_eq!(a.deform(&a.zero_chain()).unwrap(), a);

    // x·x = y: m^b_0 = m_2(b,b) = -T y for b = T^{1/2} x
    let basis = GradedBasis::new(&[("e", 0), ("x", 1), ("y", 2)], Some("e")).unwrap();
    let prod = vec![((1, 1), vec![(2, rat(1, 1))])];
    let c = AInfinityAlgebra::from_dga(basis, &[], &prod, t3(), 1).unwrap();
    let b = Chain::single(1, c.series(ex(1, 2), rat(1, 1)));
    let m0 = c.deform(&b).unwrap().entry(&[]).cloned().unwrap();
    assert_eq!(m0, Chain::single(2, c.series(Exponent::int(1), rat(-1, 1))));
    assert_eq!(c.curvature(&b).unwrap(), m0);
}

#[test]
fn even_or_unit_valuation_cochains_rejected() {
    let a = toy_dga(t3());
    let even = Chain::single(1, a.series(ex(1, 2), rat(1, 1)));
    assert!(a.deform(&even).is_err());
    let flat = Chain::single(3, a.series(Exponent::ZERO, rat(1, 1)));
    assert!(a.deform(&flat).is_err());
}

#[test]
fn weak_mc_and_potential() {
    let tr = t3();
    let zero = point_algebra(NovikovSeries::zero(tr, 1));
    let w = zero.is_weak_mc(&zero.zero_chain()).unwrap().unwrap();
    assert!(w.total.is_zero());

    let t = NovikovSeries::parse("T", tr, 1).unwrap();
    let a = point_algebra(t.clone());
    assert_eq!(a.is_weak_mc(&a.zero_chain()).unwrap().unwrap().total, t);

    // m_0 = T·a is not proportional to the unit
    let mut bad = toy_dga(tr);
    bad.add_term(&[], Exponent::int(1), rat(1, 1), "a").unwrap();
    assert!(bad.is_weak_mc(&bad.zero_chain()).unwrap().is_none());
}

#[test]
fn restriction_of_scalars() {
    let tr = t3();
    let w = NovikovSeries::parse("T + 2*T^2*λ_1", tr, 1).unwrap();
    let a = point_algebra(w.clone());
    assert_eq!(a.restrict_scalars(&[]).unwrap(), a);
    let r = a.restrict_scalars(&[Scalar::zero()]).unwrap();
    let pv = r.is_weak_mc(&r.zero_chain()).unwrap().unwrap();
    assert_eq!(pv.total, w.lambda_part(0));
    let full = a.is_weak_mc(&a.zero_chain()).unwrap().unwrap();
    assert_eq!(full.w(), pv.total);
    assert_eq!(full.h(1), NovikovSeries::parse("2*T^2", tr, 1).unwrap());
}

#[test]
fn empty_basis_is_vacuous() {
    let a = AInfinityAlgebra::new(GradedBasis::default(), t3(), 1);
    assert!(a.check_ainfinity(3).unwrap().is_empty());
}

#[test]
fn text_round_trip() {
    let mut a = toy_dga(t3());
    a.add_term(&["x", "x", "x"], ex(1, 2), rat(-3, 2), "a").unwrap();
    a.add_term(&[], Exponent::int(1), rat(1, 1), "e").unwrap();
    let text = a.to_text();
    assert!(text.contains("m[3, E=1/2](x,x,x) = -3/2*a"), "{text}");
    let back = AInfinityAlgebra::parse(&text, None).unwrap();
    assert_eq!(back, a);
    assert_eq!(back.to_text(), text);
}

#[test]
fn text_errors() {
    let e = AInfinityAlgebra::parse("basis = e:0\nm[1, E=0](e, e) = e\n", Some(t3())).unwrap_err();
    assert!(e.is_parse());
    let e = AInfinityAlgebra::parse("basis = e:0\nm[1, E=0](e) = e\n", Some(t3())).unwrap_err();
    assert!(matches!(e, crate::Error::Invariant(_)));
}
