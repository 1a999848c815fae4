use dg2_core::instanton::*;
use dg2_core::models::{Epsilon, SasakianPreset};
use dg2_core::scalars::{Poly, Symbol};
use num_rational::BigRational;

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn var(s: Symbol) -> Poly {
    Poly::var(s)
}

fn r2() -> Poly {
    var(Symbol::A1).pow(2) + var(Symbol::A2).pow(2) + var(Symbol::A3).pow(2)
}

#[test]
fn g2_residual_coefficients() {
    let t2 = var(Symbol::T).pow(2);
    for e in Epsilon::BOTH {
        let p = SasakianPreset::new(e, false).unwrap();
        let res = g2_residual(&p, &ConnectionAnsatz::symbolic()).unwrap();
        let c = res.horizontal_all(p.pres()).unwrap();
        let horiz = Poly::one() - &t2 * &(e.poly() * Poly::from_i64(2));
        let vert = Poly::one() - &t2 * &Poly::from_i64(2);
        assert_eq!(c[0], &horiz * &(var(Symbol::A1) * Poly::from_i64(-2)));
        assert_eq!(c[1], &horiz * &(var(Symbol::A2) * Poly::from_i64(-2)));
        assert_eq!(c[2], &vert * &(var(Symbol::A3) * Poly::from_i64(-2)));
    }
}

#[test]
fn g2_residual_vanishes_at_half_plus() {
    let p = SasakianPreset::new(Epsilon::Plus, false).unwrap();
    let res = g2_residual(&p, &ConnectionAnsatz::symbolic()).unwrap();
    let at = res
        .map(p.pres(), |c| c.substitute_square(Symbol::T, &Poly::ratio(1, 2)))
        .unwrap();
    assert!(at.is_zero());
}

#[test]
fn asd_background_is_a_g2_instanton() {
    for e in Epsilon::BOTH {
        let p = SasakianPreset::new(e, true).unwrap();
        let a = ConnectionAnsatz::point(Default::default(), 3);
        assert!(g2_residual(&p, &a).unwrap().is_zero());
        assert!(deformed_residual(&p, &a).unwrap().is_zero());
    }
}

#[test]
fn deformed_residual_brackets() {
    let t2 = var(Symbol::T).pow(2);
    let k2 = var(Symbol::K).pow(2);
    for e in Epsilon::BOTH {
        let p = SasakianPreset::new(e, true).unwrap();
        let a = ConnectionAnsatz::symbolic().with_k(var(Symbol::K));
        let c = deformed_residual(&p, &a).unwrap().horizontal_all(p.pres()).unwrap();
        let four_r2 = r2() * Poly::from_i64(4);
        let horiz = &four_r2 - &k2 - (Poly::one() - &t2 * &(e.poly() * Poly::from_i64(2)));
        let vert = &four_r2 - &k2 - (Poly::one() - &t2 * &Poly::from_i64(2));
        assert_eq!(c[0], &horiz * &(var(Symbol::A1) * Poly::from_i64(2)));
        assert_eq!(c[1], &horiz * &(var(Symbol::A2) * Poly::from_i64(2)));
        assert_eq!(c[2], &vert * &(var(Symbol::A3) * Poly::from_i64(2)));
    }
}

#[test]
fn background_curvature_identities() {
    let p = SasakianPreset::new(Epsilon::Plus, true).unwrap();
    let pres = p.pres();
    let alpha = pres.generator_form("alpha").unwrap();
    let da = pres
        .d(&ConnectionAnsatz::symbolic().one_form(pres).unwrap())
        .unwrap();
    let da2 = pres.power(&da, 2).unwrap();
    assert!(pres.wedge(&da2, &alpha).unwrap().is_zero());
    assert!(pres.power(&alpha, 3).unwrap().is_zero());
    let f0 = curvature(pres, &ConnectionAnsatz::point(Default::default(), 2)).unwrap();
    let sq = pres.wedge(&f0, &f0).unwrap();
    assert_eq!(pres.coefficient(&sq, &["v"]).unwrap(), Poly::from_i64(-8));
}

#[test]
fn sphere_point_at_quarter() {
    let vals = residual_at(
        Equation::Deformed,
        Epsilon::Plus,
        &r(1, 4),
        0,
        &[r(1, 4), r(1, 4), r(0, 1)],
    )
    .unwrap();
    assert!(vals.iter().all(Poly::is_zero));
    let off = residual_at(Equation::Deformed, Epsilon::Plus, &r(1, 1), 0, &[r(1, 1), r(0, 1), r(0, 1)]).unwrap();
    assert!(off.iter().any(|p| !p.is_zero()));
}

#[test]
fn classify_g2_cases() {
    let all = classify_g2(Epsilon::Plus, &r(1, 2)).unwrap();
    assert_eq!(all.branches, vec![Branch::All]);
    let axis = classify_g2(Epsilon::Minus, &r(1, 2)).unwrap();
    assert!(matches!(axis.branches[0], Branch::PointPair { line: true, a3_sq: None, .. }));
    assert!(classify_g2(Epsilon::Plus, &r(1, 1)).unwrap().is_trivial_only());
    assert!(classify_g2(Epsilon::Plus, &r(0, 1)).is_err());
}

#[test]
fn classify_deformed_cases() {
    let s = classify_deformed(Epsilon::Plus, &r(1, 5), 0).unwrap();
    assert_eq!(s.find("sphere").unwrap().radius_sq(), Some(&r(3, 20)));

    let s = classify_deformed(Epsilon::Minus, &r(1, 1), 0).unwrap();
    assert_eq!(s.find("circle").unwrap().radius_sq(), Some(&r(3, 4)));
    assert!(s.find("point_pair").is_none());

    let s = classify_deformed(Epsilon::Minus, &r(1, 1), 2).unwrap();
    assert_eq!(s.find("circle").unwrap().radius_sq(), Some(&r(7, 4)));
    assert_eq!(s.find("point_pair").unwrap().radius_sq(), Some(&r(3, 4)));

    let s = classify_deformed(Epsilon::Plus, &r(1, 2), 0).unwrap();
    assert_eq!(s.branches, vec![Branch::Trivial { degenerate: true }]);
    assert!(classify_deformed(Epsilon::Plus, &r(-1, 2), 0).is_err());
}

#[test]
fn verification_closes_the_loop() {
    for (e, u, k) in [
        (Epsilon::Plus, r(1, 4), 0),
        (Epsilon::Plus, r(1, 5), 0),
        (Epsilon::Minus, r(1, 1), 0),
        (Epsilon::Minus, r(1, 1), 2),
        (Epsilon::Minus, r(1, 2), 0),
    ] {
        let set = classify_deformed(e, &u, k).unwrap();
        let report = verify_solution_set(&set, 20, 3).unwrap();
        assert!(report.passed(), "{:?}", report.checks);
    }
    for (e, u) in [(Epsilon::Plus, r(1, 2)), (Epsilon::Minus, r(1, 2)), (Epsilon::Plus, r(2, 1))] {
        let report = verify_solution_set(&classify_g2(e, &u).unwrap(), 20, 3).unwrap();
        assert!(report.passed(), "{:?}", report.checks);
    }
}

#[test]
fn wrong_branch_fails_verification() {
    let mut set = classify_deformed(Epsilon::Plus, &r(1, 4), 0).unwrap();
    set.branches[0] = Branch::Sphere { radius_sq: r(1, 4), degenerate: false };
    assert!(!verify_solution_set(&set, 5, 1).unwrap().passed());
}
