use dg2_core::cdga::ValidationSettings;
use dg2_core::models::*;
use dg2_core::scalars::{Poly, Scalar, Symbol};
use num_rational::BigRational;

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[test]
fn every_preset_validates() {
    let settings = ValidationSettings::default();
    let mut pres = vec![
        SasakianPreset::new(Epsilon::Plus, false).unwrap().presentation,
        SasakianPreset::new(Epsilon::Minus, true).unwrap().presentation,
        CY3Preset::new().unwrap().presentation,
    ];
    for seed in 0..3 {
        pres.push(HypersymplecticPreset::new(QMatrix::random(seed)).unwrap().presentation);
    }
    for p in &pres {
        let report = p.validate(&settings);
        assert!(report.passed(), "{}: {:?}", p.name(), report.failures().collect::<Vec<_>>());
    }
}

#[test]
fn psi_is_closed_everywhere() {
    for e in Epsilon::BOTH {
        for asd in [false, true] {
            let p = SasakianPreset::new(e, asd).unwrap();
            assert!(p.pres().d(&p.psi().unwrap()).unwrap().is_zero());
        }
    }
    let h = HypersymplecticPreset::new(QMatrix::random(11)).unwrap();
    assert!(h.pres().d(&h.psi().unwrap()).unwrap().is_zero());
    let c = CY3Preset::new().unwrap();
    assert!(c.pres().d(&c.psi().unwrap()).unwrap().is_zero());
}

#[test]
fn nearly_parallel_values() {
    let plus = solve_nearly_parallel(Epsilon::Plus).unwrap();
    assert_eq!(plus.len(), 1);
    assert_eq!(plus[0].u, r(1, 5));
    assert_eq!(plus[0].t, Scalar::surd(r(1, 5), 5).unwrap());
    assert_eq!(plus[0].lambda, Scalar::surd(r(12, 5), 5).unwrap());

    let minus = solve_nearly_parallel(Epsilon::Minus).unwrap();
    assert_eq!(minus.len(), 1);
    assert_eq!(minus[0].t, Scalar::one());
    assert_eq!(minus[0].lambda, Scalar::from_i64(4));
}

#[test]
fn wrong_nearly_parallel_values_leave_a_residual() {
    let res = nearly_parallel_residual(Epsilon::Plus, &Scalar::one(), &Scalar::from_i64(4)).unwrap();
    assert!(!res.is_zero());
}

#[test]
fn asd_pullbacks() {
    for e in Epsilon::BOTH {
        let p = SasakianPreset::new(e, true).unwrap();
        for c in check_pullback_asd_sasakian(&p).unwrap() {
            assert!(c.passed, "{c:?}");
        }
    }
    let without = SasakianPreset::new(Epsilon::Plus, false).unwrap();
    assert!(check_pullback_asd_sasakian(&without).is_err());
    for seed in 0..5 {
        let h = HypersymplecticPreset::new(QMatrix::random(seed)).unwrap();
        for c in check_pullback_asd_hypersymplectic(&h).unwrap() {
            assert!(c.passed, "{c:?}");
        }
    }
}

#[test]
fn hypersymplectic_identity_coefficient() {
    let h = HypersymplecticPreset::new(QMatrix::identity()).unwrap();
    let f = hypersymplectic_curvature(&h).unwrap();
    let fpsi = h.pres().wedge(&f, &h.psi().unwrap()).unwrap();
    let coeff = h.pres().coefficient(&fpsi, &["eta2", "eta3", "v"]).unwrap();
    let expected = Poly::from_i64(-2) * Poly::var(Symbol::T).pow(2) * Poly::var(Symbol::B1);
    assert_eq!(coeff, expected);
}

#[test]
fn cy3_lemma() {
    let report = check_cy3_lemma(&CY3Preset::new().unwrap()).unwrap();
    for c in &report.checks {
        assert!(c.passed, "{c:?}");
    }
    let c = Poly::var(Symbol::C);
    assert_eq!(report.residual, Poly::from_i64(3) * &c - c.pow(3));
    let one = report.residual.substitute_scalars(&[(Symbol::C, Scalar::one())]).unwrap();
    assert_eq!(one, Poly::from_i64(2));
}
