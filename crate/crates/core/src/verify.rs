//! Named identity suites, one per preset.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use serde::Serialize;

use crate::cdga::{Check, ValidationSettings};
use crate::error::{Error, Result};
use crate::functional::{
    expected_closed_form, expected_gradient, functional_direct, functional_transgression,
    gradient, hessian_at, special_shape_residuals, Class,
};
use crate::instanton::{
    classify_deformed, classify_g2, curvature, deformed_residual, g2_residual,
    verify_solution_set, Branch, ConnectionAnsatz, SolutionSet,
};
use crate::models::{
    check_cy3_lemma, check_pullback_asd_hypersymplectic, check_pullback_asd_sasakian,
    nearly_parallel_residual, solve_nearly_parallel, CY3Preset, Epsilon, HypersymplecticPreset,
    QMatrix, SasakianPreset,
};
use crate::scalars::{Poly, Scalar, Symbol};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PresetName {
    Sasakian,
    SasakianAsd,
    Cy3,
    Hypersymplectic,
}

impl PresetName {
    pub const ALL: [PresetName; 4] = [
        PresetName::Sasakian,
        PresetName::SasakianAsd,
        PresetName::Cy3,
        PresetName::Hypersymplectic,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PresetName::Sasakian => "sasakian",
            PresetName::SasakianAsd => "sasakian-asd",
            PresetName::Cy3 => "cy3",
            PresetName::Hypersymplectic => "hypersymplectic",
        }
    }
}

impl fmt::Display for PresetName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PresetName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        PresetName::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown preset {s}")))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub preset: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn guard(name: &str, f: impl FnOnce() -> Result<Check>) -> Check {
    f().unwrap_or_else(|e| Check::fail(name, e.to_string()))
}

fn validation(pres: &crate::cdga::Presentation) -> Check {
    let settings = ValidationSettings::default();
    let report = pres.validate(&settings);
    let name = format!(
        "{} presentation: d^2 = 0, Leibniz, associativity",
        pres.name()
    );
    let failure = report
        .failures()
        .next()
        .map(|c| format!("{}: {}", c.name, c.witness.clone().unwrap_or_default()));
    match failure {
        None => Check::pass(name),
        Some(w) => Check::fail(name, w),
    }
}

fn expect_branches(set: &SolutionSet, expected: &[(&str, Option<BigRational>)]) -> bool {
    set.branches.len() == expected.len()
        && set
            .branches
            .iter()
            .zip(expected)
            .all(|(b, (name, r2))| b.name() == *name && b.radius_sq() == r2.as_ref())
}

fn sasakian_suite() -> Vec<Check> {
    let mut checks = Vec::new();
    checks.push(guard("sasakian presentation", || {
        Ok(validation(SasakianPreset::new(Epsilon::Plus, false)?.pres()))
    }));
    for e in Epsilon::BOTH {
        let name = format!("d psi = 0 (epsilon = {e})");
        checks.push(guard(&name, || {
            let p = SasakianPreset::new(e, false)?;
            Ok(Check::zero_form(name.clone(), p.pres(), &p.pres().d(&p.psi()?)?))
        }));
    }
    for (e, t, lambda) in [
        (Epsilon::Plus, Scalar::surd(r(1, 5), 5), Scalar::surd(r(12, 5), 5)),
        (Epsilon::Minus, Ok(Scalar::one()), Ok(Scalar::from_i64(4))),
    ] {
        let name = format!("nearly parallel solution (epsilon = {e})");
        checks.push(guard(&name, || {
            let (t, lambda) = (t?, lambda?);
            let sols = solve_nearly_parallel(e)?;
            let ok = sols.len() == 1 && sols[0].t == t && sols[0].lambda == lambda;
            Ok(if ok {
                Check::pass(name.clone())
            } else {
                let found: Vec<String> =
                    sols.iter().map(|s| format!("t = {}, lambda = {}", s.t, s.lambda)).collect();
                Check::fail(name.clone(), found.join("; "))
            })
        }));
    }
    let name = "(t, lambda) = (1, 4) is not nearly parallel for epsilon = 1";
    checks.push(guard(name, || {
        let res = nearly_parallel_residual(Epsilon::Plus, &Scalar::one(), &Scalar::from_i64(4))?;
        Ok(if res.is_zero() {
            Check::fail(name, "residual vanished")
        } else {
            Check::pass(name)
        })
    }));

    let t2 = Poly::var(Symbol::T).pow(2);
    let a = Symbol::ansatz().map(Poly::var);
    let r2 = a.iter().fold(Poly::zero(), |acc, x| acc + x.pow(2));
    for e in Epsilon::BOTH {
        let horiz = Poly::one() - &t2 * &(e.poly() * Poly::from_i64(2));
        let vert = Poly::one() - &t2 * &Poly::from_i64(2);
        let factor = [&horiz, &horiz, &vert];

        let name = format!("F ^ psi coefficients (epsilon = {e})");
        checks.push(guard(&name, || {
            let p = SasakianPreset::new(e, false)?;
            let c = g2_residual(&p, &ConnectionAnsatz::symbolic())?.horizontal_all(p.pres())?;
            let diff = (0..3).fold(Poly::zero(), |acc, i| {
                acc + (&c[i] + &(factor[i] * &(&a[i] * &Poly::from_i64(2)))).pow(2)
            });
            Ok(Check::zero_poly(name.clone(), &diff))
        }));

        let name = format!("deformed residual = 2 a_i (4 r^2 - (1 - 2 eps_i t^2)) (epsilon = {e})");
        checks.push(guard(&name, || {
            let p = SasakianPreset::new(e, false)?;
            let c = deformed_residual(&p, &ConnectionAnsatz::symbolic())?.horizontal_all(p.pres())?;
            let four_r2 = &r2 * &Poly::from_i64(4);
            let diff = (0..3).fold(Poly::zero(), |acc, i| {
                let expected = &(&a[i] * &Poly::from_i64(2)) * &(&four_r2 - factor[i]);
                acc + (&c[i] - &expected).pow(2)
            });
            Ok(Check::zero_poly(name.clone(), &diff))
        }));

        let name = format!("functional closed form (epsilon = {e})");
        checks.push(guard(&name, || {
            let cf = functional_direct(e)?;
            Ok(Check::zero_poly(name.clone(), &(&cf.poly - &expected_closed_form(e))))
        }));

        let name = format!("transgression agrees with closed form (epsilon = {e})");
        checks.push(guard(&name, || {
            let direct = functional_direct(e)?;
            let tr = functional_transgression(e, 0, &ConnectionAnsatz::symbolic())?;
            Ok(Check::zero_poly(name.clone(), &(&tr.full - &direct.full)))
        }));

        let name = format!("gradient (epsilon = {e})");
        checks.push(guard(&name, || {
            let (gx, gy) = gradient(&functional_direct(e)?);
            let (ex, ey) = expected_gradient(e);
            Ok(Check::zero_poly(name.clone(), &((&gx - &ex).pow(2) + (&gy - &ey).pow(2))))
        }));

        let name = format!("functional at t^2 = 1/2 (epsilon = {e})");
        checks.push(guard(&name, || {
            let bad: Vec<String> = special_shape_residuals(e)?
                .into_iter()
                .filter(|(_, p)| !p.is_zero())
                .map(|(n, p)| format!("{n}: {p}"))
                .collect();
            Ok(if bad.is_empty() {
                Check::pass(name.clone())
            } else {
                Check::fail(name.clone(), bad.join("; "))
            })
        }));
    }

    let name = "Hessian at the flat connection";
    checks.push(guard(name, || {
        let z = r(0, 1);
        let mut bad = Vec::new();
        for (e, u, class) in [
            (Epsilon::Plus, r(1, 5), Class::Min),
            (Epsilon::Minus, r(1, 5), Class::Min),
            (Epsilon::Plus, r(1, 2), Class::Degenerate),
            (Epsilon::Minus, r(1, 2), Class::Degenerate),
            (Epsilon::Plus, r(1, 1), Class::Max),
            (Epsilon::Minus, r(1, 1), Class::Saddle),
        ] {
            let h = hessian_at(&functional_direct(e)?, &z, &z, &u)?;
            if h.class != class {
                bad.push(format!("eps {e}, u {u}: {}", h.class.as_str()));
            }
        }
        Ok(if bad.is_empty() {
            Check::pass(name)
        } else {
            Check::fail(name, bad.join("; "))
        })
    }));

    let name = "G2-instantons in the ansatz";
    checks.push(guard(name, || {
        let all = classify_g2(Epsilon::Plus, &r(1, 2))?;
        let axis = classify_g2(Epsilon::Minus, &r(1, 2))?;
        let trivial = classify_g2(Epsilon::Plus, &r(1, 1))?;
        let ok = all.branches == vec![Branch::All]
            && matches!(axis.branches[0], Branch::PointPair { line: true, .. })
            && trivial.is_trivial_only();
        Ok(if ok {
            Check::pass(name)
        } else {
            Check::fail(name, format!("{all:?}; {axis:?}; {trivial:?}"))
        })
    }));

    for (e, u, expected) in [
        (Epsilon::Plus, r(1, 5), vec![("sphere", Some(r(3, 20))), ("trivial", None)]),
        (Epsilon::Plus, r(1, 4), vec![("sphere", Some(r(1, 8))), ("trivial", None)]),
        (Epsilon::Minus, r(1, 1), vec![("circle", Some(r(3, 4))), ("trivial", None)]),
        (Epsilon::Plus, r(1, 2), vec![("trivial", None)]),
    ] {
        let name = format!("deformed solution set (epsilon = {e}, u = {u})");
        checks.push(guard(&name, || {
            let set = classify_deformed(e, &u, 0)?;
            let report = verify_solution_set(&set, 50, 11)?;
            Ok(if expect_branches(&set, &expected) && report.passed() {
                Check::pass(name.clone())
            } else {
                Check::fail(name.clone(), serde_json::to_string(&set).unwrap_or_default())
            })
        }));
    }
    checks
}

fn sasakian_asd_suite() -> Vec<Check> {
    let mut checks = Vec::new();
    checks.push(guard("sasakian-asd presentation", || {
        Ok(validation(SasakianPreset::new(Epsilon::Plus, true)?.pres()))
    }));
    for e in Epsilon::BOTH {
        match SasakianPreset::new(e, true).and_then(|p| check_pullback_asd_sasakian(&p)) {
            Ok(c) => checks.extend(c),
            Err(err) => checks.push(Check::fail(format!("ASD pullback (epsilon = {e})"), err.to_string())),
        }
    }
    let name = "(da)^2 ^ alpha = 0";
    checks.push(guard(name, || {
        let p = SasakianPreset::new(Epsilon::Plus, true)?;
        let pres = p.pres();
        let da = pres.d(&ConnectionAnsatz::symbolic().one_form(pres)?)?;
        let alpha = pres.generator_form("alpha")?;
        Ok(Check::zero_form(name, pres, &pres.wedge(&pres.power(&da, 2)?, &alpha)?))
    }));
    let name = "|F_A0|^2 = 2 k^2";
    checks.push(guard(name, || {
        let p = SasakianPreset::new(Epsilon::Plus, true)?;
        let pres = p.pres();
        let k = Poly::var(Symbol::K);
        let f0 = curvature(pres, &ConnectionAnsatz::point(Default::default(), 0).with_k(k.clone()))?;
        let sq = pres.coefficient(&pres.wedge(&f0, &f0)?, &["v"])?;
        Ok(Check::zero_poly(name, &(&sq + &(k.pow(2) * Poly::from_i64(2)))))
    }));
    let t2 = Poly::var(Symbol::T).pow(2);
    let k2 = Poly::var(Symbol::K).pow(2);
    let a = Symbol::ansatz().map(Poly::var);
    let r2 = a.iter().fold(Poly::zero(), |acc, x| acc + x.pow(2));
    for e in Epsilon::BOTH {
        let name = format!(
            "deformed residual = 2 a_i (4 r^2 - k^2 - (1 - 2 eps_i t^2)) (epsilon = {e})"
        );
        checks.push(guard(&name, || {
            let p = SasakianPreset::new(e, true)?;
            let ansatz = ConnectionAnsatz::symbolic().with_k(Poly::var(Symbol::K));
            let c = deformed_residual(&p, &ansatz)?.horizontal_all(p.pres())?;
            let horiz = Poly::one() - &t2 * &(e.poly() * Poly::from_i64(2));
            let vert = Poly::one() - &t2 * &Poly::from_i64(2);
            let factor = [&horiz, &horiz, &vert];
            let base = &(&r2 * &Poly::from_i64(4)) - &k2;
            let diff = (0..3).fold(Poly::zero(), |acc, i| {
                let expected = &(&a[i] * &Poly::from_i64(2)) * &(&base - factor[i]);
                acc + (&c[i] - &expected).pow(2)
            });
            Ok(Check::zero_poly(name.clone(), &diff))
        }));
    }
    for (e, u, k, expected) in [
        (Epsilon::Minus, r(1, 1), 2, vec![("circle", Some(r(7, 4))), ("point_pair", Some(r(3, 4))), ("trivial", None)]),
        (Epsilon::Plus, r(1, 1), 1, vec![("trivial", None)]),
        (Epsilon::Plus, r(1, 1), 3, vec![("sphere", Some(r(2, 1))), ("trivial", None)]),
    ] {
        let name = format!("deformed solution set (epsilon = {e}, u = {u}, k = {k})");
        checks.push(guard(&name, || {
            let set = classify_deformed(e, &u, k)?;
            let report = verify_solution_set(&set, 50, 13)?;
            Ok(if expect_branches(&set, &expected) && report.passed() {
                Check::pass(name.clone())
            } else {
                Check::fail(name.clone(), serde_json::to_string(&set).unwrap_or_default())
            })
        }));
    }
    checks
}

fn cy3_suite() -> Vec<Check> {
    let mut checks = Vec::new();
    match CY3Preset::new() {
        Ok(p) => {
            checks.push(validation(p.pres()));
            match check_cy3_lemma(&p) {
                Ok(report) => checks.extend(report.checks),
                Err(e) => checks.push(Check::fail("Calabi-Yau lemma", e.to_string())),
            }
        }
        Err(e) => checks.push(Check::fail("cy3 presentation", e.to_string())),
    }
    checks
}

fn hypersymplectic_suite(q: Option<QMatrix>) -> Vec<Check> {
    let mut checks = Vec::new();
    let qs = match q {
        Some(q) => vec![q],
        None => {
            let mut v = vec![QMatrix::identity()];
            v.extend((1..=5).map(QMatrix::random));
            v
        }
    };
    for (n, q) in qs.into_iter().enumerate() {
        match HypersymplecticPreset::new(q) {
            Ok(p) => {
                if n == 0 {
                    checks.push(validation(p.pres()));
                }
                let name = format!("d psi_t = 0, Q = {}", p.q);
                checks.push(guard(&name, || {
                    Ok(Check::zero_form(name.clone(), p.pres(), &p.pres().d(&p.psi()?)?))
                }));
                match check_pullback_asd_hypersymplectic(&p) {
                    Ok(c) => checks.extend(c),
                    Err(e) => checks.push(Check::fail("hypersymplectic pullback", e.to_string())),
                }
            }
            Err(e) => checks.push(Check::fail("hypersymplectic presentation", e.to_string())),
        }
    }
    checks
}

/// Runs the suite for one preset. `q` only affects the hypersymplectic
/// preset; without it the identity and five random matrices are used.
pub fn run_suite(preset: PresetName, q: Option<QMatrix>) -> SuiteReport {
    let checks = match preset {
        PresetName::Sasakian => sasakian_suite(),
        PresetName::SasakianAsd => sasakian_asd_suite(),
        PresetName::Cy3 => cy3_suite(),
        PresetName::Hypersymplectic => hypersymplectic_suite(q),
    };
    SuiteReport {
        preset: preset.to_string(),
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}
