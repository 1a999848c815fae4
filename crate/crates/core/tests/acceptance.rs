//! Acceptance criteria 1-10. Prints one line per criterion and exits
//! nonzero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use dg2_core::cdga::ValidationSettings;
use dg2_core::functional::*;
use dg2_core::instanton::*;
use dg2_core::models::*;
use dg2_core::scalars::{Poly, Scalar, Symbol};
use num_rational::BigRational;
use num_traits::{Signed, Zero};

type Outcome = Result<String, String>;

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e2s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn presets() -> Result<Vec<dg2_core::cdga::Presentation>, String> {
    let mut v = vec![
        SasakianPreset::new(Epsilon::Plus, false).map_err(e2s)?.presentation,
        SasakianPreset::new(Epsilon::Plus, true).map_err(e2s)?.presentation,
        CY3Preset::new().map_err(e2s)?.presentation,
        HypersymplecticPreset::new(QMatrix::identity()).map_err(e2s)?.presentation,
    ];
    v.push(HypersymplecticPreset::new(QMatrix::random(42)).map_err(e2s)?.presentation);
    Ok(v)
}

fn criterion_1() -> Outcome {
    let settings = ValidationSettings {
        seed: 1,
        leibniz_trials: 500,
        associativity_trials: 500,
        commutativity_trials: 200,
    };
    let mut n = 0;
    for p in presets()? {
        let report = p.validate(&settings);
        if let Some(c) = report.failures().next() {
            return Err(format!("{}: {} {:?}", p.name(), c.name, c.witness));
        }
        n += report.checks.len();
    }
    Ok(format!("{n} checks over 5 presentations"))
}

fn criterion_2() -> Outcome {
    for e in Epsilon::BOTH {
        for asd in [false, true] {
            let p = SasakianPreset::new(e, asd).map_err(e2s)?;
            let d = p.pres().d(&p.psi().map_err(e2s)?).map_err(e2s)?;
            ensure(d.is_zero(), || format!("sasakian eps {e}: {}", p.pres().render(&d)))?;
        }
    }
    for seed in 0..3 {
        let h = HypersymplecticPreset::new(QMatrix::random(seed)).map_err(e2s)?;
        ensure(h.pres().d(&h.psi().map_err(e2s)?).map_err(e2s)?.is_zero(), || "hypersymplectic".into())?;
    }
    let c = CY3Preset::new().map_err(e2s)?;
    ensure(c.pres().d(&c.psi().map_err(e2s)?).map_err(e2s)?.is_zero(), || "cy3".into())?;
    Ok("d psi = 0 exactly in t for both epsilon and all presets".into())
}

fn criterion_3() -> Outcome {
    let plus = solve_nearly_parallel(Epsilon::Plus).map_err(e2s)?;
    let minus = solve_nearly_parallel(Epsilon::Minus).map_err(e2s)?;
    let t5 = Scalar::surd(r(1, 5), 5).map_err(e2s)?;
    let l5 = Scalar::surd(r(12, 5), 5).map_err(e2s)?;
    ensure(plus.len() == 1 && plus[0].t == t5 && plus[0].lambda == l5, || format!("{plus:?}"))?;
    ensure(
        minus.len() == 1 && minus[0].t == Scalar::one() && minus[0].lambda == Scalar::from_i64(4),
        || format!("{minus:?}"),
    )?;
    for s in plus.iter().chain(&minus) {
        let res = nearly_parallel_residual(s.epsilon, &s.t, &s.lambda).map_err(e2s)?;
        ensure(res.is_zero(), || "back-substitution failed".into())?;
    }
    let wrong = nearly_parallel_residual(Epsilon::Plus, &Scalar::one(), &Scalar::from_i64(4)).map_err(e2s)?;
    ensure(!wrong.is_zero(), || "(1, +1, 4) should not solve".into())?;
    Ok(format!(
        "(t, eps, lambda) = ({}, +1, {}) and ({}, -1, {})",
        plus[0].t, plus[0].lambda, minus[0].t, minus[0].lambda
    ))
}

fn criterion_4() -> Outcome {
    let t2 = Poly::var(Symbol::T).pow(2);
    let a = Symbol::ansatz().map(Poly::var);
    let r2 = a.iter().fold(Poly::zero(), |acc, x| acc + x.pow(2));
    for e in Epsilon::BOTH {
        let horiz = Poly::one() - &t2 * &(e.poly() * Poly::from_i64(2));
        let vert = Poly::one() - &t2 * &Poly::from_i64(2);
        let factor = [&horiz, &horiz, &vert];
        for k in [Poly::zero(), Poly::var(Symbol::K)] {
            let p = SasakianPreset::new(e, !k.is_zero()).map_err(e2s)?;
            let ansatz = ConnectionAnsatz::symbolic().with_k(k.clone());
            let c = deformed_residual(&p, &ansatz)
                .and_then(|res| res.horizontal_all(p.pres()))
                .map_err(e2s)?;
            let base = &(&r2 * &Poly::from_i64(4)) - &k.pow(2);
            for i in 0..3 {
                let expected = &(&a[i] * &Poly::from_i64(2)) * &(&base - factor[i]);
                ensure(c[i] == expected, || format!("eps {e}, k {k}, i {}: {} vs {}", i + 1, c[i], expected))?;
            }
        }
    }
    Ok("coefficients equal 2 a_i (4 r^2 - k^2 - (1 - 2 eps_i t^2)) for k = 0 and symbolic k".into())
}

fn expected_set(e: Epsilon, u: &BigRational, k: i64) -> Vec<(&'static str, Option<BigRational>, bool)> {
    let k2 = BigRational::from_integer((k * k).into());
    let one = r(1, 1);
    let two_u = u * r(2, 1);
    let four = r(4, 1);
    let vert = (&one - &two_u + &k2) / &four;
    let mut out = Vec::new();
    let mut degenerate = false;
    let mut push = |name, r2: BigRational| {
        if r2.is_positive() {
            out.push((name, Some(r2), false));
        } else if r2.is_zero() {
            degenerate = true;
        }
    };
    match e {
        Epsilon::Plus => push("sphere", vert),
        Epsilon::Minus => {
            push("circle", (&one + &two_u + &k2) / &four);
            push("point_pair", vert);
        }
    }
    out.push(("trivial", None, degenerate));
    out
}

fn criterion_5() -> Outcome {
    let mut sets = 0;
    let mut exact = 0;
    for u in [r(1, 5), r(1, 4), r(1, 2), r(1, 1), r(2, 1)] {
        for e in Epsilon::BOTH {
            for k in 0..=3 {
                let set = classify_deformed(e, &u, k).map_err(e2s)?;
                let got: Vec<_> = set
                    .branches
                    .iter()
                    .map(|b| {
                        let deg = matches!(b, Branch::Trivial { degenerate: true });
                        (b.name(), b.radius_sq().cloned(), deg)
                    })
                    .collect();
                let want = expected_set(e, &u, k);
                ensure(got == want, || format!("eps {e}, u {u}, k {k}: {got:?} vs {want:?}"))?;
                let report = verify_solution_set(&set, 20, 7).map_err(e2s)?;
                ensure(report.passed(), || format!("eps {e}, u {u}, k {k}: {:?}", report.checks))?;
                exact += report.exact_points;
                sets += 1;
            }
        }
    }
    let point = residual_at(Equation::Deformed, Epsilon::Plus, &r(1, 4), 0, &[r(1, 4), r(1, 4), r(0, 1)])
        .map_err(e2s)?;
    ensure(point.iter().all(Poly::is_zero), || "(1/4, 1/4, 0) is not a solution".into())?;
    Ok(format!("{sets} solution sets, {exact} exact points, float checks at 1e-10"))
}

fn criterion_6() -> Outcome {
    for e in Epsilon::BOTH {
        let direct = functional_direct(e).map_err(e2s)?;
        ensure(direct.poly == expected_closed_form(e), || format!("eps {e}: {}", direct.poly))?;
        let tr = functional_transgression(e, 0, &ConnectionAnsatz::symbolic()).map_err(e2s)?;
        ensure(tr.full == direct.full, || format!("eps {e}: transgression {}", tr.full))?;
    }
    Ok("closed form and transgression agree exactly for both epsilon".into())
}

fn criterion_7() -> Outcome {
    for e in Epsilon::BOTH {
        let cf = functional_direct(e).map_err(e2s)?;
        ensure(gradient(&cf) == expected_gradient(e), || format!("gradient eps {e}"))?;
    }
    let z = r(0, 1);
    let mut seen = Vec::new();
    for u in [r(1, 5), r(1, 2), r(1, 1)] {
        for e in Epsilon::BOTH {
            let cf = functional_direct(e).map_err(e2s)?;
            let h = hessian_at(&cf, &z, &z, &u).map_err(e2s)?;
            let two = r(2, 1);
            let eigen = [
                &two * (r(1, 1) - &two * &u),
                &two * (r(1, 1) - &two * &u * r(e.value(), 1)),
            ];
            ensure(
                h.matrix == [[eigen[0].clone(), z.clone()], [z.clone(), eigen[1].clone()]],
                || format!("eps {e}, u {u}: {:?}", h.matrix),
            )?;
            let half = r(1, 2);
            let want = if u == half {
                Class::Degenerate
            } else if u < half {
                Class::Min
            } else if e == Epsilon::Plus {
                Class::Max
            } else {
                Class::Saddle
            };
            ensure(h.class == want, || format!("eps {e}, u {u}: {:?}", h.class))?;
            seen.push(format!("({e},{u})={}", h.class.as_str()));
        }
    }
    Ok(seen.join(" "))
}

fn criterion_8() -> Outcome {
    let mut summary = Vec::new();
    for (e, t, targets) in [
        (Epsilon::Plus, 0.2f64.sqrt(), "circle"),
        (Epsilon::Minus, 1.0, "pair"),
        (Epsilon::Plus, 1.0, "origin"),
    ] {
        let rep = critical_points_numeric(e, t, 200, 7).map_err(e2s)?;
        ensure(rep.discarded == 0, || format!("eps {e}, t {t}: {} seeds did not converge", rep.discarded))?;
        for p in &rep.points {
            let r2 = p.x * p.x + p.y * p.y;
            let origin = r2.sqrt() < 1e-9;
            let ok = origin
                || match targets {
                    "circle" => (r2 - 0.15).abs() < 1e-9,
                    "pair" => p.x.abs() < 1e-9 && (p.y.abs() - 0.75f64.sqrt()).abs() < 1e-9,
                    _ => false,
                };
            ensure(ok, || format!("eps {e}, t {t}: stray point {p:?}"))?;
        }
        let fd = finite_difference_error(e, t, 100, 1e-6, 3).map_err(e2s)?;
        ensure(fd < 1e-6, || format!("finite differences off by {fd:e}"))?;
        summary.push(format!("({e}, {t:.4}): {} points", rep.points.len()));
    }
    Ok(summary.join(", "))
}

fn criterion_9() -> Outcome {
    for e in Epsilon::BOTH {
        let p = SasakianPreset::new(e, true).map_err(e2s)?;
        for c in check_pullback_asd_sasakian(&p).map_err(e2s)? {
            ensure(c.passed, || format!("{c:?}"))?;
        }
    }
    for seed in 100..105 {
        let h = HypersymplecticPreset::new(QMatrix::random(seed)).map_err(e2s)?;
        for c in check_pullback_asd_hypersymplectic(&h).map_err(e2s)? {
            ensure(c.passed, || format!("{c:?}"))?;
        }
    }
    let report = check_cy3_lemma(&CY3Preset::new().map_err(e2s)?).map_err(e2s)?;
    for c in &report.checks {
        ensure(c.passed, || format!("{c:?}"))?;
    }
    Ok(format!("CY3 residual {}, roots 0 and +-sqrt(3)", report.residual))
}

fn criterion_10() -> Outcome {
    let quarter = moduli_scan(Epsilon::Plus, 0, &[r(1, 4)]).map_err(e2s)?;
    ensure(
        quarter.len() == 1 && quarter[0].branch == "sphere" && (quarter[0].r - 0.3535533906).abs() < 1e-9,
        || format!("{quarter:?}"),
    )?;
    let mut last = f64::INFINITY;
    for n in [2, 4, 6, 8] {
        let u = BigRational::new(1.into(), num_bigint::BigInt::from(10).pow(n));
        let rows = moduli_scan(Epsilon::Minus, 0, &[u]).map_err(e2s)?;
        let circle = rows.iter().find(|r| r.branch == "circle").ok_or("no circle")?;
        let gap = (circle.r - 0.5).abs();
        ensure(gap < last, || "circle radius does not approach 1/2".into())?;
        last = gap;
    }
    ensure(last < 1e-8, || format!("intercept gap {last:e}"))?;
    let us = parse_u_range("1/2:2:31").map_err(e2s)?;
    for e in Epsilon::BOTH {
        let rows = moduli_scan(e, 0, &us).map_err(e2s)?;
        ensure(rows.iter().all(|r| r.branch != "point_pair" && r.branch != "sphere"), || {
            format!("eps {e}: branch beyond u = 1/2")
        })?;
    }
    Ok(format!("r(1/4) = {:.10}, circle intercept gap {last:.1e}", quarter[0].r))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("presentation validity", criterion_1),
        ("psi is closed", criterion_2),
        ("nearly parallel locus", criterion_3),
        ("residual identities", criterion_4),
        ("classification tables", criterion_5),
        ("functional identity", criterion_6),
        ("gradient and Hessian", criterion_7),
        ("numeric and exact agreement", criterion_8),
        ("pullback lemmas", criterion_9),
        ("moduli scan data", criterion_10),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (n, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", n + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", n + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed in {:.1}s",
        criteria.len() - failed,
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
