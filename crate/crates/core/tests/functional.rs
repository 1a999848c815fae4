use dg2_core::functional::*;
use dg2_core::instanton::ConnectionAnsatz;
use dg2_core::models::Epsilon;
use dg2_core::scalars::{Poly, Scalar, Symbol};
use num_rational::BigRational;

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[test]
fn direct_matches_closed_form() {
    for e in Epsilon::BOTH {
        let cf = functional_direct(e).unwrap();
        assert_eq!(cf.poly, expected_closed_form(e));
    }
}

#[test]
fn transgression_matches_direct() {
    for e in Epsilon::BOTH {
        let direct = functional_direct(e).unwrap();
        let tr = functional_transgression(e, 0, &ConnectionAnsatz::symbolic()).unwrap();
        assert_eq!(tr.full, direct.full);
    }
}

#[test]
fn transgression_from_itself_vanishes() {
    let zero = ConnectionAnsatz::point(Default::default(), 0);
    for k in [0, 2] {
        let tr = functional_transgression(Epsilon::Minus, k, &zero).unwrap();
        assert!(tr.full.is_zero());
    }
}

#[test]
fn transgression_with_background() {
    let a3 = ConnectionAnsatz {
        coeffs: [Poly::zero(), Poly::zero(), Poly::var(Symbol::A3)],
        k: Poly::zero(),
    };
    let cf = functional_transgression(Epsilon::Plus, 1, &a3).unwrap();
    let dx = cf.full.differentiate(Symbol::A3);
    for u in [r(1, 5), r(1, 4), r(3, 4)] {
        // a3^2 = (2 - 2u) / 4 is a critical point.
        let at_u = dx.substitute_square(Symbol::T, &Poly::rational(u.clone())).unwrap();
        let a3_sq = (r(2, 1) - &u * r(2, 1)) / r(4, 1);
        let reduced = (at_u * Poly::var(Symbol::A3))
            .substitute_square(Symbol::A3, &Poly::rational(a3_sq))
            .unwrap();
        assert!(reduced.is_zero(), "u = {u}: {reduced}");
    }
}

#[test]
fn rotational_invariance() {
    for e in Epsilon::BOTH {
        let full = functional_direct(e).unwrap().full;
        let a1 = Poly::var(Symbol::A1);
        let a2 = Poly::var(Symbol::A2);
        let rotated = full.substitute(&[(Symbol::A1, a2.clone()), (Symbol::A2, -&a1)]).unwrap();
        let swapped = full.substitute(&[(Symbol::A1, a2), (Symbol::A2, a1)]).unwrap();
        assert_eq!(rotated, full);
        assert_eq!(swapped, full);
    }
}

#[test]
fn closed_form_values() {
    let cf = functional_direct(Epsilon::Minus).unwrap();
    let at = cf
        .poly
        .substitute_square(Symbol::Y, &Poly::ratio(3, 4))
        .unwrap()
        .substitute(&[(Symbol::X, Poly::zero()), (Symbol::T, Poly::one())])
        .unwrap();
    assert_eq!(at, Poly::ratio(9, 8));
    assert_eq!(cf.eval(0.0, 0.0, 0.7).unwrap(), 0.0);
}

#[test]
fn gradient_matches() {
    for e in Epsilon::BOTH {
        let cf = functional_direct(e).unwrap();
        assert_eq!(gradient(&cf), expected_gradient(e));
    }
    let cf = functional_direct(Epsilon::Plus).unwrap();
    let gx = gradient(&cf).0;
    let v = gx
        .substitute_scalars(&[
            (Symbol::X, Scalar::ratio(1, 2)),
            (Symbol::Y, Scalar::zero()),
            (Symbol::T, Scalar::sqrt_rational(&r(1, 2)).unwrap()),
        ])
        .unwrap();
    assert_eq!(v, Poly::from_i64(-1));
}

#[test]
fn hessian_at_origin() {
    let z = r(0, 1);
    for (e, u, class) in [
        (Epsilon::Plus, r(1, 5), Class::Min),
        (Epsilon::Minus, r(1, 5), Class::Min),
        (Epsilon::Plus, r(1, 2), Class::Degenerate),
        (Epsilon::Minus, r(1, 2), Class::Degenerate),
        (Epsilon::Plus, r(1, 1), Class::Max),
        (Epsilon::Minus, r(1, 1), Class::Saddle),
    ] {
        let cf = functional_direct(e).unwrap();
        let h = hessian_at(&cf, &z, &z, &u).unwrap();
        assert_eq!(h.class, class, "eps {e} u {u}");
        let two = r(2, 1);
        let expected = [&two * (r(1, 1) - &two * &u), &two * (r(1, 1) - &two * &u * r(e.value(), 1))];
        assert_eq!(h.matrix[0][0], expected[0]);
        assert_eq!(h.matrix[1][1], expected[1]);
        assert_eq!(h.matrix[0][1], z);
    }
}

#[test]
fn hessian_on_circle_of_maxima() {
    let cf = functional_direct(Epsilon::Plus).unwrap();
    let h = hessian_at(&cf, &r(1, 4), &r(1, 4), &r(1, 4)).unwrap();
    assert_eq!(h.gradient, [r(0, 1), r(0, 1)]);
    assert_eq!(h.class, Class::Degenerate);
    assert_eq!(h.semidefinite, Some("negative"));
}

#[test]
fn newton_plus_np() {
    let t = (0.2f64).sqrt();
    let rep = critical_points_numeric(Epsilon::Plus, t, 200, 7).unwrap();
    assert_eq!(rep.off_branch, 0);
    assert!(rep.points.iter().any(|p| p.x == 0.0 && p.y == 0.0 || p.x.hypot(p.y) < 1e-9));
    for p in &rep.points {
        let r2 = p.x * p.x + p.y * p.y;
        assert!(r2 < 1e-9 || (r2 - 0.15).abs() < 1e-9, "{p:?}");
        assert!(p.grad_norm < 1e-10);
    }
}

#[test]
fn newton_minus_one() {
    let rep = critical_points_numeric(Epsilon::Minus, 1.0, 200, 7).unwrap();
    assert_eq!(rep.off_branch, 0);
    for p in &rep.points {
        let origin = p.x.hypot(p.y) < 1e-9;
        let top = p.x.abs() < 1e-9 && (p.y.abs() - 0.75f64.sqrt()).abs() < 1e-9;
        assert!(origin || top, "{p:?}");
    }
    assert_eq!(rep.points.len(), 3);
}

#[test]
fn newton_plus_one() {
    let rep = critical_points_numeric(Epsilon::Plus, 1.0, 200, 7).unwrap();
    assert_eq!(rep.points.len(), 1);
    assert!(rep.points[0].x.hypot(rep.points[0].y) < 1e-9);
}

#[test]
#[allow(clippy::approx_constant)]
fn float_hessian_degenerate_near_half() {
    let cf = functional_direct(Epsilon::Plus).unwrap();
    let model = FloatModel::new(&cf, 0.7071067812).unwrap();
    assert_eq!(model.critical_point(0.0, 0.0).class, Class::Degenerate);
    let model = FloatModel::new(&cf, 1.0).unwrap();
    assert_eq!(model.critical_point(0.0, 0.0).class, Class::Max);
}

#[test]
fn finite_differences() {
    for (e, t) in [(Epsilon::Plus, 0.2f64.sqrt()), (Epsilon::Minus, 1.0), (Epsilon::Plus, 1.0)] {
        assert!(finite_difference_error(e, t, 100, 1e-6, 5).unwrap() < 1e-6);
    }
}

#[test]
fn grid_rows() {
    let g = Grid::new(-1.0, 1.0, -1.0, 1.0, 5).unwrap();
    let csv = grid_export(Epsilon::Plus, 0.2f64.sqrt(), &g, 1.0).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "x,y,F");
    assert_eq!(lines.len(), 26);
    let rows: Vec<[f64; 3]> = lines[1..]
        .iter()
        .map(|l| {
            let v: Vec<f64> = l.split(',').map(|s| s.parse().unwrap()).collect();
            [v[0], v[1], v[2]]
        })
        .collect();
    let origin = rows.iter().find(|r| r[0] == 0.0 && r[1] == 0.0).unwrap();
    assert_eq!(origin[2], 0.0);
    for row in &rows {
        let mirror = rows.iter().find(|r| r[0] == -row[0] && r[1] == row[1]).unwrap();
        assert_eq!(mirror[2], row[2]);
        let mirror = rows.iter().find(|r| r[0] == row[0] && r[1] == -row[1]).unwrap();
        assert_eq!(mirror[2], row[2]);
    }
    // y-major order
    assert!(rows[0][1] == rows[4][1] && rows[0][0] < rows[4][0]);
}

#[test]
fn value_at_critical_radius() {
    let cf = functional_direct(Epsilon::Plus).unwrap();
    let h = hessian_at(&cf, &r(0, 1), &r(0, 1), &r(1, 5)).unwrap();
    assert_eq!(h.value, r(0, 1));
    // r^2 = 3/20 on the x axis: F = -r^2 (2 r^2 - 3/5) = 9/200.
    let exact = cf
        .at_u(&r(1, 5))
        .unwrap()
        .substitute_square(Symbol::X, &Poly::ratio(3, 20))
        .unwrap()
        .substitute(&[(Symbol::Y, Poly::zero())])
        .unwrap();
    assert_eq!(exact, Poly::ratio(9, 200));
    let float = cf.eval(0.15f64.sqrt(), 0.0, 0.2f64.sqrt()).unwrap();
    assert!((float - 0.045).abs() < 1e-12);
}

#[test]
fn scan_rows() {
    let rows = moduli_scan(Epsilon::Plus, 0, &[r(1, 4)]).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].branch, "sphere");
    assert!((rows[0].r - 0.125f64.sqrt()).abs() < 1e-12);
    let rows = moduli_scan(Epsilon::Minus, 0, &[r(1, 2)]).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].branch, "circle");
    let rows = moduli_scan(Epsilon::Minus, 0, &[r(1, 1_000_000)]).unwrap();
    assert!((rows[0].r - 0.5).abs() < 1e-6);
    let csv = scan_csv(&moduli_scan(Epsilon::Minus, 0, &parse_u_range("0.01:0.49:49").unwrap()).unwrap());
    assert!(csv.starts_with("t,branch,r\n"));
    assert_eq!(csv.lines().count(), 1 + 2 * 49);
}

#[test]
fn special_shapes() {
    for e in Epsilon::BOTH {
        for (name, residual) in special_shape_residuals(e).unwrap() {
            assert!(residual.is_zero(), "{name}: {residual}");
        }
    }
}
