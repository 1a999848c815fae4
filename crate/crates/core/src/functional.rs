//! The Chern-Simons type functional on invariant connections.
//!
//! With `c = 1` (integration is extraction of the `eta123 v` coefficient) the
//! functional of `A = A0 + a` on the trivial bundle is
//! `-1/2 top(a ^ (da ^ psi - (da)^3 / 12))`, which in the reduced coordinates
//! `x = a3`, `y^2 = a1^2 + a2^2` reads
//! `-[(x^2 + y^2)(2(x^2 + y^2) - 1) + 2 t^2 (x^2 + eps y^2)]`.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::instanton::{classify_deformed, curvature, rational_to_f64, Branch, ConnectionAnsatz};
use crate::models::{Epsilon, SasakianPreset};
use crate::scalars::{parse_rational, Poly, Scalar, Symbol};

/// Float eigenvalues below this are treated as zero.
pub const DEGENERACY_TOLERANCE: f64 = 1e-9;
pub const NEWTON_TOLERANCE: f64 = 1e-10;
pub const NEWTON_MAX_ITERATIONS: usize = 100;
pub const NEWTON_MAX_HALVINGS: usize = 20;
pub const DEDUP_TOLERANCE: f64 = 1e-7;
pub const BRANCH_TOLERANCE: f64 = 1e-9;
pub const SEED_BOX: f64 = 1.2;

/// The functional as a polynomial, before and after reduction to `(x, y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedForm {
    pub epsilon: Epsilon,
    pub k: i64,
    /// In `a1, a2, a3, t`.
    pub full: Poly,
    /// In `x, y, t` after `a1 -> y`, `a2 -> 0`, `a3 -> x`.
    pub poly: Poly,
}

impl ClosedForm {
    fn new(epsilon: Epsilon, k: i64, full: Poly) -> Result<Self> {
        let poly = reduce(&full)?;
        Ok(ClosedForm {
            epsilon,
            k,
            full,
            poly,
        })
    }

    /// The reduced polynomial with `t^2` replaced by `u`.
    pub fn at_u(&self, u: &BigRational) -> Result<Poly> {
        self.poly
            .substitute_square(Symbol::T, &Poly::rational(u.clone()))
    }

    pub fn eval(&self, x: f64, y: f64, t: f64) -> Result<f64> {
        self.poly
            .eval_float(&[(Symbol::X, x), (Symbol::Y, y), (Symbol::T, t)])
    }
}

fn reduce(full: &Poly) -> Result<Poly> {
    full.substitute(&[
        (Symbol::A1, Poly::var(Symbol::Y)),
        (Symbol::A2, Poly::zero()),
        (Symbol::A3, Poly::var(Symbol::X)),
    ])
}

/// `-[(x^2 + y^2)(2(x^2 + y^2) - 1) + 2 t^2 (x^2 + eps y^2)]`.
pub fn expected_closed_form(epsilon: Epsilon) -> Poly {
    let x2 = Poly::var(Symbol::X).pow(2);
    let y2 = Poly::var(Symbol::Y).pow(2);
    let r2 = &x2 + &y2;
    let t2 = Poly::var(Symbol::T).pow(2);
    let inner = &r2 * &(&r2 * &Poly::from_i64(2) - Poly::one())
        + &t2 * &(&x2 + &(&y2 * &epsilon.poly())) * Poly::from_i64(2);
    -inner
}

/// `-1/2 top(a ^ (da ^ psi - (da)^3 / 12))` for symbolic `a`.
pub fn functional_direct(epsilon: Epsilon) -> Result<ClosedForm> {
    let preset = SasakianPreset::new(epsilon, false)?;
    let pres = preset.pres();
    let ansatz = ConnectionAnsatz::symbolic();
    let a = ansatz.one_form(pres)?;
    let da = pres.d(&a)?;
    let cubic = pres.power(&da, 3)?.scale(&Poly::ratio(1, 12));
    let inner = pres.wedge(&da, &preset.psi()?)?.try_sub(&cubic)?;
    let top = pres.top_coefficient(&pres.wedge(&a, &inner)?)?;
    ClosedForm::new(epsilon, 0, top.scale(&Scalar::ratio(-1, 2)))
}

/// `1/2 top(-cs2 ^ psi + cs4 / 12)` with
/// `cs_j = j int_0^1 a ^ F_s^(j-1) ds` and `F_s = k alpha + s da`.
///
/// For `k = 0` this agrees with [`functional_direct`]; for `k != 0` it has no
/// closed form to compare against and is reported as an extension.
pub fn functional_transgression(
    epsilon: Epsilon,
    k: i64,
    ansatz: &ConnectionAnsatz,
) -> Result<ClosedForm> {
    let preset = SasakianPreset::new(epsilon, k != 0)?;
    let pres = preset.pres();
    let background = ConnectionAnsatz::point(Default::default(), k);
    let f0 = curvature(pres, &background)?;
    let a = ansatz.one_form(pres)?;
    let fs = f0.try_add(&pres.d(&a)?.scale(&Poly::var(Symbol::S)))?;
    let integrate =
        |form: crate::cdga::Form| form.try_map_coefficients(|p| Ok(p.integrate_unit_interval(Symbol::S)));
    let cs2 = integrate(pres.wedge(&a, &fs)?)?.scale(&Poly::from_i64(2));
    let cs4 = integrate(pres.wedge(&a, &pres.power(&fs, 3)?)?)?.scale(&Poly::from_i64(4));
    let total = cs4
        .scale(&Poly::ratio(1, 12))
        .try_sub(&pres.wedge(&cs2, &preset.psi()?)?)?;
    let top = pres.top_coefficient(&total)?;
    ClosedForm::new(epsilon, k, top.scale(&Scalar::ratio(1, 2)))
}

/// `(dF/dx, dF/dy)`.
pub fn gradient(cf: &ClosedForm) -> (Poly, Poly) {
    (
        cf.poly.differentiate(Symbol::X),
        cf.poly.differentiate(Symbol::Y),
    )
}

/// `-2x(4(x^2 + y^2) + 2t^2 - 1)` and `-2y(4(x^2 + y^2) + 2 eps t^2 - 1)`.
pub fn expected_gradient(epsilon: Epsilon) -> (Poly, Poly) {
    let x = Poly::var(Symbol::X);
    let y = Poly::var(Symbol::Y);
    let r2 = x.pow(2) + y.pow(2);
    let t2 = Poly::var(Symbol::T).pow(2);
    let four_r2 = &r2 * &Poly::from_i64(4);
    let gx = &x * &Poly::from_i64(-2) * (&four_r2 + &t2 * &Poly::from_i64(2) - Poly::one());
    let gy = &y
        * &Poly::from_i64(-2)
        * (&four_r2 + &t2 * &(epsilon.poly() * Poly::from_i64(2)) - Poly::one());
    (gx, gy)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Class {
    Min,
    Max,
    Saddle,
    Degenerate,
}

impl Class {
    pub fn as_str(self) -> &'static str {
        match self {
            Class::Min => "min",
            Class::Max => "max",
            Class::Saddle => "saddle",
            Class::Degenerate => "degenerate",
        }
    }
}

/// Sign of the nonzero eigenvalue of a singular, nonzero Hessian.
fn semidefinite(trace_sign: std::cmp::Ordering) -> Option<&'static str> {
    match trace_sign {
        std::cmp::Ordering::Less => Some("negative"),
        std::cmp::Ordering::Greater => Some("positive"),
        std::cmp::Ordering::Equal => None,
    }
}

fn classify_signs(det: std::cmp::Ordering, trace: std::cmp::Ordering) -> Class {
    use std::cmp::Ordering::*;
    match (det, trace) {
        (Greater, Less) => Class::Max,
        (Greater, _) => Class::Min,
        (Less, _) => Class::Saddle,
        (Equal, _) => Class::Degenerate,
    }
}

/// Exact second-derivative data at a rational point.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactHessian {
    pub matrix: [[BigRational; 2]; 2],
    pub eigenvalues: [Scalar; 2],
    pub value: BigRational,
    pub gradient: [BigRational; 2],
    pub class: Class,
    pub semidefinite: Option<&'static str>,
}

fn poly_at(p: &Poly, x: &BigRational, y: &BigRational) -> Result<BigRational> {
    let v = p.substitute(&[
        (Symbol::X, Poly::rational(x.clone())),
        (Symbol::Y, Poly::rational(y.clone())),
    ])?;
    if v.is_zero() {
        return Ok(BigRational::zero());
    }
    v.rational_value()
        .ok_or_else(|| Error::Unsupported(format!("{v} does not evaluate to a rational")))
}

/// Literal Hessian of the reduced functional at `(x, y)` with `t^2 = u`.
pub fn hessian_at(cf: &ClosedForm, x: &BigRational, y: &BigRational, u: &BigRational) -> Result<ExactHessian> {
    let p = cf.at_u(u)?;
    let (px, py) = (p.differentiate(Symbol::X), p.differentiate(Symbol::Y));
    let hxx = poly_at(&px.differentiate(Symbol::X), x, y)?;
    let hxy = poly_at(&px.differentiate(Symbol::Y), x, y)?;
    let hyy = poly_at(&py.differentiate(Symbol::Y), x, y)?;
    let trace = &hxx + &hyy;
    let det = &hxx * &hyy - &hxy * &hxy;
    let two = BigRational::from_integer(BigInt::from(2));
    let disc = &trace * &trace - &det * BigRational::from_integer(BigInt::from(4));
    let root = Scalar::sqrt_rational(&disc)?.try_div(&Scalar::from_rational(two.clone()))?;
    let half_trace = Scalar::from_rational(&trace / &two);
    let eigenvalues = [half_trace.try_sub(&root)?, half_trace.try_add(&root)?];
    let class = classify_signs(det.cmp(&BigRational::zero()), trace.cmp(&BigRational::zero()));
    let semidefinite = if class == Class::Degenerate {
        semidefinite(trace.cmp(&BigRational::zero()))
    } else {
        None
    };
    Ok(ExactHessian {
        matrix: [[hxx, hxy.clone()], [hxy, hyy]],
        eigenvalues,
        value: poly_at(&p, x, y)?,
        gradient: [poly_at(&px, x, y)?, poly_at(&py, x, y)?],
        class,
        semidefinite,
    })
}

/// Float critical-point record.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalPoint {
    pub x: f64,
    pub y: f64,
    pub value: f64,
    pub class: Class,
    pub grad_norm: f64,
    pub hessian: [[f64; 2]; 2],
    pub eigenvalues: [f64; 2],
    pub degenerate: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub semidefinite: Option<&'static str>,
    /// Analytic branch the point lies on, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branch: Option<&'static str>,
}

/// Gradient and Hessian of the reduced functional at a fixed float `t`.
#[derive(Debug, Clone)]
pub struct FloatModel {
    value: Poly,
    grad: [Poly; 2],
    hess: [Poly; 3],
}

impl FloatModel {
    pub fn new(cf: &ClosedForm, t: f64) -> Result<Self> {
        // Bind t numerically once by folding it into the coefficients.
        let t_scalar = Scalar::from_rational(
            BigRational::from_f64(t).ok_or_else(|| Error::Parse(format!("bad t {t}")))?,
        );
        let value = cf.poly.substitute_scalars(&[(Symbol::T, t_scalar)])?;
        let gx = value.differentiate(Symbol::X);
        let gy = value.differentiate(Symbol::Y);
        let hess = [
            gx.differentiate(Symbol::X),
            gx.differentiate(Symbol::Y),
            gy.differentiate(Symbol::Y),
        ];
        Ok(FloatModel {
            value,
            grad: [gx, gy],
            hess,
        })
    }

    fn at(p: &Poly, x: f64, y: f64) -> f64 {
        p.eval_float(&[(Symbol::X, x), (Symbol::Y, y)])
            .expect("reduced functional only involves x and y")
    }

    pub fn value(&self, x: f64, y: f64) -> f64 {
        Self::at(&self.value, x, y)
    }

    pub fn gradient(&self, x: f64, y: f64) -> [f64; 2] {
        [Self::at(&self.grad[0], x, y), Self::at(&self.grad[1], x, y)]
    }

    pub fn hessian(&self, x: f64, y: f64) -> [[f64; 2]; 2] {
        let (a, b, c) = (
            Self::at(&self.hess[0], x, y),
            Self::at(&self.hess[1], x, y),
            Self::at(&self.hess[2], x, y),
        );
        [[a, b], [b, c]]
    }

    /// Classifies a point with the float tolerance.
    pub fn critical_point(&self, x: f64, y: f64) -> CriticalPoint {
        let h = self.hessian(x, y);
        let (eig, _) = sym_eigen(h);
        let g = self.gradient(x, y);
        let degenerate = eig.iter().any(|e| e.abs() < DEGENERACY_TOLERANCE);
        let class = if degenerate {
            Class::Degenerate
        } else if eig[0] > 0.0 {
            Class::Min
        } else if eig[1] < 0.0 {
            Class::Max
        } else {
            Class::Saddle
        };
        let semidefinite = if !degenerate {
            None
        } else if eig[0] < -DEGENERACY_TOLERANCE {
            Some("negative")
        } else if eig[1] > DEGENERACY_TOLERANCE {
            Some("positive")
        } else {
            None
        };
        CriticalPoint {
            x,
            y,
            value: self.value(x, y),
            class,
            grad_norm: g[0].hypot(g[1]),
            hessian: h,
            eigenvalues: eig,
            degenerate,
            semidefinite,
            branch: None,
        }
    }
}

/// Ascending eigenvalues and matching unit eigenvectors of a symmetric 2x2.
fn sym_eigen(h: [[f64; 2]; 2]) -> ([f64; 2], [[f64; 2]; 2]) {
    let (a, b, c) = (h[0][0], h[0][1], h[1][1]);
    let mean = 0.5 * (a + c);
    let radius = (0.25 * (a - c) * (a - c) + b * b).sqrt();
    let (l0, l1) = (mean - radius, mean + radius);
    let theta = 0.5 * (2.0 * b).atan2(a - c);
    let (s, co) = theta.sin_cos();
    // (cos, sin) belongs to the larger eigenvalue.
    ([l0, l1], [[-s, co], [co, s]])
}

fn newton(model: &FloatModel, start: [f64; 2]) -> Option<[f64; 2]> {
    let mut p = start;
    let norm = |g: [f64; 2]| g[0].hypot(g[1]);
    let mut g = model.gradient(p[0], p[1]);
    for _ in 0..NEWTON_MAX_ITERATIONS {
        if norm(g) < NEWTON_TOLERANCE {
            return Some(p);
        }
        let (eig, vecs) = sym_eigen(model.hessian(p[0], p[1]));
        let scale = eig.iter().fold(0.0f64, |m, e| m.max(e.abs())).max(1.0);
        let mut step = [0.0; 2];
        for (l, v) in eig.iter().zip(vecs.iter()) {
            if l.abs() > 1e-12 * scale {
                let proj = (v[0] * g[0] + v[1] * g[1]) / l;
                step[0] -= proj * v[0];
                step[1] -= proj * v[1];
            }
        }
        // Fallback direction: steepest descent for |g|^2 / 2, whose gradient is H g.
        let h = model.hessian(p[0], p[1]);
        let hg = [h[0][0] * g[0] + h[0][1] * g[1], h[1][0] * g[0] + h[1][1] * g[1]];
        let hg_sq = hg[0] * hg[0] + hg[1] * hg[1];
        let mut descent = [0.0; 2];
        if hg_sq > 0.0 {
            let len = (g[0] * g[0] + g[1] * g[1]) / hg_sq;
            descent = [-len * hg[0], -len * hg[1]];
        }
        let mut accepted = None;
        'search: for dir in [step, descent] {
            let mut factor = 1.0;
            for _ in 0..=NEWTON_MAX_HALVINGS {
                let q = [p[0] + factor * dir[0], p[1] + factor * dir[1]];
                let gq = model.gradient(q[0], q[1]);
                if norm(gq) < norm(g) {
                    accepted = Some((q, gq));
                    break 'search;
                }
                factor *= 0.5;
            }
        }
        match accepted {
            Some((q, gq)) => {
                p = q;
                g = gq;
            }
            None => return (norm(g) < NEWTON_TOLERANCE).then_some(p),
        }
    }
    (norm(g) < NEWTON_TOLERANCE).then_some(p)
}

/// Output of the numeric critical-point search.
#[derive(Debug, Clone, Serialize)]
pub struct NumericReport {
    pub epsilon: Epsilon,
    pub t: f64,
    pub seeds: usize,
    pub discarded: usize,
    pub off_branch: usize,
    pub points: Vec<CriticalPoint>,
}

/// The branch of the analytic solution set through the reduced point.
fn branch_of(branches: &[Branch], x: f64, y: f64) -> Option<&'static str> {
    let r2 = x * x + y * y;
    branches.iter().find_map(|b| {
        let on = match b {
            Branch::Trivial { .. } => r2.sqrt() < BRANCH_TOLERANCE,
            Branch::Sphere { radius_sq, .. } => (r2 - rational_to_f64(radius_sq)).abs() < BRANCH_TOLERANCE,
            Branch::Circle { radius_sq, .. } => {
                x.abs() < BRANCH_TOLERANCE && (y * y - rational_to_f64(radius_sq)).abs() < BRANCH_TOLERANCE
            }
            Branch::PointPair { a3_sq: Some(s), .. } => {
                y.abs() < BRANCH_TOLERANCE && (x * x - rational_to_f64(s)).abs() < BRANCH_TOLERANCE
            }
            Branch::PointPair { a3_sq: None, .. } => y.abs() < BRANCH_TOLERANCE,
            Branch::All => true,
        };
        on.then(|| b.name())
    })
}

/// Number of worker threads, capped by `DG2_THREADS` when set.
pub fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("DG2_THREADS") {
        let n: usize = v
            .parse()
            .map_err(|_| Error::Parse(format!("DG2_THREADS must be a positive integer, got {v}")))?;
        builder = builder.num_threads(n.max(1));
    }
    builder
        .build()
        .map_err(|e| Error::Unsupported(format!("thread pool: {e}")))
}

/// Damped Newton from `seeds` uniform starts in `[-1.2, 1.2]^2`.
pub fn critical_points_numeric(epsilon: Epsilon, t: f64, seeds: usize, rng_seed: u64) -> Result<NumericReport> {
    if !(t > 0.0) {
        return Err(Error::NonPositiveParameter(format!("t = {t} must be positive")));
    }
    if seeds == 0 {
        return Err(Error::NonPositiveParameter("seeds must be at least 1".into()));
    }
    let cf = functional_direct(epsilon)?;
    let model = FloatModel::new(&cf, t)?;
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let starts: Vec<[f64; 2]> = (0..seeds)
        .map(|_| [rng.gen_range(-SEED_BOX..=SEED_BOX), rng.gen_range(-SEED_BOX..=SEED_BOX)])
        .collect();
    let results: Vec<Option<[f64; 2]>> =
        thread_pool()?.install(|| starts.par_iter().map(|s| newton(&model, *s)).collect());

    let u = BigRational::from_f64(t * t).ok_or_else(|| Error::Parse(format!("bad t {t}")))?;
    let branches = classify_deformed(epsilon, &u, 0)?.branches;
    let mut points: Vec<CriticalPoint> = Vec::new();
    let mut discarded = 0;
    for r in results {
        let Some([x, y]) = r else {
            discarded += 1;
            continue;
        };
        if points.iter().any(|p| (p.x - x).hypot(p.y - y) < DEDUP_TOLERANCE) {
            continue;
        }
        let mut cp = model.critical_point(x, y);
        cp.branch = branch_of(&branches, x, y);
        points.push(cp);
    }
    points.sort_by(|a, b| (a.x, a.y).partial_cmp(&(b.x, b.y)).expect("finite"));
    let off_branch = points.iter().filter(|p| p.branch.is_none()).count();
    Ok(NumericReport {
        epsilon,
        t,
        seeds,
        discarded,
        off_branch,
        points,
    })
}

/// Largest deviation between central differences (step `h`) and the exact
/// gradient over `n` random points in `[-1, 1]^2`.
pub fn finite_difference_error(epsilon: Epsilon, t: f64, n: usize, h: f64, seed: u64) -> Result<f64> {
    let cf = functional_direct(epsilon)?;
    let model = FloatModel::new(&cf, t)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..n {
        let (x, y) = (rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0));
        let g = model.gradient(x, y);
        let fx = (model.value(x + h, y) - model.value(x - h, y)) / (2.0 * h);
        let fy = (model.value(x, y + h) - model.value(x, y - h)) / (2.0 * h);
        worst = worst.max((fx - g[0]).abs()).max((fy - g[1]).abs());
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub n: usize,
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64, n: usize) -> Result<Self> {
        if !(x_min < x_max) || !(y_min < y_max) {
            return Err(Error::InvalidGrid("need min < max on both axes".into()));
        }
        if n < 2 {
            return Err(Error::InvalidGrid(format!("n = {n} must be at least 2")));
        }
        Ok(Grid {
            x_min,
            x_max,
            y_min,
            y_max,
            n,
        })
    }

    /// `x_min:x_max:y_min:y_max:n`.
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 5 {
            return Err(Error::InvalidGrid(format!(
                "expected x_min:x_max:y_min:y_max:n, got {text}"
            )));
        }
        let f = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidGrid(format!("bad number {s}")))
        };
        let n = parts[4]
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::InvalidGrid(format!("bad count {}", parts[4])))?;
        Grid::new(f(parts[0])?, f(parts[1])?, f(parts[2])?, f(parts[3])?, n)
    }

    fn coord(min: f64, max: f64, i: usize, n: usize) -> f64 {
        if i + 1 == n {
            max
        } else {
            min + (max - min) * i as f64 / (n - 1) as f64
        }
    }
}

fn fmt_float(v: f64) -> String {
    // Avoid "-0" in exports.
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:.16e}")
}

/// CSV `x,y,F` over the grid, rows ordered by `y` then `x`.
pub fn grid_export(epsilon: Epsilon, t: f64, grid: &Grid, volume: f64) -> Result<String> {
    let cf = functional_direct(epsilon)?;
    let model = FloatModel::new(&cf, t)?;
    let rows: Vec<String> = thread_pool()?.install(|| {
        (0..grid.n)
            .into_par_iter()
            .map(|j| {
                let y = Grid::coord(grid.y_min, grid.y_max, j, grid.n);
                let mut block = String::new();
                for i in 0..grid.n {
                    let x = Grid::coord(grid.x_min, grid.x_max, i, grid.n);
                    let _ = writeln!(
                        block,
                        "{},{},{}",
                        fmt_float(x),
                        fmt_float(y),
                        fmt_float(volume * model.value(x, y))
                    );
                }
                block
            })
            .collect()
    });
    let mut out = String::from("x,y,F\n");
    for r in rows {
        out.push_str(&r);
    }
    Ok(out)
}

/// One row of the moduli scan.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub t: f64,
    pub branch: &'static str,
    pub r: f64,
}

/// `n` equally spaced values from `a` to `b`, parsed from `a:b:n`.
pub fn parse_u_range(text: &str) -> Result<Vec<BigRational>> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::Parse(format!("expected a:b:n, got {text}")));
    }
    let a = parse_rational(parts[0].trim())?;
    let b = parse_rational(parts[1].trim())?;
    let n: usize = parts[2]
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad count {}", parts[2])))?;
    if n == 0 {
        return Err(Error::Parse("count must be positive".into()));
    }
    if !a.is_positive() || b < a || (n > 1 && b == a) {
        return Err(Error::Parse(format!("need 0 < a < b, got {text}")));
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    let steps = BigRational::from_integer(BigInt::from(n - 1));
    Ok((0..n)
        .map(|i| &a + (&b - &a) * BigRational::from_integer(BigInt::from(i)) / &steps)
        .collect())
}

/// Radii of the nontrivial deformed branches at each `u`.
pub fn moduli_scan(epsilon: Epsilon, k: i64, us: &[BigRational]) -> Result<Vec<ScanRow>> {
    let mut rows = Vec::new();
    for u in us {
        let t = rational_to_f64(u).sqrt();
        for b in classify_deformed(epsilon, u, k)?.branches {
            if let Some(r2) = b.radius_sq() {
                rows.push(ScanRow {
                    t,
                    branch: b.name(),
                    r: rational_to_f64(r2).sqrt(),
                });
            }
        }
    }
    Ok(rows)
}

pub fn scan_csv(rows: &[ScanRow]) -> String {
    let mut out = String::from("t,branch,r\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{}", fmt_float(r.t), r.branch, fmt_float(r.r));
    }
    out
}

/// Shape of the functional at `t^2 = 1/2`: for `eps = 1` it equals
/// `-2 (x^2 + y^2)^2`; for `eps = -1` the `x` axis restriction is `-2 x^4`
/// and the `y` axis restriction `2 y^2 - 2 y^4`.
pub fn special_shape_residuals(epsilon: Epsilon) -> Result<Vec<(String, Poly)>> {
    let cf = functional_direct(epsilon)?;
    let half = BigRational::new(1.into(), 2.into());
    let p = cf.at_u(&half)?;
    let x = Poly::var(Symbol::X);
    let y = Poly::var(Symbol::Y);
    Ok(match epsilon {
        Epsilon::Plus => {
            let r2 = x.pow(2) + y.pow(2);
            vec![(
                "F = -2 (x^2 + y^2)^2".into(),
                &p + &(r2.pow(2) * Poly::from_i64(2)),
            )]
        }
        Epsilon::Minus => {
            let on_x = p.substitute(&[(Symbol::Y, Poly::zero())])?;
            let on_y = p.substitute(&[(Symbol::X, Poly::zero())])?;
            vec![
                ("F(x, 0) = -2 x^4".into(), &on_x + &(x.pow(4) * Poly::from_i64(2))),
                (
                    "F(0, y) = 2 y^2 - 2 y^4".into(),
                    on_y - (y.pow(2) * Poly::from_i64(2) - y.pow(4) * Poly::from_i64(2)),
                ),
            ]
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigen_decomposition() {
        let (e, v) = sym_eigen([[2.0, 1.0], [1.0, 2.0]]);
        assert!((e[0] - 1.0).abs() < 1e-14 && (e[1] - 3.0).abs() < 1e-14);
        for (l, vec) in e.iter().zip(v.iter()) {
            let hv = [2.0 * vec[0] + vec[1], vec[0] + 2.0 * vec[1]];
            assert!((hv[0] - l * vec[0]).abs() < 1e-14 && (hv[1] - l * vec[1]).abs() < 1e-14);
        }
        let (e, _) = sym_eigen([[-3.0, 0.0], [0.0, 5.0]]);
        assert_eq!(e, [-3.0, 5.0]);
    }

    #[test]
    fn grid_parsing() {
        assert!(Grid::parse("-1:1:-1:1:5").is_ok());
        assert!(matches!(Grid::parse("1:1:-1:1:5"), Err(Error::InvalidGrid(_))));
        assert!(matches!(Grid::parse("-1:1:-1:1:1"), Err(Error::InvalidGrid(_))));
        assert!(Grid::parse("-1:1:5").is_err());
    }

    #[test]
    fn u_range_parsing() {
        let us = parse_u_range("1/4:3/4:3").unwrap();
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(us, vec![r(1, 4), r(1, 2), r(3, 4)]);
        assert_eq!(parse_u_range("0.01:0.49:49").unwrap()[48], r(49, 100));
        assert!(parse_u_range("0:1:3").is_err());
        assert!(parse_u_range("1:0.5:3").is_err());
        assert!(parse_u_range("a:1:3").is_err());
    }
}
