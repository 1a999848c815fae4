//! Invariant connections on the trivial bundle and on pullbacks of `O(k)`,
//! their curvature, the plain and deformed instanton residuals, and the
//! classification of the solution sets.
//!
//! All forms are real: the complex curvature is `F_A = i F` with `F` the form
//! computed here, so `F_A ^ psi + F_A^3 / 6 = i (F ^ psi - F^3 / 6)` and the
//! deformed residual is `F ^ psi - F^3 / 6`. It carries an overall factor 2
//! relative to the brackets usually displayed.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::cdga::{Check, Form, Monomial, Presentation};
use crate::error::{Error, Result};
use crate::models::{Epsilon, SasakianPreset, CYCLIC, ETA};
use crate::scalars::{is_rational_square, rational_fraction, Poly, Scalar, Symbol};

/// Float tolerance for sampled residuals.
pub const SAMPLE_TOLERANCE: f64 = 1e-10;

/// `a = a1 eta1 + a2 eta2 + a3 eta3` on the bundle with first Chern class
/// `k alpha`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionAnsatz {
    pub coeffs: [Poly; 3],
    pub k: Poly,
}

impl ConnectionAnsatz {
    /// Symbolic `a1, a2, a3` on the trivial bundle.
    pub fn symbolic() -> Self {
        ConnectionAnsatz {
            coeffs: Symbol::ansatz().map(Poly::var),
            k: Poly::zero(),
        }
    }

    pub fn with_k(mut self, k: Poly) -> Self {
        self.k = k;
        self
    }

    pub fn point(a: [BigRational; 3], k: i64) -> Self {
        ConnectionAnsatz {
            coeffs: a.map(Poly::rational),
            k: Poly::from_i64(k),
        }
    }

    /// The 1-form `a` (without the background connection).
    pub fn one_form(&self, pres: &Presentation) -> Result<Form> {
        let mut out = Form::zero(1);
        for (i, c) in self.coeffs.iter().enumerate() {
            out = out.try_add(&pres.form(&[(c.clone(), &[ETA[i]])])?)?;
        }
        Ok(out)
    }

    /// Background curvature `k alpha`.
    pub fn background(&self, pres: &Presentation) -> Result<Form> {
        if self.k.is_zero() {
            return Ok(Form::zero(2));
        }
        if !pres.has_generator("alpha") {
            return Err(Error::MissingAlpha);
        }
        pres.form(&[(self.k.clone(), &["alpha"])])
    }
}

/// `F = da + k alpha`; with `F_A = i F` this is
/// `-2 sum a_i (omega_i + eta_jk) + k alpha`.
pub fn curvature(pres: &Presentation, a: &ConnectionAnsatz) -> Result<Form> {
    let background = a.background(pres)?;
    pres.d(&a.one_form(pres)?)?.try_add(&background)
}

/// A degree-6 residual together with its basis coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    pub form: Form,
    pub coefficients: Vec<(Monomial, String, Poly)>,
}

impl Residual {
    pub fn new(pres: &Presentation, form: Form) -> Self {
        let coefficients = form
            .terms()
            .map(|(m, c)| (m.clone(), pres.render_monomial(m), c.clone()))
            .collect();
        Residual { form, coefficients }
    }

    pub fn is_zero(&self) -> bool {
        self.form.is_zero()
    }

    /// Reassembles the form from the extracted coefficients.
    pub fn rebuild(&self) -> Form {
        Form::from_coefficients(
            self.form.degree(),
            self.coefficients.iter().map(|(m, _, c)| (m.clone(), c.clone())),
        )
    }

    /// Coefficient of `eta_j eta_k v` for `(i, j, k)` cyclic.
    pub fn horizontal(&self, pres: &Presentation, i: usize) -> Result<Poly> {
        let (_, j, k) = CYCLIC[i];
        pres.coefficient(&self.form, &[ETA[j], ETA[k], "v"])
    }

    /// The three `eta_jk v` coefficients, failing if anything else survives.
    pub fn horizontal_all(&self, pres: &Presentation) -> Result<[Poly; 3]> {
        let out = [
            self.horizontal(pres, 0)?,
            self.horizontal(pres, 1)?,
            self.horizontal(pres, 2)?,
        ];
        let mut rebuilt = Form::zero(6);
        for (i, c) in out.iter().enumerate() {
            let (_, j, k) = CYCLIC[i];
            rebuilt = rebuilt.try_add(&pres.form(&[(c.clone(), &[ETA[j], ETA[k], "v"])])?)?;
        }
        let rest = self.form.try_sub(&rebuilt)?;
        if !rest.is_zero() {
            return Err(Error::Inconsistent(format!(
                "residual has components off eta_jk v: {}",
                pres.render(&rest)
            )));
        }
        Ok(out)
    }

    /// Applies `f` to every coefficient.
    pub fn map(&self, pres: &Presentation, f: impl FnMut(&Poly) -> Result<Poly>) -> Result<Self> {
        Ok(Residual::new(pres, self.form.try_map_coefficients(f)?))
    }
}

/// `F ^ psi`.
pub fn g2_residual(preset: &SasakianPreset, a: &ConnectionAnsatz) -> Result<Residual> {
    let pres = preset.pres();
    let f = curvature(pres, a)?;
    Ok(Residual::new(pres, pres.wedge(&f, &preset.psi()?)?))
}

/// `F ^ psi - F^3 / 6`.
pub fn deformed_residual(preset: &SasakianPreset, a: &ConnectionAnsatz) -> Result<Residual> {
    let pres = preset.pres();
    let f = curvature(pres, a)?;
    let cubic = pres.power(&f, 3)?.scale(&Poly::ratio(1, 6));
    let form = pres.wedge(&f, &preset.psi()?)?.try_sub(&cubic)?;
    Ok(Residual::new(pres, form))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Equation {
    G2,
    Deformed,
}

impl std::str::FromStr for Equation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "g2" => Ok(Equation::G2),
            "deformed" => Ok(Equation::Deformed),
            other => Err(Error::Parse(format!("unknown equation {other}"))),
        }
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Equation::G2 => "g2",
            Equation::Deformed => "deformed",
        })
    }
}

fn ser_rational<S: Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rational_fraction(r))
}

fn ser_opt_rational<S: Serializer>(
    r: &Option<BigRational>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&rational_fraction(r)),
        None => s.serialize_none(),
    }
}

fn is_false(b: &bool) -> bool {
    !*b
}

/// One connected piece of a solution set in the `(a1, a2, a3)` space.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Branch {
    Sphere {
        #[serde(serialize_with = "ser_rational")]
        radius_sq: BigRational,
        degenerate: bool,
    },
    /// Circle in the plane `a3 = 0`.
    Circle {
        #[serde(serialize_with = "ser_rational")]
        radius_sq: BigRational,
        plane: &'static str,
        degenerate: bool,
    },
    /// `a1 = a2 = 0`, `a3 = +-sqrt(a3_sq)`; `line` marks the whole axis.
    PointPair {
        #[serde(serialize_with = "ser_opt_rational")]
        a3_sq: Option<BigRational>,
        degenerate: bool,
        #[serde(skip_serializing_if = "is_false")]
        line: bool,
    },
    Trivial {
        #[serde(skip_serializing_if = "is_false")]
        degenerate: bool,
    },
    /// Every connection in the ansatz solves.
    All,
}

impl Branch {
    pub fn name(&self) -> &'static str {
        match self {
            Branch::Sphere { .. } => "sphere",
            Branch::Circle { .. } => "circle",
            Branch::PointPair { .. } => "point_pair",
            Branch::Trivial { .. } => "trivial",
            Branch::All => "all",
        }
    }

    /// Radius squared of spheres and circles, `a3^2` of point pairs.
    pub fn radius_sq(&self) -> Option<&BigRational> {
        match self {
            Branch::Sphere { radius_sq, .. } | Branch::Circle { radius_sq, .. } => Some(radius_sq),
            Branch::PointPair { a3_sq, .. } => a3_sq.as_ref(),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolutionSet {
    pub epsilon: Epsilon,
    #[serde(serialize_with = "ser_rational")]
    pub u: BigRational,
    pub k: i64,
    pub equation: Equation,
    pub branches: Vec<Branch>,
}

impl SolutionSet {
    pub fn find(&self, name: &str) -> Option<&Branch> {
        self.branches.iter().find(|b| b.name() == name)
    }

    pub fn is_trivial_only(&self) -> bool {
        self.branches.iter().all(|b| matches!(b, Branch::Trivial { .. }))
    }
}

fn check_u(u: &BigRational) -> Result<()> {
    if u.is_positive() {
        Ok(())
    } else {
        Err(Error::NonPositiveParameter(format!(
            "u = {} must be positive",
            rational_fraction(u)
        )))
    }
}

/// Symbolic residual coefficients with `t^2` replaced by `u` and `k` bound.
pub fn residual_coefficients(
    equation: Equation,
    epsilon: Epsilon,
    u: &BigRational,
    k: i64,
) -> Result<[Poly; 3]> {
    let preset = SasakianPreset::new(epsilon, k != 0)?;
    let a = ConnectionAnsatz::symbolic().with_k(Poly::from_i64(k));
    let residual = match equation {
        Equation::G2 => g2_residual(&preset, &a)?,
        Equation::Deformed => deformed_residual(&preset, &a)?,
    };
    let coeffs = residual.horizontal_all(preset.pres())?;
    let u = Poly::rational(u.clone());
    let mut out = coeffs.clone();
    for (o, c) in out.iter_mut().zip(&coeffs) {
        *o = c.substitute_square(Symbol::T, &u)?;
    }
    Ok(out)
}

fn divide_by(p: &Poly, sym: Symbol) -> Result<Poly> {
    let (common, rest) = p.split_common_monomial();
    if p.is_zero() {
        return Ok(Poly::zero());
    }
    if common.get(sym) == 0 {
        return Err(Error::Inconsistent(format!("{p} is not divisible by {sym}")));
    }
    let others = common.with(sym, common.get(sym) - 1);
    Ok(Poly::term(Scalar::one(), others) * rest)
}

fn rational_of(p: &Poly) -> Result<BigRational> {
    if p.is_zero() {
        return Ok(BigRational::zero());
    }
    p.rational_value()
        .ok_or_else(|| Error::Inconsistent(format!("{p} is not a rational constant")))
}

/// Trivial flat connection always; at `u = 1/2` either every connection
/// (`epsilon = 1`) or the `a3` axis (`epsilon = -1`).
pub fn classify_g2(epsilon: Epsilon, u: &BigRational) -> Result<SolutionSet> {
    check_u(u)?;
    let coeffs = residual_coefficients(Equation::G2, epsilon, u, 0)?;
    let mut c = Vec::with_capacity(3);
    for (i, p) in coeffs.iter().enumerate() {
        c.push(rational_of(&divide_by(p, Symbol::ansatz()[i])?)?);
    }
    let zero: Vec<bool> = c.iter().map(Zero::is_zero).collect();
    let mut branches = Vec::new();
    match (zero[0], zero[1], zero[2]) {
        (true, true, true) => branches.push(Branch::All),
        (false, false, true) => {
            branches.push(Branch::PointPair {
                a3_sq: None,
                degenerate: false,
                line: true,
            });
            branches.push(Branch::Trivial { degenerate: false });
        }
        (false, false, false) => branches.push(Branch::Trivial { degenerate: false }),
        _ => {
            return Err(Error::Unsupported(format!(
                "unexpected vanishing pattern {zero:?}"
            )))
        }
    }
    Ok(SolutionSet {
        epsilon,
        u: u.clone(),
        k: 0,
        equation: Equation::G2,
        branches,
    })
}

/// Each coefficient is `2 a_i (4 r^2 - m_i)`; nonzero solutions need
/// `4 r^2 = m_i` for every `i` with `a_i != 0`.
pub fn classify_deformed(epsilon: Epsilon, u: &BigRational, k: i64) -> Result<SolutionSet> {
    check_u(u)?;
    let coeffs = residual_coefficients(Equation::Deformed, epsilon, u, k)?;
    let r2 = Symbol::ansatz()
        .iter()
        .map(|&s| Poly::var(s).pow(2))
        .fold(Poly::zero(), |acc, p| acc + p);
    let mut m = Vec::with_capacity(3);
    for (i, p) in coeffs.iter().enumerate() {
        let q = divide_by(p, Symbol::ansatz()[i])?;
        let constant = &q - &(&r2 * &Poly::from_i64(8));
        m.push(-rational_of(&constant)? / BigRational::from_integer(2.into()));
    }
    if m[0] != m[1] {
        return Err(Error::Unsupported(
            "a1 and a2 coefficients differ".to_string(),
        ));
    }
    let four = BigRational::from_integer(BigInt::from(4));
    let (mh, mv) = (&m[0] / &four, &m[2] / &four);
    let mut branches = Vec::new();
    let mut degenerate = false;
    let mut add = |radius: &BigRational, branch: Branch| {
        if radius.is_positive() {
            branches.push(branch);
        } else if radius.is_zero() {
            degenerate = true;
        }
    };
    if mh == mv {
        add(
            &mh,
            Branch::Sphere {
                radius_sq: mh.clone(),
                degenerate: false,
            },
        );
    } else {
        add(
            &mh,
            Branch::Circle {
                radius_sq: mh.clone(),
                plane: "a3=0",
                degenerate: false,
            },
        );
        add(
            &mv,
            Branch::PointPair {
                a3_sq: Some(mv.clone()),
                degenerate: false,
                line: false,
            },
        );
    }
    branches.push(Branch::Trivial { degenerate });
    Ok(SolutionSet {
        epsilon,
        u: u.clone(),
        k,
        equation: Equation::Deformed,
        branches,
    })
}

/// Outcome of substituting branches back into the residual.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
    pub exact_points: usize,
    pub float_samples: usize,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn small_rationals(max_den: i64) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero()];
    for q in 1..=max_den {
        for p in 1..=(3 * q) {
            let r = BigRational::new(p.into(), q.into());
            if r.denom() == &BigInt::from(q) {
                out.push(r);
            }
        }
    }
    out
}

/// A nonnegative rational `a` with `target - a^2` a rational square, if one
/// has small height.
fn split_two_squares(target: &BigRational) -> Option<(BigRational, BigRational)> {
    if let Some(s) = is_rational_square(target) {
        return Some((s, BigRational::zero()));
    }
    small_rationals(24).into_iter().find_map(|a| {
        let rest = target - &a * &a;
        if rest.is_negative() {
            return None;
        }
        is_rational_square(&rest).map(|b| (a, b))
    })
}

/// Rational point on the sphere of radius squared `target`.
fn split_three_squares(target: &BigRational) -> Option<[BigRational; 3]> {
    if let Some((a, b)) = split_two_squares(target) {
        return Some([a, b, BigRational::zero()]);
    }
    small_rationals(12).into_iter().find_map(|c| {
        let rest = target - &c * &c;
        if rest.is_negative() || rest.is_zero() {
            return None;
        }
        let rest_sq = is_rational_square(&rest);
        let (a, b) = match rest_sq {
            Some(s) => (s, BigRational::zero()),
            None => small_rationals(12).into_iter().find_map(|a| {
                let r = &rest - &a * &a;
                if r.is_negative() {
                    return None;
                }
                is_rational_square(&r).map(|b| (a, b))
            })?,
        };
        Some([a, b, c])
    })
}

fn eval_at(coeffs: &[Poly; 3], point: &[BigRational; 3]) -> Result<Vec<Poly>> {
    let bindings: Vec<(Symbol, Poly)> = Symbol::ansatz()
        .iter()
        .zip(point)
        .map(|(&s, v)| (s, Poly::rational(v.clone())))
        .collect();
    coeffs.iter().map(|c| c.substitute(&bindings)).collect()
}

/// Residual coefficients at an exact point; all zero iff the point solves.
pub fn residual_at(
    equation: Equation,
    epsilon: Epsilon,
    u: &BigRational,
    k: i64,
    point: &[BigRational; 3],
) -> Result<Vec<Poly>> {
    eval_at(&residual_coefficients(equation, epsilon, u, k)?, point)
}

fn symbolic_on_branch(coeffs: &[Poly; 3], branch: &Branch) -> Result<Vec<Poly>> {
    let (a1, a2, a3) = (Symbol::A1, Symbol::A2, Symbol::A3);
    let zero = |syms: &[Symbol], p: &Poly| {
        let b: Vec<(Symbol, Poly)> = syms.iter().map(|&s| (s, Poly::zero())).collect();
        p.substitute(&b)
    };
    coeffs
        .iter()
        .map(|p| match branch {
            Branch::Sphere { radius_sq, .. } => {
                let rest = Poly::rational(radius_sq.clone())
                    - Poly::var(a1).pow(2)
                    - Poly::var(a2).pow(2);
                p.reduce_square(a3, &rest)
            }
            Branch::Circle { radius_sq, .. } => {
                let rest = Poly::rational(radius_sq.clone()) - Poly::var(a1).pow(2);
                zero(&[a3], p)?.reduce_square(a2, &rest)
            }
            Branch::PointPair { a3_sq: Some(s), .. } => {
                zero(&[a1, a2], p)?.reduce_square(a3, &Poly::rational(s.clone()))
            }
            Branch::PointPair { a3_sq: None, .. } => zero(&[a1, a2], p),
            Branch::Trivial { .. } => zero(&[a1, a2, a3], p),
            Branch::All => Ok(p.clone()),
        })
        .collect()
}

fn exact_points(branch: &Branch) -> Vec<[BigRational; 3]> {
    let z = BigRational::zero;
    match branch {
        Branch::Sphere { radius_sq, .. } => split_three_squares(radius_sq)
            .map(|[a, b, c]| vec![[a.clone(), b.clone(), c.clone()], [-c, a, -b]])
            .unwrap_or_default(),
        Branch::Circle { radius_sq, .. } => split_two_squares(radius_sq)
            .map(|(a, b)| vec![[a.clone(), b.clone(), z()], [-b, a, z()]])
            .unwrap_or_default(),
        Branch::PointPair { a3_sq: Some(s), .. } => is_rational_square(s)
            .map(|r| vec![[z(), z(), r.clone()], [z(), z(), -r]])
            .unwrap_or_default(),
        Branch::PointPair { a3_sq: None, .. } => {
            vec![[z(), z(), BigRational::one()], [z(), z(), BigRational::new(7.into(), 3.into())]]
        }
        Branch::Trivial { .. } => vec![[z(), z(), z()]],
        Branch::All => vec![[BigRational::one(), BigRational::new((-2).into(), 3.into()), z()]],
    }
}

fn float_point(branch: &Branch, rng: &mut ChaCha8Rng) -> [f64; 3] {
    let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let z: f64 = rng.gen_range(-1.0..1.0);
    let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    match branch {
        Branch::Sphere { radius_sq, .. } => {
            let r = rational_to_f64(radius_sq).sqrt();
            let s = (1.0 - z * z).sqrt();
            [r * s * theta.cos(), r * s * theta.sin(), r * z]
        }
        Branch::Circle { radius_sq, .. } => {
            let r = rational_to_f64(radius_sq).sqrt();
            [r * theta.cos(), r * theta.sin(), 0.0]
        }
        Branch::PointPair { a3_sq: Some(s), .. } => [0.0, 0.0, sign * rational_to_f64(s).sqrt()],
        Branch::PointPair { a3_sq: None, .. } => [0.0, 0.0, 2.0 * z],
        Branch::Trivial { .. } => [0.0, 0.0, 0.0],
        Branch::All => [z, theta.cos(), theta.sin()],
    }
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    Scalar::from_rational(r.clone()).to_f64()
}

/// Substitutes each branch back into the residual: symbolically, at exact
/// rational points where they exist, and at `samples` float points.
pub fn verify_solution_set(set: &SolutionSet, samples: usize, seed: u64) -> Result<VerificationReport> {
    let coeffs = residual_coefficients(set.equation, set.epsilon, &set.u, set.k)?;
    let mut checks = Vec::new();
    let mut exact = 0;
    let mut floats = 0;
    let label = |b: &Branch| match b.radius_sq() {
        Some(r) => format!("{} {}", b.name(), rational_fraction(r)),
        None => b.name().to_string(),
    };
    for (n, branch) in set.branches.iter().enumerate() {
        let name = label(branch);
        let symbolic = symbolic_on_branch(&coeffs, branch)?;
        let bad: Vec<String> = symbolic
            .iter()
            .filter(|p| !p.is_zero())
            .map(ToString::to_string)
            .collect();
        checks.push(if bad.is_empty() {
            Check::pass(format!("{name}: residual vanishes symbolically"))
        } else {
            Check::fail(format!("{name}: residual vanishes symbolically"), bad.join("; "))
        });

        for point in exact_points(branch) {
            exact += 1;
            let values = eval_at(&coeffs, &point)?;
            let shown: Vec<String> = point.iter().map(rational_fraction).collect();
            let name = format!("{name}: exact point ({})", shown.join(", "));
            checks.push(if values.iter().all(Poly::is_zero) {
                Check::pass(name)
            } else {
                let w: Vec<String> = values.iter().map(ToString::to_string).collect();
                Check::fail(name, w.join("; "))
            });
        }

        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(n as u64));
        let points: Vec<[f64; 3]> = (0..samples).map(|_| float_point(branch, &mut rng)).collect();
        floats += points.len();
        let worst = points
            .par_iter()
            .map(|p| {
                let b = [(Symbol::A1, p[0]), (Symbol::A2, p[1]), (Symbol::A3, p[2])];
                coeffs
                    .iter()
                    .map(|c| c.eval_float(&b).map(f64::abs))
                    .try_fold(0.0f64, |acc, v| v.map(|v| acc.max(v)))
            })
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0f64, f64::max);
        let name = format!("{name}: {samples} float samples within {SAMPLE_TOLERANCE:e}");
        checks.push(if worst < SAMPLE_TOLERANCE {
            Check::pass(name)
        } else {
            Check::fail(name, format!("max |residual| = {worst:e}"))
        });
    }
    Ok(VerificationReport {
        checks,
        exact_points: exact,
        float_samples: floats,
    })
}
