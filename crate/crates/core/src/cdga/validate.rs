use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{Form, Monomial, Presentation};
use crate::scalars::{Poly, Symbol};

/// Outcome of one consistency check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed: true,
            witness: None,
        }
    }

    pub fn fail(name: impl Into<String>, witness: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed: false,
            witness: Some(witness.into()),
        }
    }

    /// Passes iff `residual` is the zero form; otherwise records it.
    pub fn zero_form(name: impl Into<String>, pres: &Presentation, residual: &Form) -> Self {
        if residual.is_zero() {
            Check::pass(name)
        } else {
            Check::fail(name, pres.render(residual))
        }
    }

    pub fn zero_poly(name: impl Into<String>, residual: &Poly) -> Self {
        if residual.is_zero() {
            Check::pass(name)
        } else {
            Check::fail(name, residual.to_string())
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub presentation: String,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ValidationSettings {
    pub seed: u64,
    pub leibniz_trials: usize,
    pub associativity_trials: usize,
    pub commutativity_trials: usize,
}

impl Default for ValidationSettings {
    fn default() -> Self {
        ValidationSettings {
            seed: 0x6d2,
            leibniz_trials: 200,
            associativity_trials: 500,
            commutativity_trials: 200,
        }
    }
}

/// Random homogeneous forms drawn from the normal-form basis.
pub(crate) struct FormSampler<'a> {
    pres: &'a Presentation,
    basis: Vec<Vec<Monomial>>,
    rng: ChaCha8Rng,
}

impl<'a> FormSampler<'a> {
    pub(crate) fn new(pres: &'a Presentation, seed: u64) -> Self {
        let basis = (0..=pres.top_degree()).map(|k| pres.basis(k)).collect();
        FormSampler {
            pres,
            basis,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn coefficient(&mut self) -> Poly {
        let mut n = 0;
        while n == 0 {
            n = self.rng.gen_range(-4i64..=4);
        }
        let c = Poly::from_i64(n);
        match self.rng.gen_range(0..4) {
            0 => c * Poly::var(Symbol::T),
            1 => c * Poly::var(Symbol::A1),
            _ => c,
        }
    }

    pub(crate) fn form(&mut self, degree: u32) -> Form {
        let mut out = Form::zero(degree);
        let len = self.basis.get(degree as usize).map_or(0, Vec::len);
        if len == 0 {
            return out;
        }
        let count = self.rng.gen_range(1..=3);
        for _ in 0..count {
            let m = self.basis[degree as usize][self.rng.gen_range(0..len)].clone();
            let c = self.coefficient();
            out = &out + &Form::from_coefficients(degree, [(m, c)]);
        }
        out
    }

    /// Degrees `(p, q)` with `p + q` at most the top degree.
    pub(crate) fn degree_pair(&mut self) -> (u32, u32) {
        let top = self.pres.top_degree();
        let p = self.rng.gen_range(0..=top);
        let q = self.rng.gen_range(0..=top - p);
        (p, q)
    }

    pub(crate) fn degree_triple(&mut self) -> (u32, u32, u32) {
        let top = self.pres.top_degree();
        let p = self.rng.gen_range(0..=top);
        let q = self.rng.gen_range(0..=top - p);
        let r = self.rng.gen_range(0..=top - p - q);
        (p, q, r)
    }
}

fn sign_power(degree: u32) -> Poly {
    if degree % 2 == 1 {
        Poly::from_i64(-1)
    } else {
        Poly::one()
    }
}

fn settle(name: String, result: crate::Result<Check>) -> Check {
    result.unwrap_or_else(|e| Check::fail(name, e.to_string()))
}

pub(crate) fn run(pres: &Presentation, settings: &ValidationSettings) -> ValidationReport {
    let mut checks = Vec::new();

    for (i, g) in pres.generators().iter().enumerate() {
        let name = format!("d^2({}) = 0", g.name);
        let result = pres
            .d(pres.generator_differential(i))
            .map(|dd| Check::zero_form(name.clone(), pres, &dd));
        checks.push(settle(name, result));
    }

    let mut witness = Vec::new();
    for (i, g) in pres.generators().iter().enumerate() {
        let d = pres.generator_differential(i);
        if !d.is_zero() && d.degree() != g.degree + 1 {
            witness.push(format!("d({}) has degree {}", g.name, d.degree()));
        }
    }
    for r in pres.relations() {
        let lhs = pres.degree_of(&r.pattern);
        if !r.rhs.is_zero() && r.rhs.degree() != lhs {
            witness.push(format!(
                "{} (degree {lhs}) -> degree {}",
                pres.render_monomial(&r.pattern),
                r.rhs.degree()
            ));
        }
    }
    checks.push(if witness.is_empty() {
        Check::pass("relation and differential degrees")
    } else {
        Check::fail("relation and differential degrees", witness.join("; "))
    });

    // d must respect every relation: d(pattern) = d(rhs)
    let mut witness = None;
    for r in pres.relations() {
        let lhs = pres.differential_of_product(&r.pattern.factors(), &Poly::one());
        let rhs = pres.d(&r.rhs);
        match (lhs, rhs) {
            (Ok(l), Ok(rh)) => {
                let diff = l.try_sub(&rh).unwrap_or_else(|_| l.clone());
                if !diff.is_zero() {
                    witness = Some(format!(
                        "{}: {}",
                        pres.render_monomial(&r.pattern),
                        pres.render(&diff)
                    ));
                    break;
                }
            }
            (Err(e), _) | (_, Err(e)) => {
                witness = Some(e.to_string());
                break;
            }
        }
    }
    checks.push(match witness {
        None => Check::pass("differential respects relations"),
        Some(w) => Check::fail("differential respects relations", w),
    });

    let mut sampler = FormSampler::new(pres, settings.seed);

    let name = format!("Leibniz rule ({} random pairs)", settings.leibniz_trials);
    let mut result = Ok(Check::pass(name.clone()));
    for _ in 0..settings.leibniz_trials {
        let (p, q) = sampler.degree_pair();
        let (a, b) = (sampler.form(p), sampler.form(q));
        let outcome = (|| -> crate::Result<Option<String>> {
            let lhs = pres.d(&pres.wedge(&a, &b)?)?;
            let first = pres.wedge(&pres.d(&a)?, &b)?;
            let second = pres.wedge(&a, &pres.d(&b)?)?.scale(&sign_power(p));
            let diff = lhs.try_sub(&first.try_add(&second)?)?;
            Ok((!diff.is_zero()).then(|| {
                format!(
                    "a = {}, b = {}, defect = {}",
                    pres.render(&a),
                    pres.render(&b),
                    pres.render(&diff)
                )
            }))
        })();
        match outcome {
            Ok(None) => {}
            Ok(Some(w)) => {
                result = Ok(Check::fail(name.clone(), w));
                break;
            }
            Err(e) => {
                result = Err(e);
                break;
            }
        }
    }
    checks.push(settle(name, result));

    let name = format!(
        "associativity ({} random triples)",
        settings.associativity_trials
    );
    let mut result = Ok(Check::pass(name.clone()));
    for _ in 0..settings.associativity_trials {
        let (p, q, r) = sampler.degree_triple();
        let (a, b, c) = (sampler.form(p), sampler.form(q), sampler.form(r));
        let outcome = (|| -> crate::Result<Option<String>> {
            let left = pres.wedge(&pres.wedge(&a, &b)?, &c)?;
            let right = pres.wedge(&a, &pres.wedge(&b, &c)?)?;
            let diff = left.try_sub(&right)?;
            Ok((!diff.is_zero()).then(|| {
                format!(
                    "a = {}, b = {}, c = {}, defect = {}",
                    pres.render(&a),
                    pres.render(&b),
                    pres.render(&c),
                    pres.render(&diff)
                )
            }))
        })();
        match outcome {
            Ok(None) => {}
            Ok(Some(w)) => {
                result = Ok(Check::fail(name.clone(), w));
                break;
            }
            Err(e) => {
                result = Err(e);
                break;
            }
        }
    }
    checks.push(settle(name, result));

    let name = format!(
        "graded commutativity ({} random pairs)",
        settings.commutativity_trials
    );
    let mut result = Ok(Check::pass(name.clone()));
    for _ in 0..settings.commutativity_trials {
        let (p, q) = sampler.degree_pair();
        let (a, b) = (sampler.form(p), sampler.form(q));
        let outcome = (|| -> crate::Result<Option<String>> {
            let ab = pres.wedge(&a, &b)?;
            let ba = pres.wedge(&b, &a)?.scale(&sign_power(p * q));
            let diff = ab.try_sub(&ba)?;
            let renormalized = pres.normalize(&ab)?;
            Ok(if !diff.is_zero() {
                Some(format!("a = {}, b = {}", pres.render(&a), pres.render(&b)))
            } else if renormalized != ab {
                Some(format!("normalize not idempotent on {}", pres.render(&ab)))
            } else {
                None
            })
        })();
        match outcome {
            Ok(None) => {}
            Ok(Some(w)) => {
                result = Ok(Check::fail(name.clone(), w));
                break;
            }
            Err(e) => {
                result = Err(e);
                break;
            }
        }
    }
    checks.push(settle(name, result));

    ValidationReport {
        presentation: pres.name().to_string(),
        checks,
    }
}
