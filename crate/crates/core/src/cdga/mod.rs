//! Finitely presented graded-commutative differential algebras.
//!
//! A [`Presentation`] lists generators with degrees, product relations
//! oriented as rewrite rules, the differential on generators and a top
//! monomial. Forms are kept in normal form: factors sorted in generator
//! order with Koszul signs, no relation redex left, nothing above the top
//! degree.

mod form;
mod validate;

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalars::Poly;

pub use form::{Form, Monomial};
pub use validate::{Check, ValidationReport, ValidationSettings};

/// Maximum rewrite steps for a single product before giving up.
pub const REWRITE_BUDGET: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
}

impl Generator {
    pub fn is_odd(&self) -> bool {
        self.degree % 2 == 1
    }
}

/// A product pattern (multiset of generators) and its normal form.
#[derive(Debug, Clone, PartialEq)]
pub struct Relation {
    pub pattern: Monomial,
    pub rhs: Form,
}

/// Raw term used when declaring a presentation: coefficient times the
/// product of the named generators in the given order.
pub type RawTerm<'a> = (Poly, &'a [&'a str]);

#[derive(Debug, Clone)]
pub struct Presentation {
    name: String,
    generators: Vec<Generator>,
    relations: Vec<Relation>,
    differential: Vec<Form>,
    top: Monomial,
    top_degree: u32,
}

#[derive(Debug, Clone)]
pub struct PresentationBuilder {
    name: String,
    generators: Vec<Generator>,
    relations: Vec<(Vec<String>, Vec<(Poly, Vec<String>)>)>,
    differential: BTreeMap<String, Vec<(Poly, Vec<String>)>>,
    top: Vec<String>,
}

fn owned_terms(terms: &[RawTerm<'_>]) -> Vec<(Poly, Vec<String>)> {
    terms
        .iter()
        .map(|(c, names)| (c.clone(), names.iter().map(|s| s.to_string()).collect()))
        .collect()
}

impl PresentationBuilder {
    pub fn new(name: &str) -> Self {
        PresentationBuilder {
            name: name.to_string(),
            generators: Vec::new(),
            relations: Vec::new(),
            differential: BTreeMap::new(),
            top: Vec::new(),
        }
    }

    pub fn generator(mut self, name: &str, degree: u32) -> Self {
        self.generators.push(Generator {
            name: name.to_string(),
            degree,
        });
        self
    }

    /// Declares `product(pattern) = sum(terms)`; an empty `terms` means zero.
    pub fn relation(mut self, pattern: &[&str], terms: &[RawTerm<'_>]) -> Self {
        self.relations.push((
            pattern.iter().map(|s| s.to_string()).collect(),
            owned_terms(terms),
        ));
        self
    }

    pub fn differential(mut self, generator: &str, terms: &[RawTerm<'_>]) -> Self {
        self.differential
            .insert(generator.to_string(), owned_terms(terms));
        self
    }

    pub fn top(mut self, factors: &[&str]) -> Self {
        self.top = factors.iter().map(|s| s.to_string()).collect();
        self
    }

    /// Resolves names and normalizes every right-hand side.
    ///
    /// Generators without a declared differential are closed.
    pub fn build(self) -> Result<Presentation> {
        let n = self.generators.len();
        let mut pres = Presentation {
            name: self.name,
            generators: self.generators,
            relations: Vec::new(),
            differential: Vec::new(),
            top: Monomial::unit(n),
            top_degree: 0,
        };
        let top_factors = pres.indices(&self.top)?;
        pres.top_degree = top_factors
            .iter()
            .map(|&i| pres.generators[i].degree)
            .sum();
        pres.top = pres.sorted_monomial(&top_factors)?;

        // Right-hand sides are sorted but not rewritten until every
        // relation is known.
        let mut relations = Vec::new();
        for (pattern, terms) in &self.relations {
            let idx = pres.indices(pattern)?;
            let degree = idx.iter().map(|&i| pres.generators[i].degree).sum();
            let rhs = pres.sorted_form(terms, degree)?;
            relations.push(Relation {
                pattern: Monomial::from_factors(n, &idx),
                rhs,
            });
        }
        pres.relations = relations;

        let mut differential = Vec::with_capacity(n);
        for g in 0..n {
            let name = pres.generators[g].name.clone();
            let degree = pres.generators[g].degree + 1;
            let form = match self.differential.get(&name) {
                Some(terms) => pres.raw_form(terms, degree)?,
                None => Form::zero(degree),
            };
            differential.push(form);
        }
        for name in self.differential.keys() {
            pres.index(name)?;
        }
        pres.differential = differential;
        Ok(pres)
    }
}

impl Presentation {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn top(&self) -> &Monomial {
        &self.top
    }

    pub fn top_degree(&self) -> u32 {
        self.top_degree
    }

    pub fn has_generator(&self, name: &str) -> bool {
        self.generators.iter().any(|g| g.name == name)
    }

    /// Differential of the `i`-th generator.
    pub fn generator_differential(&self, i: usize) -> &Form {
        &self.differential[i]
    }

    /// Replaces the differential of one generator; used for negative
    /// controls in the validator tests.
    pub fn with_differential(&self, generator: &str, terms: &[RawTerm<'_>]) -> Result<Self> {
        let i = self.index(generator)?;
        let mut out = self.clone();
        out.differential[i] = self.raw_form(&owned_terms(terms), self.generators[i].degree + 1)?;
        Ok(out)
    }

    pub fn index(&self, name: &str) -> Result<usize> {
        self.generators
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    fn indices<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<usize>> {
        names.iter().map(|s| self.index(s.as_ref())).collect()
    }

    pub fn degree_of(&self, m: &Monomial) -> u32 {
        m.exponents()
            .iter()
            .zip(&self.generators)
            .map(|(&e, g)| u32::from(e) * g.degree)
            .sum()
    }

    fn factors_degree(&self, factors: &[usize]) -> u32 {
        factors.iter().map(|&i| self.generators[i].degree).sum()
    }

    fn parity(&self, i: usize) -> u32 {
        self.generators[i].degree % 2
    }

    /// Sorts a factor list into generator order, returning the Koszul sign,
    /// or `None` when an odd generator repeats.
    fn koszul_sort(&self, factors: &mut [usize]) -> Option<i64> {
        let mut sign = 1;
        for i in 1..factors.len() {
            let mut j = i;
            while j > 0 && factors[j - 1] > factors[j] {
                if self.parity(factors[j - 1]) * self.parity(factors[j]) == 1 {
                    sign = -sign;
                }
                factors.swap(j - 1, j);
                j -= 1;
            }
        }
        let repeated_odd = factors
            .windows(2)
            .any(|w| w[0] == w[1] && self.parity(w[0]) == 1);
        (!repeated_odd).then_some(sign)
    }

    fn sorted_monomial(&self, factors: &[usize]) -> Result<Monomial> {
        let mut f = factors.to_vec();
        match self.koszul_sort(&mut f) {
            Some(1) => Ok(Monomial::from_factors(self.generators.len(), &f)),
            _ => Err(Error::Unsupported(
                "top monomial must be nonzero and already in generator order".into(),
            )),
        }
    }

    /// Sorting only, no relation rewriting.
    fn sorted_form(&self, terms: &[(Poly, Vec<String>)], degree: u32) -> Result<Form> {
        let mut out = Form::zero(degree);
        for (c, names) in terms {
            let mut f = self.indices(names)?;
            if self.factors_degree(&f) != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    found: self.factors_degree(&f),
                });
            }
            if let Some(sign) = self.koszul_sort(&mut f) {
                let m = Monomial::from_factors(self.generators.len(), &f);
                out.accumulate(m, c.scale(&sign.into()));
            }
        }
        Ok(out)
    }

    fn raw_form(&self, terms: &[(Poly, Vec<String>)], degree: u32) -> Result<Form> {
        let mut out = Form::zero(degree);
        for (c, names) in terms {
            let f = self.indices(names)?;
            if self.factors_degree(&f) != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    found: self.factors_degree(&f),
                });
            }
            out = out.try_add(&self.normalize_product(&f, c)?)?;
        }
        Ok(out)
    }

    /// Builds a normalized form from coefficient/product pairs given by
    /// generator name. All products must share one degree.
    pub fn form(&self, terms: &[RawTerm<'_>]) -> Result<Form> {
        let owned = owned_terms(terms);
        let degree = match owned.first() {
            Some((_, names)) => self.factors_degree(&self.indices(names)?),
            None => 0,
        };
        self.raw_form(&owned, degree)
    }

    /// The generator `name` as a degree-homogeneous form.
    pub fn generator_form(&self, name: &str) -> Result<Form> {
        self.form(&[(Poly::one(), &[name])])
    }

    /// Normal form of `coeff * f_1 ... f_n` with the factors in the given order.
    pub fn normalize_product(&self, factors: &[usize], coeff: &Poly) -> Result<Form> {
        let degree = self.factors_degree(factors);
        let mut out = Form::zero(degree);
        if coeff.is_zero() || degree > self.top_degree {
            return Ok(out);
        }
        let mut stack: Vec<(Vec<usize>, Poly)> = vec![(factors.to_vec(), coeff.clone())];
        let mut steps = 0usize;
        while let Some((mut f, c)) = stack.pop() {
            steps += 1;
            if steps > REWRITE_BUDGET {
                return Err(Error::RewriteBudget(REWRITE_BUDGET));
            }
            let Some(sign) = self.koszul_sort(&mut f) else {
                continue;
            };
            let c = if sign < 0 { -c } else { c };
            let exps = Monomial::from_factors(self.generators.len(), &f);
            let Some(rel) = self.relations.iter().find(|r| exps.contains(&r.pattern)) else {
                out.accumulate(exps, c);
                continue;
            };
            // Pull the matched factors to the front, keeping their order.
            let mut remaining = rel.pattern.exponents().to_vec();
            let mut unmatched = Vec::with_capacity(f.len());
            let mut unmatched_degree = 0;
            let mut sign = 1i64;
            for &g in &f {
                if remaining[g] > 0 {
                    remaining[g] -= 1;
                    if (self.generators[g].degree * unmatched_degree) % 2 == 1 {
                        sign = -sign;
                    }
                } else {
                    unmatched.push(g);
                    unmatched_degree += self.generators[g].degree;
                }
            }
            let c = if sign < 0 { -c } else { c };
            for (m, rc) in rel.rhs.terms() {
                let mut next = m.factors();
                next.extend_from_slice(&unmatched);
                stack.push((next, &c * rc));
            }
        }
        Ok(out)
    }

    /// Re-normalizes every monomial of `a`.
    pub fn normalize(&self, a: &Form) -> Result<Form> {
        let mut out = Form::zero(a.degree());
        for (m, c) in a.terms() {
            out = out.try_add(&self.normalize_product(&m.factors(), c)?)?;
        }
        Ok(out)
    }

    pub fn wedge(&self, a: &Form, b: &Form) -> Result<Form> {
        let mut out = Form::zero(a.degree() + b.degree());
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                let mut f = ma.factors();
                f.extend(mb.factors());
                out = out.try_add(&self.normalize_product(&f, &(ca * cb))?)?;
            }
        }
        Ok(out)
    }

    /// Degree-0 form `c`.
    pub fn scalar(&self, c: Poly) -> Form {
        Form::from_coefficients(0, [(Monomial::unit(self.generators.len()), c)])
    }

    pub fn wedge_all(&self, forms: &[&Form]) -> Result<Form> {
        let mut acc = self.scalar(Poly::one());
        for f in forms {
            acc = self.wedge(&acc, f)?;
        }
        Ok(acc)
    }

    pub fn power(&self, a: &Form, n: u32) -> Result<Form> {
        let mut acc = self.scalar(Poly::one());
        for _ in 0..n {
            acc = self.wedge(&acc, a)?;
        }
        Ok(acc)
    }

    /// Graded Leibniz differential of an arbitrary product of generators.
    pub fn differential_of_product(&self, factors: &[usize], coeff: &Poly) -> Result<Form> {
        let mut out = Form::zero(self.factors_degree(factors) + 1);
        let mut prefix_degree = 0;
        for (pos, &g) in factors.iter().enumerate() {
            let sign: i64 = if prefix_degree % 2 == 1 { -1 } else { 1 };
            for (m, dc) in self.differential[g].terms() {
                let mut f = factors[..pos].to_vec();
                f.extend(m.factors());
                f.extend_from_slice(&factors[pos + 1..]);
                let c = coeff * dc;
                let c = if sign < 0 { -c } else { c };
                out = out.try_add(&self.normalize_product(&f, &c)?)?;
            }
            prefix_degree += self.generators[g].degree;
        }
        Ok(out)
    }

    /// Exterior derivative; coefficients are constants.
    pub fn d(&self, a: &Form) -> Result<Form> {
        let mut out = Form::zero(a.degree() + 1);
        for (m, c) in a.terms() {
            out = out.try_add(&self.differential_of_product(&m.factors(), c)?)?;
        }
        Ok(out)
    }

    /// Coefficient of the designated top monomial (integration against the
    /// normalized volume).
    pub fn top_coefficient(&self, a: &Form) -> Result<Poly> {
        if a.is_zero() {
            return Ok(Poly::zero());
        }
        if a.degree() != self.top_degree {
            return Err(Error::DegreeMismatch {
                expected: self.top_degree,
                found: a.degree(),
            });
        }
        Ok(a.coefficient(&self.top))
    }

    /// Coefficient of the product of the named generators, accounting for the
    /// sign needed to bring that product to normal form.
    pub fn coefficient(&self, a: &Form, names: &[&str]) -> Result<Poly> {
        let f = self.indices(names)?;
        let normal = self.normalize_product(&f, &Poly::one())?;
        let mut terms = normal.terms();
        match (terms.next(), terms.next()) {
            (Some((m, c)), None) if *c == Poly::one() || *c == Poly::from_i64(-1) => {
                Ok(a.coefficient(m) * c)
            }
            _ => Err(Error::Unsupported(format!(
                "{names:?} is not a basis monomial"
            ))),
        }
    }

    /// All normal-form monomials of the given degree.
    pub fn basis(&self, degree: u32) -> Vec<Monomial> {
        let n = self.generators.len();
        let mut out = Vec::new();
        let mut exps = vec![0u8; n];
        self.enumerate(0, degree, &mut exps, &mut out);
        out.sort();
        out
    }

    fn enumerate(&self, g: usize, left: u32, exps: &mut Vec<u8>, out: &mut Vec<Monomial>) {
        if g == self.generators.len() {
            if left == 0 {
                let m = Monomial::from_exponents(exps.clone());
                if let Ok(nf) = self.normalize_product(&m.factors(), &Poly::one()) {
                    if nf.len() == 1 && nf.coefficient(&m) == Poly::one() {
                        out.push(m);
                    }
                }
            }
            return;
        }
        let deg = self.generators[g].degree;
        let max = if self.generators[g].is_odd() { 1 } else { left / deg.max(1) };
        for e in 0..=max {
            if e * deg > left {
                break;
            }
            exps[g] = e as u8;
            self.enumerate(g + 1, left - e * deg, exps, out);
        }
        exps[g] = 0;
    }

    pub fn basis_size(&self) -> usize {
        (0..=self.top_degree).map(|k| self.basis(k).len()).sum()
    }

    pub fn render_monomial(&self, m: &Monomial) -> String {
        let f = m.factors();
        if f.is_empty() {
            return "1".into();
        }
        f.iter()
            .map(|&i| self.generators[i].name.as_str())
            .collect::<Vec<_>>()
            .join("^")
    }

    /// Deterministic rendering: monomials in their fixed order.
    pub fn render(&self, a: &Form) -> String {
        if a.is_zero() {
            return "0".into();
        }
        a.terms()
            .map(|(m, c)| format!("[{}]*{}", c, self.render_monomial(m)))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    pub fn display<'a>(&'a self, a: &'a Form) -> impl fmt::Display + 'a {
        struct Shown<'a>(&'a Presentation, &'a Form);
        impl fmt::Display for Shown<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0.render(self.1))
            }
        }
        Shown(self, a)
    }

    pub fn validate(&self, settings: &ValidationSettings) -> ValidationReport {
        validate::run(self, settings)
    }
}
