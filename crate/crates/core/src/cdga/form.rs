use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalars::Poly;

/// Product of generators in generator order, stored as exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u8>);

impl Monomial {
    pub fn unit(generators: usize) -> Self {
        Monomial(vec![0; generators])
    }

    pub fn from_exponents(exps: Vec<u8>) -> Self {
        Monomial(exps)
    }

    pub fn from_factors(generators: usize, factors: &[usize]) -> Self {
        let mut exps = vec![0u8; generators];
        for &f in factors {
            exps[f] += 1;
        }
        Monomial(exps)
    }

    pub fn exponents(&self) -> &[u8] {
        &self.0
    }

    /// Factor list in generator order, repeated by exponent.
    pub fn factors(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(i, &e)| std::iter::repeat_n(i, usize::from(e)))
            .collect()
    }

    /// True when `pattern` divides this monomial as a multiset.
    pub fn contains(&self, pattern: &Monomial) -> bool {
        self.0.len() == pattern.0.len() && self.0.iter().zip(&pattern.0).all(|(a, b)| a >= b)
    }
}

/// Homogeneous form: normal-form monomials with polynomial coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Form {
    degree: u32,
    terms: BTreeMap<Monomial, Poly>,
}

impl Form {
    pub fn zero(degree: u32) -> Self {
        Form {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Poly)> {
        self.terms.iter()
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    pub fn coefficient(&self, m: &Monomial) -> Poly {
        self.terms.get(m).cloned().unwrap_or_else(Poly::zero)
    }

    /// Reassembles a form from its coefficient map.
    pub fn from_coefficients(degree: u32, coefficients: impl IntoIterator<Item = (Monomial, Poly)>) -> Self {
        let mut f = Form::zero(degree);
        for (m, c) in coefficients {
            f.accumulate(m, c);
        }
        f
    }

    pub(crate) fn accumulate(&mut self, m: Monomial, c: Poly) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = &*existing + &c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn try_add(&self, other: &Form) -> Result<Form> {
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: other.degree,
            });
        }
        let mut out = if self.is_zero() && !other.is_zero() {
            Form::zero(other.degree)
        } else {
            Form::zero(self.degree)
        };
        for (m, c) in self.terms.iter().chain(other.terms.iter()) {
            out.accumulate(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Form) -> Result<Form> {
        self.try_add(&-other)
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &Poly) -> Form {
        let mut out = Form::zero(self.degree);
        for (m, v) in &self.terms {
            out.accumulate(m.clone(), v * c);
        }
        out
    }

    /// Applies `f` to every coefficient, dropping those that vanish.
    pub fn try_map_coefficients(&self, mut f: impl FnMut(&Poly) -> Result<Poly>) -> Result<Form> {
        let mut out = Form::zero(self.degree);
        for (m, v) in &self.terms {
            out.accumulate(m.clone(), f(v)?);
        }
        Ok(out)
    }
}

impl Neg for &Form {
    type Output = Form;
    fn neg(self) -> Form {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect();
        Form {
            degree: self.degree,
            terms,
        }
    }
}

impl Neg for Form {
    type Output = Form;
    fn neg(self) -> Form {
        -&self
    }
}

impl Add<&Form> for &Form {
    type Output = Form;
    fn add(self, rhs: &Form) -> Form {
        self.try_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Add for Form {
    type Output = Form;
    fn add(self, rhs: Form) -> Form {
        &self + &rhs
    }
}

impl Sub<&Form> for &Form {
    type Output = Form;
    fn sub(self, rhs: &Form) -> Form {
        self.try_sub(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub for Form {
    type Output = Form;
    fn sub(self, rhs: Form) -> Form {
        &self - &rhs
    }
}
