use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::scalar::Scalar;
use super::symbol::{Symbol, SYMBOL_COUNT};
use crate::error::{Error, Result};

/// Exponent vector over the fixed symbol table.
///
/// Ordered graded-lexicographically: total degree first, then the exponent
/// of the earliest symbol in table order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Exponents([u8; SYMBOL_COUNT]);

impl Exponents {
    pub fn one() -> Self {
        Exponents::default()
    }

    pub fn of(sym: Symbol, e: u8) -> Self {
        let mut out = Exponents::default();
        out.0[sym.index()] = e;
        out
    }

    pub fn get(&self, sym: Symbol) -> u8 {
        self.0[sym.index()]
    }

    pub fn with(mut self, sym: Symbol, e: u8) -> Self {
        self.0[sym.index()] = e;
        self
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&e| u32::from(e)).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let mut out = *self;
        for (i, e) in out.0.iter_mut().enumerate() {
            *e = e
                .checked_add(other.0[i])
                .ok_or(Error::ExponentOverflow(Symbol::ALL[i]))?;
        }
        Ok(out)
    }

    fn gcd(&self, other: &Self) -> Self {
        let mut out = *self;
        for (i, e) in out.0.iter_mut().enumerate() {
            *e = (*e).min(other.0[i]);
        }
        out
    }

    fn quotient(&self, other: &Self) -> Self {
        let mut out = *self;
        for (i, e) in out.0.iter_mut().enumerate() {
            *e -= other.0[i];
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = (Symbol, u8)> + '_ {
        Symbol::ALL
            .iter()
            .map(|&s| (s, self.get(s)))
            .filter(|&(_, e)| e > 0)
    }
}

impl Ord for Exponents {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Exponents {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Exponents {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Exponents {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .iter()
            .map(|(s, e)| {
                if e == 1 {
                    s.name().to_string()
                } else {
                    format!("{}^{}", s.name(), e)
                }
            })
            .collect();
        f.write_str(&parts.join("*"))
    }
}

/// Sparse multivariate polynomial with [`Scalar`] coefficients.
///
/// Zero coefficients are never stored, so structural equality is
/// mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Exponents, Scalar>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Self::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        Self::term(c, Exponents::one())
    }

    pub fn from_i64(n: i64) -> Self {
        Self::constant(Scalar::from_i64(n))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Self::constant(Scalar::ratio(n, d))
    }

    pub fn rational(r: BigRational) -> Self {
        Self::constant(Scalar::from_rational(r))
    }

    pub fn var(sym: Symbol) -> Self {
        Self::term(Scalar::one(), Exponents::of(sym, 1))
    }

    pub fn term(c: Scalar, exps: Exponents) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Exponents::is_one)
    }

    /// The constant value if the polynomial has no variables.
    pub fn constant_value(&self) -> Option<Scalar> {
        if self.is_zero() {
            return Some(Scalar::zero());
        }
        self.is_constant()
            .then(|| self.terms.values().next().cloned())
            .flatten()
    }

    /// Rational constant, if any.
    pub fn rational_value(&self) -> Option<BigRational> {
        self.constant_value()
            .and_then(|c| c.as_rational().cloned())
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponents, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The quadratic field the coefficients live in, 0 for rational.
    pub fn extension(&self) -> u32 {
        self.terms
            .values()
            .map(Scalar::radicand)
            .find(|&d| d != 0)
            .unwrap_or(0)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        match (self.extension(), other.extension()) {
            (0, _) | (_, 0) => Ok(()),
            (a, b) if a == b => Ok(()),
            (a, b) => Err(Error::IncompatibleExtensions { left: a, right: b }),
        }
    }

    fn accumulate(terms: &mut BTreeMap<Exponents, Scalar>, exps: Exponents, c: Scalar) -> Result<()> {
        use std::collections::btree_map::Entry;
        match terms.entry(exps) {
            Entry::Vacant(slot) => {
                if !c.is_zero() {
                    slot.insert(c);
                }
            }
            Entry::Occupied(mut slot) => {
                let sum = slot.get().try_add(&c)?;
                if sum.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            Self::accumulate(&mut terms, *e, c.clone())?;
        }
        Ok(Poly { terms })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut terms = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                Self::accumulate(&mut terms, ea.checked_mul(eb)?, ca.try_mul(cb)?)?;
            }
        }
        Ok(Poly { terms })
    }

    pub fn try_scale(&self, c: &Scalar) -> Result<Self> {
        self.try_mul(&Poly::constant(c.clone()))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        self.try_scale(c).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn try_pow(&self, e: u32) -> Result<Self> {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = acc.try_mul(self)?;
        }
        Ok(acc)
    }

    pub fn pow(&self, e: u32) -> Self {
        self.try_pow(e).unwrap_or_else(|err| panic!("{err}"))
    }

    pub fn degree_in(&self, sym: Symbol) -> u8 {
        self.terms.keys().map(|e| e.get(sym)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(Exponents::total_degree)
            .max()
            .unwrap_or(0)
    }

    pub fn symbols(&self) -> Vec<Symbol> {
        Symbol::ALL
            .iter()
            .copied()
            .filter(|&s| self.degree_in(s) > 0)
            .collect()
    }

    /// Coefficient of `sym^power`, as a polynomial in the other symbols.
    pub fn coefficient(&self, sym: Symbol, power: u8) -> Poly {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e.get(sym) == power)
            .map(|(e, c)| (e.with(sym, 0), c.clone()))
            .collect();
        Poly { terms }
    }

    /// Coefficient of an exact monomial.
    pub fn coefficient_of(&self, exps: &Exponents) -> Scalar {
        self.terms.get(exps).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Simultaneous substitution of the bound symbols.
    pub fn substitute(&self, bindings: &[(Symbol, Poly)]) -> Result<Self> {
        let mut out = Poly::zero();
        for (exps, c) in &self.terms {
            let mut kept = *exps;
            let mut factor = Poly::constant(c.clone());
            for (sym, value) in bindings {
                let e = exps.get(*sym);
                if e > 0 {
                    kept = kept.with(*sym, 0);
                    factor = factor.try_mul(&value.try_pow(u32::from(e))?)?;
                }
            }
            out = out.try_add(&factor.try_mul(&Poly::term(Scalar::one(), kept))?)?;
        }
        Ok(out)
    }

    /// Substitution keyed by symbol names; unknown names are errors.
    pub fn substitute_named(&self, bindings: &[(&str, Poly)]) -> Result<Self> {
        let resolved = bindings
            .iter()
            .map(|(name, p)| Ok((name.parse::<Symbol>()?, p.clone())))
            .collect::<Result<Vec<_>>>()?;
        self.substitute(&resolved)
    }

    pub fn substitute_scalars(&self, bindings: &[(Symbol, Scalar)]) -> Result<Self> {
        let polys: Vec<(Symbol, Poly)> = bindings
            .iter()
            .map(|(s, v)| (*s, Poly::constant(v.clone())))
            .collect();
        self.substitute(&polys)
    }

    /// Replaces `sym^(2j)` by `value^j`; fails on any odd power of `sym`.
    pub fn substitute_square(&self, sym: Symbol, value: &Poly) -> Result<Self> {
        if self.terms.keys().any(|e| e.get(sym) % 2 == 1) {
            return Err(Error::OddPower(sym));
        }
        let mut out = Poly::zero();
        for (exps, c) in &self.terms {
            let half = u32::from(exps.get(sym) / 2);
            let rest = Poly::term(c.clone(), exps.with(sym, 0));
            out = out.try_add(&rest.try_mul(&value.try_pow(half)?)?)?;
        }
        Ok(out)
    }

    /// Rewrites modulo `sym^2 = replacement`, leaving `sym` at most linear.
    pub fn reduce_square(&self, sym: Symbol, replacement: &Poly) -> Result<Self> {
        let mut out = Poly::zero();
        for (exps, c) in &self.terms {
            let e = exps.get(sym);
            let rest = Poly::term(c.clone(), exps.with(sym, e % 2));
            out = out.try_add(&rest.try_mul(&replacement.try_pow(u32::from(e / 2))?)?)?;
        }
        Ok(out)
    }

    pub fn differentiate(&self, sym: Symbol) -> Poly {
        let mut terms = BTreeMap::new();
        for (exps, c) in &self.terms {
            let e = exps.get(sym);
            if e == 0 {
                continue;
            }
            let c = c * &Scalar::from_i64(i64::from(e));
            terms.insert(exps.with(sym, e - 1), c);
        }
        Poly { terms }
    }

    /// Integral over `sym` in `[0, 1]`: each `sym^j` becomes `1/(j+1)`.
    pub fn integrate_unit_interval(&self, sym: Symbol) -> Poly {
        let mut out = Poly::zero();
        for (exps, c) in &self.terms {
            let e = i64::from(exps.get(sym));
            let c = c * &Scalar::ratio(1, e + 1);
            out = out + Poly::term(c, exps.with(sym, 0));
        }
        out
    }

    pub fn eval_float(&self, bindings: &[(Symbol, f64)]) -> Result<f64> {
        let lookup = |sym: Symbol| {
            bindings
                .iter()
                .find(|(s, _)| *s == sym)
                .map(|(_, v)| *v)
                .ok_or(Error::Unbound(sym))
        };
        let mut total = 0.0;
        for (exps, c) in &self.terms {
            let mut value = c.to_f64();
            for (sym, e) in exps.iter() {
                value *= lookup(sym)?.powi(i32::from(e));
            }
            total += value;
        }
        Ok(total)
    }

    /// Splits off the largest monomial dividing every term.
    pub fn split_common_monomial(&self) -> (Exponents, Poly) {
        let Some(first) = self.terms.keys().next() else {
            return (Exponents::one(), Poly::zero());
        };
        let common = self.terms.keys().fold(*first, |acc, e| acc.gcd(e));
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.quotient(&common), c.clone()))
            .collect();
        (common, Poly { terms })
    }

    /// Leading coefficient in graded-lex order.
    pub fn leading(&self) -> Option<(&Exponents, &Scalar)> {
        self.terms.iter().next_back()
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

/// Canonical rendering: terms in decreasing graded-lex order.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (exps, c)) in self.terms.iter().rev().enumerate() {
            // mixed p + q*sqrt(d) coefficients are parenthesized and keep a "+"
            let negative = (c.is_rational() || c.rational_part().is_zero())
                && c.signum() == Ordering::Less;
            let magnitude = if negative { -c } else { c.clone() };
            let body = match (exps.is_one(), magnitude.is_one()) {
                (true, _) => magnitude.to_string(),
                (false, true) => exps.to_string(),
                (false, false) => format!("{magnitude}*{exps}"),
            };
            match (i, negative) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

impl From<Scalar> for Poly {
    fn from(c: Scalar) -> Self {
        Poly::constant(c)
    }
}

impl From<Symbol> for Poly {
    fn from(s: Symbol) -> Self {
        Poly::var(s)
    }
}

impl From<i64> for Poly {
    fn from(n: i64) -> Self {
        Poly::from_i64(n)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let terms = self.terms.iter().map(|(e, c)| (*e, -c)).collect();
        Poly { terms }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

macro_rules! poly_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $trait<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                (&self).$method(rhs)
            }
        }
        impl $trait<Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                self.$method(&rhs)
            }
        }
    };
}

poly_binop!(Add, add, try_add);
poly_binop!(Sub, sub, try_sub);
poly_binop!(Mul, mul, try_mul);

impl Zero for Poly {
    fn zero() -> Self {
        Poly::zero()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for Poly {
    fn one() -> Self {
        Poly::one()
    }
}
