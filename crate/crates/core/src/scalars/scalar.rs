use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact value `rational + irrational * sqrt(radicand)`.
///
/// The radicand is square-free and at least 2 whenever `irrational` is
/// nonzero; pure rationals always carry radicand 0. Values living in two
/// different quadratic fields never mix: the `try_*` operations return
/// [`Error::IncompatibleExtensions`] and the operator impls panic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    rational: BigRational,
    irrational: BigRational,
    radicand: u32,
}

/// Renders a rational as `p/q`, always with an explicit denominator.
pub fn rational_fraction(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Renders a rational as `p` when integral and `p/q` otherwise.
pub fn rational_compact(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        rational_fraction(r)
    }
}

/// Parses `p`, `p/q` or a terminating decimal such as `-0.125` exactly.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let text = text.trim();
    let bad = || Error::Parse(format!("not a rational number: `{text}`"));
    if let Some((n, d)) = text.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int, frac)) = text.split_once('.') {
        let negative = int.trim_start().starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let r = BigRational::new(n, d);
        return Ok(if negative { -r } else { r });
    }
    let n: BigInt = text.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}

/// Splits `n = s^2 * d` with `d` square-free.
fn square_free_split(n: &BigUint) -> Result<(BigUint, u32)> {
    let mut rest = n
        .to_u64()
        .ok_or_else(|| Error::RadicandTooLarge(n.to_string()))?;
    let mut square = 1u64;
    let mut free = 1u64;
    let mut p = 2u64;
    while p * p <= rest {
        while rest % (p * p) == 0 {
            rest /= p * p;
            square *= p;
        }
        if rest % p == 0 {
            rest /= p;
            free *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    free *= rest;
    let free = u32::try_from(free).map_err(|_| Error::RadicandTooLarge(n.to_string()))?;
    Ok((BigUint::from(square), free))
}

fn is_square_free(d: u32) -> bool {
    let mut p = 2u32;
    while p * p <= d {
        if d.is_multiple_of(p * p) {
            return false;
        }
        p += 1;
    }
    true
}

impl Scalar {
    pub fn zero() -> Self {
        Self::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_rational(r: BigRational) -> Self {
        Scalar {
            rational: r,
            irrational: BigRational::zero(),
            radicand: 0,
        }
    }

    pub fn from_i64(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Self::from_rational(BigRational::new(n.into(), d.into()))
    }

    /// Builds `p + q*sqrt(d)`; `d` must be square-free unless `q == 0`.
    pub fn new(p: BigRational, q: BigRational, d: u32) -> Result<Self> {
        if q.is_zero() || d == 0 {
            return Ok(Self::from_rational(p));
        }
        if d == 1 {
            return Ok(Self::from_rational(p + q));
        }
        if !is_square_free(d) {
            return Err(Error::Unsupported(format!("radicand {d} is not square-free")));
        }
        Ok(Scalar {
            rational: p,
            irrational: q,
            radicand: d,
        })
    }

    /// `q * sqrt(d)` for an integer square-free `d`.
    pub fn surd(q: BigRational, d: u32) -> Result<Self> {
        Self::new(BigRational::zero(), q, d)
    }

    /// Exact non-negative square root of a non-negative rational.
    pub fn sqrt_rational(r: &BigRational) -> Result<Self> {
        if r.is_negative() {
            return Err(Error::NegativeRadicand(rational_compact(r)));
        }
        if r.is_zero() {
            return Ok(Self::zero());
        }
        // sqrt(a/b) = sqrt(a*b)/b
        let product = (r.numer() * r.denom())
            .to_biguint()
            .expect("positive product");
        let (square, free) = square_free_split(&product)?;
        let coeff = BigRational::new(BigInt::from(square), r.denom().clone());
        if free == 1 {
            Ok(Self::from_rational(coeff))
        } else {
            Self::surd(coeff, free)
        }
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rational
    }

    pub fn irrational_part(&self) -> &BigRational {
        &self.irrational
    }

    /// Square-free radicand, 0 for a pure rational.
    pub fn radicand(&self) -> u32 {
        self.radicand
    }

    pub fn is_rational(&self) -> bool {
        self.radicand == 0
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.rational)
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.irrational.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.is_rational() && self.rational.is_one()
    }

    fn joint_radicand(&self, other: &Self) -> Result<u32> {
        match (self.radicand, other.radicand) {
            (0, d) | (d, 0) => Ok(d),
            (a, b) if a == b => Ok(a),
            (a, b) => Err(Error::IncompatibleExtensions { left: a, right: b }),
        }
    }

    fn build(rational: BigRational, irrational: BigRational, radicand: u32) -> Self {
        if irrational.is_zero() {
            Self::from_rational(rational)
        } else {
            Scalar {
                rational,
                irrational,
                radicand,
            }
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let d = self.joint_radicand(other)?;
        Ok(Self::build(
            &self.rational + &other.rational,
            &self.irrational + &other.irrational,
            d,
        ))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let d = self.joint_radicand(other)?;
        let dd = BigRational::from_integer(d.into());
        let p = &self.rational * &other.rational + &self.irrational * &other.irrational * dd;
        let q = &self.rational * &other.irrational + &self.irrational * &other.rational;
        Ok(Self::build(p, q, d))
    }

    /// Field norm `p^2 - q^2 d`.
    pub fn norm(&self) -> BigRational {
        let d = BigRational::from_integer(self.radicand.into());
        &self.rational * &self.rational - &self.irrational * &self.irrational * d
    }

    pub fn conjugate(&self) -> Self {
        Self::build(self.rational.clone(), -&self.irrational, self.radicand)
    }

    pub fn try_inv(&self) -> Result<Self> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let c = self.conjugate();
        Ok(Self::build(c.rational / &n, c.irrational / &n, c.radicand))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.try_mul(&other.try_inv()?)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Exact sign of `p + q sqrt(d)`.
    pub fn signum(&self) -> Ordering {
        let sp = self.rational.cmp(&BigRational::zero());
        let sq = self.irrational.cmp(&BigRational::zero());
        match (sp, sq) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (a, b) if a == b => a,
            (a, _) => {
                // opposite signs: compare p^2 with q^2 d
                let d = BigRational::from_integer(self.radicand.into());
                let lhs = &self.rational * &self.rational;
                let rhs = &self.irrational * &self.irrational * d;
                match lhs.cmp(&rhs) {
                    Ordering::Greater => a,
                    Ordering::Less => a.reverse(),
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        let p = self.rational.to_f64().unwrap_or(f64::NAN);
        if self.radicand == 0 {
            return p;
        }
        let q = self.irrational.to_f64().unwrap_or(f64::NAN);
        p + q * f64::from(self.radicand).sqrt()
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.try_sub(other).ok().map(|diff| diff.signum())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.radicand == 0 {
            return write!(f, "{}", rational_compact(&self.rational));
        }
        let surd = |c: &BigRational| {
            if c.is_one() {
                format!("sqrt({})", self.radicand)
            } else {
                format!("{}*sqrt({})", rational_compact(c), self.radicand)
            }
        };
        if self.rational.is_zero() {
            if (-&self.irrational).is_one() {
                return write!(f, "-sqrt({})", self.radicand);
            }
            return write!(f, "{}", surd(&self.irrational));
        }
        let (sign, magnitude) = if self.irrational.is_negative() {
            ("-", -&self.irrational)
        } else {
            ("+", self.irrational.clone())
        };
        write!(
            f,
            "({} {} {})",
            rational_compact(&self.rational),
            sign,
            surd(&magnitude)
        )
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Self::from_i64(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Self::from_rational(r)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::build(-&self.rational, -&self.irrational, self.radicand)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}

scalar_binop!(Add, add, try_add);
scalar_binop!(Sub, sub, try_sub);
scalar_binop!(Mul, mul, try_mul);
scalar_binop!(Div, div, try_div);

/// Exact rational square root, when one exists.
pub(crate) fn is_rational_square(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().to_biguint()?;
    let d = r.denom().to_biguint()?;
    let (sn, sd) = (n.sqrt(), d.sqrt());
    (&sn * &sn == n && &sd * &sd == d).then(|| {
        BigRational::new(
            BigInt::from_biguint(Sign::Plus, sn),
            BigInt::from_biguint(Sign::Plus, sd),
        )
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn canonical_rational_has_no_radicand() {
        let s = Scalar::new(q(1, 2), q(0, 1), 5).unwrap();
        assert_eq!(s.radicand(), 0);
        assert_eq!(Scalar::new(q(1, 2), q(1, 2), 1).unwrap(), Scalar::one());
    }

    #[test]
    fn sqrt_of_one_fifth() {
        let t = Scalar::sqrt_rational(&q(1, 5)).unwrap();
        assert_eq!(t, Scalar::surd(q(1, 5), 5).unwrap());
        assert_eq!(&t * &t, Scalar::ratio(1, 5));
        assert_eq!(t.pow(3), Scalar::surd(q(1, 25), 5).unwrap());
        assert_eq!(Scalar::sqrt_rational(&q(9, 4)).unwrap(), Scalar::ratio(3, 2));
        assert_eq!(
            Scalar::sqrt_rational(&q(3, 20)).unwrap(),
            Scalar::surd(q(1, 10), 15).unwrap()
        );
    }

    #[test]
    fn mixed_extensions_are_rejected() {
        let a = Scalar::sqrt_rational(&q(5, 1)).unwrap();
        let b = Scalar::sqrt_rational(&q(3, 1)).unwrap();
        assert_eq!(
            a.try_add(&b),
            Err(Error::IncompatibleExtensions { left: 5, right: 3 })
        );
        assert!(a.try_mul(&Scalar::ratio(2, 3)).is_ok());
    }

    #[test]
    fn inverse_and_sign() {
        let x = Scalar::new(q(1, 1), q(1, 1), 2).unwrap();
        assert_eq!(&x * &x.try_inv().unwrap(), Scalar::one());
        assert_eq!(x.signum(), Ordering::Greater);
        let y = Scalar::new(q(1, 1), q(-1, 1), 2).unwrap();
        assert_eq!(y.signum(), Ordering::Less);
        assert_eq!(Scalar::zero().try_inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3/20").unwrap(), q(3, 20));
        assert_eq!(parse_rational("-0.125").unwrap(), q(-1, 8));
        assert_eq!(parse_rational("7").unwrap(), q(7, 1));
        assert!(parse_rational("x").is_err());
        assert_eq!(rational_fraction(&q(1, 1)), "1/1");
    }

    #[test]
    fn display() {
        let l = Scalar::surd(q(12, 5), 5).unwrap();
        assert_eq!(l.to_string(), "12/5*sqrt(5)");
        let m = Scalar::new(q(1, 2), q(-1, 1), 3).unwrap();
        assert_eq!(m.to_string(), "(1/2 - sqrt(3))");
        assert_eq!((-l).to_string(), "-12/5*sqrt(5)");
    }
}
