//! Dense univariate polynomials with exact rational coefficients.
//!
//! Every [`RatPoly`] is kept in canonical form: coefficients are stored
//! low-to-high and trailing zeros are stripped, so the zero polynomial is
//! the empty coefficient list and has no degree.

mod factor;
mod modp;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use factor::{factorize, PolyFactorization};

/// Exact rational number in lowest terms with positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("polynomial is not invertible modulo the given modulus")]
    NotInvertible,
    #[error("cyclotomic order must be positive")]
    ZeroOrder,
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("malformed polynomial text: {0}")]
    Parse(String),
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RatPoly {
    coeffs: Vec<Rational>,
}

fn rat(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

impl RatPoly {
    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    /// The indeterminate `x`.
    pub fn x() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn monomial(c: Rational, degree: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Rational::zero(); degree + 1];
        coeffs[degree] = c;
        RatPoly { coeffs }
    }

    /// Builds a polynomial from coefficients listed low-to-high.
    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn from_ints<T: Into<BigInt> + Copy>(coeffs: &[T]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn from_bigints(coeffs: &[BigInt]) -> Self {
        Self::from_coeffs(coeffs.iter().cloned().map(Rational::from_integer).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RatPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Result<Self, PolyError> {
        let lc = self.leading_coeff().ok_or(PolyError::ZeroPolynomial)?;
        Ok(self.scale(&lc.recip()))
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat(i))
                .collect(),
        )
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    pub fn has_integer_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Writes `self = content * prim` with `prim` a primitive integer
    /// polynomial whose leading coefficient is positive.
    pub fn primitive_part(&self) -> Result<(Rational, Vec<BigInt>), PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let den = self.denominator_lcm();
        let mut ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        let mut g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if ints.last().unwrap().is_negative() {
            g = -g;
        }
        for c in ints.iter_mut() {
            *c /= &g;
        }
        Ok((Rational::new(g, den), ints))
    }

    /// Euclidean division; the remainder has degree below the divisor's.
    pub fn div_rem(&self, divisor: &RatPoly) -> Result<(RatPoly, RatPoly), PolyError> {
        let dlen = divisor.coeffs.len();
        if dlen == 0 {
            return Err(PolyError::DivisionByZero);
        }
        if self.coeffs.len() < dlen {
            return Ok((Self::zero(), self.clone()));
        }
        let lc_inv = divisor.coeffs[dlen - 1].recip();
        let monic_divisor = lc_inv.is_one();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); rem.len() - dlen + 1];
        for i in (0..quot.len()).rev() {
            let top = &rem[i + dlen - 1];
            if top.is_zero() {
                continue;
            }
            let q = if monic_divisor { top.clone() } else { top * &lc_inv };
            for (j, d) in divisor.coeffs.iter().enumerate() {
                if !d.is_zero() {
                    rem[i + j] -= &q * d;
                }
            }
            quot[i] = q;
        }
        rem.truncate(dlen - 1);
        Ok((Self::from_coeffs(quot), Self::from_coeffs(rem)))
    }

    /// Remainder of `self` modulo `modulus`.
    pub fn mod_reduce(&self, modulus: &RatPoly) -> Result<RatPoly, PolyError> {
        self.div_rem(modulus).map(|(_, r)| r)
    }

    /// Inverse of `self` in `Q[x]/(modulus)`.
    pub fn mod_inverse(&self, modulus: &RatPoly) -> Result<RatPoly, PolyError> {
        if modulus.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        // extended Euclid tracking only the cofactor of `self`
        let (mut r0, mut r1) = (modulus.clone(), self.mod_reduce(modulus)?);
        let (mut s0, mut s1) = (RatPoly::zero(), RatPoly::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1)?;
            let s = &s0 - &(&q * &s1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        if r0.degree() != Some(0) {
            return Err(PolyError::NotInvertible);
        }
        s0.scale(&r0.coeffs[0].recip()).mod_reduce(modulus)
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.mod_reduce(&b).expect("nonzero divisor");
            a = std::mem::replace(&mut b, r);
        }
        if a.is_zero() {
            a
        } else {
            a.monic().expect("nonzero")
        }
    }

    /// `self^e mod modulus` by square-and-multiply.
    pub fn pow_mod(&self, mut e: u64, modulus: &RatPoly) -> Result<RatPoly, PolyError> {
        let mut base = self.mod_reduce(modulus)?;
        let mut acc = RatPoly::one().mod_reduce(modulus)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = (&acc * &base).mod_reduce(modulus)?;
            }
            e >>= 1;
            if e > 0 {
                base = (&base * &base).mod_reduce(modulus)?;
            }
        }
        Ok(acc)
    }

    /// Exact value at an integer point (Horner).
    pub fn evaluate(&self, x: &BigInt) -> Rational {
        self.evaluate_rational(&Rational::from_integer(x.clone()))
    }

    pub fn evaluate_rational(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Composition `self(other(x))`.
    pub fn compose(&self, other: &RatPoly) -> RatPoly {
        let mut acc = RatPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * other) + &RatPoly::constant(c.clone());
        }
        acc
    }
}

/// The n-th cyclotomic polynomial, computed as `∏_{d|n} (x^d - 1)^{μ(n/d)}`
/// with exact integer division.
pub fn cyclotomic(n: u64) -> Result<RatPoly, PolyError> {
    if n == 0 {
        return Err(PolyError::ZeroOrder);
    }
    let n = usize::try_from(n).map_err(|_| PolyError::ZeroOrder)?;
    let divisors: Vec<usize> = (1..=n).filter(|d| n % d == 0).collect();
    // numerator and denominator products as integer coefficient vectors
    let mut num: Vec<i64> = vec![1];
    let mut den: Vec<i64> = vec![1];
    for &d in &divisors {
        match mobius(n / d) {
            1 => num = mul_binomial(&num, d),
            -1 => den = mul_binomial(&den, d),
            _ => {}
        }
    }
    Ok(RatPoly::from_ints(&exact_div_i64(&num, &den)))
}

// multiply by (x^d - 1); cyclotomic numerators stay small for the orders used here
fn mul_binomial(a: &[i64], d: usize) -> Vec<i64> {
    let mut out = vec![0i64; a.len() + d];
    for (i, &c) in a.iter().enumerate() {
        out[i + d] += c;
        out[i] -= c;
    }
    out
}

fn exact_div_i64(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem: Vec<i128> = num.iter().map(|&c| c as i128).collect();
    let dl = den.len();
    let lc = den[dl - 1] as i128;
    let mut quot = vec![0i64; num.len() + 1 - dl];
    for i in (0..quot.len()).rev() {
        let q = rem[i + dl - 1] / lc;
        for (j, &d) in den.iter().enumerate() {
            rem[i + j] -= q * d as i128;
        }
        quot[i] = q as i64;
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    quot
}

pub(crate) fn mobius(mut n: usize) -> i32 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

impl Add for &RatPoly {
    type Output = RatPoly;
    fn add(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::from_coeffs(
            (0..n)
                .map(|i| match (self.coeffs.get(i), rhs.coeffs.get(i)) {
                    (Some(a), Some(b)) => a + b,
                    (Some(a), None) | (None, Some(a)) => a.clone(),
                    (None, None) => unreachable!(),
                })
                .collect(),
        )
    }
}

impl Sub for &RatPoly {
    type Output = RatPoly;
    fn sub(self, rhs: &RatPoly) -> RatPoly {
        self + &(-rhs)
    }
}

impl Neg for &RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        RatPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &RatPoly {
    type Output = RatPoly;
    fn mul(self, rhs: &RatPoly) -> RatPoly {
        if self.is_zero() || rhs.is_zero() {
            return RatPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        RatPoly::from_coeffs(out)
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for RatPoly {
            type Output = RatPoly;
            fn $m(self, rhs: RatPoly) -> RatPoly { (&self).$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        -&self
    }
}

/// Text form: coefficients low-to-high, comma separated, each as `num` or
/// `num/den`. The zero polynomial is written `0`.
impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatPoly[{self}]")
    }
}

impl FromStr for RatPoly {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, PolyError> {
        let s = s.trim();
        if s.is_empty() {
            return Err(PolyError::Parse("empty coefficient list".into()));
        }
        let coeffs = s
            .split(',')
            .map(|tok| parse_rational(tok.trim()))
            .collect::<Result<Vec<_>, _>>()?;
        let poly = RatPoly::from_coeffs(coeffs);
        // canonical text only: reject forms that would not print back identically
        if poly.to_string() != s {
            return Err(PolyError::Parse(format!("non-canonical polynomial text {s:?}")));
        }
        Ok(poly)
    }
}

fn parse_rational(tok: &str) -> Result<Rational, PolyError> {
    let bad = || PolyError::Parse(format!("bad coefficient {tok:?}"));
    match tok.split_once('/') {
        None => tok.parse::<BigInt>().map(Rational::from_integer).map_err(|_| bad()),
        Some((n, d)) => {
            let n: BigInt = n.parse().map_err(|_| bad())?;
            let d: BigInt = d.parse().map_err(|_| bad())?;
            if !d.is_positive() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    /// Independent oracle: x^n - 1 divided by all Φ_d for proper divisors d.
    fn cyclotomic_by_division(n: usize) -> RatPoly {
        let mut poly = &RatPoly::monomial(Rational::one(), n) - &RatPoly::one();
        for d in 1..n {
            if n % d == 0 {
                let (quo, rem) = poly.div_rem(&cyclotomic_by_division(d)).unwrap();
                assert!(rem.is_zero());
                poly = quo;
            }
        }
        poly
    }

    #[test]
    fn cyclotomic_examples() {
        assert_eq!(cyclotomic(1).unwrap(), RatPoly::from_ints(&[-1, 1]));
        let mut phi48 = vec![0i64; 17];
        phi48[0] = 1;
        phi48[8] = -1;
        phi48[16] = 1;
        assert_eq!(cyclotomic(48).unwrap(), RatPoly::from_ints(&phi48));
        assert_eq!(cyclotomic(48).unwrap(), cyclotomic_by_division(48));
        assert_eq!(cyclotomic(9).unwrap(), RatPoly::from_ints(&[1, 0, 0, 1, 0, 0, 1]));
        assert_eq!(cyclotomic(9).unwrap(), cyclotomic_by_division(9));
        assert_eq!(cyclotomic(0), Err(PolyError::ZeroOrder));
    }

    #[test]
    fn cyclotomic_products_give_binomials() {
        for n in 1..=100usize {
            let prod = (1..=n)
                .filter(|d| n % d == 0)
                .fold(RatPoly::one(), |acc, d| &acc * &cyclotomic(d as u64).unwrap());
            let expected = &RatPoly::monomial(Rational::one(), n) - &RatPoly::one();
            assert_eq!(prod, expected, "n = {n}");
        }
    }

    #[test]
    fn cyclotomic_degree_is_totient() {
        assert_eq!(cyclotomic(400).unwrap().degree(), Some(160));
        assert_eq!(cyclotomic(105).unwrap().coeff(7), rat(-2));
    }

    #[test]
    fn mod_reduce_examples() {
        let phi48 = cyclotomic(48).unwrap();
        let x16 = RatPoly::monomial(Rational::one(), 16);
        let mut expected = vec![0i64; 9];
        expected[0] = -1;
        expected[8] = 1;
        assert_eq!(x16.mod_reduce(&phi48).unwrap(), RatPoly::from_ints(&expected));
        let phi9 = cyclotomic(9).unwrap();
        let x3 = RatPoly::monomial(Rational::one(), 3);
        assert_eq!(x3.mod_reduce(&phi9).unwrap(), x3);
        assert!(RatPoly::zero().mod_reduce(&phi9).unwrap().is_zero());
        assert_eq!(x3.mod_reduce(&RatPoly::zero()), Err(PolyError::DivisionByZero));
    }

    #[test]
    fn mod_inverse_examples() {
        let x = RatPoly::x();
        let x2p1 = RatPoly::from_ints(&[1, 0, 1]);
        assert_eq!(x.mod_inverse(&x2p1).unwrap(), RatPoly::from_ints(&[0, -1]));

        let phi9 = cyclotomic(9).unwrap();
        let s = RatPoly::from_ints(&[0, 0, 0, 1, 0, 0, -1]);
        let s = s.mod_reduce(&phi9).unwrap();
        assert_eq!(
            (&s * &s).mod_reduce(&phi9).unwrap(),
            RatPoly::constant(rat(-3))
        );
        let inv = s.mod_inverse(&phi9).unwrap();
        assert_eq!(inv, s.scale(&q(-1, 3)));
        assert_eq!((&s * &inv).mod_reduce(&phi9).unwrap(), RatPoly::one());

        let xp1 = RatPoly::from_ints(&[1, 1]);
        assert_eq!(xp1.mod_inverse(&xp1), Err(PolyError::NotInvertible));
    }

    #[test]
    fn evaluate_examples() {
        let p = RatPoly::from_ints(&[1, 0, 1]);
        assert_eq!(p.evaluate(&3.into()), rat(10));
        let y = RatPoly::from_ints(&[1, 2, 0, 2, 1]).scale(&q(1, 3));
        assert_eq!(y.evaluate(&1.into()), rat(2));
        assert_eq!(y.evaluate(&0.into()), q(1, 3));
    }

    #[test]
    fn text_round_trip() {
        let p = RatPoly::from_coeffs(vec![q(1, 3), q(0, 1), q(-7, 2), rat(5)]);
        assert_eq!(p.to_string(), "1/3,0,-7/2,5");
        assert_eq!("1/3,0,-7/2,5".parse::<RatPoly>().unwrap(), p);
        assert_eq!(RatPoly::zero().to_string(), "0");
        assert_eq!("0".parse::<RatPoly>().unwrap(), RatPoly::zero());
        assert!("1,2,0".parse::<RatPoly>().is_err());
        assert!("2/4".parse::<RatPoly>().is_err());
        assert!("1,x".parse::<RatPoly>().is_err());
        assert!("".parse::<RatPoly>().is_err());
    }

    #[test]
    fn primitive_part_splits_content() {
        let p = RatPoly::from_coeffs(vec![q(-2, 3), q(4, 3), q(-2, 1)]);
        let (content, prim) = p.primitive_part().unwrap();
        assert_eq!(prim, vec![BigInt::from(1), BigInt::from(-2), BigInt::from(3)]);
        assert_eq!(content, q(-2, 3));
    }

    #[test]
    fn mobius_values() {
        let mu: Vec<i32> = (1..=10).map(mobius).collect();
        assert_eq!(mu, vec![1, -1, -1, 0, -1, 1, -1, 0, 0, 1]);
    }
}
