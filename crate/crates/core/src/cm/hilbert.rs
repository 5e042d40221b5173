//! Hilbert class polynomials from the values `j((-b + sqrt(disc)) / 2a)` at
//! the reduced forms, evaluated in binary fixed point.
//!
//! `j = (256 h + 1)^3 / h` with `h = Δ(2τ)/Δ(τ) = q (P(q^2)/P(q))^24`, where
//! `P(q) = ∏ (1 - q^n)` is summed through the pentagonal number theorem.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::CmError;
use crate::numtheory::{class_number, reduced_forms, QuadForm};

/// Default cap on the class number (degree of the class polynomial).
pub const DEFAULT_CLASS_NUMBER_CAP: u64 = 64;

/// Bits by which rounded coefficients must be separated from a half-integer.
const ROUNDING_MARGIN: u32 = 32;

/// Real number `m / 2^prec`.
#[derive(Debug, Clone, Copy)]
struct Fixed {
    prec: u32,
}

#[derive(Debug, Clone, PartialEq)]
struct Complex {
    re: BigInt,
    im: BigInt,
}

impl Fixed {
    fn one(&self) -> BigInt {
        BigInt::one() << self.prec
    }

    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        (a * b) >> self.prec
    }

    fn div(&self, a: &BigInt, b: &BigInt) -> BigInt {
        (a << self.prec).div_floor(b)
    }

    fn cmul(&self, a: &Complex, b: &Complex) -> Complex {
        Complex {
            re: self.mul(&a.re, &b.re) - self.mul(&a.im, &b.im),
            im: self.mul(&a.re, &b.im) + self.mul(&a.im, &b.re),
        }
    }

    /// `None` when the divisor vanishes at this precision.
    fn cdiv(&self, a: &Complex, b: &Complex) -> Option<Complex> {
        let norm = self.mul(&b.re, &b.re) + self.mul(&b.im, &b.im);
        if norm.is_zero() {
            return None;
        }
        let num = self.cmul(a, &Complex { re: b.re.clone(), im: -&b.im });
        Some(Complex { re: self.div(&num.re, &norm), im: self.div(&num.im, &norm) })
    }

    fn cpow(&self, a: &Complex, mut e: u32) -> Complex {
        let mut base = a.clone();
        let mut acc = Complex { re: self.one(), im: BigInt::zero() };
        while e > 0 {
            if e & 1 == 1 {
                acc = self.cmul(&acc, &base);
            }
            base = self.cmul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// `atan(1/n)` by its alternating series.
    fn atan_inv(&self, n: u64) -> BigInt {
        let n2 = BigInt::from(n * n);
        let mut power = self.one() / n;
        let mut sum = BigInt::zero();
        let mut k = 0u64;
        while !power.is_zero() {
            let term = &power / (2 * k + 1);
            if k % 2 == 0 {
                sum += term;
            } else {
                sum -= term;
            }
            power /= &n2;
            k += 1;
        }
        sum
    }

    /// Machin's formula `π = 16 atan(1/5) - 4 atan(1/239)`.
    fn pi(&self) -> BigInt {
        self.atan_inv(5) * 16 - self.atan_inv(239) * 4
    }

    fn sqrt_int(&self, n: u64) -> BigInt {
        (BigInt::from(n) << (2 * self.prec)).sqrt()
    }

    /// `exp(z)`: Taylor series at `z / 2^s`, then `s` squarings.
    fn cexp(&self, z: &Complex) -> Complex {
        let size = z.re.abs().max(z.im.abs());
        let s = (size.bits() as i64 - self.prec as i64 + 8).max(0) as u32;
        let small = Complex { re: &z.re >> s, im: &z.im >> s };
        let mut term = Complex { re: self.one(), im: BigInt::zero() };
        let mut sum = term.clone();
        let mut n = 1u32;
        while term.re.bits() > 1 || term.im.bits() > 1 {
            term = self.cmul(&term, &small);
            term.re /= n;
            term.im /= n;
            sum.re += &term.re;
            sum.im += &term.im;
            n += 1;
        }
        for _ in 0..s {
            sum = self.cmul(&sum, &sum);
        }
        sum
    }

    /// `P(q) = 1 + Σ_{n≥1} (-1)^n (q^{n(3n-1)/2} + q^{n(3n+1)/2})`.
    fn pentagonal(&self, q: &Complex) -> Complex {
        let mut sum = Complex { re: self.one(), im: BigInt::zero() };
        let mut power = Complex { re: self.one(), im: BigInt::zero() };
        let mut exp = 0u64;
        for n in 1u64.. {
            let mut advance = |target: u64, power: &mut Complex| {
                while exp < target {
                    *power = self.cmul(power, q);
                    exp += 1;
                }
            };
            advance(n * (3 * n - 1) / 2, &mut power);
            let first = power.clone();
            let mut second = power.clone();
            for _ in 0..n {
                second = self.cmul(&second, q);
            }
            // floor shifts leave negligible negative values at -1
            if first.re.bits() <= 1 && first.im.bits() <= 1 {
                break;
            }
            let sign = if n % 2 == 0 { 1 } else { -1 };
            sum.re += (&first.re + &second.re) * sign;
            sum.im += (&first.im + &second.im) * sign;
        }
        sum
    }

    /// `j((-b + sqrt(disc)) / 2a)`.
    fn j_at(&self, form: &QuadForm, pi: &BigInt, sqrt_d: &BigInt) -> Option<Complex> {
        // 2πiτ = -π sqrt|disc| / a - iπ b / a
        let z = Complex {
            re: -self.mul(pi, sqrt_d) / form.a,
            im: -(pi * form.b) / form.a,
        };
        let q = self.cexp(&z);
        let q2 = self.cmul(&q, &q);
        let ratio = self.cdiv(&self.pentagonal(&q2), &self.pentagonal(&q))?;
        let h = self.cmul(&q, &self.cpow(&ratio, 24));
        let mut num = Complex { re: &h.re * 256 + self.one(), im: &h.im * 256 };
        num = self.cmul(&self.cmul(&num, &num), &num);
        self.cdiv(&num, &h)
    }
}

/// Bits needed for the class polynomial of `disc`: the coefficient bound
/// `π sqrt|disc| Σ 1/a / ln 2` plus twice the largest `log2 |j|` (the
/// relative error of `q` is amplified by `|j|`) and a safety margin.
pub fn default_precision(disc: i64, forms: &[QuadForm]) -> u32 {
    let scale = std::f64::consts::PI * (disc.unsigned_abs() as f64).sqrt() / std::f64::consts::LN_2;
    let coeff_bits: f64 = forms.iter().map(|f| scale / f.a as f64 + 1.0).sum();
    (coeff_bits + 2.0 * scale) as u32 + 64 + 4 * forms.len() as u32
}

/// Monic integer Hilbert class polynomial (low-to-high coefficients).
pub fn hilbert_class_poly(disc: i64) -> Result<Vec<BigInt>, CmError> {
    hilbert_class_poly_capped(disc, DEFAULT_CLASS_NUMBER_CAP, None)
}

/// As [`hilbert_class_poly`] with an explicit class-number cap and an
/// optional working precision in bits.
pub fn hilbert_class_poly_capped(disc: i64, cap: u64, precision: Option<u32>) -> Result<Vec<BigInt>, CmError> {
    let h = class_number(disc)?;
    if h > cap {
        return Err(CmError::ClassNumberTooLarge { disc, h, cap });
    }
    let forms = reduced_forms(disc)?;
    debug_assert_eq!(forms.len() as u64, h);
    let prec = precision.unwrap_or_else(|| default_precision(disc, &forms));
    let fx = Fixed { prec: prec + ROUNDING_MARGIN };
    let pi = fx.pi();
    let sqrt_d = fx.sqrt_int(disc.unsigned_abs());
    let roots: Vec<Complex> = forms
        .par_iter()
        .map(|f| fx.j_at(f, &pi, &sqrt_d))
        .collect::<Option<_>>()
        .ok_or(CmError::Precision { disc, bits: prec })?;

    // ∏ (X - j_i), multiplied in form order
    let mut poly = vec![Complex { re: fx.one(), im: BigInt::zero() }];
    for j in &roots {
        let mut next = vec![Complex { re: BigInt::zero(), im: BigInt::zero() }; poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            next[i + 1].re += &c.re;
            next[i + 1].im += &c.im;
            let prod = fx.cmul(c, j);
            next[i].re -= prod.re;
            next[i].im -= prod.im;
        }
        poly = next;
    }

    let half = BigInt::one() << (fx.prec - 1);
    let tolerance = BigInt::one() << (fx.prec - ROUNDING_MARGIN);
    poly.iter()
        .map(|c| {
            let rounded = (&c.re + &half) >> fx.prec;
            let error = &c.re - (&rounded << fx.prec);
            if error.abs() >= tolerance || c.im.abs() >= tolerance {
                return Err(CmError::Precision { disc, bits: prec });
            }
            Ok(rounded)
        })
        .collect()
}
