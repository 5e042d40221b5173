//! Complex multiplication: Hilbert class polynomials for small class
//! numbers, curve construction from [`CurveParams`] and probabilistic
//! verification of explicit curve equations.

mod field;
pub mod fixtures;
mod hilbert;
mod record;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::numtheory::{class_number, is_prime, is_square, jacobi, NumError};
use crate::polyring::cyclotomic;
use crate::search::{CurveParams, SearchError};

pub use field::roots_mod_p;
pub use hilbert::{default_precision, hilbert_class_poly, hilbert_class_poly_capped, DEFAULT_CLASS_NUMBER_CAP};

use field::CurveField;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CmError {
    #[error("class number {h} of discriminant {disc} exceeds the cap {cap}")]
    ClassNumberTooLarge { disc: i64, h: u64, cap: u64 },
    #[error("rounding of the class polynomial for {disc} is ambiguous at {bits} bits")]
    Precision { disc: i64, bits: u32 },
    #[error("discriminant -{0} is out of range")]
    DiscriminantRange(BigInt),
    #[error("the class polynomial has no root modulo p")]
    NoRoot,
    #[error("no twist has the requested order")]
    NoTwist,
    #[error("malformed curve file: {0}")]
    Parse(String),
    #[error(transparent)]
    Params(#[from] SearchError),
    #[error(transparent)]
    Num(#[from] NumError),
}

/// `Y^2 = X^3 + a X + b` over `F_p` with claimed subgroup order `r`, trace
/// `t` and embedding degree `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Curve {
    pub p: BigInt,
    pub a: BigInt,
    pub b: BigInt,
    pub r: BigInt,
    pub t: BigInt,
    pub k: u64,
    /// CM parameter; when present, `(4p - t^2) / D_eff` must be a square.
    pub d_eff: Option<BigInt>,
}

impl Curve {
    pub fn order(&self) -> BigInt {
        &self.p + 1u32 - &self.t
    }

    /// `j = 1728 · 4a^3 / (4a^3 + 27b^2)`.
    pub fn j_invariant(&self) -> BigInt {
        let p = &self.p;
        let a3: BigInt = (self.a.modpow(&BigInt::from(3), p) * 4u32).mod_floor(p);
        let den: BigInt = (&a3 + &self.b * &self.b * 27u32).mod_floor(p);
        match den.modinv(p) {
            Some(inv) => (a3 * 1728u32 * inv).mod_floor(p),
            None => BigInt::zero(),
        }
    }

    fn field(&self) -> CurveField<'_> {
        CurveField { p: &self.p, a: &self.a, b: &self.b }
    }
}

/// The order's discriminant: `-D_eff` when that is `≡ 0, 1 (mod 4)`,
/// otherwise `-4 D_eff`.
pub fn cm_discriminant(d_eff: &BigInt) -> Result<i64, CmError> {
    let d = d_eff.to_i64().filter(|d| *d > 0 && *d < i64::MAX / 4).ok_or_else(|| CmError::DiscriminantRange(d_eff.clone()))?;
    Ok(if matches!((-d).rem_euclid(4), 0 | 1) { -d } else { -4 * d })
}

/// Why a curve failed verification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerifyFailure {
    NoSamples,
    PNotPrime,
    Singular,
    /// `|t| > 2 sqrt(p)`.
    Hasse,
    RDoesNotDivideOrder,
    EmbeddingDegree,
    /// `(4p - t^2) / D_eff` is not a square integer.
    CmMismatch,
    /// Sample number `i` is not killed by `p + 1 - t`.
    OrderMismatch(usize),
    /// `r` does not kill the cofactor multiple of sample `i`.
    SubgroupMismatch(usize),
    TooFewPoints,
}

impl fmt::Display for VerifyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerifyFailure::NoSamples => f.write_str("samples-must-be-positive"),
            VerifyFailure::PNotPrime => f.write_str("p-not-prime"),
            VerifyFailure::Singular => f.write_str("singular-curve"),
            VerifyFailure::Hasse => f.write_str("trace-outside-hasse-bound"),
            VerifyFailure::RDoesNotDivideOrder => f.write_str("r-does-not-divide-order"),
            VerifyFailure::EmbeddingDegree => f.write_str("wrong-embedding-degree"),
            VerifyFailure::CmMismatch => f.write_str("cm-equation-mismatch"),
            VerifyFailure::OrderMismatch(i) => write!(f, "order-mismatch sample={i}"),
            VerifyFailure::SubgroupMismatch(i) => write!(f, "subgroup-mismatch sample={i}"),
            VerifyFailure::TooFewPoints => f.write_str("point-sampling-failed"),
        }
    }
}

fn embedding_degree_ok(k: u64, p: &BigInt, r: &BigInt) -> bool {
    let Ok(phi) = cyclotomic(k) else { return false };
    let pm = p.mod_floor(r);
    let at_p = phi
        .coeffs()
        .iter()
        .rev()
        .fold(BigInt::zero(), |acc, c| (acc * &pm + c.to_integer()).mod_floor(r));
    at_p.is_zero() && (1..k).filter(|j| k % j == 0).all(|j| !pm.modpow(&BigInt::from(j), r).is_one())
}

fn orders_kill(curve: &CurveField<'_>, order: &BigInt, r: &BigInt, samples: usize) -> Result<(), VerifyFailure> {
    let points = curve.sample_points(samples);
    if points.len() < samples {
        return Err(VerifyFailure::TooFewPoints);
    }
    let cofactor = order / r;
    for (i, pt) in points.iter().enumerate() {
        if !curve.mul(pt, order).is_identity() {
            return Err(VerifyFailure::OrderMismatch(i));
        }
        let q = curve.mul(pt, &cofactor);
        if !q.is_identity() && !curve.mul(&q, r).is_identity() {
            return Err(VerifyFailure::SubgroupMismatch(i));
        }
    }
    Ok(())
}

/// Checks the curve against its claimed parameters: `p` prime, nonsingular,
/// Hasse bound, `r | p + 1 - t`, embedding degree `k`, the CM equation when
/// `D_eff` is given, and `(p + 1 - t) P = O`, `r ((p + 1 - t)/r) P = O` for
/// `samples` deterministic points `P`.
pub fn verify_curve(c: &Curve, samples: usize) -> Result<(), VerifyFailure> {
    if samples == 0 {
        return Err(VerifyFailure::NoSamples);
    }
    if c.p <= BigInt::from(3) || !is_prime(&c.p) {
        return Err(VerifyFailure::PNotPrime);
    }
    let curve = c.field();
    if !curve.discriminant_nonzero() {
        return Err(VerifyFailure::Singular);
    }
    let four_p: BigInt = &c.p * 4u32;
    let t2 = &c.t * &c.t;
    if t2 > four_p {
        return Err(VerifyFailure::Hasse);
    }
    let order = c.order();
    if !c.r.is_positive() || !(&order % &c.r).is_zero() {
        return Err(VerifyFailure::RDoesNotDivideOrder);
    }
    if !embedding_degree_ok(c.k, &c.p, &c.r) {
        return Err(VerifyFailure::EmbeddingDegree);
    }
    if let Some(d) = &c.d_eff {
        let (q, rem) = (four_p - t2).div_rem(d);
        if !d.is_positive() || !rem.is_zero() || !is_square(&q) {
            return Err(VerifyFailure::CmMismatch);
        }
    }
    orders_kill(&curve, &order, &c.r, samples)
}

/// Number of sample points used to select the twist in [`build_curve`].
const TWIST_SAMPLES: usize = 8;

fn smallest_non_residue(p: &BigInt) -> BigInt {
    let mut c = BigInt::from(2);
    while jacobi(&c, p).expect("odd prime") != -1 {
        c += 1u32;
    }
    c
}

/// Candidate `(a, b)` pairs with j-invariant `j`, in a fixed order.
fn twists(j: &BigInt, p: &BigInt) -> Vec<(BigInt, BigInt)> {
    let m = |v: BigInt| v.mod_floor(p);
    if j.is_zero() {
        // y^2 = x^3 + b: six classes of b modulo sixth powers
        return (1..=256).map(|b| (BigInt::zero(), BigInt::from(b))).collect();
    }
    if j == &BigInt::from(1728) {
        // y^2 = x^3 + a x: four classes of a modulo fourth powers
        return (1..=256).map(|a| (BigInt::from(a), BigInt::zero())).collect();
    }
    let k = m(BigInt::from(1728) - j);
    let a = m(j * &k * 3);
    let b = m(j * &k * &k * 2);
    let c = smallest_non_residue(p);
    let (a2, b2) = (m(&a * &c * &c), m(&b * &c * &c * &c));
    vec![(a, b), (a2, b2)]
}

/// Builds a curve for validated parameters with the class polynomial of
/// the order of discriminant `-D_eff` (or `-4 D_eff`), using the smallest
/// root modulo `p` and the first twist whose sampled points are killed by
/// `p + 1 - t`.
pub fn build_curve(params: &CurveParams) -> Result<Curve, CmError> {
    build_curve_capped(params, DEFAULT_CLASS_NUMBER_CAP)
}

pub fn build_curve_capped(params: &CurveParams, cap: u64) -> Result<Curve, CmError> {
    params.validate()?;
    let disc = cm_discriminant(&params.d_eff)?;
    let h = class_number(disc)?;
    if h > cap {
        return Err(CmError::ClassNumberTooLarge { disc, h, cap });
    }
    let poly = hilbert_class_poly_capped(disc, cap, None)?;
    let p = &params.p;
    let roots = roots_mod_p(&poly, p);
    let j = roots.first().ok_or(CmError::NoRoot)?;
    let order = &params.p + 1u32 - &params.t;
    for (a, b) in twists(j, p) {
        let field = CurveField { p, a: &a, b: &b };
        if !field.discriminant_nonzero() {
            continue;
        }
        if orders_kill(&field, &order, &params.r, TWIST_SAMPLES).is_ok() {
            return Ok(Curve {
                p: p.clone(),
                a,
                b,
                r: params.r.clone(),
                t: params.t.clone(),
                k: params.k,
                d_eff: Some(params.d_eff.clone()),
            });
        }
    }
    Err(CmError::NoTwist)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::Family;
    use crate::search::{apply_improvement, instantiate, SearchConfig};

    fn toy_params() -> CurveParams {
        let cfg = SearchConfig { min_r_bits: 100, ..SearchConfig::default() };
        let params = instantiate(&Family::toy(), &BigInt::from(137), &cfg).unwrap().unwrap();
        apply_improvement(&params, &BigInt::from(17)).unwrap()
    }

    #[test]
    fn discriminant_convention() {
        assert_eq!(cm_discriminant(&BigInt::from(2312)).unwrap(), -2312);
        assert_eq!(cm_discriminant(&BigInt::from(3)).unwrap(), -3);
        assert_eq!(cm_discriminant(&BigInt::from(5)).unwrap(), -20);
        assert_eq!(cm_discriminant(&BigInt::from(2)).unwrap(), -8);
    }

    #[test]
    fn toy_curve_from_class_polynomial() {
        let params = toy_params();
        let curve = build_curve(&params).unwrap();
        verify_curve(&curve, 8).unwrap();
        // the published curve has a j-invariant among the roots as well
        let paper = fixtures::toy();
        let poly = hilbert_class_poly(-2312).unwrap();
        let roots = roots_mod_p(&poly, &params.p);
        assert!(roots.contains(&paper.j_invariant()));
        assert!(roots.contains(&curve.j_invariant()));
    }

    #[test]
    fn inconsistent_params_are_rejected() {
        let mut params = toy_params();
        params.t += 1;
        assert!(build_curve(&params).is_err());
    }

    #[test]
    fn large_class_numbers_hit_the_cap() {
        let mut params = toy_params();
        params = apply_improvement(&params, &BigInt::from(2)).unwrap();
        assert!(matches!(build_curve_capped(&params, 16), Err(CmError::ClassNumberTooLarge { .. })));
    }

    #[test]
    fn unit_class_number_goes_through_j_zero() {
        // 4 · 109 = 19^2 + 3 · 5^2; order 109 + 1 - 19 = 91 = 7 · 13
        let p = BigInt::from(109);
        let t = BigInt::from(19);
        let order = &p + 1 - &t;
        let r = BigInt::from(7);
        assert_eq!(order, BigInt::from(91));
        // 109 ≡ 4 (mod 7) has multiplicative order 3
        let params = CurveParams {
            p: p.clone(),
            r,
            cofactor_r: BigInt::one(),
            t,
            y: BigInt::from(5),
            d_eff: BigInt::from(3),
            k: 3,
            n: BigInt::one(),
            x_seed: BigInt::zero(),
        };
        params.validate().unwrap();
        let curve = build_curve(&params).unwrap();
        assert!(curve.a.is_zero());
        verify_curve(&curve, 8).unwrap();
        // brute-force point count oracle
        let mut count = 1i64;
        for x in 0..109i64 {
            for y in 0..109i64 {
                let rhs = BigInt::from(x * x * x) + &curve.b;
                if (BigInt::from(y * y) - rhs).mod_floor(&p).is_zero() {
                    count += 1;
                }
            }
        }
        assert_eq!(BigInt::from(count), order);
    }

    #[test]
    fn verification_failures_are_named() {
        let good = fixtures::toy();
        assert_eq!(verify_curve(&good, 0), Err(VerifyFailure::NoSamples));
        let mut c = good.clone();
        c.t += 2;
        assert!(verify_curve(&c, 8).is_err());
        let mut c = good.clone();
        c.b += 1;
        assert!(matches!(verify_curve(&c, 8), Err(VerifyFailure::OrderMismatch(_))));
        let mut c = good;
        c.d_eff = Some(BigInt::from(7));
        assert_eq!(verify_curve(&c, 8), Err(VerifyFailure::CmMismatch));
    }
}
