//! Brezing-Weng families: polynomials `(r, t, y, p)` in `Q[x]` with
//! `r | Φ_k(t - 1)`, `r | D y^2 + (t - 2)^2` and `4p = t^2 + D y^2`.

mod cocks_pinch;
mod delta;
mod density;
mod format;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::numtheory::{is_prime_u64, NumError};
use crate::polyring::{cyclotomic, factorize, PolyError, RatPoly, Rational};

pub use cocks_pinch::{cocks_pinch, CocksPinchParams};
pub use delta::{delta, delta_table, valid_quadruplets, DeltaReport, DeltaTable};
pub use density::{
    bateman_horn, bateman_horn_interval, hypothesis_h_check, integral_log_power, integral_residues,
    DensityEstimate, HYPOTHESIS_H_RANGE,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("embedding degree and CM parameter must be positive")]
    ZeroParameter,
    #[error("r must be non-constant with positive leading coefficient")]
    BadModulusShape,
    #[error("r is reducible over Q")]
    ReducibleModulus,
    #[error("z is not a primitive {0}-th root of unity modulo r")]
    NotPrimitiveRoot(u64),
    #[error("sqrtD^2 is not congruent to -{0} modulo r")]
    BadSquareRoot(u64),
    #[error("D = {0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("eps*D = {eps_d} does not divide k*e = {ke}")]
    NotDivisible { eps_d: u64, ke: u64 },
    #[error("f = {f} is not coprime to k = {k}")]
    NotCoprime { f: u64, k: u64 },
    #[error("family invariant violated: {0}")]
    Invariant(&'static str),
    #[error("y is the zero polynomial, delta undefined")]
    ZeroY,
    #[error("y is a nonzero constant, delta undefined")]
    ConstantY,
    #[error("r = {0} is not prime")]
    NotPrime(BigInt),
    #[error("F_r lacks the required roots: {0}")]
    MissingRoots(&'static str),
    #[error("polynomial {0} is not admissible for the density estimate")]
    BadDensityInput(String),
    #[error("malformed family file: {0}")]
    Parse(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Num(#[from] NumError),
}

/// Parameters of the cyclotomic construction with Gauss-sum square root.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GenericParams {
    pub e: u64,
    pub f: u64,
    pub eps: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Family {
    /// CM parameter: the discriminant is `-D` up to square factors.
    pub d: u64,
    /// Embedding degree.
    pub k: u64,
    pub r: RatPoly,
    pub t: RatPoly,
    pub y: RatPoly,
    pub p: RatPoly,
    /// Primitive k-th root of unity modulo `r`.
    pub z: RatPoly,
    /// Square root of `-D` modulo `r`.
    pub sqrt_d: RatPoly,
    /// Multiple of `r` added to the reduced `y` before forming `p`.
    pub y_lift: BigInt,
    pub meta: Option<GenericParams>,
}

fn rat(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

/// Evaluates `poly(arg)` in `Q[x]/(modulus)`.
fn eval_mod(poly: &RatPoly, arg: &RatPoly, modulus: &RatPoly) -> Result<RatPoly, PolyError> {
    let mut acc = RatPoly::zero();
    for c in poly.coeffs().iter().rev() {
        acc = (&(&acc * arg) + &RatPoly::constant(c.clone())).mod_reduce(modulus)?;
    }
    Ok(acc)
}

/// Runs the Brezing-Weng construction after checking that `r` is
/// irreducible, `Φ_k(z) ≡ 0` and `sqrtD^2 ≡ -D` modulo `r`.
pub fn brezing_weng(d: u64, k: u64, r: &RatPoly, z: &RatPoly, sqrt_d: &RatPoly) -> Result<Family, FamilyError> {
    if r.degree().unwrap_or(0) == 0 || !r.leading_coeff().is_some_and(Signed::is_positive) {
        return Err(FamilyError::BadModulusShape);
    }
    let fac = factorize(r)?;
    if fac.factors.len() != 1 || fac.factors[0].1 != 1 {
        return Err(FamilyError::ReducibleModulus);
    }
    assemble(d, k, r, z, sqrt_d, None)
}

fn assemble(
    d: u64,
    k: u64,
    r: &RatPoly,
    z: &RatPoly,
    sqrt_d: &RatPoly,
    meta: Option<GenericParams>,
) -> Result<Family, FamilyError> {
    if d == 0 || k == 0 {
        return Err(FamilyError::ZeroParameter);
    }
    let z = z.mod_reduce(r)?;
    let sqrt_d = sqrt_d.mod_reduce(r)?;
    if !eval_mod(&cyclotomic(k)?, &z, r)?.is_zero() {
        return Err(FamilyError::NotPrimitiveRoot(k));
    }
    let minus_d = RatPoly::constant(rat(-(d as i64)));
    if (&sqrt_d * &sqrt_d).mod_reduce(r)? != minus_d.mod_reduce(r)? {
        return Err(FamilyError::BadSquareRoot(d));
    }
    let t = (&RatPoly::one() + &z).mod_reduce(r)?;
    // 1/sqrtD = -sqrtD/D since sqrtD^2 = -D
    let inv_sqrt = sqrt_d.scale(&Rational::new((-1).into(), d.into()));
    let two = RatPoly::constant(rat(2));
    let y = (&(&t - &two) * &inv_sqrt).mod_reduce(r)?;
    let p = form_p(d, &t, &y);
    Ok(Family {
        d,
        k,
        r: r.clone(),
        t,
        y,
        p,
        z,
        sqrt_d,
        y_lift: BigInt::zero(),
        meta,
    })
}

fn form_p(d: u64, t: &RatPoly, y: &RatPoly) -> RatPoly {
    (&(t * t) + &(y * y).scale(&rat(d))).scale(&Rational::new(1.into(), 4.into()))
}

/// `ε = 4` when `-1` is a square modulo the odd prime `D`, else `1`.
pub fn epsilon(d: u64) -> u64 {
    if d % 4 == 1 {
        4
    } else {
        1
    }
}

/// Checks `D` odd prime, `εD | ke` and `gcd(f, k) = 1`; returns `ε`.
pub fn check_quadruplet(d: u64, k: u64, e: u64, f: u64) -> Result<u64, FamilyError> {
    if k == 0 || e == 0 || f == 0 {
        return Err(FamilyError::ZeroParameter);
    }
    if d % 2 == 0 || !is_prime_u64(d) {
        return Err(FamilyError::NotOddPrime(d));
    }
    let eps = epsilon(d);
    if (k * e) % (eps * d) != 0 {
        return Err(FamilyError::NotDivisible { eps_d: eps * d, ke: k * e });
    }
    if f.gcd(&k) != 1 {
        return Err(FamilyError::NotCoprime { f, k });
    }
    Ok(eps)
}

/// `x^(ke/ε) Σ_{i=1}^{D-1} (i|D) x^(i ke/D) mod Φ_ke`, a square root of `-D`.
pub fn gauss_sum_sqrt(d: u64, ke: u64, eps: u64, r: &RatPoly) -> Result<RatPoly, FamilyError> {
    let n = ke as usize;
    let step = (ke / d) as usize;
    // exponents reduced mod ke (x has order ke modulo Φ_ke) before reduction mod r
    let mut coeffs = vec![Rational::zero(); n];
    let shift = (ke / eps) as usize;
    for i in 1..d {
        let symbol = crate::numtheory::kronecker(i as i64, d);
        let exp = (shift + i as usize * step) % n;
        coeffs[exp] += rat(symbol);
    }
    Ok(RatPoly::from_coeffs(coeffs).mod_reduce(r)?)
}

/// `x^m mod r` using `x^n ≡ 1` where `r = Φ_n`.
fn cyclotomic_power(m: u64, n: u64, r: &RatPoly) -> Result<RatPoly, PolyError> {
    RatPoly::monomial(Rational::one(), (m % n) as usize).mod_reduce(r)
}

/// The cyclotomic construction: `r = Φ_ke`, `z = x^(ef)` and the Gauss-sum
/// square root of `-D`.
pub fn generic_construction(d: u64, k: u64, e: u64, f: u64) -> Result<Family, FamilyError> {
    let eps = check_quadruplet(d, k, e, f)?;
    let ke = k * e;
    let r = cyclotomic(ke)?;
    let z = cyclotomic_power(e * f, ke, &r)?;
    let sqrt_d = gauss_sum_sqrt(d, ke, eps, &r)?;
    assemble(d, k, &r, &z, &sqrt_d, Some(GenericParams { e, f, eps }))
}

impl Family {
    /// `D = 8, k = 48, r = Φ_48, z = x, sqrt(-8) = 2(x^6 + x^18)`.
    pub fn toy() -> Family {
        let r = cyclotomic(48).expect("positive order");
        let mut s = vec![0i64; 19];
        s[6] = 2;
        s[18] = 2;
        assemble(8, 48, &r, &RatPoly::x(), &RatPoly::from_ints(&s), None).expect("valid toy family")
    }

    /// The Barreto-Naehrig family (`D = 3, k = 12`, ρ = 1).
    pub fn barreto_naehrig() -> Family {
        let r = RatPoly::from_ints(&[1, 6, 18, 36, 36]);
        let t = RatPoly::from_ints(&[1, 0, 6]);
        let y = RatPoly::from_ints(&[1, 4, 6]);
        let z = &t - &RatPoly::one();
        let t_minus_2 = &t - &RatPoly::constant(rat(2));
        let sqrt_d = (&t_minus_2 * &y.mod_inverse(&r).expect("y invertible mod r"))
            .mod_reduce(&r)
            .expect("nonzero modulus");
        brezing_weng(3, 12, &r, &z, &sqrt_d).expect("valid BN family")
    }

    /// Same family with `y` replaced by `y + m r` (and `p` recomputed).
    pub fn with_y_lift(&self, m: &BigInt) -> Family {
        let base_y = &self.y - &self.r.scale(&Rational::from_integer(self.y_lift.clone()));
        let y = &base_y + &self.r.scale(&Rational::from_integer(m.clone()));
        Family {
            p: form_p(self.d, &self.t, &y),
            y,
            y_lift: m.clone(),
            ..self.clone()
        }
    }

    /// `deg p / deg r`.
    pub fn rho_value(&self) -> BigRational {
        let dp = self.p.degree().unwrap_or(0);
        let dr = self.r.degree().unwrap_or(1).max(1);
        BigRational::new(dp.into(), dr.into())
    }

    /// Checks the five defining relations symbolically.
    pub fn check_invariants(&self) -> Result<(), FamilyError> {
        let r = &self.r;
        let one = RatPoly::one();
        let two = RatPoly::constant(rat(2));
        if !eval_mod(&cyclotomic(self.k)?, &(&self.t - &one), r)?.is_zero() {
            return Err(FamilyError::Invariant("r does not divide Phi_k(t - 1)"));
        }
        let minus_d = RatPoly::constant(rat(-(self.d as i64))).mod_reduce(r)?;
        if (&self.sqrt_d * &self.sqrt_d).mod_reduce(r)? != minus_d {
            return Err(FamilyError::Invariant("sqrtD^2 is not -D modulo r"));
        }
        let four_p = self.p.scale(&rat(4));
        if four_p != &(&self.t * &self.t) + &(&self.y * &self.y).scale(&rat(self.d)) {
            return Err(FamilyError::Invariant("4p != t^2 + D y^2"));
        }
        if !(&(&self.p + &one) - &self.t).mod_reduce(r)?.is_zero() {
            return Err(FamilyError::Invariant("r does not divide p + 1 - t"));
        }
        let dy = &(&(&self.t - &two) * &(&self.t - &two)) + &(&self.y * &self.y).scale(&rat(self.d));
        debug_assert!(dy.mod_reduce(r)?.is_zero());
        let base_y = &self.y - &r.scale(&Rational::from_integer(self.y_lift.clone()));
        let dr = r.degree();
        if self.t.degree() >= dr || base_y.degree() >= dr {
            return Err(FamilyError::Invariant("t or y not reduced modulo r"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn toy_y() -> RatPoly {
        let mut c = vec![0i64; 12];
        c[11] = -1;
        c[10] = 1;
        c[7] = -1;
        c[6] = 1;
        c[3] = 1;
        c[2] = -1;
        RatPoly::from_ints(&c).scale(&q(1, 4))
    }

    #[test]
    fn toy_family_matches_published_polynomials() {
        let r = cyclotomic(48).unwrap();
        let mut s = vec![0i64; 19];
        s[6] = 2;
        s[18] = 2;
        let fam = brezing_weng(8, 48, &r, &RatPoly::x(), &RatPoly::from_ints(&s)).unwrap();
        assert_eq!(fam.y, toy_y());
        assert_eq!(fam.t, RatPoly::from_ints(&[1, 1]));
        assert_eq!(fam.p, form_p(8, &fam.t, &toy_y()));
        assert_eq!(fam.rho_value(), BigRational::new(11.into(), 8.into()));
        fam.check_invariants().unwrap();
        assert_eq!(fam, Family::toy());
    }

    #[test]
    fn generic_family_d3_k9() {
        let fam = generic_construction(3, 9, 1, 4).unwrap();
        let p = RatPoly::from_ints(&[1, 1, 1, 1, 4, 1, 1, 1, 1]).scale(&q(1, 3));
        let y = RatPoly::from_ints(&[1, 2, 0, 2, 1]).scale(&q(1, 3));
        assert_eq!(fam.p, p);
        assert_eq!(fam.y, y);
        assert_eq!(fam.rho_value(), BigRational::new(4.into(), 3.into()));
        assert_eq!(fam.meta, Some(GenericParams { e: 1, f: 4, eps: 1 }));
        fam.check_invariants().unwrap();
    }

    #[test]
    fn bn_family() {
        let fam = Family::barreto_naehrig();
        assert_eq!(fam.p, RatPoly::from_ints(&[1, 6, 24, 36, 36]));
        assert_eq!(fam.y, RatPoly::from_ints(&[1, 4, 6]));
        assert_eq!(fam.rho_value(), BigRational::one());
        fam.check_invariants().unwrap();
    }

    #[test]
    fn rejects_bad_inputs() {
        let r = cyclotomic(48).unwrap();
        assert_eq!(
            brezing_weng(8, 48, &r, &RatPoly::x(), &RatPoly::x()),
            Err(FamilyError::BadSquareRoot(8))
        );
        let mut s = vec![0i64; 19];
        s[6] = 2;
        s[18] = 2;
        let s = RatPoly::from_ints(&s);
        assert_eq!(
            brezing_weng(8, 48, &r, &RatPoly::from_ints(&[0, 0, 1]), &s),
            Err(FamilyError::NotPrimitiveRoot(48))
        );
        let reducible = &r * &RatPoly::from_ints(&[1, 1]);
        assert_eq!(
            brezing_weng(8, 48, &reducible, &RatPoly::x(), &s),
            Err(FamilyError::ReducibleModulus)
        );
        assert_eq!(
            brezing_weng(8, 48, &r.scale(&q(-1, 1)), &RatPoly::x(), &s),
            Err(FamilyError::BadModulusShape)
        );
        assert_eq!(generic_construction(3, 9, 1, 3), Err(FamilyError::NotCoprime { f: 3, k: 9 }));
        assert_eq!(generic_construction(9, 9, 1, 1), Err(FamilyError::NotOddPrime(9)));
        assert_eq!(
            generic_construction(5, 5, 1, 1),
            Err(FamilyError::NotDivisible { eps_d: 20, ke: 5 })
        );
    }

    #[test]
    fn epsilon_rule() {
        assert_eq!(epsilon(5), 4);
        assert_eq!(epsilon(13), 4);
        assert_eq!(epsilon(3), 1);
        assert_eq!(epsilon(7), 1);
        assert!(generic_construction(5, 20, 1, 3).is_ok());
    }

    #[test]
    fn gauss_sum_squares_to_minus_d_everywhere() {
        for (d, k, e, _f) in valid_quadruplets(20).into_iter().filter(|q| q.3 == 1) {
            let ke = k * e;
            let r = cyclotomic(ke).unwrap();
            let s = gauss_sum_sqrt(d, ke, epsilon(d), &r).unwrap();
            assert_eq!(
                (&s * &s).mod_reduce(&r).unwrap(),
                RatPoly::constant(rat(-(d as i64))),
                "D={d} k={k} e={e}"
            );
        }
    }

    #[test]
    fn y_lift_changes_p_but_keeps_relations() {
        let fam = generic_construction(3, 9, 1, 4).unwrap().with_y_lift(&BigInt::from(2));
        fam.check_invariants().unwrap();
        assert_eq!(fam.y.degree(), Some(6));
        let back = fam.with_y_lift(&BigInt::zero());
        assert_eq!(back, generic_construction(3, 9, 1, 4).unwrap());
    }

    #[test]
    fn construction_is_deterministic() {
        assert_eq!(generic_construction(7, 14, 2, 3).unwrap(), generic_construction(7, 14, 2, 3).unwrap());
    }
}
