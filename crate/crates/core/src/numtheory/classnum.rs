use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::{factor_partial, isqrt_u64, jacobi, NumError};

/// Largest |disc| accepted by form enumeration.
pub const MAX_FORM_DISC: i64 = 100_000_000;

/// Reduced positive definite form `a x^2 + b x y + c y^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QuadForm {
    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_reduced(&self) -> bool {
        self.a > 0
            && self.b.abs() <= self.a
            && self.a <= self.c
            && (self.b >= 0 || (self.b.abs() != self.a && self.a != self.c))
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c) == 1
    }
}

fn check_disc(disc: i64) -> Result<(), NumError> {
    if disc >= 0 || !matches!(disc.rem_euclid(4), 0 | 1) {
        return Err(NumError::BadDiscriminant(disc));
    }
    Ok(())
}

/// Visits every reduced primitive form of discriminant `disc`, walking
/// `b ≡ disc (mod 2)` up to `sqrt(|disc|/3)` and the divisors `a` of
/// `(b^2 - disc)/4` with `b ≤ a ≤ c`.
fn for_each_reduced(disc: i64, mut visit: impl FnMut(QuadForm)) {
    let n = disc.unsigned_abs();
    let b_max = isqrt_u64(n / 3);
    let mut b = (n % 2) as i64;
    while b as u64 <= b_max {
        let m = (b * b - disc) / 4;
        let a_max = isqrt_u64(m as u64) as i64;
        let mut a = b.max(1);
        while a <= a_max {
            if m % a == 0 {
                let c = m / a;
                let f = QuadForm { a, b, c };
                if f.is_primitive() {
                    visit(f);
                    if b > 0 && b < a && a < c {
                        visit(QuadForm { a, b: -b, c });
                    }
                }
            }
            a += 1;
        }
        b += 2;
    }
}

/// All reduced primitive forms of a negative discriminant, sorted by `(a, b)`.
pub fn reduced_forms(disc: i64) -> Result<Vec<QuadForm>, NumError> {
    check_disc(disc)?;
    if disc < -MAX_FORM_DISC {
        return Err(NumError::OutOfRange(disc));
    }
    let mut forms = Vec::new();
    for_each_reduced(disc, |f| forms.push(f));
    forms.sort();
    Ok(forms)
}

fn count_reduced(disc: i64) -> u64 {
    let mut h = 0;
    for_each_reduced(disc, |_| h += 1);
    h
}

/// Kronecker symbol `(d | p)` for a prime `p`.
pub fn kronecker(d: i64, p: u64) -> i32 {
    if p == 2 {
        return match d.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0,
        };
    }
    jacobi(&BigInt::from(d), &BigInt::from(p)).expect("odd prime")
}

/// Splits `disc = d_K * f^2` with `d_K` fundamental; returns `(d_K, prime
/// factorization of f)`.
pub fn fundamental_split(disc: i64) -> Result<(i64, Vec<(u64, u32)>), NumError> {
    check_disc(disc)?;
    let fac = factor_partial(&BigInt::from(disc), 1 << 16, u64::MAX)?;
    debug_assert!(fac.is_complete());
    let mut squarefree: i64 = -1;
    let mut conductor: Vec<(u64, u32)> = Vec::new();
    for (p, e) in &fac.factors {
        let p = p.to_u64().ok_or(NumError::OutOfRange(disc))?;
        if e % 2 == 1 {
            squarefree *= p as i64;
        }
        if e / 2 > 0 {
            conductor.push((p, e / 2));
        }
    }
    if squarefree.rem_euclid(4) == 1 {
        return Ok((squarefree, conductor));
    }
    // d_K = 4 * squarefree: one factor 2 moves from the conductor into d_K
    let two = conductor.iter_mut().find(|(p, _)| *p == 2).expect("even conductor");
    two.1 -= 1;
    conductor.retain(|(_, e)| *e > 0);
    Ok((4 * squarefree, conductor))
}

/// Class number of the imaginary quadratic order of discriminant `disc`,
/// `h(d_K f^2) = h(d_K) f / [O_K^* : O^*] ∏_{p | f} (1 - (d_K | p)/p)`,
/// with `h(d_K)` obtained by counting reduced forms.
pub fn class_number(disc: i64) -> Result<u64, NumError> {
    let (d_k, conductor) = fundamental_split(disc)?;
    if d_k < -MAX_FORM_DISC {
        return Err(NumError::OutOfRange(disc));
    }
    let mut h = count_reduced(d_k) as u128;
    for &(p, e) in &conductor {
        let chi = kronecker(d_k, p) as i128;
        h *= (p as u128).pow(e - 1);
        h = (h as i128 * (p as i128 - chi)) as u128;
    }
    if !conductor.is_empty() {
        match d_k {
            -3 => h /= 3,
            -4 => h /= 2,
            _ => {}
        }
    }
    u64::try_from(h).map_err(|_| NumError::OutOfRange(disc))
}
