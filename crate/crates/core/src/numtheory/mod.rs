//! Integer number theory: primality, residue symbols, modular square roots,
//! partial factorization and class numbers of imaginary quadratic orders.

mod classnum;
mod factorization;

use num_bigint::{BigInt, RandBigInt};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use thiserror::Error;

pub use classnum::{class_number, fundamental_split, kronecker, reduced_forms, QuadForm, MAX_FORM_DISC};
pub use factorization::{factor_partial, small_primes, Factorization, DEFAULT_RHO_BUDGET, DEFAULT_SMOOTH_BOUND};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumError {
    #[error("modulus must be odd and positive, got {0}")]
    BadModulus(BigInt),
    #[error("cannot factor zero")]
    Zero,
    #[error("{0} is not a negative discriminant (must be < 0 and ≡ 0, 1 mod 4)")]
    BadDiscriminant(i64),
    #[error("discriminant {0} is outside the supported range")]
    OutOfRange(i64),
    #[error("malformed factorization text: {0}")]
    Parse(String),
}

const MR_BASES_64: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
const MR_RANDOM_ROUNDS: usize = 64;

/// Primality test: deterministic below 2^64, otherwise 64 strong-probable-prime
/// rounds with bases drawn from a generator seeded by `n` (error < 2^-128).
pub fn is_prime(n: &BigInt) -> bool {
    if n < &BigInt::from(2) {
        return false;
    }
    for &p in &MR_BASES_64 {
        if (n % p).is_zero() {
            return n == &BigInt::from(p);
        }
    }
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    let n_minus_1: BigInt = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let two = BigInt::from(2);
    let strong_probable = |a: &BigInt| -> bool {
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            return true;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                return true;
            }
        }
        false
    };
    if !strong_probable(&two) {
        return false;
    }
    let seed = n.to_u64_digits().1.iter().fold(0u64, |acc, w| acc.rotate_left(7) ^ w);
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let upper = &n_minus_1 - 1u32;
    (0..MR_RANDOM_ROUNDS).all(|_| strong_probable(&rng.gen_bigint_range(&two, &upper)))
}

fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod_u64(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod_u64(acc, a, m);
        }
        a = mul_mod_u64(a, a, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES_64 {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &a in &MR_BASES_64 {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Jacobi symbol `(a | n)` for odd positive `n`.
pub fn jacobi(a: &BigInt, n: &BigInt) -> Result<i32, NumError> {
    if !n.is_positive() || n.is_even() {
        return Err(NumError::BadModulus(n.clone()));
    }
    let mut a = a.mod_floor(n);
    let mut n = n.clone();
    let mut result = 1;
    while !a.is_zero() {
        let tz = a.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            a >>= tz;
            let n8 = (&n % 8u32).to_u32().unwrap_or(0);
            if tz % 2 == 1 && (n8 == 3 || n8 == 5) {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if (&a % 4u32) == BigInt::from(3) && (&n % 4u32) == BigInt::from(3) {
            result = -result;
        }
        a = a.mod_floor(&n);
    }
    Ok(if n.is_one() { result } else { 0 })
}

/// Square root of `a` modulo the prime `p` (Tonelli-Shanks): the smaller of
/// the two roots, or `None` for a non-residue.
pub fn sqrt_mod(a: &BigInt, p: &BigInt) -> Option<BigInt> {
    let a = a.mod_floor(p);
    if a.is_zero() {
        return Some(BigInt::zero());
    }
    if p == &BigInt::from(2) {
        return Some(a);
    }
    if jacobi(&a, p).ok()? != 1 {
        return None;
    }
    let p_minus_1: BigInt = p - 1u32;
    let s = p_minus_1.trailing_zeros().unwrap_or(0);
    let q = &p_minus_1 >> s;
    let root = if s == 1 {
        a.modpow(&((p + 1u32) >> 2), p)
    } else {
        let mut z = BigInt::from(2);
        while jacobi(&z, p).ok()? != -1 {
            z += 1u32;
        }
        let mut m = s;
        let mut c = z.modpow(&q, p);
        let mut t = a.modpow(&q, p);
        let mut r = a.modpow(&((&q + 1u32) >> 1), p);
        while !t.is_one() {
            let mut i = 0;
            let mut t2 = t.clone();
            while !t2.is_one() {
                t2 = (&t2 * &t2) % p;
                i += 1;
            }
            let b = c.modpow(&(BigInt::one() << (m - i - 1)), p);
            m = i;
            c = (&b * &b) % p;
            t = (t * &c) % p;
            r = (r * b) % p;
        }
        r
    };
    let other = p - &root;
    Some(root.min(other))
}

/// Integer square root for non-negative inputs.
pub(crate) fn isqrt_u64(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Whether `n` is a perfect square (negative numbers are not).
pub fn is_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &(&r * &r) == n
}
