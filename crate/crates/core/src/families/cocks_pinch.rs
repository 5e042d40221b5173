use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::FamilyError;
use crate::numtheory::{is_prime, jacobi, small_primes, sqrt_mod};

/// One Cocks-Pinch parameter set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CocksPinchParams {
    pub p: BigInt,
    pub r: BigInt,
    pub t: BigInt,
    pub y: BigInt,
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    for p in small_primes((n as f64).sqrt() as u64 + 1) {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn totient(n: u64) -> u64 {
    prime_divisors(n).iter().fold(n, |acc, p| acc / p * (p - 1))
}

/// The `index`-th distinct primitive k-th root of unity modulo `r` met while
/// walking `g = 2, 3, ...` through `g^((r-1)/k)` (index taken mod φ(k)).
fn primitive_root_of_unity(k: u64, r: &BigInt, index: u64) -> BigInt {
    let exp = (r - 1u32) / k;
    let qs = prime_divisors(k);
    let wanted = (index % totient(k)) as usize;
    let mut seen: Vec<BigInt> = Vec::new();
    let mut g = BigInt::from(2);
    loop {
        let z = g.modpow(&exp, r);
        let primitive = qs.iter().all(|q| !z.modpow(&BigInt::from(k / q), r).is_one());
        if primitive && !seen.contains(&z) {
            if seen.len() == wanted {
                return z;
            }
            seen.push(z);
        }
        g += 1u32;
    }
}

/// Cocks-Pinch: `t = 1 + z`, `y = (t - 2)/sqrt(-D) mod r`, `p = (t^2 + D y^2)/4`.
///
/// `t` and `y` start as least non-negative residues; the lifts `(t, y)`,
/// `(t + r, y)`, `(t, y + r)`, `(t + r, y + r)` are tried in order and the
/// first giving a prime integer `p` is returned.
pub fn cocks_pinch(d: u64, k: u64, r: &BigInt, z_seed: u64) -> Result<Option<CocksPinchParams>, FamilyError> {
    if d == 0 || k == 0 {
        return Err(FamilyError::ZeroParameter);
    }
    if !is_prime(r) || r == &BigInt::from(2) {
        return Err(FamilyError::NotPrime(r.clone()));
    }
    if !((r - 1u32) % k).is_zero() {
        return Err(FamilyError::MissingRoots("r is not 1 modulo k"));
    }
    let minus_d = -BigInt::from(d);
    if jacobi(&minus_d, r)? != 1 {
        return Err(FamilyError::MissingRoots("-D is not a square modulo r"));
    }
    let z = primitive_root_of_unity(k, r, z_seed);
    let s = sqrt_mod(&minus_d, r).expect("residue");
    let t = (&z + 1u32).mod_floor(r);
    let s_inv = s.modinv(r).expect("nonzero mod prime");
    let y = ((&t - 2u32) * s_inv).mod_floor(r);
    let db = BigInt::from(d);
    for (dt, dy) in [(0u32, 0u32), (1, 0), (0, 1), (1, 1)] {
        let t = &t + r * dt;
        let y = &y + r * dy;
        let four_p = &t * &t + &db * &y * &y;
        if !(&four_p % 4u32).is_zero() {
            continue;
        }
        let p = four_p >> 2;
        if is_prime(&p) {
            debug_assert!(((&p + 1u32 - &t) % r).is_zero());
            return Ok(Some(CocksPinchParams { p, r: r.clone(), t, y }));
        }
    }
    Ok(None)
}

impl CocksPinchParams {
    /// `log p / log r`.
    pub fn rho(&self) -> f64 {
        let ln = |n: &BigInt| n.to_f64().map_or(f64::NAN, f64::ln);
        ln(&self.p) / ln(&self.r)
    }

    pub fn satisfies_cm(&self, d: u64) -> bool {
        let lhs: BigInt = &self.p * 4u32;
        lhs == &self.t * &self.t + BigInt::from(d) * &self.y * &self.y && !self.t.is_negative()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::cyclotomic;

    fn phi_k_mod(k: u64, p: &BigInt, r: &BigInt) -> BigInt {
        let phi = cyclotomic(k).unwrap();
        let v = phi.evaluate(&p.mod_floor(r));
        assert!(v.is_integer());
        v.to_integer().mod_floor(r)
    }

    #[test]
    fn small_instance_is_checkable_by_hand() {
        let r = BigInt::from(13);
        // oracle: all primitive 4th roots mod 13 and both square roots of -3
        let roots: Vec<i64> = (1..13).filter(|z| z * z % 13 == 12).collect();
        assert_eq!(roots, vec![5, 8]);
        let sqrts: Vec<i64> = (1..13).filter(|s| (s * s + 3) % 13 == 0).collect();
        assert_eq!(sqrts, vec![6, 7]);
        let out = cocks_pinch(3, 4, &r, 0).unwrap().unwrap();
        // z = 2^3 = 8, t = 9, y = 7/6 = 12 mod 13; lift t + 13 = 22 gives p = 229
        assert_eq!(out.t, BigInt::from(22));
        assert_eq!(out.y, BigInt::from(12));
        assert_eq!(out.p, BigInt::from(229));
        assert!(out.satisfies_cm(3));
        assert!(((&out.p + 1u32 - &out.t) % &r).is_zero());
        assert!(phi_k_mod(4, &out.p, &r).is_zero());
    }

    #[test]
    fn rejects_unsuitable_r() {
        assert!(matches!(cocks_pinch(3, 4, &BigInt::from(15), 0), Err(FamilyError::NotPrime(_))));
        assert!(matches!(cocks_pinch(3, 4, &BigInt::from(11), 0), Err(FamilyError::MissingRoots(_))));
        // 17 ≡ 1 mod 4 but -3 is a non-residue mod 17
        assert!(matches!(cocks_pinch(3, 4, &BigInt::from(17), 0), Err(FamilyError::MissingRoots(_))));
    }

    #[test]
    fn rho_tends_to_two() {
        let k = 6u64;
        let mut rhos = Vec::new();
        // 2^80 + 3 ≡ 1 (mod 6)
        let mut r = (BigInt::one() << 80u32) + 3u32 - k;
        while rhos.len() < 20 {
            r += k;
            if !is_prime(&r) || jacobi(&BigInt::from(-3), &r).unwrap() != 1 {
                continue;
            }
            for seed in 0..2 {
                if let Some(out) = cocks_pinch(3, k, &r, seed).unwrap() {
                    assert!(out.satisfies_cm(3));
                    assert!(phi_k_mod(k, &out.p, &r).is_zero());
                    rhos.push(out.rho());
                }
            }
        }
        let mean = rhos.iter().sum::<f64>() / rhos.len() as f64;
        assert!((mean - 2.0).abs() < 0.05, "mean rho {mean}");
    }

    #[test]
    fn totients() {
        assert_eq!(totient(12), 4);
        assert_eq!(totient(1), 1);
        assert_eq!(totient(48), 16);
    }
}
