//! Arithmetic over a large prime field: polynomial root finding and
//! Jacobian-coordinate elliptic curve scalar multiplication.

use num_bigint::{BigInt, RandBigInt};
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};

use crate::numtheory::{jacobi, sqrt_mod};

/// Polynomials over `F_p`, coefficients low-to-high in `[0, p)`, no
/// trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
struct FpPoly(Vec<BigInt>);

struct PolyRing<'a> {
    p: &'a BigInt,
}

impl PolyRing<'_> {
    fn norm(&self, mut c: Vec<BigInt>) -> FpPoly {
        for v in c.iter_mut() {
            *v = v.mod_floor(self.p);
        }
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        FpPoly(c)
    }

    fn degree(f: &FpPoly) -> Option<usize> {
        f.0.len().checked_sub(1)
    }

    fn mul(&self, a: &FpPoly, b: &FpPoly) -> FpPoly {
        if a.0.is_empty() || b.0.is_empty() {
            return FpPoly(vec![]);
        }
        let mut out = vec![BigInt::zero(); a.0.len() + b.0.len() - 1];
        for (i, x) in a.0.iter().enumerate() {
            for (j, y) in b.0.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        self.norm(out)
    }

    fn div_rem(&self, a: &FpPoly, b: &FpPoly) -> (FpPoly, FpPoly) {
        let db = Self::degree(b).expect("nonzero divisor");
        let inv = b.0[db].modinv(self.p).expect("prime modulus");
        let mut rem = a.0.clone();
        if rem.len() <= db {
            return (FpPoly(vec![]), a.clone());
        }
        let mut quot = vec![BigInt::zero(); rem.len() - db];
        for i in (db..rem.len()).rev() {
            let c = (&rem[i] * &inv).mod_floor(self.p);
            if c.is_zero() {
                continue;
            }
            for (j, bj) in b.0.iter().enumerate() {
                rem[i - db + j] = (&rem[i - db + j] - &c * bj).mod_floor(self.p);
            }
            quot[i - db] = c;
        }
        rem.truncate(db);
        (self.norm(quot), self.norm(rem))
    }

    fn rem(&self, a: &FpPoly, b: &FpPoly) -> FpPoly {
        self.div_rem(a, b).1
    }

    fn monic(&self, f: &FpPoly) -> FpPoly {
        let inv = f.0.last().expect("nonzero").modinv(self.p).expect("prime modulus");
        self.norm(f.0.iter().map(|c| c * &inv).collect())
    }

    fn gcd(&self, a: &FpPoly, b: &FpPoly) -> FpPoly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.0.is_empty() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        if a.0.is_empty() {
            a
        } else {
            self.monic(&a)
        }
    }

    /// `base^e mod m`.
    fn pow_mod(&self, base: &FpPoly, e: &BigInt, m: &FpPoly) -> FpPoly {
        let mut acc = self.norm(vec![BigInt::one()]);
        let base = self.rem(base, m);
        for i in (0..e.bits()).rev() {
            acc = self.rem(&self.mul(&acc, &acc), m);
            if e.bit(i) {
                acc = self.rem(&self.mul(&acc, &base), m);
            }
        }
        acc
    }

    /// Splits a monic product of distinct linear factors into its roots.
    fn split(&self, f: &FpPoly, rng: &mut ChaCha20Rng, roots: &mut Vec<BigInt>) {
        match Self::degree(f) {
            None | Some(0) => {}
            Some(1) => roots.push((-&f.0[0]).mod_floor(self.p)),
            Some(_) => {
                let half = (self.p - 1u32) >> 1;
                loop {
                    let delta = rng.gen_bigint_range(&BigInt::zero(), self.p);
                    let w = self.pow_mod(&self.norm(vec![delta, BigInt::one()]), &half, f);
                    let mut w_minus_one = w.0.clone();
                    if w_minus_one.is_empty() {
                        w_minus_one.push(BigInt::zero());
                    }
                    w_minus_one[0] -= 1;
                    let g = self.gcd(f, &self.norm(w_minus_one));
                    let dg = Self::degree(&g).unwrap_or(0);
                    if dg > 0 && Some(dg) < Self::degree(f) {
                        let (other, _) = self.div_rem(f, &g);
                        self.split(&g, rng, roots);
                        self.split(&self.monic(&other), rng, roots);
                        return;
                    }
                }
            }
        }
    }
}

/// Distinct roots in `F_p` (ascending) of an integer polynomial given
/// low-to-high, for an odd prime `p`.
pub fn roots_mod_p(coeffs: &[BigInt], p: &BigInt) -> Vec<BigInt> {
    let ring = PolyRing { p };
    let f = ring.norm(coeffs.to_vec());
    if PolyRing::degree(&f).unwrap_or(0) == 0 {
        return Vec::new();
    }
    let f = ring.monic(&f);
    let x = ring.norm(vec![BigInt::zero(), BigInt::one()]);
    let xp = ring.pow_mod(&x, p, &f);
    let mut xp_minus_x = xp.0.clone();
    xp_minus_x.resize(xp_minus_x.len().max(2), BigInt::zero());
    xp_minus_x[1] -= 1;
    let g = ring.gcd(&f, &ring.norm(xp_minus_x));
    let mut rng = ChaCha20Rng::seed_from_u64(0x726f6f7473);
    let mut roots = Vec::new();
    ring.split(&g, &mut rng, &mut roots);
    roots.sort();
    roots
}

/// Short Weierstrass curve `Y^2 = X^3 + a X + b` over `F_p`.
#[derive(Debug, Clone)]
pub struct CurveField<'a> {
    pub p: &'a BigInt,
    pub a: &'a BigInt,
    pub b: &'a BigInt,
}

/// Jacobian point `(X : Y : Z)`; `Z = 0` is the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Jacobian {
    pub x: BigInt,
    pub y: BigInt,
    pub z: BigInt,
}

impl Jacobian {
    pub fn identity() -> Self {
        Jacobian { x: BigInt::one(), y: BigInt::one(), z: BigInt::zero() }
    }

    pub fn affine(x: BigInt, y: BigInt) -> Self {
        Jacobian { x, y, z: BigInt::one() }
    }

    pub fn is_identity(&self) -> bool {
        self.z.is_zero()
    }
}

impl CurveField<'_> {
    fn m(&self, v: BigInt) -> BigInt {
        v.mod_floor(self.p)
    }

    pub fn discriminant_nonzero(&self) -> bool {
        let a3 = self.a.modpow(&BigInt::from(3), self.p);
        !self.m(a3 * 4 + self.b * self.b * 27).is_zero()
    }

    pub fn rhs(&self, x: &BigInt) -> BigInt {
        self.m(x * x * x + self.a * x + self.b)
    }

    pub fn double(&self, pt: &Jacobian) -> Jacobian {
        if pt.is_identity() || pt.y.is_zero() {
            return Jacobian::identity();
        }
        let y2 = self.m(&pt.y * &pt.y);
        let s = self.m(&pt.x * &y2 * 4);
        let z2 = self.m(&pt.z * &pt.z);
        let mm = self.m(&pt.x * &pt.x * 3 + self.a * &z2 * &z2);
        let x3 = self.m(&mm * &mm - &s * 2);
        let y3 = self.m(&mm * (&s - &x3) - &y2 * &y2 * 8);
        let z3 = self.m(&pt.y * &pt.z * 2);
        Jacobian { x: x3, y: y3, z: z3 }
    }

    pub fn add(&self, a: &Jacobian, b: &Jacobian) -> Jacobian {
        if a.is_identity() {
            return b.clone();
        }
        if b.is_identity() {
            return a.clone();
        }
        let z1s = self.m(&a.z * &a.z);
        let z2s = self.m(&b.z * &b.z);
        let u1 = self.m(&a.x * &z2s);
        let u2 = self.m(&b.x * &z1s);
        let s1 = self.m(&a.y * &z2s * &b.z);
        let s2 = self.m(&b.y * &z1s * &a.z);
        if u1 == u2 {
            return if s1 == s2 { self.double(a) } else { Jacobian::identity() };
        }
        let h = self.m(&u2 - &u1);
        let r = self.m(&s2 - &s1);
        let h2 = self.m(&h * &h);
        let h3 = self.m(&h2 * &h);
        let u1h2 = self.m(&u1 * &h2);
        let x3 = self.m(&r * &r - &h3 - &u1h2 * 2);
        let y3 = self.m(&r * (&u1h2 - &x3) - &s1 * &h3);
        let z3 = self.m(&h * &a.z * &b.z);
        Jacobian { x: x3, y: y3, z: z3 }
    }

    /// `n P` for `n ≥ 0` by double-and-add.
    pub fn mul(&self, pt: &Jacobian, n: &BigInt) -> Jacobian {
        let mut acc = Jacobian::identity();
        for i in (0..n.bits()).rev() {
            acc = self.double(&acc);
            if n.bit(i) {
                acc = self.add(&acc, pt);
            }
        }
        acc
    }

    /// Deterministic affine points: `x = SHA-256(label ‖ counter ‖ block)`
    /// expanded past `p` and reduced, for counters 0, 1, 2, … whose
    /// right-hand side is a square.
    pub fn sample_points(&self, count: usize) -> Vec<Jacobian> {
        let mut out = Vec::with_capacity(count);
        let need = self.p.bits() + 64;
        let mut counter = 0u64;
        while out.len() < count && counter < 64 * count as u64 + 256 {
            let mut bytes = Vec::new();
            let mut block = 0u32;
            while (bytes.len() as u64) * 8 < need {
                let mut h = Sha256::new();
                h.update(b"bwdisc/point");
                h.update(counter.to_le_bytes());
                h.update(block.to_le_bytes());
                bytes.extend_from_slice(&h.finalize());
                block += 1;
            }
            counter += 1;
            let x = BigInt::from_bytes_be(num_bigint::Sign::Plus, &bytes).mod_floor(self.p);
            let rhs = self.rhs(&x);
            if rhs.is_zero() {
                out.push(Jacobian::affine(x, BigInt::zero()));
                continue;
            }
            if jacobi(&rhs, self.p).unwrap_or(0) != 1 {
                continue;
            }
            let y = sqrt_mod(&rhs, self.p).expect("quadratic residue");
            out.push(Jacobian::affine(x, y));
        }
        out
    }
}
