//! Factorization over the rationals: squarefree decomposition, factoring
//! modulo a small prime, multifactor Hensel lifting and Zassenhaus
//! recombination with degree-set pruning.

use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::modp::{distinct_degree, equal_degree, ModPoly};
use super::{PolyError, RatPoly, Rational};

/// `unit * ∏ factor^multiplicity`, factors monic irreducible over Q.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyFactorization {
    pub unit: Rational,
    pub factors: Vec<(RatPoly, u32)>,
}

impl PolyFactorization {
    /// Multiplies the factorization back out.
    pub fn expand(&self) -> RatPoly {
        let mut acc = RatPoly::constant(self.unit.clone());
        for (f, m) in &self.factors {
            for _ in 0..*m {
                acc = &acc * f;
            }
        }
        acc
    }

    /// Degree of the largest irreducible factor (0 for constants).
    pub fn max_factor_degree(&self) -> usize {
        self.factors
            .iter()
            .filter_map(|(f, _)| f.degree())
            .max()
            .unwrap_or(0)
    }
}

/// Complete factorization of a nonzero polynomial into monic irreducibles.
///
/// Factors are ordered by degree, then by coefficient list low-to-high.
pub fn factorize(a: &RatPoly) -> Result<PolyFactorization, PolyError> {
    let unit = a.leading_coeff().ok_or(PolyError::ZeroPolynomial)?.clone();
    let (_, mut prim) = a.primitive_part()?;
    let mut factors: Vec<(RatPoly, u32)> = Vec::new();

    let zeros = prim.iter().take_while(|c| c.is_zero()).count();
    if zeros > 0 {
        prim.drain(..zeros);
        factors.push((RatPoly::x(), zeros as u32));
    }

    for (part, mult) in squarefree_decomposition(&prim) {
        for g in zassenhaus(&part) {
            let monic = RatPoly::from_bigints(&g).monic()?;
            factors.push((monic, mult));
        }
    }
    factors.sort_by(|(f, _), (g, _)| compare_polys(f, g));
    Ok(PolyFactorization { unit, factors })
}

fn compare_polys(f: &RatPoly, g: &RatPoly) -> Ordering {
    f.degree()
        .cmp(&g.degree())
        .then_with(|| f.coeffs().cmp(g.coeffs()))
}

const SMALL_PRIMES_FROM: u64 = 1009;
const PRIME_TRIALS: usize = 6;

fn next_prime(mut n: u64) -> u64 {
    loop {
        n += 1;
        if n > 1 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0) {
            return n;
        }
    }
}

fn reduce_mod(f: &[BigInt], p: u64) -> ModPoly {
    let pb = BigInt::from(p);
    ModPoly::new(
        p,
        f.iter()
            .map(|c| c.mod_floor(&pb).to_u64().expect("reduced"))
            .collect(),
    )
}

/// Squarefree parts with multiplicities. Uses a modular certificate for the
/// common squarefree case and Yun's algorithm over Q otherwise.
fn squarefree_decomposition(f: &[BigInt]) -> Vec<(Vec<BigInt>, u32)> {
    let n = f.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let lc = &f[n];
    let mut p = SMALL_PRIMES_FROM;
    for _ in 0..8 {
        p = next_prime(p);
        if (lc % p).is_zero() {
            continue;
        }
        let fp = reduce_mod(f, p);
        if fp.gcd(&fp.derivative()).degree() == 0 {
            return vec![(f.to_vec(), 1)];
        }
    }
    let a = RatPoly::from_bigints(f);
    let mut out = Vec::new();
    let b = a.gcd(&a.derivative());
    let mut c = a.div_rem(&b).expect("nonzero").0;
    let mut d = &a.derivative().div_rem(&b).expect("nonzero").0 - &c.derivative();
    let mut i = 1;
    while c.degree().unwrap_or(0) > 0 {
        let ai = c.gcd(&d);
        c = c.div_rem(&ai).expect("nonzero").0;
        d = &d.div_rem(&ai).expect("nonzero").0 - &c.derivative();
        if ai.degree().unwrap_or(0) > 0 {
            out.push((ai.primitive_part().expect("nonzero").1, i));
        }
        i += 1;
    }
    out
}

/// Achievable degrees of products of subsets of the given factor degrees.
fn subset_degrees(degrees: &[usize], n: usize) -> Vec<bool> {
    let mut reach = vec![false; n + 1];
    reach[0] = true;
    for &d in degrees {
        for s in (d..=n).rev() {
            if reach[s - d] {
                reach[s] = true;
            }
        }
    }
    reach
}

/// Irreducible primitive factors of a primitive squarefree integer polynomial.
fn zassenhaus(f: &[BigInt]) -> Vec<Vec<BigInt>> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.to_vec()];
    }
    let lc = f[n].clone();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_fac7);

    // factor modulo several good primes; keep the one with fewest factors
    let mut allowed = vec![true; n + 1];
    let mut best: Option<(u64, Vec<ModPoly>)> = None;
    let mut p = SMALL_PRIMES_FROM;
    let mut tried = 0;
    while tried < PRIME_TRIALS {
        p = next_prime(p);
        if (&lc % p).is_zero() {
            continue;
        }
        let fp = reduce_mod(f, p).monic();
        if fp.gcd(&fp.derivative()).degree() > 0 {
            continue;
        }
        tried += 1;
        let ddf = distinct_degree(&fp);
        let degrees: Vec<usize> = ddf
            .iter()
            .flat_map(|(d, g)| std::iter::repeat_n(*d, g.degree() / d))
            .collect();
        let reach = subset_degrees(&degrees, n);
        for (a, r) in allowed.iter_mut().zip(&reach) {
            *a &= *r;
        }
        if (1..n).all(|d| !allowed[d]) {
            return vec![f.to_vec()];
        }
        if best.as_ref().is_none_or(|(_, fs)| degrees.len() < fs.len()) {
            let mut parts = Vec::with_capacity(degrees.len());
            for (d, g) in &ddf {
                parts.extend(equal_degree(g, *d, &mut rng));
            }
            best = Some((p, parts));
        }
    }
    let (p, modular) = best.expect("at least one good prime");
    debug_assert_eq!(
        modular.iter().map(ModPoly::degree).sum::<usize>(),
        n,
        "modular factors cover the degree"
    );
    if modular.len() == 1 {
        return vec![f.to_vec()];
    }

    // lift until p^a exceeds twice a coefficient bound on lc * (any factor)
    let norm2 = f.iter().map(|c| c * c).fold(BigInt::zero(), |a, b| a + b);
    let bound = (BigInt::one() << (n + 1)) * (norm2.sqrt() + 1u32) * lc.abs();
    let pb = BigInt::from(p);
    let mut exponent = 1u32;
    let mut modulus = pb.clone();
    while modulus <= bound {
        modulus *= &pb;
        exponent += 1;
    }
    let lifted = multifactor_lift(f, &modular, p, exponent);
    recombine(f, lifted, &modulus, &allowed)
}

// ---- arithmetic on integer coefficient vectors modulo m ----

fn zred(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let mut v: Vec<BigInt> = a.iter().map(|c| c.mod_floor(m)).collect();
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

fn zmul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    zred(&out, m)
}

fn zadd(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    let v: Vec<BigInt> = (0..n)
        .map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z))
        .collect();
    zred(&v, m)
}

fn zsub(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let neg: Vec<BigInt> = b.iter().map(|c| -c).collect();
    zadd(a, &neg, m)
}

/// Division by a monic polynomial modulo m.
fn zdivrem_monic(a: &[BigInt], h: &[BigInt], m: &BigInt) -> (Vec<BigInt>, Vec<BigInt>) {
    let hl = h.len();
    debug_assert!(h[hl - 1].is_one());
    let mut rem = zred(a, m);
    if rem.len() < hl {
        return (Vec::new(), rem);
    }
    let mut quot = vec![BigInt::zero(); rem.len() - hl + 1];
    for i in (0..quot.len()).rev() {
        let q = rem[i + hl - 1].mod_floor(m);
        if !q.is_zero() {
            for (j, hc) in h.iter().enumerate() {
                rem[i + j] -= &q * hc;
            }
        }
        quot[i] = q;
    }
    rem.truncate(hl - 1);
    (zred(&quot, m), zred(&rem, m))
}

fn from_modp(g: &ModPoly) -> Vec<BigInt> {
    g.c.iter().map(|&c| BigInt::from(c)).collect()
}

/// One quadratic Hensel step: from `f ≡ g h (mod m)` and `s g + t h ≡ 1 (mod m)`
/// to the same relations modulo `m2` (which must divide `m^2`). `h` stays monic.
#[allow(clippy::too_many_arguments)]
fn hensel_step(
    f: &[BigInt],
    g: &[BigInt],
    h: &[BigInt],
    s: &[BigInt],
    t: &[BigInt],
    m2: &BigInt,
) -> (Vec<BigInt>, Vec<BigInt>, Vec<BigInt>, Vec<BigInt>) {
    let e = zsub(f, &zmul(g, h, m2), m2);
    let (q, r) = zdivrem_monic(&zmul(s, &e, m2), h, m2);
    let g2 = zadd(g, &zadd(&zmul(t, &e, m2), &zmul(&q, g, m2), m2), m2);
    let h2 = zadd(h, &r, m2);
    let one = [BigInt::one()];
    let b = zsub(&zadd(&zmul(s, &g2, m2), &zmul(t, &h2, m2), m2), &one, m2);
    let (c, d) = zdivrem_monic(&zmul(s, &b, m2), &h2, m2);
    let s2 = zsub(s, &d, m2);
    let t2 = zsub(&zsub(t, &zmul(t, &b, m2), m2), &zmul(&c, &g2, m2), m2);
    (g2, h2, s2, t2)
}

/// Lifts monic modular factors of `f` (leading coefficient `lc`) to monic
/// factors modulo `p^exponent`; `f ≡ lc ∏ u_i`.
fn multifactor_lift(f: &[BigInt], factors: &[ModPoly], p: u64, exponent: u32) -> Vec<Vec<BigInt>> {
    let target = BigInt::from(p).pow(exponent);
    lift_tree(&zred(f, &target), factors, p, exponent)
}

fn lift_tree(f: &[BigInt], factors: &[ModPoly], p: u64, exponent: u32) -> Vec<Vec<BigInt>> {
    let target = BigInt::from(p).pow(exponent);
    if factors.len() == 1 {
        // f ≡ lc * u: the lifted monic factor is f / lc
        let lc = f.last().expect("nonzero").clone();
        let inv = lc.modinv(&target).expect("lc is a unit mod p");
        return vec![zred(&f.iter().map(|c| c * &inv).collect::<Vec<_>>(), &target)];
    }
    let mid = factors.len() / 2;
    let (left, right) = factors.split_at(mid);
    let lc_mod = (f.last().expect("nonzero") % p as i64 + p as i64) % p as i64;
    let lc_mod = lc_mod.to_u64().expect("small");
    let g0 = left
        .iter()
        .fold(ModPoly::one(p), |acc, u| acc.mul(u))
        .scale(lc_mod);
    let h0 = right.iter().fold(ModPoly::one(p), |acc, u| acc.mul(u));
    let (one, s0, t0) = ModPoly::ext_gcd(&g0, &h0);
    debug_assert_eq!(one.degree(), 0);

    let (mut g, mut h, mut s, mut t) = (from_modp(&g0), from_modp(&h0), from_modp(&s0), from_modp(&t0));
    let mut k = 1u32;
    while k < exponent {
        let k2 = (2 * k).min(exponent);
        let m2 = BigInt::from(p).pow(k2);
        let fk = zred(f, &m2);
        (g, h, s, t) = hensel_step(&fk, &g, &h, &s, &t, &m2);
        k = k2;
    }
    let mut out = lift_tree(&g, left, p, exponent);
    out.extend(lift_tree(&h, right, p, exponent));
    out
}

fn symmetric(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let half = m >> 1;
    a.iter()
        .map(|c| {
            let c = c.mod_floor(m);
            if c > half {
                c - m
            } else {
                c
            }
        })
        .collect()
}

fn primitive(a: Vec<BigInt>) -> Vec<BigInt> {
    let mut g = a.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if a.last().is_some_and(|c| c.sign() == Sign::Minus) {
        g = -g;
    }
    a.into_iter().map(|c| c / &g).collect()
}

/// Exact division over Z; `None` unless `b` divides `a`.
fn exact_div(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    let bl = b.len();
    if a.len() < bl {
        return None;
    }
    let lc = &b[bl - 1];
    let mut rem = a.to_vec();
    let mut quot = vec![BigInt::zero(); a.len() - bl + 1];
    for i in (0..quot.len()).rev() {
        let (q, r) = rem[i + bl - 1].div_rem(lc);
        if !r.is_zero() {
            return None;
        }
        if !q.is_zero() {
            for (j, bc) in b.iter().enumerate() {
                rem[i + j] -= &q * bc;
            }
        }
        quot[i] = q;
    }
    rem.iter().all(Zero::is_zero).then_some(quot)
}

/// Zassenhaus recombination of lifted monic factors.
fn recombine(f: &[BigInt], mut lifted: Vec<Vec<BigInt>>, m: &BigInt, allowed: &[bool]) -> Vec<Vec<BigInt>> {
    let mut f = f.to_vec();
    let mut found = Vec::new();
    let mut size = 1;
    while 2 * size <= lifted.len() {
        let mut hit = None;
        for subset in Combinations::new(lifted.len(), size) {
            // degree must be achievable modulo every prime tried
            let deg: usize = subset.iter().map(|&i| lifted[i].len() - 1).sum();
            if !allowed[deg] {
                continue;
            }
            let lc = f.last().expect("nonzero").clone();
            // constant-term test before the full product
            let c0 = subset
                .iter()
                .fold(lc.clone(), |acc, &i| (acc * &lifted[i][0]).mod_floor(m));
            let c0 = symmetric(&[c0], m).remove(0);
            if c0.is_zero() {
                if !f[0].is_zero() {
                    continue;
                }
            } else if !(&lc * &f[0]).is_multiple_of(&c0) {
                continue;
            }
            let g = subset
                .iter()
                .fold(vec![lc.clone()], |acc, &i| zmul(&acc, &lifted[i], m));
            let g = primitive(symmetric(&g, m));
            if let Some(q) = exact_div(&f, &g) {
                hit = Some((subset, g, q));
                break;
            }
        }
        match hit {
            Some((subset, g, q)) => {
                found.push(g);
                f = primitive(q);
                for &i in subset.iter().rev() {
                    lifted.remove(i);
                }
            }
            None => size += 1,
        }
    }
    found.push(f);
    found
}

/// Lexicographic k-subsets of `0..n`.
struct Combinations {
    n: usize,
    idx: Vec<usize>,
    first: bool,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Combinations { n, idx: (0..k).collect(), first: true }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let k = self.idx.len();
        if k > self.n {
            return None;
        }
        if self.first {
            self.first = false;
            return Some(self.idx.clone());
        }
        let mut i = k;
        while i > 0 {
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                return Some(self.idx.clone());
            }
        }
        None
    }
}
