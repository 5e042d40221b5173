//! Instantiating families at integer points: size filters, cofactor
//! stripping of `r`, choice of the divisor `n` of `y(x)` and the
//! discriminant-enlarging step `(p, r, t, y, D, k) → (p, r, t, y/n, D n^2, k)`.

mod record;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::families::{integral_residues, Family};
use crate::numtheory::{factor_partial, is_prime, small_primes, NumError, DEFAULT_RHO_BUDGET, DEFAULT_SMOOTH_BOUND};
use crate::polyring::{cyclotomic, RatPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("invalid search configuration: {0}")]
    BadConfig(&'static str),
    #[error("{n} does not divide y = {y}")]
    NotDivisor { n: BigInt, y: BigInt },
    #[error("no prime divisor of y in [{0}, {1}]")]
    NoCandidate(u64, u64),
    #[error("y is zero")]
    ZeroY,
    #[error("empty range: from {0} > to {1}")]
    EmptyRange(BigInt, BigInt),
    #[error("malformed parameter record: {0}")]
    Parse(String),
    #[error("parameter record violates an invariant: {0}")]
    Invalid(&'static str),
    #[error(transparent)]
    Num(#[from] NumError),
}

/// Filters applied to instantiated families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    /// Lower bound on `log2 r` after cofactor stripping.
    pub min_r_bits: u64,
    /// Lower bound on `k log2 p`.
    pub min_kp_bits: u64,
    /// Prime factors of `r(x)` up to this bound are stripped off; their
    /// product must not exceed it either.
    pub max_cofactor_r: u64,
    pub n_min: u64,
    pub n_max: u64,
    pub smooth_bound: u64,
    pub rho_budget: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            min_r_bits: 160,
            min_kp_bits: 1024,
            max_cofactor_r: 10_000,
            n_min: 10_000,
            n_max: 1_000_000,
            smooth_bound: DEFAULT_SMOOTH_BOUND,
            rho_budget: DEFAULT_RHO_BUDGET,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<(), SearchError> {
        if self.min_r_bits == 0 || self.min_kp_bits == 0 || self.max_cofactor_r == 0 {
            return Err(SearchError::BadConfig("size and cofactor bounds must be positive"));
        }
        if self.n_min == 0 || self.n_min > self.n_max {
            return Err(SearchError::BadConfig("need 0 < n_min <= n_max"));
        }
        if self.smooth_bound == 0 {
            return Err(SearchError::BadConfig("smooth bound must be positive"));
        }
        Ok(())
    }

    /// Same filters with the size bounds set to their minimum (1 bit), so
    /// only primality, integrality and near-primality decide.
    pub fn without_size_bounds(self) -> Self {
        SearchConfig { min_r_bits: 1, min_kp_bits: 1, ..self }
    }
}

/// Why an instantiation was rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RejectReason {
    NonIntegral,
    PComposite,
    RNotNearPrime,
    TooSmall,
    TZero,
    /// The embedding degree of `r` is not `k` (only possible for tiny `r`).
    WrongEmbeddingDegree,
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RejectReason::NonIntegral => "non-integral",
            RejectReason::PComposite => "p-composite",
            RejectReason::RNotNearPrime => "r-not-near-prime",
            RejectReason::TooSmall => "too-small",
            RejectReason::TZero => "t-zero",
            RejectReason::WrongEmbeddingDegree => "wrong-embedding-degree",
        })
    }
}

/// One pairing-friendly parameter set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveParams {
    pub p: BigInt,
    /// Large prime factor of `r(x)`.
    pub r: BigInt,
    /// `r(x) / r`, made of primes up to the configured bound.
    pub cofactor_r: BigInt,
    pub t: BigInt,
    pub y: BigInt,
    /// `D n^2`.
    pub d_eff: BigInt,
    pub k: u64,
    /// Product of the divisors applied so far (1 if unimproved).
    pub n: BigInt,
    pub x_seed: BigInt,
}

fn divisors(k: u64) -> Vec<u64> {
    (1..=k).filter(|j| k % j == 0).collect()
}

/// `r ∤ p^j - 1` for every proper divisor `j` of `k`, and `r | Φ_k(p)`.
fn embedding_degree_is(k: u64, p: &BigInt, r: &BigInt, phi_k: &RatPoly) -> bool {
    let p_mod = p.mod_floor(r);
    let phi_at_p = phi_k
        .coeffs()
        .iter()
        .rev()
        .fold(BigInt::zero(), |acc, c| (acc * &p_mod + c.to_integer()).mod_floor(r));
    if !phi_at_p.is_zero() {
        return false;
    }
    divisors(k)
        .into_iter()
        .filter(|&j| j < k)
        .all(|j| !p_mod.modpow(&BigInt::from(j), r).is_one())
}

impl CurveParams {
    /// `D` in the CM equation before enlargement: `D_eff / n^2`.
    pub fn base_d(&self) -> BigInt {
        &self.d_eff / (&self.n * &self.n)
    }

    /// Curve order cofactor `h = (p + 1 - t) / r`.
    pub fn cofactor_h(&self) -> BigInt {
        (&self.p + 1u32 - &self.t) / &self.r
    }

    /// `log p / log r`.
    pub fn rho(&self) -> f64 {
        let ln = |n: &BigInt| {
            let bits = n.bits();
            let shift = bits.saturating_sub(53);
            (n >> shift).to_f64().unwrap_or(f64::NAN).ln() + shift as f64 * std::f64::consts::LN_2
        };
        ln(&self.p) / ln(&self.r)
    }

    /// Checks every invariant: the CM identity, `r | p + 1 - t`, embedding
    /// degree exactly `k`, `t ≠ 0`, `gcd(t, p) = 1` and primality of `p`, `r`.
    pub fn validate(&self) -> Result<(), SearchError> {
        let bad = SearchError::Invalid;
        if self.k == 0 || !self.n.is_positive() || !self.cofactor_r.is_positive() || !self.d_eff.is_positive() {
            return Err(bad("k, n, cofactor_r and D_eff must be positive"));
        }
        if (&self.p * 4u32) != &self.t * &self.t + &self.d_eff * &self.y * &self.y {
            return Err(bad("4p != t^2 + D_eff y^2"));
        }
        if !self.r.is_positive() || !((&self.p + 1u32 - &self.t) % &self.r).is_zero() {
            return Err(bad("r does not divide p + 1 - t"));
        }
        if self.t.is_zero() || !self.t.gcd(&self.p).is_one() {
            return Err(bad("t must be nonzero and coprime to p"));
        }
        if !(&self.d_eff % (&self.n * &self.n)).is_zero() {
            return Err(bad("n^2 does not divide D_eff"));
        }
        if !is_prime(&self.p) || !is_prime(&self.r) {
            return Err(bad("p and r must be prime"));
        }
        let phi = cyclotomic(self.k).map_err(|_| bad("k must be positive"))?;
        if !embedding_degree_is(self.k, &self.p, &self.r, &phi) {
            return Err(bad("embedding degree of r is not k"));
        }
        Ok(())
    }
}

/// Integer-coefficient numerator and denominator of a family polynomial.
#[derive(Debug, Clone)]
struct ScaledPoly {
    num: Vec<BigInt>,
    den: BigInt,
}

impl ScaledPoly {
    fn new(f: &RatPoly) -> Self {
        let den = f.denominator_lcm();
        let num = f.coeffs().iter().map(|c| (c * &den).to_integer()).collect();
        ScaledPoly { num, den }
    }

    /// `f(x)` when it is an integer.
    fn eval(&self, x: &BigInt) -> Option<BigInt> {
        let v = self.num.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c);
        let (q, rem) = v.div_rem(&self.den);
        rem.is_zero().then_some(q)
    }

    /// Roots modulo a small prime `q` of the numerator.
    fn numerator_roots(&self, q: u64) -> Vec<u64> {
        let qb = BigInt::from(q);
        let coeffs: Vec<u64> = self.num.iter().map(|c| c.mod_floor(&qb).to_u64().expect("reduced")).collect();
        (0..q)
            .filter(|&x| coeffs.iter().rev().fold(0u64, |acc, &c| (acc * x + c) % q) == 0)
            .collect()
    }
}

/// Precomputed data for repeatedly instantiating one family.
#[derive(Debug, Clone)]
pub struct Instantiator {
    d: u64,
    k: u64,
    p: ScaledPoly,
    r: ScaledPoly,
    t: ScaledPoly,
    y: ScaledPoly,
    phi_k: RatPoly,
    cofactor_primes: Vec<u64>,
    cfg: SearchConfig,
    /// `(M, residues)`: `x` gives integral values iff `x mod M` is listed.
    classes: (BigInt, Vec<BigInt>),
    /// For sieve primes `q` not dividing the denominator of `p`: roots of
    /// the numerator of `p` modulo `q`.
    sieve: Vec<(u64, Vec<u64>)>,
}

const SIEVE_BOUND: u64 = 1 << 12;

impl Instantiator {
    pub fn new(fam: &Family, cfg: &SearchConfig) -> Result<Self, SearchError> {
        cfg.validate()?;
        let p = ScaledPoly::new(&fam.p);
        let residues = integral_residues(&[fam.p.clone(), fam.r.clone(), fam.t.clone(), fam.y.clone()]);
        let modulus = residues.first().map_or_else(BigInt::one, |(m, _, _)| m.clone());
        let classes = (modulus, residues.into_iter().map(|(_, c, _)| c).collect());
        let sieve = small_primes(SIEVE_BOUND)
            .into_iter()
            .filter(|q| !(&p.den % q).is_zero())
            .map(|q| (q, p.numerator_roots(q)))
            .collect();
        Ok(Instantiator {
            d: fam.d,
            k: fam.k,
            r: ScaledPoly::new(&fam.r),
            t: ScaledPoly::new(&fam.t),
            y: ScaledPoly::new(&fam.y),
            p,
            phi_k: cyclotomic(fam.k).expect("positive k"),
            cofactor_primes: small_primes(cfg.max_cofactor_r),
            cfg: cfg.clone(),
            classes,
            sieve,
        })
    }

    /// `(stripped cofactor, remaining part)` of `|r(x)|`.
    fn strip(&self, r: &BigInt) -> (BigInt, BigInt) {
        let mut rest = r.clone();
        let mut cofactor = BigInt::one();
        for &q in &self.cofactor_primes {
            loop {
                let (quot, rem) = rest.div_rem(&BigInt::from(q));
                if !rem.is_zero() {
                    break;
                }
                rest = quot;
                cofactor *= q;
            }
        }
        (cofactor, rest)
    }

    pub fn instantiate(&self, x: &BigInt) -> Result<CurveParams, RejectReason> {
        let (p, r, t, y) = match (self.p.eval(x), self.r.eval(x), self.t.eval(x), self.y.eval(x)) {
            (Some(p), Some(r), Some(t), Some(y)) => (p, r, t, y),
            _ => return Err(RejectReason::NonIntegral),
        };
        self.finish(x, p, r, t, y)
    }

    fn finish(&self, x: &BigInt, p: BigInt, r: BigInt, t: BigInt, y: BigInt) -> Result<CurveParams, RejectReason> {
        if t.is_zero() {
            return Err(RejectReason::TZero);
        }
        let too_small = |r_bits: u64| r_bits < self.cfg.min_r_bits || self.k * p.bits() < self.cfg.min_kp_bits;
        // bits(n) - 1 <= log2 n < bits(n)
        if too_small(r.bits()) {
            return Err(RejectReason::TooSmall);
        }
        if !is_prime(&p) {
            return Err(RejectReason::PComposite);
        }
        if !r.is_positive() {
            return Err(RejectReason::RNotNearPrime);
        }
        let (cofactor_r, r) = self.strip(&r);
        if cofactor_r > BigInt::from(self.cfg.max_cofactor_r) || r.is_one() || !is_prime(&r) {
            return Err(RejectReason::RNotNearPrime);
        }
        if too_small(r.bits()) {
            return Err(RejectReason::TooSmall);
        }
        if !t.gcd(&p).is_one() || !embedding_degree_is(self.k, &p, &r, &self.phi_k) {
            return Err(RejectReason::WrongEmbeddingDegree);
        }
        Ok(CurveParams {
            p,
            r,
            cofactor_r,
            t,
            y,
            d_eff: BigInt::from(self.d),
            k: self.k,
            n: BigInt::one(),
            x_seed: x.clone(),
        })
    }

    /// Accepted instantiations for `x` in `[from, from + len)` (in order).
    fn scan_block(&self, from: &BigInt, len: u64) -> Vec<CurveParams> {
        let (m, classes) = &self.classes;
        let mut composite = vec![false; len as usize];
        for (q, roots) in &self.sieve {
            let start = from.mod_floor(&BigInt::from(*q)).to_u64().expect("reduced");
            for &root in roots {
                let mut i = (root + q - start) % q;
                while i < len {
                    composite[i as usize] = true;
                    i += q;
                }
            }
        }
        let mut out = Vec::new();
        for (i, &marked) in composite.iter().enumerate() {
            let x = from + i;
            if !classes.contains(&x.mod_floor(m)) {
                continue;
            }
            let Some(p) = self.p.eval(&x) else { continue };
            // a sieve hit proves p composite unless p is the sieve prime itself
            if marked && p.abs() > BigInt::from(SIEVE_BOUND) {
                continue;
            }
            let (Some(r), Some(t), Some(y)) = (self.r.eval(&x), self.t.eval(&x), self.y.eval(&x)) else {
                continue;
            };
            if let Ok(params) = self.finish(&x, p, r, t, y) {
                out.push(params);
            }
        }
        out
    }

    /// Calls `sink` on every accepted instantiation in `[from, to]`, in
    /// ascending `x`. Blocks are evaluated in parallel and emitted in order.
    pub fn scan_each(&self, from: &BigInt, to: &BigInt, mut sink: impl FnMut(CurveParams)) -> Result<(), SearchError> {
        if from > to {
            return Err(SearchError::EmptyRange(from.clone(), to.clone()));
        }
        const BLOCK: u64 = 1 << 14;
        let batch = BLOCK * 4 * rayon::current_num_threads() as u64;
        let mut lo = from.clone();
        while &lo <= to {
            let remaining = (to - &lo + 1u32).to_u64().unwrap_or(u64::MAX);
            let span = remaining.min(batch);
            let starts: Vec<(BigInt, u64)> = (0..span.div_ceil(BLOCK))
                .map(|b| (&lo + b * BLOCK, BLOCK.min(span - b * BLOCK)))
                .collect();
            let results: Vec<Vec<CurveParams>> = starts.par_iter().map(|(s, len)| self.scan_block(s, *len)).collect();
            for params in results.into_iter().flatten() {
                sink(params);
            }
            lo += span;
        }
        Ok(())
    }
}

/// Evaluates the family at `x` and applies the filters of `cfg`.
pub fn instantiate(fam: &Family, x: &BigInt, cfg: &SearchConfig) -> Result<Result<CurveParams, RejectReason>, SearchError> {
    Ok(Instantiator::new(fam, cfg)?.instantiate(x))
}

/// All accepted instantiations with `x_from <= x <= x_to`, ascending in `x`.
pub fn scan(fam: &Family, x_from: &BigInt, x_to: &BigInt, cfg: &SearchConfig) -> Result<Vec<CurveParams>, SearchError> {
    let inst = Instantiator::new(fam, cfg)?;
    let mut out = Vec::new();
    if x_from > x_to {
        return Ok(out);
    }
    inst.scan_each(x_from, x_to, |p| out.push(p))?;
    Ok(out)
}

/// Prime factors of `y` in `[n_min, n_max]`, largest first.
pub fn select_n(y_value: &BigInt, cfg: &SearchConfig) -> Result<Vec<BigInt>, SearchError> {
    if y_value.is_zero() {
        return Err(SearchError::ZeroY);
    }
    // Rho only finds factors beyond the trial-division bound, so it is skipped
    // when that bound already covers `n_max`.
    let budget = if cfg.n_max <= cfg.smooth_bound { 0 } else { cfg.rho_budget };
    let fac = factor_partial(y_value, cfg.smooth_bound, budget)?;
    let (lo, hi) = (BigInt::from(cfg.n_min), BigInt::from(cfg.n_max));
    let mut out: Vec<BigInt> = fac.primes().filter(|p| **p >= lo && **p <= hi).cloned().collect();
    if out.is_empty() {
        return Err(SearchError::NoCandidate(cfg.n_min, cfg.n_max));
    }
    out.sort_by(|a, b| b.cmp(a));
    Ok(out)
}

/// `(p, r, t, y, D, k) → (p, r, t, y/n, D n^2, k)`.
pub fn apply_improvement(params: &CurveParams, n: &BigInt) -> Result<CurveParams, SearchError> {
    if !n.is_positive() || !(&params.y % n).is_zero() {
        return Err(SearchError::NotDivisor { n: n.clone(), y: params.y.clone() });
    }
    Ok(CurveParams {
        y: &params.y / n,
        d_eff: &params.d_eff * n * n,
        n: &params.n * n,
        ..params.clone()
    })
}
