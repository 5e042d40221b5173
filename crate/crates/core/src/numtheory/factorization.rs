use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{is_prime, NumError};

/// Trial-division bound used when none is given.
pub const DEFAULT_SMOOTH_BOUND: u64 = 1_000_000;
/// Pollard-rho iterations; enough to find factors up to about 10^12.
pub const DEFAULT_RHO_BUDGET: u64 = 2_000_000;

/// `sign * ∏ prime^exponent * cofactor` with an unfactored cofactor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub sign: i8,
    /// Ascending primes with positive exponents.
    pub factors: Vec<(BigInt, u32)>,
    /// Composite remainder the budget could not split, or 1.
    pub cofactor: BigInt,
}

impl Factorization {
    pub fn value(&self) -> BigInt {
        let mut acc = BigInt::from(self.sign);
        for (p, e) in &self.factors {
            acc *= p.pow(*e);
        }
        acc * &self.cofactor
    }

    pub fn is_complete(&self) -> bool {
        self.cofactor.is_one()
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigInt> {
        self.factors.iter().map(|(p, _)| p)
    }
}

/// Sieve of Eratosthenes up to and including `limit`.
pub fn small_primes(limit: u64) -> Vec<u64> {
    let limit = limit as usize;
    if limit < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Extracts every prime factor up to `smooth_bound` by trial division, then
/// spends at most `rho_budget` Pollard-rho iterations on what remains.
/// Prime remainders are listed as factors; composite ones stay in `cofactor`.
pub fn factor_partial(n: &BigInt, smooth_bound: u64, rho_budget: u64) -> Result<Factorization, NumError> {
    if n.is_zero() {
        return Err(NumError::Zero);
    }
    let sign = if n.is_negative() { -1 } else { 1 };
    let mut m = n.abs();
    let mut factors: Vec<(BigInt, u32)> = Vec::new();

    for p in small_primes(smooth_bound) {
        if m.is_one() {
            break;
        }
        if m.bits() <= 64 && p.saturating_mul(p) > m.iter_u64_digits().next().unwrap_or(0) {
            break;
        }
        if !(&m % p).is_zero() {
            continue;
        }
        let pb = BigInt::from(p);
        let mut e = 0;
        loop {
            let (q, r) = m.div_rem(&pb);
            if !r.is_zero() {
                break;
            }
            m = q;
            e += 1;
        }
        if e > 0 {
            factors.push((pb, e));
        }
    }

    let mut cofactor = BigInt::one();
    let mut budget = rho_budget;
    let mut pending = if m.is_one() { vec![] } else { vec![m] };
    while let Some(x) = pending.pop() {
        if is_prime(&x) {
            factors.push((x, 1));
            continue;
        }
        match pollard_brent(&x, &mut budget) {
            Some(d) => {
                let other = &x / &d;
                pending.push(d);
                pending.push(other);
            }
            None => cofactor *= x,
        }
    }

    factors.sort();
    let mut merged: Vec<(BigInt, u32)> = Vec::with_capacity(factors.len());
    for (p, e) in factors {
        match merged.last_mut() {
            Some((q, f)) if *q == p => *f += e,
            _ => merged.push((p, e)),
        }
    }
    Ok(Factorization { sign, factors: merged, cofactor })
}

/// Brent's variant of Pollard rho; decrements `budget` per iteration.
fn pollard_brent(n: &BigInt, budget: &mut u64) -> Option<BigInt> {
    if n.is_even() {
        return Some(BigInt::from(2));
    }
    if let Some(r) = perfect_power_root(n) {
        return Some(r);
    }
    for c in 1u32.. {
        if *budget == 0 {
            return None;
        }
        let c = BigInt::from(c);
        let f = |x: &BigInt| (x * x + &c) % n;
        let mut y = BigInt::from(2);
        let mut r: u64 = 1;
        let mut q = BigInt::one();
        let mut g = BigInt::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        const BATCH: u64 = 128;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                let steps = BATCH.min(r - k);
                for _ in 0..steps {
                    y = f(&y);
                    q = (q * (&x - &y).abs()) % n;
                }
                g = q.gcd(n);
                k += steps;
                *budget = budget.saturating_sub(steps);
                if *budget == 0 && g.is_one() {
                    return None;
                }
            }
            r *= 2;
        }
        if &g == n {
            // backtrack one step at a time from the last saved point
            loop {
                ys = f(&ys);
                g = (&x - &ys).abs().gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n {
            return Some(g);
        }
    }
    None
}

fn perfect_power_root(n: &BigInt) -> Option<BigInt> {
    let bits = n.bits();
    for k in 2..=bits.min(64) as u32 {
        let r = n.nth_root(k);
        if r > BigInt::one() && &r.pow(k) == n {
            return Some(r);
        }
    }
    None
}

/// `-2 * 17 * 137^2 * [c]`: sign, ascending primes with exponents above one,
/// and a bracketed composite cofactor when present.
impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.sign < 0 { "-" } else { "+" })?;
        let mut parts: Vec<String> = self
            .factors
            .iter()
            .map(|(p, e)| if *e == 1 { p.to_string() } else { format!("{p}^{e}") })
            .collect();
        if !self.cofactor.is_one() {
            parts.push(format!("[{}]", self.cofactor));
        }
        if parts.is_empty() {
            parts.push("1".into());
        }
        f.write_str(&parts.join(" * "))
    }
}

impl FromStr for Factorization {
    type Err = NumError;

    fn from_str(s: &str) -> Result<Self, NumError> {
        let bad = || NumError::Parse(s.to_string());
        let (sign, body) = match s.as_bytes().first() {
            Some(b'+') => (1, &s[1..]),
            Some(b'-') => (-1, &s[1..]),
            _ => return Err(bad()),
        };
        let mut factors = Vec::new();
        let mut cofactor = BigInt::one();
        if body != "1" {
            for part in body.split(" * ") {
                if let Some(inner) = part.strip_prefix('[').and_then(|p| p.strip_suffix(']')) {
                    cofactor = inner.parse().map_err(|_| bad())?;
                    continue;
                }
                let (p, e) = match part.split_once('^') {
                    Some((p, e)) => (p, e.parse::<u32>().map_err(|_| bad())?),
                    None => (part, 1),
                };
                let p: BigInt = p.parse().map_err(|_| bad())?;
                factors.push((p, e));
            }
        }
        let parsed = Factorization { sign, factors, cofactor };
        if parsed.to_string() != s {
            return Err(bad());
        }
        Ok(parsed)
    }
}
