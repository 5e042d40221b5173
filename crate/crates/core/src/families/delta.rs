//! The δ statistic: degree of the largest irreducible factor of `y` over
//! the degree of `y`, for the cyclotomic construction.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use super::{check_quadruplet, generic_construction, FamilyError};
use crate::numtheory::is_prime_u64;
use crate::polyring::factorize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaReport {
    /// `m_degree / y_degree`, in `[0, 1]`.
    pub delta: BigRational,
    pub m_degree: usize,
    pub y_degree: usize,
    /// `(D, k, e, f)`.
    pub quadruplet: (u64, u64, u64, u64),
}

impl DeltaReport {
    /// Histogram bucket `⌊10 δ⌋`, so δ = 1 lands in bucket 10.
    pub fn bucket(&self) -> usize {
        (self.delta.clone() * BigInt::from(10)).floor().to_integer().to_usize().expect("delta in [0, 1]")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaTable {
    pub range_max: u64,
    /// Counts for δ in `[0.0, 0.1)`, `[0.1, 0.2)`, …, `[0.9, 1.0)`, `{1.0}`.
    pub buckets: [u64; 11],
    /// Number of quadruplets with a defined δ (sum of the buckets).
    pub total: u64,
    /// Valid quadruplets whose `y` is zero or constant, where δ is undefined.
    pub undefined: u64,
}

impl DeltaTable {
    /// Share of the total with δ ≥ 0.8.
    pub fn high_share(&self) -> f64 {
        (self.buckets[8] + self.buckets[9] + self.buckets[10]) as f64 / self.total.max(1) as f64
    }
}

/// All `(D, k, e, f) ∈ {1, …, range_max}^4` with `D` an odd prime, `εD | ke`
/// and `gcd(f, k) = 1`, in lexicographic order.
pub fn valid_quadruplets(range_max: u64) -> Vec<(u64, u64, u64, u64)> {
    let mut out = Vec::new();
    for d in (3..=range_max).filter(|&d| d % 2 == 1 && is_prime_u64(d)) {
        for k in 1..=range_max {
            for e in 1..=range_max {
                for f in 1..=range_max {
                    if check_quadruplet(d, k, e, f).is_ok() {
                        out.push((d, k, e, f));
                    }
                }
            }
        }
    }
    out
}

/// δ for the family `generic_construction(D, k, e, f)`.
pub fn delta(d: u64, k: u64, e: u64, f: u64) -> Result<DeltaReport, FamilyError> {
    let fam = generic_construction(d, k, e, f)?;
    let y_degree = match fam.y.degree() {
        None => return Err(FamilyError::ZeroY),
        Some(0) => return Err(FamilyError::ConstantY),
        Some(n) => n,
    };
    let m_degree = factorize(&fam.y)?.max_factor_degree();
    Ok(DeltaReport {
        delta: BigRational::new(m_degree.into(), y_degree.into()),
        m_degree,
        y_degree,
        quadruplet: (d, k, e, f),
    })
}

/// Histogram of δ over [`valid_quadruplets`]`(range_max)`.
///
/// `z = x^(ef)` only depends on `ef mod ke`, so each `(D, k, e)` group
/// factors one `y` per distinct residue. Groups run in parallel; the result
/// does not depend on scheduling.
pub fn delta_table(range_max: u64) -> Result<DeltaTable, FamilyError> {
    let quads = valid_quadruplets(range_max);
    let mut groups: Vec<((u64, u64, u64), Vec<u64>)> = Vec::new();
    for (d, k, e, f) in quads {
        match groups.last_mut() {
            Some((key, fs)) if *key == (d, k, e) => fs.push(f),
            _ => groups.push(((d, k, e), vec![f])),
        }
    }
    // largest ke first so long jobs do not trail at the end
    groups.sort_by_key(|((_, k, e), _)| std::cmp::Reverse(k * e));
    let partials: Vec<Result<([u64; 11], u64), FamilyError>> = groups
        .par_iter()
        .map(|&((d, k, e), ref fs)| {
            let mut buckets = [0u64; 11];
            let mut undefined = 0;
            let mut cache: HashMap<u64, Option<usize>> = HashMap::new();
            for &f in fs {
                let residue = (e * f) % (k * e);
                let bucket = match cache.get(&residue) {
                    Some(b) => *b,
                    None => {
                        let b = match delta(d, k, e, f) {
                            Ok(rep) => Some(rep.bucket()),
                            Err(FamilyError::ZeroY | FamilyError::ConstantY) => None,
                            Err(err) => return Err(err),
                        };
                        cache.insert(residue, b);
                        b
                    }
                };
                match bucket {
                    Some(b) => buckets[b] += 1,
                    None => undefined += 1,
                }
            }
            Ok((buckets, undefined))
        })
        .collect();
    let mut table = DeltaTable { range_max, buckets: [0; 11], total: 0, undefined: 0 };
    for part in partials {
        let (buckets, undefined) = part?;
        for (acc, b) in table.buckets.iter_mut().zip(buckets) {
            *acc += b;
        }
        table.undefined += undefined;
    }
    table.total = table.buckets.iter().sum();
    Ok(table)
}
