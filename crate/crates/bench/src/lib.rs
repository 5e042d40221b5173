//! Shared inputs for the benchmarks.

use bwdisc::families::generic_construction;
use bwdisc::search::{apply_improvement, instantiate, CurveParams, SearchConfig};
use bwdisc::Family;
use num_bigint::BigInt;

/// The degree-eight family with `D = 3`, `k = 9`.
pub fn degree_nine_family() -> Family {
    generic_construction(3, 9, 1, 4).expect("valid quadruplet")
}

/// Toy parameters at `x = 137` improved by `n = 17` (class number 16).
pub fn toy_params() -> CurveParams {
    let cfg = SearchConfig { min_r_bits: 100, ..SearchConfig::default() };
    let params = instantiate(&Family::toy(), &BigInt::from(137), &cfg)
        .expect("valid configuration")
        .expect("x = 137 is accepted");
    apply_improvement(&params, &BigInt::from(17)).expect("17 divides y(137)")
}
