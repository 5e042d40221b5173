//! Pairing-friendly curve parameters from Brezing-Weng families, with the
//! CM discriminant enlarged from `-D` to `-D n^2` for a prime divisor `n` of
//! `y(x)`.

pub mod cm;
pub mod families;
pub mod numtheory;
pub mod polyring;
pub mod search;

pub use polyring::{cyclotomic, factorize, PolyError, PolyFactorization, RatPoly, Rational};
pub use families::{Family, FamilyError};
pub use search::{CurveParams, RejectReason, SearchConfig, SearchError};
pub use cm::{build_curve, hilbert_class_poly, verify_curve, CmError, Curve, VerifyFailure};
