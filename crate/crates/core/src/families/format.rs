//! Text form of a [`Family`]: one `key: value` line per field, polynomials in
//! the `RatPoly` coefficient-list syntax.
//!
//! ```text
//! D: 3
//! k: 9
//! e: 1
//! f: 4
//! eps: 1
//! y_lift: 0
//! r: 1,0,0,1,0,0,1
//! z: 0,0,0,0,1
//! sqrtD: 1,0,0,2
//! t: 1,0,0,0,1
//! y: 1/3,2/3,0,2/3,1/3
//! p: 1/3,1/3,1/3,1/3,4/3,1/3,1/3,1/3,1/3
//! ```
//!
//! `e`, `f` and `eps` appear only for the cyclotomic construction. Loading
//! rebuilds the family from `(D, k, r, z, sqrtD, y_lift)` and rejects files
//! whose stored `t`, `y`, `p` disagree.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use super::{assemble, check_quadruplet, Family, FamilyError, GenericParams};
use crate::polyring::RatPoly;

impl fmt::Display for Family {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(out, "D: {}", self.d)?;
        writeln!(out, "k: {}", self.k)?;
        if let Some(m) = &self.meta {
            writeln!(out, "e: {}", m.e)?;
            writeln!(out, "f: {}", m.f)?;
            writeln!(out, "eps: {}", m.eps)?;
        }
        writeln!(out, "y_lift: {}", self.y_lift)?;
        writeln!(out, "r: {}", self.r)?;
        writeln!(out, "z: {}", self.z)?;
        writeln!(out, "sqrtD: {}", self.sqrt_d)?;
        writeln!(out, "t: {}", self.t)?;
        writeln!(out, "y: {}", self.y)?;
        writeln!(out, "p: {}", self.p)
    }
}

const KEYS: [&str; 12] = ["D", "k", "e", "f", "eps", "y_lift", "r", "z", "sqrtD", "t", "y", "p"];

impl FromStr for Family {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Family, FamilyError> {
        let mut values: [Option<&str>; 12] = [None; 12];
        for line in s.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let (key, value) = line
                .split_once(':')
                .ok_or_else(|| FamilyError::Parse(format!("expected `key: value`, got `{line}`")))?;
            let slot = KEYS
                .iter()
                .position(|k| *k == key.trim())
                .ok_or_else(|| FamilyError::Parse(format!("unknown key `{}`", key.trim())))?;
            if values[slot].replace(value.trim()).is_some() {
                return Err(FamilyError::Parse(format!("duplicate key `{}`", KEYS[slot])));
            }
        }
        let get = |i: usize| values[i].ok_or_else(|| FamilyError::Parse(format!("missing key `{}`", KEYS[i])));
        let int = |i: usize| -> Result<u64, FamilyError> {
            get(i)?.parse().map_err(|_| FamilyError::Parse(format!("bad integer for `{}`", KEYS[i])))
        };
        let poly = |i: usize| -> Result<RatPoly, FamilyError> {
            get(i)?.parse().map_err(|_| FamilyError::Parse(format!("bad polynomial for `{}`", KEYS[i])))
        };
        let d = int(0)?;
        let k = int(1)?;
        let meta = match (values[2], values[3], values[4]) {
            (None, None, None) => None,
            (Some(_), Some(_), Some(_)) => {
                let (e, f, eps) = (int(2)?, int(3)?, int(4)?);
                if check_quadruplet(d, k, e, f)? != eps {
                    return Err(FamilyError::Parse("eps does not match D".into()));
                }
                Some(GenericParams { e, f, eps })
            }
            _ => return Err(FamilyError::Parse("e, f and eps must appear together".into())),
        };
        let y_lift: BigInt = get(5)?
            .parse()
            .map_err(|_| FamilyError::Parse("bad integer for `y_lift`".into()))?;
        let r = poly(6)?;
        if r.degree().unwrap_or(0) == 0 {
            return Err(FamilyError::BadModulusShape);
        }
        let rebuilt = assemble(d, k, &r, &poly(7)?, &poly(8)?, meta)?.with_y_lift(&y_lift);
        if rebuilt.t != poly(9)? || rebuilt.y != poly(10)? || rebuilt.p != poly(11)? {
            return Err(FamilyError::Parse("t, y, p do not match the construction".into()));
        }
        rebuilt.check_invariants()?;
        Ok(rebuilt)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::generic_construction;

    #[test]
    fn documented_example_parses() {
        let text = "D: 3\nk: 9\ne: 1\nf: 4\neps: 1\ny_lift: 0\nr: 1,0,0,1,0,0,1\nz: 0,0,0,0,1\n\
                    sqrtD: 1,0,0,2\nt: 1,0,0,0,1\ny: 1/3,2/3,0,2/3,1/3\n\
                    p: 1/3,1/3,1/3,1/3,4/3,1/3,1/3,1/3,1/3\n";
        let fam: Family = text.parse().unwrap();
        assert_eq!(fam, generic_construction(3, 9, 1, 4).unwrap());
        assert_eq!(fam.to_string(), text);
    }

    #[test]
    fn round_trips() {
        for fam in [
            Family::toy(),
            Family::barreto_naehrig(),
            generic_construction(7, 14, 2, 3).unwrap(),
            generic_construction(5, 20, 1, 3).unwrap().with_y_lift(&BigInt::from(-3)),
        ] {
            let text = fam.to_string();
            assert_eq!(text.parse::<Family>().unwrap(), fam);
        }
    }

    #[test]
    fn rejects_tampering() {
        let text = generic_construction(3, 9, 1, 4).unwrap().to_string();
        let edited = text.replace("y_lift: 0", "y_lift: 1");
        assert!(matches!(edited.parse::<Family>(), Err(FamilyError::Parse(_))));
        let missing: String = text.lines().filter(|l| !l.starts_with("p:")).map(|l| format!("{l}\n")).collect();
        assert!(missing.parse::<Family>().is_err());
        assert!(format!("{text}D: 3\n").parse::<Family>().is_err());
        assert!(text.replace("eps: 1", "eps: 4").parse::<Family>().is_err());
        assert!(text.replace("sqrtD: 1,0,0,2", "sqrtD: 1,0,0,2,0").parse::<Family>().is_err());
        assert!("D: 3\nfoo: 1\n".parse::<Family>().is_err());
    }
}
