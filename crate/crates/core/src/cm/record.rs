//! Curve files: one `key: value` line each for `p`, `a`, `b`, `r`, `t`, `k`
//! and optionally `D_eff`, all decimal. Blank lines and `#` comments are
//! ignored.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use super::{CmError, Curve};

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p: {}", self.p)?;
        writeln!(f, "a: {}", self.a)?;
        writeln!(f, "b: {}", self.b)?;
        writeln!(f, "r: {}", self.r)?;
        writeln!(f, "t: {}", self.t)?;
        writeln!(f, "k: {}", self.k)?;
        if let Some(d) = &self.d_eff {
            writeln!(f, "D_eff: {d}")?;
        }
        Ok(())
    }
}

const KEYS: [&str; 7] = ["p", "a", "b", "r", "t", "k", "D_eff"];

impl FromStr for Curve {
    type Err = CmError;

    fn from_str(s: &str) -> Result<Curve, CmError> {
        let mut values: [Option<BigInt>; 7] = Default::default();
        for line in s.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let (key, value) = line
                .split_once(':')
                .ok_or_else(|| CmError::Parse(format!("expected `key: value`, got `{line}`")))?;
            let slot = KEYS
                .iter()
                .position(|k| *k == key.trim())
                .ok_or_else(|| CmError::Parse(format!("unknown key `{}`", key.trim())))?;
            let n: BigInt = value
                .trim()
                .parse()
                .map_err(|_| CmError::Parse(format!("`{}` is not a decimal integer", key.trim())))?;
            if values[slot].replace(n).is_some() {
                return Err(CmError::Parse(format!("duplicate key `{}`", KEYS[slot])));
            }
        }
        let mut take = |i: usize| values[i].take().ok_or_else(|| CmError::Parse(format!("missing key `{}`", KEYS[i])));
        let p = take(0)?;
        let a = take(1)?;
        let b = take(2)?;
        let r = take(3)?;
        let t = take(4)?;
        let k = u64::try_from(take(5)?).map_err(|_| CmError::Parse("k out of range".into()))?;
        let d_eff = values[6].take();
        if p <= BigInt::from(3) {
            return Err(CmError::Parse("p must exceed 3".into()));
        }
        let in_field = |v: &BigInt| v >= &BigInt::from(0) && v < &p;
        if !in_field(&a) || !in_field(&b) {
            return Err(CmError::Parse("a and b must be reduced modulo p".into()));
        }
        Ok(Curve { p, a, b, r, t, k, d_eff })
    }
}
