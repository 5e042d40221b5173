//! One-line text record for [`CurveParams`]:
//!
//! ```text
//! p=… r=… cofactor_r=… t=… y=… D_eff=… k=… n=… x_seed=…
//! ```
//!
//! Fields are decimal, in this order, separated by single spaces.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use super::{CurveParams, SearchError};

const FIELDS: [&str; 9] = ["p", "r", "cofactor_r", "t", "y", "D_eff", "k", "n", "x_seed"];

impl fmt::Display for CurveParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "p={} r={} cofactor_r={} t={} y={} D_eff={} k={} n={} x_seed={}",
            self.p, self.r, self.cofactor_r, self.t, self.y, self.d_eff, self.k, self.n, self.x_seed
        )
    }
}

impl FromStr for CurveParams {
    type Err = SearchError;

    /// Parses and validates a record; the text must be in canonical form.
    fn from_str(s: &str) -> Result<CurveParams, SearchError> {
        let s = s.trim_end_matches(['\n', '\r']);
        let parts: Vec<&str> = s.split(' ').collect();
        if parts.len() != FIELDS.len() {
            return Err(SearchError::Parse(format!("expected {} fields", FIELDS.len())));
        }
        let mut values = Vec::with_capacity(FIELDS.len());
        for (part, name) in parts.iter().zip(FIELDS) {
            let value = part
                .strip_prefix(name)
                .and_then(|v| v.strip_prefix('='))
                .ok_or_else(|| SearchError::Parse(format!("expected field `{name}`")))?;
            let n: BigInt = value
                .parse()
                .map_err(|_| SearchError::Parse(format!("field `{name}` is not an integer")))?;
            values.push(n);
        }
        let k = u64::try_from(&values[6]).map_err(|_| SearchError::Parse("k out of range".into()))?;
        let mut it = values.into_iter();
        let mut next = || it.next().expect("field count checked");
        let params = CurveParams {
            p: next(),
            r: next(),
            cofactor_r: next(),
            t: next(),
            y: next(),
            d_eff: next(),
            k: {
                next();
                k
            },
            n: next(),
            x_seed: next(),
        };
        if params.to_string() != s {
            return Err(SearchError::Parse("record is not in canonical form".into()));
        }
        params.validate()?;
        Ok(params)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::Family;
    use crate::search::{apply_improvement, instantiate, SearchConfig};

    fn toy() -> CurveParams {
        let cfg = SearchConfig { min_r_bits: 100, ..SearchConfig::default() };
        instantiate(&Family::toy(), &BigInt::from(137), &cfg).unwrap().unwrap()
    }

    #[test]
    fn round_trip() {
        let params = apply_improvement(&toy(), &BigInt::from(17)).unwrap();
        let text = params.to_string();
        assert!(text.starts_with("p=12542935105916320505274303565097221442462295713 r="));
        assert!(text.contains(" D_eff=2312 k=48 n=17 x_seed=137"));
        assert_eq!(text.parse::<CurveParams>().unwrap(), params);
    }

    #[test]
    fn rejects_bad_records() {
        let text = toy().to_string();
        assert!(text.replace("k=48", "k=24").parse::<CurveParams>().is_err());
        assert!(text.replace(" n=1", "  n=1").parse::<CurveParams>().is_err());
        assert!(text.replace("t=138", "t=+138").parse::<CurveParams>().is_err());
        assert!(text.replace("t=138", "t=139").parse::<CurveParams>().is_err());
        assert!("p=7".parse::<CurveParams>().is_err());
    }
}
