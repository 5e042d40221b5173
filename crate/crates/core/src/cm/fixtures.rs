//! The three explicit curves published with the method: the `D = 8`,
//! `k = 48` toy curve at `x = 137`, the `D = 3`, `k = 9` cyclotomic family
//! at `x = 134499652` with `n = 153733`, and the Barreto-Naehrig curve at
//! `x = 549755862066` with `n = 151579`.

use num_bigint::BigInt;

use super::Curve;

fn big(s: &str) -> BigInt {
    s.parse().expect("decimal literal")
}

/// `Y^2 = X^3 + 935824…8777 X + 898583…9660` over `p(137)`, discriminant `-2312`.
pub fn toy() -> Curve {
    let x = BigInt::from(137);
    Curve {
        p: big("12542935105916320505274303565097221442462295713"),
        a: big("935824186433623028047894899424144532036848777"),
        b: big("8985839528233295688881465643014243982999429660"),
        // r = Φ_48(x) = x^16 - x^8 + 1, t = x + 1
        r: x.pow(16) - x.pow(8) + 1,
        t: &x + 1,
        k: 48,
        d_eff: Some(BigInt::from(8 * 17 * 17)),
    }
}

/// The `(D, k, e, f) = (3, 9, 1, 4)` curve, discriminant `-3 · 153733^2`.
pub fn generic() -> Curve {
    let x = BigInt::from(134_499_652u64);
    Curve {
        p: big("35698341005790839038787210375794985673959363094188344177147207303"),
        a: big("18380344310754022726680092877438217394215740605269665898315768997"),
        b: big("354115871905735471524325126360483038157372705450329206494776897"),
        r: big("1973357221157926680445163219766947256676055062891"),
        // t = 1 + x^4
        t: x.pow(4) + 1,
        k: 9,
        d_eff: Some(BigInt::from(3u64 * 153_733 * 153_733)),
    }
}

/// The Barreto-Naehrig curve, discriminant `-3 · 151579^2`.
pub fn barreto_naehrig() -> Curve {
    let x = BigInt::from(549_755_862_066u64);
    Curve {
        p: big("3288379836712499477504831531496220248757101197293"),
        a: big("983842331478040932232760138380470085419271212296"),
        b: big("2848148112127026939825061113251126889450914939726"),
        r: big("4146758936585749656374312380967431265034293149"),
        // t = 6x^2 + 1
        t: &x * &x * 6 + 1,
        k: 12,
        d_eff: Some(BigInt::from(3u64 * 151_579 * 151_579)),
    }
}

/// `(name, curve)` for all three.
pub fn all() -> Vec<(&'static str, Curve)> {
    vec![("toy", toy()), ("generic", generic()), ("bn", barreto_naehrig())]
}
