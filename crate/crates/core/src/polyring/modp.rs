//! Polynomials over a small prime field, used as the modular image in
//! factorization over the rationals.

use rand::Rng;

/// Dense polynomial over `F_p` with `p < 2^20`, coefficients low-to-high,
/// trailing zeros stripped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct ModPoly {
    pub p: u64,
    pub c: Vec<u64>,
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

pub(crate) fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    acc
}

impl ModPoly {
    pub fn new(p: u64, mut c: Vec<u64>) -> Self {
        while c.last() == Some(&0) {
            c.pop();
        }
        ModPoly { p, c }
    }

    pub fn one(p: u64) -> Self {
        ModPoly::new(p, vec![1])
    }

    pub fn x(p: u64) -> Self {
        ModPoly::new(p, vec![0, 1])
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn lc(&self) -> u64 {
        *self.c.last().unwrap_or(&0)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = inv_mod(self.lc(), self.p);
        self.scale(inv)
    }

    pub fn scale(&self, s: u64) -> Self {
        ModPoly::new(self.p, self.c.iter().map(|&a| a * s % self.p).collect())
    }

    #[cfg(test)]
    pub fn add(&self, o: &ModPoly) -> Self {
        let n = self.c.len().max(o.c.len());
        let p = self.p;
        ModPoly::new(
            p,
            (0..n)
                .map(|i| (self.c.get(i).unwrap_or(&0) + o.c.get(i).unwrap_or(&0)) % p)
                .collect(),
        )
    }

    pub fn sub(&self, o: &ModPoly) -> Self {
        let n = self.c.len().max(o.c.len());
        let p = self.p;
        ModPoly::new(
            p,
            (0..n)
                .map(|i| (self.c.get(i).unwrap_or(&0) + p - o.c.get(i).unwrap_or(&0)) % p)
                .collect(),
        )
    }

    pub fn mul(&self, o: &ModPoly) -> Self {
        if self.is_zero() || o.is_zero() {
            return ModPoly::new(self.p, vec![]);
        }
        let p = self.p;
        // p < 2^20: each product is below 2^40, so a row sum cannot overflow
        let mut out = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        for c in out.iter_mut() {
            *c %= p;
        }
        ModPoly::new(p, out)
    }

    pub fn div_rem(&self, d: &ModPoly) -> (ModPoly, ModPoly) {
        assert!(!d.is_zero(), "division by zero polynomial mod p");
        let p = self.p;
        if self.c.len() < d.c.len() {
            return (ModPoly::new(p, vec![]), self.clone());
        }
        let inv = inv_mod(d.lc(), p);
        let dl = d.c.len();
        let mut rem = self.c.clone();
        let mut quot = vec![0u64; rem.len() - dl + 1];
        for i in (0..quot.len()).rev() {
            let q = rem[i + dl - 1] * inv % p;
            if q != 0 {
                for (j, &dc) in d.c.iter().enumerate() {
                    rem[i + j] = (rem[i + j] + p - q * dc % p) % p;
                }
            }
            quot[i] = q;
        }
        rem.truncate(dl - 1);
        (ModPoly::new(p, quot), ModPoly::new(p, rem))
    }

    pub fn rem(&self, d: &ModPoly) -> ModPoly {
        self.div_rem(d).1
    }

    pub fn gcd(&self, o: &ModPoly) -> ModPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = std::mem::replace(&mut b, r);
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `s*a + t*b = g`, `g` monic.
    pub fn ext_gcd(a: &ModPoly, b: &ModPoly) -> (ModPoly, ModPoly, ModPoly) {
        let p = a.p;
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (ModPoly::one(p), ModPoly::new(p, vec![]));
        let (mut t0, mut t1) = (ModPoly::new(p, vec![]), ModPoly::one(p));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        let inv = inv_mod(r0.lc(), p);
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    pub fn derivative(&self) -> ModPoly {
        let p = self.p;
        ModPoly::new(
            p,
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * (i as u64 % p) % p)
                .collect(),
        )
    }

    pub fn pow_mod(&self, mut e: u64, m: &ModPoly) -> ModPoly {
        let mut base = self.rem(m);
        let mut acc = ModPoly::one(self.p).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).rem(m);
            }
        }
        acc
    }
}

/// Rows `x^(i*p) mod f` for `i < deg f`, so that `h^p mod f` is a linear map.
pub(crate) fn frobenius_table(f: &ModPoly) -> Vec<ModPoly> {
    let p = f.p;
    let xp = ModPoly::x(p).pow_mod(p, f);
    let mut rows = Vec::with_capacity(f.degree());
    let mut cur = ModPoly::one(p);
    for _ in 0..f.degree() {
        rows.push(cur.clone());
        cur = cur.mul(&xp).rem(f);
    }
    rows
}

pub(crate) fn apply_frobenius(h: &ModPoly, table: &[ModPoly]) -> ModPoly {
    let p = h.p;
    let n = table.len();
    let mut out = vec![0u64; n];
    for (i, &hi) in h.c.iter().enumerate() {
        if hi == 0 {
            continue;
        }
        for (j, &t) in table[i].c.iter().enumerate() {
            out[j] += hi * t;
        }
    }
    for c in out.iter_mut() {
        *c %= p;
    }
    ModPoly::new(p, out)
}

/// Distinct-degree factorization of a monic squarefree polynomial:
/// pairs `(d, g)` where `g` is the product of all degree-`d` irreducible factors.
pub(crate) fn distinct_degree(f: &ModPoly) -> Vec<(usize, ModPoly)> {
    let p = f.p;
    let mut out = Vec::new();
    if f.degree() == 0 {
        return out;
    }
    let table = frobenius_table(f);
    let mut rest = f.clone();
    let x = ModPoly::x(p);
    // h tracks x^(p^d) mod f (not mod rest)
    let mut h = x.rem(f);
    let mut d = 0;
    while rest.degree() >= 2 * (d + 1) {
        d += 1;
        h = apply_frobenius(&h, &table);
        let g = h.sub(&x).rem(&rest).gcd(&rest);
        if g.degree() > 0 {
            rest = rest.div_rem(&g).0;
            out.push((d, g));
        }
    }
    if rest.degree() > 0 {
        let deg = rest.degree();
        out.push((deg, rest.monic()));
    }
    out
}

/// Cantor-Zassenhaus splitting of a product of degree-`d` irreducibles.
pub(crate) fn equal_degree<R: Rng>(g: &ModPoly, d: usize, rng: &mut R) -> Vec<ModPoly> {
    if g.degree() == d {
        return vec![g.monic()];
    }
    let p = g.p;
    loop {
        let a = ModPoly::new(p, (0..g.degree()).map(|_| rng.gen_range(0..p)).collect());
        if a.degree() == 0 {
            continue;
        }
        // a^((p^d - 1)/2) = (a * a^p * ... * a^(p^(d-1)))^((p - 1)/2)
        let mut frob = a.clone();
        let mut norm = a.clone();
        for _ in 1..d {
            frob = frob.pow_mod(p, g);
            norm = norm.mul(&frob).rem(g);
        }
        let b = norm.pow_mod((p - 1) / 2, g).sub(&ModPoly::one(p));
        let h = b.gcd(g);
        if h.degree() > 0 && h.degree() < g.degree() {
            let other = g.div_rem(&h).0;
            let mut parts = equal_degree(&h, d, rng);
            parts.extend(equal_degree(&other, d, rng));
            return parts;
        }
    }
}

/// Full factorization of a monic squarefree polynomial into monic irreducibles.
#[cfg(test)]
pub(crate) fn factor_squarefree<R: Rng>(f: &ModPoly, rng: &mut R) -> Vec<ModPoly> {
    let mut out = Vec::new();
    for (d, g) in distinct_degree(f) {
        out.extend(equal_degree(&g, d, rng));
    }
    out
}
