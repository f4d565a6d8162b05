//! Exact arithmetic in the tower GF(p) ⊆ GF(q) ⊂ GF(q³) ⊂ GF(q⁶).
//!
//! Every element is stored as a little-endian coefficient vector over the
//! next-lower level, packed into a single `u32` in mixed radix:
//!
//! * base level: digits over GF(p) in the power basis of a primitive
//!   polynomial of degree `e` (for `e = 1` the raw value is the residue);
//! * cubic level: `c0 + c1·q + c2·q²`, meaning `c0 + c1·τ + c2·τ²`;
//! * sextic level: `a0 + a1·q³`, meaning `a0 + a1·ω` for a root ω of the
//!   sextic modulus.
//!
//! With this packing the embeddings GF(q) → GF(q³) → GF(q⁶) are the identity
//! on raw values, and an element lies in a subfield exactly when its raw value
//! is smaller than that subfield's order.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported q. Keeps q⁶ comfortably inside `u32`.
pub const MAX_Q: u32 = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Base,
    Cubic,
    Sextic,
}

impl Level {
    /// Degree of the level over GF(q).
    pub fn degree(self) -> u32 {
        match self {
            Level::Base => 1,
            Level::Cubic => 3,
            Level::Sextic => 6,
        }
    }

    pub fn parse(s: &str) -> Option<Level> {
        match s {
            "base" | "q" => Some(Level::Base),
            "cubic" | "q3" => Some(Level::Cubic),
            "sextic" | "q6" => Some(Level::Sextic),
            _ => None,
        }
    }
}

/// A scalar tagged with the level it lives at.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem {
    level: Level,
    raw: u32,
}

impl FieldElem {
    pub fn new(level: Level, raw: u32) -> Self {
        FieldElem { level, raw }
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn raw(&self) -> u32 {
        self.raw
    }
}

/// The field tower. Immutable after construction.
#[derive(Clone, Debug)]
pub struct FieldTower {
    p: u32,
    e: u32,
    q: u32,
    /// Monic primitive polynomial defining GF(q) over GF(p), low to high,
    /// without the leading 1.
    base_modulus: Vec<u32>,
    base_add: Vec<u32>,
    base_mul: Vec<u32>,
    base_neg: Vec<u32>,
    base_inv: Vec<u32>,
    /// (t0, t1, t2) with τ³ = t0 + t1·τ + t2·τ².
    cubic_modulus: [u32; 3],
    cubic_exp: Vec<u32>,
    cubic_log: Vec<u32>,
    /// Column j holds the coordinates of (τ^j)^q.
    cubic_frob_matrix: [[u32; 3]; 3],
    cubic_frob: Vec<u32>,
    /// (b, c) with ω² + b·ω + c = 0, both cubic-level raws.
    sextic_modulus: [u32; 2],
    /// ω^q as a sextic raw.
    omega_q: u32,
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors of `n`.
pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Multiply two GF(p)[x] residues modulo a monic polynomial of degree `e`.
fn poly_mulmod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let e = modulus.len();
    let mut prod = vec![0u32; 2 * e];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai * bj) % p;
        }
    }
    for k in (e..2 * e).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        prod[k] = 0;
        // x^e = -(m0 + m1 x + ... )
        for (j, &m) in modulus.iter().enumerate() {
            let idx = k - e + j;
            prod[idx] = (prod[idx] + (p - c) * m) % p;
        }
    }
    prod.truncate(e);
    prod
}

fn digits(mut raw: u32, radix: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(raw % radix);
        raw /= radix;
    }
    out
}

fn undigits(ds: &[u32], radix: u32) -> u32 {
    ds.iter().rev().fold(0, |acc, &d| acc * radix + d)
}

/// First primitive monic polynomial of degree `e` over GF(p), in
/// lexicographic order of its low-to-high coefficient vector.
fn find_base_modulus(p: u32, e: u32) -> Vec<u32> {
    let e = e as usize;
    let q = p.pow(e as u32);
    for code in 1..q {
        let modulus = digits(code, p, e);
        if modulus[0] == 0 {
            continue;
        }
        // x reduced modulo the polynomial
        let x = if e == 1 {
            vec![(p - modulus[0]) % p]
        } else {
            let mut v = vec![0; e];
            v[1] = 1;
            v
        };
        let mut one = vec![0; e];
        one[0] = 1;
        let mut acc = x.clone();
        let mut order = 1u32;
        while acc != one && order < q {
            acc = poly_mulmod(&acc, &x, &modulus, p);
            order += 1;
        }
        if acc == one && order == q - 1 {
            return modulus;
        }
    }
    unreachable!("every finite field has a primitive polynomial")
}

impl FieldTower {
    /// Build the tower for q = p^e with cubic modulus x³ − t2·x² − t1·x − t0.
    ///
    /// The `ts` are base-level raws (for e = 1, plain residues mod p).
    pub fn new(p: u32, e: u32, ts: [u32; 3]) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let q64 = (p as u64).checked_pow(e).unwrap_or(u64::MAX);
        if e == 0 || q64 > MAX_Q as u64 {
            return Err(Error::UnsupportedField(q64));
        }
        let q = q64 as u32;
        if ts.iter().any(|&t| t >= q) {
            return Err(Error::Parse {
                text: format!("{ts:?}"),
                reason: format!("modulus coefficients must be base-field raws below {q}"),
            });
        }

        let base_modulus = find_base_modulus(p, e);
        let qs = q as usize;
        let mut base_add = vec![0; qs * qs];
        let mut base_mul = vec![0; qs * qs];
        for a in 0..q {
            let da = digits(a, p, e as usize);
            for b in 0..q {
                let db = digits(b, p, e as usize);
                let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                base_add[(a * q + b) as usize] = undigits(&sum, p);
                base_mul[(a * q + b) as usize] =
                    undigits(&poly_mulmod(&da, &db, &base_modulus, p), p);
            }
        }
        let mut base_neg = vec![0; qs];
        let mut base_inv = vec![0; qs];
        for a in 0..q {
            for b in 0..q {
                if base_add[(a * q + b) as usize] == 0 {
                    base_neg[a as usize] = b;
                }
                if base_mul[(a * q + b) as usize] == 1 {
                    base_inv[a as usize] = b;
                }
            }
        }

        let mut tower = FieldTower {
            p,
            e,
            q,
            base_modulus,
            base_add,
            base_mul,
            base_neg,
            base_inv,
            cubic_modulus: ts,
            cubic_exp: Vec::new(),
            cubic_log: Vec::new(),
            cubic_frob_matrix: [[0; 3]; 3],
            cubic_frob: Vec::new(),
            sextic_modulus: [0, 0],
            omega_q: 0,
        };

        // x³ − t2x² − t1x − t0 has no root in GF(q) ⇔ irreducible (degree 3).
        for r in 0..q {
            let r2 = tower.bmul(r, r);
            let r3 = tower.bmul(r2, r);
            let rhs = tower.badd(
                tower.badd(tower.bmul(ts[2], r2), tower.bmul(ts[1], r)),
                ts[0],
            );
            if r3 == rhs {
                return Err(Error::ReducibleModulus);
            }
        }

        // Powers of τ; primitivity is part of the contract.
        let group = q * q * q - 1;
        let tau = q;
        let mut exp = Vec::with_capacity(group as usize);
        let mut acc = 1u32;
        loop {
            exp.push(acc);
            acc = tower.cubic_mul_slow(acc, tau);
            if acc == 1 {
                break;
            }
        }
        if exp.len() as u32 != group {
            return Err(Error::NotPrimitive {
                order: exp.len() as u64,
                expected: group as u64,
            });
        }
        let mut log = vec![0u32; (group + 1) as usize];
        for (i, &x) in exp.iter().enumerate() {
            log[x as usize] = i as u32;
        }
        tower.cubic_exp = exp;
        tower.cubic_log = log;

        for j in 0..3u32 {
            let img = tower.cubic_exp[((j * q) % group) as usize];
            let col = digits(img, q, 3);
            for (i, &c) in col.iter().enumerate() {
                tower.cubic_frob_matrix[i][j as usize] = c;
            }
        }
        tower.cubic_frob = (0..=group).map(|x| tower.cubic_frob_linear(x)).collect();

        tower.sextic_modulus = tower.find_sextic_modulus()?;
        tower.omega_q = tower.sextic_pow(q * q * q, q as u64);
        Ok(tower)
    }

    /// The first primitive cubic (in lexicographic order of `(t0, t1, t2)`
    /// raws) for the given p, e.
    pub fn with_default_modulus(p: u32, e: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let q = (p as u64).checked_pow(e).unwrap_or(u64::MAX);
        if e == 0 || q > MAX_Q as u64 {
            return Err(Error::UnsupportedField(q));
        }
        let q = q as u32;
        for code in 0..q * q * q {
            let ts = [code % q, (code / q) % q, code / (q * q)];
            match FieldTower::new(p, e, ts) {
                Ok(t) => return Ok(t),
                Err(Error::ReducibleModulus) | Err(Error::NotPrimitive { .. }) => continue,
                Err(other) => return Err(other),
            }
        }
        unreachable!("a primitive cubic always exists")
    }

    /// Build the default tower for a prime power q.
    pub fn for_order(q: u32) -> Result<Self> {
        let (p, e) = split_prime_power(q).ok_or(Error::UnsupportedField(q as u64))?;
        FieldTower::with_default_modulus(p, e)
    }

    fn find_sextic_modulus(&self) -> Result<[u32; 2]> {
        let cubic = self.field(Level::Cubic);
        let big_q = cubic.size();
        for b in 0..big_q {
            'c: for c in 0..big_q {
                for r in 0..big_q {
                    let v = cubic.add(cubic.add(cubic.mul(r, r), cubic.mul(b, r)), c);
                    if v == 0 {
                        continue 'c;
                    }
                }
                return Ok([b, c]);
            }
        }
        Err(Error::NoSexticModulus)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn cubic_modulus(&self) -> [u32; 3] {
        self.cubic_modulus
    }

    pub fn sextic_modulus(&self) -> [u32; 2] {
        self.sextic_modulus
    }

    pub fn base_modulus(&self) -> &[u32] {
        &self.base_modulus
    }

    /// The residue class of x in GF(q³).
    pub fn tau(&self) -> FieldElem {
        FieldElem::new(Level::Cubic, self.q)
    }

    /// Order of the field at `level`.
    pub fn order(&self, level: Level) -> u32 {
        self.q.pow(level.degree())
    }

    /// Arithmetic view of one level.
    pub fn field(&self, level: Level) -> LevelField<'_> {
        LevelField { tower: self, level }
    }

    /// "t0,t1,t2" with base elements in text encoding.
    pub fn modulus_string(&self) -> String {
        self.cubic_modulus
            .iter()
            .map(|&t| self.format_raw(Level::Base, t))
            .collect::<Vec<_>>()
            .join(",")
    }

    /// "b,c" for ω² + bω + c.
    pub fn sextic_modulus_string(&self) -> String {
        self.sextic_modulus
            .iter()
            .map(|&t| self.format_raw(Level::Cubic, t))
            .collect::<Vec<_>>()
            .join(",")
    }

    // ---- base level ----

    #[inline]
    pub(crate) fn badd(&self, a: u32, b: u32) -> u32 {
        self.base_add[(a * self.q + b) as usize]
    }

    #[inline]
    pub(crate) fn bmul(&self, a: u32, b: u32) -> u32 {
        self.base_mul[(a * self.q + b) as usize]
    }

    #[inline]
    fn bneg(&self, a: u32) -> u32 {
        self.base_neg[a as usize]
    }

    // ---- cubic level ----

    fn cubic_mul_slow(&self, a: u32, b: u32) -> u32 {
        let q = self.q;
        let da = digits(a, q, 3);
        let db = digits(b, q, 3);
        let mut c = [0u32; 5];
        for i in 0..3 {
            for j in 0..3 {
                c[i + j] = self.badd(c[i + j], self.bmul(da[i], db[j]));
            }
        }
        let [t0, t1, t2] = self.cubic_modulus;
        // τ⁴ = t0τ + t1τ² + t2τ³, then τ³ = t0 + t1τ + t2τ².
        let c4 = c[4];
        c[1] = self.badd(c[1], self.bmul(c4, t0));
        c[2] = self.badd(c[2], self.bmul(c4, t1));
        c[3] = self.badd(c[3], self.bmul(c4, t2));
        let c3 = c[3];
        c[0] = self.badd(c[0], self.bmul(c3, t0));
        c[1] = self.badd(c[1], self.bmul(c3, t1));
        c[2] = self.badd(c[2], self.bmul(c3, t2));
        undigits(&c[..3], q)
    }

    fn cubic_frob_linear(&self, x: u32) -> u32 {
        let q = self.q;
        let d = digits(x, q, 3);
        let mut out = [0u32; 3];
        for (i, o) in out.iter_mut().enumerate() {
            for (j, &dj) in d.iter().enumerate() {
                *o = self.badd(*o, self.bmul(self.cubic_frob_matrix[i][j], dj));
            }
        }
        undigits(&out, q)
    }

    #[inline]
    fn cadd(&self, a: u32, b: u32) -> u32 {
        let q = self.q;
        let (a0, a1, a2) = (a % q, (a / q) % q, a / (q * q));
        let (b0, b1, b2) = (b % q, (b / q) % q, b / (q * q));
        self.badd(a0, b0) + q * (self.badd(a1, b1) + q * self.badd(a2, b2))
    }

    #[inline]
    fn cneg(&self, a: u32) -> u32 {
        let q = self.q;
        let (a0, a1, a2) = (a % q, (a / q) % q, a / (q * q));
        self.bneg(a0) + q * (self.bneg(a1) + q * self.bneg(a2))
    }

    #[inline]
    fn cmul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let group = self.cubic_exp.len();
        let s = self.cubic_log[a as usize] as usize + self.cubic_log[b as usize] as usize;
        self.cubic_exp[s % group]
    }

    #[inline]
    fn cinv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero");
        let group = self.cubic_exp.len();
        let l = self.cubic_log[a as usize] as usize;
        self.cubic_exp[(group - l) % group]
    }

    // ---- sextic level ----

    #[inline]
    fn split6(&self, a: u32) -> (u32, u32) {
        let big = self.q * self.q * self.q;
        (a % big, a / big)
    }

    #[inline]
    fn join6(&self, a0: u32, a1: u32) -> u32 {
        a0 + a1 * self.q * self.q * self.q
    }

    fn sadd(&self, a: u32, b: u32) -> u32 {
        let (a0, a1) = self.split6(a);
        let (b0, b1) = self.split6(b);
        self.join6(self.cadd(a0, b0), self.cadd(a1, b1))
    }

    fn sneg(&self, a: u32) -> u32 {
        let (a0, a1) = self.split6(a);
        self.join6(self.cneg(a0), self.cneg(a1))
    }

    fn smul(&self, a: u32, b: u32) -> u32 {
        let (a0, a1) = self.split6(a);
        let (b0, b1) = self.split6(b);
        let [mb, mc] = self.sextic_modulus;
        // ω² = −bω − c
        let hi = self.cmul(a1, b1);
        let lo = self.cadd(self.cmul(a0, b0), self.cneg(self.cmul(mc, hi)));
        let mid = self.cadd(
            self.cadd(self.cmul(a0, b1), self.cmul(a1, b0)),
            self.cneg(self.cmul(mb, hi)),
        );
        self.join6(lo, mid)
    }

    fn sinv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero");
        let (a0, a1) = self.split6(a);
        let [mb, mc] = self.sextic_modulus;
        // conjugate a0 + a1ω^{q³} with ω^{q³} = −b − ω
        let conj = self.join6(self.cadd(a0, self.cneg(self.cmul(mb, a1))), self.cneg(a1));
        let norm = self.cadd(
            self.cadd(
                self.cmul(a0, a0),
                self.cneg(self.cmul(mb, self.cmul(a0, a1))),
            ),
            self.cmul(mc, self.cmul(a1, a1)),
        );
        let ninv = self.cinv(norm);
        self.smul(conj, ninv)
    }

    fn sextic_pow(&self, x: u32, mut n: u64) -> u32 {
        let mut base = x;
        let mut acc = 1;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.smul(acc, base);
            }
            base = self.smul(base, base);
            n >>= 1;
        }
        acc
    }

    fn sfrob(&self, a: u32) -> u32 {
        let (a0, a1) = self.split6(a);
        let f0 = self.cubic_frob[a0 as usize];
        let f1 = self.cubic_frob[a1 as usize];
        self.sadd(f0, self.smul(f1, self.omega_q))
    }

    // ---- element-level API ----

    /// x^(q^k), applying the precomputed GF(q)-linear Frobenius map k times.
    /// On the base level Frobenius is the identity and x is returned as is.
    pub fn frobenius_power(&self, x: FieldElem, k: u32) -> FieldElem {
        FieldElem::new(x.level, self.field(x.level).frob(x.raw, k))
    }

    /// Least n > 0 with xⁿ = 1, found by factoring the group order.
    pub fn element_order(&self, x: FieldElem) -> Result<u64> {
        if x.raw == 0 {
            return Err(Error::ZeroElement);
        }
        let f = self.field(x.level);
        let mut order = f.size() as u64 - 1;
        for r in prime_factors(order) {
            while order.is_multiple_of(r) && f.pow(x.raw, order / r) == 1 {
                order /= r;
            }
        }
        Ok(order)
    }

    pub fn embed(&self, x: FieldElem, target: Level) -> Result<FieldElem> {
        if target < x.level {
            return Err(Error::LevelMismatch {
                expected: x.level,
                found: target,
            });
        }
        Ok(FieldElem::new(target, x.raw))
    }

    pub fn try_descend(&self, x: FieldElem, target: Level) -> Result<FieldElem> {
        if target > x.level {
            return Err(Error::LevelMismatch {
                expected: x.level,
                found: target,
            });
        }
        if x.raw < self.order(target) {
            Ok(FieldElem::new(target, x.raw))
        } else {
            Err(Error::NotInSubfield(target))
        }
    }

    /// Coefficients over the next-lower level (GF(p) digits for the base).
    pub fn coeffs(&self, x: FieldElem) -> Vec<u32> {
        match x.level {
            Level::Base => digits(x.raw, self.p, self.e as usize),
            Level::Cubic => digits(x.raw, self.q, 3),
            Level::Sextic => {
                let (a0, a1) = self.split6(x.raw);
                vec![a0, a1]
            }
        }
    }

    pub fn from_coeffs(&self, level: Level, cs: &[u32]) -> Result<FieldElem> {
        let (radix, len) = match level {
            Level::Base => (self.p, self.e as usize),
            Level::Cubic => (self.q, 3),
            Level::Sextic => (self.q * self.q * self.q, 2),
        };
        if cs.len() != len || cs.iter().any(|&c| c >= radix) {
            return Err(Error::Parse {
                text: format!("{cs:?}"),
                reason: format!("expected {len} coefficients below {radix}"),
            });
        }
        Ok(FieldElem::new(level, undigits(cs, radix)))
    }

    /// Text encoding: bracketed little-endian coefficient lists per level.
    /// Prime-field base elements (e = 1) print as plain integers.
    pub fn format_raw(&self, level: Level, raw: u32) -> String {
        match level {
            Level::Base => {
                if self.e == 1 {
                    raw.to_string()
                } else {
                    let ds = digits(raw, self.p, self.e as usize);
                    format!(
                        "[{}]",
                        ds.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
                    )
                }
            }
            Level::Cubic => {
                let ds = digits(raw, self.q, 3);
                format!(
                    "[{}]",
                    ds.iter()
                        .map(|&d| self.format_raw(Level::Base, d))
                        .collect::<Vec<_>>()
                        .join(",")
                )
            }
            Level::Sextic => {
                let (a0, a1) = self.split6(raw);
                format!(
                    "[{},{}]",
                    self.format_raw(Level::Cubic, a0),
                    self.format_raw(Level::Cubic, a1)
                )
            }
        }
    }

    pub fn format_elem(&self, x: FieldElem) -> String {
        self.format_raw(x.level, x.raw)
    }

    /// Parse an element at `level`. A bare integer is read as an element of
    /// the prime field; a bracketed list gives coefficients over the
    /// next-lower level.
    pub fn parse_elem(&self, text: &str, level: Level) -> Result<FieldElem> {
        let t = text.trim();
        let err = |reason: &str| Error::Parse {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        if let Some(inner) = t.strip_prefix('[') {
            let inner = inner
                .strip_suffix(']')
                .ok_or_else(|| err("unbalanced brackets"))?;
            let parts = split_top_level(inner, ',');
            let (sub, len) = match level {
                Level::Base => {
                    let ds: Vec<u32> = parts
                        .iter()
                        .map(|s| parse_int_mod(s, self.p))
                        .collect::<Option<_>>()
                        .ok_or_else(|| err("bad GF(p) digit"))?;
                    return self.from_coeffs(Level::Base, &ds);
                }
                Level::Cubic => (Level::Base, 3),
                Level::Sextic => (Level::Cubic, 2),
            };
            if parts.len() != len {
                return Err(err(&format!("expected {len} coefficients")));
            }
            let cs = parts
                .iter()
                .map(|s| self.parse_elem(s, sub).map(|x| x.raw))
                .collect::<Result<Vec<_>>>()?;
            self.from_coeffs(level, &cs)
        } else {
            let v = parse_int_mod(t, self.p).ok_or_else(|| err("expected integer or list"))?;
            Ok(FieldElem::new(level, v))
        }
    }
}

fn parse_int_mod(s: &str, p: u32) -> Option<u32> {
    let v: i64 = s.trim().parse().ok()?;
    Some(v.rem_euclid(p as i64) as u32)
}

/// Split on `sep` outside of square brackets.
pub(crate) fn split_top_level(s: &str, sep: char) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '[' => depth += 1,
            ']' => depth -= 1,
            _ => {}
        }
        if ch == sep && depth == 0 {
            out.push(std::mem::take(&mut cur));
        } else {
            cur.push(ch);
        }
    }
    if !cur.trim().is_empty() || !out.is_empty() {
        out.push(cur);
    }
    out
}

/// (p, e) with q = p^e, if q is a prime power.
pub fn split_prime_power(q: u32) -> Option<(u32, u32)> {
    let fs = prime_factors(q as u64);
    if fs.len() != 1 {
        return None;
    }
    let p = fs[0] as u32;
    let mut e = 0;
    let mut r = q;
    while r > 1 {
        r /= p;
        e += 1;
    }
    Some((p, e))
}

impl fmt::Display for FieldTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GF({}) ⊂ GF({}^3) ⊂ GF({}^6), cubic modulus t=({}), sextic modulus ({})",
            self.q,
            self.q,
            self.q,
            self.modulus_string(),
            self.sextic_modulus_string()
        )
    }
}

/// Raw arithmetic at one level of a tower.
#[derive(Clone, Copy)]
pub struct LevelField<'a> {
    tower: &'a FieldTower,
    level: Level,
}

impl<'a> LevelField<'a> {
    pub fn tower(&self) -> &'a FieldTower {
        self.tower
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn size(&self) -> u32 {
        self.tower.order(self.level)
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        match self.level {
            Level::Base => self.tower.badd(a, b),
            Level::Cubic => self.tower.cadd(a, b),
            Level::Sextic => self.tower.sadd(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        match self.level {
            Level::Base => self.tower.bneg(a),
            Level::Cubic => self.tower.cneg(a),
            Level::Sextic => self.tower.sneg(a),
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match self.level {
            Level::Base => self.tower.bmul(a, b),
            Level::Cubic => self.tower.cmul(a, b),
            Level::Sextic => self.tower.smul(a, b),
        }
    }

    /// Multiplicative inverse. Panics on zero.
    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero");
        match self.level {
            Level::Base => self.tower.base_inv[a as usize],
            Level::Cubic => self.tower.cinv(a),
            Level::Sextic => self.tower.sinv(a),
        }
    }

    #[inline]
    pub fn div(&self, a: u32, b: u32) -> u32 {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, x: u32, mut n: u64) -> u32 {
        let mut base = x;
        let mut acc = 1;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    /// x^(q^k).
    pub fn frob(&self, x: u32, k: u32) -> u32 {
        match self.level {
            Level::Base => x,
            Level::Cubic => {
                let mut y = x;
                for _ in 0..k % 3 {
                    y = self.tower.cubic_frob[y as usize];
                }
                y
            }
            Level::Sextic => {
                let mut y = x;
                for _ in 0..k % 6 {
                    y = self.tower.sfrob(y);
                }
                y
            }
        }
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, v: i64) -> u32 {
        v.rem_euclid(self.tower.p as i64) as u32
    }

    pub fn elements(&self) -> std::ops::Range<u32> {
        0..self.size()
    }
}
