//! Arithmetic in GF(p^k) for odd primes p.
//!
//! Elements are stored as their base-p packed coefficient index: the
//! polynomial `c_0 + c_1 x + ... + c_{k-1} x^{k-1}` has index
//! `sum c_i p^i`. Index 0 is zero and index 1 is one in every field.
//!
//! Prime fields use plain modular arithmetic. Extension fields use
//! log/antilog tables built from a primitive element; addition is done
//! digit-wise. Fields with at most 256 elements additionally carry full
//! addition and multiplication tables.

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 16;

const FULL_TABLE_LIMIT: u32 = 256;

#[derive(Debug, Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FieldElem(u16);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    #[inline]
    pub fn index(self) -> u32 {
        self.0 as u32
    }

    #[inline]
    pub(crate) fn from_index(index: u32) -> FieldElem {
        FieldElem(index as u16)
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl std::fmt::Display for FieldElem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A finite field of odd characteristic together with its arithmetic tables.
///
/// Immutable after construction.
#[derive(Debug, Clone)]
pub struct FieldSpec {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    exp: Vec<u16>,
    log: Vec<u32>,
    add_table: Option<Vec<u16>>,
    mul_table: Option<Vec<u16>>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

fn is_prime(n: u64) -> bool {
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

fn prime_factors(mut n: u64) -> Vec<u64> {
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

/// Remainder of `a` modulo `b` over GF(p); coefficients low-degree first,
/// `b` nonzero with a nonzero leading coefficient.
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead_inv = mod_inv(b[db], p);
    while r.len() > db {
        let lead = *r.last().unwrap();
        if lead != 0 {
            let c = (lead as u64 * lead_inv as u64 % p as u64) as u32;
            let shift = r.len() - 1 - db;
            for (i, &bi) in b.iter().enumerate() {
                let sub = (c as u64 * bi as u64 % p as u64) as u32;
                r[shift + i] = (r[shift + i] + p - sub) % p;
            }
        }
        r.pop();
    }
    r
}

fn mod_inv(a: u32, p: u32) -> u32 {
    // a^(p-2) mod p
    let (mut base, mut e, mut acc) = (a as u64 % p as u64, p as u64 - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

/// Trial-division irreducibility test for a monic polynomial over GF(p).
fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    for d in 1..=deg / 2 {
        // all monic polynomials of degree d
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut g = digits(idx, p, d);
            g.push(1);
            if poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn digits(mut idx: u64, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push((idx % p as u64) as u32);
        idx /= p as u64;
    }
    out
}

fn pack(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
}

impl FieldSpec {
    /// Builds GF(p^k). For k > 1 the modulus is the lexicographically smallest
    /// monic irreducible polynomial of degree k, comparing coefficients
    /// low-degree first.
    pub fn new(p: u64, k: u32) -> Result<FieldSpec> {
        if k == 0 {
            return Err(Error::InvalidParams("extension degree must be at least 1".into()));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p == 2 {
            return Err(Error::EvenCharacteristic);
        }
        let q = p
            .checked_pow(k)
            .filter(|&q| q <= MAX_ORDER)
            .ok_or(Error::FieldTooLarge(p.saturating_pow(k)))?;
        let (p, q) = (p as u32, q as u32);

        let modulus = if k == 1 {
            vec![0, 1]
        } else {
            find_modulus(p, k as usize).ok_or(Error::NoIrreducible { p: p as u64, degree: k })?
        };

        let mut field = FieldSpec {
            p,
            k,
            q,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
            add_table: None,
            mul_table: None,
        };
        if k > 1 {
            field.build_log_tables()?;
        }
        if q <= FULL_TABLE_LIMIT {
            field.build_full_tables();
        }
        Ok(field)
    }

    /// Parses `p` or `p^k`.
    pub fn parse(spec: &str) -> Result<FieldSpec> {
        let spec = spec.trim();
        let (p, k) = match spec.split_once('^') {
            Some((p, k)) => (p.trim(), k.trim()),
            None => (spec, "1"),
        };
        let p: u64 = p.parse().map_err(|_| Error::Parse(format!("bad field order '{spec}'")))?;
        let k: u32 = k.parse().map_err(|_| Error::Parse(format!("bad field order '{spec}'")))?;
        FieldSpec::new(p, k)
    }

    fn build_log_tables(&mut self) -> Result<()> {
        let order = (self.q - 1) as u64;
        let factors = prime_factors(order);
        let generator = (2..self.q)
            .find(|&g| factors.iter().all(|&l| self.slow_pow(g, order / l) != 1))
            .ok_or(Error::NoIrreducible { p: self.p as u64, degree: self.k })?;
        let n = self.q as usize - 1;
        let mut exp = vec![0u16; 2 * n];
        let mut log = vec![0u32; self.q as usize];
        let mut x = 1u32;
        for i in 0..n {
            exp[i] = x as u16;
            exp[i + n] = x as u16;
            log[x as usize] = i as u32;
            x = self.slow_mul(x, generator);
        }
        debug_assert_eq!(x, 1);
        self.exp = exp;
        self.log = log;
        Ok(())
    }

    fn build_full_tables(&mut self) {
        let q = self.q as usize;
        let mut add = vec![0u16; q * q];
        let mut mul = vec![0u16; q * q];
        for a in 0..q {
            for b in 0..q {
                add[a * q + b] = self.add_raw(a as u32, b as u32) as u16;
                mul[a * q + b] = self.mul_raw(a as u32, b as u32) as u16;
            }
        }
        self.add_table = Some(add);
        self.mul_table = Some(mul);
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let k = self.k as usize;
        let (da, db) = (digits(a as u64, self.p, k), digits(b as u64, self.p, k));
        let mut prod = vec![0u32; 2 * k - 1];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % self.p as u64) as u32;
            }
        }
        pack(&poly_rem(&prod, &self.modulus, self.p), self.p)
    }

    fn slow_pow(&self, a: u32, mut e: u64) -> u32 {
        let (mut base, mut acc) = (a, 1u32);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.slow_mul(acc, base);
            }
            base = self.slow_mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn add_raw(&self, a: u32, b: u32) -> u32 {
        if self.k == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
        while a > 0 || b > 0 {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    fn mul_raw(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        if self.k == 1 {
            return (a as u64 * b as u64 % self.p as u64) as u32;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize] as u32
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Modulus coefficients, low degree first. `[0, 1]` for prime fields.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Human-readable modulus, e.g. `x^2 + 1`.
    pub fn modulus_string(&self) -> String {
        if self.k == 1 {
            return format!("x (prime field GF({}))", self.p);
        }
        let mut terms = Vec::new();
        for (i, &c) in self.modulus.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let coef = if c == 1 && i > 0 { String::new() } else { c.to_string() };
            terms.push(match i {
                0 => coef,
                1 => format!("{coef}x"),
                _ => format!("{coef}x^{i}"),
            });
        }
        terms.join(" + ")
    }

    pub fn elem(&self, index: u32) -> Result<FieldElem> {
        if index < self.q {
            Ok(FieldElem(index as u16))
        } else {
            Err(Error::InvalidParams(format!("element index {index} not below q = {}", self.q)))
        }
    }

    /// Image of an integer under the canonical map Z -> GF(p) -> GF(q).
    pub fn from_int(&self, n: i64) -> FieldElem {
        FieldElem(n.rem_euclid(self.p as i64) as u16)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.q).map(|i| FieldElem(i as u16))
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        debug_assert!(a.index() < self.q && b.index() < self.q);
        match &self.add_table {
            Some(t) => FieldElem(t[a.0 as usize * self.q as usize + b.0 as usize]),
            None => FieldElem(self.add_raw(a.index(), b.index()) as u16),
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        if self.k == 1 {
            return FieldElem(((self.p - a.index()) % self.p) as u16);
        }
        let (mut a, mut out, mut place) = (a.index(), 0, 1);
        while a > 0 {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        FieldElem(out as u16)
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        debug_assert!(a.index() < self.q && b.index() < self.q);
        match &self.mul_table {
            Some(t) => FieldElem(t[a.0 as usize * self.q as usize + b.0 as usize]),
            None => FieldElem(self.mul_raw(a.index(), b.index()) as u16),
        }
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.k == 1 {
            return Ok(FieldElem(mod_inv(a.index(), self.p) as u16));
        }
        let n = self.q - 1;
        Ok(FieldElem(self.exp[((n - self.log[a.0 as usize]) % n) as usize]))
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElem, mut e: u64) -> FieldElem {
        let (mut base, mut acc) = (a, FieldElem::ONE);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}

fn find_modulus(p: u32, k: usize) -> Option<Vec<u32>> {
    let count = (p as u64).pow(k as u32);
    // Enumerate (c_0, ..., c_{k-1}) with c_0 most significant.
    (0..count).find_map(|idx| {
        let mut coeffs = digits(idx, p, k);
        coeffs.reverse();
        coeffs.push(1);
        is_irreducible(&coeffs, p).then_some(coeffs)
    })
}
