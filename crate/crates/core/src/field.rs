//! Arithmetic in GF(p^e) for small orders.
//!
//! Elements are plain integers in `[0, q)`: the base-p digits of an element
//! are the coefficients of its polynomial representative, lowest degree
//! first. Multiplication goes through log/antilog tables built once at
//! construction.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Integer encoding of a field element.
pub type Elem = u32;

/// Default upper bound on the field order.
pub const DEFAULT_MAX_ORDER: u64 = 1 << 16;

struct Inner {
    p: u32,
    e: u32,
    q: u32,
    /// Monic modulus, coefficients lowest degree first (length e + 1).
    modulus: Option<Vec<u32>>,
    generator: Elem,
    /// `exp[i] = g^i`, stored twice over so `log a + log b` never wraps.
    exp: Vec<Elem>,
    log: Vec<u32>,
}

/// A finite field GF(p^e). Cloning is cheap; all clones share the tables.
#[derive(Clone)]
pub struct FieldSpec(Arc<Inner>);

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.e == other.0.e
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.modulus {
            None => write!(f, "GF({})", self.0.q),
            Some(m) => write!(f, "GF({}^{}) mod {:?}", self.0.p, self.0.e, m),
        }
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u32) -> Vec<u32> {
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

/// Polynomials over F_p as coefficient vectors, lowest degree first.
mod poly {
    pub fn trim(a: &mut Vec<u32>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    /// Remainder of `a` modulo the monic polynomial `m`.
    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        while r.len() > dm {
            let lead = *r.last().unwrap();
            let shift = r.len() - 1 - dm;
            for (i, &c) in m.iter().enumerate() {
                let sub = (lead as u64 * c as u64 % p as u64) as u32;
                r[shift + i] = (r[shift + i] + p - sub) % p;
            }
            trim(&mut r);
        }
        r
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u32; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = ((out[i + j] as u64 + x as u64 * y as u64) % p as u64) as u32;
            }
        }
        trim(&mut out);
        out
    }

    /// Monic polynomial of degree `deg` whose lower coefficients are the
    /// base-p digits of `index`.
    pub fn monic(deg: u32, index: u64, p: u32) -> Vec<u32> {
        let mut c = Vec::with_capacity(deg as usize + 1);
        let mut x = index;
        for _ in 0..deg {
            c.push((x % p as u64) as u32);
            x /= p as u64;
        }
        c.push(1);
        c
    }

    /// Irreducibility by trial division over every monic of degree 1..=deg/2.
    pub fn is_irreducible(f: &[u32], p: u32) -> bool {
        let deg = (f.len() - 1) as u32;
        if deg <= 1 {
            return deg == 1;
        }
        for d in 1..=deg / 2 {
            for idx in 0..(p as u64).pow(d) {
                let g = monic(d, idx, p);
                if rem(f, &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }
}

impl FieldSpec {
    /// GF(p^e) with the default order limit.
    pub fn new(p: u32, e: u32) -> Result<Self> {
        Self::with_limit(p, e, DEFAULT_MAX_ORDER)
    }

    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, 1)
    }

    /// GF(p^e), refusing orders above `limit`. The modulus is the monic
    /// irreducible of degree e whose base-p encoding (lowest coefficient as
    /// least significant digit) is smallest.
    pub fn with_limit(p: u32, e: u32, limit: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 {
            return Err(Error::ZeroDegree);
        }
        let q = (p as u64).checked_pow(e).filter(|&q| q <= limit && q <= u32::MAX as u64);
        let q = q.ok_or(Error::FieldTooLarge { p, e, limit })? as u32;

        let modulus = if e == 1 {
            None
        } else {
            let f = (0..(p as u64).pow(e))
                .map(|idx| poly::monic(e, idx, p))
                .find(|f| f[0] != 0 && poly::is_irreducible(f, p))
                .expect("an irreducible polynomial exists in every degree");
            Some(f)
        };

        let mut inner = Inner { p, e, q, modulus, generator: 0, exp: Vec::new(), log: Vec::new() };
        let order = q - 1;
        let factors = prime_factors(order);
        let generator = (1..q)
            .find(|&g| {
                order == 1 || factors.iter().all(|&r| slow_pow(&inner, g, (order / r) as u64) != 1)
            })
            .expect("the multiplicative group is cyclic");
        let mut exp = vec![0; 2 * order as usize];
        let mut log = vec![0; q as usize];
        let mut x = 1;
        for i in 0..order as usize {
            exp[i] = x;
            exp[i + order as usize] = x;
            log[x as usize] = i as u32;
            x = slow_mul(&inner, x, generator);
        }
        inner.generator = generator;
        inner.exp = exp;
        inner.log = log;
        Ok(FieldSpec(Arc::new(inner)))
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn e(&self) -> u32 {
        self.0.e
    }

    pub fn q(&self) -> u32 {
        self.0.q
    }

    /// Coefficients of the modulus, lowest degree first; `None` for prime fields.
    pub fn modulus(&self) -> Option<&[u32]> {
        self.0.modulus.as_deref()
    }

    /// The primitive element used for the log tables.
    pub fn generator(&self) -> Elem {
        self.0.generator
    }

    pub fn contains(&self, a: Elem) -> bool {
        a < self.0.q
    }

    pub fn check(&self, a: Elem) -> Result<Elem> {
        if self.contains(a) {
            Ok(a)
        } else {
            Err(Error::InvalidElement { value: a, q: self.0.q })
        }
    }

    /// Base-p digits of `a`, lowest degree first, length e.
    pub fn digits(&self, a: Elem) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.0.e as usize);
        let mut x = a;
        for _ in 0..self.0.e {
            out.push(x % self.0.p);
            x /= self.0.p;
        }
        out
    }

    pub fn from_digits(&self, digits: &[u32]) -> Elem {
        digits.iter().rev().fold(0, |acc, &d| acc * self.0.p + d)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let p = self.0.p;
        if p == 2 {
            a ^ b
        } else if self.0.e == 1 {
            (a + b) % p
        } else {
            let (mut x, mut y, mut out, mut place) = (a, b, 0, 1);
            while x > 0 || y > 0 {
                out += ((x % p + y % p) % p) * place;
                x /= p;
                y /= p;
                place *= p;
            }
            out
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        let p = self.0.p;
        if p == 2 {
            a
        } else if self.0.e == 1 {
            (p - a) % p
        } else {
            let (mut x, mut out, mut place) = (a, 0, 1);
            while x > 0 {
                out += ((p - x % p) % p) * place;
                x /= p;
                place *= p;
            }
            out
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        let inner = &*self.0;
        inner.exp[(inner.log[a as usize] + inner.log[b as usize]) as usize]
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        let inner = &*self.0;
        let order = inner.q - 1;
        Ok(inner.exp[((order - inner.log[a as usize]) % order) as usize])
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Elem, k: u64) -> Elem {
        if k == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let inner = &*self.0;
        let order = (inner.q - 1) as u64;
        let l = inner.log[a as usize] as u64 * (k % order) % order;
        inner.exp[l as usize]
    }

    /// Table-free product by polynomial multiplication modulo the modulus.
    pub fn mul_polynomial(&self, a: Elem, b: Elem) -> Elem {
        slow_mul(&self.0, a, b)
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.0.q
    }
}

fn slow_mul(inner: &Inner, a: Elem, b: Elem) -> Elem {
    let p = inner.p;
    match &inner.modulus {
        None => ((a as u64 * b as u64) % p as u64) as u32,
        Some(m) => {
            let digits = |mut x: u32| {
                let mut d = Vec::new();
                while x > 0 {
                    d.push(x % p);
                    x /= p;
                }
                d
            };
            let prod = poly::mul(&digits(a), &digits(b), p);
            poly::rem(&prod, m, p).iter().rev().fold(0, |acc, &c| acc * p + c)
        }
    }
}

fn slow_pow(inner: &Inner, a: Elem, mut k: u64) -> Elem {
    let (mut base, mut acc) = (a, 1);
    while k > 0 {
        if k & 1 == 1 {
            acc = slow_mul(inner, acc, base);
        }
        base = slow_mul(inner, base, base);
        k >>= 1;
    }
    acc
}
