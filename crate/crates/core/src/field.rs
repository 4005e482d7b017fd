//! Exact arithmetic in GF(p^h) and in extensions GF(q^m).
//!
//! Elements are addressed by their index in the enumeration order: the
//! coefficient vector `(c_0, .., c_{h-1})` of the polynomial-basis
//! representation read as a base-`p` number with `c_0` as the least
//! significant digit. Index 0 is zero, index 1 is one and the prime
//! subfield occupies indices `0..p`.
//!
//! Multiplication goes through log/antilog tables built once at
//! construction; addition uses XOR (p = 2), modular addition (h = 1), a
//! full table (q <= 1024) or digit-wise addition otherwise.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

/// Largest supported field size.
pub const MAX_FIELD_SIZE: u64 = 1 << 20;

const ADD_TABLE_LIMIT: u32 = 1024;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not a prime power")]
    NotAPrimePower(u64),
    #[error("field size {0} exceeds the supported ceiling {MAX_FIELD_SIZE}")]
    TooLarge(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields (GF({0}) and GF({1}))")]
    FieldMismatch(u32, u32),
    #[error("all coefficients of the quadratic are zero")]
    AllZeroCoefficients,
    #[error("GF({0}) has even characteristic; every element is a square")]
    NoNonSquare(u32),
    #[error("cannot parse field element {0:?}")]
    Parse(String),
}

/// A field element, identified by its enumeration index.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Fe(pub u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// GF(q) with q = p^h.
pub struct Field {
    p: u32,
    h: u32,
    q: u32,
    /// Monic irreducible polynomial over GF(p), ascending coefficients, length h + 1.
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    add_table: Option<Vec<u32>>,
    trace: Vec<u32>,
    ext2: OnceLock<Result<Box<ExtField>, FieldError>>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.p)
            .field("h", &self.h)
            .field("q", &self.q)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q && self.modulus == other.modulus
    }
}

impl Eq for Field {}

/// Splits `q` into `(p, h)` with `q = p^h`.
pub fn prime_power(q: u64) -> Result<(u32, u32), FieldError> {
    if q < 2 {
        return Err(FieldError::NotAPrimePower(q));
    }
    let mut p = 2u64;
    while p * p <= q && q % p != 0 {
        p += 1;
    }
    if q % p != 0 {
        p = q;
    }
    let mut rest = q;
    let mut h = 0;
    while rest % p == 0 {
        rest /= p;
        h += 1;
    }
    if rest != 1 {
        return Err(FieldError::NotAPrimePower(q));
    }
    if q > MAX_FIELD_SIZE {
        return Err(FieldError::TooLarge(q));
    }
    Ok((p as u32, h))
}

// Dense polynomial helpers over GF(p), used only while building tables.
mod fp_poly {
    pub fn trim(mut a: Vec<u32>) -> Vec<u32> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    /// Remainder of `a` modulo monic `m`.
    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut r = a.to_vec();
        let dm = m.len() - 1;
        while r.len() > dm {
            let lead = *r.last().unwrap();
            let shift = r.len() - 1 - dm;
            if lead != 0 {
                for (i, &c) in m.iter().enumerate() {
                    let sub = (lead as u64 * c as u64 % p as u64) as u32;
                    r[shift + i] = (r[shift + i] + p - sub) % p;
                }
            }
            r.pop();
        }
        trim(r)
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        trim(out.into_iter().map(|c| c as u32).collect())
    }

    /// True iff the monic polynomial `m` of degree >= 1 is irreducible over GF(p),
    /// by trial division with every monic polynomial of degree <= deg(m)/2.
    pub fn is_irreducible(m: &[u32], p: u32) -> bool {
        let n = m.len() - 1;
        for d in 1..=n / 2 {
            let count = (p as u64).pow(d as u32);
            for k in 0..count {
                let mut cand = Vec::with_capacity(d + 1);
                let mut x = k;
                for _ in 0..d {
                    cand.push((x % p as u64) as u32);
                    x /= p as u64;
                }
                cand.push(1);
                if rem(m, &cand, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
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

impl Field {
    /// Builds GF(q). The modulus is the smallest monic irreducible polynomial
    /// of degree h over GF(p), comparing coefficient vectors from the
    /// constant term up.
    pub fn new(q: u64) -> Result<Field, FieldError> {
        let (p, h) = prime_power(q)?;
        let q = q as u32;
        let modulus = if h == 1 {
            vec![0, 1]
        } else {
            let total = (p as u64).pow(h);
            let mut found = None;
            for k in 0..total {
                // c_0 is the most significant digit of k.
                let mut cand = vec![0u32; h as usize + 1];
                let mut x = k;
                for i in (0..h as usize).rev() {
                    cand[i] = (x % p as u64) as u32;
                    x /= p as u64;
                }
                cand[h as usize] = 1;
                if cand[0] != 0 && fp_poly::is_irreducible(&cand, p) {
                    found = Some(cand);
                    break;
                }
            }
            found.expect("an irreducible polynomial of every degree exists")
        };

        let digits = |idx: u32| -> Vec<u32> {
            let mut v = Vec::with_capacity(h as usize);
            let mut x = idx;
            for _ in 0..h {
                v.push(x % p);
                x /= p;
            }
            fp_poly::trim(v)
        };
        let undigits = |v: &[u32]| -> u32 { v.iter().rev().fold(0u32, |acc, &c| acc * p + c) };
        let slow_mul = |a: u32, b: u32| -> u32 {
            let prod = fp_poly::mul(&digits(a), &digits(b), p);
            undigits(&fp_poly::rem(&prod, &modulus, p))
        };
        let slow_pow = |a: u32, mut e: u64| -> u32 {
            let mut base = a;
            let mut acc = 1u32;
            while e > 0 {
                if e & 1 == 1 {
                    acc = slow_mul(acc, base);
                }
                base = slow_mul(base, base);
                e >>= 1;
            }
            acc
        };

        let order = (q - 1) as u64;
        let factors = prime_factors(order);
        let generator = if q == 2 {
            1
        } else {
            (2..q)
                .find(|&g| factors.iter().all(|&r| slow_pow(g, order / r) != 1))
                .expect("the multiplicative group is cyclic")
        };

        let n = (q - 1) as usize;
        let mut exp = vec![0u32; 2 * n.max(1)];
        let mut log = vec![0u32; q as usize];
        let mut cur = 1u32;
        for i in 0..n {
            exp[i] = cur;
            log[cur as usize] = i as u32;
            cur = slow_mul(cur, generator);
        }
        for i in n..2 * n {
            exp[i] = exp[i - n];
        }

        let neg: Vec<u32> = (0..q)
            .map(|a| {
                let d: Vec<u32> = digits(a).into_iter().map(|c| (p - c) % p).collect();
                undigits(&d)
            })
            .collect();

        let mut field = Field {
            p,
            h,
            q,
            modulus,
            exp,
            log,
            neg,
            add_table: None,
            trace: Vec::new(),
            ext2: OnceLock::new(),
        };
        if p != 2 && h > 1 && q <= ADD_TABLE_LIMIT {
            let mut table = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    table[(a * q + b) as usize] = field.add_digits(Fe(a), Fe(b)).0;
                }
            }
            field.add_table = Some(table);
        }
        let trace: Vec<u32> = (0..q)
            .map(|a| {
                let mut acc = Fe::ZERO;
                let mut x = Fe(a);
                for _ in 0..h {
                    acc = field.add(acc, x);
                    x = field.pow(x, p as u64);
                }
                debug_assert!(acc.0 < p);
                acc.0
            })
            .collect();
        field.trace = trace;
        Ok(field)
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn h(&self) -> u32 {
        self.h
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    /// Ascending coefficients (over GF(p)) of the defining polynomial.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn is_odd(&self) -> bool {
        self.p != 2
    }

    /// All elements in enumeration order.
    pub fn elements(&self) -> impl Iterator<Item = Fe> + Clone {
        (0..self.q).map(Fe)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Fe> + Clone {
        (1..self.q).map(Fe)
    }

    /// Element from its enumeration index.
    pub fn elem(&self, index: u64) -> Result<Fe, FieldError> {
        if index < self.q as u64 {
            Ok(Fe(index as u32))
        } else {
            Err(FieldError::Parse(index.to_string()))
        }
    }

    /// The image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Fe {
        Fe(n.rem_euclid(self.p as i64) as u32)
    }

    fn add_digits(&self, a: Fe, b: Fe) -> Fe {
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u32;
        let mut scale = 1u32;
        for _ in 0..self.h {
            let d = (x % self.p + y % self.p) % self.p;
            out += d * scale;
            scale *= self.p;
            x /= self.p;
            y /= self.p;
        }
        Fe(out)
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if self.p == 2 {
            return Fe(a.0 ^ b.0);
        }
        if self.h == 1 {
            let s = a.0 + b.0;
            return Fe(if s >= self.p { s - self.p } else { s });
        }
        match &self.add_table {
            Some(t) => Fe(t[(a.0 * self.q + b.0) as usize]),
            None => self.add_digits(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        Fe(self.neg[a.index()])
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.is_zero() || b.is_zero() {
            return Fe::ZERO;
        }
        Fe(self.exp[(self.log[a.index()] + self.log[b.index()]) as usize])
    }

    /// Multiplicative inverse. Panics on zero; see [`Field::checked_inv`].
    #[inline]
    pub fn inv(&self, a: Fe) -> Fe {
        assert!(!a.is_zero(), "inverse of zero in GF({})", self.q);
        let n = self.q - 1;
        Fe(self.exp[((n - self.log[a.index()]) % n) as usize])
    }

    pub fn checked_inv(&self, a: Fe) -> Result<Fe, FieldError> {
        if a.is_zero() {
            Err(FieldError::DivisionByZero)
        } else {
            Ok(self.inv(a))
        }
    }

    /// `a / b`. Panics when `b` is zero; see [`Field::checked_div`].
    #[inline]
    pub fn div(&self, a: Fe, b: Fe) -> Fe {
        self.mul(a, self.inv(b))
    }

    pub fn checked_div(&self, a: Fe, b: Fe) -> Result<Fe, FieldError> {
        Ok(self.mul(a, self.checked_inv(b)?))
    }

    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        if e == 0 {
            return Fe::ONE;
        }
        if a.is_zero() {
            return Fe::ZERO;
        }
        let n = (self.q - 1) as u64;
        let l = (self.log[a.index()] as u64 * (e % n)) % n;
        Fe(self.exp[l as usize])
    }

    /// Discrete logarithm with respect to the table generator.
    pub fn log(&self, a: Fe) -> Option<u32> {
        (!a.is_zero()).then(|| self.log[a.index()])
    }

    /// The generator `g` of the multiplicative group used for the tables.
    pub fn generator(&self) -> Fe {
        Fe(self.exp[if self.q == 2 { 0 } else { 1 }])
    }

    pub fn frobenius(&self, a: Fe) -> Fe {
        self.pow(a, self.p as u64)
    }

    /// Absolute trace to GF(p), returned as an element of the prime subfield.
    #[inline]
    pub fn absolute_trace(&self, a: Fe) -> Fe {
        Fe(self.trace[a.index()])
    }

    pub fn is_square(&self, a: Fe) -> bool {
        self.p == 2 || a.is_zero() || self.log[a.index()] % 2 == 0
    }

    /// A square root when one exists (the one with even log / 2 for odd q).
    pub fn sqrt(&self, a: Fe) -> Option<Fe> {
        if a.is_zero() {
            return Some(Fe::ZERO);
        }
        if self.p == 2 {
            return Some(self.pow(a, (self.q / 2) as u64));
        }
        let l = self.log[a.index()];
        (l % 2 == 0).then(|| Fe(self.exp[(l / 2) as usize]))
    }

    /// Roots of `Z^2 + Z + k` in even characteristic, if any.
    fn artin_schreier(&self, k: Fe) -> Option<Fe> {
        debug_assert_eq!(self.p, 2);
        if !self.absolute_trace(k).is_zero() {
            return None;
        }
        let tau = self
            .elements()
            .find(|&t| self.absolute_trace(t) == Fe::ONE)
            .expect("trace is surjective");
        // z = sum_{i=1}^{h-1} T_i k^(2^i) with T_i = sum_{j<i} tau^(2^j).
        let mut z = Fe::ZERO;
        let mut partial = Fe::ZERO;
        let mut tau_pow = tau;
        let mut k_pow = k;
        for i in 0..self.h {
            if i > 0 {
                z = self.add(z, self.mul(partial, k_pow));
            }
            partial = self.add(partial, tau_pow);
            tau_pow = self.mul(tau_pow, tau_pow);
            k_pow = self.mul(k_pow, k_pow);
        }
        debug_assert_eq!(self.add(self.mul(z, z), z), k);
        Some(z)
    }

    /// The set of roots of `a X^2 + b X + c`, sorted in enumeration order.
    pub fn solve_quadratic(&self, a: Fe, b: Fe, c: Fe) -> Result<Vec<Fe>, FieldError> {
        if a.is_zero() && b.is_zero() && c.is_zero() {
            return Err(FieldError::AllZeroCoefficients);
        }
        if a.is_zero() {
            if b.is_zero() {
                return Ok(Vec::new());
            }
            return Ok(vec![self.neg(self.div(c, b))]);
        }
        let mut roots = if self.p == 2 {
            if b.is_zero() {
                vec![self.sqrt(self.div(c, a)).expect("Frobenius is onto")]
            } else {
                // X = (b/a) Z turns the equation into Z^2 + Z + ac/b^2 = 0.
                let k = self.div(self.mul(a, c), self.mul(b, b));
                match self.artin_schreier(k) {
                    None => Vec::new(),
                    Some(z) => {
                        let s = self.div(b, a);
                        vec![self.mul(s, z), self.mul(s, self.add(z, Fe::ONE))]
                    }
                }
            }
        } else {
            let four = self.from_int(4);
            let disc = self.sub(self.mul(b, b), self.mul(four, self.mul(a, c)));
            match self.sqrt(disc) {
                None => Vec::new(),
                Some(s) => {
                    let two_a = self.add(a, a);
                    let nb = self.neg(b);
                    vec![
                        self.div(self.add(nb, s), two_a),
                        self.div(self.sub(nb, s), two_a),
                    ]
                }
            }
        };
        roots.sort();
        roots.dedup();
        Ok(roots)
    }

    /// The first non-square in enumeration order (odd q only).
    pub fn pick_nonsquare(&self) -> Result<Fe, FieldError> {
        if self.p == 2 {
            return Err(FieldError::NoNonSquare(self.q));
        }
        Ok(self.elements().find(|&a| !self.is_square(a)).expect("half the units are non-squares"))
    }

    /// The first `n` in enumeration order with `X^2 + X + n` irreducible.
    pub fn pick_irreducible_quadratic_n(&self) -> Fe {
        self.elements()
            .find(|&n| {
                if self.p == 2 {
                    self.absolute_trace(n) == Fe::ONE
                } else {
                    let d = self.sub(Fe::ONE, self.mul(self.from_int(4), n));
                    !self.is_square(d)
                }
            })
            .expect("an irreducible monic quadratic exists")
    }

    /// Coefficients of `a` over GF(p), constant term first.
    pub fn coefficients(&self, a: Fe) -> Vec<u32> {
        let mut v = Vec::with_capacity(self.h as usize);
        let mut x = a.0;
        for _ in 0..self.h {
            v.push(x % self.p);
            x /= self.p;
        }
        v
    }

    /// Formats an element as an integer (prime fields) or as `c0.c1...`.
    pub fn format(&self, a: Fe) -> String {
        if self.h == 1 {
            a.0.to_string()
        } else {
            self.coefficients(a)
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(".")
        }
    }

    /// Inverse of [`Field::format`]. Prime fields also accept negative
    /// integers, reduced mod p.
    pub fn parse(&self, s: &str) -> Result<Fe, FieldError> {
        let s = s.trim();
        let err = || FieldError::Parse(s.to_string());
        if self.h == 1 {
            let n: i64 = s.parse().map_err(|_| err())?;
            return Ok(self.from_int(n));
        }
        let parts: Vec<&str> = s.split('.').collect();
        if parts.len() > self.h as usize {
            return Err(err());
        }
        let mut idx = 0u32;
        for part in parts.iter().rev() {
            let c: u32 = part.parse().map_err(|_| err())?;
            if c >= self.p {
                return Err(err());
            }
            idx = idx * self.p + c;
        }
        Ok(Fe(idx))
    }

    /// GF(q^2) together with the embedding of this field, built on first use.
    pub fn quadratic_extension(&self) -> Result<&ExtField, FieldError> {
        self.ext2
            .get_or_init(|| ExtField::new(self, 2).map(Box::new))
            .as_ref()
            .map(|b| b.as_ref())
            .map_err(|e| e.clone())
    }

    /// Borrowed element handle with operator overloading.
    pub fn el(&self, a: Fe) -> FieldElem<'_> {
        FieldElem { field: self, value: a }
    }
}

/// GF(q^m) as a field of its own together with an explicit embedding of GF(q).
pub struct ExtField {
    big: Field,
    m: u32,
    base_q: u32,
    embed: Vec<Fe>,
    project: Vec<u32>,
    modulus: Vec<Fe>,
}

impl fmt::Debug for ExtField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExtField")
            .field("base_q", &self.base_q)
            .field("m", &self.m)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl ExtField {
    pub fn new(base: &Field, m: u32) -> Result<ExtField, FieldError> {
        let big_q = (base.q as u64)
            .checked_pow(m)
            .ok_or(FieldError::TooLarge(u64::MAX))?;
        let big = Field::new(big_q)?;
        // A root in the big field of the polynomial defining the base field.
        let beta = big
            .elements()
            .find(|&x| {
                let mut acc = Fe::ZERO;
                for &c in base.modulus.iter().rev() {
                    acc = big.add(big.mul(acc, x), Fe(c));
                }
                acc.is_zero()
            })
            .expect("GF(q^m) contains GF(q)");
        let embed: Vec<Fe> = base
            .elements()
            .map(|a| {
                let mut acc = Fe::ZERO;
                for &c in base.coefficients(a).iter().rev() {
                    acc = big.add(big.mul(acc, beta), Fe(c));
                }
                acc
            })
            .collect();
        let mut project = vec![u32::MAX; big.q as usize];
        for (i, e) in embed.iter().enumerate() {
            project[e.index()] = i as u32;
        }

        // Minimal polynomial over GF(q) of the table generator of GF(q^m).
        let gamma = big.generator();
        let mut poly = vec![Fe::ONE];
        let mut conj = gamma;
        for _ in 0..m {
            let mut next = vec![Fe::ZERO; poly.len() + 1];
            for (i, &c) in poly.iter().enumerate() {
                next[i + 1] = big.add(next[i + 1], c);
                next[i] = big.sub(next[i], big.mul(c, conj));
            }
            poly = next;
            conj = big.pow(conj, base.q as u64);
        }
        let modulus = poly
            .iter()
            .map(|&c| {
                let k = project[c.index()];
                assert!(k != u32::MAX, "minimal polynomial has coefficients in the base field");
                Fe(k)
            })
            .collect();

        Ok(ExtField {
            big,
            m,
            base_q: base.q,
            embed,
            project,
            modulus,
        })
    }

    pub fn field(&self) -> &Field {
        &self.big
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn base_q(&self) -> u32 {
        self.base_q
    }

    /// Monic irreducible polynomial of degree m over the base field (ascending).
    pub fn modulus(&self) -> &[Fe] {
        &self.modulus
    }

    #[inline]
    pub fn embed(&self, a: Fe) -> Fe {
        self.embed[a.index()]
    }

    /// The base-field element equal to `a`, if `a` lies in the embedded base field.
    #[inline]
    pub fn project(&self, a: Fe) -> Option<Fe> {
        let k = self.project[a.index()];
        (k != u32::MAX).then_some(Fe(k))
    }

    /// x -> x^q.
    pub fn frobenius(&self, a: Fe) -> Fe {
        self.big.pow(a, self.base_q as u64)
    }

    /// Trace from GF(q^m) down to GF(q).
    pub fn relative_trace(&self, a: Fe) -> Fe {
        let mut acc = Fe::ZERO;
        let mut x = a;
        for _ in 0..self.m {
            acc = self.big.add(acc, x);
            x = self.frobenius(x);
        }
        self.project(acc).expect("the relative trace lies in the base field")
    }
}

/// An element bound to its field, for operator-style arithmetic.
///
/// The operators panic when mixing fields or dividing by zero; the `try_*`
/// methods report those as errors instead.
#[derive(Clone, Copy)]
pub struct FieldElem<'f> {
    field: &'f Field,
    value: Fe,
}

impl fmt::Debug for FieldElem<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@GF({})", self.field.format(self.value), self.field.q)
    }
}

impl PartialEq for FieldElem<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.value == other.value
    }
}

impl<'f> FieldElem<'f> {
    pub fn value(self) -> Fe {
        self.value
    }

    pub fn field(self) -> &'f Field {
        self.field
    }

    fn check(self, other: Self) -> Result<(), FieldError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(FieldError::FieldMismatch(self.field.q, other.field.q))
        }
    }

    pub fn try_add(self, other: Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(self.field.el(self.field.add(self.value, other.value)))
    }

    pub fn try_sub(self, other: Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(self.field.el(self.field.sub(self.value, other.value)))
    }

    pub fn try_mul(self, other: Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(self.field.el(self.field.mul(self.value, other.value)))
    }

    pub fn try_div(self, other: Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(self.field.el(self.field.checked_div(self.value, other.value)?))
    }

    pub fn try_inv(self) -> Result<Self, FieldError> {
        Ok(self.field.el(self.field.checked_inv(self.value)?))
    }

    pub fn pow(self, e: u64) -> Self {
        self.field.el(self.field.pow(self.value, e))
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $try:ident) => {
        impl<'f> $tr for FieldElem<'f> {
            type Output = FieldElem<'f>;
            fn $method(self, rhs: Self) -> Self::Output {
                match self.$try(rhs) {
                    Ok(v) => v,
                    Err(e) => panic!("{e}"),
                }
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);
binop!(Div, div, try_div);

impl<'f> Neg for FieldElem<'f> {
    type Output = FieldElem<'f>;
    fn neg(self) -> Self::Output {
        self.field.el(self.field.neg(self.value))
    }
}
