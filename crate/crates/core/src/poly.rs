//! Univariate polynomials over a [`Field`], stored as trimmed ascending
//! coefficient vectors (the zero polynomial is the empty vector).
//!
//! Only what the geometry needs is here: division, gcd, root extraction,
//! factoring of polynomials of degree at most 4, and counting distinct
//! irreducible factors by degree.

use std::collections::BTreeMap;

use crate::field::{Fe, Field};

pub type Poly = Vec<Fe>;

pub fn trim(p: &mut Poly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub fn trimmed(mut p: Poly) -> Poly {
    trim(&mut p);
    p
}

/// Degree, or `None` for the zero polynomial.
pub fn degree(p: &[Fe]) -> Option<usize> {
    let mut n = p.len();
    while n > 0 && p[n - 1].is_zero() {
        n -= 1;
    }
    n.checked_sub(1)
}

pub fn eval(f: &Field, p: &[Fe], x: Fe) -> Fe {
    p.iter().rev().fold(Fe::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
}

pub fn add(f: &Field, a: &[Fe], b: &[Fe]) -> Poly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(Fe::ZERO);
            let y = b.get(i).copied().unwrap_or(Fe::ZERO);
            f.add(x, y)
        })
        .collect();
    trimmed(out)
}

pub fn sub(f: &Field, a: &[Fe], b: &[Fe]) -> Poly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(Fe::ZERO);
            let y = b.get(i).copied().unwrap_or(Fe::ZERO);
            f.sub(x, y)
        })
        .collect();
    trimmed(out)
}

pub fn scale(f: &Field, a: &[Fe], s: Fe) -> Poly {
    trimmed(a.iter().map(|&c| f.mul(c, s)).collect())
}

pub fn mul(f: &Field, a: &[Fe], b: &[Fe]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Fe::ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    trimmed(out)
}

/// Quotient and remainder. Panics if `b` is zero.
pub fn divrem(f: &Field, a: &[Fe], b: &[Fe]) -> (Poly, Poly) {
    let db = degree(b).expect("division by the zero polynomial");
    let inv_lead = f.inv(b[db]);
    let mut r = trimmed(a.to_vec());
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![Fe::ZERO; r.len() - db];
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let coef = f.mul(*r.last().unwrap(), inv_lead);
        q[shift] = coef;
        for i in 0..=db {
            r[shift + i] = f.sub(r[shift + i], f.mul(coef, b[i]));
        }
        debug_assert!(r.last().unwrap().is_zero());
        r.pop();
        trim(&mut r);
    }
    (trimmed(q), r)
}

pub fn rem(f: &Field, a: &[Fe], b: &[Fe]) -> Poly {
    divrem(f, a, b).1
}

pub fn monic(f: &Field, a: &[Fe]) -> Poly {
    match degree(a) {
        None => Vec::new(),
        Some(d) => scale(f, a, f.inv(a[d])),
    }
}

/// Monic gcd; gcd(0, 0) = 0.
pub fn gcd(f: &Field, a: &[Fe], b: &[Fe]) -> Poly {
    let mut x = trimmed(a.to_vec());
    let mut y = trimmed(b.to_vec());
    while !y.is_empty() {
        let r = rem(f, &x, &y);
        x = y;
        y = r;
    }
    monic(f, &x)
}

pub fn derivative(f: &Field, a: &[Fe]) -> Poly {
    trimmed(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(f.from_int(i as i64), c))
            .collect(),
    )
}

/// `base^e mod m`.
pub fn powmod(f: &Field, base: &[Fe], mut e: u128, m: &[Fe]) -> Poly {
    let mut acc: Poly = rem(f, &[Fe::ONE], m);
    let mut b = rem(f, base, m);
    while e > 0 {
        if e & 1 == 1 {
            acc = rem(f, &mul(f, &acc, &b), m);
        }
        b = rem(f, &mul(f, &b, &b), m);
        e >>= 1;
    }
    acc
}

/// `x^(q^k) mod m`.
pub fn x_pow_qk(f: &Field, k: u32, m: &[Fe]) -> Poly {
    let mut acc: Poly = vec![Fe::ZERO, Fe::ONE];
    for _ in 0..k {
        acc = powmod(f, &acc, f.q() as u128, m);
    }
    rem(f, &acc, m)
}

/// Multiplicity of `a` as a root of the non-zero polynomial `p`.
pub fn root_multiplicity(f: &Field, p: &[Fe], a: Fe) -> usize {
    let mut cur = trimmed(p.to_vec());
    let mut k = 0;
    while !cur.is_empty() && eval(f, &cur, a).is_zero() {
        cur = divrem(f, &cur, &[f.neg(a), Fe::ONE]).0;
        k += 1;
    }
    k
}

/// Distinct roots in enumeration order.
pub fn roots(f: &Field, p: &[Fe]) -> Vec<Fe> {
    match degree(p) {
        None | Some(0) => Vec::new(),
        Some(1) => vec![f.neg(f.div(p[0], p[1]))],
        Some(2) => f.solve_quadratic(p[2], p[1], p[0]).expect("non-zero quadratic"),
        Some(_) => f.elements().filter(|&x| eval(f, p, x).is_zero()).collect(),
    }
}

/// Splits a monic quartic without roots into two monic quadratics, when
/// such a splitting exists.
fn split_quartic(f: &Field, r: &[Fe]) -> Option<(Poly, Poly)> {
    let (r0, r1, r2, r3) = (r[0], r[1], r[2], r[3]);
    let try_pair = |b: Fe, c: Fe| -> Option<(Poly, Poly)> {
        let g = vec![c, b, Fe::ONE];
        let (quo, rm) = divrem(f, r, &g);
        rm.is_empty().then_some((g, quo))
    };
    for b in f.elements() {
        let b2 = f.sub(r3, b);
        let s = f.sub(r2, f.mul(b, b2));
        let delta = f.sub(b, b2);
        if !delta.is_zero() {
            // c + c' = s, b2 c + b c' = r1.
            let c = f.div(f.sub(f.mul(b, s), r1), delta);
            if let Some(pair) = try_pair(b, c) {
                return Some(pair);
            }
        } else {
            for c in f.solve_quadratic(Fe::ONE, f.neg(s), r0).ok()? {
                if let Some(pair) = try_pair(b, c) {
                    return Some(pair);
                }
            }
        }
    }
    None
}

/// Factorization of a non-zero polynomial of degree at most 4 into monic
/// irreducible factors with multiplicities. Factors are sorted by degree,
/// then coefficient vector; the leading coefficient is dropped.
pub fn factor_small(f: &Field, p: &[Fe]) -> Vec<(Poly, usize)> {
    let d = degree(p).expect("cannot factor the zero polynomial");
    assert!(d <= 4, "factor_small only handles degree <= 4");
    let mut rest = monic(f, p);
    let mut out: Vec<(Poly, usize)> = Vec::new();
    for a in roots(f, &rest) {
        let k = root_multiplicity(f, &rest, a);
        let lin = vec![f.neg(a), Fe::ONE];
        for _ in 0..k {
            rest = divrem(f, &rest, &lin).0;
        }
        out.push((lin, k));
    }
    match degree(&rest).unwrap_or(0) {
        0 => {}
        2 | 3 => out.push((rest, 1)),
        4 => {
            let g = gcd(f, &rest, &sub(f, &x_pow_qk(f, 2, &rest), &[Fe::ZERO, Fe::ONE]));
            match degree(&g) {
                Some(2) => out.push((g, 2)),
                Some(4) => {
                    let (a, b) = split_quartic(f, &rest).expect("product of two quadratics");
                    if a == b {
                        out.push((a, 2));
                    } else {
                        out.push((a, 1));
                        out.push((b, 1));
                    }
                }
                _ => out.push((rest, 1)),
            }
        }
        _ => unreachable!("a root-free remainder of degree 1 cannot occur"),
    }
    out.sort_by(|x, y| (x.0.len(), &x.0).cmp(&(y.0.len(), &y.0)));
    out
}

/// For a non-zero polynomial, the number of distinct monic irreducible
/// factors of each degree (degrees with no factor are omitted).
pub fn distinct_degree_counts(f: &Field, p: &[Fe]) -> BTreeMap<usize, usize> {
    let d = degree(p).expect("non-zero polynomial");
    let r = monic(f, p);
    let mut counts = BTreeMap::new();
    // deg gcd(r, x^(q^k) - x) = sum over j | k of j * N_j.
    let mut found: Vec<usize> = vec![0; d + 1];
    for k in 1..=d {
        let x_qk = x_pow_qk(f, k as u32, &r);
        let g = gcd(f, &r, &sub(f, &x_qk, &[Fe::ZERO, Fe::ONE]));
        let total = degree(&g).unwrap_or(0);
        let lower: usize = (1..k).filter(|j| k % j == 0).map(|j| j * found[j]).sum();
        let nk = (total - lower) / k;
        found[k] = nk;
        if nk > 0 {
            counts.insert(k, nk);
        }
    }
    counts
}
