//! Points, planes and lines of PG(3,q), points of PG(1,q).
//!
//! Points and planes are 4-tuples normalized so the first non-zero entry
//! is one. A line is stored by its reduced row echelon basis together with
//! the reduced row echelon matrix of its two defining plane equations.
//!
//! Enumeration is index-addressable. Points (and planes) are ordered as
//! normalized tuples in lexicographic order. Lines are ordered by pivot
//! pattern of the RREF basis, (0,1), (0,2), (0,3), (1,2), (1,3), (2,3), and
//! within a pattern by the free entries read row by row, last entry fastest.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::field::{Fe, Field};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("the zero vector is not a projective point")]
    ZeroVector,
    #[error("a line needs two distinct points")]
    EqualPoints,
    #[error("matrix does not have rank 2")]
    RankDeficient,
    #[error("PG(3,q) needs q >= 2")]
    FieldTooSmall,
    #[error("index {0} out of range")]
    IndexOutOfRange(u64),
}

pub type Vec4 = [Fe; 4];

pub fn dot(f: &Field, a: &Vec4, b: &Vec4) -> Fe {
    let mut acc = Fe::ZERO;
    for i in 0..4 {
        acc = f.add(acc, f.mul(a[i], b[i]));
    }
    acc
}

/// `a * x + b * y`, coordinate-wise.
pub fn combine(f: &Field, a: Fe, x: &Vec4, b: Fe, y: &Vec4) -> Vec4 {
    let mut out = [Fe::ZERO; 4];
    for i in 0..4 {
        out[i] = f.add(f.mul(a, x[i]), f.mul(b, y[i]));
    }
    out
}

/// Scales so the first non-zero coordinate is one.
pub fn normalize(f: &Field, v: &Vec4) -> Option<Vec4> {
    let lead = v.iter().position(|c| !c.is_zero())?;
    let s = f.inv(v[lead]);
    let mut out = [Fe::ZERO; 4];
    for i in lead..4 {
        out[i] = f.mul(v[i], s);
    }
    out[lead] = Fe::ONE;
    Some(out)
}

/// Index of a normalized tuple among all normalized tuples.
pub fn tuple_index(q: u32, v: &Vec4) -> u64 {
    let q = q as u64;
    let c = |i: usize| v[i].0 as u64;
    if !v[0].is_zero() {
        1 + q + q * q + c(1) * q * q + c(2) * q + c(3)
    } else if !v[1].is_zero() {
        1 + q + c(2) * q + c(3)
    } else if !v[2].is_zero() {
        1 + c(3)
    } else {
        0
    }
}

pub fn tuple_from_index(q: u32, idx: u64) -> Vec4 {
    let q64 = q as u64;
    let d = |x: u64| Fe(x as u32);
    if idx == 0 {
        [Fe::ZERO, Fe::ZERO, Fe::ZERO, Fe::ONE]
    } else if idx < 1 + q64 {
        [Fe::ZERO, Fe::ZERO, Fe::ONE, d(idx - 1)]
    } else if idx < 1 + q64 + q64 * q64 {
        let r = idx - 1 - q64;
        [Fe::ZERO, Fe::ONE, d(r / q64), d(r % q64)]
    } else {
        let r = idx - 1 - q64 - q64 * q64;
        [Fe::ONE, d(r / (q64 * q64)), d((r / q64) % q64), d(r % q64)]
    }
}

pub fn num_points(q: u32) -> u64 {
    let q = q as u64;
    q * q * q + q * q + q + 1
}

pub fn num_lines(q: u32) -> u64 {
    let q = q as u64;
    (q * q + 1) * (q * q + q + 1)
}

/// A point of PG(3,q).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Point3(pub Vec4);

/// A plane `[a0:a1:a2:a3]` of PG(3,q), i.e. `a0 X0 + a1 X1 + a2 X2 + a3 X3 = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Plane3(pub Vec4);

impl Point3 {
    pub fn new(f: &Field, v: Vec4) -> Result<Point3, GeometryError> {
        normalize(f, &v).map(Point3).ok_or(GeometryError::ZeroVector)
    }

    pub fn from_ints(f: &Field, v: [i64; 4]) -> Result<Point3, GeometryError> {
        Point3::new(f, v.map(|x| f.from_int(x)))
    }

    pub fn coords(&self) -> &Vec4 {
        &self.0
    }

    pub fn index(&self, q: u32) -> u64 {
        tuple_index(q, &self.0)
    }

    pub fn from_index(q: u32, idx: u64) -> Point3 {
        Point3(tuple_from_index(q, idx))
    }
}

impl Plane3 {
    pub fn new(f: &Field, v: Vec4) -> Result<Plane3, GeometryError> {
        normalize(f, &v).map(Plane3).ok_or(GeometryError::ZeroVector)
    }

    pub fn from_ints(f: &Field, v: [i64; 4]) -> Result<Plane3, GeometryError> {
        Plane3::new(f, v.map(|x| f.from_int(x)))
    }

    pub fn coords(&self) -> &Vec4 {
        &self.0
    }

    pub fn index(&self, q: u32) -> u64 {
        tuple_index(q, &self.0)
    }

    pub fn from_index(q: u32, idx: u64) -> Plane3 {
        Plane3(tuple_from_index(q, idx))
    }
}

pub fn incident(f: &Field, p: &Point3, pi: &Plane3) -> bool {
    dot(f, &p.0, &pi.0).is_zero()
}

pub fn enumerate_points(f: &Field) -> impl Iterator<Item = Point3> + '_ {
    (0..num_points(f.q())).map(move |i| Point3::from_index(f.q(), i))
}

pub fn enumerate_planes(f: &Field) -> impl Iterator<Item = Plane3> + '_ {
    (0..num_points(f.q())).map(move |i| Plane3::from_index(f.q(), i))
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(f: &Field, rows: &mut [Vec4]) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..4 {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let s = f.inv(rows[r][col]);
        for c in 0..4 {
            rows[r][c] = f.mul(rows[r][c], s);
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let m = rows[i][col];
                let pivot_row = rows[r];
                for c in 0..4 {
                    rows[i][c] = f.sub(rows[i][c], f.mul(m, pivot_row[c]));
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}

pub fn rank(f: &Field, rows: &[Vec4]) -> usize {
    let mut m = rows.to_vec();
    rref(f, &mut m).len()
}

/// Basis of the orthogonal complement of a rank-2 RREF matrix, itself in RREF.
fn complement(f: &Field, m: &[Vec4; 2], pivots: &[usize]) -> [Vec4; 2] {
    let free: Vec<usize> = (0..4).filter(|c| !pivots.contains(c)).collect();
    let mut out = [[Fe::ZERO; 4]; 2];
    for (k, &fc) in free.iter().enumerate() {
        out[k][fc] = Fe::ONE;
        for (r, &pc) in pivots.iter().enumerate() {
            out[k][pc] = f.neg(m[r][fc]);
        }
    }
    rref(f, &mut out);
    out
}

const PATTERNS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Free positions `(row, column)` of an RREF 2x4 matrix with the given pivots.
fn free_positions(p: (usize, usize)) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for c in p.0 + 1..4 {
        if c != p.1 {
            out.push((0, c));
        }
    }
    for c in p.1 + 1..4 {
        out.push((1, c));
    }
    out
}

/// A line of PG(3,q).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Line3 {
    basis: [Vec4; 2],
    eqs: [Vec4; 2],
}

impl Line3 {
    /// The line spanned by two vectors.
    pub fn span(f: &Field, a: Vec4, b: Vec4) -> Result<Line3, GeometryError> {
        let mut m = [a, b];
        let piv = rref(f, &mut m);
        if piv.len() != 2 {
            return Err(GeometryError::RankDeficient);
        }
        let eqs = complement(f, &m, &piv);
        Ok(Line3 { basis: m, eqs })
    }

    pub fn span_ints(f: &Field, a: [i64; 4], b: [i64; 4]) -> Result<Line3, GeometryError> {
        Line3::span(f, a.map(|x| f.from_int(x)), b.map(|x| f.from_int(x)))
    }

    pub fn through(f: &Field, p: &Point3, r: &Point3) -> Result<Line3, GeometryError> {
        if p == r {
            return Err(GeometryError::EqualPoints);
        }
        Line3::span(f, p.0, r.0)
    }

    /// The line with the given two plane equations.
    pub fn from_equations(f: &Field, h1: Vec4, h2: Vec4) -> Result<Line3, GeometryError> {
        let mut h = [h1, h2];
        let piv = rref(f, &mut h);
        if piv.len() != 2 {
            return Err(GeometryError::RankDeficient);
        }
        let basis = complement(f, &h, &piv);
        Ok(Line3 { basis, eqs: h })
    }

    /// Intersection of two distinct planes.
    pub fn meet(f: &Field, a: &Plane3, b: &Plane3) -> Result<Line3, GeometryError> {
        Line3::from_equations(f, a.0, b.0)
    }

    pub fn basis(&self) -> &[Vec4; 2] {
        &self.basis
    }

    pub fn equations(&self) -> &[Vec4; 2] {
        &self.eqs
    }

    fn pivots(m: &[Vec4; 2]) -> (usize, usize) {
        let p0 = m[0].iter().position(|c| !c.is_zero()).unwrap();
        let p1 = m[1].iter().position(|c| !c.is_zero()).unwrap();
        (p0, p1)
    }

    pub fn index(&self, q: u32) -> u64 {
        let q = q as u64;
        let pat = Line3::pivots(&self.basis);
        let mut offset = 0;
        for &p in PATTERNS.iter() {
            let free = free_positions(p);
            if p == pat {
                let mut idx = 0;
                for (r, c) in free {
                    idx = idx * q + self.basis[r][c].0 as u64;
                }
                return offset + idx;
            }
            offset += q.pow(free.len() as u32);
        }
        unreachable!("RREF basis has one of six pivot patterns")
    }

    pub fn from_index(f: &Field, idx: u64) -> Result<Line3, GeometryError> {
        let q = f.q() as u64;
        let mut rest = idx;
        for &p in PATTERNS.iter() {
            let free = free_positions(p);
            let size = q.pow(free.len() as u32);
            if rest < size {
                let mut m = [[Fe::ZERO; 4]; 2];
                m[0][p.0] = Fe::ONE;
                m[1][p.1] = Fe::ONE;
                let mut x = rest;
                for &(r, c) in free.iter().rev() {
                    m[r][c] = Fe((x % q) as u32);
                    x /= q;
                }
                let eqs = complement(f, &m, &[p.0, p.1]);
                return Ok(Line3 { basis: m, eqs });
            }
            rest -= size;
        }
        Err(GeometryError::IndexOutOfRange(idx))
    }

    /// The q+1 points, `b0 + x b1` for x in enumeration order, then `b1`.
    pub fn points(&self, f: &Field) -> Vec<Point3> {
        let mut out: Vec<Point3> = f
            .elements()
            .map(|x| Point3::new(f, combine(f, Fe::ONE, &self.basis[0], x, &self.basis[1])).unwrap())
            .collect();
        out.push(Point3(self.basis[1]));
        out
    }

    pub fn contains(&self, f: &Field, p: &Point3) -> bool {
        self.eqs.iter().all(|h| dot(f, h, &p.0).is_zero())
    }

    pub fn in_plane(&self, f: &Field, pi: &Plane3) -> bool {
        self.basis.iter().all(|b| dot(f, b, &pi.0).is_zero())
    }

    /// The q+1 planes through the line: `h1 + u h2` for u in enumeration order, then `h2`.
    pub fn pencil(&self, f: &Field) -> Vec<Plane3> {
        pencil_of(f, &self.eqs[0], &self.eqs[1])
    }
}

/// `h1 + u h2` for u in enumeration order, then `h2`.
pub fn pencil_of(f: &Field, h1: &Vec4, h2: &Vec4) -> Vec<Plane3> {
    let mut out: Vec<Plane3> = f
        .elements()
        .map(|u| Plane3::new(f, combine(f, Fe::ONE, h1, u, h2)).unwrap())
        .collect();
    out.push(Plane3::new(f, *h2).unwrap());
    out
}

pub fn enumerate_lines(f: &Field) -> impl Iterator<Item = Line3> + '_ {
    (0..num_lines(f.q())).map(move |i| Line3::from_index(f, i).unwrap())
}

pub fn check_q(f: &Field) -> Result<(), GeometryError> {
    if f.q() < 2 {
        Err(GeometryError::FieldTooSmall)
    } else {
        Ok(())
    }
}

/// A point of PG(1,q): `(x:1)` or `(1:0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Point1 {
    Finite(Fe),
    Infinity,
}

impl Point1 {
    /// The q+1 points, finite ones in enumeration order, then infinity.
    pub fn all(f: &Field) -> impl Iterator<Item = Point1> + '_ {
        f.elements().map(Point1::Finite).chain(std::iter::once(Point1::Infinity))
    }

    /// From homogeneous coordinates `(x:y)`.
    pub fn from_pair(f: &Field, x: Fe, y: Fe) -> Option<Point1> {
        if y.is_zero() {
            (!x.is_zero()).then_some(Point1::Infinity)
        } else {
            Some(Point1::Finite(f.div(x, y)))
        }
    }

    pub fn index(&self, q: u32) -> u32 {
        match self {
            Point1::Finite(x) => x.0,
            Point1::Infinity => q,
        }
    }
}

pub struct Show<'a, T>(pub &'a Field, pub &'a T);

impl fmt::Display for Show<'_, Vec4> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let f = self.0;
        let s: Vec<String> = self.1.iter().map(|&c| f.format(c)).collect();
        write!(out, "({})", s.join(","))
    }
}

impl fmt::Display for Show<'_, Line3> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = self.1.basis();
        write!(out, "<{}, {}>", Show(self.0, &b[0]), Show(self.0, &b[1]))
    }
}
