//! Rational functions of degree at most 3 on P^1 and the divisors attached
//! to them.
//!
//! A [`RatFun`] is a pair of binary forms `(F, G)` of the same formal degree
//! `d`, read as `phi(x:y) = (F(x,y) : G(x,y))`. Forms store ascending affine
//! coefficients: `c[k]` is the coefficient of `x^k y^(d-k)`, so the
//! multiplicity of the point at infinity is `d` minus the affine degree.
//!
//! Local questions at a place `P` (ramification index, image) are answered
//! in the residue field `GF(q)[x]/(pi_P)`, so no extension tables are needed.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::field::{ExtField, Fe, Field, FieldError};
use crate::geometry::{Line3, Point1, Vec4};
use crate::poly::{self, Poly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RatFunError {
    #[error("the two forms are proportional, the function is constant")]
    ConstantFunction,
    #[error("the morphism is inseparable")]
    InseparableInput,
    #[error("the morphism is not simple: {0}")]
    NotSimple(String),
    #[error("only degree-3 functions correspond to lines")]
    DegreeMismatch,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A binary form of degree `deg`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Form {
    pub deg: usize,
    pub c: Vec<Fe>,
}

impl Form {
    pub fn new(deg: usize, mut c: Vec<Fe>) -> Form {
        assert!(poly::degree(&c).map_or(true, |k| k <= deg), "form degree too small");
        c.resize(deg + 1, Fe::ZERO);
        Form { deg, c }
    }

    pub fn affine(&self) -> Poly {
        poly::trimmed(self.c.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    /// Multiplicity of the point at infinity as a zero of a non-zero form.
    pub fn mult_at_infinity(&self) -> usize {
        self.deg - poly::degree(&self.c).expect("non-zero form")
    }

    pub fn eval(&self, f: &Field, p: Point1) -> Fe {
        match p {
            Point1::Finite(x) => poly::eval(f, &self.c, x),
            Point1::Infinity => self.c[self.deg],
        }
    }

    /// `F(y, x)`: the form after swapping `0` and infinity.
    pub fn reversed(&self) -> Form {
        let mut c = self.c.clone();
        c.reverse();
        Form { deg: self.deg, c }
    }

    pub fn lin(f: &Field, a: Fe, x: &Form, b: Fe, y: &Form) -> Form {
        assert_eq!(x.deg, y.deg);
        let c = (0..=x.deg)
            .map(|k| f.add(f.mul(a, x.c[k]), f.mul(b, y.c[k])))
            .collect();
        Form { deg: x.deg, c }
    }

    pub fn mul(f: &Field, x: &Form, y: &Form) -> Form {
        let mut c = vec![Fe::ZERO; x.deg + y.deg + 1];
        for (i, &a) in x.c.iter().enumerate() {
            for (j, &b) in y.c.iter().enumerate() {
                c[i + j] = f.add(c[i + j], f.mul(a, b));
            }
        }
        Form { deg: x.deg + y.deg, c }
    }

    pub fn map(&self, g: impl Fn(Fe) -> Fe) -> Form {
        Form { deg: self.deg, c: self.c.iter().map(|&x| g(x)).collect() }
    }
}

/// A place of P^1 over GF(q): infinity or a monic irreducible polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Place {
    Finite(Vec<Fe>),
    Infinity,
}

impl Place {
    pub fn rational(f: &Field, a: Fe) -> Place {
        Place::Finite(vec![f.neg(a), Fe::ONE])
    }

    pub fn at(f: &Field, p: Point1) -> Place {
        match p {
            Point1::Finite(a) => Place::rational(f, a),
            Point1::Infinity => Place::Infinity,
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            Place::Finite(p) => p.len() - 1,
            Place::Infinity => 1,
        }
    }

    /// The rational point of a degree-one place.
    pub fn point(&self, f: &Field) -> Option<Point1> {
        match self {
            Place::Infinity => Some(Point1::Infinity),
            Place::Finite(p) if p.len() == 2 => Some(Point1::Finite(f.neg(p[0]))),
            _ => None,
        }
    }

    fn key(&self) -> (usize, bool, &[Fe]) {
        match self {
            Place::Finite(p) => (p.len() - 1, false, p.as_slice()),
            Place::Infinity => (1, true, &[]),
        }
    }

    pub fn show(&self, f: &Field) -> String {
        match self {
            Place::Infinity => "P_inf".into(),
            Place::Finite(p) if p.len() == 2 => format!("P_{}", f.format(f.neg(p[0]))),
            Place::Finite(p) => format!("Q[{}]", show_poly(f, p)),
        }
    }
}

impl PartialOrd for Place {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Place {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

/// Formats a polynomial in `x`, highest degree first.
pub fn show_poly(f: &Field, p: &[Fe]) -> String {
    let d = match poly::degree(p) {
        None => return "0".into(),
        Some(d) => d,
    };
    let mut terms = Vec::new();
    for k in (0..=d).rev() {
        let c = p[k];
        if c.is_zero() {
            continue;
        }
        let coef = f.format(c);
        let coef = if f.h() > 1 && coef.contains('.') { format!("({coef})") } else { coef };
        let mono = match k {
            0 => String::new(),
            1 => "x".into(),
            _ => format!("x^{k}"),
        };
        terms.push(match (k, c == Fe::ONE) {
            (0, _) => coef,
            (_, true) => mono,
            _ => format!("{coef}{mono}"),
        });
    }
    terms.join("+")
}

/// A divisor on P^1: places with non-zero integer multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Divisor(pub BTreeMap<Place, i64>);

impl Divisor {
    pub fn zero() -> Divisor {
        Divisor::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Place, i64)>) -> Divisor {
        let mut d = Divisor::zero();
        for (p, k) in terms {
            d.add(p, k);
        }
        d
    }

    pub fn add(&mut self, p: Place, k: i64) {
        let e = self.0.entry(p.clone()).or_insert(0);
        *e += k;
        if *e == 0 {
            self.0.remove(&p);
        }
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|(p, k)| p.degree() as i64 * k).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self, other: &Divisor) -> Divisor {
        let mut d = self.clone();
        for (p, &k) in &other.0 {
            d.add(p.clone(), k);
        }
        d
    }

    /// Multiset of `(place degree, multiplicity)`, sorted: the shape of the divisor.
    pub fn shape(&self) -> Vec<(usize, i64)> {
        let mut s: Vec<(usize, i64)> = self.0.iter().map(|(p, &k)| (p.degree(), k)).collect();
        s.sort();
        s
    }

    pub fn show(&self, f: &Field) -> String {
        if self.0.is_empty() {
            return "0".into();
        }
        self.0
            .iter()
            .map(|(p, &k)| {
                if k == 1 {
                    p.show(f)
                } else {
                    format!("{k}{}", p.show(f))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Zero divisor of a non-zero form.
pub fn form_divisor(f: &Field, form: &Form) -> Divisor {
    let mut d = Divisor::zero();
    let aff = form.affine();
    if poly::degree(&aff).unwrap_or(0) > 0 {
        for (p, k) in poly::factor_small(f, &aff) {
            d.add(Place::Finite(p), k as i64);
        }
    }
    let inf = form.mult_at_infinity();
    if inf > 0 {
        d.add(Place::Infinity, inf as i64);
    }
    d
}

/// Number of distinct places of each degree in the zero set of a non-zero form.
pub fn form_place_degrees(f: &Field, form: &Form) -> BTreeMap<usize, usize> {
    let aff = form.affine();
    let mut counts = if poly::degree(&aff).unwrap_or(0) > 0 {
        poly::distinct_degree_counts(f, &aff)
    } else {
        BTreeMap::new()
    };
    if form.mult_at_infinity() > 0 {
        *counts.entry(1).or_insert(0) += 1;
    }
    counts
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFun {
    pub f: Form,
    pub g: Form,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Separability {
    Separable,
    PurelyInseparable,
}

impl RatFun {
    pub fn new(fld: &Field, f: Form, g: Form) -> Result<RatFun, RatFunError> {
        assert_eq!(f.deg, g.deg, "forms of different degrees");
        let phi = RatFun { f, g };
        if phi.is_constant(fld) {
            return Err(RatFunError::ConstantFunction);
        }
        Ok(phi)
    }

    /// From affine numerator and denominator; the degree is the larger of the two.
    pub fn from_polys(f: &Field, num: &[Fe], den: &[Fe]) -> Result<RatFun, RatFunError> {
        let d = poly::degree(num).unwrap_or(0).max(poly::degree(den).unwrap_or(0));
        RatFun::new(f, Form::new(d, num.to_vec()), Form::new(d, den.to_vec()))
    }

    pub fn from_ints(f: &Field, num: &[i64], den: &[i64]) -> Result<RatFun, RatFunError> {
        let conv = |v: &[i64]| -> Poly { v.iter().map(|&x| f.from_int(x)).collect() };
        RatFun::from_polys(f, &conv(num), &conv(den))
    }

    /// Proportional forms (including a zero form) give a constant.
    pub fn is_constant(&self, f: &Field) -> bool {
        let (a, b) = (&self.f.c, &self.g.c);
        for i in 0..a.len() {
            for j in i + 1..a.len() {
                if f.sub(f.mul(a[i], b[j]), f.mul(a[j], b[i])) != Fe::ZERO {
                    return false;
                }
            }
        }
        true
    }

    pub fn degree(&self) -> usize {
        self.f.deg
    }

    /// The function of a line: the two rows of its equation matrix evaluated on
    /// the curve, `h(x) = h0 x^3 + h1 x^2 + h2 x + h3`.
    pub fn from_line(line: &Line3) -> RatFun {
        let h = line.equations();
        let form = |r: &Vec4| Form::new(3, vec![r[3], r[2], r[1], r[0]]);
        RatFun { f: form(&h[0]), g: form(&h[1]) }
    }

    /// The line whose equations are the coefficient vectors of `f` and `g`.
    pub fn to_line(&self, f: &Field) -> Result<Line3, RatFunError> {
        if self.degree() != 3 {
            return Err(RatFunError::DegreeMismatch);
        }
        if self.is_constant(f) {
            return Err(RatFunError::ConstantFunction);
        }
        let row = |c: &[Fe]| [c[3], c[2], c[1], c[0]];
        Ok(Line3::from_equations(f, row(&self.f.c), row(&self.g.c)).expect("rank 2"))
    }

    pub fn eval(&self, f: &Field, p: Point1) -> Point1 {
        Point1::from_pair(f, self.f.eval(f, p), self.g.eval(f, p))
            .expect("evaluation at a base point")
    }

    pub fn base_divisor(&self, f: &Field) -> Divisor {
        let g = poly::gcd(f, &self.f.c, &self.g.c);
        let mut d = Divisor::zero();
        if poly::degree(&g).unwrap_or(0) > 0 {
            for (p, k) in poly::factor_small(f, &g) {
                d.add(Place::Finite(p), k as i64);
            }
        }
        let inf = self.f_inf().min(self.g_inf());
        if inf > 0 {
            d.add(Place::Infinity, inf as i64);
        }
        d
    }

    fn f_inf(&self) -> usize {
        if self.f.is_zero() { usize::MAX } else { self.f.mult_at_infinity() }
    }

    fn g_inf(&self) -> usize {
        if self.g.is_zero() { usize::MAX } else { self.g.mult_at_infinity() }
    }

    /// The morphism obtained by removing the common factor of `f` and `g`.
    pub fn associated_morphism(&self, f: &Field) -> RatFun {
        let g = poly::gcd(f, &self.f.c, &self.g.c);
        let inf = self.f_inf().min(self.g_inf());
        let a = poly::divrem(f, &self.f.c, &g).0;
        let b = poly::divrem(f, &self.g.c, &g).0;
        let deg = self.degree() - poly::degree(&g).unwrap() - inf;
        RatFun { f: Form::new(deg, a), g: Form::new(deg, b) }
    }

    /// `f' g - f g'` as a form of degree `2d - 2`.
    pub fn wronskian(&self, f: &Field) -> Form {
        let a = self.f.affine();
        let b = self.g.affine();
        let w = poly::sub(
            f,
            &poly::mul(f, &poly::derivative(f, &a), &b),
            &poly::mul(f, &a, &poly::derivative(f, &b)),
        );
        let deg = (2 * self.degree()).saturating_sub(2);
        Form::new(deg, w)
    }

    /// For a morphism (no base points).
    pub fn separability(&self, f: &Field) -> Separability {
        if self.wronskian(f).is_zero() {
            Separability::PurelyInseparable
        } else {
            Separability::Separable
        }
    }

    /// Different divisor of a separable morphism: the divisor of the Wronskian.
    pub fn different(&self, f: &Field) -> Result<Divisor, RatFunError> {
        let w = self.wronskian(f);
        if w.is_zero() {
            return Err(RatFunError::InseparableInput);
        }
        Ok(form_divisor(f, &w))
    }

    /// Ramification index at a place (1 when unramified). `self` must be a morphism.
    pub fn ramification_index(&self, f: &Field, place: &Place) -> usize {
        let (fa, ga, modulus) = match place {
            Place::Finite(p) => (self.f.affine(), self.g.affine(), p.clone()),
            Place::Infinity => (self.f.reversed().affine(), self.g.reversed().affine(), vec![Fe::ZERO, Fe::ONE]),
        };
        let res = Residue::new(f, modulus);
        let theta = res.reduce(&[Fe::ZERO, Fe::ONE]);
        let u = res.eval(&fa, &theta);
        let v = res.eval(&ga, &theta);
        assert!(!(u.is_empty() && v.is_empty()), "place is a base point");
        let n = fa.len().max(ga.len());
        let h: Vec<Poly> = (0..n)
            .map(|k| {
                let x = fa.get(k).map_or(Vec::new(), |&c| res.mul(&v, &[c]));
                let y = ga.get(k).map_or(Vec::new(), |&c| res.mul(&u, &[c]));
                res.sub(&x, &y)
            })
            .collect();
        res.root_multiplicity(h, &theta)
    }

    /// The place of the target line under a place of the source.
    pub fn image_place(&self, f: &Field, place: &Place) -> Place {
        let (fa, ga, modulus) = match place {
            Place::Finite(p) => (self.f.affine(), self.g.affine(), p.clone()),
            Place::Infinity => (self.f.reversed().affine(), self.g.reversed().affine(), vec![Fe::ZERO, Fe::ONE]),
        };
        let res = Residue::new(f, modulus);
        let theta = res.reduce(&[Fe::ZERO, Fe::ONE]);
        let u = res.eval(&fa, &theta);
        let v = res.eval(&ga, &theta);
        if v.is_empty() {
            return Place::Infinity;
        }
        let w = res.mul(&u, &res.inv(&v));
        Place::Finite(res.min_poly(&w))
    }

    pub fn ramification_data(&self, f: &Field) -> Result<RamificationData, RatFunError> {
        let d = self.different(f)?;
        let mut places = Vec::new();
        for (p, &dp) in &d.0 {
            let e = self.ramification_index(f, p);
            let tame = e as u32 % f.p() != 0;
            places.push(RamifiedPlace { place: p.clone(), e, d: dp as usize, tame });
        }
        Ok(RamificationData { places })
    }

    /// True iff the map permutes the rational points of P^1.
    pub fn is_permutation(&self, f: &Field) -> bool {
        let mut seen = vec![false; f.q() as usize + 1];
        for x in Point1::all(f) {
            let i = self.eval(f, x).index(f.q()) as usize;
            if seen[i] {
                return false;
            }
            seen[i] = true;
        }
        true
    }

    pub fn fiber_statistics(&self, f: &Field) -> BTreeMap<(usize, usize, usize), u64> {
        let mut out = BTreeMap::new();
        let mut record = |i: usize, counts: BTreeMap<usize, usize>| {
            for (k, j) in counts {
                *out.entry((i, j, k)).or_insert(0) += 1;
            }
        };
        for y in Point1::all(f) {
            let (u, v) = match y {
                Point1::Finite(a) => (a, Fe::ONE),
                Point1::Infinity => (Fe::ONE, Fe::ZERO),
            };
            let form = Form::lin(f, v, &self.f, f.neg(u), &self.g);
            record(1, form_place_degrees(f, &form));
        }
        let ff = Form::mul(f, &self.f, &self.f);
        let fg = Form::mul(f, &self.f, &self.g);
        let gg = Form::mul(f, &self.g, &self.g);
        for m1 in f.elements() {
            for m0 in f.elements() {
                if !f.solve_quadratic(Fe::ONE, m1, m0).unwrap().is_empty() {
                    continue;
                }
                let a = Form::lin(f, Fe::ONE, &ff, m1, &fg);
                let form = Form::lin(f, Fe::ONE, &a, m0, &gg);
                record(2, form_place_degrees(f, &form));
            }
        }
        out
    }

    pub fn double_point_polynomial(&self, f: &Field) -> DoublePoint {
        let d = self.degree();
        let (a, b) = (&self.f.c, &self.g.c);
        let mut m = vec![vec![Fe::ZERO; d.max(1)]; d.max(1)];
        for i in 0..=d {
            for j in 0..i {
                let c = f.sub(f.mul(a[i], b[j]), f.mul(a[j], b[i]));
                if c.is_zero() {
                    continue;
                }
                for k in 0..i - j {
                    m[j + k][i - 1 - k] = f.add(m[j + k][i - 1 - k], c);
                }
            }
        }
        DoublePoint { d: d.max(1) - 1, a: m }
    }

    pub fn show(&self, f: &Field) -> String {
        format!("({})/({})", show_poly(f, &self.f.c), show_poly(f, &self.g.c))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RamifiedPlace {
    pub place: Place,
    pub e: usize,
    pub d: usize,
    pub tame: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RamificationData {
    pub places: Vec<RamifiedPlace>,
}

impl RamificationData {
    pub fn ramification_divisor(&self) -> Divisor {
        Divisor::from_terms(self.places.iter().map(|r| (r.place.clone(), r.e as i64 - 1)))
    }

    pub fn different_divisor(&self) -> Divisor {
        Divisor::from_terms(self.places.iter().map(|r| (r.place.clone(), r.d as i64)))
    }
}

/// Arithmetic in `GF(q)[x]/(m)` for a monic irreducible `m`.
struct Residue<'a> {
    f: &'a Field,
    m: Poly,
}

impl<'a> Residue<'a> {
    fn new(f: &'a Field, m: Poly) -> Residue<'a> {
        Residue { f, m }
    }

    fn reduce(&self, a: &[Fe]) -> Poly {
        poly::rem(self.f, a, &self.m)
    }

    fn mul(&self, a: &[Fe], b: &[Fe]) -> Poly {
        self.reduce(&poly::mul(self.f, a, b))
    }

    fn sub(&self, a: &[Fe], b: &[Fe]) -> Poly {
        poly::sub(self.f, a, b)
    }

    fn add(&self, a: &[Fe], b: &[Fe]) -> Poly {
        poly::add(self.f, a, b)
    }

    fn inv(&self, a: &[Fe]) -> Poly {
        let f = self.f;
        let (mut r0, mut r1) = (self.m.clone(), poly::trimmed(a.to_vec()));
        let (mut s0, mut s1): (Poly, Poly) = (Vec::new(), vec![Fe::ONE]);
        while !r1.is_empty() {
            let (q, r) = poly::divrem(f, &r0, &r1);
            let s2 = poly::sub(f, &s0, &poly::mul(f, &q, &s1));
            (r0, r1) = (r1, r);
            (s0, s1) = (s1, s2);
        }
        assert_eq!(r0.len(), 1, "inverse of a zero divisor");
        self.reduce(&poly::scale(f, &s0, f.inv(r0[0])))
    }

    fn eval(&self, p: &[Fe], x: &[Fe]) -> Poly {
        let mut acc = Vec::new();
        for &c in p.iter().rev() {
            acc = self.add(&self.mul(&acc, x), &[c]);
        }
        poly::trimmed(acc)
    }

    fn pow(&self, a: &[Fe], mut e: u64) -> Poly {
        let mut acc = vec![Fe::ONE];
        let mut b = self.reduce(a);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        acc
    }

    /// Multiplicity of `theta` as a root of `sum h_k X^k`.
    fn root_multiplicity(&self, mut h: Vec<Poly>, theta: &[Fe]) -> usize {
        while h.last().is_some_and(|c| c.is_empty()) {
            h.pop();
        }
        let mut k = 0;
        while h.len() > 1 {
            // Synthetic division by X - theta.
            let n = h.len() - 1;
            let mut quo = vec![Vec::new(); n];
            quo[n - 1] = h[n].clone();
            for i in (1..n).rev() {
                quo[i - 1] = self.add(&h[i], &self.mul(theta, &quo[i]));
            }
            let r = self.add(&h[0], &self.mul(theta, &quo[0]));
            if !r.is_empty() {
                break;
            }
            k += 1;
            h = quo;
        }
        k
    }

    /// Minimal polynomial over GF(q), as the product over Frobenius conjugates.
    fn min_poly(&self, w: &[Fe]) -> Poly {
        let q = self.f.q() as u64;
        let mut conj = vec![self.reduce(w)];
        loop {
            let next = self.pow(conj.last().unwrap(), q);
            if next == conj[0] {
                break;
            }
            conj.push(next);
        }
        let mut prod: Vec<Poly> = vec![vec![Fe::ONE]];
        for c in &conj {
            let mut next = vec![Vec::new(); prod.len() + 1];
            for (i, a) in prod.iter().enumerate() {
                next[i + 1] = self.add(&next[i + 1], a);
                next[i] = self.sub(&next[i], &self.mul(a, c));
            }
            prod = next;
        }
        prod.into_iter()
            .map(|c| {
                assert!(c.len() <= 1, "minimal polynomial coefficients lie in the base field");
                c.first().copied().unwrap_or(Fe::ZERO)
            })
            .collect()
    }
}

/// The double point polynomial: `a[i][j]` is the coefficient of `x^i y^j`,
/// of bidegree `(d, d)` where `d` is one less than the degree of the function.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DoublePoint {
    pub d: usize,
    pub a: Vec<Vec<Fe>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DpsPoint {
    pub x: Point1,
    pub y: Point1,
    pub diagonal: bool,
}

impl DoublePoint {
    pub fn is_symmetric(&self) -> bool {
        (0..=self.d).all(|i| (0..=self.d).all(|j| self.a[i][j] == self.a[j][i]))
    }

    pub fn show(&self, f: &Field) -> String {
        let mut terms = Vec::new();
        for i in (0..=self.d).rev() {
            for j in (0..=self.d).rev() {
                let c = self.a[i][j];
                if c.is_zero() {
                    continue;
                }
                let mono: String = [("x", i), ("y", j)]
                    .iter()
                    .filter(|(_, k)| *k > 0)
                    .map(|(v, k)| if *k == 1 { v.to_string() } else { format!("{v}^{k}") })
                    .collect();
                let coef = f.format(c);
                terms.push(match (mono.is_empty(), c == Fe::ONE) {
                    (true, _) => coef,
                    (false, true) => mono,
                    (false, false) if coef.contains('.') => format!("({coef}){mono}"),
                    (false, false) => format!("{coef}{mono}"),
                });
            }
        }
        if terms.is_empty() { "0".into() } else { terms.join("+") }
    }

    /// Restriction to the diagonal as an affine polynomial.
    pub fn diagonal(&self, f: &Field) -> Poly {
        let mut out = vec![Fe::ZERO; 2 * self.d + 1];
        for i in 0..=self.d {
            for j in 0..=self.d {
                out[i + j] = f.add(out[i + j], self.a[i][j]);
            }
        }
        poly::trimmed(out)
    }

    pub fn map(&self, g: impl Fn(Fe) -> Fe) -> DoublePoint {
        DoublePoint {
            d: self.d,
            a: self.a.iter().map(|r| r.iter().map(|&c| g(c)).collect()).collect(),
        }
    }

    /// Coefficients in the chart around `(x, y)`: exponents of `x` (or `1/x`
    /// at infinity) and `y`, together with the local coordinates.
    fn chart(&self, x: Point1, y: Point1) -> (Vec<Vec<Fe>>, Fe, Fe) {
        let n = self.d;
        let mut b = vec![vec![Fe::ZERO; n + 1]; n + 1];
        for i in 0..=n {
            for j in 0..=n {
                let ii = if x == Point1::Infinity { n - i } else { i };
                let jj = if y == Point1::Infinity { n - j } else { j };
                b[ii][jj] = self.a[i][j];
            }
        }
        let lx = match x {
            Point1::Finite(v) => v,
            Point1::Infinity => Fe::ZERO,
        };
        let ly = match y {
            Point1::Finite(v) => v,
            Point1::Infinity => Fe::ZERO,
        };
        (b, lx, ly)
    }

    pub fn eval(&self, f: &Field, x: Point1, y: Point1) -> Fe {
        let (b, lx, ly) = self.chart(x, y);
        eval2(f, &b, lx, ly)
    }

    /// True iff the curve and both partial derivatives vanish at `(x, y)`.
    pub fn is_singular_at(&self, f: &Field, x: Point1, y: Point1) -> bool {
        let (b, lx, ly) = self.chart(x, y);
        let n = b.len();
        let mut bx = vec![vec![Fe::ZERO; n]; n];
        let mut by = vec![vec![Fe::ZERO; n]; n];
        for i in 0..n {
            for j in 0..n {
                if i > 0 {
                    bx[i - 1][j] = f.mul(f.from_int(i as i64), b[i][j]);
                }
                if j > 0 {
                    by[i][j - 1] = f.mul(f.from_int(j as i64), b[i][j]);
                }
            }
        }
        eval2(f, &b, lx, ly).is_zero()
            && eval2(f, &bx, lx, ly).is_zero()
            && eval2(f, &by, lx, ly).is_zero()
    }

    /// Coefficients (ascending in `y`) of the form obtained by fixing `x`.
    fn fiber(&self, f: &Field, x: Point1) -> Vec<Fe> {
        (0..=self.d)
            .map(|j| match x {
                Point1::Infinity => self.a[self.d][j],
                Point1::Finite(v) => {
                    let mut acc = Fe::ZERO;
                    for i in (0..=self.d).rev() {
                        acc = f.add(f.mul(acc, v), self.a[i][j]);
                    }
                    acc
                }
            })
            .collect()
    }

    /// Walks the zeros over `f` (the field the coefficients live in). The
    /// callback receives each point and whether the fiber root is repeated
    /// (the only places a singular point can sit).
    fn walk(&self, f: &Field, mut visit: impl FnMut(Point1, Point1, bool)) {
        for x in Point1::all(f) {
            let b = self.fiber(f, x);
            if b.iter().all(|c| c.is_zero()) {
                for y in Point1::all(f) {
                    visit(x, y, true);
                }
                continue;
            }
            match self.d {
                0 => {}
                1 => {
                    if b[1].is_zero() {
                        visit(x, Point1::Infinity, false);
                    } else {
                        visit(x, Point1::Finite(f.neg(f.div(b[0], b[1]))), false);
                    }
                }
                2 => {
                    if b[2].is_zero() {
                        if b[1].is_zero() {
                            visit(x, Point1::Infinity, true);
                        } else {
                            visit(x, Point1::Finite(f.neg(f.div(b[0], b[1]))), false);
                            visit(x, Point1::Infinity, false);
                        }
                    } else {
                        let r = f.solve_quadratic(b[2], b[1], b[0]).unwrap();
                        let double = r.len() == 1;
                        for y in r {
                            visit(x, Point1::Finite(y), double);
                        }
                    }
                }
                _ => unreachable!("functions of degree at most 3"),
            }
        }
    }

    pub fn points(&self, f: &Field) -> Vec<DpsPoint> {
        let mut out = Vec::new();
        self.walk(f, |x, y, _| out.push(DpsPoint { x, y, diagonal: x == y }));
        out
    }

    pub fn count_points(&self, f: &Field) -> u64 {
        let mut n = 0;
        self.walk(f, |_, _, _| n += 1);
        n
    }

    /// Point count together with a singular point, if one exists.
    pub fn count_and_singular(&self, f: &Field) -> (u64, Option<(Point1, Point1)>) {
        let mut n = 0;
        let mut sing = None;
        self.walk(f, |x, y, repeated| {
            n += 1;
            if repeated && sing.is_none() && self.is_singular_at(f, x, y) {
                sing = Some((x, y));
            }
        });
        (n, sing)
    }
}

fn eval2(f: &Field, b: &[Vec<Fe>], x: Fe, y: Fe) -> Fe {
    let mut acc = Fe::ZERO;
    for i in (0..b.len()).rev() {
        let mut row = Fe::ZERO;
        for j in (0..b[i].len()).rev() {
            row = f.add(f.mul(row, y), b[i][j]);
        }
        acc = f.add(f.mul(acc, x), row);
    }
    acc
}

/// Points of the double point scheme over GF(q^m), m in {1, 2}.
pub fn dps_points(f: &Field, phi: &RatFun, m: u32) -> Result<(Vec<DpsPoint>, u64), RatFunError> {
    let delta = phi.double_point_polynomial(f);
    let pts = match m {
        1 => delta.points(f),
        2 => {
            let ext = f.quadratic_extension()?;
            delta.map(|c| ext.embed(c)).points(ext.field())
        }
        _ => return Err(RatFunError::Field(FieldError::TooLarge(f.q() as u64))),
    };
    let n = pts.len() as u64;
    Ok((pts, n))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Genus1Report {
    pub n1: u64,
    pub n2: u64,
    pub t: i64,
    pub hasse_weil: bool,
    pub n2_matches: bool,
    pub singular_point: bool,
    pub pass: bool,
}

/// Simplicity check: every ramification index is 2 and the branch places
/// are pairwise distinct.
pub fn check_simple(f: &Field, phi: &RatFun) -> Result<(), RatFunError> {
    let data = phi.ramification_data(f)?;
    let mut images = Vec::new();
    for r in &data.places {
        if r.e != 2 {
            return Err(RatFunError::NotSimple(format!(
                "ramification index {} at {}",
                r.e,
                r.place.show(f)
            )));
        }
        let img = phi.image_place(f, &r.place);
        if img.degree() != r.place.degree() || images.contains(&img) {
            return Err(RatFunError::NotSimple("branch points collide".into()));
        }
        images.push(img);
    }
    Ok(())
}

/// Point counts of the double point curve of a simple separable degree-3
/// morphism over GF(q) and GF(q^2), checked against a genus-1 zeta function.
pub fn genus1_consistency(f: &Field, phi: &RatFun) -> Result<Genus1Report, RatFunError> {
    if phi.degree() != 3 {
        return Err(RatFunError::NotSimple(format!("degree {}", phi.degree())));
    }
    check_simple(f, phi)?;
    let ext = f.quadratic_extension()?;
    genus1_with(f, ext, phi)
}

/// As [`genus1_consistency`], skipping the simplicity check, with a
/// caller-supplied quadratic extension.
pub fn genus1_with(f: &Field, ext: &ExtField, phi: &RatFun) -> Result<Genus1Report, RatFunError> {
    let delta = phi.double_point_polynomial(f);
    let (n1, s1) = delta.count_and_singular(f);
    let (n2, s2) = delta.map(|c| ext.embed(c)).count_and_singular(ext.field());
    let q = f.q() as i64;
    let t = q + 1 - n1 as i64;
    let hasse_weil = t * t <= 4 * q;
    let n2_matches = n2 as i64 == q * q + 1 - (t * t - 2 * q);
    let singular_point = s1.is_some() || s2.is_some();
    Ok(Genus1Report {
        n1,
        n2,
        t,
        hasse_weil,
        n2_matches,
        singular_point,
        pass: hasse_weil && n2_matches && !singular_point,
    })
}

/// The four kinds of degree-2 morphisms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Degree2Case {
    /// Odd q, tame, ramified at two rational points.
    TwoRational,
    /// Odd q, tame, ramified at one place of degree 2.
    QuadraticPlace,
    /// Even q, purely inseparable.
    Inseparable,
    /// Even q, separable, wildly ramified at one rational point.
    WildRational,
}

impl Degree2Case {
    /// The fiber statistics that must hold for this case.
    pub fn expected_pijk(self, q: u64) -> Vec<((usize, usize, usize), u64)> {
        match self {
            Degree2Case::TwoRational => vec![((1, 1, 1), 2), ((1, 2, 1), (q - 1) / 2), ((1, 1, 2), (q - 1) / 2)],
            Degree2Case::QuadraticPlace => vec![((1, 1, 1), 0), ((1, 2, 1), (q + 1) / 2), ((1, 1, 2), (q + 1) / 2)],
            Degree2Case::Inseparable => vec![((1, 1, 1), q + 1), ((2, 1, 2), (q * q - q) / 2)],
            Degree2Case::WildRational => vec![((1, 1, 1), 1), ((1, 2, 1), q / 2), ((1, 1, 2), q / 2)],
        }
    }
}

impl Degree2Case {
    pub const ALL: [Degree2Case; 4] = [
        Degree2Case::TwoRational,
        Degree2Case::QuadraticPlace,
        Degree2Case::Inseparable,
        Degree2Case::WildRational,
    ];

    /// Whether a degree-2 morphism satisfies every condition of this case.
    pub fn holds(self, f: &Field, phi: &RatFun) -> bool {
        if phi.degree() != 2 {
            return false;
        }
        let insep = phi.separability(f) == Separability::PurelyInseparable;
        if self == Degree2Case::Inseparable {
            return !f.is_odd() && insep;
        }
        let Ok(data) = phi.ramification_data(f) else {
            return false;
        };
        let r = data.ramification_divisor();
        let d = data.different_divisor();
        let tame = data.places.iter().all(|p| p.tame) && r == d;
        match self {
            Degree2Case::TwoRational => f.is_odd() && tame && r.shape() == [(1, 1), (1, 1)],
            Degree2Case::QuadraticPlace => f.is_odd() && tame && r.shape() == [(2, 1)],
            Degree2Case::WildRational => {
                !f.is_odd() && r.shape() == [(1, 1)] && d.shape() == [(1, 2)] && r.0.keys().eq(d.0.keys())
            }
            Degree2Case::Inseparable => unreachable!(),
        }
    }
}

/// All cases a degree-2 morphism satisfies; exactly one for a morphism.
pub fn degree2_cases(f: &Field, phi: &RatFun) -> Vec<Degree2Case> {
    Degree2Case::ALL.iter().copied().filter(|c| c.holds(f, phi)).collect()
}

pub fn degree2_case(f: &Field, phi: &RatFun) -> Option<Degree2Case> {
    match degree2_cases(f, phi).as_slice() {
        [c] => Some(*c),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(f: &Field, num: &[i64], den: &[i64]) -> RatFun {
        RatFun::from_ints(f, num, den).unwrap()
    }

    fn pt(f: &Field, a: i64) -> Place {
        Place::rational(f, f.from_int(a))
    }

    #[test]
    fn lines_to_functions() {
        let f = Field::new(7).unwrap();
        let l = Line3::span_ints(&f, [1, 0, 0, 0], [0, 0, 0, 1]).unwrap();
        let phi = RatFun::from_line(&l);
        assert_eq!(phi.f.affine(), vec![Fe(0), Fe(0), Fe(1)]);
        assert_eq!(phi.g.affine(), vec![Fe(0), Fe(1)]);
        assert_eq!(phi.show(&f), "(x^2)/(x)");
        let l = Line3::span_ints(&f, [0, 1, 0, 0], [0, 0, 1, 0]).unwrap();
        assert_eq!(RatFun::from_line(&l).show(&f), "(x^3)/(1)");
    }

    #[test]
    fn line_round_trip() {
        let f = Field::new(5).unwrap();
        for l in crate::geometry::enumerate_lines(&f) {
            assert_eq!(RatFun::from_line(&l).to_line(&f).unwrap(), l);
        }
    }

    #[test]
    fn base_divisors() {
        let f = Field::new(7).unwrap();
        let cubic = |num: &[i64], den: &[i64]| {
            let conv = |v: &[i64]| v.iter().map(|&x| f.from_int(x)).collect::<Vec<_>>();
            RatFun::new(&f, Form::new(3, conv(num)), Form::new(3, conv(den))).unwrap()
        };
        let phi = cubic(&[0, 0, 1], &[0, 1]);
        assert_eq!(phi.base_divisor(&f), Divisor::from_terms([(pt(&f, 0), 1), (Place::Infinity, 1)]));
        assert_eq!(phi.associated_morphism(&f).show(&f), "(x)/(1)");
        let phi = cubic(&[0, 0, 0, 1], &[0, 0, 1]);
        assert_eq!(phi.base_divisor(&f), Divisor::from_terms([(pt(&f, 0), 2)]));
        let n = f.pick_irreducible_quadratic_n();
        let (one, zero) = (Fe::ONE, Fe::ZERO);
        let p1 = [n, f.neg(n), zero, one];
        let p2 = [f.sub(one, n), f.neg(one), one, zero];
        let l = Line3::span(&f, p1, p2).unwrap();
        let phi = RatFun::from_line(&l);
        let b = phi.base_divisor(&f);
        assert_eq!(b.shape(), vec![(2, 1)]);
        assert_eq!(b, Divisor::from_terms([(Place::Finite(vec![n, one, one]), 1)]));
        assert_eq!(phi.associated_morphism(&f).degree(), 1);
    }

    #[test]
    fn separability() {
        let f2 = Field::new(8).unwrap();
        assert_eq!(rf(&f2, &[0, 0, 1], &[1]).separability(&f2), Separability::PurelyInseparable);
        assert_eq!(rf(&f2, &[0, 0, 1], &[1, 1]).separability(&f2), Separability::Separable);
        let f3 = Field::new(9).unwrap();
        assert_eq!(rf(&f3, &[0, 0, 0, 1], &[1]).separability(&f3), Separability::PurelyInseparable);
    }

    #[test]
    fn ramification_examples() {
        let f = Field::new(7).unwrap();
        let data = rf(&f, &[0, 0, 0, 1], &[1]).ramification_data(&f).unwrap();
        let expected = Divisor::from_terms([(pt(&f, 0), 2), (Place::Infinity, 2)]);
        assert_eq!(data.ramification_divisor(), expected);
        assert_eq!(data.different_divisor(), expected);

        let f = Field::new(8).unwrap();
        let data = rf(&f, &[0, 0, 1], &[1, 1]).ramification_data(&f).unwrap();
        assert_eq!(data.ramification_divisor(), Divisor::from_terms([(pt(&f, 0), 1)]));
        assert_eq!(data.different_divisor(), Divisor::from_terms([(pt(&f, 0), 2)]));

        let f = Field::new(9).unwrap();
        let data = rf(&f, &[0, 0, -1, 1], &[1]).ramification_data(&f).unwrap();
        assert_eq!(
            data.ramification_divisor(),
            Divisor::from_terms([(pt(&f, 0), 1), (Place::Infinity, 2)])
        );
        assert_eq!(
            data.different_divisor(),
            Divisor::from_terms([(pt(&f, 0), 1), (Place::Infinity, 3)])
        );
        assert_eq!(rf(&f, &[0, 0, 0, 1], &[1]).ramification_data(&f), Err(RatFunError::InseparableInput));
    }

    #[test]
    fn fiber_statistics_examples() {
        let f = Field::new(7).unwrap();
        let s = rf(&f, &[0, 0, 1], &[1]).fiber_statistics(&f);
        assert_eq!(s[&(1, 1, 1)], 2);
        assert_eq!(s[&(1, 2, 1)], 3);
        assert_eq!(s[&(1, 1, 2)], 3);
        let d = f.pick_nonsquare().unwrap();
        let phi = RatFun::from_polys(&f, &[d, Fe::ZERO, Fe::ONE], &[Fe::ZERO, Fe::ONE]).unwrap();
        let s = phi.fiber_statistics(&f);
        assert_eq!(s.get(&(1, 1, 1)), None);
        assert_eq!(s[&(1, 2, 1)], 4);
        assert_eq!(s[&(1, 1, 2)], 4);
        let f8 = Field::new(8).unwrap();
        let s = rf(&f8, &[0, 0, 1], &[1]).fiber_statistics(&f8);
        assert_eq!(s[&(1, 1, 1)], 9);
        assert_eq!(s[&(2, 1, 2)], 28);
    }

    #[test]
    fn permutations() {
        let f5 = Field::new(5).unwrap();
        assert!(rf(&f5, &[0, 0, 0, 1], &[1]).is_permutation(&f5));
        let f7 = Field::new(7).unwrap();
        assert!(!rf(&f7, &[0, 0, 0, 1], &[1]).is_permutation(&f7));
        let f8 = Field::new(8).unwrap();
        assert!(rf(&f8, &[0, 0, 1], &[1]).is_permutation(&f8));
    }

    #[test]
    fn double_point_examples() {
        let f = Field::new(7).unwrap();
        let one = Fe::ONE;
        let z = Fe::ZERO;
        let dp = rf(&f, &[0, 0, 0, 1], &[1]).double_point_polynomial(&f);
        assert_eq!(dp.a, vec![vec![z, z, one], vec![z, one, z], vec![one, z, z]]);
        let v = f.from_int(3);
        let phi = RatFun::from_polys(&f, &[z, z, z, one], &[f.neg(v), z, one]).unwrap();
        let dp = phi.double_point_polynomial(&f);
        let nv = f.neg(v);
        assert_eq!(dp.a, vec![vec![z, z, nv], vec![z, nv, z], vec![nv, z, one]]);
        let u = f.from_int(2);
        let phi = RatFun::from_polys(&f, &[z, f.neg(u), z, one], &[one]).unwrap();
        let dp = phi.double_point_polynomial(&f);
        assert_eq!(dp.a, vec![vec![f.neg(u), z, one], vec![z, one, z], vec![one, z, z]]);
        assert!(dp.is_symmetric());
        assert_eq!(dp.show(&f), "x^2+xy+y^2+5");
    }

    #[test]
    fn double_point_scheme_of_cube() {
        // q = 1 mod 3: (x, wx) with w a primitive cube root of unity.
        let f = Field::new(7).unwrap();
        let phi = rf(&f, &[0, 0, 0, 1], &[1]);
        let (pts, _) = dps_points(&f, &phi, 1).unwrap();
        assert!(pts.iter().any(|p| p.x == Point1::Finite(Fe(1)) && p.y == Point1::Finite(Fe(2))));
        // q = 2 mod 3: only (0,0) and (inf,inf).
        let f = Field::new(5).unwrap();
        let phi = rf(&f, &[0, 0, 0, 1], &[1]);
        let (pts, n) = dps_points(&f, &phi, 1).unwrap();
        assert_eq!(n, 2);
        assert!(pts.iter().all(|p| p.diagonal));
        let dp = phi.double_point_polynomial(&f);
        for p in dps_points(&f, &phi, 2).unwrap().0 {
            let ext = f.quadratic_extension().unwrap();
            assert!(dp.map(|c| ext.embed(c)).eval(ext.field(), p.x, p.y).is_zero());
        }
    }

    #[test]
    fn not_simple() {
        let f = Field::new(7).unwrap();
        let phi = rf(&f, &[0, 0, 0, 1], &[1]);
        assert!(matches!(genus1_consistency(&f, &phi), Err(RatFunError::NotSimple(_))));
    }

    #[test]
    fn degree_two_cases() {
        let f7 = Field::new(7).unwrap();
        assert_eq!(degree2_case(&f7, &rf(&f7, &[0, 0, 1], &[1])), Some(Degree2Case::TwoRational));
        let d = f7.pick_nonsquare().unwrap();
        let phi = RatFun::from_polys(&f7, &[d, Fe::ZERO, Fe::ONE], &[Fe::ZERO, Fe::ONE]).unwrap();
        assert_eq!(degree2_case(&f7, &phi), Some(Degree2Case::QuadraticPlace));
        let f8 = Field::new(8).unwrap();
        assert_eq!(degree2_case(&f8, &rf(&f8, &[0, 0, 1], &[1])), Some(Degree2Case::Inseparable));
        assert_eq!(degree2_case(&f8, &rf(&f8, &[0, 0, 1], &[1, 1])), Some(Degree2Case::WildRational));
    }

    #[test]
    fn divisor_display() {
        let f = Field::new(7).unwrap();
        let d = Divisor::from_terms([(pt(&f, 0), 2), (Place::Infinity, 2), (pt(&f, -1), 1)]);
        assert_eq!(d.show(&f), "2P_0 + P_6 + 2P_inf");
        assert_eq!(d.degree(), 5);
    }
}
