//! Orbit classes of planes, points and lines of PG(3,q) under the group of
//! the twisted cubic.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cubic::{self, ChordType, Mat4};
use crate::field::{Fe, Field};
use crate::geometry::{self, Line3, Plane3, Point3};
use crate::ratfun::{Divisor, Place, RatFun, Separability};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("q = {0} is too small: the orbit classification requires q >= 5")]
    QTooSmall(u32),
    #[error("class {0} does not occur for q = {1}")]
    ClassAbsentForThisField(LineClass, u32),
    #[error("samples of class {0} disagree on whether they lie in a 3-plane")]
    InconsistentOrbit(LineClass),
    #[error("unknown class name {0:?}")]
    UnknownClass(String),
}

pub fn require_q5(f: &Field) -> Result<(), ClassifyError> {
    if f.q() < 5 {
        Err(ClassifyError::QTooSmall(f.q()))
    } else {
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PlaneClass {
    N1,
    N2,
    N3,
    N4,
    N5,
}

impl PlaneClass {
    pub const ALL: [PlaneClass; 5] = [PlaneClass::N1, PlaneClass::N2, PlaneClass::N3, PlaneClass::N4, PlaneClass::N5];

    /// Number of rational points of the curve in such a plane.
    pub fn curve_points(self) -> u64 {
        match self {
            PlaneClass::N1 | PlaneClass::N4 => 1,
            PlaneClass::N2 => 2,
            PlaneClass::N3 => 3,
            PlaneClass::N5 => 0,
        }
    }

    pub fn expected_size(self, q: u64) -> u64 {
        let c = q * (q * q - 1);
        match self {
            PlaneClass::N1 => q + 1,
            PlaneClass::N2 => q * (q + 1),
            PlaneClass::N3 => c / 6,
            PlaneClass::N4 => c / 2,
            PlaneClass::N5 => c / 3,
        }
    }
}

impl fmt::Display for PlaneClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

pub fn plane_class(f: &Field, pi: &Plane3) -> PlaneClass {
    let mut m: Vec<usize> = cubic::plane_intersection(f, pi).into_iter().map(|(_, k)| k).collect();
    m.sort();
    match m.as_slice() {
        [3] => PlaneClass::N1,
        [1, 2] => PlaneClass::N2,
        [1, 1, 1] => PlaneClass::N3,
        [1] => PlaneClass::N4,
        [] => PlaneClass::N5,
        _ => unreachable!("a cubic form has at most three roots"),
    }
}

/// Plane classes indexed by `Plane3::index`.
pub fn plane_table(f: &Field) -> Vec<PlaneClass> {
    let n = geometry::num_points(f.q());
    (0..n)
        .into_par_iter()
        .map(|i| plane_class(f, &Plane3::from_index(f.q(), i)))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PointClass {
    M1,
    M2,
    M3,
    M4,
    M5,
}

impl PointClass {
    pub const ALL: [PointClass; 5] = [PointClass::M1, PointClass::M2, PointClass::M3, PointClass::M4, PointClass::M5];

    pub fn expected_size(self, f: &Field) -> u64 {
        let q = f.q() as u64;
        let c = q * (q * q - 1);
        if f.p() == 3 {
            match self {
                PointClass::M1 | PointClass::M2 => q + 1,
                PointClass::M3 => q * q - 1,
                PointClass::M4 | PointClass::M5 => c / 2,
            }
        } else {
            match self {
                PointClass::M1 => q + 1,
                PointClass::M2 => q * (q + 1),
                PointClass::M3 => c / 6,
                PointClass::M4 => c / 2,
                PointClass::M5 => c / 3,
            }
        }
    }
}

impl fmt::Display for PointClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

pub fn point_class(f: &Field, p: &Point3) -> PointClass {
    if cubic::on_curve(f, p) {
        return PointClass::M1;
    }
    let a = p.coords();
    if f.p() == 3 {
        if a[0].is_zero() && a[3].is_zero() {
            return PointClass::M2;
        }
        return match cubic::chord_through(f, p).unwrap().1 {
            ChordType::Tangent => PointClass::M3,
            ChordType::RealChord => PointClass::M4,
            ChordType::ImaginaryChord => PointClass::M5,
        };
    }
    if cubic::chord_through(f, p).unwrap().1 == ChordType::Tangent {
        return PointClass::M2;
    }
    match cubic::osculating_planes_through(f, p) {
        3 => PointClass::M3,
        1 => PointClass::M4,
        0 => PointClass::M5,
        k => unreachable!("{k} osculating planes through a point off the tangents"),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum LineClass {
    O1,
    O1Prime,
    O2,
    O3,
    O3Prime,
    O4,
    O4Minus,
    O4Plus,
    O5Minus,
    O5Plus,
    O5Two,
    O5PrimeMinus,
    O5PrimePlus,
    O5PrimeTwo,
    O6,
    O7,
    O81Minus,
    O81Plus,
    O82,
}

impl LineClass {
    pub const ALL: [LineClass; 19] = [
        LineClass::O1,
        LineClass::O1Prime,
        LineClass::O2,
        LineClass::O3,
        LineClass::O3Prime,
        LineClass::O4,
        LineClass::O4Minus,
        LineClass::O4Plus,
        LineClass::O5Minus,
        LineClass::O5Plus,
        LineClass::O5Two,
        LineClass::O5PrimeMinus,
        LineClass::O5PrimePlus,
        LineClass::O5PrimeTwo,
        LineClass::O6,
        LineClass::O7,
        LineClass::O81Minus,
        LineClass::O81Plus,
        LineClass::O82,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LineClass::O1 => "O1",
            LineClass::O1Prime => "O1'",
            LineClass::O2 => "O2",
            LineClass::O3 => "O3",
            LineClass::O3Prime => "O3'",
            LineClass::O4 => "O4",
            LineClass::O4Minus => "O4m(2)",
            LineClass::O4Plus => "O4p(2)",
            LineClass::O5Minus => "O5m",
            LineClass::O5Plus => "O5p",
            LineClass::O5Two => "O5(2)",
            LineClass::O5PrimeMinus => "O5'm",
            LineClass::O5PrimePlus => "O5'p",
            LineClass::O5PrimeTwo => "O5'(2)",
            LineClass::O6 => "O6",
            LineClass::O7 => "O7(3)",
            LineClass::O81Minus => "O81m(3)",
            LineClass::O81Plus => "O81p(3)",
            LineClass::O82 => "O82(3)",
        }
    }

    /// Whether the class occurs in characteristic `p`.
    pub fn occurs(self, p: u32) -> bool {
        use LineClass::*;
        match self {
            O1 | O2 | O3 | O6 => true,
            O1Prime | O3Prime => p != 3,
            O4 | O5Minus | O5Plus => p != 2,
            O4Minus | O4Plus | O5Two | O5PrimeTwo => p == 2,
            O5PrimeMinus | O5PrimePlus => p != 2 && p != 3,
            O7 | O81Minus | O81Plus | O82 => p == 3,
        }
    }

    pub fn present(f: &Field) -> Vec<LineClass> {
        LineClass::ALL.iter().copied().filter(|c| c.occurs(f.p())).collect()
    }

    /// Class size as a function of q.
    pub fn expected_size(self, q: u64) -> u64 {
        use LineClass::*;
        let q2 = q * q;
        match self {
            O1 | O1Prime => (q2 + q) / 2,
            O2 | O4Minus => q + 1,
            O3 | O3Prime => (q2 - q) / 2,
            O4 => q2 + q,
            O4Plus => q2 - 1,
            O5Minus | O5Plus | O5PrimeMinus | O5PrimePlus => (q2 * q - q) / 2,
            O5Two | O5PrimeTwo | O82 => q2 * q - q,
            O6 => q2 * q2 - q2 * q - q2 + q,
            O7 => 1,
            O81Minus | O81Plus => (q2 - 1) / 2,
        }
    }
}

impl fmt::Display for LineClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LineClass {
    type Err = ClassifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = |n: &str| n.trim_end_matches("(2)").trim_end_matches("(3)").to_ascii_lowercase();
        let key = norm(s.trim());
        LineClass::ALL
            .iter()
            .copied()
            .find(|c| norm(c.name()) == key)
            .ok_or_else(|| ClassifyError::UnknownClass(s.to_string()))
    }
}

/// Number of rational osculating planes containing the line.
pub fn osculating_planes_containing(f: &Field, l: &Line3) -> usize {
    l.pencil(f).iter().filter(|pi| cubic::osculating_param(f, pi).is_some()).count()
}

/// Whether the line is the polar of an imaginary chord (p != 3).
pub fn is_imaginary_axis(f: &Field, l: &Line3) -> bool {
    match cubic::polar_line(f, l) {
        Ok(m) => RatFun::from_line(&m).base_divisor(f).shape() == [(2, 1)],
        Err(_) => false,
    }
}

/// Everything the classifier looks at, plus the ramification divisor.
#[derive(Clone, Debug)]
pub struct LineAnalysis {
    pub class: LineClass,
    pub phi: RatFun,
    pub base: Divisor,
    pub morphism: RatFun,
    pub separability: Separability,
    pub ramification: Option<Divisor>,
    pub different: Option<Divisor>,
}

pub fn line_class(f: &Field, l: &Line3) -> LineClass {
    let phi = RatFun::from_line(l);
    let base = phi.base_divisor(f);
    let m = phi.associated_morphism(f);
    let d = m.different(f).ok();
    decide(f, l, &phi, &base, d.as_ref())
}

pub fn analyze_line(f: &Field, l: &Line3) -> LineAnalysis {
    let phi = RatFun::from_line(l);
    let base = phi.base_divisor(f);
    let morphism = phi.associated_morphism(f);
    let separability = morphism.separability(f);
    let (ramification, different) = match morphism.ramification_data(f) {
        Ok(r) => (Some(r.ramification_divisor()), Some(r.different_divisor())),
        Err(_) => (None, None),
    };
    let class = decide(f, l, &phi, &base, different.as_ref());
    LineAnalysis { class, phi, base, morphism, separability, ramification, different }
}

fn decide(f: &Field, l: &Line3, phi: &RatFun, base: &Divisor, d: Option<&Divisor>) -> LineClass {
    use LineClass::*;
    let p = f.p();
    match base.degree() {
        2 => match base.shape().as_slice() {
            [(1, 1), (1, 1)] => O1,
            [(1, 2)] => O2,
            [(2, 1)] => O3,
            s => unreachable!("base divisor shape {s:?}"),
        },
        1 => {
            let Some(d) = d else {
                return O4Minus;
            };
            if osculating_planes_containing(f, l) > 0 {
                return if p == 2 { O4Plus } else { O4 };
            }
            match d.shape().as_slice() {
                [(2, 1)] => O5Minus,
                [(1, 1), (1, 1)] => O5Plus,
                [(1, 2)] => O5Two,
                s => unreachable!("unisecant with different shape {s:?}"),
            }
        }
        0 => {
            let Some(d) = d else {
                return O7;
            };
            let k = osculating_planes_containing(f, l);
            if p == 3 {
                if k == 0 {
                    return O6;
                }
                return match d.shape().as_slice() {
                    [(1, 4)] => {
                        let off_diagonal = phi.double_point_polynomial(f).points(f).iter().any(|pt| !pt.diagonal);
                        if off_diagonal { O81Plus } else { O81Minus }
                    }
                    [(1, 1), (1, 3)] => O82,
                    s => unreachable!("line meeting the axis with different shape {s:?}"),
                };
            }
            match k {
                2 => O1Prime,
                1 => match d.shape().as_slice() {
                    [(1, 2), (2, 1)] => O5PrimeMinus,
                    [(1, 1), (1, 1), (1, 2)] => O5PrimePlus,
                    [(1, 2), (1, 2)] => O5PrimeTwo,
                    s => unreachable!("passant in an osculating plane with different shape {s:?}"),
                },
                0 if is_imaginary_axis(f, l) => O3Prime,
                0 => O6,
                k => unreachable!("line in {k} osculating planes"),
            }
        }
        n => unreachable!("base divisor of degree {n}"),
    }
}

/// The parameters used in the representatives: a non-square `u = d`, `v`
/// with `3v` a non-square (p != 3), and `n` with `x^2 + x + n` irreducible.
#[derive(Clone, Copy, Debug)]
pub struct Params {
    pub nonsquare: Option<Fe>,
    pub v: Option<Fe>,
    pub n: Fe,
}

pub fn params(f: &Field) -> Params {
    let nonsquare = f.pick_nonsquare().ok();
    let v = match (nonsquare, f.p()) {
        (Some(s), p) if p != 3 => Some(f.div(s, f.from_int(3))),
        _ => None,
    };
    Params { nonsquare, v, n: f.pick_irreducible_quadratic_n() }
}

fn table_line(f: &Field, a: [Fe; 4], b: [Fe; 4]) -> Line3 {
    Line3::span(f, a, b).expect("independent generators")
}

pub fn class_representative(f: &Field, c: LineClass) -> Result<Line3, ClassifyError> {
    use LineClass::*;
    require_q5(f)?;
    if !c.occurs(f.p()) {
        return Err(ClassifyError::ClassAbsentForThisField(c, f.q()));
    }
    let Params { nonsquare, v, n } = params(f);
    let i = |x: i64| f.from_int(x);
    let (o, l) = (Fe::ZERO, Fe::ONE);
    let e = |k: usize| {
        let mut v = [o; 4];
        v[k] = l;
        v
    };
    Ok(match c {
        O1 => table_line(f, e(0), e(3)),
        O1Prime | O7 => table_line(f, e(1), e(2)),
        O2 => table_line(f, e(2), e(3)),
        O3 => table_line(f, [n, f.neg(n), o, l], [f.sub(l, n), f.neg(l), l, o]),
        O3Prime => {
            let n3 = f.mul(i(3), n);
            table_line(f, [n3, f.sub(n, l), o, i(3)], [n3, f.neg(l), l, o])
        }
        O4 | O4Minus => table_line(f, e(1), e(3)),
        O4Plus => table_line(f, [o, l, l, o], e(3)),
        O5Minus => table_line(f, [f.neg(nonsquare.unwrap()), o, l, o], e(3)),
        O5Plus => table_line(f, [f.neg(l), o, l, o], e(3)),
        O5Two => table_line(f, [l, o, l, o], e(3)),
        O5PrimeMinus => table_line(f, e(2), [o, v.unwrap(), o, l]),
        O5PrimePlus => table_line(f, e(2), [o, f.inv(i(3)), o, l]),
        O5PrimeTwo => table_line(f, e(2), [o, l, o, l]),
        O6 => (0..geometry::num_lines(f.q()))
            .map(|k| Line3::from_index(f, k).unwrap())
            .find(|m| line_class(f, m) == O6)
            .expect("O6 is never empty"),
        O81Minus => table_line(f, e(1), [nonsquare.unwrap(), o, l, o]),
        O81Plus => table_line(f, e(1), [l, o, l, o]),
        O82 => table_line(f, [l, l, o, o], e(2)),
    })
}

/// The `R; D` column of the table, or the alternatives it lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExpectedMorphism {
    Divisors { r: Divisor, d: Divisor },
    Inseparable,
    Simple,
}

/// `B`, `R` and `D` of a representative, as listed in the table.
pub fn expected_divisors(f: &Field, c: LineClass) -> Option<(Divisor, ExpectedMorphism)> {
    use LineClass::*;
    if !c.occurs(f.p()) {
        return None;
    }
    let Params { nonsquare, v, n } = params(f);
    let p = |a: i64| Place::rational(f, f.from_int(a));
    let inf = || Place::Infinity;
    let q_n = || Place::Finite(vec![n, Fe::ONE, Fe::ONE]);
    let q_of = |a: Fe| Place::Finite(vec![f.neg(a), Fe::ZERO, Fe::ONE]);
    let div = |t: Vec<(Place, i64)>| Divisor::from_terms(t);
    let same = |t: Vec<(Place, i64)>| ExpectedMorphism::Divisors { r: div(t.clone()), d: div(t) };
    let both = |r: Vec<(Place, i64)>, d: Vec<(Place, i64)>| ExpectedMorphism::Divisors { r: div(r), d: div(d) };
    let zero = Divisor::zero();
    Some(match c {
        O1 => (div(vec![(p(0), 1), (inf(), 1)]), same(vec![])),
        O1Prime => (zero, same(vec![(p(0), 2), (inf(), 2)])),
        O2 => (div(vec![(p(0), 2)]), same(vec![])),
        O3 => (div(vec![(q_n(), 1)]), same(vec![])),
        O3Prime => (zero, same(vec![(q_n(), 2)])),
        O4 => (div(vec![(p(0), 1)]), same(vec![(p(0), 1), (inf(), 1)])),
        O4Minus => (div(vec![(p(0), 1)]), ExpectedMorphism::Inseparable),
        O4Plus => (div(vec![(p(0), 1)]), both(vec![(p(0), 1)], vec![(p(0), 2)])),
        O5Minus => (div(vec![(p(0), 1)]), same(vec![(q_of(nonsquare?), 1)])),
        O5Plus => (div(vec![(p(0), 1)]), same(vec![(p(1), 1), (p(-1), 1)])),
        O5Two => (div(vec![(p(0), 1)]), both(vec![(p(1), 1)], vec![(p(1), 2)])),
        O5PrimeMinus => {
            let three_v = f.mul(f.from_int(3), v?);
            (zero, same(vec![(q_of(three_v), 1), (p(0), 2)]))
        }
        O5PrimePlus => (zero, same(vec![(p(1), 1), (p(-1), 1), (p(0), 2)])),
        O5PrimeTwo => (zero, both(vec![(p(1), 1), (p(0), 2)], vec![(p(1), 2), (p(0), 2)])),
        O6 => (zero, ExpectedMorphism::Simple),
        O7 => (zero, ExpectedMorphism::Inseparable),
        O81Minus | O81Plus => (zero, both(vec![(inf(), 2)], vec![(inf(), 4)])),
        O82 => (zero, both(vec![(p(0), 1), (inf(), 2)], vec![(p(0), 1), (inf(), 3)])),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// The tabulated sign of a class for q >= 23, by q mod 6 (`None` where the
/// table leaves the entry blank).
pub fn expected_contribution(c: LineClass, q: u64) -> Option<Sign> {
    use LineClass::*;
    use Sign::*;
    let col = (q % 6) as usize;
    let row: [Option<Sign>; 6] = match c {
        O1 | O2 | O3 => [None, Some(Minus), Some(Minus), Some(Minus), Some(Minus), Some(Minus)],
        O1Prime => [None, Some(Plus), Some(Minus), None, Some(Plus), Some(Minus)],
        O3Prime => [None, Some(Minus), Some(Plus), None, Some(Minus), Some(Plus)],
        O4 => [None, Some(Plus), None, Some(Plus), None, Some(Plus)],
        O4Minus => [None, None, Some(Minus), None, Some(Minus), None],
        O4Plus => [None, None, Some(Plus), None, Some(Plus), None],
        O5Minus | O5Plus | O5Two | O6 => [None, Some(Plus), Some(Plus), Some(Plus), Some(Plus), Some(Plus)],
        O5PrimeMinus | O5PrimePlus | O5PrimeTwo => [None, Some(Plus), Some(Plus), None, Some(Plus), Some(Plus)],
        O7 | O81Minus => [None, None, None, Some(Minus), None, None],
        O81Plus | O82 => [None, None, None, Some(Plus), None, None],
    };
    if c.occurs(char_of(q)) { row[col] } else { None }
}

fn char_of(q: u64) -> u32 {
    (2..=q).find(|p| q % p == 0).unwrap() as u32
}

/// Whether some plane through the line meets the curve in three rational points.
pub fn in_three_plane(f: &Field, l: &Line3) -> bool {
    l.pencil(f).iter().any(|pi| plane_class(f, pi) == PlaneClass::N3)
}

pub fn random_group_element<R: Rng>(f: &Field, rng: &mut R) -> Mat4 {
    let q = f.q();
    loop {
        let mut pick = || f.elem(rng.gen_range(0..q as u64)).unwrap();
        let (a, b, c, d) = (pick(), pick(), pick(), pick());
        if let Ok(m) = cubic::group_matrix(f, a, b, c, d) {
            return m;
        }
    }
}

pub fn random_line<R: Rng>(f: &Field, rng: &mut R) -> Line3 {
    Line3::from_index(f, rng.gen_range(0..geometry::num_lines(f.q()))).unwrap()
}

/// `samples` random members of a class: group images of the representative,
/// or for O6 (a union of orbits) uniformly random lines of the class.
pub fn sample_class(f: &Field, c: LineClass, samples: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Line3>, ClassifyError> {
    let rep = class_representative(f, c)?;
    let mut out = vec![rep];
    while out.len() <= samples {
        if c == LineClass::O6 {
            let l = random_line(f, rng);
            if line_class(f, &l) == c {
                out.push(l);
            }
        } else {
            out.push(cubic::apply_line(f, &random_group_element(f, rng), &rep));
        }
    }
    Ok(out)
}

/// Sign of each class present at q: Plus iff its members lie in a 3-plane.
/// O1 is Minus by definition, since real chords are excluded from the count.
pub fn contribution_table(f: &Field, seed: u64, samples: usize) -> Result<BTreeMap<LineClass, Sign>, ClassifyError> {
    require_q5(f)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = BTreeMap::new();
    for c in LineClass::present(f) {
        let lines = sample_class(f, c, samples, &mut rng)?;
        let hits: Vec<bool> = lines.par_iter().map(|l| in_three_plane(f, l)).collect();
        let any = hits.iter().any(|&h| h);
        if c != LineClass::O6 && hits.iter().any(|&h| h != any) {
            return Err(ClassifyError::InconsistentOrbit(c));
        }
        let sign = if c == LineClass::O1 || !any { Sign::Minus } else { Sign::Plus };
        out.insert(c, sign);
    }
    Ok(out)
}

/// Shape of a divisor with places named by degree: P, Q, R, S.
pub fn shape_name(d: &Divisor) -> String {
    if d.is_zero() {
        return "0".into();
    }
    d.shape()
        .iter()
        .map(|&(deg, k)| {
            let letter = ["P", "Q", "R", "S"].get(deg - 1).copied().unwrap_or("T");
            if k == 1 { letter.to_string() } else { format!("{k}{letter}") }
        })
        .collect::<Vec<_>>()
        .join("+")
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Census {
    pub q: u32,
    pub lines: BTreeMap<LineClass, u64>,
    pub planes: BTreeMap<PlaneClass, u64>,
    pub points: BTreeMap<PointClass, u64>,
    /// Lines of each class lying in some 3-plane.
    pub in_three_planes: BTreeMap<LineClass, u64>,
    /// Ramification divisor shapes over O6.
    pub o6_shapes: BTreeMap<String, u64>,
}

#[derive(Default)]
struct Partial {
    lines: BTreeMap<LineClass, u64>,
    hits: BTreeMap<LineClass, u64>,
    shapes: BTreeMap<String, u64>,
}

impl Partial {
    fn merge(mut self, o: Partial) -> Partial {
        for (k, v) in o.lines {
            *self.lines.entry(k).or_insert(0) += v;
        }
        for (k, v) in o.hits {
            *self.hits.entry(k).or_insert(0) += v;
        }
        for (k, v) in o.shapes {
            *self.shapes.entry(k).or_insert(0) += v;
        }
        self
    }
}

pub fn class_census(f: &Field) -> Result<Census, ClassifyError> {
    require_q5(f)?;
    let q = f.q();
    let planes_tab = plane_table(f);
    let mut planes = BTreeMap::new();
    for c in &planes_tab {
        *planes.entry(*c).or_insert(0) += 1;
    }
    let points = (0..geometry::num_points(q))
        .into_par_iter()
        .map(|i| point_class(f, &Point3::from_index(q, i)))
        .fold(BTreeMap::new, |mut m, c| {
            *m.entry(c).or_insert(0u64) += 1;
            m
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        });
    let part = (0..geometry::num_lines(q))
        .into_par_iter()
        .fold(Partial::default, |mut acc, i| {
            let l = Line3::from_index(f, i).unwrap();
            let c = line_class(f, &l);
            *acc.lines.entry(c).or_insert(0) += 1;
            if l.pencil(f).iter().any(|pi| planes_tab[pi.index(q) as usize] == PlaneClass::N3) {
                *acc.hits.entry(c).or_insert(0) += 1;
            }
            if c == LineClass::O6 {
                let m = RatFun::from_line(&l);
                if let Ok(r) = m.ramification_data(f) {
                    *acc.shapes.entry(shape_name(&r.ramification_divisor())).or_insert(0) += 1;
                }
            }
            acc
        })
        .reduce(Partial::default, Partial::merge);
    Ok(Census { q, lines: part.lines, planes, points, in_three_planes: part.hits, o6_shapes: part.shapes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point1;

    fn fld(q: u32) -> Field {
        Field::new(q as u64).unwrap()
    }

    #[test]
    fn plane_examples() {
        let f = fld(7);
        assert_eq!(plane_class(&f, &Plane3::from_ints(&f, [0, 1, -1, 0]).unwrap()), PlaneClass::N3);
        assert_eq!(plane_class(&f, &Plane3::from_ints(&f, [0, 0, 0, 1]).unwrap()), PlaneClass::N1);
        // x^2 - x + 3 has discriminant 1 - 12 = 3, a non-square mod 7.
        assert_eq!(plane_class(&f, &Plane3::from_ints(&f, [0, 1, -1, 3]).unwrap()), PlaneClass::N4);
    }

    #[test]
    fn point_examples() {
        let f = fld(7);
        let p0 = cubic::cubic_point(&f, Point1::Finite(Fe::ZERO));
        assert_eq!(point_class(&f, &p0), PointClass::M1);
        let t = cubic::tangent_line(&f, Point1::Finite(Fe::ZERO));
        for p in t.points(&f) {
            if p != p0 {
                assert_eq!(point_class(&f, &p), PointClass::M2);
            }
        }
    }

    #[test]
    fn line_examples() {
        let f = fld(7);
        let l = Line3::span_ints(&f, [1, 0, 0, 0], [0, 0, 0, 1]).unwrap();
        assert_eq!(line_class(&f, &l), LineClass::O1);
        let l = Line3::span_ints(&f, [0, 0, 0, 1], [0, 0, 1, 0]).unwrap();
        assert_eq!(line_class(&f, &l), LineClass::O2);
    }

    #[test]
    fn representatives_classify() {
        for q in [5, 7, 8, 9, 11] {
            let f = fld(q);
            for c in LineClass::present(&f) {
                let l = class_representative(&f, c).unwrap();
                assert_eq!(line_class(&f, &l), c, "q={q}");
            }
        }
    }

    #[test]
    fn absent_classes() {
        let f = fld(7);
        assert_eq!(
            class_representative(&f, LineClass::O7),
            Err(ClassifyError::ClassAbsentForThisField(LineClass::O7, 7))
        );
        assert_eq!(class_representative(&fld(4), LineClass::O1), Err(ClassifyError::QTooSmall(4)));
    }

    #[test]
    fn class_counts_per_characteristic() {
        assert_eq!(LineClass::present(&fld(7)).len(), 11);
        assert_eq!(LineClass::present(&fld(8)).len(), 10);
        assert_eq!(LineClass::present(&fld(9)).len(), 11);
    }

    #[test]
    fn sizes_sum_to_line_count() {
        for q in [5u32, 7, 8, 9, 16, 25, 27] {
            let f = fld(q);
            let total: u64 = LineClass::present(&f).iter().map(|c| c.expected_size(q as u64)).sum();
            assert_eq!(total, geometry::num_lines(q));
        }
    }

    #[test]
    fn names_round_trip() {
        for c in LineClass::ALL {
            assert_eq!(c.name().parse::<LineClass>().unwrap(), c);
        }
        assert_eq!("o81p".parse::<LineClass>().unwrap(), LineClass::O81Plus);
        assert!("O9".parse::<LineClass>().is_err());
    }

    #[test]
    fn census_q7() {
        let f = fld(7);
        let c = class_census(&f).unwrap();
        assert_eq!(c.lines[&LineClass::O2], 8);
        assert_eq!(c.lines[&LineClass::O6], 2016);
        assert_eq!(c.points[&PointClass::M3], 56);
    }

    #[test]
    fn shapes() {
        let f = fld(7);
        let d = Divisor::from_terms([(Place::Infinity, 2), (Place::rational(&f, Fe::ZERO), 1)]);
        assert_eq!(shape_name(&d), "P+2P");
    }
}
