//! The twisted cubic C_3(q) = {(x^3:x^2:x:1)} together with (1:0:0:0):
//! tangents, chords, osculating planes, axes, the null polarity and the
//! action of PGL(2,q).

use serde::Serialize;
use thiserror::Error;

use crate::field::{Fe, Field};
use crate::geometry::{Line3, Plane3, Point1, Point3, Vec4};
use crate::poly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CubicError {
    #[error("axes and the null polarity are not defined in characteristic 3")]
    CharacteristicThree,
    #[error("the point lies on the twisted cubic")]
    PointOnCurve,
    #[error("ad - bc = 0")]
    SingularFractionalMap,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ChordType {
    Tangent,
    RealChord,
    ImaginaryChord,
}

/// A chord given by its endpoints: two points of PG(1,q), or a conjugate
/// pair described by `x + y = t`, `x y = n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ChordParam {
    Points(Point1, Point1),
    Conjugate { t: Fe, n: Fe },
}

pub fn cubic_point(f: &Field, x: Point1) -> Point3 {
    match x {
        Point1::Infinity => Point3([Fe::ONE, Fe::ZERO, Fe::ZERO, Fe::ZERO]),
        Point1::Finite(x) => {
            let x2 = f.mul(x, x);
            Point3::new(f, [f.mul(x2, x), x2, x, Fe::ONE]).unwrap()
        }
    }
}

/// The parameter of a point of C_3, if it lies on the curve.
pub fn curve_param(f: &Field, p: &Point3) -> Option<Point1> {
    let c = p.coords();
    if c[3].is_zero() {
        return (*c == [Fe::ONE, Fe::ZERO, Fe::ZERO, Fe::ZERO]).then_some(Point1::Infinity);
    }
    let s = f.inv(c[3]);
    let x = f.mul(c[2], s);
    let x2 = f.mul(x, x);
    (f.mul(c[1], s) == x2 && f.mul(c[0], s) == f.mul(x2, x)).then_some(Point1::Finite(x))
}

pub fn on_curve(f: &Field, p: &Point3) -> bool {
    curve_param(f, p).is_some()
}

pub fn osculating_plane(f: &Field, x: Point1) -> Plane3 {
    match x {
        Point1::Infinity => Plane3([Fe::ZERO, Fe::ZERO, Fe::ZERO, Fe::ONE]),
        Point1::Finite(x) => {
            let three = f.from_int(3);
            let x2 = f.mul(x, x);
            Plane3::new(
                f,
                [Fe::ONE, f.neg(f.mul(three, x)), f.mul(three, x2), f.neg(f.mul(x2, x))],
            )
            .unwrap()
        }
    }
}

/// The parameter of the osculating plane equal to `pi`, if any.
pub fn osculating_param(f: &Field, pi: &Plane3) -> Option<Point1> {
    let a = pi.coords();
    if a[0].is_zero() {
        return (a[1].is_zero() && a[2].is_zero() && !a[3].is_zero()).then_some(Point1::Infinity);
    }
    // Normalized planes have a[0] = 1 here.
    if f.p() == 3 {
        if !(a[1].is_zero() && a[2].is_zero()) {
            return None;
        }
        // -x^3 = a3 has a unique solution since cubing is the Frobenius.
        let x = f.elements().find(|&x| f.neg(f.pow(x, 3)) == a[3])?;
        return Some(Point1::Finite(x));
    }
    let x = f.neg(f.div(a[1], f.from_int(3)));
    (osculating_plane(f, Point1::Finite(x)) == *pi).then_some(Point1::Finite(x))
}

pub fn tangent_line(f: &Field, x: Point1) -> Line3 {
    match x {
        Point1::Infinity => Line3::span(
            f,
            [Fe::ONE, Fe::ZERO, Fe::ZERO, Fe::ZERO],
            [Fe::ZERO, Fe::ONE, Fe::ZERO, Fe::ZERO],
        )
        .unwrap(),
        Point1::Finite(x) => {
            let x2 = f.mul(x, x);
            let d = [f.mul(f.from_int(3), x2), f.add(x, x), Fe::ONE, Fe::ZERO];
            Line3::span(f, [f.mul(x2, x), x2, x, Fe::ONE], d).unwrap()
        }
    }
}

/// The chord with `t = x + y`, `n = x y` for finite endpoints (possibly
/// conjugate, possibly equal).
pub fn chord(f: &Field, t: Fe, n: Fe) -> Line3 {
    let a = [f.neg(f.mul(n, t)), f.neg(n), Fe::ZERO, Fe::ONE];
    let b = [f.sub(f.mul(t, t), n), t, Fe::ONE, Fe::ZERO];
    Line3::span(f, a, b).unwrap()
}

pub fn chord_of(f: &Field, x: Point1, y: Point1) -> Line3 {
    match (x, y) {
        (Point1::Finite(x), Point1::Finite(y)) => chord(f, f.add(x, y), f.mul(x, y)),
        (Point1::Infinity, Point1::Infinity) => tangent_line(f, Point1::Infinity),
        (Point1::Infinity, Point1::Finite(y)) | (Point1::Finite(y), Point1::Infinity) => {
            Line3::span(
                f,
                [Fe::ONE, Fe::ZERO, Fe::ZERO, Fe::ZERO],
                [Fe::ZERO, f.mul(y, y), y, Fe::ONE],
            )
            .unwrap()
        }
    }
}

pub fn chord_type(f: &Field, t: Fe, n: Fe) -> ChordType {
    if f.is_odd() {
        let disc = f.sub(f.mul(t, t), f.mul(f.from_int(4), n));
        if disc.is_zero() {
            ChordType::Tangent
        } else if f.is_square(disc) {
            ChordType::RealChord
        } else {
            ChordType::ImaginaryChord
        }
    } else if t.is_zero() {
        ChordType::Tangent
    } else if f.absolute_trace(f.div(n, f.mul(t, t))).is_zero() {
        ChordType::RealChord
    } else {
        ChordType::ImaginaryChord
    }
}

fn require_not_three(f: &Field) -> Result<(), CubicError> {
    if f.p() == 3 {
        Err(CubicError::CharacteristicThree)
    } else {
        Ok(())
    }
}

/// The axis `a(x,y)`, the meet of the osculating planes at `x` and `y`.
pub fn axis(f: &Field, t: Fe, n: Fe) -> Result<Line3, CubicError> {
    require_not_three(f)?;
    let three = f.from_int(3);
    let a = [f.neg(f.mul(three, f.mul(n, t))), f.sub(n, f.mul(t, t)), Fe::ZERO, three];
    let b = [f.mul(three, n), t, Fe::ONE, Fe::ZERO];
    Ok(Line3::span(f, a, b).unwrap())
}

pub fn axis_of(f: &Field, x: Point1, y: Point1) -> Result<Line3, CubicError> {
    require_not_three(f)?;
    match (x, y) {
        (Point1::Finite(x), Point1::Finite(y)) => axis(f, f.add(x, y), f.mul(x, y)),
        (Point1::Infinity, Point1::Infinity) => Ok(tangent_line(f, Point1::Infinity)),
        (Point1::Infinity, Point1::Finite(y)) | (Point1::Finite(y), Point1::Infinity) => {
            let three = f.from_int(3);
            Ok(Line3::span(
                f,
                [f.neg(f.mul(three, f.mul(y, y))), Fe::ZERO, Fe::ONE, Fe::ZERO],
                [f.mul(three, y), Fe::ONE, Fe::ZERO, Fe::ZERO],
            )
            .unwrap())
        }
    }
}

/// The unique tangent, real chord or imaginary chord through a point off the curve.
pub fn chord_through(f: &Field, p: &Point3) -> Result<(Line3, ChordType, ChordParam), CubicError> {
    if on_curve(f, p) {
        return Err(CubicError::PointOnCurve);
    }
    let [mut w, mut v, mut u, s] = *p.coords();
    if !s.is_zero() {
        let k = f.inv(s);
        (w, v, u) = (f.mul(w, k), f.mul(v, k), f.mul(u, k));
    } else if !u.is_zero() {
        let k = f.inv(u);
        (w, v) = (f.mul(w, k), f.mul(v, k));
    }
    let finite = |t: Fe, n: Fe| (chord(f, t, n), chord_type(f, t, n), param_of(f, t, n));
    Ok(if !s.is_zero() {
        let u2 = f.mul(u, u);
        if v != u2 {
            let t = f.div(f.sub(f.mul(u, v), w), f.sub(u2, v));
            let n = f.div(f.sub(f.mul(u, w), f.mul(v, v)), f.sub(v, u2));
            finite(t, n)
        } else {
            let y = Point1::Finite(u);
            (
                chord_of(f, Point1::Infinity, y),
                ChordType::RealChord,
                ChordParam::Points(Point1::Infinity, y),
            )
        }
    } else if !u.is_zero() {
        finite(v, f.sub(f.mul(v, v), w))
    } else {
        (
            chord_of(f, Point1::Infinity, Point1::Infinity),
            ChordType::Tangent,
            ChordParam::Points(Point1::Infinity, Point1::Infinity),
        )
    })
}

/// Endpoints of the chord with sum `t` and product `n`.
pub fn param_of(f: &Field, t: Fe, n: Fe) -> ChordParam {
    let r = f.solve_quadratic(Fe::ONE, f.neg(t), n).unwrap();
    match r.as_slice() {
        [] => ChordParam::Conjugate { t, n },
        [x] => ChordParam::Points(Point1::Finite(*x), Point1::Finite(*x)),
        [x, y] => ChordParam::Points(Point1::Finite(*x), Point1::Finite(*y)),
        _ => unreachable!(),
    }
}

/// `(a0:a1:a2:a3) -> [-a3 : 3a2 : -3a1 : a0]`.
pub fn null_polarity_vec(f: &Field, a: &Vec4) -> Result<Vec4, CubicError> {
    require_not_three(f)?;
    let three = f.from_int(3);
    Ok([f.neg(a[3]), f.mul(three, a[2]), f.neg(f.mul(three, a[1])), a[0]])
}

pub fn null_polarity(f: &Field, p: &Point3) -> Result<Plane3, CubicError> {
    Ok(Plane3::new(f, null_polarity_vec(f, p.coords())?).unwrap())
}

/// The point whose polar plane is `pi`.
pub fn pole(f: &Field, pi: &Plane3) -> Result<Point3, CubicError> {
    require_not_three(f)?;
    let b = pi.coords();
    let third = f.inv(f.from_int(3));
    let a = [b[3], f.neg(f.mul(b[2], third)), f.mul(b[1], third), f.neg(b[0])];
    Ok(Point3::new(f, a).unwrap())
}

/// The image of a line under the polarity: the meet of the polar planes of
/// two of its points.
pub fn polar_line(f: &Field, l: &Line3) -> Result<Line3, CubicError> {
    let b = l.basis();
    let h1 = null_polarity_vec(f, &b[0])?;
    let h2 = null_polarity_vec(f, &b[1])?;
    Ok(Line3::from_equations(f, h1, h2).expect("the polarity is non-degenerate"))
}

pub type Mat4 = [[Fe; 4]; 4];

/// The matrix by which `x -> (ax+b)/(cx+d)` acts on column vectors.
pub fn group_matrix(f: &Field, a: Fe, b: Fe, c: Fe, d: Fe) -> Result<Mat4, CubicError> {
    if f.sub(f.mul(a, d), f.mul(b, c)).is_zero() {
        return Err(CubicError::SingularFractionalMap);
    }
    let m = |x: Fe, y: Fe| f.mul(x, y);
    let k = |n: i64, x: Fe| f.mul(f.from_int(n), x);
    let (a2, b2, c2, d2) = (m(a, a), m(b, b), m(c, c), m(d, d));
    Ok([
        [m(a2, a), k(3, m(a2, b)), k(3, m(a, b2)), m(b2, b)],
        [
            m(a2, c),
            f.add(m(a2, d), k(2, m(a, m(b, c)))),
            f.add(m(b2, c), k(2, m(a, m(b, d)))),
            m(b2, d),
        ],
        [
            m(a, c2),
            f.add(m(b, c2), k(2, m(a, m(c, d)))),
            f.add(m(a, d2), k(2, m(b, m(c, d)))),
            m(b, d2),
        ],
        [m(c2, c), k(3, m(c2, d)), k(3, m(c, d2)), m(d2, d)],
    ])
}

pub fn apply(f: &Field, m: &Mat4, v: &Vec4) -> Vec4 {
    let mut out = [Fe::ZERO; 4];
    for (i, row) in m.iter().enumerate() {
        let mut acc = Fe::ZERO;
        for j in 0..4 {
            acc = f.add(acc, f.mul(row[j], v[j]));
        }
        out[i] = acc;
    }
    out
}

pub fn apply_point(f: &Field, m: &Mat4, p: &Point3) -> Point3 {
    Point3::new(f, apply(f, m, p.coords())).unwrap()
}

pub fn apply_line(f: &Field, m: &Mat4, l: &Line3) -> Line3 {
    let b = l.basis();
    Line3::span(f, apply(f, m, &b[0]), apply(f, m, &b[1])).expect("the matrix is invertible")
}

/// `x -> (ax+b)/(cx+d)` on PG(1,q).
pub fn mobius(f: &Field, (a, b, c, d): (Fe, Fe, Fe, Fe), x: Point1) -> Point1 {
    match x {
        Point1::Infinity => Point1::from_pair(f, a, c).unwrap(),
        Point1::Finite(x) => {
            Point1::from_pair(f, f.add(f.mul(a, x), b), f.add(f.mul(c, x), d)).unwrap()
        }
    }
}

/// Ascending coefficients of `a0 x^3 + a1 x^2 + a2 x + a3`, the plane
/// restricted to the curve in the affine chart (form degree 3).
pub fn plane_cubic(pi: &Plane3) -> [Fe; 4] {
    let a = pi.coords();
    [a[3], a[2], a[1], a[0]]
}

/// Rational points of the curve in the plane with their intersection multiplicities.
pub fn plane_intersection(f: &Field, pi: &Plane3) -> Vec<(Point1, usize)> {
    let c = plane_cubic(pi);
    let deg = poly::degree(&c).unwrap();
    let mut out: Vec<(Point1, usize)> = poly::roots(f, &c)
        .into_iter()
        .map(|x| (Point1::Finite(x), poly::root_multiplicity(f, &c, x)))
        .collect();
    if deg < 3 {
        out.push((Point1::Infinity, 3 - deg));
    }
    out
}

/// Number of osculating planes through a point.
pub fn osculating_planes_through(f: &Field, p: &Point3) -> usize {
    let a = p.coords();
    let three = f.from_int(3);
    // a0 - 3x a1 + 3x^2 a2 - x^3 a3, homogenized with y.
    let cubic = [a[0], f.neg(f.mul(three, a[1])), f.mul(three, a[2]), f.neg(a[3])];
    if poly::degree(&cubic).is_none() {
        return f.q() as usize + 1;
    }
    let finite = poly::roots(f, &cubic).len();
    finite + usize::from(a[3].is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{enumerate_lines, enumerate_points, incident};

    fn fin(f: &Field, x: i64) -> Point1 {
        Point1::Finite(f.from_int(x))
    }

    #[test]
    fn curve_points() {
        let f = Field::new(5).unwrap();
        assert_eq!(cubic_point(&f, fin(&f, 0)).0, [Fe(0), Fe(0), Fe(0), Fe(1)]);
        assert_eq!(cubic_point(&f, Point1::Infinity).0, [Fe(1), Fe(0), Fe(0), Fe(0)]);
        assert_eq!(cubic_point(&f, fin(&f, 2)), Point3::from_ints(&f, [3, 4, 2, 1]).unwrap());
        let mut pts: Vec<Point3> = Point1::all(&f).map(|x| cubic_point(&f, x)).collect();
        pts.sort();
        pts.dedup();
        assert_eq!(pts.len(), 6);
    }

    #[test]
    fn osculating_planes_meet_curve_triply() {
        for q in [5u64, 7, 8, 9] {
            let f = Field::new(q).unwrap();
            for x in Point1::all(&f) {
                let pi = osculating_plane(&f, x);
                assert_eq!(plane_intersection(&f, &pi), vec![(x, 3)]);
                assert_eq!(osculating_param(&f, &pi), Some(x));
            }
        }
        let f = Field::new(7).unwrap();
        assert_eq!(osculating_plane(&f, fin(&f, 0)).0, [Fe(1), Fe(0), Fe(0), Fe(0)]);
        assert_eq!(osculating_plane(&f, Point1::Infinity).0, [Fe(0), Fe(0), Fe(0), Fe(1)]);
    }

    #[test]
    fn osculating_planes_share_axis_in_char_three() {
        let f = Field::new(9).unwrap();
        let axis = Line3::span_ints(&f, [0, 1, 0, 0], [0, 0, 1, 0]).unwrap();
        for x in Point1::all(&f) {
            assert!(axis.in_plane(&f, &osculating_plane(&f, x)));
        }
    }

    #[test]
    fn tangents() {
        let f = Field::new(5).unwrap();
        let t0 = tangent_line(&f, fin(&f, 0));
        assert_eq!(t0, Line3::span_ints(&f, [0, 0, 0, 1], [0, 0, 1, 0]).unwrap());
        for x in Point1::all(&f) {
            let t = tangent_line(&f, x);
            let on: Vec<Point1> = Point1::all(&f)
                .filter(|&y| t.contains(&f, &cubic_point(&f, y)))
                .collect();
            assert_eq!(on, vec![x]);
            // Every plane through a tangent meets the curve with multiplicity >= 2 at x.
            for pi in t.pencil(&f) {
                let m = plane_intersection(&f, &pi);
                assert!(m.iter().any(|&(y, k)| y == x && k >= 2));
            }
        }
    }

    #[test]
    fn chord_examples() {
        let f = Field::new(5).unwrap();
        let inf = Point1::Infinity;
        assert_eq!(
            chord_of(&f, inf, inf),
            Line3::span_ints(&f, [1, 0, 0, 0], [0, 1, 0, 0]).unwrap()
        );
        assert_eq!(
            chord_of(&f, fin(&f, 0), inf),
            Line3::span_ints(&f, [1, 0, 0, 0], [0, 0, 0, 1]).unwrap()
        );
        // x^2 + 1 is irreducible over GF(5)? No: 2^2 = -1. Use t = 0, n = 2 instead,
        // x^2 + 2 has no root in GF(5).
        let l = chord(&f, Fe(0), f.from_int(2));
        assert_eq!(chord_type(&f, Fe(0), f.from_int(2)), ChordType::ImaginaryChord);
        assert!(Point1::all(&f).all(|x| !l.contains(&f, &cubic_point(&f, x))));
        // t = 0, n = -1: endpoints +-1 are rational... only when -1 is... x^2 - 1.
        let l = chord(&f, Fe(0), f.from_int(-1));
        let on: Vec<Point1> = Point1::all(&f)
            .filter(|&y| l.contains(&f, &cubic_point(&f, y)))
            .collect();
        assert_eq!(on, vec![fin(&f, 1), fin(&f, 4)]);
    }

    #[test]
    fn chord_types() {
        let f = Field::new(7).unwrap();
        assert_eq!(chord_type(&f, Fe(0), Fe(1)), ChordType::ImaginaryChord);
        assert_eq!(chord_type(&f, Fe(2), Fe(1)), ChordType::Tangent);
        let f4 = Field::new(4).unwrap();
        assert_eq!(chord_type(&f4, Fe(1), Fe(2)), ChordType::ImaginaryChord);
    }

    #[test]
    fn imaginary_chord_contains_conjugate_points() {
        let f = Field::new(5).unwrap();
        let ext = f.quadratic_extension().unwrap();
        let big = ext.field();
        let (t, n) = (Fe(0), f.from_int(2));
        let l = chord(&f, t, n);
        let roots = big.solve_quadratic(Fe::ONE, big.neg(ext.embed(t)), ext.embed(n)).unwrap();
        assert_eq!(roots.len(), 2);
        for x in roots {
            let x2 = big.mul(x, x);
            let pt = [big.mul(x2, x), x2, x, Fe::ONE];
            for h in l.equations() {
                let he = h.map(|c| ext.embed(c));
                let mut acc = Fe::ZERO;
                for i in 0..4 {
                    acc = big.add(acc, big.mul(he[i], pt[i]));
                }
                assert!(acc.is_zero());
            }
        }
    }

    #[test]
    fn axes() {
        let f = Field::new(7).unwrap();
        assert_eq!(
            axis_of(&f, fin(&f, 0), Point1::Infinity).unwrap(),
            Line3::span_ints(&f, [0, 1, 0, 0], [0, 0, 1, 0]).unwrap()
        );
        for x in Point1::all(&f) {
            for y in Point1::all(&f) {
                let a = axis_of(&f, x, y).unwrap();
                assert!(a.in_plane(&f, &osculating_plane(&f, x)));
                assert!(a.in_plane(&f, &osculating_plane(&f, y)));
            }
        }
        let f9 = Field::new(9).unwrap();
        assert_eq!(axis(&f9, Fe(0), Fe(1)), Err(CubicError::CharacteristicThree));
    }

    #[test]
    fn chord_through_examples() {
        let f = Field::new(5).unwrap();
        let p = Point3::from_ints(&f, [1, 1, 0, 0]).unwrap();
        let (l, ty, _) = chord_through(&f, &p).unwrap();
        assert_eq!(l, chord_of(&f, Point1::Infinity, Point1::Infinity));
        assert_eq!(ty, ChordType::Tangent);

        let p = Point3::from_ints(&f, [0, 1, 1, 0]).unwrap();
        let (l, ty, param) = chord_through(&f, &p).unwrap();
        assert_eq!(param, ChordParam::Conjugate { t: Fe(1), n: Fe(1) });
        assert_eq!(ty, ChordType::ImaginaryChord);
        assert!(l.contains(&f, &p));

        let c0 = cubic_point(&f, fin(&f, 0));
        assert_eq!(chord_through(&f, &c0).unwrap_err(), CubicError::PointOnCurve);
    }

    fn all_chords(f: &Field) -> Vec<Line3> {
        let mut out = Vec::new();
        for t in f.elements() {
            for n in f.elements() {
                out.push(chord(f, t, n));
            }
        }
        for y in Point1::all(f) {
            out.push(chord_of(f, Point1::Infinity, y));
        }
        out.sort();
        out.dedup();
        out
    }

    #[test]
    fn unique_chord_through_each_point() {
        for q in [5u64, 7, 4] {
            let f = Field::new(q).unwrap();
            let chords = all_chords(&f);
            let q = q as usize;
            // q+1 tangents, (q+1)q/2 real and (q^2-q)/2 imaginary chords.
            assert_eq!(chords.len(), q + 1 + q * q);
            for p in enumerate_points(&f) {
                if on_curve(&f, &p) {
                    continue;
                }
                let through: Vec<&Line3> = chords.iter().filter(|l| l.contains(&f, &p)).collect();
                assert_eq!(through.len(), 1);
                let (l, _, _) = chord_through(&f, &p).unwrap();
                assert_eq!(&l, through[0]);
            }
        }
    }

    #[test]
    fn real_chords_meet_only_on_curve() {
        let f = Field::new(7).unwrap();
        let pts: Vec<Point1> = Point1::all(&f).collect();
        let mut chords = Vec::new();
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                chords.push(chord_of(&f, pts[i], pts[j]));
            }
        }
        for a in 0..chords.len() {
            for b in a + 1..chords.len() {
                for p in chords[a].points(&f) {
                    if chords[b].contains(&f, &p) {
                        assert!(on_curve(&f, &p));
                    }
                }
            }
        }
    }

    #[test]
    fn no_four_points_coplanar() {
        use crate::geometry::rank;
        for q in [5u64, 7] {
            let f = Field::new(q).unwrap();
            let pts: Vec<Vec4> = Point1::all(&f).map(|x| cubic_point(&f, x).0).collect();
            let n = pts.len();
            for a in 0..n {
                for b in a + 1..n {
                    for c in b + 1..n {
                        for d in c + 1..n {
                            assert_eq!(rank(&f, &[pts[a], pts[b], pts[c], pts[d]]), 4);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn polarity() {
        let f = Field::new(7).unwrap();
        let e0 = Point3::from_ints(&f, [1, 0, 0, 0]).unwrap();
        assert_eq!(null_polarity(&f, &e0).unwrap().0, [Fe(0), Fe(0), Fe(0), Fe(1)]);
        for x in Point1::all(&f) {
            assert_eq!(null_polarity(&f, &cubic_point(&f, x)).unwrap(), osculating_plane(&f, x));
        }
        let c = chord_of(&f, fin(&f, 0), Point1::Infinity);
        assert_eq!(polar_line(&f, &c).unwrap(), axis_of(&f, fin(&f, 0), Point1::Infinity).unwrap());
        for x in Point1::all(&f) {
            for y in Point1::all(&f) {
                let c = chord_of(&f, x, y);
                assert_eq!(polar_line(&f, &c).unwrap(), axis_of(&f, x, y).unwrap());
            }
        }
        // Pole of the polar is the point, and incidence is symmetric.
        let pts: Vec<Point3> = enumerate_points(&f).collect();
        for p in &pts {
            let pi = null_polarity(&f, p).unwrap();
            assert_eq!(pole(&f, &pi).unwrap(), *p);
        }
        for p in pts.iter().step_by(5) {
            for r in pts.iter().step_by(3) {
                assert_eq!(
                    incident(&f, p, &null_polarity(&f, r).unwrap()),
                    incident(&f, r, &null_polarity(&f, p).unwrap())
                );
            }
        }
        // The polar plane of a point contains the point.
        for p in enumerate_points(&f) {
            assert!(incident(&f, &p, &null_polarity(&f, &p).unwrap()));
        }
    }

    #[test]
    fn group_matrices() {
        let f = Field::new(7).unwrap();
        let (z, o) = (Fe::ZERO, Fe::ONE);
        let id = group_matrix(&f, o, z, z, o).unwrap();
        for (i, row) in id.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                assert_eq!(c, if i == j { o } else { z });
            }
        }
        let shift = group_matrix(&f, o, o, z, o).unwrap();
        for x in f.elements() {
            let img = apply_point(&f, &shift, &cubic_point(&f, Point1::Finite(x)));
            assert_eq!(img, cubic_point(&f, Point1::Finite(f.add(x, o))));
        }
        let swap = group_matrix(&f, z, o, o, z).unwrap();
        assert_eq!(
            apply_point(&f, &swap, &cubic_point(&f, Point1::Finite(z))),
            cubic_point(&f, Point1::Infinity)
        );
        assert_eq!(group_matrix(&f, o, o, o, o), Err(CubicError::SingularFractionalMap));
    }

    #[test]
    fn group_action_matches_mobius() {
        let f = Field::new(5).unwrap();
        let mut count = 0;
        for a in f.elements() {
            for b in f.elements() {
                for c in f.elements() {
                    for d in f.elements() {
                        let Ok(m) = group_matrix(&f, a, b, c, d) else { continue };
                        count += 1;
                        for x in Point1::all(&f) {
                            assert_eq!(
                                apply_point(&f, &m, &cubic_point(&f, x)),
                                cubic_point(&f, mobius(&f, (a, b, c, d), x))
                            );
                        }
                    }
                }
            }
        }
        // |GL(2,5)| = 480 matrices, giving |PGL(2,5)| = 120 projectivities.
        assert_eq!(count, 480);
    }

    #[test]
    fn group_homomorphism_and_lines() {
        let f = Field::new(7).unwrap();
        let g1 = (Fe(2), Fe(3), Fe(1), Fe(4));
        let g2 = (Fe(1), Fe(4), Fe(6), Fe(2));
        let m1 = group_matrix(&f, g1.0, g1.1, g1.2, g1.3).unwrap();
        let m2 = group_matrix(&f, g2.0, g2.1, g2.2, g2.3).unwrap();
        // Composite x -> g1(g2(x)).
        let comp = (
            f.add(f.mul(g1.0, g2.0), f.mul(g1.1, g2.2)),
            f.add(f.mul(g1.0, g2.1), f.mul(g1.1, g2.3)),
            f.add(f.mul(g1.2, g2.0), f.mul(g1.3, g2.2)),
            f.add(f.mul(g1.2, g2.1), f.mul(g1.3, g2.3)),
        );
        let m12 = group_matrix(&f, comp.0, comp.1, comp.2, comp.3).unwrap();
        for p in enumerate_points(&f) {
            let two_step = apply_point(&f, &m1, &apply_point(&f, &m2, &p));
            assert_eq!(two_step, apply_point(&f, &m12, &p));
        }
        for l in enumerate_lines(&f).take(200) {
            let img = apply_line(&f, &m1, &l);
            for p in l.points(&f) {
                assert!(img.contains(&f, &apply_point(&f, &m1, &p)));
            }
        }
    }

    #[test]
    fn osculating_plane_counts_through_points() {
        let f = Field::new(7).unwrap();
        for p in enumerate_points(&f) {
            let brute = Point1::all(&f)
                .filter(|&x| incident(&f, &p, &osculating_plane(&f, x)))
                .count();
            assert_eq!(osculating_planes_through(&f, &p), brute);
        }
    }
}
