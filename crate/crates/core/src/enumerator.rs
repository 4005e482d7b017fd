//! The constant mu_q, the coset leader weight enumerator of the code whose
//! parity-check columns are the rational points of the twisted cubic, and
//! brute-force syndrome counts used to check it.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::classify::{self, ClassifyError, LineClass, PlaneClass, Sign};
use crate::cubic;
use crate::field::{Fe, Field, FieldError};
use crate::geometry::{self, normalize, tuple_index, Line3, Point1, Point3, Vec4};

/// Largest q accepted by [`mu_bruteforce`].
pub const MU_BRUTE_MAX_Q: u32 = 64;
/// Largest q for the m = 1 syndrome scan (and its full-table cross-check).
pub const SCAN_MAX_Q_M1: u32 = 32;
/// Largest q for the m = 2 syndrome scan.
pub const SCAN_MAX_Q_M2: u32 = 13;
/// Smallest q for which the closed form of mu_q is proved.
pub const MU_FORMULA_MIN_Q: u32 = 23;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumError {
    #[error("q = {0} exceeds the brute-force ceiling of {MU_BRUTE_MAX_Q}")]
    FieldTooLarge(u32),
    #[error("q = {q}, m = {m} exceeds the syndrome scan budget (m = 1: q <= {SCAN_MAX_Q_M1}, m = 2: q <= {SCAN_MAX_Q_M2})")]
    BudgetExceeded { q: u32, m: u32 },
    #[error("coefficient of a_3(T) is not an integer for q = {q}, mu = {mu}")]
    NonIntegralCoefficient { q: u64, mu: u64 },
    #[error("the point lies on the twisted cubic")]
    PointOnCurve,
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MuMethod {
    BruteForce,
    ClosedForm,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MuResult {
    pub q: u32,
    pub mu: u64,
    pub method: MuMethod,
    /// For the closed form: whether q is in the range where it is proved.
    pub valid: bool,
}

/// Counts lines that are not real chords and lie in at least one 3-plane.
///
/// The rows of a reduced echelon 2x4 matrix run once over all lines, here
/// read as the two equations `h1, h2`; the pencil is `h1 + t h2` and `h2`.
/// A line with `k` rational curve points has pencil curve-point total
/// `k (q+1) + (q+1-k)`.
pub fn mu_bruteforce(f: &Field) -> Result<MuResult, EnumError> {
    classify::require_q5(f)?;
    let q = f.q();
    if q > MU_BRUTE_MAX_Q {
        return Err(EnumError::FieldTooLarge(q));
    }
    let table = classify::plane_table(f);
    let counts: Vec<u8> = table.iter().map(|c| c.curve_points() as u8).collect();
    let n3: Vec<bool> = table.iter().map(|&c| c == PlaneClass::N3).collect();
    let mu = (0..geometry::num_lines(q))
        .into_par_iter()
        .filter(|&i| {
            let l = Line3::from_index(f, i).unwrap();
            let [h1, h2] = l.basis();
            let mut total = 0u64;
            let mut hit = false;
            let mut visit = |v: &Vec4| {
                let idx = tuple_index(q, &normalize(f, v).unwrap()) as usize;
                total += counts[idx] as u64;
                hit |= n3[idx];
            };
            for t in f.elements() {
                visit(&geometry::combine(f, Fe::ONE, h1, t, h2));
            }
            visit(h2);
            let k = (total - q as u64 - 1) / q as u64;
            k != 2 && hit
        })
        .count() as u64;
    Ok(MuResult { q, mu, method: MuMethod::BruteForce, valid: true })
}

/// Twice the closed form, by q mod 6.
fn two_mu(q: u64) -> u64 {
    let base = 2 * q.pow(4) + 2 * q.pow(3) + q * q;
    match q % 6 {
        1 => base + q,
        2 => base - 3 * q - 2,
        3 => base - 1,
        4 => base - q - 2,
        5 => base - q,
        _ => unreachable!("q is a prime power >= 5"),
    }
}

pub fn mu_formula(q: u32) -> MuResult {
    MuResult {
        q,
        mu: two_mu(q as u64) / 2,
        method: MuMethod::ClosedForm,
        valid: q >= MU_FORMULA_MIN_Q,
    }
}

/// Sum of the tabulated sizes of the classes marked Plus.
pub fn mu_from_signs(q: u64, signs: &BTreeMap<LineClass, Sign>) -> u64 {
    signs.iter().filter(|(_, &s)| s == Sign::Plus).map(|(c, _)| c.expected_size(q)).sum()
}

/// Number of 3-planes through a point off the curve.
pub fn three_planes_through_point(f: &Field, p: &Point3) -> Result<u64, EnumError> {
    if cubic::on_curve(f, p) {
        return Err(EnumError::PointOnCurve);
    }
    Ok(geometry::enumerate_planes(f)
        .filter(|pi| geometry::incident(f, p, pi) && classify::plane_class(f, pi) == PlaneClass::N3)
        .count() as u64)
}

/// A polynomial in T with exact integer coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetPolynomial {
    pub q: u64,
    pub coeffs: Vec<BigInt>,
}

impl CosetPolynomial {
    fn new(q: u64, mut coeffs: Vec<BigInt>) -> CosetPolynomial {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        CosetPolynomial { q, coeffs }
    }

    pub fn eval(&self, t: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * t + c)
    }

    pub fn add(&self, o: &CosetPolynomial) -> CosetPolynomial {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = BigInt::zero();
        let c = (0..n)
            .map(|i| self.coeffs.get(i).unwrap_or(&z) + o.coeffs.get(i).unwrap_or(&z))
            .collect();
        CosetPolynomial::new(self.q, c)
    }

    pub fn neg(&self) -> CosetPolynomial {
        CosetPolynomial::new(self.q, self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, o: &CosetPolynomial) -> CosetPolynomial {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &CosetPolynomial) -> CosetPolynomial {
        if self.coeffs.is_empty() || o.coeffs.is_empty() {
            return CosetPolynomial::new(self.q, Vec::new());
        }
        let mut c = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        CosetPolynomial::new(self.q, c)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl fmt::Display for CosetPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let a = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let coef = if a.is_one() && k > 0 { String::new() } else { a.to_string() };
            match k {
                0 => write!(f, "{a}")?,
                1 => write!(f, "{coef}T")?,
                _ => write!(f, "{coef}T^{k}")?,
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetPolynomials {
    pub q: u64,
    pub mu: u64,
    /// `a[1..=4]`; `a[0]` is unused and zero.
    pub a: [CosetPolynomial; 5],
    pub alpha: [CosetPolynomial; 5],
}

impl CosetPolynomials {
    pub fn alpha_at(&self, t: &BigInt) -> [BigInt; 5] {
        std::array::from_fn(|i| self.alpha[i].eval(t))
    }
}

/// The polynomials a_i(T) and alpha_i(T) for a given q and mu_q.
pub fn a_polynomials(q: u64, mu: u64) -> Result<CosetPolynomials, EnumError> {
    let b = |x: u64| BigInt::from(x);
    let bi = |x: i64| BigInt::from(x);
    let poly = |c: Vec<BigInt>| CosetPolynomial::new(q, c);
    let (qq, mm) = (b(q), b(mu));
    let t_minus = |c: &BigInt| poly(vec![-c.clone(), bi(1)]);

    let a1 = poly(vec![qq.clone() + 1]);
    let a2 = poly(vec![qq.clone() * (qq.clone() + 1) / 2]).mul(&t_minus(&bi(1)));
    let bracket = poly(vec![bi(1), bi(1), bi(1)])
        .sub(&poly(vec![qq.clone() * &qq + &qq + 1]).mul(&t_minus(&(qq.clone() - 1))));
    let six_a3 = poly(vec![bi(3) * &qq * (qq.clone() + 1) * (qq.clone() + 1)])
        .add(&poly(vec![(qq.clone() + 1) * &qq * (qq.clone() - 1)]).mul(&bracket))
        .add(&poly(vec![bi(6) * &mm]).mul(&t_minus(&qq)));
    if six_a3.coeffs.iter().any(|c| !(c % 6u32).is_zero()) {
        return Err(EnumError::NonIntegralCoefficient { q, mu });
    }
    let a3 = poly(six_a3.coeffs.iter().map(|c| c / 6u32).collect());
    let total = poly(vec![bi(1), bi(1), bi(1), bi(1)]);
    let a4 = total.sub(&a1).sub(&a2).sub(&a3);
    let zero = poly(Vec::new());
    let a = [zero, a1, a2, a3, a4];
    let tm1 = t_minus(&bi(1));
    let alpha = std::array::from_fn(|i| if i == 0 { poly(vec![bi(1)]) } else { tm1.mul(&a[i]) });
    Ok(CosetPolynomials { q, mu, a, alpha })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EnumeratorSource {
    Formula(MuMethod),
    BruteForce,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EnumeratorReport {
    pub q: u32,
    pub m: u32,
    /// alpha_0..alpha_4 at T = q^m, as decimal strings.
    pub alpha: Vec<String>,
    pub source: EnumeratorSource,
}

impl EnumeratorReport {
    pub fn values(&self) -> Vec<BigInt> {
        self.alpha.iter().map(|s| s.parse().unwrap()).collect()
    }
}

pub fn formula_report(q: u32, m: u32, mu: &MuResult) -> Result<EnumeratorReport, EnumError> {
    let polys = a_polynomials(q as u64, mu.mu)?;
    let t = BigInt::from(q).pow(m);
    Ok(EnumeratorReport {
        q,
        m,
        alpha: polys.alpha_at(&t).iter().map(|x| x.to_string()).collect(),
        source: EnumeratorSource::Formula(mu.method),
    })
}

struct Bitset(Vec<AtomicU64>);

impl Bitset {
    fn new(n: u64) -> Bitset {
        Bitset((0..n.div_ceil(64)).map(|_| AtomicU64::new(0)).collect())
    }

    fn set(&self, i: u64) {
        self.0[(i / 64) as usize].fetch_or(1 << (i % 64), Ordering::Relaxed);
    }

    fn count(&self) -> u64 {
        self.0.iter().map(|w| w.load(Ordering::Relaxed).count_ones() as u64).sum()
    }

    fn count_minus(&self, other: &Bitset) -> u64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a.load(Ordering::Relaxed) & !b.load(Ordering::Relaxed)).count_ones() as u64)
            .sum()
    }
}

/// Parity-check columns: the curve points over GF(q), embedded in `k`.
fn columns(f: &Field, embed: impl Fn(Fe) -> Fe) -> Vec<Vec4> {
    Point1::all(f).map(|x| cubic::cubic_point(f, x).0.map(&embed)).collect()
}

/// Counts of syndromes (as projective points) of weight 1, 2 and 3 over
/// `k`, by deduplicating the spans of at most three columns.
fn scan_weights(k: &Field, cols: &[Vec4]) -> [u64; 3] {
    let qm = k.q();
    let n = geometry::num_points(qm);
    let low = Bitset::new(n);
    let w1 = Bitset::new(n);
    let idx = |v: &Vec4| tuple_index(qm, &normalize(k, v).unwrap());
    for c in cols {
        w1.set(idx(c));
        low.set(idx(c));
    }
    let pairs: Vec<(usize, usize)> = (0..cols.len()).flat_map(|i| (i + 1..cols.len()).map(move |j| (i, j))).collect();
    pairs.par_iter().for_each(|&(i, j)| {
        for l in k.nonzero() {
            low.set(idx(&geometry::combine(k, l, &cols[i], Fe::ONE, &cols[j])));
        }
    });
    let three = Bitset::new(n);
    let triples: Vec<(usize, usize, usize)> = pairs
        .iter()
        .flat_map(|&(i, j)| (j + 1..cols.len()).map(move |l| (i, j, l)))
        .collect();
    triples.par_iter().for_each(|&(i, j, l)| {
        for a in k.nonzero() {
            let base = geometry::combine(k, a, &cols[i], Fe::ONE, &cols[l]);
            for b in k.nonzero() {
                three.set(idx(&geometry::combine(k, b, &cols[j], Fe::ONE, &base)));
            }
        }
    });
    let one = w1.count();
    [one, low.count() - one, three.count_minus(&low)]
}

/// Projective syndrome counts by weight 1..4 from a breadth-first search
/// over PG(3,q): a point at weight w reaches the points of its lines to
/// the columns at weight w+1.
pub fn syndrome_table_weights(f: &Field) -> [u64; 4] {
    let q = f.q();
    let cols = columns(f, |x| x);
    let n = geometry::num_points(q) as usize;
    let mut dist = vec![u8::MAX; n];
    let mut queue = VecDeque::new();
    for c in &cols {
        let i = tuple_index(q, c) as usize;
        dist[i] = 1;
        queue.push_back(*c);
    }
    while let Some(s) = queue.pop_front() {
        let w = dist[tuple_index(q, &s) as usize];
        for c in &cols {
            for l in f.nonzero() {
                let Some(v) = normalize(f, &geometry::combine(f, l, &s, Fe::ONE, c)) else {
                    continue;
                };
                let i = tuple_index(q, &v) as usize;
                if dist[i] == u8::MAX {
                    dist[i] = w + 1;
                    queue.push_back(v);
                }
            }
        }
    }
    let mut out = [0u64; 4];
    for d in dist {
        assert!((1..=4).contains(&d), "every syndrome has weight at most 4");
        out[d as usize - 1] += 1;
    }
    out
}

/// Brute-force alpha_0..alpha_4 at T = q^m.
pub fn coset_enumerator_bruteforce(f: &Field, m: u32) -> Result<EnumeratorReport, EnumError> {
    classify::require_q5(f)?;
    let q = f.q();
    let w = match m {
        1 if q <= SCAN_MAX_Q_M1 => scan_weights(f, &columns(f, |x| x)),
        2 if q <= SCAN_MAX_Q_M2 => {
            let ext = f.quadratic_extension()?;
            scan_weights(ext.field(), &columns(f, |x| ext.embed(x)))
        }
        _ => return Err(EnumError::BudgetExceeded { q, m }),
    };
    let t = (q as u128).pow(m);
    let alpha: [u128; 4] = [1, (t - 1) * w[0] as u128, (t - 1) * w[1] as u128, (t - 1) * w[2] as u128];
    let rest = t.pow(4) - alpha.iter().sum::<u128>();
    let mut values: Vec<String> = alpha.iter().map(|x| x.to_string()).collect();
    values.push(rest.to_string());
    Ok(EnumeratorReport { q, m, alpha: values, source: EnumeratorSource::BruteForce })
}

/// alpha at T = q from the closed expressions: a_4(q) = 0.
pub fn alpha_m1_closed(q: u64) -> [BigInt; 5] {
    let b = BigInt::from(q);
    let qm1 = &b - 1u32;
    [
        BigInt::one(),
        (&b + 1u32) * &qm1,
        &qm1 * (&b * (&b + 1u32) * &qm1 / 2u32),
        &qm1 * (&b * (&b + 1u32) * (&b + 1u32) / 2u32),
        BigInt::zero(),
    ]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub skipped: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Check {
        Check { name: name.into(), pass, skipped: false, detail: detail.into() }
    }

    fn skip(name: impl Into<String>, detail: impl Into<String>) -> Check {
        Check { name: name.into(), pass: true, skipped: true, detail: detail.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub q: u32,
    pub m: Vec<u32>,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Largest q for which `verify` runs the full census.
pub const CENSUS_MAX_Q: u32 = 32;

pub fn verify(f: &Field, ms: &[u32], seed: u64) -> Result<VerifyReport, EnumError> {
    classify::require_q5(f)?;
    let q = f.q();
    let q64 = q as u64;
    let mut checks = Vec::new();

    if q <= CENSUS_MAX_Q {
        let c = classify::class_census(f)?;
        let bad: Vec<String> = LineClass::ALL
            .iter()
            .filter_map(|cl| {
                let got = c.lines.get(cl).copied().unwrap_or(0);
                let want = if cl.occurs(f.p()) { cl.expected_size(q64) } else { 0 };
                (got != want).then(|| format!("{cl}: {got} != {want}"))
            })
            .chain(PlaneClass::ALL.iter().filter_map(|pc| {
                let got = c.planes.get(pc).copied().unwrap_or(0);
                (got != pc.expected_size(q64)).then(|| format!("{pc}: {got}"))
            }))
            .chain(classify::PointClass::ALL.iter().filter_map(|pc| {
                let got = c.points.get(pc).copied().unwrap_or(0);
                (got != pc.expected_size(f)).then(|| format!("{pc}: {got}"))
            }))
            .collect();
        checks.push(Check::new("census", bad.is_empty(), bad.join("; ")));
    } else {
        checks.push(Check::skip("census", format!("q > {CENSUS_MAX_Q}")));
    }

    let signs = classify::contribution_table(f, seed, 20)?;
    if q >= MU_FORMULA_MIN_Q {
        let bad: Vec<String> = signs
            .iter()
            .filter(|(c, s)| classify::expected_contribution(**c, q64).is_some_and(|e| e != **s))
            .map(|(c, s)| format!("{c}: {s}"))
            .collect();
        checks.push(Check::new("contribution_table", bad.is_empty(), bad.join("; ")));
    } else {
        checks.push(Check::skip("contribution_table", "tabulated signs are stated for q >= 23"));
    }

    let brute = mu_bruteforce(f)?;
    let formula = mu_formula(q);
    if formula.valid {
        checks.push(Check::new(
            "mu_formula",
            brute.mu == formula.mu,
            format!("brute {} formula {}", brute.mu, formula.mu),
        ));
        let from_signs = mu_from_signs(q64, &signs);
        checks.push(Check::new(
            "mu_from_signs",
            brute.mu == from_signs,
            format!("brute {} signs {}", brute.mu, from_signs),
        ));
    } else {
        checks.push(Check::skip("mu_formula", format!("closed form not proved for q < {MU_FORMULA_MIN_Q}")));
    }

    let polys = a_polynomials(q64, brute.mu)?;
    let t4 = CosetPolynomial::new(q64, vec![0, 0, 0, 0, 1].into_iter().map(BigInt::from).collect());
    let sum_alpha = polys.alpha.iter().fold(CosetPolynomial::new(q64, vec![]), |acc, p| acc.add(p));
    checks.push(Check::new("alpha_sum", sum_alpha == t4, sum_alpha.to_string()));

    for &m in ms {
        let name = format!("enumerator_m{m}");
        match coset_enumerator_bruteforce(f, m) {
            Ok(r) => {
                let t = BigInt::from(q).pow(m);
                let want = polys.alpha_at(&t);
                let got = r.values();
                let mut ok = got == want;
                if m == 1 {
                    ok &= got == alpha_m1_closed(q64);
                    if q <= SCAN_MAX_Q_M1 {
                        let w = syndrome_table_weights(f);
                        let t1 = q as u128 - 1;
                        let table: Vec<BigInt> = std::iter::once(BigInt::one())
                            .chain(w.iter().map(|&x| BigInt::from(x as u128 * t1)))
                            .collect();
                        ok &= table == got;
                    }
                }
                let divisible = got[1..].iter().all(|a| (a % (&t - 1u32)).is_zero());
                checks.push(Check::new(
                    name,
                    ok && divisible,
                    format!("brute {:?} formula {:?}", r.alpha, want.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
                ));
            }
            Err(e) => checks.push(Check::skip(name, e.to_string())),
        }
    }
    Ok(VerifyReport { q, m: ms.to_vec(), checks })
}
