use std::sync::OnceLock;

use proptest::prelude::*;

use num_bigint::BigInt;
use tcubic_core::classify::{self, LineClass};
use tcubic_core::cubic::{self, ChordType};
use tcubic_core::enumerator::{self, CosetPolynomial};
use tcubic_core::geometry::{self, Line3};
use tcubic_core::golden::Golden;
use tcubic_core::ratfun::{degree2_cases, form_divisor, Form, RatFun, Separability};
use tcubic_core::{Fe, Field, Point1};

const QS: [u64; 8] = [5, 7, 8, 9, 11, 13, 16, 27];

fn field(i: usize) -> &'static Field {
    static FIELDS: OnceLock<Vec<Field>> = OnceLock::new();
    &FIELDS.get_or_init(|| QS.iter().map(|&q| Field::new(q).unwrap()).collect())[i]
}

fn fields() -> impl Strategy<Value = &'static Field> {
    (0..QS.len()).prop_map(field)
}

fn field_and_line() -> impl Strategy<Value = (&'static Field, Line3)> {
    (0..QS.len(), any::<u64>()).prop_map(|(i, r)| {
        let f = field(i);
        (f, Line3::from_index(f, r % geometry::num_lines(f.q())).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn field_axioms(f in fields(), a in 0u64..1000, b in 0u64..1000, c in 0u64..1000) {
        let q = f.q() as u64;
        let (a, b, c) = (f.elem(a % q).unwrap(), f.elem(b % q).unwrap(), f.elem(c % q).unwrap());
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), Fe::ZERO);
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a)), Fe::ONE);
        }
        prop_assert_eq!(f.frobenius(f.add(a, b)), f.add(f.frobenius(a), f.frobenius(b)));
        prop_assert_eq!(f.pow(a, q), a);
        prop_assert_eq!(f.parse(&f.format(a)).unwrap(), a);
    }

    #[test]
    fn line_function_round_trip((f, l) in field_and_line()) {
        let phi = RatFun::from_line(&l);
        prop_assert_eq!(phi.to_line(&f).unwrap(), l);
    }

    #[test]
    fn base_and_morphism_degrees((f, l) in field_and_line()) {
        let phi = RatFun::from_line(&l);
        let b = phi.base_divisor(&f);
        let m = phi.associated_morphism(&f);
        prop_assert_eq!(b.degree() + m.degree() as i64, 3);
        prop_assert_eq!(form_divisor(f, &m.f).degree(), m.degree() as i64);
        if m.separability(&f) == Separability::Separable {
            let d = m.different(&f).unwrap();
            prop_assert_eq!(d.degree(), 2 * m.degree() as i64 - 2);
        }
    }

    #[test]
    fn polarity_is_an_involution((f, l) in field_and_line()) {
        prop_assume!(f.p() != 3);
        let dual = cubic::polar_line(f, &l).unwrap();
        prop_assert_eq!(cubic::polar_line(f, &dual).unwrap(), l.clone());
        let c = classify::line_class(f, &l);
        if matches!(c, LineClass::O2 | LineClass::O6) {
            prop_assert_eq!(classify::line_class(f, &dual), c);
        }
    }

    #[test]
    fn degree_two_morphisms_fall_in_one_case(f in fields(), c in prop::array::uniform6(any::<u64>())) {
        let q = f.q() as u64;
        let e: Vec<Fe> = c.iter().map(|&x| f.elem(x % q).unwrap()).collect();
        let Ok(m) = RatFun::new(f, Form::new(2, e[..3].to_vec()), Form::new(2, e[3..].to_vec())) else {
            return Ok(());
        };
        prop_assume!(m.base_divisor(f).is_zero());
        prop_assert_eq!(degree2_cases(f, &m).len(), 1);
        let case = degree2_cases(f, &m)[0];
        let stats = m.fiber_statistics(f);
        for (k, n) in case.expected_pijk(q) {
            prop_assert_eq!(stats.get(&k).copied().unwrap_or(0), n, "{:?} {:?}", case, k);
        }
    }
}

#[test]
fn enumerator_identities_for_golden_mu() {
    let g = Golden::bundled();
    let t4 = CosetPolynomial { q: 0, coeffs: vec![0.into(), 0.into(), 0.into(), 0.into(), 1.into()] };
    for ((q, key), mu) in &g.0 {
        if key != "mu" {
            continue;
        }
        let mu: u64 = mu.try_into().unwrap();
        let p = enumerator::a_polynomials(*q, mu).unwrap();
        let sum_a = p.a[1..].iter().fold(CosetPolynomial { q: *q, coeffs: vec![] }, |s, x| s.add(x));
        let want: Vec<BigInt> = vec![1.into(); 4];
        assert_eq!(sum_a.coeffs, want, "q={q}");
        let sum_alpha = p.alpha.iter().fold(CosetPolynomial { q: *q, coeffs: vec![] }, |s, x| s.add(x));
        assert_eq!(sum_alpha.coeffs, t4.coeffs, "q={q}");
    }
}

#[test]
fn bruteforce_matches_golden_records() {
    let g = Golden::bundled();
    for q in [5u64, 7, 8, 9, 11, 13, 16, 17, 19] {
        let f = &Field::new(q).unwrap();
        let mu = enumerator::mu_bruteforce(&f).unwrap().mu;
        assert_eq!(g.get(q, "mu"), Some(&BigInt::from(mu)), "q={q}");
        for m in [1u32, 2] {
            let Ok(r) = enumerator::coset_enumerator_bruteforce(f, m) else { continue };
            for (i, v) in r.values().iter().enumerate() {
                assert_eq!(g.get(q, &format!("alpha_m{m}_{i}")), Some(v), "q={q} m={m} i={i}");
            }
        }
    }
}

/// Off-curve points on a tangent or on an imaginary chord: ½q(q+1)² of them.
#[test]
fn tangent_and_imaginary_chord_points() {
    for q in [5u64, 7, 8, 9, 11] {
        let f = &Field::new(q).unwrap();
        let mut seen = std::collections::BTreeSet::new();
        for x in Point1::all(&f) {
            seen.extend(cubic::tangent_line(f, x).points(&f).into_iter().filter(|p| !cubic::on_curve(f, p)));
        }
        for t in f.elements() {
            for n in f.elements() {
                if cubic::chord_type(f, t, n) == ChordType::ImaginaryChord {
                    seen.extend(cubic::chord(f, t, n).points(&f));
                }
            }
        }
        assert_eq!(seen.len() as u64, q * (q + 1) * (q + 1) / 2, "q={q}");
    }
}
