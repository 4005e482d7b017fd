use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tcubic_core::classify::*;
use tcubic_core::cubic;
use tcubic_core::geometry::{self, Line3};
use tcubic_core::ratfun::{check_simple, RatFun};
use tcubic_core::Field;

fn fld(q: u64) -> Field {
    Field::new(q).unwrap()
}

#[test]
fn censuses_match_size_formulas() {
    for q in [5u64, 7, 8, 9, 11, 13] {
        let f = fld(q);
        let c = class_census(&f).unwrap();
        for cl in LineClass::ALL {
            let got = c.lines.get(&cl).copied().unwrap_or(0);
            let want = if cl.occurs(f.p()) { cl.expected_size(q) } else { 0 };
            assert_eq!(got, want, "q={q} {cl}");
        }
        for pc in PlaneClass::ALL {
            assert_eq!(c.planes[&pc], pc.expected_size(q), "q={q} {pc}");
        }
        for pc in PointClass::ALL {
            assert_eq!(c.points[&pc], pc.expected_size(&f), "q={q} {pc}");
        }
        assert_eq!(c.lines.values().sum::<u64>(), (q * q + 1) * (q * q + q + 1));
    }
}

#[test]
fn table_divisors_for_representatives() {
    for q in [5u64, 7, 8, 9, 13] {
        let f = fld(q);
        for cl in LineClass::present(&f) {
            let l = class_representative(&f, cl).unwrap();
            let a = analyze_line(&f, &l);
            let (b, m) = expected_divisors(&f, cl).unwrap();
            assert_eq!(a.base, b, "q={q} {cl} base");
            match m {
                ExpectedMorphism::Divisors { r, d } => {
                    assert_eq!(a.ramification.as_ref(), Some(&r), "q={q} {cl} R");
                    assert_eq!(a.different.as_ref(), Some(&d), "q={q} {cl} D");
                }
                ExpectedMorphism::Inseparable => assert!(a.ramification.is_none(), "q={q} {cl}"),
                ExpectedMorphism::Simple => assert!(check_simple(&f, &a.morphism).is_ok(), "q={q} {cl}"),
            }
        }
    }
}

#[test]
fn classes_are_group_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for q in [5u64, 7, 8, 9, 11, 13] {
        let f = fld(q);
        for _ in 0..200 {
            let l = random_line(&f, &mut rng);
            let g = random_group_element(&f, &mut rng);
            assert_eq!(line_class(&f, &cubic::apply_line(&f, &g, &l)), line_class(&f, &l), "q={q}");
        }
    }
}

#[test]
fn polarity_swaps_chords_and_axes() {
    for q in [5u64, 7, 8, 11] {
        let f = fld(q);
        for l in geometry::enumerate_lines(&f) {
            let c = line_class(&f, &l);
            let dual = match c {
                LineClass::O1 => LineClass::O1Prime,
                LineClass::O1Prime => LineClass::O1,
                LineClass::O3 => LineClass::O3Prime,
                LineClass::O3Prime => LineClass::O3,
                _ => continue,
            };
            assert_eq!(line_class(&f, &cubic::polar_line(&f, &l).unwrap()), dual, "q={q}");
        }
    }
}

#[test]
fn degree_three_permutations() {
    use LineClass::*;
    for q in [5u64, 7, 8, 9, 11, 13, 16, 25, 27] {
        let f = fld(q);
        let listed: &[LineClass] = match q % 6 {
            1 | 4 => &[O3Prime],
            2 | 5 => &[O1Prime],
            3 => &[O7, O81Minus],
            _ => unreachable!(),
        };
        for cl in LineClass::present(&f) {
            let l = class_representative(&f, cl).unwrap();
            let phi = RatFun::from_line(&l);
            if !phi.base_divisor(&f).is_zero() || cl == O6 {
                continue;
            }
            assert_eq!(phi.is_permutation(&f), listed.contains(&cl), "q={q} {cl}");
        }
    }
}

#[test]
fn tangents_and_imaginary_chords_avoid_three_planes() {
    for q in [7u64, 8, 9] {
        let f = fld(q);
        for l in geometry::enumerate_lines(&f) {
            let c = line_class(&f, &l);
            if c == LineClass::O2 || c == LineClass::O3 {
                assert!(!in_three_plane(&f, &l), "q={q} {c}");
            }
        }
    }
}

#[test]
fn census_is_thread_count_independent() {
    let f = fld(7);
    let a = class_census(&f).unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let b = pool.install(|| class_census(&f).unwrap());
    assert_eq!(a, b);
}

#[test]
fn o6_representative_is_first_in_order() {
    let f = fld(7);
    let rep = class_representative(&f, LineClass::O6).unwrap();
    let first = geometry::enumerate_lines(&f).find(|l: &Line3| line_class(&f, l) == LineClass::O6).unwrap();
    assert_eq!(rep, first);
}
