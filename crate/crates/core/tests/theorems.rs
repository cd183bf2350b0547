use lpq_core::graph::{torus, ProductKind};
use lpq_core::labeling::{is_diagonal, validate, ConstraintParams};
use lpq_core::patterns::{exists_cycle_pattern, ConditionVector, Pattern};
use lpq_core::solver::Solver;
use lpq_core::theorems::{
    descent_terminal, lambda_cartesian, lambda_strong, verify_l2211_periodicity,
    verify_lemma_cartesian_local, verify_lemma_strong_local, verify_lemma_strong_local_at,
    verify_torus_diagonality, Certificate, LambdaValue, TerminalClass,
};
use lpq_core::Error;

const L21: ConstraintParams = ConstraintParams::L21;

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[test]
fn descent_terminal_classifies_by_gcd() {
    for m in 3..=200 {
        for n in 3..=200 {
            let t = descent_terminal(m, n).unwrap();
            let (big, small) = t.terminal;
            assert!(big >= small && big - small <= 2 && small >= 3, "({m}, {n}) -> {big}, {small}");
            let d = gcd(m, n);
            match t.class {
                TerminalClass::Gcd(x) => {
                    assert_eq!(x, d);
                    assert!(d >= 3);
                }
                TerminalClass::KPlus1(k) => {
                    assert!(d <= 2);
                    assert_eq!((big, small), (k + 1, k));
                }
                TerminalClass::KPlus2(k) => {
                    assert!(d <= 2);
                    assert_eq!((big, small), (k + 2, k));
                }
            }
        }
    }
}

#[test]
fn every_small_cartesian_four_labeling_is_diagonal() {
    for m in 3..=5 {
        for n in 3..=5 {
            let r = verify_torus_diagonality(ProductKind::Cartesian, m, n, 4, &Solver::default()).unwrap();
            assert!(r.holds, "{m}x{n}");
            assert_eq!(r.count == 0, gcd(m, n) <= 2, "{m}x{n} count {}", r.count);
        }
    }
    let g = torus(ProductKind::Cartesian, 5, 5).unwrap();
    let mut n = 0;
    Solver::default()
        .enumerate_labelings(&g, 4, L21, |c| {
            let f = lpq_core::Labeling::for_graph(&g, c.to_vec(), 4).unwrap();
            assert!(is_diagonal(&g, &f).unwrap());
            n += 1;
        })
        .unwrap();
    assert!(n > 0);
}

#[test]
fn local_lemmas_fail_one_color_up() {
    let strong7 = verify_lemma_strong_local_at(7, &Solver::default()).unwrap();
    assert!(!strong7.holds);
    let c = strong7.counterexample.unwrap();
    assert_ne!(c.get(1, 2), c.get(2, 1));
}

#[test]
fn local_lemmas_do_not_depend_on_parallelism() {
    let seq = Solver::default();
    let par = Solver::default().parallel(true);
    assert_eq!(
        verify_lemma_cartesian_local(&seq).unwrap(),
        verify_lemma_cartesian_local(&par).unwrap()
    );
    assert_eq!(
        verify_lemma_strong_local(&seq).unwrap(),
        verify_lemma_strong_local(&par).unwrap()
    );
    assert_eq!(
        verify_lemma_strong_local_at(7, &seq).unwrap(),
        verify_lemma_strong_local_at(7, &par).unwrap()
    );
}

#[test]
fn six_labelings_of_small_strong_tori_are_diagonal() {
    for (m, n) in [(4, 4), (4, 7), (7, 7), (5, 6)] {
        let r = verify_torus_diagonality(ProductKind::Strong, m, n, 6, &Solver::default().parallel(true)).unwrap();
        assert!(r.holds, "{m}x{n}");
        assert_eq!(r.count > 0, m % 7 == 0 && n % 7 == 0);
    }
}

#[test]
fn strong_dispatch_agrees_with_exact_search() {
    let small = lambda_strong(7, 7, Some(&Solver::default())).unwrap();
    let large = lambda_strong(49, 56, None).unwrap();
    assert_eq!(small.value, LambdaValue::Exact(6));
    assert_eq!(small.value, large.value);
}

#[test]
fn certificates_validate_across_ranges() {
    for m in (40..=70).step_by(3) {
        for n in [40, 45, 48, 60] {
            let r = lambda_cartesian(m, n, None).unwrap();
            match (&r.value, &r.certificate) {
                (LambdaValue::Exact(k), Certificate::ConstructedLabeling { graph, labeling, .. }) => {
                    assert_eq!(*k, 4);
                    assert_eq!(labeling.k_budget(), 4);
                    assert!(validate(graph, labeling, L21).unwrap().is_empty());
                    assert!(gcd(m, n) >= 3);
                }
                (LambdaValue::Exact(5), Certificate::CitedUpperPlusVerifiedLower { .. }) => {
                    assert!(gcd(m, n) <= 2)
                }
                other => panic!("unexpected {other:?}"),
            }
        }
    }
    for (m, n) in [(49, 56), (56, 56), (84, 126), (90, 135), (88, 132), (48, 50), (50, 60)] {
        let r = lambda_strong(m, n, None).unwrap();
        if let Certificate::ConstructedLabeling { graph, labeling, .. } = &r.certificate {
            let LambdaValue::Exact(k) = r.value else { panic!() };
            assert_eq!(labeling.k_budget(), k);
            assert!(validate(graph, labeling, L21).unwrap().is_empty());
        }
    }
    assert_eq!(lambda_strong(88, 132, None).unwrap().value, LambdaValue::Exact(7));
    assert_eq!(lambda_strong(50, 60, None).unwrap().value, LambdaValue::Interval(7, 8));
}

#[test]
fn out_of_range_needs_solve_flag() {
    assert!(matches!(lambda_cartesian(39, 40, None), Err(Error::OutOfRange { .. })));
    assert!(matches!(lambda_strong(48, 47, None), Err(Error::OutOfRange { .. })));
    // no 4-labeling exists when gcd <= 2, so the exact value is at least 5
    let r = lambda_cartesian(3, 4, Some(&Solver::default())).unwrap();
    let LambdaValue::Exact(k) = r.value else { panic!("expected an exact value") };
    assert!(k >= 5);
    let Certificate::ConstructedLabeling { graph, labeling, .. } = &r.certificate else {
        panic!("expected a witness")
    };
    assert!(validate(graph, labeling, L21).unwrap().is_empty());
}

#[test]
fn l2211_lengths_up_to_forty_are_multiples_of_seven() {
    let found = verify_l2211_periodicity(40).unwrap();
    assert_eq!(found.keys().copied().collect::<Vec<_>>(), vec![7, 14, 21, 28, 35]);
    let block = Pattern::from_digits("2053164").unwrap();
    // every witness repeats one rotation of the forced block
    for w in found.values() {
        let first = Pattern::new(w.colors()[..7].to_vec()).unwrap();
        assert!(w.colors().chunks(7).all(|c| c == first.colors()));
        assert!(
            (0..7).any(|r| block.rotated(r) == first)
                || (0..7).any(|r| {
                    let mirrored: Vec<u32> = block.colors().iter().rev().copied().collect();
                    Pattern::new(mirrored).unwrap().rotated(r) == first
                })
                || (0..7).any(|r| {
                    let comp: Vec<u32> = block.colors().iter().map(|&c| 6 - c).collect();
                    Pattern::new(comp).unwrap().rotated(r) == first
                })
        );
    }
    assert!(exists_cycle_pattern(8, 6, &ConditionVector::strong()).unwrap().is_none());
}
