use lrcoh::curves::*;
use lrcoh::exactmath::{frac, int};
use proptest::prelude::*;

fn module(gens: &[u64], complement: &[u64]) -> LambdaModule {
    LambdaModule::new(analyze_semigroup(gens).unwrap(), complement).unwrap()
}

#[test]
fn classification_examples() {
    assert_eq!(classify_connections(&module(&[2, 3], &[1])), Verdict::Unique(0));
    assert_eq!(classify_connections(&module(&[2, 3], &[])), Verdict::AllScalars);
    assert_eq!(classify_connections(&module(&[3, 4, 5], &[2])), Verdict::None);
}

#[test]
fn oracle_finds_nothing_for_l_two() {
    let m = module(&[3, 4, 5], &[2]);
    for bound in [4, 8, 16, 32] {
        assert_eq!(brute_force_connection_search(&m, bound), Verdict::None);
    }
}

#[test]
fn regular_point() {
    let m = module(&[1], &[]);
    assert!(m.semigroup.gamma1.is_empty());
    let c = int(0);
    let t = curve_cohomology(&m, &c, 6).unwrap();
    assert!(t.iter().all(|r| r.c1 == r.c0));
}

#[test]
fn unique_case_has_no_h1() {
    let m = module(&[2, 3], &[1]);
    let c = int(0);
    let t = curve_cohomology(&m, &c, m.default_bound(&c)).unwrap();
    assert!(t.iter().all(|r| r.h1 == 0));
    assert!(curvature_vanishes(&m, &c, 20));
}

#[test]
fn generic_scalar_has_no_h1() {
    let m = module(&[2, 3], &[]);
    for c in [frac(1, 2), int(-1), frac(7, 3)] {
        let t = curve_cohomology(&m, &c, m.default_bound(&c)).unwrap();
        assert!(t.iter().all(|r| r.h1 == 0 && r.h0 == 0));
    }
}

// With l = 0 and c in Lambda the degree-c cochain t^c E* survives:
// C1_c = 1 and d0 vanishes there.
#[test]
fn integral_scalar_in_lambda_leaves_one_class() {
    let m = module(&[2, 3], &[]);
    let c = int(5);
    let t = curve_cohomology(&m, &c, m.default_bound(&c)).unwrap();
    let nonzero: Vec<u64> = t.iter().filter(|r| r.h1 > 0).map(|r| r.degree).collect();
    assert_eq!(nonzero, vec![5]);
    assert_eq!(t[5].h0, 1);
}

fn arb_module() -> impl Strategy<Value = LambdaModule> {
    (prop::sample::subsequence(vec![2u64, 3, 4, 5, 6, 7], 1..4), prop::collection::vec(0u64..12, 0..4)).prop_filter_map(
        "valid module",
        |(gens, extra)| {
            let sg = analyze_semigroup(&gens).ok()?;
            // Lambda = Gamma plus some gaps, closed under adding Gamma.
            let mut lam: Vec<u64> = extra.into_iter().filter(|g| !sg.contains(*g)).collect();
            lam.sort_unstable();
            let horizon = sg.frobenius.max(0) as u64 + 1;
            let inside = |n: u64| sg.contains(n) || lam.iter().any(|&l| n >= l && sg.contains(n - l));
            let complement: Vec<u64> = (0..=horizon).filter(|&n| !inside(n)).collect();
            LambdaModule::new(sg, &complement).ok()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn oracle_agrees_with_trichotomy(m in arb_module()) {
        let bound = m.default_bound(&int(1));
        prop_assert_eq!(brute_force_connection_search(&m, bound), classify_connections(&m));
    }

    #[test]
    fn admissible_connections_are_flat(m in arb_module(), c in -3i64..10) {
        let c = match classify_connections(&m) {
            Verdict::AllScalars => int(c),
            Verdict::Unique(l0) => int(l0 as i64),
            Verdict::None => return Ok(()),
        };
        prop_assert!(curvature_vanishes(&m, &c, m.default_bound(&c)));
    }

    #[test]
    fn stabilization(m in arb_module(), c in -3i64..10) {
        let c = match classify_connections(&m) {
            Verdict::AllScalars => int(c),
            Verdict::Unique(l0) => int(l0 as i64),
            Verdict::None => return Ok(()),
        };
        let bound = m.default_bound(&c);
        let t = curve_cohomology(&m, &c, bound + 10).unwrap();
        let start = (m.semigroup.frobenius + 1) as u64 + m.semigroup.gamma1.last().copied().unwrap_or(0)
            + m.complement.last().copied().unwrap_or(0) + 1;
        for r in t.iter().filter(|r| r.degree >= start) {
            prop_assert_eq!((r.c0, r.c1), (1, 1));
        }
        for r in t.iter().filter(|r| r.degree > bound) {
            prop_assert_eq!(r.h1, 0);
        }
    }
}
