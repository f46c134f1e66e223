use lrcoh::derlie::Surface;
use lrcoh::exactmath::{frac, is_nonnegative_integer, Scalar};
use lrcoh::milnor::*;
use lrcoh::polyring::WeightedRing;
use lrcoh::rincomplex::{cohomology_table, default_window};
use num_traits::ToPrimitive;

fn ring(w: &[i64], f: &str) -> WeightedRing {
    WeightedRing::from_text(&["x", "y", "z"], w, f).unwrap()
}

// prod (d/d_i - 1)
fn product_formula(r: &WeightedRing) -> usize {
    let d = r.degree();
    let q: Scalar = r.weights().iter().map(|&di| frac(d, di) - frac(1, 1)).product();
    assert!(is_nonnegative_integer(&q));
    q.to_integer().to_usize().unwrap()
}

const CORPUS: &[(&[i64], &str)] = &[
    (&[1, 1, 1], "x^3+y^3+z^3"),
    (&[4, 3, 3], "x^3+y^4+z^4"),
    (&[1, 1, 1], "x^2+y^2+z^2"),
    (&[1, 1, 1], "x^4+y^4+z^4"),
    (&[1, 1, 1], "x^5+y^5+z^5"),
    (&[3, 2, 1], "x^2+y^3+z^6"),
    (&[1, 1, 1], "x^3+y^3+z^3+x*y*z"),
];

#[test]
fn mu_matches_product_formula() {
    for (w, f) in CORPUS {
        let r = ring(w, f);
        assert_eq!(milnor_number(&r).unwrap(), product_formula(&r), "{f}");
    }
}

#[test]
fn named_values() {
    assert_eq!(milnor_number(&ring(&[1, 1, 1], "x^3+y^3+z^3")).unwrap(), 8);
    assert_eq!(milnor_number(&ring(&[4, 3, 3], "x^3+y^4+z^4")).unwrap(), 18);
    assert_eq!(milnor_number(&ring(&[1, 1, 1], "x^2+y^2+z^2")).unwrap(), 1);
}

#[test]
fn tau_equals_mu() {
    for (w, f) in CORPUS {
        let r = ring(w, f);
        assert_eq!(tjurina_number(&r).unwrap(), milnor_number(&r).unwrap(), "{f}");
    }
}

#[test]
fn cross_check_with_cohomology() {
    for (w, f) in CORPUS {
        let s = Surface::new(ring(w, f)).unwrap();
        let t = cohomology_table(&s, default_window(&s));
        let checks = verify_mu_tau_cohomology(s.ring(), &t);
        assert!(checks.iter().all(|c| c.passed), "{f}: {checks:?}");
    }
}

#[test]
fn series_is_symmetric() {
    for (w, f) in CORPUS {
        let series = milnor_series(&ring(w, f)).unwrap();
        let dims: Vec<usize> = series.iter().map(|(_, n)| *n).collect();
        let rev: Vec<usize> = dims.iter().rev().copied().collect();
        assert_eq!(dims, rev, "{f}");
    }
}
