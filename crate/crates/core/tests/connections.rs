use lrcoh::derlie::Surface;
use lrcoh::exactmath::{frac, int};
use lrcoh::modconn::*;
use lrcoh::polyring::{Polynomial, WeightedRing};
use lrcoh::rincomplex::{d0, d1_intrinsic};
use proptest::prelude::*;

fn surface(w: &[i64], f: &str) -> Surface {
    Surface::new(WeightedRing::from_text(&["x", "y", "z"], w, f).unwrap()).unwrap()
}

fn cubic() -> Surface {
    surface(&[1, 1, 1], "x^3+y^3+z^3")
}

fn mat(ring: &WeightedRing, rows: &[&[&str]]) -> PolyMatrix {
    rows.iter().map(|r| r.iter().map(|t| ring.parse(t).unwrap()).collect()).collect()
}

fn cubic_module(s: &Surface) -> PresentedModule {
    PresentedModule::new(s.ring(), vec![0, 0], mat(s.ring(), &[&["x", "-y^2+y*z-z^2"], &["y+z", "x^2"]])).unwrap()
}

fn partner_module(s: &Surface) -> PresentedModule {
    PresentedModule::new(s.ring(), vec![0, 1], mat(s.ring(), &[&["x^2", "y^2-y*z+z^2"], &["-y-z", "x"]])).unwrap()
}

// Row-vector matrices for x d/dx + y d/dy + z d/dz.
fn printed(s: &Surface, prime: bool) -> Connection {
    let r = s.ring();
    let c = if prime {
        Connection {
            a: [
                mat(r, &[&["2/3", "0"], &["0", "2/3"]]),
                mat(r, &[&["x*z", "2*x"], &["-2*y+z", "x*z"]]),
                mat(r, &[&["-x*y", "2*x"], &["x^2+y-2*z", "x*z"]]),
                mat(r, &[&["x^2-2*y+2*z", "0"], &["0", "x^2+y-z"]]),
            ],
        }
    } else {
        Connection {
            a: [
                mat(r, &[&["2/3", "0"], &["0", "2/3"]]),
                mat(r, &[&["0", "2*x"], &["-2*y+z", "0"]]),
                mat(r, &[&["0", "2*x"], &["y-2*z", "0"]]),
                mat(r, &[&["-2*y+2*z", "0"], &["0", "y-z"]]),
            ],
        }
    };
    c.transposed().with_euler_scaled(&int(3))
}

#[test]
fn corpus_modules_admit_integrable_connections() {
    let s = cubic();
    for m in [cubic_module(&s), partner_module(&s), PresentedModule::free()] {
        let c = find_connection(&s, &m).unwrap();
        let checks = check_connection(&s, &m, &c).unwrap();
        assert!(checks.iter().all(|c| c.passed), "{checks:?}");
        assert!(is_homogeneous(&s, &m, &c));
        assert!(curvature(&s, &m, &c).unwrap().integrable());
    }
    let q = surface(&[1, 1, 1], "x*z-y^2");
    let m = PresentedModule::new(q.ring(), vec![0, 0], mat(q.ring(), &[&["x", "y"], &["y", "z"]])).unwrap();
    let c = find_connection(&q, &m).unwrap();
    assert!(is_connection(&q, &m, &c).unwrap());
    assert!(curvature(&q, &m, &c).unwrap().integrable());
}

#[test]
fn free_modules_on_weighted_rings() {
    for (w, f) in [(vec![4, 3, 3], "x^3+y^4+z^4"), (vec![1, 1, 1], "x^4+y^4+z^4"), (vec![3, 2, 1], "x^2+y^3+z^6")] {
        let s = surface(&w, f);
        let m = PresentedModule::free();
        let c = find_connection(&s, &m).unwrap();
        assert!(is_connection(&s, &m, &c).unwrap(), "{f}");
        assert_eq!(euler_scalar(&s, &m, &c), Some(int(0)), "{f}");
    }
}

#[test]
fn euler_scalar_of_cubic_module() {
    let s = cubic();
    let m = cubic_module(&s);
    assert_eq!(euler_scalar(&s, &m, &printed(&s, false)), Some(frac(2, 9)));
    assert_eq!(euler_scalar(&s, &m, &find_connection(&s, &m).unwrap()), Some(frac(2, 9)));
}

#[test]
fn wrong_euler_scalar_is_rejected() {
    let s = cubic();
    let m = cubic_module(&s);
    let mut c = printed(&s, false);
    c.a[0] = scalar_matrix(s.ring(), 2, &s.ring().zero());
    assert!(!is_connection(&s, &m, &c).unwrap());
    // The printed matrices read as column-vector matrices fail descent.
    let raw = printed(&s, false).transposed();
    assert!(!is_connection(&s, &m, &raw).unwrap());
}

#[test]
fn truncation() {
    let s = cubic();
    let m = cubic_module(&s);
    let n = printed(&s, false);
    assert_eq!(truncate_degree_zero(&s, &m, &printed(&s, true)), n);
    // A degree-zero potential survives truncation; a degree-one potential does not.
    let psi4 = s.psi_row(3);
    let shifted = add_scalar_potential(&s, &n, &psi4);
    assert_eq!(truncate_degree_zero(&s, &m, &shifted), shifted);
    let xi = d0(&s, &s.ring().parse("x").unwrap(), 1);
    let moved = add_scalar_potential(&s, &n, &xi.values);
    assert!(!is_homogeneous(&s, &m, &moved));
    assert_eq!(truncate_degree_zero(&s, &m, &moved), n);
}

#[test]
fn integrability_class_of_printed_prime() {
    let s = cubic();
    let m = cubic_module(&s);
    let np = printed(&s, true);
    let rec = curvature(&s, &m, &np).unwrap();
    assert!(!rec.integrable());
    assert!(rec.pairs.iter().all(|p| p.scalar.is_some()));
    let ic = integrability_class(&s, &m, &np).unwrap();
    assert!(ic.vanishes && ic.corrected_integrable);
    assert!(is_connection(&s, &m, ic.corrected.as_ref().unwrap()).unwrap());
}

#[test]
fn equivalence() {
    let s = cubic();
    let m = cubic_module(&s);
    let n = printed(&s, false);
    let ring = s.ring();
    let same = equivalent(&s, &m, &n, &n).unwrap();
    assert!(same.equivalent);
    let psi4 = s.psi_row(3);
    let t1 = add_scalar_potential(&s, &n, &psi4);
    assert!(!equivalent(&s, &m, &n, &t1).unwrap().equivalent);
    let half: [Polynomial; 4] = std::array::from_fn(|j| psi4[j].scale(&frac(1, 2)));
    assert!(!equivalent(&s, &m, &n, &add_scalar_potential(&s, &n, &half)).unwrap().equivalent);
    for (r, w) in [("x", 1), ("x*y - z^2", 2), ("x^2*y", 3)] {
        let p = ring.parse(r).unwrap();
        let shifted = add_scalar_potential(&s, &n, &d0(&s, &p, w).values);
        let e = equivalent(&s, &m, &n, &shifted).unwrap();
        assert!(e.equivalent, "{r}");
        let back = d0(&s, e.gauge.as_ref().unwrap(), w);
        assert_eq!(back.values, d0(&s, &p, w).values);
    }
    // A potential that is not a cocycle is reported, not misread.
    let bogus = [ring.zero(), ring.parse("x^2").unwrap(), ring.zero(), ring.zero()];
    let c2 = add_scalar_potential(&s, &n, &bogus);
    assert!(equivalent(&s, &m, &n, &c2).is_err());
}

#[test]
fn equivalence_on_free_module_of_quartic() {
    let s = surface(&[1, 1, 1], "x^4+y^4+z^4");
    let m = PresentedModule::free();
    let c = find_connection(&s, &m).unwrap();
    // H1_0 has dimension 3 here; every psi_4 multiple of degree 0 changes the class.
    for v in ["x", "y", "z"] {
        let psi = s.psi_multiple(3, &s.ring().parse(v).unwrap(), 1);
        let c2 = add_scalar_potential(&s, &c, &psi.values);
        assert_eq!(psi.degree, 0);
        assert!(!equivalent(&s, &m, &c, &c2).unwrap().equivalent, "{v}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // K(nabla + tau) = K(nabla) + d1(tau) for tau in C^1.
    #[test]
    fn curvature_shifts_by_d1(w in -1i64..=2, coeffs in prop::collection::vec(-3i64..=3, 12)) {
        let s = cubic();
        let m = cubic_module(&s);
        let n = printed(&s, false);
        let basis = s.c1_graded_basis(w);
        let ring = s.ring();
        let mut tau: [Polynomial; 4] = std::array::from_fn(|_| ring.zero());
        for (b, c) in basis.iter().zip(&coeffs) {
            for j in 0..4 {
                tau[j] = &tau[j] + &b.values[j].scale(&int(*c));
            }
        }
        let xi = lrcoh::derlie::OneCochain { values: tau.clone(), degree: w };
        let shifted = add_scalar_potential(&s, &n, &tau);
        prop_assert!(is_connection(&s, &m, &shifted).unwrap());
        let rec = curvature(&s, &m, &shifted).unwrap();
        for pc in &rec.pairs {
            let (p, q) = pc.pair;
            let expected = ring.reduce(&d1_intrinsic(&s, &xi, p, q));
            prop_assert_eq!(pc.scalar.clone().unwrap(), expected);
        }
    }
}
