use lrcoh::derlie::Surface;
use lrcoh::polyring::WeightedRing;
use lrcoh::rincomplex::*;

fn surface(w: &[i64], f: &str) -> Surface {
    Surface::new(WeightedRing::from_text(&["x", "y", "z"], w, f).unwrap()).unwrap()
}

fn corpus() -> Vec<Surface> {
    vec![
        surface(&[1, 1, 1], "x^3+y^3+z^3"),
        surface(&[1, 1, 1], "x^4+y^4+z^4"),
        surface(&[4, 3, 3], "x^3+y^4+z^4"),
        surface(&[1, 1, 1], "x^2+y^2+z^2"),
        surface(&[3, 2, 1], "x^2+y^3+z^6"),
        surface(&[1, 1, 1], "x^3+y^3+z^3+x*y*z"),
    ]
}

// Genus of a smooth plane curve of degree d.
fn genus(d: usize) -> usize {
    (d - 1) * (d - 2) / 2
}

#[test]
fn genus_sweep() {
    for d in 3..=6usize {
        let f = format!("x^{d}+y^{d}+z^{d}");
        let s = surface(&[1, 1, 1], &f);
        let t = cohomology_table(&s, default_window(&s));
        assert_eq!(t.totals(), (1, genus(d), genus(d)), "{f}");
        assert_eq!(t.support(), vec![0], "{f}");
    }
}

#[test]
fn structure_checks_on_corpus() {
    for s in corpus() {
        let t = cohomology_table(&s, default_window(&s));
        let checks = verify_theorem_c(&s, &t);
        assert!(checks.iter().all(|c| c.passed), "{:?}: {checks:?}", s.ring().f());
        assert!(t.records.iter().all(|r| r.euler_characteristic_holds()));
    }
}

#[test]
fn complex_property_on_corpus() {
    for s in corpus() {
        assert!(complex_property_holds(&s, default_window(&s)));
        assert!(relation_rows_vanish(&s));
        assert!(s.factorization_holds() && s.relation_columns_hold());
    }
}

#[test]
fn h1_of_cubic_is_psi4() {
    let s = surface(&[1, 1, 1], "x^3+y^3+z^3");
    let t = cohomology_table(&s, (-3, 6));
    assert_eq!(t.h1_representatives.len(), 1);
    let (rep, combo) = &t.h1_representatives[0];
    assert_eq!(combo.len(), 1);
    assert_eq!(combo[0].0, 3);
    assert_eq!(rep.values, s.psi_row(3));
    assert!(d1(&s, rep).unwrap().value.is_zero());
}

#[test]
fn minimally_elliptic() {
    let s = surface(&[4, 3, 3], "x^3+y^4+z^4");
    let t = cohomology_table(&s, default_window(&s));
    assert_eq!(t.totals(), (1, 0, 0));
}
