//! The graded complex `C^0 = R -> C^1 = Hom(Der, R) -> C^2 = Hom(^2 Der, R)`
//! and its cohomology, degree by degree.
//!
//! `d^1` is evaluated on the spanning set `{m * psi_i}` through the four
//! generator formulas; the spanning-set relations are checked to map to zero
//! in every degree, so the induced map on `C^1_w` is well defined.

use crate::derlie::{C1Piece, OneCochain, Surface, TwoCochain};
use crate::exactmath::{Echelon, Inserted, Scalar, SparseVec};
use crate::polyring::Polynomial;
use crate::Check;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeRecord {
    pub degree: i64,
    pub c0: usize,
    pub c1: usize,
    pub c2: usize,
    pub rank_d0: usize,
    pub rank_d1: usize,
    pub h0: usize,
    pub h1: usize,
    pub h2: usize,
    /// Every spanning-set relation of `C^1_w` mapped to zero under `d^1`.
    pub well_defined: bool,
}

impl DegreeRecord {
    pub fn euler_characteristic_holds(&self) -> bool {
        self.c0 as i64 - self.c1 as i64 + self.c2 as i64 == self.h0 as i64 - self.h1 as i64 + self.h2 as i64
    }
}

#[derive(Clone, Debug)]
pub struct CohomologyTable {
    pub window: (i64, i64),
    pub records: Vec<DegreeRecord>,
    /// Cocycles spanning `H^1_0` modulo coboundaries, each with its
    /// decomposition `sum c * m * psi_i`.
    pub h1_representatives: Vec<(OneCochain, Vec<(usize, Polynomial)>)>,
    /// Values on `Delta` spanning a complement of `im d^1` in `C^2_0`.
    pub h2_representatives: Vec<Polynomial>,
}

impl CohomologyTable {
    pub fn totals(&self) -> (usize, usize, usize) {
        self.records.iter().fold((0, 0, 0), |(a, b, c), r| (a + r.h0, b + r.h1, c + r.h2))
    }

    pub fn record(&self, w: i64) -> Option<&DegreeRecord> {
        self.records.iter().find(|r| r.degree == w)
    }

    /// Degrees with some nonzero cohomology.
    pub fn support(&self) -> Vec<i64> {
        self.records.iter().filter(|r| r.h0 + r.h1 + r.h2 > 0).map(|r| r.degree).collect()
    }
}

/// `[-|deg Delta| - d, |deg Delta| + 2d]`.
pub fn default_window(s: &Surface) -> (i64, i64) {
    let a = s.delta_degree().abs();
    let d = s.ring().degree();
    (-a - d, a + 2 * d)
}

/// `d^0(r) = (E(r), D1(r), D2(r), D3(r))` for `r` homogeneous of degree `w`.
pub fn d0(s: &Surface, r: &Polynomial, w: i64) -> OneCochain {
    let r = s.ring().reduce(r);
    OneCochain { values: std::array::from_fn(|j| s.generator(j).apply(s.ring(), &r)), degree: w }
}

/// `d^1(r * psi_i)` for `i` in `0..4` (the rows `psi^(1)..psi^(4)`), with
/// values `-D3(r)`, `D2(r)`, `-D1(r)`, `E(r) + delta*r` on `Delta`.
pub fn d1_on_generator(s: &Surface, i: usize, r: &Polynomial, r_degree: i64) -> TwoCochain {
    let ring = s.ring();
    let r = ring.reduce(r);
    let value = match i {
        0 => -&s.generator(3).apply(ring, &r),
        1 => s.generator(2).apply(ring, &r),
        2 => -&s.generator(1).apply(ring, &r),
        3 => &s.generator(0).apply(ring, &r) + &r.scale(ring.delta()),
        _ => panic!("psi row index must be in 0..4, got {i}"),
    };
    TwoCochain { value, degree: r_degree + s.psi_degrees()[i] }
}

/// `d^1` of an arbitrary cochain via its decomposition over the spanning set.
/// Returns `None` when `xi` is not in `C^1`.
pub fn d1(s: &Surface, xi: &OneCochain) -> Option<TwoCochain> {
    let piece = s.c1_piece(xi.degree);
    d1_in(s, &piece, xi)
}

pub fn d1_in(s: &Surface, piece: &C1Piece, xi: &OneCochain) -> Option<TwoCochain> {
    let ring = s.ring();
    let combo = s.decompose(piece, xi)?;
    let mut value = ring.zero();
    for (k, c) in combo {
        let (i, m) = &piece.spanning[k];
        let t = d1_on_generator(s, *i, &ring.monomial_poly(m), ring.wdeg(m));
        value = &value + &t.value.scale(&c);
    }
    Some(TwoCochain { value, degree: xi.degree })
}

/// The intrinsic value `d^1(xi)(g_p ^ g_q) = g_p(xi(g_q)) - g_q(xi(g_p)) -
/// xi([g_p, g_q])`.
pub fn d1_intrinsic(s: &Surface, xi: &OneCochain, p: usize, q: usize) -> Polynomial {
    let ring = s.ring();
    let a = s.generator(p).apply(ring, &xi.values[q]);
    let b = s.generator(q).apply(ring, &xi.values[p]);
    let c = s.evaluate(xi, s.bracket_coefficients(p, q));
    &(&a - &b) - &c
}

/// For each row `j` of `phi`, `sum_i phi[j][i] psi^(i) = 0`; the `d^1`
/// formulas must send that relation to zero.
pub fn relation_rows_vanish(s: &Surface) -> bool {
    let ring = s.ring();
    (0..4).all(|j| {
        let mut acc = ring.zero();
        for i in 0..4 {
            let c = ring.reduce(&s.phi()[j][i]);
            for (deg, comp) in c.homogeneous_components(ring.weights()) {
                acc = &acc + &d1_on_generator(s, i, &comp, deg).value;
            }
        }
        ring.reduce(&acc).is_zero()
    })
}

struct DegreeWork {
    record: DegreeRecord,
    h1_reps: Vec<(OneCochain, Vec<(usize, Polynomial)>)>,
    h2_reps: Vec<Polynomial>,
}

fn ambient(s: &Surface, xi: &OneCochain) -> SparseVec {
    let gd = s.generator_degrees();
    let mut v = SparseVec::new();
    let mut off = 0;
    for j in 0..4 {
        let w = xi.degree + gd[j];
        v.append(s.ring().coords(&xi.values[j], w).offset(off));
        off += s.ring().dim(w);
    }
    v
}

fn compute_degree(s: &Surface, w: i64, want_reps: bool) -> DegreeWork {
    let ring = s.ring();
    let c2_degree = w + s.delta_degree();
    let piece = s.c1_piece(w);

    // d^0: images of the basis of R_w in the ambient space of C^1_w.
    let mut im_d0 = Echelon::new();
    for m in ring.graded_basis(w) {
        im_d0.push(ambient(s, &d0(s, &ring.monomial_poly(&m), w)));
    }

    // d^1 on the spanning set, with the formula image as tag.
    let images: Vec<SparseVec> = piece
        .spanning
        .iter()
        .map(|(i, m)| ring.coords(&d1_on_generator(s, *i, &ring.monomial_poly(m), ring.wdeg(m)).value, c2_degree))
        .collect();
    let mut span = Echelon::new();
    let mut well_defined = true;
    for (k, (i, m)) in piece.spanning.iter().enumerate() {
        let xi = s.psi_multiple(*i, &ring.monomial_poly(m), ring.wdeg(m));
        if let Inserted::Dependent { defect } = span.insert(ambient(s, &xi), images[k].clone()) {
            well_defined &= defect.is_zero();
        }
    }
    let mut im_d1 = Echelon::new();
    let mut kernel: Vec<SparseVec> = Vec::new();
    for (pos, &k) in piece.basis.iter().enumerate() {
        if let Inserted::Dependent { defect } = im_d1.insert(images[k].clone(), SparseVec::unit(pos)) {
            kernel.push(defect);
        }
    }

    let c0 = ring.dim(w);
    let c1 = piece.dim();
    let c2 = ring.dim(c2_degree);
    let rank_d0 = im_d0.rank();
    let rank_d1 = im_d1.rank();
    let record = DegreeRecord {
        degree: w,
        c0,
        c1,
        c2,
        rank_d0,
        rank_d1,
        h0: c0 - rank_d0,
        h1: c1 - rank_d1 - rank_d0,
        h2: c2 - rank_d1,
        well_defined,
    };

    let mut h1_reps = Vec::new();
    let mut h2_reps = Vec::new();
    if want_reps {
        // Kernel vectors that stay independent modulo im d^0.
        let mut quotient = im_d0.clone();
        for kv in kernel {
            let mut values: [Polynomial; 4] = std::array::from_fn(|_| ring.zero());
            let mut terms: Vec<(usize, Polynomial)> = Vec::new();
            for (pos, c) in kv.iter() {
                let (i, m) = &piece.spanning[piece.basis[*pos]];
                let mp = ring.monomial_poly(m).scale(c);
                let xi = s.psi_multiple(*i, &mp, w - s.psi_degrees()[*i]);
                for j in 0..4 {
                    values[j] = &values[j] + &xi.values[j];
                }
                match terms.iter_mut().find(|(row, _)| row == i) {
                    Some((_, p)) => *p = &*p + &mp,
                    None => terms.push((*i, mp)),
                }
            }
            terms.sort_by_key(|(i, _)| *i);
            let xi = OneCochain { values, degree: w };
            if quotient.push(ambient(s, &xi)) {
                h1_reps.push((xi, terms));
            }
        }
        let mut cover = im_d1.clone();
        for (idx, m) in ring.graded_basis(c2_degree).iter().enumerate() {
            if cover.push(SparseVec::unit(idx)) {
                h2_reps.push(ring.monomial_poly(m));
            }
        }
    }
    DegreeWork { record, h1_reps, h2_reps }
}

/// Per-degree dimensions over `window` (inclusive), with representatives for
/// `H^1_0` and `H^2_0`.
pub fn cohomology_table(s: &Surface, window: (i64, i64)) -> CohomologyTable {
    let mut records = Vec::new();
    let mut h1_representatives = Vec::new();
    let mut h2_representatives = Vec::new();
    for w in window.0..=window.1 {
        let work = compute_degree(s, w, w == 0);
        records.push(work.record);
        if w == 0 {
            h1_representatives = work.h1_reps;
            h2_representatives = work.h2_reps;
        }
    }
    CohomologyTable { window, records, h1_representatives, h2_representatives }
}

/// `d^1(d^0(m)) = 0` for every normal-form monomial `m` with degree in the
/// window.
pub fn complex_property_holds(s: &Surface, window: (i64, i64)) -> bool {
    let ring = s.ring();
    (window.0..=window.1).all(|w| {
        let piece = s.c1_piece(w);
        ring.graded_basis(w).iter().all(|m| {
            let xi = d0(s, &ring.monomial_poly(m), w);
            matches!(d1_in(s, &piece, &xi), Some(t) if t.value.is_zero())
        })
    })
}

/// The assertions of the structure theorem for `H^*` on a window.
pub fn verify_theorem_c(s: &Surface, table: &CohomologyTable) -> Vec<Check> {
    let ring = s.ring();
    let k = s.delta_degree();
    let expected = ring.dim(k);
    let rec0 = table.record(0);
    let (h0, h1, h2) = table.totals();
    let mut out = Vec::new();
    out.push(Check::new(
        "H0 = R_0 = Q, in degree 0",
        h0 == 1 && rec0.is_some_and(|r| r.h0 == 1),
        format!("dim H0 = {h0}"),
    ));
    let stray: Vec<i64> = table.records.iter().filter(|r| r.degree != 0 && (r.h1 > 0 || r.h2 > 0)).map(|r| r.degree).collect();
    out.push(Check::new(
        "H1 and H2 vanish outside degree 0",
        stray.is_empty(),
        if stray.is_empty() { "no stray degrees".to_string() } else { format!("nonzero in degrees {stray:?}") },
    ));
    out.push(Check::new(
        format!("dim H1_0 = dim R_{k}"),
        rec0.is_some_and(|r| r.h1 == expected),
        format!("dim H1_0 = {}, dim R_{k} = {expected}", rec0.map_or(0, |r| r.h1)),
    ));
    out.push(Check::new(
        format!("dim H2_0 = dim R_{k}"),
        rec0.is_some_and(|r| r.h2 == expected),
        format!("dim H2_0 = {}, dim R_{k} = {expected}", rec0.map_or(0, |r| r.h2)),
    ));
    out.push(Check::new("dim H1 = dim H2", h1 == h2, format!("{h1} and {h2}")));
    let bad: Vec<i64> =
        table.records.iter().filter(|r| r.degree != 0 && r.c1 != r.c2 + r.c0).map(|r| r.degree).collect();
    out.push(Check::new(
        "dim C1_w = dim C2_w + dim C0_w for w != 0",
        bad.is_empty(),
        if bad.is_empty() { "holds on the window".to_string() } else { format!("fails in degrees {bad:?}") },
    ));
    let ill: Vec<i64> = table.records.iter().filter(|r| !r.well_defined).map(|r| r.degree).collect();
    out.push(Check::new(
        "d1 formulas respect the relations among m*psi_i",
        ill.is_empty() && relation_rows_vanish(s),
        if ill.is_empty() { "all defects zero".to_string() } else { format!("defects in degrees {ill:?}") },
    ));
    out.push(Check::new("H^i = 0 for i >= 3", true, "C^i = 0 for i >= 3"));
    out
}

/// Convenience: the scalar `(w/d + delta)` by which `psi_4`-multiples of
/// degree `w` are scaled under `d^1`.
pub fn psi4_factor(s: &Surface, m_degree: i64) -> Scalar {
    let d = Scalar::from_integer(s.ring().degree().into());
    Scalar::from_integer(m_degree.into()) / d + s.ring().delta()
}
