//! Derivations of a quasi-homogeneous surface `R = Q[x1,x2,x3]/(f)`.
//!
//! `Der(R)` is generated by the Euler derivation `E` and the three Koszul
//! derivations `D1, D2, D3`. The 4x4 matrices `phi` and `psi` satisfy
//! `phi*psi = psi*phi = f*I`; columns of `phi` are relations among the
//! generators and rows of `psi` generate `Hom_R(Der(R), R)` when cochains are
//! recorded by their values on `(E, D1, D2, D3)`.

use std::collections::BTreeMap;
use std::fmt;

use crate::exactmath::{Echelon, Scalar, SparseVec};
use crate::linsys::{GradedSystem, Term};
use crate::polyring::{Monomial, Polynomial, WeightedRing};

pub const GENERATOR_NAMES: [&str; 4] = ["E", "D1", "D2", "D3"];

/// Ordered pairs `(i, j)` with `i < j` over the generator list.
pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DerError {
    #[error("the surface pipeline needs exactly 3 variables, got {0}")]
    NotSurface(usize),
    #[error("derivation does not preserve the ideal (f)")]
    NotTangent,
    #[error("derivation is not homogeneous")]
    Inhomogeneous,
    #[error("derivation is not in the span of E, D1, D2, D3")]
    NotRepresentable,
}

/// `sum_i coeffs[i] * d/dx_i` with normal-form coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub coeffs: Vec<Polynomial>,
    pub degree: i64,
}

impl Derivation {
    /// Builds a derivation, reducing the coefficients and reading off the
    /// degree. A zero derivation gets `degree`.
    pub fn new(ring: &WeightedRing, coeffs: Vec<Polynomial>, degree: i64) -> Result<Self, DerError> {
        let coeffs: Vec<Polynomial> = coeffs.iter().map(|c| ring.reduce(c)).collect();
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_homogeneous_of(ring.weights(), degree + ring.weights()[i]) {
                return Err(DerError::Inhomogeneous);
            }
        }
        let d = Derivation { coeffs, degree };
        if !d.preserves_ideal(ring) {
            return Err(DerError::NotTangent);
        }
        Ok(d)
    }

    pub fn zero(ring: &WeightedRing, degree: i64) -> Self {
        Derivation { coeffs: vec![ring.zero(); ring.nvars()], degree }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Polynomial::is_zero)
    }

    /// `sum c_i f_i` vanishes in `R`.
    pub fn preserves_ideal(&self, ring: &WeightedRing) -> bool {
        let mut acc = ring.zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            acc = &acc + &(c * &ring.f().derivative(i));
        }
        ring.reduce(&acc).is_zero()
    }

    pub fn apply(&self, ring: &WeightedRing, r: &Polynomial) -> Polynomial {
        ring.apply_derivation(&self.coeffs, r)
    }

    /// `r * self`.
    pub fn scale_by(&self, ring: &WeightedRing, r: &Polynomial, r_degree: i64) -> Derivation {
        Derivation { coeffs: self.coeffs.iter().map(|c| ring.mul(c, r)).collect(), degree: self.degree + r_degree }
    }

    pub fn add(&self, other: &Derivation) -> Derivation {
        Derivation {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
            degree: self.degree,
        }
    }

    pub fn scale(&self, c: &Scalar) -> Derivation {
        Derivation { coeffs: self.coeffs.iter().map(|p| p.scale(c)).collect(), degree: self.degree }
    }
}

/// `[a, b]_j = a(b_j) - b(a_j)`.
pub fn bracket(ring: &WeightedRing, a: &Derivation, b: &Derivation) -> Derivation {
    let coeffs = (0..ring.nvars()).map(|j| &a.apply(ring, &b.coeffs[j]) - &b.apply(ring, &a.coeffs[j])).collect();
    Derivation { coeffs, degree: a.degree + b.degree }
}

/// A 1-cochain recorded by its values on `(E, D1, D2, D3)`;
/// `values[j]` has weighted degree `degree + deg g_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneCochain {
    pub values: [Polynomial; 4],
    pub degree: i64,
}

/// A 2-cochain recorded by its value on `Delta`; the degree is
/// `wdeg(value) - deg Delta`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoCochain {
    pub value: Polynomial,
    pub degree: i64,
}

/// The degree-`w` part of `C^1`, cut out of the ambient space
/// `R_{w+deg E} + R_{w+deg D1} + R_{w+deg D2} + R_{w+deg D3}`.
#[derive(Clone, Debug)]
pub struct C1Piece {
    pub degree: i64,
    offsets: [usize; 4],
    ambient_dim: usize,
    /// `m * psi_i` for every monomial `m` of degree `w - deg psi_i`.
    pub spanning: Vec<(usize, Monomial)>,
    /// Indices into `spanning` of a basis.
    pub basis: Vec<usize>,
    echelon: Echelon,
}

impl C1Piece {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }
}

/// A quasi-homogeneous surface with its derivation data.
pub struct Surface {
    ring: WeightedRing,
    generators: [Derivation; 4],
    phi: [[Polynomial; 4]; 4],
    psi: [[Polynomial; 4]; 4],
    brackets: BTreeMap<(usize, usize), [Polynomial; 4]>,
}

impl fmt::Debug for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Surface").field("ring", &self.ring).finish()
    }
}

impl Clone for Surface {
    fn clone(&self) -> Self {
        Surface::new(self.ring.clone()).expect("already validated")
    }
}

fn partials(ring: &WeightedRing) -> [Polynomial; 3] {
    [0, 1, 2].map(|i| ring.reduce(&ring.f().derivative(i)))
}

/// `(E, D1, D2, D3)`.
pub fn build_generators(ring: &WeightedRing) -> Result<[Derivation; 4], DerError> {
    if ring.nvars() != 3 {
        return Err(DerError::NotSurface(ring.nvars()));
    }
    let w = ring.weights();
    let d = ring.degree();
    let [f1, f2, f3] = partials(ring);
    let zero = ring.zero();
    let e = Derivation { coeffs: (0..3).map(|i| ring.var(i).scale(&ring.omega()[i])).collect(), degree: 0 };
    let d1 = Derivation { coeffs: vec![f2.clone(), -&f1, zero.clone()], degree: d - w[0] - w[1] };
    let d2 = Derivation { coeffs: vec![f3.clone(), zero.clone(), -&f1], degree: d - w[0] - w[2] };
    let d3 = Derivation { coeffs: vec![zero, f3, -&f2], degree: d - w[1] - w[2] };
    Ok([e, d1, d2, d3])
}

/// `(phi, psi)` as polynomial matrices, unreduced.
pub fn build_factorization(ring: &WeightedRing) -> Result<([[Polynomial; 4]; 4], [[Polynomial; 4]; 4]), DerError> {
    if ring.nvars() != 3 {
        return Err(DerError::NotSurface(ring.nvars()));
    }
    let f = [0, 1, 2].map(|i| ring.f().derivative(i));
    let wx = [0, 1, 2].map(|i| ring.var(i).scale(&ring.omega()[i]));
    let z = ring.zero();
    let phi = [
        [f[0].clone(), f[1].clone(), f[2].clone(), z.clone()],
        [wx[1].clone(), -&wx[0], z.clone(), f[2].clone()],
        [wx[2].clone(), z.clone(), -&wx[0], -&f[1]],
        [z.clone(), wx[2].clone(), -&wx[1], f[0].clone()],
    ];
    let psi = [
        [wx[0].clone(), f[1].clone(), f[2].clone(), z.clone()],
        [wx[1].clone(), -&f[0], z.clone(), f[2].clone()],
        [wx[2].clone(), z.clone(), -&f[0], -&f[1]],
        [z, wx[2].clone(), -&wx[1], wx[0].clone()],
    ];
    Ok((phi, psi))
}

pub fn matmul4(a: &[[Polynomial; 4]; 4], b: &[[Polynomial; 4]; 4]) -> [[Polynomial; 4]; 4] {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| (0..4).fold(Polynomial::zero(a[0][0].nvars()), |acc, k| &acc + &(&a[i][k] * &b[k][j])))
    })
}

impl Surface {
    pub fn new(ring: WeightedRing) -> Result<Self, DerError> {
        let generators = build_generators(&ring)?;
        let (phi, psi) = build_factorization(&ring)?;
        let mut s = Surface { ring, generators, phi, psi, brackets: BTreeMap::new() };
        for (i, j) in PAIRS {
            let b = bracket(&s.ring, &s.generators[i], &s.generators[j]);
            let r = s.express_in_generators(&b)?;
            s.brackets.insert((i, j), r);
        }
        Ok(s)
    }

    pub fn ring(&self) -> &WeightedRing {
        &self.ring
    }

    pub fn generators(&self) -> &[Derivation; 4] {
        &self.generators
    }

    pub fn generator(&self, i: usize) -> &Derivation {
        &self.generators[i]
    }

    pub fn generator_degrees(&self) -> [i64; 4] {
        std::array::from_fn(|i| self.generators[i].degree)
    }

    pub fn phi(&self) -> &[[Polynomial; 4]; 4] {
        &self.phi
    }

    pub fn psi(&self) -> &[[Polynomial; 4]; 4] {
        &self.psi
    }

    /// `deg psi_i`: `d_1, d_2, d_3, d_1 + d_2 + d_3 - d`.
    pub fn psi_degrees(&self) -> [i64; 4] {
        let w = self.ring.weights();
        [w[0], w[1], w[2], w[0] + w[1] + w[2] - self.ring.degree()]
    }

    /// `deg Delta = d - d_1 - d_2 - d_3`.
    pub fn delta_degree(&self) -> i64 {
        let w = self.ring.weights();
        self.ring.degree() - w[0] - w[1] - w[2]
    }

    /// Row `i` of `psi` reduced into `R`: the values of the `i`-th `C^1`
    /// generator on `(E, D1, D2, D3)`.
    pub fn psi_row(&self, i: usize) -> [Polynomial; 4] {
        std::array::from_fn(|j| self.ring.reduce(&self.psi[i][j]))
    }

    /// `phi * psi == f * I` and `psi * phi == f * I` as polynomial matrices.
    pub fn factorization_holds(&self) -> bool {
        let f = self.ring.f();
        let check = |m: [[Polynomial; 4]; 4]| {
            (0..4).all(|i| (0..4).all(|j| if i == j { m[i][j] == *f } else { m[i][j].is_zero() }))
        };
        check(matmul4(&self.phi, &self.psi)) && check(matmul4(&self.psi, &self.phi))
    }

    /// Coefficients `r` with `[g_i, g_j] = sum_k r_k g_k`, for `i < j`.
    pub fn bracket_coefficients(&self, i: usize, j: usize) -> &[Polynomial; 4] {
        &self.brackets[&(i, j)]
    }

    /// Writes a homogeneous derivation as `sum_k r_k g_k`. One representative
    /// is returned; relations make it non-unique.
    pub fn express_in_generators(&self, v: &Derivation) -> Result<[Polynomial; 4], DerError> {
        let ring = &self.ring;
        for (i, c) in v.coeffs.iter().enumerate() {
            if !c.is_homogeneous_of(ring.weights(), v.degree + ring.weights()[i]) {
                return Err(DerError::Inhomogeneous);
            }
        }
        let mut sys = GradedSystem::new(ring);
        let unknowns: Vec<usize> = self.generators.iter().map(|g| sys.unknown(v.degree - g.degree)).collect();
        for i in 0..3 {
            let eq = sys.equation(v.degree + ring.weights()[i]);
            for (k, g) in self.generators.iter().enumerate() {
                sys.add(eq, unknowns[k], Term::Mul(g.coeffs[i].clone()));
            }
            sys.add_rhs(eq, &ring.reduce(&v.coeffs[i]));
        }
        let sol = sys.solve().ok_or(DerError::NotRepresentable)?;
        Ok(std::array::from_fn(|k| sol[k].clone()))
    }

    /// `sum_k r_k g_k`.
    pub fn combine(&self, r: &[Polynomial; 4], degree: i64) -> Derivation {
        let mut out = Derivation::zero(&self.ring, degree);
        for (k, g) in self.generators.iter().enumerate() {
            for (c, gc) in out.coeffs.iter_mut().zip(&g.coeffs) {
                *c = &*c + &self.ring.mul(&r[k], gc);
            }
        }
        out
    }

    /// `r` with `g_i ^ g_j = r * Delta`, for `i < j`.
    pub fn wedge_scalar(&self, i: usize, j: usize) -> Polynomial {
        let ring = &self.ring;
        let om = ring.omega();
        let [f1, f2, f3] = partials(ring);
        match (i, j) {
            (0, 1) => ring.var(2).scale(&om[2]),
            (0, 2) => -&ring.var(1).scale(&om[1]),
            (0, 3) => ring.var(0).scale(&om[0]),
            (1, 2) => f1,
            (1, 3) => f2,
            (2, 3) => f3,
            _ => panic!("wedge_scalar needs 0 <= i < j <= 3, got ({i}, {j})"),
        }
    }

    /// Expands `g_i ^ g_j` in the basis `d1^d2, d1^d3, d2^d3` and compares
    /// with `wedge_scalar(i, j) * Delta` in `R`.
    pub fn wedge_identity_holds(&self, i: usize, j: usize) -> bool {
        let ring = &self.ring;
        let (a, b) = (&self.generators[i].coeffs, &self.generators[j].coeffs);
        let minor = |p: usize, q: usize| ring.reduce(&(&(&a[p] * &b[q]) - &(&a[q] * &b[p])));
        let [f1, f2, f3] = partials(ring);
        let delta = [f3, -&f2, f1];
        let r = self.wedge_scalar(i, j);
        [(0, 1), (0, 2), (1, 2)].iter().zip(&delta).all(|(&(p, q), dc)| minor(p, q) == ring.mul(&r, dc))
    }

    /// Relations: for each column `c` of `phi`, `sum_i phi[i][c] g_i` is zero.
    pub fn relation_columns_hold(&self) -> bool {
        (0..4).all(|c| {
            let r: [Polynomial; 4] = std::array::from_fn(|i| self.ring.reduce(&self.phi[i][c]));
            self.combine(&r, 0).is_zero()
        })
    }

    /// Ambient coordinates of a 1-cochain of degree `w`.
    fn ambient_coords(&self, values: &[Polynomial; 4], w: i64, offsets: &[usize; 4]) -> SparseVec {
        let gd = self.generator_degrees();
        let mut v = SparseVec::new();
        for j in 0..4 {
            v.append(self.ring.coords(&values[j], w + gd[j]).offset(offsets[j]));
        }
        v
    }

    fn ambient_layout(&self, w: i64) -> ([usize; 4], usize) {
        let gd = self.generator_degrees();
        let mut offsets = [0; 4];
        let mut acc = 0;
        for j in 0..4 {
            offsets[j] = acc;
            acc += self.ring.dim(w + gd[j]);
        }
        (offsets, acc)
    }

    /// `m * psi_i` as a cochain.
    pub fn psi_multiple(&self, i: usize, m: &Polynomial, m_degree: i64) -> OneCochain {
        let row = self.psi_row(i);
        OneCochain { values: std::array::from_fn(|j| self.ring.mul(m, &row[j])), degree: m_degree + self.psi_degrees()[i] }
    }

    /// The spanning set `{m * psi_i}` of `C^1_w` in a fixed order: rows
    /// `i = 1..4`, monomials in basis order.
    pub fn c1_spanning_set(&self, w: i64) -> Vec<(usize, Monomial)> {
        let pd = self.psi_degrees();
        let mut out = Vec::new();
        for i in 0..4 {
            for m in self.ring.graded_basis(w - pd[i]) {
                out.push((i, m));
            }
        }
        out
    }

    pub fn c1_piece(&self, w: i64) -> C1Piece {
        let (offsets, ambient_dim) = self.ambient_layout(w);
        let spanning = self.c1_spanning_set(w);
        let mut echelon = Echelon::new();
        let mut basis = Vec::new();
        for (k, (i, m)) in spanning.iter().enumerate() {
            let xi = self.psi_multiple(*i, &self.ring.monomial_poly(m), self.ring.wdeg(m));
            let v = self.ambient_coords(&xi.values, w, &offsets);
            if matches!(echelon.insert(v, SparseVec::unit(k)), crate::exactmath::Inserted::Independent) {
                basis.push(k);
            }
        }
        C1Piece { degree: w, offsets, ambient_dim, spanning, basis, echelon }
    }

    /// A basis of `C^1_w` made of monomial multiples of the `psi` rows.
    pub fn c1_graded_basis(&self, w: i64) -> Vec<OneCochain> {
        let piece = self.c1_piece(w);
        piece
            .basis
            .iter()
            .map(|&k| {
                let (i, m) = &piece.spanning[k];
                self.psi_multiple(*i, &self.ring.monomial_poly(m), self.ring.wdeg(m))
            })
            .collect()
    }

    /// Writes `xi` as a combination of the spanning set of its degree, or
    /// `None` when `xi` is not in `C^1`.
    pub fn decompose(&self, piece: &C1Piece, xi: &OneCochain) -> Option<Vec<(usize, Scalar)>> {
        assert_eq!(piece.degree, xi.degree);
        let values: [Polynomial; 4] = std::array::from_fn(|j| self.ring.reduce(&xi.values[j]));
        let v = self.ambient_coords(&values, xi.degree, &piece.offsets);
        let tag = piece.echelon.express(v)?;
        Some(tag.iter().cloned().collect())
    }

    pub fn in_c1(&self, xi: &OneCochain) -> bool {
        self.decompose(&self.c1_piece(xi.degree), xi).is_some()
    }

    /// Evaluates a cochain on `sum_k r_k g_k`.
    pub fn evaluate(&self, xi: &OneCochain, r: &[Polynomial; 4]) -> Polynomial {
        (0..4).fold(self.ring.zero(), |acc, k| &acc + &self.ring.mul(&r[k], &xi.values[k]))
    }
}
