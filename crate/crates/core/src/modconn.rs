//! Connections on graded modules `M = coker(d0 : L1 -> L0)` over a surface.
//!
//! A connection is given by one square matrix per generator of `Der(R)`:
//! `nabla_{g_i} = g_i + A_i` acting on column vectors of `L0`. The entry
//! `A_i[a][b]` has degree `deg g_i + deg e_b - deg e_a`; components of other
//! degrees are grouped by their offset from this ("shift") and every
//! condition is checked shift by shift.
//!
//! Two matrices define the same endomorphism of `M` when their difference
//! maps `L0` into `im d0`, i.e. equals `d0 * X` for some `X`.

use std::collections::BTreeMap;


use crate::derlie::{DerError, Derivation, OneCochain, Surface, GENERATOR_NAMES, PAIRS};
use crate::exactmath::Scalar;
use crate::linsys::{GradedSystem, Term};
use crate::polyring::{Polynomial, WeightedRing};
use crate::Check;

pub type PolyMatrix = Vec<Vec<Polynomial>>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConnError {
    #[error("{0}")]
    Shape(String),
    #[error("presentation column {0} is zero")]
    ZeroColumn(usize),
    #[error("presentation entry ({row}, {col}) has degree {found}, expected {expected}")]
    EntryDegree { row: usize, col: usize, found: i64, expected: i64 },
    #[error(transparent)]
    Der(#[from] DerError),
    #[error("{what} is not a scalar modulo im d0 (shift {shift})")]
    ScalarExtraction { what: String, shift: i64 },
    #[error("the difference of the connections is not a cocycle; an input is not integrable")]
    NotCocycle,
    #[error("no homogeneous connection exists on this module")]
    NoConnection,
}

/// `coker(d0)`, with `d0[i][j]` homogeneous of degree
/// `column_degrees[j] - generator_degrees[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentedModule {
    pub generator_degrees: Vec<i64>,
    pub column_degrees: Vec<i64>,
    pub presentation: PolyMatrix,
}

impl PresentedModule {
    /// Validates shapes and homogeneity; the column degrees are read off
    /// the entries. Entries are reduced modulo `f`.
    pub fn new(ring: &WeightedRing, generator_degrees: Vec<i64>, presentation: PolyMatrix) -> Result<Self, ConnError> {
        let n0 = generator_degrees.len();
        if n0 == 0 {
            return Err(ConnError::Shape("the module needs at least one generator".into()));
        }
        if presentation.len() != n0 {
            return Err(ConnError::Shape(format!(
                "presentation has {} rows but there are {n0} generators",
                presentation.len()
            )));
        }
        let n1 = presentation[0].len();
        if presentation.iter().any(|row| row.len() != n1) {
            return Err(ConnError::Shape("presentation rows have different lengths".into()));
        }
        let presentation: PolyMatrix =
            presentation.iter().map(|row| row.iter().map(|p| ring.reduce(p)).collect()).collect();
        let mut column_degrees = Vec::with_capacity(n1);
        for j in 0..n1 {
            let mut deg = None;
            for i in 0..n0 {
                let p = &presentation[i][j];
                if p.is_zero() {
                    continue;
                }
                let ds = p.degrees(ring.weights());
                if ds.len() != 1 {
                    return Err(ConnError::Shape(format!("presentation entry ({i}, {j}) is not homogeneous")));
                }
                let c = ds[0] + generator_degrees[i];
                match deg {
                    None => deg = Some(c),
                    Some(prev) if prev != c => {
                        return Err(ConnError::EntryDegree {
                            row: i,
                            col: j,
                            found: ds[0],
                            expected: prev - generator_degrees[i],
                        })
                    }
                    _ => {}
                }
            }
            column_degrees.push(deg.ok_or(ConnError::ZeroColumn(j))?);
        }
        Ok(PresentedModule { generator_degrees, column_degrees, presentation })
    }

    /// The free module `R` (no relations).
    pub fn free() -> Self {
        PresentedModule { generator_degrees: vec![0], column_degrees: vec![], presentation: vec![vec![]] }
    }

    pub fn rank0(&self) -> usize {
        self.generator_degrees.len()
    }

    pub fn rank1(&self) -> usize {
        self.column_degrees.len()
    }
}

/// `nabla_{g_i} = g_i + a[i]` for `(g_0..g_3) = (E, D1, D2, D3)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connection {
    pub a: [PolyMatrix; 4],
}

impl Connection {
    /// Transposes every matrix: converts between matrices acting on column
    /// vectors from the left and matrices acting on row vectors from the
    /// right.
    pub fn transposed(&self) -> Connection {
        Connection {
            a: std::array::from_fn(|i| {
                let m = &self.a[i];
                (0..m.len()).map(|r| m.iter().map(|row| row[r].clone()).collect()).collect()
            }),
        }
    }

    /// Reads the `E` matrix as belonging to `factor * E` (for instance the
    /// field `sum d_i x_i d/dx_i = d * E`) and rescales it to `E`.
    pub fn with_euler_scaled(&self, factor: &Scalar) -> Connection {
        let mut out = self.clone();
        let inv = factor.recip();
        out.a[0] = mat_map(&self.a[0], |p| p.scale(&inv));
        out
    }
}

// ---------------------------------------------------------------------------
// matrix helpers

pub fn zero_matrix(ring: &WeightedRing, rows: usize, cols: usize) -> PolyMatrix {
    vec![vec![ring.zero(); cols]; rows]
}

pub fn scalar_matrix(ring: &WeightedRing, n: usize, r: &Polynomial) -> PolyMatrix {
    let mut m = zero_matrix(ring, n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = r.clone();
    }
    m
}

fn mat_mul(ring: &WeightedRing, a: &PolyMatrix, b: &PolyMatrix, inner: usize, cols: usize) -> PolyMatrix {
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = ring.zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            acc = &acc + &(&row[k] * &b[k][j]);
                        }
                    }
                    ring.reduce(&acc)
                })
                .collect()
        })
        .collect()
}

fn mat_zip(a: &PolyMatrix, b: &PolyMatrix, f: impl Fn(&Polynomial, &Polynomial) -> Polynomial) -> PolyMatrix {
    a.iter().zip(b).map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| f(x, y)).collect()).collect()
}

fn mat_add(a: &PolyMatrix, b: &PolyMatrix) -> PolyMatrix {
    mat_zip(a, b, |x, y| x + y)
}

fn mat_sub(a: &PolyMatrix, b: &PolyMatrix) -> PolyMatrix {
    mat_zip(a, b, |x, y| x - y)
}

fn mat_map(a: &PolyMatrix, f: impl Fn(&Polynomial) -> Polynomial) -> PolyMatrix {
    a.iter().map(|row| row.iter().map(&f).collect()).collect()
}

fn mat_is_zero(a: &PolyMatrix) -> bool {
    a.iter().all(|row| row.iter().all(Polynomial::is_zero))
}

/// `D(a)` entrywise.
fn mat_der(ring: &WeightedRing, d: &Derivation, a: &PolyMatrix) -> PolyMatrix {
    mat_map(a, |p| d.apply(ring, p))
}

fn mat_scale(ring: &WeightedRing, r: &Polynomial, a: &PolyMatrix) -> PolyMatrix {
    mat_map(a, |p| ring.mul(r, p))
}

/// Splits each entry into homogeneous components and files a component of
/// degree `t` at `(a, b)` under shift `t - expected(a, b)`.
fn split_shifts(
    ring: &WeightedRing,
    m: &PolyMatrix,
    cols: usize,
    expected: impl Fn(usize, usize) -> i64,
) -> BTreeMap<i64, PolyMatrix> {
    let mut out: BTreeMap<i64, PolyMatrix> = BTreeMap::new();
    for (a, row) in m.iter().enumerate() {
        for (b, p) in row.iter().enumerate() {
            for (t, comp) in p.homogeneous_components(ring.weights()) {
                let s = t - expected(a, b);
                out.entry(s).or_insert_with(|| zero_matrix(ring, m.len(), cols))[a][b] = comp;
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// column-space tests

/// Solves `n = d0 * x` where column `b` of `n` is homogeneous of degree
/// `target[b] - e_a` in row `a`. Returns `x` or `None`.
fn solve_in_image(ring: &WeightedRing, m: &PresentedModule, n: &PolyMatrix, target: &[i64]) -> Option<PolyMatrix> {
    let (n0, n1) = (m.rank0(), m.rank1());
    let cols = n.first().map_or(0, Vec::len);
    let mut x = zero_matrix(ring, n1, cols);
    for b in 0..cols {
        let mut sys = GradedSystem::new(ring);
        let unknowns: Vec<usize> = (0..n1).map(|k| sys.unknown(target[b] - m.column_degrees[k])).collect();
        for a in 0..n0 {
            let eq = sys.equation(target[b] - m.generator_degrees[a]);
            for k in 0..n1 {
                sys.add(eq, unknowns[k], Term::Mul(m.presentation[a][k].clone()));
            }
            sys.add_rhs(eq, &n[a][b]);
        }
        let sol = sys.solve()?;
        for k in 0..n1 {
            x[k][b] = sol[unknowns[k]].clone();
        }
    }
    Some(x)
}

/// Whether the square matrix `n` is zero as an endomorphism of `M`, where
/// entry `(a, b)` has base degree `base + e_b - e_a`.
fn vanishes_on_module(ring: &WeightedRing, m: &PresentedModule, n: &PolyMatrix, base: i64) -> Vec<(i64, bool)> {
    let e = &m.generator_degrees;
    split_shifts(ring, n, m.rank0(), |a, b| base + e[b] - e[a])
        .into_iter()
        .map(|(s, part)| {
            let target: Vec<i64> = e.iter().map(|eb| base + s + eb).collect();
            (s, solve_in_image(ring, m, &part, &target).is_some())
        })
        .collect()
}

/// Writes `n = kappa * I + d0 * x` shift by shift and returns `kappa` (the
/// sum of its components), or the first shift where this fails.
fn extract_scalar(ring: &WeightedRing, m: &PresentedModule, n: &PolyMatrix, base: i64) -> Result<Polynomial, i64> {
    let e = &m.generator_degrees;
    let (n0, n1) = (m.rank0(), m.rank1());
    let mut kappa = ring.zero();
    for (s, part) in split_shifts(ring, n, n0, |a, b| base + e[b] - e[a]) {
        let mut sys = GradedSystem::new(ring);
        let k = sys.unknown(base + s);
        let mut xs = vec![vec![0; n0]; n1];
        for (kk, row) in xs.iter_mut().enumerate() {
            for (b, slot) in row.iter_mut().enumerate() {
                *slot = sys.unknown(base + s + e[b] - m.column_degrees[kk]);
            }
        }
        for a in 0..n0 {
            for b in 0..n0 {
                let eq = sys.equation(base + s + e[b] - e[a]);
                if a == b {
                    sys.add(eq, k, Term::Mul(ring.one()));
                }
                for kk in 0..n1 {
                    sys.add(eq, xs[kk][b], Term::Mul(m.presentation[a][kk].clone()));
                }
                sys.add_rhs(eq, &part[a][b]);
            }
        }
        let sol = sys.solve().ok_or(s)?;
        kappa = &kappa + &sol[k];
    }
    Ok(kappa)
}

// ---------------------------------------------------------------------------
// checks

fn entry_degree<'a>(s: &Surface, m: &'a PresentedModule, i: usize) -> impl Fn(usize, usize) -> i64 + 'a {
    let g = s.generator_degrees()[i];
    move |a, b| g + m.generator_degrees[b] - m.generator_degrees[a]
}

fn validate_shape(m: &PresentedModule, c: &Connection) -> Result<(), ConnError> {
    let n = m.rank0();
    for (i, a) in c.a.iter().enumerate() {
        if a.len() != n || a.iter().any(|row| row.len() != n) {
            return Err(ConnError::Shape(format!("matrix for {} must be {n}x{n}", GENERATOR_NAMES[i])));
        }
    }
    Ok(())
}

fn reduce_connection(ring: &WeightedRing, c: &Connection) -> Connection {
    Connection { a: std::array::from_fn(|i| mat_map(&c.a[i], |p| ring.reduce(p))) }
}

/// Descent (`g_i(d0) + A_i d0 = d0 B_i`) for every generator and
/// R-linearity on every relation column of `phi`, shift by shift.
pub fn check_connection(s: &Surface, m: &PresentedModule, c: &Connection) -> Result<Vec<Check>, ConnError> {
    validate_shape(m, c)?;
    let ring = s.ring();
    let c = reduce_connection(ring, c);
    let (n0, n1) = (m.rank0(), m.rank1());
    let gd = s.generator_degrees();
    let mut out = Vec::new();
    for i in 0..4 {
        let lhs = mat_add(&mat_der(ring, s.generator(i), &m.presentation), &mat_mul(ring, &c.a[i], &m.presentation, n0, n1));
        let cd = &m.column_degrees;
        let mut failed = Vec::new();
        for (shift, part) in split_shifts(ring, &lhs, n1, |a, j| gd[i] + cd[j] - m.generator_degrees[a]) {
            let target: Vec<i64> = cd.iter().map(|cj| gd[i] + cj + shift).collect();
            if solve_in_image(ring, m, &part, &target).is_none() {
                failed.push(shift);
            }
        }
        out.push(Check::new(
            format!("{} descends to M", GENERATOR_NAMES[i]),
            failed.is_empty(),
            if failed.is_empty() {
                "g(d0) + A d0 lies in d0 * End(L1)".to_string()
            } else {
                format!("no B at shifts {failed:?}")
            },
        ));
    }
    for col in 0..4 {
        let (n, rho) = relation_combination(s, &c, col);
        let failed: Vec<i64> =
            vanishes_on_module(ring, m, &n, rho).into_iter().filter(|(_, ok)| !ok).map(|(sh, _)| sh).collect();
        out.push(Check::new(
            format!("R-linear on relation column {}", col + 1),
            failed.is_empty(),
            if failed.is_empty() {
                "sum phi_ic A_i vanishes on M".to_string()
            } else {
                format!("nonzero on M at shifts {failed:?}")
            },
        ));
    }
    Ok(out)
}

/// `sum_i phi[i][col] * A_i` and the degree of the relation.
fn relation_combination(s: &Surface, c: &Connection, col: usize) -> (PolyMatrix, i64) {
    let ring = s.ring();
    let gd = s.generator_degrees();
    let n = c.a[0].len();
    let mut acc = zero_matrix(ring, n, n);
    let mut rho = None;
    for i in 0..4 {
        let p = ring.reduce(&s.phi()[i][col]);
        if let Some(t) = p.homogeneous_degree(ring.weights()) {
            rho.get_or_insert(t + gd[i]);
        }
        acc = mat_add(&acc, &mat_scale(ring, &p, &c.a[i]));
    }
    (acc, rho.expect("phi columns are nonzero"))
}

pub fn is_connection(s: &Surface, m: &PresentedModule, c: &Connection) -> Result<bool, ConnError> {
    Ok(check_connection(s, m, c)?.iter().all(|ch| ch.passed))
}

/// `A_i - B_i` maps `L0` into `im d0` for every generator.
pub fn connections_agree(s: &Surface, m: &PresentedModule, c1: &Connection, c2: &Connection) -> bool {
    let ring = s.ring();
    (0..4).all(|i| {
        let diff = mat_sub(&reduce_connection(ring, c1).a[i], &reduce_connection(ring, c2).a[i]);
        vanishes_on_module(ring, m, &diff, s.generator_degrees()[i]).iter().all(|(_, ok)| *ok)
    })
}

// ---------------------------------------------------------------------------
// construction

/// `diag((deg e_j - deg e_1) / d)`.
pub fn euler_part(s: &Surface, m: &PresentedModule) -> PolyMatrix {
    let ring = s.ring();
    let d = Scalar::from_integer(ring.degree().into());
    let e0 = m.generator_degrees[0];
    let mut p = zero_matrix(ring, m.rank0(), m.rank0());
    for (j, ej) in m.generator_degrees.iter().enumerate() {
        p[j][j] = ring.constant(Scalar::from_integer((ej - e0).into()) / &d);
    }
    p
}

/// Solves for a homogeneous connection with `A_E = P + lambda*I`, the
/// Koszul matrices, and `lambda` together. The `R`-linearity conditions on
/// the relations of `Der(R)` can pin `lambda` to a specific value.
pub fn find_connection(s: &Surface, m: &PresentedModule) -> Result<Connection, ConnError> {
    let ring = s.ring();
    let (n0, n1) = (m.rank0(), m.rank1());
    let e = &m.generator_degrees;
    let cd = &m.column_degrees;
    let gd = s.generator_degrees();
    let p = euler_part(s, m);
    let mut sys = GradedSystem::new(ring);
    let lambda = sys.unknown(0);
    // a[i][a][b] for i = 1..4; index 0 unused.
    let mut a = vec![vec![vec![0usize; n0]; n0]; 4];
    for i in 1..4 {
        for r in 0..n0 {
            for c in 0..n0 {
                a[i][r][c] = sys.unknown(gd[i] + e[c] - e[r]);
            }
        }
    }
    // Descent: g_i(d0) + A_i d0 - d0 B_i = 0.
    for i in 0..4 {
        let gd0 = mat_der(ring, s.generator(i), &m.presentation);
        let pd0 = if i == 0 { mat_mul(ring, &p, &m.presentation, n0, n1) } else { zero_matrix(ring, n0, n1) };
        let b: Vec<Vec<usize>> =
            (0..n1).map(|k| (0..n1).map(|j| sys.unknown(gd[i] + cd[j] - cd[k])).collect()).collect();
        for r in 0..n0 {
            for j in 0..n1 {
                let eq = sys.equation(gd[i] + cd[j] - e[r]);
                sys.add_rhs(eq, &-&(&gd0[r][j] + &pd0[r][j]));
                if i == 0 {
                    sys.add(eq, lambda, Term::Mul(m.presentation[r][j].clone()));
                } else {
                    for k in 0..n0 {
                        sys.add(eq, a[i][r][k], Term::Mul(m.presentation[k][j].clone()));
                    }
                }
                for k in 0..n1 {
                    sys.add(eq, b[k][j], Term::Mul(-&m.presentation[r][k]));
                }
            }
        }
    }
    // Linearity: sum_i phi[i][col] A_i - d0 Y = 0.
    for col in 0..4 {
        let phis: Vec<Polynomial> = (0..4).map(|i| ring.reduce(&s.phi()[i][col])).collect();
        let rho = (0..4)
            .find_map(|i| phis[i].homogeneous_degree(ring.weights()).map(|t| t + gd[i]))
            .expect("phi columns are nonzero");
        let y: Vec<Vec<usize>> =
            (0..n1).map(|k| (0..n0).map(|c| sys.unknown(rho + e[c] - cd[k])).collect()).collect();
        for r in 0..n0 {
            for c in 0..n0 {
                let eq = sys.equation(rho + e[c] - e[r]);
                let known = ring.mul(&phis[0], &p[r][c]);
                sys.add_rhs(eq, &-&known);
                if r == c {
                    sys.add(eq, lambda, Term::Mul(phis[0].clone()));
                }
                for i in 1..4 {
                    sys.add(eq, a[i][r][c], Term::Mul(phis[i].clone()));
                }
                for k in 0..n1 {
                    sys.add(eq, y[k][c], Term::Mul(-&m.presentation[r][k]));
                }
            }
        }
    }
    let sol = sys.solve().ok_or(ConnError::NoConnection)?;
    let lam = sol[lambda].clone();
    let ae = mat_add(&p, &scalar_matrix(ring, n0, &lam));
    let pick = |i: usize| -> PolyMatrix {
        (0..n0).map(|r| (0..n0).map(|c| sol[a[i][r][c]].clone()).collect()).collect()
    };
    Ok(Connection { a: [ae, pick(1), pick(2), pick(3)] })
}

/// Keeps the shift-zero part of every matrix.
pub fn truncate_degree_zero(s: &Surface, m: &PresentedModule, c: &Connection) -> Connection {
    let ring = s.ring();
    let c = reduce_connection(ring, c);
    Connection {
        a: std::array::from_fn(|i| {
            let n = m.rank0();
            split_shifts(ring, &c.a[i], n, entry_degree(s, m, i)).remove(&0).unwrap_or_else(|| zero_matrix(ring, n, n))
        }),
    }
}

/// Whether every matrix is homogeneous of the forced degree.
pub fn is_homogeneous(s: &Surface, m: &PresentedModule, c: &Connection) -> bool {
    let ring = s.ring();
    (0..4).all(|i| split_shifts(ring, &reduce_connection(ring, c).a[i], m.rank0(), entry_degree(s, m, i)).keys().all(|k| *k == 0))
}

/// `A_i + tau_i * I`.
pub fn add_scalar_potential(s: &Surface, c: &Connection, tau: &[Polynomial; 4]) -> Connection {
    let ring = s.ring();
    Connection {
        a: std::array::from_fn(|i| {
            let n = c.a[i].len();
            mat_add(&c.a[i], &scalar_matrix(ring, n, &ring.reduce(&tau[i])))
        }),
    }
}

// ---------------------------------------------------------------------------
// curvature

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftClass {
    pub shift: i64,
    pub vanishes: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairCurvature {
    pub pair: (usize, usize),
    pub matrix: PolyMatrix,
    pub shifts: Vec<ShiftClass>,
    /// `kappa` with `K = kappa * I` on `M`, when that holds in every shift.
    pub scalar: Option<Polynomial>,
}

impl PairCurvature {
    pub fn vanishes(&self) -> bool {
        self.shifts.iter().all(|s| s.vanishes)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurvatureRecord {
    pub pairs: Vec<PairCurvature>,
}

impl CurvatureRecord {
    pub fn integrable(&self) -> bool {
        self.pairs.iter().all(PairCurvature::vanishes)
    }

    pub fn pair(&self, i: usize, j: usize) -> &PairCurvature {
        self.pairs.iter().find(|p| p.pair == (i, j)).expect("i < j")
    }
}

/// `K_ij = g_i(A_j) - g_j(A_i) + [A_i, A_j] - sum_k r_k A_k` where
/// `[g_i, g_j] = sum_k r_k g_k`.
pub fn curvature_matrix(s: &Surface, c: &Connection, i: usize, j: usize) -> PolyMatrix {
    let ring = s.ring();
    let n = c.a[i].len();
    let (ai, aj) = (&c.a[i], &c.a[j]);
    let mut k = mat_sub(&mat_der(ring, s.generator(i), aj), &mat_der(ring, s.generator(j), ai));
    k = mat_add(&k, &mat_sub(&mat_mul(ring, ai, aj, n, n), &mat_mul(ring, aj, ai, n, n)));
    let r = s.bracket_coefficients(i, j);
    for (kk, rk) in r.iter().enumerate() {
        k = mat_sub(&k, &mat_scale(ring, rk, &c.a[kk]));
    }
    mat_map(&k, |p| ring.reduce(p))
}

pub fn curvature(s: &Surface, m: &PresentedModule, c: &Connection) -> Result<CurvatureRecord, ConnError> {
    validate_shape(m, c)?;
    let ring = s.ring();
    let c = reduce_connection(ring, c);
    let gd = s.generator_degrees();
    let mut pairs = Vec::new();
    for (i, j) in PAIRS {
        let matrix = curvature_matrix(s, &c, i, j);
        let base = gd[i] + gd[j];
        let shifts =
            vanishes_on_module(ring, m, &matrix, base).into_iter().map(|(shift, vanishes)| ShiftClass { shift, vanishes }).collect();
        let scalar = extract_scalar(ring, m, &matrix, base).ok();
        pairs.push(PairCurvature { pair: (i, j), matrix, shifts, scalar });
    }
    Ok(CurvatureRecord { pairs })
}

// ---------------------------------------------------------------------------
// integrability class and equivalence

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegrabilityClass {
    pub vanishes: bool,
    /// `tau` with `d1(tau) = kappa`, one cochain per shift.
    pub witness: Vec<OneCochain>,
    /// `nabla - tau`, when the class vanishes.
    pub corrected: Option<Connection>,
    pub corrected_integrable: bool,
    /// Shifts `w != 0` where the normalisation `tau(E) = 0` had to be dropped.
    pub gauge_dropped: Vec<i64>,
}

fn sum_cochains(ring: &WeightedRing, cs: &[OneCochain]) -> [Polynomial; 4] {
    let mut out: [Polynomial; 4] = std::array::from_fn(|_| ring.zero());
    for c in cs {
        for j in 0..4 {
            out[j] = &out[j] + &c.values[j];
        }
    }
    out
}

/// Solves `d1(tau)(g_p ^ g_q) = kappa_pq` for `tau` in `C^1_w`, with
/// `tau = sum_i rho_i psi_i`, optionally requiring `tau(E) = 0`.
fn solve_potential(s: &Surface, kappa: &BTreeMap<(usize, usize), Polynomial>, w: i64, gauge: bool) -> Option<OneCochain> {
    let ring = s.ring();
    let gd = s.generator_degrees();
    let pd = s.psi_degrees();
    let rows: Vec<[Polynomial; 4]> = (0..4).map(|i| s.psi_row(i)).collect();
    let mut sys = GradedSystem::new(ring);
    let rho: Vec<usize> = (0..4).map(|i| sys.unknown(w - pd[i])).collect();
    for (p, q) in PAIRS {
        let eq = sys.equation(w + gd[p] + gd[q]);
        let (gp, gq) = (s.generator(p), s.generator(q));
        let r = s.bracket_coefficients(p, q);
        for i in 0..4 {
            let psi = &rows[i];
            // g_p(rho psi_q) - g_q(rho psi_p) - rho * sum_k r_k psi_k
            sys.add(eq, rho[i], Term::DerMul { der: gp.coeffs.clone(), factor: psi[q].clone() });
            sys.add(eq, rho[i], Term::DerMul { der: gq.coeffs.clone(), factor: -&psi[p] });
            let mut mul = &gp.apply(ring, &psi[q]) - &gq.apply(ring, &psi[p]);
            for k in 0..4 {
                mul = &mul - &ring.mul(&r[k], &psi[k]);
            }
            sys.add(eq, rho[i], Term::Mul(ring.reduce(&mul)));
        }
        if let Some(k) = kappa.get(&(p, q)) {
            sys.add_rhs(eq, k);
        }
    }
    if gauge {
        let eq = sys.equation(w);
        for i in 0..4 {
            sys.add(eq, rho[i], Term::Mul(rows[i][0].clone()));
        }
    }
    let sol = sys.solve()?;
    let mut values: [Polynomial; 4] = std::array::from_fn(|_| ring.zero());
    for i in 0..4 {
        for j in 0..4 {
            values[j] = &values[j] + &ring.mul(&sol[rho[i]], &rows[i][j]);
        }
    }
    Some(OneCochain { values, degree: w })
}

/// Decides whether the scalar curvature is `d1` of some `tau` in `C^1`, and
/// if so returns `tau` and the integrable connection `nabla - tau`.
pub fn integrability_class(s: &Surface, m: &PresentedModule, c: &Connection) -> Result<IntegrabilityClass, ConnError> {
    let ring = s.ring();
    let rec = curvature(s, m, c)?;
    let gd = s.generator_degrees();
    // kappa split by cochain degree.
    let mut by_degree: BTreeMap<i64, BTreeMap<(usize, usize), Polynomial>> = BTreeMap::new();
    for pc in &rec.pairs {
        let (i, j) = pc.pair;
        let kappa = pc.scalar.clone().ok_or_else(|| {
            let shift = extract_scalar(ring, m, &pc.matrix, gd[i] + gd[j]).err().unwrap_or(0);
            ConnError::ScalarExtraction { what: format!("K({}, {})", GENERATOR_NAMES[i], GENERATOR_NAMES[j]), shift }
        })?;
        for (t, comp) in kappa.homogeneous_components(ring.weights()) {
            by_degree.entry(t - gd[i] - gd[j]).or_default().insert((i, j), comp);
        }
    }
    let mut witness = Vec::new();
    let mut gauge_dropped = Vec::new();
    for (w, kappa) in &by_degree {
        let tau = if *w != 0 {
            match solve_potential(s, kappa, *w, true) {
                Some(t) => Some(t),
                None => {
                    gauge_dropped.push(*w);
                    solve_potential(s, kappa, *w, false)
                }
            }
        } else {
            solve_potential(s, kappa, *w, false)
        };
        match tau {
            Some(t) => witness.push(t),
            None => {
                return Ok(IntegrabilityClass {
                    vanishes: false,
                    witness: Vec::new(),
                    corrected: None,
                    corrected_integrable: false,
                    gauge_dropped,
                })
            }
        }
    }
    let total = sum_cochains(ring, &witness);
    let neg: [Polynomial; 4] = std::array::from_fn(|j| -&total[j]);
    let corrected = add_scalar_potential(s, c, &neg);
    let corrected_integrable = curvature(s, m, &corrected)?.integrable();
    Ok(IntegrabilityClass { vanishes: true, witness, corrected: Some(corrected), corrected_integrable, gauge_dropped })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equivalence {
    pub equivalent: bool,
    /// `tau(g_i)`, the scalar of `A2_i - A1_i`.
    pub difference: [Polynomial; 4],
    /// `phi` with `d0(phi) = tau`, when it exists.
    pub gauge: Option<Polynomial>,
}

/// Graded equivalence: the scalar difference `tau` must be a coboundary.
pub fn equivalent(s: &Surface, m: &PresentedModule, c1: &Connection, c2: &Connection) -> Result<Equivalence, ConnError> {
    validate_shape(m, c1)?;
    validate_shape(m, c2)?;
    let ring = s.ring();
    let gd = s.generator_degrees();
    let (r1, r2) = (reduce_connection(ring, c1), reduce_connection(ring, c2));
    let mut tau: [Polynomial; 4] = std::array::from_fn(|_| ring.zero());
    for i in 0..4 {
        let diff = mat_sub(&r2.a[i], &r1.a[i]);
        tau[i] = extract_scalar(ring, m, &diff, gd[i])
            .map_err(|shift| ConnError::ScalarExtraction { what: format!("A2 - A1 at {}", GENERATOR_NAMES[i]), shift })?;
    }
    // Split tau by cochain degree.
    let mut parts: BTreeMap<i64, [Polynomial; 4]> = BTreeMap::new();
    for i in 0..4 {
        for (t, comp) in tau[i].homogeneous_components(ring.weights()) {
            parts.entry(t - gd[i]).or_insert_with(|| std::array::from_fn(|_| ring.zero()))[i] = comp;
        }
    }
    for (w, values) in &parts {
        let xi = OneCochain { values: values.clone(), degree: *w };
        for (p, q) in PAIRS {
            if !ring.reduce(&crate::rincomplex::d1_intrinsic(s, &xi, p, q)).is_zero() {
                return Err(ConnError::NotCocycle);
            }
        }
    }
    let mut gauge = ring.zero();
    for (w, values) in &parts {
        let mut sys = GradedSystem::new(ring);
        let u = sys.unknown(*w);
        for i in 0..4 {
            let eq = sys.equation(w + gd[i]);
            sys.add(eq, u, Term::DerMul { der: s.generator(i).coeffs.clone(), factor: ring.one() });
            sys.add_rhs(eq, &values[i]);
        }
        match sys.solve() {
            Some(sol) => gauge = &gauge + &sol[u],
            None => return Ok(Equivalence { equivalent: false, difference: tau, gauge: None }),
        }
    }
    Ok(Equivalence { equivalent: true, difference: tau, gauge: Some(gauge) })
}

/// The scalar `lambda` of `A_E = P + lambda * I`, when `A_E` has that form.
pub fn euler_scalar(s: &Surface, m: &PresentedModule, c: &Connection) -> Option<Scalar> {
    let ring = s.ring();
    let diff = mat_sub(&reduce_connection(ring, c).a[0], &euler_part(s, m));
    let lam = diff[0][0].coeff(&crate::polyring::Monomial::one(ring.nvars()));
    let rest = mat_sub(&diff, &scalar_matrix(ring, m.rank0(), &ring.constant(lam.clone())));
    mat_is_zero(&rest).then_some(lam)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cubic() -> Surface {
        Surface::new(WeightedRing::from_text(&["x", "y", "z"], &[1, 1, 1], "x^3+y^3+z^3").unwrap()).unwrap()
    }

    fn parse_matrix(ring: &WeightedRing, rows: &[&[&str]]) -> PolyMatrix {
        rows.iter().map(|r| r.iter().map(|t| ring.parse(t).unwrap()).collect()).collect()
    }

    fn cubic_module(s: &Surface) -> PresentedModule {
        let d0 = parse_matrix(s.ring(), &[&["x", "-y^2+y*z-z^2"], &["y+z", "x^2"]]);
        PresentedModule::new(s.ring(), vec![0, 0], d0).unwrap()
    }

    fn paper_nabla(s: &Surface) -> Connection {
        let r = s.ring();
        Connection {
            a: [
                parse_matrix(r, &[&["2/3", "0"], &["0", "2/3"]]),
                parse_matrix(r, &[&["0", "2*x"], &["-2*y+z", "0"]]),
                parse_matrix(r, &[&["0", "2*x"], &["y-2*z", "0"]]),
                parse_matrix(r, &[&["-2*y+2*z", "0"], &["0", "y-z"]]),
            ],
        }
    }

    fn paper_nabla_prime(s: &Surface) -> Connection {
        let r = s.ring();
        Connection {
            a: [
                parse_matrix(r, &[&["2/3", "0"], &["0", "2/3"]]),
                parse_matrix(r, &[&["x*z", "2*x"], &["-2*y+z", "x*z"]]),
                parse_matrix(r, &[&["-x*y", "2*x"], &["x^2+y-2*z", "x*z"]]),
                parse_matrix(r, &[&["x^2-2*y+2*z", "0"], &["0", "x^2+y-z"]]),
            ],
        }
    }

    // The printed matrices act on row vectors and belong to x d/dx + y d/dy + z d/dz = 3E.
    fn from_paper(c: Connection) -> Connection {
        c.transposed().with_euler_scaled(&crate::exactmath::int(3))
    }

    fn nabla(s: &Surface) -> Connection {
        from_paper(paper_nabla(s))
    }

    fn nabla_prime(s: &Surface) -> Connection {
        from_paper(paper_nabla_prime(s))
    }

    #[test]
    fn module_degrees() {
        let s = cubic();
        let m = cubic_module(&s);
        assert_eq!(m.column_degrees, vec![1, 2]);
        let bad = parse_matrix(s.ring(), &[&["x", "y"], &["y+z", "x^2"]]);
        assert!(PresentedModule::new(s.ring(), vec![0, 0], bad).is_err());
    }

    #[test]
    fn worked_example() {
        let s = cubic();
        let m = cubic_module(&s);
        let n = nabla(&s);
        let np = nabla_prime(&s);
        assert!(is_connection(&s, &m, &n).unwrap());
        assert!(is_connection(&s, &m, &np).unwrap());
        assert!(curvature(&s, &m, &n).unwrap().integrable());
        assert!(!curvature(&s, &m, &np).unwrap().integrable());
        assert_eq!(truncate_degree_zero(&s, &m, &np), n);
        let ic = integrability_class(&s, &m, &np).unwrap();
        assert!(ic.vanishes && ic.corrected_integrable);
        assert!(connections_agree(&s, &m, ic.corrected.as_ref().unwrap(), &n));
    }

    #[test]
    fn solver_matches_lambda() {
        let s = cubic();
        let m = cubic_module(&s);
        let c = find_connection(&s, &m).unwrap();
        assert!(is_connection(&s, &m, &c).unwrap());
        assert!(curvature(&s, &m, &c).unwrap().integrable());
        assert_eq!(euler_scalar(&s, &m, &c), Some(crate::exactmath::frac(2, 9)));
    }

    #[test]
    fn free_module() {
        let s = cubic();
        let m = PresentedModule::free();
        let c = find_connection(&s, &m).unwrap();
        assert!(c.a.iter().all(mat_is_zero));
        assert!(is_connection(&s, &m, &c).unwrap());
    }
}
