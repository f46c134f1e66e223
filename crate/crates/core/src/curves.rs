//! Monomial curves `R = k[Gamma]` and graded rank-one modules `M = k[Lambda]`.
//!
//! `Der(R)` is generated by `E = t d/dt` and `t^w E` for `w` in `Gamma^(1)`.
//! A graded connection has the form `nabla_E = E - c`, and
//! `nabla_{t^w E} = t^w nabla_E`. Everything here is integer enumeration
//! plus exact rational arithmetic.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::exactmath::{int, Matrix, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CurveError {
    #[error("a semigroup needs at least one generator")]
    Empty,
    #[error("generators must be positive")]
    NonPositive,
    #[error("generators have gcd {0}; the gap set would be infinite")]
    Gcd(u64),
    #[error("Lambda must contain Gamma, but {0} is missing")]
    MissingGammaElement(u64),
    #[error("Gamma + Lambda is not inside Lambda: {0} + {1} is missing")]
    NotModule(u64, u64),
    #[error("c = {0} is not admissible for this module")]
    NotAdmissible(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Semigroup {
    pub generators: Vec<u64>,
    pub gaps: Vec<u64>,
    /// Largest gap, or `-1` for `Gamma = N_0`.
    pub frobenius: i64,
    /// Gaps `w` with `w + (Gamma \ {0})` inside `Gamma`.
    pub gamma1: Vec<u64>,
}

impl Semigroup {
    pub fn contains(&self, n: u64) -> bool {
        self.gaps.binary_search(&n).is_err()
    }

    /// Degrees of the derivation generators `E, t^w E`: `{0} + Gamma^(1)`.
    pub fn derivation_degrees(&self) -> Vec<u64> {
        std::iter::once(0).chain(self.gamma1.iter().copied()).collect()
    }

    fn max_generator(&self) -> u64 {
        *self.generators.iter().max().expect("nonempty")
    }
}

pub fn analyze_semigroup(generators: &[u64]) -> Result<Semigroup, CurveError> {
    if generators.is_empty() {
        return Err(CurveError::Empty);
    }
    if generators.contains(&0) {
        return Err(CurveError::NonPositive);
    }
    let g = generators.iter().fold(0u64, |a, b| a.gcd(b));
    if g != 1 {
        return Err(CurveError::Gcd(g));
    }
    let mut gens = generators.to_vec();
    gens.sort_unstable();
    gens.dedup();
    // Membership by dynamic programming up to a safe bound: every integer
    // past (min gen) consecutive members is in Gamma.
    let m = gens[0] as usize;
    let mut member = vec![true];
    let mut run = 1usize;
    let mut n = 0usize;
    while run < m {
        n += 1;
        let ok = gens.iter().any(|&g| (g as usize) <= n && member[n - g as usize]);
        member.push(ok);
        run = if ok { run + 1 } else { 0 };
    }
    let gaps: Vec<u64> = member.iter().enumerate().filter(|(_, &b)| !b).map(|(i, _)| i as u64).collect();
    let frobenius = gaps.last().map_or(-1, |&g| g as i64);
    let mut s = Semigroup { generators: gens, gaps, frobenius, gamma1: Vec::new() };
    let horizon = (s.frobenius.max(0) as u64) + s.max_generator();
    s.gamma1 = s
        .gaps
        .iter()
        .copied()
        .filter(|&w| (1..=horizon).filter(|&n| s.contains(n)).all(|n| s.contains(w + n)))
        .collect();
    Ok(s)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaModule {
    pub semigroup: Semigroup,
    /// `N_0 \ Lambda`, sorted.
    pub complement: Vec<u64>,
    /// `{lambda in Lambda : lambda + Gamma^(1) not inside Lambda}`.
    pub s: Vec<u64>,
}

impl LambdaModule {
    pub fn new(semigroup: Semigroup, complement: &[u64]) -> Result<Self, CurveError> {
        let set: BTreeSet<u64> = complement.iter().copied().collect();
        let complement: Vec<u64> = set.into_iter().collect();
        let mut m = LambdaModule { semigroup, complement, s: Vec::new() };
        for &h in &m.complement {
            if m.semigroup.contains(h) {
                return Err(CurveError::MissingGammaElement(h));
            }
        }
        let horizon = m.horizon();
        for a in (0..=horizon).filter(|&a| m.semigroup.contains(a)) {
            for l in (0..=horizon).filter(|&l| m.contains(l)) {
                if !m.contains(a + l) {
                    return Err(CurveError::NotModule(a, l));
                }
            }
        }
        m.s = (0..=horizon)
            .filter(|&l| m.contains(l) && m.semigroup.gamma1.iter().any(|&w| !m.contains(l + w)))
            .collect();
        Ok(m)
    }

    pub fn contains(&self, n: u64) -> bool {
        self.complement.binary_search(&n).is_err()
    }

    pub fn l(&self) -> usize {
        self.s.len()
    }

    /// Past this degree both sets are periodic in the sense needed here.
    fn horizon(&self) -> u64 {
        let sg = &self.semigroup;
        sg.frobenius.max(0) as u64
            + self.complement.last().copied().unwrap_or(0)
            + sg.max_generator()
            + sg.gamma1.last().copied().unwrap_or(0)
            + 1
    }

    /// `frobenius + max(Gamma^(1) + {0}) + max(generators) + max(1, c) + 1`,
    /// enlarged by the largest element of `N_0 \ Lambda`.
    pub fn default_bound(&self, c: &Scalar) -> u64 {
        let sg = &self.semigroup;
        let cc = c.ceil().to_integer().to_i64().unwrap_or(1).max(1) as u64;
        (sg.frobenius + 1) as u64
            + sg.gamma1.last().copied().unwrap_or(0)
            + sg.max_generator()
            + cc
            + self.complement.last().copied().unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// `nabla_E = E - c` is a connection for every `c`.
    AllScalars,
    /// Only `c = lambda_0`.
    Unique(u64),
    /// No connection.
    None,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::AllScalars => write!(f, "AllScalars"),
            Verdict::Unique(c) => write!(f, "Unique(c={c})"),
            Verdict::None => write!(f, "None"),
        }
    }
}

pub fn classify_connections(m: &LambdaModule) -> Verdict {
    match m.s.as_slice() {
        [] => Verdict::AllScalars,
        [l0] => Verdict::Unique(*l0),
        _ => Verdict::None,
    }
}

pub fn admits(m: &LambdaModule, c: &Scalar) -> bool {
    match classify_connections(m) {
        Verdict::AllScalars => true,
        Verdict::Unique(l0) => *c == int(l0 as i64),
        Verdict::None => false,
    }
}

/// `nabla_{t^w E}(t^lambda) = (lambda - c) t^(lambda + w)`.
pub fn action(c: &Scalar, w: u64, lambda: u64) -> (Scalar, u64) {
    (int(lambda as i64) - c, lambda + w)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveDegree {
    pub degree: u64,
    pub c0: usize,
    pub c1: usize,
    pub rank_d0: usize,
    pub h0: usize,
    pub h1: usize,
}

/// Per-degree `C^0`, `C^1`, `H^0`, `H^1` for `nabla_E = E - c`, degrees
/// `0..=bound`. `C^i = 0` for `i >= 2`.
pub fn curve_cohomology(m: &LambdaModule, c: &Scalar, bound: u64) -> Result<Vec<CurveDegree>, CurveError> {
    if !admits(m, c) {
        return Err(CurveError::NotAdmissible(crate::exactmath::fmt_scalar(c)));
    }
    let mut out = Vec::new();
    for lambda in 0..=bound {
        let in_lambda = m.contains(lambda);
        let c0 = usize::from(in_lambda);
        // A degree-lambda cochain is fixed by xi(E) = a t^lambda, and
        // xi(t^w E) = a t^(lambda + w) must stay in M.
        let c1 = usize::from(in_lambda && m.semigroup.gamma1.iter().all(|&w| m.contains(lambda + w)));
        let factor = int(lambda as i64) - c;
        let rank_d0 = usize::from(in_lambda && !factor.is_zero());
        out.push(CurveDegree { degree: lambda, c0, c1, rank_d0, h0: c0 - rank_d0, h1: c1 - rank_d0 });
    }
    Ok(out)
}

/// Curvature of `nabla_{t^w E} = t^w (E - c)` on every generator pair and
/// every `t^lambda` with `lambda <= bound`, together with the bracket rule
/// `[t^a E, t^b E] = (b - a) t^(a+b) E` checked on monomials.
pub fn curvature_vanishes(m: &LambdaModule, c: &Scalar, bound: u64) -> bool {
    let degs = m.semigroup.derivation_degrees();
    let nab = |w: u64, coeff: &Scalar, n: u64| -> (Scalar, u64) {
        let (f, e) = action(c, w, n);
        (coeff * f, e)
    };
    for &a in &degs {
        for &b in &degs {
            for n in 0..=bound {
                // Bracket on t^n with the plain derivations.
                let lhs = int(n as i64) * int((n + b) as i64) - int(n as i64) * int((n + a) as i64);
                let rhs = (int(b as i64) - int(a as i64)) * int(n as i64);
                if lhs != rhs {
                    return false;
                }
                if !m.contains(n) {
                    continue;
                }
                let one = int(1);
                let (x1, e1) = nab(b, &one, n);
                let (x2, _) = nab(a, &x1, e1);
                let (y1, f1) = nab(a, &one, n);
                let (y2, _) = nab(b, &y1, f1);
                let (z, _) = nab(a + b, &(int(b as i64) - int(a as i64)), n);
                if x2 - y2 - z != Scalar::zero() {
                    return false;
                }
            }
        }
    }
    true
}

/// Oracle: searches for `nabla_E = E + sum_s a_s t^s` over the transporter
/// `{s : s + Lambda inside Lambda}` with `s <= bound`, requiring every
/// `t^w nabla_E` to map `M_{<= bound}` into `M`. Solved as an exact linear
/// system; the verdict reads off whether `a_0` is free, fixed or impossible.
pub fn brute_force_connection_search(m: &LambdaModule, bound: u64) -> Verdict {
    let horizon = bound + m.horizon();
    let transporter: Vec<u64> =
        (0..=bound).filter(|&s| (0..=horizon).filter(|&l| m.contains(l)).all(|l| m.contains(l + s))).collect();
    let nvars = transporter.len();
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    let mut rhs: Vec<Scalar> = Vec::new();
    for &w in &m.semigroup.derivation_degrees() {
        for lambda in (0..=bound).filter(|&l| m.contains(l)) {
            // t^w (E + sum a_s t^s) t^lambda
            //   = (lambda + a_0) t^(lambda+w) + sum_{s>0} a_s t^(lambda+w+s).
            for (k, &s) in transporter.iter().enumerate() {
                if m.contains(lambda + w + s) {
                    continue;
                }
                let mut row = vec![Scalar::zero(); nvars];
                row[k] = int(1);
                rows.push(row);
                rhs.push(if s == 0 { -int(lambda as i64) } else { Scalar::zero() });
            }
        }
    }
    let a0 = transporter.iter().position(|&s| s == 0).expect("0 is a transporter");
    if rows.is_empty() {
        return Verdict::AllScalars;
    }
    let mat = Matrix::from_rows(rows);
    let Ok(sol) = mat.solve(&rhs) else {
        return Verdict::None;
    };
    if mat.kernel_basis().iter().any(|v| !v[a0].is_zero()) {
        return Verdict::AllScalars;
    }
    let c = -sol[a0].clone();
    match c.to_integer().to_u64() {
        Some(v) if c.is_integer() && !c.is_negative() => Verdict::Unique(v),
        _ => Verdict::None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn semigroup_examples() {
        let s = analyze_semigroup(&[2, 3]).unwrap();
        assert_eq!((s.gaps.clone(), s.frobenius, s.gamma1.clone()), (vec![1], 1, vec![1]));
        let s = analyze_semigroup(&[1]).unwrap();
        assert!(s.gaps.is_empty() && s.gamma1.is_empty());
        assert_eq!(s.frobenius, -1);
        let s = analyze_semigroup(&[3, 4, 5]).unwrap();
        assert_eq!((s.gaps.clone(), s.gamma1.clone()), (vec![1, 2], vec![1, 2]));
        assert_eq!(analyze_semigroup(&[4, 6]), Err(CurveError::Gcd(2)));
        // <4,5,6,7>: gaps 1,2,3; 3 + 4 = 7 ok, 1 + 4 = 5 ok, 2 + 4 = 6 ok.
        assert_eq!(analyze_semigroup(&[4, 5, 6, 7]).unwrap().gamma1, vec![1, 2, 3]);
        // <3,5>: gaps 1,2,4,7; 4 + 3 = 7 is a gap, 7 is the Frobenius number.
        assert_eq!(analyze_semigroup(&[3, 5]).unwrap().gamma1, vec![7]);
    }

    #[test]
    fn trichotomy_examples() {
        let g23 = analyze_semigroup(&[2, 3]).unwrap();
        let m = LambdaModule::new(g23.clone(), &[1]).unwrap();
        assert_eq!(m.s, vec![0]);
        assert_eq!(classify_connections(&m), Verdict::Unique(0));
        let m = LambdaModule::new(g23, &[]).unwrap();
        assert_eq!(classify_connections(&m), Verdict::AllScalars);
        let g345 = analyze_semigroup(&[3, 4, 5]).unwrap();
        let m = LambdaModule::new(g345, &[2]).unwrap();
        assert_eq!(m.s, vec![0, 1]);
        assert_eq!(classify_connections(&m), Verdict::None);
    }

    #[test]
    fn module_validation() {
        let g = analyze_semigroup(&[2, 3]).unwrap();
        assert_eq!(LambdaModule::new(g.clone(), &[2]), Err(CurveError::MissingGammaElement(2)));
        let g = analyze_semigroup(&[3, 4, 5]).unwrap();
        // Lambda = Gamma + {1}: 1 + 3 = 4 fine, 1 + 4 = 5 fine, 1 + 5 = 6 fine.
        assert!(LambdaModule::new(g.clone(), &[2]).is_ok());
        // Lambda = {0, 2, 3, ...}: 2 + ... fine; but 1 missing and nothing maps there.
        assert!(LambdaModule::new(g, &[1]).is_ok());
    }

    #[test]
    fn cohomology_unique_case() {
        let g = analyze_semigroup(&[2, 3]).unwrap();
        let m = LambdaModule::new(g, &[1]).unwrap();
        let c = int(0);
        let table = curve_cohomology(&m, &c, m.default_bound(&c)).unwrap();
        assert!(table.iter().all(|r| r.h1 == 0));
        assert!(curvature_vanishes(&m, &c, 12));
        assert!(curve_cohomology(&m, &int(1), 5).is_err());
    }

    #[test]
    fn oracle_agrees() {
        for (gens, comp) in [(vec![2, 3], vec![1]), (vec![2, 3], vec![]), (vec![3, 4, 5], vec![2]), (vec![3, 5], vec![1, 2, 4, 7])] {
            let m = LambdaModule::new(analyze_semigroup(&gens).unwrap(), &comp).unwrap();
            let bound = m.default_bound(&int(1));
            assert_eq!(brute_force_connection_search(&m, bound), classify_connections(&m), "{gens:?} {comp:?}");
        }
    }
}
