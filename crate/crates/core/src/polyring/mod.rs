//! Weighted-graded polynomial rings and their quotients by one homogeneous
//! polynomial.
//!
//! Elements of `R = Q[x_1..x_n]/(f)` are stored as normal-form polynomials:
//! remainders under division by `f` for the order "weighted degree, then
//! lexicographic with `x_1` largest". A single polynomial is a Gröbner basis
//! of the ideal it generates, so the remainder is canonical.

mod parse;
mod poly;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::{One, Signed, Zero};

pub use parse::{parse_polynomial_in, ParseError};
pub use poly::{monomials_of_degree, Monomial, Polynomial};

use crate::exactmath::{fmt_scalar, Scalar, SparseVec};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RingError {
    #[error("need at least one variable")]
    NoVariables,
    #[error("{names} variable names but {weights} weights")]
    ArityMismatch { names: usize, weights: usize },
    #[error("weight of '{0}' must be a positive integer")]
    NonPositiveWeight(String),
    #[error("duplicate variable name '{0}'")]
    DuplicateVariable(String),
    #[error("f must be a nonconstant polynomial")]
    ConstantF,
    #[error("f is not weighted-homogeneous: it has terms of degrees {0:?}")]
    NotHomogeneous(Vec<i64>),
    #[error("f has weighted degree {0}; degree at least 2 is required")]
    DegreeTooSmall(i64),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// The normal-form monomials of one graded piece `R_w`, with a reverse index.
#[derive(Debug)]
pub struct GradedPiece {
    pub degree: i64,
    pub monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl GradedPiece {
    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }
}

/// `Q[x_1..x_n]/(f)` with `f` weighted-homogeneous.
pub struct WeightedRing {
    names: Vec<String>,
    weights: Vec<i64>,
    f: Polynomial,
    degree: i64,
    omega: Vec<Scalar>,
    delta: Scalar,
    lead: Monomial,
    lead_coeff: Scalar,
    f_tail: Polynomial,
    pieces: Mutex<HashMap<i64, Arc<GradedPiece>>>,
}

impl Clone for WeightedRing {
    fn clone(&self) -> Self {
        WeightedRing::new(self.names.clone(), self.weights.clone(), self.f.clone()).expect("already validated")
    }
}

impl fmt::Debug for WeightedRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeightedRing")
            .field("variables", &self.names)
            .field("weights", &self.weights)
            .field("f", &self.format(&self.f))
            .field("degree", &self.degree)
            .finish()
    }
}

impl WeightedRing {
    pub fn new(names: Vec<String>, weights: Vec<i64>, f: Polynomial) -> Result<Self, RingError> {
        if names.is_empty() {
            return Err(RingError::NoVariables);
        }
        if names.len() != weights.len() {
            return Err(RingError::ArityMismatch { names: names.len(), weights: weights.len() });
        }
        for (n, w) in names.iter().zip(&weights) {
            if *w <= 0 {
                return Err(RingError::NonPositiveWeight(n.clone()));
            }
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(RingError::DuplicateVariable(n.clone()));
            }
        }
        let degrees = f.degrees(&weights);
        let degree = match degrees.as_slice() {
            [] => return Err(RingError::ConstantF),
            [0] => return Err(RingError::ConstantF),
            [d] => *d,
            _ => return Err(RingError::NotHomogeneous(degrees)),
        };
        if degree < 2 {
            return Err(RingError::DegreeTooSmall(degree));
        }
        let (lead, lead_coeff) = f.lead_term().map(|(m, c)| (m.clone(), c.clone())).expect("nonzero f");
        let mut f_tail = f.clone();
        f_tail.add_term(lead.clone(), -lead_coeff.clone());
        let d = Scalar::from_integer(degree.into());
        let omega: Vec<Scalar> = weights.iter().map(|&w| Scalar::from_integer(w.into()) / &d).collect();
        let delta = omega.iter().fold(Scalar::zero(), |a, b| a + b) - Scalar::one();
        Ok(WeightedRing {
            names,
            weights,
            f,
            degree,
            omega,
            delta,
            lead,
            lead_coeff,
            f_tail,
            pieces: Mutex::new(HashMap::new()),
        })
    }

    /// Builds the ring from text; `f` is parsed with [`WeightedRing::parse`].
    pub fn from_text(names: &[&str], weights: &[i64], f: &str) -> Result<Self, RingError> {
        let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let f = parse_polynomial_in(f, &names)?;
        WeightedRing::new(names, weights.to_vec(), f)
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn f(&self) -> &Polynomial {
        &self.f
    }

    /// Weighted degree `d` of `f`.
    pub fn degree(&self) -> i64 {
        self.degree
    }

    /// `omega_i = d_i / d`.
    pub fn omega(&self) -> &[Scalar] {
        &self.omega
    }

    /// `delta = omega_1 + ... + omega_n - 1`.
    pub fn delta(&self) -> &Scalar {
        &self.delta
    }

    pub fn lead_monomial(&self) -> &Monomial {
        &self.lead
    }

    pub fn parse(&self, text: &str) -> Result<Polynomial, ParseError> {
        parse_polynomial_in(text, &self.names)
    }

    pub fn zero(&self) -> Polynomial {
        Polynomial::zero(self.nvars())
    }

    pub fn one(&self) -> Polynomial {
        Polynomial::one(self.nvars())
    }

    pub fn constant(&self, c: Scalar) -> Polynomial {
        Polynomial::constant(self.nvars(), c)
    }

    pub fn var(&self, i: usize) -> Polynomial {
        Polynomial::var(self.nvars(), i)
    }

    pub fn wdeg(&self, m: &Monomial) -> i64 {
        m.wdeg(&self.weights)
    }

    /// Remainder of `p` on division by `f`.
    pub fn reduce(&self, p: &Polynomial) -> Polynomial {
        if !p.terms().any(|(m, _)| self.lead.divides(m)) {
            return p.clone();
        }
        let mut work = p.clone();
        let mut out = Polynomial::zero(self.nvars());
        while let Some((m, c)) = work.pop_lead() {
            if self.lead.divides(&m) {
                let q = self.lead.quotient_of(&m);
                let factor = -(&c / &self.lead_coeff);
                for (t, tc) in self.f_tail.terms() {
                    work.add_term(q.mul(t), tc * &factor);
                }
            } else {
                out.add_term(m, c);
            }
        }
        out
    }

    pub fn normal_form(&self, p: &Polynomial) -> QuotientElement {
        QuotientElement(self.reduce(p))
    }

    pub fn mul(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        self.reduce(&(a * b))
    }

    /// `sum_i c_i * dr/dx_i`, reduced.
    pub fn apply_derivation(&self, coeffs: &[Polynomial], r: &Polynomial) -> Polynomial {
        assert_eq!(coeffs.len(), self.nvars(), "derivation has the wrong number of coefficients");
        let mut out = self.zero();
        for (i, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let dr = r.derivative(i);
            if !dr.is_zero() {
                out = &out + &(c * &dr);
            }
        }
        self.reduce(&out)
    }

    /// Normal-form monomials of weighted degree `w`; empty for `w < 0`.
    pub fn graded_basis(&self, w: i64) -> Vec<Monomial> {
        self.piece(w).monomials.clone()
    }

    pub fn dim(&self, w: i64) -> usize {
        self.piece(w).dim()
    }

    /// Cached graded piece `R_w`.
    pub fn piece(&self, w: i64) -> Arc<GradedPiece> {
        if let Some(p) = self.pieces.lock().expect("piece cache").get(&w) {
            return Arc::clone(p);
        }
        let monomials: Vec<Monomial> =
            monomials_of_degree(&self.weights, w).into_iter().filter(|m| !self.lead.divides(m)).collect();
        let index = monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let piece = Arc::new(GradedPiece { degree: w, monomials, index });
        self.pieces.lock().expect("piece cache").insert(w, Arc::clone(&piece));
        piece
    }

    /// Coordinates of a normal-form polynomial, homogeneous of degree `w`,
    /// against [`WeightedRing::graded_basis`]. Panics on terms of another
    /// degree or terms not in normal form.
    pub fn coords(&self, p: &Polynomial, w: i64) -> SparseVec {
        let piece = self.piece(w);
        SparseVec::from_pairs(p.terms().map(|(m, c)| {
            let i = piece
                .index_of(m)
                .unwrap_or_else(|| panic!("term {} is not a normal-form monomial of degree {w}", self.format_monomial(m)));
            (i, c.clone())
        }))
    }

    pub fn from_coords(&self, v: &SparseVec, w: i64) -> Polynomial {
        let piece = self.piece(w);
        Polynomial::from_terms(self.nvars(), v.iter().map(|(i, c)| (piece.monomials[*i].clone(), c.clone())))
    }

    pub fn monomial_poly(&self, m: &Monomial) -> Polynomial {
        Polynomial::term(m.clone(), Scalar::one())
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        let parts: Vec<String> = m
            .exponents()
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { self.names[i].clone() } else { format!("{}^{}", self.names[i], e) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    /// Renders `p` with terms in decreasing weighted degree, then decreasing
    /// lexicographic order. The output re-parses to the same polynomial.
    pub fn format(&self, p: &Polynomial) -> String {
        if p.is_zero() {
            return "0".into();
        }
        let mut terms: Vec<(&Monomial, &Scalar)> = p.terms().collect();
        terms.sort_by(|a, b| (self.wdeg(b.0), b.0).cmp(&(self.wdeg(a.0), a.0)));
        let mut out = String::new();
        for (k, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = self.format_monomial(m);
            if mono == "1" {
                out.push_str(&fmt_scalar(&abs));
            } else if abs.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{}*{}", fmt_scalar(&abs), mono));
            }
        }
        out
    }
}

/// An element of `R` held as its normal-form representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientElement(Polynomial);

impl QuotientElement {
    pub fn rep(&self) -> &Polynomial {
        &self.0
    }

    pub fn into_rep(self) -> Polynomial {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

/// Number of monomials of weighted degree `w` in the ambient ring.
pub fn ambient_dim(weights: &[i64], w: i64) -> usize {
    monomials_of_degree(weights, w).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{frac, int};
    use proptest::prelude::*;

    fn cubic() -> WeightedRing {
        WeightedRing::from_text(&["x", "y", "z"], &[1, 1, 1], "x^3+y^3+z^3").unwrap()
    }

    fn e6() -> WeightedRing {
        WeightedRing::from_text(&["x", "y", "z"], &[4, 3, 3], "x^3+y^4+z^4").unwrap()
    }

    #[test]
    fn ring_constants() {
        let r = e6();
        assert_eq!(r.degree(), 12);
        assert_eq!(r.omega()[0], frac(1, 3));
        assert_eq!(r.delta(), &frac(-1, 6));
        assert_eq!(cubic().delta(), &int(0));
    }

    #[test]
    fn inhomogeneous_f_rejected() {
        let err = WeightedRing::from_text(&["x", "y", "z"], &[1, 1, 1], "x^3+y^2").unwrap_err();
        assert_eq!(err, RingError::NotHomogeneous(vec![2, 3]));
        assert!(matches!(WeightedRing::from_text(&["x"], &[1], "x"), Err(RingError::DegreeTooSmall(1))));
        assert!(matches!(WeightedRing::from_text(&["x"], &[1], "3"), Err(RingError::ConstantF)));
    }

    #[test]
    fn normal_form_examples() {
        let r = cubic();
        assert!(r.normal_form(r.f()).is_zero());
        let p = &(r.f() * &r.var(0)) + &r.var(1);
        assert_eq!(r.reduce(&p), r.var(1));
        let x3 = r.parse("x^3").unwrap();
        assert_eq!(r.reduce(&x3), r.parse("-y^3-z^3").unwrap());
    }

    #[test]
    fn graded_basis_examples() {
        let r = cubic();
        assert_eq!(r.graded_basis(0), vec![Monomial::one(3)]);
        assert_eq!(r.dim(3), 9);
        assert!(r.graded_basis(-1).is_empty());
        assert!(e6().graded_basis(2).is_empty());
    }

    #[test]
    fn derivation_examples() {
        let r = cubic();
        // D1 = f_y d/dx - f_x d/dy applied to x.
        let d1 = vec![r.parse("3*y^2").unwrap(), r.parse("-3*x^2").unwrap(), r.zero()];
        assert_eq!(r.apply_derivation(&d1, &r.var(0)), r.parse("3*y^2").unwrap());
        assert!(r.apply_derivation(&d1, &r.one()).is_zero());
        // Euler derivation scales a degree-w element by w/d.
        let q = e6();
        let euler: Vec<Polynomial> = (0..3).map(|i| q.var(i).scale(&q.omega()[i])).collect();
        let p = q.parse("x^2*y^2 + 5*x^2*y*z - x^2*z^2").unwrap();
        let p = q.reduce(&p);
        assert_eq!(q.apply_derivation(&euler, &p), p.scale(&frac(14, 12)));
    }

    #[test]
    fn format_round_trips() {
        let r = e6();
        let p = r.parse("-2/3*x*y - z^2 + 7 + x^3*z").unwrap();
        let s = r.format(&p);
        assert_eq!(s, "x^3*z - 2/3*x*y - z^2 + 7");
        assert_eq!(r.parse(&s).unwrap(), p);
    }

    fn dims_match_exact_sequence(r: &WeightedRing, top: i64) {
        for w in -2..=top {
            let expect = ambient_dim(r.weights(), w) as i64 - ambient_dim(r.weights(), w - r.degree()) as i64;
            assert_eq!(r.dim(w) as i64, expect, "degree {w}");
        }
    }

    #[test]
    fn dimension_identity() {
        dims_match_exact_sequence(&cubic(), 12);
        dims_match_exact_sequence(&e6(), 40);
        let q = WeightedRing::from_text(&["x", "y", "z"], &[1, 1, 1], "x^2+y^2+z^2").unwrap();
        dims_match_exact_sequence(&q, 8);
    }

    fn poly_strategy() -> impl Strategy<Value = Polynomial> {
        proptest::collection::vec(((0u32..5, 0u32..5, 0u32..5), -4i64..5), 0..6).prop_map(|ts| {
            Polynomial::from_terms(3, ts.into_iter().map(|((a, b, c), k)| (Monomial(vec![a, b, c]), int(k))))
        })
    }

    proptest! {
        #[test]
        fn normal_form_idempotent_and_additive(p in poly_strategy(), q in poly_strategy()) {
            let r = cubic();
            let np = r.reduce(&p);
            prop_assert_eq!(r.reduce(&np), np.clone());
            prop_assert!(np.terms().all(|(m, _)| !r.lead_monomial().divides(m)));
            prop_assert_eq!(r.reduce(&(&p + &q)), &np + &r.reduce(&q));
        }

        #[test]
        fn normal_form_multiplicative(p in poly_strategy(), q in poly_strategy()) {
            let r = e6();
            let lhs = r.reduce(&(&p * &q));
            let rhs = r.reduce(&(&r.reduce(&p) * &r.reduce(&q)));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn difference_is_ideal_member(p in poly_strategy()) {
            // p - nf(p) is divisible by f: dividing it again leaves nothing.
            let r = cubic();
            let diff = &p - &r.reduce(&p);
            prop_assert!(r.reduce(&diff).is_zero());
        }

        #[test]
        fn euler_identity_before_reduction(p in poly_strategy()) {
            let r = e6();
            for (deg, comp) in p.homogeneous_components(r.weights()) {
                let mut lhs = Polynomial::zero(3);
                for i in 0..3 {
                    lhs = &lhs + &(&comp.derivative(i) * &r.var(i)).scale(&r.omega()[i]);
                }
                prop_assert_eq!(lhs, comp.scale(&frac(deg, r.degree())));
            }
        }

        #[test]
        fn leibniz_rule(p in poly_strategy(), q in poly_strategy()) {
            let r = cubic();
            let d = vec![r.parse("3*y^2").unwrap(), r.parse("-3*x^2").unwrap(), r.zero()];
            let (p, q) = (r.reduce(&p), r.reduce(&q));
            let lhs = r.apply_derivation(&d, &r.mul(&p, &q));
            let rhs = &r.mul(&p, &r.apply_derivation(&d, &q)) + &r.mul(&q, &r.apply_derivation(&d, &p));
            prop_assert_eq!(lhs, rhs);
        }
    }
}
