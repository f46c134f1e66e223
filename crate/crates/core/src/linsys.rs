//! Linear systems whose unknowns are homogeneous elements of `R`.
//!
//! Every unknown `u_k` ranges over a graded piece `R_{e_k}` and every
//! equation is a homogeneous identity in some `R_w`. Terms are `p * u` or
//! `p * D(u)` for a derivation `D`. The system is flattened into a sparse
//! rational system over monomial coordinates and solved exactly.

use crate::exactmath::{solve_columns, SparseVec};
use crate::polyring::{Polynomial, WeightedRing};

#[derive(Clone, Debug)]
pub enum Term {
    /// `p * u`.
    Mul(Polynomial),
    /// `p * D(u)`, with `D` given by its coefficients against the partials.
    DerMul { der: Vec<Polynomial>, factor: Polynomial },
}

#[derive(Clone, Debug)]
struct Equation {
    degree: i64,
    rhs: Polynomial,
}

#[derive(Clone, Debug)]
pub struct GradedSystem<'r> {
    ring: &'r WeightedRing,
    unknowns: Vec<i64>,
    equations: Vec<Equation>,
    terms: Vec<(usize, usize, Term)>,
}

impl<'r> GradedSystem<'r> {
    pub fn new(ring: &'r WeightedRing) -> Self {
        GradedSystem { ring, unknowns: Vec::new(), equations: Vec::new(), terms: Vec::new() }
    }

    /// Declares an unknown ranging over `R_degree`.
    pub fn unknown(&mut self, degree: i64) -> usize {
        self.unknowns.push(degree);
        self.unknowns.len() - 1
    }

    pub fn unknown_count(&self) -> usize {
        self.unknowns.len()
    }

    /// Declares the equation `(terms) = 0` in `R_degree`.
    pub fn equation(&mut self, degree: i64) -> usize {
        self.equations.push(Equation { degree, rhs: self.ring.zero() });
        self.equations.len() - 1
    }

    pub fn equation_degree(&self, eq: usize) -> i64 {
        self.equations[eq].degree
    }

    pub fn add(&mut self, eq: usize, unknown: usize, term: Term) {
        let zero = match &term {
            Term::Mul(p) => p.is_zero(),
            Term::DerMul { der, factor } => factor.is_zero() || der.iter().all(Polynomial::is_zero),
        };
        if !zero {
            self.terms.push((eq, unknown, term));
        }
    }

    /// Adds `p` to the right-hand side of equation `eq`.
    pub fn add_rhs(&mut self, eq: usize, p: &Polynomial) {
        let e = &mut self.equations[eq];
        e.rhs = &e.rhs + p;
    }

    fn offsets(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.equations.len());
        let mut acc = 0;
        for e in &self.equations {
            out.push(acc);
            acc += self.ring.dim(e.degree);
        }
        out
    }

    fn image(&self, term: &Term, u: &Polynomial) -> Polynomial {
        match term {
            Term::Mul(p) => self.ring.mul(p, u),
            Term::DerMul { der, factor } => self.ring.mul(factor, &self.ring.apply_derivation(der, u)),
        }
    }

    /// The flattened coefficient columns, one per (unknown, basis monomial).
    fn columns(&self) -> (Vec<SparseVec>, Vec<(usize, usize)>) {
        let offsets = self.offsets();
        let mut by_unknown: Vec<Vec<(usize, &Term)>> = vec![Vec::new(); self.unknowns.len()];
        for (eq, k, t) in &self.terms {
            by_unknown[*k].push((*eq, t));
        }
        let mut columns = Vec::new();
        let mut labels = Vec::new();
        for (k, &deg) in self.unknowns.iter().enumerate() {
            for (j, m) in self.ring.graded_basis(deg).iter().enumerate() {
                let u = self.ring.monomial_poly(m);
                let mut col = Vec::new();
                for (eq, t) in &by_unknown[k] {
                    let img = self.image(t, &u);
                    let w = self.equations[*eq].degree;
                    let c = self.ring.coords(&img, w).offset(offsets[*eq]);
                    col.extend(c.iter().cloned());
                }
                columns.push(SparseVec::from_pairs(col));
                labels.push((k, j));
            }
        }
        (columns, labels)
    }

    fn rhs(&self) -> SparseVec {
        let offsets = self.offsets();
        let mut pairs = Vec::new();
        for (e, off) in self.equations.iter().zip(&offsets) {
            let r = self.ring.reduce(&e.rhs);
            pairs.extend(self.ring.coords(&r, e.degree).offset(*off).iter().cloned());
        }
        SparseVec::from_pairs(pairs)
    }

    /// A particular solution, one polynomial per unknown, or `None` when the
    /// system is inconsistent.
    pub fn solve(&self) -> Option<Vec<Polynomial>> {
        let (columns, labels) = self.columns();
        let x = solve_columns(&columns, &self.rhs())?;
        let mut out: Vec<Polynomial> = self.unknowns.iter().map(|_| self.ring.zero()).collect();
        for ((k, j), c) in labels.into_iter().zip(x) {
            let m = &self.ring.piece(self.unknowns[k]).monomials[j];
            out[k].add_term(m.clone(), c);
        }
        Some(out)
    }
}
