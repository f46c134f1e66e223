//! Milnor and Tjurina numbers by ranks of multiplication maps between
//! graded pieces of the ambient polynomial ring `P`.

use std::collections::HashMap;

use crate::exactmath::{Echelon, SparseVec};
use crate::polyring::{monomials_of_degree, Monomial, Polynomial, WeightedRing};
use crate::rincomplex::CohomologyTable;
use crate::Check;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MilnorError {
    #[error("not isolated: the quotient has dimension {dim} in degree {degree}, past the cutoff {cutoff}")]
    NotIsolated { degree: i64, dim: usize, cutoff: i64 },
    #[error("negative socle bound {0}")]
    NegativeSocle(i64),
}

#[derive(Clone, Debug)]
pub struct JacobianData {
    pub partials: Vec<Polynomial>,
    pub socle_bound: i64,
}

impl JacobianData {
    pub fn new(ring: &WeightedRing) -> Self {
        let partials: Vec<Polynomial> = (0..ring.nvars()).map(|i| ring.f().derivative(i)).collect();
        let d = ring.degree();
        let socle_bound = ring.weights().iter().map(|&di| d - 2 * di).sum();
        JacobianData { partials, socle_bound }
    }
}

/// `dim (P / I)_w` for the ideal `I` generated by homogeneous `gens`.
fn quotient_dim(weights: &[i64], gens: &[(Polynomial, i64)], w: i64) -> usize {
    let target = monomials_of_degree(weights, w);
    let index: HashMap<&Monomial, usize> = target.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut ech = Echelon::new();
    for (g, deg) in gens {
        if g.is_zero() {
            continue;
        }
        for m in monomials_of_degree(weights, w - deg) {
            let prod = g.mul_term(&m, &num_traits::One::one());
            ech.push(SparseVec::from_pairs(prod.terms().map(|(t, c)| (index[t], c.clone()))));
            if ech.rank() == target.len() {
                return 0;
            }
        }
    }
    target.len() - ech.rank()
}

/// Per-degree dimensions `(w, dim)` for `0 <= w <= socle_bound`, after
/// checking that `(socle_bound, socle_bound + d]` is empty.
fn graded_quotient(ring: &WeightedRing, gens: &[(Polynomial, i64)]) -> Result<Vec<(i64, usize)>, MilnorError> {
    let jd = JacobianData::new(ring);
    if jd.socle_bound < 0 {
        return Err(MilnorError::NegativeSocle(jd.socle_bound));
    }
    let weights = ring.weights();
    for w in jd.socle_bound + 1..=jd.socle_bound + ring.degree() {
        let dim = quotient_dim(weights, gens, w);
        if dim != 0 {
            return Err(MilnorError::NotIsolated { degree: w, dim, cutoff: jd.socle_bound });
        }
    }
    Ok((0..=jd.socle_bound).map(|w| (w, quotient_dim(weights, gens, w))).collect())
}

fn partial_generators(ring: &WeightedRing) -> Vec<(Polynomial, i64)> {
    let d = ring.degree();
    JacobianData::new(ring).partials.into_iter().zip(ring.weights()).map(|(p, &di)| (p, d - di)).collect()
}

pub fn milnor_series(ring: &WeightedRing) -> Result<Vec<(i64, usize)>, MilnorError> {
    graded_quotient(ring, &partial_generators(ring))
}

pub fn milnor_number(ring: &WeightedRing) -> Result<usize, MilnorError> {
    Ok(milnor_series(ring)?.iter().map(|(_, n)| n).sum())
}

pub fn tjurina_number(ring: &WeightedRing) -> Result<usize, MilnorError> {
    let mut gens = vec![(ring.f().clone(), ring.degree())];
    gens.extend(partial_generators(ring));
    Ok(graded_quotient(ring, &gens)?.iter().map(|(_, n)| n).sum())
}

/// `dim H^2 - dim H^1 = mu - tau`, plus `H^1 = H^2` degree by degree.
pub fn verify_mu_tau_cohomology(ring: &WeightedRing, table: &CohomologyTable) -> Vec<Check> {
    let (mu, tau) = match (milnor_number(ring), tjurina_number(ring)) {
        (Ok(m), Ok(t)) => (m, t),
        (Err(e), _) | (_, Err(e)) => return vec![Check::new("milnor", false, e.to_string())],
    };
    let (_, h1, h2) = table.totals();
    let lhs = h2 as i64 - h1 as i64;
    let rhs = mu as i64 - tau as i64;
    let graded = table.records.iter().all(|r| r.h1 == r.h2);
    vec![
        Check::new("mu = tau (quasi-homogeneous)", mu == tau, format!("mu = {mu}, tau = {tau}")),
        Check::new("dim H2 - dim H1 = mu - tau", lhs == rhs, format!("{h2} - {h1} = {lhs}, {mu} - {tau} = {rhs}")),
        Check::new("H1 = H2 as graded spaces", graded, String::new()),
    ]
}
