//! Exact Lie-Rinehart cohomology of quasi-homogeneous surface singularities
//! and monomial curves, together with the calculus of connections on graded
//! rank-one modules over them.
//!
//! All arithmetic is over the rationals. The modules build on each other:
//!
//! - [`exactmath`]: rationals, dense matrices and sparse echelon forms.
//! - [`polyring`]: weighted polynomials, the quotient `R = Q[x]/(f)`, parser.
//! - [`derlie`]: derivations of `R`, the Euler/Koszul generators, the matrix
//!   factorization `(phi, psi)` and graded pieces of `Hom_R(Der, R)`.
//! - [`rincomplex`]: the complex `C^0 -> C^1 -> C^2`, its differentials and
//!   per-degree cohomology.
//! - [`modconn`]: connections on presented modules, curvature, the
//!   integrability class and equivalence.
//! - [`curves`]: monomial curves `k[Gamma]` and modules `k[Lambda]`.
//! - [`milnor`]: Milnor and Tjurina numbers by graded linear algebra.

pub mod curves;
pub mod derlie;
pub mod exactmath;
pub mod linsys;
pub mod milnor;
pub mod modconn;
pub mod polyring;
pub mod rincomplex;

/// One named pass/fail check with a human-readable detail line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed, detail: detail.into() }
    }
}
