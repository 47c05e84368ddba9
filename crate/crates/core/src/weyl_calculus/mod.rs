//! Differential operators with rational coefficients acting on twisted
//! functions: finite sums of rational functions times symbolic powers of
//! polynomials times jets of an unknown function `Psi`.
//!
//! The jets of `Psi` are tied to table variables through a substitution
//! record, so derivatives follow the chain rule. Systems of relations linear
//! in the jets are prolonged by differentiation and echelonized; a twisted
//! function is shown to vanish modulo the relations by Gaussian elimination.

mod diffop;
mod jets;
mod reduce;
mod twisted;

pub use diffop::DiffOp;
pub use jets::{ArgKind, FormalArgs, Jet, SubstitutionRecord};
pub use reduce::{prolong, reduce_modulo, Echelon};
pub use twisted::{FactorSet, JetMonomial, TermKey, TwistedFunction};
