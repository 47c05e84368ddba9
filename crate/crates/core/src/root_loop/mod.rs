//! Root data, coweights and Weyl dominance in any finite type, the Hecke
//! class of a rank-1 modification, and explicit rank-1 loop-group elements
//! with the Birkhoff factorization `exp(a e t^(j+alpha(mu))) t^(mu+lambda) =
//! A t^nu B` checked by matrix multiplication and regularity.

mod coweight;
mod datum;
mod loops;

pub use coweight::{hecke_class, Coweight};
pub use datum::RootDatum;
pub use loops::{
    birkhoff_factorize, constant_table, generic_factors, hecke_input, realize_generator,
    verify_factorization, FactorizationCheck, Factorization, LoopElement, LoopGenerator, Regime,
};
