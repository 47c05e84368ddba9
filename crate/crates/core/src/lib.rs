//! Exact symbolic verification for the Hecke transport of sl2 conformal
//! blocks: Segal-Sugawara conjugation laws, spectral flow, rank-1 Birkhoff
//! factorization of the loop group, and Ward/KZ identities for the transformed
//! correlators.

pub mod affine_algebra;
pub mod error;
pub mod exact_algebra;
pub mod kz_blocks;
pub mod root_loop;
pub mod weyl_calculus;

pub use error::{Error, Result};
