//! Exact arithmetic: rationals, multivariate polynomials over named
//! variables, unreduced rational functions, Laurent polynomials in the loop
//! variable and 2x2 Laurent matrices in the SL2 and PGL2 flavors.
//!
//! Every value prints to a canonical text form. Polynomials print their terms
//! in descending graded-lex order, e.g. `3*x1^2*t2 - 1/2`, so equal
//! polynomials always produce identical text.

mod laurent;
mod monomial;
mod polynomial;
mod rational;
mod table;

pub use laurent::{Flavor, LaurentPolynomial, ProjectiveLaurentMatrix, RegularAt};
pub use monomial::Monomial;
pub use polynomial::Polynomial;
pub use rational::RationalFunction;
pub use table::{Table, VarTable};

use num_bigint::BigInt;

/// Exact rational number, always stored in lowest terms.
pub type Scalar = num_rational::BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Scalar {
    Scalar::new(BigInt::from(n), BigInt::from(d))
}

pub fn scalar_text(c: &Scalar) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Parses `p` or `p/q` with optional sign.
pub fn parse_scalar(s: &str) -> Option<Scalar> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d == BigInt::from(0) {
                None
            } else {
                Some(Scalar::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(Scalar::from_integer),
    }
}
