use std::fmt;
use std::sync::OnceLock;

use num_integer::Integer;
use num_traits::Zero;

use super::coweight::{hecke_class, Coweight};
use crate::error::{Error, Result};
use crate::exact_algebra::{
    int, Flavor, LaurentPolynomial, ProjectiveLaurentMatrix, RationalFunction, RegularAt, Scalar,
    Table, VarTable,
};

/// Table without variables, for loop elements with numeric coefficients.
pub fn constant_table() -> Table {
    static TABLE: OnceLock<Table> = OnceLock::new();
    TABLE.get_or_init(|| VarTable::new::<&str>(&[]).unwrap()).clone()
}

/// Generators of the rank-1 loop group.
#[derive(Clone, Debug)]
pub enum LoopGenerator {
    /// `exp(c e t^m)` for the positive root, `exp(c f t^m)` for the negative one.
    ExpNilpotent { positive: bool, coeff: RationalFunction, mode: i64 },
    /// `t^lambda` for the coweight with `alpha(lambda) = p`.
    TCoweight(i64),
    /// The Weyl representative `[[0, 1], [-1, 0]]`.
    Weyl,
    /// `a^{alpha^vee} = diag(a, 1/a)`.
    Cartan(RationalFunction),
}

/// Word in the loop-group generators together with its flavor.
#[derive(Clone)]
pub struct LoopElement {
    table: Table,
    flavor: Flavor,
    word: Vec<LoopGenerator>,
}

impl LoopElement {
    pub fn identity(table: &Table, flavor: Flavor) -> Self {
        LoopElement { table: table.clone(), flavor, word: Vec::new() }
    }

    pub fn generator(table: &Table, flavor: Flavor, g: LoopGenerator) -> Result<Self> {
        let e = LoopElement { table: table.clone(), flavor, word: vec![g] };
        e.realize()?;
        Ok(e)
    }

    pub fn exp_e(coeff: Scalar, mode: i64, flavor: Flavor) -> Self {
        let c = RationalFunction::from_scalar(&constant_table(), coeff);
        LoopElement {
            table: constant_table(),
            flavor,
            word: vec![LoopGenerator::ExpNilpotent { positive: true, coeff: c, mode }],
        }
    }

    pub fn exp_f(coeff: Scalar, mode: i64, flavor: Flavor) -> Self {
        let c = RationalFunction::from_scalar(&constant_table(), coeff);
        LoopElement {
            table: constant_table(),
            flavor,
            word: vec![LoopGenerator::ExpNilpotent { positive: false, coeff: c, mode }],
        }
    }

    pub fn t_coweight(lambda: &Coweight) -> Result<Self> {
        let p = lambda.rank_one_pairing()?;
        Self::generator(&constant_table(), lambda.flavor(), LoopGenerator::TCoweight(p))
    }

    pub fn weyl(flavor: Flavor) -> Self {
        LoopElement { table: constant_table(), flavor, word: vec![LoopGenerator::Weyl] }
    }

    pub fn cartan(a: Scalar, flavor: Flavor) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::Precondition("Cartan element needs a nonzero scalar".into()));
        }
        let c = RationalFunction::from_scalar(&constant_table(), a);
        Ok(LoopElement { table: constant_table(), flavor, word: vec![LoopGenerator::Cartan(c)] })
    }

    pub fn table(&self) -> &Table {
        &self.table
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn word(&self) -> &[LoopGenerator] {
        &self.word
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.flavor != other.flavor {
            return Err(Error::FlavorMismatch(format!("{} times {}", self.flavor, other.flavor)));
        }
        let mut word = self.word.clone();
        word.extend(other.word.iter().cloned());
        Ok(LoopElement { table: self.table.clone(), flavor: self.flavor, word })
    }

    /// The 2x2 matrix of the word in the defining representation.
    pub fn realize(&self) -> Result<ProjectiveLaurentMatrix> {
        let mut m = ProjectiveLaurentMatrix::identity(&self.table, self.flavor);
        for g in &self.word {
            let gm = realize_generator(&self.table, self.flavor, g)?;
            m = m.try_mul(&gm)?;
        }
        Ok(m)
    }

    pub fn to_text(&self) -> String {
        if self.word.is_empty() {
            return "1".into();
        }
        let parts: Vec<String> = self
            .word
            .iter()
            .map(|g| match g {
                LoopGenerator::ExpNilpotent { positive, coeff, mode } => {
                    let x = if *positive { "e" } else { "f" };
                    let c = if coeff.is_atom() { coeff.to_text() } else { format!("({coeff})") };
                    format!("exp({c}*{x}*t^{mode})")
                }
                LoopGenerator::TCoweight(p) => format!("t^(lambda:{p})"),
                LoopGenerator::Weyl => "w".into(),
                LoopGenerator::Cartan(a) => format!("({a})^acheck"),
            })
            .collect();
        parts.join("*")
    }
}

impl fmt::Debug for LoopElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn lp(c: RationalFunction, e: i64) -> LaurentPolynomial {
    LaurentPolynomial::monomial(c, e)
}

/// Matrix of one generator. `t^lambda` is `diag(t^(p/2), t^(-p/2))` for even
/// `p`; for odd `p` (adjoint flavor only) it is the representative
/// `diag(t^((p+1)/2), t^((1-p)/2))` of the same projective class.
pub fn realize_generator(
    table: &Table,
    flavor: Flavor,
    g: &LoopGenerator,
) -> Result<ProjectiveLaurentMatrix> {
    let one = RationalFunction::one(table);
    let zero = LaurentPolynomial::zero(table);
    let entries = match g {
        LoopGenerator::ExpNilpotent { positive, coeff, mode } => {
            let c = lp(coeff.clone(), *mode);
            if *positive {
                [lp(one.clone(), 0), c, zero.clone(), lp(one, 0)]
            } else {
                [lp(one.clone(), 0), zero.clone(), c, lp(one, 0)]
            }
        }
        LoopGenerator::TCoweight(p) => {
            let p = *p;
            if p.is_odd() && flavor == Flavor::Sl2 {
                return Err(Error::InvalidCoweight(format!(
                    "t^lambda with alpha(lambda) = {p} needs the PGL2 flavor"
                )));
            }
            let a = if p.is_odd() { (p + 1) / 2 } else { p / 2 };
            [lp(one.clone(), a), zero.clone(), zero.clone(), lp(one, a - p)]
        }
        LoopGenerator::Weyl => {
            [zero.clone(), lp(one.clone(), 0), lp(-&one, 0), zero.clone()]
        }
        LoopGenerator::Cartan(a) => {
            [lp(a.clone(), 0), zero.clone(), zero.clone(), lp(a.inv()?, 0)]
        }
    };
    ProjectiveLaurentMatrix::new(entries, flavor)
}

/// Which closed form produced a factorization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    /// `j >= alpha(lambda)`: the unipotent factor moves to the right.
    RightRegular,
    /// `j <= -alpha(mu)`: the unipotent factor is already regular at infinity.
    LeftRegular,
    /// `-alpha(mu) < j < alpha(lambda)`: Weyl element and Cartan factor needed.
    Generic,
}

#[derive(Clone, Debug)]
pub struct Factorization {
    pub left: LoopElement,
    pub nu: Coweight,
    pub right: LoopElement,
    pub regime: Regime,
}

fn rank_one_inputs(mu: &Coweight, lambda: &Coweight) -> Result<(i64, i64, Flavor)> {
    if mu.flavor() != lambda.flavor() {
        return Err(Error::FlavorMismatch(format!("{} and {}", mu.flavor(), lambda.flavor())));
    }
    Ok((mu.rank_one_pairing()?, lambda.rank_one_pairing()?, mu.flavor()))
}

/// The element `exp(a e t^(j + alpha(mu))) t^(mu + lambda)` being factored.
pub fn hecke_input(a: &Scalar, mu: &Coweight, lambda: &Coweight, j: i64) -> Result<LoopElement> {
    let (am, _, flavor) = rank_one_inputs(mu, lambda)?;
    LoopElement::exp_e(a.clone(), j + am, flavor).mul(&LoopElement::t_coweight(&mu.add(lambda)?)?)
}

/// The factors `A = w exp(-a^-1 e t^(-j-alpha(mu)))`,
/// `B = exp(a f t^(alpha(lambda)-j)) a^(-alpha^vee)` and
/// `nu = mu + lambda - (j + alpha(mu)) alpha^vee`, without regime selection.
pub fn generic_factors(a: &Scalar, mu: &Coweight, lambda: &Coweight, j: i64) -> Result<Factorization> {
    if a.is_zero() {
        return Err(Error::Precondition("the factorization divides by a; a = 0".into()));
    }
    let (am, al, flavor) = rank_one_inputs(mu, lambda)?;
    let left = LoopElement::weyl(flavor).mul(&LoopElement::exp_e(-a.recip(), -j - am, flavor))?;
    let right = LoopElement::exp_f(a.clone(), al - j, flavor)
        .mul(&LoopElement::cartan(a.recip(), flavor)?)?;
    let nu = Coweight::rank_one(al - am - 2 * j, flavor)?;
    Ok(Factorization { left, nu, right, regime: Regime::Generic })
}

/// Birkhoff factorization `exp(a e t^(j+alpha(mu))) t^(mu+lambda) = A t^nu B`
/// with `A` regular at infinity and `B` regular at zero.
pub fn birkhoff_factorize(a: &Scalar, mu: &Coweight, lambda: &Coweight, j: i64) -> Result<Factorization> {
    if a.is_zero() {
        return Err(Error::Precondition("the factorization divides by a; a = 0".into()));
    }
    let (am, al, flavor) = rank_one_inputs(mu, lambda)?;
    if j >= al {
        let right = LoopElement::exp_e(a.clone(), j - al, flavor);
        let left = LoopElement::identity(&constant_table(), flavor);
        return Ok(Factorization { left, nu: mu.add(lambda)?, right, regime: Regime::RightRegular });
    }
    if j <= -am {
        let left = LoopElement::exp_e(a.clone(), j + am, flavor);
        let right = LoopElement::identity(&constant_table(), flavor);
        return Ok(Factorization { left, nu: mu.add(lambda)?, right, regime: Regime::LeftRegular });
    }
    generic_factors(a, mu, lambda, j)
}

/// Outcome of [`verify_factorization`], one flag per condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationCheck {
    pub product: bool,
    pub left_regular_at_infinity: bool,
    pub right_regular_at_zero: bool,
    /// `None` when `(mu, lambda, j)` is outside the Hecke-class range.
    pub matches_hecke_class: Option<bool>,
}

impl FactorizationCheck {
    pub fn passed(&self) -> bool {
        self.product
            && self.left_regular_at_infinity
            && self.right_regular_at_zero
            && self.matches_hecke_class != Some(false)
    }
}

pub fn verify_factorization(
    a: &Scalar,
    mu: &Coweight,
    lambda: &Coweight,
    j: i64,
    f: &Factorization,
) -> Result<FactorizationCheck> {
    let input = hecke_input(a, mu, lambda, j)?.realize()?;
    let middle = LoopElement::t_coweight(&f.nu)?;
    let rhs = f.left.mul(&middle)?.mul(&f.right)?.realize()?;
    let product = input.equals(&rhs);
    let left_regular_at_infinity = f.left.realize()?.regularity(RegularAt::Infinity);
    let right_regular_at_zero = f.right.realize()?.regularity(RegularAt::Zero);
    let (_, al, _) = rank_one_inputs(mu, lambda)?;
    let matches_hecke_class = if mu.is_dominant() && lambda.is_dominant() && 0 <= j && j < al {
        let class = hecke_class(mu, lambda, &[1], j)?;
        Some(int(f.nu.rank_one_pairing()?.abs()) == class.coords()[0])
    } else {
        None
    };
    Ok(FactorizationCheck {
        product,
        left_regular_at_infinity,
        right_regular_at_zero,
        matches_hecke_class,
    })
}

