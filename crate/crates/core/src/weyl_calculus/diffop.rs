use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::One;

use super::twisted::TwistedFunction;
use crate::error::Result;
use crate::exact_algebra::{Monomial, RationalFunction, Scalar, Table};

/// Linear differential operator `sum_a c_a(vars) d^a` with rational
/// coefficients; the multi-index `a` is stored as a [`Monomial`].
#[derive(Clone)]
pub struct DiffOp {
    table: Table,
    terms: BTreeMap<Monomial, RationalFunction>,
}

fn binomial(n: u16, k: u16) -> Scalar {
    let mut c = Scalar::one();
    for i in 0..k {
        c = c * Scalar::from_integer((n - i).into()) / Scalar::from_integer((i + 1).into());
    }
    c
}

impl DiffOp {
    pub fn zero(table: &Table) -> Self {
        DiffOp { table: table.clone(), terms: BTreeMap::new() }
    }

    /// Multiplication by a function.
    pub fn mult(c: RationalFunction) -> Self {
        let mut op = Self::zero(c.table());
        op.add_term(Monomial::one(c.table().len()), c);
        op
    }

    pub fn identity(table: &Table) -> Self {
        Self::mult(RationalFunction::one(table))
    }

    pub fn partial(table: &Table, var: usize) -> Self {
        let mut op = Self::zero(table);
        op.add_term(Monomial::var(table.len(), var), RationalFunction::one(table));
        op
    }

    pub fn table(&self) -> &Table {
        &self.table
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &RationalFunction)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn order(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    fn add_term(&mut self, m: Monomial, c: RationalFunction) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn add(&self, other: &DiffOp) -> DiffOp {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &DiffOp) -> DiffOp {
        self.add(&other.scale(&RationalFunction::from_int(&self.table, -1)))
    }

    /// Left multiplication by a function.
    pub fn scale(&self, c: &RationalFunction) -> DiffOp {
        let mut out = Self::zero(&self.table);
        for (m, cc) in &self.terms {
            out.add_term(m.clone(), cc * c);
        }
        out
    }

    /// Composition `self o other`, expanded with the Leibniz rule.
    pub fn compose(&self, other: &DiffOp) -> DiffOp {
        let n = self.table.len();
        let mut out = Self::zero(&self.table);
        let mut deriv_cache: HashMap<(Monomial, Monomial), RationalFunction> = HashMap::new();
        for (alpha, a) in &self.terms {
            let sub_indices = sub_multi_indices(alpha);
            for (beta, b) in &other.terms {
                for gamma in &sub_indices {
                    let db = deriv_cache
                        .entry((gamma.clone(), beta.clone()))
                        .or_insert_with(|| {
                            let mut d = b.clone();
                            for v in 0..n {
                                for _ in 0..gamma.exp(v) {
                                    d = d.derivative(v);
                                }
                            }
                            d
                        })
                        .clone();
                    if db.is_zero() {
                        continue;
                    }
                    let mut coeff = Scalar::one();
                    for v in 0..n {
                        coeff *= binomial(alpha.exp(v), gamma.exp(v));
                    }
                    let rest = gamma.quotient(alpha).mul(beta);
                    out.add_term(rest, (a * &db).scale(&coeff));
                }
            }
        }
        out
    }

    pub fn commutator(&self, other: &DiffOp) -> DiffOp {
        self.compose(other).sub(&other.compose(self))
    }

    pub fn apply_rational(&self, f: &RationalFunction) -> RationalFunction {
        let mut memo: HashMap<Monomial, RationalFunction> = HashMap::new();
        let mut total = RationalFunction::zero(&self.table);
        for (alpha, c) in &self.terms {
            let d = derive_rf(f, alpha, &mut memo);
            total = &total + &(c * &d);
        }
        total
    }

    pub fn apply(&self, f: &TwistedFunction) -> Result<TwistedFunction> {
        let mut memo: HashMap<Monomial, TwistedFunction> = HashMap::new();
        let mut total = TwistedFunction::zero(&self.table);
        for (alpha, c) in &self.terms {
            let d = derive_twisted(f, alpha, &mut memo)?;
            total = total.try_add(&d.scale(c))?;
        }
        Ok(total)
    }

    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| {
                let mut pieces = Vec::new();
                if !(c.is_one() && !m.is_one()) {
                    pieces.push(if c.is_atom() { c.to_text() } else { format!("({c})") });
                }
                for (v, &e) in m.exponents().iter().enumerate() {
                    match e {
                        0 => {}
                        1 => pieces.push(format!("D[{}]", self.table.name(v))),
                        e => pieces.push(format!("D[{},{}]", self.table.name(v), e)),
                    }
                }
                pieces.join("*")
            })
            .collect();
        parts.join(" + ")
    }
}

fn sub_multi_indices(alpha: &Monomial) -> Vec<Monomial> {
    let mut out = vec![Monomial::one(alpha.nvars())];
    for v in 0..alpha.nvars() {
        let e = alpha.exp(v);
        if e == 0 {
            continue;
        }
        let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
        for m in &out {
            for k in 0..=e {
                next.push(m.with_exp(v, k));
            }
        }
        out = next;
    }
    out
}

fn lower(alpha: &Monomial) -> (usize, Monomial) {
    let v = alpha.exponents().iter().position(|&e| e > 0).unwrap();
    (v, alpha.with_exp(v, alpha.exp(v) - 1))
}

fn derive_rf(
    f: &RationalFunction,
    alpha: &Monomial,
    memo: &mut HashMap<Monomial, RationalFunction>,
) -> RationalFunction {
    if alpha.is_one() {
        return f.clone();
    }
    if let Some(d) = memo.get(alpha) {
        return d.clone();
    }
    let (v, rest) = lower(alpha);
    let d = derive_rf(f, &rest, memo).derivative(v);
    memo.insert(alpha.clone(), d.clone());
    d
}

fn derive_twisted(
    f: &TwistedFunction,
    alpha: &Monomial,
    memo: &mut HashMap<Monomial, TwistedFunction>,
) -> Result<TwistedFunction> {
    if alpha.is_one() {
        return Ok(f.clone());
    }
    if let Some(d) = memo.get(alpha) {
        return Ok(d.clone());
    }
    let (v, rest) = lower(alpha);
    let d = derive_twisted(f, &rest, memo)?.derivative(v)?;
    memo.insert(alpha.clone(), d.clone());
    Ok(d)
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiffOp({})", self.to_text())
    }
}

impl PartialEq for DiffOp {
    fn eq(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }
}
