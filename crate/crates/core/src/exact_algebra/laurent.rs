use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;


use super::rational::RationalFunction;
use super::table::{same_table, Table};
use crate::error::{Error, Result};

/// Laurent polynomial in the loop variable `t` with rational-function
/// coefficients in the parameters of a table.
#[derive(Clone)]
pub struct LaurentPolynomial {
    table: Table,
    terms: BTreeMap<i64, RationalFunction>,
}

impl LaurentPolynomial {
    pub fn zero(table: &Table) -> Self {
        LaurentPolynomial { table: table.clone(), terms: BTreeMap::new() }
    }

    pub fn one(table: &Table) -> Self {
        Self::monomial(RationalFunction::one(table), 0)
    }

    pub fn monomial(c: RationalFunction, exp: i64) -> Self {
        let mut p = Self::zero(c.table());
        if !c.is_zero() {
            p.terms.insert(exp, c);
        }
        p
    }

    pub fn table(&self) -> &Table {
        &self.table
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &RationalFunction)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coefficient(&self, exp: i64) -> RationalFunction {
        self.terms.get(&exp).cloned().unwrap_or_else(|| RationalFunction::zero(&self.table))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// `Some((c, m))` when the polynomial is the single term `c t^m`.
    pub fn as_monomial(&self) -> Option<(&RationalFunction, i64)> {
        if self.terms.len() == 1 {
            let (e, c) = self.terms.iter().next().unwrap();
            Some((c, *e))
        } else {
            None
        }
    }

    fn add_term(&mut self, e: i64, c: RationalFunction) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e);
        match entry {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        LaurentPolynomial {
            table: self.table.clone(),
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(&self.table);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &RationalFunction) -> Self {
        let mut out = Self::zero(&self.table);
        for (e, cc) in &self.terms {
            out.add_term(*e, cc * c);
        }
        out
    }

    pub fn shift(&self, m: i64) -> Self {
        LaurentPolynomial {
            table: self.table.clone(),
            terms: self.terms.iter().map(|(e, c)| (e + m, c.clone())).collect(),
        }
    }

    /// d/dt.
    pub fn derivative(&self) -> Self {
        let mut out = Self::zero(&self.table);
        for (e, c) in &self.terms {
            out.add_term(e - 1, c.scale(&super::int(*e)));
        }
        out
    }

    pub fn eq_value(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }

    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| {
                let coef = if c.is_atom() { c.to_text() } else { format!("({c})") };
                match (*e, c.is_one()) {
                    (0, _) => coef,
                    (1, true) => "t".into(),
                    (1, false) => format!("{coef}*t"),
                    (e, true) => format!("t^{e}"),
                    (e, false) => format!("{coef}*t^{e}"),
                }
            })
            .collect();
        parts.join(" + ")
    }
}

impl fmt::Debug for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Which loop group a matrix is read in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Flavor {
    /// Determinant one; equality is entrywise.
    Sl2,
    /// Determinant any unit `c t^m`; equality is up to such a scalar.
    Pgl2,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Sl2 => "SL2",
            Flavor::Pgl2 => "PGL2",
        })
    }
}

/// Which point of the loop variable a regularity test refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegularAt {
    Zero,
    Infinity,
}

/// 2x2 matrix over Laurent polynomials whose determinant is a unit.
#[derive(Clone)]
pub struct ProjectiveLaurentMatrix {
    entries: [LaurentPolynomial; 4],
    flavor: Flavor,
}

impl ProjectiveLaurentMatrix {
    /// Entries in row-major order `[a, b, c, d]`.
    pub fn new(entries: [LaurentPolynomial; 4], flavor: Flavor) -> Result<Self> {
        let table = entries[0].table().clone();
        if entries.iter().any(|e| !same_table(e.table(), &table)) {
            return Err(Error::TableMismatch("matrix entries over different tables".into()));
        }
        let m = ProjectiveLaurentMatrix { entries, flavor };
        let det = m.det();
        match det.as_monomial() {
            Some((c, e)) => {
                if flavor == Flavor::Sl2 && !(e == 0 && c.is_one()) {
                    return Err(Error::NotAUnit(format!("SL2 matrix has determinant {}", det.to_text())));
                }
            }
            None => return Err(Error::NotAUnit(det.to_text())),
        }
        Ok(m)
    }

    pub fn identity(table: &Table, flavor: Flavor) -> Self {
        let one = LaurentPolynomial::one(table);
        let zero = LaurentPolynomial::zero(table);
        ProjectiveLaurentMatrix { entries: [one.clone(), zero.clone(), zero, one], flavor }
    }

    pub fn table(&self) -> &Table {
        self.entries[0].table()
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn entries(&self) -> &[LaurentPolynomial; 4] {
        &self.entries
    }

    pub fn entry(&self, row: usize, col: usize) -> &LaurentPolynomial {
        &self.entries[2 * row + col]
    }

    /// Reinterprets the same entries in another flavor.
    pub fn with_flavor(&self, flavor: Flavor) -> Result<Self> {
        Self::new(self.entries.clone(), flavor)
    }

    pub fn det(&self) -> LaurentPolynomial {
        let [a, b, c, d] = &self.entries;
        a.mul(d).sub(&b.mul(c))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.flavor != other.flavor {
            return Err(Error::FlavorMismatch(format!("{} times {}", self.flavor, other.flavor)));
        }
        if !same_table(self.table(), other.table()) {
            return Err(Error::TableMismatch("matrix tables differ".into()));
        }
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let [a, b, c, d] = &self.entries;
        let [e, f, g, h] = &other.entries;
        ProjectiveLaurentMatrix {
            entries: [
                a.mul(e).add(&b.mul(g)),
                a.mul(f).add(&b.mul(h)),
                c.mul(e).add(&d.mul(g)),
                c.mul(f).add(&d.mul(h)),
            ],
            flavor: self.flavor,
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        let det = self.det();
        let (c, e) = det.as_monomial().ok_or_else(|| Error::NotAUnit(det.to_text()))?;
        let inv = LaurentPolynomial::monomial(c.inv()?, -e);
        let [a, b, cc, d] = &self.entries;
        Ok(ProjectiveLaurentMatrix {
            entries: [d.mul(&inv), b.neg().mul(&inv), cc.neg().mul(&inv), a.mul(&inv)],
            flavor: self.flavor,
        })
    }

    /// Entrywise d/dt; the result is a plain matrix, not a group element.
    pub fn derivative_entries(&self) -> [LaurentPolynomial; 4] {
        self.entries.clone().map(|e| e.derivative())
    }

    /// Group equality: entrywise for SL2, up to a unit `c t^m` for PGL2.
    pub fn equals(&self, other: &Self) -> bool {
        if self.flavor != other.flavor {
            return false;
        }
        match self.flavor {
            Flavor::Sl2 => self.entries.iter().zip(other.entries.iter()).all(|(a, b)| a.eq_value(b)),
            Flavor::Pgl2 => {
                let Some(k) = (0..4).find(|&i| !self.entries[i].is_zero()) else {
                    return false;
                };
                let (x, y) = (&self.entries[k], &other.entries[k]);
                if y.is_zero() {
                    return false;
                }
                let (ex, ey) = (x.min_exp().unwrap(), y.min_exp().unwrap());
                let Ok(ratio) = x.coefficient(ex).try_div(&y.coefficient(ey)) else {
                    return false;
                };
                let unit = LaurentPolynomial::monomial(ratio, ex - ey);
                self.entries
                    .iter()
                    .zip(other.entries.iter())
                    .all(|(a, b)| a.eq_value(&b.mul(&unit)))
            }
        }
    }

    /// Whether the matrix extends over `t = 0` (entries in `C[t]`) or
    /// `t = infinity` (entries in `C[t^-1]`) with unit determinant there.
    ///
    /// For PGL2 the determinant `c t^d` must have even `d`, and the test is
    /// applied to the representative rescaled by `t^(-d/2)`.
    pub fn regularity(&self, at: RegularAt) -> bool {
        let det = self.det();
        let Some((_, d)) = det.as_monomial() else {
            return false;
        };
        let shift = match self.flavor {
            Flavor::Sl2 => {
                if d != 0 {
                    return false;
                }
                0
            }
            Flavor::Pgl2 => {
                if d.is_odd() {
                    return false;
                }
                -d / 2
            }
        };
        self.entries.iter().all(|e| {
            e.terms().all(|(exp, _)| match at {
                RegularAt::Zero => exp + shift >= 0,
                RegularAt::Infinity => exp + shift <= 0,
            })
        })
    }

    pub fn to_text(&self) -> String {
        let [a, b, c, d] = &self.entries;
        format!(
            "[[{}, {}], [{}, {}]]",
            a.to_text(),
            b.to_text(),
            c.to_text(),
            d.to_text()
        )
    }
}

impl fmt::Debug for ProjectiveLaurentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.flavor, self.to_text())
    }
}

impl fmt::Display for ProjectiveLaurentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

