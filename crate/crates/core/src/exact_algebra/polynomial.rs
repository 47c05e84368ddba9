use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::monomial::Monomial;
use super::rational::RationalFunction;
use super::table::{same_table, Table};
use super::{scalar_text, Scalar};
use crate::error::{Error, Result};

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Terms are kept sorted ascending in graded-lex order with no zero
/// coefficients, so structural equality is value equality.
#[derive(Clone)]
pub struct Polynomial {
    table: Table,
    terms: Vec<(Monomial, Scalar)>,
}

impl Polynomial {
    pub fn zero(table: &Table) -> Self {
        Polynomial { table: table.clone(), terms: Vec::new() }
    }

    pub fn one(table: &Table) -> Self {
        Self::constant(table, Scalar::one())
    }

    pub fn constant(table: &Table, c: Scalar) -> Self {
        let mut p = Self::zero(table);
        if !c.is_zero() {
            p.terms.push((Monomial::one(table.len()), c));
        }
        p
    }

    pub fn from_int(table: &Table, c: i64) -> Self {
        Self::constant(table, Scalar::from_integer(c.into()))
    }

    pub fn var(table: &Table, name: &str) -> Result<Self> {
        let i = table.index_of(name)?;
        Ok(Self::var_index(table, i))
    }

    pub fn var_index(table: &Table, i: usize) -> Self {
        Polynomial {
            table: table.clone(),
            terms: vec![(Monomial::var(table.len(), i), Scalar::one())],
        }
    }

    pub fn monomial(table: &Table, m: Monomial, c: Scalar) -> Self {
        let mut p = Self::zero(table);
        if !c.is_zero() {
            p.terms.push((m, c));
        }
        p
    }

    /// Builds a polynomial from unsorted, possibly repeated terms.
    pub fn from_terms(table: &Table, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut acc: HashMap<Monomial, Scalar> = HashMap::new();
        for (m, c) in terms {
            debug_assert_eq!(m.nvars(), table.len());
            *acc.entry(m).or_insert_with(Scalar::zero) += c;
        }
        Self::from_map(table, acc)
    }

    fn from_map(table: &Table, acc: HashMap<Monomial, Scalar>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        Polynomial { table: table.clone(), terms }
    }

    pub fn table(&self) -> &Table {
        &self.table
    }

    pub fn terms(&self) -> &[(Monomial, Scalar)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    /// The value of a constant polynomial.
    pub fn constant_value(&self) -> Option<Scalar> {
        match self.terms.as_slice() {
            [] => Some(Scalar::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    /// Index of the variable if the polynomial is exactly one variable.
    pub fn as_variable(&self) -> Option<usize> {
        match self.terms.as_slice() {
            [(m, c)] if c.is_one() && m.degree() == 1 => m.exponents().iter().position(|&e| e == 1),
            _ => None,
        }
    }

    pub fn leading_term(&self) -> Option<&(Monomial, Scalar)> {
        self.terms.last()
    }

    pub fn trailing_term(&self) -> Option<&(Monomial, Scalar)> {
        self.terms.first()
    }

    pub fn leading_coefficient(&self) -> Scalar {
        self.terms.last().map(|t| t.1.clone()).unwrap_or_else(Scalar::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.last().map(|t| t.0.degree()).unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u16 {
        self.terms.iter().map(|t| t.0.exp(var)).max().unwrap_or(0)
    }

    pub fn depends_on(&self, var: usize) -> bool {
        self.terms.iter().any(|t| t.0.exp(var) > 0)
    }

    pub fn variables(&self) -> Vec<usize> {
        (0..self.table.len()).filter(|&v| self.depends_on(v)).collect()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms
            .binary_search_by(|t| t.0.cmp(m))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| Scalar::zero())
    }

    fn assert_table(&self, other: &Polynomial) {
        assert!(
            same_table(&self.table, &other.table),
            "polynomial arithmetic across different variable tables"
        );
    }

    fn check_table(&self, other: &Polynomial) -> Result<()> {
        if same_table(&self.table, &other.table) {
            Ok(())
        } else {
            Err(Error::TableMismatch(format!(
                "{:?} vs {:?}",
                self.table.names(),
                other.table.names()
            )))
        }
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_table(other)?;
        Ok(self.add_impl(other, false))
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_table(other)?;
        Ok(self.add_impl(other, true))
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_table(other)?;
        Ok(self.mul_impl(other))
    }

    fn add_impl(&self, other: &Polynomial, negate: bool) -> Polynomial {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        for t in &b[j..] {
            let c = if negate { -&t.1 } else { t.1.clone() };
            out.push((t.0.clone(), c));
        }
        Polynomial { table: self.table.clone(), terms: out }
    }

    fn mul_impl(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero(&self.table);
        }
        if other.terms.len() == 1 {
            let (m, c) = &other.terms[0];
            return self.mul_term(m, c);
        }
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return other.mul_term(m, c);
        }
        let mut acc: HashMap<Monomial, Scalar> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let c = ca * cb;
                match acc.entry(ma.mul(mb)) {
                    std::collections::hash_map::Entry::Occupied(mut e) => *e.get_mut() += c,
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(c);
                    }
                }
            }
        }
        Self::from_map(&self.table, acc)
    }

    /// Multiplication by a single term keeps the order, so no re-sorting.
    pub fn mul_term(&self, m: &Monomial, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.table);
        }
        Polynomial {
            table: self.table.clone(),
            terms: self.terms.iter().map(|(mm, cc)| (mm.mul(m), cc * c)).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.table);
        }
        Polynomial {
            table: self.table.clone(),
            terms: self.terms.iter().map(|(m, cc)| (m.clone(), cc * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut result = Polynomial::one(&self.table);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn derivative(&self, var: usize) -> Polynomial {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let e = m.exp(var);
            if e > 0 {
                terms.push((m.with_exp(var, e - 1), c * Scalar::from_integer(e.into())));
            }
        }
        // Lowering one exponent can reorder terms of different degrees.
        terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        Polynomial { table: self.table.clone(), terms }
    }

    /// Makes the leading coefficient one; returns the removed factor.
    pub fn monic(&self) -> (Scalar, Polynomial) {
        match self.terms.last() {
            None => (Scalar::one(), self.clone()),
            Some((_, lc)) if lc.is_one() => (Scalar::one(), self.clone()),
            Some((_, lc)) => {
                let lc = lc.clone();
                (lc.clone(), self.scale(&lc.recip()))
            }
        }
    }

    /// Exact division; `None` when `divisor` does not divide `self`.
    pub fn try_div_exact(&self, divisor: &Polynomial) -> Option<Polynomial> {
        self.assert_table(divisor);
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(self.clone());
        }
        if let Some(c) = divisor.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        let (dlm, dlc) = divisor.leading_term().unwrap();
        let (slm, _) = self.leading_term().unwrap();
        let (dtm, _) = divisor.trailing_term().unwrap();
        let (stm, _) = self.trailing_term().unwrap();
        if !dlm.divides(slm) || !dtm.divides(stm) {
            return None;
        }
        for v in 0..self.table.len() {
            if divisor.degree_in(v) > self.degree_in(v) {
                return None;
            }
        }
        if divisor.terms.len() > self.terms.len() && self.terms.len() == 1 {
            return None;
        }
        let mut rem: BTreeMap<Monomial, Scalar> = self.terms.iter().cloned().collect();
        let mut quotient = Vec::new();
        while let Some((lm, lc)) = rem.iter().next_back() {
            if !dlm.divides(lm) {
                return None;
            }
            let qm = dlm.quotient(lm);
            let qc = lc / dlc;
            for (m, c) in &divisor.terms {
                let key = m.mul(&qm);
                let delta = c * &qc;
                match rem.entry(key) {
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        *e.get_mut() -= delta;
                        if e.get().is_zero() {
                            e.remove();
                        }
                    }
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(-delta);
                    }
                }
            }
            quotient.push((qm, qc));
        }
        quotient.reverse();
        Some(Polynomial { table: self.table.clone(), terms: quotient })
    }

    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        assert_eq!(point.len(), self.table.len());
        let mut total = Scalar::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t *= num_traits::pow(point[i].clone(), e as usize);
                }
            }
            total += t;
        }
        total
    }

    /// Substitutes rational functions for some variables.
    pub fn substitute(&self, bindings: &[(usize, RationalFunction)]) -> RationalFunction {
        if bindings.is_empty() || self.is_zero() {
            return RationalFunction::from_poly(self.clone());
        }
        let n = self.table.len();
        let bound: Vec<Option<usize>> = {
            let mut v = vec![None; n];
            for (k, (i, _)) in bindings.iter().enumerate() {
                v[*i] = Some(k);
            }
            v
        };
        // Group terms by the exponents of the bound variables.
        let mut groups: BTreeMap<Vec<u16>, Vec<(Monomial, Scalar)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut key = vec![0u16; bindings.len()];
            let mut rest = m.clone();
            for (i, slot) in bound.iter().enumerate() {
                if let Some(k) = slot {
                    key[*k] = m.exp(i);
                    rest.0[i] = 0;
                }
            }
            groups.entry(key).or_default().push((rest, c.clone()));
        }
        let mut powers: Vec<Vec<RationalFunction>> = bindings
            .iter()
            .map(|(_, r)| vec![RationalFunction::one(r.table())])
            .collect();
        let mut total = RationalFunction::zero(&self.table);
        for (key, rest) in groups {
            let mut factor = RationalFunction::from_poly(Polynomial::from_terms(&self.table, rest));
            for (k, &e) in key.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[k].len() <= e as usize {
                    let next = powers[k].last().unwrap() * &bindings[k].1;
                    powers[k].push(next);
                }
                factor = &factor * &powers[k][e as usize];
            }
            total = &total + &factor;
        }
        total
    }

    /// Substitutes polynomials for some variables, staying polynomial.
    pub fn substitute_poly(&self, bindings: &[(usize, Polynomial)]) -> Polynomial {
        let mut total = Polynomial::zero(&self.table);
        let mut cache: HashMap<(usize, u16), Polynomial> = HashMap::new();
        for (m, c) in &self.terms {
            let mut rest = m.clone();
            let mut term = Polynomial::one(&self.table);
            for (i, p) in bindings {
                let e = m.exp(*i);
                if e > 0 {
                    rest.0[*i] = 0;
                    let pw = cache.entry((*i, e)).or_insert_with(|| p.pow(e as u32)).clone();
                    term = &term * &pw;
                }
            }
            total = &total + &term.mul_term(&rest, c);
        }
        total
    }

    /// Rewrites the polynomial over a larger table containing all its variables.
    pub fn embed(&self, target: &Table) -> Result<Polynomial> {
        if same_table(&self.table, target) {
            return Ok(self.clone());
        }
        let map = self.table.embedding_into(target)?;
        Ok(Polynomial::from_terms(
            target,
            self.terms.iter().map(|(m, c)| (m.reindex(&map, target.len()), c.clone())),
        ))
    }

    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if m.is_one() {
                s.push_str(&scalar_text(&a));
            } else if a.is_one() {
                s.push_str(&m.to_text(&self.table));
            } else {
                s.push_str(&scalar_text(&a));
                s.push('*');
                s.push_str(&m.to_text(&self.table));
            }
        }
        s
    }

    /// True when the text can be used as a factor or base without parentheses.
    pub(crate) fn is_atom(&self) -> bool {
        if self.as_variable().is_some() {
            return true;
        }
        match self.constant_value() {
            Some(c) => c.is_integer() && !c.is_negative(),
            None => false,
        }
    }
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && (self.terms.is_empty() || same_table(&self.table, &other.table))
    }
}

impl Eq for Polynomial {}

/// Orders by terms only; meaningful for polynomials over the same table.
impl Ord for Polynomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let a = self.terms.iter().rev();
        let b = other.terms.iter().rev();
        for (x, y) in a.zip(b) {
            match x.0.cmp(&y.0).then_with(|| x.1.cmp(&y.1)) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Polynomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::hash::Hash for Polynomial {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({})", self.to_text())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.assert_table(rhs);
        self.add_impl(rhs, false)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.assert_table(rhs);
        self.add_impl(rhs, true)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.assert_table(rhs);
        self.mul_impl(rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            table: self.table.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}
