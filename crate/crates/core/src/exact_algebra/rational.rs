use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::polynomial::Polynomial;
use super::table::{same_table, Table};
use super::Scalar;
use crate::error::{Error, Result};

/// Quotient of polynomials with the denominator kept as a product of monic
/// factors with multiplicities.
///
/// No multivariate gcd is ever computed. Factors that visibly divide the
/// numerator are cancelled by trial division, which keeps expressions small,
/// but the representation is not canonical: equality is decided by
/// cross-multiplication.
#[derive(Clone)]
pub struct RationalFunction {
    num: Polynomial,
    den: Vec<(Polynomial, u32)>,
}

type Factors = Vec<(Polynomial, u32)>;

fn insert_factor(list: &mut Factors, f: Polynomial, m: u32) {
    if m == 0 {
        return;
    }
    match list.binary_search_by(|(g, _)| g.cmp(&f)) {
        Ok(i) => list[i].1 += m,
        Err(i) => list.insert(i, (f, m)),
    }
}

fn merge_factors(a: &Factors, b: &Factors, combine: impl Fn(u32, u32) -> u32) -> Factors {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ord = match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) => x.0.cmp(&y.0),
            (Some(_), None) => std::cmp::Ordering::Less,
            _ => std::cmp::Ordering::Greater,
        };
        match ord {
            std::cmp::Ordering::Less => {
                out.push((a[i].0.clone(), combine(a[i].1, 0)));
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push((b[j].0.clone(), combine(0, b[j].1)));
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push((a[i].0.clone(), combine(a[i].1, b[j].1)));
                i += 1;
                j += 1;
            }
        }
    }
    out.retain(|(_, m)| *m > 0);
    out
}

fn expand(table: &Table, factors: &[(Polynomial, u32)]) -> Polynomial {
    let mut p = Polynomial::one(table);
    for (f, m) in factors {
        p = &p * &f.pow(*m);
    }
    p
}

/// Divides out as many copies of each factor as possible.
fn cancel(mut num: Polynomial, den: Factors) -> RationalFunction {
    if num.is_zero() {
        return RationalFunction { num, den: Vec::new() };
    }
    let mut kept = Vec::with_capacity(den.len());
    for (f, mut m) in den {
        while m > 0 {
            match num.try_div_exact(&f) {
                Some(q) => {
                    num = q;
                    m -= 1;
                }
                None => break,
            }
        }
        if m > 0 {
            kept.push((f, m));
        }
    }
    RationalFunction { num, den: kept }
}

impl RationalFunction {
    pub fn zero(table: &Table) -> Self {
        Self::from_poly(Polynomial::zero(table))
    }

    pub fn one(table: &Table) -> Self {
        Self::from_poly(Polynomial::one(table))
    }

    pub fn from_poly(num: Polynomial) -> Self {
        RationalFunction { num, den: Vec::new() }
    }

    pub fn from_scalar(table: &Table, c: Scalar) -> Self {
        Self::from_poly(Polynomial::constant(table, c))
    }

    pub fn from_int(table: &Table, c: i64) -> Self {
        Self::from_poly(Polynomial::from_int(table, c))
    }

    pub fn var(table: &Table, name: &str) -> Result<Self> {
        Ok(Self::from_poly(Polynomial::var(table, name)?))
    }

    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        Self::from_factors(num, vec![(den, 1)])
    }

    /// Builds `num / prod(f^m)` from arbitrary (non-monic, possibly constant)
    /// factors.
    pub fn from_factors(num: Polynomial, factors: Vec<(Polynomial, u32)>) -> Result<Self> {
        let mut num = num;
        let mut den = Vec::new();
        for (f, m) in factors {
            if f.is_zero() {
                return Err(Error::DivisionByZero);
            }
            if !same_table(num.table(), f.table()) {
                return Err(Error::TableMismatch("numerator and denominator tables differ".into()));
            }
            if m == 0 {
                continue;
            }
            let (lc, monic) = f.monic();
            let c = num_traits::pow(lc, m as usize);
            num = num.scale(&c.recip());
            if !monic.is_one() {
                insert_factor(&mut den, monic, m);
            }
        }
        Ok(cancel(num, den))
    }

    pub fn table(&self) -> &Table {
        self.num.table()
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    /// The denominator multiplied out.
    pub fn denominator(&self) -> Polynomial {
        expand(self.num.table(), &self.den)
    }

    pub fn denominator_factors(&self) -> &[(Polynomial, u32)] {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    pub fn as_polynomial(&self) -> Option<&Polynomial> {
        if self.den.is_empty() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn constant_value(&self) -> Option<Scalar> {
        if self.den.is_empty() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn is_one(&self) -> bool {
        self.den.is_empty() && self.num.is_one()
    }

    pub fn depends_on(&self, var: usize) -> bool {
        self.num.depends_on(var) || self.den.iter().any(|(f, _)| f.depends_on(var))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.table());
        }
        RationalFunction { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn mul_poly(&self, p: &Polynomial) -> Self {
        self * &RationalFunction::from_poly(p.clone())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_table(other)?;
        Ok(self.add_impl(other))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_table(other)?;
        Ok(self.mul_impl(other))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.check_table(other)?;
        Ok(self.mul_impl(&other.inv()?))
    }

    fn check_table(&self, other: &Self) -> Result<()> {
        if same_table(self.table(), other.table()) {
            Ok(())
        } else {
            Err(Error::TableMismatch(format!(
                "{:?} vs {:?}",
                self.table().names(),
                other.table().names()
            )))
        }
    }

    fn add_impl(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return cancel(&self.num + &other.num, self.den.clone());
        }
        let lcm = merge_factors(&self.den, &other.den, |a, b| a.max(b));
        let cof = |den: &Factors| {
            let missing = merge_factors(&lcm, den, |l, d| l - d);
            expand(self.table(), &missing)
        };
        let num = &(&self.num * &cof(&self.den)) + &(&other.num * &cof(&other.den));
        cancel(num, lcm)
    }

    fn mul_impl(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.table());
        }
        if self.den.is_empty() && other.den.is_empty() {
            return Self::from_poly(&self.num * &other.num);
        }
        // Cross-cancel before multiplying so intermediate numerators stay small.
        let a = cancel(self.num.clone(), other.den.clone());
        let b = cancel(other.num.clone(), self.den.clone());
        let num = &a.num * &b.num;
        let den = merge_factors(&a.den, &b.den, |x, y| x + y);
        RationalFunction { num, den }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let num = self.denominator();
        Self::from_factors(num, vec![(self.num.clone(), 1)])
    }

    pub fn pow(&self, e: i32) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut result = Self::one(self.table());
        for _ in 0..e.unsigned_abs() {
            result = &result * &base;
        }
        Ok(result)
    }

    pub fn derivative(&self, var: usize) -> Self {
        let dnum = self.num.derivative(var);
        let moving: Vec<usize> =
            (0..self.den.len()).filter(|&i| self.den[i].0.depends_on(var)).collect();
        if moving.is_empty() {
            return cancel(dnum, self.den.clone());
        }
        // (n/D)' = (n' * P - n * sum_i m_i f_i' P/f_i) / (D * P), P = prod of moving f_i
        let table = self.table().clone();
        let mut p = Polynomial::one(&table);
        for &i in &moving {
            p = &p * &self.den[i].0;
        }
        let mut s = Polynomial::zero(&table);
        for &i in &moving {
            let (f, m) = &self.den[i];
            let mut others = Polynomial::one(&table);
            for &j in &moving {
                if j != i {
                    others = &others * &self.den[j].0;
                }
            }
            let term = (&f.derivative(var) * &others).scale(&Scalar::from_integer((*m).into()));
            s = &s + &term;
        }
        let num = &(&dnum * &p) - &(&self.num * &s);
        let mut den = self.den.clone();
        for &i in &moving {
            den[i].1 += 1;
        }
        cancel(num, den)
    }

    pub fn substitute(&self, bindings: &[(usize, RationalFunction)]) -> Result<Self> {
        let num = self.num.substitute(bindings);
        if self.den.is_empty() {
            return Ok(num);
        }
        let mut den = RationalFunction::one(self.table());
        for (f, m) in &self.den {
            let fs = f.substitute(bindings);
            if fs.is_zero() {
                return Err(Error::DivisionByZero);
            }
            den = &den * &fs.pow(*m as i32)?;
        }
        num.try_div(&den)
    }

    /// Evaluates at a point given for every variable of the table.
    pub fn eval(&self, point: &[Scalar]) -> Result<Scalar> {
        let mut d = Scalar::one();
        for (f, m) in &self.den {
            d *= num_traits::pow(f.eval(point), *m as usize);
        }
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.num.eval(point) / d)
    }

    pub fn embed(&self, target: &Table) -> Result<Self> {
        let num = self.num.embed(target)?;
        let den = self
            .den
            .iter()
            .map(|(f, m)| Ok((f.embed(target)?, *m)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_factors(num, den)
    }

    pub fn to_text(&self) -> String {
        if self.den.is_empty() {
            return self.num.to_text();
        }
        let num = if self.num.is_atom() { self.num.to_text() } else { format!("({})", self.num) };
        let den: Vec<String> = self
            .den
            .iter()
            .map(|(f, m)| {
                let base = if f.is_atom() { f.to_text() } else { format!("({f})") };
                if *m > 1 {
                    format!("{base}^{m}")
                } else {
                    base
                }
            })
            .collect();
        if den.len() == 1 {
            format!("{num}/{}", den[0])
        } else {
            format!("{num}/({})", den.join("*"))
        }
    }

    /// True when the text can be multiplied onto something without parentheses.
    pub(crate) fn is_atom(&self) -> bool {
        self.den.is_empty() && self.num.is_atom()
    }
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        let lcm = merge_factors(&self.den, &other.den, |a, b| a.max(b));
        let cof = |den: &Factors| expand(self.table(), &merge_factors(&lcm, den, |l, d| l - d));
        &self.num * &cof(&self.den) == &other.num * &cof(&other.den)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({})", self.to_text())
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        assert!(same_table(self.table(), rhs.table()), "rational function tables differ");
        self.add_impl(rhs)
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        assert!(same_table(self.table(), rhs.table()), "rational function tables differ");
        self.mul_impl(rhs)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }
}
