use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;


use num_traits::{One, Zero};
use smallvec::SmallVec;

use super::jets::{FormalArgs, Jet, SubstitutionRecord};
use crate::error::{Error, Result};
use crate::exact_algebra::{Monomial, Polynomial, RationalFunction, Scalar, Table};

/// Product of symbolic powers `base^exponent`.
///
/// Bases are monic non-constant polynomials or constants other than one;
/// exponents are polynomials in the parameters whose constant term lies in
/// `[0, 1)`. Integer parts are absorbed into the rational coefficient, which
/// makes the representation canonical.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct FactorSet(Vec<(Polynomial, Polynomial)>);

impl FactorSet {
    pub fn factors(&self) -> &[(Polynomial, Polynomial)] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Normalizes raw `(base, exponent)` pairs; returns the factor set and the
    /// rational multiplier produced by absorbing integer exponent parts.
    pub fn normalize(
        table: &Table,
        raw: impl IntoIterator<Item = (Polynomial, Polynomial)>,
    ) -> Result<(FactorSet, RationalFunction)> {
        let mut acc: BTreeMap<Polynomial, Polynomial> = BTreeMap::new();
        let mut push = |base: Polynomial, exp: &Polynomial| match acc.get_mut(&base) {
            Some(e) => *e = &*e + exp,
            None => {
                acc.insert(base, exp.clone());
            }
        };
        for (base, exp) in raw {
            if exp.is_zero() {
                continue;
            }
            if base.is_zero() {
                return Err(Error::ZeroFactorBase);
            }
            if let Some(c) = base.constant_value() {
                if !c.is_one() {
                    push(base, &exp);
                }
                continue;
            }
            let (lc, monic) = base.monic();
            if !lc.is_one() {
                push(Polynomial::constant(table, lc), &exp);
            }
            push(monic, &exp);
        }
        let mut mult = RationalFunction::one(table);
        let mut out = Vec::new();
        let one = Monomial::one(table.len());
        for (base, mut exp) in acc {
            let c0 = exp.coefficient(&one);
            let n = c0.floor();
            if !n.is_zero() {
                let n_i: i64 = n.to_integer().try_into().map_err(|_| {
                    Error::Unsupported("exponent integer part out of range".into())
                })?;
                let power = RationalFunction::from_poly(base.clone()).pow(n_i as i32)?;
                mult = &mult * &power;
                exp = &exp - &Polynomial::constant(table, n);
            }
            if !exp.is_zero() {
                out.push((base, exp));
            }
        }
        Ok((FactorSet(out), mult))
    }

    pub fn to_text(&self) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(b, e)| {
                let base = if b.is_atom() { b.to_text() } else { format!("({b})") };
                let exp = if e.is_atom() { e.to_text() } else { format!("({e})") };
                format!("{base}^{exp}")
            })
            .collect();
        parts.join("*")
    }
}

/// Product of jets of the unknown; the empty product is one.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct JetMonomial(pub(crate) SmallVec<[(Jet, u32); 2]>);

impl JetMonomial {
    pub fn one() -> Self {
        JetMonomial(SmallVec::new())
    }

    pub fn single(jet: Jet) -> Self {
        let mut v = SmallVec::new();
        v.push((jet, 1));
        JetMonomial(v)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, m)| *m).sum()
    }

    pub fn jets(&self) -> impl Iterator<Item = (&Jet, u32)> {
        self.0.iter().map(|(j, m)| (j, *m))
    }

    /// The jet when this is a single jet to the first power.
    pub fn as_linear(&self) -> Option<&Jet> {
        match self.0.as_slice() {
            [(j, 1)] => Some(j),
            _ => None,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out: BTreeMap<Jet, u32> = self.0.iter().cloned().collect();
        for (j, m) in &other.0 {
            *out.entry(j.clone()).or_insert(0) += m;
        }
        JetMonomial(out.into_iter().collect())
    }

    fn remove_one(&self, idx: usize) -> Self {
        let mut out = self.clone();
        if out.0[idx].1 == 1 {
            out.0.remove(idx);
        } else {
            out.0[idx].1 -= 1;
        }
        out
    }

    pub fn to_text(&self, args: Option<&FormalArgs>) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(j, m)| {
                let t = match args {
                    Some(a) => a.jet_text(j),
                    None => format!("Psi{:?}", j.orders()),
                };
                if *m > 1 {
                    format!("{t}^{m}")
                } else {
                    t
                }
            })
            .collect();
        parts.join("*")
    }
}

pub type TermKey = (FactorSet, JetMonomial);

/// Finite sum of `rational * prod base^exponent * jets(Psi)` terms.
///
/// Jets refer to an unknown function whose formal arguments are expressed in
/// table variables through the substitution record.
#[derive(Clone)]
pub struct TwistedFunction {
    table: Table,
    record: Option<Arc<SubstitutionRecord>>,
    terms: BTreeMap<TermKey, RationalFunction>,
}

fn merge_records(
    a: &Option<Arc<SubstitutionRecord>>,
    b: &Option<Arc<SubstitutionRecord>>,
) -> Result<Option<Arc<SubstitutionRecord>>> {
    match (a, b) {
        (None, r) | (r, None) => Ok(r.clone()),
        (Some(x), Some(y)) => {
            if Arc::ptr_eq(x, y) || x.same_as(y) {
                Ok(Some(x.clone()))
            } else {
                Err(Error::RecordMismatch)
            }
        }
    }
}

impl TwistedFunction {
    pub fn zero(table: &Table) -> Self {
        TwistedFunction { table: table.clone(), record: None, terms: BTreeMap::new() }
    }

    pub fn from_rational(r: RationalFunction) -> Self {
        let mut f = Self::zero(r.table());
        f.add_term((FactorSet::default(), JetMonomial::one()), r);
        f
    }

    /// `base^exponent`.
    pub fn power(base: &Polynomial, exponent: &Polynomial) -> Result<Self> {
        let table = base.table().clone();
        let (fs, mult) = FactorSet::normalize(&table, [(base.clone(), exponent.clone())])?;
        let mut f = Self::zero(&table);
        f.add_term((fs, JetMonomial::one()), mult);
        Ok(f)
    }

    /// The unknown itself, with arguments given by `record`.
    pub fn unknown(record: &Arc<SubstitutionRecord>) -> Self {
        let table = record.args().table().clone();
        let mut f = Self::zero(&table);
        f.record = Some(record.clone());
        let jet = Jet::zero(record.args().len());
        f.add_term((FactorSet::default(), JetMonomial::single(jet)), RationalFunction::one(&table));
        f
    }

    pub fn table(&self) -> &Table {
        &self.table
    }

    pub fn record(&self) -> Option<&Arc<SubstitutionRecord>> {
        self.record.as_ref()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TermKey, &RationalFunction)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn has_jets(&self) -> bool {
        self.terms.keys().any(|(_, j)| !j.is_one())
    }

    pub fn jets(&self) -> Vec<Jet> {
        let mut out: Vec<Jet> =
            self.terms.keys().flat_map(|(_, j)| j.jets().map(|(x, _)| x.clone())).collect();
        out.sort();
        out.dedup();
        out
    }

    pub(crate) fn add_term(&mut self, key: TermKey, r: RationalFunction) {
        if r.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &r;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(r);
            }
        }
    }

    pub fn with_record(mut self, record: Option<Arc<SubstitutionRecord>>) -> Self {
        self.record = record;
        self
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let record = merge_records(&self.record, &other.record)?;
        let mut out = self.clone();
        out.record = record;
        for (k, r) in &other.terms {
            out.add_term(k.clone(), r.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&RationalFunction::from_int(&self.table, -1))
    }

    pub fn scale(&self, c: &RationalFunction) -> Self {
        let mut out = Self::zero(&self.table);
        out.record = self.record.clone();
        for (k, r) in &self.terms {
            out.add_term(k.clone(), r * c);
        }
        out
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let record = merge_records(&self.record, &other.record)?;
        let mut out = Self::zero(&self.table);
        out.record = record;
        for ((fa, ja), ra) in &self.terms {
            for ((fb, jb), rb) in &other.terms {
                let (fs, mult) = if fb.is_empty() {
                    (fa.clone(), RationalFunction::one(&self.table))
                } else if fa.is_empty() {
                    (fb.clone(), RationalFunction::one(&self.table))
                } else {
                    FactorSet::normalize(&self.table, fa.0.iter().chain(fb.0.iter()).cloned())?
                };
                let r = &(ra * rb) * &mult;
                out.add_term((fs, ja.mul(jb)), r);
            }
        }
        Ok(out)
    }

    /// Partial derivative by a table variable.
    pub fn derivative(&self, var: usize) -> Result<Self> {
        let mut out = Self::zero(&self.table);
        out.record = self.record.clone();
        let mut log_derivs: HashMap<&FactorSet, RationalFunction> = HashMap::new();
        for (key, r) in &self.terms {
            let (fs, jm) = key;
            if !log_derivs.contains_key(fs) {
                let mut ld = RationalFunction::zero(&self.table);
                for (base, exp) in &fs.0 {
                    if exp.depends_on(var) {
                        return Err(Error::Unsupported(format!(
                            "differentiating an exponent by `{}`",
                            self.table.name(var)
                        )));
                    }
                    if base.depends_on(var) {
                        let t = RationalFunction::from_factors(
                            exp * &base.derivative(var),
                            vec![(base.clone(), 1)],
                        )?;
                        ld = &ld + &t;
                    }
                }
                log_derivs.insert(fs, ld);
            }
            let ld = &log_derivs[fs];
            if !ld.is_zero() {
                out.add_term(key.clone(), r * ld);
            }
            out.add_term(key.clone(), r.derivative(var));
            if jm.is_one() {
                continue;
            }
            let record = self.record.as_ref().expect("jets always carry a record");
            let dvals = record.derivative_values(var);
            for (idx, (jet, mult)) in jm.0.iter().enumerate() {
                let rest = jm.remove_one(idx);
                let scaled = r.scale(&Scalar::from_integer((*mult).into()));
                for (a, dv) in dvals.iter().enumerate() {
                    if dv.is_zero() {
                        continue;
                    }
                    let new_jm = rest.mul(&JetMonomial::single(jet.bump(a)));
                    out.add_term((fs.clone(), new_jm), &scaled * dv);
                }
            }
        }
        Ok(out)
    }

    /// Substitutes rational functions for table variables everywhere,
    /// including factor bases, exponents and the substitution record.
    pub fn substitute(&self, bindings: &[(usize, RationalFunction)]) -> Result<Self> {
        let mut out = Self::zero(&self.table);
        out.record = match &self.record {
            Some(r) => Some(r.substitute(bindings)?),
            None => None,
        };
        let mut fs_cache: HashMap<&FactorSet, (FactorSet, RationalFunction)> = HashMap::new();
        for ((fs, jm), r) in &self.terms {
            if !fs_cache.contains_key(fs) {
                let mut raw = Vec::new();
                for (base, exp) in &fs.0 {
                    let e = exp.substitute(bindings);
                    let e = e
                        .as_polynomial()
                        .ok_or_else(|| {
                            Error::Unsupported("exponent became a non-polynomial function".into())
                        })?
                        .clone();
                    let b = base.substitute(bindings);
                    if b.is_zero() {
                        return Err(Error::ZeroFactorBase);
                    }
                    raw.push((b.numerator().clone(), e.clone()));
                    for (q, m) in b.denominator_factors() {
                        let scale = Scalar::from_integer((-(*m as i64)).into());
                        raw.push((q.clone(), e.scale(&scale)));
                    }
                }
                fs_cache.insert(fs, FactorSet::normalize(&self.table, raw)?);
            }
            let (nfs, mult) = &fs_cache[fs];
            let nr = &r.substitute(bindings)? * mult;
            out.add_term((nfs.clone(), jm.clone()), nr);
        }
        Ok(out)
    }

    /// Replaces every jet `Psi_b` by `d^b G` composed with the record, where
    /// `g` is a concrete function written in the formal argument variables.
    pub fn instantiate_jets(&self, g: &TwistedFunction) -> Result<Self> {
        if g.has_jets() {
            return Err(Error::Precondition("instantiating with a function that has jets".into()));
        }
        let Some(record) = &self.record else {
            return Ok(self.clone());
        };
        let args = record.args().clone();
        let bindings: Vec<(usize, RationalFunction)> = (0..args.len())
            .filter(|&a| {
                record.values()[a].as_polynomial().and_then(|p| p.as_variable()) != Some(args.var(a))
            })
            .map(|a| (args.var(a), record.values()[a].clone()))
            .collect();
        let mut derived: HashMap<Jet, TwistedFunction> = HashMap::new();
        let mut composed: HashMap<Jet, TwistedFunction> = HashMap::new();
        let mut out = Self::zero(&self.table);
        for ((fs, jm), r) in &self.terms {
            let mut term = TwistedFunction::zero(&self.table);
            term.add_term((fs.clone(), JetMonomial::one()), r.clone());
            for (jet, m) in jm.jets() {
                if !composed.contains_key(jet) {
                    let d = jet_derivative(g, &args, jet, &mut derived)?;
                    composed.insert(jet.clone(), d.substitute(&bindings)?);
                }
                for _ in 0..m {
                    term = term.try_mul(&composed[jet])?;
                }
            }
            out = out.try_add(&term)?;
        }
        out.record = None;
        Ok(out)
    }

    /// Splits the function by factor set.
    pub fn factor_groups(&self) -> BTreeMap<FactorSet, Vec<(JetMonomial, RationalFunction)>> {
        let mut out: BTreeMap<FactorSet, Vec<_>> = BTreeMap::new();
        for ((fs, jm), r) in &self.terms {
            out.entry(fs.clone()).or_default().push((jm.clone(), r.clone()));
        }
        out
    }

    /// The rational function `c` with `self = c * other`, if there is one.
    pub fn ratio_to(&self, other: &Self) -> Option<RationalFunction> {
        let (k0, r0) = other.terms.iter().next()?;
        let s0 = self.terms.get(k0)?;
        let c = s0.try_div(r0).ok()?;
        let scaled = other.scale(&c);
        if self.try_sub(&scaled).ok()?.is_zero() {
            Some(c)
        } else {
            None
        }
    }

    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let args = self.record.as_ref().map(|r| r.args().as_ref());
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((fs, jm), r)| {
                let mut pieces = Vec::new();
                if !(r.is_one() && (!fs.is_empty() || !jm.is_one())) {
                    pieces.push(if r.is_atom() { r.to_text() } else { format!("({r})") });
                }
                if !fs.is_empty() {
                    pieces.push(fs.to_text());
                }
                if !jm.is_one() {
                    pieces.push(jm.to_text(args));
                }
                pieces.join("*")
            })
            .collect();
        parts.join(" + ")
    }
}

fn jet_derivative(
    g: &TwistedFunction,
    args: &FormalArgs,
    jet: &Jet,
    memo: &mut HashMap<Jet, TwistedFunction>,
) -> Result<TwistedFunction> {
    if jet.order() == 0 {
        return Ok(g.clone());
    }
    if let Some(d) = memo.get(jet) {
        return Ok(d.clone());
    }
    let a = jet.orders().iter().position(|&e| e > 0).unwrap();
    let mut lower = jet.clone();
    lower.0[a] -= 1;
    let d = jet_derivative(g, args, &lower, memo)?.derivative(args.var(a))?;
    memo.insert(jet.clone(), d.clone());
    Ok(d)
}

impl fmt::Display for TwistedFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for TwistedFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TwistedFunction({})", self.to_text())
    }
}

/// Equality as functions: the difference passes the zero test. Functions
/// with different substitution records are unequal.
impl PartialEq for TwistedFunction {
    fn eq(&self, other: &Self) -> bool {
        self.try_sub(other).map(|d| d.is_zero()).unwrap_or(false)
    }
}
