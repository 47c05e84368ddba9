use std::cmp::Ordering;
use std::fmt;
use std::sync::{Arc, OnceLock};

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::exact_algebra::{RationalFunction, Table};

/// Role of a formal argument of the unknown function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ArgKind {
    Position,
    Time,
}

/// The formal arguments of an unknown function `Psi`, each bound to a
/// variable of the table, together with the jet order caps.
#[derive(Debug)]
pub struct FormalArgs {
    table: Table,
    unknown: String,
    vars: Vec<usize>,
    kinds: Vec<ArgKind>,
    position_cap: u32,
    time_cap: u32,
}

impl FormalArgs {
    pub fn new(
        table: &Table,
        unknown: &str,
        args: &[(&str, ArgKind)],
        position_cap: u32,
        time_cap: u32,
    ) -> Result<Arc<Self>> {
        let mut vars = Vec::new();
        let mut kinds = Vec::new();
        for (name, kind) in args {
            vars.push(table.index_of(name)?);
            kinds.push(*kind);
        }
        Ok(Arc::new(FormalArgs {
            table: table.clone(),
            unknown: unknown.to_string(),
            vars,
            kinds,
            position_cap,
            time_cap,
        }))
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn table(&self) -> &Table {
        &self.table
    }

    pub fn var(&self, a: usize) -> usize {
        self.vars[a]
    }

    pub fn kind(&self, a: usize) -> ArgKind {
        self.kinds[a]
    }

    pub fn name(&self, a: usize) -> &str {
        self.table.name(self.vars[a])
    }

    /// Formal argument bound to a table variable, if any.
    pub fn arg_of_var(&self, var: usize) -> Option<usize> {
        self.vars.iter().position(|&v| v == var)
    }

    pub fn within_cap(&self, jet: &Jet) -> bool {
        let (mut p, mut t) = (0u32, 0u32);
        for (a, &e) in jet.0.iter().enumerate() {
            match self.kinds[a] {
                ArgKind::Position => p += e as u32,
                ArgKind::Time => t += e as u32,
            }
        }
        p <= self.position_cap && t <= self.time_cap
    }

    pub fn jet_text(&self, jet: &Jet) -> String {
        let mut parts = Vec::new();
        for (a, &e) in jet.0.iter().enumerate() {
            for _ in 0..e {
                parts.push(self.name(a).to_string());
            }
        }
        if parts.is_empty() {
            self.unknown.clone()
        } else {
            format!("{}[{}]", self.unknown, parts.join(","))
        }
    }
}

/// Derivative multi-index of the unknown over its formal arguments.
///
/// Ordered by total order, then lexicographically, so among jets of equal
/// order the one differentiated in the earliest argument ranks highest.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Jet(pub(crate) SmallVec<[u8; 8]>);

impl Jet {
    pub fn zero(nargs: usize) -> Self {
        Jet(SmallVec::from_elem(0, nargs))
    }

    pub fn from_orders(orders: &[u8]) -> Self {
        Jet(SmallVec::from_slice(orders))
    }

    pub fn orders(&self) -> &[u8] {
        &self.0
    }

    pub fn order(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn bump(&self, a: usize) -> Jet {
        let mut j = self.clone();
        j.0[a] += 1;
        j
    }
}

impl Ord for Jet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order().cmp(&other.order()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Jet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// How the formal arguments of the unknown are expressed in table variables.
///
/// Differentiating a jet by a table variable `v` uses the chain rule
/// `d/dv Psi_b = sum_a (d value_a / dv) Psi_{b + e_a}`.
pub struct SubstitutionRecord {
    args: Arc<FormalArgs>,
    values: Vec<RationalFunction>,
    derivatives: Vec<OnceLock<Vec<RationalFunction>>>,
}

impl SubstitutionRecord {
    pub fn new(args: &Arc<FormalArgs>, values: Vec<RationalFunction>) -> Result<Arc<Self>> {
        if values.len() != args.len() {
            return Err(Error::Precondition(format!(
                "record needs {} values, got {}",
                args.len(),
                values.len()
            )));
        }
        let n = args.table.len();
        Ok(Arc::new(SubstitutionRecord {
            args: args.clone(),
            values,
            derivatives: (0..n).map(|_| OnceLock::new()).collect(),
        }))
    }

    /// Each formal argument equals its own variable.
    pub fn identity(args: &Arc<FormalArgs>) -> Arc<Self> {
        let values = (0..args.len())
            .map(|a| {
                RationalFunction::from_poly(crate::exact_algebra::Polynomial::var_index(
                    &args.table,
                    args.vars[a],
                ))
            })
            .collect();
        Self::new(args, values).expect("identity record has matching length")
    }

    pub fn args(&self) -> &Arc<FormalArgs> {
        &self.args
    }

    pub fn values(&self) -> &[RationalFunction] {
        &self.values
    }

    pub fn is_identity(&self) -> bool {
        self.values
            .iter()
            .enumerate()
            .all(|(a, v)| v.as_polynomial().and_then(|p| p.as_variable()) == Some(self.args.vars[a]))
    }

    pub(crate) fn derivative_values(&self, var: usize) -> &[RationalFunction] {
        self.derivatives[var].get_or_init(|| self.values.iter().map(|v| v.derivative(var)).collect())
    }

    pub fn substitute(&self, bindings: &[(usize, RationalFunction)]) -> Result<Arc<Self>> {
        let values = self
            .values
            .iter()
            .map(|v| v.substitute(bindings))
            .collect::<Result<Vec<_>>>()?;
        Self::new(&self.args, values)
    }

    pub fn same_as(&self, other: &SubstitutionRecord) -> bool {
        Arc::ptr_eq(&self.args, &other.args) && self.values == other.values
    }
}

impl fmt::Debug for SubstitutionRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (0..self.args.len())
            .map(|a| format!("{} -> {}", self.args.name(a), self.values[a]))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}
