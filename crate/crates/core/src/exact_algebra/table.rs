use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Ordered list of variable names shared by every polynomial built over it.
///
/// Variable order matters: it fixes the graded-lex monomial order, with the
/// first declared variable the most significant.
#[derive(Clone)]
pub struct VarTable {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

pub type Table = Arc<VarTable>;

impl VarTable {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Table> {
        let mut index = HashMap::new();
        let mut out = Vec::with_capacity(names.len());
        for (i, n) in names.iter().enumerate() {
            let n = n.as_ref().to_string();
            if n.is_empty() || index.insert(n.clone(), i).is_some() {
                return Err(Error::TableMismatch(format!("duplicate or empty variable `{n}`")));
            }
            out.push(n);
        }
        Ok(Arc::new(VarTable { names: out, index }))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn get(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Index map sending each variable of `self` to its position in `target`.
    pub fn embedding_into(&self, target: &VarTable) -> Result<Vec<usize>> {
        self.names
            .iter()
            .map(|n| {
                target.get(n).ok_or_else(|| {
                    Error::TableMismatch(format!("variable `{n}` missing from target table"))
                })
            })
            .collect()
    }
}

impl PartialEq for VarTable {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names
    }
}

impl Eq for VarTable {}

impl fmt::Debug for VarTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VarTable{:?}", self.names)
    }
}

pub(crate) fn same_table(a: &Table, b: &Table) -> bool {
    Arc::ptr_eq(a, b) || a.names == b.names
}
