use std::collections::BTreeMap;
use std::sync::Arc;

use super::jets::{ArgKind, Jet, SubstitutionRecord};
use super::twisted::{FactorSet, JetMonomial, TwistedFunction};
use crate::error::{Error, Result};
use crate::exact_algebra::RationalFunction;

#[derive(Clone, Debug)]
struct Row {
    jets: BTreeMap<Jet, RationalFunction>,
    constant: RationalFunction,
    sources: Vec<usize>,
}

/// Row-echelon form of a system of relations that are linear in the jets of
/// the unknown. Each row is normalized so its highest jet has coefficient one.
#[derive(Clone, Debug)]
pub struct Echelon {
    record: Arc<SubstitutionRecord>,
    pivots: BTreeMap<Jet, Row>,
    relations_used: usize,
}

fn relation_row(rel: &TwistedFunction, index: usize) -> Result<Row> {
    let groups = rel.factor_groups();
    if groups.len() > 1 {
        return Err(Error::Unsupported(format!(
            "relation {index} mixes different twisted factors"
        )));
    }
    let table = rel.table();
    let mut jets: BTreeMap<Jet, RationalFunction> = BTreeMap::new();
    let mut constant = RationalFunction::zero(table);
    for (_, terms) in groups {
        for (jm, r) in terms {
            if jm.is_one() {
                constant = &constant + &r;
            } else if let Some(j) = jm.as_linear() {
                jets.insert(j.clone(), r);
            } else {
                return Err(Error::Unsupported(format!("relation {index} is not linear in jets")));
            }
        }
    }
    if jets.is_empty() {
        return Err(Error::PureFunctionRelation(index));
    }
    Ok(Row { jets, constant, sources: vec![index] })
}

fn check_record(
    expected: &Arc<SubstitutionRecord>,
    found: Option<&Arc<SubstitutionRecord>>,
) -> Result<()> {
    match found {
        Some(r) if Arc::ptr_eq(r, expected) || r.same_as(expected) => Ok(()),
        Some(_) => Err(Error::RecordMismatch),
        None => Ok(()),
    }
}

impl Echelon {
    /// Echelonizes `relations`, all of which must use `record`.
    pub fn new(record: &Arc<SubstitutionRecord>, relations: &[TwistedFunction]) -> Result<Self> {
        let mut ech = Echelon { record: record.clone(), pivots: BTreeMap::new(), relations_used: 0 };
        for (i, rel) in relations.iter().enumerate() {
            check_record(record, rel.record())?;
            ech.check_cap(rel)?;
            let row = relation_row(rel, i)?;
            ech.insert(row)?;
            ech.relations_used += 1;
        }
        Ok(ech)
    }

    fn check_cap(&self, f: &TwistedFunction) -> Result<()> {
        let args = self.record.args();
        for j in f.jets() {
            if !args.within_cap(&j) {
                return Err(Error::JetCapExceeded(args.jet_text(&j)));
            }
        }
        Ok(())
    }

    pub fn record(&self) -> &Arc<SubstitutionRecord> {
        &self.record
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn relations_used(&self) -> usize {
        self.relations_used
    }

    pub fn pivot_jets(&self) -> Vec<Jet> {
        self.pivots.keys().cloned().collect()
    }

    fn reduce_parts(&self, row: &mut Row) {
        let mut cursor: Option<Jet> = None;
        loop {
            let next = match &cursor {
                None => row.jets.keys().next_back().cloned(),
                Some(c) => row.jets.range(..c.clone()).next_back().map(|(j, _)| j.clone()),
            };
            let Some(j) = next else { break };
            cursor = Some(j.clone());
            let Some(pivot) = self.pivots.get(&j) else { continue };
            let c = row.jets.remove(&j).unwrap();
            for (jj, cc) in &pivot.jets {
                if *jj == j {
                    continue;
                }
                let delta = &c * cc;
                let entry = row.jets.entry(jj.clone());
                match entry {
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        let s = e.get() - &delta;
                        if s.is_zero() {
                            e.remove();
                        } else {
                            *e.get_mut() = s;
                        }
                    }
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(-&delta);
                    }
                }
            }
            if !pivot.constant.is_zero() {
                row.constant = &row.constant - &(&c * &pivot.constant);
            }
            row.sources.extend(pivot.sources.iter().copied());
        }
    }

    fn insert(&mut self, mut row: Row) -> Result<()> {
        self.reduce_parts(&mut row);
        let Some((pivot, lead)) = row.jets.iter().next_back().map(|(j, c)| (j.clone(), c.clone()))
        else {
            if row.constant.is_zero() {
                return Ok(());
            }
            let mut s = row.sources;
            s.sort_unstable();
            s.dedup();
            return Err(Error::InconsistentRelations(s));
        };
        let inv = lead.inv()?;
        for c in row.jets.values_mut() {
            *c = &*c * &inv;
        }
        row.constant = &row.constant * &inv;
        self.pivots.insert(pivot, row);
        Ok(())
    }

    /// Normal form of `f`: every pivot jet eliminated, factor group by factor
    /// group. The result is zero exactly when `f` lies in the span of the
    /// relations.
    pub fn reduce(&self, f: &TwistedFunction) -> Result<TwistedFunction> {
        check_record(&self.record, f.record())?;
        self.check_cap(f)?;
        let table = f.table().clone();
        let mut out = TwistedFunction::zero(&table);
        for (fs, terms) in f.factor_groups() {
            let mut row = Row {
                jets: BTreeMap::new(),
                constant: RationalFunction::zero(&table),
                sources: Vec::new(),
            };
            for (jm, r) in terms {
                if jm.is_one() {
                    row.constant = &row.constant + &r;
                } else if let Some(j) = jm.as_linear() {
                    row.jets.insert(j.clone(), r);
                } else {
                    return Err(Error::Unsupported("reducing a function nonlinear in jets".into()));
                }
            }
            self.reduce_parts(&mut row);
            add_row(&mut out, &fs, row);
        }
        Ok(out.with_record(f.record().cloned()))
    }

    /// Rewrites every coefficient and the record under a substitution.
    pub fn substitute(&self, bindings: &[(usize, RationalFunction)]) -> Result<Echelon> {
        let record = self.record.substitute(bindings)?;
        let mut pivots = BTreeMap::new();
        for (p, row) in &self.pivots {
            let mut jets = BTreeMap::new();
            for (j, c) in &row.jets {
                let v = c.substitute(bindings)?;
                if !v.is_zero() {
                    jets.insert(j.clone(), v);
                }
            }
            let constant = row.constant.substitute(bindings)?;
            pivots.insert(p.clone(), Row { jets, constant, sources: row.sources.clone() });
        }
        Ok(Echelon { record, pivots, relations_used: self.relations_used })
    }

    /// The pivot rows as functions, for display.
    pub fn rows(&self) -> Vec<TwistedFunction> {
        self.pivots
            .values()
            .rev()
            .map(|row| {
                let table = row.constant.table().clone();
                let mut f = TwistedFunction::zero(&table);
                add_row(&mut f, &FactorSet::default(), row.clone());
                f.with_record(Some(self.record.clone()))
            })
            .collect()
    }
}

fn add_row(out: &mut TwistedFunction, fs: &FactorSet, row: Row) {
    for (j, c) in row.jets {
        out.add_term((fs.clone(), JetMonomial::single(j)), c);
    }
    out.add_term((fs.clone(), JetMonomial::one()), row.constant);
}

/// Normal form of `f` modulo the span of `relations`.
pub fn reduce_modulo(f: &TwistedFunction, relations: &[TwistedFunction]) -> Result<TwistedFunction> {
    let record = f
        .record()
        .or_else(|| relations.iter().find_map(|r| r.record()))
        .cloned();
    match record {
        Some(record) => Echelon::new(&record, relations)?.reduce(f),
        None => Ok(f.clone()),
    }
}

/// Appends all derivatives of the relations by position arguments up to the
/// given total order. The relations must be written in the formal
/// coordinates themselves (identity record on position arguments).
pub fn prolong(relations: &[TwistedFunction], order: u32) -> Result<Vec<TwistedFunction>> {
    let mut out: Vec<TwistedFunction> = relations.to_vec();
    if order == 0 {
        return Ok(out);
    }
    let Some(record) = relations.iter().find_map(|r| r.record()).cloned() else {
        return Ok(out);
    };
    let args = record.args().clone();
    let positions: Vec<usize> =
        (0..args.len()).filter(|&a| args.kind(a) == ArgKind::Position).collect();
    for &a in &positions {
        let v = args.var(a);
        let ok = record.values().iter().enumerate().all(|(b, val)| {
            if b == a {
                val.as_polynomial().and_then(|p| p.as_variable()) == Some(v)
            } else {
                !val.depends_on(v)
            }
        });
        if !ok {
            return Err(Error::Precondition(
                "prolongation requires relations in formal coordinates".into(),
            ));
        }
    }
    let mut frontier: Vec<(usize, TwistedFunction)> =
        relations.iter().map(|r| (0usize, r.clone())).collect();
    for _ in 0..order {
        let mut next = Vec::new();
        for (start, rel) in &frontier {
            for (k, &a) in positions.iter().enumerate().skip(*start) {
                let d = rel.derivative(args.var(a))?;
                for j in d.jets() {
                    if !args.within_cap(&j) {
                        return Err(Error::JetCapExceeded(args.jet_text(&j)));
                    }
                }
                next.push((k, d));
            }
        }
        out.extend(next.iter().map(|(_, d)| d.clone()));
        frontier = next;
    }
    Ok(out)
}
