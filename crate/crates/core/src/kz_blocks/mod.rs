//! Conformal blocks on the projective line for sl2: the differential
//! realization of the contragredient Verma module, Ward and KZ operators, the
//! Casimir `Omega_ij`, the Hecke coordinate change `Psi -> Upsilon`, and
//! symbolic verification that the (N+1)-point Ward and KZ systems follow
//! from the N-point ones.
//!
//! Point `i` carries the weight `2 chi_i` in the realization `rho`, and the
//! extra point added by the Hecke modification is indexed `N+1` with
//! `chi_{N+1} = k/2`.

mod transport;

pub use transport::{
    hecke_transform, kz_transport, psi_relations, transport_transcript, two_point_solution,
    ward_transport, TransportTranscript,
    IdentityStatus, Mutation, TransportReport, TwoPointReport,
};

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exact_algebra::{int, Polynomial, RationalFunction, Scalar, Table, VarTable};
use crate::weyl_calculus::{ArgKind, DiffOp, FormalArgs, SubstitutionRecord};

/// Basis of sl2 acting through `rho`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    E,
    H,
    F,
}

/// A weight or the level: its own symbol, tied to an earlier weight, or a
/// rational value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Param {
    Symbolic,
    SameAs(usize),
    Value(Scalar),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightParams {
    pub weights: Vec<Param>,
    pub level: Param,
}

impl WeightParams {
    pub fn symbolic(n: usize) -> Self {
        WeightParams { weights: vec![Param::Symbolic; n], level: Param::Symbolic }
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn describe(&self) -> String {
        let ws: Vec<String> = self
            .weights
            .iter()
            .enumerate()
            .map(|(i, p)| match p {
                Param::Symbolic => format!("chi{}", i + 1),
                Param::SameAs(j) => format!("chi{}", j + 1),
                Param::Value(v) => crate::exact_algebra::scalar_text(v),
            })
            .collect();
        let k = match &self.level {
            Param::Value(v) => crate::exact_algebra::scalar_text(v),
            _ => "k".into(),
        };
        format!("N={} chi=({}) k={}", self.n(), ws.join(","), k)
    }
}

/// Variables and formal data for the N-point problem and its Hecke
/// transform at the extra point `N+1`.
///
/// The table is `x1..x{N+1}, t1..t{N+1}, xi1..xiN, chi1..chiN, k`. The
/// unknown `Psi` has formal arguments `xi1..xiN` (positions) and `t1..tN`
/// (times).
pub struct BlockSetup {
    pub n: usize,
    pub table: Table,
    pub weights: Vec<RationalFunction>,
    pub level: RationalFunction,
    pub args: Arc<FormalArgs>,
    pub formal_record: Arc<SubstitutionRecord>,
}

impl BlockSetup {
    pub fn new(params: &WeightParams) -> Result<Self> {
        let n = params.n();
        let mut names = Vec::new();
        names.extend((1..=n + 1).map(|i| format!("x{i}")));
        names.extend((1..=n + 1).map(|i| format!("t{i}")));
        names.extend((1..=n).map(|i| format!("xi{i}")));
        names.extend((1..=n).map(|i| format!("chi{i}")));
        names.push("k".into());
        let table = VarTable::new(&names)?;
        let mut weights: Vec<RationalFunction> = Vec::new();
        for (i, p) in params.weights.iter().enumerate() {
            let w = match p {
                Param::Symbolic => RationalFunction::var(&table, &format!("chi{}", i + 1))?,
                Param::SameAs(j) if *j < i => weights[*j].clone(),
                Param::SameAs(j) => {
                    return Err(Error::Precondition(format!(
                        "weight {} refers to later weight {}",
                        i + 1,
                        j + 1
                    )))
                }
                Param::Value(v) => RationalFunction::from_scalar(&table, v.clone()),
            };
            weights.push(w);
        }
        let level = match &params.level {
            Param::Value(v) => {
                if *v == int(-2) {
                    return Err(Error::CriticalLevel);
                }
                RationalFunction::from_scalar(&table, v.clone())
            }
            _ => RationalFunction::var(&table, "k")?,
        };
        let mut arg_names: Vec<(String, ArgKind)> =
            (1..=n).map(|i| (format!("xi{i}"), ArgKind::Position)).collect();
        arg_names.extend((1..=n).map(|i| (format!("t{i}"), ArgKind::Time)));
        let arg_refs: Vec<(&str, ArgKind)> = arg_names.iter().map(|(s, k)| (s.as_str(), *k)).collect();
        let args = FormalArgs::new(&table, "Psi", &arg_refs, 2, 1)?;
        let formal_record = SubstitutionRecord::identity(&args);
        Ok(BlockSetup { n, table, weights, level, args, formal_record })
    }

    /// Variable index of `x_i`, 0-based; `i = n` is the extra point.
    pub fn x(&self, i: usize) -> usize {
        i
    }

    pub fn t(&self, i: usize) -> usize {
        self.n + 1 + i
    }

    pub fn xi(&self, a: usize) -> usize {
        2 * (self.n + 1) + a
    }

    pub fn poly(&self, var: usize) -> Polynomial {
        Polynomial::var_index(&self.table, var)
    }

    pub fn rf(&self, var: usize) -> RationalFunction {
        RationalFunction::from_poly(self.poly(var))
    }

    /// `rho` weight `2 chi_i` of point `i < n`.
    pub fn point_weight(&self, i: usize) -> RationalFunction {
        self.weights[i].scale(&int(2))
    }

    /// The weight `2 chi_{N+1} = k` of the extra point.
    pub fn extra_weight(&self) -> RationalFunction {
        self.level.clone()
    }
}

/// The realization `rho_w(e) = d`, `rho_w(h) = -2y d + w`,
/// `rho_w(f) = -y^2 d + w y` in the variable `var`.
pub fn rho(gen: Generator, weight: &RationalFunction, var: usize) -> DiffOp {
    let table = weight.table();
    let d = DiffOp::partial(table, var);
    let y = RationalFunction::from_poly(Polynomial::var_index(table, var));
    match gen {
        Generator::E => d,
        Generator::H => d.scale(&y.scale(&int(-2))).add(&DiffOp::mult(weight.clone())),
        Generator::F => {
            let y2 = &y * &y;
            d.scale(&-&y2).add(&DiffOp::mult(weight * &y))
        }
    }
}

/// `Omega_ij = e_i f_j + f_i e_j + 1/2 h_i h_j`, expanded by composition.
pub fn casimir_omega(
    var_i: usize,
    weight_i: &RationalFunction,
    var_j: usize,
    weight_j: &RationalFunction,
) -> Result<DiffOp> {
    if var_i == var_j {
        return Err(Error::Precondition("Omega_ij needs two distinct points".into()));
    }
    let ef = rho(Generator::E, weight_i, var_i).compose(&rho(Generator::F, weight_j, var_j));
    let fe = rho(Generator::F, weight_i, var_i).compose(&rho(Generator::E, weight_j, var_j));
    let hh = rho(Generator::H, weight_i, var_i).compose(&rho(Generator::H, weight_j, var_j));
    let half = RationalFunction::from_scalar(weight_i.table(), crate::exact_algebra::ratio(1, 2));
    Ok(ef.add(&fe).add(&hh.scale(&half)))
}

/// A closed form often quoted for `Omega_ij`, kept only
/// to compare against [`casimir_omega`]:
/// `2(x_i-x_j) d_i d_j + 2(x_i-x_j)(chi_j d_j - chi_i d_i) + 2 chi_i chi_j`.
pub fn closed_form_omega(
    var_i: usize,
    chi_i: &RationalFunction,
    var_j: usize,
    chi_j: &RationalFunction,
) -> DiffOp {
    let table = chi_i.table();
    let diff = RationalFunction::from_poly(
        &Polynomial::var_index(table, var_i) - &Polynomial::var_index(table, var_j),
    );
    let two = int(2);
    let di = DiffOp::partial(table, var_i);
    let dj = DiffOp::partial(table, var_j);
    di.compose(&dj)
        .scale(&diff.scale(&two))
        .add(&dj.scale(&(&diff * chi_j).scale(&two)))
        .sub(&di.scale(&(&diff * chi_i).scale(&two)))
        .add(&DiffOp::mult((chi_i * chi_j).scale(&two)))
}

/// The three global sl2-invariance operators on the given points.
pub fn ward_ops(points: &[(usize, RationalFunction)]) -> Result<[DiffOp; 3]> {
    let table = points
        .first()
        .map(|(_, w)| w.table().clone())
        .ok_or_else(|| Error::Precondition("Ward operators need at least one point".into()))?;
    let mut ops = [DiffOp::zero(&table), DiffOp::zero(&table), DiffOp::zero(&table)];
    for (var, w) in points {
        ops[0] = ops[0].add(&rho(Generator::E, w, *var));
        ops[1] = ops[1].add(&rho(Generator::H, w, *var));
        ops[2] = ops[2].add(&rho(Generator::F, w, *var));
    }
    Ok(ops)
}

/// The three (N+1)-point operators for the transformed function:
/// `sum d_{x_i}`, `sum (-2 x_i d_{x_i} + 2 chi_i) - k` and `sum t_i d_{x_i}`,
/// with `2 chi_{N+1} = extra_weight`.
pub fn ward_ops_extended(setup: &BlockSetup, extra_weight: &RationalFunction) -> [DiffOp; 3] {
    let table = &setup.table;
    let mut e = DiffOp::zero(table);
    let mut h = DiffOp::mult(-&setup.level);
    let mut te = DiffOp::zero(table);
    for i in 0..=setup.n {
        let w = if i < setup.n { setup.point_weight(i) } else { extra_weight.clone() };
        let d = DiffOp::partial(table, setup.x(i));
        e = e.add(&d);
        h = h.add(&rho(Generator::H, &w, setup.x(i)));
        te = te.add(&d.scale(&setup.rf(setup.t(i))));
    }
    [e, h, te]
}

/// `(k+2) d_{t_i} - sum_{j != i} Omega_ij / (t_i - t_j)` over the points
/// `(position variable, time variable, weight)`.
pub fn kz_op(
    i: usize,
    points: &[(usize, usize, RationalFunction)],
    level: &RationalFunction,
) -> Result<DiffOp> {
    if i >= points.len() {
        return Err(Error::Precondition(format!("point {} out of range", i + 1)));
    }
    let table = level.table();
    let shifted = level + &RationalFunction::from_int(table, 2);
    let (xi, ti, wi) = &points[i];
    let mut op = DiffOp::partial(table, *ti).scale(&shifted);
    for (j, (xj, tj, wj)) in points.iter().enumerate() {
        if j == i {
            continue;
        }
        let omega = casimir_omega(*xi, wi, *xj, wj)?;
        let dt = &Polynomial::var_index(table, *ti) - &Polynomial::var_index(table, *tj);
        let inv = RationalFunction::from_factors(Polynomial::one(table), vec![(dt, 1)])?;
        op = op.sub(&omega.scale(&inv));
    }
    Ok(op)
}
