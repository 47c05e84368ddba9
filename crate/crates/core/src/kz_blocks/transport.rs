use std::sync::Arc;
use std::time::{Duration, Instant};

use super::{
    casimir_omega, kz_op, closed_form_omega, ward_ops, ward_ops_extended, BlockSetup, Param,
    WeightParams,
};
use crate::error::{Error, Result};
use crate::exact_algebra::{int, Polynomial, RationalFunction, Scalar};
use crate::weyl_calculus::{prolong, DiffOp, Echelon, SubstitutionRecord, TwistedFunction};

/// Deliberate corruption of the Hecke transform, used to show that the
/// reductions are not vacuous. Point indices are 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mutation {
    None,
    /// `xi_i -> -xi_i`.
    XiSign(usize),
    /// Prefactor exponent `2 chi_i -> 2 chi_i + 1`.
    ExponentShift(usize),
    /// Prefactor exponent `2 chi_i -> -2 chi_i`.
    PositionExponentSign(usize),
    /// Prefactor exponent `-chi_i -> chi_i`.
    TimeExponentSign(usize),
    /// `chi_{N+1} = k/2 + 1` instead of `k/2`.
    ExtraWeight,
}

impl Mutation {
    pub fn describe(&self) -> String {
        match self {
            Mutation::None => "none".into(),
            Mutation::XiSign(i) => format!("xi-sign:{}", i + 1),
            Mutation::ExponentShift(i) => format!("exponent-shift:{}", i + 1),
            Mutation::PositionExponentSign(i) => format!("x-exponent-sign:{}", i + 1),
            Mutation::TimeExponentSign(i) => format!("t-exponent-sign:{}", i + 1),
            Mutation::ExtraWeight => "extra-weight".into(),
        }
    }

    fn point(&self) -> Option<usize> {
        match self {
            Mutation::XiSign(i)
            | Mutation::ExponentShift(i)
            | Mutation::PositionExponentSign(i)
            | Mutation::TimeExponentSign(i) => Some(*i),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct IdentityStatus {
    pub identity: String,
    pub residual: TwistedFunction,
    pub zero: bool,
}

impl IdentityStatus {
    fn new(identity: impl Into<String>, residual: TwistedFunction) -> Self {
        let zero = residual.is_zero();
        IdentityStatus { identity: identity.into(), residual, zero }
    }
}

#[derive(Clone, Debug)]
pub struct TransportReport {
    pub case: String,
    pub identities: Vec<IdentityStatus>,
    pub relations_used: usize,
    pub prolongation_order: u32,
    pub notes: Vec<String>,
    pub elapsed: Duration,
}

impl TransportReport {
    pub fn verified(&self) -> bool {
        self.identities.iter().all(|s| s.zero)
    }
}

fn convention_notes(setup: &BlockSetup) -> Vec<String> {
    let mut notes = vec![
        "point i carries rho-weight 2*chi_i".to_string(),
        format!("the extra point is indexed {} with chi{} = k/2", setup.n + 1, setup.n + 1),
    ];
    if setup.n >= 1 {
        let (a, b) = (setup.x(0), setup.x(setup.n));
        let chi = &setup.weights[0];
        let chi_extra = setup.level.scale(&crate::exact_algebra::ratio(1, 2));
        let derived = casimir_omega(a, &chi.scale(&int(2)), b, &chi_extra.scale(&int(2)));
        let closed = closed_form_omega(a, chi, b, &chi_extra);
        if let Ok(derived) = derived {
            if !derived.sub(&closed).is_zero() {
                notes.push(
                    "Omega_ij from e(x)f + f(x)e + h(x)h/2 differs from the quoted closed form; the former is used"
                        .into(),
                );
            }
        }
    }
    notes
}

/// `xi_i = -(t_i - t_{N+1}) / (x_i - x_{N+1})`, as a substitution record.
pub fn hecke_record(setup: &BlockSetup, mutation: Mutation) -> Result<Arc<SubstitutionRecord>> {
    let n = setup.n;
    let mut values = Vec::with_capacity(2 * n);
    for a in 0..n {
        let dt = &setup.poly(setup.t(a)) - &setup.poly(setup.t(n));
        let dx = &setup.poly(setup.x(a)) - &setup.poly(setup.x(n));
        let sign = if mutation == Mutation::XiSign(a) { 1 } else { -1 };
        values.push(RationalFunction::new(dt.scale(&int(sign)), dx)?);
    }
    for a in 0..n {
        values.push(setup.rf(setup.t(a)));
    }
    SubstitutionRecord::new(&setup.args, values)
}

/// `Upsilon = prod ((x_i - x_{N+1})^2 / (t_i - t_{N+1}))^chi_i * Psi(xi; t)`.
pub fn hecke_transform(setup: &BlockSetup, mutation: Mutation) -> Result<TwistedFunction> {
    let n = setup.n;
    let record = hecke_record(setup, mutation)?;
    let mut f = TwistedFunction::unknown(&record);
    for i in 0..n {
        let chi = setup.weights[i]
            .as_polynomial()
            .ok_or_else(|| Error::Precondition("weights must be polynomial".into()))?
            .clone();
        let mut ex = chi.scale(&int(2));
        let mut et = chi.scale(&int(-1));
        match mutation {
            Mutation::ExponentShift(j) if j == i => ex = &ex + &Polynomial::one(&setup.table),
            Mutation::PositionExponentSign(j) if j == i => ex = -&ex,
            Mutation::TimeExponentSign(j) if j == i => et = -&et,
            _ => {}
        }
        let dx = &setup.poly(setup.x(i)) - &setup.poly(setup.x(n));
        let dt = &setup.poly(setup.t(i)) - &setup.poly(setup.t(n));
        f = TwistedFunction::power(&dx, &ex)?.try_mul(&f)?;
        f = TwistedFunction::power(&dt, &et)?.try_mul(&f)?;
    }
    Ok(f)
}

fn psi_points(setup: &BlockSetup) -> Vec<(usize, usize, RationalFunction)> {
    (0..setup.n).map(|a| (setup.xi(a), setup.t(a), setup.point_weight(a))).collect()
}

/// The N-point Ward relations of `Psi` prolonged to `order`, followed by the
/// KZ relations when requested. Everything is in the formal coordinates.
pub fn psi_relations(setup: &BlockSetup, include_kz: bool, order: u32) -> Result<Vec<TwistedFunction>> {
    let psi = TwistedFunction::unknown(&setup.formal_record);
    let points: Vec<(usize, RationalFunction)> =
        (0..setup.n).map(|a| (setup.xi(a), setup.point_weight(a))).collect();
    let ward: Vec<TwistedFunction> =
        ward_ops(&points)?.iter().map(|op| op.apply(&psi)).collect::<Result<_>>()?;
    let mut rels = prolong(&ward, order)?;
    if include_kz {
        let pts = psi_points(setup);
        for i in 0..setup.n {
            rels.push(kz_op(i, &pts, &setup.level)?.apply(&psi)?);
        }
    }
    Ok(rels)
}

/// Rewrites a function of `x, t` in the coordinates `xi, x_{N+1}, t` by
/// inverting the record, `x_a = x_{N+1} + s (t_a - t_{N+1}) / xi_a` with the
/// sign `s` used by the record. The change of variables is birational, so a
/// function vanishes modulo the relations exactly when its image does, and
/// the image carries the identity record of the formal relations.
fn to_formal(setup: &BlockSetup, f: &TwistedFunction, mutation: Mutation) -> Result<TwistedFunction> {
    let n = setup.n;
    let mut bindings = Vec::with_capacity(n);
    for a in 0..n {
        let sign = if mutation == Mutation::XiSign(a) { 1 } else { -1 };
        let dt = &setup.poly(setup.t(a)) - &setup.poly(setup.t(n));
        let shift = RationalFunction::new(dt.scale(&int(sign)), setup.poly(setup.xi(a)))?;
        bindings.push((setup.x(a), &setup.rf(setup.x(n)) + &shift));
    }
    let g = f.substitute(&bindings)?;
    match g.record() {
        Some(r) if !r.same_as(&setup.formal_record) => Err(Error::RecordMismatch),
        _ => Ok(g.with_record(Some(setup.formal_record.clone()))),
    }
}

fn check_mutation(setup: &BlockSetup, mutation: Mutation) -> Result<()> {
    match mutation.point() {
        Some(i) if i >= setup.n => Err(Error::Precondition(format!(
            "mutation refers to point {} but N = {}",
            i + 1,
            setup.n
        ))),
        _ => Ok(()),
    }
}

fn extra_weight(setup: &BlockSetup, mutation: Mutation) -> RationalFunction {
    let w = setup.extra_weight();
    if mutation == Mutation::ExtraWeight {
        &w + &RationalFunction::from_int(&setup.table, 2)
    } else {
        w
    }
}

/// Applies the three (N+1)-point Ward operators to `Upsilon` and reduces the
/// residuals modulo the prolonged N-point Ward relations.
pub fn ward_transport(params: &WeightParams, mutation: Mutation) -> Result<TransportReport> {
    let start = Instant::now();
    let setup = BlockSetup::new(params)?;
    if setup.n == 0 {
        return Err(Error::Precondition("transport needs N >= 1".into()));
    }
    check_mutation(&setup, mutation)?;
    let upsilon = hecke_transform(&setup, mutation)?;
    let relations = psi_relations(&setup, false, 1)?;
    let echelon = Echelon::new(&setup.formal_record, &relations)?;
    let ops = ward_ops_extended(&setup, &extra_weight(&setup, mutation));
    let mut identities = Vec::new();
    for (name, op) in ["ward:e", "ward:h", "ward:te"].iter().zip(ops.iter()) {
        let residual = op.apply(&upsilon)?;
        let residual = to_formal(&setup, &residual, mutation)?;
        identities.push(IdentityStatus::new(*name, echelon.reduce(&residual)?));
    }
    Ok(TransportReport {
        case: format!("ward {} mutation={}", params.describe(), mutation.describe()),
        identities,
        relations_used: relations.len(),
        prolongation_order: 1,
        notes: convention_notes(&setup),
        elapsed: start.elapsed(),
    })
}

fn kz_residual(setup: &BlockSetup, upsilon: &TwistedFunction, i: usize, mutation: Mutation) -> Result<TwistedFunction> {
    let mut points = psi_points(setup);
    for (a, p) in points.iter_mut().enumerate() {
        p.0 = setup.x(a);
    }
    points.push((setup.x(setup.n), setup.t(setup.n), extra_weight(setup, mutation)));
    kz_op(i, &points, &setup.level)?.apply(upsilon)
}

/// KZ equations at the points `which` (0-based) for `Upsilon`, reduced
/// modulo the N-point Ward and KZ relations.
pub fn kz_transport(params: &WeightParams, which: &[usize], mutation: Mutation) -> Result<TransportReport> {
    let start = Instant::now();
    let setup = BlockSetup::new(params)?;
    if setup.n == 0 {
        return Err(Error::Precondition("transport needs N >= 1".into()));
    }
    check_mutation(&setup, mutation)?;
    if let Some(&i) = which.iter().find(|&&i| i >= setup.n) {
        return Err(Error::Precondition(format!("KZ point {} out of range 1..={}", i + 1, setup.n)));
    }
    let upsilon = hecke_transform(&setup, mutation)?;
    let relations = psi_relations(&setup, true, 1)?;
    let echelon = Echelon::new(&setup.formal_record, &relations)?;
    let mut notes = convention_notes(&setup);
    let mut identities = Vec::new();
    let mut relations_used = relations.len();
    let mut order = 1;
    for &i in which {
        let residual = kz_residual(&setup, &upsilon, i, mutation)?;
        let residual = to_formal(&setup, &residual, mutation)?;
        let mut reduced = echelon.reduce(&residual)?;
        if !reduced.is_zero() {
            match psi_relations(&setup, true, 2) {
                Ok(more) => {
                    let e2 = Echelon::new(&setup.formal_record, &more)?;
                    reduced = e2.reduce(&residual)?;
                    relations_used = relations_used.max(more.len());
                    order = 2;
                }
                Err(Error::JetCapExceeded(j)) => {
                    notes.push(format!("second prolongation round skipped: {j} exceeds the jet cap"))
                }
                Err(e) => return Err(e),
            }
        }
        identities.push(IdentityStatus::new(format!("kz:{}", i + 1), reduced));
    }
    let points: Vec<String> = which.iter().map(|i| (i + 1).to_string()).collect();
    Ok(TransportReport {
        case: format!(
            "kz {} i={} mutation={}",
            params.describe(),
            points.join(","),
            mutation.describe()
        ),
        identities,
        relations_used,
        prolongation_order: order,
        notes,
        elapsed: start.elapsed(),
    })
}

#[derive(Clone, Debug)]
pub struct TwoPointReport {
    pub case: String,
    /// Eigenvalue of `Omega_12` on `(x1 - x2)^(2 chi)`.
    pub casimir: RationalFunction,
    pub psi: TwistedFunction,
    pub two_point: Vec<IdentityStatus>,
    pub three_point: Vec<IdentityStatus>,
    pub elapsed: Duration,
}

impl TwoPointReport {
    pub fn verified(&self) -> bool {
        self.two_point.iter().chain(self.three_point.iter()).all(|s| s.zero)
    }
}

/// The explicit two-point block `(x1-x2)^(2 chi) (t1-t2)^(c/(k+2))`, its
/// verification against the two-point Ward and KZ system, and a direct
/// evaluation of the three-point system on its Hecke transform.
pub fn two_point_solution(chi: Param, level: Scalar) -> Result<TwoPointReport> {
    let start = Instant::now();
    if level == int(-2) {
        return Err(Error::CriticalLevel);
    }
    let chi = match chi {
        Param::SameAs(_) => Param::Symbolic,
        c => c,
    };
    let params =
        WeightParams { weights: vec![chi, Param::SameAs(0)], level: Param::Value(level.clone()) };
    let setup = BlockSetup::new(&params)?;
    let chi_rf = setup.weights[0].clone();
    let chi_poly = chi_rf.as_polynomial().unwrap().clone();
    let w = setup.point_weight(0);

    let dxi = &setup.poly(setup.xi(0)) - &setup.poly(setup.xi(1));
    let position = TwistedFunction::power(&dxi, &chi_poly.scale(&int(2)))?;
    let omega = casimir_omega(setup.xi(0), &w, setup.xi(1), &w)?;
    let casimir = omega
        .apply(&position)?
        .ratio_to(&position)
        .ok_or_else(|| Error::Precondition("(x1-x2)^(2chi) is not an Omega eigenfunction".into()))?;
    let shifted = &level + &int(2);
    let gamma = casimir
        .as_polynomial()
        .ok_or_else(|| Error::Precondition("Casimir eigenvalue is not polynomial".into()))?
        .scale(&shifted.recip());
    let dt = &setup.poly(setup.t(0)) - &setup.poly(setup.t(1));
    let psi = TwistedFunction::power(&dt, &gamma)?.try_mul(&position)?;

    let mut two_point = Vec::new();
    let pts2: Vec<(usize, RationalFunction)> = (0..2).map(|a| (setup.xi(a), w.clone())).collect();
    for (name, op) in ["ward:e", "ward:h", "ward:f"].iter().zip(ward_ops(&pts2)?.iter()) {
        two_point.push(IdentityStatus::new(*name, op.apply(&psi)?));
    }
    let pts = psi_points(&setup);
    for i in 0..2 {
        let op = kz_op(i, &pts, &setup.level)?;
        two_point.push(IdentityStatus::new(format!("kz:{}", i + 1), op.apply(&psi)?));
    }

    let upsilon = hecke_transform(&setup, Mutation::None)?;
    let mut three_point = Vec::new();
    let ext = ward_ops_extended(&setup, &setup.extra_weight());
    for (name, op) in ["ward:e", "ward:h", "ward:te"].iter().zip(ext.iter()) {
        let r = op.apply(&upsilon)?.instantiate_jets(&psi)?;
        three_point.push(IdentityStatus::new(*name, r));
    }
    for i in 0..2 {
        let r = kz_residual(&setup, &upsilon, i, Mutation::None)?.instantiate_jets(&psi)?;
        three_point.push(IdentityStatus::new(format!("kz:{}", i + 1), r));
    }
    Ok(TwoPointReport {
        case: format!("two-point {}", params.describe()),
        casimir,
        psi,
        two_point,
        three_point,
        elapsed: start.elapsed(),
    })
}

/// The instantiated objects of a transport check before any reduction: the
/// transformed function, the (N+1)-point operators, the unprolonged N-point
/// relations and the raw residuals in the formal coordinates.
#[derive(Clone, Debug)]
pub struct TransportTranscript {
    pub setup_text: String,
    pub upsilon: TwistedFunction,
    pub operators: Vec<(String, DiffOp)>,
    pub relations: Vec<TwistedFunction>,
    pub residuals: Vec<(String, TwistedFunction)>,
}

/// Transcript of the Ward check, or of the KZ check at the points `kz`
/// (0-based) when it is given.
pub fn transport_transcript(
    params: &WeightParams,
    kz: Option<&[usize]>,
    mutation: Mutation,
) -> Result<TransportTranscript> {
    let setup = BlockSetup::new(params)?;
    if setup.n == 0 {
        return Err(Error::Precondition("transport needs N >= 1".into()));
    }
    check_mutation(&setup, mutation)?;
    let upsilon = hecke_transform(&setup, mutation)?;
    let relations = psi_relations(&setup, kz.is_some(), 0)?;
    let mut operators = Vec::new();
    match kz {
        None => {
            let ops = ward_ops_extended(&setup, &extra_weight(&setup, mutation));
            for (name, op) in ["ward:e", "ward:h", "ward:te"].iter().zip(ops) {
                operators.push((name.to_string(), op));
            }
        }
        Some(which) => {
            let mut points = psi_points(&setup);
            for (a, p) in points.iter_mut().enumerate() {
                p.0 = setup.x(a);
            }
            points.push((setup.x(setup.n), setup.t(setup.n), extra_weight(&setup, mutation)));
            for &i in which {
                if i >= setup.n {
                    return Err(Error::Precondition(format!("KZ point {} out of range 1..={}", i + 1, setup.n)));
                }
                operators.push((format!("kz:{}", i + 1), kz_op(i, &points, &setup.level)?));
            }
        }
    }
    let mut residuals = Vec::new();
    for (name, op) in &operators {
        let r = to_formal(&setup, &op.apply(&upsilon)?, mutation)?;
        residuals.push((name.clone(), r));
    }
    Ok(TransportTranscript {
        setup_text: format!("{} mutation={}", params.describe(), mutation.describe()),
        upsilon,
        operators,
        relations,
        residuals,
    })
}
