use std::collections::HashMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact_algebra::{LaurentPolynomial, ProjectiveLaurentMatrix, RationalFunction};
use crate::root_loop::LoopElement;

use super::lie::{affine_table, level, Letter, LieData, ModeElement, E, F, H};
use super::module::{apply_mode, ModuleState};
use super::sugawara::{sugawara_apply, transformed_sugawara};

/// `Ad(t^lambda)` on one mode, for `alpha(lambda) = p`.
pub fn spectral_flow_letter(l: Letter, p: i64) -> ModeElement {
    let lie = LieData::sl2();
    let shift = lie.root_degree(l.basis) * p;
    let mut out = ModeElement::letter(l.basis, l.mode + shift);
    if l.basis == H && l.mode == 0 {
        // kappa(lambda, h) = (p/2) kappa(h, h) = p
        out = out.add(&ModeElement::central(RationalFunction::from_int(&affine_table(), p)));
    }
    out
}

/// `Ad(t^lambda)` on the affine algebra; the central element is fixed.
pub fn spectral_flow(x: &ModeElement, p: i64) -> ModeElement {
    let mut out = ModeElement::central(x.central_coefficient().clone());
    for (l, c) in x.terms() {
        out = out.add(&spectral_flow_letter(*l, p).scale(c));
    }
    out
}

fn basis_matrix(basis: usize, mode: i64) -> [LaurentPolynomial; 4] {
    let table = affine_table();
    let z = LaurentPolynomial::zero(&table);
    let one = |s: i64| LaurentPolynomial::monomial(RationalFunction::from_int(&table, s), mode);
    match basis {
        E => [z.clone(), one(1), z.clone(), z],
        F => [z.clone(), z.clone(), one(1), z],
        _ => [one(1), z.clone(), z, one(-1)],
    }
}

fn mat_mul(a: &[LaurentPolynomial; 4], b: &[LaurentPolynomial; 4]) -> [LaurentPolynomial; 4] {
    [
        a[0].mul(&b[0]).add(&a[1].mul(&b[2])),
        a[0].mul(&b[1]).add(&a[1].mul(&b[3])),
        a[2].mul(&b[0]).add(&a[3].mul(&b[2])),
        a[2].mul(&b[1]).add(&a[3].mul(&b[3])),
    ]
}

/// Traceless part of a Laurent matrix written in modes.
pub fn matrix_to_modes(m: &[LaurentPolynomial; 4]) -> ModeElement {
    let table = affine_table();
    let half = RationalFunction::from_scalar(&table, crate::exact_algebra::ratio(1, 2));
    let mut out = ModeElement::zero();
    for (e, c) in m[1].terms() {
        out.add_letter(Letter::new(E, e), c.clone());
    }
    for (e, c) in m[2].terms() {
        out.add_letter(Letter::new(F, e), c.clone());
    }
    for (e, c) in m[0].sub(&m[3]).terms() {
        out.add_letter(Letter::new(H, e), c * &half);
    }
    out
}

fn trace_residue(m: &[LaurentPolynomial; 4]) -> RationalFunction {
    &m[0].coefficient(-1) + &m[3].coefficient(-1)
}

/// Loop-group element realized over the affine coefficient table, with its
/// inverse and logarithmic derivative `g^{-1} d_t g`.
pub struct AdjointData {
    g: [LaurentPolynomial; 4],
    g_inv: [LaurentPolynomial; 4],
    log_derivative: [LaurentPolynomial; 4],
    memo: HashMap<Letter, ModeElement>,
}

impl AdjointData {
    pub fn new(g: &LoopElement) -> Result<Self> {
        let table = affine_table();
        let realized = g.realize()?;
        let embed = |m: &ProjectiveLaurentMatrix| -> Result<[LaurentPolynomial; 4]> {
            let mut out: Vec<LaurentPolynomial> = Vec::with_capacity(4);
            for e in m.entries() {
                let mut lp = LaurentPolynomial::zero(&table);
                for (exp, c) in e.terms() {
                    lp = lp.add(&LaurentPolynomial::monomial(c.embed(&table)?, exp));
                }
                out.push(lp);
            }
            Ok([out[0].clone(), out[1].clone(), out[2].clone(), out[3].clone()])
        };
        let gm = embed(&realized)?;
        let g_inv = embed(&realized.inverse()?)?;
        let dg = gm.clone().map(|e| e.derivative());
        let log_derivative = mat_mul(&g_inv, &dg);
        Ok(AdjointData { g: gm, g_inv, log_derivative, memo: HashMap::new() })
    }

    /// `Ad(g)(a_m) = g a_m g^{-1} + res_0 kappa(g^{-1} d_t g, a_m) K`.
    pub fn letter(&mut self, l: Letter) -> ModeElement {
        if let Some(hit) = self.memo.get(&l) {
            return hit.clone();
        }
        let a = basis_matrix(l.basis, l.mode);
        let conj = mat_mul(&mat_mul(&self.g, &a), &self.g_inv);
        let mut out = matrix_to_modes(&conj);
        // kappa is the trace form on 2x2 matrices
        let residue = trace_residue(&mat_mul(&self.log_derivative, &a));
        out = out.add(&ModeElement::central(residue));
        self.memo.insert(l, out.clone());
        out
    }

    pub fn apply(&mut self, x: &ModeElement) -> ModeElement {
        let mut out = ModeElement::central(x.central_coefficient().clone());
        for (l, c) in x.terms() {
            out = out.add(&self.letter(*l).scale(c));
        }
        out
    }

    /// Largest shift between a mode and the modes of its image.
    pub fn mode_spread(&mut self) -> i64 {
        let mut spread = 0;
        for b in 0..3 {
            let l = Letter::new(b, 0);
            for (x, _) in self.letter(l).terms() {
                spread = spread.max(x.mode.abs());
            }
        }
        spread
    }

    /// `t^{n+1} (d_t g) g^{-1}` written in modes.
    pub fn sugawara_correction(&self, n: i64) -> ModeElement {
        let dg = self.g.clone().map(|e| e.derivative());
        let m = mat_mul(&dg, &self.g_inv).map(|e| e.shift(n + 1));
        matrix_to_modes(&m)
    }
}

/// `Ad(g)` on the affine algebra.
pub fn ad_loop(g: &LoopElement, x: &ModeElement) -> Result<ModeElement> {
    Ok(AdjointData::new(g)?.apply(x))
}

/// Both sides of one conjugation identity applied to a state.
#[derive(Clone, Debug)]
pub struct ConjugationCheck {
    pub lhs: ModuleState,
    pub rhs: ModuleState,
}

impl ConjugationCheck {
    pub fn holds(&self) -> bool {
        self.lhs.sub(&self.rhs).is_zero()
    }
}

/// `Ad(g) S_n v = (S_n + t^{n+1} (d_t g) g^{-1}) v` for `g = exp(a x t^j)`.
pub fn check_conjugation_nilpotent(
    a: &crate::exact_algebra::Scalar,
    positive: bool,
    j: i64,
    n: i64,
    v: &ModuleState,
) -> Result<ConjugationCheck> {
    if j < 1 {
        return Err(Error::Precondition(format!("exp(a x t^j) needs j >= 1, got {j}")));
    }
    let flavor = crate::exact_algebra::Flavor::Pgl2;
    let g = if positive {
        LoopElement::exp_e(a.clone(), j, flavor)
    } else {
        LoopElement::exp_f(a.clone(), j, flavor)
    };
    let mut data = AdjointData::new(&g)?;
    let spread = if a.is_zero() { 0 } else { 2 * j };
    let lhs = transformed_sugawara(n, v, spread, &mut |l| Ok(data.letter(l)))?;
    let data = AdjointData::new(&g)?;
    let rhs = sugawara_apply(n, v)?.add(&apply_mode(&data.sugawara_correction(n), v));
    Ok(ConjugationCheck { lhs, rhs })
}

pub fn verify_conjugation_nilpotent(
    a: &crate::exact_algebra::Scalar,
    positive: bool,
    j: i64,
    n: i64,
    v: &ModuleState,
) -> Result<bool> {
    Ok(check_conjugation_nilpotent(a, positive, j, n, v)?.holds())
}

/// `Ad(t^lambda) S_n v = (S_n + lambda_n + delta_{n,0} (k/2) kappa(lambda, lambda)) v`
/// for `alpha(lambda) = p`.
pub fn check_conjugation_coweight(p: i64, n: i64, v: &ModuleState) -> Result<ConjugationCheck> {
    let table = affine_table();
    let lhs = transformed_sugawara(n, v, p.abs(), &mut |l| Ok(spectral_flow_letter(l, p)))?;
    // lambda = (p/2) h, so lambda_n = (p/2) h_n and kappa(lambda, lambda) = p^2/2
    let lambda_n = ModeElement::letter(H, n)
        .scale(&RationalFunction::from_scalar(&table, crate::exact_algebra::ratio(p, 2)));
    let mut rhs = sugawara_apply(n, v)?.add(&apply_mode(&lambda_n, v));
    if n == 0 {
        let c = level().scale(&crate::exact_algebra::ratio(p * p, 4));
        rhs = rhs.add(&v.scale(&c));
    }
    Ok(ConjugationCheck { lhs, rhs })
}

pub fn verify_conjugation_coweight(p: i64, n: i64, v: &ModuleState) -> Result<bool> {
    Ok(check_conjugation_coweight(p, n, v)?.holds())
}
