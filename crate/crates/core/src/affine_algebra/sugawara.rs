use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::exact_algebra::{int, RationalFunction};

use super::lie::{affine_table, level, Letter, LieData, ModeElement};
use super::module::{apply_mode, ModuleState, Vacuum};

/// `1 / (2 (k + h_check))`.
pub fn sugawara_prefactor() -> RationalFunction {
    let lie = LieData::sl2();
    let table = affine_table();
    let shifted = &level() + &RationalFunction::from_int(&table, lie.dual_coxeter());
    (&shifted * &RationalFunction::from_int(&table, 2))
        .inv()
        .expect("k + h_check is nonzero")
}

/// Largest total mode drop among the words of `v`.
pub fn depth(v: &ModuleState) -> i64 {
    v.terms()
        .map(|(w, _)| w.iter().map(|l| -l.mode).sum::<i64>().max(0))
        .max()
        .unwrap_or(0)
}

/// Truncation bound for the Sugawara sum on `v`. A mode whose letters all lie
/// beyond this bound has degree below `-degree(v)` and so kills `v`.
pub fn truncation_bound(v: &ModuleState, n: i64, mode_spread: i64) -> i64 {
    let p = v.cyclic().pairing().abs();
    depth(v).max(v.degree()) + n.abs() + p + mode_spread + 1
}

/// The `m`-th normally ordered term of the Sugawara sum for `S_n`, with
/// every mode first passed through `transform`.
fn sugawara_term(
    n: i64,
    m: i64,
    v: &ModuleState,
    transform: &mut dyn FnMut(Letter) -> Result<ModeElement>,
) -> Result<ModuleState> {
    let lie = LieData::sl2();
    let table = affine_table();
    let mut out = ModuleState::zero(v.cyclic());
    for a in 0..lie.dim() {
        let x = transform(Letter::new(a, m))?;
        let mut y = ModeElement::zero();
        for (b, c) in lie.dual(a) {
            let yb = transform(Letter::new(*b, n - m))?;
            y = y.add(&yb.scale(&RationalFunction::from_scalar(&table, c.clone())));
        }
        let term = if m < 0 {
            apply_mode(&x, &apply_mode(&y, v))
        } else {
            apply_mode(&y, &apply_mode(&x, v))
        };
        out = out.add(&term);
    }
    Ok(out)
}

/// Sugawara sum with every mode transformed, truncated at the bound and
/// certified by checking that the two adjacent discarded terms vanish.
pub fn transformed_sugawara(
    n: i64,
    v: &ModuleState,
    mode_spread: i64,
    transform: &mut dyn FnMut(Letter) -> Result<ModeElement>,
) -> Result<ModuleState> {
    let bound = truncation_bound(v, n, mode_spread);
    let mut sum = ModuleState::zero(v.cyclic());
    for m in -bound..=bound {
        sum = sum.add(&sugawara_term(n, m, v, transform)?);
    }
    for m in [-bound - 1, bound + 1] {
        if !sugawara_term(n, m, v, transform)?.is_zero() {
            return Err(Error::TruncationNotCertified(format!(
                "S_{n} term m={m} acts nontrivially on {}",
                v.to_text()
            )));
        }
    }
    Ok(sum.scale(&sugawara_prefactor()))
}

/// `S_n v` with the level kept symbolic.
pub fn sugawara_apply(n: i64, v: &ModuleState) -> Result<ModuleState> {
    transformed_sugawara(n, v, 0, &mut |l| Ok(ModeElement::letter(l.basis, l.mode)))
}

/// `S_n v` at a numeric level; the critical level is rejected.
pub fn sugawara_apply_at(n: i64, v: &ModuleState, k: &crate::exact_algebra::Scalar) -> Result<ModuleState> {
    if *k == int(-LieData::sl2().dual_coxeter()) {
        return Err(Error::CriticalLevel);
    }
    sugawara_apply(n, v)?.specialize_level(k)
}

/// Caches `S_n` on PBW words of one module.
pub struct SugawaraCache {
    vacuum: Vacuum,
    words: HashMap<(i64, Vec<Letter>), ModuleState>,
}

impl SugawaraCache {
    pub fn new(vacuum: Vacuum) -> Self {
        SugawaraCache { vacuum, words: HashMap::new() }
    }

    pub fn apply(&mut self, n: i64, v: &ModuleState) -> Result<ModuleState> {
        let mut out = ModuleState::zero(self.vacuum);
        for (w, c) in v.terms() {
            let key = (n, w.clone());
            let image = match self.words.get(&key) {
                Some(hit) => hit.clone(),
                None => {
                    let image = sugawara_apply(n, &ModuleState::word(self.vacuum, w.clone()))?;
                    self.words.insert(key, image.clone());
                    image
                }
            };
            out.add_scaled(&image, c);
        }
        Ok(out)
    }
}

/// Central charge `k dim(g) / (k + h_check)`.
pub fn central_charge() -> RationalFunction {
    let lie = LieData::sl2();
    let table = affine_table();
    let num = level().scale(&int(lie.dim() as i64));
    let den = &level() + &RationalFunction::from_int(&table, lie.dual_coxeter());
    (&num * &den.inv().expect("nonzero")).clone()
}
