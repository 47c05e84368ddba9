use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::root_loop::Coweight;

use super::lie::{level, Letter, LieData, F, H};
use super::module::{
    apply_letter, apply_single, creation_words, word_degree, word_weight, Action, ModuleState,
    Vacuum, Word,
};

/// Incrementally built basis of a subspace of a module, kept fully reduced.
struct Span {
    rows: BTreeMap<Word, ModuleState>,
}

impl Span {
    fn new() -> Self {
        Span { rows: BTreeMap::new() }
    }

    fn reduce(&self, v: &ModuleState) -> ModuleState {
        let mut r = v.clone();
        for (pivot, row) in &self.rows {
            let c = r.coefficient(pivot);
            if !c.is_zero() {
                r = r.sub(&row.scale(&c));
            }
        }
        r
    }

    /// Adds `v`; returns whether the span grew.
    fn insert(&mut self, v: &ModuleState) -> bool {
        let r = self.reduce(v);
        let Some((pivot, c)) = r.terms().next_back().map(|(w, c)| (w.clone(), c.clone())) else {
            return false;
        };
        let row = r.scale(&c.inv().expect("pivot coefficient is nonzero"));
        for other in self.rows.values_mut() {
            let c = other.coefficient(&pivot);
            if !c.is_zero() {
                *other = other.sub(&row.scale(&c));
            }
        }
        self.rows.insert(pivot, row);
        true
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    fn vectors(&self) -> impl Iterator<Item = &ModuleState> {
        self.rows.values()
    }
}

/// Dimensions of one bigraded piece in both presentations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedDimension {
    pub degree: i64,
    pub weight: i64,
    pub twisted: usize,
    pub quotient: usize,
}

/// Outcome of the minuscule presentation check.
#[derive(Clone, Debug)]
pub struct MinusculeReport {
    pub pairing: i64,
    /// The lowest root vector at mode `alpha(lambda)` kills the twisted vacuum.
    pub lowest_root_kills: bool,
    /// `h_0` acts on the twisted vacuum by `-kappa(lambda, h) k`.
    pub cartan_scalar: bool,
    /// Every mode `a_m` with `m >= 1` kills the twisted vacuum.
    pub positive_loops_kill: bool,
    /// Bigraded dimensions of the twisted vacuum and of `M / N`, where `N` is
    /// generated by `f_{-1}` applied to the lowest-weight vector.
    pub dimensions: Vec<GradedDimension>,
    /// The same comparison with `N` generated by `e_{-1}` instead.
    pub alternative_generator_matches: bool,
}

impl MinusculeReport {
    pub fn dimensions_match(&self) -> bool {
        self.dimensions.iter().all(|d| d.twisted == d.quotient)
    }

    pub fn passed(&self) -> bool {
        self.lowest_root_kills && self.cartan_scalar && self.positive_loops_kill && self.dimensions_match()
    }
}

fn apply_word(word: &[Letter], v: &ModuleState) -> ModuleState {
    word.iter().rev().fold(v.clone(), |acc, l| apply_single(*l, &acc))
}

fn annihilators(vacuum: Vacuum, min_degree: i64) -> Vec<Letter> {
    let p = vacuum.pairing().abs();
    let mut out = Vec::new();
    for mode in -(p + 2)..=(p - min_degree + 2) {
        for b in 0..LieData::sl2().dim() {
            let l = Letter::new(b, mode);
            if vacuum.action(l) != Action::Creates && vacuum.degree(l) >= min_degree && vacuum.degree(l) <= 0 {
                out.push(l);
            }
        }
    }
    out
}

fn homogeneous(v: &ModuleState) -> (i64, i64) {
    let (w, _) = v.terms().next().expect("nonzero vector");
    (word_degree(v.cyclic(), w), word_weight(v.cyclic(), w))
}

/// Submodule generated by `u`, as bigraded dimensions up to `max_degree`.
fn submodule_dimensions(
    u: &ModuleState,
    max_degree: i64,
    weights: std::ops::RangeInclusive<i64>,
) -> BTreeMap<(i64, i64), usize> {
    let vacuum = u.cyclic();
    // Closure of u under the annihilating subalgebra; it stays in degree <= deg(u).
    let mut closure: BTreeMap<(i64, i64), Span> = BTreeMap::new();
    let mut queue = vec![u.clone()];
    while let Some(x) = queue.pop() {
        if x.is_zero() {
            continue;
        }
        let key = homogeneous(&x);
        let span = closure.entry(key).or_insert_with(Span::new);
        if !span.insert(&x) {
            continue;
        }
        for l in annihilators(vacuum, -key.0) {
            queue.push(apply_single(l, &x));
        }
    }
    let mut out = BTreeMap::new();
    for d in 0..=max_degree {
        for w in weights.clone() {
            let mut span = Span::new();
            for ((dc, wc), basis) in &closure {
                if *dc > d {
                    continue;
                }
                for y in creation_words(vacuum, d - dc, w - wc) {
                    for c in basis.vectors() {
                        span.insert(&apply_word(&y, c));
                    }
                }
            }
            out.insert((d, w), span.rank());
        }
    }
    out
}

/// Checks the lowest-weight presentation of the twisted vacuum for a
/// minuscule dominant rank-one coweight, comparing bigraded dimensions up to
/// `max_degree`.
pub fn verify_minuscule_presentation(lambda: &Coweight, max_degree: i64) -> Result<MinusculeReport> {
    let p = lambda.rank_one_pairing()?;
    if p == 0 || !lambda.is_minuscule() {
        return Err(Error::NotMinuscule(lambda.to_text()));
    }
    let twisted = Vacuum::Twisted(p);
    let vac = ModuleState::vacuum(twisted);
    let lowest_root_kills = apply_letter(twisted, Letter::new(F, p), &[]).is_zero();
    let expected = vac.scale(&level().scale(&crate::exact_algebra::int(-p)));
    let cartan_scalar = apply_letter(twisted, Letter::new(H, 0), &[]) == expected;
    let positive_loops_kill = (1..=max_degree.max(1) + 2)
        .all(|m| (0..3).all(|b| apply_letter(twisted, Letter::new(b, m), &[]).is_zero()));

    let induced = Vacuum::Induced(p);
    let lowest = ModuleState::vacuum(induced);
    let bound = 2 * max_degree + 2;
    let weights = -bound..=bound;
    let n_dims = submodule_dimensions(&apply_single(Letter::new(F, -1), &lowest), max_degree, weights.clone());
    let alt_dims = submodule_dimensions(
        &apply_single(Letter::new(super::lie::E, -1), &lowest),
        max_degree,
        weights.clone(),
    );
    let mut dimensions = Vec::new();
    let mut alternative_generator_matches = true;
    for d in 0..=max_degree {
        for w in weights.clone() {
            let v_dim = creation_words(twisted, d, w).len();
            let m_dim = creation_words(induced, d, w).len();
            let quotient = m_dim - n_dims[&(d, w)];
            if m_dim - alt_dims[&(d, w)] != v_dim {
                alternative_generator_matches = false;
            }
            if v_dim != 0 || quotient != 0 {
                dimensions.push(GradedDimension { degree: d, weight: w, twisted: v_dim, quotient });
            }
        }
    }
    Ok(MinusculeReport {
        pairing: p,
        lowest_root_kills,
        cartan_scalar,
        positive_loops_kill,
        dimensions,
        alternative_generator_matches,
    })
}
