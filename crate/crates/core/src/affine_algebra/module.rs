use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::exact_algebra::{RationalFunction, Scalar};

use super::lie::{affine_table, bracket_letters, level, Letter, LieData, ModeElement, E, F, H};

/// Cyclic vector of a module, labelled by `p = alpha(lambda)` for a rank-one
/// coweight `lambda = (p/2) alpha_check`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Vacuum {
    /// Vacuum module twisted by `t^lambda`: `e_m` kills it for `m >= p`,
    /// `f_m` for `m >= -p`, `h_m` for `m > 0`, and `h_0` acts by `-p k`.
    Twisted(i64),
    /// Module induced from the lowest-weight line of weight `-p k` for the
    /// positive-mode subalgebra together with `f_0`; `e_m` kills it for
    /// `m >= 1` and `f_m` for `m >= 0`.
    Induced(i64),
}

/// How a mode acts on the cyclic vector.
#[derive(Clone, Debug, PartialEq)]
pub enum Action {
    Annihilates,
    Scalar(RationalFunction),
    Creates,
}

impl Vacuum {
    pub fn untwisted() -> Self {
        Vacuum::Twisted(0)
    }

    pub fn pairing(&self) -> i64 {
        match self {
            Vacuum::Twisted(p) | Vacuum::Induced(p) => *p,
        }
    }

    /// Lowest annihilating mode for `basis`.
    pub fn threshold(&self, basis: usize) -> i64 {
        match (*self, basis) {
            (_, H) => 1,
            (Vacuum::Twisted(p), E) => p,
            (Vacuum::Twisted(p), _) => -p,
            (Vacuum::Induced(_), E) => 1,
            (Vacuum::Induced(_), _) => 0,
        }
    }

    pub fn action(&self, l: Letter) -> Action {
        if l.basis == H && l.mode == 0 {
            return Action::Scalar(level().scale(&crate::exact_algebra::int(-self.pairing())));
        }
        if l.mode >= self.threshold(l.basis) {
            Action::Annihilates
        } else {
            Action::Creates
        }
    }

    /// Grading in which every annihilator has negative or zero degree and
    /// every creation letter has nonnegative degree.
    pub fn degree(&self, l: Letter) -> i64 {
        let p = self.pairing();
        match l.basis {
            E => p - l.mode,
            F => -p - l.mode,
            _ => -l.mode,
        }
    }

    /// Weight as a multiple of the simple root.
    pub fn weight(&self, l: Letter) -> i64 {
        LieData::sl2().root_degree(l.basis)
    }

    pub fn to_text(&self) -> String {
        let p = self.pairing();
        let lambda = match p {
            0 => String::new(),
            2 => "lambda=acheck".into(),
            -2 => "lambda=-acheck".into(),
            _ if p % 2 == 0 => format!("lambda={}*acheck", p / 2),
            _ => format!("lambda={p}/2*acheck"),
        };
        let name = match self {
            Vacuum::Twisted(_) => "vac",
            Vacuum::Induced(_) => "ind",
        };
        if lambda.is_empty() {
            name.into()
        } else {
            format!("{name}({lambda})")
        }
    }
}

/// PBW monomial: letters in ascending order applied to the cyclic vector.
pub type Word = Vec<Letter>;

/// Vector of a module written in the PBW basis.
#[derive(Clone, PartialEq)]
pub struct ModuleState {
    vacuum: Vacuum,
    terms: BTreeMap<Word, RationalFunction>,
}

impl ModuleState {
    pub fn zero(vacuum: Vacuum) -> Self {
        ModuleState { vacuum, terms: BTreeMap::new() }
    }

    pub fn vacuum(vacuum: Vacuum) -> Self {
        Self::word(vacuum, Vec::new())
    }

    /// A sorted creation word applied to the cyclic vector.
    pub fn word(vacuum: Vacuum, mut w: Word) -> Self {
        w.sort();
        let mut s = Self::zero(vacuum);
        s.add_term(w, RationalFunction::one(&affine_table()));
        s
    }

    pub fn cyclic(&self) -> Vacuum {
        self.vacuum
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &RationalFunction)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, w: &Word) -> RationalFunction {
        self.terms.get(w).cloned().unwrap_or_else(|| RationalFunction::zero(&affine_table()))
    }

    pub fn add_term(&mut self, w: Word, c: RationalFunction) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &ModuleState, c: &RationalFunction) {
        for (w, cw) in &other.terms {
            self.add_term(w.clone(), cw * c);
        }
    }

    pub fn add(&self, other: &ModuleState) -> ModuleState {
        let mut out = self.clone();
        out.add_scaled(other, &RationalFunction::one(&affine_table()));
        out
    }

    pub fn sub(&self, other: &ModuleState) -> ModuleState {
        let mut out = self.clone();
        out.add_scaled(other, &RationalFunction::from_int(&affine_table(), -1));
        out
    }

    pub fn scale(&self, c: &RationalFunction) -> ModuleState {
        let mut out = ModuleState::zero(self.vacuum);
        out.add_scaled(self, c);
        out
    }

    /// Largest degree of a word in this state.
    pub fn degree(&self) -> i64 {
        self.terms
            .keys()
            .map(|w| word_degree(self.vacuum, w))
            .max()
            .unwrap_or(0)
    }

    /// Replace the symbolic level by a number.
    pub fn specialize_level(&self, k: &Scalar) -> crate::Result<ModuleState> {
        if *k == crate::exact_algebra::int(-LieData::sl2().dual_coxeter()) {
            return Err(crate::Error::CriticalLevel);
        }
        let value = RationalFunction::from_scalar(&affine_table(), k.clone());
        let mut out = ModuleState::zero(self.vacuum);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), c.substitute(&[(0, value.clone())])?);
        }
        Ok(out)
    }

    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let cyc = self.vacuum.to_text();
        self.terms
            .iter()
            .rev()
            .map(|(w, c)| {
                let mut body: Vec<String> = w.iter().map(|l| l.to_text()).collect();
                body.push(cyc.clone());
                let body = body.join("*");
                if c.is_one() {
                    body
                } else if c.is_atom() {
                    format!("{c}*{body}")
                } else {
                    format!("({c})*{body}")
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Debug for ModuleState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

pub fn word_degree(vacuum: Vacuum, w: &[Letter]) -> i64 {
    w.iter().map(|l| vacuum.degree(*l)).sum()
}

pub fn word_weight(vacuum: Vacuum, w: &[Letter]) -> i64 {
    w.iter().map(|l| vacuum.weight(*l)).sum()
}

type MemoKey = (Vacuum, Letter, Word);

thread_local! {
    static MEMO: RefCell<HashMap<MemoKey, ModuleState>> = RefCell::new(HashMap::new());
}

/// Act by a single mode on a PBW monomial, returning the result in PBW form.
pub fn apply_letter(vacuum: Vacuum, x: Letter, word: &[Letter]) -> ModuleState {
    let key = (vacuum, x, word.to_vec());
    if let Some(hit) = MEMO.with(|m| m.borrow().get(&key).cloned()) {
        return hit;
    }
    let out = apply_letter_uncached(vacuum, x, word);
    MEMO.with(|m| m.borrow_mut().insert(key, out.clone()));
    out
}

fn apply_letter_uncached(vacuum: Vacuum, x: Letter, word: &[Letter]) -> ModuleState {
    let Some((&y, rest)) = word.split_first() else {
        return match vacuum.action(x) {
            Action::Annihilates => ModuleState::zero(vacuum),
            Action::Scalar(c) => ModuleState::vacuum(vacuum).scale(&c),
            Action::Creates => ModuleState::word(vacuum, vec![x]),
        };
    };
    if vacuum.action(x) == Action::Creates && x <= y {
        let mut w = Vec::with_capacity(word.len() + 1);
        w.push(x);
        w.extend_from_slice(word);
        return ModuleState::word(vacuum, w);
    }
    // x y rest = y (x rest) + [x, y] rest
    let mut out = ModuleState::zero(vacuum);
    let inner = apply_letter(vacuum, x, rest);
    for (w, c) in inner.terms() {
        out.add_scaled(&apply_letter(vacuum, y, w), c);
    }
    let br = bracket_letters(x, y);
    for (z, c) in br.terms() {
        out.add_scaled(&apply_letter(vacuum, *z, rest), c);
    }
    let central = br.central_coefficient();
    if !central.is_zero() {
        out.add_scaled(&ModuleState::word(vacuum, rest.to_vec()), &(central * &level()));
    }
    out
}

/// Act by an element of the affine algebra; the central element acts by `k`.
pub fn apply_mode(x: &ModeElement, v: &ModuleState) -> ModuleState {
    let vacuum = v.cyclic();
    let mut out = ModuleState::zero(vacuum);
    for (l, c) in x.terms() {
        for (w, cw) in v.terms() {
            out.add_scaled(&apply_letter(vacuum, *l, w), &(c * cw));
        }
    }
    let central = x.central_coefficient();
    if !central.is_zero() {
        out.add_scaled(v, &(central * &level()));
    }
    out
}

pub fn apply_single(x: Letter, v: &ModuleState) -> ModuleState {
    let vacuum = v.cyclic();
    let mut out = ModuleState::zero(vacuum);
    for (w, cw) in v.terms() {
        out.add_scaled(&apply_letter(vacuum, x, w), cw);
    }
    out
}

/// All creation words of exactly the given degree and weight.
pub fn creation_words(vacuum: Vacuum, degree: i64, weight: i64) -> Vec<Word> {
    let lie = LieData::sl2();
    // Creation letters with degree at most `degree`, ascending.
    let p = vacuum.pairing();
    let lo = -(degree + p.abs() + 2);
    let mut letters: Vec<Letter> = Vec::new();
    for mode in lo..=(p.abs() + 1) {
        for b in 0..lie.dim() {
            let l = Letter::new(b, mode);
            if vacuum.action(l) == Action::Creates {
                let d = vacuum.degree(l);
                if (0..=degree).contains(&d) {
                    letters.push(l);
                }
            }
        }
    }
    letters.sort();
    // Degree-zero letters change only the weight; bound their multiplicity by it.
    let max_zero = weight.unsigned_abs() as usize + degree as usize + 1;
    let mut out = Vec::new();
    let mut current = Vec::new();
    #[allow(clippy::too_many_arguments)]
    fn rec(
        vacuum: Vacuum,
        letters: &[Letter],
        start: usize,
        degree_left: i64,
        weight_left: i64,
        zero_budget: usize,
        current: &mut Vec<Letter>,
        out: &mut Vec<Word>,
    ) {
        if degree_left == 0 && weight_left == 0 {
            out.push(current.clone());
        }
        for i in start..letters.len() {
            let l = letters[i];
            let d = vacuum.degree(l);
            if d > degree_left {
                continue;
            }
            let zero = d == 0;
            if zero && zero_budget == 0 {
                continue;
            }
            current.push(l);
            rec(
                vacuum,
                letters,
                i,
                degree_left - d,
                weight_left - vacuum.weight(l),
                if zero { zero_budget - 1 } else { zero_budget },
                current,
                out,
            );
            current.pop();
        }
    }
    rec(vacuum, &letters, 0, degree, weight, max_zero, &mut current, &mut out);
    out
}

/// PBW basis states of degree at most `max_degree`, by degree then weight.
pub fn pbw_basis(vacuum: Vacuum, max_degree: i64) -> Vec<ModuleState> {
    let mut out = Vec::new();
    for d in 0..=max_degree {
        for w in -(2 * d + 2 * vacuum.pairing().abs())..=(2 * d + 2 * vacuum.pairing().abs()) {
            for word in creation_words(vacuum, d, w) {
                out.push(ModuleState::word(vacuum, word));
            }
        }
    }
    out
}
