use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use num_traits::Zero;

use crate::exact_algebra::{int, ratio, RationalFunction, Scalar, Table, VarTable};

/// Structure constants of a simple Lie algebra in a fixed basis.
pub struct LieData {
    names: Vec<&'static str>,
    /// `bracket[a][b]` lists `(c, coefficient)` with `[a, b] = sum coefficient * c`.
    bracket: Vec<Vec<Vec<(usize, Scalar)>>>,
    kappa: Vec<Vec<Scalar>>,
    /// Dual basis `I^j` with respect to `kappa`, as combinations of the basis.
    dual: Vec<Vec<(usize, Scalar)>>,
    /// Root grading as a multiple of the simple root (rank one).
    root_degree: Vec<i64>,
    dual_coxeter: i64,
}

pub const E: usize = 0;
pub const H: usize = 1;
pub const F: usize = 2;

impl LieData {
    /// sl2 with `[e,f] = h`, `[h,e] = 2e`, `[h,f] = -2f`, `kappa(e,f) = 1`,
    /// `kappa(h,h) = 2`.
    pub fn sl2() -> &'static LieData {
        static DATA: OnceLock<LieData> = OnceLock::new();
        DATA.get_or_init(|| {
            let mut bracket = vec![vec![Vec::new(); 3]; 3];
            bracket[E][F] = vec![(H, int(1))];
            bracket[F][E] = vec![(H, int(-1))];
            bracket[H][E] = vec![(E, int(2))];
            bracket[E][H] = vec![(E, int(-2))];
            bracket[H][F] = vec![(F, int(-2))];
            bracket[F][H] = vec![(F, int(2))];
            let mut kappa = vec![vec![Scalar::zero(); 3]; 3];
            kappa[E][F] = int(1);
            kappa[F][E] = int(1);
            kappa[H][H] = int(2);
            LieData {
                names: vec!["e", "h", "f"],
                bracket,
                kappa,
                dual: vec![vec![(F, int(1))], vec![(H, ratio(1, 2))], vec![(E, int(1))]],
                root_degree: vec![1, 0, -1],
                dual_coxeter: 2,
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, a: usize) -> &'static str {
        self.names[a]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| *n == name)
    }

    pub fn bracket(&self, a: usize, b: usize) -> &[(usize, Scalar)] {
        &self.bracket[a][b]
    }

    pub fn kappa(&self, a: usize, b: usize) -> &Scalar {
        &self.kappa[a][b]
    }

    pub fn dual(&self, a: usize) -> &[(usize, Scalar)] {
        &self.dual[a]
    }

    pub fn root_degree(&self, a: usize) -> i64 {
        self.root_degree[a]
    }

    pub fn dual_coxeter(&self) -> i64 {
        self.dual_coxeter
    }

    pub fn is_cartan(&self, a: usize) -> bool {
        self.root_degree[a] == 0
    }

    /// `kappa(x, y)` for combinations of basis elements.
    pub fn kappa_combination(&self, x: &[(usize, Scalar)], y: &[(usize, Scalar)]) -> Scalar {
        let mut s = Scalar::zero();
        for (a, ca) in x {
            for (b, cb) in y {
                s += ca * cb * &self.kappa[*a][*b];
            }
        }
        s
    }
}

impl fmt::Debug for LieData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LieData{:?}", self.names)
    }
}

/// Coefficient table of every affine computation: the level `k`.
pub fn affine_table() -> Table {
    static TABLE: OnceLock<Table> = OnceLock::new();
    TABLE.get_or_init(|| VarTable::new(&["k"]).unwrap()).clone()
}

pub fn level() -> RationalFunction {
    RationalFunction::var(&affine_table(), "k").unwrap()
}

/// The mode `a t^m`; ordered by mode, then by basis index.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Letter {
    pub basis: usize,
    pub mode: i64,
}

impl Letter {
    pub fn new(basis: usize, mode: i64) -> Self {
        Letter { basis, mode }
    }

    pub fn to_text(&self) -> String {
        format!("{}[{}]", LieData::sl2().name(self.basis), self.mode)
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.mode.cmp(&other.mode).then(self.basis.cmp(&other.basis))
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Element of the affine algebra: a finite combination of modes plus a
/// multiple of the central element.
#[derive(Clone, PartialEq)]
pub struct ModeElement {
    terms: BTreeMap<Letter, RationalFunction>,
    central: RationalFunction,
}

impl ModeElement {
    pub fn zero() -> Self {
        ModeElement {
            terms: BTreeMap::new(),
            central: RationalFunction::zero(&affine_table()),
        }
    }

    pub fn letter(basis: usize, mode: i64) -> Self {
        let mut x = Self::zero();
        x.add_letter(Letter::new(basis, mode), RationalFunction::one(&affine_table()));
        x
    }

    pub fn central(c: RationalFunction) -> Self {
        ModeElement { terms: BTreeMap::new(), central: c }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Letter, &RationalFunction)> {
        self.terms.iter()
    }

    pub fn central_coefficient(&self) -> &RationalFunction {
        &self.central
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.central.is_zero()
    }

    pub fn add_letter(&mut self, l: Letter, c: RationalFunction) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(l) {
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

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (l, c) in &other.terms {
            out.add_letter(*l, c.clone());
        }
        out.central = &out.central + &other.central;
        out
    }

    pub fn scale(&self, c: &RationalFunction) -> Self {
        let mut out = Self::zero();
        for (l, cc) in &self.terms {
            out.add_letter(*l, cc * c);
        }
        out.central = &self.central * c;
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&RationalFunction::from_int(&affine_table(), -1)))
    }

    pub fn to_text(&self) -> String {
        let mut parts: Vec<String> = self
            .terms
            .iter()
            .map(|(l, c)| {
                if c.is_one() {
                    l.to_text()
                } else if c.is_atom() {
                    format!("{c}*{}", l.to_text())
                } else {
                    format!("({c})*{}", l.to_text())
                }
            })
            .collect();
        if !self.central.is_zero() {
            parts.push(if self.central.is_atom() {
                format!("{}*K", self.central)
            } else {
                format!("({})*K", self.central)
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl fmt::Debug for ModeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// `[a_m, b_n] = [a,b]_{m+n} + m delta_{m+n,0} kappa(a,b) K`.
pub fn bracket_letters(x: Letter, y: Letter) -> ModeElement {
    let lie = LieData::sl2();
    let table = affine_table();
    let mut out = ModeElement::zero();
    for (c, coef) in lie.bracket(x.basis, y.basis) {
        out.add_letter(Letter::new(*c, x.mode + y.mode), RationalFunction::from_scalar(&table, coef.clone()));
    }
    if x.mode + y.mode == 0 {
        let c = lie.kappa(x.basis, y.basis) * int(x.mode);
        out.central = RationalFunction::from_scalar(&table, c);
    }
    out
}

pub fn bracket_modes(x: &ModeElement, y: &ModeElement) -> ModeElement {
    let mut out = ModeElement::zero();
    for (lx, cx) in &x.terms {
        for (ly, cy) in &y.terms {
            out = out.add(&bracket_letters(*lx, *ly).scale(&(cx * cy)));
        }
    }
    out
}
