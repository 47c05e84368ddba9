use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, Zero};

use super::datum::RootDatum;
use crate::error::{Error, Result};
use crate::exact_algebra::{int, scalar_text, Flavor, Scalar};

/// Coweight in the basis of fundamental coweights, so coordinate `i` is the
/// pairing `alpha_i(lambda)` with the `i`-th simple root.
///
/// The flavor is the lattice flag: `Sl2` (simply connected) restricts to the
/// coroot lattice, `Pgl2` (adjoint) allows the full coweight lattice.
#[derive(Clone, PartialEq, Eq)]
pub struct Coweight {
    datum: Arc<RootDatum>,
    coords: Vec<Scalar>,
    flavor: Flavor,
}

impl Coweight {
    pub fn new(datum: &Arc<RootDatum>, coords: Vec<Scalar>, flavor: Flavor) -> Result<Self> {
        if coords.len() != datum.rank() {
            return Err(Error::InvalidCoweight(format!(
                "expected {} coordinates, got {}",
                datum.rank(),
                coords.len()
            )));
        }
        if coords.iter().any(|c| !c.is_integer()) {
            return Err(Error::InvalidCoweight("simple-root pairings must be integers".into()));
        }
        let w = Coweight { datum: datum.clone(), coords, flavor };
        if flavor == Flavor::Sl2 && !w.in_coroot_lattice() {
            return Err(Error::InvalidCoweight(format!(
                "{w:?} is not in the coroot lattice required by the SL2 flavor"
            )));
        }
        Ok(w)
    }

    pub fn from_ints(datum: &Arc<RootDatum>, coords: &[i64], flavor: Flavor) -> Result<Self> {
        Self::new(datum, coords.iter().map(|&c| int(c)).collect(), flavor)
    }

    pub fn zero(datum: &Arc<RootDatum>, flavor: Flavor) -> Self {
        Coweight { datum: datum.clone(), coords: vec![Scalar::zero(); datum.rank()], flavor }
    }

    /// Rank-1 coweight `r * alpha^vee`, whose pairing with `alpha` is `2r`.
    pub fn from_coroot_multiple(r: Scalar, flavor: Flavor) -> Result<Self> {
        Self::new(&RootDatum::sl2(), vec![r * int(2)], flavor)
    }

    /// Rank-1 coweight with `alpha(lambda) = p`.
    pub fn rank_one(p: i64, flavor: Flavor) -> Result<Self> {
        Self::from_ints(&RootDatum::sl2(), &[p], flavor)
    }

    /// The coroot `alpha^vee` of a root given in simple-root coordinates.
    pub fn coroot(datum: &Arc<RootDatum>, alpha: &[i64], flavor: Flavor) -> Result<Self> {
        if !datum.is_root(alpha) {
            return Err(Error::Precondition(format!("{alpha:?} is not a root")));
        }
        let coords = (0..datum.rank())
            .map(|j| datum.root_on_coroot(&datum.simple_root(j), alpha))
            .collect();
        Self::new(datum, coords, flavor)
    }

    pub fn datum(&self) -> &Arc<RootDatum> {
        &self.datum
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    /// `alpha(lambda)` for a root in simple-root coordinates.
    pub fn pairing(&self, alpha: &[i64]) -> Scalar {
        alpha.iter().zip(&self.coords).map(|(&n, c)| c * int(n)).sum()
    }

    /// Pairing with the unique positive root of a rank-1 datum.
    pub fn rank_one_pairing(&self) -> Result<i64> {
        if self.datum.rank() != 1 {
            return Err(Error::Precondition("rank-1 coweight expected".into()));
        }
        Ok(self.coords[0].to_integer().try_into().unwrap())
    }

    pub fn is_dominant(&self) -> bool {
        self.coords.iter().all(|c| !c.is_negative())
    }

    /// Dominant with every positive-root pairing in `{0, 1}`.
    pub fn is_minuscule(&self) -> bool {
        self.datum.positive_roots().iter().all(|r| {
            let p = self.pairing(r);
            p.is_zero() || p == int(1)
        })
    }

    fn in_coroot_lattice(&self) -> bool {
        // Solve sum_i n_i * cartan[i] = coords over Q and test integrality.
        let r = self.datum.rank();
        let mut m: Vec<Vec<Scalar>> = (0..r)
            .map(|j| {
                let mut row: Vec<Scalar> = (0..r).map(|i| int(self.datum.cartan()[i][j])).collect();
                row.push(self.coords[j].clone());
                row
            })
            .collect();
        for col in 0..r {
            let piv = (col..r).find(|&i| !m[i][col].is_zero()).expect("Cartan matrix is invertible");
            m.swap(col, piv);
            let p = m[col][col].clone();
            for x in m[col].iter_mut() {
                *x = &*x / &p;
            }
            for i in 0..r {
                if i != col && !m[i][col].is_zero() {
                    let f = m[i][col].clone();
                    for c in 0..=r {
                        let d = &m[col][c] * &f;
                        m[i][c] -= d;
                    }
                }
            }
        }
        m.iter().all(|row| row[r].is_integer())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Coweight {
            datum: self.datum.clone(),
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
            flavor: self.flavor,
        })
    }

    pub fn scale(&self, c: &Scalar) -> Result<Self> {
        Self::new(&self.datum, self.coords.iter().map(|x| x * c).collect(), self.flavor)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        self.add(&other.scale(&int(-1))?)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.datum != other.datum {
            return Err(Error::Precondition("coweights of different root data".into()));
        }
        if self.flavor != other.flavor {
            return Err(Error::FlavorMismatch(format!("{} and {}", self.flavor, other.flavor)));
        }
        Ok(())
    }

    /// Simple reflection `s_i(lambda) = lambda - alpha_i(lambda) alpha_i^vee`.
    pub fn reflect(&self, i: usize) -> Self {
        let c = self.coords[i].clone();
        let coords = self
            .coords
            .iter()
            .enumerate()
            .map(|(j, x)| x - &c * int(self.datum.cartan()[i][j]))
            .collect();
        Coweight { datum: self.datum.clone(), coords, flavor: self.flavor }
    }

    /// The dominant coweight in the Weyl orbit, with the simple reflections
    /// applied (first to last) to reach it.
    pub fn dominant_rep(&self) -> (Coweight, Vec<usize>) {
        let mut cur = self.clone();
        let mut word = Vec::new();
        while let Some(i) = cur.coords.iter().position(|c| c.is_negative()) {
            cur = cur.reflect(i);
            word.push(i);
        }
        (cur, word)
    }

    /// Whole Weyl orbit by breadth-first search over simple reflections.
    pub fn weyl_orbit(&self) -> Vec<Coweight> {
        let mut seen: BTreeSet<Vec<Scalar>> = BTreeSet::new();
        let mut out = Vec::new();
        let mut queue = VecDeque::from([self.clone()]);
        seen.insert(self.coords.clone());
        while let Some(w) = queue.pop_front() {
            for i in 0..self.datum.rank() {
                let r = w.reflect(i);
                if seen.insert(r.coords.clone()) {
                    queue.push_back(r);
                }
            }
            out.push(w);
        }
        out
    }

    pub fn to_text(&self) -> String {
        let parts: Vec<String> = self.coords.iter().map(scalar_text).collect();
        format!("({})", parts.join(","))
    }
}

impl fmt::Debug for Coweight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Coweight{}[{}]", self.to_text(), self.flavor)
    }
}

/// Class `nu = mu + lambda - (j + alpha(mu)) alpha^vee` of the Hecke
/// modification, returned as its dominant representative.
pub fn hecke_class(mu: &Coweight, lambda: &Coweight, alpha: &[i64], j: i64) -> Result<Coweight> {
    if !mu.is_dominant() || !lambda.is_dominant() {
        return Err(Error::Precondition("mu and lambda must be dominant".into()));
    }
    let al = lambda.pairing(alpha);
    if !mu.datum().positive_roots().iter().any(|r| r == alpha) {
        return Err(Error::Precondition(format!("{alpha:?} is not a positive root")));
    }
    if j < 0 || int(j) >= al {
        return Err(Error::Precondition(format!(
            "need 0 <= j < alpha(lambda) = {}",
            scalar_text(&al)
        )));
    }
    let shift = int(j) + mu.pairing(alpha);
    let coroot = Coweight::coroot(mu.datum(), alpha, Flavor::Pgl2)?;
    let nu = mu.add(lambda)?;
    let coords = nu.coords.iter().zip(coroot.coords()).map(|(a, c)| a - &shift * c).collect();
    let nu = Coweight::new(mu.datum(), coords, mu.flavor())?;
    Ok(nu.dominant_rep().0)
}
