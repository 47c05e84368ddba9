use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact_algebra::{int, Scalar};

/// Root datum of a semisimple Lie algebra built from its Cartan matrix.
///
/// `cartan[i][j] = <alpha_i^vee, alpha_j>`. Roots are integer coordinate
/// vectors over the simple roots.
#[derive(Clone, PartialEq, Eq)]
pub struct RootDatum {
    name: String,
    cartan: Vec<Vec<i64>>,
    positive_roots: Vec<Vec<i64>>,
    /// Invariant form on simple roots, `(alpha_i, alpha_j)`, with `(theta, theta) = 2`.
    form: Vec<Vec<Scalar>>,
    theta: Vec<i64>,
    dual_coxeter: i64,
}

impl RootDatum {
    pub fn from_cartan(name: &str, cartan: Vec<Vec<i64>>) -> Result<Arc<Self>> {
        let r = cartan.len();
        if r == 0 || cartan.iter().any(|row| row.len() != r) {
            return Err(Error::Precondition("Cartan matrix must be square and nonempty".into()));
        }
        for i in 0..r {
            for j in 0..r {
                let ok = if i == j {
                    cartan[i][j] == 2
                } else {
                    cartan[i][j] <= 0 && ((cartan[i][j] == 0) == (cartan[j][i] == 0))
                };
                if !ok {
                    return Err(Error::Precondition(format!("invalid Cartan entry ({i},{j})")));
                }
            }
        }
        let half_lengths = symmetrizer(&cartan)?;
        let positive_roots = positive_roots(&cartan)?;
        let mut form: Vec<Vec<Scalar>> = (0..r)
            .map(|i| (0..r).map(|j| &half_lengths[i] * int(cartan[i][j])).collect())
            .collect();
        let height = |v: &Vec<i64>| v.iter().sum::<i64>();
        let theta = positive_roots.iter().max_by_key(|v| height(v)).unwrap().clone();
        let norm = pair_form(&form, &theta, &theta);
        let scale = int(2) / norm;
        for row in &mut form {
            for c in row.iter_mut() {
                *c = &*c * &scale;
            }
        }
        let mut h = Scalar::one();
        for (i, &c) in theta.iter().enumerate() {
            h += int(c) * &form[i][i] / int(2);
        }
        if !h.is_integer() {
            return Err(Error::Precondition("dual Coxeter number is not integral".into()));
        }
        Ok(Arc::new(RootDatum {
            name: name.to_string(),
            cartan,
            positive_roots,
            form,
            theta,
            dual_coxeter: h.to_integer().try_into().unwrap(),
        }))
    }

    /// Cartan type `A`, `B`, `C`, `D` of the given rank, or `G` with rank 2.
    pub fn of_type(letter: char, rank: usize) -> Result<Arc<Self>> {
        let mut c = vec![vec![0i64; rank]; rank];
        for i in 0..rank {
            c[i][i] = 2;
            if i + 1 < rank {
                c[i][i + 1] = -1;
                c[i + 1][i] = -1;
            }
        }
        match (letter, rank) {
            ('A', r) if r >= 1 => {}
            ('B', r) if r >= 2 => c[r - 1][r - 2] = -2,
            ('C', r) if r >= 2 => c[r - 2][r - 1] = -2,
            ('D', r) if r >= 4 => {
                c[r - 2][r - 1] = 0;
                c[r - 1][r - 2] = 0;
                c[r - 3][r - 1] = -1;
                c[r - 1][r - 3] = -1;
            }
            ('G', 2) => c[1][0] = -3,
            _ => return Err(Error::Unsupported(format!("Cartan type {letter}{rank}"))),
        }
        Self::from_cartan(&format!("{letter}{rank}"), c)
    }

    pub fn sl2() -> Arc<Self> {
        Self::of_type('A', 1).expect("A1 is valid")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.cartan.len()
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    pub fn simple_root(&self, i: usize) -> Vec<i64> {
        let mut v = vec![0; self.rank()];
        v[i] = 1;
        v
    }

    pub fn highest_root(&self) -> &[i64] {
        &self.theta
    }

    pub fn dual_coxeter(&self) -> i64 {
        self.dual_coxeter
    }

    pub fn dim(&self) -> usize {
        self.rank() + 2 * self.positive_roots.len()
    }

    /// Normalized invariant form `(a, b)` on root coordinates.
    pub fn form(&self, a: &[i64], b: &[i64]) -> Scalar {
        pair_form(&self.form, a, b)
    }

    pub fn is_root(&self, v: &[i64]) -> bool {
        let neg: Vec<i64> = v.iter().map(|x| -x).collect();
        self.positive_roots.iter().any(|r| r == v || *r == neg)
    }

    /// `beta(alpha^vee)` for roots `alpha`, `beta`.
    pub fn root_on_coroot(&self, beta: &[i64], alpha: &[i64]) -> Scalar {
        int(2) * self.form(alpha, beta) / self.form(alpha, alpha)
    }
}

fn pair_form(form: &[Vec<Scalar>], a: &[i64], b: &[i64]) -> Scalar {
    let mut s = Scalar::zero();
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if y != 0 {
                s += &form[i][j] * int(x * y);
            }
        }
    }
    s
}

/// Half squared lengths `d_i` with `d_i a_ij = d_j a_ji`.
fn symmetrizer(cartan: &[Vec<i64>]) -> Result<Vec<Scalar>> {
    let r = cartan.len();
    let mut d: Vec<Option<Scalar>> = vec![None; r];
    for start in 0..r {
        if d[start].is_some() {
            continue;
        }
        d[start] = Some(Scalar::one());
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            for j in 0..r {
                if i == j || cartan[i][j] == 0 {
                    continue;
                }
                let dj = d[i].clone().unwrap() * int(cartan[i][j]) / int(cartan[j][i]);
                match &d[j] {
                    None => {
                        d[j] = Some(dj);
                        queue.push_back(j);
                    }
                    Some(x) if *x != dj => {
                        return Err(Error::Precondition("Cartan matrix is not symmetrizable".into()))
                    }
                    _ => {}
                }
            }
        }
    }
    if d.iter().any(|x| !x.as_ref().unwrap().is_positive()) {
        return Err(Error::Precondition("Cartan matrix is not of finite type".into()));
    }
    Ok(d.into_iter().map(Option::unwrap).collect())
}

/// Positive roots by alpha-strings, starting from the simple roots.
fn positive_roots(cartan: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    let r = cartan.len();
    let mut roots: Vec<Vec<i64>> = (0..r)
        .map(|i| {
            let mut v = vec![0; r];
            v[i] = 1;
            v
        })
        .collect();
    let mut set: BTreeSet<Vec<i64>> = roots.iter().cloned().collect();
    let mut k = 0;
    while k < roots.len() {
        let beta = roots[k].clone();
        for i in 0..r {
            // p: how far down the alpha_i string through beta goes.
            let mut p = 0;
            let mut down = beta.clone();
            loop {
                down[i] -= 1;
                if set.contains(&down) {
                    p += 1;
                } else {
                    break;
                }
            }
            let pairing: i64 = (0..r).map(|j| beta[j] * cartan[i][j]).sum();
            let q = p - pairing;
            if q > 0 {
                let mut up = beta.clone();
                up[i] += 1;
                if set.insert(up.clone()) {
                    roots.push(up);
                }
            }
        }
        k += 1;
        if roots.len() > 10_000 {
            return Err(Error::Precondition("Cartan matrix is not of finite type".into()));
        }
    }
    roots.sort_by_key(|v| (v.iter().sum::<i64>(), v.clone()));
    Ok(roots)
}

impl fmt::Debug for RootDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RootDatum({})", self.name)
    }
}
