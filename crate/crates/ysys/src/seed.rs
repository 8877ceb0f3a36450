//! Skew-symmetric exchange matrices and Y-seed mutation over an arbitrary
//! semifield.

use crate::error::{Error, Result};
use crate::par::{map_collect, Strategy};
use crate::semifield::{SemifieldElem, Tropical};

fn pos(x: i64) -> i64 {
    x.max(0)
}

/// A skew-symmetric integer exchange matrix; entry `b[i][j] > 0` means
/// `mult = b[i][j]` arrows from `i` to `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BMat {
    e: Vec<Vec<i64>>,
}

impl BMat {
    pub fn new(e: Vec<Vec<i64>>) -> Result<Self> {
        let n = e.len();
        for row in &e {
            if row.len() != n {
                return Err(Error::Validation("exchange matrix must be square".into()));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if e[i][j] != -e[j][i] {
                    return Err(Error::Validation(format!(
                        "exchange matrix must be skew-symmetric; entries ({i},{j}) and ({j},{i}) disagree"
                    )));
                }
            }
        }
        Ok(BMat { e })
    }

    pub fn zero(n: usize) -> Self {
        BMat {
            e: vec![vec![0; n]; n],
        }
    }

    pub fn size(&self) -> usize {
        self.e.len()
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.e[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.e[i][j] = v;
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.e
    }

    pub fn is_skew_symmetric(&self) -> bool {
        let n = self.size();
        (0..n).all(|i| (0..n).all(|j| self.e[i][j] == -self.e[j][i]))
    }

    /// Arrows `(source, target, multiplicity)` with positive multiplicity.
    pub fn arrows(&self) -> Vec<(usize, usize, i64)> {
        let n = self.size();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if self.e[i][j] > 0 {
                    out.push((i, j, self.e[i][j]));
                }
            }
        }
        out
    }

    /// Matrix mutation at vertex `k`.
    pub fn mutate(&self, k: usize) -> BMat {
        let n = self.size();
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                out.e[i][j] = if i == k || j == k {
                    -self.e[i][j]
                } else {
                    self.e[i][j] + pos(-self.e[i][k]) * self.e[k][j] + self.e[i][k] * pos(self.e[k][j])
                };
            }
        }
        out
    }

    /// Relabel vertices: entry `(i, j)` moves to `(perm[i], perm[j])`.
    pub fn apply_permutation(&self, perm: &[usize]) -> BMat {
        let n = self.size();
        debug_assert_eq!(perm.len(), n);
        let mut out = BMat::zero(n);
        for i in 0..n {
            for j in 0..n {
                out.e[perm[i]][perm[j]] = self.e[i][j];
            }
        }
        out
    }
}

/// A Y-seed: an exchange matrix together with one semifield element per
/// vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct YSeed<E: SemifieldElem> {
    pub b: BMat,
    pub y: Vec<E>,
}

impl<E: SemifieldElem> YSeed<E> {
    pub fn new(b: BMat, y: Vec<E>) -> Result<Self> {
        if y.len() != b.size() {
            return Err(Error::Validation(format!(
                "seed needs one coefficient per vertex: {} vs {}",
                y.len(),
                b.size()
            )));
        }
        Ok(YSeed { b, y })
    }

    pub fn size(&self) -> usize {
        self.b.size()
    }

    /// Y-seed mutation at vertex `k`: an involution.
    pub fn mutate(&self, k: usize) -> YSeed<E> {
        self.mutate_set_with(&[k], Strategy::Sequential)
            .expect("a single vertex is trivially disconnected")
    }

    /// Simultaneous mutation at a set of pairwise-disconnected vertices.
    /// The per-vertex updates only read the old seed, so they run in
    /// parallel under `Strategy::Parallel`.
    pub fn mutate_set_with(&self, ks: &[usize], strategy: Strategy) -> Result<YSeed<E>> {
        for (a, &k1) in ks.iter().enumerate() {
            if k1 >= self.size() {
                return Err(Error::Validation(format!("vertex {k1} out of range")));
            }
            for &k2 in &ks[a + 1..] {
                if k1 == k2 || self.b.get(k1, k2) != 0 {
                    return Err(Error::Validation(format!(
                        "simultaneous mutation requires disconnected vertices; {k1} and {k2} are not"
                    )));
                }
            }
        }
        let b = ks.iter().fold(self.b.clone(), |b, &k| b.mutate(k));
        // Factor hints from the whole seed keep factored backends canonical:
        // new sums decompose against polynomials already in play anywhere.
        let hints: Vec<_> = {
            let mut set = std::collections::BTreeSet::new();
            for v in &self.y {
                set.extend(v.factor_hints());
            }
            set.into_iter().collect()
        };
        let y = map_collect(strategy, (0..self.size()).collect(), |i| {
            if ks.contains(&i) {
                return self.y[i].inv();
            }
            let mut v = self.y[i].clone();
            for &k in ks {
                let bki = self.b.get(k, i);
                let one_plus = E::one(self.size()).add_with_hints(&self.y[k], &hints);
                v = v.mul(&self.y[k].pow(pos(bki))).mul(&one_plus.pow(-bki));
            }
            v
        });
        Ok(YSeed { b, y })
    }

    /// Relabel vertices: vertex `i` becomes `perm[i]`.
    pub fn apply_permutation(&self, perm: &[usize]) -> YSeed<E> {
        let mut y = vec![None; self.size()];
        for (i, v) in self.y.iter().enumerate() {
            y[perm[i]] = Some(v.clone());
        }
        YSeed {
            b: self.b.apply_permutation(perm),
            y: y.into_iter().map(|v| v.expect("perm is a bijection")).collect(),
        }
    }
}

impl YSeed<Tropical> {
    /// Initial tropical seed: `y_i` is the `i`-th generator.
    pub fn tropical_initial(b: BMat) -> Self {
        let n = b.size();
        YSeed {
            b,
            y: (0..n).map(|i| Tropical::generator(n, i)).collect(),
        }
    }

    /// The c-vectors: row `i` is the exponent vector of `y_i`.
    pub fn c_vectors(&self) -> Vec<Vec<i64>> {
        self.y.iter().map(|t| t.exponents().to_vec()).collect()
    }

    /// Every c-vector is entirely nonnegative or entirely nonpositive.
    pub fn is_sign_coherent(&self) -> bool {
        self.c_vectors()
            .iter()
            .all(|c| c.iter().all(|&x| x >= 0) || c.iter().all(|&x| x <= 0))
    }

    /// All tropical coefficients have nonpositive exponents.
    pub fn all_nonpositive(&self) -> bool {
        self.y
            .iter()
            .all(|t| t.exponents().iter().all(|&x| x <= 0))
    }
}
