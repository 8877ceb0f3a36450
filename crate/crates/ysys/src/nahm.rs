//! Nahm-sum data attached to a pair: the exact rational matrix
//! `K = A_+(1)^{-1} A_-(1)`, truncated q-series with rational exponents,
//! and Rogers-Ramanujan product checks.

use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::par::{map_collect, Strategy};
use crate::polymat::{eval_at_one, MatrixPair};

fn rat(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

fn rat2(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// A square matrix of exact rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMat {
    pub m: Vec<Vec<BigRational>>,
}

impl QMat {
    pub fn new(m: Vec<Vec<BigRational>>) -> Result<Self> {
        let k = m.len();
        if m.iter().any(|row| row.len() != k) {
            return Err(Error::Validation("matrix must be square".into()));
        }
        Ok(QMat { m })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        QMat {
            m: rows
                .iter()
                .map(|r| r.iter().map(|&x| rat(x)).collect())
                .collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.m.len()
    }

    pub fn identity(k: usize) -> Self {
        QMat {
            m: (0..k)
                .map(|i| (0..k).map(|j| if i == j { rat(1) } else { rat(0) }).collect())
                .collect(),
        }
    }

    pub fn mul(&self, other: &QMat) -> QMat {
        let k = self.size();
        QMat {
            m: (0..k)
                .map(|i| {
                    (0..k)
                        .map(|j| (0..k).map(|l| &self.m[i][l] * &other.m[l][j]).sum())
                        .collect()
                })
                .collect(),
        }
    }

    /// Exact inverse by Gaussian elimination; `None` when singular.
    pub fn inverse(&self) -> Option<QMat> {
        let k = self.size();
        let mut a = self.m.clone();
        let mut inv = QMat::identity(k).m;
        for col in 0..k {
            let pivot = (col..k).find(|&r| !a[r][col].is_zero())?;
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let p = a[col][col].clone();
            for j in 0..k {
                a[col][j] /= &p;
                inv[col][j] /= &p;
            }
            for r in 0..k {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for j in 0..k {
                        let t = &a[col][j] * &f;
                        a[r][j] -= t;
                        let t = &inv[col][j] * &f;
                        inv[r][j] -= t;
                    }
                }
            }
        }
        Some(QMat { m: inv })
    }

    pub fn is_symmetric(&self) -> bool {
        let k = self.size();
        (0..k).all(|i| (0..k).all(|j| self.m[i][j] == self.m[j][i]))
    }

    /// Sylvester's criterion: all leading principal minors positive.
    pub fn is_positive_definite(&self) -> bool {
        let k = self.size();
        (1..=k).all(|s| {
            let minor: Vec<Vec<BigRational>> = (0..s)
                .map(|i| (0..s).map(|j| self.m[i][j].clone()).collect())
                .collect();
            determinant(&minor) > rat(0)
        })
    }
}

fn determinant(m: &[Vec<BigRational>]) -> BigRational {
    let k = m.len();
    let mut a: Vec<Vec<BigRational>> = m.to_vec();
    let mut det = rat(1);
    for col in 0..k {
        let pivot = match (col..k).find(|&r| !a[r][col].is_zero()) {
            Some(p) => p,
            None => return rat(0),
        };
        if pivot != col {
            a.swap(col, pivot);
            det = -det;
        }
        det *= &a[col][col].clone();
        let p = a[col][col].clone();
        for r in col + 1..k {
            if !a[r][col].is_zero() {
                let f = &a[r][col] / &p;
                for j in col..k {
                    let t = &a[col][j] * &f;
                    a[r][j] -= t;
                }
            }
        }
    }
    det
}

/// `K = A_+(1)^{-1} A_-(1)`, exact.
pub fn compute_k(p: &MatrixPair) -> Result<QMat> {
    let (plus, minus) = eval_at_one(p);
    let to_q = |m: &Vec<Vec<BigInt>>| QMat {
        m: m.iter()
            .map(|row| row.iter().map(|x| BigRational::from(x.clone())).collect())
            .collect(),
    };
    let plus_inv = to_q(&plus)
        .inverse()
        .ok_or_else(|| Error::Property("A_+(1) is singular".into()))?;
    Ok(plus_inv.mul(&to_q(&minus)))
}

// ---------------------------------------------------------------------------
// Truncated q-series with exact rational exponents
// ---------------------------------------------------------------------------

/// A truncated formal q-series: exact rational exponents below the order,
/// exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    order: BigRational,
    terms: BTreeMap<BigRational, BigRational>,
}

impl QSeries {
    pub fn zero(order: BigRational) -> Self {
        QSeries {
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(order: BigRational) -> Self {
        let mut s = QSeries::zero(order);
        s.add_term(rat(0), rat(1));
        s
    }

    pub fn order(&self) -> &BigRational {
        &self.order
    }

    pub fn coeff(&self, exp: &BigRational) -> BigRational {
        self.terms.get(exp).cloned().unwrap_or_else(|| rat(0))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BigRational, &BigRational)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, exp: BigRational, coeff: BigRational) {
        if coeff.is_zero() || exp >= self.order {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(|| rat(0));
        *entry += coeff;
        if entry.is_zero() {
            let key = self
                .terms
                .iter()
                .find(|(_, v)| v.is_zero())
                .map(|(k, _)| k.clone());
            if let Some(k) = key {
                self.terms.remove(&k);
            }
        }
    }

    pub fn add(&self, other: &QSeries) -> QSeries {
        let order = self.order.clone().min(other.order.clone());
        let mut out = QSeries::zero(order);
        for (e, c) in self.terms() {
            out.add_term(e.clone(), c.clone());
        }
        for (e, c) in other.terms() {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    /// Product, truncated at the smaller order. Correct below the order when
    /// both factors have nonnegative exponents.
    pub fn mul(&self, other: &QSeries) -> QSeries {
        debug_assert!(self.terms.keys().all(|e| !e.is_negative()));
        debug_assert!(other.terms.keys().all(|e| !e.is_negative()));
        let order = self.order.clone().min(other.order.clone());
        let mut out = QSeries::zero(order);
        for (e1, c1) in self.terms() {
            for (e2, c2) in other.terms() {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }

    /// Multiply by a single term `coeff * q^exp`; the exponent may be
    /// negative or rational.
    pub fn mul_term(&self, exp: &BigRational, coeff: &BigRational) -> QSeries {
        let mut out = QSeries::zero(self.order.clone() + exp);
        for (e, c) in self.terms() {
            out.add_term(e + exp, c * coeff);
        }
        out
    }

    /// Restrict the truncation order (dropping higher terms).
    pub fn truncated(&self, order: BigRational) -> QSeries {
        let mut out = QSeries::zero(order);
        for (e, c) in self.terms() {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn eq_below(&self, other: &QSeries, order: &BigRational) -> bool {
        let exps: std::collections::BTreeSet<&BigRational> = self
            .terms
            .keys()
            .chain(other.terms.keys())
            .filter(|e| *e < order)
            .collect();
        exps.iter().all(|e| self.coeff(e) == other.coeff(e))
    }
}

/// `1/(1 - q^k)` truncated at integer-or-rational order.
fn geometric(k: u32, order: &BigRational) -> QSeries {
    let mut s = QSeries::zero(order.clone());
    let mut e = rat(0);
    while e < *order {
        s.add_term(e.clone(), rat(1));
        e += rat(k as i64);
    }
    s
}

/// `1/(q)_n` truncated at the given order.
pub fn pochhammer_inverse(n: u32, order: &BigRational) -> QSeries {
    let mut s = QSeries::one(order.clone());
    for k in 1..=n {
        s = s.mul(&geometric(k, order));
    }
    s
}

/// Enumeration strategy for the Nahm sum: both are certified complete below
/// the order via the minimal-eigenvalue growth bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NahmEnumeration {
    /// All lattice points in a box `[0, M]^I`.
    Box,
    /// Shells of constant l1-norm, stopping at a certified radius.
    Shell,
}

/// Lower bound on the smallest eigenvalue of symmetric positive definite
/// `K`: `1 / ||K^{-1}||_inf` (max absolute row sum of the inverse).
fn eigenvalue_lower_bound(k: &QMat) -> Result<BigRational> {
    let inv = k
        .inverse()
        .ok_or_else(|| Error::Property("K is singular".into()))?;
    let norm = inv
        .m
        .iter()
        .map(|row| row.iter().map(|x| x.abs()).sum::<BigRational>())
        .max()
        .expect("nonempty matrix");
    if norm <= rat(0) {
        return Err(Error::Property("degenerate inverse norm".into()));
    }
    Ok(rat(1) / norm)
}

/// The Nahm sum `f_{K, B, C}(q)` truncated at `order`, with a proof of
/// completeness: the quadratic growth bound certifies that no lattice point
/// outside the enumerated region contributes below the order.
pub fn nahm_expand(
    k: &QMat,
    b: &[BigRational],
    c: &BigRational,
    order: &BigRational,
    n_max: u32,
    enumeration: NahmEnumeration,
    strategy: Strategy,
) -> Result<QSeries> {
    let dim = k.size();
    if b.len() != dim {
        return Err(Error::Validation("B has wrong dimension".into()));
    }
    if !k.is_symmetric() || !k.is_positive_definite() {
        return Err(Error::Property(
            "Nahm sum requires symmetric positive definite K".into(),
        ));
    }
    let lambda = eigenvalue_lower_bound(k)?;
    let b_norm: BigRational = b.iter().map(|x| x.abs()).sum();
    // Exponent at n: (1/2) n^T K n + n^T B + C
    //   >= (lambda/2) ||n||_2^2 - b_norm * ||n||_inf + C.
    let exponent = |n: &[u32]| -> BigRational {
        let mut quad = rat(0);
        for i in 0..dim {
            for j in 0..dim {
                quad += &k.m[i][j] * rat(n[i] as i64) * rat(n[j] as i64);
            }
        }
        let lin: BigRational = (0..dim).map(|i| &b[i] * rat(n[i] as i64)).sum();
        quad / rat(2) + lin + c.clone()
    };
    // Certified cutoff for the max coordinate: with m = ||n||_inf,
    // ||n||_2^2 >= m^2, so exponent >= (lambda/2) m^2 - b_norm m + C.
    let mut m_box = 0u32;
    loop {
        let m = rat(m_box as i64);
        if &lambda / rat(2) * &m * &m - &b_norm * &m + c >= *order {
            break;
        }
        m_box += 1;
        if m_box > n_max {
            return Err(Error::Resource(format!(
                "Nahm enumeration exceeded the cap {n_max} before certification"
            )));
        }
    }
    let points: Vec<Vec<u32>> = match enumeration {
        NahmEnumeration::Box => {
            // All n with every coordinate < m_box (coordinates >= m_box give
            // exponent >= order by the bound above).
            let mut pts = vec![Vec::new()];
            for _ in 0..dim {
                let mut next = Vec::new();
                for p in &pts {
                    for v in 0..m_box.max(1) {
                        let mut q = p.clone();
                        q.push(v);
                        next.push(q);
                    }
                }
                pts = next;
            }
            pts
        }
        NahmEnumeration::Shell => {
            // Shells of constant l1-norm s; ||n||_2^2 >= s^2 / dim, so the
            // shell is certified empty below the order once
            // (lambda/2) s^2/dim - b_norm s + C >= order.
            let mut pts = Vec::new();
            let mut s = 0u32;
            loop {
                let sr = rat(s as i64);
                if s > 0
                    && &lambda / rat(2) * &sr * &sr / rat(dim as i64) - &b_norm * &sr + c
                        >= *order
                {
                    break;
                }
                if s > n_max.saturating_mul(dim as u32) {
                    return Err(Error::Resource(format!(
                        "Nahm enumeration exceeded the cap {n_max} before certification"
                    )));
                }
                compositions(s, dim, &mut Vec::new(), &mut pts);
                s += 1;
            }
            pts
        }
    };
    let partial = map_collect(strategy, points, |n| {
        let e0 = exponent(&n);
        if e0 >= *order {
            return QSeries::zero(order.clone());
        }
        let mut term = QSeries::one(order.clone() - &e0);
        for &ni in &n {
            term = term.mul(&pochhammer_inverse(ni, &(order.clone() - &e0)));
        }
        term.mul_term(&e0, &rat(1))
    });
    let mut out = QSeries::zero(order.clone());
    for p in partial {
        out = out.add(&p);
    }
    Ok(out)
}

fn compositions(total: u32, parts: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if parts == 1 {
        let mut p = prefix.clone();
        p.push(total);
        out.push(p);
        return;
    }
    for v in 0..=total {
        prefix.push(v);
        compositions(total - v, parts - 1, prefix, out);
        prefix.pop();
    }
}

/// The Rogers-Ramanujan products: `prod 1/(1-q^n)` over `n` congruent to
/// `±residue` mod 5, truncated.
pub fn rr_product(residue: u32, order: &BigRational) -> QSeries {
    let mut s = QSeries::one(order.clone());
    let mut n = 1u32;
    while rat(n as i64) < *order {
        if n % 5 == residue % 5 || n % 5 == (5 - residue) % 5 {
            s = s.mul(&geometric(n, order));
        }
        n += 1;
    }
    s
}

// ---------------------------------------------------------------------------
// Table report
// ---------------------------------------------------------------------------

/// Report entry for one pair: computed `K`, its verdicts, the tabulated
/// constant, and a truncated expansion of `f_{K,0,C}`.
#[derive(Clone, Debug)]
pub struct NahmEntry {
    pub name: String,
    pub k: QMat,
    pub symmetric: bool,
    pub positive_definite: bool,
    /// The constant as `-24C`, attached as metadata.
    pub minus_24c: BigRational,
    pub expansion: QSeries,
}

/// Tabulated `(name, K, -24C)` for the six classes and their opposites.
pub fn table2_goldens() -> Vec<(String, QMat, BigRational)> {
    let q = |rows: [[(i64, i64); 2]; 2]| QMat {
        m: rows
            .iter()
            .map(|r| r.iter().map(|&(n, d)| rat2(n, d)).collect())
            .collect(),
    };
    vec![
        ("table1:1".into(), q([[(4, 3), (2, 3)], [(2, 3), (4, 3)]]), rat2(4, 5)),
        ("table1:1op".into(), q([[(1, 1), (-1, 2)], [(-1, 2), (1, 1)]]), rat2(6, 5)),
        ("table1:2".into(), q([[(3, 2), (1, 1)], [(1, 1), (2, 1)]]), rat2(5, 7)),
        ("table1:2op".into(), q([[(1, 1), (-1, 2)], [(-1, 2), (3, 4)]]), rat2(9, 7)),
        ("table1:3".into(), q([[(2, 1), (2, 1)], [(2, 1), (4, 1)]]), rat2(4, 7)),
        ("table1:3op".into(), q([[(1, 1), (-1, 2)], [(-1, 2), (1, 2)]]), rat2(10, 7)),
        ("table1:4".into(), q([[(2, 3), (1, 3)], [(1, 3), (2, 3)]]), rat(1)),
        ("table1:4op".into(), q([[(2, 1), (-1, 1)], [(-1, 1), (2, 1)]]), rat(1)),
        ("table1:5".into(), q([[(1, 1), (1, 1)], [(1, 1), (2, 1)]]), rat2(3, 4)),
        ("table1:5op".into(), q([[(2, 1), (-1, 1)], [(-1, 1), (1, 1)]]), rat2(5, 4)),
        ("table1:6".into(), q([[(2, 1), (2, 1)], [(2, 1), (4, 1)]]), rat2(4, 7)),
        ("table1:6op".into(), q([[(1, 1), (-1, 2)], [(-1, 2), (1, 2)]]), rat2(10, 7)),
    ]
}

/// Compute the report for the six pairs and their opposites.
pub fn table2_report(order: &BigRational, strategy: Strategy) -> Result<Vec<NahmEntry>> {
    let mut out = Vec::new();
    for (name, expected_k, minus_24c) in table2_goldens() {
        let row: usize = name
            .trim_start_matches("table1:")
            .trim_end_matches("op")
            .parse()
            .expect("golden names are numbered");
        let mut pair = crate::presets::table1(row).to_matrices();
        if name.ends_with("op") {
            pair = pair.opposite();
        }
        let k = compute_k(&pair)?;
        if k != expected_k {
            return Err(Error::Property(format!(
                "computed K for {name} disagrees with the tabulated value"
            )));
        }
        let c = -&minus_24c / rat(24);
        let expansion = nahm_expand(
            &k,
            &vec![rat(0); k.size()],
            &c,
            order,
            10_000,
            NahmEnumeration::Box,
            strategy,
        )?;
        out.push(NahmEntry {
            symmetric: k.is_symmetric(),
            positive_definite: k.is_positive_definite(),
            name,
            k,
            minus_24c,
            expansion,
        });
    }
    Ok(out)
}
