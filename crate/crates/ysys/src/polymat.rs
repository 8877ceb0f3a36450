//! The matrix-pair encoding of a Y-system: data `(r, n)` and the equivalent
//! pair of integer polynomial matrices `A_+(z), A_-(z)`.
//!
//! Both matrices decompose as `N_0(z) - N_pm(z)` with the shared diagonal
//! `N_0(z) = diag(1 + z^{r_i})` and `N_pm` having nonnegative coefficients
//! supported on `0 < p < r_i`. The pair satisfies the symplectic property
//! when `A_+(z) A_-(z^{-1})^T = A_-(z) A_+(z^{-1})^T` as Laurent matrices.

use std::collections::BTreeMap;

use num::bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::zpoly::ZPoly;

/// The defining data of a Y-system: an ordered index set, per-index periods
/// `r_i >= 1`, and interaction coefficients `n_{ij;p}` supported on
/// `0 < p < r_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YDatum {
    labels: Vec<String>,
    r: Vec<u32>,
    /// Nonzero coefficients only, keyed by dense indices `(i, j, p)`.
    n: BTreeMap<(usize, usize, u32), i64>,
}

impl YDatum {
    pub fn new(
        labels: Vec<String>,
        r: Vec<u32>,
        n: impl IntoIterator<Item = ((usize, usize, u32), i64)>,
    ) -> Result<Self> {
        let n: BTreeMap<_, _> = n.into_iter().filter(|(_, v)| *v != 0).collect();
        let d = YDatum { labels, r, n };
        d.validate()?;
        Ok(d)
    }

    fn validate(&self) -> Result<()> {
        if self.labels.len() != self.r.len() {
            return Err(Error::Validation(format!(
                "label count {} does not match r count {}",
                self.labels.len(),
                self.r.len()
            )));
        }
        {
            let mut sorted = self.labels.clone();
            sorted.sort();
            sorted.dedup();
            if sorted.len() != self.labels.len() {
                return Err(Error::Validation("duplicate index labels".into()));
            }
        }
        for (i, &ri) in self.r.iter().enumerate() {
            if ri < 1 {
                return Err(Error::Validation(format!(
                    "r must be >= 1 for index {}",
                    self.labels[i]
                )));
            }
        }
        let mut violations = Vec::new();
        for (&(i, j, p), &v) in &self.n {
            if i >= self.labels.len() || j >= self.labels.len() {
                return Err(Error::Validation(format!(
                    "n entry ({i},{j},{p}) out of index range"
                )));
            }
            if v != 0 && !(0 < p && p < self.r[i]) {
                violations.push(format!(
                    "Eq-Y1 violation at ({},{},{p})",
                    self.labels[i], self.labels[j]
                ));
            }
        }
        if !violations.is_empty() {
            return Err(Error::Validation(violations.join("; ")));
        }
        Ok(())
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn r(&self) -> &[u32] {
        &self.r
    }

    pub fn n_entries(&self) -> impl Iterator<Item = ((usize, usize, u32), i64)> + '_ {
        self.n.iter().map(|(k, v)| (*k, *v))
    }

    pub fn n_at(&self, i: usize, j: usize, p: i64) -> i64 {
        if p < 0 {
            return 0;
        }
        self.n
            .get(&(i, j, p as u32))
            .copied()
            .unwrap_or(0)
    }

    /// Flip the sign of every interaction coefficient, i.e. swap `A_+` and
    /// `A_-`.
    pub fn opposite(&self) -> YDatum {
        YDatum {
            labels: self.labels.clone(),
            r: self.r.clone(),
            n: self.n.iter().map(|(k, v)| (*k, -v)).collect(),
        }
    }

    /// Add `delta` to a single coefficient, keeping the support constraint.
    /// Used by perturbation tests.
    pub fn perturbed(&self, i: usize, j: usize, p: u32, delta: i64) -> Result<YDatum> {
        let mut n = self.n.clone();
        let entry = n.entry((i, j, p)).or_insert(0);
        *entry += delta;
        if *entry == 0 {
            n.remove(&(i, j, p));
        }
        YDatum::new(self.labels.clone(), self.r.clone(), n)
    }

    pub fn to_matrices(&self) -> MatrixPair {
        ydatum_to_matrices(self)
    }
}

/// The pair `(A_+(z), A_-(z))` of integer polynomial matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixPair {
    pub labels: Vec<String>,
    pub a_plus: Vec<Vec<ZPoly>>,
    pub a_minus: Vec<Vec<ZPoly>>,
}

impl MatrixPair {
    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn opposite(&self) -> MatrixPair {
        MatrixPair {
            labels: self.labels.clone(),
            a_plus: self.a_minus.clone(),
            a_minus: self.a_plus.clone(),
        }
    }

    pub fn to_ydatum(&self) -> Result<YDatum> {
        matrices_to_ydatum(self)
    }
}

pub fn ydatum_to_matrices(d: &YDatum) -> MatrixPair {
    let k = d.size();
    let build = |sign: i64| -> Vec<Vec<ZPoly>> {
        (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        // N_0 on the diagonal, minus the sign-split part of n.
                        let mut entry = if i == j {
                            ZPoly::from_terms([(0, 1), (d.r[i] as i64, 1)])
                        } else {
                            ZPoly::zero()
                        };
                        for (&(ii, jj, p), &v) in &d.n {
                            if ii == i && jj == j {
                                let part = (sign * v).max(0);
                                if part > 0 {
                                    entry.add_term(p as i64, BigInt::from(-part));
                                }
                            }
                        }
                        entry
                    })
                    .collect()
            })
            .collect()
    };
    MatrixPair {
        labels: d.labels.clone(),
        a_plus: build(1),
        a_minus: build(-1),
    }
}

pub fn matrices_to_ydatum(p: &MatrixPair) -> Result<YDatum> {
    let k = p.size();
    if p.a_plus.len() != k
        || p.a_minus.len() != k
        || p.a_plus.iter().any(|row| row.len() != k)
        || p.a_minus.iter().any(|row| row.len() != k)
    {
        return Err(Error::Validation("matrix shape does not match index set".into()));
    }
    // Recover r_i from the diagonals: both must be 1 + z^{r_i} - (terms with
    // 0 < p < r_i and nonnegative coefficients).
    let mut r = Vec::with_capacity(k);
    for i in 0..k {
        let ri = diag_order(&p.a_plus[i][i], &p.labels[i], "A+")?;
        let ri_minus = diag_order(&p.a_minus[i][i], &p.labels[i], "A-")?;
        if ri != ri_minus {
            return Err(Error::Validation(format!(
                "diagonals of A+ and A- imply different r for index {}",
                p.labels[i]
            )));
        }
        r.push(ri);
    }
    let mut n: BTreeMap<(usize, usize, u32), i64> = BTreeMap::new();
    let mut read = |mat: &Vec<Vec<ZPoly>>, sign: i64| -> Result<()> {
        for i in 0..k {
            for j in 0..k {
                for (e, c) in mat[i][j].iter() {
                    if i == j && (e == 0 || e == r[i] as i64) {
                        continue; // the N_0 part
                    }
                    if e <= 0 || e >= r[i] as i64 {
                        return Err(Error::Validation(format!(
                            "support outside 0<p<r_i at ({},{},{e})",
                            p.labels[i], p.labels[j]
                        )));
                    }
                    let c: BigInt = -c.clone();
                    let v = i64::try_from(c).map_err(|_| {
                        Error::Validation("coefficient does not fit in i64".into())
                    })?;
                    if v <= 0 {
                        // A positive off-diagonal coefficient would mean a
                        // negative entry of N_pm.
                        return Err(Error::Validation(format!(
                            "N{} entry at ({},{},{e}) must be nonnegative",
                            if sign > 0 { "+" } else { "-" },
                            p.labels[i],
                            p.labels[j]
                        )));
                    }
                    let key = (i, j, e as u32);
                    let prev = n.get(&key).copied().unwrap_or(0);
                    if prev != 0 && prev.signum() != (sign * v).signum() {
                        return Err(Error::Validation(format!(
                            "n+{} and n- both nonzero at ({},{},{e})",
                            "", p.labels[i], p.labels[j]
                        )));
                    }
                    n.insert(key, sign * v);
                }
            }
        }
        Ok(())
    };
    read(&p.a_plus, 1)?;
    read(&p.a_minus, -1)?;
    let d = YDatum::new(p.labels.clone(), r, n)?;
    // Exact inverse: round-trip must reproduce the input bit for bit.
    let back = ydatum_to_matrices(&d);
    if &back != p {
        return Err(Error::Validation(
            "matrices do not decompose as N0 - N_pm with shared diagonal".into(),
        ));
    }
    Ok(d)
}

fn diag_order(entry: &ZPoly, label: &str, which: &str) -> Result<u32> {
    let max = entry
        .max_exp()
        .ok_or_else(|| Error::Validation(format!("zero diagonal for index {label}")))?;
    if max < 1
        || entry.coeff(0) != BigInt::from(1)
        || entry.coeff(max) != BigInt::from(1)
        || entry.min_exp() != Some(0)
    {
        return Err(Error::Validation(format!(
            "{which} diagonal for index {label} is not of the form 1 + z^r - (lower terms)"
        )));
    }
    Ok(max as u32)
}

/// The z-integer `[n]_r = (1 - z^{rn}) / (1 - z^r) = 1 + z^r + ... + z^{r(n-1)}`.
pub fn z_integer(n: u32, r: u32) -> ZPoly {
    let mut p = ZPoly::zero();
    for i in 0..n {
        p.add_term((r as i64) * (i as i64), BigInt::from(1));
    }
    p
}

/// Exact check of the Laurent-matrix identity
/// `A_+(z) A_-(z^{-1})^T = A_-(z) A_+(z^{-1})^T`.
pub fn check_symplectic(p: &MatrixPair) -> bool {
    let k = p.size();
    let prod = |left: &Vec<Vec<ZPoly>>, right: &Vec<Vec<ZPoly>>| -> Vec<Vec<ZPoly>> {
        (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        let mut s = ZPoly::zero();
                        for l in 0..k {
                            // (right^T)_{lj} = right_{jl}, with z -> z^{-1}.
                            s = s.add(&left[i][l].mul(&right[j][l].reciprocal()));
                        }
                        s
                    })
                    .collect()
            })
            .collect()
    };
    prod(&p.a_plus, &p.a_minus) == prod(&p.a_minus, &p.a_plus)
}

/// Entrywise sums of coefficients, i.e. `(A_+(1), A_-(1))`.
pub fn eval_at_one(p: &MatrixPair) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) {
    let ev = |m: &Vec<Vec<ZPoly>>| {
        m.iter()
            .map(|row| row.iter().map(|e| e.eval_one()).collect())
            .collect()
    };
    (ev(&p.a_plus), ev(&p.a_minus))
}

/// Block-diagonal direct sum of two pairs over disjoint index sets.
pub fn direct_sum(p1: &MatrixPair, p2: &MatrixPair) -> Result<MatrixPair> {
    for l in &p1.labels {
        if p2.labels.contains(l) {
            return Err(Error::Validation(format!("index label {l} occurs in both summands")));
        }
    }
    let k1 = p1.size();
    let k2 = p2.size();
    let k = k1 + k2;
    let mut labels = p1.labels.clone();
    labels.extend(p2.labels.iter().cloned());
    let embed = |m1: &Vec<Vec<ZPoly>>, m2: &Vec<Vec<ZPoly>>| -> Vec<Vec<ZPoly>> {
        (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        if i < k1 && j < k1 {
                            m1[i][j].clone()
                        } else if i >= k1 && j >= k1 {
                            m2[i - k1][j - k1].clone()
                        } else {
                            ZPoly::zero()
                        }
                    })
                    .collect()
            })
            .collect()
    };
    Ok(MatrixPair {
        labels,
        a_plus: embed(&p1.a_plus, &p2.a_plus),
        a_minus: embed(&p1.a_minus, &p2.a_minus),
    })
}

/// A pair decomposes iff the union support graph of the off-diagonal entries
/// of both matrices is disconnected; both matrices must split simultaneously.
pub fn is_decomposable(p: &MatrixPair) -> bool {
    let k = p.size();
    if k <= 1 {
        return false;
    }
    let mut adj = vec![vec![false; k]; k];
    for i in 0..k {
        for j in 0..k {
            if i != j && (!p.a_plus[i][j].is_zero() || !p.a_minus[i][j].is_zero()) {
                adj[i][j] = true;
                adj[j][i] = true;
            }
        }
    }
    let mut seen = vec![false; k];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for w in 0..k {
            if adj[v][w] && !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.iter().any(|s| !s)
}

// ---------------------------------------------------------------------------
// Canonical textual form
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct NEntry {
    i: String,
    j: String,
    p: u32,
    v: i64,
}

#[derive(Serialize, Deserialize)]
struct PairRepr {
    #[serde(rename = "I")]
    index: Vec<String>,
    r: BTreeMap<String, u32>,
    n: Vec<NEntry>,
}

impl YDatum {
    /// Canonical JSON form: `{"I":[...], "r":{i:r_i}, "n":[{i,j,p,v},...]}`
    /// with `n` entries in sorted dense-index order. Round-trips bit-exactly.
    pub fn to_json(&self) -> String {
        let repr = PairRepr {
            index: self.labels.clone(),
            r: self
                .labels
                .iter()
                .cloned()
                .zip(self.r.iter().copied())
                .collect(),
            n: self
                .n
                .iter()
                .map(|(&(i, j, p), &v)| NEntry {
                    i: self.labels[i].clone(),
                    j: self.labels[j].clone(),
                    p,
                    v,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&repr).expect("serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<YDatum> {
        let repr: PairRepr = serde_json::from_str(s)
            .map_err(|e| Error::Validation(format!("JSON parse error: {e}")))?;
        let pos = |l: &str| -> Result<usize> {
            repr.index
                .iter()
                .position(|x| x == l)
                .ok_or_else(|| Error::Validation(format!("unknown index label {l}")))
        };
        let mut r = Vec::with_capacity(repr.index.len());
        for l in &repr.index {
            r.push(*repr.r.get(l).ok_or_else(|| {
                Error::Validation(format!("missing r entry for index {l}"))
            })?);
        }
        let mut n = BTreeMap::new();
        for e in &repr.n {
            let key = (pos(&e.i)?, pos(&e.j)?, e.p);
            if n.insert(key, e.v).is_some() {
                return Err(Error::Validation(format!(
                    "duplicate n entry at ({},{},{})",
                    e.i, e.j, e.p
                )));
            }
        }
        YDatum::new(repr.index, r, n)
    }
}

/// Matrices exported as coefficient lists `[[exp, coeff], ...]` per entry.
pub fn matrices_to_coeff_lists(p: &MatrixPair) -> serde_json::Value {
    let dump = |m: &Vec<Vec<ZPoly>>| {
        serde_json::Value::Array(
            m.iter()
                .map(|row| {
                    serde_json::Value::Array(
                        row.iter()
                            .map(|e| {
                                serde_json::Value::Array(
                                    e.iter()
                                        .map(|(exp, c)| {
                                            serde_json::json!([exp, c.to_string()])
                                        })
                                        .collect(),
                                )
                            })
                            .collect(),
                    )
                })
                .collect(),
        )
    };
    serde_json::json!({
        "I": p.labels,
        "A_plus": dump(&p.a_plus),
        "A_minus": dump(&p.a_minus),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    fn case(k: usize) -> MatrixPair {
        presets::table1(k).to_matrices()
    }

    #[test]
    fn case1_matrices() {
        let p = case(1);
        // A+ = [[1+z^2, -z], [-z, 1+z^2]], A- = diag(1+z^2, 1+z^2)
        assert_eq!(p.a_plus[0][0], ZPoly::from_terms([(0, 1), (2, 1)]));
        assert_eq!(p.a_plus[0][1], ZPoly::from_terms([(1, -1)]));
        assert_eq!(p.a_plus[1][0], ZPoly::from_terms([(1, -1)]));
        assert_eq!(p.a_minus[0][1], ZPoly::zero());
        assert_eq!(p.a_minus[1][1], ZPoly::from_terms([(0, 1), (2, 1)]));
    }

    #[test]
    fn zero_interaction_rank1() {
        let d = YDatum::new(vec!["1".into()], vec![1], []).unwrap();
        let p = d.to_matrices();
        assert_eq!(p.a_plus[0][0], ZPoly::from_terms([(0, 1), (1, 1)]));
        assert_eq!(p.a_plus, p.a_minus);
    }

    #[test]
    fn case3_has_minus_z3_minus_z7() {
        let p = case(3);
        assert_eq!(p.a_minus[1][0], ZPoly::from_terms([(3, -1), (7, -1)]));
    }

    #[test]
    fn round_trip_all_presets() {
        for k in 1..=6 {
            let d = presets::table1(k);
            let p = d.to_matrices();
            assert_eq!(matrices_to_ydatum(&p).unwrap(), d);
            let dop = d.opposite();
            assert_eq!(matrices_to_ydatum(&dop.to_matrices()).unwrap(), dop);
        }
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        for k in 1..=6 {
            let d = presets::table1(k);
            let s = d.to_json();
            let back = YDatum::from_json(&s).unwrap();
            assert_eq!(back, d);
            assert_eq!(back.to_json(), s);
        }
    }

    #[test]
    fn positive_off_diagonal_rejected() {
        let mut p = case(1);
        p.a_plus[0][1] = ZPoly::from_terms([(1, 1)]); // +z instead of -z
        assert!(matrices_to_ydatum(&p).is_err());
    }

    #[test]
    fn mismatched_diagonals_rejected() {
        let mut p = case(1);
        p.a_minus[0][0] = ZPoly::from_terms([(0, 1), (3, 1)]);
        assert!(matrices_to_ydatum(&p).is_err());
    }

    #[test]
    fn support_violation_named() {
        let err = YDatum::new(
            vec!["1".into()],
            vec![1],
            [((0usize, 0usize, 0u32), 1i64)],
        )
        .unwrap_err();
        assert!(err.to_string().contains("Eq-Y1 violation at (1,1,0)"));
    }

    #[test]
    fn symplectic_table1() {
        for k in 1..=6 {
            assert!(check_symplectic(&case(k)), "case {k}");
        }
    }

    #[test]
    fn symplectic_trivial_equal_pair() {
        let d = YDatum::new(vec!["1".into(), "2".into()], vec![3, 2], []).unwrap();
        assert!(check_symplectic(&d.to_matrices()));
    }

    #[test]
    fn symplectic_fails_on_shifted_exponent() {
        // Case (2) with the A- off-diagonal -z^3 moved to -z^4.
        let d = presets::table1(2);
        let perturbed = d
            .perturbed(1, 0, 3, 1)
            .unwrap()
            .perturbed(1, 0, 4, -1)
            .unwrap();
        assert!(!check_symplectic(&perturbed.to_matrices()));
    }

    #[test]
    fn eval_at_one_goldens() {
        let (ap, am) = eval_at_one(&case(2));
        let as_i64 = |m: &Vec<Vec<BigInt>>| -> Vec<Vec<i64>> {
            m.iter()
                .map(|r| r.iter().map(|c| i64::try_from(c.clone()).unwrap()).collect())
                .collect()
        };
        assert_eq!(as_i64(&ap), vec![vec![2, -1], vec![-2, 2]]);
        assert_eq!(as_i64(&am), vec![vec![2, 0], vec![-1, 2]]);
        let (ap6, am6) = eval_at_one(&case(6));
        assert_eq!(as_i64(&ap6), vec![vec![2, -1], vec![-1, 1]]);
        assert_eq!(as_i64(&am6), vec![vec![2, 0], vec![0, 2]]);
    }

    #[test]
    fn z_integer_values() {
        assert_eq!(z_integer(2, 3), ZPoly::from_terms([(0, 1), (3, 1)]));
        assert_eq!(z_integer(0, 5), ZPoly::zero());
        assert_eq!(z_integer(3, 2), ZPoly::from_terms([(0, 1), (2, 1), (4, 1)]));
    }

    #[test]
    fn opposite_involutive_and_symplectic_stable() {
        for k in 1..=6 {
            let p = case(k);
            assert_eq!(p.opposite().opposite(), p);
            assert!(check_symplectic(&p.opposite()));
        }
    }

    #[test]
    fn decomposability() {
        let d1 = YDatum::new(vec!["a".into()], vec![1], []).unwrap();
        let d2 = YDatum::new(vec!["b".into()], vec![2], []).unwrap();
        let s = direct_sum(&d1.to_matrices(), &d2.to_matrices()).unwrap();
        assert!(is_decomposable(&s));
        assert!(!is_decomposable(&case(5)));
        // Off-diagonal zero only in A+ does not split the pair.
        let p = case(1); // A- is diagonal but A+ is not
        assert!(!is_decomposable(&p));
    }
}
