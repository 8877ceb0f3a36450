//! The finite-type classification pipeline for rank-2 pairs: enumerate
//! candidate values at `z = 1`, filter by positivity and the impossibility
//! lemmas, lift each survivor to polynomial pairs by bounded search over
//! exponents, and reduce the results to the six canonical classes.
//!
//! The lift step runs two independent routes: a brute-force search over
//! exponent multisets constrained by the symplectic identity, and closed
//! parametric families in `(r, a)` derived from the exponent-matching linear
//! systems. The routes must agree exactly.

use num::bigint::BigInt;
use num::rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::par::{map_collect, Strategy};
use crate::polymat::YDatum;
use crate::presets;
use crate::ysystem::{decompose_slices, find_period, find_reddening, QuiverData, SliceWord};
use crate::zpoly::ZPoly;

/// A 2x2 integer matrix, the value of one polynomial matrix at `z = 1`.
pub type Mat1 = [[i64; 2]; 2];

/// A candidate pair of values at `z = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct CandidatePair1 {
    pub a_plus: Mat1,
    pub a_minus: Mat1,
}

/// Trace and determinant are positive: the necessary condition for finite
/// type at `z = 1`.
pub fn positivity_filter(m: &Mat1) -> bool {
    let tr = m[0][0] + m[1][1];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    tr > 0 && det > 0
}

/// Whether a single row vector `v = (1, t)` with `t > 0` satisfies
/// `v A_+ > 0` and `v A_- > 0`: exact open-interval intersection.
pub fn common_positive_vector(c: &CandidatePair1) -> bool {
    // Each column j of each matrix imposes m[0][j] + t * m[1][j] > 0.
    let mut lo = BigRational::from(BigInt::from(0));
    let mut hi: Option<BigRational> = None;
    for m in [&c.a_plus, &c.a_minus] {
        for j in 0..2 {
            let a = BigRational::from(BigInt::from(m[0][j]));
            let b = m[1][j];
            if b > 0 {
                let bound = -a / BigRational::from(BigInt::from(b));
                if bound > lo {
                    lo = bound;
                }
            } else if b < 0 {
                let bound = -a / BigRational::from(BigInt::from(b));
                if hi.as_ref().map(|h| bound < *h).unwrap_or(true) {
                    hi = Some(bound);
                }
            } else if m[0][j] <= 0 {
                return false;
            }
        }
    }
    match hi {
        Some(h) => lo < h,
        None => true,
    }
}

/// Which impossibility pattern a candidate pair matches, if any.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BanViolation {
    /// Both diagonal-2 rows with odd off-diagonals.
    OddOddDiag22,
    /// Diagonal-2 row with odd off-diagonal against diagonal-1 row with odd
    /// off-diagonal.
    OddOddDiag21,
    /// Both rows exactly (1, -1).
    BothOneOne,
    /// Row (1, 0) against a row with diagonal 1.
    OneZeroAgainstOne,
    /// Both matrices vanish at the same off-diagonal position
    /// (indecomposable pairs only).
    Triangular,
}

/// Check the impossibility lemmas, up to simultaneous index permutation and
/// swapping the two matrices.
pub fn ban_check(c: &CandidatePair1) -> Option<BanViolation> {
    let row = |m: &Mat1, i: usize| (m[i][i], m[i][1 - i]);
    for i in 0..2 {
        let (dp, op) = row(&c.a_plus, i);
        let (dm, om) = row(&c.a_minus, i);
        let odd = |x: i64| (-x) > 0 && (-x) % 2 == 1;
        if dp == 2 && dm == 2 && odd(op) && odd(om) {
            return Some(BanViolation::OddOddDiag22);
        }
        for ((d1, o1), (d2, o2)) in [((dp, op), (dm, om)), ((dm, om), (dp, op))] {
            if d1 == 2 && d2 == 1 && odd(o1) && odd(o2) {
                return Some(BanViolation::OddOddDiag21);
            }
            if d1 == 1 && o1 == 0 && d2 == 1 {
                return Some(BanViolation::OneZeroAgainstOne);
            }
        }
        if dp == 1 && op == -1 && dm == 1 && om == -1 {
            return Some(BanViolation::BothOneOne);
        }
        if c.a_plus[i][1 - i] == 0 && c.a_minus[i][1 - i] == 0 {
            return Some(BanViolation::Triangular);
        }
    }
    None
}

fn symplectic_at_one(c: &CandidatePair1) -> bool {
    // A+(1) A-(1)^T symmetric.
    let p = &c.a_plus;
    let m = &c.a_minus;
    p[0][0] * m[1][0] + p[0][1] * m[1][1] == p[1][0] * m[0][0] + p[1][1] * m[0][1]
}

fn permuted(m: &Mat1) -> Mat1 {
    [[m[1][1], m[1][0]], [m[0][1], m[0][0]]]
}

fn orbit(c: &CandidatePair1) -> [CandidatePair1; 4] {
    let perm = CandidatePair1 {
        a_plus: permuted(&c.a_plus),
        a_minus: permuted(&c.a_minus),
    };
    let op = CandidatePair1 {
        a_plus: c.a_minus,
        a_minus: c.a_plus,
    };
    let perm_op = CandidatePair1 {
        a_plus: perm.a_minus,
        a_minus: perm.a_plus,
    };
    [*c, perm, op, perm_op]
}

/// Representative of the permutation/sign orbit, preferring the layout with
/// `A_-` upper-triangular and `A_+` top-right entry -1.
fn orbit_representative(c: &CandidatePair1) -> CandidatePair1 {
    let variants = orbit(c);
    let preferred = |v: &&CandidatePair1| v.a_minus[0][1] == 0 && v.a_plus[0][1] == -1;
    variants
        .iter()
        .filter(preferred)
        .filter(|v| v.a_plus[0][0] == 2)
        .min()
        .or_else(|| variants.iter().filter(preferred).min())
        .copied()
        .unwrap_or_else(|| *variants.iter().min().expect("orbit nonempty"))
}

/// All candidate pairs surviving positivity, the symplectic identity at
/// `z = 1`, the common-positive-vector test, and (optionally) the
/// impossibility lemmas; deduplicated up to index permutation and sign
/// change.
pub fn pair_search_with(use_ban: bool) -> Vec<CandidatePair1> {
    let mut out: Vec<CandidatePair1> = Vec::new();
    let mut mats: Vec<Mat1> = Vec::new();
    for d0 in [1i64, 2] {
        for d1 in [1i64, 2] {
            for o0 in -4..=0i64 {
                for o1 in -4..=0i64 {
                    mats.push([[d0, o0], [o1, d1]]);
                }
            }
        }
    }
    for p in &mats {
        if !positivity_filter(p) {
            continue;
        }
        for m in &mats {
            if !positivity_filter(m) {
                continue;
            }
            let c = CandidatePair1 {
                a_plus: *p,
                a_minus: *m,
            };
            if !symplectic_at_one(&c) || !common_positive_vector(&c) {
                continue;
            }
            if use_ban && ban_check(&c).is_some() {
                continue;
            }
            let rep = orbit_representative(&c);
            if !out.contains(&rep) {
                out.push(rep);
            }
        }
    }
    out.sort();
    out
}

/// `pair_search_with(true)`: the filtered candidate list.
pub fn pair_search() -> Vec<CandidatePair1> {
    pair_search_with(true)
}

// ---------------------------------------------------------------------------
// Lift to polynomial pairs
// ---------------------------------------------------------------------------

/// A parametric family of lifts for one candidate, with every in-range
/// instantiation materialized.
#[derive(Clone, Debug)]
pub struct LiftFamily {
    pub candidate: CandidatePair1,
    /// Human-readable parametrization, e.g. exponent formulas in `(r, a)`.
    pub description: String,
    pub instances: Vec<YDatum>,
}

fn datum2(r: Vec<u32>, n: Vec<((usize, usize, u32), i64)>) -> YDatum {
    YDatum::new(vec!["1".into(), "2".into()], r, n).expect("family instance is valid")
}

/// The six candidate pairs in canonical layout, in table order.
pub fn table_candidates() -> Vec<CandidatePair1> {
    vec![
        CandidatePair1 { a_plus: [[2, -1], [-1, 2]], a_minus: [[2, 0], [0, 2]] },
        CandidatePair1 { a_plus: [[2, -1], [-2, 2]], a_minus: [[2, 0], [-1, 2]] },
        CandidatePair1 { a_plus: [[2, -1], [-3, 2]], a_minus: [[2, 0], [-2, 2]] },
        CandidatePair1 { a_plus: [[2, -1], [-1, 2]], a_minus: [[1, 0], [0, 1]] },
        CandidatePair1 { a_plus: [[2, -1], [-2, 2]], a_minus: [[1, 0], [0, 2]] },
        CandidatePair1 { a_plus: [[2, -1], [-1, 1]], a_minus: [[2, 0], [0, 2]] },
    ]
}

/// Closed-form instances for table row `row` (1-based) with all periods
/// bounded by `r_max`, derived from the exponent-matching linear systems.
pub fn family_instances_by_row(row: usize, r_max: u32) -> Vec<YDatum> {
    let mut out = Vec::new();
    match row {
        // rows 1..=3: r1 = r, r2 = (2n-1) r, off-diagonals z^a and
        // sum_i z^{(2i-1) r - a}; A- lower entry sum_i z^{2 i r - a}.
        1..=3 => {
            let n = row as u32;
            for r in 2..=r_max {
                if (2 * n - 1) * r > r_max {
                    break;
                }
                for a in 1..r {
                    let mut ns = vec![((0usize, 1usize, a), 1i64)];
                    for i in 1..=n {
                        ns.push(((1, 0, (2 * i - 1) * r - a), 1));
                    }
                    for i in 1..n {
                        ns.push(((1, 0, 2 * i * r - a), -1));
                    }
                    out.push(datum2(vec![r, (2 * n - 1) * r], ns));
                }
            }
        }
        // row 4: r1 = r2 = 2r, off-diagonals z^a, z^{2r-a}; A- diagonal
        // 1 + z^{2r} - z^r on both indices.
        4 => {
            for r in 1..=r_max / 2 {
                for a in 1..2 * r {
                    out.push(datum2(
                        vec![2 * r, 2 * r],
                        vec![
                            ((0, 1, a), 1),
                            ((1, 0, 2 * r - a), 1),
                            ((0, 0, r), -1),
                            ((1, 1, r), -1),
                        ],
                    ));
                }
            }
        }
        // row 5: r1 = 2r, r2 = 3r, off-diagonals z^a and z^{2r-a}+z^{3r-a};
        // A- diagonal 1 + z^{2r} - z^r on the first index.
        5 => {
            for r in 1..=r_max / 3 {
                for a in 1..2 * r {
                    out.push(datum2(
                        vec![2 * r, 3 * r],
                        vec![
                            ((0, 1, a), 1),
                            ((1, 0, 2 * r - a), 1),
                            ((1, 0, 3 * r - a), 1),
                            ((0, 0, r), -1),
                        ],
                    ));
                }
            }
        }
        // row 6: r1 = r2 = 2r, off-diagonals z^a, z^{2r-a}; A+ diagonal
        // 1 + z^{2r} - z^r on the second index.
        6 => {
            for r in 1..=r_max / 2 {
                for a in 1..2 * r {
                    out.push(datum2(
                        vec![2 * r, 2 * r],
                        vec![((0, 1, a), 1), ((1, 0, 2 * r - a), 1), ((1, 1, r), 1)],
                    ));
                }
            }
        }
        _ => {}
    }
    out
}

fn family_description(row: usize) -> String {
    match row {
        1..=3 => format!(
            "r1=r, r2={}r, n12={{a}}, n21={{(2i-1)r-a}} minus {{2ir-a}}, 0<a<r",
            2 * row - 1
        ),
        4 => "r1=r2=2r, n12={a}, n21={2r-a}, n11=n22=-{r}, 0<a<2r".into(),
        5 => "r1=2r, r2=3r, n12={a}, n21={2r-a,3r-a}, n11=-{r}, 0<a<2r".into(),
        6 => "r1=r2=2r, n12={a}, n21={2r-a}, n22=+{r}, 0<a<2r".into(),
        _ => "unidentified".into(),
    }
}

/// Multisets of `count` exponents drawn from `1..=max_exp`.
fn exponent_multisets(max_exp: u32, count: i64) -> Vec<Vec<u32>> {
    if count < 0 {
        return Vec::new();
    }
    let mut out = vec![Vec::new()];
    for _ in 0..count {
        let mut next = Vec::new();
        for ms in &out {
            let start = ms.last().copied().unwrap_or(1);
            for e in start..=max_exp {
                let mut v = ms.clone();
                v.push(e);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

fn multiset_poly(ms: &[u32]) -> ZPoly {
    let mut p = ZPoly::zero();
    for &e in ms {
        p.add_term(e as i64, BigInt::from(1));
    }
    p
}

fn disjoint(a: &[u32], b: &[u32]) -> bool {
    a.iter().all(|x| !b.contains(x))
}

fn is_symmetric(p: &ZPoly) -> bool {
    *p == p.reciprocal()
}

/// One row of a half-built pair: the diagonal and off-diagonal entries of
/// both matrices, plus the raw exponent multisets.
#[derive(Clone)]
struct RowHalf {
    diag_p: ZPoly,
    diag_m: ZPoly,
    off_p: ZPoly,
    off_m: ZPoly,
    f_p: Vec<u32>,
    f_m: Vec<u32>,
    g_p: Vec<u32>,
    g_m: Vec<u32>,
}

/// Enumerate the row halves for period `r` with the given coefficient sums,
/// keeping only those satisfying the diagonal block of the symplectic
/// identity: `diag_p(z) diag_m(1/z) + off_p(z) off_m(1/z)` symmetric.
fn row_halves(r: u32, diag_p_sum: i64, diag_m_sum: i64, off_p_sum: i64, off_m_sum: i64) -> Vec<RowHalf> {
    let max_exp = r.saturating_sub(1);
    let mut out = Vec::new();
    let diag_base = ZPoly::from_terms([(0, 1), (r as i64, 1)]);
    for f_p in exponent_multisets(max_exp, 2 - diag_p_sum) {
        for f_m in exponent_multisets(max_exp, 2 - diag_m_sum) {
            if !disjoint(&f_p, &f_m) {
                continue;
            }
            let diag_p = diag_base.sub(&multiset_poly(&f_p));
            let diag_m = diag_base.sub(&multiset_poly(&f_m));
            for g_p in exponent_multisets(max_exp, -off_p_sum) {
                for g_m in exponent_multisets(max_exp, -off_m_sum) {
                    if !disjoint(&g_p, &g_m) {
                        continue;
                    }
                    let off_p = multiset_poly(&g_p).neg();
                    let off_m = multiset_poly(&g_m).neg();
                    let block = diag_p
                        .mul(&diag_m.reciprocal())
                        .add(&off_p.mul(&off_m.reciprocal()));
                    if is_symmetric(&block) {
                        out.push(RowHalf {
                            diag_p: diag_p.clone(),
                            diag_m: diag_m.clone(),
                            off_p,
                            off_m,
                            f_p: f_p.clone(),
                            f_m: f_m.clone(),
                            g_p: g_p.clone(),
                            g_m: g_m.clone(),
                        });
                    }
                }
            }
        }
    }
    out
}

/// Brute-force lift search: all pairs with the given value at `z = 1` and
/// periods `r_i <= r_max`, found by enumerating exponent multisets under the
/// symplectic identity.
pub fn lift_search(c: &CandidatePair1, r_max: u32, strategy: Strategy) -> Vec<YDatum> {
    // Row 1 of the pair depends only on r1, row 2 only on r2.
    let halves_row1: Vec<(u32, Vec<RowHalf>)> = (1..=r_max)
        .map(|r1| {
            (
                r1,
                row_halves(r1, c.a_plus[0][0], c.a_minus[0][0], c.a_plus[0][1], c.a_minus[0][1]),
            )
        })
        .collect();
    let halves_row2: Vec<(u32, Vec<RowHalf>)> = (1..=r_max)
        .map(|r2| {
            (
                r2,
                row_halves(r2, c.a_plus[1][1], c.a_minus[1][1], c.a_plus[1][0], c.a_minus[1][0]),
            )
        })
        .collect();
    let mut tasks = Vec::new();
    for (r1, h1s) in &halves_row1 {
        for (r2, h2s) in &halves_row2 {
            if !h1s.is_empty() && !h2s.is_empty() {
                tasks.push((*r1, h1s.clone(), *r2, h2s.clone()));
            }
        }
    }
    let found = map_collect(strategy, tasks, |(r1, h1s, r2, h2s)| {
        let mut local = Vec::new();
        for h1 in &h1s {
            for h2 in &h2s {
                // Cross block: A+(z) A-(1/z)^T entry (1,2) must equal entry
                // (2,1) at 1/z.
                let v = h1
                    .diag_p
                    .mul(&h2.off_m.reciprocal())
                    .add(&h1.off_p.mul(&h2.diag_m.reciprocal()));
                let w = h2
                    .off_p
                    .mul(&h1.diag_m.reciprocal())
                    .add(&h2.diag_p.mul(&h1.off_m.reciprocal()));
                if v != w.reciprocal() {
                    continue;
                }
                let mut ns: Vec<((usize, usize, u32), i64)> = Vec::new();
                let mut push = |i: usize, j: usize, ms: &[u32], sign: i64| {
                    for &e in ms {
                        ns.push(((i, j, e), sign));
                    }
                };
                push(0, 0, &h1.f_p, 1);
                push(0, 0, &h1.f_m, -1);
                push(0, 1, &h1.g_p, 1);
                push(0, 1, &h1.g_m, -1);
                push(1, 1, &h2.f_p, 1);
                push(1, 1, &h2.f_m, -1);
                push(1, 0, &h2.g_p, 1);
                push(1, 0, &h2.g_m, -1);
                // Aggregate duplicate exponents into multiplicities.
                let mut agg = std::collections::BTreeMap::new();
                for (k, v) in ns {
                    *agg.entry(k).or_insert(0i64) += v;
                }
                if let Ok(d) = YDatum::new(
                    vec!["1".into(), "2".into()],
                    vec![r1, r2],
                    agg,
                ) {
                    // The classification concerns indecomposable pairs.
                    if !crate::polymat::is_decomposable(&d.to_matrices()) {
                        local.push(d);
                    }
                }
            }
        }
        local
    });
    found.into_iter().flatten().collect()
}

/// Lift a candidate to parametric families, cross-checking the brute-force
/// search against the closed-form instances.
pub fn lift_to_z(c: &CandidatePair1, r_max: u32, strategy: Strategy) -> Result<Vec<LiftFamily>> {
    let brute = lift_search(c, r_max, strategy);
    let row = table_candidates().iter().position(|t| t == c).map(|i| i + 1);
    match row {
        Some(row) => {
            let formula = family_instances_by_row(row, r_max);
            let brute_set: std::collections::BTreeSet<String> =
                brute.iter().map(|d| d.to_json()).collect();
            let formula_set: std::collections::BTreeSet<String> =
                formula.iter().map(|d| d.to_json()).collect();
            if brute_set != formula_set {
                let missing = formula_set.difference(&brute_set).count();
                let extra = brute_set.difference(&formula_set).count();
                return Err(Error::Property(format!(
                    "lift search disagrees with the closed-form family for row {row}: \
                     {missing} missing, {extra} extra"
                )));
            }
            Ok(vec![LiftFamily {
                candidate: *c,
                description: family_description(row),
                instances: formula,
            }])
        }
        None => {
            if brute.is_empty() {
                Ok(Vec::new())
            } else {
                Ok(vec![LiftFamily {
                    candidate: *c,
                    description: family_description(0),
                    instances: brute,
                }])
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Canonicalization and the full pipeline
// ---------------------------------------------------------------------------

/// Result of reducing a pair to its canonical class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Canonical {
    /// Table row 1..=6.
    pub row: usize,
    /// Whether the pair matches the opposite orientation of the row.
    pub opposite: bool,
    /// The canonical representative.
    pub datum: YDatum,
}

fn table_words() -> Result<Vec<(usize, bool, SliceWord)>> {
    let mut out = Vec::new();
    for row in 1..=6 {
        let d = presets::table1(row);
        out.push((row, false, decompose_slices(&QuiverData::build(&d)?)?));
        let op = d.opposite();
        out.push((row, true, decompose_slices(&QuiverData::build(&op)?)?));
    }
    Ok(out)
}

/// Reduce an indecomposable symplectic pair to its canonical class via
/// index permutation and change of slices; orientation is reported, not
/// folded into the class.
pub fn canonicalize(d: &YDatum) -> Result<Canonical> {
    let word = decompose_slices(&QuiverData::build(d)?)?;
    for (row, opposite, tword) in table_words()? {
        if word.cyclic_eq(&tword) {
            return Ok(Canonical {
                row,
                opposite,
                datum: presets::table1(row),
            });
        }
    }
    Err(Error::Property(
        "pair does not reduce to any of the six canonical classes".into(),
    ))
}

/// Report for a single candidate pair.
#[derive(Clone, Debug, Serialize)]
pub struct CandidateReport {
    pub pair: CandidatePair1,
    /// Which ban pattern applies (populated in ablation runs).
    pub ban: Option<BanViolation>,
    pub family: Option<String>,
    pub instance_count: usize,
}

/// One canonical class in the final report.
#[derive(Clone, Debug, Serialize)]
pub struct ClassEntry {
    pub row: usize,
    pub datum: serde_json::Value,
    pub h_plus: u32,
    pub h_minus: u32,
    pub period: u32,
    pub instance_count: usize,
}

/// The end-to-end classification report.
#[derive(Clone, Debug, Serialize)]
pub struct ClassifyReport {
    pub r_max: u32,
    pub ban_enabled: bool,
    pub candidates: Vec<CandidateReport>,
    pub classes: Vec<ClassEntry>,
}

/// Run the full pipeline: candidate search, lifts, canonicalization, and
/// the dynamical invariants of each class.
pub fn classify(r_max: u32, strategy: Strategy) -> Result<ClassifyReport> {
    classify_with_options(r_max, true, strategy)
}

pub fn classify_with_options(
    r_max: u32,
    use_ban: bool,
    strategy: Strategy,
) -> Result<ClassifyReport> {
    let cands = pair_search_with(use_ban);
    let table = table_candidates();
    let mut candidates: Vec<CandidateReport> = Vec::new();
    let mut per_row: std::collections::BTreeMap<usize, usize> = std::collections::BTreeMap::new();
    for c in &cands {
        let row = table.iter().position(|t| t == c).map(|i| i + 1);
        let families = lift_to_z(c, r_max, strategy)?;
        let instance_count: usize = families.iter().map(|f| f.instances.len()).sum();
        match row {
            Some(row) => {
                // Every instance must reduce to its candidate's class.
                for f in &families {
                    for inst in &f.instances {
                        let canon = canonicalize(inst)?;
                        if canon.row != row || canon.opposite {
                            return Err(Error::Property(format!(
                                "instance of candidate row {row} reduced to row {} \
                                 (opposite: {})",
                                canon.row, canon.opposite
                            )));
                        }
                    }
                }
                per_row.insert(row, instance_count);
            }
            None => {
                if instance_count > 0 {
                    return Err(Error::Property(format!(
                        "candidate outside the six classes admits {instance_count} lifts: {c:?}"
                    )));
                }
            }
        }
        candidates.push(CandidateReport {
            pair: *c,
            ban: ban_check(c),
            family: families.first().map(|f| f.description.clone()),
            instance_count,
        });
    }
    let rows: Vec<usize> = per_row.keys().copied().collect();
    if rows != vec![1, 2, 3, 4, 5, 6] {
        return Err(Error::Property(format!(
            "classification did not recover exactly the six classes: got rows {rows:?}"
        )));
    }
    let mut classes = Vec::new();
    for (row, count) in per_row {
        let d = presets::table1(row);
        let q = QuiverData::build(&d)?;
        let h_plus = find_reddening(&q, true, 200)?;
        let h_minus = find_reddening(&q, false, 200)?;
        let period = find_period(&q, 4 * (h_plus + h_minus), strategy)?;
        classes.push(ClassEntry {
            row,
            datum: serde_json::from_str(&d.to_json()).expect("valid JSON"),
            h_plus,
            h_minus,
            period,
            instance_count: count,
        });
    }
    Ok(ClassifyReport {
        r_max,
        ban_enabled: use_ban,
        candidates,
        classes,
    })
}
