//! End-to-end acceptance suite. Each test covers one numbered criterion and
//! prints a single pass/fail line (visible with `--nocapture`; the test name
//! itself carries the verdict in normal runs).

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ysys::classifier;
use ysys::nahm::{self, NahmEnumeration, QMat};
use ysys::polymat::check_symplectic;
use ysys::presets;
use ysys::qdilog;
use ysys::semifield::PosRat;
use ysys::ysystem::{
    self, check_normalized, check_y_system, confirm_period_posrat, find_period, find_reddening,
    QuiverData, Trace,
};
use ysys::zpoly::ZPoly;
use ysys::{BMat, Strategy, YDatum};

fn rat(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

fn report(n: u32, name: &str, r: Result<(), String>) {
    match r {
        Ok(()) => println!("criterion {n} ({name}): PASS"),
        Err(e) => {
            println!("criterion {n} ({name}): FAIL - {e}");
            panic!("criterion {n} ({name}) failed: {e}");
        }
    }
}

fn quiver(k: usize) -> QuiverData {
    QuiverData::build(&presets::table1(k)).expect("table presets build")
}

/// Reddening lengths (h+, h-) for table rows 1..=6.
const H_GOLDEN: [(u32, u32); 6] = [(3, 2), (8, 6), (18, 10), (3, 3), (5, 3), (5, 2)];
/// Tropical/exact periods for table rows 1..=6.
const PERIOD_GOLDEN: [u32; 6] = [10, 14, 28, 12, 8, 7];

// ---------------------------------------------------------------------------
// 1. Symplectic verification
// ---------------------------------------------------------------------------

#[test]
fn criterion_01_symplectic() {
    let run = || -> Result<(), String> {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for k in 1..=6 {
            let d = presets::table1(k);
            let base = d.to_matrices();
            if !check_symplectic(&base) {
                return Err(format!("table row {k} is not symplectic"));
            }
            let rs = d.r().to_vec();
            // Perturb a single interaction (off-diagonal) coefficient of one
            // matrix. Diagonal bumps are excluded: the table pairs have
            // genuine symplectic neighbours there (e.g. adding n_{11;1} = 1
            // to row 1 yields an index-swapped instance of row 6).
            for _ in 0..100 {
                let i = rng.gen_range(0..2usize);
                let j = 1 - i;
                let p = rng.gen_range(0..=rs[i]) as i64;
                let delta = *[-2i64, -1, 1, 2].get(rng.gen_range(0..4)).unwrap();
                let mut m = base.clone();
                let target = if rng.gen_bool(0.5) {
                    &mut m.a_plus
                } else {
                    &mut m.a_minus
                };
                target[i][j] = target[i][j].add(&ZPoly::monomial(p, delta));
                if check_symplectic(&m) {
                    return Err(format!(
                        "row {k}: perturbation (i={i}, j={j}, p={p}, delta={delta}) \
                         unexpectedly stays symplectic"
                    ));
                }
            }
        }
        Ok(())
    };
    report(1, "symplectic", run());
}

// ---------------------------------------------------------------------------
// 2. Quiver goldens
// ---------------------------------------------------------------------------

fn arrow_set(q: &QuiverData) -> Vec<(String, String, i64)> {
    let mut got: Vec<(String, String, i64)> = q
        .b()
        .arrows()
        .into_iter()
        .map(|(s, t, m)| (q.vertex_label(s), q.vertex_label(t), m))
        .collect();
    got.sort();
    got
}

fn arrows(list: &[(&str, &str)]) -> Vec<(String, String, i64)> {
    let mut v: Vec<(String, String, i64)> = list
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string(), 1))
        .collect();
    v.sort();
    v
}

fn quiver_components(b: &BMat) -> Vec<Vec<usize>> {
    let n = b.size();
    let mut comp = vec![usize::MAX; n];
    let mut count = 0;
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let mut stack = vec![s];
        comp[s] = count;
        while let Some(v) = stack.pop() {
            for w in 0..n {
                if b.get(v, w) != 0 && comp[w] == usize::MAX {
                    comp[w] = count;
                    stack.push(w);
                }
            }
        }
        count += 1;
    }
    let mut out = vec![Vec::new(); count];
    for (v, &c) in comp.iter().enumerate() {
        out[c].push(v);
    }
    out
}

#[test]
fn criterion_02_quiver_goldens() {
    let run = || -> Result<(), String> {
        let goldens: [Vec<(String, String, i64)>; 6] = [
            arrows(&[("1[0]", "2[1]"), ("2[0]", "1[1]")]),
            arrows(&[
                ("1[0]", "2[1]"),
                ("2[3]", "1[0]"),
                ("1[0]", "2[5]"),
                ("2[1]", "2[3]"),
                ("2[0]", "1[1]"),
                ("1[1]", "2[2]"),
                ("2[4]", "1[1]"),
                ("2[2]", "2[4]"),
            ]),
            arrows(&[
                ("1[0]", "2[1]"),
                ("2[3]", "1[0]"),
                ("1[0]", "2[5]"),
                ("2[7]", "1[0]"),
                ("1[0]", "2[9]"),
                ("2[1]", "2[3]"),
                ("2[1]", "2[7]"),
                ("2[5]", "2[7]"),
                ("2[0]", "1[1]"),
                ("1[1]", "2[2]"),
                ("2[4]", "1[1]"),
                ("1[1]", "2[6]"),
                ("2[8]", "1[1]"),
                ("2[2]", "2[4]"),
                ("2[2]", "2[8]"),
                ("2[6]", "2[8]"),
            ]),
            arrows(&[
                ("1[0]", "2[1]"),
                ("2[1]", "2[0]"),
                ("2[0]", "1[1]"),
                ("1[1]", "1[0]"),
            ]),
            arrows(&[
                ("2[0]", "1[1]"),
                ("1[1]", "1[0]"),
                ("1[0]", "2[2]"),
                ("1[0]", "2[1]"),
                ("2[1]", "1[1]"),
            ]),
            arrows(&[("1[0]", "2[1]"), ("2[0]", "2[1]"), ("2[0]", "1[1]")]),
        ];
        for k in 1..=6usize {
            let q = quiver(k);
            let d = q.datum();
            // Vertex set: {(i, p) : 0 <= p < r_i}.
            let expected_n: usize = d.r().iter().map(|&r| r as usize).sum();
            if q.num_vertices() != expected_n {
                return Err(format!("row {k}: wrong vertex count"));
            }
            if arrow_set(&q) != goldens[k - 1] {
                return Err(format!("row {k}: arrow set differs from golden"));
            }
            // The shift sends (i, p) to (i, p-1 mod r_i).
            for (v, &(i, p)) in q.vertices().iter().enumerate() {
                let r = d.r()[i];
                let want = q.vertex_index(i, (p + r - 1) % r);
                if q.nu()[v] != want {
                    return Err(format!("row {k}: shift image of vertex {v} is wrong"));
                }
            }
            // Rows 1-3 have two components that the shift interchanges.
            let comps = quiver_components(q.b());
            if k <= 3 {
                if comps.len() != 2 {
                    return Err(format!("row {k}: expected 2 components"));
                }
                for &v in &comps[0] {
                    if !comps[1].contains(&q.nu()[v]) {
                        return Err(format!(
                            "row {k}: shift does not interchange the components"
                        ));
                    }
                }
            } else if comps.len() != 1 {
                return Err(format!("row {k}: expected a connected quiver"));
            }
        }
        Ok(())
    };
    report(2, "quiver goldens", run());
}

// ---------------------------------------------------------------------------
// 3. Reddening lengths
// ---------------------------------------------------------------------------

#[test]
fn criterion_03_reddening_lengths() {
    let run = || -> Result<(), String> {
        for k in 1..=6usize {
            let q = quiver(k);
            let hp = find_reddening(&q, true, 200).map_err(|e| e.to_string())?;
            let hm = find_reddening(&q, false, 200).map_err(|e| e.to_string())?;
            if (hp, hm) != H_GOLDEN[k - 1] {
                return Err(format!(
                    "row {k}: got ({hp}, {hm}), want {:?}",
                    H_GOLDEN[k - 1]
                ));
            }
        }
        Ok(())
    };
    report(3, "reddening lengths", run());
}

// ---------------------------------------------------------------------------
// 4. Periodicity
// ---------------------------------------------------------------------------

#[test]
fn criterion_04_periodicity() {
    let run = || -> Result<(), String> {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for k in 1..=6usize {
            let q = quiver(k);
            let (hp, hm) = H_GOLDEN[k - 1];
            let bound = 4 * (hp + hm);
            let omega =
                find_period(&q, bound, Strategy::Parallel).map_err(|e| e.to_string())?;
            if omega != PERIOD_GOLDEN[k - 1] {
                return Err(format!(
                    "row {k}: period {omega}, want {}",
                    PERIOD_GOLDEN[k - 1]
                ));
            }
            for trial in 0..5 {
                let init: Vec<PosRat> = (0..q.num_vertices())
                    .map(|_| PosRat::from_ints(rng.gen_range(1..=20), rng.gen_range(1..=20)))
                    .collect();
                let ok = confirm_period_posrat(&q, &init, omega).map_err(|e| e.to_string())?;
                if !ok {
                    return Err(format!("row {k}, trial {trial}: trajectory not periodic"));
                }
            }
        }
        Ok(())
    };
    report(4, "periodicity", run());
}

// ---------------------------------------------------------------------------
// 5. Universal solution property
// ---------------------------------------------------------------------------

#[test]
fn criterion_05_universal_solution() {
    let run = || -> Result<(), String> {
        for k in 1..=6usize {
            let q = quiver(k);
            let window = 2 * q.datum().r().iter().max().copied().unwrap_or(1) as i64 + 4;
            let trace = Trace::run(&q, q.initial_ratfun_seed(), 0, window, Strategy::Parallel)
                .map_err(|e| e.to_string())?;
            check_y_system(&trace).map_err(|e| format!("row {k}: {e}"))?;
            check_normalized(&trace).map_err(|e| format!("row {k}: {e}"))?;
        }
        Ok(())
    };
    report(5, "universal solution", run());
}

// ---------------------------------------------------------------------------
// 6. Classification
// ---------------------------------------------------------------------------

#[test]
fn criterion_06_classification() {
    let run = || -> Result<(), String> {
        let rep = classifier::classify(12, Strategy::Parallel).map_err(|e| e.to_string())?;
        if rep.classes.len() != 6 {
            return Err(format!("{} classes, want 6", rep.classes.len()));
        }
        for (idx, cls) in rep.classes.iter().enumerate() {
            let row = idx + 1;
            if cls.row != row {
                return Err(format!("class {idx} has row {}", cls.row));
            }
            if (cls.h_plus, cls.h_minus) != H_GOLDEN[idx] {
                return Err(format!("row {row}: wrong reddening lengths"));
            }
            if cls.period != PERIOD_GOLDEN[idx] {
                return Err(format!("row {row}: wrong period"));
            }
            if cls.instance_count == 0 {
                return Err(format!("row {row}: no instances found up to r_max"));
            }
        }
        let canon =
            classifier::canonicalize(&presets::slice_example()).map_err(|e| e.to_string())?;
        if canon.row != 1 || canon.opposite {
            return Err(format!(
                "slice example canonicalizes to ({}, opposite={})",
                canon.row, canon.opposite
            ));
        }
        Ok(())
    };
    report(6, "classification", run());
}

// ---------------------------------------------------------------------------
// 7. q-series interaction matrices
// ---------------------------------------------------------------------------

#[test]
fn criterion_07_nahm_k_matrices() {
    let run = || -> Result<(), String> {
        for (name, expected, _) in nahm::table2_goldens() {
            let row: usize = name
                .trim_start_matches("table1:")
                .trim_end_matches("op")
                .parse()
                .map_err(|_| format!("bad golden name {name}"))?;
            let mut d = presets::table1(row);
            if name.ends_with("op") {
                d = d.opposite();
            }
            let k = nahm::compute_k(&d.to_matrices()).map_err(|e| e.to_string())?;
            if k != expected {
                return Err(format!("{name}: K differs from the tabulated value"));
            }
            if !k.is_symmetric() || !k.is_positive_definite() {
                return Err(format!("{name}: K is not symmetric positive definite"));
            }
            // K of the opposite pair is the inverse.
            let k_op = nahm::compute_k(&d.opposite().to_matrices()).map_err(|e| e.to_string())?;
            if k.mul(&k_op) != QMat::identity(k.size()) {
                return Err(format!("{name}: K(op) is not the inverse of K"));
            }
        }
        Ok(())
    };
    report(7, "interaction matrices", run());
}

// ---------------------------------------------------------------------------
// 8. Rogers-Ramanujan identities
// ---------------------------------------------------------------------------

#[test]
fn criterion_08_rogers_ramanujan() {
    let run = || -> Result<(), String> {
        let order = rat(31);
        let k = QMat::from_i64(&[&[2]]);
        for (b, residue) in [(rat(0), 1u32), (rat(1), 2u32)] {
            let sum = nahm::nahm_expand(
                &k,
                &[b.clone()],
                &rat(0),
                &order,
                1000,
                NahmEnumeration::Box,
                Strategy::Sequential,
            )
            .map_err(|e| e.to_string())?;
            let product = nahm::rr_product(residue, &order);
            if !sum.eq_below(&product, &rat(31)) {
                return Err(format!("identity with linear term {b} fails below q^31"));
            }
        }
        Ok(())
    };
    report(8, "rogers-ramanujan", run());
}

// ---------------------------------------------------------------------------
// 9. Dual lattice enumeration
// ---------------------------------------------------------------------------

#[test]
fn criterion_09_nahm_enumeration_agreement() {
    let run = || -> Result<(), String> {
        let order = rat(10);
        for (name, k, _) in nahm::table2_goldens() {
            let b = vec![BigRational::zero(); k.size()];
            let via_box = nahm::nahm_expand(
                &k,
                &b,
                &rat(0),
                &order,
                1000,
                NahmEnumeration::Box,
                Strategy::Parallel,
            )
            .map_err(|e| e.to_string())?;
            let via_shell = nahm::nahm_expand(
                &k,
                &b,
                &rat(0),
                &order,
                1000,
                NahmEnumeration::Shell,
                Strategy::Parallel,
            )
            .map_err(|e| e.to_string())?;
            if !via_box.eq_below(&via_shell, &order) {
                return Err(format!("{name}: enumeration strategies disagree"));
            }
        }
        Ok(())
    };
    report(9, "dual enumeration", run());
}

// ---------------------------------------------------------------------------
// 10. Quantum dilogarithm identities
// ---------------------------------------------------------------------------

#[test]
fn criterion_10_qdilog_identities() {
    let run = || -> Result<(), String> {
        for k in 1..=6usize {
            let q = quiver(k);
            let (hp, hm) = H_GOLDEN[k - 1];
            let cap = if k == 2 || k == 3 { 4 } else { 6 };
            let ok = qdilog::identity_check(&q, hp, hm, cap).map_err(|e| e.to_string())?;
            if !ok {
                return Err(format!("row {k}: identity fails at degree {cap}"));
            }
        }
        // The pentagon identity: row 1 at degree 8.
        let q = quiver(1);
        if !qdilog::identity_check(&q, 3, 2, 8).map_err(|e| e.to_string())? {
            return Err("pentagon identity fails at degree 8".into());
        }
        Ok(())
    };
    report(10, "quantum dilogarithm", run());
}

// ---------------------------------------------------------------------------
// 11. Property suites
// ---------------------------------------------------------------------------

#[test]
fn criterion_11_property_suites() {
    let run = || -> Result<(), String> {
        // Mutation involution and skew-symmetry on the table quivers.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for k in 1..=6usize {
            let q = quiver(k);
            for _ in 0..20 {
                let v = rng.gen_range(0..q.num_vertices());
                let m = q.b().mutate(v);
                if !m.is_skew_symmetric() {
                    return Err(format!("row {k}: mutation breaks skew-symmetry"));
                }
                if m.mutate(v) != *q.b() {
                    return Err(format!("row {k}: mutation at {v} is not an involution"));
                }
            }
            // Sign coherence along all evolution prefixes up to h+.
            let (hp, _) = H_GOLDEN[k - 1];
            let mut seed = q.initial_tropical_seed();
            for u in 0..hp {
                if !seed.is_sign_coherent() {
                    return Err(format!("row {k}: c-vectors lose coherence at step {u}"));
                }
                seed = q.step(&seed, Strategy::Sequential).map_err(|e| e.to_string())?;
            }
        }
        // nu(mu_front(B)) = B on 200 randomized symplectic pairs drawn from
        // the lift families.
        let mut pool: Vec<YDatum> = Vec::new();
        for row in 1..=6 {
            pool.extend(classifier::family_instances_by_row(row, 16));
        }
        if pool.len() < 200 {
            return Err(format!("only {} family instances available", pool.len()));
        }
        for _ in 0..200 {
            let d = &pool[rng.gen_range(0..pool.len())];
            let q = QuiverData::build(d).map_err(|e| e.to_string())?;
            let mut b = q.b().clone();
            for &v in q.front() {
                b = b.mutate(v);
            }
            if b.apply_permutation(q.nu()) != *q.b() {
                return Err(format!(
                    "quiver is not preserved by the evolution for r = {:?}",
                    d.r()
                ));
            }
        }
        Ok(())
    };
    report(11, "property suites", run());
}

// ---------------------------------------------------------------------------
// Slice decomposition sanity used by the classification criterion
// ---------------------------------------------------------------------------

#[test]
fn slice_example_is_equivalent_to_row_one() {
    let eq = ysystem::slices_equivalent(&presets::slice_example(), &presets::table1(1))
        .expect("both pairs decompose");
    assert!(eq);
    let neq = ysystem::slices_equivalent(&presets::slice_example(), &presets::table1(4))
        .expect("both pairs decompose");
    assert!(!neq);
}
