//! From a matrix pair to quiver dynamics: the unfolded quiver on vertices
//! `(i, p)`, its shift automorphism, discrete-time evolution over a
//! semifield, the defining recurrence check, reddening and periodicity
//! detection, and the slice decomposition.

use std::collections::BTreeMap;

use num::bigint::BigInt;

use crate::error::{Error, Result};
use crate::par::Strategy;
use crate::polymat::{check_symplectic, MatrixPair, YDatum};
use crate::seed::{BMat, YSeed};
use crate::semifield::{PosRat, RatFun, SemifieldElem, Tropical};

fn pos(x: i64) -> i64 {
    x.max(0)
}

/// The quiver attached to a pair: vertices `(i, p)` with `0 <= p < r_i`,
/// exchange matrix built from the interaction coefficients, the shift
/// permutation `nu: (i, p) -> (i, p-1 mod r_i)`, and the front `(i, 0)`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuiverData {
    datum: YDatum,
    verts: Vec<(usize, u32)>,
    offset: Vec<usize>,
    b: BMat,
    nu: Vec<usize>,
    nu_inv: Vec<usize>,
    front: Vec<usize>,
}

impl QuiverData {
    /// Build and validate the quiver. Fails if the pair is not symplectic,
    /// if the resulting matrix is not skew-symmetric, or if mutating the
    /// front and shifting does not reproduce the quiver.
    pub fn build(d: &YDatum) -> Result<QuiverData> {
        let pair = d.to_matrices();
        if !check_symplectic(&pair) {
            return Err(Error::Property(
                "pair is not symplectic: A+(z) A-(1/z)^T != A-(z) A+(1/z)^T".into(),
            ));
        }
        let k = d.size();
        let mut verts = Vec::new();
        let mut offset = Vec::with_capacity(k);
        for i in 0..k {
            offset.push(verts.len());
            for p in 0..d.r()[i] {
                verts.push((i, p));
            }
        }
        let nv = verts.len();
        let idx = |i: usize, p: u32| offset[i] + p as usize;
        let mut b = BMat::zero(nv);
        for (v, &(i, p)) in verts.iter().enumerate() {
            for (w, &(j, q)) in verts.iter().enumerate() {
                let p = p as i64;
                let q = q as i64;
                let mut entry = -d.n_at(i, j, p - q) + d.n_at(j, i, q - p);
                for kk in 0..k {
                    for v0 in 0..=p.min(q) {
                        let a = d.n_at(i, kk, p - v0);
                        let c = d.n_at(j, kk, q - v0);
                        entry += pos(a) * pos(-c) - pos(-a) * pos(c);
                    }
                }
                b.set(v, w, entry);
            }
        }
        if !b.is_skew_symmetric() {
            return Err(Error::Property(
                "quiver matrix is not skew-symmetric".into(),
            ));
        }
        let nu: Vec<usize> = verts
            .iter()
            .map(|&(i, p)| idx(i, (p + d.r()[i] - 1) % d.r()[i]))
            .collect();
        let mut nu_inv = vec![0; nv];
        for (v, &w) in nu.iter().enumerate() {
            nu_inv[w] = v;
        }
        let front: Vec<usize> = (0..k).map(|i| idx(i, 0)).collect();
        for (a, &v) in front.iter().enumerate() {
            for &w in &front[a + 1..] {
                if b.get(v, w) != 0 {
                    return Err(Error::Property(
                        "front vertices are not pairwise disconnected".into(),
                    ));
                }
            }
        }
        let stepped = front
            .iter()
            .fold(b.clone(), |m, &v| m.mutate(v))
            .apply_permutation(&nu);
        if stepped != b {
            return Err(Error::Property(
                "front mutation followed by the shift does not preserve the quiver".into(),
            ));
        }
        Ok(QuiverData {
            datum: d.clone(),
            verts,
            offset,
            b,
            nu,
            nu_inv,
            front,
        })
    }

    pub fn datum(&self) -> &YDatum {
        &self.datum
    }

    pub fn num_vertices(&self) -> usize {
        self.verts.len()
    }

    pub fn vertices(&self) -> &[(usize, u32)] {
        &self.verts
    }

    pub fn vertex_index(&self, i: usize, p: u32) -> usize {
        self.offset[i] + p as usize
    }

    pub fn vertex_label(&self, v: usize) -> String {
        let (i, p) = self.verts[v];
        format!("{}[{}]", self.datum.labels()[i], p)
    }

    pub fn b(&self) -> &BMat {
        &self.b
    }

    pub fn nu(&self) -> &[usize] {
        &self.nu
    }

    pub fn front(&self) -> &[usize] {
        &self.front
    }

    /// Seed with one semifield generator per vertex.
    pub fn initial_ratfun_seed(&self) -> YSeed<RatFun> {
        let n = self.num_vertices();
        YSeed::new(
            self.b.clone(),
            (0..n).map(|v| RatFun::generator(n, v)).collect(),
        )
        .expect("sizes agree")
    }

    pub fn initial_tropical_seed(&self) -> YSeed<Tropical> {
        YSeed::tropical_initial(self.b.clone())
    }

    /// One unit of time forward: mutate the front, then shift labels.
    pub fn step<E: SemifieldElem>(&self, seed: &YSeed<E>, strategy: Strategy) -> Result<YSeed<E>> {
        Ok(seed
            .mutate_set_with(&self.front, strategy)?
            .apply_permutation(&self.nu))
    }

    /// One unit of time backward; inverse of `step`.
    pub fn step_back<E: SemifieldElem>(
        &self,
        seed: &YSeed<E>,
        strategy: Strategy,
    ) -> Result<YSeed<E>> {
        seed.apply_permutation(&self.nu_inv)
            .mutate_set_with(&self.front, strategy)
    }

    /// GraphViz rendering; front vertices are double circles.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph quiver {\n");
        for v in 0..self.num_vertices() {
            let shape = if self.front.contains(&v) {
                "doublecircle"
            } else {
                "circle"
            };
            out.push_str(&format!(
                "  v{v} [label=\"{}\", shape={shape}];\n",
                self.vertex_label(v)
            ));
        }
        for (s, t, m) in self.b.arrows() {
            let lbl = if m > 1 {
                format!(" [label=\"{m}\"]")
            } else {
                String::new()
            };
            out.push_str(&format!("  v{s} -> v{t}{lbl};\n"));
        }
        out.push_str("}\n");
        out
    }
}

// ---------------------------------------------------------------------------
// Evolution traces and the defining recurrence
// ---------------------------------------------------------------------------

/// A window of the evolution: `seeds[t]` is the seed at time `u0 + t`.
#[derive(Clone, Debug)]
pub struct Trace<E: SemifieldElem> {
    pub quiver: QuiverData,
    pub u0: i64,
    pub seeds: Vec<YSeed<E>>,
}

impl<E: SemifieldElem> Trace<E> {
    /// Evolve `initial` (the seed at time 0) across `u_min..=u_max`.
    pub fn run(
        quiver: &QuiverData,
        initial: YSeed<E>,
        u_min: i64,
        u_max: i64,
        strategy: Strategy,
    ) -> Result<Trace<E>> {
        if u_min > 0 || u_max < 0 {
            return Err(Error::Validation(
                "trace window must contain time 0".into(),
            ));
        }
        let mut fwd = vec![initial.clone()];
        for _ in 0..u_max {
            let next = quiver.step(fwd.last().expect("nonempty"), strategy)?;
            fwd.push(next);
        }
        let mut bwd = Vec::new();
        let mut cur = initial;
        for _ in 0..(-u_min) {
            cur = quiver.step_back(&cur, strategy)?;
            bwd.push(cur.clone());
        }
        bwd.reverse();
        bwd.extend(fwd);
        Ok(Trace {
            quiver: quiver.clone(),
            u0: u_min,
            seeds: bwd,
        })
    }

    pub fn seed_at(&self, u: i64) -> Option<&YSeed<E>> {
        usize::try_from(u - self.u0).ok().and_then(|t| self.seeds.get(t))
    }

    /// The Y-variable `Y_i(u)`: the coefficient at front vertex `(i, 0)` of
    /// the seed at time `u`.
    pub fn y_var(&self, i: usize, u: i64) -> Option<&E> {
        let v = self.quiver.vertex_index(i, 0);
        self.seed_at(u).map(|s| &s.y[v])
    }
}

/// Verify the defining recurrence
/// `Y_i(u) Y_i(u - r_i) = prod_{j,p} Y_j(u-p)^{[n_{ij;p}]_+} (1 + Y_j(u-p))^{-n_{ij;p}}`
/// at every time in the window where all terms are available.
pub fn check_y_system<E: SemifieldElem>(trace: &Trace<E>) -> Result<()> {
    let d = trace.quiver.datum();
    let k = d.size();
    let arity = trace.quiver.num_vertices();
    let u_lo = trace.u0;
    let u_hi = trace.u0 + trace.seeds.len() as i64 - 1;
    let mut checked = 0usize;
    for i in 0..k {
        let ri = d.r()[i] as i64;
        for u in (u_lo + ri)..=u_hi {
            let lhs = trace
                .y_var(i, u)
                .expect("in window")
                .mul(trace.y_var(i, u - ri).expect("in window"));
            let mut rhs = E::one(arity);
            for ((ii, j, p), n) in d.n_entries() {
                if ii != i {
                    continue;
                }
                let yj = trace.y_var(j, u - p as i64).expect("in window");
                rhs = rhs
                    .mul(&yj.pow(pos(n)))
                    .mul(&E::one(arity).add(yj).pow(-n));
            }
            if !lhs.sf_eq(&rhs) {
                return Err(Error::Property(format!(
                    "recurrence fails for index {} at u = {u}",
                    d.labels()[i]
                )));
            }
            checked += 1;
        }
    }
    if checked == 0 {
        return Err(Error::Validation(
            "trace window too short to check the recurrence".into(),
        ));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Multiplicative normalization
// ---------------------------------------------------------------------------

/// `P+ = Y / (1 + Y)`.
pub fn p_plus<E: SemifieldElem>(arity: usize, y: &E) -> E {
    y.div(&E::one(arity).add(y))
}

/// `P- = 1 / (1 + Y)`; note `P+ + P- = 1` and `Y = P+ / P-`.
pub fn p_minus<E: SemifieldElem>(arity: usize, y: &E) -> E {
    E::one(arity).add(y).inv()
}

/// Recover `Y` from the normalized pair.
pub fn denormalize<E: SemifieldElem>(pp: &E, pm: &E) -> E {
    pp.div(pm)
}

/// Verify the multiplicative form of the recurrence: for every index `i` and
/// admissible `u`,
/// `prod_{j,p} P+_j(u-p)^{a+_{ij;p}} = prod_{j,p} P-_j(u-p)^{a-_{ij;p}}`
/// where `a+-` are the signed coefficients of `A_+(z)` and `A_-(z)`.
pub fn check_normalized<E: SemifieldElem>(trace: &Trace<E>) -> Result<()> {
    let d = trace.quiver.datum();
    let pair: MatrixPair = d.to_matrices();
    let arity = trace.quiver.num_vertices();
    let k = d.size();
    let u_lo = trace.u0;
    let u_hi = trace.u0 + trace.seeds.len() as i64 - 1;
    let max_r = d.r().iter().copied().max().unwrap_or(1) as i64;
    let mut checked = 0usize;
    let coeff_i64 = |c: &BigInt| -> i64 { i64::try_from(c.clone()).expect("small coefficient") };
    for i in 0..k {
        for u in (u_lo + max_r)..=u_hi {
            let mut lhs = E::one(arity);
            let mut rhs = E::one(arity);
            for j in 0..k {
                for (p, c) in pair.a_plus[i][j].iter() {
                    let y = trace.y_var(j, u - p).expect("in window");
                    lhs = lhs.mul(&p_plus(arity, y).pow(coeff_i64(c)));
                }
                for (p, c) in pair.a_minus[i][j].iter() {
                    let y = trace.y_var(j, u - p).expect("in window");
                    rhs = rhs.mul(&p_minus(arity, y).pow(coeff_i64(c)));
                }
            }
            if !lhs.sf_eq(&rhs) {
                return Err(Error::Property(format!(
                    "normalized recurrence fails for index {} at u = {u}",
                    d.labels()[i]
                )));
            }
            checked += 1;
        }
    }
    if checked == 0 {
        return Err(Error::Validation(
            "trace window too short to check the normalized recurrence".into(),
        ));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Reddening and periodicity
// ---------------------------------------------------------------------------

/// Least `u > 0` such that after `u` forward (or backward) steps every
/// tropical coefficient has all-nonpositive exponents.
pub fn find_reddening(q: &QuiverData, forward: bool, max_u: u32) -> Result<u32> {
    let mut seed = q.initial_tropical_seed();
    for u in 1..=max_u {
        seed = if forward {
            q.step(&seed, Strategy::Sequential)?
        } else {
            q.step_back(&seed, Strategy::Sequential)?
        };
        if !seed.is_sign_coherent() {
            return Err(Error::Property(format!(
                "sign coherence fails at u = {u}"
            )));
        }
        if seed.all_nonpositive() {
            return Ok(u);
        }
    }
    Err(Error::Resource(format!(
        "no reddening time found within {max_u} steps"
    )))
}

/// At a reddening time the c-vectors form a negated permutation matrix;
/// return that permutation `sigma` with `c_v = -e_{sigma(v)}`.
pub fn reddening_permutation(q: &QuiverData, forward: bool, max_u: u32) -> Result<Vec<usize>> {
    let h = find_reddening(q, forward, max_u)?;
    let mut seed = q.initial_tropical_seed();
    for _ in 0..h {
        seed = if forward {
            q.step(&seed, Strategy::Sequential)?
        } else {
            q.step_back(&seed, Strategy::Sequential)?
        };
    }
    let n = q.num_vertices();
    let mut sigma = Vec::with_capacity(n);
    for c in seed.c_vectors() {
        let hits: Vec<usize> = (0..n).filter(|&w| c[w] != 0).collect();
        if hits.len() != 1 || c[hits[0]] != -1 {
            return Err(Error::Property(
                "coefficients at the reddening time are not a negated permutation".into(),
            ));
        }
        sigma.push(hits[0]);
    }
    Ok(sigma)
}

/// Find the exact period: the least `u > 0` within `max_u` steps with the
/// tropical seed back at its start, confirmed by an exact rational-function
/// evolution from the generic seed.
pub fn find_period(q: &QuiverData, max_u: u32, strategy: Strategy) -> Result<u32> {
    let initial = q.initial_tropical_seed();
    let mut seed = initial.clone();
    let mut candidate = None;
    for u in 1..=max_u {
        seed = q.step(&seed, Strategy::Sequential)?;
        if seed == initial {
            candidate = Some(u);
            break;
        }
    }
    let omega = candidate.ok_or_else(|| {
        Error::Resource(format!("no tropical period found within {max_u} steps"))
    })?;
    // Mandatory exact confirmation in the universal semifield.
    let generic = q.initial_ratfun_seed();
    let mut cur = generic.clone();
    for _ in 0..omega {
        cur = q.step(&cur, strategy)?;
    }
    if cur.b != generic.b {
        return Err(Error::Property(
            "exchange matrix does not return at the tropical period".into(),
        ));
    }
    for v in 0..q.num_vertices() {
        if !cur.y[v].sf_eq(&generic.y[v]) {
            return Err(Error::Property(format!(
                "coefficient at vertex {} does not return at the tropical period {omega}",
                q.vertex_label(v)
            )));
        }
    }
    Ok(omega)
}

/// Confirm periodicity of a concrete positive-rational trajectory.
pub fn confirm_period_posrat(q: &QuiverData, init: &[PosRat], omega: u32) -> Result<bool> {
    if init.len() != q.num_vertices() {
        return Err(Error::Validation(
            "one initial value per vertex required".into(),
        ));
    }
    let start = YSeed::new(q.b().clone(), init.to_vec())?;
    let mut cur = start.clone();
    for _ in 0..omega {
        cur = q.step(&cur, Strategy::Sequential)?;
    }
    Ok(cur == start)
}

// ---------------------------------------------------------------------------
// Slice decomposition
// ---------------------------------------------------------------------------

/// The slice decomposition of an indecomposable pair, pulled back to a
/// single connected component of the quiver: a cyclic loop of simultaneous
/// mutations on the base quiver, closed by the label permutation that the
/// shift induces after one full trip around the components. Steps whose
/// mutation set is empty are pure relabelings and vanish in the pullback.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceWord {
    /// The base component quiver.
    base: BMat,
    /// Nonempty simultaneous-mutation sets in base labels, in shift order.
    steps: Vec<Vec<usize>>,
    /// Label permutation closing the loop after the final step.
    monodromy: Vec<usize>,
}

fn components(b: &BMat) -> Vec<Vec<usize>> {
    let n = b.size();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut comp = vec![s];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for w in 0..n {
                if !seen[w] && b.get(v, w) != 0 {
                    seen[w] = true;
                    comp.push(w);
                    stack.push(w);
                }
            }
        }
        comp.sort();
        out.push(comp);
    }
    out
}

fn permute(order: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == order.len() {
        f(order);
        return;
    }
    for i in k..order.len() {
        order.swap(k, i);
        permute(order, k + 1, f);
        order.swap(k, i);
    }
}

const MAX_COMPONENT_SIZE: usize = 8;

/// Decompose the quiver into its slice loop. Requires the shift to permute
/// the connected components in a single cycle.
pub fn decompose_slices(q: &QuiverData) -> Result<SliceWord> {
    let comps = components(q.b());
    let t = comps.len();
    let find_comp = |v: usize| -> usize {
        comps
            .iter()
            .position(|c| c.binary_search(&v).is_ok())
            .expect("components cover the vertex set")
    };
    // Image of each component under the shift.
    let mut image = Vec::with_capacity(t);
    for comp in &comps {
        let imgs: Vec<usize> = comp.iter().map(|&v| find_comp(q.nu()[v])).collect();
        let first = imgs[0];
        if imgs.iter().any(|&x| x != first) {
            return Err(Error::Property(
                "shift does not map components onto components".into(),
            ));
        }
        image.push(first);
    }
    let start = find_comp(q.front()[0]);
    {
        let mut cur = start;
        let mut len = 0;
        loop {
            len += 1;
            cur = image[cur];
            if cur == start {
                break;
            }
        }
        if len != t {
            return Err(Error::Property(
                "shift does not act as a single cycle on components".into(),
            ));
        }
    }
    let c0 = comps[start].clone();
    let m = c0.len();
    if m > MAX_COMPONENT_SIZE {
        return Err(Error::Resource(format!(
            "component size {m} exceeds the canonicalization limit {MAX_COMPONENT_SIZE}"
        )));
    }
    let label_of = |v: usize| -> Result<usize> {
        c0.binary_search(&v)
            .map_err(|_| Error::Property("shift cycle left the base component".into()))
    };
    // Pull everything back to base labels: psi maps label -> current vertex.
    let mut psi = c0.clone();
    let mut base = BMat::zero(m);
    for x in 0..m {
        for y in 0..m {
            base.set(x, y, q.b().get(c0[x], c0[y]));
        }
    }
    let mut cur = base.clone();
    let mut steps = Vec::new();
    for _ in 0..t {
        let j: Vec<usize> = (0..m).filter(|&x| q.front().contains(&psi[x])).collect();
        if !j.is_empty() {
            for &x in &j {
                cur = cur.mutate(x);
            }
            steps.push(j);
        }
        psi = psi.iter().map(|&v| q.nu()[v]).collect();
    }
    let monodromy: Vec<usize> = psi
        .iter()
        .map(|&v| label_of(v))
        .collect::<Result<_>>()?;
    // Sanity: the mutated quiver is the base transported by the monodromy.
    if cur.apply_permutation(&monodromy) != base {
        return Err(Error::Property(
            "slice loop does not close up on the base component".into(),
        ));
    }
    Ok(SliceWord {
        base,
        steps,
        monodromy,
    })
}

/// A fully-split loop state: the base quiver, the word of single mutations,
/// and the monodromy.
type LoopState = (Vec<Vec<i64>>, Vec<usize>, Vec<usize>);

impl SliceWord {
    /// Fully split the simultaneous steps into single mutations. Vertices
    /// in one simultaneous set are pairwise disconnected, so any order
    /// gives an equivalent word; the swap closure below recovers the rest.
    fn split_state(&self) -> LoopState {
        let word: Vec<usize> = self.steps.iter().flatten().copied().collect();
        (
            self.base.rows().to_vec(),
            word,
            self.monodromy.clone(),
        )
    }

    /// Canonical form of the loop modulo cyclic rotation, relabeling, and
    /// reordering of commuting adjacent mutations.
    fn canonical(&self) -> LoopState {
        let m = self.monodromy.len();
        let start = self.split_state();
        // Closure under rotation and commuting swaps.
        let mut seen = std::collections::BTreeSet::new();
        let mut queue = vec![start];
        while let Some(state) = queue.pop() {
            if !seen.insert(state.clone()) {
                continue;
            }
            let (base, word, sigma) = &state;
            let bmat = |rows: &Vec<Vec<i64>>| BMat::new(rows.clone()).expect("loop quiver is skew");
            if !word.is_empty() {
                // Rotate: mutate the base at the first letter and move the
                // letter to the back, pulled through the monodromy
                // (mu_v after sigma equals sigma after mu_{sigma^{-1}(v)}).
                let rotated_base = bmat(base).mutate(word[0]).rows().to_vec();
                let sigma_inv_w0 = sigma
                    .iter()
                    .position(|&y| y == word[0])
                    .expect("monodromy is a bijection");
                let mut rotated_word: Vec<usize> = word[1..].to_vec();
                rotated_word.push(sigma_inv_w0);
                queue.push((rotated_base, rotated_word, sigma.clone()));
            }
            // Swap adjacent commuting mutations.
            let mut cur = bmat(base);
            for i in 0..word.len().saturating_sub(1) {
                if cur.get(word[i], word[i + 1]) == 0 {
                    let mut w = word.clone();
                    w.swap(i, i + 1);
                    queue.push((base.clone(), w, sigma.clone()));
                }
                cur = cur.mutate(word[i]);
            }
        }
        // Minimize each reachable state over relabelings; take the least.
        let mut best: Option<LoopState> = None;
        for (base, word, sigma) in &seen {
            let mut order: Vec<usize> = (0..m).collect();
            permute(&mut order, 0, &mut |perm| {
                let adj: Vec<Vec<i64>> = (0..m)
                    .map(|i| (0..m).map(|j| base[perm[i]][perm[j]]).collect())
                    .collect();
                // perm maps old position -> slot; relabel x as inv[x].
                let mut inv = vec![0; m];
                for (slot, &old) in perm.iter().enumerate() {
                    inv[old] = slot;
                }
                let w: Vec<usize> = word.iter().map(|&x| inv[x]).collect();
                let mut s = vec![0; m];
                for x in 0..m {
                    s[inv[x]] = inv[sigma[x]];
                }
                let cand = (adj, w, s);
                if best.as_ref().map(|b| cand < *b).unwrap_or(true) {
                    best = Some(cand);
                }
            });
        }
        best.expect("at least one state")
    }

    /// Equality of slice loops up to change of indices, cyclic rotation,
    /// and commutativity of mutations.
    pub fn cyclic_eq(&self, other: &SliceWord) -> bool {
        if self.monodromy.len() != other.monodromy.len() {
            return false;
        }
        self.canonical() == other.canonical()
    }
}

/// Whether two pairs are slice-equivalent: same mutation loop.
pub fn slices_equivalent(a: &YDatum, b: &YDatum) -> Result<bool> {
    let wa = decompose_slices(&QuiverData::build(a)?)?;
    let wb = decompose_slices(&QuiverData::build(b)?)?;
    Ok(wa.cyclic_eq(&wb))
}

// ---------------------------------------------------------------------------
// Structured report
// ---------------------------------------------------------------------------

/// Machine-readable summary of a quiver: vertices, arrows, shift, front.
pub fn quiver_to_json(q: &QuiverData) -> serde_json::Value {
    let arrows: Vec<serde_json::Value> = q
        .b()
        .arrows()
        .into_iter()
        .map(|(s, t, m)| {
            serde_json::json!({
                "from": q.vertex_label(s),
                "to": q.vertex_label(t),
                "mult": m,
            })
        })
        .collect();
    let nu: BTreeMap<String, String> = (0..q.num_vertices())
        .map(|v| (q.vertex_label(v), q.vertex_label(q.nu()[v])))
        .collect();
    serde_json::json!({
        "vertices": (0..q.num_vertices()).map(|v| q.vertex_label(v)).collect::<Vec<_>>(),
        "arrows": arrows,
        "front": q.front().iter().map(|&v| q.vertex_label(v)).collect::<Vec<_>>(),
        "nu": nu,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    fn quiver(k: usize) -> QuiverData {
        QuiverData::build(&presets::table1(k)).unwrap()
    }

    fn arrow_set(q: &QuiverData) -> Vec<(String, String, i64)> {
        q.b()
            .arrows()
            .into_iter()
            .map(|(s, t, m)| (q.vertex_label(s), q.vertex_label(t), m))
            .collect()
    }

    #[test]
    fn case1_quiver_arrows() {
        let q = quiver(1);
        let mut got = arrow_set(&q);
        got.sort();
        let mut want = vec![
            ("1[0]".to_string(), "2[1]".to_string(), 1),
            ("2[0]".to_string(), "1[1]".to_string(), 1),
        ];
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn case4_quiver_is_a_four_cycle() {
        let q = quiver(4);
        let mut got = arrow_set(&q);
        got.sort();
        let mut want: Vec<(String, String, i64)> = vec![
            ("1[0]", "2[1]", 1),
            ("2[1]", "2[0]", 1),
            ("2[0]", "1[1]", 1),
            ("1[1]", "1[0]", 1),
        ]
        .into_iter()
        .map(|(a, b, m)| (a.to_string(), b.to_string(), m))
        .collect();
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn case2_quiver_arrows() {
        let q = quiver(2);
        let mut got = arrow_set(&q);
        got.sort();
        let mut want: Vec<(String, String, i64)> = vec![
            ("1[0]", "2[1]", 1),
            ("2[3]", "1[0]", 1),
            ("1[0]", "2[5]", 1),
            ("2[1]", "2[3]", 1),
            ("2[0]", "1[1]", 1),
            ("1[1]", "2[2]", 1),
            ("2[4]", "1[1]", 1),
            ("2[2]", "2[4]", 1),
        ]
        .into_iter()
        .map(|(a, b, m)| (a.to_string(), b.to_string(), m))
        .collect();
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn build_rejects_non_symplectic() {
        // Case (2) with the A- off-diagonal exponent shifted: not symplectic.
        let d = presets::table1(2)
            .perturbed(1, 0, 3, 1)
            .unwrap()
            .perturbed(1, 0, 4, -1)
            .unwrap();
        assert!(matches!(
            QuiverData::build(&d),
            Err(Error::Property(_))
        ));
    }

    #[test]
    fn step_and_step_back_are_inverse() {
        let q = quiver(5);
        let seed = q.initial_ratfun_seed();
        let fwd = q.step(&seed, Strategy::Sequential).unwrap();
        let back = q.step_back(&fwd, Strategy::Sequential).unwrap();
        assert_eq!(back.b, seed.b);
        for v in 0..q.num_vertices() {
            assert!(back.y[v].sf_eq(&seed.y[v]), "vertex {v}");
        }
        // The quiver itself is invariant under a step.
        assert_eq!(fwd.b, seed.b);
    }

    #[test]
    fn recurrence_holds_rank1() {
        let d = presets::zero_interaction(1);
        let q = QuiverData::build(&d).unwrap();
        let trace = Trace::run(&q, q.initial_ratfun_seed(), 0, 4, Strategy::Sequential).unwrap();
        check_y_system(&trace).unwrap();
    }

    #[test]
    fn recurrence_holds_case1() {
        let q = quiver(1);
        let trace = Trace::run(&q, q.initial_ratfun_seed(), 0, 8, Strategy::Sequential).unwrap();
        check_y_system(&trace).unwrap();
        check_normalized(&trace).unwrap();
    }

    #[test]
    fn reddening_case1() {
        let q = quiver(1);
        assert_eq!(find_reddening(&q, true, 100).unwrap(), 3);
        assert_eq!(find_reddening(&q, false, 100).unwrap(), 2);
    }

    #[test]
    fn period_case1() {
        let q = quiver(1);
        let omega = find_period(&q, 40, Strategy::Sequential).unwrap();
        assert_eq!(omega % (3 + 2), 0, "period divides into h+ + h- structure");
        // A concrete positive trajectory returns too.
        let init: Vec<PosRat> = (0..q.num_vertices())
            .map(|v| PosRat::from_ints(v as i64 + 2, 3))
            .collect();
        assert!(confirm_period_posrat(&q, &init, omega).unwrap());
    }

    #[test]
    fn slice_word_case1_matches_three_slice_variant() {
        let a = presets::table1(1);
        let b = presets::slice_example();
        assert!(slices_equivalent(&a, &b).unwrap());
        assert!(!slices_equivalent(&a, &presets::table1(4)).unwrap());
    }

    #[test]
    fn dot_output_well_formed() {
        let q = quiver(1);
        let dot = q.to_dot();
        assert!(dot.starts_with("digraph"));
        assert!(dot.contains("doublecircle"));
        assert!(dot.contains("->"));
    }
}
