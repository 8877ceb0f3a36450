//! Quantum dilogarithm products along mutation sequences, truncated in a
//! quantum torus, verifying that the forward and backward reddening
//! sequences yield the same invariant series.
//!
//! Coefficients are exact rational functions in `t = q^{1/2}`; the quantum
//! dilogarithm is normalized by the functional equation
//! `Psi(q y) = (1 + q^{1/2} y) Psi(y)` with `Psi(0) = 1`.

use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::Zero;

use crate::error::{Error, Result};
use crate::par::Strategy;
use crate::seed::YSeed;
use crate::semifield::Tropical;
use crate::ysystem::QuiverData;

fn rat(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

// ---------------------------------------------------------------------------
// Polynomials and rational functions in t
// ---------------------------------------------------------------------------

/// Dense polynomial in `t` with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TPoly(Vec<BigRational>);

impl TPoly {
    pub fn zero() -> Self {
        TPoly(Vec::new())
    }

    pub fn one() -> Self {
        TPoly(vec![rat(1)])
    }

    /// `c * t^k`.
    pub fn term(k: usize, c: BigRational) -> Self {
        if c.is_zero() {
            return TPoly::zero();
        }
        let mut v = vec![rat(0); k + 1];
        v[k] = c;
        TPoly(v)
    }

    /// `t^{2k} - 1`.
    pub fn t2k_minus_1(k: usize) -> Self {
        let mut v = vec![rat(0); 2 * k + 1];
        v[0] = rat(-1);
        v[2 * k] = rat(1);
        TPoly(v)
    }

    fn trim(mut self) -> Self {
        while self.0.last().map(|c| c.is_zero()).unwrap_or(false) {
            self.0.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn add(&self, other: &TPoly) -> TPoly {
        let n = self.0.len().max(other.0.len());
        let mut v = vec![rat(0); n];
        for (i, c) in self.0.iter().enumerate() {
            v[i] += c;
        }
        for (i, c) in other.0.iter().enumerate() {
            v[i] += c;
        }
        TPoly(v).trim()
    }

    pub fn neg(&self) -> TPoly {
        TPoly(self.0.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &TPoly) -> TPoly {
        if self.is_zero() || other.is_zero() {
            return TPoly::zero();
        }
        let mut v = vec![rat(0); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        TPoly(v).trim()
    }

    /// Euclidean division: `(quotient, remainder)`.
    pub fn div_rem(&self, d: &TPoly) -> (TPoly, TPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut rem = self.clone();
        let mut q = vec![rat(0); self.0.len().saturating_sub(d.0.len()) + 1];
        let dl = d.0.last().expect("nonzero");
        while !rem.is_zero() && rem.0.len() >= d.0.len() {
            let shift = rem.0.len() - d.0.len();
            let f = rem.0.last().expect("nonzero") / dl;
            q[shift] = f.clone();
            let sub = d.mul(&TPoly::term(shift, f));
            rem = rem.add(&sub.neg());
        }
        (TPoly(q).trim(), rem)
    }

    pub fn gcd(&self, other: &TPoly) -> TPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    fn monic(self) -> TPoly {
        match self.0.last() {
            None => self,
            Some(l) => {
                let l = l.clone();
                TPoly(self.0.iter().map(|c| c / &l).collect())
            }
        }
    }
}

/// A rational function in `t`, normalized with monic denominator and
/// coprime numerator/denominator. Laurent behaviour (negative powers of t)
/// lives in the denominator as a power of `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TRat {
    pub num: TPoly,
    pub den: TPoly,
}

impl TRat {
    fn normalized(num: TPoly, den: TPoly) -> TRat {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return TRat {
                num: TPoly::zero(),
                den: TPoly::one(),
            };
        }
        let g = num.gcd(&den);
        let (num, r1) = num.div_rem(&g);
        debug_assert!(r1.is_zero());
        let (den, r2) = den.div_rem(&g);
        debug_assert!(r2.is_zero());
        let lead = den.0.last().expect("nonzero").clone();
        let scale = |p: &TPoly| TPoly(p.0.iter().map(|c| c / &lead).collect());
        TRat {
            num: scale(&num),
            den: scale(&den),
        }
    }

    pub fn zero() -> Self {
        TRat {
            num: TPoly::zero(),
            den: TPoly::one(),
        }
    }

    pub fn one() -> Self {
        TRat {
            num: TPoly::one(),
            den: TPoly::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// `t^k` for a possibly negative `k`.
    pub fn t_pow(k: i64) -> TRat {
        if k >= 0 {
            TRat {
                num: TPoly::term(k as usize, rat(1)),
                den: TPoly::one(),
            }
        } else {
            TRat {
                num: TPoly::one(),
                den: TPoly::term((-k) as usize, rat(1)),
            }
        }
    }

    pub fn add(&self, other: &TRat) -> TRat {
        TRat::normalized(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn mul(&self, other: &TRat) -> TRat {
        TRat::normalized(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn neg(&self) -> TRat {
        TRat {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn inv(&self) -> TRat {
        assert!(!self.is_zero(), "inverting zero");
        TRat::normalized(self.den.clone(), self.num.clone())
    }

    /// The denominator divides `t^s * prod_j (t^{2j} - 1)^{m_j}`: peel
    /// common factors with that product until either the denominator is a
    /// unit (standard) or no common factor remains (not standard).
    pub fn denominator_is_standard(&self, max_j: usize) -> bool {
        let mut den = self.den.clone();
        let mut basis = TPoly::term(1, rat(1));
        for j in 1..=max_j {
            basis = basis.mul(&TPoly::t2k_minus_1(j));
        }
        while den.degree() > 0 {
            let g = den.gcd(&basis);
            if g.degree() == 0 {
                return false;
            }
            let (q, r) = den.div_rem(&g);
            debug_assert!(r.is_zero());
            den = q;
        }
        true
    }
}

// ---------------------------------------------------------------------------
// Quantum dilogarithm coefficients
// ---------------------------------------------------------------------------

/// Coefficients `c_0..=c_kmax` of `Psi(y) = sum_k c_k y^k` from the
/// functional equation `Psi(q y) = (1 + t y) Psi(y)`:
/// `c_k = t c_{k-1} / (t^{2k} - 1)`.
pub fn dilog_coefficients(kmax: usize) -> Vec<TRat> {
    let mut out = vec![TRat::one()];
    for k in 1..=kmax {
        let prev = out.last().expect("nonempty");
        let num = prev.mul(&TRat::t_pow(1));
        let den = TRat {
            num: TPoly::t2k_minus_1(k),
            den: TPoly::one(),
        };
        out.push(num.mul(&den.inv()));
    }
    out
}

/// Coefficients of `Psi(y)^{-1}` to the same order.
pub fn dilog_inverse_coefficients(kmax: usize) -> Vec<TRat> {
    let c = dilog_coefficients(kmax);
    let mut d = vec![TRat::one()];
    for m in 1..=kmax {
        let mut s = TRat::zero();
        for j in 1..=m {
            s = s.add(&c[j].mul(&d[m - j]));
        }
        d.push(s.neg());
    }
    d
}

// ---------------------------------------------------------------------------
// Quantum torus series
// ---------------------------------------------------------------------------

/// A truncated series in the quantum torus over the nonnegative cone:
/// `x^a x^b = t^{<a,b>} x^{a+b}` with the skew form from the exchange
/// matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusSeries {
    /// Exchange matrix; the skew pairing is `<e_v, e_w> = skew[w][v]`.
    skew: Vec<Vec<i64>>,
    /// Truncation: total degree <= cap.
    cap: u32,
    terms: BTreeMap<Vec<u16>, TRat>,
}

impl TorusSeries {
    pub fn one(skew: Vec<Vec<i64>>, cap: u32) -> Self {
        let n = skew.len();
        let mut terms = BTreeMap::new();
        terms.insert(vec![0u16; n], TRat::one());
        TorusSeries { skew, cap, terms }
    }

    pub fn rank(&self) -> usize {
        self.skew.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u16>, &TRat)> {
        self.terms.iter()
    }

    fn pairing(&self, a: &[u16], b: &[u16]) -> i64 {
        let mut s = 0i64;
        for (v, &av) in a.iter().enumerate() {
            if av == 0 {
                continue;
            }
            for (w, &bw) in b.iter().enumerate() {
                if bw != 0 {
                    s += av as i64 * bw as i64 * self.skew[w][v];
                }
            }
        }
        s
    }

    pub fn add_term(&mut self, vec: Vec<u16>, coeff: TRat) {
        if coeff.is_zero() {
            return;
        }
        let deg: u32 = vec.iter().map(|&x| x as u32).sum();
        if deg > self.cap {
            return;
        }
        let entry = self.terms.entry(vec.clone()).or_insert_with(TRat::zero);
        *entry = entry.add(&coeff);
        if entry.is_zero() {
            self.terms.remove(&vec);
        }
    }

    pub fn mul(&self, other: &TorusSeries) -> TorusSeries {
        assert_eq!(self.skew, other.skew, "mismatched torus");
        let cap = self.cap.min(other.cap);
        let mut out = TorusSeries {
            skew: self.skew.clone(),
            cap,
            terms: BTreeMap::new(),
        };
        for (a, ca) in &self.terms {
            let da: u32 = a.iter().map(|&x| x as u32).sum();
            if da > cap {
                continue;
            }
            for (b, cb) in &other.terms {
                let db: u32 = b.iter().map(|&x| x as u32).sum();
                if da + db > cap {
                    continue;
                }
                let sum: Vec<u16> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                let tw = TRat::t_pow(self.pairing(a, b));
                out.add_term(sum, ca.mul(cb).mul(&tw));
            }
        }
        out
    }

    /// First monomial (degree-lexicographic) where the two series differ.
    pub fn first_difference(&self, other: &TorusSeries) -> Option<Vec<u16>> {
        let keys: std::collections::BTreeSet<&Vec<u16>> =
            self.terms.keys().chain(other.terms.keys()).collect();
        let mut sorted: Vec<&Vec<u16>> = keys.into_iter().collect();
        sorted.sort_by_key(|v| (v.iter().map(|&x| x as u32).sum::<u32>(), (*v).clone()));
        for k in sorted {
            let a = self.terms.get(k).cloned().unwrap_or_else(TRat::zero);
            let b = other.terms.get(k).cloned().unwrap_or_else(TRat::zero);
            if a != b {
                return Some(k.clone());
            }
        }
        None
    }
}

/// `Psi(x^beta)^{sign}` truncated at total degree `cap`.
pub fn dilog_factor(
    skew: &[Vec<i64>],
    beta: &[i64],
    sign: i64,
    cap: u32,
) -> Result<TorusSeries> {
    if beta.iter().all(|&x| x == 0) {
        return Err(Error::Validation("dilog factor requires beta != 0".into()));
    }
    if beta.iter().any(|&x| x < 0) {
        return Err(Error::Property(
            "dilog factor requires a nonnegative exponent vector".into(),
        ));
    }
    let b1: u32 = beta.iter().map(|&x| x as u32).sum();
    let kmax = (cap / b1.max(1)) as usize;
    let coeffs = match sign {
        1 => dilog_coefficients(kmax),
        -1 => dilog_inverse_coefficients(kmax),
        _ => return Err(Error::Validation("sign must be +1 or -1".into())),
    };
    let mut out = TorusSeries {
        skew: skew.to_vec(),
        cap,
        terms: BTreeMap::new(),
    };
    for (k, c) in coeffs.iter().enumerate() {
        let vec: Vec<u16> = beta.iter().map(|&x| (x as u16) * (k as u16)).collect();
        out.add_term(vec, c.clone());
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// DT invariants of reddening sequences
// ---------------------------------------------------------------------------

fn coherent_sign(c: &[i64]) -> Result<i64> {
    let pos = c.iter().any(|&x| x > 0);
    let neg = c.iter().any(|&x| x < 0);
    match (pos, neg) {
        (true, false) => Ok(1),
        (false, true) => Ok(-1),
        (false, false) => Err(Error::Property("zero c-vector".into())),
        (true, true) => Err(Error::Property("c-vector is not sign-coherent".into())),
    }
}

/// The invariant series of `steps` applications of the evolution
/// (`mu = nu after mu_front`; negative counts run the inverse). Each single
/// mutation contributes `Psi(x^{eps c})^{eps}` with `c` the mutated vertex's
/// c-vector at that moment; factors multiply on the right in mutation
/// order.
pub fn dt_invariant(q: &QuiverData, steps: i64, cap: u32) -> Result<TorusSeries> {
    let skew: Vec<Vec<i64>> = q.b().rows().to_vec();
    let mut seed: YSeed<Tropical> = q.initial_tropical_seed();
    let mut out = TorusSeries::one(skew.clone(), cap);
    for _ in 0..steps.unsigned_abs() {
        if steps < 0 {
            // Inverse evolution: unshift first, then mutate the front.
            let nu_inv: Vec<usize> = {
                let nu = q.nu();
                let mut inv = vec![0; nu.len()];
                for (v, &w) in nu.iter().enumerate() {
                    inv[w] = v;
                }
                inv
            };
            seed = seed.apply_permutation(&nu_inv);
        }
        for &k in q.front() {
            let c = seed.c_vectors()[k].clone();
            let eps = coherent_sign(&c)?;
            let beta: Vec<i64> = c.iter().map(|&x| eps * x).collect();
            let factor = dilog_factor(&skew, &beta, eps, cap)?;
            out = out.mul(&factor);
        }
        seed = seed.mutate_set_with(q.front(), Strategy::Sequential)?;
        if steps > 0 {
            seed = seed.apply_permutation(q.nu());
        }
    }
    Ok(out)
}

/// Check the reddening-sequence identity: the series of `h_+` forward steps
/// equals the series of `h_-` backward steps, exactly below the cap.
pub fn identity_check(q: &QuiverData, h_plus: u32, h_minus: u32, cap: u32) -> Result<bool> {
    let fwd = dt_invariant(q, h_plus as i64, cap)?;
    let bwd = dt_invariant(q, -(h_minus as i64), cap)?;
    Ok(fwd.first_difference(&bwd).is_none())
}
