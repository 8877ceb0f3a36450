//! Pluggable semifield backends: tropical Laurent monomials, exact positive
//! rationals, and the universal semifield of subtraction-free rational
//! functions.
//!
//! The rational-function backend keeps values in factored form
//! `coeff * x^mono * prod f_k^{e_k}` where each `f_k` is a primitive
//! multivariate polynomial produced by an addition. Sums are expanded and
//! re-normalized, so equal values built along a mutation orbit cancel
//! exactly when divided; exact equality falls back to cross-multiplied
//! expansion when the factored forms differ.

use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::mpoly::MPoly;

/// Element of a semifield: a multiplicative abelian group with a compatible
/// commutative, associative, distributive addition. Division is always
/// available; subtraction never is.
pub trait SemifieldElem: Clone + PartialEq + std::fmt::Debug + Send + Sync {
    fn one(arity: usize) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn inv(&self) -> Self;
    fn add(&self, rhs: &Self) -> Self;

    fn div(&self, rhs: &Self) -> Self {
        self.mul(&rhs.inv())
    }

    fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.inv() } else { self.clone() };
        let mut out = None;
        for _ in 0..e.unsigned_abs() {
            out = Some(match out {
                None => base.clone(),
                Some(acc) => base.mul(&acc),
            });
        }
        out.unwrap_or_else(|| {
            // arity is recoverable from self only per-backend; x^0 = x/x.
            self.div(self)
        })
    }

    /// Exact semantic equality. Structural equality implies it; backends may
    /// do more work when representations differ.
    fn sf_eq(&self, rhs: &Self) -> bool {
        self == rhs
    }

    /// Like `add`, but with a set of candidate polynomial factors that the
    /// backend may use to keep results in factored form. Backends without a
    /// factored representation ignore the hints.
    fn add_with_hints(&self, rhs: &Self, _hints: &[MPoly]) -> Self {
        self.add(rhs)
    }

    /// Polynomial factors appearing in this value, as hints for later
    /// additions. Empty for backends without a factored representation.
    fn factor_hints(&self) -> Vec<MPoly> {
        Vec::new()
    }
}

// ---------------------------------------------------------------------------
// Tropical
// ---------------------------------------------------------------------------

/// A Laurent monomial in the tropical semifield: addition is the
/// componentwise minimum of exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tropical(pub Vec<i64>);

impl Tropical {
    pub fn generator(arity: usize, idx: usize) -> Self {
        let mut v = vec![0i64; arity];
        v[idx] = 1;
        Tropical(v)
    }

    pub fn exponents(&self) -> &[i64] {
        &self.0
    }
}

impl SemifieldElem for Tropical {
    fn one(arity: usize) -> Self {
        Tropical(vec![0; arity])
    }

    fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.0.len(), rhs.0.len(), "mismatched generator sets");
        Tropical(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }

    fn inv(&self) -> Self {
        Tropical(self.0.iter().map(|a| -a).collect())
    }

    fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.0.len(), rhs.0.len(), "mismatched generator sets");
        Tropical(self.0.iter().zip(&rhs.0).map(|(a, b)| *a.min(b)).collect())
    }

    fn pow(&self, e: i64) -> Self {
        Tropical(self.0.iter().map(|a| a * e).collect())
    }
}

// ---------------------------------------------------------------------------
// Positive rationals
// ---------------------------------------------------------------------------

/// An exact positive rational number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PosRat(BigRational);

impl PosRat {
    pub fn new(value: BigRational) -> Result<Self> {
        if value <= BigRational::zero() {
            return Err(Error::Validation(format!("PosRat requires a positive value, got {value}")));
        }
        Ok(PosRat(value))
    }

    pub fn from_ints(num: i64, den: i64) -> Self {
        PosRat::new(BigRational::new(BigInt::from(num), BigInt::from(den)))
            .expect("positive ratio")
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }
}

impl SemifieldElem for PosRat {
    fn one(_arity: usize) -> Self {
        PosRat(BigRational::one())
    }

    fn mul(&self, rhs: &Self) -> Self {
        PosRat(&self.0 * &rhs.0)
    }

    fn inv(&self) -> Self {
        PosRat(self.0.recip())
    }

    fn add(&self, rhs: &Self) -> Self {
        PosRat(&self.0 + &rhs.0)
    }
}

// ---------------------------------------------------------------------------
// Universal semifield
// ---------------------------------------------------------------------------

/// A subtraction-free rational function in `arity` generators, kept in
/// factored form. Denominator is never zero by construction; equality is
/// decided by cross-multiplication.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFun {
    arity: usize,
    coeff: BigRational,
    mono: Vec<i64>,
    factors: BTreeMap<MPoly, i64>,
}

impl RatFun {
    pub fn generator(arity: usize, idx: usize) -> Self {
        let mut mono = vec![0i64; arity];
        mono[idx] = 1;
        RatFun {
            arity,
            coeff: BigRational::one(),
            mono,
            factors: BTreeMap::new(),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_one(&self) -> bool {
        self.coeff.is_one() && self.mono.iter().all(|&e| e == 0) && self.factors.is_empty()
    }

    /// Size diagnostics: (number of factors, largest factor's monomial count).
    pub fn complexity(&self) -> (usize, usize) {
        (
            self.factors.len(),
            self.factors.keys().map(|f| f.num_terms()).max().unwrap_or(0),
        )
    }

    fn merge_factor(factors: &mut BTreeMap<MPoly, i64>, f: MPoly, e: i64) {
        if e == 0 || f.is_one() {
            return;
        }
        use std::collections::btree_map::Entry;
        match factors.entry(f) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += e;
                if *o.get() == 0 {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(e);
            }
        }
    }

    /// Expand `coeff_num * x^mono * prod f^e` assuming all exponents are
    /// nonnegative and the coefficient is an integer.
    fn expand_nonneg(&self) -> Result<MPoly> {
        debug_assert!(self.coeff.denom().is_one());
        debug_assert!(self.mono.iter().all(|&e| e >= 0));
        let mono: Vec<u32> = self.mono.iter().map(|&e| e as u32).collect();
        let mut out = MPoly::monomial(self.arity, mono, self.coeff.numer().clone());
        for (f, &e) in &self.factors {
            debug_assert!(e >= 0);
            out = out.mul(&f.pow(e as u32)?)?;
        }
        Ok(out)
    }

    /// Split into expanded numerator and denominator polynomials.
    pub fn expand_num_den(&self) -> Result<(MPoly, MPoly)> {
        let mut num = RatFun {
            arity: self.arity,
            coeff: BigRational::from(self.coeff.numer().clone()),
            mono: self.mono.iter().map(|&e| e.max(0)).collect(),
            factors: self
                .factors
                .iter()
                .filter(|(_, &e)| e > 0)
                .map(|(f, &e)| (f.clone(), e))
                .collect(),
        };
        let mut den = RatFun {
            arity: self.arity,
            coeff: BigRational::from(self.coeff.denom().clone()),
            mono: self.mono.iter().map(|&e| (-e).max(0)).collect(),
            factors: self
                .factors
                .iter()
                .filter(|(_, &e)| e < 0)
                .map(|(f, &e)| (f.clone(), -e))
                .collect(),
        };
        // Both parts now have nonnegative data only.
        num.coeff = BigRational::from(num.coeff.numer().clone());
        den.coeff = BigRational::from(den.coeff.numer().clone());
        Ok((num.expand_nonneg()?, den.expand_nonneg()?))
    }

    fn try_add(&self, rhs: &RatFun) -> Result<RatFun> {
        self.try_add_with(rhs, &[])
    }

    fn try_add_with(&self, rhs: &RatFun, hints: &[MPoly]) -> Result<RatFun> {
        assert_eq!(self.arity, rhs.arity, "mismatched generator sets");
        // Common denominator D: enough monomial, factor, and integer content
        // to clear every negative exponent and fractional coefficient.
        let d_coeff = num::integer::lcm(self.coeff.denom().clone(), rhs.coeff.denom().clone());
        let d_mono: Vec<i64> = self
            .mono
            .iter()
            .zip(&rhs.mono)
            .map(|(a, b)| (-a).max(-b).max(0))
            .collect();
        let mut d_factors: BTreeMap<MPoly, i64> = BTreeMap::new();
        for (f, &e) in self.factors.iter().chain(rhs.factors.iter()) {
            if e < 0 {
                let cur = d_factors.entry(f.clone()).or_insert(0);
                *cur = (*cur).max(-e);
            }
        }
        let scale = |x: &RatFun| -> Result<MPoly> {
            let mut scaled = RatFun {
                arity: x.arity,
                coeff: &x.coeff * BigRational::from(d_coeff.clone()),
                mono: x.mono.iter().zip(&d_mono).map(|(a, b)| a + b).collect(),
                factors: x.factors.clone(),
            };
            for (f, &e) in &d_factors {
                Self::merge_factor(&mut scaled.factors, f.clone(), e);
            }
            scaled.expand_nonneg()
        };
        let sum = scale(self)?.add(&scale(rhs)?);
        let (content, mono, mut prim) = sum.normalized();
        debug_assert!(content.is_positive(), "semifield values stay positive");
        let mut factors: BTreeMap<MPoly, i64> = BTreeMap::new();
        // Peel off every factor already known from the operands, so that
        // values recurring along a mutation orbit cancel structurally
        // instead of accumulating as ever-larger opaque numerators.
        for f in self.factors.keys().chain(rhs.factors.keys()).chain(hints) {
            while !prim.is_one() {
                match prim.div_exact(f) {
                    Some(q) => {
                        prim = q;
                        Self::merge_factor(&mut factors, f.clone(), 1);
                    }
                    None => break,
                }
            }
        }
        Self::merge_factor(&mut factors, prim, 1);
        for (f, e) in d_factors {
            Self::merge_factor(&mut factors, f, -e);
        }
        Ok(RatFun {
            arity: self.arity,
            coeff: BigRational::new(content, d_coeff),
            mono: mono
                .iter()
                .zip(&d_mono)
                .map(|(&a, b)| a as i64 - b)
                .collect(),
            factors,
        })
    }

    /// Image under the semifield homomorphism sending generator `i` to
    /// `assignment[i]`.
    pub fn eval_posrat(&self, assignment: &[PosRat]) -> PosRat {
        assert_eq!(assignment.len(), self.arity, "assignment must be total");
        let point: Vec<BigRational> = assignment.iter().map(|p| p.value().clone()).collect();
        let mut v = self.coeff.clone();
        for (x, &e) in point.iter().zip(&self.mono) {
            let mut p = BigRational::one();
            let base = if e < 0 { x.recip() } else { x.clone() };
            for _ in 0..e.unsigned_abs() {
                p *= &base;
            }
            v *= p;
        }
        for (f, &e) in &self.factors {
            let fv = f.eval(&point);
            let base = if e < 0 { fv.recip() } else { fv };
            for _ in 0..e.unsigned_abs() {
                v *= &base;
            }
        }
        PosRat::new(v).expect("subtraction-free expressions evaluate positively")
    }
}

impl SemifieldElem for RatFun {
    fn one(arity: usize) -> Self {
        RatFun {
            arity,
            coeff: BigRational::one(),
            mono: vec![0; arity],
            factors: BTreeMap::new(),
        }
    }

    fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.arity, rhs.arity, "mismatched generator sets");
        let mut factors = self.factors.clone();
        for (f, &e) in &rhs.factors {
            Self::merge_factor(&mut factors, f.clone(), e);
        }
        RatFun {
            arity: self.arity,
            coeff: &self.coeff * &rhs.coeff,
            mono: self.mono.iter().zip(&rhs.mono).map(|(a, b)| a + b).collect(),
            factors,
        }
    }

    fn inv(&self) -> Self {
        RatFun {
            arity: self.arity,
            coeff: self.coeff.recip(),
            mono: self.mono.iter().map(|&e| -e).collect(),
            factors: self.factors.iter().map(|(f, &e)| (f.clone(), -e)).collect(),
        }
    }

    fn add(&self, rhs: &Self) -> Self {
        match self.try_add(rhs) {
            Ok(v) => v,
            Err(e) => panic!("{e}"),
        }
    }

    fn add_with_hints(&self, rhs: &Self, hints: &[MPoly]) -> Self {
        match self.try_add_with(rhs, hints) {
            Ok(v) => v,
            Err(e) => panic!("{e}"),
        }
    }

    fn factor_hints(&self) -> Vec<MPoly> {
        self.factors.keys().cloned().collect()
    }

    fn pow(&self, e: i64) -> Self {
        let mut coeff = BigRational::one();
        let base = if e < 0 {
            self.coeff.recip()
        } else {
            self.coeff.clone()
        };
        for _ in 0..e.unsigned_abs() {
            coeff *= &base;
        }
        RatFun {
            arity: self.arity,
            coeff,
            mono: self.mono.iter().map(|x| x * e).collect(),
            factors: self
                .factors
                .iter()
                .map(|(f, &x)| (f.clone(), x * e))
                .filter(|(_, x)| *x != 0)
                .collect(),
        }
    }

    fn sf_eq(&self, rhs: &Self) -> bool {
        if self == rhs {
            return true;
        }
        match ratfun_equal(self, rhs) {
            Ok(v) => v,
            Err(e) => panic!("{e}"),
        }
    }
}

/// Exact equality of two rational functions, with a randomized
/// positive-rational prescreen (`RATFUN_PRESCREEN_POINTS` points). A
/// differing evaluation disproves equality exactly; agreement is always
/// confirmed by exact expansion of the ratio.
pub fn ratfun_equal(a: &RatFun, b: &RatFun) -> Result<bool> {
    if a.arity != b.arity {
        return Err(Error::Validation("mismatched generator sets".into()));
    }
    if a == b {
        return Ok(true);
    }
    for k in 0..RATFUN_PRESCREEN_POINTS {
        let point = prescreen_point(a.arity, k);
        if a.eval_posrat(&point).value() != b.eval_posrat(&point).value() {
            return Ok(false);
        }
    }
    // Expand the ratio a/b rather than the cross-products: factors shared by
    // both sides cancel structurally first, keeping the polynomials small.
    let mut ratio = RatFun {
        arity: a.arity,
        coeff: &a.coeff / &b.coeff,
        mono: a.mono.iter().zip(&b.mono).map(|(x, y)| x - y).collect(),
        factors: a.factors.clone(),
    };
    for (f, &e) in &b.factors {
        RatFun::merge_factor(&mut ratio.factors, f.clone(), -e);
    }
    let (n, d) = ratio.expand_num_den()?;
    Ok(n == d)
}

/// Number of random points used by the equality prescreen.
pub const RATFUN_PRESCREEN_POINTS: usize = 8;

fn prescreen_point(arity: usize, round: usize) -> Vec<PosRat> {
    // Small deterministic LCG; distinctness across rounds is all that matters.
    let mut state = 0x9e3779b97f4a7c15u64 ^ (round as u64).wrapping_mul(0xbf58476d1ce4e5b9);
    let mut next = || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (state >> 33) % 97 + 1
    };
    (0..arity)
        .map(|_| PosRat::from_ints(next() as i64, next() as i64))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tropical_addition_is_min() {
        let a = Tropical(vec![1, 0]);
        let b = Tropical(vec![-1, 1]);
        assert_eq!(a.add(&b), Tropical(vec![-1, 0]));
        assert_eq!(a.add(&a), a); // idempotent
        let one = Tropical::one(2);
        assert_eq!(one.add(&a), one); // 1 + y = 1 when exponents >= 0
    }

    #[test]
    fn tropical_axioms() {
        let a = Tropical(vec![3, -2, 5]);
        let b = Tropical(vec![0, 7, -1]);
        let c = Tropical(vec![-4, 1, 1]);
        assert_eq!(a.add(&b), b.add(&a));
        assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
    }

    #[test]
    fn ratfun_telescoping_equality() {
        // (y^2 - 1)/(y - 1) is not constructible without subtraction, but the
        // same value arises as (1 + y): check (1+y)(1+y) / (1+y) = (1+y).
        let y = RatFun::generator(1, 0);
        let one = RatFun::one(1);
        let s = one.add(&y);
        let q = s.mul(&s).div(&s);
        assert!(q.sf_eq(&s));
        assert!(ratfun_equal(&q, &s).unwrap());
    }

    #[test]
    fn ratfun_inequality() {
        let y1 = RatFun::generator(2, 0);
        let y2 = RatFun::generator(2, 1);
        let a = y1.div(&RatFun::one(2).add(&y2));
        assert!(!ratfun_equal(&a, &y1).unwrap());
    }

    #[test]
    fn ratfun_eval_homomorphism() {
        // y1*y2/(1+y1) at y = (1,1) -> 1/2
        let y1 = RatFun::generator(2, 0);
        let y2 = RatFun::generator(2, 1);
        let expr = y1.mul(&y2).div(&RatFun::one(2).add(&y1));
        let v = expr.eval_posrat(&[PosRat::from_ints(1, 1), PosRat::from_ints(1, 1)]);
        assert_eq!(v, PosRat::from_ints(1, 2));
        // generators map to their assigned values
        let g = RatFun::generator(2, 1);
        assert_eq!(
            g.eval_posrat(&[PosRat::from_ints(2, 1), PosRat::from_ints(5, 3)]),
            PosRat::from_ints(5, 3)
        );
    }

    #[test]
    fn ratfun_factored_cancellation() {
        // Values built by identical additions cancel structurally.
        let y = RatFun::generator(3, 1);
        let s1 = RatFun::one(3).add(&y);
        let s2 = RatFun::one(3).add(&y);
        let q = s1.div(&s2);
        assert!(q.is_one());
    }

    #[test]
    fn posrat_positivity_is_structural() {
        let a = PosRat::from_ints(3, 7);
        let b = PosRat::from_ints(1, 2);
        let c = a.add(&b).mul(&a.inv()).pow(-3);
        assert!(c.value() > &BigRational::zero());
        assert!(PosRat::new(BigRational::zero()).is_err());
    }

    #[test]
    fn ratfun_pow_matches_repeated_mul() {
        let y = RatFun::generator(2, 0);
        let s = RatFun::one(2).add(&y).div(&RatFun::generator(2, 1));
        assert!(s.pow(3).sf_eq(&s.mul(&s).mul(&s)));
        assert!(s.pow(-2).sf_eq(&s.inv().mul(&s.inv())));
        assert!(s.pow(0).is_one());
    }
}
