//! Dense-arity sparse multivariate polynomials with exact integer
//! coefficients, used as the building block of the rational-function
//! semifield backend.

use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Default cap on the number of stored monomials; exceeding it aborts with a
/// resource error instead of thrashing.
pub const DEFAULT_MONOMIAL_CAP: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MPoly {
    arity: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl MPoly {
    pub fn zero(arity: usize) -> Self {
        MPoly {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(arity: usize, c: impl Into<BigInt>) -> Self {
        let mut p = MPoly::zero(arity);
        p.add_term(vec![0; arity], c.into());
        p
    }

    pub fn one(arity: usize) -> Self {
        MPoly::constant(arity, 1)
    }

    pub fn generator(arity: usize, idx: usize) -> Self {
        let mut exps = vec![0u32; arity];
        exps[idx] = 1;
        let mut p = MPoly::zero(arity);
        p.add_term(exps, BigInt::one());
        p
    }

    pub fn monomial(arity: usize, exps: Vec<u32>, c: impl Into<BigInt>) -> Self {
        debug_assert_eq!(exps.len(), arity);
        let mut p = MPoly::zero(arity);
        p.add_term(exps, c.into());
        p
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .map(|(e, c)| e.iter().all(|&x| x == 0) && c.is_one())
                .unwrap_or(false)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<u32>, &BigInt)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        debug_assert_eq!(self.arity, other.arity);
        let mut out = self.clone();
        for (e, c) in other.iter() {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn mul(&self, other: &MPoly) -> Result<MPoly> {
        self.mul_capped(other, DEFAULT_MONOMIAL_CAP)
    }

    pub fn mul_capped(&self, other: &MPoly, cap: usize) -> Result<MPoly> {
        debug_assert_eq!(self.arity, other.arity);
        let mut out = MPoly::zero(self.arity);
        for (e1, c1) in self.iter() {
            for (e2, c2) in other.iter() {
                let exps: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(exps, c1 * c2);
            }
            if out.terms.len() > cap {
                return Err(Error::Resource(format!(
                    "polynomial exceeded the {cap}-monomial cap"
                )));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<MPoly> {
        let mut out = MPoly::one(self.arity);
        for _ in 0..e {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// Split off the integer content and the common monomial, returning
    /// `(content, monomial_exps, primitive)` with
    /// `self = content * x^monomial * primitive`. The primitive part has
    /// coprime coefficients, no common variable, and positive leading sign.
    pub fn normalized(&self) -> (BigInt, Vec<u32>, MPoly) {
        if self.is_zero() {
            return (BigInt::zero(), vec![0; self.arity], MPoly::zero(self.arity));
        }
        let mut content = BigInt::zero();
        let mut mono = self.terms.keys().next().expect("nonzero").clone();
        for (e, c) in self.iter() {
            content = num::integer::gcd(content.clone(), c.abs());
            for (m, &x) in mono.iter_mut().zip(e) {
                *m = (*m).min(x);
            }
        }
        // Positive sign on the lexicographically-least monomial.
        if self.terms.values().next().expect("nonzero").is_negative() {
            content = -content;
        }
        let mut prim = MPoly::zero(self.arity);
        for (e, c) in self.iter() {
            let exps: Vec<u32> = e.iter().zip(&mono).map(|(a, b)| a - b).collect();
            prim.add_term(exps, c / &content);
        }
        (content, mono, prim)
    }

    /// Exact division: `Some(q)` with `self = q * d`, or `None` when `d`
    /// does not divide `self`. Uses lexicographic leading-term elimination.
    pub fn div_exact(&self, d: &MPoly) -> Option<MPoly> {
        debug_assert_eq!(self.arity, d.arity);
        let (dle, dlc) = d.terms.last_key_value()?;
        let mut rem = self.clone();
        let mut q = MPoly::zero(self.arity);
        while let Some((rle, rlc)) = rem.terms.last_key_value() {
            let mut exps = Vec::with_capacity(self.arity);
            for (a, b) in rle.iter().zip(dle) {
                exps.push(a.checked_sub(*b)?);
            }
            let c = rlc / dlc;
            if &(&c * dlc) != rlc {
                return None;
            }
            for (e2, c2) in d.iter() {
                let shifted: Vec<u32> = exps.iter().zip(e2).map(|(a, b)| a + b).collect();
                rem.add_term(shifted, -(&c * c2));
            }
            q.add_term(exps, c);
        }
        Some(q)
    }

    /// Evaluate at exact rational points.
    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        debug_assert_eq!(point.len(), self.arity);
        let mut total = BigRational::zero();
        for (e, c) in self.iter() {
            let mut t = BigRational::from(c.clone());
            for (x, &p) in point.iter().zip(e) {
                for _ in 0..p {
                    t *= x;
                }
            }
            total += t;
        }
        total
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mul_and_normalize() {
        // (2x + 2y) * x = 2x^2 + 2xy = 2 * x * (x + y)
        let x = MPoly::generator(2, 0);
        let y = MPoly::generator(2, 1);
        let mut p = x.add(&y);
        p = p.add(&p.clone());
        let q = p.mul(&x).unwrap();
        let (content, mono, prim) = q.normalized();
        assert_eq!(content, BigInt::from(2));
        assert_eq!(mono, vec![1, 0]);
        assert_eq!(prim, x.add(&y));
    }

    #[test]
    fn cap_enforced() {
        let mut p = MPoly::zero(1);
        for i in 0..200u32 {
            p.add_term(vec![i], BigInt::one());
        }
        assert!(p.mul_capped(&p, 100).is_err());
    }

    #[test]
    fn eval_matches_structure() {
        use num::BigInt;
        let x = MPoly::generator(2, 0);
        let y = MPoly::generator(2, 1);
        let p = x.mul(&x).unwrap().add(&y); // x^2 + y
        let pt = vec![
            BigRational::new(BigInt::from(3), BigInt::from(2)),
            BigRational::new(BigInt::from(1), BigInt::from(4)),
        ];
        assert_eq!(
            p.eval(&pt),
            BigRational::new(BigInt::from(5), BigInt::from(2))
        );
    }
}
