//! Sparse multivariate polynomials with rational coefficients.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    /// The coordinate function `z_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, BigRational::one());
        p
    }

    pub fn from_terms(
        nvars: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, BigRational)>,
    ) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigRational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    fn add_term(&mut self, exp: Vec<u32>, c: BigRational) {
        assert_eq!(exp.len(), self.nvars, "exponent length");
        if c.is_zero() {
            return;
        }
        let entry = self
            .terms
            .entry(exp.clone())
            .or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Polynomial {
        Polynomial::from_terms(
            self.nvars,
            self.terms.iter().map(|(e, v)| (e.clone(), v * c)),
        )
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        (0..k).fold(
            Polynomial::constant(self.nvars, BigRational::one()),
            |acc, _| acc.mul(self),
        )
    }

    /// Substitutes `subs[i]` for variable `i`.
    pub fn compose(&self, subs: &[Polynomial]) -> Polynomial {
        assert_eq!(subs.len(), self.nvars, "substitution arity");
        let target = subs.first().map_or(0, Polynomial::nvars);
        let mut out = Polynomial::zero(target);
        for (e, c) in &self.terms {
            let mut term = Polynomial::constant(target, c.clone());
            for (s, &k) in subs.iter().zip(e) {
                if k > 0 {
                    term = term.mul(&s.pow(k));
                }
            }
            out = out.add(&term);
        }
        out
    }

    pub fn eval<S: Scalar>(&self, z: &[S]) -> S {
        self.terms.iter().fold(S::zero(), |acc, (e, c)| {
            let mono = e.iter().zip(z).fold(S::from_rational(c), |m, (&k, x)| {
                (0..k).fold(m, |m, _| m * x.clone())
            });
            acc + mono
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat_int;

    #[test]
    fn square_of_sum() {
        let x = Polynomial::var(2, 0);
        let y = Polynomial::var(2, 1);
        let s = x.add(&y).pow(2);
        assert_eq!(s.terms().count(), 3);
        assert_eq!(s.eval(&[rat_int(2), rat_int(3)]), rat_int(25));
        let diff = s
            .add(&x.pow(2).scale(&rat_int(-1)))
            .add(&y.pow(2).scale(&rat_int(-1)))
            .add(&x.mul(&y).scale(&rat_int(-2)));
        assert!(diff.is_zero());
    }

    #[test]
    fn composition() {
        // p(u) = u², u = x + 1
        let p = Polynomial::var(1, 0).pow(2);
        let u = Polynomial::var(1, 0).add(&Polynomial::constant(1, rat_int(1)));
        let q = p.compose(&[u]);
        assert_eq!(q.eval(&[rat_int(2)]), rat_int(9));
        assert_eq!(q.degree(), 2);
    }
}
