//! Seeded random streams and random points in subspaces.

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::{add, norm_sq, scale};
use crate::scalar::{ratio, rationalize, Scalar};

/// Largest denominator of random rational coefficients.
pub const MAX_DENOMINATOR: i64 = 97;

/// Independent stream `index` of the generator seeded by `seed`.
pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Random rational `p/q` with `|p| ≤ 97`, `1 ≤ q ≤ 97`, `p ≠ 0`.
pub fn small_rational<R: Rng>(rng: &mut R) -> BigRational {
    let mut p = 0;
    while p == 0 {
        p = rng.random_range(-MAX_DENOMINATOR..=MAX_DENOMINATOR);
    }
    ratio(p, rng.random_range(1..=MAX_DENOMINATOR))
}

/// Random combination of `basis` with small rational coefficients.
pub fn rational_combination<R: Rng>(
    basis: &[Vec<BigRational>],
    n: usize,
    rng: &mut R,
) -> Vec<BigRational> {
    basis
        .iter()
        .fold(vec![BigRational::from_integer(0.into()); n], |acc, b| {
            add(&acc, &scale(b, &small_rational(rng)))
        })
}

/// Uniform point of the unit ball in `ℝᵈ`.
pub fn unit_ball<R: Rng>(d: usize, rng: &mut R) -> Vec<f64> {
    if d == 0 {
        return Vec::new();
    }
    let g: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
    let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
    let r = rng.random::<f64>().powf(1.0 / d as f64);
    g.into_iter()
        .map(|x| x * r / norm.max(f64::MIN_POSITIVE))
        .collect()
}

/// Uniform point of the unit ball of `span(basis)` (pairwise-orthogonal
/// basis), with each coefficient rounded to a multiple of `1/denom` so the
/// result lies exactly in the span.
pub fn ball_in_span<S: Scalar, R: Rng>(
    basis: &[Vec<S>],
    n: usize,
    denom: i64,
    rng: &mut R,
) -> Vec<S> {
    let c = unit_ball(basis.len(), rng);
    basis
        .iter()
        .zip(c)
        .fold(vec![S::zero(); n], |acc, (b, ci)| {
            let len = norm_sq(b).to_f64().sqrt();
            let coef = S::from_rational(&rationalize(ci / len, denom));
            add(&acc, &scale(b, &coef))
        })
}
