//! Linear orthogonal representations of `G = F × (S¹)ᵏ` and group elements.
//!
//! The torus acts on disjoint coordinate planes ("blocks"): torus factor `i`
//! rotates block `b` by `weights[i][b]·θᵢ`, as complex multiplication on
//! `x_first + i·x_second`. Finite elements act by their matrices. An element
//! `(f, θ)` acts as `v ↦ ρ(θ)·(f·v)`.

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::angle::Angle;
use super::finite::FiniteGroup;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement {
    pub finite: usize,
    pub torus: Vec<Angle>,
}

impl GroupElement {
    pub fn identity(k: usize) -> Self {
        Self {
            finite: 0,
            torus: vec![Angle::zero(); k],
        }
    }

    pub fn new(finite: usize, torus: Vec<Angle>) -> Self {
        Self { finite, torus }
    }

    /// Direct-product multiplication.
    pub fn compose(&self, other: &GroupElement, group: &FiniteGroup) -> GroupElement {
        GroupElement {
            finite: group.mul(self.finite, other.finite),
            torus: self
                .torus
                .iter()
                .zip(&other.torus)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn inverse(&self, group: &FiniteGroup) -> GroupElement {
        GroupElement {
            finite: group.inverse(self.finite),
            torus: self.torus.iter().map(Angle::neg).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.finite == 0 && self.torus.iter().all(Angle::is_zero)
    }
}

#[derive(Clone, Debug)]
pub struct Representation {
    dim: usize,
    /// One matrix per element of `F`, indexed like the group.
    matrices: Vec<Matrix<BigRational>>,
    /// Zero-based coordinate pairs.
    blocks: Vec<(usize, usize)>,
    /// `k × #blocks` weights.
    weights: Vec<Vec<i64>>,
}

impl Representation {
    pub fn new(
        dim: usize,
        matrices: Vec<Matrix<BigRational>>,
        blocks: Vec<(usize, usize)>,
        weights: Vec<Vec<i64>>,
    ) -> Self {
        Self {
            dim,
            matrices,
            blocks,
            weights,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn torus_rank(&self) -> usize {
        self.weights.len()
    }

    pub fn blocks(&self) -> &[(usize, usize)] {
        &self.blocks
    }

    pub fn weights(&self) -> &[Vec<i64>] {
        &self.weights
    }

    /// Weight vector of block `b` (one entry per torus factor).
    pub fn block_weight(&self, b: usize) -> Vec<i64> {
        self.weights.iter().map(|row| row[b]).collect()
    }

    pub fn matrix(&self, f: usize) -> &Matrix<BigRational> {
        &self.matrices[f]
    }

    pub fn finite_order(&self) -> usize {
        self.matrices.len()
    }

    /// Coordinates not covered by any block.
    pub fn free_coordinates(&self) -> Vec<usize> {
        (0..self.dim)
            .filter(|c| !self.blocks.iter().any(|&(i, j)| i == *c || j == *c))
            .collect()
    }

    /// Lie-algebra generator `Aᵢ` of torus factor `i`.
    pub fn lie_generator(&self, i: usize) -> Matrix<BigRational> {
        let mut a = vec![vec![BigRational::zero(); self.dim]; self.dim];
        for (b, &(p, q)) in self.blocks.iter().enumerate() {
            let w = BigRational::from_integer(self.weights[i][b].into());
            a[q][p] = w.clone();
            a[p][q] = -w;
        }
        a
    }

    /// `Aᵢ·v` without forming the matrix.
    pub fn infinitesimal<S: Scalar>(&self, i: usize, v: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(); self.dim];
        for (b, &(p, q)) in self.blocks.iter().enumerate() {
            let w = S::from_i64(self.weights[i][b]);
            out[p] = -(w.clone() * v[q].clone());
            out[q] = w * v[p].clone();
        }
        out
    }

    fn check_len<S>(&self, v: &[S]) -> Result<()> {
        if v.len() == self.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim,
                got: v.len(),
            })
        }
    }

    pub fn finite_act<S: Scalar>(&self, f: usize, v: &[S]) -> Vec<S> {
        self.matrices[f]
            .iter()
            .map(|row| {
                row.iter().zip(v).fold(S::zero(), |acc, (a, x)| {
                    if a.is_zero() {
                        acc
                    } else if a.is_one() {
                        acc + x.clone()
                    } else if (-a).is_one() {
                        acc - x.clone()
                    } else {
                        acc + S::from_rational(a) * x.clone()
                    }
                })
            })
            .collect()
    }

    /// Rotates every block by its weighted angle.
    pub fn torus_act<S: Scalar>(&self, angles: &[Angle], v: &[S]) -> Result<Vec<S>> {
        let mut out = v.to_vec();
        for (b, &(p, q)) in self.blocks.iter().enumerate() {
            let phi = angles
                .iter()
                .zip(&self.weights)
                .fold(Angle::zero(), |acc, (a, row)| acc.add(&a.times(row[b])));
            let (c, s) = phi.cos_sin::<S>().ok_or(Error::InexactAngle)?;
            out[p] = c.clone() * v[p].clone() - s.clone() * v[q].clone();
            out[q] = s * v[p].clone() + c * v[q].clone();
        }
        Ok(out)
    }

    /// Applies the finite matrix, then the block rotations.
    pub fn act<S: Scalar>(&self, g: &GroupElement, v: &[S]) -> Result<Vec<S>> {
        self.check_len(v)?;
        if g.torus.len() != self.torus_rank() {
            return Err(Error::DimensionMismatch {
                expected: self.torus_rank(),
                got: g.torus.len(),
            });
        }
        let w = self.finite_act(g.finite, v);
        self.torus_act(&g.torus, &w)
    }

    /// Cotangent lift on `ℝⁿ × ℝⁿ`: the diagonal action, with the same
    /// weights on the doubled blocks.
    pub fn doubled(&self) -> Representation {
        let n = self.dim;
        let matrices = self
            .matrices
            .iter()
            .map(|m| {
                let mut d = vec![vec![BigRational::zero(); 2 * n]; 2 * n];
                for i in 0..n {
                    for j in 0..n {
                        d[i][j] = m[i][j].clone();
                        d[n + i][n + j] = m[i][j].clone();
                    }
                }
                d
            })
            .collect();
        let mut blocks = self.blocks.clone();
        blocks.extend(self.blocks.iter().map(|&(p, q)| (p + n, q + n)));
        let weights = self
            .weights
            .iter()
            .map(|row| row.iter().chain(row.iter()).copied().collect())
            .collect();
        Representation {
            dim: 2 * n,
            matrices,
            blocks,
            weights,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::mat_vec;
    use crate::scalar::rat_int;

    fn example_rep() -> (FiniteGroup, Representation) {
        let flip: Matrix<BigRational> = vec![
            vec![rat_int(1), rat_int(0), rat_int(0)],
            vec![rat_int(0), rat_int(1), rat_int(0)],
            vec![rat_int(0), rat_int(0), rat_int(-1)],
        ];
        let g = FiniteGroup::generate(&[flip], 3, 256).unwrap();
        let rep = Representation::new(3, g.matrices().to_vec(), vec![(0, 1)], vec![vec![1]]);
        (g, rep)
    }

    fn qv(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| rat_int(x)).collect()
    }

    #[test]
    fn compose_examples() {
        let (g, _) = example_rep();
        let a = GroupElement::new(1, vec![Angle::turns(1, 4)]);
        assert_eq!(
            a.compose(&a, &g),
            GroupElement::new(0, vec![Angle::turns(1, 2)])
        );
        assert!(a.compose(&a.inverse(&g), &g).is_identity());
        let b = GroupElement::new(0, vec![Angle::turns(3, 4)]);
        assert_eq!(
            b.compose(&b, &g),
            GroupElement::new(0, vec![Angle::turns(1, 2)])
        );
    }

    #[test]
    fn act_examples() {
        let (_, rep) = example_rep();
        let half = GroupElement::new(0, vec![Angle::turns(1, 2)]);
        assert_eq!(rep.act(&half, &qv(&[1, 0, 0])).unwrap(), qv(&[-1, 0, 0]));
        let flip = GroupElement::new(1, vec![Angle::zero()]);
        assert_eq!(rep.act(&flip, &qv(&[0, 0, 1])).unwrap(), qv(&[0, 0, -1]));
        assert_eq!(rep.act(&half, &qv(&[0, 0, 0])).unwrap(), qv(&[0, 0, 0]));
        assert!(matches!(
            rep.act(&half, &qv(&[1, 0])),
            Err(Error::DimensionMismatch {
                expected: 3,
                got: 2
            })
        ));
    }

    #[test]
    fn cotangent_lift_rotates_both_factors() {
        let (_, rep) = example_rep();
        let lift = rep.doubled();
        let quarter = GroupElement::new(0, vec![Angle::turns(1, 4)]);
        let z = qv(&[1, 0, 0, 0, 1, 0]);
        assert_eq!(lift.act(&quarter, &z).unwrap(), qv(&[0, 1, 0, -1, 0, 0]));
    }

    #[test]
    fn infinitesimal_matches_generator() {
        let (_, rep) = example_rep();
        let v = qv(&[2, 3, 5]);
        assert_eq!(rep.infinitesimal(0, &v), mat_vec(&rep.lie_generator(0), &v));
    }

    #[test]
    fn exact_mode_rejects_irrational_rotation() {
        let (_, rep) = example_rep();
        let third = GroupElement::new(0, vec![Angle::turns(1, 3)]);
        assert_eq!(rep.act(&third, &qv(&[1, 0, 0])), Err(Error::InexactAngle));
        let f = rep.act(&third, &[1.0f64, 0.0, 0.0]).unwrap();
        assert!((f[0] + 0.5).abs() < 1e-12);
    }
}
