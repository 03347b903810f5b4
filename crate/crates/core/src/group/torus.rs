//! Closed subgroups of the torus `(S¹)ᵏ`.
//!
//! A closed subgroup is `{θ : c·θ ≡ 0 (mod 2π) for all c ∈ Λ}` for an integer
//! lattice `Λ ⊆ ℤᵏ`. The lattice is stored in Hermite normal form, which makes
//! equality and containment decidable.

use num_rational::Ratio;
use num_traits::Zero;
use serde::Serialize;

use super::angle::Angle;
use crate::intlat::{hnf, hnf_contains, invariant_factors, IntMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TorusSubgroup {
    rank: usize,
    /// Constraint lattice in Hermite normal form.
    lattice: IntMatrix,
}

impl TorusSubgroup {
    pub fn from_constraints(rows: &[Vec<i64>], rank: usize) -> Self {
        Self {
            rank,
            lattice: hnf(rows, rank),
        }
    }

    pub fn full(rank: usize) -> Self {
        Self {
            rank,
            lattice: Vec::new(),
        }
    }

    pub fn trivial(rank: usize) -> Self {
        let id: Vec<Vec<i64>> = (0..rank)
            .map(|i| (0..rank).map(|j| i64::from(i == j)).collect())
            .collect();
        Self::from_constraints(&id, rank)
    }

    pub fn ambient_rank(&self) -> usize {
        self.rank
    }

    pub fn lattice(&self) -> &IntMatrix {
        &self.lattice
    }

    pub fn dim(&self) -> usize {
        self.rank - self.lattice.len()
    }

    /// Invariant factors `> 1` of the torsion of `ℤᵏ/Λ`; the subgroup is
    /// `T^dim × ∏ Z_d`.
    pub fn torsion(&self) -> Vec<i64> {
        invariant_factors(&self.lattice, self.rank)
            .into_iter()
            .filter(|&d| d > 1)
            .collect()
    }

    pub fn components(&self) -> i64 {
        self.torsion().iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.dim() == 0 && self.components() == 1
    }

    /// `self ⊆ other`, i.e. `Λ_other ⊆ Λ_self`.
    pub fn is_subgroup_of(&self, other: &TorusSubgroup) -> bool {
        other
            .lattice
            .iter()
            .all(|row| hnf_contains(&self.lattice, row))
    }

    /// Whether the character `θ ↦ c·θ` is trivial on the subgroup.
    pub fn annihilates(&self, c: &[i64]) -> bool {
        hnf_contains(&self.lattice, c)
    }

    /// Membership of an element given in exact turns. Returns `None` when an
    /// angle is not stored as a fraction of a turn.
    pub fn contains_angles(&self, angles: &[Angle]) -> Option<bool> {
        let turns: Option<Vec<Ratio<i64>>> = angles.iter().map(Angle::turns_value).collect();
        let turns = turns?;
        Some(self.lattice.iter().all(|row| {
            let s = row.iter().zip(&turns).fold(Ratio::zero(), |acc, (c, t)| {
                acc + t * Ratio::from_integer(*c)
            });
            s.is_integer()
        }))
    }

    pub fn name(&self) -> String {
        let mut parts: Vec<String> = self.torsion().iter().map(|d| format!("Z{d}")).collect();
        match self.dim() {
            0 => {}
            1 => parts.push("S1".into()),
            d => parts.push(format!("T{d}")),
        }
        parts.join("x")
    }
}
