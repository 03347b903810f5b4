//! Orbit-type stratification and singular cotangent-bundle reduction for
//! linear actions of `G = F × (S¹)ᵏ` on `ℝⁿ`.
//!
//! Linear algebra is generic over [`Scalar`]: exact rationals drive every
//! discrete answer, floats serve sampling and numerical checks.

pub mod error;
pub mod group;
pub mod harness;
pub mod intlat;
pub mod isotropy;
pub mod linalg;
pub mod momentum;
pub mod poly;
pub mod poset;
pub mod reduced;
pub mod sampling;
pub mod scalar;

pub use error::{Error, Result};
pub use group::{
    ActionSpec, Angle, ClosedSubgroup, FiniteGroup, GroupElement, IsotropyClass, TorusSubgroup,
};
pub use isotropy::{IsotropyLattice, SliceData, StratumInfo};
pub use reduced::{Piece, StratLattice};
pub use scalar::Scalar;

/// Exact scalar used for all discrete computations.
pub type Rational = num_rational::BigRational;
pub type RationalMatrix = linalg::Matrix<Rational>;
pub type FloatMatrix = linalg::Matrix<f64>;
