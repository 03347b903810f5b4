//! The group `G = F × (S¹)ᵏ`, its elements, subgroups and linear action.

pub mod action;
pub mod angle;
pub mod finite;
pub mod spec;
pub mod stabilizer;
pub mod subgroup;
pub mod torus;

pub use action::{GroupElement, Representation};
pub use angle::Angle;
pub use finite::{ElementSet, FiniteGroup, DEFAULT_ORDER_CAP};
pub use spec::{ActionSpec, Fixtures, NamedPolynomial, Relation, RelationKind, DEFAULT_TOLERANCE};
pub use subgroup::{ClassUniverse, ClosedSubgroup, IsotropyClass};
pub use torus::TorusSubgroup;
