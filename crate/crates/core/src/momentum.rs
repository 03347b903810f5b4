//! Momentum map of the cotangent lift and the fiberwise structure of
//! `J⁻¹(0)`.
//!
//! Covectors are identified with vectors through the Euclidean metric, so
//! `J(m, p)ᵢ = ⟨p, Aᵢ m⟩`.

use std::collections::BTreeSet;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::group::{ActionSpec, ClosedSubgroup, IsotropyClass};
use crate::isotropy::{slice_at, IsotropyLattice};
use crate::linalg::{dot, identity, intersect, kernel, orthogonalize, Matrix};
use crate::sampling::{ball_in_span, rational_combination, stream};
use crate::scalar::Scalar;

/// Coefficient denominator used when rationalizing sampled covectors.
pub const COVECTOR_DENOMINATOR: i64 = 1 << 20;

/// Random draws per conjugate in the directed search.
pub const DIRECTED_DRAWS: usize = 4;

#[derive(Clone, Debug, PartialEq)]
pub struct FiberDecomposition<S> {
    pub base_point: Vec<S>,
    pub class: IsotropyClass,
    pub cotangent_part: Matrix<S>,
    pub conormal_part: Matrix<S>,
    pub annihilator: Matrix<S>,
}

fn check_dim<S>(spec: &ActionSpec, v: &[S]) -> Result<()> {
    if v.len() == spec.n() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: spec.n(),
            got: v.len(),
        })
    }
}

/// `(⟨p, Aᵢ m⟩)ᵢ`.
pub fn momentum<S: Scalar>(spec: &ActionSpec, m: &[S], p: &[S]) -> Result<Vec<S>> {
    check_dim(spec, m)?;
    check_dim(spec, p)?;
    Ok((0..spec.k())
        .map(|i| dot(p, &spec.base().infinitesimal(i, m)))
        .collect())
}

/// Orthogonal basis of `(g·m)° = J_m⁻¹(0)`.
pub fn fiber_zero_basis<S: Scalar>(spec: &ActionSpec, m: &[S]) -> Result<Matrix<S>> {
    check_dim(spec, m)?;
    let n = spec.n();
    let rows: Matrix<S> = (0..spec.k())
        .map(|i| spec.base().infinitesimal(i, m))
        .collect();
    if rows.is_empty() {
        return Ok(identity(n));
    }
    let tol = spec.tolerance();
    Ok(orthogonalize(&kernel(&rows, n, tol), tol))
}

/// `J_m⁻¹(0) = (S_m^H)* ⊕ N*_m M₍H₎`.
pub fn fiber_decomposition<S: Scalar>(spec: &ActionSpec, m: &[S]) -> Result<FiberDecomposition<S>> {
    let slice = slice_at(spec, m)?;
    let class = spec.class_of(&spec.stabilizer(m)?);
    Ok(FiberDecomposition {
        base_point: m.to_vec(),
        class,
        cotangent_part: slice.slice_fixed,
        conormal_part: slice.normal,
        annihilator: slice.slice,
    })
}

/// `F`-conjugates of `class` contained in `within`.
pub fn conjugates_inside(
    spec: &ActionSpec,
    class: &IsotropyClass,
    within: &ClosedSubgroup,
) -> Vec<ClosedSubgroup> {
    spec.conjugates(&class.representative)
        .into_iter()
        .filter(|c| c.is_subgroup_of(within))
        .collect()
}

fn directed_search(
    spec: &ActionSpec,
    lattice: &IsotropyLattice,
    m: &[BigRational],
    fiber: &Matrix<BigRational>,
    seed: u64,
    out: &mut BTreeSet<IsotropyClass>,
) -> Result<()> {
    let n = spec.n();
    let gm = spec.stabilizer(m)?;
    for (li, class) in lattice.classes().enumerate() {
        for (ci, lp) in conjugates_inside(spec, class, &gm).iter().enumerate() {
            let target = intersect(&spec.fixed_subspace(lp), fiber, n, 0.0);
            let mut rng = stream(seed, (1 << 32) + ((li as u64) << 16) + ci as u64);
            for _ in 0..DIRECTED_DRAWS {
                let p = rational_combination(&target, n, &mut rng);
                out.insert(spec.class_of(&spec.cotangent_stabilizer(m, &p)?));
            }
        }
    }
    Ok(())
}

/// Classes of `G_(m,p)` over `budget` uniform covectors `p` in the unit ball
/// of `(g·m)°`, plus a directed search through `Fix(L) ∩ (g·m)°` for every
/// class `(L)` of the lattice with a conjugate inside `G_m`.
pub fn sample_fiber_classes(
    spec: &ActionSpec,
    lattice: &IsotropyLattice,
    m: &[BigRational],
    budget: usize,
    seed: u64,
) -> Result<BTreeSet<IsotropyClass>> {
    sample_classes_in(spec, lattice, m, &fiber_zero_basis(spec, m)?, budget, seed)
}

fn sample_classes_in(
    spec: &ActionSpec,
    lattice: &IsotropyLattice,
    m: &[BigRational],
    fiber: &Matrix<BigRational>,
    budget: usize,
    seed: u64,
) -> Result<BTreeSet<IsotropyClass>> {
    if budget == 0 {
        return Err(Error::InvalidBudget);
    }
    let n = spec.n();
    let mut out = BTreeSet::new();
    let mut rng = stream(seed, 0);
    for _ in 0..budget {
        let p = ball_in_span(fiber, n, COVECTOR_DENOMINATOR, &mut rng);
        out.insert(spec.class_of(&spec.cotangent_stabilizer(m, &p)?));
    }
    directed_search(spec, lattice, m, fiber, seed, &mut out)?;
    Ok(out)
}

/// `{(L) ∈ I_M : (L) ≤ (H)}`.
pub fn conormal_orbit_types(
    lattice: &IsotropyLattice,
    h: &IsotropyClass,
) -> Result<BTreeSet<IsotropyClass>> {
    let i = lattice.index_of(&h.id)?;
    Ok(lattice.down_set(i).into_iter().cloned().collect())
}

/// Sampled classes of `(m, p)` with `p` in the conormal part at the witness
/// of `h` (the zero covector included).
pub fn sample_conormal_classes(
    spec: &ActionSpec,
    lattice: &IsotropyLattice,
    h: &IsotropyClass,
    budget: usize,
    seed: u64,
) -> Result<BTreeSet<IsotropyClass>> {
    let stratum = &lattice.strata[lattice.index_of(&h.id)?];
    let m = &stratum.witness;
    let mut out = sample_classes_in(spec, lattice, m, &stratum.slice.normal, budget, seed)?;
    let zero = vec![BigRational::from_integer(0.into()); spec.n()];
    out.insert(spec.class_of(&spec.cotangent_stabilizer(m, &zero)?));
    Ok(out)
}
