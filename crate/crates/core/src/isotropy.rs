//! Isotropy classes of the base action, slices, stratum dimensions and the
//! isotropy lattice.

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::group::{ActionSpec, ClosedSubgroup, IsotropyClass};
use crate::linalg::{intersect, orthogonal_complement, span_basis, Matrix};
use crate::poset::Poset;
use crate::sampling::{rational_combination, stream};
use crate::scalar::Scalar;

/// Retry cap of the witness search.
pub const WITNESS_RETRIES: usize = 100;

/// `T_mM = g·m ⊕ S_m^H ⊕ N_m` at a point `m` with stabilizer `H`.
#[derive(Clone, Debug, PartialEq)]
pub struct SliceData<S> {
    pub orbit_tangent: Matrix<S>,
    pub slice: Matrix<S>,
    pub slice_fixed: Matrix<S>,
    pub normal: Matrix<S>,
}

#[derive(Clone, Debug)]
pub struct StratumInfo {
    pub class: IsotropyClass,
    pub witness: Vec<BigRational>,
    pub dim_stratum: usize,
    pub dim_quotient: usize,
    pub slice: SliceData<BigRational>,
}

#[derive(Clone, Debug)]
pub struct IsotropyLattice {
    /// Sorted by class id.
    pub strata: Vec<StratumInfo>,
    /// `less(i, j)` iff class `i` is strictly subconjugate to class `j`.
    pub order: Poset,
    /// Covering pairs `(i, j)`: class `i` directly below class `j`.
    pub hasse_edges: Vec<(usize, usize)>,
    /// Index of the principal (unique minimal) class.
    pub principal: usize,
    /// `dim G`.
    pub dim_group: usize,
}

impl IsotropyLattice {
    pub fn len(&self) -> usize {
        self.strata.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strata.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.strata
            .iter()
            .position(|s| s.class.id == id)
            .ok_or_else(|| Error::ClassNotFound(id.to_string()))
    }

    pub fn class(&self, i: usize) -> &IsotropyClass {
        &self.strata[i].class
    }

    pub fn classes(&self) -> impl Iterator<Item = &IsotropyClass> {
        self.strata.iter().map(|s| &s.class)
    }

    pub fn principal_class(&self) -> &IsotropyClass {
        self.class(self.principal)
    }

    /// Classes `(L) ≤ (H)` for the class at index `h`.
    pub fn down_set(&self, h: usize) -> Vec<&IsotropyClass> {
        self.order
            .down_set(h)
            .into_iter()
            .map(|i| self.class(i))
            .collect()
    }

    pub fn contains(&self, class: &IsotropyClass) -> bool {
        self.strata.iter().any(|s| s.class.id == class.id)
    }
}

/// Slice decomposition at `m`.
pub fn slice_at<S: Scalar>(spec: &ActionSpec, m: &[S]) -> Result<SliceData<S>> {
    let n = spec.n();
    let tol = spec.tolerance();
    let h = spec.stabilizer(m)?;
    let rep = spec.base();
    let tangents: Matrix<S> = (0..spec.k()).map(|i| rep.infinitesimal(i, m)).collect();
    let orbit_tangent = span_basis(&tangents, tol);
    let slice = orthogonal_complement(&orbit_tangent, n, tol);
    let fix: Matrix<S> = spec
        .fixed_subspace(&h)
        .iter()
        .map(|v| v.iter().map(S::from_rational).collect())
        .collect();
    let slice_fixed = intersect(&fix, &slice, n, tol);
    let normal = intersect(&orthogonal_complement(&slice_fixed, n, tol), &slice, n, tol);
    Ok(SliceData {
        orbit_tangent,
        slice,
        slice_fixed,
        normal,
    })
}

/// `(dim M₍H₎, dim M⁽H⁾)` from the tube formula.
pub fn stratum_dimension<S>(
    slice: &SliceData<S>,
    dim_group: usize,
    dim_h: usize,
) -> (usize, usize) {
    let dim = slice.orbit_tangent.len() + slice.slice_fixed.len();
    (dim, dim + dim_h - dim_group)
}

fn stratum_at(spec: &ActionSpec, class: IsotropyClass, m: Vec<BigRational>) -> Result<StratumInfo> {
    let slice = slice_at(spec, &m)?;
    let (dim_stratum, dim_quotient) = stratum_dimension(&slice, spec.k(), class.dim);
    Ok(StratumInfo {
        class,
        witness: m,
        dim_stratum,
        dim_quotient,
        slice,
    })
}

enum Search {
    Found(Vec<BigRational>),
    Unrealized,
}

fn search_witness(
    spec: &ActionSpec,
    h: &ClosedSubgroup,
    fix: &Matrix<BigRational>,
    rng: &mut rand_chacha::ChaCha8Rng,
    skip: Option<&[BigRational]>,
) -> Result<Search> {
    for _ in 0..WITNESS_RETRIES {
        let m = rational_combination(fix, spec.n(), rng);
        if skip == Some(m.as_slice()) {
            continue;
        }
        let k = spec.stabilizer(&m)?;
        if &k == h {
            return Ok(Search::Found(m));
        }
        if spec.fixed_subspace(&k).len() == fix.len() {
            return Ok(Search::Unrealized);
        }
    }
    Err(Error::WitnessSearchFailed {
        candidate: spec.class_of(h).id,
        retries: WITNESS_RETRIES,
    })
}

/// Every realized orbit type, one [`StratumInfo`] per class, sorted by id.
pub fn enumerate_orbit_types(spec: &ActionSpec, seed: u64) -> Result<Vec<StratumInfo>> {
    let mut strata = Vec::new();
    for (idx, class) in spec.universe().classes(spec.group()).enumerate() {
        let h = class.representative.clone();
        let fix = spec.fixed_subspace(&h);
        let mut rng = stream(seed, idx as u64);
        let Search::Found(m) = search_witness(spec, &h, &fix, &mut rng, None)? else {
            continue;
        };
        let info = stratum_at(spec, class, m)?;
        // second witness guards against strata of mixed dimension
        if !fix.is_empty() {
            if let Search::Found(m2) =
                search_witness(spec, &h, &fix, &mut rng, Some(&info.witness))?
            {
                let other = stratum_at(spec, info.class.clone(), m2)?;
                if other.dim_stratum != info.dim_stratum {
                    return Err(Error::InconsistentStratumDimension {
                        class: info.class.id.clone(),
                        first: info.dim_stratum,
                        second: other.dim_stratum,
                    });
                }
            }
        }
        strata.push(info);
    }
    strata.sort_by(|a, b| a.class.cmp(&b.class));
    Ok(strata)
}

/// Subconjugacy order, Hasse edges and principal class.
pub fn build_isotropy_lattice(
    spec: &ActionSpec,
    strata: Vec<StratumInfo>,
) -> Result<IsotropyLattice> {
    let mut strata = strata;
    strata.sort_by(|a, b| a.class.cmp(&b.class));
    let order = Poset::from_relation(strata.len(), |i, j| {
        spec.is_subconjugate(&strata[i].class, &strata[j].class)
    });
    let minimal = order.minimal();
    if minimal.len() != 1 || !order.is_acyclic() {
        return Err(Error::NoUniqueMinimum(
            minimal
                .iter()
                .map(|&i| strata[i].class.id.clone())
                .collect(),
        ));
    }
    let hasse_edges = order.hasse_edges();
    Ok(IsotropyLattice {
        principal: minimal[0],
        hasse_edges,
        order,
        strata,
        dim_group: spec.k(),
    })
}

/// Enumeration followed by lattice construction.
pub fn isotropy_lattice(spec: &ActionSpec, seed: u64) -> Result<IsotropyLattice> {
    build_isotropy_lattice(spec, enumerate_orbit_types(spec, seed)?)
}
