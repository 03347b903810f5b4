//! Action-spec documents and the validated [`ActionSpec`].
//!
//! Document schema (JSON):
//!
//! ```text
//! {
//!   "n": 3,
//!   "finite_generators": [[[1,0,0],[0,1,0],[0,0,-1]]],
//!   "torus": {"blocks": [[1,2]], "weights": [[1]]},
//!   "tolerance": 1e-9,
//!   "group_order_cap": 256,
//!   "invariants": [{"name": "j", "terms": [{"exp": [1,0,0,0,1,0], "coef": 1}, ...]}],
//!   "relations": [{"name": "...", "kind": "eq", "terms": [{"coef": 1, "powers": {"j": 2}}]}],
//!   "fixtures": {...}
//! }
//! ```
//!
//! Rationals are integers or `"p/q"` strings. Block indices are 1-based.
//! Invariant exponents run over `(x₁..xₙ, y₁..yₙ)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize};

use super::action::{GroupElement, Representation};
use super::angle::Angle;
use super::finite::{FiniteGroup, DEFAULT_ORDER_CAP};
use super::stabilizer::{stabilizer, torus_stabilizer};
use super::subgroup::{is_subconjugate, ClassUniverse, ClosedSubgroup, IsotropyClass};
use super::torus::TorusSubgroup;
use crate::error::{Error, Result};
use crate::linalg::{kernel, mat_mul, orthogonalize, Matrix};
use crate::poly::Polynomial;
use crate::scalar::{format_rational, parse_rational, ratio, Scalar};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// A rational read from either an integer or a `"p/q"` string.
#[derive(Clone, Debug, PartialEq)]
pub struct Rat(pub BigRational);

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Rat;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an integer or a \"p/q\" string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Rat, E> {
                Ok(Rat(ratio(v, 1)))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Rat, E> {
                i64::try_from(v)
                    .map(|v| Rat(ratio(v, 1)))
                    .map_err(|_| E::custom("integer out of range"))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Rat, E> {
                parse_rational(v)
                    .map(Rat)
                    .ok_or_else(|| E::custom(format!("invalid rational {v:?}")))
            }
        }
        d.deserialize_any(V)
    }
}

impl Serialize for Rat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTorus {
    #[serde(default)]
    blocks: Vec<[usize; 2]>,
    #[serde(default)]
    weights: Vec<Vec<i64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerm {
    exp: Vec<u32>,
    coef: Rat,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInvariant {
    name: String,
    terms: Vec<RawTerm>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RelationKind {
    /// Identity `P = 0`.
    Eq,
    /// Sign constraint `P ≥ 0`.
    Nonneg,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRelTerm {
    coef: Rat,
    #[serde(default)]
    powers: BTreeMap<String, u32>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRelation {
    name: String,
    kind: RelationKind,
    terms: Vec<RawRelTerm>,
}

/// Hilbert-map cone coordinates for region classification.
#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ConeFixture {
    /// Invariant that must vanish on the zero level.
    pub momentum: String,
    /// Each cone is `(a, b, c)` with `a² = b² + c²`, `a ≥ 0`.
    pub cones: Vec<[String; 3]>,
}

/// A base point with the class ids expected from covector sampling there.
#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FiberWitnessFixture {
    pub point: Vec<Rat>,
    pub classes: Vec<String>,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Fixtures {
    #[serde(default)]
    pub hilbert_cones: Option<ConeFixture>,
    /// `"H->L"` to per-cone region labels.
    #[serde(default)]
    pub piece_regions: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub fiber_witnesses: Vec<FiberWitnessFixture>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    #[serde(default)]
    name: Option<String>,
    n: usize,
    #[serde(default)]
    finite_generators: Vec<Vec<Vec<Rat>>>,
    #[serde(default)]
    torus: Option<RawTorus>,
    #[serde(default)]
    tolerance: Option<f64>,
    #[serde(default)]
    group_order_cap: Option<usize>,
    #[serde(default)]
    invariants: Vec<RawInvariant>,
    #[serde(default)]
    relations: Vec<RawRelation>,
    #[serde(default)]
    fixtures: Option<Fixtures>,
}

#[derive(Clone, Debug)]
pub struct NamedPolynomial {
    pub name: String,
    pub poly: Polynomial,
}

/// Polynomial relation among invariant values (variables in invariant order).
#[derive(Clone, Debug)]
pub struct Relation {
    pub name: String,
    pub kind: RelationKind,
    pub poly: Polynomial,
}

#[derive(Clone, Debug)]
pub struct ActionSpec {
    name: Option<String>,
    n: usize,
    group: FiniteGroup,
    base: Representation,
    cotangent: Representation,
    tolerance: f64,
    torus_types: Vec<TorusSubgroup>,
    universe: ClassUniverse,
    invariants: Vec<NamedPolynomial>,
    relations: Vec<Relation>,
    fixtures: Fixtures,
}

fn parse_error(e: serde_json::Error) -> Error {
    let full = e.to_string();
    let suffix = format!(" at line {} column {}", e.line(), e.column());
    Error::Parse {
        message: full.strip_suffix(&suffix).unwrap_or(&full).to_string(),
        line: e.line(),
        column: e.column(),
    }
}

impl ActionSpec {
    /// Parses and validates a JSON action-spec document.
    pub fn load(text: &str) -> Result<Self> {
        let raw: RawSpec = serde_json::from_str(text).map_err(parse_error)?;
        Self::from_raw(raw)
    }

    fn from_raw(raw: RawSpec) -> Result<Self> {
        let n = raw.n;
        if n == 0 {
            return Err(Error::InvalidSpec("n must be positive".into()));
        }
        let tolerance = raw.tolerance.unwrap_or(DEFAULT_TOLERANCE);
        if !(tolerance.is_finite() && tolerance >= 0.0) {
            return Err(Error::InvalidSpec(
                "tolerance must be a nonnegative number".into(),
            ));
        }
        let cap = raw.group_order_cap.unwrap_or(DEFAULT_ORDER_CAP);
        let gens: Vec<Matrix<BigRational>> = raw
            .finite_generators
            .into_iter()
            .map(|m| {
                m.into_iter()
                    .map(|r| r.into_iter().map(|x| x.0).collect())
                    .collect()
            })
            .collect();
        let (blocks, weights) = match raw.torus {
            None => (Vec::new(), Vec::new()),
            Some(t) => (t.blocks, t.weights),
        };
        let mut used = BTreeSet::new();
        let mut zero_blocks = Vec::with_capacity(blocks.len());
        for (b, &[i, j]) in blocks.iter().enumerate() {
            if i == 0 || j == 0 || i > n || j > n || i == j {
                return Err(Error::InvalidSpec(format!(
                    "torus block {b} = [{i}, {j}] is not a pair of distinct indices in 1..{n}"
                )));
            }
            if !used.insert(i) || !used.insert(j) {
                return Err(Error::InvalidSpec(format!(
                    "torus block {b} overlaps another block"
                )));
            }
            zero_blocks.push((i - 1, j - 1));
        }
        if !blocks.is_empty() && weights.is_empty() {
            return Err(Error::InvalidSpec(
                "torus blocks given without weights".into(),
            ));
        }
        if let Some(r) = weights.iter().position(|row| row.len() != blocks.len()) {
            return Err(Error::InvalidSpec(format!(
                "weight row {r} has length {} but there are {} blocks",
                weights[r].len(),
                blocks.len()
            )));
        }

        let group = FiniteGroup::generate(&gens, n, cap)?;
        let base = Representation::new(n, group.matrices().to_vec(), zero_blocks, weights);
        for (idx, &g) in group.generators().iter().enumerate() {
            let f = group.matrix(g);
            for i in 0..base.torus_rank() {
                let a = base.lie_generator(i);
                if mat_mul(f, &a) != mat_mul(&a, f) {
                    return Err(Error::IncompatibleBlocks { index: idx });
                }
            }
        }
        let cotangent = base.doubled();

        // torus stabilizer types: one per block support pattern
        let nblocks = base.blocks().len();
        let torus_types: BTreeSet<TorusSubgroup> = (0u64..(1u64 << nblocks))
            .map(|mask| {
                let support: Vec<bool> = (0..nblocks).map(|b| mask >> b & 1 == 1).collect();
                torus_stabilizer(&base, &support)
            })
            .collect();
        let torus_types: Vec<TorusSubgroup> = torus_types.into_iter().collect();
        let universe = ClassUniverse::build(&group, &torus_types);

        let nvars = 2 * n;
        let mut invariants = Vec::new();
        for inv in raw.invariants {
            let mut terms = Vec::new();
            for t in inv.terms {
                if t.exp.len() != nvars {
                    return Err(Error::InvalidSpec(format!(
                        "invariant {} has an exponent of length {} (expected {nvars})",
                        inv.name,
                        t.exp.len()
                    )));
                }
                terms.push((t.exp, t.coef.0));
            }
            invariants.push(NamedPolynomial {
                name: inv.name,
                poly: Polynomial::from_terms(nvars, terms),
            });
        }
        let names: Vec<&str> = invariants.iter().map(|p| p.name.as_str()).collect();
        let mut relations = Vec::new();
        for rel in raw.relations {
            let mut terms = Vec::new();
            for t in rel.terms {
                let mut exp = vec![0u32; names.len()];
                for (v, k) in t.powers {
                    let i = names
                        .iter()
                        .position(|&x| x == v)
                        .ok_or_else(|| Error::UnknownInvariant(v.clone()))?;
                    exp[i] += k;
                }
                terms.push((exp, t.coef.0));
            }
            relations.push(Relation {
                name: rel.name,
                kind: rel.kind,
                poly: Polynomial::from_terms(names.len(), terms),
            });
        }
        let spec = ActionSpec {
            name: raw.name,
            n,
            group,
            base,
            cotangent,
            tolerance,
            torus_types,
            universe,
            invariants,
            relations,
            fixtures: raw.fixtures.unwrap_or_default(),
        };
        spec.check_invariance(200, 0x5eed)?;
        Ok(spec)
    }

    /// Exact `P(g·z) = P(z)` for every declared invariant on random rational
    /// `z` and random elements with rational-point rotations.
    pub fn check_invariance(&self, trials: usize, seed: u64) -> Result<()> {
        if self.invariants.is_empty() {
            return Ok(());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..trials {
            let g = self.random_exact_element(&mut rng);
            let z: Vec<BigRational> = (0..2 * self.n)
                .map(|_| ratio(rng.random_range(-20..=20), rng.random_range(1..=7)))
                .collect();
            let gz = self.cotangent.act(&g, &z)?;
            for inv in &self.invariants {
                if inv.poly.eval(&gz) != inv.poly.eval(&z) {
                    return Err(Error::NonInvariantPolynomial {
                        name: inv.name.clone(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Random element whose rotations are exact (quarter turns or rational
    /// points on the circle).
    pub fn random_exact_element<R: Rng>(&self, rng: &mut R) -> GroupElement {
        let finite = rng.random_range(0..self.group.order());
        let torus = (0..self.k())
            .map(|_| {
                if rng.random_bool(0.25) {
                    Angle::turns(rng.random_range(0..4), 4)
                } else {
                    Angle::pythagorean(&ratio(rng.random_range(-9..=9), rng.random_range(1..=9)))
                }
            })
            .collect();
        GroupElement::new(finite, torus)
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Torus rank `k` (= dim G).
    pub fn k(&self) -> usize {
        self.base.torus_rank()
    }

    pub fn dim_group(&self) -> usize {
        self.k()
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn base(&self) -> &Representation {
        &self.base
    }

    pub fn cotangent(&self) -> &Representation {
        &self.cotangent
    }

    pub fn torus_types(&self) -> &[TorusSubgroup] {
        &self.torus_types
    }

    pub fn universe(&self) -> &ClassUniverse {
        &self.universe
    }

    pub fn invariants(&self) -> &[NamedPolynomial] {
        &self.invariants
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn fixtures(&self) -> &Fixtures {
        &self.fixtures
    }

    pub fn invariant(&self, name: &str) -> Option<&Polynomial> {
        self.invariants
            .iter()
            .find(|p| p.name == name)
            .map(|p| &p.poly)
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::identity(self.k())
    }

    pub fn compose(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        a.compose(b, &self.group)
    }

    pub fn act<S: Scalar>(&self, g: &GroupElement, v: &[S]) -> Result<Vec<S>> {
        self.base.act(g, v)
    }

    pub fn cotangent_act<S: Scalar>(
        &self,
        g: &GroupElement,
        m: &[S],
        p: &[S],
    ) -> Result<(Vec<S>, Vec<S>)> {
        for v in [m, p] {
            if v.len() != self.n {
                return Err(Error::DimensionMismatch {
                    expected: self.n,
                    got: v.len(),
                });
            }
        }
        Ok((self.base.act(g, m)?, self.base.act(g, p)?))
    }

    pub fn stabilizer<S: Scalar>(&self, m: &[S]) -> Result<ClosedSubgroup> {
        stabilizer(&self.group, &self.base, m, self.tolerance)
    }

    /// Stabilizer of the covector `(m, p)` under the cotangent lift.
    pub fn cotangent_stabilizer<S: Scalar>(&self, m: &[S], p: &[S]) -> Result<ClosedSubgroup> {
        if m.len() != self.n || p.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: if m.len() != self.n { m.len() } else { p.len() },
            });
        }
        let z: Vec<S> = m.iter().chain(p).cloned().collect();
        stabilizer(&self.group, &self.cotangent, &z, self.tolerance)
    }

    pub fn class_of(&self, h: &ClosedSubgroup) -> IsotropyClass {
        self.universe.class_of(&self.group, h)
    }

    pub fn is_subconjugate(&self, h: &IsotropyClass, k: &IsotropyClass) -> bool {
        is_subconjugate(&self.group, &h.representative, &k.representative)
    }

    /// Orthogonal basis of `Fix(H) ⊆ ℝⁿ`.
    pub fn fixed_subspace(&self, h: &ClosedSubgroup) -> Matrix<BigRational> {
        fixed_subspace(&self.base, h)
    }

    /// Orthogonal basis of `Fix(H) ⊆ ℝⁿ × ℝⁿ` for the cotangent lift.
    pub fn cotangent_fixed_subspace(&self, h: &ClosedSubgroup) -> Matrix<BigRational> {
        fixed_subspace(&self.cotangent, h)
    }

    /// `F`-conjugates of a subgroup (the torus part is conjugation invariant).
    pub fn conjugates(&self, h: &ClosedSubgroup) -> Vec<ClosedSubgroup> {
        self.group
            .conjugates(&h.finite)
            .into_iter()
            .map(|f| ClosedSubgroup::new(f, h.torus.clone()))
            .collect()
    }
}

/// `{v : h·v = v for all h ∈ H}`: kernels of `ρ(f) − I` over `H_F`, and the
/// coordinates of every block whose weight character is nontrivial on `H_T`.
pub fn fixed_subspace(rep: &Representation, h: &ClosedSubgroup) -> Matrix<BigRational> {
    let n = rep.dim();
    let mut rows: Matrix<BigRational> = Vec::new();
    for &f in &h.finite {
        let m = rep.matrix(f);
        for (i, row) in m.iter().enumerate() {
            let mut r = row.clone();
            r[i] -= BigRational::from_integer(1.into());
            rows.push(r);
        }
    }
    for (b, &(p, q)) in rep.blocks().iter().enumerate() {
        if !h.torus.annihilates(&rep.block_weight(b)) {
            for c in [p, q] {
                let mut r = vec![BigRational::from_integer(0.into()); n];
                r[c] = BigRational::from_integer(1.into());
                rows.push(r);
            }
        }
    }
    if rows.is_empty() {
        return crate::linalg::identity(n);
    }
    orthogonalize(&kernel(&rows, n, 0.0), 0.0)
}
