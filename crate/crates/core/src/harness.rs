//! Sampling checks against user-supplied invariant polynomials: relation
//! residuals, Hilbert-map cone regions of reduced pieces, local piece
//! dimensions and frontier approach.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{ActionSpec, ClosedSubgroup, RelationKind};
use crate::isotropy::{IsotropyLattice, WITNESS_RETRIES};
use crate::linalg::{add, dot, intersect, normalized_f64, scale, sub, Matrix};
use crate::momentum::{conjugates_inside, fiber_zero_basis, momentum};
use crate::poly::Polynomial;
use crate::reduced::{connectable_pairs, ConnectablePair, StratLattice};
use crate::sampling::{ball_in_span, rational_combination, stream, unit_ball};
use crate::scalar::{ratio, Scalar, ZeroTest};

/// Residual bound for polynomial relations.
pub const RELATION_TOLERANCE: f64 = 1e-9;
/// Band for cone-boundary membership, scaled by `1 + a`.
pub const REGION_BAND: f64 = 1e-9;
/// Step of the central differences in the local dimension estimate.
pub const DIFF_STEP: f64 = 1e-6;
/// Singular values above this (relative to `max(1, s_max)`) count as rank.
pub const RANK_CUT: f64 = 1e-8;
/// Offset used to approach a piece from its frontier.
pub const APPROACH_EPSILON_EXP: u32 = 12;
/// Largest admissible frontier approach distance in Hilbert coordinates.
pub const FRONTIER_DISTANCE: f64 = 1e-8;

/// Named invariant polynomials and the relations among their values.
#[derive(Clone, Debug)]
pub struct InvariantSet {
    pub names: Vec<String>,
    pub polynomials: Vec<Polynomial>,
    pub relations: Vec<(String, RelationKind, Polynomial)>,
    pub nvars: usize,
}

impl InvariantSet {
    pub fn from_spec(spec: &ActionSpec) -> Self {
        Self {
            names: spec.invariants().iter().map(|p| p.name.clone()).collect(),
            polynomials: spec.invariants().iter().map(|p| p.poly.clone()).collect(),
            relations: spec
                .relations()
                .iter()
                .map(|r| (r.name.clone(), r.kind, r.poly.clone()))
                .collect(),
            nvars: 2 * spec.n(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    fn values<S: Scalar>(&self, z: &[S]) -> Vec<S> {
        self.polynomials.iter().map(|p| p.eval(z)).collect()
    }
}

/// Value of every invariant at `z ∈ ℝ²ⁿ`.
pub fn eval_invariants<S: Scalar>(inv: &InvariantSet, z: &[S]) -> Result<Vec<(String, S)>> {
    if z.len() != inv.nvars {
        return Err(Error::DimensionMismatch {
            expected: inv.nvars,
            got: z.len(),
        });
    }
    Ok(inv.names.iter().cloned().zip(inv.values(z)).collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationResidual {
    pub name: String,
    pub kind: RelationKind,
    pub max: f64,
    pub mean: f64,
    pub samples: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationReport {
    pub tolerance: f64,
    pub relations: Vec<RelationResidual>,
    pub pass: bool,
}

/// Residuals `|R(χ(z))|` of equalities and violations `max(0, −R(χ(z)))` of
/// sign constraints.
pub fn check_relations(inv: &InvariantSet, samples: &[Vec<f64>], tolerance: f64) -> RelationReport {
    let values: Vec<Vec<f64>> = samples.iter().map(|z| inv.values(z)).collect();
    let relations: Vec<RelationResidual> = inv
        .relations
        .iter()
        .map(|(name, kind, poly)| {
            let residuals: Vec<f64> = values
                .iter()
                .map(|v| {
                    let r: f64 = poly.eval(v);
                    match kind {
                        RelationKind::Eq => r.abs(),
                        RelationKind::Nonneg => (-r).max(0.0),
                    }
                })
                .collect();
            let max = residuals.iter().copied().fold(0.0, f64::max);
            let mean = residuals.iter().sum::<f64>() / residuals.len().max(1) as f64;
            RelationResidual {
                name: name.clone(),
                kind: *kind,
                max,
                mean,
                samples: residuals.len(),
                pass: max <= tolerance,
            }
        })
        .collect();
    RelationReport {
        tolerance,
        pass: relations.iter().all(|r| r.pass),
        relations,
    }
}

/// `budget` points `(m, p)` of `J⁻¹(0)`: `m` uniform in the unit ball,
/// `p` uniform in the unit ball of `(g·m)°`.
pub fn sample_zero_level(
    spec: &ActionSpec,
    budget: usize,
    seed: u64,
) -> Result<Vec<(Vec<f64>, Vec<f64>)>> {
    if budget == 0 {
        return Err(Error::InvalidBudget);
    }
    let n = spec.n();
    let mut rng = stream(seed, 0);
    let mut out = Vec::with_capacity(budget);
    for _ in 0..budget {
        let m = unit_ball(n, &mut rng);
        let fiber = fiber_zero_basis(spec, &m)?;
        let p: Vec<f64> = ball_in_span(&fiber, n, 1 << 20, &mut rng);
        out.push((m, p));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ConeLabel {
    /// Vertex.
    V,
    /// The ray `a = c`, vertex excluded.
    E,
    /// The ray `a = −c`, vertex excluded (part of `I`).
    B,
    /// The cone minus `V ∪ E`, excluding `B`.
    I,
}

impl ConeLabel {
    /// Membership in a region named `V`, `E`, `B` or `I` (`I` contains `B`).
    pub fn within(self, region: &str) -> bool {
        match region {
            "V" => self == ConeLabel::V,
            "E" => self == ConeLabel::E,
            "B" => self == ConeLabel::B,
            "I" => matches!(self, ConeLabel::I | ConeLabel::B),
            _ => false,
        }
    }
}

impl fmt::Display for ConeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ConeRegion {
    /// 1-based cone index.
    pub cone: usize,
    pub label: ConeLabel,
}

impl fmt::Display for ConeRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.label, self.cone)
    }
}

struct Cones {
    momentum: usize,
    cones: Vec<[usize; 3]>,
}

fn cones(spec: &ActionSpec, inv: &InvariantSet) -> Result<Cones> {
    let fx = spec
        .fixtures()
        .hilbert_cones
        .as_ref()
        .ok_or(Error::NotExampleSpec)?;
    let idx = |name: &str| {
        inv.index(name)
            .ok_or_else(|| Error::UnknownInvariant(name.to_string()))
    };
    Ok(Cones {
        momentum: idx(&fx.momentum)?,
        cones: fx
            .cones
            .iter()
            .map(|c| Ok([idx(&c[0])?, idx(&c[1])?, idx(&c[2])?]))
            .collect::<Result<_>>()?,
    })
}

fn label<S: Scalar>(a: &S, c: &S) -> ConeLabel {
    let scale = 1.0 + a.to_f64().abs();
    let zero = |x: S| x.zero_test(scale, REGION_BAND) == ZeroTest::Zero;
    if zero(a.clone()) {
        ConeLabel::V
    } else if zero(a.clone() - c.clone()) {
        ConeLabel::E
    } else if zero(a.clone() + c.clone()) {
        ConeLabel::B
    } else {
        ConeLabel::I
    }
}

/// Cone regions of the Hilbert-map image of a zero-level point `z = (m, p)`.
pub fn classify_image<S: Scalar>(spec: &ActionSpec, z: &[S]) -> Result<Vec<ConeRegion>> {
    let inv = InvariantSet::from_spec(spec);
    let c = cones(spec, &inv)?;
    let vals = eval_invariants(&inv, z)?;
    let j = &vals[c.momentum].1;
    let size = 1.0 + z.iter().map(|x| x.to_f64().powi(2)).sum::<f64>();
    if j.zero_test(size, spec.tolerance()) != ZeroTest::Zero {
        return Err(Error::NotOnZeroLevel(j.to_f64()));
    }
    Ok(c.cones
        .iter()
        .enumerate()
        .map(|(i, [a, _, cc])| ConeRegion {
            cone: i + 1,
            label: label(&vals[*a].1, &vals[*cc].1),
        })
        .collect())
}

/// Cone coordinates `χ(z)`, flattened.
fn cone_coordinates<S: Scalar>(inv: &InvariantSet, c: &Cones, z: &[S]) -> Vec<S> {
    c.cones
        .iter()
        .flat_map(|t| t.iter().map(|&i| inv.polynomials[i].eval(z)))
        .collect()
}

/// Pair label `H->L` as used by region fixtures.
pub fn pair_key(lattice: &IsotropyLattice, pair: ConnectablePair) -> String {
    format!(
        "{}->{}",
        lattice.class(pair.upper).id,
        lattice.class(pair.lower).id
    )
}

/// Precomputed data for constructing points of one piece.
struct PieceSampler {
    h: ClosedSubgroup,
    fix_h: Matrix<BigRational>,
    lowers: Vec<(ClosedSubgroup, Matrix<BigRational>)>,
    lower_id: String,
}

/// A constructed point `(m, p)` with `G_m = H`, `G_(m,p)` conjugate to `L`.
struct PiecePoint {
    m: Vec<BigRational>,
    p: Vec<BigRational>,
    /// Index into `lowers` of the conjugate fixing `(m, p)`.
    lower: usize,
}

impl PieceSampler {
    fn new(spec: &ActionSpec, lattice: &IsotropyLattice, pair: ConnectablePair) -> Self {
        let h = lattice.class(pair.upper).representative.clone();
        let lower_class = lattice.class(pair.lower);
        let lowers = conjugates_inside(spec, lower_class, &h)
            .into_iter()
            .map(|l| {
                let f = spec.fixed_subspace(&l);
                (l, f)
            })
            .collect();
        Self {
            fix_h: spec.fixed_subspace(&h),
            h,
            lowers,
            lower_id: lower_class.id.clone(),
        }
    }

    fn sample<R: Rng>(&self, spec: &ActionSpec, rng: &mut R) -> Result<Option<PiecePoint>> {
        let n = spec.n();
        for _ in 0..WITNESS_RETRIES {
            let m = rational_combination(&self.fix_h, n, rng);
            if spec.stabilizer(&m)? != self.h {
                continue;
            }
            let ann = fiber_zero_basis(spec, &m)?;
            let li = rng.random_range(0..self.lowers.len());
            let target = intersect(&self.lowers[li].1, &ann, n, 0.0);
            let p = rational_combination(&target, n, rng);
            if spec.class_of(&spec.cotangent_stabilizer(&m, &p)?).id == self.lower_id {
                return Ok(Some(PiecePoint { m, p, lower: li }));
            }
        }
        Ok(None)
    }
}

/// Numerical rank of the Jacobian of `χ` along the piece through `(m, p)`:
/// `m` moves in `Fix(H)`, `p` in `Fix(L') ∩ (g·m)°`.
fn local_dimension(
    spec: &ActionSpec,
    inv: &InvariantSet,
    c: &Cones,
    fix_h: &[Vec<f64>],
    fix_l: &[Vec<f64>],
    m: &[f64],
    p: &[f64],
) -> usize {
    let n = spec.n();
    let nu = fix_h.len();
    let nparams = nu + fix_l.len();
    // pieces are cones, so rescale to unit size before differencing
    let r = (dot(m, m) + dot(p, p)).sqrt();
    let r = if r > 0.0 { r } else { 1.0 };
    let m: Vec<f64> = m.iter().map(|x| x / r).collect();
    let p: Vec<f64> = p.iter().map(|x| x / r).collect();
    let eval = |t: &[f64]| -> Vec<f64> {
        let m2 = fix_h
            .iter()
            .zip(t)
            .fold(m.to_vec(), |acc, (b, x)| add(&acc, &scale(b, x)));
        let q = fix_l
            .iter()
            .zip(&t[nu..])
            .fold(p.to_vec(), |acc, (b, x)| add(&acc, &scale(b, x)));
        // project q onto the annihilator of the orbit tangent at m2
        let tangents: Vec<Vec<f64>> = (0..spec.k())
            .map(|i| spec.base().infinitesimal(i, &m2))
            .collect();
        let ortho = crate::linalg::orthogonalize(&tangents, spec.tolerance());
        let p2 = ortho.iter().fold(q, |acc, a| {
            let coef = dot(&acc, a) / dot(a, a);
            sub(&acc, &scale(a, &coef))
        });
        let z: Vec<f64> = m2.into_iter().chain(p2).collect();
        debug_assert_eq!(z.len(), 2 * n);
        cone_coordinates(inv, c, &z)
    };
    if nparams == 0 {
        return 0;
    }
    let rows = cone_coordinates(inv, c, &[m.as_slice(), p.as_slice()].concat()).len();
    let mut jac = DMatrix::<f64>::zeros(rows, nparams);
    for k in 0..nparams {
        let mut tp = vec![0.0; nparams];
        let mut tm = vec![0.0; nparams];
        tp[k] = DIFF_STEP;
        tm[k] = -DIFF_STEP;
        let (fp, fm) = (eval(&tp), eval(&tm));
        for r in 0..rows {
            jac[(r, k)] = (fp[r] - fm[r]) / (2.0 * DIFF_STEP);
        }
    }
    let sv = jac.singular_values();
    let smax = sv.iter().copied().fold(0.0, f64::max);
    sv.iter().filter(|&&s| s > RANK_CUT * smax.max(1.0)).count()
}

#[derive(Clone, Debug, Serialize)]
pub struct PairRegionResult {
    pub pair: String,
    pub expected: Vec<String>,
    pub samples: usize,
    pub hits: usize,
    /// Observed region tuples, e.g. `"I1,E2"`, with counts.
    pub observed: BTreeMap<String, usize>,
    pub dim_w: i64,
    /// Observed local dimensions with counts.
    pub local_dims: BTreeMap<usize, usize>,
    pub regions_pass: bool,
    pub dims_pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RegionReport {
    pub pairs: Vec<PairRegionResult>,
    pub pass: bool,
}

/// Constructs `budget` points of every piece, maps them by a random group
/// element, and checks their cone regions against the fixture and their
/// local dimension against `dim_W`.
pub fn verify_piece_regions(
    spec: &ActionSpec,
    lattice: &IsotropyLattice,
    budget: usize,
    seed: u64,
) -> Result<RegionReport> {
    if budget == 0 {
        return Err(Error::InvalidBudget);
    }
    let inv = InvariantSet::from_spec(spec);
    let c = cones(spec, &inv)?;
    let expected_map = &spec.fixtures().piece_regions;
    let mut pairs = Vec::new();
    for (pi, pair) in connectable_pairs(lattice).into_iter().enumerate() {
        let key = pair_key(lattice, pair);
        let piece = crate::reduced::piece_dimensions(pair, lattice)?;
        let expected = expected_map.get(&key).cloned().unwrap_or_default();
        let sampler = PieceSampler::new(spec, lattice, pair);
        let fix_h = normalized_f64(&sampler.fix_h);
        let fix_l: Vec<Matrix<f64>> = sampler
            .lowers
            .iter()
            .map(|(_, f)| normalized_f64(f))
            .collect();
        let mut rng = stream(seed, pi as u64);
        let mut res = PairRegionResult {
            pair: key,
            expected: expected.clone(),
            samples: 0,
            hits: 0,
            observed: BTreeMap::new(),
            dim_w: piece.dim_w,
            local_dims: BTreeMap::new(),
            regions_pass: false,
            dims_pass: false,
        };
        for _ in 0..budget {
            let Some(pt) = sampler.sample(spec, &mut rng)? else {
                continue;
            };
            res.samples += 1;
            let g = spec.random_exact_element(&mut rng);
            let (gm, gp) = spec.cotangent_act(&g, &pt.m, &pt.p)?;
            let z: Vec<BigRational> = gm.into_iter().chain(gp).collect();
            let regions = classify_image(spec, &z)?;
            let tag: Vec<String> = regions.iter().map(ToString::to_string).collect();
            *res.observed.entry(tag.join(",")).or_default() += 1;
            if expected.len() == regions.len()
                && regions
                    .iter()
                    .zip(&expected)
                    .all(|(r, e)| r.label.within(e))
            {
                res.hits += 1;
            }
            let mf: Vec<f64> = pt.m.iter().map(Scalar::to_f64).collect();
            let pf: Vec<f64> = pt.p.iter().map(Scalar::to_f64).collect();
            let d = local_dimension(spec, &inv, &c, &fix_h, &fix_l[pt.lower], &mf, &pf);
            *res.local_dims.entry(d).or_default() += 1;
        }
        res.regions_pass = res.samples == budget && res.hits == budget;
        res.dims_pass = res.samples == budget
            && res.local_dims.len() == 1
            && res.local_dims.contains_key(&(piece.dim_w as usize));
        pairs.push(res);
    }
    Ok(RegionReport {
        pass: pairs.iter().all(|p| p.regions_pass && p.dims_pass),
        pairs,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FrontierEdgeResult {
    pub from: String,
    pub to: String,
    pub samples: usize,
    pub constructed: usize,
    pub max_distance: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FrontierReport {
    pub bound: f64,
    pub edges: Vec<FrontierEdgeResult>,
    pub pass: bool,
}

fn sup_norm(v: &[BigRational]) -> f64 {
    v.iter().map(|x| x.to_f64().abs()).fold(0.0, f64::max)
}

/// `ε / ⌈(1 + |z|)(1 + |d|)⌉`, so a step along `d` moves `χ` by `O(ε)`.
fn step(eps: &BigRational, size: f64, d: &[BigRational]) -> BigRational {
    let k = ((1.0 + size) * (1.0 + sup_norm(d))).ceil() as i64;
    eps * ratio(1, k.max(1))
}

/// Point of the piece `target` within `O(ε)` of `(m, p)`: `m + εu` with
/// `u ∈ Fix(B)` and `⟨p, Aᵢu⟩ = 0`, then `p + εv` with
/// `v ∈ Fix(Λ) ∩ (g·(m + εu))°`, for conjugates `Λ ⊆ B ⊆ G_m`,
/// `Λ ⊆ G_(m,p)`.
fn approach<R: Rng>(
    spec: &ActionSpec,
    lattice: &IsotropyLattice,
    target: ConnectablePair,
    m: &[BigRational],
    p: &[BigRational],
    rng: &mut R,
) -> Result<Option<(Vec<BigRational>, Vec<BigRational>)>> {
    let n = spec.n();
    let eps = ratio(1, 10i64.pow(APPROACH_EPSILON_EXP));
    let size = sup_norm(m).max(sup_norm(p));
    let gm = spec.stabilizer(m)?;
    let gmp = spec.cotangent_stabilizer(m, p)?;
    let (b_class, l_class) = (lattice.class(target.upper), lattice.class(target.lower));
    let mut choices = Vec::new();
    for b in conjugates_inside(spec, b_class, &gm) {
        for l in conjugates_inside(spec, l_class, &gmp) {
            if l.is_subgroup_of(&b) {
                choices.push((b.clone(), l));
            }
        }
    }
    if choices.is_empty() {
        return Ok(None);
    }
    let constraint: Matrix<BigRational> = (0..spec.k())
        .map(|i| {
            // u ↦ ⟨p, Aᵢu⟩ = ⟨−Aᵢp, u⟩
            spec.base()
                .infinitesimal(i, p)
                .into_iter()
                .map(|x| -x)
                .collect()
        })
        .collect();
    for attempt in 0..WITNESS_RETRIES {
        let (b, l) = &choices[attempt % choices.len()];
        let dirs = if constraint.is_empty() {
            spec.fixed_subspace(b)
        } else {
            let free =
                crate::linalg::orthogonalize(&crate::linalg::kernel(&constraint, n, 0.0), 0.0);
            intersect(&spec.fixed_subspace(b), &free, n, 0.0)
        };
        let u = rational_combination(&dirs, n, rng);
        let m2 = add(m, &scale(&u, &step(&eps, size, &u)));
        let ann = fiber_zero_basis(spec, &m2)?;
        let v = rational_combination(&intersect(&spec.fixed_subspace(l), &ann, n, 0.0), n, rng);
        let p2 = add(p, &scale(&v, &step(&eps, size, &v)));
        debug_assert!(momentum(spec, &m2, &p2)?.iter().all(Zero::is_zero));
        if spec.class_of(&spec.stabilizer(&m2)?).id == b_class.id
            && spec.class_of(&spec.cotangent_stabilizer(&m2, &p2)?).id == l_class.id
        {
            return Ok(Some((m2, p2)));
        }
    }
    Ok(None)
}

/// For every Hasse edge `R → S` of the coisotropic lattice, constructs
/// points of `S` approaching sampled points of `R` and records the largest
/// Hilbert-coordinate distance.
pub fn frontier_cross_check(
    spec: &ActionSpec,
    lattice: &IsotropyLattice,
    coiso: &StratLattice,
    budget: usize,
    seed: u64,
) -> Result<FrontierReport> {
    if budget == 0 {
        return Err(Error::InvalidBudget);
    }
    let inv = InvariantSet::from_spec(spec);
    let c = cones(spec, &inv)?;
    let mut edges = Vec::new();
    for (ei, &(r, s)) in coiso.edges.iter().enumerate() {
        let (pr, ps) = (coiso.nodes[r].piece.pair, coiso.nodes[s].piece.pair);
        let sampler = PieceSampler::new(spec, lattice, pr);
        let mut rng = stream(seed, ei as u64);
        let mut res = FrontierEdgeResult {
            from: coiso.nodes[r].label.clone(),
            to: coiso.nodes[s].label.clone(),
            samples: budget,
            constructed: 0,
            max_distance: 0.0,
            pass: false,
        };
        for _ in 0..budget {
            let Some(pt) = sampler.sample(spec, &mut rng)? else {
                continue;
            };
            let Some((m2, p2)) = approach(spec, lattice, ps, &pt.m, &pt.p, &mut rng)? else {
                continue;
            };
            res.constructed += 1;
            let z1: Vec<BigRational> = pt.m.iter().chain(&pt.p).cloned().collect();
            let z2: Vec<BigRational> = m2.into_iter().chain(p2).collect();
            let d = sub(
                &cone_coordinates(&inv, &c, &z1),
                &cone_coordinates(&inv, &c, &z2),
            );
            let dist = dot(&d, &d).to_f64().sqrt();
            res.max_distance = res.max_distance.max(dist);
        }
        res.pass = res.constructed == budget && res.max_distance <= FRONTIER_DISTANCE;
        edges.push(res);
    }
    Ok(FrontierReport {
        bound: FRONTIER_DISTANCE,
        pass: edges.iter().all(|e| e.pass),
        edges,
    })
}
