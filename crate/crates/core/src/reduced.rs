//! Symplectic, secondary and coisotropic stratification lattices of the
//! reduced space `P₀ = J⁻¹(0)/G`.
//!
//! Every lattice edge `R → S` means `R ⊆ ∂S`. This is the reverse of the
//! subgroup direction used by the isotropy lattice.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::IsotropyClass;
use crate::isotropy::IsotropyLattice;
use crate::poset::Poset;

/// Ordered pair `H → L` with `(H) ≥ (L)`, as lattice indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConnectablePair {
    pub upper: usize,
    pub lower: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PieceKind {
    Cotangent,
    Seam,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    Symplectic,
    CoisotropicProper,
    Lagrangian,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Symplectic => "symplectic",
            Classification::CoisotropicProper => "coisotropic-proper",
            Classification::Lagrangian => "lagrangian",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Piece {
    pub pair: ConnectablePair,
    pub upper: IsotropyClass,
    pub lower: IsotropyClass,
    pub kind: PieceKind,
    pub dim_w: i64,
    pub dim_v: i64,
    pub rank: i64,
    pub classification: Classification,
    /// Orbit-type class `(H)` of `M/G` the piece fibers over.
    pub base_class: IsotropyClass,
    /// `dim M⁽H⁾`.
    pub base_quotient_dim: i64,
}

impl Piece {
    /// `C_<L>` or `S_<H>-><L>`.
    pub fn label(&self) -> String {
        match self.kind {
            PieceKind::Cotangent => format!("C_{}", self.lower.id),
            PieceKind::Seam => format!("S_{}->{}", self.upper.id, self.lower.id),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeKind {
    Symplectic,
    Secondary(String),
    Coisotropic,
}

impl fmt::Display for LatticeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeKind::Symplectic => f.write_str("symplectic"),
            LatticeKind::Secondary(l) => write!(f, "secondary:{l}"),
            LatticeKind::Coisotropic => f.write_str("coisotropic"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct StratNode {
    pub label: String,
    pub dim: i64,
    pub piece: Piece,
}

#[derive(Clone, Debug)]
pub struct StratLattice {
    pub kind: LatticeKind,
    pub nodes: Vec<StratNode>,
    /// Hasse arrows `(r, s)`: `r ⊆ ∂s`.
    pub edges: Vec<(usize, usize)>,
    /// Full frontier order: `less(r, s)` iff `r ⊆ ∂s`.
    pub frontier: Poset,
    /// Open dense node, when the lattice has one.
    pub open_dense: Option<usize>,
}

impl StratLattice {
    fn new(kind: LatticeKind, nodes: Vec<StratNode>, relation: &[(usize, usize)]) -> Self {
        let frontier = Poset::from_edges(nodes.len(), relation);
        assert!(
            frontier.is_acyclic(),
            "frontier relation of {kind} lattice has a cycle"
        );
        let edges = frontier.hasse_edges();
        let max = frontier.maximal();
        let open_dense = (max.len() == 1).then(|| max[0]);
        Self {
            kind,
            nodes,
            edges,
            frontier,
            open_dense,
        }
    }

    pub fn node_index(&self, label: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.label == label)
    }

    /// Hasse edges as label pairs.
    pub fn edge_labels(&self) -> Vec<(String, String)> {
        self.edges
            .iter()
            .map(|&(r, s)| (self.nodes[r].label.clone(), self.nodes[s].label.clone()))
            .collect()
    }
}

/// Every `H → L` with `(H) ≥ (L)`, ordered by `(L, H)` lattice index.
pub fn connectable_pairs(lattice: &IsotropyLattice) -> Vec<ConnectablePair> {
    let n = lattice.len();
    let mut pairs = Vec::new();
    for lower in 0..n {
        for upper in 0..n {
            if lattice.order.leq(lower, upper) {
                pairs.push(ConnectablePair { upper, lower });
            }
        }
    }
    pairs
}

/// Dimension, rank and classification of the piece of `pair`.
pub fn piece_dimensions(pair: ConnectablePair, lattice: &IsotropyLattice) -> Result<Piece> {
    let g = lattice.dim_group as i64;
    let sh = &lattice.strata[pair.upper];
    let sl = &lattice.strata[pair.lower];
    let (mh, ml) = (sh.dim_stratum as i64, sl.dim_stratum as i64);
    let (h, l) = (sh.class.dim as i64, sl.class.dim as i64);
    let dim_v = 2 * (ml - g + l);
    let dim_w = mh + ml - 2 * g + h + l;
    // the two-form has the rank of T*M⁽H⁾, measured on the slice
    let base_quotient_dim = sh.dim_quotient as i64;
    let rank = 2 * base_quotient_dim;
    let kind = if pair.upper == pair.lower {
        PieceKind::Cotangent
    } else {
        PieceKind::Seam
    };
    let classification = match kind {
        PieceKind::Cotangent => Classification::Symplectic,
        PieceKind::Seam if base_quotient_dim == 0 => Classification::Lagrangian,
        PieceKind::Seam => Classification::CoisotropicProper,
    };
    let piece = Piece {
        pair,
        upper: sh.class.clone(),
        lower: sl.class.clone(),
        kind,
        dim_w,
        dim_v,
        rank,
        classification,
        base_class: sh.class.clone(),
        base_quotient_dim,
    };
    if rank != 2 * dim_w - dim_v {
        return Err(Error::CoisotropyIdentityViolation {
            piece: piece.label(),
            rank,
            dim_w,
            dim_v,
        });
    }
    Ok(piece)
}

/// The orbit-type class of `M/G` the piece submerses onto.
pub fn projection_image(piece: &Piece) -> &IsotropyClass {
    &piece.base_class
}

fn node(piece: Piece) -> StratNode {
    StratNode {
        label: piece.label(),
        dim: piece.dim_w,
        piece,
    }
}

/// One node `P_<L>` per class; `(K) → (L)` for covering pairs `(L) < (K)`.
pub fn symplectic_lattice(lattice: &IsotropyLattice) -> Result<StratLattice> {
    let mut nodes = Vec::new();
    for i in 0..lattice.len() {
        let piece = piece_dimensions(ConnectablePair { upper: i, lower: i }, lattice)?;
        nodes.push(StratNode {
            label: format!("P_{}", piece.lower.id),
            dim: piece.dim_v,
            piece,
        });
    }
    let relation: Vec<(usize, usize)> = lattice.hasse_edges.iter().map(|&(l, k)| (k, l)).collect();
    Ok(StratLattice::new(LatticeKind::Symplectic, nodes, &relation))
}

/// `C_L` and the seams `S_{H→L}`, `(H) > (L)`.
pub fn secondary_lattice(l_id: &str, lattice: &IsotropyLattice) -> Result<StratLattice> {
    let l = lattice.index_of(l_id)?;
    let order = &lattice.order;
    let mut uppers = vec![l];
    uppers.extend(order.up_set(l).into_iter().filter(|&h| h != l));
    let mut nodes = Vec::new();
    for &h in &uppers {
        nodes.push(node(piece_dimensions(
            ConnectablePair { upper: h, lower: l },
            lattice,
        )?));
    }
    let mut relation = Vec::new();
    for (a, &h) in uppers.iter().enumerate() {
        if h != l && order.covers(l, h) {
            relation.push((a, 0));
        }
        for (b, &h2) in uppers.iter().enumerate() {
            if h != l && h2 != h && order.covers(h, h2) {
                relation.push((b, a));
            }
        }
    }
    Ok(StratLattice::new(
        LatticeKind::Secondary(lattice.class(l).id.clone()),
        nodes,
        &relation,
    ))
}

/// All pieces of `P₀` with the frontier rules
/// (i) `C_K → C_H` for `(H) < (K)`,
/// (ii) `S_{K→H} → C_H`,
/// (iii) `C_K → S_{K→H}`,
/// (iv) `S_{K'→H} → S_{K→H}` for `(H) < (K) < (K')`,
/// (v) `S_{K→H'} → S_{K→H}` for `(H) < (H') < (K)`.
pub fn coisotropic_lattice(lattice: &IsotropyLattice) -> Result<StratLattice> {
    let pairs = connectable_pairs(lattice);
    let nodes = pairs
        .iter()
        .map(|&p| piece_dimensions(p, lattice).map(node))
        .collect::<Result<Vec<_>>>()?;
    let lt = |a: usize, b: usize| lattice.order.less(a, b);
    let mut relation = Vec::new();
    for (r, pr) in pairs.iter().enumerate() {
        for (s, ps) in pairs.iter().enumerate() {
            let r_cot = pr.upper == pr.lower;
            let s_cot = ps.upper == ps.lower;
            let edge = match (r_cot, s_cot) {
                // (i)
                (true, true) => lt(ps.lower, pr.lower),
                // (ii)
                (false, true) => pr.lower == ps.lower,
                // (iii)
                (true, false) => pr.lower == ps.upper,
                (false, false) => {
                    // (iv)
                    (pr.lower == ps.lower && lt(ps.upper, pr.upper))
                    // (v)
                        || (pr.upper == ps.upper && lt(ps.lower, pr.lower))
                }
            };
            if edge && r != s {
                relation.push((r, s));
            }
        }
    }
    let mut out = StratLattice::new(LatticeKind::Coisotropic, nodes, &relation);
    out.open_dense = pairs
        .iter()
        .position(|p| p.upper == lattice.principal && p.lower == lattice.principal);
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Refinement {
    pub refines: bool,
    pub strict: bool,
}

/// Each coisotropic piece `H → L` lies in the symplectic stratum `(L)`, and
/// frontier relations map to frontier relations or equalities.
pub fn refinement_check(coiso: &StratLattice, symp: &StratLattice) -> Refinement {
    let target = |n: &StratNode| {
        symp.nodes
            .iter()
            .position(|s| s.piece.lower.id == n.piece.lower.id)
    };
    let images: Vec<Option<usize>> = coiso.nodes.iter().map(target).collect();
    let mut refines = images.iter().all(Option::is_some);
    if refines {
        for (r, s) in coiso.frontier.relations() {
            let (a, b) = (images[r].unwrap(), images[s].unwrap());
            if !symp.frontier.leq(a, b) {
                refines = false;
            }
        }
        if (0..symp.nodes.len()).any(|i| !images.contains(&Some(i))) {
            refines = false;
        }
    }
    Refinement {
        refines,
        strict: refines && coiso.nodes.len() > symp.nodes.len(),
    }
}
