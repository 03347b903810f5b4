//! Structured run reports.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

use stratakit_core::isotropy::{IsotropyLattice, SliceData, StratumInfo};
use stratakit_core::reduced::{Classification, PieceKind, StratLattice};
use stratakit_core::{Piece, Rational};

pub const SCHEMA: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub spec: Option<String>,
    pub seed: u64,
    pub samples: usize,
    pub classes: Vec<ClassEntry>,
    pub strata: Vec<StratumEntry>,
    pub pieces: Vec<PieceEntry>,
    pub lattices: BTreeMap<String, LatticeEntry>,
    pub checks: Vec<CheckEntry>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassEntry {
    pub id: String,
    pub dim: usize,
    pub finite_order: usize,
    pub finite_elements: Vec<usize>,
    pub torus_constraints: Vec<Vec<i64>>,
    pub principal: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SliceEntry {
    pub orbit_tangent: Vec<Vec<String>>,
    pub slice: Vec<Vec<String>>,
    pub slice_fixed: Vec<Vec<String>>,
    pub normal: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StratumEntry {
    pub class: String,
    pub witness: Vec<String>,
    pub dim_stratum: usize,
    pub dim_quotient: usize,
    pub slice: SliceEntry,
}

#[derive(Clone, Debug, Serialize)]
pub struct PieceEntry {
    pub label: String,
    pub upper: String,
    pub lower: String,
    pub kind: PieceKind,
    pub dim_w: i64,
    pub dim_v: i64,
    pub rank: i64,
    pub classification: Classification,
    pub projection: String,
    pub base_quotient_dim: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct NodeEntry {
    pub label: String,
    pub dim: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LatticeEntry {
    pub nodes: Vec<NodeEntry>,
    pub edges: Vec<[String; 2]>,
    pub top: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckEntry {
    pub name: String,
    pub status: Status,
    pub detail: Value,
}

impl CheckEntry {
    pub fn new(name: impl Into<String>, pass: bool, detail: Value) -> Self {
        Self {
            name: name.into(),
            status: if pass { Status::Pass } else { Status::Fail },
            detail,
        }
    }

    pub fn skipped(name: impl Into<String>, reason: &str) -> Self {
        Self {
            name: name.into(),
            status: Status::Skipped,
            detail: Value::String(reason.to_string()),
        }
    }
}

pub fn vector(v: &[Rational]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn matrix(m: &[Vec<Rational>]) -> Vec<Vec<String>> {
    m.iter().map(|r| vector(r)).collect()
}

fn slice_entry(s: &SliceData<Rational>) -> SliceEntry {
    SliceEntry {
        orbit_tangent: matrix(&s.orbit_tangent),
        slice: matrix(&s.slice),
        slice_fixed: matrix(&s.slice_fixed),
        normal: matrix(&s.normal),
    }
}

pub fn classes(lattice: &IsotropyLattice) -> Vec<ClassEntry> {
    lattice
        .strata
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let rep = &s.class.representative;
            ClassEntry {
                id: s.class.id.clone(),
                dim: s.class.dim,
                finite_order: s.class.finite_order,
                finite_elements: rep.finite.clone(),
                torus_constraints: rep.torus.lattice().clone(),
                principal: i == lattice.principal,
            }
        })
        .collect()
}

pub fn strata(lattice: &IsotropyLattice) -> Vec<StratumEntry> {
    lattice.strata.iter().map(stratum).collect()
}

fn stratum(s: &StratumInfo) -> StratumEntry {
    StratumEntry {
        class: s.class.id.clone(),
        witness: vector(&s.witness),
        dim_stratum: s.dim_stratum,
        dim_quotient: s.dim_quotient,
        slice: slice_entry(&s.slice),
    }
}

pub fn piece(p: &Piece) -> PieceEntry {
    PieceEntry {
        label: p.label(),
        upper: p.upper.id.clone(),
        lower: p.lower.id.clone(),
        kind: p.kind,
        dim_w: p.dim_w,
        dim_v: p.dim_v,
        rank: p.rank,
        classification: p.classification,
        projection: stratakit_core::reduced::projection_image(p).id.clone(),
        base_quotient_dim: p.base_quotient_dim,
    }
}

/// Isotropy lattice with edges `(L) → (H)` for covering pairs `(L) < (H)`.
pub fn isotropy_entry(lattice: &IsotropyLattice) -> LatticeEntry {
    LatticeEntry {
        nodes: lattice
            .strata
            .iter()
            .map(|s| NodeEntry {
                label: s.class.id.clone(),
                dim: s.dim_stratum as i64,
            })
            .collect(),
        edges: lattice
            .hasse_edges
            .iter()
            .map(|&(a, b)| [lattice.class(a).id.clone(), lattice.class(b).id.clone()])
            .collect(),
        top: Some(lattice.principal_class().id.clone()),
    }
}

pub fn lattice_entry(l: &StratLattice) -> LatticeEntry {
    LatticeEntry {
        nodes: l
            .nodes
            .iter()
            .map(|n| NodeEntry {
                label: n.label.clone(),
                dim: n.dim,
            })
            .collect(),
        edges: l.edge_labels().into_iter().map(|(a, b)| [a, b]).collect(),
        top: l.open_dense.map(|i| l.nodes[i].label.clone()),
    }
}
