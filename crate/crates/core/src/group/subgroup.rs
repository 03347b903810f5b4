//! Product-form closed subgroups `H_F × H_T` and their conjugacy classes.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::finite::{ElementSet, FiniteGroup};
use super::torus::TorusSubgroup;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ClosedSubgroup {
    pub finite: ElementSet,
    pub torus: TorusSubgroup,
}

impl ClosedSubgroup {
    pub fn new(mut finite: ElementSet, torus: TorusSubgroup) -> Self {
        finite.sort_unstable();
        finite.dedup();
        Self { finite, torus }
    }

    pub fn whole(group: &FiniteGroup, k: usize) -> Self {
        Self::new((0..group.order()).collect(), TorusSubgroup::full(k))
    }

    pub fn trivial(k: usize) -> Self {
        Self::new(vec![0], TorusSubgroup::trivial(k))
    }

    pub fn dim(&self) -> usize {
        self.torus.dim()
    }

    pub fn finite_order(&self) -> usize {
        self.finite.len()
    }

    pub fn is_subgroup_of(&self, other: &ClosedSubgroup) -> bool {
        self.finite
            .iter()
            .all(|f| other.finite.binary_search(f).is_ok())
            && self.torus.is_subgroup_of(&other.torus)
    }

    pub fn contains_finite(&self, f: usize) -> bool {
        self.finite.binary_search(&f).is_ok()
    }
}

/// Conjugacy class of a product subgroup, with its canonical representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IsotropyClass {
    pub representative: ClosedSubgroup,
    pub id: String,
    pub dim: usize,
    pub finite_order: usize,
}

impl Ord for IsotropyClass {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.id
            .cmp(&other.id)
            .then_with(|| self.representative.cmp(&other.representative))
    }
}

impl PartialOrd for IsotropyClass {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for IsotropyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.id)
    }
}

/// Stable labels for every class that can occur as a stabilizer: all
/// subgroup classes of `F` crossed with all torus stabilizer types.
#[derive(Clone, Debug)]
pub struct ClassUniverse {
    labels: BTreeMap<ClosedSubgroup, String>,
}

fn base_label(group: &FiniteGroup, h: &ClosedSubgroup) -> String {
    let mut parts = Vec::new();
    let f = group.subgroup_name(&h.finite);
    if f != "1" {
        parts.push(f);
    }
    let t = h.torus.name();
    if !t.is_empty() {
        parts.push(t);
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("x")
    }
}

impl ClassUniverse {
    pub fn build(group: &FiniteGroup, torus_types: &[TorusSubgroup]) -> Self {
        let mut keys: Vec<ClosedSubgroup> = Vec::new();
        for f in group.subgroup_classes() {
            for t in torus_types {
                keys.push(ClosedSubgroup::new(f.clone(), t.clone()));
            }
        }
        keys.sort_by(|a, b| {
            a.finite
                .len()
                .cmp(&b.finite.len())
                .then_with(|| a.finite.cmp(&b.finite))
                .then_with(|| b.torus.dim().cmp(&a.torus.dim()))
                .then_with(|| a.torus.cmp(&b.torus))
        });
        keys.dedup();
        let bases: Vec<String> = keys.iter().map(|k| base_label(group, k)).collect();
        let mut seen: BTreeMap<&str, usize> = BTreeMap::new();
        let mut labels = BTreeMap::new();
        for (key, base) in keys.iter().zip(&bases) {
            let total = bases.iter().filter(|b| *b == base).count();
            let label = if total > 1 {
                let c = seen.entry(base.as_str()).or_insert(0);
                *c += 1;
                format!("{base}#{c}")
            } else {
                base.clone()
            };
            labels.insert(key.clone(), label);
        }
        Self { labels }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Canonicalizes and labels `h`.
    pub fn class_of(&self, group: &FiniteGroup, h: &ClosedSubgroup) -> IsotropyClass {
        let rep = ClosedSubgroup::new(group.canonical_conjugate(&h.finite), h.torus.clone());
        let id = match self.labels.get(&rep) {
            Some(l) => l.clone(),
            None => format!("{}?{:?}", base_label(group, &rep), rep.finite),
        };
        IsotropyClass {
            dim: rep.dim(),
            finite_order: rep.finite_order(),
            representative: rep,
            id,
        }
    }

    pub fn classes<'a>(
        &'a self,
        group: &'a FiniteGroup,
    ) -> impl Iterator<Item = IsotropyClass> + 'a {
        self.labels.keys().map(move |k| self.class_of(group, k))
    }
}

/// `(H) ≤ (K)`: some `F`-conjugate of `H` lies in `K`.
pub fn is_subconjugate(group: &FiniteGroup, h: &ClosedSubgroup, k: &ClosedSubgroup) -> bool {
    h.torus.is_subgroup_of(&k.torus) && group.is_subconjugate(&h.finite, &k.finite)
}
