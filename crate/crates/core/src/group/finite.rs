//! The finite factor `F`, enumerated from rational orthogonal generators.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{identity, mat_mul, transpose, Matrix};

pub const DEFAULT_ORDER_CAP: usize = 256;

/// Sorted list of element indices. Ordered lexicographically.
pub type ElementSet = Vec<usize>;

#[derive(Clone, Debug)]
pub struct FiniteGroup {
    /// Element matrices in the defining representation; index 0 is the identity.
    elements: Vec<Matrix<BigRational>>,
    mult: Vec<Vec<usize>>,
    inv: Vec<usize>,
    generators: Vec<usize>,
}

fn is_orthogonal(m: &Matrix<BigRational>, n: usize) -> bool {
    let mtm = mat_mul(&transpose(m, n), m);
    mtm == identity::<BigRational>(n)
}

impl FiniteGroup {
    /// Closes the generators under multiplication. Generators are checked for
    /// shape and exact orthogonality first.
    pub fn generate(gens: &[Matrix<BigRational>], n: usize, cap: usize) -> Result<Self> {
        for (i, g) in gens.iter().enumerate() {
            if g.len() != n || g.iter().any(|r| r.len() != n) {
                return Err(Error::InvalidSpec(format!(
                    "finite generator {i} is not {n}x{n}"
                )));
            }
            if !is_orthogonal(g, n) {
                return Err(Error::NonOrthogonalGenerator { index: i });
            }
        }
        let id = identity::<BigRational>(n);
        let mut elements = vec![id.clone()];
        let mut index: HashMap<Matrix<BigRational>, usize> = HashMap::from([(id, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(e) = queue.pop_front() {
            for g in gens {
                let prod = mat_mul(g, &elements[e]);
                if !index.contains_key(&prod) {
                    if elements.len() >= cap {
                        return Err(Error::InfiniteFiniteGroup { cap });
                    }
                    index.insert(prod.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(prod);
                }
            }
        }
        let mult: Vec<Vec<usize>> = elements
            .iter()
            .map(|a| elements.iter().map(|b| index[&mat_mul(a, b)]).collect())
            .collect();
        let inv = (0..elements.len())
            .map(|a| mult[a].iter().position(|&c| c == 0).expect("group inverse"))
            .collect();
        let generators = gens.iter().map(|g| index[g]).collect();
        Ok(Self {
            elements,
            mult,
            inv,
            generators,
        })
    }

    pub fn trivial(n: usize) -> Self {
        Self::generate(&[], n, 1).expect("trivial group")
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn matrix(&self, a: usize) -> &Matrix<BigRational> {
        &self.elements[a]
    }

    pub fn matrices(&self) -> &[Matrix<BigRational>] {
        &self.elements
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Smallest subgroup containing `seeds`.
    pub fn closure(&self, seeds: &[usize]) -> ElementSet {
        let mut set: BTreeSet<usize> = BTreeSet::from([0]);
        let mut queue: VecDeque<usize> = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for &s in seeds {
                let y = self.mul(x, s);
                if set.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        set.into_iter().collect()
    }

    pub fn is_subgroup(&self, set: &[usize]) -> bool {
        set.contains(&0)
            && set.iter().all(|&a| {
                set.iter()
                    .all(|&b| set.binary_search(&self.mul(a, b)).is_ok())
            })
    }

    /// `f·H·f⁻¹`.
    pub fn conjugate(&self, f: usize, set: &[usize]) -> ElementSet {
        let fi = self.inverse(f);
        let mut out: ElementSet = set.iter().map(|&h| self.mul(self.mul(f, h), fi)).collect();
        out.sort_unstable();
        out
    }

    /// Lexicographically least member of the conjugacy orbit of `set`.
    pub fn canonical_conjugate(&self, set: &[usize]) -> ElementSet {
        (0..self.order())
            .map(|f| self.conjugate(f, set))
            .min()
            .expect("nonempty group")
    }

    /// Distinct conjugates of `set`, sorted.
    pub fn conjugates(&self, set: &[usize]) -> Vec<ElementSet> {
        let all: BTreeSet<ElementSet> = (0..self.order()).map(|f| self.conjugate(f, set)).collect();
        all.into_iter().collect()
    }

    /// Exists `f` with `f·H·f⁻¹ ⊆ K`.
    pub fn is_subconjugate(&self, h: &[usize], k: &[usize]) -> bool {
        if h.len() > k.len() || !k.len().is_multiple_of(h.len()) {
            return false;
        }
        (0..self.order()).any(|f| {
            let fi = self.inverse(f);
            h.iter()
                .all(|&x| k.binary_search(&self.mul(self.mul(f, x), fi)).is_ok())
        })
    }

    /// Every subgroup of `F`, sorted by (order, elements).
    pub fn subgroups(&self) -> Vec<ElementSet> {
        let mut seen: HashSet<ElementSet> = HashSet::new();
        let trivial = vec![0];
        seen.insert(trivial.clone());
        let mut frontier = vec![trivial];
        while let Some(h) = frontier.pop() {
            for g in 0..self.order() {
                if h.binary_search(&g).is_ok() {
                    continue;
                }
                let mut seeds = h.clone();
                seeds.push(g);
                let k = self.closure(&seeds);
                if seen.insert(k.clone()) {
                    frontier.push(k);
                }
            }
        }
        let mut all: Vec<ElementSet> = seen.into_iter().collect();
        all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        all
    }

    /// One canonical representative per conjugacy class of subgroups.
    pub fn subgroup_classes(&self) -> Vec<ElementSet> {
        let reps: BTreeSet<ElementSet> = self
            .subgroups()
            .iter()
            .map(|h| self.canonical_conjugate(h))
            .collect();
        let mut reps: Vec<ElementSet> = reps.into_iter().collect();
        reps.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        reps
    }

    pub fn is_abelian(&self, set: &[usize]) -> bool {
        set.iter()
            .all(|&a| set.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Structural name of a subgroup: `1`, `Zn`, `Z2xZ2`, `Dn`, or `F<order>`.
    pub fn subgroup_name(&self, set: &[usize]) -> String {
        let order = set.len();
        if order == 1 {
            return "1".into();
        }
        if set.iter().any(|&a| self.element_order(a) == order) {
            return format!("Z{order}");
        }
        let abelian = self.is_abelian(set);
        if abelian && set.iter().all(|&a| self.element_order(a) <= 2) {
            let rank = order.trailing_zeros();
            return vec!["Z2"; rank as usize].join("x");
        }
        if !abelian && order.is_multiple_of(2) {
            // dihedral: cyclic subgroup of index 2 and an involution outside it
            let half = order / 2;
            if let Some(r) = set.iter().find(|&&a| self.element_order(a) == half) {
                let rot = self.closure(&[*r]);
                let dihedral = set
                    .iter()
                    .filter(|a| rot.binary_search(a).is_err())
                    .all(|&s| {
                        self.element_order(s) == 2
                            && self.mul(self.mul(s, *r), s) == self.inverse(*r)
                    });
                if dihedral {
                    return format!("D{half}");
                }
            }
        }
        format!("F{order}")
    }

    /// True when the element acts as the identity on the defining space.
    pub fn is_identity_matrix(&self, a: usize) -> bool {
        let m = &self.elements[a];
        m.iter().enumerate().all(|(i, r)| {
            r.iter()
                .enumerate()
                .all(|(j, x)| if i == j { x.is_one() } else { x.is_zero() })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat_int;

    fn m(rows: &[&[i64]]) -> Matrix<BigRational> {
        rows.iter()
            .map(|r| r.iter().map(|&x| rat_int(x)).collect())
            .collect()
    }

    fn s3() -> FiniteGroup {
        let swap12 = m(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]);
        let cycle = m(&[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]);
        FiniteGroup::generate(&[swap12, cycle], 3, 256).unwrap()
    }

    #[test]
    fn reflection_group_has_two_elements() {
        let g =
            FiniteGroup::generate(&[m(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, -1]])], 3, 256).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.inverse(1), 1);
        assert_eq!(g.subgroup_name(&[0, 1]), "Z2");
    }

    #[test]
    fn non_orthogonal_rejected() {
        let err = FiniteGroup::generate(&[m(&[&[0, 1], &[1, 1]])], 2, 256).unwrap_err();
        assert_eq!(err, Error::NonOrthogonalGenerator { index: 0 });
    }

    #[test]
    fn cap_enforced() {
        let err = FiniteGroup::generate(&s3().matrices()[1..], 3, 4).unwrap_err();
        assert_eq!(err, Error::InfiniteFiniteGroup { cap: 4 });
    }

    #[test]
    fn s3_subgroup_classes() {
        let g = s3();
        assert_eq!(g.order(), 6);
        assert_eq!(g.subgroups().len(), 6);
        let classes = g.subgroup_classes();
        let names: Vec<String> = classes.iter().map(|h| g.subgroup_name(h)).collect();
        assert_eq!(names, vec!["1", "Z2", "Z3", "D3"]);
        // all three transpositions are conjugate
        let z2s: Vec<_> = g.subgroups().into_iter().filter(|h| h.len() == 2).collect();
        assert_eq!(z2s.len(), 3);
        assert!(z2s.iter().all(|h| g.canonical_conjugate(h) == classes[1]));
        assert!(g.is_subconjugate(&z2s[0], &z2s[2]));
        assert!(!g.is_subconjugate(&classes[2], &z2s[0]));
    }

    #[test]
    fn klein_four_names() {
        let a = m(&[&[-1, 0], &[0, 1]]);
        let b = m(&[&[1, 0], &[0, -1]]);
        let g = FiniteGroup::generate(&[a, b], 2, 256).unwrap();
        assert_eq!(g.subgroup_name(&[0, 1, 2, 3]), "Z2xZ2");
        assert_eq!(g.subgroup_classes().len(), 5);
    }
}
