//! Finite strict partial orders: transitive closure and Hasse reduction.

/// Strict order on `0..n` stored as a dense relation matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    less: Vec<Vec<bool>>,
}

impl Poset {
    /// Transitive closure of the relation `rel(i, j)` meaning `i < j`.
    pub fn from_relation(n: usize, rel: impl Fn(usize, usize) -> bool) -> Self {
        let mut less = vec![vec![false; n]; n];
        for (i, row) in less.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = i != j && rel(i, j);
            }
        }
        Self::close(less)
    }

    /// Transitive closure of an edge list `(i, j)` meaning `i < j`.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut less = vec![vec![false; n]; n];
        for &(i, j) in edges {
            less[i][j] = true;
        }
        Self::close(less)
    }

    fn close(mut less: Vec<Vec<bool>>) -> Self {
        let n = less.len();
        for k in 0..n {
            for i in 0..n {
                if less[i][k] {
                    let row = less[k].clone();
                    for (cell, &via) in less[i].iter_mut().zip(&row) {
                        *cell |= via;
                    }
                }
            }
        }
        Self { less }
    }

    pub fn len(&self) -> usize {
        self.less.len()
    }

    pub fn is_empty(&self) -> bool {
        self.less.is_empty()
    }

    pub fn less(&self, i: usize, j: usize) -> bool {
        self.less[i][j]
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        i == j || self.less[i][j]
    }

    /// No element lies below itself.
    pub fn is_acyclic(&self) -> bool {
        (0..self.len()).all(|i| !self.less[i][i])
    }

    /// All strict pairs `(i, j)`, `i < j`, in index order.
    pub fn relations(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.less[i][j])
            .collect()
    }

    /// Covering pairs: `i < j` with nothing strictly between, in index order.
    pub fn hasse_edges(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        self.relations()
            .into_iter()
            .filter(|&(i, j)| !(0..n).any(|k| self.less[i][k] && self.less[k][j]))
            .collect()
    }

    pub fn minimal(&self) -> Vec<usize> {
        let n = self.len();
        (0..n)
            .filter(|&j| !(0..n).any(|i| self.less[i][j]))
            .collect()
    }

    pub fn maximal(&self) -> Vec<usize> {
        let n = self.len();
        (0..n)
            .filter(|&i| !(0..n).any(|j| self.less[i][j]))
            .collect()
    }

    /// `{j : j ≤ i}`.
    pub fn down_set(&self, i: usize) -> Vec<usize> {
        (0..self.len()).filter(|&j| self.leq(j, i)).collect()
    }

    /// `{j : j ≥ i}`.
    pub fn up_set(&self, i: usize) -> Vec<usize> {
        (0..self.len()).filter(|&j| self.leq(i, j)).collect()
    }

    pub fn covers(&self, lower: usize, upper: usize) -> bool {
        self.less[lower][upper]
            && !(0..self.len()).any(|k| self.less[lower][k] && self.less[k][upper])
    }
}
