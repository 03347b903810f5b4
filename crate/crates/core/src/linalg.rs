//! Dense linear algebra over any [`Scalar`], row-major `Vec<Vec<S>>`.
//!
//! Subspaces are carried as lists of spanning vectors. Routines that return
//! a basis return a pairwise-orthogonal one (Gram–Schmidt without
//! normalization, so the exact path stays rational).

use crate::scalar::Scalar;

pub type Matrix<S> = Vec<Vec<S>>;

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter()
        .zip(b)
        .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn norm_sq<S: Scalar>(a: &[S]) -> S {
    dot(a, a)
}

pub fn sub<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.clone() - y.clone())
        .collect()
}

pub fn add<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.clone() + y.clone())
        .collect()
}

pub fn scale<S: Scalar>(a: &[S], c: &S) -> Vec<S> {
    a.iter().map(|x| x.clone() * c.clone()).collect()
}

pub fn mat_vec<S: Scalar>(m: &[Vec<S>], v: &[S]) -> Vec<S> {
    m.iter().map(|row| dot(row, v)).collect()
}

pub fn transpose<S: Scalar>(m: &[Vec<S>], ncols: usize) -> Matrix<S> {
    (0..ncols)
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn identity<S: Scalar>(n: usize) -> Matrix<S> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { S::one() } else { S::zero() })
                .collect()
        })
        .collect()
}

pub fn mat_mul<S: Scalar>(a: &[Vec<S>], b: &[Vec<S>]) -> Matrix<S> {
    let inner = b.len();
    let ncols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..ncols)
                .map(|j| {
                    (0..inner).fold(S::zero(), |acc, k| acc + row[k].clone() * b[k][j].clone())
                })
                .collect()
        })
        .collect()
}

fn max_abs<S: Scalar>(rows: &[Vec<S>]) -> f64 {
    rows.iter()
        .flatten()
        .map(|x| x.to_f64().abs())
        .fold(0.0, f64::max)
}

fn is_zero_vec<S: Scalar>(v: &[S], scale: f64, tol: f64) -> bool {
    v.iter().all(|x| x.is_negligible(scale, tol))
}

/// Reduced row echelon form. Returns the reduced rows (zero rows dropped)
/// and the pivot columns.
pub fn rref<S: Scalar>(rows: &[Vec<S>], ncols: usize, tol: f64) -> (Matrix<S>, Vec<usize>) {
    let mut a: Matrix<S> = rows.to_vec();
    let scale = max_abs(rows);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == a.len() {
            break;
        }
        // largest magnitude pivot; exact scalars only need any nonzero
        let mut best: Option<(usize, f64)> = None;
        for (i, row) in a.iter().enumerate().skip(r) {
            if !row[c].is_negligible(scale, tol) {
                let mag = row[c].to_f64().abs();
                if best.is_none_or(|(_, m)| mag > m) {
                    best = Some((i, mag));
                }
            }
        }
        let Some((p, _)) = best else { continue };
        a.swap(r, p);
        let inv = S::one() / a[r][c].clone();
        for x in a[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x = x.clone() - f.clone() * y.clone();
            }
            row[c] = S::zero();
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

pub fn rank<S: Scalar>(rows: &[Vec<S>], ncols: usize, tol: f64) -> usize {
    rref(rows, ncols, tol).1.len()
}

/// Basis of `{x : A x = 0}` for `A` given by `rows` with `ncols` columns.
/// Not orthogonalized.
pub fn kernel<S: Scalar>(rows: &[Vec<S>], ncols: usize, tol: f64) -> Matrix<S> {
    let (r, pivots) = rref(rows, ncols, tol);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![S::zero(); ncols];
            v[f] = S::one();
            for (row, &pc) in r.iter().zip(&pivots) {
                v[pc] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Gram–Schmidt on `vectors`, dropping dependent ones. The output spans the
/// same space and is pairwise orthogonal (not normalized).
pub fn orthogonalize<S: Scalar>(vectors: &[Vec<S>], tol: f64) -> Matrix<S> {
    let mag = max_abs(vectors);
    let mut out: Matrix<S> = Vec::new();
    let mut norms: Vec<S> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for (q, qq) in out.iter().zip(&norms) {
            let c = dot(&w, q) / qq.clone();
            w = sub(&w, &scale(q, &c));
        }
        if !is_zero_vec(&w, mag, tol) {
            norms.push(norm_sq(&w));
            out.push(w);
        }
    }
    out
}

/// Orthogonal basis of the span of `vectors` (empty input gives `{0}`).
pub fn span_basis<S: Scalar>(vectors: &[Vec<S>], tol: f64) -> Matrix<S> {
    orthogonalize(vectors, tol)
}

/// Orthogonal basis of the orthogonal complement of `span(basis)` in `S^n`.
pub fn orthogonal_complement<S: Scalar>(basis: &[Vec<S>], n: usize, tol: f64) -> Matrix<S> {
    if basis.is_empty() {
        return identity(n);
    }
    orthogonalize(&kernel(basis, n, tol), tol)
}

/// Orthogonal basis of `span(u) ∩ span(v)` in `S^n`.
pub fn intersect<S: Scalar>(u: &[Vec<S>], v: &[Vec<S>], n: usize, tol: f64) -> Matrix<S> {
    let mut constraints = orthogonal_complement(u, n, tol);
    constraints.extend(orthogonal_complement(v, n, tol));
    if constraints.is_empty() {
        return identity(n);
    }
    orthogonalize(&kernel(&constraints, n, tol), tol)
}

/// Orthogonal projection of `x` onto the span of the pairwise-orthogonal
/// `basis`.
pub fn project<S: Scalar>(basis: &[Vec<S>], x: &[S]) -> Vec<S> {
    let mut out = vec![S::zero(); x.len()];
    for q in basis {
        let c = dot(x, q) / norm_sq(q);
        out = add(&out, &scale(q, &c));
    }
    out
}

/// Coordinates of `x` in the pairwise-orthogonal `basis`.
pub fn coordinates<S: Scalar>(basis: &[Vec<S>], x: &[S]) -> Vec<S> {
    basis.iter().map(|q| dot(x, q) / norm_sq(q)).collect()
}

pub fn in_span<S: Scalar>(basis: &[Vec<S>], x: &[S], tol: f64) -> bool {
    let ortho = orthogonalize(basis, tol);
    let r = sub(x, &project(&ortho, x));
    let scale = x.iter().map(|v| v.to_f64().abs()).fold(1.0, f64::max);
    is_zero_vec(&r, scale, tol)
}

/// Two spanning sets describe the same subspace.
pub fn same_span<S: Scalar>(a: &[Vec<S>], b: &[Vec<S>], n: usize, tol: f64) -> bool {
    let ra = rank(a, n, tol);
    let rb = rank(b, n, tol);
    let mut both = a.to_vec();
    both.extend_from_slice(b);
    ra == rb && rank(&both, n, tol) == ra
}

/// Pairwise orthogonality of two families.
pub fn mutually_orthogonal<S: Scalar>(a: &[Vec<S>], b: &[Vec<S>], tol: f64) -> bool {
    a.iter()
        .all(|x| b.iter().all(|y| dot(x, y).is_negligible(1.0, tol)))
}

/// Normalizes each vector in floating point.
pub fn normalized_f64<S: Scalar>(basis: &[Vec<S>]) -> Vec<Vec<f64>> {
    basis
        .iter()
        .map(|v| {
            let f: Vec<f64> = v.iter().map(Scalar::to_f64).collect();
            let n = f.iter().map(|x| x * x).sum::<f64>().sqrt();
            f.into_iter().map(|x| x / n).collect()
        })
        .collect()
}

pub fn to_f64_vec<S: Scalar>(v: &[S]) -> Vec<f64> {
    v.iter().map(Scalar::to_f64).collect()
}
