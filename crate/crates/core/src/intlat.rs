//! Integer lattices: Hermite normal form, membership, integer kernels and
//! Smith invariant factors. Used to canonicalize closed torus subgroups.

pub type IntMatrix = Vec<Vec<i64>>;

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    // returns (g, x, y) with a*x + b*y = g >= 0
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Row echelon form over the integers using unimodular row operations,
/// pivoting only in the first `limit` columns; remaining columns are
/// carried along. Rows are reduced above each pivot into `[0, pivot)`.
/// Returns the transformed rows (all of them, zero rows last) and the pivot
/// columns.
fn echelon(rows: &[Vec<i64>], limit: usize) -> (Vec<Vec<i128>>, Vec<usize>) {
    let mut a: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..limit {
        if r == a.len() {
            break;
        }
        // fold every lower row into row r with gcd steps
        for i in (r + 1)..a.len() {
            if a[i][c] == 0 {
                continue;
            }
            if a[r][c] == 0 {
                a.swap(r, i);
                continue;
            }
            let (g, x, y) = ext_gcd(a[r][c], a[i][c]);
            let (p, q) = (a[r][c] / g, a[i][c] / g);
            let (top, bot) = (a[r].clone(), a[i].clone());
            for j in 0..top.len() {
                a[r][j] = x * top[j] + y * bot[j];
                a[i][j] = -q * top[j] + p * bot[j];
            }
        }
        if a[r][c] == 0 {
            continue;
        }
        if a[r][c] < 0 {
            for x in a[r].iter_mut() {
                *x = -*x;
            }
        }
        let piv = a[r][c];
        let pivot_row = a[r].clone();
        for row in a.iter_mut().take(r) {
            let f = row[c].div_euclid(piv);
            if f != 0 {
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

fn narrow(v: &[i128]) -> Vec<i64> {
    v.iter()
        .map(|&x| i64::try_from(x).expect("integer lattice entry overflow"))
        .collect()
}

/// Hermite normal form of the row lattice (zero rows removed).
pub fn hnf(rows: &[Vec<i64>], ncols: usize) -> IntMatrix {
    let (a, pivots) = echelon(rows, ncols);
    a[..pivots.len()].iter().map(|r| narrow(r)).collect()
}

/// Membership of `v` in the lattice spanned by the rows of an HNF matrix.
pub fn hnf_contains(hnf_rows: &[Vec<i64>], v: &[i64]) -> bool {
    let mut w: Vec<i128> = v.iter().map(|&x| x as i128).collect();
    for row in hnf_rows {
        let Some(c) = row.iter().position(|&x| x != 0) else {
            continue;
        };
        if w[..c].iter().any(|&x| x != 0) {
            return false;
        }
        let p = row[c] as i128;
        if w[c] % p != 0 {
            return false;
        }
        let f = w[c] / p;
        for (x, y) in w.iter_mut().zip(row) {
            *x -= f * (*y as i128);
        }
    }
    w.iter().all(|&x| x == 0)
}

/// A ℤ-basis of `{x ∈ ℤⁿ : A x = 0}` where `A` has the given rows.
pub fn integer_kernel(rows: &[Vec<i64>], ncols: usize) -> IntMatrix {
    let m = rows.len();
    // augmented [Aᵀ | I]
    let aug: Vec<Vec<i64>> = (0..ncols)
        .map(|j| {
            let mut r: Vec<i64> = rows.iter().map(|row| row[j]).collect();
            r.extend((0..ncols).map(|i| i64::from(i == j)));
            r
        })
        .collect();
    let (a, pivots) = echelon(&aug, m);
    a[pivots.len()..].iter().map(|r| narrow(&r[m..])).collect()
}

/// Nonzero Smith invariant factors `d₁ | d₂ | …` of the row lattice.
pub fn invariant_factors(rows: &[Vec<i64>], ncols: usize) -> Vec<i64> {
    let mut a: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let nrows = a.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < nrows.min(ncols) {
        // pick smallest nonzero entry in the trailing block as pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..nrows {
            for j in t..ncols {
                if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut clean = true;
            let p = a[t][t];
            for i in (t + 1)..nrows {
                let f = a[i][t].div_euclid(p);
                if f != 0 {
                    let pr = a[t].clone();
                    for (x, y) in a[i].iter_mut().zip(&pr) {
                        *x -= f * y;
                    }
                }
                if a[i][t] != 0 {
                    clean = false;
                }
            }
            for j in (t + 1)..ncols {
                let f = a[t][j].div_euclid(p);
                if f != 0 {
                    for row in a.iter_mut() {
                        let y = row[t];
                        row[j] -= f * y;
                    }
                }
                if a[t][j] != 0 {
                    clean = false;
                }
            }
            if clean {
                // divisibility condition on the trailing block
                let bad = (t + 1..nrows)
                    .flat_map(|i| (t + 1..ncols).map(move |j| (i, j)))
                    .find(|&(i, j)| a[i][j] % p != 0);
                match bad {
                    None => break,
                    Some((i, _)) => {
                        let ri = a[i].clone();
                        for (x, y) in a[t].iter_mut().zip(&ri) {
                            *x += y;
                        }
                        continue;
                    }
                }
            }
            // move the smallest remaining entry of row/column t into the pivot
            let mut best = (t, t);
            for i in t..nrows {
                if a[i][t] != 0 && a[i][t].abs() < a[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..ncols {
                if a[t][j] != 0 && a[t][j].abs() < a[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            a.swap(t, best.0);
            for row in a.iter_mut() {
                row.swap(t, best.1);
            }
        }
        diag.push(i64::try_from(a[t][t].abs()).expect("invariant factor overflow"));
        t += 1;
    }
    diag
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn hnf_small() {
        let h = hnf(&[vec![2, 4], vec![3, 5]], 2);
        assert_eq!(h, vec![vec![1, 1], vec![0, 2]]);
        assert!(hnf(&[vec![0, 0]], 2).is_empty());
        assert_eq!(hnf(&[vec![-3]], 1), vec![vec![3]]);
    }

    #[test]
    fn kernel_of_weights() {
        // columns (1,1) and (2,2): relation 2·c₁ − c₂
        let k = integer_kernel(&[vec![1, 2], vec![1, 2]], 2);
        assert_eq!(k.len(), 1);
        assert_eq!(k[0][0] + 2 * k[0][1], 0);
        assert_eq!(k[0].iter().map(|x| x.abs()).sum::<i64>(), 3);
        assert!(integer_kernel(&[vec![1, 0], vec![0, 1]], 2).is_empty());
        assert_eq!(integer_kernel(&[], 2).len(), 2);
    }

    #[test]
    fn smith_factors() {
        assert_eq!(invariant_factors(&[vec![2, 0], vec![0, 3]], 2), vec![1, 6]);
        assert_eq!(invariant_factors(&[vec![2, 4]], 2), vec![2]);
        assert_eq!(invariant_factors(&[vec![2, 0], vec![0, 2]], 2), vec![2, 2]);
        assert!(invariant_factors(&[], 3).is_empty());
    }

    proptest! {
        #[test]
        fn hnf_is_canonical(a in proptest::collection::vec(proptest::collection::vec(-6i64..6, 3), 1..4),
                            u in -3i64..3) {
            // adding a multiple of one row to another leaves the lattice (and HNF) unchanged
            let mut b = a.clone();
            if b.len() > 1 {
                let r0 = b[0].clone();
                for (x, y) in b[1].iter_mut().zip(&r0) { *x += u * y; }
                b.swap(0, 1);
            }
            let ha = hnf(&a, 3);
            prop_assert_eq!(&ha, &hnf(&b, 3));
            for row in &a { prop_assert!(hnf_contains(&ha, row)); }
        }

        #[test]
        fn kernel_vectors_annihilate(a in proptest::collection::vec(proptest::collection::vec(-5i64..5, 4), 1..3)) {
            for v in integer_kernel(&a, 4) {
                for row in &a {
                    prop_assert_eq!(row.iter().zip(&v).map(|(x, y)| x * y).sum::<i64>(), 0);
                }
            }
        }
    }
}
