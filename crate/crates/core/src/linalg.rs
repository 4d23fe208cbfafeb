//! Exact integer/rational linear algebra for linking matrices and shadow
//! intersection forms.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Signature (#positive − #negative) of a symmetric rational matrix, by
/// congruence diagonalization.
///
/// Panics if `m` is not square.
pub fn signature_rational(m: &[Vec<BigRational>]) -> i64 {
    let n = m.len();
    assert!(m.iter().all(|row| row.len() == n), "matrix must be square");
    let mut a: Vec<Vec<BigRational>> = m.to_vec();
    let mut sig = 0i64;
    let mut k = 0;
    while k < n {
        // bring a nonzero diagonal entry to position k
        if a[k][k].is_zero() {
            if let Some(p) = (k + 1..n).find(|&p| !a[p][p].is_zero()) {
                swap_sym(&mut a, k, p);
            } else if let Some(p) = (k + 1..n).find(|&p| !a[k][p].is_zero()) {
                // a[k][k] = a[p][p] = 0 ≠ a[k][p]: row/col k += row/col p gives 2 a[k][p]
                add_sym(&mut a, k, p, &BigRational::from_integer(1.into()));
            } else {
                // row k is zero: contributes a zero eigenvalue
                k += 1;
                continue;
            }
        }
        let pivot = a[k][k].clone();
        sig += if pivot.is_positive() { 1 } else { -1 };
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = -(&a[i][k] / &pivot);
            add_sym(&mut a, i, k, &f);
        }
        k += 1;
    }
    sig
}

/// Signature of a symmetric integer matrix.
pub fn signature(m: &[Vec<i64>]) -> i64 {
    let q: Vec<Vec<BigRational>> = m
        .iter()
        .map(|row| row.iter().map(|&x| BigRational::from_integer(x.into())).collect())
        .collect();
    signature_rational(&q)
}

fn swap_sym(a: &mut [Vec<BigRational>], i: usize, j: usize) {
    a.swap(i, j);
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

// row i += f·row j, then col i += f·col j
fn add_sym(a: &mut [Vec<BigRational>], i: usize, j: usize, f: &BigRational) {
    let n = a.len();
    for c in 0..n {
        let v = &a[j][c] * f;
        a[i][c] += v;
    }
    for row in a.iter_mut() {
        let v = &row[j] * f;
        row[i] += v;
    }
}

/// A basis of the integer kernel `{x ∈ ℤⁿ : M x = 0}` of an `m × n` matrix.
///
/// Unimodular column operations reduce `M` to column echelon form while the
/// same operations act on the identity; the columns that end up zero in `M`
/// span the kernel lattice.
pub fn integer_kernel(m: &[Vec<i64>], n: usize) -> Vec<Vec<i64>> {
    let rows = m.len();
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut u: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect();
    // column j of the transform is u[.][j]
    let col_op = |a: &mut Vec<Vec<i128>>, u: &mut Vec<Vec<i128>>, dst: usize, src: usize, f: i128| {
        for r in a.iter_mut() {
            r[dst] -= f * r[src];
        }
        for r in u.iter_mut() {
            r[dst] -= f * r[src];
        }
    };
    let swap = |a: &mut Vec<Vec<i128>>, u: &mut Vec<Vec<i128>>, x: usize, y: usize| {
        for r in a.iter_mut() {
            r.swap(x, y);
        }
        for r in u.iter_mut() {
            r.swap(x, y);
        }
    };
    let mut lead = 0usize;
    for row in 0..rows {
        if lead >= n {
            break;
        }
        // gcd-reduce entries row[lead..] into column `lead`
        loop {
            let nz: Vec<usize> = (lead..n).filter(|&j| a[row][j] != 0).collect();
            if nz.is_empty() {
                break;
            }
            let p = *nz.iter().min_by_key(|&&j| a[row][j].abs()).unwrap();
            if p != lead {
                swap(&mut a, &mut u, p, lead);
            }
            let mut done = true;
            for j in lead + 1..n {
                if a[row][j] != 0 {
                    let f = a[row][j].div_euclid(a[row][lead]);
                    col_op(&mut a, &mut u, j, lead, f);
                    if a[row][j] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if a[row][lead] != 0 {
            lead += 1;
        }
    }
    (lead..n)
        .map(|j| (0..n).map(|i| u[i][j] as i64).collect())
        .collect()
}

/// Rank of an integer matrix over ℚ.
pub fn rational_rank(m: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
        .collect();
    let cols = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for i in 0..a.len() {
            if i != rank && !a[i][c].is_zero() {
                let f = &a[i][c] / &a[rank][c];
                for j in 0..cols {
                    let v = &a[rank][j] * &f;
                    a[i][j] -= v;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mul(m: &[Vec<i64>], x: &[i64]) -> Vec<i64> {
        m.iter().map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }

    #[test]
    fn small_signatures() {
        for n in -3..=3i64 {
            assert_eq!(signature(&[vec![n]]), n.signum());
        }
        assert_eq!(signature(&[vec![0, 1], vec![1, 0]]), 0);
        assert_eq!(signature(&[vec![0, 0], vec![0, 0]]), 0);
        assert_eq!(signature(&[vec![2, 1], vec![1, 2]]), 2);
        assert_eq!(signature(&[vec![1, 2], vec![2, 1]]), 0);
        assert_eq!(signature(&[]), 0);
    }

    #[test]
    fn kernel_examples() {
        // x - y = 0
        let k = integer_kernel(&[vec![1, -1]], 2);
        assert_eq!(k.len(), 1);
        assert_eq!(mul(&[vec![1, -1]], &k[0]), vec![0]);
        assert_eq!(integer_kernel(&[], 1), vec![vec![1]]);
        assert!(integer_kernel(&[vec![1]], 1).is_empty());
        // 2x + 4y = 0 → (2, -1) up to sign, not (4, -2)
        let k = integer_kernel(&[vec![2, 4]], 2);
        assert_eq!(k.len(), 1);
        assert_eq!(k[0].iter().map(|x| x.abs()).collect::<Vec<_>>(), vec![2, 1]);
    }

    proptest! {
        #[test]
        fn kernel_rank_matches_rational_rank(
            m in proptest::collection::vec(proptest::collection::vec(-3i64..=3, 4), 0..4)
        ) {
            let k = integer_kernel(&m, 4);
            prop_assert_eq!(k.len(), 4 - rational_rank(&m));
            for v in &k {
                prop_assert!(mul(&m, v).iter().all(|&x| x == 0));
            }
            if !k.is_empty() {
                prop_assert_eq!(rational_rank(&k), k.len());
            }
        }

        #[test]
        fn signature_is_congruence_invariant(
            d in proptest::collection::vec(-3i64..=3, 3),
            p in proptest::collection::vec(-2i64..=2, 3),
        ) {
            // P = unit upper triangular with random off-diagonal entries
            let pm = [vec![1, p[0], p[1]], vec![0, 1, p[2]], vec![0, 0, 1]];
            let mut g = vec![vec![0i64; 3]; 3];
            for i in 0..3 {
                for j in 0..3 {
                    g[i][j] = (0..3).map(|k| pm[k][i] * d[k] * pm[k][j]).sum();
                }
            }
            let expect: i64 = d.iter().map(|x| x.signum()).sum();
            prop_assert_eq!(signature(&g), expect);
        }
    }
}
