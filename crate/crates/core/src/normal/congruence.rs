//! Exact diagonalization of Hermitian matrices by congruence.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::scalar::Scalar;
use crate::GaussianRational;

pub type Matrix = Vec<Vec<GaussianRational>>;

/// `C` with `C* K C = diag(d)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Congruence {
    pub transform: Matrix,
    pub diagonal: Vec<BigRational>,
}

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        GaussianRational::one()
                    } else {
                        GaussianRational::zero()
                    }
                })
                .collect()
        })
        .collect()
}

pub fn conj_transpose(a: &Matrix) -> Matrix {
    let n = a.len();
    let m = a.first().map_or(0, Vec::len);
    (0..m).map(|j| (0..n).map(|i| a[i][j].conj()).collect()).collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner).fold(GaussianRational::zero(), |acc, k| {
                        if row[k].is_zero() {
                            acc
                        } else {
                            acc + row[k].clone() * b[k][j].clone()
                        }
                    })
                })
                .collect()
        })
        .collect()
}

/// Exact inverse by Gauss-Jordan elimination, `None` when singular.
pub fn invert(a: &Matrix) -> Option<Matrix> {
    let n = a.len();
    let mut m = a.clone();
    let mut inv = identity(n);
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        inv.swap(col, pivot);
        let p = m[col][col].clone();
        for j in 0..n {
            m[col][j] = m[col][j].clone() / p.clone();
            inv[col][j] = inv[col][j].clone() / p.clone();
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for j in 0..n {
                m[r][j] = m[r][j].clone() - f.clone() * m[col][j].clone();
                inv[r][j] = inv[r][j].clone() - f.clone() * inv[col][j].clone();
            }
        }
    }
    Some(inv)
}

/// Replaces column `k` by `col_k + α col_j` in `c` and `k` by `E* k E` for
/// the matching elementary `E`.
fn add_column(k_mat: &mut Matrix, c: &mut Matrix, target: usize, source: usize, alpha: &GaussianRational) {
    let n = k_mat.len();
    for row in c.iter_mut() {
        let v = row[source].clone() * alpha.clone();
        row[target] = row[target].clone() + v;
    }
    for row in k_mat.iter_mut() {
        let v = row[source].clone() * alpha.clone();
        row[target] = row[target].clone() + v;
    }
    let a = alpha.conj();
    for j in 0..n {
        let v = k_mat[source][j].clone() * a.clone();
        k_mat[target][j] = k_mat[target][j].clone() + v;
    }
}

fn swap(k_mat: &mut Matrix, c: &mut Matrix, a: usize, b: usize) {
    k_mat.swap(a, b);
    for row in k_mat.iter_mut() {
        row.swap(a, b);
    }
    for row in c.iter_mut() {
        row.swap(a, b);
    }
}

/// Symmetric elimination with diagonal pivoting. A zero pivot whose row is
/// not zero is repaired by swapping in a later nonzero diagonal entry or, if
/// every remaining diagonal entry vanishes, by replacing `e_k` with
/// `e_k + e_j` or `e_k + i e_j`, one of which has nonzero norm under `K`.
/// Rows that are already zero are left in place, so an already diagonal
/// matrix gets `C = I`.
pub fn diagonalize(k: &Matrix) -> Congruence {
    let n = k.len();
    let mut m = k.clone();
    let mut c = identity(n);
    for p in 0..n {
        if m[p][p].is_zero() {
            let Some(j) = (p + 1..n).find(|&j| !m[p][j].is_zero()) else {
                continue;
            };
            if let Some(s) = (p + 1..n).find(|&s| !m[s][s].is_zero()) {
                swap(&mut m, &mut c, p, s);
            } else {
                let alpha = if m[p][j].re.is_zero() {
                    GaussianRational::imag_unit()
                } else {
                    GaussianRational::one()
                };
                add_column(&mut m, &mut c, p, j, &alpha);
            }
        }
        if m[p][p].is_zero() {
            continue;
        }
        let pivot = m[p][p].clone();
        for j in p + 1..n {
            if m[p][j].is_zero() {
                continue;
            }
            let f = -(m[p][j].clone() / pivot.clone());
            add_column(&mut m, &mut c, j, p, &f);
        }
    }
    Congruence {
        diagonal: (0..n).map(|i| m[i][i].re.clone()).collect(),
        transform: c,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(re: i64, im: i64) -> GaussianRational {
        GaussianRational::new(
            BigRational::from_integer(re.into()),
            BigRational::from_integer(im.into()),
        )
    }

    fn check(k: &Matrix) -> Congruence {
        let cg = diagonalize(k);
        let d = mat_mul(&mat_mul(&conj_transpose(&cg.transform), k), &cg.transform);
        for (i, row) in d.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if i == j {
                    assert_eq!(v, &GaussianRational::new(cg.diagonal[i].clone(), BigRational::zero()));
                } else {
                    assert!(v.is_zero(), "off-diagonal ({i},{j}) = {v:?}");
                }
            }
        }
        assert!(invert(&cg.transform).is_some());
        cg
    }

    #[test]
    fn two_by_two_elimination() {
        let k = vec![vec![g(2, 0), g(1, 0)], vec![g(1, 0), g(1, 0)]];
        let cg = check(&k);
        assert_eq!(
            cg.diagonal,
            vec![
                BigRational::from_integer(2.into()),
                BigRational::new(1.into(), 2.into())
            ]
        );
    }

    #[test]
    fn zero_diagonal_coupling() {
        let k = vec![vec![g(0, 0), g(0, 1)], vec![g(0, -1), g(0, 0)]];
        let cg = check(&k);
        let signs: Vec<i32> = cg
            .diagonal
            .iter()
            .map(|d| if d > &BigRational::zero() { 1 } else { -1 })
            .collect();
        let mut sorted = signs.clone();
        sorted.sort();
        assert_eq!(sorted, vec![-1, 1]);
    }

    #[test]
    fn diagonal_input_is_untouched() {
        let k = vec![vec![g(0, 0), g(0, 0)], vec![g(0, 0), g(3, 0)]];
        assert_eq!(check(&k).transform, identity(2));
    }

    fn hermitian(n: usize, entries: &[(i64, i64)]) -> Matrix {
        let mut k = vec![vec![GaussianRational::zero(); n]; n];
        let mut it = entries.iter().cycle();
        for i in 0..n {
            let &(re, _) = it.next().unwrap();
            k[i][i] = g(re, 0);
            for j in i + 1..n {
                let &(re, im) = it.next().unwrap();
                k[i][j] = g(re, im);
                k[j][i] = g(re, -im);
            }
        }
        k
    }

    proptest! {
        #[test]
        fn random_hermitian_matrices(n in 1usize..=4, entries in prop::collection::vec((-2i64..=2, -2i64..=2), 10)) {
            let k = hermitian(n, &entries);
            check(&k);
        }
    }
}
