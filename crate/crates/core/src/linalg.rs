//! Exact rank of sparse integer matrices over Q and GF(2).
//!
//! Matrices are given column-wise as sparse `(row, value)` lists. Both
//! routines build an echelon basis keyed by the lowest nonzero row of each
//! column, reducing every incoming column against it.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// A sparse integer column: strictly increasing row indices, nonzero values.
pub type SparseColumn = Vec<(usize, i64)>;

type BigColumn = Vec<(usize, BigInt)>;

/// `a*x - b*y` on sparse columns, dropping zeros.
fn combine(a: &BigInt, x: &BigColumn, b: &BigInt, y: &BigColumn) -> BigColumn {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let (row, v) = match (x.get(i), y.get(j)) {
            (Some((rx, vx)), Some((ry, _))) if rx < ry => {
                i += 1;
                (*rx, a * vx)
            }
            (Some((rx, _)), Some((ry, vy))) if ry < rx => {
                j += 1;
                (*ry, -(b * vy))
            }
            (Some((rx, vx)), Some((_, vy))) => {
                i += 1;
                j += 1;
                (*rx, a * vx - b * vy)
            }
            (Some((rx, vx)), None) => {
                i += 1;
                (*rx, a * vx)
            }
            (None, Some((ry, vy))) => {
                j += 1;
                (*ry, -(b * vy))
            }
            (None, None) => unreachable!(),
        };
        if !v.is_zero() {
            out.push((row, v));
        }
    }
    out
}

fn primitive(col: &mut BigColumn) {
    let mut g = BigInt::zero();
    for (_, v) in col.iter() {
        g = g.gcd(v);
        if g.is_one() {
            return;
        }
    }
    if g > BigInt::one() {
        for (_, v) in col.iter_mut() {
            *v /= &g;
        }
    }
}

/// Rank over the rationals, computed with fraction-free integer elimination.
pub fn rank_rational(columns: &[SparseColumn]) -> usize {
    let mut pivots: HashMap<usize, BigColumn> = HashMap::new();
    for col in columns {
        let mut col: BigColumn = col.iter().map(|&(r, v)| (r, BigInt::from(v))).collect();
        while let Some((low, low_val)) = col.last().cloned() {
            match pivots.get(&low) {
                Some(piv) => {
                    let piv_val = &piv.last().expect("pivot columns are nonzero").1;
                    let g = piv_val.gcd(&low_val);
                    let a = piv_val / &g;
                    let b = &low_val / &g;
                    col = combine(&a, &col, &b, piv);
                    primitive(&mut col);
                }
                None => {
                    if col.last().map(|(_, v)| v.is_negative()).unwrap_or(false) {
                        for (_, v) in col.iter_mut() {
                            *v = -v.clone();
                        }
                    }
                    pivots.insert(low, col);
                    break;
                }
            }
        }
    }
    pivots.len()
}

fn xor_sorted(x: &[usize], y: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() && j < y.len() {
        match x[i].cmp(&y[j]) {
            std::cmp::Ordering::Less => {
                out.push(x[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(y[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&x[i..]);
    out.extend_from_slice(&y[j..]);
    out
}

/// Rank over GF(2); entries are reduced mod 2.
pub fn rank_gf2(columns: &[SparseColumn]) -> usize {
    let mut pivots: HashMap<usize, Vec<usize>> = HashMap::new();
    for col in columns {
        let mut col: Vec<usize> =
            col.iter().filter(|(_, v)| v.rem_euclid(2) == 1).map(|&(r, _)| r).collect();
        while let Some(&low) = col.last() {
            match pivots.get(&low) {
                Some(piv) => col = xor_sorted(&col, piv),
                None => {
                    pivots.insert(low, col);
                    break;
                }
            }
        }
    }
    pivots.len()
}

/// Rank of a dense matrix over GF(p), rows given as vectors of residues.
pub fn rank_mod_p(rows: &[Vec<u64>], p: u64) -> usize {
    let mut m: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|x| x % p).collect()).collect();
    let ncols = m.first().map(|r| r.len()).unwrap_or(0);
    let mut rank = 0;
    for c in 0..ncols {
        let Some(piv) = (rank..m.len()).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = pow_mod(m[rank][c], p - 2, p);
        for x in m[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..m.len() {
            if r != rank && m[r][c] != 0 {
                let f = m[r][c];
                for k in 0..ncols {
                    m[r][k] = (m[r][k] + p - f * m[rank][k] % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Product `a * b` of column-sparse integer matrices, where `b`'s row
/// indices address the columns of `a`.
pub fn multiply(a: &[SparseColumn], b: &[SparseColumn]) -> Vec<SparseColumn> {
    b.iter()
        .map(|col| {
            let mut acc: std::collections::BTreeMap<usize, i64> = Default::default();
            for &(k, v) in col {
                for &(r, w) in &a[k] {
                    *acc.entry(r).or_default() += v * w;
                }
            }
            acc.into_iter().filter(|(_, v)| *v != 0).collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_to_cols(rows: &[&[i64]]) -> Vec<SparseColumn> {
        let ncols = rows[0].len();
        (0..ncols)
            .map(|c| {
                rows.iter().enumerate().filter(|(_, r)| r[c] != 0).map(|(i, r)| (i, r[c])).collect()
            })
            .collect()
    }

    #[test]
    fn rank_over_q_and_gf2_differ_on_even_determinant() {
        // det = 2: full rank over Q, rank 1 over GF(2).
        let m = dense_to_cols(&[&[1, 1], &[1, -1]]);
        assert_eq!(rank_rational(&m), 2);
        assert_eq!(rank_gf2(&m), 1);
    }

    #[test]
    fn rank_of_dependent_columns() {
        let m = dense_to_cols(&[&[2, 4, 1], &[3, 6, 0], &[5, 10, 1]]);
        assert_eq!(rank_rational(&m), 2);
    }

    #[test]
    fn rank_mod_p_identity_and_dependency() {
        assert_eq!(rank_mod_p(&[vec![1, 0], vec![0, 1]], 3), 2);
        assert_eq!(rank_mod_p(&[vec![1, 2], vec![2, 1]], 3), 1);
        assert_eq!(rank_mod_p(&[], 5), 0);
    }

    #[test]
    fn multiply_small() {
        let a = dense_to_cols(&[&[1, 1]]);
        let b = dense_to_cols(&[&[1], &[-1]]);
        assert_eq!(multiply(&a, &b), vec![Vec::<(usize, i64)>::new()]);
    }
}
