//! Integer matrix utilities: Smith normal form over arbitrary-precision
//! integers, used for homology of the identified cell complex.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

pub type Matrix = Vec<Vec<BigInt>>;

pub fn zeros(rows: usize, cols: usize) -> Matrix {
    vec![vec![BigInt::zero(); cols]; rows]
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let (m, k) = (a.len(), if a.is_empty() { 0 } else { a[0].len() });
    let n = if b.is_empty() { 0 } else { b[0].len() };
    assert!(k == b.len());
    let mut out = zeros(m, n);
    for i in 0..m {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..n {
                let prod = &a[i][l] * &b[l][j];
                out[i][j] += prod;
            }
        }
    }
    out
}

pub fn is_zero_matrix(a: &Matrix) -> bool {
    a.iter().all(|row| row.iter().all(|x| x.is_zero()))
}

/// Invariant factors of an integer matrix: the nonzero diagonal of its Smith
/// normal form, positive, each dividing the next. The length is the rank.
pub fn invariant_factors(mut a: Matrix) -> Vec<BigInt> {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    let mut factors = Vec::new();
    let mut top = 0;

    while top < m && top < n {
        // Locate a pivot of minimal absolute value in the working submatrix.
        let mut pivot: Option<(usize, usize)> = None;
        for i in top..m {
            for j in top..n {
                if !a[i][j].is_zero()
                    && pivot
                        .map(|(pi, pj)| a[i][j].abs() < a[pi][pj].abs())
                        .unwrap_or(true)
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        a.swap(top, pi);
        for row in a.iter_mut() {
            row.swap(top, pj);
        }

        // Clear the pivot row and column; remainders become new, smaller
        // pivots, so this loop terminates.
        loop {
            let mut dirty = false;
            for i in (top + 1)..m {
                if a[i][top].is_zero() {
                    continue;
                }
                let q = div_nearest(&a[i][top], &a[top][top]);
                if !q.is_zero() {
                    for j in top..n {
                        let sub = &q * &a[top][j];
                        a[i][j] -= sub;
                    }
                }
                if !a[i][top].is_zero() {
                    a.swap(top, i);
                    dirty = true;
                }
            }
            for j in (top + 1)..n {
                if a[top][j].is_zero() {
                    continue;
                }
                let q = div_nearest(&a[top][j], &a[top][top]);
                if !q.is_zero() {
                    for i in top..m {
                        let sub = &q * &a[i][top];
                        a[i][j] -= sub;
                    }
                }
                if !a[top][j].is_zero() {
                    for row in a.iter_mut() {
                        row.swap(top, j);
                    }
                    dirty = true;
                }
            }
            if !dirty && a[(top + 1)..m].iter().all(|r| r[top].is_zero()) {
                break;
            }
        }

        // Enforce divisibility: the pivot must divide every remaining entry.
        let mut fixed = None;
        'scan: for i in (top + 1)..m {
            for j in (top + 1)..n {
                if !(&a[i][j] % &a[top][top]).is_zero() {
                    fixed = Some(i);
                    break 'scan;
                }
            }
        }
        if let Some(i) = fixed {
            for j in top..n {
                let add = a[i][j].clone();
                a[top][j] += add;
            }
            continue; // redo this pivot with the enlarged row
        }

        factors.push(a[top][top].abs());
        top += 1;
    }
    factors
}

/// Rounded division minimizing |a - q b|.
fn div_nearest(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut q, r) = a.div_rem(b);
    // r has the sign of a; shift q so the remainder magnitude is at most |b|/2.
    let two_r = BigInt::from(2) * r.abs();
    if two_r > b.abs() {
        if (a.sign() == b.sign()) || a.is_zero() {
            q += 1;
        } else {
            q -= 1;
        }
    }
    q
}

/// Rank over the rationals (length of the invariant factor list).
pub fn rank(a: &Matrix) -> usize {
    invariant_factors(a.clone()).len()
}
