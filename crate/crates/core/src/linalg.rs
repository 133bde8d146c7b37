//! Dense linear algebra over exact rationals.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::par::{map_range, Execution};

pub type Matrix = Vec<Vec<BigRational>>;

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect()
}

/// Row vector times matrix.
pub fn vec_mul(v: &[BigRational], m: &Matrix) -> Vec<BigRational> {
    let n = m.first().map_or(0, Vec::len);
    let mut out = vec![BigRational::zero(); n];
    for (vi, row) in v.iter().zip(m) {
        if vi.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(row) {
            if !x.is_zero() {
                *o += vi * x;
            }
        }
    }
    out
}

/// Matrix product; rows of the result are computed independently.
pub fn mat_mul(exec: Execution, a: &Matrix, b: &Matrix) -> Matrix {
    map_range(exec, a.len(), |i| vec_mul(&a[i], b))
}

/// `m^l` by repeated squaring, `l >= 1`.
pub fn mat_pow(exec: Execution, m: &Matrix, l: u64) -> Matrix {
    assert!(l >= 1, "exponent must be positive");
    let mut result: Option<Matrix> = None;
    let mut base = m.clone();
    let mut e = l;
    loop {
        if e & 1 == 1 {
            result = Some(match result {
                None => base.clone(),
                Some(r) => mat_mul(exec, &r, &base),
            });
        }
        e >>= 1;
        if e == 0 {
            break;
        }
        base = mat_mul(exec, &base, &base);
    }
    result.expect("l >= 1")
}

/// Solve `a x = b` by Gaussian elimination with partial pivoting.
/// Returns `None` if `a` is singular.
pub fn solve(mut a: Matrix, mut b: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let n = a.len();
    for col in 0..n {
        let pivot = (col..n)
            .filter(|&r| !a[r][col].is_zero())
            .max_by(|&r, &s| a[r][col].abs().cmp(&a[s][col].abs()))?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].recip();
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] * &inv;
            let (upper, lower) = a.split_at_mut(r);
            let prow = &upper[col];
            for (x, p) in lower[0][col..].iter_mut().zip(&prow[col..]) {
                if !p.is_zero() {
                    *x -= &factor * p;
                }
            }
            let bc = b[col].clone();
            b[r] -= factor * bc;
        }
    }
    let mut x = vec![BigRational::zero(); n];
    for r in (0..n).rev() {
        let mut acc = b[r].clone();
        for c in r + 1..n {
            if !a[r][c].is_zero() {
                acc -= &a[r][c] * &x[c];
            }
        }
        x[r] = acc / &a[r][r];
    }
    Some(x)
}
