//! Sizes of `Pop^k` images on chains.
//!
//! `A_n = 1` for `n ≤ k + 1`, and `A_n = Σ_{i=k}^{n-1} A_i A_{n-1-i}`
//! otherwise. The generating function `F = Σ A_n xⁿ` satisfies
//! `x(1−x)F² − (1−x^{k+1})F + (1−x^{k+1}) = 0`, which is the quadratic
//! whose smaller root is the closed-form radical expression. Coefficients
//! are served from the recurrence and checked against that identity.

use std::collections::HashMap;
use std::sync::RwLock;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Memoized `A_n^{(k)}` rows, shareable across threads.
#[derive(Debug, Default)]
pub struct CountTable {
    rows: RwLock<HashMap<usize, Vec<BigUint>>>,
}

impl CountTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// `A_n^{(k)}`.
    pub fn get(&self, n: usize, k: usize) -> BigUint {
        if let Some(row) = self.rows.read().expect("count table lock").get(&k) {
            if let Some(v) = row.get(n) {
                return v.clone();
            }
        }
        let mut rows = self.rows.write().expect("count table lock");
        let row = rows.entry(k).or_default();
        extend_row(row, k, n);
        row[n].clone()
    }

    /// `A_0^{(k)}, ..., A_n^{(k)}`.
    pub fn row(&self, k: usize, n: usize) -> Vec<BigUint> {
        self.get(n, k);
        self.rows.read().expect("count table lock")[&k][..=n].to_vec()
    }
}

fn extend_row(row: &mut Vec<BigUint>, k: usize, n: usize) {
    while row.len() <= n {
        let m = row.len();
        let next = if m <= k + 1 {
            BigUint::one()
        } else {
            (k..m).map(|i| &row[i] * &row[m - 1 - i]).sum()
        };
        row.push(next);
    }
}

/// `A_n^{(k)} = |Pop^k(O(C_n))|`, by the recurrence.
pub fn count_popk_images(n: usize, k: usize) -> BigUint {
    let mut row = Vec::new();
    extend_row(&mut row, k, n);
    row.swap_remove(n)
}

/// Coefficients of the series `Σ A_n xⁿ` up to `x^max_degree`, verified
/// against the quadratic identity.
pub fn gf_coefficients(k: usize, max_degree: usize) -> Result<Vec<BigUint>> {
    let mut row = Vec::new();
    extend_row(&mut row, k, max_degree);
    let residual = quadratic_residual(&row, k);
    if let Some((deg, c)) = residual.iter().enumerate().find(|(_, c)| !c.is_zero()) {
        return Err(Error::integrity(format!(
            "generating-function identity fails for k={k} at x^{deg} (residual {c})"
        )));
    }
    Ok(row)
}

/// Coefficients of `x(1−x)F² − (1−x^{k+1})F + (1−x^{k+1})` through the
/// degree of `coeffs`, with `F` truncated to `coeffs`.
pub fn quadratic_residual(coeffs: &[BigUint], k: usize) -> Vec<BigInt> {
    let n = coeffs.len();
    let f: Vec<BigInt> = coeffs.iter().map(|c| BigInt::from(c.clone())).collect();
    let mut square = vec![BigInt::zero(); n];
    for (i, a) in f.iter().enumerate() {
        for (j, b) in f.iter().enumerate().take(n - i) {
            square[i + j] += a * b;
        }
    }
    // 1 − x^{k+1}
    let p = |d: usize| -> BigInt {
        if d == 0 {
            BigInt::one()
        } else if d == k + 1 {
            -BigInt::one()
        } else {
            BigInt::zero()
        }
    };
    (0..n)
        .map(|d| {
            let mut c = BigInt::zero();
            // x·F² − x²·F²
            if d >= 1 {
                c += &square[d - 1];
            }
            if d >= 2 {
                c -= &square[d - 2];
            }
            c -= &f[d];
            if d > k {
                c += &f[d - k - 1];
            }
            c + p(d)
        })
        .collect()
}
