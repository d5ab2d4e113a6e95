//! Exact solution of rational linear systems by fraction-free (Bareiss)
//! elimination.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::Rational;

/// Returned when the system has no solution: after elimination, the row
/// with this original index has zero coefficients and a nonzero right side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inconsistent {
    pub row: usize,
}

/// Dense system `A x = b` over the rationals.
#[derive(Debug, Clone, Default)]
pub struct LinearSystem {
    cols: usize,
    rows: Vec<(Vec<(usize, Rational)>, Rational)>,
}

impl LinearSystem {
    pub fn new(cols: usize) -> Self {
        LinearSystem { cols, rows: Vec::new() }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    /// Adds a row given as sparse `(column, coefficient)` pairs.
    pub fn push_row(&mut self, coeffs: Vec<(usize, Rational)>, rhs: Rational) {
        debug_assert!(coeffs.iter().all(|(c, _)| *c < self.cols));
        self.rows.push((coeffs, rhs));
    }

    /// Solves the system. Columns without a pivot take `free(column)`.
    /// Pivots are chosen left to right, so columns meant to stay free
    /// should come last.
    pub fn solve(&self, free: impl Fn(usize) -> Rational) -> Result<Vec<Rational>, Inconsistent> {
        let width = self.cols + 1;
        let mut a: Vec<Vec<BigInt>> = self.rows.iter().map(|row| integer_row(row, self.cols)).collect();
        let mut origin: Vec<usize> = (0..a.len()).collect();
        let mut prev = BigInt::one();
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(r, p);
            origin.swap(r, p);
            let (top, rest) = a.split_at_mut(r + 1);
            let pivot_row = &top[r];
            for row in rest.iter_mut() {
                let factor = core::mem::take(&mut row[c]);
                for j in c + 1..width {
                    let v = &pivot_row[c] * &row[j] - &factor * &pivot_row[j];
                    row[j] = v.div_floor(&prev);
                }
            }
            prev = a[r][c].clone();
            pivots.push((r, c));
            r += 1;
        }
        if let Some(i) = (r..a.len()).find(|&i| !a[i][self.cols].is_zero()) {
            return Err(Inconsistent { row: origin[i] });
        }
        let mut x: Vec<Option<Rational>> = alloc::vec![None; self.cols];
        let pivot_cols: Vec<bool> = {
            let mut v = alloc::vec![false; self.cols];
            for &(_, c) in &pivots {
                v[c] = true;
            }
            v
        };
        for c in 0..self.cols {
            if !pivot_cols[c] {
                x[c] = Some(free(c));
            }
        }
        for &(row, c) in pivots.iter().rev() {
            let mut acc = Rational::from_integer(a[row][self.cols].clone());
            for j in c + 1..self.cols {
                if !a[row][j].is_zero() {
                    let xj = x[j].as_ref().expect("later columns solved first");
                    acc -= Rational::from_integer(a[row][j].clone()) * xj;
                }
            }
            x[c] = Some(acc / Rational::from_integer(a[row][c].clone()));
        }
        Ok(x.into_iter().map(|v| v.expect("every column assigned")).collect())
    }
}

/// Scales a sparse rational row to a dense integer row, rhs last.
fn integer_row((coeffs, rhs): &(Vec<(usize, Rational)>, Rational), cols: usize) -> Vec<BigInt> {
    let mut lcm = rhs.denom().clone();
    for (_, q) in coeffs {
        lcm = lcm.lcm(q.denom());
    }
    let scale = |q: &Rational| q.numer() * (&lcm / q.denom());
    let mut out = alloc::vec![BigInt::zero(); cols + 1];
    for (c, q) in coeffs {
        out[*c] += scale(q);
    }
    out[cols] = scale(rhs);
    out
}
