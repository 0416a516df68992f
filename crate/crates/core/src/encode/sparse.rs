//! Compressed sparse row storage for {−1, 0, +1} matrices.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedCsr {
    num_rows: usize,
    num_cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<u32>,
    values: Vec<i8>,
}

/// One stored entry `(row, col, value)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Triplet {
    pub row: u32,
    pub col: u32,
    pub value: i8,
}

impl SignedCsr {
    pub fn with_capacity(num_cols: usize, rows: usize, nnz: usize) -> Self {
        let mut row_ptr = Vec::with_capacity(rows + 1);
        row_ptr.push(0);
        SignedCsr {
            num_rows: 0,
            num_cols,
            row_ptr,
            col_idx: Vec::with_capacity(nnz),
            values: Vec::with_capacity(nnz),
        }
    }

    /// Appends a row given as `(col, value)` pairs. Zero values are skipped.
    pub fn push_row<I: IntoIterator<Item = (usize, i8)>>(&mut self, entries: I) {
        for (col, value) in entries {
            assert!(col < self.num_cols, "column {col} out of range");
            if value != 0 {
                self.col_idx.push(col as u32);
                self.values.push(value);
            }
        }
        self.row_ptr.push(self.col_idx.len());
        self.num_rows += 1;
    }

    pub fn num_rows(&self) -> usize {
        self.num_rows
    }

    pub fn num_cols(&self) -> usize {
        self.num_cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, i8)> + '_ {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[range.clone()]
            .iter()
            .zip(&self.values[range])
            .map(|(&c, &v)| (c as usize, v))
    }

    pub fn row_nnz(&self, i: usize) -> usize {
        self.row_ptr[i + 1] - self.row_ptr[i]
    }

    /// Dense copy of entry `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> i8 {
        self.row(i).find(|&(c, _)| c == j).map_or(0, |(_, v)| v)
    }

    pub fn triplets(&self) -> impl Iterator<Item = Triplet> + '_ {
        (0..self.num_rows).flat_map(move |i| {
            self.row(i).map(move |(col, value)| Triplet {
                row: i as u32,
                col: col as u32,
                value,
            })
        })
    }

    /// `y = M x`.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.num_cols);
        (0..self.num_rows)
            .map(|i| self.row(i).map(|(j, v)| v as f64 * x[j]).sum())
            .collect()
    }

    /// `y = M x` over integers.
    pub fn mul_vec_i64(&self, x: &[i64]) -> Vec<i64> {
        assert_eq!(x.len(), self.num_cols);
        (0..self.num_rows)
            .map(|i| self.row(i).map(|(j, v)| v as i64 * x[j]).sum())
            .collect()
    }

    /// `y = Mᵀ r`.
    pub fn transpose_mul_vec(&self, r: &[f64]) -> Vec<f64> {
        assert_eq!(r.len(), self.num_rows);
        let mut y = vec![0.0; self.num_cols];
        for (i, &ri) in r.iter().enumerate() {
            if ri == 0.0 {
                continue;
            }
            for (j, v) in self.row(i) {
                y[j] += v as f64 * ri;
            }
        }
        y
    }

    /// Column counts of positive and negative entries, restricted to the first `cols` columns.
    pub fn column_sign_counts(&self, cols: usize) -> Vec<(u32, u32)> {
        let mut counts = vec![(0u32, 0u32); cols];
        for (&c, &v) in self.col_idx.iter().zip(&self.values) {
            let c = c as usize;
            if c < cols {
                if v > 0 {
                    counts[c].0 += 1;
                } else {
                    counts[c].1 += 1;
                }
            }
        }
        counts
    }
}
