//! Sparse symmetric storage and a direct solver sized for the structured
//! meshes of this crate: compressed rows for matrix-vector products,
//! reverse Cuthill-McKee ordering to shrink the envelope, and an in-place
//! profile (skyline) Cholesky factorization whose inner loops are
//! contiguous dot products.

use crate::{Error, Result};

/// Symmetric sparse matrix in compressed-row form storing the full pattern
/// (both triangles), which keeps matrix-vector products branch-free.
#[derive(Debug, Clone)]
pub struct CsrMatrix {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub col: Vec<usize>,
    pub val: Vec<f64>,
}

impl CsrMatrix {
    /// Build from unordered `(row, col, value)` triplets, summing duplicates.
    pub fn from_triplets(n: usize, mut triplets: Vec<(usize, usize, f64)>) -> Self {
        triplets.sort_unstable_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut row_ptr = vec![0usize; n + 1];
        let mut col = Vec::new();
        let mut val = Vec::new();
        for (r, c, v) in triplets {
            if col.len() > row_ptr[r] && row_ptr[r + 1] > row_ptr[r] && *col.last().unwrap() == c {
                *val.last_mut().unwrap() += v;
            } else {
                col.push(c);
                val.push(v);
            }
            row_ptr[r + 1] = col.len();
        }
        // Rows fill in order; carry forward the running offsets.
        for r in 0..n {
            if row_ptr[r + 1] < row_ptr[r] {
                row_ptr[r + 1] = row_ptr[r];
            }
        }
        CsrMatrix {
            n,
            row_ptr,
            col,
            val,
        }
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.n);
        debug_assert_eq!(y.len(), self.n);
        for r in 0..self.n {
            let mut acc = 0.0;
            for idx in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.val[idx] * x[self.col[idx]];
            }
            y[r] = acc;
        }
    }

    /// Largest relative asymmetry `|a_ij - a_ji| / max|a|`, for validation.
    pub fn symmetry_defect(&self) -> f64 {
        let scale = self
            .val
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()))
            .max(1e-300);
        let mut worst = 0.0f64;
        for r in 0..self.n {
            for idx in self.row_ptr[r]..self.row_ptr[r + 1] {
                let c = self.col[idx];
                if c < r {
                    continue;
                }
                let transposed = self.get(c, r);
                worst = worst.max((self.val[idx] - transposed).abs() / scale);
            }
        }
        worst
    }

    fn get(&self, r: usize, c: usize) -> f64 {
        let range = self.row_ptr[r]..self.row_ptr[r + 1];
        match self.col[range.clone()].binary_search(&c) {
            Ok(pos) => self.val[range.start + pos],
            Err(_) => 0.0,
        }
    }
}

/// Reverse Cuthill-McKee ordering of the pattern of `a`:
/// returns `perm` with `perm[new_index] = old_index`. Breadth-first from a
/// minimum-degree start, visiting neighbors by increasing degree, reversed.
pub fn rcm_order(a: &CsrMatrix) -> Vec<usize> {
    let n = a.n;
    let degree = |v: usize| a.row_ptr[v + 1] - a.row_ptr[v];
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    loop {
        let start = match (0..n).filter(|&v| !seen[v]).min_by_key(|&v| degree(v)) {
            Some(s) => s,
            None => break,
        };
        seen[start] = true;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut neighbors: Vec<usize> = (a.row_ptr[v]..a.row_ptr[v + 1])
                .map(|idx| a.col[idx])
                .filter(|&w| !seen[w])
                .collect();
            neighbors.sort_unstable_by_key(|&w| degree(w));
            for w in neighbors {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    order.reverse();
    order
}

/// Profile (skyline) Cholesky factor of a permuted SPD matrix. Each row
/// stores the contiguous span from its first nonzero column to the
/// diagonal; fill-in never leaves the envelope.
pub struct ProfileCholesky {
    n: usize,
    /// First stored column of each row.
    first: Vec<usize>,
    /// Start of each row's span in `data`; row i occupies
    /// `data[offset[i]..offset[i + 1]]` covering columns `first[i]..=i`.
    offset: Vec<usize>,
    data: Vec<f64>,
    /// perm[new] = old.
    perm: Vec<usize>,
}

impl ProfileCholesky {
    /// Factor `a` under the given ordering (`perm[new] = old`).
    pub fn factor(a: &CsrMatrix, perm: Vec<usize>) -> Result<Self> {
        let n = a.n;
        let mut iperm = vec![0usize; n];
        for (new, &old) in perm.iter().enumerate() {
            iperm[old] = new;
        }
        // Envelope of the permuted matrix.
        let mut first: Vec<usize> = (0..n).collect();
        for old_r in 0..n {
            let new_r = iperm[old_r];
            for idx in a.row_ptr[old_r]..a.row_ptr[old_r + 1] {
                let new_c = iperm[a.col[idx]];
                if new_c < new_r {
                    first[new_r] = first[new_r].min(new_c);
                }
            }
        }
        let mut offset = vec![0usize; n + 1];
        for i in 0..n {
            offset[i + 1] = offset[i] + (i - first[i] + 1);
        }
        let mut data = vec![0.0f64; offset[n]];
        for old_r in 0..n {
            let new_r = iperm[old_r];
            for idx in a.row_ptr[old_r]..a.row_ptr[old_r + 1] {
                let new_c = iperm[a.col[idx]];
                if new_c <= new_r {
                    data[offset[new_r] + (new_c - first[new_r])] = a.val[idx];
                }
            }
        }

        // In-place factorization; the inner accumulations run over
        // contiguous overlapping spans of rows i and j.
        for i in 0..n {
            let (head, tail) = data.split_at_mut(offset[i]);
            let row_i = &mut tail[..(i - first[i] + 1)];
            for j in first[i]..i {
                let row_j = &head[offset[j]..offset[j + 1]];
                let lo = first[i].max(first[j]);
                let s: f64 = row_i[(lo - first[i])..(j - first[i])]
                    .iter()
                    .zip(&row_j[(lo - first[j])..(j - first[j])])
                    .map(|(x, y)| x * y)
                    .sum();
                let djj = row_j[j - first[j]];
                row_i[j - first[i]] = (row_i[j - first[i]] - s) / djj;
            }
            let s: f64 = row_i[..(i - first[i])].iter().map(|x| x * x).sum();
            let d = row_i[i - first[i]] - s;
            if !(d > 0.0) || !d.is_finite() {
                return Err(Error::Solver(format!(
                    "Cholesky pivot {d} at row {i}: pencil is not positive definite"
                )));
            }
            row_i[i - first[i]] = d.sqrt();
        }
        Ok(ProfileCholesky {
            n,
            first,
            offset,
            data,
            perm,
        })
    }

    /// Solve `A x = b` using the stored factor and ordering.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut y = vec![0.0f64; n];
        for i in 0..n {
            y[i] = b[self.perm[i]];
        }
        // Forward substitution L y' = y.
        for i in 0..n {
            let row = &self.data[self.offset[i]..self.offset[i + 1]];
            let f = self.first[i];
            let s: f64 = row[..(i - f)]
                .iter()
                .zip(&y[f..i])
                .map(|(l, v)| l * v)
                .sum();
            y[i] = (y[i] - s) / row[i - f];
        }
        // Backward substitution L^T x' = y', as column saxpy updates.
        for i in (0..n).rev() {
            let row = &self.data[self.offset[i]..self.offset[i + 1]];
            let f = self.first[i];
            let xi = y[i] / row[i - f];
            y[i] = xi;
            for (l, v) in row[..(i - f)].iter().zip(y[f..i].iter_mut()) {
                *v -= l * xi;
            }
        }
        let mut x = vec![0.0f64; n];
        for i in 0..n {
            x[self.perm[i]] = y[i];
        }
        x
    }

    /// Stored envelope size (diagnostic).
    pub fn profile_len(&self) -> usize {
        self.data.len()
    }
}
