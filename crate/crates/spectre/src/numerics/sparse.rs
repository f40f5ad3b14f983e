//! Minimal sparse storage used internally by the cone solver.

#[derive(Clone, Debug)]
pub(crate) struct CsrMatrix {
    pub nrows: usize,
    pub ncols: usize,
    pub row_ptr: Vec<usize>,
    pub cols: Vec<usize>,
    pub vals: Vec<f64>,
}

impl CsrMatrix {
    /// Rows given as sparse term lists; duplicate columns within a row are summed.
    pub fn from_rows(ncols: usize, rows: &[Vec<(usize, f64)>]) -> Self {
        let mut row_ptr = Vec::with_capacity(rows.len() + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for r in rows {
            let mut terms = r.clone();
            terms.sort_by_key(|t| t.0);
            let mut last: Option<usize> = None;
            for (c, v) in terms {
                if last == Some(c) {
                    *vals.last_mut().unwrap() += v;
                } else {
                    cols.push(c);
                    vals.push(v);
                    last = Some(c);
                }
            }
            row_ptr.push(cols.len());
        }
        CsrMatrix { nrows: rows.len(), ncols, row_ptr, cols, vals }
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        (self.row_ptr[i]..self.row_ptr[i + 1]).map(move |k| (self.cols[k], self.vals[k]))
    }

    pub fn row_mut(&mut self, i: usize) -> (&[usize], &mut [f64]) {
        let (a, b) = (self.row_ptr[i], self.row_ptr[i + 1]);
        (&self.cols[a..b], &mut self.vals[a..b])
    }

    pub fn mul_vec(&self, x: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate().take(self.nrows) {
            *o = self.row(i).map(|(c, v)| v * x[c]).sum();
        }
    }

    pub fn mul_t_vec(&self, y: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        for (i, &yi) in y.iter().enumerate().take(self.nrows) {
            if yi != 0.0 {
                for (c, v) in self.row(i) {
                    out[c] += v * yi;
                }
            }
        }
    }

    /// Largest `|i − j|` over column pairs sharing a row, i.e. the half-bandwidth of `AᵀA`.
    pub fn gram_bandwidth(&self) -> usize {
        (0..self.nrows)
            .map(|i| {
                let r = &self.cols[self.row_ptr[i]..self.row_ptr[i + 1]];
                match (r.iter().min(), r.iter().max()) {
                    (Some(a), Some(b)) => b - a,
                    _ => 0,
                }
            })
            .max()
            .unwrap_or(0)
    }
}

/// Cholesky factor of a symmetric positive definite band matrix, lower band storage.
#[derive(Clone, Debug)]
pub(crate) struct BandCholesky {
    n: usize,
    bw: usize,
    // l[i * (bw + 1) + k] = L[i][i - k]
    l: Vec<f64>,
}

impl BandCholesky {
    /// Factors `σI + ρ AᵀA`.
    pub fn factor_normal(a: &CsrMatrix, sigma: f64, rho: f64) -> Option<Self> {
        let n = a.ncols;
        let bw = a.gram_bandwidth();
        let w = bw + 1;
        let mut band = vec![0.0; n * w];
        for i in 0..n {
            band[i * w] = sigma;
        }
        for r in 0..a.nrows {
            let s = a.row_ptr[r];
            let e = a.row_ptr[r + 1];
            for p in s..e {
                for q in s..e {
                    let (ci, cj) = (a.cols[p], a.cols[q]);
                    if ci >= cj {
                        band[ci * w + (ci - cj)] += rho * a.vals[p] * a.vals[q];
                    }
                }
            }
        }
        for i in 0..n {
            let jmin = i.saturating_sub(bw);
            for j in jmin..=i {
                let mut sum = band[i * w + (i - j)];
                let kmin = jmin.max(j.saturating_sub(bw));
                for k in kmin..j {
                    sum -= band[i * w + (i - k)] * band[j * w + (j - k)];
                }
                if i == j {
                    if sum <= 0.0 || !sum.is_finite() {
                        return None;
                    }
                    band[i * w] = sum.sqrt();
                } else {
                    band[i * w + (i - j)] = sum / band[j * w];
                }
            }
        }
        Some(BandCholesky { n, bw, l: band })
    }

    pub fn solve_in_place(&self, b: &mut [f64]) {
        let w = self.bw + 1;
        for i in 0..self.n {
            let mut s = b[i];
            for k in i.saturating_sub(self.bw)..i {
                s -= self.l[i * w + (i - k)] * b[k];
            }
            b[i] = s / self.l[i * w];
        }
        for i in (0..self.n).rev() {
            let mut s = b[i];
            for k in (i + 1)..(i + self.bw + 1).min(self.n) {
                s -= self.l[k * w + (k - i)] * b[k];
            }
            b[i] = s / self.l[i * w];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn band_solve_matches_dense() {
        // A = [[1,2,0],[0,1,-1],[3,0,1]]; K = I + AᵀA
        let a = CsrMatrix::from_rows(
            3,
            &[vec![(0, 1.0), (1, 2.0)], vec![(1, 1.0), (2, -1.0)], vec![(0, 3.0), (2, 1.0)]],
        );
        let f = BandCholesky::factor_normal(&a, 1.0, 1.0).unwrap();
        let k = [[11.0, 2.0, 3.0], [2.0, 6.0, -1.0], [3.0, -1.0, 3.0]];
        let x = [0.5, -1.0, 2.0];
        let mut b: Vec<f64> = (0..3).map(|i| (0..3).map(|j| k[i][j] * x[j]).sum()).collect();
        f.solve_in_place(&mut b);
        for i in 0..3 {
            assert!((b[i] - x[i]).abs() < 1e-12);
        }
    }
}
