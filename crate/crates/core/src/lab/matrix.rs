use std::fmt::Write as _;

use crate::error::{Error, Result};

/// A square matrix of any scalar, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Clone> DenseMatrix<T> {
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        DenseMatrix { n, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("matrix rows must all have length N".into()));
        }
        Ok(DenseMatrix { n, data: rows.into_iter().flatten().collect() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.n + j]
    }
}

/// Real symmetric matrix in one of three storage forms.
#[derive(Clone, Debug, PartialEq)]
pub enum SymMatrix {
    Dense(DenseMatrix<f64>),
    /// `S - shift * (J - I)` with `S` sparse (both triangles stored, CSR)
    /// and `J` the all-ones matrix.
    Sparse { n: usize, row_ptr: Vec<usize>, col: Vec<usize>, val: Vec<f64>, shift: f64 },
    Diagonal(Vec<f64>),
}

impl SymMatrix {
    /// Sparse form from upper-triangle triples `(i, j, v)` with `i < j`.
    pub fn sparse_from_upper(n: usize, entries: &[(usize, usize, f64)], shift: f64) -> Self {
        let mut deg = vec![0usize; n];
        for &(i, j, _) in entries {
            deg[i] += 1;
            deg[j] += 1;
        }
        let mut row_ptr = vec![0usize; n + 1];
        for i in 0..n {
            row_ptr[i + 1] = row_ptr[i] + deg[i];
        }
        let mut fill = row_ptr.clone();
        let mut col = vec![0usize; row_ptr[n]];
        let mut val = vec![0f64; row_ptr[n]];
        for &(i, j, v) in entries {
            for (a, b) in [(i, j), (j, i)] {
                col[fill[a]] = b;
                val[fill[a]] = v;
                fill[a] += 1;
            }
        }
        for i in 0..n {
            let (s, e) = (row_ptr[i], row_ptr[i + 1]);
            let mut pairs: Vec<(usize, f64)> = col[s..e].iter().copied().zip(val[s..e].iter().copied()).collect();
            pairs.sort_by_key(|p| p.0);
            for (k, (c, v)) in pairs.into_iter().enumerate() {
                col[s + k] = c;
                val[s + k] = v;
            }
        }
        SymMatrix::Sparse { n, row_ptr, col, val, shift }
    }

    pub fn n(&self) -> usize {
        match self {
            SymMatrix::Dense(d) => d.n(),
            SymMatrix::Sparse { n, .. } => *n,
            SymMatrix::Diagonal(d) => d.len(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        match self {
            SymMatrix::Dense(d) => *d.get(i, j),
            SymMatrix::Sparse { row_ptr, col, val, shift, .. } => {
                let (s, e) = (row_ptr[i], row_ptr[i + 1]);
                let v = col[s..e].binary_search(&j).map_or(0.0, |k| val[s + k]);
                if i == j {
                    v
                } else {
                    v - shift
                }
            }
            SymMatrix::Diagonal(d) => {
                if i == j {
                    d[i]
                } else {
                    0.0
                }
            }
        }
    }

    /// `out = M v`.
    pub fn matvec(&self, v: &[f64], out: &mut [f64]) {
        match self {
            SymMatrix::Dense(d) => {
                let n = d.n();
                for (i, o) in out.iter_mut().enumerate() {
                    *o = d.data[i * n..(i + 1) * n].iter().zip(v).map(|(a, b)| a * b).sum();
                }
            }
            SymMatrix::Sparse { row_ptr, col, val, shift, .. } => {
                let total: f64 = v.iter().sum();
                for (i, o) in out.iter_mut().enumerate() {
                    let mut acc = 0.0;
                    for k in row_ptr[i]..row_ptr[i + 1] {
                        acc += val[k] * v[col[k]];
                    }
                    *o = acc - shift * (total - v[i]);
                }
            }
            SymMatrix::Diagonal(d) => {
                for ((o, a), b) in out.iter_mut().zip(d).zip(v) {
                    *o = a * b;
                }
            }
        }
    }

    /// `out = M e_i`.
    pub fn column(&self, i: usize, out: &mut [f64]) {
        match self {
            SymMatrix::Dense(d) => {
                let n = d.n();
                out.copy_from_slice(&d.data[i * n..(i + 1) * n]);
            }
            SymMatrix::Sparse { row_ptr, col, val, shift, .. } => {
                out.fill(-shift);
                out[i] = 0.0;
                for k in row_ptr[i]..row_ptr[i + 1] {
                    out[col[k]] += val[k];
                }
            }
            SymMatrix::Diagonal(d) => {
                out.fill(0.0);
                out[i] = d[i];
            }
        }
    }

    pub fn to_dense(&self) -> DenseMatrix<f64> {
        DenseMatrix::from_fn(self.n(), |i, j| self.get(i, j))
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.n();
        (0..n).all(|i| (i + 1..n).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// CSV export: a header line `N,<n>` followed by `n` rows, row-major,
    /// values in shortest round-trip form.
    pub fn to_csv(&self) -> String {
        let n = self.n();
        let mut s = format!("N,{n}\n");
        for i in 0..n {
            for j in 0..n {
                if j > 0 {
                    s.push(',');
                }
                write!(s, "{:?}", self.get(i, j)).expect("writing to a string");
            }
            s.push('\n');
        }
        s
    }
}

/// Largest singular value by power iteration on `MᵀM`.
pub fn operator_norm(m: &SymMatrix, rel_tol: f64) -> f64 {
    let n = m.n();
    if n == 0 {
        return 0.0;
    }
    // Fixed, non-degenerate start vector.
    let mut v: Vec<f64> = (0..n).map(|i| 1.0 + ((i as f64 + 1.0) * 0.618_033_988_749_895).fract()).collect();
    let mut w = vec![0.0; n];
    let mut u = vec![0.0; n];
    let mut est = 0.0f64;
    for _ in 0..100_000 {
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        v.iter_mut().for_each(|x| *x /= norm);
        m.matvec(&v, &mut w);
        let next = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        m.matvec(&w, &mut u);
        std::mem::swap(&mut v, &mut u);
        if (next - est).abs() <= rel_tol * next {
            return next;
        }
        est = next;
    }
    est
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sparse_with_shift_matches_dense() {
        let s = SymMatrix::sparse_from_upper(4, &[(0, 1, 1.0), (1, 3, 1.0)], 0.25);
        let d = SymMatrix::Dense(s.to_dense());
        assert_eq!(s.get(0, 1), 0.75);
        assert_eq!(s.get(0, 2), -0.25);
        assert_eq!(s.get(2, 2), 0.0);
        let v = [1.0, -2.0, 0.5, 3.0];
        let (mut a, mut b) = ([0.0; 4], [0.0; 4]);
        s.matvec(&v, &mut a);
        d.matvec(&v, &mut b);
        for k in 0..4 {
            assert!((a[k] - b[k]).abs() < 1e-12);
        }
        s.column(1, &mut a);
        d.column(1, &mut b);
        assert_eq!(a, b);
        assert!(s.is_symmetric());
    }

    #[test]
    fn norms() {
        let d = SymMatrix::Diagonal(vec![1.0, -3.0, 2.0]);
        assert!((operator_norm(&d, 1e-12) - 3.0).abs() < 1e-9);
        let m = SymMatrix::Dense(DenseMatrix::from_rows(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap());
        assert!((operator_norm(&m, 1e-12) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn csv_header() {
        let d = SymMatrix::Diagonal(vec![1.0, 0.5]);
        assert_eq!(d.to_csv(), "N,2\n1.0,0.0\n0.0,0.5\n");
    }
}
