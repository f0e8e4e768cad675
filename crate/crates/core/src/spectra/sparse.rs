use crate::error::{Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;

pub type C64 = Complex64;

/// Square complex matrix in compressed-row form. Column indices are sorted
/// within each row and no coordinate repeats.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOperator {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<C64>,
    hermitian: bool,
}

impl SparseOperator {
    /// Sums duplicate coordinates, drops entries below `drop`, and if
    /// `hermitian` is set checks `||A - A^dagger||_max <= herm_tol`.
    pub fn from_triplets(
        dim: usize,
        triplets: impl IntoIterator<Item = (usize, usize, C64)>,
        hermitian: bool,
        drop: f64,
        herm_tol: f64,
    ) -> Result<Self> {
        let mut t: Vec<(usize, usize, C64)> = triplets.into_iter().collect();
        if let Some(&(i, j, _)) = t.iter().find(|(i, j, _)| *i >= dim || *j >= dim) {
            return Err(Error::InvalidInput(format!("entry ({i},{j}) outside dimension {dim}")));
        }
        t.sort_by_key(|&(i, j, _)| (i, j));
        let mut row_ptr = vec![0usize; dim + 1];
        let mut cols = Vec::with_capacity(t.len());
        let mut vals = Vec::with_capacity(t.len());
        let mut k = 0;
        while k < t.len() {
            let (i, j, mut v) = t[k];
            k += 1;
            while k < t.len() && t[k].0 == i && t[k].1 == j {
                v += t[k].2;
                k += 1;
            }
            if v.norm() >= drop {
                row_ptr[i + 1] += 1;
                cols.push(j);
                vals.push(v);
            }
        }
        for i in 0..dim {
            row_ptr[i + 1] += row_ptr[i];
        }
        let op = SparseOperator { dim, row_ptr, cols, vals, hermitian };
        if hermitian {
            let r = op.hermitian_residual();
            if r > herm_tol {
                return Err(Error::InvalidInput(format!("operator flagged Hermitian has residual {r:e}")));
            }
        }
        Ok(op)
    }

    pub fn identity(dim: usize) -> Self {
        SparseOperator {
            dim,
            row_ptr: (0..=dim).collect(),
            cols: (0..dim).collect(),
            vals: vec![C64::new(1.0, 0.0); dim],
            hermitian: true,
        }
    }

    pub fn zero(dim: usize) -> Self {
        SparseOperator { dim, row_ptr: vec![0; dim + 1], cols: Vec::new(), vals: Vec::new(), hermitian: true }
    }

    pub fn diagonal(d: &[f64]) -> Self {
        let t = d.iter().enumerate().map(|(i, &v)| (i, i, C64::new(v, 0.0)));
        SparseOperator::from_triplets(d.len(), t, true, 0.0, 0.0).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn is_hermitian_flagged(&self) -> bool {
        self.hermitian
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, C64)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[r.clone()].iter().copied().zip(self.vals[r].iter().copied())
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        (0..self.dim).flat_map(move |i| self.row(i).map(move |(j, v)| (i, j, v)))
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.cols[r.clone()].binary_search(&j) {
            Ok(k) => self.vals[r.start + k],
            Err(_) => C64::new(0.0, 0.0),
        }
    }

    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        let mut y = vec![C64::new(0.0, 0.0); self.dim];
        self.apply_into(x, &mut y);
        y
    }

    pub fn apply_into(&self, x: &[C64], y: &mut [C64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let mut s = C64::new(0.0, 0.0);
            for (j, v) in self.row(i) {
                s += v * x[j];
            }
            *yi = s;
        }
    }

    /// `self * other`, dropping entries below `drop`.
    pub fn compose(&self, other: &SparseOperator, drop: f64) -> Result<SparseOperator> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch(self.dim, other.dim));
        }
        let n = self.dim;
        let mut acc = vec![C64::new(0.0, 0.0); n];
        let mut mark = vec![false; n];
        let mut touched = Vec::new();
        let mut row_ptr = vec![0usize; n + 1];
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        for i in 0..n {
            for (k, a) in self.row(i) {
                for (j, b) in other.row(k) {
                    if !mark[j] {
                        mark[j] = true;
                        touched.push(j);
                    }
                    acc[j] += a * b;
                }
            }
            touched.sort_unstable();
            for &j in &touched {
                if acc[j].norm() >= drop {
                    cols.push(j);
                    vals.push(acc[j]);
                }
                acc[j] = C64::new(0.0, 0.0);
                mark[j] = false;
            }
            touched.clear();
            row_ptr[i + 1] = cols.len();
        }
        Ok(SparseOperator { dim: n, row_ptr, cols, vals, hermitian: false })
    }

    /// `alpha * self + beta * other`.
    pub fn add_scaled(&self, alpha: C64, other: &SparseOperator, beta: C64, drop: f64) -> Result<SparseOperator> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch(self.dim, other.dim));
        }
        let t = self
            .triplets()
            .map(|(i, j, v)| (i, j, alpha * v))
            .chain(other.triplets().map(|(i, j, v)| (i, j, beta * v)));
        let mut out = SparseOperator::from_triplets(self.dim, t, false, drop, 0.0)?;
        out.hermitian = self.hermitian && other.hermitian && alpha.im == 0.0 && beta.im == 0.0;
        Ok(out)
    }

    pub fn adjoint(&self) -> SparseOperator {
        let t = self.triplets().map(|(i, j, v)| (j, i, v.conj()));
        let mut out = SparseOperator::from_triplets(self.dim, t, false, 0.0, 0.0).unwrap();
        out.hermitian = self.hermitian;
        out
    }

    /// Largest entry of `|self - other|`.
    pub fn max_abs_diff(&self, other: &SparseOperator) -> Result<f64> {
        let d = self.add_scaled(C64::new(1.0, 0.0), other, C64::new(-1.0, 0.0), 0.0)?;
        Ok(d.vals.iter().map(|v| v.norm()).fold(0.0, f64::max))
    }

    pub fn hermitian_residual(&self) -> f64 {
        self.triplets().map(|(i, j, v)| (v - self.get(j, i).conj()).norm()).fold(0.0, f64::max)
    }

    /// `||A^2 - A||_max`.
    pub fn projector_residual(&self) -> f64 {
        let sq = self.compose(self, 0.0).expect("square");
        sq.max_abs_diff(self).expect("same dim")
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.vals.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (i, j, v) in self.triplets() {
            m[(i, j)] = v;
        }
        m
    }

    pub fn mark_hermitian(mut self, tol: f64) -> Result<Self> {
        let r = self.hermitian_residual();
        if r > tol {
            return Err(Error::InvalidInput(format!("operator is not Hermitian (residual {r:e})")));
        }
        self.hermitian = true;
        Ok(self)
    }
}
