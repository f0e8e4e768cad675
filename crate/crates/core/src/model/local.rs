use crate::spectra::{SparseOperator, C64};
use nalgebra::DMatrix;

/// An operator on `arity` sites of dimension `radix`, indexed in mixed radix
/// with the first site least significant.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalOperator {
    pub radix: usize,
    pub arity: usize,
    kind: Kind,
}

#[derive(Debug, Clone, PartialEq)]
enum Kind {
    Diagonal(Vec<f64>),
    /// Column-compressed: column `l` holds `rows[ptr[l]..ptr[l+1]]`.
    Columns { ptr: Vec<u32>, rows: Vec<u32>, vals: Vec<C64> },
}

impl LocalOperator {
    pub fn local_dim(&self) -> usize {
        self.radix.pow(self.arity as u32)
    }

    pub fn diagonal(radix: usize, arity: usize, d: Vec<f64>) -> Self {
        assert_eq!(d.len(), radix.pow(arity as u32));
        LocalOperator { radix, arity, kind: Kind::Diagonal(d) }
    }

    /// Builds column by column; entries below `drop` are discarded.
    pub fn from_columns(radix: usize, arity: usize, drop: f64, mut col: impl FnMut(usize) -> Vec<(usize, C64)>) -> Self {
        let n = radix.pow(arity as u32);
        let mut ptr = Vec::with_capacity(n + 1);
        let mut rows = Vec::new();
        let mut vals = Vec::new();
        ptr.push(0);
        for l in 0..n {
            let mut c = col(l);
            c.sort_by_key(|e| e.0);
            let mut k = 0;
            while k < c.len() {
                let (r, mut v) = c[k];
                k += 1;
                while k < c.len() && c[k].0 == r {
                    v += c[k].1;
                    k += 1;
                }
                if v.norm() >= drop {
                    rows.push(r as u32);
                    vals.push(v);
                }
            }
            ptr.push(rows.len() as u32);
        }
        LocalOperator { radix, arity, kind: Kind::Columns { ptr, rows, vals } }
    }

    pub fn is_diagonal(&self) -> bool {
        matches!(self.kind, Kind::Diagonal(_))
    }

    /// Diagonal with every entry exactly 0 or 1: a constraint that can be
    /// imposed by enumeration.
    pub fn is_constraint(&self) -> bool {
        match &self.kind {
            Kind::Diagonal(d) => d.iter().all(|&x| x == 0.0 || x == 1.0),
            _ => false,
        }
    }

    pub fn diag_entry(&self, l: usize) -> Option<f64> {
        match &self.kind {
            Kind::Diagonal(d) => Some(d[l]),
            _ => None,
        }
    }

    /// Nonzero entries `(row, value)` of column `l`.
    pub fn column(&self, l: usize) -> Column<'_> {
        match &self.kind {
            Kind::Diagonal(d) => Column::Diag(if d[l] != 0.0 { Some((l, C64::new(d[l], 0.0))) } else { None }),
            Kind::Columns { ptr, rows, vals } => {
                let r = ptr[l] as usize..ptr[l + 1] as usize;
                Column::Csr(rows[r.clone()].iter().zip(vals[r].iter()))
            }
        }
    }

    pub fn nnz(&self) -> usize {
        match &self.kind {
            Kind::Diagonal(d) => d.iter().filter(|x| **x != 0.0).count(),
            Kind::Columns { vals, .. } => vals.len(),
        }
    }

    pub fn to_sparse(&self) -> SparseOperator {
        let n = self.local_dim();
        let t = (0..n).flat_map(|c| self.column(c).map(move |(r, v)| (r, c, v)));
        SparseOperator::from_triplets(n, t, false, 0.0, 0.0).unwrap()
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        self.to_sparse().to_dense()
    }

    /// `(||A^2 - A||_max, ||A - A^dagger||_max)`.
    pub fn projector_residuals(&self) -> (f64, f64) {
        if let Kind::Diagonal(d) = &self.kind {
            return (d.iter().map(|x| (x * x - x).abs()).fold(0.0, f64::max), 0.0);
        }
        let a = self.to_sparse();
        (a.projector_residual(), a.hermitian_residual())
    }
}

pub enum Column<'a> {
    Diag(Option<(usize, C64)>),
    Csr(std::iter::Zip<std::slice::Iter<'a, u32>, std::slice::Iter<'a, C64>>),
}

impl Iterator for Column<'_> {
    type Item = (usize, C64);

    fn next(&mut self) -> Option<(usize, C64)> {
        match self {
            Column::Diag(x) => x.take(),
            Column::Csr(it) => it.next().map(|(r, v)| (*r as usize, *v)),
        }
    }
}
