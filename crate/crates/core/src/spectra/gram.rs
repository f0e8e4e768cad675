use super::sparse::{SparseOperator, C64};
use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector, SymmetricEigen};

/// Hermitian positive-semidefinite matrix `G_ij = tr(O_i^dagger O_j P)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    pub matrix: DMatrix<C64>,
    pub provenance: String,
}

impl GramMatrix {
    pub fn size(&self) -> usize {
        self.matrix.nrows()
    }

    /// Eigenvalues ascending with matching eigenvector columns.
    pub fn eigen(&self) -> (Vec<f64>, DMatrix<C64>) {
        let eig = SymmetricEigen::new(self.matrix.clone());
        let mut order: Vec<usize> = (0..self.size()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vecs = DMatrix::from_fn(self.size(), self.size(), |r, c| eig.eigenvectors[(r, order[c])]);
        (vals, vecs)
    }

    /// Spectral norm, which for a PSD matrix is its largest eigenvalue.
    pub fn norm(&self) -> f64 {
        self.eigen().0.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Most negative eigenvalue, clipped at zero.
    pub fn psd_violation(&self) -> f64 {
        (-self.eigen().0.first().copied().unwrap_or(0.0)).max(0.0)
    }

    /// Orthonormal eigenvectors whose eigenvalues are at most `rel * ||G||`.
    pub fn null_space(&self, rel: f64) -> Vec<DVector<C64>> {
        let (vals, vecs) = self.eigen();
        let cut = rel * vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        vals.iter()
            .enumerate()
            .filter(|(_, &v)| v <= cut)
            .map(|(i, _)| vecs.column(i).into_owned())
            .collect()
    }

    /// `c^dagger G c`.
    pub fn quadratic_form(&self, c: &DVector<C64>) -> f64 {
        (c.adjoint() * &self.matrix * c)[(0, 0)].re
    }
}

/// `G_ij = tr(O_i^dagger O_j P)` for explicit operators.
pub fn gram(ops: &[SparseOperator], p: &SparseOperator, provenance: &str) -> Result<GramMatrix> {
    let n = ops.len();
    if let Some(o) = ops.iter().find(|o| o.dim() != p.dim()) {
        return Err(Error::DimMismatch(o.dim(), p.dim()));
    }
    let prods: Vec<SparseOperator> = ops.iter().map(|o| o.compose(p, 0.0)).collect::<Result<_>>()?;
    let mut m = DMatrix::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            let mut s = C64::new(0.0, 0.0);
            for (r, c, v) in ops[i].triplets() {
                s += v.conj() * prods[j].get(r, c);
            }
            m[(i, j)] = s;
        }
    }
    Ok(GramMatrix { matrix: m, provenance: provenance.to_string() })
}

/// Gram matrix of the full matrix-unit basis `|a><b|` on a subsystem, given
/// the partial trace `R = tr_rest(P)` of the projector onto that subsystem.
/// Basis order is `a` major, `b` minor. Because
/// `tr((|a><b|)^dagger |c><d| P) = delta_ac R[d][b]`, the matrix is block
/// diagonal with `q^|A|` copies of `R^T`.
pub fn gram_from_reduced(r: &DMatrix<C64>, provenance: &str) -> GramMatrix {
    let d = r.nrows();
    let mut m = DMatrix::zeros(d * d, d * d);
    for a in 0..d {
        for b in 0..d {
            for dd in 0..d {
                m[(a * d + b, a * d + dd)] = r[(dd, b)];
            }
        }
    }
    GramMatrix { matrix: m, provenance: provenance.to_string() }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(n: usize, a: usize, b: usize) -> SparseOperator {
        SparseOperator::from_triplets(n, [(a, b, C64::new(1.0, 0.0))], false, 0.0, 0.0).unwrap()
    }

    #[test]
    fn identity_gram_is_rank() {
        let mut p = vec![0.0; 6];
        p[1] = 1.0;
        p[4] = 1.0;
        let g = gram(&[SparseOperator::identity(6)], &SparseOperator::diagonal(&p), "id").unwrap();
        assert_eq!(g.matrix[(0, 0)], C64::new(2.0, 0.0));
    }

    #[test]
    fn matrix_units_with_identity_projector() {
        let ops: Vec<_> = (0..2).flat_map(|a| (0..2).map(move |b| unit(2, a, b))).collect();
        let g = gram(&ops, &SparseOperator::identity(2), "units").unwrap();
        assert_eq!(g.matrix, DMatrix::identity(4, 4).map(|x: f64| C64::new(x, 0.0)));
        assert!(g.null_space(1e-8).is_empty());
    }

    #[test]
    fn reduced_form_agrees_with_explicit() {
        // P projects onto (|0> + |1>)/sqrt2 on a single qubit
        let h = C64::new(0.5, 0.0);
        let p = SparseOperator::from_triplets(2, [(0, 0, h), (0, 1, h), (1, 0, h), (1, 1, h)], true, 0.0, 0.0).unwrap();
        let ops: Vec<_> = (0..2).flat_map(|a| (0..2).map(move |b| unit(2, a, b))).collect();
        let g = gram(&ops, &p, "explicit").unwrap();
        let r = p.to_dense();
        let g2 = gram_from_reduced(&r, "reduced");
        assert!((&g.matrix - &g2.matrix).norm() < 1e-15);
        // O = |a><0| - |a><1| annihilates P
        assert_eq!(g2.null_space(1e-8).len(), 2);
        assert!(g2.psd_violation() < 1e-15);
    }
}
