//! Sparse operators, eigensolvers and Gram matrices.

mod eigen;
mod gram;
mod sparse;

pub use eigen::{
    dense_eigenvalues, dense_matrix, low_spectrum, lowest_eigenpair, random_unit, trace_of, Eigenpair,
    LinearOperator,
};
pub use gram::{gram, gram_from_reduced, GramMatrix};
pub use sparse::{SparseOperator, C64};

use crate::config::Tolerances;
use crate::error::{Error, Result};

/// Number of eigenvalues above 1/2 of an orthogonal projector.
pub fn projector_rank(p: &SparseOperator, tol: &Tolerances) -> Result<usize> {
    let res = p.projector_residual();
    if res > tol.rank_projector {
        return Err(Error::NotAProjector(res));
    }
    let t = p.trace().re;
    if (t - t.round()).abs() <= tol.rank_integrality {
        return Ok(t.round().max(0.0) as usize);
    }
    let ev = nalgebra::SymmetricEigen::new(p.to_dense()).eigenvalues;
    Ok(ev.iter().filter(|&&x| x > 0.5).count())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_examples() {
        let tol = Tolerances::default();
        assert_eq!(projector_rank(&SparseOperator::identity(8), &tol).unwrap(), 8);
        assert_eq!(projector_rank(&SparseOperator::zero(8), &tol).unwrap(), 0);
        let not = SparseOperator::diagonal(&[0.5, 1.0]);
        assert!(matches!(projector_rank(&not, &tol), Err(Error::NotAProjector(_))));
    }
}
