use super::sparse::{SparseOperator, C64};
use crate::config::Settings;
use crate::error::{Error, Result};
use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Anything that can be applied to a vector. Implementations must be
/// deterministic so results do not depend on who calls them.
pub trait LinearOperator: Sync {
    fn dim(&self) -> usize;
    /// Overwrites `y` with `A x`.
    fn apply(&self, x: &[C64], y: &mut [C64]);
}

impl LinearOperator for SparseOperator {
    fn dim(&self) -> usize {
        SparseOperator::dim(self)
    }

    fn apply(&self, x: &[C64], y: &mut [C64]) {
        self.apply_into(x, y)
    }
}

/// Materializes an operator column by column.
pub fn dense_matrix(op: &dyn LinearOperator) -> DMatrix<C64> {
    let n = op.dim();
    let mut m = DMatrix::zeros(n, n);
    let mut e = vec![C64::new(0.0, 0.0); n];
    let mut col = vec![C64::new(0.0, 0.0); n];
    for j in 0..n {
        e[j] = C64::new(1.0, 0.0);
        op.apply(&e, &mut col);
        for i in 0..n {
            m[(i, j)] = col[i];
        }
        e[j] = C64::new(0.0, 0.0);
    }
    m
}

/// `sum_i <e_i, A e_i>` by explicit application.
pub fn trace_of(op: &dyn LinearOperator) -> C64 {
    let n = op.dim();
    let mut e = vec![C64::new(0.0, 0.0); n];
    let mut col = vec![C64::new(0.0, 0.0); n];
    let mut t = C64::new(0.0, 0.0);
    for j in 0..n {
        e[j] = C64::new(1.0, 0.0);
        op.apply(&e, &mut col);
        t += col[j];
        e[j] = C64::new(0.0, 0.0);
    }
    t
}

/// All eigenvalues of a Hermitian operator, ascending.
pub fn dense_eigenvalues(op: &dyn LinearOperator, cap: usize) -> Result<Vec<f64>> {
    if op.dim() > cap {
        return Err(Error::cap("dense eigensolver", op.dim() as u128, cap as u128));
    }
    let m = dense_matrix(op);
    let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

#[derive(Debug, Clone)]
pub struct Eigenpair {
    pub value: f64,
    pub vector: Vec<C64>,
    /// `||A x - value x||` of the returned unit vector.
    pub residual: f64,
    pub iterations: usize,
}

pub(crate) fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub(crate) fn norm(a: &[C64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn axpy(alpha: C64, x: &[C64], y: &mut [C64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

fn orthogonalize(w: &mut [C64], basis: &[Vec<C64>]) {
    for _ in 0..2 {
        for b in basis {
            let c = dot(b, w);
            axpy(-c, b, w);
        }
    }
}

pub fn random_unit(n: usize, rng: &mut ChaCha8Rng) -> Vec<C64> {
    let mut v: Vec<C64> = (0..n).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let s = norm(&v);
    v.iter_mut().for_each(|x| *x /= s);
    v
}

/// Smallest eigenpair of a Hermitian operator on the orthogonal complement of
/// `deflate` (orthonormal, invariant under the operator). Lanczos with full
/// reorthogonalization and explicit restarts from the current Ritz vector.
pub fn lowest_eigenpair(op: &dyn LinearOperator, deflate: &[Vec<C64>], s: &Settings) -> Result<Eigenpair> {
    let n = op.dim();
    if deflate.len() >= n {
        return Err(Error::InvalidInput("nothing left after deflation".into()));
    }
    let m = s.caps.krylov.min(n - deflate.len()).max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    // a fresh start per deflation depth; reusing one start vector only ever
    // sees a single direction of each degenerate eigenspace
    rng.set_stream(deflate.len() as u64);
    let mut start = random_unit(n, &mut rng);
    let mut w = vec![C64::new(0.0, 0.0); n];
    let mut total = 0;
    for _ in 0..=s.caps.max_restarts {
        orthogonalize(&mut start, deflate);
        let nrm = norm(&start);
        if nrm < 1e-12 {
            start = random_unit(n, &mut rng);
            continue;
        }
        start.iter_mut().for_each(|x| *x /= nrm);
        let mut basis: Vec<Vec<C64>> = vec![start.clone()];
        let mut alpha = Vec::new();
        let mut beta: Vec<f64> = Vec::new();
        let mut breakdown = false;
        for j in 0..m {
            op.apply(&basis[j], &mut w);
            total += 1;
            let a = dot(&basis[j], &w).re;
            alpha.push(a);
            let hn = norm(&w);
            // deflation last, so the Krylov pass cannot bring the ground space back
            for _ in 0..2 {
                orthogonalize(&mut w, &basis);
                orthogonalize(&mut w, deflate);
            }
            let b = norm(&w);
            // an invariant subspace: what is left of w is rounding noise
            if b <= 1e-10 * hn || b < 1e-300 {
                breakdown = true;
                break;
            }
            if j + 1 < m {
                beta.push(b);
                basis.push(w.iter().map(|x| x / b).collect());
            } else {
                beta.push(b);
            }
        }
        let k = alpha.len();
        let mut t = DMatrix::<f64>::zeros(k, k);
        for i in 0..k {
            t[(i, i)] = alpha[i];
            if i + 1 < k {
                t[(i, i + 1)] = beta[i];
                t[(i + 1, i)] = beta[i];
            }
        }
        let eig = SymmetricEigen::new(t);
        let (idx, theta) = eig
            .eigenvalues
            .iter()
            .copied()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        let mut ritz = vec![C64::new(0.0, 0.0); n];
        for (i, b) in basis.iter().enumerate().take(k) {
            axpy(C64::new(eig.eigenvectors[(i, idx)], 0.0), b, &mut ritz);
        }
        let rn = norm(&ritz);
        ritz.iter_mut().for_each(|x| *x /= rn);
        op.apply(&ritz, &mut w);
        total += 1;
        let residual = w.iter().zip(&ritz).map(|(a, x)| (a - theta * x).norm_sqr()).sum::<f64>().sqrt();
        if residual <= s.tol.eigen_residual || (breakdown && residual <= 10.0 * s.tol.eigen_residual) {
            return Ok(Eigenpair { value: theta, vector: ritz, residual, iterations: total });
        }
        start = ritz;
    }
    Err(Error::NonConvergence(format!("Lanczos did not reach residual {:e} after {total} applications", s.tol.eigen_residual)))
}

/// The `k` smallest eigenvalues, ascending. Dense below the dense cap,
/// otherwise one deflated Lanczos solve per eigenvalue.
pub fn low_spectrum(op: &dyn LinearOperator, k: usize, s: &Settings) -> Result<Vec<f64>> {
    if k > op.dim() {
        return Err(Error::InvalidInput(format!("asked for {k} eigenvalues of a {}-dimensional operator", op.dim())));
    }
    if op.dim() <= s.caps.dense {
        return Ok(dense_eigenvalues(op, s.caps.dense)?.into_iter().take(k).collect());
    }
    let mut found: Vec<Vec<C64>> = Vec::new();
    let mut vals = Vec::new();
    for _ in 0..k {
        let p = lowest_eigenpair(op, &found, s)?;
        vals.push(p.value);
        found.push(p.vector);
    }
    Ok(vals)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(d: &[f64]) -> SparseOperator {
        SparseOperator::diagonal(d)
    }

    struct Dense(DMatrix<C64>);

    impl LinearOperator for Dense {
        fn dim(&self) -> usize {
            self.0.nrows()
        }

        fn apply(&self, x: &[C64], y: &mut [C64]) {
            let v = &self.0 * DMatrix::from_column_slice(x.len(), 1, x);
            y.copy_from_slice(v.as_slice());
        }
    }

    #[test]
    fn deflation_survives_an_exhausted_krylov_space() {
        // a dozen integer eigenvalues in a complex basis: Lanczos breaks down
        // after a dozen steps and must not drift back into the deflated vector
        let n = 240;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let z = DMatrix::<C64>::from_fn(n, n, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let q = z.qr().q();
        let d = DMatrix::<C64>::from_diagonal(&nalgebra::DVector::from_fn(n, |i, _| {
            C64::new(if i == 0 { 0.0 } else { (2 + i % 11) as f64 }, 0.0)
        }));
        let h = Dense(&q * d * q.adjoint());
        let ground: Vec<C64> = q.column(0).iter().copied().collect();
        let s = Settings::default();
        let p = lowest_eigenpair(&h, std::slice::from_ref(&ground), &s).unwrap();
        assert!((p.value - 2.0).abs() < 1e-10, "{}", p.value);
        assert!(dot(&ground, &p.vector).norm() < 1e-10);
    }

    #[test]
    fn iterative_path_resolves_degeneracy() {
        let d: Vec<f64> = (0..60).map(|i| if i % 20 == 0 { 0.0 } else { 1.0 + (i % 3) as f64 }).collect();
        let mut s = Settings::default();
        s.caps.dense = 8;
        assert_eq!(
            low_spectrum(&diag(&d), 4, &s).unwrap().iter().map(|x| x.round()).collect::<Vec<_>>(),
            vec![0.0, 0.0, 0.0, 1.0]
        );
    }

    #[test]
    fn dense_diagonal_example() {
        let s = Settings::default();
        assert_eq!(low_spectrum(&diag(&[0.0, 0.0, 1.0, 2.0]), 3, &s).unwrap(), vec![0.0, 0.0, 1.0]);
        assert_eq!(low_spectrum(&SparseOperator::identity(5), 1, &s).unwrap(), vec![1.0]);
    }

    #[test]
    fn lanczos_matches_dense_on_a_path_laplacian() {
        let n = 100;
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, C64::new(2.0, 0.0)));
            if i + 1 < n {
                t.push((i, i + 1, C64::new(-1.0, 0.0)));
                t.push((i + 1, i, C64::new(-1.0, 0.0)));
            }
        }
        let a = SparseOperator::from_triplets(n, t, true, 0.0, 1e-12).unwrap();
        let mut s = Settings::default();
        s.caps.dense = 8;
        s.caps.krylov = 60;
        s.caps.max_restarts = 2000;
        let lz = low_spectrum(&a, 2, &s).unwrap();
        let exact: Vec<f64> = (1..=2)
            .map(|k| 2.0 - 2.0 * (k as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos())
            .collect();
        for (x, y) in lz.iter().zip(&exact) {
            assert!((x - y).abs() < 1e-9, "{x} vs {y}");
        }
    }

    #[test]
    fn deflation_skips_known_vectors() {
        let a = diag(&[0.0, 1.0, 3.0, 4.0, 5.0]);
        let e0: Vec<C64> = (0..5).map(|i| C64::new((i == 0) as u8 as f64, 0.0)).collect();
        let p = lowest_eigenpair(&a, &[e0], &Settings::default()).unwrap();
        assert!((p.value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn dense_cap_is_enforced() {
        assert!(matches!(dense_eigenvalues(&SparseOperator::identity(10), 4), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn matrix_free_trace() {
        let a = diag(&[1.0, 2.0, 3.5]);
        assert_eq!(trace_of(&a), a.trace());
    }
}
