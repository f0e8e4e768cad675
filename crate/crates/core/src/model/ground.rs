//! Ground spaces as explicit orthonormal bases on the constraint subspace,
//! and the partial traces built from them.

use super::system::{SparseAcc, Subspace, TermSystem};
use super::{LatticeModel, LocalOperator};
use crate::config::Settings;
use crate::error::{Error, Result};
use crate::spectra::C64;
use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

const ZERO: C64 = C64::new(0.0, 0.0);

/// Orthonormal basis `Psi` of `P = prod h`, stored on the states that satisfy
/// every 0/1 diagonal term (outside them `P` vanishes).
#[derive(Debug, Clone)]
pub struct GroundSpace {
    /// Sorted product-basis states of the constraint subspace.
    pub basis: Vec<u64>,
    /// `|basis| x rank`, orthonormal columns.
    pub vectors: DMatrix<C64>,
    /// `tr P`, summed column by column.
    pub trace: f64,
    /// `max_c ||P e_c - Psi Psi^dagger e_c||`.
    pub projector_residual: f64,
    /// `max_t ||h_t Psi - Psi||_F`.
    pub frustration: f64,
    radix: u64,
    pow: Vec<u64>,
}

/// `T[a*q + b]_{ij} = sum_y conj(psi_i(a, y)) psi_j(b, y)` for the
/// configurations `a, b` of a set of edges and `y` of the rest.
#[derive(Debug, Clone)]
pub struct ReducedBlocks {
    pub edges: Vec<usize>,
    pub q: usize,
    pub blocks: Vec<DMatrix<C64>>,
}

impl ReducedBlocks {
    /// `Psi^dagger (O (x) 1) Psi` for a local operator `O` on `edges`.
    pub fn compress(&self, o: &LocalOperator) -> DMatrix<C64> {
        let r = self.blocks.first().map_or(0, |b| b.nrows());
        let mut m = DMatrix::zeros(r, r);
        for b in 0..self.q {
            for (a, v) in o.column(b) {
                m += &self.blocks[a * self.q + b] * v;
            }
        }
        m
    }
}

impl GroundSpace {
    pub fn rank(&self) -> usize {
        self.vectors.ncols()
    }

    pub(crate) fn compute(m: &LatticeModel, s: &Settings) -> Result<GroundSpace> {
        let sys = &m.sys;
        let basis = Subspace::new(m.constraint_subspace(&s.caps)?, sys.dim());
        let order: Vec<usize> = m.product_order().into_iter().filter(|&i| !m.terms[i].op.is_constraint()).collect();
        let nc = basis.len();
        let mut acc = SparseAcc::new(nc);

        // the probes give the rank and a basis; one exact pass over the
        // columns then confirms tr P and P = Psi Psi^dagger together
        let vectors = match range_finder(sys, &order, &basis, s.caps.ground_rank, s.seed)? {
            Some(v) => v,
            None => {
                let defect = idempotence_probe(sys, &order, &basis, s.seed)?;
                if defect > s.tol.rank_projector {
                    return Err(Error::NotAProjector(defect));
                }
                return Err(Error::cap("ground-space rank", s.caps.ground_rank as u128 + 1, s.caps.ground_rank as u128));
            }
        };
        let rank = vectors.ncols();
        let mut trace = 0.0;
        let mut projector_residual = 0.0f64;
        let mut expect = vec![ZERO; nc];
        for c in 0..nc {
            let pc: Vec<C64> = vectors.row(c).iter().map(|x| x.conj()).collect();
            for (i, e) in expect.iter_mut().enumerate() {
                *e = (0..rank).map(|k| vectors[(i, k)] * pc[k]).sum();
            }
            for (j, v) in sys.product_column(&order, &basis, c, &mut acc)? {
                if j == c {
                    trace += v.re;
                }
                expect[j] -= v;
            }
            projector_residual = projector_residual.max(expect.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt());
        }
        let defect = projector_residual.max((trace - rank as f64).abs());
        if projector_residual > s.tol.rank_projector || (trace - rank as f64).abs() > s.tol.rank_integrality {
            return Err(Error::NotAProjector(defect));
        }

        let mut frustration = 0.0f64;
        let mut x = vec![ZERO; nc];
        let mut y = vec![ZERO; nc];
        for t in 0..sys.terms.len() {
            let mut sq = 0.0;
            for k in 0..rank {
                x.iter_mut().zip(vectors.column(k).iter()).for_each(|(a, b)| *a = *b);
                sys.apply_on(t, &basis, &x, &mut y)?;
                sq += y.iter().zip(&x).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>();
            }
            frustration = frustration.max(sq.sqrt());
        }

        Ok(GroundSpace { basis: basis.into_states(), vectors, trace, projector_residual, frustration, radix: sys.radix, pow: sys.pow.clone() })
    }

    /// Ground vectors on the full product space, for deflation.
    pub fn embedded(&self, dim: usize) -> Vec<Vec<C64>> {
        (0..self.rank())
            .map(|k| {
                let mut v = vec![ZERO; dim];
                for (i, &s) in self.basis.iter().enumerate() {
                    v[s as usize] = self.vectors[(i, k)];
                }
                v
            })
            .collect()
    }

    /// Splits each basis state into (configuration on `edges`, rest).
    fn split(&self, edges: &[usize]) -> Vec<(u64, usize, usize)> {
        let mut keyed: Vec<(u64, usize, usize)> = self
            .basis
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let mut a = 0usize;
                let mut m = 1usize;
                let mut rest = x;
                for &e in edges {
                    let d = (x / self.pow[e]) % self.radix;
                    a += d as usize * m;
                    m *= self.radix as usize;
                    rest -= d * self.pow[e];
                }
                (rest, a, i)
            })
            .collect();
        keyed.sort_unstable();
        keyed
    }

    fn groups(keyed: &[(u64, usize, usize)]) -> impl Iterator<Item = &[(u64, usize, usize)]> {
        keyed.chunk_by(|p, q| p.0 == q.0)
    }

    fn check_edges(&self, edges: &[usize], cap: u64) -> Result<usize> {
        let set: BTreeSet<usize> = edges.iter().copied().collect();
        if set.len() != edges.len() || edges.iter().any(|&e| e + 1 >= self.pow.len()) {
            return Err(Error::InvalidInput("region edges must be distinct and in range".into()));
        }
        let q = (self.radix as u128).pow(edges.len() as u32);
        if q * q > cap as u128 {
            return Err(Error::cap("operator basis", q * q, cap as u128));
        }
        Ok(q as usize)
    }

    pub fn blocks(&self, edges: &[usize], s: &Settings) -> Result<ReducedBlocks> {
        let q = self.check_edges(edges, s.caps.operator_basis)?;
        let r = self.rank();
        let mut blocks = vec![DMatrix::zeros(r, r); q * q];
        let keyed = self.split(edges);
        for g in Self::groups(&keyed) {
            for &(_, a, i) in g {
                let left = self.vectors.row(i).map(|x| x.conj());
                for &(_, b, j) in g {
                    let right = self.vectors.row(j);
                    blocks[a * q + b] += left.transpose() * right;
                }
            }
        }
        Ok(ReducedBlocks { edges: edges.to_vec(), q, blocks })
    }

    /// `R[a][b] = <a| tr_rest P |b>` over the configurations of `edges`.
    pub fn reduced(&self, edges: &[usize], s: &Settings) -> Result<DMatrix<C64>> {
        let q = self.check_edges(edges, s.caps.operator_basis)?;
        let mut red = DMatrix::zeros(q, q);
        let keyed = self.split(edges);
        for g in Self::groups(&keyed) {
            for &(_, a, i) in g {
                for &(_, b, j) in g {
                    red[(a, b)] += self.vectors.row(i).dot(&self.vectors.row(j).map(|x| x.conj()));
                }
            }
        }
        Ok(red)
    }
}

/// Orthonormal basis of the range of `P` from `cap + 4` random probes: the
/// rank is the number of Gram eigenvalues above `1e-8` of the largest.
/// `None` when the rank exceeds `cap` (or the product is not a projector).
fn range_finder(sys: &TermSystem, order: &[usize], basis: &Subspace, cap: usize, seed: u64) -> Result<Option<DMatrix<C64>>> {
    let n = basis.len();
    let k = (cap + 4).min(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9);
    let mut y = DMatrix::<C64>::zeros(n, k);
    let mut scratch = Vec::new();
    for j in 0..k {
        let mut x: Vec<C64> = (0..n).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        sys.apply_product_on(order, basis, &mut x, &mut scratch)?;
        y.column_mut(j).iter_mut().zip(x).for_each(|(a, b)| *a = b);
    }
    let eig = SymmetricEigen::new(y.adjoint() * &y);
    let mut idx: Vec<usize> = (0..k).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let top = idx.first().map_or(0.0, |&i| eig.eigenvalues[i]);
    let r = idx.iter().take_while(|&&i| eig.eigenvalues[i] > 1e-8 * top && top > 0.0).count();
    if r > cap {
        return Ok(None);
    }
    let mut psi = DMatrix::<C64>::zeros(n, r);
    for (c, &i) in idx.iter().take(r).enumerate() {
        let v = eig.eigenvectors.column(i);
        psi.set_column(c, &((&y * v) / C64::new(eig.eigenvalues[i].sqrt(), 0.0)));
    }
    // one more Gram-Schmidt sweep to clean up rounding
    for c in 0..r {
        for p in 0..c {
            let d = psi.column(p).dotc(&psi.column(c));
            let pc = psi.column(p).into_owned();
            psi.column_mut(c).axpy(-d, &pc, C64::new(1.0, 0.0));
        }
        let nrm = psi.column(c).norm();
        psi.column_mut(c).unscale_mut(nrm);
    }
    Ok(Some(psi))
}

/// `||P^2 x - P x|| / ||x||` for one random probe.
fn idempotence_probe(sys: &TermSystem, order: &[usize], basis: &Subspace, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x: Vec<C64> = (0..basis.len()).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let nx = x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    let mut scratch = Vec::new();
    let mut once = x;
    sys.apply_product_on(order, basis, &mut once, &mut scratch)?;
    let mut twice = once.clone();
    sys.apply_product_on(order, basis, &mut twice, &mut scratch)?;
    Ok(twice.iter().zip(&once).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt() / nx)
}

impl LatticeModel {
    /// `tr_{rest} P_B` restricted to the edges `a`, where `P_B` is the product
    /// of the terms supported inside `b`. Requires `a` to be a subset of `b`.
    pub fn reduced_region_projector(&self, a: &[usize], b: &[usize], s: &Settings) -> Result<DMatrix<C64>> {
        let bset: BTreeSet<usize> = b.iter().copied().collect();
        if let Some(e) = a.iter().find(|e| !bset.contains(e)) {
            return Err(Error::InvalidInput(format!("edge {e} of the inner region is not in the outer one")));
        }
        let local: Vec<usize> = bset.iter().copied().collect();
        let pos = |e: usize| local.binary_search(&e).unwrap();
        let inner: Vec<(Vec<usize>, std::sync::Arc<LocalOperator>)> = self
            .terms
            .iter()
            .filter(|t| t.support.iter().all(|e| bset.contains(e)))
            .map(|t| (t.support.iter().map(|&e| pos(e)).collect(), t.op.clone()))
            .collect();
        let sys = TermSystem::new(self.radix, local.len(), inner);
        let basis = Subspace::new(sys.constraint_subspace(s.caps.matrix_free)?, sys.dim());
        let order: Vec<usize> = (0..sys.terms.len()).filter(|&i| !sys.terms[i].op.is_constraint()).collect();
        let q = (self.radix as u128).pow(a.len() as u32);
        if q * q > s.caps.operator_basis as u128 {
            return Err(Error::cap("operator basis", q * q, s.caps.operator_basis as u128));
        }
        let a_local: Vec<usize> = a.iter().map(|&e| pos(e)).collect();
        let split = |x: u64| {
            let mut c = 0usize;
            let mut m = 1usize;
            let mut rest = x;
            for &e in &a_local {
                let d = (x / sys.pow[e]) % sys.radix;
                c += d as usize * m;
                m *= sys.radix as usize;
                rest -= d * sys.pow[e];
            }
            (c, rest)
        };
        let mut red = DMatrix::zeros(q as usize, q as usize);
        let mut acc = SparseAcc::new(basis.len());
        for c in 0..basis.len() {
            let (ac, rc) = split(basis[c]);
            for (j, v) in sys.product_column(&order, &basis, c, &mut acc)? {
                let (aj, rj) = split(basis[j]);
                if rj == rc {
                    red[(aj, ac)] += v;
                }
            }
        }
        let outside = (self.radix as f64).powi((self.complex.n_edges() - local.len()) as i32);
        Ok(red * C64::new(outside, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::super::{Term, TermKind};
    use super::*;
    use crate::complex::{build_standard, Family, SurfaceTag};
    use std::sync::Arc;

    /// Edges 0 and 1 of a one-cell torus: parity constraint plus a flip average.
    fn bell() -> LatticeModel {
        let c = build_standard(SurfaceTag::Torus, Family::SquareTorus, 1).unwrap();
        let h = C64::new(0.5, 0.0);
        let flip = LocalOperator::from_columns(2, 2, 0.0, |l| vec![(l, h), (3 - l, h)]);
        let par = LocalOperator::diagonal(2, 2, vec![1.0, 0.0, 0.0, 1.0]);
        let terms = vec![
            Term { kind: TermKind::Vertex, cell: 0, support: vec![0, 1], op: Arc::new(flip) },
            Term { kind: TermKind::Face, cell: 0, support: vec![0, 1], op: Arc::new(par) },
        ];
        LatticeModel::new(c, 2, terms, "bell".into(), &Settings::default().caps).unwrap()
    }

    #[test]
    fn bell_state_ground_space() {
        let s = Settings::default();
        let m = bell();
        let g = m.ground_space(&s).unwrap();
        assert_eq!(g.rank(), 1);
        assert!((g.trace - 1.0).abs() < 1e-12);
        assert!(g.projector_residual < 1e-12 && g.frustration < 1e-12);
        let r = g.reduced(&[0], &s).unwrap();
        assert!((r[(0, 0)].re - 0.5).abs() < 1e-12 && r[(0, 1)].norm() < 1e-12);
        let explicit = m.ground_projector_explicit(&s).unwrap();
        assert!((explicit.trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn blocks_give_compressed_operators() {
        let s = Settings::default();
        let g = bell().ground_space(&s).unwrap();
        let b = g.blocks(&[1], &s).unwrap();
        let x = LocalOperator::from_columns(2, 1, 0.0, |l| vec![(1 - l, C64::new(1.0, 0.0))]);
        let z = LocalOperator::diagonal(2, 1, vec![1.0, -1.0]);
        // Bell pair: <X1> = 0, <Z1> = 0, identity = 1
        assert!(b.compress(&x)[(0, 0)].norm() < 1e-12);
        assert!(b.compress(&z)[(0, 0)].norm() < 1e-12);
        let r = g.reduced(&[1], &s).unwrap();
        assert!((r.trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn region_projector_of_everything_matches_ground_space() {
        let s = Settings::default();
        let m = bell();
        let g = m.ground_space(&s).unwrap();
        let all: Vec<usize> = (0..m.complex.n_edges()).collect();
        let a = m.reduced_region_projector(&[0], &all, &s).unwrap();
        assert!((a - g.reduced(&[0], &s).unwrap()).norm() < 1e-12);
        assert!(m.reduced_region_projector(&[0, 1], &[0], &s).is_err());
    }

    #[test]
    fn non_projector_is_reported() {
        let c = build_standard(SurfaceTag::Torus, Family::SquareTorus, 1).unwrap();
        let bad = LocalOperator::diagonal(2, 1, vec![1.0, 0.3]);
        let terms = vec![Term { kind: TermKind::Face, cell: 0, support: vec![0], op: Arc::new(bad) }];
        let m = LatticeModel::new(c, 2, terms, "bad".into(), &Settings::default().caps).unwrap();
        assert!(matches!(m.ground_space(&Settings::default()), Err(Error::NotAProjector(x)) if x > 0.1));
    }
}
