//! Commuting-projector models: local terms on the edges of a cell complex.

mod ground;
mod local;
mod system;

pub use ground::{GroundSpace, ReducedBlocks};
pub use local::LocalOperator;
pub use system::Hamiltonian;
pub(crate) use system::TermSystem;

use crate::complex::CellComplex;
use crate::config::{Caps, Settings};
use crate::error::{Error, Result};
use crate::spectra::{SparseOperator, C64};
use std::fmt;
use std::sync::Arc;

/// Vertex terms are gauge averages (DW) or fusion constraints (LW); face terms
/// are flatness constraints (DW) or plaquette projectors (LW).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TermKind {
    Vertex,
    Face,
}

impl fmt::Display for TermKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TermKind::Vertex => "vertex",
            TermKind::Face => "face",
        })
    }
}

#[derive(Debug, Clone)]
pub struct Term {
    pub kind: TermKind,
    /// Index of the vertex or face the term belongs to.
    pub cell: usize,
    /// Edges acted on, in the digit order of `op`.
    pub support: Vec<usize>,
    pub op: Arc<LocalOperator>,
}

/// An operator on a few edges, identity elsewhere.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionOperator {
    pub edges: Vec<usize>,
    pub op: LocalOperator,
}

#[derive(Debug, Clone)]
pub struct LatticeModel {
    pub complex: CellComplex,
    /// Local dimension of every edge.
    pub radix: usize,
    pub terms: Vec<Term>,
    /// Short text such as `dw/Z2`.
    pub descriptor: String,
    pub(crate) sys: TermSystem,
}

impl LatticeModel {
    pub fn new(complex: CellComplex, radix: usize, terms: Vec<Term>, descriptor: String, caps: &Caps) -> Result<Self> {
        let dim = (radix as u128).checked_pow(complex.n_edges() as u32).unwrap_or(u128::MAX);
        if dim > caps.matrix_free as u128 {
            return Err(Error::cap("Hilbert space dimension", dim, caps.matrix_free as u128));
        }
        let sys = TermSystem::new(radix, complex.n_edges(), terms.iter().map(|t| (t.support.clone(), t.op.clone())).collect());
        Ok(LatticeModel { complex, radix, terms, descriptor, sys })
    }

    pub fn dim(&self) -> u128 {
        self.sys.dim()
    }

    pub fn count(&self, kind: TermKind) -> usize {
        self.terms.iter().filter(|t| t.kind == kind).count()
    }

    /// Terms in the order they act when forming the ground projector:
    /// 0/1 diagonal constraints first, then the rest, each group in term order.
    pub fn product_order(&self) -> Vec<usize> {
        let (mut c, n): (Vec<usize>, Vec<usize>) = (0..self.terms.len()).partition(|&i| self.terms[i].op.is_constraint());
        c.extend(n);
        c
    }

    fn full_dim(&self, caps: &Caps) -> Result<usize> {
        let d = self.dim();
        if d > caps.full_matrix as u128 {
            return Err(Error::cap("explicit operator dimension", d, caps.full_matrix as u128));
        }
        Ok(d as usize)
    }

    /// A local operator padded with identity, as an explicit matrix.
    pub fn embed(&self, support: &[usize], op: &LocalOperator, caps: &Caps) -> Result<SparseOperator> {
        let n = self.full_dim(caps)?;
        let sys = TermSystem::new(self.radix, self.complex.n_edges(), vec![(support.to_vec(), Arc::new(op.clone()))]);
        let t = &sys.terms[0];
        let mut trip = Vec::new();
        for x in 0..n as u64 {
            let l = sys.local(t, x);
            let base = x - t.offsets[l];
            for (r, v) in op.column(l) {
                trip.push(((base + t.offsets[r]) as usize, x as usize, v));
            }
        }
        SparseOperator::from_triplets(n, trip, false, 0.0, 0.0)
    }

    pub fn term_operator(&self, i: usize, caps: &Caps) -> Result<SparseOperator> {
        self.embed(&self.terms[i].support, &self.terms[i].op, caps)
    }

    /// `P` as an explicit product of the embedded terms in `product_order`.
    pub fn ground_projector_explicit(&self, s: &Settings) -> Result<SparseOperator> {
        let n = self.full_dim(&s.caps)?;
        let mut p = SparseOperator::identity(n);
        for i in self.product_order() {
            p = self.term_operator(i, &s.caps)?.compose(&p, s.tol.drop)?;
        }
        let r = p.hermitian_residual();
        if r <= s.tol.hermitian {
            p = p.mark_hermitian(s.tol.hermitian)?;
        }
        Ok(p)
    }

    /// `H = sum (1 - h)` as an explicit matrix.
    pub fn hamiltonian_explicit(&self, s: &Settings) -> Result<SparseOperator> {
        let n = self.full_dim(&s.caps)?;
        let mut h = SparseOperator::zero(n);
        let one = C64::new(1.0, 0.0);
        for i in 0..self.terms.len() {
            let t = self.term_operator(i, &s.caps)?;
            h = h.add_scaled(one, &SparseOperator::identity(n), one, s.tol.drop)?;
            h = h.add_scaled(one, &t, -one, s.tol.drop)?;
        }
        Ok(h)
    }

    /// Apply-only Hamiltonian on the full product space.
    pub fn hamiltonian(&self, caps: &Caps) -> Result<Hamiltonian<'_>> {
        let d = self.dim();
        if d > caps.matrix_free as u128 {
            return Err(Error::cap("matrix-free dimension", d, caps.matrix_free as u128));
        }
        Ok(Hamiltonian { sys: &self.sys, dim: d as usize })
    }

    /// Basis states satisfying every 0/1 diagonal term.
    pub fn constraint_subspace(&self, caps: &Caps) -> Result<Vec<u64>> {
        self.sys.constraint_subspace(caps.matrix_free)
    }

    /// Matrix units `|a><b|` on the edges of `region`, `a` major.
    pub fn local_operator_basis(&self, edges: &[usize], caps: &Caps) -> Result<Vec<RegionOperator>> {
        if let Some(&e) = edges.iter().find(|&&e| e >= self.complex.n_edges()) {
            return Err(Error::InvalidInput(format!("edge {e} out of range")));
        }
        let d = (self.radix as u128).pow(edges.len() as u32);
        if d * d > caps.operator_basis as u128 {
            return Err(Error::cap("operator basis", d * d, caps.operator_basis as u128));
        }
        let d = d as usize;
        let mut out = Vec::with_capacity(d * d);
        for a in 0..d {
            for b in 0..d {
                let op = LocalOperator::from_columns(self.radix, edges.len(), 0.0, |l| {
                    if l == b {
                        vec![(a, C64::new(1.0, 0.0))]
                    } else {
                        Vec::new()
                    }
                });
                out.push(RegionOperator { edges: edges.to_vec(), op });
            }
        }
        Ok(out)
    }

    /// The ground space restricted to the constraint subspace.
    pub fn ground_space(&self, s: &Settings) -> Result<GroundSpace> {
        GroundSpace::compute(self, s)
    }
}
