//! Terms bound to sites of a product space, and the subspace and product
//! machinery shared by full models and their restrictions to a region.

use super::local::LocalOperator;
use crate::error::{Error, Result};
use crate::spectra::{LinearOperator, C64};
use std::ops::Deref;
use std::sync::Arc;

/// Leakage out of the enumerated subspace above this magnitude is an error.
const LEAK: f64 = 1e-12;

#[derive(Debug, Clone)]
pub(crate) struct BoundTerm {
    /// Site positions, in the order of the local operator's digits.
    pub sites: Vec<usize>,
    /// `offsets[l]` is the global index contribution of local configuration `l`.
    pub offsets: Vec<u64>,
    pub op: Arc<LocalOperator>,
}

/// Product-basis states spanning a subspace, with O(1) position lookup when
/// the ambient space is small enough for a table.
pub(crate) struct Subspace {
    states: Vec<u64>,
    lookup: Lookup,
}

enum Lookup {
    Table(Vec<u32>),
    Search,
}

/// Largest ambient dimension given a dense position table.
const TABLE_LIMIT: u128 = 1 << 25;

impl Subspace {
    /// `states` must be sorted and distinct.
    pub fn new(states: Vec<u64>, ambient: u128) -> Self {
        let lookup = if ambient <= TABLE_LIMIT && states.len() < u32::MAX as usize {
            let mut t = vec![u32::MAX; ambient as usize];
            for (i, &x) in states.iter().enumerate() {
                t[x as usize] = i as u32;
            }
            Lookup::Table(t)
        } else {
            Lookup::Search
        };
        Subspace { states, lookup }
    }

    #[inline]
    pub fn find(&self, x: u64) -> Option<usize> {
        match &self.lookup {
            Lookup::Table(t) => t.get(x as usize).copied().filter(|&i| i != u32::MAX).map(|i| i as usize),
            Lookup::Search => self.states.binary_search(&x).ok(),
        }
    }

    pub fn into_states(self) -> Vec<u64> {
        self.states
    }
}

impl Deref for Subspace {
    type Target = [u64];

    fn deref(&self) -> &[u64] {
        &self.states
    }
}

impl BoundTerm {
    /// Nonzero entries `(state, value)` of `h e_x`, given `l = local(x)`.
    #[inline]
    pub fn targets(&self, l: usize, x: u64) -> impl Iterator<Item = (u64, C64)> + '_ {
        let base = x - self.offsets[l];
        self.op.column(l).map(move |(r, v)| (base + self.offsets[r], v))
    }
}

/// Local terms on `n` sites of dimension `radix`.
#[derive(Debug, Clone)]
pub(crate) struct TermSystem {
    pub radix: u64,
    pub n: usize,
    pub pow: Vec<u64>,
    pub terms: Vec<BoundTerm>,
}

impl TermSystem {
    pub fn new(radix: usize, n: usize, terms: Vec<(Vec<usize>, Arc<LocalOperator>)>) -> Self {
        let radix = radix as u64;
        let mut pow = vec![1u64; n + 1];
        for i in 0..n {
            pow[i + 1] = pow[i].saturating_mul(radix);
        }
        let terms = terms
            .into_iter()
            .map(|(sites, op)| {
                let offsets = (0..op.local_dim())
                    .map(|mut l| {
                        let mut off = 0u64;
                        for &s in &sites {
                            off += (l as u64 % radix) * pow[s];
                            l /= radix as usize;
                        }
                        off
                    })
                    .collect();
                BoundTerm { sites, offsets, op }
            })
            .collect();
        TermSystem { radix, n, pow, terms }
    }

    pub fn dim(&self) -> u128 {
        (self.radix as u128).pow(self.n as u32)
    }

    #[inline]
    pub fn local(&self, t: &BoundTerm, x: u64) -> usize {
        let mut l = 0usize;
        let mut m = 1usize;
        for &s in &t.sites {
            l += ((x / self.pow[s]) % self.radix) as usize * m;
            m *= self.radix as usize;
        }
        l
    }

    /// `local(t, x)` for every state, by an odometer instead of divisions.
    pub fn local_table(&self, t: &BoundTerm) -> Vec<u32> {
        let mut coef = vec![0i64; self.n];
        let mut m = 1i64;
        for &s in &t.sites {
            coef[s] = m;
            m *= self.radix as i64;
        }
        let dim = self.dim() as usize;
        let mut out = Vec::with_capacity(dim);
        let mut digits = vec![0u64; self.n];
        let mut l = 0i64;
        for _ in 0..dim {
            out.push(l as u32);
            for i in 0..self.n {
                digits[i] += 1;
                l += coef[i];
                if digits[i] < self.radix {
                    break;
                }
                l -= self.radix as i64 * coef[i];
                digits[i] = 0;
            }
        }
        out
    }

    /// Basis states satisfying every 0/1 diagonal term, ascending. Sites are
    /// assigned in order and each constraint is tested as soon as its last
    /// site is fixed.
    pub fn constraint_subspace(&self, cap: u64) -> Result<Vec<u64>> {
        let mut by_last: Vec<Vec<usize>> = vec![Vec::new(); self.n];
        for (i, t) in self.terms.iter().enumerate() {
            if t.op.is_constraint() {
                match t.sites.iter().max() {
                    Some(&m) => by_last[m].push(i),
                    None => {
                        if t.op.diag_entry(0) == Some(0.0) {
                            return Ok(Vec::new());
                        }
                    }
                }
            }
        }
        let mut out = Vec::new();
        let mut digits = vec![0u64; self.n];
        self.dfs(0, 0, &mut digits, &by_last, cap, &mut out)?;
        out.sort_unstable();
        Ok(out)
    }

    fn dfs(
        &self,
        site: usize,
        x: u64,
        digits: &mut [u64],
        by_last: &[Vec<usize>],
        cap: u64,
        out: &mut Vec<u64>,
    ) -> Result<()> {
        if site == self.n {
            if out.len() as u64 >= cap {
                return Err(Error::cap("constraint subspace", out.len() as u128 + 1, cap as u128));
            }
            out.push(x);
            return Ok(());
        }
        for d in 0..self.radix {
            digits[site] = d;
            let y = x + d * self.pow[site];
            let ok = by_last[site].iter().all(|&i| {
                let t = &self.terms[i];
                t.op.diag_entry(self.local(t, y)) == Some(1.0)
            });
            if ok {
                self.dfs(site + 1, y, digits, by_last, cap, out)?;
            }
        }
        Ok(())
    }

    /// `y = h_t x` on the span of `basis` (sorted). Fails if the term leaks out.
    pub fn apply_on(&self, t: usize, basis: &Subspace, x: &[C64], y: &mut [C64]) -> Result<()> {
        let t = &self.terms[t];
        y.iter_mut().for_each(|v| *v = C64::new(0.0, 0.0));
        for (i, &xi) in x.iter().enumerate() {
            if xi == C64::new(0.0, 0.0) {
                continue;
            }
            let s = basis[i];
            let l = self.local(t, s);
            let base = s - t.offsets[l];
            for (r, v) in t.op.column(l) {
                let target = base + t.offsets[r];
                match basis.find(target) {
                    Some(j) => y[j] += v * xi,
                    None if (v * xi).norm() > LEAK => {
                        return Err(Error::Precondition(format!("term leaves the constraint subspace at state {s}")));
                    }
                    None => {}
                }
            }
        }
        Ok(())
    }

    /// Applies `h_{order[k-1]} ... h_{order[0]}` to a column of the subspace:
    /// `order[0]` acts first.
    pub fn apply_product_on(&self, order: &[usize], basis: &Subspace, x: &mut Vec<C64>, scratch: &mut Vec<C64>) -> Result<()> {
        scratch.resize(x.len(), C64::new(0.0, 0.0));
        for &t in order {
            self.apply_on(t, basis, x, scratch)?;
            std::mem::swap(x, scratch);
        }
        Ok(())
    }

    /// Sparse column `h_order... e_c`, entries sorted by subspace index.
    pub fn product_column(&self, order: &[usize], basis: &Subspace, c: usize, acc: &mut SparseAcc) -> Result<Vec<(usize, C64)>> {
        let mut cur = vec![(c, C64::new(1.0, 0.0))];
        for &ti in order {
            let t = &self.terms[ti];
            for &(i, xi) in &cur {
                let s = basis[i];
                let l = self.local(t, s);
                let base = s - t.offsets[l];
                for (r, v) in t.op.column(l) {
                    let target = base + t.offsets[r];
                    match basis.find(target) {
                        Some(j) => acc.add(j, v * xi),
                        None if (v * xi).norm() > LEAK => {
                            return Err(Error::Precondition(format!("term leaves the constraint subspace at state {s}")));
                        }
                        None => {}
                    }
                }
            }
            cur = acc.drain(0.0);
        }
        Ok(cur)
    }
}

/// Dense scratch accumulator that remembers which slots were touched.
pub(crate) struct SparseAcc {
    vals: Vec<C64>,
    mark: Vec<bool>,
    touched: Vec<usize>,
}

impl SparseAcc {
    pub fn new(n: usize) -> Self {
        SparseAcc { vals: vec![C64::new(0.0, 0.0); n], mark: vec![false; n], touched: Vec::new() }
    }

    #[inline]
    pub fn add(&mut self, i: usize, v: C64) {
        if !self.mark[i] {
            self.mark[i] = true;
            self.touched.push(i);
        }
        self.vals[i] += v;
    }

    /// Entries sorted by index, dropping magnitudes at or below `drop`.
    pub fn drain(&mut self, drop: f64) -> Vec<(usize, C64)> {
        self.touched.sort_unstable();
        let mut out = Vec::with_capacity(self.touched.len());
        for &i in &self.touched {
            if self.vals[i].norm() > drop {
                out.push((i, self.vals[i]));
            }
            self.vals[i] = C64::new(0.0, 0.0);
            self.mark[i] = false;
        }
        self.touched.clear();
        out
    }
}

/// `H = sum_t (1 - h_t)` applied on the full product space.
pub struct Hamiltonian<'a> {
    pub(crate) sys: &'a TermSystem,
    pub(crate) dim: usize,
}

impl LinearOperator for Hamiltonian<'_> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, x: &[C64], y: &mut [C64]) {
        let nt = self.sys.terms.len() as f64;
        for (yi, xi) in y.iter_mut().zip(x) {
            *yi = xi * nt;
        }
        for t in &self.sys.terms {
            for (s, &xs) in x.iter().enumerate() {
                if xs == C64::new(0.0, 0.0) {
                    continue;
                }
                let l = self.sys.local(t, s as u64);
                let base = s as u64 - t.offsets[l];
                for (r, v) in t.op.column(l) {
                    y[(base + t.offsets[r]) as usize] -= v * xs;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parity(arity: usize) -> Arc<LocalOperator> {
        let d = (0..1usize << arity).map(|l| (l.count_ones() % 2 == 0) as u8 as f64).collect();
        Arc::new(LocalOperator::diagonal(2, arity, d))
    }

    #[test]
    fn constraint_enumeration_matches_brute_force() {
        let sys = TermSystem::new(2, 5, vec![(vec![0, 2], parity(2)), (vec![1, 3, 4], parity(3))]);
        let got = sys.constraint_subspace(1 << 20).unwrap();
        let want: Vec<u64> = (0..32u64)
            .filter(|x| ((x >> 0) ^ (x >> 2)) & 1 == 0 && ((x >> 1) ^ (x >> 3) ^ (x >> 4)) & 1 == 0)
            .collect();
        assert_eq!(got, want);
        assert!(matches!(sys.constraint_subspace(3), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn offsets_follow_site_positions() {
        let sys = TermSystem::new(3, 4, vec![(vec![3, 1], Arc::new(LocalOperator::diagonal(3, 2, vec![1.0; 9])))]);
        // local digit 0 lives on site 3, digit 1 on site 1
        let t = &sys.terms[0];
        assert_eq!(t.offsets[1], 27);
        assert_eq!(t.offsets[3], 3);
        assert_eq!(sys.local(t, 27 + 3), 4);
    }
}
