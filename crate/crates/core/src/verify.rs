//! Numerical checks of the topological-order conditions on assembled models.
//!
//! Every check returns a [`VerificationReport`] whose outcome is derived from
//! its residuals, so a report cannot claim a pass its numbers do not support.

use crate::algebra::FiniteGroup;
use crate::complex::{DiskRegion, Region};
use crate::config::Settings;
use crate::error::{Error, Result};
use crate::model::{GroundSpace, LatticeModel, TermSystem};
use crate::spectra::{dense_eigenvalues, lowest_eigenpair, C64};
use nalgebra::{DMatrix, SymmetricEigen};
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    pub name: String,
    pub value: f64,
    pub tol: f64,
}

impl Residual {
    /// NaN never passes.
    pub fn ok(&self) -> bool {
        self.value <= self.tol
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub check: String,
    pub model: String,
    pub params: Vec<(String, String)>,
    pub residuals: Vec<Residual>,
    pub scalars: Vec<(String, String)>,
    pub timestamp: String,
    pub seed: u64,
}

impl VerificationReport {
    pub fn new(check: &str, model: &str, s: &Settings) -> Self {
        VerificationReport {
            check: check.to_string(),
            model: model.to_string(),
            params: Vec::new(),
            residuals: Vec::new(),
            scalars: Vec::new(),
            timestamp: String::new(),
            seed: s.seed,
        }
    }

    pub fn passed(&self) -> bool {
        self.residuals.iter().all(Residual::ok)
    }

    pub fn param(&mut self, k: &str, v: impl fmt::Display) {
        self.params.push((k.to_string(), v.to_string()));
    }

    pub fn scalar(&mut self, k: &str, v: impl fmt::Display) {
        self.scalars.push((k.to_string(), v.to_string()));
    }

    pub fn residual(&mut self, name: &str, value: f64, tol: f64) {
        self.residuals.push(Residual { name: name.to_string(), value, tol });
    }

    pub fn residual_value(&self, name: &str) -> Option<f64> {
        self.residuals.iter().find(|r| r.name == name).map(|r| r.value)
    }

    pub fn scalar_value(&self, name: &str) -> Option<&str> {
        self.scalars.iter().find(|s| s.0 == name).map(|s| s.1.as_str())
    }

    /// Largest residual relative to its tolerance, with its name.
    pub fn worst(&self) -> Option<&Residual> {
        self.residuals.iter().max_by(|a, b| (a.value / a.tol.max(f64::MIN_POSITIVE)).total_cmp(&(b.value / b.tol.max(f64::MIN_POSITIVE))))
    }
}

/// Either a ground space, or how far the product of terms is from a projector.
#[derive(Debug, Clone)]
pub enum Ground {
    Space(GroundSpace),
    Defect(f64),
}

impl Ground {
    pub fn compute(m: &LatticeModel, s: &Settings) -> Result<Ground> {
        match m.ground_space(s) {
            Ok(g) => Ok(Ground::Space(g)),
            Err(Error::NotAProjector(x)) => Ok(Ground::Defect(x)),
            Err(e) => Err(e),
        }
    }

    pub fn space(&self) -> Option<&GroundSpace> {
        match self {
            Ground::Space(g) => Some(g),
            Ground::Defect(_) => None,
        }
    }
}

/// `max |[h_i, h_j]|` entry over the union of the two supports.
pub fn commutator_residual(m: &LatticeModel, i: usize, j: usize, s: &Settings) -> Result<f64> {
    let (a, b) = (&m.terms[i], &m.terms[j]);
    if a.op.is_diagonal() && b.op.is_diagonal() {
        return Ok(0.0);
    }
    if !a.support.iter().any(|e| b.support.contains(e)) {
        return Ok(0.0);
    }
    let mut u: Vec<usize> = a.support.iter().chain(&b.support).copied().collect();
    u.sort_unstable();
    u.dedup();
    let pos = |sup: &[usize]| sup.iter().map(|e| u.binary_search(e).unwrap()).collect::<Vec<_>>();
    let sys = TermSystem::new(m.radix, u.len(), vec![(pos(&a.support), a.op.clone()), (pos(&b.support), b.op.clone())]);
    let dim = sys.dim();
    if dim > s.caps.matrix_free as u128 {
        return Err(Error::cap("commutator support dimension", dim, s.caps.matrix_free as u128));
    }
    let (ta, tb) = (&sys.terms[0], &sys.terms[1]);
    let (la, lb) = (sys.local_table(ta), sys.local_table(tb));
    let mut worst = 0.0f64;
    if a.op.is_diagonal() || b.op.is_diagonal() {
        // [D, B]_{rc} = (D_r - D_c) B_{rc}
        let (td, ld, to, lo) = if a.op.is_diagonal() { (ta, &la, tb, &lb) } else { (tb, &lb, ta, &la) };
        let diag = |x: u64| td.op.diag_entry(ld[x as usize] as usize).unwrap();
        for x in 0..dim as u64 {
            let dx = diag(x);
            for (y, v) in to.targets(lo[x as usize] as usize, x) {
                worst = worst.max(((diag(y) - dx) * v).norm_sqr());
            }
        }
        return Ok(worst.sqrt());
    }
    let mut diff = vec![C64::new(0.0, 0.0); dim as usize];
    let mut touched = Vec::new();
    for x in 0..dim as u64 {
        for (y, v) in tb.targets(lb[x as usize] as usize, x) {
            for (z, w) in ta.targets(la[y as usize] as usize, y) {
                diff[z as usize] += w * v;
                touched.push(z as usize);
            }
        }
        for (y, v) in ta.targets(la[x as usize] as usize, x) {
            for (z, w) in tb.targets(lb[y as usize] as usize, y) {
                diff[z as usize] -= w * v;
                touched.push(z as usize);
            }
        }
        for &k in &touched {
            worst = worst.max(diff[k].norm_sqr());
        }
        for &k in &touched {
            diff[k] = C64::new(0.0, 0.0);
        }
        touched.clear();
    }
    Ok(worst.sqrt())
}

/// Lowest excitation energy of `H = sum (1 - h)` above a frustration-free
/// ground space, and the largest distance of computed eigenvalues from an
/// integer. Dense below the dense cap, otherwise deflated Lanczos.
pub fn spectral_gap(m: &LatticeModel, g: &GroundSpace, s: &Settings) -> Result<(f64, f64)> {
    let h = m.hamiltonian(&s.caps)?;
    let dim = m.dim() as usize;
    if g.rank() >= dim {
        return Err(Error::InvalidInput("ground space is the whole space; no gap".into()));
    }
    if dim <= s.caps.dense {
        let ev = dense_eigenvalues(&h, s.caps.dense)?;
        let integrality = ev.iter().map(|x| (x - x.round()).abs()).fold(0.0, f64::max);
        let gap = ev.iter().copied().find(|&x| x > ev[0] + 0.5).unwrap_or(f64::NAN) - ev[0];
        return Ok((gap, integrality));
    }
    let mut s2 = s.clone();
    let budget = (512usize << 20) / (16 * dim);
    s2.caps.krylov = budget.clamp(8, s.caps.krylov.max(8));
    let deflate = g.embedded(dim);
    let p = lowest_eigenpair(&h, &deflate, &s2)?;
    Ok((p.value, (p.value - p.value.round()).abs()))
}

/// Projectors, commutators, frustration-freeness and the spectral gap.
pub fn check_tqo0(m: &LatticeModel, s: &Settings) -> Result<VerificationReport> {
    let ground = Ground::compute(m, s)?;
    check_tqo0_with(m, &ground, s)
}

pub fn check_tqo0_with(m: &LatticeModel, ground: &Ground, s: &Settings) -> Result<VerificationReport> {
    let mut r = VerificationReport::new("tqo0", &m.descriptor, s);
    r.param("dim", m.dim());
    r.param("terms", m.terms.len());
    let (mut idem, mut herm) = (0.0f64, 0.0f64);
    for t in &m.terms {
        let (p, h) = t.op.projector_residuals();
        idem = idem.max(p);
        herm = herm.max(h);
    }
    r.residual("term_projector", idem, s.tol.projector);
    r.residual("term_hermitian", herm, s.tol.projector);
    let mut comm = 0.0f64;
    for i in 0..m.terms.len() {
        for j in i + 1..m.terms.len() {
            comm = comm.max(commutator_residual(m, i, j, s)?);
        }
    }
    r.residual("commutator", comm, s.tol.commutator);
    match ground {
        Ground::Defect(x) => {
            r.residual("ground_projector", *x, s.tol.rank_projector);
            r.scalar("gsd", "undefined");
        }
        Ground::Space(g) => {
            r.residual("ground_projector", g.projector_residual, s.tol.rank_projector);
            r.residual("frustration", g.frustration, s.tol.frustration);
            r.residual("ground_nonzero", if g.rank() == 0 { 1.0 } else { 0.0 }, 0.0);
            r.scalar("gsd", g.rank());
            if g.rank() as u128 == m.dim() {
                // H = 0: no excited states, the gap bound holds vacuously
                r.scalar("gap", "none");
                r.residual("gap_below_one", 0.0, s.tol.gap);
            } else if g.rank() > 0 {
                let (gap, integ) = spectral_gap(m, g, s)?;
                r.scalar("gap", format!("{gap:.12}"));
                // gap >= 1 on an integral spectrum
                r.residual("gap_below_one", (1.0 - gap).max(0.0), s.tol.gap);
                r.residual("spectrum_integrality", integ, s.tol.gap);
            }
        }
    }
    Ok(r)
}

/// The theorem's hypothesis: refuse rather than fail when it does not hold.
fn tqo1_refuse(region: &Region, disk: &DiskRegion) -> Result<()> {
    if !disk.encloses(region) {
        return Err(Error::RegionNotADisk(format!(
            "region {:?} is not inside the interior of the certified disk",
            region.edges
        )));
    }
    Ok(())
}

/// For each matrix unit `O = |a><b|` on `region`: `lambda = tr(POP)/rank` and
/// `||POP - lambda P||_F / max(1, ||O||_F)`, with the operator norm taken on
/// the region.
pub fn check_tqo1(m: &LatticeModel, ground: &Ground, region: &Region, disk: &DiskRegion, s: &Settings) -> Result<VerificationReport> {
    tqo1_refuse(region, disk)?;
    let mut r = VerificationReport::new("tqo1", &m.descriptor, s);
    r.param("region", join(&region.edges));
    r.param("disk_faces", join(&disk.faces));
    let g = match ground {
        Ground::Defect(x) => {
            r.residual("ground_projector", *x, s.tol.rank_projector);
            return Ok(r);
        }
        Ground::Space(g) => g,
    };
    let blocks = g.blocks(&region.edges, s)?;
    let rank = g.rank();
    let q = blocks.q;
    let mut worst = 0.0f64;
    for a in 0..q {
        for b in 0..q {
            let t = &blocks.blocks[a * q + b];
            let lam = if rank > 0 { t.trace() / C64::new(rank as f64, 0.0) } else { C64::new(0.0, 0.0) };
            let res = (t - DMatrix::<C64>::identity(rank, rank) * lam).norm();
            r.scalar(&format!("op.{a}.{b}.lambda"), fmt_c(lam));
            r.scalar(&format!("op.{a}.{b}.residual"), format!("{res:.3e}"));
            worst = worst.max(res);
        }
    }
    r.scalar("operators", q * q);
    r.residual("max_residual", worst, s.tol.tqo1);
    Ok(r)
}

/// Null space of `G_P` contained in that of `G_{P_B}`, for the matrix-unit
/// basis on `a`. `G = 1 (x) R^T` with `R` the partial trace of the projector,
/// so the check runs on `R` itself.
pub fn check_tqo2(m: &LatticeModel, ground: &Ground, a: &Region, b: &DiskRegion, s: &Settings) -> Result<VerificationReport> {
    if !a.is_subset_of(&b.region) {
        return Err(Error::Precondition("region A is not contained in disk B".into()));
    }
    let mut r = VerificationReport::new("tqo2", &m.descriptor, s);
    r.param("region_a", join(&a.edges));
    r.param("disk_b_faces", join(&b.faces));
    let g = match ground {
        Ground::Defect(x) => {
            r.residual("ground_projector", *x, s.tol.rank_projector);
            return Ok(r);
        }
        Ground::Space(g) => g,
    };
    let rp = g.reduced(&a.edges, s)?.transpose();
    let rb = m.reduced_region_projector(&a.edges, &b.region.edges, s)?.transpose();
    let (np, vp) = hermitian_eigen(&rp);
    let (nb, _) = hermitian_eigen(&rb);
    let norm_p = np.iter().fold(0.0f64, |x, v| x.max(v.abs()));
    let norm_b = nb.iter().fold(0.0f64, |x, v| x.max(v.abs()));
    let q = rp.nrows();
    let mut worst = 0.0f64;
    let mut null = 0;
    for (i, &lam) in np.iter().enumerate() {
        if lam <= s.tol.null_space * norm_p {
            null += 1;
            let c = vp.column(i);
            let val = (c.adjoint() * &rb * c)[(0, 0)].re;
            worst = worst.max(val / norm_b.max(f64::MIN_POSITIVE));
        }
    }
    r.scalar("gram_size", q * q);
    r.scalar("null_dim", q * null);
    r.scalar("norm_g_p", format!("{norm_p:.12e}"));
    r.scalar("norm_g_pb", format!("{norm_b:.12e}"));
    r.scalar("terms_in_b", m.terms.iter().filter(|t| t.support.iter().all(|e| b.region.contains_edge(*e))).count());
    r.residual("containment", worst, s.tol.tqo2);
    Ok(r)
}

fn hermitian_eigen(m: &DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let e = SymmetricEigen::new(h);
    (e.eigenvalues.iter().copied().collect(), e.eigenvectors)
}

/// Ground-space degeneracy on each cellulation; passes when all agree.
pub fn check_tqo3(surface: &str, algebra: &str, models: &[(String, LatticeModel)], s: &Settings) -> Result<VerificationReport> {
    if models.len() < 2 {
        return Err(Error::InvalidInput("TQO3 needs at least two cellulations".into()));
    }
    let mut r = VerificationReport::new("tqo3", algebra, s);
    r.param("surface", surface);
    let mut ranks = Vec::new();
    for (label, m) in models {
        match Ground::compute(m, s)? {
            Ground::Space(g) => {
                r.scalar(&format!("gsd.{label}"), g.rank());
                ranks.push(g.rank() as f64);
            }
            Ground::Defect(x) => {
                r.scalar(&format!("gsd.{label}"), "undefined");
                r.residual(&format!("ground_projector.{label}"), x, s.tol.rank_projector);
            }
        }
    }
    let spread = ranks.iter().fold(f64::MIN, |a, &b| a.max(b)) - ranks.iter().fold(f64::MAX, |a, &b| a.min(b));
    r.residual("gsd_spread", if ranks.is_empty() { f64::NAN } else { spread }, 0.0);
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Distance {
    Exact(usize),
    AtLeast(usize),
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Exact(d) => write!(f, "{d}"),
            Distance::AtLeast(d) => write!(f, ">= {d}"),
        }
    }
}

/// A generator and the exponent of every element, for a cyclic group.
fn cyclic_structure(g: &FiniteGroup) -> Option<Vec<usize>> {
    'gen: for x in 0..g.order {
        let mut exp = vec![usize::MAX; g.order];
        let mut y = g.identity;
        for k in 0..g.order {
            if exp[y] != usize::MAX {
                continue 'gen;
            }
            exp[y] = k;
            y = g.mul(y, x);
        }
        return Some(exp);
    }
    None
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Smallest weight `<= w` of a product of single-edge generalized Paulis
/// `X^k Z^j` that maps the ground space into itself while acting on it as
/// something other than a multiple of the identity. Cyclic groups only.
pub fn distance_search(m: &LatticeModel, group: &FiniteGroup, g: &GroundSpace, w: usize, s: &Settings) -> Result<Distance> {
    if !m.descriptor.starts_with("dw/") || m.radix != group.order {
        return Err(Error::Precondition("distance search needs a Dijkgraaf-Witten model of the given group".into()));
    }
    if !group.is_abelian() {
        return Err(Error::Precondition(format!("{} is not abelian", group.name)));
    }
    let exp = cyclic_structure(group)
        .ok_or_else(|| Error::Precondition(format!("{}: generalized Paulis are implemented for cyclic groups", group.name)))?;
    let n = group.order;
    let mut elem = vec![0usize; n];
    for (x, &k) in exp.iter().enumerate() {
        elem[k] = x;
    }
    let ne = m.complex.n_edges();
    let paulis = (n * n - 1) as u128;
    let total: u128 = (1..=w.min(ne)).map(|k| binomial(ne, k) * paulis.pow(k as u32)).sum();
    if total > s.caps.distance_candidates as u128 {
        return Err(Error::cap("distance candidates", total, s.caps.distance_candidates as u128));
    }
    let rank = g.rank();
    if rank == 0 {
        return Err(Error::Precondition("empty ground space".into()));
    }
    let radix = n as u64;
    let pow: Vec<u64> = (0..ne).scan(1u64, |p, _| {
        let v = *p;
        *p *= radix;
        Some(v)
    }).collect();
    let omega: Vec<C64> = (0..n).map(|k| C64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64)).collect();
    let mut m_op = DMatrix::<C64>::zeros(rank, rank);
    for weight in 1..=w.min(ne) {
        let mut edges: Vec<usize> = (0..weight).collect();
        loop {
            let mut labels = vec![1usize; weight];
            loop {
                m_op.fill(C64::new(0.0, 0.0));
                for (i, &x) in g.basis.iter().enumerate() {
                    let mut y = x;
                    let mut ph = 0usize;
                    for (&e, &lab) in edges.iter().zip(&labels) {
                        let (k, j) = (lab % n, lab / n);
                        let d = ((x / pow[e]) % radix) as usize;
                        ph += j * exp[d];
                        let nd = group.mul(d, elem[k]) as u64;
                        y = y - d as u64 * pow[e] + nd * pow[e];
                    }
                    if let Ok(yi) = g.basis.binary_search(&y) {
                        let phase = omega[ph % n];
                        for a in 0..rank {
                            let left = g.vectors[(yi, a)].conj() * phase;
                            for b in 0..rank {
                                m_op[(a, b)] += left * g.vectors[(i, b)];
                            }
                        }
                    }
                }
                let fro2 = m_op.norm_squared();
                if rank as f64 - fro2 <= s.tol.distance_preserve {
                    let lam = m_op.trace() / C64::new(rank as f64, 0.0);
                    let dev = (&m_op - DMatrix::<C64>::identity(rank, rank) * lam).norm();
                    if dev > s.tol.distance_nontrivial {
                        return Ok(Distance::Exact(weight));
                    }
                }
                // next nonzero label tuple in 1..n*n
                let mut k = 0;
                while k < weight {
                    labels[k] += 1;
                    if labels[k] < n * n {
                        break;
                    }
                    labels[k] = 1;
                    k += 1;
                }
                if k == weight {
                    break;
                }
            }
            // next edge combination
            let mut i = weight;
            while i > 0 && edges[i - 1] == ne - weight + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            edges[i - 1] += 1;
            for j in i..weight {
                edges[j] = edges[j - 1] + 1;
            }
        }
    }
    Ok(Distance::AtLeast(w + 1))
}

fn join(v: &[usize]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn fmt_c(z: C64) -> String {
    format!("{:.12}{:+.12}i", z.re, z.im)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtin_group;
    use crate::complex::{build_standard, disk_region, hull_of_edges, Family, SurfaceTag};
    use crate::dw;

    fn z2(f: Family, n: usize) -> (LatticeModel, FiniteGroup) {
        let g = builtin_group("Z2").unwrap();
        let c = build_standard(SurfaceTag::Torus, f, n).unwrap();
        (dw::build(&c, &g, &Settings::default()).unwrap(), g)
    }

    #[test]
    fn toric_code_tqo0() {
        let s = Settings::default();
        let (m, _) = z2(Family::SquareTorus, 2);
        let r = check_tqo0(&m, &s).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.scalar_value("gsd"), Some("4"));
        // pairs of excitations: the first excited level is 2
        assert_eq!(r.scalar_value("gap").unwrap().parse::<f64>().unwrap().round(), 2.0);
    }

    #[test]
    fn whole_space_ground_has_no_gap() {
        let s = Settings::default();
        let c = build_standard(SurfaceTag::Torus, Family::SquareTorus, 1).unwrap();
        let m = dw::build(&c, &builtin_group("Z3").unwrap(), &s).unwrap();
        let r = check_tqo0(&m, &s).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.scalar_value("gsd"), Some("9"));
        assert_eq!(r.scalar_value("gap"), Some("none"));
    }

    #[test]
    fn fault_fails_tqo0_and_tqo1() {
        let s = Settings::default();
        let (m, _) = z2(Family::SquareTorus, 3);
        let bad = dw::inject_fault(&m, 1, &s).unwrap();
        let ground = Ground::compute(&bad, &s).unwrap();
        assert!(!check_tqo0_with(&bad, &ground, &s).unwrap().passed());
        let region = Region::new(&bad.complex, [0]).unwrap();
        let disk = hull_of_edges(&bad.complex, &[0]).unwrap();
        let r = check_tqo1(&bad, &ground, &region, &disk, &s).unwrap();
        assert!(!r.passed() && r.worst().unwrap().value > 1e-3);
    }

    #[test]
    fn bit_flip_has_zero_lambda() {
        let s = Settings::default();
        let (m, _) = z2(Family::SquareTorus, 3);
        let ground = Ground::compute(&m, &s).unwrap();
        let disk = hull_of_edges(&m.complex, &[0]).unwrap();
        let region = Region::new(&m.complex, [0]).unwrap();
        let r = check_tqo1(&m, &ground, &region, &disk, &s).unwrap();
        assert!(r.passed());
        let lam = r.scalar_value("op.1.0.lambda").unwrap();
        assert!(lam.starts_with("0.000000000000"), "{lam}");
        // identity on the region has lambda 1
        let g = ground.space().unwrap();
        let id = crate::model::LocalOperator::diagonal(2, 1, vec![1.0, 1.0]);
        let mm = g.blocks(&[0], &s).unwrap().compress(&id);
        assert!((mm - DMatrix::<C64>::identity(4, 4)).norm() < 1e-10);
    }

    #[test]
    fn tqo1_refuses_without_disk() {
        let s = Settings::default();
        let (m, _) = z2(Family::SquareTorus, 3);
        let ground = Ground::compute(&m, &s).unwrap();
        let disk = hull_of_edges(&m.complex, &[0]).unwrap();
        let far = (0..m.complex.n_edges()).find(|&e| !disk.interior_edges.contains(&e)).unwrap();
        let region = Region::new(&m.complex, [far]).unwrap();
        assert!(matches!(check_tqo1(&m, &ground, &region, &disk, &s), Err(Error::RegionNotADisk(_))));
    }

    #[test]
    fn tqo2_degenerate_and_one_ring() {
        let s = Settings::default();
        let (m, _) = z2(Family::SquareSkewTorus, 12);
        let ground = Ground::compute(&m, &s).unwrap();
        let disk = disk_region(&m.complex, 0, 1).unwrap();
        let a = Region::new(&m.complex, m.complex.face_edges(0)).unwrap();
        let r = check_tqo2(&m, &ground, &a, &disk, &s).unwrap();
        assert!(r.passed(), "{r:?}");
        let single = disk_region(&m.complex, 0, 0).unwrap();
        assert!(check_tqo2(&m, &ground, &a, &single, &s).unwrap().passed());
    }

    #[test]
    fn reduced_gram_agrees_with_explicit_gram() {
        let s = Settings::default();
        let (m, _) = z2(Family::SquareTorus, 2);
        let g = m.ground_space(&s).unwrap();
        let edges = [0usize, 3];
        let p = m.ground_projector_explicit(&s).unwrap();
        let ops: Vec<_> = m
            .local_operator_basis(&edges, &s.caps)
            .unwrap()
            .iter()
            .map(|o| m.embed(&o.edges, &o.op, &s.caps).unwrap())
            .collect();
        let explicit = crate::spectra::gram(&ops, &p, "explicit").unwrap();
        let reduced = crate::spectra::gram_from_reduced(&g.reduced(&edges, &s).unwrap(), "reduced");
        assert!((explicit.matrix - reduced.matrix).norm() < 1e-9);
    }

    #[test]
    fn distances_of_small_toric_codes() {
        let s = Settings::default();
        let (m, g) = z2(Family::SquareTorus, 2);
        let gs = m.ground_space(&s).unwrap();
        assert_eq!(distance_search(&m, &g, &gs, 2, &s).unwrap(), Distance::Exact(2));
        assert_eq!(distance_search(&m, &g, &gs, 0, &s).unwrap(), Distance::AtLeast(1));
        let (m, g) = z2(Family::SquareTorus, 3);
        let gs = m.ground_space(&s).unwrap();
        assert_eq!(distance_search(&m, &g, &gs, 2, &s).unwrap(), Distance::AtLeast(3));
    }

    #[test]
    fn tqo3_on_two_tori() {
        let s = Settings::default();
        let g = builtin_group("Z2").unwrap();
        let models: Vec<(String, LatticeModel)> = [(Family::SquareTorus, 2), (Family::TriangulatedTorus, 2)]
            .iter()
            .map(|&(f, n)| {
                let c = build_standard(SurfaceTag::Torus, f, n).unwrap();
                (format!("{}({n})", f.name()), dw::build(&c, &g, &s).unwrap())
            })
            .collect();
        let r = check_tqo3("torus", "dw/Z2", &models, &s).unwrap();
        assert!(r.passed());
    }
}
