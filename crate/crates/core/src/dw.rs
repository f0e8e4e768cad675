//! Untwisted Dijkgraaf-Witten models: a group element on every edge, gauge
//! averages at vertices and flatness at faces.

use crate::algebra::FiniteGroup;
use crate::complex::{CellComplex, Incidence};
use crate::config::Settings;
use crate::error::{Error, Result};
use crate::model::{LatticeModel, LocalOperator, Term, TermKind};
use crate::spectra::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

/// Digits of a local configuration, first site least significant.
fn digits(mut l: usize, radix: usize, n: usize) -> Vec<usize> {
    (0..n)
        .map(|_| {
            let d = l % radix;
            l /= radix;
            d
        })
        .collect()
}

fn undigits(d: &[usize], radix: usize) -> usize {
    d.iter().rev().fold(0, |acc, &x| acc * radix + x)
}

/// Holonomy of a face walk for edge labels `val(edge)`, read from the start vertex.
fn holonomy(g: &FiniteGroup, c: &CellComplex, f: usize, val: impl Fn(usize) -> usize) -> usize {
    c.faces[f].walk.iter().fold(g.identity, |h, s| {
        let x = val(s.edge);
        g.mul(h, if s.sign > 0 { x } else { g.inv[x] })
    })
}

/// Gauge transformation by `x` at a vertex, seen from one incident edge:
/// outgoing labels are multiplied on the left by `x^-1`, incoming ones on
/// the right by `x`, loops are conjugated.
fn act(g: &FiniteGroup, inc: Incidence, x: usize, ge: usize) -> usize {
    match inc {
        Incidence::Out => g.mul(g.inv[x], ge),
        Incidence::In => g.mul(ge, x),
        Incidence::Loop => g.mul(g.mul(g.inv[x], ge), x),
    }
}

fn vertex_operator(g: &FiniteGroup, inc: &[(usize, Incidence)]) -> LocalOperator {
    let n = g.order;
    let w = C64::new(1.0 / n as f64, 0.0);
    LocalOperator::from_columns(n, inc.len(), 0.0, |l| {
        let d = digits(l, n, inc.len());
        (0..n)
            .map(|x| {
                let moved: Vec<usize> = d.iter().zip(inc).map(|(&ge, &(_, k))| act(g, k, x, ge)).collect();
                (undigits(&moved, n), w)
            })
            .collect()
    })
}

fn face_operator(g: &FiniteGroup, c: &CellComplex, f: usize, support: &[usize]) -> LocalOperator {
    let n = g.order;
    let d = (0..n.pow(support.len() as u32))
        .map(|l| {
            let dg = digits(l, n, support.len());
            let val = |e: usize| dg[support.binary_search(&e).unwrap()];
            (holonomy(g, c, f, val) == g.identity) as u8 as f64
        })
        .collect();
    LocalOperator::diagonal(n, support.len(), d)
}

/// Builds the model on a valid complex. Vertex terms come first, then faces,
/// each in index order.
pub fn build(c: &CellComplex, g: &FiniteGroup, s: &Settings) -> Result<LatticeModel> {
    c.ensure_valid()?;
    let mut terms = Vec::new();
    for (v, inc) in c.vertex_incidence().into_iter().enumerate() {
        let op = vertex_operator(g, &inc);
        terms.push(Term { kind: TermKind::Vertex, cell: v, support: inc.iter().map(|e| e.0).collect(), op: Arc::new(op) });
    }
    for f in 0..c.n_faces() {
        let support = c.face_edges(f);
        let op = face_operator(g, c, f, &support);
        terms.push(Term { kind: TermKind::Face, cell: f, support, op: Arc::new(op) });
    }
    LatticeModel::new(c.clone(), g.order, terms, format!("dw/{}", g.name), &s.caps)
}

/// Replaces the flatness term of face 0 by a diagonal with seeded random
/// entries in (0.1, 0.9), so the product of terms is no longer a projector.
pub fn inject_fault(m: &LatticeModel, seed: u64, s: &Settings) -> Result<LatticeModel> {
    let i = m
        .terms
        .iter()
        .position(|t| t.kind == TermKind::Face)
        .ok_or_else(|| Error::InvalidInput("model has no face term".into()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t = &m.terms[i];
    let d = (0..t.op.local_dim()).map(|_| rng.gen_range(0.1..0.9)).collect();
    let mut terms = m.terms.clone();
    terms[i].op = Arc::new(LocalOperator::diagonal(t.op.radix, t.op.arity, d));
    LatticeModel::new(m.complex.clone(), m.radix, terms, format!("{}+fault", m.descriptor), &s.caps)
}

/// Number of gauge orbits of flat connections, by brute-force enumeration
/// and union-find. Independent of the projector machinery.
pub fn gsd_oracle(c: &CellComplex, g: &FiniteGroup, cap: u64) -> Result<u64> {
    let n = g.order;
    let total = (n as u128).pow(c.n_edges() as u32);
    if total > cap as u128 {
        return Err(Error::cap("flat connection enumeration", total, cap as u128));
    }
    let total = total as usize;
    let flat: Vec<usize> = (0..total)
        .filter(|&x| {
            let d = digits(x, n, c.n_edges());
            (0..c.n_faces()).all(|f| holonomy(g, c, f, |e| d[e]) == g.identity)
        })
        .collect();
    let index = |x: usize| flat.binary_search(&x).unwrap();
    let mut parent: Vec<usize> = (0..flat.len()).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    let inc = c.vertex_incidence();
    for (i, &x) in flat.iter().enumerate() {
        let d = digits(x, n, c.n_edges());
        for vi in &inc {
            for h in 0..n {
                let mut moved = d.clone();
                for &(e, k) in vi {
                    moved[e] = act(g, k, h, d[e]);
                }
                let j = index(undigits(&moved, n));
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    Ok((0..flat.len()).filter(|&i| find(&mut parent, i) == i).count() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtin_group;
    use crate::complex::{build_standard, Family, SurfaceTag};

    fn torus(f: Family, n: usize) -> CellComplex {
        build_standard(SurfaceTag::Torus, f, n).unwrap()
    }

    #[test]
    fn terms_are_commuting_projectors() {
        let s = Settings::default();
        let m = build(&torus(Family::SquareTorus, 2), &builtin_group("Z2").unwrap(), &s).unwrap();
        let ops: Vec<_> = (0..m.terms.len()).map(|i| m.term_operator(i, &s.caps).unwrap()).collect();
        for a in &ops {
            assert!(a.projector_residual() < 1e-12 && a.hermitian_residual() < 1e-12);
            for b in &ops {
                let ab = a.compose(b, 0.0).unwrap();
                let ba = b.compose(a, 0.0).unwrap();
                assert!(ab.max_abs_diff(&ba).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn gauge_action_preserves_flatness_for_s3() {
        let g = builtin_group("S3").unwrap();
        let c = torus(Family::TriangulatedTorus, 1);
        let s = Settings::default();
        let m = build(&c, &g, &s).unwrap();
        let gs = m.ground_space(&s).unwrap();
        assert!(gs.frustration < 1e-10);
    }

    #[test]
    fn oracle_counts_commuting_pairs_up_to_conjugacy() {
        for (name, want) in [("Z2", 4), ("Z3", 9), ("S3", 8)] {
            let g = builtin_group(name).unwrap();
            assert_eq!(gsd_oracle(&torus(Family::SquareTorus, 1), &g, 1 << 20).unwrap(), want, "{name}");
        }
        let tet = build_standard(SurfaceTag::Sphere, Family::Tetrahedron, 1).unwrap();
        assert_eq!(gsd_oracle(&tet, &builtin_group("Z2").unwrap(), 1 << 20).unwrap(), 1);
    }

    #[test]
    fn ground_rank_matches_oracle() {
        let s = Settings::default();
        for (name, fam, n) in [("Z2", Family::SquareTorus, 2), ("S3", Family::SquareTorus, 1), ("Z3", Family::TriangulatedTorus, 1)] {
            let g = builtin_group(name).unwrap();
            let c = torus(fam, n);
            let m = build(&c, &g, &s).unwrap();
            assert_eq!(m.ground_space(&s).unwrap().rank() as u64, gsd_oracle(&c, &g, 1 << 20).unwrap());
        }
    }

    #[test]
    fn fault_breaks_projector() {
        let s = Settings::default();
        let m = build(&torus(Family::SquareTorus, 1), &builtin_group("Z2").unwrap(), &s).unwrap();
        let bad = inject_fault(&m, 7, &s).unwrap();
        assert!(matches!(bad.ground_space(&s), Err(Error::NotAProjector(_))));
    }
}
