//! Levin-Wen string-net models on trivalent cellulations.
//!
//! Vertex terms enforce the fusion rules; plaquette terms are
//! `B_p = sum_s (d_s / D^2) B_p^s`, with `B_p^s` inserting a loop of type `s`
//! and fusing it into the plaquette boundary. Two classes of input data are
//! handled: every label self-dual with tetrahedrally symmetric
//! `F / (v_e v_f)` (Fibonacci, `Vec_Z2`), and pointed categories with trivial
//! associator (`Vec_Zn`), where edge orientation matters but amplitudes do not.

use crate::algebra::FusionData;
use crate::complex::{CellComplex, Incidence};
use crate::config::Settings;
use crate::error::{Error, Result};
use crate::model::{LatticeModel, LocalOperator, Term, TermKind};
use crate::spectra::C64;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Class {
    SelfDual,
    Pointed,
}

fn classify(fd: &FusionData) -> Result<Class> {
    if (0..fd.labels).all(|a| fd.dual[a] == a) {
        return Ok(Class::SelfDual);
    }
    let pointed = (0..fd.labels).all(|a| (0..fd.labels).all(|b| fd.fuse(a, b).count() == 1));
    let trivial = fd.fsymbol.values().all(|v| (v - C64::new(1.0, 0.0)).norm() <= 1e-12);
    if pointed && trivial {
        return Ok(Class::Pointed);
    }
    Err(Error::Precondition(format!(
        "{}: plaquette terms are implemented for self-dual labels or pointed data with trivial F",
        fd.name
    )))
}

/// One corner of a plaquette: the walk arrives along step `k - 1`, leaves
/// along step `k`, and `leg` is the third edge at the vertex.
#[derive(Debug, Clone, Copy)]
struct Corner {
    leg: usize,
}

/// Checks trivalence and that every face walk has distinct edges and vertices
/// with all legs off the face.
fn plaquette_corners(c: &CellComplex) -> Result<Vec<Vec<Corner>>> {
    if !c.is_trivalent() {
        return Err(Error::Precondition("string-net models need a trivalent cellulation".into()));
    }
    let inc = c.vertex_incidence();
    let mut out = Vec::with_capacity(c.n_faces());
    for (f, face) in c.faces.iter().enumerate() {
        let edges = c.face_edges(f);
        let mut verts: Vec<usize> = face.walk.iter().map(|&s| c.tail(s)).collect();
        verts.sort_unstable();
        verts.dedup();
        if edges.len() != face.len() || verts.len() != face.len() {
            return Err(Error::Precondition(format!("face {f} is not a simple plaquette")));
        }
        let n = face.len();
        let mut corners = Vec::with_capacity(n);
        for k in 0..n {
            let (pin, pout) = (face.walk[(k + n - 1) % n], face.walk[k]);
            let v = c.tail(pout);
            let leg = inc[v].iter().map(|e| e.0).find(|&e| e != pin.edge && e != pout.edge);
            match leg {
                Some(leg) if edges.binary_search(&leg).is_err() => corners.push(Corner { leg }),
                _ => return Err(Error::Precondition(format!("face {f} is not a simple plaquette"))),
            }
        }
        out.push(corners);
    }
    Ok(out)
}

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

/// Out-going edges carry their label, incoming ones its dual; the vertex is
/// allowed when the three fuse to the unit.
fn vertex_operator(fd: &FusionData, inc: &[(usize, Incidence)]) -> Result<LocalOperator> {
    if inc.len() != 3 || inc.iter().any(|e| e.1 == Incidence::Loop) {
        return Err(Error::Precondition("string-net vertices must have three distinct edges".into()));
    }
    let n = fd.labels;
    let d = (0..n.pow(3))
        .map(|l| {
            let x: Vec<usize> = digits(l, n, 3)
                .iter()
                .zip(inc)
                .map(|(&x, e)| if e.1 == Incidence::In { fd.dual[x] } else { x })
                .collect();
            fd.n(x[0], x[1], fd.dual[x[2]]) as u8 as f64
        })
        .collect();
    Ok(LocalOperator::diagonal(n, 3, d))
}

/// `B_p` on the support `[boundary edges in walk order, legs in corner order]`.
fn plaquette_operator(fd: &FusionData, class: Class, c: &CellComplex, f: usize, drop: f64) -> Result<LocalOperator> {
    let n = fd.labels;
    let walk = &c.faces[f].walk;
    let m = walk.len();
    let v: Vec<f64> = fd.qdim.iter().map(|d| d.sqrt()).collect();
    let mut err = None;
    let op = LocalOperator::from_columns(n, 2 * m, drop, |l| {
        let dg = digits(l, n, 2 * m);
        let (j, legs) = dg.split_at(m);
        let mut col = Vec::new();
        for s in 0..n {
            let w = fd.qdim[s] / fd.total_dim_sq;
            match class {
                Class::Pointed => {
                    let shifted: Vec<usize> = j
                        .iter()
                        .zip(walk)
                        .map(|(&x, st)| fd.fuse(x, if st.sign > 0 { s } else { fd.dual[s] }).next().unwrap())
                        .collect();
                    let mut out = shifted;
                    out.extend_from_slice(legs);
                    col.push((undigits(&out, n), C64::new(w, 0.0)));
                }
                Class::SelfDual => {
                    let choices: Vec<Vec<usize>> = j.iter().map(|&x| fd.fuse(s, x).collect()).collect();
                    let mut jp = vec![0usize; m];
                    let total: usize = choices.iter().map(|c| c.len()).product();
                    for mut idx in 0..total {
                        for k in 0..m {
                            jp[k] = choices[k][idx % choices[k].len()];
                            idx /= choices[k].len();
                        }
                        let mut amp = C64::new(w, 0.0);
                        for k in 0..m {
                            amp *= v[j[k]] * v[jp[k]];
                            let km = (k + m - 1) % m;
                            let fv = match fd.f(j[km], j[k], jp[k], jp[km], legs[k], s) {
                                Ok(x) => x,
                                Err(e) => {
                                    err.get_or_insert(e);
                                    C64::new(0.0, 0.0)
                                }
                            };
                            amp *= fv / (v[legs[k]] * v[s]);
                        }
                        if amp.norm() > 0.0 {
                            let mut out = jp.clone();
                            out.extend_from_slice(legs);
                            col.push((undigits(&out, n), amp));
                        }
                    }
                }
            }
        }
        col
    });
    match err {
        Some(e) => Err(e),
        None => Ok(op),
    }
}

/// Builds the model. Vertex terms come first, then plaquettes, each in index
/// order.
pub fn build(c: &CellComplex, fd: &FusionData, s: &Settings) -> Result<LatticeModel> {
    c.ensure_valid()?;
    let class = classify(fd)?;
    let corners = plaquette_corners(c)?;
    let mut terms = Vec::new();
    for (vtx, inc) in c.vertex_incidence().into_iter().enumerate() {
        let op = vertex_operator(fd, &inc)?;
        terms.push(Term { kind: TermKind::Vertex, cell: vtx, support: inc.iter().map(|e| e.0).collect(), op: Arc::new(op) });
    }
    for (f, cs) in corners.iter().enumerate() {
        let mut support: Vec<usize> = c.faces[f].walk.iter().map(|st| st.edge).collect();
        support.extend(cs.iter().map(|k| k.leg));
        // on small tori one edge can be the leg of two corners
        let op = plaquette_operator(fd, class, c, f, s.tol.drop)?;
        let (support, op) = merge_repeated_sites(support, op);
        terms.push(Term { kind: TermKind::Face, cell: f, support, op: Arc::new(op) });
    }
    LatticeModel::new(c.clone(), fd.labels, terms, format!("lw/{}", fd.name), &s.caps)
}

/// Restricts an operator whose support lists some sites twice to the
/// configurations where repeated sites agree, giving an operator on the
/// distinct sites. Off-diagonal blocks between disagreeing copies are dropped;
/// the plaquette operator never changes legs, so nothing is lost.
fn merge_repeated_sites(support: Vec<usize>, op: LocalOperator) -> (Vec<usize>, LocalOperator) {
    let mut distinct = support.clone();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() == support.len() {
        return (support, op);
    }
    let mut order: Vec<usize> = Vec::new();
    for &e in &support {
        if !order.contains(&e) {
            order.push(e);
        }
    }
    let n = op.radix;
    let pos: Vec<usize> = support.iter().map(|e| order.iter().position(|x| x == e).unwrap()).collect();
    let expand = |l: usize| {
        let d = digits(l, n, order.len());
        undigits(&pos.iter().map(|&p| d[p]).collect::<Vec<_>>(), n)
    };
    let shrink = |big: usize| {
        let d = digits(big, n, support.len());
        let mut small = vec![usize::MAX; order.len()];
        for (i, &p) in pos.iter().enumerate() {
            if small[p] == usize::MAX {
                small[p] = d[i];
            } else if small[p] != d[i] {
                return None;
            }
        }
        Some(undigits(&small, n))
    };
    let merged = LocalOperator::from_columns(n, order.len(), 0.0, |l| {
        op.column(expand(l)).filter_map(|(r, v)| shrink(r).map(|r| (r, v))).collect()
    });
    (order, merged)
}

/// Flips the sign of the last admissible F-symbol (for Fibonacci,
/// `F^{ttt}_t[t,t]`) and rebuilds without validating the data.
pub fn inject_fault(c: &CellComplex, fd: &FusionData, s: &Settings) -> Result<LatticeModel> {
    let mut bad = fd.clone();
    let key = *bad
        .fsymbol
        .keys()
        .next_back()
        .ok_or_else(|| Error::InvalidInput("fusion data has no F-symbols".into()))?;
    let v = bad.fsymbol[&key];
    bad.fsymbol.insert(key, -v);
    bad.name = format!("{}+fault", fd.name);
    build(c, &bad, s)
}

/// Ground-state degeneracy expected on a closed surface from the number of
/// simple objects of the centre: 1 on the sphere, `|Z(C)|` on the torus.
pub fn gsd_reference(fd: &FusionData, genus: u32) -> Option<u64> {
    let torus = match fd.name.as_str() {
        "Fibonacci" => 4,
        "VecZ2" => 4,
        "VecZ3" => 9,
        _ => return None,
    };
    match genus {
        0 => Some(1),
        1 => Some(torus),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtin_fusion;
    use crate::complex::{build_standard, Family, SurfaceTag};

    fn check_terms(m: &LatticeModel) {
        for t in &m.terms {
            let (p, h) = t.op.projector_residuals();
            assert!(p < 1e-10 && h < 1e-10, "{} {}: {p} {h}", t.kind, t.cell);
        }
    }

    #[test]
    fn tetrahedron_fibonacci_is_nondegenerate() {
        let s = Settings::default();
        let c = build_standard(SurfaceTag::Sphere, Family::Tetrahedron, 1).unwrap();
        let m = build(&c, &builtin_fusion("Fibonacci").unwrap(), &s).unwrap();
        check_terms(&m);
        let g = m.ground_space(&s).unwrap();
        assert_eq!(g.rank(), 1);
        assert!(g.frustration < 1e-10);
    }

    #[test]
    fn torus_degeneracies() {
        let s = Settings::default();
        let c = build_standard(SurfaceTag::Torus, Family::HoneycombSkewTorus, 3).unwrap();
        for name in ["VecZ2", "Fibonacci", "VecZ3"] {
            let fd = builtin_fusion(name).unwrap();
            let m = build(&c, &fd, &s).unwrap();
            check_terms(&m);
            let g = m.ground_space(&s).unwrap();
            assert_eq!(Some(g.rank() as u64), gsd_reference(&fd, 1), "{name}");
        }
    }

    #[test]
    fn explicit_projector_matches() {
        let s = Settings::default();
        let c = build_standard(SurfaceTag::Sphere, Family::Tetrahedron, 1).unwrap();
        let m = build(&c, &builtin_fusion("Fibonacci").unwrap(), &s).unwrap();
        let p = m.ground_projector_explicit(&s).unwrap();
        assert!(p.projector_residual() < 1e-10);
        assert!((p.trace().re - 1.0).abs() < 1e-10);
    }

    #[test]
    fn small_torus_is_rejected() {
        let c = build_standard(SurfaceTag::Torus, Family::HoneycombTorus, 1).unwrap();
        let r = build(&c, &builtin_fusion("Fibonacci").unwrap(), &Settings::default());
        assert!(matches!(r, Err(Error::Precondition(_))));
    }

    #[test]
    fn fault_breaks_projector() {
        let s = Settings::default();
        let c = build_standard(SurfaceTag::Sphere, Family::Tetrahedron, 1).unwrap();
        let m = inject_fault(&c, &builtin_fusion("Fibonacci").unwrap(), &s).unwrap();
        assert!(matches!(m.ground_space(&s), Err(Error::NotAProjector(_))));
    }
}
