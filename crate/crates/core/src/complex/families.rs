//! Built-in cellulations.
//!
//! Periodic families live on the quotient of a planar lattice by the sublattice
//! spanned by `(a, 0)` and `(b, c)` (Hermite normal form, `0 <= b < a`). A
//! `k x k` torus is `(k, 0, k)`; the skew families pick the sublattice with the
//! longest shortest vector for a given cell count.

use super::{CellComplex, Edge, Face, Step, SurfaceTag};
use crate::error::{Error, Result};
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    SquareTorus,
    TriangulatedTorus,
    HoneycombTorus,
    SquareSkewTorus,
    HoneycombSkewTorus,
    Tetrahedron,
    Octahedron,
    Cube,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::SquareTorus,
        Family::TriangulatedTorus,
        Family::HoneycombTorus,
        Family::SquareSkewTorus,
        Family::HoneycombSkewTorus,
        Family::Tetrahedron,
        Family::Octahedron,
        Family::Cube,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::SquareTorus => "square-torus",
            Family::TriangulatedTorus => "triangulated-torus",
            Family::HoneycombTorus => "honeycomb-torus",
            Family::SquareSkewTorus => "square-skew-torus",
            Family::HoneycombSkewTorus => "honeycomb-skew-torus",
            Family::Tetrahedron => "tetrahedron-sphere",
            Family::Octahedron => "octahedron-sphere",
            Family::Cube => "cube-sphere",
        }
    }

    pub fn surface(self) -> SurfaceTag {
        match self {
            Family::Tetrahedron | Family::Octahedron | Family::Cube => SurfaceTag::Sphere,
            _ => SurfaceTag::Torus,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown cellulation family `{s}`")))
    }
}

/// Builds one of the built-in cellulations.
///
/// `size` is the side length for the square, triangulated and honeycomb tori,
/// the number of plaquettes for the skew tori, and must be 1 for the spheres.
pub fn build_standard(surface: SurfaceTag, family: Family, size: usize) -> Result<CellComplex> {
    if family.surface() != surface {
        return Err(Error::InvalidInput(format!("{family} is not a cellulation of the {surface}")));
    }
    if size == 0 {
        return Err(Error::InvalidInput(format!("{family} needs size >= 1")));
    }
    let lattice = |hex| match family {
        Family::SquareSkewTorus | Family::HoneycombSkewTorus => skew_lattice(size, hex),
        _ => (size, 0, size),
    };
    let mut c = match family {
        Family::SquareTorus | Family::SquareSkewTorus => square(Lattice::new(lattice(false)), false),
        Family::TriangulatedTorus => square(Lattice::new(lattice(false)), true),
        Family::HoneycombTorus | Family::HoneycombSkewTorus => honeycomb(Lattice::new(lattice(true))),
        _ if size != 1 => {
            return Err(Error::InvalidInput(format!("{family} only exists at size 1")));
        }
        Family::Tetrahedron => from_polygons(4, &[&[0, 2, 1], &[0, 1, 3], &[0, 3, 2], &[1, 2, 3]]),
        Family::Octahedron => octahedron(),
        Family::Cube => from_polygons(
            8,
            &[&[0, 2, 3, 1], &[4, 5, 7, 6], &[0, 1, 5, 4], &[2, 6, 7, 3], &[0, 4, 6, 2], &[1, 3, 7, 5]],
        ),
    };
    c.surface = surface;
    c.canonicalize();
    Ok(c)
}

/// Sublattice `(a, b, c)` of index `n` whose shortest nonzero vector is longest,
/// ties going to the lexicographically smallest triple. `hex` selects the
/// triangular metric `x^2 + xy + y^2` instead of the square one.
pub fn skew_lattice(n: usize, hex: bool) -> (usize, usize, usize) {
    let norm = |x: i64, y: i64| if hex { x * x + x * y + y * y } else { x * x + y * y };
    let r = n as i64 + 1;
    let mut best = (0i64, (n, 0, 1));
    for a in 1..=n {
        if n % a != 0 {
            continue;
        }
        let c = n / a;
        for b in 0..a {
            let mut shortest = i64::MAX;
            for u in -r..=r {
                for v in -r..=r {
                    if u == 0 && v == 0 {
                        continue;
                    }
                    let (x, y) = (u * a as i64 + v * b as i64, v * c as i64);
                    shortest = shortest.min(norm(x, y));
                }
            }
            if shortest > best.0 {
                best = (shortest, (a, b, c));
            }
        }
    }
    best.1
}

#[derive(Debug, Clone, Copy)]
struct Lattice {
    a: i64,
    b: i64,
    c: i64,
}

impl Lattice {
    fn new((a, b, c): (usize, usize, usize)) -> Self {
        Lattice { a: a as i64, b: b as i64, c: c as i64 }
    }

    fn cells(&self) -> usize {
        (self.a * self.c) as usize
    }

    fn idx(&self, x: i64, y: i64) -> usize {
        let j = y.div_euclid(self.c);
        let y = y - j * self.c;
        let x = (x - j * self.b).rem_euclid(self.a);
        (x + self.a * y) as usize
    }

    fn coords(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        (0..self.c).flat_map(move |y| (0..self.a).map(move |x| (x, y)))
    }
}

fn square(l: Lattice, diagonals: bool) -> CellComplex {
    let n = l.cells();
    let mut edges = vec![Edge { src: 0, dst: 0 }; if diagonals { 3 * n } else { 2 * n }];
    let mut rot = vec![Vec::new(); n];
    for (x, y) in l.coords() {
        let p = l.idx(x, y);
        edges[p] = Edge { src: p, dst: l.idx(x + 1, y) };
        edges[n + p] = Edge { src: p, dst: l.idx(x, y + 1) };
        let mut r = vec![(p, 1)];
        if diagonals {
            edges[2 * n + p] = Edge { src: p, dst: l.idx(x + 1, y + 1) };
            r.push((2 * n + p, 1));
        }
        r.push((n + p, 1));
        r.push((l.idx(x - 1, y), -1));
        if diagonals {
            r.push((2 * n + l.idx(x - 1, y - 1), -1));
        }
        r.push((n + l.idx(x, y - 1), -1));
        rot[p] = r;
    }
    from_rotation(n, edges, &rot)
}

fn honeycomb(l: Lattice) -> CellComplex {
    let n = l.cells();
    let mut edges = vec![Edge { src: 0, dst: 0 }; 3 * n];
    let mut rot = vec![Vec::new(); 2 * n];
    for (x, y) in l.coords() {
        let p = l.idx(x, y);
        edges[p] = Edge { src: p, dst: n + p };
        edges[n + p] = Edge { src: p, dst: n + l.idx(x - 1, y) };
        edges[2 * n + p] = Edge { src: p, dst: n + l.idx(x, y - 1) };
        rot[p] = vec![(p, 1), (n + p, 1), (2 * n + p, 1)];
        rot[n + p] = vec![(2 * n + l.idx(x, y + 1), -1), (p, -1), (n + l.idx(x + 1, y), -1)];
    }
    from_rotation(2 * n, edges, &rot)
}

fn octahedron() -> CellComplex {
    // vertices +x, -x, +y, -y, +z, -z
    let mut polys: Vec<Vec<usize>> = Vec::new();
    for sz in [1i32, -1] {
        for sy in [1i32, -1] {
            for sx in [1i32, -1] {
                let v = |s: i32, base: usize| if s > 0 { base } else { base + 1 };
                let (x, y, z) = (v(sx, 0), v(sy, 2), v(sz, 4));
                polys.push(if sx * sy * sz > 0 { vec![x, y, z] } else { vec![x, z, y] });
            }
        }
    }
    let refs: Vec<&[usize]> = polys.iter().map(|p| p.as_slice()).collect();
    from_polygons(6, &refs)
}

/// Faces given as vertex cycles, counterclockwise seen from outside. Each edge
/// is created on first use, oriented from the smaller vertex index.
fn from_polygons(nv: usize, polys: &[&[usize]]) -> CellComplex {
    let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
    let mut edges = Vec::new();
    let mut faces = Vec::new();
    for poly in polys {
        let mut walk = Vec::with_capacity(poly.len());
        for k in 0..poly.len() {
            let (u, w) = (poly[k], poly[(k + 1) % poly.len()]);
            let key = (u.min(w), u.max(w));
            let e = *ids.entry(key).or_insert_with(|| {
                edges.push(Edge { src: key.0, dst: key.1 });
                edges.len() - 1
            });
            walk.push(Step::new(e, if u < w { 1 } else { -1 }));
        }
        faces.push(Face { start: poly[0], walk });
    }
    CellComplex { surface: SurfaceTag::Sphere, n_vertices: nv, edges, faces }
}

/// Traces faces from a rotation system: `rot[v]` lists the darts leaving `v`
/// counterclockwise as `(edge, sign)`. The face to the left of a dart continues
/// with the dart preceding its reverse in the rotation at its head.
fn from_rotation(nv: usize, edges: Vec<Edge>, rot: &[Vec<(usize, i8)>]) -> CellComplex {
    let dart = |e: usize, s: i8| 2 * e + (s < 0) as usize;
    let mut pos = vec![(0usize, 0usize); 2 * edges.len()];
    for (v, r) in rot.iter().enumerate() {
        for (i, &(e, s)) in r.iter().enumerate() {
            pos[dart(e, s)] = (v, i);
        }
    }
    let mut seen = vec![false; 2 * edges.len()];
    let order = (0..edges.len()).map(|e| (e, 1)).chain((0..edges.len()).map(|e| (e, -1)));
    let mut faces = Vec::new();
    for (e0, s0) in order {
        if seen[dart(e0, s0)] {
            continue;
        }
        let mut walk = Vec::new();
        let (mut e, mut s) = (e0, s0);
        while !seen[dart(e, s)] {
            seen[dart(e, s)] = true;
            walk.push(Step::new(e, s));
            let (h, i) = pos[dart(e, -s)];
            let r = &rot[h];
            (e, s) = r[(i + r.len() - 1) % r.len()];
        }
        let start = if s0 > 0 { edges[e0].src } else { edges[e0].dst };
        faces.push(Face { start, walk });
    }
    CellComplex { surface: SurfaceTag::Torus, n_vertices: nv, edges, faces }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(c: &CellComplex) -> (usize, usize, usize) {
        (c.n_vertices, c.n_edges(), c.n_faces())
    }

    #[test]
    fn every_family_is_valid_at_small_sizes() {
        for fam in Family::ALL {
            let sizes: &[usize] = if fam.surface() == SurfaceTag::Sphere { &[1] } else { &[1, 2, 3, 4, 7, 12] };
            for &k in sizes {
                let c = build_standard(fam.surface(), fam, k).unwrap();
                assert!(c.validate().is_empty(), "{fam}({k}): {:?}", c.validate());
            }
        }
    }

    #[test]
    fn documented_counts() {
        let s = SurfaceTag::Sphere;
        let t = SurfaceTag::Torus;
        assert_eq!(counts(&build_standard(s, Family::Tetrahedron, 1).unwrap()), (4, 6, 4));
        assert_eq!(counts(&build_standard(s, Family::Octahedron, 1).unwrap()), (6, 12, 8));
        assert_eq!(counts(&build_standard(s, Family::Cube, 1).unwrap()), (8, 12, 6));
        assert_eq!(counts(&build_standard(t, Family::SquareTorus, 2).unwrap()), (4, 8, 4));
        assert_eq!(counts(&build_standard(t, Family::SquareTorus, 1).unwrap()), (1, 2, 1));
        assert_eq!(counts(&build_standard(t, Family::TriangulatedTorus, 1).unwrap()), (1, 3, 2));
        assert_eq!(counts(&build_standard(t, Family::HoneycombTorus, 2).unwrap()), (8, 12, 4));
        assert_eq!(counts(&build_standard(t, Family::HoneycombTorus, 1).unwrap()), (2, 3, 1));
        assert_eq!(counts(&build_standard(t, Family::HoneycombSkewTorus, 7).unwrap()), (14, 21, 7));
        assert_eq!(counts(&build_standard(t, Family::SquareSkewTorus, 12).unwrap()), (12, 24, 12));
    }

    #[test]
    fn trivalent_families() {
        let t = SurfaceTag::Torus;
        assert!(build_standard(SurfaceTag::Sphere, Family::Cube, 1).unwrap().is_trivalent());
        for k in 1..4 {
            assert!(build_standard(t, Family::HoneycombTorus, k).unwrap().is_trivalent());
        }
        assert!(!build_standard(t, Family::SquareTorus, 3).unwrap().is_trivalent());
    }

    #[test]
    fn hexagons_have_six_sides() {
        let c = build_standard(SurfaceTag::Torus, Family::HoneycombSkewTorus, 7).unwrap();
        assert!(c.faces.iter().all(|f| f.len() == 6));
        assert!(c.self_adjacent_faces().is_empty());
        for f in 0..7 {
            assert_eq!(c.face_neighbours(f).len(), 6);
        }
    }

    #[test]
    fn skew_lattice_choice() {
        assert_eq!(skew_lattice(3, true), (3, 1, 1));
        assert_eq!(skew_lattice(7, true), (7, 2, 1));
        assert_eq!(skew_lattice(12, false), (4, 2, 3));
        assert_eq!(skew_lattice(1, false), (1, 0, 1));
    }

    #[test]
    fn rejects_bad_requests() {
        assert!(build_standard(SurfaceTag::Torus, Family::SquareTorus, 0).is_err());
        assert!(build_standard(SurfaceTag::Sphere, Family::SquareTorus, 2).is_err());
        assert!(build_standard(SurfaceTag::Sphere, Family::Cube, 2).is_err());
        assert!("moebius".parse::<Family>().is_err());
        assert_eq!("cube-sphere".parse::<Family>().unwrap(), Family::Cube);
    }
}
