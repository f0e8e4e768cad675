//! Oriented cell complexes on closed surfaces.
//!
//! Edges carry a global orientation `src -> dst`. A face is a cyclic boundary
//! walk of signed edge steps starting at a distinguished vertex; a `+1` step
//! traverses the edge along its orientation.

mod families;
mod io;
mod region;

pub use families::{build_standard, skew_lattice, Family};
pub use region::{disk_from_faces, disk_region, hull_of_edges, DiskRegion, Region};

use crate::error::{Error, Result};
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SurfaceTag {
    Sphere,
    Torus,
    Genus(u32),
}

impl SurfaceTag {
    pub fn genus(self) -> u32 {
        match self {
            SurfaceTag::Sphere => 0,
            SurfaceTag::Torus => 1,
            SurfaceTag::Genus(g) => g,
        }
    }

    pub fn euler_characteristic(self) -> i64 {
        2 - 2 * self.genus() as i64
    }

    pub fn from_genus(g: u32) -> Self {
        match g {
            0 => SurfaceTag::Sphere,
            1 => SurfaceTag::Torus,
            g => SurfaceTag::Genus(g),
        }
    }
}

impl fmt::Display for SurfaceTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurfaceTag::Sphere => f.write_str("sphere"),
            SurfaceTag::Torus => f.write_str("torus"),
            SurfaceTag::Genus(g) => write!(f, "genus-{g}"),
        }
    }
}

impl FromStr for SurfaceTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sphere" => Ok(SurfaceTag::Sphere),
            "torus" => Ok(SurfaceTag::Torus),
            _ => s
                .strip_prefix("genus-")
                .and_then(|g| g.parse::<u32>().ok())
                .map(SurfaceTag::from_genus)
                .ok_or_else(|| Error::InvalidInput(format!("unknown surface tag `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.src == self.dst
    }
}

/// One step of a face boundary walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Step {
    pub edge: usize,
    pub sign: i8,
}

impl Step {
    pub fn new(edge: usize, sign: i8) -> Self {
        Step { edge, sign }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Face {
    pub start: usize,
    pub walk: Vec<Step>,
}

impl Face {
    /// Number of boundary steps, n(f).
    pub fn len(&self) -> usize {
        self.walk.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walk.is_empty()
    }
}

/// How an edge meets a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Incidence {
    Out,
    In,
    Loop,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellComplex {
    pub surface: SurfaceTag,
    pub n_vertices: usize,
    pub edges: Vec<Edge>,
    pub faces: Vec<Face>,
}

impl CellComplex {
    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn n_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.n_vertices as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    pub fn tail(&self, s: Step) -> usize {
        let e = self.edges[s.edge];
        if s.sign > 0 {
            e.src
        } else {
            e.dst
        }
    }

    pub fn head(&self, s: Step) -> usize {
        let e = self.edges[s.edge];
        if s.sign > 0 {
            e.dst
        } else {
            e.src
        }
    }

    /// Edges meeting each vertex, in edge order. A loop is listed once.
    pub fn vertex_incidence(&self) -> Vec<Vec<(usize, Incidence)>> {
        let mut inc = vec![Vec::new(); self.n_vertices];
        for (i, e) in self.edges.iter().enumerate() {
            if e.is_loop() {
                inc[e.src].push((i, Incidence::Loop));
            } else {
                inc[e.src].push((i, Incidence::Out));
                inc[e.dst].push((i, Incidence::In));
            }
        }
        inc
    }

    /// Vertex degree counting a loop twice.
    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|e| (e.src == v) as usize + (e.dst == v) as usize)
            .sum()
    }

    pub fn is_trivalent(&self) -> bool {
        (0..self.n_vertices).all(|v| self.degree(v) == 3)
    }

    /// Distinct edges on the boundary of face `f`, sorted.
    pub fn face_edges(&self, f: usize) -> Vec<usize> {
        let set: BTreeSet<usize> = self.faces[f].walk.iter().map(|s| s.edge).collect();
        set.into_iter().collect()
    }

    /// Faces on either side of each edge, with repetition for self-adjacent faces.
    pub fn edge_faces(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.edges.len()];
        for (f, face) in self.faces.iter().enumerate() {
            for s in &face.walk {
                out[s.edge].push(f);
            }
        }
        out
    }

    /// Faces whose boundary walk uses some edge twice.
    pub fn self_adjacent_faces(&self) -> Vec<usize> {
        (0..self.faces.len())
            .filter(|&f| self.face_edges(f).len() < self.faces[f].walk.len())
            .collect()
    }

    /// Faces adjacent to `f` across an edge, excluding `f` itself.
    pub fn face_neighbours(&self, f: usize) -> Vec<usize> {
        let ef = self.edge_faces();
        let mut set = BTreeSet::new();
        for s in &self.faces[f].walk {
            for &g in &ef[s.edge] {
                if g != f {
                    set.insert(g);
                }
            }
        }
        set.into_iter().collect()
    }

    /// Lists every violated invariant. Empty means the complex is a valid closed
    /// oriented surface matching its tag.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if e.src >= self.n_vertices || e.dst >= self.n_vertices {
                out.push(format!("edge {i}: endpoint out of range"));
            }
        }
        if !out.is_empty() {
            return out;
        }
        let mut plus = vec![0usize; self.edges.len()];
        let mut minus = vec![0usize; self.edges.len()];
        for (f, face) in self.faces.iter().enumerate() {
            if face.walk.is_empty() {
                out.push(format!("face {f}: empty boundary walk"));
                continue;
            }
            if let Some(s) = face.walk.iter().find(|s| s.edge >= self.edges.len() || s.sign.abs() != 1) {
                out.push(format!("face {f}: bad step {}:{}", s.edge, s.sign));
                continue;
            }
            if self.tail(face.walk[0]) != face.start {
                out.push(format!("face {f}: walk does not leave start vertex {}", face.start));
            }
            let n = face.walk.len();
            for k in 0..n {
                let (a, b) = (face.walk[k], face.walk[(k + 1) % n]);
                if self.head(a) != self.tail(b) {
                    out.push(format!("face {f}: walk disconnected after step {k}"));
                }
            }
            for s in &face.walk {
                if s.sign > 0 {
                    plus[s.edge] += 1;
                } else {
                    minus[s.edge] += 1;
                }
            }
        }
        for e in 0..self.edges.len() {
            if plus[e] != 1 || minus[e] != 1 {
                out.push(format!(
                    "edge {e}: traversed {}x forward and {}x backward (need 1 and 1)",
                    plus[e], minus[e]
                ));
            }
        }
        let chi = self.euler_characteristic();
        if chi != self.surface.euler_characteristic() {
            out.push(format!(
                "Euler characteristic {chi} does not match {} ({})",
                self.surface,
                self.surface.euler_characteristic()
            ));
        }
        out
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!("invalid complex: {}", v.join("; "))))
        }
    }

    /// Rotates every face walk so the lexicographically smallest step comes first
    /// and moves the start vertex along with it.
    pub fn canonicalize(&mut self) {
        for face in &mut self.faces {
            let n = face.walk.len();
            if n == 0 {
                continue;
            }
            let best = (0..n)
                .min_by(|&a, &b| {
                    let ra = face.walk[a..].iter().chain(&face.walk[..a]);
                    let rb = face.walk[b..].iter().chain(&face.walk[..b]);
                    ra.cmp(rb)
                })
                .unwrap();
            face.walk.rotate_left(best);
        }
        for f in 0..self.faces.len() {
            let s = self.faces[f].walk.first().copied();
            if let Some(s) = s {
                self.faces[f].start = self.tail(s);
            }
        }
    }

    /// Splits face `f` into triangles around a new central vertex.
    pub fn subdivide_face(&self, f: usize) -> Result<CellComplex> {
        if f >= self.faces.len() {
            return Err(Error::InvalidInput(format!("face {f} out of range")));
        }
        let mut out = self.clone();
        let w = out.n_vertices;
        out.n_vertices += 1;
        let walk = self.faces[f].walk.clone();
        let spoke0 = out.edges.len();
        for s in &walk {
            out.edges.push(Edge { src: self.tail(*s), dst: w });
        }
        let n = walk.len();
        let mut tris = Vec::with_capacity(n);
        for (k, s) in walk.iter().enumerate() {
            tris.push(Face {
                start: self.tail(*s),
                walk: vec![*s, Step::new(spoke0 + (k + 1) % n, 1), Step::new(spoke0 + k, -1)],
            });
        }
        let mut tris = tris.into_iter();
        out.faces[f] = tris.next().unwrap();
        out.faces.extend(tris);
        out.canonicalize();
        Ok(out)
    }

    /// Cell-by-cell product of `a` over vertices and faces and `1/a` over edges.
    pub fn euler_state_sum(&self, a: f64) -> f64 {
        let mut z = 1.0;
        for _ in 0..self.n_vertices {
            z *= a;
        }
        for _ in &self.edges {
            z /= a;
        }
        for _ in &self.faces {
            z *= a;
        }
        z
    }
}
