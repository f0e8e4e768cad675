use super::CellComplex;
use crate::error::{Error, Result};
use std::collections::{BTreeMap, BTreeSet, VecDeque};

/// A set of edges together with the cells it fully contains.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Region {
    /// Sorted, distinct.
    pub edges: Vec<usize>,
    /// Vertices all of whose incident edges lie in `edges`.
    pub vertices: Vec<usize>,
    /// Faces all of whose boundary edges lie in `edges`.
    pub faces: Vec<usize>,
}

impl Region {
    pub fn new(c: &CellComplex, edges: impl IntoIterator<Item = usize>) -> Result<Region> {
        let set: BTreeSet<usize> = edges.into_iter().collect();
        if let Some(&e) = set.iter().find(|&&e| e >= c.n_edges()) {
            return Err(Error::InvalidInput(format!("edge {e} out of range")));
        }
        let inc = c.vertex_incidence();
        let vertices = (0..c.n_vertices)
            .filter(|&v| !inc[v].is_empty() && inc[v].iter().all(|(e, _)| set.contains(e)))
            .collect();
        let faces = (0..c.n_faces())
            .filter(|&f| c.faces[f].walk.iter().all(|s| set.contains(&s.edge)))
            .collect();
        Ok(Region { edges: set.into_iter().collect(), vertices, faces })
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains_edge(&self, e: usize) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    pub fn is_subset_of(&self, other: &Region) -> bool {
        self.edges.iter().all(|&e| other.contains_edge(e))
    }
}

/// A face set certified to be an embedded closed disk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiskRegion {
    /// All edges of the disk faces.
    pub region: Region,
    pub faces: Vec<usize>,
    /// Boundary edges in cyclic order.
    pub boundary: Vec<usize>,
    /// Edges shared by two disk faces.
    pub interior_edges: Vec<usize>,
    pub euler: i64,
}

impl DiskRegion {
    /// True when every edge of `r` is an interior edge of the disk.
    pub fn encloses(&self, r: &Region) -> bool {
        r.edges.iter().all(|e| self.interior_edges.binary_search(e).is_ok())
    }
}

/// Certifies that the union of `faces` is a disk: connected across edges,
/// Euler characteristic 1, one boundary circle, and no pinched vertices.
pub fn disk_from_faces(c: &CellComplex, faces: &[usize]) -> Result<DiskRegion> {
    let fset: BTreeSet<usize> = faces.iter().copied().collect();
    if fset.is_empty() {
        return Err(Error::RegionNotADisk("no faces".into()));
    }
    if let Some(&f) = fset.iter().find(|&&f| f >= c.n_faces()) {
        return Err(Error::InvalidInput(format!("face {f} out of range")));
    }
    let mut mult: BTreeMap<usize, usize> = BTreeMap::new();
    for &f in &fset {
        for s in &c.faces[f].walk {
            *mult.entry(s.edge).or_default() += 1;
        }
    }

    // connectivity through shared edges
    let ef = c.edge_faces();
    let first = *fset.iter().next().unwrap();
    let mut reached = BTreeSet::from([first]);
    let mut queue = VecDeque::from([first]);
    while let Some(f) = queue.pop_front() {
        for s in &c.faces[f].walk {
            for &g in &ef[s.edge] {
                if fset.contains(&g) && reached.insert(g) {
                    queue.push_back(g);
                }
            }
        }
    }
    if reached.len() != fset.len() {
        return Err(Error::RegionNotADisk("faces are not connected".into()));
    }

    let mut verts = BTreeSet::new();
    for &e in mult.keys() {
        verts.insert(c.edges[e].src);
        verts.insert(c.edges[e].dst);
    }
    let euler = verts.len() as i64 - mult.len() as i64 + fset.len() as i64;
    if euler != 1 {
        return Err(Error::RegionNotADisk(format!("Euler characteristic {euler}, need 1")));
    }

    let boundary_edges: Vec<usize> = mult.iter().filter(|(_, &m)| m == 1).map(|(&e, _)| e).collect();
    let interior_edges: Vec<usize> = mult.iter().filter(|(_, &m)| m >= 2).map(|(&e, _)| e).collect();
    if boundary_edges.is_empty() {
        return Err(Error::RegionNotADisk("no boundary".into()));
    }
    let mut around: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &e in &boundary_edges {
        around.entry(c.edges[e].src).or_default().push(e);
        around.entry(c.edges[e].dst).or_default().push(e);
    }
    if let Some((v, es)) = around.iter().find(|(_, es)| es.len() != 2) {
        return Err(Error::RegionNotADisk(format!("boundary vertex {v} has {} boundary edges", es.len())));
    }
    let boundary = trace_cycle(c, &boundary_edges, &around);
    if boundary.len() != boundary_edges.len() {
        return Err(Error::RegionNotADisk("boundary has several components".into()));
    }

    // interior vertices must be surrounded by disk faces
    let interior: BTreeSet<usize> = interior_edges.iter().copied().collect();
    for (v, inc) in c.vertex_incidence().iter().enumerate() {
        if verts.contains(&v) && !around.contains_key(&v) && !inc.iter().all(|(e, _)| interior.contains(e)) {
            return Err(Error::RegionNotADisk(format!("vertex {v} is not surrounded")));
        }
    }

    let region = Region::new(c, mult.keys().copied())?;
    Ok(DiskRegion { region, faces: fset.into_iter().collect(), boundary, interior_edges, euler })
}

fn trace_cycle(c: &CellComplex, edges: &[usize], around: &BTreeMap<usize, Vec<usize>>) -> Vec<usize> {
    let mut out = vec![edges[0]];
    let mut v = c.edges[edges[0]].dst;
    let mut prev = edges[0];
    loop {
        let es = &around[&v];
        let next = if es[0] == prev { es[1] } else { es[0] };
        if next == edges[0] || out.len() > edges.len() {
            break;
        }
        out.push(next);
        let e = c.edges[next];
        v = if e.src == v { e.dst } else { e.src };
        prev = next;
    }
    out
}

/// Faces within `radius` edge-adjacency steps of `seed`, certified as a disk.
pub fn disk_region(c: &CellComplex, seed: usize, radius: usize) -> Result<DiskRegion> {
    if seed >= c.n_faces() {
        return Err(Error::InvalidInput(format!("face {seed} out of range")));
    }
    let mut faces = BTreeSet::from([seed]);
    let mut frontier = vec![seed];
    for _ in 0..radius {
        let mut next = Vec::new();
        for f in frontier {
            for g in c.face_neighbours(f) {
                if faces.insert(g) {
                    next.push(g);
                }
            }
        }
        frontier = next;
    }
    let faces: Vec<usize> = faces.into_iter().collect();
    disk_from_faces(c, &faces)
}

/// The faces touching any of `edges`, certified as a disk.
pub fn hull_of_edges(c: &CellComplex, edges: &[usize]) -> Result<DiskRegion> {
    let ef = c.edge_faces();
    let mut faces = BTreeSet::new();
    for &e in edges {
        if e >= c.n_edges() {
            return Err(Error::InvalidInput(format!("edge {e} out of range")));
        }
        faces.extend(ef[e].iter().copied());
    }
    let faces: Vec<usize> = faces.into_iter().collect();
    disk_from_faces(c, &faces)
}

#[cfg(test)]
mod tests {
    use super::super::{build_standard, Family, SurfaceTag};
    use super::*;

    fn torus(fam: Family, k: usize) -> CellComplex {
        build_standard(SurfaceTag::Torus, fam, k).unwrap()
    }

    #[test]
    fn single_face_is_a_disk() {
        let c = torus(Family::SquareTorus, 4);
        let d = disk_region(&c, 0, 0).unwrap();
        assert_eq!(d.region.edges.len(), 4);
        assert_eq!(d.boundary.len(), 4);
        assert!(d.interior_edges.is_empty());
        assert_eq!(d.euler, 1);
    }

    #[test]
    fn small_torus_ring_wraps() {
        let c = torus(Family::SquareTorus, 2);
        assert!(matches!(disk_region(&c, 0, 1), Err(Error::RegionNotADisk(_))));
    }

    #[test]
    fn octahedron_face() {
        let c = build_standard(SurfaceTag::Sphere, Family::Octahedron, 1).unwrap();
        assert_eq!(disk_region(&c, 0, 0).unwrap().region.edges.len(), 3);
    }

    #[test]
    fn one_ring_on_larger_tori() {
        let c = torus(Family::SquareTorus, 4);
        let d = disk_region(&c, 5, 1).unwrap();
        assert_eq!(d.faces.len(), 5);
        assert_eq!(d.interior_edges.len(), 4);
        let c = torus(Family::SquareSkewTorus, 12);
        let d = disk_region(&c, 0, 1).unwrap();
        assert_eq!(d.faces.len(), 5);
        let c = torus(Family::SquareTorus, 3);
        assert!(disk_region(&c, 0, 1).is_err());
    }

    #[test]
    fn sphere_minus_nothing_is_not_a_disk() {
        let c = build_standard(SurfaceTag::Sphere, Family::Cube, 1).unwrap();
        let all: Vec<usize> = (0..6).collect();
        assert!(disk_from_faces(&c, &all).is_err());
        let five: Vec<usize> = (0..5).collect();
        let d = disk_from_faces(&c, &five).unwrap();
        assert_eq!(d.boundary.len(), 4);
    }

    #[test]
    fn edge_hull_contains_edge_in_interior() {
        let c = torus(Family::SquareTorus, 3);
        let d = hull_of_edges(&c, &[0]).unwrap();
        assert_eq!(d.faces.len(), 2);
        assert!(d.encloses(&Region::new(&c, [0]).unwrap()));
        assert!(!d.encloses(&Region::new(&c, [1]).unwrap()));
    }

    #[test]
    fn region_closure() {
        let c = torus(Family::SquareTorus, 3);
        let face = c.face_edges(4);
        let r = Region::new(&c, face.iter().copied()).unwrap();
        assert_eq!(r.faces, vec![4]);
        assert!(r.vertices.is_empty());
        assert!(Region::new(&c, [99]).is_err());
    }
}
