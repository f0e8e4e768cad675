use nalgebra::DMatrix;
use proptest::prelude::*;
use std::sync::OnceLock;
use tqo_core::complex::{build_standard, disk_from_faces, hull_of_edges};
use tqo_core::verify::{check_tqo0, check_tqo1, check_tqo2};
use tqo_core::{builtin_fusion, builtin_group, dw, lw, Family, Ground, LatticeModel, LocalOperator, Region, Settings, C64};

fn dw_model(name: &str, f: Family, n: usize) -> LatticeModel {
    dw::build(&build_standard(f.surface(), f, n).unwrap(), &builtin_group(name).unwrap(), &Settings::default()).unwrap()
}

fn space(m: &LatticeModel) -> Ground {
    Ground::compute(m, &Settings::default()).unwrap()
}

/// Z2 on square-torus(3) with its ground space, shared across proptest cases.
fn square3() -> &'static (LatticeModel, Ground) {
    static CELL: OnceLock<(LatticeModel, Ground)> = OnceLock::new();
    CELL.get_or_init(|| {
        let m = dw_model("Z2", Family::SquareTorus, 3);
        let g = space(&m);
        (m, g)
    })
}

/// Every region of at most two edges whose hull encloses it passes.
fn all_small_regions_pass(m: &LatticeModel, g: &Ground) -> usize {
    let s = Settings::default();
    let ne = m.complex.n_edges();
    let mut n = 0;
    for a in 0..ne {
        for b in a..ne {
            let edges: Vec<usize> = if a == b { vec![a] } else { vec![a, b] };
            let Ok(disk) = hull_of_edges(&m.complex, &edges) else { continue };
            let region = Region::new(&m.complex, edges).unwrap();
            if !disk.encloses(&region) {
                continue;
            }
            let r = check_tqo1(m, g, &region, &disk, &s).unwrap();
            assert!(r.passed(), "{} {:?}: {:?}", m.descriptor, region.edges, r.worst());
            n += 1;
        }
    }
    n
}

#[test]
fn compressed_identity_is_the_identity() {
    let s = Settings::default();
    let (m, g) = square3();
    let g = g.space().unwrap();
    let blocks = g.blocks(&[0, 1], &s).unwrap();
    let id = LocalOperator::diagonal(2, 2, vec![1.0; 4]);
    let c = blocks.compress(&id);
    assert!((c - DMatrix::<C64>::identity(g.rank(), g.rank())).norm() <= 1e-10, "{}", m.descriptor);
}

#[test]
fn compressed_hermitian_stays_hermitian() {
    let s = Settings::default();
    let m = lw::build(
        &build_standard(Family::HoneycombSkewTorus.surface(), Family::HoneycombSkewTorus, 3).unwrap(),
        &builtin_fusion("Fibonacci").unwrap(),
        &s,
    )
    .unwrap();
    let g = space(&m);
    let g = g.space().unwrap();
    let blocks = g.blocks(&[0], &s).unwrap();
    let o = LocalOperator::from_columns(2, 1, 0.0, |l| match l {
        0 => vec![(0, C64::new(0.3, 0.0)), (1, C64::new(0.5, -0.7))],
        _ => vec![(0, C64::new(0.5, 0.7)), (1, C64::new(-1.1, 0.0))],
    });
    let c = blocks.compress(&o);
    assert!((&c - c.adjoint()).norm() <= 1e-10);
}

#[test]
fn sphere_regions_pass() {
    let m = dw_model("Z2", Family::Octahedron, 1);
    assert!(all_small_regions_pass(&m, &space(&m)) > 0);
    let m = lw::build(
        &build_standard(Family::Cube.surface(), Family::Cube, 1).unwrap(),
        &builtin_fusion("Fibonacci").unwrap(),
        &Settings::default(),
    )
    .unwrap();
    assert!(all_small_regions_pass(&m, &space(&m)) > 0);
}

#[test]
fn tqo2_survives_larger_disks() {
    let s = Settings::default();
    let m = dw_model("Z2", Family::SquareSkewTorus, 12);
    let g = space(&m);
    let a = Region::new(&m.complex, [0]).unwrap();
    let mut b = hull_of_edges(&m.complex, &[0]).unwrap();
    let mut chain = 0;
    // grow B one neighbouring face at a time while it stays a disk
    loop {
        assert!(a.is_subset_of(&b.region));
        let r = check_tqo2(&m, &g, &a, &b, &s).unwrap();
        assert!(r.passed(), "{:?}: {:?}", b.faces, r.worst());
        chain += 1;
        let next = b
            .faces
            .iter()
            .flat_map(|&f| m.complex.face_neighbours(f))
            .filter(|f| !b.faces.contains(f))
            .find_map(|f| {
                let mut faces = b.faces.clone();
                faces.push(f);
                disk_from_faces(&m.complex, &faces).ok()
            });
        match next {
            Some(n) => b = n,
            None => break,
        }
    }
    assert!(chain >= 3, "{chain}");
}

#[test]
fn reports_are_reproducible() {
    let s = Settings::default();
    let m = dw_model("S3", Family::SquareTorus, 1);
    assert_eq!(check_tqo0(&m, &s).unwrap(), check_tqo0(&m, &s).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn random_small_regions_pass(a in 0usize..18, b in 0usize..18) {
        let s = Settings::default();
        let (m, g) = square3();
        let edges: Vec<usize> = if a == b { vec![a] } else { vec![a, b] };
        let Ok(disk) = hull_of_edges(&m.complex, &edges) else { return Ok(()) };
        let region = Region::new(&m.complex, edges).unwrap();
        prop_assume!(disk.encloses(&region));
        let r = check_tqo1(m, g, &region, &disk, &s).unwrap();
        prop_assert!(r.passed(), "{:?}", r.worst());
    }
}
