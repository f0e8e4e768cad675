use proptest::prelude::*;
use std::collections::{BTreeMap, BTreeSet};
use tqo_core::complex::{build_standard, disk_region};
use tqo_core::{CellComplex, Family, SurfaceTag};

fn sizes(f: Family) -> std::ops::RangeInclusive<usize> {
    if f.surface() == SurfaceTag::Sphere {
        1..=1
    } else {
        1..=6
    }
}

fn any_complex() -> impl Strategy<Value = CellComplex> {
    prop::sample::select(Family::ALL.to_vec())
        .prop_flat_map(|f| sizes(f).prop_map(move |n| build_standard(f.surface(), f, n).unwrap()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn builtins_validate_with_matching_euler(c in any_complex()) {
        prop_assert!(c.validate().is_empty(), "{:?}", c.validate());
        prop_assert_eq!(c.euler_characteristic(), c.surface.euler_characteristic());
    }

    #[test]
    fn text_round_trip(c in any_complex()) {
        prop_assert_eq!(CellComplex::from_text(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn euler_state_sum_is_a_power(c in any_complex(), a in 0.1f64..10.0) {
        let want = a.powi(c.euler_characteristic() as i32);
        prop_assert!((c.euler_state_sum(a) - want).abs() <= 1e-12 * want);
    }

    #[test]
    fn subdivision_keeps_validity_and_euler(c in any_complex(), pick in any::<prop::sample::Index>()) {
        let f = pick.index(c.n_faces());
        let d = c.subdivide_face(f).unwrap();
        prop_assert!(d.validate().is_empty());
        prop_assert_eq!(d.euler_characteristic(), c.euler_characteristic());
        prop_assert_eq!(d.n_faces(), c.n_faces() + c.faces[f].len() - 1);
    }

    #[test]
    fn certified_disks_are_disks(c in any_complex(), pick in any::<prop::sample::Index>(), radius in 0usize..3) {
        let seed = pick.index(c.n_faces());
        let Ok(d) = disk_region(&c, seed, radius) else { return Ok(()) };
        prop_assert_eq!(d.euler, 1);
        // each face edge is used once (boundary) or twice (interior)
        let mut uses: BTreeMap<usize, usize> = BTreeMap::new();
        for &f in &d.faces {
            for s in &c.faces[f].walk {
                *uses.entry(s.edge).or_default() += 1;
            }
        }
        let boundary: BTreeSet<usize> = uses.iter().filter(|(_, &k)| k == 1).map(|(&e, _)| e).collect();
        prop_assert_eq!(&boundary, &d.boundary.iter().copied().collect::<BTreeSet<_>>());
        prop_assert!(uses.values().all(|&k| k <= 2));
        // the boundary is one closed walk: consecutive edges share a vertex
        let ends = |e: usize| [c.edges[e].src, c.edges[e].dst];
        for w in 0..d.boundary.len() {
            let (a, b) = (d.boundary[w], d.boundary[(w + 1) % d.boundary.len()]);
            prop_assert!(ends(a).iter().any(|v| ends(b).contains(v)), "{a} {b}");
        }
        // connected across shared edges
        let mut seen = BTreeSet::from([d.faces[0]]);
        let mut stack = vec![d.faces[0]];
        while let Some(f) = stack.pop() {
            for g in c.face_neighbours(f) {
                if d.faces.contains(&g) && seen.insert(g) {
                    stack.push(g);
                }
            }
        }
        prop_assert_eq!(seen.len(), d.faces.len());
    }
}
