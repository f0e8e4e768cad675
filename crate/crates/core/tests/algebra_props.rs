use proptest::prelude::*;
use tqo_core::algebra::FiniteGroup;
use tqo_core::{builtin_fusion, builtin_group, FusionData};

#[test]
fn builtin_fusion_data_satisfies_its_equations() {
    for name in ["VecZ2", "VecZ3", "Fibonacci"] {
        let fd = builtin_fusion(name).unwrap();
        fd.validate(1e-12).unwrap();
        assert!(fd.pentagon_residual().unwrap() <= 1e-12, "{name}");
        assert!(fd.unitarity_residual().unwrap() <= 1e-12, "{name}");
        assert!(fd.dimension_residual() <= 1e-12, "{name}");
        assert_eq!(fd.dual[fd.unit], fd.unit);
        for a in 0..fd.labels {
            assert_eq!(fd.dual[fd.dual[a]], a);
        }
    }
}

#[test]
fn fibonacci_constants() {
    let fd = builtin_fusion("Fibonacci").unwrap();
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    assert!((fd.qdim[1] - phi).abs() < 1e-14);
    assert!((fd.total_dim_sq - (1.0 + phi * phi)).abs() < 1e-13);
    // F^{ttt}_t[1,1] = 1/phi
    assert!((fd.f(1, 1, 1, 1, 0, 0).unwrap().re - 1.0 / phi).abs() < 1e-14);
}

#[test]
fn corrupted_f_symbol_breaks_the_pentagon() {
    let mut fd = builtin_fusion("Fibonacci").unwrap();
    let key = *fd.fsymbol.keys().next_back().unwrap();
    let v = fd.fsymbol[&key];
    fd.fsymbol.insert(key, -v);
    assert!(fd.pentagon_residual().unwrap() > 0.1);
    assert!(fd.validate(1e-10).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn vec_zn_fuses_like_the_group(n in 2usize..6) {
        let fd = FusionData::vec_zn(n);
        let g = FiniteGroup::cyclic(n).unwrap();
        for a in 0..n {
            for b in 0..n {
                let got: Vec<usize> = fd.fuse(a, b).collect();
                prop_assert_eq!(got, vec![g.mul(a, b)]);
            }
            prop_assert_eq!(fd.dual[a], g.inv[a]);
        }
        prop_assert!(fd.pentagon_residual().unwrap() <= 1e-12);
    }

    #[test]
    fn group_text_round_trip(name in prop::sample::select(vec!["Z1", "Z2", "Z3", "Z4", "S3"])) {
        let g = builtin_group(name).unwrap();
        prop_assert_eq!(FiniteGroup::from_text(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn fusion_text_round_trip(name in prop::sample::select(vec!["VecZ2", "VecZ3", "Fibonacci"])) {
        let fd = builtin_fusion(name).unwrap();
        let back = FusionData::from_text(&fd.to_text(), 1e-10).unwrap();
        prop_assert_eq!(back.labels, fd.labels);
        for (k, v) in &fd.fsymbol {
            prop_assert!((back.fsymbol[k] - v).norm() < 1e-15);
        }
    }

    #[test]
    fn s3_inverses_and_associativity(a in 0usize..6, b in 0usize..6, c in 0usize..6) {
        let g = builtin_group("S3").unwrap();
        prop_assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
        prop_assert_eq!(g.mul(a, g.inv[a]), g.identity);
    }
}
