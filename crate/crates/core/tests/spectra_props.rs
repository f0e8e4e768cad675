use proptest::prelude::*;
use tqo_core::complex::build_standard;
use tqo_core::spectra::{gram, projector_rank};
use tqo_core::{builtin_group, dw, Family, LocalOperator, Settings, SparseOperator, C64};

const N: usize = 6;

fn sparse() -> impl Strategy<Value = SparseOperator> {
    prop::collection::vec((0..N, 0..N, -2.0f64..2.0, -2.0f64..2.0), 0..14).prop_map(|t| {
        SparseOperator::from_triplets(N, t.into_iter().map(|(i, j, a, b)| (i, j, C64::new(a, b))), false, 0.0, 0.0).unwrap()
    })
}

fn projector() -> impl Strategy<Value = SparseOperator> {
    prop::collection::vec(any::<bool>(), N)
        .prop_map(|d| SparseOperator::diagonal(&d.iter().map(|&x| x as u8 as f64).collect::<Vec<_>>()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn compose_is_associative(a in sparse(), b in sparse(), c in sparse()) {
        let l = a.compose(&b, 0.0).unwrap().compose(&c, 0.0).unwrap();
        let r = a.compose(&b.compose(&c, 0.0).unwrap(), 0.0).unwrap();
        prop_assert!(l.max_abs_diff(&r).unwrap() <= 1e-12);
    }

    #[test]
    fn compose_matches_dense(a in sparse(), b in sparse()) {
        let d = a.to_dense() * b.to_dense();
        prop_assert!((a.compose(&b, 0.0).unwrap().to_dense() - d).norm() <= 1e-12);
    }

    #[test]
    fn adjoint_is_an_involution(a in sparse()) {
        prop_assert_eq!(a.adjoint().adjoint().max_abs_diff(&a).unwrap(), 0.0);
    }

    #[test]
    fn gram_is_the_trace_form(ops in prop::collection::vec(sparse(), 1..5), p in projector()) {
        let g = gram(&ops, &p, "test").unwrap();
        let pd = p.to_dense();
        for i in 0..ops.len() {
            for j in 0..ops.len() {
                let want = (ops[i].to_dense().adjoint() * ops[j].to_dense() * &pd).trace();
                prop_assert!((g.matrix[(i, j)] - want).norm() <= 1e-10);
            }
        }
        prop_assert!(g.psd_violation() <= 1e-10 * g.norm().max(1.0));
    }

    #[test]
    fn projector_rank_is_the_trace(p in projector()) {
        let t = p.trace().re.round() as usize;
        prop_assert_eq!(projector_rank(&p, &Settings::default().tol).unwrap(), t);
    }
}

#[test]
fn gram_rejects_mismatched_dimensions() {
    assert!(gram(&[SparseOperator::identity(3)], &SparseOperator::identity(4), "x").is_err());
}

#[test]
fn toric_code_single_edge_gram_is_scalar() {
    // one edge of the toric code sees the maximally mixed state, so no Pauli
    // combination annihilates the ground space: G = rank * identity
    let s = Settings::default();
    let c = build_standard(Family::SquareTorus.surface(), Family::SquareTorus, 2).unwrap();
    let m = dw::build(&c, &builtin_group("Z2").unwrap(), &s).unwrap();
    let p = m.ground_projector_explicit(&s).unwrap();
    let one = C64::new(1.0, 0.0);
    let paulis = [
        LocalOperator::diagonal(2, 1, vec![1.0, 1.0]),
        LocalOperator::from_columns(2, 1, 0.0, |l| vec![(1 - l, one)]),
        LocalOperator::diagonal(2, 1, vec![1.0, -1.0]),
        LocalOperator::from_columns(2, 1, 0.0, |l| vec![(1 - l, if l == 0 { one } else { -one })]),
    ];
    let ops: Vec<SparseOperator> = paulis.iter().map(|o| m.embed(&[0], o, &s.caps).unwrap()).collect();
    let g = gram(&ops, &p, "toric one edge").unwrap();
    let r = p.trace().re;
    assert_eq!(r.round(), 4.0);
    for i in 0..4 {
        for j in 0..4 {
            let want = if i == j { r } else { 0.0 };
            assert!((g.matrix[(i, j)] - C64::new(want, 0.0)).norm() <= 1e-10, "{i} {j}: {}", g.matrix[(i, j)]);
        }
    }
    assert!(g.null_space(1e-8).is_empty());
}
