use nalgebra::DMatrix;
use proptest::prelude::*;
use qtree_core::occupation::gtree_to_xz;
use qtree_core::spin::{basis_covariance, basis_expectations};
use qtree_core::{
    adjoint_rotation, ladder_xz, mode_unitary, GTree, GeneratorSet, Letter, ModeHamiltonian,
    PauliTerm, QuadraticHamiltonian, QubitTree, C64,
};

fn letter() -> impl Strategy<Value = Letter> {
    prop_oneof![
        Just(Letter::I),
        Just(Letter::X),
        Just(Letter::Y),
        Just(Letter::Z)
    ]
}

fn term(width: usize) -> impl Strategy<Value = PauliTerm> {
    (0u8..4, prop::collection::vec(letter(), width))
        .prop_map(|(q, ls)| PauliTerm::from_letters(q, &ls))
}

fn terms(n: usize) -> impl Strategy<Value = Vec<PauliTerm>> {
    (1usize..140).prop_flat_map(move |w| prop::collection::vec(term(w), n))
}

fn gtree() -> impl Strategy<Value = GTree> {
    (1u32..40).prop_flat_map(|m| {
        prop::collection::vec(any::<prop::sample::Index>(), m as usize - 1).prop_map(|picks| {
            let parents: Vec<(u32, u32)> = picks
                .iter()
                .enumerate()
                .map(|(c, i)| (c as u32 + 1, i.index(c + 1) as u32))
                .collect();
            GTree::from_parents(0, &parents).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn product_is_associative(ts in terms(3)) {
        let ab_c = ts[0].multiply(&ts[1]).unwrap().multiply(&ts[2]).unwrap();
        let a_bc = ts[0].multiply(&ts[1].multiply(&ts[2]).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
    }

    #[test]
    fn swapping_factors_flips_sign_iff_anticommuting(ts in terms(2)) {
        let ab = ts[0].multiply(&ts[1]).unwrap();
        let ba = ts[1].multiply(&ts[0]).unwrap();
        let expected = if ts[0].anticommutes(&ts[1]).unwrap() { ba.times_i(2) } else { ba };
        prop_assert_eq!(ab, expected);
    }

    #[test]
    fn words_square_to_identity(ts in terms(1)) {
        let w = ts[0].word();
        let sq = w.multiply(&w).unwrap();
        prop_assert!(sq.is_identity_word());
        prop_assert_eq!(sq.phase(), 0);
    }

    #[test]
    fn display_round_trips(ts in terms(1)) {
        let parsed: PauliTerm = ts[0].to_string().parse().unwrap();
        prop_assert_eq!(parsed, ts[0].clone());
    }

    #[test]
    fn dense_product_matches_symbolic(ts in (1usize..5).prop_flat_map(|w| prop::collection::vec(term(w), 2))) {
        let sym = ts[0].multiply(&ts[1]).unwrap().to_dense().unwrap();
        let dense = &ts[0].to_dense().unwrap() * &ts[1].to_dense().unwrap();
        prop_assert!(sym.max_deviation(&dense) < 1e-12);
    }

    #[test]
    fn occupation_maps_round_trip(g in gtree(), seed in any::<u64>()) {
        let tree = gtree_to_xz(&g).unwrap();
        let occ = ladder_xz(&tree).unwrap().occupation().clone();
        let n: Vec<bool> = (0..occ.len()).map(|i| (seed.rotate_left(i as u32 % 64) ^ (i as u64 * 0x9e37)) & 1 == 1).collect();
        prop_assert_eq!(occ.inverse(&occ.forward(&n).unwrap()).unwrap(), n.clone());
        prop_assert_eq!(occ.forward(&occ.inverse(&n).unwrap()).unwrap(), n);
    }

    #[test]
    fn gtree_encodings_give_valid_generators(g in gtree()) {
        let tree = gtree_to_xz(&g).unwrap();
        prop_assert!(GeneratorSet::from_tree(&tree).validate().passed());
    }

    #[test]
    fn rotations_are_special_orthogonal(
        levels in 1u32..4,
        coeffs in prop::collection::vec((0usize..15, 0usize..15, -2.0f64..2.0), 1..12),
        tau in 0.0f64..2.0,
    ) {
        let tree = QubitTree::cf_binary(levels).unwrap();
        let gs = GeneratorSet::from_tree(&tree);
        let n = gs.len();
        let mut h = QuadraticHamiltonian::new(&gs, tau);
        for (j, k, v) in coeffs {
            if j % n != k % n {
                h.add_term(j % n, k % n, v).unwrap();
            }
        }
        let r = adjoint_rotation(&h).unwrap();
        prop_assert!(r.orthogonality_error() < 1e-10);
        prop_assert!((r.determinant() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn basis_covariance_is_antisymmetric(levels in 1u32..5, seed in any::<u64>()) {
        let tree = QubitTree::cf_binary(levels).unwrap();
        let gs = GeneratorSet::from_tree(&tree);
        let bits: Vec<bool> = (0..tree.node_count()).map(|i| (seed >> (i % 64)) & 1 == 1).collect();
        let m = basis_covariance(&gs, &bits).unwrap();
        prop_assert!((&m + m.transpose()).amax() < 1e-12);
        let v = basis_expectations(&gs, &bits).unwrap();
        prop_assert!(v.iter().all(|x| x.abs() == 0.0 || x.abs() == 1.0));
    }

    #[test]
    fn mode_unitaries_are_unitary(
        entries in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 16),
        tau in -2.0f64..2.0,
    ) {
        let a = DMatrix::from_fn(4, 4, |r, c| C64::new(entries[4 * r + c].0, entries[4 * r + c].1));
        let h = ModeHamiltonian::from_matrix((&a + a.adjoint()).scale(0.5)).unwrap();
        prop_assert!(mode_unitary(&h, tau).unwrap().unitarity_error() < 1e-10);
    }
}
