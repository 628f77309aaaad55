use hodgeext::exact::{Matrix, Scalar, Subspace};
use hodgeext::filtration::{monodromy_weight_filtration, NilpotentOp};
use hodgeext::singularity::{self, BPSingularity};
use hodgeext::verify::{gen, rng};
use hodgeext::{ncext, oracle, quiver};
use proptest::prelude::*;

fn scalar() -> impl Strategy<Value = Scalar> {
    (-20i64..=20, 1i64..=9, -20i64..=20, 1i64..=9)
        .prop_map(|(a, b, c, d)| Scalar::complex(Scalar::frac(a, b), Scalar::frac(c, d)))
}

fn matrix(max: usize) -> impl Strategy<Value = Matrix> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        proptest::collection::vec(-3i64..=3, r * c)
            .prop_map(move |v| Matrix::from_fn(r, c, |i, j| Scalar::int(v[i * c + j])))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scalar_field_laws(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        if a != Scalar::int(0) {
            prop_assert_eq!(&a * &a.inv().unwrap(), Scalar::int(1));
        }
        prop_assert_eq!(a.conj().conj(), a.clone());
    }

    #[test]
    fn scalar_text_round_trip(a in scalar()) {
        let back: Scalar = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn rank_nullity(a in matrix(5)) {
        prop_assert_eq!(a.rank() + Subspace::kernel(&a).dim(), a.cols());
        prop_assert_eq!(a.rank(), a.transpose().rank());
        prop_assert_eq!(Subspace::image(&a).dim(), a.rank());
    }

    #[test]
    fn inverse_of_unimodular(seed in any::<u64>(), d in 1usize..=5) {
        let p = gen::unimodular(&mut rng(seed), d);
        prop_assert_eq!(p.det().unwrap(), Scalar::int(1));
        prop_assert_eq!(&p * &p.inverse().unwrap(), Matrix::identity(d));
    }

    #[test]
    fn weight_filtration_matches_oracle(seed in any::<u64>(), d in 1usize..=6, w in -3i64..=3) {
        let n = NilpotentOp::new(gen::nilpotent(&mut rng(seed), d)).unwrap();
        let built = monodromy_weight_filtration(&n, w);
        prop_assert_eq!(&built.filtration, &oracle::jordan_weight_filtration(&n, w));
        prop_assert!(hodgeext::filtration::graded_dims_symmetric(&built));
    }

    #[test]
    fn spectrum_is_symmetric(exps in proptest::collection::vec(2u32..=7, 1..=3)) {
        let s = BPSingularity::new(exps).unwrap();
        let spec = singularity::spectrum(&s);
        prop_assert_eq!(spec.len() as u64, singularity::milnor_number(&s));
        prop_assert!(spec.is_symmetric(s.n()));
        prop_assert!(singularity::good_basis_check(&s).antidiagonal);
    }

    #[test]
    fn extension_monodromy(seed in any::<u64>(), d in 1usize..=4) {
        let t = gen::unipotent(&mut rng(seed), d);
        for q in [quiver::extend_shriek(&t).unwrap(), quiver::extend_star(&t).unwrap(), quiver::intermediate_extension(&t).unwrap()] {
            prop_assert_eq!(q.monodromy(), t.clone());
            prop_assert_eq!(q.dual().dual(), q);
        }
        prop_assert!(quiver::intermediate_is_image(&t).unwrap());
    }

    #[test]
    fn gluing_round_trip(seed in any::<u64>()) {
        let d = gen::gluing_diagram(&mut rng(seed));
        prop_assert!(quiver::gluing_round_trip(&d).unwrap().is_some());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn extension_weight_and_pairing(seed in any::<u64>()) {
        let (input, idx) = gen::polarized_input(&mut rng(seed), 4);
        let ext = ncext::extend(&input, &idx).unwrap();
        prop_assert!(ncext::weight_check(&ext, input.weight, ext.l).unwrap().passes);
        prop_assert!(ext.s_tilde.is_invertible());
        let sign = Scalar::sign_pow(ext.weight);
        prop_assert_eq!(ext.s_tilde.transpose(), ext.s_tilde.scale(&sign));
    }
}
