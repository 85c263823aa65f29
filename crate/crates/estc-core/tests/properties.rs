//! Property-based checks of the algebraic layer.

use estc_core::coupling::coupling_matrices;
use estc_core::field::{FieldAmplitudes, FourVectorQ};
use estc_core::gamma::{DiracSet, M4};
use estc_core::lattice::LatticeIndex;
use estc_core::pairing::pair_matrix;
use num_complex::Complex64;
use proptest::prelude::*;

fn amplitude_table(seed: u64) -> FieldAmplitudes {
    estc_core::check::random_amplitudes(0.01, seed, 0.5)
}

fn even_point(n1: i32, n2: i32, n3: i32, n4: i32) -> LatticeIndex {
    let n = LatticeIndex::new(n1, n2, n3, n4);
    if n.is_even() {
        n
    } else {
        LatticeIndex::new(n1, n2, n3, n4 + 1)
    }
}

proptest! {
    #[test]
    fn dset_roundtrip(values in proptest::collection::vec(-10.0..10.0f64, 32)) {
        let mut coeffs = [Complex64::ZERO; 16];
        for (k, c) in coeffs.iter_mut().enumerate() {
            *c = Complex64::new(values[2 * k], values[2 * k + 1]);
        }
        let d = DiracSet(coeffs);
        let back = DiracSet::from_matrix(&d.to_matrix());
        for (a, b) in d.0.iter().zip(back.0.iter()) {
            prop_assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn pairing_is_hermitian_for_random_fields(
        seed in 0u64..1_000_000,
        n1 in -2i32..=2, n2 in -2i32..=2, n3 in -2i32..=2, n4 in -2i32..=2,
        q1 in -0.5f64..0.5, q4 in 0.5f64..1.5,
    ) {
        let f = amplitude_table(seed);
        let q = FourVectorQ::new(q1, 0.07, -0.13, q4);
        let m = LatticeIndex::ORIGIN;
        let n = even_point(n1, n2, n3, n4);
        let nm = pair_matrix(m, n, &q, &f).unwrap();
        let mn = pair_matrix(n, m, &q, &f).unwrap();
        prop_assert!((nm - mn.adjoint()).norm() < 1e-12);
    }

    #[test]
    fn pairing_vanishes_outside_reach(
        seed in 0u64..1_000_000,
        n1 in -4i32..=4, n2 in -4i32..=4, n3 in -4i32..=4, n4 in -4i32..=4,
    ) {
        let n = even_point(n1, n2, n3, n4);
        prop_assume!(n.g4d() > 2);
        let f = amplitude_table(seed);
        let q = FourVectorQ::new(0.1, 0.0, 0.0, 1.0);
        let nm = pair_matrix(LatticeIndex::ORIGIN, n, &q, &f).unwrap();
        prop_assert_eq!(nm, M4::zeros());
    }

    #[test]
    fn diagonal_coupling_matches_local_frequencies(
        n1 in -3i32..=3, n4 in -3i32..=3,
        q1 in -0.5f64..0.5, q4 in 0.5f64..1.5,
    ) {
        let n = even_point(n1, 0, 0, n4);
        let f = FieldAmplitudes::chiral(0.01, 0.007);
        let q = FourVectorQ::axial(q1, q4);
        let v = coupling_matrices(n, &q, &f).unwrap();
        let w = q.w(n, f.omega);
        // tr V(n, 0) = 4 and the gamma_4 component carries -w4.
        prop_assert!((v[0].trace() - Complex64::from(4.0)).norm() < 1e-13);
        let d = DiracSet::from_matrix(&v[0]);
        prop_assert!((d.0[4] - Complex64::from(-w[3])).norm() < 1e-13);
        prop_assert!((d.0[14] - Complex64::new(0.0, w[0])).norm() < 1e-13);
    }

    #[test]
    fn g4d_is_subadditive(
        a1 in -5i32..=5, a2 in -5i32..=5, a3 in -5i32..=5, a4 in -5i32..=5,
        b1 in -5i32..=5, b2 in -5i32..=5, b3 in -5i32..=5, b4 in -5i32..=5,
    ) {
        let a = LatticeIndex::new(a1, a2, a3, a4);
        let b = LatticeIndex::new(b1, b2, b3, b4);
        prop_assert!((a + b).g4d() <= a.g4d() + b.g4d());
        prop_assert_eq!((-a).g4d(), a.g4d());
    }
}
