//! Closed-form structural parameters of the field lattice.
//!
//! The pairings N(m, m + s) admit explicit general-amplitude expressions:
//! twelve D sets N_1(m, s) for the first-generation shifts and 56 scalars
//! N_2(s) for the second generation, functions of the complex amplitudes
//! A_jk, the local frequencies w_k = q_k + m_k omega and
//! omega_pm = +-omega + 2 w_4. They determine which equations of the
//! infinite system interlock, and therefore the Fourier spectrum a given
//! lattice can imprint on the wave function: for the chiral lattice only
//! four N_1 and two N_2 survive, which is what collapses the problem to
//! harmonics along (n1, n4).
//!
//! The solver itself computes pairings numerically ([`crate::pairing`]);
//! these formulas are kept as an independent route and as the data behind
//! the `check` suite.

use crate::field::{FieldAmplitudes, FourVectorQ};
use crate::gamma::DiracSet;
use crate::lattice::LatticeIndex;
use num_complex::Complex64;

/// The twelve first-generation D sets and 56 second-generation scalars, in
/// the canonical order of the shift list (entries 1..=12 and 13..=68).
#[derive(Debug, Clone)]
pub struct StructuralParams {
    pub n1: [DiracSet; 12],
    pub n2: [Complex64; 56],
}

/// Evaluates the closed forms at harmonic m and four-momentum q.
pub fn structural_params(
    f: &FieldAmplitudes,
    m: LatticeIndex,
    q: &FourVectorQ,
) -> StructuralParams {
    let i = Complex64::i();
    let om = Complex64::from(f.omega);
    let w = q.w(m, f.omega);
    let (w1, w2, w3) = (
        Complex64::from(w[0]),
        Complex64::from(w[1]),
        Complex64::from(w[2]),
    );
    // omega_minus for shifts descending in n4, omega_plus for ascending.
    let om_m = Complex64::from(-f.omega + 2.0 * w[3]);
    let om_p = Complex64::from(f.omega + 2.0 * w[3]);

    let a = |j: usize, k: usize| f.amplitude(j, k);
    let ac = |j: usize, k: usize| f.amplitude(j, k).conj();

    let mut n1 = [DiracSet::ZERO; 12];
    {
        // Descending shifts (n4 = -1), direct amplitudes.
        let d = &mut n1[0].0; // (0, 0, -1, -1), wave 3
        d[0] = -2.0 * (a(3, 1) * w1 + a(3, 2) * w2);
        d[2] = i * a(3, 2) * om;
        d[3] = -i * a(3, 1) * om;
        d[10] = -a(3, 1) * om_m;
        d[11] = -a(3, 2) * om_m;

        let d = &mut n1[1].0; // (0, -1, 0, -1), wave 2
        d[0] = -2.0 * (a(2, 1) * w1 + a(2, 3) * w3);
        d[1] = i * a(2, 1) * om;
        d[2] = -i * a(2, 3) * om;
        d[9] = -a(2, 3) * om_m;
        d[10] = -a(2, 1) * om_m;

        let d = &mut n1[2].0; // (-1, 0, 0, -1), wave 1
        d[0] = -2.0 * (a(1, 2) * w2 + a(1, 3) * w3);
        d[1] = -i * a(1, 2) * om;
        d[3] = i * a(1, 3) * om;
        d[9] = -a(1, 3) * om_m;
        d[11] = -a(1, 2) * om_m;

        let d = &mut n1[3].0; // (1, 0, 0, -1), wave 4
        d[0] = -2.0 * (a(4, 2) * w2 + a(4, 3) * w3);
        d[1] = i * a(4, 2) * om;
        d[3] = -i * a(4, 3) * om;
        d[9] = -a(4, 3) * om_m;
        d[11] = -a(4, 2) * om_m;

        let d = &mut n1[4].0; // (0, 1, 0, -1), wave 5
        d[0] = -2.0 * (a(5, 1) * w1 + a(5, 3) * w3);
        d[1] = -i * a(5, 1) * om;
        d[2] = i * a(5, 3) * om;
        d[9] = -a(5, 3) * om_m;
        d[10] = -a(5, 1) * om_m;

        let d = &mut n1[5].0; // (0, 0, 1, -1), wave 6
        d[0] = -2.0 * (a(6, 1) * w1 + a(6, 2) * w2);
        d[2] = -i * a(6, 2) * om;
        d[3] = i * a(6, 1) * om;
        d[10] = -a(6, 1) * om_m;
        d[11] = -a(6, 2) * om_m;

        // Ascending shifts (n4 = +1), conjugated amplitudes.
        let d = &mut n1[6].0; // (0, 0, -1, 1), wave 6*
        d[0] = -2.0 * (ac(6, 1) * w1 + ac(6, 2) * w2);
        d[2] = i * ac(6, 2) * om;
        d[3] = -i * ac(6, 1) * om;
        d[10] = -ac(6, 1) * om_p;
        d[11] = -ac(6, 2) * om_p;

        let d = &mut n1[7].0; // (0, -1, 0, 1), wave 5*
        d[0] = -2.0 * (ac(5, 1) * w1 + ac(5, 3) * w3);
        d[1] = i * ac(5, 1) * om;
        d[2] = -i * ac(5, 3) * om;
        d[9] = -ac(5, 3) * om_p;
        d[10] = -ac(5, 1) * om_p;

        let d = &mut n1[8].0; // (-1, 0, 0, 1), wave 4*
        d[0] = -2.0 * (ac(4, 2) * w2 + ac(4, 3) * w3);
        d[1] = -i * ac(4, 2) * om;
        d[3] = i * ac(4, 3) * om;
        d[9] = -ac(4, 3) * om_p;
        d[11] = -ac(4, 2) * om_p;

        let d = &mut n1[9].0; // (1, 0, 0, 1), wave 1*
        d[0] = -2.0 * (ac(1, 2) * w2 + ac(1, 3) * w3);
        d[1] = i * ac(1, 2) * om;
        d[3] = -i * ac(1, 3) * om;
        d[9] = -ac(1, 3) * om_p;
        d[11] = -ac(1, 2) * om_p;

        let d = &mut n1[10].0; // (0, 1, 0, 1), wave 2*
        d[0] = -2.0 * (ac(2, 1) * w1 + ac(2, 3) * w3);
        d[1] = -i * ac(2, 1) * om;
        d[2] = i * ac(2, 3) * om;
        d[9] = -ac(2, 3) * om_p;
        d[10] = -ac(2, 1) * om_p;

        let d = &mut n1[11].0; // (0, 0, 1, 1), wave 3*
        d[0] = -2.0 * (ac(3, 1) * w1 + ac(3, 2) * w2);
        d[2] = -i * ac(3, 2) * om;
        d[3] = i * ac(3, 1) * om;
        d[10] = -ac(3, 1) * om_p;
        d[11] = -ac(3, 2) * om_p;
    }

    let two = Complex64::from(2.0);
    let ring = |x: Complex64, y: Complex64| (x + i * y) * (x - i * y);
    let n2 = [
        two * (a(1, 2) * a(4, 2)
            + a(1, 3) * a(4, 3)
            + a(2, 1) * a(5, 1)
            + a(2, 3) * a(5, 3)
            + a(3, 1) * a(6, 1)
            + a(3, 2) * a(6, 2)),
        two * (ac(1, 2) * ac(4, 2)
            + ac(1, 3) * ac(4, 3)
            + ac(2, 1) * ac(5, 1)
            + ac(2, 3) * ac(5, 3)
            + ac(3, 1) * ac(6, 1)
            + ac(3, 2) * ac(6, 2)),
        two * (a(3, 1) * ac(6, 1) + a(3, 2) * ac(6, 2)),
        two * (a(3, 1) * ac(5, 1) + a(2, 1) * ac(6, 1)),
        two * (a(3, 2) * ac(4, 2) + a(1, 2) * ac(6, 2)),
        two * (ac(1, 2) * a(3, 2) + a(4, 2) * ac(6, 2)),
        two * (ac(2, 1) * a(3, 1) + a(5, 1) * ac(6, 1)),
        two * (a(2, 1) * ac(5, 1) + a(2, 3) * ac(5, 3)),
        two * (a(2, 3) * ac(4, 3) + a(1, 3) * ac(5, 3)),
        two * (ac(1, 3) * a(2, 3) + a(4, 3) * ac(5, 3)),
        two * (a(1, 2) * ac(4, 2) + a(1, 3) * ac(4, 3)),
        two * (ac(1, 2) * a(4, 2) + ac(1, 3) * a(4, 3)),
        two * (a(1, 3) * ac(2, 3) + ac(4, 3) * a(5, 3)),
        two * (ac(2, 3) * a(4, 3) + ac(1, 3) * a(5, 3)),
        two * (ac(2, 1) * a(5, 1) + ac(2, 3) * a(5, 3)),
        two * (a(2, 1) * ac(3, 1) + ac(5, 1) * a(6, 1)),
        two * (a(1, 2) * ac(3, 2) + ac(4, 2) * a(6, 2)),
        two * (ac(3, 2) * a(4, 2) + ac(1, 2) * a(6, 2)),
        two * (ac(3, 1) * a(5, 1) + ac(2, 1) * a(6, 1)),
        two * (ac(3, 1) * a(6, 1) + ac(3, 2) * a(6, 2)),
        ring(a(3, 1), a(3, 2)),
        two * a(2, 1) * a(3, 1),
        two * a(1, 2) * a(3, 2),
        two * a(3, 2) * a(4, 2),
        two * a(3, 1) * a(5, 1),
        ring(a(2, 1), a(2, 3)),
        two * a(1, 3) * a(2, 3),
        two * a(2, 3) * a(4, 3),
        ring(a(1, 2), a(1, 3)),
        ring(a(4, 2), a(4, 3)),
        two * a(1, 3) * a(5, 3),
        two * a(4, 3) * a(5, 3),
        ring(a(5, 1), a(5, 3)),
        two * a(2, 1) * a(6, 1),
        two * a(1, 2) * a(6, 2),
        two * a(4, 2) * a(6, 2),
        two * a(5, 1) * a(6, 1),
        ring(a(6, 1), a(6, 2)),
        ring(ac(6, 1), ac(6, 2)),
        two * ac(5, 1) * ac(6, 1),
        two * ac(4, 2) * ac(6, 2),
        two * ac(1, 2) * ac(6, 2),
        two * ac(2, 1) * ac(6, 1),
        ring(ac(5, 1), ac(5, 3)),
        two * ac(4, 3) * ac(5, 3),
        two * ac(1, 3) * ac(5, 3),
        ring(ac(4, 2), ac(4, 3)),
        ring(ac(1, 2), ac(1, 3)),
        two * ac(2, 3) * ac(4, 3),
        two * ac(1, 3) * ac(2, 3),
        ring(ac(2, 1), ac(2, 3)),
        two * ac(3, 1) * ac(5, 1),
        two * ac(3, 2) * ac(4, 2),
        two * ac(1, 2) * ac(3, 2),
        two * ac(2, 1) * ac(3, 1),
        ring(ac(3, 1), ac(3, 2)),
    ];

    StructuralParams { n1, n2 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check::random_amplitudes;
    use crate::lattice::S69;
    use crate::pairing::pair_matrix;
    use approx::assert_abs_diff_eq;
    use nalgebra::Matrix4;

    const AM: f64 = 0.007071067811865475;

    #[test]
    fn chiral_reduction_counts() {
        let f = FieldAmplitudes::chiral(0.01, AM);
        let q = FourVectorQ::axial(0.3, 1.1);
        let p = structural_params(&f, LatticeIndex::new(2, 0, 0, 2), &q);

        let live_n1: Vec<usize> = (0..12).filter(|&k| !p.n1[k].is_zero(0.0)).collect();
        // Shifts (-+1, 0, 0, -+1): list entries 3, 4 (descending) and 9, 10
        // (ascending), zero-based 2, 3, 8, 9.
        assert_eq!(live_n1, vec![2, 3, 8, 9]);

        let live_n2: Vec<usize> = (0..56).filter(|&k| p.n2[k].norm() > 0.0).collect();
        assert_eq!(live_n2, vec![0, 1]); // (0, 0, 0, -+2)
        for &k in &live_n2 {
            assert_abs_diff_eq!(p.n2[k].re, 4.0 * AM * AM, epsilon = 1e-18);
            assert_abs_diff_eq!(p.n2[k].im, 0.0, epsilon = 1e-18);
        }
    }

    #[test]
    fn chiral_first_generation_values() {
        // N_1 at shift (-1, 0, 0, -1): position 0 reads 2 A_m (-w2 - i w3),
        // positions 1, 3 read -+i A_m omega, -A_m omega, positions 9, 11 the
        // same pattern with omega_minus.
        let omega = 0.01;
        let f = FieldAmplitudes::chiral(omega, AM);
        let q = FourVectorQ::new(0.02, 0.05, -0.03, 0.95);
        let m = LatticeIndex::new(0, 2, 0, 2);
        let w = q.w(m, omega);
        let om_m = -omega + 2.0 * w[3];
        let p = structural_params(&f, m, &q);

        let d = &p.n1[2].0;
        assert_abs_diff_eq!(d[0].re, 2.0 * AM * -w[1], epsilon = 1e-18);
        assert_abs_diff_eq!(d[0].im, 2.0 * AM * -w[2], epsilon = 1e-18);
        assert_abs_diff_eq!(d[1].im, -AM * omega, epsilon = 1e-18);
        assert_abs_diff_eq!(d[3].re, -AM * omega, epsilon = 1e-18);
        assert_abs_diff_eq!(d[9].im, -AM * om_m, epsilon = 1e-18);
        assert_abs_diff_eq!(d[11].re, -AM * om_m, epsilon = 1e-18);

        // Opposite spatial shift flips the odd signs.
        let d = &p.n1[3].0;
        assert_abs_diff_eq!(d[0].im, 2.0 * AM * w[2], epsilon = 1e-18);
        assert_abs_diff_eq!(d[1].im, AM * omega, epsilon = 1e-18);
        assert_abs_diff_eq!(d[9].im, AM * om_m, epsilon = 1e-18);
    }

    #[test]
    fn closed_forms_match_numerical_pairing() {
        // Random general amplitudes: every first-generation D set matches
        // the pairing matrix entrywise, and every second-generation pairing
        // is the listed scalar times the identity.
        let f = random_amplitudes(0.01, 0xABCDE, 0.3);
        let q = FourVectorQ::new(0.11, -0.07, 0.23, 0.91);
        let m = LatticeIndex::new(1, 1, 0, 0);
        let p = structural_params(&f, m, &q);

        for (idx, s) in S69[1..13].iter().enumerate() {
            let numeric = pair_matrix(m, m + *s, &q, &f).unwrap();
            let closed = p.n1[idx].to_matrix();
            assert_abs_diff_eq!((numeric - closed).norm(), 0.0, epsilon = 1e-12);
        }
        for (idx, s) in S69[13..].iter().enumerate() {
            let numeric = pair_matrix(m, m + *s, &q, &f).unwrap();
            let closed = Matrix4::identity() * p.n2[idx];
            assert_abs_diff_eq!((numeric - closed).norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn general_first_entry() {
        let f = random_amplitudes(0.01, 0x1234, 0.5);
        let q = FourVectorQ::axial(0.0, 1.0);
        let p = structural_params(&f, LatticeIndex::ORIGIN, &q);
        let a = |j, k| f.amplitude(j, k);
        let expect = 2.0
            * (a(1, 2) * a(4, 2)
                + a(1, 3) * a(4, 3)
                + a(2, 1) * a(5, 1)
                + a(2, 3) * a(5, 3)
                + a(3, 1) * a(6, 1)
                + a(3, 2) * a(6, 2));
        assert_abs_diff_eq!((p.n2[0] - expect).norm(), 0.0, epsilon = 1e-16);
    }
}
