//! Coupling matrices of the Fourier-space Dirac system.
//!
//! Substituting the Floquet-Bloch expansion into the Dirac equation turns it
//! into one matrix equation per lattice harmonic n, coupling the bispinor
//! amplitude at n to its thirteen-point stencil n + s, s in S13:
//!
//!   sum_{s in S13} V(n, s) c(n + s) = 0.
//!
//! The diagonal coefficient V(n, 0) carries the local frequencies
//! w_k = q_k + n_k omega; the twelve first-generation coefficients carry one
//! wave amplitude each, -i A_jk gamma_k for the shift -sigma_j and
//! -i conj(A_jk) gamma_k for +sigma_j, where sigma_j is the harmonic shift of
//! wave j. All of them are sparse in the D-set representation.

use crate::error::{Error, Result};
use crate::field::{wave_shift, FieldAmplitudes, FourVectorQ};
use crate::gamma::{DiracSet, M4};
use crate::lattice::{LatticeIndex, S13};
use num_complex::Complex64;

/// Basis position of gamma_k for k = 1, 2, 3.
const GAMMA_POS: [usize; 3] = [14, 15, 13];

fn ci(im: f64) -> Complex64 {
    Complex64::new(0.0, im)
}

/// D sets of V(n, s) for every s in S13, in canonical stencil order.
pub fn coupling_dsets(
    n: LatticeIndex,
    q: &FourVectorQ,
    f: &FieldAmplitudes,
) -> Result<[DiracSet; 13]> {
    if !n.is_even() {
        return Err(Error::ParityViolation(n.n1, n.n2, n.n3, n.n4));
    }
    let mut sets = [DiracSet::ZERO; 13];

    let w = q.w(n, f.omega);
    let diag = &mut sets[0].0;
    diag[0] = Complex64::new(1.0, 0.0);
    diag[4] = Complex64::new(-w[3], 0.0);
    diag[13] = ci(w[2]);
    diag[14] = ci(w[0]);
    diag[15] = ci(w[1]);

    for j in 1..=6 {
        let sigma = wave_shift(j);
        let minus = stencil_slot(-sigma);
        let plus = stencil_slot(sigma);
        for k in 1..=3 {
            let a = f.amplitude(j, k);
            sets[minus].0[GAMMA_POS[k - 1]] += -Complex64::i() * a;
            sets[plus].0[GAMMA_POS[k - 1]] += -Complex64::i() * a.conj();
        }
    }
    Ok(sets)
}

/// Matrix form of the thirteen coupling coefficients.
pub fn coupling_matrices(
    n: LatticeIndex,
    q: &FourVectorQ,
    f: &FieldAmplitudes,
) -> Result<[M4; 13]> {
    let sets = coupling_dsets(n, q, f)?;
    Ok(std::array::from_fn(|i| sets[i].to_matrix()))
}

/// Index of a shift within the canonical stencil order.
pub fn stencil_slot(s: LatticeIndex) -> usize {
    S13.iter()
        .position(|&t| t == s)
        .unwrap_or_else(|| unreachable!("{s} is not a stencil shift"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const AM: f64 = 0.007071067811865475;

    #[test]
    fn free_diagonal_term() {
        let f = FieldAmplitudes::chiral(0.01, 0.0);
        let q = FourVectorQ::axial(0.0, 0.7);
        let sets = coupling_dsets(LatticeIndex::ORIGIN, &q, &f).unwrap();
        for (k, v) in sets[0].0.iter().enumerate() {
            match k {
                0 => assert_eq!(*v, Complex64::new(1.0, 0.0)),
                4 => assert_eq!(*v, Complex64::new(-0.7, 0.0)),
                _ => assert_eq!(*v, Complex64::ZERO),
            }
        }
        for s in &sets[1..] {
            assert!(s.is_zero(0.0));
        }
    }

    #[test]
    fn chiral_backward_wave_entries() {
        // Shift (-1, 0, 0, -1) carries wave 1: positions 13, 15 read
        // (-i a13 + b13, -i a12 + b12) = (A_m, -i A_m).
        let f = FieldAmplitudes::chiral(0.01, AM);
        let q = FourVectorQ::axial(0.02, 1.0);
        let sets = coupling_dsets(LatticeIndex::ORIGIN, &q, &f).unwrap();
        let slot = stencil_slot(LatticeIndex::new(-1, 0, 0, -1));
        let d = &sets[slot].0;
        assert_abs_diff_eq!(d[13].re, AM, epsilon = 1e-16);
        assert_abs_diff_eq!(d[13].im, 0.0, epsilon = 1e-16);
        assert_abs_diff_eq!(d[15].re, 0.0, epsilon = 1e-16);
        assert_abs_diff_eq!(d[15].im, -AM, epsilon = 1e-16);
        assert_eq!(d[14], Complex64::ZERO);
    }

    #[test]
    fn chiral_has_no_transverse_wave_amplitudes() {
        let f = FieldAmplitudes::chiral(0.01, AM);
        let q = FourVectorQ::axial(0.0, 1.0);
        let sets = coupling_dsets(LatticeIndex::ORIGIN, &q, &f).unwrap();
        for shift in [
            LatticeIndex::new(0, 0, -1, -1),
            LatticeIndex::new(0, -1, 0, -1),
            LatticeIndex::new(0, 1, 0, -1),
            LatticeIndex::new(0, 0, 1, -1),
            LatticeIndex::new(0, 0, -1, 1),
            LatticeIndex::new(0, -1, 0, 1),
            LatticeIndex::new(0, 1, 0, 1),
            LatticeIndex::new(0, 0, 1, 1),
        ] {
            assert!(sets[stencil_slot(shift)].is_zero(0.0), "shift {shift}");
        }
    }

    #[test]
    fn rejects_odd_harmonic() {
        let f = FieldAmplitudes::chiral(0.01, AM);
        let q = FourVectorQ::axial(0.0, 1.0);
        let err = coupling_dsets(LatticeIndex::new(1, 0, 0, 0), &q, &f).unwrap_err();
        assert!(matches!(err, Error::ParityViolation(1, 0, 0, 0)));
    }

    #[test]
    fn local_frequencies_shift_with_harmonic() {
        let f = FieldAmplitudes::chiral(0.01, AM);
        let q = FourVectorQ::new(0.1, 0.2, 0.3, 1.5);
        let n = LatticeIndex::new(2, 0, -1, 1);
        let sets = coupling_dsets(n, &q, &f).unwrap();
        let d = &sets[0].0;
        assert_abs_diff_eq!(d[4].re, -(1.5 + 0.01), epsilon = 1e-16);
        assert_abs_diff_eq!(d[14].im, 0.1 + 0.02, epsilon = 1e-16);
        assert_abs_diff_eq!(d[15].im, 0.2, epsilon = 1e-16);
        assert_abs_diff_eq!(d[13].im, 0.3 - 0.01, epsilon = 1e-16);
    }
}
