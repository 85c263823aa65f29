//! Plane-wave amplitudes of the field lattice and the dimensionless
//! four-momentum.
//!
//! The lattice is built from six plane waves of a common frequency: waves
//! 1..=3 run along +e_1, +e_2, +e_3 and waves 4..=6 along the opposite
//! directions. Wave j carries a transverse complex amplitude
//! A_jk = a_jk + i b_jk (k = 1..=3, dimensionless potential units), with the
//! longitudinal components identically zero. The chiral lattice keeps only
//! the counterpropagating pair along e_1 with opposite circular
//! polarizations: a_12 = b_13 = a_42 = -b_43 = A_m.

use crate::error::{Error, Result};
use crate::lattice::LatticeIndex;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Dimensionless wave four-vector: q = (q1, q2, q3) is momentum in units
/// m_e c / hbar, q4 is frequency in units m_e c^2 / hbar.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub struct FourVectorQ {
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
    pub q4: f64,
}

impl FourVectorQ {
    pub const fn new(q1: f64, q2: f64, q3: f64, q4: f64) -> Self {
        Self { q1, q2, q3, q4 }
    }

    /// Along-axis momentum with energy q4.
    pub const fn axial(q1: f64, q4: f64) -> Self {
        Self::new(q1, 0.0, 0.0, q4)
    }

    /// Local frequency components w_k = q_k + n_k * omega at harmonic n.
    pub fn w(&self, n: LatticeIndex, omega: f64) -> [f64; 4] {
        [
            self.q1 + f64::from(n.n1) * omega,
            self.q2 + f64::from(n.n2) * omega,
            self.q3 + f64::from(n.n3) * omega,
            self.q4 + f64::from(n.n4) * omega,
        ]
    }
}

/// Harmonic shift contributed by wave j (1..=6): +e_alpha for j = alpha <= 3,
/// -e_alpha for j = alpha + 3, always +1 in n4.
pub fn wave_shift(j: usize) -> LatticeIndex {
    match j {
        1 => LatticeIndex::new(1, 0, 0, 1),
        2 => LatticeIndex::new(0, 1, 0, 1),
        3 => LatticeIndex::new(0, 0, 1, 1),
        4 => LatticeIndex::new(-1, 0, 0, 1),
        5 => LatticeIndex::new(0, -1, 0, 1),
        6 => LatticeIndex::new(0, 0, -1, 1),
        _ => unreachable!("wave index {j}"),
    }
}

/// Amplitude table of the six waves plus the dimensionless frequency.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldAmplitudes {
    a: [[f64; 3]; 6],
    b: [[f64; 3]; 6],
    /// hbar omega_0 / (m_e c^2).
    pub omega: f64,
    chiral: bool,
}

impl FieldAmplitudes {
    /// General amplitude table; rejects nonzero longitudinal components.
    pub fn general(a: [[f64; 3]; 6], b: [[f64; 3]; 6], omega: f64) -> Result<Self> {
        for axis in 0..3 {
            for wave in [axis, axis + 3] {
                if a[wave][axis] != 0.0 || b[wave][axis] != 0.0 {
                    return Err(Error::LongitudinalAmplitude {
                        wave: wave + 1,
                        a: a[wave][axis],
                        b: b[wave][axis],
                    });
                }
            }
        }
        Ok(Self {
            a,
            b,
            omega,
            chiral: false,
        })
    }

    /// Chiral lattice of two counterpropagating circularly polarized waves
    /// along e_1: a_12 = b_13 = a_42 = -b_43 = am.
    pub fn chiral(omega: f64, am: f64) -> Self {
        let mut a = [[0.0; 3]; 6];
        let mut b = [[0.0; 3]; 6];
        a[0][1] = am;
        b[0][2] = am;
        a[3][1] = am;
        b[3][2] = -am;
        Self {
            a,
            b,
            omega,
            chiral: true,
        }
    }

    pub fn is_chiral(&self) -> bool {
        self.chiral
    }

    /// Scalar amplitude A_m of a chiral table (a_12 by construction).
    pub fn chiral_amplitude(&self) -> f64 {
        self.a[0][1]
    }

    /// Complex amplitude A_jk = a_jk + i b_jk, j = 1..=6, k = 1..=3.
    pub fn amplitude(&self, j: usize, k: usize) -> Complex64 {
        Complex64::new(self.a[j - 1][k - 1], self.b[j - 1][k - 1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chiral_population() {
        let f = FieldAmplitudes::chiral(0.01, 0.25);
        let mut nonzero = Vec::new();
        for j in 1..=6 {
            for k in 1..=3 {
                let v = f.amplitude(j, k);
                if v != Complex64::ZERO {
                    nonzero.push((j, k, v));
                }
            }
        }
        assert_eq!(
            nonzero,
            vec![
                (1, 2, Complex64::new(0.25, 0.0)),
                (1, 3, Complex64::new(0.0, 0.25)),
                (4, 2, Complex64::new(0.25, 0.0)),
                (4, 3, Complex64::new(0.0, -0.25)),
            ]
        );
        assert!(f.is_chiral());
        assert_eq!(f.chiral_amplitude(), 0.25);
    }

    #[test]
    fn rejects_longitudinal_components() {
        let mut a = [[0.0; 3]; 6];
        a[1][1] = 0.5; // wave 2 along e_2
        let err = FieldAmplitudes::general(a, [[0.0; 3]; 6], 0.01).unwrap_err();
        assert!(matches!(err, Error::LongitudinalAmplitude { wave: 2, .. }));
    }

    #[test]
    fn wave_shifts_are_first_generation() {
        for j in 1..=6 {
            let s = wave_shift(j);
            assert_eq!(s.g4d(), 1);
            assert_eq!(s.n4, 1);
            assert!(s.is_even());
        }
    }

    #[test]
    fn local_frequencies() {
        let q = FourVectorQ::axial(0.3, 1.1);
        let w = q.w(LatticeIndex::new(1, 0, -2, 3), 0.01);
        assert_eq!(w, [0.31, 0.0, -0.02, 1.1 + 0.03]);
    }
}
