//! Fixed 16-element Dirac-matrix basis and D-set arithmetic.
//!
//! Any 4x4 complex matrix V expands uniquely as V = sum_k V_k Gamma_k over a
//! fixed basis of sixteen unitary, Hermitian, trace-orthogonal matrices. The
//! coefficient list {V_k} (the "D set" of V) is the working representation for
//! the coupling matrices of the Fourier-space Dirac system; most of them have
//! at most three nonzero entries, so D-set arithmetic beats dense 4x4 algebra
//! wherever structure matters.
//!
//! The numbering is pinned by the physics in eleven positions: 0 is the unit
//! matrix, 1..=3 the spin matrices (Sigma_3, Sigma_1, Sigma_2), 4 the mass
//! matrix gamma_4, 9..=11 the velocity matrices (alpha_3, alpha_1, alpha_2),
//! and 13..=15 the gamma matrices (gamma_3, gamma_1, gamma_2). Positions 5..=7,
//! 8 and 12 complete the basis with Sigma_k gamma_4 products, gamma_5 and
//! i gamma_5 gamma_4; nothing in the solver depends on that completion beyond
//! linear independence.
//!
//! Gamma matrices are taken in the Dirac-Pauli representation adapted to the
//! x4 = i c t convention: gamma_k = offdiag(-i sigma_k, i sigma_k) for
//! k = 1..3, gamma_4 = diag(1, 1, -1, -1), so alpha_k = i gamma_4 gamma_k and
//! Sigma_k = diag(sigma_k, sigma_k) are the standard velocity and spin
//! matrices.

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;
use std::sync::OnceLock;

pub type M4 = Matrix4<Complex64>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn pauli(k: usize) -> Matrix2<Complex64> {
    match k {
        1 => Matrix2::new(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)),
        2 => Matrix2::new(c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)),
        3 => Matrix2::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)),
        _ => unreachable!("pauli index"),
    }
}

fn block(aa: Matrix2<Complex64>, ab: Matrix2<Complex64>, ba: Matrix2<Complex64>, bb: Matrix2<Complex64>) -> M4 {
    let mut m = M4::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(&aa);
    m.fixed_view_mut::<2, 2>(0, 2).copy_from(&ab);
    m.fixed_view_mut::<2, 2>(2, 0).copy_from(&ba);
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(&bb);
    m
}

/// The full basis together with the gamma, alpha and spin matrices it is
/// built from.
#[derive(Debug, Clone)]
pub struct GammaBasis {
    /// Gamma_0 .. Gamma_15.
    pub gammas: [M4; 16],
    /// gamma_1 .. gamma_4 (1-based access through [`GammaBasis::gamma`]).
    pub dirac: [M4; 4],
    /// alpha_1 .. alpha_4, with alpha_4 = gamma_4.
    pub alphas: [M4; 4],
    /// Sigma_1 .. Sigma_3.
    pub sigmas: [M4; 3],
}

impl GammaBasis {
    fn build() -> Self {
        let zero = Matrix2::zeros();
        let unit = Matrix2::identity();
        let i = c(0.0, 1.0);

        let gamma_k = |k: usize| block(zero, pauli(k) * (-i), pauli(k) * i, zero);
        let g1 = gamma_k(1);
        let g2 = gamma_k(2);
        let g3 = gamma_k(3);
        let g4 = block(unit, zero, zero, -unit);
        let g5 = g1 * g2 * g3 * g4;

        let alpha = |k: usize| (g4 * gamma_k(k)) * i;
        let a1 = alpha(1);
        let a2 = alpha(2);
        let a3 = alpha(3);

        let sigma = |k: usize| block(pauli(k), zero, zero, pauli(k));
        let s1 = sigma(1);
        let s2 = sigma(2);
        let s3 = sigma(3);

        let gammas = [
            M4::identity(),
            s3,
            s1,
            s2,
            g4,
            s3 * g4,
            s1 * g4,
            s2 * g4,
            g5,
            a3,
            a1,
            a2,
            (g5 * g4) * i,
            g3,
            g1,
            g2,
        ];

        GammaBasis {
            gammas,
            dirac: [g1, g2, g3, g4],
            alphas: [a1, a2, a3, g4],
            sigmas: [s1, s2, s3],
        }
    }

    /// gamma_k, k = 1..=4.
    pub fn gamma(&self, k: usize) -> &M4 {
        &self.dirac[k - 1]
    }

    /// alpha_k, k = 1..=4 (alpha_4 is the mass matrix).
    pub fn alpha(&self, k: usize) -> &M4 {
        &self.alphas[k - 1]
    }

    /// Sigma_k, k = 1..=3.
    pub fn sigma(&self, k: usize) -> &M4 {
        &self.sigmas[k - 1]
    }
}

/// The process-wide basis instance.
pub fn basis() -> &'static GammaBasis {
    static BASIS: OnceLock<GammaBasis> = OnceLock::new();
    BASIS.get_or_init(GammaBasis::build)
}

/// Expansion coefficients of a 4x4 matrix over the fixed basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiracSet(pub [Complex64; 16]);

impl DiracSet {
    pub const ZERO: DiracSet = DiracSet([Complex64::new(0.0, 0.0); 16]);

    pub fn to_matrix(&self) -> M4 {
        let b = basis();
        let mut m = M4::zeros();
        for (k, &coeff) in self.0.iter().enumerate() {
            if coeff != Complex64::ZERO {
                m += b.gammas[k] * coeff;
            }
        }
        m
    }

    /// Inverse expansion; exact up to rounding because the basis is
    /// trace-orthogonal with tr(Gamma_k^2) = 4.
    pub fn from_matrix(m: &M4) -> Self {
        let b = basis();
        let mut coeffs = [Complex64::ZERO; 16];
        for (k, gamma) in b.gammas.iter().enumerate() {
            coeffs[k] = (gamma.adjoint() * m).trace() * 0.25;
        }
        DiracSet(coeffs)
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.0.iter().all(|v| v.norm() <= tol)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}
