//! Reduced evolution system of the chiral lattice.
//!
//! With harmonics restricted to (n1, 0, 0, n4), |n1| <= 1, the Dirac system
//! collapses to two independent four-component evolution equations
//!
//!   d Z_j / d phi4 = (i / omega) M_j(phi4) Z_j,    j = 1, 2,
//!
//! where M_j(phi4) = N_j - (-1)^j 4 A_m cos(phi4) alpha1, N_j is a constant
//! real symmetric matrix carrying the spectral parameter q4 on its diagonal,
//! and alpha1 is the exchange matrix. Expanding Z_j in harmonics of phi4
//! turns this into a real symmetric block-tridiagonal system whose
//! eigenvalues are the dispersion candidates q4.
//!
//! The (3,3) entry of N_j uses q4 of branch j; both the matrix symmetry in
//! q1 -> -q1 and the equality of the two branch energies at q1 = 0 pin that
//! reading.

use nalgebra::{DMatrix, Matrix4};
use serde::{Deserialize, Serialize};

/// Branch label j = 1, 2 of the reduced system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    J1,
    J2,
}

impl Branch {
    pub const BOTH: [Branch; 2] = [Branch::J1, Branch::J2];

    pub fn index(self) -> usize {
        match self {
            Branch::J1 => 1,
            Branch::J2 => 2,
        }
    }

    /// (-1)^j.
    pub fn parity(self) -> f64 {
        match self {
            Branch::J1 => -1.0,
            Branch::J2 => 1.0,
        }
    }

    /// Signed branch momentum q_1j = (-1)^j q1.
    pub fn signed_q1(self, q1: f64) -> f64 {
        self.parity() * q1
    }

    pub fn other(self) -> Branch {
        match self {
            Branch::J1 => Branch::J2,
            Branch::J2 => Branch::J1,
        }
    }
}

/// Exchange matrix coupling the even and odd component pairs.
pub fn exchange() -> Matrix4<f64> {
    Matrix4::new(
        0.0, 0.0, 0.0, 1.0, //
        0.0, 0.0, 1.0, 0.0, //
        0.0, 1.0, 0.0, 0.0, //
        1.0, 0.0, 0.0, 0.0,
    )
}

/// Constant part N_j of the evolution matrix for branch j.
pub fn n_matrix(j: Branch, q1: f64, q4: f64, omega: f64) -> Matrix4<f64> {
    let q1j = j.signed_q1(q1);
    Matrix4::new(
        q4 - 1.0,
        -q1j,
        0.0,
        0.0,
        //
        -q1j,
        q4 + 1.0,
        0.0,
        0.0,
        //
        0.0,
        0.0,
        q4 - 1.0,
        q1j - omega,
        //
        0.0,
        0.0,
        q1j - omega,
        q4 + 1.0,
    )
}

/// Evolution matrices of one branch at fixed momentum and spectral value.
#[derive(Debug, Clone)]
pub struct EvolutionMatrices {
    pub j: Branch,
    pub q1: f64,
    pub q4: f64,
    pub omega: f64,
    pub am: f64,
    /// Constant part N_j.
    pub n: Matrix4<f64>,
    /// Exchange matrix alpha1.
    pub alpha1: Matrix4<f64>,
}

impl EvolutionMatrices {
    pub fn new(j: Branch, q1: f64, q4: f64, omega: f64, am: f64) -> Self {
        Self {
            j,
            q1,
            q4,
            omega,
            am,
            n: n_matrix(j, q1, q4, omega),
            alpha1: exchange(),
        }
    }

    /// M_j(phi4) = N_j - (-1)^j 4 A_m cos(phi4) alpha1.
    pub fn m_at(&self, phi4: f64) -> Matrix4<f64> {
        self.n - self.alpha1 * (self.j.parity() * 4.0 * self.am * phi4.cos())
    }
}

/// Truncated harmonic system of one branch: the real symmetric
/// block-tridiagonal matrix T with (q4 I + T) Z = 0, harmonics
/// l in [-l_max, l_max].
#[derive(Debug, Clone)]
pub struct TruncatedSystem {
    pub j: Branch,
    pub q1: f64,
    pub omega: f64,
    pub am: f64,
    pub l_max: usize,
    /// Dense symmetric matrix of dimension 4 (2 l_max + 1).
    pub matrix: DMatrix<f64>,
}

impl TruncatedSystem {
    /// Assembles T: diagonal blocks (N_j - q4 I) - l omega I (independent of
    /// q4), off-diagonal blocks -(-1)^j 2 A_m alpha1.
    pub fn assemble(j: Branch, q1: f64, omega: f64, am: f64, l_max: usize) -> Self {
        let blocks = 2 * l_max + 1;
        let dim = 4 * blocks;
        let mut matrix = DMatrix::zeros(dim, dim);

        // N_j with the spectral diagonal removed.
        let n0 = n_matrix(j, q1, 0.0, omega);
        let coupling = exchange() * (-j.parity() * 2.0 * am);

        for b in 0..blocks {
            let l = b as i64 - l_max as i64;
            let shift = -(l as f64) * omega;
            for r in 0..4 {
                for c in 0..4 {
                    matrix[(4 * b + r, 4 * b + c)] = n0[(r, c)];
                }
                matrix[(4 * b + r, 4 * b + r)] += shift;
            }
            if b + 1 < blocks {
                for r in 0..4 {
                    for c in 0..4 {
                        matrix[(4 * b + r, 4 * (b + 1) + c)] = coupling[(r, c)];
                        matrix[(4 * (b + 1) + r, 4 * b + c)] = coupling[(r, c)];
                    }
                }
            }
        }

        Self {
            j,
            q1,
            omega,
            am,
            l_max,
            matrix,
        }
    }

    pub fn dim(&self) -> usize {
        4 * (2 * self.l_max + 1)
    }

    /// Flat index of component `comp` of harmonic l.
    pub fn index(&self, l: i64, comp: usize) -> usize {
        let b = (l + self.l_max as i64) as usize;
        4 * b + comp
    }

    /// Indices of the invariant sector that carries the physical solution:
    /// components (0, 1) at even harmonics and (2, 3) at odd ones. The
    /// complementary sector is its mirror; the two are exactly decoupled, so
    /// restricting the eigensolve to this sector removes the spurious
    /// mirror branches without any approximation.
    pub fn physical_indices(&self) -> Vec<usize> {
        let mut idx = Vec::with_capacity(self.dim() / 2);
        for b in 0..(2 * self.l_max + 1) {
            let l = b as i64 - self.l_max as i64;
            let comps: [usize; 2] = if l.rem_euclid(2) == 0 { [0, 1] } else { [2, 3] };
            for c in comps {
                idx.push(4 * b + c);
            }
        }
        idx
    }

    /// The symmetric submatrix on the physical sector.
    pub fn physical_block(&self) -> (Vec<usize>, DMatrix<f64>) {
        let idx = self.physical_indices();
        let m = DMatrix::from_fn(idx.len(), idx.len(), |r, c| self.matrix[(idx[r], idx[c])]);
        (idx, m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn exchange_squares_to_identity() {
        let a = exchange();
        assert_eq!(a * a, Matrix4::identity());
    }

    #[test]
    fn n_matrix_rest_case() {
        // q1 = 0, omega = 0, q4 = 1 gives diag(0, 2, 0, 2).
        let n = n_matrix(Branch::J1, 0.0, 1.0, 0.0);
        assert_eq!(n, Matrix4::from_diagonal(&nalgebra::Vector4::new(0.0, 2.0, 0.0, 2.0)));
    }

    #[test]
    fn zero_amplitude_freezes_modulation() {
        let ev = EvolutionMatrices::new(Branch::J2, 0.2, 1.05, 0.01, 0.0);
        for phi in [0.0, 0.7, 2.9] {
            assert_eq!(ev.m_at(phi), ev.n);
        }
    }

    #[test]
    fn evolution_matrices_are_symmetric() {
        let ev = EvolutionMatrices::new(Branch::J1, 0.13, 1.02, 0.01, 0.007);
        for phi in [0.0, 0.3, 1.8, 4.4] {
            let m = ev.m_at(phi);
            assert_eq!(m, m.transpose());
        }
    }

    #[test]
    fn spectral_diagonal_is_separable() {
        // N_j - q4 I must not depend on q4.
        let a = n_matrix(Branch::J2, 0.3, 1.7, 0.01) - Matrix4::identity() * 1.7;
        let b = n_matrix(Branch::J2, 0.3, 0.2, 0.01) - Matrix4::identity() * 0.2;
        assert_abs_diff_eq!((a - b).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn truncated_system_is_exactly_symmetric() {
        let t = TruncatedSystem::assemble(Branch::J1, 0.02, 0.01, 0.007, 6);
        assert_eq!(t.dim(), 4 * 13);
        for r in 0..t.dim() {
            for c in 0..t.dim() {
                assert_eq!(t.matrix[(r, c)], t.matrix[(c, r)]);
            }
        }
    }

    #[test]
    fn physical_sector_is_invariant() {
        // No matrix element connects the physical sector to its complement.
        let t = TruncatedSystem::assemble(Branch::J2, 0.005, 0.01, 0.007, 5);
        let phys = t.physical_indices();
        let comp: Vec<usize> = (0..t.dim()).filter(|i| !phys.contains(i)).collect();
        for &p in &phys {
            for &c in &comp {
                assert_eq!(t.matrix[(p, c)], 0.0, "element ({p}, {c})");
            }
        }
        assert_eq!(phys.len(), t.dim() / 2);
    }

    #[test]
    fn block_structure() {
        let omega = 0.01;
        let am = 0.007;
        let t = TruncatedSystem::assemble(Branch::J1, 0.1, omega, am, 3);
        // Central block is N_j - q4 I at l = 0.
        let n0 = n_matrix(Branch::J1, 0.1, 0.0, omega);
        for r in 0..4 {
            for c in 0..4 {
                assert_eq!(t.matrix[(t.index(0, r), t.index(0, c))], n0[(r, c)]);
            }
        }
        // l-shift on the diagonal.
        assert_abs_diff_eq!(
            t.matrix[(t.index(2, 0), t.index(2, 0))] - n0[(0, 0)],
            -2.0 * omega,
            epsilon = 1e-16
        );
        // Coupling block -(-1)^j 2 A_m alpha1.
        let expect = exchange() * (2.0 * am);
        for r in 0..4 {
            for c in 0..4 {
                assert_eq!(t.matrix[(t.index(1, r), t.index(2, c))], expect[(r, c)]);
            }
        }
    }
}
