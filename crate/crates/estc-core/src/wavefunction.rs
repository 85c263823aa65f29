//! Bispinor wave functions, Fourier-space operator actions, inner products
//! and the relative-residual functional.
//!
//! The four basic states at quasimomentum magnitude |q1| are built from the
//! two branch solutions: branch j with sign + moves along +e1, sign - along
//! -e1. Each state is a finite multispinor: a map from lattice harmonics
//! (n1, 0, 0, n4), |n1| <= 1, to bispinor amplitudes, assembled from the
//! structural-function tables over the constant spin basis u1..u4
//! (the Sigma_1 eigenvectors paired across the large and small components).
//!
//! Operators act harmonic-wise: the Dirac operator is the coupling stencil
//! contracted with the amplitudes, so the residual functional
//! R = |D psi| / |psi| reuses the exact same coupling matrices the rest of
//! the solver is built from. R vanishes for exact solutions and measures
//! truncation quality for approximate ones.

use crate::coupling::coupling_matrices;
use crate::dispersion::{DispersionBranch, SolverParams};
use crate::error::{Error, Result};
use crate::evolution::Branch;
use crate::field::{wave_shift, FieldAmplitudes, FourVectorQ};
use crate::gamma::basis;
use crate::lattice::{LatticeIndex, S13};
use nalgebra::Vector4;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::TAU;

pub type Bispinor = Vector4<Complex64>;

/// Direction of motion along e1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Constant spin basis: u1, u3 carry Sigma_1 = +1, u2, u4 carry -1; the
/// first pair lives in the large components, the second in the small ones.
pub fn spin_basis() -> [Bispinor; 4] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let c = |x: f64| Complex64::new(x * h, 0.0);
    [
        Bispinor::new(c(1.0), c(1.0), c(0.0), c(0.0)),
        Bispinor::new(c(1.0), c(-1.0), c(0.0), c(0.0)),
        Bispinor::new(c(0.0), c(0.0), c(1.0), c(1.0)),
        Bispinor::new(c(0.0), c(0.0), c(1.0), c(-1.0)),
    ]
}

/// Finite-support collection of bispinor Fourier amplitudes.
#[derive(Debug, Clone, Default)]
pub struct Multispinor {
    amplitudes: BTreeMap<LatticeIndex, Bispinor>,
}

impl Multispinor {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, n: LatticeIndex, value: Bispinor) {
        let entry = self.amplitudes.entry(n).or_insert_with(Bispinor::zeros);
        *entry += value;
    }

    pub fn get(&self, n: LatticeIndex) -> Bispinor {
        self.amplitudes.get(&n).copied().unwrap_or_else(Bispinor::zeros)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&LatticeIndex, &Bispinor)> {
        self.amplitudes.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &LatticeIndex> {
        self.amplitudes.keys()
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn norm_squared(&self) -> f64 {
        self.amplitudes.values().map(|c| c.norm_squared()).sum()
    }

    /// Plain Fourier pairing sum_n a(n)^dag b(n).
    pub fn dot(&self, other: &Multispinor) -> Complex64 {
        let mut acc = Complex64::ZERO;
        for (n, a) in self.iter() {
            let b = other.get(*n);
            acc += a.dotc(&b);
        }
        acc
    }

    /// Drops entries below `tol` in max norm.
    pub fn prune(&mut self, tol: f64) {
        self.amplitudes
            .retain(|_, c| c.iter().any(|v| v.norm() > tol));
    }
}

/// One of the four basic plane states.
#[derive(Debug, Clone)]
pub struct PlaneState {
    pub branch: DispersionBranch,
    pub sign: Sign,
}

impl PlaneState {
    pub fn new(branch: DispersionBranch, sign: Sign) -> Self {
        debug_assert!(branch.q1 >= 0.0, "states are built from |q1| solves");
        Self { branch, sign }
    }

    /// Quasimomentum magnitude.
    pub fn q1_mag(&self) -> f64 {
        self.branch.q1.abs()
    }

    /// Four-momentum of the full wave: (+-|q1|, 0, 0, q4).
    pub fn four_momentum(&self) -> FourVectorQ {
        FourVectorQ::axial(self.sign.factor() * self.q1_mag(), self.branch.q4)
    }

    /// Sector label for inner-product compatibility checks.
    fn sector(&self) -> String {
        format!(
            "j{} sign{:+} q1={} q4={}",
            self.branch.j.index(),
            self.sign.factor(),
            self.q1_mag(),
            self.branch.q4
        )
    }

    /// Lattice-indexed Fourier amplitudes of the state.
    pub fn to_multispinor(&self) -> Multispinor {
        let u = spin_basis();
        let z = &self.branch.z;
        let i = Complex64::i();
        let mut ms = Multispinor::new();

        // Spatial harmonic carrying the odd-l amplitudes.
        let odd_n1: i32 = match (self.branch.j, self.sign) {
            (Branch::J1, Sign::Plus) => 1,
            (Branch::J1, Sign::Minus) => -1,
            (Branch::J2, Sign::Plus) => -1,
            (Branch::J2, Sign::Minus) => 1,
        };
        // Spin-basis pairs: (even-l pair, odd-l pair), with the sign of the
        // even part flipping for the reversed states.
        let (even_pair, odd_pair, even_scale): ([usize; 2], [usize; 2], Complex64) =
            match (self.branch.j, self.sign) {
                (Branch::J1, Sign::Plus) => ([1, 3], [0, 2], Complex64::ONE),
                (Branch::J1, Sign::Minus) => ([0, 2], [1, 3], -Complex64::ONE),
                (Branch::J2, Sign::Plus) => ([0, 2], [1, 3], Complex64::ONE),
                (Branch::J2, Sign::Minus) => ([1, 3], [0, 2], -Complex64::ONE),
            };
        // k-components feeding the even and odd harmonics of this branch.
        let (even_k, odd_k): ([usize; 2], [usize; 2]) = match self.branch.j {
            Branch::J1 => ([2, 4], [1, 3]),
            Branch::J2 => ([1, 3], [2, 4]),
        };

        let l_max = z.l_max as i64;
        for l in -l_max..=l_max {
            if l.rem_euclid(2) == 0 {
                let c0 = z.fourier_amp(l, even_k[0]);
                let c1 = z.fourier_amp(l, even_k[1]);
                if c0 != 0.0 || c1 != 0.0 {
                    let amp = (u[even_pair[0]] * Complex64::from(c0)
                        + u[even_pair[1]] * Complex64::from(c1))
                        * even_scale;
                    ms.add(LatticeIndex::new(0, 0, 0, l as i32), amp);
                }
            } else {
                let c0 = z.fourier_amp(l, odd_k[0]);
                let c1 = z.fourier_amp(l, odd_k[1]);
                if c0 != 0.0 || c1 != 0.0 {
                    let amp = (u[odd_pair[0]] * Complex64::from(c0)
                        + u[odd_pair[1]] * Complex64::from(c1))
                        * i;
                    ms.add(LatticeIndex::new(odd_n1, 0, 0, l as i32), amp);
                }
            }
        }
        ms
    }

    /// Evaluates the full bispinor at the space-time point, including the
    /// plane-wave phase.
    pub fn assemble(&self, x1: f64, x4: f64) -> Bispinor {
        let ms = self.to_multispinor();
        evaluate(&ms, &self.four_momentum(), x1, x4, self.branch.omega)
    }
}

/// Evaluates a multispinor wave at (x1, x4) with the plane-wave phase of
/// four-momentum q and lattice frequency omega.
pub fn evaluate(
    ms: &Multispinor,
    q: &FourVectorQ,
    x1: f64,
    x4: f64,
    omega: f64,
) -> Bispinor {
    let phi1 = TAU * x1;
    let phi4 = TAU * x4;
    let mut acc = Bispinor::zeros();
    for (n, c) in ms.iter() {
        let arg = f64::from(n.n1) * phi1 - f64::from(n.n4) * phi4;
        acc += c * Complex64::new(0.0, arg).exp();
    }
    let plane = (q.q1 * phi1 - q.q4 * phi4) / omega;
    acc * Complex64::new(0.0, plane).exp()
}

/// Cross-sector handling for inner products.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossSector {
    /// Identical Floquet sector required.
    Strict,
    /// Amplitude pairing with every sector phase difference frozen at the
    /// cell origin; the q1 -> 0 limit convention.
    Frozen,
    /// Integration over the joint periodicity cell: pairs survive only when
    /// their combined spatial frequency vanishes exactly (the energy phase
    /// difference stays frozen, being slow on any cell).
    JointCell,
}

/// Inner product of two basic states.
pub fn inner(a: &PlaneState, b: &PlaneState, mode: CrossSector) -> Result<Complex64> {
    let same_sector = a.branch.j == b.branch.j
        && a.sign == b.sign
        && a.branch.q4 == b.branch.q4
        && a.q1_mag() == b.q1_mag();
    if mode == CrossSector::Strict && !same_sector {
        return Err(Error::SectorMismatch(a.sector(), b.sector()));
    }
    let ma = a.to_multispinor();
    let mb = b.to_multispinor();
    match mode {
        CrossSector::Strict | CrossSector::Frozen => Ok(ma.dot(&mb)),
        CrossSector::JointCell => {
            // Respect the exact spatial frequency offset between the two
            // plane factors: (q_b1 - q_a1) / omega in lattice units.
            let dq1 = (b.sign.factor() * b.q1_mag() - a.sign.factor() * a.q1_mag())
                / a.branch.omega;
            Ok(joint_cell_pairing(&ma, &mb, dq1))
        }
    }
}

fn joint_cell_pairing(a: &Multispinor, b: &Multispinor, dq1: f64) -> Complex64 {
    // The pair (n, n') survives the joint-cell average iff n4 matches and
    // the total spatial frequency (n'1 - n1) + dq1/omega vanishes. dq1 is
    // passed premultiplied in lattice units by the caller.
    let mut acc = Complex64::ZERO;
    for (n, ca) in a.iter() {
        for (np, cb) in b.iter() {
            if n.n4 != np.n4 || n.n2 != np.n2 || n.n3 != np.n3 {
                continue;
            }
            let freq = f64::from(np.n1 - n.n1) + dq1;
            if freq.abs() < 1e-9 {
                acc += ca.dotc(cb);
            }
        }
    }
    acc
}


/// Dirac operator action in Fourier space: contracts the coupling stencil
/// with the amplitudes and applies the mass matrix factor that converts the
/// covariant form to the Hamiltonian one.
pub fn apply_dirac(ms: &Multispinor, q: &FourVectorQ, f: &FieldAmplitudes) -> Result<Multispinor> {
    let g4 = basis().gamma(4);
    let mut out = Multispinor::new();
    let mut rows: BTreeMap<LatticeIndex, Bispinor> = BTreeMap::new();
    for (p, c) in ms.iter() {
        for &s in S13.iter() {
            let n = *p - s;
            let v = coupling_matrices(n, q, f)?;
            let slot = crate::coupling::stencil_slot(s);
            let entry = rows.entry(n).or_insert_with(Bispinor::zeros);
            *entry += v[slot] * c;
        }
    }
    for (n, r) in rows {
        out.add(n, g4 * r);
    }
    Ok(out)
}

/// Hamiltonian action: the Dirac action plus the local energy w4.
pub fn apply_hamiltonian(
    ms: &Multispinor,
    q: &FourVectorQ,
    f: &FieldAmplitudes,
) -> Result<Multispinor> {
    let mut out = apply_dirac(ms, q, f)?;
    for (n, c) in ms.iter() {
        let w4 = q.w(*n, f.omega)[3];
        out.add(*n, c * Complex64::from(w4));
    }
    Ok(out)
}

/// Kinetic momentum action along axis k = 1..=3: local frequency w_k minus
/// the k-component of the wave field (the field part is zero along e1 for
/// the chiral lattice).
pub fn apply_momentum(
    ms: &Multispinor,
    q: &FourVectorQ,
    f: &FieldAmplitudes,
    k: usize,
) -> Multispinor {
    let mut out = Multispinor::new();
    for (n, c) in ms.iter() {
        let wk = q.w(*n, f.omega)[k - 1];
        out.add(*n, c * Complex64::from(wk));
    }
    for j in 1..=6 {
        let a = f.amplitude(j, k);
        let sigma = wave_shift(j);
        if a == Complex64::ZERO {
            continue;
        }
        for (n, c) in ms.iter() {
            // A'_k psi picks up both the direct and conjugate harmonics.
            out.add(*n + sigma, c * (-a));
            out.add(*n - sigma, c * (-a.conj()));
        }
    }
    out
}

/// Pointwise constant matrix action (velocity, spin).
pub fn apply_matrix(ms: &Multispinor, m: &crate::gamma::M4) -> Multispinor {
    let mut out = Multispinor::new();
    for (n, c) in ms.iter() {
        out.add(*n, m * c);
    }
    out
}

/// Relative residual R = |D psi| / |psi| in the Fourier-space norm.
pub fn dirac_residual(ms: &Multispinor, q: &FourVectorQ, f: &FieldAmplitudes) -> Result<f64> {
    let norm2 = ms.norm_squared();
    if norm2 == 0.0 {
        return Err(Error::ZeroNorm);
    }
    let residual = apply_dirac(ms, q, f)?;
    Ok((residual.norm_squared() / norm2).sqrt())
}

/// Residual of the forward state reconstructed from a branch solution.
pub fn branch_residual(branch: &DispersionBranch, params: &SolverParams) -> Result<f64> {
    let state = PlaneState::new(
        DispersionBranch {
            q1: branch.q1.abs(),
            ..branch.clone()
        },
        Sign::Plus,
    );
    let ms = state.to_multispinor();
    let q = state.four_momentum();
    dirac_residual(&ms, &q, &params.field())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dispersion::solve_pair;
    use approx::assert_abs_diff_eq;

    fn params() -> SolverParams {
        SolverParams::default()
    }

    #[test]
    fn spin_basis_is_orthonormal() {
        let u = spin_basis();
        for (a, ua) in u.iter().enumerate() {
            for (b, ub) in u.iter().enumerate() {
                let dot = ua.dotc(ub);
                let expect = if a == b { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(dot.re, expect, epsilon = 1e-15);
                assert_abs_diff_eq!(dot.im, 0.0, epsilon = 1e-15);
            }
        }
        // Sigma_1 eigenvalues +1, -1, +1, -1.
        let s1 = basis().sigma(1);
        for (idx, expect) in [(0, 1.0), (1, -1.0), (2, 1.0), (3, -1.0)] {
            let v = s1 * u[idx];
            assert_abs_diff_eq!((v - u[idx] * Complex64::from(expect)).norm(), 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn multispinor_support_and_norm() {
        let p = params();
        let pair = solve_pair(p.omega, &p).unwrap();
        for sign in Sign::BOTH {
            for b in [&pair.b1, &pair.b2] {
                let state = PlaneState::new(b.clone(), sign);
                let ms = state.to_multispinor();
                assert_abs_diff_eq!(ms.norm_squared(), 1.0, epsilon = 1e-12);
                for n in ms.support() {
                    assert_eq!((n.n2, n.n3), (0, 0));
                    assert!(n.n1.abs() <= 1);
                    assert!(n.g4d() <= p.g_max as i32);
                    assert!(n.is_even());
                    if n.n1 == 0 {
                        assert_eq!(n.n4.rem_euclid(2), 0);
                    } else {
                        assert_eq!(n.n4.rem_euclid(2), 1);
                    }
                }
            }
        }
    }

    #[test]
    fn pointwise_norm_is_one() {
        let p = params();
        let pair = solve_pair(2.0 * p.omega, &p).unwrap();
        let state = PlaneState::new(pair.b1.clone(), Sign::Plus);
        let ms = state.to_multispinor();
        let q = state.four_momentum();
        for (i, j) in [(0, 0), (3, 7), (12, 25), (40, 11)] {
            let x1 = i as f64 / 41.0;
            let x4 = j as f64 / 29.0;
            let psi = evaluate(&ms, &q, x1, x4, p.omega);
            assert_abs_diff_eq!(psi.norm_squared(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn structural_orthogonality() {
        let p = params();
        let pair = solve_pair(p.omega, &p).unwrap();
        let s1p = PlaneState::new(pair.b1.clone(), Sign::Plus);
        let s1m = PlaneState::new(pair.b1.clone(), Sign::Minus);
        let s2p = PlaneState::new(pair.b2.clone(), Sign::Plus);
        let inner_11 = inner(&s1p, &s1m, CrossSector::Frozen).unwrap();
        let inner_12 = inner(&s1p, &s2p, CrossSector::Frozen).unwrap();
        assert_abs_diff_eq!(inner_11.norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(inner_12.norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn cross_sector_limit_approaches_unity() {
        let p = params();
        let q_small = 2.0_f64.powi(-10) * p.omega;
        let pair = solve_pair(q_small, &p).unwrap();
        let s1p = PlaneState::new(pair.branch(Branch::J1).clone(), Sign::Plus);
        let s2m = PlaneState::new(pair.branch(Branch::J2).clone(), Sign::Minus);
        let overlap = inner(&s1p, &s2m, CrossSector::Frozen).unwrap();
        assert!((overlap.norm() - 1.0).abs() < 1e-4, "overlap {overlap}");

        let q_smaller = 2.0_f64.powi(-14) * p.omega;
        let pair2 = solve_pair(q_smaller, &p).unwrap();
        let t1p = PlaneState::new(pair2.branch(Branch::J1).clone(), Sign::Plus);
        let t2m = PlaneState::new(pair2.branch(Branch::J2).clone(), Sign::Minus);
        let closer = inner(&t1p, &t2m, CrossSector::Frozen).unwrap();
        assert!((closer.norm() - 1.0).abs() < (overlap.norm() - 1.0).abs());
    }

    #[test]
    fn strict_mode_rejects_cross_sector() {
        let p = params();
        let pair = solve_pair(p.omega, &p).unwrap();
        let a = PlaneState::new(pair.b1.clone(), Sign::Plus);
        let b = PlaneState::new(pair.b2.clone(), Sign::Plus);
        assert!(matches!(
            inner(&a, &b, CrossSector::Strict),
            Err(Error::SectorMismatch(_, _))
        ));
    }

    #[test]
    fn residual_rejects_zero_norm() {
        let p = params();
        let ms = Multispinor::new();
        let q = FourVectorQ::axial(0.0, 1.0);
        assert!(matches!(
            dirac_residual(&ms, &q, &p.field()),
            Err(Error::ZeroNorm)
        ));
    }

    #[test]
    fn free_exact_solution_has_zero_residual() {
        let p = SolverParams::new(0.01, 0.0, 6).unwrap();
        let pair = solve_pair(0.25, &p).unwrap();
        let state = PlaneState::new(pair.b2.clone(), Sign::Plus);
        let ms = state.to_multispinor();
        let r = dirac_residual(&ms, &state.four_momentum(), &p.field()).unwrap();
        assert_abs_diff_eq!(r, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn random_multispinor_residual_is_order_one() {
        let p = params();
        let mut rng = crate::check::SplitMix64::new(2024);
        let mut ms = Multispinor::new();
        for n4 in (-4..=4).step_by(2) {
            let c = Bispinor::from_fn(|_, _| Complex64::new(rng.symmetric(), rng.symmetric()));
            ms.add(LatticeIndex::new(0, 0, 0, n4), c);
        }
        let scale = ms.norm_squared().sqrt();
        let mut unit = Multispinor::new();
        for (n, c) in ms.iter() {
            unit.add(*n, c / Complex64::from(scale));
        }
        let q = FourVectorQ::axial(0.01, 1.0002);
        let r = dirac_residual(&unit, &q, &p.field()).unwrap();
        assert!(r > 0.1, "residual {r} unexpectedly small");
    }
}
