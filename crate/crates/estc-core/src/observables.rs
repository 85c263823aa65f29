//! Mean observables of the basic states: energy, kinetic momentum,
//! velocity, spin; the spin constant; splitting sweeps and the ground
//! state.
//!
//! All means are cell averages of Hermitian forms, evaluated by exact
//! coefficient pairing in Fourier space (same-harmonic terms only). The two
//! solution families over the whole q1 axis are labeled by the spin sign:
//! spin + is branch 2 moving forward or branch 1 moving backward, spin -
//! the mirror arrangement. The mean momenta are linear in q1 with a
//! constant offset p10, the spin constant Sigma10 is independent of both
//! phase and quasimomentum, and p10 = omega (1 - Sigma10) / 2 ties the two:
//! the momentum route and the spin route must agree to solver precision.

use crate::dispersion::{solve_pair, BranchPair, DispersionBranch, SolverParams, StructuralCoefficients};
use crate::error::Result;
use crate::evolution::Branch;
use crate::gamma::basis;
use crate::wavefunction::{
    apply_hamiltonian, apply_matrix, apply_momentum, Multispinor, PlaneState, Sign,
};
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// Spin label of a solution family over the signed q1 axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Spin {
    Plus,
    Minus,
}

impl Spin {
    pub const BOTH: [Spin; 2] = [Spin::Plus, Spin::Minus];
}

/// Basic state carrying the requested spin at signed quasimomentum q1; the
/// pair must be solved at |q1|.
pub fn spin_state(pair: &BranchPair, spin: Spin, q1: f64) -> PlaneState {
    let (j, sign) = match (spin, q1 >= 0.0) {
        (Spin::Plus, true) => (Branch::J2, Sign::Plus),
        (Spin::Plus, false) => (Branch::J1, Sign::Minus),
        (Spin::Minus, true) => (Branch::J1, Sign::Plus),
        (Spin::Minus, false) => (Branch::J2, Sign::Minus),
    };
    PlaneState::new(pair.branch(j).clone(), sign)
}

/// Cell-averaged means of one basic state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateMeans {
    /// <H> / (m_e c^2).
    pub e: f64,
    /// <p_k> / (m_e c); components 2, 3 vanish for the chiral states.
    pub p: [f64; 3],
    /// <j_k> / c.
    pub j: [f64; 3],
    /// <S_k> / (hbar / 2).
    pub s: [f64; 3],
}

fn pair_mean(a: &Multispinor, applied: &Multispinor) -> f64 {
    a.dot(applied).re
}

/// Means of Hamiltonian, kinetic momentum, velocity and spin.
pub fn state_means(state: &PlaneState, params: &SolverParams) -> Result<StateMeans> {
    let f = params.field();
    let ms = state.to_multispinor();
    let q = state.four_momentum();
    let b = basis();

    let e = pair_mean(&ms, &apply_hamiltonian(&ms, &q, &f)?);
    let p = std::array::from_fn(|k| pair_mean(&ms, &apply_momentum(&ms, &q, &f, k + 1)));
    let j = std::array::from_fn(|k| pair_mean(&ms, &apply_matrix(&ms, b.alpha(k + 1))));
    let s = std::array::from_fn(|k| pair_mean(&ms, &apply_matrix(&ms, b.sigma(k + 1))));
    Ok(StateMeans { e, p, j, s })
}

/// Spin constant of a branch: exact Fourier mean plus the sampled variance
/// over one period (zero up to truncation for a converged solution).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sigma10 {
    pub value: f64,
    pub variance: f64,
}

/// Exact phase average of the spin form of one branch.
pub fn sigma10_parseval(z: &StructuralCoefficients) -> f64 {
    // In reduced components the form reads |Z[0]|^2 + |Z[1]|^2 - |Z[2]|^2
    // - |Z[3]|^2 for both branches.
    let mut acc = 0.0;
    for l in -(z.l_max as i64)..=z.l_max as i64 {
        let v = z.z_vector(l);
        acc += v[0] * v[0] + v[1] * v[1] - v[2] * v[2] - v[3] * v[3];
    }
    acc
}

/// Spin constant with its phase variance over `samples` points.
pub fn sigma10(branch: &DispersionBranch, samples: usize) -> Sigma10 {
    let value = sigma10_parseval(&branch.z);
    let sign = branch.j.parity();
    let mut var = 0.0;
    for i in 0..samples {
        let phi = TAU * i as f64 / samples as f64;
        let z = branch.z.evaluate(phi);
        let sample =
            sign * (z[0].norm_sqr() + z[2].norm_sqr() - z[1].norm_sqr() - z[3].norm_sqr());
        var += (sample - value) * (sample - value);
    }
    Sigma10 {
        value,
        variance: var / samples as f64,
    }
}

/// Observables of both spin families at one signed quasimomentum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObservableRow {
    pub q1: f64,
    pub e_plus: f64,
    pub e_minus: f64,
    pub p1_plus: f64,
    pub p1_minus: f64,
    pub j1_plus: f64,
    pub j1_minus: f64,
    pub s1_plus: f64,
    pub s1_minus: f64,
    pub sigma10: f64,
}

/// Means of the two spin families from a pair solved at |q1|.
pub fn observables_from_pair(
    pair: &BranchPair,
    q1: f64,
    params: &SolverParams,
) -> Result<ObservableRow> {
    let plus = state_means(&spin_state(pair, Spin::Plus, q1), params)?;
    let minus = state_means(&spin_state(pair, Spin::Minus, q1), params)?;
    Ok(ObservableRow {
        q1,
        e_plus: plus.e,
        e_minus: minus.e,
        p1_plus: plus.p[0],
        p1_minus: minus.p[0],
        j1_plus: plus.j[0],
        j1_minus: minus.j[0],
        s1_plus: plus.s[0],
        s1_minus: minus.s[0],
        sigma10: sigma10(&pair.b1, 64).value,
    })
}

/// Solves at |q1| and reports both spin families.
pub fn observables_at(q1: f64, params: &SolverParams) -> Result<ObservableRow> {
    let pair = solve_pair(q1.abs(), params)?;
    observables_from_pair(&pair, q1, params)
}

/// Rest-state constants and the derived scales of the dispersion minimum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RestConstants {
    /// Common energy of both families at q1 = 0.
    pub e0: f64,
    /// Velocity offset |J1(0)|.
    pub v10: f64,
    /// Momentum offset from the mean route.
    pub p10: f64,
    /// Momentum offset from the spin identity omega (1 - Sigma10) / 2.
    pub p10_identity: f64,
    pub sigma10: f64,
    /// Quasimomentum of the velocity zero crossing.
    pub q10: f64,
}

/// Computes the rest constants; the velocity zero is located by a secant
/// iteration on J1 of the spin-minus family, which is linear to high
/// accuracy on this scale.
pub fn rest_constants(params: &SolverParams) -> Result<RestConstants> {
    let at = |q1: f64| observables_at(q1, params);
    let rest = at(0.0)?;
    let e0 = rest.e_plus;
    let v10 = rest.j1_plus;
    let p10 = -rest.p1_plus;
    let sigma = rest.sigma10;
    let p10_identity = params.omega * (1.0 - sigma) / 2.0;

    // J1_minus crosses zero near +q10 ~ v10.
    let mut a = 0.0;
    let mut fa = rest.j1_minus;
    let mut b = 2.0 * v10.abs();
    let mut fb = at(b)?.j1_minus;
    let mut q10 = b;
    for _ in 0..40 {
        if (fb - fa).abs() == 0.0 {
            break;
        }
        let c = b - fb * (b - a) / (fb - fa);
        let fc = at(c)?.j1_minus;
        a = b;
        fa = fb;
        b = c;
        fb = fc;
        q10 = c;
        if (b - a).abs() < 1e-6 * q10.abs().max(1e-300) {
            break;
        }
    }

    Ok(RestConstants {
        e0,
        v10,
        p10,
        p10_identity,
        sigma10: sigma,
        q10,
    })
}

/// Ground-state location: golden-section refinement of E_+ seeded at +p10,
/// snapped to the zero of the mean momentum (linear in q1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroundState {
    pub q1: f64,
    pub e_min: f64,
    /// Mean momentum at the minimizer; vanishes there.
    pub p1: f64,
}

pub fn ground_state(params: &SolverParams) -> Result<GroundState> {
    let rest = rest_constants(params)?;
    let p10 = rest.p10;
    let e_plus = |q1: f64| -> Result<f64> { Ok(observables_at(q1, params)?.e_plus) };

    // Golden-section bracket around the seed.
    let inv_phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let mut lo = 0.25 * p10;
    let mut hi = 1.75 * p10;
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let mut fc = e_plus(c)?;
    let mut fd = e_plus(d)?;
    for _ in 0..24 {
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = e_plus(c)?;
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = e_plus(d)?;
        }
    }
    let coarse = 0.5 * (lo + hi);

    // P1_+ is linear; one secant step lands on its zero, which is the
    // stationary point of E_+.
    let p_at = |q1: f64| -> Result<f64> { Ok(observables_at(q1, params)?.p1_plus) };
    let f0 = p_at(coarse)?;
    let probe = coarse + 0.5 * p10;
    let f1 = p_at(probe)?;
    let q_star = if (f1 - f0).abs() > 0.0 {
        coarse - f0 * (probe - coarse) / (f1 - f0)
    } else {
        coarse
    };

    let row = observables_at(q_star, params)?;
    Ok(GroundState {
        q1: q_star,
        e_min: row.e_plus,
        p1: row.p1_plus,
    })
}

/// One row of the splitting sweep.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SplitRow {
    pub q1: f64,
    pub xi1: f64,
    pub xi2: f64,
    pub dxi: f64,
    pub e_plus: f64,
    pub e_minus: f64,
    /// Level splitting E_- - E_+.
    pub de: f64,
    pub j1_plus: f64,
    pub j1_minus: f64,
    pub p1_plus: f64,
    pub p1_minus: f64,
    pub sigma10: f64,
    pub residual1: f64,
    pub residual2: f64,
}

/// Sweeps the grid; per-point failures are reported without aborting.
pub fn splitting_scan(grid: &[f64], params: &SolverParams) -> Vec<(f64, Result<SplitRow>)> {
    grid.iter()
        .map(|&q1| (q1, split_row(q1, params)))
        .collect()
}

/// Branch dispersion plus both spin families at one grid point.
pub fn split_row(q1: f64, params: &SolverParams) -> Result<SplitRow> {
    let pair = solve_pair(q1.abs(), params)?;
    let row = observables_from_pair(&pair, q1, params)?;
    Ok(SplitRow {
        q1,
        xi1: pair.b1.xi,
        xi2: pair.b2.xi,
        dxi: pair.dxi(),
        e_plus: row.e_plus,
        e_minus: row.e_minus,
        de: row.e_minus - row.e_plus,
        j1_plus: row.j1_plus,
        j1_minus: row.j1_minus,
        p1_plus: row.p1_plus,
        p1_minus: row.p1_minus,
        sigma10: row.sigma10,
        residual1: pair.b1.residual,
        residual2: pair.b2.residual,
    })
}

/// The canonical sweep grid q1 = base^m * omega, m in [m_min, m_max].
pub fn power_grid(omega: f64, base: f64, m_min: i32, m_max: i32) -> Vec<f64> {
    (m_min..=m_max).map(|m| base.powi(m) * omega).collect()
}
