//! Two-state superpositions: unidirectional precession states and
//! bidirectional states with their velocity and spin textures.
//!
//! A unidirectional state mixes the two spin branches at the same
//! quasimomentum, psi = psi_1 e^{i delta} cos(alpha) + psi_2 sin(alpha);
//! the energy splitting turns the mixing phase into a slow precession
//! phi(t) = delta + 2 pi nu t with nu = dxi in natural units. A
//! bidirectional state mixes one branch at opposite quasimomenta; its
//! Hermitian forms are periodic in x1 with mode-dependent periods and can
//! carry zero mean momentum with a nontrivial velocity texture.
//!
//! Field textures come in closed form as combinations of the frame vectors
//! e_A, e_B and products of the structural functions; the same quantities
//! evaluated directly from the assembled bispinors serve as the oracle for
//! every closed form here.

use crate::dispersion::{BranchPair, SolverParams};
use crate::error::{Error, Result};
use crate::evolution::Branch;
use crate::gamma::basis;
use crate::observables::sigma10_parseval;
use crate::wavefunction::{
    apply_hamiltonian, apply_matrix, apply_momentum, Bispinor, Multispinor, PlaneState, Sign,
};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// Superposition family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    /// Both spin branches at +|q1|.
    UniPlus,
    /// Both spin branches at -|q1|.
    UniMinus,
    /// Branch 1 at opposite quasimomenta.
    Bi1,
    /// Branch 2 at opposite quasimomenta.
    Bi2,
}

impl Mode {
    pub fn is_unidirectional(self) -> bool {
        matches!(self, Mode::UniPlus | Mode::UniMinus)
    }

    pub fn parse(text: &str) -> Option<Mode> {
        match text {
            "uni+" => Some(Mode::UniPlus),
            "uni-" => Some(Mode::UniMinus),
            "bi1" => Some(Mode::Bi1),
            "bi2" => Some(Mode::Bi2),
            _ => None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Mode::UniPlus => "uni+",
            Mode::UniMinus => "uni-",
            Mode::Bi1 => "bi1",
            Mode::Bi2 => "bi2",
        }
    }
}

/// Mixing parameters of a two-state superposition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuperpositionSpec {
    pub mode: Mode,
    /// Mixing angle in [0, pi/2].
    pub alpha: f64,
    /// Initial phase in [0, 2 pi).
    pub delta: f64,
    /// Quasimomentum magnitude.
    pub q1: f64,
}

impl SuperpositionSpec {
    pub fn new(mode: Mode, alpha: f64, delta: f64, q1: f64) -> Result<Self> {
        if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&alpha) {
            return Err(Error::InvalidParams(format!(
                "alpha = {alpha} outside [0, pi/2]"
            )));
        }
        if !(0.0..TAU).contains(&delta) {
            return Err(Error::InvalidParams(format!(
                "delta = {delta} outside [0, 2 pi)"
            )));
        }
        if !(q1 >= 0.0) {
            return Err(Error::InvalidParams(format!("q1 = {q1} must be >= 0")));
        }
        Ok(Self {
            mode,
            alpha,
            delta,
            q1,
        })
    }

    /// Momentum ratio q_m = 2 |q1| / omega of the bidirectional states.
    pub fn qm(&self, omega: f64) -> f64 {
        2.0 * self.q1 / omega
    }

    /// The two constituent states.
    pub fn states(&self, pair: &BranchPair) -> (PlaneState, PlaneState) {
        let b1 = pair.branch(Branch::J1).clone();
        let b2 = pair.branch(Branch::J2).clone();
        match self.mode {
            Mode::UniPlus => (
                PlaneState::new(b1, Sign::Plus),
                PlaneState::new(b2, Sign::Plus),
            ),
            Mode::UniMinus => (
                PlaneState::new(b1, Sign::Minus),
                PlaneState::new(b2, Sign::Minus),
            ),
            Mode::Bi1 => (
                PlaneState::new(b1.clone(), Sign::Plus),
                PlaneState::new(b1, Sign::Minus),
            ),
            Mode::Bi2 => (
                PlaneState::new(b2.clone(), Sign::Plus),
                PlaneState::new(b2, Sign::Minus),
            ),
        }
    }

    /// Complex mixing coefficients (first state, second state).
    pub fn coefficients(&self) -> (Complex64, Complex64) {
        (
            Complex64::new(0.0, self.delta).exp() * self.alpha.cos(),
            Complex64::from(self.alpha.sin()),
        )
    }
}

/// One sampled point of the velocity and spin textures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldPoint {
    pub x1: f64,
    pub x4: f64,
    pub v: [f64; 3],
    pub s: [f64; 3],
}

/// Sampled vector fields over the (x1, x4) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorFieldSample {
    pub points: Vec<FieldPoint>,
}

/// Uniform sampling grid on [0, 1) x [0, 1).
pub fn unit_grid(n1: usize, n4: usize) -> Vec<(f64, f64)> {
    let mut pts = Vec::with_capacity(n1 * n4);
    for i in 0..n1 {
        for k in 0..n4 {
            pts.push((i as f64 / n1 as f64, k as f64 / n4 as f64));
        }
    }
    pts
}

fn e_a(phi: f64) -> [f64; 3] {
    [0.0, phi.cos(), -phi.sin()]
}

fn e_b(phi: f64) -> [f64; 3] {
    [0.0, phi.sin(), phi.cos()]
}

fn axpy(acc: &mut [f64; 3], scale: f64, v: [f64; 3]) {
    for k in 0..3 {
        acc[k] += scale * v[k];
    }
}

/// Structural-function products entering the closed forms, evaluated at one
/// phase. z1 and z2 are k-indexed (z_j1 .. z_j4).
#[derive(Debug, Clone, Copy)]
pub struct ZProducts {
    pub z1: [Complex64; 4],
    pub z2: [Complex64; 4],
}

impl ZProducts {
    pub fn at(pair: &BranchPair, phi4: f64) -> Self {
        Self {
            z1: pair.branch(Branch::J1).z.evaluate(phi4),
            z2: pair.branch(Branch::J2).z.evaluate(phi4),
        }
    }

    fn zj(&self, j: usize) -> &[Complex64; 4] {
        if j == 1 {
            &self.z1
        } else {
            &self.z2
        }
    }

    /// R_{ikjl} = 2 Re(conj(z_ik) z_jl).
    pub fn r(&self, i: usize, k: usize, j: usize, l: usize) -> f64 {
        2.0 * (self.zj(i)[k - 1].conj() * self.zj(j)[l - 1]).re
    }

    /// I_{ikjl} = 2 Im(conj(z_ik) z_jl).
    pub fn im(&self, i: usize, k: usize, j: usize, l: usize) -> f64 {
        2.0 * (self.zj(i)[k - 1].conj() * self.zj(j)[l - 1]).im
    }

    /// R_j = R_{j1j4} + R_{j2j3}.
    pub fn r_j(&self, j: usize) -> f64 {
        self.r(j, 1, j, 4) + self.r(j, 2, j, 3)
    }

    /// I_j = I_{j1j2} + I_{j3j4}.
    pub fn i_j(&self, j: usize) -> f64 {
        self.im(j, 1, j, 2) + self.im(j, 3, j, 4)
    }

    /// Longitudinal velocity form v_{1j} = R_{j1j3} - R_{j2j4}.
    pub fn v1(&self, j: usize) -> f64 {
        self.r(j, 1, j, 3) - self.r(j, 2, j, 4)
    }

    pub fn c1(&self) -> Complex64 {
        self.z1[0].conj() * self.z2[2]
            + self.z1[1].conj() * self.z2[3]
            + self.z1[2].conj() * self.z2[0]
            + self.z1[3].conj() * self.z2[1]
    }

    pub fn c2(&self) -> Complex64 {
        self.z1[1].conj() * self.z2[2] + self.z1[3].conj() * self.z2[0]
    }

    pub fn c3(&self) -> Complex64 {
        self.z2[1].conj() * self.z1[2] + self.z2[3].conj() * self.z1[0]
    }

    pub fn d1(&self) -> Complex64 {
        (0..4).map(|k| self.z1[k].conj() * self.z2[k]).sum()
    }

    pub fn d2(&self) -> Complex64 {
        self.z1[1].conj() * self.z2[0] + self.z1[3].conj() * self.z2[2]
    }

    pub fn d3(&self) -> Complex64 {
        self.z2[1].conj() * self.z1[0] + self.z2[3].conj() * self.z1[2]
    }
}

/// Slow precession phase at time x4.
pub fn slow_phase(spec: &SuperpositionSpec, pair: &BranchPair, x4: f64) -> f64 {
    TAU * pair.dxi() * x4 / pair.b1.omega + spec.delta
}

/// Closed-form unidirectional textures at one point.
pub fn uni_fields_at(
    spec: &SuperpositionSpec,
    pair: &BranchPair,
    x1: f64,
    x4: f64,
) -> ([f64; 3], [f64; 3]) {
    debug_assert!(spec.mode.is_unidirectional());
    let s = match spec.mode {
        Mode::UniPlus => 1.0,
        _ => -1.0,
    };
    let phi1 = TAU * x1;
    let phi4 = TAU * x4;
    let phi = slow_phase(spec, pair, x4);
    let zp = ZProducts::at(pair, phi4);
    let (ca2, sa2) = (spec.alpha.cos().powi(2), spec.alpha.sin().powi(2));
    let s2a = (2.0 * spec.alpha).sin();
    let sigma10 = sigma10_parseval(&pair.branch(Branch::J1).z);

    let mut v = [0.0; 3];
    v[0] = s * (zp.v1(1) * ca2 + zp.v1(2) * sa2)
        + s2a * (zp.c1().im * (phi + s * phi1).cos() - zp.c1().re * (phi + s * phi1).sin());
    axpy(&mut v, zp.r_j(1) * ca2 - zp.r_j(2) * sa2, e_a(phi1));
    axpy(&mut v, s2a * s * zp.c2().im, e_a(-s * phi));
    axpy(&mut v, s2a * zp.c2().re, e_b(-s * phi));
    axpy(&mut v, s2a * s * zp.c3().im, e_a(2.0 * phi1 + s * phi));
    axpy(&mut v, s2a * zp.c3().re, e_b(2.0 * phi1 + s * phi));

    let mut sv = [0.0; 3];
    sv[0] = -s * sigma10 * (2.0 * spec.alpha).cos()
        + s2a * (zp.d1().im * (phi + s * phi1).cos() - zp.d1().re * (phi + s * phi1).sin());
    axpy(&mut sv, s * (zp.i_j(1) * ca2 - zp.i_j(2) * sa2), e_b(phi1));
    axpy(&mut sv, s2a * s * zp.d2().im, e_a(-s * phi));
    axpy(&mut sv, s2a * zp.d2().re, e_b(-s * phi));
    axpy(&mut sv, s2a * s * zp.d3().im, e_a(2.0 * phi1 + s * phi));
    axpy(&mut sv, s2a * zp.d3().re, e_b(2.0 * phi1 + s * phi));

    (v, sv)
}

/// Closed-form bidirectional textures at one point.
pub fn bi_fields_at(
    spec: &SuperpositionSpec,
    pair: &BranchPair,
    x1: f64,
    x4: f64,
) -> ([f64; 3], [f64; 3]) {
    debug_assert!(!spec.mode.is_unidirectional());
    let phi1 = TAU * x1;
    let phi4 = TAU * x4;
    let qm = spec.qm(pair.b1.omega);
    let delta = spec.delta;
    let c2a = (2.0 * spec.alpha).cos();
    let s2a = (2.0 * spec.alpha).sin();
    let zp = ZProducts::at(pair, phi4);
    let sigma10 = sigma10_parseval(&pair.branch(Branch::J1).z);

    let e1 = [1.0, 0.0, 0.0];
    let g0 = |sgn: f64| -> [f64; 3] {
        let mut g = [0.0; 3];
        axpy(&mut g, c2a, e1);
        axpy(&mut g, -sgn * s2a, e_b(sgn * (qm * phi1 + delta)));
        g
    };
    let g1 = |sgn: f64| -> [f64; 3] {
        let mut g = [0.0; 3];
        axpy(&mut g, s2a * ((1.0 + sgn * qm) * phi1 + sgn * delta).cos(), e1);
        axpy(&mut g, -sgn * c2a, e_b(phi1));
        g
    };
    let g2 = |sgn: f64| -> [f64; 3] {
        let mut g = [0.0; 3];
        axpy(&mut g, c2a, e1);
        axpy(&mut g, sgn * s2a, e_b((2.0 + sgn * qm) * phi1 + sgn * delta));
        g
    };

    let (mut v, mut sv) = ([0.0; 3], [0.0; 3]);
    match spec.mode {
        Mode::Bi1 => {
            axpy(&mut v, zp.r_j(1), e_a(phi1));
            axpy(&mut v, -zp.r(1, 2, 1, 4), g0(-1.0));
            axpy(&mut v, zp.r(1, 1, 1, 3), g2(1.0));
            axpy(&mut sv, -0.5 * (1.0 + sigma10), g0(-1.0));
            axpy(&mut sv, -zp.i_j(1), g1(1.0));
            axpy(&mut sv, 0.5 * (1.0 - sigma10), g2(1.0));
        }
        Mode::Bi2 => {
            axpy(&mut v, -zp.r_j(2), e_a(phi1));
            axpy(&mut v, zp.r(2, 1, 2, 3), g0(1.0));
            axpy(&mut v, -zp.r(2, 2, 2, 4), g2(-1.0));
            axpy(&mut sv, 0.5 * (1.0 + sigma10), g0(1.0));
            axpy(&mut sv, -zp.i_j(2), g1(-1.0));
            axpy(&mut sv, -0.5 * (1.0 - sigma10), g2(-1.0));
        }
        _ => unreachable!(),
    }
    (v, sv)
}

/// Samples the closed-form textures of the spec's mode on a grid.
pub fn fields(
    spec: &SuperpositionSpec,
    pair: &BranchPair,
    grid: &[(f64, f64)],
) -> VectorFieldSample {
    let eval = if spec.mode.is_unidirectional() {
        uni_fields_at
    } else {
        bi_fields_at
    };
    let points = grid
        .iter()
        .map(|&(x1, x4)| {
            let (v, s) = eval(spec, pair, x1, x4);
            FieldPoint { x1, x4, v, s }
        })
        .collect();
    VectorFieldSample { points }
}

/// Superposed bispinor at one point, exact phases included.
pub fn superposed_psi(
    spec: &SuperpositionSpec,
    pair: &BranchPair,
    x1: f64,
    x4: f64,
) -> Bispinor {
    let (sa, sb) = spec.states(pair);
    let (ca, cb) = spec.coefficients();
    sa.assemble(x1, x4) * ca + sb.assemble(x1, x4) * cb
}

/// Velocity and spin at one point straight from the bispinor Hermitian
/// forms; the oracle for the closed forms.
pub fn fields_direct_at(
    spec: &SuperpositionSpec,
    pair: &BranchPair,
    x1: f64,
    x4: f64,
) -> ([f64; 3], [f64; 3]) {
    let psi = superposed_psi(spec, pair, x1, x4);
    let b = basis();
    let form = |m: &crate::gamma::M4| -> f64 { psi.dotc(&(m * psi)).re };
    (
        [form(b.alpha(1)), form(b.alpha(2)), form(b.alpha(3))],
        [form(b.sigma(1)), form(b.sigma(2)), form(b.sigma(3))],
    )
}

/// Precession amplitudes and frequency of the unidirectional family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrecessionReport {
    /// Transverse velocity amplitude R_v.
    pub rv: f64,
    /// Transverse spin amplitude R_s.
    pub rs: f64,
    /// Precession frequency in units m_e c^2 / h; equals the splitting dxi.
    pub nu_pr: f64,
}

/// R_v = -mean(C_2), R_s = -mean(D_2) over one period, by exact Fourier
/// pairing of the coefficient tables.
pub fn precession(pair: &BranchPair) -> PrecessionReport {
    let z1 = &pair.branch(Branch::J1).z;
    let z2 = &pair.branch(Branch::J2).z;
    let l_max = z1.l_max as i64;
    let mut rv = 0.0;
    let mut rs = 0.0;
    for l in -l_max..=l_max {
        let a = z1.z_vector(l);
        let b = z2.z_vector(l);
        // C2 pairs (z12, z23) and (z14, z21): slots (0, 1) and (1, 0);
        // D2 pairs (z12, z21) and (z14, z23): slots (0, 0) and (1, 1).
        rv -= a[0] * b[1] + a[1] * b[0];
        rs -= a[0] * b[0] + a[1] * b[1];
    }
    PrecessionReport {
        rv,
        rs,
        nu_pr: pair.dxi(),
    }
}

/// Mean values of a unidirectional state with the slow phase frozen at
/// `phi` (defaults to delta, the value at t = 0).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniMeans {
    pub p1: f64,
    pub e: f64,
    pub v: [f64; 3],
    pub s: [f64; 3],
    /// Longitudinal mean velocity by direct computation.
    pub v1_direct: f64,
    /// The closed-form J_- cos 2a + J_+ sin 2a variant; kept for comparison,
    /// disagrees with the direct value away from alpha = 0.
    pub v1_closed: f64,
}

/// Cross pairing sum_n a(n)^dag (op b)(n) between the two constituents.
fn cross_mean(a: &Multispinor, applied: &Multispinor) -> Complex64 {
    a.dot(applied)
}

pub fn uni_means(
    spec: &SuperpositionSpec,
    pair: &BranchPair,
    params: &SolverParams,
    phi: Option<f64>,
) -> Result<UniMeans> {
    debug_assert!(spec.mode.is_unidirectional());
    let f = params.field();
    let (sa, sb) = spec.states(pair);
    let (ma, mb) = (sa.to_multispinor(), sb.to_multispinor());
    let (qa, qb) = (sa.four_momentum(), sb.four_momentum());
    let (ca2, sa2) = (spec.alpha.cos().powi(2), spec.alpha.sin().powi(2));
    let s2a = (2.0 * spec.alpha).sin();
    let phi = phi.unwrap_or(spec.delta);
    // Cross terms carry exp(-i (phi - delta)) from the energy difference
    // and exp(-i delta) from the mixing coefficients.
    let phase = Complex64::new(0.0, -phi).exp();

    let b = basis();
    let mean_of = |op_a: Multispinor, op_b: Multispinor, op_ab: Multispinor| -> f64 {
        let diag = ca2 * ma.dot(&op_a).re + sa2 * mb.dot(&op_b).re;
        let cross = s2a * (phase * cross_mean(&ma, &op_ab)).re;
        diag + cross
    };

    let p1 = mean_of(
        apply_momentum(&ma, &qa, &f, 1),
        apply_momentum(&mb, &qb, &f, 1),
        apply_momentum(&mb, &qb, &f, 1),
    );
    let e = mean_of(
        apply_hamiltonian(&ma, &qa, &f)?,
        apply_hamiltonian(&mb, &qb, &f)?,
        apply_hamiltonian(&mb, &qb, &f)?,
    );

    let mut v = [0.0; 3];
    let mut s = [0.0; 3];
    for k in 0..3 {
        v[k] = mean_of(
            apply_matrix(&ma, b.alpha(k + 1)),
            apply_matrix(&mb, b.alpha(k + 1)),
            apply_matrix(&mb, b.alpha(k + 1)),
        );
        s[k] = mean_of(
            apply_matrix(&ma, b.sigma(k + 1)),
            apply_matrix(&mb, b.sigma(k + 1)),
            apply_matrix(&mb, b.sigma(k + 1)),
        );
    }

    let sgn = match spec.mode {
        Mode::UniPlus => 1.0,
        _ => -1.0,
    };
    let j_minus = ma.dot(&apply_matrix(&ma, b.alpha(1))).re * sgn;
    let j_plus = mb.dot(&apply_matrix(&mb, b.alpha(1))).re * sgn;
    let v1_closed = sgn * (j_minus * (2.0 * spec.alpha).cos() + j_plus * (2.0 * spec.alpha).sin());

    Ok(UniMeans {
        p1,
        e,
        v,
        s,
        v1_direct: v[0],
        v1_closed,
    })
}

/// Spatial period of a Hermitian form of one bidirectional mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Period {
    Finite(f64),
    /// Degenerate denominator: the form does not depend on x1.
    Infinite,
}

/// Periods of the two bidirectional modes at momentum ratio q_m.
pub fn bi_periods(qm: f64) -> (Period, Period) {
    let period = |denom: f64| {
        if denom.abs() < 1e-14 {
            Period::Infinite
        } else {
            Period::Finite(1.0 / denom.abs())
        }
    };
    (period(1.0 + qm), period(1.0 - qm))
}

/// Frequency-resolved Hermitian form of a bidirectional superposition:
/// coefficients over exp(2 pi i (f1 x1 + g4 x4)) with real f1 and integer
/// g4.
#[derive(Debug, Clone)]
pub struct TrigForm {
    pub terms: Vec<(f64, i32, Complex64)>,
}

impl TrigForm {
    pub fn eval(&self, x1: f64, x4: f64) -> Complex64 {
        let mut acc = Complex64::ZERO;
        for &(f1, g4, c) in &self.terms {
            acc += c * Complex64::new(0.0, TAU * (f1 * x1 + f64::from(g4) * x4)).exp();
        }
        acc
    }

    /// Cell average over x1 in [0, period] x x4 in [0, 1]; nonzero x4
    /// frequencies integrate away exactly, x1 frequencies pick up the
    /// finite-window factor.
    pub fn cell_average(&self, period: Period) -> Complex64 {
        let mut acc = Complex64::ZERO;
        for &(f1, g4, c) in &self.terms {
            if g4 != 0 {
                continue;
            }
            acc += c * window_factor(f1, period);
        }
        acc
    }
}

fn window_factor(f1: f64, period: Period) -> Complex64 {
    if f1.abs() < 1e-9 {
        return Complex64::ONE;
    }
    match period {
        Period::Infinite => Complex64::ZERO,
        Period::Finite(dx) => {
            let arg = TAU * f1 * dx;
            (Complex64::new(0.0, arg).exp() - Complex64::ONE) / Complex64::new(0.0, arg)
        }
    }
}

/// Builds the frequency-resolved form sum conj(c_u) c_v <psi_u | op psi_v>
/// for a bidirectional superposition under the given operator action.
fn bi_form(
    spec: &SuperpositionSpec,
    pair: &BranchPair,
    params: &SolverParams,
    op: impl Fn(&Multispinor, &crate::field::FourVectorQ) -> Result<Multispinor>,
) -> Result<TrigForm> {
    let omega = params.omega;
    let (sa, sb) = spec.states(pair);
    let (ca, cb) = spec.coefficients();
    let parts = [(ca, sa), (cb, sb)];
    let mut terms = Vec::new();
    for (cu, su) in &parts {
        let mu = su.to_multispinor();
        let qu = su.four_momentum();
        for (cv, sv) in &parts {
            let mv = sv.to_multispinor();
            let qv = sv.four_momentum();
            let applied = op(&mv, &qv)?;
            let dq1 = (qv.q1 - qu.q1) / omega;
            let weight = cu.conj() * cv;
            for (n, au) in mu.iter() {
                for (np, bv) in applied.iter() {
                    if n.n2 != np.n2 || n.n3 != np.n3 {
                        continue;
                    }
                    let coeff = weight * au.dotc(bv);
                    if coeff.norm() < 1e-300 {
                        continue;
                    }
                    let f1 = f64::from(np.n1 - n.n1) + dq1;
                    let g4 = n.n4 - np.n4;
                    terms.push((f1, g4, coeff));
                }
            }
        }
    }
    Ok(TrigForm { terms })
}

/// Mean momentum and energy of a bidirectional state over its own cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BiMeans {
    pub p1: f64,
    pub e: f64,
    pub period: Period,
}

pub fn bi_means(
    spec: &SuperpositionSpec,
    pair: &BranchPair,
    params: &SolverParams,
) -> Result<BiMeans> {
    debug_assert!(!spec.mode.is_unidirectional());
    let qm = spec.qm(params.omega);
    let (p1_period, p2_period) = bi_periods(qm);
    let period = match spec.mode {
        Mode::Bi1 => p1_period,
        _ => p2_period,
    };
    let f = params.field();
    let p_form = bi_form(spec, pair, params, |ms, q| {
        Ok(apply_momentum(ms, q, &f, 1))
    })?;
    let h_form = bi_form(spec, pair, params, |ms, q| apply_hamiltonian(ms, q, &f))?;
    Ok(BiMeans {
        p1: p_form.cell_average(period).re,
        e: h_form.cell_average(period).re,
        period,
    })
}

/// Frequency-resolved momentum form, exposed for the periodicity checks.
pub fn bi_momentum_form(
    spec: &SuperpositionSpec,
    pair: &BranchPair,
    params: &SolverParams,
) -> Result<TrigForm> {
    let f = params.field();
    bi_form(spec, pair, params, |ms, q| {
        Ok(apply_momentum(ms, q, &f, 1))
    })
}

/// Frequency-resolved energy form.
pub fn bi_energy_form(
    spec: &SuperpositionSpec,
    pair: &BranchPair,
    params: &SolverParams,
) -> Result<TrigForm> {
    let f = params.field();
    bi_form(spec, pair, params, |ms, q| apply_hamiltonian(ms, q, &f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dispersion::solve_pair;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_4;

    fn setup(q1: f64) -> (SolverParams, BranchPair) {
        let params = SolverParams::default();
        let pair = solve_pair(q1, &params).unwrap();
        (params, pair)
    }

    #[test]
    fn spec_validation() {
        assert!(SuperpositionSpec::new(Mode::Bi1, -0.1, 0.0, 0.0).is_err());
        assert!(SuperpositionSpec::new(Mode::Bi1, 0.3, 6.5, 0.0).is_err());
        assert!(SuperpositionSpec::new(Mode::UniPlus, 0.3, 1.0, 0.005).is_ok());
    }

    #[test]
    fn bi_period_values() {
        let (p1, p2) = bi_periods(0.5);
        assert!(matches!(p1, Period::Finite(x) if (x - 2.0 / 3.0).abs() < 1e-15));
        assert!(matches!(p2, Period::Finite(x) if (x - 2.0).abs() < 1e-15));
        let (_, degenerate) = bi_periods(1.0);
        assert!(matches!(degenerate, Period::Infinite));
    }

    #[test]
    fn uni_norm_is_one_on_grid() {
        let (params, pair) = setup(0.005);
        let spec = SuperpositionSpec::new(Mode::UniPlus, 0.7, 1.3, 0.005).unwrap();
        for (x1, x4) in unit_grid(7, 5) {
            let psi = superposed_psi(&spec, &pair, x1, x4);
            assert_abs_diff_eq!(psi.norm_squared(), 1.0, epsilon = 1e-10);
        }
        let _ = params;
    }

    #[test]
    fn uni_closed_form_matches_direct() {
        let (_, pair) = setup(0.005);
        for mode in [Mode::UniPlus, Mode::UniMinus] {
            let spec = SuperpositionSpec::new(mode, 0.6, 2.1, 0.005).unwrap();
            for (x1, x4) in [(0.1, 0.3), (0.62, 0.05), (0.9, 0.77)] {
                let (v_closed, s_closed) = uni_fields_at(&spec, &pair, x1, x4);
                let (v_direct, s_direct) = fields_direct_at(&spec, &pair, x1, x4);
                for k in 0..3 {
                    assert_abs_diff_eq!(v_closed[k], v_direct[k], epsilon = 1e-10);
                    assert_abs_diff_eq!(s_closed[k], s_direct[k], epsilon = 1e-10);
                }
            }
        }
    }

    #[test]
    fn bi_closed_form_matches_direct() {
        let (_, pair) = setup(0.005);
        for mode in [Mode::Bi1, Mode::Bi2] {
            let spec = SuperpositionSpec::new(mode, FRAC_PI_4, 0.0, 0.005).unwrap();
            for (x1, x4) in [(0.0, 0.0), (0.31, 0.12), (0.77, 0.66)] {
                let (v_closed, s_closed) = bi_fields_at(&spec, &pair, x1, x4);
                let (v_direct, s_direct) = fields_direct_at(&spec, &pair, x1, x4);
                for k in 0..3 {
                    assert_abs_diff_eq!(v_closed[k], v_direct[k], epsilon = 1e-10);
                    assert_abs_diff_eq!(s_closed[k], s_direct[k], epsilon = 1e-10);
                }
            }
        }
    }

    #[test]
    fn uni_momentum_closed_relation() {
        let (params, pair) = setup(0.02);
        let rest = crate::observables::rest_constants(&params).unwrap();
        for alpha in [0.0, 0.4, FRAC_PI_4, 1.2] {
            let spec = SuperpositionSpec::new(Mode::UniPlus, alpha, 0.9, 0.02).unwrap();
            let means = uni_means(&spec, &pair, &params, None).unwrap();
            let expect = 0.02 + rest.p10 * (2.0 * alpha).cos();
            assert_abs_diff_eq!(means.p1, expect, epsilon = 1e-12);
        }
    }

    #[test]
    fn uni_energy_mixes_branch_energies() {
        let (params, pair) = setup(0.02);
        let e1 = crate::observables::state_means(
            &PlaneState::new(pair.branch(Branch::J1).clone(), Sign::Plus),
            &params,
        )
        .unwrap()
        .e;
        let e2 = crate::observables::state_means(
            &PlaneState::new(pair.branch(Branch::J2).clone(), Sign::Plus),
            &params,
        )
        .unwrap()
        .e;
        let alpha = 0.83;
        let spec = SuperpositionSpec::new(Mode::UniPlus, alpha, 0.0, 0.02).unwrap();
        let means = uni_means(&spec, &pair, &params, None).unwrap();
        let expect = e1 * alpha.cos().powi(2) + e2 * alpha.sin().powi(2);
        assert_abs_diff_eq!(means.e, expect, epsilon = 1e-13);
    }

    #[test]
    fn bi_momentum_alpha_law() {
        let (params, pair) = setup(0.005);
        let rest = crate::observables::rest_constants(&params).unwrap();
        for (mode, branch_sign) in [(Mode::Bi1, -1.0), (Mode::Bi2, 1.0)] {
            for alpha in [0.0, FRAC_PI_4, 1.1] {
                let spec = SuperpositionSpec::new(mode, alpha, 0.0, 0.005).unwrap();
                let means = bi_means(&spec, &pair, &params).unwrap();
                let expect = (0.005 - branch_sign * rest.p10) * (2.0 * alpha).cos();
                assert_abs_diff_eq!(means.p1, expect, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn precession_amplitudes_match_quadrature() {
        let (_, pair) = setup(0.01);
        let report = precession(&pair);
        // 4096-point trapezoid quadrature of C2 and D2 over one period.
        let n = 4096;
        let mut rv = Complex64::ZERO;
        let mut rs = Complex64::ZERO;
        for i in 0..n {
            let phi = TAU * i as f64 / n as f64;
            let zp = ZProducts::at(&pair, phi);
            rv -= zp.c2() / n as f64;
            rs -= zp.d2() / n as f64;
        }
        assert_abs_diff_eq!(report.rv, rv.re, epsilon = 1e-10);
        assert_abs_diff_eq!(report.rs, rs.re, epsilon = 1e-10);
        assert_abs_diff_eq!(rv.im, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(rs.im, 0.0, epsilon = 1e-14);
    }
}
