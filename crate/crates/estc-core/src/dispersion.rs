//! Dispersion solve of the truncated harmonic system.
//!
//! For each branch j the truncated system (q4 I + T_j) Z = 0 is linear in
//! the spectral parameter q4, so the dispersion candidates are eigenvalues
//! of the real symmetric matrix -T_j. The physical branch is the candidate
//! nearest the free value q40 = sqrt(1 + q1^2) whose eigenvector carries
//! maximal free-particle content; its offset xi = q4 - q40 is the branch
//! dispersion.
//!
//! The eigenvector doubles as the Fourier table of the four structural
//! functions z_jk(phi4): real parts on even harmonics for two of the
//! components, odd for the other two, normalized so that
//! sum_k |z_jk|^2 = 1. Sign conventions fix the zeroth even coefficient
//! positive for branch 1 and negative for branch 2, which reproduces the
//! branch identities in the q1 -> 0 limit.
//!
//! Three-term recurrences connect adjacent harmonic amplitudes. They are
//! numerically unstable towards growing |l|, so they serve as validators of
//! the eigensolve, never as the primary path.

use crate::error::{Error, Result};
use crate::evolution::{exchange, n_matrix, Branch, TruncatedSystem};
use crate::field::FieldAmplitudes;
use nalgebra::{DVector, Matrix4, Vector4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Relative eigenvector weight allowed in the outermost harmonic blocks.
pub const OUTER_WEIGHT_LIMIT: f64 = 1e-8;
/// Overlap window within which two candidates count as tied.
pub const OVERLAP_TIE: f64 = 1e-12;

/// Lattice parameters and truncation order of a solve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverParams {
    /// Dimensionless lattice frequency.
    pub omega: f64,
    /// Scalar wave amplitude A_m >= 0.
    pub am: f64,
    /// Harmonic cutoff g_max; the harmonic index runs over |l| <= g_max.
    pub g_max: usize,
}

impl Default for SolverParams {
    fn default() -> Self {
        Self {
            omega: 0.01,
            am: 2.0_f64.sqrt() / 200.0,
            g_max: 12,
        }
    }
}

impl SolverParams {
    pub fn new(omega: f64, am: f64, g_max: usize) -> Result<Self> {
        let p = Self { omega, am, g_max };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega > 0.0) {
            return Err(Error::InvalidParams(format!("omega = {} must be > 0", self.omega)));
        }
        if !(self.am >= 0.0) {
            return Err(Error::InvalidParams(format!("am = {} must be >= 0", self.am)));
        }
        if self.g_max < 2 {
            return Err(Error::InvalidParams(format!(
                "g_max = {} must be at least 2",
                self.g_max
            )));
        }
        Ok(())
    }

    pub fn field(&self) -> FieldAmplitudes {
        FieldAmplitudes::chiral(self.omega, self.am)
    }
}

/// Fourier tables of the four structural functions of one branch.
///
/// `x[k-1][l]` and `y[k-1][l]` hold the cosine and sine coefficients of
/// z_jk = x_jk + i y_jk; two of the k live on even harmonics only, the
/// other two on odd ones, depending on the branch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructuralCoefficients {
    pub j: Branch,
    pub l_max: usize,
    pub x: [Vec<f64>; 4],
    pub y: [Vec<f64>; 4],
}

impl StructuralCoefficients {
    /// Component order of the reduced vector Z_j in terms of k: branch 1
    /// packs (z12, z14, z11, z13), branch 2 packs (z21, z23, z22, z24).
    pub fn k_slots(j: Branch) -> [usize; 4] {
        match j {
            Branch::J1 => [2, 4, 1, 3],
            Branch::J2 => [1, 3, 2, 4],
        }
    }

    /// Harmonic parity carrying z_jk: even for the first two slots.
    pub fn k_parity(j: Branch, k: usize) -> i64 {
        let slots = Self::k_slots(j);
        let slot = slots.iter().position(|&kk| kk == k).unwrap();
        if slot < 2 {
            0
        } else {
            1
        }
    }

    fn zeroed(j: Branch, l_max: usize) -> Self {
        Self {
            j,
            l_max,
            x: std::array::from_fn(|_| vec![0.0; l_max + 1]),
            y: std::array::from_fn(|_| vec![0.0; l_max + 1]),
        }
    }

    /// Builds the x/y tables from reduced harmonic vectors Z_l,
    /// l = -l_max ..= l_max.
    pub fn from_harmonics(j: Branch, vectors: &[Vector4<f64>]) -> Self {
        let l_max = (vectors.len() - 1) / 2;
        let mut t = Self::zeroed(j, l_max);
        let slots = Self::k_slots(j);
        // Z_l holds the amplitudes of harmonic -l: amp(m) = Z_{-m}.
        let amp = |m: i64, slot: usize| -> f64 {
            let idx = (-m + l_max as i64) as usize;
            vectors[idx][slot]
        };
        for (slot, &k) in slots.iter().enumerate() {
            let parity = if slot < 2 { 0 } else { 1 };
            if parity == 0 {
                t.x[k - 1][0] = amp(0, slot);
            }
            for l in 1..=l_max as i64 {
                if l.rem_euclid(2) != parity {
                    continue;
                }
                t.x[k - 1][l as usize] = amp(-l, slot) + amp(l, slot);
                t.y[k - 1][l as usize] = amp(-l, slot) - amp(l, slot);
            }
        }
        t
    }

    /// Scalar Fourier amplitude of harmonic m for component k.
    pub fn fourier_amp(&self, m: i64, k: usize) -> f64 {
        let l = m.unsigned_abs() as usize;
        if l > self.l_max || l.rem_euclid(2) as i64 != Self::k_parity(self.j, k).rem_euclid(2) {
            return 0.0;
        }
        if m == 0 {
            self.x[k - 1][0]
        } else if m > 0 {
            0.5 * (self.x[k - 1][l] - self.y[k - 1][l])
        } else {
            0.5 * (self.x[k - 1][l] + self.y[k - 1][l])
        }
    }

    /// Reduced harmonic vector Z_l.
    pub fn z_vector(&self, l: i64) -> Vector4<f64> {
        let slots = Self::k_slots(self.j);
        Vector4::from_fn(|slot, _| self.fourier_amp(-l, slots[slot]))
    }

    /// Evaluates the truncated series: returns (z_j1, z_j2, z_j3, z_j4).
    pub fn evaluate(&self, phi4: f64) -> [Complex64; 4] {
        let mut z = [Complex64::ZERO; 4];
        for k in 1..=4 {
            let parity = Self::k_parity(self.j, k);
            let mut xr = 0.0;
            let mut yi = 0.0;
            if parity == 0 {
                xr += self.x[k - 1][0];
            }
            for l in 1..=self.l_max {
                if (l as i64).rem_euclid(2) != parity {
                    continue;
                }
                let arg = l as f64 * phi4;
                xr += self.x[k - 1][l] * arg.cos();
                yi += self.y[k - 1][l] * arg.sin();
            }
            z[k - 1] = Complex64::new(xr, yi);
        }
        z
    }

    /// Harmonic weight sum_l |Z_l|^2; 1 for a normalized branch.
    pub fn weight(&self) -> f64 {
        (-(self.l_max as i64)..=self.l_max as i64)
            .map(|l| self.z_vector(l).norm_squared())
            .sum()
    }
}

/// One dispersion branch of the truncated solve.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DispersionBranch {
    /// Quasimomentum the system was assembled with (signed).
    pub q1: f64,
    /// Lattice frequency of the solve.
    pub omega: f64,
    /// Wave amplitude of the solve.
    pub am: f64,
    /// Component interpretation of the solution vector.
    pub j: Branch,
    /// Free-particle reference q40 = sqrt(1 + q1^2).
    pub q40: f64,
    /// Dispersion offset xi = q4 - q40.
    pub xi: f64,
    /// Selected eigenvalue q4.
    pub q4: f64,
    /// Structural-function tables.
    pub z: StructuralCoefficients,
    /// Weight of the l = 0, +-1 harmonics of the eigenvector.
    pub overlap: f64,
    /// Relative Dirac residual of the reconstructed wave function.
    pub residual: f64,
    /// Relative eigenvector weight in the outermost harmonic blocks.
    pub outer_weight: f64,
}

/// The two branches at one quasimomentum, ordered by xi.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BranchPair {
    pub b1: DispersionBranch,
    pub b2: DispersionBranch,
}

impl BranchPair {
    pub fn dxi(&self) -> f64 {
        self.b2.xi - self.b1.xi
    }

    /// Branch with the requested component interpretation.
    pub fn branch(&self, j: Branch) -> &DispersionBranch {
        if self.b1.j == j {
            &self.b1
        } else {
            &self.b2
        }
    }
}

fn free_reference(j: Branch, q1: f64, q40: f64, dim: usize, l_max: usize) -> DVector<f64> {
    // Positive-energy eigenvector of the upper 2x2 block at l = 0,
    // components (1 + q40, q1j), embedded in the physical sector layout.
    let q1j = j.signed_q1(q1);
    let mut v = DVector::zeros(dim);
    let block = l_max; // physical sector packs 2 entries per harmonic
    let norm = ((1.0 + q40) * (1.0 + q40) + q1j * q1j).sqrt();
    v[2 * block] = (1.0 + q40) / norm;
    v[2 * block + 1] = q1j / norm;
    v
}

/// Solves one branch of the dispersion problem at signed quasimomentum q1.
pub fn solve_branch(j: Branch, q1: f64, params: &SolverParams) -> Result<DispersionBranch> {
    params.validate()?;
    let system = TruncatedSystem::assemble(j, q1, params.omega, params.am, params.g_max);
    let (_, phys) = system.physical_block();
    let dim = phys.nrows();
    let l_max = params.g_max;

    let eig = phys.symmetric_eigen();
    let q40 = (1.0 + q1 * q1).sqrt();
    let reference = free_reference(j, q1, q40, dim, l_max);

    // Rank candidates by free-particle content, then by |xi|.
    let mut ranked: Vec<(f64, f64, usize)> = (0..dim)
        .map(|i| {
            let overlap = reference.dot(&eig.eigenvectors.column(i).into_owned()).powi(2);
            let q4 = -eig.eigenvalues[i];
            (overlap, (q4 - q40).abs(), i)
        })
        .collect();
    ranked.sort_by(|a, b| {
        b.0.partial_cmp(&a.0)
            .unwrap()
            .then(a.1.partial_cmp(&b.1).unwrap())
    });
    let best = ranked[0];
    let runner = ranked[1];
    if (best.0 - runner.0).abs() < OVERLAP_TIE && (best.1 - runner.1).abs() < OVERLAP_TIE {
        return Err(Error::BranchAmbiguity(best.0, runner.0));
    }

    let q4 = -eig.eigenvalues[best.2];
    let mut v = eig.eigenvectors.column(best.2).into_owned();
    v /= v.norm();

    // Outermost harmonic blocks |l| = l_max carry 2 physical entries each.
    let outer_weight = v[0] * v[0] + v[1] * v[1] + v[dim - 2] * v[dim - 2] + v[dim - 1] * v[dim - 1];
    if outer_weight > OUTER_WEIGHT_LIMIT {
        return Err(Error::TruncationTooSmall {
            weight: outer_weight,
            limit: OUTER_WEIGHT_LIMIT,
        });
    }

    // Sign convention: zeroth even coefficient positive for branch 1,
    // negative for branch 2.
    let z00 = v[2 * l_max];
    let want = match j {
        Branch::J1 => 1.0,
        Branch::J2 => -1.0,
    };
    if z00 * want < 0.0 {
        vetor_negate(&mut v);
    }

    // Unpack the physical sector into reduced 4-vectors.
    let mut vectors = Vec::with_capacity(2 * l_max + 1);
    for b in 0..=2 * l_max {
        let l = b as i64 - l_max as i64;
        let mut zl = Vector4::zeros();
        if l.rem_euclid(2) == 0 {
            zl[0] = v[2 * b];
            zl[1] = v[2 * b + 1];
        } else {
            zl[2] = v[2 * b];
            zl[3] = v[2 * b + 1];
        }
        vectors.push(zl);
    }
    let z = StructuralCoefficients::from_harmonics(j, &vectors);

    let overlap: f64 = (-1_i64..=1).map(|l| z.z_vector(l).norm_squared()).sum();

    let mut branch = DispersionBranch {
        q1,
        omega: params.omega,
        am: params.am,
        j,
        q40,
        xi: q4 - q40,
        q4,
        z,
        overlap,
        residual: 0.0,
        outer_weight,
    };
    branch.residual = crate::wavefunction::branch_residual(&branch, params)?;
    Ok(branch)
}

fn vetor_negate(v: &mut DVector<f64>) {
    for x in v.iter_mut() {
        *x = -*x;
    }
}

/// Solves both branches and orders them by xi (branch labels are preserved,
/// only the ordering is by dispersion offset; ties keep branch 1 first).
pub fn solve_pair(q1: f64, params: &SolverParams) -> Result<BranchPair> {
    let a = solve_branch(Branch::J1, q1, params)?;
    let b = solve_branch(Branch::J2, q1, params)?;
    if b.xi < a.xi {
        Ok(BranchPair { b1: b, b2: a })
    } else {
        Ok(BranchPair { b1: a, b2: b })
    }
}

/// Starting data of the recurrences: the two even coefficients at l = 0 and
/// the two odd sine coefficients at l = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecurrenceSeeds {
    /// x at l = 0 for the two even slots.
    pub x0: [f64; 2],
    /// y at l = 1 for the two odd slots.
    pub y1: [f64; 2],
}

impl RecurrenceSeeds {
    pub fn from_branch(branch: &DispersionBranch) -> Self {
        let slots = StructuralCoefficients::k_slots(branch.j);
        Self {
            x0: [
                branch.z.x[slots[0] - 1][0],
                branch.z.x[slots[1] - 1][0],
            ],
            y1: [
                branch.z.y[slots[2] - 1][1],
                branch.z.y[slots[3] - 1][1],
            ],
        }
    }
}

/// Magnitude at which the recurrence is declared unstable.
const RECURRENCE_BLOWUP: f64 = 1e3;

/// Extends seed amplitudes to all harmonics |l| <= l_max through the
/// three-term recurrences; the central constraint fixes the odd cosine
/// coefficients at l = +-1.
pub fn recurrence_extend(
    seeds: &RecurrenceSeeds,
    j: Branch,
    q1: f64,
    q4: f64,
    params: &SolverParams,
) -> Result<StructuralCoefficients> {
    if params.am == 0.0 {
        return Err(Error::ZeroAmplitude);
    }
    let l_max = params.g_max;
    let omega = params.omega;
    let n = n_matrix(j, q1, q4, omega);
    let alpha1 = exchange();
    let kappa = j.parity() / (2.0 * params.am);

    let step = |zm: &Vector4<f64>, z: &Vector4<f64>, l: i64| -> Vector4<f64> {
        let shifted = n - Matrix4::identity() * (l as f64 * omega);
        -zm + alpha1 * (shifted * z) * kappa
    };

    let mut vectors = vec![Vector4::zeros(); 2 * l_max + 1];
    let at = |l: i64| (l + l_max as i64) as usize;

    let z0 = Vector4::new(seeds.x0[0], seeds.x0[1], 0.0, 0.0);
    vectors[at(0)] = z0;

    // Central constraint: Z_{-1} + Z_{+1} = kappa alpha1 N Z_0.
    let sum = alpha1 * (n * z0) * kappa;
    let z_plus = Vector4::new(0.0, 0.0, (sum[2] + seeds.y1[0]) / 2.0, (sum[3] + seeds.y1[1]) / 2.0);
    let z_minus = Vector4::new(0.0, 0.0, (sum[2] - seeds.y1[0]) / 2.0, (sum[3] - seeds.y1[1]) / 2.0);
    vectors[at(1)] = z_plus;
    vectors[at(-1)] = z_minus;

    for l in 1..l_max as i64 {
        let next = step(&vectors[at(l - 1)], &vectors[at(l)], l);
        if next.norm() > RECURRENCE_BLOWUP {
            return Err(Error::RecurrenceInstability {
                at: (l + 1) as i32,
                magnitude: next.norm(),
            });
        }
        vectors[at(l + 1)] = next;
    }
    for l in (-(l_max as i64 - 1)..=-1).rev() {
        let next = step(&vectors[at(l + 1)], &vectors[at(l)], l);
        if next.norm() > RECURRENCE_BLOWUP {
            return Err(Error::RecurrenceInstability {
                at: (l - 1) as i32,
                magnitude: next.norm(),
            });
        }
        vectors[at(l - 1)] = next;
    }

    Ok(StructuralCoefficients::from_harmonics(j, &vectors))
}

/// Spectral L2 residual of the evolution equation over one period for the
/// given coefficient tables at (q1, q4). Zero for an exact solution; the
/// truncation edge contributes ~ 2 A_m |Z_{l_max}| / omega.
pub fn ode_residual(
    z: &StructuralCoefficients,
    q1: f64,
    q4: f64,
    params: &SolverParams,
) -> f64 {
    let omega = params.omega;
    let n = n_matrix(z.j, q1, q4, omega);
    let alpha1 = exchange();
    let kappa = z.j.parity() * 2.0 * params.am;
    let l_max = z.l_max as i64;

    let zv = |l: i64| -> Vector4<f64> {
        if l.unsigned_abs() as usize > z.l_max {
            Vector4::zeros()
        } else {
            z.z_vector(l)
        }
    };

    let mut total = 0.0;
    for l in -(l_max + 1)..=(l_max + 1) {
        let lhs = (n - Matrix4::identity() * (l as f64 * omega)) * zv(l);
        let rhs = alpha1 * (zv(l - 1) + zv(l + 1)) * kappa;
        total += (lhs - rhs).norm_squared();
    }
    total.sqrt() / omega
}

/// Largest deviation of the pointwise norm sum_k |z_jk|^2 from 1 over
/// `samples` equally spaced phases.
pub fn norm_conservation_error(z: &StructuralCoefficients, samples: usize) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..samples {
        let phi = std::f64::consts::TAU * i as f64 / samples as f64;
        let zv = z.evaluate(phi);
        let norm: f64 = zv.iter().map(|c| c.norm_sqr()).sum();
        worst = worst.max((norm - 1.0).abs());
    }
    worst
}
