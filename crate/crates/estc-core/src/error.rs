use thiserror::Error;

/// Error type shared by the solver modules.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A harmonic index with odd coordinate sum was passed where a lattice
    /// point was required.
    #[error("lattice parity violation: ({0}, {1}, {2}, {3}) has odd coordinate sum")]
    ParityViolation(i32, i32, i32, i32),

    /// General-amplitude table with nonzero longitudinal components.
    #[error("invalid field amplitudes: wave {wave} has a longitudinal component a={a}, b={b}")]
    LongitudinalAmplitude { wave: usize, a: f64, b: f64 },

    /// The local Gram matrix L(n) is numerically singular (resonance surface).
    #[error("degenerate local Gram matrix: condition number {cond:.3e} exceeds {limit:.1e}")]
    DegenerateGram { cond: f64, limit: f64 },

    #[error("invalid solver parameters: {0}")]
    InvalidParams(String),

    /// Selected eigenvector leaks into the outermost harmonic blocks.
    #[error("truncation too small: outermost-harmonic weight {weight:.3e} exceeds {limit:.1e}")]
    TruncationTooSmall { weight: f64, limit: f64 },

    /// Two eigenvalue candidates are indistinguishable under the selection rule.
    #[error("branch selection ambiguous: overlaps {0:.6e} and {1:.6e} tie")]
    BranchAmbiguity(f64, f64),

    /// Recurrence ran into its growing solution.
    #[error("recurrence instability at harmonic {at}: |Z| = {magnitude:.3e}")]
    RecurrenceInstability { at: i32, magnitude: f64 },

    /// Coupling amplitude is zero, the recurrence step divides by it.
    #[error("recurrence undefined for zero field amplitude")]
    ZeroAmplitude,

    /// Inner product of states from different Floquet sectors without an
    /// explicit cross-sector mode.
    #[error("Floquet sector mismatch: ({0}) vs ({1}); request a cross-sector mode")]
    SectorMismatch(String, String),

    #[error("zero-norm multispinor")]
    ZeroNorm,
}

pub type Result<T> = std::result::Result<T, Error>;
