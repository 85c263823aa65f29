//! Hermitian pairings of equation rows and the single-point projection
//! operators built from them.
//!
//! Each lattice harmonic n contributes four scalar equations, the rows
//! f^j(n) of the coupling stencil. The pairing
//! N(m, n) = <f^i(m), [f^j(n)]^dag> measures how the equations at m and n
//! interlock; it vanishes whenever the stencils do not overlap
//! (g4d(n - m) > 2), reduces to the local Gram matrix L(n) at m = n, and is
//! a scalar multiple of the identity for second-generation separations.
//!
//! P(n) is the Hermitian projector onto the row space of the equation block
//! at n, restricted to its 13-point stencil: trace 4, idempotent, and
//! P(m) P(n) = 0 exactly when N(m, n) = 0.

use crate::coupling::coupling_matrices;
use crate::error::{Error, Result};
use crate::field::{FieldAmplitudes, FourVectorQ};
use crate::gamma::M4;
use crate::lattice::{LatticeIndex, S13};
use nalgebra::{DMatrix, Matrix4};
use num_complex::Complex64;

/// Condition-number threshold above which L(n) is reported as degenerate.
pub const GRAM_CONDITION_LIMIT: f64 = 1e12;

/// Pairing matrix N(m, n) evaluated by summing V(m, s) V(n, s')^dag over the
/// overlapping stencil shifts m + s = n + s'.
pub fn pair_matrix(
    m: LatticeIndex,
    n: LatticeIndex,
    q: &FourVectorQ,
    f: &FieldAmplitudes,
) -> Result<M4> {
    let vm = coupling_matrices(m, q, f)?;
    let vn = coupling_matrices(n, q, f)?;
    let mut acc = M4::zeros();
    for (i, &s) in S13.iter().enumerate() {
        let target = m + s;
        for (k, &t) in S13.iter().enumerate() {
            if n + t == target {
                acc += vm[i] * vn[k].adjoint();
            }
        }
    }
    Ok(acc)
}

/// Local Gram matrix L(n) = N(n, n).
pub fn gram_matrix(n: LatticeIndex, q: &FourVectorQ, f: &FieldAmplitudes) -> Result<M4> {
    pair_matrix(n, n, q, f)
}

/// Single-point projector data: the equation rows at `center`, the Gram
/// matrix, its inverse, and the dense projector on the stencil space.
#[derive(Debug, Clone)]
pub struct Projector {
    pub center: LatticeIndex,
    /// Stencil points center + s in canonical order; column block i of
    /// `rows` acts on the bispinor at `points[i]`.
    pub points: Vec<LatticeIndex>,
    /// 4 x 52 row matrix W with W[(alpha, 4 i + k)] = V^alpha_k(center, s_i).
    pub rows: DMatrix<Complex64>,
    /// L = W W^dag.
    pub gram: M4,
    /// a = L^{-1}.
    pub gram_inverse: M4,
    /// Condition number of L.
    pub condition: f64,
}

impl Projector {
    /// Dense 52 x 52 projector P = W^dag a W on the stencil space.
    pub fn dense(&self) -> DMatrix<Complex64> {
        let a = DMatrix::from_fn(4, 4, |i, j| self.gram_inverse[(i, j)]);
        self.rows.adjoint() * a * &self.rows
    }

    pub fn trace(&self) -> Complex64 {
        self.dense().diagonal().sum()
    }
}

/// Builds P(n); fails when L(n) is singular to the condition limit, which
/// happens on resonance surfaces of the four-momentum.
pub fn build_projector(
    n: LatticeIndex,
    q: &FourVectorQ,
    f: &FieldAmplitudes,
) -> Result<Projector> {
    let v = coupling_matrices(n, q, f)?;
    let mut rows = DMatrix::zeros(4, 4 * S13.len());
    for (i, vi) in v.iter().enumerate() {
        for alpha in 0..4 {
            for k in 0..4 {
                rows[(alpha, 4 * i + k)] = vi[(alpha, k)];
            }
        }
    }
    let gram: M4 = Matrix4::from_fn(|i, j| (rows.row(i) * rows.row(j).adjoint())[(0, 0)]);

    let eig = gram.symmetric_eigen();
    let max = eig.eigenvalues.iter().fold(0.0_f64, |a, &b| a.max(b.abs()));
    let min = eig
        .eigenvalues
        .iter()
        .fold(f64::INFINITY, |a, &b| a.min(b.abs()));
    let condition = if min > 0.0 { max / min } else { f64::INFINITY };
    if !condition.is_finite() || condition > GRAM_CONDITION_LIMIT {
        return Err(Error::DegenerateGram {
            cond: condition,
            limit: GRAM_CONDITION_LIMIT,
        });
    }
    let gram_inverse = gram
        .try_inverse()
        .ok_or(Error::DegenerateGram {
            cond: condition,
            limit: GRAM_CONDITION_LIMIT,
        })?;

    Ok(Projector {
        center: n,
        points: S13.iter().map(|&s| n + s).collect(),
        rows,
        gram,
        gram_inverse,
        condition,
    })
}

/// Product P(m) P(n) as a dense operator on the union of the two stencils.
/// Returns the union point list and the product matrix.
pub fn projector_product(
    pm: &Projector,
    pn: &Projector,
) -> (Vec<LatticeIndex>, DMatrix<Complex64>) {
    let mut union: Vec<LatticeIndex> = pm.points.clone();
    for &p in &pn.points {
        if !union.contains(&p) {
            union.push(p);
        }
    }
    union.sort();
    let embed = |p: &Projector| -> DMatrix<Complex64> {
        let mut w = DMatrix::zeros(4, 4 * union.len());
        for (i, &point) in p.points.iter().enumerate() {
            let slot = union.iter().position(|&u| u == point).unwrap();
            for alpha in 0..4 {
                for k in 0..4 {
                    w[(alpha, 4 * slot + k)] = p.rows[(alpha, 4 * i + k)];
                }
            }
        }
        w
    };
    let wm = embed(pm);
    let wn = embed(pn);
    let am = DMatrix::from_fn(4, 4, |i, j| pm.gram_inverse[(i, j)]);
    let an = DMatrix::from_fn(4, 4, |i, j| pn.gram_inverse[(i, j)]);
    let product = wm.adjoint() * am * wm * wn.adjoint() * an * wn;
    (union, product)
}
