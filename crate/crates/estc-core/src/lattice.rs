//! Integer lattice of Fourier harmonics.
//!
//! Both the field and the wave function live on the even-parity integer
//! lattice: points n = (n1, n2, n3, n4) with even n1+n2+n3+n4. Harmonics are
//! ranked by the norm g4d(n) = max(|n1|+|n2|+|n3|, |n4|), which matches the
//! reach of the field spectrum: one equation couples a harmonic to the twelve
//! first-generation shifts with g4d = 1, and pairings of two equations reach
//! the 56 second-generation shifts with g4d = 2.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Neg, Sub};

/// Point of the even-parity harmonic lattice.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default,
)]
pub struct LatticeIndex {
    pub n1: i32,
    pub n2: i32,
    pub n3: i32,
    pub n4: i32,
}

impl LatticeIndex {
    pub const ORIGIN: LatticeIndex = LatticeIndex::new(0, 0, 0, 0);

    pub const fn new(n1: i32, n2: i32, n3: i32, n4: i32) -> Self {
        Self { n1, n2, n3, n4 }
    }

    /// Membership in the even-parity lattice.
    pub const fn is_even(&self) -> bool {
        (self.n1 + self.n2 + self.n3 + self.n4) % 2 == 0
    }

    /// Truncation norm: max(|n1|+|n2|+|n3|, |n4|).
    pub const fn g4d(&self) -> i32 {
        let spatial = self.n1.abs() + self.n2.abs() + self.n3.abs();
        let temporal = self.n4.abs();
        if spatial > temporal {
            spatial
        } else {
            temporal
        }
    }
}

impl Add for LatticeIndex {
    type Output = LatticeIndex;
    fn add(self, rhs: Self) -> Self {
        Self::new(
            self.n1 + rhs.n1,
            self.n2 + rhs.n2,
            self.n3 + rhs.n3,
            self.n4 + rhs.n4,
        )
    }
}

impl Sub for LatticeIndex {
    type Output = LatticeIndex;
    fn sub(self, rhs: Self) -> Self {
        Self::new(
            self.n1 - rhs.n1,
            self.n2 - rhs.n2,
            self.n3 - rhs.n3,
            self.n4 - rhs.n4,
        )
    }
}

impl Neg for LatticeIndex {
    type Output = LatticeIndex;
    fn neg(self) -> Self {
        Self::new(-self.n1, -self.n2, -self.n3, -self.n4)
    }
}

impl fmt::Display for LatticeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.n1, self.n2, self.n3, self.n4)
    }
}

const fn li(n1: i32, n2: i32, n3: i32, n4: i32) -> LatticeIndex {
    LatticeIndex::new(n1, n2, n3, n4)
}

/// The origin plus the twelve first-generation shifts, in canonical order.
pub const S13: [LatticeIndex; 13] = [
    li(0, 0, 0, 0),
    li(0, 0, -1, -1),
    li(0, -1, 0, -1),
    li(-1, 0, 0, -1),
    li(1, 0, 0, -1),
    li(0, 1, 0, -1),
    li(0, 0, 1, -1),
    li(0, 0, -1, 1),
    li(0, -1, 0, 1),
    li(-1, 0, 0, 1),
    li(1, 0, 0, 1),
    li(0, 1, 0, 1),
    li(0, 0, 1, 1),
];

/// Canonically ordered list of the origin, the 12 first-generation shifts
/// (g4d = 1, indices 1..=12) and the 56 second-generation shifts (g4d = 2,
/// indices 13..=68). Its first 13 elements are exactly [`S13`].
pub const S69: [LatticeIndex; 69] = [
    li(0, 0, 0, 0),
    // g4d = 1
    li(0, 0, -1, -1),
    li(0, -1, 0, -1),
    li(-1, 0, 0, -1),
    li(1, 0, 0, -1),
    li(0, 1, 0, -1),
    li(0, 0, 1, -1),
    li(0, 0, -1, 1),
    li(0, -1, 0, 1),
    li(-1, 0, 0, 1),
    li(1, 0, 0, 1),
    li(0, 1, 0, 1),
    li(0, 0, 1, 1),
    // g4d = 2, purely temporal
    li(0, 0, 0, -2),
    li(0, 0, 0, 2),
    // g4d = 2, purely spatial
    li(0, 0, -2, 0),
    li(0, -1, -1, 0),
    li(-1, 0, -1, 0),
    li(1, 0, -1, 0),
    li(0, 1, -1, 0),
    li(0, -2, 0, 0),
    li(-1, -1, 0, 0),
    li(1, -1, 0, 0),
    li(-2, 0, 0, 0),
    li(2, 0, 0, 0),
    li(-1, 1, 0, 0),
    li(1, 1, 0, 0),
    li(0, 2, 0, 0),
    li(0, -1, 1, 0),
    li(-1, 0, 1, 0),
    li(1, 0, 1, 0),
    li(0, 1, 1, 0),
    li(0, 0, 2, 0),
    // g4d = 2, n4 = -2
    li(0, 0, -2, -2),
    li(0, -1, -1, -2),
    li(-1, 0, -1, -2),
    li(1, 0, -1, -2),
    li(0, 1, -1, -2),
    li(0, -2, 0, -2),
    li(-1, -1, 0, -2),
    li(1, -1, 0, -2),
    li(-2, 0, 0, -2),
    li(2, 0, 0, -2),
    li(-1, 1, 0, -2),
    li(1, 1, 0, -2),
    li(0, 2, 0, -2),
    li(0, -1, 1, -2),
    li(-1, 0, 1, -2),
    li(1, 0, 1, -2),
    li(0, 1, 1, -2),
    li(0, 0, 2, -2),
    // g4d = 2, n4 = +2
    li(0, 0, -2, 2),
    li(0, -1, -1, 2),
    li(-1, 0, -1, 2),
    li(1, 0, -1, 2),
    li(0, 1, -1, 2),
    li(0, -2, 0, 2),
    li(-1, -1, 0, 2),
    li(1, -1, 0, 2),
    li(-2, 0, 0, 2),
    li(2, 0, 0, 2),
    li(-1, 1, 0, 2),
    li(1, 1, 0, 2),
    li(0, 2, 0, 2),
    li(0, -1, 1, 2),
    li(-1, 0, 1, 2),
    li(1, 0, 1, 2),
    li(0, 1, 1, 2),
    li(0, 0, 2, 2),
];

/// Canonically ordered shift lists: the 13-point stencil of one equation and
/// the 69-point list covering all pairings of two equations.
pub fn shift_lists() -> (&'static [LatticeIndex; 13], &'static [LatticeIndex; 69]) {
    (&S13, &S69)
}
