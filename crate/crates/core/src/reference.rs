//! Published four-decimal density matrices used as regression references.
//!
//! The matrices are written in the product spin basis `(↑↑, ↑↓, ↓↑, ↓↓)`;
//! [`load`] rotates them into the singlet/triplet basis and projects them onto
//! the nearest density matrix.

use crate::error::Result;
use crate::matrix::{c64, ComplexMatrix, C64};
use crate::st::to_st_basis;
use crate::state::QuantumState;

type Entries = [[(f64, f64); 4]; 4];

const ALPHA_PAIR_1: Entries = [
    [(0.3476, 0.0), (-0.1783, 0.1361), (-0.0711, -0.0503), (-0.1975, 0.0413)],
    [(-0.1783, -0.1361), (0.3182, 0.0), (-0.1154, 0.0703), (0.0582, -0.0169)],
    [(-0.0711, 0.0503), (-0.1154, -0.0703), (0.1498, 0.0), (0.0827, 0.0416)],
    [(-0.1975, -0.0413), (0.0582, 0.0169), (0.0827, -0.0416), (0.1844, 0.0)],
];

const ALPHA_PAIR_2: Entries = [
    [(0.2912, 0.0), (-0.0327, -0.0229), (-0.0670, -0.2773), (0.0165, 0.1400)],
    [(-0.0327, 0.0229), (0.0594, 0.0), (0.0133, 0.0331), (0.0362, -0.0220)],
    [(-0.0670, 0.2773), (0.0133, -0.0331), (0.3836, 0.0), (-0.0696, -0.0662)],
    [(0.0165, -0.1400), (0.0362, 0.0220), (-0.0696, 0.0662), (0.2658, 0.0)],
];

const MEASURE_PAIR_1: Entries = [
    [(0.2564, 0.0), (0.2244, 0.0068), (0.0911, -0.0216), (0.1709, 0.0)],
    [(0.2244, -0.0068), (0.2317, 0.0), (0.1516, 0.0477), (0.1882, -0.0273)],
    [(0.0911, 0.0216), (0.1516, -0.0477), (0.3372, 0.0), (0.0963, -0.1143)],
    [(0.1709, 0.0), (0.1882, 0.0273), (0.0963, 0.1143), (0.1747, 0.0)],
];

const MEASURE_PAIR_2: Entries = [
    [(0.2871, 0.0), (0.2749, -0.0193), (0.1011, 0.0191), (0.1348, 0.0513)],
    [(0.2749, 0.0193), (0.4127, 0.0), (0.0708, 0.0021), (0.1415, 0.0318)],
    [(0.1011, -0.0191), (0.0708, -0.0021), (0.1398, 0.0), (0.0871, 0.0375)],
    [(0.1348, -0.0513), (0.1415, -0.0318), (0.0871, -0.0375), (0.1604, 0.0)],
];

/// Identifier of a published reference matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reference {
    /// Pair whose `C_{α,1}` ordering flips between α = 0.3 and α = 0.4.
    AlphaReversal1,
    AlphaReversal2,
    /// Pair ordered differently by `C̃_l1` and `C_r`.
    MeasureReversal1,
    MeasureReversal2,
}

impl Reference {
    pub const ALL: [Reference; 4] = [
        Reference::AlphaReversal1,
        Reference::AlphaReversal2,
        Reference::MeasureReversal1,
        Reference::MeasureReversal2,
    ];

    fn entries(self) -> &'static Entries {
        match self {
            Reference::AlphaReversal1 => &ALPHA_PAIR_1,
            Reference::AlphaReversal2 => &ALPHA_PAIR_2,
            Reference::MeasureReversal1 => &MEASURE_PAIR_1,
            Reference::MeasureReversal2 => &MEASURE_PAIR_2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Reference::AlphaReversal1 => "alpha_reversal_1",
            Reference::AlphaReversal2 => "alpha_reversal_2",
            Reference::MeasureReversal1 => "measure_reversal_1",
            Reference::MeasureReversal2 => "measure_reversal_2",
        }
    }

    /// The matrix as printed, in the product basis.
    pub fn product_basis(self) -> ComplexMatrix {
        let e = self.entries();
        ComplexMatrix::from_fn(4, |i, j| {
            let (re, im): (f64, f64) = e[i][j];
            c64(re, im)
        })
    }

    /// Rotated to the singlet/triplet basis and projected onto the nearest
    /// density matrix; the projection distance is returned alongside.
    pub fn load(self) -> Result<(QuantumState, f64)> {
        let st = to_st_basis(&self.product_basis());
        QuantumState::nearest_density(&st)
    }

    /// Convenience wrapper around [`Reference::load`].
    pub fn state(self) -> QuantumState {
        self.load().expect("reference matrices are valid").0
    }
}

/// The pair whose `C_{α,1}` ordering reverses with α.
pub fn alpha_reversal_pair() -> (QuantumState, QuantumState) {
    (
        Reference::AlphaReversal1.state(),
        Reference::AlphaReversal2.state(),
    )
}

/// The pair ordered oppositely by `C̃_l1` and `C_r`.
pub fn measure_reversal_pair() -> (QuantumState, QuantumState) {
    (
        Reference::MeasureReversal1.state(),
        Reference::MeasureReversal2.state(),
    )
}

/// Raw entries as rows, for serialization.
pub fn rows(r: Reference) -> Vec<Vec<C64>> {
    let m = r.product_basis();
    (0..4).map(|i| (0..4).map(|j| m[(i, j)]).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn references_are_hermitian_and_close_to_states() {
        for r in Reference::ALL {
            let m = r.product_basis();
            assert!(m.is_hermitian(1e-15), "{}", r.name());
            let (state, dist) = r.load().unwrap();
            assert!((state.trace() - 1.0).abs() < 1e-12);
            assert!(dist < 1e-3, "{} moved by {dist}", r.name());
        }
    }
}
