//! Two-spin singlet/triplet basis.
//!
//! Product basis order is `(↑↑, ↑↓, ↓↑, ↓↓)`; the singlet/triplet order is
//! `(S, T1, T0, T-1)` with `S = (↑↓ - ↓↑)/√2` and `T0 = (↑↓ + ↓↑)/√2`.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::matrix::{c64, ComplexMatrix};
use crate::state::{PureState, QuantumState};

pub const S: usize = 0;
pub const T_PLUS: usize = 1;
pub const T_ZERO: usize = 2;
pub const T_MINUS: usize = 3;

/// Basis of the published matrices and of the spin-operator construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    /// `(S, T1, T0, T-1)`.
    #[serde(alias = "st")]
    SingletTriplet,
    /// `(↑↑, ↑↓, ↓↑, ↓↓)`.
    Product,
}

/// Unitary mapping product-basis coordinates to singlet/triplet coordinates:
/// `ρ_ST = U ρ_prod U^†`.
pub fn product_to_st() -> ComplexMatrix {
    let h = FRAC_1_SQRT_2;
    let rows = [
        [0.0, h, -h, 0.0],
        [1.0, 0.0, 0.0, 0.0],
        [0.0, h, h, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ];
    ComplexMatrix::from_fn(4, |i, j| c64(rows[i][j], 0.0))
}

/// Re-expresses a product-basis operator in the singlet/triplet basis.
pub fn to_st_basis(m: &ComplexMatrix) -> ComplexMatrix {
    m.conjugate_by(&product_to_st())
}

/// Single-spin operators `(s_x, s_y, s_z)` with `ħ = 1`.
pub fn spin_half() -> [ComplexMatrix; 3] {
    let sx = ComplexMatrix::from_fn(2, |i, j| c64(if i != j { 0.5 } else { 0.0 }, 0.0));
    let sy = ComplexMatrix::from_fn(2, |i, j| match (i, j) {
        (0, 1) => c64(0.0, -0.5),
        (1, 0) => c64(0.0, 0.5),
        _ => c64(0.0, 0.0),
    });
    let sz = ComplexMatrix::from_real_diagonal(&[0.5, -0.5]);
    [sx, sy, sz]
}

/// `s_D · s_A` on the product space.
pub fn spin_dot() -> ComplexMatrix {
    let s = spin_half();
    let mut out = ComplexMatrix::zeros(4);
    for a in &s {
        out += &a.kron(a);
    }
    out
}

/// Singlet projector `Q_S = ¼ I - s_D · s_A` in the product basis.
pub fn singlet_projector_product() -> ComplexMatrix {
    &ComplexMatrix::identity(4).scale(0.25) - &spin_dot()
}

/// Basis state of the singlet/triplet basis.
pub fn st_state(index: usize) -> PureState {
    PureState::basis(4, index)
}

/// Equal-weight superposition `(|a> + |b>)/√2` in the singlet/triplet basis.
pub fn balanced(a: usize, b: usize) -> PureState {
    let mut v = vec![c64(0.0, 0.0); 4];
    v[a] += c64(FRAC_1_SQRT_2, 0.0);
    v[b] += c64(FRAC_1_SQRT_2, 0.0);
    PureState::normalize(v).expect("distinct basis labels")
}

/// `|S><S|`.
pub fn singlet() -> QuantumState {
    st_state(S).density()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::block::ProjectorSet;

    #[test]
    fn rotation_is_unitary() {
        assert!(product_to_st().unitarity_defect() < 1e-15);
    }

    #[test]
    fn spin_product_gives_singlet_projector() {
        let qs = to_st_basis(&singlet_projector_product());
        let q = ProjectorSet::singlet_triplet();
        assert!(qs.max_abs_diff(q.projector(0).unwrap()) < 1e-15);
    }

    #[test]
    fn singlet_amplitudes() {
        let u = product_to_st();
        // row S of U is <S| in product coordinates
        assert!((u[(S, 1)].re - FRAC_1_SQRT_2).abs() < 1e-16);
        assert!((u[(S, 2)].re + FRAC_1_SQRT_2).abs() < 1e-16);
    }

    #[test]
    fn balanced_state() {
        let psi = balanced(S, T_ZERO);
        assert!((psi.amplitudes()[0].re - FRAC_1_SQRT_2).abs() < 1e-16);
        assert!((psi.amplitudes()[2].re - FRAC_1_SQRT_2).abs() < 1e-16);
    }
}
