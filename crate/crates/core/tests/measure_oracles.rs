//! Closed-form measures against eigenvalue computations done with nalgebra.

use blockcoh::measures::{c_alpha_1_value, c_l1_tilde, c_rel_entropy, c_wy};
use blockcoh::state::random_state;
use blockcoh::{LogBase, ProjectorSet, QuantumState, StateKind};
use nalgebra::{Complex, DMatrix, DVector};
use proptest::prelude::*;

type M = DMatrix<Complex<f64>>;

fn to_na(rho: &QuantumState) -> M {
    let m = rho.matrix();
    DMatrix::from_fn(m.dim(), m.dim(), |i, j| m[(i, j)])
}

/// Powers on the support only; eigenvalues below the cutoff count as zero.
fn power(m: &M, p: f64) -> M {
    let e = m.clone().symmetric_eigen();
    let cutoff = 1e-12 * e.eigenvalues.iter().copied().fold(1.0, f64::max);
    let d = DVector::from_iterator(
        e.eigenvalues.len(),
        e.eigenvalues
            .iter()
            .map(|&l| Complex::new(if l > cutoff { l.powf(p) } else { 0.0 }, 0.0)),
    );
    &e.eigenvectors * DMatrix::from_diagonal(&d) * e.eigenvectors.adjoint()
}

fn eigenvalues(m: &M) -> Vec<f64> {
    m.clone().symmetric_eigenvalues().iter().copied().collect()
}

fn submatrix(m: &M, idx: &[usize]) -> M {
    DMatrix::from_fn(idx.len(), idx.len(), |i, j| m[(idx[i], idx[j])])
}

fn alpha_1_oracle(rho: &M, blocks: &[Vec<usize>], alpha: f64) -> f64 {
    let ra = power(rho, alpha);
    let overlap: f64 = blocks
        .iter()
        .map(|b| {
            eigenvalues(&submatrix(&ra, b))
                .iter()
                .map(|&l| l.max(0.0).powf(1.0 / alpha))
                .sum::<f64>()
        })
        .sum();
    1.0 - overlap
}

fn entropy_bits(values: &[f64]) -> f64 {
    -values
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| l * l.log2())
        .sum::<f64>()
}

fn st_blocks() -> Vec<Vec<usize>> {
    vec![vec![0], vec![1, 2, 3]]
}

fn state(seed: u64, pure: bool) -> QuantumState {
    let kind = if pure { StateKind::Pure } else { StateKind::Mixed };
    random_state(4, kind, seed).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn alpha_1_matches_oracle(seed in any::<u64>(), pure in any::<bool>(), alpha in 0.05f64..0.95) {
        let rho = state(seed, pure);
        let got = c_alpha_1_value(&rho, &ProjectorSet::singlet_triplet(), alpha).unwrap();
        let want = alpha_1_oracle(&to_na(&rho), &st_blocks(), alpha);
        prop_assert!((got - want).abs() < 1e-9, "{} vs {}", got, want);
    }

    #[test]
    fn alpha_1_matches_oracle_on_finer_partition(seed in any::<u64>(), alpha in 0.05f64..0.95) {
        let rho = random_state(5, StateKind::Mixed, seed).unwrap();
        let blocks = vec![vec![0, 1], vec![2], vec![3, 4]];
        let q = ProjectorSet::from_partition(5, blocks.clone()).unwrap();
        let got = c_alpha_1_value(&rho, &q, alpha).unwrap();
        let want = alpha_1_oracle(&to_na(&rho), &blocks, alpha);
        prop_assert!((got - want).abs() < 1e-9, "{} vs {}", got, want);
    }

    #[test]
    fn l1_tilde_is_twice_the_off_block_row_norm(seed in any::<u64>(), pure in any::<bool>()) {
        let rho = state(seed, pure);
        let m = to_na(&rho);
        let row: f64 = (1..4).map(|j| m[(0, j)].norm_sqr()).sum::<f64>().sqrt();
        let got = c_l1_tilde(&rho, &ProjectorSet::singlet_triplet()).unwrap().value;
        prop_assert!((got - 2.0 * row).abs() < 1e-10, "{} vs {}", got, 2.0 * row);
    }

    #[test]
    fn relative_entropy_matches_oracle(seed in any::<u64>(), pure in any::<bool>()) {
        let rho = state(seed, pure);
        let m = to_na(&rho);
        let mut dephased = M::zeros(4, 4);
        dephased[(0, 0)] = m[(0, 0)];
        for i in 1..4 {
            for j in 1..4 {
                dephased[(i, j)] = m[(i, j)];
            }
        }
        let want = entropy_bits(&eigenvalues(&dephased)) - entropy_bits(&eigenvalues(&m));
        let q = ProjectorSet::singlet_triplet();
        let got = c_rel_entropy(&rho, &q, LogBase::Bits).unwrap().raw_value;
        prop_assert!((got - want).abs() < 1e-9, "{} vs {}", got, want);
        let nats = c_rel_entropy(&rho, &q, LogBase::Nats).unwrap().raw_value;
        prop_assert!((nats - want * std::f64::consts::LN_2).abs() < 1e-9);
    }

    #[test]
    fn skew_information_matches_oracle(seed in any::<u64>(), pure in any::<bool>()) {
        let rho = state(seed, pure);
        let m = to_na(&rho);
        let root = power(&m, 0.5);
        let want: f64 = st_blocks()
            .iter()
            .map(|b| {
                let mut p = M::zeros(4, 4);
                for &i in b {
                    p[(i, i)] = Complex::new(1.0, 0.0);
                }
                (&m * &p).trace().re - (&root * &p * &root * &p).trace().re
            })
            .sum();
        let got = c_wy(&rho, &ProjectorSet::singlet_triplet()).unwrap().raw_value;
        prop_assert!((got - want).abs() < 1e-9, "{} vs {}", got, want);
    }
}
