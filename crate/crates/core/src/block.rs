//! Projector sets, block dephasing and block-diagonal operators.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{c64, eigh_unchecked, ComplexMatrix, C64};
use crate::state::QuantumState;

/// Tolerance for idempotence, orthogonality and completeness.
pub const PROJECTOR_TOL: f64 = 1e-9;

/// Complete family of mutually orthogonal projectors `{P_k}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProjectorSet {
    dim: usize,
    projectors: Vec<ComplexMatrix>,
    /// Orthonormal basis of each range, stored as column lists.
    bases: Vec<Vec<Vec<C64>>>,
    /// Basis-index blocks when every projector is diagonal in the working basis.
    partition: Option<Vec<Vec<usize>>>,
}

impl ProjectorSet {
    /// Validates explicit projector matrices.
    pub fn new(projectors: Vec<ComplexMatrix>) -> Result<Self> {
        let dim = match projectors.first() {
            Some(p) => p.dim(),
            None => return Err(Error::InvalidProjectors("no projectors given".into())),
        };
        let mut sum = ComplexMatrix::zeros(dim);
        for (k, p) in projectors.iter().enumerate() {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.dim(),
                });
            }
            if !p.is_finite() {
                return Err(Error::NonFinite);
            }
            if !p.is_hermitian(PROJECTOR_TOL) {
                return Err(Error::InvalidProjectors(format!("P_{k} is not Hermitian")));
            }
            if (p * p).max_abs_diff(p) > PROJECTOR_TOL {
                return Err(Error::InvalidProjectors(format!("P_{k} is not idempotent")));
            }
            for (l, q) in projectors.iter().enumerate().skip(k + 1) {
                if (p * q).max_abs() > PROJECTOR_TOL {
                    return Err(Error::InvalidProjectors(format!(
                        "P_{k} and P_{l} are not orthogonal"
                    )));
                }
            }
            sum += p;
        }
        if sum.max_abs_diff(&ComplexMatrix::identity(dim)) > PROJECTOR_TOL {
            return Err(Error::InvalidProjectors(
                "projectors do not sum to the identity".into(),
            ));
        }
        let bases = projectors.iter().map(range_basis).collect::<Vec<_>>();
        if bases.iter().any(|b| b.is_empty()) {
            return Err(Error::InvalidProjectors("zero projector in set".into()));
        }
        let partition = diagonal_partition(&projectors);
        Ok(Self {
            dim,
            projectors: projectors.into_iter().map(|p| p.hermitian_part()).collect(),
            bases,
            partition,
        })
    }

    /// Diagonal projectors from a partition of `0..dim`.
    pub fn from_partition(dim: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; dim];
        for block in &blocks {
            if block.is_empty() {
                return Err(Error::InvalidProjectors("empty block in partition".into()));
            }
            for &i in block {
                if i >= dim {
                    return Err(Error::InvalidProjectors(format!(
                        "index {i} out of range for dimension {dim}"
                    )));
                }
                if std::mem::replace(&mut seen[i], true) {
                    return Err(Error::InvalidProjectors(format!(
                        "index {i} appears twice in partition"
                    )));
                }
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidProjectors(format!(
                "index {i} missing from partition"
            )));
        }
        let projectors = blocks
            .iter()
            .map(|b| {
                let mut p = ComplexMatrix::zeros(dim);
                for &i in b {
                    p[(i, i)] = c64(1.0, 0.0);
                }
                p
            })
            .collect();
        let bases = blocks
            .iter()
            .map(|b| b.iter().map(|&i| unit(dim, i)).collect())
            .collect();
        Ok(Self {
            dim,
            projectors,
            bases,
            partition: Some(blocks),
        })
    }

    /// Parses a partition such as `"0|1,2,3"`.
    pub fn parse_partition(dim: usize, spec: &str) -> Result<Self> {
        let blocks = spec
            .split('|')
            .map(|block| {
                block
                    .split(',')
                    .map(|s| {
                        s.trim().parse::<usize>().map_err(|_| {
                            Error::InvalidProjectors(format!("bad index {s:?} in {spec:?}"))
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_partition(dim, blocks)
    }

    /// Singlet/triplet projectors `{Q_S, Q_T}` in the `(S, T1, T0, T-1)` basis.
    pub fn singlet_triplet() -> Self {
        Self::from_partition(4, vec![vec![0], vec![1, 2, 3]]).expect("valid partition")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.projectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projectors.is_empty()
    }

    pub fn projectors(&self) -> &[ComplexMatrix] {
        &self.projectors
    }

    pub fn projector(&self, k: usize) -> Result<&ComplexMatrix> {
        self.projectors.get(k).ok_or(Error::BadLabel {
            label: k,
            blocks: self.len(),
        })
    }

    pub fn partition(&self) -> Option<&[Vec<usize>]> {
        self.partition.as_deref()
    }

    /// Rank of each projector.
    pub fn ranks(&self) -> Vec<usize> {
        self.bases.iter().map(Vec::len).collect()
    }

    fn check_dim(&self, m: &ComplexMatrix) -> Result<()> {
        if m.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: m.dim(),
            });
        }
        Ok(())
    }

    /// `Δ(ρ) = Σ_k P_k ρ P_k`.
    pub fn dephase(&self, rho: &QuantumState) -> Result<QuantumState> {
        self.check_dim(rho.matrix())?;
        Ok(QuantumState::trusted(
            self.dephase_matrix(rho.matrix()),
            rho.is_normalized(),
        ))
    }

    /// Block dephasing of an arbitrary operator.
    pub fn dephase_matrix(&self, m: &ComplexMatrix) -> ComplexMatrix {
        match &self.partition {
            Some(_) => {
                let label = self.diagonal_labels();
                ComplexMatrix::from_fn(self.dim, |i, j| {
                    if label[i] == label[j] {
                        m[(i, j)]
                    } else {
                        c64(0.0, 0.0)
                    }
                })
            }
            None => {
                let mut out = ComplexMatrix::zeros(self.dim);
                for p in &self.projectors {
                    out += &(&(p * m) * p);
                }
                out
            }
        }
    }

    fn diagonal_labels(&self) -> Vec<usize> {
        let mut label = vec![0; self.dim];
        if let Some(blocks) = &self.partition {
            for (k, b) in blocks.iter().enumerate() {
                for &i in b {
                    label[i] = k;
                }
            }
        }
        label
    }

    /// True iff `max |ρ - Δ(ρ)| <= tol`.
    pub fn is_block_incoherent(&self, rho: &QuantumState, tol: f64) -> Result<bool> {
        self.check_dim(rho.matrix())?;
        Ok(self.coherent_part(rho.matrix()).max_abs() <= tol)
    }

    /// `ρ - Δ(ρ)`.
    pub fn coherent_part(&self, m: &ComplexMatrix) -> ComplexMatrix {
        m - &self.dephase_matrix(m)
    }

    /// `P_i ρ P_j` for `i != j`.
    pub fn off_block(&self, rho: &QuantumState, i: usize, j: usize) -> Result<ComplexMatrix> {
        self.check_dim(rho.matrix())?;
        if i == j {
            return Err(Error::InvalidParameter(format!(
                "off_block needs distinct labels, got {i} twice"
            )));
        }
        self.block_product(rho.matrix(), i, j)
    }

    /// `P_i m P_j` for any labels.
    pub fn block_product(&self, m: &ComplexMatrix, i: usize, j: usize) -> Result<ComplexMatrix> {
        let pi = self.projector(i)?;
        let pj = self.projector(j)?;
        Ok(&(pi * m) * pj)
    }

    /// `V_k^† m V_k`: the `k`-th diagonal block in its own orthonormal basis.
    pub fn compress(&self, m: &ComplexMatrix, k: usize) -> ComplexMatrix {
        let basis = &self.bases[k];
        ComplexMatrix::from_fn(basis.len(), |a, b| {
            let mb = m.apply(&basis[b]);
            basis[a].iter().zip(&mb).map(|(x, y)| x.conj() * y).sum()
        })
    }

    /// `Σ_k V_k B_k V_k^†`: assembles a block-diagonal operator from blocks
    /// given in each range's own basis.
    pub fn embed(&self, blocks: &[ComplexMatrix]) -> Result<ComplexMatrix> {
        if blocks.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: blocks.len(),
            });
        }
        let mut out = ComplexMatrix::zeros(self.dim);
        for (k, b) in blocks.iter().enumerate() {
            let basis = &self.bases[k];
            if b.dim() != basis.len() {
                return Err(Error::DimensionMismatch {
                    expected: basis.len(),
                    found: b.dim(),
                });
            }
            if let Some(part) = &self.partition {
                let idx = &part[k];
                for (a, &i) in idx.iter().enumerate() {
                    for (c, &j) in idx.iter().enumerate() {
                        out[(i, j)] = b[(a, c)];
                    }
                }
            } else {
                for (a, va) in basis.iter().enumerate() {
                    for (c, vc) in basis.iter().enumerate() {
                        let w = b[(a, c)];
                        for i in 0..self.dim {
                            for j in 0..self.dim {
                                out[(i, j)] += va[i] * w * vc[j].conj();
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Block-diagonal unitary `U = Σ_k V_k U_k V_k^†`, so `Δ(U) = U`.
    pub fn block_diagonal_unitary(&self, blocks: &[ComplexMatrix]) -> Result<ComplexMatrix> {
        for b in blocks {
            let defect = b.unitarity_defect();
            if defect > 1e-10 {
                return Err(Error::NotUnitary { deviation: defect });
            }
        }
        self.embed(blocks)
    }

    /// `{P_i ⊗ T_j}`.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let mut out = Vec::with_capacity(self.len() * other.len());
        for p in &self.projectors {
            for t in &other.projectors {
                out.push(p.kron(t));
            }
        }
        Self::new(out)
    }

    /// `{P_i ⊕ 0} ∪ {0 ⊕ T_j}`.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        let zero_a = ComplexMatrix::zeros(self.dim);
        let zero_b = ComplexMatrix::zeros(other.dim);
        let mut out: Vec<ComplexMatrix> =
            self.projectors.iter().map(|p| p.direct_sum(&zero_b)).collect();
        out.extend(other.projectors.iter().map(|t| zero_a.direct_sum(t)));
        Self::new(out)
    }
}

fn unit(dim: usize, i: usize) -> Vec<C64> {
    let mut v = vec![c64(0.0, 0.0); dim];
    v[i] = c64(1.0, 0.0);
    v
}

fn range_basis(p: &ComplexMatrix) -> Vec<Vec<C64>> {
    let eig = eigh_unchecked(p);
    eig.values
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > 0.5)
        .map(|(k, _)| eig.vector(k))
        .collect()
}

fn diagonal_partition(projectors: &[ComplexMatrix]) -> Option<Vec<Vec<usize>>> {
    let dim = projectors[0].dim();
    let mut blocks = Vec::with_capacity(projectors.len());
    for p in projectors {
        let mut block = Vec::new();
        for i in 0..dim {
            for j in 0..dim {
                let z = p[(i, j)];
                let expected = if i == j && z.re > 0.5 { 1.0 } else { 0.0 };
                if (z - c64(expected, 0.0)).norm() > PROJECTOR_TOL {
                    return None;
                }
            }
            if p[(i, i)].re > 0.5 {
                block.push(i);
            }
        }
        blocks.push(block);
    }
    Some(blocks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{haar_unitary, random_mixed, rng_from_seed, PureState};

    fn s_plus_t0() -> QuantumState {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        PureState::new(vec![c64(h, 0.0), c64(0.0, 0.0), c64(h, 0.0), c64(0.0, 0.0)])
            .unwrap()
            .density()
    }

    #[test]
    fn singlet_triplet_shape() {
        let q = ProjectorSet::singlet_triplet();
        assert_eq!(q.ranks(), vec![1, 3]);
        assert_eq!(q.projector(0).unwrap()[(0, 0)], c64(1.0, 0.0));
        assert!(q.projector(2).is_err());
    }

    #[test]
    fn dephase_balanced_superposition() {
        let q = ProjectorSet::singlet_triplet();
        let d = q.dephase(&s_plus_t0()).unwrap();
        let expected = ComplexMatrix::from_real_diagonal(&[0.5, 0.0, 0.5, 0.0]);
        assert!(d.matrix().max_abs_diff(&expected) < 1e-15);
        assert!(q.is_block_incoherent(&d, 1e-12).unwrap());
        assert!(!q.is_block_incoherent(&s_plus_t0(), 1e-12).unwrap());
    }

    #[test]
    fn off_block_of_superposition() {
        let q = ProjectorSet::singlet_triplet();
        let m = q.off_block(&s_plus_t0(), 0, 1).unwrap();
        let mut expected = ComplexMatrix::zeros(4);
        expected[(0, 2)] = c64(0.5, 0.0);
        assert!(m.max_abs_diff(&expected) < 1e-15);
        assert!(matches!(q.off_block(&s_plus_t0(), 0, 5), Err(Error::BadLabel { .. })));
    }

    #[test]
    fn explicit_and_partition_agree() {
        let part = ProjectorSet::parse_partition(4, "0|1,2,3").unwrap();
        let explicit = ProjectorSet::new(part.projectors().to_vec()).unwrap();
        assert!(explicit.partition().is_some());
        let mut rng = rng_from_seed(1);
        let rho = random_mixed(4, &mut rng);
        let a = part.dephase(&rho).unwrap();
        let b = explicit.dephase(&rho).unwrap();
        assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-15);
    }

    #[test]
    fn rotated_projectors_dephase_consistently() {
        let mut rng = rng_from_seed(2);
        let u = haar_unitary(4, &mut rng);
        let st = ProjectorSet::singlet_triplet();
        let rotated =
            ProjectorSet::new(st.projectors().iter().map(|p| p.conjugate_by(&u)).collect()).unwrap();
        assert!(rotated.partition().is_none());
        let rho = random_mixed(4, &mut rng);
        let d = rotated.dephase(&rho).unwrap();
        let dd = rotated.dephase(&d).unwrap();
        assert!(d.matrix().max_abs_diff(dd.matrix()) < 1e-12);
        assert!((d.trace() - 1.0).abs() < 1e-12);
        let blocks: Vec<_> = (0..2).map(|k| rotated.compress(rho.matrix(), k)).collect();
        assert!(rotated.embed(&blocks).unwrap().max_abs_diff(d.matrix()) < 1e-12);
    }

    #[test]
    fn rejects_bad_sets() {
        assert!(ProjectorSet::parse_partition(4, "0|1,2").is_err());
        assert!(ProjectorSet::parse_partition(4, "0,1|1,2,3").is_err());
        assert!(ProjectorSet::parse_partition(4, "0|x").is_err());
        let half = ComplexMatrix::identity(2).scale(0.5);
        assert!(ProjectorSet::new(vec![half.clone(), half]).is_err());
    }

    #[test]
    fn block_unitary_commutes_with_dephasing() {
        let q = ProjectorSet::singlet_triplet();
        let mut rng = rng_from_seed(4);
        let u = q
            .block_diagonal_unitary(&[haar_unitary(1, &mut rng), haar_unitary(3, &mut rng)])
            .unwrap();
        assert!(u.unitarity_defect() < 1e-10);
        assert!(q.dephase_matrix(&u).max_abs_diff(&u) < 1e-15);
        let rho = random_mixed(4, &mut rng);
        let lhs = q.dephase(&rho.evolve(&u).unwrap()).unwrap();
        let rhs = q.dephase(&rho).unwrap().evolve(&u).unwrap();
        assert!(lhs.matrix().max_abs_diff(rhs.matrix()) < 1e-9);
        let bad = ComplexMatrix::from_real_diagonal(&[2.0]);
        assert!(q
            .block_diagonal_unitary(&[bad, ComplexMatrix::identity(3)])
            .is_err());
    }

    #[test]
    fn tensor_and_direct_sum_sets() {
        let q = ProjectorSet::parse_partition(2, "0|1").unwrap();
        let t = q.tensor(&q).unwrap();
        assert_eq!(t.len(), 4);
        assert_eq!(t.dim(), 4);
        let s = q.direct_sum(&q).unwrap();
        assert_eq!(s.ranks(), vec![1, 1, 1, 1]);
    }
}
