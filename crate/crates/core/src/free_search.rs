//! Optimization over block-incoherent states.
//!
//! A free state is parameterized by one lower-triangular complex factor per
//! block, `σ = (⊕_k L_k L_k^†) / Σ_k Tr(L_k L_k^†)`, so every parameter vector
//! maps to a valid block-diagonal density matrix. The same factors without
//! the normalization parameterize the block-diagonal PSD cone.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::block::ProjectorSet;
use crate::error::{Error, Result};
use crate::exec::{map_range, Execution};
use crate::matrix::{c64, ComplexMatrix, C64};
use crate::nelder_mead::{minimize, SimplexOptions};
use crate::state::QuantumState;

/// Regularization added to each block before factoring a warm start.
pub const WARM_START_RIDGE: f64 = 1e-12;
/// Simplex diameter below which a restart counts as converged.
pub const CONVERGED_DIAMETER: f64 = 1e-8;

/// Search effort for optimizer-backed measures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerBudget {
    pub restarts: usize,
    pub max_iter: usize,
    pub tolerance: f64,
    pub seed: u64,
    #[serde(skip)]
    pub execution: Execution,
}

impl Default for OptimizerBudget {
    fn default() -> Self {
        Self {
            restarts: 16,
            max_iter: 2000,
            tolerance: 1e-10,
            seed: 0,
            execution: Execution::default(),
        }
    }
}

impl OptimizerBudget {
    pub fn new(restarts: usize, max_iter: usize, tolerance: f64, seed: u64) -> Result<Self> {
        let budget = Self {
            restarts,
            max_iter,
            tolerance,
            seed,
            execution: Execution::default(),
        };
        budget.validate()?;
        Ok(budget)
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.max_iter == 0 || !(self.tolerance > 0.0) {
            return Err(Error::InvalidParameter(
                "optimizer budget needs positive restarts, iterations and tolerance".into(),
            ));
        }
        Ok(())
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_execution(mut self, execution: Execution) -> Self {
        self.execution = execution;
        self
    }

    /// Cheaper budget for bulk property checks: the warm start plus one
    /// random restart.
    pub fn light() -> Self {
        Self {
            restarts: 2,
            ..Self::default()
        }
    }
}

/// Per-block lower-triangular factors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FreeStateParam {
    factors: Vec<ComplexMatrix>,
}

impl FreeStateParam {
    pub fn factors(&self) -> &[ComplexMatrix] {
        &self.factors
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.factors.iter().map(ComplexMatrix::dim).collect()
    }

    /// Number of real parameters: `Σ_k r_k²`.
    pub fn len(&self) -> usize {
        self.factors.iter().map(|f| f.dim() * f.dim()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn from_vector(ranks: &[usize], x: &[f64]) -> Self {
        let mut it = x.iter().copied();
        let factors = ranks
            .iter()
            .map(|&r| {
                let mut l = ComplexMatrix::zeros(r);
                for i in 0..r {
                    for j in 0..i {
                        let re = it.next().expect("parameter vector too short");
                        let im = it.next().expect("parameter vector too short");
                        l[(i, j)] = c64(re, im);
                    }
                    l[(i, i)] = c64(it.next().expect("parameter vector too short"), 0.0);
                }
                l
            })
            .collect();
        Self { factors }
    }

    pub fn to_vector(&self) -> Vec<f64> {
        let mut x = Vec::with_capacity(self.len());
        for l in &self.factors {
            for i in 0..l.dim() {
                for j in 0..i {
                    x.push(l[(i, j)].re);
                    x.push(l[(i, j)].im);
                }
                x.push(l[(i, i)].re);
            }
        }
        x
    }

    /// Blocks `L_k L_k^†`, optionally scaled to unit total trace.
    pub fn blocks(&self, normalize: bool) -> Vec<ComplexMatrix> {
        let raw: Vec<ComplexMatrix> = self
            .factors
            .iter()
            .map(|l| (l * &l.adjoint()).hermitian_part())
            .collect();
        if !normalize {
            return raw;
        }
        let total: f64 = raw.iter().map(|b| b.trace().re).sum();
        raw.iter().map(|b| b.scale(1.0 / total)).collect()
    }

    /// The normalized free state.
    pub fn reconstruct(&self, p: &ProjectorSet) -> Result<QuantumState> {
        let m = p.embed(&self.blocks(true))?;
        Ok(QuantumState::trusted(m, true))
    }

    fn random<R: Rng + ?Sized>(ranks: &[usize], rng: &mut R) -> Self {
        let mut factors: Vec<ComplexMatrix> = ranks
            .iter()
            .map(|&r| {
                let mut l = ComplexMatrix::zeros(r);
                for i in 0..r {
                    for j in 0..i {
                        l[(i, j)] = c64(rng.sample(StandardNormal), rng.sample(StandardNormal));
                    }
                    let d: f64 = rng.sample(StandardNormal);
                    l[(i, i)] = c64(d.abs(), 0.0);
                }
                l
            })
            .collect();
        let total: f64 = factors.iter().map(|l| l.frobenius_norm().powi(2)).sum();
        let s = 1.0 / total.sqrt();
        for l in &mut factors {
            *l = l.scale(s);
        }
        Self { factors }
    }
}

/// Factors reproducing `Δ(ρ)` (each block regularized by `1e-12·I`).
pub fn warm_start(rho: &QuantumState, p: &ProjectorSet) -> Result<FreeStateParam> {
    if rho.dim() != p.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: rho.dim(),
        });
    }
    Ok(factor_blocks(rho.matrix(), p))
}

fn factor_blocks(m: &ComplexMatrix, p: &ProjectorSet) -> FreeStateParam {
    let factors = (0..p.len())
        .map(|k| {
            let b = p.compress(m, k);
            let ridge = ComplexMatrix::identity(b.dim()).scale(WARM_START_RIDGE);
            cholesky(&(&b + &ridge))
        })
        .collect();
    FreeStateParam { factors }
}

/// Lower Cholesky factor of a Hermitian positive definite matrix; pivots that
/// round to non-positive values are floored so the factor stays finite.
fn cholesky(a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.dim();
    let mut l = ComplexMatrix::zeros(n);
    for j in 0..n {
        let mut d = a[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        let d = d.max(WARM_START_RIDGE).sqrt();
        l[(j, j)] = c64(d, 0.0);
        for i in (j + 1)..n {
            let mut s: C64 = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / d;
        }
    }
    l
}

/// Point handed to search objectives: per-block matrices (in each block's own
/// basis) and the assembled block-diagonal operator.
#[derive(Debug, Clone)]
pub struct BlockPoint {
    pub blocks: Vec<ComplexMatrix>,
    pub matrix: ComplexMatrix,
}

/// Outcome of a multi-restart search.
#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub value: f64,
    pub point: BlockPoint,
    pub converged: bool,
    /// Index of the winning restart (0 is the warm start).
    pub restart: usize,
    pub evaluations: usize,
}

/// Result of [`maximize_over_free_states`].
#[derive(Debug, Clone)]
pub struct FreeMaximum {
    pub value: f64,
    pub argmax: QuantumState,
    pub converged: bool,
    pub evaluations: usize,
}

/// Maximizes `objective` over normalized block-incoherent states.
///
/// Restart 0 starts from `Δ(warm)` (or the maximally mixed state), the rest
/// from random factors. The value is a lower bound on the true maximum.
pub fn maximize_over_free_states<F>(
    objective: F,
    p: &ProjectorSet,
    budget: &OptimizerBudget,
    warm: Option<&QuantumState>,
) -> Result<FreeMaximum>
where
    F: Fn(&BlockPoint) -> f64 + Sync,
{
    let out = search_free(objective, p, budget, warm, None)?;
    Ok(FreeMaximum {
        value: out.value,
        argmax: QuantumState::trusted(out.point.matrix, true),
        converged: out.converged,
        evaluations: out.evaluations,
    })
}

/// Maximization over free states, stopping after the warm start when it
/// already reaches `ceiling` (a known upper bound of the objective).
pub(crate) fn search_free<F>(
    objective: F,
    p: &ProjectorSet,
    budget: &OptimizerBudget,
    warm: Option<&QuantumState>,
    ceiling: Option<f64>,
) -> Result<SearchOutcome>
where
    F: Fn(&BlockPoint) -> f64 + Sync,
{
    let start = match warm {
        Some(rho) => warm_start(rho, p)?,
        None => warm_start(&QuantumState::maximally_mixed(p.dim()), p)?,
    };
    let mut out = run_search(
        |x: &BlockPoint| -objective(x),
        p,
        budget,
        start,
        true,
        ceiling.map(|c| -c),
    )?;
    out.value = -out.value;
    Ok(out)
}

/// Minimizes `objective` over the block-diagonal PSD cone (unnormalized),
/// starting from the block factors of `warm`. The value is an upper bound on
/// the true minimum.
pub fn minimize_over_block_cone<F>(
    objective: F,
    p: &ProjectorSet,
    budget: &OptimizerBudget,
    warm: &ComplexMatrix,
    floor: Option<f64>,
) -> Result<SearchOutcome>
where
    F: Fn(&BlockPoint) -> f64 + Sync,
{
    if warm.dim() != p.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: warm.dim(),
        });
    }
    run_search(objective, p, budget, factor_blocks(warm, p), false, floor)
}

struct RestartResult {
    x: Vec<f64>,
    fx: f64,
    diameter: f64,
    evaluations: usize,
}

fn run_search<F>(
    objective: F,
    p: &ProjectorSet,
    budget: &OptimizerBudget,
    warm: FreeStateParam,
    normalize: bool,
    stop_below: Option<f64>,
) -> Result<SearchOutcome>
where
    F: Fn(&BlockPoint) -> f64 + Sync,
{
    budget.validate()?;
    let ranks = p.ranks();
    let point = |x: &[f64]| -> Result<BlockPoint> {
        let blocks = FreeStateParam::from_vector(&ranks, x).blocks(normalize);
        let matrix = p.embed(&blocks)?;
        Ok(BlockPoint { blocks, matrix })
    };
    let f = |x: &[f64]| match point(x) {
        Ok(pt) if pt.blocks.iter().all(ComplexMatrix::is_finite) => objective(&pt),
        _ => f64::INFINITY,
    };
    let opts = SimplexOptions {
        max_iter: budget.max_iter,
        f_tol: budget.tolerance,
        x_tol: CONVERGED_DIAMETER,
        ..SimplexOptions::default()
    };
    let run = |x0: Vec<f64>| -> RestartResult {
        let first = minimize(f, &x0, &opts);
        let polish = minimize(f, &first.x, &opts);
        let best = if polish.fx <= first.fx { polish.x } else { first.x };
        RestartResult {
            fx: first.fx.min(polish.fx),
            x: best,
            diameter: polish.diameter,
            evaluations: first.evaluations + polish.evaluations,
        }
    };

    let warm_result = run(warm.to_vector());
    let mut results = vec![warm_result];
    let done = matches!(stop_below, Some(t) if results[0].fx <= t);
    if !done && budget.restarts > 1 {
        let rest = map_range(budget.restarts - 1, budget.execution, |k| {
            let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
            rng.set_stream(k as u64 + 1);
            run(FreeStateParam::random(&ranks, &mut rng).to_vector())
        });
        results.extend(rest);
    }

    let evaluations = results.iter().map(|r| r.evaluations).sum();
    let (restart, best) = results
        .iter()
        .enumerate()
        .fold(None::<(usize, &RestartResult)>, |acc, (i, r)| match acc {
            Some((_, b)) if b.fx <= r.fx => acc,
            _ => Some((i, r)),
        })
        .expect("at least one restart");
    if !best.fx.is_finite() {
        return Err(Error::OptimizationFailed(
            "objective was non-finite at every probe".into(),
        ));
    }
    Ok(SearchOutcome {
        value: best.fx,
        point: point(&best.x)?,
        converged: best.diameter < CONVERGED_DIAMETER,
        restart,
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::st::{balanced, S, T_ZERO};
    use crate::state::{fidelity_psd, random_mixed, rng_from_seed};

    fn small_budget() -> OptimizerBudget {
        OptimizerBudget {
            restarts: 3,
            max_iter: 1500,
            ..OptimizerBudget::default()
        }
    }

    #[test]
    fn parameter_round_trip() {
        let mut rng = rng_from_seed(1);
        let param = FreeStateParam::random(&[1, 3], &mut rng);
        assert_eq!(param.len(), 10);
        let back = FreeStateParam::from_vector(&[1, 3], &param.to_vector());
        assert_eq!(param, back);
    }

    #[test]
    fn warm_start_reproduces_dephased_state() {
        let q = ProjectorSet::singlet_triplet();
        let mut rng = rng_from_seed(2);
        let rho = random_mixed(4, &mut rng);
        let sigma = warm_start(&rho, &q).unwrap().reconstruct(&q).unwrap();
        let d = q.dephase(&rho).unwrap();
        assert!(sigma.matrix().max_abs_diff(d.matrix()) < 1e-9);
        assert!(q.is_block_incoherent(&sigma, 1e-10).unwrap());

        let singlet = crate::st::singlet();
        let w = warm_start(&singlet, &q).unwrap();
        assert!((w.factors()[0][(0, 0)].re - 1.0).abs() < 1e-9);
        assert!(w.factors()[1].max_abs() < 1e-5);
    }

    #[test]
    fn linear_objective_reaches_top_eigenvalue() {
        let q = ProjectorSet::singlet_triplet();
        let mut rng = rng_from_seed(3);
        let rho = q.dephase(&random_mixed(4, &mut rng)).unwrap();
        let top = rho.spectrum()[0];
        let m = rho.matrix().clone();
        let res = maximize_over_free_states(
            |pt| pt.matrix.trace_of_product(&m).re,
            &q,
            &small_budget(),
            Some(&rho),
        )
        .unwrap();
        assert!((res.value - top).abs() < 1e-6, "{} vs {}", res.value, top);
        assert!(q.is_block_incoherent(&res.argmax, 1e-8).unwrap());
    }

    #[test]
    fn fidelity_of_balanced_superposition() {
        let q = ProjectorSet::singlet_triplet();
        let rho = balanced(S, T_ZERO).density();
        let m = rho.matrix().clone();
        let res = maximize_over_free_states(
            |pt| fidelity_psd(&m, &pt.matrix).powi(2),
            &q,
            &small_budget(),
            Some(&rho),
        )
        .unwrap();
        assert!((res.value - 0.5).abs() < 1e-6);
    }

    #[test]
    fn restarts_are_deterministic_across_schedules() {
        let q = ProjectorSet::singlet_triplet();
        let mut rng = rng_from_seed(4);
        let rho = random_mixed(4, &mut rng);
        let m = rho.matrix().clone();
        let obj = |pt: &BlockPoint| fidelity_psd(&m, &pt.matrix);
        let seq = small_budget().with_execution(Execution::Sequential);
        let par = small_budget().with_execution(Execution::Parallel);
        let a = maximize_over_free_states(obj, &q, &seq, Some(&rho)).unwrap();
        let b = maximize_over_free_states(obj, &q, &par, Some(&rho)).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        let warm = obj(&BlockPoint {
            blocks: vec![],
            matrix: q.dephase(&rho).unwrap().into_matrix(),
        });
        assert!(a.value >= warm - 1e-12);
    }

    #[test]
    fn all_non_finite_is_an_error() {
        let q = ProjectorSet::singlet_triplet();
        let budget = OptimizerBudget {
            restarts: 2,
            max_iter: 20,
            ..Default::default()
        };
        let res = maximize_over_free_states(|_| f64::NAN, &q, &budget, None);
        assert!(matches!(res, Err(Error::OptimizationFailed(_))));
    }
}
