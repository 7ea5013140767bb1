//! Block-coherence measures.
//!
//! Closed forms are evaluated directly from spectral functions. Measures
//! defined through an optimization over free states report the direction of
//! their numerical bound: an under-approximated inner maximum, or an outer
//! minimum that stops early, both give an upper bound on the true value.

use std::fmt;
use std::str::FromStr;

use log::{debug, warn};
use serde::{Deserialize, Serialize};

use crate::block::ProjectorSet;
use crate::error::{Error, Result};
use crate::free_search::{
    minimize_over_block_cone, search_free, BlockPoint, OptimizerBudget, SearchOutcome,
};
use crate::matrix::{
    eigh_unchecked, eigvalsh, power_of_spectrum, psd_power, psd_trace_power, spectrum_entropy,
    trace_norm, zero_floor, ComplexMatrix, LogBase, C64, HERMITIAN_TOL,
};
use crate::state::{haar_unitary, rng_from_seed, PureState, QuantumState};

/// Reported values below this are treated as negative and flagged.
pub const NEGATIVE_TOL: f64 = 1e-8;
/// Full-rank regularization weight for the operator geometric mean.
pub const GEOMETRIC_MEAN_EPS: f64 = 1e-10;
/// Largest allowed violation of `B ⪰ ρ` before repair in the robustness solve.
pub const PENALTY_FEASIBILITY_TOL: f64 = 1e-7;

const PENALTY_ROUNDS: usize = 6;
const PENALTY_START: f64 = 1000.0;

/// Parameters shared by the measure families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureParams {
    pub alpha: f64,
    pub z: f64,
    pub beta: f64,
    pub budget: OptimizerBudget,
}

impl Default for MeasureParams {
    fn default() -> Self {
        Self {
            alpha: 0.5,
            z: 1.0,
            beta: 0.5,
            budget: OptimizerBudget::default(),
        }
    }
}

impl MeasureParams {
    pub fn new(alpha: f64, z: f64, beta: f64, budget: OptimizerBudget) -> Result<Self> {
        let p = Self {
            alpha,
            z,
            beta,
            budget,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        check_unit_interval("alpha", self.alpha)?;
        check_unit_interval("beta", self.beta)?;
        check_z(self.alpha, self.z)?;
        self.budget.validate()
    }
}

fn check_unit_interval(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} = {v} must lie in (0, 1)"
        )))
    }
}

fn check_z(alpha: f64, z: f64) -> Result<()> {
    let lo = alpha.max(1.0 - alpha);
    if z.is_finite() && z >= lo {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "z = {z} must be at least max(alpha, 1 - alpha) = {lo}"
        )))
    }
}

/// How a value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ClosedForm,
    Optimizer,
    PenaltySdp,
    Estimator,
}

/// Relation between the reported value and the true value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Bound {
    Exact,
    Upper,
    Lower,
}

/// Value of a measure together with its provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureReport {
    pub measure: String,
    /// Reported value, clipped at zero.
    pub value: f64,
    /// Value before clipping.
    pub raw_value: f64,
    pub method: Method,
    pub bound: Bound,
    pub converged: bool,
    /// Optimal free state, feasible point or closed-form maximizer.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<ComplexMatrix>,
}

impl MeasureReport {
    fn new(measure: impl Into<String>, raw: f64, method: Method, bound: Bound) -> Self {
        let measure = measure.into();
        if raw < -NEGATIVE_TOL {
            warn!("{measure} evaluated to {raw:.3e}, below zero");
        }
        Self {
            measure,
            value: raw.max(0.0),
            raw_value: raw,
            method,
            bound,
            converged: true,
            witness: None,
        }
    }

    fn exact(measure: impl Into<String>, raw: f64) -> Self {
        Self::new(measure, raw, Method::ClosedForm, Bound::Exact)
    }

    fn with_witness(mut self, w: ComplexMatrix) -> Self {
        self.witness = Some(w);
        self
    }

    fn with_converged(mut self, c: bool) -> Self {
        self.converged = c;
        self
    }
}

fn check_dims(rho: &QuantumState, p: &ProjectorSet) -> Result<()> {
    if rho.dim() != p.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: rho.dim(),
        });
    }
    Ok(())
}

/// Pure-state maximum `1 - 2^{1 - 1/α}` of `C_{α,1}` for two blocks.
pub fn alpha_1_ceiling(alpha: f64) -> f64 {
    1.0 - 2f64.powf(1.0 - 1.0 / alpha)
}

/// `Σ_k Tr[(P_k ρ^α P_k)^{1/α}]` and the per-block powers.
fn alpha_1_overlap(rho: &QuantumState, p: &ProjectorSet, alpha: f64) -> (f64, Vec<ComplexMatrix>) {
    let ra = psd_power(rho.matrix(), alpha);
    let blocks: Vec<ComplexMatrix> = (0..p.len())
        .map(|k| psd_power(&p.compress(&ra, k), 1.0 / alpha))
        .collect();
    let total = blocks.iter().map(|b| b.trace().re).sum();
    (total, blocks)
}

/// `C_{α,1} = 1 - Σ_k Tr[(P_k ρ^α P_k)^{1/α}]`.
pub fn c_alpha_1(rho: &QuantumState, p: &ProjectorSet, alpha: f64) -> Result<MeasureReport> {
    check_unit_interval("alpha", alpha)?;
    check_dims(rho, p)?;
    let (overlap, blocks) = alpha_1_overlap(rho, p, alpha);
    let mut report = MeasureReport::exact(format!("c_alpha_1(alpha={alpha})"), 1.0 - overlap);
    if overlap > 0.0 {
        let scaled: Vec<_> = blocks.iter().map(|b| b.scale(1.0 / overlap)).collect();
        report = report.with_witness(p.embed(&scaled)?);
    }
    Ok(report)
}

/// `C_{α,1}` as a plain number.
pub fn c_alpha_1_value(rho: &QuantumState, p: &ProjectorSet, alpha: f64) -> Result<f64> {
    check_unit_interval("alpha", alpha)?;
    check_dims(rho, p)?;
    Ok(1.0 - alpha_1_overlap(rho, p, alpha).0)
}

/// Tsallis measure `C^T_α = C_{α,1} / (1 - α)`.
pub fn c_tsallis_t(rho: &QuantumState, p: &ProjectorSet, alpha: f64) -> Result<MeasureReport> {
    let base = c_alpha_1(rho, p, alpha)?;
    let mut report = MeasureReport::exact(
        format!("c_tsallis_t(alpha={alpha})"),
        base.raw_value / (1.0 - alpha),
    );
    report.witness = base.witness;
    Ok(report)
}

/// `Tr[(σ^{(1-α)/2z} R σ^{(1-α)/2z})^z]` with `R = ρ^{α/z}`.
fn alpha_z_overlap(point: &BlockPoint, p: &ProjectorSet, r: &ComplexMatrix, a: f64, z: f64) -> f64 {
    let powered: Vec<ComplexMatrix> = point.blocks.iter().map(|b| psd_power(b, a)).collect();
    let s = match p.embed(&powered) {
        Ok(s) => s,
        Err(_) => return f64::NAN,
    };
    let x = &(&s * r) * &s;
    psd_trace_power(&x, z)
}

/// `C_{α,z} = 1 - max_σ {Tr[(σ^{(1-α)/2z} ρ^{α/z} σ^{(1-α)/2z})^z]}^{1/α}`,
/// reported as an upper bound.
pub fn c_alpha_z(rho: &QuantumState, p: &ProjectorSet, params: &MeasureParams) -> Result<MeasureReport> {
    check_unit_interval("alpha", params.alpha)?;
    check_z(params.alpha, params.z)?;
    check_dims(rho, p)?;
    let (alpha, z) = (params.alpha, params.z);
    let r = psd_power(rho.matrix(), alpha / z);
    let a = (1.0 - alpha) / (2.0 * z);
    let out = search_free(
        |pt| alpha_z_overlap(pt, p, &r, a, z),
        p,
        &params.budget,
        Some(rho),
        Some(1.0 - 1e-13),
    )?;
    let raw = 1.0 - out.value.max(0.0).powf(1.0 / alpha);
    debug!("c_alpha_z: restart {} won, {} evaluations", out.restart, out.evaluations);
    Ok(optimizer_report(
        format!("c_alpha_z(alpha={alpha},z={z})"),
        raw,
        Method::Optimizer,
        out,
    ))
}

fn optimizer_report(name: String, raw: f64, method: Method, out: SearchOutcome) -> MeasureReport {
    MeasureReport::new(name, raw, method, Bound::Upper)
        .with_converged(out.converged)
        .with_witness(out.point.matrix)
}

/// Geometric measure `1 - max_σ F²(ρ, σ)`, i.e. `C_{1/2,1/2}`.
pub fn c_geo(rho: &QuantumState, p: &ProjectorSet, budget: &OptimizerBudget) -> Result<MeasureReport> {
    let params = MeasureParams {
        alpha: 0.5,
        z: 0.5,
        beta: 0.5,
        budget: *budget,
    };
    let mut report = c_alpha_z(rho, p, &params)?;
    report.measure = "c_geo".into();
    Ok(report)
}

/// Wigner-Yanase skew information `I_WY(ρ, A) = Tr(ρA²) - Tr(√ρ A √ρ A)`.
pub fn skew_information(rho: &QuantumState, a: &ComplexMatrix) -> Result<f64> {
    rho.matrix().check_same_dim(a)?;
    check_observable(a)?;
    let sr = psd_power(rho.matrix(), 0.5);
    let a2 = a * a;
    let first = rho.matrix().trace_of_product(&a2).re;
    let second = (&(&sr * a) * &sr).trace_of_product(a).re;
    Ok(first - second)
}

fn check_observable(a: &ComplexMatrix) -> Result<()> {
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let d = a.hermiticity_defect();
    if d > HERMITIAN_TOL * a.max_abs().max(1.0) {
        return Err(Error::NotHermitian { deviation: d });
    }
    Ok(())
}

/// `C_WY = Σ_k I_WY(ρ, P_k)`.
pub fn c_wy(rho: &QuantumState, p: &ProjectorSet) -> Result<MeasureReport> {
    check_dims(rho, p)?;
    let total = p
        .projectors()
        .iter()
        .map(|pk| skew_information(rho, pk))
        .sum::<Result<f64>>()?;
    Ok(MeasureReport::exact("c_wy", total))
}

/// `Var(ρ, A) = Tr(ρA²) - Tr(ρA)²`.
pub fn variance_op(rho: &QuantumState, a: &ComplexMatrix) -> Result<f64> {
    rho.matrix().check_same_dim(a)?;
    check_observable(a)?;
    let m = rho.matrix();
    let mean = m.trace_of_product(a).re;
    Ok(m.trace_of_product(&(a * a)).re - mean * mean)
}

/// Tsallis relative operator entropy measure
/// `C^N_β = (1 - max_σ [Tr(ρ ♯_{1-β} σ)]^{1/β}) / (1 - β)`, evaluated on the
/// full-rank regularization `(1-ε)ρ + ε I/d`; reported as an upper bound.
pub fn c_tsallis_n(
    rho: &QuantumState,
    p: &ProjectorSet,
    beta: f64,
    budget: &OptimizerBudget,
) -> Result<MeasureReport> {
    check_unit_interval("beta", beta)?;
    check_dims(rho, p)?;
    let d = rho.dim() as f64;
    let reg = &rho.matrix().scale(1.0 - GEOMETRIC_MEAN_EPS)
        + &ComplexMatrix::identity(rho.dim()).scale(GEOMETRIC_MEAN_EPS / d);
    let eig = eigh_unchecked(&reg);
    if eig.values.last().copied().unwrap_or(0.0) <= 0.0 {
        return Err(Error::OptimizationFailed(
            "regularized state is singular".into(),
        ));
    }
    let inv_sqrt = eig.map(|l| l.powf(-0.5));
    let reg_state = QuantumState::trusted(reg.clone(), true);
    let objective = |pt: &BlockPoint| geometric_mean_trace(&reg, &inv_sqrt, &pt.matrix, 1.0 - beta);
    let out = search_free(objective, p, budget, Some(&reg_state), Some(1.0 - 1e-13))?;
    let raw = (1.0 - out.value.max(0.0).powf(1.0 / beta)) / (1.0 - beta);
    Ok(optimizer_report(
        format!("c_tsallis_n(beta={beta})"),
        raw,
        Method::Optimizer,
        out,
    ))
}

/// `Tr(A ♯_t B) = Tr(A (A^{-1/2} B A^{-1/2})^t)`.
fn geometric_mean_trace(a: &ComplexMatrix, a_inv_sqrt: &ComplexMatrix, b: &ComplexMatrix, t: f64) -> f64 {
    let m = &(a_inv_sqrt * b) * a_inv_sqrt;
    let eig = eigh_unchecked(&m);
    let floor = zero_floor(&eig.values);
    eig.values
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > floor)
        .map(|(k, &l)| l.powf(t) * a.expectation(&eig.vector(k)).re)
        .sum()
}

/// `C_Tr = min_{B ⪰ 0 block diagonal} ||ρ - B||_Tr`, reported as an upper
/// bound. The cone `{λσ}` is searched directly, so `λ = Tr B` is free.
pub fn c_trace(rho: &QuantumState, p: &ProjectorSet, budget: &OptimizerBudget) -> Result<MeasureReport> {
    check_dims(rho, p)?;
    let m = rho.matrix();
    let warm = p.dephase_matrix(m);
    let baseline = trace_norm(&(m - &warm));
    let out = minimize_over_block_cone(
        |pt| trace_norm(&(m - &pt.matrix)),
        p,
        budget,
        &warm,
        Some(1e-13),
    )?;
    let raw = out.value.min(baseline);
    Ok(optimizer_report("c_trace".into(), raw, Method::Optimizer, out))
}

/// Smallest eigenvalue of a Hermitian matrix.
fn lambda_min(m: &ComplexMatrix) -> f64 {
    eigvalsh(m).last().copied().unwrap_or(0.0)
}

/// Robustness `min {Tr B - 1 : B ⪰ ρ, B block diagonal}` by a quadratic
/// penalty on the negative spectrum of `B - ρ`, followed by an `|λ_min| I`
/// shift that makes the final point feasible. The value is an upper bound.
pub fn c_rob(rho: &QuantumState, p: &ProjectorSet, budget: &OptimizerBudget) -> Result<MeasureReport> {
    check_dims(rho, p)?;
    let m = rho.matrix();
    let dim = rho.dim();
    let shift_to_feasible = |b: &ComplexMatrix| -> ComplexMatrix {
        let gap = lambda_min(&(b - m));
        if gap < 0.0 {
            b + &ComplexMatrix::identity(dim).scale(-gap)
        } else {
            b.clone()
        }
    };
    let single = OptimizerBudget {
        restarts: 1,
        ..*budget
    };
    let start = shift_to_feasible(&p.dephase_matrix(m));
    let mut point = start.clone();
    let mut converged = true;
    let mut mu = PENALTY_START;
    for round in 0..PENALTY_ROUNDS {
        let objective = |pt: &BlockPoint| {
            let neg: f64 = eigvalsh(&(&pt.matrix - m))
                .iter()
                .filter(|&&l| l < 0.0)
                .map(|l| l * l)
                .sum();
            pt.matrix.trace().re + mu * neg
        };
        // later rounds continue from the previous optimum only
        let round_budget = if round == 0 { *budget } else { single };
        let out = minimize_over_block_cone(objective, p, &round_budget, &point, None)?;
        converged &= out.converged;
        point = out.point.matrix;
        mu *= 10.0;
    }
    let violation = lambda_min(&(&point - m));
    if violation < -PENALTY_FEASIBILITY_TOL {
        return Err(Error::PenaltyNotConverged {
            min_eigenvalue: violation,
        });
    }
    let mut feasible = shift_to_feasible(&point);
    if start.trace().re <= feasible.trace().re {
        feasible = start;
    }
    let raw = feasible.trace().re - 1.0;
    Ok(MeasureReport::new("c_rob", raw, Method::PenaltySdp, Bound::Upper)
        .with_converged(converged)
        .with_witness(feasible))
}

/// Witness lower bound `Tr ρ² - Tr(ρ Δ(ρ)) = -Tr(ρ W_ρ)` on the robustness.
pub fn c_rob_lower(rho: &QuantumState, p: &ProjectorSet) -> Result<f64> {
    check_dims(rho, p)?;
    let m = rho.matrix();
    let d = p.dephase_matrix(m);
    Ok(m.trace_of_product(m).re - m.trace_of_product(&d).re)
}

/// Spectrum of `σ^{-1/2} ρ σ^{-1/2}` on the support of σ.
fn sandwiched_spectrum(rho: &ComplexMatrix, point: &BlockPoint, p: &ProjectorSet) -> Option<Vec<f64>> {
    let ridge = 1e-12;
    let inv: Vec<ComplexMatrix> = point
        .blocks
        .iter()
        .map(|b| {
            let reg = b + &ComplexMatrix::identity(b.dim()).scale(ridge);
            power_of_spectrum(&eigh_unchecked(&reg), -0.5)
        })
        .collect();
    let s = p.embed(&inv).ok()?;
    Some(eigvalsh(&(&(&s * rho) * &s)))
}

/// `log2` of the Schatten `q`-norm of a PSD spectrum, or of its largest
/// element when `q` is `None`.
fn log2_norm(values: &[f64], q: Option<f64>) -> f64 {
    let top = values[0];
    match q {
        None => top.log2(),
        Some(q) => {
            let s: f64 = values.iter().map(|&l| (l.max(0.0) / top).powf(q)).sum();
            top.log2() + s.log2() / q
        }
    }
}

/// Smoothing exponents used before the exact `λ_max` stage of `C_max`.
const MAX_ENTROPY_SMOOTHING: [f64; 6] = [16.0, 64.0, 256.0, 1024.0, 4096.0, 16384.0];

/// `C_max = min_σ log2 min{λ : ρ ≤ λσ}`, reported as an upper bound.
///
/// The nonsmooth `λ_max` objective is approached through Schatten-norm
/// smoothings of increasing order; each stage starts from the previous
/// optimum and only the first one uses random restarts.
pub fn c_max(rho: &QuantumState, p: &ProjectorSet, budget: &OptimizerBudget) -> Result<MeasureReport> {
    check_dims(rho, p)?;
    let m = rho.matrix();
    let exact = |pt: &BlockPoint| {
        sandwiched_spectrum(m, pt, p).map_or(f64::NAN, |v| log2_norm(&v, None))
    };
    let single = OptimizerBudget {
        restarts: 1,
        ..*budget
    };
    let mut warm = rho.clone();
    let dephased = p.dephase_matrix(m);
    let start = BlockPoint {
        blocks: (0..p.len()).map(|k| p.compress(&dephased, k)).collect(),
        matrix: dephased,
    };
    let mut best = Some(SearchOutcome {
        value: exact(&start),
        point: start,
        converged: true,
        restart: 0,
        evaluations: 1,
    });
    let stages = MAX_ENTROPY_SMOOTHING.iter().map(|&q| Some(q)).chain([None]);
    for (i, q) in stages.enumerate() {
        let stage_budget = if i == 0 { budget } else { &single };
        // minimize by maximizing the negative
        let mut out = search_free(
            |pt| sandwiched_spectrum(m, pt, p).map_or(f64::NAN, |v| -log2_norm(&v, q)),
            p,
            stage_budget,
            Some(&warm),
            Some(-1e-13),
        )?;
        out.value = exact(&out.point);
        warm = QuantumState::trusted(out.point.matrix.clone(), true);
        if best.as_ref().is_none_or(|b| out.value < b.value || b.value.is_nan()) {
            best = Some(out);
        }
    }
    let out = best.expect("at least one stage");
    let raw = out.value;
    Ok(optimizer_report("c_max".into(), raw, Method::Optimizer, out))
}

/// `C_r = S(Δ(ρ)) - S(ρ)` in the chosen log base.
pub fn c_rel_entropy(rho: &QuantumState, p: &ProjectorSet, base: LogBase) -> Result<MeasureReport> {
    check_dims(rho, p)?;
    let d = p.dephase_matrix(rho.matrix());
    let raw = spectrum_entropy(&eigvalsh(&d), base) - spectrum_entropy(&rho.spectrum(), base);
    let unit = match base {
        LogBase::Bits => "bits",
        LogBase::Nats => "nats",
    };
    Ok(MeasureReport::exact(format!("c_rel_entropy({unit})"), raw))
}

/// `C̃_l1 = Σ_{i≠j} ||P_i ρ P_j||_Tr`.
pub fn c_l1_tilde(rho: &QuantumState, p: &ProjectorSet) -> Result<MeasureReport> {
    check_dims(rho, p)?;
    let mut total = 0.0;
    for i in 0..p.len() {
        for j in 0..p.len() {
            if i != j {
                total += trace_norm(&p.block_product(rho.matrix(), i, j)?);
            }
        }
    }
    Ok(MeasureReport::exact("c_l1_tilde", total))
}

/// Measure selector used by the analysis tools and the command line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Measure {
    Alpha1 { alpha: f64 },
    AlphaZ { alpha: f64, z: f64 },
    Geo,
    Wy,
    TsallisT { alpha: f64 },
    TsallisN { beta: f64 },
    Trace,
    Rob,
    Max,
    RelEntropy { base: LogBase },
    L1Tilde,
}

impl Measure {
    /// Builds a measure from its command-line name and parameters.
    pub fn from_name(name: &str, params: &MeasureParams) -> Result<Self> {
        let m = match name {
            "c_alpha_1" => Measure::Alpha1 {
                alpha: params.alpha,
            },
            "c_alpha_z" => Measure::AlphaZ {
                alpha: params.alpha,
                z: params.z,
            },
            "c_geo" => Measure::Geo,
            "c_wy" => Measure::Wy,
            "c_tsallis_t" | "c_tsallis_T" => Measure::TsallisT {
                alpha: params.alpha,
            },
            "c_tsallis_n" | "c_tsallis_N" => Measure::TsallisN { beta: params.beta },
            "c_trace" => Measure::Trace,
            "c_rob" => Measure::Rob,
            "c_max" => Measure::Max,
            "c_rel_entropy" | "c_r" => Measure::RelEntropy {
                base: LogBase::Bits,
            },
            "c_rel_entropy_nats" => Measure::RelEntropy {
                base: LogBase::Nats,
            },
            "c_l1_tilde" => Measure::L1Tilde,
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown measure {other:?}"
                )))
            }
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Measure::Alpha1 { alpha } | Measure::TsallisT { alpha } => {
                check_unit_interval("alpha", alpha)
            }
            Measure::AlphaZ { alpha, z } => {
                check_unit_interval("alpha", alpha)?;
                check_z(alpha, z)
            }
            Measure::TsallisN { beta } => check_unit_interval("beta", beta),
            _ => Ok(()),
        }
    }

    /// Whether the value is an exact closed form (no optimizer involved).
    pub fn is_closed_form(&self) -> bool {
        matches!(
            self,
            Measure::Alpha1 { .. }
                | Measure::Wy
                | Measure::TsallisT { .. }
                | Measure::RelEntropy { .. }
                | Measure::L1Tilde
        )
    }

    pub fn evaluate(
        &self,
        rho: &QuantumState,
        p: &ProjectorSet,
        budget: &OptimizerBudget,
    ) -> Result<MeasureReport> {
        match *self {
            Measure::Alpha1 { alpha } => c_alpha_1(rho, p, alpha),
            Measure::AlphaZ { alpha, z } => c_alpha_z(
                rho,
                p,
                &MeasureParams {
                    alpha,
                    z,
                    beta: 0.5,
                    budget: *budget,
                },
            ),
            Measure::Geo => c_geo(rho, p, budget),
            Measure::Wy => c_wy(rho, p),
            Measure::TsallisT { alpha } => c_tsallis_t(rho, p, alpha),
            Measure::TsallisN { beta } => c_tsallis_n(rho, p, beta, budget),
            Measure::Trace => c_trace(rho, p, budget),
            Measure::Rob => c_rob(rho, p, budget),
            Measure::Max => c_max(rho, p, budget),
            Measure::RelEntropy { base } => c_rel_entropy(rho, p, base),
            Measure::L1Tilde => c_l1_tilde(rho, p),
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Measure::Alpha1 { alpha } => write!(f, "c_alpha_1(alpha={alpha})"),
            Measure::AlphaZ { alpha, z } => write!(f, "c_alpha_z(alpha={alpha},z={z})"),
            Measure::Geo => write!(f, "c_geo"),
            Measure::Wy => write!(f, "c_wy"),
            Measure::TsallisT { alpha } => write!(f, "c_tsallis_t(alpha={alpha})"),
            Measure::TsallisN { beta } => write!(f, "c_tsallis_n(beta={beta})"),
            Measure::Trace => write!(f, "c_trace"),
            Measure::Rob => write!(f, "c_rob"),
            Measure::Max => write!(f, "c_max"),
            Measure::RelEntropy { base: LogBase::Bits } => write!(f, "c_rel_entropy"),
            Measure::RelEntropy { base: LogBase::Nats } => write!(f, "c_rel_entropy_nats"),
            Measure::L1Tilde => write!(f, "c_l1_tilde"),
        }
    }
}

impl FromStr for Measure {
    type Err = Error;

    /// Parses `name` or `name:param`, e.g. `c_alpha_1:0.3`, `c_alpha_z:0.5:0.8`.
    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split(':');
        let name = parts.next().unwrap_or_default();
        let nums = parts
            .map(|x| {
                x.parse::<f64>()
                    .map_err(|_| Error::InvalidParameter(format!("bad number {x:?} in {s:?}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        let mut params = MeasureParams::default();
        match (name, nums.as_slice()) {
            (_, []) => {}
            ("c_tsallis_n" | "c_tsallis_N", [b]) => params.beta = *b,
            (_, [a]) => params.alpha = *a,
            (_, [a, z]) => {
                params.alpha = *a;
                params.z = *z;
            }
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "too many parameters in {s:?}"
                )))
            }
        }
        Measure::from_name(name, &params)
    }
}

/// A block-coherence measure as a function of state and projector set.
pub trait CoherenceMeasure: Send + Sync {
    fn value(&self, rho: &QuantumState, p: &ProjectorSet) -> Result<f64>;

    fn name(&self) -> String;
}

/// A [`Measure`] bound to an optimizer budget.
#[derive(Debug, Clone, Copy)]
pub struct Configured {
    pub measure: Measure,
    pub budget: OptimizerBudget,
}

impl Configured {
    pub fn new(measure: Measure, budget: OptimizerBudget) -> Self {
        Self { measure, budget }
    }
}

impl CoherenceMeasure for Configured {
    fn value(&self, rho: &QuantumState, p: &ProjectorSet) -> Result<f64> {
        Ok(self.measure.evaluate(rho, p, &self.budget)?.value)
    }

    fn name(&self) -> String {
        self.measure.to_string()
    }
}

/// `σ ↦ Σ_j q_j C_j(σ)`.
pub struct ConvexCombination {
    terms: Vec<(f64, Box<dyn CoherenceMeasure>)>,
}

impl ConvexCombination {
    pub fn new(measures: Vec<Box<dyn CoherenceMeasure>>, weights: Vec<f64>) -> Result<Self> {
        if measures.len() != weights.len() || measures.is_empty() {
            return Err(Error::InvalidParameter(format!(
                "{} measures but {} weights",
                measures.len(),
                weights.len()
            )));
        }
        if weights.iter().any(|&w| !(w >= 0.0)) {
            return Err(Error::InvalidParameter("weights must be non-negative".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "weights sum to {total}, not 1"
            )));
        }
        Ok(Self {
            terms: weights.into_iter().zip(measures).collect(),
        })
    }
}

impl CoherenceMeasure for ConvexCombination {
    fn value(&self, rho: &QuantumState, p: &ProjectorSet) -> Result<f64> {
        self.terms
            .iter()
            .filter(|(w, _)| *w > 0.0)
            .map(|(w, m)| m.value(rho, p).map(|v| w * v))
            .sum()
    }

    fn name(&self) -> String {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, m)| format!("{w}*{}", m.name()))
            .collect();
        parts.join(" + ")
    }
}

/// Upper-bound estimate of a convex roof.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoofEstimate {
    pub value: f64,
    pub bound: Bound,
    /// Number of decompositions compared (including the trivial one).
    pub decompositions: usize,
}

/// Convex-roof upper bound `min Σ_j q_j C(ψ_j)` over sampled pure-state
/// decompositions: the trivial one, the eigendecomposition, and `samples`
/// random unitary remixings of it.
pub fn convex_roof_ub(
    measure: &dyn CoherenceMeasure,
    rho: &QuantumState,
    p: &ProjectorSet,
    samples: usize,
    seed: u64,
) -> Result<RoofEstimate> {
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be at least 1".into()));
    }
    check_dims(rho, p)?;
    let eig = eigh_unchecked(rho.matrix());
    let floor = zero_floor(&eig.values);
    let support: Vec<(f64, Vec<C64>)> = eig
        .values
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > floor)
        .map(|(k, &l)| (l, eig.vector(k)))
        .collect();

    let mut best = measure.value(rho, p)?;
    let mut count = 1;
    let pure_sum = |vectors: &[Vec<C64>]| -> Result<f64> {
        let mut total = 0.0;
        for v in vectors {
            let q: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            if q <= 1e-15 {
                continue;
            }
            let psi = PureState::normalize(v.clone())?;
            total += q * measure.value(&psi.density(), p)?;
        }
        Ok(total)
    };

    let scaled: Vec<Vec<C64>> = support
        .iter()
        .map(|(l, v)| v.iter().map(|z| z * l.sqrt()).collect())
        .collect();
    best = best.min(pure_sum(&scaled)?);
    count += 1;

    let rank = scaled.len();
    let mut rng = rng_from_seed(seed);
    for s in 0..samples {
        let m = if s % 2 == 0 { rank } else { rank.max(rho.dim()) };
        let u = haar_unitary(m, &mut rng);
        let mixed: Vec<Vec<C64>> = (0..m)
            .map(|j| {
                let mut v = vec![C64::new(0.0, 0.0); rho.dim()];
                for (i, w) in scaled.iter().enumerate() {
                    let c = u[(j, i)];
                    for (x, y) in v.iter_mut().zip(w) {
                        *x += c * y;
                    }
                }
                v
            })
            .collect();
        best = best.min(pure_sum(&mixed)?);
        count += 1;
    }
    Ok(RoofEstimate {
        value: best,
        bound: Bound::Upper,
        decompositions: count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::st::{balanced, singlet, S, T_ZERO};
    use crate::state::{random_mixed, random_pure};

    fn st() -> ProjectorSet {
        ProjectorSet::singlet_triplet()
    }

    fn budget() -> OptimizerBudget {
        OptimizerBudget {
            restarts: 4,
            max_iter: 1500,
            ..OptimizerBudget::default()
        }
    }

    #[test]
    fn params_validation() {
        let b = OptimizerBudget::default();
        assert!(MeasureParams::new(0.5, 1.0, 0.5, b).is_ok());
        assert!(MeasureParams::new(0.0, 1.0, 0.5, b).is_err());
        assert!(MeasureParams::new(0.3, 0.6, 0.5, b).is_err());
        assert!(MeasureParams::new(0.3, 0.7, 1.0, b).is_err());
    }

    #[test]
    fn closed_forms_on_balanced_state() {
        let rho = balanced(S, T_ZERO).density();
        let q = st();
        assert!((c_alpha_1(&rho, &q, 0.5).unwrap().value - 0.5).abs() < 1e-12);
        assert!((c_wy(&rho, &q).unwrap().value - 0.5).abs() < 1e-12);
        assert!((c_rel_entropy(&rho, &q, LogBase::Bits).unwrap().value - 1.0).abs() < 1e-12);
        assert!((c_l1_tilde(&rho, &q).unwrap().value - 1.0).abs() < 1e-12);
        assert!((c_rob_lower(&rho, &q).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn pure_profile_of_alpha_1() {
        let mut rng = rng_from_seed(5);
        let q = st();
        for alpha in [0.2, 0.5, 0.8] {
            let psi = random_pure(4, &mut rng);
            let x = psi.amplitudes()[0].norm_sqr();
            let expected = 1.0 - x.powf(1.0 / alpha) - (1.0 - x).powf(1.0 / alpha);
            let got = c_alpha_1(&psi.density(), &q, alpha).unwrap().value;
            assert!((got - expected).abs() < 1e-10);
        }
    }

    #[test]
    fn zero_on_free_states() {
        let mut rng = rng_from_seed(6);
        let q = st();
        let free = q.dephase(&random_mixed(4, &mut rng)).unwrap();
        for m in [
            Measure::Alpha1 { alpha: 0.3 },
            Measure::Wy,
            Measure::L1Tilde,
            Measure::RelEntropy {
                base: LogBase::Bits,
            },
            Measure::Geo,
            Measure::Trace,
            Measure::Max,
            Measure::TsallisN { beta: 0.5 },
            Measure::Rob,
        ] {
            let v = m.evaluate(&free, &q, &budget()).unwrap().value;
            assert!(v < 1e-6, "{m} gave {v}");
        }
        let rob = c_rob(&free, &q, &budget()).unwrap().value;
        assert!(rob < 1e-12, "{rob}");
    }

    #[test]
    fn optimizer_alpha_z_matches_closed_form_at_z_one() {
        let mut rng = rng_from_seed(7);
        let q = st();
        let rho = random_mixed(4, &mut rng);
        let params = MeasureParams {
            alpha: 0.5,
            z: 1.0,
            beta: 0.5,
            budget: budget(),
        };
        let opt = c_alpha_z(&rho, &q, &params).unwrap();
        let exact = c_alpha_1(&rho, &q, 0.5).unwrap();
        assert!((opt.value - exact.value).abs() < 1e-4);
        assert_eq!(opt.bound, Bound::Upper);
    }

    #[test]
    fn geometric_on_balanced_state() {
        let rho = balanced(S, T_ZERO).density();
        let v = c_geo(&rho, &st(), &budget()).unwrap().value;
        assert!((v - 0.5).abs() < 1e-6);
    }

    #[test]
    fn trace_rob_max_on_balanced_state() {
        let rho = balanced(S, T_ZERO).density();
        let q = st();
        let tr = c_trace(&rho, &q, &budget()).unwrap().value;
        assert!((tr - 1.0).abs() < 1e-3, "c_trace {tr}");
        let rob = c_rob(&rho, &q, &budget()).unwrap().value;
        assert!((rob - 1.0).abs() < 1e-3, "c_rob {rob}");
        let mx = c_max(&rho, &q, &budget()).unwrap().value;
        assert!((mx - 1.0).abs() < 1e-3, "c_max {mx}");
    }

    #[test]
    fn tsallis_identities() {
        let mut rng = rng_from_seed(8);
        let q = st();
        let rho = random_mixed(4, &mut rng);
        let t = c_tsallis_t(&rho, &q, 0.3).unwrap().value;
        let a = c_alpha_1(&rho, &q, 0.3).unwrap().value;
        assert!((t - a / 0.7).abs() < 1e-12);
        let n = c_tsallis_n(&rho, &q, 0.5, &budget()).unwrap().value;
        let t5 = c_tsallis_t(&rho, &q, 0.5).unwrap().value;
        assert!(n >= t5 - 1e-5, "{n} < {t5}");
    }

    #[test]
    fn variance_and_skew() {
        let mut rng = rng_from_seed(9);
        let q = st();
        let qs = q.projector(0).unwrap().clone();
        let rho = random_mixed(4, &mut rng);
        assert!(variance_op(&rho, &ComplexMatrix::identity(4)).unwrap().abs() < 1e-14);
        assert!(variance_op(&rho, &qs).unwrap() >= skew_information(&rho, &qs).unwrap() - 1e-10);
        let psi = random_pure(4, &mut rng);
        let x = psi.amplitudes()[0].norm_sqr();
        assert!((variance_op(&psi.density(), &qs).unwrap() - x * (1.0 - x)).abs() < 1e-12);
        let mut bad = ComplexMatrix::zeros(4);
        bad[(0, 1)] = C64::new(1.0, 0.0);
        assert!(variance_op(&rho, &bad).is_err());
    }

    #[test]
    fn convex_combination_and_roof() {
        let q = st();
        let a: Box<dyn CoherenceMeasure> =
            Box::new(Configured::new(Measure::Alpha1 { alpha: 0.3 }, budget()));
        let b: Box<dyn CoherenceMeasure> =
            Box::new(Configured::new(Measure::Alpha1 { alpha: 0.7 }, budget()));
        let comb = ConvexCombination::new(vec![a, b], vec![0.5, 0.5]).unwrap();
        let rho = singlet();
        assert!(comb.value(&rho, &q).unwrap().abs() < 1e-12);
        assert!(ConvexCombination::new(vec![], vec![]).is_err());

        let m = Configured::new(Measure::Alpha1 { alpha: 0.5 }, budget());
        let mut rng = rng_from_seed(10);
        let mixed = random_mixed(4, &mut rng);
        let roof = convex_roof_ub(&m, &mixed, &q, 8, 1).unwrap();
        assert!(roof.value <= m.value(&mixed, &q).unwrap() + 1e-9);
        let pure = random_pure(4, &mut rng).density();
        let roof = convex_roof_ub(&m, &pure, &q, 4, 2).unwrap();
        assert!((roof.value - m.value(&pure, &q).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn measure_parsing() {
        assert_eq!(
            "c_alpha_1:0.3".parse::<Measure>().unwrap(),
            Measure::Alpha1 { alpha: 0.3 }
        );
        assert_eq!(
            "c_alpha_z:0.5:0.8".parse::<Measure>().unwrap(),
            Measure::AlphaZ { alpha: 0.5, z: 0.8 }
        );
        assert!("c_alpha_z:0.3:0.5".parse::<Measure>().is_err());
        assert!("nonsense".parse::<Measure>().is_err());
    }
}
