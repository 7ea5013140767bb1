//! Radical-pair master equation with coherence-dependent recombination.
//!
//! The state is the unnormalized spin density matrix in the singlet/triplet
//! basis `(S, T1, T0, T-1)`. Product yields are carried as two extra real
//! components of the integrated state, so `Tr ρ + Y_S + Y_T` is a linear
//! invariant of the scheme.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::block::ProjectorSet;
use crate::error::{Error, Result};
use crate::exec::{map_range, Execution};
use crate::matrix::{c64, ComplexMatrix};
use crate::measures::{alpha_1_ceiling, c_alpha_1_value};
use crate::st::{product_to_st, spin_half, st_state, S, T_MINUS, T_PLUS, T_ZERO};
use crate::state::{random_pure, PureState, QuantumState};

/// Population below which recombination dynamics are frozen.
pub const TRACE_FLOOR: f64 = 1e-9;
/// Largest tolerated per-step growth of `Tr ρ`.
pub const TRACE_GROWTH_LIMIT: f64 = 1e-6;

/// Which terms of the master equation are active.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scenario {
    /// Hamiltonian only.
    A,
    /// Hamiltonian and singlet/triplet dephasing.
    B,
    /// Hamiltonian, dephasing and recombination.
    C,
    /// Recombination only.
    #[serde(rename = "R_only")]
    ROnly,
}

impl Scenario {
    fn hamiltonian(self) -> bool {
        matches!(self, Scenario::A | Scenario::B | Scenario::C)
    }

    fn dephasing(self) -> bool {
        matches!(self, Scenario::B | Scenario::C)
    }

    pub fn recombination(self) -> bool {
        matches!(self, Scenario::C | Scenario::ROnly)
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scenario::A => "A",
            Scenario::B => "B",
            Scenario::C => "C",
            Scenario::ROnly => "R_only",
        })
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a" => Ok(Scenario::A),
            "b" => Ok(Scenario::B),
            "c" => Ok(Scenario::C),
            "r_only" | "r-only" | "r" => Ok(Scenario::ROnly),
            _ => Err(Error::InvalidParameter(format!("unknown scenario {s:?}"))),
        }
    }
}

/// Model and integration parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub omega1: f64,
    pub omega2: f64,
    pub k_s: f64,
    pub k_t: f64,
    /// Order of the `C_{α,1}` measure driving recombination.
    pub alpha: f64,
    pub scenario: Scenario,
    pub t_end: f64,
    pub dt: f64,
    /// Emit a record every `stride` steps (the final step is always kept).
    pub stride: usize,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self {
            omega1: 0.8,
            omega2: 0.3,
            k_s: 0.2,
            k_t: 0.05,
            alpha: 0.5,
            scenario: Scenario::C,
            t_end: 40.0,
            dt: 1e-3,
            stride: 100,
        }
    }
}

impl SimulationConfig {
    pub fn with_scenario(mut self, scenario: Scenario) -> Self {
        self.scenario = scenario;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.omega1, self.omega2, self.k_s, self.k_t, self.t_end, self.dt]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidParameter("simulation parameters must be finite".into()));
        }
        if self.k_s < 0.0 || self.k_t < 0.0 {
            return Err(Error::InvalidParameter("rate constants must be non-negative".into()));
        }
        if !(self.dt > 0.0) || self.t_end < self.dt {
            return Err(Error::InvalidParameter("need dt > 0 and t_end >= dt".into()));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha {} outside (0, 1)",
                self.alpha
            )));
        }
        if self.stride == 0 {
            return Err(Error::InvalidParameter("stride must be positive".into()));
        }
        Ok(())
    }

    /// Number of fixed steps covering `[0, t_end]`.
    pub fn steps(&self) -> usize {
        (self.t_end / self.dt).round().max(1.0) as usize
    }
}

/// `H = ω₁ s_{1z} ⊗ I + ω₂ I ⊗ s_{2z}` written directly in the
/// singlet/triplet basis.
pub fn st_hamiltonian(omega1: f64, omega2: f64) -> ComplexMatrix {
    let mut h = ComplexMatrix::zeros(4);
    let mix = 0.5 * (omega1 - omega2);
    let split = 0.5 * (omega1 + omega2);
    h[(S, T_ZERO)] = c64(mix, 0.0);
    h[(T_ZERO, S)] = c64(mix, 0.0);
    h[(T_PLUS, T_PLUS)] = c64(split, 0.0);
    h[(T_MINUS, T_MINUS)] = c64(-split, 0.0);
    h
}

/// The same Hamiltonian assembled from product-basis spin operators.
pub fn st_hamiltonian_from_spins(omega1: f64, omega2: f64) -> ComplexMatrix {
    let [_, _, sz] = spin_half();
    let id = ComplexMatrix::identity(2);
    let h = &sz.kron(&id).scale(omega1) + &id.kron(&sz).scale(omega2);
    h.conjugate_by(&product_to_st())
}

/// `C_{α,1}(ρ̂) / (1 - 2^{1-1/α})` for `ρ̂ = ρ / Tr ρ`, clamped to `[0, 1]`.
pub fn p_coh_eff(rho: &ComplexMatrix, alpha: f64) -> Result<f64> {
    let tr = rho.trace().re;
    if !(tr >= TRACE_FLOOR) {
        return Err(Error::VanishingTrace { trace: tr });
    }
    let normalized = QuantumState::trusted(rho.scale(1.0 / tr).hermitian_part(), true);
    let c = c_alpha_1_value(&normalized, &ProjectorSet::singlet_triplet(), alpha)?;
    Ok((c / alpha_1_ceiling(alpha)).clamp(0.0, 1.0))
}

/// Time derivative of the density matrix together with diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct Derivative {
    pub drho: ComplexMatrix,
    pub p_eff: f64,
    /// `k_S Tr(ρ Q_S)` and `k_T Tr(ρ Q_T)` when recombination is active.
    pub r_s: f64,
    pub r_t: f64,
    /// True when the trace fell below the floor and the dynamics stopped.
    pub frozen: bool,
}

/// Precomputed operators for one configuration.
struct Model {
    cfg: SimulationConfig,
    h: ComplexMatrix,
    qs: ComplexMatrix,
    qt: ComplexMatrix,
}

impl Model {
    fn new(cfg: &SimulationConfig) -> Self {
        let q = ProjectorSet::singlet_triplet();
        Self {
            cfg: *cfg,
            h: st_hamiltonian(cfg.omega1, cfg.omega2),
            qs: q.projectors()[0].clone(),
            qt: q.projectors()[1].clone(),
        }
    }

    fn populations(&self, rho: &ComplexMatrix) -> (f64, f64) {
        (
            rho.trace_of_product(&self.qs).re,
            rho.trace_of_product(&self.qt).re,
        )
    }

    fn rhs(&self, rho: &ComplexMatrix) -> Result<Derivative> {
        let cfg = &self.cfg;
        let tr = rho.trace().re;
        let frozen_out = |p_eff| Derivative {
            drho: ComplexMatrix::zeros(4),
            p_eff,
            r_s: 0.0,
            r_t: 0.0,
            frozen: true,
        };
        if cfg.scenario.recombination() && tr < TRACE_FLOOR {
            return Ok(frozen_out(0.0));
        }
        let p_eff = p_coh_eff(rho, cfg.alpha)?;
        let mut drho = ComplexMatrix::zeros(4);
        if cfg.scenario.hamiltonian() {
            let hr = &self.h * rho;
            let rh = rho * &self.h;
            drho += &(&hr - &rh).scale_complex(c64(0.0, -1.0));
        }
        let st = &(&self.qs * rho) * &self.qt;
        let ts = st.adjoint();
        let coherent = &st + &ts;
        if cfg.scenario.dephasing() {
            let kd = 0.5 * (cfg.k_s + cfg.k_t);
            drho += &coherent.scale(-kd);
        }
        let (mut r_s, mut r_t) = (0.0, 0.0);
        if cfg.scenario.recombination() {
            let (pop_s, pop_t) = self.populations(rho);
            r_s = cfg.k_s * pop_s;
            r_t = cfg.k_t * pop_t;
            let ss = &(&self.qs * rho) * &self.qs;
            let tt = &(&self.qt * rho) * &self.qt;
            let haberkorn = &ss.scale(cfg.k_s) + &tt.scale(cfg.k_t);
            let incoherent = &ss + &tt;
            let rate = (r_s + r_t) / tr;
            drho += &haberkorn.scale(-(1.0 - p_eff));
            drho += &(&incoherent.scale(p_eff) + &coherent).scale(-rate);
        }
        Ok(Derivative {
            drho,
            p_eff,
            r_s,
            r_t,
            frozen: false,
        })
    }
}

/// Right-hand side `-i[H, ρ] + D[ρ] + R[ρ]` for the configured scenario.
pub fn master_rhs(rho: &ComplexMatrix, cfg: &SimulationConfig) -> Result<Derivative> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: rho.dim(),
        });
    }
    Model::new(cfg).rhs(rho)
}

/// One emitted sample of a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeSeriesRecord {
    pub t: f64,
    pub trace: f64,
    pub pop_s: f64,
    pub pop_t: f64,
    /// `C_{α,1}` of the renormalized state.
    pub coherence: f64,
    pub p_eff: f64,
    pub r_s: f64,
    pub r_t: f64,
    pub y_s: f64,
    pub y_t: f64,
}

impl TimeSeriesRecord {
    pub const HEADER: [&'static str; 10] = [
        "t", "trace", "popS", "popT", "coherence", "p_eff", "rS", "rT", "YS", "YT",
    ];

    pub fn values(&self) -> [f64; 10] {
        [
            self.t,
            self.trace,
            self.pop_s,
            self.pop_t,
            self.coherence,
            self.p_eff,
            self.r_s,
            self.r_t,
            self.y_s,
            self.y_t,
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub records: Vec<TimeSeriesRecord>,
    /// Time at which the trace reached the floor, if it did.
    pub frozen_at: Option<f64>,
    /// State at `t_end`.
    #[serde(skip)]
    pub final_state: Option<ComplexMatrix>,
}

impl Trajectory {
    pub fn last(&self) -> &TimeSeriesRecord {
        self.records.last().expect("trajectories hold at least one record")
    }

    /// Final `Y_S / Y_T`.
    pub fn yield_ratio(&self) -> f64 {
        let r = self.last();
        r.y_s / r.y_t
    }
}

/// Integrated quantities: the density matrix and the two yields.
#[derive(Clone)]
struct Point {
    rho: ComplexMatrix,
    y_s: f64,
    y_t: f64,
}

impl Point {
    fn axpy(&self, h: f64, d: &Derivative) -> Point {
        Point {
            rho: &self.rho + &d.drho.scale(h),
            y_s: self.y_s + h * d.r_s,
            y_t: self.y_t + h * d.r_t,
        }
    }
}

fn record(model: &Model, t: f64, p: &Point, d: &Derivative) -> Result<TimeSeriesRecord> {
    let (pop_s, pop_t) = model.populations(&p.rho);
    let trace = p.rho.trace().re;
    let coherence = if trace >= TRACE_FLOOR {
        let normalized = QuantumState::trusted(p.rho.scale(1.0 / trace), true);
        c_alpha_1_value(&normalized, &ProjectorSet::singlet_triplet(), model.cfg.alpha)?
    } else {
        0.0
    };
    Ok(TimeSeriesRecord {
        t,
        trace,
        pop_s,
        pop_t,
        coherence,
        p_eff: d.p_eff,
        r_s: d.r_s,
        r_t: d.r_t,
        y_s: p.y_s,
        y_t: p.y_t,
    })
}

/// Integrates the master equation from `initial` with classical RK4.
pub fn simulate(cfg: &SimulationConfig, initial: &QuantumState) -> Result<Trajectory> {
    cfg.validate()?;
    if initial.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: initial.dim(),
        });
    }
    let model = Model::new(cfg);
    let h = cfg.dt;
    let steps = cfg.steps();
    let mut p = Point {
        rho: initial.matrix().clone(),
        y_s: 0.0,
        y_t: 0.0,
    };
    let mut d = model.rhs(&p.rho)?;
    let mut records = vec![record(&model, 0.0, &p, &d)?];
    let mut frozen_at = None;
    for step in 1..=steps {
        let t0 = (step - 1) as f64 * h;
        let t = step as f64 * h;
        let k1 = d;
        let k2 = model.rhs(&p.axpy(0.5 * h, &k1).rho)?;
        let k3 = model.rhs(&p.axpy(0.5 * h, &k2).rho)?;
        let k4 = model.rhs(&p.axpy(h, &k3).rho)?;
        let w = h / 6.0;
        let drho = &(&k1.drho + &k2.drho.scale(2.0)) + &(&k3.drho.scale(2.0) + &k4.drho);
        let next = Point {
            rho: (&p.rho + &drho.scale(w)).hermitian_part(),
            y_s: p.y_s + w * (k1.r_s + 2.0 * k2.r_s + 2.0 * k3.r_s + k4.r_s),
            y_t: p.y_t + w * (k1.r_t + 2.0 * k2.r_t + 2.0 * k3.r_t + k4.r_t),
        };
        if !next.rho.is_finite() {
            return Err(Error::IntegratorUnstable {
                t: t0,
                reason: "non-finite density matrix".into(),
            });
        }
        let (before, after) = (p.rho.trace().re, next.rho.trace().re);
        if after > before + TRACE_GROWTH_LIMIT {
            return Err(Error::IntegratorUnstable {
                t: t0,
                reason: format!("trace grew from {before:.9} to {after:.9}"),
            });
        }
        if after < -TRACE_GROWTH_LIMIT {
            return Err(Error::IntegratorUnstable {
                t: t0,
                reason: format!("trace overshot to {after:.9}"),
            });
        }
        p = next;
        d = model.rhs(&p.rho)?;
        if d.frozen && frozen_at.is_none() {
            frozen_at = Some(t);
        }
        if step % cfg.stride == 0 || step == steps {
            records.push(record(&model, t, &p, &d)?);
        }
    }
    Ok(Trajectory {
        records,
        frozen_at,
        final_state: Some(p.rho),
    })
}

/// Named initial states: `S`, `T1`, `T0`, `T-1`, or an equal superposition
/// such as `S+T0`.
pub fn initial_state(label: &str) -> Result<QuantumState> {
    let index = |name: &str| match name.trim() {
        "S" => Ok(S),
        "T1" | "T+1" | "T+" => Ok(T_PLUS),
        "T0" => Ok(T_ZERO),
        "T-1" | "T-" => Ok(T_MINUS),
        other => Err(Error::InvalidParameter(format!(
            "unknown basis state {other:?} in {label:?}"
        ))),
    };
    // split on '+' that starts a new term, not on the sign inside "T+1"
    let mut terms = Vec::new();
    let mut current = String::new();
    for ch in label.chars() {
        if ch == '+' && !current.is_empty() && !current.ends_with('T') {
            terms.push(std::mem::take(&mut current));
        } else {
            current.push(ch);
        }
    }
    terms.push(current);
    let mut amps = vec![c64(0.0, 0.0); 4];
    for term in &terms {
        amps[index(term)?] += c64(1.0, 0.0);
    }
    if terms.len() == 1 {
        return Ok(st_state(index(&terms[0])?).density());
    }
    Ok(PureState::normalize(amps)?.density())
}

/// One row of a batch yield experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct YieldRow {
    pub id: usize,
    pub y_s: f64,
    pub y_t: f64,
    pub ratio: f64,
    /// Failure description when the simulation aborted.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Statistics of `Y_S / Y_T` over successful rows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct YieldSummary {
    pub count: usize,
    pub failures: usize,
    pub mean: f64,
    pub std_dev: f64,
    pub min: f64,
    pub max: f64,
    /// Rows with `Y_S > Y_T` and with `Y_S < Y_T`.
    pub above_one: usize,
    pub below_one: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct YieldTable {
    pub rows: Vec<YieldRow>,
    pub summary: YieldSummary,
}

fn yield_row(cfg: &SimulationConfig, id: usize, initial: &QuantumState) -> YieldRow {
    match simulate(cfg, initial) {
        Ok(traj) => {
            let last = traj.last();
            YieldRow {
                id,
                y_s: last.y_s,
                y_t: last.y_t,
                ratio: last.y_s / last.y_t,
                error: None,
            }
        }
        Err(e) => YieldRow {
            id,
            y_s: f64::NAN,
            y_t: f64::NAN,
            ratio: f64::NAN,
            error: Some(e.to_string()),
        },
    }
}

fn summarize(rows: &[YieldRow]) -> YieldSummary {
    let ok: Vec<&YieldRow> = rows.iter().filter(|r| r.error.is_none()).collect();
    let ratios: Vec<f64> = ok.iter().map(|r| r.ratio).filter(|r| r.is_finite()).collect();
    let n = ratios.len() as f64;
    let mean = ratios.iter().sum::<f64>() / n;
    let var = ratios.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    YieldSummary {
        count: ok.len(),
        failures: rows.len() - ok.len(),
        mean,
        std_dev: var.sqrt(),
        min: ratios.iter().copied().fold(f64::INFINITY, f64::min),
        max: ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        above_one: ok.iter().filter(|r| r.y_s > r.y_t).count(),
        below_one: ok.iter().filter(|r| r.y_s < r.y_t).count(),
    }
}

/// Final yields for each given initial state.
pub fn yields_for_states(cfg: &SimulationConfig, states: &[QuantumState], exec: Execution) -> Result<YieldTable> {
    cfg.validate()?;
    let rows = map_range(states.len(), exec, |k| yield_row(cfg, k, &states[k]));
    let summary = summarize(&rows);
    Ok(YieldTable { rows, summary })
}

/// Final yields for `n` random pure initial states (normalized complex
/// Gaussian amplitudes, stream `k + 1` of `seed` for state `k`).
pub fn batch_yield_experiment(n: usize, cfg: &SimulationConfig, seed: u64, exec: Execution) -> Result<YieldTable> {
    if n == 0 {
        return Err(Error::InvalidParameter("batch size must be positive".into()));
    }
    if cfg.scenario != Scenario::C {
        return Err(Error::InvalidParameter("yield batches run scenario C".into()));
    }
    cfg.validate()?;
    let rows = map_range(n, exec, |k| {
        let mut rng = crate::analysis::trial_rng(seed, k);
        let initial = random_pure(4, &mut rng).density();
        yield_row(cfg, k, &initial)
    });
    let summary = summarize(&rows);
    Ok(YieldTable { rows, summary })
}
