//! Ordering experiments, the `DIS(α)` difference curve, pure-state profiles
//! and the inequality battery.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::block::ProjectorSet;
use crate::error::{Error, Result};
use crate::exec::{map_range, map_slice, Execution};
use crate::free_search::OptimizerBudget;
use crate::measures::{
    c_alpha_1_value, c_alpha_z, c_geo, c_l1_tilde, c_max, c_rel_entropy, c_rob, c_rob_lower,
    c_trace, c_tsallis_n, c_tsallis_t, skew_information, variance_op, Measure, MeasureParams,
};
use crate::matrix::LogBase;
use crate::state::{random_mixed, random_pure, rng_from_seed, QuantumState, StateKind};

/// Differences below this are treated as ties in ordering verdicts.
pub const ORDER_TIE: f64 = 1e-9;
/// Width of the bracket left by zero refinement.
pub const ZERO_BRACKET: f64 = 1e-8;
/// Lower end of the default `α` grid; the upper end is `1 - DIS_EDGE`.
pub const DIS_EDGE: f64 = 5e-7;
/// Default number of grid points.
pub const DIS_POINTS: usize = 4096;
/// Slack for inequalities whose sides are all closed forms.
pub const EXACT_SLACK: f64 = 1e-9;
/// Slack for inequalities with at least one optimizer-backed side.
pub const OPTIMIZER_SLACK: f64 = 1e-4;
/// States with purity above `1 - PURE_TOL` count as pure.
pub const PURE_TOL: f64 = 1e-9;

/// Stream-separated generator for trial `k` under a base seed.
pub fn trial_rng(seed: u64, k: usize) -> ChaCha8Rng {
    let mut rng = rng_from_seed(seed);
    rng.set_stream(k as u64 + 1);
    rng
}

fn sample(kind: StateKind, dim: usize, rng: &mut ChaCha8Rng) -> QuantumState {
    match kind {
        StateKind::Pure => random_pure(dim, rng).density(),
        StateKind::Mixed => random_mixed(dim, rng),
    }
}

/// Two-block pure-state profiles at singlet weight `x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PureProfiles {
    /// `1 - x^{1/α} - (1-x)^{1/α}`, the value of `C_{α,1}`.
    pub f_renyi: f64,
    /// `2 √(x(1-x))`, the value of `C̃_l1`.
    pub f_l1: f64,
    /// Binary entropy in bits, the value of `C_r`.
    pub f_rel: f64,
}

pub fn pure_state_profiles(x: f64, alpha: f64) -> Result<PureProfiles> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidParameter(format!("weight {x} outside [0, 1]")));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!("alpha {alpha} outside (0, 1)")));
    }
    // fold onto [0, ½] so complementary weights give identical results
    let x = if x <= 0.5 { x } else { 1.0 - x };
    let y = 1.0 - x;
    let h = |p: f64| if p > 0.0 { -p * p.log2() } else { 0.0 };
    Ok(PureProfiles {
        f_renyi: 1.0 - x.powf(1.0 / alpha) - y.powf(1.0 / alpha),
        f_l1: 2.0 * (x * y).sqrt(),
        f_rel: h(x) + h(y),
    })
}

/// Evenly spaced grid of `n ≥ 2` points on `[lo, hi] ⊂ (0, 1)`.
pub fn alpha_grid(n: usize, lo: f64, hi: f64) -> Result<Vec<f64>> {
    if n < 2 || !(lo > 0.0 && lo < hi && hi < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "grid needs n >= 2 and 0 < lo < hi < 1, got n={n}, [{lo}, {hi}]"
        )));
    }
    let step = (hi - lo) / (n - 1) as f64;
    Ok((0..n).map(|i| lo + step * i as f64).collect())
}

/// The default `DIS_POINTS`-point grid on `[DIS_EDGE, 1 - DIS_EDGE]`.
pub fn default_alpha_grid() -> Vec<f64> {
    alpha_grid(DIS_POINTS, DIS_EDGE, 1.0 - DIS_EDGE).expect("valid default grid")
}

/// `DIS(α) = C_{α,1}(ρ₁) - C_{α,1}(ρ₂)` sampled on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisCurve {
    pub alpha: Vec<f64>,
    pub first: Vec<f64>,
    pub second: Vec<f64>,
    pub values: Vec<f64>,
    pub zeros: Vec<f64>,
}

fn dis_at(r1: &QuantumState, r2: &QuantumState, q: &ProjectorSet, a: f64) -> Result<(f64, f64)> {
    Ok((c_alpha_1_value(r1, q, a)?, c_alpha_1_value(r2, q, a)?))
}

pub fn dis_curve(
    r1: &QuantumState,
    r2: &QuantumState,
    q: &ProjectorSet,
    grid: &[f64],
    exec: Execution,
) -> Result<DisCurve> {
    if grid.is_empty() || grid.iter().any(|&a| !(a > 0.0 && a < 1.0)) {
        return Err(Error::InvalidParameter("alpha grid must lie inside (0, 1)".into()));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("alpha grid must be strictly increasing".into()));
    }
    let pairs = map_slice(grid, exec, |&a| dis_at(r1, r2, q, a))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let first: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let second: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let values: Vec<f64> = pairs.iter().map(|p| p.0 - p.1).collect();

    let dis = |a: f64| dis_at(r1, r2, q, a).map(|(x, y)| x - y);
    let mut zeros = Vec::new();
    let nonzero: Vec<usize> = (0..grid.len()).filter(|&i| values[i] != 0.0).collect();
    for w in nonzero.windows(2) {
        let (i, j) = (w[0], w[1]);
        if values[i].signum() == values[j].signum() {
            continue;
        }
        if j > i + 1 {
            // the curve vanishes exactly on grid points between i and j
            zeros.push(grid[(i + j) / 2]);
            continue;
        }
        let (mut lo, mut hi) = (grid[i], grid[j]);
        let sign_lo = values[i].signum();
        while hi - lo > ZERO_BRACKET {
            let mid = 0.5 * (lo + hi);
            let fm = dis(mid)?;
            if fm == 0.0 {
                lo = mid;
                hi = mid;
            } else if fm.signum() == sign_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        zeros.push(0.5 * (lo + hi));
    }
    Ok(DisCurve {
        alpha: grid.to_vec(),
        first,
        second,
        values,
        zeros,
    })
}

/// Comparison of two states under two measures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderingVerdict {
    pub measures: (String, String),
    /// `(A(ρ), A(σ))`.
    pub first: (f64, f64),
    /// `(B(ρ), B(σ))`.
    pub second: (f64, f64),
    pub agree: bool,
    /// Trial index that produced the pair, when searching.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trial: Option<usize>,
}

fn tie_sign(d: f64) -> i8 {
    if d.abs() < ORDER_TIE {
        0
    } else if d > 0.0 {
        1
    } else {
        -1
    }
}

/// Orders `ρ` and `σ` under two closed-form measures.
pub fn ordering_check(
    rho: &QuantumState,
    sigma: &QuantumState,
    a: &Measure,
    b: &Measure,
    p: &ProjectorSet,
) -> Result<OrderingVerdict> {
    for m in [a, b] {
        if !m.is_closed_form() {
            return Err(Error::InvalidParameter(format!(
                "{m} is optimizer-backed; ordering verdicts need closed forms"
            )));
        }
    }
    let budget = OptimizerBudget::default();
    let eval = |m: &Measure, s: &QuantumState| m.evaluate(s, p, &budget).map(|r| r.raw_value);
    let first = (eval(a, rho)?, eval(a, sigma)?);
    let second = (eval(b, rho)?, eval(b, sigma)?);
    Ok(OrderingVerdict {
        measures: (a.to_string(), b.to_string()),
        first,
        second,
        agree: tie_sign(first.0 - first.1) == tie_sign(second.0 - second.1),
        trial: None,
    })
}

/// Pair of states sampled for trial `k` of a search.
pub fn trial_pair(p: &ProjectorSet, kind: StateKind, seed: u64, k: usize) -> (QuantumState, QuantumState) {
    let mut rng = trial_rng(seed, k);
    let r = sample(kind, p.dim(), &mut rng);
    let s = sample(kind, p.dim(), &mut rng);
    (r, s)
}

/// Random pairs on which `a` and `b` disagree, in trial order.
pub fn counterexample_search(
    a: &Measure,
    b: &Measure,
    p: &ProjectorSet,
    trials: usize,
    kind: StateKind,
    seed: u64,
    exec: Execution,
) -> Result<Vec<OrderingVerdict>> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be positive".into()));
    }
    let verdicts = map_range(trials, exec, |k| {
        let (r, s) = trial_pair(p, kind, seed, k);
        ordering_check(&r, &s, a, b, p).map(|mut v| {
            v.trial = Some(k);
            v
        })
    });
    let mut out = Vec::new();
    for v in verdicts {
        let v = v?;
        if !v.agree {
            out.push(v);
        }
    }
    Ok(out)
}

/// Inequalities checked by [`inequality_battery`], as `lhs ≤ rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Proposition {
    /// Witness bound below the robustness.
    RobLower,
    /// `C_Tr ≤ C̃_l1`.
    TraceVsL1,
    /// `C_Tr² / (2 ln 2) ≤ C_r`.
    TraceVsRel,
    /// `C_Tr² / 4 ≤ C_geo`.
    TraceVsGeo,
    /// `C_Tr ≤ C_rob`.
    TraceVsRob,
    /// `C_r ≤ C_max`.
    RelVsMax,
    /// `C_max ≤ log2(1 + C_rob)`.
    MaxVsRob,
    /// `C_{α,z} / (1-α) ≤ C^T_α`.
    AlphaZVsTsallisT,
    /// `C^T_α ≤ C^N_α`.
    TsallisTVsN,
    /// `I_WY(ρ, Q_S) ≤ Var(ρ, Q_S)`.
    SkewVsVariance,
    /// Pure states: `C_r ≤ C̃_l1`.
    PureRelVsL1,
    /// Pure states: `2 Var(ρ, Q_S) ≤ C̃_l1`.
    PureVarianceVsL1,
    /// Pure states: `C_{α,1} ≤ 2 Var(ρ, Q_S)`.
    PureAlphaVsVariance,
}

impl Proposition {
    pub const MIXED: [Proposition; 10] = [
        Proposition::RobLower,
        Proposition::TraceVsL1,
        Proposition::TraceVsRel,
        Proposition::TraceVsGeo,
        Proposition::TraceVsRob,
        Proposition::RelVsMax,
        Proposition::MaxVsRob,
        Proposition::AlphaZVsTsallisT,
        Proposition::TsallisTVsN,
        Proposition::SkewVsVariance,
    ];

    pub const PURE: [Proposition; 3] = [
        Proposition::PureRelVsL1,
        Proposition::PureVarianceVsL1,
        Proposition::PureAlphaVsVariance,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Proposition::RobLower => "-Tr(rho W) <= c_rob",
            Proposition::TraceVsL1 => "c_trace <= c_l1_tilde",
            Proposition::TraceVsRel => "c_trace^2/(2 ln2) <= c_r",
            Proposition::TraceVsGeo => "c_trace^2/4 <= c_geo",
            Proposition::TraceVsRob => "c_trace <= c_rob",
            Proposition::RelVsMax => "c_r <= c_max",
            Proposition::MaxVsRob => "c_max <= log2(1+c_rob)",
            Proposition::AlphaZVsTsallisT => "c_alpha_z/(1-alpha) <= c_tsallis_t",
            Proposition::TsallisTVsN => "c_tsallis_t <= c_tsallis_n",
            Proposition::SkewVsVariance => "I_wy(Q_S) <= Var(Q_S)",
            Proposition::PureRelVsL1 => "pure: c_r <= c_l1_tilde",
            Proposition::PureVarianceVsL1 => "pure: 2Var(Q_S) <= c_l1_tilde",
            Proposition::PureAlphaVsVariance => "pure: c_alpha_1 <= 2Var(Q_S)",
        }
    }
}

/// One `lhs ≤ rhs + slack` comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub proposition: Proposition,
    pub state: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    /// Measure parameter, where the proposition has one.
    pub alpha: Option<f64>,
    pub z: Option<f64>,
}

impl Check {
    pub fn margin(&self) -> f64 {
        self.rhs + self.slack - self.lhs
    }

    pub fn holds(&self) -> bool {
        self.margin() >= 0.0
    }
}

/// Tally for one proposition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropositionTally {
    pub proposition: Proposition,
    pub checked: usize,
    pub violations: Vec<Check>,
    /// Smallest `rhs + slack - lhs` seen.
    pub worst_margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatteryReport {
    pub tallies: Vec<PropositionTally>,
    /// States whose evaluation failed numerically.
    pub errors: Vec<(usize, String)>,
}

impl BatteryReport {
    pub fn violation_count(&self) -> usize {
        self.tallies.iter().map(|t| t.violations.len()).sum()
    }

    pub fn is_clean(&self) -> bool {
        self.violation_count() == 0 && self.errors.is_empty()
    }

    pub fn tally(&self, p: Proposition) -> Option<&PropositionTally> {
        self.tallies.iter().find(|t| t.proposition == p)
    }
}

/// Battery settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatteryConfig {
    pub budget: OptimizerBudget,
    /// `α` values for the pure-state chain (each above ½).
    pub pure_alphas: Vec<f64>,
    /// Range for the per-state `α` of the Tsallis comparisons.
    pub alpha_range: (f64, f64),
    pub seed: u64,
}

impl Default for BatteryConfig {
    fn default() -> Self {
        Self {
            budget: OptimizerBudget {
                restarts: 2,
                ..OptimizerBudget::default()
            },
            pure_alphas: vec![0.6, 0.75, 0.9],
            alpha_range: (0.1, 0.9),
            seed: 0,
        }
    }
}

fn check(proposition: Proposition, state: usize, lhs: f64, rhs: f64, optimizer: bool) -> Check {
    Check {
        proposition,
        state,
        lhs,
        rhs,
        slack: if optimizer { OPTIMIZER_SLACK } else { EXACT_SLACK },
        alpha: None,
        z: None,
    }
}

fn mixed_checks(rho: &QuantumState, q: &ProjectorSet, k: usize, cfg: &BatteryConfig) -> Result<Vec<Check>> {
    let budget = cfg.budget.with_seed(cfg.budget.seed.wrapping_add(k as u64));
    let l1 = c_l1_tilde(rho, q)?.raw_value;
    let rel = c_rel_entropy(rho, q, LogBase::Bits)?.raw_value;
    let tr = c_trace(rho, q, &budget)?.value;
    let geo = c_geo(rho, q, &budget)?.value;
    let rob = c_rob(rho, q, &budget)?.value;
    let max = c_max(rho, q, &budget)?.value;
    let lower = c_rob_lower(rho, q)?;
    let qs = q.projector(0)?;

    let mut rng = trial_rng(cfg.seed, k);
    let (lo, hi) = cfg.alpha_range;
    let alpha = rng.random_range(lo..hi);
    let z = rng.random_range(alpha.max(1.0 - alpha)..=1.0);
    let params = MeasureParams {
        alpha,
        z,
        beta: alpha,
        budget,
    };
    let az = c_alpha_z(rho, q, &params)?.value;
    let tt = c_tsallis_t(rho, q, alpha)?.raw_value;
    let tn = c_tsallis_n(rho, q, alpha, &budget)?.value;

    let mut tsallis_lower = check(Proposition::AlphaZVsTsallisT, k, az / (1.0 - alpha), tt, true);
    tsallis_lower.alpha = Some(alpha);
    tsallis_lower.z = Some(z);
    let mut tsallis_upper = check(Proposition::TsallisTVsN, k, tt, tn, true);
    tsallis_upper.alpha = Some(alpha);
    Ok(vec![
        check(Proposition::RobLower, k, lower, rob, true),
        check(Proposition::TraceVsL1, k, tr, l1, true),
        check(Proposition::TraceVsRel, k, tr * tr / (2.0 * std::f64::consts::LN_2), rel, true),
        check(Proposition::TraceVsGeo, k, 0.25 * tr * tr, geo, true),
        check(Proposition::TraceVsRob, k, tr, rob, true),
        check(Proposition::RelVsMax, k, rel, max, true),
        check(Proposition::MaxVsRob, k, max, (1.0 + rob).log2(), true),
        tsallis_lower,
        tsallis_upper,
        check(
            Proposition::SkewVsVariance,
            k,
            skew_information(rho, qs)?,
            variance_op(rho, qs)?,
            false,
        ),
    ])
}

fn pure_checks(rho: &QuantumState, q: &ProjectorSet, k: usize, cfg: &BatteryConfig) -> Result<Vec<Check>> {
    if rho.purity() < 1.0 - PURE_TOL {
        return Err(Error::InvalidParameter(format!(
            "state {k} is not pure (purity {})",
            rho.purity()
        )));
    }
    let l1 = c_l1_tilde(rho, q)?.raw_value;
    let rel = c_rel_entropy(rho, q, LogBase::Bits)?.raw_value;
    let var2 = 2.0 * variance_op(rho, q.projector(0)?)?;
    let mut out = vec![
        check(Proposition::PureRelVsL1, k, rel, l1, false),
        check(Proposition::PureVarianceVsL1, k, var2, l1, false),
    ];
    for &alpha in &cfg.pure_alphas {
        let mut c = check(
            Proposition::PureAlphaVsVariance,
            k,
            c_alpha_1_value(rho, q, alpha)?,
            var2,
            false,
        );
        c.alpha = Some(alpha);
        out.push(c);
    }
    Ok(out)
}

/// Runs the general inequalities on `mixed` and the pure-state chain on
/// `pure`. Pure-state indices are offset by `mixed.len()`.
pub fn inequality_battery(
    mixed: &[QuantumState],
    pure: &[QuantumState],
    q: &ProjectorSet,
    cfg: &BatteryConfig,
) -> Result<BatteryReport> {
    if q.len() != 2 {
        return Err(Error::InvalidProjectors(
            "the battery needs a two-block projector set".into(),
        ));
    }
    if cfg.pure_alphas.iter().any(|&a| !(a > 0.5 && a < 1.0)) {
        return Err(Error::InvalidParameter("pure-state alphas must lie in (1/2, 1)".into()));
    }
    let (lo, hi) = cfg.alpha_range;
    if !(lo > 0.0 && lo < hi && hi < 1.0) {
        return Err(Error::InvalidParameter("alpha range must lie inside (0, 1)".into()));
    }
    cfg.budget.validate()?;
    let exec = cfg.budget.execution;
    // restarts stay sequential inside each state; states are the parallel axis
    let inner = BatteryConfig {
        budget: cfg.budget.with_execution(Execution::Sequential),
        ..cfg.clone()
    };
    let mut results = map_range(mixed.len(), exec, |k| mixed_checks(&mixed[k], q, k, &inner));
    let offset = mixed.len();
    results.extend(map_range(pure.len(), exec, |k| {
        pure_checks(&pure[k], q, offset + k, &inner)
    }));

    let props: Vec<Proposition> = Proposition::MIXED.into_iter().chain(Proposition::PURE).collect();
    let mut tallies: Vec<PropositionTally> = props
        .iter()
        .map(|&proposition| PropositionTally {
            proposition,
            checked: 0,
            violations: Vec::new(),
            worst_margin: f64::INFINITY,
        })
        .collect();
    let mut errors = Vec::new();
    for (k, r) in results.into_iter().enumerate() {
        match r {
            Ok(checks) => {
                for c in checks {
                    let t = tallies
                        .iter_mut()
                        .find(|t| t.proposition == c.proposition)
                        .expect("every proposition has a tally");
                    t.checked += 1;
                    t.worst_margin = t.worst_margin.min(c.margin());
                    if !c.holds() {
                        t.violations.push(c);
                    }
                }
            }
            Err(e) => errors.push((k, e.to_string())),
        }
    }
    Ok(BatteryReport { tallies, errors })
}

/// Deterministic sample of `n` random states of one kind.
pub fn sample_states(n: usize, dim: usize, kind: StateKind, seed: u64) -> Vec<QuantumState> {
    (0..n)
        .map(|k| sample(kind, dim, &mut trial_rng(seed, k)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference::{alpha_reversal_pair, measure_reversal_pair};
    use crate::st::balanced;

    #[test]
    fn profiles_at_known_points() {
        let p = pure_state_profiles(0.0, 0.5).unwrap();
        assert_eq!((p.f_renyi, p.f_l1, p.f_rel), (0.0, 0.0, 0.0));
        let p = pure_state_profiles(0.5, 0.5).unwrap();
        assert!((p.f_renyi - 0.5).abs() < 1e-15);
        assert!((p.f_l1 - 1.0).abs() < 1e-15);
        assert!((p.f_rel - 1.0).abs() < 1e-15);
        let p = pure_state_profiles(0.25, 0.5).unwrap();
        assert!((p.f_l1 - 3f64.sqrt() / 2.0).abs() < 1e-15);
        assert!(pure_state_profiles(1.1, 0.5).is_err());
        assert!(pure_state_profiles(0.5, 1.0).is_err());
    }

    #[test]
    fn profiles_symmetric_and_increasing() {
        for i in 0..=1000 {
            let x = 0.5 + i as f64 / 2000.0;
            let a = pure_state_profiles(x, 0.7).unwrap();
            let b = pure_state_profiles(1.0 - x, 0.7).unwrap();
            assert_eq!(a, b, "x = {x}");
        }
        let mut prev = pure_state_profiles(0.0, 0.3).unwrap();
        for i in 1..500 {
            let x = 0.5 * i as f64 / 500.0;
            let p = pure_state_profiles(x, 0.3).unwrap();
            assert!(p.f_renyi > prev.f_renyi && p.f_l1 > prev.f_l1 && p.f_rel > prev.f_rel);
            prev = p;
        }
    }

    #[test]
    fn dis_of_identical_states_vanishes() {
        let q = ProjectorSet::singlet_triplet();
        let (r, _) = alpha_reversal_pair();
        let grid = alpha_grid(64, 0.01, 0.99).unwrap();
        let c = dis_curve(&r, &r, &q, &grid, Execution::Sequential).unwrap();
        assert!(c.values.iter().all(|&v| v == 0.0));
        assert!(c.zeros.is_empty());
    }

    #[test]
    fn dis_zero_for_reference_pair() {
        let q = ProjectorSet::singlet_triplet();
        let (r1, r2) = alpha_reversal_pair();
        let grid = alpha_grid(256, DIS_EDGE, 1.0 - DIS_EDGE).unwrap();
        let c = dis_curve(&r1, &r2, &q, &grid, Execution::Sequential).unwrap();
        assert_eq!(c.zeros.len(), 1);
        assert!((c.zeros[0] - 0.3171).abs() < 0.01);
        let (a, b) = dis_at(&r1, &r2, &q, c.zeros[0]).unwrap();
        assert!((a - b).abs() < 1e-7);
    }

    #[test]
    fn grid_validation() {
        assert!(alpha_grid(1, 0.1, 0.9).is_err());
        assert!(alpha_grid(10, 0.0, 0.9).is_err());
        let q = ProjectorSet::singlet_triplet();
        let (r, _) = alpha_reversal_pair();
        assert!(dis_curve(&r, &r, &q, &[0.5, 0.4], Execution::Sequential).is_err());
    }

    #[test]
    fn reference_pairs_reverse_order() {
        let q = ProjectorSet::singlet_triplet();
        let (r1, r2) = measure_reversal_pair();
        let v = ordering_check(
            &r1,
            &r2,
            &Measure::L1Tilde,
            &Measure::RelEntropy { base: LogBase::Bits },
            &q,
        )
        .unwrap();
        assert!(!v.agree);
        let (a1, a2) = alpha_reversal_pair();
        let v = ordering_check(
            &a1,
            &a2,
            &Measure::Alpha1 { alpha: 0.3 },
            &Measure::Alpha1 { alpha: 0.4 },
            &q,
        )
        .unwrap();
        assert!(!v.agree);
        let v = ordering_check(&a1, &a2, &Measure::Wy, &Measure::Wy, &q).unwrap();
        assert!(v.agree);
        assert!(ordering_check(&a1, &a2, &Measure::Geo, &Measure::Wy, &q).is_err());
    }

    #[test]
    fn search_finds_reversals_and_respects_pure_claim() {
        let q = ProjectorSet::singlet_triplet();
        let l1 = Measure::L1Tilde;
        let rel = Measure::RelEntropy { base: LogBase::Bits };
        let same = counterexample_search(&l1, &l1, &q, 50, StateKind::Mixed, 1, Execution::Sequential).unwrap();
        assert!(same.is_empty());
        let pure = counterexample_search(&l1, &rel, &q, 300, StateKind::Pure, 2, Execution::Sequential).unwrap();
        assert!(pure.is_empty());
        let lo = Measure::Alpha1 { alpha: 0.1 };
        let hi = Measure::Alpha1 { alpha: 0.9 };
        let found = counterexample_search(&lo, &hi, &q, 2000, StateKind::Mixed, 3, Execution::Sequential).unwrap();
        assert!(!found.is_empty());
        for v in &found {
            let (r, s) = trial_pair(&q, StateKind::Mixed, 3, v.trial.unwrap());
            assert!(!ordering_check(&r, &s, &lo, &hi, &q).unwrap().agree);
        }
    }

    #[test]
    fn search_is_schedule_independent() {
        let q = ProjectorSet::singlet_triplet();
        let a = Measure::L1Tilde;
        let b = Measure::RelEntropy { base: LogBase::Bits };
        let s = counterexample_search(&a, &b, &q, 200, StateKind::Mixed, 9, Execution::Sequential).unwrap();
        let p = counterexample_search(&a, &b, &q, 200, StateKind::Mixed, 9, Execution::Parallel).unwrap();
        assert_eq!(s, p);
    }

    #[test]
    fn small_battery_is_clean() {
        let q = ProjectorSet::singlet_triplet();
        let mixed = sample_states(2, 4, StateKind::Mixed, 11);
        let mut pure = sample_states(3, 4, StateKind::Pure, 12);
        pure.push(balanced(0, 2).density());
        let cfg = BatteryConfig {
            budget: OptimizerBudget {
                restarts: 1,
                max_iter: 1500,
                ..OptimizerBudget::default()
            },
            ..BatteryConfig::default()
        };
        let report = inequality_battery(&mixed, &pure, &q, &cfg).unwrap();
        assert!(report.is_clean(), "{report:?}");
        assert_eq!(report.tally(Proposition::TraceVsRob).unwrap().checked, 2);
        assert_eq!(report.tally(Proposition::PureAlphaVsVariance).unwrap().checked, 12);
    }

    #[test]
    fn battery_rejects_mixed_input_to_pure_chain() {
        let q = ProjectorSet::singlet_triplet();
        let mixed = sample_states(1, 4, StateKind::Mixed, 1);
        let report = inequality_battery(&[], &mixed, &q, &BatteryConfig::default()).unwrap();
        assert_eq!(report.errors.len(), 1);
        assert!(!report.is_clean());
    }
}
