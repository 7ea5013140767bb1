use blockcoh::dynamics::{initial_state, master_rhs, simulate, Scenario, SimulationConfig, Trajectory};
use blockcoh::state::random_state;
use blockcoh::StateKind;
use nalgebra::DMatrix;

fn run(cfg: SimulationConfig, label: &str) -> Trajectory {
    simulate(&cfg, &initial_state(label).unwrap()).unwrap()
}

fn config(scenario: Scenario) -> SimulationConfig {
    SimulationConfig {
        scenario,
        stride: 10,
        ..SimulationConfig::default()
    }
}

fn sorted_eigenvalues(m: &blockcoh::ComplexMatrix) -> Vec<f64> {
    let na = DMatrix::from_fn(m.dim(), m.dim(), |i, j| m[(i, j)]);
    let mut v: Vec<f64> = na.symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

#[test]
fn hamiltonian_evolution_preserves_trace_and_spectrum() {
    for seed in 0..4 {
        let rho = random_state(4, StateKind::Mixed, seed).unwrap();
        let cfg = SimulationConfig {
            t_end: 20.0,
            ..config(Scenario::A)
        };
        let traj = simulate(&cfg, &rho).unwrap();
        for r in &traj.records {
            assert!((r.trace - 1.0).abs() < 1e-9, "t = {}: {}", r.t, r.trace);
        }
        let before = sorted_eigenvalues(rho.matrix());
        let after = sorted_eigenvalues(traj.final_state.as_ref().unwrap());
        for (a, b) in before.iter().zip(&after) {
            assert!((a - b).abs() < 1e-7, "{before:?} vs {after:?}");
        }
    }
}

#[test]
fn dephasing_stays_inside_the_oscillation_envelope() {
    let envelope = run(config(Scenario::A), "S")
        .records
        .iter()
        .map(|r| r.coherence)
        .fold(0.0, f64::max);
    let damped = run(config(Scenario::B), "S");
    for r in &damped.records {
        assert!(r.coherence <= envelope + 1e-6, "t = {}: {}", r.t, r.coherence);
    }
    let late = damped.last().coherence;
    assert!(late < 0.5 * envelope, "{late}");
}

#[test]
fn dephasing_is_trace_free() {
    let cfg = config(Scenario::B);
    for seed in 0..8 {
        let rho = random_state(4, StateKind::Mixed, seed).unwrap();
        let d = master_rhs(rho.matrix(), &cfg).unwrap();
        assert!(d.drho.trace().norm() < 1e-14);
    }
}

#[test]
fn singlet_loses_population_at_the_singlet_rate() {
    let cfg = config(Scenario::C);
    let d = master_rhs(initial_state("S").unwrap().matrix(), &cfg).unwrap();
    assert!((d.drho.trace().re + 0.2).abs() < 1e-12);
    assert_eq!(d.p_eff, 0.0);
}

#[test]
fn triplet_edge_state_is_stationary_without_recombination() {
    let d = master_rhs(initial_state("T1").unwrap().matrix(), &config(Scenario::A)).unwrap();
    assert!(d.drho.max_abs() < 1e-15);
}

/// Coherence maxima before the population falls below one half.
fn oscillations_before_half(traj: &Trajectory) -> usize {
    let live: Vec<f64> = traj
        .records
        .iter()
        .take_while(|r| r.trace >= 0.5)
        .map(|r| r.coherence)
        .collect();
    live.windows(3)
        .filter(|w| w[1] > w[0] && w[1] >= w[2])
        .count()
}

fn split_cfg(omega: f64) -> SimulationConfig {
    SimulationConfig {
        omega1: 0.3 + omega,
        omega2: 0.3,
        ..config(Scenario::C)
    }
}

#[test]
fn fast_mixing_oscillates_many_times_before_decay() {
    let k = 0.2;
    let traj = run(split_cfg(10.0 * k), "S");
    let n = oscillations_before_half(&traj);
    assert!(n >= 5, "{n}");
}

#[test]
fn slow_mixing_suppresses_the_oscillation() {
    let k = 0.2;
    let traj = run(split_cfg(k / 10.0), "S");
    let c: Vec<f64> = traj.records.iter().map(|r| r.coherence).collect();
    let first_max = c
        .windows(3)
        .position(|w| w[1] > w[0] && w[1] >= w[2])
        .map(|i| i + 1)
        .unwrap_or(0);
    let tail = &c[first_max..];
    assert!(tail.iter().all(|&x| x < 0.1), "{:?}", tail.iter().copied().fold(0.0, f64::max));
}

#[test]
fn oscillation_count_grows_with_the_splitting() {
    let counts: Vec<usize> = [0.5, 1.0, 2.0, 4.0]
        .iter()
        .map(|&w| oscillations_before_half(&run(split_cfg(w), "S")))
        .collect();
    assert!(counts.windows(2).all(|w| w[1] >= w[0]), "{counts:?}");
    assert!(counts[3] > counts[0], "{counts:?}");
}

#[test]
fn yields_are_nondecreasing_and_populations_add_up() {
    let traj = run(config(Scenario::C), "S+T1");
    for w in traj.records.windows(2) {
        assert!(w[1].y_s >= w[0].y_s && w[1].y_t >= w[0].y_t);
    }
    for r in &traj.records {
        assert!((r.trace - r.pop_s - r.pop_t).abs() < 1e-9);
        assert!((0.0..=1.0).contains(&r.p_eff));
    }
}
