use std::f64::consts::TAU;

use fwm_core::{evolve_to_steady_state_oracle, solve_steady_state, Error, PhysicalConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_configs(n: usize, seed: u64) -> Vec<PhysicalConfig> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = PhysicalConfig::default();
    (0..n)
        .map(|_| PhysicalConfig {
            omega_rabi: rng.random_range(1.0..500.0) * base.gamma_big,
            delta_big: rng.random_range(-500.0..500.0) * base.gamma_big,
            delta_small: rng.random_range(-50.0..50.0) * base.gamma_big,
            ..base
        })
        .collect()
}

#[test]
fn solve_agrees_with_time_evolution_on_random_configs() {
    for cfg in random_configs(20, 7) {
        let solved = solve_steady_state(&cfg).unwrap();
        let fastest = cfg.omega_rabi.max(cfg.delta_big.abs() + cfg.omega_zero);
        let dt = 0.5 / fastest;
        let evolved = evolve_to_steady_state_oracle(&cfg, 1e10 / cfg.gamma_big, dt).unwrap();
        let diff = (solved.to_vector() - evolved.to_vector()).camax();
        assert!(diff <= 1e-6, "{cfg:?}: {diff}");
        let sum: f64 = solved.populations().iter().sum();
        assert!((sum - 1.0).abs() < 1e-10);
    }
}

#[test]
fn default_pump_oracle() {
    // The slowest optical-pumping rate here is about 0.0113 Γ, so 1000/Γ
    // leaves an e^{-11} transient and the drift check must fire.
    let cfg = PhysicalConfig::default();
    let dt = 0.5 / (cfg.delta_big + cfg.omega_zero);
    let early = evolve_to_steady_state_oracle(&cfg, 1000.0 / cfg.gamma_big, dt);
    assert!(
        matches!(early, Err(Error::NonConvergence { .. })),
        "{early:?}"
    );
    let evolved = evolve_to_steady_state_oracle(&cfg, 1e4 / cfg.gamma_big, dt).unwrap();
    let solved = solve_steady_state(&cfg).unwrap();
    assert!((solved.to_vector() - evolved.to_vector()).camax() < 1e-8);
}

#[test]
fn strong_pump_oracle() {
    let cfg = PhysicalConfig {
        omega_rabi: TAU * 2e9,
        delta_big: TAU * 2e9,
        delta_small: TAU * -217e6,
        ..PhysicalConfig::default()
    };
    let dt = 0.5 / (cfg.delta_big + cfg.omega_zero);
    let evolved = evolve_to_steady_state_oracle(&cfg, 1e4 / cfg.gamma_big, dt).unwrap();
    let solved = solve_steady_state(&cfg).unwrap();
    assert!((solved.to_vector() - evolved.to_vector()).camax() < 1e-8);
}
