//! Quantum-noise model of four-wave mixing in a double-Λ atomic vapor.
//!
//! A strong pump drives two Λ systems. A weak probe `a` and a conjugate `b`
//! are amplified while they propagate. The crate computes the pump-only
//! steady state, the linear response and Langevin noise of the atomic
//! coherences, the field transfer matrix through the medium, and the
//! measured intensity-difference and quadrature spectra.

pub mod error;
pub mod fluctuations;
pub mod linalg;
pub mod observables;
pub mod params;
pub mod propagation;
pub mod quadrature;
pub mod steady_state;
pub mod sweep;

pub use error::{Error, Result};
pub use fluctuations::{build_fluctuation_system, FluctuationSystem};
pub use observables::{
    correlation_spectra, gains, inseparability, record_from, single_beam_spectra, spectrum_record,
    to_decibels, SpectrumRecord,
};
pub use params::{DerivedConstants, PhysicalConfig, Scaled};
pub use propagation::{
    langevin_diffusion, propagation_generator, solve_transfer, transfer_matrix, LangevinDiffusion,
    TransferOptions, TransferSolution,
};
pub use steady_state::{build_m0, evolve_to_steady_state_oracle, solve_steady_state, SteadyState};
pub use sweep::{
    optimize_delta, run_sweep, write_csv, Axis, RunManifest, Scale, SweepRow, SweepSpec,
};
