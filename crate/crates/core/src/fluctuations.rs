//! First-order fluctuation equations for the coherences driven by the probe
//! and conjugate fields, and the diffusion matrices of the Langevin forces.
//!
//! The fluctuation vector is `(σ14, σ23, σ43, σ21)`. In the frequency domain
//! `(M1 + ω) Σ1(ω) = S1 (a(ω), b†(ω))ᵀ + i F(ω)` with diffusion
//! `D = D1 + D2` for the forces `F`.

use nalgebra::{Matrix4, Matrix4x2};
use num_complex::Complex64 as C64;

use crate::error::Result;
use crate::linalg::c;
use crate::params::{PhysicalConfig, Scaled};
use crate::steady_state::SteadyState;

/// Matrices of the linearized fluctuation problem, in internal units.
#[derive(Debug, Clone, PartialEq)]
pub struct FluctuationSystem {
    pub m1: Matrix4<C64>,
    /// Source matrix with the atom-field coupling factored out.
    pub s1: Matrix4x2<C64>,
    pub d1: Matrix4<C64>,
    pub d2: Matrix4<C64>,
    pub diffusion: Matrix4<C64>,
}

pub fn build_fluctuation_system(
    config: &PhysicalConfig,
    steady: &SteadyState,
) -> Result<FluctuationSystem> {
    config.validate()?;
    Ok(FluctuationSystem::from_scaled(&config.scaled(), steady))
}

impl FluctuationSystem {
    pub(crate) fn from_scaled(p: &Scaled, steady: &SteadyState) -> Self {
        let (d1, d2) = diffusion_parts(p);
        Self {
            m1: m1(p),
            s1: s1(steady),
            d1,
            d2,
            diffusion: d1 + d2,
        }
    }

    /// `D + Dᵀ`, the symmetrized diffusion entering measured spectra.
    pub fn symmetrized_diffusion(&self) -> Matrix4<C64> {
        self.diffusion + self.diffusion.transpose()
    }
}

fn m1(p: &Scaled) -> Matrix4<C64> {
    let g = p.gamma_big;
    let w = p.omega_rabi / 2.0;
    let (d, dd, w0) = (p.delta_big, p.delta_small, p.omega_zero);
    let z = c(0.0, 0.0);
    #[rustfmt::skip]
    let m = Matrix4::from_row_slice(&[
        c(d - dd, g / 2.0), z,                         c(-w, 0.0),               c(w, 0.0),
        z,                  c(-(d + dd + w0), g / 2.0), c(w, 0.0),               c(-w, 0.0),
        c(-w, 0.0),         c(w, 0.0),                 c(-(dd + w0), g),         z,
        c(w, 0.0),          c(-w, 0.0),                z,                        c(-dd, p.gamma_small),
    ]);
    m
}

fn s1(ss: &SteadyState) -> Matrix4x2<C64> {
    let z = c(0.0, 0.0);
    Matrix4x2::new(
        c(ss.sigma33 - ss.sigma22, 0.0),
        z,
        z,
        c(ss.sigma11 - ss.sigma44, 0.0),
        -ss.sigma42,
        ss.sigma13,
        ss.sigma31,
        -ss.sigma24,
    )
}

fn diffusion_parts(p: &Scaled) -> (Matrix4<C64>, Matrix4<C64>) {
    let g = p.gamma_big;
    let gs = p.gamma_small;
    let w = p.omega_rabi;
    let d = p.delta_big;
    let w0 = p.omega_zero;
    let i = c(0.0, 1.0);
    let z = c(0.0, 0.0);
    let r = |x: f64| c(x, 0.0);
    let norm = 2.0 * p.tau();

    let far = g * g + 4.0 * d * d + 8.0 * d * w0 + 4.0 * w0 * w0;
    let plus_far = c(g, 2.0 * (d + w0));
    let minus_far = c(g, -2.0 * (d + w0));
    #[rustfmt::skip]
    let d1 = Matrix4::from_row_slice(&[
        r(g * (far + 2.0 * w * w)),      z,                               i * g * w * plus_far, z,
        z,                               z,                               z,                    -i * gs * w * minus_far,
        -i * g * w * minus_far,          z,                               r(g * w * w),         z,
        z,                               i * gs * w * plus_far,           z,                    r(g * w * w + 2.0 * gs * (far + w * w)),
    ]) / r(norm);

    let near = g * g + 4.0 * d * d;
    let plus_near = c(g, 2.0 * d);
    let minus_near = c(g, -2.0 * d);
    #[rustfmt::skip]
    let d2 = Matrix4::from_row_slice(&[
        z,                              z,                        z,                      -i * gs * minus_near * w,
        z,                              r(g * (near + 2.0 * w * w)), i * g * plus_near * w, z,
        z,                              -i * g * minus_near * w,  r(g * w * w),           z,
        i * gs * plus_near * w,         z,                        z,                      r(g * w * w + 2.0 * gs * (near + w * w)),
    ]) / r(norm);
    (d1, d2)
}
