//! Pump-only (zeroth-order) populations and pump coherences.
//!
//! The seven mean values `(σ11, σ22, σ33, σ31, σ13, σ42, σ24)` obey
//! `(i ∂t + M0) Σ0 = S0`. The steady state is `Σ0 = M0⁻¹ S0` and σ44 follows
//! from the unit trace.

use nalgebra::{SMatrix, SVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{c, inverse_with_condition};
use crate::params::{PhysicalConfig, Scaled};

pub type Matrix7 = SMatrix<C64, 7, 7>;
pub type Vector7 = SVector<C64, 7>;

/// Condition-number ceiling for the steady-state solve.
pub const MAX_CONDITION: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyState {
    pub sigma11: f64,
    pub sigma22: f64,
    pub sigma33: f64,
    pub sigma44: f64,
    pub sigma31: C64,
    pub sigma13: C64,
    pub sigma42: C64,
    pub sigma24: C64,
}

impl SteadyState {
    /// Builds the state from the solved 7-vector, closing the trace for σ44.
    /// Populations keep only their real parts.
    pub fn from_vector(v: &Vector7) -> Self {
        let (s11, s22, s33) = (v[0].re, v[1].re, v[2].re);
        Self {
            sigma11: s11,
            sigma22: s22,
            sigma33: s33,
            sigma44: 1.0 - s11 - s22 - s33,
            sigma31: v[3],
            sigma13: v[4],
            sigma42: v[5],
            sigma24: v[6],
        }
    }

    pub fn to_vector(&self) -> Vector7 {
        Vector7::from_column_slice(&[
            c(self.sigma11, 0.0),
            c(self.sigma22, 0.0),
            c(self.sigma33, 0.0),
            self.sigma31,
            self.sigma13,
            self.sigma42,
            self.sigma24,
        ])
    }

    /// All atoms in |2⟩ with no pump coherence: the no-pump limit where the
    /// linear system is singular.
    pub fn pinned_ground() -> Self {
        Self {
            sigma11: 0.0,
            sigma22: 1.0,
            sigma33: 0.0,
            sigma44: 0.0,
            sigma31: C64::default(),
            sigma13: C64::default(),
            sigma42: C64::default(),
            sigma24: C64::default(),
        }
    }

    pub fn populations(&self) -> [f64; 4] {
        [self.sigma11, self.sigma22, self.sigma33, self.sigma44]
    }
}

/// The 7×7 zeroth-order matrix in internal units (Γ = 1).
pub fn build_m0(config: &PhysicalConfig) -> Result<Matrix7> {
    config.validate()?;
    Ok(m0_scaled(&config.scaled()))
}

pub(crate) fn m0_scaled(p: &Scaled) -> Matrix7 {
    let g = p.gamma_big;
    let w = p.omega_rabi;
    let d = p.delta_big;
    let w0 = p.omega_zero;
    let z = c(0.0, 0.0);
    let ig2 = c(0.0, g / 2.0);
    let h = c(w / 2.0, 0.0);
    let full = c(w, 0.0);
    #[rustfmt::skip]
    let m = Matrix7::from_row_slice(&[
        ig2,  ig2,   z,            -h,               h,                z,                          z,
        ig2,  ig2,   z,             z,               z,               -h,                          h,
        z,    z,     c(0.0, g),     h,              -h,                z,                          z,
        -h,   z,     h,             c(-d, g / 2.0),  z,                z,                          z,
        h,    z,    -h,             z,               c(d, g / 2.0),    z,                          z,
        -h,  -full, -h,             z,               z,                c(-d - w0, g / 2.0),        z,
        h,    full,  h,             z,               z,                z,                          c(d + w0, g / 2.0),
    ]);
    m
}

pub(crate) fn s0_scaled(p: &Scaled) -> Vector7 {
    let g = p.gamma_big;
    let w = p.omega_rabi;
    Vector7::from_column_slice(&[
        c(0.0, g / 2.0),
        c(0.0, g / 2.0),
        c(0.0, 0.0),
        c(0.0, 0.0),
        c(0.0, 0.0),
        c(-w / 2.0, 0.0),
        c(w / 2.0, 0.0),
    ])
}

pub fn solve_steady_state(config: &PhysicalConfig) -> Result<SteadyState> {
    config.validate()?;
    if config.omega_rabi == 0.0 {
        return Err(Error::SingularSystem {
            condition: f64::INFINITY,
        });
    }
    let p = config.scaled();
    let (inv, condition) = inverse_with_condition(&m0_scaled(&p));
    let inv = match inv {
        Some(inv) if condition <= MAX_CONDITION => inv,
        _ => return Err(Error::SingularSystem { condition }),
    };
    let v = inv * s0_scaled(&p);
    if v.iter().any(|z| !z.is_finite()) {
        return Err(Error::NonFinite("steady-state solve"));
    }
    Ok(SteadyState::from_vector(&v))
}

type Matrix8 = SMatrix<C64, 8, 8>;
type Vector8 = SVector<C64, 8>;

/// Exact time stepping of `i ∂t Σ0 = S0 − M0 Σ0` from all atoms in |2⟩.
///
/// The affine flow is embedded in an 8×8 linear one and the one-step
/// propagator is held as its increment `Q = e^{A dt} − I`, so that
/// `n` steps cost `log2 n` squarings (`Q ← 2Q + Q²`) without rounding away
/// the slow optical-pumping rates against the identity.
#[derive(Debug, Clone)]
pub struct Evolution {
    increment: Matrix8,
    initial: Vector8,
}

impl Evolution {
    /// `dt` in seconds.
    pub fn new(config: &PhysicalConfig, dt: f64) -> Result<Self> {
        config.validate()?;
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "dt",
                reason: format!("{dt} must be positive"),
            });
        }
        let fastest = config
            .omega_rabi
            .max(config.delta_big.abs() + config.omega_zero.abs())
            .max(config.gamma_big);
        if dt * fastest > 1.0 {
            return Err(Error::InvalidParameter {
                name: "dt",
                reason: format!(
                    "dt·max(Ω, |Δ|+ω0, Γ) = {:.3} does not resolve the dynamics",
                    dt * fastest
                ),
            });
        }
        let p = config.scaled();
        let h = dt * config.gamma_big;
        let m0 = m0_scaled(&p);
        let s0 = s0_scaled(&p);
        let i = c(0.0, 1.0);
        let mut a = Matrix8::zeros();
        a.fixed_view_mut::<7, 7>(0, 0).copy_from(&(m0 * (i * h)));
        a.fixed_view_mut::<7, 1>(0, 7).copy_from(&(s0 * (-i * h)));
        let mut initial = Vector8::zeros();
        initial[1] = c(1.0, 0.0);
        initial[7] = c(1.0, 0.0);
        Ok(Self {
            increment: expm1_8(&a),
            initial,
        })
    }

    /// State after `steps` time steps.
    pub fn state_after(&self, steps: u64) -> Vector7 {
        let r = power_increment(&self.increment, steps);
        let y = self.initial + r * self.initial;
        y.fixed_rows::<7>(0).into_owned()
    }
}

/// `e^A − I` by scaling, Taylor series, and increment-form squaring.
fn expm1_8(a: &Matrix8) -> Matrix8 {
    let norm = (0..8)
        .map(|j| a.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let mut squarings = 0;
    let mut scale = 1.0;
    while norm * scale > 0.25 {
        scale *= 0.5;
        squarings += 1;
    }
    let x = a * c(scale, 0.0);
    let mut term = x;
    let mut sum = x;
    for k in 2..=24 {
        term = term * x / c(k as f64, 0.0);
        sum += term;
    }
    for _ in 0..squarings {
        sum = sum * c(2.0, 0.0) + sum * sum;
    }
    sum
}

/// Increment of `(I + q)^n`.
fn power_increment(q: &Matrix8, mut n: u64) -> Matrix8 {
    let mut result = Matrix8::zeros();
    let mut base = *q;
    while n > 0 {
        if n & 1 == 1 {
            result = result + base + result * base;
        }
        n >>= 1;
        if n > 0 {
            base = base * c(2.0, 0.0) + base * base;
        }
    }
    result
}

/// Independent check on [`solve_steady_state`]: evolves from σ22 = 1 for
/// `t_final` seconds in steps of `dt` and returns the final mean values.
pub fn evolve_to_steady_state_oracle(
    config: &PhysicalConfig,
    t_final: f64,
    dt: f64,
) -> Result<SteadyState> {
    let evo = Evolution::new(config, dt)?;
    if !(t_final.is_finite() && t_final > dt) {
        return Err(Error::InvalidParameter {
            name: "t_final",
            reason: format!("{t_final} must exceed dt"),
        });
    }
    let steps = (t_final / dt).round() as u64;
    let end = evo.state_after(steps);
    let earlier = evo.state_after(steps - steps / 10);
    let size = end.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let drift = (end - earlier).iter().map(|z| z.norm()).fold(0.0, f64::max) / size;
    if drift.is_nan() || drift > 1e-6 {
        return Err(Error::NonConvergence {
            relative_change: drift,
        });
    }
    Ok(SteadyState::from_vector(&end))
}
