//! Propagation of the probe and conjugate fields through the pumped medium.
//!
//! In internal units the fields obey `∂z (a, b†)ᵀ = M(ω) (a, b†)ᵀ + forces`
//! on `z ∈ [0, 1]`, with
//! `M(ω) = −iκ T (M1 + ω)⁻¹ S1` and `T = [[−1, 0, 0, 0], [0, 1, 0, 0]]`.
//! The output is `e^{M} (input + ∫₀¹ e^{−M u} F(u) du)`. The Langevin
//! diffusion scalars are the input-referred variances of that integral.

use nalgebra::{Matrix2, Matrix2x4, Matrix4};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fluctuations::FluctuationSystem;
use crate::linalg::{c, expm2, inverse_with_condition, Exp2};
use crate::params::PhysicalConfig;
use crate::quadrature::GaussLegendre;

/// Condition-number ceiling for `(M1 + ω)`.
pub const MAX_CONDITION: f64 = 1e12;
/// Largest order the quadrature doubling may reach.
pub const MAX_QUAD_ORDER: usize = 1024;
pub const DEFAULT_QUAD_ORDER: usize = 64;
const QUAD_TOLERANCE: f64 = 1e-8;

fn projection() -> Matrix2x4<C64> {
    let z = c(0.0, 0.0);
    Matrix2x4::new(c(-1.0, 0.0), z, z, z, z, c(1.0, 0.0), z, z)
}

/// Generator and force projection of one propagation chain.
#[derive(Debug, Clone, Copy)]
struct Chain {
    generator: Matrix2<C64>,
    /// `T (M1 + ω)⁻¹`; the forces entering the fields are `√κ` times this
    /// applied to the atomic Langevin forces.
    forces: Matrix2x4<C64>,
}

impl Chain {
    fn direct(fs: &FluctuationSystem, kappa: f64, w: f64, omega: f64) -> Result<Self> {
        let shifted = fs.m1 + Matrix4::identity() * c(w, 0.0);
        let (inv, condition) = inverse_with_condition(&shifted);
        let inv = match inv {
            Some(inv) if condition <= MAX_CONDITION => inv,
            _ => return Err(Error::ResonantSingularity { omega, condition }),
        };
        let forces = projection() * inv;
        Ok(Self {
            generator: forces * fs.s1 * c(0.0, -kappa),
            forces,
        })
    }

    /// Chain of the adjoint fields `(a†, b)`: every coefficient conjugated.
    fn adjoint(&self) -> Self {
        Self {
            generator: self.generator.conjugate(),
            forces: self.forces.conjugate(),
        }
    }
}

/// `M(ω)` for a unit-length medium, `omega` in rad/s.
pub fn propagation_generator(
    config: &PhysicalConfig,
    fs: &FluctuationSystem,
    omega: f64,
) -> Result<Matrix2<C64>> {
    config.validate()?;
    let kappa = config.scaled().coupling();
    Ok(Chain::direct(fs, kappa, omega / config.gamma_big, omega)?.generator)
}

/// `e^{M}` over the whole medium.
pub fn transfer_matrix(generator: &Matrix2<C64>) -> Matrix2<C64> {
    expm2(generator)
}

/// `2 ∫₀¹ e^{−M u} N e^{−M† u} du` with `N = κ F D F†`.
fn noise_integral(
    chain: &Chain,
    diffusion: &Matrix4<C64>,
    kappa: f64,
    order: usize,
) -> Matrix2<C64> {
    let n = chain.forces * diffusion * chain.forces.adjoint() * c(kappa, 0.0);
    let decay = Exp2::new(&(-chain.generator));
    let rule = GaussLegendre::shared(order);
    let mut acc = Matrix2::zeros();
    for (u, w) in rule.iter() {
        let e = decay.at(u);
        acc += (e * n * e.adjoint()) * c(w, 0.0);
    }
    acc * c(2.0, 0.0)
}

/// Relative change of the diagonal entries between two estimates.
fn diagonal_change(a: &Matrix2<C64>, b: &Matrix2<C64>) -> f64 {
    (0..2)
        .map(|k| {
            let diff = (a[(k, k)] - b[(k, k)]).norm();
            if diff == 0.0 {
                0.0
            } else {
                diff / a[(k, k)].norm().max(b[(k, k)].norm())
            }
        })
        .fold(0.0, f64::max)
}

/// Integrates at `order` and `2·order`, doubling further until the diagonal
/// agrees to 1e-8. Returns the finer estimate and its order.
fn converged_noise(
    chain: &Chain,
    diffusion: &Matrix4<C64>,
    kappa: f64,
    order: usize,
) -> Result<(Matrix2<C64>, usize)> {
    let mut n = order.max(1);
    let mut coarse = noise_integral(chain, diffusion, kappa, n);
    loop {
        let fine = noise_integral(chain, diffusion, kappa, 2 * n);
        let change = diagonal_change(&coarse, &fine);
        if fine.iter().any(|z| !z.is_finite()) {
            return Err(Error::NonFinite("Langevin diffusion integral"));
        }
        if change <= QUAD_TOLERANCE {
            return Ok((fine, 2 * n));
        }
        if 2 * n >= MAX_QUAD_ORDER {
            return Err(Error::QuadratureNotConverged {
                order: 2 * n,
                relative_change: change,
            });
        }
        n *= 2;
        coarse = fine;
    }
}

/// The four output diffusion scalars at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LangevinDiffusion {
    /// D_{aa†}: (1,1) entry of the direct chain.
    pub aa_dag: f64,
    /// D_{a†a}: (1,1) entry of the adjoint chain.
    pub dag_aa: f64,
    /// D_{b†b}: (2,2) entry of the direct chain.
    pub bdag_b: f64,
    /// D_{bb†}: (2,2) entry of the adjoint chain.
    pub b_bdag: f64,
    /// Largest `|Im|/|Re|` seen among the four before taking real parts.
    pub imag_ratio: f64,
    /// Quadrature order actually used.
    pub order: usize,
}

impl LangevinDiffusion {
    const ZERO: Self = Self {
        aa_dag: 0.0,
        dag_aa: 0.0,
        bdag_b: 0.0,
        b_bdag: 0.0,
        imag_ratio: 0.0,
        order: 0,
    };

    fn from_chains(
        direct: &Chain,
        diffusion: &Matrix4<C64>,
        kappa: f64,
        order: usize,
    ) -> Result<Self> {
        let (q, n1) = converged_noise(direct, diffusion, kappa, order)?;
        let (qa, n2) = converged_noise(&direct.adjoint(), &diffusion.conjugate(), kappa, order)?;
        let raw = [q[(0, 0)], qa[(0, 0)], q[(1, 1)], qa[(1, 1)]];
        let imag_ratio = raw
            .iter()
            .map(|z| {
                if z.im == 0.0 {
                    0.0
                } else {
                    z.im.abs() / z.norm()
                }
            })
            .fold(0.0, f64::max);
        Ok(Self {
            aa_dag: raw[0].re,
            dag_aa: raw[1].re,
            bdag_b: raw[2].re,
            b_bdag: raw[3].re,
            imag_ratio,
            order: n1.max(n2),
        })
    }
}

/// Diffusion scalars at `omega` (rad/s) starting from `quad_order` nodes.
pub fn langevin_diffusion(
    config: &PhysicalConfig,
    fs: &FluctuationSystem,
    omega: f64,
    quad_order: usize,
) -> Result<LangevinDiffusion> {
    config.validate()?;
    let kappa = config.scaled().coupling();
    let chain = Chain::direct(fs, kappa, omega / config.gamma_big, omega)?;
    LangevinDiffusion::from_chains(&chain, &fs.diffusion, kappa, quad_order)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferOptions {
    pub langevin: bool,
    pub quad_order: usize,
}

impl Default for TransferOptions {
    fn default() -> Self {
        Self {
            langevin: true,
            quad_order: DEFAULT_QUAD_ORDER,
        }
    }
}

/// Everything the spectra need at one analysis frequency, including the
/// mirrored adjoint data at `−ω`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferSolution {
    pub omega: f64,
    /// `[[A(ω), B(ω)], [C(ω), D(ω)]]`
    pub abcd: Matrix2<C64>,
    /// `exp(M*(−ω))`, the adjoint-field transfer at `−ω`.
    pub abcd_conj: Matrix2<C64>,
    pub diff_aa_dag: f64,
    pub diff_dag_aa: f64,
    pub diff_bdag_b: f64,
    pub diff_b_bdag: f64,
    /// D_{a†a}(−ω), paired with |A(−ω)|².
    pub diff_dag_aa_mirror: f64,
    /// D_{bb†}(−ω), paired with |B(−ω)|² and |D(−ω)|².
    pub diff_b_bdag_mirror: f64,
    pub diffusion_imag_ratio: f64,
}

impl TransferSolution {
    /// A noiseless solution with prescribed transfer matrices at `±ω`.
    pub fn noiseless(omega: f64, abcd: Matrix2<C64>, abcd_minus: Matrix2<C64>) -> Self {
        Self {
            omega,
            abcd,
            abcd_conj: abcd_minus.conjugate(),
            diff_aa_dag: 0.0,
            diff_dag_aa: 0.0,
            diff_bdag_b: 0.0,
            diff_b_bdag: 0.0,
            diff_dag_aa_mirror: 0.0,
            diff_b_bdag_mirror: 0.0,
            diffusion_imag_ratio: 0.0,
        }
    }

    /// `[[A(−ω), B(−ω)], [C(−ω), D(−ω)]]`
    pub fn abcd_minus(&self) -> Matrix2<C64> {
        self.abcd_conj.conjugate()
    }
}

pub fn solve_transfer(
    config: &PhysicalConfig,
    fs: &FluctuationSystem,
    omega: f64,
    options: TransferOptions,
) -> Result<TransferSolution> {
    config.validate()?;
    let kappa = config.scaled().coupling();
    let w = omega / config.gamma_big;
    let plus = Chain::direct(fs, kappa, w, omega)?;
    let minus = if omega == 0.0 {
        plus
    } else {
        Chain::direct(fs, kappa, -w, -omega)?
    };
    let abcd = transfer_matrix(&plus.generator);
    let abcd_conj = transfer_matrix(&minus.generator.conjugate());
    if abcd.iter().chain(abcd_conj.iter()).any(|z| !z.is_finite()) {
        return Err(Error::NonFinite("transfer matrix"));
    }
    let (here, mirror) = if options.langevin {
        let here = LangevinDiffusion::from_chains(&plus, &fs.diffusion, kappa, options.quad_order)?;
        let mirror = if omega == 0.0 {
            here
        } else {
            LangevinDiffusion::from_chains(&minus, &fs.diffusion, kappa, options.quad_order)?
        };
        (here, mirror)
    } else {
        (LangevinDiffusion::ZERO, LangevinDiffusion::ZERO)
    };
    Ok(TransferSolution {
        omega,
        abcd,
        abcd_conj,
        diff_aa_dag: here.aa_dag,
        diff_dag_aa: here.dag_aa,
        diff_bdag_b: here.bdag_b,
        diff_b_bdag: here.b_bdag,
        diff_dag_aa_mirror: mirror.dag_aa,
        diff_b_bdag_mirror: mirror.b_bdag,
        diffusion_imag_ratio: here.imag_ratio.max(mirror.imag_ratio),
    })
}
