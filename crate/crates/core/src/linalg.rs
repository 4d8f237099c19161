//! Small dense helpers: complex 2×2 exponentials and condition estimates.

use nalgebra::{DMatrix, Matrix2, SMatrix};
use num_complex::Complex64 as C64;

/// Relative eigenvalue gap below which the 2×2 exponential switches from the
/// spectral projector form to the series form.
const DEGENERACY_GAP: f64 = 1e-8;

pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Maximum column sum of moduli.
pub fn norm1<const N: usize>(m: &SMatrix<C64, N, N>) -> f64 {
    (0..N)
        .map(|j| m.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Inverts `m` by LU with partial pivoting and returns the inverse with the
/// 1-norm condition number `‖m‖₁‖m⁻¹‖₁`. A singular or non-finite inverse
/// reports an infinite condition number.
pub fn inverse_with_condition<const N: usize>(
    m: &SMatrix<C64, N, N>,
) -> (Option<SMatrix<C64, N, N>>, f64) {
    let dynamic = DMatrix::from_column_slice(N, N, m.as_slice());
    match dynamic.lu().try_inverse() {
        Some(inv) if inv.iter().all(|z| z.is_finite()) => {
            let inv = SMatrix::<C64, N, N>::from_column_slice(inv.as_slice());
            let cond = norm1(m) * norm1(&inv);
            (Some(inv), cond)
        }
        _ => (None, f64::INFINITY),
    }
}

/// `sinh(x)/x`, continuous through zero.
fn sinhc(x: C64) -> C64 {
    if x.norm() < 1e-3 {
        let x2 = x * x;
        C64::new(1.0, 0.0) + x2 / 6.0 + x2 * x2 / 120.0 + x2 * x2 * x2 / 5040.0
    } else {
        x.sinh() / x
    }
}

/// Closed-form exponential of `t·M` for a fixed 2×2 matrix `M`, reusable for
/// many `t`.
#[derive(Debug, Clone)]
pub struct Exp2 {
    kind: Exp2Kind,
}

#[derive(Debug, Clone)]
enum Exp2Kind {
    /// exp(tM) = Σ e^{λ_k t} P_k
    Spectral {
        lambda: [C64; 2],
        projector: [Matrix2<C64>; 2],
    },
    /// exp(tM) = e^{st} [cosh(qt) I + t sinhc(qt) (M − sI)], with (M − sI)² = q² I.
    Degenerate {
        shift: C64,
        q: C64,
        traceless: Matrix2<C64>,
    },
}

impl Exp2 {
    pub fn new(m: &Matrix2<C64>) -> Self {
        let shift = (m[(0, 0)] + m[(1, 1)]) * 0.5;
        let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
        let q = (shift * shift - det).sqrt();
        let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let id = Matrix2::<C64>::identity();
        if (2.0 * q).norm() <= DEGENERACY_GAP * scale {
            return Self {
                kind: Exp2Kind::Degenerate {
                    shift,
                    q,
                    traceless: m - id * shift,
                },
            };
        }
        let l1 = shift + q;
        let l2 = shift - q;
        let p1 = (m - id * l2) / (l1 - l2);
        let p2 = (m - id * l1) / (l2 - l1);
        Self {
            kind: Exp2Kind::Spectral {
                lambda: [l1, l2],
                projector: [p1, p2],
            },
        }
    }

    pub fn at(&self, t: f64) -> Matrix2<C64> {
        match &self.kind {
            Exp2Kind::Spectral { lambda, projector } => {
                projector[0] * (lambda[0] * t).exp() + projector[1] * (lambda[1] * t).exp()
            }
            Exp2Kind::Degenerate {
                shift,
                q,
                traceless,
            } => {
                let qt = q * t;
                let id = Matrix2::<C64>::identity();
                (id * qt.cosh() + traceless * (sinhc(qt) * t)) * (shift * t).exp()
            }
        }
    }
}

/// Matrix exponential of a complex 2×2 matrix.
pub fn expm2(m: &Matrix2<C64>) -> Matrix2<C64> {
    Exp2::new(m).at(1.0)
}
