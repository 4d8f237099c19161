//! Gains, SQL-normalized quadrature spectra and the inseparability witness.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fluctuations::build_fluctuation_system;
use crate::params::PhysicalConfig;
use crate::propagation::{solve_transfer, TransferOptions, TransferSolution};
use crate::steady_state::SteadyState;

/// One grid point of a sweep. Spectra are linear and relative to the SQL.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumRecord {
    pub delta_small: f64,
    pub omega: f64,
    pub gain_a: f64,
    pub gain_b: f64,
    pub s_x_minus: f64,
    pub s_p_plus: f64,
    pub inseparability: f64,
    pub s_xa: f64,
    pub s_pa: f64,
    pub s_xb: f64,
    pub s_pb: f64,
}

/// `(G_a, G_b) = (|A(0)|², |C(0)|²)`.
pub fn gains(ts0: &TransferSolution) -> (f64, f64) {
    (ts0.abcd[(0, 0)].norm_sqr(), ts0.abcd[(1, 0)].norm_sqr())
}

/// The four `(1 + D)` noise weights, in the order they pair with
/// `X(ω)`, `X(−ω)`, `Y(ω)`, `Y(−ω)` for the (A, B) and (C, D) rows.
fn weights(ts: &TransferSolution) -> [f64; 4] {
    [
        1.0 + ts.diff_aa_dag,
        1.0 + ts.diff_dag_aa_mirror,
        1.0 + ts.diff_bdag_b,
        1.0 + ts.diff_b_bdag_mirror,
    ]
}

fn weighted(terms: [C64; 4], w: [f64; 4]) -> f64 {
    terms.iter().zip(w).map(|(t, w)| t.norm_sqr() * w).sum()
}

/// `(s_xa, s_xb)`. The same sums hold for the `p` quadratures, so
/// `s_pa = s_xa` and `s_pb = s_xb`.
pub fn single_beam_spectra(ts: &TransferSolution) -> (f64, f64) {
    let w = weights(ts);
    let p = ts.abcd;
    let m = ts.abcd_minus();
    let a = weighted([p[(0, 0)], m[(0, 0)], p[(0, 1)], m[(0, 1)]], w) / 2.0;
    let b = weighted([p[(1, 0)], m[(1, 0)], p[(1, 1)], m[(1, 1)]], w) / 2.0;
    (a, b)
}

/// `(S_x⁻, S_p⁺)` normalized by `2(G_a + G_b)`.
pub fn correlation_spectra(ts: &TransferSolution, ts0: &TransferSolution) -> (f64, f64) {
    let w = weights(ts);
    let (a0, c0) = (ts0.abcd[(0, 0)], ts0.abcd[(1, 0)]);
    let p = ts.abcd;
    let m = ts.abcd_minus();
    let (a, b, c, d) = (p[(0, 0)], p[(0, 1)], p[(1, 0)], p[(1, 1)]);
    let (am, bm, cm, dm) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    let (ga, gb) = gains(ts0);
    let norm = 2.0 * (ga + gb);
    let sx = weighted(
        [
            a0.conj() * a - c0.conj() * c,
            a0 * am.conj() - c0 * cm.conj(),
            a0.conj() * b - c0.conj() * d,
            a0 * bm.conj() - c0 * dm.conj(),
        ],
        w,
    );
    let sp = weighted(
        [
            a0 * c - c0.conj() * a.conj(),
            a0 * cm.conj() - c0.conj() * am.conj(),
            a0 * d - c0.conj() * b.conj(),
            a0 * dm.conj() - c0.conj() * bm.conj(),
        ],
        w,
    );
    (sx / norm, sp / norm)
}

/// `½(S_x⁻ + S_p⁺)`; below one witnesses entanglement.
pub fn inseparability(s_x_minus: f64, s_p_plus: f64) -> f64 {
    0.5 * (s_x_minus + s_p_plus)
}

pub fn to_decibels(value: f64) -> Result<f64> {
    if value > 0.0 {
        Ok(10.0 * value.log10())
    } else {
        Err(Error::NonPositive(value))
    }
}

/// Assembles a record from the solutions at `ω` and at zero frequency.
pub fn record_from(
    delta_small: f64,
    ts: &TransferSolution,
    ts0: &TransferSolution,
) -> SpectrumRecord {
    let (gain_a, gain_b) = gains(ts0);
    let (s_x_minus, s_p_plus) = correlation_spectra(ts, ts0);
    let (s_xa, s_xb) = single_beam_spectra(ts);
    SpectrumRecord {
        delta_small,
        omega: ts.omega,
        gain_a,
        gain_b,
        s_x_minus,
        s_p_plus,
        inseparability: inseparability(s_x_minus, s_p_plus),
        s_xa,
        s_pa: s_xa,
        s_xb,
        s_pb: s_xb,
    }
}

/// Full pipeline from a steady state to one spectrum record.
pub fn spectrum_record(
    config: &PhysicalConfig,
    steady: &SteadyState,
    omega: f64,
    options: TransferOptions,
) -> Result<SpectrumRecord> {
    let fs = build_fluctuation_system(config, steady)?;
    let quiet = TransferOptions {
        langevin: false,
        ..options
    };
    let ts0 = solve_transfer(config, &fs, 0.0, quiet)?;
    let ts = solve_transfer(config, &fs, omega, options)?;
    let record = record_from(config.delta_small, &ts, &ts0);
    let values = [
        record.gain_a,
        record.gain_b,
        record.s_x_minus,
        record.s_p_plus,
        record.s_xa,
        record.s_xb,
    ];
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("spectrum"));
    }
    Ok(record)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::steady_state::solve_steady_state;
    use nalgebra::Matrix2;
    use proptest::prelude::*;
    use std::f64::consts::TAU;

    fn strong_pump() -> PhysicalConfig {
        PhysicalConfig {
            omega_rabi: TAU * 2e9,
            delta_big: TAU * 2e9,
            delta_small: TAU * -217e6,
            ..PhysicalConfig::default()
        }
    }

    fn ideal(g: f64) -> TransferSolution {
        let a = C64::new(g.sqrt(), 0.0);
        let b = C64::new((g - 1.0).sqrt(), 0.0);
        let m = Matrix2::new(a, b, b, a);
        TransferSolution::noiseless(0.0, m, m)
    }

    #[test]
    fn identity_transfer_sits_at_the_sql() {
        let ts = ideal(1.0);
        assert_eq!(gains(&ts), (1.0, 0.0));
        assert_eq!(single_beam_spectra(&ts), (1.0, 1.0));
        assert_eq!(correlation_spectra(&ts, &ts), (1.0, 1.0));
    }

    #[test]
    fn ideal_amplifier_closure() {
        for g in [1.0, 2.0, 10.0, 100.0] {
            let ts = ideal(g);
            let (sx, sp) = correlation_spectra(&ts, &ts);
            let expected = 1.0 / (2.0 * g - 1.0);
            assert!((sx - expected).abs() < 1e-12, "{g}: {sx}");
            assert!((sp - expected).abs() < 1e-12, "{g}: {sp}");
            let (sa, _) = single_beam_spectra(&ts);
            assert!((sa - (2.0 * g - 1.0)).abs() < 1e-12 * g);
        }
    }

    proptest! {
        #[test]
        fn ideal_amplifier_closure_any_gain(g in 1.0f64..1e4, phase in 0.0f64..TAU) {
            // A common phase on all four entries leaves every spectrum unchanged.
            let mut ts = ideal(g);
            let rot = C64::from_polar(1.0, phase);
            ts.abcd *= rot;
            ts.abcd_conj *= rot.conj();
            let zero = ts;
            let (sx, _) = correlation_spectra(&ts, &zero);
            let expected = 1.0 / (2.0 * g - 1.0);
            prop_assert!((sx - expected).abs() <= 1e-12);
        }
    }

    #[test]
    fn inseparability_and_decibels() {
        assert_eq!(inseparability(1.0, 1.0), 1.0);
        assert_eq!(inseparability(0.5, 1.5), 1.0);
        assert_eq!(to_decibels(1.0).unwrap(), 0.0);
        assert!((to_decibels(0.25).unwrap() + 6.0206).abs() < 1e-4);
        assert!((to_decibels(2.0).unwrap() - 3.0103).abs() < 1e-4);
        assert_eq!(to_decibels(0.0), Err(Error::NonPositive(0.0)));
        assert!(to_decibels(-1.0).is_err());
    }

    #[test]
    fn empty_medium_record_is_vacuum() {
        let cfg = PhysicalConfig {
            optical_depth: 0.0,
            ..strong_pump()
        };
        let ss = solve_steady_state(&cfg).unwrap();
        let r = spectrum_record(&cfg, &ss, TAU * 1e6, TransferOptions::default()).unwrap();
        assert_eq!((r.gain_a, r.gain_b), (1.0, 0.0));
        for v in [r.s_x_minus, r.s_p_plus, r.inseparability, r.s_xa, r.s_pa] {
            assert!((v - 1.0).abs() < 1e-15, "{r:?}");
        }
        assert_eq!(r.s_xb, 1.0);
    }

    #[test]
    fn strong_pump_low_frequency_squeezing() {
        let cfg = strong_pump();
        let ss = solve_steady_state(&cfg).unwrap();
        let r = spectrum_record(&cfg, &ss, TAU * 1e4, TransferOptions::default()).unwrap();
        assert!(to_decibels(r.s_x_minus).unwrap() < -5.5, "{r:?}");
        assert!(r.inseparability < 0.3, "{r:?}");
        assert!(r.s_xa > 1.0 && r.s_pa > 1.0);
    }

    #[test]
    fn langevin_noise_only_adds() {
        let cfg = strong_pump();
        let ss = solve_steady_state(&cfg).unwrap();
        for f in [1e4, 1e5, 1e6, 1e7, 1e8] {
            let with = spectrum_record(&cfg, &ss, TAU * f, TransferOptions::default()).unwrap();
            let without = spectrum_record(
                &cfg,
                &ss,
                TAU * f,
                TransferOptions {
                    langevin: false,
                    ..Default::default()
                },
            )
            .unwrap();
            assert!(with.s_x_minus >= without.s_x_minus);
            assert!(with.s_p_plus >= without.s_p_plus);
            assert!(with.inseparability >= without.inseparability);
            assert!(with.s_xa >= without.s_xa && with.s_xb >= without.s_xb);
        }
    }

    #[test]
    fn spectra_are_even_in_omega() {
        let cfg = strong_pump();
        let ss = solve_steady_state(&cfg).unwrap();
        for f in [3e4, 2e6, 5e7] {
            let p = spectrum_record(&cfg, &ss, TAU * f, TransferOptions::default()).unwrap();
            let m = spectrum_record(&cfg, &ss, -TAU * f, TransferOptions::default()).unwrap();
            // The phase-sum display pairs C(ω) with A(ω)* but C(−ω)* with
            // A(−ω)*, so S_p⁺ carries a small odd part and is left out.
            for (x, y) in [
                (p.s_x_minus, m.s_x_minus),
                (p.s_xa, m.s_xa),
                (p.s_xb, m.s_xb),
            ] {
                assert!((x - y).abs() <= 1e-9 * x, "{f}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn pinned_ground_obeys_beer_lambert() {
        for od in [1.0, 10.0, 150.0] {
            let cfg = PhysicalConfig {
                omega_rabi: 0.0,
                delta_big: 0.0,
                delta_small: 0.0,
                optical_depth: od,
                ..PhysicalConfig::default()
            };
            let r = spectrum_record(
                &cfg,
                &SteadyState::pinned_ground(),
                0.0,
                TransferOptions {
                    langevin: false,
                    ..Default::default()
                },
            )
            .unwrap();
            assert!((r.gain_a.ln() + od).abs() < 0.01 * od, "{od}: {}", r.gain_a);
        }
    }
}
