//! Parameter sweeps, figure presets, CSV output and the δ optimizer.

use std::f64::consts::TAU;
use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fluctuations::build_fluctuation_system;
use crate::observables::{gains, spectrum_record, to_decibels, SpectrumRecord};
use crate::params::PhysicalConfig;
use crate::propagation::{solve_transfer, TransferOptions};
use crate::steady_state::{solve_steady_state, SteadyState};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    DeltaSmall,
    Omega,
    GammaSmall,
    OmegaRabi,
    DeltaBig,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::DeltaSmall => "delta_small",
            Axis::Omega => "omega",
            Axis::GammaSmall => "gamma_small",
            Axis::OmegaRabi => "omega_rabi",
            Axis::DeltaBig => "delta_big",
        }
    }

    /// Axes without a dedicated CSV column get a trailing one.
    fn has_own_column(self) -> bool {
        matches!(self, Axis::DeltaSmall | Axis::Omega)
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            Axis::DeltaSmall,
            Axis::Omega,
            Axis::GammaSmall,
            Axis::OmegaRabi,
            Axis::DeltaBig,
        ]
        .into_iter()
        .find(|a| a.name() == s)
        .ok_or_else(|| Error::InvalidSweep(format!("unknown axis '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Linear,
    Log,
}

impl FromStr for Scale {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" | "lin" => Ok(Scale::Linear),
            "log" => Ok(Scale::Log),
            _ => Err(Error::InvalidSweep(format!("unknown scale '{s}'"))),
        }
    }
}

/// One swept axis. `start` and `stop` are angular frequencies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub axis: Axis,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub scale: Scale,
}

impl SweepSpec {
    pub fn new(axis: Axis, start: f64, stop: f64, points: usize, scale: Scale) -> Result<Self> {
        let spec = Self {
            axis,
            start,
            stop,
            points,
            scale,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.points < 2 {
            return Err(Error::InvalidSweep(format!(
                "{} needs at least 2 points",
                self.axis
            )));
        }
        if !(self.start.is_finite() && self.stop.is_finite() && self.start < self.stop) {
            return Err(Error::InvalidSweep(format!(
                "{} needs start < stop",
                self.axis
            )));
        }
        if self.scale == Scale::Log && self.start <= 0.0 {
            return Err(Error::InvalidSweep(format!(
                "log {} needs start > 0",
                self.axis
            )));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|k| {
                let t = k as f64 / last;
                match self.scale {
                    Scale::Linear => self.start + (self.stop - self.start) * t,
                    Scale::Log => self.start * (self.stop / self.start).powf(t),
                }
            })
            .collect()
    }
}

impl FromStr for SweepSpec {
    type Err = Error;

    /// `axis:start_hz:stop_hz:points:scale`
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [axis, start, stop, points, scale] = parts.as_slice() else {
            return Err(Error::InvalidSweep(format!(
                "'{s}' is not axis:start:stop:points:scale"
            )));
        };
        let number = |v: &str| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidSweep(format!("'{v}' is not a number")))
        };
        let points = points
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::InvalidSweep(format!("'{points}' is not a point count")))?;
        Self::new(
            axis.trim().parse()?,
            TAU * number(start)?,
            TAU * number(stop)?,
            points,
            scale.trim().parse()?,
        )
    }
}

pub const QUAD_ORDERS: [usize; 5] = [16, 32, 64, 128, 256];

#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub config: PhysicalConfig,
    /// Outer axis first.
    pub sweeps: Vec<SweepSpec>,
    pub langevin_enabled: bool,
    pub quad_order: usize,
    /// `None` writes to standard output.
    pub output_path: Option<PathBuf>,
    /// Analysis frequency (rad/s) when ω is not swept.
    pub analysis_omega: f64,
    /// Use σ22 = 1 instead of solving for the steady state.
    pub pinned_ground: bool,
}

impl Default for RunManifest {
    fn default() -> Self {
        Self {
            config: PhysicalConfig::default(),
            sweeps: Vec::new(),
            langevin_enabled: true,
            quad_order: 64,
            output_path: None,
            analysis_omega: TAU * 1e6,
            pinned_ground: false,
        }
    }
}

pub const PRESETS: [&str; 6] = ["fig2", "fig3a", "fig3b", "fig4", "fig5", "fig6"];

/// Analysis-frequency sweep used by the correlation presets.
pub fn default_omega_sweep() -> SweepSpec {
    SweepSpec {
        axis: Axis::Omega,
        start: TAU * 0.01e6,
        stop: TAU * 100e6,
        points: 200,
        scale: Scale::Log,
    }
}

/// Strong-pump parameters with the best squeezing.
pub fn strong_pump_config() -> PhysicalConfig {
    PhysicalConfig {
        omega_rabi: TAU * 2e9,
        delta_big: TAU * 2e9,
        delta_small: TAU * -217e6,
        ..PhysicalConfig::default()
    }
}

pub fn weak_pump_config() -> PhysicalConfig {
    PhysicalConfig {
        omega_rabi: TAU * 0.3e9,
        delta_big: TAU * 0.3e9,
        delta_small: TAU * -48e6,
        ..PhysicalConfig::default()
    }
}

/// Hot-vapor gain scan: 𝒩 = 4e12 cm⁻³, σ0 = 1e-9 cm², L = 1.25 cm.
pub fn hot_vapor_config() -> PhysicalConfig {
    PhysicalConfig {
        gamma_small: TAU * 500e3,
        omega_rabi: TAU * 330e6,
        delta_big: TAU * 700e6,
        optical_depth: 4e12 * 1e-9 * 1.25,
        length: 12.5e-3,
        ..PhysicalConfig::default()
    }
}

impl RunManifest {
    pub fn preset(name: &str) -> Result<Self> {
        let base = Self::default();
        let delta_scan = |start: f64, stop: f64, points| SweepSpec {
            axis: Axis::DeltaSmall,
            start: TAU * start,
            stop: TAU * stop,
            points,
            scale: Scale::Linear,
        };
        let manifest = match name {
            "fig2" => Self {
                sweeps: vec![delta_scan(-0.2e9, 1.5e9, 2000)],
                langevin_enabled: false,
                ..base
            },
            "fig3a" => Self {
                config: weak_pump_config(),
                sweeps: vec![default_omega_sweep()],
                ..base
            },
            "fig3b" | "fig4" => Self {
                config: strong_pump_config(),
                sweeps: vec![default_omega_sweep()],
                ..base
            },
            "fig5" => Self {
                config: strong_pump_config(),
                sweeps: vec![SweepSpec {
                    axis: Axis::GammaSmall,
                    start: TAU * 10.0,
                    stop: TAU * 100e6,
                    points: 71,
                    scale: Scale::Log,
                }],
                ..base
            },
            "fig6" => Self {
                config: hot_vapor_config(),
                sweeps: vec![delta_scan(-7e9, 2e9, 4000)],
                langevin_enabled: false,
                ..base
            },
            _ => {
                return Err(Error::Config(format!(
                    "unknown preset '{name}' (expected one of {})",
                    PRESETS.join(", ")
                )))
            }
        };
        Ok(manifest)
    }

    pub fn validate(&self) -> Result<()> {
        self.config.validate()?;
        if self.sweeps.len() > 2 {
            return Err(Error::InvalidSweep("at most two sweep axes".into()));
        }
        for s in &self.sweeps {
            s.validate()?;
        }
        if self.sweeps.len() == 2 && self.sweeps[0].axis == self.sweeps[1].axis {
            return Err(Error::InvalidSweep("the two sweeps share an axis".into()));
        }
        if !QUAD_ORDERS.contains(&self.quad_order) {
            return Err(Error::InvalidParameter {
                name: "quad_order",
                reason: format!("{} is not one of {QUAD_ORDERS:?}", self.quad_order),
            });
        }
        if !self.analysis_omega.is_finite() {
            return Err(Error::InvalidParameter {
                name: "analysis_omega",
                reason: "must be finite".into(),
            });
        }
        Ok(())
    }

    /// Axes that get a trailing CSV column.
    pub fn extra_axes(&self) -> Vec<Axis> {
        self.sweeps
            .iter()
            .map(|s| s.axis)
            .filter(|a| !a.has_own_column())
            .collect()
    }

    fn grid(&self) -> Vec<Vec<(Axis, f64)>> {
        let mut grid = vec![Vec::new()];
        for spec in &self.sweeps {
            let values = spec.values();
            grid = grid
                .into_iter()
                .flat_map(|prefix| {
                    values.iter().map(move |&v| {
                        let mut point = prefix.clone();
                        point.push((spec.axis, v));
                        point
                    })
                })
                .collect();
        }
        grid
    }
}

/// A sweep result. Failed points keep whatever could be computed and carry
/// the error text; missing values are NaN.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub record: SpectrumRecord,
    /// Values of the swept axes without their own column, in manifest order.
    pub extra: Vec<f64>,
    pub error: Option<String>,
}

fn apply(config: &mut PhysicalConfig, omega: &mut f64, axis: Axis, value: f64) {
    match axis {
        Axis::DeltaSmall => config.delta_small = value,
        Axis::Omega => *omega = value,
        Axis::GammaSmall => config.gamma_small = value,
        Axis::OmegaRabi => config.omega_rabi = value,
        Axis::DeltaBig => config.delta_big = value,
    }
}

fn steady_state(config: &PhysicalConfig, pinned: bool) -> Result<SteadyState> {
    if pinned {
        config.validate()?;
        Ok(SteadyState::pinned_ground())
    } else {
        solve_steady_state(config)
    }
}

/// Gains alone, used to salvage failed grid points.
fn gains_only(config: &PhysicalConfig, pinned: bool) -> Result<(f64, f64)> {
    let ss = steady_state(config, pinned)?;
    let fs = build_fluctuation_system(config, &ss)?;
    let quiet = TransferOptions {
        langevin: false,
        quad_order: 64,
    };
    Ok(gains(&solve_transfer(config, &fs, 0.0, quiet)?))
}

fn evaluate(manifest: &RunManifest, point: &[(Axis, f64)]) -> SweepRow {
    let mut config = manifest.config;
    let mut omega = manifest.analysis_omega;
    for &(axis, value) in point {
        apply(&mut config, &mut omega, axis, value);
    }
    let extra = point
        .iter()
        .filter(|(a, _)| !a.has_own_column())
        .map(|&(_, v)| v)
        .collect();
    let options = TransferOptions {
        langevin: manifest.langevin_enabled,
        quad_order: manifest.quad_order,
    };
    let result = steady_state(&config, manifest.pinned_ground)
        .and_then(|ss| spectrum_record(&config, &ss, omega, options));
    match result {
        Ok(record) => SweepRow {
            record,
            extra,
            error: None,
        },
        Err(e) => {
            let (gain_a, gain_b) =
                gains_only(&config, manifest.pinned_ground).unwrap_or((f64::NAN, f64::NAN));
            SweepRow {
                record: SpectrumRecord {
                    delta_small: config.delta_small,
                    omega,
                    gain_a,
                    gain_b,
                    s_x_minus: f64::NAN,
                    s_p_plus: f64::NAN,
                    inseparability: f64::NAN,
                    s_xa: f64::NAN,
                    s_pa: f64::NAN,
                    s_xb: f64::NAN,
                    s_pb: f64::NAN,
                },
                extra,
                error: Some(e.to_string()),
            }
        }
    }
}

/// Worker count from `SIM_THREADS`, or rayon's default when unset.
pub fn thread_count() -> Option<usize> {
    std::env::var("SIM_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}

/// Evaluates every grid point, outer axis major. Point failures become rows.
pub fn run_sweep(manifest: &RunManifest) -> Result<Vec<SweepRow>> {
    run_sweep_with_threads(manifest, thread_count())
}

pub fn run_sweep_with_threads(
    manifest: &RunManifest,
    threads: Option<usize>,
) -> Result<Vec<SweepRow>> {
    manifest.validate()?;
    let grid = manifest.grid();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
    Ok(pool.install(|| grid.par_iter().map(|p| evaluate(manifest, p)).collect()))
}

pub const CSV_COLUMNS: [&str; 12] = [
    "delta_small_hz",
    "omega_hz",
    "gain_a",
    "gain_b",
    "s_x_minus_db",
    "s_p_plus_db",
    "inseparability",
    "s_xa",
    "s_pa",
    "s_xb",
    "s_pb",
    "error",
];

fn number(v: f64) -> String {
    if v.is_nan() {
        String::new()
    } else {
        v.to_string()
    }
}

fn decibels(v: f64) -> String {
    if v.is_nan() {
        String::new()
    } else {
        to_decibels(v).map(|db| db.to_string()).unwrap_or_default()
    }
}

pub fn write_csv<W: Write>(rows: &[SweepRow], extra_axes: &[Axis], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = CSV_COLUMNS.iter().map(|s| s.to_string()).collect();
    header.extend(extra_axes.iter().map(|a| format!("{a}_hz")));
    w.write_record(&header)?;
    for row in rows {
        let r = &row.record;
        let mut fields = vec![
            number(r.delta_small / TAU),
            number(r.omega / TAU),
            number(r.gain_a),
            number(r.gain_b),
            decibels(r.s_x_minus),
            decibels(r.s_p_plus),
            number(r.inseparability),
            number(r.s_xa),
            number(r.s_pa),
            number(r.s_xb),
            number(r.s_pb),
            row.error.clone().unwrap_or_default(),
        ];
        fields.extend(row.extra.iter().map(|&v| number(v / TAU)));
        w.write_record(&fields)?;
    }
    w.flush()?;
    Ok(())
}

/// Tolerance on the optimal δ.
pub const DELTA_TOLERANCE: f64 = TAU * 0.1e6;
const SCAN_POINTS: usize = 4001;
const REFINED_MINIMA: usize = 5;

/// Location of the largest probe gain for `|δ| ≤ Ω`.
pub fn gain_maximum(config: &PhysicalConfig) -> Result<f64> {
    config.validate()?;
    let half = config.omega_rabi.max(config.gamma_big);
    let step = 2.0 * half / (SCAN_POINTS - 1) as f64;
    let gain = |delta: f64| -> f64 {
        let cfg = PhysicalConfig {
            delta_small: delta,
            ..*config
        };
        gains_only(&cfg, false).map(|g| g.0).unwrap_or(f64::NAN)
    };
    let samples: Vec<(f64, f64)> = (0..SCAN_POINTS)
        .into_par_iter()
        .map(|k| {
            let d = -half + step * k as f64;
            (d, gain(d))
        })
        .collect();
    let best = samples
        .iter()
        .filter(|(_, g)| g.is_finite())
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .ok_or(Error::NonFinite("gain scan"))?;
    let (d, _) = golden_section(best.0 - step, best.0 + step, DELTA_TOLERANCE / 10.0, |d| {
        -gain(d)
    });
    Ok(d)
}

/// Minimizes `f` on `[a, b]`; NaN counts as +∞.
fn golden_section(mut a: f64, mut b: f64, tol: f64, f: impl Fn(f64) -> f64) -> (f64, f64) {
    let eval = |x: f64| {
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - ratio * (b - a);
    let mut x2 = a + ratio * (b - a);
    let (mut f1, mut f2) = (eval(x1), eval(x2));
    while b - a > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = eval(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = eval(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Inseparability at fixed `omega` as a function of δ.
pub fn inseparability_at(config: &PhysicalConfig, delta_small: f64, omega: f64) -> Result<f64> {
    let cfg = PhysicalConfig {
        delta_small,
        ..*config
    };
    let ss = solve_steady_state(&cfg)?;
    Ok(spectrum_record(&cfg, &ss, omega, TransferOptions::default())?.inseparability)
}

/// Best two-photon detuning for entanglement at `omega_fixed`, searched
/// within ±Ω of the gain maximum. Returns `(δ_opt, 𝓘(δ_opt))`.
pub fn optimize_delta(config: &PhysicalConfig, omega_fixed: f64) -> Result<(f64, f64)> {
    config.validate()?;
    if !(omega_fixed > 0.0 && omega_fixed.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "omega_fixed",
            reason: format!("{omega_fixed} must be positive"),
        });
    }
    let center = gain_maximum(config)?;
    let half = config.omega_rabi.max(config.gamma_big);
    let (lo, hi) = (center - half, center + half);
    let step = (hi - lo) / (SCAN_POINTS - 1) as f64;
    let insep = |d: f64| inseparability_at(config, d, omega_fixed).unwrap_or(f64::NAN);
    let samples: Vec<(f64, f64)> = (0..SCAN_POINTS)
        .into_par_iter()
        .map(|k| {
            let d = lo + step * k as f64;
            (d, insep(d))
        })
        .collect();
    let finite = |v: f64| if v.is_nan() { f64::INFINITY } else { v };
    let mut minima: Vec<(f64, f64)> = (0..samples.len())
        .filter(|&k| {
            let v = finite(samples[k].1);
            let left = if k > 0 {
                finite(samples[k - 1].1)
            } else {
                f64::INFINITY
            };
            let right = samples.get(k + 1).map_or(f64::INFINITY, |s| finite(s.1));
            v.is_finite() && v <= left && v <= right
        })
        .map(|k| samples[k])
        .collect();
    minima.sort_by(|a, b| a.1.total_cmp(&b.1));
    minima.truncate(REFINED_MINIMA);
    let best = minima
        .par_iter()
        .map(|&(d, v)| {
            let (x, fx) = golden_section(
                (d - step).max(lo),
                (d + step).min(hi),
                DELTA_TOLERANCE,
                insep,
            );
            if fx <= v {
                (x, fx)
            } else {
                (d, v)
            }
        })
        .min_by(|a, b| a.1.total_cmp(&b.1));
    match best {
        Some((d, v)) if v < 1.0 => Ok((d, v)),
        Some((_, v)) => Err(Error::NoMinimum { best: v }),
        None => Err(Error::NoMinimum { best: f64::NAN }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sweep_in_hertz() {
        let s: SweepSpec = "delta_small:-2e8:1.5e9:11:linear".parse().unwrap();
        assert_eq!(s.axis, Axis::DeltaSmall);
        assert_eq!(s.start, TAU * -2e8);
        assert_eq!(s.points, 11);
        let v = s.values();
        assert_eq!(v.len(), 11);
        assert_eq!(v[0], s.start);
        assert!((v[10] - s.stop).abs() < 1e-6);
    }

    #[test]
    fn log_values_are_geometric() {
        let s: SweepSpec = "omega:1e4:1e8:5:log".parse().unwrap();
        let v = s.values();
        for (k, value) in v.iter().enumerate() {
            let expected = TAU * 1e4 * 10f64.powi(k as i32);
            assert!((value - expected).abs() < 1e-9 * expected);
        }
    }

    #[test]
    fn rejects_bad_sweeps() {
        for bad in [
            "omega:1:2:1:log",
            "omega:2:1:5:linear",
            "omega:0:1:5:log",
            "omega:-1:1:5:log",
            "detuning:1:2:5:log",
            "omega:1:2:5:cubic",
            "omega:1:2:5",
            "omega:a:2:5:log",
        ] {
            assert!(
                matches!(bad.parse::<SweepSpec>(), Err(Error::InvalidSweep(_))),
                "{bad}"
            );
        }
    }

    #[test]
    fn manifest_limits() {
        let mut m = RunManifest {
            quad_order: 48,
            ..RunManifest::default()
        };
        assert!(matches!(
            m.validate(),
            Err(Error::InvalidParameter {
                name: "quad_order",
                ..
            })
        ));
        m.quad_order = 128;
        let s = default_omega_sweep();
        m.sweeps = vec![s, s];
        assert!(m.validate().is_err());
        let d: SweepSpec = "delta_small:-1e6:1e6:3:linear".parse().unwrap();
        let g: SweepSpec = "gamma_small:1:10:2:log".parse().unwrap();
        m.sweeps = vec![d, s, g];
        assert!(m.validate().is_err());
    }

    #[test]
    fn grid_is_outer_major() {
        let m = RunManifest {
            sweeps: vec![
                "delta_small:-1e6:1e6:3:linear".parse().unwrap(),
                "omega:1e5:1e6:2:log".parse().unwrap(),
            ],
            ..RunManifest::default()
        };
        let g = m.grid();
        assert_eq!(g.len(), 6);
        assert_eq!(g[0][0].1, g[1][0].1);
        assert_ne!(g[0][1].1, g[1][1].1);
        assert_eq!(g[2][0].1, 0.0);
    }

    #[test]
    fn presets_exist_and_validate() {
        for p in PRESETS {
            RunManifest::preset(p).unwrap().validate().unwrap();
        }
        assert!(matches!(RunManifest::preset("fig9"), Err(Error::Config(_))));
        let fig6 = RunManifest::preset("fig6").unwrap();
        assert!((fig6.config.optical_depth - 5000.0).abs() < 1e-9);
    }

    #[test]
    fn empty_medium_single_point_is_vacuum() {
        let m = RunManifest {
            config: PhysicalConfig {
                optical_depth: 0.0,
                ..PhysicalConfig::default()
            },
            ..RunManifest::default()
        };
        let rows = run_sweep(&m).unwrap();
        assert_eq!(rows.len(), 1);
        let r = rows[0].record;
        assert_eq!((r.gain_a, r.gain_b), (1.0, 0.0));
        for v in [
            r.s_x_minus,
            r.s_p_plus,
            r.inseparability,
            r.s_xa,
            r.s_pa,
            r.s_xb,
            r.s_pb,
        ] {
            assert!((v - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn point_failures_become_rows() {
        let m = RunManifest {
            config: PhysicalConfig {
                omega_rabi: 0.0,
                ..PhysicalConfig::default()
            },
            sweeps: vec!["omega:1e5:1e6:2:log".parse().unwrap()],
            ..RunManifest::default()
        };
        let rows = run_sweep(&m).unwrap();
        assert_eq!(rows.len(), 2);
        for row in rows {
            assert!(
                row.error.as_deref().unwrap().contains("singular"),
                "{row:?}"
            );
            assert!(row.record.s_x_minus.is_nan());
        }
    }

    #[test]
    fn csv_header_and_extra_axis() {
        let m = RunManifest {
            config: strong_pump_config(),
            sweeps: vec!["gamma_small:1e3:1e5:3:log".parse().unwrap()],
            ..RunManifest::default()
        };
        let rows = run_sweep(&m).unwrap();
        let mut buf = Vec::new();
        write_csv(&rows, &m.extra_axes(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "delta_small_hz,omega_hz,gain_a,gain_b,s_x_minus_db,s_p_plus_db,inseparability,s_xa,s_pa,s_xb,s_pb,error,gamma_small_hz"
        );
        let first: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(first.len(), 13);
        assert_eq!(first[1], "1000000");
        assert!((first[12].parse::<f64>().unwrap() - 1e3).abs() < 1e-6);
    }

    #[test]
    fn parallel_and_serial_runs_agree() {
        let m = RunManifest {
            config: strong_pump_config(),
            sweeps: vec![
                "delta_small:-2.3e8:-2.1e8:3:linear".parse().unwrap(),
                "omega:1e4:1e8:4:log".parse().unwrap(),
            ],
            ..RunManifest::default()
        };
        let serial = run_sweep_with_threads(&m, Some(1)).unwrap();
        let parallel = run_sweep_with_threads(&m, Some(4)).unwrap();
        assert_eq!(serial, parallel);
    }

    #[test]
    fn golden_section_finds_parabola_minimum() {
        let (x, fx) = golden_section(-3.0, 5.0, 1e-9, |x| (x - 1.25).powi(2) + 0.5);
        assert!((x - 1.25).abs() < 1e-8 && (fx - 0.5).abs() < 1e-15);
    }
}
