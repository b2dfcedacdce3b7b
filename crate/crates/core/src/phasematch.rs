//! Propagation constants, the four-wave phase mismatch Δβ(p), the sinc²
//! phase-matching envelope, pressure optimisation and inverse calibration of
//! the dispersion-equivalent core radius.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fiber::{self, FiberGeometry, IndexBackend};
use crate::gas::{self, GasState};
use crate::solve;
use crate::spectral::{FourWaveSet, SpectralLine};
use crate::table::ScanTable;

/// Speed of light in m/s.
const C_M_PER_S: f64 = 299_792_458.0;

/// Samples used to count sign changes of Δβ over a pressure interval.
const SIGN_SCAN_INTERVALS: usize = 256;

/// Quantity maximised over pressure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Objective {
    /// sinc²(ΔβL/2) alone.
    #[default]
    Sinc2,
    /// p²·sinc²(ΔβL/2): |χ⁽³⁾|² taken proportional to density squared.
    DensityWeighted,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseMatchProblem {
    pub waves: FourWaveSet,
    pub geom: FiberGeometry,
    /// Gas template; its pressure is ignored and supplied per evaluation.
    pub gas: GasState,
    pub backend: IndexBackend,
    pub objective: Objective,
}

impl Default for PhaseMatchProblem {
    fn default() -> Self {
        Self {
            waves: FourWaveSet::nominal(),
            geom: FiberGeometry::default(),
            gas: GasState::default(),
            backend: IndexBackend::Capillary,
            objective: Objective::Sinc2,
        }
    }
}

impl PhaseMatchProblem {
    /// Checks that every field sits inside a transmission window of the empty fiber.
    pub fn validate(&self) -> Result<()> {
        self.geom.validate()?;
        self.gas.validate()?;
        for (_, line) in self.waves.signed_lines() {
            fiber::transmission_window_of(line.wavelength_nm(), &self.geom, 1.0)?;
        }
        Ok(())
    }

    pub fn with_scale(&self, core_radius_scale: f64) -> Self {
        Self {
            geom: self.geom.with_scale(core_radius_scale),
            ..self.clone()
        }
    }

    pub fn with_waves(&self, waves: FourWaveSet) -> Self {
        Self {
            waves,
            ..self.clone()
        }
    }

    pub fn delta_beta(&self, pressure_bar: f64) -> Result<f64> {
        delta_beta(self, pressure_bar)
    }

    fn objective_value(&self, pressure_bar: f64, sinc2: f64) -> f64 {
        match self.objective {
            Objective::Sinc2 => sinc2,
            Objective::DensityWeighted => pressure_bar * pressure_bar * sinc2,
        }
    }
}

/// (n_eff − 1) at the line's wavelength for the given gas state.
fn excess_index(
    line: SpectralLine,
    gas_state: &GasState,
    geom: &FiberGeometry,
    backend: IndexBackend,
) -> Result<f64> {
    let l = line.wavelength_nm();
    let fill = gas::n_gas(l, gas_state)?;
    Ok(fiber::effective_index(l, fill, geom, backend)? - 1.0)
}

/// β = (2π/λ)·n_eff in rad/m.
pub fn propagation_constant(
    line: SpectralLine,
    pressure_bar: f64,
    geom: &FiberGeometry,
    gas_template: &GasState,
    backend: IndexBackend,
) -> Result<f64> {
    let state = gas_template.at_pressure(pressure_bar);
    state.validate()?;
    let k0 = 2.0 * PI / (line.wavelength_nm() * 1e-9);
    Ok(k0 * (1.0 + excess_index(line, &state, geom, backend)?))
}

/// Δβ = −β(pump_p) + β(pump_s) + β(probe) − β(signal) in rad/m.
///
/// The vacuum wavenumbers are summed as a frequency residual, which is zero
/// up to rounding for an energy-conserving set, so the result does not carry
/// the cancellation error of four ~10⁷ rad/m terms.
pub fn delta_beta(problem: &PhaseMatchProblem, pressure_bar: f64) -> Result<f64> {
    let state = problem.gas.at_pressure(pressure_bar);
    state.validate()?;
    let mut sum = 0.0;
    for (sign, line) in problem.waves.signed_lines() {
        let k0 = 2.0 * PI / (line.wavelength_nm() * 1e-9);
        sum += sign * k0 * excess_index(line, &state, &problem.geom, problem.backend)?;
    }
    let vacuum = 2.0 * PI * problem.waves.energy_residual_thz() * 1e12 / C_M_PER_S;
    Ok(sum + vacuum)
}

/// [sin(x)/x]² with x = Δβ·L/2.
pub fn sinc2_factor(delta_beta: f64, length_m: f64) -> f64 {
    let x = 0.5 * delta_beta * length_m;
    if x == 0.0 {
        1.0
    } else {
        let s = x.sin() / x;
        s * s
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PressurePoint {
    pub pressure_bar: f64,
    pub delta_beta: f64,
    pub sinc2: f64,
    pub objective: f64,
}

/// Pressure grid p_min, p_min + step, … ≤ p_max.
pub fn pressure_grid(p_min: f64, p_max: f64, step: f64) -> Result<Vec<f64>> {
    if !(p_min >= 0.0 && p_min.is_finite() && p_max.is_finite()) {
        return Err(Error::domain(
            "pressure range must be finite and non-negative",
        ));
    }
    if !(step > 0.0) {
        return Err(Error::domain("pressure step must be positive"));
    }
    if p_max < p_min {
        return Err(Error::domain(format!(
            "empty pressure grid: p_max {p_max} < p_min {p_min}"
        )));
    }
    let n = ((p_max - p_min) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| p_min + step * i as f64).collect())
}

pub fn pressure_scan(
    problem: &PhaseMatchProblem,
    p_min: f64,
    p_max: f64,
    step: f64,
) -> Result<Vec<PressurePoint>> {
    let length = problem.geom.length_m;
    pressure_grid(p_min, p_max, step)?
        .into_iter()
        .map(|p| {
            let db = delta_beta(problem, p)?;
            let sinc2 = sinc2_factor(db, length);
            Ok(PressurePoint {
                pressure_bar: p,
                delta_beta: db,
                sinc2,
                objective: problem.objective_value(p, sinc2),
            })
        })
        .collect()
}

pub fn pressure_table(points: &[PressurePoint]) -> ScanTable {
    let mut t = ScanTable::new(
        "pressure-scan",
        &[
            ("pressure", "bar"),
            ("delta_beta", "rad/m"),
            ("sinc2", "1"),
            ("objective", "1"),
        ],
    );
    for p in points {
        t.push_row(vec![p.pressure_bar, p.delta_beta, p.sinc2, p.objective]);
    }
    t
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PressureOptimum {
    pub pressure_bar: f64,
    pub delta_beta: f64,
    pub sinc2: f64,
    pub objective: f64,
}

/// Bisection width in bar for the phase-matching root.
const ROOT_XTOL_BAR: f64 = 1e-9;
/// Golden-section width in bar for the density-weighted maximum.
const GOLDEN_XTOL_BAR: f64 = 1e-6;

pub fn optimal_pressure(
    problem: &PhaseMatchProblem,
    p_min: f64,
    p_max: f64,
) -> Result<PressureOptimum> {
    if !(p_max > p_min) {
        return Err(Error::domain(format!(
            "optimisation range must satisfy p_max > p_min, got [{p_min}, {p_max}]"
        )));
    }
    let p = match problem.objective {
        Objective::Sinc2 => phase_matching_root(problem, p_min, p_max)?,
        Objective::DensityWeighted => density_weighted_max(problem, p_min, p_max)?,
    };
    let db = delta_beta(problem, p)?;
    let sinc2 = sinc2_factor(db, problem.geom.length_m);
    Ok(PressureOptimum {
        pressure_bar: p,
        delta_beta: db,
        sinc2,
        objective: problem.objective_value(p, sinc2),
    })
}

fn phase_matching_root(problem: &PhaseMatchProblem, p_min: f64, p_max: f64) -> Result<f64> {
    let h = (p_max - p_min) / SIGN_SCAN_INTERVALS as f64;
    let samples = (0..=SIGN_SCAN_INTERVALS)
        .map(|i| {
            let p = if i == SIGN_SCAN_INTERVALS {
                p_max
            } else {
                p_min + h * i as f64
            };
            Ok((p, delta_beta(problem, p)?))
        })
        .collect::<Result<Vec<_>>>()?;
    if let Some(&(p, _)) = samples.iter().find(|s| s.1 == 0.0) {
        // exact zero on the grid; lowest such pressure wins
        let others = samples.windows(2).filter(|w| w[0].1 * w[1].1 < 0.0).count();
        if others == 0 {
            return Ok(p);
        }
    }
    let brackets: Vec<(f64, f64)> = samples
        .windows(2)
        .filter(|w| w[0].1 * w[1].1 < 0.0)
        .map(|w| (w[0].0, w[1].0))
        .collect();
    match brackets.as_slice() {
        [] => Err(Error::NoPhaseMatch {
            p_min,
            p_max,
            db_min: samples[0].1,
            db_max: samples[samples.len() - 1].1,
        }),
        [(lo, hi)] => solve::bisect(*lo, *hi, ROOT_XTOL_BAR, |p| delta_beta(problem, p)),
        many => Err(Error::AmbiguousPhaseMatch {
            count: many.len(),
            p_min,
            p_max,
        }),
    }
}

fn density_weighted_max(problem: &PhaseMatchProblem, p_min: f64, p_max: f64) -> Result<f64> {
    let n = 512;
    let h = (p_max - p_min) / n as f64;
    let objective = |p: f64| -> Result<f64> {
        let s = sinc2_factor(delta_beta(problem, p)?, problem.geom.length_m);
        Ok(p * p * s)
    };
    let mut best = (0usize, f64::NEG_INFINITY);
    for i in 0..=n {
        let v = objective(p_min + h * i as f64)?;
        // strict comparison keeps the lowest pressure on ties
        if v > best.1 {
            best = (i, v);
        }
    }
    let lo = p_min + h * best.0.saturating_sub(1) as f64;
    let hi = (p_min + h * (best.0 + 1) as f64).min(p_max);
    solve::golden_section_max(lo, hi, GOLDEN_XTOL_BAR, objective)
}

/// Core-radius scale at which the phase-matching pressure equals `target_p_bar`.
///
/// Bisects Δβ(target) in the scale, which is equivalent to matching the
/// optimum because Δβ is monotone in pressure. Requires Δβ(target) < 0 at the
/// lower bound and > 0 at the upper one, i.e. an optimum that falls with scale.
pub fn calibrate_core_radius(
    problem: &PhaseMatchProblem,
    target_p_bar: f64,
    bounds: (f64, f64),
) -> Result<f64> {
    if !(target_p_bar > 0.0 && target_p_bar.is_finite()) {
        return Err(Error::CalibrationRange {
            target: target_p_bar,
            detail: "target pressure must be positive".into(),
        });
    }
    let (low, high) = bounds;
    if !(low > 0.0 && high > low) {
        return Err(Error::CalibrationRange {
            target: target_p_bar,
            detail: format!("invalid scale bounds ({low}, {high})"),
        });
    }
    let residual = |scale: f64| delta_beta(&problem.with_scale(scale), target_p_bar);
    let (r_low, r_high) = (residual(low)?, residual(high)?);
    if !(r_low <= 0.0 && r_high >= 0.0) {
        return Err(Error::CalibrationRange {
            target: target_p_bar,
            detail: format!(
                "delta beta at target is {r_low:.6} rad/m at scale {low} and {r_high:.6} rad/m at scale {high}"
            ),
        });
    }
    solve::bisect(low, high, 1e-12, residual)
}
