//! Antiresonant hollow-core fiber: effective index of the fundamental core
//! mode, capillary (ARROW) resonances, transmission windows and a relative
//! leakage-loss envelope.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::table::ScanTable;

/// First zero of J₀.
pub const J0_FIRST_ZERO: f64 = 2.404_825_557_695_773;

/// Refractive index of the capillary glass.
#[derive(Debug, Clone, PartialEq)]
pub enum GlassIndex {
    Fixed(f64),
    /// `(wavelength_nm, index)` pairs, strictly increasing in wavelength,
    /// linearly interpolated and clamped at the ends.
    Table(Vec<(f64, f64)>),
}

impl GlassIndex {
    pub fn at(&self, wavelength_nm: f64) -> f64 {
        match self {
            GlassIndex::Fixed(n) => *n,
            GlassIndex::Table(pts) => {
                let i = pts.partition_point(|&(l, _)| l <= wavelength_nm);
                if i == 0 {
                    pts[0].1
                } else if i == pts.len() {
                    pts[pts.len() - 1].1
                } else {
                    let (l0, n0) = pts[i - 1];
                    let (l1, n1) = pts[i];
                    n0 + (n1 - n0) * (wavelength_nm - l0) / (l1 - l0)
                }
            }
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            GlassIndex::Fixed(n) if *n > 1.0 => Ok(()),
            GlassIndex::Fixed(n) => {
                Err(Error::domain(format!("glass index must exceed 1, got {n}")))
            }
            GlassIndex::Table(pts) => {
                if pts.is_empty() {
                    return Err(Error::domain("glass dispersion table is empty"));
                }
                if pts.windows(2).any(|w| !(w[1].0 > w[0].0)) {
                    return Err(Error::domain(
                        "glass dispersion table must be strictly increasing",
                    ));
                }
                if pts.iter().any(|&(_, n)| !(n > 1.0)) {
                    return Err(Error::domain("glass index must exceed 1"));
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FiberGeometry {
    pub core_radius_um: f64,
    pub wall_thickness_nm: f64,
    pub n_capillaries: u32,
    pub length_m: f64,
    pub glass_index: GlassIndex,
    /// Transverse mode parameter u of the fundamental mode.
    pub mode_u: f64,
    /// Multiplier turning the geometric core radius into the dispersion-equivalent radius.
    pub core_radius_scale: f64,
    /// Gaussian mode-field radius as a fraction of the core radius.
    pub mode_field_factor: f64,
    /// Half-width of the forbidden band around each resonance phase mπ, in rad.
    pub resonance_guard_rad: f64,
}

impl Default for FiberGeometry {
    fn default() -> Self {
        Self {
            core_radius_um: 23.0,
            wall_thickness_nm: 1150.0,
            n_capillaries: 7,
            length_m: 0.06,
            glass_index: GlassIndex::Fixed(1.45),
            mode_u: J0_FIRST_ZERO,
            core_radius_scale: 1.0,
            mode_field_factor: 0.64,
            resonance_guard_rad: 0.05,
        }
    }
}

impl FiberGeometry {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("core radius", self.core_radius_um),
            ("wall thickness", self.wall_thickness_nm),
            ("length", self.length_m),
            ("mode parameter u", self.mode_u),
            ("core radius scale", self.core_radius_scale),
            ("mode field factor", self.mode_field_factor),
        ];
        for (what, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::domain(format!("{what} must be positive, got {v}")));
            }
        }
        if !(self.resonance_guard_rad >= 0.0 && self.resonance_guard_rad < PI / 2.0) {
            return Err(Error::domain("resonance guard must lie in [0, π/2)"));
        }
        self.glass_index.validate()
    }

    /// Dispersion-equivalent core radius in nm.
    pub fn effective_radius_nm(&self) -> f64 {
        self.core_radius_um * 1000.0 * self.core_radius_scale
    }

    pub fn with_scale(&self, core_radius_scale: f64) -> Self {
        Self {
            core_radius_scale,
            ..self.clone()
        }
    }
}

/// Which effective-index model to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IndexBackend {
    /// Closed-form capillary (Marcatili-Schmeltzer type) index.
    #[default]
    Capillary,
    /// Capillary index plus a cot(φ) wall-resonance correction.
    ResonanceCorrected,
}

/// Wall round-trip phase φ = (2πw/λ)·sqrt(n_glass² − n_fill²).
pub fn resonance_phase(wavelength_nm: f64, geom: &FiberGeometry, n_fill: f64) -> Result<f64> {
    Ok(2.0 * PI * geom.wall_thickness_nm / wavelength_nm
        * wall_contrast(wavelength_nm, geom, n_fill)?)
}

fn wall_contrast(wavelength_nm: f64, geom: &FiberGeometry, n_fill: f64) -> Result<f64> {
    let ng = geom.glass_index.at(wavelength_nm);
    if !(ng > n_fill) {
        return Err(Error::domain(format!(
            "glass index {ng} does not exceed fill index {n_fill}"
        )));
    }
    Ok((ng * ng - n_fill * n_fill).sqrt())
}

/// Nearest resonance order m ≥ 1 if φ is within the guard band of mπ.
fn guard_violation(phase: f64, guard: f64) -> Option<u32> {
    let m = (phase / PI).round();
    (m >= 1.0 && (phase - m * PI).abs() < guard).then_some(m as u32)
}

pub fn effective_index(
    wavelength_nm: f64,
    n_fill: f64,
    geom: &FiberGeometry,
    backend: IndexBackend,
) -> Result<f64> {
    if !(wavelength_nm > 0.0 && wavelength_nm.is_finite()) {
        return Err(Error::domain(format!(
            "invalid wavelength {wavelength_nm} nm"
        )));
    }
    if !(n_fill >= 1.0) {
        return Err(Error::domain(format!(
            "fill index must be at least 1, got {n_fill}"
        )));
    }
    let a = geom.effective_radius_nm();
    let x = geom.mode_u * wavelength_nm / (2.0 * PI * a);
    if x >= n_fill {
        return Err(Error::domain(format!(
            "mode beyond cutoff at {wavelength_nm} nm for effective radius {a} nm"
        )));
    }
    let capillary = (n_fill * n_fill - x * x).sqrt();
    match backend {
        IndexBackend::Capillary => Ok(capillary),
        IndexBackend::ResonanceCorrected => {
            let contrast = wall_contrast(wavelength_nm, geom, n_fill)?;
            let phase = 2.0 * PI * geom.wall_thickness_nm / wavelength_nm * contrast;
            if let Some(order) = guard_violation(phase, geom.resonance_guard_rad) {
                return Err(Error::ResonanceProximity {
                    wavelength_nm,
                    order,
                    resonance_nm: 2.0 * geom.wall_thickness_nm * contrast / order as f64,
                });
            }
            let u = geom.mode_u;
            let envelope = u * u * wavelength_nm.powi(3) / (8.0 * PI.powi(3) * a.powi(3));
            // cot(φ); exactly zero at the anti-resonance midpoints
            let cot = phase_cot(phase);
            Ok(capillary - envelope * cot / contrast)
        }
    }
}

fn phase_cot(phase: f64) -> f64 {
    let half = (phase / PI - 0.5).round();
    if phase == (half + 0.5) * PI {
        0.0
    } else {
        phase.cos() / phase.sin()
    }
}

/// Resonance wavelengths λ_m for m = 1..=m_max, longest first.
pub fn resonance_wavelengths(geom: &FiberGeometry, n_fill: f64, m_max: u32) -> Result<Vec<f64>> {
    if m_max < 1 {
        return Err(Error::domain("m_max must be at least 1"));
    }
    let w = geom.wall_thickness_nm;
    (1..=m_max)
        .map(|m| {
            let m = m as f64;
            match &geom.glass_index {
                GlassIndex::Fixed(_) => Ok(2.0 * w / m * wall_contrast(0.0, geom, n_fill)?),
                GlassIndex::Table(_) => {
                    let mut lambda = 2.0 * w / m * wall_contrast(1000.0, geom, n_fill)?;
                    for _ in 0..100 {
                        let next = 2.0 * w / m * wall_contrast(lambda, geom, n_fill)?;
                        if (next - lambda).abs() < 0.01 {
                            return Ok(next);
                        }
                        lambda = next;
                    }
                    Err(Error::NonConvergence(
                        "resonance wavelength fixed-point iteration",
                    ))
                }
            }
        })
        .collect()
}

/// The low-loss band between two adjacent resonances that contains a wavelength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransmissionWindow {
    pub low_nm: f64,
    /// `f64::INFINITY` above the fundamental resonance.
    pub high_nm: f64,
    /// Distance to the nearer resonance.
    pub margin_nm: f64,
}

pub fn transmission_window_of(
    wavelength_nm: f64,
    geom: &FiberGeometry,
    n_fill: f64,
) -> Result<TransmissionWindow> {
    let phase = resonance_phase(wavelength_nm, geom, n_fill)?;
    let m = (phase / PI).floor() as u32;
    let resonances = resonance_wavelengths(geom, n_fill, m + 1)?;
    if let Some(order) = guard_violation(phase, geom.resonance_guard_rad) {
        let resonance_nm = match resonances.get(order as usize - 1) {
            Some(&r) => r,
            None => resonance_wavelengths(geom, n_fill, order)?[order as usize - 1],
        };
        return Err(Error::ResonanceProximity {
            wavelength_nm,
            order,
            resonance_nm,
        });
    }
    let low = resonances[m as usize];
    let high = if m == 0 {
        f64::INFINITY
    } else {
        resonances[m as usize - 1]
    };
    // A dispersive glass can shift the bracketing by one order near a band edge.
    if !(low < wavelength_nm && wavelength_nm < high) {
        return Err(Error::domain(format!(
            "could not bracket {wavelength_nm} nm between resonances"
        )));
    }
    Ok(TransmissionWindow {
        low_nm: low,
        high_nm: high,
        margin_nm: (wavelength_nm - low).min(high - wavelength_nm),
    })
}

/// One sample of the relative loss spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossSample {
    pub wavelength_nm: f64,
    pub relative_loss: f64,
    pub capped: bool,
}

pub const DEFAULT_LOSS_CEILING: f64 = 1.0e3;

/// Relative leakage loss (λ/a)³ / sin²φ on a wavelength grid, normalised to a
/// grid minimum of 1 and clipped at `ceiling`.
pub fn loss_spectrum_estimate(
    grid_nm: &[f64],
    geom: &FiberGeometry,
    n_fill: f64,
    ceiling: f64,
) -> Result<Vec<LossSample>> {
    if grid_nm.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::domain("wavelength grid must be strictly increasing"));
    }
    let a = geom.effective_radius_nm();
    let raw = grid_nm
        .iter()
        .map(|&l| {
            let s = resonance_phase(l, geom, n_fill)?.sin();
            Ok((l / a).powi(3) / (s * s))
        })
        .collect::<Result<Vec<f64>>>()?;
    let min = raw.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(grid_nm
        .iter()
        .zip(&raw)
        .map(|(&l, &v)| {
            let rel = v / min;
            LossSample {
                wavelength_nm: l,
                relative_loss: rel.min(ceiling),
                capped: !(rel <= ceiling),
            }
        })
        .collect())
}

pub fn loss_table(samples: &[LossSample]) -> ScanTable {
    let mut t = ScanTable::new(
        "loss-spectrum",
        &[
            ("wavelength", "nm"),
            ("relative_loss", "1"),
            ("capped", "flag"),
        ],
    );
    for s in samples {
        t.push_row(vec![
            s.wavelength_nm,
            s.relative_loss,
            s.capped as u8 as f64,
        ]);
    }
    t
}

/// Peak intensity 2P/(πw²) of a Gaussian mode with w = mode_field_factor · core radius, in W/m².
pub fn mode_intensity(power_w: f64, geom: &FiberGeometry) -> Result<f64> {
    if !(power_w >= 0.0) {
        return Err(Error::domain(format!(
            "power must be non-negative, got {power_w} W"
        )));
    }
    let w = geom.mode_field_factor * geom.core_radius_um * 1e-6;
    Ok(2.0 * power_w / (PI * w * w))
}
