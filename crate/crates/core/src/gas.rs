//! Refractivity of the hydrogen fill.
//!
//! Two-pole dispersion in wavenumber σ = 1/λ[µm], scaled linearly with
//! number density (p/p₀)·(T₀/T)/Z.

use crate::error::{Error, Result};

pub const BAND_MIN_NM: f64 = 400.0;
pub const BAND_MAX_NM: f64 = 3000.0;

/// Minimum allowed distance D − σ² from a dispersion pole, in µm⁻².
const POLE_MARGIN: f64 = 1.0;

/// Two-pole refractivity coefficients at a reference state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPoleModel {
    pub c1: f64,
    pub d1: f64,
    pub c2: f64,
    pub d2: f64,
    pub p0_bar: f64,
    pub t0_k: f64,
}

impl Default for TwoPoleModel {
    fn default() -> Self {
        Self {
            c1: 1.48956e-2,
            d1: 180.7,
            c2: 4.9037e-3,
            d2: 92.0,
            p0_bar: 1.01325,
            t0_k: 273.15,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasState {
    pub pressure_bar: f64,
    pub temperature_k: f64,
    pub model: TwoPoleModel,
    pub compressibility: f64,
}

impl Default for GasState {
    fn default() -> Self {
        Self {
            pressure_bar: 0.0,
            temperature_k: 293.15,
            model: TwoPoleModel::default(),
            compressibility: 1.0,
        }
    }
}

impl GasState {
    pub fn at_pressure(&self, pressure_bar: f64) -> Self {
        Self {
            pressure_bar,
            ..*self
        }
    }

    pub fn validate(&self) -> Result<()> {
        let m = &self.model;
        if !(self.pressure_bar >= 0.0 && self.pressure_bar.is_finite()) {
            return Err(Error::domain(format!(
                "pressure must be non-negative, got {} bar",
                self.pressure_bar
            )));
        }
        if !(self.temperature_k > 0.0 && self.temperature_k.is_finite()) {
            return Err(Error::domain("temperature must be positive"));
        }
        if !(self.compressibility > 0.0 && self.compressibility.is_finite()) {
            return Err(Error::domain("compressibility factor must be positive"));
        }
        if !(m.p0_bar > 0.0 && m.t0_k > 0.0) {
            return Err(Error::domain(
                "reference pressure and temperature must be positive",
            ));
        }
        if !(m.c1 >= 0.0 && m.c2 >= 0.0) {
            return Err(Error::domain("dispersion strengths must be non-negative"));
        }
        let sigma2_max = (1000.0 / BAND_MIN_NM).powi(2);
        if !(m.d1 - sigma2_max >= POLE_MARGIN && m.d2 - sigma2_max >= POLE_MARGIN) {
            return Err(Error::domain(format!(
                "dispersion poles must lie above σ² = {sigma2_max} µm⁻² for the whole band"
            )));
        }
        Ok(())
    }

    /// Number-density scale relative to the reference state.
    pub fn density_ratio(&self) -> f64 {
        (self.pressure_bar / self.model.p0_bar) * (self.model.t0_k / self.temperature_k)
            / self.compressibility
    }
}

/// n − 1 of the gas at `wavelength_nm`.
pub fn refractivity(wavelength_nm: f64, state: &GasState) -> Result<f64> {
    if !(BAND_MIN_NM..=BAND_MAX_NM).contains(&wavelength_nm) {
        return Err(Error::domain(format!(
            "wavelength {wavelength_nm} nm outside gas model band [{BAND_MIN_NM}, {BAND_MAX_NM}] nm"
        )));
    }
    let m = &state.model;
    let sigma2 = (1000.0 / wavelength_nm).powi(2);
    let (g1, g2) = (m.d1 - sigma2, m.d2 - sigma2);
    if g1 < POLE_MARGIN || g2 < POLE_MARGIN {
        return Err(Error::domain(format!(
            "wavelength {wavelength_nm} nm too close to a dispersion pole"
        )));
    }
    Ok((m.c1 / g1 + m.c2 / g2) * state.density_ratio())
}

pub fn n_gas(wavelength_nm: f64, state: &GasState) -> Result<f64> {
    Ok(1.0 + refractivity(wavelength_nm, state)?)
}
