//! Vacuum wavelength / frequency bookkeeping for the four interacting fields.
//!
//! Lines are stored as vacuum wavelengths in nm; frequencies (THz) are always
//! derived from them.

use crate::error::{Error, Result};

/// Speed of light in nm·THz.
pub const SPEED_OF_LIGHT_NM_THZ: f64 = 299_792.458;

/// H₂ Q₁(1) vibrational Raman shift, 4155.25 cm⁻¹, in THz.
pub const DEFAULT_RAMAN_SHIFT_THZ: f64 = 124.5669;

/// Default tolerance on the pump beat versus the Raman shift.
pub const DEFAULT_RESONANCE_TOLERANCE_THZ: f64 = 0.5;

pub fn wavelength_to_frequency(wavelength_nm: f64) -> Result<f64> {
    if !(wavelength_nm.is_finite() && wavelength_nm > 0.0) {
        return Err(Error::domain(format!(
            "wavelength must be positive and finite, got {wavelength_nm} nm"
        )));
    }
    Ok(SPEED_OF_LIGHT_NM_THZ / wavelength_nm)
}

pub fn frequency_to_wavelength(frequency_thz: f64) -> Result<f64> {
    if !(frequency_thz.is_finite() && frequency_thz > 0.0) {
        return Err(Error::domain(format!(
            "frequency must be positive and finite, got {frequency_thz} THz"
        )));
    }
    Ok(SPEED_OF_LIGHT_NM_THZ / frequency_thz)
}

/// A monochromatic field identified by its vacuum wavelength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralLine {
    wavelength_nm: f64,
}

impl SpectralLine {
    pub fn from_wavelength(wavelength_nm: f64) -> Result<Self> {
        wavelength_to_frequency(wavelength_nm)?;
        Ok(Self { wavelength_nm })
    }

    pub fn from_frequency(frequency_thz: f64) -> Result<Self> {
        Ok(Self {
            wavelength_nm: frequency_to_wavelength(frequency_thz)?,
        })
    }

    #[inline]
    pub fn wavelength_nm(&self) -> f64 {
        self.wavelength_nm
    }

    #[inline]
    pub fn frequency_thz(&self) -> f64 {
        SPEED_OF_LIGHT_NM_THZ / self.wavelength_nm
    }
}

/// Signal line produced by downshifting `probe` by `raman_shift_thz`.
pub fn signal_wavelength(probe: SpectralLine, raman_shift_thz: f64) -> Result<SpectralLine> {
    let nu = probe.frequency_thz() - raman_shift_thz;
    if !(nu > 0.0) {
        return Err(Error::domain(format!(
            "probe at {:.3} THz cannot be downshifted by {raman_shift_thz} THz",
            probe.frequency_thz()
        )));
    }
    SpectralLine::from_frequency(nu)
}

/// Signed mismatch ν(pump_p) − ν(pump_s) − shift, in THz.
pub fn raman_mismatch(pump_p: SpectralLine, pump_s: SpectralLine, raman_shift_thz: f64) -> f64 {
    pump_p.frequency_thz() - pump_s.frequency_thz() - raman_shift_thz
}

pub fn is_raman_resonant(
    pump_p: SpectralLine,
    pump_s: SpectralLine,
    raman_shift_thz: f64,
    tolerance_thz: f64,
) -> bool {
    raman_mismatch(pump_p, pump_s, raman_shift_thz).abs() <= tolerance_thz
}

/// The pump, Stokes pump, probe and signal fields of the CSRS process.
///
/// The signal is always derived from the other three by energy conservation,
/// ν(signal) = ν(probe) − [ν(pump_p) − ν(pump_s)], so the vacuum parts of
/// the four propagation constants cancel exactly in the phase mismatch. The
/// pump beat itself must sit on the Raman line within the tolerance given at
/// construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourWaveSet {
    pub pump_p: SpectralLine,
    pub pump_s: SpectralLine,
    pub probe: SpectralLine,
    pub signal: SpectralLine,
    pub raman_shift_thz: f64,
}

impl FourWaveSet {
    pub fn new(
        pump_p: SpectralLine,
        pump_s: SpectralLine,
        probe: SpectralLine,
        raman_shift_thz: f64,
        tolerance_thz: f64,
    ) -> Result<Self> {
        let mismatch = raman_mismatch(pump_p, pump_s, raman_shift_thz);
        if !(mismatch.abs() <= tolerance_thz) {
            return Err(Error::domain(format!(
                "pump beat misses the Raman shift by {mismatch:.4} THz (tolerance {tolerance_thz} THz)"
            )));
        }
        let beat = pump_p.frequency_thz() - pump_s.frequency_thz();
        let signal = signal_wavelength(probe, beat)?;
        Ok(Self {
            pump_p,
            pump_s,
            probe,
            signal,
            raman_shift_thz,
        })
    }

    /// The default experiment: 942 nm and 1550 nm pumps, 863 nm probe.
    pub fn nominal() -> Self {
        Self::from_wavelengths(942.0, 1550.0, 863.0, DEFAULT_RAMAN_SHIFT_THZ)
            .expect("nominal four-wave set is valid")
    }

    pub fn from_wavelengths(
        pump_p_nm: f64,
        pump_s_nm: f64,
        probe_nm: f64,
        raman_shift_thz: f64,
    ) -> Result<Self> {
        Self::new(
            SpectralLine::from_wavelength(pump_p_nm)?,
            SpectralLine::from_wavelength(pump_s_nm)?,
            SpectralLine::from_wavelength(probe_nm)?,
            raman_shift_thz,
            DEFAULT_RESONANCE_TOLERANCE_THZ,
        )
    }

    /// Same pumps, new probe; signal re-derived.
    pub fn with_probe(&self, probe: SpectralLine) -> Result<Self> {
        Self::new(
            self.pump_p,
            self.pump_s,
            probe,
            self.raman_shift_thz,
            f64::INFINITY,
        )
    }

    pub fn pump_beat_thz(&self) -> f64 {
        self.pump_p.frequency_thz() - self.pump_s.frequency_thz()
    }

    /// −ν(pump_p) + ν(pump_s) + ν(probe) − ν(signal), in THz.
    pub fn energy_residual_thz(&self) -> f64 {
        -self.pump_p.frequency_thz() + self.pump_s.frequency_thz() + self.probe.frequency_thz()
            - self.signal.frequency_thz()
    }

    /// Lines in phase-mismatch order with their signs: −pump_p, +pump_s, +probe, −signal.
    pub fn signed_lines(&self) -> [(f64, SpectralLine); 4] {
        [
            (-1.0, self.pump_p),
            (1.0, self.pump_s),
            (1.0, self.probe),
            (-1.0, self.signal),
        ]
    }
}
