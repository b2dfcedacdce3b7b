//! Background count budget and signal-to-noise ratio at the detector.
//!
//! Background = dark/ambient counts + stray light of the 1550 nm pump (linear
//! in power) + a glass Raman channel driven by the 942 nm pump that is linear
//! up to a threshold and steeper above it. None of the terms depends on gas
//! pressure.

use crate::conversion::{self, ConversionSetup};
use crate::error::{Error, Result};
use crate::table::ScanTable;

/// h·c in J·m.
pub const PLANCK_TIMES_C: f64 = 1.98645e-25;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    pub dark_cps: f64,
    pub stray_slope_1550: f64,
    pub raman_942_below_slope: f64,
    pub raman_942_threshold_w: f64,
    pub raman_942_above_slope: f64,
    pub detector_efficiency: f64,
}

impl Default for NoiseModel {
    /// Continuous piecewise-linear interpolant of 270 cps dark, 1500 cps of
    /// stray light at 5 W, 300 cps of 942 nm Raman at the 3.5 W threshold and
    /// 2500 cps at 5 W.
    fn default() -> Self {
        Self {
            dark_cps: 270.0,
            stray_slope_1550: 1500.0 / 5.0,
            raman_942_below_slope: 300.0 / 3.5,
            raman_942_threshold_w: 3.5,
            raman_942_above_slope: (2500.0 - 300.0) / 1.5,
            detector_efficiency: 0.10,
        }
    }
}

impl NoiseModel {
    pub fn validate(&self) -> Result<()> {
        let rates = [
            self.dark_cps,
            self.stray_slope_1550,
            self.raman_942_below_slope,
            self.raman_942_above_slope,
        ];
        if rates.iter().any(|&r| !(r >= 0.0 && r.is_finite())) {
            return Err(Error::domain("noise rates and slopes must be non-negative"));
        }
        if !(self.raman_942_threshold_w > 0.0) {
            return Err(Error::domain("Raman threshold must be positive"));
        }
        if !(self.detector_efficiency > 0.0 && self.detector_efficiency <= 1.0) {
            return Err(Error::domain("detector efficiency must lie in (0, 1]"));
        }
        Ok(())
    }

    /// Counts from the 942 nm pump alone.
    pub fn raman_942(&self, power_w: f64) -> f64 {
        let t = self.raman_942_threshold_w;
        if power_w <= t {
            self.raman_942_below_slope * power_w
        } else {
            self.raman_942_below_slope * t + self.raman_942_above_slope * (power_w - t)
        }
    }

    pub fn stray_1550(&self, power_w: f64) -> f64 {
        self.stray_slope_1550 * power_w
    }
}

pub fn background_rate(p_1550_w: f64, p_942_w: f64, model: &NoiseModel) -> Result<f64> {
    if !(p_1550_w >= 0.0 && p_942_w >= 0.0) {
        return Err(Error::domain("pump powers must be non-negative"));
    }
    Ok(model.dark_cps + model.stray_1550(p_1550_w) + model.raman_942(p_942_w))
}

pub fn detected_signal_rate(converted_photons_per_s: f64, model: &NoiseModel) -> Result<f64> {
    if !(converted_photons_per_s >= 0.0) {
        return Err(Error::domain("photon rate must be non-negative"));
    }
    Ok(model.detector_efficiency * converted_photons_per_s)
}

/// Photon flux P·λ/(hc) of a monochromatic beam.
pub fn photon_rate(power_w: f64, wavelength_nm: f64) -> f64 {
    power_w * wavelength_nm * 1e-9 / PLANCK_TIMES_C
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrBreakdown {
    pub efficiency: f64,
    pub probe_photons_per_s: f64,
    pub signal_cps: f64,
    pub background_cps: f64,
    pub snr: f64,
}

pub fn snr_from_efficiency(
    efficiency: f64,
    probe_w: f64,
    probe_nm: f64,
    p_1550_w: f64,
    p_942_w: f64,
    model: &NoiseModel,
) -> Result<SnrBreakdown> {
    let probe_rate = photon_rate(probe_w, probe_nm);
    let signal = detected_signal_rate(efficiency * probe_rate, model)?;
    let background = background_rate(p_1550_w, p_942_w, model)?;
    let snr = if background > 0.0 {
        signal / background
    } else if signal == 0.0 {
        return Err(Error::UndefinedSnr);
    } else {
        f64::INFINITY
    };
    Ok(SnrBreakdown {
        efficiency,
        probe_photons_per_s: probe_rate,
        signal_cps: signal,
        background_cps: background,
        snr,
    })
}

pub fn snr(setup: &ConversionSetup, pressure_bar: f64, model: &NoiseModel) -> Result<SnrBreakdown> {
    let eta = conversion::efficiency(setup, pressure_bar)?;
    snr_from_efficiency(
        eta,
        setup.powers.probe_w,
        setup.problem.waves.probe.wavelength_nm(),
        setup.powers.pump_s_w,
        setup.powers.pump_p_w,
        model,
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseRow {
    pub p_1550_w: f64,
    pub p_942_w: f64,
    pub dark_cps: f64,
    pub stray_cps: f64,
    pub raman_cps: f64,
    pub breakdown: SnrBreakdown,
}

/// Budget along equal pump powers 0, step, … ≤ max.
pub fn noise_sweep(
    setup: &ConversionSetup,
    pressure_bar: f64,
    model: &NoiseModel,
    max_w: f64,
    step_w: f64,
) -> Result<Vec<NoiseRow>> {
    model.validate()?;
    if !(step_w > 0.0 && max_w >= 0.0) {
        return Err(Error::domain(
            "power sweep needs a positive step and non-negative maximum",
        ));
    }
    let n = (max_w / step_w + 1e-9).floor() as usize;
    (0..=n)
        .map(|i| {
            let p = step_w * i as f64;
            let s = setup.with_powers(p, p);
            let eta = conversion::efficiency(&s, pressure_bar)?;
            let breakdown = snr_from_efficiency(
                eta,
                s.powers.probe_w,
                s.problem.waves.probe.wavelength_nm(),
                p,
                p,
                model,
            )?;
            Ok(NoiseRow {
                p_1550_w: p,
                p_942_w: p,
                dark_cps: model.dark_cps,
                stray_cps: model.stray_1550(p),
                raman_cps: model.raman_942(p),
                breakdown,
            })
        })
        .collect()
}

pub fn noise_table(rows: &[NoiseRow]) -> ScanTable {
    let mut t = ScanTable::new(
        "noise",
        &[
            ("p_1550", "W"),
            ("p_942", "W"),
            ("dark", "cps"),
            ("stray_1550", "cps"),
            ("raman_942", "cps"),
            ("background", "cps"),
            ("signal", "cps"),
            ("snr", "1"),
        ],
    );
    for r in rows {
        t.push_row(vec![
            r.p_1550_w,
            r.p_942_w,
            r.dark_cps,
            r.stray_cps,
            r.raman_cps,
            r.breakdown.background_cps,
            r.breakdown.signal_cps,
            r.breakdown.snr,
        ]);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn background_anchors() {
        let m = NoiseModel::default();
        assert_eq!(background_rate(0.0, 0.0, &m).unwrap(), 270.0);
        assert_eq!(background_rate(5.0, 0.0, &m).unwrap(), 1770.0);
        assert!((background_rate(5.0, 5.0, &m).unwrap() - 4270.0).abs() < 1.0);
        assert!(background_rate(-1.0, 0.0, &m).is_err());
    }

    #[test]
    fn quoted_slopes_round_trip() {
        // 85.7 and 1467 cps/W are the rounded forms of the defaults
        let m = NoiseModel::default();
        assert!((m.raman_942_below_slope - 85.7).abs() < 0.05);
        assert!((m.raman_942_above_slope - 1467.0).abs() < 0.5);
        let rounded = NoiseModel {
            raman_942_below_slope: 85.7,
            raman_942_above_slope: 1467.0,
            ..m
        };
        assert!((background_rate(5.0, 5.0, &rounded).unwrap() - 4270.0).abs() < 1.0);
    }

    #[test]
    fn continuous_at_threshold() {
        let m = NoiseModel::default();
        let t = m.raman_942_threshold_w;
        let below = m.raman_942(t);
        let above = m.raman_942(t + 1e-12);
        assert!((above - below).abs() < 1e-6);
        assert!((below - 300.0).abs() < 1e-9);
    }

    #[test]
    fn monotone_grid() {
        let m = NoiseModel::default();
        let mut prev_a = 0.0;
        for i in 0..=100 {
            let p = 0.07 * i as f64;
            let a = background_rate(p, 1.0, &m).unwrap();
            let b0 = background_rate(1.0, p, &m).unwrap();
            let b1 = background_rate(1.0, p + 0.07, &m).unwrap();
            assert!(a >= prev_a && b1 >= b0);
            prev_a = a;
        }
    }

    #[test]
    fn detection() {
        let m = NoiseModel::default();
        assert_eq!(detected_signal_rate(0.0, &m).unwrap(), 0.0);
        assert!((detected_signal_rate(1e4, &m).unwrap() - 1e3).abs() < 1e-9);
        let unit = NoiseModel {
            detector_efficiency: 1.0,
            ..m
        };
        assert_eq!(detected_signal_rate(1234.5, &unit).unwrap(), 1234.5);
    }

    #[test]
    fn probe_photon_rate() {
        let r = photon_rate(1e-6, 863.0);
        assert!((r / 4.34e12 - 1.0).abs() < 0.005, "{r}");
    }

    #[test]
    fn worked_snr() {
        let m = NoiseModel::default();
        let setup = ConversionSetup::default();
        let s = snr(&setup, 60.0, &m).unwrap();
        assert_eq!(s.efficiency, 5.2e-7);
        assert!((s.signal_cps / 2.26e5 - 1.0).abs() < 0.01);
        assert!((s.snr / 53.0 - 1.0).abs() < 0.1, "{}", s.snr);
        let z = snr_from_efficiency(0.0, 1e-6, 863.0, 5.0, 5.0, &m).unwrap();
        assert_eq!(z.snr, 0.0);
    }

    #[test]
    fn undefined_snr() {
        let m = NoiseModel {
            dark_cps: 0.0,
            ..NoiseModel::default()
        };
        assert_eq!(
            snr_from_efficiency(0.0, 1e-6, 863.0, 0.0, 0.0, &m),
            Err(Error::UndefinedSnr)
        );
    }

    #[test]
    fn snr_linear_in_probe_power() {
        let m = NoiseModel::default();
        let a = snr_from_efficiency(5.2e-7, 1e-6, 863.0, 5.0, 5.0, &m)
            .unwrap()
            .snr;
        let b = snr_from_efficiency(5.2e-7, 3e-6, 863.0, 5.0, 5.0, &m)
            .unwrap()
            .snr;
        assert!((b / a - 3.0).abs() < 1e-12);
    }

    #[test]
    fn background_ignores_pressure() {
        let m = NoiseModel::default();
        let setup = ConversionSetup::default();
        let a = noise_sweep(&setup, 20.0, &m, 5.0, 1.0).unwrap();
        let b = noise_sweep(&setup, 90.0, &m, 5.0, 1.0).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.breakdown.background_cps, y.breakdown.background_cps);
        }
        assert_eq!(a.len(), 6);
        assert!((a[5].breakdown.background_cps - 4270.0).abs() < 1.0);
    }
}
