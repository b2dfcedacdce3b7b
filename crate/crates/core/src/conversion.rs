//! Conversion efficiency scaled from a measured reference point.
//!
//! The signal rate goes as |χ⁽³⁾|²·L²·sinc²(ΔβL/2)·P_pump·P_stokes·P_probe.
//! The absolute prefactor is unknown, so it is absorbed into a reference
//! efficiency measured at known powers, length and pressure; every other
//! operating point is obtained by ratio. Efficiency is signal out per probe
//! in, so the probe power cancels.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::fiber;
use crate::gas;
use crate::phasematch::{self, PhaseMatchProblem};
use crate::spectral::SpectralLine;
use crate::table::ScanTable;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PumpPowers {
    pub pump_p_w: f64,
    pub pump_s_w: f64,
    pub probe_w: f64,
}

impl Default for PumpPowers {
    fn default() -> Self {
        Self {
            pump_p_w: 5.0,
            pump_s_w: 5.0,
            probe_w: 1e-6,
        }
    }
}

/// Operating point at which the internal efficiency was measured.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferencePoint {
    pub pump_p_w: f64,
    pub pump_s_w: f64,
    pub length_m: f64,
    pub pressure_bar: f64,
    pub efficiency: f64,
}

/// Peak internal conversion efficiency of the 6 cm fiber at 60 bar.
pub const REFERENCE_EFFICIENCY: f64 = 5.2e-7;

const SINGULAR_SINC2: f64 = 1e-24;

impl Default for ReferencePoint {
    fn default() -> Self {
        Self {
            pump_p_w: 5.0,
            pump_s_w: 5.0,
            length_m: 0.06,
            pressure_bar: 60.0,
            efficiency: REFERENCE_EFFICIENCY,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConversionSetup {
    pub powers: PumpPowers,
    pub length_m: f64,
    pub reference: ReferencePoint,
    pub problem: PhaseMatchProblem,
}

impl Default for ConversionSetup {
    fn default() -> Self {
        Self {
            powers: PumpPowers::default(),
            length_m: 0.06,
            reference: ReferencePoint::default(),
            problem: PhaseMatchProblem::default(),
        }
    }
}

impl ConversionSetup {
    pub fn validate(&self) -> Result<()> {
        let p = &self.powers;
        if !(p.pump_p_w >= 0.0 && p.pump_s_w >= 0.0 && p.probe_w >= 0.0) {
            return Err(Error::domain("powers must be non-negative"));
        }
        let r = &self.reference;
        if !(r.efficiency > 0.0 && r.efficiency < 1.0) {
            return Err(Error::domain("reference efficiency must lie in (0, 1)"));
        }
        if !(r.pump_p_w > 0.0 && r.pump_s_w > 0.0) {
            return Err(Error::domain("reference pump powers must be positive"));
        }
        if !(self.length_m > 0.0 && r.length_m > 0.0) {
            return Err(Error::domain("fiber lengths must be positive"));
        }
        if !(r.pressure_bar >= 0.0) {
            return Err(Error::domain("reference pressure must be non-negative"));
        }
        Ok(())
    }

    pub fn with_powers(&self, pump_p_w: f64, pump_s_w: f64) -> Self {
        Self {
            powers: PumpPowers {
                pump_p_w,
                pump_s_w,
                ..self.powers
            },
            ..self.clone()
        }
    }

    pub fn with_length(&self, length_m: f64) -> Self {
        Self {
            length_m,
            ..self.clone()
        }
    }

    fn reference_sinc2(&self) -> Result<f64> {
        let r = &self.reference;
        let db = phasematch::delta_beta(&self.problem, r.pressure_bar)?;
        let s = phasematch::sinc2_factor(db, r.length_m);
        // at a sinc² null the float result is ~1e-33, not exactly zero
        if s < SINGULAR_SINC2 {
            return Err(Error::CalibrationSingular);
        }
        Ok(s)
    }

    /// Efficiency for `variant` (same fiber and gas, possibly other
    /// wavelengths) while keeping the calibration anchored to `self.problem`.
    fn efficiency_for(&self, variant: &PhaseMatchProblem, pressure_bar: f64) -> Result<(f64, f64)> {
        self.validate()?;
        let reference = self.reference_sinc2()?;
        let db = phasematch::delta_beta(variant, pressure_bar)?;
        let s = phasematch::sinc2_factor(db, self.length_m);
        let r = &self.reference;
        let length_ratio = self.length_m / r.length_m;
        let eta = r.efficiency
            * (self.powers.pump_p_w / r.pump_p_w)
            * (self.powers.pump_s_w / r.pump_s_w)
            * (length_ratio * length_ratio)
            * (s / reference);
        Ok((eta, db))
    }
}

pub fn efficiency(setup: &ConversionSetup, pressure_bar: f64) -> Result<f64> {
    Ok(setup.efficiency_for(&setup.problem, pressure_bar)?.0)
}

/// Efficiency expressed in percent.
pub fn efficiency_percent(eta: f64) -> f64 {
    eta * 100.0
}

/// Efficiency on a rectangular pump-power grid, row-major with the pump
/// (942 nm) power as the slow axis.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSurface {
    pub axis_pump_p: Vec<f64>,
    pub axis_pump_s: Vec<f64>,
    pub efficiency: Vec<f64>,
}

impl PowerSurface {
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.efficiency[i * self.axis_pump_s.len() + j]
    }

    /// `(P_pump_p, P_pump_s, efficiency)` in row-major order.
    pub fn records(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.axis_pump_p
            .iter()
            .enumerate()
            .flat_map(move |(i, &pp)| {
                self.axis_pump_s
                    .iter()
                    .enumerate()
                    .map(move |(j, &ps)| (pp, ps, self.at(i, j)))
            })
    }

    pub fn to_table(&self) -> ScanTable {
        let mut t = ScanTable::new(
            "power-surface",
            &[("pump_p", "W"), ("pump_s", "W"), ("efficiency", "1")],
        );
        for (pp, ps, e) in self.records() {
            t.push_row(vec![pp, ps, e]);
        }
        t
    }
}

fn check_axis(axis: &[f64], name: &str) -> Result<()> {
    if axis.is_empty() {
        return Err(Error::domain(format!("{name} axis is empty")));
    }
    if axis.iter().any(|&p| !(p > 0.0 && p.is_finite())) {
        return Err(Error::domain(format!("{name} axis must be positive")));
    }
    if axis.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::domain(format!(
            "{name} axis must be strictly increasing"
        )));
    }
    Ok(())
}

pub fn power_surface(
    setup: &ConversionSetup,
    pressure_bar: f64,
    axis_pump_p: &[f64],
    axis_pump_s: &[f64],
) -> Result<PowerSurface> {
    check_axis(axis_pump_p, "pump")?;
    check_axis(axis_pump_s, "Stokes pump")?;
    let mut values = Vec::with_capacity(axis_pump_p.len() * axis_pump_s.len());
    for &pp in axis_pump_p {
        for &ps in axis_pump_s {
            values.push(efficiency(&setup.with_powers(pp, ps), pressure_bar)?);
        }
    }
    Ok(PowerSurface {
        axis_pump_p: axis_pump_p.to_vec(),
        axis_pump_s: axis_pump_s.to_vec(),
        efficiency: values,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SurfaceModel {
    /// η = c·P_p·P_s
    #[default]
    Bilinear,
    /// η = c·P_p·P_s + a·P_p + b·P_s + d
    BilinearPlusLinear,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceFit {
    pub model: SurfaceModel,
    /// Coefficient of P_p·P_s, in 1/W².
    pub bilinear: f64,
    pub linear_pump_p: f64,
    pub linear_pump_s: f64,
    pub offset: f64,
    pub rms_residual: f64,
    pub n_points: usize,
}

/// Least-squares fit of a power surface through the normal equations.
pub fn fit_power_surface(surface: &PowerSurface, model: SurfaceModel) -> Result<SurfaceFit> {
    let records: Vec<(f64, f64, f64)> = surface.records().collect();
    let n_params = match model {
        SurfaceModel::Bilinear => 1,
        SurfaceModel::BilinearPlusLinear => 4,
    };
    if records.len() < n_params {
        return Err(Error::FitDegenerate(format!(
            "{} points for {n_params} parameters",
            records.len()
        )));
    }
    let design = DMatrix::from_fn(records.len(), n_params, |r, c| {
        let (pp, ps, _) = records[r];
        match c {
            0 => pp * ps,
            1 => pp,
            2 => ps,
            _ => 1.0,
        }
    });
    let y = DVector::from_iterator(records.len(), records.iter().map(|r| r.2));
    let normal = design.transpose() * &design;
    let rhs = design.transpose() * &y;

    let eig = SymmetricEigen::new(normal.clone());
    let max = eig.eigenvalues.iter().copied().fold(0.0, f64::max);
    let min = eig
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    if !(max > 0.0) || min / max < 1e-12 {
        return Err(Error::FitDegenerate(format!(
            "normal matrix condition {:.3e}",
            max / min.max(0.0)
        )));
    }
    let solution = normal
        .cholesky()
        .ok_or_else(|| Error::FitDegenerate("normal matrix is not positive definite".into()))?
        .solve(&rhs);

    let residual = &design * &solution - &y;
    let rms = (residual.norm_squared() / records.len() as f64).sqrt();
    let coef = |i: usize| if i < n_params { solution[i] } else { 0.0 };
    Ok(SurfaceFit {
        model,
        bilinear: coef(0),
        linear_pump_p: coef(1),
        linear_pump_s: coef(2),
        offset: coef(3),
        rms_residual: rms,
        n_points: records.len(),
    })
}

/// Equal-power cut `(P, η(P, P))` through a square surface.
pub fn diagonal_cut(surface: &PowerSurface) -> Result<Vec<(f64, f64)>> {
    if surface.axis_pump_p != surface.axis_pump_s {
        return Err(Error::domain("diagonal cut needs identical pump axes"));
    }
    Ok(surface
        .axis_pump_p
        .iter()
        .enumerate()
        .map(|(i, &p)| (p, surface.at(i, i)))
        .collect())
}

pub fn cut_table(cut: &[(f64, f64)]) -> ScanTable {
    let mut t = ScanTable::new("diagonal-cut", &[("pump", "W"), ("efficiency", "1")]);
    for &(p, e) in cut {
        t.push_row(vec![p, e]);
    }
    t
}

/// Least-squares k in η = k·P².
pub fn fit_quadratic_cut(cut: &[(f64, f64)]) -> Result<f64> {
    let (num, den) = cut
        .iter()
        .fold((0.0, 0.0), |(n, d), &(p, e)| (n + p * p * e, d + p.powi(4)));
    if !(den > 0.0) {
        return Err(Error::FitDegenerate("cut has no non-zero power".into()));
    }
    Ok(num / den)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandwidthRow {
    pub probe_nm: f64,
    pub signal_nm: f64,
    pub delta_beta: f64,
    pub efficiency: f64,
    pub normalized: f64,
    /// Both probe and signal clear of the capillary resonance guard bands.
    pub in_window: bool,
}

pub const PROBE_SCAN_MIN_NM: f64 = 800.0;
pub const PROBE_SCAN_MAX_NM: f64 = 900.0;

fn probe_grid(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(PROBE_SCAN_MIN_NM <= lo && lo <= hi && hi <= PROBE_SCAN_MAX_NM) {
        return Err(Error::domain(format!(
            "probe range [{lo}, {hi}] nm must lie within [{PROBE_SCAN_MIN_NM}, {PROBE_SCAN_MAX_NM}] nm"
        )));
    }
    if !(step > 0.0) {
        return Err(Error::domain("probe step must be positive"));
    }
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| lo + step * i as f64).collect())
}

fn clear_of_resonances(
    wavelength_nm: f64,
    setup: &ConversionSetup,
    pressure_bar: f64,
) -> Result<bool> {
    let state = setup.problem.gas.at_pressure(pressure_bar);
    let fill = gas::n_gas(wavelength_nm, &state)?;
    match fiber::transmission_window_of(wavelength_nm, &setup.problem.geom, fill) {
        Ok(_) => Ok(true),
        Err(Error::ResonanceProximity { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}

fn efficiency_at_probe(
    setup: &ConversionSetup,
    pressure_bar: f64,
    probe_nm: f64,
) -> Result<(f64, f64, f64)> {
    let waves = setup
        .problem
        .waves
        .with_probe(SpectralLine::from_wavelength(probe_nm)?)?;
    let (eta, db) = setup.efficiency_for(&setup.problem.with_waves(waves), pressure_bar)?;
    Ok((eta, db, waves.signal.wavelength_nm()))
}

/// Steps the probe with fixed pumps and recomputes the efficiency.
pub fn bandwidth_scan(
    setup: &ConversionSetup,
    pressure_bar: f64,
    probe_range_nm: (f64, f64),
    step_nm: f64,
) -> Result<Vec<BandwidthRow>> {
    let mut rows = probe_grid(probe_range_nm.0, probe_range_nm.1, step_nm)?
        .into_iter()
        .map(|probe| {
            let (eta, db, signal) = efficiency_at_probe(setup, pressure_bar, probe)?;
            let in_window = clear_of_resonances(probe, setup, pressure_bar)?
                && clear_of_resonances(signal, setup, pressure_bar)?;
            Ok(BandwidthRow {
                probe_nm: probe,
                signal_nm: signal,
                delta_beta: db,
                efficiency: eta,
                normalized: 0.0,
                in_window,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let max = rows.iter().map(|r| r.efficiency).fold(0.0, f64::max);
    if max > 0.0 {
        for r in &mut rows {
            r.normalized = r.efficiency / max;
        }
    }
    Ok(rows)
}

pub fn bandwidth_table(rows: &[BandwidthRow]) -> ScanTable {
    let mut t = ScanTable::new(
        "bandwidth",
        &[
            ("probe", "nm"),
            ("signal", "nm"),
            ("delta_beta", "rad/m"),
            ("efficiency", "1"),
            ("efficiency_normalized", "1"),
            ("in_window", "flag"),
        ],
    );
    for r in rows {
        t.push_row(vec![
            r.probe_nm,
            r.signal_nm,
            r.delta_beta,
            r.efficiency,
            r.normalized,
            r.in_window as u8 as f64,
        ]);
    }
    t
}

/// Population standard deviation of the efficiency over its mean.
pub fn relative_std(rows: &[BandwidthRow]) -> f64 {
    let n = rows.len() as f64;
    let mean = rows.iter().map(|r| r.efficiency).sum::<f64>() / n;
    let var = rows
        .iter()
        .map(|r| (r.efficiency - mean).powi(2))
        .sum::<f64>()
        / n;
    var.sqrt() / mean
}

/// Probe interval over which the efficiency stays above a fraction of its
/// value at the nominal probe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AcceptanceBandwidth {
    pub center_nm: f64,
    pub low_nm: f64,
    pub high_nm: f64,
    /// True when an edge hit the search limit, making the width a lower bound.
    pub truncated: bool,
}

impl AcceptanceBandwidth {
    pub fn width_nm(&self) -> f64 {
        self.high_nm - self.low_nm
    }
}

pub fn acceptance_bandwidth(
    setup: &ConversionSetup,
    pressure_bar: f64,
    fraction: f64,
    search_half_width_nm: f64,
) -> Result<AcceptanceBandwidth> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::domain("acceptance fraction must lie in (0, 1)"));
    }
    let center = setup.problem.waves.probe.wavelength_nm();
    let (eta0, _, _) = efficiency_at_probe(setup, pressure_bar, center)?;
    if !(eta0 > 0.0) {
        return Err(Error::domain("zero efficiency at the nominal probe"));
    }
    let excess = |l: f64| -> Result<f64> {
        Ok(efficiency_at_probe(setup, pressure_bar, l)?.0 / eta0 - fraction)
    };
    let step = 0.5;
    let edge = |direction: f64| -> Result<(f64, bool)> {
        let mut inside = center;
        loop {
            let next = inside + direction * step;
            if (next - center).abs() > search_half_width_nm {
                return Ok((center + direction * search_half_width_nm, true));
            }
            if excess(next)? < 0.0 {
                let (a, b) = if direction > 0.0 {
                    (inside, next)
                } else {
                    (next, inside)
                };
                return Ok((crate::solve::bisect(a, b, 1e-6, &excess)?, false));
            }
            inside = next;
        }
    };
    let (low, t_low) = edge(-1.0)?;
    let (high, t_high) = edge(1.0)?;
    Ok(AcceptanceBandwidth {
        center_nm: center,
        low_nm: low,
        high_nm: high,
        truncated: t_low || t_high,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LengthRow {
    pub length_m: f64,
    pub delta_beta: f64,
    pub sinc2: f64,
    pub efficiency: f64,
}

/// Efficiency versus fiber length at fixed pressure.
pub fn length_projection(
    setup: &ConversionSetup,
    pressure_bar: f64,
    lengths_m: &[f64],
) -> Result<Vec<LengthRow>> {
    if lengths_m.iter().any(|&l| !(l > 0.0 && l.is_finite())) {
        return Err(Error::domain("lengths must be positive"));
    }
    lengths_m
        .iter()
        .map(|&l| {
            let s = setup.with_length(l);
            let (eta, db) = s.efficiency_for(&s.problem, pressure_bar)?;
            Ok(LengthRow {
                length_m: l,
                delta_beta: db,
                sinc2: phasematch::sinc2_factor(db, l),
                efficiency: eta,
            })
        })
        .collect()
}

pub fn length_table(rows: &[LengthRow]) -> ScanTable {
    let mut t = ScanTable::new(
        "length-projection",
        &[
            ("length", "m"),
            ("delta_beta", "rad/m"),
            ("sinc2", "1"),
            ("efficiency", "1"),
        ],
    );
    for r in rows {
        t.push_row(vec![r.length_m, r.delta_beta, r.sinc2, r.efficiency]);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::format_number;
    use proptest::prelude::*;

    fn setup() -> ConversionSetup {
        ConversionSetup::default()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn reference_point_is_exact() {
        let s = setup();
        assert_eq!(efficiency(&s, 60.0).unwrap(), 5.2e-7);
    }

    #[test]
    fn pump_scaling() {
        let s = setup();
        let half = efficiency(&s.with_powers(2.5, 2.5), 60.0).unwrap();
        assert!(rel(half, 5.2e-7 / 4.0) < 1e-12);
        assert_eq!(efficiency(&s.with_powers(0.0, 5.0), 60.0).unwrap(), 0.0);
        assert_eq!(efficiency(&s.with_powers(5.0, 0.0), 60.0).unwrap(), 0.0);
    }

    #[test]
    fn probe_power_cancels() {
        let mut s = setup();
        let a = efficiency(&s, 45.0).unwrap();
        s.powers.probe_w = 3.0e-3;
        assert_eq!(efficiency(&s, 45.0).unwrap(), a);
    }

    #[test]
    fn percent_rendering() {
        assert_eq!(
            format_number(efficiency_percent(REFERENCE_EFFICIENCY), 2),
            "5.2e-5"
        );
    }

    #[test]
    fn singular_reference() {
        let mut s = setup();
        // put the reference exactly on a sinc² null: Δβ·L_ref = 2π
        let db = phasematch::delta_beta(&s.problem, 60.0).unwrap();
        s.reference.length_m = (2.0 * std::f64::consts::PI / db).abs();
        assert_eq!(efficiency(&s, 60.0), Err(Error::CalibrationSingular));
    }

    #[test]
    fn invalid_setups() {
        let mut s = setup();
        s.reference.efficiency = 1.5;
        assert!(efficiency(&s, 60.0).is_err());
        let mut s = setup();
        s.powers.pump_p_w = -1.0;
        assert!(efficiency(&s, 60.0).is_err());
    }

    fn axis(n: usize, max: f64) -> Vec<f64> {
        (1..=n).map(|i| max * i as f64 / n as f64).collect()
    }

    #[test]
    fn surface_shape_and_linearity() {
        let s = setup();
        let one = power_surface(&s, 60.0, &[5.0], &[5.0]).unwrap();
        assert_eq!(one.efficiency, vec![5.2e-7]);

        let ax = axis(6, 5.0);
        let surf = power_surface(&s, 60.0, &ax, &ax).unwrap();
        assert_eq!(surf.efficiency.len(), 36);
        for i in 0..ax.len() {
            // each row is proportional to the column power
            let k = surf.at(i, 0) / ax[0];
            for (j, p) in ax.iter().enumerate() {
                assert!(rel(surf.at(i, j), k * p) < 1e-14);
            }
        }
        assert_eq!(diagonal_cut(&surf).unwrap().len(), 6);
        assert!(power_surface(&s, 60.0, &[], &[1.0]).is_err());
        assert!(power_surface(&s, 60.0, &[2.0, 1.0], &[1.0]).is_err());
    }

    #[test]
    fn fit_recovers_bilinear_coefficient() {
        let s = setup();
        let ax = axis(5, 5.0);
        let surf = power_surface(&s, 60.0, &ax, &ax).unwrap();
        let expected = 5.2e-7 / 25.0;
        let fit = fit_power_surface(&surf, SurfaceModel::Bilinear).unwrap();
        assert!(rel(fit.bilinear, expected) < 1e-6);
        assert!(fit.rms_residual < 1e-9 * 5.2e-7);
        let fit = fit_power_surface(&surf, SurfaceModel::BilinearPlusLinear).unwrap();
        assert!(rel(fit.bilinear, expected) < 1e-6);
        assert!(fit.linear_pump_p.abs() < 1e-15 && fit.offset.abs() < 1e-15);
    }

    #[test]
    fn fit_degenerate_and_zero() {
        let row = PowerSurface {
            axis_pump_p: vec![1.0],
            axis_pump_s: vec![1.0, 2.0, 3.0],
            efficiency: vec![1.0, 2.0, 3.0],
        };
        assert!(matches!(
            fit_power_surface(&row, SurfaceModel::BilinearPlusLinear),
            Err(Error::FitDegenerate(_))
        ));
        let zero = PowerSurface {
            axis_pump_p: vec![1.0, 2.0],
            axis_pump_s: vec![1.0, 2.0],
            efficiency: vec![0.0; 4],
        };
        for m in [SurfaceModel::Bilinear, SurfaceModel::BilinearPlusLinear] {
            let f = fit_power_surface(&zero, m).unwrap();
            assert_eq!(f.rms_residual, 0.0);
            assert!(
                f.bilinear == 0.0
                    && f.linear_pump_p == 0.0
                    && f.linear_pump_s == 0.0
                    && f.offset == 0.0
            );
        }
    }

    #[test]
    fn diagonal_cut_is_quadratic() {
        let s = setup();
        let ax = vec![1.0, 2.0, 4.0];
        let surf = power_surface(&s, 60.0, &ax, &ax).unwrap();
        let cut = diagonal_cut(&surf).unwrap();
        assert!(rel(cut[1].1 / cut[0].1, 4.0) < 1e-12);
        assert!(rel(cut[2].1 / cut[1].1, 4.0) < 1e-12);
        let k = fit_quadratic_cut(&cut).unwrap();
        assert!(rel(k, 5.2e-7 / 25.0) < 1e-9);

        let single = power_surface(&s, 60.0, &[3.0], &[3.0]).unwrap();
        assert_eq!(
            diagonal_cut(&single).unwrap(),
            vec![(3.0, single.efficiency[0])]
        );
        let rect = power_surface(&s, 60.0, &[1.0], &[1.0, 2.0]).unwrap();
        assert!(diagonal_cut(&rect).is_err());
    }

    #[test]
    fn bandwidth_pairing_and_normalisation() {
        let s = setup();
        let rows = bandwidth_scan(&s, 60.0, (858.0, 866.0), 1.0).unwrap();
        assert_eq!(rows.len(), 9);
        let r863 = rows.iter().find(|r| r.probe_nm == 863.0).unwrap();
        assert!((r863.signal_nm - 1345.6).abs() < 1.5);
        let max = rows.iter().map(|r| r.normalized).fold(0.0, f64::max);
        assert_eq!(max, 1.0);
        assert!(rows
            .iter()
            .all(|r| (0.0..=1.0).contains(&r.normalized) && r.in_window));

        let one = bandwidth_scan(&s, 60.0, (863.0, 863.0), 1.0).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].normalized, 1.0);
        assert!(bandwidth_scan(&s, 60.0, (700.0, 866.0), 1.0).is_err());
    }

    #[test]
    fn bandwidth_flags_resonant_signal() {
        // A thin wall whose m = 1 resonance sits on the signal near 1347 nm.
        let mut s = setup();
        let n_gl: f64 = 1.45;
        let fill = gas::n_gas(1347.1, &s.problem.gas.at_pressure(60.0)).unwrap();
        s.problem.geom.wall_thickness_nm = 1347.1 / (2.0 * (n_gl * n_gl - fill * fill).sqrt());
        let rows = bandwidth_scan(&s, 60.0, (862.0, 864.0), 1.0).unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows.iter().any(|r| !r.in_window));
    }

    #[test]
    fn length_projection_values() {
        let s = setup();
        let p_opt = phasematch::optimal_pressure(&s.problem, 1.0, 300.0)
            .unwrap()
            .pressure_bar;
        let rows = length_projection(&s, p_opt, &[0.06, 0.12]).unwrap();
        assert!(rel(rows[1].efficiency / rows[0].efficiency, 4.0) < 1e-6);
        assert!(length_projection(&s, 60.0, &[0.0]).is_err());

        let tiny = length_projection(&s, 60.0, &[1e-9]).unwrap();
        assert!(tiny[0].efficiency < 1e-20);
    }

    #[test]
    fn length_rolloff_hand_value() {
        // 4·sinc²(−3.42)/sinc²(−1.71) from the sinc² factor alone
        let ratio =
            4.0 * phasematch::sinc2_factor(-57.0, 0.12) / phasematch::sinc2_factor(-57.0, 0.06);
        assert!(rel(ratio, 0.079) < 0.1, "{ratio}");
    }

    proptest! {
        #[test]
        fn quadratic_in_common_pump_scale(t in 0.05f64..20.0, pp in 0.1f64..7.0, ps in 0.1f64..7.0) {
            let s = setup();
            let base = efficiency(&s.with_powers(pp, ps), 50.0).unwrap();
            let scaled = efficiency(&s.with_powers(t * pp, t * ps), 50.0).unwrap();
            prop_assert!(rel(scaled, t * t * base) < 1e-12);
        }
    }
}
