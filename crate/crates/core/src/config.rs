//! Flat `section.key = value` run configuration.
//!
//! Every key has a default, unknown keys are rejected, and errors carry the
//! offending key and line. [`RunConfig::normalized`] renders every key in a
//! fixed order; parsing that text back yields the same dump byte for byte.

use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use crate::conversion::{ConversionSetup, PumpPowers, ReferencePoint, SurfaceModel};
use crate::error::{Error, Result};
use crate::fiber::{FiberGeometry, GlassIndex, IndexBackend};
use crate::gas::{GasState, TwoPoleModel};
use crate::noise::NoiseModel;
use crate::phasematch::{Objective, PhaseMatchProblem};
use crate::spectral::{FourWaveSet, SpectralLine};
use crate::table::Format;

#[derive(Debug, Clone, Copy)]
enum Rule {
    Positive,
    NonNegative,
    /// open interval (0, 1)
    Fraction,
    /// half-open interval (0, 1]
    Efficiency,
    AboveOne,
    Count,
    Precision,
    Choice(&'static [&'static str]),
}

#[derive(Debug, Clone, Copy)]
enum Init {
    Num(f64),
    Text(&'static str),
}

struct KeySpec {
    name: &'static str,
    default: Init,
    rule: Rule,
}

const fn num(name: &'static str, v: f64, rule: Rule) -> KeySpec {
    KeySpec {
        name,
        default: Init::Num(v),
        rule,
    }
}

const fn choice(name: &'static str, v: &'static str, options: &'static [&'static str]) -> KeySpec {
    KeySpec {
        name,
        default: Init::Text(v),
        rule: Rule::Choice(options),
    }
}

use Rule::*;

const BACKENDS: &[&str] = &["capillary", "resonance_corrected"];
const OBJECTIVES: &[&str] = &["sinc2", "density_weighted"];
const FIT_MODELS: &[&str] = &["bilinear", "bilinear_plus_linear"];
const FORMATS: &[&str] = &["csv", "jsonl"];

static KEYS: &[KeySpec] = &[
    num("gas.c1", 1.48956e-2, NonNegative),
    num("gas.d1", 180.7, Positive),
    num("gas.c2", 4.9037e-3, NonNegative),
    num("gas.d2", 92.0, Positive),
    num("gas.p0_bar", 1.01325, Positive),
    num("gas.t0_k", 273.15, Positive),
    num("gas.z", 1.0, Positive),
    num("gas.temperature_k", 293.15, Positive),
    num("fiber.core_diameter_um", 46.0, Positive),
    num("fiber.wall_nm", 1150.0, Positive),
    num("fiber.length_m", 0.06, Positive),
    num("fiber.n_glass", 1.45, AboveOne),
    num("fiber.u", crate::fiber::J0_FIRST_ZERO, Positive),
    num("fiber.core_radius_scale", 1.0, Positive),
    num("fiber.mode_field_factor", 0.64, Positive),
    num("fiber.n_capillaries", 7.0, Count),
    choice("fiber.backend", "capillary", BACKENDS),
    num("fiber.resonance_guard_rad", 0.05, NonNegative),
    num("waves.pump_p_nm", 942.0, Positive),
    num("waves.pump_s_nm", 1550.0, Positive),
    num("waves.probe_nm", 863.0, Positive),
    num(
        "waves.raman_shift_thz",
        crate::spectral::DEFAULT_RAMAN_SHIFT_THZ,
        Positive,
    ),
    num(
        "waves.resonance_tolerance_thz",
        crate::spectral::DEFAULT_RESONANCE_TOLERANCE_THZ,
        NonNegative,
    ),
    num("conversion.pump_p_w", 5.0, NonNegative),
    num("conversion.pump_s_w", 5.0, NonNegative),
    num("conversion.probe_w", 1e-6, NonNegative),
    num("conversion.pressure_bar", 60.0, NonNegative),
    num("conversion.ref_pump_p_w", 5.0, Positive),
    num("conversion.ref_pump_s_w", 5.0, Positive),
    num("conversion.ref_length_m", 0.06, Positive),
    num("conversion.ref_pressure_bar", 60.0, NonNegative),
    num(
        "conversion.eta_ref",
        crate::conversion::REFERENCE_EFFICIENCY,
        Fraction,
    ),
    choice("conversion.fit_model", "bilinear", FIT_MODELS),
    num("noise.dark_cps", 270.0, NonNegative),
    num("noise.stray_slope_1550", 1500.0 / 5.0, NonNegative),
    num("noise.raman_942_below_slope", 300.0 / 3.5, NonNegative),
    num("noise.raman_942_threshold_w", 3.5, Positive),
    num("noise.raman_942_above_slope", 2200.0 / 1.5, NonNegative),
    num("noise.detector_efficiency", 0.10, Efficiency),
    choice("scan.objective", "sinc2", OBJECTIVES),
    num("scan.p_min_bar", 1.0, NonNegative),
    num("scan.p_max_bar", 300.0, Positive),
    num("scan.p_step_bar", 1.0, Positive),
    num("scan.probe_min_nm", 858.0, Positive),
    num("scan.probe_max_nm", 866.0, Positive),
    num("scan.probe_step_nm", 1.0, Positive),
    num("scan.grid_n", 5.0, Count),
    num("scan.grid_m", 5.0, Count),
    num("scan.power_max_w", 5.0, Positive),
    num("scan.loss_min_nm", 800.0, Positive),
    num("scan.loss_max_nm", 1600.0, Positive),
    num("scan.loss_step_nm", 1.0, Positive),
    num(
        "scan.loss_ceiling",
        crate::fiber::DEFAULT_LOSS_CEILING,
        Positive,
    ),
    num("scan.target_p_opt_bar", 60.0, Positive),
    num("scan.scale_min", 0.5, Positive),
    num("scan.scale_max", 3.0, Positive),
    num("scan.noise_max_w", 5.0, NonNegative),
    num("scan.noise_step_w", 0.5, Positive),
    choice("output.format", "csv", FORMATS),
    num(
        "output.precision",
        crate::table::DEFAULT_PRECISION as f64,
        Precision,
    ),
];

#[derive(Debug, Clone, PartialEq)]
enum Value {
    Num(f64),
    Text(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    values: Vec<Value>,
    /// Where each value came from, for error messages.
    origins: Vec<Option<String>>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            values: KEYS
                .iter()
                .map(|k| match k.default {
                    Init::Num(v) => Value::Num(v),
                    Init::Text(s) => Value::Text(s.to_string()),
                })
                .collect(),
            origins: vec![None; KEYS.len()],
        }
    }
}

fn config_error(key: &str, location: &str, message: impl Into<String>) -> Error {
    Error::Config {
        key: key.to_string(),
        location: location.to_string(),
        message: message.into(),
    }
}

fn check_rule(rule: Rule, raw: &str) -> std::result::Result<Value, String> {
    if let Choice(options) = rule {
        return if options.contains(&raw) {
            Ok(Value::Text(raw.to_string()))
        } else {
            Err(format!("expected one of {}", options.join(", ")))
        };
    }
    let v: f64 = raw
        .parse()
        .map_err(|_| format!("cannot parse `{raw}` as a number"))?;
    if !v.is_finite() {
        return Err("value must be finite".into());
    }
    let ok = match rule {
        Positive => v > 0.0,
        NonNegative => v >= 0.0,
        Fraction => v > 0.0 && v < 1.0,
        Efficiency => v > 0.0 && v <= 1.0,
        AboveOne => v > 1.0,
        Count => v >= 1.0 && v.fract() == 0.0 && v <= 1e6,
        Precision => (1.0..=17.0).contains(&v) && v.fract() == 0.0,
        Choice(_) => unreachable!(),
    };
    if ok {
        Ok(Value::Num(v))
    } else {
        Err(match rule {
            Positive => format!("must be positive, got {v}"),
            NonNegative => format!("must be non-negative, got {v}"),
            Fraction => format!("must lie in (0, 1), got {v}"),
            Efficiency => format!("must lie in (0, 1], got {v}"),
            AboveOne => format!("must exceed 1, got {v}"),
            Count => format!("must be a positive integer, got {v}"),
            Precision => format!("must be an integer in [1, 17], got {v}"),
            Choice(_) => unreachable!(),
        })
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let location = format!("line {}", i + 1);
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(config_error(line, &location, "expected `key = value`"));
            };
            let key = key.trim();
            if let Some(idx) = index_of(key) {
                if let Some(prev) = &cfg.origins[idx] {
                    return Err(config_error(
                        key,
                        &location,
                        format!("duplicate key, first set at {prev}"),
                    ));
                }
            }
            cfg.set(key, value.trim(), &location)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Sets one key from its textual value, checking the key's own rule.
    pub fn set(&mut self, key: &str, raw: &str, location: &str) -> Result<()> {
        let idx = index_of(key).ok_or_else(|| config_error(key, location, "unknown key"))?;
        let value = check_rule(KEYS[idx].rule, raw).map_err(|m| config_error(key, location, m))?;
        self.values[idx] = value;
        self.origins[idx] = Some(location.to_string());
        Ok(())
    }

    pub fn num(&self, key: &str) -> f64 {
        match &self.values[index_of(key).unwrap_or_else(|| panic!("no config key {key}"))] {
            Value::Num(v) => *v,
            Value::Text(_) => panic!("config key {key} is not numeric"),
        }
    }

    pub fn text(&self, key: &str) -> &str {
        match &self.values[index_of(key).unwrap_or_else(|| panic!("no config key {key}"))] {
            Value::Text(s) => s,
            Value::Num(_) => panic!("config key {key} is not text"),
        }
    }

    fn origin(&self, key: &str) -> String {
        index_of(key)
            .and_then(|i| self.origins[i].clone())
            .unwrap_or_else(|| "default".to_string())
    }

    /// Every key in canonical order as `key = value` lines.
    pub fn normalized(&self) -> String {
        let mut out = String::new();
        for (spec, value) in KEYS.iter().zip(&self.values) {
            match value {
                Value::Num(v) => {
                    let _ = writeln!(out, "{} = {}", spec.name, v);
                }
                Value::Text(s) => {
                    let _ = writeln!(out, "{} = {}", spec.name, s);
                }
            }
        }
        out
    }

    pub fn sha256(&self) -> String {
        Sha256::digest(self.normalized().as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    /// Cross-key checks, reported against the key most likely at fault.
    pub fn validate(&self) -> Result<()> {
        let blame = |key: &str, e: Error| config_error(key, &self.origin(key), e.to_string());
        self.gas().validate().map_err(|e| blame("gas.d2", e))?;
        self.geometry()
            .validate()
            .map_err(|e| blame("fiber.resonance_guard_rad", e))?;
        let waves = self
            .waves()
            .map_err(|e| blame("waves.raman_shift_thz", e))?;
        let problem = PhaseMatchProblem {
            waves,
            ..self.problem_template()
        };
        problem.validate().map_err(|e| blame("fiber.wall_nm", e))?;
        self.noise()
            .validate()
            .map_err(|e| blame("noise.detector_efficiency", e))?;
        if self.num("scan.p_max_bar") <= self.num("scan.p_min_bar") {
            return Err(config_error(
                "scan.p_max_bar",
                &self.origin("scan.p_max_bar"),
                "must exceed scan.p_min_bar",
            ));
        }
        if self.num("scan.probe_max_nm") < self.num("scan.probe_min_nm") {
            return Err(config_error(
                "scan.probe_max_nm",
                &self.origin("scan.probe_max_nm"),
                "must not be below scan.probe_min_nm",
            ));
        }
        if self.num("scan.loss_max_nm") <= self.num("scan.loss_min_nm") {
            return Err(config_error(
                "scan.loss_max_nm",
                &self.origin("scan.loss_max_nm"),
                "must exceed scan.loss_min_nm",
            ));
        }
        if self.num("scan.scale_max") <= self.num("scan.scale_min") {
            return Err(config_error(
                "scan.scale_max",
                &self.origin("scan.scale_max"),
                "must exceed scan.scale_min",
            ));
        }
        Ok(())
    }

    pub fn gas(&self) -> GasState {
        GasState {
            pressure_bar: 0.0,
            temperature_k: self.num("gas.temperature_k"),
            model: TwoPoleModel {
                c1: self.num("gas.c1"),
                d1: self.num("gas.d1"),
                c2: self.num("gas.c2"),
                d2: self.num("gas.d2"),
                p0_bar: self.num("gas.p0_bar"),
                t0_k: self.num("gas.t0_k"),
            },
            compressibility: self.num("gas.z"),
        }
    }

    pub fn geometry(&self) -> FiberGeometry {
        FiberGeometry {
            core_radius_um: self.num("fiber.core_diameter_um") / 2.0,
            wall_thickness_nm: self.num("fiber.wall_nm"),
            n_capillaries: self.num("fiber.n_capillaries") as u32,
            length_m: self.num("fiber.length_m"),
            glass_index: GlassIndex::Fixed(self.num("fiber.n_glass")),
            mode_u: self.num("fiber.u"),
            core_radius_scale: self.num("fiber.core_radius_scale"),
            mode_field_factor: self.num("fiber.mode_field_factor"),
            resonance_guard_rad: self.num("fiber.resonance_guard_rad"),
        }
    }

    pub fn backend(&self) -> IndexBackend {
        match self.text("fiber.backend") {
            "resonance_corrected" => IndexBackend::ResonanceCorrected,
            _ => IndexBackend::Capillary,
        }
    }

    pub fn waves(&self) -> Result<FourWaveSet> {
        FourWaveSet::new(
            SpectralLine::from_wavelength(self.num("waves.pump_p_nm"))?,
            SpectralLine::from_wavelength(self.num("waves.pump_s_nm"))?,
            SpectralLine::from_wavelength(self.num("waves.probe_nm"))?,
            self.num("waves.raman_shift_thz"),
            self.num("waves.resonance_tolerance_thz"),
        )
    }

    pub fn objective(&self) -> Objective {
        match self.text("scan.objective") {
            "density_weighted" => Objective::DensityWeighted,
            _ => Objective::Sinc2,
        }
    }

    fn problem_template(&self) -> PhaseMatchProblem {
        PhaseMatchProblem {
            waves: FourWaveSet::nominal(),
            geom: self.geometry(),
            gas: self.gas(),
            backend: self.backend(),
            objective: self.objective(),
        }
    }

    pub fn problem(&self) -> Result<PhaseMatchProblem> {
        Ok(PhaseMatchProblem {
            waves: self.waves()?,
            ..self.problem_template()
        })
    }

    pub fn setup(&self) -> Result<ConversionSetup> {
        Ok(ConversionSetup {
            powers: PumpPowers {
                pump_p_w: self.num("conversion.pump_p_w"),
                pump_s_w: self.num("conversion.pump_s_w"),
                probe_w: self.num("conversion.probe_w"),
            },
            length_m: self.num("fiber.length_m"),
            reference: ReferencePoint {
                pump_p_w: self.num("conversion.ref_pump_p_w"),
                pump_s_w: self.num("conversion.ref_pump_s_w"),
                length_m: self.num("conversion.ref_length_m"),
                pressure_bar: self.num("conversion.ref_pressure_bar"),
                efficiency: self.num("conversion.eta_ref"),
            },
            problem: self.problem()?,
        })
    }

    pub fn fit_model(&self) -> SurfaceModel {
        match self.text("conversion.fit_model") {
            "bilinear_plus_linear" => SurfaceModel::BilinearPlusLinear,
            _ => SurfaceModel::Bilinear,
        }
    }

    pub fn noise(&self) -> NoiseModel {
        NoiseModel {
            dark_cps: self.num("noise.dark_cps"),
            stray_slope_1550: self.num("noise.stray_slope_1550"),
            raman_942_below_slope: self.num("noise.raman_942_below_slope"),
            raman_942_threshold_w: self.num("noise.raman_942_threshold_w"),
            raman_942_above_slope: self.num("noise.raman_942_above_slope"),
            detector_efficiency: self.num("noise.detector_efficiency"),
        }
    }

    pub fn format(&self) -> Format {
        self.text("output.format").parse().unwrap_or_default()
    }

    pub fn precision(&self) -> usize {
        self.num("output.precision") as usize
    }

    pub fn keys() -> impl Iterator<Item = &'static str> {
        KEYS.iter().map(|k| k.name)
    }
}

fn index_of(key: &str) -> Option<usize> {
    KEYS.iter().position(|k| k.name == key)
}
