//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::f64::consts::PI;
use std::path::Path;
use std::process::Command as Process;
use std::time::Instant;

use csrs_fiber::cli::{self, Command};
use csrs_fiber::config::RunConfig;
use csrs_fiber::conversion::{self, ConversionSetup, PowerSurface, SurfaceModel};
use csrs_fiber::fiber::{self, FiberGeometry, IndexBackend};
use csrs_fiber::gas::{self, GasState};
use csrs_fiber::noise::{self, NoiseModel};
use csrs_fiber::phasematch::{self, PhaseMatchProblem};
use csrs_fiber::spectral::{self, FourWaveSet, SpectralLine, DEFAULT_RAMAN_SHIFT_THZ};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn energy_closure() -> Outcome {
    let base = FourWaveSet::nominal();
    let mut worst = 0.0f64;
    for i in 0..1000 {
        let probe = 800.0 + 100.0 * i as f64 / 999.0;
        let set = base
            .with_probe(SpectralLine::from_wavelength(probe).map_err(err)?)
            .map_err(err)?;
        let r =
            -set.pump_p.frequency_thz() + set.pump_s.frequency_thz() + set.probe.frequency_thz()
                - set.signal.frequency_thz();
        worst = worst.max(r.abs());
    }
    check(
        worst < 1e-9,
        format!("max residual {worst:.3e} THz over 1000 probes"),
    )
}

fn pairing() -> Outcome {
    let s = |p: f64| -> Result<f64, String> {
        Ok(spectral::signal_wavelength(
            SpectralLine::from_wavelength(p).map_err(err)?,
            DEFAULT_RAMAN_SHIFT_THZ,
        )
        .map_err(err)?
        .wavelength_nm())
    };
    let (a, b) = (s(863.0)?, s(859.0)?);
    check(
        (a - 1346.0).abs() <= 1.5 && (b - 1336.0).abs() <= 1.5,
        format!("863 -> {a:.3} nm, 859 -> {b:.3} nm"),
    )
}

fn sign_changes(problem: &PhaseMatchProblem) -> Result<usize, String> {
    let mut count = 0;
    let mut prev = problem.delta_beta(1.0).map_err(err)?;
    for i in 1..=299 {
        let db = problem.delta_beta(1.0 + i as f64).map_err(err)?;
        if (prev < 0.0) != (db < 0.0) {
            count += 1;
        }
        prev = db;
    }
    Ok(count)
}

fn uncalibrated_optimum() -> Outcome {
    let problem = PhaseMatchProblem::default();
    let changes = sign_changes(&problem)?;
    let start = Instant::now();
    let opt = phasematch::optimal_pressure(&problem, 1.0, 300.0).map_err(err)?;
    let elapsed = start.elapsed().as_secs_f64();
    let in_band = (90.0..=160.0).contains(&opt.pressure_bar);
    check(
        changes == 1 && in_band && elapsed < 1.0,
        format!(
            "sign changes {changes}, p_opt {:.3} bar (band [90, 160]), Δβ(0) {:.2} rad/m, {elapsed:.3} s",
            opt.pressure_bar,
            problem.delta_beta(0.0).map_err(err)?
        ),
    )
}

fn calibrated_optimum() -> Outcome {
    let mut cfg = RunConfig::default();
    let doc = cli::run_command(Command::Calibrate, &cfg).map_err(err)?;
    let t = &doc.sections[0];
    let scale = t.column("core_radius_scale").unwrap()[0];
    let gap = t.column("uncalibrated_gap").unwrap()[0];
    cfg.set(
        "fiber.core_radius_scale",
        &format!("{scale:e}"),
        "acceptance",
    )
    .map_err(err)?;
    let p = cli::run_command(Command::Optimize, &cfg)
        .map_err(err)?
        .sections[0]
        .column("p_opt")
        .unwrap()[0];
    check(
        (1.25..=1.55).contains(&scale) && (p - 60.0).abs() <= 0.1,
        format!("scale {scale:.5} (band [1.25, 1.55]), re-optimized {p:.4} bar, uncalibrated gap {gap:.2} bar"),
    )
}

fn power_independence() -> Outcome {
    let p_opt = |key: &str, factor: f64| -> Result<u64, String> {
        let mut cfg = RunConfig::default();
        if !key.is_empty() {
            let v = cfg.num(key) * factor;
            cfg.set(key, &format!("{v:e}"), "acceptance").map_err(err)?;
        }
        let doc = cli::run_command(Command::Optimize, &cfg).map_err(err)?;
        Ok(doc.sections[0].column("p_opt").unwrap()[0].to_bits())
    };
    let base = p_opt("", 1.0)?;
    let mut same = true;
    for key in ["conversion.pump_p_w", "conversion.pump_s_w"] {
        for f in [0.1, 10.0] {
            same &= p_opt(key, f)? == base;
        }
    }
    check(
        same,
        format!(
            "p_opt {:.6} bar under ×0.1/×10 of each pump",
            f64::from_bits(base)
        ),
    )
}

fn power_law() -> Outcome {
    let setup = ConversionSetup::default();
    let p = setup.reference.pressure_bar;
    let mut worst = 0.0f64;
    for (pp, ps) in [(1.0, 1.0), (2.5, 2.5), (0.3, 0.3)] {
        let base = conversion::efficiency(&setup.with_powers(pp, ps), p).map_err(err)?;
        for t in [0.5, 2.0, 7.0] {
            let scaled =
                conversion::efficiency(&setup.with_powers(t * pp, t * ps), p).map_err(err)?;
            worst = worst.max((scaled / (t * t * base) - 1.0).abs());
        }
    }
    let eta = conversion::efficiency(&setup, p).map_err(err)?;
    let percent = csrs_fiber::table::format_number(conversion::efficiency_percent(eta), 2);
    check(
        worst <= 1e-12 && eta == 5.2e-7 && percent == "5.2e-5",
        format!("t² relative error {worst:.2e}, η_ref {eta:e}, percent {percent}"),
    )
}

fn fit_recovery() -> Outcome {
    let setup = ConversionSetup::default();
    let axis: Vec<f64> = (1..=5).map(|i| i as f64).collect();
    let surface = conversion::power_surface(&setup, 60.0, &axis, &axis).map_err(err)?;
    let truth = 5.2e-7 / 25.0;
    let clean = conversion::fit_power_surface(&surface, SurfaceModel::Bilinear).map_err(err)?;
    let clean_err = (clean.bilinear / truth - 1.0).abs();

    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    let normal = Normal::new(0.0, 0.01).unwrap();
    let noisy = PowerSurface {
        efficiency: surface
            .efficiency
            .iter()
            .map(|e| e * (1.0 + normal.sample(&mut rng)))
            .collect(),
        ..surface.clone()
    };
    let fit = conversion::fit_power_surface(&noisy, SurfaceModel::Bilinear).map_err(err)?;
    let noisy_err = (fit.bilinear / truth - 1.0).abs();
    check(
        clean_err <= 1e-6 && noisy_err <= 0.01,
        format!("noiseless error {clean_err:.2e}, 1% noise error {noisy_err:.2e}"),
    )
}

fn bandwidth() -> Outcome {
    let base = ConversionSetup::default();
    let scale = phasematch::calibrate_core_radius(&base.problem, 60.0, (0.5, 3.0)).map_err(err)?;
    let setup = ConversionSetup {
        problem: base.problem.with_scale(scale),
        ..base
    };
    let rows = conversion::bandwidth_scan(&setup, 60.0, (858.0, 866.0), 1.0).map_err(err)?;
    let rsd = conversion::relative_std(&rows);
    let acc = conversion::acceptance_bandwidth(&setup, 60.0, 0.5, 200.0).map_err(err)?;
    let ratio = acc.width_nm() / cli::CRYSTAL_BANDWIDTH_NM;
    check(
        rsd <= 0.05 && acc.width_nm() >= 10.0 && ratio >= 100.0,
        format!(
            "relative std {:.3}%, 50% acceptance {:.1} nm [{:.1}, {:.1}]{}, ratio to 0.1 nm {ratio:.0}",
            100.0 * rsd,
            acc.width_nm(),
            acc.low_nm,
            acc.high_nm,
            if acc.truncated { " (lower bound)" } else { "" }
        ),
    )
}

fn resonance_windows() -> Outcome {
    let geom = FiberGeometry::default();
    let gas = GasState::default().at_pressure(60.0);
    let res = fiber::resonance_wavelengths(&geom, 1.0, 3).map_err(err)?;
    let (l2, l3) = (res[1], res[2]);
    let waves = FourWaveSet::nominal();
    let operating =
        [waves.pump_p, waves.pump_s, waves.probe, waves.signal].map(|l| l.wavelength_nm());
    let mut min_margin = f64::INFINITY;
    for &l in &operating {
        let n = gas::n_gas(l, &gas).map_err(err)?;
        min_margin = min_margin.min(
            fiber::transmission_window_of(l, &geom, n)
                .map_err(err)?
                .margin_nm,
        );
    }
    let mut grid: Vec<f64> = (800..=1600).map(f64::from).collect();
    grid.extend(operating);
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let n_fill = gas::n_gas(waves.probe.wavelength_nm(), &gas).map_err(err)?;
    let loss = fiber::loss_spectrum_estimate(&grid, &geom, n_fill, f64::INFINITY).map_err(err)?;
    let worst_loss = operating
        .iter()
        .map(|&l| {
            loss.iter()
                .find(|s| s.wavelength_nm == l)
                .unwrap()
                .relative_loss
        })
        .fold(0.0, f64::max);
    check(
        (l2 - 1207.0).abs() <= 15.0 && (l3 - 805.0).abs() <= 10.0 && min_margin >= 40.0 && worst_loss <= 10.0,
        format!(
            "λ₂ {l2:.1} nm, λ₃ {l3:.1} nm, min margin {min_margin:.1} nm, worst operating loss {worst_loss:.2}× grid minimum"
        ),
    )
}

fn backend_equivalence() -> Outcome {
    let geom = FiberGeometry::default();
    let a = geom.effective_radius_nm();
    let u = geom.mode_u;
    let mut worst = 0.0f64;
    for p in [0.0, 60.0, 300.0] {
        let state = GasState::default().at_pressure(p);
        for l in (800..=1600).map(f64::from) {
            let n = gas::n_gas(l, &state).map_err(err)?;
            let exact =
                fiber::effective_index(l, n, &geom, IndexBackend::Capillary).map_err(err)? - n;
            let first = -(u * u * l * l) / (8.0 * PI * PI * a * a * n);
            worst = worst.max(((exact - first) / exact).abs());
        }
    }
    let contrast = (1.45f64 * 1.45 - 1.0).sqrt();
    let mut exact_at_mid = true;
    for m in 0..4 {
        let l = 2.0 * geom.wall_thickness_nm * contrast / (m as f64 + 0.5);
        let cap = fiber::effective_index(l, 1.0, &geom, IndexBackend::Capillary).map_err(err)?;
        let cor =
            fiber::effective_index(l, 1.0, &geom, IndexBackend::ResonanceCorrected).map_err(err)?;
        exact_at_mid &= cap == cor;
    }
    check(
        worst < 1e-3 && exact_at_mid,
        format!("max relative deviation {worst:.2e}, midpoints identical: {exact_at_mid}"),
    )
}

fn noise_budget() -> Outcome {
    let m = NoiseModel::default();
    let b = |p1550: f64, p942: f64| noise::background_rate(p1550, p942, &m).map_err(err);
    let (z, s, full) = (b(0.0, 0.0)?, b(5.0, 0.0)?, b(5.0, 5.0)?);
    let t = m.raman_942_threshold_w;
    let jump = (m.raman_942(t) - (m.raman_942_below_slope * t)).abs()
        + (m.raman_942(t + 1e-13) - m.raman_942(t)).abs();
    let snr = noise::snr(&ConversionSetup::default(), 60.0, &m)
        .map_err(err)?
        .snr;
    check(
        z == 270.0
            && s == 1770.0
            && (full - 4270.0).abs() <= 1.0
            && jump < 1e-9
            && (snr / 53.0 - 1.0).abs() <= 0.1,
        format!("{z} / {s} / {full:.3} cps, threshold jump {jump:.1e} cps, SNR {snr:.2}"),
    )
}

fn run_binary(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Process::new(env!("CARGO_BIN_EXE_csrs"))
        .args(args)
        .output()
        .map_err(err)?;
    if !out.status.success() {
        return Err(format!("csrs {args:?} exited {:?}", out.status.code()));
    }
    Ok(out.stdout)
}

fn determinism() -> Outcome {
    for c in Command::all() {
        for format in ["csv", "jsonl"] {
            let args = [c.name(), "--format", format];
            if run_binary(&args)? != run_binary(&args)? {
                return Err(format!(
                    "{} --format {format} differs between runs",
                    c.name()
                ));
            }
        }
    }
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    for name in ["optimize", "bandwidth", "noise"] {
        let expected = std::fs::read(golden.join(format!("{name}.csv"))).map_err(err)?;
        if run_binary(&[name])? != expected {
            return Err(format!("{name} does not match its golden file"));
        }
    }
    Ok("8 commands × 2 formats repeatable, 3 golden files matched".into())
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("energy-conservation closure", energy_closure),
        ("pairing reproduction", pairing),
        ("optimum pressure, uncalibrated", uncalibrated_optimum),
        ("optimum pressure, calibrated", calibrated_optimum),
        ("pump-power independence of the optimum", power_independence),
        ("power-law suite", power_law),
        ("fit recovery", fit_recovery),
        ("bandwidth flatness", bandwidth),
        ("resonance windows", resonance_windows),
        ("backend oracle equivalence", backend_equivalence),
        ("noise budget", noise_budget),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(d) => println!("PASS {:>2} {name}: {d}", i + 1),
            Err(d) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {d}", i + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
