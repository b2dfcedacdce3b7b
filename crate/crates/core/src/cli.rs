//! Command dispatch for the `csrs` binary.
//!
//! Exit codes: 0 success, 2 config or usage error, 3 numeric failure,
//! 4 I/O error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};

use crate::config::RunConfig;
use crate::conversion;
use crate::error::{Error, Result};
use crate::fiber;
use crate::gas;
use crate::noise;
use crate::phasematch;
use crate::table::{self, Format, Provenance, ScanTable};

pub const TOOL_NAME: &str = "csrs-fiber";

/// Spectral acceptance of crystal-based converters, nm.
pub const CRYSTAL_BANDWIDTH_NM: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    PressureScan,
    Optimize,
    PowerSurface,
    Bandwidth,
    LossSpectrum,
    Noise,
    Calibrate,
    Report,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::PressureScan => "pressure-scan",
            Command::Optimize => "optimize",
            Command::PowerSurface => "power-surface",
            Command::Bandwidth => "bandwidth",
            Command::LossSpectrum => "loss-spectrum",
            Command::Noise => "noise",
            Command::Calibrate => "calibrate",
            Command::Report => "report",
        }
    }

    pub fn all() -> [Command; 8] {
        [
            Command::PressureScan,
            Command::Optimize,
            Command::PowerSurface,
            Command::Bandwidth,
            Command::LossSpectrum,
            Command::Noise,
            Command::Calibrate,
            Command::Report,
        ]
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "csrs",
    version,
    about = "Raman frequency conversion in hydrogen-filled hollow-core fiber"
)]
pub struct Args {
    #[arg(value_enum)]
    pub command: Command,
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output file (default stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub format: Option<String>,
    #[arg(long)]
    pub precision: Option<String>,
    #[arg(long)]
    pub pmin: Option<String>,
    #[arg(long)]
    pub pmax: Option<String>,
    #[arg(long)]
    pub pstep: Option<String>,
    #[arg(long = "probe-min")]
    pub probe_min: Option<String>,
    #[arg(long = "probe-max")]
    pub probe_max: Option<String>,
    #[arg(long = "step-nm")]
    pub step_nm: Option<String>,
    /// Power-surface grid as NxM.
    #[arg(long)]
    pub grid: Option<String>,
}

impl Args {
    /// Applies command-line overrides on top of the parsed config.
    pub fn apply_overrides(&self, cfg: &mut RunConfig) -> Result<()> {
        let pairs = [
            ("--format", "output.format", &self.format),
            ("--precision", "output.precision", &self.precision),
            ("--pmin", "scan.p_min_bar", &self.pmin),
            ("--pmax", "scan.p_max_bar", &self.pmax),
            ("--pstep", "scan.p_step_bar", &self.pstep),
            ("--probe-min", "scan.probe_min_nm", &self.probe_min),
            ("--probe-max", "scan.probe_max_nm", &self.probe_max),
            ("--step-nm", "scan.probe_step_nm", &self.step_nm),
        ];
        for (flag, key, value) in pairs {
            if let Some(v) = value {
                cfg.set(key, v, flag)?;
            }
        }
        if let Some(grid) = &self.grid {
            let (n, m) = grid.split_once(['x', 'X']).ok_or_else(|| Error::Config {
                key: "scan.grid_n".into(),
                location: "--grid".into(),
                message: format!("expected NxM, got `{grid}`"),
            })?;
            cfg.set("scan.grid_n", n.trim(), "--grid")?;
            cfg.set("scan.grid_m", m.trim(), "--grid")?;
        }
        cfg.validate()
    }
}

/// One or more tables produced by a command.
#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub command: Command,
    pub sections: Vec<ScanTable>,
}

fn linspace_to(max: f64, n: usize) -> Vec<f64> {
    (1..=n).map(|i| max * i as f64 / n as f64).collect()
}

fn grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    (0..=n).map(|i| lo + step * i as f64).collect()
}

fn optimize_table(cfg: &RunConfig) -> Result<ScanTable> {
    let problem = cfg.problem()?;
    let opt = phasematch::optimal_pressure(
        &problem,
        cfg.num("scan.p_min_bar"),
        cfg.num("scan.p_max_bar"),
    )?;
    let mut t = ScanTable::new(
        "optimize",
        &[
            ("p_opt", "bar"),
            ("delta_beta", "rad/m"),
            ("sinc2", "1"),
            ("objective", "1"),
        ],
    );
    t.push_row(vec![
        opt.pressure_bar,
        opt.delta_beta,
        opt.sinc2,
        opt.objective,
    ]);
    Ok(t)
}

fn bandwidth_rows(cfg: &RunConfig) -> Result<Vec<conversion::BandwidthRow>> {
    conversion::bandwidth_scan(
        &cfg.setup()?,
        cfg.num("conversion.pressure_bar"),
        (cfg.num("scan.probe_min_nm"), cfg.num("scan.probe_max_nm")),
        cfg.num("scan.probe_step_nm"),
    )
}

fn noise_table(cfg: &RunConfig) -> Result<ScanTable> {
    let rows = noise::noise_sweep(
        &cfg.setup()?,
        cfg.num("conversion.pressure_bar"),
        &cfg.noise(),
        cfg.num("scan.noise_max_w"),
        cfg.num("scan.noise_step_w"),
    )?;
    Ok(noise::noise_table(&rows))
}

fn bandwidth_summary(cfg: &RunConfig, rows: &[conversion::BandwidthRow]) -> Result<ScanTable> {
    let setup = cfg.setup()?;
    let acceptance =
        conversion::acceptance_bandwidth(&setup, cfg.num("conversion.pressure_bar"), 0.5, 200.0)?;
    let mut t = ScanTable::new(
        "bandwidth-summary",
        &[
            ("relative_std", "1"),
            ("acceptance_low", "nm"),
            ("acceptance_high", "nm"),
            ("acceptance_width", "nm"),
            ("truncated", "flag"),
            ("ratio_to_crystal", "1"),
        ],
    );
    t.push_row(vec![
        conversion::relative_std(rows),
        acceptance.low_nm,
        acceptance.high_nm,
        acceptance.width_nm(),
        acceptance.truncated as u8 as f64,
        acceptance.width_nm() / CRYSTAL_BANDWIDTH_NM,
    ]);
    Ok(t)
}

pub fn run_command(command: Command, cfg: &RunConfig) -> Result<Document> {
    let sections = match command {
        Command::PressureScan => {
            let rows = phasematch::pressure_scan(
                &cfg.problem()?,
                cfg.num("scan.p_min_bar"),
                cfg.num("scan.p_max_bar"),
                cfg.num("scan.p_step_bar"),
            )?;
            vec![phasematch::pressure_table(&rows)]
        }
        Command::Optimize => vec![optimize_table(cfg)?],
        Command::PowerSurface => {
            let max = cfg.num("scan.power_max_w");
            let surface = conversion::power_surface(
                &cfg.setup()?,
                cfg.num("conversion.pressure_bar"),
                &linspace_to(max, cfg.num("scan.grid_n") as usize),
                &linspace_to(max, cfg.num("scan.grid_m") as usize),
            )?;
            vec![surface.to_table()]
        }
        Command::Bandwidth => vec![conversion::bandwidth_table(&bandwidth_rows(cfg)?)],
        Command::LossSpectrum => {
            let problem = cfg.problem()?;
            let state = problem.gas.at_pressure(cfg.num("conversion.pressure_bar"));
            let fill = gas::n_gas(problem.waves.probe.wavelength_nm(), &state)?;
            let samples = fiber::loss_spectrum_estimate(
                &grid(
                    cfg.num("scan.loss_min_nm"),
                    cfg.num("scan.loss_max_nm"),
                    cfg.num("scan.loss_step_nm"),
                ),
                &problem.geom,
                fill,
                cfg.num("scan.loss_ceiling"),
            )?;
            vec![fiber::loss_table(&samples)]
        }
        Command::Noise => vec![noise_table(cfg)?],
        Command::Calibrate => {
            let problem = cfg.problem()?;
            let (p_min, p_max) = (cfg.num("scan.p_min_bar"), cfg.num("scan.p_max_bar"));
            let target = cfg.num("scan.target_p_opt_bar");
            let scale = phasematch::calibrate_core_radius(
                &problem,
                target,
                (cfg.num("scan.scale_min"), cfg.num("scan.scale_max")),
            )?;
            let calibrated =
                phasematch::optimal_pressure(&problem.with_scale(scale), p_min, p_max)?;
            let uncalibrated = phasematch::optimal_pressure(&problem, p_min, p_max)?;
            let mut t = ScanTable::new(
                "calibrate",
                &[
                    ("target_p_opt", "bar"),
                    ("core_radius_scale", "1"),
                    ("p_opt", "bar"),
                    ("delta_beta", "rad/m"),
                    ("uncalibrated_p_opt", "bar"),
                    ("uncalibrated_gap", "bar"),
                ],
            );
            t.push_row(vec![
                target,
                scale,
                calibrated.pressure_bar,
                calibrated.delta_beta,
                uncalibrated.pressure_bar,
                uncalibrated.pressure_bar - target,
            ]);
            vec![t]
        }
        Command::Report => {
            let rows = bandwidth_rows(cfg)?;
            vec![
                optimize_table(cfg)?,
                conversion::bandwidth_table(&rows),
                bandwidth_summary(cfg, &rows)?,
                noise_table(cfg)?,
            ]
        }
    };
    let provenance = Provenance {
        tool: TOOL_NAME.to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        command: command.name().to_string(),
        config_sha256: cfg.sha256(),
    };
    Ok(Document {
        command,
        sections: sections
            .into_iter()
            .map(|mut t| {
                t.provenance = Some(provenance.clone());
                t
            })
            .collect(),
    })
}

/// Section marker preceding each table of a multi-table document.
pub const SECTION_MARKER: &str = "#=== section: ";

pub fn render_document(doc: &Document, format: Format, precision: usize) -> String {
    if doc.sections.len() == 1 {
        return table::render(&doc.sections[0], format, precision);
    }
    let mut out = String::new();
    for section in &doc.sections {
        match format {
            Format::Csv => {
                let _ = writeln!(out, "{SECTION_MARKER}{}", section.name);
                out.push_str(&table::render(section, format, precision));
            }
            Format::Jsonl => {
                for line in table::render(section, format, precision).lines() {
                    let _ = writeln!(out, "{{\"section\":\"{}\",{}", section.name, &line[1..]);
                }
            }
        }
    }
    out
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&args) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("csrs: {e}");
            e.exit_code()
        }
    }
}

fn execute(args: &Args) -> Result<()> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            RunConfig::parse(&text)?
        }
        None => RunConfig::default(),
    };
    args.apply_overrides(&mut cfg)?;
    let doc = run_command(args.command, &cfg)?;
    let bytes = render_document(&doc, cfg.format(), cfg.precision());
    match &args.out {
        Some(path) => {
            std::fs::write(path, bytes).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
        }
        None => {
            use std::io::Write;
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(bytes.as_bytes())
                .and_then(|_| lock.flush())
                .map_err(|e| Error::Io(e.to_string()))
        }
    }
}
