//! Efficiency across probe wavelengths at the calibrated operating point.

use csrs_fiber::cli::CRYSTAL_BANDWIDTH_NM;
use csrs_fiber::conversion::{self, ConversionSetup};
use csrs_fiber::phasematch;

fn main() -> csrs_fiber::Result<()> {
    let base = ConversionSetup::default();
    let scale = phasematch::calibrate_core_radius(&base.problem, 60.0, (0.5, 3.0))?;
    let setup = ConversionSetup {
        problem: base.problem.with_scale(scale),
        ..base
    };

    let rows = conversion::bandwidth_scan(&setup, 60.0, (858.0, 866.0), 1.0)?;
    for r in &rows {
        println!(
            "{:.0} nm -> {:.2} nm  η = {:.4e}  Δβ = {:+.3} rad/m",
            r.probe_nm, r.signal_nm, r.efficiency, r.delta_beta
        );
    }
    println!(
        "relative std {:.4}%",
        100.0 * conversion::relative_std(&rows)
    );

    let acc = conversion::acceptance_bandwidth(&setup, 60.0, 0.5, 200.0)?;
    println!(
        "half-efficiency band {:.1}–{:.1} nm ({:.1} nm, {:.0}× a {CRYSTAL_BANDWIDTH_NM} nm crystal)",
        acc.low_nm,
        acc.high_nm,
        acc.width_nm(),
        acc.width_nm() / CRYSTAL_BANDWIDTH_NM
    );
    Ok(())
}
