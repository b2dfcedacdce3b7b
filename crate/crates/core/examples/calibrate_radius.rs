//! Fit the effective core radius so that the optimum lands on a measured pressure.

use csrs_fiber::phasematch::{self, PhaseMatchProblem};

fn main() -> csrs_fiber::Result<()> {
    let problem = PhaseMatchProblem::default();
    let before = phasematch::optimal_pressure(&problem, 1.0, 300.0)?;

    let measured = 60.0;
    let scale = phasematch::calibrate_core_radius(&problem, measured, (0.5, 3.0))?;
    let calibrated = problem.with_scale(scale);
    let after = phasematch::optimal_pressure(&calibrated, 1.0, 300.0)?;

    println!("nominal radius:     optimum {:.2} bar", before.pressure_bar);
    println!("radius × {scale:.5}: optimum {:.4} bar", after.pressure_bar);
    println!(
        "effective radius {:.2} µm -> {:.2} µm",
        problem.geom.effective_radius_nm() / 1e3,
        calibrated.geom.effective_radius_nm() / 1e3
    );
    Ok(())
}
