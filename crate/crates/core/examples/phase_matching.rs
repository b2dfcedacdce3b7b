//! Scan Δβ over pressure and locate the phase-matching pressure.
//!
//! ```bash
//! cargo run --example phase_matching
//! ```

use csrs_fiber::phasematch::{self, Objective, PhaseMatchProblem};

fn main() -> csrs_fiber::Result<()> {
    let problem = PhaseMatchProblem::default();

    println!("{:>8} {:>12} {:>8}", "p [bar]", "Δβ [rad/m]", "sinc²");
    for point in phasematch::pressure_scan(&problem, 0.0, 200.0, 20.0)? {
        println!(
            "{:>8.1} {:>12.3} {:>8.4}",
            point.pressure_bar, point.delta_beta, point.sinc2
        );
    }

    let opt = phasematch::optimal_pressure(&problem, 1.0, 300.0)?;
    println!("\nΔβ = 0 at {:.3} bar", opt.pressure_bar);

    // weight sinc² by gas density instead of requiring an exact zero
    let weighted = PhaseMatchProblem {
        objective: Objective::DensityWeighted,
        ..problem
    };
    let opt = phasematch::optimal_pressure(&weighted, 1.0, 300.0)?;
    println!(
        "density-weighted optimum {:.3} bar (sinc² {:.4})",
        opt.pressure_bar, opt.sinc2
    );
    Ok(())
}
