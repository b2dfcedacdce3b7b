//! How efficiency would change in a longer fiber at fixed pressure.

use csrs_fiber::conversion::{self, ConversionSetup};
use csrs_fiber::phasematch;

fn main() -> csrs_fiber::Result<()> {
    let base = ConversionSetup::default();
    let lengths = [0.03, 0.06, 0.12, 0.25, 0.5, 1.0];

    // at 60 bar the nominal geometry is mismatched, so sinc² eventually rolls off
    println!("nominal radius, 60 bar");
    for r in conversion::length_projection(&base, 60.0, &lengths)? {
        println!(
            "  L = {:5.2} m  sinc² {:.4}  η = {:.3e}",
            r.length_m, r.sinc2, r.efficiency
        );
    }

    let scale = phasematch::calibrate_core_radius(&base.problem, 60.0, (0.5, 3.0))?;
    let calibrated = ConversionSetup {
        problem: base.problem.with_scale(scale),
        ..base
    };
    println!("calibrated radius, 60 bar");
    for r in conversion::length_projection(&calibrated, 60.0, &lengths)? {
        println!(
            "  L = {:5.2} m  sinc² {:.4}  η = {:.3e}",
            r.length_m, r.sinc2, r.efficiency
        );
    }
    Ok(())
}
