//! Build an efficiency surface over both pump powers and recover its
//! bilinear coefficient by least squares.

use csrs_fiber::conversion::{self, ConversionSetup, SurfaceModel};

fn main() -> csrs_fiber::Result<()> {
    let setup = ConversionSetup::default();
    let axis = [1.0, 2.0, 3.0, 4.0, 5.0];
    let surface = conversion::power_surface(&setup, 60.0, &axis, &axis)?;

    print!("{:>6}", "Pp\\Ps");
    for ps in &axis {
        print!("{ps:>11.1}");
    }
    println!();
    for (i, pp) in axis.iter().enumerate() {
        print!("{pp:>6.1}");
        for j in 0..axis.len() {
            print!("{:>11.3e}", surface.at(i, j));
        }
        println!();
    }

    for model in [SurfaceModel::Bilinear, SurfaceModel::BilinearPlusLinear] {
        let fit = conversion::fit_power_surface(&surface, model)?;
        println!(
            "{model:?}: c = {:.4e} /W², rms residual {:.2e}",
            fit.bilinear, fit.rms_residual
        );
    }

    let cut = conversion::diagonal_cut(&surface)?;
    println!("η(P, P) = {:.4e}·P²", conversion::fit_quadratic_cut(&cut)?);
    println!(
        "η at 5 W + 5 W: {}%",
        csrs_fiber::table::format_number(conversion::efficiency_percent(surface.at(4, 4)), 2)
    );
    Ok(())
}
