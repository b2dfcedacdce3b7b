//! Background counts and SNR as both pumps are raised together.

use csrs_fiber::conversion::ConversionSetup;
use csrs_fiber::noise::{self, NoiseModel};

fn main() -> csrs_fiber::Result<()> {
    let model = NoiseModel::default();
    let setup = ConversionSetup::default();

    println!(
        "{:>5} {:>8} {:>8} {:>10} {:>10} {:>7}",
        "P [W]", "stray", "raman", "background", "signal", "SNR"
    );
    for r in noise::noise_sweep(&setup, 60.0, &model, 5.0, 0.5)? {
        println!(
            "{:>5.1} {:>8.1} {:>8.1} {:>10.1} {:>10.3e} {:>7.2}",
            r.p_942_w,
            r.stray_cps,
            r.raman_cps,
            r.breakdown.background_cps,
            r.breakdown.signal_cps,
            r.breakdown.snr
        );
    }

    // 1 µW probe at the reference efficiency
    let s = noise::snr(&setup, 60.0, &model)?;
    println!(
        "\n{:.3e} probe photons/s, {:.3e} signal cps over {:.0} cps background: SNR {:.1}",
        s.probe_photons_per_s, s.signal_cps, s.background_cps, s.snr
    );
    Ok(())
}
