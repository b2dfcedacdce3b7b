//! Capillary wall resonances, transmission windows and a relative loss envelope.

use csrs_fiber::fiber::{self, FiberGeometry, IndexBackend};
use csrs_fiber::spectral::FourWaveSet;

fn main() -> csrs_fiber::Result<()> {
    let geom = FiberGeometry::default();

    for (m, l) in fiber::resonance_wavelengths(&geom, 1.0, 4)?
        .iter()
        .enumerate()
    {
        println!("resonance m = {}: {l:.1} nm", m + 1);
    }

    let waves = FourWaveSet::nominal();
    for line in [waves.pump_p, waves.pump_s, waves.probe, waves.signal] {
        let l = line.wavelength_nm();
        let w = fiber::transmission_window_of(l, &geom, 1.0)?;
        let n = fiber::effective_index(l, 1.0, &geom, IndexBackend::Capillary)?;
        let n_corr = fiber::effective_index(l, 1.0, &geom, IndexBackend::ResonanceCorrected)?;
        println!(
            "{l:7.1} nm  window {:.0}–{:.0} nm  margin {:5.1} nm  n_eff − 1 = {:.4e} ({:.4e} corrected)",
            w.low_nm,
            w.high_nm,
            w.margin_nm,
            n - 1.0,
            n_corr - 1.0
        );
    }

    let grid: Vec<f64> = (0..=16).map(|i| 800.0 + 50.0 * i as f64).collect();
    for s in fiber::loss_spectrum_estimate(&grid, &geom, 1.0, fiber::DEFAULT_LOSS_CEILING)? {
        let bar = "#".repeat((s.relative_loss.log10() * 10.0).round() as usize);
        println!("{:6.0} nm {:>9.2} {bar}", s.wavelength_nm, s.relative_loss);
    }
    Ok(())
}
