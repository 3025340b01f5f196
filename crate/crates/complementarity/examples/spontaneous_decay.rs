//! Discrete-mode spontaneous emission: a two-level emitter coupled to a
//! dense uniform frequency comb decays exponentially at the golden-rule
//! rate, while a single resonant mode gives Rabi oscillation instead.

use complementarity::emission::{
    fit_decay_rate, golden_rule_rate, simulate_discrete_modes, EmissionConfig, ModeSet, TimeGrid,
};
use num_complex::Complex64;

fn main() -> complementarity::Result<()> {
    // --- Golden-rule decay (natural units, γ = 1) ---
    let gamma = 1.0;
    let omega_a = 100.0;
    let (n_modes, half_span, field) = (401, 20.0, 1.0);
    let density = (n_modes - 1) as f64 / (2.0 * half_span);
    let d_eg = (gamma / (2.0 * std::f64::consts::PI * field * field * density)).sqrt();
    let modes = ModeSet::uniform_comb(omega_a, half_span, n_modes, field)?;
    let cfg = EmissionConfig::new(omega_a, gamma, d_eg, 0.0)?;
    println!(
        "# comb: {n_modes} modes over ω_A ± {half_span}, golden-rule rate = {:.6}",
        golden_rule_rate(d_eg, field, modes.mode_density())
    );

    let t_max = 3.0;
    let dt_req = 2.0 * std::f64::consts::PI / (20.0 * (omega_a + half_span));
    let n_steps = (t_max / dt_req).ceil() as usize + 1;
    let hist = simulate_discrete_modes(
        &modes,
        &cfg,
        &[Complex64::new(1.0, 0.0)],
        TimeGrid::new(t_max, n_steps)?,
    )?;

    println!("{:>8} {:>14} {:>14} {:>12}", "γt", "|ψ_e|²", "exp(-γt)", "norm drift");
    let stride = hist.times.len() / 10;
    for (it, &t) in hist.times.iter().enumerate().step_by(stride.max(1)) {
        println!(
            "{t:>8.3} {:>14.6e} {:>14.6e} {:>12.3e}",
            hist.excited_population(it, 0),
            (-gamma * t).exp(),
            (hist.total_probability(it, 0) - 1.0).abs()
        );
    }
    let fitted = fit_decay_rate(&hist, 0, 0.5, 3.0)?;
    println!("# fitted decay rate over γt ∈ [0.5, 3]: {fitted:.4} (golden rule: {gamma})");

    // --- Single resonant mode: Rabi oscillation, no decay ---
    let rabi_modes = ModeSet::new(
        vec![50.0],
        vec![vec![Complex64::new(1.0, 0.0)]],
        vec![Complex64::new(1.0, 0.0)],
    )?;
    let rabi_cfg = EmissionConfig::new(50.0, 1.0, 0.05, 0.0)?;
    let omega_rabi = 2.0 * rabi_cfg.d_eg;
    let period = 2.0 * std::f64::consts::PI / omega_rabi;
    let hist = simulate_discrete_modes(
        &rabi_modes,
        &rabi_cfg,
        &[Complex64::new(1.0, 0.0)],
        TimeGrid::new(period, 20_000)?,
    )?;
    println!("\n# single resonant mode: |ψ_e(t)|² = cos²(Ωt/2), Ω = {omega_rabi}");
    println!("{:>10} {:>12} {:>12}", "t/period", "|ψ_e|²", "cos²(Ωt/2)");
    for frac in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let it = ((hist.times.len() - 1) as f64 * frac) as usize;
        let t = hist.times[it];
        println!(
            "{frac:>10.2} {:>12.6} {:>12.6}",
            hist.excited_population(it, 0),
            (0.5 * omega_rabi * t).cos().powi(2)
        );
    }
    Ok(())
}
