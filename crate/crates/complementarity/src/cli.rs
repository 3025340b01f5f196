//! Command-line surface.
//!
//! Five subcommands cover the main workflows: a closed-form duality sweep
//! (`duality-scan`), randomized verification of the duality bound
//! (`random-verify`), the spontaneous-emission / lens pipeline checks
//! (`emission-check`), the uncertainty-relation batch (`uncertainty-suite`)
//! and randomized verification of the discrimination POVM (`povm-check`).
//!
//! Exit codes: 0 on success, 1 when a verified inequality is violated,
//! 2 on configuration or usage errors.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;

use crate::config::FlatConfig;
use crate::emission::{
    detector_function_farfield, farfield_closed_form, fit_decay_rate, golden_rule_rate,
    perfect_lens_detector, simulate_discrete_modes, thin_lens_detector, thin_lens_eta,
    thin_lens_modular, thin_lens_wv, EmissionConfig, ModeSet, ThinLensConfig, TimeGrid,
};
use crate::error::{Error, Result};
use crate::interferometry::{
    beam_split, overlap_stats, postselected_state, which_way_theta, DetectorFunction, UsdPovm,
};
use crate::montecarlo::{
    sample_config, verify_duality_batch, verify_uncertainty_batch, BatchReport, SamplerBounds,
    ScatterRow,
};
use crate::report::{
    csv_document, fmt_float, json_document, sibling_paths, write_output, RunManifest,
};
use crate::uncertainty::{dxw_approx_relation, vt_relation_check, DxwRelation, VtRelation};
use crate::wavefield::{Grid, SeparationVector, Wavepacket};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Parser, Debug)]
#[command(
    name = "complementarity",
    version,
    about = "Numerical laboratory for matter-wave interferometry complementarity"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sweep the closed-form thin-lens duality quantities over a/w_eff.
    DualityScan(DualityScanArgs),
    /// Randomized verification of the duality bound W² + V² ≤ 1.
    RandomVerify(RandomVerifyArgs),
    /// Spontaneous-emission pipeline checks: lens closed forms vs
    /// quadrature, and a discrete-mode decay against the golden rule.
    EmissionCheck(EmissionCheckArgs),
    /// Randomized verification of the uncertainty inequalities.
    UncertaintySuite(UncertaintySuiteArgs),
    /// Randomized verification of the discrimination-POVM invariants.
    PovmCheck(PovmCheckArgs),
}

#[derive(Args, Debug)]
pub struct DualityScanArgs {
    /// Flat key=value lens config (focal_length_m, lens_radius_m,
    /// detector_width_m, k0_per_m). Defaults to a synthetic lens with
    /// w_eff = 1.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output CSV path (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Smallest a/w_eff of the sweep.
    #[arg(long, default_value_t = 0.0)]
    pub sweep_min: f64,
    /// Largest a/w_eff of the sweep.
    #[arg(long, default_value_t = 4.0)]
    pub sweep_max: f64,
    /// Number of sweep points.
    #[arg(long, default_value_t = 201)]
    pub sweep_points: u64,
    /// Use the perfect (metamaterial) lens: w_eff = detector width.
    #[arg(long)]
    pub perfect_lens: bool,
}

#[derive(Args, Debug)]
pub struct RandomVerifyArgs {
    /// Number of random configurations.
    #[arg(long, default_value_t = 1000)]
    pub samples: u64,
    /// Base RNG seed; each sample uses its own deterministic stream.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output base path: writes <out>.json (report) and <out>.csv
    /// (scatter). When omitted the JSON report goes to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct EmissionCheckArgs {
    /// Flat key=value config with lens keys (focal_length_m, lens_radius_m,
    /// detector_width_m, k0_per_m) and emission keys (gamma_per_s, time_s,
    /// optional omega_a_per_s, perfect_lens).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output JSON path (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Use the perfect (metamaterial) lens: w_eff = detector width.
    #[arg(long)]
    pub perfect_lens: bool,
}

#[derive(Args, Debug)]
pub struct UncertaintySuiteArgs {
    /// Number of random configurations.
    #[arg(long, default_value_t = 1000)]
    pub samples: u64,
    /// Base RNG seed; each sample uses its own deterministic stream.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output JSON path (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PovmCheckArgs {
    /// Number of random configurations.
    #[arg(long, default_value_t = 200)]
    pub samples: u64,
    /// Base RNG seed; each sample uses its own deterministic stream.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output JSON path (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Synthetic default lens with `w_min = 0.6`, `w⊥ = 0.8`, so `w_eff = 1`
/// exactly. Used when no config file is given.
fn default_lens() -> ThinLensConfig {
    ThinLensConfig::new(3.0, 1.0, 0.8, 10.0).expect("default lens is valid")
}

fn load_lens(config: Option<&Path>) -> Result<ThinLensConfig> {
    match config {
        None => Ok(default_lens()),
        Some(path) => ThinLensConfig::from_config(&FlatConfig::parse_file(path)?),
    }
}

fn manifest_path(p: Option<&Path>) -> Option<String> {
    p.map(|p| p.display().to_string())
}

pub fn run_duality_scan(args: &DualityScanArgs) -> Result<i32> {
    if args.sweep_points < 2 {
        return Err(Error::Usage("--sweep-points must be at least 2".into()));
    }
    if !(args.sweep_max > args.sweep_min) || args.sweep_min < 0.0 {
        return Err(Error::Usage(
            "sweep range must satisfy 0 <= sweep-min < sweep-max".into(),
        ));
    }
    let lens = load_lens(args.config.as_deref())?;
    let det = if args.perfect_lens {
        perfect_lens_detector(&lens)
    } else {
        thin_lens_detector(&lens)
    };
    let mut manifest = RunManifest::new("duality-scan");
    manifest.config = manifest_path(args.config.as_deref());
    manifest.out = manifest_path(args.out.as_deref());
    manifest.sweep_min = Some(args.sweep_min);
    manifest.sweep_max = Some(args.sweep_max);
    manifest.sweep_points = Some(args.sweep_points);
    manifest.perfect_lens = Some(args.perfect_lens);

    let mut rows = Vec::new();
    let mut worst = 0.0f64;
    for i in 0..args.sweep_points {
        let ratio = args.sweep_min
            + (args.sweep_max - args.sweep_min) * i as f64 / (args.sweep_points - 1) as f64;
        let a = ratio * det.w_eff;
        let (w, v) = thin_lens_wv(a, &det);
        let duality = w * w + v * v;
        worst = worst.max(duality);
        let t = thin_lens_modular(a, &det, &lens);
        rows.push(vec![
            fmt_float(ratio),
            fmt_float(w),
            fmt_float(v),
            fmt_float(duality),
            fmt_float(t.norm()),
            fmt_float(t.arg()),
        ]);
    }
    let doc = csv_document(
        &manifest,
        &[
            "a_over_weff",
            "which_way",
            "visibility",
            "duality",
            "t_modulus",
            "t_phase",
        ],
        &rows,
    )?;
    write_output(args.out.as_deref(), &doc)?;
    Ok(if worst > 1.0 + 1e-10 { 1 } else { 0 })
}

fn scatter_csv(manifest: &RunManifest, rows: &[ScatterRow]) -> Result<String> {
    let header = [
        "sample_id", "phi_x0", "phi_w", "phi_k", "a", "det_x0", "det_w", "det_k", "theta",
        "which_way", "visibility", "duality",
    ];
    let data: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.sample_id.to_string(),
                fmt_float(r.phi_x0),
                fmt_float(r.phi_w),
                fmt_float(r.phi_k),
                fmt_float(r.a),
                fmt_float(r.det_x0),
                fmt_float(r.det_w),
                fmt_float(r.det_k),
                fmt_float(r.theta),
                fmt_float(r.w),
                fmt_float(r.v),
                fmt_float(r.duality),
            ]
        })
        .collect();
    csv_document(manifest, &header, &data)
}

pub fn run_random_verify(args: &RandomVerifyArgs) -> Result<i32> {
    if args.samples == 0 {
        return Err(Error::Usage("--samples must be positive".into()));
    }
    let mut manifest = RunManifest::new("random-verify");
    manifest.seed = Some(args.seed);
    manifest.samples = Some(args.samples);
    manifest.out = manifest_path(args.out.as_deref());

    let (report, rows) = verify_duality_batch(args.samples, args.seed)?;
    let json = json_document(&manifest, &report)?;
    match &args.out {
        Some(base) => {
            let (json_path, csv_path) = sibling_paths(base);
            write_output(Some(&json_path), &json)?;
            write_output(Some(&csv_path), &scatter_csv(&manifest, &rows)?)?;
        }
        None => write_output(None, &json)?,
    }
    Ok(if report.any_violation() { 1 } else { 0 })
}

#[derive(Serialize)]
struct EmissionCheckPayload {
    lens: ThinLensConfig,
    perfect_lens: bool,
    gamma_per_s: f64,
    time_s: f64,
    omega_a_per_s: f64,
    gamma_t: f64,
    w_eff_m: f64,
    w_min_m: f64,
    delta_phi: f64,
    chi_per_m2: f64,
    /// Largest relative deviation between the quadrature detector
    /// function and its closed form, over a ±6 w_eff window.
    farfield_max_rel_err: f64,
    /// Fitted-to-golden-rule decay-rate ratio of the discrete-mode comb.
    comb_gamma_ratio: f64,
    /// Largest total-probability drift of the comb simulation.
    comb_norm_drift: f64,
    checks_passed: bool,
}

/// Compare the far-field quadrature against the closed form on `grid`,
/// after aligning phases at the grid center.
fn farfield_deviation(lens: &ThinLensConfig, em: &EmissionConfig, grid: Grid) -> Result<f64> {
    let eta = thin_lens_eta(lens);
    let quad = detector_function_farfield(&|k| eta.eval(k), em, lens.k0, grid)?;
    let closed = farfield_closed_form(lens, em, grid)?;
    let c = grid.len() / 2;
    let qc = quad.values()[c];
    let cc = closed.values()[c];
    if qc.norm() < 1e-12 || cc.norm() < 1e-12 {
        return Err(Error::InvalidEmission(
            "detector function vanishes at the grid center".into(),
        ));
    }
    let align = (cc / qc) / (cc / qc).norm();
    let max_closed = closed
        .values()
        .iter()
        .map(|v| v.norm())
        .fold(0.0f64, f64::max);
    let mut worst = 0.0f64;
    for (q, cl) in quad.values().iter().zip(closed.values()) {
        worst = worst.max((q * align - cl).norm() / max_closed);
    }
    Ok(worst)
}

/// Discrete-mode decay oracle in natural units: a 401-mode comb spanning
/// ω_A ± 20γ whose golden-rule rate is exactly γ = 1. Returns the
/// fitted/expected rate ratio and the worst norm drift.
fn comb_decay_oracle() -> Result<(f64, f64)> {
    let gamma = 1.0;
    let omega_a = 100.0;
    let n_modes = 401;
    let half_span = 20.0;
    let density = (n_modes - 1) as f64 / (2.0 * half_span);
    let field = 1.0;
    let d_eg = (gamma / (2.0 * std::f64::consts::PI * field * field * density)).sqrt();
    let modes = ModeSet::uniform_comb(omega_a, half_span, n_modes, field)?;
    let cfg = EmissionConfig::new(omega_a, gamma, d_eg, 0.0)?;
    debug_assert!((golden_rule_rate(d_eg, field, modes.mode_density()) - gamma).abs() < 1e-12);

    let t_max = 3.0;
    let dt_req = 2.0 * std::f64::consts::PI / (20.0 * (omega_a + half_span));
    let n_steps = (t_max / dt_req).ceil() as usize + 1;
    let hist = simulate_discrete_modes(
        &modes,
        &cfg,
        &[Complex64::new(1.0, 0.0)],
        TimeGrid::new(t_max, n_steps)?,
    )?;
    let mut drift = 0.0f64;
    for it in 0..hist.times.len() {
        drift = drift.max((hist.total_probability(it, 0) - 1.0).abs());
    }
    let fitted = fit_decay_rate(&hist, 0, 0.5, 3.0)?;
    Ok((fitted / gamma, drift))
}

pub fn run_emission_check(args: &EmissionCheckArgs) -> Result<i32> {
    let (lens, em, perfect) = match &args.config {
        None => {
            // Imaging setup with a diffraction floor well below the
            // detector width, deep in the far field (γt = 20).
            let lens = ThinLensConfig::new(0.2, 0.05, 30e-6, 1e7)?;
            let em = EmissionConfig::new(
                crate::emission::SPEED_OF_LIGHT * lens.k0,
                1e14,
                1.0,
                2e-13,
            )?;
            (lens, em, args.perfect_lens)
        }
        Some(path) => {
            let cfg = FlatConfig::parse_file(path)?;
            let lens = ThinLensConfig::from_config(&cfg)?;
            let em = EmissionConfig::from_config(
                &cfg,
                crate::emission::SPEED_OF_LIGHT * lens.k0,
            )?;
            let perfect = args.perfect_lens || cfg.get_bool("perfect_lens", false)?;
            (lens, em, perfect)
        }
    };
    let mut manifest = RunManifest::new("emission-check");
    manifest.config = manifest_path(args.config.as_deref());
    manifest.out = manifest_path(args.out.as_deref());
    manifest.perfect_lens = Some(perfect);

    let det = if perfect {
        perfect_lens_detector(&lens)
    } else {
        thin_lens_detector(&lens)
    };
    let grid = Grid::symmetric(6.0 * det.w_eff, 512)?;
    let farfield_max_rel_err = farfield_deviation(&lens, &em, grid)?;
    let (comb_gamma_ratio, comb_norm_drift) = comb_decay_oracle()?;
    let checks_passed = farfield_max_rel_err < 0.01
        && (comb_gamma_ratio - 1.0).abs() < 0.05
        && comb_norm_drift < 1e-8;
    let payload = EmissionCheckPayload {
        lens,
        perfect_lens: perfect,
        gamma_per_s: em.gamma,
        time_s: em.t,
        omega_a_per_s: em.omega_a,
        gamma_t: em.gamma * em.t,
        w_eff_m: det.w_eff,
        w_min_m: det.w_min,
        delta_phi: det.delta_phi,
        chi_per_m2: det.chi(&lens),
        farfield_max_rel_err,
        comb_gamma_ratio,
        comb_norm_drift,
        checks_passed,
    };
    write_output(args.out.as_deref(), &json_document(&manifest, &payload)?)?;
    Ok(if checks_passed { 0 } else { 1 })
}

#[derive(Serialize)]
struct UncertaintySuitePayload {
    batch: BatchReport,
    /// Fixed diagnostic: both sides of the approximate which-way /
    /// position-uncertainty relation for a slowly varying Gaussian
    /// detector (w_eff = 1, packet width 0.05, separation 2).
    dxw_relation: DxwRelation,
    /// Fixed diagnostic: |⟨T_a⟩| vs V/2 in the same configuration.
    vt_relation: VtRelation,
}

pub fn run_uncertainty_suite(args: &UncertaintySuiteArgs) -> Result<i32> {
    if args.samples == 0 {
        return Err(Error::Usage("--samples must be positive".into()));
    }
    let mut manifest = RunManifest::new("uncertainty-suite");
    manifest.seed = Some(args.seed);
    manifest.samples = Some(args.samples);
    manifest.out = manifest_path(args.out.as_deref());

    let batch = verify_uncertainty_batch(args.samples, args.seed)?;

    let w_phi = 0.05;
    let a = SeparationVector::new(2.0)?;
    let grid = Grid::spanning(&[0.0, a.value()], &[1.0], 16384)?;
    let d = DetectorFunction::lens_profile(1.0, 0.0, grid)?;
    let dxw_relation = dxw_approx_relation(&d, a, w_phi)?;
    let phi = Wavepacket::gaussian(crate::wavefield::GaussianParams::new(0.0, w_phi, 0.0)?, grid)?;
    let vt_relation = vt_relation_check(&phi, a, &d)?;

    let payload = UncertaintySuitePayload {
        batch,
        dxw_relation,
        vt_relation,
    };
    write_output(args.out.as_deref(), &json_document(&manifest, &payload)?)?;
    Ok(if batch.any_violation() { 1 } else { 0 })
}

#[derive(Serialize)]
struct PovmCheckPayload {
    samples: u64,
    evaluated: u64,
    skipped: u64,
    /// Largest leakage probability of the unambiguous outcomes:
    /// max of p0 on φ and p1 on T_a φ (exactly 0 in theory).
    max_unambiguity_residual: f64,
    /// Most negative outcome probability seen (≥ 0 in theory for states
    /// in span{φ, T_a φ}; p0 and p1 are positive for every state).
    min_probability: f64,
    /// Largest |p0 − p1| deviation from the closed-form which-way
    /// information of the post-selected state.
    max_route_deviation: f64,
    /// Post-selected states with p2 < 0 (components outside
    /// span{φ, T_a φ}; diagnostic, counted but not a violation).
    p2_negative_count: u64,
    violations: u64,
}

pub fn run_povm_check(args: &PovmCheckArgs) -> Result<i32> {
    if args.samples == 0 {
        return Err(Error::Usage("--samples must be positive".into()));
    }
    let mut manifest = RunManifest::new("povm-check");
    manifest.seed = Some(args.seed);
    manifest.samples = Some(args.samples);
    manifest.out = manifest_path(args.out.as_deref());

    let bounds = SamplerBounds::default();
    let mut payload = PovmCheckPayload {
        samples: args.samples,
        evaluated: 0,
        skipped: 0,
        max_unambiguity_residual: 0.0,
        min_probability: f64::INFINITY,
        max_route_deviation: 0.0,
        p2_negative_count: 0,
        violations: 0,
    };
    for id in 0..args.samples {
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
        rng.set_stream(id + 1);
        let cfg = sample_config(&mut rng, &bounds);
        if cfg.a < 0.1 {
            payload.skipped += 1;
            continue;
        }
        let grid = Grid::spanning(
            &[cfg.phi.x0, cfg.phi.x0 + cfg.a, cfg.detector.x0],
            &[cfg.phi.w, cfg.detector.w],
            8192,
        )?;
        let phi = Wavepacket::gaussian(cfg.phi, grid)?;
        let a = SeparationVector::new(cfg.a)?;
        let povm = match UsdPovm::new(&phi, a) {
            Ok(p) => p,
            Err(_) => {
                payload.skipped += 1;
                continue;
            }
        };
        let t_phi = phi.shift(a)?;
        let p_phi = povm.probabilities(&phi)?;
        let p_tphi = povm.probabilities(&t_phi)?;
        payload.max_unambiguity_residual = payload
            .max_unambiguity_residual
            .max(p_phi.p0.abs())
            .max(p_tphi.p1.abs());

        let d = DetectorFunction::gaussian(cfg.detector, grid);
        let stats = overlap_stats(&phi, a, &d)?;
        let psi_d = match postselected_state(&phi, a, &d, cfg.theta) {
            Ok(p) => p,
            Err(_) => {
                payload.skipped += 1;
                continue;
            }
        };
        let triple = povm.probabilities(&psi_d)?;
        payload.min_probability = payload
            .min_probability
            .min(triple.p0)
            .min(triple.p1)
            .min(p_phi.p1)
            .min(p_tphi.p0);
        if triple.p2_negative {
            payload.p2_negative_count += 1;
        }
        let w_closed = which_way_theta(&stats, cfg.theta)?;
        payload.max_route_deviation = payload
            .max_route_deviation
            .max((triple.which_way_ingredient - w_closed).abs());
        // Splitting must be well-defined for the sampled phase as well.
        let _ = beam_split(&phi, a, cfg.theta)?;
        payload.evaluated += 1;
    }
    if payload.evaluated == 0 {
        payload.min_probability = 0.0;
    }
    if payload.max_unambiguity_residual > 1e-9 {
        payload.violations += 1;
    }
    if payload.min_probability < -1e-9 {
        payload.violations += 1;
    }
    if payload.max_route_deviation > 1e-6 {
        payload.violations += 1;
    }
    write_output(args.out.as_deref(), &json_document(&manifest, &payload)?)?;
    Ok(if payload.violations > 0 { 1 } else { 0 })
}

/// Dispatch a parsed command line; returns the process exit code.
pub fn run(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::DualityScan(args) => run_duality_scan(args),
        Command::RandomVerify(args) => run_random_verify(args),
        Command::EmissionCheck(args) => run_emission_check(args),
        Command::UncertaintySuite(args) => run_uncertainty_suite(args),
        Command::PovmCheck(args) => run_povm_check(args),
    }
}
