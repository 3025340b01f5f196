//! Beam splitting, generalized position measurement, and the
//! complementarity quantities: phase-resolved which-way information
//! `W̃(θ)`, its phase-averaged version `W`, the fringe pattern `f(θ)`,
//! the visibility `V`, the duality check `W² + V² ≤ 1`, and the
//! unambiguous-discrimination POVM.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::wavefield::{GaussianParams, Grid, SeparationVector, Wavepacket};

/// Complex spatial filter `D(x)` with `|D(x)| ≤ 1` everywhere, describing
/// one outcome of a generalized position measurement. The modulus bound
/// guarantees a complementary outcome with `|D'|² = 1 − |D|²` exists, so a
/// partition of unity `Σ|D_α|² = 1` can always be completed.
#[derive(Clone, Debug)]
pub struct DetectorFunction {
    grid: Grid,
    values: Vec<Complex64>,
    gaussian: Option<GaussianParams>,
}

const MODULUS_TOL: f64 = 1e-12;

impl DetectorFunction {
    /// The trivial outcome `D ≡ 1`.
    pub fn uniform(grid: Grid) -> DetectorFunction {
        DetectorFunction {
            grid,
            values: vec![Complex64::new(1.0, 0.0); grid.len()],
            gaussian: None,
        }
    }

    /// Sample `f` on the grid; errors if the modulus bound is violated.
    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> Complex64) -> Result<DetectorFunction> {
        let values: Vec<Complex64> = grid.xs().map(f).collect();
        let max = values.iter().map(|v| v.norm()).fold(0.0f64, f64::max);
        if max > 1.0 + MODULUS_TOL {
            return Err(Error::DetectorTooLarge(max));
        }
        Ok(DetectorFunction {
            grid,
            values,
            gaussian: None,
        })
    }

    /// Sample `f` and rescale so that `max |D| = 1` (the complementarity
    /// quantities are invariant under rescaling of `D`).
    pub fn from_fn_rescaled(
        grid: Grid,
        f: impl Fn(f64) -> Complex64,
    ) -> Result<DetectorFunction> {
        let values: Vec<Complex64> = grid.xs().map(f).collect();
        let max = values.iter().map(|v| v.norm()).fold(0.0f64, f64::max);
        if max <= 0.0 || !max.is_finite() {
            return Err(Error::NullOutcome);
        }
        Ok(DetectorFunction {
            grid,
            values: values.into_iter().map(|v| v / max).collect(),
            gaussian: None,
        })
    }

    /// Wrap precomputed samples, rescaled so that `max |D| = 1`.
    pub fn from_values_rescaled(grid: Grid, values: Vec<Complex64>) -> Result<DetectorFunction> {
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "{} samples on a {}-point grid",
                values.len(),
                grid.len()
            )));
        }
        let max = values.iter().map(|v| v.norm()).fold(0.0f64, f64::max);
        if max <= 0.0 || !max.is_finite() {
            return Err(Error::NullOutcome);
        }
        Ok(DetectorFunction {
            grid,
            values: values.into_iter().map(|v| v / max).collect(),
            gaussian: None,
        })
    }

    /// Gaussian detector `exp(−(x−x0)²/w² + ikx)`; its modulus peaks at 1.
    pub fn gaussian(params: GaussianParams, grid: Grid) -> DetectorFunction {
        let values = grid.xs().map(|x| params.amplitude(x)).collect();
        DetectorFunction {
            grid,
            values,
            gaussian: Some(params),
        }
    }

    /// Gaussian modulus of width `w_eff` centered at 0 with a quadratic
    /// phase: `exp(−x²/(2 w_eff²) + i χ x²)`. The form produced by
    /// photodetection behind a lens.
    pub fn lens_profile(w_eff: f64, chi: f64, grid: Grid) -> Result<DetectorFunction> {
        if !(w_eff > 0.0) {
            return Err(Error::InvalidGaussian(format!("w_eff = {w_eff}")));
        }
        DetectorFunction::from_fn(grid, |x| {
            Complex64::new(-x * x / (2.0 * w_eff * w_eff), chi * x * x).exp()
        })
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn gaussian_tag(&self) -> Option<GaussianParams> {
        self.gaussian
    }

    /// Value at an arbitrary `x` by linear interpolation (0 outside).
    pub fn sample(&self, x: f64) -> Complex64 {
        let t = (x - self.grid.x_min()) / self.grid.dx();
        if t < 0.0 || t > (self.grid.len() - 1) as f64 {
            return Complex64::new(0.0, 0.0);
        }
        let i = (t.floor() as usize).min(self.grid.len() - 2);
        let frac = t - i as f64;
        self.values[i] * (1.0 - frac) + self.values[i + 1] * frac
    }
}

/// The scalar block from which all complementarity quantities derive:
/// branch populations `n0`, `n1`, the weighted path overlap `r`, the four
/// detector matrix elements `z0…z3`, and the bare branch overlap
/// `t_overlap = ⟨φ|T_a φ⟩`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct OverlapStats {
    pub n0: f64,
    pub n1: f64,
    pub r: Complex64,
    pub z0: Complex64,
    pub z1: Complex64,
    pub z2: Complex64,
    pub z3: Complex64,
    pub t_overlap: Complex64,
}

impl OverlapStats {
    /// Normalization `n(θ) = (n0+n1)(1 + Re(e^{iθ} r))` of the
    /// post-measurement state.
    pub fn n_theta(&self, theta: f64) -> f64 {
        (self.n0 + self.n1) * (1.0 + (Complex64::from_polar(1.0, theta) * self.r).re)
    }

    /// Phases extremizing `n(θ)`: `θ_max = −arg r`, `θ_min = π − arg r`.
    /// For `r = 0` every phase is extremal and the convention `(0, π)`
    /// applies (`arg 0 = 0`).
    pub fn theta_extrema(&self) -> (f64, f64) {
        let arg = self.r.arg();
        (-arg, std::f64::consts::PI - arg)
    }
}

/// Outcome of a full duality evaluation.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct DualityReport {
    pub w: f64,
    pub v: f64,
    /// `W² + V²`; the duality bound requires this ≤ 1.
    pub duality: f64,
    pub theta_max: f64,
    pub theta_min: f64,
}

impl DualityReport {
    pub fn violates(&self) -> bool {
        self.duality > 1.0 + 1e-9
    }
}

const SPLIT_NORM_FLOOR: f64 = 1e-8;

/// Coherent splitting `(φ + e^{iθ} T_a φ) / n_BS1` with
/// `n_BS1 = sqrt(2(1 + Re(e^{iθ}⟨φ|T_a φ⟩)))`.
pub fn beam_split(phi: &Wavepacket, a: SeparationVector, theta: f64) -> Result<Wavepacket> {
    let shifted = phi.shift(a)?;
    let phase = Complex64::from_polar(1.0, theta);
    let t = phi.inner(&shifted)?;
    let norm_sq = 2.0 * (1.0 + (phase * t).re);
    if norm_sq < SPLIT_NORM_FLOOR * SPLIT_NORM_FLOOR {
        return Err(Error::DegenerateSplit);
    }
    let amps: Vec<Complex64> = phi
        .amplitudes()
        .iter()
        .zip(shifted.amplitudes())
        .map(|(p, s)| p + phase * s)
        .collect();
    Wavepacket::from_samples(phi.grid(), amps)
}

fn householder_core(
    phi: &Wavepacket,
    target: &Wavepacket,
    input: &Wavepacket,
    adjoint: bool,
) -> Result<Wavepacket> {
    let c = Complex64::new(1.0, 0.0) + target.inner(phi)?;
    if c.norm() < SPLIT_NORM_FLOOR {
        return Err(Error::SingularHouseholder);
    }
    let denom = if adjoint { c.conj() } else { c };
    let u: Vec<Complex64> = phi
        .amplitudes()
        .iter()
        .zip(target.amplitudes())
        .map(|(p, t)| p + t)
        .collect();
    // <u|input> by quadrature.
    let grid = phi.grid();
    let mut proj = Complex64::new(0.0, 0.0);
    for i in 0..grid.len() {
        proj += grid.weight(i) * u[i].conj() * input.amplitudes()[i];
    }
    let amps: Vec<Complex64> = (0..grid.len())
        .map(|i| u[i] * proj / denom - input.amplitudes()[i])
        .collect();
    Wavepacket::from_samples(grid, amps)
}

/// The beam splitter as a Householder-type unitary
/// `U = |u⟩⟨u|/(1 + ⟨target|φ⟩) − 1` with `u = φ + target`: maps `φ` to
/// `target` exactly. Unitary on span{φ, target} (and, for real overlap,
/// everywhere).
pub fn householder_apply(
    phi: &Wavepacket,
    target: &Wavepacket,
    input: &Wavepacket,
) -> Result<Wavepacket> {
    householder_core(phi, target, input, false)
}

/// Adjoint `U† = |u⟩⟨u|/(1 + ⟨target|φ⟩)* − 1` of [`householder_apply`].
pub fn householder_adjoint_apply(
    phi: &Wavepacket,
    target: &Wavepacket,
    input: &Wavepacket,
) -> Result<Wavepacket> {
    householder_core(phi, target, input, true)
}

/// Applies the measurement outcome: `ψ(x) → D(x)ψ(x)`, renormalized.
/// Returns the post-measurement state and the outcome probability
/// (pre-normalization norm²).
pub fn apply_detector(psi: &Wavepacket, d: &DetectorFunction) -> Result<(Wavepacket, f64)> {
    if psi.grid() != d.grid() {
        return Err(Error::GridMismatch);
    }
    let grid = psi.grid();
    let amps: Vec<Complex64> = psi
        .amplitudes()
        .iter()
        .zip(d.values())
        .map(|(p, v)| p * v)
        .collect();
    let norm_sq: f64 = (0..grid.len())
        .map(|i| grid.weight(i) * amps[i].norm_sqr())
        .sum();
    if norm_sq < 1e-14 {
        return Err(Error::NullOutcome);
    }
    let state = Wavepacket::from_samples(grid, amps)?;
    Ok((state, norm_sq))
}

/// All eight scalars of [`OverlapStats`] by quadrature:
/// `n_i = ⟨branch_i| |D|² |branch_i⟩`, `r = 2⟨φ||D|²T_a φ⟩/(n0+n1)`,
/// `z_i` the four `⟨branch|D|branch⟩/√(n0+n1)` matrix elements.
pub fn overlap_stats(
    phi: &Wavepacket,
    a: SeparationVector,
    d: &DetectorFunction,
) -> Result<OverlapStats> {
    if phi.grid() != d.grid() {
        return Err(Error::GridMismatch);
    }
    let grid = phi.grid();
    let shifted = phi.shift(a)?;
    let p = phi.amplitudes();
    let s = shifted.amplitudes();
    let dv = d.values();

    let mut n0 = 0.0;
    let mut n1 = 0.0;
    let mut r_num = Complex64::new(0.0, 0.0);
    let mut z0 = Complex64::new(0.0, 0.0);
    let mut z1 = Complex64::new(0.0, 0.0);
    let mut z2 = Complex64::new(0.0, 0.0);
    let mut z3 = Complex64::new(0.0, 0.0);
    for i in 0..grid.len() {
        let wt = grid.weight(i);
        let d2 = dv[i].norm_sqr();
        n0 += wt * d2 * p[i].norm_sqr();
        n1 += wt * d2 * s[i].norm_sqr();
        r_num += wt * d2 * p[i].conj() * s[i];
        z0 += wt * dv[i] * p[i].conj() * p[i];
        z1 += wt * dv[i] * s[i].conj() * s[i];
        z2 += wt * dv[i] * p[i].conj() * s[i];
        z3 += wt * dv[i] * s[i].conj() * p[i];
    }
    let total = n0 + n1;
    if total < 1e-300 {
        return Err(Error::NullOutcome);
    }
    let scale = 1.0 / total.sqrt();
    Ok(OverlapStats {
        n0,
        n1,
        r: 2.0 * r_num / total,
        z0: z0 * scale,
        z1: z1 * scale,
        z2: z2 * scale,
        z3: z3 * scale,
        t_overlap: phi.inner(&shifted)?,
    })
}

/// Phase-resolved which-way information
/// `W̃(θ) = |P0 − P1|` of the unambiguous-discrimination POVM applied to
/// the post-measurement state, in closed form.
pub fn which_way_theta(stats: &OverlapStats, theta: f64) -> Result<f64> {
    let n = stats.n_theta(theta);
    if n < 1e-12 {
        return Err(Error::OverlapSingularity);
    }
    let phase = Complex64::from_polar(1.0, theta);
    let cross = stats.z0.conj() * stats.z2 - stats.z3.conj() * stats.z1;
    let bracket = stats.z0.norm_sqr() - stats.z1.norm_sqr() + stats.z2.norm_sqr()
        - stats.z3.norm_sqr()
        + 2.0 * (phase * cross).re;
    Ok(((stats.n0 + stats.n1) / ((1.0 + stats.t_overlap.norm()) * n) * bracket).abs())
}

/// Phase-averaged which-way information:
/// `W = (W̃(θ_max) + W̃(θ_min)) / 2` at the fringe extrema.
pub fn which_way(stats: &OverlapStats) -> Result<f64> {
    if stats.r.norm() >= 1.0 - 1e-12 {
        return Err(Error::OverlapSingularity);
    }
    let (theta_max, theta_min) = stats.theta_extrema();
    let w = 0.5 * (which_way_theta(stats, theta_max)? + which_way_theta(stats, theta_min)?);
    // Guard against tiny negative noise; W is a probability difference.
    Ok(w.max(0.0))
}

/// The same `W` from its closed form in terms of the overlap scalars.
/// Agrees with [`which_way`] whenever `r ≠ 0` (for `r = 0` the extrema
/// convention makes the averaged form the defining one).
pub fn which_way_closed_form(stats: &OverlapStats) -> Result<f64> {
    let one_minus_r2 = 1.0 - stats.r.norm_sqr();
    if one_minus_r2 < 1e-12 {
        return Err(Error::OverlapSingularity);
    }
    let cross = stats.z0.conj() * stats.z2 - stats.z3.conj() * stats.z1;
    let bracket = stats.z0.norm_sqr() - stats.z1.norm_sqr() + stats.z2.norm_sqr()
        - stats.z3.norm_sqr()
        - 2.0 * (stats.r.conj() * cross).re;
    Ok((bracket / ((1.0 + stats.t_overlap.norm()) * one_minus_r2)).abs())
}

/// Post-measurement state for interference phase `θ`:
/// `ψ_D(θ) ∝ D(x)(φ(x) + e^{iθ} (T_a φ)(x))`, normalized.
pub fn postselected_state(
    phi: &Wavepacket,
    a: SeparationVector,
    d: &DetectorFunction,
    theta: f64,
) -> Result<Wavepacket> {
    let split = beam_split(phi, a, theta)?;
    Ok(apply_detector(&split, d)?.0)
}

/// Fringe pattern `f(θ) = |⟨φ| U_BS†(0) |ψ_D(θ)⟩|²`: the post-measurement
/// state is recombined on the `θ = 0` beam splitter and projected back on
/// the input. Since `U_BS(0) φ = ψ_BS1(0)`, this equals
/// `|⟨ψ_BS1(0)|ψ_D(θ)⟩|²`.
pub fn fringe(
    phi: &Wavepacket,
    a: SeparationVector,
    d: &DetectorFunction,
    theta: f64,
) -> Result<f64> {
    let reference = beam_split(phi, a, 0.0)?;
    let psi_d = postselected_state(phi, a, d, theta)?;
    Ok(reference.inner(&psi_d)?.norm_sqr())
}

/// Visibility from the closed form
/// `V² = 1 − (1−|r|²)(|α|²−|β|²)² / (|α|²+|β|² − 2Re(r α β*))²`
/// with `α = z0 + z3`, `β = z1 + z2`.
pub fn visibility(stats: &OverlapStats) -> Result<f64> {
    let alpha = stats.z0 + stats.z3;
    let beta = stats.z1 + stats.z2;
    let a2 = alpha.norm_sqr();
    let b2 = beta.norm_sqr();
    let denom = a2 + b2 - 2.0 * (stats.r * alpha * beta.conj()).re;
    if denom.abs() < 1e-12 {
        return Err(Error::DegenerateFringe);
    }
    let v2 = 1.0 - (1.0 - stats.r.norm_sqr()) * (a2 - b2).powi(2) / (denom * denom);
    // v2 ∈ [0, 1] analytically; clamp numerical noise.
    Ok(v2.clamp(0.0, 1.0).sqrt())
}

/// Visibility from an explicit `θ`-scan of the fringe pattern:
/// `V = (f_max − f_min)/(f_max + f_min)`, with local ternary refinement of
/// both extrema. Cross-validates [`visibility`] to ≤ 1e−6.
pub fn visibility_scan(
    phi: &Wavepacket,
    a: SeparationVector,
    d: &DetectorFunction,
    n_points: usize,
) -> Result<f64> {
    let n = n_points.max(8);
    let eval = |theta: f64| fringe(phi, a, d, theta);
    let mut best_max = (0.0f64, f64::MIN);
    let mut best_min = (0.0f64, f64::MAX);
    let step = 2.0 * std::f64::consts::PI / n as f64;
    for i in 0..n {
        let theta = i as f64 * step;
        let f = eval(theta)?;
        if f > best_max.1 {
            best_max = (theta, f);
        }
        if f < best_min.1 {
            best_min = (theta, f);
        }
    }
    let refine = |center: f64, maximize: bool| -> Result<f64> {
        let mut lo = center - step;
        let mut hi = center + step;
        for _ in 0..60 {
            let m1 = lo + (hi - lo) / 3.0;
            let m2 = hi - (hi - lo) / 3.0;
            let f1 = eval(m1)?;
            let f2 = eval(m2)?;
            let move_lo = if maximize { f1 < f2 } else { f1 > f2 };
            if move_lo {
                lo = m1;
            } else {
                hi = m2;
            }
        }
        eval(0.5 * (lo + hi))
    };
    let f_max = refine(best_max.0, true)?;
    let f_min = refine(best_min.0, false)?;
    if f_max + f_min < 1e-12 {
        return Err(Error::DegenerateFringe);
    }
    Ok((f_max - f_min) / (f_max + f_min))
}

/// Full duality evaluation: `W`, `V`, and `W² + V²`.
pub fn duality_check(
    phi: &Wavepacket,
    a: SeparationVector,
    d: &DetectorFunction,
) -> Result<DualityReport> {
    let stats = overlap_stats(phi, a, d)?;
    let w = which_way(&stats)?;
    let v = visibility(&stats)?;
    let (theta_max, theta_min) = stats.theta_extrema();
    Ok(DualityReport {
        w,
        v,
        duality: w * w + v * v,
        theta_max,
        theta_min,
    })
}

/// Probabilities of the three-outcome unambiguous-discrimination POVM.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PovmTriple {
    pub p0: f64,
    pub p1: f64,
    pub p2: f64,
    /// `|p0 − p1|`, the which-way ingredient.
    pub which_way_ingredient: f64,
    /// True when `p2 < 0`: the state has components outside
    /// span{φ, T_a φ}, where the null operator is not positive.
    /// Diagnostic, not an error.
    pub p2_negative: bool,
}

/// The optimal conclusive (unambiguous discrimination) POVM for the two
/// non-orthogonal path states `φ` and `T_a φ`:
/// `P0 = (1 − |φ⟩⟨φ|)/(1+|t|)`, `P1 = (1 − T_a|φ⟩⟨φ|T_a†)/(1+|t|)`,
/// `P2 = 1 − P0 − P1` (the null measurement), with `t = ⟨φ|T_a φ⟩`.
#[derive(Clone, Debug)]
pub struct UsdPovm {
    phi: Wavepacket,
    t_phi: Wavepacket,
    t_overlap: Complex64,
}

impl UsdPovm {
    pub fn new(phi: &Wavepacket, a: SeparationVector) -> Result<UsdPovm> {
        let t_phi = phi.shift(a)?;
        let t_overlap = phi.inner(&t_phi)?;
        if t_overlap.norm() >= 1.0 - 1e-12 {
            return Err(Error::IndistinguishableStates);
        }
        Ok(UsdPovm {
            phi: phi.clone(),
            t_phi,
            t_overlap,
        })
    }

    pub fn t_overlap(&self) -> Complex64 {
        self.t_overlap
    }

    /// Outcome probabilities `p_i = ⟨state|P_i|state⟩`.
    pub fn probabilities(&self, state: &Wavepacket) -> Result<PovmTriple> {
        let denom = 1.0 + self.t_overlap.norm();
        let c0 = self.phi.inner(state)?;
        let c1 = self.t_phi.inner(state)?;
        let p0 = (1.0 - c0.norm_sqr()) / denom;
        let p1 = (1.0 - c1.norm_sqr()) / denom;
        let p2 = 1.0 - p0 - p1;
        Ok(PovmTriple {
            p0,
            p1,
            p2,
            which_way_ingredient: (p0 - p1).abs(),
            p2_negative: p2 < -1e-12,
        })
    }

    /// Unnormalized field `P0|state⟩`; `P0 φ = 0` by construction.
    pub fn apply_p0(&self, state: &Wavepacket) -> Result<Vec<Complex64>> {
        self.apply_complement(&self.phi, state)
    }

    /// Unnormalized field `P1|state⟩`; `P1 T_a φ = 0` by construction.
    pub fn apply_p1(&self, state: &Wavepacket) -> Result<Vec<Complex64>> {
        self.apply_complement(&self.t_phi, state)
    }

    fn apply_complement(&self, ket: &Wavepacket, state: &Wavepacket) -> Result<Vec<Complex64>> {
        let denom = 1.0 + self.t_overlap.norm();
        let c = ket.inner(state)?;
        Ok(state
            .amplitudes()
            .iter()
            .zip(ket.amplitudes())
            .map(|(s, k)| (s - c * k) / denom)
            .collect())
    }
}

/// Convenience wrapper: POVM outcome probabilities of `state` for the path
/// pair `(φ, T_a φ)`.
pub fn povm_probabilities(
    phi: &Wavepacket,
    a: SeparationVector,
    state: &Wavepacket,
) -> Result<PovmTriple> {
    UsdPovm::new(phi, a)?.probabilities(state)
}
