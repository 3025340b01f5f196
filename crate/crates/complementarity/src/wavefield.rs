//! Complex 1D wavefunction algebra.
//!
//! Everything downstream reduces to one spatial dimension along the branch
//! separation: the transverse directions factor out for the separable
//! Gaussian states used throughout. Natural units with `ħ = 1`; lengths are
//! in units of the reference packet width unless a lens configuration
//! supplies SI values.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fft;

/// Wavefunctions must be negligible at the grid boundary so the spectral
/// shift cannot wrap around.
pub const PADDING_LIMIT: f64 = 1e-12;

/// Uniform 1D spatial grid. `n_points` is a power of two (for the FFT) and
/// at least 256.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Grid {
    x_min: f64,
    x_max: f64,
    n_points: usize,
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Grid> {
        if !(x_max > x_min) || !x_min.is_finite() || !x_max.is_finite() {
            return Err(Error::InvalidGrid(format!(
                "need finite x_min < x_max, got [{x_min}, {x_max}]"
            )));
        }
        if n_points < 256 || !n_points.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "n_points must be a power of two >= 256, got {n_points}"
            )));
        }
        Ok(Grid {
            x_min,
            x_max,
            n_points,
        })
    }

    /// Symmetric grid `[-half_width, half_width]`.
    pub fn symmetric(half_width: f64, n_points: usize) -> Result<Grid> {
        Grid::new(-half_width, half_width, n_points)
    }

    /// Grid sized to hold packets and detectors with the given centers and
    /// widths: symmetric domain of half-width `12 · max(w, |x0|)`, so every
    /// Gaussian in play decays far below [`PADDING_LIMIT`] at the edge.
    pub fn spanning(centers: &[f64], widths: &[f64], n_points: usize) -> Result<Grid> {
        let mut extent: f64 = 0.0;
        for &c in centers {
            extent = extent.max(c.abs());
        }
        for &w in widths {
            extent = extent.max(w);
        }
        if extent == 0.0 {
            return Err(Error::InvalidGrid("no finite extent given".into()));
        }
        Grid::symmetric(12.0 * extent, n_points)
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx()
    }

    pub fn xs(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(move |i| self.x(i))
    }

    /// Trapezoid quadrature weight of point `i`.
    pub fn weight(&self, i: usize) -> f64 {
        if i == 0 || i == self.n_points - 1 {
            0.5 * self.dx()
        } else {
            self.dx()
        }
    }

    /// Trapezoid quadrature of a complex integrand sampled on the grid.
    pub fn integrate(&self, f: impl Fn(usize, f64) -> Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..self.n_points {
            acc += self.weight(i) * f(i, self.x(i));
        }
        acc
    }
}

/// Parameters of an (unnormalized) Gaussian packet
/// `exp(−(x−x0)²/w² + i k x)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GaussianParams {
    pub x0: f64,
    pub w: f64,
    pub k: f64,
}

impl GaussianParams {
    pub fn new(x0: f64, w: f64, k: f64) -> Result<GaussianParams> {
        if !(w > 0.0) || !x0.is_finite() || !k.is_finite() {
            return Err(Error::InvalidGaussian(format!(
                "need w > 0 and finite x0, k; got x0={x0}, w={w}, k={k}"
            )));
        }
        Ok(GaussianParams { x0, w, k })
    }

    /// Unnormalized amplitude at `x`.
    pub fn amplitude(&self, x: f64) -> Complex64 {
        let d = x - self.x0;
        Complex64::new(-d * d / (self.w * self.w), self.k * x).exp()
    }
}

/// Scalar branch separation `a ≥ 0` (the 1D component of the separation
/// vector between the interferometer arms).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SeparationVector(f64);

impl SeparationVector {
    pub fn new(a: f64) -> Result<SeparationVector> {
        if !(a >= 0.0) || !a.is_finite() {
            return Err(Error::NegativeSeparation(a));
        }
        Ok(SeparationVector(a))
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

/// Normalized complex wavefunction on a [`Grid`], optionally carrying the
/// analytic Gaussian parameters it was built from.
#[derive(Clone, Debug)]
pub struct Wavepacket {
    grid: Grid,
    amplitudes: Vec<Complex64>,
    gaussian: Option<GaussianParams>,
}

impl Wavepacket {
    /// Normalized Gaussian packet, tagged with its analytic parameters.
    pub fn gaussian(params: GaussianParams, grid: Grid) -> Result<Wavepacket> {
        let amplitudes: Vec<Complex64> = grid.xs().map(|x| params.amplitude(x)).collect();
        let mut psi = Wavepacket::from_parts(grid, amplitudes)?;
        psi.gaussian = Some(params);
        Ok(psi)
    }

    /// Build from raw samples; normalizes and enforces the padding rule.
    pub fn from_samples(grid: Grid, amplitudes: Vec<Complex64>) -> Result<Wavepacket> {
        Wavepacket::from_parts(grid, amplitudes)
    }

    fn from_parts(grid: Grid, mut amplitudes: Vec<Complex64>) -> Result<Wavepacket> {
        if amplitudes.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "{} samples on a {}-point grid",
                amplitudes.len(),
                grid.len()
            )));
        }
        let norm_sq: f64 = (0..grid.len())
            .map(|i| grid.weight(i) * amplitudes[i].norm_sqr())
            .sum();
        if norm_sq < 1e-300 {
            return Err(Error::NullOutcome);
        }
        let scale = 1.0 / norm_sq.sqrt();
        for a in amplitudes.iter_mut() {
            *a *= scale;
        }
        let psi = Wavepacket {
            grid,
            amplitudes,
            gaussian: None,
        };
        psi.check_padding()?;
        Ok(psi)
    }

    fn check_padding(&self) -> Result<()> {
        let edge = self.amplitudes[0]
            .norm()
            .max(self.amplitudes[self.grid.len() - 1].norm());
        if edge > PADDING_LIMIT {
            return Err(Error::PaddingViolation {
                amplitude: edge,
                limit: PADDING_LIMIT,
            });
        }
        Ok(())
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn gaussian_tag(&self) -> Option<GaussianParams> {
        self.gaussian
    }

    /// Trapezoid norm². 1 ± 1e−10 by construction; exposed for invariants.
    pub fn norm_sq(&self) -> f64 {
        (0..self.grid.len())
            .map(|i| self.grid.weight(i) * self.amplitudes[i].norm_sqr())
            .sum()
    }

    /// `⟨self|other⟩` by trapezoid quadrature.
    pub fn inner(&self, other: &Wavepacket) -> Result<Complex64> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok((0..self.grid.len())
            .map(|i| self.grid.weight(i) * self.amplitudes[i].conj() * other.amplitudes[i])
            .sum())
    }

    /// Spatial translation by `d` (any sign) via spectral phase
    /// multiplication: `(T_d ψ)(x) = ψ(x − d)`. Unitary; errors if the
    /// shifted packet touches the grid boundary.
    pub fn shift_by(&self, d: f64) -> Result<Wavepacket> {
        if d == 0.0 {
            return Ok(self.clone());
        }
        let mut buf = self.amplitudes.clone();
        fft::forward(&mut buf);
        for (v, p) in buf.iter_mut().zip(fft::momenta(self.grid.len(), self.grid.dx())) {
            *v *= Complex64::new(0.0, -p * d).exp();
        }
        fft::inverse(&mut buf);
        let shifted = Wavepacket {
            grid: self.grid,
            amplitudes: buf,
            gaussian: self.gaussian.map(|g| GaussianParams {
                x0: g.x0 + d,
                ..g
            }),
        };
        shifted.check_padding()?;
        Ok(shifted)
    }

    /// The shift operator `T_a`.
    pub fn shift(&self, a: SeparationVector) -> Result<Wavepacket> {
        self.shift_by(a.value())
    }

    /// Modular-momentum expectation `⟨T_a⟩ = ⟨ψ|T_a ψ⟩`; modulus ≤ 1.
    pub fn expectation_t(&self, a: SeparationVector) -> Result<Complex64> {
        self.inner(&self.shift(a)?)
    }

    /// `(⟨x⟩, Δx²)` against `|ψ(x)|²`.
    pub fn position_moments(&self) -> (f64, f64) {
        let mut mean = 0.0;
        for i in 0..self.grid.len() {
            mean += self.grid.weight(i) * self.grid.x(i) * self.amplitudes[i].norm_sqr();
        }
        let mut var = 0.0;
        for i in 0..self.grid.len() {
            let d = self.grid.x(i) - mean;
            var += self.grid.weight(i) * d * d * self.amplitudes[i].norm_sqr();
        }
        (mean, var)
    }
}
