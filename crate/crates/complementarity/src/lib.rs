//! A numerical laboratory for matter-wave interferometry and wave-particle
//! complementarity.
//!
//! The crate implements the full chain from a coherently split wavepacket to
//! the complementarity quantities it gives rise to:
//!
//! * [`wavefield`] — complex 1D wavefunction algebra: grids, Gaussian
//!   packets, inner products, the shift operator `T_a = exp(-i a p)` and
//!   position / modular-momentum moments (natural units, `ħ = 1`).
//! * [`interferometry`] — beam splitting via Householder reflections,
//!   generalized position measurements described by detector functions
//!   `D(x)`, which-way information `W`, fringe visibility `V`, the duality
//!   bound `W² + V² ≤ 1`, and the unambiguous-discrimination POVM.
//! * [`uncertainty`] — position uncertainty, modular momentum, the Holevo
//!   phase uncertainty and the inequality chains linking them to `W` and `V`.
//! * [`emission`] — where detector functions come from physically:
//!   discrete-mode spontaneous-emission dynamics, the far-field detector
//!   function of a decayed emitter, and thin-lens / perfect-lens closed
//!   forms for Gaussian optics.
//! * [`montecarlo`] — a reproducible randomized verification harness for
//!   the duality and uncertainty inequalities.
//! * [`config`], [`report`], [`cli`] — flat key=value configuration files,
//!   manifest-stamped CSV/JSON reports, and the command-line surface.
//!
//! Everything is pure and immutable after construction; batch drivers
//! parallelize over samples with deterministic per-sample RNG streams.

pub mod cli;
pub mod config;
pub mod emission;
pub mod error;
mod fft;
pub mod interferometry;
pub mod montecarlo;
pub mod report;
pub mod uncertainty;
pub mod wavefield;

pub use error::{Error, Result};
pub use interferometry::{DetectorFunction, DualityReport, OverlapStats, PovmTriple, UsdPovm};
pub use uncertainty::UncertaintyReport;
pub use wavefield::{GaussianParams, Grid, SeparationVector, Wavepacket};
