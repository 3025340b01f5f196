//! Which-way information without a click-rate difference: a detector
//! whose response modulus is ~1 at both branches but flips sign across
//! branch 0 produces equal click rates — a population-based argument
//! would say it learned nothing — yet it destroys the fringes entirely
//! and still carries which-way information W = 1/2. The information
//! lives in the sign structure of the detector, not in the branch
//! populations, and the measurement is maximally inefficient: it erases
//! all coherence (V = 0) while extracting only half the path knowledge
//! (W² + V² = 1/4, far below the duality bound).

use complementarity::interferometry::{duality_check, overlap_stats, DetectorFunction};
use complementarity::{GaussianParams, Grid, SeparationVector, Wavepacket};
use num_complex::Complex64;

fn main() -> complementarity::Result<()> {
    let grid = Grid::symmetric(60.0, 32768)?;
    let w_phi = 1.0;
    let a = SeparationVector::new(8.0 * w_phi)?;
    let phi = Wavepacket::gaussian(GaussianParams::new(0.0, w_phi, 0.0)?, grid)?;

    // Sign flip across branch 0 (transition width ≪ packet width),
    // constant +1 at branch 1.
    let sigma = w_phi / 50.0;
    let d_sign = DetectorFunction::from_fn(grid, |x| Complex64::new((x / sigma).tanh(), 0.0))?;
    let stats = overlap_stats(&phi, a, &d_sign)?;
    let total = stats.n0 + stats.n1;
    let imbalance = (stats.n0 - stats.n1).abs() / total;
    println!("# sign-flip detector, |D| ≈ 1 everywhere");
    println!(
        "  branch click rates n0 = {:.6}, n1 = {:.6} (imbalance {:.2e})",
        stats.n0, stats.n1, imbalance
    );
    let rep = duality_check(&phi, a, &d_sign)?;
    println!(
        "  W = {:.6}, V = {:.6}, W² + V² = {:.6}",
        rep.w, rep.v, rep.duality
    );

    // For contrast: a very wide Gaussian detector barely resolves the
    // branches, so it leaves the fringes intact instead.
    let d_wide = DetectorFunction::gaussian(GaussianParams::new(0.0, 40.0, 0.0)?, grid);
    let rep_wide = duality_check(&phi, a, &d_wide)?;
    println!("\n# wide Gaussian detector (width ≫ a)");
    println!(
        "  W = {:.6}, V = {:.6}, W² + V² = {:.6}",
        rep_wide.w, rep_wide.v, rep_wide.duality
    );

    // Equal click rates, no fringes, yet W is far above the population
    // imbalance: the path information rides on the sign of D.
    assert!(imbalance < 0.02);
    assert!((rep.w - 0.5).abs() < 0.02 && rep.v < 1e-3);
    assert!(rep.w > 10.0 * imbalance);
    assert!(rep_wide.v > 0.9 && rep_wide.w < 0.2);
    assert!(rep.duality <= 1.0 + 1e-10 && rep_wide.duality <= 1.0 + 1e-10);
    println!("\n# the sign structure alone carries which-way information the click rates cannot");
    Ok(())
}
