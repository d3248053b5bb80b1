//! Geometric phase of pair (n = 2, l = 0) at delta = 1 around four
//! rectangles: one enclosing each intersection, one enclosing neither and one
//! enclosing both. Loops run counterclockwise in (g, epsilon).
//!
//! The last column diagonalizes the 2x2 block numerically, in a gauge of its
//! own, so only its value modulo 2pi is meaningful.

use aqrm::berry::{
    berry_phase, wilson_loop, Band, DiagonalizedStates, GaugeFixedStates, LoopTrajectory, Orientation, PairSetup,
};
use aqrm::gaa::{locate_cis, Approximation};
use aqrm::BlockIndex;

fn main() -> aqrm::Result<()> {
    let setup = PairSetup::new(BlockIndex::new(2, 0), 1.0, 1.0, Approximation::Gaa)?;
    for ci in locate_cis(2, 0, 1.0, 1.0, 1.5)? {
        println!("intersection at g* = {:.10}, E = {:.10}", ci.g_star, ci.energy);
    }
    let loops = [
        ("blue", (0.2, 0.5), (-0.1, 0.1)),
        ("green", (0.8, 1.0), (-0.1, 0.1)),
        ("red", (0.55, 0.7), (-0.1, 0.1)),
        ("black", (0.25, 1.1), (-0.15, 0.15)),
    ];
    println!("{:>6} {:>6} {:>10} {:>12} {:>12}", "loop", "band", "analytic", "wilson", "mod 2pi");
    for (name, g, e) in loops {
        let lp = LoopTrajectory::rectangle(g, e, 2000, Orientation::Counterclockwise)?;
        for band in [Band::Minus, Band::Plus] {
            let analytic = berry_phase(&lp, &setup, band)?;
            let smooth = wilson_loop(&lp, &GaugeFixedStates(setup), band)?;
            let numeric = wilson_loop(&lp, &DiagonalizedStates(setup), band)?;
            println!(
                "{name:>6} {:>6} {:>9}π {:>11.6}π {:>11.6}π",
                format!("{band:?}").to_lowercase(),
                analytic.phase_over_pi(),
                smooth.phase / std::f64::consts::PI,
                numeric.principal_phase() / std::f64::consts::PI
            );
        }
    }
    Ok(())
}
