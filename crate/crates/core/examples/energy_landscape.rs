//! Rescaled energy surfaces over (g, epsilon). For each epsilon column the
//! narrowest gap between adjacent levels is reported: it collapses only where
//! epsilon/omega is an integer.
//!
//! The grid starts at g = 0.2: closer to g = 0 the bare spin and oscillator
//! levels are nearly resonant for every epsilon.

use aqrm::cli::{landscape_rows, Axis, LevelRange, SweepSpec};
use aqrm::Method;

fn main() -> aqrm::Result<()> {
    let levels = LevelRange { first: 2, last: 7 };
    let spec = SweepSpec {
        delta: 1.0,
        omega: 1.0,
        g: Axis::new(0.2, 1.5, 105)?,
        epsilon: Axis::new(-2.0, 2.0, 17)?,
        methods: vec![Method::Exact],
        levels,
        tol: 1e-9,
    };
    let rows = landscape_rows(&spec, None)?;
    println!("{} grid rows", rows.len());
    println!("{:>6} {:>10} {:>6} {:>8}", "eps", "min gap", "at g", "E+g^2");
    for eps in spec.epsilon.values() {
        let best = rows
            .chunks(levels.count())
            .filter(|c| c[0].epsilon == eps)
            .flat_map(|c| {
                c.windows(2).map(|w| {
                    (
                        w[1].energy_rescaled - w[0].energy_rescaled,
                        w[0].g,
                        0.5 * (w[0].energy_rescaled + w[1].energy_rescaled),
                    )
                })
            })
            .min_by(|a, b| a.0.total_cmp(&b.0))
            .unwrap();
        println!("{eps:>6.2} {:>10.2e} {:>6.3} {:>8.4}", best.0, best.1, best.2);
    }
    Ok(())
}
