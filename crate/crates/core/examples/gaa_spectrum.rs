//! Exact, AA and GAA spectra along g for a few (epsilon, delta) choices,
//! written as CSV for plotting.
//!
//! cargo run --release --example gaa_spectrum > gaa.csv

use aqrm::cli::{spectrum_rows, Axis, SweepSpec};
use aqrm::Method;

fn main() -> aqrm::Result<()> {
    let mut out = csv::Writer::from_writer(std::io::stdout());
    let mut header = true;
    for (epsilon, delta) in [(0.0, 0.5), (0.5, 0.5), (1.0, 0.5), (1.0, 1.0)] {
        let spec = SweepSpec {
            delta,
            omega: 1.0,
            g: Axis::new(0.0, 1.2, 121)?,
            epsilon: Axis::fixed(epsilon),
            methods: vec![Method::Exact, Method::Aa, Method::Gaa],
            levels: "10".parse()?,
            tol: 1e-8,
        };
        for row in spectrum_rows(&spec, None)? {
            if header {
                out.write_record(["delta", "method", "g", "epsilon", "level_index", "energy"])?;
                header = false;
            }
            out.write_record([
                delta.to_string(),
                row.method.to_string(),
                row.g.to_string(),
                row.epsilon.to_string(),
                row.level_index.to_string(),
                row.energy.to_string(),
            ])?;
        }
    }
    out.flush()?;
    Ok(())
}
