//! How far the adiabatic approximation drifts from the exact spectrum as the
//! qubit splitting grows.

use aqrm::exactdiag::{converged_spectrum, TruncationConfig};
use aqrm::gaa::spectrum_aa;
use aqrm::ModelParams;

fn main() -> aqrm::Result<()> {
    let k = 8;
    let cfg = TruncationConfig::new(512, 1e-10, k)?;
    println!("{:>6} {:>6}  {:>12}", "delta", "eps", "max |AA-ED|");
    for delta in [0.01, 0.1, 0.3, 0.5, 1.0] {
        for epsilon in [0.0, 1.0] {
            let mut worst = 0.0f64;
            for i in 0..=30 {
                let p = ModelParams::new(delta, 1.0, 0.05 * i as f64, epsilon)?;
                let aa = spectrum_aa(&p, k)?.energies;
                let ed = converged_spectrum(&p, &cfg)?.energies;
                worst = aa.iter().zip(&ed).fold(worst, |m, (a, b)| m.max((a - b).abs()));
            }
            println!("{delta:>6} {epsilon:>6}  {worst:>12.3e}");
        }
    }
    Ok(())
}
