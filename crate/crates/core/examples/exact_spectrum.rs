//! Lowest levels from truncated exact diagonalization, with the cutoff the
//! doubling search settled on.
//!
//! cargo run --example exact_spectrum -- 0.5 1.0 0.8 1.0

use aqrm::exactdiag::{converged_spectrum, TruncationConfig};
use aqrm::ModelParams;

fn main() -> aqrm::Result<()> {
    let args: Vec<f64> = std::env::args().skip(1).map(|a| a.parse().expect("numeric argument")).collect();
    let [delta, omega, g, epsilon] = match args.as_slice() {
        [d, w, g, e] => [*d, *w, *g, *e],
        [] => [0.5, 1.0, 0.8, 1.0],
        _ => panic!("usage: exact_spectrum [delta omega g epsilon]"),
    };
    let params = ModelParams::new(delta, omega, g, epsilon)?;
    let cfg = TruncationConfig::new(512, 1e-10, 10)?;
    let spectrum = converged_spectrum(&params, &cfg)?;

    println!("delta={delta} omega={omega} g={g} epsilon={epsilon}  (Fock cutoff {})", spectrum.n_max_used.unwrap());
    for (i, e) in spectrum.energies.iter().enumerate() {
        println!("{i:>3}  {e:>20.12}  {:>20.12}", e + g * g / omega);
    }
    Ok(())
}
