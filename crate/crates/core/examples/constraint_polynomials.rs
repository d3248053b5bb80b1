//! Normalized constraint polynomials next to the Laguerre polynomials they
//! reduce to at delta = 0.

use aqrm::adiabatic::laguerre;
use aqrm::constraints::{kbar, normalized_constraint};

fn main() {
    let n = 3;
    let epsilon = 1.0;
    println!("n = {n}, epsilon = {epsilon}");
    println!("{:>5} {:>12} {:>12} {:>12} {:>12} {:>10}", "g", "L(4g^2)", "K(D=0)", "K(D=0.5)", "K(D=1)", "Kbar(D=1)");
    for i in 0..=20 {
        let g = 0.075 * i as f64;
        println!(
            "{g:>5.3} {:>12.6} {:>12.6} {:>12.6} {:>12.6} {:>10.6}",
            laguerre(n, epsilon, 4.0 * g * g),
            normalized_constraint(n, g, 0.0, epsilon, 1.0),
            normalized_constraint(n, g, 0.5, epsilon, 1.0),
            normalized_constraint(n, g, 1.0, epsilon, 1.0),
            kbar(n, g, 1.0, epsilon, 1.0),
        );
    }
}
