//! Exact degeneracies from the constraint polynomials, each confirmed by
//! exact diagonalization.

use aqrm::constraints::{certification_config, juddian_roots};

fn main() -> aqrm::Result<()> {
    let cfg = certification_config();
    println!("{:>5} {:>2} {:>2} {:>14} {:>14} {:>10} {:>5}", "delta", "n", "l", "g*", "E", "gap", "ok");
    for delta in [0.3, 0.7, 1.2] {
        for l in 0..=2 {
            for n in 1..=3 {
                let scan = juddian_roots(n, l, delta, 1.0, 2.0, Some(&cfg))?;
                for r in scan.roots {
                    println!(
                        "{delta:>5} {n:>2} {l:>2} {:>14.10} {:>14.10} {:>10.2e} {:>5}",
                        r.g_star,
                        r.energy,
                        r.gap.unwrap(),
                        r.certified
                    );
                }
            }
        }
    }
    Ok(())
}
