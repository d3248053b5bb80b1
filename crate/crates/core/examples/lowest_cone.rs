//! The lowest conical intersection, pair (n = 1, l = 0), sampled on a small
//! patch around its apex by exact diagonalization, AA and GAA.

use aqrm::constraints::juddian_roots;
use aqrm::exactdiag::{level_pair, TruncationConfig};
use aqrm::gaa::{eigenpair, Approximation};
use aqrm::{BlockIndex, ModelParams};

fn main() -> aqrm::Result<()> {
    let idx = BlockIndex::new(1, 0);
    let cfg = TruncationConfig::new(512, 1e-10, 8)?;
    for delta in [0.7, 1.2] {
        let g_star = juddian_roots(1, 0, delta, 1.0, 2.0, None)?.roots[0].g_star;
        println!("delta = {delta}: apex at g* = {g_star:.10}");
        println!("{:>8} {:>8}  {:>22}  {:>22}  {:>22}", "dg", "eps", "exact", "AA", "GAA");
        for dg in [-0.1, 0.0, 0.1] {
            for eps in [-0.1, 0.0, 0.1] {
                let p = ModelParams::new(delta, 1.0, g_star + dg, eps)?;
                let (lo, hi) = level_pair(&p, idx, &cfg)?;
                let aa = eigenpair(&p, idx, Approximation::Aa);
                let gaa = eigenpair(&p, idx, Approximation::Gaa);
                println!(
                    "{dg:>8.2} {eps:>8.2}  {lo:>10.6} {hi:>10.6}  {:>10.6} {:>10.6}  {:>10.6} {:>10.6}",
                    aa.e_minus, aa.e_plus, gaa.e_minus, gaa.e_plus
                );
            }
        }
        println!();
    }
    Ok(())
}
