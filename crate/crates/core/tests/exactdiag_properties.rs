use aqrm::exactdiag::{build_hamiltonian, converged_spectrum, spectrum_at, TruncationConfig};
use aqrm::ModelParams;
use proptest::prelude::*;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    // σz(−1)^N conjugation maps ε → −ε
    #[test]
    fn bias_sign_symmetry(d in 0.0f64..2.0, g in 0.0f64..1.5, e in 0.0f64..2.5) {
        let cfg = TruncationConfig::new(256, 1e-9, 10).unwrap();
        let a = converged_spectrum(&ModelParams::new(d, 1.0, g, e).unwrap(), &cfg).unwrap();
        let b = converged_spectrum(&ModelParams::new(d, 1.0, g, -e).unwrap(), &cfg).unwrap();
        for (x, y) in a.energies.iter().zip(&b.energies) {
            prop_assert!((x - y).abs() < 1e-8);
        }
    }

    // Cauchy interlacing: a larger cutoff can only lower each level
    #[test]
    fn truncation_is_variational(d in 0.0f64..2.0, g in 0.0f64..1.2, e in -2.0f64..2.0, n in 8usize..40) {
        let p = ModelParams::new(d, 1.0, g, e).unwrap();
        let small = spectrum_at(&p, n, 8, false).unwrap();
        let large = spectrum_at(&p, n + 5, 8, false).unwrap();
        for (s, l) in small.energies.iter().zip(&large.energies) {
            prop_assert!(*l <= s + 1e-12);
        }
    }

    #[test]
    fn eigenpairs_are_accurate(d in 0.0f64..2.0, g in 0.0f64..1.5, e in -2.0f64..2.0) {
        let p = ModelParams::new(d, 1.0, g, e).unwrap();
        let n_max = 60;
        let h = build_hamiltonian(&p, n_max).unwrap();
        let norm = h.frobenius_norm();
        let s = spectrum_at(&p, n_max, 12, true).unwrap();
        let vecs = s.eigenvectors.unwrap();
        for w in s.energies.windows(2) {
            prop_assert!(w[0] <= w[1]);
        }
        for (i, v) in vecs.iter().enumerate() {
            let hv = h.matvec(v);
            let residual = hv.iter().zip(v).map(|(a, b)| (a - s.energies[i] * b).powi(2)).sum::<f64>().sqrt();
            prop_assert!(residual <= 1e-10 * norm);
            for (j, w) in vecs.iter().enumerate() {
                let expected = if i == j { 1.0 } else { 0.0 };
                prop_assert!((dot(v, w) - expected).abs() < 1e-10);
            }
        }
    }
}
