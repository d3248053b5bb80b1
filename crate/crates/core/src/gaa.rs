//! Generalized adiabatic approximation (GAA).
//!
//! Same 2×2 block structure as the AA, but the Laguerre factor of the
//! tunnelling strength is replaced by the normalized constraint polynomial,
//!
//! ```text
//! Ω_nl^GAA = Δ exp(−2g²/ω²) (−2g/ω)^l √(n!/(n+l)!) K_n^ε(g, Δ),
//! ```
//!
//! so that the block gap closes exactly at the Juddian points. Optionally the
//! bounded `K̄_n^ε = ½ arctan P_n^n` is used instead of `K_n^ε`: the zeros stay
//! the same while the magnitude can no longer produce spurious crossings.

use serde::{Deserialize, Serialize};

use crate::adiabatic::{self, Block2, BlockEigenpair};
use crate::constraints::{self, ConstraintFactor};
use crate::error::{Error, Result};
use crate::exactdiag::SpectrumResult;
use crate::model::{validate, BlockIndex, ModelParams};
use crate::Method;

/// Largest `|ε/ω − l|` for which the level pairing is trusted.
pub const PAIRING_VALIDITY: f64 = 0.25;

/// Approximation used for a block tunnelling strength.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Approximation {
    Aa,
    #[default]
    Gaa,
    GaaKbar,
}

impl Approximation {
    pub fn method(self) -> Method {
        match self {
            Approximation::Aa => Method::Aa,
            Approximation::Gaa => Method::Gaa,
            Approximation::GaaKbar => Method::GaaKbar,
        }
    }
}

impl TryFrom<Method> for Approximation {
    type Error = Error;

    fn try_from(method: Method) -> Result<Self> {
        match method {
            Method::Aa => Ok(Approximation::Aa),
            Method::Gaa => Ok(Approximation::Gaa),
            Method::GaaKbar => Ok(Approximation::GaaKbar),
            Method::Exact => Err(Error::InvalidArgument("exact diagonalization has no block tunnelling".into())),
        }
    }
}

impl std::str::FromStr for Approximation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.parse::<Method>().and_then(Approximation::try_from)
    }
}

/// `Ω_nl^GAA` with the chosen constraint factor.
pub fn gaa_tunneling(params: &ModelParams, idx: BlockIndex, factor: ConstraintFactor) -> f64 {
    let k = factor.evaluate(idx.n, params.g, params.delta, params.abs_epsilon(), params.omega);
    adiabatic::tunneling_prefactor(params, idx) * k
}

/// Block tunnelling strength for any approximation.
pub fn tunneling(params: &ModelParams, idx: BlockIndex, approx: Approximation) -> f64 {
    match approx {
        Approximation::Aa => adiabatic::aa_tunneling(params, idx),
        Approximation::Gaa => gaa_tunneling(params, idx, ConstraintFactor::Normalized),
        Approximation::GaaKbar => gaa_tunneling(params, idx, ConstraintFactor::Arctan),
    }
}

pub fn gaa_eigenpair(params: &ModelParams, idx: BlockIndex, factor: ConstraintFactor) -> BlockEigenpair {
    let method = match factor {
        ConstraintFactor::Normalized => Method::Gaa,
        ConstraintFactor::Arctan => Method::GaaKbar,
    };
    BlockEigenpair::from_tunneling(params, idx, gaa_tunneling(params, idx, factor), method)
}

pub fn eigenpair(params: &ModelParams, idx: BlockIndex, approx: Approximation) -> BlockEigenpair {
    BlockEigenpair::from_tunneling(params, idx, tunneling(params, idx, approx), approx.method())
}

/// Topologically equivalent 2×2 Hamiltonian of pair `idx`:
/// `(n + l/2)ω − g²/ω + ½(ε − lω)σx⁽ⁿ⁾ + ½Ω_nl^GAA σz⁽ⁿ⁾`.
pub fn effective_hamiltonian(params: &ModelParams, idx: BlockIndex, factor: ConstraintFactor) -> Block2 {
    Block2::from_tunneling(params, idx, gaa_tunneling(params, idx, factor))
}

/// A conical intersection of level pair `(n, l)` in the `(g, ε)` plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConicalIntersection {
    pub n: usize,
    pub l: usize,
    pub g_star: f64,
    /// `lω`
    pub epsilon_star: f64,
    pub energy: f64,
    /// `energy + g*²/ω = (n + l/2)ω`
    pub rescaled_energy: f64,
}

/// Conical intersections of pair `(n, l)` with `0 < g* ≤ g_max`.
pub fn locate_cis(n: usize, l: usize, delta: f64, omega: f64, g_max: f64) -> Result<Vec<ConicalIntersection>> {
    let scan = constraints::juddian_roots(n, l, delta, omega, g_max, None)?;
    Ok(scan
        .roots
        .into_iter()
        .map(|r| ConicalIntersection {
            n,
            l,
            g_star: r.g_star,
            epsilon_star: l as f64 * omega,
            energy: r.energy,
            rescaled_energy: (n as f64 + 0.5 * l as f64) * omega,
        })
        .collect())
}

/// Warning text when `ε` is too far from `lω` for the level pairing.
pub fn validity_warning(params: &ModelParams) -> Option<String> {
    let ratio = params.abs_epsilon() / params.omega;
    let offset = (ratio - params.bias_index() as f64).abs();
    (offset > PAIRING_VALIDITY)
        .then(|| format!("|epsilon/omega - l| = {offset:.3} exceeds {PAIRING_VALIDITY}; level pairing is unreliable"))
}

/// Lowest `k_levels` energies from the block picture: the `l` unpaired levels
/// plus `E_{n,±}` for successive pairs, sorted ascending.
pub fn approximate_spectrum(params: &ModelParams, k_levels: usize, approx: Approximation) -> Result<SpectrumResult> {
    validate(*params)?;
    if let Some(msg) = validity_warning(params) {
        log::warn!("{msg}");
    }
    let l = params.bias_index();
    let mut energies = adiabatic::unpaired_energies(params, l);
    for n in 0..k_levels.max(1) {
        let pair = eigenpair(params, BlockIndex::new(n, l), approx);
        energies.push(pair.e_minus);
        energies.push(pair.e_plus);
    }
    energies.sort_by(f64::total_cmp);
    energies.truncate(k_levels);
    Ok(SpectrumResult { params: *params, method: approx.method(), energies, eigenvectors: None, n_max_used: None })
}

pub fn spectrum_gaa(params: &ModelParams, k_levels: usize) -> Result<SpectrumResult> {
    approximate_spectrum(params, k_levels, Approximation::Gaa)
}

pub fn spectrum_aa(params: &ModelParams, k_levels: usize) -> Result<SpectrumResult> {
    approximate_spectrum(params, k_levels, Approximation::Aa)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactdiag::{self, TruncationConfig};
    use proptest::prelude::*;

    fn params(delta: f64, omega: f64, g: f64, epsilon: f64) -> ModelParams {
        ModelParams::new(delta, omega, g, epsilon).unwrap()
    }

    const G1: f64 = 0.3323281463906075;
    const G2: f64 = 0.8920807155838439;

    #[test]
    fn tunneling_examples() {
        let idx = BlockIndex::new(2, 0);
        let at_root = gaa_tunneling(&params(1.0, 1.0, G1, 0.0), idx, ConstraintFactor::Normalized);
        assert!(at_root.abs() < 1e-9);
        let at_zero = gaa_tunneling(&params(1.0, 1.0, 0.0, 0.0), idx, ConstraintFactor::Normalized);
        assert!((at_zero - 45.0 / 64.0).abs() < 1e-15);
        // the AA does not vanish there
        assert!(adiabatic::aa_tunneling(&params(1.0, 1.0, G1, 0.0), idx).abs() > 0.1);
    }

    #[test]
    fn small_delta_ratio_to_aa() {
        for i in 1..30 {
            let p = params(1e-7, 1.0, 0.05 * i as f64, 1.0);
            for n in 0..4 {
                let idx = BlockIndex::new(n, 1);
                let aa = adiabatic::aa_tunneling(&p, idx);
                let gaa = gaa_tunneling(&p, idx, ConstraintFactor::Normalized);
                if aa.abs() > 1e-10 {
                    assert!((gaa / aa - 1.0).abs() < 1e-6, "n={n} g={}", p.g);
                }
            }
        }
    }

    #[test]
    fn eigenpair_at_juddian_point() {
        let g_star = 1.9775f64.sqrt() / 2.0;
        let pair = gaa_eigenpair(&params(0.3, 1.0, g_star, 1.0), BlockIndex::new(1, 1), ConstraintFactor::Normalized);
        assert!((pair.e_plus - 1.005625).abs() < 1e-12);
        assert!((pair.e_minus - 1.005625).abs() < 1e-12);
    }

    #[test]
    fn delta_zero_reproduces_displaced_levels() {
        let p = params(0.0, 1.0, 0.7, 1.0);
        let s = spectrum_gaa(&p, 7).unwrap();
        let mut expected: Vec<f64> = (0..8).flat_map(|k| [k as f64 - 0.49 - 0.5, k as f64 - 0.49 + 0.5]).collect();
        expected.sort_by(f64::total_cmp);
        for (a, b) in s.energies.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn effective_hamiltonian_structure() {
        let p = params(0.8, 1.0, 0.5, 0.1);
        let idx = BlockIndex::new(2, 0);
        let h = effective_hamiltonian(&p, idx, ConstraintFactor::Normalized);
        let pair = gaa_eigenpair(&p, idx, ConstraintFactor::Normalized);
        let (lo, hi) = h.eigenvalues();
        assert!((lo - pair.e_minus).abs() < 1e-12 && (hi - pair.e_plus).abs() < 1e-12);

        let ci = effective_hamiltonian(&params(1.0, 1.0, G1, 0.0), idx, ConstraintFactor::Normalized);
        assert!(ci.bias == 0.0 && ci.tunnel.abs() < 1e-9);

        let flat =
            effective_hamiltonian(&params(0.0, 1.0, 0.5, 2.0), BlockIndex::new(1, 2), ConstraintFactor::Normalized);
        let m = flat.matrix();
        assert_eq!(m[0][1], 0.0);
        assert_eq!(m[0][0], m[1][1]);
    }

    #[test]
    fn cis_of_pair_two() {
        let cis = locate_cis(2, 0, 1.0, 1.0, 2.0).unwrap();
        assert_eq!(cis.len(), 2);
        assert!((cis[0].g_star - G1).abs() < 1e-11 && (cis[1].g_star - G2).abs() < 1e-11);
        for ci in &cis {
            assert_eq!(ci.rescaled_energy, 2.0);
            assert!((ci.energy + ci.g_star * ci.g_star - ci.rescaled_energy).abs() < 1e-14);
        }
        for l in 1..4 {
            assert!(locate_cis(0, l, 0.5, 1.0, 3.0).unwrap().is_empty());
        }
        let one = locate_cis(1, 1, 0.3, 1.0, 2.0).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].rescaled_energy, 1.5);
    }

    #[test]
    fn kbar_keeps_intersections() {
        for (n, l, delta) in [(2usize, 0usize, 1.0), (3, 1, 0.7), (4, 2, 1.2), (5, 0, 2.5)] {
            let eps = l as f64;
            let f = |u: f64| kbar_zero(n, u.sqrt(), delta, eps);
            let (kbar_roots, _) = constraints::isolate_roots(f, 9.0);
            let ci: Vec<f64> = locate_cis(n, l, delta, 1.0, 3.0).unwrap().iter().map(|c| c.g_star).collect();
            assert_eq!(kbar_roots.len(), ci.len());
            for (u, g) in kbar_roots.iter().zip(&ci) {
                assert!((u.sqrt() - g).abs() < 1e-9);
            }
        }
    }

    fn kbar_zero(n: usize, g: f64, delta: f64, eps: f64) -> f64 {
        gaa_tunneling(&params(delta, 1.0, g, eps), BlockIndex::new(n, eps as usize), ConstraintFactor::Arctan)
    }

    #[test]
    fn intersections_are_exact_degeneracies() {
        let cfg = TruncationConfig::new(512, 1e-10, 8).unwrap();
        for ci in locate_cis(2, 0, 1.0, 1.0, 2.0).unwrap() {
            let p = params(1.0, 1.0, ci.g_star, ci.epsilon_star);
            assert!(exactdiag::level_gap(&p, BlockIndex::new(2, 0), &cfg).unwrap() < exactdiag::DEGENERACY_TOL);
        }
    }

    #[test]
    fn validity_warning_threshold() {
        assert!(validity_warning(&params(1.0, 1.0, 0.3, 1.2)).is_none());
        assert!(validity_warning(&params(1.0, 1.0, 0.3, 1.3)).is_some());
        assert!(validity_warning(&params(1.0, 1.0, 0.3, -0.4)).is_some());
    }

    #[test]
    fn negative_bias_mirrors_positive() {
        let a = spectrum_gaa(&params(0.6, 1.0, 0.5, 0.9), 8).unwrap();
        let b = spectrum_gaa(&params(0.6, 1.0, 0.5, -0.9), 8).unwrap();
        assert_eq!(a.energies, b.energies);
    }

    #[test]
    fn gaa_tracks_exact_near_roots_better_than_aa() {
        // Δ = 0.5, ε = 1: compare the crossing-bearing pairs on a window around each root
        let cfg = TruncationConfig::new(512, 1e-9, 10).unwrap();
        let mut worst_aa = 0.0f64;
        let mut worst_gaa = 0.0f64;
        for n in 1..3 {
            for ci in locate_cis(n, 1, 0.5, 1.0, 1.2).unwrap() {
                for step in -4..=4 {
                    let g = ci.g_star + 0.005 * step as f64;
                    let p = params(0.5, 1.0, g, 1.0);
                    let idx = BlockIndex::new(n, 1);
                    let (lo, hi) = exactdiag::level_pair(&p, idx, &cfg).unwrap();
                    let exact_gap = hi - lo;
                    worst_aa = worst_aa.max((eigenpair(&p, idx, Approximation::Aa).gap() - exact_gap).abs());
                    worst_gaa = worst_gaa.max((eigenpair(&p, idx, Approximation::Gaa).gap() - exact_gap).abs());
                }
            }
        }
        assert!(worst_gaa <= worst_aa, "gaa {worst_gaa} vs aa {worst_aa}");
    }

    proptest! {
        #[test]
        fn spectrum_sorted(g in 0.0f64..1.5, eps in -2.5f64..2.5, delta in 0.0f64..1.5, k in 1usize..16) {
            for approx in [Approximation::Aa, Approximation::Gaa, Approximation::GaaKbar] {
                let s = approximate_spectrum(&params(delta, 1.0, g, eps), k, approx).unwrap();
                prop_assert_eq!(s.energies.len(), k);
                prop_assert!(s.energies.windows(2).all(|w| w[0] <= w[1]));
            }
        }
    }
}
