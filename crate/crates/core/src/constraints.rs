//! Constraint polynomials of the AQRM and the Juddian (exactly degenerate)
//! points they determine.
//!
//! `P_n^n(g, Δ, ε)` follows from the three-term recurrence
//!
//! ```text
//! P_0 = 1
//! P_k = (4kg² + Δ²/4 − k²ω² − kεω) P_{k−1} − 4k(k−1)(n−k+1) g²ω² P_{k−2}
//! ```
//!
//! and level pair `n` at `ε = lω` is exactly degenerate wherever
//! `P_n^n(g, Δ, lω) = 0`. Dividing by the value at the origin,
//! `P_n^n(0,0,0) = (−1)ⁿ (n!)² ω²ⁿ`, gives `K_n^ε(g, Δ)`, which reduces to
//! `L_n^{ε/ω}(4g²/ω²)` at `Δ = 0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactdiag::{self, TruncationConfig, DEGENERACY_TOL};
use crate::model::{BlockIndex, ModelParams};

/// Highest degree evaluated without rescaling; `(60!)² ≈ 7e163`.
pub const RAW_DEGREE_LIMIT: usize = 60;

/// Scan cells per unit of `g²` in [`juddian_roots`].
pub const CELLS_PER_UNIT_G2: f64 = 512.0;

/// Bisection stops once the bracket in `g` is this narrow.
pub const ROOT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintKind {
    /// `P_k^n`
    Raw,
    /// `K_n^ε = P_n^n / P_n^n(0,0,0)`
    Normalized,
    /// `K̄_n^ε = ½ arctan P_n^n`
    Arctan,
}

/// One evaluated constraint quantity together with the point it was taken at.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstraintEval {
    pub n: usize,
    pub k: usize,
    pub value: f64,
    pub kind: ConstraintKind,
    /// `(g, Δ, ε, ω)`
    pub at: (f64, f64, f64, f64),
}

impl ConstraintEval {
    pub fn evaluate(kind: ConstraintKind, n: usize, g: f64, delta: f64, epsilon: f64, omega: f64) -> Result<Self> {
        let value = match kind {
            ConstraintKind::Raw => constraint_poly(n, g, delta, epsilon, omega)?,
            ConstraintKind::Normalized => normalized_constraint(n, g, delta, epsilon, omega),
            ConstraintKind::Arctan => kbar(n, g, delta, epsilon, omega),
        };
        Ok(ConstraintEval { n, k: n, value, kind, at: (g, delta, epsilon, omega) })
    }
}

#[inline]
fn diagonal_coefficient(k: f64, g2: f64, delta: f64, epsilon: f64, omega: f64) -> f64 {
    4.0 * k * g2 + 0.25 * delta * delta - k * k * omega * omega - k * epsilon * omega
}

#[inline]
// ω² restores the units; at ω = 1 this is the familiar 4k(k−1)(n−k+1)g²
fn coupling_coefficient(k: f64, n: f64, g2: f64, omega: f64) -> f64 {
    4.0 * k * (k - 1.0) * (n - k + 1.0) * g2 * omega * omega
}

/// `P_0^n, …, P_n^n`.
pub fn constraint_sequence(n: usize, g: f64, delta: f64, epsilon: f64, omega: f64) -> Result<Vec<f64>> {
    if n > RAW_DEGREE_LIMIT {
        return Err(Error::ConstraintOverflow { n, limit: RAW_DEGREE_LIMIT });
    }
    let g2 = g * g;
    let nf = n as f64;
    let mut seq = Vec::with_capacity(n + 1);
    seq.push(1.0);
    for k in 1..=n {
        let kf = k as f64;
        let mut next = diagonal_coefficient(kf, g2, delta, epsilon, omega) * seq[k - 1];
        if k >= 2 {
            next -= coupling_coefficient(kf, nf, g2, omega) * seq[k - 2];
        }
        seq.push(next);
    }
    Ok(seq)
}

/// `P_n^n(g, Δ, ε)`.
pub fn constraint_poly(n: usize, g: f64, delta: f64, epsilon: f64, omega: f64) -> Result<f64> {
    constraint_sequence(n, g, delta, epsilon, omega).map(|s| s[n])
}

/// `P_n^n(0, 0, 0) = (−1)ⁿ (n!)² ω²ⁿ`, from the recurrence at the origin.
pub fn norm_factor(n: usize, omega: f64) -> Result<f64> {
    constraint_poly(n, 0.0, 0.0, 0.0, omega)
}

/// `K_n^ε(g, Δ)`.
///
/// Evaluated on normalized iterates `Q_k = P_k / P_k(0,0,0)` so that any
/// degree stays in range:
///
/// ```text
/// Q_k = −c_k Q_{k−1} / (k²ω²) − d_k Q_{k−2} / (k²(k−1)²ω⁴)
/// ```
pub fn normalized_constraint(n: usize, g: f64, delta: f64, epsilon: f64, omega: f64) -> f64 {
    let g2 = g * g;
    let nf = n as f64;
    let w2 = omega * omega;
    let mut prev = 0.0;
    let mut curr = 1.0;
    for k in 1..=n {
        let kf = k as f64;
        let mut next = -diagonal_coefficient(kf, g2, delta, epsilon, omega) * curr / (kf * kf * w2);
        if k >= 2 {
            next -= coupling_coefficient(kf, nf, g2, omega) * prev / (kf * kf * (kf - 1.0) * (kf - 1.0) * w2 * w2);
        }
        prev = curr;
        curr = next;
    }
    curr
}

/// `ln |P_n^n(0,0,0)| = 2 ln n! + 2n ln ω`.
fn ln_norm_factor(n: usize, omega: f64) -> f64 {
    2.0 * (1..=n).map(|k| (k as f64).ln()).sum::<f64>() + 2.0 * n as f64 * omega.ln()
}

/// `K̄_n^ε = ½ arctan P_n^n`. Same zeros and signs as `P_n^n`, bounded by π/4.
pub fn kbar(n: usize, g: f64, delta: f64, epsilon: f64, omega: f64) -> f64 {
    let raw = if n <= RAW_DEGREE_LIMIT {
        constraint_sequence(n, g, delta, epsilon, omega).map(|s| s[n]).unwrap_or(f64::NAN)
    } else {
        let k = normalized_constraint(n, g, delta, epsilon, omega);
        let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
        // overflow to ±∞ is fine, arctan saturates
        if k == 0.0 {
            0.0
        } else {
            sign * k.signum() * (k.abs().ln() + ln_norm_factor(n, omega)).exp()
        }
    };
    0.5 * raw.atan()
}

/// Which constraint factor replaces the Laguerre polynomial in the GAA.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintFactor {
    #[default]
    Normalized,
    Arctan,
}

impl ConstraintFactor {
    pub fn evaluate(self, n: usize, g: f64, delta: f64, epsilon: f64, omega: f64) -> f64 {
        match self {
            ConstraintFactor::Normalized => normalized_constraint(n, g, delta, epsilon, omega),
            ConstraintFactor::Arctan => kbar(n, g, delta, epsilon, omega),
        }
    }
}

/// A zero of `K_n^{lω}(·, Δ)`: an exactly degenerate point of level pair `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JuddianRoot {
    pub n: usize,
    pub l: usize,
    pub g_star: f64,
    /// `(n + l/2)ω − g*²/ω`
    pub energy: f64,
    /// Exact diagonalization confirmed a closed gap.
    pub certified: bool,
    /// Exact level-pair gap when certification was run.
    pub gap: Option<f64>,
}

/// Non-fatal findings of a root scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ScanDiagnostic {
    /// Two sign changes inside one scan cell; both were still bracketed by
    /// splitting the cell at its midpoint.
    CellResolution { g_lo: f64, g_hi: f64 },
    /// `|K|` touches zero without changing sign; not reported as a root.
    Grazing { g: f64, value: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootScan {
    pub roots: Vec<JuddianRoot>,
    pub diagnostics: Vec<ScanDiagnostic>,
}

fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    // bracket is in u = g²
    let mut f_lo = f(lo);
    for _ in 0..200 {
        if hi.sqrt() - lo.sqrt() <= ROOT_TOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Sign-change roots of `f` on `(0, u_max]`, scanning uniformly in `u` with
/// [`CELLS_PER_UNIT_G2`] cells per unit and refining by bisection. Returned
/// roots are in `u`, ascending.
///
/// Cells without a sign change at their ends are probed at the vertex of the
/// parabola through the ends and the midpoint. A sign flip there splits the
/// cell (two close roots); a near-zero value without a flip is reported as
/// [`ScanDiagnostic::Grazing`].
pub fn isolate_roots(f: impl Fn(f64) -> f64, u_max: f64) -> (Vec<f64>, Vec<ScanDiagnostic>) {
    let cells = ((CELLS_PER_UNIT_G2 * u_max).ceil() as usize).max(64);
    let du = u_max / cells as f64;
    let values: Vec<f64> = (0..=cells).map(|i| f(i as f64 * du)).collect();
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);

    let mut brackets: Vec<(f64, f64)> = Vec::new();
    let mut roots: Vec<f64> = Vec::new();
    let mut diagnostics = Vec::new();
    for i in 0..cells {
        let (u0, u1) = (i as f64 * du, (i + 1) as f64 * du);
        let (f0, f1) = (values[i], values[i + 1]);
        if f1 == 0.0 {
            roots.push(u1);
            continue;
        }
        if f0 == 0.0 {
            continue;
        }
        if (f0 > 0.0) != (f1 > 0.0) {
            brackets.push((u0, u1));
            continue;
        }
        let um = 0.5 * (u0 + u1);
        let fm = f(um);
        let probe = if fm == 0.0 || (fm > 0.0) != (f0 > 0.0) {
            Some((um, fm))
        } else {
            // vertex of the interpolating parabola, t ∈ (−1, 1) across the cell
            let curvature = 0.5 * (f1 - 2.0 * fm + f0);
            let t = -(f1 - f0) / (4.0 * curvature);
            (curvature != 0.0 && t.abs() < 1.0).then(|| {
                let uv = um + t * 0.5 * du;
                (uv, f(uv))
            })
        };
        if let Some((uv, fv)) = probe {
            if fv != 0.0 && (fv > 0.0) != (f0 > 0.0) {
                diagnostics.push(ScanDiagnostic::CellResolution { g_lo: u0.sqrt(), g_hi: u1.sqrt() });
                brackets.push((u0, uv));
                brackets.push((uv, u1));
            } else if fv.abs() < 1e-8 * scale {
                diagnostics.push(ScanDiagnostic::Grazing { g: uv.sqrt(), value: fv });
            }
        }
    }

    roots.extend(brackets.into_iter().map(|(lo, hi)| bisect(&f, lo, hi)));
    roots.sort_by(f64::total_cmp);
    (roots, diagnostics)
}

/// All sign-change roots of `g ↦ K_n^{lω}(g, Δ)` in `(0, g_max]`.
///
/// The scan runs in `g²`, the polynomial variable. With `certify`, every root
/// is checked against exact diagonalization of the full Hamiltonian at
/// `(g*, ε = lω)`.
pub fn juddian_roots(
    n: usize,
    l: usize,
    delta: f64,
    omega: f64,
    g_max: f64,
    certify: Option<&TruncationConfig>,
) -> Result<RootScan> {
    if !(g_max > 0.0) {
        return Err(Error::InvalidArgument("g_max must be positive".into()));
    }
    let epsilon = l as f64 * omega;
    crate::model::validate(ModelParams { delta, omega, g: g_max, epsilon })?;
    let f = |u: f64| normalized_constraint(n, u.max(0.0).sqrt(), delta, epsilon, omega);
    let (u_roots, diagnostics) = isolate_roots(f, g_max * g_max);
    for d in &diagnostics {
        log::warn!("juddian scan n={n} l={l} delta={delta}: {d:?}");
    }

    let idx = BlockIndex::new(n, l);
    let roots = u_roots
        .into_iter()
        .map(|u| {
            let g_star = u.sqrt();
            let params = ModelParams { delta, omega, g: g_star, epsilon };
            let energy = idx.center_energy(&params);
            let gap = match certify {
                Some(cfg) => Some(exactdiag::level_gap(&params, idx, cfg)?),
                None => None,
            };
            Ok(JuddianRoot { n, l, g_star, energy, certified: gap.is_some_and(|g| g < DEGENERACY_TOL), gap })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RootScan { roots, diagnostics })
}

/// Truncation settings used for root certification.
pub fn certification_config() -> TruncationConfig {
    TruncationConfig { n_max: 512, tol: 1e-10, k_levels: 8, keep_vectors: true }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adiabatic::laguerre;
    use rand::{Rng, SeedableRng};

    /// K₂ written out by hand at ω = 1.
    fn k2_closed(g: f64, delta: f64, eps: f64) -> f64 {
        let g2 = g * g;
        let d2 = delta * delta;
        1.0 - 8.0 * g2 + 8.0 * g2 * g2 + 1.5 * eps - 4.0 * g2 * eps
            + 0.5 * eps * eps
            + d2 * (-5.0 / 16.0 + 0.75 * g2 - 3.0 * eps / 16.0)
            + d2 * d2 / 64.0
    }

    #[test]
    fn recurrence_base_cases() {
        for n in 0..5 {
            assert_eq!(constraint_sequence(n, 0.7, 0.3, 1.2, 1.3).unwrap()[0], 1.0);
        }
        assert_eq!(constraint_poly(1, 0.0, 0.0, 0.0, 1.0).unwrap(), -1.0);
        assert_eq!(constraint_poly(2, 0.0, 0.0, 0.0, 1.0).unwrap(), 4.0);
    }

    #[test]
    fn norm_factor_values() {
        assert_eq!(norm_factor(0, 1.0).unwrap(), 1.0);
        assert_eq!(norm_factor(2, 1.0).unwrap(), 4.0);
        assert_eq!(norm_factor(3, 1.0).unwrap(), -36.0);
        // (−1)ⁿ (n!)² ω²ⁿ
        let w: f64 = 1.7;
        assert!((norm_factor(4, w).unwrap() - 576.0 * w.powi(8)).abs() < 1e-9 * 576.0 * w.powi(8));
        assert!(matches!(norm_factor(61, 1.0), Err(Error::ConstraintOverflow { .. })));
    }

    #[test]
    fn k2_examples() {
        assert!((normalized_constraint(2, 0.0, 1.0, 0.0, 1.0) - 45.0 / 64.0).abs() < 1e-15);
        assert!(normalized_constraint(2, 0.3323281463906075, 1.0, 0.0, 1.0).abs() < 1e-9);
    }

    #[test]
    fn k2_matches_closed_form() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..100 {
            let (g, d, e) = (rng.gen_range(0.0..2.0), rng.gen_range(0.0..2.0), rng.gen_range(0.0..3.0));
            let a = normalized_constraint(2, g, d, e, 1.0);
            let b = k2_closed(g, d, e);
            assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0), "{a} vs {b}");
        }
    }

    #[test]
    fn scaled_and_raw_paths_agree() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for n in 0..=RAW_DEGREE_LIMIT {
            let (g, d, e, w) =
                (rng.gen_range(0.0..1.5), rng.gen_range(0.0..1.5), rng.gen_range(0.0..3.0), rng.gen_range(0.5..2.0));
            let raw = constraint_poly(n, g, d, e, w).unwrap() / norm_factor(n, w).unwrap();
            let scaled = normalized_constraint(n, g, d, e, w);
            assert!((raw - scaled).abs() <= 1e-9 * raw.abs().max(1.0), "n={n}: {raw} vs {scaled}");
        }
    }

    #[test]
    fn laguerre_identity_with_frequency() {
        // K_n^ε(g, 0) = L_n^{ε/ω}(4g²/ω²)
        for n in 0..8 {
            for &(g, e, w) in &[(0.4, 0.0, 1.0), (0.9, 1.3, 1.0), (0.7, 2.0, 2.0), (1.1, 0.5, 0.8)] {
                let k = normalized_constraint(n, g, 0.0, e, w);
                let lag = laguerre(n, e / w, 4.0 * g * g / (w * w));
                assert!((k - lag).abs() <= 1e-11 * lag.abs().max(1.0), "n={n}: {k} vs {lag}");
            }
        }
    }

    #[test]
    fn kbar_properties() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        for _ in 0..200 {
            let n = rng.gen_range(0..12);
            let (g, d, e) = (rng.gen_range(0.0..2.0), rng.gen_range(0.0..2.0), rng.gen_range(0.0..3.0));
            let p = constraint_poly(n, g, d, e, 1.0).unwrap();
            let kb = kbar(n, g, d, e, 1.0);
            assert_eq!(kb.signum() * (p != 0.0) as u8 as f64, p.signum() * (p != 0.0) as u8 as f64);
            assert!(kb.abs() <= std::f64::consts::FRAC_PI_4);
        }
        assert!(kbar(1, 1.9775f64.sqrt() / 2.0, 0.3, 1.0, 1.0).abs() < 1e-15);
        // high degree goes through the scaled path and saturates
        let high = kbar(80, 1.0, 0.5, 0.0, 1.0);
        assert!(high.abs() <= std::f64::consts::FRAC_PI_4 && high != 0.0);
    }

    #[test]
    fn root_n1_l1_closed_form() {
        let scan = juddian_roots(1, 1, 0.3, 1.0, 2.0, None).unwrap();
        assert_eq!(scan.roots.len(), 1);
        let r = scan.roots[0];
        assert!((r.g_star - 0.7031180555212617).abs() < 1e-11);
        assert!((r.energy - 1.005625).abs() < 1e-11);
    }

    #[test]
    fn roots_n2_l0_quartic() {
        let scan = juddian_roots(2, 0, 1.0, 1.0, 2.0, None).unwrap();
        let g: Vec<f64> = scan.roots.iter().map(|r| r.g_star).collect();
        assert_eq!(g.len(), 2);
        assert!((g[0] - 0.3323281463906075).abs() < 1e-11);
        assert!((g[1] - 0.8920807155838439).abs() < 1e-11);
        assert!(scan.diagnostics.is_empty());
    }

    #[test]
    fn roots_approach_laguerre_zeros() {
        let scan = juddian_roots(2, 0, 1e-6, 1.0, 2.0, None).unwrap();
        let g: Vec<f64> = scan.roots.iter().map(|r| r.g_star).collect();
        assert!((g[0] - 0.3826834323650898).abs() < 1e-9);
        assert!((g[1] - 0.9238795325112868).abs() < 1e-9);
        // and move away from them at Δ = 1
        let at_one = juddian_roots(2, 0, 1.0, 1.0, 2.0, None).unwrap();
        assert!((at_one.roots[0].g_star - g[0]).abs() > 1e-2);
        assert!((at_one.roots[1].g_star - g[1]).abs() > 1e-2);
    }

    #[test]
    fn root_count_tends_to_degree() {
        for n in 0..7 {
            for l in 0..3 {
                let scan = juddian_roots(n, l, 1e-4, 1.0, 3.0, None).unwrap();
                assert_eq!(scan.roots.len(), n, "n={n} l={l}");
            }
        }
    }

    #[test]
    fn certified_root() {
        let cfg = certification_config();
        let scan = juddian_roots(1, 1, 0.3, 1.0, 2.0, Some(&cfg)).unwrap();
        let r = scan.roots[0];
        assert!(r.certified);
        assert!(r.gap.unwrap() < DEGENERACY_TOL);
    }

    #[test]
    fn grazing_is_flagged_not_reported() {
        let (roots, diags) = isolate_roots(|u| (u - 0.2502) * (u - 0.2502), 1.0);
        assert!(roots.is_empty());
        assert!(matches!(diags.as_slice(), [ScanDiagnostic::Grazing { .. }]));
        assert!(juddian_roots(0, 0, 0.5, 1.0, 1.0, None).unwrap().roots.is_empty());
    }

    #[test]
    fn close_pair_inside_one_cell() {
        let (roots, diags) = isolate_roots(|u| (u - 0.2501) * (u - 0.2503), 1.0);
        assert_eq!(roots.len(), 2);
        assert!((roots[0] - 0.2501).abs() < 1e-11 && (roots[1] - 0.2503).abs() < 1e-11);
        assert!(matches!(diags.as_slice(), [ScanDiagnostic::CellResolution { .. }]));
    }

    #[test]
    fn evaluation_records() {
        let e = ConstraintEval::evaluate(ConstraintKind::Normalized, 0, 0.0, 0.0, 0.0, 1.0).unwrap();
        assert_eq!(e.value, 1.0);
        assert!(ConstraintEval::evaluate(ConstraintKind::Raw, 70, 0.1, 0.1, 0.0, 1.0).is_err());
        let e = ConstraintEval::evaluate(ConstraintKind::Arctan, 2, 0.0, 1.0, 0.0, 1.0).unwrap();
        assert!((e.value - 0.5 * (4.0f64 * 45.0 / 64.0).atan()).abs() < 1e-15);
    }
}
