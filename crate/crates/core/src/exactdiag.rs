//! Exact diagonalization of the AQRM in a truncated Fock ⊗ spin basis.
//!
//! Basis states are `|m⟩ ⊗ |s⟩` with `s ∈ {↑, ↓}` the σz eigenstates, stored
//! at index `2m + s` (`↑ = 0`, `↓ = 1`). With this ordering the Hamiltonian is
//! banded with half-bandwidth 3.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::model::{validate, BlockIndex, ModelParams};
use crate::Method;

/// Largest Fock cutoff accepted by [`build_hamiltonian`].
pub const MAX_FOCK_CUTOFF: usize = 1_000_000;

/// Gap below which two levels are treated as a crossing.
pub const DEGENERACY_TOL: f64 = 1e-6;

/// Truncation control for [`converged_spectrum`].
///
/// `n_max` is the largest Fock cutoff the doubling search may reach; the
/// search starts from a guess based on the displaced-state width `(g/ω)²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationConfig {
    pub n_max: usize,
    pub tol: f64,
    pub k_levels: usize,
    /// Keep the eigenvectors of the final truncation.
    pub keep_vectors: bool,
}

impl Default for TruncationConfig {
    fn default() -> Self {
        TruncationConfig { n_max: 512, tol: 1e-5, k_levels: 14, keep_vectors: false }
    }
}

impl TruncationConfig {
    pub fn new(n_max: usize, tol: f64, k_levels: usize) -> Result<Self> {
        let cfg = TruncationConfig { n_max, tol, k_levels, keep_vectors: false };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_vectors(self) -> Self {
        TruncationConfig { keep_vectors: true, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k_levels == 0 {
            return Err(Error::InvalidArgument("k_levels must be positive".into()));
        }
        if self.n_max < self.k_levels {
            return Err(Error::InvalidArgument(format!(
                "n_max ({}) must be at least k_levels ({})",
                self.n_max, self.k_levels
            )));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidArgument("tol must be positive".into()));
        }
        Ok(())
    }

    /// First cutoff tried by the doubling search: `max(16, k + ⌈8 (g/ω)²⌉)`.
    pub fn initial_cutoff(&self, params: &ModelParams) -> usize {
        let width = (params.g / params.omega).powi(2);
        16usize.max(self.k_levels + (8.0 * width).ceil() as usize)
    }
}

/// Ordered energy levels for one parameter point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumResult {
    pub params: ModelParams,
    pub method: Method,
    /// Ascending.
    pub energies: Vec<f64>,
    /// Basis coefficients of each level, same order as `energies`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub eigenvectors: Option<Vec<Vec<f64>>>,
    /// Fock cutoff of the final truncation; `None` for the approximations.
    pub n_max_used: Option<usize>,
}

#[inline]
fn up(m: usize) -> usize {
    2 * m
}

#[inline]
fn down(m: usize) -> usize {
    2 * m + 1
}

/// Truncated Hamiltonian of dimension `2(n_max + 1)`.
pub fn build_hamiltonian(params: &ModelParams, n_max: usize) -> Result<Matrix> {
    validate(*params)?;
    if n_max > MAX_FOCK_CUTOFF {
        return Err(Error::DimensionOverflow { n_max, limit: MAX_FOCK_CUTOFF });
    }
    let ModelParams { delta, omega, g, epsilon } = *params;
    let mut h = Matrix::zeros(2 * (n_max + 1));
    for m in 0..=n_max {
        let photon = m as f64 * omega;
        h[(up(m), up(m))] = photon + 0.5 * delta;
        h[(down(m), down(m))] = photon - 0.5 * delta;

        h[(up(m), down(m))] = 0.5 * epsilon;
        h[(down(m), up(m))] = 0.5 * epsilon;

        if m < n_max {
            let c = g * ((m + 1) as f64).sqrt();
            h[(up(m), down(m + 1))] = c;
            h[(down(m + 1), up(m))] = c;
            h[(down(m), up(m + 1))] = c;
            h[(up(m + 1), down(m))] = c;
        }
    }
    Ok(h)
}

/// The `k` lowest eigenpairs of a symmetric matrix, eigenvectors as plain vectors.
pub fn eigen_spectrum(h: &Matrix, k: usize) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    if h.asymmetry() > 1e-12 {
        return Err(Error::InvalidArgument("matrix is not symmetric".into()));
    }
    let k = k.min(h.dim());
    let eig = linalg::symmetric_eigen(h)?;
    let vectors = eig.vectors.expect("vectors requested");
    let values = eig.values[..k].to_vec();
    let vecs = (0..k).map(|j| vectors.column(j)).collect();
    Ok((values, vecs))
}

/// Lowest `k` levels at a fixed cutoff.
pub fn spectrum_at(params: &ModelParams, n_max: usize, k: usize, keep_vectors: bool) -> Result<SpectrumResult> {
    let h = build_hamiltonian(params, n_max)?;
    let (energies, eigenvectors) = if keep_vectors {
        let (e, v) = eigen_spectrum(&h, k)?;
        (e, Some(v))
    } else {
        let mut e = linalg::symmetric_eigenvalues(&h)?;
        e.truncate(k);
        (e, None)
    };
    Ok(SpectrumResult { params: *params, method: Method::Exact, energies, eigenvectors, n_max_used: Some(n_max) })
}

/// Doubles the Fock cutoff until the lowest `k_levels` eigenvalues move by
/// less than `tol`, never exceeding `cfg.n_max`.
pub fn converged_spectrum(params: &ModelParams, cfg: &TruncationConfig) -> Result<SpectrumResult> {
    validate(*params)?;
    cfg.validate()?;
    let k = cfg.k_levels;
    let cap = cfg.n_max;
    let mut cutoff = cfg.initial_cutoff(params).min(cap);
    if cutoff == cap {
        // leave room for at least one comparison
        cutoff = (cap / 2).max(k);
    }

    let mut previous = spectrum_at(params, cutoff, k, false)?;
    let mut change = f64::INFINITY;
    while cutoff < cap {
        cutoff = (2 * cutoff).min(cap);
        let current = spectrum_at(params, cutoff, k, false)?;
        change = previous.energies.iter().zip(&current.energies).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        if change < cfg.tol {
            return if cfg.keep_vectors { spectrum_at(params, cutoff, k, true) } else { Ok(current) };
        }
        previous = current;
    }
    Err(Error::TruncationNotConverged { n_max: cap, tol: cfg.tol, change })
}

/// Fock amplitudes `⟨m|D(α)|n⟩`, `m = 0..=n_max`, of the displaced number
/// state `D(α)|n⟩` with `D(α) = exp[α(a† − a)]` and real `α`.
///
/// Built as `(a† − α)ⁿ/√n! |α⟩` on a padded basis, then cut to `n_max + 1`.
pub fn displaced_fock_state(n: usize, alpha: f64, n_max: usize) -> Vec<f64> {
    let dim = n_max + n + 2;
    let mut state = vec![0.0; dim];
    state[0] = (-0.5 * alpha * alpha).exp();
    for m in 1..dim {
        state[m] = state[m - 1] * alpha / (m as f64).sqrt();
    }
    for j in 1..=n {
        let mut next = vec![0.0; dim];
        for m in 0..dim {
            next[m] -= alpha * state[m];
            if m + 1 < dim {
                next[m + 1] += ((m + 1) as f64).sqrt() * state[m];
            }
        }
        let norm = (j as f64).sqrt();
        state = next.into_iter().map(|x| x / norm).collect();
    }
    state.truncate(n_max + 1);
    state
}

/// `|k₋,−⟩ = D(g/ω)|k⟩ ⊗ (|↑⟩ − |↓⟩)/√2` in the truncated basis.
pub fn unpaired_basis_state(params: &ModelParams, k: usize, n_max: usize) -> Vec<f64> {
    let amps = displaced_fock_state(k, params.g / params.omega, n_max);
    let mut v = vec![0.0; 2 * (n_max + 1)];
    for (m, a) in amps.iter().enumerate() {
        v[up(m)] = a * std::f64::consts::FRAC_1_SQRT_2;
        v[down(m)] = -a * std::f64::consts::FRAC_1_SQRT_2;
    }
    v
}

/// `|n₊,+⟩ = D(−g/ω)|n⟩ ⊗ (|↑⟩ + |↓⟩)/√2` in the truncated basis.
pub fn paired_basis_state(params: &ModelParams, n: usize, n_max: usize) -> Vec<f64> {
    let amps = displaced_fock_state(n, -params.g / params.omega, n_max);
    let mut v = vec![0.0; 2 * (n_max + 1)];
    for (m, a) in amps.iter().enumerate() {
        v[up(m)] = a * std::f64::consts::FRAC_1_SQRT_2;
        v[down(m)] = a * std::f64::consts::FRAC_1_SQRT_2;
    }
    v
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Positions (ascending spectrum order) of the two members of pair `idx`.
///
/// The `l` unpaired levels are taken to be the ones carrying more than half
/// their weight on `{|k₋,−⟩ : k < l}`. When that overlap test does not pick
/// out exactly `l` levels the plain ascending count is used instead.
pub fn pair_level_positions(spectrum: &SpectrumResult, idx: BlockIndex) -> Result<(usize, usize)> {
    let available = spectrum.energies.len();
    let fallback = idx.level_positions();
    let needed = fallback.1 + 1;

    if idx.l > 0 {
        if let (Some(vectors), Some(n_max)) = (&spectrum.eigenvectors, spectrum.n_max_used) {
            let unpaired: Vec<Vec<f64>> =
                (0..idx.l).map(|k| unpaired_basis_state(&spectrum.params, k, n_max)).collect();
            let is_unpaired: Vec<bool> =
                vectors.iter().map(|v| unpaired.iter().map(|u| dot(u, v).powi(2)).sum::<f64>() > 0.5).collect();
            if is_unpaired.iter().filter(|&&b| b).count() == idx.l {
                let paired: Vec<usize> = (0..available).filter(|&i| !is_unpaired[i]).collect();
                if paired.len() > 2 * idx.n + 1 {
                    return Ok((paired[2 * idx.n], paired[2 * idx.n + 1]));
                }
                return Err(Error::PairOutOfRange { n: idx.n, l: idx.l, needed, available });
            }
        }
    }

    if needed > available {
        return Err(Error::PairOutOfRange { n: idx.n, l: idx.l, needed, available });
    }
    Ok(fallback)
}

/// Energy gap of the exact spectrum for level pair `idx`.
pub fn level_gap(params: &ModelParams, idx: BlockIndex, cfg: &TruncationConfig) -> Result<f64> {
    level_pair(params, idx, cfg).map(|(lo, hi)| hi - lo)
}

/// Exact energies `(lower, upper)` of level pair `idx`.
pub fn level_pair(params: &ModelParams, idx: BlockIndex, cfg: &TruncationConfig) -> Result<(f64, f64)> {
    let (_, hi) = idx.level_positions();
    let k = cfg.k_levels.max(hi + 1 + idx.l + 2);
    let cfg = TruncationConfig { k_levels: k, n_max: cfg.n_max.max(k), keep_vectors: idx.l > 0, ..*cfg };
    let spectrum = converged_spectrum(params, &cfg)?;
    let (a, b) = pair_level_positions(&spectrum, idx)?;
    Ok((spectrum.energies[a], spectrum.energies[b]))
}

/// Excitation-number parity `σz (−1)^{a†a}`, diagonal in this basis.
pub fn parity_diagonal(n_max: usize) -> Vec<f64> {
    (0..=n_max)
        .flat_map(|m| {
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            [sign, -sign]
        })
        .collect()
}
