//! Displaced-oscillator picture and the adiabatic approximation (AA).
//!
//! For `ε ≈ lω` the weak tunnelling `Δ` only couples `|n₊,+⟩` with
//! `|(n+l)₋,−⟩`, so the Hamiltonian splits into 2×2 blocks
//!
//! ```text
//! H_n = (n + l/2)ω − g²/ω + ½(ε − lω) σx⁽ⁿ⁾ + ½Ω_nl σz⁽ⁿ⁾
//! ```
//!
//! where `σx⁽ⁿ⁾` is diagonal and `σz⁽ⁿ⁾` flips between the two block states.
//! The lowest `l` levels `|k₋,−⟩, k < l` stay unpaired.

use serde::{Deserialize, Serialize};

use crate::model::{BlockIndex, ModelParams};
use crate::Method;

/// Generalized Laguerre polynomial `L_n^α(x)` by the three-term recurrence
/// `(k+1) L_{k+1} = (2k + 1 + α − x) L_k − (k + α) L_{k−1}`.
pub fn laguerre(n: usize, alpha: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut curr = 1.0 + alpha - x;
    for k in 1..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0 + alpha - x) * curr - (k + alpha) * prev) / (k + 1.0);
        prev = curr;
        curr = next;
    }
    curr
}

/// `√(n!/(n+l)!)` as `∏_{j=1}^{l} (n+j)^{-1/2}`.
pub fn factorial_ratio_sqrt(n: usize, l: usize) -> f64 {
    (1..=l).map(|j| 1.0 / ((n + j) as f64).sqrt()).product()
}

/// Common prefactor `Δ exp(−2g²/ω²) (−2g/ω)^l √(n!/(n+l)!)` of the AA and
/// GAA tunnelling strengths.
pub fn tunneling_prefactor(params: &ModelParams, idx: BlockIndex) -> f64 {
    let ratio = params.g / params.omega;
    let power = if idx.l == 0 { 1.0 } else { (-2.0 * ratio).powi(idx.l as i32) };
    params.delta * (-2.0 * ratio * ratio).exp() * power * factorial_ratio_sqrt(idx.n, idx.l)
}

/// AA tunnelling strength `Ω_nl = Δ ⟨n₊|(n+l)₋⟩`.
pub fn aa_tunneling(params: &ModelParams, idx: BlockIndex) -> f64 {
    let ratio = params.g / params.omega;
    tunneling_prefactor(params, idx) * laguerre(idx.n, idx.l as f64, 4.0 * ratio * ratio)
}

/// Real symmetric 2×2 block `shift·1 + bias·σx⁽ⁿ⁾ + tunnel·σz⁽ⁿ⁾`, written in
/// the basis `(|n₊,+⟩, |(n+l)₋,−⟩)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Block2 {
    pub shift: f64,
    /// Coefficient of σx⁽ⁿ⁾, `½(ε − lω)`.
    pub bias: f64,
    /// Coefficient of σz⁽ⁿ⁾, `½Ω_nl`.
    pub tunnel: f64,
}

impl Block2 {
    pub fn from_tunneling(params: &ModelParams, idx: BlockIndex, omega_nl: f64) -> Self {
        Block2 { shift: idx.center_energy(params), bias: 0.5 * params.detuning(idx.l), tunnel: 0.5 * omega_nl }
    }

    pub fn matrix(&self) -> [[f64; 2]; 2] {
        [[self.shift + self.bias, self.tunnel], [self.tunnel, self.shift - self.bias]]
    }

    /// `(E₋, E₊) = shift ∓ √(bias² + tunnel²)`.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let r = self.bias.hypot(self.tunnel);
        (self.shift - r, self.shift + r)
    }

    pub fn trace(&self) -> f64 {
        2.0 * self.shift
    }
}

/// Energies and mixing angle of one coupled level pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlockEigenpair {
    pub n: usize,
    pub l: usize,
    pub e_plus: f64,
    pub e_minus: f64,
    /// `atan2(Ω_nl, ε − lω)`, in `(−π, π]`.
    pub theta: f64,
    pub omega_nl: f64,
    pub method: Method,
}

impl BlockEigenpair {
    pub fn from_tunneling(params: &ModelParams, idx: BlockIndex, omega_nl: f64, method: Method) -> Self {
        let detuning = params.detuning(idx.l);
        let center = idx.center_energy(params);
        let half_gap = 0.5 * omega_nl.hypot(detuning);
        BlockEigenpair {
            n: idx.n,
            l: idx.l,
            e_plus: center + half_gap,
            e_minus: center - half_gap,
            theta: omega_nl.atan2(detuning),
            omega_nl,
            method,
        }
    }

    pub fn gap(&self) -> f64 {
        self.e_plus - self.e_minus
    }

    /// Coefficients of `ψ₊` on `(|n₊,+⟩, |(n+l)₋,−⟩)`: `(cos θ/2, sin θ/2)`.
    pub fn plus_amplitudes(&self) -> [f64; 2] {
        let half = 0.5 * self.theta;
        [half.cos(), half.sin()]
    }

    /// Coefficients of `ψ₋`: `(−sin θ/2, cos θ/2)`.
    pub fn minus_amplitudes(&self) -> [f64; 2] {
        let half = 0.5 * self.theta;
        [-half.sin(), half.cos()]
    }
}

pub fn aa_block(params: &ModelParams, idx: BlockIndex) -> Block2 {
    Block2::from_tunneling(params, idx, aa_tunneling(params, idx))
}

pub fn aa_eigenpair(params: &ModelParams, idx: BlockIndex) -> BlockEigenpair {
    BlockEigenpair::from_tunneling(params, idx, aa_tunneling(params, idx), Method::Aa)
}

/// Displaced-oscillator energies `kω − g²/ω − |ε|/2`, `k = 0..l`, of the
/// levels that get no partner.
pub fn unpaired_energies(params: &ModelParams, l: usize) -> Vec<f64> {
    let base = -params.polaron_shift() - 0.5 * params.abs_epsilon();
    (0..l).map(|k| k as f64 * params.omega + base).collect()
}
