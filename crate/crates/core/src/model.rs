//! Model parameters and the index conventions shared by every solver.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical parameters of the AQRM: qubit splitting `delta`, field frequency
/// `omega`, coupling `g` and bias `epsilon`.
///
/// No unit convention is implied; `omega` is always carried explicitly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub delta: f64,
    pub omega: f64,
    pub g: f64,
    pub epsilon: f64,
}

impl ModelParams {
    /// Builds and validates a parameter set.
    pub fn new(delta: f64, omega: f64, g: f64, epsilon: f64) -> Result<Self> {
        validate(ModelParams { delta, omega, g, epsilon })
    }

    pub fn with_g(self, g: f64) -> Self {
        ModelParams { g, ..self }
    }

    pub fn with_epsilon(self, epsilon: f64) -> Self {
        ModelParams { epsilon, ..self }
    }

    /// Bias index `l`, the integer nearest to `|ε|/ω`.
    pub fn bias_index(&self) -> usize {
        nearest_bias_index(self.epsilon, self.omega)
    }

    /// The spectrum is even in ε, so the solvers work with `|ε|`.
    pub fn abs_epsilon(&self) -> f64 {
        self.epsilon.abs()
    }

    /// `|ε| − lω`, the residual bias left after pairing `|n₊,+⟩` with `|(n+l)₋,−⟩`.
    pub fn detuning(&self, l: usize) -> f64 {
        self.abs_epsilon() - l as f64 * self.omega
    }

    /// `g²/ω`, the common polaron shift of all displaced-oscillator levels.
    pub fn polaron_shift(&self) -> f64 {
        self.g * self.g / self.omega
    }
}

/// Pair index `n` and bias index `l` labelling the coupled level pair
/// `{|n₊,+⟩, |(n+l)₋,−⟩}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BlockIndex {
    pub n: usize,
    pub l: usize,
}

impl BlockIndex {
    pub fn new(n: usize, l: usize) -> Self {
        BlockIndex { n, l }
    }

    /// Pair `n` with the bias index implied by `params`.
    pub fn for_params(n: usize, params: &ModelParams) -> Self {
        BlockIndex { n, l: params.bias_index() }
    }

    /// Energy of the pair centre, `(n + l/2)ω − g²/ω`.
    pub fn center_energy(&self, params: &ModelParams) -> f64 {
        (self.n as f64 + 0.5 * self.l as f64) * params.omega - params.polaron_shift()
    }

    /// Zero-based positions of the two pair members in the ascending spectrum,
    /// counting the `l` unpaired levels first.
    pub fn level_positions(&self) -> (usize, usize) {
        let lower = self.l + 2 * self.n;
        (lower, lower + 1)
    }
}

/// Returns `params` unchanged when `ω > 0`, `Δ ≥ 0`, `g ≥ 0` and every field is finite.
pub fn validate(params: ModelParams) -> Result<ModelParams> {
    let ModelParams { delta, omega, g, epsilon } = params;
    for (name, value) in [("delta", delta), ("omega", omega), ("g", g), ("epsilon", epsilon)] {
        if !value.is_finite() {
            return Err(Error::InvalidParams(format!("{name} must be finite, got {value}")));
        }
    }
    if omega <= 0.0 {
        return Err(Error::InvalidParams("omega must be positive".into()));
    }
    if delta < 0.0 {
        return Err(Error::InvalidParams("delta must be non-negative".into()));
    }
    if g < 0.0 {
        return Err(Error::InvalidParams("g must be non-negative".into()));
    }
    Ok(params)
}

/// Integer nearest to `|ε|/ω`; exact half-integers round to even.
pub fn nearest_bias_index(epsilon: f64, omega: f64) -> usize {
    debug_assert!(omega > 0.0);
    (epsilon.abs() / omega).round_ties_even() as usize
}

/// `E + g²/ω`, the energy with the polaron shift removed.
pub fn rescaled_energy(energy: f64, g: f64, omega: f64) -> f64 {
    energy + g * g / omega
}
