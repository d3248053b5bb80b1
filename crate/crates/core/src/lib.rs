//! Spectral toolkit for the asymmetric quantum Rabi model (AQRM)
//!
//! ```text
//! H = Δ/2 σz + ω a†a + g σx (a† + a) + ε/2 σx
//! ```
//!
//! The crate computes three kinds of spectra for this Hamiltonian:
//!
//! - **exact**: truncated Fock ⊗ spin diagonalization with automatic
//!   truncation convergence ([`exactdiag`]),
//! - **AA**: the adiabatic approximation built on spin-dependent displaced
//!   oscillators ([`adiabatic`]),
//! - **GAA**: the generalized adiabatic approximation, where the Laguerre
//!   factor of the AA tunnelling strength is replaced by the normalized
//!   constraint polynomial ([`gaa`]).
//!
//! Degenerate (Juddian) points are located exactly from the constraint
//! polynomials ([`constraints`]), and the quantized geometric phase of a
//! level pair around those conical intersections is computed along closed
//! loops in the `(g, ε)` plane ([`berry`]).
//!
//! Each capability has a runnable program under `examples/`; the `aqrm`
//! binary wraps the parameter sweeps in [`cli`].

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod adiabatic;
pub mod berry;
pub mod cli;
pub mod constraints;
pub mod error;
pub mod exactdiag;
pub mod gaa;
pub mod linalg;
pub mod model;

pub use error::{Error, Result};
pub use model::{BlockIndex, ModelParams};

/// Which approximation (or none) produced a spectrum or a tunnelling strength.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Exact,
    Aa,
    Gaa,
    /// GAA with the arctan-bounded constraint factor in place of `K_n^ε`.
    GaaKbar,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Aa => "aa",
            Method::Gaa => "gaa",
            Method::GaaKbar => "gaa-kbar",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Method::Exact),
            "aa" => Ok(Method::Aa),
            "gaa" => Ok(Method::Gaa),
            "gaa-kbar" | "kbar" => Ok(Method::GaaKbar),
            other => Err(Error::InvalidArgument(format!("unknown method `{other}`"))),
        }
    }
}
