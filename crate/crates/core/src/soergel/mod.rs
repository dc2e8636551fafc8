//! Abe's graded Hecke category over a prime field or the rationals, and the
//! p-canonical basis obtained by decomposing Bott–Samelson bimodules.

use thiserror::Error;

use crate::weyl::WeylError;

pub mod algebra;
pub mod bimodule;
pub mod hom;
pub mod pcan;
pub mod persist;
pub mod realization;
pub mod split;

pub use bimodule::{b_object, bott_samelson, bs_character, f_object, tensor, Bimodule, Label};
pub use realization::Realization;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SoergelError {
    #[error("no δ_s exists for simple reflection {0}: the coroot vanishes in this characteristic")]
    NoDelta(usize),
    #[error("degenerate realization: {0}")]
    DegenerateRealization(String),
    #[error("Hom degree {degree} lies outside the solver window ±{window}")]
    DegreeOutOfWindow { degree: i32, window: i32 },
    #[error("the endomorphism algebra only splits over an extension of degree {degree}")]
    SplitOverExtensionNeeded { degree: usize },
    #[error("summand identification failed: {0}")]
    IdentificationFailure(String),
    #[error("bimodules come from different realizations")]
    RealizationMismatch,
    #[error("cache error: {0}")]
    Cache(String),
    #[error(transparent)]
    Weyl(#[from] WeylError),
}
