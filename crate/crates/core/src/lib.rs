//! Photon-number statistics of photon-added and photon-subtracted squeezed
//! thermal states.
//!
//! The closed forms express normalization constants and photon-number
//! distributions through Legendre-type sequences evaluated in real
//! arithmetic ([`legendre`], [`analytics`]). Every closed-form quantity can
//! be cross-checked against a brute-force density matrix built in a
//! truncated Fock basis ([`oracle`]).

pub mod analytics;
pub mod cli;
pub mod error;
pub mod legendre;
pub mod oracle;
pub mod scaled;
pub mod state;
pub mod verify;

pub use analytics::{
    expectation_exp_number, mean_photon_number, norm_pasts, norm_pssts, normalization,
    pnd_pasts, pnd_pssts, pnd_table, Distribution, Truncation,
};
pub use error::{Error, Result};
pub use legendre::{genfun_partial_sum, legendre_p, scaled_sequence, ScaledLegendreSequence};
pub use scaled::ScaledFloat;
pub use state::{coefficients, validate_params, CoefficientSet, StateParams, Variant};
